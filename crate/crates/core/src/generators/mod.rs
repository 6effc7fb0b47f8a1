//! Infinitesimal generators of the equivalence groups, their prolongations,
//! and annihilation checks against invariant formulas.
//!
//! Coordinates of a coefficient space are jets of the coefficient functions
//! in the generic `t, x` frame, the same symbols [`crate::invariants::formula`]
//! produces, so printed invariants can be fed straight to [`apply`].

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use serde_json::{json, Value as Json};

use crate::invariants::formulas;
use crate::parser::{parse_expression, Scope};
use crate::symbolic::{
    canonicalize, derivative, partial, solve_affine, substitute_raw, try_canonicalize, Bindings,
    Expr, Jet, SolveError, Symbol, ZeroTestError, ZeroTester, ZeroVerdict,
};

const VARS: [&str; 2] = ["t", "x"];

/// Names of the built-in generators.
pub const CATALOG: [&str; 11] = [
    "scalar-dep",
    "scalar-indep",
    "scalar-joint",
    "system-dep",
    "system-indep",
    "cplx-dep-1",
    "cplx-dep-2",
    "cplx-indep-1",
    "cplx-indep-2",
    "cplx-joint-1",
    "cplx-joint-2",
];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeneratorError {
    #[error("generator is already prolonged to order {0}")]
    AlreadyProlonged(u32),
    #[error("`{0}` is not a coordinate of the (prolonged) coefficient space")]
    UnknownCoordinate(String),
    #[error("constraint cannot be solved for `{symbol}`: {reason}")]
    ConstraintNotSolvable { symbol: String, reason: String },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("generators act on different coefficient spaces")]
    SpaceMismatch,
    #[error(transparent)]
    ZeroTest(#[from] ZeroTestError),
}

/// Coefficient functions, all depending on `t` and `x`, with the pairs that
/// form real and imaginary parts of one complex coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientSpace {
    pub names: Vec<String>,
    pub pairs: Vec<(usize, usize)>,
}

impl CoefficientSpace {
    pub fn real(names: &[&str]) -> CoefficientSpace {
        CoefficientSpace {
            names: names.iter().map(|s| s.to_string()).collect(),
            pairs: Vec::new(),
        }
    }

    /// Names listed as `re, im` pairs.
    pub fn complex(names: &[&str]) -> CoefficientSpace {
        let mut s = CoefficientSpace::real(names);
        s.pairs = (0..names.len() / 2).map(|i| (2 * i, 2 * i + 1)).collect();
        s
    }

    pub fn jet(&self, i: usize, orders: [u32; 2]) -> Jet {
        let mut j = Jet::new(self.names[i].as_str(), &VARS);
        j.orders = orders.to_vec();
        j
    }

    fn partner(&self, i: usize) -> Option<(usize, bool)> {
        self.pairs.iter().find_map(|&(a, b)| {
            if a == i {
                Some((b, true))
            } else if b == i {
                Some((a, false))
            } else {
                None
            }
        })
    }

    fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// Gaussian integer multiplying the coefficient pairs in the prolongation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Weight {
    pub re: i64,
    pub im: i64,
}

impl Weight {
    pub const ONE: Weight = Weight { re: 1, im: 0 };
    pub const MINUS_I: Weight = Weight { re: 0, im: -1 };
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re, self.im) {
            (r, 0) => write!(f, "{r}"),
            (0, i) => write!(f, "{i}i"),
            (r, i) if i < 0 => write!(f, "{r}{i}i"),
            (r, i) => write!(f, "{r}+{i}i"),
        }
    }
}

/// A vector field on the (possibly prolonged) coefficient space.
///
/// `base` holds the printed `∂t`, `∂x` components. `flow` is the change of
/// independent variables that drives the prolongation; it is `base` except
/// where the printed operator carries a normalization factor. The `c_t`
/// component of the prolongation is `D_t φ_c - (w c)_t flow_t`, where `w c`
/// multiplies a complex pair by `weight`.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    pub name: String,
    pub space: CoefficientSpace,
    pub base: [Expr; 2],
    pub flow: [Expr; 2],
    pub weight: Weight,
    pub order: u32,
    pub components: Vec<(Jet, Expr)>,
}

/// Scope of the generic generator frame.
pub fn scope() -> &'static Scope {
    static SCOPE: OnceLock<Scope> = OnceLock::new();
    SCOPE.get_or_init(|| {
        let mut s = Scope::new(&VARS, &[] as &[&str]);
        for n in [
            "alpha", "beta", "gamma", "h", "k", "alpha1", "alpha2", "beta1", "beta2", "gamma1",
            "gamma2", "h1", "h2", "k1", "k2", "eta", "eta1", "eta2", "F3", "F4",
        ] {
            s = s.with_function(n, &VARS);
        }
        s.with_function("xi1", &["t"])
            .with_function("F1", &["t"])
            .with_function("xi2", &["x"])
            .with_function("F2", &["x"])
    })
}

/// Parses generator or invariant text in the generic frame, where `xi1`,
/// `F1` depend on `t` only and `xi2`, `F2` on `x` only.
pub fn parse(text: &str) -> Expr {
    parse_expression(text, scope()).unwrap_or_else(|e| panic!("bad built-in text {text:?}: {e}"))
}

impl VectorField {
    fn build(
        name: &str,
        space: CoefficientSpace,
        base: [&str; 2],
        flow: [&str; 2],
        weight: Weight,
        comps: &[&str],
    ) -> VectorField {
        assert_eq!(comps.len(), space.names.len());
        let components = comps
            .iter()
            .enumerate()
            .map(|(i, c)| (space.jet(i, [0, 0]), parse(c)))
            .collect();
        VectorField {
            name: name.to_string(),
            space,
            base: base.map(parse),
            flow: flow.map(parse),
            weight,
            order: 0,
            components,
        }
    }

    pub fn component(&self, j: &Jet) -> Option<&Expr> {
        self.components.iter().find(|(k, _)| k == j).map(|(_, e)| e)
    }

    /// Sum of two fields on the same space; weights add.
    pub fn plus(&self, other: &VectorField, name: &str) -> Result<VectorField, GeneratorError> {
        if self.space != other.space || self.order != other.order || self.flow != other.flow {
            return Err(GeneratorError::SpaceMismatch);
        }
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|((j, a), (_, b))| (j.clone(), canonicalize(&(a + b))))
            .collect();
        Ok(VectorField {
            name: name.to_string(),
            space: self.space.clone(),
            base: [
                canonicalize(&(&self.base[0] + &other.base[0])),
                canonicalize(&(&self.base[1] + &other.base[1])),
            ],
            flow: self.flow.clone(),
            weight: Weight {
                re: self.weight.re + other.weight.re,
                im: self.weight.im + other.weight.im,
            },
            order: self.order,
            components,
        })
    }

    /// `(w c)` for the coefficient jet of index `i` with the given orders.
    fn weighted(&self, i: usize, orders: [u32; 2]) -> Expr {
        let w = self.weight;
        let own = Expr::jet(self.space.jet(i, orders));
        match self.space.partner(i) {
            None => &Expr::int(w.re) * &own,
            Some((p, is_re)) => {
                let other = Expr::jet(self.space.jet(p, orders));
                // (a + ib)(c1 + i c2) = (a c1 - b c2) + i(a c2 + b c1)
                let sign = if is_re { -w.im } else { w.im };
                &(&Expr::int(w.re) * &own) + &(&Expr::int(sign) * &other)
            }
        }
    }

    fn prolonged_once(&self) -> VectorField {
        let k = self.order;
        let mut next = self.clone();
        next.order = k + 1;
        let flow_t = derivative(&self.flow[0], "t");
        let flow_x = derivative(&self.flow[1], "x");
        for i in 0..self.space.names.len() {
            for a in (0..=k + 1).rev() {
                let b = k + 1 - a;
                let (prev, var, drift) = if a > 0 {
                    ([a - 1, b], "t", &flow_t)
                } else {
                    ([a, b - 1], "x", &flow_x)
                };
                let phi = self
                    .component(&self.space.jet(i, prev))
                    .expect("lower-order component");
                let value = &derivative(phi, var) - &(&self.weighted(i, [a, b]) * drift);
                next.components
                    .push((self.space.jet(i, [a, b]), canonicalize(&value)));
            }
        }
        next
    }
}

/// First prolongation of an unprolonged field.
pub fn prolong1(v: &VectorField) -> Result<VectorField, GeneratorError> {
    if v.order > 0 {
        return Err(GeneratorError::AlreadyProlonged(v.order));
    }
    Ok(v.prolonged_once())
}

/// Prolongation up to total jet order `order`.
pub fn prolong(v: &VectorField, order: u32) -> Result<VectorField, GeneratorError> {
    if v.order > order {
        return Err(GeneratorError::AlreadyProlonged(v.order));
    }
    let mut out = v.clone();
    while out.order < order {
        out = out.prolonged_once();
    }
    Ok(out)
}

/// Action of `v` on a function of the coordinates and of `t`, `x`.
pub fn apply(v: &VectorField, j: &Expr) -> Result<Expr, GeneratorError> {
    let mut terms = Vec::new();
    for s in j.symbols() {
        match &s {
            Symbol::Jet(jet) if v.space.index(&jet.name).is_some() => {
                let Some(phi) = v.component(jet) else {
                    return Err(GeneratorError::UnknownCoordinate(jet.display_name()));
                };
                terms.push(phi * &partial(j, &s));
            }
            Symbol::Name(n) if n.as_ref() == VARS[0] => terms.push(&v.base[0] * &partial(j, &s)),
            Symbol::Name(n) if n.as_ref() == VARS[1] => terms.push(&v.base[1] * &partial(j, &s)),
            _ => {}
        }
    }
    Ok(canonicalize(&Expr::sum(terms)))
}

/// Highest jet order of a coordinate of `space` mentioned by `j`.
pub fn jet_order(space: &CoefficientSpace, j: &Expr) -> u32 {
    j.symbols()
        .iter()
        .filter_map(|s| match s {
            Symbol::Jet(jet) if space.index(&jet.name).is_some() => Some(jet.order()),
            _ => None,
        })
        .max()
        .unwrap_or(0)
}

/// `expr = 0`, eliminated by solving for the coordinate `solve_for`.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub expr: Expr,
    pub solve_for: Expr,
}

/// Whether `apply(v, j)` vanishes on the manifold cut out by `constraints`.
///
/// Constraints are solved in order, each after substituting the earlier
/// solutions. Coordinates are independent, so a solution for `c` does not
/// touch the derivative coordinates of `c`.
pub fn annihilation_check(
    v: &VectorField,
    j: &Expr,
    constraints: &[Constraint],
    tester: &ZeroTester,
) -> Result<ZeroVerdict, GeneratorError> {
    let mut value = apply(v, j)?;
    let mut solved = Bindings::new();
    for c in constraints {
        let expr = pointwise(&c.expr, &solved);
        let sol = solve_affine(&expr, &c.solve_for).map_err(|e| {
            GeneratorError::ConstraintNotSolvable {
                symbol: c.solve_for.to_string(),
                reason: match e {
                    SolveError::NotAffine => "not affine".into(),
                    SolveError::ZeroCoefficient => "coefficient vanishes".into(),
                    SolveError::Canon(e) => e.to_string(),
                },
            }
        })?;
        let Some(sym) = leaf(&c.solve_for) else {
            return Err(GeneratorError::ConstraintNotSolvable {
                symbol: c.solve_for.to_string(),
                reason: "not a coordinate".into(),
            });
        };
        for s in solved.values_mut() {
            *s = pointwise(s, &Bindings::from([(sym.clone(), sol.clone())]));
        }
        solved.insert(sym, sol);
    }
    value = pointwise(&value, &solved);
    if let Ok(c) = try_canonicalize(&value, crate::symbolic::canon::DEFAULT_BUDGET) {
        value = c;
    }
    Ok(tester.check(&value)?)
}

fn leaf(e: &Expr) -> Option<Symbol> {
    let syms = e.symbols();
    (syms.len() == 1 && e.size() == 1).then(|| syms.into_iter().next().unwrap())
}

/// Substitution that binds the listed coordinates only.
fn pointwise(e: &Expr, bindings: &Bindings) -> Expr {
    if bindings.is_empty() {
        return e.clone();
    }
    let mut all = bindings.clone();
    let names: BTreeSet<_> = bindings
        .keys()
        .filter_map(|s| match s {
            Symbol::Jet(j) => Some(j.name.clone()),
            _ => None,
        })
        .collect();
    for s in e.symbols() {
        if let Symbol::Jet(j) = &s {
            if names.contains(&j.name) && !all.contains_key(&s) {
                all.insert(s.clone(), Expr::jet(j.clone()));
            }
        }
    }
    substitute_raw(e, &all)
}

const SCALAR: [&str; 3] = ["alpha", "beta", "gamma"];
const SYSTEM: [&str; 6] = ["alpha1", "alpha2", "beta1", "beta2", "gamma1", "gamma2"];
const HK: [&str; 4] = ["h1", "h2", "k1", "k2"];
const ZERO: [&str; 2] = ["0", "0"];
const XI: [&str; 2] = ["xi1", "xi2"];

/// Looks up a generator by its catalog name.
pub fn catalog(name: &str) -> Result<VectorField, GeneratorError> {
    let scalar = || CoefficientSpace::real(&SCALAR);
    let system = || CoefficientSpace::complex(&SYSTEM);
    let hk = || CoefficientSpace::complex(&HK);
    let half = ["xi1/2", "xi2/2"];
    let v = match name {
        "scalar-dep" => VectorField::build(
            name,
            scalar(),
            ZERO,
            ZERO,
            Weight::ONE,
            &["eta_x", "eta_t", "eta_t_x + alpha*eta_t + beta*eta_x"],
        ),
        "scalar-indep" => VectorField::build(
            name,
            scalar(),
            XI,
            XI,
            Weight::ONE,
            &["-alpha*xi2_x", "-beta*xi1_t", "-gamma*(xi1_t + xi2_x)"],
        ),
        "scalar-joint" => VectorField::build(
            name,
            CoefficientSpace::real(&["h", "k"]),
            XI,
            XI,
            Weight::ONE,
            &["-(xi1_t + xi2_x)*h", "-(xi1_t + xi2_x)*k"],
        ),
        "system-dep" => VectorField::build(
            name,
            system(),
            ZERO,
            ZERO,
            Weight::ONE,
            &[
                "-F3_x",
                "F4_x",
                "-F3_t",
                "F4_t",
                "-(F3_t_x + alpha1*F3_t + alpha2*F4_t + beta1*F3_x + beta2*F4_x)",
                "F4_t_x + alpha1*F4_t - alpha2*F3_t + beta1*F4_x - beta2*F3_x",
            ],
        ),
        "system-indep" => VectorField::build(
            name,
            system(),
            ["F1", "F2"],
            ["F1", "F2"],
            Weight::ONE,
            &[
                "-alpha1*F2_x",
                "-alpha2*F2_x",
                "-beta1*F1_t",
                "-beta2*F1_t",
                "-gamma1*(F1_t + F2_x)",
                "-gamma2*(F1_t + F2_x)",
            ],
        ),
        "cplx-dep-1" => VectorField::build(
            name,
            system(),
            ZERO,
            ZERO,
            Weight::ONE,
            &[
                "eta1_x",
                "eta2_x",
                "eta1_t",
                "eta2_t",
                "eta1_t_x + alpha1*eta1_t - alpha2*eta2_t + beta1*eta1_x - beta2*eta2_x",
                "eta2_t_x + alpha2*eta1_t + alpha1*eta2_t + beta2*eta1_x + beta1*eta2_x",
            ],
        ),
        "cplx-dep-2" => VectorField::build(
            name,
            system(),
            ZERO,
            ZERO,
            Weight::MINUS_I,
            &[
                "eta2_x",
                "-eta1_x",
                "eta2_t",
                "-eta1_t",
                "eta2_t_x + alpha2*eta1_t + alpha1*eta2_t + beta2*eta1_x + beta1*eta2_x",
                "-(eta1_t_x + alpha1*eta1_t - alpha2*eta2_t + beta1*eta1_x - beta2*eta2_x)",
            ],
        ),
        "cplx-indep-1" => VectorField::build(
            name,
            system(),
            ["2*xi1", "2*xi2"],
            XI,
            Weight::ONE,
            &[
                "-alpha1*xi2_x",
                "-alpha2*xi2_x",
                "-beta1*xi1_t",
                "-beta2*xi1_t",
                "-gamma1*(xi1_t + xi2_x)",
                "-gamma2*(xi1_t + xi2_x)",
            ],
        ),
        "cplx-indep-2" => VectorField::build(
            name,
            system(),
            ZERO,
            XI,
            Weight::MINUS_I,
            &[
                "-alpha2*xi2_x",
                "alpha1*xi2_x",
                "-beta2*xi1_t",
                "beta1*xi1_t",
                "-gamma2*(xi1_t + xi2_x)",
                "gamma1*(xi1_t + xi2_x)",
            ],
        ),
        "cplx-joint-1" => VectorField::build(
            name,
            hk(),
            ZERO,
            half,
            Weight::ONE,
            &[
                "-(xi1_t + xi2_x)/2*h1",
                "-(xi1_t + xi2_x)/2*h2",
                "-(xi1_t + xi2_x)/2*k1",
                "-(xi1_t + xi2_x)/2*k2",
            ],
        ),
        "cplx-joint-2" => VectorField::build(
            name,
            hk(),
            ZERO,
            half,
            Weight::MINUS_I,
            &[
                "-(xi1_t + xi2_x)/2*h2",
                "(xi1_t + xi2_x)/2*h1",
                "-(xi1_t + xi2_x)/2*k2",
                "(xi1_t + xi2_x)/2*k1",
            ],
        ),
        _ => return Err(GeneratorError::UnknownGenerator(name.to_string())),
    };
    Ok(v)
}

/// The scaling `h1∂h1 + h2∂h2 + k1∂k1 + k2∂k2` of the real method.
pub fn hk_scaling() -> VectorField {
    VectorField::build(
        "hk-scaling",
        CoefficientSpace::real(&HK),
        ZERO,
        ZERO,
        Weight::ONE,
        &["h1", "h2", "k1", "k2"],
    )
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} (order {}, weight {})",
            self.name, self.order, self.weight
        )?;
        for (v, b) in VARS.iter().zip(&self.base) {
            if !b.is_zero() {
                writeln!(f, "  d/d{v}: {b}")?;
            }
        }
        for (j, e) in &self.components {
            writeln!(f, "  d/d{}: {e}", j.display_name())?;
        }
        Ok(())
    }
}

impl VectorField {
    pub fn to_json(&self) -> Json {
        let comps: serde_json::Map<String, Json> = VARS
            .iter()
            .zip(&self.base)
            .map(|(v, b)| (v.to_string(), json!(b.to_string())))
            .chain(
                self.components
                    .iter()
                    .map(|(j, e)| (j.display_name(), json!(e.to_string()))),
            )
            .collect();
        json!({
            "name": self.name,
            "order": self.order,
            "weight": self.weight.to_string(),
            "components": comps,
        })
    }
}

/// A printed annihilation relation: `generator` applied to `target` vanishes
/// where every entry of `on` vanishes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub group: &'static str,
    pub generator: &'static str,
    pub target: &'static str,
    pub on: Vec<&'static str>,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.group, self.generator, self.target)?;
        if !self.on.is_empty() {
            write!(f, " | {} = 0", self.on.join(" = "))?;
        }
        Ok(())
    }
}

/// Formula text of a system-level entry: `h1`..`k2` or `I1c`..`I12c`.
pub fn entry_text(id: &str) -> Option<String> {
    formulas::system_semi_dep()
        .into_iter()
        .chain(formulas::system_semi_indep_complex())
        .find(|p| p.id == id)
        .map(|p| p.text)
}

/// The coordinate each constrained entry is solved for.
pub fn elimination_symbol(id: &str) -> Option<&'static str> {
    Some(match id {
        "h1" | "k1" | "I1c" | "I7c" => "gamma1",
        "h2" | "k2" | "I2c" | "I8c" => "gamma2",
        "I3c" => "beta1",
        "I4c" => "beta2",
        "I5c" => "beta1_x",
        "I6c" => "beta2_x",
        "I9c" => "gamma1_t",
        "I10c" => "gamma2_t",
        "I11c" => "gamma1_x",
        "I12c" => "gamma2_x",
        _ => return None,
    })
}

/// Generator names allowed in relations: catalog names and the sums `X3`.
pub fn resolve(name: &str) -> Result<VectorField, GeneratorError> {
    match name {
        "cplx-dep-3" => catalog("cplx-dep-1")?.plus(&catalog("cplx-dep-2")?, name),
        "cplx-indep-3" => catalog("cplx-indep-1")?.plus(&catalog("cplx-indep-2")?, name),
        _ => catalog(name),
    }
}

/// The restricted relations for the complex method.
pub fn printed_relations() -> Vec<Relation> {
    let r = |group: &'static str,
             generator: &'static str,
             target: &'static str,
             on: &[&'static str]| Relation {
        group,
        generator,
        target,
        on: on.to_vec(),
    };
    let mut out = vec![
        r("dep-split", "cplx-dep-1", "h1", &["h1"]),
        r("dep-split", "cplx-dep-2", "h2", &["h2"]),
        r("dep-split", "cplx-dep-1", "k1", &["k1"]),
        r("dep-split", "cplx-dep-2", "k2", &["k2"]),
    ];
    for id in ["h1", "h2", "k1", "k2"] {
        out.push(r("dep-sum", "cplx-dep-3", id, &[id]));
    }
    let split: [(&str, &str, &[&str]); 12] = [
        ("cplx-indep-1", "I1c", &["I1c"]),
        ("cplx-indep-2", "I2c", &["I2c"]),
        ("cplx-indep-1", "I3c", &["I3c"]),
        ("cplx-indep-2", "I4c", &["I3c", "I4c"]),
        ("cplx-indep-1", "I5c", &["I5c"]),
        ("cplx-indep-2", "I6c", &["I5c", "I6c"]),
        ("cplx-indep-1", "I7c", &["I7c"]),
        ("cplx-indep-2", "I8c", &["I7c", "I8c"]),
        ("cplx-indep-1", "I9c", &["I9c"]),
        ("cplx-indep-2", "I10c", &["I9c", "I10c"]),
        ("cplx-indep-1", "I11c", &["I11c"]),
        ("cplx-indep-2", "I12c", &["I11c", "I12c"]),
    ];
    let sum: [(&str, &[&str]); 12] = [
        ("I1c", &["I1c"]),
        ("I2c", &["I2c"]),
        ("I3c", &["I3c"]),
        ("I4c", &["I3c", "I4c"]),
        ("I5c", &["I5c"]),
        ("I6c", &["I5c", "I6c"]),
        ("I7c", &["I7c", "I8c"]),
        ("I8c", &["I7c", "I8c"]),
        ("I9c", &["I9c", "I10c"]),
        ("I10c", &["I9c", "I10c"]),
        ("I11c", &["I11c", "I12c"]),
        ("I12c", &["I11c", "I12c"]),
    ];
    for (g, t, on) in split {
        out.push(r("indep-split", g, t, on));
    }
    for (t, on) in sum {
        out.push(r("indep-sum", "cplx-indep-3", t, on));
    }
    out
}

/// Outcome of checking one relation.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationResult {
    pub relation: Relation,
    pub verdict: ZeroVerdict,
}

/// Checks one printed relation on the generic coefficient jets.
pub fn check_relation(rel: &Relation, tester: &ZeroTester) -> Result<ZeroVerdict, GeneratorError> {
    let target = parse(
        &entry_text(rel.target)
            .ok_or_else(|| GeneratorError::UnknownCoordinate(rel.target.to_string()))?,
    );
    let v = resolve(rel.generator)?;
    let v = prolong(&v, jet_order(&v.space, &target).max(1))?;
    let constraints: Vec<Constraint> = rel
        .on
        .iter()
        .map(|id| {
            let sym = elimination_symbol(id)
                .ok_or_else(|| GeneratorError::UnknownCoordinate(id.to_string()))?;
            Ok(Constraint {
                expr: parse(&entry_text(id).expect("known entry")),
                solve_for: parse(sym),
            })
        })
        .collect::<Result<_, GeneratorError>>()?;
    annihilation_check(&v, &target, &constraints, tester)
}

/// Unconstrained checks: each generator against the entries it must kill.
pub fn unconstrained_suite() -> Vec<(&'static str, Vec<(String, String)>)> {
    let texts = |t: Vec<formulas::Printed>| -> Vec<(String, String)> {
        t.into_iter().map(|p| (p.id.to_string(), p.text)).collect()
    };
    vec![
        ("scalar-dep", texts(formulas::scalar_semi_dep())),
        ("scalar-indep", texts(formulas::scalar_semi_indep())),
        ("scalar-joint", texts(formulas::scalar_joint())),
        ("system-dep", texts(formulas::system_semi_dep())),
        ("system-indep", texts(formulas::system_semi_indep_real())),
        ("hk-scaling", texts(formulas::system_joint_real())),
    ]
}

/// Prolongs `v` as far as `j` needs and checks that it kills `j`.
pub fn kills(
    v: &VectorField,
    j: &Expr,
    tester: &ZeroTester,
) -> Result<ZeroVerdict, GeneratorError> {
    let v = prolong(v, jet_order(&v.space, j).max(v.order))?;
    annihilation_check(&v, j, &[], tester)
}
