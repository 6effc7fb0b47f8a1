//! Scalar hyperbolic equations, CR-structured systems and point transforms.
//!
//! A scalar equation `w_{z1 z2} + α w_{z1} + β w_{z2} + γ w = 0` may carry
//! complex coefficients; splitting them gives the CR system
//!
//! ```text
//! u_tx + α1 u_t - α2 v_t + β1 u_x - β2 v_x + γ1 u - γ2 v = 0
//! v_tx + α2 u_t + α1 v_t + β2 u_x + β1 v_x + γ2 u + γ1 v = 0
//! ```

use std::collections::BTreeMap;
use std::fmt;

use crate::parser::{FileError, ModelFile, ModelKind, Scope, TransformFile};
use crate::symbolic::complex::{cdiv, ComplexExpr, ZeroDivisor};
use crate::symbolic::{
    canonicalize, differentiate, substitute, Bindings, Expr, Symbol, ZeroTester, ZeroVerdict,
};

/// Ordered pair of independent variables plus free parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    pub vars: [String; 2],
    pub params: Vec<String>,
}

impl Frame {
    pub fn new(v1: &str, v2: &str, params: &[&str]) -> Frame {
        Frame {
            vars: [v1.to_string(), v2.to_string()],
            params: params.iter().map(|p| p.to_string()).collect(),
        }
    }

    pub fn first(&self) -> &str {
        &self.vars[0]
    }

    pub fn second(&self) -> &str {
        &self.vars[1]
    }

    pub fn scope(&self) -> Scope {
        Scope::new(&self.vars, &self.params)
    }

    fn merged(&self, vars: &[String; 2], params: &[String]) -> Frame {
        let mut ps = self.params.clone();
        for p in params {
            if !ps.contains(p) {
                ps.push(p.clone());
            }
        }
        Frame {
            vars: vars.clone(),
            params: ps,
        }
    }
}

/// `w_{v1 v2} + α w_{v1} + β w_{v2} + γ w = 0`, coefficients possibly complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalarHyperbolic {
    pub frame: Frame,
    pub alpha: ComplexExpr,
    pub beta: ComplexExpr,
    pub gamma: ComplexExpr,
}

/// The CR-structured system, coefficients `[α1, α2, β1, β2, γ1, γ2]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CRSystem {
    pub frame: Frame,
    pub alpha1: Expr,
    pub alpha2: Expr,
    pub beta1: Expr,
    pub beta2: Expr,
    pub gamma1: Expr,
    pub gamma2: Expr,
}

/// The general linear system with coefficients `a1..a4`, `b1..b4`, `c1..c4`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralSystem {
    pub frame: Frame,
    pub a: [Expr; 4],
    pub b: [Expr; 4],
    pub c: [Expr; 4],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Model {
    Scalar(ScalarHyperbolic),
    System(CRSystem),
    General(GeneralSystem),
}

impl ScalarHyperbolic {
    pub fn real(frame: Frame, alpha: Expr, beta: Expr, gamma: Expr) -> ScalarHyperbolic {
        ScalarHyperbolic {
            frame,
            alpha: ComplexExpr::real(alpha),
            beta: ComplexExpr::real(beta),
            gamma: ComplexExpr::real(gamma),
        }
    }

    /// True when every imaginary part is the literal zero.
    pub fn is_real(&self) -> bool {
        [&self.alpha, &self.beta, &self.gamma]
            .iter()
            .all(|c| canonicalize(&c.im).is_zero())
    }

    /// Splits complex coefficients into the CR system.
    pub fn realify(&self) -> CRSystem {
        CRSystem {
            frame: self.frame.clone(),
            alpha1: canonicalize(&self.alpha.re),
            alpha2: canonicalize(&self.alpha.im),
            beta1: canonicalize(&self.beta.re),
            beta2: canonicalize(&self.beta.im),
            gamma1: canonicalize(&self.gamma.re),
            gamma2: canonicalize(&self.gamma.im),
        }
    }

    fn coefficients(&self) -> [&ComplexExpr; 3] {
        [&self.alpha, &self.beta, &self.gamma]
    }

    fn map(&self, frame: Frame, f: impl Fn(&ComplexExpr) -> ComplexExpr) -> ScalarHyperbolic {
        ScalarHyperbolic {
            frame,
            alpha: f(&self.alpha),
            beta: f(&self.beta),
            gamma: f(&self.gamma),
        }
    }
}

impl CRSystem {
    pub fn new(frame: Frame, c: [Expr; 6]) -> CRSystem {
        let [alpha1, alpha2, beta1, beta2, gamma1, gamma2] = c;
        CRSystem {
            frame,
            alpha1,
            alpha2,
            beta1,
            beta2,
            gamma1,
            gamma2,
        }
    }

    /// A system whose coefficients are opaque functions `alpha1(t, x)`, ...
    pub fn generic(frame: Frame) -> CRSystem {
        let [v1, v2] = [frame.first().to_string(), frame.second().to_string()];
        let f = |n: &str| Expr::arb(n, &[&v1, &v2]);
        CRSystem::new(frame, COEFFICIENT_NAMES.map(f))
    }

    pub fn coefficients(&self) -> [&Expr; 6] {
        [
            &self.alpha1,
            &self.alpha2,
            &self.beta1,
            &self.beta2,
            &self.gamma1,
            &self.gamma2,
        ]
    }

    pub fn alpha(&self) -> ComplexExpr {
        ComplexExpr::new(self.alpha1.clone(), self.alpha2.clone())
    }

    pub fn beta(&self) -> ComplexExpr {
        ComplexExpr::new(self.beta1.clone(), self.beta2.clone())
    }

    pub fn gamma(&self) -> ComplexExpr {
        ComplexExpr::new(self.gamma1.clone(), self.gamma2.clone())
    }

    /// Recombines the pairs into one complex scalar equation.
    pub fn complexify(&self) -> ScalarHyperbolic {
        ScalarHyperbolic {
            frame: self.frame.clone(),
            alpha: self.alpha(),
            beta: self.beta(),
            gamma: self.gamma(),
        }
    }

    /// Writes the system in the general layout.
    pub fn export(&self) -> GeneralSystem {
        let pack = |re: &Expr, im: &Expr| [re.clone(), canonicalize(&-im), im.clone(), re.clone()];
        GeneralSystem {
            frame: self.frame.clone(),
            a: pack(&self.alpha1, &self.alpha2),
            b: pack(&self.beta1, &self.beta2),
            c: pack(&self.gamma1, &self.gamma2),
        }
    }

    pub fn canonical(&self) -> CRSystem {
        CRSystem::new(self.frame.clone(), self.coefficients().map(canonicalize))
    }
}

/// Coefficient names of a CR system in layout order.
pub const COEFFICIENT_NAMES: [&str; 6] = ["alpha1", "alpha2", "beta1", "beta2", "gamma1", "gamma2"];

/// A failed CR condition, e.g. `a4 ≠ a1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CrViolation {
    pub condition: String,
    pub verdict: ZeroVerdict,
}

impl fmt::Display for CrViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.condition)
    }
}

impl GeneralSystem {
    /// Recognizes the CR pattern: `a4 = a1`, `a3 = -a2` and likewise for `b`, `c`.
    pub fn cr_check(&self, tester: &ZeroTester) -> Result<CRSystem, CrViolation> {
        for (name, v) in [("a", &self.a), ("b", &self.b), ("c", &self.c)] {
            let checks = [
                (format!("{name}4 ≠ {name}1"), &v[3] - &v[0]),
                (format!("{name}3 ≠ -{name}2"), &v[2] + &v[1]),
            ];
            for (condition, diff) in checks {
                let verdict =
                    tester
                        .check(&diff)
                        .unwrap_or(ZeroVerdict::NonZero(crate::symbolic::Witness {
                            point: Vec::new(),
                            value: crate::symbolic::Value::Float(f64::NAN),
                        }));
                if !verdict.holds() {
                    return Err(CrViolation { condition, verdict });
                }
            }
        }
        Ok(CRSystem::new(
            self.frame.clone(),
            [
                self.a[0].clone(),
                self.a[2].clone(),
                self.b[0].clone(),
                self.b[2].clone(),
                self.c[0].clone(),
                self.c[2].clone(),
            ],
        ))
    }
}

/// `z1 = φ(t)`, `z2 = ψ(x)` followed by `w = σ u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointTransform {
    /// Variables of the transformed equation.
    pub vars: [String; 2],
    pub params: Vec<String>,
    pub phi: Expr,
    pub psi: Expr,
    pub sigma: Option<ComplexExpr>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TransformError {
    #[error(transparent)]
    ZeroDivisor(#[from] ZeroDivisor),
    #[error("derivative of {0} vanishes identically")]
    Degenerate(&'static str),
    #[error("general system is not CR-structured ({0})")]
    NotCr(String),
}

impl PointTransform {
    pub fn identity(vars: [String; 2]) -> PointTransform {
        PointTransform {
            phi: Expr::var(&vars[0]),
            psi: Expr::var(&vars[1]),
            vars,
            params: Vec::new(),
            sigma: None,
        }
    }

    /// Pure dependent change `w = σ u` in the variables `vars`.
    pub fn dependent(vars: [String; 2], sigma: ComplexExpr) -> PointTransform {
        PointTransform {
            sigma: Some(sigma),
            ..PointTransform::identity(vars)
        }
    }

    pub fn phi_prime(&self) -> Expr {
        differentiate(&self.phi, &self.vars[0])
    }

    pub fn psi_prime(&self) -> Expr {
        differentiate(&self.psi, &self.vars[1])
    }

    /// True when φ and ψ are the identity on the new variables.
    pub fn is_identity_map(&self, old: &[String; 2]) -> bool {
        self.vars == *old && self.phi == Expr::var(&old[0]) && self.psi == Expr::var(&old[1])
    }

    fn bindings(&self, old: &[String; 2]) -> Bindings {
        [
            (Symbol::name(&old[0]), self.phi.clone()),
            (Symbol::name(&old[1]), self.psi.clone()),
        ]
        .into_iter()
        .collect()
    }

    /// Pulls an expression in the old variables back to the new ones.
    pub fn pull_back(&self, e: &Expr, old: &[String; 2]) -> Expr {
        substitute(e, &self.bindings(old))
    }

    fn check_nondegenerate(&self) -> Result<(Expr, Expr), TransformError> {
        let (p, q) = (self.phi_prime(), self.psi_prime());
        if p.is_zero() {
            return Err(TransformError::Degenerate("phi"));
        }
        if q.is_zero() {
            return Err(TransformError::Degenerate("psi"));
        }
        Ok((p, q))
    }
}

impl From<TransformFile> for PointTransform {
    fn from(f: TransformFile) -> PointTransform {
        PointTransform {
            vars: f.vars,
            params: f.params,
            phi: f.phi,
            psi: f.psi,
            sigma: f.sigma.map(|(a, b)| ComplexExpr::new(a, b)),
        }
    }
}

impl From<&PointTransform> for TransformFile {
    fn from(t: &PointTransform) -> TransformFile {
        TransformFile {
            vars: t.vars.clone(),
            params: t.params.clone(),
            phi: t.phi.clone(),
            psi: t.psi.clone(),
            sigma: t.sigma.as_ref().map(|s| (s.re.clone(), s.im.clone())),
        }
    }
}

/// New coefficients after `z1 = φ`, `z2 = ψ`:
/// `α ↦ α∘(φ,ψ)·ψ′`, `β ↦ β∘(φ,ψ)·φ′`, `γ ↦ γ∘(φ,ψ)·φ′ψ′`.
fn independent_law(
    [alpha, beta, gamma]: [&ComplexExpr; 3],
    old: &[String; 2],
    tr: &PointTransform,
) -> Result<[ComplexExpr; 3], TransformError> {
    let (p, q) = tr.check_nondegenerate()?;
    let b = tr.bindings(old);
    let pull = |c: &ComplexExpr, w: &Expr| c.map(|e| canonicalize(&(substitute(e, &b) * w)));
    Ok([pull(alpha, &q), pull(beta, &p), pull(gamma, &(&p * &q))])
}

/// `α ↦ α + σ_{v2}/σ`, `β ↦ β + σ_{v1}/σ`,
/// `γ ↦ γ + (σ_{v1 v2} + α σ_{v1} + β σ_{v2})/σ`.
fn dependent_law(
    [alpha, beta, gamma]: [&ComplexExpr; 3],
    vars: &[String; 2],
    sigma: &ComplexExpr,
) -> Result<[ComplexExpr; 3], ZeroDivisor> {
    let d = |c: &ComplexExpr, v: &str| c.map(|e| differentiate(e, v));
    let s1 = d(sigma, &vars[0]);
    let s2 = d(sigma, &vars[1]);
    let s12 = d(&s1, &vars[1]);
    let a = cdiv(&s2, sigma)?;
    let b = cdiv(&s1, sigma)?;
    let g = cdiv(&(&(&s12 + &(alpha * &s1)) + &(beta * &s2)), sigma)?;
    Ok([
        (alpha + &a).canonical(),
        (beta + &b).canonical(),
        (gamma + &g).canonical(),
    ])
}

/// Something a point transform acts on.
pub trait Transformable: Sized {
    fn apply_independent(&self, tr: &PointTransform) -> Result<Self, TransformError>;
    fn apply_dependent(&self, sigma: &ComplexExpr) -> Result<Self, TransformError>;

    /// Independent part first, then the multiplier in the new variables.
    fn apply(&self, tr: &PointTransform) -> Result<Self, TransformError> {
        let m = self.apply_independent(tr)?;
        match &tr.sigma {
            Some(s) => m.apply_dependent(s),
            None => Ok(m),
        }
    }
}

impl Transformable for ScalarHyperbolic {
    fn apply_independent(&self, tr: &PointTransform) -> Result<Self, TransformError> {
        let [alpha, beta, gamma] = independent_law(self.coefficients(), &self.frame.vars, tr)?;
        Ok(ScalarHyperbolic {
            frame: self.frame.merged(&tr.vars, &tr.params),
            alpha,
            beta,
            gamma,
        })
    }

    fn apply_dependent(&self, sigma: &ComplexExpr) -> Result<Self, TransformError> {
        let [alpha, beta, gamma] = dependent_law(self.coefficients(), &self.frame.vars, sigma)?;
        Ok(ScalarHyperbolic {
            frame: self.frame.clone(),
            alpha,
            beta,
            gamma,
        })
    }
}

impl Transformable for CRSystem {
    fn apply_independent(&self, tr: &PointTransform) -> Result<Self, TransformError> {
        Ok(self.complexify().apply_independent(tr)?.realify())
    }

    fn apply_dependent(&self, sigma: &ComplexExpr) -> Result<Self, TransformError> {
        Ok(self.complexify().apply_dependent(sigma)?.realify())
    }
}

impl ScalarHyperbolic {
    pub fn canonical(&self) -> ScalarHyperbolic {
        self.map(self.frame.clone(), ComplexExpr::canonical)
    }
}

// ---------------------------------------------------------------------------
// File conversion

fn frame_of(f: &ModelFile) -> Frame {
    Frame {
        vars: f.vars.clone(),
        params: f.params.clone(),
    }
}

impl From<&ModelFile> for Model {
    fn from(f: &ModelFile) -> Model {
        let c = |k: &str| f.coefficients[k].clone();
        let frame = frame_of(f);
        match f.kind {
            ModelKind::Scalar => Model::Scalar(ScalarHyperbolic::real(
                frame,
                c("alpha"),
                c("beta"),
                c("gamma"),
            )),
            ModelKind::ScalarComplex => Model::Scalar(ScalarHyperbolic {
                frame,
                alpha: ComplexExpr::new(c("alpha_re"), c("alpha_im")),
                beta: ComplexExpr::new(c("beta_re"), c("beta_im")),
                gamma: ComplexExpr::new(c("gamma_re"), c("gamma_im")),
            }),
            ModelKind::CrSystem => Model::System(CRSystem::new(frame, COEFFICIENT_NAMES.map(c))),
            ModelKind::GeneralSystem => {
                let row = |p: &str| [1, 2, 3, 4].map(|i| c(&format!("{p}{i}")));
                Model::General(GeneralSystem {
                    frame,
                    a: row("a"),
                    b: row("b"),
                    c: row("c"),
                })
            }
        }
    }
}

impl Model {
    pub fn from_text(text: &str) -> Result<Model, FileError> {
        Ok(Model::from(&crate::parser::parse_model(text)?))
    }

    pub fn frame(&self) -> &Frame {
        match self {
            Model::Scalar(s) => &s.frame,
            Model::System(s) => &s.frame,
            Model::General(g) => &g.frame,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Model::Scalar(s) if s.is_real() => "scalar",
            Model::Scalar(_) => "scalar-complex",
            Model::System(_) => "cr-system",
            Model::General(_) => "general-system",
        }
    }

    /// The model as a CR system when it is one or splits into one.
    pub fn as_system(&self) -> Option<CRSystem> {
        match self {
            Model::System(s) => Some(s.clone()),
            Model::Scalar(s) if !s.is_real() => Some(s.realify()),
            _ => None,
        }
    }

    pub fn to_file(&self) -> ModelFile {
        let frame = self.frame();
        let mut coefficients = BTreeMap::new();
        let mut put = |k: &str, e: &Expr| {
            coefficients.insert(k.to_string(), e.clone());
        };
        let kind = match self {
            Model::Scalar(s) if s.is_real() => {
                put("alpha", &s.alpha.re);
                put("beta", &s.beta.re);
                put("gamma", &s.gamma.re);
                ModelKind::Scalar
            }
            Model::Scalar(s) => {
                for (k, c) in [("alpha", &s.alpha), ("beta", &s.beta), ("gamma", &s.gamma)] {
                    put(&format!("{k}_re"), &c.re);
                    put(&format!("{k}_im"), &c.im);
                }
                ModelKind::ScalarComplex
            }
            Model::System(s) => {
                for (k, e) in COEFFICIENT_NAMES.iter().zip(s.coefficients()) {
                    put(k, e);
                }
                ModelKind::CrSystem
            }
            Model::General(g) => {
                for (p, row) in [("a", &g.a), ("b", &g.b), ("c", &g.c)] {
                    for (i, e) in row.iter().enumerate() {
                        put(&format!("{p}{}", i + 1), e);
                    }
                }
                ModelKind::GeneralSystem
            }
        };
        ModelFile {
            kind,
            vars: frame.vars.clone(),
            params: frame.params.clone(),
            coefficients,
        }
    }

    pub fn apply(&self, tr: &PointTransform) -> Result<Model, TransformError> {
        match self {
            Model::Scalar(s) => Ok(Model::Scalar(s.apply(tr)?)),
            Model::System(s) => Ok(Model::System(s.apply(tr)?)),
            Model::General(g) => {
                // only the CR subclass has a transformation law here
                let cr = g
                    .cr_check(&ZeroTester::default())
                    .map_err(|v| TransformError::NotCr(v.condition))?;
                Ok(Model::General(cr.apply(tr)?.export()))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_in;

    fn e(s: &str, params: &[&str]) -> Expr {
        parse_in(s, &["t", "x"], params).unwrap()
    }

    #[test]
    fn export_then_check_round_trips() {
        let p = ["a1", "a2", "b1", "b2", "c1", "c2"];
        let s = CRSystem::new(Frame::new("t", "x", &p), p.map(|n| e(n, &p)));
        let back = s.export().cr_check(&ZeroTester::default()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn non_cr_layout_reports_first_violation() {
        let z = Expr::zero();
        let g = GeneralSystem {
            frame: Frame::new("t", "x", &[]),
            a: [Expr::one(), z.clone(), z.clone(), Expr::int(2)],
            b: [z.clone(), z.clone(), z.clone(), z.clone()],
            c: [z.clone(), z.clone(), z.clone(), z],
        };
        let v = g.cr_check(&ZeroTester::default()).unwrap_err();
        assert_eq!(v.condition, "a4 ≠ a1");
    }

    #[test]
    fn identity_and_unit_multiplier_change_nothing() {
        let p = ["a", "b", "c"];
        let s = ScalarHyperbolic::real(
            Frame::new("t", "x", &p),
            e("a - 1/x", &p),
            e("b + 2/t", &p),
            e("c", &p),
        )
        .canonical();
        let id = PointTransform::identity(s.frame.vars.clone());
        assert_eq!(s.apply(&id).unwrap(), s);
        assert_eq!(s.apply_dependent(&ComplexExpr::one()).unwrap(), s);
    }

    #[test]
    fn multiplier_removes_first_order_terms() {
        // σ = x/t² removes the variable parts of the coefficients
        let p = ["a", "b", "c"];
        let s = ScalarHyperbolic::real(
            Frame::new("t", "x", &p),
            e("a - 1/x", &p),
            e("b + 2/t", &p),
            e("c - b/x + 2*a/t - 2/(t*x)", &p),
        );
        let sigma = ComplexExpr::real(e("x/t^2", &p));
        let out = s.apply_dependent(&sigma).unwrap();
        assert_eq!(out.alpha.re, Expr::param("a"));
        assert_eq!(out.beta.re, Expr::param("b"));
        assert_eq!(out.gamma.re, Expr::param("c"));
    }
}
