//! Invariant formulas as typeset, in the expression grammar.
//!
//! Subscripts `_t`, `_x` stand for derivatives by the first and second
//! independent variable of whatever model the formula is applied to.

/// One printed entry: identifier, formula, and the denominators whose
/// identical vanishing makes the entry undefined.
pub struct Printed {
    pub id: &'static str,
    pub text: String,
    pub denominators: Vec<String>,
}

fn entry(id: &'static str, text: impl Into<String>, dens: &[&str]) -> Printed {
    Printed {
        id,
        text: text.into(),
        denominators: dens.iter().map(|d| d.to_string()).collect(),
    }
}

pub fn scalar_semi_dep() -> Vec<Printed> {
    vec![
        entry("h", "alpha_t + alpha*beta - gamma", &[]),
        entry("k", "beta_x + alpha*beta - gamma", &[]),
    ]
}

pub fn scalar_semi_indep() -> Vec<Printed> {
    vec![
        entry("I1", "gamma/(alpha*beta)", &["alpha*beta"]),
        entry("I2", "alpha*beta/alpha_t", &["alpha_t"]),
        entry("I3", "beta_x/alpha_t", &["alpha_t"]),
        entry("I4", "gamma/alpha_t", &["alpha_t"]),
        entry(
            "I5",
            "alpha*(beta*gamma_t - gamma*beta_t)/(beta*alpha_t^2)",
            &["beta", "alpha_t"],
        ),
        entry(
            "I6",
            "(alpha*gamma_x - gamma*alpha_x)/(alpha^2*alpha_t)",
            &["alpha", "alpha_t"],
        ),
    ]
}

/// Joint invariants in terms of `h`, `k` and their derivatives.
pub fn scalar_joint() -> Vec<Printed> {
    let h = &["h"];
    vec![
        entry("J1", "k/h", h),
        entry("J2", "(h*k_t - k*h_t)*(h*k_x - k*h_x)/h^5", h),
        entry("J3", "(k*h_t_x + h*k_t_x - h_t*k_x - h_x*k_t)/h^3", h),
        entry(
            "J4",
            "(h*k_x - k*h_x)^2*(h*k*h_t_t - h^2*k_t_t - 3*k*h_t^2 + 3*h*h_t*k_t)/h^9",
            h,
        ),
        entry(
            "J5",
            "(h*k_t - k*h_t)^2*(h*k*h_x_x - h^2*k_x_x - 3*k*h_x^2 + 3*h*h_x*k_x)/h^9",
            h,
        ),
        entry("J6", "k*(h*h_t_x - h_t*h_x)/h^4", h),
    ]
}

pub fn system_semi_dep() -> Vec<Printed> {
    vec![
        entry("h1", "alpha1_t + alpha1*beta1 - alpha2*beta2 - gamma1", &[]),
        entry("h2", "alpha2_t + alpha1*beta2 + alpha2*beta1 - gamma2", &[]),
        entry("k1", "beta1_x + alpha1*beta1 - alpha2*beta2 - gamma1", &[]),
        entry("k2", "beta2_x + alpha1*beta2 + alpha2*beta1 - gamma2", &[]),
    ]
}

pub fn system_semi_indep_real() -> Vec<Printed> {
    let ab = &["alpha1", "beta1"];
    vec![
        entry("I1r", "alpha2/alpha1", &["alpha1"]),
        entry("I2r", "beta2/beta1", &["beta1"]),
        entry("I3r", "gamma1/(alpha1*beta1)", ab),
        entry("I4r", "gamma2/(alpha1*beta1)", ab),
        entry("I5r", "alpha1_t/(alpha1*beta1)", ab),
        entry("I6r", "alpha2_t/(alpha1*beta1)", ab),
        entry("I7r", "beta1_x/(alpha1*beta1)", ab),
        entry("I8r", "beta2_x/(alpha1*beta1)", ab),
        entry("I9r", "(beta1*beta2_t - beta2*beta1_t)/beta1^3", &["beta1"]),
        entry(
            "I10r",
            "(beta1*gamma1_t - gamma1*beta1_t)/(alpha1*beta1^3)",
            ab,
        ),
        entry(
            "I11r",
            "(beta1*gamma2_t - gamma2*beta1_t)/(alpha1*beta1^3)",
            ab,
        ),
        entry(
            "I12r",
            "(alpha1*alpha2_x - alpha2*alpha1_x)/alpha1^3",
            &["alpha1"],
        ),
        entry(
            "I13r",
            "(alpha1*gamma1_x - gamma1*alpha1_x)/(alpha1^3*beta1)",
            ab,
        ),
        entry(
            "I14r",
            "(alpha1*gamma2_x - gamma2*alpha1_x)/(alpha1^3*beta1)",
            ab,
        ),
    ]
}

/// Joint invariants in terms of `h1`, `h2`, `k1`, `k2`.
pub fn system_joint_real() -> Vec<Printed> {
    let h = &["h1"];
    vec![
        entry("J1r", "h2/h1", h),
        entry("J2r", "k1/h1", h),
        entry("J3r", "k2/h1", h),
    ]
}

const A_SQ: &str = "(alpha1^2 + alpha2^2)";
const B_SQ: &str = "(beta1^2 + beta2^2)";
const AT_SQ: &str = "(alpha1_t^2 + alpha2_t^2)";
const G1: &str = "(beta1*gamma1_t - beta2*gamma2_t - gamma1*beta1_t + gamma2*beta2_t)";
const G2: &str = "(beta2*gamma1_t + beta1*gamma2_t - gamma2*beta1_t - gamma1*beta2_t)";
const K1: &str = "(alpha1*gamma1_x - alpha2*gamma2_x - gamma1*alpha1_x + gamma2*alpha2_x)";
const K2: &str = "(alpha2*gamma1_x + alpha1*gamma2_x - gamma2*alpha1_x - gamma1*alpha2_x)";

pub fn system_semi_indep_complex() -> Vec<Printed> {
    let ab = format!("({A_SQ}*{B_SQ})");
    let d9 = format!("({AT_SQ}^2*{B_SQ})");
    let d11 = format!("({AT_SQ}*{A_SQ}^2)");
    let i9 = format!(
        "(alpha1_t^2 - alpha2_t^2)/{d9}*(alpha1*beta1*{G1} - alpha2*beta1*{G2} \
         + alpha2*beta2*{G1} + alpha1*beta2*{G2}) \
         + 2*alpha1_t*alpha2_t/{d9}*(alpha2*beta1*{G1} + alpha1*beta1*{G2} \
         - alpha1*beta2*{G1} + alpha2*beta2*{G2})"
    );
    let i10 = format!(
        "(alpha1_t^2 - alpha2_t^2)/{d9}*(alpha2*beta1*{G1} + alpha1*beta1*{G2} \
         - alpha1*beta2*{G1} + alpha2*beta2*{G2}) \
         - 2*alpha1_t*alpha2_t/{d9}*(alpha1*beta1*{G1} - alpha2*beta1*{G2} \
         + alpha2*beta2*{G1} + alpha1*beta2*{G2})"
    );
    let i11 = format!(
        "(alpha1^2 - alpha2^2)/{d11}*({K1}*alpha1_t + {K2}*alpha2_t) \
         + 2*alpha1*alpha2/{d11}*({K2}*alpha1_t - {K1}*alpha2_t)"
    );
    let i12 = format!(
        "(alpha1^2 - alpha2^2)/{d11}*({K2}*alpha1_t - {K1}*alpha2_t) \
         - 2*alpha1*alpha2/{d11}*({K1}*alpha1_t + {K2}*alpha2_t)"
    );
    let dab: &[&str] = &[A_SQ, B_SQ];
    let dat: &[&str] = &[AT_SQ];
    vec![
        entry(
            "I1c",
            format!(
                "((alpha1*gamma1 + alpha2*gamma2)*beta1 + (alpha1*gamma2 - alpha2*gamma1)*beta2)/{ab}"
            ),
            dab,
        ),
        entry(
            "I2c",
            format!(
                "((alpha1*gamma2 - alpha2*gamma1)*beta1 - (alpha1*gamma1 + alpha2*gamma2)*beta2)/{ab}"
            ),
            dab,
        ),
        entry(
            "I3c",
            format!(
                "((alpha1*beta1 - alpha2*beta2)*alpha1_t + (alpha2*beta1 + alpha1*beta2)*alpha2_t)/{AT_SQ}"
            ),
            dat,
        ),
        entry(
            "I4c",
            format!(
                "((alpha2*beta1 + alpha1*beta2)*alpha1_t - (alpha1*beta1 - alpha2*beta2)*alpha2_t)/{AT_SQ}"
            ),
            dat,
        ),
        entry(
            "I5c",
            format!("(alpha1_t*beta1_x + alpha2_t*beta2_x)/{AT_SQ}"),
            dat,
        ),
        entry(
            "I6c",
            format!("(alpha1_t*beta2_x - alpha2_t*beta1_x)/{AT_SQ}"),
            dat,
        ),
        entry(
            "I7c",
            format!("(alpha1_t*gamma1 + alpha2_t*gamma2)/{AT_SQ}"),
            dat,
        ),
        entry(
            "I8c",
            format!("(alpha1_t*gamma2 - alpha2_t*gamma1)/{AT_SQ}"),
            dat,
        ),
        entry("I9c", i9, &[AT_SQ, B_SQ]),
        entry("I10c", i10, &[AT_SQ, B_SQ]),
        entry("I11c", i11, &[AT_SQ, A_SQ]),
        entry("I12c", i12, &[AT_SQ, A_SQ]),
    ]
}

const P3: &str = "(h1^3 - 3*h1*h2^2)";
const Q3: &str = "(3*h1^2*h2 - h2^3)";
const P4: &str = "(-6*h1^2*h2^2 + h1^4 + h2^4)";
const Q4: &str = "(4*h1^3*h2 - 4*h1*h2^3)";
const P5: &str = "(h1^5 - 10*h1^3*h2^2 + 5*h1*h2^4)";
const Q5: &str = "(5*h1^4*h2 - 10*h1^2*h2^3 + h2^5)";

pub const MU1: &str = "h1^9 - 36*h1^7*h2^2 + 126*h1^5*h2^4 - 84*h1^3*h2^6 + 9*h1*h2^8";
pub const MU2: &str = "9*h1^8*h2 - 84*h1^6*h2^3 + 126*h1^4*h2^5 - 36*h1^2*h2^7 + h2^9";

pub const NU1: &str = "k2^2*h2_x^2 + 2*h1*k2_x*k1*h2_x - 2*h2*k2_x*k2*h2_x \
    + 2*h2*k1_x*k1*h2_x - 4*k1*h1_x*k2*h2_x - k1^2*h2_x^2 + h2^2*k2_x^2 \
    + 2*h2*k1_x*k2*h1_x - 2*h1*k1_x*k1*h1_x + 2*h2*k2_x*k1*h1_x + k1^2*h1_x^2 \
    + h1^2*k1_x^2 + 2*h1*k2_x*k2*h1_x - h2^2*k1_x^2 - 4*h1*k1_x*h2*k2_x \
    - h1^2*k2_x^2 - k2^2*h1_x^2 + 2*h1*k1_x*k2*h2_x";
pub const NU2: &str = "-2*k2*h2_x^2*k1 - 2*h1*k1_x*k1*h2_x - 2*k1*h1_x*h1*k2_x \
    + 2*h2*k2_x*k2*h1_x - 2*k2^2*h2_x*h1_x + 2*h2*k2_x*k1*h2_x \
    + 2*k2*h2_x*h2*k1_x - 2*h2^2*k2_x*k1_x + 2*k2*h2_x*h1*k2_x \
    + 2*h1*k1_x^2*h2 - 2*h1*k1_x*k2*h1_x - 2*h2*k2_x^2*h1 \
    + 2*h1^2*k1_x*k2_x + 2*k1*h1_x^2*k2 - 2*k1*h1_x*h2*k1_x + 2*k1^2*h1_x*h2_x";
pub const NU3: &str = "-2*h2*k2_t*k2*h2_t - k1^2*h2_t^2 + 2*h2*k1_t*k2*h1_t \
    - h2^2*k1_t^2 + 2*h2*k2_t*k1*h1_t + h1^2*k1_t^2 - 2*h1*k1_t*k1*h1_t \
    + k1^2*h1_t^2 + k2^2*h2_t^2 - 4*h1*k2_t*h2*k1_t - k2^2*h1_t^2 \
    + 2*h1*k1_t*k2*h2_t + 2*h1*k2_t*k1*h2_t - h1^2*k2_t^2 \
    - 4*k1*h1_t*k2*h2_t + 2*h2*k1_t*k1*h2_t + 2*h1*k2_t*k2*h1_t + h2^2*k2_t^2";
pub const NU4: &str = "2*h2*k2_t*k2*h1_t + 2*h1*k1_t^2*h2 + 2*h1*k2_t*k2*h2_t \
    + 2*k1*h1_t^2*k2 - 2*h1*k2_t*k1*h1_t + 2*h1^2*k1_t*k2_t \
    - 2*k1*h2_t^2*k2 - 2*h2^2*k1_t*k2_t + 2*h2*k2_t*k1*h2_t \
    + 2*h2*k1_t*k2*h2_t + 2*k1^2*h1_t*h2_t - 2*k2^2*h1_t*h2_t \
    - 2*h2*k1_t*k1*h1_t - 2*h1*k1_t*k1*h2_t - 2*h1*k1_t*k2*h1_t - 2*h1*k2_t^2*h2";

fn omega(v: &str) -> [String; 2] {
    [
        format!(
            "(h1*k1 - h2*k2)*h1_{v}_{v} - (h2*k1 + h1*k2)*h2_{v}_{v} + (-h1^2 + h2^2)*k1_{v}_{v} \
             + 2*h1*h2*k2_{v}_{v} - 3*k1*(h1_{v}^2 - h2_{v}^2) + 6*k2*h1_{v}*h2_{v} \
             + (3*h1*h1_{v} - 3*h2*h2_{v})*k1_{v} - (3*h2*h1_{v} + 3*h1*h2_{v})*k2_{v}"
        ),
        format!(
            "(h2*k1 + h1*k2)*h1_{v}_{v} + (h1*k1 - h2*k2)*h2_{v}_{v} + (-h1^2 + h2^2)*k2_{v}_{v} \
             - 2*h1*h2*k1_{v}_{v} - 3*k2*(h1_{v}^2 - h2_{v}^2) - 6*k1*h1_{v}*h2_{v} \
             + (3*h2*h1_{v} + 3*h1*h2_{v})*k1_{v} + (3*h1*h1_{v} - 3*h2*h2_{v})*k2_{v}"
        ),
    ]
}

/// `mu1, mu2, nu1..nu4, omega1..omega4` in that order.
pub fn intermediates() -> Vec<(&'static str, String)> {
    let [o1, o2] = omega("t");
    let [o3, o4] = omega("x");
    vec![
        ("mu1", MU1.into()),
        ("mu2", MU2.into()),
        ("nu1", NU1.into()),
        ("nu2", NU2.into()),
        ("nu3", NU3.into()),
        ("nu4", NU4.into()),
        ("omega1", o1),
        ("omega2", o2),
        ("omega3", o3),
        ("omega4", o4),
    ]
}

pub fn system_joint_complex() -> Vec<Printed> {
    let a1 = "(h1*k1_t - h2*k2_t - k1*h1_t + k2*h2_t)";
    let a2 = "(h2*k1_t + h1*k2_t - k2*h1_t - k1*h2_t)";
    // the last terms of J13 and J14 carry their own variants of a2
    let a2_j13 = "(h2*k1_t + h1*k2_t - k1*h1_t - k2*h2_t)";
    let a2_j14 = "(h2*k1_t + h1*k2_t - k1*h1_t - k1*h2_t)";
    let b1 = "(h1*k1_x - h2*k2_x - k1*h1_x + k2*h2_x)";
    let b2 = "(h2*k1_x + h1*k2_x - k2*h1_x - k1*h2_x)";
    let d5 = format!("({P5}^2 + {Q5}^2)");
    let j13 = format!(
        "{P5}*{a1}/{d5}*{b1} + {Q5}*{a2}/{d5}*{b1} + {Q5}*{a1}/{d5}*{b2} + {P5}*{a2_j13}/{d5}*{b2}"
    );
    let j14 = format!(
        "-{Q5}*{a1}/{d5}*{b1} + {P5}*{a2}/{d5}*{b1} + {P5}*{a1}/{d5}*{b2} + {Q5}*{a2_j14}/{d5}*{b2}"
    );
    let c1 = "(k1*h1_t_x - k2*h2_t_x + h1*k1_t_x - h2*k2_t_x - h1_t*k1_x + h2_t*k2_x \
              - h1_x*k1_t + h2_x*k2_t)";
    let c2 = "(k2*h1_t_x + k1*h2_t_x + h2*k1_t_x + h1*k2_t_x - h2_t*k1_x - h1_t*k2_x \
              - h2_x*k1_t - h1_x*k2_t)";
    let d3 = format!("({P3}^2 + {Q3}^2)");
    let j15 = format!("{P3}*{c1}/{d3} + {Q3}*{c2}/{d3}");
    let j16 = format!("{Q3}*{c1}/{d3} + {P3}*{c2}/{d3}");
    let e1 = "(h1*h1_t_x - h2*h2_t_x - h1_t*h1_x + h2_t*h2_x)";
    let e2 = "(h2*h1_t_x + h1*h2_t_x - h2_t*h1_x - h1_t*h2_x)";
    let d4 = format!("({P4}^2 + {Q4}^2)");
    let r = format!("(k1*{P4} + k2*{Q4})");
    let s = format!("(k2*{P4} - k1*{Q4})");
    let j17 = format!("{r}/{d4}*{e1} - {s}/{d4}*{e2}");
    let j18 = format!("{s}/{d4}*{e1} + {r}/{d4}*{e2}");
    let dm = "(mu1^2 + mu2^2)";
    let j19 = format!("(mu1*nu1 + mu2*nu2)/{dm}*omega1 + (mu2*nu1 - mu1*nu2)/{dm}*omega2");
    let j20 = format!("(mu1*nu2 - mu2*nu1)/{dm}*omega1 + (mu1*nu1 + mu2*nu2)/{dm}*omega2");
    let j21 = format!("(mu1*nu3 + mu2*nu4)/{dm}*omega3 + (mu2*nu3 - mu1*nu4)/{dm}*omega4");
    let j22 = format!("(mu1*nu4 - mu2*nu3)/{dm}*omega3 + (mu1*nu3 + mu2*nu4)/{dm}*omega4");
    let k_sq: &[&str] = &["k1^2 + k2^2"];
    let h_sq: &[&str] = &["h1^2 + h2^2"];
    vec![
        entry("J11", "(h1*k1 + h2*k2)/(k1^2 + k2^2)", k_sq),
        entry("J12", "(h2*k1 - h1*k2)/(k1^2 + k2^2)", k_sq),
        entry("J13", j13, h_sq),
        entry("J14", j14, h_sq),
        entry("J15", j15, h_sq),
        entry("J16", j16, h_sq),
        entry("J17", j17, h_sq),
        entry("J18", j18, h_sq),
        entry("J19", j19, h_sq),
        entry("J20", j20, h_sq),
        entry("J21", j21, h_sq),
        entry("J22", j22, h_sq),
    ]
}
