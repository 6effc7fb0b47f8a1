//! The worked examples as model and transform files, with the values they
//! are expected to reproduce.

use crate::invariants::{Family, Method};
use crate::model::{Model, PointTransform};
use crate::parser::{parse_transform, FileError};

macro_rules! files {
    ($($name:literal),* $(,)?) => {
        /// Every fixture file, by name.
        pub const FILES: &[(&str, &str)] = &[
            $(($name, include_str!(concat!("../fixtures/", $name)))),*
        ];
    };
}

files!(
    "ex1_complex_source.model",
    "ex1_complex_target.model",
    "ex1_source.model",
    "ex1_target.model",
    "ex1_general_source.model",
    "ex1_map.transform",
    "general_noncr.model",
    "ex2_scalar_source.model",
    "ex2_scalar_target.model",
    "ex2_uncoupled_source.model",
    "ex2_uncoupled_target.model",
    "ex2_coupled_source.model",
    "ex2_coupled_target.model",
    "ex2_map.transform",
    "ex3_log_source.model",
    "ex3_log_target.model",
    "ex3_scalar_source.model",
    "ex3_scalar_target.model",
    "ex3_source.model",
    "ex3_target.model",
    "ex3_map.transform",
    "ex4_lambda.model",
    "ex4_unit.model",
    "ex4_scalar_lambda.model",
    "ex4_scalar_unit.model",
    "ex4_map.transform",
    "ex4_inverse.transform",
    "ex5_scalar_source.model",
    "ex5_scalar_target.model",
    "ex5_uncoupled_source.model",
    "ex5_uncoupled_target.model",
    "ex5_coupled_source.model",
    "ex5_coupled_target.model",
    "ex5_map.transform",
    "ex5_map_rescaled.transform",
);

pub fn text(name: &str) -> Option<&'static str> {
    FILES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

/// Parses a bundled model file; panics on unknown names.
pub fn model(name: &str) -> Model {
    let t = text(name).unwrap_or_else(|| panic!("no fixture {name}"));
    Model::from_text(t).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn transform(name: &str) -> PointTransform {
    let t = text(name).unwrap_or_else(|| panic!("no fixture {name}"));
    let f: Result<_, FileError> = parse_transform(t);
    f.unwrap_or_else(|e| panic!("{name}: {e}")).into()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expectation {
    MustMatch,
    /// Expected to fail; the note says why.
    KnownDiscrepancy(&'static str),
}

impl Expectation {
    pub fn label(self) -> &'static str {
        match self {
            Expectation::MustMatch => "must-match",
            Expectation::KnownDiscrepancy(_) => "known-discrepancy",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Source,
    Target,
}

/// A map to verify: `source -> target`, or `target -> source` if reversed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MapCheck {
    pub file: &'static str,
    pub reverse: bool,
    pub expectation: Expectation,
}

/// A signature entry with its expected value, written over the model's
/// variables and parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Expected {
    pub side: Side,
    pub method: Method,
    pub family: Family,
    pub id: &'static str,
    pub value: &'static str,
    pub expectation: Expectation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixtureCase {
    pub id: &'static str,
    pub example: u8,
    pub source: &'static str,
    pub target: &'static str,
    pub maps: Vec<MapCheck>,
    pub values: Vec<Expected>,
}

impl FixtureCase {
    pub fn method(&self) -> Method {
        match model(self.source) {
            Model::Scalar(s) if s.is_real() => Method::Scalar,
            _ => Method::Complex,
        }
    }
}

const EX5_NOTE: &str =
    "the printed map with z2 = 2x does not carry the source onto the target; z2 = x does";
const EX4_SCALAR_NOTE: &str =
    "the scalar pair swaps variable roles relative to the system map: the lambda form lives in z";
const EX5_SOURCE_NOTE: &str =
    "recomputed from the coefficients the values are h = -2, k = 2(a z2 - 1)";

fn must(file: &'static str) -> MapCheck {
    MapCheck {
        file,
        reverse: false,
        expectation: Expectation::MustMatch,
    }
}

fn v(
    side: Side,
    method: Method,
    family: Family,
    id: &'static str,
    value: &'static str,
) -> Expected {
    Expected {
        side,
        method,
        family,
        id,
        value,
        expectation: Expectation::MustMatch,
    }
}

/// All cases, ordered by id.
pub fn cases() -> Vec<FixtureCase> {
    use Family::*;
    use Method::*;
    use Side::*;
    let dep = |side, id, value| v(side, Real, SemiDep, id, value);
    let sdep = |side, id, value| v(side, Scalar, SemiDep, id, value);
    let sindep = |side, id, value| v(side, Scalar, SemiIndep, id, value);
    let joint = |side, id, value| v(side, Complex, Joint, id, value);
    let ex5_known = |file| MapCheck {
        file,
        reverse: false,
        expectation: Expectation::KnownDiscrepancy(EX5_NOTE),
    };
    vec![
        FixtureCase {
            id: "ex1a",
            example: 1,
            source: "ex1_complex_source.model",
            target: "ex1_complex_target.model",
            maps: vec![must("ex1_map.transform")],
            values: vec![
                sdep(Source, "h", "a*b - c"),
                sdep(Source, "k", "a*b - c"),
                sdep(Target, "h", "a*b - c"),
                sdep(Target, "k", "a*b - c"),
            ],
        },
        FixtureCase {
            id: "ex1b",
            example: 1,
            source: "ex1_source.model",
            target: "ex1_target.model",
            maps: vec![must("ex1_map.transform")],
            values: [Source, Target]
                .into_iter()
                .flat_map(|s| {
                    [
                        dep(s, "h1", "a1*b1 - a2*b2 - c1"),
                        dep(s, "k1", "a1*b1 - a2*b2 - c1"),
                        dep(s, "h2", "a1*b2 + a2*b1 - c2"),
                        dep(s, "k2", "a1*b2 + a2*b1 - c2"),
                    ]
                })
                .collect(),
        },
        FixtureCase {
            id: "ex2a",
            example: 2,
            source: "ex2_scalar_source.model",
            target: "ex2_scalar_target.model",
            maps: vec![must("ex2_map.transform")],
            values: vec![
                sindep(Source, "I1", "c/(a*b*z1^2)"),
                sindep(Source, "I2", "b*z1^2"),
                sindep(Source, "I3", "0"),
                sindep(Source, "I4", "c/a"),
                sindep(Source, "I5", "0"),
                sindep(Source, "I6", "0"),
                sindep(Target, "I1", "c/(a*b*t)"),
                sindep(Target, "I2", "b*t"),
                sindep(Target, "I3", "0"),
                sindep(Target, "I4", "c/a"),
                sindep(Target, "I5", "0"),
                sindep(Target, "I6", "0"),
            ],
        },
        FixtureCase {
            id: "ex2b",
            example: 2,
            source: "ex2_uncoupled_source.model",
            target: "ex2_uncoupled_target.model",
            maps: vec![must("ex2_map.transform")],
            values: vec![],
        },
        FixtureCase {
            id: "ex2c",
            example: 2,
            source: "ex2_coupled_source.model",
            target: "ex2_coupled_target.model",
            maps: vec![must("ex2_map.transform")],
            values: vec![],
        },
        FixtureCase {
            id: "ex3a",
            example: 3,
            source: "ex3_log_source.model",
            target: "ex3_log_target.model",
            maps: vec![must("ex3_map.transform")],
            values: vec![],
        },
        FixtureCase {
            id: "ex3b",
            example: 3,
            source: "ex3_scalar_source.model",
            target: "ex3_scalar_target.model",
            maps: vec![must("ex3_map.transform")],
            values: vec![],
        },
        FixtureCase {
            id: "ex3c",
            example: 3,
            source: "ex3_source.model",
            target: "ex3_target.model",
            maps: vec![must("ex3_map.transform")],
            values: vec![],
        },
        FixtureCase {
            id: "ex4a",
            example: 4,
            source: "ex4_lambda.model",
            target: "ex4_unit.model",
            maps: vec![
                must("ex4_inverse.transform"),
                MapCheck {
                    file: "ex4_map.transform",
                    reverse: true,
                    expectation: Expectation::MustMatch,
                },
            ],
            values: vec![
                dep(Source, "h1", "lambda^2/4"),
                dep(Source, "k1", "lambda^2/4"),
                dep(Source, "h2", "0"),
                dep(Source, "k2", "0"),
                joint(Source, "J11", "1"),
                joint(Source, "J12", "0"),
                joint(Source, "J13", "0"),
                joint(Source, "J14", "0"),
                joint(Source, "J15", "0"),
                joint(Source, "J16", "0"),
                joint(Source, "J17", "0"),
                joint(Source, "J18", "0"),
                joint(Source, "J19", "0"),
                joint(Source, "J20", "0"),
                joint(Source, "J21", "0"),
                joint(Source, "J22", "0"),
                dep(Target, "h1", "-1"),
                dep(Target, "k1", "-1"),
                dep(Target, "h2", "0"),
                dep(Target, "k2", "0"),
                joint(Target, "J11", "1"),
                joint(Target, "J12", "0"),
            ],
        },
        FixtureCase {
            id: "ex4b",
            example: 4,
            source: "ex4_scalar_lambda.model",
            target: "ex4_scalar_unit.model",
            maps: vec![MapCheck {
                file: "ex4_map.transform",
                reverse: false,
                expectation: Expectation::KnownDiscrepancy(EX4_SCALAR_NOTE),
            }],
            values: vec![
                sdep(Source, "h", "lambda^2/4"),
                sdep(Source, "k", "lambda^2/4"),
                v(Source, Scalar, Joint, "J1", "1"),
                sdep(Target, "h", "-1"),
                sdep(Target, "k", "-1"),
                v(Target, Scalar, Joint, "J1", "1"),
            ],
        },
        FixtureCase {
            id: "ex5a",
            example: 5,
            source: "ex5_scalar_source.model",
            target: "ex5_scalar_target.model",
            maps: vec![
                ex5_known("ex5_map.transform"),
                must("ex5_map_rescaled.transform"),
            ],
            values: vec![
                Expected {
                    expectation: Expectation::KnownDiscrepancy(EX5_SOURCE_NOTE),
                    ..sdep(Source, "h", "-1")
                },
                Expected {
                    expectation: Expectation::KnownDiscrepancy(EX5_SOURCE_NOTE),
                    ..sdep(Source, "k", "2*a*z2 - 1")
                },
                sdep(Target, "h", "2/t^2"),
                sdep(Target, "k", "2*(1 - a*x)/t^2"),
            ],
        },
        FixtureCase {
            id: "ex5b",
            example: 5,
            source: "ex5_uncoupled_source.model",
            target: "ex5_uncoupled_target.model",
            maps: vec![
                ex5_known("ex5_map.transform"),
                must("ex5_map_rescaled.transform"),
            ],
            values: vec![
                dep(Target, "h1", "2/t^2"),
                dep(Target, "k1", "2*(1 - a*x)/t^2"),
                dep(Target, "h2", "0"),
                dep(Target, "k2", "0"),
                dep(Source, "h1", "-2"),
                dep(Source, "k1", "2*(a*z2 - 1)"),
                dep(Source, "h2", "0"),
                dep(Source, "k2", "0"),
            ],
        },
        FixtureCase {
            id: "ex5c",
            example: 5,
            source: "ex5_coupled_source.model",
            target: "ex5_coupled_target.model",
            maps: vec![
                ex5_known("ex5_map.transform"),
                must("ex5_map_rescaled.transform"),
            ],
            values: vec![
                dep(Target, "h1", "2/t^2"),
                dep(Target, "k1", "2*(1 - a1*x)/t^2"),
                dep(Target, "h2", "0"),
                dep(Target, "k2", "-2*a2*x/t^2"),
                joint(Target, "J11", "(1 - a1*x)/((1 - a1*x)^2 + a2^2*x^2)"),
                joint(Target, "J12", "a2*x/((1 - a1*x)^2 + a2^2*x^2)"),
                dep(Source, "h1", "-2"),
                dep(Source, "k1", "2*(a1*z2 - 1)"),
                dep(Source, "h2", "0"),
                dep(Source, "k2", "2*a2*z2"),
                joint(Source, "J11", "(1 - a1*z2)/((1 - a1*z2)^2 + a2^2*z2^2)"),
                joint(Source, "J12", "a2*z2/((1 - a1*z2)^2 + a2^2*z2^2)"),
            ],
        },
    ]
}
