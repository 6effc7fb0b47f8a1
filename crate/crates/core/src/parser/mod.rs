//! Text formats: coefficient expressions, model files and transform files.

pub mod expr;
pub mod files;

pub use expr::{parse_expression, parse_expression_at, parse_in, ExprError, Pos, Scope};
pub use files::{
    parse_model, parse_transform, render_model, render_transform, FileError, ModelFile, ModelKind,
    TransformFile,
};
