//! The `.construct` language: parsing, execution and macro elaboration.

mod ast;
mod parser;

pub use ast::{Kind, LenExpr, Program, Selector, Step};
pub use parser::{parse, parse_expr, ParseError};
mod elaborate;
mod exec;

pub use elaborate::elaborate;
pub use exec::{
    execute, execute_in, resolve_selector, Binding, ExecError, ExecErrorKind, Executor, Workspace,
};
