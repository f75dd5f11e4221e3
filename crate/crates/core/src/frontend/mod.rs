//! Instance files: lexing, parsing, printing, reports and the commands
//! behind the command line tool.

pub mod commands;
pub mod document;
pub mod lexer;
pub mod parser;
pub mod printer;
pub mod report;

pub use commands::AdjunctionPart;
pub use document::{Document, Resolved};
pub use parser::parse_document;
pub use printer::{print_certificate, print_document};
pub use report::{error_exit_code, render_error, Emit, Report, Status};
