//! Command line, TOML configuration, CSV/JSON output and published reference
//! tables for [`curveflow_core`].

pub mod cli;
pub mod compare;
pub mod config;
pub mod error;
pub mod output;
pub mod reference;
pub mod study;

pub use cli::main_with_args;
pub use compare::{compare_against_reference, compare_tables, CellComparison, CompareReport};
pub use config::{load_config, parse_config, parse_time_rule, RawConfig, RunConfig};
pub use error::AppError;
pub use reference::{ReferenceRow, ReferenceTable, TableId, Tolerance};
pub use study::parallel_study;
