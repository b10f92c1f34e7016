//! File formats, parallel drivers, wall-clock benchmarks and the `domorder`
//! command line, built on [`domorder_core`].

pub mod cli;
pub mod export;
pub mod input;
pub mod parallel;
pub mod timing;

pub use cli::{run, CliError};
pub use export::{ci_table_csv, dot, AnalyzeOutput};
pub use input::{parse_csv, read_observations, write_observations, DataError};
