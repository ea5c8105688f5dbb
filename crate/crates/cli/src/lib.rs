//! Batch front end for the Goursat solver kit: JSON configs in, CSV fields,
//! text reports, PGM heatmaps and convergence tables out.

pub mod commands;
pub mod config;
pub mod io;

pub use commands::{
    cmd_check_agreement, cmd_convergence, cmd_convert, cmd_mms, cmd_solve, ConvertTarget,
    EXIT_CONFIG, EXIT_FAIL, EXIT_IO, EXIT_OK, EXIT_SOLVER, OUTPUT_DIR_ENV,
};
pub use config::{LoadedConfig, RunConfig};
