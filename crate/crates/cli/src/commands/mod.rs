pub mod check;
pub mod fit;
pub mod ridge;
pub mod synth;

use crate::config::Config;

/// Settings shared by every subcommand.
pub struct Context {
    pub config: Config,
    pub seed: u64,
    pub quiet: bool,
}

impl Context {
    /// Prints a human-readable summary line unless `--quiet` is set.
    pub fn say(&self, message: impl std::fmt::Display) {
        if !self.quiet {
            println!("{message}");
        }
    }
}
