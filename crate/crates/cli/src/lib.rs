//! Command-line front end: matrix file I/O, quasiprobability and
//! conditional-expectation tables, dual frames, and seeded verification runs.
//!
//! Exit codes: 0 success, 1 failed verification, 2 parse error or bad
//! arguments, 3 vanishing overlap, 4 invalid density matrix, 5 state outside
//! the admissible set, 6 invalid observable, 7 frame error, 8 output failure.

pub mod args;
pub mod commands;
pub mod error;
pub mod io;

use args::{Cli, Command};
pub use error::CliError;

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let g = &cli.global;
    let text = match &cli.command {
        Command::Kd { a, b, rho, side } => commands::kd(g, a, b, rho, *side)?,
        Command::Condexp {
            x,
            b,
            rho,
            kind,
            alpha,
            check,
        } => commands::condexp(g, x, b, rho, *kind, *alpha, *check)?,
        Command::Dual { a, b, side, alpha } => commands::dual(g, a, b, *side, *alpha)?,
        Command::Verify {
            suite,
            dim,
            trials,
            alphas,
        } => {
            let (text, pass) = commands::verify(g, *suite, *dim, *trials, alphas.as_deref())?;
            io::emit(&text, g.out.as_deref())?;
            return if pass {
                Ok(())
            } else {
                Err(CliError::VerifyFailed("at least one report failed".into()))
            };
        }
        Command::Random { what, dim } => commands::random(g, *what, *dim)?,
    };
    io::emit(&text, g.out.as_deref())
}
