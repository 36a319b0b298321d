mod check;
mod generate;
mod oracle;
mod resist;
mod walk;

use crate::report::RunConfig;
use crate::{Cli, CliResult, Command};

pub use check::{run_suite, SuiteCheck};

pub fn dispatch(cli: &Cli) -> CliResult<()> {
    let base = RunConfig { threads: cli.threads, deterministic: cli.deterministic, ..Default::default() };
    match &cli.command {
        Command::Generate(a) => generate::run(a, base),
        Command::Resist(a) => resist::run(a, base),
        Command::Check(a) => check::run(a, base),
        Command::Walk(a) => walk::run(a, base),
        Command::Oracle(a) => oracle::run(a, base),
    }
}
