//! Configuration, verification suites and reporting for the `wickrep`
//! command-line tool.

pub mod config;
pub mod repl;
pub mod report;
pub mod suites;

pub use config::{ConfigError, Mode, RunConfig};
pub use report::Report;

use report::Summary;

/// Executes the suites selected by the config.
pub fn run(config: &RunConfig) -> Result<Report, ConfigError> {
    config.validate()?;
    let cx = suites::Context::new(config)?;
    let checks = suites::run_suites(&cx, config.mode, config.parallel);
    let passed = checks.iter().filter(|c| c.pass).count();
    let d = cx.q.d();
    let q = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| (i != j).then(|| cx.q.get(i as u8 + 1, j as u8 + 1)).map(|z| [z.re, z.im]))
                .collect()
        })
        .collect();
    Ok(Report {
        config: config.clone(),
        q,
        summary: Summary {
            passed,
            failed: checks.len() - passed,
        },
        checks,
    })
}
