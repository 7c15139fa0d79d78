//! Runner for the `acceptance` test target: each criterion is a function
//! returning an [`Outcome`]; the runner prints one `[PASS]`/`[FAIL]` line
//! per criterion and turns panics into failures.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

/// Verdict of one criterion plus the measurements behind it.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub pass: bool,
    pub detail: String,
}

impl Outcome {
    pub fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, detail: detail.into() }
    }
}

pub struct Criterion {
    pub number: u32,
    pub title: &'static str,
    pub check: fn() -> Outcome,
}

/// Runs every criterion, printing one line each; fails if any criterion
/// fails.
pub fn run(criteria: &[Criterion]) -> ExitCode {
    let quiet_hook = panic::take_hook();
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for c in criteria {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(c.check)).unwrap_or_else(|payload| {
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Outcome::new(false, format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        let tag = if outcome.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] criterion {}: {} ({}; {secs:.2}s)", c.number, c.title, outcome.detail);
        if !outcome.pass {
            failed += 1;
        }
    }
    panic::set_hook(quiet_hook);
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
