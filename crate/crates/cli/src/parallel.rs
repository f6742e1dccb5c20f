use std::num::NonZeroUsize;
use std::thread;

use jordan_wlcp_core::solver::{merge_reports, solve_start};
use jordan_wlcp_core::{PairProblem, SolveReport, SolverConfig};

use crate::error::{CliError, Result};

pub const THREADS_ENV: &str = "JORDAN_WLCP_THREADS";

/// Thread cap from `JORDAN_WLCP_THREADS`; 1 when unset.
pub fn threads_from_env() -> Result<NonZeroUsize> {
    match std::env::var(THREADS_ENV) {
        Err(std::env::VarError::NotPresent) => Ok(NonZeroUsize::MIN),
        Ok(v) => v
            .trim()
            .parse::<NonZeroUsize>()
            .map_err(|_| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got {v:?}"))),
        Err(e) => Err(CliError::Usage(format!("{THREADS_ENV}: {e}"))),
    }
}

/// Multi-start solve with the starts spread over up to `threads` workers.
/// Start `k` is the same computation on any thread count, and the merge only
/// looks at the reports, so the result does not depend on `threads`.
pub fn solve_parallel(problem: &PairProblem, config: &SolverConfig, threads: NonZeroUsize) -> Result<SolveReport> {
    config.validate()?;
    let workers = threads.get().min(config.starts);
    let mut slots: Vec<Option<jordan_wlcp_core::Result<SolveReport>>> = (0..config.starts).map(|_| None).collect();
    if workers <= 1 {
        for (k, slot) in slots.iter_mut().enumerate() {
            *slot = Some(solve_start(problem, config, k));
        }
    } else {
        thread::scope(|s| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    s.spawn(move || {
                        (w..config.starts).step_by(workers).map(|k| (k, solve_start(problem, config, k))).collect::<Vec<_>>()
                    })
                })
                .collect();
            for h in handles {
                for (k, r) in h.join().expect("solver thread panicked") {
                    slots[k] = Some(r);
                }
            }
        });
    }
    let reports = slots.into_iter().map(|r| r.expect("every start ran")).collect::<jordan_wlcp_core::Result<Vec<_>>>()?;
    Ok(merge_reports(reports).expect("at least one start"))
}
