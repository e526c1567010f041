//! Bounded-parallelism evaluation of grid points with deterministic,
//! grid-index-ordered output.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use besselsum::report::IdentityReport;
use besselsum::Error;

use crate::grid::Point;
use crate::RunError;

type Slot = Mutex<Option<Result<Vec<IdentityReport>, Error>>>;

/// Evaluate all points, fanning out over at most `jobs` workers, and
/// return the reports flattened in grid order (evaluation is pure, so
/// scheduling cannot change any numeric field).
pub fn evaluate_ordered(points: Vec<Point>, jobs: usize) -> Result<Vec<IdentityReport>, RunError> {
    let n = points.len();
    let jobs = jobs.min(n).max(1);
    let slots: Vec<Slot> = (0..n).map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);

    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= n {
                    break;
                }
                let result = points[i].evaluate();
                *slots[i].lock().unwrap() = Some(result);
            });
        }
    });

    let mut out = Vec::new();
    for slot in slots {
        match slot.into_inner().unwrap() {
            Some(Ok(reports)) => out.extend(reports),
            Some(Err(e)) => return Err(RunError::Eval(e)),
            None => unreachable!("worker pool exited before finishing"),
        }
    }
    Ok(out)
}
