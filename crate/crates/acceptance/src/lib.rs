//! Runner for the acceptance suite: one numbered criterion per line, `PASS` or `FAIL`.

use std::time::{Duration, Instant};

pub struct Verdict {
    pub pass: bool,
    pub detail: String,
}

impl Verdict {
    pub fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
        }
    }

    pub fn fail(detail: impl Into<String>) -> Self {
        Self::new(false, detail)
    }
}

#[derive(Default)]
pub struct Suite {
    results: Vec<(usize, &'static str, bool)>,
}

impl Suite {
    /// Runs `f`, timing it; a panic inside `f` counts as a failure.
    pub fn criterion<F: FnOnce() -> Verdict>(
        &mut self,
        id: usize,
        name: &'static str,
        f: F,
    ) -> Duration {
        let start = Instant::now();
        let hook = std::panic::take_hook();
        std::panic::set_hook(Box::new(|_| {}));
        let v = std::panic::catch_unwind(std::panic::AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Verdict::fail(format!("panicked: {msg}"))
        });
        std::panic::set_hook(hook);
        let took = start.elapsed();
        let tag = if v.pass { "PASS" } else { "FAIL" };
        println!(
            "{tag} {id:>2} {name}: {} [{:.2}s]",
            v.detail,
            took.as_secs_f64()
        );
        self.results.push((id, name, v.pass));
        took
    }

    pub fn failed(&self) -> Vec<usize> {
        self.results.iter().filter(|r| !r.2).map(|r| r.0).collect()
    }

    /// Prints the tally and returns the process exit code.
    pub fn finish(&self) -> i32 {
        let failed = self.failed();
        println!(
            "{}/{} criteria passed",
            self.results.len() - failed.len(),
            self.results.len()
        );
        if failed.is_empty() {
            0
        } else {
            println!("failed: {failed:?}");
            1
        }
    }
}
