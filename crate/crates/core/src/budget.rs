//! Step counters that make long searches fail loudly instead of running away.

use std::cell::Cell;

use crate::error::{Error, Result};

/// Default number of search steps granted to a single operation.
pub const DEFAULT_BUDGET: u64 = 20_000_000;

/// Environment variable overriding [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "ASSEMBLERS_BUDGET";

/// A step budget shared by the nested searches of one operation.
#[derive(Debug)]
pub struct Budget {
    limit: u64,
    used: Cell<u64>,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { limit, used: Cell::new(0) }
    }

    pub fn unlimited() -> Self {
        Budget::new(u64::MAX)
    }

    /// The limit from [`BUDGET_ENV`] if set to a positive integer, else the default.
    pub fn from_env() -> Self {
        let limit = std::env::var(BUDGET_ENV).ok().and_then(|v| v.trim().parse().ok()).filter(|&n: &u64| n > 0);
        Budget::new(limit.unwrap_or(DEFAULT_BUDGET))
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn used(&self) -> u64 {
        self.used.get()
    }

    /// Spend one step.
    pub fn tick(&self, during: &'static str) -> Result<()> {
        self.spend(1, during)
    }

    pub fn spend(&self, steps: u64, during: &'static str) -> Result<()> {
        let used = self.used.get().saturating_add(steps);
        self.used.set(used);
        if used > self.limit {
            Err(Error::BudgetExhausted { limit: self.limit, during })
        } else {
            Ok(())
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::from_env()
    }
}
