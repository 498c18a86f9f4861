//! Global enumeration budget.
//!
//! Exhaustive searches check their candidate counts against this limit and
//! return a budget error instead of running open-ended. The limit comes from,
//! in order: a programmatic override (the CLI `--budget` flag sets one), the
//! `METASURFACE_BUDGET` environment variable, then [`DEFAULT_BUDGET`].

use std::sync::atomic::{AtomicU64, Ordering};

pub const DEFAULT_BUDGET: u64 = 1 << 24;

// 0 means "no override".
static OVERRIDE: AtomicU64 = AtomicU64::new(0);

pub fn set_budget(limit: Option<u64>) {
    OVERRIDE.store(limit.unwrap_or(0), Ordering::Relaxed);
}

pub fn current_budget() -> u64 {
    let explicit = OVERRIDE.load(Ordering::Relaxed);
    if explicit != 0 {
        return explicit;
    }
    std::env::var("METASURFACE_BUDGET")
        .ok()
        .and_then(|s| s.trim().parse::<u64>().ok())
        .filter(|&b| b > 0)
        .unwrap_or(DEFAULT_BUDGET)
}
