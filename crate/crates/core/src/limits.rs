//! Process-wide cap on intermediate polynomial size.
//!
//! The cap is read once from `STRONGNIL_MAX_TERMS`. When a product exceeds
//! it, the computation unwinds with a [`TermLimitExceeded`] panic payload;
//! the CLI and the C ABI catch it and report a dedicated status.

use std::sync::OnceLock;

pub const ENV_VAR: &str = "STRONGNIL_MAX_TERMS";

/// Panic payload raised when the term cap is exceeded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TermLimitExceeded {
    pub limit: usize,
    pub reached: usize,
}

static CAP: OnceLock<Option<usize>> = OnceLock::new();

pub fn term_cap() -> Option<usize> {
    *CAP.get_or_init(|| std::env::var(ENV_VAR).ok().and_then(|s| s.trim().parse::<usize>().ok()).filter(|&n| n > 0))
}

#[inline]
pub(crate) fn check_terms(count: usize) {
    if let Some(limit) = term_cap() {
        if count > limit {
            std::panic::panic_any(TermLimitExceeded { limit, reached: count });
        }
    }
}

/// Installs a panic hook that stays silent for term-cap unwinds and defers
/// to the previous hook otherwise. Idempotent.
pub fn install_quiet_hook() {
    static INSTALLED: OnceLock<()> = OnceLock::new();
    INSTALLED.get_or_init(|| {
        let previous = std::panic::take_hook();
        std::panic::set_hook(Box::new(move |info| {
            if info.payload().downcast_ref::<TermLimitExceeded>().is_none() {
                previous(info);
            }
        }));
    });
}

/// Runs `f`, converting a term-cap unwind into `Err`. Other panics resume.
pub fn guard<T>(f: impl FnOnce() -> T) -> Result<T, TermLimitExceeded> {
    match std::panic::catch_unwind(std::panic::AssertUnwindSafe(f)) {
        Ok(v) => Ok(v),
        Err(payload) => match payload.downcast::<TermLimitExceeded>() {
            Ok(e) => Err(*e),
            Err(other) => std::panic::resume_unwind(other),
        },
    }
}
