//! Enumeration caps.

/// Default bound on the number of basis words enumerated per degree.
pub const DEFAULT_CAP: usize = 65536;

/// Bound used by the brute-force reference routines.
pub const ORACLE_CAP: usize = 4096;

/// The active cap: `NCDISK_CAP` if set to a positive integer, else
/// [`DEFAULT_CAP`].
pub fn enumeration_cap() -> usize {
    std::env::var("NCDISK_CAP")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&c| c > 0)
        .unwrap_or(DEFAULT_CAP)
}

/// `n^d`, or `None` on overflow.
pub fn words_in_degree(n: usize, d: usize) -> Option<usize> {
    n.checked_pow(d as u32)
}

pub(crate) fn check_cap(needed: Option<usize>, cap: usize) -> crate::Result<usize> {
    match needed {
        Some(k) if k <= cap => Ok(k),
        Some(k) => Err(crate::Error::CapExceeded { needed: k, cap }),
        None => Err(crate::Error::CapExceeded {
            needed: usize::MAX,
            cap,
        }),
    }
}
