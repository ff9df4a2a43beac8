//! Finite models of categories built from set-operads, with checkers for
//! admissible orders, Noetherianity probes and module generator growth.

pub mod catconstruct;
pub mod category;
pub mod cobordism;
pub mod finsetcats;
pub mod functortests;
pub mod graphcats;
pub mod grobnerkit;
pub mod halfedge;
pub mod modulelab;
pub mod noetherprobe;
pub mod operads;

/// Worker threads for parallel checks: `OPCAT_THREADS` or the available
/// parallelism.
pub fn threads() -> usize {
    std::env::var("OPCAT_THREADS")
        .ok()
        .and_then(|s| s.parse().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}
