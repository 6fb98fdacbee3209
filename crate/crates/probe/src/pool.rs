//! Worker-pool construction shared by all commands.

use anyhow::Result;

/// Build a rayon pool with `threads` workers (0 = one per logical core).
/// Results are always folded in task-index order, so the pool size never
/// affects output bytes.
pub fn build(threads: usize) -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if threads > 0 {
        builder = builder.num_threads(threads);
    }
    Ok(builder.build()?)
}
