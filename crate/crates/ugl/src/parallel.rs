//! Threaded versions of the enumeration searches. Results are identical to
//! the sequential ones for any worker count.

use std::thread;

use ugl_core::graph::{self, Graph};
use ugl_core::necessary::{Completions, MAX_NON_EDGES};
use ugl_core::shapes::{self, ShapeId, MAX_OBSTRUCTION_N};

use crate::error::{Error, Result};

/// The obstruction bound, lowered by `UGL_MAX_N` when that is smaller.
pub fn obstruction_bound() -> Result<usize> {
    match std::env::var("UGL_MAX_N") {
        Ok(v) => {
            let n: usize = v.trim().parse().map_err(|_| Error::Usage(format!("UGL_MAX_N=`{v}` is not a number")))?;
            Ok(n.min(MAX_OBSTRUCTION_N))
        }
        Err(_) => Ok(MAX_OBSTRUCTION_N),
    }
}

fn split<T: Sync, R: Send>(items: &[T], jobs: usize, f: impl Fn(&[T]) -> Vec<R> + Sync) -> Vec<R> {
    let jobs = jobs.max(1);
    if jobs == 1 || items.len() < 2 {
        return f(items);
    }
    let chunk = items.len().div_ceil(jobs);
    thread::scope(|s| {
        let handles: Vec<_> = items.chunks(chunk).map(|c| s.spawn(|| f(c))).collect();
        handles.into_iter().flat_map(|h| h.join().unwrap()).collect()
    })
}

pub fn minimal_obstructions(shape: ShapeId, max_n: usize, jobs: usize) -> Result<Vec<Graph>> {
    let bound = obstruction_bound()?;
    if max_n > bound {
        return Err(ugl_core::Error::BoundExceeded { what: "obstruction vertices", requested: max_n, max: bound }.into());
    }
    let mut out = Vec::new();
    for n in 1..=max_n {
        let classes = graph::enumerate_graphs(n)?;
        out.extend(split(&classes, jobs, |c| {
            c.iter().filter(|g| shapes::is_minimal_obstruction(shape, g)).cloned().collect()
        }));
    }
    Ok(out)
}

/// [`Completions::compute`] with each level striped across `jobs` workers.
pub fn completions(shape: ShapeId, host: &Graph, jobs: usize) -> Result<Completions> {
    let jobs = jobs.max(1);
    if jobs == 1 {
        return Ok(Completions::compute(shape, host)?);
    }
    let non_edges: Vec<(usize, usize)> = host.non_edges().collect();
    let k = non_edges.len();
    if k > MAX_NON_EDGES {
        return Err(ugl_core::Error::BoundExceeded { what: "non-edges of the obstruction", requested: k, max: MAX_NON_EDGES }.into());
    }
    let mut minimal: Vec<u64> = Vec::new();
    for size in 0..=k {
        let known = &minimal;
        let ne = &non_edges;
        let mut found: Vec<u64> = thread::scope(|s| {
            let handles: Vec<_> = (0..jobs)
                .map(|off| s.spawn(move || Completions::level(shape, host, ne, size, known, off, jobs)))
                .collect();
            handles.into_iter().flat_map(|h| h.join().unwrap()).collect()
        });
        found.sort_unstable();
        minimal.extend(found);
    }
    Ok(Completions::from_parts(shape, host, minimal))
}
