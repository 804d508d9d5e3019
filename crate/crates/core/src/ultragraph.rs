//! Reduced products of a trace's graph sequence over a principal family.
//!
//! With family generated by `J`, a vertex is a tuple picking one vertex of
//! `G_α` for each `α ∈ J` (in ascending order of `α`), and two tuples are
//! adjacent when their coordinates are adjacent at every `α ∈ J`. Cliques of
//! internal sets are read in the looped product, where equal coordinates
//! also count as adjacent.

use alloc::collections::BTreeSet;
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::bits::{bit, ones, IndexSet};
use crate::distributions::{essential_range, IndexGraph, Trace};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest tuple count [`ReducedProduct::tuples`] will enumerate.
pub const MAX_MATERIALIZED: u128 = 1_000_000;

pub type Tuple = Vec<usize>;

#[derive(Clone, Debug)]
pub struct ReducedProduct {
    core: Vec<usize>,
    graphs: Vec<IndexGraph>,
    formula_count: usize,
}

impl ReducedProduct {
    /// Product over `J = generator ∩ ess`. Needs a principal family whose
    /// essential range is a member.
    pub fn build(t: &Trace) -> Result<ReducedProduct> {
        let gen = t.family().generator().ok_or(Error::NonPrincipalFamily)?;
        let ess = essential_range(t)?;
        let core: Vec<usize> = gen.intersection(ess).iter().collect();
        let graphs = core.iter().map(|&a| t.graph(a).clone()).collect();
        Ok(ReducedProduct { core, graphs, formula_count: t.formula_count() })
    }

    /// The indices of `J`, ascending; tuple position `i` is index `core()[i]`.
    pub fn core(&self) -> &[usize] {
        &self.core
    }

    pub fn core_set(&self) -> IndexSet {
        self.core.iter().copied().collect()
    }

    pub fn coordinate_graph(&self, i: usize) -> &IndexGraph {
        &self.graphs[i]
    }

    pub fn formula_count(&self) -> usize {
        self.formula_count
    }

    pub fn vertex_count(&self) -> u128 {
        self.graphs.iter().map(|g| g.vertices().count_ones() as u128).product()
    }

    /// Unordered adjacent pairs, counted symbolically.
    pub fn edge_count(&self) -> u128 {
        if self.core.is_empty() {
            return 0;
        }
        let ordered: u128 = self.graphs.iter().map(|g| 2 * g.edges().edge_count() as u128).product();
        ordered / 2
    }

    pub fn is_vertex(&self, t: &[usize]) -> bool {
        t.len() == self.core.len() && t.iter().zip(&self.graphs).all(|(&v, g)| g.has_vertex(v))
    }

    pub fn adjacent(&self, a: &[usize], b: &[usize]) -> bool {
        self.is_vertex(a) && self.is_vertex(b) && a.iter().zip(b).zip(&self.graphs).all(|((&x, &y), g)| g.has_edge(x, y))
    }

    /// Adjacency in the looped product.
    pub fn adjacent_or_equal(&self, a: &[usize], b: &[usize]) -> bool {
        self.is_vertex(a)
            && self.is_vertex(b)
            && a.iter().zip(b).zip(&self.graphs).all(|((&x, &y), g)| x == y || g.has_edge(x, y))
    }

    /// All tuples in lexicographic order.
    pub fn tuples(&self) -> Result<Vec<Tuple>> {
        let count = self.vertex_count();
        if count > MAX_MATERIALIZED {
            return Err(Error::BoundExceeded {
                what: "reduced-product tuples",
                requested: usize::try_from(count).unwrap_or(usize::MAX),
                max: MAX_MATERIALIZED as usize,
            });
        }
        Ok(product_tuples(&self.graphs.iter().map(|g| g.vertices()).collect::<Vec<_>>()))
    }

    /// The product as a graph on its tuples, numbered in [`Self::tuples`] order.
    pub fn to_graph(&self) -> Result<(Vec<Tuple>, Graph)> {
        let tuples = self.tuples()?;
        let mut g = Graph::try_empty(tuples.len())?;
        for i in 0..tuples.len() {
            for j in i + 1..tuples.len() {
                if self.adjacent(&tuples[i], &tuples[j]) {
                    g.insert_edge(i, j);
                }
            }
        }
        Ok((tuples, g))
    }
}

fn product_tuples(parts: &[u64]) -> Vec<Tuple> {
    let mut out = alloc::vec![Vec::new()];
    for &p in parts {
        out = out.into_iter().flat_map(|t: Tuple| ones(p).map(move |v| {
            let mut t = t.clone();
            t.push(v);
            t
        })).collect();
    }
    out
}

/// `η(β)`: the constant tuple `(β, .., β)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaReport {
    pub images: Vec<Tuple>,
    /// Every pair of images is adjacent.
    pub complete: bool,
    /// First `(β, γ, α)` with `βγ` not an edge at `α ∈ J`.
    pub missing_pair: Option<(usize, usize, usize)>,
}

pub fn eta(rp: &ReducedProduct) -> Result<EtaReport> {
    let nb = rp.formula_count;
    for b in 0..nb {
        if let Some(i) = rp.graphs.iter().position(|g| !g.has_vertex(b)) {
            return Err(Error::Inconsistent(alloc::format!(
                "formula {b} is missing from g1({}), so it has no constant representative",
                rp.core[i]
            )));
        }
    }
    let images: Vec<Tuple> = (0..nb).map(|b| alloc::vec![b; rp.core.len()]).collect();
    let mut missing_pair = None;
    'outer: for b in 0..nb {
        for c in b + 1..nb {
            if let Some(i) = rp.graphs.iter().position(|g| !g.has_edge(b, c)) {
                missing_pair = Some((b, c, rp.core[i]));
                break 'outer;
            }
        }
    }
    Ok(EtaReport { images, complete: missing_pair.is_none(), missing_pair })
}

/// A product set `∏ S_α` over the positions of a core.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InternalSet {
    pub parts: Vec<u64>,
}

impl InternalSet {
    pub fn contains(&self, t: &[usize]) -> bool {
        t.len() == self.parts.len() && t.iter().zip(&self.parts).all(|(&v, &p)| v < 64 && p & bit(v) != 0)
    }

    pub fn is_empty(&self) -> bool {
        self.parts.contains(&0)
    }

    /// Every part is a clique of its coordinate graph, so the set is a
    /// clique of the looped product.
    pub fn is_clique_in(&self, rp: &ReducedProduct) -> bool {
        self.parts.len() == rp.graphs.len() && self.parts.iter().zip(&rp.graphs).all(|(&p, g)| g.has_clique(p))
    }

    pub fn tuples(&self) -> Vec<Tuple> {
        if self.is_empty() {
            return Vec::new();
        }
        product_tuples(&self.parts)
    }

    /// The coordinate projections of `tuples`, if `tuples` is exactly their
    /// product. An empty input yields `None` (no part sizes to recover).
    pub fn from_tuples(width: usize, tuples: &[Tuple]) -> Option<InternalSet> {
        if tuples.is_empty() || tuples.iter().any(|t| t.len() != width || t.iter().any(|&v| v >= 64)) {
            return None;
        }
        let mut parts = alloc::vec![0u64; width];
        for t in tuples {
            for (p, &v) in parts.iter_mut().zip(t) {
                *p |= bit(v);
            }
        }
        let set = InternalSet { parts };
        let given: BTreeSet<&Tuple> = tuples.iter().collect();
        let size: u128 = set.parts.iter().map(|p| p.count_ones() as u128).product();
        (given.len() as u128 == size && given.iter().all(|t| set.contains(t))).then_some(set)
    }
}

/// The least internal clique `∏ K_α` containing `target`.
///
/// `target` must be pairwise adjacent in the product. Then the coordinates
/// at each position are pairwise adjacent in `G_α`, so `K_α` can be taken to
/// be exactly those coordinates.
pub fn extend_to_internal_clique(rp: &ReducedProduct, target: &[Tuple]) -> Result<InternalSet> {
    for t in target {
        if !rp.is_vertex(t) {
            return Err(Error::InvalidParameter(alloc::format!("{t:?} is not a vertex of the product")));
        }
    }
    for i in 0..target.len() {
        for j in i + 1..target.len() {
            if target[i] != target[j] && !rp.adjacent(&target[i], &target[j]) {
                return Err(Error::NotComplete { a: i, b: j });
            }
        }
    }
    let mut parts = alloc::vec![0u64; rp.core.len()];
    for t in target {
        for (p, &v) in parts.iter_mut().zip(t) {
            *p |= bit(v);
        }
    }
    let set = InternalSet { parts };
    debug_assert!(set.is_clique_in(rp));
    Ok(set)
}

/// `Θ`: applies `θ_α` on positions of the source core and a fixed vertex at
/// the other positions of the target core.
#[derive(Clone, Debug)]
pub struct LiftedMap {
    /// Per target position: the source position and the map `θ_α` as a
    /// table indexed by source vertex, or the fixed fill vertex.
    slots: Vec<Slot>,
    source_width: usize,
}

#[derive(Clone, Debug)]
enum Slot {
    Mapped { source: usize, table: Vec<Option<usize>> },
    Fixed(usize),
}

/// Builds `Θ` from `source` (core `J′`) to `target` (core `J ⊇ J′`), with
/// `maps[i]` the table of `θ` at the `i`-th index of `J′`. Off `J′` the
/// fixed choice is the least vertex of the target's `G_α`.
pub fn lift_map(source: &ReducedProduct, target: &ReducedProduct, maps: &[Vec<Option<usize>>]) -> Result<LiftedMap> {
    if maps.len() != source.core.len() {
        return Err(Error::Mismatch("one vertex map per source index is needed".to_string()));
    }
    let mut slots = Vec::with_capacity(target.core.len());
    for (ti, &alpha) in target.core.iter().enumerate() {
        let tg = &target.graphs[ti];
        match source.core.iter().position(|&a| a == alpha) {
            Some(si) => {
                let table = &maps[si];
                for v in ones(source.graphs[si].vertices()) {
                    match table.get(v).copied().flatten() {
                        Some(w) if tg.has_vertex(w) => {}
                        Some(w) => {
                            return Err(Error::InvalidParameter(alloc::format!(
                                "θ at index {alpha} sends {v} to {w}, not a vertex there"
                            )))
                        }
                        None => {
                            return Err(Error::InvalidParameter(alloc::format!("θ at index {alpha} is undefined at {v}")))
                        }
                    }
                }
                slots.push(Slot::Mapped { source: si, table: table.clone() });
            }
            None => {
                let fill = ones(tg.vertices()).next().ok_or_else(|| {
                    Error::InvalidParameter(alloc::format!("target graph at index {alpha} is empty"))
                })?;
                slots.push(Slot::Fixed(fill));
            }
        }
    }
    if source.core.iter().any(|a| !target.core.contains(a)) {
        return Err(Error::Mismatch("the source core must be inside the target core".to_string()));
    }
    Ok(LiftedMap { slots, source_width: source.core.len() })
}

impl LiftedMap {
    pub fn apply(&self, t: &[usize]) -> Option<Tuple> {
        if t.len() != self.source_width {
            return None;
        }
        self.slots
            .iter()
            .map(|s| match s {
                Slot::Mapped { source, table } => table.get(t[*source]).copied().flatten(),
                Slot::Fixed(v) => Some(*v),
            })
            .collect()
    }

    /// `Θ[S]`, computed coordinatewise.
    pub fn image(&self, s: &InternalSet) -> InternalSet {
        if s.is_empty() {
            return InternalSet { parts: alloc::vec![0; self.slots.len()] };
        }
        let parts = self
            .slots
            .iter()
            .map(|slot| match slot {
                Slot::Mapped { source, table } => {
                    ones(s.parts[*source]).filter_map(|v| table.get(v).copied().flatten()).fold(0, |m, w| m | bit(w))
                }
                Slot::Fixed(v) => bit(*v),
            })
            .collect();
        InternalSet { parts }
    }

    /// `Θ⁻¹[T]` within `source`, computed coordinatewise.
    pub fn preimage(&self, source: &ReducedProduct, t: &InternalSet) -> InternalSet {
        let mut parts = alloc::vec![0u64; self.source_width];
        let mut empty = false;
        for (ti, slot) in self.slots.iter().enumerate() {
            match slot {
                Slot::Mapped { source: si, table } => {
                    parts[*si] = ones(source.graphs[*si].vertices())
                        .filter(|&v| table.get(v).copied().flatten().is_some_and(|w| t.parts[ti] & bit(w) != 0))
                        .fold(0, |m, v| m | bit(v));
                }
                Slot::Fixed(v) => empty |= t.parts[ti] & bit(*v) == 0,
            }
        }
        if empty {
            parts.iter_mut().for_each(|p| *p = 0);
        }
        InternalSet { parts }
    }
}

/// `Ψ`: sends `η(β)` to the transversal tuple `h_β`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Psi {
    pub eta: Vec<Tuple>,
    pub image: Vec<Tuple>,
}

impl Psi {
    pub fn apply(&self, t: &[usize]) -> Option<&Tuple> {
        self.eta.iter().position(|e| e == t).map(|i| &self.image[i])
    }
}

/// The trace read off a transversal `h_β` (one tuple over `J` per formula).
///
/// `ℓ1 = g1`; a pair `βγ ⊆ g1(α)` is in `ℓ2(α)` when `h_β(α)` and `h_γ(α)`
/// are equal or adjacent in `G_α`, where off `J` the representative is `β`
/// itself. The constant transversal returns the input trace.
pub fn clique_transversal_trace(t: &Trace, transversal: &[Tuple]) -> Result<(Trace, Psi)> {
    let rp = ReducedProduct::build(t)?;
    let nb = t.formula_count();
    if transversal.len() != nb {
        return Err(Error::Mismatch(alloc::format!("{} transversal tuples for {nb} formulas", transversal.len())));
    }
    for (b, h) in transversal.iter().enumerate() {
        if !rp.is_vertex(h) {
            return Err(Error::InvalidParameter(alloc::format!("h_{b} = {h:?} is not a vertex of the product")));
        }
    }
    for b in 0..nb {
        for c in b + 1..nb {
            if !rp.adjacent_or_equal(&transversal[b], &transversal[c]) {
                return Err(Error::NotComplete { a: b, b: c });
            }
        }
    }
    let rep = |b: usize, alpha: usize| -> usize {
        match rp.core.iter().position(|&a| a == alpha) {
            Some(i) => transversal[b][i],
            None => b,
        }
    };
    let mut graphs = Vec::with_capacity(t.index_count());
    for (alpha, g) in t.graph_sequence().iter().enumerate() {
        let mut edges = Graph::empty(nb);
        for b in ones(g.vertices()) {
            for c in ones(g.vertices() & !crate::bits::low(b + 1)) {
                let (x, y) = (rep(b, alpha), rep(c, alpha));
                if x == y || g.has_edge(x, y) {
                    edges.insert_edge(b, c);
                }
            }
        }
        graphs.push(IndexGraph::new(g.vertices(), edges)?);
    }
    let out = t.with_graphs(graphs)?;
    let psi = Psi { eta: (0..nb).map(|b| alloc::vec![b; rp.core.len()]).collect(), image: transversal.to_vec() };
    Ok((out, psi))
}
