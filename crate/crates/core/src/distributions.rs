//! Finite traces of graph-like distributions.
//!
//! A [`Trace`] fixes an index set `I = 0..ni`, a covering family over `I`
//! (the finite stand-in for the ultrafilter), a formula set `B = 0..nb` and
//! for each index `α` a graph `G_α` with vertex set `g1(α) ⊆ B` and edge set
//! `g2(α)`. Full maps `f` on nonempty subsets of `B` are only materialised for
//! small `B` ([`FullDistribution`]).

use alloc::string::ToString;
use alloc::vec::Vec;

use crate::bits::{bit, low, ones, IndexSet};
use crate::error::{Error, Result};
use crate::graph::{maximal_cliques_within, Graph};
use crate::necessary::paper_necessary_edges;
use crate::shapes::{families_up_to, family_graph, FamilyId, ShapeId};

/// Largest index set a trace may have.
pub const MAX_INDICES: usize = 64;

/// Largest formula set for which full maps and conjugates are materialised.
pub const MAX_FULL_FORMULAS: usize = 12;

/// Largest formula set [`necessary_condition_violation`] searches.
pub const MAX_CONDITION_FORMULAS: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    /// Sets with at least `k` indices.
    Quorum(usize),
    /// Supersets of the generator.
    Principal(IndexSet),
    /// Upward closure of the listed (inclusion-minimal) members.
    Explicit(Vec<IndexSet>),
}

/// Upward-closed, nonempty family of nonempty subsets of `0..index_count`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringFamily {
    index_count: usize,
    kind: FamilyKind,
}

fn check_indices(n: usize) -> Result<()> {
    if n > MAX_INDICES {
        return Err(Error::BoundExceeded { what: "indices", requested: n, max: MAX_INDICES });
    }
    Ok(())
}

fn check_subset(n: usize, s: IndexSet) -> Result<()> {
    match s.iter().find(|&i| i >= n) {
        Some(i) => Err(Error::VertexOutOfRange { vertex: i, n }),
        None => Ok(()),
    }
}

impl CoveringFamily {
    pub fn quorum(index_count: usize, k: usize) -> Result<CoveringFamily> {
        check_indices(index_count)?;
        if k == 0 || k > index_count {
            return Err(Error::InvalidParameter(alloc::format!("quorum {k} over {index_count} indices")));
        }
        Ok(CoveringFamily { index_count, kind: FamilyKind::Quorum(k) })
    }

    pub fn principal(index_count: usize, generator: IndexSet) -> Result<CoveringFamily> {
        check_indices(index_count)?;
        check_subset(index_count, generator)?;
        if generator.is_empty() {
            return Err(Error::InvalidParameter("principal family needs a nonempty generator".to_string()));
        }
        Ok(CoveringFamily { index_count, kind: FamilyKind::Principal(generator) })
    }

    /// Upward closure of `members`; non-minimal entries are dropped.
    pub fn explicit(index_count: usize, members: Vec<IndexSet>) -> Result<CoveringFamily> {
        check_indices(index_count)?;
        if members.is_empty() {
            return Err(Error::InvalidParameter("explicit family needs a member".to_string()));
        }
        for &m in &members {
            check_subset(index_count, m)?;
            if m.is_empty() {
                return Err(Error::InvalidParameter("the empty set cannot be a member".to_string()));
            }
        }
        let mut min: Vec<IndexSet> =
            members.iter().copied().filter(|&m| !members.iter().any(|&o| o != m && o.is_subset(m))).collect();
        min.sort_unstable_by_key(|m| m.0);
        min.dedup();
        Ok(CoveringFamily { index_count, kind: FamilyKind::Explicit(min) })
    }

    pub fn index_count(&self) -> usize {
        self.index_count
    }

    pub fn kind(&self) -> &FamilyKind {
        &self.kind
    }

    pub fn contains(&self, a: IndexSet) -> bool {
        let a = IndexSet(a.0 & low(self.index_count));
        match &self.kind {
            FamilyKind::Quorum(k) => a.len() >= *k,
            FamilyKind::Principal(j) => j.is_subset(a),
            FamilyKind::Explicit(ms) => ms.iter().any(|m| m.is_subset(a)),
        }
    }

    pub fn generator(&self) -> Option<IndexSet> {
        match self.kind {
            FamilyKind::Principal(j) => Some(j),
            _ => None,
        }
    }

    /// The members that are subsets of `ess`, reindexed along the ascending
    /// enumeration of `ess`. Fails if `ess` is not a member.
    pub fn restrict(&self, ess: IndexSet) -> Result<CoveringFamily> {
        if !self.contains(ess) {
            return Err(Error::Inconsistent("restriction to a non-member".to_string()));
        }
        let pos: Vec<usize> = ess.iter().collect();
        let reindex = |s: IndexSet| -> IndexSet { pos.iter().enumerate().filter(|(_, &a)| s.contains(a)).map(|(i, _)| i).collect() };
        let n = pos.len();
        match &self.kind {
            FamilyKind::Quorum(k) => CoveringFamily::quorum(n, *k),
            FamilyKind::Principal(j) => CoveringFamily::principal(n, reindex(*j)),
            FamilyKind::Explicit(ms) => {
                CoveringFamily::explicit(n, ms.iter().filter(|m| m.is_subset(ess)).map(|&m| reindex(m)).collect())
            }
        }
    }
}

/// Per-index graph: vertex set `g1(α)` and a graph on all formulas whose
/// edges lie inside it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IndexGraph {
    vertices: u64,
    edges: Graph,
}

impl IndexGraph {
    pub fn new(vertices: u64, edges: Graph) -> Result<IndexGraph> {
        if vertices & !edges.vertex_mask() != 0 {
            let v = ones(vertices & !edges.vertex_mask()).next().unwrap();
            return Err(Error::VertexOutOfRange { vertex: v, n: edges.n() });
        }
        if let Some((u, v)) = edges.edges().find(|&(u, v)| vertices & bit(u) == 0 || vertices & bit(v) == 0) {
            return Err(Error::Mismatch(alloc::format!("edge {u}-{v} leaves the vertex set")));
        }
        Ok(IndexGraph { vertices, edges })
    }

    pub fn from_pairs(formula_count: usize, vertices: &[usize], pairs: &[(usize, usize)]) -> Result<IndexGraph> {
        let mut mask = 0;
        for &v in vertices {
            if v >= formula_count {
                return Err(Error::VertexOutOfRange { vertex: v, n: formula_count });
            }
            mask |= bit(v);
        }
        IndexGraph::new(mask, Graph::from_edges(formula_count, pairs)?)
    }

    pub fn empty(formula_count: usize) -> IndexGraph {
        IndexGraph { vertices: 0, edges: Graph::empty(formula_count) }
    }

    /// Complete graph on `vertices`.
    pub fn complete_on(formula_count: usize, vertices: u64) -> IndexGraph {
        let mut edges = Graph::empty(formula_count);
        let vertices = vertices & low(formula_count);
        for u in ones(vertices) {
            for v in ones(vertices & !low(u + 1)) {
                edges.insert_edge(u, v);
            }
        }
        IndexGraph { vertices, edges }
    }

    /// All vertices of `g` with its edges.
    pub fn spanning(g: &Graph) -> IndexGraph {
        IndexGraph { vertices: g.vertex_mask(), edges: g.clone() }
    }

    pub fn vertices(&self) -> u64 {
        self.vertices
    }

    pub fn edges(&self) -> &Graph {
        &self.edges
    }

    pub fn formula_count(&self) -> usize {
        self.edges.n()
    }

    pub fn has_vertex(&self, b: usize) -> bool {
        b < 64 && self.vertices >> b & 1 == 1
    }

    pub fn has_edge(&self, b: usize, c: usize) -> bool {
        self.edges.has_edge(b, c)
    }

    pub fn is_empty(&self) -> bool {
        self.vertices == 0
    }

    pub fn is_complete(&self) -> bool {
        self.edges.is_clique(self.vertices)
    }

    /// Vertices in `mask` and all pairs of `mask` edges.
    pub fn has_clique(&self, mask: u64) -> bool {
        mask & !self.vertices == 0 && self.edges.is_clique(mask)
    }

    pub fn is_subgraph_of(&self, other: &IndexGraph) -> bool {
        self.vertices & !other.vertices == 0 && self.edges.is_subgraph_of(&other.edges)
    }

    /// Induced graph on the vertex set, relabeled `0..|g1(α)|`.
    pub fn compact(&self) -> Graph {
        self.edges.induced_by_mask(self.vertices)
    }
}

/// Per-index graphs `K_α = ⟨k1(α), k2(α)⟩` of a Łoś instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LosInstance {
    pub graphs: Vec<IndexGraph>,
}

/// Distributions read at the level of singletons and pairs.
pub trait PairDistribution {
    fn formula_count(&self) -> usize;
    fn index_count(&self) -> usize;
    /// `f({b})`.
    fn single(&self, b: usize) -> IndexSet;
    /// `f({b, c})`, `b != c`.
    fn pair(&self, b: usize, c: usize) -> IndexSet;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    family: CoveringFamily,
    formula_count: usize,
    graphs: Vec<IndexGraph>,
    instance: Option<LosInstance>,
}

/// Pair adequacy and Łoś-instance compatibility of a trace.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TraceReport {
    /// Formulas `b` with `{α : b ∈ g1(α)}` outside the family.
    pub uncovered_formulas: Vec<usize>,
    /// Pairs with `{α : bc ∈ g2(α)}` outside the family.
    pub uncovered_pairs: Vec<(usize, usize)>,
    /// Indices where `G_α` is not a subgraph of `K_α`.
    pub instance_violations: Vec<usize>,
}

impl TraceReport {
    pub fn pair_adequate(&self) -> bool {
        self.uncovered_formulas.is_empty() && self.uncovered_pairs.is_empty()
    }

    pub fn is_ok(&self) -> bool {
        self.pair_adequate() && self.instance_violations.is_empty()
    }
}

impl Trace {
    /// Checks sizes and that every edge lies inside its vertex set. Pair
    /// adequacy is reported by [`Trace::validate`], not enforced.
    pub fn new(
        family: CoveringFamily,
        formula_count: usize,
        graphs: Vec<IndexGraph>,
        instance: Option<LosInstance>,
    ) -> Result<Trace> {
        if formula_count > crate::graph::MAX_VERTICES {
            return Err(Error::TooManyVertices { n: formula_count, max: crate::graph::MAX_VERTICES });
        }
        let check = |gs: &[IndexGraph], what: &str| -> Result<()> {
            if gs.len() != family.index_count() {
                return Err(Error::Mismatch(alloc::format!(
                    "{} {what} graphs for {} indices",
                    gs.len(),
                    family.index_count()
                )));
            }
            if let Some(g) = gs.iter().find(|g| g.formula_count() != formula_count) {
                return Err(Error::Mismatch(alloc::format!(
                    "{what} graph over {} formulas, expected {formula_count}",
                    g.formula_count()
                )));
            }
            Ok(())
        };
        check(&graphs, "trace")?;
        if let Some(inst) = &instance {
            check(&inst.graphs, "instance")?;
        }
        Ok(Trace { family, formula_count, graphs, instance })
    }

    pub fn family(&self) -> &CoveringFamily {
        &self.family
    }

    pub fn formula_count(&self) -> usize {
        self.formula_count
    }

    pub fn index_count(&self) -> usize {
        self.family.index_count()
    }

    /// The distribution graph sequence `(G_α)`.
    pub fn graph_sequence(&self) -> &[IndexGraph] {
        &self.graphs
    }

    pub fn graph(&self, alpha: usize) -> &IndexGraph {
        &self.graphs[alpha]
    }

    pub fn instance(&self) -> Option<&LosInstance> {
        self.instance.as_ref()
    }

    /// Rebuilds a trace from its graph sequence.
    pub fn from_graph_sequence(
        family: CoveringFamily,
        formula_count: usize,
        graphs: Vec<IndexGraph>,
        instance: Option<LosInstance>,
    ) -> Result<Trace> {
        Trace::new(family, formula_count, graphs, instance)
    }

    pub fn with_graphs(&self, graphs: Vec<IndexGraph>) -> Result<Trace> {
        Trace::new(self.family.clone(), self.formula_count, graphs, self.instance.clone())
    }

    pub fn validate(&self) -> TraceReport {
        let nb = self.formula_count;
        let mut r = TraceReport::default();
        for b in 0..nb {
            if !self.family.contains(self.single(b)) {
                r.uncovered_formulas.push(b);
            }
        }
        for b in 0..nb {
            for c in b + 1..nb {
                if !self.family.contains(self.pair(b, c)) {
                    r.uncovered_pairs.push((b, c));
                }
            }
        }
        if let Some(inst) = &self.instance {
            for (a, (g, k)) in self.graphs.iter().zip(&inst.graphs).enumerate() {
                if !g.is_subgraph_of(k) {
                    r.instance_violations.push(a);
                }
            }
        }
        r
    }
}

impl PairDistribution for Trace {
    fn formula_count(&self) -> usize {
        self.formula_count
    }

    fn index_count(&self) -> usize {
        self.family.index_count()
    }

    fn single(&self, b: usize) -> IndexSet {
        self.graphs.iter().enumerate().filter(|(_, g)| g.has_vertex(b)).map(|(a, _)| a).collect()
    }

    fn pair(&self, b: usize, c: usize) -> IndexSet {
        self.graphs.iter().enumerate().filter(|(_, g)| g.has_edge(b, c)).map(|(a, _)| a).collect()
    }
}

/// A map from the nonempty subsets of `0..nb` (as masks) to subsets of `I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FullDistribution {
    formula_count: usize,
    index_count: usize,
    values: Vec<IndexSet>,
}

fn check_full_formulas(nb: usize) -> Result<()> {
    if nb > MAX_FULL_FORMULAS {
        return Err(Error::BoundExceeded { what: "formulas of a full distribution", requested: nb, max: MAX_FULL_FORMULAS });
    }
    Ok(())
}

impl FullDistribution {
    pub fn from_fn<F: FnMut(u64) -> IndexSet>(formula_count: usize, index_count: usize, mut f: F) -> Result<FullDistribution> {
        check_full_formulas(formula_count)?;
        check_indices(index_count)?;
        let mut values = alloc::vec![IndexSet::EMPTY; 1 << formula_count];
        for (d, v) in values.iter_mut().enumerate().skip(1) {
            let s = f(d as u64);
            check_subset(index_count, s)?;
            *v = s;
        }
        Ok(FullDistribution { formula_count, index_count, values })
    }

    /// `f(Δ)` for nonempty `Δ`.
    pub fn value(&self, delta: u64) -> IndexSet {
        assert!(delta != 0 && delta < self.values.len() as u64, "subset out of range");
        self.values[delta as usize]
    }

    pub fn set(&mut self, delta: u64, v: IndexSet) {
        assert!(delta != 0 && delta < self.values.len() as u64, "subset out of range");
        self.values[delta as usize] = IndexSet(v.0 & low(self.index_count));
    }

    pub fn formula_count(&self) -> usize {
        self.formula_count
    }

    pub fn index_count(&self) -> usize {
        self.index_count
    }

    /// Nonempty subsets of the formula set, ascending.
    pub fn subsets(&self) -> impl Iterator<Item = u64> {
        1..(1u64 << self.formula_count)
    }

    /// The graph-like distribution whose conjugate is the graph-like
    /// extension of `t`.
    pub fn graphlike_from_trace(t: &Trace) -> Result<FullDistribution> {
        distribution_from_conjugate(&graphlike_extension(t)?)
    }
}

impl PairDistribution for FullDistribution {
    fn formula_count(&self) -> usize {
        self.formula_count
    }

    fn index_count(&self) -> usize {
        self.index_count
    }

    fn single(&self, b: usize) -> IndexSet {
        self.value(bit(b))
    }

    fn pair(&self, b: usize, c: usize) -> IndexSet {
        self.value(bit(b) | bit(c))
    }
}

/// Conjugate sequence: `level(n, α)` lists the `n`-subsets `Δ` with
/// `α ∈ f(Δ)`, ascending, for `1 <= n <= nb`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conjugate {
    formula_count: usize,
    index_count: usize,
    levels: Vec<Vec<Vec<u64>>>,
}

impl Conjugate {
    /// Builds a conjugate from explicit levels (`levels[n - 1][α]`); masks are
    /// sorted and deduplicated, and each must have exactly `n` formulas.
    pub fn new(formula_count: usize, index_count: usize, mut levels: Vec<Vec<Vec<u64>>>) -> Result<Conjugate> {
        check_full_formulas(formula_count)?;
        check_indices(index_count)?;
        if levels.len() != formula_count || levels.iter().any(|l| l.len() != index_count) {
            return Err(Error::Mismatch("conjugate level shape".to_string()));
        }
        for (i, level) in levels.iter_mut().enumerate() {
            for sets in level.iter_mut() {
                if let Some(&d) = sets.iter().find(|d| d.count_ones() as usize != i + 1 || **d & !low(formula_count) != 0) {
                    return Err(Error::InvalidParameter(alloc::format!("subset {d:#b} does not belong to level {}", i + 1)));
                }
                sets.sort_unstable();
                sets.dedup();
            }
        }
        Ok(Conjugate { formula_count, index_count, levels })
    }

    pub fn formula_count(&self) -> usize {
        self.formula_count
    }

    pub fn index_count(&self) -> usize {
        self.index_count
    }

    /// `g_n(α)`; empty for `n = 0` or `n > nb`.
    pub fn level(&self, n: usize, alpha: usize) -> &[u64] {
        if n == 0 || n > self.formula_count {
            return &[];
        }
        &self.levels[n - 1][alpha]
    }

    pub fn contains(&self, alpha: usize, delta: u64) -> bool {
        self.level(delta.count_ones() as usize, alpha).binary_search(&delta).is_ok()
    }
}

pub fn conjugate(f: &FullDistribution) -> Conjugate {
    let (nb, ni) = (f.formula_count, f.index_count);
    let mut levels = alloc::vec![alloc::vec![Vec::new(); ni]; nb];
    for d in f.subsets() {
        for a in f.value(d).iter() {
            levels[d.count_ones() as usize - 1][a].push(d);
        }
    }
    Conjugate { formula_count: nb, index_count: ni, levels }
}

/// `f(Δ) = {α : Δ ∈ g_{|Δ|}(α)}`, after checking that every level is closed
/// under taking immediate subsets.
pub fn distribution_from_conjugate(g: &Conjugate) -> Result<FullDistribution> {
    for n in 2..=g.formula_count {
        for a in 0..g.index_count {
            for &d in g.level(n, a) {
                for x in ones(d) {
                    let sub = d & !bit(x);
                    if !g.contains(a, sub) {
                        return Err(Error::NonHereditary { index: a, subset: d, level: n - 1 });
                    }
                }
            }
        }
    }
    let mut f = FullDistribution::from_fn(g.formula_count, g.index_count, |_| IndexSet::EMPTY)?;
    for n in 1..=g.formula_count {
        for a in 0..g.index_count {
            for &d in g.level(n, a) {
                let mut v = f.value(d);
                v.insert(a);
                f.set(d, v);
            }
        }
    }
    Ok(f)
}

/// `g_n(α)`: the `n`-subsets of `g1(α)` all of whose pairs lie in `g2(α)`.
pub fn graphlike_extension(t: &Trace) -> Result<Conjugate> {
    let (nb, ni) = (t.formula_count, t.index_count());
    check_full_formulas(nb)?;
    let mut levels = alloc::vec![alloc::vec![Vec::new(); ni]; nb];
    for d in 1..(1u64 << nb) {
        for (a, g) in t.graphs.iter().enumerate() {
            if g.has_clique(d) {
                levels[d.count_ones() as usize - 1][a].push(d);
            }
        }
    }
    Ok(Conjugate { formula_count: nb, index_count: ni, levels })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PropertyReport {
    pub monotone: bool,
    /// `(Δ, Φ)` with `Δ ⊂ Φ` and `f(Δ) ⊉ f(Φ)`.
    pub monotone_witness: Option<(u64, u64)>,
    pub graph_like: bool,
    pub multiplicative: bool,
    pub pairwise_splitting: bool,
    /// Present when a Łoś instance was supplied.
    pub refines_los: Option<bool>,
}

pub fn check_properties(f: &FullDistribution, los: Option<&LosInstance>) -> PropertyReport {
    let mut r = PropertyReport { monotone: true, graph_like: true, multiplicative: true, pairwise_splitting: true, ..Default::default() };
    for d in f.subsets() {
        let v = f.value(d);
        if r.monotone_witness.is_none() {
            if let Some(x) = ones(d).find(|&x| d != bit(x) && !v.is_subset(f.value(d & !bit(x)))) {
                r.monotone = false;
                r.monotone_witness = Some((d & !bit(x), d));
            }
        }
        if d.count_ones() >= 2 {
            let mut meet = IndexSet::full(f.index_count);
            for b in ones(d) {
                for c in ones(d & !low(b + 1)) {
                    meet = meet.intersection(f.pair(b, c));
                }
            }
            r.graph_like &= v == meet;
        }
        let singles = ones(d).fold(IndexSet::full(f.index_count), |m, b| m.intersection(f.single(b)));
        r.multiplicative &= v == singles;
        if d.count_ones() == 2 {
            r.pairwise_splitting &= v == singles;
        }
    }
    r.refines_los = los.map(|inst| {
        f.subsets().all(|d| f.value(d).iter().all(|a| a < inst.graphs.len() && inst.graphs[a].has_clique(d)))
    });
    r
}

/// Whether every `G_α` of `t1` is a subgraph of `G_α` of `t2` and `t1` is
/// pair adequate.
pub fn is_refinement(t1: &Trace, t2: &Trace) -> Result<bool> {
    if t1.family != t2.family || t1.formula_count != t2.formula_count {
        return Err(Error::Mismatch("refinement needs the same family and formulas".to_string()));
    }
    let sub = t1.graphs.iter().zip(&t2.graphs).all(|(a, b)| a.is_subgraph_of(b));
    Ok(sub && t1.validate().pair_adequate())
}

/// Every nonempty `G_α` is complete.
pub fn is_multiplicative_trace(t: &Trace) -> bool {
    t.graphs.iter().all(|g| g.is_complete())
}

/// Indices with nonempty `G_α`; an error if they do not form a member.
pub fn essential_range(t: &Trace) -> Result<IndexSet> {
    let ess: IndexSet = t.graphs.iter().enumerate().filter(|(_, g)| !g.is_empty()).map(|(a, _)| a).collect();
    if !t.family.contains(ess) {
        return Err(Error::Inconsistent(alloc::format!("essential range {ess:?} is not a member of the family")));
    }
    Ok(ess)
}

/// The trace restricted to its essential range, indices renumbered in
/// ascending order.
pub fn restrict(t: &Trace) -> Result<Trace> {
    let ess = essential_range(t)?;
    let family = t.family.restrict(ess)?;
    let pick = |gs: &[IndexGraph]| -> Vec<IndexGraph> { ess.iter().map(|a| gs[a].clone()).collect() };
    let instance = t.instance.as_ref().map(|i| LosInstance { graphs: pick(&i.graphs) });
    Trace::new(family, t.formula_count, pick(&t.graphs), instance)
}

/// A refinement whose graphs are cliques `K_α ⊆ G_α` covering every formula
/// and every pair on a family member, if one exists.
///
/// Indices are assigned in order, each trying the maximal cliques of `G_α`
/// lexicographically (enlarging a clique never breaks a covering). A branch
/// is cut once some formula or pair could not reach a member even if every
/// remaining index covered it.
#[allow(clippy::needless_range_loop)]
pub fn find_multiplicative_refinement(t: &Trace) -> Option<Trace> {
    let (nb, ni) = (t.formula_count, t.index_count());
    let choices: Vec<Vec<u64>> = t
        .graphs
        .iter()
        .map(|g| if g.is_empty() { alloc::vec![0] } else { maximal_cliques_within(g.edges(), g.vertices()) })
        .collect();
    let pairs: Vec<(usize, usize)> = (0..nb).flat_map(|b| (b + 1..nb).map(move |c| (b, c))).collect();
    // rest[k]: indices >= k that could still cover each formula / pair.
    let mut rest_single = alloc::vec![alloc::vec![IndexSet::EMPTY; nb]; ni + 1];
    let mut rest_pair = alloc::vec![alloc::vec![IndexSet::EMPTY; pairs.len()]; ni + 1];
    for k in (0..ni).rev() {
        let g = &t.graphs[k];
        for b in 0..nb {
            let mut s = rest_single[k + 1][b];
            if g.has_vertex(b) {
                s.insert(k);
            }
            rest_single[k][b] = s;
        }
        for (p, &(b, c)) in pairs.iter().enumerate() {
            let mut s = rest_pair[k + 1][p];
            if g.has_edge(b, c) {
                s.insert(k);
            }
            rest_pair[k][p] = s;
        }
    }
    let mut search = RefinementSearch {
        family: &t.family,
        pairs: &pairs,
        choices: &choices,
        rest_single: &rest_single,
        rest_pair: &rest_pair,
        cov_single: alloc::vec![IndexSet::EMPTY; nb],
        cov_pair: alloc::vec![IndexSet::EMPTY; pairs.len()],
        chosen: alloc::vec![0; ni],
    };
    if !search.run(0) {
        return None;
    }
    let graphs = search.chosen.iter().map(|&k| IndexGraph::complete_on(nb, k)).collect();
    Some(t.with_graphs(graphs).expect("cliques lie inside the trace graphs"))
}

struct RefinementSearch<'a> {
    family: &'a CoveringFamily,
    pairs: &'a [(usize, usize)],
    choices: &'a [Vec<u64>],
    rest_single: &'a [Vec<IndexSet>],
    rest_pair: &'a [Vec<IndexSet>],
    cov_single: Vec<IndexSet>,
    cov_pair: Vec<IndexSet>,
    chosen: Vec<u64>,
}

impl RefinementSearch<'_> {
    fn feasible(&self, k: usize) -> bool {
        self.cov_single.iter().zip(&self.rest_single[k]).all(|(c, r)| self.family.contains(c.union(*r)))
            && self.cov_pair.iter().zip(&self.rest_pair[k]).all(|(c, r)| self.family.contains(c.union(*r)))
    }

    fn run(&mut self, k: usize) -> bool {
        if !self.feasible(k) {
            return false;
        }
        if k == self.choices.len() {
            return true;
        }
        for &clique in &self.choices[k] {
            let saved_single = self.cov_single.clone();
            let saved_pair = self.cov_pair.clone();
            for b in ones(clique) {
                self.cov_single[b].insert(k);
            }
            for (p, &(b, c)) in self.pairs.iter().enumerate() {
                if clique & bit(b) != 0 && clique & bit(c) != 0 {
                    self.cov_pair[p].insert(k);
                }
            }
            self.chosen[k] = clique;
            if self.run(k + 1) {
                return true;
            }
            self.cov_single = saved_single;
            self.cov_pair = saved_pair;
        }
        false
    }
}

/// A failure of the tree-shape pair condition: `α` lies in
/// `f(x0x1) ∩ f(x1x2) ∩ f(x2x3)` but in neither `f(x0x2)` nor `f(x1x3)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sop2Violation {
    pub quad: [usize; 4],
    pub index: usize,
}

/// Lexicographically least violating quadruple (and least index), or `None`
/// when the condition holds.
pub fn sop2_violation<D: PairDistribution + ?Sized>(d: &D) -> Option<Sop2Violation> {
    let nb = d.formula_count();
    let pair = |b: usize, c: usize| d.pair(b, c);
    for x0 in 0..nb {
        for x1 in (0..nb).filter(|&x| x != x0) {
            let p01 = pair(x0, x1);
            if p01.is_empty() {
                continue;
            }
            for x2 in (0..nb).filter(|&x| x != x0 && x != x1) {
                let p012 = p01.intersection(pair(x1, x2));
                let base = p012.0 & !pair(x0, x2).0;
                if base == 0 {
                    continue;
                }
                for x3 in (0..nb).filter(|&x| x != x0 && x != x1 && x != x2) {
                    let bad = base & pair(x2, x3).0 & !pair(x1, x3).0;
                    if bad != 0 {
                        return Some(Sop2Violation { quad: [x0, x1, x2, x3], index: bad.trailing_zeros() as usize });
                    }
                }
            }
        }
    }
    None
}

/// A failure of the necessary-set condition for obstruction `family`: with
/// `x` mapping its vertices into formulas, `index` lies in `f(x(a)x(b))` for
/// every edge `ab` of the obstruction but in no `f(x(c)x(d))` for the pairs
/// `cd` of its necessary set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NecessaryViolation {
    pub family: FamilyId,
    pub map: Vec<usize>,
    pub index: usize,
}

/// Checks the condition for every obstruction of `shape` with at most `nb`
/// vertices, using the drawn necessary sets. Obstructions are taken in
/// [`families_up_to`] order and maps lexicographically.
pub fn necessary_condition_violation<D: PairDistribution + ?Sized>(d: &D, shape: ShapeId) -> Result<Option<NecessaryViolation>> {
    let nb = d.formula_count();
    if nb > MAX_CONDITION_FORMULAS {
        return Err(Error::BoundExceeded { what: "formulas for the necessary-set condition", requested: nb, max: MAX_CONDITION_FORMULAS });
    }
    let ni = d.index_count();
    let mut pair = alloc::vec![IndexSet::EMPTY; nb * nb];
    for b in 0..nb {
        for c in 0..nb {
            if b != c {
                pair[b * nb + c] = d.pair(b, c);
            }
        }
    }
    for id in families_up_to(shape, nb) {
        let h = family_graph(id)?;
        let bh = paper_necessary_edges(id)?;
        let mut x = alloc::vec![0usize; h.n()];
        let ctx = ConditionSearch { h: &h, bh: &bh, nb, pair: &pair };
        if let Some(index) = ctx.extend(&mut x, 0, 0, IndexSet::full(ni)) {
            return Ok(Some(NecessaryViolation { family: id, map: x, index }));
        }
    }
    Ok(None)
}

struct ConditionSearch<'a> {
    h: &'a Graph,
    bh: &'a [(usize, usize)],
    nb: usize,
    pair: &'a [IndexSet],
}

impl ConditionSearch<'_> {
    fn extend(&self, x: &mut [usize], depth: usize, used: u64, meet: IndexSet) -> Option<usize> {
        if depth == x.len() {
            let cover = self.bh.iter().fold(0u64, |m, &(c, e)| m | self.pair[x[c] * self.nb + x[e]].0);
            let bad = meet.0 & !cover;
            return (bad != 0).then(|| bad.trailing_zeros() as usize);
        }
        for v in (0..self.nb).filter(|&v| used & bit(v) == 0) {
            let mut m = meet;
            for a in ones(self.h.neighbors(depth) & low(depth)) {
                m = m.intersection(self.pair[x[a] * self.nb + v]);
            }
            if m.is_empty() {
                continue;
            }
            x[depth] = v;
            if let Some(i) = self.extend(x, depth + 1, used | bit(v), m) {
                return Some(i);
            }
        }
        None
    }
}
