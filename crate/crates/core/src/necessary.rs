//! Necessary sets of non-edges for obstruction graphs.
//!
//! A set `B` of non-edges of `H` is necessary for `H` in a shape when every
//! injective edge-preserving map of `H` into a member of the shape sends some
//! pair of `B` to an edge. The image of such a map induces a member on
//! `|H|` vertices (shapes are closed under induced subgraphs), and pulling it
//! back along the map gives a member supergraph of `H` on `V(H)`. So `B` is
//! necessary iff it meets the added edges of every member supergraph of `H`
//! on `V(H)`, and it suffices to know the inclusion-minimal added-edge sets.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::bits::{bit, low, ones};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::shapes::{family_graph, is_member, FamilyId, ShapeId};

/// Largest number of non-edges of `H` the superset search accepts.
pub const MAX_NON_EDGES: usize = 22;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct NecessityFlags {
    pub necessary: bool,
    pub subset_minimal: bool,
    pub minimum_cardinality: bool,
    pub unique_minimum: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NecessarySet {
    pub host: Graph,
    /// Pairs `(u, v)` with `u < v`, sorted.
    pub edges: Vec<(usize, usize)>,
    pub flags: NecessityFlags,
}

/// Which minimality a necessary set is claimed to have.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Minimality {
    Subset,
    Cardinality,
    Unique,
}

impl NecessityFlags {
    pub fn satisfies(&self, claim: Minimality) -> bool {
        self.necessary
            && match claim {
                Minimality::Subset => self.subset_minimal,
                Minimality::Cardinality => self.minimum_cardinality,
                Minimality::Unique => self.unique_minimum,
            }
    }
}

impl fmt::Display for NecessityFlags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "necessary={} submin={} mincard={} unique={}",
            self.necessary as u8, self.subset_minimal as u8, self.minimum_cardinality as u8, self.unique_minimum as u8
        )
    }
}

/// The inclusion-minimal added-edge sets of member supergraphs of `host`.
///
/// Sets are masks over `non_edges` (bit `i` is `non_edges[i]`).
#[derive(Clone, Debug)]
pub struct Completions {
    pub shape: ShapeId,
    pub host: Graph,
    pub non_edges: Vec<(usize, usize)>,
    pub minimal: Vec<u64>,
}

impl Completions {
    /// Runs the level-by-level superset search.
    pub fn compute(shape: ShapeId, host: &Graph) -> Result<Completions> {
        let non_edges: Vec<(usize, usize)> = host.non_edges().collect();
        let k = non_edges.len();
        if k > MAX_NON_EDGES {
            return Err(Error::BoundExceeded { what: "non-edges of the obstruction", requested: k, max: MAX_NON_EDGES });
        }
        let mut minimal: Vec<u64> = Vec::new();
        for size in 0..=k {
            let found = Self::level(shape, host, &non_edges, size, &minimal, 0, 1);
            minimal.extend(found);
        }
        Ok(Completions { shape, host: host.clone(), non_edges, minimal })
    }

    /// Members among the `size`-subsets of non-edges that contain no set of
    /// `known`. Only every `stride`-th candidate starting at `offset` is
    /// examined, so callers can split one level across workers.
    pub fn level(
        shape: ShapeId,
        host: &Graph,
        non_edges: &[(usize, usize)],
        size: usize,
        known: &[u64],
        offset: usize,
        stride: usize,
    ) -> Vec<u64> {
        let k = non_edges.len();
        let mut out = Vec::new();
        for (i, s) in subsets_of_size(k, size).enumerate() {
            if i % stride != offset || known.iter().any(|&m| m & !s == 0) {
                continue;
            }
            let mut g = host.clone();
            for j in ones(s) {
                let (u, v) = non_edges[j];
                g.insert_edge(u, v);
            }
            if is_member(shape, &g) {
                out.push(s);
            }
        }
        out
    }

    /// Assembles the result of a search done elsewhere.
    pub fn from_parts(shape: ShapeId, host: &Graph, minimal: Vec<u64>) -> Completions {
        Completions { shape, host: host.clone(), non_edges: host.non_edges().collect(), minimal }
    }

    /// Converts a pair list into a mask over `non_edges`.
    pub fn mask_of(&self, b: &[(usize, usize)]) -> Result<u64> {
        let mut mask = 0;
        for &(u, v) in b {
            let (u, v) = (u.min(v), u.max(v));
            for w in [u, v] {
                if w >= self.host.n() {
                    return Err(Error::VertexOutOfRange { vertex: w, n: self.host.n() });
                }
            }
            if u == v {
                return Err(Error::SelfLoop { vertex: u });
            }
            match self.non_edges.iter().position(|&p| p == (u, v)) {
                Some(i) => mask |= bit(i),
                None => return Err(Error::NotANonEdge { u, v }),
            }
        }
        Ok(mask)
    }

    pub fn pairs_of(&self, mask: u64) -> Vec<(usize, usize)> {
        ones(mask).map(|i| self.non_edges[i]).collect()
    }

    pub fn is_necessary(&self, b: u64) -> bool {
        self.minimal.iter().all(|&m| m & b != 0)
    }

    /// Necessary, and no pair can be dropped: each pair is the only one of
    /// `b` inside some minimal completion.
    pub fn is_subset_minimal(&self, b: u64) -> bool {
        self.is_necessary(b) && ones(b).all(|i| self.minimal.iter().any(|&m| m & b == bit(i)))
    }

    /// All inclusion-minimal necessary sets (minimal transversals of the
    /// minimal completions), ordered by size then lexicographically.
    pub fn minimal_transversals(&self) -> Vec<u64> {
        let mut found = BTreeSet::new();
        self.branch(0, &mut found);
        let mut out: Vec<u64> = found.into_iter().filter(|&b| self.is_subset_minimal(b)).collect();
        out.sort_by(|&a, &b| {
            a.count_ones().cmp(&b.count_ones()).then_with(|| crate::graph::lex_cmp_masks(a, b))
        });
        out
    }

    // Every minimal transversal meets the first completion it has not yet
    // met in one of its own pairs, so branching on that completion's pairs
    // reaches it.
    fn branch(&self, chosen: u64, found: &mut BTreeSet<u64>) {
        match self.minimal.iter().find(|&&m| m & chosen == 0) {
            None => {
                found.insert(chosen);
            }
            Some(&m) => {
                for i in ones(m) {
                    let next = chosen | bit(i);
                    if self.is_subset_minimal_partial(next) {
                        self.branch(next, found);
                    }
                }
            }
        }
    }

    // A pair with no private completion so far can never gain one by adding
    // more pairs, so such partial sets cannot grow into minimal transversals.
    fn is_subset_minimal_partial(&self, b: u64) -> bool {
        ones(b).all(|i| self.minimal.iter().any(|&m| m & b == bit(i)))
    }

    /// Flags for `b` given the precomputed minimal transversals.
    pub fn flags_with(&self, b: u64, transversals: &[u64]) -> NecessityFlags {
        let necessary = self.is_necessary(b);
        let min = transversals.iter().map(|t| t.count_ones()).min();
        let minimum_cardinality = necessary && Some(b.count_ones()) == min;
        let at_min = transversals.iter().filter(|t| Some(t.count_ones()) == min).count();
        NecessityFlags {
            necessary,
            subset_minimal: self.is_subset_minimal(b),
            minimum_cardinality,
            unique_minimum: minimum_cardinality && at_min == 1,
        }
    }

    pub fn flags(&self, b: u64) -> NecessityFlags {
        self.flags_with(b, &self.minimal_transversals())
    }

    pub fn necessary_set(&self, b: u64, flags: NecessityFlags) -> NecessarySet {
        NecessarySet { host: self.host.clone(), edges: self.pairs_of(b), flags }
    }
}

/// Subsets of `0..k` with `size` elements in increasing numeric order.
fn subsets_of_size(k: usize, size: usize) -> impl Iterator<Item = u64> {
    let limit = bit(k);
    let first = if size > k { limit } else { low(size) };
    core::iter::successors(Some(first), move |&s| {
        if s == 0 {
            return None;
        }
        // Gosper's hack.
        let c = s & s.wrapping_neg();
        let r = s + c;
        Some((((r ^ s) >> 2) / c) | r)
    })
    .take_while(move |&s| s < limit || (size == 0 && s == 0))
    .take(if size == 0 { 1 } else { usize::MAX })
}

pub fn is_necessary(shape: ShapeId, h: &Graph, b: &[(usize, usize)]) -> Result<bool> {
    let c = Completions::compute(shape, h)?;
    Ok(c.is_necessary(c.mask_of(b)?))
}

/// Necessity and minimality flags of `b` for `h`.
pub fn evaluate(shape: ShapeId, h: &Graph, b: &[(usize, usize)]) -> Result<NecessarySet> {
    let c = Completions::compute(shape, h)?;
    let mask = c.mask_of(b)?;
    Ok(c.necessary_set(mask, c.flags(mask)))
}

/// All inclusion-minimal necessary sets of `h`, with flags.
pub fn minimal_necessary_sets(shape: ShapeId, h: &Graph) -> Result<Vec<NecessarySet>> {
    let c = Completions::compute(shape, h)?;
    let ts = c.minimal_transversals();
    Ok(ts.iter().map(|&t| c.necessary_set(t, c.flags_with(t, &ts))).collect())
}

/// The necessary set drawn for each family, in [`family_graph`] labels.
///
/// For `FamIV(2)` the general pattern would include `{1, 2}`, which is an
/// edge there; the unique minimum necessary set is returned instead.
pub fn paper_necessary_edges(id: FamilyId) -> Result<Vec<(usize, usize)>> {
    let id = id.validate()?;
    let mut e: Vec<(usize, usize)> = match id {
        FamilyId::C4 | FamilyId::L4 => alloc::vec![(0, 2), (1, 3)],
        FamilyId::FamIII(l) => core::iter::once((0, 2)).chain((4..=l).map(|k| (1, k - 1))).collect(),
        FamilyId::FamI => alloc::vec![(0, 2), (0, 4), (0, 6), (1, 3), (1, 5), (3, 5)],
        FamilyId::FamII => alloc::vec![(0, 6), (1, 3), (3, 5), (2, 4)],
        FamilyId::FamIV(2) => alloc::vec![(0, 4), (0, 5), (1, 2), (1, 3), (2, 5), (3, 4)],
        FamilyId::FamIV(m) => {
            let b = |i: usize| 3 + i;
            let mut v = alloc::vec![(b(1), b(m)), (1, 2), (1, 3)];
            v.extend((1..=m).map(|i| (0, b(i))));
            v
        }
        FamilyId::FamV(n) => {
            let mut v = alloc::vec![(1, 2), (0, 4)];
            v.extend((1..=n).map(|i| (3, 4 + i)));
            v
        }
    };
    for p in &mut e {
        *p = (p.0.min(p.1), p.0.max(p.1));
    }
    e.sort_unstable();
    Ok(e)
}

/// Minimality claimed for each family's drawn set.
pub fn paper_claim(id: FamilyId) -> Minimality {
    match id {
        FamilyId::C4 | FamilyId::L4 | FamilyId::FamIII(_) | FamilyId::FamI => Minimality::Subset,
        FamilyId::FamII | FamilyId::FamIV(_) => Minimality::Cardinality,
        FamilyId::FamV(_) => Minimality::Unique,
    }
}

/// The drawn set for `id` with flags computed against the family's shape.
pub fn paper_necessary_set(id: FamilyId) -> Result<NecessarySet> {
    let h = family_graph(id)?;
    evaluate(id.shape(), &h, &paper_necessary_edges(id)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn gosper_enumerates_all_sizes() {
        assert_eq!(subsets_of_size(4, 0).collect::<Vec<_>>(), vec![0]);
        assert_eq!(subsets_of_size(3, 2).collect::<Vec<_>>(), vec![0b011, 0b101, 0b110]);
        assert_eq!(subsets_of_size(3, 3).collect::<Vec<_>>(), vec![0b111]);
        assert_eq!(subsets_of_size(2, 3).count(), 0);
        let total: usize = (0..=6).map(|s| subsets_of_size(6, s).count()).sum();
        assert_eq!(total, 64);
    }

    #[test]
    fn c4_diagonals() {
        let c4 = Graph::cycle(4);
        let t = ShapeId::TreeComparability;
        assert!(is_necessary(t, &c4, &[(0, 2), (1, 3)]).unwrap());
        assert!(!is_necessary(t, &c4, &[(0, 2)]).unwrap());
        assert_eq!(is_necessary(t, &c4, &[(0, 1)]), Err(Error::NotANonEdge { u: 0, v: 1 }));
    }

    #[test]
    fn member_host_has_no_necessary_set() {
        let k3 = Graph::complete(3);
        let sets = minimal_necessary_sets(ShapeId::TreeComparability, &k3).unwrap();
        assert!(sets.is_empty());
    }
}
