//! Finite simple graphs on `0..n` stored as per-vertex bitmask rows.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::ControlFlow;

use crate::bits::{self, bit, ones};
use crate::error::{Error, Result};

/// Rows are `u64`, so a single graph has at most this many vertices.
pub const MAX_VERTICES: usize = 64;

/// Largest `n` accepted by [`enumerate_graphs`].
pub const MAX_ENUMERATION_N: usize = 8;

/// Largest `n` whose canonical code fits in a `u64`.
pub const MAX_CANONICAL_N: usize = 11;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    rows: Vec<u64>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    ///
    /// Panics if `n > MAX_VERTICES`; use [`Graph::try_empty`] for untrusted sizes.
    pub fn empty(n: usize) -> Graph {
        Graph::try_empty(n).expect("graph too large")
    }

    pub fn try_empty(n: usize) -> Result<Graph> {
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices { n, max: MAX_VERTICES });
        }
        Ok(Graph { n, rows: alloc::vec![0; n] })
    }

    pub fn complete(n: usize) -> Graph {
        let mut g = Graph::empty(n);
        let all = bits::low(n);
        for v in 0..n {
            g.rows[v] = all & !bit(v);
        }
        g
    }

    /// Path `0 - 1 - .. - (n-1)`.
    pub fn path(n: usize) -> Graph {
        let mut g = Graph::empty(n);
        for v in 1..n {
            g.insert_edge(v - 1, v);
        }
        g
    }

    /// Cycle `0 - 1 - .. - (n-1) - 0`, `n >= 3`.
    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "a cycle needs at least 3 vertices");
        let mut g = Graph::path(n);
        g.insert_edge(n - 1, 0);
        g
    }

    /// Builds a graph from an edge list, rejecting loops, out-of-range
    /// endpoints and repeated pairs (in either orientation).
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        let mut g = Graph::try_empty(n)?;
        for &(u, v) in edges {
            g.check_pair(u, v)?;
            if g.has_edge(u, v) {
                return Err(Error::DuplicateEdge { u, v });
            }
            g.insert_edge(u, v);
        }
        Ok(g)
    }

    fn check_pair(&self, u: usize, v: usize) -> Result<()> {
        for w in [u, v] {
            if w >= self.n {
                return Err(Error::VertexOutOfRange { vertex: w, n: self.n });
            }
        }
        if u == v {
            return Err(Error::SelfLoop { vertex: u });
        }
        Ok(())
    }

    /// Adds `{u, v}`; a no-op if already present. Panics on loops or
    /// out-of-range endpoints.
    pub fn insert_edge(&mut self, u: usize, v: usize) {
        assert!(u < self.n && v < self.n && u != v, "bad edge {u}-{v}");
        self.rows[u] |= bit(v);
        self.rows[v] |= bit(u);
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        if u < self.n && v < self.n {
            self.rows[u] &= !bit(v);
            self.rows[v] &= !bit(u);
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Mask of all vertices.
    #[inline]
    pub fn vertex_mask(&self) -> u64 {
        bits::low(self.n)
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.rows[u] >> v & 1 == 1
    }

    /// Neighborhood of `v` as a mask.
    #[inline]
    pub fn neighbors(&self, v: usize) -> u64 {
        self.rows[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| ones(self.rows[u] & !bits::low(u + 1)).map(move |v| (u, v)))
    }

    /// Non-adjacent pairs `(u, v)` with `u < v`, in lexicographic order.
    pub fn non_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let all = self.vertex_mask();
        (0..self.n).flat_map(move |u| {
            ones(!self.rows[u] & all & !bits::low(u + 1)).map(move |v| (u, v))
        })
    }

    /// True if the vertices of `mask` are pairwise adjacent.
    pub fn is_clique(&self, mask: u64) -> bool {
        ones(mask).all(|v| mask & !bit(v) & !self.rows[v] == 0)
    }

    pub fn is_complete(&self) -> bool {
        self.is_clique(self.vertex_mask())
    }

    pub fn complement(&self) -> Graph {
        let all = self.vertex_mask();
        let rows = (0..self.n).map(|v| !self.rows[v] & all & !bit(v)).collect();
        Graph { n: self.n, rows }
    }

    /// Subgraph induced by `s`, relabeled `0..|s|` by ascending original index.
    /// Duplicates in `s` are ignored.
    pub fn induced_subgraph(&self, s: &[usize]) -> Result<Graph> {
        let mut mask = 0u64;
        for &v in s {
            if v >= self.n {
                return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
            }
            mask |= bit(v);
        }
        Ok(self.induced_by_mask(mask))
    }

    /// Subgraph induced by the vertices in `mask` (bits beyond `n` ignored).
    pub fn induced_by_mask(&self, mask: u64) -> Graph {
        let mask = mask & self.vertex_mask();
        let keep: Vec<usize> = ones(mask).collect();
        let mut g = Graph::empty(keep.len());
        for (i, &u) in keep.iter().enumerate() {
            for (j, &v) in keep.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.insert_edge(i, j);
                }
            }
        }
        g
    }

    /// Relabels vertex `v` as `perm[v]`. `perm` must be a permutation of `0..n`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        let mut g = Graph::empty(self.n);
        for (u, v) in self.edges() {
            g.insert_edge(perm[u], perm[v]);
        }
        g
    }

    /// Same graph with `extra` isolated vertices appended.
    pub fn with_isolated(&self, extra: usize) -> Graph {
        let mut g = Graph::empty(self.n + extra);
        g.rows[..self.n].copy_from_slice(&self.rows);
        g
    }

    /// Edge-superset test on the same vertex set.
    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.n == other.n && self.rows.iter().zip(&other.rows).all(|(a, b)| a & !b == 0)
    }

    /// Connected components of the subgraph induced by `within`, as masks
    /// ordered by smallest vertex.
    pub fn components(&self, within: u64) -> Vec<u64> {
        let mut left = within & self.vertex_mask();
        let mut out = Vec::new();
        while left != 0 {
            let start = left & left.wrapping_neg();
            let mut comp = start;
            let mut frontier = start;
            while frontier != 0 {
                let mut next = 0;
                for v in ones(frontier) {
                    next |= self.rows[v];
                }
                next &= left & !comp;
                comp |= next;
                frontier = next;
            }
            left &= !comp;
            out.push(comp);
        }
        out
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph({}; ", self.n)?;
        let mut first = true;
        for (u, v) in self.edges() {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{u}-{v}")?;
        }
        f.write_str(")")
    }
}

/// Whether non-edges of the pattern must map to non-edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmbeddingMode {
    EdgesOnly,
    Induced,
}

/// Injective map from the vertices of a pattern graph into a host graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    pub map: Vec<usize>,
    pub mode: EmbeddingMode,
}

impl Embedding {
    /// Re-checks injectivity and edge (and non-edge) preservation.
    pub fn verify(&self, h: &Graph, g: &Graph) -> bool {
        if self.map.len() != h.n() {
            return false;
        }
        let mut used = 0u64;
        for &v in &self.map {
            if v >= g.n() || used & bit(v) != 0 {
                return false;
            }
            used |= bit(v);
        }
        for a in 0..h.n() {
            for b in a + 1..h.n() {
                let he = h.has_edge(a, b);
                let ge = g.has_edge(self.map[a], self.map[b]);
                match self.mode {
                    EmbeddingMode::EdgesOnly if he && !ge => return false,
                    EmbeddingMode::Induced if he != ge => return false,
                    _ => {}
                }
            }
        }
        true
    }
}

/// Visits every embedding of `h` into `g` in lexicographic order of the
/// mapped-vertex sequence, stopping early when `visit` breaks.
pub fn for_each_embedding<F>(h: &Graph, g: &Graph, mode: EmbeddingMode, mut visit: F)
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    if h.n() > g.n() {
        return;
    }
    let mut map = alloc::vec![0usize; h.n()];
    let _ = extend_embedding(h, g, mode, 0, 0, &mut map, &mut visit);
}

fn extend_embedding<F>(
    h: &Graph,
    g: &Graph,
    mode: EmbeddingMode,
    depth: usize,
    used: u64,
    map: &mut [usize],
    visit: &mut F,
) -> ControlFlow<()>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    if depth == h.n() {
        return visit(map);
    }
    let mut cand = g.vertex_mask() & !used;
    let hrow = h.neighbors(depth);
    for (w, &mw) in map.iter().enumerate().take(depth) {
        if hrow >> w & 1 == 1 {
            cand &= g.neighbors(mw);
        } else if mode == EmbeddingMode::Induced {
            cand &= !g.neighbors(mw);
        }
    }
    let need = h.degree(depth);
    for v in ones(cand) {
        if g.degree(v) < need {
            continue;
        }
        map[depth] = v;
        extend_embedding(h, g, mode, depth + 1, used | bit(v), map, visit)?;
    }
    ControlFlow::Continue(())
}

/// Lexicographically least embedding of `h` into `g`, if any.
pub fn find_embedding(h: &Graph, g: &Graph, mode: EmbeddingMode) -> Option<Embedding> {
    let mut found = None;
    for_each_embedding(h, g, mode, |m| {
        found = Some(m.to_vec());
        ControlFlow::Break(())
    });
    found.map(|map| Embedding { map, mode })
}

/// All embeddings of `h` into `g`, lexicographically ordered.
pub fn embeddings(h: &Graph, g: &Graph, mode: EmbeddingMode) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_embedding(h, g, mode, |m| {
        out.push(m.to_vec());
        ControlFlow::Continue(())
    });
    out
}

pub fn automorphisms(g: &Graph) -> Vec<Vec<usize>> {
    embeddings(g, g, EmbeddingMode::Induced)
}

pub fn is_isomorphic(a: &Graph, b: &Graph) -> bool {
    if a.n() != b.n() || a.edge_count() != b.edge_count() {
        return false;
    }
    let mut da: Vec<usize> = (0..a.n()).map(|v| a.degree(v)).collect();
    let mut db: Vec<usize> = (0..b.n()).map(|v| b.degree(v)).collect();
    da.sort_unstable();
    db.sort_unstable();
    da == db && find_embedding(a, b, EmbeddingMode::Induced).is_some()
}

#[inline]
fn pair_index(i: usize, j: usize) -> usize {
    // j < i
    i * (i - 1) / 2 + j
}

/// Canonical code: the lexicographically least adjacency bit string over all
/// vertex orders, reading pairs `(i, j)`, `j < i`, by `i` then `j`.
///
/// The first bit of the string is the most significant bit of the code, so
/// numeric order on codes agrees with lexicographic order on strings.
pub fn canonical_code(g: &Graph) -> Result<u64> {
    let n = g.n();
    if n > MAX_CANONICAL_N {
        return Err(Error::BoundExceeded { what: "canonical form vertices", requested: n, max: MAX_CANONICAL_N });
    }
    if n < 2 {
        return Ok(0);
    }
    let total = n * (n - 1) / 2;
    let mut search = CanonSearch { g, n, total, order: [0; MAX_CANONICAL_N], best: u64::MAX };
    search.place(0, 0, 0);
    Ok(search.best)
}

struct CanonSearch<'a> {
    g: &'a Graph,
    n: usize,
    total: usize,
    order: [usize; MAX_CANONICAL_N],
    best: u64,
}

impl CanonSearch<'_> {
    fn place(&mut self, depth: usize, placed: u64, code: u64) {
        if depth == self.n {
            if code < self.best {
                self.best = code;
            }
            return;
        }
        let remaining = self.g.vertex_mask() & !placed;
        let mut tried = 0u64;
        let covered = depth * (depth + 1) / 2;
        let shift = self.total - covered;
        for v in ones(remaining) {
            // Swapping twins fixes everything already placed, so their subtrees agree.
            if ones(tried).any(|u| self.twins(u, v)) {
                continue;
            }
            tried |= bit(v);
            let mut next = code;
            let row = self.g.neighbors(v);
            for j in 0..depth {
                if row >> self.order[j] & 1 == 1 {
                    next |= 1u64 << (self.total - 1 - pair_index(depth, j));
                }
            }
            if self.best != u64::MAX && (next >> shift) > (self.best >> shift) {
                continue;
            }
            self.order[depth] = v;
            self.place(depth + 1, placed | bit(v), next);
        }
    }

    fn twins(&self, u: usize, v: usize) -> bool {
        let mask = !(bit(u) | bit(v));
        self.g.neighbors(u) & mask == self.g.neighbors(v) & mask
    }
}

/// Rebuilds the graph whose canonical string is `code`.
pub fn graph_from_code(n: usize, code: u64) -> Graph {
    let mut g = Graph::empty(n);
    if n < 2 {
        return g;
    }
    let total = n * (n - 1) / 2;
    for i in 1..n {
        for j in 0..i {
            if code >> (total - 1 - pair_index(i, j)) & 1 == 1 {
                g.insert_edge(i, j);
            }
        }
    }
    g
}

/// Canonical codes of every graph obtained from a graph in `prev` by adding
/// one vertex with an arbitrary neighborhood.
pub fn one_vertex_extensions(prev: &[Graph]) -> Result<BTreeSet<u64>> {
    let mut out = BTreeSet::new();
    for g in prev {
        let n = g.n();
        for nb in 0..(1u64 << n) {
            let mut h = g.with_isolated(1);
            for v in ones(nb) {
                h.insert_edge(v, n);
            }
            out.insert(canonical_code(&h)?);
        }
    }
    Ok(out)
}

/// One representative (in canonical labeling) per isomorphism class of
/// graphs on `n` vertices, sorted by canonical code.
pub fn enumerate_graphs(n: usize) -> Result<Vec<Graph>> {
    enumerate_graphs_with(n, one_vertex_extensions)
}

/// Same as [`enumerate_graphs`], with the per-level extension step supplied
/// by the caller (the `ugl` crate passes a threaded version).
pub fn enumerate_graphs_with<F>(n: usize, mut extend: F) -> Result<Vec<Graph>>
where
    F: FnMut(&[Graph]) -> Result<BTreeSet<u64>>,
{
    if n > MAX_ENUMERATION_N {
        return Err(Error::BoundExceeded { what: "enumeration vertices", requested: n, max: MAX_ENUMERATION_N });
    }
    let mut level = alloc::vec![Graph::empty(0)];
    for k in 1..=n {
        let codes = extend(&level)?;
        level = codes.into_iter().map(|c| graph_from_code(k, c)).collect();
    }
    Ok(level)
}

/// All graph classes with `1..=max_n` vertices, smallest first.
pub fn enumerate_graphs_up_to(max_n: usize) -> Result<Vec<Graph>> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        out.extend(enumerate_graphs(n)?);
    }
    Ok(out)
}

/// Orders vertex masks by their ascending vertex lists, lexicographically.
pub fn lex_cmp_masks(a: u64, b: u64) -> Ordering {
    ones(a).cmp(ones(b))
}

/// Inclusion-maximal cliques (Bron–Kerbosch with pivoting), sorted
/// lexicographically by vertex list.
pub fn maximal_cliques(g: &Graph) -> Vec<u64> {
    let mut out = Vec::new();
    if g.n() == 0 {
        return out;
    }
    bron_kerbosch(g, 0, g.vertex_mask(), 0, &mut out);
    out.sort_by(|&a, &b| lex_cmp_masks(a, b));
    out
}

/// Maximal cliques of the subgraph induced by `within`.
pub fn maximal_cliques_within(g: &Graph, within: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let within = within & g.vertex_mask();
    if within == 0 {
        return out;
    }
    bron_kerbosch(g, 0, within, 0, &mut out);
    out.sort_by(|&a, &b| lex_cmp_masks(a, b));
    out
}

fn bron_kerbosch(g: &Graph, r: u64, mut p: u64, mut x: u64, out: &mut Vec<u64>) {
    if p == 0 {
        if x == 0 {
            out.push(r);
        }
        return;
    }
    let pivot = ones(p | x).max_by_key(|&u| (g.neighbors(u) & p).count_ones()).unwrap();
    for v in ones(p & !g.neighbors(pivot)) {
        let nv = g.neighbors(v);
        bron_kerbosch(g, r | bit(v), p & nv, x & nv, out);
        p &= !bit(v);
        x |= bit(v);
    }
}
