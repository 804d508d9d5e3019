//! The two graph shapes: comparability graphs of rooted forests and interval
//! intersection graphs, with recognizers, an interval realizer and the
//! named obstruction families.

use alloc::collections::BTreeSet;
use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::bits::{bit, ones};
use crate::error::{Error, Result};
use crate::graph::{self, canonical_code, find_embedding, Embedding, EmbeddingMode, Graph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ShapeId {
    TreeComparability,
    IntervalIntersection,
}

impl fmt::Display for ShapeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ShapeId::TreeComparability => "tree",
            ShapeId::IntervalIntersection => "interval",
        })
    }
}

impl FromStr for ShapeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<ShapeId> {
        match s {
            "tree" => Ok(ShapeId::TreeComparability),
            "interval" => Ok(ShapeId::IntervalIntersection),
            _ => Err(Error::InvalidParameter(alloc::format!("unknown shape `{s}`"))),
        }
    }
}

/// Named obstruction graphs. Vertex orders used by [`family_graph`]:
///
/// * `C4`: cycle 0-1-2-3-0. `L4`: path 0-1-2-3.
/// * `FamI`: center 0, arms 0-1-2, 0-3-4, 0-5-6.
/// * `FamII`: `v1..v7` as `0..6`.
/// * `FamIII(l)`: cycle on `0..l`, label `i` as `i - 1`.
/// * `FamIV(m)`: α=0, γ=1, β=2, δ=3, bottom vertex `i` as `3 + i`.
/// * `FamV(n)`: δ=0, ε=1, α=2, β=3, γ=4, bottom vertex `i` as `4 + i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyId {
    C4,
    L4,
    FamI,
    FamII,
    FamIII(usize),
    FamIV(usize),
    FamV(usize),
}

impl FamilyId {
    pub fn validate(self) -> Result<FamilyId> {
        let bad = |msg: &str| Err(Error::InvalidParameter(msg.to_string()));
        match self {
            FamilyId::FamIII(l) if l < 4 => bad("FamIII needs l >= 4"),
            FamilyId::FamIV(m) if m < 2 => bad("FamIV needs m >= 2"),
            FamilyId::FamV(n) if n < 1 => bad("FamV needs n >= 1"),
            _ if self.vertex_count() > graph::MAX_VERTICES => {
                Err(Error::TooManyVertices { n: self.vertex_count(), max: graph::MAX_VERTICES })
            }
            _ => Ok(self),
        }
    }

    pub fn vertex_count(self) -> usize {
        match self {
            FamilyId::C4 | FamilyId::L4 => 4,
            FamilyId::FamI | FamilyId::FamII => 7,
            FamilyId::FamIII(l) => l,
            FamilyId::FamIV(m) => m + 4,
            FamilyId::FamV(n) => n + 5,
        }
    }

    /// The shape this family obstructs.
    pub fn shape(self) -> ShapeId {
        match self {
            FamilyId::C4 | FamilyId::L4 => ShapeId::TreeComparability,
            _ => ShapeId::IntervalIntersection,
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyId::C4 => f.write_str("C4"),
            FamilyId::L4 => f.write_str("L4"),
            FamilyId::FamI => f.write_str("I"),
            FamilyId::FamII => f.write_str("II"),
            FamilyId::FamIII(l) => write!(f, "III_{l}"),
            FamilyId::FamIV(m) => write!(f, "IV_{m}"),
            FamilyId::FamV(n) => write!(f, "V_{n}"),
        }
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<FamilyId> {
        let param = |rest: &str| {
            rest.parse::<usize>()
                .map_err(|_| Error::InvalidParameter(alloc::format!("bad family parameter in `{s}`")))
        };
        let id = match s {
            "C4" => FamilyId::C4,
            "L4" => FamilyId::L4,
            "I" => FamilyId::FamI,
            "II" => FamilyId::FamII,
            _ => {
                if let Some(rest) = s.strip_prefix("III_") {
                    FamilyId::FamIII(param(rest)?)
                } else if let Some(rest) = s.strip_prefix("IV_") {
                    FamilyId::FamIV(param(rest)?)
                } else if let Some(rest) = s.strip_prefix("V_") {
                    FamilyId::FamV(param(rest)?)
                } else {
                    return Err(Error::InvalidParameter(alloc::format!("unknown family `{s}`")));
                }
            }
        };
        id.validate()
    }
}

pub fn family_graph(id: FamilyId) -> Result<Graph> {
    let id = id.validate()?;
    let mut g = Graph::empty(id.vertex_count());
    match id {
        FamilyId::C4 => return Ok(Graph::cycle(4)),
        FamilyId::L4 => return Ok(Graph::path(4)),
        FamilyId::FamIII(l) => return Ok(Graph::cycle(l)),
        FamilyId::FamI => {
            for (u, v) in [(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)] {
                g.insert_edge(u, v);
            }
        }
        FamilyId::FamII => {
            for k in 1..=5 {
                g.insert_edge(0, k);
            }
            for k in 1..5 {
                g.insert_edge(k, k + 1);
            }
            g.insert_edge(3, 6);
        }
        FamilyId::FamIV(m) => {
            let (alpha, gamma, beta, delta) = (0, 1, 2, 3);
            let b = |i: usize| 3 + i;
            g.insert_edge(alpha, gamma);
            for i in 1..=m {
                g.insert_edge(gamma, b(i));
            }
            g.insert_edge(beta, b(1));
            g.insert_edge(b(m), delta);
            for i in 1..m {
                g.insert_edge(b(i), b(i + 1));
            }
        }
        FamilyId::FamV(n) => {
            let (delta, eps, alpha, beta, gamma) = (0, 1, 2, 3, 4);
            let b = |i: usize| 4 + i;
            g.insert_edge(delta, eps);
            for i in 1..=n {
                g.insert_edge(delta, b(i));
                g.insert_edge(eps, b(i));
            }
            for i in 1..n {
                g.insert_edge(b(i), b(i + 1));
            }
            g.insert_edge(alpha, b(1));
            g.insert_edge(alpha, delta);
            g.insert_edge(beta, delta);
            g.insert_edge(beta, eps);
            g.insert_edge(gamma, eps);
            g.insert_edge(gamma, b(n));
        }
    }
    Ok(g)
}

/// Families with exactly `n` vertices that obstruct `shape`.
pub fn families_of_order(shape: ShapeId, n: usize) -> Vec<FamilyId> {
    match shape {
        ShapeId::TreeComparability if n == 4 => alloc::vec![FamilyId::C4, FamilyId::L4],
        ShapeId::TreeComparability => Vec::new(),
        ShapeId::IntervalIntersection => {
            let mut out = Vec::new();
            if n >= 4 {
                out.push(FamilyId::FamIII(n));
            }
            if n >= 6 {
                out.push(FamilyId::FamIV(n - 4));
                out.push(FamilyId::FamV(n - 5));
            }
            if n == 7 {
                out.push(FamilyId::FamI);
                out.push(FamilyId::FamII);
            }
            out
        }
    }
}

/// The named obstructions of `shape` with at most `max_n` vertices.
pub fn families_up_to(shape: ShapeId, max_n: usize) -> Vec<FamilyId> {
    (0..=max_n.min(graph::MAX_VERTICES)).flat_map(|n| families_of_order(shape, n)).collect()
}

/// The named family isomorphic to `g`, if any.
pub fn identify_family(g: &Graph) -> Option<FamilyId> {
    [ShapeId::TreeComparability, ShapeId::IntervalIntersection]
        .into_iter()
        .flat_map(|s| families_of_order(s, g.n()))
        .find(|&id| family_graph(id).is_ok_and(|h| graph::is_isomorphic(&h, g)))
}

/// Lexicographically least `(x0, x1, x2, x3)` with `x0-x1-x2-x3` a path of
/// edges on distinct vertices and neither `x0x2` nor `x1x3` an edge.
pub fn diagonal_violation(g: &Graph) -> Option<[usize; 4]> {
    for x0 in 0..g.n() {
        for x1 in ones(g.neighbors(x0)) {
            for x2 in ones(g.neighbors(x1) & !bit(x0)) {
                if g.has_edge(x0, x2) {
                    continue;
                }
                let x3s = g.neighbors(x2) & !bit(x0) & !bit(x1) & !g.neighbors(x1);
                if let Some(x3) = ones(x3s).next() {
                    return Some([x0, x1, x2, x3]);
                }
            }
        }
    }
    None
}

pub fn is_diagonal(g: &Graph) -> bool {
    diagonal_violation(g).is_none()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WitnessKind {
    IrreducibleCycle,
    AsteroidalTriple,
    ForbiddenFamily,
}

impl fmt::Display for WitnessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WitnessKind::IrreducibleCycle => "irreducible-cycle",
            WitnessKind::AsteroidalTriple => "asteroidal-triple",
            WitnessKind::ForbiddenFamily => "forbidden-family",
        })
    }
}

impl FromStr for WitnessKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<WitnessKind> {
        match s {
            "irreducible-cycle" => Ok(WitnessKind::IrreducibleCycle),
            "asteroidal-triple" => Ok(WitnessKind::AsteroidalTriple),
            "forbidden-family" => Ok(WitnessKind::ForbiddenFamily),
            _ => Err(Error::InvalidParameter(alloc::format!("unknown witness kind `{s}`"))),
        }
    }
}

/// Certificate that a graph is not a member of a shape.
///
/// For cycles, `vertices` lists the cycle in order. For a forbidden family,
/// `vertices` is the image of the family's vertices `0, 1, ..` in order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionWitness {
    pub kind: WitnessKind,
    pub vertices: Vec<usize>,
    pub family: Option<FamilyId>,
    pub embedding: Option<Embedding>,
}

impl ObstructionWitness {
    pub fn forbidden(id: FamilyId, e: Embedding) -> ObstructionWitness {
        ObstructionWitness {
            kind: WitnessKind::ForbiddenFamily,
            vertices: e.map.clone(),
            family: Some(id),
            embedding: Some(e),
        }
    }

    /// Re-checks the certificate against `g`.
    pub fn verify(&self, g: &Graph) -> bool {
        if self.vertices.iter().any(|&v| v >= g.n()) {
            return false;
        }
        let distinct = self.vertices.iter().collect::<BTreeSet<_>>().len() == self.vertices.len();
        if !distinct {
            return false;
        }
        match self.kind {
            WitnessKind::IrreducibleCycle => is_chordless_cycle(g, &self.vertices),
            WitnessKind::AsteroidalTriple => match self.vertices[..] {
                [a, b, c] => is_asteroidal(g, a, b, c),
                _ => false,
            },
            WitnessKind::ForbiddenFamily => {
                let Some(id) = self.family else { return false };
                let Ok(h) = family_graph(id) else { return false };
                let e = match &self.embedding {
                    Some(e) => e.clone(),
                    None => Embedding { map: self.vertices.clone(), mode: EmbeddingMode::Induced },
                };
                e.mode == EmbeddingMode::Induced && e.map == self.vertices && e.verify(&h, g)
            }
        }
    }
}

fn is_chordless_cycle(g: &Graph, cycle: &[usize]) -> bool {
    let k = cycle.len();
    if k < 4 {
        return false;
    }
    (0..k).all(|i| {
        (i + 1..k).all(|j| {
            let consecutive = j == i + 1 || (i == 0 && j == k - 1);
            g.has_edge(cycle[i], cycle[j]) == consecutive
        })
    })
}

fn closed_neighborhood(g: &Graph, v: usize) -> u64 {
    g.neighbors(v) | bit(v)
}

/// Whether `u` and `w` lie in one component of `g` minus the closed
/// neighborhood of `v`.
fn connected_avoiding(g: &Graph, u: usize, w: usize, v: usize) -> bool {
    let within = g.vertex_mask() & !closed_neighborhood(g, v);
    if within & bit(u) == 0 || within & bit(w) == 0 {
        return false;
    }
    g.components(within).into_iter().any(|c| c & bit(u) != 0 && c & bit(w) != 0)
}

fn is_asteroidal(g: &Graph, a: usize, b: usize, c: usize) -> bool {
    !g.has_edge(a, b)
        && !g.has_edge(a, c)
        && !g.has_edge(b, c)
        && connected_avoiding(g, a, b, c)
        && connected_avoiding(g, a, c, b)
        && connected_avoiding(g, b, c, a)
}

/// A chordless cycle of length at least 4, found by extending induced paths
/// whose start is their least vertex.
pub fn find_irreducible_cycle(g: &Graph) -> Option<Vec<usize>> {
    let mut path = Vec::with_capacity(g.n());
    for s in 0..g.n() {
        path.clear();
        path.push(s);
        if extend_induced_path(g, &mut path, bit(s)) {
            return Some(path);
        }
    }
    None
}

fn extend_induced_path(g: &Graph, path: &mut Vec<usize>, on_path: u64) -> bool {
    let s = path[0];
    let last = *path.last().unwrap();
    // Vertices adjacent to an interior path vertex would create a chord.
    let mut interior = 0u64;
    for &p in path.iter().take(path.len() - 1).skip(1) {
        interior |= g.neighbors(p);
    }
    let above_s = !crate::bits::low(s + 1);
    let cand = g.neighbors(last) & !on_path & !interior & above_s;
    for v in ones(cand) {
        let closes = path.len() >= 2 && g.has_edge(v, s);
        if closes {
            if path.len() >= 3 {
                path.push(v);
                return true;
            }
            continue;
        }
        path.push(v);
        if extend_induced_path(g, path, on_path | bit(v)) {
            return true;
        }
        path.pop();
    }
    false
}

/// Lexicographically least asteroidal triple `a < b < c`.
#[allow(clippy::needless_range_loop)]
pub fn find_asteroidal_triple(g: &Graph) -> Option<[usize; 3]> {
    let n = g.n();
    // comps[v][u]: the component of g - N[v] containing u (0 if u in N[v]).
    let comps: Vec<Vec<u64>> = (0..n)
        .map(|v| {
            let mut of = alloc::vec![0u64; n];
            for c in g.components(g.vertex_mask() & !closed_neighborhood(g, v)) {
                for u in ones(c) {
                    of[u] = c;
                }
            }
            of
        })
        .collect();
    for a in 0..n {
        for b in ones(!g.neighbors(a) & !crate::bits::low(a + 1) & g.vertex_mask()) {
            let ab_free = !g.neighbors(a) & !g.neighbors(b) & !crate::bits::low(b + 1);
            for c in ones(ab_free & g.vertex_mask()) {
                if comps[c][a] & bit(b) != 0 && comps[b][a] & bit(c) != 0 && comps[a][b] & bit(c) != 0 {
                    return Some([a, b, c]);
                }
            }
        }
    }
    None
}

/// Membership in `shape`, or a certificate of non-membership.
///
/// Tree shape: induced C4, then induced L4 (least embedding). Interval shape:
/// chordless cycle of length >= 4, then asteroidal triple.
pub fn recognize(shape: ShapeId, g: &Graph) -> core::result::Result<(), ObstructionWitness> {
    match shape {
        ShapeId::TreeComparability => {
            for id in [FamilyId::C4, FamilyId::L4] {
                let h = family_graph(id).expect("fixed family");
                if let Some(e) = find_embedding(&h, g, EmbeddingMode::Induced) {
                    return Err(ObstructionWitness::forbidden(id, e));
                }
            }
            Ok(())
        }
        ShapeId::IntervalIntersection => {
            if let Some(cycle) = find_irreducible_cycle(g) {
                return Err(ObstructionWitness {
                    kind: WitnessKind::IrreducibleCycle,
                    vertices: cycle,
                    family: None,
                    embedding: None,
                });
            }
            if let Some(t) = find_asteroidal_triple(g) {
                return Err(ObstructionWitness {
                    kind: WitnessKind::AsteroidalTriple,
                    vertices: t.to_vec(),
                    family: None,
                    embedding: None,
                });
            }
            Ok(())
        }
    }
}

/// Membership test used by enumeration code: the diagonal property for the
/// tree shape, the interval realizer for the interval shape.
pub fn is_member(shape: ShapeId, g: &Graph) -> bool {
    match shape {
        ShapeId::TreeComparability => is_diagonal(g),
        ShapeId::IntervalIntersection => interval_event_order(g).is_some(),
    }
}

/// Open intervals `(a, b)` with integer endpoints, one per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalModel {
    pub intervals: Vec<(i64, i64)>,
}

impl IntervalModel {
    /// Each interval is nonempty and `{u, v}` is an edge of `g` exactly when
    /// the open intervals of `u` and `v` meet.
    pub fn verify(&self, g: &Graph) -> bool {
        if self.intervals.len() != g.n() || self.intervals.iter().any(|&(a, b)| a >= b) {
            return false;
        }
        (0..g.n()).all(|u| {
            (u + 1..g.n()).all(|v| {
                let (au, bu) = self.intervals[u];
                let (av, bv) = self.intervals[v];
                (au.max(av) < bu.min(bv)) == g.has_edge(u, v)
            })
        })
    }

    pub fn has_distinct_endpoints(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.intervals.iter().all(|&(a, b)| seen.insert(a) && seen.insert(b))
    }

    /// The intersection graph of the intervals.
    pub fn intersection_graph(&self) -> Result<Graph> {
        let n = self.intervals.len();
        let mut g = Graph::try_empty(n)?;
        for u in 0..n {
            for v in u + 1..n {
                let (au, bu) = self.intervals[u];
                let (av, bv) = self.intervals[v];
                if au.max(av) < bu.min(bv) {
                    g.insert_edge(u, v);
                }
            }
        }
        Ok(g)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Event {
    Open(usize),
    Close(usize),
}

/// Searches for an order of the 2n endpoint events realizing `g`.
///
/// Opening `v` needs every currently open interval to be a neighbor of `v`
/// and no neighbor of `v` already closed; `u` closes as soon as all of its
/// neighbors have opened, which never hurts later choices. The state is then
/// determined by the opened set, and failed states are memoised.
fn interval_event_order(g: &Graph) -> Option<Vec<Event>> {
    let mut events = Vec::with_capacity(2 * g.n());
    let mut failed = BTreeSet::new();
    if realize_from(g, 0, 0, &mut events, &mut failed) {
        Some(events)
    } else {
        None
    }
}

fn realize_from(g: &Graph, opened: u64, closed: u64, events: &mut Vec<Event>, failed: &mut BTreeSet<u64>) -> bool {
    let all = g.vertex_mask();
    if closed == all {
        return true;
    }
    if failed.contains(&opened) {
        return false;
    }
    let open_now = opened & !closed;
    for v in ones(all & !opened) {
        let nv = g.neighbors(v);
        if open_now & !nv != 0 || closed & nv != 0 {
            continue;
        }
        let mark = events.len();
        events.push(Event::Open(v));
        let opened2 = opened | bit(v);
        let mut closed2 = closed;
        for u in ones(opened2 & !closed) {
            if g.neighbors(u) & !opened2 == 0 {
                events.push(Event::Close(u));
                closed2 |= bit(u);
            }
        }
        if realize_from(g, opened2, closed2, events, failed) {
            return true;
        }
        events.truncate(mark);
    }
    failed.insert(opened);
    false
}

/// An interval model of `g`, or an obstruction certificate.
///
/// With `distinct_endpoints` the endpoints are exactly `0..2n`; otherwise
/// coordinates are compacted so that only an open followed by a close
/// advances the coordinate.
pub fn realize_intervals(g: &Graph, distinct_endpoints: bool) -> core::result::Result<IntervalModel, ObstructionWitness> {
    let Some(events) = interval_event_order(g) else {
        return Err(match recognize(ShapeId::IntervalIntersection, g) {
            Err(w) => w,
            Ok(()) => unreachable!("interval realizer and recognizer disagree on {g:?}"),
        });
    };
    let mut intervals = alloc::vec![(0i64, 0i64); g.n()];
    let mut coord = 0i64;
    let mut prev_open = false;
    for (i, e) in events.iter().enumerate() {
        let x = if distinct_endpoints {
            i as i64
        } else {
            if matches!(e, Event::Close(_)) && prev_open {
                coord += 1;
            }
            coord
        };
        match *e {
            Event::Open(v) => {
                intervals[v].0 = x;
                prev_open = true;
            }
            Event::Close(v) => {
                intervals[v].1 = x;
                prev_open = false;
            }
        }
    }
    Ok(IntervalModel { intervals })
}

/// Largest `max_n` accepted by [`minimal_obstructions`] and
/// [`forest_comparability_classes`].
pub const MAX_OBSTRUCTION_N: usize = 7;

/// `g` is a non-member all of whose vertex-deleted subgraphs are members.
/// Both shapes are closed under induced subgraphs, so this is minimality.
pub fn is_minimal_obstruction(shape: ShapeId, g: &Graph) -> bool {
    if is_member(shape, g) {
        return false;
    }
    let all = g.vertex_mask();
    ones(all).all(|v| is_member(shape, &g.induced_by_mask(all & !bit(v))))
}

fn check_obstruction_bound(max_n: usize) -> Result<()> {
    if max_n > MAX_OBSTRUCTION_N {
        return Err(Error::BoundExceeded { what: "obstruction vertices", requested: max_n, max: MAX_OBSTRUCTION_N });
    }
    Ok(())
}

/// Minimal non-members with at most `max_n` vertices, one per isomorphism
/// class, ordered by vertex count then canonical code.
pub fn minimal_obstructions(shape: ShapeId, max_n: usize) -> Result<Vec<Graph>> {
    check_obstruction_bound(max_n)?;
    let mut out = Vec::new();
    for n in 1..=max_n {
        out.extend(graph::enumerate_graphs(n)?.into_iter().filter(|g| is_minimal_obstruction(shape, g)));
    }
    Ok(out)
}

/// Comparability graph of the rooted forest given by `parent` (`None` for
/// roots, otherwise an earlier node).
pub fn forest_comparability_graph(parent: &[Option<usize>]) -> Result<Graph> {
    let mut g = Graph::try_empty(parent.len())?;
    for v in 0..parent.len() {
        let mut cur = parent[v];
        while let Some(p) = cur {
            if p >= v {
                return Err(Error::InvalidParameter(alloc::format!("parent of {v} must precede it")));
            }
            g.insert_edge(p, v);
            cur = parent[p];
        }
    }
    Ok(g)
}

/// Isomorphism classes (canonical labeling) of comparability graphs of
/// rooted forests with `1..=max_n` nodes, ordered by size then code.
pub fn forest_comparability_classes(max_n: usize) -> Result<Vec<Graph>> {
    check_obstruction_bound(max_n)?;
    let mut out = Vec::new();
    for n in 1..=max_n {
        let mut codes = BTreeSet::new();
        let mut parent = alloc::vec![None; n];
        collect_forests(&mut parent, 0, &mut codes)?;
        out.extend(codes.into_iter().map(|c| graph::graph_from_code(n, c)));
    }
    Ok(out)
}

fn collect_forests(parent: &mut [Option<usize>], v: usize, codes: &mut BTreeSet<u64>) -> Result<()> {
    if v == parent.len() {
        codes.insert(canonical_code(&forest_comparability_graph(parent)?)?);
        return Ok(());
    }
    for p in core::iter::once(None).chain((0..v).map(Some)) {
        parent[v] = p;
        collect_forests(parent, v + 1, codes)?;
    }
    Ok(())
}
