//! Acceptance criteria 1-9. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ugl::{cli, format, parallel};
use ugl_core::bits::IndexSet;
use ugl_core::distributions::*;
use ugl_core::graph::{canonical_code, enumerate_graphs};
use ugl_core::necessary::{paper_necessary_set, Completions, Minimality};
use ugl_core::shapes::{
    family_graph, forest_comparability_classes, is_diagonal, realize_intervals, recognize, FamilyId, ShapeId,
};
use ugl_core::ultragraph::{eta, extend_to_internal_clique, ReducedProduct};
use ugl_core::Graph;

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, u64, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn codes(gs: &[Graph]) -> BTreeSet<(usize, u64)> {
    gs.iter().map(|g| (g.n(), canonical_code(g).unwrap())).collect()
}

fn family_codes(ids: &[FamilyId]) -> BTreeSet<(usize, u64)> {
    codes(&ids.iter().map(|&id| family_graph(id).unwrap()).collect::<Vec<_>>())
}

// ---------------------------------------------------------------- oracles

/// Induced C4 or P4 on four distinct vertices, by checking every ordered
/// quadruple against the two edge patterns.
fn has_induced_c4_or_p4(g: &Graph) -> bool {
    let n = g.n();
    let e = |a: usize, b: usize| g.has_edge(a, b);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    if [a, b, c, d].iter().collect::<BTreeSet<_>>().len() < 4 {
                        continue;
                    }
                    if e(a, b) && e(b, c) && e(c, d) && !e(a, c) && !e(b, d) {
                        // path a-b-c-d; a-d decides C4 vs P4, both forbidden
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// Interval membership by trying all linear orders of the maximal cliques
/// for the consecutive-ones property.
fn interval_by_clique_orders(g: &Graph) -> bool {
    let n = g.n();
    if n == 0 {
        return true;
    }
    let all = (1u64 << n) - 1;
    let is_clique = |m: u64| (0..n).all(|u| m >> u & 1 == 0 || (0..n).all(|v| v == u || m >> v & 1 == 0 || g.has_edge(u, v)));
    let cliques: Vec<u64> = (1..=all)
        .filter(|&m| is_clique(m) && (0..n).all(|v| m >> v & 1 == 1 || !is_clique(m | 1 << v)))
        .collect();
    fn grow(cliques: &[u64], used: &mut Vec<bool>, last: u64, ended: u64) -> bool {
        if used.iter().all(|&u| u) {
            return true;
        }
        for i in 0..cliques.len() {
            if used[i] || cliques[i] & ended != 0 {
                continue;
            }
            used[i] = true;
            if grow(cliques, used, cliques[i], ended | (last & !cliques[i])) {
                return true;
            }
            used[i] = false;
        }
        false
    }
    grow(&cliques, &mut vec![false; cliques.len()], 0, 0)
}

fn drop_vertex(g: &Graph, v: usize) -> Graph {
    let keep: Vec<usize> = (0..g.n()).filter(|&u| u != v).collect();
    g.induced_subgraph(&keep).unwrap()
}

/// Every per-index graph over `nb` formulas: a vertex set and any edges
/// inside it.
fn all_index_graphs(nb: usize) -> Vec<IndexGraph> {
    let pairs: Vec<(usize, usize)> = (0..nb).flat_map(|b| (b + 1..nb).map(move |c| (b, c))).collect();
    let mut out = Vec::new();
    for v in 0..1u64 << nb {
        let inside: Vec<(usize, usize)> = pairs.iter().copied().filter(|&(b, c)| v >> b & 1 == 1 && v >> c & 1 == 1).collect();
        for s in 0..1u64 << inside.len() {
            let e: Vec<(usize, usize)> = (0..inside.len()).filter(|&i| s >> i & 1 == 1).map(|i| inside[i]).collect();
            out.push(IndexGraph::new(v, Graph::from_edges(nb, &e).unwrap()).unwrap());
        }
    }
    out
}

/// Refinement existence over every tuple of cliques (not just maximal).
fn refinement_exists_brute(t: &Trace) -> bool {
    let nb = t.formula_count();
    let cliques: Vec<Vec<u64>> = t
        .graph_sequence()
        .iter()
        .map(|g| (0..1u64 << nb).filter(|&m| g.has_clique(m)).collect())
        .collect();
    let mut idx = vec![0usize; cliques.len()];
    loop {
        let ks: Vec<u64> = idx.iter().zip(&cliques).map(|(&i, c)| c[i]).collect();
        let cover = |m: u64| -> IndexSet { (0..ks.len()).filter(|&a| ks[a] & m == m).collect() };
        let ok = (0..nb).all(|b| t.family().contains(cover(1 << b)))
            && (0..nb).all(|b| (b + 1..nb).all(|c| t.family().contains(cover(1 << b | 1 << c))));
        if ok {
            return true;
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return false;
            }
            idx[k] += 1;
            if idx[k] < cliques[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

fn random_index_graph(rng: &mut ChaCha8Rng, nb: usize, p: f64) -> IndexGraph {
    let v = rng.gen_range(0..1u64 << nb);
    let mut pairs = Vec::new();
    for b in 0..nb {
        for c in b + 1..nb {
            if v >> b & 1 == 1 && v >> c & 1 == 1 && rng.gen_bool(p) {
                pairs.push((b, c));
            }
        }
    }
    IndexGraph::new(v, Graph::from_edges(nb, &pairs).unwrap()).unwrap()
}

fn random_family(rng: &mut ChaCha8Rng, ni: usize) -> CoveringFamily {
    match rng.gen_range(0..3) {
        0 => CoveringFamily::quorum(ni, rng.gen_range(1..=ni)).unwrap(),
        1 => CoveringFamily::principal(ni, IndexSet(rng.gen_range(1..1u64 << ni))).unwrap(),
        _ => {
            let ms = (0..rng.gen_range(1..=3)).map(|_| IndexSet(rng.gen_range(1..1u64 << ni))).collect();
            CoveringFamily::explicit(ni, ms).unwrap()
        }
    }
}

fn random_trace(rng: &mut ChaCha8Rng, ni: usize, nb: usize) -> Trace {
    let fam = random_family(rng, ni);
    let p = rng.gen_range(0.3..1.0);
    let graphs = (0..ni).map(|_| random_index_graph(rng, nb, p)).collect();
    Trace::new(fam, nb, graphs, None).unwrap()
}

// ------------------------------------------------------------- criteria

fn c1() -> Outcome {
    let got = parallel::minimal_obstructions(ShapeId::TreeComparability, 6, jobs()).map_err(|e| e.to_string())?;
    let want = family_codes(&[FamilyId::C4, FamilyId::L4]);
    check(got.len() == 2 && codes(&got) == want, || format!("got {got:?}"))?;
    // Oracle: brute C4/P4 pattern test on every class and its vertex-deletions.
    let mut oracle = Vec::new();
    for n in 1..=6 {
        for g in enumerate_graphs(n).unwrap() {
            if has_induced_c4_or_p4(&g) && (0..n).all(|v| !has_induced_c4_or_p4(&drop_vertex(&g, v))) {
                oracle.push(g);
            }
        }
    }
    check(codes(&oracle) == want, || format!("oracle found {oracle:?}"))?;
    Ok("{C4, L4}".into())
}

fn c2() -> Outcome {
    let shape = ShapeId::IntervalIntersection;
    let six = [FamilyId::FamIII(4), FamilyId::FamIII(5), FamilyId::FamIII(6), FamilyId::FamIV(2), FamilyId::FamV(1)];
    let seven_new = [FamilyId::FamIII(7), FamilyId::FamIV(3), FamilyId::FamV(2), FamilyId::FamI, FamilyId::FamII];
    let got6 = parallel::minimal_obstructions(shape, 6, jobs()).map_err(|e| e.to_string())?;
    check(got6.len() == 5 && codes(&got6) == family_codes(&six), || format!("max_n=6 gave {} graphs", got6.len()))?;
    let got7 = parallel::minimal_obstructions(shape, 7, jobs()).map_err(|e| e.to_string())?;
    let all: Vec<FamilyId> = six.iter().chain(&seven_new).copied().collect();
    check(got7.len() == 10 && codes(&got7) == family_codes(&all), || format!("max_n=7 gave {} graphs", got7.len()))?;
    let mut oracle = Vec::new();
    let mut classes = 0;
    for n in 1..=7 {
        let gs = enumerate_graphs(n).unwrap();
        classes += gs.len();
        if n == 7 {
            check(gs.len() == 1044, || format!("{} seven-vertex classes", gs.len()))?;
        }
        for g in gs {
            if !interval_by_clique_orders(&g) && (0..n).all(|v| interval_by_clique_orders(&drop_vertex(&g, v))) {
                oracle.push(g);
            }
        }
    }
    check(codes(&oracle) == family_codes(&all), || format!("realization oracle found {} graphs", oracle.len()))?;
    Ok(format!("5 at n<=6, 10 at n<=7; oracle over {classes} classes agrees"))
}

fn c3() -> Outcome {
    let mut cases: Vec<(FamilyId, Minimality, Option<usize>)> = vec![
        (FamilyId::C4, Minimality::Subset, None),
        (FamilyId::L4, Minimality::Subset, None),
    ];
    cases.extend((4..=7).map(|l| (FamilyId::FamIII(l), Minimality::Subset, None)));
    cases.push((FamilyId::FamI, Minimality::Subset, Some(6)));
    cases.push((FamilyId::FamII, Minimality::Cardinality, Some(4)));
    cases.extend((2..=4).map(|m| (FamilyId::FamIV(m), Minimality::Cardinality, Some(m + 3))));
    cases.extend((1..=3).map(|n| (FamilyId::FamV(n), Minimality::Unique, Some(n + 2))));
    let mut bad = Vec::new();
    for (id, claim, size) in cases {
        let b = paper_necessary_set(id).map_err(|e| e.to_string())?;
        if !b.flags.satisfies(claim) {
            bad.push(format!("{id}: flags {} do not give {claim:?}", b.flags));
        }
        if let Some(k) = size {
            if b.edges.len() != k {
                let c = Completions::compute(id.shape(), &b.host).unwrap();
                let min = c.minimal_transversals().iter().map(|t| t.count_ones()).min().unwrap_or(0);
                bad.push(format!(
                    "{id}: {} edges, expected {k}; smallest necessary set has {min} edges",
                    b.edges.len()
                ));
            }
        }
    }
    if bad.is_empty() {
        Ok("15 drawn sets verified".into())
    } else {
        Err(bad.join("; "))
    }
}

fn c4() -> Outcome {
    let forests: BTreeSet<(usize, u64)> = codes(&forest_comparability_classes(6).unwrap());
    let mut total = 0;
    let mut members = 0;
    for n in 1..=6 {
        for g in enumerate_graphs(n).unwrap() {
            total += 1;
            let diag = is_diagonal(&g);
            let free = !has_induced_c4_or_p4(&g);
            let forest = forests.contains(&(n, canonical_code(&g).unwrap()));
            check(diag == free && free == forest, || format!("{g:?}: diagonal={diag} free={free} forest={forest}"))?;
            members += diag as usize;
        }
    }
    check(total == 208, || format!("{total} classes"))?;
    Ok(format!("{total} classes, {members} members"))
}

fn c5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let n = 1000;
    let size = |rng: &mut ChaCha8Rng| (rng.gen_range(1..=5), rng.gen_range(1..=4));
    // conjugate round trip on monotone maps
    for _ in 0..n {
        let (ni, nb) = size(&mut rng);
        let tops: Vec<Vec<u64>> =
            (0..ni).map(|_| (0..rng.gen_range(0..4)).map(|_| rng.gen_range(1..1u64 << nb)).collect()).collect();
        let f = FullDistribution::from_fn(nb, ni, |d| (0..ni).filter(|&a| tops[a].iter().any(|&t| d & !t == 0)).collect())
            .unwrap();
        check(distribution_from_conjugate(&conjugate(&f)).unwrap() == f, || "conjugate round trip".into())?;
    }
    // g1, g2 determine the graph-like distribution
    for _ in 0..n {
        let (ni, nb) = size(&mut rng);
        let t = random_trace(&mut rng, ni, nb);
        let f = FullDistribution::graphlike_from_trace(&t).unwrap();
        for d in f.subsets() {
            let expect: IndexSet = (0..ni).filter(|&a| t.graph(a).has_clique(d)).collect();
            check(f.value(d) == expect, || format!("graph-like value at {d:b}"))?;
        }
        let g = FullDistribution::graphlike_from_trace(&t.with_graphs(t.graph_sequence().to_vec()).unwrap()).unwrap();
        check(g == f && check_properties(&f, None).graph_like, || "pairs do not determine f".into())?;
    }
    // multiplicative => graph-like; graph-like & pairwise splitting <=> multiplicative
    for i in 0..n {
        let (ni, nb) = size(&mut rng);
        let f = if i % 2 == 0 {
            FullDistribution::graphlike_from_trace(&random_trace(&mut rng, ni, nb)).unwrap()
        } else {
            let singles: Vec<IndexSet> = (0..nb).map(|_| IndexSet(rng.gen_range(0..1u64 << ni))).collect();
            FullDistribution::from_fn(nb, ni, |d| {
                (0..nb).filter(|&b| d >> b & 1 == 1).fold(IndexSet::full(ni), |m, b| m.intersection(singles[b]))
            })
            .unwrap()
        };
        let direct_mult =
            f.subsets().all(|d| f.subsets().all(|e| f.value(d | e) == f.value(d).intersection(f.value(e))));
        let direct_gl = f.subsets().filter(|d| d.count_ones() >= 2).all(|d| {
            let bits: Vec<usize> = (0..nb).filter(|&b| d >> b & 1 == 1).collect();
            let mut meet = IndexSet::full(ni);
            for (x, &b) in bits.iter().enumerate() {
                for &c in &bits[x + 1..] {
                    meet = meet.intersection(f.value(1 << b | 1 << c));
                }
            }
            f.value(d) == meet
        });
        let split = (0..nb).all(|b| (b + 1..nb).all(|c| f.value(1 << b | 1 << c) == f.value(1 << b).intersection(f.value(1 << c))));
        let r = check_properties(&f, None);
        check(r.multiplicative == direct_mult && r.graph_like == direct_gl, || "property report disagrees".into())?;
        check(!direct_mult || direct_gl, || "multiplicative but not graph-like".into())?;
        check((direct_gl && split) == direct_mult, || "splitting equivalence".into())?;
    }
    // refinement <=> subgraph sequence + pair adequacy
    for _ in 0..n {
        let (ni, nb) = size(&mut rng);
        let t2 = random_trace(&mut rng, ni, nb);
        let graphs = t2
            .graph_sequence()
            .iter()
            .map(|g| {
                let v = if rng.gen_bool(0.5) { g.vertices() } else { g.vertices() & rng.gen_range(0..1u64 << nb) };
                let e: Vec<(usize, usize)> =
                    g.edges().edges().filter(|&(b, c)| v >> b & 1 == 1 && v >> c & 1 == 1 && rng.gen_bool(0.8)).collect();
                IndexGraph::new(v, Graph::from_edges(nb, &e).unwrap()).unwrap()
            })
            .collect();
        let t1 = t2.with_graphs(graphs).unwrap();
        let (f1, f2) = (FullDistribution::graphlike_from_trace(&t1).unwrap(), FullDistribution::graphlike_from_trace(&t2).unwrap());
        let fam = t1.family();
        let refines = f1.subsets().all(|d| f1.value(d).is_subset(f2.value(d)))
            && (0..nb).all(|b| fam.contains(f1.value(1 << b)))
            && (0..nb).all(|b| (b + 1..nb).all(|c| fam.contains(f1.value(1 << b | 1 << c))));
        check(is_refinement(&t1, &t2).unwrap() == refines, || "refinement via sequences".into())?;
    }
    // multiplicative trace <=> all-complete sequence
    for _ in 0..n {
        let (ni, nb) = size(&mut rng);
        let mut t = random_trace(&mut rng, ni, nb);
        if rng.gen_bool(0.3) {
            let gs = t.graph_sequence().iter().map(|g| IndexGraph::complete_on(nb, g.vertices())).collect();
            t = t.with_graphs(gs).unwrap();
        }
        let complete = t.graph_sequence().iter().all(|g| {
            let v = g.vertices();
            (0..nb).all(|b| (0..nb).all(|c| b == c || v >> b & 1 == 0 || v >> c & 1 == 0 || g.has_edge(b, c)))
        });
        let f = FullDistribution::graphlike_from_trace(&t).unwrap();
        check(check_properties(&f, None).multiplicative == complete, || "multiplicative trace".into())?;
        check(is_multiplicative_trace(&t) == complete, || "is_multiplicative_trace".into())?;
    }
    Ok(format!("6 identities x {n} instances"))
}

fn c6() -> Outcome {
    let mut checked = 0usize;
    let mut violating = 0usize;
    let mut run = |t: &Trace, free: bool| -> Result<(), String> {
        checked += 1;
        let holds = sop2_violation(t).is_none();
        violating += !holds as usize;
        check(holds == free, || format!("{t:?}"))
    };
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for nb in 1..=5 {
        let gs = all_index_graphs(nb);
        let free: Vec<bool> = gs.iter().map(|g| !has_induced_c4_or_p4(g.edges())).collect();
        let exhaustive_up_to = match nb {
            1..=3 => 4,
            4 => 3,
            _ => 2,
        };
        for ni in 1..=4usize {
            let gen = IndexSet::full(ni);
            let fam = CoveringFamily::principal(ni, gen).unwrap();
            if ni <= exhaustive_up_to {
                let mut idx = vec![0usize; ni];
                'all: loop {
                    let t = Trace::new(fam.clone(), nb, idx.iter().map(|&i| gs[i].clone()).collect(), None).unwrap();
                    run(&t, idx.iter().all(|&i| free[i]))?;
                    let mut k = 0;
                    loop {
                        if k == ni {
                            break 'all;
                        }
                        idx[k] += 1;
                        if idx[k] < gs.len() {
                            break;
                        }
                        idx[k] = 0;
                        k += 1;
                    }
                }
            } else {
                for _ in 0..200_000 {
                    let g = IndexSet(rng.gen_range(1..1u64 << ni));
                    let fam = CoveringFamily::principal(ni, g).unwrap();
                    let idx: Vec<usize> = (0..ni).map(|_| rng.gen_range(0..gs.len())).collect();
                    let t = Trace::new(fam, nb, idx.iter().map(|&i| gs[i].clone()).collect(), None).unwrap();
                    run(&t, idx.iter().all(|&i| free[i]))?;
                }
            }
        }
    }
    Ok(format!("{checked} principal traces ({violating} violating)"))
}

fn c7() -> Outcome {
    let (mut checked, mut extends) = (0usize, 0usize);
    for nb in 1..=3 {
        let gs = all_index_graphs(nb);
        for ni in 1..=4usize {
            for gen in (1..1u64 << ni).filter(|g| g.count_ones() <= 2) {
                let fam = CoveringFamily::principal(ni, IndexSet(gen)).unwrap();
                let mut idx = vec![0usize; ni];
                'all: loop {
                    let t = Trace::new(fam.clone(), nb, idx.iter().map(|&i| gs[i].clone()).collect(), None).unwrap();
                    let ext = match ReducedProduct::build(&t) {
                        Ok(rp) => {
                            check(rp.core().len() <= 2, || "core larger than the generator".into())?;
                            match eta(&rp) {
                                Ok(e) => match extend_to_internal_clique(&rp, &e.images) {
                                    Ok(k) => {
                                        check(k.is_clique_in(&rp) && e.images.iter().all(|x| k.contains(x)), || {
                                            format!("bad internal clique for {t:?}")
                                        })?;
                                        true
                                    }
                                    Err(ugl_core::Error::NotComplete { .. }) => false,
                                    Err(e) => return Err(e.to_string()),
                                },
                                Err(e) if e.kind() == ugl_core::ErrorKind::Consistency => false,
                                Err(e) => return Err(e.to_string()),
                            }
                        }
                        Err(e) if e.kind() == ugl_core::ErrorKind::Consistency => false,
                        Err(e) => return Err(e.to_string()),
                    };
                    let refines = find_multiplicative_refinement(&t).is_some();
                    check(ext == refines, || format!("extends={ext} refines={refines} for {t:?}"))?;
                    checked += 1;
                    extends += ext as usize;
                    let mut k = 0;
                    loop {
                        if k == ni {
                            break 'all;
                        }
                        idx[k] += 1;
                        if idx[k] < gs.len() {
                            break;
                        }
                        idx[k] = 0;
                        k += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{checked} traces, {extends} extend"))
}

const COUNTEREXAMPLE: &str = "indices 3\nformulas 3\nfamily quorum 2\n\
g1 0 : 0 1 2\ng2 0 : 0-2 1-2\n\
g1 1 : 0 1 2\ng2 1 : 0-1 0-2\n\
g1 2 : 0 1 2\ng2 2 : 0-1 0-2 1-2\n";

fn c8() -> Outcome {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/quorum_counterexample.trace");
    let file_trace = format::parse_trace(&std::fs::read_to_string(&path).unwrap()).map_err(|e| e.to_string())?;
    let tri = Graph::complete(3);
    let minus = |u, v| {
        let mut g = tri.clone();
        g.remove_edge(u, v);
        IndexGraph::new(0b111, g).unwrap()
    };
    let built = Trace::new(
        CoveringFamily::quorum(3, 2).unwrap(),
        3,
        vec![minus(0, 1), minus(1, 2), IndexGraph::new(0b111, tri).unwrap()],
        None,
    )
    .unwrap();
    check(file_trace == built && format::parse_trace(COUNTEREXAMPLE).unwrap() == built, || "trace file differs".into())?;
    let o = cli::run(["ugl", "trace-refine", path.to_str().unwrap()]);
    check(o.code == 1 && o.stdout == "none\n", || format!("trace-refine gave exit {} `{}`", o.code, o.stdout))?;
    check(!refinement_exists_brute(&built), || "clique-tuple search found a refinement".into())?;
    Ok("`none`, confirmed by clique-tuple search".into())
}

fn c9() -> Outcome {
    let (mut emitted, mut verified) = ([0usize; 4], [0usize; 4]);
    let dir = tempfile::tempdir().unwrap();
    for n in 1..=7 {
        for g in enumerate_graphs(n).unwrap() {
            for distinct in [false, true] {
                match realize_intervals(&g, distinct) {
                    Ok(m) => {
                        emitted[0] += 1;
                        let back = format::parse_model(&format::write_model(&m)).map_err(|e| e.to_string())?;
                        verified[0] += (back.verify(&g) && (!distinct || back.has_distinct_endpoints())) as usize;
                    }
                    Err(w) => {
                        emitted[1] += 1;
                        verified[1] += format::parse_witness(&format::write_witness(&w)).is_ok_and(|b| b.verify(&g)) as usize;
                    }
                }
            }
            for shape in [ShapeId::TreeComparability, ShapeId::IntervalIntersection] {
                if let Err(w) = recognize(shape, &g) {
                    emitted[1] += 1;
                    verified[1] += format::parse_witness(&format::write_witness(&w)).is_ok_and(|b| b.verify(&g)) as usize;
                }
            }
            if n <= 5 {
                // the same certificates through the command line
                let p = dir.path().join("g.graph");
                std::fs::write(&p, format::write_graph(&g)).unwrap();
                let o = cli::run(["ugl", "realize", "--distinct-endpoints", p.to_str().unwrap()]);
                let ok = match o.code {
                    0 => format::parse_model(&o.stdout).is_ok_and(|m| m.verify(&g) && m.has_distinct_endpoints()),
                    1 => format::parse_witness(&o.stdout).is_ok_and(|w| w.verify(&g)),
                    _ => false,
                };
                emitted[(o.code == 1) as usize] += 1;
                verified[(o.code == 1) as usize] += ok as usize;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..3000 {
        let (ni, nb) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let t = random_trace(&mut rng, ni, nb);
        if let Some(r) = find_multiplicative_refinement(&t) {
            emitted[2] += 1;
            let back = format::parse_trace(&format::write_trace(&r)).map_err(|e| e.to_string())?;
            verified[2] += (back == r && is_refinement(&back, &t).unwrap() && is_multiplicative_trace(&back)) as usize;
        }
        let g = IndexSet(rng.gen_range(1..1u64 << ni));
        let p = t.with_graphs(t.graph_sequence().to_vec()).unwrap();
        let p = Trace::new(CoveringFamily::principal(ni, g).unwrap(), nb, p.graph_sequence().to_vec(), None).unwrap();
        let Ok(rp) = ReducedProduct::build(&p) else { continue };
        let Ok(e) = eta(&rp) else { continue };
        if let Ok(k) = extend_to_internal_clique(&rp, &e.images) {
            emitted[3] += 1;
            let back = format::parse_internal_set(&rp, &format::write_internal_set(&rp, &k)).map_err(|e| e.to_string())?;
            verified[3] += (back == k && back.is_clique_in(&rp) && e.images.iter().all(|x| back.contains(x))) as usize;
        }
    }
    check(emitted == verified && emitted.iter().all(|&c| c > 0), || format!("emitted {emitted:?}, verified {verified:?}"))?;
    Ok(format!("models {}, witnesses {}, refinements {}, internal cliques {}", emitted[0], emitted[1], emitted[2], emitted[3]))
}

fn main() {
    let criteria: [Criterion; 9] = [
        (1, "tree obstructions", 10, c1),
        (2, "interval obstructions", 300, c2),
        (3, "necessary sets", 120, c3),
        (4, "three-way tree equivalence", 30, c4),
        (5, "distribution identities", 60, c5),
        (6, "sop2 condition", 120, c6),
        (7, "internal-clique extension", 120, c7),
        (8, "quorum counterexample", u64::MAX, c8),
        (9, "certificate re-ingestion", u64::MAX, c9),
    ];
    let mut failed = 0;
    for (n, name, budget, f) in criteria {
        let start = Instant::now();
        let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let r = match r {
            Ok(d) if took > Duration::from_secs(budget) => Err(format!("{d}; over the {budget} s budget")),
            r => r,
        };
        match r {
            Ok(d) => println!("criterion {n} ({name}): PASS [{:.2}s] {d}", took.as_secs_f64()),
            Err(e) => {
                failed += 1;
                println!("criterion {n} ({name}): FAIL [{:.2}s] {e}", took.as_secs_f64());
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
