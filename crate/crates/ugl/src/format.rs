//! Line-oriented text formats. Every reader rejects unknown directives and
//! ignores blank lines and lines starting with `#`.

use std::fmt::Write as _;

use ugl_core::bits::{ones, IndexSet};
use ugl_core::distributions::{CoveringFamily, FamilyKind, IndexGraph, LosInstance, Trace};
use ugl_core::necessary::{NecessarySet, NecessityFlags};
use ugl_core::shapes::{FamilyId, IntervalModel, ObstructionWitness, WitnessKind};
use ugl_core::ultragraph::{InternalSet, ReducedProduct, Tuple};
use ugl_core::{Embedding, EmbeddingMode, Graph};

use crate::error::{Error, Result};

/// Non-comment lines with their 1-based line numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.trim();
        (!l.is_empty() && !l.starts_with('#')).then(|| (i + 1, l.split_whitespace().collect()))
    })
}

fn num<T: std::str::FromStr>(line: usize, tok: &str) -> Result<T> {
    tok.parse().map_err(|_| Error::parse(line, format!("expected a number, got `{tok}`")))
}

fn pair(line: usize, tok: &str) -> Result<(usize, usize)> {
    let (u, v) = tok.split_once('-').ok_or_else(|| Error::parse(line, format!("expected `u-v`, got `{tok}`")))?;
    Ok((num(line, u)?, num(line, v)?))
}

fn core_err(line: usize) -> impl Fn(ugl_core::Error) -> Error {
    move |e| Error::parse(line, e.to_string())
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut n = None;
    let mut edges = Vec::new();
    for (ln, toks) in lines(text) {
        match (toks[0], &toks[1..], n) {
            ("graph", [k], None) => n = Some(num::<usize>(ln, k)?),
            ("graph", _, Some(_)) => return Err(Error::parse(ln, "second `graph` line")),
            ("e", [u, v], Some(_)) => edges.push((ln, num(ln, u)?, num(ln, v)?)),
            (_, _, None) => return Err(Error::parse(ln, "expected `graph <n>` first")),
            _ => return Err(Error::parse(ln, format!("unknown or malformed directive `{}`", toks.join(" ")))),
        }
    }
    let n = n.ok_or_else(|| Error::parse(0, "missing `graph <n>` line"))?;
    let mut g = Graph::try_empty(n)?;
    for (ln, u, v) in edges {
        if u >= n || v >= n {
            return Err(Error::parse(ln, format!("endpoint out of range for {n} vertices")));
        }
        if u == v {
            return Err(Error::parse(ln, format!("self-loop at {u}")));
        }
        if g.has_edge(u, v) {
            return Err(Error::parse(ln, format!("duplicate or reversed pair {u} {v}")));
        }
        g.insert_edge(u, v);
    }
    Ok(g)
}

pub fn write_graph(g: &Graph) -> String {
    let mut s = format!("graph {}\n", g.n());
    for (u, v) in g.edges() {
        writeln!(s, "e {u} {v}").unwrap();
    }
    s
}

pub fn write_model(m: &IntervalModel) -> String {
    let mut s = String::new();
    for (v, (a, b)) in m.intervals.iter().enumerate() {
        writeln!(s, "i {v} {a} {b}").unwrap();
    }
    s
}

/// Reads `i <v> <a> <b>` lines; the vertices must be exactly `0..n`.
pub fn parse_model(text: &str) -> Result<IntervalModel> {
    let mut iv: Vec<Option<(i64, i64)>> = Vec::new();
    for (ln, toks) in lines(text) {
        let ["i", v, a, b] = toks[..] else {
            return Err(Error::parse(ln, format!("expected `i <v> <a> <b>`, got `{}`", toks.join(" "))));
        };
        let v: usize = num(ln, v)?;
        let (a, b) = (num::<i64>(ln, a)?, num::<i64>(ln, b)?);
        if a > b {
            return Err(Error::parse(ln, format!("empty interval [{a}, {b}]")));
        }
        if v >= ugl_core::graph::MAX_VERTICES {
            return Err(Error::parse(ln, format!("vertex {v} out of range")));
        }
        if iv.len() <= v {
            iv.resize(v + 1, None);
        }
        if iv[v].replace((a, b)).is_some() {
            return Err(Error::parse(ln, format!("second interval for vertex {v}")));
        }
    }
    let intervals = iv
        .into_iter()
        .enumerate()
        .map(|(v, x)| x.ok_or_else(|| Error::parse(0, format!("no interval for vertex {v}"))))
        .collect::<Result<_>>()?;
    Ok(IntervalModel { intervals })
}

pub fn write_witness(w: &ObstructionWitness) -> String {
    let mut s = format!("w {}", w.kind);
    if let Some(f) = w.family {
        write!(s, " {f}").unwrap();
    }
    for v in &w.vertices {
        write!(s, " {v}").unwrap();
    }
    s.push('\n');
    s
}

pub fn parse_witness(text: &str) -> Result<ObstructionWitness> {
    let mut found = None;
    for (ln, toks) in lines(text) {
        if toks[0] != "w" || toks.len() < 2 || found.is_some() {
            return Err(Error::parse(ln, "expected a single `w <kind> [family] <vertices>` line"));
        }
        let kind: WitnessKind = toks[1].parse().map_err(core_err(ln))?;
        let mut rest = &toks[2..];
        let family = if kind == WitnessKind::ForbiddenFamily {
            let (f, r) = rest.split_first().ok_or_else(|| Error::parse(ln, "missing family"))?;
            rest = r;
            Some(f.parse::<FamilyId>().map_err(core_err(ln))?)
        } else {
            None
        };
        let vertices = rest.iter().map(|t| num(ln, t)).collect::<Result<Vec<usize>>>()?;
        let embedding = family.map(|_| Embedding { map: vertices.clone(), mode: EmbeddingMode::Induced });
        found = Some(ObstructionWitness { kind, vertices, family, embedding });
    }
    found.ok_or_else(|| Error::parse(0, "no witness line"))
}

pub fn write_necessary_set(b: &NecessarySet) -> String {
    let mut s = String::from("B");
    for (u, v) in &b.edges {
        write!(s, " {u}-{v}").unwrap();
    }
    writeln!(s, "\nflags {}", b.flags).unwrap();
    s
}

pub type Pairs = Vec<(usize, usize)>;

/// Reads a `B` line and an optional `flags` line.
pub fn parse_necessary_set(text: &str) -> Result<(Pairs, Option<NecessityFlags>)> {
    let mut edges = None;
    let mut flags = None;
    for (ln, toks) in lines(text) {
        match toks[0] {
            "B" if edges.is_none() => edges = Some(toks[1..].iter().map(|t| pair(ln, t)).collect::<Result<Vec<_>>>()?),
            "flags" if flags.is_none() => flags = Some(parse_flags(ln, &toks[1..])?),
            _ => return Err(Error::parse(ln, format!("unexpected directive `{}`", toks[0]))),
        }
    }
    Ok((edges.ok_or_else(|| Error::parse(0, "missing `B` line"))?, flags))
}

fn parse_flags(ln: usize, toks: &[&str]) -> Result<NecessityFlags> {
    let mut f = NecessityFlags::default();
    let keys = ["necessary", "submin", "mincard", "unique"];
    if toks.len() != keys.len() {
        return Err(Error::parse(ln, "expected four flags"));
    }
    for (tok, key) in toks.iter().zip(keys) {
        let val = tok
            .strip_prefix(key)
            .and_then(|r| r.strip_prefix('='))
            .ok_or_else(|| Error::parse(ln, format!("expected `{key}=<0|1>`, got `{tok}`")))?;
        let on = match val {
            "0" => false,
            "1" => true,
            _ => return Err(Error::parse(ln, format!("flag value `{val}`"))),
        };
        match key {
            "necessary" => f.necessary = on,
            "submin" => f.subset_minimal = on,
            "mincard" => f.minimum_cardinality = on,
            _ => f.unique_minimum = on,
        }
    }
    Ok(f)
}

fn index_list(ln: usize, toks: &[&str]) -> Result<IndexSet> {
    let mut s = IndexSet::EMPTY;
    for t in toks {
        let a: usize = num(ln, t)?;
        if a >= 64 {
            return Err(Error::parse(ln, format!("index {a} out of range")));
        }
        s.insert(a);
    }
    Ok(s)
}

/// `<α> : <items…>` after the directive.
fn per_index<'a>(ln: usize, toks: &[&'a str]) -> Result<(usize, Vec<&'a str>)> {
    match toks {
        [a, ":", rest @ ..] => Ok((num(ln, a)?, rest.to_vec())),
        _ => Err(Error::parse(ln, "expected `<α> : …`")),
    }
}

#[derive(Default)]
struct Sides {
    v: Vec<Option<u64>>,
    e: Vec<Option<Vec<(usize, usize)>>>,
}

impl Sides {
    fn any(&self) -> bool {
        self.v.iter().any(Option::is_some) || self.e.iter().any(Option::is_some)
    }

    fn graphs(&self, ni: usize, nb: usize, what: &str) -> Result<Vec<IndexGraph>> {
        (0..ni)
            .map(|a| {
                let v = self.v.get(a).copied().flatten().unwrap_or(0);
                let e = self.e.get(a).cloned().flatten().unwrap_or_default();
                let edges = Graph::from_edges(nb, &e).map_err(|err| Error::parse(0, format!("{what}2({a}): {err}")))?;
                IndexGraph::new(v, edges).map_err(|err| Error::parse(0, format!("{what}({a}): {err}")))
            })
            .collect()
    }
}

pub fn parse_trace(text: &str) -> Result<Trace> {
    let mut ni: Option<usize> = None;
    let mut nb: Option<usize> = None;
    let mut family: Option<(usize, Vec<&str>)> = None;
    let mut members = Vec::new();
    let (mut g, mut k) = (Sides::default(), Sides::default());
    for (ln, toks) in lines(text) {
        let args = &toks[1..];
        match toks[0] {
            "indices" if ni.is_none() => ni = Some(num(ln, single(ln, args)?)?),
            "formulas" if nb.is_none() => nb = Some(num(ln, single(ln, args)?)?),
            "family" if family.is_none() && !args.is_empty() => family = Some((ln, args.to_vec())),
            "member" => members.push(index_list(ln, args)?),
            d @ ("g1" | "g2" | "k1" | "k2") => {
                let (ni, nb) = match (ni, nb) {
                    (Some(i), Some(b)) => (i, b),
                    _ => return Err(Error::parse(ln, "`indices` and `formulas` must come first")),
                };
                let (a, items) = per_index(ln, args)?;
                if a >= ni {
                    return Err(Error::parse(ln, format!("index {a} out of range")));
                }
                let side = if d.starts_with('g') { &mut g } else { &mut k };
                side.v.resize(ni, None);
                side.e.resize(ni, None);
                let dup = if d.ends_with('1') {
                    let mut m = 0u64;
                    for t in &items {
                        let b: usize = num(ln, t)?;
                        if b >= nb {
                            return Err(Error::parse(ln, format!("formula {b} out of range")));
                        }
                        m |= 1 << b;
                    }
                    side.v[a].replace(m).is_some()
                } else {
                    let ps = items.iter().map(|t| pair(ln, t)).collect::<Result<Vec<_>>>()?;
                    if let Some(&(u, v)) = ps.iter().find(|&&(u, v)| u >= nb || v >= nb) {
                        return Err(Error::parse(ln, format!("pair {u}-{v} out of range")));
                    }
                    side.e[a].replace(ps).is_some()
                };
                if dup {
                    return Err(Error::parse(ln, format!("second `{d}` line for index {a}")));
                }
            }
            d => return Err(Error::parse(ln, format!("unknown or repeated directive `{d}`"))),
        }
    }
    let ni = ni.ok_or_else(|| Error::parse(0, "missing `indices`"))?;
    let nb = nb.ok_or_else(|| Error::parse(0, "missing `formulas`"))?;
    let (fl, fam) = family.ok_or_else(|| Error::parse(0, "missing `family`"))?;
    let family = match (fam[0], &fam[1..]) {
        ("quorum", [q]) => CoveringFamily::quorum(ni, num(fl, q)?),
        ("principal", gen) => CoveringFamily::principal(ni, index_list(fl, gen)?),
        ("explicit", []) => CoveringFamily::explicit(ni, members.clone()),
        _ => return Err(Error::parse(fl, "expected `family quorum <k>|principal <α…>|explicit`")),
    }
    .map_err(core_err(fl))?;
    if !members.is_empty() && !matches!(family.kind(), FamilyKind::Explicit(_)) {
        return Err(Error::parse(0, "`member` lines need `family explicit`"));
    }
    let graphs = g.graphs(ni, nb, "g")?;
    let instance = if k.any() { Some(LosInstance { graphs: k.graphs(ni, nb, "k")? }) } else { None };
    Ok(Trace::new(family, nb, graphs, instance)?)
}

fn single<'a>(ln: usize, args: &[&'a str]) -> Result<&'a str> {
    match args {
        [a] => Ok(a),
        _ => Err(Error::parse(ln, "expected one argument")),
    }
}

fn write_sides(s: &mut String, d: char, graphs: &[IndexGraph]) {
    for (a, g) in graphs.iter().enumerate() {
        write!(s, "{d}1 {a} :").unwrap();
        for b in ones(g.vertices()) {
            write!(s, " {b}").unwrap();
        }
        write!(s, "\n{d}2 {a} :").unwrap();
        for (u, v) in g.edges().edges() {
            write!(s, " {u}-{v}").unwrap();
        }
        s.push('\n');
    }
}

pub fn write_trace(t: &Trace) -> String {
    let mut s = format!("indices {}\nformulas {}\n", t.index_count(), t.formula_count());
    match t.family().kind() {
        FamilyKind::Quorum(k) => writeln!(s, "family quorum {k}").unwrap(),
        FamilyKind::Principal(j) => {
            s.push_str("family principal");
            for a in j.iter() {
                write!(s, " {a}").unwrap();
            }
            s.push('\n');
        }
        FamilyKind::Explicit(ms) => {
            s.push_str("family explicit\n");
            for m in ms {
                s.push_str("member");
                for a in m.iter() {
                    write!(s, " {a}").unwrap();
                }
                s.push('\n');
            }
        }
    }
    write_sides(&mut s, 'g', t.graph_sequence());
    if let Some(inst) = t.instance() {
        write_sides(&mut s, 'k', &inst.graphs);
    }
    s
}

pub fn write_tuple(t: &[usize]) -> String {
    let parts: Vec<String> = t.iter().map(|v| v.to_string()).collect();
    format!("({})", parts.join(","))
}

pub fn parse_tuple(tok: &str) -> Result<Tuple> {
    let inner = tok
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| Error::parse(0, format!("expected `(v,…)`, got `{tok}`")))?;
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    inner.split(',').map(|v| num(0, v.trim())).collect()
}

/// One `K <α> : <vertices>` line per core index of `rp`.
pub fn write_internal_set(rp: &ReducedProduct, k: &InternalSet) -> String {
    let mut s = String::new();
    for (&a, &p) in rp.core().iter().zip(&k.parts) {
        write!(s, "K {a} :").unwrap();
        for v in ones(p) {
            write!(s, " {v}").unwrap();
        }
        s.push('\n');
    }
    s
}

/// Reads `K` lines back into positions of `rp`'s core; every core index
/// must appear once and no other index may.
pub fn parse_internal_set(rp: &ReducedProduct, text: &str) -> Result<InternalSet> {
    let mut parts: Vec<Option<u64>> = vec![None; rp.core().len()];
    for (ln, toks) in lines(text) {
        if toks[0] != "K" {
            return Err(Error::parse(ln, format!("unexpected directive `{}`", toks[0])));
        }
        let (a, items) = per_index(ln, &toks[1..])?;
        let i = rp.core().iter().position(|&c| c == a).ok_or_else(|| Error::parse(ln, format!("index {a} is not in the core")))?;
        let mut m = 0u64;
        for t in items {
            let v: usize = num(ln, t)?;
            if v >= rp.formula_count() {
                return Err(Error::parse(ln, format!("formula {v} out of range")));
            }
            m |= 1 << v;
        }
        if parts[i].replace(m).is_some() {
            return Err(Error::parse(ln, format!("second `K` line for index {a}")));
        }
    }
    let parts = parts
        .into_iter()
        .zip(rp.core())
        .map(|(p, a)| p.ok_or_else(|| Error::parse(0, format!("no `K` line for index {a}"))))
        .collect::<Result<_>>()?;
    Ok(InternalSet { parts })
}
