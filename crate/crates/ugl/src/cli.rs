use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use ugl_core::distributions::{
    check_properties, find_multiplicative_refinement, necessary_condition_violation, sop2_violation, FullDistribution,
    Trace, MAX_CONDITION_FORMULAS, MAX_FULL_FORMULAS,
};
use ugl_core::graph::{find_embedding, EmbeddingMode};
use ugl_core::necessary::paper_necessary_edges;
use ugl_core::shapes::{families_of_order, family_graph, realize_intervals, recognize, ShapeId};
use ugl_core::ultragraph::{eta, extend_to_internal_clique, ReducedProduct};
use ugl_core::Graph;

use crate::error::{Error, Result};
use crate::format;
use crate::parallel;

#[derive(Parser, Debug)]
#[command(name = "ugl", version, about = "Graph shapes, necessary sets and distribution traces")]
struct Cli {
    /// Worker threads for enumeration.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct ShapeArg {
    #[arg(long, value_parser = parse_shape)]
    shape: ShapeId,
}

fn parse_shape(s: &str) -> std::result::Result<ShapeId, String> {
    s.parse().map_err(|e: ugl_core::Error| e.to_string())
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Decide membership; print `member` or a witness.
    Recognize {
        #[command(flatten)]
        shape: ShapeArg,
        graph: PathBuf,
    },
    /// Interval model or obstruction witness.
    Realize {
        #[arg(long)]
        distinct_endpoints: bool,
        graph: PathBuf,
    },
    /// Minimal obstructions up to isomorphism.
    Obstructions {
        #[command(flatten)]
        shape: ShapeArg,
        #[arg(long)]
        max_n: usize,
    },
    /// Necessary sets of an obstruction.
    Necessary {
        #[command(flatten)]
        shape: ShapeArg,
        graph: PathBuf,
        #[arg(long, conflicts_with = "all_minimal")]
        verify: Option<PathBuf>,
        #[arg(long)]
        all_minimal: bool,
    },
    /// Adequacy, properties and shape conditions of a trace.
    TraceCheck { trace: PathBuf },
    /// Multiplicative refinement or `none`.
    TraceRefine { trace: PathBuf },
    /// Shape condition on the pair values of a trace.
    TraceCondition {
        #[command(flatten)]
        shape: ShapeArg,
        trace: PathBuf,
    },
    /// Reduced product of a principal trace.
    Ultragraph {
        trace: PathBuf,
        #[arg(long)]
        extend_eta: bool,
    },
}

/// Exit code and the text for stdout and stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let mut out = String::new();
    match dispatch(&cli, &mut out) {
        Ok(code) => Outcome { code, stdout: out, stderr: String::new() },
        Err(e) => Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

fn in_file<T>(path: &Path, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { line, msg } => Error::Parse { line, msg: format!("{}: {msg}", path.display()) },
        e => e,
    })
}

fn read_graph(path: &Path) -> Result<Graph> {
    in_file(path, format::parse_graph(&read(path)?))
}

fn read_trace(path: &Path) -> Result<Trace> {
    in_file(path, format::parse_trace(&read(path)?))
}

fn bit(b: bool) -> u8 {
    b as u8
}

fn dispatch(cli: &Cli, out: &mut String) -> Result<i32> {
    let jobs = cli.jobs;
    if jobs == 0 {
        return Err(Error::Usage("--jobs must be at least 1".into()));
    }
    match &cli.cmd {
        Cmd::Recognize { shape, graph } => {
            let g = read_graph(graph)?;
            Ok(match recognize(shape.shape, &g) {
                Ok(()) => {
                    out.push_str("member\n");
                    0
                }
                Err(w) => {
                    out.push_str(&format::write_witness(&w));
                    1
                }
            })
        }
        Cmd::Realize { distinct_endpoints, graph } => {
            let g = read_graph(graph)?;
            Ok(match realize_intervals(&g, *distinct_endpoints) {
                Ok(m) => {
                    out.push_str(&format::write_model(&m));
                    0
                }
                Err(w) => {
                    out.push_str(&format::write_witness(&w));
                    1
                }
            })
        }
        Cmd::Obstructions { shape, max_n } => {
            for (i, g) in parallel::minimal_obstructions(shape.shape, *max_n, jobs)?.iter().enumerate() {
                if i > 0 {
                    out.push('\n');
                }
                if let Some(id) = families_of_order(shape.shape, g.n())
                    .into_iter()
                    .find(|&id| family_graph(id).is_ok_and(|h| ugl_core::graph::is_isomorphic(&h, g)))
                {
                    writeln!(out, "# {id}").unwrap();
                }
                out.push_str(&format::write_graph(g));
            }
            Ok(0)
        }
        Cmd::Necessary { shape, graph, verify, all_minimal } => {
            let g = read_graph(graph)?;
            necessary(shape.shape, &g, verify.as_deref(), *all_minimal, jobs, out)
        }
        Cmd::TraceCheck { trace } => trace_check(&read_trace(trace)?, out),
        Cmd::TraceRefine { trace } => {
            let t = read_trace(trace)?;
            Ok(match find_multiplicative_refinement(&t) {
                Some(r) => {
                    out.push_str(&format::write_trace(&r));
                    0
                }
                None => {
                    out.push_str("none\n");
                    1
                }
            })
        }
        Cmd::TraceCondition { shape, trace } => {
            let t = read_trace(trace)?;
            let ok = shape_conditions(&t, Some(shape.shape), out)?;
            Ok(if ok { 0 } else { 1 })
        }
        Cmd::Ultragraph { trace, extend_eta } => ultragraph(&read_trace(trace)?, *extend_eta, out),
    }
}

fn necessary(shape: ShapeId, g: &Graph, verify: Option<&Path>, all_minimal: bool, jobs: usize, out: &mut String) -> Result<i32> {
    let c = parallel::completions(shape, g, jobs)?;
    let ts = c.minimal_transversals();
    let block = |out: &mut String, mask: u64| {
        out.push_str(&format::write_necessary_set(&c.necessary_set(mask, c.flags_with(mask, &ts))));
    };
    if let Some(path) = verify {
        let (edges, _) = in_file(path, format::parse_necessary_set(&read(path)?))?;
        let mask = c.mask_of(&edges)?;
        block(out, mask);
        if let Some(&m) = c.minimal.iter().find(|&&m| m & mask == 0) {
            out.push_str("avoided-by");
            for (u, v) in c.pairs_of(m) {
                write!(out, " {u}-{v}").unwrap();
            }
            out.push('\n');
            return Ok(1);
        }
        return Ok(0);
    }
    let named = families_of_order(shape, g.n()).into_iter().find_map(|id| {
        let h = family_graph(id).ok()?;
        (h.edge_count() == g.edge_count()).then_some(())?;
        find_embedding(&h, g, EmbeddingMode::Induced).map(|e| (id, e))
    });
    match named {
        Some((id, e)) if !all_minimal => {
            let edges: Vec<(usize, usize)> = paper_necessary_edges(id)?
                .into_iter()
                .map(|(u, v)| (e.map[u].min(e.map[v]), e.map[u].max(e.map[v])))
                .collect();
            writeln!(out, "# {id}").unwrap();
            block(out, c.mask_of(&edges)?);
        }
        _ => {
            for (i, &t) in ts.iter().enumerate() {
                if i > 0 {
                    out.push('\n');
                }
                block(out, t);
            }
        }
    }
    Ok(0)
}

/// Writes the tree and interval condition lines; `shape` limits to one.
fn shape_conditions(t: &Trace, shape: Option<ShapeId>, out: &mut String) -> Result<bool> {
    let mut ok = true;
    let wants = |s: ShapeId| shape.is_none_or(|x| x == s);
    if wants(ShapeId::TreeComparability) {
        match sop2_violation(t) {
            None => out.push_str("sop2 holds\n"),
            Some(v) => {
                ok = false;
                let [a, b, c, d] = v.quad;
                writeln!(out, "sop2 violated {a} {b} {c} {d} at {}", v.index).unwrap();
            }
        }
    }
    for s in [ShapeId::TreeComparability, ShapeId::IntervalIntersection] {
        if !wants(s) {
            continue;
        }
        if t.formula_count() > MAX_CONDITION_FORMULAS && shape.is_none() {
            writeln!(out, "condition {s} skipped").unwrap();
            continue;
        }
        match necessary_condition_violation(t, s)? {
            None => writeln!(out, "condition {s} holds").unwrap(),
            Some(v) => {
                ok = false;
                write!(out, "condition {s} violated {}", v.family).unwrap();
                for x in &v.map {
                    write!(out, " {x}").unwrap();
                }
                writeln!(out, " at {}", v.index).unwrap();
            }
        }
    }
    Ok(ok)
}

fn trace_check(t: &Trace, out: &mut String) -> Result<i32> {
    let r = t.validate();
    writeln!(out, "pair_adequate {}", bit(r.pair_adequate())).unwrap();
    for b in &r.uncovered_formulas {
        writeln!(out, "uncovered formula {b}").unwrap();
    }
    for (b, c) in &r.uncovered_pairs {
        writeln!(out, "uncovered pair {b}-{c}").unwrap();
    }
    if t.instance().is_some() {
        write!(out, "instance {}", if r.instance_violations.is_empty() { "ok" } else { "violated" }).unwrap();
        for a in &r.instance_violations {
            write!(out, " {a}").unwrap();
        }
        out.push('\n');
    }
    if t.formula_count() <= MAX_FULL_FORMULAS {
        let f = FullDistribution::graphlike_from_trace(t)?;
        let p = check_properties(&f, t.instance());
        writeln!(out, "monotone {}", bit(p.monotone)).unwrap();
        writeln!(out, "graph_like {}", bit(p.graph_like)).unwrap();
        writeln!(out, "multiplicative {}", bit(p.multiplicative)).unwrap();
        writeln!(out, "pairwise_splitting {}", bit(p.pairwise_splitting)).unwrap();
        if let Some(l) = p.refines_los {
            writeln!(out, "refines_los {}", bit(l)).unwrap();
        }
    } else {
        out.push_str("properties skipped\n");
    }
    shape_conditions(t, None, out)?;
    Ok(if r.is_ok() { 0 } else { 1 })
}

fn ultragraph(t: &Trace, extend: bool, out: &mut String) -> Result<i32> {
    let rp = ReducedProduct::build(t)?;
    out.push_str("core");
    for a in rp.core() {
        write!(out, " {a}").unwrap();
    }
    writeln!(out, "\nvertices {}\nedges {}", rp.vertex_count(), rp.edge_count()).unwrap();
    let e = match eta(&rp) {
        Ok(e) => e,
        Err(err) if extend => return Err(err.into()),
        Err(err) => {
            writeln!(out, "eta undefined: {err}").unwrap();
            return Ok(1);
        }
    };
    for (b, img) in e.images.iter().enumerate() {
        writeln!(out, "eta {b} {}", format::write_tuple(img)).unwrap();
    }
    match e.missing_pair {
        None => out.push_str("eta complete\n"),
        Some((b, c, a)) => writeln!(out, "eta incomplete {b}-{c} at {a}").unwrap(),
    }
    if !extend {
        return Ok(if e.complete { 0 } else { 1 });
    }
    match extend_to_internal_clique(&rp, &e.images) {
        Ok(k) => {
            out.push_str(&format::write_internal_set(&rp, &k));
            Ok(0)
        }
        Err(ugl_core::Error::NotComplete { .. }) => {
            out.push_str("none\n");
            Ok(1)
        }
        Err(err) => Err(err.into()),
    }
}
