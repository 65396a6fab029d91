mod report;

use std::fmt;
use std::io::{Read, Write};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use intchain::auxgraph::{alpha_bruteforce, alpha_dp, build_aux_graph, AuxGraph, AuxReport, TripleVertex};
use intchain::bounds::{self, Equality};
use intchain::chain::{double_chain, HostSpec};
use intchain::format::{self, ParseOptions};
use intchain::gallery::{self, Params};
use intchain::injection::{self, InjectOptions, TheoremOptions};
use intchain::la::{self, LaOptions, WindowMode};
use intchain::par::{self, Exec};
use intchain::{dot, Error, GradedPoset, Poset};
use serde_json::{json, Value};

use report::{Ctx, InputDigest, Warning};

#[derive(Parser)]
#[command(name = "intchain", version, about = "Forbidden subposets in interval chains")]
struct Cli {
    /// Worker threads for the search kernels (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Accept posets whose Hasse diagram is disconnected.
    #[arg(long, global = true)]
    allow_disconnected: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Size, levels, gradedness, α and every bound for one poset.
    Analyze {
        file: String,
        /// Write PREFIX.hasse.dot and PREFIX.aux.dot.
        #[arg(long, value_name = "PREFIX")]
        dot: Option<String>,
        #[arg(long, default_value_t = 4)]
        k_max: usize,
        /// Also report La(n, P) upper bounds.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 24)]
        cap_bruteforce: usize,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Auxiliary graph with α from the DP and, under the cap, brute force.
    Auxgraph {
        file: String,
        #[arg(long, value_name = "PATH")]
        dot: Option<String>,
        #[arg(long, default_value_t = 24)]
        cap_bruteforce: usize,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Bound table from a poset file or from explicit parameters.
    Bounds {
        #[arg(conflicts_with_all = ["size", "height"], required_unless_present_all = ["size", "height"])]
        file: Option<String>,
        #[arg(long, requires = "height")]
        size: Option<usize>,
        #[arg(long, requires = "size")]
        height: Option<usize>,
        #[arg(long, conflicts_with = "file")]
        alpha: Option<usize>,
        #[arg(long, default_value_t = 4)]
        k_max: usize,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Exact La(host, P).
    LaExact {
        #[arg(long)]
        pattern: String,
        /// `chain:k=K,n=N`, `boolean:n=N` or `window:n=N,i=I,m=M`.
        #[arg(long)]
        host: String,
        #[arg(long, default_value_t = la::DEFAULT_LA_CAP)]
        cap_host: usize,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// La(C_k(n), P) for k = 1..=k_max.
    LaSequence {
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k_max: usize,
        #[arg(long, default_value_t = la::DEFAULT_LA_CAP)]
        cap_host: usize,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Constructive injection of P into a family of the double chain C_2(n).
    Embed {
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        n: usize,
        /// Comma-separated element names, e.g. `l0,r1,l2`.
        #[arg(long)]
        family: String,
        /// `auto`, or triples as `a,b,c;d,e,f` (empty string for none).
        #[arg(long, default_value = "auto")]
        independent_set: String,
        /// On failure, also run the embedding search on the family.
        #[arg(long)]
        fallback_search: bool,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Every (or a sampled) family of size |P|+h-α-1 in C_2(n) must contain P.
    VerifyTheorem {
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        n: usize,
        #[arg(long, requires = "seed")]
        sample: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 2_000_000)]
        max_families: u128,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// e_n(P) from windows of consecutive levels of B_n.
    EEstimate {
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        n_max: usize,
        #[arg(long, value_enum, default_value_t = Mode::Every)]
        mode: Mode,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Compares e_n(P) with (|P|+h-α-2)/2.
    EqualityCheck {
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        n_max: usize,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Built-in posets.
    Gallery {
        #[arg(long, conflicts_with = "name", required_unless_present = "name")]
        list: bool,
        #[arg(long)]
        name: Option<String>,
        /// `key=value`, repeatable.
        #[arg(long = "param", value_parser = parse_param)]
        params: Vec<(String, usize)>,
        #[arg(long, default_value = "-")]
        out: String,
        /// Also write a JSON report here.
        #[arg(long)]
        report: Option<String>,
    },
    /// Λ- or V-extension at a level.
    Extend {
        file: String,
        #[arg(long = "type", value_enum)]
        kind: ExtKind,
        #[arg(long)]
        level: usize,
        /// The two excluded elements, `a,b`.
        #[arg(long, conflicts_with = "all", required_unless_present = "all")]
        exclude: Option<String>,
        /// Every excluded pair; emits a JSON report instead of a poset.
        #[arg(long)]
        all: bool,
        /// Name of the new element (default: first free `n1`, `n2`, ...).
        #[arg(long = "element")]
        element: Option<String>,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Linear sum (oplus) or glued sum (otimes) of two posets.
    Compose {
        #[arg(long, value_enum)]
        op: Op,
        first: String,
        second: String,
        #[arg(long, default_value = "-")]
        out: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Every,
    Exists,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExtKind {
    Lambda,
    Vee,
}

#[derive(Clone, Copy, ValueEnum)]
enum Op {
    Oplus,
    Otimes,
}

/// Bad arguments found after parsing; exits with 2 like clap's own errors.
#[derive(Debug)]
struct Usage(String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn parse_param(s: &str) -> std::result::Result<(String, usize), String> {
    let (k, v) = s.split_once('=').ok_or("expected key=value")?;
    let v = v.parse().map_err(|_| format!("`{v}` is not a non-negative integer"))?;
    Ok((k.to_string(), v))
}

struct Io {
    stdin_used: bool,
    allow_disconnected: bool,
}

impl Io {
    fn read(&mut self, path: &str, ctx: &mut Ctx) -> Result<String> {
        let bytes = if path == "-" {
            if self.stdin_used {
                return Err(usage("standard input can be read only once"));
            }
            self.stdin_used = true;
            let mut buf = Vec::new();
            std::io::stdin().read_to_end(&mut buf).context("reading standard input")?;
            buf
        } else {
            std::fs::read(path).with_context(|| format!("reading {path}"))?
        };
        ctx.inputs.push(InputDigest::new(path, &bytes));
        String::from_utf8(bytes).with_context(|| format!("{path} is not UTF-8"))
    }

    fn poset(&mut self, path: &str, ctx: &mut Ctx) -> Result<Poset> {
        let text = self.read(path, ctx)?;
        let opts = ParseOptions {
            allow_disconnected: self.allow_disconnected,
        };
        Ok(format::parse_with(&text, opts)?)
    }

    fn graded(&mut self, path: &str, ctx: &mut Ctx) -> Result<GradedPoset> {
        Ok(GradedPoset::new(self.poset(path, ctx)?)?)
    }
}

fn write_out(path: &str, text: &str) -> Result<()> {
    if path == "-" {
        let mut out = std::io::stdout().lock();
        out.write_all(text.as_bytes())?;
        out.flush()?;
    } else {
        std::fs::write(path, text).with_context(|| format!("writing {path}"))?;
    }
    Ok(())
}

fn emit(path: &str, ctx: Ctx, results: Value) -> Result<()> {
    let command = std::env::args().collect();
    let mut text = serde_json::to_string_pretty(&ctx.finish(command, results))?;
    text.push('\n');
    write_out(path, &text)
}

fn names(p: &Poset, xs: &[usize]) -> Vec<String> {
    xs.iter().map(|&e| p.name_of(e).to_string()).collect()
}

fn triple_names(g: &AuxGraph, p: &Poset, ids: &[usize]) -> Vec<Vec<String>> {
    ids.iter().map(|&v| names(p, &g.vertex(v).elems)).collect()
}

/// α by DP, cross-checked by brute force when the graph is small enough.
fn alpha_with_check(g: &AuxGraph, cap: usize, ctx: &mut Ctx) -> Result<(usize, Vec<usize>, Option<usize>)> {
    let dp = alpha_dp(g);
    let bf = match alpha_bruteforce(g, cap) {
        Ok(r) => Some(r.size),
        Err(Error::TooLarge { .. }) => {
            ctx.warn(Warning::BruteforceSkipped);
            None
        }
        Err(e) => return Err(e.into()),
    };
    if let Some(b) = bf {
        if b != dp.size {
            bail!("α mismatch: DP {} vs brute force {b}", dp.size);
        }
    }
    Ok((dp.size, dp.witness, bf))
}

fn analyze(io: &mut Io, file: &str, dot_prefix: Option<&str>, k_max: usize, n: Option<usize>, cap: usize, ctx: &mut Ctx) -> Result<Value> {
    let p = io.poset(file, ctx)?;
    let connected = p.is_connected();
    let check = p.graded_check();
    let levels: Vec<Vec<String>> = p.mirsky_levels().levels.iter().map(|l| names(&p, l)).collect();
    let (bn, _) = bounds::burcsi_nagy(p.len(), p.height());
    let mut res = json!({
        "name": p.name(),
        "size": p.len(),
        "height": p.height(),
        "relations": p.relation_count(),
        "connected": connected,
        "graded": check.graded,
        "levels": levels,
        "level_sizes": p.mirsky_levels().sizes(),
        "burcsi_nagy_c2": bn,
    });
    if let Some(w) = &check.witness {
        res["short_maximal_chain"] = json!(names(&p, w));
    }
    let mut alpha = None;
    let mut dot_paths = serde_json::Map::new();
    if !connected {
        ctx.warn(Warning::Disconnected);
    } else if !check.graded {
        ctx.warn(Warning::NotGraded);
    } else {
        let gp = GradedPoset::new(p.clone())?;
        let g = build_aux_graph(&gp);
        let (a, witness, bf) = alpha_with_check(&g, cap, ctx)?;
        let (t, _) = bounds::theorem_main(p.len(), p.height(), a);
        res["aux_vertices"] = json!(g.len());
        res["aux_edges"] = json!(g.edges().len());
        res["alpha"] = json!(a);
        res["alpha_bruteforce"] = json!(bf);
        res["alpha_witness"] = json!(triple_names(&g, &p, &witness));
        res["theorem4_c2"] = json!(t);
        alpha = Some(a);
        if let Some(prefix) = dot_prefix {
            let path = format!("{prefix}.aux.dot");
            write_out(&path, &dot::aux_graph(&g, &p))?;
            dot_paths.insert("aux".into(), json!(path));
        }
    }
    if let Some(prefix) = dot_prefix {
        let path = format!("{prefix}.hasse.dot");
        write_out(&path, &dot::hasse(&p))?;
        dot_paths.insert("hasse".into(), json!(path));
        res["dot"] = Value::Object(dot_paths);
    }
    res["bounds"] = serde_json::to_value(bounds::report(p.len(), p.height(), alpha, k_max, n)?)?;
    Ok(res)
}

fn auxgraph(io: &mut Io, file: &str, dot_path: Option<&str>, cap: usize, ctx: &mut Ctx) -> Result<Value> {
    let gp = io.graded(file, ctx)?;
    let p = gp.poset();
    let g = build_aux_graph(&gp);
    let dp = alpha_dp(&g);
    let (_, _, bf) = alpha_with_check(&g, cap, ctx)?;
    let mut res = serde_json::to_value(AuxReport::new(&g, p, &dp))?;
    res["class_sizes"] = json!(g.classes().iter().map(Vec::len).collect::<Vec<_>>());
    res["alpha_bruteforce"] = json!(bf);
    res["pair_evaluations"] = json!(dp.pair_evaluations);
    if let Some(path) = dot_path {
        write_out(path, &dot::aux_graph(&g, p))?;
        res["dot"] = json!(path);
    }
    Ok(res)
}

fn independent_set(gp: &GradedPoset, spec: &str) -> Result<Vec<TripleVertex>> {
    if spec == "auto" {
        return Ok(injection::max_independent_set(gp));
    }
    let g = build_aux_graph(gp);
    let mut out = Vec::new();
    for group in spec.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let parts: Vec<&str> = group.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(usage(format!("triple `{group}` needs three names")));
        }
        for name in &parts {
            gp.poset().require(name)?;
        }
        let v = g
            .find_vertex(gp.poset(), &parts)
            .ok_or_else(|| usage(format!("`{group}` is not a vertex of the auxiliary graph")))?;
        out.push(g.vertex(v).clone());
    }
    Ok(out)
}

fn embed(io: &mut Io, pattern: &str, n: usize, family: &str, iset: &str, fallback: bool, ctx: &mut Ctx) -> Result<(Value, bool)> {
    let gp = io.graded(pattern, ctx)?;
    let p = gp.poset();
    let chain = double_chain(n)?;
    let fam_names: Vec<&str> = family.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    let fam = chain.family_from_names(&fam_names)?;
    let i = independent_set(&gp, iset)?;
    let i_names: Vec<Vec<String>> = i.iter().map(|v| names(p, &v.elems)).collect();
    let opts = InjectOptions {
        fallback_search: fallback,
    };
    let base = json!({
        "pattern": p.name(),
        "n": n,
        "family": chain.family_names(&fam),
        "independent_set": i_names,
        "required_family_size": injection::required_family_size(&gp, i.len()),
    });
    match injection::construct_embedding_with(&gp, &i, &chain, &fam, opts) {
        Ok(c) => {
            let mut res = base;
            res["constructed"] = json!(true);
            res["embedding"] = json!(c.embedding.named(p, chain.as_poset()));
            res["skips"] = json!(c.plan.skips.len());
            res["plan"] = serde_json::to_value(&c.plan)?;
            Ok((res, true))
        }
        Err(Error::ConstructionFailed(f)) => {
            ctx.warn(Warning::ConstructionFailed);
            let mut res = base;
            res["constructed"] = json!(false);
            res["diagnostic"] = json!(f.diagnostic);
            res["fallback_embeds"] = json!(f.fallback_embeds);
            res["plan"] = serde_json::to_value(&f.plan)?;
            Ok((res, false))
        }
        Err(e) => Err(e.into()),
    }
}

fn gallery_cmd(list: bool, name: Option<&str>, params: &[(String, usize)], out: &str, ctx: &mut Ctx) -> Result<Value> {
    if list {
        return Ok(json!({ "entries": gallery::list() }));
    }
    let name = name.expect("clap enforces --name without --list");
    let ps: Params = params.iter().cloned().collect();
    let p = gallery::gallery_checked(name, &ps)?;
    if gallery::list().iter().any(|e| e.name == name && e.interpretive) {
        ctx.warn(Warning::Interpretive);
    }
    write_out(out, &format::write(&p))?;
    let f = gallery::facts(&p);
    Ok(json!({ "name": name, "params": ps, "facts": f }))
}

fn pair(p: &Poset, spec: &str) -> Result<[usize; 2]> {
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(usage(format!("--exclude `{spec}` needs two names")));
    }
    Ok([p.require(parts[0])?, p.require(parts[1])?])
}

fn extend_one(gp: &GradedPoset, kind: ExtKind, level: usize, excluded: [usize; 2], element: Option<&str>) -> Result<GradedPoset> {
    Ok(match kind {
        ExtKind::Lambda => gallery::lambda_extension(gp, level, excluded, element)?,
        ExtKind::Vee => gallery::vee_extension(gp, level, excluded, element)?,
    })
}

fn extend_all(gp: &GradedPoset, kind: ExtKind, level: usize, element: Option<&str>) -> Result<Value> {
    let from = match kind {
        ExtKind::Lambda => level.saturating_sub(1),
        ExtKind::Vee => level + 1,
    };
    let p = gp.poset();
    let mut rows = Vec::new();
    for ex in gallery::excluded_pairs(gp, from) {
        let q = extend_one(gp, kind, level, ex, element)?;
        let g = build_aux_graph(&q);
        rows.push(json!({
            "excluded": names(p, &ex),
            "size": q.len(),
            "height": q.height(),
            "aux_vertices": g.len(),
            "alpha": alpha_dp(&g).size,
            "poset": format::write(q.poset()),
        }));
    }
    if rows.is_empty() {
        let size = gp.levels().size(from);
        return Err(Error::LevelTooSmall { level: from, size }.into());
    }
    Ok(json!({ "level": level, "extensions": rows }))
}

fn run(cli: Cli) -> Result<ExitCode> {
    let mut ctx = Ctx::new();
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(usage("--threads must be at least 1"));
        }
        if !par::set_threads(t) {
            ctx.warn(Warning::ThreadsIgnored);
        }
    }
    let exec = Exec::default();
    let mut io = Io {
        stdin_used: false,
        allow_disconnected: cli.allow_disconnected,
    };
    match cli.cmd {
        Cmd::Analyze { file, dot, k_max, n, cap_bruteforce, out } => {
            let res = analyze(&mut io, &file, dot.as_deref(), k_max, n, cap_bruteforce, &mut ctx)?;
            emit(&out, ctx, res)?;
        }
        Cmd::Auxgraph { file, dot, cap_bruteforce, out } => {
            let res = auxgraph(&mut io, &file, dot.as_deref(), cap_bruteforce, &mut ctx)?;
            emit(&out, ctx, res)?;
        }
        Cmd::Bounds { file, size, height, alpha, k_max, n, out } => {
            let (size, h, alpha) = match file {
                Some(f) => {
                    let p = io.poset(&f, &mut ctx)?;
                    let alpha = match GradedPoset::new(p.clone()) {
                        Ok(gp) => Some(alpha_dp(&build_aux_graph(&gp)).size),
                        Err(Error::NotGraded(_)) => {
                            ctx.warn(Warning::NotGraded);
                            None
                        }
                        Err(Error::Disconnected(_)) => {
                            ctx.warn(Warning::Disconnected);
                            None
                        }
                        Err(e) => return Err(e.into()),
                    };
                    (p.len(), p.height(), alpha)
                }
                None => (size.unwrap(), height.unwrap(), alpha),
            };
            if size == 0 || h == 0 || h > size {
                return Err(usage("need 1 <= height <= size"));
            }
            let r = bounds::report(size, h, alpha, k_max, n)?;
            emit(&out, ctx, serde_json::to_value(r)?)?;
        }
        Cmd::LaExact { pattern, host, cap_host, out } => {
            let p = io.poset(&pattern, &mut ctx)?;
            let spec: HostSpec = host.parse().map_err(|e: Error| usage(e.to_string()))?;
            let h = spec.build()?;
            let r = la::la_exact_with(&h.poset, &p, LaOptions { cap: cap_host, exec })?;
            let mut res = serde_json::to_value(r)?;
            res["host_spec"] = json!(spec);
            emit(&out, ctx, res)?;
        }
        Cmd::LaSequence { pattern, n, k_max, cap_host, out } => {
            let p = io.poset(&pattern, &mut ctx)?;
            let r = la::la_chain_sequence(&p, n, k_max, LaOptions { cap: cap_host, exec })?;
            emit(&out, ctx, serde_json::to_value(r)?)?;
        }
        Cmd::Embed { pattern, n, family, independent_set, fallback_search, out } => {
            let (res, ok) = embed(&mut io, &pattern, n, &family, &independent_set, fallback_search, &mut ctx)?;
            emit(&out, ctx, res)?;
            if !ok {
                return Ok(ExitCode::from(1));
            }
        }
        Cmd::VerifyTheorem { pattern, n, sample, seed, max_families, out } => {
            let gp = io.graded(&pattern, &mut ctx)?;
            let opts = TheoremOptions { sample, seed, max_families, exec };
            let r = injection::theorem_check(&gp, n, &opts)?;
            if r.sampled {
                ctx.warn(Warning::Sampled);
            }
            if r.construction_failures > 0 {
                ctx.warn(Warning::ConstructionFailed);
            }
            let mut res = serde_json::to_value(&r)?;
            res["passed"] = json!(r.passed());
            emit(&out, ctx, res)?;
        }
        Cmd::EEstimate { pattern, n_max, mode, out } => {
            let p = io.poset(&pattern, &mut ctx)?;
            let mode = match mode {
                Mode::Every => WindowMode::Every,
                Mode::Exists => WindowMode::Exists,
            };
            let r = la::e_estimate(&p, n_max, mode, exec)?;
            if !r.stabilized {
                ctx.warn(Warning::NotStabilized);
            }
            emit(&out, ctx, serde_json::to_value(r)?)?;
        }
        Cmd::EqualityCheck { pattern, n_max, out } => {
            let p = io.poset(&pattern, &mut ctx)?;
            let r = bounds::equality_check(&p, n_max, exec)?;
            if r.result == Equality::Unstable {
                ctx.warn(Warning::NotStabilized);
            }
            emit(&out, ctx, serde_json::to_value(r)?)?;
        }
        Cmd::Gallery { list, name, params, out, report } => {
            if list {
                let res = gallery_cmd(true, None, &[], &out, &mut ctx)?;
                emit(&out, ctx, res)?;
            } else {
                let res = gallery_cmd(false, name.as_deref(), &params, &out, &mut ctx)?;
                if let Some(path) = report {
                    emit(&path, ctx, res)?;
                } else if ctx.has(Warning::Interpretive) {
                    eprintln!("warning: {}", Warning::Interpretive.message());
                }
            }
        }
        Cmd::Extend { file, kind, level, exclude, all, element, out } => {
            let gp = io.graded(&file, &mut ctx)?;
            if all {
                let res = extend_all(&gp, kind, level, element.as_deref())?;
                emit(&out, ctx, res)?;
            } else {
                let ex = pair(gp.poset(), exclude.as_deref().expect("clap enforces --exclude"))?;
                let q = extend_one(&gp, kind, level, ex, element.as_deref())?;
                write_out(&out, &format::write(q.poset()))?;
            }
        }
        Cmd::Compose { op, first, second, out } => {
            let a = io.poset(&first, &mut ctx)?;
            let b = io.poset(&second, &mut ctx)?;
            let q = match op {
                Op::Oplus => intchain::oplus(&a, &b)?,
                Op::Otimes => intchain::otimes(&a, &b)?,
            };
            write_out(&out, &format::write(&q))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Usage>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
