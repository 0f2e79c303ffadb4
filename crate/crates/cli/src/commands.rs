use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use pprloc::bipartite::{
    bipartite_constructive_nnz, bipartite_l1_lower_bound, bipartite_min_nnz, exact_ppr_vector,
    growth_table, growth_table_csv, BipartiteSpec,
};
use pprloc::bounds::{nonzero_bound_general, nonzero_bound_undirected, BoundInputs};
use pprloc::degseq::{fit_rank_skew, generate_rank_skewed, FitConfig};
use pprloc::graphgen::{generate_chung_lu, generate_exact_degree, GenConfig, Generated};
use pprloc::io::{decode_cache, encode_cache, parse_edge_list_bytes, write_edge_list};
use pprloc::localization::{
    compare_curves, localization_curve, parse_eps_grid, LocalizationCurve,
};
use pprloc::solver::{gauss_southwell_solve, GsConfig};
use pprloc::{DegreeSequence, Graph, Norm, PprProblem};

use crate::args::*;
use crate::manifest::{sidecar, RunManifest};
use crate::parallel::par_map;

/// A bad flag combination or value; exits with status 1.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

pub fn run(cli: &Cli) -> Result<()> {
    let flags = serde_json::to_value(&cli.command)?;
    let flags = flags
        .as_object()
        .and_then(|o| o.values().next().cloned())
        .unwrap_or(flags);
    let mut m = RunManifest::new(cli.command.name(), flags);
    match &cli.command {
        Command::Ingest(a) => ingest(a, &mut m),
        Command::GenDegseq(a) => gen_degseq(a, &mut m),
        Command::FitDegseq(a) => fit_degseq(a, &mut m),
        Command::GenGraph(a) => gen_graph(a, &mut m),
        Command::Solve(a) => solve(a, &mut m),
        Command::Curve(a) => curve(a, &mut m),
        Command::Bound(a) => bound(a, &mut m),
        Command::Bipartite(a) => bipartite(a, &mut m),
        Command::Clustering(a) => clustering(a, &mut m),
        Command::Pipeline(a) => pipeline(a, &mut m),
    }
}

fn is_cache_path(p: &Path) -> bool {
    p.extension().is_some_and(|e| e == "pprg")
}

fn load_graph(path: &Path, directed: bool, m: &mut RunManifest) -> Result<Graph> {
    let data = m.read_input(path)?;
    if is_cache_path(path) {
        return decode_cache(&data).with_context(|| format!("decoding {}", path.display()));
    }
    let raw = parse_edge_list_bytes(&data).with_context(|| format!("parsing {}", path.display()))?;
    Ok(raw.into_graph(directed)?.graph)
}

fn save_graph(g: &Graph, path: &Path) -> Result<()> {
    if is_cache_path(path) {
        fs::write(path, encode_cache(g))?;
    } else {
        let mut buf = Vec::new();
        write_edge_list(g, &mut buf)?;
        fs::write(path, buf)?;
    }
    Ok(())
}

/// Writes `text` to `out` or stdout, then the manifest.
fn finish(text: &str, output: &OutputArgs, m: &mut RunManifest) -> Result<()> {
    match &output.out {
        Some(p) => {
            fs::write(p, text).with_context(|| format!("writing {}", p.display()))?;
            m.output(p);
        }
        None => print!("{text}"),
    }
    m.write(sidecar(output.out.as_deref(), output.manifest.as_deref()).as_deref())
}

fn resolve_seed_node(g: &Graph, spec: &str) -> Result<usize> {
    if spec == "max-degree" {
        return Ok(g.max_degree_node());
    }
    let id: u64 = spec
        .parse()
        .map_err(|_| usage(format!("--seed-node must be `max-degree` or a node id, got {spec:?}")))?;
    g.original_ids()
        .iter()
        .position(|&o| o == id)
        .ok_or_else(|| usage(format!("node id {id} is not in the graph")))
}

fn parse_norms(text: &str) -> Result<Vec<Norm>> {
    if text == "all" {
        return Ok(Norm::ALL.to_vec());
    }
    text.split(',')
        .map(|s| s.trim().parse::<Norm>().map_err(|e| usage(format!("--norm: {e}"))))
        .collect()
}

fn parse_list<T: std::str::FromStr>(flag: &str, text: &str) -> Result<Vec<T>> {
    let v: Vec<T> = text
        .split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| usage(format!("{flag}: cannot parse {s:?}")))
        })
        .collect::<Result<_>>()?;
    if v.is_empty() {
        return Err(usage(format!("{flag} is empty")));
    }
    Ok(v)
}

fn eps_grid(text: &str) -> Result<Vec<f64>> {
    parse_eps_grid(text).map_err(|e| usage(format!("--eps-grid: {e}")))
}

fn target_sequence(params: &SequenceParams) -> Result<DegreeSequence> {
    let n = params.n.ok_or_else(|| usage("--n is required"))?;
    let p = params.p.ok_or_else(|| usage("--p is required"))?;
    let d = params.d.unwrap_or_else(|| (n as f64).sqrt().ceil() as usize);
    Ok(generate_rank_skewed(n, d, params.delta, p)?)
}

fn generate(target: &DegreeSequence, kind: GeneratorArg, seed: u64, restarts: u32) -> Result<Generated> {
    Ok(match kind {
        GeneratorArg::ChungLu => generate_chung_lu(target, seed)?,
        GeneratorArg::Exact => generate_exact_degree(
            target,
            &GenConfig {
                seed,
                max_restarts: restarts,
            },
        )?,
    })
}

fn sorted_degrees(g: &Graph) -> Result<DegreeSequence> {
    Ok(DegreeSequence::new(g.degrees())?)
}

fn ingest(a: &IngestArgs, m: &mut RunManifest) -> Result<()> {
    let data = m.read_input(&a.input)?;
    let raw = parse_edge_list_bytes(&data)
        .with_context(|| format!("parsing {}", a.input.display()))?;
    let comment_lines = raw.comment_lines;
    let loaded = raw.into_graph(a.directed)?;
    let mut g = loaded.graph;
    let mut lcc_fraction = 1.0;
    if a.lcc {
        (g, lcc_fraction) = g.largest_connected_component();
    }
    let stats = json!({
        "nodes": g.node_count(),
        "edges": g.edge_count(),
        "directed": g.is_directed(),
        "comment_lines": comment_lines,
        "self_loops": loaded.stats.self_loops,
        "duplicates": loaded.stats.duplicates,
        "isolated_removed": loaded.stats.isolated_removed,
        "lcc_fraction": lcc_fraction,
        "max_degree": g.max_degree(),
    });
    match &a.output.out {
        Some(p) => {
            save_graph(&g, p)?;
            m.output(p);
            println!("{}", serde_json::to_string_pretty(&stats)?);
        }
        None => {
            let mut buf = Vec::new();
            write_edge_list(&g, &mut buf)?;
            print!("{}", String::from_utf8(buf)?);
            eprintln!("{}", serde_json::to_string_pretty(&stats)?);
        }
    }
    m.write(sidecar(a.output.out.as_deref(), a.output.manifest.as_deref()).as_deref())
}

fn gen_degseq(a: &GenDegseqArgs, m: &mut RunManifest) -> Result<()> {
    let mut seq = target_sequence(&a.params)?;
    if !a.no_repair {
        seq = seq.repair_parity();
    }
    if !seq.is_graphical() {
        eprintln!("warning: sequence is not graphical");
    }
    finish(&seq.to_text(), &a.output, m)
}

fn fit_degseq(a: &FitDegseqArgs, m: &mut RunManifest) -> Result<()> {
    let seq = match (&a.input, &a.graph) {
        (Some(p), _) => {
            let data = m.read_input(p)?;
            DegreeSequence::parse(std::str::from_utf8(&data)?)?
        }
        (None, Some(p)) => sorted_degrees(&load_graph(p, false, m)?)?,
        (None, None) => return Err(usage("--input or --graph is required")),
    };
    m.seed("fit", a.seed);
    let config = FitConfig {
        sample_count: a.samples,
        ransac_iters: a.iters,
        inlier_tol: a.tol,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let fit = fit_rank_skew(&seq, &config, &mut rng)?;
    let out = json!({
        "n": seq.len(),
        "max_degree": seq.max(),
        "p": fit.p,
        "log_d": fit.log_d,
        "inlier_fraction": fit.inlier_fraction,
        "samples_used": fit.samples_used,
    });
    finish(&(serde_json::to_string_pretty(&out)? + "\n"), &a.output, m)
}

fn gen_graph(a: &GenGraphArgs, m: &mut RunManifest) -> Result<()> {
    let target = match &a.degseq {
        Some(p) => {
            let data = m.read_input(p)?;
            DegreeSequence::parse(std::str::from_utf8(&data)?)?
        }
        None => target_sequence(&a.params)?.repair_parity(),
    };
    m.seed("generator", a.seed);
    let generated = generate(&target, a.generator, a.seed, a.max_restarts)?;
    save_graph(&generated.graph, &a.out)?;
    m.output(&a.out);

    let mut info_path = a.out.as_os_str().to_owned();
    info_path.push(".gen.json");
    let info_path = PathBuf::from(info_path);
    let info = json!({
        "generation": generated.info,
        "nodes": generated.graph.node_count(),
        "edges": generated.graph.edge_count(),
        "target_nodes": target.len(),
    });
    fs::write(&info_path, serde_json::to_string_pretty(&info)? + "\n")?;
    m.output(&info_path);
    m.write(sidecar(Some(&a.out), a.manifest.as_deref()).as_deref())
}

fn solve(a: &SolveArgs, m: &mut RunManifest) -> Result<()> {
    let g = load_graph(&a.input.graph, a.input.directed, m)?;
    let seed = resolve_seed_node(&g, &a.seed_node)?;
    let prob = PprProblem::new(&g, a.alpha, seed)?;
    let mut config = GsConfig::new(a.eps);
    if let Some(k) = a.max_iters {
        config.max_iters = k;
    }
    let report = gauss_southwell_solve(&prob, &config)?;
    if let Some(p) = &a.vector_out {
        let mut s = String::from("node,value\n");
        for (i, v) in report.solution.iter() {
            writeln!(s, "{},{:e}", g.original_id(i), v)?;
        }
        fs::write(p, s)?;
        m.output(p);
    }
    let out = json!({
        "alpha": a.alpha,
        "eps": a.eps,
        "seed_node": g.original_id(seed),
        "n": g.node_count(),
        "iterations": report.iterations,
        "nnz_solution": report.nnz_solution,
        "residual_norm": report.residual_norm,
        "converged": report.converged,
    });
    finish(&(serde_json::to_string_pretty(&out)? + "\n"), &a.output, m)?;
    if !report.converged {
        bail!("solver stopped after {} iterations without converging", report.iterations);
    }
    Ok(())
}

fn curve(a: &CurveArgs, m: &mut RunManifest) -> Result<()> {
    let grid = eps_grid(&a.eps_grid)?;
    let norm: Norm = a.norm.parse().map_err(|e| usage(format!("--norm: {e}")))?;
    let g = load_graph(&a.input.graph, a.input.directed, m)?;
    let seed = resolve_seed_node(&g, &a.seed_node)?;
    let prob = PprProblem::new(&g, a.alpha, seed)?;
    let id = a.input.graph.display().to_string();
    let c = localization_curve(&prob, &grid, norm, &id)?;
    finish(&c.to_csv(), &a.output, m)
}

fn bound_rows(
    n: Option<usize>,
    d: usize,
    delta: usize,
    p: f64,
    alphas: &[f64],
    grid: &[f64],
) -> Result<String> {
    let mut s = String::from(
        "alpha,inv_eps,cp,general_bound,general_nnz,delta_substituted,undirected_bound,undirected_nnz\n",
    );
    for &alpha in alphas {
        for &eps in grid {
            let inputs = BoundInputs {
                n: n.unwrap_or(usize::MAX),
                d,
                delta,
                p,
                alpha,
                eps,
            };
            inputs.validate().map_err(|e| usage(e.to_string()))?;
            let g = nonzero_bound_general(&inputs)?;
            write!(
                s,
                "{alpha},{},{},{},{},{}",
                1.0 / eps,
                g.cp,
                g.n_bound,
                g.n_final,
                g.delta_substituted
            )?;
            if delta >= 2 {
                let u = nonzero_bound_undirected(&inputs)?;
                writeln!(s, ",{},{}", u.n_bound, u.n_final)?;
            } else {
                s.push_str(",,\n");
            }
        }
    }
    Ok(s)
}

fn bound(a: &BoundArgs, m: &mut RunManifest) -> Result<()> {
    let alphas: Vec<f64> = parse_list("--alpha", &a.alpha)?;
    let grid = match a.eps {
        Some(e) => vec![e],
        None => eps_grid(&a.eps_grid)?,
    };
    let text = bound_rows(a.n, a.d, a.delta, a.p, &alphas, &grid)?;
    finish(&text, &a.output, m)
}

fn bipartite(a: &BipartiteArgs, m: &mut RunManifest) -> Result<()> {
    if a.table {
        let sizes: Vec<usize> = parse_list("--sizes", &a.sizes)?;
        let rows = growth_table(&sizes, a.alpha, a.eps)?;
        return finish(&growth_table_csv(&rows), &a.output, m);
    }
    let n = a.n.ok_or_else(|| usage("--n is required without --table"))?;
    let k = a.k.unwrap_or(n / 2);
    let spec = BipartiteSpec::new(n, k, a.alpha)?;
    let x = exact_ppr_vector(&spec);
    let mut norms = Vec::new();
    for norm in parse_norms(&a.norm)? {
        norms.push(json!({
            "norm": norm.to_string(),
            "min_nnz": bipartite_min_nnz(&spec, a.eps, norm)?,
            "constructive_nnz": bipartite_constructive_nnz(&spec, a.eps, norm)?,
        }));
    }
    let lower = bipartite_l1_lower_bound(n, a.alpha, a.eps).ok();
    let out = json!({
        "n": n,
        "k": k,
        "alpha": a.alpha,
        "eps": a.eps,
        "exact": {
            "seed": x.seed_value,
            "same_side": x.same_side_value,
            "other_side": x.other_side_value,
        },
        "l1_lower_bound": lower,
        "norms": norms,
    });
    finish(&(serde_json::to_string_pretty(&out)? + "\n"), &a.output, m)
}

fn clustering(a: &ClusteringArgs, m: &mut RunManifest) -> Result<()> {
    let g = load_graph(&a.input.graph, a.input.directed, m)?;
    let mut out = json!({
        "nodes": g.node_count(),
        "edges": g.edge_count(),
        "triangles": g.triangle_count(),
        "clustering": g.global_clustering_coefficient(),
    });
    if a.clone {
        m.seed("clone", a.seed);
        let clone = generate_chung_lu(&sorted_degrees(&g)?, a.seed)?.graph;
        out["clone"] = json!({
            "nodes": clone.node_count(),
            "edges": clone.edge_count(),
            "triangles": clone.triangle_count(),
            "clustering": clone.global_clustering_coefficient(),
        });
        if let Some(alpha) = a.alpha {
            let nnz = |h: &Graph| -> Result<usize> {
                let prob = PprProblem::new(h, alpha, h.max_degree_node())?;
                let c = localization_curve(&prob, &[a.eps], Norm::L1, "")?;
                Ok(c.min_nnz[0])
            };
            out["min_nnz"] = json!({
                "alpha": alpha,
                "eps": a.eps,
                "original": nnz(&g)?,
                "clone": nnz(&clone)?,
            });
        }
    }
    finish(&(serde_json::to_string_pretty(&out)? + "\n"), &a.output, m)
}

/// Minimum share of the target size that must land in the largest component.
const LCC_THRESHOLD: f64 = 0.95;

fn check_connectivity(g: &Graph, target_n: usize) -> Result<usize> {
    let (lcc, _) = g.largest_connected_component();
    let size = lcc.node_count();
    if (size as f64) < LCC_THRESHOLD * target_n as f64 {
        bail!(
            "largest component has {size} of {target_n} nodes, below {LCC_THRESHOLD} of the target"
        );
    }
    Ok(size)
}

fn pipeline(a: &PipelineArgs, m: &mut RunManifest) -> Result<()> {
    let alphas: Vec<f64> = parse_list("--alpha", &a.alpha)?;
    let grid = eps_grid(&a.eps_grid)?;
    let norm: Norm = a.norm.parse().map_err(|e| usage(format!("--norm: {e}")))?;
    let p = a.params.p.ok_or_else(|| usage("--p is required"))?;
    let target = target_sequence(&a.params)?.repair_parity();
    if !target.is_graphical() {
        bail!("target degree sequence is not graphical");
    }
    fs::create_dir_all(&a.out)?;
    let write = |m: &mut RunManifest, name: &str, text: &str| -> Result<()> {
        let path = a.out.join(name);
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        m.output(&path);
        Ok(())
    };
    write(m, "degseq.txt", &target.to_text())?;

    match a.experiment {
        Experiment::Figure4 => {
            m.seed("generator", a.seed);
            let generated = generate(&target, a.generator, a.seed, GenConfig::default().max_restarts)?;
            let g = &generated.graph;
            let lcc = check_connectivity(g, target.len())?;
            let seed = resolve_seed_node(g, &a.seed_node)?;
            let realized = sorted_degrees(g)?;
            let delta = realized.min();
            let d = realized.certify(delta, p);

            let curves = par_map(&alphas, |&alpha| -> pprloc::Result<LocalizationCurve> {
                let prob = PprProblem::new(g, alpha, seed)?;
                localization_curve(&prob, &grid, norm, "generated")
            });
            let mut csv = String::from("alpha,inv_eps,min_nnz\n");
            for c in curves {
                let c = c?;
                for (e, k) in c.eps_grid.iter().zip(&c.min_nnz) {
                    writeln!(csv, "{},{},{}", c.alpha, 1.0 / e, k)?;
                }
            }
            write(m, "curve.csv", &csv)?;
            let bounds = bound_rows(Some(g.node_count()), d, delta, p, &alphas, &grid)?;
            write(m, "bound.csv", &bounds)?;
            let summary = json!({
                "generation": generated.info,
                "nodes": g.node_count(),
                "edges": g.edge_count(),
                "lcc_nodes": lcc,
                "seed_node": g.original_id(seed),
                "seed_degree": g.degree(seed),
                "certified_d": d,
                "delta": delta,
                "p": p,
            });
            write(m, "summary.json", &(serde_json::to_string_pretty(&summary)? + "\n"))?;
        }
        Experiment::Consistency => {
            let alpha = alphas[0];
            m.seed("chung_lu", a.seed);
            let cl = generate_chung_lu(&target, a.seed)?.graph;
            check_connectivity(&cl, target.len())?;
            let realized = sorted_degrees(&cl)?;
            let seeds: Vec<u64> = (1..=5).map(|i| a.seed + i).collect();
            for (i, s) in seeds.iter().enumerate() {
                m.seed(&format!("exact_{}", i + 1), *s);
            }
            let exact = par_map(&seeds, |&s| {
                generate_exact_degree(&realized, &GenConfig { seed: s, ..GenConfig::default() })
            });
            let mut graphs = vec![("chung-lu".to_string(), cl)];
            for (i, e) in exact.into_iter().enumerate() {
                graphs.push((format!("exact-{}", i + 1), e?.graph));
            }
            let curves = par_map(&graphs, |(label, h)| -> pprloc::Result<LocalizationCurve> {
                let prob = PprProblem::new(h, alpha, h.max_degree_node())?;
                localization_curve(&prob, &grid, norm, label)
            });
            let curves = curves.into_iter().collect::<pprloc::Result<Vec<_>>>()?;
            let table = compare_curves(&curves)?;
            let provenance = vec![
                format!("alpha={alpha} norm={norm} p={p} n={}", target.len()),
                format!("seeds chung-lu={} exact={:?}", a.seed, seeds),
            ];
            write(m, "consistency.csv", &table.to_csv(&provenance))?;
        }
    }
    m.write(Some(&a.out.join("manifest.json")))
        .map_err(|e| anyhow!("{e:#}"))
}
