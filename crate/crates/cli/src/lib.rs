//! Command-line driver: `classify`, `reduce`, `stable`, `minimal`, `enumerate`
//! and `verify-bounds`.
//!
//! Exit status is 0 on success, 1 on domain or precondition errors and on a
//! failed bound verification, 2 on usage errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::builder::FalseyValueParser;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use quivermod_core::affine::enumerate_affine;
use quivermod_core::bounds::{lemma_checks_for, verify_entries, BoundsReport};
use quivermod_core::classification::{find_constant_a4, root_type, FundamentalAnalysis};
use quivermod_core::enumerate::{enumerate_fundamental_with, ClassificationRow, EnumerationLimits, SearchOptions};
use quivermod_core::forms::{cartan_with_unit, expected_dimension, pair_tits};
use quivermod_core::io::{
    emit_dot, pair_to_json, read_pair_file, read_rows_csv, vertex_map, write_affine_csv, write_rows_csv, PairFile, PairRecord,
};
use quivermod_core::reductions::{apply_move, is_large, is_small_sink, is_small_source, parse_move};
use quivermod_core::search::{default_max_total_dim, DEFAULT_MAX_DEPTH};
use quivermod_core::stability::{canonical_weight, moduli_dimension_for, stability_verdict_with, EmbeddingOracle};
use quivermod_core::{
    analyze_fundamental, classify_graph, in_fundamental_set, is_tau_sigma_minimal, ClassPredicate, QuiverError, QuiverPair,
    Weight,
};

#[derive(Debug, Parser)]
#[command(name = "quivermod", version, about = "Reductions, stability and minimality of quiver-dimension vector pairs")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format; each command accepts a subset.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Lift the candidate-count guards.
    #[arg(long, global = true, env = "QUIVERMOD_FORCE", value_parser = FalseyValueParser::new())]
    force: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Dot,
    Text,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Graph class, forms and fundamental-set structure of a pair.
    Classify { file: PathBuf },
    /// Apply `tau:<vertex>` / `sigma:<vertex>` moves in order.
    Reduce {
        file: PathBuf,
        #[arg(long = "op", required = true, value_name = "tau:V|sigma:V")]
        ops: Vec<String>,
        /// Same as `--format dot`.
        #[arg(long, value_enum)]
        emit: Option<Format>,
    },
    /// Stability verdict; the weight defaults to the file's theta, then to the canonical weight.
    Stable {
        file: PathBuf,
        /// Comma-separated values in vertex order, or `name=value` entries.
        #[arg(long, allow_hyphen_values = true)]
        theta: Option<String>,
    },
    /// Bounded minimality search.
    Minimal {
        file: PathBuf,
        /// fundamental, all, dim2, affine or constant:<n>.
        #[arg(long, default_value = "all")]
        class: String,
        #[arg(long)]
        max_depth: Option<usize>,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        max_total_dim: Option<u64>,
    },
    /// Enumerate fundamental-set pairs (or affine pairs) with a given d.
    Enumerate {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long, required_unless_present = "affine", value_parser = clap::value_parser!(u64).range(1..))]
        max_vertices: Option<u64>,
        #[arg(long, required_unless_present = "affine", value_parser = clap::value_parser!(u64).range(1..))]
        max_arrows: Option<u64>,
        #[arg(long, required_unless_present = "affine", value_parser = clap::value_parser!(u64).range(1..))]
        max_entry: Option<u64>,
        /// Enumerate pairs for affine quotients instead.
        #[arg(long)]
        affine: bool,
        #[arg(long)]
        max_depth: Option<usize>,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        max_total_dim: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        jobs: u64,
    },
    /// Check the bound suite on an enumeration CSV.
    VerifyBounds { csv: PathBuf },
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl From<QuiverError> for Failure {
    fn from(e: QuiverError) -> Self {
        Failure::Domain(e.to_string())
    }
}

type Outcome = Result<(String, i32), Failure>;

/// Runs the command line and returns the exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// As [`run`], writing to the given streams.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli) {
        Ok((text, code)) => match out.write_all(text.as_bytes()) {
            Ok(()) => code,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                1
            }
        },
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "usage error: {m}");
            2
        }
        Err(Failure::Domain(m)) => {
            let _ = writeln!(err, "error: {m}");
            1
        }
    }
}

fn pick(format: Option<Format>, allowed: &[Format], command: &str) -> Result<Format, Failure> {
    let f = format.unwrap_or(allowed[0]);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        let names: Vec<String> = allowed.iter().filter_map(|a| a.to_possible_value()).map(|v| v.get_name().to_string()).collect();
        Err(Failure::Usage(format!("`{command}` supports --format {}", names.join("|"))))
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn dispatch(cli: Cli) -> Outcome {
    let force = cli.force;
    match cli.command {
        Command::Classify { file } => {
            let format = pick(cli.format, &[Format::Json, Format::Text], "classify")?;
            classify(&read_pair_file(&file)?, format)
        }
        Command::Reduce { file, ops, emit } => {
            let format = pick(emit.or(cli.format), &[Format::Json, Format::Dot], "reduce")?;
            reduce(&read_pair_file(&file)?, &ops, format)
        }
        Command::Stable { file, theta } => {
            let format = pick(cli.format, &[Format::Json, Format::Text], "stable")?;
            stable(&read_pair_file(&file)?, theta.as_deref(), force, format)
        }
        Command::Minimal { file, class, max_depth, max_total_dim } => {
            let format = pick(cli.format, &[Format::Json, Format::Text], "minimal")?;
            let class = ClassPredicate::parse(&class).map_err(|e| Failure::Usage(e.to_string()))?;
            minimal(&read_pair_file(&file)?, &class, max_depth, max_total_dim, format)
        }
        Command::Enumerate { d, max_vertices, max_arrows, max_entry, affine, max_depth, max_total_dim, out, jobs } => {
            let format = pick(cli.format, &[Format::Csv, Format::Json], "enumerate")?;
            let limits = match (max_vertices, max_arrows, max_entry) {
                (Some(v), Some(a), Some(e)) => Some(EnumerationLimits {
                    max_vertices: usize::try_from(v).map_err(|_| Failure::Usage("--max-vertices too large".into()))?,
                    max_arrows: usize::try_from(a).map_err(|_| Failure::Usage("--max-arrows too large".into()))?,
                    max_entry: e,
                }),
                (None, None, None) => None,
                _ => return Err(Failure::Usage("give all of --max-vertices, --max-arrows, --max-entry or none".into())),
            };
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs as usize)
                .build()
                .map_err(|e| Failure::Domain(format!("thread pool: {e}")))?;
            let text = pool.install(|| {
                if affine {
                    enumerate_affine_rows(d, limits.as_ref(), force, format)
                } else {
                    let limits = limits.expect("clap requires limits without --affine");
                    let options = SearchOptions { max_depth, max_total_dim, force };
                    enumerate_rows(d, &limits, &options, format)
                }
            })?;
            match out {
                Some(path) => {
                    std::fs::write(&path, text).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))?;
                    Ok((String::new(), 0))
                }
                None => Ok((text, 0)),
            }
        }
        Command::VerifyBounds { csv } => {
            let format = pick(cli.format, &[Format::Json, Format::Text], "verify-bounds")?;
            verify(&csv, format)
        }
    }
}

fn names(pair: &QuiverPair, vs: impl IntoIterator<Item = usize>) -> Vec<String> {
    vs.into_iter().map(|v| pair.quiver().name(v).to_string()).collect()
}

fn analysis_json(pair: &QuiverPair, a: &FundamentalAnalysis) -> Value {
    let components: Vec<Value> = a
        .q_plus_components
        .iter()
        .map(|(vs, class)| json!({"vertices": names(pair, vs.iter().copied()), "class": class}))
        .collect();
    let deltas: Vec<Value> = a
        .delta_subgraphs
        .iter()
        .map(|d| json!({"vertices": names(pair, d.vertices.iter().copied()), "class": d.class, "mu": d.mu}))
        .collect();
    let failed: Vec<Value> = lemma_checks_for(pair, a)
        .into_iter()
        .filter(|c| !c.holds)
        .map(|c| json!({"check": c.name, "detail": c.detail}))
        .collect();
    json!({
        "q_minus": names(pair, a.q_minus.iter().copied()),
        "q_plus_components": components,
        "tied": names(pair, a.tied.iter().copied()),
        "free": names(pair, a.free.iter().copied()),
        "delta_subgraphs": deltas,
        "kappa": a.kappa,
        "mu": a.mu,
        "failed_checks": failed,
    })
}

fn classify(file: &PairFile, format: Format) -> Outcome {
    let pair = &file.pair;
    let q = pair.quiver();
    let n = q.vertex_count();
    let class = match classify_graph(q) {
        Ok(c) => Value::String(c.to_string()),
        Err(QuiverError::Disconnected) => Value::Null,
        Err(e) => return Err(e.into()),
    };
    let cartan: Vec<i64> = (0..n).map(|v| cartan_with_unit(pair, v)).collect();
    let analysis = analyze_fundamental(pair).ok().map(|a| analysis_json(pair, &a));
    let value = json!({
        "graph_class": class,
        "in_fundamental_set": in_fundamental_set(pair),
        "tits": pair_tits(pair)?,
        "expected_dimension": expected_dimension(pair)?,
        "root_type": root_type(pair)?,
        "connected": q.is_connected(),
        "sincere": pair.is_sincere(),
        "cartan_values": vertex_map(q, &cartan),
        "large_vertices": names(pair, (0..n).filter(|&v| is_large(pair, v))),
        "small_sources": names(pair, (0..n).filter(|&v| is_small_source(pair, v))),
        "small_sinks": names(pair, (0..n).filter(|&v| is_small_sink(pair, v))),
        "constant_a4": find_constant_a4(pair).map(|quad| names(pair, quad)),
        "fundamental_analysis": analysis,
    });
    Ok((if format == Format::Text { text_lines(&value) } else { pretty(&value) }, 0))
}

/// One `key: value` line per top-level field.
fn text_lines(v: &Value) -> String {
    let mut s = String::new();
    if let Value::Object(map) = v {
        for (k, x) in map {
            match x {
                Value::String(t) => s.push_str(&format!("{k}: {t}\n")),
                other => s.push_str(&format!("{k}: {other}\n")),
            }
        }
    }
    s
}

fn check_op_syntax(op: &str) -> Result<(), Failure> {
    match op.split_once(':') {
        Some(("tau" | "sigma", v)) if !v.is_empty() => Ok(()),
        _ => Err(Failure::Usage(format!("expected `tau:<vertex>` or `sigma:<vertex>`, got `{op}`"))),
    }
}

fn reduce(file: &PairFile, ops: &[String], format: Format) -> Outcome {
    for op in ops {
        check_op_syntax(op)?;
    }
    let mut pair = file.pair.clone();
    let mut theta = file.theta.clone();
    if let Some(t) = &theta {
        pair.check_weight(t)?;
    }
    for op in ops {
        let mv = parse_move(&pair, op)?;
        let r = apply_move(&pair, mv, theta.as_ref())?;
        pair = r.pair;
        theta = r.weight;
    }
    Ok(match format {
        Format::Dot => (emit_dot(&pair, theta.as_ref()), 0),
        _ => (pair_to_json(&pair, theta.as_ref()) + "\n", 0),
    })
}

fn parse_theta(pair: &QuiverPair, s: &str) -> Result<Weight, Failure> {
    let q = pair.quiver();
    let bad = |m: String| Failure::Usage(format!("--theta: {m}"));
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let mut values = vec![None; q.vertex_count()];
    if parts.iter().all(|p| p.contains('=')) {
        for p in parts {
            let (name, x) = p.split_once('=').expect("checked");
            let v = q.index_of(name).map_err(|e| bad(e.to_string()))?;
            values[v] = Some(x.parse::<i64>().map_err(|_| bad(format!("bad value `{x}`")))?);
        }
    } else {
        if parts.len() != values.len() {
            return Err(bad(format!("{} values for {} vertices", parts.len(), values.len())));
        }
        for (slot, x) in values.iter_mut().zip(parts) {
            *slot = Some(x.parse::<i64>().map_err(|_| bad(format!("bad value `{x}`")))?);
        }
    }
    values
        .into_iter()
        .enumerate()
        .map(|(v, x)| x.ok_or_else(|| bad(format!("no value for vertex `{}`", q.name(v)))))
        .collect::<Result<Vec<_>, _>>()
        .map(Weight)
}

fn stable(file: &PairFile, theta: Option<&str>, force: bool, format: Format) -> Outcome {
    let pair = &file.pair;
    let theta = match theta {
        Some(s) => parse_theta(pair, s)?,
        None => file.theta.clone().unwrap_or_else(|| canonical_weight(pair)),
    };
    let oracle = EmbeddingOracle::new(pair.quiver());
    let verdict = stability_verdict_with(&oracle, pair, &theta, force)?;
    let mut value = json!({"verdict": verdict.tag});
    if let Some(w) = &verdict.witness {
        value["witness"] = json!(vertex_map(pair.quiver(), &w.0));
    }
    if verdict.is_stable() {
        value["moduli_dimension"] = json!(moduli_dimension_for(pair, &verdict)?);
    }
    Ok((if format == Format::Text { text_lines(&value) } else { pretty(&value) }, 0))
}

fn minimal(
    file: &PairFile,
    class: &ClassPredicate,
    max_depth: Option<usize>,
    max_total_dim: Option<u64>,
    format: Format,
) -> Outcome {
    let pair = &file.pair;
    let depth = max_depth.unwrap_or(DEFAULT_MAX_DEPTH);
    let cap = max_total_dim.unwrap_or_else(|| default_max_total_dim(pair));
    let report = is_tau_sigma_minimal(pair, class, depth, cap)?;
    let value = serde_json::to_value(&report).expect("reports serialize");
    Ok((if format == Format::Text { text_lines(&value) } else { pretty(&value) }, 0))
}

fn row_json(row: &ClassificationRow) -> Value {
    json!({
        "canonical_key": row.canonical_key.to_base64(),
        "pair": PairRecord::from_pair(&row.pair, None),
        "d": row.d,
        "minimal_verdict": row.minimal_verdict,
        "analysis": row.analysis,
    })
}

fn enumerate_rows(d: i64, limits: &EnumerationLimits, options: &SearchOptions, format: Format) -> Result<String, Failure> {
    let rows = enumerate_fundamental_with(d, limits, options)?;
    if format == Format::Json {
        return Ok(pretty(&Value::Array(rows.iter().map(row_json).collect())));
    }
    let mut buf = Vec::new();
    write_rows_csv(&rows, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

fn enumerate_affine_rows(d: i64, limits: Option<&EnumerationLimits>, force: bool, format: Format) -> Result<String, Failure> {
    let rows = enumerate_affine(d, limits, force)?;
    if format == Format::Json {
        let values = rows
            .iter()
            .map(|r| json!({"canonical_key": r.canonical_key.to_base64(), "pair": PairRecord::from_pair(&r.pair, None), "d": r.d}))
            .collect();
        return Ok(pretty(&Value::Array(values)));
    }
    let mut buf = Vec::new();
    write_affine_csv(&rows, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

fn verify(path: &Path, format: Format) -> Outcome {
    let file = std::fs::File::open(path).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))?;
    let entries = read_rows_csv(std::io::BufReader::new(file))?;
    let report = verify_entries(&entries);
    let code = if report.passed() { 0 } else { 1 };
    let text = match format {
        Format::Text => report_text(&report),
        _ => {
            let mut v = serde_json::to_value(&report).expect("reports serialize");
            v["passed"] = json!(report.passed());
            pretty(&v)
        }
    };
    Ok((text, code))
}

fn report_text(r: &BoundsReport) -> String {
    let mut s = format!(
        "{}: {} rows, {} minimal, {} checks, {} violations\n",
        if r.passed() { "PASS" } else { "FAIL" },
        r.rows,
        r.minimal_rows,
        r.checks,
        r.violations.len()
    );
    for v in &r.violations {
        s.push_str(&format!("  {} {}: {} ({})\n", v.check, v.detail, v.pair, v.canonical_key));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn force_flag_and_environment() {
        let parse = |args: &[&str]| Cli::try_parse_from(args).unwrap().force;
        std::env::remove_var("QUIVERMOD_FORCE");
        assert!(!parse(&["quivermod", "classify", "x.json"]));
        assert!(parse(&["quivermod", "--force", "classify", "x.json"]));
        assert!(parse(&["quivermod", "classify", "x.json", "--force"]));
        std::env::set_var("QUIVERMOD_FORCE", "1");
        assert!(parse(&["quivermod", "classify", "x.json"]));
        std::env::set_var("QUIVERMOD_FORCE", "0");
        assert!(!parse(&["quivermod", "classify", "x.json"]));
        std::env::remove_var("QUIVERMOD_FORCE");
    }

    #[test]
    fn theta_forms() {
        let f = quivermod_core::io::parse_pair_json(
            r#"{"vertices":["a","b"],"arrows":[{"id":"x","source":"a","target":"b"}],"alpha":{"a":1,"b":1}}"#,
        )
        .unwrap();
        assert_eq!(parse_theta(&f.pair, "-1,1").ok(), Some(Weight(vec![-1, 1])));
        assert_eq!(parse_theta(&f.pair, "b=1, a=-1").ok(), Some(Weight(vec![-1, 1])));
        assert!(parse_theta(&f.pair, "1").is_err());
        assert!(parse_theta(&f.pair, "a=1").is_err());
        assert!(parse_theta(&f.pair, "c=1,a=1").is_err());
        assert!(parse_theta(&f.pair, "x,1").is_err());
    }
}
