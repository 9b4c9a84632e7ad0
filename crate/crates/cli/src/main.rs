//! `mimick`: generate networks, compress them, verify, run experiments and
//! build terminal-cut tables.
//!
//! Exit codes: 0 on success, 1 when a verification or experiment claim
//! fails, 2 on usage, parse or input errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use mimick_core::format::{format_rational, parse_graph, write_embedding, write_graph, write_sidecar, GraphFile};
use mimick_core::generate::{random_planar, star};
use mimick_core::incidence::PerturbScope;
use mimick_core::lowerbound::{
    gen_bipartite, gen_grid, perturbation_campaign, spot_check_indices, tc_collision_family, verify_bipartite_lemma,
    verify_bipartite_rank, verify_grid_lemma, verify_grid_rank,
};
use mimick_core::mimick::structural_bounds;
use mimick_core::tcscheme::{preprocess, TcStore};
use mimick_core::{
    build_by_contraction, build_by_signature, build_incidence, verify, verify_generalized, ClaimRecord,
    Error, MimickingResult, Report,
};

const REPORT_FORMAT: &str = "mimick-report/1";

#[derive(Parser)]
#[command(name = "mimick", version, about = "Mimicking networks and terminal cut experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated network in the graph file format.
    Gen {
        #[command(subcommand)]
        family: GenFamily,
    },
    /// Build a mimicking network and check it before writing.
    Compress {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Contract)]
        method: Method,
        #[arg(short, long)]
        output: PathBuf,
        /// Contraction sidecar; defaults to `<output>.map`.
        #[arg(long)]
        map: Option<PathBuf>,
    },
    /// Compare every terminal cut value of two networks.
    Verify {
        original: PathBuf,
        candidate: PathBuf,
        /// Also compare every disjoint (S, T) pair of terminal sets.
        #[arg(long)]
        generalized: bool,
        #[command(flatten)]
        out: ReportArgs,
    },
    /// Run one of the lower-bound or structural experiments.
    Experiment {
        #[command(subcommand)]
        name: Experiment,
    },
    /// Terminal-cut table: build from a network, query from the table alone.
    Tc {
        #[command(subcommand)]
        action: TcAction,
    },
    /// Export the cutset-edge incidence matrix and cut values.
    Incidence {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GenFamily {
    Bipartite {
        #[arg(long)]
        k: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    Grid {
        #[arg(long)]
        k: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    Star {
        #[arg(long)]
        k: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    RandomPlanar {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Contract,
    Signature,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Bipartite,
    Grid,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scope {
    All,
    Unique,
}

#[derive(Args)]
struct ReportArgs {
    /// Emit one JSON object per claim instead of text.
    #[arg(long)]
    jsonl: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Experiment {
    BipartiteLemma {
        #[arg(long)]
        k: usize,
        /// Check this many sampled subsets instead of all of them.
        #[arg(long, requires = "seed")]
        spot: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        out: ReportArgs,
    },
    GridLemma {
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        out: ReportArgs,
    },
    Rank {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        out: ReportArgs,
    },
    Bounds {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        out: ReportArgs,
    },
    TcCollision {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        out: ReportArgs,
    },
    /// Check that sampled perturbations leave the incidence matrix unchanged.
    Perturb {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Scope::Unique)]
        scope: Scope,
        /// Seeds `seed .. seed + count` are sampled.
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        count: u64,
        #[command(flatten)]
        out: ReportArgs,
    },
}

#[derive(Subcommand)]
enum TcAction {
    Build {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    Query {
        store: PathBuf,
        /// Terminals on one side, as `q1,q3` (1-based); either side works.
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<std::io::Error>().is_some() {
        return 2;
    }
    match err.downcast_ref::<Error>() {
        Some(
            Error::Parse { .. }
            | Error::InvalidParameter(_)
            | Error::InvalidQuery(_)
            | Error::InvalidNetwork(_)
            | Error::InvalidPair(_)
            | Error::InvalidTerminalCount(_)
            | Error::InvalidEdge(_)
            | Error::InvalidEmbedding(_)
            | Error::MalformedStore(_)
            | Error::TerminalCollision { .. }
            | Error::OracleCapacityExceeded { .. },
        ) => 2,
        _ => 1,
    }
}

fn read_graph(path: &Path) -> anyhow::Result<GraphFile> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_graph(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit(output: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(command: Command) -> anyhow::Result<bool> {
    match command {
        Command::Gen { family } => gen(family).map(|()| true),
        Command::Compress {
            input,
            method,
            output,
            map,
        } => compress(&input, method, &output, map),
        Command::Verify {
            original,
            candidate,
            generalized,
            out,
        } => {
            let orig = read_graph(&original)?.network;
            let cand = read_graph(&candidate)?.network;
            let result = if generalized { verify_generalized(&orig, &cand)? } else { verify(&orig, &cand)? };
            let mut report = Report::new();
            let instance = candidate.display().to_string();
            for row in &result.rows {
                let s: Vec<String> = row.bipartition.s_side().iter().map(|i| format!("q{}", i + 1)).collect();
                report.push(ClaimRecord::equal(
                    format!("cut value for S = {{{}}}", s.join(",")),
                    &instance,
                    format_rational(&row.original),
                    format_rational(&row.candidate),
                ));
            }
            for pair in result.generalized.iter().flatten() {
                report.push(ClaimRecord::new(
                    format!("cut value for {}", pair_label(&pair.sources, &pair.sinks)),
                    &instance,
                    format_rational(&pair.original),
                    format_rational(&pair.candidate),
                    pair.equal(),
                ));
            }
            let params = json!({ "original": original, "candidate": candidate, "generalized": generalized });
            finish(&out, "verify", params, &report)
        }
        Command::Experiment { name } => experiment(name),
        Command::Tc { action } => tc(action),
        Command::Incidence { input, output } => {
            let net = read_graph(&input)?.network;
            emit(output.as_deref(), &build_incidence(&net)?.to_text())?;
            Ok(true)
        }
    }
}

fn pair_label(sources: &[usize], sinks: &[usize]) -> String {
    let names = |v: &[usize]| v.iter().map(|i| format!("q{}", i + 1)).collect::<Vec<_>>().join(",");
    format!("S = {{{}}}, T = {{{}}}", names(sources), names(sinks))
}

fn gen(family: GenFamily) -> anyhow::Result<()> {
    let (comment, text, output) = match family {
        GenFamily::Bipartite { k, output } => {
            let fam = gen_bipartite(k)?;
            (format!("bipartite k={k}"), write_graph(&fam.network, None), output)
        }
        GenFamily::Grid { k, output } => {
            let fam = gen_grid(k)?;
            (format!("grid k={k}"), write_embedding(&fam.embedding()?), output)
        }
        GenFamily::Star { k, output } => (format!("star k={k}"), write_embedding(&star(k)?.embedding), output),
        GenFamily::RandomPlanar { n, k, seed, output } => {
            let inst = random_planar(n, k, seed)?;
            (format!("random-planar n={n} k={k} seed={seed}"), write_embedding(&inst.embedding), output)
        }
    };
    emit(output.as_deref(), &format!("c {REPORT_FORMAT} gen {comment}\n{text}"))
}

fn compress(input: &Path, method: Method, output: &Path, map_path: Option<PathBuf>) -> anyhow::Result<bool> {
    let net = read_graph(input)?.network;
    let built: MimickingResult = match method {
        Method::Contract => build_by_contraction(&net)?,
        Method::Signature => build_by_signature(&net)?,
    };
    let check = verify(&net, &built.network)?;
    let s = &built.stats;
    println!(
        "vertices {} -> {}, edges {} -> {}, cut union {} edges, verified {} bipartitions: {}",
        s.input_vertices,
        s.vertices,
        s.input_edges,
        s.edges,
        s.cut_union_size,
        check.rows.len(),
        if check.all_equal { "PASS" } else { "FAIL" }
    );
    if !check.all_equal {
        return Ok(false);
    }
    let map_path = map_path.unwrap_or_else(|| {
        let mut name = output.as_os_str().to_owned();
        name.push(".map");
        PathBuf::from(name)
    });
    let sidecar = write_sidecar(&built.map);
    emit(Some(output), &write_graph(&built.network, None))?;
    emit(Some(&map_path), &sidecar)?;
    Ok(true)
}

fn experiment(name: Experiment) -> anyhow::Result<bool> {
    match name {
        Experiment::BipartiteLemma { k, spot, seed, out } => {
            let fam = gen_bipartite(k)?;
            let indices = match (spot, seed) {
                (Some(count), Some(seed)) => spot_check_indices(&fam, count, seed),
                _ => (0..fam.l).collect(),
            };
            let report = verify_bipartite_lemma(&fam, &indices)?;
            finish(&out, "bipartite-lemma", json!({ "k": k, "spot": spot, "seed": seed }), &report)
        }
        Experiment::GridLemma { k, out } => {
            let report = verify_grid_lemma(&gen_grid(k)?)?;
            finish(&out, "grid-lemma", json!({ "k": k }), &report)
        }
        Experiment::Rank { family, k, out } => {
            let report = match family {
                Family::Bipartite => verify_bipartite_rank(&gen_bipartite(k)?)?,
                Family::Grid => verify_grid_rank(&gen_grid(k)?)?,
            };
            finish(&out, "rank", json!({ "family": family_name(family), "k": k }), &report)
        }
        Experiment::Bounds {
            input,
            samples,
            seed,
            out,
        } => {
            let file = read_graph(&input)?;
            let Some(emb) = file.embedding()? else {
                bail!(Error::InvalidParameter(format!("{} has no rotation lines", input.display())));
            };
            let report = structural_bounds(&emb, samples, seed, &input.display().to_string())?;
            finish(&out, "bounds", json!({ "input": input, "samples": samples, "seed": seed }), &report)
        }
        Experiment::TcCollision { k, samples, seed, out } => {
            let report = tc_collision_family(&gen_bipartite(k)?, samples, seed)?;
            finish(&out, "tc-collision", json!({ "k": k, "samples": samples, "seed": seed }), &report)
        }
        Experiment::Perturb {
            family,
            k,
            scope,
            seed,
            count,
            out,
        } => {
            let net = match family {
                Family::Bipartite => gen_bipartite(k)?.network,
                Family::Grid => gen_grid(k)?.network,
            };
            let scope_value = match scope {
                Scope::All => PerturbScope::AllRows,
                Scope::Unique => PerturbScope::UniqueRows,
            };
            let seeds: Vec<u64> = (seed..seed + count).collect();
            let instance = format!("{} k={k}", family_name(family));
            let report = perturbation_campaign(&net, &instance, &seeds, scope_value)?;
            let scope_name = match scope {
                Scope::All => "all",
                Scope::Unique => "unique",
            };
            let params = json!({ "family": family_name(family), "k": k, "scope": scope_name, "seed": seed, "count": count });
            finish(&out, "perturb", params, &report)
        }
    }
}

fn family_name(family: Family) -> &'static str {
    match family {
        Family::Bipartite => "bipartite",
        Family::Grid => "grid",
    }
}

/// Writes the report with a header naming the format, command and
/// parameters, followed by a summary. Returns whether every claim passed.
fn finish(out: &ReportArgs, command: &str, params: serde_json::Value, report: &Report) -> anyhow::Result<bool> {
    let failed = report.failures().count();
    let text = if out.jsonl {
        let header = json!({ "format": REPORT_FORMAT, "command": command, "params": params });
        let summary = json!({ "summary": { "claims": report.records.len(), "failed": failed } });
        format!("{header}\n{}{summary}\n", report.to_jsonl())
    } else {
        format!(
            "# {REPORT_FORMAT} {command} {params}\n{}# {} claims, {failed} failed: {}\n",
            report.to_text(),
            report.records.len(),
            if failed == 0 { "PASS" } else { "FAIL" }
        )
    };
    emit(out.output.as_deref(), &text)?;
    Ok(failed == 0)
}

fn tc(action: TcAction) -> anyhow::Result<bool> {
    match action {
        TcAction::Build { input, output } => {
            let store = preprocess(&read_graph(&input)?.network)?;
            let r = store.storage_report();
            fs::write(&output, store.to_bytes()).with_context(|| format!("writing {}", output.display()))?;
            println!(
                "k = {}, {} words of {} bits ({} bits), bound 2^k = {}: {}",
                store.k(),
                r.words,
                r.word_bits,
                r.bits,
                r.bound,
                if r.within_bound() { "PASS" } else { "FAIL" }
            );
            Ok(r.within_bound())
        }
        TcAction::Query { store, set } => {
            let bytes = fs::read(&store).with_context(|| format!("reading {}", store.display()))?;
            let table = TcStore::from_bytes(&bytes)?;
            let subset = set.iter().map(|name| terminal_index(name)).collect::<anyhow::Result<Vec<_>>>()?;
            println!("{}", format_rational(&table.query(&subset)?));
            Ok(true)
        }
    }
}

fn terminal_index(name: &str) -> anyhow::Result<usize> {
    name.trim()
        .strip_prefix('q')
        .and_then(|n| n.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .map(|n| n - 1)
        .ok_or_else(|| Error::InvalidQuery(format!("`{name}` is not a terminal name like q1")).into())
}
