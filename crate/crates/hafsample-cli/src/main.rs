//! Command-line interface: hafnian, encode, dist, sample, densest, clique
//! and instance generation, all seeded and deterministic. Identical argv
//! reproduces identical output bytes at any `--threads` setting.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use hafsample::encoding::{self, build_edge_model};
use hafsample::graph::{Graph, GraphFormat, VertexWeights};
use hafsample::heuristics::{
    clique_experiment, densest_experiment, planted_clique_instance, CliqueConfig, DensestConfig,
};
use hafsample::rng::{self, StreamTag};
use hafsample::samplers::{
    exact_distribution, ips_sample, max_probability_ratios, qi_sample, sample_from_table,
    uniform_sample, SamplerKind, DEFAULT_ENUM_BUDGET, DEFAULT_MAX_ATTEMPTS,
};
use hafsample::{Error, SymMatrix};

mod output;
use output::{write_output, RunManifest};

#[derive(Parser)]
#[command(
    name = "hafsample",
    version,
    about = "Hafnian-proportional subgraph samplers, exact reference distributions and graph-search experiments"
)]
struct Cli {
    /// Worker threads for enumeration and experiments (results are
    /// thread-count independent).
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    /// Enumeration budget in hafnian-product units.
    #[arg(long, global = true, default_value_t = DEFAULT_ENUM_BUDGET)]
    max_enum: u64,

    /// Rejection-sampling attempt cap.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_ATTEMPTS)]
    max_attempts: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    /// By extension: `.csv` is matrix-csv, anything else edge-list.
    Auto,
    EdgeList,
    MatrixCsv,
}

impl FormatArg {
    fn resolve(self, path: &Path) -> GraphFormat {
        match self {
            FormatArg::EdgeList => GraphFormat::EdgeList,
            FormatArg::MatrixCsv => GraphFormat::MatrixCsv,
            FormatArg::Auto => match path.extension().and_then(|e| e.to_str()) {
                Some("csv") => GraphFormat::MatrixCsv,
                _ => GraphFormat::EdgeList,
            },
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum KindArg {
    Gbs,
    Qi,
    Uniform,
}

impl From<KindArg> for SamplerKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Gbs => SamplerKind::Gbs,
            KindArg::Qi => SamplerKind::Qi,
            KindArg::Uniform => SamplerKind::Uniform,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum SamplerArg {
    Qi,
    Uniform,
    Gbs,
    Ips,
}

#[derive(Subcommand)]
enum Command {
    /// Print the hafnian of a symmetric matrix (CSV, no header).
    Hafnian {
        /// Symmetric matrix as CSV rows, no header.
        matrix: PathBuf,
    },

    /// Print a graph's compiled edge model as JSON; with --photons, also
    /// the squeezer calibration.
    Encode {
        /// Graph file (edge list or matrix CSV).
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = FormatArg::Auto)]
        format: FormatArg,
        /// Target mean photon number for squeezer calibration.
        #[arg(long)]
        photons: Option<f64>,
        /// Transmission rate in (0,1] for loss compensation (needs --photons).
        #[arg(long)]
        eta: Option<f64>,
        #[arg(long, default_value = "-")]
        out: String,
    },

    /// Exact distribution table over all k-subsets (CSV).
    Dist {
        /// Graph file (edge list or matrix CSV).
        graph: PathBuf,
        /// Subset size.
        #[arg(long)]
        k: usize,
        /// Which law to tabulate.
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long, value_enum, default_value_t = FormatArg::Auto)]
        format: FormatArg,
        #[arg(long, default_value = "-")]
        out: String,
    },

    /// Largest-probability ratio report for one sector (JSON).
    Ratios {
        /// Graph file (edge list or matrix CSV).
        graph: PathBuf,
        /// Sector size.
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = FormatArg::Auto)]
        format: FormatArg,
        #[arg(long, default_value = "-")]
        out: String,
    },

    /// Draw subsets (occupancy vectors for ips) into a CSV.
    Sample {
        /// Graph file (edge list or matrix CSV).
        graph: PathBuf,
        /// Sampling law.
        #[arg(long, value_enum)]
        sampler: SamplerArg,
        /// Subset size; required for qi|uniform|gbs, ignored by ips.
        #[arg(long)]
        k: Option<usize>,
        /// Number of draws.
        #[arg(long, default_value_t = 1000)]
        count: usize,
        /// Root seed; draw i uses derived stream (seed, i).
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = FormatArg::Auto)]
        format: FormatArg,
        #[arg(long, default_value = "-")]
        out: String,
    },

    /// Densest-k-subgraph experiment over seeded random graphs (CSV).
    Densest {
        /// Vertex count of each random graph.
        #[arg(long)]
        n: usize,
        /// Subgraph size.
        #[arg(long)]
        k: usize,
        /// Edge probability.
        #[arg(long)]
        p: f64,
        /// Number of random graphs.
        #[arg(long, default_value_t = 100)]
        graphs: usize,
        /// Samples per graph and sampler.
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Comma-separated subset of gbs,qi,uniform.
        #[arg(long, default_value = "qi,uniform,gbs")]
        samplers: String,
        /// Root seed for graph generation and sampling streams.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file, `-` for stdout.
        #[arg(long, default_value = "-")]
        out: String,
    },

    /// Maximum-weight-clique experiment (CSV).
    Clique {
        /// Graph file (edge list or matrix CSV).
        #[arg(long)]
        graph: PathBuf,
        /// Vertex weight file (one real per line); default weight 1.
        #[arg(long)]
        weights: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = FormatArg::Auto)]
        format: FormatArg,
        /// Weighting strength in Ω_ii = 1 + alpha·w_i.
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        /// Independent local-search runs per sampler.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// Comma-separated iteration budgets, strictly increasing.
        #[arg(long, default_value = "0,2,8")]
        iters: String,
        #[arg(long, default_value = "qi,uniform,gbs")]
        samplers: String,
        /// Root seed for all run streams.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Sampled seed-subset size (default: even size nearest the optimum
        /// clique size).
        #[arg(long)]
        k: Option<usize>,
        /// Known optimum weight; skips the exhaustive search and requires --k.
        #[arg(long)]
        optimum_weight: Option<f64>,
        #[arg(long, default_value = "-")]
        out: String,
    },

    /// Generate instance files.
    Gen {
        #[command(subcommand)]
        what: GenCommand,
    },
}

#[derive(Subcommand)]
enum GenCommand {
    /// Erdős–Rényi edge list.
    Er {
        /// Vertex count.
        #[arg(long)]
        n: usize,
        /// Edge probability.
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Planted-clique instance: edge list plus weight file.
    Planted {
        /// Vertex count.
        #[arg(long)]
        n: usize,
        /// Background edge probability.
        #[arg(long)]
        p: f64,
        /// Planted clique size (on the highest-weight vertices).
        #[arg(long)]
        clique: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Edge-list destination.
        #[arg(long)]
        out_graph: PathBuf,
        /// Weight-file destination.
        #[arg(long)]
        out_weights: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.max(1))
        .build_global()
        .expect("global thread pool is built once");

    match run(cli) {
        Ok(()) => {
            eprintln!("duration_ms: {}", started.elapsed().as_millis());
            ExitCode::SUCCESS
        }
        Err(e) => {
            // every Error displays as "<kind>: <detail>"
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn parse_list<T: FromStr>(text: &str, what: &str) -> Result<Vec<T>, Error>
where
    T::Err: std::fmt::Display,
{
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<T>()
                .map_err(|e| Error::InvalidConfig(format!("bad {what} entry {t:?}: {e}")))
        })
        .collect()
}

fn run(cli: Cli) -> Result<(), Error> {
    let budget = cli.max_enum;
    let max_attempts = cli.max_attempts;
    match cli.command {
        Command::Hafnian { matrix } => {
            let m = SymMatrix::parse_csv(&std::fs::read_to_string(matrix)?)?;
            let value = hafsample::hafnian::hafnian(&m)?;
            println!("{value}");
            Ok(())
        }
        Command::Encode {
            graph,
            format,
            photons,
            eta,
            out,
        } => cmd_encode(&graph, format, photons, eta, &out),
        Command::Dist {
            graph,
            k,
            kind,
            format,
            out,
        } => cmd_dist(&graph, k, kind, format, &out, budget),
        Command::Ratios {
            graph,
            k,
            format,
            out,
        } => cmd_ratios(&graph, k, format, &out, budget),
        Command::Sample {
            graph,
            sampler,
            k,
            count,
            seed,
            format,
            out,
        } => cmd_sample(
            &graph,
            sampler,
            k,
            count,
            seed,
            format,
            &out,
            budget,
            max_attempts,
        ),
        Command::Densest {
            n,
            k,
            p,
            graphs,
            samples,
            samplers,
            seed,
            out,
        } => cmd_densest(
            n,
            k,
            p,
            graphs,
            samples,
            &samplers,
            seed,
            &out,
            budget,
            max_attempts,
        ),
        Command::Clique {
            graph,
            weights,
            format,
            alpha,
            samples,
            iters,
            samplers,
            seed,
            k,
            optimum_weight,
            out,
        } => cmd_clique(
            &graph,
            weights.as_deref(),
            format,
            alpha,
            samples,
            &iters,
            &samplers,
            seed,
            k,
            optimum_weight,
            &out,
            budget,
            max_attempts,
        ),
        Command::Gen { what } => match what {
            GenCommand::Er { n, p, seed, out } => cmd_gen_er(n, p, seed, &out),
            GenCommand::Planted {
                n,
                p,
                clique,
                seed,
                out_graph,
                out_weights,
            } => cmd_gen_planted(n, p, clique, seed, &out_graph, &out_weights),
        },
    }
}

fn load_graph(path: &Path, format: FormatArg) -> Result<Graph, Error> {
    Graph::load(path, format.resolve(path))
}

#[derive(Serialize)]
struct EncodeConfig {
    graph: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    photons: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    eta: Option<f64>,
}

fn cmd_encode(
    graph: &Path,
    format: FormatArg,
    photons: Option<f64>,
    eta: Option<f64>,
    out: &str,
) -> Result<(), Error> {
    if eta.is_some() && photons.is_none() {
        return Err(Error::InvalidConfig("--eta requires --photons".into()));
    }
    let g = load_graph(graph, format)?;
    let model = build_edge_model(&g)?;

    #[derive(Serialize)]
    struct Squeeze {
        #[serde(flatten)]
        spec: encoding::SqueezeSpec,
        #[serde(skip_serializing_if = "Option::is_none")]
        eta: Option<f64>,
        /// Squeezers raised to compensate the transmission eta.
        #[serde(skip_serializing_if = "Option::is_none")]
        compensated: Option<Vec<f64>>,
    }

    let squeeze = match photons {
        None => None,
        Some(k) => {
            let singvals = encoding::takagi_singular_values(&g.to_sym_matrix());
            let spec = encoding::calibrate_scale(&singvals, k)?;
            let compensated = eta
                .map(|eta| {
                    spec.squeezers
                        .iter()
                        .map(|&r| encoding::loss_compensate(r, eta))
                        .collect::<Result<Vec<f64>, Error>>()
                })
                .transpose()?;
            Some(Squeeze {
                spec,
                eta,
                compensated,
            })
        }
    };

    #[derive(Serialize)]
    struct Report<C: Serialize> {
        config: RunManifest<C>,
        edge_model: encoding::EdgeModel,
        #[serde(skip_serializing_if = "Option::is_none")]
        squeeze: Option<Squeeze>,
    }

    let report = Report {
        config: RunManifest::new(
            "encode",
            None,
            EncodeConfig {
                graph: graph.display().to_string(),
                photons,
                eta,
            },
        ),
        edge_model: model,
        squeeze,
    };
    let json = serde_json::to_value(&report).expect("report serializes");
    write_output(
        out,
        &format!(
            "{}\n",
            serde_json::to_string_pretty(&json).expect("valid json")
        ),
    )?;
    Ok(())
}

#[derive(Serialize)]
struct DistConfig {
    graph: String,
    k: usize,
    kind: KindArg,
}

fn cmd_dist(
    graph: &Path,
    k: usize,
    kind: KindArg,
    format: FormatArg,
    out: &str,
    budget: u64,
) -> Result<(), Error> {
    let g = load_graph(graph, format)?;
    let table = exact_distribution(&g, k, kind.into(), budget)?;
    let manifest = RunManifest::new(
        "dist",
        None,
        DistConfig {
            graph: graph.display().to_string(),
            k,
            kind,
        },
    );
    let mut csv = manifest.comment_line();
    csv.push_str(&format!("# z: {}\n", table.z()));
    csv.push_str("vertices,weight,probability\n");
    for ((s, p), w) in table.entries().iter().zip(table.weights()) {
        writeln!(csv, "{s},{w},{p}").expect("string writes are infallible");
    }
    write_output(out, &csv)?;
    Ok(())
}

#[derive(Serialize)]
struct RatiosConfig {
    graph: String,
    k: usize,
}

fn cmd_ratios(
    graph: &Path,
    k: usize,
    format: FormatArg,
    out: &str,
    budget: u64,
) -> Result<(), Error> {
    let g = load_graph(graph, format)?;
    let report = max_probability_ratios(&g, k, budget)?;

    #[derive(Serialize)]
    struct Report<C: Serialize> {
        config: RunManifest<C>,
        #[serde(flatten)]
        ratios: hafsample::samplers::RatioReport,
    }
    let wrapped = Report {
        config: RunManifest::new(
            "ratios",
            None,
            RatiosConfig {
                graph: graph.display().to_string(),
                k,
            },
        ),
        ratios: report,
    };
    let json = serde_json::to_value(&wrapped).expect("report serializes");
    write_output(
        out,
        &format!(
            "{}\n",
            serde_json::to_string_pretty(&json).expect("valid json")
        ),
    )?;
    Ok(())
}

#[derive(Serialize)]
struct SampleConfig {
    graph: String,
    sampler: SamplerArg,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
    count: usize,
}

#[allow(clippy::too_many_arguments)]
fn cmd_sample(
    graph: &Path,
    sampler: SamplerArg,
    k: Option<usize>,
    count: usize,
    seed: u64,
    format: FormatArg,
    out: &str,
    budget: u64,
    max_attempts: u64,
) -> Result<(), Error> {
    let g = load_graph(graph, format)?;
    let need_k =
        || k.ok_or_else(|| Error::InvalidConfig("--k is required for this sampler".into()));

    let manifest = RunManifest::new(
        "sample",
        Some(seed),
        SampleConfig {
            graph: graph.display().to_string(),
            sampler,
            k,
            count,
        },
    );
    let mut csv = manifest.comment_line();

    match sampler {
        SamplerArg::Ips => {
            csv.push_str("sample,counts\n");
            for i in 0..count {
                let mut rng = rng::stream(seed, StreamTag::Sample, i as u64);
                let o = ips_sample(&g, &mut rng);
                writeln!(csv, "{i},{o}").expect("string writes are infallible");
            }
        }
        SamplerArg::Qi => {
            let k = need_k()?;
            if k % 2 == 1 {
                return Err(Error::OddSector { k });
            }
            let model = build_edge_model(&g)?;
            csv.push_str("sample,vertices\n");
            for i in 0..count {
                let mut rng = rng::stream(seed, StreamTag::Sample, i as u64);
                let s = qi_sample(&model, k / 2, max_attempts, &mut rng)?;
                writeln!(csv, "{i},{s}").expect("string writes are infallible");
            }
        }
        SamplerArg::Uniform => {
            let k = need_k()?;
            csv.push_str("sample,vertices\n");
            for i in 0..count {
                let mut rng = rng::stream(seed, StreamTag::Sample, i as u64);
                let s = uniform_sample(g.n(), k, &mut rng)?;
                writeln!(csv, "{i},{s}").expect("string writes are infallible");
            }
        }
        SamplerArg::Gbs => {
            let k = need_k()?;
            let table = exact_distribution(&g, k, SamplerKind::Gbs, budget)?;
            csv.push_str("sample,vertices\n");
            for i in 0..count {
                let mut rng = rng::stream(seed, StreamTag::Sample, i as u64);
                let s = sample_from_table(&table, &mut rng);
                writeln!(csv, "{i},{s}").expect("string writes are infallible");
            }
        }
    }
    write_output(out, &csv)?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_densest(
    n: usize,
    k: usize,
    p: f64,
    graphs: usize,
    samples: usize,
    samplers: &str,
    seed: u64,
    out: &str,
    budget: u64,
    max_attempts: u64,
) -> Result<(), Error> {
    let samplers: Vec<SamplerKind> = parse_list(samplers, "sampler")?;
    let cfg = DensestConfig {
        n,
        p,
        k,
        graphs,
        samples_per_graph: samples,
        samplers,
        seed,
    };
    let report = densest_experiment(&cfg, budget, max_attempts)?;

    let manifest = RunManifest::new("densest", Some(seed), &cfg);
    let mut csv = manifest.comment_line();
    for (sampler, reason) in &report.skipped {
        eprintln!("warning: skipping {sampler}: {reason}");
        writeln!(csv, "# skipped: {sampler}: {reason}").expect("string writes are infallible");
    }
    csv.push_str("sampler,metric,index,value\n");
    for s in &report.stats {
        writeln!(csv, "{},mean_density,,{}", s.sampler, s.mean_density)
            .expect("string writes are infallible");
        writeln!(csv, "{},density_std,,{}", s.sampler, s.density_std)
            .expect("string writes are infallible");
        writeln!(csv, "{},max_density,,{}", s.sampler, s.max_density)
            .expect("string writes are infallible");
        writeln!(csv, "{},fallback_graphs,,{}", s.sampler, s.fallback_graphs)
            .expect("string writes are infallible");
        for (m, v) in s.running_max_mean.iter().enumerate() {
            writeln!(csv, "{},running_max_mean,{},{}", s.sampler, m + 1, v)
                .expect("string writes are infallible");
        }
    }
    write_output(out, &csv)?;
    Ok(())
}

#[derive(Serialize)]
struct CliqueCliConfig<'a> {
    graph: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    weights: Option<String>,
    #[serde(flatten)]
    cfg: &'a CliqueConfig,
}

#[allow(clippy::too_many_arguments)]
fn cmd_clique(
    graph: &Path,
    weights: Option<&Path>,
    format: FormatArg,
    alpha: f64,
    samples: usize,
    iters: &str,
    samplers: &str,
    seed: u64,
    k: Option<usize>,
    optimum_weight: Option<f64>,
    out: &str,
    budget: u64,
    max_attempts: u64,
) -> Result<(), Error> {
    let g = load_graph(graph, format)?;
    let w = match weights {
        Some(path) => VertexWeights::load(path)?,
        None => VertexWeights::ones(g.n()),
    };
    let cfg = CliqueConfig {
        alpha,
        samples,
        iterations: parse_list(iters, "iteration")?,
        samplers: parse_list(samplers, "sampler")?,
        seed,
        seed_size: k,
        optimum_weight,
    };
    let report = clique_experiment(&g, &w, &cfg, budget, max_attempts)?;

    let manifest = RunManifest::new(
        "clique",
        Some(seed),
        CliqueCliConfig {
            graph: graph.display().to_string(),
            weights: weights.map(|p| p.display().to_string()),
            cfg: &cfg,
        },
    );
    let mut csv = manifest.comment_line();
    csv.push_str("# iteration_unit: one perturb-then-expand cycle\n");
    writeln!(csv, "# optimum_weight: {}", report.optimum_weight)
        .expect("string writes are infallible");
    if let Some(opt) = &report.optimum {
        writeln!(csv, "# optimum: {opt}").expect("string writes are infallible");
    }
    writeln!(csv, "# seed_size: {}", report.seed_size).expect("string writes are infallible");
    csv.push_str("sampler,iterations,successes,runs,success_rate\n");
    for row in &report.rows {
        writeln!(
            csv,
            "{},{},{},{},{}",
            row.sampler, row.iterations, row.successes, row.runs, row.success_rate
        )
        .expect("string writes are infallible");
    }
    write_output(out, &csv)?;
    Ok(())
}

#[derive(Serialize)]
struct GenErConfig {
    n: usize,
    p: f64,
}

fn edge_list_text(g: &Graph, header: String) -> String {
    let mut text = header;
    for (i, j, w) in g.edges() {
        writeln!(text, "{i} {j} {w}").expect("string writes are infallible");
    }
    text
}

fn cmd_gen_er(n: usize, p: f64, seed: u64, out: &str) -> Result<(), Error> {
    let g = Graph::erdos_renyi(n, p, seed)?;
    let manifest = RunManifest::new("gen er", Some(seed), GenErConfig { n, p });
    write_output(out, &edge_list_text(&g, manifest.comment_line()))?;
    Ok(())
}

#[derive(Serialize)]
struct GenPlantedConfig {
    n: usize,
    p: f64,
    clique: usize,
}

fn cmd_gen_planted(
    n: usize,
    p: f64,
    clique: usize,
    seed: u64,
    out_graph: &Path,
    out_weights: &Path,
) -> Result<(), Error> {
    let (g, w) = planted_clique_instance(n, p, clique, seed)?;
    let manifest = RunManifest::new("gen planted", Some(seed), GenPlantedConfig { n, p, clique });
    let header = manifest.comment_line();

    std::fs::write(out_graph, edge_list_text(&g, header.clone()))?;

    let mut wtext = header;
    for &wi in w.as_slice() {
        writeln!(wtext, "{wi}").expect("string writes are infallible");
    }
    std::fs::write(out_weights, wtext)?;
    Ok(())
}
