//! Experiment harnesses: densest-k-subgraph statistics and maximum-weight
//! clique search over any of the samplers.
//!
//! The clique search is shrink/expand local search. Shrinking truncates a
//! sampled subset to a clique by repeatedly removing the vertex with the
//! most missing edges (ties: lowest weight, then uniform at random);
//! searching greedily adds the heaviest vertex adjacent to every member
//! until the clique is maximal. One iteration step is one perturb-then-
//! expand cycle: remove a uniformly random vertex, re-expand, keep the best
//! clique seen.
//!
//! Experiments parallelize over (graph, replicate) cells, each with its own
//! derived RNG stream, and aggregate in cell order — identical results at
//! any thread count.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::encoding::build_edge_model;
use crate::error::Error;
use crate::graph::{Graph, Subset, VertexWeights};
use crate::parallel::try_map_indexed;
use crate::rng::{self, StreamTag};
use crate::samplers::{
    exact_distribution, qi_sample, sample_from_table, uniform_sample, DistributionTable,
    SamplerKind,
};
use crate::util::pairwise_sum;
use crate::Result;

/// Largest vertex count for [`exhaustive_max_weight_clique`].
pub const EXHAUSTIVE_CAP: usize = 30;

/// Relative tolerance when comparing clique weights against the optimum.
const WEIGHT_EQ_TOL: f64 = 1e-9;

/// Truncates `s` to a clique: while some pair is missing, remove a vertex
/// with the maximum number of missing edges inside the current set, breaking
/// ties by lowest weight and then uniformly at random.
pub fn shrink_to_clique(g: &Graph, w: &VertexWeights, s: &Subset, rng: &mut rng::Rng) -> Subset {
    let mut current: Vec<usize> = s.vertices().to_vec();
    loop {
        let missing: Vec<usize> = current
            .iter()
            .map(|&v| {
                current
                    .iter()
                    .filter(|&&u| u != v && !g.has_edge(v, u))
                    .count()
            })
            .collect();
        let worst = match missing.iter().max() {
            Some(&m) if m > 0 => m,
            _ => break, // already a clique
        };
        let tied: Vec<usize> = (0..current.len())
            .filter(|&idx| missing[idx] == worst)
            .collect();
        let min_weight = tied
            .iter()
            .map(|&idx| w.get(current[idx]))
            .fold(f64::INFINITY, f64::min);
        let lightest: Vec<usize> = tied
            .into_iter()
            .filter(|&idx| w.get(current[idx]) == min_weight)
            .collect();
        let pick = lightest[rng.random_range(0..lightest.len())];
        current.remove(pick);
    }
    Subset::from_sorted(current).expect("removal preserves order")
}

/// Grows a clique to a maximal one: repeatedly add the highest-weight vertex
/// adjacent to all current members (ties uniform at random).
pub fn expand_clique(
    g: &Graph,
    w: &VertexWeights,
    c: &Subset,
    rng: &mut rng::Rng,
) -> Result<Subset> {
    if !g.is_clique(c) {
        return Err(Error::NotAClique);
    }
    let mut member = vec![false; g.n()];
    for &v in c.vertices() {
        member[v] = true;
    }
    let mut candidates: Vec<usize> = (0..g.n())
        .filter(|&v| !member[v] && c.vertices().iter().all(|&u| g.has_edge(v, u)))
        .collect();
    let mut current: Vec<usize> = c.vertices().to_vec();
    while !candidates.is_empty() {
        let max_weight = candidates
            .iter()
            .map(|&v| w.get(v))
            .fold(f64::NEG_INFINITY, f64::max);
        let heaviest: Vec<usize> = candidates
            .iter()
            .copied()
            .filter(|&v| w.get(v) == max_weight)
            .collect();
        let added = heaviest[rng.random_range(0..heaviest.len())];
        current.push(added);
        member[added] = true;
        candidates.retain(|&v| v != added && g.has_edge(v, added));
    }
    Subset::from_unsorted(current)
}

/// Shrink, expand, then `checkpoints.last()` perturb-and-expand iterations,
/// recording the best clique seen at each requested iteration count.
///
/// `checkpoints` must be strictly increasing; the returned vector is
/// aligned with it. Best-so-far is monotone along the trajectory, so later
/// checkpoints never report a lighter clique.
pub fn clique_local_search_traced(
    g: &Graph,
    w: &VertexWeights,
    s: &Subset,
    checkpoints: &[usize],
    rng: &mut rng::Rng,
) -> Result<Vec<(Subset, f64)>> {
    if !checkpoints.windows(2).all(|c| c[0] < c[1]) {
        return Err(Error::InvalidConfig(
            "iteration checkpoints must be strictly increasing".into(),
        ));
    }
    let Some(&t_max) = checkpoints.last() else {
        return Ok(Vec::new());
    };

    let shrunk = shrink_to_clique(g, w, s, rng);
    let mut current = expand_clique(g, w, &shrunk, rng).expect("shrink yields a clique");
    let mut best = current.clone();
    let mut best_weight = w.clique_weight(&best);

    let mut out = Vec::with_capacity(checkpoints.len());
    let mut next = 0;
    if checkpoints[next] == 0 {
        out.push((best.clone(), best_weight));
        next += 1;
    }
    for t in 1..=t_max {
        if current.len() > 1 {
            let mut verts = current.vertices().to_vec();
            verts.remove(rng.random_range(0..verts.len()));
            current = Subset::from_sorted(verts).expect("removal preserves order");
        }
        current = expand_clique(g, w, &current, rng).expect("subsets of cliques are cliques");
        let weight = w.clique_weight(&current);
        if weight > best_weight {
            best = current.clone();
            best_weight = weight;
        }
        if next < checkpoints.len() && checkpoints[next] == t {
            out.push((best.clone(), best_weight));
            next += 1;
        }
    }
    Ok(out)
}

/// Best clique found from seed `s` after `iterations` perturb-and-expand
/// cycles.
pub fn clique_local_search(
    g: &Graph,
    w: &VertexWeights,
    s: &Subset,
    iterations: usize,
    rng: &mut rng::Rng,
) -> (Subset, f64) {
    clique_local_search_traced(g, w, s, &[iterations], rng)
        .expect("single checkpoint is valid")
        .pop()
        .expect("one checkpoint yields one result")
}

/// Exact maximum-weight clique by branch and bound.
///
/// Depth-first over candidates in ascending vertex order visits cliques in
/// lexicographic subset order, so keeping the first strict improvement makes
/// the tie-break deterministic: among equal-weight cliques the
/// lexicographically smallest wins (the empty clique, weight 0, is the
/// starting incumbent).
pub fn exhaustive_max_weight_clique(g: &Graph, w: &VertexWeights) -> Result<(Subset, f64)> {
    if g.n() > EXHAUSTIVE_CAP {
        return Err(Error::ExhaustiveCapExceeded {
            n: g.n(),
            cap: EXHAUSTIVE_CAP,
        });
    }
    if w.len() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            got: w.len(),
        });
    }

    fn search(
        g: &Graph,
        w: &VertexWeights,
        current: &mut Vec<usize>,
        weight: f64,
        candidates: &[usize],
        best: &mut (Vec<usize>, f64),
    ) {
        let remaining: f64 = candidates.iter().map(|&v| w.get(v)).sum();
        if weight + remaining <= best.1 && !best.0.is_empty() {
            return;
        }
        if weight > best.1 {
            *best = (current.clone(), weight);
        }
        for (pos, &v) in candidates.iter().enumerate() {
            let narrowed: Vec<usize> = candidates[pos + 1..]
                .iter()
                .copied()
                .filter(|&u| g.has_edge(v, u))
                .collect();
            current.push(v);
            search(g, w, current, weight + w.get(v), &narrowed, best);
            current.pop();
        }
    }

    let all: Vec<usize> = (0..g.n()).collect();
    let mut best = (Vec::new(), 0.0);
    let mut current = Vec::new();
    search(g, w, &mut current, 0.0, &all, &mut best);
    Ok((
        Subset::from_sorted(best.0).expect("DFS path ascends"),
        best.1,
    ))
}

/// Synthetic maximum-weight-clique instance: ER(n, p_bg) background with a
/// clique planted on the `clique_size` highest-weight vertices. Weights are
/// i.i.d. uniform on [0,1).
pub fn planted_clique_instance(
    n: usize,
    p_bg: f64,
    clique_size: usize,
    seed: u64,
) -> Result<(Graph, VertexWeights)> {
    if clique_size > n {
        return Err(Error::KOutOfRange { k: clique_size, n });
    }
    let mut wrng = rng::stream(seed, StreamTag::Weights, 0);
    let weights: Vec<f64> = (0..n).map(|_| wrng.random::<f64>()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        weights[b]
            .partial_cmp(&weights[a])
            .expect("weights are finite")
    });
    let top = &order[..clique_size];

    let base = Graph::erdos_renyi(n, p_bg, rng::child_seed(seed, StreamTag::GraphGen, 0))?;
    let mut adj: Vec<f64> = (0..n * n)
        .map(|idx| base.weight(idx / n, idx % n))
        .collect();
    for (a, &i) in top.iter().enumerate() {
        for &j in top.iter().skip(a + 1) {
            adj[i * n + j] = 1.0;
            adj[j * n + i] = 1.0;
        }
    }
    Ok((Graph::from_adjacency(n, adj)?, VertexWeights::new(weights)?))
}

/// Grid for the densest-k-subgraph experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DensestConfig {
    pub n: usize,
    pub p: f64,
    pub k: usize,
    pub graphs: usize,
    pub samples_per_graph: usize,
    pub samplers: Vec<SamplerKind>,
    pub seed: u64,
}

/// Per-sampler density statistics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensestStats {
    pub sampler: SamplerKind,
    /// Mean density over all graphs × samples.
    pub mean_density: f64,
    /// Population standard deviation of the pooled densities.
    pub density_std: f64,
    /// Largest density seen anywhere.
    pub max_density: f64,
    /// `running_max_mean[m-1]`: mean over graphs of the best density among
    /// the first m samples.
    pub running_max_mean: Vec<f64>,
    /// Graphs where the hafnian-weighted sampler degraded to uniform draws
    /// because the k-photon sector was empty.
    pub fallback_graphs: usize,
}

/// Densest-k experiment output; `skipped` lists samplers dropped before the
/// run (only gbs, when enumeration exceeds the budget).
#[derive(Debug, Clone, Serialize)]
pub struct DensestReport {
    pub stats: Vec<DensestStats>,
    pub skipped: Vec<(SamplerKind, String)>,
}

type DrawFn<'a> = Box<dyn FnMut(&mut rng::Rng) -> Result<Subset> + 'a>;

// Per-graph sampling for one sampler; densities in draw order.
// Hafnian-weighted samplers degrade to uniform draws when the sector is
// empty (e.g. an edgeless graph), keeping the statistics defined; the
// returned flag records that.
fn sample_densities(
    g: &Graph,
    k: usize,
    sampler: SamplerKind,
    samples: usize,
    gbs_table: Option<&DistributionTable>,
    max_attempts: u64,
    rng: &mut rng::Rng,
) -> Result<(Vec<f64>, bool)> {
    let mut fallback = false;
    let mut draw: DrawFn = match sampler {
        SamplerKind::Uniform => Box::new(move |r| uniform_sample(g.n(), k, r)),
        SamplerKind::Qi => {
            if g.has_matching(k / 2) {
                let model = build_edge_model(g)?;
                Box::new(move |r| qi_sample(&model, k / 2, max_attempts, r))
            } else {
                fallback = true;
                Box::new(move |r| uniform_sample(g.n(), k, r))
            }
        }
        SamplerKind::Gbs => match gbs_table {
            Some(t) => Box::new(move |r| Ok(sample_from_table(t, r))),
            None => {
                fallback = true;
                Box::new(move |r| uniform_sample(g.n(), k, r))
            }
        },
    };
    let mut densities = Vec::with_capacity(samples);
    for _ in 0..samples {
        let s = draw(rng)?;
        densities.push(g.density(&s)?);
    }
    Ok((densities, fallback))
}

/// Runs the densest-k experiment: for every generated graph and every
/// sampler, draw subsets, record densities, and aggregate means and
/// running maxima.
pub fn densest_experiment(
    cfg: &DensestConfig,
    budget: u64,
    max_attempts: u64,
) -> Result<DensestReport> {
    if cfg.graphs == 0 || cfg.samples_per_graph == 0 || cfg.samplers.is_empty() {
        return Err(Error::InvalidConfig(
            "graphs, samples and samplers must be nonempty".into(),
        ));
    }
    if cfg.k < 2 || cfg.k > cfg.n {
        return Err(Error::KOutOfRange { k: cfg.k, n: cfg.n });
    }
    let wants_hafnian = cfg
        .samplers
        .iter()
        .any(|s| matches!(s, SamplerKind::Qi | SamplerKind::Gbs));
    if wants_hafnian && cfg.k % 2 == 1 {
        return Err(Error::OddSector { k: cfg.k });
    }
    if !(0.0..=1.0).contains(&cfg.p) {
        return Err(Error::InvalidProbability { value: cfg.p });
    }

    // gbs needs full sector enumeration per graph: drop it (with the reason)
    // when that exceeds the budget rather than failing the whole run.
    let mut samplers = cfg.samplers.clone();
    let mut skipped = Vec::new();
    if samplers.contains(&SamplerKind::Gbs) {
        if let Err(e @ Error::BudgetExceeded { .. }) =
            crate::samplers::check_sector_args(cfg.n, cfg.k, SamplerKind::Gbs, budget)
        {
            skipped.push((SamplerKind::Gbs, e.to_string()));
            samplers.retain(|s| *s != SamplerKind::Gbs);
        }
    }
    if samplers.is_empty() {
        let (_, reason) = skipped.pop().expect("skip reason recorded");
        return Err(Error::InvalidConfig(format!(
            "no samplers left to run: {reason}"
        )));
    }

    let n_samplers = samplers.len();
    // cells[graph][sampler] = (densities, fallback)
    let cells: Vec<Vec<(Vec<f64>, bool)>> = try_map_indexed(cfg.graphs, |gi| {
        let g = Graph::erdos_renyi(
            cfg.n,
            cfg.p,
            rng::child_seed(cfg.seed, StreamTag::GraphGen, gi as u64),
        )?;
        let gbs_table = if samplers.contains(&SamplerKind::Gbs) {
            match exact_distribution(&g, cfg.k, SamplerKind::Gbs, budget) {
                Ok(t) => Some(t),
                Err(Error::EmptySector { .. }) => None,
                Err(e) => return Err(e),
            }
        } else {
            None
        };
        samplers
            .iter()
            .enumerate()
            .map(|(si, &sampler)| {
                let mut cell_rng = rng::stream(
                    cfg.seed,
                    StreamTag::DensestCell,
                    (gi * n_samplers + si) as u64,
                );
                sample_densities(
                    &g,
                    cfg.k,
                    sampler,
                    cfg.samples_per_graph,
                    gbs_table.as_ref(),
                    max_attempts,
                    &mut cell_rng,
                )
            })
            .collect()
    })?;

    let total_samples = (cfg.graphs * cfg.samples_per_graph) as f64;
    let stats = samplers
        .iter()
        .enumerate()
        .map(|(si, &sampler)| {
            let per_graph: Vec<&(Vec<f64>, bool)> = cells.iter().map(|row| &row[si]).collect();
            let graph_sums: Vec<f64> = per_graph.iter().map(|(d, _)| pairwise_sum(d)).collect();
            let mean_density = pairwise_sum(&graph_sums) / total_samples;
            let graph_sq_sums: Vec<f64> = per_graph
                .iter()
                .map(|(d, _)| pairwise_sum(&d.iter().map(|x| x * x).collect::<Vec<_>>()))
                .collect();
            let variance = (pairwise_sum(&graph_sq_sums) / total_samples
                - mean_density * mean_density)
                .max(0.0);
            let density_std = variance.sqrt();
            let max_density = per_graph
                .iter()
                .flat_map(|(d, _)| d.iter().copied())
                .fold(0.0, f64::max);
            let running_max_mean: Vec<f64> = (0..cfg.samples_per_graph)
                .map(|m| {
                    let maxima: Vec<f64> = per_graph
                        .iter()
                        .map(|(d, _)| d[..=m].iter().copied().fold(0.0, f64::max))
                        .collect();
                    pairwise_sum(&maxima) / cfg.graphs as f64
                })
                .collect();
            let fallback_graphs = per_graph.iter().filter(|(_, fb)| *fb).count();
            DensestStats {
                sampler,
                mean_density,
                density_std,
                max_density,
                running_max_mean,
                fallback_graphs,
            }
        })
        .collect();

    Ok(DensestReport { stats, skipped })
}

/// Configuration for the maximum-weight-clique experiment. The graph and
/// weights are passed alongside, so this only holds the run parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CliqueConfig {
    /// Weighting strength: sampling uses B = ΩAΩ with Ω_ii = 1 + alpha·w_i.
    pub alpha: f64,
    /// Independent local-search runs per sampler.
    pub samples: usize,
    /// Iteration counts to report, strictly increasing.
    pub iterations: Vec<usize>,
    pub samplers: Vec<SamplerKind>,
    pub seed: u64,
    /// Sampled subset size; defaults to the even size nearest the optimum
    /// clique when that is computed here.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed_size: Option<usize>,
    /// Known maximum clique weight; skips the exhaustive search.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub optimum_weight: Option<f64>,
}

/// Success counts for one (sampler, iteration-budget) pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CliqueStats {
    pub sampler: SamplerKind,
    pub iterations: usize,
    pub successes: usize,
    pub runs: usize,
    pub success_rate: f64,
}

/// Clique experiment output.
#[derive(Debug, Clone, Serialize)]
pub struct CliqueReport {
    pub optimum_weight: f64,
    /// Only present when computed by the exhaustive search.
    pub optimum: Option<Subset>,
    pub seed_size: usize,
    /// Rows ordered by sampler (config order), then iteration count.
    pub rows: Vec<CliqueStats>,
}

fn nearest_even_size(c: usize, n: usize) -> usize {
    let k = if c.is_multiple_of(2) { c } else { c + 1 };
    let k = if k > n { k.saturating_sub(2) } else { k };
    k.max(2)
}

/// Runs the clique experiment: seed local search with subsets drawn from
/// each sampler on the Ω-weighted graph and report, per iteration budget,
/// the fraction of runs that reach the optimum weight.
pub fn clique_experiment(
    g: &Graph,
    w: &VertexWeights,
    cfg: &CliqueConfig,
    budget: u64,
    max_attempts: u64,
) -> Result<CliqueReport> {
    if cfg.samples == 0 || cfg.samplers.is_empty() || cfg.iterations.is_empty() {
        return Err(Error::InvalidConfig(
            "samples, samplers and iterations must be nonempty".into(),
        ));
    }
    if !cfg.iterations.windows(2).all(|c| c[0] < c[1]) {
        return Err(Error::InvalidConfig(
            "iterations must be strictly increasing".into(),
        ));
    }

    let (optimum, optimum_weight) = match cfg.optimum_weight {
        Some(weight) => (None, weight),
        None => {
            if g.n() > EXHAUSTIVE_CAP {
                return Err(Error::OptimumUnknown {
                    cap: EXHAUSTIVE_CAP,
                });
            }
            let (subset, weight) = exhaustive_max_weight_clique(g, w)?;
            (Some(subset), weight)
        }
    };
    let seed_size = match (cfg.seed_size, &optimum) {
        (Some(k), _) => k,
        (None, Some(opt)) => nearest_even_size(opt.len(), g.n()),
        (None, None) => {
            return Err(Error::InvalidConfig(
                "seed_size is required when the optimum weight is supplied".into(),
            ))
        }
    };
    if seed_size < 2 || seed_size > g.n() {
        return Err(Error::KOutOfRange {
            k: seed_size,
            n: g.n(),
        });
    }
    let wants_hafnian = cfg
        .samplers
        .iter()
        .any(|s| matches!(s, SamplerKind::Qi | SamplerKind::Gbs));
    if wants_hafnian && seed_size % 2 == 1 {
        return Err(Error::OddSector { k: seed_size });
    }

    let weighted = g.apply_vertex_weights(w, cfg.alpha)?;
    let qi_model =
        if cfg.samplers.contains(&SamplerKind::Qi) && weighted.has_matching(seed_size / 2) {
            Some(build_edge_model(&weighted)?)
        } else {
            None
        };
    let gbs_table = if cfg.samplers.contains(&SamplerKind::Gbs) {
        match exact_distribution(&weighted, seed_size, SamplerKind::Gbs, budget) {
            Ok(t) => Some(t),
            Err(Error::EmptySector { .. }) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };

    let checkpoints = cfg.iterations.clone();
    let tol = WEIGHT_EQ_TOL * optimum_weight.abs().max(1.0);

    let mut rows = Vec::new();
    for (si, &sampler) in cfg.samplers.iter().enumerate() {
        // successes[c] counts runs whose best at checkpoint c hits the optimum
        let per_run: Vec<Vec<bool>> = try_map_indexed(cfg.samples, |run| {
            let mut run_rng = rng::stream(
                cfg.seed,
                StreamTag::CliqueRun,
                (si * cfg.samples + run) as u64,
            );
            let seed_subset = match sampler {
                SamplerKind::Uniform => uniform_sample(g.n(), seed_size, &mut run_rng)?,
                SamplerKind::Qi => match &qi_model {
                    Some(model) => qi_sample(model, seed_size / 2, max_attempts, &mut run_rng)?,
                    None => uniform_sample(g.n(), seed_size, &mut run_rng)?,
                },
                SamplerKind::Gbs => match &gbs_table {
                    Some(t) => sample_from_table(t, &mut run_rng),
                    None => uniform_sample(g.n(), seed_size, &mut run_rng)?,
                },
            };
            let trace = clique_local_search_traced(g, w, &seed_subset, &checkpoints, &mut run_rng)?;
            Ok::<_, Error>(
                trace
                    .into_iter()
                    .map(|(_, weight)| (weight - optimum_weight).abs() <= tol)
                    .collect(),
            )
        })?;

        for (ci, &iterations) in checkpoints.iter().enumerate() {
            let successes = per_run.iter().filter(|run| run[ci]).count();
            rows.push(CliqueStats {
                sampler,
                iterations,
                successes,
                runs: cfg.samples,
                success_rate: successes as f64 / cfg.samples as f64,
            });
        }
    }

    Ok(CliqueReport {
        optimum_weight,
        optimum,
        seed_size,
        rows,
    })
}
