//! The samplers and exact sector distributions.
//!
//! Four ways of drawing vertex subsets from a graph:
//!
//! - [`qi_sample`]: the edge-draw rejection sampler. Draws N edges i.i.d.
//!   with probability q ∝ A_ij and accepts when all 2N endpoints are
//!   distinct; conditioned on acceptance the law over subsets is exactly
//!   haf(A_S)/Z_C.
//! - [`uniform_sample`]: uniform over all C(n,k) subsets.
//! - [`exact_distribution`] + [`sample_from_table`]: exhaustive enumeration
//!   of the collision-free k-photon sector with haf (qi), haf² (gbs) or
//!   constant (uniform) weights, then inverse-CDF draws. The gbs table is
//!   the sector-normalized Gaussian-boson-sampler law.
//! - [`ips_sample`]: independent Poisson pair counts per edge, collisions
//!   allowed — the Pairs part of the IPS distribution.
//!
//! [`pc_from_pq`] maps the squared-hafnian law to the hafnian law by an
//! entrywise square root, and [`max_probability_ratios`] reports how much
//! likelier the most probable outcome is under gbs than under uniform or qi
//! sampling.
//!
//! Enumeration parallelizes over disjoint subset-rank ranges and reduces in
//! index order, so tables are identical run to run at any thread count.

use std::fmt;
use std::str::FromStr;

use rand::Rng as _;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::graph::{Graph, Subset};
use crate::hafnian::{self, DIM_CAP};
use crate::parallel::map_indexed;
use crate::rng::Rng;
use crate::util::{binomial, double_factorial_odd, pairwise_sum, unrank_combination};
use crate::Result;

/// Default cap on enumeration work, in hafnian-product units.
pub const DEFAULT_ENUM_BUDGET: u64 = 100_000_000;

/// Default rejection-attempt cap for [`qi_sample`].
pub const DEFAULT_MAX_ATTEMPTS: u64 = 1_000_000;

/// Which law a table or sampler follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SamplerKind {
    /// Squared-hafnian weights (sector-normalized Gaussian boson sampler).
    Gbs,
    /// Hafnian weights (the classical edge-draw sampler's law).
    Qi,
    /// Constant weights.
    Uniform,
}

impl fmt::Display for SamplerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SamplerKind::Gbs => write!(f, "gbs"),
            SamplerKind::Qi => write!(f, "qi"),
            SamplerKind::Uniform => write!(f, "uniform"),
        }
    }
}

impl FromStr for SamplerKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "gbs" => Ok(SamplerKind::Gbs),
            "qi" => Ok(SamplerKind::Qi),
            "uniform" => Ok(SamplerKind::Uniform),
            other => Err(format!(
                "unknown sampler kind {other:?} (expected gbs|qi|uniform)"
            )),
        }
    }
}

/// Exhaustive distribution over all k-subsets for one sampler kind.
///
/// Entries are in lexicographic subset order and include zero-probability
/// subsets; `z` is the normalization constant of the unnormalized weights
/// (Z_Q for gbs, Z_C for qi, C(n,k) for uniform).
#[derive(Debug, Clone)]
pub struct DistributionTable {
    k: usize,
    kind: SamplerKind,
    entries: Vec<(Subset, f64)>,
    weights: Vec<f64>,
    z: f64,
    cdf: Vec<f64>,
}

impl DistributionTable {
    fn from_weights(
        k: usize,
        kind: SamplerKind,
        subsets: Vec<Subset>,
        weights: Vec<f64>,
    ) -> Result<Self> {
        let z = pairwise_sum(&weights);
        if z.is_nan() || z <= 0.0 {
            return Err(Error::EmptySector { k });
        }
        let mut entries = Vec::with_capacity(subsets.len());
        let mut cdf = Vec::with_capacity(subsets.len());
        let mut acc = 0.0;
        for (s, &w) in subsets.into_iter().zip(&weights) {
            let p = w / z;
            acc += p;
            entries.push((s, p));
            cdf.push(acc);
        }
        Ok(Self {
            k,
            kind,
            entries,
            weights,
            z,
            cdf,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn kind(&self) -> SamplerKind {
        self.kind
    }

    /// `(subset, probability)` rows in lexicographic subset order.
    pub fn entries(&self) -> &[(Subset, f64)] {
        &self.entries
    }

    /// Unnormalized weights aligned with [`entries`](Self::entries).
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Normalization constant of the unnormalized weights.
    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Probability of one subset, if the table holds it.
    pub fn probability_of(&self, s: &Subset) -> Option<f64> {
        self.entries
            .binary_search_by(|(t, _)| t.vertices().cmp(s.vertices()))
            .ok()
            .map(|idx| self.entries[idx].1)
    }

    /// Index of the most probable entry (lexicographically first on ties).
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (idx, (_, p)) in self.entries.iter().enumerate() {
            if *p > self.entries[best].1 {
                best = idx;
            }
        }
        best
    }
}

/// Work estimate for enumerating the k-sector: C(n,k)·(k−1)!! hafnian
/// products (C(n,k) for uniform weights).
pub fn sector_products(n: usize, k: usize, kind: SamplerKind) -> u64 {
    let per_subset = match kind {
        SamplerKind::Uniform => 1,
        _ => double_factorial_odd(k / 2),
    };
    binomial(n, k).saturating_mul(per_subset)
}

/// Argument validation shared by the enumeration entry points: size range,
/// sector parity, dimension cap and work budget.
pub fn check_sector_args(n: usize, k: usize, kind: SamplerKind, budget: u64) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::KOutOfRange { k, n });
    }
    if kind != SamplerKind::Uniform {
        if k % 2 == 1 {
            return Err(Error::OddSector { k });
        }
        if k > DIM_CAP {
            return Err(Error::DimCapExceeded {
                dim: k,
                cap: DIM_CAP,
            });
        }
    }
    let needed = sector_products(n, k, kind);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    Ok(())
}

// Hafnians of every k-subset in lexicographic order, computed in parallel
// over disjoint rank ranges.
fn sector_hafnians(g: &Graph, k: usize) -> (Vec<Subset>, Vec<f64>) {
    let n = g.n();
    let total = binomial(n, k) as usize;
    let rows = map_indexed(total, |rank| {
        let verts = unrank_combination(n, k, rank as u64);
        let h = hafnian::hafnian_in_graph(g, &verts);
        (
            Subset::from_sorted(verts).expect("unrank yields sorted subsets"),
            h,
        )
    });
    rows.into_iter().unzip()
}

/// Enumerates all k-subsets of `g` and normalizes the chosen weights
/// (haf² for gbs, haf for qi, 1 for uniform).
///
/// `budget` caps the work estimate C(n,k)·(k−1)!!; a sector whose weights
/// are all zero is the empty-sector error.
pub fn exact_distribution(
    g: &Graph,
    k: usize,
    kind: SamplerKind,
    budget: u64,
) -> Result<DistributionTable> {
    check_sector_args(g.n(), k, kind, budget)?;
    let n = g.n();
    match kind {
        SamplerKind::Uniform => {
            let total = binomial(n, k) as usize;
            let subsets: Vec<Subset> = (0..total)
                .map(|rank| {
                    Subset::from_sorted(unrank_combination(n, k, rank as u64))
                        .expect("unrank yields sorted subsets")
                })
                .collect();
            DistributionTable::from_weights(k, kind, subsets, vec![1.0; total])
        }
        SamplerKind::Qi => {
            let (subsets, hafs) = sector_hafnians(g, k);
            DistributionTable::from_weights(k, kind, subsets, hafs)
        }
        SamplerKind::Gbs => {
            let (subsets, hafs) = sector_hafnians(g, k);
            let squared: Vec<f64> = hafs.iter().map(|h| h * h).collect();
            DistributionTable::from_weights(k, kind, subsets, squared)
        }
    }
}

/// Inverse-CDF draw from a table.
pub fn sample_from_table(t: &DistributionTable, rng: &mut Rng) -> Subset {
    let u: f64 = rng.random();
    let idx = t.cdf.partition_point(|&c| c <= u).min(t.entries.len() - 1);
    t.entries[idx].0.clone()
}

/// Maps a squared-hafnian table to the hafnian law: entrywise square root,
/// renormalized. Weights are rescaled by √Z_Q so they become the hafnians
/// themselves, and the recorded Z becomes √Z_Q·Σ√p = Z_C.
pub fn pc_from_pq(t: &DistributionTable) -> Result<DistributionTable> {
    if t.kind != SamplerKind::Gbs {
        return Err(Error::WrongTableKind {
            expected: SamplerKind::Gbs.to_string(),
            got: t.kind.to_string(),
        });
    }
    let scale = t.z.sqrt();
    let subsets: Vec<Subset> = t.entries.iter().map(|(s, _)| s.clone()).collect();
    let roots: Vec<f64> = t.entries.iter().map(|(_, p)| p.sqrt() * scale).collect();
    DistributionTable::from_weights(t.k, SamplerKind::Qi, subsets, roots)
}

/// The edge-draw rejection sampler; also reports how many attempts the
/// accepted draw took.
///
/// Each attempt draws `pairs` edges i.i.d. by cumulative-probability
/// inversion and accepts iff all 2N endpoints are distinct. On exhaustion
/// the error carries the measured acceptance rate (zero — nothing was
/// accepted within the cap).
pub fn qi_sample_counted(
    model: &crate::encoding::EdgeModel,
    pairs: usize,
    max_attempts: u64,
    rng: &mut Rng,
) -> Result<(Subset, u64)> {
    if pairs == 0 || 2 * pairs > model.n {
        return Err(Error::KOutOfRange {
            k: 2 * pairs,
            n: model.n,
        });
    }
    let mut endpoints: Vec<usize> = Vec::with_capacity(2 * pairs);
    for attempt in 1..=max_attempts {
        endpoints.clear();
        for _ in 0..pairs {
            let e = &model.edges[model.select(rng.random())];
            endpoints.push(e.i);
            endpoints.push(e.j);
        }
        endpoints.sort_unstable();
        if endpoints.windows(2).all(|w| w[0] != w[1]) {
            let subset = Subset::from_sorted(endpoints.clone()).expect("sorted and distinct");
            return Ok((subset, attempt));
        }
    }
    Err(Error::RejectionExhausted {
        attempts: max_attempts,
        acceptance: 0.0,
    })
}

/// [`qi_sample_counted`] without the attempt count.
pub fn qi_sample(
    model: &crate::encoding::EdgeModel,
    pairs: usize,
    max_attempts: u64,
    rng: &mut Rng,
) -> Result<Subset> {
    qi_sample_counted(model, pairs, max_attempts, rng).map(|(s, _)| s)
}

/// Uniform draw over all C(n,k) subsets.
pub fn uniform_sample(n: usize, k: usize, rng: &mut Rng) -> Result<Subset> {
    if k == 0 || k > n {
        return Err(Error::KOutOfRange { k, n });
    }
    let picked = rand::seq::index::sample(rng, n, k).into_vec();
    Subset::from_unsorted(picked)
}

/// Photon counts per vertex; entries of 2 or more are collisions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OccupancyVector {
    counts: Vec<u64>,
}

impl OccupancyVector {
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn is_collision_free(&self) -> bool {
        self.counts.iter().all(|&c| c <= 1)
    }

    /// The occupied subset, when collision-free.
    pub fn to_subset(&self) -> Option<Subset> {
        if !self.is_collision_free() {
            return None;
        }
        let verts: Vec<usize> = self
            .counts
            .iter()
            .enumerate()
            .filter_map(|(v, &c)| (c == 1).then_some(v))
            .collect();
        Some(Subset::from_sorted(verts).expect("indices ascend"))
    }
}

/// Semicolon-joined counts, e.g. `0;2;1;0`.
impl fmt::Display for OccupancyVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (pos, c) in self.counts.iter().enumerate() {
            if pos > 0 {
                write!(f, ";")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Independent-pairs draw: for every edge, a Poisson(A_ij) pair count adds
/// to both endpoints. Collisions are allowed; the total is always even.
pub fn ips_sample(g: &Graph, rng: &mut Rng) -> OccupancyVector {
    let mut counts = vec![0u64; g.n()];
    for (i, j, w) in g.edges() {
        // Poisson::new needs λ > 0; zero-weight pairs would draw 0 anyway
        let draws = Poisson::new(w)
            .expect("edge weights are positive and finite")
            .sample(rng) as u64;
        counts[i] += draws;
        counts[j] += draws;
    }
    OccupancyVector { counts }
}

/// Largest-probability comparison between the gbs, qi and uniform laws on
/// one sector.
#[derive(Debug, Clone, Serialize)]
pub struct RatioReport {
    pub k: usize,
    /// The gbs argmax subset n*.
    pub argmax: Subset,
    pub p_gbs: f64,
    pub p_qi: f64,
    pub p_uniform: f64,
    /// p_gbs / p_uniform at n*.
    pub ratio_uniform: f64,
    /// p_gbs / p_qi at n*.
    pub ratio_qi: f64,
}

/// Computes both exact tables from one enumeration pass, locates the gbs
/// argmax and reports its probability ratios against the uniform and qi
/// laws.
pub fn max_probability_ratios(g: &Graph, k: usize, budget: u64) -> Result<RatioReport> {
    check_sector_args(g.n(), k, SamplerKind::Gbs, budget)?;
    let (subsets, hafs) = sector_hafnians(g, k);
    let squared: Vec<f64> = hafs.iter().map(|h| h * h).collect();
    let z_q = pairwise_sum(&squared);
    let z_c = pairwise_sum(&hafs);
    if z_q.is_nan() || z_q <= 0.0 {
        return Err(Error::EmptySector { k });
    }
    let mut best = 0;
    for (idx, w) in squared.iter().enumerate() {
        if *w > squared[best] {
            best = idx;
        }
    }
    let p_gbs = squared[best] / z_q;
    let p_qi = hafs[best] / z_c;
    let p_uniform = 1.0 / binomial(g.n(), k) as f64;
    Ok(RatioReport {
        k,
        argmax: subsets[best].clone(),
        p_gbs,
        p_qi,
        p_uniform,
        ratio_uniform: p_gbs / p_uniform,
        ratio_qi: p_gbs / p_qi,
    })
}
