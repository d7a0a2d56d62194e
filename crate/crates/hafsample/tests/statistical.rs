//! Statistical agreement checks that need a goodness-of-fit test rather
//! than an exact assertion.

mod common;

use common::chi_square_p_value;

use hafsample::graph::{Graph, Subset};
use hafsample::rng;
use hafsample::samplers::{
    exact_distribution, sample_from_table, uniform_sample, SamplerKind, DEFAULT_ENUM_BUDGET,
};
use hafsample::util::binomial;

#[test]
fn uniform_sampler_is_uniform_over_subsets() {
    // n=6, k=3: chi-square over all 20 subsets, 1e5 draws
    let n = 6;
    let k = 3;
    let total = binomial(n, k) as usize;
    let table = exact_distribution(
        &Graph::edgeless(n),
        k,
        SamplerKind::Uniform,
        DEFAULT_ENUM_BUDGET,
    )
    .unwrap();
    let index: std::collections::HashMap<Subset, usize> = table
        .entries()
        .iter()
        .enumerate()
        .map(|(i, (s, _))| (s.clone(), i))
        .collect();

    let draws = 100_000;
    let mut counts = vec![0u64; total];
    let mut rng = rng::root(0xBEEF);
    for _ in 0..draws {
        let s = uniform_sample(n, k, &mut rng).unwrap();
        counts[index[&s]] += 1;
    }
    let expected = vec![draws as f64 / total as f64; total];
    let p = chi_square_p_value(&counts, &expected);
    assert!(p > 0.001, "uniformity rejected: p = {p}");
}

#[test]
fn table_sampler_matches_its_table() {
    let g = Graph::erdos_renyi(9, 0.45, 133).unwrap();
    let table = exact_distribution(&g, 4, SamplerKind::Gbs, DEFAULT_ENUM_BUDGET).unwrap();
    let draws = 50_000;
    let mut counts = vec![0u64; table.len()];
    let mut rng = rng::root(0xF00D);
    for _ in 0..draws {
        let s = sample_from_table(&table, &mut rng);
        let idx = table
            .entries()
            .binary_search_by(|(t, _)| t.vertices().cmp(s.vertices()))
            .unwrap();
        counts[idx] += 1;
    }
    let expected: Vec<f64> = table
        .entries()
        .iter()
        .map(|(_, p)| p * draws as f64)
        .collect();
    let p = chi_square_p_value(&counts, &expected);
    assert!(p > 0.001, "table agreement rejected: p = {p}");
}
