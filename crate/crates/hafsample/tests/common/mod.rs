//! Helpers shared by the integration test binaries.

#![allow(dead_code)]

use statrs::distribution::{ChiSquared, ContinuousCDF};

use hafsample::graph::{Graph, Subset};

/// Prints one pass/fail line and asserts.
pub fn criterion(id: u32, name: &str, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("acceptance {id:2} ({name}): {verdict} — {detail}");
    assert!(pass, "acceptance criterion {id} ({name}) failed: {detail}");
}

/// Chi-square goodness-of-fit p-value. Bins with expected count below 5 are
/// pooled into one, the convention for the asymptotic test.
pub fn chi_square_p_value(observed: &[u64], expected: &[f64]) -> f64 {
    assert_eq!(observed.len(), expected.len());
    let mut obs = Vec::new();
    let mut exp = Vec::new();
    let mut pooled_obs = 0u64;
    let mut pooled_exp = 0.0f64;
    for (&o, &e) in observed.iter().zip(expected) {
        if e < 5.0 {
            pooled_obs += o;
            pooled_exp += e;
        } else {
            obs.push(o);
            exp.push(e);
        }
    }
    if pooled_exp > 0.0 {
        obs.push(pooled_obs);
        exp.push(pooled_exp);
    }
    if obs.len() < 2 {
        return 1.0;
    }
    let stat: f64 = obs
        .iter()
        .zip(&exp)
        .map(|(&o, &e)| {
            let d = o as f64 - e;
            d * d / e
        })
        .sum();
    let dof = (obs.len() - 1) as f64;
    let dist = ChiSquared::new(dof).expect("dof >= 1");
    1.0 - dist.cdf(stat)
}

/// Exhaustive independent-pairs oracle: distribute `pairs` Poisson draws
/// over the edges in every possible way, keep collision-free outcomes, and
/// normalize by occupied subset. Config weight is Π λ_e^{c_e}/c_e! (the
/// common exponential prefactor cancels).
pub fn ips_conditional_oracle(g: &Graph, pairs: usize) -> Vec<(Subset, f64)> {
    fn rec(
        edges: &[(usize, usize, f64)],
        n: usize,
        config: &mut Vec<usize>,
        pos: usize,
        left: usize,
        table: &mut std::collections::BTreeMap<Subset, f64>,
    ) {
        if pos == edges.len() {
            if left > 0 {
                return;
            }
            let mut counts = vec![0u64; n];
            let mut weight = 1.0;
            for (e, &c) in edges.iter().zip(config.iter()) {
                counts[e.0] += c as u64;
                counts[e.1] += c as u64;
                let fact: f64 = (1..=c).map(|x| x as f64).product();
                weight *= e.2.powi(c as i32) / fact;
            }
            if counts.iter().all(|&c| c <= 1) {
                let verts: Vec<usize> = counts
                    .iter()
                    .enumerate()
                    .filter_map(|(v, &c)| (c == 1).then_some(v))
                    .collect();
                *table
                    .entry(Subset::from_sorted(verts).unwrap())
                    .or_insert(0.0) += weight;
            }
            return;
        }
        for c in 0..=left {
            config[pos] = c;
            rec(edges, n, config, pos + 1, left - c, table);
        }
        config[pos] = 0;
    }

    let edges = g.edges();
    let mut table = std::collections::BTreeMap::new();
    let mut config = vec![0usize; edges.len()];
    rec(&edges, g.n(), &mut config, 0, pairs, &mut table);
    let z: f64 = table.values().sum();
    table.into_iter().map(|(s, w)| (s, w / z)).collect()
}
