use std::collections::HashMap;

use aztec_dimers::kasteleyn::{
    edge_probabilities, enumerate_matchings, inverse_kasteleyn, KasteleynMatrix,
};
use aztec_dimers::lattice::{AztecGraph, Matching, Vertex, WeightScheme};
use aztec_dimers::sampler::Sampler;
use aztec_dimers::stats::chi_square_sf;

fn chi_square_against_enumeration(graph: AztecGraph, draws: usize, seed: u64) -> f64 {
    let exact = enumerate_matchings(&graph, 6).unwrap();
    let z: f64 = exact.iter().map(|(_, w)| w).sum();
    let sampler = Sampler::new(graph).unwrap();
    let batch = sampler.sample_batch(seed, draws, |_, m| m);
    let mut counts: HashMap<Matching, usize> = HashMap::new();
    for m in batch.items {
        *counts.entry(m).or_default() += 1;
    }
    assert!(counts.keys().all(|m| exact.iter().any(|(e, _)| e == m)), "sampled a non-matching");
    let stat: f64 = exact
        .iter()
        .map(|(m, w)| {
            let expected = draws as f64 * w / z;
            let observed = *counts.get(m).unwrap_or(&0) as f64;
            (observed - expected).powi(2) / expected
        })
        .sum();
    chi_square_sf(stat, exact.len() - 1)
}

#[test]
fn order_one_uniform_is_fair() {
    let p = chi_square_against_enumeration(AztecGraph::with_order(1, WeightScheme::uniform(1, 1)).unwrap(), 100_000, 11);
    assert!(p > 1e-3, "p = {p}");
}

#[test]
fn order_two_uniform_matches_enumeration() {
    let p = chi_square_against_enumeration(AztecGraph::with_order(2, WeightScheme::uniform(1, 1)).unwrap(), 100_000, 12);
    assert!(p > 1e-3, "p = {p}");
}

#[test]
fn order_two_weighted_matches_enumeration() {
    let w = WeightScheme::symmetric_two_by_two(0.7).unwrap();
    let p = chi_square_against_enumeration(AztecGraph::with_order(2, w).unwrap(), 100_000, 13);
    assert!(p > 1e-3, "p = {p}");
}

#[test]
fn order_three_random_weights_match_enumeration() {
    let w = WeightScheme::new(
        2,
        2,
        vec![vec![0.3, 1.7], vec![2.2, 0.9]],
        vec![vec![1.1, 0.4], vec![0.8, 3.0]],
        vec![vec![0.6, 1.3], vec![1.9, 0.5]],
    )
    .unwrap();
    let p = chi_square_against_enumeration(AztecGraph::with_order(3, w).unwrap(), 100_000, 14);
    assert!(p > 1e-3, "p = {p}");
}

fn edge_frequencies(sampler: &Sampler, seed: u64, draws: usize) -> Vec<f64> {
    let g = sampler.graph();
    let batch = sampler.sample_batch(seed, draws, |_, m| m.edges(g).collect::<Vec<_>>());
    let mut freq = vec![0.0; g.edges().len()];
    for edges in batch.items {
        for e in edges {
            freq[e.0 as usize] += 1.0 / draws as f64;
        }
    }
    freq
}

#[test]
fn order_four_edge_frequencies_match_kasteleyn() {
    let g = AztecGraph::new(1, WeightScheme::symmetric_two_by_two(0.7).unwrap()).unwrap();
    let k = KasteleynMatrix::build(&g);
    let p = edge_probabilities(&g, &k, &inverse_kasteleyn(&k).unwrap());
    let draws = 100_000;
    let freq = edge_frequencies(&Sampler::new(g).unwrap(), 21, draws);
    for (f, p) in freq.iter().zip(&p) {
        let sigma = (p * (1.0 - p) / draws as f64).sqrt();
        assert!((f - p).abs() <= 4.0 * sigma + 1e-12, "frequency {f} vs probability {p}");
    }
}

#[test]
fn gauge_scaling_leaves_edge_frequencies_unchanged() {
    let g = AztecGraph::new(1, WeightScheme::symmetric_two_by_two(0.6).unwrap()).unwrap();
    let scaled = g.scale_vertex(Vertex::White(5), 3.0);
    let draws = 50_000;
    let a = edge_frequencies(&Sampler::new(g).unwrap(), 31, draws);
    let b = edge_frequencies(&Sampler::new(scaled).unwrap(), 32, draws);
    for (x, y) in a.iter().zip(&b) {
        let p = 0.5 * (x + y);
        let sigma = (2.0 * p * (1.0 - p) / draws as f64).sqrt();
        assert!((x - y).abs() <= 4.0 * sigma + 1e-12, "{x} vs {y}");
    }
}

#[test]
fn batches_are_reproducible_and_thread_independent() {
    let g = AztecGraph::new(3, WeightScheme::symmetric_two_by_two(0.7).unwrap()).unwrap();
    let sampler = Sampler::new(g).unwrap();
    let a = sampler.sample_batch(99, 16, |_, m| m);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let b = pool.install(|| sampler.sample_batch(99, 16, |_, m| m));
    assert_eq!(a, b);
    assert_eq!(a.items[0], sampler.sample_indexed(99, 0));
    assert_ne!(a.items[0], a.items[1]);
}
