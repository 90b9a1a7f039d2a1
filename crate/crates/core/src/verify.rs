//! Self-contained oracle suites behind `aztec verify`.
//!
//! Every check compares a fast computation with an independent slow one
//! (brute-force enumeration, direct summation, AGM) on small inputs.

use std::collections::HashMap;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kasteleyn::{
    edge_probabilities, enumerate_matchings, exact_mean_heights, for_each_matching, inverse_kasteleyn,
    joint_centered_correlation, ln_partition_function, CorrelationQuery, KasteleynMatrix,
};
use crate::lattice::{reference_matching, AztecGraph, EdgeKind, HeightPlan, Matching, WeightScheme};
use crate::sampler::Sampler;
use crate::spectral::{
    characteristic_polynomial, discrete_gaussian_moments, modular_transform_check, moments_by_summation,
    period_genus1, theta, DiscreteGaussianParams, LaurentPoly2, ThetaParams,
};
use crate::stats::chi_square_sf;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Lattice,
    Kasteleyn,
    Sampler,
    Spectral,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Lattice, Suite::Kasteleyn, Suite::Sampler, Suite::Spectral];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lattice => "lattice",
            Suite::Kasteleyn => "kasteleyn",
            Suite::Sampler => "sampler",
            Suite::Spectral => "spectral",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite {s:?} (expected lattice, kasteleyn, sampler or spectral)")))
    }
}

/// Deliberate faults for checking that the suites can fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mutation {
    /// Flip the sign of every `beta` entry of the Kasteleyn matrix.
    KasteleynSign,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub passed: bool,
    pub checks: Vec<Check>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct VerifyOptions {
    pub seed: u64,
    pub mutation: Option<Mutation>,
}

fn check(name: &str, outcome: Result<(bool, String)>) -> Check {
    match outcome {
        Ok((passed, detail)) => Check { name: name.into(), passed, detail },
        Err(e) => Check { name: name.into(), passed: false, detail: format!("error: {e}") },
    }
}

pub fn run_suite(suite: Suite, opts: VerifyOptions) -> SuiteReport {
    let checks = match suite {
        Suite::Lattice => lattice_checks(opts),
        Suite::Kasteleyn => kasteleyn_checks(opts),
        Suite::Sampler => sampler_checks(opts),
        Suite::Spectral => spectral_checks(opts),
    };
    SuiteReport { suite, passed: checks.iter().all(|c| c.passed), checks }
}

pub fn run_suites(suites: &[Suite], opts: VerifyOptions) -> Vec<SuiteReport> {
    suites.iter().map(|&s| run_suite(s, opts)).collect()
}

pub fn random_scheme(rng: &mut impl Rng, k: usize, l: usize) -> WeightScheme {
    let mut t = || (0..k).map(|_| (0..l).map(|_| rng.random_range(0.3..3.0)).collect()).collect();
    WeightScheme::new(k, l, t(), t(), t()).expect("positive weights")
}

fn kasteleyn_for(graph: &AztecGraph, mutation: Option<Mutation>) -> KasteleynMatrix {
    match mutation {
        Some(Mutation::KasteleynSign) => {
            KasteleynMatrix::build_with_signs(graph, |e| if e.kind == EdgeKind::Beta { -e.kind.sign() } else { e.kind.sign() })
        }
        None => KasteleynMatrix::build(graph),
    }
}

fn lattice_checks(opts: VerifyOptions) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let scheme = random_scheme(&mut rng, 2, 3);
    vec![
        check("vertex and edge counts", (|| {
            for n in 1..=6 {
                let g = AztecGraph::with_order(n, WeightScheme::uniform(1, 1))?;
                if g.num_white() != n * (n + 1) || g.num_black() != n * (n + 1) || g.edges().len() != 4 * n * n {
                    return Ok((false, format!("order {n}: wrong counts")));
                }
            }
            Ok((true, "orders 1..=6".into()))
        })()),
        check("reference matching is partial and disjoint", (|| {
            let g = AztecGraph::with_order(4, WeightScheme::uniform(1, 1))?;
            let r = reference_matching(&g);
            let mut seen = HashMap::new();
            for &e in &r {
                let e = g.edge(e);
                if seen.insert(("w", e.white), ()).is_some() || seen.insert(("b", e.black), ()).is_some() {
                    return Ok((false, "reference edges share a vertex".into()));
                }
            }
            Ok((true, format!("{} edges", r.len())))
        })()),
        check("heights close on every matching of order 3", (|| {
            let g = AztecGraph::with_order(3, scheme.clone())?;
            let plan = HeightPlan::new(&g, g.default_base_face());
            let mut bad = 0;
            let mut count = 0;
            for_each_matching(&g, 6, |m, _| {
                count += 1;
                if plan.heights(m).is_err() {
                    bad += 1;
                }
            })?;
            Ok((bad == 0, format!("{count} matchings, {bad} inconsistent")))
        })()),
        check("weight scheme JSON round trip", (|| {
            let back = WeightScheme::from_json(&scheme.to_json())?;
            Ok((back == scheme, String::new()))
        })()),
    ]
}

fn kasteleyn_checks(opts: VerifyOptions) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x4b);
    let cases: Vec<AztecGraph> = [(1, 1, 3), (2, 2, 2), (1, 2, 2), (2, 1, 3)]
        .into_iter()
        .map(|(k, l, n)| AztecGraph::with_order(n, random_scheme(&mut rng, k, l)).expect("valid order"))
        .collect();
    let mutation = opts.mutation;
    vec![
        check("determinant equals enumerated partition function", (|| {
            let mut worst = 0.0f64;
            for g in &cases {
                let z: f64 = enumerate_matchings(g, 6)?.iter().map(|(_, w)| w).sum();
                let ln_det = ln_partition_function(&kasteleyn_for(g, mutation)).unwrap_or(f64::NEG_INFINITY);
                worst = worst.max(((ln_det - z.ln()).exp() - 1.0).abs());
            }
            Ok((worst <= 1e-9, format!("max relative error {worst:e}")))
        })()),
        check("edge probabilities equal enumerated frequencies", (|| {
            let mut worst = 0.0f64;
            for g in &cases {
                let k = kasteleyn_for(g, mutation);
                let p = edge_probabilities(g, &k, &inverse_kasteleyn(&k)?);
                let (freq, z) = enumerated_frequencies(g)?;
                for (a, b) in p.iter().zip(&freq) {
                    worst = worst.max((a - b / z).abs());
                }
            }
            Ok((worst <= 1e-9, format!("max error {worst:e}")))
        })()),
        check("pair correlations equal enumeration", (|| {
            let g = &cases[1];
            let k = kasteleyn_for(g, mutation);
            let kinv = inverse_kasteleyn(&k)?;
            let all = enumerate_matchings(g, 6)?;
            let z: f64 = all.iter().map(|(_, w)| w).sum();
            let mut worst = 0.0f64;
            let mut tested = 0;
            let edges = g.edges();
            for i in 0..edges.len() {
                for j in i + 1..edges.len() {
                    let (a, b) = (&edges[i], &edges[j]);
                    if a.white == b.white || a.black == b.black {
                        continue;
                    }
                    let q = CorrelationQuery::new(g, vec![(a.white, a.black), (b.white, b.black)])?;
                    let fast = joint_centered_correlation(&k, &kinv, &q);
                    let pa = all.iter().filter(|(m, _)| m.contains(a.white, a.black)).map(|(_, w)| w).sum::<f64>() / z;
                    let pb = all.iter().filter(|(m, _)| m.contains(b.white, b.black)).map(|(_, w)| w).sum::<f64>() / z;
                    let slow = all
                        .iter()
                        .map(|(m, w)| {
                            let xa = m.contains(a.white, a.black) as u8 as f64 - pa;
                            let xb = m.contains(b.white, b.black) as u8 as f64 - pb;
                            xa * xb * w
                        })
                        .sum::<f64>()
                        / z;
                    worst = worst.max((fast - slow).abs());
                    tested += 1;
                }
            }
            Ok((worst <= 1e-9, format!("{tested} pairs, max error {worst:e}")))
        })()),
        check("mean heights equal enumeration", (|| {
            let g = &cases[0];
            let k = kasteleyn_for(g, mutation);
            let kinv = inverse_kasteleyn(&k)?;
            let base = g.default_base_face();
            let exact = exact_mean_heights(g, &kinv, base);
            let plan = HeightPlan::new(g, base);
            let mut acc = vec![0.0; exact.len()];
            let mut z = 0.0;
            for_each_matching(g, 6, |m, w| {
                if let Ok(h) = plan.heights(m) {
                    for (a, &v) in acc.iter_mut().zip(h.values()) {
                        *a += w * v as f64;
                    }
                }
                z += w;
            })?;
            let worst = exact.iter().zip(&acc).fold(0.0f64, |m, (a, b)| m.max((a - b / z).abs()));
            Ok((worst <= 1e-9, format!("max error {worst:e}")))
        })()),
    ]
}

fn enumerated_frequencies(g: &AztecGraph) -> Result<(Vec<f64>, f64)> {
    let mut freq = vec![0.0; g.edges().len()];
    let mut z = 0.0;
    for_each_matching(g, 6, |m, w| {
        for e in m.edges(g) {
            freq[e.0 as usize] += w;
        }
        z += w;
    })?;
    Ok((freq, z))
}

/// Chi-square p-value of `draws` samples against the exact law of all
/// matchings of `graph`.
pub fn chi_square_against_enumeration(graph: &AztecGraph, draws: usize, seed: u64) -> Result<f64> {
    let exact = enumerate_matchings(graph, 6)?;
    let z: f64 = exact.iter().map(|(_, w)| w).sum();
    let sampler = Sampler::new(graph.clone())?;
    let mut counts: HashMap<Matching, usize> = HashMap::new();
    for m in sampler.sample_batch(seed, draws, |_, m| m).items {
        *counts.entry(m).or_default() += 1;
    }
    if counts.keys().any(|m| !exact.iter().any(|(e, _)| e == m)) {
        return Ok(0.0);
    }
    let stat: f64 = exact
        .iter()
        .map(|(m, w)| {
            let expected = draws as f64 * w / z;
            (*counts.get(m).unwrap_or(&0) as f64 - expected).powi(2) / expected
        })
        .sum();
    Ok(chi_square_sf(stat, exact.len() - 1))
}

fn sampler_checks(opts: VerifyOptions) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x5a);
    let random = random_scheme(&mut rng, 2, 2);
    let mut checks = Vec::new();
    for (name, w, n) in [
        ("order-2 uniform chi-square", WeightScheme::uniform(1, 1), 2),
        ("order-2 a=0.7 chi-square", WeightScheme::symmetric_two_by_two(0.7).expect("valid"), 2),
        ("order-3 random 2x2 chi-square", random, 3),
    ] {
        checks.push(check(name, (|| {
            let p = chi_square_against_enumeration(&AztecGraph::with_order(n, w)?, 20_000, opts.seed)?;
            Ok((p > 1e-3, format!("p = {p:.4}")))
        })()));
    }
    checks.push(check("order-4 edge frequencies within 4 sigma", (|| {
        let g = AztecGraph::with_order(4, WeightScheme::symmetric_two_by_two(0.6)?)?;
        let k = KasteleynMatrix::build(&g);
        let p = edge_probabilities(&g, &k, &inverse_kasteleyn(&k)?);
        let draws = 20_000;
        let sampler = Sampler::new(g.clone())?;
        let mut freq = vec![0usize; p.len()];
        for m in sampler.sample_batch(opts.seed ^ 7, draws, |_, m| m).items {
            for e in m.edges(&g) {
                freq[e.0 as usize] += 1;
            }
        }
        let worst = p
            .iter()
            .zip(&freq)
            .map(|(&p, &f)| {
                let sd = (p * (1.0 - p) / draws as f64).sqrt().max(1e-12);
                (f as f64 / draws as f64 - p).abs() / sd
            })
            .fold(0.0f64, f64::max);
        Ok((worst < 4.0, format!("max |z| = {worst:.2}")))
    })()));
    checks
}

fn spectral_checks(opts: VerifyOptions) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x5b);
    vec![
        check("characteristic polynomial pattern", (|| {
            let mut worst = 0.0f64;
            for a in [0.5, 0.7, 2.0] {
                let p = characteristic_polynomial(&WeightScheme::symmetric_two_by_two(a)?)?;
                worst = worst.max(p.normal_form().max_difference(&symmetric_pattern(a).normal_form()));
            }
            Ok((worst <= 1e-8, format!("max coefficient error {worst:e}")))
        })()),
        check("period against the AGM", (|| {
            let mut worst = 0.0f64;
            for a in [0.5, 0.7, 0.9, 2.0] {
                let b = period_genus1(a)?.period.expect("computed");
                let (r1, r2) = ((a * a).min(1.0 / (a * a)), (a * a).max(1.0 / (a * a)));
                let ratio = agm(r2.sqrt(), r1.sqrt()) / agm(r2.sqrt(), (r2 - r1).sqrt());
                worst = worst.max(b.re.abs()).max((b.im - ratio).abs());
            }
            Ok((worst <= 1e-8, format!("max error {worst:e}")))
        })()),
        check("theta periodicity, evenness and modular identity", (|| {
            let mut worst = 0.0f64;
            for _ in 0..20 {
                let b = Complex64::new(rng.random_range(-0.5..0.5), rng.random_range(0.3..3.0));
                let p = ThetaParams::scalar(b)?;
                let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-0.5..0.5));
                let t = theta(&[z], &p);
                let s = t.norm().max(1.0);
                worst = worst
                    .max((theta(&[z + 1.0], &p) - t).norm() / s)
                    .max((theta(&[-z], &p) - t).norm() / s)
                    .max(modular_transform_check(&[z], &p)?);
            }
            Ok((worst <= 1e-9, format!("max residual {worst:e}")))
        })()),
        check("discrete Gaussian moments against summation", (|| {
            let mut worst = 0.0f64;
            for _ in 0..20 {
                let p = DiscreteGaussianParams::scalar(rng.random_range(-0.5..0.5), Complex64::new(0.0, rng.random_range(0.3..3.0)))?;
                let d = discrete_gaussian_moments(&p);
                let (s, _) = moments_by_summation(&p);
                worst = worst.max((d.mean[0] - s.mean[0]).abs()).max((d.covariance[0][0] - s.covariance[0][0]).abs());
            }
            Ok((worst <= 1e-8, format!("max error {worst:e}")))
        })()),
    ]
}

/// `(z/w) P` of the symmetric 2x2 family in closed form.
pub fn symmetric_pattern(a: f64) -> LaurentPoly2 {
    LaurentPoly2::from_terms([
        ((0, 0), -4.0 - 4.0 / (a * a) - 4.0 * a * a),
        ((0, -1), -2.0),
        ((0, 1), -2.0),
        ((-1, 0), -2.0),
        ((-1, -1), 1.0),
        ((-1, 1), 1.0),
        ((1, 0), -2.0),
        ((1, -1), 1.0),
        ((1, 1), 1.0),
    ])
}

fn agm(mut x: f64, mut y: f64) -> f64 {
    while (x - y).abs() > 1e-15 * x {
        (x, y) = (0.5 * (x + y), (x * y).sqrt());
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn mutation_breaks_the_determinant_check() {
        let r = run_suite(Suite::Kasteleyn, VerifyOptions { seed: 1, mutation: Some(Mutation::KasteleynSign) });
        assert!(!r.checks[0].passed);
        let r = run_suite(Suite::Kasteleyn, VerifyOptions { seed: 1, mutation: None });
        assert!(r.passed, "{r:?}");
    }
}
