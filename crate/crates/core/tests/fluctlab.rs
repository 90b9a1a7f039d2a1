use std::collections::HashMap;

use aztec_dimers::error::Error;
use aztec_dimers::fluctlab::*;
use aztec_dimers::kasteleyn::enumerate_matchings;
use aztec_dimers::lattice::{height_function, AztecGraph, Matching, Point, WeightScheme};
use aztec_dimers::sampler::Sampler;
use aztec_dimers::stats::chi_square_sf;

fn symmetric(periods: usize) -> AztecGraph {
    AztecGraph::new(periods, WeightScheme::symmetric_two_by_two(0.7).unwrap()).unwrap()
}

#[test]
fn grid_side_scales_with_the_mesh_exponent() {
    let spec = FacetSpec::new(-0.15, -0.15, 0.15, 0.15, 0.5).unwrap();
    let sides: Vec<f64> = [16, 64, 256].iter().map(|&n| (facet_grid(&symmetric(n), &spec).unwrap().m() as f64).sqrt()).collect();
    for w in sides.windows(2) {
        let slope = (w[1] / w[0]).ln() / 4f64.ln();
        assert!((0.35..=0.65).contains(&slope), "sides {sides:?}");
    }
    let central = FacetSpec::central();
    let m: Vec<usize> = [16, 64, 256].iter().map(|&n| facet_grid(&symmetric(n), &central).unwrap().m()).collect();
    assert!(m.windows(2).all(|w| w[0] <= w[1]), "{m:?}");
}

#[test]
fn grid_faces_sit_on_the_face_lattice() {
    let g = symmetric(20);
    let grid = facet_grid(&g, &FacetSpec::new(-0.3, -0.2, 0.3, 0.25, 0.5).unwrap()).unwrap();
    assert_eq!(grid.faces.len(), grid.positions.len());
    for (f, p) in grid.faces.iter().zip(&grid.positions) {
        assert_eq!(g.face_position(*f), *p);
        assert_eq!(p.x.rem_euclid(2), 0);
        assert_eq!(p.y.rem_euclid(2), 0);
    }
}

#[test]
fn tiny_rectangle_gives_an_empty_grid() {
    let spec = FacetSpec::new(0.0001, 0.0001, 0.0002, 0.0002, 0.5).unwrap();
    assert!(matches!(facet_grid(&symmetric(2), &spec), Err(Error::EmptyGrid(_))));
}

#[test]
fn mesh_exponent_must_be_below_one() {
    assert!(FacetSpec::new(-0.1, -0.1, 0.1, 0.1, 1.0).is_err());
    assert!(FacetSpec::new(-0.1, -0.1, 0.1, 0.1, 0.0).is_err());
    assert!(FacetSpec::new(-0.1, -0.1, 0.1, 0.1, 0.999).is_ok());
}

#[test]
fn exact_centring_is_unbiased_and_sampler_matches_the_pmf() {
    let g = symmetric(1);
    let grid = facet_grid(&g, &FacetSpec::new(-0.6, -0.6, 0.6, 0.6, 0.5).unwrap()).unwrap();
    assert!(grid.m() > 1);
    let grids = [grid.clone()];
    let means = exact_grid_means(&g, &grids).unwrap();
    let base = g.default_base_face();
    let exact = enumerate_matchings(&g, 4).unwrap();
    let total: f64 = exact.iter().map(|(_, w)| w).sum();
    let heights = |m: &Matching| -> GridHeights {
        let h = height_function(&g, m, base).unwrap();
        vec![grid.faces.iter().map(|&f| h.get(f) as f64).collect()]
    };
    let all: Vec<GridHeights> = exact.iter().map(|(m, _)| heights(m)).collect();
    let z = discrete_component(&all, &grids, &Centering::Exact(means.clone())).unwrap();
    let ez: f64 = z.column(0).iter().zip(&exact).map(|(v, (_, w))| v * w).sum::<f64>() / total;
    assert!(ez.abs() < 1e-12, "E[Z] = {ez}");

    let key = |v: f64| (v * grid.m() as f64).round() as i64;
    let mut pmf: HashMap<i64, f64> = HashMap::new();
    for (v, (_, w)) in z.column(0).iter().zip(&exact) {
        *pmf.entry(key(*v)).or_default() += w / total;
    }
    let draws = 50_000;
    let sampler = Sampler::new(g.clone()).unwrap();
    let batch = sampler.sample_batch(5, draws, |_, m| heights(&m));
    let zs = discrete_component(&batch.items, &grids, &Centering::Exact(means)).unwrap();
    let mut counts: HashMap<i64, usize> = HashMap::new();
    for v in zs.column(0) {
        let k = key(v);
        assert!(pmf.contains_key(&k), "value {v} has zero probability");
        *counts.entry(k).or_default() += 1;
    }
    let stat: f64 = pmf
        .iter()
        .map(|(k, p)| {
            let e = draws as f64 * p;
            (*counts.get(k).unwrap_or(&0) as f64 - e).powi(2) / e
        })
        .sum();
    let p = chi_square_sf(stat, pmf.len() - 1);
    assert!(p > 1e-3, "p = {p}");
}

#[test]
fn probe_rejects_repeated_faces() {
    let g = symmetric(2);
    let f = g.default_base_face();
    assert!(height_moment_probe(&g, &[f, f], &[vec![0.0, 0.0], vec![1.0, 1.0]], 0).is_err());
    assert!(height_moment_probe(&g, &[f], &[vec![0.0]], 0).is_err());
}

#[test]
fn height_variance_grows_in_the_rough_region() {
    let mut variances = Vec::new();
    for order in [16usize, 128] {
        let g = AztecGraph::with_order(order, WeightScheme::uniform(1, 1)).unwrap();
        let centre = g.face_at(Point::new(order as i64, order as i64)).unwrap();
        let base = g.default_base_face();
        let sampler = Sampler::new(g.clone()).unwrap();
        let batch = sampler.sample_batch(9, 2000, |_, m| vec![height_function(&g, &m, base).unwrap().get(centre) as f64]);
        let r = height_moment_probe(&g, &[centre], &batch.items, 1).unwrap();
        variances.push(r.covariance[0][0]);
    }
    // Roughly ln(n) / (2 pi^2) in these units: about 0.1 between the two orders.
    assert!(variances[1] - variances[0] > 0.05, "{variances:?}");
}
