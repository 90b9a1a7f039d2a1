//! Discrete-component statistics of sampled tilings and their comparison
//! with the discrete Gaussian predicted by the spectral curve.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kasteleyn::{exact_mean_height, inverse_kasteleyn, KasteleynMatrix};
use crate::lattice::coords::{first_label_at_or_after, macroscopic};
use crate::lattice::{AztecGraph, FaceId, HeightPlan, Point, WeightScheme};
use crate::sampler::Sampler;
use crate::spectral::{discrete_gaussian_moments, discrete_gaussian_pmf, predicted_z_distribution, DiscreteGaussianParams};
use crate::stats::{bootstrap_se, Moments};

pub const DEFAULT_MESH_EXPONENT: f64 = 15.0 / 16.0;
pub const DEFAULT_HALF_WIDTH: f64 = 0.15;
pub const BOOTSTRAP_RESAMPLES: usize = 200;
/// Relative variance tolerance of the experiment verdict.
pub const RELATIVE_TOLERANCE: f64 = 0.15;
/// Standard-error multiple of the experiment verdict.
pub const SE_MULTIPLE: f64 = 3.0;

/// A macroscopic rectangle `[xi0, xi1] x [eta0, eta1]` and the exponent of
/// the mesh spacing `N^exponent`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FacetSpec {
    pub xi0: f64,
    pub eta0: f64,
    pub xi1: f64,
    pub eta1: f64,
    pub mesh_exponent: f64,
}

impl FacetSpec {
    pub fn new(xi0: f64, eta0: f64, xi1: f64, eta1: f64, mesh_exponent: f64) -> Result<Self> {
        let inside = |a: f64, b: f64| -1.0 < a && a <= b && b < 1.0;
        if !(inside(xi0, xi1) && inside(eta0, eta1)) {
            return Err(Error::InvalidArgument(format!(
                "facet rectangle [{xi0}, {xi1}] x [{eta0}, {eta1}] must lie strictly inside [-1, 1]^2"
            )));
        }
        if !(mesh_exponent > 0.0 && mesh_exponent < 1.0) {
            return Err(Error::InvalidArgument(format!("mesh exponent {mesh_exponent} must lie in (0, 1)")));
        }
        Ok(FacetSpec { xi0, eta0, xi1, eta1, mesh_exponent })
    }

    /// The centred square of half-width 0.15 with the default exponent.
    pub fn central() -> Self {
        let h = DEFAULT_HALF_WIDTH;
        FacetSpec { xi0: -h, eta0: -h, xi1: h, eta1: h, mesh_exponent: DEFAULT_MESH_EXPONENT }
    }

    /// Parses `"xi0,eta0,xi1,eta1"`.
    pub fn parse(text: &str, mesh_exponent: f64) -> Result<Self> {
        let v: Vec<f64> = text
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::InvalidArgument(format!("facet {text:?}: {e}")))?;
        match v[..] {
            [a, b, c, d] => Self::new(a, b, c, d, mesh_exponent),
            _ => Err(Error::InvalidArgument(format!("facet {text:?} needs four numbers"))),
        }
    }
}

/// The faces sampled inside one facet rectangle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FacetGrid {
    pub spec: FacetSpec,
    pub faces: Vec<FaceId>,
    pub positions: Vec<Point>,
}

impl FacetGrid {
    pub fn m(&self) -> usize {
        self.faces.len()
    }
}

/// Faces at `(2X0 + 2 floor(s N^e), 2Y0 + 2 floor(p N^e) + 2)`, where
/// `(2X0, 2Y0 + 2)` is the first face at or after the lower-left corner and
/// `s, p = 0, 1, ...` run while the face stays inside the rectangle.
///
/// `N` is the number of fundamental domains along a side, `order / (k l)`.
pub fn facet_grid(graph: &AztecGraph, spec: &FacetSpec) -> Result<FacetGrid> {
    let spec = FacetSpec::new(spec.xi0, spec.eta0, spec.xi1, spec.eta1, spec.mesh_exponent)?;
    let order = graph.order();
    let w = graph.weights();
    let n = order as f64 / (w.k() * w.l()) as f64;
    let spacing = n.powf(spec.mesh_exponent).max(1.0);
    let x0 = first_label_at_or_after(spec.xi0, order);
    let y0 = first_label_at_or_after(spec.eta0, order);
    let steps = |limit: f64, origin: i64, axis: usize| -> Vec<i64> {
        let mut out = Vec::new();
        for s in 0.. {
            let label = origin + (s as f64 * spacing).floor() as i64;
            let p = Point::new(2 * label, 2 * label + 2);
            let c = macroscopic(p, order);
            if [c.0, c.1][axis] > limit + 1e-12 {
                break;
            }
            out.push(label);
        }
        out
    };
    let xs = steps(spec.xi1, x0, 0);
    let ys = steps(spec.eta1, y0, 1);
    let mut faces = Vec::new();
    let mut positions = Vec::new();
    for &y in &ys {
        for &x in &xs {
            let p = Point::new(2 * x, 2 * y + 2);
            let f = graph
                .face_at(p)
                .ok_or_else(|| Error::EmptyGrid(format!("grid point {p:?} is not a face of the order-{order} diamond")))?;
            faces.push(f);
            positions.push(p);
        }
    }
    if faces.is_empty() {
        return Err(Error::EmptyGrid(format!(
            "no face of the order-{order} diamond lies in [{}, {}] x [{}, {}]",
            spec.xi0, spec.xi1, spec.eta0, spec.eta1
        )));
    }
    Ok(FacetGrid { spec, faces, positions })
}

/// Heights of one matching at the faces of each grid.
pub type GridHeights = Vec<Vec<f64>>;

/// How `E[h]` is estimated when centring.
#[derive(Clone, Debug, PartialEq)]
pub enum Centering {
    /// Per-face mean over the batch.
    Pooled,
    /// Exact means, one vector per grid.
    Exact(Vec<Vec<f64>>),
}

/// Exact `E[h]` at the grid faces from the inverse Kasteleyn matrix; only
/// affordable for small diamonds.
pub fn exact_grid_means(graph: &AztecGraph, grids: &[FacetGrid]) -> Result<Vec<Vec<f64>>> {
    let kinv = inverse_kasteleyn(&KasteleynMatrix::build(graph))?;
    Ok(grids.iter().map(|g| g.faces.iter().map(|&f| exact_mean_height(graph, &kinv, f)).collect()).collect())
}

/// Per-sample discrete components `Z_j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZReadings {
    /// Grid size per facet.
    pub m: Vec<usize>,
    /// `values[sample][facet]`.
    pub values: Vec<Vec<f64>>,
}

impl ZReadings {
    pub fn column(&self, facet: usize) -> Vec<f64> {
        self.values.iter().map(|v| v[facet]).collect()
    }

    pub fn write_csv(&self, out: &mut impl Write) -> Result<()> {
        let names: Vec<String> = (1..=self.m.len()).map(|j| format!("Z_{j}")).collect();
        writeln!(out, "sample,{}", names.join(","))?;
        for (i, row) in self.values.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(out, "{i},{}", cells.join(","))?;
        }
        Ok(())
    }
}

/// `Z_j = (1/M) sum_r (h(f_r) - E[h(f_r)])` for every sample.
pub fn discrete_component(samples: &[GridHeights], grids: &[FacetGrid], centering: &Centering) -> Result<ZReadings> {
    for s in samples {
        if s.len() != grids.len() || s.iter().zip(grids).any(|(h, g)| h.len() != g.m()) {
            return Err(Error::InvalidArgument("sample heights do not match the grids".into()));
        }
    }
    let means = match centering {
        Centering::Pooled => {
            if samples.len() < 2 {
                return Err(Error::InvalidArgument("pooled centring needs at least two samples".into()));
            }
            let n = samples.len() as f64;
            grids
                .iter()
                .enumerate()
                .map(|(j, g)| (0..g.m()).map(|r| samples.iter().map(|s| s[j][r]).sum::<f64>() / n).collect())
                .collect()
        }
        Centering::Exact(means) => {
            if means.len() != grids.len() || means.iter().zip(grids).any(|(m, g)| m.len() != g.m()) {
                return Err(Error::InvalidArgument("exact means do not match the grids".into()));
            }
            means.clone()
        }
    };
    let values = samples
        .iter()
        .map(|s| {
            s.iter()
                .zip(&means)
                .map(|(h, mu)| h.iter().zip(mu).map(|(x, m)| x - m).sum::<f64>() / h.len() as f64)
                .collect()
        })
        .collect();
    Ok(ZReadings { m: grids.iter().map(FacetGrid::m).collect(), values })
}

/// Centred moments of a one-dimensional discrete Gaussian.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PredictedMoments {
    pub tau_im: f64,
    pub shift: f64,
    pub mean: f64,
    pub variance: f64,
    pub skewness: f64,
    pub excess_kurtosis: f64,
}

/// Moments of a genus-1 law: mean and variance from the theta derivatives,
/// third and fourth central moments by summing the pmf.
pub fn predicted_moments(params: &DiscreteGaussianParams) -> Result<PredictedMoments> {
    if params.genus() != 1 {
        return Err(Error::NoPrediction("centred moments are reported for genus 1 only".into()));
    }
    let d = discrete_gaussian_moments(params);
    let (mean, variance) = (d.mean[0], d.covariance[0][0]);
    let r = 10i64.max((8.0 * variance.sqrt()).ceil() as i64);
    let c = mean.round() as i64;
    let (mut m3, mut m4) = (0.0, 0.0);
    for n in c - r..=c + r {
        let p = discrete_gaussian_pmf(params, &[n]);
        let x = n as f64 - mean;
        m3 += p * x.powi(3);
        m4 += p * x.powi(4);
    }
    Ok(PredictedMoments {
        tau_im: params.tau()[(0, 0)].im,
        shift: params.shift()[0],
        mean,
        variance,
        skewness: m3 / variance.powf(1.5),
        excess_kurtosis: m4 / (variance * variance) - 3.0,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalMoments {
    pub count: usize,
    pub mean: f64,
    pub variance: f64,
    pub variance_se: f64,
    pub skewness: f64,
    pub skewness_se: f64,
    pub excess_kurtosis: f64,
    pub excess_kurtosis_se: f64,
}

impl EmpiricalMoments {
    pub fn of(xs: &[f64], seed: u64) -> Self {
        let m = Moments::of(xs);
        EmpiricalMoments {
            count: xs.len(),
            mean: m.mean,
            variance: m.variance,
            variance_se: bootstrap_se(xs, BOOTSTRAP_RESAMPLES, seed, |s| Moments::of(s).variance),
            skewness: m.skewness,
            skewness_se: bootstrap_se(xs, BOOTSTRAP_RESAMPLES, seed ^ 1, |s| Moments::of(s).skewness),
            excess_kurtosis: m.excess_kurtosis,
            excess_kurtosis_se: bootstrap_se(xs, BOOTSTRAP_RESAMPLES, seed ^ 2, |s| Moments::of(s).excess_kurtosis),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub passed: bool,
    pub observed: f64,
    pub expected: f64,
    pub tolerance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentParams {
    pub weights: WeightScheme,
    pub periods: usize,
    pub order: usize,
    pub seed: u64,
    pub count: usize,
    pub facets: Vec<FacetSpec>,
    pub bootstrap_resamples: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FacetResult {
    pub spec: FacetSpec,
    pub m: usize,
    pub faces: Vec<Point>,
    pub empirical: EmpiricalMoments,
    pub variance_gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub version: String,
    pub params: ExperimentParams,
    pub predicted: PredictedMoments,
    pub facets: Vec<FacetResult>,
    pub verdicts: Vec<Verdict>,
    pub passed: bool,
    #[serde(skip)]
    pub z: Option<ZReadings>,
}

/// Samples `count` tilings of the order-`k l N` diamond, records the
/// pooled-centred discrete component on each facet grid and compares its
/// variance with the predicted discrete Gaussian.
///
/// The variance verdict passes when the gap is at most
/// `max(3 bootstrap SE, 15 %)` of the prediction.
pub fn run_experiment(weights: &WeightScheme, periods: usize, facets: &[FacetSpec], count: usize, seed: u64) -> Result<ExperimentReport> {
    let a = weights
        .symmetric_parameter()
        .ok_or_else(|| Error::NoPrediction("a prediction exists only for the symmetric 2x2 family".into()))?;
    let predicted = predicted_moments(&predicted_z_distribution(a)?)?;
    if count < 2 {
        return Err(Error::InvalidArgument("an experiment needs at least two samples".into()));
    }
    if facets.is_empty() {
        return Err(Error::InvalidArgument("no facets given".into()));
    }
    let graph = AztecGraph::new(periods, weights.clone())?;
    let grids = facets.iter().map(|f| facet_grid(&graph, f)).collect::<Result<Vec<_>>>()?;
    let plan = HeightPlan::new(&graph, graph.default_base_face());
    let sampler = Sampler::new(graph)?;
    let batch = sampler.sample_batch(seed, count, |_, m| -> Result<GridHeights> {
        let h = plan.heights(&m)?;
        Ok(grids.iter().map(|g| g.faces.iter().map(|&f| h.get(f) as f64).collect()).collect())
    });
    let samples = batch.items.into_iter().collect::<Result<Vec<_>>>()?;
    let z = discrete_component(&samples, &grids, &Centering::Pooled)?;
    let mut results = Vec::new();
    let mut verdicts = Vec::new();
    for (j, g) in grids.iter().enumerate() {
        let emp = EmpiricalMoments::of(&z.column(j), seed ^ 0xb007_57ab ^ j as u64);
        let gap = (emp.variance - predicted.variance).abs();
        let tol = (SE_MULTIPLE * emp.variance_se).max(RELATIVE_TOLERANCE * predicted.variance);
        verdicts.push(Verdict {
            name: format!("variance of Z_{}", j + 1),
            passed: gap <= tol,
            observed: emp.variance,
            expected: predicted.variance,
            tolerance: tol,
        });
        results.push(FacetResult { spec: g.spec, m: g.m(), faces: g.positions.clone(), empirical: emp, variance_gap: gap });
    }
    Ok(ExperimentReport {
        version: crate::VERSION.to_string(),
        params: ExperimentParams {
            weights: weights.clone(),
            periods,
            order: sampler.graph().order(),
            seed,
            count,
            facets: facets.to_vec(),
            bootstrap_resamples: BOOTSTRAP_RESAMPLES,
        },
        predicted,
        facets: results,
        passed: verdicts.iter().all(|v| v.passed),
        verdicts,
        z: Some(z),
    })
}

/// Empirical centred joint moments of heights at a few faces.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub faces: Vec<Point>,
    /// `E[prod_i hbar(f_i)]` with pooled centring.
    pub product_moment: f64,
    pub product_moment_se: f64,
    pub covariance: Vec<Vec<f64>>,
}

/// Centred moments of `heights[sample][i]`, the height at `faces[i]`.
pub fn height_moment_probe(graph: &AztecGraph, faces: &[FaceId], heights: &[Vec<f64>], seed: u64) -> Result<ProbeReport> {
    if faces.is_empty() {
        return Err(Error::InvalidArgument("no faces given".into()));
    }
    for (i, f) in faces.iter().enumerate() {
        if faces[..i].contains(f) {
            return Err(Error::InvalidArgument(format!("face {:?} appears twice", graph.face_position(*f))));
        }
    }
    if heights.len() < 2 || heights.iter().any(|h| h.len() != faces.len()) {
        return Err(Error::InvalidArgument("need at least two samples with one height per face".into()));
    }
    let n = heights.len() as f64;
    let k = faces.len();
    let means: Vec<f64> = (0..k).map(|i| heights.iter().map(|h| h[i]).sum::<f64>() / n).collect();
    let centred: Vec<Vec<f64>> = heights.iter().map(|h| h.iter().zip(&means).map(|(x, m)| x - m).collect()).collect();
    let products: Vec<f64> = centred.iter().map(|c| c.iter().product()).collect();
    let product_moment = products.iter().sum::<f64>() / n;
    let covariance = (0..k)
        .map(|i| (0..k).map(|j| centred.iter().map(|c| c[i] * c[j]).sum::<f64>() / (n - 1.0)).collect())
        .collect();
    Ok(ProbeReport {
        faces: faces.iter().map(|&f| graph.face_position(f)).collect(),
        product_moment,
        product_moment_se: bootstrap_se(&products, BOOTSTRAP_RESAMPLES, seed, |s| Moments::of(s).mean),
        covariance,
    })
}
