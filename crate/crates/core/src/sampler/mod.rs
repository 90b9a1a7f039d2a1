//! Exact sampling by generalized domino shuffling.
//!
//! The diamond of order `m` is split into `m^2` cells, one per odd face
//! `(2ci+1, 2cj+1)`. Each cell owns the four edges around it, named by the
//! vertices they join:
//!
//! ```text
//!        N (white)
//!   WN /   \ NE
//!  W (black) E (black)
//!   SW \   / ES
//!        S (white)
//! ```
//!
//! Urban renewal on every cell turns the order-`m` weights into order-`m-1`
//! weights whose cells are the interior even faces. Sampling runs the other
//! way: start from the empty order-0 diamond and grow one level at a time by
//! destruction, sliding and creation.

mod shuffle;
mod tables;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::lattice::{AztecGraph, Matching};

pub use shuffle::ShuffleState;
pub use tables::{precompute_weight_tables, CellEdge, WeightTables};

/// Independent random stream for sample `index` of a batch seeded by `seed`.
pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// A graph with its precomputed shuffling tables.
#[derive(Clone, Debug)]
pub struct Sampler {
    graph: AztecGraph,
    tables: WeightTables,
}

impl Sampler {
    pub fn new(graph: AztecGraph) -> Result<Self> {
        let tables = precompute_weight_tables(&graph)?;
        Ok(Sampler { graph, tables })
    }

    pub fn graph(&self) -> &AztecGraph {
        &self.graph
    }

    pub fn tables(&self) -> &WeightTables {
        &self.tables
    }

    /// One matching drawn with probability proportional to its weight.
    pub fn sample(&self, rng: &mut impl rand::Rng) -> Matching {
        let mut state = ShuffleState::empty();
        while state.order() < self.graph.order() {
            state.grow(&self.tables, rng);
        }
        state.into_matching(&self.graph)
    }

    /// Sample `index` of the batch keyed by `seed`.
    pub fn sample_indexed(&self, seed: u64, index: u64) -> Matching {
        self.sample(&mut stream(seed, index))
    }

    /// `count` samples mapped through `reduce`, in parallel. The result is
    /// ordered by sample index and independent of the thread count.
    pub fn sample_batch<T, F>(&self, seed: u64, count: usize, reduce: F) -> SampleBatch<T>
    where
        T: Send,
        F: Fn(u64, Matching) -> T + Sync,
    {
        let items = (0..count as u64)
            .into_par_iter()
            .map(|i| reduce(i, self.sample_indexed(seed, i)))
            .collect();
        SampleBatch { seed, count, order: self.graph.order(), items }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SampleBatch<T> {
    pub seed: u64,
    pub count: usize,
    pub order: usize,
    pub items: Vec<T>,
}

/// Per-observable count, mean, variance and standard error of the mean.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ObservableSummary {
    pub name: String,
    pub count: usize,
    pub mean: f64,
    pub variance: f64,
    pub std_error: f64,
}

impl SampleBatch<Vec<f64>> {
    /// One CSV row per sample: index then the observables.
    pub fn write_csv(&self, names: &[&str], mut out: impl std::io::Write) -> std::io::Result<()> {
        writeln!(out, "sample,{}", names.join(","))?;
        for (i, row) in self.items.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
            writeln!(out, "{i},{}", cells.join(","))?;
        }
        Ok(())
    }

    pub fn summary(&self, names: &[&str]) -> Vec<ObservableSummary> {
        names
            .iter()
            .enumerate()
            .map(|(j, name)| {
                let xs: Vec<f64> = self.items.iter().map(|r| r[j]).collect();
                let m = crate::stats::Moments::of(&xs);
                ObservableSummary {
                    name: name.to_string(),
                    count: xs.len(),
                    mean: m.mean,
                    variance: m.variance,
                    std_error: (m.variance / xs.len() as f64).sqrt(),
                }
            })
            .collect()
    }
}
