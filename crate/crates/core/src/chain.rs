//! Chain state and collected sample batches.

use crate::error::{Error, Result};
use crate::potential::Potential;
use crate::rng::{rng_stream, ChainRng};

/// Mutable state of one chain: current position plus its private RNG
/// stream. A `(seed, stream)` pair determines the trajectory exactly.
#[derive(Clone, Debug)]
pub struct ChainState {
    pub position: Vec<f64>,
    pub rng: ChainRng,
    pub step_count: u64,
}

impl ChainState {
    pub fn new(p: &Potential, x0: &[f64], seed: u64) -> Result<Self> {
        Self::with_stream(p, x0, seed, 0)
    }

    pub fn with_stream(p: &Potential, x0: &[f64], seed: u64, stream: u64) -> Result<Self> {
        if !p.domain().contains(x0) {
            return Err(Error::DomainViolation);
        }
        Ok(ChainState {
            position: x0.to_vec(),
            rng: rng_stream(seed, stream),
            step_count: 0,
        })
    }
}

/// Provenance of a batch.
#[derive(Clone, Debug, Default)]
pub struct BatchMeta {
    pub seed: u64,
    pub target_id: String,
    pub sampler_id: String,
    pub wall_secs: f64,
}

/// Row-major matrix of collected positions, one row per kept step.
#[derive(Clone, Debug)]
pub struct SampleBatch {
    data: Vec<f64>,
    dim: usize,
    pub meta: BatchMeta,
}

impl SampleBatch {
    pub fn with_capacity(dim: usize, steps: usize, meta: BatchMeta) -> Self {
        SampleBatch {
            data: Vec::with_capacity(dim * steps),
            dim,
            meta,
        }
    }

    pub fn push_row(&mut self, row: &[f64]) {
        debug_assert_eq!(row.len(), self.dim);
        self.data.extend_from_slice(row);
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_steps(&self) -> usize {
        if self.dim == 0 {
            0
        } else {
            self.data.len() / self.dim
        }
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.dim)
    }

    /// Copy of coordinate `j` across all rows.
    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows().map(|r| r[j]).collect()
    }
}
