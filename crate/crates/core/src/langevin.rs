//! Projected Langevin baseline: a gradient step plus Gaussian noise,
//! clamped back into the domain. Biased at any finite step size; used
//! only as a comparison sampler.

use rand_distr::StandardNormal;

use crate::chain::{BatchMeta, SampleBatch};
use crate::error::{Error, Result};
use crate::potential::{DomainSet, Potential};
use crate::rng::{rng_stream, ChainRng};

/// Clamp nudge keeping projected points strictly interior.
const INTERIOR_NUDGE: f64 = 1e-12;

/// `x' = proj_D(x - eta * grad U(x) + sqrt(2 eta) * xi)` with per-coordinate
/// clamping for interval/orthant/cube products.
pub fn projected_langevin_step(
    p: &Potential,
    domain: &DomainSet,
    x: &[f64],
    eta: f64,
    rng: &mut ChainRng,
) -> Result<Vec<f64>> {
    if !(eta > 0.0) {
        return Err(Error::InvalidArgument("step size must be positive"));
    }
    if !domain.contains(x) {
        return Err(Error::DomainViolation);
    }
    let g = p.gradient(x)?;
    let scale = (2.0 * eta).sqrt();
    let mut next = Vec::with_capacity(x.len());
    for i in 0..x.len() {
        let xi: f64 = rng.sample(StandardNormal);
        let mut c = x[i] - eta * g[i] + scale * xi;
        let (lo, hi) = domain.coordinate_bounds(i);
        if c <= lo {
            c = lo + INTERIOR_NUDGE;
        }
        if c >= hi {
            c = hi - INTERIOR_NUDGE;
        }
        next.push(c);
    }
    Ok(next)
}

/// Default step size when none is supplied.
pub fn default_step_size(dim: usize) -> f64 {
    1.0 / (dim * dim) as f64
}

pub fn run_langevin(
    p: &Potential,
    steps: usize,
    eta: f64,
    seed: u64,
    x0: &[f64],
) -> Result<SampleBatch> {
    run_langevin_stream(p, steps, eta, seed, 0, x0)
}

pub fn run_langevin_stream(
    p: &Potential,
    steps: usize,
    eta: f64,
    seed: u64,
    stream: u64,
    x0: &[f64],
) -> Result<SampleBatch> {
    let start = std::time::Instant::now();
    let mut rng = rng_stream(seed, stream);
    let mut batch = SampleBatch::with_capacity(
        p.dim(),
        steps,
        BatchMeta {
            seed,
            target_id: String::new(),
            sampler_id: "langevin".into(),
            wall_secs: 0.0,
        },
    );
    let mut x = x0.to_vec();
    for _ in 0..steps {
        x = projected_langevin_step(p, p.domain(), &x, eta, &mut rng)?;
        batch.push_row(&x);
    }
    batch.meta.wall_secs = start.elapsed().as_secs_f64();
    Ok(batch)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{make_gaussian, make_truncated_gaussian};
    use crate::rng::rng_from_seed;

    #[test]
    fn zero_gradient_zero_noise_is_identity() {
        // flat potential, eta tiny so the noise term dominates nothing:
        // instead drive the noise to zero by seeding and checking drift form
        let p = Potential::new(DomainSet::full(2), |_| 0.0, |_| vec![0.0, 0.0], true);
        let mut rng = rng_from_seed(1);
        let x = vec![0.3, -0.7];
        let next = projected_langevin_step(&p, p.domain(), &x, 1e-30, &mut rng).unwrap();
        for (a, b) in x.iter().zip(next.iter()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn escapees_are_clamped_inside() {
        let t = make_truncated_gaussian(0.0, 1.0, 1.0, 3.0).unwrap();
        let mut rng = rng_from_seed(7);
        let mut x = vec![1.5];
        for _ in 0..5000 {
            x = projected_langevin_step(&t.potential, t.potential.domain(), &x, 0.05, &mut rng)
                .unwrap();
            assert!(x[0] > 1.0 && x[0] < 3.0);
        }
    }

    #[test]
    fn gaussian_long_run_roughly_correct() {
        let t = make_gaussian(0.0, 1.0).unwrap();
        let batch = run_langevin(&t.potential, 100_000, 0.01, 11, &[0.0]).unwrap();
        let d = crate::diagnostics::ks_distance(&batch.column(0), crate::special::normal_cdf)
            .unwrap();
        assert!(d < 0.05, "KS {d}");
    }
}
