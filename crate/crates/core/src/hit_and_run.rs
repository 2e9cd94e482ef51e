//! The main sampler: draw `(V, v)` uniformly, solve the arrival equation
//! along the line through the current point, move half the arrival time.
//!
//! Log-concave targets route through the truncated three-step solver
//! (which also covers bounded domains via wall clamping); everything else
//! uses the general segmentation solver.

use crate::arrival::{solve_arrival, ArrivalResult};
use crate::chain::{BatchMeta, ChainState, SampleBatch};
use crate::error::{Error, Result};
use crate::potential::{restrict_to_line, sample_unit_sphere, Potential};
use crate::rng::uniform_open_closed;
use crate::truncated::solve_truncated_arrival;

/// Run configuration. `axis_hold` keeps the direction line fixed for that
/// many consecutive steps, flipping only its sign; the hold length is a
/// constant of the run, never adapted to the chain.
#[derive(Clone, Copy, Debug)]
pub struct SamplerConfig {
    pub steps: usize,
    pub seed: u64,
    pub axis_hold: usize,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            steps: 10_000,
            seed: 0,
            axis_hold: 1,
        }
    }
}

fn arrival_along(p: &Potential, x: &[f64], v: &[f64], big_v: f64) -> Result<ArrivalResult> {
    let line = restrict_to_line(p, x, v)?;
    if p.is_log_concave() {
        solve_truncated_arrival(&line, 0.0, line.t_max(), big_v)
    } else {
        solve_arrival(&line, -big_v.ln())
    }
}

/// One move along a given unit direction with a given uniform variate.
pub fn step_along(p: &Potential, state: &mut ChainState, v: &[f64], big_v: f64) -> Result<()> {
    let arrival = arrival_along(p, &state.position, v, big_v)?;
    for (xi, vi) in state.position.iter_mut().zip(v.iter()) {
        *xi += vi * arrival.tau / 2.0;
    }
    state.step_count += 1;
    if !p.domain().contains(&state.position) {
        return Err(Error::Numerical(
            "step left the domain (floating-point underflow at a wall)",
        ));
    }
    Ok(())
}

/// One move, drawing the direction and the uniform variate.
pub fn step(p: &Potential, state: &mut ChainState) -> Result<()> {
    let v = sample_unit_sphere(&mut state.rng, p.dim());
    let big_v = uniform_open_closed(&mut state.rng);
    step_along(p, state, &v, big_v)
}

/// Collect `cfg.steps` positions starting from `x0`.
pub fn run(p: &Potential, cfg: &SamplerConfig, x0: &[f64]) -> Result<SampleBatch> {
    let start = std::time::Instant::now();
    let axis_hold = cfg.axis_hold.max(1);
    let mut state = ChainState::new(p, x0, cfg.seed)?;
    let mut batch = SampleBatch::with_capacity(
        p.dim(),
        cfg.steps,
        BatchMeta {
            seed: cfg.seed,
            target_id: String::new(),
            sampler_id: "irf".into(),
            wall_secs: 0.0,
        },
    );
    let mut held: Vec<f64> = Vec::new();
    for n in 0..cfg.steps {
        if n % axis_hold == 0 {
            held = sample_unit_sphere(&mut state.rng, p.dim());
        }
        let v: Vec<f64> = if axis_hold > 1 {
            use rand::Rng;
            let flip: f64 = state.rng.random();
            let s = if flip < 0.5 { -1.0 } else { 1.0 };
            held.iter().map(|h| s * h).collect()
        } else {
            held.clone()
        };
        let big_v = uniform_open_closed(&mut state.rng);
        step_along(p, &mut state, &v, big_v)?;
        batch.push_row(&state.position);
    }
    batch.meta.wall_secs = start.elapsed().as_secs_f64();
    Ok(batch)
}

/// Default starting point: the domain center where bounded, otherwise a
/// short gradient descent toward the mode.
pub fn default_initial(p: &Potential) -> Vec<f64> {
    let d = p.dim();
    let mut x: Vec<f64> = (0..d)
        .map(|i| {
            let (lo, hi) = p.domain().coordinate_bounds(i);
            match (lo.is_finite(), hi.is_finite()) {
                (true, true) => 0.5 * (lo + hi),
                (true, false) => lo + 1.0,
                (false, true) => hi - 1.0,
                (false, false) => 0.0,
            }
        })
        .collect();
    if p.domain().is_bounded() {
        return x;
    }
    for _ in 0..50 {
        let Ok(g) = p.gradient(&x) else { break };
        let norm: f64 = g.iter().map(|gi| gi * gi).sum::<f64>().sqrt();
        if norm < 1e-10 {
            break;
        }
        let mut eta = 0.5 / (1.0 + norm);
        loop {
            let cand: Vec<f64> = x.iter().zip(g.iter()).map(|(xi, gi)| xi - eta * gi).collect();
            if p.domain().contains(&cand)
                && p.value(&cand).map(|v| v.is_finite()).unwrap_or(false)
            {
                x = cand;
                break;
            }
            eta *= 0.5;
            if eta < 1e-12 {
                return x;
            }
        }
    }
    x
}

/// The transition map `f_{V,v}(x)` of a univariate target tabulated over
/// a `V` grid for both directions; rows are `(V, v, f)`.
pub fn transition_function_surface(
    p: &Potential,
    x: f64,
    n_grid: usize,
) -> Result<Vec<(f64, f64, f64)>> {
    if p.dim() != 1 {
        return Err(Error::InvalidArgument(
            "transition surface is defined for univariate targets",
        ));
    }
    if n_grid == 0 {
        return Err(Error::InvalidArgument("grid must be nonempty"));
    }
    let mut rows = Vec::with_capacity(2 * n_grid);
    for &v in &[-1.0, 1.0] {
        for j in 0..n_grid {
            let big_v = (j + 1) as f64 / n_grid as f64;
            let arrival = arrival_along(p, &[x], &[v], big_v)?;
            rows.push((big_v, v, x + v * arrival.tau / 2.0));
        }
    }
    Ok(rows)
}
