//! First-arrival-time solver.
//!
//! Along a line section the event rate is the positive part of the
//! directional derivative, so the integrated rate over `[0, t]` equals the
//! sum of the increments of the potential over its ascending stretches.
//! That identity turns the arrival equation `-ln V = integral of rate`
//! into one monotone root-find per ascending segment, with no quadrature.

use crate::error::{Error, Result};
use crate::potential::LineSection;

/// Number of probe points per bracket when scanning for slope sign changes.
const PROBES: usize = 64;
/// Bracket-doubling cap for unbounded rays; 2^60 is around 1e18.
const MAX_DOUBLINGS: u32 = 60;
const MAX_BISECT: usize = 200;

fn sign_of(s: f64) -> i8 {
    if s > 0.0 {
        1
    } else if s < 0.0 {
        -1
    } else {
        0
    }
}

/// Partition of `[0, horizon]` into maximal stretches of constant slope
/// sign, with the potential value and accumulated rate mass cached at
/// every breakpoint.
#[derive(Clone, Debug)]
pub struct MonotoneSegmentation {
    /// `t_0 = 0 < t_1 < ... <= horizon`, both ends included.
    breakpoints: Vec<f64>,
    /// Slope sign on each open segment `(t_i, t_{i+1})`.
    signs: Vec<i8>,
    /// Potential value at each breakpoint.
    values: Vec<f64>,
    /// Integrated rate at each breakpoint.
    cum_mass: Vec<f64>,
    horizon: f64,
    /// Set when doubling the probe resolution changed the picture, i.e.
    /// the slope may oscillate faster than the scan can resolve.
    pub resolution_warning: bool,
}

impl MonotoneSegmentation {
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// Interior breakpoints, i.e. the stationary points found in `(0, horizon)`.
    pub fn interior_breakpoints(&self) -> &[f64] {
        let n = self.breakpoints.len();
        &self.breakpoints[1..n - 1]
    }

    /// Integrated rate over the whole bracket.
    pub fn total_mass(&self) -> f64 {
        *self.cum_mass.last().unwrap()
    }
}

/// Outcome of the arrival equation on one line section.
#[derive(Clone, Copy, Debug)]
pub struct ArrivalResult {
    /// First time the integrated rate reaches the threshold, or the wall
    /// time when it never does on a bounded ray.
    pub tau: f64,
    /// Integrated rate at `tau`.
    pub total_mass_consumed: f64,
    /// True when `tau` was set to the wall because the rate mass ran out.
    pub clamped: bool,
}

/// Bisection for the sign boundary of `slope` inside `(lo, hi)` where the
/// signs at the ends differ; `target` is the sign at `lo`.
fn refine_crossing(line: &LineSection, mut lo: f64, mut hi: f64, lo_sign: i8) -> f64 {
    let tol = 1e-12 * (1.0 + hi.abs());
    for _ in 0..MAX_BISECT {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if sign_of(line.slope(mid)) == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn scan_breakpoints(line: &LineSection, horizon: f64, n_probes: usize) -> Vec<f64> {
    // Uniform probes plus a geometric cluster near zero, so structure close
    // to the start of short brackets is not missed.
    let n_uniform = n_probes / 2;
    let mut ts: Vec<f64> = (0..=n_uniform)
        .map(|j| horizon * j as f64 / n_uniform as f64)
        .collect();
    let mut frac = 0.5;
    for _ in 0..(n_probes - n_uniform) {
        ts.push(horizon * frac);
        frac *= 0.5;
    }
    ts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ts.dedup();

    let signs: Vec<i8> = ts.iter().map(|&t| sign_of(line.slope(t))).collect();

    let mut breaks = Vec::new();
    let mut i = 0;
    while i + 1 < ts.len() {
        // find the next index where the sign run changes
        let mut j = i + 1;
        while j < ts.len() && signs[j] == signs[i] {
            j += 1;
        }
        if j == ts.len() {
            break;
        }
        let b = if signs[i] != 0 && signs[j] != 0 {
            refine_crossing(line, ts[j - 1], ts[j], signs[i])
        } else {
            // boundary of a flat stretch; bisect on "still in the run at ts[j-1]"
            refine_crossing(line, ts[j - 1], ts[j], signs[j - 1])
        };
        breaks.push(b);
        i = j;
    }
    breaks
}

/// Locate the slope sign changes of `line` on `[0, search_limit]`.
pub fn find_segmentation(line: &LineSection, search_limit: f64) -> Result<MonotoneSegmentation> {
    if !(search_limit > 0.0) || search_limit > line.t_max() {
        return Err(Error::InvalidArgument(
            "search limit must be positive and within the ray range",
        ));
    }
    let coarse = scan_breakpoints(line, search_limit, PROBES);
    let fine = scan_breakpoints(line, search_limit, 2 * PROBES);
    let resolution_warning = coarse.len() != fine.len();
    let interior = if resolution_warning { fine } else { coarse };

    let merge_tol = 1e-12 * (1.0 + search_limit);
    let mut breakpoints = vec![0.0];
    for b in interior {
        if b - breakpoints.last().unwrap() > merge_tol && search_limit - b > merge_tol {
            breakpoints.push(b);
        }
    }
    breakpoints.push(search_limit);

    let mut signs = Vec::with_capacity(breakpoints.len() - 1);
    let mut values = Vec::with_capacity(breakpoints.len());
    values.push(line.value(0.0));
    for w in breakpoints.windows(2) {
        signs.push(sign_of(line.slope(0.5 * (w[0] + w[1]))));
        values.push(line.value(w[1]));
    }

    let mut cum_mass = Vec::with_capacity(values.len());
    let mut mass = 0.0;
    cum_mass.push(0.0);
    for (k, &s) in signs.iter().enumerate() {
        if s > 0 {
            mass += (values[k + 1] - values[k]).max(0.0);
        }
        cum_mass.push(mass);
    }

    Ok(MonotoneSegmentation {
        breakpoints,
        signs,
        values,
        cum_mass,
        horizon: search_limit,
        resolution_warning,
    })
}

/// Integrated rate `L(t)`: the sum of positive increments of the potential
/// over the ascending segments of `[0, t]`. Exact for C^1 potentials.
pub fn integrated_rate(line: &LineSection, seg: &MonotoneSegmentation, t: f64) -> Result<f64> {
    if !(0.0..=seg.horizon).contains(&t) {
        return Err(Error::InvalidArgument(
            "time outside the segmented interval",
        ));
    }
    // segment containing t
    let k = match seg
        .breakpoints
        .iter()
        .position(|&b| b >= t)
        .unwrap_or(seg.breakpoints.len() - 1)
    {
        0 => 0,
        idx => idx - 1,
    };
    let mut mass = seg.cum_mass[k];
    if seg.signs.get(k) == Some(&1) {
        mass += (line.value(t) - seg.values[k]).max(0.0);
    }
    Ok(mass)
}

/// Monotone-increasing root solve of `line.value(t) = target` on `[lo, hi]`.
fn invert_value_on_segment(line: &LineSection, mut lo: f64, mut hi: f64, target: f64) -> f64 {
    let tol = 1e-12 * (1.0 + hi.abs());
    for _ in 0..MAX_BISECT {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if line.value(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn crossing_from_segmentation(
    line: &LineSection,
    seg: &MonotoneSegmentation,
    threshold: f64,
) -> ArrivalResult {
    // first breakpoint index whose accumulated mass reaches the threshold
    let j = seg
        .cum_mass
        .iter()
        .position(|&m| m >= threshold)
        .expect("caller ensures total mass reaches threshold");
    if j == 0 {
        return ArrivalResult {
            tau: 0.0,
            total_mass_consumed: 0.0,
            clamped: false,
        };
    }
    let target_value = seg.values[j - 1] + (threshold - seg.cum_mass[j - 1]);
    let tau = invert_value_on_segment(
        line,
        seg.breakpoints[j - 1],
        seg.breakpoints[j],
        target_value,
    );
    let mass = integrated_rate(line, seg, tau).unwrap_or(threshold);
    ArrivalResult {
        tau,
        total_mass_consumed: mass,
        clamped: false,
    }
}

/// Solve `tau = min{ t >= 0 : threshold <= L(t) }` with `threshold = -ln V`.
///
/// On a bounded ray whose total rate mass stays below the threshold the
/// result clamps to the wall time. On an unbounded ray the bracket doubles
/// until the mass crosses the threshold; a potential that never climbs
/// enough is reported as divergent.
pub fn solve_arrival(line: &LineSection, threshold: f64) -> Result<ArrivalResult> {
    if !(threshold >= 0.0) {
        return Err(Error::InvalidArgument("threshold must be nonnegative"));
    }
    if threshold == 0.0 {
        return Ok(ArrivalResult {
            tau: 0.0,
            total_mass_consumed: 0.0,
            clamped: false,
        });
    }
    let t_max = line.t_max();
    if t_max.is_finite() {
        let seg = find_segmentation(line, t_max)?;
        if seg.total_mass() >= threshold {
            Ok(crossing_from_segmentation(line, &seg, threshold))
        } else {
            Ok(ArrivalResult {
                tau: t_max,
                total_mass_consumed: seg.total_mass(),
                clamped: true,
            })
        }
    } else {
        let mut hi = 1.0f64;
        for _ in 0..=MAX_DOUBLINGS {
            let seg = find_segmentation(line, hi)?;
            if seg.total_mass() >= threshold {
                return Ok(crossing_from_segmentation(line, &seg, threshold));
            }
            hi *= 2.0;
        }
        Err(Error::Divergence(MAX_DOUBLINGS))
    }
}
