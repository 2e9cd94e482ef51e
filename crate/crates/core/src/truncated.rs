//! Arrival times for log-concave densities restricted to a set.
//!
//! With `U` convex along the ray the procedure is three steps: clip the
//! ray to the domain, find the minimizer of the potential on the clipped
//! segment, then invert the potential on the ascending side. When the rate
//! mass up to the wall falls short of `-ln V`, the arrival clamps to the
//! wall time.

use crate::arrival::ArrivalResult;
use crate::error::{Error, Result};
use crate::potential::{DomainSet, LineSection};

const MAX_BISECT: usize = 200;
const MAX_DOUBLINGS: u32 = 60;

/// Feasible parameter range of the ray `{x + v t : t >= 0}` inside `D`.
/// `t_min` is 0 for the interior starting points used by the samplers;
/// it is kept in the return value to keep the procedure's shape explicit.
pub fn line_domain_bounds(domain: &DomainSet, x: &[f64], v: &[f64]) -> Result<(f64, f64)> {
    if !domain.contains(x) {
        return Err(Error::DomainViolation);
    }
    Ok((0.0, domain.ray_exit(x, v)))
}

/// Minimizer of a convex potential restriction on `[t_min, t_max]`,
/// found by bisecting the slope sign. Unbounded segments double the
/// search bracket until the slope turns positive.
pub fn argmin_on_segment(line: &LineSection, t_min: f64, t_max: f64) -> Result<f64> {
    if line.slope(t_min) >= 0.0 {
        return Ok(t_min);
    }
    let mut hi = if t_max.is_finite() {
        if line.slope(t_max) <= 0.0 {
            return Ok(t_max);
        }
        t_max
    } else {
        let mut h = (t_min + 1.0).max(1.0);
        let mut doublings = 0;
        while line.slope(h) <= 0.0 {
            h *= 2.0;
            doublings += 1;
            if doublings > MAX_DOUBLINGS {
                return Err(Error::Divergence(MAX_DOUBLINGS));
            }
        }
        h
    };
    let mut lo = t_min;
    let tol = 1e-12 * (1.0 + hi.abs());
    for _ in 0..MAX_BISECT {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if line.slope(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn invert_increasing(line: &LineSection, mut lo: f64, mut hi: f64, target: f64) -> f64 {
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

/// Three-step truncated arrival: minimize on the clipped ray, compare the
/// available potential climb with `-ln V`, then either invert on the
/// ascending side or clamp to the wall.
pub fn solve_truncated_arrival(
    line: &LineSection,
    t_min: f64,
    t_max: f64,
    big_v: f64,
) -> Result<ArrivalResult> {
    if !(big_v > 0.0 && big_v <= 1.0) {
        return Err(Error::InvalidArgument("V must lie in (0, 1]"));
    }
    let threshold = -big_v.ln();
    // V = 1 means zero rate mass is requested; the smallest feasible time is 0
    if threshold == 0.0 {
        return Ok(ArrivalResult {
            tau: 0.0,
            total_mass_consumed: 0.0,
            clamped: false,
        });
    }
    let t_star = argmin_on_segment(line, t_min, t_max)?;
    let base = line.value(t_star);

    if t_max.is_finite() {
        let climb = line.value(t_max) - base;
        if climb > threshold {
            let tau = invert_increasing(line, t_star, t_max, base + threshold);
            Ok(ArrivalResult {
                tau,
                total_mass_consumed: threshold,
                clamped: false,
            })
        } else {
            Ok(ArrivalResult {
                tau: t_max,
                total_mass_consumed: climb.max(0.0),
                clamped: true,
            })
        }
    } else {
        let mut hi = (t_star + 1.0).max(1.0);
        let mut doublings = 0;
        while line.value(hi) - base < threshold {
            hi *= 2.0;
            doublings += 1;
            if doublings > MAX_DOUBLINGS {
                return Err(Error::Divergence(MAX_DOUBLINGS));
            }
        }
        let tau = invert_increasing(line, t_star, hi, base + threshold);
        Ok(ArrivalResult {
            tau,
            total_mass_consumed: threshold,
            clamped: false,
        })
    }
}
