//! Univariate sampler driven by a monotone split of the potential.
//!
//! When `U = U1 + U2` with `U1` increasing and `U2` decreasing, the
//! arrival time has the closed form `U1^{-1}(U1(x) - ln V) - x` going
//! right and `x - U2^{-1}(U2(x) - ln V)` going left, so each step costs
//! one inverse evaluation instead of a root solve over the rate integral.

use std::sync::Arc;

use rand::Rng;

use crate::chain::{BatchMeta, SampleBatch};
use crate::error::{Error, Result};
use crate::rng::{rng_stream, uniform_open_closed, ChainRng};

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Split `U = U1 + U2` on an interval, with optional closed-form inverses
/// and derivatives. Missing inverses fall back to bisection from the
/// current point; missing derivatives to a central difference.
#[derive(Clone)]
pub struct MonotoneDecomposition {
    domain: (f64, f64),
    u1: ScalarFn,
    u2: ScalarFn,
    inv1: Option<ScalarFn>,
    inv2: Option<ScalarFn>,
    d1: Option<ScalarFn>,
    d2: Option<ScalarFn>,
}

impl MonotoneDecomposition {
    pub fn new<F1, F2>(domain: (f64, f64), u1: F1, u2: F2) -> Self
    where
        F1: Fn(f64) -> f64 + Send + Sync + 'static,
        F2: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        MonotoneDecomposition {
            domain,
            u1: Arc::new(u1),
            u2: Arc::new(u2),
            inv1: None,
            inv2: None,
            d1: None,
            d2: None,
        }
    }

    /// Closed-form inverses. `inv1(y)` must return the infimum of the
    /// upper level set `{z : U1(z) >= y}` (so `-inf` on a flat piece),
    /// and `inv2(y)` the supremum of `{z : U2(z) >= y}`.
    pub fn with_inverses<G1, G2>(mut self, inv1: G1, inv2: G2) -> Self
    where
        G1: Fn(f64) -> f64 + Send + Sync + 'static,
        G2: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.inv1 = Some(Arc::new(inv1));
        self.inv2 = Some(Arc::new(inv2));
        self
    }

    /// Register a closed form for just one of the inverses; the other
    /// stays on the numeric path.
    pub fn with_inverses_partial(
        mut self,
        inv1: Option<ScalarFn>,
        inv2: Option<ScalarFn>,
    ) -> Self {
        if inv1.is_some() {
            self.inv1 = inv1;
        }
        if inv2.is_some() {
            self.inv2 = inv2;
        }
        self
    }

    pub fn with_derivatives<G1, G2>(mut self, d1: G1, d2: G2) -> Self
    where
        G1: Fn(f64) -> f64 + Send + Sync + 'static,
        G2: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.d1 = Some(Arc::new(d1));
        self.d2 = Some(Arc::new(d2));
        self
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn u1(&self, x: f64) -> f64 {
        (self.u1)(x)
    }

    pub fn u2(&self, x: f64) -> f64 {
        (self.u2)(x)
    }

    pub fn u(&self, x: f64) -> f64 {
        self.u1(x) + self.u2(x)
    }

    pub fn d1(&self, x: f64) -> f64 {
        match &self.d1 {
            Some(d) => d(x),
            None => central_diff(&self.u1, x),
        }
    }

    pub fn d2(&self, x: f64) -> f64 {
        match &self.d2 {
            Some(d) => d(x),
            None => central_diff(&self.u2, x),
        }
    }
}

fn central_diff(f: &ScalarFn, x: f64) -> f64 {
    let h = 1e-7;
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Bisection inverse of a monotone function on `bracket`. Returns the
/// root and a clamp flag; a `y` outside the range of `f` on the bracket
/// clamps to the nearer endpoint with the flag set.
pub fn invert_monotone<F: Fn(f64) -> f64>(f: F, y: f64, bracket: (f64, f64)) -> (f64, bool) {
    let (mut lo, mut hi) = bracket;
    let f_lo = f(lo);
    let f_hi = f(hi);
    let increasing = f_hi >= f_lo;
    let (mut y_lo, mut y_hi) = if increasing { (f_lo, f_hi) } else { (f_hi, f_lo) };
    if y_lo.is_nan() {
        y_lo = f64::NEG_INFINITY;
    }
    if y_hi.is_nan() {
        y_hi = f64::INFINITY;
    }
    if y <= y_lo {
        return (if increasing { lo } else { hi }, true);
    }
    if y >= y_hi {
        return (if increasing { hi } else { lo }, true);
    }
    let tol = 1e-10 * (1.0 + y.abs());
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if (fm - y).abs() <= tol {
            return (mid, false);
        }
        if (fm < y) == increasing {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (0.5 * (lo + hi), false)
}

/// Evaluate `inf{z : u1(z) >= y}` for the rightward move, starting the
/// numeric search at the current point when no closed form is registered.
fn upper_inverse_right(dec: &MonotoneDecomposition, x: f64, y: f64) -> f64 {
    if let Some(inv) = &dec.inv1 {
        return inv(y);
    }
    let hi = dec.domain.1;
    let hi = if hi.is_finite() {
        hi
    } else {
        let mut h = x.abs().max(1.0);
        let mut k = 0;
        while dec.u1(x + h) < y && k < 200 {
            h *= 2.0;
            k += 1;
        }
        x + h
    };
    let (z, clamped) = invert_monotone(|t| dec.u1(t), y, (x, hi));
    if clamped && z == hi {
        f64::INFINITY
    } else {
        z
    }
}

fn upper_inverse_left(dec: &MonotoneDecomposition, x: f64, y: f64) -> f64 {
    if let Some(inv) = &dec.inv2 {
        return inv(y);
    }
    let lo = dec.domain.0;
    let lo = if lo.is_finite() {
        lo
    } else {
        let mut h = x.abs().max(1.0);
        let mut k = 0;
        while dec.u2(x - h) < y && k < 200 {
            h *= 2.0;
            k += 1;
        }
        x - h
    };
    let (z, clamped) = invert_monotone(|t| dec.u2(t), y, (lo, x));
    if clamped && z == lo {
        f64::NEG_INFINITY
    } else {
        z
    }
}

/// One move with the direction and uniform variate supplied. The inverse
/// target landing outside the domain clamps the arrival to the wall,
/// which is exactly the `min{ ..., wall distance }` behavior the bounded
/// cases need; the result is never NaN.
pub fn step_decomposed_given(
    dec: &MonotoneDecomposition,
    x: f64,
    v: f64,
    big_v: f64,
) -> Result<f64> {
    if !(dec.domain.0 < x && x < dec.domain.1) {
        return Err(Error::DomainViolation);
    }
    if !(big_v > 0.0 && big_v <= 1.0) {
        return Err(Error::InvalidArgument("V must lie in (0, 1]"));
    }
    let threshold = -big_v.ln();
    let tau = if v > 0.0 {
        let z = upper_inverse_right(dec, x, dec.u1(x) + threshold);
        (z - x).min(dec.domain.1 - x).max(0.0)
    } else {
        let z = upper_inverse_left(dec, x, dec.u2(x) + threshold);
        (x - z).min(x - dec.domain.0).max(0.0)
    };
    debug_assert!(tau.is_finite());
    Ok(x + v.signum() * tau / 2.0)
}

/// One move, drawing the direction and the uniform variate.
pub fn step_decomposed(dec: &MonotoneDecomposition, x: f64, rng: &mut ChainRng) -> Result<f64> {
    let u: f64 = rng.random();
    let v = if u < 0.5 { -1.0 } else { 1.0 };
    let big_v = uniform_open_closed(rng);
    step_decomposed_given(dec, x, v, big_v)
}

/// Collect `steps` moves starting from `x0`.
pub fn run_decomposed(
    dec: &MonotoneDecomposition,
    steps: usize,
    seed: u64,
    x0: f64,
) -> Result<SampleBatch> {
    let start = std::time::Instant::now();
    let mut rng = rng_stream(seed, 0);
    let mut batch = SampleBatch::with_capacity(
        1,
        steps,
        BatchMeta {
            seed,
            target_id: String::new(),
            sampler_id: "decomposed".into(),
            wall_secs: 0.0,
        },
    );
    let mut x = x0;
    for _ in 0..steps {
        x = step_decomposed(dec, x, &mut rng)?;
        batch.push_row(&[x]);
    }
    batch.meta.wall_secs = start.elapsed().as_secs_f64();
    Ok(batch)
}

/// One-step transition density of the decomposition chain off the
/// diagonal: the rightward branch moves through `U1`, the leftward
/// through `U2`; a destination out of reach has density zero.
pub fn kernel_density_decomposed(dec: &MonotoneDecomposition, x: f64, y: f64) -> Result<f64> {
    if y == x {
        return Err(Error::InvalidArgument(
            "kernel density is undefined on the diagonal",
        ));
    }
    let z = 2.0 * y - x;
    if z <= dec.domain.0 || z >= dec.domain.1 {
        return Ok(0.0);
    }
    let k = if y > x {
        dec.d1(z).max(0.0) * (-dec.u1(z) + dec.u1(x)).exp()
    } else {
        (-dec.d2(z)).max(0.0) * (-dec.u2(z) + dec.u2(x)).exp()
    };
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn beta22() -> MonotoneDecomposition {
        // U1 = -ln(1-x) increasing, U2 = -ln x decreasing (alpha = beta = 2)
        MonotoneDecomposition::new((0.0, 1.0), |x: f64| -(1.0 - x).ln(), |x: f64| -x.ln())
            .with_inverses(|y: f64| 1.0 - (-y).exp(), |y: f64| (-y).exp())
            .with_derivatives(|x: f64| 1.0 / (1.0 - x), |x: f64| -1.0 / x)
    }

    fn std_gaussian_split() -> MonotoneDecomposition {
        MonotoneDecomposition::new(
            (f64::NEG_INFINITY, f64::INFINITY),
            |x: f64| if x > 0.0 { 0.5 * x * x } else { 0.0 },
            |x: f64| if x < 0.0 { 0.5 * x * x } else { 0.0 },
        )
        .with_inverses(
            |y: f64| {
                if y > 0.0 {
                    (2.0 * y).sqrt()
                } else {
                    f64::NEG_INFINITY
                }
            },
            |y: f64| {
                if y > 0.0 {
                    -(2.0 * y).sqrt()
                } else {
                    f64::INFINITY
                }
            },
        )
        .with_derivatives(
            |x: f64| if x > 0.0 { x } else { 0.0 },
            |x: f64| if x < 0.0 { x } else { 0.0 },
        )
    }

    #[test]
    fn beta_leftward_step_worked_example() {
        // x = 0.5, v = -1, V = 0.5: U2 = -ln x, inv2(y) = e^{-y},
        // tau = 0.5 - e^{-(ln 2 - ln 0.5)} = 0.5 - 0.25 = 0.25,
        // next = 0.5 - 0.125 = 0.375.
        let dec = beta22();
        let next = step_decomposed_given(&dec, 0.5, -1.0, 0.5).unwrap();
        assert!((next - 0.375).abs() < 1e-12);
    }

    #[test]
    fn v_equal_one_stays_put() {
        let dec = beta22();
        assert_eq!(step_decomposed_given(&dec, 0.37, 1.0, 1.0).unwrap(), 0.37);
        assert_eq!(step_decomposed_given(&dec, 0.37, -1.0, 1.0).unwrap(), 0.37);
        let g = std_gaussian_split();
        assert_eq!(step_decomposed_given(&g, -1.3, 1.0, 1.0).unwrap(), -1.3);
    }

    #[test]
    fn flat_piece_never_produces_nan() {
        let g = std_gaussian_split();
        // from the flat side of U1, a rightward move solves through the
        // quadratic branch
        let next = step_decomposed_given(&g, -1.0, 1.0, 0.3f64).unwrap();
        let z = (2.0 * -(0.3f64.ln())).sqrt();
        assert!((next - (-1.0 + (z + 1.0) / 2.0)).abs() < 1e-12);
        assert!(next.is_finite());
    }

    #[test]
    fn invert_monotone_basics() {
        let (r, clamped) = invert_monotone(|x: f64| x.exp(), std::f64::consts::E.powi(2), (0.0, 10.0));
        assert!(!clamped);
        assert!((r - 2.0).abs() < 1e-9);

        let (r_lo, clamped_lo) = invert_monotone(|x: f64| x.exp(), 0.5, (0.0, 10.0));
        assert!(clamped_lo);
        assert_eq!(r_lo, 0.0);

        // decreasing function
        let (r_dec, c_dec) = invert_monotone(|x: f64| -x, -3.0, (0.0, 10.0));
        assert!(!c_dec);
        assert!((r_dec - 3.0).abs() < 1e-9);
    }

    #[test]
    fn invert_monotone_matches_grid_oracle() {
        // increasing part of Beta(0.5, 2): U1 = 0.5 ln x + ln(1-x) ... the
        // full potential is increasing for alpha < 1 < beta.
        let u1 = |x: f64| {
            let z = x.clamp(1e-12, 1.0 - 1e-12);
            0.5 * z.ln() - (1.0) * (1.0 - z).ln()
        };
        let y = u1(0.3) + 0.7;
        let (root, clamped) = invert_monotone(u1, y, (0.3, 1.0));
        assert!(!clamped);
        // dense grid inversion oracle
        let mut oracle = 1.0;
        let n = 4_000_000;
        for k in 0..n {
            let x = 0.3 + 0.7 * k as f64 / n as f64;
            if u1(x) >= y {
                oracle = x;
                break;
            }
        }
        assert!((root - oracle).abs() < 1e-6, "{root} vs {oracle}");
    }

    #[test]
    fn numeric_inverse_path_agrees_with_closed_form() {
        let closed = beta22();
        let numeric =
            MonotoneDecomposition::new((0.0, 1.0), |x: f64| -(1.0 - x).ln(), |x: f64| -x.ln());
        for &(x, v, big_v) in &[(0.5, -1.0, 0.5), (0.2, 1.0, 0.3), (0.8, -1.0, 0.9)] {
            let a = step_decomposed_given(&closed, x, v, big_v).unwrap();
            let b = step_decomposed_given(&numeric, x, v, big_v).unwrap();
            assert!((a - b).abs() < 1e-8, "{a} vs {b}");
        }
    }

    #[test]
    fn kernel_gaussian_split_worked_example() {
        // x = 0, y = 0.5: K = U1'(1) e^{-U1(1) + U1(0)} = e^{-1/2}
        let g = std_gaussian_split();
        let k = kernel_density_decomposed(&g, 0.0, 0.5).unwrap();
        assert!((k - (-0.5f64).exp()).abs() < 1e-12);
        // mirror through U2
        let k2 = kernel_density_decomposed(&g, 0.0, -0.5).unwrap();
        assert!((k2 - (-0.5f64).exp()).abs() < 1e-12);
        assert!(kernel_density_decomposed(&g, 0.3, 0.3).is_err());
    }

    #[test]
    fn kernel_integrates_to_one() {
        let g = std_gaussian_split();
        let x = 0.3;
        let n = 40_000;
        let (lo, hi) = (-10.0, 10.0);
        let h = (hi - lo) / n as f64;
        let mut total = 0.0;
        for k in 0..=n {
            let y = lo + k as f64 * h;
            if y == x {
                continue;
            }
            let w = if k == 0 || k == n { 0.5 } else { 1.0 };
            total += w * kernel_density_decomposed(&g, x, y).unwrap();
        }
        total *= h;
        assert!((total - 1.0).abs() < 1e-3, "total {total}");
    }

    #[test]
    fn run_is_deterministic_and_in_domain() {
        let dec = beta22();
        let a = run_decomposed(&dec, 500, 77, 0.5).unwrap();
        let b = run_decomposed(&dec, 500, 77, 0.5).unwrap();
        for i in 0..a.n_steps() {
            assert_eq!(a.row(i), b.row(i));
            assert!(a.row(i)[0] > 0.0 && a.row(i)[0] < 1.0);
        }
    }
}
