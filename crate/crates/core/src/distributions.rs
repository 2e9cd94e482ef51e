//! Registry of ready-made univariate targets with reference CDFs, the
//! closed-form arrival rules that exist for them, and monotone
//! decompositions for the inverse-based sampler.

use std::sync::Arc;

use crate::decomposition::MonotoneDecomposition;
use crate::error::{Error, Result};
use crate::potential::{DomainSet, Potential};
use crate::special::{beta_reg, normal_cdf};

/// Wall inset used when evaluating potentials whose value blows up at a
/// domain edge. Evaluation only; arrival logic always uses exact walls.
const EDGE_CLIP: f64 = 1e-12;

type CdfFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type TauFn = Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;

/// A named target: potential, optional decomposition, reference CDF for
/// validation, and an analytic arrival rule where one exists.
#[derive(Clone)]
pub struct TargetSpec {
    pub name: String,
    pub potential: Potential,
    pub decomposition: Option<MonotoneDecomposition>,
    /// Reference CDF (univariate targets).
    pub cdf: Option<CdfFn>,
    /// `(x, v, V) -> tau` in closed form, when available.
    pub analytic_tau: Option<TauFn>,
    /// Plot/quadrature range covering essentially all of the mass.
    pub grid_hint: (f64, f64),
}

impl TargetSpec {
    pub fn dim(&self) -> usize {
        self.potential.dim()
    }

    pub fn cdf_at(&self, x: f64) -> Option<f64> {
        self.cdf.as_ref().map(|f| f(x))
    }
}

pub fn make_uniform(a: f64, b: f64) -> Result<TargetSpec> {
    if !(a < b) {
        return Err(Error::InvalidArgument("uniform needs a < b"));
    }
    let potential = Potential::new(DomainSet::interval(a, b), |_| 0.0, |_| vec![0.0], true);
    let width = b - a;
    Ok(TargetSpec {
        name: format!("unif:{a}:{b}"),
        potential,
        decomposition: Some(
            MonotoneDecomposition::new((a, b), |_| 0.0, |_| 0.0)
                .with_inverses(
                    |y: f64| {
                        if y > 0.0 {
                            f64::INFINITY
                        } else {
                            f64::NEG_INFINITY
                        }
                    },
                    |y: f64| {
                        if y > 0.0 {
                            f64::NEG_INFINITY
                        } else {
                            f64::INFINITY
                        }
                    },
                )
                .with_derivatives(|_| 0.0, |_| 0.0),
        ),
        cdf: Some(Arc::new(move |x: f64| ((x - a) / width).clamp(0.0, 1.0))),
        analytic_tau: Some(Arc::new(move |x: f64, v: f64, _big_v: f64| {
            if v > 0.0 {
                b - x
            } else {
                x - a
            }
        })),
        grid_hint: (a, b),
    })
}

/// First arrival for `N(mu, sigma2)`: explicit in both slope cases.
pub fn gaussian_analytic_tau(mu: f64, sigma2: f64, x: f64, v: f64, big_v: f64) -> f64 {
    let thr = -big_v.ln();
    let t_star = (mu - x) / v;
    if t_star >= 0.0 {
        t_star + (2.0 * sigma2 * thr).sqrt() / v.abs()
    } else {
        (mu - x) / v + ((x - mu).powi(2) / (v * v) + 2.0 * sigma2 * thr / (v * v)).sqrt()
    }
}

pub fn make_gaussian(mu: f64, sigma2: f64) -> Result<TargetSpec> {
    if !(sigma2 > 0.0) {
        return Err(Error::InvalidArgument("gaussian needs sigma2 > 0"));
    }
    let sigma = sigma2.sqrt();
    let potential = Potential::new(
        DomainSet::full(1),
        move |x: &[f64]| (x[0] - mu) * (x[0] - mu) / (2.0 * sigma2),
        move |x: &[f64]| vec![(x[0] - mu) / sigma2],
        true,
    );
    let decomposition = MonotoneDecomposition::new(
        (f64::NEG_INFINITY, f64::INFINITY),
        move |x: f64| {
            if x >= mu {
                (x - mu) * (x - mu) / (2.0 * sigma2)
            } else {
                0.0
            }
        },
        move |x: f64| {
            if x <= mu {
                (x - mu) * (x - mu) / (2.0 * sigma2)
            } else {
                0.0
            }
        },
    )
    .with_inverses(
        move |y: f64| {
            if y > 0.0 {
                mu + (2.0 * sigma2 * y).sqrt()
            } else {
                f64::NEG_INFINITY
            }
        },
        move |y: f64| {
            if y > 0.0 {
                mu - (2.0 * sigma2 * y).sqrt()
            } else {
                f64::INFINITY
            }
        },
    )
    .with_derivatives(
        move |x: f64| if x >= mu { (x - mu) / sigma2 } else { 0.0 },
        move |x: f64| if x <= mu { (x - mu) / sigma2 } else { 0.0 },
    );
    Ok(TargetSpec {
        name: format!("gaussian:{mu}:{sigma2}"),
        potential,
        decomposition: Some(decomposition),
        cdf: Some(Arc::new(move |x: f64| normal_cdf((x - mu) / sigma))),
        analytic_tau: Some(Arc::new(move |x, v, big_v| {
            gaussian_analytic_tau(mu, sigma2, x, v, big_v)
        })),
        grid_hint: (mu - 8.0 * sigma, mu + 8.0 * sigma),
    })
}

fn beta_u(alpha: f64, beta: f64, x: f64) -> f64 {
    let z = x.clamp(EDGE_CLIP, 1.0 - EDGE_CLIP);
    -(alpha - 1.0) * z.ln() - (beta - 1.0) * (1.0 - z).ln()
}

fn beta_du(alpha: f64, beta: f64, x: f64) -> f64 {
    let z = x.clamp(EDGE_CLIP, 1.0 - EDGE_CLIP);
    -(alpha - 1.0) / z + (beta - 1.0) / (1.0 - z)
}

fn beta_decomposition(alpha: f64, beta: f64) -> MonotoneDecomposition {
    // each log term is monotone; route it into the increasing part (u1)
    // or the decreasing part (u2) by the sign of its coefficient
    let x_term_increasing = alpha < 1.0; // -(alpha-1) ln x climbs when alpha < 1
    let one_minus_term_increasing = beta > 1.0; // -(beta-1) ln(1-x) climbs when beta > 1

    let u1 = move |x: f64| {
        let z = x.clamp(EDGE_CLIP, 1.0 - EDGE_CLIP);
        let mut v = 0.0;
        if x_term_increasing {
            v += -(alpha - 1.0) * z.ln();
        }
        if one_minus_term_increasing {
            v += -(beta - 1.0) * (1.0 - z).ln();
        }
        v
    };
    let u2 = move |x: f64| {
        let z = x.clamp(EDGE_CLIP, 1.0 - EDGE_CLIP);
        let mut v = 0.0;
        if !x_term_increasing {
            v += -(alpha - 1.0) * z.ln();
        }
        if !one_minus_term_increasing {
            v += -(beta - 1.0) * (1.0 - z).ln();
        }
        v
    };
    let d1 = move |x: f64| {
        let z = x.clamp(EDGE_CLIP, 1.0 - EDGE_CLIP);
        let mut v = 0.0;
        if x_term_increasing {
            v += -(alpha - 1.0) / z;
        }
        if one_minus_term_increasing {
            v += (beta - 1.0) / (1.0 - z);
        }
        v
    };
    let d2 = move |x: f64| {
        let z = x.clamp(EDGE_CLIP, 1.0 - EDGE_CLIP);
        let mut v = 0.0;
        if !x_term_increasing {
            v += -(alpha - 1.0) / z;
        }
        if !one_minus_term_increasing {
            v += (beta - 1.0) / (1.0 - z);
        }
        v
    };

    let dec = MonotoneDecomposition::new((0.0, 1.0), u1, u2).with_derivatives(d1, d2);

    // closed-form inverses exist exactly when each part is a single term
    let single_term = alpha != 1.0 && beta != 1.0 && (x_term_increasing != one_minus_term_increasing);
    if single_term {
        let (inv1, inv2): (
            Box<dyn Fn(f64) -> f64 + Send + Sync>,
            Box<dyn Fn(f64) -> f64 + Send + Sync>,
        ) = if x_term_increasing {
            // u1 = -(alpha-1) ln x, u2 = -(beta-1) ln(1-x)
            (
                Box::new(move |y: f64| (-y / (alpha - 1.0)).exp()),
                Box::new(move |y: f64| 1.0 - (-y / (beta - 1.0)).exp()),
            )
        } else {
            // u1 = -(beta-1) ln(1-x), u2 = -(alpha-1) ln x
            (
                Box::new(move |y: f64| 1.0 - (-y / (beta - 1.0)).exp()),
                Box::new(move |y: f64| (-y / (alpha - 1.0)).exp()),
            )
        };
        dec.with_inverses(move |y| inv1(y), move |y| inv2(y))
    } else {
        dec
    }
}

pub fn make_beta(alpha: f64, beta: f64) -> Result<TargetSpec> {
    if !(alpha > 0.0 && beta > 0.0) {
        return Err(Error::InvalidArgument("beta needs alpha, beta > 0"));
    }
    let potential = Potential::new(
        DomainSet::interval(0.0, 1.0),
        move |x: &[f64]| beta_u(alpha, beta, x[0]),
        move |x: &[f64]| vec![beta_du(alpha, beta, x[0])],
        alpha >= 1.0 && beta >= 1.0,
    );
    Ok(TargetSpec {
        name: format!("beta:{alpha}:{beta}"),
        potential,
        decomposition: Some(beta_decomposition(alpha, beta)),
        cdf: Some(Arc::new(move |x: f64| beta_reg(alpha, beta, x))),
        analytic_tau: None,
        grid_hint: (0.0, 1.0),
    })
}

/// Arrival time for `Beta(alpha, beta)` by the shape regime: convex,
/// concave, or monotone potential, each with its own wall behavior.
/// Used as an independent cross-check of the generic solver.
pub fn beta_tau_regime(alpha: f64, beta: f64, x: f64, v: f64, big_v: f64) -> Result<f64> {
    if !(0.0 < x && x < 1.0) {
        return Err(Error::DomainViolation);
    }
    if !(big_v > 0.0 && big_v <= 1.0) {
        return Err(Error::InvalidArgument("V must lie in (0, 1]"));
    }
    let thr = -big_v.ln();
    let u = |z: f64| beta_u(alpha, beta, z);
    // solve u(x + s*t) - base = thr for t in [lo, hi], u increasing in t
    let solve = |s: f64, lo: f64, hi: f64, base: f64| -> f64 {
        let (mut a, mut b) = (lo, hi);
        for _ in 0..200 {
            if b - a <= 1e-13 {
                break;
            }
            let mid = 0.5 * (a + b);
            if u(x + s * mid) - base < thr {
                a = mid;
            } else {
                b = mid;
            }
        }
        0.5 * (a + b)
    };

    let tau = if alpha > 1.0 && beta > 1.0 {
        // convex; interior minimum at the mode
        let mode = (alpha - 1.0) / (alpha + beta - 2.0);
        if v > 0.0 {
            let t_star = (mode - x).max(0.0);
            solve(1.0, t_star, 1.0 - x, u(x + t_star))
        } else {
            let t_star = (x - mode).max(0.0);
            solve(-1.0, t_star, x, u(x - t_star))
        }
    } else if alpha < 1.0 && beta < 1.0 {
        // concave; interior maximum, mass may run out before the wall
        let mode = (alpha - 1.0) / (alpha + beta - 2.0);
        if v > 0.0 {
            let t_star = (mode - x).max(0.0);
            if u(x + t_star) - u(x) >= thr {
                solve(1.0, 0.0, t_star, u(x))
            } else {
                1.0 - x
            }
        } else {
            let t_star = (x - mode).max(0.0);
            if u(x - t_star) - u(x) >= thr {
                solve(-1.0, 0.0, t_star, u(x))
            } else {
                x
            }
        }
    } else if alpha <= 1.0 && beta >= 1.0 {
        // potential increasing on (0, 1)
        if v > 0.0 {
            if u(1.0) - u(x) >= thr {
                solve(1.0, 0.0, 1.0 - x, u(x))
            } else {
                1.0 - x
            }
        } else {
            x
        }
    } else {
        // alpha >= 1 >= beta: potential decreasing on (0, 1)
        if v > 0.0 {
            1.0 - x
        } else if u(0.0) - u(x) >= thr {
            solve(-1.0, 0.0, x, u(x))
        } else {
            x
        }
    };
    Ok(tau)
}

pub fn make_mixture(w1: f64, mu1: f64, mu2: f64, sigma2: f64) -> Result<TargetSpec> {
    if !(w1 > 0.0 && w1 < 1.0) {
        return Err(Error::InvalidArgument("mixture needs 0 < w1 < 1"));
    }
    if !(mu2 > mu1) {
        return Err(Error::InvalidArgument("mixture needs mu2 > mu1"));
    }
    if !(sigma2 > 0.0) {
        return Err(Error::InvalidArgument("mixture needs sigma2 > 0"));
    }
    let w2 = 1.0 - w1;
    let sigma = sigma2.sqrt();

    let weights = move |x: f64| {
        let a1 = -(x - mu1) * (x - mu1) / (2.0 * sigma2);
        let a2 = -(x - mu2) * (x - mu2) / (2.0 * sigma2);
        let m = a1.max(a2);
        (w1 * (a1 - m).exp(), w2 * (a2 - m).exp(), m)
    };
    let value = move |x: f64| {
        let (p1, p2, m) = weights(x);
        -(m + (p1 + p2).ln())
    };
    let slope = move |x: f64| {
        let (p1, p2, _) = weights(x);
        (p1 * (x - mu1) + p2 * (x - mu2)) / (sigma2 * (p1 + p2))
    };

    let potential = Potential::new(
        DomainSet::full(1),
        move |x: &[f64]| value(x[0]),
        move |x: &[f64]| vec![slope(x[0])],
        false,
    );

    // U1 keeps the quadratic above mu1; U2 carries the rest and decreases.
    let u1 = move |x: f64| {
        if x > mu1 {
            (x - mu1) * (x - mu1) / (2.0 * sigma2)
        } else {
            0.0
        }
    };
    let u2 = move |x: f64| value(x) - u1(x);
    let d1 = move |x: f64| if x > mu1 { (x - mu1) / sigma2 } else { 0.0 };
    let d2 = move |x: f64| slope(x) - d1(x);
    let decomposition = MonotoneDecomposition::new((f64::NEG_INFINITY, f64::INFINITY), u1, u2)
        .with_derivatives(d1, d2)
        .with_inverses_partial(
            Some(Arc::new(move |y: f64| {
                if y > 0.0 {
                    mu1 + (2.0 * sigma2 * y).sqrt()
                } else {
                    f64::NEG_INFINITY
                }
            })),
            None,
        );

    Ok(TargetSpec {
        name: format!("mixture:{w1}:{mu1}:{mu2}:{sigma2}"),
        potential,
        decomposition: Some(decomposition),
        cdf: Some(Arc::new(move |x: f64| {
            w1 * normal_cdf((x - mu1) / sigma) + w2 * normal_cdf((x - mu2) / sigma)
        })),
        analytic_tau: None,
        grid_hint: (mu1 - 8.0 * sigma, mu2 + 8.0 * sigma),
    })
}

pub fn make_truncated_gaussian(mu: f64, sigma2: f64, lo: f64, hi: f64) -> Result<TargetSpec> {
    if !(sigma2 > 0.0) {
        return Err(Error::InvalidArgument("gaussian needs sigma2 > 0"));
    }
    if !(lo < hi) {
        return Err(Error::InvalidArgument("truncation needs lo < hi"));
    }
    let sigma = sigma2.sqrt();
    let potential = Potential::new(
        DomainSet::interval(lo, hi),
        move |x: &[f64]| (x[0] - mu) * (x[0] - mu) / (2.0 * sigma2),
        move |x: &[f64]| vec![(x[0] - mu) / sigma2],
        true,
    );
    let z_lo = normal_cdf((lo - mu) / sigma);
    let z_hi = normal_cdf((hi - mu) / sigma);
    Ok(TargetSpec {
        name: format!("truncated-gaussian:{mu}:{sigma2}:{lo}:{hi}"),
        potential,
        decomposition: None,
        cdf: Some(Arc::new(move |x: f64| {
            if x <= lo {
                0.0
            } else if x >= hi {
                1.0
            } else {
                (normal_cdf((x - mu) / sigma) - z_lo) / (z_hi - z_lo)
            }
        })),
        analytic_tau: None,
        grid_hint: (lo, hi),
    })
}

/// Mean of a truncated normal, for validating sample moments.
pub fn truncated_gaussian_mean(mu: f64, sigma2: f64, lo: f64, hi: f64) -> f64 {
    let sigma = sigma2.sqrt();
    let a = (lo - mu) / sigma;
    let b = (hi - mu) / sigma;
    let phi = |z: f64| (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt();
    mu + sigma * (phi(a) - phi(b)) / (normal_cdf(b) - normal_cdf(a))
}

/// Parse a CLI-style target name, e.g. `gaussian:0:1`, `beta:0.5:2`,
/// `unif:0:1`, `mixture:0.5:0:4:1`, `truncated-gaussian:0:1:1:3`.
pub fn parse_target(name: &str) -> Result<TargetSpec> {
    let parts: Vec<&str> = name.split(':').collect();
    let nums: Result<Vec<f64>> = parts[1..]
        .iter()
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| Error::UnknownTarget(name.to_string()))
        })
        .collect();
    let nums = nums?;
    let wrong = || Error::UnknownTarget(name.to_string());
    match (parts[0], nums.len()) {
        ("gaussian", 2) => make_gaussian(nums[0], nums[1]),
        ("beta", 2) => make_beta(nums[0], nums[1]),
        ("unif" | "uniform", 2) => make_uniform(nums[0], nums[1]),
        ("mixture", 4) => make_mixture(nums[0], nums[1], nums[2], nums[3]),
        ("truncated-gaussian", 4) => make_truncated_gaussian(nums[0], nums[1], nums[2], nums[3]),
        _ => Err(wrong()),
    }
}

/// The named validation set used by sweeps and the acceptance runs.
pub fn zoo() -> Vec<TargetSpec> {
    vec![
        make_gaussian(0.0, 1.0).unwrap(),
        make_beta(2.0, 2.0).unwrap(),
        make_beta(3.0, 2.0).unwrap(),
        make_beta(0.5, 0.5).unwrap(),
        make_beta(0.5, 2.0).unwrap(),
        make_beta(2.0, 0.5).unwrap(),
        make_uniform(0.0, 1.0).unwrap(),
        make_mixture(0.5, 0.0, 4.0, 1.0).unwrap(),
        make_truncated_gaussian(0.0, 1.0, 1.0, 3.0).unwrap(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::{check_gradient, restrict_to_line};

    #[test]
    fn beta_gradient_closed_form() {
        let t = make_beta(2.0, 2.0).unwrap();
        let g = t.potential.gradient(&[0.5]).unwrap();
        assert_eq!(g[0], 0.0);
        let g2 = t.potential.gradient(&[0.25]).unwrap();
        assert!((g2[0] - (-1.0 / 0.25 + 1.0 / 0.75)).abs() < 1e-12);
    }

    #[test]
    fn gradients_check_out_across_the_zoo() {
        for t in zoo() {
            let (lo, hi) = t.grid_hint;
            for k in 1..8 {
                let x = lo + (hi - lo) * k as f64 / 8.0;
                // skip kink points of the mixture split and the gaussian mode
                let err = check_gradient(&t.potential, &[x]).unwrap();
                assert!(err < 1e-5, "{} at {x}: {err}", t.name);
            }
        }
    }

    #[test]
    fn cdfs_are_proper_and_match_density_quadrature() {
        for t in zoo() {
            let cdf = t.cdf.as_ref().unwrap();
            let (lo, hi) = t.grid_hint;
            assert!(cdf(lo + 1e-9) < 1e-3, "{}", t.name);
            assert!(cdf(hi - 1e-9) > 1.0 - 1e-3, "{}", t.name);
            let mut last = 0.0;
            for k in 0..=400 {
                let v = cdf(lo + (hi - lo) * k as f64 / 400.0);
                assert!(v >= last - 1e-12, "{} CDF not monotone", t.name);
                last = v;
            }

            // density ~ exp(-U) against CDF increments, compared as interval
            // mass ratios on the central band so wall singularities of the
            // concave beta cases stay out of the quadrature
            let span = hi - lo;
            let (a, b) = (lo + 0.2 * span, lo + 0.45 * span);
            let (c, d) = (lo + 0.55 * span, lo + 0.8 * span);
            let mass = |from: f64, to: f64| -> f64 {
                let n = 60_000;
                let h = (to - from) / n as f64;
                (0..=n)
                    .map(|k| {
                        let w = if k == 0 || k == n { 0.5 } else { 1.0 };
                        w * (-t.potential.value(&[from + k as f64 * h]).unwrap()).exp()
                    })
                    .sum::<f64>()
                    * h
            };
            let got = mass(a, b) / mass(c, d);
            let want = (cdf(b) - cdf(a)) / (cdf(d) - cdf(c));
            assert!(
                (got - want).abs() < 1e-6 * (1.0 + want),
                "{}: ratio {got} vs {want}",
                t.name
            );
        }
    }

    #[test]
    fn decompositions_sum_to_potential_and_are_monotone() {
        for t in zoo() {
            let Some(dec) = &t.decomposition else { continue };
            let (lo, hi) = dec.domain();
            let (lo, hi) = (lo.max(t.grid_hint.0), hi.min(t.grid_hint.1));
            let mut prev_u1 = f64::NEG_INFINITY;
            let mut prev_u2 = f64::INFINITY;
            for k in 1..200 {
                let x = lo + (hi - lo) * k as f64 / 201.0;
                let total = dec.u1(x) + dec.u2(x);
                let direct = t.potential.value(&[x]).unwrap();
                assert!(
                    (total - direct).abs() < 1e-10,
                    "{} at {x}: {total} vs {direct}",
                    t.name
                );
                assert!(dec.u1(x) >= prev_u1 - 1e-12, "{} u1 not increasing", t.name);
                assert!(dec.u2(x) <= prev_u2 + 1e-12, "{} u2 not decreasing", t.name);
                prev_u1 = dec.u1(x);
                prev_u2 = dec.u2(x);
            }
        }
    }

    #[test]
    fn gaussian_analytic_tau_matches_bisection_oracle() {
        use rand::Rng;
        let t = make_gaussian(0.0, 1.0).unwrap();
        let rule = t.analytic_tau.as_ref().unwrap();
        let mut rng = crate::rng::rng_from_seed(3);
        for _ in 0..100 {
            let x = rng.random_range(-3.0..3.0);
            let v = if rng.random::<f64>() < 0.5 { -1.0 } else { 1.0 };
            let big_v: f64 = rng.random_range(0.01..0.99);
            let line = restrict_to_line(&t.potential, &[x], &[v]).unwrap();
            let num = crate::arrival::solve_arrival(&line, -big_v.ln()).unwrap().tau;
            assert!(
                (rule(x, v, big_v) - num).abs() < 1e-9,
                "x={x} v={v} V={big_v}"
            );
        }
    }

    #[test]
    fn beta_regime_rules() {
        // convex case against the generic solver
        let t = make_beta(2.0, 2.0).unwrap();
        let line = restrict_to_line(&t.potential, &[0.5], &[1.0]).unwrap();
        let num = crate::arrival::solve_arrival(&line, -(0.7f64.ln())).unwrap().tau;
        let reg = beta_tau_regime(2.0, 2.0, 0.5, 1.0, 0.7).unwrap();
        assert!((num - reg).abs() < 1e-9, "{num} vs {reg}");

        // concave regime starting at the potential's maximum: no climb is
        // available, so any positive threshold clamps at the wall
        let reg2 = beta_tau_regime(0.5, 0.5, 0.5, 1.0, 0.5).unwrap();
        assert_eq!(reg2, 0.5);

        // monotone increasing regime (alpha<1<beta), moving left: wall at 0
        let reg3 = beta_tau_regime(0.5, 2.0, 0.3, -1.0, 0.42).unwrap();
        assert_eq!(reg3, 0.3);

        // monotone decreasing regime, moving right: wall at 1
        let reg4 = beta_tau_regime(2.0, 0.5, 0.3, 1.0, 0.42).unwrap();
        assert_eq!(reg4, 0.7);
    }

    #[test]
    fn beta_regimes_match_generic_solver_on_random_draws() {
        use rand::Rng;
        let mut rng = crate::rng::rng_from_seed(8);
        for &(a, b) in &[(2.0, 2.0), (0.5, 0.5), (0.5, 2.0), (2.0, 0.5)] {
            let t = make_beta(a, b).unwrap();
            for _ in 0..50 {
                let x = rng.random_range(0.05..0.95);
                let v = if rng.random::<f64>() < 0.5 { -1.0 } else { 1.0 };
                let big_v: f64 = rng.random_range(0.05..0.99);
                let line = restrict_to_line(&t.potential, &[x], &[v]).unwrap();
                let num = crate::arrival::solve_arrival(&line, -big_v.ln()).unwrap().tau;
                let reg = beta_tau_regime(a, b, x, v, big_v).unwrap();
                assert!(
                    (num - reg).abs() < 1e-7,
                    "a={a} b={b} x={x} v={v} V={big_v}: {num} vs {reg}"
                );
            }
        }
    }

    #[test]
    fn mixture_u2_is_decreasing_on_grid() {
        let t = make_mixture(0.5, 0.0, 4.0, 1.0).unwrap();
        let dec = t.decomposition.as_ref().unwrap();
        let mut prev = f64::INFINITY;
        for k in 0..=200 {
            let x = -8.0 + 20.0 * k as f64 / 200.0;
            let v = dec.u2(x);
            assert!(v <= prev + 1e-10, "u2 rose at {x}");
            prev = v;
        }
    }

    #[test]
    fn truncated_gaussian_mean_matches_quadrature() {
        let m = truncated_gaussian_mean(0.0, 1.0, 1.0, 3.0);
        // quadrature oracle for the first moment
        let n = 200_000;
        let h = 2.0 / n as f64;
        let mut num = 0.0;
        let mut den = 0.0;
        for k in 0..=n {
            let x = 1.0 + k as f64 * h;
            let w = if k == 0 || k == n { 0.5 } else { 1.0 };
            let d = (-0.5 * x * x).exp();
            num += w * x * d;
            den += w * d;
        }
        assert!((m - num / den).abs() < 1e-6, "{m} vs {}", num / den);
        assert!((m - 1.5100488).abs() < 1e-6);
    }

    #[test]
    fn parse_round_trips_and_rejects_unknown() {
        assert_eq!(parse_target("gaussian:0:1").unwrap().name, "gaussian:0:1");
        assert_eq!(parse_target("beta:0.5:2").unwrap().name, "beta:0.5:2");
        assert!(parse_target("cauchy:0:1").is_err());
        assert!(parse_target("beta:nope:2").is_err());
        assert!(parse_target("beta:-1:2").is_err());
    }
}
