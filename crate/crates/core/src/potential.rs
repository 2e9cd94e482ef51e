//! Targets, their domains, and 1-D line restrictions.
//!
//! A [`Potential`] is the negative log-density `U` (up to an additive
//! constant) together with its gradient and the open set it lives on.
//! A [`LineSection`] is the restriction `t -> U(x + v t)` along a ray,
//! which is the object all arrival-time computations run on.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::rng::ChainRng;

/// Open set on which a potential is finite. Membership is strict:
/// points exactly on a wall are rejected.
#[derive(Clone, Debug)]
pub enum DomainSet {
    /// All of R^d.
    FullSpace { dim: usize },
    /// Product of open intervals, bounds possibly infinite.
    IntervalProduct { bounds: Vec<(f64, f64)> },
    /// Sign-constrained orthant coordinates followed by a centered cube,
    /// i.e. `{x_i * s_i > 0} x (-w, w)^k`.
    OrthantCubeProduct {
        signs: Vec<f64>,
        cube_dim: usize,
        cube_half_width: f64,
    },
}

impl DomainSet {
    pub fn full(dim: usize) -> Self {
        DomainSet::FullSpace { dim }
    }

    /// One-dimensional open interval.
    pub fn interval(lo: f64, hi: f64) -> Self {
        DomainSet::IntervalProduct {
            bounds: vec![(lo, hi)],
        }
    }

    pub fn interval_product(bounds: Vec<(f64, f64)>) -> Result<Self> {
        if bounds.iter().any(|&(lo, hi)| !(lo < hi)) {
            return Err(Error::InvalidArgument("interval bounds need lower < upper"));
        }
        Ok(DomainSet::IntervalProduct { bounds })
    }

    pub fn orthant_cube(signs: Vec<f64>, cube_dim: usize, cube_half_width: f64) -> Result<Self> {
        if signs.iter().any(|s| *s != 1.0 && *s != -1.0) {
            return Err(Error::InvalidArgument("orthant signs must be +1 or -1"));
        }
        if cube_dim > 0 && !(cube_half_width > 0.0) {
            return Err(Error::InvalidArgument("cube half-width must be positive"));
        }
        Ok(DomainSet::OrthantCubeProduct {
            signs,
            cube_dim,
            cube_half_width,
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            DomainSet::FullSpace { dim } => *dim,
            DomainSet::IntervalProduct { bounds } => bounds.len(),
            DomainSet::OrthantCubeProduct {
                signs, cube_dim, ..
            } => signs.len() + cube_dim,
        }
    }

    /// Per-coordinate open bounds `(lo, hi)`.
    pub fn coordinate_bounds(&self, i: usize) -> (f64, f64) {
        match self {
            DomainSet::FullSpace { .. } => (f64::NEG_INFINITY, f64::INFINITY),
            DomainSet::IntervalProduct { bounds } => bounds[i],
            DomainSet::OrthantCubeProduct {
                signs,
                cube_half_width,
                ..
            } => {
                if i < signs.len() {
                    if signs[i] > 0.0 {
                        (0.0, f64::INFINITY)
                    } else {
                        (f64::NEG_INFINITY, 0.0)
                    }
                } else {
                    (-cube_half_width, *cube_half_width)
                }
            }
        }
    }

    /// Strict-interior membership.
    pub fn contains(&self, x: &[f64]) -> bool {
        if x.len() != self.dim() {
            return false;
        }
        (0..self.dim()).all(|i| {
            let (lo, hi) = self.coordinate_bounds(i);
            x[i].is_finite() && lo < x[i] && x[i] < hi
        })
    }

    /// Whether every coordinate is bounded on both sides.
    pub fn is_bounded(&self) -> bool {
        (0..self.dim()).all(|i| {
            let (lo, hi) = self.coordinate_bounds(i);
            lo.is_finite() && hi.is_finite()
        })
    }

    /// Exit time of the ray `{x + v t : t >= 0}` out of the domain,
    /// `+inf` when the ray never leaves. Requires `x` interior.
    pub fn ray_exit(&self, x: &[f64], v: &[f64]) -> f64 {
        let mut t_max = f64::INFINITY;
        for i in 0..self.dim() {
            if v[i] == 0.0 {
                continue;
            }
            let (lo, hi) = self.coordinate_bounds(i);
            let wall = if v[i] > 0.0 { hi } else { lo };
            if wall.is_finite() {
                t_max = t_max.min((wall - x[i]) / v[i]);
            }
        }
        t_max
    }
}

type ScalarField = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type VectorField = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// Negative log-density `U` with gradient over an open domain.
/// Cloning is cheap; the callables are shared.
#[derive(Clone)]
pub struct Potential {
    dim: usize,
    domain: DomainSet,
    u: ScalarField,
    grad: VectorField,
    log_concave: bool,
}

impl fmt::Debug for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Potential")
            .field("dim", &self.dim)
            .field("domain", &self.domain)
            .field("log_concave", &self.log_concave)
            .finish()
    }
}

impl Potential {
    pub fn new<U, G>(domain: DomainSet, u: U, grad: G, log_concave: bool) -> Self
    where
        U: Fn(&[f64]) -> f64 + Send + Sync + 'static,
        G: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        Potential {
            dim: domain.dim(),
            domain,
            u: Arc::new(u),
            grad: Arc::new(grad),
            log_concave,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn domain(&self) -> &DomainSet {
        &self.domain
    }

    /// Convex potentials get the three-step truncated arrival procedure;
    /// everything else goes through the general segmentation solver.
    pub fn is_log_concave(&self) -> bool {
        self.log_concave
    }

    /// `U(x)`, rejecting points outside the open domain.
    pub fn value(&self, x: &[f64]) -> Result<f64> {
        if !self.domain.contains(x) {
            return Err(Error::DomainViolation);
        }
        Ok((self.u)(x))
    }

    /// `grad U(x)`, rejecting points outside the open domain.
    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        if !self.domain.contains(x) {
            return Err(Error::DomainViolation);
        }
        Ok((self.grad)(x))
    }

    /// Evaluation without the membership check, for points that are known
    /// to sit on a ray inside the domain (walls included).
    pub(crate) fn value_unchecked(&self, x: &[f64]) -> f64 {
        (self.u)(x)
    }

    pub(crate) fn gradient_unchecked(&self, x: &[f64]) -> Vec<f64> {
        (self.grad)(x)
    }
}

/// Restriction of a potential to the ray `t -> x + v t`, `t >= 0`.
#[derive(Clone)]
pub struct LineSection {
    potential: Potential,
    base: Vec<f64>,
    direction: Vec<f64>,
    t_max: f64,
    scratch_dim: usize,
}

impl LineSection {
    pub fn base(&self) -> &[f64] {
        &self.base
    }

    pub fn direction(&self) -> &[f64] {
        &self.direction
    }

    /// Exit time of the ray out of the domain (possibly `+inf`).
    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    /// `[t_min, t_max]` of the feasible parameter range; `t_min` is 0
    /// because sections start at interior points.
    pub fn t_range(&self) -> (f64, f64) {
        (0.0, self.t_max)
    }

    pub fn point_at(&self, t: f64) -> Vec<f64> {
        (0..self.scratch_dim)
            .map(|i| self.base[i] + self.direction[i] * t)
            .collect()
    }

    /// `U(x + v t)`. Valid for `t` in `[0, t_max]`; the value at a wall
    /// may be infinite.
    pub fn value(&self, t: f64) -> f64 {
        self.potential.value_unchecked(&self.point_at(t))
    }

    /// Directional derivative `grad U(x + v t) . v`.
    pub fn slope(&self, t: f64) -> f64 {
        let g = self.potential.gradient_unchecked(&self.point_at(t));
        g.iter()
            .zip(self.direction.iter())
            .map(|(gi, vi)| gi * vi)
            .sum()
    }
}

impl fmt::Debug for LineSection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LineSection")
            .field("base", &self.base)
            .field("direction", &self.direction)
            .field("t_max", &self.t_max)
            .finish()
    }
}

/// Restrict `p` to the ray from `x` in unit direction `v`.
pub fn restrict_to_line(p: &Potential, x: &[f64], v: &[f64]) -> Result<LineSection> {
    if x.len() != p.dim() || v.len() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            got: x.len().max(v.len()),
        });
    }
    let norm: f64 = v.iter().map(|vi| vi * vi).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::NotUnitLength);
    }
    if !p.domain().contains(x) {
        return Err(Error::DomainViolation);
    }
    let t_max = p.domain().ray_exit(x, v);
    Ok(LineSection {
        potential: p.clone(),
        base: x.to_vec(),
        direction: v.to_vec(),
        t_max,
        scratch_dim: p.dim(),
    })
}

/// Uniform draw from the unit sphere S^{d-1}. In one dimension this is
/// +-1 with equal probability; otherwise d normals, normalized.
pub fn sample_unit_sphere(rng: &mut ChainRng, d: usize) -> Vec<f64> {
    assert!(d >= 1, "dimension must be at least 1");
    if d == 1 {
        let u: f64 = rng.random();
        return vec![if u < 0.5 { -1.0 } else { 1.0 }];
    }
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let norm: f64 = v.iter().map(|vi| vi * vi).sum::<f64>().sqrt();
        if norm > 1e-8 {
            return v.into_iter().map(|vi| vi / norm).collect();
        }
    }
}

/// Max relative disagreement between `grad` and a central finite
/// difference of `u`, over all coordinates. Errors when the probe
/// stencil leaves the domain or hits non-finite values.
pub fn check_gradient(p: &Potential, x: &[f64]) -> Result<f64> {
    let g = p.gradient(x)?;
    let mut worst: f64 = 0.0;
    let mut probe = x.to_vec();
    for i in 0..p.dim() {
        let h = 1e-6 * (1.0 + x[i].abs());
        probe[i] = x[i] + h;
        let up = p.value(&probe)?;
        probe[i] = x[i] - h;
        let dn = p.value(&probe)?;
        probe[i] = x[i];
        if !up.is_finite() || !dn.is_finite() {
            return Err(Error::Numerical("potential not finite near probe point"));
        }
        let fd = (up - dn) / (2.0 * h);
        worst = worst.max((fd - g[i]).abs() / (1.0 + g[i].abs()));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;

    fn std_gaussian() -> Potential {
        Potential::new(
            DomainSet::full(1),
            |x: &[f64]| 0.5 * x[0] * x[0],
            |x: &[f64]| vec![x[0]],
            true,
        )
    }

    fn unit_uniform() -> Potential {
        Potential::new(DomainSet::interval(0.0, 1.0), |_| 0.0, |_| vec![0.0], true)
    }

    #[test]
    fn gaussian_section_matches_closed_form() {
        // U(x) = x^2/2 restricted to x = -1, v = +1: value(t) = (t-1)^2/2,
        // slope(0) = U'(-1) = -1.
        let p = std_gaussian();
        let line = restrict_to_line(&p, &[-1.0], &[1.0]).unwrap();
        assert!((line.slope(0.0) - (-1.0)).abs() < 1e-15);
        for t in [0.0, 0.5, 1.0, 2.0, 3.7] {
            let expect = (t - 1.0) * (t - 1.0) / 2.0;
            assert!((line.value(t) - expect).abs() < 1e-12);
        }
        assert_eq!(line.t_max(), f64::INFINITY);
    }

    #[test]
    fn uniform_ray_exits_at_wall() {
        let p = unit_uniform();
        let line = restrict_to_line(&p, &[0.5], &[1.0]).unwrap();
        assert_eq!(line.t_range(), (0.0, 0.5));
        let back = restrict_to_line(&p, &[0.5], &[-1.0]).unwrap();
        assert_eq!(back.t_max(), 0.5);
    }

    #[test]
    fn orthant_cube_ray_exit_hits_first_wall() {
        // {b > 0}^1 x [-1,1] cube in 2-D from (1, 0) along (-1, 0).
        let d = DomainSet::orthant_cube(vec![1.0], 1, 1.0).unwrap();
        assert!((d.ray_exit(&[1.0, 0.0], &[-1.0, 0.0]) - 1.0).abs() < 1e-15);
        assert!(d.contains(&[0.5, 0.0]));
        assert!(!d.contains(&[0.0, 0.0]));
        assert!(!d.contains(&[0.5, 1.0]));
    }

    #[test]
    fn outside_domain_is_an_error() {
        let p = unit_uniform();
        assert!(matches!(p.value(&[1.5]), Err(Error::DomainViolation)));
        assert!(matches!(p.value(&[1.0]), Err(Error::DomainViolation)));
        assert!(matches!(
            restrict_to_line(&p, &[1.5], &[1.0]),
            Err(Error::DomainViolation)
        ));
    }

    #[test]
    fn non_unit_direction_rejected() {
        let p = std_gaussian();
        assert!(matches!(
            restrict_to_line(&p, &[0.0], &[1.0 + 1e-6]),
            Err(Error::NotUnitLength)
        ));
    }

    #[test]
    fn sphere_d1_is_two_point_uniform() {
        let mut rng = rng_from_seed(11);
        let mut lo = 0usize;
        for _ in 0..10_000 {
            let v = sample_unit_sphere(&mut rng, 1);
            assert!(v[0] == 1.0 || v[0] == -1.0);
            if v[0] < 0.0 {
                lo += 1;
            }
        }
        assert!((lo as f64 / 10_000.0 - 0.5).abs() < 0.02);
    }

    #[test]
    fn sphere_draws_have_unit_norm_and_zero_mean() {
        let mut rng = rng_from_seed(12);
        let n = 100_000;
        let mut mean = [0.0f64; 2];
        for _ in 0..n {
            let v = sample_unit_sphere(&mut rng, 2);
            let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!((norm - 1.0).abs() < 1e-12);
            mean[0] += v[0];
            mean[1] += v[1];
        }
        assert!((mean[0] / n as f64).abs() < 0.02);
        assert!((mean[1] / n as f64).abs() < 0.02);
    }

    #[test]
    fn gradient_check_accepts_interior_rejects_boundary() {
        let p = std_gaussian();
        assert!(check_gradient(&p, &[0.3]).unwrap() < 1e-5);

        let u = unit_uniform();
        // probe stencil leaves (0,1)
        assert!(check_gradient(&u, &[1.0 - 1e-9]).is_err());
    }

    #[test]
    fn section_agrees_with_potential_along_ray() {
        let p = std_gaussian();
        let line = restrict_to_line(&p, &[0.25], &[-1.0]).unwrap();
        for t in [0.0, 0.1, 1.0, 2.5] {
            let direct = p.value(&[0.25 - t]).unwrap();
            let rel = (line.value(t) - direct).abs() / (1.0 + direct.abs());
            assert!(rel < 1e-12);
        }
    }
}
