//! Statistical validation tools: KS statistics, histograms, effective
//! sample size, and numerical stationarity checks of the transition
//! kernels by quadrature of `integral pi(x) K(x, y) dx` against `pi(y)`.

use crate::arrival::{find_segmentation, integrated_rate, MonotoneSegmentation};
use crate::decomposition::{kernel_density_decomposed, MonotoneDecomposition};
use crate::distributions::TargetSpec;
use crate::error::{Error, Result};
use crate::potential::{restrict_to_line, LineSection};

/// Empirical CDF backed by a sorted copy of the samples.
#[derive(Clone, Debug)]
pub struct Ecdf {
    sorted: Vec<f64>,
}

impl Ecdf {
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.sorted.len();
        let k = self.sorted.partition_point(|&s| s <= x);
        k as f64 / n as f64
    }

    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }
}

pub fn ecdf(samples: &[f64]) -> Result<Ecdf> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(Ecdf { sorted })
}

/// Sup-norm distance between the empirical CDF of `samples` and `cdf`.
pub fn ks_distance<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<f64> {
    let e = ecdf(samples)?;
    let n = e.sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in e.sorted.iter().enumerate() {
        let f = cdf(x);
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    Ok(d)
}

/// Two-sample KS statistic.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<f64> {
    let ea = ecdf(a)?;
    let eb = ecdf(b)?;
    let mut d: f64 = 0.0;
    for &x in &ea.sorted {
        d = d.max((ea.eval(x) - eb.eval(x)).abs());
    }
    for &x in &eb.sorted {
        d = d.max((ea.eval(x) - eb.eval(x)).abs());
    }
    Ok(d)
}

/// Bin counts over `range` (defaults to the sample range).
pub fn histogram(samples: &[f64], bins: usize, range: Option<(f64, f64)>) -> Result<Vec<usize>> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    if bins == 0 {
        return Err(Error::InvalidArgument("need at least one bin"));
    }
    let (lo, hi) = range.unwrap_or_else(|| {
        let lo = samples.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = samples.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    });
    let width = hi - lo;
    let mut counts = vec![0usize; bins];
    for &x in samples {
        if x < lo || x > hi {
            continue;
        }
        let k = (((x - lo) / width * bins as f64) as usize).min(bins - 1);
        counts[k] += 1;
    }
    Ok(counts)
}

/// Effective sample size by the initial-positive-sequence estimator on
/// the sample autocorrelations.
pub fn ess(samples: &[f64]) -> Result<f64> {
    let n = samples.len();
    if n < 2 {
        return Err(Error::EmptySamples);
    }
    let mean = samples.iter().sum::<f64>() / n as f64;
    let c0: f64 = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n as f64;
    if c0 == 0.0 {
        return Err(Error::Numerical("zero-variance series has no ESS"));
    }
    let autocov = |k: usize| -> f64 {
        (0..n - k)
            .map(|i| (samples[i] - mean) * (samples[i + k] - mean))
            .sum::<f64>()
            / n as f64
    };
    let max_lag = (n - 1).min(2000);
    let mut tau = -1.0;
    let mut m = 0;
    loop {
        let l1 = 2 * m;
        let l2 = 2 * m + 1;
        if l1 > max_lag {
            break;
        }
        let g = autocov(l1) / c0 + if l2 <= max_lag { autocov(l2) / c0 } else { 0.0 };
        if g <= 0.0 {
            break;
        }
        tau += 2.0 * g;
        m += 1;
    }
    let tau = tau.max(1e-3);
    Ok(n as f64 / tau)
}

/// Which transition density to quadrature-check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelVariant {
    /// The sampler's kernel.
    Exact,
    /// Deliberately wrong kernel with the positive parts dropped; used as
    /// a negative control for the residual check itself.
    DropPositivePart,
}

/// Quadrature settings for the stationarity residual.
#[derive(Clone, Copy, Debug)]
pub struct StationarityOptions {
    pub n_grid: usize,
    pub n_test: usize,
    pub variant: KernelVariant,
}

impl Default for StationarityOptions {
    fn default() -> Self {
        StationarityOptions {
            n_grid: 2001,
            n_test: 21,
            variant: KernelVariant::Exact,
        }
    }
}

struct HalfLine {
    line: LineSection,
    seg: MonotoneSegmentation,
}

impl HalfLine {
    fn new(target: &TargetSpec, x: f64, v: f64, reach: f64) -> Result<Self> {
        let line = restrict_to_line(&target.potential, &[x], &[v])?;
        let horizon = reach.min(line.t_max());
        let seg = find_segmentation(&line, horizon.max(1e-12))?;
        Ok(HalfLine { line, seg })
    }

    fn mass(&self, t: f64, variant: KernelVariant) -> f64 {
        match variant {
            KernelVariant::Exact => {
                integrated_rate(&self.line, &self.seg, t.min(self.seg.horizon()))
                    .unwrap_or(f64::INFINITY)
            }
            KernelVariant::DropPositivePart => self.line.value(t) - self.line.value(0.0),
        }
    }

    fn rate_at(&self, t: f64, variant: KernelVariant) -> f64 {
        match variant {
            KernelVariant::Exact => self.line.slope(t).max(0.0),
            KernelVariant::DropPositivePart => self.line.slope(t),
        }
    }
}

/// Max absolute error of `integral pi(x) K(x, y) dx - pi(y)` over the test
/// points, with both sides normalized, for the general arrival kernel.
/// Bounded domains include the wall-clamp atoms, which is what makes the
/// uniform target (pure atoms) come out stationary.
pub fn stationarity_residual_main(
    target: &TargetSpec,
    opts: &StationarityOptions,
) -> Result<f64> {
    if target.dim() != 1 {
        return Err(Error::InvalidArgument(
            "stationarity quadrature is univariate",
        ));
    }
    let (lo, hi) = target.grid_hint;
    let n = opts.n_grid;
    let h = (hi - lo) / n as f64;
    // midpoint grid keeps evaluations away from the walls
    let xs: Vec<f64> = (0..n).map(|k| lo + (k as f64 + 0.5) * h).collect();
    let dens: Vec<f64> = xs
        .iter()
        .map(|&x| (-target.potential.value(&[x]).unwrap_or(f64::INFINITY)).exp())
        .collect();
    let z: f64 = dens.iter().sum::<f64>() * h;

    let (dom_lo, dom_hi) = target.potential.domain().coordinate_bounds(0);
    let bounded = dom_lo.is_finite() && dom_hi.is_finite();

    let ys: Vec<f64> = (0..opts.n_test)
        .map(|j| lo + (hi - lo) * (j as f64 + 0.37) / opts.n_test as f64)
        .collect();

    let eval_kernel = |x: f64,
                       right: &HalfLine,
                       left: &HalfLine,
                       y: f64|
     -> f64 {
        if y > x {
            let t = 2.0 * (y - x);
            if t < right.line.t_max() {
                right.rate_at(t, opts.variant) * (-right.mass(t, opts.variant)).exp()
            } else {
                0.0
            }
        } else {
            let t = 2.0 * (x - y);
            if t < left.line.t_max() {
                left.rate_at(t, opts.variant) * (-left.mass(t, opts.variant)).exp()
            } else {
                0.0
            }
        }
    };
    let density = |x: f64| (-target.potential.value(&[x]).unwrap_or(f64::INFINITY)).exp() / z;

    let halves: Vec<(HalfLine, HalfLine)> = xs
        .iter()
        .map(|&x| {
            let reach_r = 2.0 * (hi - x).max(0.0);
            let reach_l = 2.0 * (x - lo).max(0.0);
            Ok((
                HalfLine::new(target, x, 1.0, reach_r)?,
                HalfLine::new(target, x, -1.0, reach_l)?,
            ))
        })
        .collect::<Result<_>>()?;

    let mut lhs = vec![0.0f64; ys.len()];
    for (j, &y) in ys.iter().enumerate() {
        // the kernel jumps in x at x = y and, on bounded domains, at the
        // branch cutoffs x = 2y - wall; split those quadrature cells there
        let mut cuts: Vec<f64> = vec![y];
        if bounded {
            cuts.push(2.0 * y - dom_hi);
            cuts.push(2.0 * y - dom_lo);
        }
        cuts.retain(|c| *c > lo && *c < hi);
        let cut_cells: Vec<usize> = cuts.iter().map(|c| ((c - lo) / h) as usize).collect();

        let mut acc = 0.0;
        for (i, &x) in xs.iter().enumerate() {
            if cut_cells.contains(&i) {
                continue;
            }
            let (right, left) = &halves[i];
            acc += dens[i] / z * h * eval_kernel(x, right, left, y);
        }
        let mut seen = Vec::new();
        for &cell in &cut_cells {
            if seen.contains(&cell) {
                continue;
            }
            seen.push(cell);
            let cell_lo = lo + cell as f64 * h;
            let cell_hi = cell_lo + h;
            let mut edges = vec![cell_lo];
            for &c in &cuts {
                if c > cell_lo && c < cell_hi {
                    edges.push(c);
                }
            }
            edges.push(cell_hi);
            edges.sort_by(|a, b| a.partial_cmp(b).unwrap());
            for w in edges.windows(2) {
                let width = w[1] - w[0];
                if width <= 0.0 {
                    continue;
                }
                let xm = 0.5 * (w[0] + w[1]);
                let right = HalfLine::new(target, xm, 1.0, 2.0 * (hi - xm).max(0.0))?;
                let left = HalfLine::new(target, xm, -1.0, 2.0 * (xm - lo).max(0.0))?;
                acc += density(xm) * width * eval_kernel(xm, &right, &left, y);
            }
        }
        lhs[j] = acc;
    }

    // wall atoms: a chain that never consumes its threshold before the
    // wall lands exactly halfway to it
    if bounded {
        for (j, &y) in ys.iter().enumerate() {
            let x_r = 2.0 * y - dom_hi;
            if dom_lo < x_r && x_r < dom_hi {
                let half = HalfLine::new(target, x_r, 1.0, dom_hi - x_r)?;
                let survive = (-half.mass(dom_hi - x_r, opts.variant)).exp();
                let pdf = (-target.potential.value(&[x_r]).unwrap()).exp() / z;
                lhs[j] += pdf * survive;
            }
            let x_l = 2.0 * y - dom_lo;
            if dom_lo < x_l && x_l < dom_hi {
                let half = HalfLine::new(target, x_l, -1.0, x_l - dom_lo)?;
                let survive = (-half.mass(x_l - dom_lo, opts.variant)).exp();
                let pdf = (-target.potential.value(&[x_l]).unwrap()).exp() / z;
                lhs[j] += pdf * survive;
            }
        }
    }

    let mut worst: f64 = 0.0;
    for (j, &y) in ys.iter().enumerate() {
        let pi_y = (-target.potential.value(&[y]).unwrap()).exp() / z;
        worst = worst.max((lhs[j] - pi_y).abs());
    }
    Ok(worst)
}

/// Stationarity residual for the decomposition kernel on `range`.
pub fn stationarity_residual_decomposed(
    dec: &MonotoneDecomposition,
    range: (f64, f64),
    opts: &StationarityOptions,
) -> Result<f64> {
    let (lo, hi) = range;
    let n = opts.n_grid;
    let h = (hi - lo) / n as f64;
    let xs: Vec<f64> = (0..n).map(|k| lo + (k as f64 + 0.5) * h).collect();
    let dens: Vec<f64> = xs.iter().map(|&x| (-dec.u(x)).exp()).collect();
    let z: f64 = dens.iter().sum::<f64>() * h;

    let ys: Vec<f64> = (0..opts.n_test)
        .map(|j| lo + (hi - lo) * (j as f64 + 0.37) / opts.n_test as f64)
        .collect();

    let kernel = |x: f64, y: f64| -> Result<f64> {
        match opts.variant {
            KernelVariant::Exact => kernel_density_decomposed(dec, x, y),
            KernelVariant::DropPositivePart => {
                // wrong on purpose: survival uses the full potential
                let zpt = 2.0 * y - x;
                Ok(if zpt <= dec.domain().0 || zpt >= dec.domain().1 {
                    0.0
                } else if y > x {
                    dec.d1(zpt).max(0.0) * (-dec.u(zpt) + dec.u(x)).exp()
                } else {
                    (-dec.d2(zpt)).max(0.0) * (-dec.u(zpt) + dec.u(x)).exp()
                })
            }
        }
    };

    let (d_lo, d_hi) = dec.domain();
    let mut worst: f64 = 0.0;
    for &y in &ys {
        // the kernel jumps in x at x = y and at the domain cutoffs
        let mut cuts: Vec<f64> = vec![y];
        if d_hi.is_finite() {
            cuts.push(2.0 * y - d_hi);
        }
        if d_lo.is_finite() {
            cuts.push(2.0 * y - d_lo);
        }
        cuts.retain(|c| *c > lo && *c < hi);
        let cut_cells: Vec<usize> = cuts.iter().map(|c| ((c - lo) / h) as usize).collect();

        let mut lhs = 0.0;
        for (i, &x) in xs.iter().enumerate() {
            if cut_cells.contains(&i) {
                continue;
            }
            lhs += dens[i] / z * h * kernel(x, y)?;
        }
        let mut seen = Vec::new();
        for &cell in &cut_cells {
            if seen.contains(&cell) {
                continue;
            }
            seen.push(cell);
            let cell_lo = lo + cell as f64 * h;
            let cell_hi = cell_lo + h;
            let mut edges = vec![cell_lo];
            for &c in &cuts {
                if c > cell_lo && c < cell_hi {
                    edges.push(c);
                }
            }
            edges.push(cell_hi);
            edges.sort_by(|a, b| a.partial_cmp(b).unwrap());
            for w in edges.windows(2) {
                let width = w[1] - w[0];
                if width <= 0.0 {
                    continue;
                }
                let xm = 0.5 * (w[0] + w[1]);
                lhs += (-dec.u(xm)).exp() / z * width * kernel(xm, y)?;
            }
        }
        let pi_y = (-dec.u(y)).exp() / z;
        worst = worst.max((lhs - pi_y).abs());
    }
    Ok(worst)
}
