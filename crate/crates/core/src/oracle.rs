//! Brute-force quadrature for the Bingham normalising constant and moments on
//! the circle (`q = 2`) and the sphere (`q = 3`), plus a textbook
//! Metropolis-Hastings chain that evaluates `c(Λ)` explicitly.
//!
//! None of this is used by the exchange sampler; it exists to check it.

use std::f64::consts::PI;

use crate::error::{BinghamError, Result};
use crate::inference::{log_prior, random_walk_chain, Chain, ChainConfig, PriorSpec};
use crate::model::{log_unnorm_lik, LambdaVector, SufficientStats};

/// Tensor-product grid resolution: colatitude × longitude intervals on the
/// sphere; only `n_phi` is used on the circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureGrid {
    n_theta: usize,
    n_phi: usize,
}

impl Default for QuadratureGrid {
    fn default() -> Self {
        Self {
            n_theta: 1024,
            n_phi: 1024,
        }
    }
}

impl QuadratureGrid {
    pub const MIN_RESOLUTION: usize = 64;

    pub fn new(n_theta: usize, n_phi: usize) -> Result<Self> {
        for (name, n) in [("n_theta", n_theta), ("n_phi", n_phi)] {
            if n < Self::MIN_RESOLUTION || n % 2 != 0 {
                return Err(BinghamError::InvalidInput(format!(
                    "{name} must be even and >= {}, got {n}",
                    Self::MIN_RESOLUTION
                )));
            }
        }
        Ok(Self { n_theta, n_phi })
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn n_phi(&self) -> usize {
        self.n_phi
    }

    /// Twice the resolution in every direction.
    pub fn doubled(&self) -> Self {
        Self {
            n_theta: 2 * self.n_theta,
            n_phi: 2 * self.n_phi,
        }
    }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Composite Simpson weights on `n` (even) intervals of width `h`.
fn simpson_weights(n: usize, h: f64) -> Vec<f64> {
    (0..=n)
        .map(|i| {
            let m = if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            m * h / 3.0
        })
        .collect()
}

/// Precomputed nodes for repeated integrals of `exp(-Σ λᵢ xᵢ²) · xₖ²`.
///
/// On the sphere `x = (sin θ cos φ, sin θ sin φ, cos θ)`; the omitted
/// coordinate (with `λ_q = 0`) is the polar axis.
#[derive(Debug, Clone)]
pub struct SphereRule {
    q: usize,
    /// Colatitude weight times the `sin θ` Jacobian, and `sin² θ`, `cos² θ`.
    theta: Vec<(f64, f64, f64)>,
    /// Longitude weight, `cos² φ`, `sin² φ`.
    phi: Vec<(f64, f64, f64)>,
}

impl SphereRule {
    pub fn new(q: usize, grid: QuadratureGrid) -> Result<Self> {
        match q {
            2 => {
                let n = grid.n_phi;
                let h = 2.0 * PI / n as f64;
                let phi = (0..n)
                    .map(|j| {
                        let a = j as f64 * h;
                        (h, a.cos().powi(2), a.sin().powi(2))
                    })
                    .collect();
                Ok(Self {
                    q,
                    theta: Vec::new(),
                    phi,
                })
            }
            3 => {
                let h_t = PI / grid.n_theta as f64;
                let theta = simpson_weights(grid.n_theta, h_t)
                    .into_iter()
                    .enumerate()
                    .map(|(i, w)| {
                        let t = i as f64 * h_t;
                        (w * t.sin(), t.sin().powi(2), t.cos().powi(2))
                    })
                    .collect();
                let h_p = 2.0 * PI / grid.n_phi as f64;
                let phi = simpson_weights(grid.n_phi, h_p)
                    .into_iter()
                    .enumerate()
                    .map(|(j, w)| {
                        let a = j as f64 * h_p;
                        (w, a.cos().powi(2), a.sin().powi(2))
                    })
                    .collect();
                Ok(Self { q, theta, phi })
            }
            _ => Err(BinghamError::UnsupportedDimension(q)),
        }
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// `c(Λ)` followed by the unnormalised second moments `∫ xₖ² f* dS`.
    fn integrals(&self, lam: &LambdaVector, with_moments: bool) -> Result<(f64, Vec<f64>)> {
        if lam.q() != self.q {
            return Err(BinghamError::DimensionMismatch {
                expected: self.q,
                got: lam.q(),
            });
        }
        let l = lam.as_slice();
        let mut total = CompensatedSum::default();
        let mut moments = vec![CompensatedSum::default(); self.q];
        match self.q {
            2 => {
                for &(w, c2, s2) in &self.phi {
                    let f = w * (-l[0] * c2).exp();
                    total.add(f);
                    if with_moments {
                        moments[0].add(f * c2);
                        moments[1].add(f * s2);
                    }
                }
            }
            _ => {
                for &(wt, st2, ct2) in &self.theta {
                    // Rings hold positive terms of similar size; plain sums suffice there.
                    let (mut ring, mut ring_m1, mut ring_m2) = (0.0, 0.0, 0.0);
                    for &(wp, cp2, sp2) in &self.phi {
                        let x1 = st2 * cp2;
                        let x2 = st2 * sp2;
                        let f = wp * (-l[0] * x1 - l[1] * x2).exp();
                        ring += f;
                        if with_moments {
                            ring_m1 += f * x1;
                            ring_m2 += f * x2;
                        }
                    }
                    total.add(wt * ring);
                    if with_moments {
                        moments[0].add(wt * ring_m1);
                        moments[1].add(wt * ring_m2);
                        moments[2].add(wt * ct2 * ring);
                    }
                }
            }
        }
        Ok((total.value(), moments.iter().map(|m| m.value()).collect()))
    }

    /// `c(Λ) = ∫ exp(-Σ λᵢ xᵢ²) dS`.
    pub fn constant(&self, lam: &LambdaVector) -> Result<f64> {
        Ok(self.integrals(lam, false)?.0)
    }

    /// `E[xₖ²]` for every coordinate `k = 0..q`.
    pub fn moments(&self, lam: &LambdaVector) -> Result<Vec<f64>> {
        let (c, m) = self.integrals(lam, true)?;
        Ok(m.into_iter().map(|v| v / c).collect())
    }
}

/// Bingham normalising constant `c(Λ)` by quadrature (`q ∈ {2, 3}`).
pub fn constant_quadrature(lam: &LambdaVector, grid: QuadratureGrid) -> Result<f64> {
    SphereRule::new(lam.q(), grid)?.constant(lam)
}

/// `E[xᵢ²]` under `Bingham(Λ)` by quadrature; `i` ranges over all `q` coordinates.
pub fn moment_quadrature(lam: &LambdaVector, i: usize, grid: QuadratureGrid) -> Result<f64> {
    if i >= lam.q() {
        return Err(BinghamError::InvalidInput(format!(
            "coordinate index {i} out of range for q = {}",
            lam.q()
        )));
    }
    Ok(SphereRule::new(lam.q(), grid)?.moments(lam)?[i])
}

/// All `q` second moments in one pass.
pub fn moments_quadrature(lam: &LambdaVector, grid: QuadratureGrid) -> Result<Vec<f64>> {
    SphereRule::new(lam.q(), grid)?.moments(lam)
}

/// CDF of the angle `φ = atan2(x₂, x₁) ∈ [0, 2π)` of a circular Bingham law
/// with concentration `κ` on `x₁`.
#[derive(Debug, Clone)]
pub struct CircleAngleCdf {
    kappa: f64,
    norm: f64,
    resolution: usize,
}

impl CircleAngleCdf {
    /// `resolution` is the number of Simpson intervals per full turn.
    pub fn new(kappa: f64, resolution: usize) -> Result<Self> {
        if !(kappa.is_finite() && kappa >= 0.0) {
            return Err(BinghamError::InvalidInput(format!("bad concentration {kappa}")));
        }
        let mut cdf = Self {
            kappa,
            norm: 1.0,
            resolution: resolution.max(QuadratureGrid::MIN_RESOLUTION),
        };
        cdf.norm = cdf.partial_integral(2.0 * PI);
        Ok(cdf)
    }

    fn partial_integral(&self, upper: f64) -> f64 {
        if upper <= 0.0 {
            return 0.0;
        }
        let steps = ((upper / (2.0 * PI)) * self.resolution as f64).ceil() as usize;
        let n = (steps + steps % 2).max(2);
        let h = upper / n as f64;
        let mut acc = CompensatedSum::default();
        for (i, w) in simpson_weights(n, h).into_iter().enumerate() {
            let a = i as f64 * h;
            acc.add(w * (-self.kappa * a.cos().powi(2)).exp());
        }
        acc.value()
    }

    pub fn cdf(&self, angle: f64) -> f64 {
        (self.partial_integral(angle.clamp(0.0, 2.0 * PI)) / self.norm).clamp(0.0, 1.0)
    }
}

/// Random-walk Metropolis-Hastings on the same posterior as the exchange
/// sampler, with `c(Λ)` evaluated by quadrature at every proposal.
pub fn reference_mh_chain(
    stats: &SufficientStats,
    prior: &PriorSpec,
    cfg: &ChainConfig,
    grid: QuadratureGrid,
) -> Result<Chain> {
    let rule = SphereRule::new(stats.q(), grid)?;
    let n = stats.n() as f64;
    let log_post = |lam: &LambdaVector| -> Result<f64> {
        Ok(log_unnorm_lik(stats, lam) - n * rule.constant(lam)?.ln()
            + log_prior(lam.as_slice(), prior))
    };
    // Values at the last current and candidate points; one of them is the
    // next current state whatever the accept decision.
    let mut cache: [Option<(LambdaVector, f64)>; 2] = [None, None];
    random_walk_chain(stats, prior, cfg, |cur, can, _rng| {
        let cur_val = match cache.iter().flatten().find(|(l, _)| l == cur) {
            Some((_, v)) => *v,
            None => log_post(cur)?,
        };
        let can_val = log_post(can)?;
        cache = [Some((cur.clone(), cur_val)), Some((can.clone(), can_val))];
        Ok(can_val - cur_val)
    })
}

/// Random-walk chain targeting the ordered exponential prior alone.
pub fn reference_prior_chain(q: usize, prior: &PriorSpec, cfg: &ChainConfig) -> Result<Chain> {
    let placeholder = SufficientStats::new(1, vec![0.0; q.saturating_sub(1)])?;
    random_walk_chain(&placeholder, prior, cfg, |cur, can, _rng| {
        Ok(log_prior(can.as_slice(), prior) - log_prior(cur.as_slice(), prior))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam(v: &[f64]) -> LambdaVector {
        LambdaVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn uniform_constants_are_surface_areas() {
        let g = QuadratureGrid::default();
        let c3 = constant_quadrature(&LambdaVector::zeros(3), g).unwrap();
        assert!((c3 - 4.0 * PI).abs() / (4.0 * PI) < 1e-10, "{c3}");
        let c2 = constant_quadrature(&LambdaVector::zeros(2), g).unwrap();
        assert!((c2 - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn uniform_moments_are_one_third() {
        let m = moments_quadrature(&LambdaVector::zeros(3), QuadratureGrid::default()).unwrap();
        for v in m {
            assert!((v - 1.0 / 3.0).abs() < 1e-10);
        }
    }

    #[test]
    fn grid_doubling_is_stable() {
        let g = QuadratureGrid::default();
        for l in [[0.588, 0.421], [2.0, 1.0], [25.31, 0.762], [30.0, 30.0], [30.0, 0.0]] {
            let a = constant_quadrature(&lam(&l), g).unwrap();
            let b = constant_quadrature(&lam(&l), g.doubled()).unwrap();
            assert!((a - b).abs() / b <= 1e-8, "{l:?}: {a} vs {b}");
        }
    }

    #[test]
    fn moments_sum_to_one() {
        for l in [[0.588, 0.421], [25.31, 0.762], [7.0, 7.0]] {
            let m = moments_quadrature(&lam(&l), QuadratureGrid::default()).unwrap();
            assert!((m.iter().sum::<f64>() - 1.0).abs() < 1e-8);
        }
        let m = moments_quadrature(&lam(&[3.0]), QuadratureGrid::default()).unwrap();
        assert!((m[0] + m[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn moments_at_the_reported_estimates() {
        // At a maximum-likelihood estimate the fitted moments equal the taus.
        let m = moments_quadrature(&lam(&[25.31, 0.762]), QuadratureGrid::default()).unwrap();
        assert!((m[0] - 0.02).abs() < 0.02);
        assert!((m[1] - 0.40).abs() < 0.02);
        let m = moments_quadrature(&lam(&[0.588, 0.421]), QuadratureGrid::default()).unwrap();
        assert!((m[0] - 0.30).abs() < 0.005);
        assert!((m[1] - 0.32).abs() < 0.005);
    }

    #[test]
    fn moments_decrease_in_own_concentration() {
        let g = QuadratureGrid::new(128, 256).unwrap();
        let steps = [0.0, 0.5, 1.0, 2.0, 4.0, 8.0];
        for &other in &[0.0, 1.0] {
            let mut prev = f64::INFINITY;
            for &l1 in steps.iter().filter(|&&s| s >= other) {
                let m = moment_quadrature(&lam(&[l1, other]), 0, g).unwrap();
                assert!(m < prev);
                prev = m;
            }
        }
    }

    #[test]
    fn rejects_unsupported_dimension() {
        let l = lam(&[1.0, 0.5, 0.2]);
        assert_eq!(
            constant_quadrature(&l, QuadratureGrid::default()),
            Err(BinghamError::UnsupportedDimension(4))
        );
    }

    #[test]
    fn grid_validation() {
        assert!(QuadratureGrid::new(32, 64).is_err());
        assert!(QuadratureGrid::new(65, 128).is_err());
        assert!(QuadratureGrid::new(64, 128).is_ok());
    }

    #[test]
    fn circle_cdf_endpoints_and_symmetry() {
        let cdf = CircleAngleCdf::new(2.5, 4096).unwrap();
        assert_eq!(cdf.cdf(0.0), 0.0);
        assert!((cdf.cdf(2.0 * PI) - 1.0).abs() < 1e-14);
        // Antipodal symmetry: each half-turn carries half the mass.
        assert!((cdf.cdf(PI) - 0.5).abs() < 1e-12);
        assert!((cdf.cdf(PI / 2.0) - 0.25).abs() < 1e-12);
        let uniform = CircleAngleCdf::new(0.0, 1024).unwrap();
        assert!((uniform.cdf(1.0) - 1.0 / (2.0 * PI)).abs() < 1e-12);
    }

    #[test]
    fn reference_chain_accepts_identity_moves() {
        // A vanishing proposal scale keeps λ′ = λ, so the ratio is exactly 1.
        let stats = SufficientStats::new(100, vec![0.30, 0.32]).unwrap();
        let prior = PriorSpec::new(vec![0.01, 0.01]).unwrap();
        let mut cfg = ChainConfig::new(200, 3);
        cfg.proposal_sigma = 1e-300;
        cfg.init = Some(vec![1.0, 0.5]);
        let chain = reference_mh_chain(&stats, &prior, &cfg, QuadratureGrid::new(64, 128).unwrap())
            .unwrap();
        assert_eq!(chain.accept_count, 200);
    }
}
