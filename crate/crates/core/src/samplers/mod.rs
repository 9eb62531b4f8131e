//! Exact simulation from the angular central Gaussian (ACG) and Bingham
//! distributions.
//!
//! Bingham draws use rejection sampling with an ACG envelope whose inverse
//! covariance is `Ψ⁻¹ = I + (2/b)Λ`. Writing `t = xᵀΛx`, the ratio of
//! unnormalised densities is `f*/g* = e^{-t} (1 + 2t/b)^{q/2}`, which is
//! maximised over `t ≥ 0` at `t = (q - b)/2`. That closed form is the bound
//! `M*` used here.

mod rng;

pub use rng::RngState;

use crate::error::{BinghamError, Result};
use crate::model::{LambdaVector, SufficientStats, UnitVector};

/// Trials allowed for one accepted draw before the sampler gives up.
pub const MAX_TRIALS_PER_DRAW: u64 = 10_000_000;

/// Slack (in log space) allowed when checking `f* ≤ M* g*`.
pub const BOUND_SLACK: f64 = 1e-12;

/// Default envelope tuning constant.
pub const DEFAULT_B: f64 = 1.0;

/// Absolute tolerance in `b` for [`tune_b`].
pub const TUNE_B_TOLERANCE: f64 = 1e-6;

/// How the envelope constant `b` is chosen for each parameter value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BPolicy {
    Fixed(f64),
    /// Re-tune `b` numerically for every `λ`.
    Auto,
}

impl Default for BPolicy {
    fn default() -> Self {
        BPolicy::Fixed(DEFAULT_B)
    }
}

impl BPolicy {
    pub fn resolve(&self, lam: &LambdaVector) -> f64 {
        match *self {
            BPolicy::Fixed(b) => b,
            BPolicy::Auto => tune_b(lam),
        }
    }
}

impl std::fmt::Display for BPolicy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BPolicy::Fixed(b) => write!(f, "{b}"),
            BPolicy::Auto => write!(f, "auto"),
        }
    }
}

/// ACG envelope: diagonal variances `ψᵢ = 1/(1 + 2λᵢ/b)` (with `ψ_q = 1`),
/// the tuning constant `b` and `log M*`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeParams {
    b: f64,
    psis: Vec<f64>,
    inv_psis: Vec<f64>,
    sqrt_psis: Vec<f64>,
    log_mstar: f64,
}

impl EnvelopeParams {
    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn psis(&self) -> &[f64] {
        &self.psis
    }

    pub fn log_mstar(&self) -> f64 {
        self.log_mstar
    }

    pub fn q(&self) -> usize {
        self.psis.len()
    }

    /// `log Z_g = log w_q + ½ Σ log ψᵢ`, the ACG normaliser for unnormalised `g*`.
    pub fn log_normalizer(&self) -> f64 {
        log_sphere_area(self.q()) + 0.5 * self.psis.iter().map(|p| p.ln()).sum::<f64>()
    }

    /// Expected trials per accepted Bingham draw, `M = M* Z_g / c(Λ)`, given
    /// the Bingham normalising constant `c(Λ)`.
    pub fn expected_trials(&self, bingham_constant: f64) -> f64 {
        (self.log_mstar + self.log_normalizer() - bingham_constant.ln()).exp()
    }
}

/// `log(sup_{t ≥ 0} e^{-t} (1 + 2t/b)^{q/2})` for `0 < b ≤ q`.
pub fn log_mstar(q: usize, b: f64) -> f64 {
    let qf = q as f64;
    if b >= qf {
        return 0.0;
    }
    -(qf - b) / 2.0 + 0.5 * qf * (qf / b).ln()
}

/// Builds the ACG envelope for `Λ` with tuning constant `b ∈ (0, q]`.
pub fn envelope_for(lam: &LambdaVector, b: f64) -> Result<EnvelopeParams> {
    let q = lam.q();
    if !(b > 0.0 && b <= q as f64) {
        return Err(BinghamError::InvalidInput(format!(
            "tuning constant b must lie in (0, {q}], got {b}"
        )));
    }
    let mut psis: Vec<f64> = lam.as_slice().iter().map(|l| 1.0 / (1.0 + 2.0 * l / b)).collect();
    psis.push(1.0);
    Ok(EnvelopeParams {
        b,
        inv_psis: psis.iter().map(|p| 1.0 / p).collect(),
        sqrt_psis: psis.iter().map(|p| p.sqrt()).collect(),
        psis,
        log_mstar: log_mstar(q, b),
    })
}

/// `log g*(x; Ψ) = -(q/2) log(xᵀΨ⁻¹x)`.
pub fn acg_log_unnorm(x: &UnitVector, env: &EnvelopeParams) -> f64 {
    assert_eq!(x.dim(), env.q(), "dimension mismatch");
    acg_log_unnorm_raw(x.coords(), env)
}

#[inline]
fn acg_log_unnorm_raw(x: &[f64], env: &EnvelopeParams) -> f64 {
    let quad: f64 = x.iter().zip(&env.inv_psis).map(|(c, ip)| c * c * ip).sum();
    -0.5 * env.q() as f64 * quad.ln()
}

/// Projects `y ~ N(0, diag ψ)` onto the sphere.
pub fn acg_sample(env: &EnvelopeParams, rng: &mut RngState) -> UnitVector {
    let mut buf = vec![0.0; env.q()];
    acg_sample_into(env, rng, &mut buf);
    UnitVector::from_normalized(buf)
}

#[inline]
fn acg_sample_into(env: &EnvelopeParams, rng: &mut RngState, out: &mut [f64]) {
    loop {
        let mut norm_sq = 0.0;
        for (o, sp) in out.iter_mut().zip(&env.sqrt_psis) {
            let y = sp * rng.standard_normal();
            *o = y;
            norm_sq += y * y;
        }
        if norm_sq > 0.0 {
            let inv = 1.0 / norm_sq.sqrt();
            out.iter_mut().for_each(|o| *o *= inv);
            return;
        }
    }
}

/// Log of `M*(b) · ∏ ψᵢ(b)^{1/2}`, proportional to the expected number of
/// rejection trials (the Bingham constant does not depend on `b`).
pub fn tuning_objective(lam: &LambdaVector, b: f64) -> f64 {
    let q = lam.q();
    log_mstar(q, b)
        - 0.5
            * lam
                .as_slice()
                .iter()
                .map(|l| (1.0 + 2.0 * l / b).ln())
                .sum::<f64>()
}

/// Chooses `b ∈ (0, q]` minimising the expected number of rejection trials.
///
/// Golden-section search on `(0, q]`; the endpoint `b = q` is compared
/// explicitly since the search never evaluates it.
pub fn tune_b(lam: &LambdaVector) -> f64 {
    let q = lam.q() as f64;
    let f = |b: f64| tuning_objective(lam, b);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;

    let (mut lo, mut hi) = (1e-9, q);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > TUNE_B_TOLERANCE {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    let mid = 0.5 * (lo + hi);
    if f(q) <= f(mid) {
        q
    } else {
        mid
    }
}

/// Rejection sampler for `Bingham(Λ)` with a fixed envelope and scratch space.
#[derive(Debug, Clone)]
pub struct BinghamSampler {
    lambdas: Vec<f64>,
    env: EnvelopeParams,
    candidate: Vec<f64>,
}

impl BinghamSampler {
    pub fn new(lam: &LambdaVector, env: EnvelopeParams) -> Result<Self> {
        if env.q() != lam.q() {
            return Err(BinghamError::DimensionMismatch {
                expected: lam.q(),
                got: env.q(),
            });
        }
        Ok(Self {
            lambdas: lam.as_slice().to_vec(),
            candidate: vec![0.0; env.q()],
            env,
        })
    }

    pub fn with_b(lam: &LambdaVector, b: f64) -> Result<Self> {
        Self::new(lam, envelope_for(lam, b)?)
    }

    pub fn envelope(&self) -> &EnvelopeParams {
        &self.env
    }

    /// Draws one accepted point into the internal buffer; returns the number
    /// of candidates consumed.
    fn draw(&mut self, rng: &mut RngState) -> Result<u64> {
        let half_q = 0.5 * self.env.q() as f64;
        for trial in 1..=MAX_TRIALS_PER_DRAW {
            acg_sample_into(&self.env, rng, &mut self.candidate);
            let mut t = 0.0;
            let mut quad = 0.0;
            for (i, c) in self.candidate.iter().enumerate() {
                let c2 = c * c;
                quad += c2 * self.env.inv_psis[i];
                if let Some(l) = self.lambdas.get(i) {
                    t += l * c2;
                }
            }
            let log_target = -t;
            let log_bound = self.env.log_mstar - half_q * quad.ln();
            if log_target > log_bound + BOUND_SLACK {
                return Err(BinghamError::BoundViolation {
                    log_target,
                    log_bound,
                });
            }
            // u < f*/(M* g*), in log space.
            if rng.uniform().ln() < log_target - log_bound {
                return Ok(trial);
            }
        }
        Err(BinghamError::TrialCapExceeded(MAX_TRIALS_PER_DRAW))
    }

    /// One exact Bingham draw and the number of candidates it took.
    pub fn sample(&mut self, rng: &mut RngState) -> Result<(UnitVector, u64)> {
        let trials = self.draw(rng)?;
        Ok((UnitVector::from_normalized(self.candidate.clone()), trials))
    }

    /// Draws `n` points and returns only their sufficient statistics and the
    /// total trial count. No per-draw allocation.
    pub fn sample_stats(&mut self, n: usize, rng: &mut RngState) -> Result<(SufficientStats, u64)> {
        let mut sums = vec![0.0; self.lambdas.len()];
        let mut trials = 0;
        for _ in 0..n {
            trials += self.draw(rng)?;
            for (s, c) in sums.iter_mut().zip(&self.candidate) {
                *s += c * c;
            }
        }
        let taus = sums.into_iter().map(|s| s / n as f64).collect();
        Ok((SufficientStats::new(n, taus)?, trials))
    }
}

/// One exact draw from `Bingham(Λ)` using the envelope `env`.
pub fn bingham_sample(
    lam: &LambdaVector,
    env: &EnvelopeParams,
    rng: &mut RngState,
) -> Result<(UnitVector, u64)> {
    BinghamSampler::new(lam, env.clone())?.sample(rng)
}

/// `n` independent exact draws from `Bingham(Λ)` with tuning constant `b`.
pub fn bingham_sample_n(
    lam: &LambdaVector,
    n: usize,
    b: f64,
    rng: &mut RngState,
) -> Result<Vec<UnitVector>> {
    if n == 0 {
        return Err(BinghamError::InvalidInput("sample size must be >= 1".into()));
    }
    let mut sampler = BinghamSampler::with_b(lam, b)?;
    (0..n).map(|_| sampler.sample(rng).map(|(x, _)| x)).collect()
}

/// `log w_q`, the log surface area of `S^{q-1}`: `w_q = 2π^{q/2} / Γ(q/2)`.
pub fn log_sphere_area(q: usize) -> f64 {
    use std::f64::consts::PI;
    std::f64::consts::LN_2 + 0.5 * q as f64 * PI.ln() - ln_gamma_half(q)
}

/// `log Γ(k/2)` for a positive integer `k`, by the recurrence `Γ(x + 1) = xΓ(x)`.
fn ln_gamma_half(k: usize) -> f64 {
    assert!(k >= 1);
    let (mut x, mut acc) = if k % 2 == 0 {
        (1.0, 0.0)
    } else {
        (0.5, 0.5 * std::f64::consts::PI.ln())
    };
    while x < k as f64 / 2.0 {
        acc += x.ln();
        x += 1.0;
    }
    acc
}
