//! Exchange-algorithm MCMC for the Bingham concentrations.
//!
//! The posterior under independent exponential priors restricted to
//! `λ₁ ≥ … ≥ λ_{q-1} ≥ 0` contains `c(Λ)⁻ⁿ`, which has no closed form. Each
//! exchange step proposes `λ′`, simulates an auxiliary data set `y` of the same
//! size from `Bingham(λ′)`, and accepts with
//!
//! ```text
//! f*(x|λ′) π(λ′) f*(y|λ)
//! ----------------------
//! f*(x|λ)  π(λ)  f*(y|λ′)
//! ```
//!
//! in which every normalising constant cancels. The random-walk proposal is
//! symmetric, so proposal densities are omitted from the ratio.

use crate::error::{BinghamError, Result};
use crate::model::{is_ordered_nonnegative, log_unnorm_lik, LambdaVector, SufficientStats};
use crate::samplers::{BPolicy, BinghamSampler, RngState};

/// Prior rate used when none is given (prior mean 100).
pub const DEFAULT_PRIOR_RATE: f64 = 0.01;

/// Independent exponential priors with rates `μᵢ`, restricted to ordered `λ`.
#[derive(Debug, Clone, PartialEq)]
pub struct PriorSpec {
    rates: Vec<f64>,
}

impl PriorSpec {
    pub fn new(rates: Vec<f64>) -> Result<Self> {
        if rates.is_empty() || rates.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
            return Err(BinghamError::InvalidInput(format!(
                "prior rates must be finite and strictly positive, got {rates:?}"
            )));
        }
        Ok(Self { rates })
    }

    /// The same rate for each of the `q - 1` concentrations.
    pub fn with_rate(q: usize, rate: f64) -> Result<Self> {
        Self::new(vec![rate; q.saturating_sub(1)])
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }
}

/// Log prior density up to an additive constant; `-∞` off the ordered support.
pub fn log_prior(lam: &[f64], prior: &PriorSpec) -> f64 {
    assert_eq!(lam.len(), prior.rates.len(), "dimension mismatch");
    if !is_ordered_nonnegative(lam) {
        return f64::NEG_INFINITY;
    }
    -lam.iter().zip(&prior.rates).map(|(l, m)| l * m).sum::<f64>()
}

/// Gaussian random-walk proposal with covariance `σI` (σ is a variance).
pub fn propose(lam: &LambdaVector, sigma: f64, rng: &mut RngState) -> Vec<f64> {
    lam.as_slice().iter().map(|l| rng.normal(*l, sigma)).collect()
}

/// Log acceptance ratio of the exchange move `λ → λ′` with auxiliary data
/// summarised by `stats_aux` (simulated from `λ′`).
pub fn exchange_log_ratio(
    stats_obs: &SufficientStats,
    stats_aux: &SufficientStats,
    lam: &LambdaVector,
    lam_can: &LambdaVector,
    prior: &PriorSpec,
) -> Result<f64> {
    if stats_aux.n() != stats_obs.n() {
        return Err(BinghamError::InvalidInput(format!(
            "auxiliary sample size {} differs from observed {}",
            stats_aux.n(),
            stats_obs.n()
        )));
    }
    let num = log_unnorm_lik(stats_obs, lam_can)
        + log_unnorm_lik(stats_aux, lam)
        + log_prior(lam_can.as_slice(), prior);
    let den = log_unnorm_lik(stats_obs, lam)
        + log_unnorm_lik(stats_aux, lam_can)
        + log_prior(lam.as_slice(), prior);
    Ok(num - den)
}

/// Settings for one random-walk chain.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainConfig {
    /// Total iterations, burn-in included.
    pub iterations: usize,
    pub burn_in: usize,
    pub thin: usize,
    /// Proposal variance per coordinate.
    pub proposal_sigma: f64,
    pub b: BPolicy,
    pub seed: u64,
    /// Starting point; the origin (uniform distribution) when `None`.
    pub init: Option<Vec<f64>>,
}

impl ChainConfig {
    /// Defaults: 10% burn-in, keep every 10th draw, `σ = 1`, `b = 1`.
    pub fn new(iterations: usize, seed: u64) -> Self {
        Self {
            iterations,
            burn_in: iterations / 10,
            thin: 10,
            proposal_sigma: 1.0,
            b: BPolicy::default(),
            seed,
            init: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(BinghamError::InvalidInput(msg));
        if self.iterations <= self.burn_in {
            return bad(format!(
                "iterations ({}) must exceed burn-in ({})",
                self.iterations, self.burn_in
            ));
        }
        if self.thin == 0 {
            return bad("thin must be >= 1".into());
        }
        if !(self.proposal_sigma.is_finite() && self.proposal_sigma > 0.0) {
            return bad(format!(
                "proposal sigma must be positive, got {}",
                self.proposal_sigma
            ));
        }
        if let BPolicy::Fixed(b) = self.b {
            if !(b.is_finite() && b > 0.0) {
                return bad(format!("tuning constant b must be positive, got {b}"));
            }
        }
        Ok(())
    }

    /// Number of draws a completed chain stores.
    pub fn stored_draws(&self) -> usize {
        (self.iterations - self.burn_in) / self.thin
    }
}

/// Thinned post-burn-in draws with acceptance bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct Chain {
    pub draws: Vec<LambdaVector>,
    /// Accepted moves over all iterations, burn-in included.
    pub accept_count: u64,
    pub proposed_count: u64,
    /// Proposals rejected for leaving the ordered support.
    pub support_rejections: u64,
    /// Rejection-sampler candidates consumed for auxiliary data.
    pub auxiliary_trials: u64,
    pub config: ChainConfig,
    pub stats: SufficientStats,
}

impl Chain {
    pub fn acceptance_rate(&self) -> f64 {
        if self.proposed_count == 0 {
            return 0.0;
        }
        self.accept_count as f64 / self.proposed_count as f64
    }

    /// Acceptance rate among proposals that stayed inside the ordered
    /// support, i.e. those for which an exchange move was attempted.
    pub fn exchange_acceptance_rate(&self) -> f64 {
        let attempted = self.proposed_count - self.support_rejections;
        if attempted == 0 {
            return 0.0;
        }
        self.accept_count as f64 / attempted as f64
    }

    /// Number of concentration parameters, `q - 1`.
    pub fn dim(&self) -> usize {
        self.stats.taus().len()
    }

    /// Trace of parameter `i` across stored draws.
    pub fn column(&self, i: usize) -> Vec<f64> {
        self.draws.iter().map(|d| d.as_slice()[i]).collect()
    }
}

/// Runs the exchange algorithm on observed sufficient statistics.
///
/// Proposals outside the ordered support are rejected before any auxiliary
/// data are simulated; their acceptance probability is zero either way.
pub fn run_exchange(stats: &SufficientStats, prior: &PriorSpec, cfg: &ChainConfig) -> Result<Chain> {
    let n = stats.n();
    let policy = cfg.b;
    let mut auxiliary_trials = 0;
    let mut chain = random_walk_chain(stats, prior, cfg, |cur, can, rng| {
        let b = policy.resolve(can);
        let (aux, trials) = BinghamSampler::with_b(can, b)?.sample_stats(n, rng)?;
        auxiliary_trials += trials;
        exchange_log_ratio(stats, &aux, cur, can, prior)
    })?;
    chain.auxiliary_trials = auxiliary_trials;
    Ok(chain)
}

/// Shared random-walk Metropolis driver. `log_ratio(current, candidate, rng)`
/// is only called for candidates inside the prior support.
pub(crate) fn random_walk_chain<F>(
    stats: &SufficientStats,
    prior: &PriorSpec,
    cfg: &ChainConfig,
    mut log_ratio: F,
) -> Result<Chain>
where
    F: FnMut(&LambdaVector, &LambdaVector, &mut RngState) -> Result<f64>,
{
    cfg.validate()?;
    let dim = stats.taus().len();
    if prior.rates().len() != dim {
        return Err(BinghamError::DimensionMismatch {
            expected: dim,
            got: prior.rates().len(),
        });
    }
    let mut current = match &cfg.init {
        Some(v) if v.len() != dim => {
            return Err(BinghamError::DimensionMismatch {
                expected: dim,
                got: v.len(),
            })
        }
        Some(v) => LambdaVector::new(v.clone())?,
        None => LambdaVector::zeros(dim + 1),
    };

    let mut rng = RngState::new(cfg.seed, 0);
    let mut draws = Vec::with_capacity(cfg.stored_draws());
    let (mut accepted, mut support_rejections) = (0u64, 0u64);

    for iter in 1..=cfg.iterations {
        let raw = propose(&current, cfg.proposal_sigma, &mut rng);
        if log_prior(&raw, prior) == f64::NEG_INFINITY {
            support_rejections += 1;
        } else {
            let candidate = LambdaVector::new(raw)?;
            let ratio = log_ratio(&current, &candidate, &mut rng)?;
            if ratio >= 0.0 || rng.uniform().ln() < ratio {
                current = candidate;
                accepted += 1;
            }
        }
        if iter > cfg.burn_in && (iter - cfg.burn_in) % cfg.thin == 0 {
            assert!(is_ordered_nonnegative(current.as_slice()));
            draws.push(current.clone());
        }
    }

    Ok(Chain {
        draws,
        accept_count: accepted,
        proposed_count: cfg.iterations as u64,
        support_rejections,
        auxiliary_trials: 0,
        config: cfg.clone(),
        stats: stats.clone(),
    })
}
