//! Chain summaries and the two-population comparison on posterior differences.

use crate::error::{BinghamError, Result};
use crate::inference::Chain;

/// Sample autocorrelations `r_0..=r_max_lag`.
pub fn acf(series: &[f64], max_lag: usize) -> Result<Vec<f64>> {
    let n = series.len();
    if n <= max_lag {
        return Err(BinghamError::InvalidInput(format!(
            "series of length {n} is too short for lag {max_lag}"
        )));
    }
    let mean = series.iter().sum::<f64>() / n as f64;
    let centred: Vec<f64> = series.iter().map(|x| x - mean).collect();
    let denom: f64 = centred.iter().map(|d| d * d).sum();
    if denom == 0.0 {
        return Err(BinghamError::InvalidInput(
            "autocorrelation undefined for a constant series".into(),
        ));
    }
    Ok((0..=max_lag)
        .map(|k| {
            let num: f64 = centred[..n - k]
                .iter()
                .zip(&centred[k..])
                .map(|(a, b)| a * b)
                .sum();
            num / denom
        })
        .collect())
}

/// Effective sample size by Geyer's initial monotone sequence estimator.
///
/// Constant series return their length.
pub fn effective_sample_size(series: &[f64]) -> f64 {
    let n = series.len();
    if n < 4 {
        return n as f64;
    }
    let mean = series.iter().sum::<f64>() / n as f64;
    let centred: Vec<f64> = series.iter().map(|x| x - mean).collect();
    let c0: f64 = centred.iter().map(|d| d * d).sum::<f64>() / n as f64;
    if c0 == 0.0 {
        return n as f64;
    }
    let rho = |k: usize| -> f64 {
        centred[..n - k]
            .iter()
            .zip(&centred[k..])
            .map(|(a, b)| a * b)
            .sum::<f64>()
            / n as f64
            / c0
    };

    let mut tau = -1.0;
    let mut prev_pair = f64::INFINITY;
    let mut k = 0;
    while 2 * k + 1 < n {
        let pair = rho(2 * k) + rho(2 * k + 1);
        if pair <= 0.0 {
            break;
        }
        let pair = pair.min(prev_pair);
        tau += 2.0 * pair;
        prev_pair = pair;
        k += 1;
    }
    n as f64 / tau.max(1.0 / n as f64)
}

/// Monte Carlo standard error of the mean of an autocorrelated series.
pub fn mc_standard_error(series: &[f64]) -> f64 {
    let n = series.len() as f64;
    let mean = series.iter().sum::<f64>() / n;
    let var = series.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (var / effective_sample_size(series)).sqrt()
}

/// Empirical quantile with linear interpolation between order statistics
/// (`h = (n - 1)p`). `sorted` must be ascending.
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty() && (0.0..=1.0).contains(&p));
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Equal-tail interval containing probability `level`.
pub fn credible_interval(series: &[f64], level: f64) -> Result<(f64, f64)> {
    check_level(level)?;
    if series.is_empty() {
        return Err(BinghamError::InvalidInput("empty series".into()));
    }
    let mut sorted = series.to_vec();
    sorted.sort_by(f64::total_cmp);
    let tail = (1.0 - level) / 2.0;
    Ok((quantile(&sorted, tail), quantile(&sorted, 1.0 - tail)))
}

fn check_level(level: f64) -> Result<()> {
    if level > 0.0 && level < 1.0 {
        Ok(())
    } else {
        Err(BinghamError::InvalidInput(format!(
            "level must lie in (0, 1), got {level}"
        )))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParamSummary {
    pub mean: f64,
    pub sd: f64,
    pub lower: f64,
    pub upper: f64,
    pub ess: f64,
    /// Monte Carlo standard error of `mean`.
    pub mcse: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryReport {
    pub params: Vec<ParamSummary>,
    pub level: f64,
    pub acceptance_rate: f64,
    pub draws: usize,
}

pub fn summarize(chain: &Chain, level: f64) -> Result<SummaryReport> {
    check_level(level)?;
    if chain.draws.is_empty() {
        return Err(BinghamError::InvalidInput("chain has no draws".into()));
    }
    let params = (0..chain.dim())
        .map(|i| summarize_series(&chain.column(i), level))
        .collect::<Result<_>>()?;
    Ok(SummaryReport {
        params,
        level,
        acceptance_rate: chain.acceptance_rate(),
        draws: chain.draws.len(),
    })
}

/// Summary of one parameter trace.
pub fn summarize_series(xs: &[f64], level: f64) -> Result<ParamSummary> {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let sd = if xs.len() > 1 {
        (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    let (lower, upper) = credible_interval(xs, level)?;
    let ess = effective_sample_size(xs);
    Ok(ParamSummary {
        mean,
        sd,
        lower,
        upper,
        ess,
        mcse: sd / ess.sqrt(),
    })
}

/// Outcome of the bivariate-normal probability-region check on differences.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionTestResult {
    pub mean_diff: [f64; 2],
    pub cov_diff: [[f64; 2]; 2],
    pub mahalanobis_sq_origin: f64,
    pub threshold: f64,
    pub origin_inside: bool,
}

/// Quantile of the chi-square distribution with 2 degrees of freedom.
pub fn chi_square_2df_quantile(level: f64) -> f64 {
    -2.0 * (1.0 - level).ln()
}

/// Fits a bivariate normal to the paired differences `a - b` and checks
/// whether the origin lies inside its `level` probability ellipse.
///
/// Chains are paired by index after truncation to the shorter length.
pub fn difference_region_test(a: &Chain, b: &Chain, level: f64) -> Result<RegionTestResult> {
    let cols = |c: &Chain| -> Result<[Vec<f64>; 2]> {
        if c.dim() != 2 {
            return Err(BinghamError::DimensionMismatch {
                expected: 2,
                got: c.dim(),
            });
        }
        Ok([c.column(0), c.column(1)])
    };
    let (ca, cb) = (cols(a)?, cols(b)?);
    region_test_samples(&ca, &cb, level)
}

/// [`difference_region_test`] on raw two-column traces.
pub fn region_test_samples(a: &[Vec<f64>; 2], b: &[Vec<f64>; 2], level: f64) -> Result<RegionTestResult> {
    check_level(level)?;
    let len = a[0].len().min(b[0].len());
    if len < 3 {
        return Err(BinghamError::InvalidInput(format!(
            "need at least 3 paired draws, got {len}"
        )));
    }
    let diff: [Vec<f64>; 2] = [0, 1].map(|k| (0..len).map(|t| a[k][t] - b[k][t]).collect());
    let n = len as f64;
    let mean = [0, 1].map(|k| diff[k].iter().sum::<f64>() / n);
    let mut cov = [[0.0; 2]; 2];
    for (i, row) in cov.iter_mut().enumerate() {
        for (j, c) in row.iter_mut().enumerate() {
            *c = (0..len)
                .map(|t| (diff[i][t] - mean[i]) * (diff[j][t] - mean[j]))
                .sum::<f64>()
                / (n - 1.0);
        }
    }
    let det = cov[0][0] * cov[1][1] - cov[0][1] * cov[1][0];
    if !(det > 1e-12 * cov[0][0] * cov[1][1]) || cov[0][0] <= 0.0 {
        return Err(BinghamError::SingularCovariance(det));
    }
    // (0 - m)ᵀ Σ⁻¹ (0 - m)
    let (m0, m1) = (mean[0], mean[1]);
    let d2 = (cov[1][1] * m0 * m0 - 2.0 * cov[0][1] * m0 * m1 + cov[0][0] * m1 * m1) / det;
    let threshold = chi_square_2df_quantile(level);
    Ok(RegionTestResult {
        mean_diff: mean,
        cov_diff: cov,
        mahalanobis_sq_origin: d2,
        threshold,
        origin_inside: d2 <= threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samplers::RngState;

    #[test]
    fn acf_lag_zero_is_one() {
        let xs = [1.0, 3.0, 2.0, 5.0, 4.0];
        assert_eq!(acf(&xs, 2).unwrap()[0], 1.0);
    }

    #[test]
    fn acf_of_alternating_series() {
        // r_1 = -(n-1)/n for a zero-mean ±1 series.
        let xs: Vec<f64> = (0..10_000).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let r = acf(&xs, 1).unwrap();
        assert!((r[1] + 0.9999).abs() < 1e-12);
    }

    #[test]
    fn acf_of_white_noise_stays_in_band() {
        let mut rng = RngState::new(21, 0);
        let xs: Vec<f64> = (0..10_000).map(|_| rng.standard_normal()).collect();
        let r = acf(&xs, 20).unwrap();
        let band = 4.0 / (xs.len() as f64).sqrt();
        assert!(r[1..].iter().all(|v| v.abs() < band));
        assert!(r.iter().all(|v| v.abs() <= 1.0));
    }

    #[test]
    fn acf_errors() {
        assert!(acf(&[1.0, 1.0, 1.0], 1).is_err());
        assert!(acf(&[1.0, 2.0], 2).is_err());
    }

    #[test]
    fn quantile_rule() {
        let xs: Vec<f64> = (1..=100).map(f64::from).collect();
        let (lo, hi) = credible_interval(&xs, 0.9).unwrap();
        assert!((lo - 5.95).abs() < 1e-12);
        assert!((hi - 95.05).abs() < 1e-12);
    }

    #[test]
    fn constant_series_summary() {
        let s = summarize_series(&[2.5; 20], 0.95).unwrap();
        assert_eq!((s.sd, s.lower, s.upper), (0.0, 2.5, 2.5));
    }

    #[test]
    fn intervals_nest() {
        let mut rng = RngState::new(2, 0);
        let xs: Vec<f64> = (0..1000).map(|_| rng.exponential(1.0)).collect();
        let (a_lo, a_hi) = credible_interval(&xs, 0.5).unwrap();
        let (b_lo, b_hi) = credible_interval(&xs, 0.95).unwrap();
        assert!(b_lo <= a_lo && a_hi <= b_hi);
    }

    #[test]
    fn ess_of_iid_and_ar1() {
        let mut rng = RngState::new(4, 0);
        let iid: Vec<f64> = (0..20_000).map(|_| rng.standard_normal()).collect();
        let ess = effective_sample_size(&iid);
        assert!(ess > 17_000.0 && ess < 23_000.0, "{ess}");

        // AR(1) with φ = 0.9 has integrated autocorrelation time (1 + φ)/(1 - φ) = 19.
        let mut x = 0.0;
        let ar: Vec<f64> = (0..200_000)
            .map(|_| {
                x = 0.9 * x + rng.standard_normal();
                x
            })
            .collect();
        let ratio = ar.len() as f64 / effective_sample_size(&ar);
        assert!((ratio - 19.0).abs() < 2.0, "{ratio}");
    }

    #[test]
    fn chi_square_threshold() {
        assert!((chi_square_2df_quantile(0.95) - 5.991464547107979).abs() < 1e-12);
    }

    fn gaussian_pair(rng: &mut RngState, n: usize, shift: f64) -> [Vec<f64>; 2] {
        let a: Vec<f64> = (0..n).map(|_| shift + rng.standard_normal()).collect();
        let b: Vec<f64> = a.iter().map(|x| 0.5 * x + rng.standard_normal()).collect();
        [a, b]
    }

    #[test]
    fn separated_samples_exclude_origin() {
        let mut rng = RngState::new(9, 0);
        let a = gaussian_pair(&mut rng, 2000, 0.0);
        let b = [0, 1].map(|k| a[k].iter().map(|x| x + 10.0).collect::<Vec<_>>());
        // b is a shifted copy, so differences are constant: degenerate.
        assert!(matches!(
            region_test_samples(&a, &b, 0.95),
            Err(BinghamError::SingularCovariance(_))
        ));
        let b = gaussian_pair(&mut rng, 2000, 10.0);
        let r = region_test_samples(&a, &b, 0.95).unwrap();
        assert!(!r.origin_inside);
        assert_eq!(r.origin_inside, r.mahalanobis_sq_origin <= r.threshold);
    }

    #[test]
    fn same_population_contains_origin() {
        let mut rng = RngState::new(10, 0);
        let mut inside = 0;
        for _ in 0..50 {
            let a = gaussian_pair(&mut rng, 2000, 1.0);
            let b = gaussian_pair(&mut rng, 2000, 1.0);
            inside += region_test_samples(&a, &b, 0.95).unwrap().origin_inside as usize;
        }
        assert!(inside >= 45);
    }

    #[test]
    fn common_shift_leaves_statistic_unchanged() {
        let mut rng = RngState::new(11, 0);
        let a = gaussian_pair(&mut rng, 500, 0.0);
        let b = gaussian_pair(&mut rng, 500, 0.3);
        let base = region_test_samples(&a, &b, 0.95).unwrap();
        let shift = |s: &[Vec<f64>; 2]| [0, 1].map(|k| s[k].iter().map(|x| x + 0.25).collect::<Vec<_>>());
        let moved = region_test_samples(&shift(&a), &shift(&b), 0.95).unwrap();
        assert!((base.mahalanobis_sq_origin - moved.mahalanobis_sq_origin).abs() < 1e-9);
    }
}
