use bingham_core::diagnostics::{mc_standard_error, summarize};
use bingham_core::inference::{exchange_log_ratio, log_prior, run_exchange, ChainConfig, PriorSpec};
use bingham_core::model::{log_unnorm_bingham, sufficient_stats, LambdaVector, SufficientStats};
use bingham_core::oracle::reference_prior_chain;
use bingham_core::samplers::{bingham_sample_n, RngState};
use proptest::prelude::*;

fn lam(v: &[f64]) -> LambdaVector {
    LambdaVector::new(v.to_vec()).unwrap()
}

#[test]
fn ratio_from_stats_matches_ratio_from_raw_data() {
    let prior = PriorSpec::new(vec![0.01, 0.02]).unwrap();
    let (cur, can) = (lam(&[1.3, 0.4]), lam(&[2.1, 0.9]));
    let mut rng = RngState::new(3, 0);
    let x = bingham_sample_n(&lam(&[0.588, 0.421]), 100, 1.0, &mut rng).unwrap();
    let y = bingham_sample_n(&can, 100, 1.0, &mut rng).unwrap();

    let sum = |data: &[_], l: &LambdaVector| -> f64 {
        data.iter().map(|v| log_unnorm_bingham(v, l)).sum()
    };
    let raw = (sum(&x, &can) + sum(&y, &cur) + log_prior(can.as_slice(), &prior))
        - (sum(&x, &cur) + sum(&y, &can) + log_prior(cur.as_slice(), &prior));
    let via_stats = exchange_log_ratio(
        &sufficient_stats(&x).unwrap(),
        &sufficient_stats(&y).unwrap(),
        &cur,
        &can,
        &prior,
    )
    .unwrap();
    assert!((raw - via_stats).abs() <= 1e-10 * raw.abs().max(1.0));
}

proptest! {
    #[test]
    fn common_shift_cancels(
        l1 in 0.0f64..10.0, dl in 0.0f64..5.0, m1 in 0.0f64..10.0, dm in 0.0f64..5.0,
        shift in 0.0f64..5.0,
        t1 in 0.0f64..0.5, t2 in 0.0f64..0.5, u1 in 0.0f64..0.5, u2 in 0.0f64..0.5,
    ) {
        let prior = PriorSpec::new(vec![0.01, 0.01]).unwrap();
        let obs = SufficientStats::new(50, vec![t1, t2]).unwrap();
        let aux = SufficientStats::new(50, vec![u1, u2]).unwrap();
        let (a, b) = (lam(&[l1 + dl, l1]), lam(&[m1 + dm, m1]));
        let (sa, sb) = (lam(&[l1 + dl + shift, l1 + shift]), lam(&[m1 + dm + shift, m1 + shift]));
        let base = exchange_log_ratio(&obs, &aux, &a, &b, &prior).unwrap();
        let shifted = exchange_log_ratio(&obs, &aux, &sa, &sb, &prior).unwrap();
        // Shifting both points equally changes the prior terms by the same
        // amount above and below, so the ratio is unchanged.
        prop_assert!((base - shifted).abs() < 1e-9 * (1.0 + base.abs()));
    }

    #[test]
    fn identity_proposal_always_accepted(
        l1 in 0.0f64..30.0, dl in 0.0f64..5.0, t1 in 0.0f64..0.5, t2 in 0.0f64..0.5,
    ) {
        let prior = PriorSpec::new(vec![0.01, 0.01]).unwrap();
        let obs = SufficientStats::new(10, vec![t1, t2]).unwrap();
        let l = lam(&[l1 + dl, l1]);
        prop_assert_eq!(exchange_log_ratio(&obs, &obs, &l, &l, &prior).unwrap(), 0.0);
    }
}

#[test]
fn dominant_prior_pulls_posterior_to_origin() {
    let stats = SufficientStats::new(100, vec![0.30, 0.32]).unwrap();
    let prior = PriorSpec::new(vec![1e3, 1e3]).unwrap();
    let mut cfg = ChainConfig::new(100_000, 11);
    cfg.proposal_sigma = 1e-6;
    let chain = run_exchange(&stats, &prior, &cfg).unwrap();
    let summary = summarize(&chain, 0.95).unwrap();
    for p in &summary.params {
        assert!(p.mean < 0.01, "posterior mean {}", p.mean);
    }
    // Sorting two iid Exp(1000) variables gives means 1.5e-3 and 0.5e-3; the
    // likelihood is nearly flat on this scale.
    assert!((summary.params[0].mean - 1.5e-3).abs() < 3e-4);
    assert!((summary.params[1].mean - 0.5e-3).abs() < 2e-4);
}

#[test]
fn prior_chain_matches_direct_simulation_of_ordered_prior() {
    let prior = PriorSpec::new(vec![1.0, 2.0]).unwrap();
    let mut cfg = ChainConfig::new(1_000_000, 5);
    cfg.proposal_sigma = 0.5;
    let chain = reference_prior_chain(3, &prior, &cfg).unwrap();

    // Independent exponentials conditioned on ordering, by rejection.
    let mut rng = RngState::new(6, 0);
    let mut direct = [Vec::new(), Vec::new()];
    while direct[0].len() < 200_000 {
        let (a, b) = (rng.exponential(1.0), rng.exponential(2.0));
        if a >= b {
            direct[0].push(a);
            direct[1].push(b);
        }
    }
    // Closed form for these rates: E[λ₁] = 1 + 1/3, E[λ₂] = 1/3.
    for (k, exact) in [4.0 / 3.0, 1.0 / 3.0].into_iter().enumerate() {
        let col = chain.column(k);
        let m_chain = col.iter().sum::<f64>() / col.len() as f64;
        let m_direct = direct[k].iter().sum::<f64>() / direct[k].len() as f64;
        let se = (mc_standard_error(&col).powi(2) + mc_standard_error(&direct[k]).powi(2)).sqrt();
        assert!((m_chain - m_direct).abs() < 3.0 * se, "k={k}: {m_chain} vs {m_direct}");
        assert!((m_direct - exact).abs() < 0.01);
    }
}

#[test]
fn acceptance_counts_include_support_rejections() {
    let stats = SufficientStats::new(100, vec![0.30, 0.32]).unwrap();
    let prior = PriorSpec::new(vec![0.01, 0.01]).unwrap();
    let chain = run_exchange(&stats, &prior, &ChainConfig::new(20_000, 1)).unwrap();
    assert_eq!(chain.proposed_count, 20_000);
    assert!(chain.support_rejections > 0);
    assert!(chain.accept_count + chain.support_rejections <= chain.proposed_count);
}
