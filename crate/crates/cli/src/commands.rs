//! Subcommand implementations. Each returns what it would print to standard
//! output together with the run manifest; `main` decides where those go.

use std::path::Path;
use std::time::Instant;

use bingham_core::diagnostics::{acf, effective_sample_size, region_test_samples, summarize};
use bingham_core::inference::{run_exchange, ChainConfig, PriorSpec, DEFAULT_PRIOR_RATE};
use bingham_core::model::{sufficient_stats, LambdaVector, SufficientStats};
use bingham_core::oracle::{QuadratureGrid, SphereRule};
use bingham_core::samplers::{envelope_for, tune_b, BPolicy, BinghamSampler, RngState};

use crate::args::{CompareArgs, DiagnoseArgs, FitArgs, OracleArgs, SimulateArgs};
use crate::error::CliError;
use crate::io::{
    fmt_f64, format_rows, parse_chain, parse_unit_vectors, read_to_string, sha256_hex, write_file,
    KeyValues,
};

/// Text for standard output plus the manifest describing the run.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub stdout: String,
    pub manifest: KeyValues,
}

/// Subcommand, every resolved parameter, library version, input digests and
/// wall-clock duration.
struct Manifest {
    started: Instant,
    kv: KeyValues,
}

impl Manifest {
    fn new(subcommand: &str) -> Self {
        let mut kv = KeyValues::default();
        kv.push("subcommand", subcommand);
        kv.push("version", env!("CARGO_PKG_VERSION"));
        Manifest {
            started: Instant::now(),
            kv,
        }
    }

    fn push(&mut self, key: impl Into<String>, value: impl ToString) {
        self.kv.push(key, value);
    }

    fn digest(&mut self, key: &str, path: &Path, contents: &str) {
        self.push(format!("{key}.path"), path.display());
        self.push(format!("{key}.sha256"), sha256_hex(contents.as_bytes()));
    }

    fn finish(mut self) -> KeyValues {
        self.push("duration.seconds", self.started.elapsed().as_secs_f64());
        self.kv
    }
}

fn join(values: &[f64]) -> String {
    values.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn data(msg: impl Into<String>) -> CliError {
    CliError::Data(msg.into())
}

/// Percentage label for a credible level: `0.95 -> "95"`, `0.975 -> "97.5"`.
fn level_label(level: f64) -> String {
    let pct = level * 100.0;
    if (pct - pct.round()).abs() < 1e-9 {
        format!("{}", pct.round() as i64)
    } else {
        format!("{pct}")
    }
}

pub fn simulate(args: &SimulateArgs) -> Result<Outcome, CliError> {
    let mut manifest = Manifest::new("simulate");
    let lam = LambdaVector::new(args.lambda.clone())?;
    let b = if args.tune_b { tune_b(&lam) } else { args.b };
    manifest.push("lambda", join(lam.as_slice()));
    manifest.push("n", args.n);
    manifest.push("b", b);
    manifest.push("b.source", if args.tune_b { "tuned" } else { "flag" });
    manifest.push("seed", args.seed);
    manifest.push("out", args.out.display());

    if args.n == 0 {
        return Err(data("sample size --n must be >= 1"));
    }
    let mut sampler = BinghamSampler::with_b(&lam, b)?;
    let mut rng = RngState::new(args.seed, 0);
    let mut draws = Vec::with_capacity(args.n);
    let mut trials = 0u64;
    for _ in 0..args.n {
        let (x, t) = sampler.sample(&mut rng)?;
        trials += t;
        draws.push(x);
    }
    let csv = format_rows(draws.iter().map(|x| x.coords()));
    write_file(&args.out, &csv)?;
    manifest.digest("output", &args.out, &csv);

    let stats = sufficient_stats(&draws)?;
    let mut out = KeyValues::default();
    out.push("n", stats.n());
    for (k, t) in stats.taus().iter().enumerate() {
        out.push(format!("tau{}", k + 1), fmt_f64(*t));
    }
    out.push("b", b);
    out.push("trials.mean", trials as f64 / args.n as f64);
    Ok(Outcome {
        stdout: out.render(),
        manifest: manifest.finish(),
    })
}

/// Observed statistics from whichever input flag was given.
fn fit_input(args: &FitArgs, manifest: &mut Manifest) -> Result<SufficientStats, CliError> {
    match (&args.data, &args.suff, args.preset) {
        (Some(path), None, None) => {
            let text = read_to_string(path)?;
            manifest.push("input", "data");
            manifest.digest("input", path, &text);
            Ok(sufficient_stats(&parse_unit_vectors(&text)?)?)
        }
        (None, Some(suff), None) => {
            let (&n, taus) = suff
                .split_first()
                .ok_or_else(|| usage("--suff needs n,tau1,...,tau_{q-1}"))?;
            if !(n >= 1.0 && n.fract() == 0.0 && n < u32::MAX as f64) {
                return Err(data(format!("--suff: n must be a positive integer, got {n}")));
            }
            if taus.is_empty() {
                return Err(usage("--suff needs at least one tau after n"));
            }
            manifest.push("input", "suff");
            manifest.push("input.sha256", sha256_hex(join(suff).as_bytes()));
            Ok(SufficientStats::new(n as usize, taus.to_vec())?)
        }
        (None, None, Some(preset)) => {
            let (n, taus) = preset.stats();
            manifest.push("input", "preset");
            manifest.push("input.preset", preset.name());
            Ok(SufficientStats::new(n, taus.to_vec())?)
        }
        _ => Err(usage("give exactly one of --data, --suff or --preset")),
    }
}

pub fn fit(args: &FitArgs) -> Result<Outcome, CliError> {
    let mut manifest = Manifest::new("fit");
    let stats = fit_input(args, &mut manifest)?;
    let dim = stats.taus().len();

    let rates = args
        .prior_rate
        .clone()
        .unwrap_or_else(|| vec![DEFAULT_PRIOR_RATE; dim]);
    if rates.len() != dim {
        return Err(data(format!(
            "--prior-rate has {} values, data need {dim}",
            rates.len()
        )));
    }
    let prior = PriorSpec::new(rates)?;
    if let Some(init) = &args.init {
        if init.len() != dim {
            return Err(data(format!("--init has {} values, data need {dim}", init.len())));
        }
    }

    let mut cfg = ChainConfig::new(args.iters, args.seed);
    cfg.thin = args.thin;
    cfg.proposal_sigma = args.sigma;
    cfg.init = args.init.clone();
    cfg.b = if args.tune_b {
        BPolicy::Auto
    } else {
        BPolicy::Fixed(args.b)
    };
    if let Some(burnin) = args.burnin {
        cfg.burn_in = burnin;
    }

    manifest.push("n", stats.n());
    for (k, t) in stats.taus().iter().enumerate() {
        manifest.push(format!("tau{}", k + 1), t);
    }
    for (k, r) in prior.rates().iter().enumerate() {
        manifest.push(format!("prior.rate{}", k + 1), r);
    }
    manifest.push("seed", cfg.seed);
    manifest.push("iters", cfg.iterations);
    manifest.push("thin", cfg.thin);
    manifest.push("burnin", cfg.burn_in);
    manifest.push(
        "burnin.source",
        if args.burnin.is_some() { "flag" } else { "default" },
    );
    manifest.push("sigma", cfg.proposal_sigma);
    manifest.push("b", cfg.b);
    manifest.push(
        "init",
        cfg.init.as_deref().map_or_else(|| "origin".to_string(), join),
    );
    manifest.push("level", args.level);
    manifest.push("out.chain", args.out_chain.display());
    manifest.push("out.summary", args.out_summary.display());

    let chain = run_exchange(&stats, &prior, &cfg)?;
    let report = summarize(&chain, args.level)?;

    let csv = format_rows(chain.draws.iter().map(LambdaVector::as_slice));
    write_file(&args.out_chain, &csv)?;
    manifest.digest("output.chain", &args.out_chain, &csv);

    let ci = format!("ci{}", level_label(args.level));
    let mut summary = KeyValues::default();
    for (k, p) in report.params.iter().enumerate() {
        let name = format!("lambda{}", k + 1);
        summary.push(format!("mean.{name}"), p.mean);
        summary.push(format!("sd.{name}"), p.sd);
        summary.push(format!("{ci}.lo.{name}"), p.lower);
        summary.push(format!("{ci}.hi.{name}"), p.upper);
        summary.push(format!("ess.{name}"), p.ess);
        summary.push(format!("mcse.{name}"), p.mcse);
    }
    summary.push("accept.rate", chain.acceptance_rate());
    summary.push("accept.rate.in_support", chain.exchange_acceptance_rate());
    summary.push("support.rejections", chain.support_rejections);
    summary.push("proposals", chain.proposed_count);
    summary.push("auxiliary.trials", chain.auxiliary_trials);
    summary.push("draws", report.draws);

    let manifest = manifest.finish();
    let mut file = summary.clone();
    file.extend(&manifest);
    write_file(&args.out_summary, &file.render())?;

    Ok(Outcome {
        stdout: summary.render(),
        manifest,
    })
}

pub fn diagnose(args: &DiagnoseArgs) -> Result<Outcome, CliError> {
    let mut manifest = Manifest::new("diagnose");
    let text = read_to_string(&args.chain)?;
    manifest.digest("input", &args.chain, &text);
    manifest.push("max.lag", args.max_lag);
    let columns = parse_chain(&text)?;
    let len = columns[0].len();
    if len <= args.max_lag {
        return Err(data(format!(
            "chain has {len} draws; need more than --max-lag {}",
            args.max_lag
        )));
    }
    let acfs = columns
        .iter()
        .map(|c| acf(c, args.max_lag))
        .collect::<Result<Vec<_>, _>>()?;

    let mut table = String::from("lag");
    for k in 0..columns.len() {
        table.push_str(&format!(",lambda{}", k + 1));
    }
    table.push('\n');
    for lag in 0..=args.max_lag {
        table.push_str(&lag.to_string());
        for r in &acfs {
            table.push(',');
            table.push_str(&fmt_f64(r[lag]));
        }
        table.push('\n');
    }

    let stdout = match &args.out {
        Some(path) => {
            write_file(path, &table)?;
            manifest.digest("output", path, &table);
            let mut kv = KeyValues::default();
            kv.push("draws", len);
            for (k, c) in columns.iter().enumerate() {
                kv.push(format!("ess.lambda{}", k + 1), effective_sample_size(c));
            }
            kv.render()
        }
        None => table,
    };
    Ok(Outcome {
        stdout,
        manifest: manifest.finish(),
    })
}

fn two_columns(path: &Path, manifest: &mut Manifest, key: &str) -> Result<[Vec<f64>; 2], CliError> {
    let text = read_to_string(path)?;
    manifest.digest(key, path, &text);
    let columns = parse_chain(&text)?;
    <[Vec<f64>; 2]>::try_from(columns).map_err(|c| {
        data(format!(
            "{}: region test needs 2 parameter columns, got {}",
            path.display(),
            c.len()
        ))
    })
}

pub fn compare(args: &CompareArgs) -> Result<Outcome, CliError> {
    let mut manifest = Manifest::new("compare");
    manifest.push("level", args.level);
    let a = two_columns(&args.chain_a, &mut manifest, "input.a")?;
    let b = two_columns(&args.chain_b, &mut manifest, "input.b")?;
    let r = region_test_samples(&a, &b, args.level)?;

    let mut out = KeyValues::default();
    out.push("pairs", a[0].len().min(b[0].len()));
    out.push("level", args.level);
    out.push("mean.diff.lambda1", r.mean_diff[0]);
    out.push("mean.diff.lambda2", r.mean_diff[1]);
    out.push("cov.diff.11", r.cov_diff[0][0]);
    out.push("cov.diff.12", r.cov_diff[0][1]);
    out.push("cov.diff.22", r.cov_diff[1][1]);
    out.push("mahalanobis.sq.origin", r.mahalanobis_sq_origin);
    out.push("threshold", r.threshold);
    out.push("origin.inside", r.origin_inside);
    out.push(
        "verdict",
        if r.origin_inside {
            "no evidence of a difference"
        } else {
            "difference"
        },
    );
    Ok(Outcome {
        stdout: out.render(),
        manifest: manifest.finish(),
    })
}

pub fn oracle(args: &OracleArgs) -> Result<Outcome, CliError> {
    let mut manifest = Manifest::new("oracle");
    let lam = LambdaVector::new(args.lambda.clone())?;
    let grid = QuadratureGrid::new(args.grid_theta, args.grid_phi)?;
    manifest.push("lambda", join(lam.as_slice()));
    manifest.push("grid.theta", grid.n_theta());
    manifest.push("grid.phi", grid.n_phi());

    let rule = SphereRule::new(lam.q(), grid)?;
    let c = rule.constant(&lam)?;
    let moments = rule.moments(&lam)?;
    let tuned = tune_b(&lam);

    let mut out = KeyValues::default();
    out.push("c", fmt_f64(c));
    for (k, m) in moments.iter().enumerate() {
        out.push(format!("moment{}", k + 1), fmt_f64(*m));
    }
    out.push("b.tuned", tuned);
    out.push("trials.b1", envelope_for(&lam, 1.0)?.expected_trials(c));
    out.push("trials.tuned", envelope_for(&lam, tuned)?.expected_trials(c));
    Ok(Outcome {
        stdout: out.render(),
        manifest: manifest.finish(),
    })
}
