//! Command-line front end.
//!
//! Reports go to `--out` (or standard output) as JSON by default, or as CSV
//! with `--csv`. Progress messages and the seed of unseeded runs go to
//! standard error.

mod reproduce;

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bounds::{
    ensemble_bound, hierarchy_bound_xi1, hs_bound, sre_mean_spectrum, sv_report, u_single_row, w_opt_candidates,
    xi2_bound, BoundReport, RankParam, SearchOptions,
};
use crate::code::{golay_extended, EnsembleSpec, LinearCode};
use crate::decoder::{compare_decoders, ComparisonReport, Decoder};
use crate::error::{invalid, Error, Result};
use crate::estimator::{epsilon_for_confidence, estimate_ensemble_spectrum, estimate_spectrum, EstimationResult};
use crate::gf2::DEFAULT_ROW_SPACE_LIMIT;
use crate::greedy::{greedy_extend, GreedyOptions, GreedyResult};
use crate::io::{load_matrix_file, save_matrix_file, MatrixFormat};
use crate::rng::random_seed;
use crate::stopping::{fer, spectrum_exhaustive, undecodable_profile, PatternProfile, ProfileMode, StoppingSpectrum, DEFAULT_SUBSET_BUDGET};

pub use reproduce::{ReproduceArgs, ReproduceReport};

#[derive(Parser, Debug)]
#[command(name = "stopred", version, about = "Stopping-redundancy bounds, spectra and redundant parity-check matrices")]
pub struct Cli {
    /// Code source: `builtin:golay` or a parity-check matrix file.
    #[arg(long, global = true, default_value = "builtin:golay")]
    pub code: String,
    /// Matrix file format (guessed from the extension when omitted).
    #[arg(long, global = true, value_enum)]
    pub format: Option<MatrixFormat>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Emit JSON (the default).
    #[arg(long, global = true, conflicts_with = "csv")]
    pub json: bool,
    /// Emit CSV.
    #[arg(long, global = true)]
    pub csv: bool,
    /// Seed for every random choice; a fresh one is printed when omitted.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads.
    #[arg(long, global = true, env = "STOPRED_THREADS")]
    pub threads: Option<usize>,
    /// Lift the work budgets on enumerations.
    #[arg(long, global = true)]
    pub force: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Closed-form and hierarchy bounds on the stopping redundancy.
    Bounds(BoundsArgs),
    /// Exhaustive or estimated stopping-set spectrum.
    Spectrum(SpectrumArgs),
    /// Greedy construction of a redundant parity-check matrix.
    Greedy(GreedyArgs),
    /// Undecodable erasure patterns, frame error rates and decoder comparison.
    Profile(ProfileArgs),
    /// Ensemble-average bounds for random parity-check ensembles.
    Ensemble(EnsembleArgs),
    /// Recompute the reference tables and compare against the shipped values.
    Reproduce(ReproduceArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TauMode {
    /// Seed with all rows of the matrix.
    M,
    /// Seed with a single row.
    #[value(name = "1")]
    One,
    Both,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    /// Code length (closed-form mode, no matrix needed).
    #[arg(long)]
    pub n: Option<usize>,
    /// Code dimension (closed-form mode).
    #[arg(long)]
    pub k: Option<usize>,
    /// Minimum distance.
    #[arg(long)]
    pub d: Option<usize>,
    /// Largest stopping-set size to cover (default `d - 1`).
    #[arg(long)]
    pub ell: Option<usize>,
    /// Evaluate every `ell` from 1 to the rank.
    #[arg(long, conflicts_with = "ell")]
    pub all_ell: bool,
    /// Seeding of the hierarchy bound (defaults to `m` with a matrix, none without).
    #[arg(long, value_enum)]
    pub tau: Option<TauMode>,
    /// Weight of the seeding row when `tau` is 1 (default: weight of the first
    /// row, or the optimal weight in closed-form mode).
    #[arg(long)]
    pub w: Option<usize>,
    /// Rank-like parameter entering the hierarchy bound.
    #[arg(long, value_enum, default_value = "r")]
    pub rank_param: RankParam,
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub ell: usize,
    /// Count only stopping sets with independent columns.
    #[arg(long)]
    pub coverable: bool,
    /// Estimate from random subsets instead of enumerating (always coverable).
    #[arg(long)]
    pub estimate: bool,
    /// Samples per size when estimating.
    #[arg(long = "N", alias = "samples", value_parser = parse_count, default_value = "1e5")]
    pub samples: u64,
    /// Per-size error probability.
    #[arg(long, conflicts_with = "confidence")]
    pub eps: Option<f64>,
    /// Joint confidence, split evenly over the sizes (default 0.95).
    #[arg(long)]
    pub confidence: Option<f64>,
}

#[derive(Args, Debug)]
pub struct GreedyArgs {
    #[arg(long)]
    pub ell: usize,
    #[arg(long, default_value_t = 10)]
    pub restarts: usize,
    /// Write the constructed matrix here (format from `--format` or extension).
    #[arg(long)]
    pub matrix_out: Option<PathBuf>,
    /// Check peeling against ML decoding on the constructed matrix.
    #[arg(long)]
    pub audit: bool,
    #[arg(long, default_value_t = 8)]
    pub audit_exhaustive_to: usize,
    #[arg(long, value_parser = parse_count, default_value = "1e6")]
    pub audit_samples: u64,
}

#[derive(Args, Debug)]
pub struct ProfileArgs {
    /// Matrix to profile (overrides `--code`).
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "iterative")]
    pub decoder: Decoder,
    /// Enumerate weights up to this value, sample above it (default: enumerate all).
    #[arg(long)]
    pub exhaustive_to: Option<usize>,
    /// Patterns drawn per sampled weight.
    #[arg(long, value_parser = parse_count, default_value = "1e6")]
    pub trials: u64,
    /// Largest weight reported (default `n`).
    #[arg(long)]
    pub w_max: Option<usize>,
    /// Also tabulate the frame error rate.
    #[arg(long)]
    pub fer: bool,
    /// Erasure probabilities as `start:stop:step`.
    #[arg(long, default_value = "0.05:0.5:0.05")]
    pub p_grid: String,
    /// Compare two decoders pattern by pattern (only `it,ml` is meaningful).
    #[arg(long)]
    pub compare: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EnsembleKind {
    Sre,
    Gallager,
}

#[derive(Args, Debug)]
pub struct EnsembleArgs {
    #[arg(value_enum)]
    pub kind: EnsembleKind,
    #[arg(long)]
    pub n: usize,
    /// Rows of an SRE matrix.
    #[arg(long, conflicts_with = "rate")]
    pub m: Option<usize>,
    /// Design rate of an SRE matrix, `m = (1 - R) n`, as `p/q` or a decimal.
    #[arg(long)]
    pub rate: Option<String>,
    /// Column weight of a Gallager matrix.
    #[arg(long = "J")]
    pub j: Option<usize>,
    /// Row weight of a Gallager matrix.
    #[arg(long = "K")]
    pub k: Option<usize>,
    /// Largest size to cover (default `m` for SRE, `r_max` for Gallager).
    #[arg(long)]
    pub ell: Option<usize>,
    /// Exact mean spectrum (SRE only).
    #[arg(long)]
    pub analytic: bool,
    /// Monte Carlo estimate of the mean spectrum.
    #[arg(long)]
    pub estimate: bool,
    #[arg(long = "N", alias = "samples", value_parser = parse_count, default_value = "1e5")]
    pub samples: u64,
    #[arg(long, conflicts_with = "confidence")]
    pub eps: Option<f64>,
    #[arg(long)]
    pub confidence: Option<f64>,
}

/// Accepts plain integers and integral scientific notation such as `1e6`.
pub fn parse_count(s: &str) -> std::result::Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let x: f64 = s.parse().map_err(|_| format!("not a count: {s}"))?;
    if x < 0.0 || x.fract() != 0.0 || x > u64::MAX as f64 {
        return Err(format!("not a count: {s}"));
    }
    Ok(x as u64)
}

/// Parses `p/q` or a decimal in `[0, 1)` into a reduced-free pair `(p, q)`.
fn parse_rate(s: &str) -> Result<(usize, usize)> {
    let bad = || invalid(format!("rate must look like 1/2 or 0.5, got {s}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: usize = p.trim().parse().map_err(|_| bad())?;
        let q: usize = q.trim().parse().map_err(|_| bad())?;
        if q == 0 || p >= q {
            return Err(bad());
        }
        return Ok((p, q));
    }
    let x: f64 = s.parse().map_err(|_| bad())?;
    if !(0.0..1.0).contains(&x) {
        return Err(bad());
    }
    let q = 1_000_000usize;
    Ok(((x * q as f64).round() as usize, q))
}

/// Rows `m = (1 - R) n` for a design rate, which must make `m` integral.
pub fn rows_for_rate(n: usize, rate: &str) -> Result<usize> {
    let (p, q) = parse_rate(rate)?;
    if !(n * p).is_multiple_of(q) {
        return Err(invalid(format!("rate {rate} does not give an integer row count for n = {n}")));
    }
    Ok(n - n * p / q)
}

/// Parses `start:stop:step` into the grid of values (stop included up to
/// rounding).
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<f64> = s
        .split(':')
        .map(|x| x.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| invalid(format!("grid must be start:stop:step, got {s}")))?;
    let [start, stop, step] = parts[..] else {
        return Err(invalid(format!("grid must be start:stop:step, got {s}")));
    };
    if step <= 0.0 || stop < start {
        return Err(invalid(format!("empty grid {s}")));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|k| start + k as f64 * step).collect())
}

/// Shared run settings derived from the global flags.
#[derive(Clone, Debug)]
pub struct Context {
    pub seed: u64,
    pub subset_budget: u128,
    pub row_space_limit: usize,
    pub format: Option<MatrixFormat>,
}

impl Context {
    fn load(&self, source: &str) -> Result<LinearCode> {
        if let Some(name) = source.strip_prefix("builtin:") {
            return match name {
                "golay" => Ok(golay_extended()),
                other => Err(invalid(format!("unknown builtin code {other:?} (known: golay)"))),
            };
        }
        let path = PathBuf::from(source);
        let format = self.format.unwrap_or_else(|| MatrixFormat::from_path(&path));
        load_matrix_file(&path, format)
    }
}

/// Something a subcommand hands back for printing.
pub trait Report: Serialize {
    fn write_csv(&self, out: &mut dyn Write) -> Result<()>;

    /// Plain-text rendering used when neither `--json` nor `--csv` is given;
    /// `None` means JSON.
    fn text(&self) -> Option<String> {
        None
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundsOutput {
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<StoppingSpectrum>,
    pub reports: Vec<BoundReport>,
}

impl Report for BoundsOutput {
    fn write_csv(&self, out: &mut dyn Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "name",
            "ell",
            "tau",
            "value",
            "real_value",
            "t_star",
            "kappa_at_t_star",
            "delta",
            "rank_param",
            "exhaustive_t_search",
        ])?;
        let opt = |v: Option<String>| v.unwrap_or_default();
        for r in &self.reports {
            let wit = r.witness.as_ref();
            w.write_record([
                r.name.clone(),
                opt(r.params.ell.map(|x| x.to_string())),
                opt(wit.map(|x| x.tau.to_string())),
                r.value.to_string(),
                opt(r.real_value.map(|x| x.to_string())),
                opt(wit.map(|x| x.t_star.to_string())),
                opt(wit.and_then(|x| x.kappa_at_t_star).map(|x| x.to_string())),
                opt(wit.and_then(|x| x.delta).map(|x| x.to_string())),
                opt(r.params.rank_param.map(|x| x.to_string())),
                r.exhaustive_t_search.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn cmd_bounds(ctx: &Context, code_source: &str, args: &BoundsArgs) -> Result<BoundsOutput> {
    let opts = SearchOptions::default();
    if let Some(n) = args.n {
        let k = args.k.ok_or_else(|| invalid("closed-form bounds need both --n and --k"))?;
        if k > n {
            return Err(invalid("k cannot exceed n"));
        }
        let r = n - k;
        let d = args.d.ok_or_else(|| invalid("closed-form bounds need the minimum distance --d"))?;
        let mut reports = vec![sv_report(r, d), hs_bound(n, d, r)?];
        if let Some(TauMode::One | TauMode::Both) = args.tau {
            let ells = match (args.all_ell, args.ell) {
                (true, _) => (1..=r).collect(),
                (false, Some(l)) => vec![l],
                (false, None) => vec![d - 1],
            };
            for ell in ells {
                let w = match args.w {
                    Some(w) => w,
                    None => w_opt_candidates(n, ell.max(2))?.best(),
                };
                eprintln!("hierarchy bound, tau = 1, ell = {ell}, w = {w}");
                let u = u_single_row(n, w, ell)?;
                reports.push(hierarchy_bound_xi1(&u, r, 1, 1, ell, &opts)?);
            }
        }
        return Ok(BoundsOutput {
            n,
            k: Some(k),
            m: None,
            d: Some(d),
            spectrum: None,
            reports,
        });
    }
    if args.k.is_some() {
        return Err(invalid("--k needs --n"));
    }

    let code = ctx.load(code_source)?;
    let h = code.parity_check();
    let (n, m, r) = (code.n(), code.m(), code.r());
    let d = args.d.or(code.d());
    let ells: Vec<usize> = match (args.all_ell, args.ell, d) {
        (true, _, _) => (1..=r).collect(),
        (false, Some(l), _) => vec![l],
        (false, None, Some(d)) => vec![d - 1],
        (false, None, None) => return Err(invalid("give --ell, --all-ell or the minimum distance --d")),
    };
    if let Some(&bad) = ells.iter().find(|&&l| l == 0 || l > r) {
        return Err(invalid(format!("ell = {bad} must lie in 1..={r}")));
    }
    let mut reports = Vec::new();
    if let Some(d) = d {
        reports.push(sv_report(r, d));
        reports.push(hs_bound(n, d, r)?);
    }
    let rank_param = match args.rank_param {
        RankParam::R => r,
        RankParam::M => m,
    };
    let tau = args.tau.unwrap_or(TauMode::M);
    let ell_max = *ells.iter().max().expect("nonempty");
    let spectrum = if matches!(tau, TauMode::M | TauMode::Both) {
        eprintln!("enumerating coverable stopping sets up to size {ell_max}");
        Some(spectrum_exhaustive(h, ell_max, true, ctx.subset_budget)?)
    } else {
        None
    };
    for &ell in &ells {
        if matches!(tau, TauMode::One | TauMode::Both) {
            let w = args.w.unwrap_or_else(|| h.row(0).weight());
            let u = u_single_row(n, w, ell)?;
            reports.push(hierarchy_bound_xi1(&u, rank_param, 1, 1, ell, &opts)?);
        }
        if let Some(u) = &spectrum {
            reports.push(hierarchy_bound_xi1(u, rank_param, m, r, ell, &opts)?);
            reports.push(xi2_bound(u, m, ell, &opts)?);
        }
    }
    Ok(BoundsOutput {
        n,
        k: Some(code.k()),
        m: Some(m),
        d,
        spectrum,
        reports,
    })
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum SpectrumOutput {
    Exact(StoppingSpectrum),
    Estimate(EstimationResult),
}

impl Report for SpectrumOutput {
    fn write_csv(&self, out: &mut dyn Write) -> Result<()> {
        match self {
            SpectrumOutput::Exact(s) => s.write_csv(out),
            SpectrumOutput::Estimate(e) => e.write_csv(out),
        }
    }
}

fn epsilons(ell: usize, eps: Option<f64>, confidence: Option<f64>) -> Result<Vec<f64>> {
    let e = match eps {
        Some(e) => e,
        None => epsilon_for_confidence(confidence.unwrap_or(0.95), ell)?,
    };
    Ok(vec![e; ell])
}

pub fn cmd_spectrum(ctx: &Context, code_source: &str, args: &SpectrumArgs) -> Result<SpectrumOutput> {
    if args.ell == 0 {
        return Err(invalid("ell must be at least 1"));
    }
    let code = ctx.load(code_source)?;
    if args.estimate {
        let eps = epsilons(args.ell, args.eps, args.confidence)?;
        eprintln!("sampling {} subsets per size", args.samples);
        let res = estimate_spectrum(&code, args.ell, &vec![args.samples; args.ell], &eps, ctx.seed)?;
        Ok(SpectrumOutput::Estimate(res))
    } else {
        eprintln!("enumerating subsets up to size {}", args.ell);
        let s = spectrum_exhaustive(code.parity_check(), args.ell, args.coverable, ctx.subset_budget)?;
        Ok(SpectrumOutput::Exact(s))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GreedyOutput {
    pub seed: u64,
    pub rows: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix_path: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub audit: Option<ComparisonReport>,
    #[serde(flatten)]
    pub result: GreedyResult,
}

impl Report for GreedyOutput {
    fn write_csv(&self, out: &mut dyn Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["restart", "rows", "completion_rows", "final_rank", "best"])?;
        for run in &self.result.runs {
            w.write_record([
                run.restart.to_string(),
                run.rows.to_string(),
                run.completion_rows.to_string(),
                run.final_rank.to_string(),
                (run.restart == self.result.best_restart).to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn cmd_greedy(ctx: &Context, code_source: &str, args: &GreedyArgs) -> Result<GreedyOutput> {
    let code = ctx.load(code_source)?;
    let opts = GreedyOptions {
        restarts: args.restarts,
        row_space_limit: ctx.row_space_limit,
        subset_budget: ctx.subset_budget,
    };
    eprintln!("greedy covering up to size {} with {} restarts", args.ell, args.restarts);
    let result = greedy_extend(&code, args.ell, ctx.seed, &opts)?;
    if let Some(path) = &args.matrix_out {
        let format = ctx.format.unwrap_or_else(|| MatrixFormat::from_path(path));
        save_matrix_file(&result.matrix, path, format)?;
    }
    let audit = if args.audit {
        eprintln!("auditing peeling against ML decoding");
        let rank = code.r();
        Some(compare_decoders(
            &result.matrix,
            1..=rank,
            args.audit_exhaustive_to,
            args.audit_samples,
            ctx.seed,
        )?)
    } else {
        None
    };
    Ok(GreedyOutput {
        seed: ctx.seed,
        rows: result.rows(),
        matrix_path: args.matrix_out.clone(),
        audit,
        result,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FerPoint {
    pub p: f64,
    pub fer: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProfileOutput {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile: Option<PatternProfile>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub fer: Vec<FerPoint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub comparison: Option<ComparisonReport>,
}

impl Report for ProfileOutput {
    fn write_csv(&self, out: &mut dyn Write) -> Result<()> {
        if let Some(c) = &self.comparison {
            return c.write_csv(out);
        }
        if !self.fer.is_empty() {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["p", "fer"])?;
            for pt in &self.fer {
                w.write_record([pt.p.to_string(), pt.fer.to_string()])?;
            }
            w.flush()?;
            return Ok(());
        }
        match &self.profile {
            Some(p) => p.write_csv(out),
            None => Ok(()),
        }
    }
}

pub fn cmd_profile(ctx: &Context, code_source: &str, args: &ProfileArgs) -> Result<ProfileOutput> {
    let code = match &args.matrix {
        Some(path) => {
            let format = ctx.format.unwrap_or_else(|| MatrixFormat::from_path(path));
            load_matrix_file(path, format)?
        }
        None => ctx.load(code_source)?,
    };
    let h = code.parity_check();
    let n = code.n();
    let w_max = args.w_max.unwrap_or(n).min(n);
    let exhaustive_to = args.exhaustive_to.unwrap_or(usize::MAX);

    if let Some(spec) = &args.compare {
        let mut names: Vec<Decoder> = spec
            .split(',')
            .map(|s| Decoder::from_str(s.trim(), true).map_err(|_| invalid(format!("unknown decoder {s:?}"))))
            .collect::<Result<_>>()?;
        names.sort_by_key(|d| *d as u8);
        names.dedup();
        if names != [Decoder::Iterative, Decoder::Ml] {
            return Err(invalid("--compare takes the pair it,ml"));
        }
        eprintln!("comparing decoders up to weight {w_max}");
        let report = compare_decoders(h, 1..=w_max, exhaustive_to.min(w_max), args.trials, ctx.seed)?;
        return Ok(ProfileOutput {
            profile: None,
            fer: Vec::new(),
            comparison: Some(report),
        });
    }

    let mode = ProfileMode {
        exhaustive_to,
        trials: args.trials,
        seed: ctx.seed,
    };
    eprintln!("profiling the {:?} decoder up to weight {w_max}", args.decoder);
    let profile = undecodable_profile(h, args.decoder, w_max, mode, ctx.subset_budget)?;
    let fer_points = if args.fer {
        if w_max < n {
            return Err(invalid("the frame error rate needs the full profile (omit --w-max)"));
        }
        parse_grid(&args.p_grid)?
            .into_iter()
            .map(|p| Ok(FerPoint { p, fer: fer(&profile, p)? }))
            .collect::<Result<_>>()?
    } else {
        Vec::new()
    };
    Ok(ProfileOutput {
        profile: Some(profile),
        fer: fer_points,
        comparison: None,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct EnsemblePart<T> {
    pub spectrum: T,
    pub bound: BoundReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct EnsembleOutput {
    pub ensemble: EnsembleSpec,
    pub rows: usize,
    pub r_max: usize,
    pub ell: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub analytic: Option<EnsemblePart<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub estimate: Option<EnsemblePart<EstimationResult>>,
}

impl Report for EnsembleOutput {
    fn write_csv(&self, out: &mut dyn Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["quantity", "i", "value"])?;
        w.write_record(["r_max", "", &self.r_max.to_string()])?;
        if let Some(a) = &self.analytic {
            for (k, v) in a.spectrum.iter().enumerate() {
                w.write_record(["mean_u", &(k + 1).to_string(), &v.to_string()])?;
            }
            w.write_record(["analytic_bound", "", &a.bound.value.to_string()])?;
        }
        if let Some(e) = &self.estimate {
            for s in &e.spectrum.sizes {
                w.write_record(["u_hat", &s.i.to_string(), &s.u_hat.to_string()])?;
            }
            w.write_record(["estimated_bound", "", &e.bound.value.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// The average bound over the `m x n` standard random ensemble from its
/// exact mean spectrum, covering sizes up to `ell`.
pub fn sre_average_bound(n: usize, m: usize, ell: usize) -> Result<(Vec<f64>, BoundReport)> {
    let mean = sre_mean_spectrum(n, m, ell)?;
    let bound = ensemble_bound(n, &mean.values, m, ell, &SearchOptions::default())?;
    Ok((mean.values, bound))
}

pub fn cmd_ensemble(ctx: &Context, args: &EnsembleArgs) -> Result<EnsembleOutput> {
    let spec = match args.kind {
        EnsembleKind::Sre => {
            let m = match (args.m, &args.rate) {
                (Some(m), _) => m,
                (None, Some(rate)) => rows_for_rate(args.n, rate)?,
                (None, None) => return Err(invalid("an SRE needs --m or --rate")),
            };
            EnsembleSpec::Sre { n: args.n, m }
        }
        EnsembleKind::Gallager => {
            let (Some(j), Some(k)) = (args.j, args.k) else {
                return Err(invalid("a Gallager ensemble needs --J and --K"));
            };
            EnsembleSpec::Gallager { n: args.n, j, k }
        }
    };
    spec.validate()?;
    let (n, rows, r_max) = (spec.n(), spec.rows(), spec.r_max());
    let ell = args.ell.unwrap_or(match spec {
        EnsembleSpec::Sre { m, .. } => m,
        EnsembleSpec::Gallager { .. } => r_max,
    });
    if ell == 0 || ell > rows {
        return Err(invalid(format!("ell = {ell} must lie in 1..={rows}")));
    }
    let (analytic, estimate) = match (args.analytic, args.estimate, args.kind) {
        (false, false, EnsembleKind::Sre) => (true, false),
        (false, false, EnsembleKind::Gallager) => (false, true),
        (a, e, _) => (a, e),
    };
    if analytic && args.kind == EnsembleKind::Gallager {
        return Err(invalid("no closed-form mean spectrum for the Gallager ensemble; use --estimate"));
    }
    let analytic = if analytic {
        let (spectrum, bound) = sre_average_bound(n, rows, ell)?;
        Some(EnsemblePart { spectrum, bound })
    } else {
        None
    };
    let estimate = if estimate {
        let eps = epsilons(ell, args.eps, args.confidence)?;
        eprintln!("sampling {} matrix/subset pairs per size", args.samples);
        let res = estimate_ensemble_spectrum(&spec, ell, &vec![args.samples; ell], &eps, ctx.seed)?;
        let bound = ensemble_bound(n, &res.u_hat_f64(), rows, ell, &SearchOptions::default())?;
        Some(EnsemblePart { spectrum: res, bound })
    } else {
        None
    };
    Ok(EnsembleOutput {
        ensemble: spec,
        rows,
        r_max,
        ell,
        analytic,
        estimate,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Style {
    Default,
    Json,
    Csv,
}

fn render(report: &dyn ReportDyn, style: Style, out: &mut dyn Write) -> Result<()> {
    match style {
        Style::Csv => report.csv(out),
        Style::Json => report.json(out),
        Style::Default => match report.text_dyn() {
            Some(t) => {
                out.write_all(t.as_bytes())?;
                Ok(())
            }
            None => report.json(out),
        },
    }
}

/// Object-safe view of [`Report`].
trait ReportDyn {
    fn csv(&self, out: &mut dyn Write) -> Result<()>;
    fn json(&self, out: &mut dyn Write) -> Result<()>;
    fn text_dyn(&self) -> Option<String>;
}

impl<T: Report> ReportDyn for T {
    fn csv(&self, out: &mut dyn Write) -> Result<()> {
        self.write_csv(out)
    }

    fn json(&self, out: &mut dyn Write) -> Result<()> {
        serde_json::to_writer_pretty(&mut *out, self)?;
        writeln!(out)?;
        Ok(())
    }

    fn text_dyn(&self) -> Option<String> {
        self.text()
    }
}

/// Runs a parsed command line, writing the report to `out` unless `--out`
/// is set. Returns `false` when the command ran but reported failures.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<bool> {
    let seed = match cli.seed {
        Some(s) => s,
        None => {
            let s = random_seed();
            if needs_seed(&cli.command) {
                eprintln!("seed: {s}");
            }
            s
        }
    };
    let ctx = Context {
        seed,
        subset_budget: if cli.force { u128::MAX } else { DEFAULT_SUBSET_BUDGET },
        row_space_limit: if cli.force { 63 } else { DEFAULT_ROW_SPACE_LIMIT },
        format: cli.format,
    };
    let style = match (cli.json, cli.csv) {
        (true, _) => Style::Json,
        (_, true) => Style::Csv,
        _ => Style::Default,
    };
    let mut ok = true;
    let report: Box<dyn ReportDyn> = match &cli.command {
        Command::Bounds(a) => Box::new(cmd_bounds(&ctx, &cli.code, a)?),
        Command::Spectrum(a) => Box::new(cmd_spectrum(&ctx, &cli.code, a)?),
        Command::Greedy(a) => Box::new(cmd_greedy(&ctx, &cli.code, a)?),
        Command::Profile(a) => Box::new(cmd_profile(&ctx, &cli.code, a)?),
        Command::Ensemble(a) => Box::new(cmd_ensemble(&ctx, a)?),
        Command::Reproduce(a) => {
            let r = reproduce::cmd_reproduce(&ctx, a)?;
            ok = r.failed == 0;
            Box::new(r)
        }
    };
    match &cli.out {
        Some(path) => {
            let mut f = io::BufWriter::new(File::create(path)?);
            render(report.as_ref(), style, &mut f)?;
            f.flush()?;
        }
        None => render(report.as_ref(), style, out)?,
    }
    Ok(ok)
}

fn needs_seed(cmd: &Command) -> bool {
    match cmd {
        Command::Spectrum(a) => a.estimate,
        Command::Greedy(_) => true,
        Command::Profile(a) => a.compare.is_some() || a.exhaustive_to.is_some(),
        Command::Ensemble(a) => a.estimate || a.kind == EnsembleKind::Gallager,
        Command::Bounds(_) | Command::Reproduce(_) => false,
    }
}

/// Entry point of the `stopred` binary.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    match run(&cli, &mut lock) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Error::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_rates() {
        assert_eq!(parse_count("1e6"), Ok(1_000_000));
        assert_eq!(parse_count("250"), Ok(250));
        assert!(parse_count("1.5").is_err());
        assert_eq!(rows_for_rate(12, "1/2").unwrap(), 6);
        assert_eq!(rows_for_rate(24, "1/3").unwrap(), 16);
        assert_eq!(rows_for_rate(30, "2/3").unwrap(), 10);
        assert_eq!(rows_for_rate(12, "0.5").unwrap(), 6);
        assert!(rows_for_rate(10, "1/3").is_err());
        assert!(rows_for_rate(10, "3/2").is_err());
    }

    #[test]
    fn grids() {
        let g = parse_grid("0.05:0.5:0.05").unwrap();
        assert_eq!(g.len(), 10);
        assert!((g[9] - 0.5).abs() < 1e-12);
        assert!(parse_grid("0.1:0.05:0.01").is_err());
        assert!(parse_grid("0.1:0.2").is_err());
    }

    #[test]
    fn closed_form_bounds() {
        let cli = Cli::try_parse_from(["stopred", "bounds", "--n", "48", "--k", "24", "--d", "12"]).unwrap();
        let Command::Bounds(a) = &cli.command else { unreachable!() };
        let ctx = Context {
            seed: 0,
            subset_budget: DEFAULT_SUBSET_BUDGET,
            row_space_limit: DEFAULT_ROW_SPACE_LIMIT,
            format: None,
        };
        let out = cmd_bounds(&ctx, &cli.code, a).unwrap();
        let v: Vec<String> = out.reports.iter().map(|r| r.value.to_string()).collect();
        assert_eq!(v, ["4540385", "4440"]);
        let missing = Cli::try_parse_from(["stopred", "bounds", "--n", "48", "--k", "24"]).unwrap();
        let Command::Bounds(a) = &missing.command else { unreachable!() };
        assert!(cmd_bounds(&ctx, &missing.code, a).is_err());
    }
}
