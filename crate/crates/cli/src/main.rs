//! Command-line front end: perturbative spectra, invariant-space census,
//! Heun parameter mapping, and the cross-validation suite, with
//! machine-readable output.
//!
//! Exit codes: 0 success, 1 failed validation check, 2 configuration
//! error, 3 engine precondition failure.

mod config;
mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use heun_core::coeff::{Coeff, Couplings, Rat};
use heun_core::elliptic::{EllipticContext, DEFAULT_N};
use heun_core::heun::invert_lambda;
use heun_core::perturb::{decay_diagnostics, expand_p_direct, level_series, EigSeriesP};
use heun_core::qes::{algebraic_eigen, census, match_bottom, trig_spectrum};
use heun_core::suite::{run as run_suite, SuiteConfig};
use heun_core::trig::Sector;

use config::{parse_couplings, ConfigFile};
use output::{
    CensusRow, Meta, QesResults, Report, SpectrumInputs, SpectrumLevel, SpectrumResults,
    ValidateCheck, ValidateResults,
};

#[derive(Parser)]
#[command(name = "heun", version, about = "Spectra of the elliptic BC1 Hamiltonian / Heun equation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Perturbation-series spectrum of the lowest levels.
    Spectrum(SpectrumArgs),
    /// Census of finite dimensional invariant spaces and their algebraic
    /// eigenvalues.
    Qes(QesArgs),
    /// Run the cross-validation suite.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Couplings l0,l1,l2,l3 as decimals or rationals n/d.
    #[arg(long, value_name = "L0,L1,L2,L3")]
    l: Option<String>,
    /// Nome p in (-1, 1) (exactly one of --p, --a).
    #[arg(long)]
    p: Option<f64>,
    /// Modular parameter a in (0, 1), inverted to the nome internally.
    #[arg(long)]
    a: Option<f64>,
    /// Series truncation order K.
    #[arg(long)]
    order: Option<usize>,
    /// q-sum truncation N.
    #[arg(long)]
    nterms: Option<usize>,
    /// Output format: json or csv.
    #[arg(long)]
    format: Option<String>,
    /// Flat key = value config file merged under the flags.
    #[arg(long)]
    config: Option<String>,
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Number of levels from the bottom.
    #[arg(long)]
    levels: Option<usize>,
    /// Fourier sector (f1..f4) when both l0 and l1 vanish.
    #[arg(long)]
    sector: Option<String>,
    /// Engine: a (modular-parameter expansion mapped to p, default) or
    /// p (direct nome expansion; Jacobi case only).
    #[arg(long)]
    engine: Option<String>,
}

#[derive(Args)]
struct QesArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Include the exact trigonometric spectra of every space.
    #[arg(long)]
    trig: bool,
    /// Pair algebraic eigenvalues with the lowest perturbative levels.
    #[arg(long)]
    match_bottom: bool,
}

#[derive(Args)]
struct ValidateArgs {
    /// Run only the check with this id (e.g. s6.1).
    #[arg(long)]
    only: Option<String>,
    /// Seed of the randomized checks.
    #[arg(long)]
    seed: Option<u64>,
    /// Number of random coupling sets in the engine-equivalence check.
    #[arg(long)]
    random_l: Option<usize>,
    /// Flat key = value config file merged under the flags.
    #[arg(long)]
    config: Option<String>,
}

fn config_error(msg: &str) -> ExitCode {
    eprintln!("error: {}", msg);
    ExitCode::from(2)
}

fn engine_error(err: heun_core::Error) -> ExitCode {
    eprintln!("error: {}", err);
    ExitCode::from(3)
}

/// Resolved common configuration.
struct Resolved {
    l: Couplings<Rat>,
    p: f64,
    a_given: Option<f64>,
    order: usize,
    nterms: usize,
    format: String,
}

fn resolve_common(args: &CommonArgs) -> Result<Resolved, String> {
    let file = match &args.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let l_text = args
        .l
        .clone()
        .or_else(|| file.get("l"))
        .ok_or("missing couplings (--l or config key l)")?;
    let l = parse_couplings(&l_text)?;
    for li in &l.l {
        if li.to_f64() < 0.0 {
            return Err(format!("coupling {} is negative; l_i >= 0 required", li));
        }
    }
    let p_flag = args.p.or_else(|| file.get_f64("p"));
    let a_flag = args.a.or_else(|| file.get_f64("a"));
    let (p, a_given) = match (p_flag, a_flag) {
        (Some(_), Some(_)) => return Err("exactly one of --p and --a may be given".into()),
        (None, None) => return Err("one of --p or --a is required".into()),
        (Some(p), None) => {
            if !(p.abs() < 1.0) {
                return Err(format!("nome p = {} outside (-1, 1)", p));
            }
            (p, None)
        }
        (None, Some(a)) => {
            let p = invert_lambda(a, DEFAULT_N).map_err(|e| e.to_string())?;
            (p, Some(a))
        }
    };
    let format = args
        .format
        .clone()
        .or_else(|| file.get("format"))
        .unwrap_or_else(|| "json".into());
    if format != "json" && format != "csv" {
        return Err(format!("unknown format {:?} (json or csv)", format));
    }
    Ok(Resolved {
        l,
        p,
        a_given,
        order: args.order.or_else(|| file.get_usize("order")).unwrap_or(8),
        nterms: args
            .nterms
            .or_else(|| file.get_usize("nterms"))
            .unwrap_or(DEFAULT_N),
        format,
    })
}

fn parse_sector(text: &str) -> Result<Sector, String> {
    match text {
        "f1" => Ok(Sector::F1),
        "f2" => Ok(Sector::F2),
        "f3" => Ok(Sector::F3),
        "f4" => Ok(Sector::F4),
        other => Err(format!("unknown sector {:?} (f1..f4)", other)),
    }
}

/// Thread cap from HEUN_THREADS (default: available parallelism).
fn thread_cap() -> usize {
    std::env::var("HEUN_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
}

/// Map a fallible job over inputs on up to `thread_cap()` threads,
/// preserving input order.
fn parallel_map<T, R, F>(inputs: Vec<T>, job: F) -> Vec<R>
where
    T: Send + Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    let cap = thread_cap().min(inputs.len().max(1));
    if cap <= 1 || inputs.len() <= 1 {
        return inputs.iter().map(&job).collect();
    }
    let mut results: Vec<Option<R>> = Vec::new();
    results.resize_with(inputs.len(), || None);
    let next = std::sync::atomic::AtomicUsize::new(0);
    let slots = std::sync::Mutex::new(&mut results);
    std::thread::scope(|scope| {
        for _ in 0..cap {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                if i >= inputs.len() {
                    break;
                }
                let r = job(&inputs[i]);
                slots.lock().unwrap()[i] = Some(r);
            });
        }
    });
    results.into_iter().map(|r| r.unwrap()).collect()
}

fn meta() -> Meta {
    Meta {
        schema_version: 1,
        tool: "heun".into(),
        version: env!("CARGO_PKG_VERSION").into(),
    }
}

fn rational_strings(series: &EigSeriesP<Rat>) -> Vec<String> {
    series.evals.iter().map(|c| c.to_string()).collect()
}

fn cmd_spectrum(args: &SpectrumArgs) -> ExitCode {
    let resolved = match resolve_common(&args.common) {
        Ok(r) => r,
        Err(msg) => return config_error(&msg),
    };
    let levels = args.levels.unwrap_or(4);
    let engine = args.engine.clone().unwrap_or_else(|| "a".into());
    if engine != "a" && engine != "p" {
        return config_error(&format!("unknown engine {:?} (a or p)", engine));
    }
    if engine == "p" && (Coeff::is_zero(resolved.l.l0()) || Coeff::is_zero(resolved.l.l1())) {
        return engine_error(heun_core::Error::InvalidInput(
            "the direct nome engine needs l0 > 0 and l1 > 0; vanishing couplings route through the modular-parameter engine".into(),
        ));
    }
    let fourier_case = Coeff::is_zero(resolved.l.l0()) && Coeff::is_zero(resolved.l.l1());
    let sector = match &args.sector {
        Some(text) => match parse_sector(text) {
            Ok(s) => Some(s),
            Err(msg) => return config_error(&msg),
        },
        None => None,
    };

    let level_inputs: Vec<usize> = if fourier_case {
        // restrict to one Fourier sector at a time
        let sector = sector.unwrap_or(Sector::F1);
        let (stride, offset) = match sector {
            Sector::F1 => (2, 0),
            Sector::F2 => (2, 2),
            Sector::F3 | Sector::F4 => (2, 1),
            _ => unreachable!(),
        };
        (0..levels).map(|r| stride * r + offset).collect()
    } else {
        (0..levels).collect()
    };

    let order = resolved.order;
    let l = resolved.l.clone();
    let p = resolved.p;
    let computed = parallel_map(level_inputs, |&m| -> heun_core::Result<SpectrumLevel> {
        let series: EigSeriesP<Rat> = if engine == "p" {
            expand_p_direct(m, &l, order)?
        } else {
            level_series(&l, m, order)?.p_series
        };
        let sector_label = if engine == "p" {
            "full".to_string()
        } else {
            format!("{:?}", level_series(&l, m, order)?.sector).to_lowercase()
        };
        let decay = decay_diagnostics(&series.evecs, series.m, p, 2.0).ok();
        Ok(SpectrumLevel {
            m,
            sector: sector_label,
            coefficients: rational_strings(&series),
            energy_at_p: series.eval_energy(p),
            truncation_margin: series.truncation_margin(p),
            decay_ratio: decay.as_ref().map(|d| d.ratio),
            decay_zone_half_width: decay.as_ref().and_then(|d| d.zone_half_width),
        })
    });
    let mut rows = Vec::new();
    for item in computed {
        match item {
            Ok(row) => rows.push(row),
            Err(e) => return engine_error(e),
        }
    }

    let report = Report {
        meta: meta(),
        inputs: SpectrumInputs {
            l: resolved.l.l.iter().map(|c| c.to_string()).collect(),
            p: resolved.p,
            a: resolved.a_given,
            order: resolved.order,
            nterms: resolved.nterms,
            levels,
            engine,
        },
        results: SpectrumResults {
            pi2_units: true,
            levels: rows,
        },
    };
    match resolved.format.as_str() {
        "json" => println!("{}", serde_json::to_string_pretty(&report).unwrap()),
        _ => print!("{}", report.results.to_csv()),
    }
    ExitCode::SUCCESS
}

fn cmd_qes(args: &QesArgs) -> ExitCode {
    let resolved = match resolve_common(&args.common) {
        Ok(r) => r,
        Err(msg) => return config_error(&msg),
    };
    let ctx = match EllipticContext::new(resolved.p, resolved.nterms) {
        Ok(c) => c,
        Err(e) => return engine_error(e),
    };
    let spaces = census(&resolved.l);
    let rows = parallel_map(spaces, |space| -> heun_core::Result<CensusRow> {
        let eigen = algebraic_eigen(&space.matrix.at_context(&ctx))?;
        Ok(CensusRow {
            alpha: space.alpha.alpha.iter().map(|c| c.to_string()).collect(),
            dim: space.dim,
            hilbert: space.hilbert.label().into(),
            reflected_from: space
                .reflected_from
                .as_ref()
                .map(|a| a.iter().map(|c| c.to_string()).collect()),
            eigenvalues_re: eigen.iter().map(|p| p.value.re).collect(),
            eigenvalues_im: eigen.iter().map(|p| p.value.im).collect(),
            trig_spectrum: if args.trig {
                Some(
                    trig_spectrum(&space.alpha, &resolved.l)
                        .iter()
                        .map(|c| c.to_string())
                        .collect(),
                )
            } else {
                None
            },
        })
    });
    let mut census_rows = Vec::new();
    for item in rows {
        match item {
            Ok(row) => census_rows.push(row),
            Err(e) => return engine_error(e),
        }
    }

    let matching = if args.match_bottom {
        match match_bottom(&resolved.l, &ctx, resolved.order) {
            Ok(report) => Some(output::match_report_to_output(&report)),
            Err(e) => return engine_error(e),
        }
    } else {
        None
    };

    let report = Report {
        meta: meta(),
        inputs: SpectrumInputs {
            l: resolved.l.l.iter().map(|c| c.to_string()).collect(),
            p: resolved.p,
            a: resolved.a_given,
            order: resolved.order,
            nterms: resolved.nterms,
            levels: 0,
            engine: "qes".into(),
        },
        results: QesResults {
            pi2_units_trig: args.trig,
            census: census_rows,
            match_bottom: matching,
        },
    };
    match resolved.format.as_str() {
        "json" => println!("{}", serde_json::to_string_pretty(&report).unwrap()),
        _ => print!("{}", report.results.to_csv()),
    }
    ExitCode::SUCCESS
}

fn cmd_validate(args: &ValidateArgs) -> ExitCode {
    let file = match &args.config {
        Some(path) => match ConfigFile::load(path) {
            Ok(f) => f,
            Err(msg) => return config_error(&msg),
        },
        None => ConfigFile::default(),
    };
    let cfg = SuiteConfig {
        seed: args.seed.or_else(|| file.get_u64("seed")).unwrap_or(1),
        random_l: args
            .random_l
            .or_else(|| file.get_usize("random-l"))
            .unwrap_or(20),
    };
    let only = args.only.clone().or_else(|| file.get("only"));
    let results = run_suite(&cfg, only.as_deref());
    if results.is_empty() {
        return config_error(&format!("no check matches id {:?}", only.unwrap_or_default()));
    }
    let mut all_passed = true;
    let mut checks = Vec::new();
    for r in &results {
        println!(
            "[{}] {} — {} ({:.3} ms)",
            if r.passed { "PASS" } else { "FAIL" },
            r.id,
            r.name,
            r.duration.as_secs_f64() * 1e3
        );
        for line in &r.details {
            println!("    {}", line);
        }
        all_passed &= r.passed;
        checks.push(ValidateCheck {
            id: r.id.into(),
            name: r.name.into(),
            passed: r.passed,
            millis: r.duration.as_secs_f64() * 1e3,
            details: r.details.clone(),
        });
    }
    let summary = ValidateResults { checks };
    println!(
        "{}",
        serde_json::to_string(&Report {
            meta: meta(),
            inputs: serde_json::json!({ "seed": cfg.seed, "random_l": cfg.random_l, "only": only }),
            results: summary,
        })
        .unwrap()
    );
    if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Spectrum(args) => cmd_spectrum(args),
        Command::Qes(args) => cmd_qes(args),
        Command::Validate(args) => cmd_validate(args),
    }
}
