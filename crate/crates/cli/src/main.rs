//! `woven`: command-line driver for the basis-weaving toolkit.
//!
//! Every command reads JSON inputs, runs one library operation, prints a
//! JSON report to stdout, and encodes its verdict in the exit code:
//! 0 for a positive verdict, 1 for a negative one, 2 for inconclusive,
//! 64 for unusable input or configuration. Reports echo the full numeric
//! configuration so any certificate can be reproduced from its own report.

mod files;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use woven_core::sis::{self, CertificateStatus, SpectrumSamples};
use woven_core::weaving::{self, ClassStatus, MinorsStatus, WeavingOptions};
use woven_core::{
    classify_fourier, minors_exhaustive, reconstruct, scan, CMatrix, Error, FourierOptions,
    IndexSet, Mode, PrecisionConfig,
};

const EXIT_POSITIVE: u8 = 0;
const EXIT_NEGATIVE: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "woven", version, about = "Certificates and scans for woven Riesz bases")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Relative singularity threshold for double-precision verdicts.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Mantissa bits for certified arithmetic (53..=1024). 0 keeps plain
    /// double precision and disables escalation.
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// Also write the report to this path.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether every central submatrix of a matrix is invertible.
    CheckW {
        matrix: PathBuf,
        /// Largest matrix size the subset scan accepts.
        #[arg(long)]
        max_n: Option<usize>,
    },
    /// Decide whether two bases weave, optionally searching column
    /// permutations of the second one.
    Woven {
        v: PathBuf,
        w: PathBuf,
        /// Search all column permutations of W for one that weaves.
        #[arg(long)]
        permutations: bool,
        #[arg(long)]
        max_n: Option<usize>,
    },
    /// Recover a vector from mixed samples taken through a subset.
    Reconstruct {
        matrix: PathBuf,
        samples: PathBuf,
        /// Comma-separated indices sampled through the second basis; an
        /// empty string means none.
        #[arg(long)]
        subset: String,
    },
    /// Fourier-matrix membership scans and minor exhaustion.
    Fourier {
        #[command(subcommand)]
        sub: FourierCmd,
    },
    /// Shift-invariant-space weaving certificates from spectrum samples.
    Sis {
        #[command(subcommand)]
        sub: SisCmd,
    },
}

#[derive(Subcommand)]
enum FourierCmd {
    /// Classify a whole range of orders against the square-free pattern.
    Scan {
        /// Inclusive order range, written lo..hi.
        #[arg(long)]
        range: String,
        #[arg(long)]
        max_n: Option<usize>,
    },
    /// Classify one order.
    Classify {
        n: usize,
        #[arg(long)]
        max_n: Option<usize>,
    },
    /// Check every square minor of one Fourier matrix.
    Minors { n: usize },
}

#[derive(Subcommand)]
enum SisCmd {
    /// Certify a perturbed generator against a reference generator.
    Check {
        /// Spectrum file, or the literal `sinc`.
        #[arg(long)]
        phi: String,
        #[arg(long)]
        psi: String,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        kmax: Option<usize>,
    },
    /// Certify a band-limited generator against the orthonormal sinc
    /// system.
    Pw {
        #[arg(long)]
        psi: String,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        kmax: Option<usize>,
    },
    /// Certify a finite generator set against a reference set.
    Multi {
        /// Comma-separated spectrum files (each may be `sinc`).
        #[arg(long)]
        phi: String,
        #[arg(long)]
        psi: String,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        kmax: Option<usize>,
    },
    /// Estimate Riesz bounds of random weavings by finite sections.
    Validate {
        #[arg(long)]
        phi: String,
        #[arg(long)]
        psi: String,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        kmax: Option<usize>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Serialize)]
struct Report {
    tool: &'static str,
    version: &'static str,
    command: String,
    argv: Vec<String>,
    config: Value,
    result: Value,
    exit_code: u8,
    timing_ms: u128,
}

struct Outcome {
    command: String,
    config: Value,
    result: Value,
    exit: u8,
}

fn main() {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            std::process::exit(code as i32);
        }
    };
    let start = Instant::now();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(EXIT_USAGE as i32);
        }
    };
    let report = Report {
        tool: "woven",
        version: env!("CARGO_PKG_VERSION"),
        command: outcome.command,
        argv,
        config: outcome.config,
        result: outcome.result,
        exit_code: outcome.exit,
        timing_ms: start.elapsed().as_millis(),
    };
    let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
    text.push('\n');
    print!("{text}");
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, &text) {
            eprintln!("error: {}: {e}", path.display());
            std::process::exit(EXIT_USAGE as i32);
        }
    }
    std::process::exit(outcome.exit as i32);
}

fn run(cli: &Cli) -> Result<Outcome, Box<dyn std::error::Error>> {
    let cfg = precision_config(cli.tol, cli.precision);
    match &cli.command {
        Command::CheckW { matrix, max_n } => {
            let m = files::load_matrix(matrix)?;
            let opts = weaving_options(*max_n);
            let cert = weaving::classify_class_w(&m, &opts, &cfg)?;
            Ok(Outcome {
                command: "check-w".into(),
                config: json!({ "precision": cfg, "max_n": opts.max_n }),
                result: serde_json::to_value(&cert)?,
                exit: status_exit(cert.status),
            })
        }
        Command::Woven {
            v,
            w,
            permutations,
            max_n,
        } => {
            let vm = files::load_matrix(v)?;
            let wm = files::load_matrix(w)?;
            let opts = weaving_options(*max_n);
            let a = weaving::change_of_basis(&vm, &wm, &cfg)?;
            let config = json!({
                "precision": cfg,
                "max_n": opts.max_n,
                "permutations": permutations,
            });
            if *permutations {
                match weaving::woven_up_to_permutation(&vm, &wm, &opts, &cfg)? {
                    Some(perm) => Ok(Outcome {
                        command: "woven".into(),
                        config,
                        result: json!({
                            "status": "woven_up_to_permutation",
                            "permutation": perm,
                            "change_of_basis": matrix_value(&a),
                        }),
                        exit: EXIT_POSITIVE,
                    }),
                    None => Ok(Outcome {
                        command: "woven".into(),
                        config,
                        result: json!({
                            "status": "no permutation found",
                            "change_of_basis": matrix_value(&a),
                        }),
                        exit: EXIT_NEGATIVE,
                    }),
                }
            } else {
                let cert = weaving::classify_class_w(&a, &opts, &cfg)?;
                let exit = status_exit(cert.status);
                Ok(Outcome {
                    command: "woven".into(),
                    config,
                    result: json!({
                        "certificate": cert,
                        "change_of_basis": matrix_value(&a),
                    }),
                    exit,
                })
            }
        }
        Command::Reconstruct {
            matrix,
            samples,
            subset,
        } => {
            let m = files::load_matrix(matrix)?;
            let y = files::load_vector(samples)?;
            let j = parse_subset(m.nrows(), subset)?;
            let mixed = reconstruct::MixedSamples::new(j.clone(), y)?;
            let config = json!({ "precision": cfg, "subset": j });
            match woven_core::recover(&m, &mixed, &cfg) {
                Ok(x) => Ok(Outcome {
                    command: "reconstruct".into(),
                    config,
                    result: json!({ "recovered": pairs(&x) }),
                    exit: EXIT_POSITIVE,
                }),
                Err(Error::RecoveryImpossible { witness }) => Ok(Outcome {
                    command: "reconstruct".into(),
                    config,
                    result: json!({
                        "status": "recovery_impossible",
                        "witness": witness,
                    }),
                    exit: EXIT_NEGATIVE,
                }),
                Err(e) => Err(e.into()),
            }
        }
        Command::Fourier { sub } => run_fourier(sub, cli.precision, &cfg),
        Command::Sis { sub } => run_sis(sub),
    }
}

fn run_fourier(
    sub: &FourierCmd,
    precision: Option<u32>,
    cfg: &PrecisionConfig,
) -> Result<Outcome, Box<dyn std::error::Error>> {
    match sub {
        FourierCmd::Scan { range, max_n } => {
            let (lo, hi) = parse_range(range)?;
            let opts = fourier_options(precision, *max_n);
            let report = scan(lo, hi, &opts)?;
            let exit = if !report.counterexample_candidates.is_empty()
                || !report.direction_violations.is_empty()
            {
                EXIT_NEGATIVE
            } else if !report.inconclusive.is_empty() {
                EXIT_INCONCLUSIVE
            } else {
                EXIT_POSITIVE
            };
            Ok(Outcome {
                command: "fourier scan".into(),
                config: serde_json::to_value(&opts)?,
                result: serde_json::to_value(&report)?,
                exit,
            })
        }
        FourierCmd::Classify { n, max_n } => {
            let opts = fourier_options(precision, *max_n);
            let row = classify_fourier(*n, &opts)?;
            let exit = status_exit(row.in_w);
            Ok(Outcome {
                command: "fourier classify".into(),
                config: serde_json::to_value(&opts)?,
                result: serde_json::to_value(&row)?,
                exit,
            })
        }
        FourierCmd::Minors { n } => {
            let out = minors_exhaustive(*n, cfg)?;
            let exit = match out.status {
                MinorsStatus::AllNonzero => EXIT_POSITIVE,
                MinorsStatus::ZeroMinor => EXIT_NEGATIVE,
                MinorsStatus::Inconclusive => EXIT_INCONCLUSIVE,
            };
            Ok(Outcome {
                command: "fourier minors".into(),
                config: json!({ "precision": cfg, "n": n }),
                result: serde_json::to_value(&out)?,
                exit,
            })
        }
    }
}

fn run_sis(sub: &SisCmd) -> Result<Outcome, Box<dyn std::error::Error>> {
    match sub {
        SisCmd::Check {
            phi,
            psi,
            grid,
            kmax,
        } => {
            let [phi, psi] = resolve_spectra([phi.as_str(), psi.as_str()], *grid, *kmax)?;
            let cert = sis::perturbation_certify(&phi, &psi)?;
            Ok(Outcome {
                command: "sis check".into(),
                config: shape_config(&phi, &[("trials", None), ("seed", None)]),
                result: json!({
                    "certificate": cert,
                    "phi_tail_mass": sis::boundary_tail_mass(&phi),
                    "psi_tail_mass": sis::boundary_tail_mass(&psi),
                }),
                exit: certificate_exit(cert.status),
            })
        }
        SisCmd::Pw { psi, grid, kmax } => {
            let [psi] = resolve_spectra([psi.as_str()], *grid, *kmax)?;
            let report = sis::pw_corollary_certify(&psi)?;
            Ok(Outcome {
                command: "sis pw".into(),
                config: shape_config(&psi, &[]),
                result: json!({
                    "report": report,
                    "psi_tail_mass": sis::boundary_tail_mass(&psi),
                }),
                exit: certificate_exit(report.certificate.status),
            })
        }
        SisCmd::Multi {
            phi,
            psi,
            grid,
            kmax,
        } => {
            let phi_list = resolve_list(phi, *grid, *kmax)?;
            let psi_list = resolve_list(psi, *grid, *kmax)?;
            let cert = sis::multi_perturbation_certify(&phi_list, &psi_list)?;
            let tails: Vec<f64> = psi_list.iter().map(sis::boundary_tail_mass).collect();
            Ok(Outcome {
                command: "sis multi".into(),
                config: shape_config(&phi_list[0], &[("generators", Some(phi_list.len() as u64))]),
                result: json!({
                    "certificate": cert,
                    "psi_tail_masses": tails,
                }),
                exit: certificate_exit(cert.status),
            })
        }
        SisCmd::Validate {
            phi,
            psi,
            grid,
            kmax,
            trials,
            seed,
        } => {
            let [phi, psi] = resolve_spectra([phi.as_str(), psi.as_str()], *grid, *kmax)?;
            let trials = trials.unwrap_or(50);
            let seed = seed.unwrap_or(0);
            let half_width = 32;
            let (lo, hi) = sis::finite_section_validate(&phi, &psi, half_width, trials, seed)?;
            let exit = if lo > 0.0 {
                EXIT_POSITIVE
            } else {
                EXIT_NEGATIVE
            };
            Ok(Outcome {
                command: "sis validate".into(),
                config: json!({
                    "grid_size": phi.grid_size(),
                    "k_max": phi.k_max(),
                    "half_width": half_width,
                    "trials": trials,
                    "seed": seed,
                }),
                result: json!({
                    "min_lower_bound": lo,
                    "max_upper_bound": hi,
                    "phi_tail_mass": sis::boundary_tail_mass(&phi),
                    "psi_tail_mass": sis::boundary_tail_mass(&psi),
                }),
                exit,
            })
        }
    }
}

fn precision_config(tol: Option<f64>, precision: Option<u32>) -> PrecisionConfig {
    let mut cfg = PrecisionConfig::default();
    if let Some(t) = tol {
        cfg.zero_tol = t;
    }
    match precision {
        None => {}
        Some(0) => cfg.escalation_bits = None,
        Some(bits) => cfg.mode = Mode::Extended { bits },
    }
    cfg
}

fn weaving_options(max_n: Option<usize>) -> WeavingOptions {
    let mut opts = WeavingOptions::default();
    if let Some(m) = max_n {
        opts.max_n = m;
    }
    opts
}

fn fourier_options(precision: Option<u32>, max_n: Option<usize>) -> FourierOptions {
    let mut opts = FourierOptions::default();
    if let Some(m) = max_n {
        opts.max_n = m;
    }
    if let Some(bits) = precision {
        opts.base_bits = bits;
        opts.cap_bits = opts.cap_bits.max(bits);
    }
    opts
}

fn status_exit(status: ClassStatus) -> u8 {
    match status {
        ClassStatus::InW => EXIT_POSITIVE,
        ClassStatus::NotInW => EXIT_NEGATIVE,
        ClassStatus::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn certificate_exit(status: CertificateStatus) -> u8 {
    match status {
        CertificateStatus::CertifiedWoven => EXIT_POSITIVE,
        CertificateStatus::NotCertified => EXIT_NEGATIVE,
    }
}

fn parse_subset(n: usize, arg: &str) -> Result<IndexSet, Box<dyn std::error::Error>> {
    let trimmed = arg.trim();
    if trimmed.is_empty() {
        return Ok(IndexSet::empty(n));
    }
    let mut members = Vec::new();
    for token in trimmed.split(',') {
        members.push(token.trim().parse::<usize>().map_err(|e| {
            format!("subset entry {token:?}: {e}")
        })?);
    }
    Ok(IndexSet::new(n, members)?)
}

fn parse_range(s: &str) -> Result<(usize, usize), Box<dyn std::error::Error>> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("range {s:?} must be written lo..hi"))?;
    let hi = hi.strip_prefix('=').unwrap_or(hi);
    Ok((lo.trim().parse()?, hi.trim().parse()?))
}

/// Resolves spectrum arguments, each a file path or the literal `sinc`.
/// Literals adopt the shape of the first file present; with no files the
/// shape comes from the flags or the 4096-point, K=64 defaults.
fn resolve_spectra<const N: usize>(
    args: [&str; N],
    grid: Option<usize>,
    kmax: Option<usize>,
) -> Result<[SpectrumSamples; N], Box<dyn std::error::Error>> {
    let mut loaded: Vec<Option<SpectrumSamples>> = Vec::with_capacity(N);
    for arg in args {
        if arg == "sinc" {
            loaded.push(None);
        } else {
            loaded.push(Some(files::load_spectrum(std::path::Path::new(arg))?));
        }
    }
    let shape = loaded
        .iter()
        .flatten()
        .next()
        .map(|s| (s.grid_size(), s.k_max()))
        .unwrap_or((grid.unwrap_or(4096), kmax.unwrap_or(64)));
    if let Some(g) = grid {
        if g != shape.0 {
            return Err(format!("--grid {g} conflicts with file grid size {}", shape.0).into());
        }
    }
    if let Some(k) = kmax {
        if k != shape.1 {
            return Err(format!("--kmax {k} conflicts with file k_max {}", shape.1).into());
        }
    }
    let resolved: Vec<SpectrumSamples> = loaded
        .into_iter()
        .map(|s| match s {
            Some(s) => Ok(s),
            None => SpectrumSamples::sinc(shape.0, shape.1),
        })
        .collect::<woven_core::Result<_>>()?;
    Ok(resolved.try_into().expect("length preserved"))
}

fn resolve_list(
    arg: &str,
    grid: Option<usize>,
    kmax: Option<usize>,
) -> Result<Vec<SpectrumSamples>, Box<dyn std::error::Error>> {
    let parts: Vec<&str> = arg.split(',').map(str::trim).collect();
    let mut out = Vec::with_capacity(parts.len());
    for part in &parts {
        let [s] = resolve_spectra([part], grid, kmax)?;
        out.push(s);
    }
    // A lone literal adopts the shape of any file elsewhere in the list.
    if let Some((g, k)) = out
        .iter()
        .zip(&parts)
        .find(|(_, p)| **p != "sinc")
        .map(|(s, _)| (s.grid_size(), s.k_max()))
    {
        for (s, part) in out.iter_mut().zip(&parts) {
            if *part == "sinc" {
                *s = SpectrumSamples::sinc(g, k)?;
            }
        }
    }
    Ok(out)
}

fn shape_config(s: &SpectrumSamples, extra: &[(&str, Option<u64>)]) -> Value {
    let mut v = json!({
        "grid_size": s.grid_size(),
        "k_max": s.k_max(),
    });
    for (key, val) in extra {
        if let Some(val) = val {
            v[*key] = json!(val);
        }
    }
    v
}

fn matrix_value(m: &CMatrix) -> Value {
    json!({
        "n": m.nrows(),
        "entries": pairs(m.entries()),
    })
}

fn pairs(z: &[woven_core::C64]) -> Vec<[f64; 2]> {
    z.iter().map(|c| [c.re, c.im]).collect()
}
