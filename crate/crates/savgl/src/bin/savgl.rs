use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use savgl::error::Error;
use savgl::gltd::{verdict, GltdParams, Preset};
use savgl::identities::{admissible_branches, discriminant};
use savgl::models::{build_model, ModelKind};
use savgl::run::{check_monotone, read_energy_column, run_simulation, run_sweep, RunConfig, RunStatus};
use savgl::spectral::{brute_force_truncated_convolution, cubic_dealiased_one_sided, forward, Field, SpectralGrid};
use savgl::stability::{estimate_for_model, mode_bounds, Linearization, TauBound};

const EXIT_FAIL: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_RUNTIME: u8 = 3;

#[derive(Parser)]
#[command(name = "savgl", version, about = "SAV and generalized-SAV gradient-flow solver")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a JSON-configured simulation.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Write snapshots as raw little-endian f64 with a JSON sidecar.
        #[arg(long)]
        binary: bool,
        /// The config file holds an array of runs, executed in parallel.
        #[arg(long)]
        sweep: bool,
    },
    /// Classify a parameter triple and report its stability verdicts.
    CheckParams {
        #[arg(long, allow_hyphen_values = true)]
        alpha0: f64,
        #[arg(long, allow_hyphen_values = true)]
        beta0: f64,
        #[arg(long, allow_hyphen_values = true)]
        beta2: f64,
        /// Also solve for the energy-identity coefficients.
        #[arg(long)]
        identities: bool,
        #[arg(long)]
        json: bool,
    },
    /// Linear-stability stepsize bound for a model. Without a parameter
    /// triple all four presets are reported.
    Stepsize {
        #[arg(long)]
        model: ModelKind,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        length: Option<f64>,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long, allow_hyphen_values = true, requires_all = ["beta0", "beta2"])]
        alpha0: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        beta0: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        beta2: Option<f64>,
        #[arg(long)]
        psi: f64,
        /// Print every mode as CSV instead of the summary.
        #[arg(long)]
        csv: bool,
        /// Use the model symbols for the crystal model instead of the tabulated form.
        #[arg(long)]
        exact: bool,
    },
    /// Compare the zero-padded cube against the brute-force convolution.
    DealiasTest {
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Use a constant field instead of a random one.
        #[arg(long)]
        constant: bool,
    },
    /// Check that a column of energies.csv is non-increasing.
    CheckMonotone {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, default_value = "modified_energy")]
        column: String,
        #[arg(long, default_value_t = 1e-9)]
        rel_tol: f64,
        /// Ignore this many leading rows.
        #[arg(long, default_value_t = 0)]
        skip: usize,
    },
}

fn code_for(e: &Error) -> u8 {
    if e.is_runtime() {
        EXIT_RUNTIME
    } else if matches!(e, Error::Io(_)) {
        EXIT_FAIL
    } else {
        EXIT_VALIDATION
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Simulate { config, binary, sweep } => simulate(config, binary, sweep),
        Cmd::CheckParams { alpha0, beta0, beta2, identities, json } => check_params(alpha0, beta0, beta2, identities, json),
        Cmd::Stepsize { model, n, length, epsilon, alpha0, beta0, beta2, psi, csv, exact } => {
            let params = alpha0.map(|a| (a, beta0.unwrap_or(0.0), beta2.unwrap_or(1.0)));
            stepsize(model, n, length, epsilon, params, psi, csv, exact)
        }
        Cmd::DealiasTest { n, seed, constant } => dealias_test(n, seed, constant),
        Cmd::CheckMonotone { file, column, rel_tol, skip } => monotone(file, &column, rel_tol, skip),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(code_for(&e))
        }
    }
}

fn simulate(path: PathBuf, binary: bool, sweep: bool) -> Result<u8, Error> {
    let text = std::fs::read_to_string(&path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    let mut cfgs: Vec<RunConfig> = if sweep {
        serde_json::from_str(&text).map_err(|e| Error::Config(e.to_string()))?
    } else {
        vec![serde_json::from_str(&text).map_err(|e| Error::Config(e.to_string()))?]
    };
    for c in &mut cfgs {
        c.output.binary |= binary;
        c.validate()?;
    }
    let metas = if sweep { run_sweep(&cfgs)? } else { vec![run_simulation(&cfgs[0])] };
    let mut code = 0;
    for (cfg, meta) in cfgs.iter().zip(metas) {
        let meta = meta?;
        let dir = cfg.output.directory.display();
        match meta.status {
            RunStatus::Completed => println!("{dir}: completed {} steps, t = {}", meta.steps_completed, meta.final_time),
            RunStatus::Aborted => {
                println!("{dir}: aborted after step {}: {}", meta.steps_completed, meta.error.as_deref().unwrap_or("?"));
                code = EXIT_RUNTIME;
            }
        }
    }
    Ok(code)
}

fn check_params(a0: f64, b0: f64, b2: f64, identities: bool, as_json: bool) -> Result<u8, Error> {
    let p = GltdParams::new(a0, b0, b2)?;
    let v = verdict(&p);
    let ids = identities.then(|| admissible_branches(&p));
    if as_json {
        let mut out = json!({ "params": p, "verdict": v });
        if let Some(ids) = &ids {
            out["discriminant"] = json!(discriminant(&p));
            out["identities"] = match ids {
                Ok(list) => json!(list.iter().map(|(b, c)| json!({"branch": b, "coefficients": c})).collect::<Vec<_>>()),
                Err(e) => json!({ "error": e.to_string() }),
            };
        }
        println!("{}", serde_json::to_string_pretty(&out).expect("report serializes"));
        return Ok(0);
    }
    println!("alpha0 = {a0}, beta0 = {b0}, beta1 = {}, beta2 = {b2}, kappa = {}", p.beta1(), p.kappa());
    println!("case:                  {:?}", v.case);
    println!("parameter region:      {}", v.satisfies_parameter_region);
    println!("A-stable:              {}", v.a_stable);
    println!("algebraically stable:  {:?}", v.algebraically_stable);
    if let Some(ids) = ids {
        println!("discriminant:          {:e}", discriminant(&p));
        match ids {
            Ok(list) => {
                for (b, c) in list {
                    println!(
                        "  {:?}/{:?}: a = {}, b = {}, d = {}, c1 = {}, c2 = {}, c3 = {}",
                        b.sign, b.order, c.a, c.b, c.d, c.c1, c.c2, c.c3
                    );
                }
            }
            Err(e) => println!("identities: {e}"),
        }
    }
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn stepsize(
    kind: ModelKind,
    n: Option<usize>,
    length: Option<f64>,
    epsilon: Option<f64>,
    params: Option<(f64, f64, f64)>,
    psi: f64,
    csv: bool,
    exact: bool,
) -> Result<u8, Error> {
    let (dn, dl, de) = match kind {
        ModelKind::Pfc => (400, 400.0, 0.25),
        _ => (128, 2.0 * std::f64::consts::PI, 0.1),
    };
    let grid = SpectralGrid::new(n.unwrap_or(dn), length.unwrap_or(dl))?;
    let model = build_model(kind, epsilon.unwrap_or(de), &grid, 1.0, 0.0)?;
    let lin = if exact { Linearization::Consistent } else { Linearization::Tabulated };
    let list: Vec<(String, GltdParams)> = match params {
        Some((a, b0, b2)) => vec![(format!("({a}, {b0}, {b2})"), GltdParams::new(a, b0, b2)?)],
        None => Preset::ALL.iter().map(|p| (p.name().to_string(), p.params())).collect(),
    };
    for (name, p) in list {
        if csv {
            println!("k,l,xi,zeta,tau_max,expression");
            for mb in mode_bounds(&model, &p, psi, lin) {
                let t = match mb.bound.bound {
                    TauBound::Bounded(t) => t.to_string(),
                    TauBound::Unbounded => "inf".into(),
                    TauBound::NoStableStep => "0".into(),
                };
                println!("{},{},{},{},{},{}", mb.k, mb.l, mb.xi, mb.zeta, t, mb.bound.expression);
            }
            continue;
        }
        let r = estimate_for_model(&model, &p, psi, lin)?;
        let bound = match r.tau_max {
            TauBound::Bounded(t) => format!("tau < {t:.6}"),
            TauBound::Unbounded => "unconditional".into(),
            TauBound::NoStableStep => "no stable step".into(),
        };
        print!("{name}: {bound}");
        if let Some((k, l)) = r.argmax_mode {
            print!("  mode ({k}, {l})  {}", r.limiting_expression);
        }
        if let Some(v) = r.limiting_value {
            print!("  denominator {v:.6}");
        }
        if r.growing_modes > 0 {
            print!("  ({} growing modes skipped)", r.growing_modes);
        }
        println!();
    }
    if !csv {
        println!("note: {}", savgl::stability::REPORT_NOTE);
    }
    Ok(0)
}

fn dealias_test(n: usize, seed: u64, constant: bool) -> Result<u8, Error> {
    let grid = SpectralGrid::new(n, 2.0 * std::f64::consts::PI)?;
    if n > savgl::spectral::BRUTE_FORCE_MAX_N {
        return Err(Error::GridTooLarge(n));
    }
    let field = if constant {
        grid.constant(0.7)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = ndarray::Array2::from_shape_fn((n, n), |_| rng.gen_range(-1.0..1.0));
        Field::new(values, &grid)?
    };
    let s = forward(&field);
    let fast = cubic_dealiased_one_sided(&s);
    let slow = brute_force_truncated_convolution(&s)?;
    let dev = fast.coeffs.iter().zip(slow.coeffs.iter()).fold(0.0_f64, |m, (a, b)| m.max((a - b).norm()));
    let rel = if slow.max_abs() > 0.0 { dev / slow.max_abs() } else { dev };
    let pass = rel <= 1e-9;
    println!("n = {n}, seed = {seed}: max deviation {dev:e} (relative {rel:e}) {}", if pass { "PASS" } else { "FAIL" });
    Ok(if pass { 0 } else { EXIT_FAIL })
}

fn monotone(file: PathBuf, column: &str, rel_tol: f64, skip: usize) -> Result<u8, Error> {
    let values = read_energy_column(&file, column)?;
    let r = check_monotone(values.get(skip..).unwrap_or(&[]), rel_tol);
    match r.first_violation {
        None => println!("{column}: non-increasing over {} rows (worst uptick {:e})", values.len().saturating_sub(skip), r.worst_uptick),
        Some(i) => println!("{column}: increases at row {} (worst uptick {:e})", i + skip, r.worst_uptick),
    }
    Ok(if r.monotone { 0 } else { EXIT_FAIL })
}
