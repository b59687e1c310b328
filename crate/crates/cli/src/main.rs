//! `vnent` binary: file-based front end for the entropy toolkit.
//!
//! Every subcommand reads JSON inputs, validates them through the library
//! constructors, and prints a JSON report to stdout. Reports are
//! deterministic: identical argv + input files + seed give byte-identical
//! output. Exit codes: 0 success, 2 validation/usage errors, 1 internal
//! errors.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use vnent::capacity::{self, Ensemble, EnsembleRepr};
use vnent::channels::{self, PinchingBasis};
use vnent::entropy::{self, ProbabilityVector};
use vnent::lindblad;
use vnent::matrices::{trace_distance, ComplexMatrix};
use vnent::maxent::{self, ChainSpec, Hamiltonian};
use vnent::states::{self, DensityOperator, PureState};

const LN2: f64 = std::f64::consts::LN_2;

#[derive(Parser)]
#[command(name = "vnent", version, about = "Entropy toolkit for finite quantum systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct UnitFlag {
    /// Report entropies in bits instead of nats.
    #[arg(long)]
    bits: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Von Neumann entropy of a density operator.
    Entropy {
        /// Density operator JSON file.
        #[arg(long)]
        state: PathBuf,
        #[command(flatten)]
        unit: UnitFlag,
    },
    /// Shannon entropy of a probability vector.
    Shannon {
        /// JSON array of probabilities summing to one.
        #[arg(long)]
        probs: PathBuf,
        #[command(flatten)]
        unit: UnitFlag,
    },
    /// Maxwell-Boltzmann distribution with a mean-energy constraint.
    Maxboltz {
        /// JSON array of energy levels.
        #[arg(long)]
        levels: PathBuf,
        /// Target mean energy.
        #[arg(long)]
        energy: f64,
        #[command(flatten)]
        unit: UnitFlag,
    },
    /// Gibbs state at fixed inverse temperature, or the max-entropy state
    /// at fixed mean energy.
    Gibbs {
        /// Hamiltonian JSON file.
        #[arg(long)]
        hamiltonian: PathBuf,
        /// Target mean energy (solves for beta).
        #[arg(long, conflicts_with = "beta")]
        energy: Option<f64>,
        /// Inverse temperature.
        #[arg(long)]
        beta: Option<f64>,
        #[command(flatten)]
        unit: UnitFlag,
    },
    /// Pinch a state in a measurement basis and compare entropies.
    Pinch {
        /// Density operator JSON file.
        #[arg(long)]
        state: PathBuf,
        /// Orthonormal basis JSON file (list of complex vectors); defaults
        /// to the computational basis.
        #[arg(long)]
        basis: Option<PathBuf>,
        #[command(flatten)]
        unit: UnitFlag,
    },
    /// Steer a qubit between orthogonal pure states by repeated pinching.
    Steer {
        /// Number of pinching steps.
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Write the per-step table (k,step,fidelity,trace_distance) as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Subadditivity check for a bipartite state.
    Subadd {
        /// Bipartite density operator JSON file.
        #[arg(long)]
        state: PathBuf,
        /// Factor dimensions, e.g. 2,3.
        #[arg(long, value_delimiter = ',')]
        dims: Vec<usize>,
        #[command(flatten)]
        unit: UnitFlag,
    },
    /// Strong subadditivity check for a tripartite state.
    Ssa {
        /// Tripartite density operator JSON file.
        #[arg(long)]
        state: PathBuf,
        /// Factor dimensions, e.g. 2,2,2.
        #[arg(long, value_delimiter = ',')]
        dims: Vec<usize>,
        #[command(flatten)]
        unit: UnitFlag,
    },
    /// Entropy-density profile of a nearest-neighbour Gibbs chain.
    Chain {
        /// Chain specification JSON file; defaults to a transverse-field
        /// Ising chain built from --length/--coupling/--field.
        #[arg(long)]
        chain: Option<PathBuf>,
        /// Number of sites for the default Ising chain.
        #[arg(long, default_value_t = 4)]
        length: usize,
        /// Ising coupling strength for the default chain.
        #[arg(long, default_value_t = 1.0)]
        coupling: f64,
        /// Transverse field strength for the default chain.
        #[arg(long, default_value_t = 0.5)]
        field: f64,
        /// Inverse temperature.
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        /// Write the (N,entropy_density) table as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        unit: UnitFlag,
    },
    /// Sampled lower bound on the operational (Lindblad) entropy.
    Lindblad {
        /// Density operator JSON file.
        #[arg(long)]
        state: PathBuf,
        /// Number of random partition samples.
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// RNG seed (required; runs are reproducible).
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        unit: UnitFlag,
    },
    /// Optimize a projective measurement for a pure-state ensemble and
    /// check the capacity bound I <= S(D).
    Capacity {
        /// Ensemble JSON file ({"weights": [...], "vectors": [...]}).
        #[arg(long)]
        ensemble: PathBuf,
        /// Optimizer restarts.
        #[arg(long, default_value_t = 8)]
        restarts: usize,
        /// RNG seed (required; runs are reproducible).
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        unit: UnitFlag,
    },
    /// Decompose a state into pure components (Schatten by default,
    /// random with --count/--seed) and report the mixing entropy.
    Decompose {
        /// Density operator JSON file.
        #[arg(long)]
        state: PathBuf,
        /// Number of components for a random decomposition.
        #[arg(long, requires = "seed")]
        count: Option<usize>,
        /// RNG seed for the random decomposition.
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        unit: UnitFlag,
    },
}

#[derive(Serialize)]
struct Report {
    command: &'static str,
    tool_version: &'static str,
    seed: Option<u64>,
    inputs: BTreeMap<String, String>,
    outputs: serde_json::Map<String, Value>,
}

struct Failure {
    code: u8,
    message: String,
}

type RunResult<T> = std::result::Result<T, Failure>;

fn validation(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

impl From<vnent::Error> for Failure {
    fn from(e: vnent::Error) -> Failure {
        // Convergence failures are internal; everything else names a
        // violated input invariant.
        let code = match e {
            vnent::Error::NoConvergence { .. } => 1,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn read_file(path: &Path, label: &str, inputs: &mut BTreeMap<String, String>) -> RunResult<String> {
    let bytes = fs::read(path)
        .map_err(|e| validation(format!("cannot read --{label} file {}: {e}", path.display())))?;
    inputs.insert(label.to_string(), hex::encode(Sha256::digest(&bytes)));
    String::from_utf8(bytes).map_err(|_| validation(format!("--{label} file is not UTF-8")))
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str, label: &str) -> RunResult<T> {
    serde_json::from_str(text).map_err(|e| validation(format!("invalid --{label} JSON: {e}")))
}

fn load_state(
    path: &Path,
    inputs: &mut BTreeMap<String, String>,
) -> RunResult<DensityOperator> {
    let text = read_file(path, "state", inputs)?;
    parse_json(&text, "state")
}

fn entropy_value(nats: f64, bits: bool) -> Value {
    if bits {
        json!({ "value": nats / LN2, "unit": "bits" })
    } else {
        json!({ "value": nats, "unit": "nats" })
    }
}

fn plain(value: f64) -> Value {
    json!({ "value": value, "unit": "dimensionless" })
}

fn matrix_value(m: &ComplexMatrix) -> Value {
    serde_json::to_value(m.clone()).expect("matrix serialization cannot fail")
}

fn write_csv(path: &Path, header: &str, rows: &[String]) -> RunResult<()> {
    let mut f = fs::File::create(path)
        .map_err(|e| validation(format!("cannot write --csv file {}: {e}", path.display())))?;
    writeln!(f, "{header}").and_then(|_| {
        rows.iter().try_for_each(|r| writeln!(f, "{r}"))
    })
    .map_err(|e| validation(format!("cannot write --csv file {}: {e}", path.display())))
}

fn run(cli: Cli) -> RunResult<Report> {
    let mut inputs = BTreeMap::new();
    let mut outputs = serde_json::Map::new();
    let mut report_seed = None;

    let command = match cli.command {
        Command::Entropy { state, unit } => {
            let d = load_state(&state, &mut inputs)?;
            let s = entropy::von_neumann(&d)?;
            outputs.insert("entropy".into(), entropy_value(s, unit.bits));
            "entropy"
        }
        Command::Shannon { probs, unit } => {
            let text = read_file(&probs, "probs", &mut inputs)?;
            let raw: Vec<f64> = parse_json(&text, "probs")?;
            let p = ProbabilityVector::new(raw)?;
            outputs.insert(
                "entropy".into(),
                entropy_value(entropy::shannon(&p), unit.bits),
            );
            "shannon"
        }
        Command::Maxboltz {
            levels,
            energy,
            unit,
        } => {
            let text = read_file(&levels, "levels", &mut inputs)?;
            let levels: Vec<f64> = parse_json(&text, "levels")?;
            let (p, lambda) = entropy::maxwell_boltzmann(&levels, energy)?;
            outputs.insert(
                "probabilities".into(),
                json!({ "value": p.probs(), "unit": "dimensionless" }),
            );
            outputs.insert("multiplier".into(), plain(lambda));
            outputs.insert(
                "entropy".into(),
                entropy_value(entropy::shannon(&p), unit.bits),
            );
            "maxboltz"
        }
        Command::Gibbs {
            hamiltonian,
            energy,
            beta,
            unit,
        } => {
            let text = read_file(&hamiltonian, "hamiltonian", &mut inputs)?;
            let h: Hamiltonian = parse_json(&text, "hamiltonian")?;
            let (d, beta) = match (energy, beta) {
                (Some(e), None) => maxent::max_entropy_state(&h, e)?,
                (None, Some(b)) => (maxent::gibbs_state(&h, b)?, b),
                _ => return Err(validation("exactly one of --energy or --beta is required")),
            };
            outputs.insert("state".into(), matrix_value(d.matrix()));
            outputs.insert("beta".into(), plain(beta));
            outputs.insert("energy".into(), plain(h.energy(&d)));
            outputs.insert(
                "entropy".into(),
                entropy_value(entropy::von_neumann(&d)?, unit.bits),
            );
            "gibbs"
        }
        Command::Pinch { state, basis, unit } => {
            let d = load_state(&state, &mut inputs)?;
            let basis = match basis {
                Some(path) => {
                    let text = read_file(&path, "basis", &mut inputs)?;
                    let raw: Vec<Vec<(f64, f64)>> = parse_json(&text, "basis")?;
                    PinchingBasis::new(
                        raw.into_iter()
                            .map(|v| v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect())
                            .collect(),
                    )?
                }
                None => PinchingBasis::computational(d.dim()),
            };
            let pinched = channels::pinch_density(&d, &basis)?;
            outputs.insert("state".into(), matrix_value(pinched.matrix()));
            outputs.insert(
                "entropy_before".into(),
                entropy_value(entropy::von_neumann(&d)?, unit.bits),
            );
            outputs.insert(
                "entropy_after".into(),
                entropy_value(entropy::von_neumann(&pinched)?, unit.bits),
            );
            "pinch"
        }
        Command::Steer { k, csv } => {
            if k < 1 {
                return Err(validation("--k must be at least 1"));
            }
            let phi1 = PureState::basis(2, 0);
            let phi2 = PureState::basis(2, 1);
            let seq = channels::steering_sequence(&phi1, &phi2, k)?;
            let target = DensityOperator::pure(&phi2);
            let mut rows = Vec::with_capacity(k);
            let mut final_fid = 0.0;
            let mut final_dist = 0.0;
            for (i, rho) in seq.iter().enumerate() {
                final_fid = phi2.fidelity(rho);
                final_dist = trace_distance(rho.matrix(), target.matrix())?;
                rows.push(format!("{k},{},{final_fid},{final_dist}", i + 1));
            }
            if let Some(path) = csv {
                write_csv(&path, "k,step,fidelity,trace_distance", &rows)?;
            }
            outputs.insert("k".into(), json!(k));
            outputs.insert("final_fidelity".into(), plain(final_fid));
            outputs.insert(
                "closed_form_fidelity".into(),
                plain(channels::steering_fidelity_closed_form(k)),
            );
            outputs.insert("final_trace_distance".into(), plain(final_dist));
            "steer"
        }
        Command::Subadd { state, dims, unit } => {
            let d = load_state(&state, &mut inputs)?;
            if dims.len() != 2 {
                return Err(validation("--dims needs exactly two factors, e.g. 2,3"));
            }
            let (d1, d2) = (dims[0], dims[1]);
            if d1 * d2 != d.dim() {
                return Err(validation(format!(
                    "--dims {d1},{d2} do not factor the state dimension {}",
                    d.dim()
                )));
            }
            let (s12, s1, s2) = entropy::check_subadditivity(&d, (d1, d2))?;
            outputs.insert("s12".into(), entropy_value(s12, unit.bits));
            outputs.insert("s1".into(), entropy_value(s1, unit.bits));
            outputs.insert("s2".into(), entropy_value(s2, unit.bits));
            let slack = s1 + s2 - s12;
            outputs.insert(
                "slack".into(),
                entropy_value(slack, unit.bits),
            );
            outputs.insert("holds".into(), json!(slack >= -1e-8));
            "subadd"
        }
        Command::Ssa { state, dims, unit } => {
            let d = load_state(&state, &mut inputs)?;
            if dims.len() != 3 {
                return Err(validation("--dims needs exactly three factors, e.g. 2,2,2"));
            }
            let (d1, d2, d3) = (dims[0], dims[1], dims[2]);
            if d1 * d2 * d3 != d.dim() {
                return Err(validation(format!(
                    "--dims {d1},{d2},{d3} do not factor the state dimension {}",
                    d.dim()
                )));
            }
            let (s123, s12, s23, s2) = entropy::check_ssa(&d, (d1, d2, d3))?;
            outputs.insert("s123".into(), entropy_value(s123, unit.bits));
            outputs.insert("s12".into(), entropy_value(s12, unit.bits));
            outputs.insert("s23".into(), entropy_value(s23, unit.bits));
            outputs.insert("s2".into(), entropy_value(s2, unit.bits));
            let slack = s12 + s23 - s123 - s2;
            outputs.insert("slack".into(), entropy_value(slack, unit.bits));
            outputs.insert("holds".into(), json!(slack >= -1e-8));
            "ssa"
        }
        Command::Chain {
            chain,
            length,
            coupling,
            field,
            beta,
            csv,
            unit,
        } => {
            let spec = match chain {
                Some(path) => {
                    let text = read_file(&path, "chain", &mut inputs)?;
                    parse_json::<ChainSpec>(&text, "chain")?
                }
                None => maxent::ising_chain(length, coupling, field),
            };
            let profile = maxent::entropy_density_profile(&spec, beta, spec.length)?;
            let scale = if unit.bits { 1.0 / LN2 } else { 1.0 };
            let rows: Vec<String> = profile
                .densities
                .iter()
                .map(|(n, s)| format!("{n},{}", s * scale))
                .collect();
            if let Some(path) = csv {
                write_csv(&path, "N,entropy_density", &rows)?;
            }
            let unit_tag = if unit.bits { "bits" } else { "nats" };
            outputs.insert(
                "densities".into(),
                json!({
                    "value": profile
                        .densities
                        .iter()
                        .map(|&(n, s)| json!([n, s * scale]))
                        .collect::<Vec<_>>(),
                    "unit": unit_tag,
                }),
            );
            let max_gap = profile
                .fekete_gaps
                .iter()
                .map(|&(_, _, g)| g)
                .fold(f64::NEG_INFINITY, f64::max);
            outputs.insert("max_fekete_gap".into(), entropy_value(max_gap, unit.bits));
            outputs.insert("fekete_holds".into(), json!(profile.fekete_holds(1e-8)));
            "chain"
        }
        Command::Lindblad {
            state,
            trials,
            seed,
            unit,
        } => {
            if trials < 1 {
                return Err(validation("--trials must be at least 1"));
            }
            let d = load_state(&state, &mut inputs)?;
            let bound = lindblad::lindblad_lower_bound(&d, trials, seed)?;
            report_seed = Some(seed);
            outputs.insert(
                "lower_bound".into(),
                entropy_value(bound.lower_bound, unit.bits),
            );
            outputs.insert(
                "canonical_value".into(),
                entropy_value(bound.canonical_value, unit.bits),
            );
            outputs.insert(
                "two_entropy".into(),
                entropy_value(2.0 * entropy::von_neumann(&d)?, unit.bits),
            );
            outputs.insert("samples_kept".into(), json!(bound.samples_kept));
            "lindblad"
        }
        Command::Capacity {
            ensemble,
            restarts,
            seed,
            unit,
        } => {
            if restarts < 1 {
                return Err(validation("--restarts must be at least 1"));
            }
            let text = read_file(&ensemble, "ensemble", &mut inputs)?;
            let repr: EnsembleRepr = parse_json(&text, "ensemble")?;
            let ens = Ensemble::try_from(repr)?;
            let s = entropy::von_neumann(&capacity::ensemble_state(&ens)?)?;
            let (_, info) = capacity::optimize_measurement(&ens, restarts, seed)?;
            report_seed = Some(seed);
            outputs.insert("mutual_information".into(), entropy_value(info, unit.bits));
            outputs.insert("entropy".into(), entropy_value(s, unit.bits));
            outputs.insert("bound_holds".into(), json!(info <= s + 1e-8));
            "capacity"
        }
        Command::Decompose {
            state,
            count,
            seed,
            unit,
        } => {
            let d = load_state(&state, &mut inputs)?;
            let dec = match count {
                Some(count) => {
                    let seed = seed.expect("clap enforces --seed with --count");
                    report_seed = Some(seed);
                    states::random_pure_decomposition(&d, count, seed)?
                }
                None => states::schatten(&d)?,
            };
            outputs.insert(
                "weights".into(),
                json!({ "value": dec.weights, "unit": "dimensionless" }),
            );
            outputs.insert(
                "mixing_entropy".into(),
                entropy_value(states::mixing_entropy(&dec), unit.bits),
            );
            outputs.insert(
                "entropy".into(),
                entropy_value(entropy::von_neumann(&d)?, unit.bits),
            );
            "decompose"
        }
    };

    Ok(Report {
        command,
        tool_version: env!("CARGO_PKG_VERSION"),
        seed: report_seed,
        inputs,
        outputs,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(report) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&report).expect("report serialization cannot fail")
            );
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
