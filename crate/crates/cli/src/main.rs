//! `wecomp`: weight enumerators, Clifford+T amplitudes and counting gaps
//! from the command line. Output is JSON on stdout; errors go to stderr.

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde_json::{json, Value};

use wecomp::amplify::{
    recover_coefficients, recover_value_at_omega, BallReport, NoiseMode, RecoveryParams, SimulatedOracle,
};
use wecomp::circuits::{expand_macros, statevector_amplitude, Circuit};
use wecomp::codes::{direct_sum, pack_eval, unpack_coefficients, wreath_sum, LinearCode, Semantics};
use wecomp::cyclotomic::CycInt;
use wecomp::gapred::{gap_bruteforce, gap_via_weight_enumerator, BoolCircuit};
use wecomp::gf2::BitMatrix;
use wecomp::pathsum::{amplitude_exact, compile};
use wecomp::Error;

#[derive(Parser, Debug)]
#[command(name = "wecomp", version, about = "Weight enumerators, Clifford+T path sums and counting gaps")]
struct Cli {
    /// Indented JSON.
    #[arg(long, global = true)]
    pretty: bool,

    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true, env = "WECOMP_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Weight distribution A_0..A_n of a code.
    Wd {
        code: PathBuf,
        /// Count row combinations with multiplicity instead of distinct codewords.
        #[arg(long)]
        multiset: bool,
    },
    /// w_C(q) at `omega`, an integer, a rational `p/q` or a Z[ω] literal.
    Eval {
        code: PathBuf,
        #[arg(long)]
        q: String,
    },
    /// w_C(2^n) as a decimal integer.
    Pack { code: PathBuf },
    /// Inverse of `pack`.
    Unpack {
        value: String,
        #[arg(long)]
        n: usize,
    },
    /// Direct or wreath sum of two codes.
    #[command(group(ArgGroup::new("kind").required(true).args(["direct", "wreath"])))]
    Sum {
        #[arg(long)]
        direct: bool,
        #[arg(long)]
        wreath: bool,
        a: PathBuf,
        b: PathBuf,
    },
    /// The code, phase and multiplicity whose enumerator at ω gives ⟨0|C|0⟩.
    Compile { circuit: PathBuf },
    /// ⟨0|C|0⟩ in exact form.
    Amplitude {
        circuit: PathBuf,
        #[arg(long)]
        check_statevector: bool,
        #[arg(long, default_value_t = 128)]
        precision: u32,
    },
    /// gap(x) = Σ_u (−1)^{C(x,u)}.
    Gap {
        circuit: PathBuf,
        #[arg(long, value_enum, default_value_t = Via::We)]
        via: Via,
    },
    /// Recovers the weight distribution from a simulated noisy oracle.
    RecoverCoeffs {
        code: PathBuf,
        #[command(flatten)]
        oracle: OracleArgs,
        /// Radius around 1 holding the evaluation points.
        #[arg(long)]
        r: Option<f64>,
    },
    /// Recovers w_C(ω) from a simulated noisy oracle restricted to ω.
    RecoverOmega {
        code: PathBuf,
        #[command(flatten)]
        oracle: OracleArgs,
    },
    /// Times Gray-code enumeration of a random [n, k] code.
    BenchEnum {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 64)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(clap::Args, Debug)]
struct OracleArgs {
    #[arg(long)]
    alpha: f64,
    /// adversarial, uniform or none.
    #[arg(long, default_value = "adversarial")]
    noise: String,
    /// Required unless the noise is `none`.
    #[arg(long)]
    seed: Option<u64>,
    /// Amplification parameter; chosen automatically when omitted.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    precision: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Via {
    We,
    Brute,
    Both,
}

enum Failure {
    Lib(Error),
    /// Independent pipelines disagreed; the report is still printed.
    Disagreement(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Resource(_) => 3,
        Error::Certification(_) | Error::Internal(_) => 4,
        _ => 2,
    }
}

fn read_input(path: &Path) -> Result<String, Error> {
    let mut text = String::new();
    if path == Path::new("-") {
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Error::Input(format!("cannot read standard input: {e}")))?;
    } else {
        text = std::fs::read_to_string(path)
            .map_err(|e| Error::Input(format!("cannot read '{}': {e}", path.display())))?;
    }
    Ok(text)
}

fn read_code(path: &Path) -> Result<LinearCode, Error> {
    LinearCode::parse(&read_input(path)?)
}

fn read_circuit(path: &Path) -> Result<Circuit, Error> {
    let c = Circuit::parse(&read_input(path)?)?;
    if c.is_expanded() {
        Ok(c)
    } else {
        expand_macros(&c)
    }
}

fn code_json(c: &LinearCode) -> Value {
    json!({
        "n": c.length(),
        "k": c.dimension(),
        "rows": c.generator().rows().iter().map(|r| r.to_string()).collect::<Vec<_>>(),
    })
}

fn exact_text(value: &CycInt, half_power: u64) -> String {
    if half_power % 2 == 0 {
        format!("({value})/2^{}", half_power / 2)
    } else {
        format!("({value})/sqrt2^{half_power}")
    }
}

fn oracle_for(code: &LinearCode, args: &OracleArgs) -> Result<(SimulatedOracle, RecoveryParams), Error> {
    let mode: NoiseMode = args.noise.parse()?;
    let seed = match (args.seed, mode) {
        (Some(s), _) => s,
        (None, NoiseMode::Noiseless) => 0,
        (None, _) => {
            return Err(Error::Input(format!(
                "--seed is required with noise mode '{}'",
                args.noise
            )))
        }
    };
    let oracle = SimulatedOracle::new(code, args.alpha, mode, seed)?;
    let mut params = RecoveryParams::new(args.alpha);
    params.k = args.k;
    params.precision_bits = args.precision;
    Ok((oracle, params))
}

fn run(command: &Command) -> Result<Value, Failure> {
    Ok(match command {
        Command::Wd { code, multiset } => {
            let c = read_code(code)?;
            let sem = if *multiset {
                Semantics::Multiset
            } else {
                Semantics::Codeword
            };
            let dist = c.weight_distribution(sem)?;
            json!({
                "n": c.length(),
                "k": c.dimension(),
                "rank": c.rank(),
                "semantics": if *multiset { "multiset" } else { "codeword" },
                "counts": dist.to_decimal_strings(),
            })
        }
        Command::Eval { code, q } => {
            let c = read_code(code)?;
            let value = match q.trim() {
                "omega" | "w" => c.evaluate_at_omega()?.to_string(),
                s if s.chars().all(|ch| ch.is_ascii_digit() || ch == '-' || ch == '/') => {
                    let point: BigRational = s
                        .parse()
                        .map_err(|_| Error::Input(format!("'{s}' is not an integer or rational p/q")))?;
                    c.evaluate(&point)?.to_string()
                }
                s => {
                    let point: CycInt = s.parse()?;
                    c.evaluate(&point)?.to_string()
                }
            };
            json!({ "q": q, "value": value })
        }
        Command::Pack { code } => {
            let c = read_code(code)?;
            json!({ "n": c.length(), "value": pack_eval(&c)?.to_string() })
        }
        Command::Unpack { value, n } => {
            let v: BigUint = value
                .trim()
                .parse()
                .map_err(|_| Error::Input(format!("'{value}' is not a non-negative decimal integer")))?;
            let dist = unpack_coefficients(&v, *n)?;
            json!({ "n": n, "counts": dist.to_decimal_strings() })
        }
        Command::Sum { direct, a, b, .. } => {
            let (a, b) = (read_code(a)?, read_code(b)?);
            let s = if *direct {
                direct_sum(&a, &b)?
            } else {
                wreath_sum(&a, &b)?
            };
            json!({
                "kind": if *direct { "direct" } else { "wreath" },
                "code": code_json(&s),
                "counts": s.weight_distribution(Semantics::Multiset)?.to_decimal_strings(),
            })
        }
        Command::Compile { circuit } => {
            let c = read_circuit(circuit)?;
            serde_json::to_value(compile(&c)?).map_err(|e| Error::Internal(e.to_string()))?
        }
        Command::Amplitude {
            circuit,
            check_statevector,
            precision,
        } => {
            let c = read_circuit(circuit)?;
            let (value, half_power) = amplitude_exact(&c)?;
            let ball = value.to_complex_over_sqrt2_pow(half_power, *precision);
            let mut out = json!({
                "value": value.to_string(),
                "sqrt2_power": half_power,
                "exact": exact_text(&value, half_power),
                "amplitude": BallReport::from_ball(&ball),
            });
            if *check_statevector {
                let sv = statevector_amplitude(&c, *precision)?;
                let diff = ball.sub(&sv).modulus_upper_f64();
                let agree = diff < 1e-9;
                out["statevector"] = json!(BallReport::from_ball(&sv));
                out["difference_upper"] = json!(format!("{diff:e}"));
                out["agree"] = json!(agree);
                if !agree {
                    return Err(Failure::Disagreement(out));
                }
            }
            out
        }
        Command::Gap { circuit, via } => {
            let c = BoolCircuit::parse(&read_input(circuit)?)?;
            match via {
                Via::We => json!({ "via_we": gap_via_weight_enumerator(&c)?.to_string() }),
                Via::Brute => json!({ "brute": gap_bruteforce(&c)?.to_string() }),
                Via::Both => {
                    let brute = gap_bruteforce(&c)?;
                    let we = gap_via_weight_enumerator(&c)?;
                    let out = json!({
                        "brute": brute.to_string(),
                        "via_we": we.to_string(),
                        "agree": brute == we,
                    });
                    if brute != we {
                        return Err(Failure::Disagreement(out));
                    }
                    out
                }
            }
        }
        Command::RecoverCoeffs { code, oracle, r } => {
            let c = read_code(code)?;
            let (o, mut params) = oracle_for(&c, oracle)?;
            params.r = *r;
            let rec = recover_coefficients(c.length(), &o, &params)?;
            let expected = c.basis().weight_distribution(Semantics::Codeword)?;
            let correct = rec.distribution.counts() == expected.counts();
            let mut out = serde_json::to_value(&rec).map_err(|e| Error::Internal(e.to_string()))?;
            out["noise"] = json!(o.mode());
            out["expected"] = json!(expected.to_decimal_strings());
            out["correct"] = json!(correct);
            out
        }
        Command::RecoverOmega { code, oracle } => {
            let c = read_code(code)?;
            let (o, params) = oracle_for(&c, oracle)?;
            let o = o.omega_only();
            let rec = recover_value_at_omega(c.length(), c.rank(), &o, &params)?;
            let expected = c.basis().evaluate_at_omega()?;
            let mut out = serde_json::to_value(&rec).map_err(|e| Error::Internal(e.to_string()))?;
            out["noise"] = json!(o.mode());
            out["expected"] = json!(expected.to_string());
            out["correct"] = json!(rec.value == expected);
            out
        }
        Command::BenchEnum { k, n, seed } => {
            let mut rng = ChaCha20Rng::seed_from_u64(*seed);
            let rows: Vec<Vec<bool>> = (0..*k).map(|_| (0..*n).map(|_| rng.gen()).collect()).collect();
            let c = LinearCode::new(BitMatrix::from_bool_rows(&rows, *n)?)?;
            let start = Instant::now();
            let dist = c.weight_distribution(Semantics::Multiset)?;
            eprintln!(
                "enumerated 2^{k} combinations of a length-{n} code in {:.3}s",
                start.elapsed().as_secs_f64()
            );
            json!({
                "n": n,
                "k": k,
                "seed": seed,
                "total": dist.total().to_string(),
                "counts": dist.to_decimal_strings(),
            })
        }
    })
}

fn emit(v: &Value, pretty: bool) {
    let text = if pretty {
        serde_json::to_string_pretty(v)
    } else {
        serde_json::to_string(v)
    };
    println!("{}", text.expect("JSON values always serialize"));
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: cannot configure {t} worker threads: {e}");
            return ExitCode::from(3);
        }
    }
    match run(&cli.command) {
        Ok(v) => {
            emit(&v, cli.pretty);
            ExitCode::SUCCESS
        }
        Err(Failure::Disagreement(v)) => {
            emit(&v, cli.pretty);
            eprintln!("error: independent pipelines disagree");
            ExitCode::from(4)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
