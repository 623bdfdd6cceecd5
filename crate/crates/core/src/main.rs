use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use gpk3::bwb::{bott_cohomology, verify_appendix_a, BundleSpec, CohomologyAnswer};
use gpk3::ffield::{Matrix, PrimeField};
use gpk3::grassmann::{
    certify_smooth_gpk3, search_orthogonal_smooth, GPK3Instance, GrassmannError,
    SmoothnessCertificate,
};
use gpk3::groebner::ResourceBudget;
use gpk3::motivic::{class_grassmannian_25, class_section, count_and_compare, incidence_identity};
use gpk3::traces::{
    allowed_involution_traces, oracle_trace_type1, trace_dtau, trace_type1, trace_type2,
    InvolutionType, TracesError,
};
use gpk3::MatrixFF;

const EXIT_OK: u8 = 0;
const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(
    name = "gpk3",
    about = "Verification toolkit for threefolds cut out by two translated copies of Gr(2,5) in P^9"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    output: Format,
    /// Omit the timestamp and wall-clock fields for byte-identical reruns.
    #[arg(long, global = true)]
    no_timestamp: bool,
    /// Cap on concurrent worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Args)]
struct BudgetArgs {
    /// Maximum total degree before a Groebner run aborts.
    #[arg(long)]
    budget_degree: Option<u32>,
    /// Maximum S-pair reductions before a Groebner run aborts.
    #[arg(long)]
    budget_pairs: Option<u64>,
}

impl BudgetArgs {
    fn budget(&self) -> ResourceBudget {
        let mut b = ResourceBudget::default();
        if let Some(d) = self.budget_degree {
            b.max_degree = d;
        }
        if let Some(p) = self.budget_pairs {
            b.max_pair_reductions = p;
        }
        b
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Certify smoothness of the intersection defined by a matrix: the
    /// Jacobian singular locus must be empty in all 10 affine patches.
    Certify {
        #[arg(long, default_value_t = 103)]
        prime: u64,
        /// Matrix file: "rows cols" header, then row-major integers.
        #[arg(long)]
        matrix: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Sample Gram-Schmidt orthogonal matrices until one certifies smooth.
    Search {
        #[arg(long, default_value_t = 103)]
        prime: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        max_attempts: u64,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Cohomology of an equivariant bundle on Gr(r, V) by Borel-Weil-Bott.
    Bwb {
        #[arg(long, default_value_t = 5)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        r: usize,
        /// Comma-separated nonincreasing weight for the U-dual factor.
        #[arg(long, default_value = "0,0")]
        alpha: String,
        /// Comma-separated nonincreasing weight for the Q-dual factor.
        #[arg(long, default_value = "0,0,0")]
        beta: String,
        /// Extra twist by O(t).
        #[arg(long, default_value_t = 0)]
        twist: i64,
    },
    /// Re-verify the Appendix A cohomology tables and vanishing lemmas.
    Lemmas {
        /// Which claim group: a-tables, a-vanishing, or all.
        #[arg(long, default_value = "all")]
        which: String,
    },
    /// Involution traces on the 51-dimensional deformation space.
    Traces {
        /// Two upstairs types "p,q", e.g. --type1 4,1 3,2.
        #[arg(long, num_args = 2)]
        type1: Option<Vec<String>>,
        /// One downstairs type "p,q" with p + q = 10.
        #[arg(long)]
        type2: Option<String>,
        /// Trace of the duality involution.
        #[arg(long)]
        dtau: bool,
        /// Full table, the allowed-trace set, and the exclusion verdict.
        #[arg(long)]
        all: bool,
        /// Cross-check the type-I table against the exact-matrix oracle.
        #[arg(long)]
        oracle: bool,
    },
    /// Point counts of both intersection sides over a small prime field.
    Count {
        #[arg(long, default_value_t = 3)]
        prime: u64,
        #[arg(long, alias = "g")]
        matrix: PathBuf,
    },
    /// The symbolic ([X] - [Y]) L^4 = 0 derivation in Z[L].
    LClass {
        /// Print the full derivation for the standard setup.
        #[arg(long, default_value_t = true)]
        identity: bool,
    },
    /// Square roots modulo a prime p = 3 mod 4.
    Sqroot {
        #[arg(long, default_value_t = 103)]
        prime: u64,
        /// Value whose square root is requested.
        value: i64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .is_err()
        {
            eprintln!("error: could not configure {jobs} worker threads");
            return ExitCode::from(EXIT_INPUT);
        }
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Field(#[from] gpk3::ffield::FfieldError),
    #[error("{0}")]
    Budget(String),
    #[error(transparent)]
    Traces(#[from] TracesError),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Budget(_) => EXIT_BUDGET,
            _ => EXIT_INPUT,
        }
    }
}

fn emit(cli: &Cli, human: String, mut payload: serde_json::Value) {
    match cli.output {
        Format::Human => println!("{human}"),
        Format::Json => {
            if !cli.no_timestamp {
                let ts = SystemTime::now()
                    .duration_since(UNIX_EPOCH)
                    .map(|d| d.as_secs())
                    .unwrap_or(0);
                payload["timestamp"] = json!(ts);
            }
            println!("{}", serde_json::to_string_pretty(&payload).expect("serializable"));
        }
    }
}

fn load_matrix(prime: u64, path: &PathBuf) -> Result<(PrimeField, MatrixFF), CliError> {
    let field = PrimeField::new(prime)?;
    let text = fs::read_to_string(path)?;
    let m = Matrix::parse_text(field, &text)?;
    if m.rows() != 10 || m.cols() != 10 {
        return Err(CliError::Input(format!(
            "expected a 10x10 matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok((field, m))
}

fn certificate_json(cert: &SmoothnessCertificate, strip_millis: bool) -> serde_json::Value {
    let mut v = serde_json::to_value(cert).expect("serializable");
    if strip_millis {
        if let Some(patches) = v["patches"].as_array_mut() {
            for p in patches {
                p["millis"] = json!(0);
            }
        }
    }
    v
}

fn certificate_human(cert: &SmoothnessCertificate) -> String {
    let mut out = format!(
        "prime {}  matrix sha256 {}\n",
        cert.prime, cert.matrix_sha
    );
    for p in &cert.patches {
        out.push_str(&format!(
            "  patch x{}{}: {}  (pairs {}, max degree {}, {} ms)\n",
            p.pivot.0,
            p.pivot.1,
            match p.unit_ideal {
                Some(true) => "unit ideal (empty singular locus)",
                Some(false) => "NOT unit ideal",
                None => "inconclusive (budget exhausted)",
            },
            p.pairs,
            p.max_degree,
            p.millis
        ));
    }
    out.push_str(if cert.smooth {
        "verdict: smooth"
    } else if cert.inconclusive {
        "verdict: inconclusive"
    } else {
        "verdict: not smooth"
    });
    out
}

fn parse_type(s: &str, sum: u32) -> Result<InvolutionType, CliError> {
    let parts: Vec<&str> = s.split(',').collect();
    let [p, q] = parts.as_slice() else {
        return Err(CliError::Input(format!("type must be \"p,q\", got {s:?}")));
    };
    let p: u32 = p.trim().parse().map_err(|_| CliError::Input(format!("bad type {s:?}")))?;
    let q: u32 = q.trim().parse().map_err(|_| CliError::Input(format!("bad type {s:?}")))?;
    let t = if sum == 5 {
        InvolutionType::on_v(p, q)
    } else {
        InvolutionType::on_w(p, q)
    };
    t.map_err(|e| CliError::Input(e.to_string()))
}

fn parse_weight(s: &str) -> Result<Vec<i64>, CliError> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<i64>()
                .map_err(|_| CliError::Input(format!("bad weight entry {x:?}")))
        })
        .collect()
}

fn run(cli: &Cli) -> Result<u8, CliError> {
    match &cli.cmd {
        Cmd::Certify { prime, matrix, budget } => {
            let (field, m) = load_matrix(*prime, matrix)?;
            let inst = GPK3Instance::with_identity_g1(field, m);
            let cert = certify_smooth_gpk3(&inst, &budget.budget())
                .map_err(|e| CliError::Input(e.to_string()))?;
            emit(
                cli,
                certificate_human(&cert),
                certificate_json(&cert, cli.no_timestamp),
            );
            Ok(if cert.smooth {
                EXIT_OK
            } else if cert.inconclusive {
                EXIT_BUDGET
            } else {
                EXIT_CHECK_FAILED
            })
        }
        Cmd::Search { prime, seed, max_attempts, budget } => {
            let field = PrimeField::new(*prime)?;
            match search_orthogonal_smooth(field, *seed, *max_attempts, &budget.budget()) {
                Ok((t, cert, attempts)) => {
                    let human = format!(
                        "found smooth orthogonal matrix after {attempts} attempt(s)\n{}\n{}",
                        t.to_text(),
                        certificate_human(&cert)
                    );
                    let payload = json!({
                        "seed": seed,
                        "attempts": attempts,
                        "matrix": t.to_text(),
                        "certificate": certificate_json(&cert, cli.no_timestamp),
                    });
                    emit(cli, human, payload);
                    Ok(EXIT_OK)
                }
                Err(GrassmannError::SearchExhausted(n, fails)) => {
                    emit(
                        cli,
                        format!("no smooth matrix in {n} attempts; failures: {fails:?}"),
                        json!({"seed": seed, "attempts": n, "failures": fails}),
                    );
                    Ok(EXIT_CHECK_FAILED)
                }
                Err(GrassmannError::Budget(b)) => Err(CliError::Budget(b.to_string())),
                Err(e) => Err(CliError::Input(e.to_string())),
            }
        }
        Cmd::Bwb { n, r, alpha, beta, twist } => {
            let alpha = parse_weight(alpha)?;
            let beta = parse_weight(beta)?;
            let spec = BundleSpec::new(*n, *r, alpha, beta)
                .map_err(|e| CliError::Input(e.to_string()))?
                .twist(*twist);
            let ans = bott_cohomology(&spec).map_err(|e| CliError::Input(e.to_string()))?;
            let (human, payload) = match &ans {
                CohomologyAnswer::Zero => ("RGamma = 0".to_string(), json!({"zero": true})),
                CohomologyAnswer::NonZero { degree, weight, dim } => (
                    format!("degree {degree}: Sigma^{weight:?} V-dual, dimension {dim}"),
                    json!({"zero": false, "degree": degree, "weight": weight, "dim": dim}),
                ),
            };
            emit(cli, human, payload);
            Ok(EXIT_OK)
        }
        Cmd::Lemmas { which } => {
            let report = verify_appendix_a();
            let filter = |name: &str| match which.as_str() {
                "a-tables" | "A-tables" => name.starts_with("table"),
                "a-vanishing" | "A-vanishing" => !name.starts_with("table"),
                _ => true,
            };
            let selected: Vec<_> =
                report.claims.iter().filter(|c| filter(&c.name)).collect();
            if selected.is_empty() {
                return Err(CliError::Input(format!(
                    "unknown claim group {which:?}; use a-tables, a-vanishing, or all"
                )));
            }
            let pass = selected.iter().all(|c| c.pass);
            let mut human = String::from("Appendix A cohomology claims:\n");
            for c in &selected {
                human.push_str(&format!(
                    "  [{}] {}\n",
                    if c.pass { "ok" } else { "FAIL" },
                    c.name
                ));
            }
            human.push_str(if pass { "all claims verified" } else { "FAILURES present" });
            let payload = json!({
                "which": which,
                "claims": selected.iter().map(|c| json!({"name": c.name, "pass": c.pass})).collect::<Vec<_>>(),
                "all_pass": pass,
            });
            emit(cli, human, payload);
            Ok(if pass { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
        Cmd::Traces { type1, type2, dtau, all, oracle } => {
            let mut human = String::new();
            let mut payload = json!({});
            let mut pass = true;
            if let Some(pair) = type1 {
                let a = parse_type(&pair[0], 5)?;
                let b = parse_type(&pair[1], 5)?;
                let r = trace_type1(a, b)?;
                human.push_str(&format!(
                    "type I {{{},{}}} x {{{},{}}}: mult1 {}, trace {}\n",
                    a.p, a.q, b.p, b.q, r.mult1, r.trace
                ));
                payload["type1"] = serde_json::to_value(&r).expect("serializable");
            }
            if let Some(t) = type2 {
                let t = parse_type(t, 10)?;
                let r = trace_type2(t)?;
                human.push_str(&format!(
                    "type II {{{},{}}}: mult1 {}, trace {}\n",
                    t.p, t.q, r.mult1, r.trace
                ));
                payload["type2"] = serde_json::to_value(&r).expect("serializable");
            }
            if *dtau || *all {
                human.push_str(&format!(
                    "Section 6 lemma: trace of the duality involution = {}\n",
                    trace_dtau()
                ));
                payload["dtau"] = json!(trace_dtau());
            }
            if *all {
                let set: Vec<i64> = allowed_involution_traces().into_iter().collect();
                human.push_str("Section 4 proposition: allowed involution traces on the 51-dimensional space\n");
                for (a, b, label) in [
                    ((4, 1), (4, 1), "type I {4,1} x {4,1}"),
                    ((3, 2), (3, 2), "type I {3,2} x {3,2}"),
                    ((4, 1), (3, 2), "type I mixed"),
                ] {
                    let r = trace_type1(
                        InvolutionType::on_v(a.0, a.1).expect("valid"),
                        InvolutionType::on_v(b.0, b.1).expect("valid"),
                    )?;
                    human.push_str(&format!("  {label}: mult1 {}, trace {}\n", r.mult1, r.trace));
                }
                for p in 5..=8u32 {
                    let r = trace_type2(InvolutionType::on_w(p, 10 - p).expect("valid"))?;
                    human.push_str(&format!(
                        "  type II {{{},{}}}: trace {}\n",
                        p,
                        10 - p,
                        r.trace
                    ));
                }
                human.push_str("  type II {9,1}: impossible (negative multiplicity)\n");
                human.push_str(&format!("allowed trace set: {set:?}\n"));
                let excluded = !allowed_involution_traces().contains(&trace_dtau());
                pass &= excluded;
                human.push_str(&format!(
                    "verdict: trace {} of the duality involution is {} the allowed set\n",
                    trace_dtau(),
                    if excluded { "outside" } else { "INSIDE" }
                ));
                payload["allowed_traces"] = json!(set);
                payload["dtau_excluded"] = json!(excluded);
            }
            if *oracle {
                let cases: [([i64; 5], [i64; 5]); 3] = [
                    ([1, 1, 1, 1, -1], [1, 1, 1, 1, -1]),
                    ([1, 1, 1, -1, -1], [1, 1, 1, -1, -1]),
                    ([1, 1, 1, 1, -1], [1, 1, 1, -1, -1]),
                ];
                let mut oracle_rows = Vec::new();
                for (a0, b0) in cases {
                    let got = oracle_trace_type1(&a0, &b0, 1)?;
                    human.push_str(&format!("oracle {a0:?} x {b0:?}: trace {got}\n"));
                    oracle_rows.push(json!({"a0": a0, "b0": b0, "trace": got.to_string()}));
                }
                payload["oracle"] = json!(oracle_rows);
            }
            if human.is_empty() {
                return Err(CliError::Input(
                    "choose at least one of --type1, --type2, --dtau, --all, --oracle".into(),
                ));
            }
            emit(cli, human.trim_end().to_string(), payload);
            Ok(if pass { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
        Cmd::Count { prime, matrix } => {
            let (field, g) = load_matrix(*prime, matrix)?;
            if g.inverse().is_err() {
                return Err(CliError::Input("matrix is singular".into()));
            }
            let report = count_and_compare(field, &g).map_err(|e| CliError::Input(e.to_string()))?;
            let human = format!(
                "q = {}: n_X = {}, n_Y = {}, n_Gr = {}{}\nverdict: {}",
                report.prime,
                report.n_x,
                report.n_y,
                report.n_gr,
                report
                    .n_q
                    .map(|n| format!(", incidence pairs n_Q = {n}"))
                    .unwrap_or_default(),
                if report.verified() { "counts balance" } else { "MISMATCH" }
            );
            let ok = report.verified();
            emit(cli, human, serde_json::to_value(&report).expect("serializable"));
            Ok(if ok { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
        Cmd::LClass { identity: _ } => {
            let (p1, p2, l4) = incidence_identity().map_err(|e| CliError::Input(e.to_string()))?;
            let s2 = class_section(2).expect("valid");
            let s4 = class_section(4).expect("valid");
            let gr = class_grassmannian_25();
            let human = format!(
                "Section 7 identity over Z[L]:\n\
                 [Gr]      = {gr}\n\
                 S2 (rank-2 section) = {s2}\n\
                 S4 (rank-4 section) = {s4}\n\
                 S2 - S4   = {}\n\
                 via p1: [Q] = [X]*S2 + ([Gr]-[X])*S4 = [X]*L^4 + [Gr]*S4\n\
                 via p2: [Q] = [Y]*S2 + ([Gr]-[Y])*S4 = [Y]*L^4 + [Gr]*S4\n\
                 difference: ([X] - [Y]) * L^4 = 0",
                s2.sub(&s4)
            );
            let payload = json!({
                "grassmannian": format!("{gr}"),
                "s2": format!("{s2}"),
                "s4": format!("{s4}"),
                "l4": format!("{l4}"),
                "p1_constant": format!("{}", p1.constant),
                "p2_constant": format!("{}", p2.constant),
            });
            emit(cli, human, payload);
            Ok(EXIT_OK)
        }
        Cmd::Sqroot { prime, value } => {
            let field = PrimeField::new(*prime)?;
            let v = field.elem(*value);
            if !field.is_square(v) {
                emit(
                    cli,
                    format!("{value} is not a nonzero square mod {prime}"),
                    json!({"prime": prime, "value": value, "square": false}),
                );
                return Ok(EXIT_CHECK_FAILED);
            }
            let r = field.sqrt_3mod4(v)?;
            emit(
                cli,
                format!("sqrt({value}) mod {prime} = {r} (also {})", prime - r),
                json!({"prime": prime, "value": value, "square": true, "root": r}),
            );
            Ok(EXIT_OK)
        }
    }
}
