use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::Rng as _;
use serde::{Deserialize, Serialize};
use serde_json::json;

use packset::bounds::{self, BoundsReport};
use packset::codec::{self, DecodeOutcome, RestrictedCode, SyndromeTable, TranscriptLine};
use packset::constructions::{self, CyclotomicParams, SufficientVerdict};
use packset::packing::{self, enumerate_error_vectors};
use packset::{
    enum_cap_from_env, rng, CandidateOrder, Elem, Error, ErrorAlphabet, ErrorVector, FieldCtx,
    PackingConfig, PackingSet, Status, Verdict,
};

const EXIT_OK: u8 = 0;
const EXIT_ERROR: u8 = 1;
const EXIT_UNVERIFIED: u8 = 2;
const EXIT_REFUTED: u8 = 3;
const EXIT_INCONCLUSIVE: u8 = 4;
const EXIT_DECODE_FAILURE: u8 = 5;

#[derive(Parser, Debug)]
#[command(
    name = "packset",
    version,
    about = "Packing sets and restricted-error-correcting codes"
)]
struct Cli {
    /// Write a run manifest (arguments, outcome, timing) to this file.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a packing set from one of the explicit constructions.
    Construct {
        #[command(subcommand)]
        kind: ConstructKind,
    },
    /// Check a packing-set file.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = VerifyMode::Exhaustive)]
        mode: VerifyMode,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Upper and lower size bounds for the given parameters.
    Bounds {
        #[arg(long)]
        q: u64,
        /// Alphabet size; implied by --alphabet when that is given.
        #[arg(long = "A")]
        a: Option<u64>,
        #[arg(long)]
        t: u32,
        /// JSON file with {"field":..,"A":[..]} or a list such as 1,5.
        #[arg(long)]
        alphabet: Option<String>,
        /// Print JSON instead of the table.
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Encode, corrupt and decode random messages with a certified set.
    Codec {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        /// Try every message with every in-model error; `--trials` is ignored.
        #[arg(long)]
        exhaustive: bool,
        /// Also inject errors with values outside the alphabet.
        #[arg(long)]
        lambda_violation: bool,
        /// JSON-lines transcript destination.
        #[arg(long)]
        transcript: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Greedily grow a maximal packing set in F_q.
    Maximal {
        #[arg(long)]
        q: u64,
        /// Alphabet as a list, e.g. {1,2} or 1,2.
        #[arg(long = "A", conflicts_with = "lambda")]
        a: Option<String>,
        /// Alphabet {1..lambda}.
        #[arg(long)]
        lambda: Option<u64>,
        #[arg(long)]
        t: u32,
        #[arg(long, value_enum, default_value_t = Order::Asc)]
        order: Order,
        #[arg(long)]
        seed: Option<u64>,
        /// Starting elements.
        #[arg(long)]
        start: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-run the command recorded in a manifest.
    Replay {
        #[arg(long = "from")]
        from: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum ConstructKind {
    /// Powers of lambda+1 modulo p.
    Powers {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        lambda: u64,
        #[arg(long)]
        t: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Power basis of F_{p^k} over F_p.
    Basis {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Quadratic residues modulo p, p = 3, 5 (mod 8).
    Qr {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Randomized roots-of-unity construction.
    Cyclotomic {
        #[arg(long = "K")]
        k_scale: u64,
        #[arg(long = "Q")]
        q_scale: u64,
        #[arg(long)]
        lambda: u64,
        #[arg(long)]
        t: u32,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum VerifyMode {
    Exhaustive,
    Sufficient,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Order {
    Asc,
    Shuffle,
}

#[derive(Serialize, Deserialize, Debug)]
struct RunManifest {
    subcommand: String,
    args: Vec<String>,
    seed: Option<u64>,
    version: String,
    exit_code: u8,
    outcome: String,
    duration_ms: u128,
}

struct Outcome {
    code: u8,
    summary: String,
}

impl Outcome {
    fn new(code: u8, summary: impl Into<String>) -> Self {
        Outcome {
            code,
            summary: summary.into(),
        }
    }
}

type CliResult = Result<Outcome, Error>;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    let started = Instant::now();
    let outcome = run(&cli.command).unwrap_or_else(|e| {
        eprintln!("error: {e}");
        Outcome::new(EXIT_ERROR, e.to_string())
    });
    if let Some(path) = &cli.manifest {
        let manifest = RunManifest {
            subcommand: subcommand_name(&cli.command).to_string(),
            args: strip_manifest_flag(&argv[1..]),
            seed: command_seed(&cli.command),
            version: env!("CARGO_PKG_VERSION").to_string(),
            exit_code: outcome.code,
            outcome: outcome.summary.clone(),
            duration_ms: started.elapsed().as_millis(),
        };
        if let Err(e) = write_json(Some(path), &manifest) {
            eprintln!("error: cannot write manifest: {e}");
            return ExitCode::from(EXIT_ERROR);
        }
    }
    ExitCode::from(outcome.code)
}

fn strip_manifest_flag(args: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut skip = false;
    for a in args {
        if skip {
            skip = false;
        } else if a == "--manifest" {
            skip = true;
        } else if !a.starts_with("--manifest=") {
            out.push(a.clone());
        }
    }
    out
}

fn subcommand_name(c: &Command) -> &'static str {
    match c {
        Command::Construct { kind } => match kind {
            ConstructKind::Powers { .. } => "construct powers",
            ConstructKind::Basis { .. } => "construct basis",
            ConstructKind::Qr { .. } => "construct qr",
            ConstructKind::Cyclotomic { .. } => "construct cyclotomic",
        },
        Command::Verify { .. } => "verify",
        Command::Bounds { .. } => "bounds",
        Command::Codec { .. } => "codec",
        Command::Maximal { .. } => "maximal",
        Command::Replay { .. } => "replay",
    }
}

fn command_seed(c: &Command) -> Option<u64> {
    match c {
        Command::Construct {
            kind: ConstructKind::Basis { seed, .. },
        }
        | Command::Construct {
            kind: ConstructKind::Cyclotomic { seed, .. },
        }
        | Command::Codec { seed, .. } => Some(*seed),
        Command::Maximal { seed, .. } => *seed,
        _ => None,
    }
}

fn run(command: &Command) -> CliResult {
    let cap = enum_cap_from_env();
    match command {
        Command::Construct { kind } => construct(kind, cap),
        Command::Verify { input, mode, out } => verify(input, *mode, out.as_deref(), cap),
        Command::Bounds {
            q,
            a,
            t,
            alphabet,
            json,
            out,
        } => bounds_cmd(*q, *a, *t, alphabet.as_deref(), *json, out.as_deref()),
        Command::Codec {
            input,
            trials,
            seed,
            exhaustive,
            lambda_violation,
            transcript,
            out,
        } => codec_cmd(
            input,
            *trials,
            *seed,
            *exhaustive,
            *lambda_violation,
            transcript.as_deref(),
            out.as_deref(),
            cap,
        ),
        Command::Maximal {
            q,
            a,
            lambda,
            t,
            order,
            seed,
            start,
            out,
        } => maximal_cmd(
            *q,
            a.as_deref(),
            *lambda,
            *t,
            *order,
            *seed,
            start.as_deref(),
            out.as_deref(),
            cap,
        ),
        Command::Replay { from } => replay(from),
    }
}

fn write_json<T: Serialize>(out: Option<&Path>, value: &T) -> Result<(), Error> {
    let mut text =
        serde_json::to_string_pretty(value).map_err(|e| Error::Malformed(e.to_string()))?;
    text.push('\n');
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, Error> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))
}

fn status_exit(status: &Status) -> u8 {
    match status {
        Status::VerifiedExhaustive | Status::VerifiedSufficient => EXIT_OK,
        Status::Unverified => EXIT_UNVERIFIED,
        Status::Refuted(_) => EXIT_REFUTED,
    }
}

fn construct(kind: &ConstructKind, cap: u64) -> CliResult {
    let (ps, out) = match kind {
        ConstructKind::Powers { p, lambda, t, out } => (
            constructions::powers_packing_set(*p, *lambda, *t, cap)?,
            out,
        ),
        ConstructKind::Basis { p, k, seed, out } => {
            (constructions::basis_packing_set(*p, *k, *seed, cap)?, out)
        }
        ConstructKind::Qr { p, out } => {
            (constructions::quadratic_residue_packing_set(*p, cap)?, out)
        }
        ConstructKind::Cyclotomic {
            k_scale,
            q_scale,
            lambda,
            t,
            seed,
            out,
        } => {
            let run = constructions::cyclotomic_construct(
                CyclotomicParams {
                    k_scale: *k_scale,
                    q_scale: *q_scale,
                    lambda: *lambda,
                    t: *t,
                    seed: *seed,
                },
                cap,
            )?;
            write_json(out.as_deref(), &run)?;
            let status = run.packing.status();
            return Ok(Outcome::new(
                status_exit(status),
                format!("p = {}, ell = {}, {}", run.p, run.ell, status.name()),
            ));
        }
    };
    write_json(out.as_deref(), &ps)?;
    Ok(Outcome::new(
        status_exit(ps.status()),
        format!("|B| = {}, {}", ps.len(), ps.status().name()),
    ))
}

fn verify(input: &Path, mode: VerifyMode, out: Option<&Path>, cap: u64) -> CliResult {
    let ps: PackingSet = read_json(input)?;
    let f = ps.field();
    match mode {
        VerifyMode::Exhaustive => match packing::verify_packing_with_cap(&ps, cap) {
            Ok(Verdict::VerifiedExhaustive) => {
                write_json(
                    out,
                    &json!({"mode": "exhaustive", "verdict": "VerifiedExhaustive", "M": ps.error_count()}),
                )?;
                println_summary(out, "VerifiedExhaustive");
                Ok(Outcome::new(EXIT_OK, "VerifiedExhaustive"))
            }
            Ok(Verdict::Refuted(w)) => {
                write_json(
                    out,
                    &json!({
                        "mode": "exhaustive",
                        "verdict": "Refuted",
                        "witness": {"first": w.first.to_wire(f), "second": w.second.to_wire(f)},
                        "syndrome": f.to_repr(ps.syndrome(&w.first)?.0),
                    }),
                )?;
                println_summary(out, "Refuted");
                Ok(Outcome::new(EXIT_REFUTED, "Refuted"))
            }
            Err(Error::EnumerationTooLarge { count, cap }) => {
                write_json(
                    out,
                    &json!({"mode": "exhaustive", "verdict": "EnumerationTooLarge", "count": count, "cap": cap}),
                )?;
                println_summary(out, "EnumerationTooLarge");
                Ok(Outcome::new(EXIT_UNVERIFIED, "EnumerationTooLarge"))
            }
            Err(e) => Err(e),
        },
        VerifyMode::Sufficient => {
            let lambda = ps.alphabet().lambda().ok_or_else(|| {
                Error::InvalidParameter(
                    "sufficient mode needs an alphabet {1..lambda} over a prime field".into(),
                )
            })?;
            let verdict = constructions::sufficient_check(f, ps.elements(), lambda, ps.t(), cap);
            let (code, name) = match &verdict {
                SufficientVerdict::VerifiedSufficient => (EXIT_OK, "VerifiedSufficient"),
                SufficientVerdict::SufficientCheckFailed { .. } => {
                    (EXIT_INCONCLUSIVE, "SufficientCheckFailed")
                }
                SufficientVerdict::TooLarge { .. } => (EXIT_UNVERIFIED, "TooLarge"),
            };
            let mut v =
                serde_json::to_value(&verdict).map_err(|e| Error::Malformed(e.to_string()))?;
            v["mode"] = json!("sufficient");
            write_json(out, &v)?;
            println_summary(out, name);
            Ok(Outcome::new(code, name))
        }
    }
}

fn println_summary(out: Option<&Path>, s: &str) {
    if out.is_some() {
        println!("{s}");
    }
}

fn parse_list(s: &str) -> Result<Vec<u64>, Error> {
    let inner = s.trim().trim_start_matches('{').trim_end_matches('}');
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|x| {
            x.trim()
                .parse::<u64>()
                .map_err(|e| Error::Malformed(format!("{x:?}: {e}")))
        })
        .collect()
}

#[derive(Deserialize)]
struct AlphabetFile {
    field: FieldCtx,
    #[serde(rename = "A")]
    a: Vec<packset::ElemRepr>,
}

fn load_alphabet(source: &str, q: u64) -> Result<(FieldCtx, ErrorAlphabet), Error> {
    if Path::new(source).is_file() {
        let file: AlphabetFile = read_json(Path::new(source))?;
        let elems = file
            .a
            .iter()
            .map(|r| file.field.from_repr(r))
            .collect::<Result<Vec<_>, _>>()?;
        if file.field.q() != q {
            return Err(Error::InvalidParameter(format!(
                "alphabet file is over F_{}, not F_{q}",
                file.field.q()
            )));
        }
        let alphabet = ErrorAlphabet::new(&file.field, elems)?;
        return Ok((file.field, alphabet));
    }
    let field = FieldCtx::prime(q)?;
    let alphabet = ErrorAlphabet::from_values(&field, &parse_list(source)?)?;
    Ok((field, alphabet))
}

fn bounds_cmd(
    q: u64,
    a: Option<u64>,
    t: u32,
    alphabet: Option<&str>,
    json_out: bool,
    out: Option<&Path>,
) -> CliResult {
    let report = match (alphabet, a) {
        (Some(source), _) => {
            let (field, alphabet) = load_alphabet(source, q)?;
            BoundsReport::for_alphabet(&field, &alphabet, t)?
        }
        (None, Some(a)) => BoundsReport::new(q, a, t)?,
        (None, None) => return Err(Error::InvalidParameter("give --A or --alphabet".into())),
    };
    if out.is_some() {
        write_json(out, &report)?;
    }
    if json_out {
        write_json(None, &report)?;
    } else {
        print!("{report}");
    }
    Ok(Outcome::new(
        EXIT_OK,
        format!("upper_exact = {}", report.upper_exact),
    ))
}

#[derive(Serialize)]
struct CodecStats {
    length: usize,
    dimension: usize,
    rate: f64,
    table_size: usize,
    trials: u64,
    in_model_cases: u64,
    in_model_decoded: u64,
    success_rate: f64,
    out_of_model_cases: u64,
    out_of_model_misdecoded: u64,
}

#[allow(clippy::too_many_arguments)]
fn codec_cmd(
    input: &Path,
    trials: u64,
    seed: u64,
    exhaustive: bool,
    lambda_violation: bool,
    transcript: Option<&Path>,
    out: Option<&Path>,
    cap: u64,
) -> CliResult {
    let ps: PackingSet = read_json(input)?;
    let code = RestrictedCode::new(ps)?;
    let table = SyndromeTable::build(&code, code.packing().t(), cap)?;
    let f = code.field().clone();
    let alphabet = code.packing().alphabet().clone();
    let t = code.packing().t();
    let outside: Vec<Elem> = f
        .elements()
        .skip(1)
        .filter(|e| !alphabet.contains(*e))
        .collect();

    let mut msg_rng = rng::stream(seed, 0);
    let mut err_rng = rng::stream(seed, 1);
    let mut lines: Vec<TranscriptLine> = Vec::new();
    let mut stats = CodecStats {
        length: code.len(),
        dimension: code.dimension(),
        rate: code.rate(),
        table_size: table.len(),
        trials,
        in_model_cases: 0,
        in_model_decoded: 0,
        success_rate: 1.0,
        out_of_model_cases: 0,
        out_of_model_misdecoded: 0,
    };
    let all_errors: Vec<ErrorVector> = if exhaustive {
        enumerate_error_vectors(code.len(), &alphabet, t).collect()
    } else {
        Vec::new()
    };

    let mut attempt = |message: &[Elem],
                       codeword: &[Elem],
                       error: &ErrorVector,
                       in_model: bool|
     -> Result<(), Error> {
        let received = codec::add_error(&f, codeword, error);
        let ok = match codec::decode(&code, &table, &received)? {
            DecodeOutcome::Corrected {
                message: m,
                error: e,
            } => m == message && &e == error,
            DecodeOutcome::Uncorrectable { .. } => false,
        };
        if in_model {
            stats.in_model_cases += 1;
            stats.in_model_decoded += ok as u64;
        } else {
            stats.out_of_model_cases += 1;
            stats.out_of_model_misdecoded += !ok as u64;
        }
        lines.push(TranscriptLine::new(
            &f, message, codeword, error, &received, ok,
        ));
        Ok(())
    };

    let messages: Vec<Vec<Elem>> = if exhaustive {
        all_messages(&f, code.dimension(), cap)?
    } else {
        (0..trials)
            .map(|_| {
                (0..code.dimension())
                    .map(|_| f.elem(msg_rng.gen_range(0..f.q())))
                    .collect()
            })
            .collect::<Result<_, _>>()?
    };
    stats.trials = messages.len() as u64;
    for message in messages {
        let codeword = code.encode(&message)?;
        if exhaustive {
            for e in &all_errors {
                attempt(&message, &codeword, e, true)?;
            }
        } else {
            let (_, e) = codec::inject_error(&f, &codeword, &alphabet, t, &mut err_rng);
            attempt(&message, &codeword, &e, true)?;
        }
        if lambda_violation && !outside.is_empty() {
            let w = err_rng.gen_range(1..=(t as usize).min(code.len()));
            let mut support = rand::seq::index::sample(&mut err_rng, code.len(), w).into_vec();
            support.sort_unstable();
            let entries: Vec<(usize, Elem)> = support
                .into_iter()
                .map(|i| (i, outside[err_rng.gen_range(0..outside.len())]))
                .collect();
            attempt(&message, &codeword, &ErrorVector::new(entries)?, false)?;
        }
    }
    if stats.in_model_cases > 0 {
        stats.success_rate = stats.in_model_decoded as f64 / stats.in_model_cases as f64;
    }
    if let Some(path) = transcript {
        let mut file = fs::File::create(path)
            .map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))?;
        for line in &lines {
            let s = serde_json::to_string(line).map_err(|e| Error::Malformed(e.to_string()))?;
            writeln!(file, "{s}").map_err(|e| Error::Malformed(e.to_string()))?;
        }
    }
    write_json(out, &stats)?;
    let code_out = if stats.in_model_decoded == stats.in_model_cases {
        EXIT_OK
    } else {
        EXIT_DECODE_FAILURE
    };
    Ok(Outcome::new(
        code_out,
        format!("success rate {}", stats.success_rate),
    ))
}

/// Every word of length `dim` over the field, in lexicographic order.
fn all_messages(f: &FieldCtx, dim: usize, cap: u64) -> Result<Vec<Vec<Elem>>, Error> {
    let count = (f.q() as u128).checked_pow(dim as u32).unwrap_or(u128::MAX);
    if count > cap as u128 {
        return Err(Error::EnumerationTooLarge { count, cap });
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut digits = vec![0u64; dim];
    loop {
        out.push(
            digits
                .iter()
                .map(|&d| f.elem(d))
                .collect::<Result<Vec<_>, _>>()?,
        );
        let Some(i) = digits.iter().rposition(|&d| d + 1 < f.q()) else {
            break;
        };
        digits[i] += 1;
        digits[i + 1..].iter_mut().for_each(|d| *d = 0);
    }
    Ok(out)
}

#[derive(Serialize)]
struct MaximalReport {
    size: u64,
    maximal_lower_bound_holds: bool,
    #[serde(rename = "min_B_maximal")]
    min_b_maximal: u64,
    #[serde(rename = "max_B_upper")]
    max_b_upper: u64,
    lower_closed: f64,
    packing: PackingSet,
}

#[allow(clippy::too_many_arguments)]
fn maximal_cmd(
    q: u64,
    a: Option<&str>,
    lambda: Option<u64>,
    t: u32,
    order: Order,
    seed: Option<u64>,
    start: Option<&str>,
    out: Option<&Path>,
    cap: u64,
) -> CliResult {
    let field = FieldCtx::prime(q)?;
    let alphabet = match (a, lambda) {
        (Some(list), None) => ErrorAlphabet::from_values(&field, &parse_list(list)?)?,
        (None, Some(l)) => ErrorAlphabet::limited_magnitude(&field, l)?,
        _ => {
            return Err(Error::InvalidParameter(
                "give exactly one of --A or --lambda".into(),
            ))
        }
    };
    let order = match (order, seed) {
        (Order::Asc, _) => CandidateOrder::Ascending,
        (Order::Shuffle, Some(s)) => CandidateOrder::SeededShuffle(s),
        (Order::Shuffle, None) => {
            return Err(Error::InvalidParameter(
                "--order shuffle requires --seed".into(),
            ))
        }
    };
    let start_elems = start
        .map(parse_list)
        .transpose()?
        .unwrap_or_default()
        .into_iter()
        .map(|v| field.elem(v))
        .collect::<Result<Vec<_>, _>>()?;
    let initial = PackingSet::new(
        field.clone(),
        start_elems,
        alphabet.clone(),
        PackingConfig::new(t)?,
    )?;
    let result = packing::extend_to_maximal_with_cap(&initial, order, cap)?;
    let (b, na) = (result.len() as u64, alphabet.len() as u64);
    let holds = bounds::maximal_lower_bound_holds(b, na, t, q);
    let report = MaximalReport {
        size: b,
        maximal_lower_bound_holds: holds,
        min_b_maximal: bounds::min_b_maximal(na, t, q)?,
        max_b_upper: bounds::max_b_upper(na, t, q)?,
        lower_closed: bounds::lower_closed(na, t, q),
        packing: result,
    };
    write_json(out, &report)?;
    println_summary(out, &format!("size {b}, lower bound holds: {holds}"));
    Ok(Outcome::new(EXIT_OK, format!("size {b}")))
}

fn replay(from: &Path) -> CliResult {
    let manifest: RunManifest = read_json(from)?;
    let argv = std::iter::once("packset".to_string()).chain(manifest.args.iter().cloned());
    let cli = Cli::try_parse_from(argv).map_err(|e| Error::Malformed(e.to_string()))?;
    if matches!(cli.command, Command::Replay { .. }) {
        return Err(Error::InvalidParameter(
            "a manifest cannot replay another replay".into(),
        ));
    }
    run(&cli.command)
}
