//! `univoque`: command-line front end for unique-expansion sets.

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use univoque::enumerate::{
    bracket_distance, enum_prefixes, remark4_candidate, symbolic_hausdorff, EnumResult, SetKind,
};
use univoque::error::Error;
use univoque::expansions::{
    classify_base, greedy_beta, in_uq_prime, in_vq_prime, is_unique_expansion, kl_constant,
    quasi_greedy_alpha, AlphaExpansion, MembershipVerdict, Status, Verdict, DEFAULT_DEPTH,
};
use univoque::metric::{
    alpha_depth_for, approx_set_points_with, continuity_probe, discontinuity_gap,
    hausdorff_enclosure, hausdorff_real, ProbeConfig, ProbeVerdict, Side, REPORT_BITS,
};
use univoque::numerics::{eval_value, parse_rational, BaseValue, XReal};
use univoque::trie::{PrefixTrie, TrieHeader};
use univoque::words::{parse_sequence, Alphabet, PeriodicSeq, Seq};

const GOLDEN: &str = "poly:-1,-1,1@3/2,2";
const TRIBONACCI: &str = "poly:-1,-1,-1,1@9/5,19/10";

#[derive(Parser, Debug)]
#[command(
    name = "univoque",
    version,
    about = "Unique expansions in non-integer bases"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Largest digit of the alphabet {0, ..., M}.
    #[arg(long = "M", global = true, default_value_t = 1)]
    m: u8,

    /// Base: rational:p/q, decimal:1.9, poly:c0,...,cn@lo,hi, golden, tribonacci or kl.
    #[arg(long, global = true)]
    base: Option<String>,

    /// Prefix depth (or digit count for expansions and membership tests).
    #[arg(long, global = true)]
    n: Option<usize>,

    /// Digits of α(q) used for certification and enumeration.
    #[arg(long, global = true)]
    alpha_depth: Option<usize>,

    /// Width 2^-bits of the bracket around the constant `kl`.
    #[arg(long, global = true, default_value_t = 160)]
    precision_bits: u32,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[arg(long, global = true, value_enum, default_value_t = SideArg::Left)]
    side: SideArg,

    /// Number of approach steps for continuity probes.
    #[arg(long, global = true, default_value_t = 12)]
    steps: u32,

    #[arg(long, global = true, value_enum, default_value_t = KindArg::U)]
    kind: KindArg,

    /// Exit with status 4 when the answer is undecided.
    #[arg(long, global = true)]
    require_certified: bool,

    /// Worker threads; 0 uses the available parallelism.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Quasi-greedy expansion of 1.
    Alpha,
    /// Greedy expansion of 1.
    Beta,
    /// Position of the base in U ⊂ closure(U) ⊂ V.
    Classify,
    /// Whether a number has a unique expansion.
    Unique {
        /// A rational `p/q` or `seq:<sequence>` for the value of a digit sequence.
        #[arg(long)]
        x: String,
    },
    /// Membership of a sequence in U_q' or V_q'.
    Member {
        #[arg(long)]
        seq: String,
    },
    /// Length-n prefixes of U_q' or V_q'.
    Enumerate,
    /// Symbolic Hausdorff distance between two prefix families.
    DhSym {
        /// Second base (defaults to --base).
        #[arg(long)]
        other: Option<String>,
        #[arg(long, value_enum, default_value_t = KindArg::V)]
        other_kind: KindArg,
    },
    /// Real Hausdorff distance between two value sets.
    DhReal {
        #[arg(long)]
        other: Option<String>,
        #[arg(long, value_enum, default_value_t = KindArg::V)]
        other_kind: KindArg,
    },
    /// One-sided continuity probe of q -> U_q', V_q'.
    Continuity,
    /// Symbolic distance between U_q' and V_q'.
    Gap,
    /// Rational bracket of the smallest base in which 1 has a unique expansion.
    Kl,
    /// The candidate sequence built from α at a pivot m.
    Remark4 {
        /// The sequence α (default 1(10)).
        #[arg(long, default_value = "1(10)")]
        seq: String,
        #[arg(long = "m", id = "pivot")]
        pivot: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SideArg {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    #[value(name = "U", alias = "u")]
    U,
    #[value(name = "V", alias = "v")]
    V,
}

impl From<KindArg> for SetKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::U => SetKind::U,
            KindArg::V => SetKind::V,
        }
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{flag}: {source}")]
    Flag { flag: &'static str, source: Error },
    #[error("{flag}: {msg}")]
    Invalid { flag: &'static str, msg: String },
    #[error(transparent)]
    Core(#[from] Error),
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::PrecisionExhausted(_))
            | CliError::Flag {
                source: Error::PrecisionExhausted(_),
                ..
            } => 3,
            CliError::Core(Error::TooManyStates(_)) | CliError::Csv(_) => 1,
            _ => 2,
        }
    }
}

/// Attributes a library error to the flag whose value caused it.
fn flag(flag: &'static str) -> impl FnOnce(Error) -> CliError {
    move |source| CliError::Flag { flag, source }
}

/// A command result in all three output formats.
struct Output {
    text: String,
    json: Value,
    csv: Vec<Vec<String>>,
    /// The answer is undecided.
    unknown: bool,
}

impl Output {
    fn render(&self, format: Format) -> Result<String, CliError> {
        Ok(match format {
            Format::Text => {
                let mut s = self.text.clone();
                if !s.ends_with('\n') {
                    s.push('\n');
                }
                s
            }
            Format::Json => format!(
                "{}\n",
                serde_json::to_string_pretty(&self.json).expect("json")
            ),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                for row in &self.csv {
                    w.write_record(row)?;
                }
                let bytes = w
                    .into_inner()
                    .map_err(|e| csv::Error::from(e.into_error()))?;
                String::from_utf8(bytes).expect("csv output is utf-8")
            }
        })
    }
}

fn row<const N: usize>(cells: [&dyn ToString; N]) -> Vec<String> {
    cells.iter().map(|c| c.to_string()).collect()
}

struct Ctx {
    alphabet: Alphabet,
    cli: Cli,
}

impl Ctx {
    /// Parses a base and returns it with its spec string, taken before any refinement.
    fn resolve(&self, spec: &str, name: &'static str) -> Result<(BaseValue, String), CliError> {
        let q = match spec.trim() {
            "golden" => BaseValue::parse(GOLDEN, self.alphabet).map_err(flag(name))?,
            "tribonacci" => BaseValue::parse(TRIBONACCI, self.alphabet).map_err(flag(name))?,
            "kl" => {
                if self.alphabet.max() != 1 {
                    return Err(CliError::Invalid {
                        flag: "--M",
                        msg: "the constant kl is defined for M = 1".into(),
                    });
                }
                kl_constant(self.cli.precision_bits)
                    .map_err(flag("--precision-bits"))?
                    .base
            }
            s => BaseValue::parse(s, self.alphabet).map_err(flag(name))?,
        };
        let label = q.spec_string();
        q.check_in_range().map_err(flag(name))?;
        Ok((q, label))
    }

    fn base(&self) -> Result<(BaseValue, String), CliError> {
        let spec = self.cli.base.as_deref().ok_or(CliError::Invalid {
            flag: "--base",
            msg: "required for this command".into(),
        })?;
        self.resolve(spec, "--base")
    }

    fn n(&self, default: usize) -> Result<usize, CliError> {
        match self.cli.n {
            Some(0) => Err(CliError::Invalid {
                flag: "--n",
                msg: "must be positive".into(),
            }),
            Some(n) => Ok(n),
            None => Ok(default),
        }
    }

    fn alpha_depth(&self, default: usize) -> Result<usize, CliError> {
        match self.cli.alpha_depth {
            Some(0) => Err(CliError::Invalid {
                flag: "--alpha-depth",
                msg: "must be positive".into(),
            }),
            Some(d) => Ok(d),
            None => Ok(default),
        }
    }

    fn periodic(&self, s: &str, name: &'static str) -> Result<PeriodicSeq, CliError> {
        Ok(
            match parse_sequence(s, self.alphabet).map_err(flag(name))? {
                Seq::Finite(w) => w.zero_padded(),
                Seq::Periodic(p) => p,
            },
        )
    }
}

fn expansion_output(cmd: &str, qs: &str, e: &AlphaExpansion) -> Output {
    let period = e.certified_periodic.as_ref().map(|p| p.to_string());
    Output {
        text: e.to_string(),
        json: json!({
            "command": cmd,
            "q": qs,
            "M": e.alphabet().max(),
            "n": e.depth,
            "prefix": e.prefix.to_string(),
            "certified_periodic": period,
        }),
        csv: vec![
            row([&"q", &"n", &"prefix", &"certified_periodic"]),
            row([
                &qs,
                &e.depth,
                &e.prefix,
                &period.clone().unwrap_or_default(),
            ]),
        ],
        unknown: false,
    }
}

fn membership_output(cmd: &str, qs: &str, subject: &str, v: &MembershipVerdict) -> Output {
    Output {
        text: v.to_string(),
        json: json!({
            "command": cmd,
            "q": qs,
            "subject": subject,
            "verdict": v.to_string(),
            "status": v.status,
            "witness_index": v.witness_index,
            "checked_depth": v.checked_depth,
        }),
        csv: vec![
            row([&"q", &"subject", &"verdict"]),
            row([&qs, &subject, &v]),
        ],
        unknown: v.status == Status::Unknown,
    }
}

fn words(t: &PrefixTrie) -> Vec<String> {
    t.words().iter().map(|w| w.to_string()).collect()
}

fn enumerate_output(qs: &str, m: u8, kind: SetKind, n: usize, r: &EnumResult) -> Output {
    let header = TrieHeader {
        q: qs.to_string(),
        m,
        n,
        kind: kind.to_string(),
        certified: r.certified,
    };
    let text = if r.certified {
        r.lower.to_text(&header)
    } else {
        format!("{}{}", r.upper.to_text(&header), r.lower.to_text(&header))
    };
    let mut csv = vec![row([&"word", &"in_lower", &"in_upper"])];
    for w in r.upper.words() {
        csv.push(row([&w, &r.lower.contains(w.digits()), &true]));
    }
    Output {
        text,
        json: json!({
            "command": "enumerate",
            "q": header.q,
            "M": header.m,
            "n": n,
            "kind": header.kind,
            "certified": r.certified,
            "lower": words(&r.lower),
            "upper": words(&r.upper),
        }),
        csv,
        unknown: !r.certified,
    }
}

fn dyadic_output(cmd: &str, fields: Value, d: Option<univoque::words::Dyadic>) -> Output {
    let shown = d.map_or("Unknown".to_string(), |d| d.to_string());
    let mut json = fields;
    json["command"] = json!(cmd);
    json["distance"] = json!(shown);
    Output {
        text: shown.clone(),
        json,
        csv: vec![row([&"distance"]), row([&shown])],
        unknown: d.is_none(),
    }
}

fn run(ctx: &Ctx) -> Result<Output, CliError> {
    let cli = &ctx.cli;
    match &cli.command {
        Command::Alpha => {
            let (q, qs) = ctx.base()?;
            let e = quasi_greedy_alpha(&q, ctx.n(DEFAULT_DEPTH)?)?;
            Ok(expansion_output("alpha", &qs, &e))
        }
        Command::Beta => {
            let (q, qs) = ctx.base()?;
            let e = greedy_beta(&q, ctx.n(DEFAULT_DEPTH)?)?;
            Ok(expansion_output("beta", &qs, &e))
        }
        Command::Classify => {
            let (q, qs) = ctx.base()?;
            let c = classify_base(&q, ctx.alpha_depth(DEFAULT_DEPTH)?)?;
            Ok(Output {
                text: c.verdict.to_string(),
                json: json!({
                    "command": "classify",
                    "q": qs.clone(),
                    "verdict": c.verdict,
                    "certified": c.certified,
                    "evidence": c.evidence,
                    "depth": c.depth,
                }),
                csv: vec![
                    row([&"q", &"verdict", &"certified", &"depth"]),
                    row([&qs, &c.verdict, &c.certified, &c.depth]),
                ],
                unknown: c.verdict == Verdict::Unknown,
            })
        }
        Command::Unique { x } => {
            let (q, qs) = ctx.base()?;
            let value = match x.strip_prefix("seq:") {
                Some(s) => eval_value(&ctx.periodic(s, "--x")?, &q)?,
                None => XReal::from_rational(&q, parse_rational(x).map_err(flag("--x"))?),
            };
            let v = is_unique_expansion(&value, &q, ctx.n(DEFAULT_DEPTH)?)?;
            Ok(membership_output("unique", &qs, x, &v))
        }
        Command::Member { seq } => {
            let (q, qs) = ctx.base()?;
            let c = ctx.periodic(seq, "--seq")?;
            let depth = ctx.alpha_depth(DEFAULT_DEPTH)?;
            let v = match SetKind::from(cli.kind) {
                SetKind::U => in_uq_prime(&c, &q, depth)?,
                SetKind::V => in_vq_prime(&c, &q, depth)?,
            };
            Ok(membership_output("member", &qs, &c.to_string(), &v))
        }
        Command::Enumerate => {
            let (q, qs) = ctx.base()?;
            let n = ctx.n(8)?;
            let kind = SetKind::from(cli.kind);
            let r = enum_prefixes(&q, n, kind, ctx.alpha_depth(alpha_depth_for(n))?)?;
            Ok(enumerate_output(&qs, ctx.alphabet.max(), kind, n, &r))
        }
        Command::DhSym { other, other_kind } => {
            let (q, qs) = ctx.base()?;
            let p = match other {
                Some(s) => ctx.resolve(s, "--other")?.0,
                None => q.clone(),
            };
            let n = ctx.n(8)?;
            let depth = ctx.alpha_depth(alpha_depth_for(n))?;
            let (ka, kb) = (SetKind::from(cli.kind), SetKind::from(*other_kind));
            let a = enum_prefixes(&q, n, ka, depth)?;
            let b = enum_prefixes(&p, n, kb, depth)?;
            let d = match (a.exact_set(), b.exact_set()) {
                (Some(x), Some(y)) => Some(symbolic_hausdorff(x, y)?),
                (_, Some(y)) => bracket_distance(&a, y)?,
                (Some(x), None) => bracket_distance(&b, x)?,
                (None, None) => None,
            };
            let fields = json!({
                "q": qs.clone(), "kind": ka.to_string(),
                "other": p.spec_string(), "other_kind": kb.to_string(), "n": n,
            });
            Ok(dyadic_output("dh-sym", fields, d))
        }
        Command::DhReal { other, other_kind } => {
            let (q, qs) = ctx.base()?;
            let p = match other {
                Some(s) => ctx.resolve(s, "--other")?.0,
                None => q.clone(),
            };
            let n = ctx.n(8)?;
            let depth = ctx.alpha_depth(alpha_depth_for(n))?;
            let (ka, kb) = (SetKind::from(cli.kind), SetKind::from(*other_kind));
            let a = approx_set_points_with(&q, ka, n, depth)?;
            let b = approx_set_points_with(&p, kb, n, depth)?;
            let (lo, hi) = if q.same_number(&p) {
                hausdorff_real(&a, &b)?.rational_bounds(REPORT_BITS)
            } else {
                hausdorff_enclosure(&a, &b, REPORT_BITS)?
            };
            let certified = a.certified && b.certified;
            Ok(Output {
                text: format!("[{lo}, {hi}]"),
                json: json!({
                    "command": "dh-real",
                    "q": qs.clone(), "kind": ka.to_string(),
                    "other": p.spec_string(), "other_kind": kb.to_string(), "n": n,
                    "low": lo.to_string(), "high": hi.to_string(), "certified": certified,
                }),
                csv: vec![
                    row([&"low", &"high", &"certified"]),
                    row([&lo, &hi, &certified]),
                ],
                unknown: !certified,
            })
        }
        Command::Continuity => {
            let (q, _) = ctx.base()?;
            let n = ctx.n(8)?;
            let side = match cli.side {
                SideArg::Left => Side::Left,
                SideArg::Right => Side::Right,
            };
            let mut cfg = ProbeConfig::new(side, cli.kind.into(), cli.steps, n);
            cfg.alpha_depth = ctx.alpha_depth(alpha_depth_for(n))?;
            cfg.threads = cli.threads;
            if cli.steps == 0 {
                return Err(CliError::Invalid {
                    flag: "--steps",
                    msg: "must be positive".into(),
                });
            }
            let report = continuity_probe(&q, &cfg)?;
            let csv_text = report.to_csv();
            let text = format!(
                "{csv_text}to_U={}\nto_V={}\nverdict={}",
                report.to_u, report.to_v, report.verdict
            );
            let mut csv = Vec::new();
            let mut rdr = csv::ReaderBuilder::new()
                .has_headers(false)
                .from_reader(csv_text.as_bytes());
            for rec in rdr.records() {
                csv.push(rec?.iter().map(str::to_string).collect());
            }
            Ok(Output {
                text,
                json: serde_json::to_value(&report).expect("json"),
                csv,
                unknown: report.verdict == ProbeVerdict::Inconclusive,
            })
        }
        Command::Gap => {
            let (q, qs) = ctx.base()?;
            let n = ctx.n(10)?;
            let d = discontinuity_gap(&q, n)?;
            Ok(dyadic_output("gap", json!({"q": qs.clone(), "n": n}), d))
        }
        Command::Kl => {
            if ctx.alphabet.max() != 1 {
                return Err(CliError::Invalid {
                    flag: "--M",
                    msg: "the constant kl is defined for M = 1".into(),
                });
            }
            let k = kl_constant(cli.precision_bits).map_err(flag("--precision-bits"))?;
            let approx = k.base.to_f64();
            Ok(Output {
                text: format!("{approx:.12} in [{}, {}]", k.lo, k.hi),
                json: json!({
                    "command": "kl",
                    "precision_bits": cli.precision_bits,
                    "lo": k.lo.to_string(),
                    "hi": k.hi.to_string(),
                    "approx": format!("{approx:.12}"),
                }),
                csv: vec![
                    row([&"precision_bits", &"lo", &"hi", &"approx"]),
                    row([&cli.precision_bits, &k.lo, &k.hi, &format!("{approx:.12}")]),
                ],
                unknown: false,
            })
        }
        Command::Remark4 { seq, pivot } => {
            let alpha = ctx.periodic(seq, "--seq")?;
            let c = remark4_candidate(&alpha, *pivot).map_err(flag("--m"))?;
            let ord = format!("{:?}", c.lex_cmp(&alpha));
            let m = *pivot;
            let window = |s: &PeriodicSeq| format!("{}{}", s.digit(m + 1), s.digit(m + 2));
            Ok(Output {
                text: format!("{c} {ord} {} {}", window(&c), window(&alpha)),
                json: json!({
                    "command": "remark4",
                    "alpha": alpha.to_string(),
                    "m": m,
                    "candidate": c.to_string(),
                    "cmp": ord,
                    "candidate_next": window(&c),
                    "alpha_next": window(&alpha),
                }),
                csv: vec![
                    row([
                        &"alpha",
                        &"m",
                        &"candidate",
                        &"cmp",
                        &"candidate_next",
                        &"alpha_next",
                    ]),
                    row([&alpha, &m, &c, &ord, &window(&c), &window(&alpha)]),
                ],
                unknown: false,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let alphabet = match Alphabet::new(cli.m) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: --M: {e}");
            return ExitCode::from(2);
        }
    };
    let format = cli.format;
    let require = cli.require_certified;
    let ctx = Ctx { alphabet, cli };
    let result = run(&ctx).and_then(|out| Ok((out.render(format)?, out.unknown)));
    match result {
        Ok((text, unknown)) => {
            print!("{text}");
            if require && unknown {
                eprintln!("error: --require-certified: result is undecided");
                return ExitCode::from(4);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
