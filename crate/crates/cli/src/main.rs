use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use magnus_kerint::{
    cross_validate, kerint_finite, kerint_witness, magnus_expand, membership_violation,
    nilpotency_probe, series_report, Alphabet, CrossValidation, Error, FiltrationKind,
    GroupDescriptor, KerIntMode, RingSpec, Word, DEFAULT_CAP,
};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "magnus-kerint",
    version,
    about = "Magnus expansions, filtration membership and kernel intersections of free-group words"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the truncated Magnus expansion of a word.
    Expand(ExpandArgs),
    /// Decide membership of a word in a filtration term by its Magnus coefficients.
    Member(MemberArgs),
    /// Decide whether every homomorphism into the matching unipotent group kills a word.
    Kerint(KerintArgs),
    /// Compute a filtration series of a finite unipotent group.
    Series(SeriesArgs),
    /// Run a verification harness; exits 1 on any failure.
    Verify {
        #[command(subcommand)]
        target: VerifyCommand,
    },
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Compare the Magnus criterion with the kernel intersection on all short words.
    Kerint(VerifyKerintArgs),
    /// Check that a finite series becomes trivial by term n.
    Series(SeriesArgs),
    /// Sample n-fold commutators in U_n(Z).
    Probe(ProbeArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Lcs,
    Zass,
    Lpc,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Witness,
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupArg {
    /// U_n(F_p), or U_n(--ring) when a ring is given.
    U,
    /// G(n, p).
    Gnp,
}

#[derive(Args)]
struct Common {
    /// Generator names (`a,b`) or a generator count.
    #[arg(long, default_value = "a,b")]
    gens: String,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct FiltrationArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
    /// Prime for zass and lpc.
    #[arg(long)]
    p: Option<u64>,
    /// Filtration level.
    #[arg(long)]
    n: usize,
}

impl FiltrationArgs {
    fn kind(&self) -> Result<FiltrationKind, Error> {
        let name = match self.kind {
            KindArg::Lcs => "lcs",
            KindArg::Zass => "zass",
            KindArg::Lpc => "lpc",
        };
        FiltrationKind::from_name(name, self.p)
    }
}

#[derive(Args)]
struct ExpandArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    word: String,
    /// Z, Z/m, Fp or Zp:p,prec=k.
    #[arg(long, default_value = "Z")]
    ring: String,
    /// Truncation bound: terms of degree >= this are dropped.
    #[arg(long)]
    degree: usize,
}

#[derive(Args)]
struct MemberArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    filtration: FiltrationArgs,
    #[arg(long)]
    word: String,
}

#[derive(Args)]
struct KerintArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    filtration: FiltrationArgs,
    #[arg(long)]
    word: String,
    #[arg(long, value_enum, default_value = "witness")]
    mode: ModeArg,
    /// Cap on group orders and homomorphism counts.
    #[arg(long, env = "KERINT_GROUP_CAP", default_value_t = DEFAULT_CAP)]
    group_cap: u128,
}

#[derive(Args)]
struct VerifyKerintArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    filtration: FiltrationArgs,
    /// Longest reduced word tested.
    #[arg(long, default_value_t = 6)]
    max_len: usize,
    #[arg(long, value_enum, default_value = "exhaustive")]
    mode: ModeArg,
    #[arg(long, env = "KERINT_GROUP_CAP", default_value_t = DEFAULT_CAP)]
    group_cap: u128,
    /// Random integer homs per member as an extra smoke test (witness mode over Z).
    #[arg(long, default_value_t = 0)]
    smoke: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Include elapsed time in the report (makes output non-reproducible).
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct SeriesArgs {
    #[arg(long, value_enum)]
    group: GroupArg,
    /// Matrix size.
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: Option<u64>,
    /// Entry ring for `--group U` (defaults to F_p).
    #[arg(long)]
    ring: Option<String>,
    /// Defaults to zass for U over F_p, lpc for Gnp, lcs otherwise.
    #[arg(long, value_enum)]
    kind: Option<KindArg>,
    #[arg(long, env = "KERINT_GROUP_CAP", default_value_t = DEFAULT_CAP)]
    group_cap: u128,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct ProbeArgs {
    /// Matrix size of U_n(Z).
    #[arg(long)]
    n: usize,
    /// Commutator depth; defaults to n.
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long, default_value_t = 500)]
    trials: usize,
    /// Entries are drawn from [-bound, bound].
    #[arg(long, default_value_t = 9)]
    entry_bound: i64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

/// What a command prints, and whether it counts as a verification success.
struct Output {
    text: String,
    json: Value,
    ok: bool,
}

impl Output {
    fn ok(text: String, json: Value) -> Self {
        Output {
            text,
            json,
            ok: true,
        }
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.clone(),
            Format::Json => serde_json::to_string_pretty(&self.json).expect("serializable"),
        }
    }
}

fn parse_word(common: &Common, expr: &str) -> Result<(Alphabet, Word), Error> {
    let alphabet = Alphabet::from_spec(&common.gens)?;
    let word = alphabet.parse(expr)?;
    Ok((alphabet, word))
}

fn expand(args: &ExpandArgs) -> Result<Output, Error> {
    let (alphabet, word) = parse_word(&args.common, &args.word)?;
    let ring: RingSpec = args.ring.parse()?;
    let series = magnus_expand(&word, ring, args.degree)?;
    Ok(Output::ok(
        series.format(&alphabet),
        series.to_json(&alphabet),
    ))
}

fn member(args: &MemberArgs) -> Result<Output, Error> {
    let (alphabet, word) = parse_word(&args.common, &args.word)?;
    let kind = args.filtration.kind()?;
    let n = args.filtration.n;
    let violation = membership_violation(&word, kind, n)?;
    let mut json = json!({
        "word": alphabet.format(&word),
        "kind": kind.short_name(),
        "prime": kind.prime(),
        "n": n,
        "member": violation.is_none(),
    });
    let text = match &violation {
        None => "member".to_string(),
        Some(v) => {
            json["violation"] = json!({
                "index": v.index.format(&alphabet),
                "coefficient": v.coefficient.to_string(),
                "image": v.image.to_string(),
                "required": v.required,
            });
            format!(
                "non-member, violation at I=({}): {} ∉ {}",
                v.index.format(&alphabet),
                v.coefficient,
                v.required
            )
        }
    };
    Ok(Output::ok(text, json))
}

fn exhaustive_target(kind: FiltrationKind, n: usize) -> Result<GroupDescriptor, Error> {
    let mut config = CrossValidation::new(kind, n, 0, 0, KerIntMode::Exhaustive);
    config.n = n;
    config.exhaustive_target()
}

fn kerint(args: &KerintArgs) -> Result<Output, Error> {
    let (alphabet, word) = parse_word(&args.common, &args.word)?;
    let kind = args.filtration.kind()?;
    let n = args.filtration.n;
    let (killed, target, mode) = match args.mode {
        ModeArg::Exhaustive => {
            let desc = exhaustive_target(kind, n)?;
            (
                kerint_finite(&word, &desc, args.group_cap)?,
                desc.to_string(),
                "exhaustive",
            )
        }
        ModeArg::Witness => {
            let chain = kind.chain(n)?;
            let target = GroupDescriptor::IdealUnipotent(chain.clone()).to_string();
            (kerint_witness(&word, &chain)?, target, "witness")
        }
    };
    let text = if killed {
        format!("killed by every {mode} hom into {target}")
    } else {
        format!("not killed: some {mode} hom into {target} is nontrivial")
    };
    let json = json!({
        "word": alphabet.format(&word),
        "kind": kind.short_name(),
        "prime": kind.prime(),
        "n": n,
        "mode": mode,
        "target": target,
        "kerint": killed,
    });
    Ok(Output::ok(text, json))
}

fn verify_kerint(args: &VerifyKerintArgs) -> Result<Output, Error> {
    let alphabet = Alphabet::from_spec(&args.common.gens)?;
    let kind = args.filtration.kind()?;
    let mode = match args.mode {
        ModeArg::Exhaustive => KerIntMode::Exhaustive,
        ModeArg::Witness => KerIntMode::Witness,
    };
    let mut config =
        CrossValidation::new(kind, args.filtration.n, alphabet.rank(), args.max_len, mode);
    config.cap = args.group_cap;
    config.smoke_samples = args.smoke;
    config.seed = args.seed;
    let mut report = cross_validate(&config)?;
    if !args.timings {
        report.elapsed_ms = None;
    }
    let mut text = format!(
        "{kind} n={} vs {}: {} words, {} homs, {} Magnus members, {} KerInt members, {} disagreements",
        report.n,
        report.target,
        report.words_tested,
        report.homs,
        report.magnus_members,
        report.kerint_members,
        report.disagreements
    );
    if report.smoke_checks > 0 {
        text.push_str(&format!(
            ", smoke {}/{} violations",
            report.smoke_violations, report.smoke_checks
        ));
    }
    if let Some(ms) = report.elapsed_ms {
        text.push_str(&format!(", {ms} ms"));
    }
    for w in &report.exemplars {
        text.push_str(&format!("\n  disagreement: {w}"));
    }
    Ok(Output {
        text,
        json: serde_json::to_value(&report).expect("serializable"),
        ok: report.passed(),
    })
}

fn series(args: &SeriesArgs, expect_trivial: bool) -> Result<Output, Error> {
    let (desc, default_kind) = match args.group {
        GroupArg::Gnp => {
            let p = args
                .p
                .ok_or_else(|| Error::InvalidArgument("--group gnp needs --p".into()))?;
            (
                GroupDescriptor::gnp(args.n, p)?,
                FiltrationKind::lower_p_central(p)?,
            )
        }
        GroupArg::U => {
            let ring = match (&args.ring, args.p) {
                (Some(ring), _) => ring.parse()?,
                (None, Some(p)) => RingSpec::prime_field(p)?,
                (None, None) => {
                    return Err(Error::InvalidArgument(
                        "--group u needs --p or --ring".into(),
                    ))
                }
            };
            let kind = match ring {
                RingSpec::PrimeField(p) => FiltrationKind::Zassenhaus(p),
                _ => FiltrationKind::LowerCentral,
            };
            (GroupDescriptor::full(ring, args.n)?, kind)
        }
    };
    let kind = match args.kind {
        None => default_kind,
        Some(KindArg::Lcs) => FiltrationKind::LowerCentral,
        Some(KindArg::Zass) => FiltrationKind::from_name("zass", args.p.or(default_kind.prime()))?,
        Some(KindArg::Lpc) => FiltrationKind::from_name("lpc", args.p.or(default_kind.prime()))?,
    };
    let expected = expect_trivial.then_some(args.n);
    let report = series_report(&desc, kind, expected, args.group_cap)?;
    let sizes: Vec<String> = report.term_sizes.iter().map(ToString::to_string).collect();
    let mut text = format!("{kind} series of {}: [{}]", report.group, sizes.join(", "));
    match report.trivial_at {
        Some(t) => text.push_str(&format!(", trivial at term {t}")),
        None => text.push_str(", never trivial"),
    }
    if !report.all_terms_normal {
        text.push_str(", NOT a normal series");
    }
    Ok(Output {
        text,
        ok: report.passed,
        json: serde_json::to_value(&report).expect("serializable"),
    })
}

fn probe(args: &ProbeArgs) -> Result<Output, Error> {
    let depth = args.depth.unwrap_or(args.n);
    let desc = GroupDescriptor::full(RingSpec::Integers, args.n)?;
    let trivial = nilpotency_probe(&desc, depth, args.trials, args.entry_bound, args.seed)?;
    let expected = depth >= args.n;
    let text = format!(
        "{} random {depth}-fold commutators in {desc}: {}",
        args.trials,
        if trivial {
            "all trivial"
        } else {
            "some nontrivial"
        }
    );
    let json = json!({
        "group": desc.to_string(),
        "depth": depth,
        "trials": args.trials,
        "entry_bound": args.entry_bound,
        "seed": args.seed,
        "all_trivial": trivial,
        "expected_trivial": expected,
    });
    Ok(Output {
        text,
        json,
        ok: trivial == expected,
    })
}

fn run(cli: &Cli) -> Result<(Output, Format), Error> {
    Ok(match &cli.command {
        Command::Expand(args) => (expand(args)?, args.common.format),
        Command::Member(args) => (member(args)?, args.common.format),
        Command::Kerint(args) => (kerint(args)?, args.common.format),
        Command::Series(args) => (series(args, false)?, args.format),
        Command::Verify { target } => match target {
            VerifyCommand::Kerint(args) => (verify_kerint(args)?, args.common.format),
            VerifyCommand::Series(args) => (series(args, true)?, args.format),
            VerifyCommand::Probe(args) => (probe(args)?, args.format),
        },
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((output, format)) => {
            println!("{}", output.render(format));
            if output.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_budget() { 3 } else { 2 })
        }
    }
}
