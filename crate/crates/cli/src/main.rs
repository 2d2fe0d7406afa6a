use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use nestsep::corpus::{run_corpus, CorpusOptions, Status, DEFAULT_SEED};
use nestsep::group::GroupRef;
use nestsep::nests::{datum_from_prenest, hom_pair_from_nest, is_prenest, nest_of, prenest_from_datum, Pair, PreNest};
use nestsep::separability::{
    product_double_coset_separate, separate, separate_cached, verify_certificate, verify_nest_tcc_correspondence,
    CertificateCache, FiniteSchedule, ScheduledGroup, SeparationOutcome, TheoremAMode, DEFAULT_BUDGET,
    EXHAUSTIVE_ORDER_CAP,
};
use nestsep::spec::{resolve_target, BuiltGroup, DatumSpec, ElemSpec, GroupSpec, HomSpec};
use nestsep::twisted::{are_twisted_conjugate, class_partition, TwistedPair};
use nestsep::zoo::zoo_entries;
use nestsep::{Error, Result};

const EXIT_OK: u8 = 0;
const EXIT_NEGATIVE: u8 = 1;
const EXIT_EXHAUSTED: u8 = 2;
const EXIT_INPUT: u8 = 3;

#[derive(Parser)]
#[command(name = "nestsep", version, about = "Twisted conjugacy, nests and separability certificates")]
struct Cli {
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    output: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Twisted conjugacy classes of a homomorphism pair
    #[command(subcommand)]
    Twisted(TwistedCmd),
    /// Pre-nests, nests and nest data
    #[command(subcommand)]
    Nest(NestCmd),
    /// Separability certificates
    #[command(subcommand)]
    Sep(SepCmd),
    /// Finite-scale checks
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Named example groups
    #[command(subcommand)]
    Zoo(ZooCmd),
    /// Run the acceptance suite
    Corpus(CorpusArgs),
}

#[derive(Args)]
struct PairArgs {
    /// Target group G, as group-spec JSON
    #[arg(long)]
    group: String,
    /// Source group H (defaults to G)
    #[arg(long)]
    source: Option<String>,
    #[arg(long, default_value = "id")]
    phi: String,
    #[arg(long, default_value = "id")]
    psi: String,
}

#[derive(Subcommand)]
enum TwistedCmd {
    /// Partition G into (φ, ψ)-twisted classes
    Classes(PairArgs),
    /// Decide whether g1 = ψ(h) g2 φ(h)^-1 for some h
    Check {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        g1: String,
        #[arg(long)]
        g2: String,
    },
}

#[derive(Subcommand)]
enum NestCmd {
    /// Build the pre-nest of a nest datum
    FromDatum {
        #[arg(long)]
        group: String,
        #[arg(long)]
        datum: String,
    },
    /// datum -> pre-nest -> datum -> pre-nest, and the realising hom pair
    Roundtrip {
        #[arg(long)]
        group: String,
        #[arg(long)]
        datum: String,
    },
    /// Check closure under ((a,b),(c,d)) -> (ac^-1, d^-1 b)
    IsPrenest {
        #[arg(long)]
        group: String,
        /// JSON list of element pairs
        #[arg(long)]
        pairs: String,
    },
}

#[derive(Args)]
struct BudgetArgs {
    /// Number of stages to search
    #[arg(long, env = "NESTSEP_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: usize,
}

#[derive(Subcommand)]
enum SepCmd {
    /// Separate g from a target set in a finite quotient
    Certify {
        #[arg(long)]
        group: String,
        /// Target JSON, e.g. {"singleton":"identity"}
        #[arg(long)]
        target: String,
        #[arg(long)]
        g: String,
        #[command(flatten)]
        budget: BudgetArgs,
        /// JSON-lines certificate cache
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Separate g1 from the (φ, ψ)-class of g2 through the double coset in G × G
    Doublecoset {
        #[arg(long)]
        group: String,
        #[arg(long, default_value = "id")]
        phi: String,
        #[arg(long, default_value = "id")]
        psi: String,
        #[arg(long)]
        g1: String,
        #[arg(long)]
        g2: String,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Nest datum <-> identity twisted class correspondence
    TheoremA {
        #[arg(long)]
        group: String,
        /// Check a seeded sample of this many data instead of all
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum ZooCmd {
    List,
}

#[derive(Args)]
struct CorpusArgs {
    /// Criterion number, name or tag (nests, twisted, separability)
    #[arg(long)]
    filter: Option<String>,
    /// Write the JSON report here
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long)]
    cache: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Record zero timings so reports are byte-identical across runs
    #[arg(long)]
    omit_timings: bool,
}

/// What a command produced: exit code, JSON value and text rendering.
struct Reply {
    code: u8,
    json: Value,
    text: String,
}

impl Reply {
    fn new(code: u8, json: Value, text: impl Into<String>) -> Reply {
        Reply { code, json, text: text.into() }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return diagnose("usage", e.to_string().trim()),
    };
    match run(cli.command) {
        Ok(r) => {
            let body = match cli.output {
                Format::Json => serde_json::to_string_pretty(&r.json).expect("json"),
                Format::Text => r.text,
            };
            // a closed pipe is not worth a panic
            let _ = writeln!(std::io::stdout().lock(), "{body}");
            ExitCode::from(r.code)
        }
        Err(e) => diagnose(error_kind(&e), &e.to_string()),
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Parse(_) => "parse",
        Error::Io(_) => "io",
        Error::InvalidArgs(_) => "invalid_args",
        Error::DatumInvalid(_) => "datum_invalid",
        Error::BudgetZero => "budget_zero",
        Error::ElementOutOfRange { .. } => "element_out_of_range",
        Error::NotAHomomorphism { .. } | Error::MissingGeneratorImage(_) => "not_a_homomorphism",
        Error::OrderCapExceeded { .. } | Error::ClosureBudgetExceeded { .. } => "too_large",
        _ => "invalid_input",
    }
}

fn diagnose(kind: &str, message: &str) -> ExitCode {
    eprintln!("{}", json!({ "error": kind, "message": message }));
    ExitCode::from(EXIT_INPUT)
}

fn run(cmd: Command) -> Result<Reply> {
    match cmd {
        Command::Twisted(TwistedCmd::Classes(p)) => twisted_classes(&p),
        Command::Twisted(TwistedCmd::Check { pair, g1, g2 }) => twisted_check(&pair, &g1, &g2),
        Command::Nest(NestCmd::FromDatum { group, datum }) => nest_from_datum(&group, &datum),
        Command::Nest(NestCmd::Roundtrip { group, datum }) => nest_roundtrip(&group, &datum),
        Command::Nest(NestCmd::IsPrenest { group, pairs }) => nest_is_prenest(&group, &pairs),
        Command::Sep(SepCmd::Certify { group, target, g, budget, cache }) => {
            sep_certify(&group, &target, &g, budget.budget, cache)
        }
        Command::Sep(SepCmd::Doublecoset { group, phi, psi, g1, g2, budget }) => {
            sep_doublecoset(&group, &phi, &psi, &g1, &g2, budget.budget)
        }
        Command::Verify(VerifyCmd::TheoremA { group, sample, seed }) => theorem_a(&group, sample, seed),
        Command::Zoo(ZooCmd::List) => zoo_list(),
        Command::Corpus(a) => corpus(a),
    }
}

fn finite_group(spec: &str) -> Result<GroupRef> {
    Ok(GroupSpec::parse(spec)?.build()?.expect_finite()?.clone())
}

fn hom_pair(p: &PairArgs) -> Result<TwistedPair> {
    let g = finite_group(&p.group)?;
    let h = match &p.source {
        Some(s) => finite_group(s)?,
        None => g.clone(),
    };
    let phi = HomSpec::parse(&p.phi)?.resolve(&h, &g)?;
    let psi = HomSpec::parse(&p.psi)?.resolve(&h, &g)?;
    TwistedPair::new(phi, psi)
}

fn names(g: &GroupRef, xs: &[usize]) -> Vec<String> {
    xs.iter().map(|&x| g.format_elem(x)).collect()
}

fn twisted_classes(p: &PairArgs) -> Result<Reply> {
    let pair = hom_pair(p)?;
    let g = pair.g();
    let part = class_partition(&pair);
    let classes: Vec<Vec<String>> = part.classes.iter().map(|c| names(g, c)).collect();
    let mut text = format!("{} twisted classes", classes.len());
    for c in &classes {
        text.push_str(&format!("\n  {{{}}}", c.join(", ")));
    }
    Ok(Reply::new(EXIT_OK, json!({ "count": classes.len(), "classes": classes }), text))
}

fn twisted_check(p: &PairArgs, g1: &str, g2: &str) -> Result<Reply> {
    let pair = hom_pair(p)?;
    let g = pair.g();
    let (x1, x2) = (g.parse_elem(g1)?, g.parse_elem(g2)?);
    Ok(match are_twisted_conjugate(&pair, x1, x2)? {
        Some(h) => {
            let w = pair.h().format_elem(h);
            Reply::new(
                EXIT_OK,
                json!({ "conjugate": true, "witness": w }),
                format!("twisted conjugate, witness h = {w}"),
            )
        }
        None => Reply::new(EXIT_NEGATIVE, json!({ "conjugate": false }), "not twisted conjugate"),
    })
}

fn datum(group: &str, datum: &str) -> Result<(GroupRef, nestsep::nests::NestDatum)> {
    let g = finite_group(group)?;
    let spec: DatumSpec = serde_json::from_str(datum)?;
    let d = spec.resolve(&g)?;
    Ok((g, d))
}

fn prenest_json(g: &GroupRef, p: &PreNest) -> Value {
    let pairs: Vec<[String; 2]> = p.pairs().iter().map(|&(a, b)| [g.format_elem(a), g.format_elem(b)]).collect();
    json!({ "size": p.len(), "pairs": pairs, "nest": names(g, &nest_of(p)) })
}

fn nest_from_datum(group: &str, spec: &str) -> Result<Reply> {
    let (g, d) = datum(group, spec)?;
    let p = prenest_from_datum(&d)?;
    let nest = names(&g, &nest_of(&p));
    let text = format!("pre-nest of {} pairs; nest {{{}}}", p.len(), nest.join(", "));
    Ok(Reply::new(EXIT_OK, prenest_json(&g, &p), text))
}

fn nest_roundtrip(group: &str, spec: &str) -> Result<Reply> {
    let (g, d) = datum(group, spec)?;
    let p = prenest_from_datum(&d)?;
    let again = prenest_from_datum(&datum_from_prenest(&p)?)?;
    let hp = hom_pair_from_nest(&p)?;
    let realised = nestsep::twisted::twisted_class(&hp.pair, 0)?.members == nest_of(&p);
    let ok = again == p && realised;
    let json = json!({
        "roundtrip": again == p,
        "hom_pair_realises_nest": realised,
        "source_order": hp.pair.h().order(),
        "prenest": prenest_json(&g, &p),
    });
    let text = if ok {
        format!("round trip ok; nest realised as [1] of a pair with |H| = {}", hp.pair.h().order())
    } else {
        "round trip failed".to_string()
    };
    Ok(Reply::new(if ok { EXIT_OK } else { EXIT_NEGATIVE }, json, text))
}

fn nest_is_prenest(group: &str, pairs: &str) -> Result<Reply> {
    let g = finite_group(group)?;
    let raw: Vec<(ElemSpec, ElemSpec)> = serde_json::from_str(pairs)?;
    let pairs: Vec<Pair> = raw.iter().map(|(a, b)| Ok((a.resolve(&g)?, b.resolve(&g)?))).collect::<Result<_>>()?;
    Ok(match is_prenest(&g, &pairs)? {
        None => Reply::new(EXIT_OK, json!({ "prenest": true }), "is a pre-nest"),
        Some((x, y, z)) => {
            let f = |(a, b): Pair| [g.format_elem(a), g.format_elem(b)];
            let text = format!("not a pre-nest: {:?} and {:?} give {:?}", f(x), f(y), f(z));
            Reply::new(EXIT_NEGATIVE, json!({ "prenest": false, "violation": [f(x), f(y), f(z)] }), text)
        }
    })
}

fn outcome_reply(outcome: &SeparationOutcome) -> Reply {
    let json = serde_json::to_value(outcome).expect("outcomes serialize");
    match outcome {
        SeparationOutcome::Certified(c) => Reply::new(
            EXIT_OK,
            json,
            format!(
                "separated at stage {} (order {}, {}): image of g is {}, target image has {} elements",
                c.stage,
                c.order,
                c.params,
                c.g_image,
                c.target_image.len()
            ),
        ),
        SeparationOutcome::Exhausted { budget, order_cap_at: None } => {
            Reply::new(EXIT_EXHAUSTED, json, format!("no separating stage among the first {budget}"))
        }
        SeparationOutcome::Exhausted { order_cap_at: Some(i), .. } => Reply::new(
            EXIT_EXHAUSTED,
            json,
            format!("no separating stage below stage {i}, whose order exceeds the search cap"),
        ),
    }
}

fn in_target() -> Reply {
    Reply::new(EXIT_NEGATIVE, json!({ "outcome": "in_target" }), "g lies in the target")
}

fn certify<S: ScheduledGroup>(sg: &S, target: &str, g: &str, budget: usize, cache: Option<PathBuf>) -> Result<Reply> {
    let value: Value = serde_json::from_str(target)?;
    let target = resolve_target(sg, &value)?;
    let g = sg.parse_elem(g)?;
    let result = match cache {
        Some(path) => {
            let mut cache = CertificateCache::open(path)?;
            separate_cached(sg, &target, &g, budget, &mut cache).map(|(o, _)| o)
        }
        None => separate(sg, &target, &g, budget),
    };
    match result {
        Ok(outcome) => {
            if let Some(c) = outcome.certificate() {
                verify_certificate(sg, c)?;
            }
            Ok(outcome_reply(&outcome))
        }
        Err(Error::ElementInTarget) => Ok(in_target()),
        Err(e) => Err(e),
    }
}

fn sep_certify(group: &str, target: &str, g: &str, budget: usize, cache: Option<PathBuf>) -> Result<Reply> {
    let spec = GroupSpec::parse(group)?;
    match spec.build()? {
        BuiltGroup::Finite(fg) => certify(&FiniteSchedule::new(spec.canonical(), fg), target, g, budget, cache),
        BuiltGroup::Integers(sg) => certify(&sg, target, g, budget, cache),
        BuiltGroup::Lattice(sg) => certify(&sg, target, g, budget, cache),
        BuiltGroup::Bs12(sg) => certify(&sg, target, g, budget, cache),
    }
}

fn doublecoset<S: ScheduledGroup>(sg: &S, phi: &str, psi: &str, g1: &str, g2: &str, budget: usize) -> Result<Reply> {
    let phi = HomSpec::parse(phi)?.resolve_scheduled(sg)?;
    let psi = HomSpec::parse(psi)?.resolve_scheduled(sg)?;
    let (g1, g2) = (sg.parse_elem(g1)?, sg.parse_elem(g2)?);
    match product_double_coset_separate(sg, sg, &phi, &psi, &g1, &g2, budget) {
        Ok(out) => {
            let json = serde_json::to_value(&out).expect("outcomes serialize");
            Ok(match &out.converted {
                Some(c) => {
                    verify_certificate(sg, c)?;
                    Reply::new(
                        EXIT_OK,
                        json,
                        format!(
                            "double coset separated at stage {} (order {}); G-factor certificate verifies",
                            c.stage, c.order
                        ),
                    )
                }
                None => Reply { json, ..outcome_reply(&out.product) },
            })
        }
        Err(Error::ElementInTarget) => Ok(in_target()),
        Err(e) => Err(e),
    }
}

fn sep_doublecoset(group: &str, phi: &str, psi: &str, g1: &str, g2: &str, budget: usize) -> Result<Reply> {
    let spec = GroupSpec::parse(group)?;
    match spec.build()? {
        BuiltGroup::Finite(fg) => doublecoset(&FiniteSchedule::new(spec.canonical(), fg), phi, psi, g1, g2, budget),
        BuiltGroup::Integers(sg) => doublecoset(&sg, phi, psi, g1, g2, budget),
        BuiltGroup::Lattice(sg) => doublecoset(&sg, phi, psi, g1, g2, budget),
        BuiltGroup::Bs12(sg) => doublecoset(&sg, phi, psi, g1, g2, budget),
    }
}

fn theorem_a(group: &str, sample: Option<usize>, seed: u64) -> Result<Reply> {
    let g = finite_group(group)?;
    let mode = match sample {
        Some(count) => TheoremAMode::Sample { count, seed },
        None if g.order() <= EXHAUSTIVE_ORDER_CAP => TheoremAMode::Exhaustive,
        None => TheoremAMode::Sample { count: 200, seed },
    };
    let report = verify_nest_tcc_correspondence(&g, mode)?;
    let json = serde_json::to_value(&report).expect("reports serialize");
    Ok(if report.passed() {
        let text = format!("all data pass ({} of {} checked)", report.data_checked, report.data_total);
        Reply::new(EXIT_OK, json, text)
    } else {
        let text = format!("{} failures:\n  {}", report.failures.len(), report.failures.join("\n  "));
        Reply::new(EXIT_NEGATIVE, json, text)
    })
}

fn zoo_list() -> Result<Reply> {
    let entries = zoo_entries();
    let text = entries
        .iter()
        .map(|e| {
            format!("{:<12} {:<9} {}  {}", e.name, format!("{:?}", e.kind).to_lowercase(), e.parameters, e.provenance)
        })
        .collect::<Vec<_>>()
        .join("\n");
    Ok(Reply::new(EXIT_OK, serde_json::to_value(&entries).expect("entries serialize"), text))
}

fn corpus(a: CorpusArgs) -> Result<Reply> {
    let opts = CorpusOptions { filter: a.filter, seed: a.seed, cache: a.cache, omit_timings: a.omit_timings };
    let report = run_corpus(&opts);
    if report.results.is_empty() {
        return Err(Error::InvalidArgs("filter matches no criterion".into()));
    }
    let json = serde_json::to_value(&report).expect("reports serialize");
    if let Some(path) = &a.report {
        let mut body = serde_json::to_string_pretty(&report).expect("reports serialize");
        body.push('\n');
        std::fs::write(path, body)?;
    }
    let text = report
        .results
        .iter()
        .map(|r| {
            let mark = if r.status == Status::Pass { "PASS" } else { "FAIL" };
            format!("[{mark}] {:>2} {} ({} ms): {}", r.criterion, r.name, r.millis, r.detail)
        })
        .collect::<Vec<_>>()
        .join("\n");
    Ok(Reply::new(if report.passed() { EXIT_OK } else { EXIT_NEGATIVE }, json, text))
}
