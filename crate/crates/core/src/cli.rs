//! The `qmin` command line. Every report ends with one `RESULT: <value>`
//! line; exit code 0 means a verdict was rendered, 1 a usage or input
//! error, 2 an exhausted budget.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::automata::{build_elementary_pt, build_local, build_renewal, Exponent, Regex, SyntacticMonoid};
use crate::constructions::countable::{CountableConstruction, Counting, ModularSimple, Primorial, PRIMORIAL_MAX_LEVELS};
use crate::constructions::dyck::{cfl_verifier, DyckTower};
use crate::constructions::generic::TransitiveLt;
use crate::constructions::{oneminimal, HaltingOracle};
use crate::order::{
    generator_check, leq_semidecide, GeneratorCheck, LanguageOracle, Semidecision, SftOracle, SubstitutionOracle,
    TemplateOracle,
};
use crate::ruler;
use crate::substitution::{
    decide_language_intersection, decide_regular_intersection, subsystem_count_b, Substitution, Syndeticity, Verdict,
};
use crate::template::{Reachability, TemplateSubshift};
use crate::word::{format_decimal, format_word, parse_word, Alphabet, ClopenSet, Letter, Word};
use crate::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "qmin", version, about = "Decision procedures and constructions for quasiminimal subshifts")]
struct Cli {
    /// Caps searches and window sizes.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Seed for randomized data in `selftest`.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// The ruler sequence and its factors.
    #[command(subcommand)]
    Ruler(RulerCmd),
    /// Regular languages from the standard families.
    #[command(subcommand)]
    Lang(LangCmd),
    /// Substitutions read from a rule file.
    Subst(SubstArgs),
    /// Countable subshifts given by templates.
    Template(TemplateArgs),
    /// The generating order on a built-in system.
    Order(OrderArgs),
    /// Windows of the halting constructions.
    Construct(ConstructArgs),
    /// Solver and scanned witness for a construction.
    Decide(DecideArgs),
    /// Randomized consistency checks.
    Selftest,
}

#[derive(Subcommand, Debug)]
enum RulerCmd {
    Value {
        #[arg(long)]
        i: u64,
    },
    Window {
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
    },
    Extend {
        /// Space-separated decimal symbols.
        #[arg(long)]
        word: String,
        #[arg(long)]
        left: Option<Letter>,
        #[arg(long)]
        right: Option<Letter>,
    },
    Psi {
        #[arg(long)]
        radius: u64,
    },
}

#[derive(Subcommand, Debug)]
enum LangCmd {
    Build {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        alphabet: String,
        /// pt: `a1a2...`; local: `A;B;F1,F2`; renewal: `u;v;w1,w2`; regex: the expression.
        #[arg(long)]
        spec: String,
        /// Also test this word for membership.
        #[arg(long)]
        accepts: Option<String>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Family {
    Pt,
    Local,
    Renewal,
    Regex,
}

#[derive(Args, Debug)]
struct SubstArgs {
    #[arg(value_enum)]
    action: SubstAction,
    #[arg(long)]
    file: Option<String>,
    #[arg(long)]
    letter: Option<char>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    regex: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SubstAction {
    Iterate,
    Long,
    Syndetic,
    CountB,
    Modelcheck,
}

#[derive(Args, Debug)]
struct TemplateArgs {
    #[arg(value_enum)]
    action: TemplateAction,
    #[arg(long)]
    file: String,
    #[arg(long)]
    word: Option<String>,
    /// Clopen sets are comma-separated words of one width.
    #[arg(long)]
    from: Option<String>,
    #[arg(long)]
    to: Option<String>,
    #[arg(long)]
    along: Option<String>,
    #[arg(long)]
    marked: Option<String>,
    #[arg(long, default_value_t = 0)]
    count: u64,
    #[arg(long, default_value_t = 0)]
    residue: u64,
    #[arg(long, default_value_t = 1)]
    modulus: u64,
    #[arg(long, default_value_t = 0)]
    min_j: u64,
    /// Comma-separated words for `tuple`.
    #[arg(long)]
    words: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum TemplateAction {
    Member,
    CbRank,
    Halting,
    Modular,
    Counting,
    Tuple,
}

#[derive(Args, Debug)]
struct OrderArgs {
    #[arg(value_enum)]
    action: OrderAction,
    #[arg(long, value_enum)]
    system: BuiltinSystem,
    #[arg(long)]
    u: Option<String>,
    #[arg(long)]
    v: Option<String>,
    #[arg(long)]
    word: Option<String>,
    #[arg(long, default_value_t = 3)]
    n: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum OrderAction {
    Leq,
    Generator,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum BuiltinSystem {
    Sunny,
    GoldenMean,
    Fibonacci,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum SystemName {
    Oneminimal,
    Translt,
    Modular,
    Primorial,
    Counting,
    Dyck,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    #[arg(value_enum)]
    system: SystemName,
    #[arg(long)]
    oracle: String,
    #[arg(long, default_value_t = 64)]
    window: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Problem {
    Halting,
    Modular,
    Counting,
    Cfl,
}

#[derive(Args, Debug)]
struct DecideArgs {
    #[arg(long, value_enum)]
    system: SystemName,
    #[arg(long)]
    oracle: String,
    #[arg(long, value_enum)]
    problem: Problem,
    #[arg(long)]
    j: u64,
    /// Scan size: symbols, radius or tower depth depending on the system.
    #[arg(long)]
    window: Option<u64>,
}

/// Failure of a command, split by exit code.
enum Failure {
    Usage(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_budget() {
            Failure::Budget(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

type Outcome = std::result::Result<String, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// Runs `qmin` on `argv` (program name first).
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(report) => {
            let _ = out.write_all(report.as_bytes());
            0
        }
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            1
        }
        Err(Failure::Budget(m)) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
    }
}

fn dispatch(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Ruler(c) => ruler_cmd(c),
        Command::Lang(LangCmd::Build { family, alphabet, spec, accepts }) => lang_build(*family, alphabet, spec, accepts.as_deref()),
        Command::Subst(a) => subst_cmd(a, cli.budget),
        Command::Template(a) => template_cmd(a),
        Command::Order(a) => order_cmd(a, cli.budget),
        Command::Construct(a) => construct_cmd(a, cli.budget),
        Command::Decide(a) => decide_cmd(a, cli.budget),
        Command::Selftest => selftest(cli.seed),
    }
}

fn finish(mut body: String, result: impl std::fmt::Display) -> Outcome {
    let _ = writeln!(body, "RESULT: {result}");
    Ok(body)
}

fn read_file(path: &str) -> std::result::Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {path}: {e}")))
}

fn parse_decimal(s: &str) -> std::result::Result<Word, Failure> {
    s.split_whitespace().map(|t| t.parse::<Letter>().map_err(|_| usage(format!("bad symbol {t:?}")))).collect()
}

fn parse_clopen(s: Option<&str>, name: &str) -> std::result::Result<ClopenSet, Failure> {
    let s = s.ok_or_else(|| usage(format!("--{name} is required")))?;
    let words = s.split(',').map(|w| parse_word(w.trim())).collect::<Result<Vec<_>>>()?;
    Ok(ClopenSet::new(words)?)
}

fn ruler_cmd(c: &RulerCmd) -> Outcome {
    match c {
        RulerCmd::Value { i } => finish(String::new(), ruler::ruler_value(*i)),
        RulerCmd::Window { from, to } => {
            if to < from {
                return Err(usage("--to must not be below --from"));
            }
            finish(String::new(), format_decimal(&ruler::ruler_window(*from, *to)))
        }
        RulerCmd::Extend { word, left, right } => {
            let w = parse_decimal(word)?;
            let ext = ruler::extend(&w, *left, *right)?;
            finish(format!("length: {}\n", ext.len()), format_decimal(&ext))
        }
        RulerCmd::Psi { radius } => {
            let w = ruler::psi_window(*radius);
            finish(format!("origin: {radius}\n"), format_decimal(&w))
        }
    }
}

fn lang_build(family: Family, glyphs: &str, spec: &str, accepts: Option<&str>) -> Outcome {
    let alphabet = Alphabet::from_glyphs(glyphs)?;
    let fields: Vec<&str> = spec.split(';').map(str::trim).collect();
    let words_of = |s: &str| -> Result<Vec<Word>> {
        s.split(',').map(str::trim).filter(|t| !t.is_empty()).map(|t| alphabet.parse_word(t)).collect()
    };
    let nfa = match family {
        Family::Pt => build_elementary_pt(&alphabet, &alphabet.parse_word(spec)?)?,
        Family::Regex => Regex::parse(spec, &alphabet)?.compile(&alphabet)?,
        Family::Local => {
            let [a, b, f] = fields[..] else { return Err(usage("local spec is `A;B;F1,F2`")) };
            let a: BTreeSet<Letter> = alphabet.parse_word(a)?.into_iter().collect();
            let b: BTreeSet<Letter> = alphabet.parse_word(b)?.into_iter().collect();
            let f: BTreeSet<Word> = words_of(f)?.into_iter().collect();
            build_local(&alphabet, &a, &b, &f)?
        }
        Family::Renewal => {
            let [u, v, ws] = fields[..] else { return Err(usage("renewal spec is `u;v;w1,w2`")) };
            build_renewal(&alphabet, &alphabet.parse_word(u)?, &alphabet.parse_word(v)?, &words_of(ws)?)?
        }
    };
    let minimal = nfa.determinize()?.minimize();
    let monoid = SyntacticMonoid::of(&nfa)?;
    let mut body = format!(
        "nfa states: {}\nminimal dfa states: {}\nsyntactic monoid size: {}\n",
        nfa.num_states(),
        minimal.num_states(),
        monoid.len()
    );
    let exponent = match monoid.idempotent_exponent() {
        Exponent::Aperiodic(p) => format!("APERIODIC p={p}"),
        Exponent::NotAperiodic => "NOT-APERIODIC".to_string(),
    };
    match accepts {
        Some(w) => {
            let _ = writeln!(body, "exponent: {exponent}");
            let yes = nfa.accepts(&alphabet.parse_word(w)?);
            finish(body, if yes { "ACCEPTS" } else { "REJECTS" })
        }
        None => finish(body, exponent),
    }
}

fn subst_cmd(a: &SubstArgs, budget: Option<u64>) -> Outcome {
    if let SubstAction::CountB = a.action {
        let k = a.n.ok_or_else(|| usage("--n is required"))?;
        let k = u32::try_from(k).map_err(|_| usage("--n is too large"))?;
        return finish(String::new(), subsystem_count_b(k));
    }
    let path = a.file.as_deref().ok_or_else(|| usage("--file is required"))?;
    let tau = Substitution::parse(&read_file(path)?)?;
    let letter = || -> std::result::Result<Letter, Failure> {
        let c = a.letter.ok_or_else(|| usage("--letter is required"))?;
        tau.alphabet().letter_for_glyph(c).ok_or_else(|| usage(format!("letter {c:?} is not in the alphabet")))
    };
    match a.action {
        SubstAction::Iterate => {
            let l = letter()?;
            let n = a.n.ok_or_else(|| usage("--n is required"))?;
            let len = tau.iterate_length(l, n)?;
            let cap = budget.unwrap_or(1 << 20);
            if len > cap.into() {
                return Err(Failure::Budget(format!("image of length {len} exceeds the budget {cap}")));
            }
            let w = tau.iterate(l, n)?;
            finish(format!("length: {len}\n"), tau.alphabet().format_word(&w))
        }
        SubstAction::Long => finish(String::new(), tau.alphabet().format_word(&tau.long_symbols().into_iter().collect::<Vec<_>>())),
        SubstAction::Syndetic => match tau.syndetic_long(budget.unwrap_or(10_000) as usize) {
            Syndeticity::Syndetic(m) => finish(String::new(), format!("SYNDETIC m={m}")),
            Syndeticity::NonSyndetic { .. } => finish(String::new(), "NON-SYNDETIC"),
            Syndeticity::Budget => Err(Failure::Budget("syndeticity undecided within the cap".into())),
        },
        SubstAction::Modelcheck => {
            let src = a.regex.as_deref().ok_or_else(|| usage("--regex is required"))?;
            let nfa = Regex::parse(src, tau.alphabet())?.compile(tau.alphabet())?;
            match a.letter {
                Some(_) => {
                    let cert = decide_regular_intersection(&tau, letter()?, &nfa)?;
                    let body = format!("relation period: t={} p={}\n", cert.t, cert.p);
                    match cert.verdict {
                        Verdict::Yes(n) => finish(body, format!("YES n={n}")),
                        Verdict::No => finish(body, format!("NO t={} p={}", cert.t, cert.p)),
                    }
                }
                None => {
                    let v = decide_language_intersection(&tau, &nfa)?;
                    match v.witness() {
                        Some((l, n)) => {
                            let g = tau.alphabet().format_word(&[l]);
                            finish(String::new(), format!("YES letter={g} n={n}"))
                        }
                        None => finish(String::new(), "NO"),
                    }
                }
            }
        }
        SubstAction::CountB => unreachable!("handled above"),
    }
}

fn reach_line(r: &Reachability) -> String {
    match r {
        Reachability::Reachable { point, from, j } => format!("YES from={from} j={j} point={point}"),
        Reachability::Unreachable => "NO".to_string(),
    }
}

fn template_cmd(a: &TemplateArgs) -> Outcome {
    let sys = TemplateSubshift::parse(&read_file(&a.file)?)?;
    match a.action {
        TemplateAction::Member => {
            let w = parse_word(a.word.as_deref().ok_or_else(|| usage("--word is required"))?)?;
            finish(String::new(), if sys.member(&w) { "YES" } else { "NO" })
        }
        TemplateAction::CbRank => {
            let mut body = String::new();
            let mut cur = sys.clone();
            let mut k = 0;
            while !cur.is_empty() {
                let _ = writeln!(body, "derivative {k}: {} templates", cur.templates().len());
                cur = cur.cb_derivative();
                k += 1;
            }
            finish(body, sys.cb_rank())
        }
        TemplateAction::Halting => {
            let from = parse_clopen(a.from.as_deref(), "from")?;
            let to = parse_clopen(a.to.as_deref(), "to")?;
            finish(String::new(), reach_line(&sys.decide_halting(&from, &to, a.min_j)))
        }
        TemplateAction::Modular => {
            let from = parse_clopen(a.from.as_deref(), "from")?;
            let to = parse_clopen(a.to.as_deref(), "to")?;
            let r = sys.decide_modular(&from, &to, a.residue, a.modulus, a.min_j)?;
            finish(String::new(), reach_line(&r))
        }
        TemplateAction::Counting => {
            let from = parse_clopen(a.from.as_deref(), "from")?;
            let to = parse_clopen(a.to.as_deref(), "to")?;
            let along = parse_clopen(a.along.as_deref(), "along")?;
            let marked = parse_clopen(a.marked.as_deref(), "marked")?;
            finish(String::new(), reach_line(&sys.decide_counting(&from, &to, &along, &marked, a.count)))
        }
        TemplateAction::Tuple => {
            let words = a.words.as_deref().ok_or_else(|| usage("--words is required"))?;
            let tuple = words.split(',').map(|w| parse_word(w.trim())).collect::<Result<Vec<_>>>()?;
            finish(String::new(), if sys.decide_tuple(&tuple)? { "YES" } else { "NO" })
        }
    }
}

fn builtin(system: BuiltinSystem) -> Box<dyn LanguageOracle> {
    match system {
        BuiltinSystem::Sunny => Box::new(
            TemplateOracle::new(TemplateSubshift::parse("L:0 | C:1 | R:0").expect("fixed text")).expect("nonempty"),
        ),
        BuiltinSystem::GoldenMean => Box::new(SftOracle::golden_mean()),
        BuiltinSystem::Fibonacci => Box::new(SubstitutionOracle::fibonacci()),
    }
}

fn order_cmd(a: &OrderArgs, budget: Option<u64>) -> Outcome {
    let oracle = builtin(a.system);
    let budget = budget.unwrap_or(12) as usize;
    let word = |s: Option<&str>, name: &str| -> std::result::Result<Word, Failure> {
        Ok(parse_word(s.ok_or_else(|| usage(format!("--{name} is required")))?)?)
    };
    match a.action {
        OrderAction::Leq => {
            let u = word(a.u.as_deref(), "u")?;
            let v = word(a.v.as_deref(), "v")?;
            match leq_semidecide(oracle.as_ref(), &u, &v, budget)? {
                Semidecision::Proven(b) => finish(String::new(), format!("PROVEN h={} k={}", b.h, b.k)),
                Semidecision::Unknown => finish(String::new(), "UNKNOWN"),
            }
        }
        OrderAction::Generator => {
            let w = word(a.word.as_deref(), "word")?;
            match generator_check(oracle.as_ref(), &w, a.n, budget)? {
                GeneratorCheck::Proven(bounds) => {
                    let mut body = String::new();
                    for b in &bounds {
                        let _ = writeln!(body, "{} <= {}: h={} k={}", format_word(&b.u), format_word(&b.v), b.h, b.k);
                    }
                    finish(body, "PROVEN")
                }
                GeneratorCheck::Unknown(u) => finish(String::new(), format!("UNKNOWN at={}", format_word(&u))),
            }
        }
    }
}

fn load_oracle(path: &str) -> std::result::Result<HaltingOracle, Failure> {
    Ok(HaltingOracle::parse(&read_file(path)?)?)
}

fn check_cap(n: u64, budget: Option<u64>) -> std::result::Result<usize, Failure> {
    let cap = budget.unwrap_or(1 << 22);
    if n > cap {
        return Err(Failure::Budget(format!("window {n} exceeds the budget {cap}")));
    }
    Ok(n as usize)
}

/// Symbols up to the largest one `ψ[-radius, radius]` uses.
fn translt(oracle: HaltingOracle, radius: u64) -> Result<TransitiveLt> {
    let top = *ruler::psi_window(radius).iter().max().expect("nonempty");
    TransitiveLt::with_fibonacci(oracle, top)
}

fn construct_cmd(a: &ConstructArgs, budget: Option<u64>) -> Outcome {
    let oracle = load_oracle(&a.oracle)?;
    let n = check_cap(a.window, budget)?;
    match a.system {
        SystemName::Oneminimal => {
            let mut body = String::new();
            for i in 1..=a.window {
                let x = oneminimal::point(&oracle, i);
                let _ = writeln!(body, "x_{i}: {x}");
            }
            finish(body, oneminimal::templates(&oracle).render().trim_end().replace('\n', " ; "))
        }
        SystemName::Translt => {
            let t = translt(oracle, a.window)?;
            let mw = t.window(a.window)?;
            let body = format!("psi: {}\norigin: {}\n", format_decimal(&mw.psi), mw.window.origin);
            finish(body, format_decimal(&mw.window.word))
        }
        SystemName::Modular => finish(String::new(), format_decimal(&ModularSimple::new(oracle).window(0, n)?.word)),
        SystemName::Counting => finish(String::new(), format_decimal(&Counting::new(oracle).window(0, n)?.word)),
        SystemName::Primorial => {
            let levels = n.min(PRIMORIAL_MAX_LEVELS);
            let p = Primorial::new(oracle, levels, false)?;
            let mut body = String::new();
            for l in &p.levels {
                let k = l.k.map_or("-".to_string(), |k| k.to_string());
                let _ = writeln!(body, "level {}: prime={} k={k} distance={}", l.i, l.prime, l.distance);
            }
            let ds: Vec<String> = p.levels.iter().map(|l| l.distance.to_string()).collect();
            finish(body, ds.join(" "))
        }
        SystemName::Dyck => {
            let t = DyckTower::build(&oracle, n)?;
            let mut body = String::new();
            for l in &t.levels {
                let ins = l.inserted.map_or("-".to_string(), |j| j.to_string());
                let _ = writeln!(body, "level {}: length={} inserted={ins}", l.index, l.length);
            }
            let lens: Vec<String> = t.levels.iter().map(|l| l.length.to_string()).collect();
            finish(body, lens.join(" "))
        }
    }
}

fn decide_cmd(a: &DecideArgs, budget: Option<u64>) -> Outcome {
    let oracle = load_oracle(&a.oracle)?;
    let expected = match a.system {
        SystemName::Oneminimal | SystemName::Translt => Problem::Halting,
        SystemName::Modular | SystemName::Primorial => Problem::Modular,
        SystemName::Counting => Problem::Counting,
        SystemName::Dyck => Problem::Cfl,
    };
    if a.problem != expected {
        return Err(usage(format!("system {:?} encodes the {:?} problem", a.system, expected)));
    }
    let j = a.j;
    let answer = oracle.eventually_halts(j);
    let witness = match a.system {
        SystemName::Oneminimal => {
            if j == 0 {
                return Err(usage("machines are numbered from 1 here"));
            }
            oneminimal::verifier(&oracle, j).map(|(from, d)| format!("from={from} distance={d}"))
        }
        SystemName::Translt => {
            let radius = check_cap(a.window.unwrap_or(64), budget)? as u64;
            let t = translt(oracle.clone(), radius)?;
            let mw = t.window(radius)?;
            let codes = (*mw.psi.iter().max().expect("nonempty") as u64 + 1).ilog2() as u64 + 2;
            (j + 1 < codes && t.verifier(&mw, j as usize)).then(|| format!("block 0 u_{j} ... v_{} in radius {radius}", j + 1))
        }
        SystemName::Modular => {
            if j == 0 {
                return Err(usage("machines are numbered from 1 here"));
            }
            let n = check_cap(a.window.unwrap_or(100_000), budget)?;
            let w = ModularSimple::new(oracle.clone()).window(0, n)?;
            ModularSimple::new(oracle.clone()).verifier(&w, j).then(|| format!("zero run divisible by its prime within {n}"))
        }
        SystemName::Counting => {
            if j == 0 {
                return Err(usage("machines are numbered from 1 here"));
            }
            let n = check_cap(a.window.unwrap_or(100_000), budget)?;
            let c = Counting::new(oracle.clone());
            let w = c.window(0, n)?;
            c.verifier(&w, j as usize).then(|| format!("block with {j} ones within {n}"))
        }
        SystemName::Primorial => {
            let p = Primorial::new(oracle.clone(), PRIMORIAL_MAX_LEVELS, false)?;
            if j as usize >= p.levels.len() {
                return Err(Failure::Budget(format!("only levels below {PRIMORIAL_MAX_LEVELS} are computable")));
            }
            p.symbolic_solver(j as usize).then(|| "two ones at distance 1 modulo the level prime".to_string())
        }
        SystemName::Dyck => {
            let depth = check_cap(a.window.unwrap_or(3), budget)?;
            let t = DyckTower::build(&oracle, depth)?;
            cfl_verifier(&t, j as usize).then(|| format!("stack pattern 3 1^{j} 2 at depth {depth}"))
        }
    };
    let body = format!("witness: {}\n", witness.as_deref().unwrap_or("none"));
    finish(body, if answer { "YES" } else { "NO" })
}

fn selftest(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut body = String::new();
    let mut failures = 0;
    let mut check = |name: &str, ok: bool, body: &mut String| {
        let _ = writeln!(body, "{} {name}", if ok { "PASS" } else { "FAIL" });
        if !ok {
            failures += 1;
        }
    };

    let from = rng.gen_range(0..1000u64);
    let w = ruler::ruler_window(from, from + 64);
    check("ruler window", w.iter().enumerate().all(|(k, &l)| l == ruler::ruler_value(from + k as u64)), &mut body);

    let regex = Regex::parse("@*11@*", &Alphabet::range(2))?;
    let mut agree = true;
    for _ in 0..20 {
        let images: Vec<Word> =
            (0..2).map(|_| (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(0..2)).collect()).collect();
        let tau = Substitution::new(Alphabet::range(2), images)?;
        let nfa = regex.compile(tau.alphabet())?;
        let cert = decide_regular_intersection(&tau, 1, &nfa)?;
        let mut first = None;
        for n in 0..=cert.t + cert.p {
            if tau.iterate_length(1, n)? > 100_000u32.into() {
                break;
            }
            if nfa.accepts(&tau.iterate(1, n)?) {
                first = Some(n);
                break;
            }
        }
        agree &= match cert.verdict {
            Verdict::Yes(n) => first == Some(n),
            Verdict::No => first.is_none(),
        };
    }
    check("substitution model checking", agree, &mut body);

    let sunny = builtin(BuiltinSystem::Sunny);
    let proven = match leq_semidecide(sunny.as_ref(), &[0, 1], &[1], 6)? {
        Semidecision::Proven(b) => b.verify(sunny.as_ref(), b.k + 4)?,
        Semidecision::Unknown => false,
    };
    check("generating order bound", proven, &mut body);

    let oracle = HaltingOracle::random(seed, 1, 6, 4);
    let counting = Counting::new(oracle.clone());
    let window = counting.window(0, 20_000)?;
    let scans = (1..=3).all(|j| !counting.verifier(&window, j) || counting.solver(j as u64));
    check("counting witnesses are sound", scans, &mut body);

    let result = if failures == 0 { "PASS".to_string() } else { format!("FAIL {failures}") };
    finish(body, result)
}
