//! The `nsctl` command line.
//!
//! Reports are line-oriented `key value` text prefixed by a `# nsctl ...`
//! echo and the SHA-256 of the input. Exact values are printed as reduced
//! `p/q`; floats carry 12 significant digits. Exit codes: 0 pass, 1 check
//! failed, 2 bad input or usage.

use crate::bell::{self, ChshVariant};
use crate::catalog;
use crate::dist::{joint_from_prior, Alphabets, ObservationPrior, Side, Strategy};
use crate::format::{emit_strategy, parse_strategy};
use crate::mechanisms::{
    self, empirical_tv, induce_active, one_way_protocol, paper_active_mechanism, EmpiricalTable,
    Source,
};
use crate::nosignaling::{
    check_no_signaling, check_posterior, conditional_mutual_information, factorization_holds,
    is_passive, CmiQuery, NsReport,
};
use crate::polytope::{
    binary_local_vertex, binary_local_vertices, binary_nonlocal_vertices,
    decomposition_to_mechanism, local_membership, Membership,
};
use crate::rational::{self, int, rat, Rational};
use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};
use std::io::{Read, Write};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Samples per context below which `simulate` adds a note.
pub const RECOMMENDED_SAMPLES_PER_CONTEXT: u64 = 50_000;

#[derive(Debug, Parser)]
#[command(
    name = "nsctl",
    version,
    about = "Exact no-signaling, locality and CHSH toolkit"
)]
struct Cli {
    /// Append aligned human-readable tables.
    #[arg(long, global = true)]
    human: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct Input {
    /// Strategy file, or `-` for standard input.
    file: Option<String>,
    /// Built-in example instead of a file.
    #[arg(long)]
    name: Option<String>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PriorChoice {
    Uniform,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Expect {
    Feasible,
    Infeasible,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the no-signaling equalities.
    CheckNs {
        #[command(flatten)]
        input: Input,
    },
    /// Check the posterior conditions and report conditional mutual information.
    Posterior {
        #[command(flatten)]
        input: Input,
        /// Override the prior; `table` requires one in the file.
        #[arg(long, value_enum)]
        prior: Option<PriorChoice>,
    },
    /// Decide membership in the local polytope.
    Membership {
        #[command(flatten)]
        input: Input,
        /// Print the convex decomposition when feasible.
        #[arg(long)]
        decomposition: bool,
        /// Print the separating functional when infeasible.
        #[arg(long)]
        certificate: bool,
        /// Exit 1 unless the outcome matches.
        #[arg(long, value_enum)]
        expect: Option<Expect>,
    },
    /// Evaluate CHSH variants.
    Chsh {
        #[command(flatten)]
        input: Input,
        /// Variant bits alpha beta gamma.
        #[arg(long, num_args = 3, value_names = ["ALPHA", "BETA", "GAMMA"], conflicts_with = "all")]
        variant: Option<Vec<u8>>,
        /// All eight variants and the maximum.
        #[arg(long)]
        all: bool,
    },
    /// Print the binary vertex catalog in file format.
    Vertices {
        #[arg(
            long,
            conflicts_with = "nonlocal",
            required_unless_present = "nonlocal"
        )]
        local: bool,
        #[arg(long)]
        nonlocal: bool,
    },
    /// Sample a mechanism and compare with its exact strategy.
    Simulate {
        /// paper-active, one-way, or file:PATH (a local strategy).
        #[arg(long)]
        mechanism: String,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 0.01)]
        tv_tol: f64,
        #[arg(long, default_value_t = 1)]
        chunks: usize,
    },
    /// Print a built-in example in file format.
    Examples {
        #[arg(long)]
        name: String,
    },
    /// Run every check on the built-in examples, mechanisms and vertices.
    VerifyPaper {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 200_000)]
        trials: u64,
    },
}

/// `Err` always means exit code 2.
type CmdResult = anyhow::Result<i32>;

struct Loaded {
    strategy: Strategy,
    prior: Option<ObservationPrior>,
    digest: String,
    /// Built-in example whose prior is an assumption.
    assumed_prior: bool,
}

fn read_source(path: &str) -> anyhow::Result<String> {
    if path == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .context("reading standard input")?;
        Ok(text)
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {path}"))
    }
}

fn sha256_hex(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

fn load(input: &Input) -> anyhow::Result<Loaded> {
    let (text, assumed_prior) = match (&input.file, &input.name) {
        (Some(path), None) => (read_source(path)?, false),
        (None, Some(name)) => {
            let ex = catalog::get_example(name)?;
            (emit_strategy(&ex.strategy, None), name == "binary2")
        }
        _ => bail!("give exactly one of FILE or --name"),
    };
    let (strategy, prior) = parse_strategy(&text)?;
    Ok(Loaded {
        strategy,
        prior,
        digest: sha256_hex(&text),
        assumed_prior,
    })
}

struct Report<'w> {
    out: &'w mut dyn Write,
}

impl Report<'_> {
    fn line(&mut self, text: impl AsRef<str>) {
        let _ = writeln!(self.out, "{}", text.as_ref());
    }

    fn raw(&mut self, text: &str) {
        let _ = write!(self.out, "{text}");
    }

    fn header(&mut self, argv: &[String], digest: Option<&str>) {
        self.line(format!(
            "# nsctl {}",
            argv.iter().skip(1).cloned().collect::<Vec<_>>().join(" ")
        ));
        if let Some(d) = digest {
            self.line(format!("# input sha256={d}"));
        }
    }

    fn verdict(&mut self, pass: bool) -> i32 {
        self.line(format!("verdict {}", if pass { "PASS" } else { "FAIL" }));
        if pass {
            EXIT_PASS
        } else {
            EXIT_FAIL
        }
    }
}

fn fmt(r: &Rational) -> String {
    rational::format(r)
}

fn side_name(side: Side) -> &'static str {
    match side {
        Side::Venkat => "venkat",
        Side::Vivek => "vivek",
    }
}

/// Left-aligned columns separated by two spaces.
fn aligned(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| {
            rows.iter()
                .filter_map(|r| r.get(c))
                .map(String::len)
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for r in rows {
        let cells: Vec<String> = r
            .iter()
            .enumerate()
            .map(|(c, v)| format!("{v:<w$}", w = widths[c]))
            .collect();
        out.push_str("  ");
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

/// One block per context, rows `x`, columns `y`.
fn human_grid(al: Alphabets, cell: impl Fn(usize, usize, usize, usize) -> String) -> String {
    let mut rows = Vec::new();
    for (a, b) in al.contexts() {
        let mut head = vec![format!("a={a} b={b}")];
        head.extend((0..al.n_y).map(|y| format!("y={y}")));
        rows.push(head);
        for x in 0..al.n_x {
            let mut r = vec![format!("x={x}")];
            r.extend((0..al.n_y).map(|y| cell(a, b, x, y)));
            rows.push(r);
        }
    }
    aligned(&rows)
}

fn human_strategy(s: &Strategy) -> String {
    human_grid(s.alphabets(), |a, b, x, y| fmt(s.get(a, b, x, y)))
}

fn report_ns(rep: &mut Report<'_>, label: &str, r: &NsReport) {
    rep.line(format!(
        "{label} {}",
        if r.holds { "holds" } else { "violated" }
    ));
    for v in &r.violations {
        let other = v.other.map_or(String::new(), |o| format!(" other={o}"));
        rep.line(format!(
            "violation side={} a={} b={}{} action={} lhs={} rhs={}",
            side_name(v.side),
            v.a,
            v.b,
            other,
            v.action,
            fmt(&v.lhs),
            fmt(&v.rhs)
        ));
    }
}

fn cmd_check_ns(rep: &mut Report<'_>, argv: &[String], input: &Input, human: bool) -> CmdResult {
    let l = load(input)?;
    rep.header(argv, Some(&l.digest));
    let r = check_no_signaling(&l.strategy);
    report_ns(rep, "no-signaling", &r);
    if human {
        rep.raw(&human_strategy(&l.strategy));
    }
    Ok(rep.verdict(r.holds))
}

fn cmd_posterior(
    rep: &mut Report<'_>,
    argv: &[String],
    input: &Input,
    choice: Option<PriorChoice>,
    human: bool,
) -> CmdResult {
    let l = load(input)?;
    let al = l.strategy.alphabets();
    let (prior, assumed) = match (choice, l.prior) {
        (Some(PriorChoice::Table), None) => {
            return Err(anyhow!(
                "--prior table given but the input declares `prior uniform`"
            ))
        }
        (Some(PriorChoice::Table), Some(p)) | (None, Some(p)) => (p, false),
        (Some(PriorChoice::Uniform), _) | (None, None) => {
            (ObservationPrior::uniform(al.n_a, al.n_b), true)
        }
    };
    rep.header(argv, Some(&l.digest));
    if prior.is_uniform() {
        rep.line("prior uniform");
    } else {
        let entries: Vec<String> = prior.entries().iter().map(fmt).collect();
        rep.line(format!("prior table {}", entries.join(" ")));
    }
    if assumed && l.assumed_prior {
        rep.line("# note: this example does not specify a prior; uniform is assumed");
    }
    let r = check_posterior(&l.strategy, &prior)?;
    report_ns(rep, "posterior", &r);
    let ns = check_no_signaling(&l.strategy).holds;
    rep.line(format!(
        "no-signaling {}",
        if ns { "holds" } else { "violated" }
    ));
    let joint = joint_from_prior(&l.strategy, &prior)?;
    for (q, label) in [
        (CmiQuery::ActionXObservationB, "I(X;B|A)"),
        (CmiQuery::ActionYObservationA, "I(Y;A|B)"),
    ] {
        rep.line(format!(
            "cmi {label} {} factorizes={}",
            rational::format_float(conditional_mutual_information(&joint, q)),
            factorization_holds(&joint, q)
        ));
    }
    if human {
        rep.raw(&human_strategy(&l.strategy));
    }
    Ok(rep.verdict(r.holds))
}

fn cmd_membership(
    rep: &mut Report<'_>,
    argv: &[String],
    input: &Input,
    decomposition: bool,
    certificate: bool,
    expect: Option<Expect>,
    human: bool,
) -> CmdResult {
    let l = load(input)?;
    let m = local_membership(&l.strategy)?;
    rep.header(argv, Some(&l.digest));
    let outcome = match &m {
        Membership::Feasible(d) => {
            rep.line(format!("membership feasible atoms={}", d.atoms.len()));
            if decomposition {
                rep.raw(&d.emit());
            }
            if human {
                let mut rows = vec![vec!["weight".to_string(), "f".to_string(), "g".to_string()]];
                for (w, det) in &d.atoms {
                    rows.push(vec![fmt(w), format!("{:?}", det.f), format!("{:?}", det.g)]);
                }
                rep.raw(&aligned(&rows));
            }
            Expect::Feasible
        }
        Membership::Infeasible(c) => {
            rep.line(format!(
                "membership infeasible value={} localmax={} verified={}",
                fmt(&c.value_on_strategy),
                fmt(&c.max_on_local),
                c.verify(&l.strategy)
            ));
            if certificate {
                rep.raw(&c.emit());
            }
            if human {
                let f = &c.functional;
                rep.raw(&human_grid(f.alphabets(), |a, b, x, y| {
                    fmt(f.coeff(a, b, x, y))
                }));
            }
            Expect::Infeasible
        }
    };
    match expect {
        None => Ok(EXIT_PASS),
        Some(e) => Ok(rep.verdict(e == outcome)),
    }
}

fn cmd_chsh(
    rep: &mut Report<'_>,
    argv: &[String],
    input: &Input,
    variant: Option<Vec<u8>>,
    all: bool,
    human: bool,
) -> CmdResult {
    let l = load(input)?;
    let s = &l.strategy;
    if !s.alphabets().is_binary() {
        return Err(anyhow!(bell::BellError::NotBinary(s.alphabets())));
    }
    let chosen = match variant.as_deref() {
        None => ChshVariant::STANDARD,
        Some(&[a, b, g]) => {
            ChshVariant::from_bits(a, b, g).ok_or_else(|| anyhow!("variant bits must be 0 or 1"))?
        }
        Some(_) => return Err(anyhow!("--variant takes three bits")),
    };
    rep.header(argv, Some(&l.digest));
    let mut corr_rows = vec![vec!["".to_string(), "b=0".to_string(), "b=1".to_string()]];
    for a in 0..2 {
        let mut row = vec![format!("a={a}")];
        for b in 0..2 {
            let c = bell::correlator(s, a, b)?;
            rep.line(format!("correlator {a} {b} {}", fmt(&c)));
            row.push(fmt(&c));
        }
        corr_rows.push(row);
    }
    let verdict = |v: &Rational| if *v > int(2) { "VIOLATES" } else { "SATISFIES" };
    let variants: Vec<ChshVariant> = if all {
        ChshVariant::all().collect()
    } else {
        vec![chosen]
    };
    for v in variants {
        let value = bell::chsh_value(s, v)?;
        rep.line(format!(
            "chsh variant={v} value={} verdict={}",
            fmt(&value),
            verdict(&value)
        ));
    }
    if all {
        let (v, value) = bell::max_chsh_violation(s)?;
        rep.line(format!(
            "max variant={v} value={} verdict={}",
            fmt(&value),
            verdict(&value)
        ));
    }
    if human {
        rep.raw(&aligned(&corr_rows));
    }
    Ok(EXIT_PASS)
}

fn cmd_vertices(rep: &mut Report<'_>, local: bool) -> CmdResult {
    if local {
        for ((al, be, ga, de), s) in binary_local_vertices() {
            rep.line(format!("# local vertex x=({al}a+{be}) y=({ga}b+{de})"));
            rep.raw(&emit_strategy(&s, None));
        }
    } else {
        for (v, s) in binary_nonlocal_vertices() {
            rep.line(format!("# nonlocal vertex {v}"));
            rep.raw(&emit_strategy(&s, None));
        }
    }
    Ok(EXIT_PASS)
}

fn cmd_examples(rep: &mut Report<'_>, name: &str) -> CmdResult {
    let ex = catalog::get_example(name)?;
    rep.raw(&emit_strategy(&ex.strategy, None));
    Ok(EXIT_PASS)
}

struct SimOutcome {
    table: EmpiricalTable,
    exact: Strategy,
    max_tv: Option<f64>,
    per_context: Vec<Option<f64>>,
}

fn run_simulation(
    source: Source<'_>,
    prior: &ObservationPrior,
    trials: u64,
    seed: u64,
    chunks: usize,
) -> anyhow::Result<SimOutcome> {
    let table = mechanisms::simulate_chunked(source, prior, trials, seed, chunks)?;
    let exact = source.exact_strategy();
    let tv = empirical_tv(&table, &exact)?;
    Ok(SimOutcome {
        table,
        exact,
        max_tv: tv.max,
        per_context: tv.per_context,
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    rep: &mut Report<'_>,
    argv: &[String],
    mechanism: &str,
    trials: u64,
    seed: u64,
    tv_tol: f64,
    chunks: usize,
    human: bool,
) -> CmdResult {
    if trials == 0 {
        return Err(anyhow!("--trials must be at least 1"));
    }
    if chunks == 0 {
        return Err(anyhow!("--chunks must be at least 1"));
    }
    if !(tv_tol.is_finite() && tv_tol >= 0.0) {
        return Err(anyhow!("--tv-tol must be a nonnegative number"));
    }
    let active = paper_active_mechanism();
    let passive;
    let (source, prior, digest) = match mechanism {
        "paper-active" => (
            Source::Active(&active),
            ObservationPrior::uniform(2, 2),
            None,
        ),
        "one-way" => (Source::OneWay, ObservationPrior::uniform(2, 2), None),
        other => {
            let Some(path) = other.strip_prefix("file:") else {
                return Err(anyhow!(
                    "unknown mechanism {other:?}; use paper-active, one-way or file:PATH"
                ));
            };
            let text = read_source(path)?;
            let (s, prior) = parse_strategy(&text)?;
            let Membership::Feasible(d) = local_membership(&s)? else {
                return Err(anyhow!("{path}: strategy is outside the local polytope; no passive mechanism realizes it"));
            };
            passive = decomposition_to_mechanism(&d);
            let al = s.alphabets();
            let prior = prior.unwrap_or_else(|| ObservationPrior::uniform(al.n_a, al.n_b));
            (Source::Passive(&passive), prior, Some(sha256_hex(&text)))
        }
    };
    let out = run_simulation(source, &prior, trials, seed, chunks)?;
    rep.header(argv, digest.as_deref());
    rep.line(format!("mechanism {mechanism}"));
    rep.line(format!("trials {trials} chunks {chunks}"));
    rep.raw(&out.table.emit());
    let al = out.table.alphabets;
    let mut rows = vec![vec!["a".into(), "b".into(), "n".into(), "tv".into()]];
    for ((a, b), tv) in al.contexts().zip(&out.per_context) {
        let shown = tv.map_or("absent".to_string(), rational::format_float);
        rep.line(format!("tv {a} {b} {shown}"));
        rows.push(vec![
            a.to_string(),
            b.to_string(),
            out.table.trials(a, b).to_string(),
            shown,
        ]);
    }
    let min_n = al
        .contexts()
        .map(|(a, b)| out.table.trials(a, b))
        .filter(|&n| n > 0)
        .min()
        .unwrap_or(0);
    if min_n < RECOMMENDED_SAMPLES_PER_CONTEXT {
        rep.line(format!(
            "# note: smallest context has {min_n} samples, below {RECOMMENDED_SAMPLES_PER_CONTEXT}"
        ));
    }
    let max = out.max_tv.unwrap_or(0.0);
    rep.line(format!(
        "tv-max {} tol {}",
        rational::format_float(max),
        rational::format_float(tv_tol)
    ));
    if human {
        rep.raw(&aligned(&rows));
        rep.raw(&human_strategy(&out.exact));
    }
    Ok(rep.verdict(max <= tv_tol))
}

/// The named self-checks run by `verify-paper`.
pub fn builtin_checks(seed: u64, trials: u64) -> Vec<(String, bool)> {
    let mut checks: Vec<(String, bool)> = Vec::new();
    let mut push = |name: &str, ok: bool| checks.push((name.to_string(), ok));

    let ab3 = catalog::example_ab3();
    let bin2 = catalog::example_binary2();
    let uniform4 = ObservationPrior::uniform(2, 2);

    for (name, s) in [("ab3", &ab3), ("binary2", &bin2)] {
        push(&format!("check-ns {name}"), check_no_signaling(s).holds);
        push(
            &format!("posterior {name}"),
            check_posterior(s, &uniform4).is_ok_and(|r| r.holds),
        );
        let cert_ok = match local_membership(s) {
            Ok(Membership::Infeasible(c)) => c.verify(s),
            _ => false,
        };
        push(
            &format!("membership {name} infeasible with verified certificate"),
            cert_ok,
        );
    }

    let correlators: Option<Vec<Rational>> = [(0, 0), (0, 1), (1, 0), (1, 1)]
        .iter()
        .map(|&(a, b)| bell::correlator(&bin2, a, b).ok())
        .collect();
    push(
        "chsh binary2 correlators 1/3 1 1/3 -1",
        correlators == Some(vec![rat(1, 3), int(1), rat(1, 3), int(-1)]),
    );
    push(
        "chsh binary2 standard value 8/3",
        bell::chsh_value(&bin2, ChshVariant::STANDARD) == Ok(rat(8, 3)),
    );

    let locals = binary_local_vertices();
    push("vertices local count 16", locals.len() == 16);
    push(
        "vertices local feasible and chsh <= 2",
        locals.iter().all(|(label, s)| {
            matches!(local_membership(s), Ok(Membership::Feasible(_)))
                && ChshVariant::all().all(|v| bell::chsh_value(s, v).is_ok_and(|c| c <= int(2)))
                && crate::polytope::induce_deterministic(&binary_local_vertex(*label)) == *s
        }),
    );
    let nonlocals = binary_nonlocal_vertices();
    push("vertices nonlocal count 8", nonlocals.len() == 8);
    push(
        "vertices nonlocal infeasible and chsh = 4 on own variant",
        nonlocals.iter().all(|(v, s)| {
            matches!(local_membership(s), Ok(Membership::Infeasible(ref c)) if c.verify(s))
                && bell::chsh_value(s, *v) == Ok(int(4))
                && check_no_signaling(s).holds
        }),
    );

    let active = paper_active_mechanism();
    push(
        "mechanism paper-active reproduces binary2",
        induce_active(&active) == bin2,
    );
    push(
        "mechanism paper-active is not passive",
        active
            .w_joint(&uniform4)
            .is_ok_and(|wj| !is_passive(&wj).passive),
    );
    let one_way = one_way_protocol();
    push(
        "mechanism one-way reproduces binary2",
        one_way.strategy == bin2,
    );
    let branch = |w: usize, a: usize, b: usize| one_way.branches[w].context(a, b).to_vec();
    let point = |k: usize| (0..4).map(|i| int((i == k) as i64)).collect::<Vec<_>>();
    push(
        "mechanism one-way w=1 and w=2 tables",
        branch(0, 0, 0) == point(2)
            && branch(0, 0, 1) == point(3)
            && branch(0, 1, 0) == point(0)
            && branch(0, 1, 1) == point(1)
            && branch(1, 0, 0) == point(0)
            && branch(1, 0, 1) == point(0)
            && branch(1, 1, 0) == point(2)
            && branch(1, 1, 1) == point(2),
    );
    let half = rat(1, 2);
    let diag = vec![half.clone(), int(0), int(0), half.clone()];
    let anti = vec![int(0), half.clone(), half, int(0)];
    push(
        "mechanism one-way w=3 tables",
        branch(2, 0, 0) == diag
            && branch(2, 0, 1) == diag
            && branch(2, 1, 0) == diag
            && branch(2, 1, 1) == anti,
    );

    let active_sim = run_simulation(Source::Active(&active), &uniform4, trials, seed, 1);
    let one_way_sim = run_simulation(Source::OneWay, &uniform4, trials, seed, 1);
    for (name, sim) in [("paper-active", active_sim), ("one-way", one_way_sim)] {
        push(
            &format!("simulate {name} tv <= 0.01"),
            sim.is_ok_and(|o| o.max_tv.is_some_and(|m| m <= 0.01)),
        );
    }
    checks
}

fn cmd_verify(rep: &mut Report<'_>, argv: &[String], seed: u64, trials: u64) -> CmdResult {
    if trials == 0 {
        return Err(anyhow!("--trials must be at least 1"));
    }
    rep.header(argv, None);
    let checks = builtin_checks(seed, trials);
    for (name, ok) in &checks {
        rep.line(format!("{} {name}", if *ok { "PASS" } else { "FAIL" }));
    }
    Ok(rep.verdict(checks.iter().all(|(_, ok)| *ok)))
}

/// Runs `nsctl` with `argv` (including the program name) and returns the
/// exit code. Reports go to `out`, diagnostics to `err`.
pub fn run(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INPUT
            } else {
                EXIT_PASS
            };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let human = cli.human;
    let mut rep = Report { out };
    let result = match &cli.command {
        Command::CheckNs { input } => cmd_check_ns(&mut rep, argv, input, human),
        Command::Posterior { input, prior } => cmd_posterior(&mut rep, argv, input, *prior, human),
        Command::Membership {
            input,
            decomposition,
            certificate,
            expect,
        } => cmd_membership(
            &mut rep,
            argv,
            input,
            *decomposition,
            *certificate,
            *expect,
            human,
        ),
        Command::Chsh {
            input,
            variant,
            all,
        } => cmd_chsh(&mut rep, argv, input, variant.clone(), *all, human),
        Command::Vertices { local, .. } => cmd_vertices(&mut rep, *local),
        Command::Simulate {
            mechanism,
            trials,
            seed,
            tv_tol,
            chunks,
        } => cmd_simulate(
            &mut rep, argv, mechanism, *trials, *seed, *tv_tol, *chunks, human,
        ),
        Command::Examples { name } => cmd_examples(&mut rep, name),
        Command::VerifyPaper { seed, trials } => cmd_verify(&mut rep, argv, *seed, *trials),
    };
    let _ = rep.out.flush();
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "nsctl: error: {e:#}");
            EXIT_INPUT
        }
    }
}
