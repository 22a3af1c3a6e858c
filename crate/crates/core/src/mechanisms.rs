//! Mechanisms that generate strategies: independent local randomization,
//! passive and active common randomness, and a one-way communication
//! protocol. Each can be induced exactly or simulated with a seeded sampler.

use crate::dist::{Alphabets, DistError, ObservationPrior, Strategy};
use crate::nosignaling::WJoint;
use crate::rational::{self, int, rat, Rational};
use crate::sampling::{self, ExactSampler, SimRng};
use num_traits::{One, Signed, Zero};
use std::fmt::Write;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MechanismError {
    #[error("{table} row {row:?} sums to {total}, not 1")]
    RowNotNormalized {
        table: &'static str,
        row: Vec<usize>,
        total: Rational,
    },
    #[error("{table} has a negative entry at {row:?}")]
    NegativeEntry {
        table: &'static str,
        row: Vec<usize>,
    },
    #[error("{table} has inconsistent dimensions")]
    Shape { table: &'static str },
    #[error("trials must be at least 1")]
    ZeroTrials,
    #[error("chunk count must be at least 1")]
    ZeroChunks,
    #[error(transparent)]
    Dist(#[from] DistError),
}

fn check_row(
    table: &'static str,
    row: &[Rational],
    index: Vec<usize>,
) -> Result<(), MechanismError> {
    if row.iter().any(|v| v.is_negative()) {
        return Err(MechanismError::NegativeEntry { table, row: index });
    }
    let total: Rational = row.iter().sum();
    if !total.is_one() {
        return Err(MechanismError::RowNotNormalized {
            table,
            row: index,
            total,
        });
    }
    Ok(())
}

/// Validates `[outer][inner][k]` conditional tables, returning `(outer, inner, k)` sizes.
fn check_conditional(
    table: &'static str,
    rows: &[Vec<Vec<Rational>>],
) -> Result<(usize, usize, usize), MechanismError> {
    let outer = rows.len();
    let inner = rows.first().map_or(0, Vec::len);
    let width = rows.first().and_then(|r| r.first()).map_or(0, Vec::len);
    if outer == 0 || inner == 0 || width == 0 {
        return Err(MechanismError::Shape { table });
    }
    for (i, block) in rows.iter().enumerate() {
        if block.len() != inner {
            return Err(MechanismError::Shape { table });
        }
        for (j, row) in block.iter().enumerate() {
            if row.len() != width {
                return Err(MechanismError::Shape { table });
            }
            check_row(table, row, vec![i, j])?;
        }
    }
    Ok((outer, inner, width))
}

/// `P(x, y | a, b) = P(x | a) P(y | b)`.
pub fn induce_behavioral(
    p_x_given_a: &[Vec<Rational>],
    p_y_given_b: &[Vec<Rational>],
) -> Result<Strategy, MechanismError> {
    let (_, n_a, n_x) = check_conditional("P(x|a)", std::slice::from_ref(&p_x_given_a.to_vec()))?;
    let (_, n_b, n_y) = check_conditional("P(y|b)", std::slice::from_ref(&p_y_given_b.to_vec()))?;
    let al = Alphabets::new(n_a, n_b, n_x, n_y)?;
    Ok(Strategy::from_fn(al, |a, b, x, y| {
        &p_x_given_a[a][x] * &p_y_given_b[b][y]
    })?)
}

/// Common randomness `W ~ P(w)` drawn independently of the observations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PassiveMechanism {
    alphabets: Alphabets,
    p_w: Vec<Rational>,
    /// `[w][a][x]`
    p_x_given_aw: Vec<Vec<Vec<Rational>>>,
    /// `[w][b][y]`
    p_y_given_bw: Vec<Vec<Vec<Rational>>>,
}

impl PassiveMechanism {
    pub fn new(
        p_w: Vec<Rational>,
        p_x_given_aw: Vec<Vec<Vec<Rational>>>,
        p_y_given_bw: Vec<Vec<Vec<Rational>>>,
    ) -> Result<Self, MechanismError> {
        if p_w.is_empty() {
            return Err(MechanismError::Shape { table: "P(w)" });
        }
        check_row("P(w)", &p_w, vec![])?;
        let (wx, n_a, n_x) = check_conditional("P(x|a,w)", &p_x_given_aw)?;
        let (wy, n_b, n_y) = check_conditional("P(y|b,w)", &p_y_given_bw)?;
        if wx != p_w.len() {
            return Err(MechanismError::Shape { table: "P(x|a,w)" });
        }
        if wy != p_w.len() {
            return Err(MechanismError::Shape { table: "P(y|b,w)" });
        }
        Ok(Self {
            alphabets: Alphabets::new(n_a, n_b, n_x, n_y)?,
            p_w,
            p_x_given_aw,
            p_y_given_bw,
        })
    }

    pub fn alphabets(&self) -> Alphabets {
        self.alphabets
    }

    pub fn n_w(&self) -> usize {
        self.p_w.len()
    }

    pub fn p_w(&self) -> &[Rational] {
        &self.p_w
    }

    pub fn p_x_given_aw(&self) -> &[Vec<Vec<Rational>>] {
        &self.p_x_given_aw
    }

    pub fn p_y_given_bw(&self) -> &[Vec<Vec<Rational>>] {
        &self.p_y_given_bw
    }
}

/// `P(x, y | a, b) = sum_w P(w) P(x | a, w) P(y | b, w)`.
pub fn induce_passive(m: &PassiveMechanism) -> Strategy {
    Strategy::from_fn(m.alphabets, |a, b, x, y| {
        (0..m.n_w())
            .map(|w| &m.p_w[w] * &m.p_x_given_aw[w][a][x] * &m.p_y_given_bw[w][b][y])
            .sum()
    })
    .expect("mixture of distributions is normalized")
}

/// Common randomness whose distribution `P(w | a, b)` depends on the
/// observations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActiveMechanism {
    alphabets: Alphabets,
    n_w: usize,
    /// `[a][b][w]`
    p_w_given_ab: Vec<Vec<Vec<Rational>>>,
    p_x_given_aw: Vec<Vec<Vec<Rational>>>,
    p_y_given_bw: Vec<Vec<Vec<Rational>>>,
}

impl ActiveMechanism {
    pub fn new(
        p_w_given_ab: Vec<Vec<Vec<Rational>>>,
        p_x_given_aw: Vec<Vec<Vec<Rational>>>,
        p_y_given_bw: Vec<Vec<Vec<Rational>>>,
    ) -> Result<Self, MechanismError> {
        let (n_a, n_b, n_w) = check_conditional("P(w|a,b)", &p_w_given_ab)?;
        let (wx, xa, n_x) = check_conditional("P(x|a,w)", &p_x_given_aw)?;
        let (wy, yb, n_y) = check_conditional("P(y|b,w)", &p_y_given_bw)?;
        if wx != n_w || xa != n_a {
            return Err(MechanismError::Shape { table: "P(x|a,w)" });
        }
        if wy != n_w || yb != n_b {
            return Err(MechanismError::Shape { table: "P(y|b,w)" });
        }
        Ok(Self {
            alphabets: Alphabets::new(n_a, n_b, n_x, n_y)?,
            n_w,
            p_w_given_ab,
            p_x_given_aw,
            p_y_given_bw,
        })
    }

    /// The same tables with `P(w | a, b) = P(w)` for every context.
    pub fn from_passive(m: &PassiveMechanism) -> Self {
        let al = m.alphabets;
        Self {
            alphabets: al,
            n_w: m.n_w(),
            p_w_given_ab: vec![vec![m.p_w.clone(); al.n_b]; al.n_a],
            p_x_given_aw: m.p_x_given_aw.clone(),
            p_y_given_bw: m.p_y_given_bw.clone(),
        }
    }

    pub fn alphabets(&self) -> Alphabets {
        self.alphabets
    }

    pub fn n_w(&self) -> usize {
        self.n_w
    }

    pub fn p_w_given(&self, a: usize, b: usize) -> &[Rational] {
        &self.p_w_given_ab[a][b]
    }

    /// `P(w, a, b) = P(w | a, b) P(a, b)`.
    pub fn w_joint(&self, prior: &ObservationPrior) -> Result<WJoint, MechanismError> {
        if !prior.matches(&self.alphabets) {
            return Err(DistError::AlphabetMismatch.into());
        }
        let al = self.alphabets;
        let mut table = Vec::with_capacity(self.n_w * al.num_contexts());
        for w in 0..self.n_w {
            for (a, b) in al.contexts() {
                table.push(&self.p_w_given_ab[a][b][w] * prior.get(a, b));
            }
        }
        Ok(WJoint::new(self.n_w, al.n_a, al.n_b, table)?)
    }
}

/// `P(x, y | a, b) = sum_w P(w | a, b) P(x | a, w) P(y | b, w)`.
pub fn induce_active(m: &ActiveMechanism) -> Strategy {
    Strategy::from_fn(m.alphabets, |a, b, x, y| {
        (0..m.n_w)
            .map(|w| &m.p_w_given_ab[a][b][w] * &m.p_x_given_aw[w][a][x] * &m.p_y_given_bw[w][b][y])
            .sum()
    })
    .expect("mixture of distributions is normalized")
}

fn point(n: usize, k: usize) -> Vec<Rational> {
    (0..n).map(|i| int((i == k) as i64)).collect()
}

/// Four-valued active common randomness reproducing the `binary2`
/// catalog strategy. Index `w` here is the value `w + 1`.
///
/// ```text
/// P(w | 0,0) = (1/3, 1/2, 1/6, 0)      P(w | 0,1) = (1/4, 1/4, 1/4, 1/4)
/// P(w | 1,0) = (1/2, 1/3, 0, 1/6)      P(w | 1,1) = (1/4, 1/4, 1/4, 1/4)
/// x = a + 1 for w in {1,3}, x = a for w in {2,4}
/// y = b, 0, 1, b + 1 for w = 1, 2, 3, 4
/// ```
pub fn paper_active_mechanism() -> ActiveMechanism {
    let quarter = vec![rat(1, 4); 4];
    let p_w_given_ab = vec![
        vec![
            vec![rat(1, 3), rat(1, 2), rat(1, 6), int(0)],
            quarter.clone(),
        ],
        vec![vec![rat(1, 2), rat(1, 3), int(0), rat(1, 6)], quarter],
    ];
    let p_x = (0..4)
        .map(|w| {
            (0..2)
                .map(|a| point(2, if w % 2 == 0 { a ^ 1 } else { a }))
                .collect()
        })
        .collect();
    let p_y = (0..4)
        .map(|w| {
            (0..2)
                .map(|b| {
                    let y = match w {
                        0 => b,
                        1 => 0,
                        2 => 1,
                        _ => b ^ 1,
                    };
                    point(2, y)
                })
                .collect()
        })
        .collect();
    ActiveMechanism::new(p_w_given_ab, p_x, p_y).expect("constant tables are valid")
}

/// The one-way protocol: `W` uniform on three values;
/// `w=1`: `x = a+1, y = b`; `w=2`: `x = a, y = 0`; `w=3`: `x` uniform and
/// venkat sends `(a, x)` so that vivek plays `y = x + a.b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneWayProtocol {
    pub strategy: Strategy,
    /// `P(x, y | a, b, w)` for `w = 1, 2, 3` at indices 0, 1, 2.
    pub branches: Vec<Strategy>,
}

pub const ONE_WAY_BRANCHES: usize = 3;

fn one_way_branch(w: usize) -> Strategy {
    Strategy::from_fn(Alphabets::binary(), |a, b, x, y| match w {
        0 => int((x == (a ^ 1) && y == b) as i64),
        1 => int((x == a && y == 0) as i64),
        _ => {
            if y == x ^ (a & b) {
                rat(1, 2)
            } else {
                int(0)
            }
        }
    })
    .expect("branch tables are normalized")
}

pub fn one_way_protocol() -> OneWayProtocol {
    let branches: Vec<Strategy> = (0..ONE_WAY_BRANCHES).map(one_way_branch).collect();
    let weight = rat(1, ONE_WAY_BRANCHES as i64);
    let strategy = Strategy::mixture(branches.iter().map(|s| (weight.clone(), s)))
        .expect("uniform mixture of branches");
    OneWayProtocol { strategy, branches }
}

/// What [`simulate`] samples from.
#[derive(Debug, Clone, Copy)]
pub enum Source<'a> {
    Passive(&'a PassiveMechanism),
    Active(&'a ActiveMechanism),
    OneWay,
}

impl Source<'_> {
    pub fn alphabets(&self) -> Alphabets {
        match self {
            Source::Passive(m) => m.alphabets,
            Source::Active(m) => m.alphabets,
            Source::OneWay => Alphabets::binary(),
        }
    }

    /// The strategy the source generates.
    pub fn exact_strategy(&self) -> Strategy {
        match self {
            Source::Passive(m) => induce_passive(m),
            Source::Active(m) => induce_active(m),
            Source::OneWay => one_way_protocol().strategy,
        }
    }
}

/// Counts of sampled `(a, b, x, y)` outcomes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmpiricalTable {
    pub alphabets: Alphabets,
    /// Flat `(a, b, x, y)` order.
    pub counts: Vec<u64>,
    /// Indexed `a * n_b + b`.
    pub trials_per_context: Vec<u64>,
    pub seed: u64,
    pub generator_name: String,
}

impl EmpiricalTable {
    fn empty(alphabets: Alphabets, seed: u64) -> Self {
        Self {
            alphabets,
            counts: vec![0; alphabets.len()],
            trials_per_context: vec![0; alphabets.num_contexts()],
            seed,
            generator_name: sampling::GENERATOR_NAME.to_string(),
        }
    }

    fn record(&mut self, a: usize, b: usize, x: usize, y: usize) {
        self.counts[self.alphabets.index(a, b, x, y)] += 1;
        self.trials_per_context[a * self.alphabets.n_b + b] += 1;
    }

    fn absorb(&mut self, other: &EmpiricalTable) {
        for (c, o) in self.counts.iter_mut().zip(&other.counts) {
            *c += o;
        }
        for (c, o) in self
            .trials_per_context
            .iter_mut()
            .zip(&other.trials_per_context)
        {
            *c += o;
        }
    }

    pub fn count(&self, a: usize, b: usize, x: usize, y: usize) -> u64 {
        self.counts[self.alphabets.index(a, b, x, y)]
    }

    pub fn trials(&self, a: usize, b: usize) -> u64 {
        self.trials_per_context[a * self.alphabets.n_b + b]
    }

    pub fn total_trials(&self) -> u64 {
        self.trials_per_context.iter().sum()
    }

    /// `empirical nA nB nX nY seed=<s> gen=<name>`, then per context
    /// `context a b n=<trials>` and `nX` rows of `nY` counts.
    pub fn emit(&self) -> String {
        let al = self.alphabets;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "empirical {} {} {} {} seed={} gen={}",
            al.n_a, al.n_b, al.n_x, al.n_y, self.seed, self.generator_name
        );
        for (a, b) in al.contexts() {
            let _ = writeln!(out, "context {a} {b} n={}", self.trials(a, b));
            for x in 0..al.n_x {
                let row: Vec<String> = (0..al.n_y)
                    .map(|y| self.count(a, b, x, y).to_string())
                    .collect();
                out.push_str(&row.join(" "));
                out.push('\n');
            }
        }
        out
    }
}

/// Precomputed samplers for every conditional the source needs.
struct Plan {
    prior: ExactSampler,
    n_b: usize,
    kind: PlanKind,
}

enum PlanKind {
    Passive {
        w: ExactSampler,
        x: Vec<Vec<ExactSampler>>,
        y: Vec<Vec<ExactSampler>>,
    },
    Active {
        w: Vec<Vec<ExactSampler>>,
        x: Vec<Vec<ExactSampler>>,
        y: Vec<Vec<ExactSampler>>,
    },
    OneWay {
        w: ExactSampler,
        coin: ExactSampler,
    },
}

fn samplers(rows: &[Vec<Vec<Rational>>]) -> Vec<Vec<ExactSampler>> {
    rows.iter()
        .map(|block| block.iter().map(|r| ExactSampler::new(r)).collect())
        .collect()
}

impl Plan {
    fn new(source: Source<'_>, prior: &ObservationPrior) -> Self {
        let kind = match source {
            Source::Passive(m) => PlanKind::Passive {
                w: ExactSampler::new(&m.p_w),
                x: samplers(&m.p_x_given_aw),
                y: samplers(&m.p_y_given_bw),
            },
            Source::Active(m) => PlanKind::Active {
                w: samplers(&m.p_w_given_ab),
                x: samplers(&m.p_x_given_aw),
                y: samplers(&m.p_y_given_bw),
            },
            Source::OneWay => PlanKind::OneWay {
                w: ExactSampler::new(&vec![rat(1, 3); ONE_WAY_BRANCHES]),
                coin: ExactSampler::new(&[rat(1, 2), rat(1, 2)]),
            },
        };
        Self {
            prior: ExactSampler::new(prior.entries()),
            n_b: prior.n_b(),
            kind,
        }
    }

    fn trial(&self, rng: &mut SimRng) -> (usize, usize, usize, usize) {
        let k = self.prior.sample(rng);
        let (a, b) = (k / self.n_b, k % self.n_b);
        let (x, y) = match &self.kind {
            PlanKind::Passive { w, x, y } => {
                let w = w.sample(rng);
                (x[w][a].sample(rng), y[w][b].sample(rng))
            }
            PlanKind::Active { w, x, y } => {
                let w = w[a][b].sample(rng);
                (x[w][a].sample(rng), y[w][b].sample(rng))
            }
            PlanKind::OneWay { w, coin } => match w.sample(rng) {
                0 => (a ^ 1, b),
                1 => (a, 0),
                _ => {
                    // venkat's message (a, x) reaches vivek only on this branch
                    let x = coin.sample(rng);
                    (x, x ^ (a & b))
                }
            },
        };
        (a, b, x, y)
    }
}

/// Single-chunk simulation.
pub fn simulate(
    source: Source<'_>,
    prior: &ObservationPrior,
    trials: u64,
    seed: u64,
) -> Result<EmpiricalTable, MechanismError> {
    simulate_chunked(source, prior, trials, seed, 1)
}

/// Splits `trials` into `chunks` parts (the first `trials % chunks` get one
/// extra), runs chunk `i` on stream `i` of the seeded generator in its own
/// thread, and sums the counts. The result depends only on
/// `(seed, trials, chunks)`.
pub fn simulate_chunked(
    source: Source<'_>,
    prior: &ObservationPrior,
    trials: u64,
    seed: u64,
    chunks: usize,
) -> Result<EmpiricalTable, MechanismError> {
    if trials == 0 {
        return Err(MechanismError::ZeroTrials);
    }
    if chunks == 0 {
        return Err(MechanismError::ZeroChunks);
    }
    let al = source.alphabets();
    if !prior.matches(&al) {
        return Err(DistError::AlphabetMismatch.into());
    }
    let plan = Plan::new(source, prior);
    let chunks = chunks.min(trials as usize);
    let base = trials / chunks as u64;
    let extra = trials % chunks as u64;

    let run = |i: usize| {
        let n = base + u64::from((i as u64) < extra);
        let mut rng = sampling::new_rng(seed, i as u64);
        let mut table = EmpiricalTable::empty(al, seed);
        for _ in 0..n {
            let (a, b, x, y) = plan.trial(&mut rng);
            table.record(a, b, x, y);
        }
        table
    };

    let mut total = EmpiricalTable::empty(al, seed);
    if chunks == 1 {
        total.absorb(&run(0));
    } else {
        let parts: Vec<EmpiricalTable> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..chunks).map(|i| scope.spawn(move || run(i))).collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("simulation thread"))
                .collect()
        });
        for p in &parts {
            total.absorb(p);
        }
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TvReport {
    /// Indexed `a * n_b + b`; `None` where the context was never sampled.
    pub per_context: Vec<Option<f64>>,
    pub max: Option<f64>,
}

/// Total variation `(1/2) sum_{x,y} |count/n - s[a,b,x,y]|` per sampled
/// context, computed exactly and converted at the end.
pub fn empirical_tv(e: &EmpiricalTable, s: &Strategy) -> Result<TvReport, MechanismError> {
    let al = e.alphabets;
    if s.alphabets() != al {
        return Err(DistError::AlphabetMismatch.into());
    }
    let per_context: Vec<Option<f64>> = al
        .contexts()
        .map(|(a, b)| {
            let n = e.trials(a, b);
            if n == 0 {
                return None;
            }
            let n = int(n as i64);
            let mut l1 = Rational::zero();
            for x in 0..al.n_x {
                for y in 0..al.n_y {
                    let freq = int(e.count(a, b, x, y) as i64) / &n;
                    l1 += rational::abs(&(freq - s.get(a, b, x, y)));
                }
            }
            Some(rational::to_f64(&(l1 / int(2))))
        })
        .collect();
    let max = per_context
        .iter()
        .flatten()
        .copied()
        .fold(None, |m: Option<f64>, v| Some(m.map_or(v, |m| m.max(v))));
    Ok(TvReport { per_context, max })
}
