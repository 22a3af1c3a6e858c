//! Alphabets, strategies, observation priors and joint distributions.
//!
//! Every table is stored flat in `(a, b, x, y)` order: contexts `(a, b)` in
//! lexicographic order, and within a context rows are `x`, columns are `y`.

use crate::rational::{self, Rational};
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DistError {
    #[error("alphabet sizes must be positive, got {0:?}")]
    EmptyAlphabet([usize; 4]),
    #[error("table has {found} entries, alphabets require {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("negative entry {value} at a={a} b={b} x={x} y={y}")]
    NegativeEntry {
        a: usize,
        b: usize,
        x: usize,
        y: usize,
        value: Rational,
    },
    #[error("context a={a} b={b} sums to 1 - ({deficit})")]
    ContextNotNormalized {
        a: usize,
        b: usize,
        deficit: Rational,
    },
    #[error("index out of range")]
    IndexOutOfRange,
    #[error("alphabets do not agree")]
    AlphabetMismatch,
    #[error("negative prior entry {value} at a={a} b={b}")]
    NegativePrior { a: usize, b: usize, value: Rational },
    #[error("distribution sums to 1 - ({deficit})")]
    NotNormalized { deficit: Rational },
}

/// Sizes of the observation alphabets `A`, `B` and action alphabets `X`, `Y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Alphabets {
    pub n_a: usize,
    pub n_b: usize,
    pub n_x: usize,
    pub n_y: usize,
}

impl Alphabets {
    pub fn new(n_a: usize, n_b: usize, n_x: usize, n_y: usize) -> Result<Self, DistError> {
        if n_a == 0 || n_b == 0 || n_x == 0 || n_y == 0 {
            return Err(DistError::EmptyAlphabet([n_a, n_b, n_x, n_y]));
        }
        Ok(Self { n_a, n_b, n_x, n_y })
    }

    pub const fn binary() -> Self {
        Self {
            n_a: 2,
            n_b: 2,
            n_x: 2,
            n_y: 2,
        }
    }

    pub fn is_binary(&self) -> bool {
        *self == Self::binary()
    }

    pub fn context_len(&self) -> usize {
        self.n_x * self.n_y
    }

    pub fn num_contexts(&self) -> usize {
        self.n_a * self.n_b
    }

    /// Total number of `(a, b, x, y)` cells.
    pub fn len(&self) -> usize {
        self.num_contexts() * self.context_len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn index(&self, a: usize, b: usize, x: usize, y: usize) -> usize {
        ((a * self.n_b + b) * self.n_x + x) * self.n_y + y
    }

    pub fn contains(&self, a: usize, b: usize, x: usize, y: usize) -> bool {
        a < self.n_a && b < self.n_b && x < self.n_x && y < self.n_y
    }

    /// Contexts `(a, b)` in lexicographic order.
    pub fn contexts(&self) -> impl Iterator<Item = (usize, usize)> {
        let n_b = self.n_b;
        (0..self.n_a).flat_map(move |a| (0..n_b).map(move |b| (a, b)))
    }

    /// All cells `(a, b, x, y)` in storage order.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize, usize, usize)> {
        let Alphabets { n_a, n_b, n_x, n_y } = *self;
        (0..n_a).flat_map(move |a| {
            (0..n_b)
                .flat_map(move |b| (0..n_x).flat_map(move |x| (0..n_y).map(move |y| (a, b, x, y))))
        })
    }
}

/// Which agent's action a quantity refers to: `Venkat` observes `A` and
/// chooses `X`, `Vivek` observes `B` and chooses `Y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Venkat,
    Vivek,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::Venkat => f.write_str("venkat"),
            Side::Vivek => f.write_str("vivek"),
        }
    }
}

/// A conditional distribution `P(x, y | a, b)` with exact rational entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Strategy {
    alphabets: Alphabets,
    table: Vec<Rational>,
}

impl Strategy {
    /// Validates a flat `(a, b, x, y)` table: nonnegative entries and every
    /// context summing to exactly one.
    pub fn new(alphabets: Alphabets, table: Vec<Rational>) -> Result<Self, DistError> {
        if table.len() != alphabets.len() {
            return Err(DistError::DimensionMismatch {
                expected: alphabets.len(),
                found: table.len(),
            });
        }
        for (i, (a, b, x, y)) in alphabets.cells().enumerate() {
            if table[i].is_negative() {
                return Err(DistError::NegativeEntry {
                    a,
                    b,
                    x,
                    y,
                    value: table[i].clone(),
                });
            }
        }
        let width = alphabets.context_len();
        for (k, (a, b)) in alphabets.contexts().enumerate() {
            let total: Rational = table[k * width..(k + 1) * width].iter().sum();
            if !total.is_one() {
                return Err(DistError::ContextNotNormalized {
                    a,
                    b,
                    deficit: Rational::one() - total,
                });
            }
        }
        Ok(Self { alphabets, table })
    }

    pub fn from_fn(
        alphabets: Alphabets,
        mut entry: impl FnMut(usize, usize, usize, usize) -> Rational,
    ) -> Result<Self, DistError> {
        let table = alphabets
            .cells()
            .map(|(a, b, x, y)| entry(a, b, x, y))
            .collect();
        Self::new(alphabets, table)
    }

    /// Uniform over actions in every context.
    pub fn uniform(alphabets: Alphabets) -> Self {
        let p = Rational::new(1.into(), (alphabets.context_len() as i64).into());
        Self {
            alphabets,
            table: vec![p; alphabets.len()],
        }
    }

    pub fn alphabets(&self) -> Alphabets {
        self.alphabets
    }

    pub fn get(&self, a: usize, b: usize, x: usize, y: usize) -> &Rational {
        &self.table[self.alphabets.index(a, b, x, y)]
    }

    /// The `n_x * n_y` block of context `(a, b)`, row-major in `x`.
    pub fn context(&self, a: usize, b: usize) -> &[Rational] {
        let w = self.alphabets.context_len();
        let start = (a * self.alphabets.n_b + b) * w;
        &self.table[start..start + w]
    }

    pub fn entries(&self) -> &[Rational] {
        &self.table
    }

    /// True when every entry is 0 or 1.
    pub fn is_deterministic(&self) -> bool {
        self.table.iter().all(|v| v.is_zero() || v.is_one())
    }

    /// Convex combination `sum_i w_i s_i`. Weights must be nonnegative and
    /// sum to one; all strategies must share alphabets.
    pub fn mixture<'a>(
        parts: impl IntoIterator<Item = (Rational, &'a Strategy)>,
    ) -> Result<Strategy, DistError> {
        let mut alphabets = None;
        let mut table: Vec<Rational> = Vec::new();
        for (w, s) in parts {
            match alphabets {
                None => {
                    alphabets = Some(s.alphabets);
                    table = vec![Rational::zero(); s.alphabets.len()];
                }
                Some(al) if al != s.alphabets => return Err(DistError::AlphabetMismatch),
                _ => {}
            }
            if w.is_zero() {
                continue;
            }
            for (t, v) in table.iter_mut().zip(&s.table) {
                if !v.is_zero() {
                    *t += &w * v;
                }
            }
        }
        let alphabets = alphabets.ok_or(DistError::DimensionMismatch {
            expected: 1,
            found: 0,
        })?;
        Strategy::new(alphabets, table)
    }
}

/// Validates a nested `[a][b][x][y]` table.
pub fn validate_strategy(candidate: &[Vec<Vec<Vec<Rational>>>]) -> Result<Strategy, DistError> {
    let n_a = candidate.len();
    let n_b = candidate.first().map_or(0, Vec::len);
    let n_x = candidate
        .first()
        .and_then(|r| r.first())
        .map_or(0, Vec::len);
    let n_y = candidate
        .first()
        .and_then(|r| r.first())
        .and_then(|r| r.first())
        .map_or(0, Vec::len);
    let alphabets = Alphabets::new(n_a, n_b, n_x, n_y)?;
    let mut table = Vec::with_capacity(alphabets.len());
    for block in candidate {
        if block.len() != n_b {
            return Err(DistError::DimensionMismatch {
                expected: n_b,
                found: block.len(),
            });
        }
        for ctx in block {
            if ctx.len() != n_x {
                return Err(DistError::DimensionMismatch {
                    expected: n_x,
                    found: ctx.len(),
                });
            }
            for row in ctx {
                if row.len() != n_y {
                    return Err(DistError::DimensionMismatch {
                        expected: n_y,
                        found: row.len(),
                    });
                }
                table.extend(row.iter().cloned());
            }
        }
    }
    Strategy::new(alphabets, table)
}

/// `P(x | a, b)` for the venkat side, `P(y | a, b)` for the vivek side.
pub fn action_marginal(
    s: &Strategy,
    side: Side,
    a: usize,
    b: usize,
) -> Result<Vec<Rational>, DistError> {
    let al = s.alphabets;
    if a >= al.n_a || b >= al.n_b {
        return Err(DistError::IndexOutOfRange);
    }
    let ctx = s.context(a, b);
    Ok(match side {
        Side::Venkat => (0..al.n_x)
            .map(|x| ctx[x * al.n_y..(x + 1) * al.n_y].iter().sum())
            .collect(),
        Side::Vivek => (0..al.n_y)
            .map(|y| (0..al.n_x).map(|x| &ctx[x * al.n_y + y]).sum())
            .collect(),
    })
}

/// Distribution `P(a, b)` over observations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ObservationPrior {
    n_a: usize,
    n_b: usize,
    table: Vec<Rational>,
}

impl ObservationPrior {
    /// `table` is row-major in `a`.
    pub fn new(n_a: usize, n_b: usize, table: Vec<Rational>) -> Result<Self, DistError> {
        if n_a == 0 || n_b == 0 {
            return Err(DistError::EmptyAlphabet([n_a, n_b, 1, 1]));
        }
        if table.len() != n_a * n_b {
            return Err(DistError::DimensionMismatch {
                expected: n_a * n_b,
                found: table.len(),
            });
        }
        for (i, v) in table.iter().enumerate() {
            if v.is_negative() {
                return Err(DistError::NegativePrior {
                    a: i / n_b,
                    b: i % n_b,
                    value: v.clone(),
                });
            }
        }
        let total: Rational = table.iter().sum();
        if !total.is_one() {
            return Err(DistError::NotNormalized {
                deficit: Rational::one() - total,
            });
        }
        Ok(Self { n_a, n_b, table })
    }

    pub fn uniform(n_a: usize, n_b: usize) -> Self {
        let p = rational::rat(1, (n_a * n_b) as i64);
        Self {
            n_a,
            n_b,
            table: vec![p; n_a * n_b],
        }
    }

    pub fn point_mass(n_a: usize, n_b: usize, a: usize, b: usize) -> Self {
        let mut table = vec![Rational::zero(); n_a * n_b];
        table[a * n_b + b] = Rational::one();
        Self { n_a, n_b, table }
    }

    pub fn n_a(&self) -> usize {
        self.n_a
    }

    pub fn n_b(&self) -> usize {
        self.n_b
    }

    pub fn get(&self, a: usize, b: usize) -> &Rational {
        &self.table[a * self.n_b + b]
    }

    pub fn entries(&self) -> &[Rational] {
        &self.table
    }

    pub fn has_full_support(&self) -> bool {
        self.table.iter().all(|v| v.is_positive())
    }

    pub fn is_uniform(&self) -> bool {
        self.table.iter().all(|v| *v == self.table[0])
    }

    pub fn marginal_a(&self) -> Vec<Rational> {
        (0..self.n_a)
            .map(|a| (0..self.n_b).map(|b| self.get(a, b)).sum())
            .collect()
    }

    pub fn marginal_b(&self) -> Vec<Rational> {
        (0..self.n_b)
            .map(|b| (0..self.n_a).map(|a| self.get(a, b)).sum())
            .collect()
    }

    pub fn matches(&self, alphabets: &Alphabets) -> bool {
        self.n_a == alphabets.n_a && self.n_b == alphabets.n_b
    }
}

/// Joint `P(x, y, a, b)`, stored in the same `(a, b, x, y)` layout as a
/// strategy.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct JointDistribution {
    alphabets: Alphabets,
    table: Vec<Rational>,
}

impl JointDistribution {
    pub fn new(alphabets: Alphabets, table: Vec<Rational>) -> Result<Self, DistError> {
        if table.len() != alphabets.len() {
            return Err(DistError::DimensionMismatch {
                expected: alphabets.len(),
                found: table.len(),
            });
        }
        for (i, (a, b, x, y)) in alphabets.cells().enumerate() {
            if table[i].is_negative() {
                return Err(DistError::NegativeEntry {
                    a,
                    b,
                    x,
                    y,
                    value: table[i].clone(),
                });
            }
        }
        let total: Rational = table.iter().sum();
        if !total.is_one() {
            return Err(DistError::NotNormalized {
                deficit: Rational::one() - total,
            });
        }
        Ok(Self { alphabets, table })
    }

    pub fn alphabets(&self) -> Alphabets {
        self.alphabets
    }

    /// `P(X = x, Y = y, A = a, B = b)`.
    pub fn get(&self, x: usize, y: usize, a: usize, b: usize) -> &Rational {
        &self.table[self.alphabets.index(a, b, x, y)]
    }

    pub fn entries(&self) -> &[Rational] {
        &self.table
    }

    /// `P(a, b)`.
    pub fn observation_marginal(&self, a: usize, b: usize) -> Rational {
        let w = self.alphabets.context_len();
        let start = (a * self.alphabets.n_b + b) * w;
        self.table[start..start + w].iter().sum()
    }
}

/// `P(x, y, a, b) = P(x, y | a, b) P(a, b)`.
pub fn joint_from_prior(
    s: &Strategy,
    p: &ObservationPrior,
) -> Result<JointDistribution, DistError> {
    let al = s.alphabets;
    if !p.matches(&al) {
        return Err(DistError::AlphabetMismatch);
    }
    let table = al
        .cells()
        .map(|(a, b, x, y)| s.get(a, b, x, y) * p.get(a, b))
        .collect();
    JointDistribution::new(al, table)
}
