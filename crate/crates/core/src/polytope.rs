//! Local polytope: deterministic strategies, exact membership, separating
//! functionals and the binary vertex catalog.
//!
//! Membership of `s` is the feasibility of
//!
//! ```text
//! sum_d w_d d[a,b,x,y] = s[a,b,x,y]   for every cell
//! sum_d w_d            = 1
//! w_d >= 0
//! ```
//!
//! over all deterministic local strategies `d`, decided by
//! [`crate::simplex::phase_one`]. A feasible basis is a decomposition into at
//! most `cells + 1` atoms; an infeasible one yields a dual vector whose cell
//! part is a functional that is strictly larger on `s` than on every local
//! strategy.

use crate::bell::ChshVariant;
use crate::dist::{Alphabets, Strategy};
use crate::mechanisms::PassiveMechanism;
use crate::rational::{self, int, Rational};
use crate::simplex::{phase_one, PhaseOne};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt::Write;
use thiserror::Error;

/// Default limit on the number of deterministic strategies enumerated.
pub const DEFAULT_ENUMERATION_CAP: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolytopeError {
    #[error("{count} deterministic strategies exceed the enumeration cap {cap}")]
    CapExceeded { count: u128, cap: u128 },
    #[error("alphabets do not agree")]
    AlphabetMismatch,
}

/// A pair of response functions `f: A -> X`, `g: B -> Y`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DeterministicLocal {
    pub alphabets: Alphabets,
    pub f: Vec<usize>,
    pub g: Vec<usize>,
}

impl DeterministicLocal {
    pub fn new(alphabets: Alphabets, f: Vec<usize>, g: Vec<usize>) -> Option<Self> {
        let ok = f.len() == alphabets.n_a
            && g.len() == alphabets.n_b
            && f.iter().all(|&x| x < alphabets.n_x)
            && g.iter().all(|&y| y < alphabets.n_y);
        ok.then_some(Self { alphabets, f, g })
    }

    /// `1` iff `x = f(a)` and `y = g(b)`.
    pub fn entry(&self, a: usize, b: usize, x: usize, y: usize) -> bool {
        self.f[a] == x && self.g[b] == y
    }
}

/// Number of deterministic local strategies, `nX^nA * nY^nB`, saturating.
pub fn deterministic_count(al: Alphabets) -> u128 {
    let pow = |base: usize, exp: usize| -> u128 {
        (0..exp).fold(1u128, |acc, _| acc.saturating_mul(base as u128))
    };
    pow(al.n_x, al.n_a).saturating_mul(pow(al.n_y, al.n_b))
}

fn digits(mut code: usize, base: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = code % base;
        code /= base;
    }
    out
}

pub fn enumerate_deterministic(al: Alphabets) -> Result<Vec<DeterministicLocal>, PolytopeError> {
    enumerate_deterministic_with_cap(al, DEFAULT_ENUMERATION_CAP)
}

/// All `(f, g)` pairs ordered by the base-`nX` code of `(f(0), f(1), ...)`,
/// then the base-`nY` code of `g`, most significant digit first.
pub fn enumerate_deterministic_with_cap(
    al: Alphabets,
    cap: u128,
) -> Result<Vec<DeterministicLocal>, PolytopeError> {
    let count = deterministic_count(al);
    if count > cap {
        return Err(PolytopeError::CapExceeded { count, cap });
    }
    let n_g = al.n_y.pow(al.n_b as u32);
    let n_f = count as usize / n_g;
    let mut out = Vec::with_capacity(count as usize);
    for fc in 0..n_f {
        let f = digits(fc, al.n_x, al.n_a);
        for gc in 0..n_g {
            out.push(DeterministicLocal {
                alphabets: al,
                f: f.clone(),
                g: digits(gc, al.n_y, al.n_b),
            });
        }
    }
    Ok(out)
}

pub fn induce_deterministic(d: &DeterministicLocal) -> Strategy {
    Strategy::from_fn(d.alphabets, |a, b, x, y| int(d.entry(a, b, x, y) as i64))
        .expect("deterministic strategies are normalized")
}

/// A linear functional `sum c[a,b,x,y] s[a,b,x,y]` on strategies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Functional {
    alphabets: Alphabets,
    /// Flat `(a, b, x, y)` order.
    coeffs: Vec<Rational>,
}

impl Functional {
    pub fn new(alphabets: Alphabets, coeffs: Vec<Rational>) -> Option<Self> {
        (coeffs.len() == alphabets.len()).then_some(Self { alphabets, coeffs })
    }

    pub fn zero(alphabets: Alphabets) -> Self {
        Self {
            alphabets,
            coeffs: vec![Rational::zero(); alphabets.len()],
        }
    }

    pub fn alphabets(&self) -> Alphabets {
        self.alphabets
    }

    pub fn coeff(&self, a: usize, b: usize, x: usize, y: usize) -> &Rational {
        &self.coeffs[self.alphabets.index(a, b, x, y)]
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn evaluate(&self, s: &Strategy) -> Result<Rational, PolytopeError> {
        if s.alphabets() != self.alphabets {
            return Err(PolytopeError::AlphabetMismatch);
        }
        Ok(self
            .coeffs
            .iter()
            .zip(s.entries())
            .filter(|(c, v)| !c.is_zero() && !v.is_zero())
            .map(|(c, v)| c * v)
            .sum())
    }

    pub fn evaluate_deterministic(&self, d: &DeterministicLocal) -> Rational {
        self.alphabets
            .contexts()
            .map(|(a, b)| self.coeff(a, b, d.f[a], d.g[b]))
            .sum()
    }

    /// Maximum over every deterministic local strategy, by exhaustive
    /// enumeration. Panics if the alphabets exceed the enumeration cap.
    pub fn max_on_local(&self) -> Rational {
        enumerate_deterministic(self.alphabets)
            .expect("functional alphabets within enumeration cap")
            .iter()
            .map(|d| self.evaluate_deterministic(d))
            .max()
            .expect("at least one deterministic strategy")
    }

    /// A separating certificate for `s`, if this functional strictly
    /// separates it from the local polytope.
    pub fn separating(&self, s: &Strategy) -> Result<Option<SeparatingFunctional>, PolytopeError> {
        let value = self.evaluate(s)?;
        let max = self.max_on_local();
        Ok((value > max).then(|| SeparatingFunctional {
            functional: self.clone(),
            value_on_strategy: value,
            max_on_local: max,
        }))
    }
}

/// A functional with `value_on_strategy > max_on_local`, certifying that the
/// strategy is outside the local polytope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparatingFunctional {
    pub functional: Functional,
    pub value_on_strategy: Rational,
    pub max_on_local: Rational,
}

impl SeparatingFunctional {
    /// Re-derives both values exhaustively and checks strict separation.
    pub fn verify(&self, s: &Strategy) -> bool {
        matches!(self.functional.evaluate(s), Ok(v) if v == self.value_on_strategy)
            && self.functional.max_on_local() == self.max_on_local
            && self.value_on_strategy > self.max_on_local
    }

    /// `functional nA nB nX nY`, one coefficient per `(a,b,x,y)` line, then
    /// `value` and `localmax`.
    pub fn emit(&self) -> String {
        let al = self.functional.alphabets;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "functional {} {} {} {}",
            al.n_a, al.n_b, al.n_x, al.n_y
        );
        for c in &self.functional.coeffs {
            let _ = writeln!(out, "{}", rational::format(c));
        }
        let _ = writeln!(out, "value {}", rational::format(&self.value_on_strategy));
        let _ = writeln!(out, "localmax {}", rational::format(&self.max_on_local));
        out
    }
}

pub fn evaluate_functional(
    c: &SeparatingFunctional,
    s: &Strategy,
) -> Result<Rational, PolytopeError> {
    c.functional.evaluate(s)
}

/// Convex weights over deterministic local strategies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalDecomposition {
    pub alphabets: Alphabets,
    pub atoms: Vec<(Rational, DeterministicLocal)>,
}

impl LocalDecomposition {
    pub fn reconstruct(&self) -> Strategy {
        let mut table = vec![Rational::zero(); self.alphabets.len()];
        for (w, d) in &self.atoms {
            for (a, b) in self.alphabets.contexts() {
                table[self.alphabets.index(a, b, d.f[a], d.g[b])] += w;
            }
        }
        Strategy::new(self.alphabets, table).expect("weights sum to one")
    }

    /// `decomposition nA nB nX nY atoms=<k>` then `atom <w> f <..> g <..>`.
    pub fn emit(&self) -> String {
        let al = self.alphabets;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "decomposition {} {} {} {} atoms={}",
            al.n_a,
            al.n_b,
            al.n_x,
            al.n_y,
            self.atoms.len()
        );
        let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
        for (w, d) in &self.atoms {
            let _ = writeln!(
                out,
                "atom {} f {} g {}",
                rational::format(w),
                join(&d.f),
                join(&d.g)
            );
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    Feasible(LocalDecomposition),
    Infeasible(SeparatingFunctional),
}

impl Membership {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Membership::Feasible(_))
    }
}

pub fn local_membership(s: &Strategy) -> Result<Membership, PolytopeError> {
    local_membership_with_cap(s, DEFAULT_ENUMERATION_CAP)
}

pub fn local_membership_with_cap(s: &Strategy, cap: u128) -> Result<Membership, PolytopeError> {
    let al = s.alphabets();
    let dets = enumerate_deterministic_with_cap(al, cap)?;
    let cells = al.len();

    let mut rows = vec![vec![Rational::zero(); dets.len()]; cells + 1];
    for (j, d) in dets.iter().enumerate() {
        for (a, b) in al.contexts() {
            rows[al.index(a, b, d.f[a], d.g[b])][j] = Rational::one();
        }
        rows[cells][j] = Rational::one();
    }
    let mut rhs: Vec<Rational> = s.entries().to_vec();
    rhs.push(Rational::one());

    match phase_one(&rows, &rhs) {
        PhaseOne::Feasible { solution } => {
            let atoms = solution
                .into_iter()
                .zip(dets)
                .filter(|(w, _)| w.is_positive())
                .collect();
            Ok(Membership::Feasible(LocalDecomposition {
                alphabets: al,
                atoms,
            }))
        }
        PhaseOne::Infeasible { dual, .. } => {
            // The normalization multiplier only shifts the bound; drop it and
            // rescale the cell part to coprime integers.
            let coeffs = primitive_integer_vector(&dual[..cells]);
            let functional = Functional {
                alphabets: al,
                coeffs,
            };
            let value_on_strategy = functional.evaluate(s)?;
            let max_on_local = dets
                .iter()
                .map(|d| functional.evaluate_deterministic(d))
                .max()
                .expect("nonempty enumeration");
            assert!(
                value_on_strategy > max_on_local,
                "phase-one dual failed to separate"
            );
            Ok(Membership::Infeasible(SeparatingFunctional {
                functional,
                value_on_strategy,
                max_on_local,
            }))
        }
    }
}

/// Positive rescaling of `v` to integers with gcd one.
fn primitive_integer_vector(v: &[Rational]) -> Vec<Rational> {
    let lcm = rational::common_denominator(v);
    let ints: Vec<BigInt> = v.iter().map(|c| (c * &lcm).to_integer()).collect();
    let gcd = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if gcd.is_zero() {
        return v.to_vec();
    }
    ints.into_iter()
        .map(|x| Rational::from_integer(x / &gcd))
        .collect()
}

/// One common-randomness value per atom, with deterministic responses.
pub fn decomposition_to_mechanism(d: &LocalDecomposition) -> PassiveMechanism {
    let al = d.alphabets;
    let point =
        |n: usize, k: usize| -> Vec<Rational> { (0..n).map(|i| int((i == k) as i64)).collect() };
    let p_w = d.atoms.iter().map(|(w, _)| w.clone()).collect();
    let p_x = d
        .atoms
        .iter()
        .map(|(_, det)| (0..al.n_a).map(|a| point(al.n_x, det.f[a])).collect())
        .collect();
    let p_y = d
        .atoms
        .iter()
        .map(|(_, det)| (0..al.n_b).map(|b| point(al.n_y, det.g[b])).collect())
        .collect();
    PassiveMechanism::new(p_w, p_x, p_y).expect("decomposition weights form a distribution")
}

/// Label `(alpha, beta, gamma, delta)` of the local vertex
/// `x = alpha a + beta`, `y = gamma b + delta` (mod 2).
pub type LocalLabel = (u8, u8, u8, u8);

pub fn binary_local_vertex(label: LocalLabel) -> DeterministicLocal {
    let (al, be, ga, de) = label;
    let f = (0..2)
        .map(|a| ((al as usize * a) ^ be as usize) & 1)
        .collect();
    let g = (0..2)
        .map(|b| ((ga as usize * b) ^ de as usize) & 1)
        .collect();
    DeterministicLocal::new(Alphabets::binary(), f, g).expect("binary labels")
}

/// The 16 deterministic binary strategies, labelled in lexicographic order.
pub fn binary_local_vertices() -> Vec<(LocalLabel, Strategy)> {
    (0..16u8)
        .map(|k| {
            let label = ((k >> 3) & 1, (k >> 2) & 1, (k >> 1) & 1, k & 1);
            (label, induce_deterministic(&binary_local_vertex(label)))
        })
        .collect()
}

/// Non-local vertex: probability 1/2 on `x + y = a.b + alpha a + beta b + gamma` (mod 2).
pub fn binary_nonlocal_vertex(label: ChshVariant) -> Strategy {
    Strategy::from_fn(Alphabets::binary(), |a, b, x, y| {
        if ((x ^ y) == 1) == label.parity(a, b) {
            rational::rat(1, 2)
        } else {
            Rational::zero()
        }
    })
    .expect("non-local vertices are normalized")
}

/// The 8 non-local binary vertices.
pub fn binary_nonlocal_vertices() -> Vec<(ChshVariant, Strategy)> {
    ChshVariant::all()
        .map(|v| (v, binary_nonlocal_vertex(v)))
        .collect()
}
