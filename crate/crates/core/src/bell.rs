//! Correlators and the CHSH family for binary strategies.

use crate::dist::{Alphabets, Strategy};
use crate::polytope::Functional;
use crate::rational::{int, Rational};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BellError {
    #[error("CHSH quantities need binary alphabets, got {} {} {} {}", .0.n_a, .0.n_b, .0.n_x, .0.n_y)]
    NotBinary(Alphabets),
}

/// Sign pattern `(-1)^(a.b + alpha a + beta b + gamma)` of one CHSH
/// functional. The labels coincide with those of the non-local vertices:
/// each vertex attains 4 on the variant with its own label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChshVariant {
    pub alpha: bool,
    pub beta: bool,
    pub gamma: bool,
}

impl ChshVariant {
    /// The textbook form `E00 + E01 + E10 - E11`.
    pub const STANDARD: ChshVariant = ChshVariant {
        alpha: false,
        beta: false,
        gamma: false,
    };

    pub fn new(alpha: bool, beta: bool, gamma: bool) -> Self {
        Self { alpha, beta, gamma }
    }

    pub fn from_bits(alpha: u8, beta: u8, gamma: u8) -> Option<Self> {
        (alpha < 2 && beta < 2 && gamma < 2).then(|| Self::new(alpha == 1, beta == 1, gamma == 1))
    }

    /// All eight variants in `(alpha, beta, gamma)` lexicographic order.
    pub fn all() -> impl Iterator<Item = ChshVariant> {
        (0..8u8).map(|k| Self::new(k & 4 != 0, k & 2 != 0, k & 1 != 0))
    }

    /// Parity of `a.b + alpha a + beta b + gamma`.
    pub fn parity(&self, a: usize, b: usize) -> bool {
        let (a, b) = (a == 1, b == 1);
        (a & b) ^ (self.alpha & a) ^ (self.beta & b) ^ self.gamma
    }

    pub fn sign(&self, a: usize, b: usize) -> i64 {
        if self.parity(a, b) {
            -1
        } else {
            1
        }
    }

    pub fn bits(&self) -> (u8, u8, u8) {
        (self.alpha as u8, self.beta as u8, self.gamma as u8)
    }
}

impl std::fmt::Display for ChshVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let (a, b, g) = self.bits();
        write!(f, "({a},{b},{g})")
    }
}

fn require_binary(s: &Strategy) -> Result<(), BellError> {
    if s.alphabets().is_binary() {
        Ok(())
    } else {
        Err(BellError::NotBinary(s.alphabets()))
    }
}

/// `<(-1)^x (-1)^y>_{a,b}`.
pub fn correlator(s: &Strategy, a: usize, b: usize) -> Result<Rational, BellError> {
    require_binary(s)?;
    let mut total = int(0);
    for x in 0..2 {
        for y in 0..2 {
            let p = s.get(a, b, x, y);
            if (x + y) % 2 == 0 {
                total += p;
            } else {
                total -= p;
            }
        }
    }
    Ok(total)
}

pub fn chsh_value(s: &Strategy, v: ChshVariant) -> Result<Rational, BellError> {
    require_binary(s)?;
    let mut total = int(0);
    for a in 0..2 {
        for b in 0..2 {
            let c = correlator(s, a, b)?;
            if v.parity(a, b) {
                total -= c;
            } else {
                total += c;
            }
        }
    }
    Ok(total)
}

/// Largest CHSH value over the eight variants; ties go to the
/// lexicographically smallest label.
pub fn max_chsh_violation(s: &Strategy) -> Result<(ChshVariant, Rational), BellError> {
    let mut best: Option<(ChshVariant, Rational)> = None;
    for v in ChshVariant::all() {
        let value = chsh_value(s, v)?;
        if best.as_ref().is_none_or(|(_, b)| value > *b) {
            best = Some((v, value));
        }
    }
    Ok(best.expect("eight variants"))
}

/// The variant as a linear functional on strategy entries:
/// `c[a,b,x,y] = sign(a,b) (-1)^(x+y)`.
pub fn chsh_functional(v: ChshVariant) -> Functional {
    let al = Alphabets::binary();
    let coeffs = al
        .cells()
        .map(|(a, b, x, y)| {
            let parity = if (x + y) % 2 == 0 { 1 } else { -1 };
            int(v.sign(a, b) * parity)
        })
        .collect();
    Functional::new(al, coeffs).expect("binary dimensions")
}
