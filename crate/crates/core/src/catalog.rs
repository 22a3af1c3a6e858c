//! Built-in example strategies.

use crate::bell::ChshVariant;
use crate::dist::{Alphabets, ObservationPrior, Strategy};
use crate::polytope::binary_nonlocal_vertex;
use crate::rational::{rat, Rational};
use thiserror::Error;

pub const EXAMPLE_NAMES: [&str; 4] = ["ab3", "binary2", "pr-box", "uniform"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown example {0:?}; known: ab3, binary2, pr-box, uniform")]
pub struct UnknownExample(pub String);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    /// No-signaling and local.
    NsLocal,
    /// No-signaling but outside the local polytope.
    NsNotLocal,
    Signaling,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Classification::NsLocal => "ns-local",
            Classification::NsNotLocal => "ns-nonlocal",
            Classification::Signaling => "signaling",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedExample {
    pub name: &'static str,
    pub strategy: Strategy,
    pub prior: ObservationPrior,
    /// Claimed, not trusted: tests recompute it.
    pub expected_classification: Classification,
}

fn from_blocks(al: Alphabets, blocks: [[&[(i64, i64)]; 2]; 2]) -> Strategy {
    let table: Vec<Rational> = (0..2)
        .flat_map(|a| (0..2).map(move |b| (a, b)))
        .flat_map(|(a, b)| blocks[a][b].iter().map(|&(n, d)| rat(n, d)))
        .collect();
    Strategy::new(al, table).expect("built-in table is a valid strategy")
}

const Z: (i64, i64) = (0, 1);
const T: (i64, i64) = (1, 3);
const H: (i64, i64) = (1, 2);

/// Three actions per agent, two observations each. Every context is a
/// permutation matrix scaled by 1/3.
pub fn example_ab3() -> Strategy {
    from_blocks(
        Alphabets::new(2, 2, 3, 3).expect("nonempty"),
        [
            [&[Z, Z, T, Z, T, Z, T, Z, Z], &[Z, T, Z, Z, Z, T, T, Z, Z]],
            [&[Z, T, Z, T, Z, Z, Z, Z, T], &[T, Z, Z, Z, T, Z, Z, Z, T]],
        ],
    )
}

/// ```text
/// (0,0): 1/2  0     (0,1): 1/2  0
///        1/3  1/6          0    1/2
/// (1,0): 1/2  0     (1,1): 0    1/2
///        1/3  1/6          1/2  0
/// ```
pub fn example_binary2() -> Strategy {
    from_blocks(
        Alphabets::binary(),
        [
            [&[H, Z, T, (1, 6)], &[H, Z, Z, H]],
            [&[H, Z, T, (1, 6)], &[Z, H, H, Z]],
        ],
    )
}

/// `x + y = a.b` (mod 2), each with probability 1/2.
pub fn pr_box() -> Strategy {
    binary_nonlocal_vertex(ChshVariant::STANDARD)
}

pub fn uniform_binary() -> Strategy {
    Strategy::uniform(Alphabets::binary())
}

pub fn get_example(name: &str) -> Result<NamedExample, UnknownExample> {
    let (name, strategy, expected_classification) = match name {
        "ab3" => ("ab3", example_ab3(), Classification::NsNotLocal),
        "binary2" => ("binary2", example_binary2(), Classification::NsNotLocal),
        "pr-box" => ("pr-box", pr_box(), Classification::NsNotLocal),
        "uniform" => ("uniform", uniform_binary(), Classification::NsLocal),
        other => return Err(UnknownExample(other.to_string())),
    };
    let al = strategy.alphabets();
    Ok(NamedExample {
        name,
        prior: ObservationPrior::uniform(al.n_a, al.n_b),
        strategy,
        expected_classification,
    })
}
