//! Random instance generators and brute-force oracles shared by the
//! integration tests. Oracles deliberately avoid the library's own helpers.

#![allow(dead_code)]

use nsctl::bell::ChshVariant;
use nsctl::mechanisms::PassiveMechanism;
use nsctl::polytope::binary_nonlocal_vertex;
use nsctl::rational::{int, rat};
use nsctl::{Alphabets, ObservationPrior, Rational, Strategy};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Each size in `1..=max`.
pub fn random_alphabets(rng: &mut StdRng, max: usize) -> Alphabets {
    Alphabets::new(
        rng.random_range(1..=max),
        rng.random_range(1..=max),
        rng.random_range(1..=max),
        rng.random_range(1..=max),
    )
    .unwrap()
}

/// Distribution over `n` outcomes with small integer weights.
pub fn random_distribution(rng: &mut StdRng, n: usize, allow_zero: bool) -> Vec<Rational> {
    let lo = if allow_zero { 0 } else { 1 };
    loop {
        let w: Vec<i64> = (0..n).map(|_| rng.random_range(lo..=6)).collect();
        let total: i64 = w.iter().sum();
        if total > 0 {
            return w.into_iter().map(|v| rat(v, total)).collect();
        }
    }
}

pub fn random_prior(rng: &mut StdRng, al: Alphabets) -> ObservationPrior {
    ObservationPrior::new(
        al.n_a,
        al.n_b,
        random_distribution(rng, al.n_a * al.n_b, false),
    )
    .unwrap()
}

/// Independent distribution in every context; usually signaling.
pub fn random_unconstrained(rng: &mut StdRng, al: Alphabets) -> Strategy {
    let table = (0..al.num_contexts())
        .flat_map(|_| random_distribution(rng, al.context_len(), true))
        .collect();
    Strategy::new(al, table).unwrap()
}

pub fn random_passive(rng: &mut StdRng, al: Alphabets, max_w: usize) -> PassiveMechanism {
    let n_w = rng.random_range(1..=max_w);
    let p_w = random_distribution(rng, n_w, true);
    let p_x = (0..n_w)
        .map(|_| {
            (0..al.n_a)
                .map(|_| random_distribution(rng, al.n_x, true))
                .collect()
        })
        .collect();
    let p_y = (0..n_w)
        .map(|_| {
            (0..al.n_b)
                .map(|_| random_distribution(rng, al.n_y, true))
                .collect()
        })
        .collect();
    PassiveMechanism::new(p_w, p_x, p_y).unwrap()
}

/// `sum_w p(w) P(x|a,w) P(y|b,w)` written out directly.
pub fn passive_oracle(m: &PassiveMechanism) -> Strategy {
    let al = m.alphabets();
    Strategy::from_fn(al, |a, b, x, y| {
        let mut t = int(0);
        for w in 0..m.n_w() {
            t += &m.p_w()[w] * &m.p_x_given_aw()[w][a][x] * &m.p_y_given_bw()[w][b][y];
        }
        t
    })
    .unwrap()
}

/// Moves a small amount of mass inside one context so that only venkat's
/// marginal changes (`venkat = true`) or only vivek's.
pub fn one_sided_perturbation(rng: &mut StdRng, s: &Strategy, venkat: bool) -> Option<Strategy> {
    let al = s.alphabets();
    let (a, b) = (rng.random_range(0..al.n_a), rng.random_range(0..al.n_b));
    let mut table = s.entries().to_vec();
    let candidates: Vec<(usize, usize)> = (0..al.n_x)
        .flat_map(|x| (0..al.n_y).map(move |y| (x, y)))
        .filter(|&(x, y)| *s.get(a, b, x, y) > int(0))
        .collect();
    let &(x, y) = candidates.get(rng.random_range(0..candidates.len()))?;
    let (tx, ty) = if venkat {
        if al.n_x < 2 {
            return None;
        }
        ((x + 1) % al.n_x, y)
    } else {
        if al.n_y < 2 {
            return None;
        }
        (x, (y + 1) % al.n_y)
    };
    let eps = s.get(a, b, x, y) / int(rng.random_range(1..=4));
    table[al.index(a, b, x, y)] -= &eps;
    table[al.index(a, b, tx, ty)] += &eps;
    Some(Strategy::new(al, table).unwrap())
}

/// Mixes binary vertices of either kind with random weights.
pub fn random_binary_ns(rng: &mut StdRng) -> Strategy {
    let mut parts = Vec::new();
    for v in ChshVariant::all() {
        parts.push(binary_nonlocal_vertex(v));
    }
    let weights = random_distribution(rng, parts.len(), true);
    let local = random_passive(rng, Alphabets::binary(), 3);
    let local = passive_oracle(&local);
    let lam = rat(rng.random_range(0..=4), 4);
    let mixed = Strategy::mixture(weights.iter().cloned().zip(parts.iter())).unwrap();
    Strategy::mixture([(lam.clone(), &mixed), (int(1) - lam, &local)]).unwrap()
}

/// A mixed corpus: unconstrained, passive, one-sided perturbations of
/// passive strategies, and binary mixtures involving non-local vertices.
pub fn random_corpus_strategy(rng: &mut StdRng) -> Strategy {
    match rng.random_range(0..5) {
        0 => {
            let al = random_alphabets(rng, 3);
            random_unconstrained(rng, al)
        }
        1 => {
            let al = random_alphabets(rng, 3);
            passive_oracle(&random_passive(rng, al, 4))
        }
        2 | 3 => {
            let al = random_alphabets(rng, 3);
            let base = passive_oracle(&random_passive(rng, al, 4));
            let venkat = rng.random_bool(0.5);
            one_sided_perturbation(rng, &base, venkat).unwrap_or(base)
        }
        _ => random_binary_ns(rng),
    }
}

/// `P(x | a, b)` for every `(a, b)`, computed from the table.
fn venkat_marginal(s: &Strategy, a: usize, b: usize, x: usize) -> Rational {
    let al = s.alphabets();
    (0..al.n_y).map(|y| s.get(a, b, x, y).clone()).sum()
}

fn vivek_marginal(s: &Strategy, a: usize, b: usize, y: usize) -> Rational {
    let al = s.alphabets();
    (0..al.n_x).map(|x| s.get(a, b, x, y).clone()).sum()
}

/// Venkat's marginal is independent of `b`.
pub fn venkat_ns_oracle(s: &Strategy) -> bool {
    let al = s.alphabets();
    (0..al.n_a).all(|a| {
        (0..al.n_x).all(|x| {
            (1..al.n_b).all(|b| venkat_marginal(s, a, b, x) == venkat_marginal(s, a, 0, x))
        })
    })
}

pub fn vivek_ns_oracle(s: &Strategy) -> bool {
    let al = s.alphabets();
    (0..al.n_b).all(|b| {
        (0..al.n_y)
            .all(|y| (1..al.n_a).all(|a| vivek_marginal(s, a, b, y) == vivek_marginal(s, 0, b, y)))
    })
}

pub fn ns_oracle(s: &Strategy) -> bool {
    venkat_ns_oracle(s) && vivek_ns_oracle(s)
}

/// Every deterministic pair `(f, g)` as explicit response vectors.
pub fn all_response_pairs(al: Alphabets) -> Vec<(Vec<usize>, Vec<usize>)> {
    fn all_functions(domain: usize, range: usize) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for _ in 0..domain {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<usize>| {
                    (0..range).map(move |v| {
                        let mut p = prefix.clone();
                        p.push(v);
                        p
                    })
                })
                .collect();
        }
        out
    }
    let fs = all_functions(al.n_a, al.n_x);
    let gs = all_functions(al.n_b, al.n_y);
    fs.iter()
        .flat_map(|f| gs.iter().map(move |g| (f.clone(), g.clone())))
        .collect()
}

/// `sum (-1)^(x+y) P(x,y|a,b)` with the variant's signs, cell by cell.
pub fn chsh_oracle(s: &Strategy, v: ChshVariant) -> Rational {
    let mut t = int(0);
    for a in 0..2 {
        for b in 0..2 {
            let parity =
                (a & b) ^ (v.alpha as usize & a) ^ (v.beta as usize & b) ^ v.gamma as usize;
            for x in 0..2 {
                for y in 0..2 {
                    let sign = if (parity ^ x ^ y) == 0 { 1 } else { -1 };
                    t += s.get(a, b, x, y) * int(sign);
                }
            }
        }
    }
    t
}
