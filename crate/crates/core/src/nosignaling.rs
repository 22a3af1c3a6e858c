//! No-signaling and posterior conditions, conditional mutual information,
//! and passivity of common randomness.
//!
//! Every decision here is an exact rational comparison. Mutual-information
//! values are floats for reporting only.

use crate::dist::{
    joint_from_prior, Alphabets, DistError, JointDistribution, ObservationPrior, Side, Strategy,
};
use crate::rational::{self, Rational};
use num_traits::{Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NsError {
    #[error("prior gives zero probability to observation {side_label}={index}; conditional is undefined")]
    DegeneratePrior { side_label: char, index: usize },
    #[error(transparent)]
    Dist(#[from] DistError),
}

/// One failed equality. For the no-signaling check `lhs` is the action
/// marginal in context `(a, b)` and `rhs` the same marginal with the other
/// agent's observation replaced by `other`. For the posterior check `lhs` is
/// the posterior given the action and `rhs` the posterior without it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub side: Side,
    pub a: usize,
    pub b: usize,
    pub other: Option<usize>,
    pub action: usize,
    pub lhs: Rational,
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NsReport {
    pub holds: bool,
    pub violations: Vec<Violation>,
}

impl NsReport {
    fn from_violations(violations: Vec<Violation>) -> Self {
        Self {
            holds: violations.is_empty(),
            violations,
        }
    }
}

/// `sum_y s[a,b,x,y]` must not depend on `b`, and `sum_x s[a,b,x,y]` must not
/// depend on `a`. Every pair of alternatives is compared.
pub fn check_no_signaling(s: &Strategy) -> NsReport {
    let al = s.alphabets();
    let mut violations = Vec::new();
    let marginal =
        |side, a, b| crate::dist::action_marginal(s, side, a, b).expect("indices in range");

    for a in 0..al.n_a {
        let rows: Vec<Vec<Rational>> = (0..al.n_b).map(|b| marginal(Side::Venkat, a, b)).collect();
        for b in 0..al.n_b {
            for b_alt in b + 1..al.n_b {
                for x in 0..al.n_x {
                    if rows[b][x] != rows[b_alt][x] {
                        violations.push(Violation {
                            side: Side::Venkat,
                            a,
                            b,
                            other: Some(b_alt),
                            action: x,
                            lhs: rows[b][x].clone(),
                            rhs: rows[b_alt][x].clone(),
                        });
                    }
                }
            }
        }
    }
    for b in 0..al.n_b {
        let cols: Vec<Vec<Rational>> = (0..al.n_a).map(|a| marginal(Side::Vivek, a, b)).collect();
        for a in 0..al.n_a {
            for a_alt in a + 1..al.n_a {
                for y in 0..al.n_y {
                    if cols[a][y] != cols[a_alt][y] {
                        violations.push(Violation {
                            side: Side::Vivek,
                            a,
                            b,
                            other: Some(a_alt),
                            action: y,
                            lhs: cols[a][y].clone(),
                            rhs: cols[a_alt][y].clone(),
                        });
                    }
                }
            }
        }
    }
    NsReport::from_violations(violations)
}

/// Sums of the joint used by the posterior and information computations.
struct JointSums {
    al: Alphabets,
    /// P(a, b)
    ab: Vec<Rational>,
    /// P(a, b, x)
    abx: Vec<Rational>,
    /// P(a, b, y)
    aby: Vec<Rational>,
}

impl JointSums {
    fn new(j: &JointDistribution) -> Self {
        let al = j.alphabets();
        let mut ab = vec![Rational::zero(); al.num_contexts()];
        let mut abx = vec![Rational::zero(); al.num_contexts() * al.n_x];
        let mut aby = vec![Rational::zero(); al.num_contexts() * al.n_y];
        for (a, b, x, y) in al.cells() {
            let p = j.get(x, y, a, b);
            if p.is_zero() {
                continue;
            }
            let k = a * al.n_b + b;
            ab[k] += p;
            abx[k * al.n_x + x] += p;
            aby[k * al.n_y + y] += p;
        }
        Self { al, ab, abx, aby }
    }

    fn p_ab(&self, a: usize, b: usize) -> &Rational {
        &self.ab[a * self.al.n_b + b]
    }

    fn p_abx(&self, a: usize, b: usize, x: usize) -> &Rational {
        &self.abx[(a * self.al.n_b + b) * self.al.n_x + x]
    }

    fn p_aby(&self, a: usize, b: usize, y: usize) -> &Rational {
        &self.aby[(a * self.al.n_b + b) * self.al.n_y + y]
    }

    fn p_a(&self, a: usize) -> Rational {
        (0..self.al.n_b).map(|b| self.p_ab(a, b)).sum()
    }

    fn p_b(&self, b: usize) -> Rational {
        (0..self.al.n_a).map(|a| self.p_ab(a, b)).sum()
    }

    fn p_ax(&self, a: usize, x: usize) -> Rational {
        (0..self.al.n_b).map(|b| self.p_abx(a, b, x)).sum()
    }

    fn p_by(&self, b: usize, y: usize) -> Rational {
        (0..self.al.n_a).map(|a| self.p_aby(a, b, y)).sum()
    }
}

/// Checks `P(b | a, x) = P(b | a)` and `P(a | b, y) = P(a | b)` on every
/// conditioning event of positive probability. A prior that leaves some
/// observation with zero marginal probability is rejected.
pub fn check_posterior(s: &Strategy, p: &ObservationPrior) -> Result<NsReport, NsError> {
    let j = joint_from_prior(s, p)?;
    let sums = JointSums::new(&j);
    let al = sums.al;
    for (a, pa) in p.marginal_a().iter().enumerate() {
        if pa.is_zero() {
            return Err(NsError::DegeneratePrior {
                side_label: 'a',
                index: a,
            });
        }
    }
    for (b, pb) in p.marginal_b().iter().enumerate() {
        if pb.is_zero() {
            return Err(NsError::DegeneratePrior {
                side_label: 'b',
                index: b,
            });
        }
    }

    let mut violations = Vec::new();
    for a in 0..al.n_a {
        let pa = sums.p_a(a);
        for x in 0..al.n_x {
            let pax = sums.p_ax(a, x);
            if pax.is_zero() {
                continue;
            }
            for b in 0..al.n_b {
                let lhs = sums.p_abx(a, b, x) / &pax;
                let rhs = sums.p_ab(a, b) / &pa;
                if lhs != rhs {
                    violations.push(Violation {
                        side: Side::Venkat,
                        a,
                        b,
                        other: None,
                        action: x,
                        lhs,
                        rhs,
                    });
                }
            }
        }
    }
    for b in 0..al.n_b {
        let pb = sums.p_b(b);
        for y in 0..al.n_y {
            let pby = sums.p_by(b, y);
            if pby.is_zero() {
                continue;
            }
            for a in 0..al.n_a {
                let lhs = sums.p_aby(a, b, y) / &pby;
                let rhs = sums.p_ab(a, b) / &pb;
                if lhs != rhs {
                    violations.push(Violation {
                        side: Side::Vivek,
                        a,
                        b,
                        other: None,
                        action: y,
                        lhs,
                        rhs,
                    });
                }
            }
        }
    }
    Ok(NsReport::from_violations(violations))
}

/// Whether the two exact checks agree. Under a full-support prior this is
/// always true.
pub fn posterior_iff_ns(s: &Strategy, p: &ObservationPrior) -> Result<bool, NsError> {
    Ok(check_no_signaling(s).holds == check_posterior(s, p)?.holds)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmiQuery {
    /// `I(X; B | A)`
    ActionXObservationB,
    /// `I(Y; A | B)`
    ActionYObservationA,
}

/// Exact test of `P(x | a, b) = P(x | a)` (or the vivek counterpart) on every
/// `(a, b)` of positive probability, via
/// `P(a,b,x) P(a) = P(a,x) P(a,b)`.
pub fn factorization_holds(j: &JointDistribution, which: CmiQuery) -> bool {
    let sums = JointSums::new(j);
    let al = sums.al;
    match which {
        CmiQuery::ActionXObservationB => (0..al.n_a).all(|a| {
            let pa = sums.p_a(a);
            (0..al.n_x).all(|x| {
                let pax = sums.p_ax(a, x);
                (0..al.n_b).all(|b| sums.p_abx(a, b, x) * &pa == &pax * sums.p_ab(a, b))
            })
        }),
        CmiQuery::ActionYObservationA => (0..al.n_b).all(|b| {
            let pb = sums.p_b(b);
            (0..al.n_y).all(|y| {
                let pby = sums.p_by(b, y);
                (0..al.n_a).all(|a| sums.p_aby(a, b, y) * &pb == &pby * sums.p_ab(a, b))
            })
        }),
    }
}

/// Conditional mutual information in nats, with `0 log 0 = 0`. Each log
/// ratio is formed exactly before conversion, so an exact factorization
/// yields exactly zero.
pub fn conditional_mutual_information(j: &JointDistribution, which: CmiQuery) -> f64 {
    let sums = JointSums::new(j);
    let al = sums.al;
    let mut total = 0.0;
    match which {
        CmiQuery::ActionXObservationB => {
            for a in 0..al.n_a {
                let pa = sums.p_a(a);
                for x in 0..al.n_x {
                    let pax = sums.p_ax(a, x);
                    for b in 0..al.n_b {
                        let pabx = sums.p_abx(a, b, x);
                        if pabx.is_zero() {
                            continue;
                        }
                        let ratio = pabx * &pa / (&pax * sums.p_ab(a, b));
                        total += rational::to_f64(pabx) * rational::to_f64(&ratio).ln();
                    }
                }
            }
        }
        CmiQuery::ActionYObservationA => {
            for b in 0..al.n_b {
                let pb = sums.p_b(b);
                for y in 0..al.n_y {
                    let pby = sums.p_by(b, y);
                    for a in 0..al.n_a {
                        let paby = sums.p_aby(a, b, y);
                        if paby.is_zero() {
                            continue;
                        }
                        let ratio = paby * &pb / (&pby * sums.p_ab(a, b));
                        total += rational::to_f64(paby) * rational::to_f64(&ratio).ln();
                    }
                }
            }
        }
    }
    total
}

/// Joint distribution `P(w, a, b)` of common randomness and observations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WJoint {
    n_w: usize,
    n_a: usize,
    n_b: usize,
    table: Vec<Rational>,
}

impl WJoint {
    /// `table` is indexed `(w * n_a + a) * n_b + b`.
    pub fn new(
        n_w: usize,
        n_a: usize,
        n_b: usize,
        table: Vec<Rational>,
    ) -> Result<Self, DistError> {
        if n_w == 0 || n_a == 0 || n_b == 0 {
            return Err(DistError::EmptyAlphabet([n_w, n_a, n_b, 1]));
        }
        if table.len() != n_w * n_a * n_b {
            return Err(DistError::DimensionMismatch {
                expected: n_w * n_a * n_b,
                found: table.len(),
            });
        }
        if let Some(i) = table.iter().position(|v| v.is_negative()) {
            return Err(DistError::NegativePrior {
                a: (i / n_b) % n_a,
                b: i % n_b,
                value: table[i].clone(),
            });
        }
        let total: Rational = table.iter().sum();
        if total != rational::one() {
            return Err(DistError::NotNormalized {
                deficit: rational::one() - total,
            });
        }
        Ok(Self {
            n_w,
            n_a,
            n_b,
            table,
        })
    }

    pub fn n_w(&self) -> usize {
        self.n_w
    }

    pub fn get(&self, w: usize, a: usize, b: usize) -> &Rational {
        &self.table[(w * self.n_a + a) * self.n_b + b]
    }

    pub fn p_w(&self) -> Vec<Rational> {
        let block = self.n_a * self.n_b;
        self.table.chunks(block).map(|c| c.iter().sum()).collect()
    }

    pub fn p_ab(&self) -> Vec<Rational> {
        let block = self.n_a * self.n_b;
        let mut out = vec![Rational::zero(); block];
        for chunk in self.table.chunks(block) {
            for (o, v) in out.iter_mut().zip(chunk) {
                *o += v;
            }
        }
        out
    }

    /// `I(W; A, B)` in nats.
    pub fn mutual_information(&self) -> f64 {
        let pw = self.p_w();
        let pab = self.p_ab();
        let block = self.n_a * self.n_b;
        let mut total = 0.0;
        for (i, v) in self.table.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let ratio = v / (&pw[i / block] * &pab[i % block]);
            total += rational::to_f64(v) * rational::to_f64(&ratio).ln();
        }
        total
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PassivityReport {
    pub passive: bool,
    /// `(w, a, b, |P(w,a,b) - P(w) P(a,b)|)` at the largest deviation.
    pub worst: Option<(usize, usize, usize, Rational)>,
}

/// `W` is passive iff `P(w, a, b) = P(w) P(a, b)` everywhere.
pub fn is_passive(wj: &WJoint) -> PassivityReport {
    let pw = wj.p_w();
    let pab = wj.p_ab();
    let mut worst: Option<(usize, usize, usize, Rational)> = None;
    for w in 0..wj.n_w {
        for a in 0..wj.n_a {
            for b in 0..wj.n_b {
                let dev = (wj.get(w, a, b) - &pw[w] * &pab[a * wj.n_b + b]).abs();
                if dev.is_zero() {
                    continue;
                }
                if worst.as_ref().is_none_or(|(.., d)| dev > *d) {
                    worst = Some((w, a, b, dev));
                }
            }
        }
    }
    PassivityReport {
        passive: worst.is_none(),
        worst,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::rational::{int, rat, zero};

    fn copy_b_strategy() -> Strategy {
        Strategy::from_fn(Alphabets::binary(), |_, b, x, y| {
            if x == b && y == 0 {
                int(1)
            } else {
                zero()
            }
        })
        .unwrap()
    }

    /// Brute-force Bayes directly from the 16-entry joint, independent of
    /// `JointSums`.
    fn brute_force_posterior_holds(s: &Strategy, p: &ObservationPrior) -> bool {
        let j = joint_from_prior(s, p).unwrap();
        let prob = |f: &dyn Fn(usize, usize, usize, usize) -> bool| -> Rational {
            let mut t = zero();
            for (a, b, x, y) in s.alphabets().cells() {
                if f(a, b, x, y) {
                    t += j.get(x, y, a, b);
                }
            }
            t
        };
        let al = s.alphabets();
        for a in 0..al.n_a {
            for x in 0..al.n_x {
                let pax = prob(&|aa, _, xx, _| aa == a && xx == x);
                if pax.is_zero() {
                    continue;
                }
                let pa = prob(&|aa, _, _, _| aa == a);
                for b in 0..al.n_b {
                    let lhs = prob(&|aa, bb, xx, _| aa == a && bb == b && xx == x) / &pax;
                    let rhs = prob(&|aa, bb, _, _| aa == a && bb == b) / &pa;
                    if lhs != rhs {
                        return false;
                    }
                }
            }
        }
        for b in 0..al.n_b {
            for y in 0..al.n_y {
                let pby = prob(&|_, bb, _, yy| bb == b && yy == y);
                if pby.is_zero() {
                    continue;
                }
                let pb = prob(&|_, bb, _, _| bb == b);
                for a in 0..al.n_a {
                    let lhs = prob(&|aa, bb, _, yy| aa == a && bb == b && yy == y) / &pby;
                    let rhs = prob(&|aa, bb, _, _| aa == a && bb == b) / &pb;
                    if lhs != rhs {
                        return false;
                    }
                }
            }
        }
        true
    }

    #[test]
    fn catalog_examples_are_no_signaling() {
        assert!(check_no_signaling(&catalog::example_ab3()).holds);
        assert!(check_no_signaling(&catalog::example_binary2()).holds);
    }

    #[test]
    fn copying_the_other_observation_signals() {
        let r = check_no_signaling(&copy_b_strategy());
        assert!(!r.holds);
        assert!(r.violations.iter().all(|v| v.side == Side::Venkat));
        assert!(r.violations.iter().all(|v| v.lhs != v.rhs));
        assert_eq!(r.violations.len(), 4);
    }

    #[test]
    fn posterior_binary2_uniform() {
        let s = catalog::example_binary2();
        let p = ObservationPrior::uniform(2, 2);
        assert!(brute_force_posterior_holds(&s, &p));
        assert!(check_posterior(&s, &p).unwrap().holds);
        assert!(posterior_iff_ns(&s, &p).unwrap());
    }

    #[test]
    fn posterior_fails_for_signaling_strategy() {
        let s = copy_b_strategy();
        let p = ObservationPrior::uniform(2, 2);
        assert!(!brute_force_posterior_holds(&s, &p));
        assert!(!check_posterior(&s, &p).unwrap().holds);
        assert!(posterior_iff_ns(&s, &p).unwrap());
    }

    #[test]
    fn point_mass_prior_is_degenerate() {
        let s = catalog::example_binary2();
        let p = ObservationPrior::point_mass(2, 2, 0, 0);
        assert!(matches!(
            check_posterior(&s, &p),
            Err(NsError::DegeneratePrior { .. })
        ));
    }

    #[test]
    fn cmi_zero_for_binary2() {
        let j = joint_from_prior(
            &catalog::example_binary2(),
            &ObservationPrior::uniform(2, 2),
        )
        .unwrap();
        for q in [CmiQuery::ActionXObservationB, CmiQuery::ActionYObservationA] {
            assert!(factorization_holds(&j, q));
            let v = conditional_mutual_information(&j, q);
            assert!(v.abs() < 1e-12, "{v}");
        }
    }

    #[test]
    fn cmi_zero_for_independent_uniform() {
        let j = joint_from_prior(
            &Strategy::uniform(Alphabets::binary()),
            &ObservationPrior::uniform(2, 2),
        )
        .unwrap();
        assert_eq!(
            conditional_mutual_information(&j, CmiQuery::ActionXObservationB),
            0.0
        );
    }

    #[test]
    fn cmi_of_copied_bit_is_ln_two() {
        let j = joint_from_prior(&copy_b_strategy(), &ObservationPrior::uniform(2, 2)).unwrap();
        // Direct summation: x = b with b uniform and independent of a gives
        // I(X;B|A) = H(X|A) = ln 2.
        let mut direct = 0.0;
        for _ in 0..4 {
            // each (a, b) with x = b: P(a,b,x) = 1/4, P(a) = 1/2, P(a,x) = 1/4, P(a,b) = 1/4
            let (pabx, pa, pax, pab) = (0.25_f64, 0.5, 0.25, 0.25);
            direct += pabx * ((pabx * pa) / (pax * pab)).ln();
        }
        let v = conditional_mutual_information(&j, CmiQuery::ActionXObservationB);
        assert!((v - direct).abs() < 1e-12);
        assert!((v - std::f64::consts::LN_2).abs() < 1e-9);
        assert!(!factorization_holds(&j, CmiQuery::ActionXObservationB));
        assert!(factorization_holds(&j, CmiQuery::ActionYObservationA));
    }

    #[test]
    fn product_w_is_passive() {
        let table = vec![rat(1, 12); 12];
        let wj = WJoint::new(3, 2, 2, table).unwrap();
        let r = is_passive(&wj);
        assert!(r.passive);
        assert!(r.worst.is_none());
        assert!(wj.mutual_information().abs() < 1e-15);
    }

    #[test]
    fn single_w_is_passive() {
        let wj = WJoint::new(1, 2, 2, vec![rat(1, 2), rat(1, 6), rat(1, 6), rat(1, 6)]).unwrap();
        assert!(is_passive(&wj).passive);
    }

    #[test]
    fn correlated_w_is_active() {
        // w copies a
        let mut table = vec![zero(); 8];
        for a in 0..2 {
            for b in 0..2 {
                table[(a * 2 + a) * 2 + b] = rat(1, 4);
            }
        }
        let wj = WJoint::new(2, 2, 2, table).unwrap();
        let r = is_passive(&wj);
        assert!(!r.passive);
        assert_eq!(r.worst.unwrap().3, rat(1, 8));
        assert!((wj.mutual_information() - std::f64::consts::LN_2).abs() < 1e-12);
    }
}
