mod common;

use common::*;
use nsctl::bell::{chsh_value, ChshVariant};
use nsctl::dist::{action_marginal, joint_from_prior};
use nsctl::format::{emit_strategy, parse_strategy};
use nsctl::mechanisms::{
    induce_active, induce_behavioral, induce_passive, simulate, simulate_chunked, ActiveMechanism,
    Source,
};
use nsctl::nosignaling::{
    check_no_signaling, check_posterior, conditional_mutual_information, factorization_holds,
    posterior_iff_ns, CmiQuery,
};
use nsctl::polytope::{local_membership, Membership};
use nsctl::rational::int;
use nsctl::{Alphabets, ObservationPrior, Side};
use proptest::prelude::*;

fn thousand() -> ProptestConfig {
    ProptestConfig::with_cases(1000)
}

proptest! {
    #![proptest_config(thousand())]

    #[test]
    fn contexts_and_marginals_sum_to_one(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = random_corpus_strategy(&mut r);
        let al = s.alphabets();
        for (a, b) in al.contexts() {
            let total: nsctl::Rational = s.context(a, b).iter().cloned().sum();
            prop_assert_eq!(total, int(1));
            for side in [Side::Venkat, Side::Vivek] {
                let m: nsctl::Rational = action_marginal(&s, side, a, b).unwrap().into_iter().sum();
                prop_assert_eq!(m, int(1));
            }
        }
    }

    #[test]
    fn emit_then_parse_is_identity(seed in any::<u64>(), with_prior in any::<bool>()) {
        let mut r = rng(seed);
        let s = random_corpus_strategy(&mut r);
        let prior = with_prior.then(|| random_prior(&mut r, s.alphabets()));
        let text = emit_strategy(&s, prior.as_ref());
        let (back, back_prior) = parse_strategy(&text).unwrap();
        prop_assert_eq!(&back, &s);
        match (&prior, &back_prior) {
            (Some(p), Some(q)) => prop_assert_eq!(p, q),
            (Some(p), None) => prop_assert!(p.is_uniform()),
            (None, q) => prop_assert!(q.is_none()),
        }
        prop_assert_eq!(emit_strategy(&back, back_prior.as_ref()), text);
    }

    #[test]
    fn passive_mechanisms_never_signal(seed in any::<u64>()) {
        let mut r = rng(seed);
        let al = random_alphabets(&mut r, 3);
        let m = random_passive(&mut r, al, 5);
        let s = induce_passive(&m);
        prop_assert_eq!(&s, &passive_oracle(&m));
        prop_assert!(check_no_signaling(&s).holds);
        prop_assert_eq!(induce_active(&ActiveMechanism::from_passive(&m)), s);
    }

    #[test]
    fn behavioral_strategies_never_signal(seed in any::<u64>()) {
        let mut r = rng(seed);
        let al = random_alphabets(&mut r, 3);
        let px: Vec<_> = (0..al.n_a).map(|_| random_distribution(&mut r, al.n_x, true)).collect();
        let py: Vec<_> = (0..al.n_b).map(|_| random_distribution(&mut r, al.n_y, true)).collect();
        let s = induce_behavioral(&px, &py).unwrap();
        prop_assert!(check_no_signaling(&s).holds);
        for (a, b, x, y) in al.cells() {
            prop_assert_eq!(s.get(a, b, x, y), &(&px[a][x] * &py[b][y]));
        }
    }

    #[test]
    fn posterior_matches_no_signaling(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = random_corpus_strategy(&mut r);
        let p = random_prior(&mut r, s.alphabets());
        prop_assert!(posterior_iff_ns(&s, &p).unwrap());
        prop_assert_eq!(check_posterior(&s, &p).unwrap().holds, ns_oracle(&s));
    }

    #[test]
    fn factorization_tracks_each_side(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = random_corpus_strategy(&mut r);
        let p = random_prior(&mut r, s.alphabets());
        let j = joint_from_prior(&s, &p).unwrap();
        let x = factorization_holds(&j, CmiQuery::ActionXObservationB);
        let y = factorization_holds(&j, CmiQuery::ActionYObservationA);
        prop_assert_eq!(x, venkat_ns_oracle(&s));
        prop_assert_eq!(y, vivek_ns_oracle(&s));
        prop_assert_eq!(x && y, check_no_signaling(&s).holds);
        for q in [CmiQuery::ActionXObservationB, CmiQuery::ActionYObservationA] {
            prop_assert!(conditional_mutual_information(&j, q) >= -1e-12);
        }
    }

    #[test]
    fn binary_local_mixtures_satisfy_chsh(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = passive_oracle(&random_passive(&mut r, Alphabets::binary(), 6));
        let Membership::Feasible(d) = local_membership(&s).unwrap() else {
            return Err(TestCaseError::fail("local mixture reported infeasible"));
        };
        prop_assert_eq!(d.reconstruct(), s.clone());
        for v in ChshVariant::all() {
            prop_assert!(chsh_value(&s, v).unwrap() <= int(2));
        }
    }

    #[test]
    fn chsh_is_bounded_by_four(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = random_unconstrained(&mut r, Alphabets::binary());
        for v in ChshVariant::all() {
            let c = chsh_value(&s, v).unwrap();
            prop_assert!(c >= int(-4) && c <= int(4));
            prop_assert_eq!(c, chsh_oracle(&s, v));
        }
    }

    #[test]
    fn feasible_implies_no_signaling(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = random_corpus_strategy(&mut r);
        if s.alphabets().len() > 36 {
            return Ok(());
        }
        if local_membership(&s).unwrap().is_feasible() {
            prop_assert!(check_no_signaling(&s).holds);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn binary_ns_mixtures_separate_when_violating(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = random_binary_ns(&mut r);
        prop_assert!(check_no_signaling(&s).holds);
        let violates = ChshVariant::all().any(|v| chsh_value(&s, v).unwrap() > int(2));
        match local_membership(&s).unwrap() {
            Membership::Feasible(d) => {
                prop_assert!(!violates);
                prop_assert_eq!(d.reconstruct(), s);
            }
            Membership::Infeasible(c) => prop_assert!(c.verify(&s)),
        }
    }

    #[test]
    fn simulation_is_reproducible(seed in any::<u64>(), trials in 1u64..3000, chunks in 1usize..5) {
        let mut r = rng(seed);
        let al = random_alphabets(&mut r, 3);
        let m = random_passive(&mut r, al, 4);
        let prior = random_prior(&mut r, al);
        let a = simulate_chunked(Source::Passive(&m), &prior, trials, seed, chunks).unwrap();
        let b = simulate_chunked(Source::Passive(&m), &prior, trials, seed, chunks).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.total_trials(), trials);
        for (ca, cb) in al.contexts() {
            let n: u64 = (0..al.n_x).flat_map(|x| (0..al.n_y).map(move |y| (x, y)))
                .map(|(x, y)| a.count(ca, cb, x, y)).sum();
            prop_assert_eq!(n, a.trials(ca, cb));
        }
        let one = simulate(Source::OneWay, &ObservationPrior::uniform(2, 2), trials, seed).unwrap();
        prop_assert_eq!(one, simulate(Source::OneWay, &ObservationPrior::uniform(2, 2), trials, seed).unwrap());
    }
}
