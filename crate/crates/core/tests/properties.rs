//! Invariants checked against independent oracles.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use univoque::automaton::{build_automaton, Mode};
use univoque::enumerate::{enum_prefixes, symbolic_hausdorff, SetKind};
use univoque::expansions::{
    in_uq_prime, in_vq_prime, is_unique_expansion, quasi_greedy_alpha, Status,
};
use univoque::numerics::{eval_value, tail_bound, BaseValue};
use univoque::trie::{PrefixTrie, TrieMode};
use univoque::words::{Alphabet, Dyadic, PeriodicSeq};

fn alphabet(m: u8) -> Alphabet {
    Alphabet::new(m).unwrap()
}

/// `(M, p, d)` with `1 < p/d <= M + 1`.
fn rational_base() -> impl Strategy<Value = (u8, i64, i64)> {
    (1u8..=2, 2i64..=40).prop_flat_map(|(m, d)| (Just(m), (d + 1)..=(d * (m as i64 + 1)), Just(d)))
}

fn base(m: u8, p: i64, d: i64) -> BaseValue {
    BaseValue::rational(
        BigRational::new(BigInt::from(p), BigInt::from(d)),
        alphabet(m),
    )
    .unwrap()
}

fn digits(m: u8, len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0..=m, len)
}

fn periodic(m: u8) -> impl Strategy<Value = PeriodicSeq> {
    (digits(m, 0..4), digits(m, 1..5))
        .prop_map(move |(pre, per)| PeriodicSeq::new(pre, per, alphabet(m)).unwrap())
}

/// Direct reading of the lexicographic conditions on the finitely many shifts of `c`.
fn lex_member(c: &PeriodicSeq, alpha: &PeriodicSeq, strict: bool) -> bool {
    let m = c.alphabet().max();
    let reflected = alpha.reflect();
    (1..=c.cycle_bound() + 1).all(|k| {
        let s = c.shift(k);
        let below = match s.lex_cmp(alpha) {
            Ordering::Less => true,
            Ordering::Equal => !strict,
            Ordering::Greater => false,
        };
        let above = match s.lex_cmp(&reflected) {
            Ordering::Greater => true,
            Ordering::Equal => !strict,
            Ordering::Less => false,
        };
        (c.digit(k) == m || below) && (c.digit(k) == 0 || above)
    })
}

/// Hausdorff distance for the ρ metric by its definition.
fn rho_hausdorff(a: &[PeriodicSeq], b: &[PeriodicSeq]) -> Dyadic {
    let directed = |x: &[PeriodicSeq], y: &[PeriodicSeq]| {
        x.iter()
            .map(|s| y.iter().map(|t| s.rho_distance(t)).min().unwrap())
            .max()
            .unwrap()
    };
    directed(a, b).max(directed(b, a))
}

fn trie_of(seqs: &[PeriodicSeq], n: usize) -> PrefixTrie {
    let mut t = PrefixTrie::new(seqs[0].alphabet(), n, TrieMode::Certified);
    for s in seqs {
        t.insert(s.prefix(n).digits()).unwrap();
    }
    t
}

fn random_trie(m: u8, n: usize) -> impl Strategy<Value = PrefixTrie> {
    prop::collection::vec(digits(m, n..n + 1), 1..6).prop_map(move |ws| {
        let mut t = PrefixTrie::new(alphabet(m), n, TrieMode::Certified);
        for w in ws {
            t.insert(&w).unwrap();
        }
        t
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn automaton_matches_lexicographic_oracle(
        (alpha, c) in (1u8..=2).prop_flat_map(|m| (periodic(m), periodic(m))),
    ) {
        for (mode, strict) in [(Mode::Strict, true), (Mode::NonStrict, false)] {
            if let Ok(a) = build_automaton(&alpha, mode) {
                prop_assert_eq!(a.accepts(&c), lex_member(&c, &alpha, strict), "{} {}", alpha, c);
            }
        }
    }

    #[test]
    fn alpha_is_self_admissible((m, p, d) in rational_base()) {
        let q = base(m, p, d);
        let alpha = quasi_greedy_alpha(&q, 48).unwrap();
        let w = alpha.prefix.digits();
        for k in 1..w.len() {
            prop_assert!(w[k..] <= w[..w.len() - k], "shift {} of {}", k, alpha);
        }
        if let Some(per) = &alpha.certified_periodic {
            prop_assert!(build_automaton(per, Mode::Strict).is_ok());
        }
    }

    #[test]
    fn membership_agrees_with_uniqueness(
        ((m, p, d), c) in rational_base().prop_flat_map(|b| (Just(b), periodic(b.0))),
    ) {
        let q = base(m, p, d);
        let member = in_uq_prime(&c, &q, 64).unwrap();
        let unique = is_unique_expansion(&eval_value(&c, &q).unwrap(), &q, 64).unwrap();
        if member.status != Status::Unknown && unique.status != Status::Unknown {
            prop_assert_eq!(member.is_in(), unique.is_in(), "c={} q={}/{}", c, p, d);
        }
        // U' is contained in V'
        if member.is_in() {
            prop_assert!(in_vq_prime(&c, &q, 64).unwrap().status != Status::Out);
        }
    }

    #[test]
    fn prefix_sets_grow_with_the_base(
        (m, p, d) in rational_base(),
        bump in 1i64..20,
    ) {
        let n = 6;
        let lo = base(m, p, d);
        let hi_num = (p * 20 + bump).min(d * 20 * (m as i64 + 1));
        prop_assume!(hi_num > p * 20);
        let hi = base(m, hi_num, d * 20);
        for kind in [SetKind::U, SetKind::V] {
            let a = enum_prefixes(&lo, n, kind, 64).unwrap();
            let b = enum_prefixes(&hi, n, kind, 64).unwrap();
            prop_assert!(a.lower.is_subset(&b.upper), "{}/{} kind {}", p, d, kind);
        }
        let u = enum_prefixes(&lo, n, SetKind::U, 64).unwrap();
        let v = enum_prefixes(&lo, n, SetKind::V, 64).unwrap();
        prop_assert!(u.lower.is_subset(&v.upper));
    }

    #[test]
    fn prefix_sets_are_prefix_closed((m, p, d) in rational_base(), n in 1usize..7) {
        let q = base(m, p, d);
        let short = enum_prefixes(&q, n, SetKind::U, 64).unwrap();
        let long = enum_prefixes(&q, n + 1, SetKind::U, 64).unwrap();
        if short.certified && long.certified {
            prop_assert_eq!(long.lower.truncate(n), short.lower);
        }
        prop_assert!(long.lower.truncate(n).is_subset(&short.upper));
    }

    #[test]
    fn values_are_lipschitz(
        (m, p, d) in rational_base(),
        common in digits(2, 0..12),
        tails in (digits(2, 0..3), digits(2, 1..4), digits(2, 0..3), digits(2, 1..4)),
    ) {
        let a = alphabet(m);
        let clip = |v: &[u8]| v.iter().map(|&x| x.min(m)).collect::<Vec<_>>();
        let w = clip(&common);
        let c = PeriodicSeq::new(clip(&tails.0), clip(&tails.1), a).unwrap().prepend(&w);
        let e = PeriodicSeq::new(clip(&tails.2), clip(&tails.3), a).unwrap().prepend(&w);
        let q = base(m, p, d);
        let diff = eval_value(&c, &q).unwrap().sub(&eval_value(&e, &q).unwrap()).unwrap().abs().unwrap();
        let bound = tail_bound(&q, w.len()).unwrap();
        prop_assert!(diff.compare(&bound).unwrap() != Ordering::Greater);
    }

    #[test]
    fn symbolic_distance_is_an_ultrametric(
        (a, b, c) in (1u8..=2, 1usize..7).prop_flat_map(|(m, n)| (random_trie(m, n), random_trie(m, n), random_trie(m, n))),
    ) {
        let ab = symbolic_hausdorff(&a, &b).unwrap();
        let bc = symbolic_hausdorff(&b, &c).unwrap();
        let ac = symbolic_hausdorff(&a, &c).unwrap();
        prop_assert!(ac <= ab.max(bc));
        prop_assert_eq!(ab, symbolic_hausdorff(&b, &a).unwrap());
        prop_assert!(symbolic_hausdorff(&a, &a).unwrap().is_zero());
    }

    #[test]
    fn prefix_distance_matches_definition(
        (s, t) in (1u8..=2).prop_flat_map(|m| (prop::collection::vec(periodic(m), 1..5), prop::collection::vec(periodic(m), 1..5))),
        extra in 0usize..5,
    ) {
        // distinct sequences differ within preperiod + lcm of periods <= 3 + 12 digits
        let n = 16 + extra;
        let direct = rho_hausdorff(&s, &t);
        let symbolic = symbolic_hausdorff(&trie_of(&s, n), &trie_of(&t, n)).unwrap();
        prop_assert_eq!(direct, symbolic);
    }

    #[test]
    fn distance_ignores_points_inside_existing_cylinders(
        (s, t) in (1u8..=2).prop_flat_map(|m| (prop::collection::vec(periodic(m), 1..4), prop::collection::vec(periodic(m), 1..4))),
        pick in any::<prop::sample::Index>(),
        n in 1usize..8,
        tail in periodic(1),
    ) {
        // a new point sharing its first n digits with a member leaves B_n unchanged
        let base_seq = &s[pick.index(s.len())];
        let m = base_seq.alphabet().max();
        let tail = PeriodicSeq::new(
            tail.preperiod().iter().map(|&x| x.min(m)).collect(),
            tail.period().iter().map(|&x| x.min(m)).collect(),
            base_seq.alphabet(),
        ).unwrap();
        let perturbed: Vec<_> = s.iter().cloned().chain([tail.prepend(base_seq.prefix(n).digits())]).collect();
        let before = symbolic_hausdorff(&trie_of(&s, n), &trie_of(&t, n)).unwrap();
        let after = symbolic_hausdorff(&trie_of(&perturbed, n), &trie_of(&t, n)).unwrap();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn alpha_grows_with_the_base((m, p, d) in rational_base(), (p2, d2) in (2i64..=40).prop_flat_map(|d| ((d + 1)..=(3 * d), Just(d)))) {
        let r = BigRational::new(BigInt::from(p2), BigInt::from(d2));
        prop_assume!(r <= BigRational::from_integer((m as i64 + 1).into()));
        let (a, b) = (base(m, p, d), BaseValue::rational(r.clone(), alphabet(m)).unwrap());
        let (x, y) = (quasi_greedy_alpha(&a, 40).unwrap(), quasi_greedy_alpha(&b, 40).unwrap());
        let ord = BigRational::new(BigInt::from(p), BigInt::from(d)).cmp(&r);
        if ord != Ordering::Greater {
            prop_assert!(x.prefix.digits() <= y.prefix.digits());
        } else {
            prop_assert!(x.prefix.digits() >= y.prefix.digits());
        }
    }

    #[test]
    fn v_of_a_smaller_base_lies_in_u_of_a_larger_one(
        ((m, p, d), c) in rational_base().prop_flat_map(|b| (Just(b), periodic(b.0))),
        bump in 1i64..40,
    ) {
        let small = base(m, p * 40, d * 40);
        let big_num = p * 40 + bump;
        prop_assume!(big_num <= d * 40 * (m as i64 + 1));
        let big = base(m, big_num, d * 40);
        if in_vq_prime(&c, &small, 64).unwrap().is_in() {
            prop_assert!(in_uq_prime(&c, &big, 64).unwrap().status != Status::Out, "{} at {}/{}", c, p, d);
        }
    }
}

#[test]
fn alpha_from_the_right_converges_to_beta_at_kl() {
    let kl = univoque::expansions::kl_constant(160).unwrap();
    let beta = univoque::expansions::greedy_beta(&kl.base, 96).unwrap();
    let mut previous = 0;
    for k in 3..=40 {
        let s = &kl.hi + BigRational::new(BigInt::from(1), BigInt::from(1) << k);
        let alpha = quasi_greedy_alpha(&BaseValue::rational(s, Alphabet::BINARY).unwrap(), 96).unwrap();
        let common = alpha
            .prefix
            .digits()
            .iter()
            .zip(beta.prefix.digits())
            .take_while(|(a, b)| a == b)
            .count();
        assert!(common >= previous, "k={k}: {common} < {previous}");
        previous = common;
    }
    assert!(previous >= 32, "common prefix only {previous}");
}

