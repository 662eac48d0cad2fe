//! Acceptance suite: one PASS/FAIL line per criterion with its pinned tolerance
//! and wall-clock budget. Runs without the libtest harness so the lines always print.

use std::cmp::Ordering;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use univoque::enumerate::{
    enum_prefixes, remark4_candidate, symbolic_hausdorff, Language, SetKind,
};
use univoque::expansions::{
    classify_base, is_unique_expansion, kl_constant, quasi_greedy_alpha, Status, Verdict,
};
use univoque::metric::{
    approx_set_points, continuity_probe, discontinuity_gap, hausdorff_real, ProbeConfig,
    ProbeVerdict, Side,
};
use univoque::numerics::{base_from_expansion, eval_value, tail_bound, BaseValue, XReal};
use univoque::trie::{PrefixTrie, TrieMode};
use univoque::words::{Alphabet, Dyadic, PeriodicSeq};

const SEED: u64 = 0x5eed_2024;
const GOLDEN: &str = "poly:-1,-1,1@3/2,2";
const TRIBONACCI: &str = "poly:-1,-1,-1,1@9/5,19/10";
const KL_BITS: u32 = 160;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);
type NamedBase = (&'static str, Box<dyn Fn() -> BaseValue>, BigRational);

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn alphabet(m: u8) -> Alphabet {
    Alphabet::new(m).unwrap()
}

fn golden() -> BaseValue {
    BaseValue::parse(GOLDEN, Alphabet::BINARY).unwrap()
}

fn tribonacci() -> BaseValue {
    BaseValue::parse(TRIBONACCI, Alphabet::BINARY).unwrap()
}

fn kl() -> BaseValue {
    kl_constant(KL_BITS).unwrap().base
}

fn periodic(pre: &[u8], per: &[u8], m: u8) -> PeriodicSeq {
    PeriodicSeq::new(pre.to_vec(), per.to_vec(), alphabet(m)).unwrap()
}

/// A rational base `p/d` in `(1, M+1]`.
fn random_base(rng: &mut ChaCha8Rng, m: u8) -> (i64, i64) {
    let d = rng.gen_range(2..=60);
    let p = rng.gen_range(d + 1..=d * (m as i64 + 1));
    (p, d)
}

fn rational_base(m: u8, (p, d): (i64, i64)) -> BaseValue {
    BaseValue::rational(rat(p, d), alphabet(m)).unwrap()
}

fn random_digits(rng: &mut ChaCha8Rng, m: u8, len: usize) -> Vec<u8> {
    (0..len).map(|_| rng.gen_range(0..=m)).collect()
}

fn random_periodic(rng: &mut ChaCha8Rng, m: u8) -> PeriodicSeq {
    let pre = rng.gen_range(0..4);
    let per = rng.gen_range(1..5);
    PeriodicSeq::new(
        random_digits(rng, m, pre),
        random_digits(rng, m, per),
        alphabet(m),
    )
    .unwrap()
}

/// `[c - tol, c + tol]` contains the enclosure of `q`.
fn within(q: &BaseValue, center: BigRational, tol: &BigRational) -> bool {
    let (lo, hi) = q.interval();
    lo >= &center - tol && hi <= &center + tol
}

fn named_constants() -> Outcome {
    let tol = rat(5, 1_000_000);
    let budget = Duration::from_secs(1);
    let mut notes = Vec::new();
    let cases: [NamedBase; 3] = [
        (
            "golden",
            Box::new(|| base_from_expansion(&periodic(&[], &[1, 0], 1)).unwrap()),
            rat(161803, 100000),
        ),
        (
            "tribonacci",
            Box::new(|| base_from_expansion(&periodic(&[], &[1, 1, 0], 1)).unwrap()),
            rat(183929, 100000),
        ),
        (
            "kl",
            Box::new(|| kl_constant(64).unwrap().base),
            rat(178723, 100000),
        ),
    ];
    for (name, make, center) in cases {
        let t = Instant::now();
        let q = make();
        let dt = t.elapsed();
        if !within(&q, center.clone(), &tol) {
            return Err(format!(
                "{name}: enclosure {:?} misses {center} ± 5e-6",
                q.interval()
            ));
        }
        if dt > budget {
            return Err(format!("{name}: {dt:.2?} > 1 s"));
        }
        notes.push(format!("{name}≈{:.6} in {dt:.1?}", q.to_f64()));
    }
    Ok(notes.join(", "))
}

fn classification() -> Outcome {
    let t = Instant::now();
    let cases = [
        ("golden", golden(), Verdict::InVNotInClosureU),
        ("tribonacci", tribonacci(), Verdict::InClosureUNotInU),
        ("kl", kl(), Verdict::InU),
        ("13/10", rational_base(1, (13, 10)), Verdict::NotInV),
    ];
    for (name, q, want) in cases {
        let got = classify_base(&q, 64).map_err(|e| format!("{name}: {e}"))?;
        if got.verdict != want {
            return Err(format!(
                "{name}: {} (want {want}; {})",
                got.verdict, got.evidence
            ));
        }
    }
    let dt = t.elapsed();
    if dt > Duration::from_secs(5) {
        return Err(format!("{dt:.2?} > 5 s"));
    }
    Ok(format!("4/4 verdicts at depth 64 in {dt:.2?}"))
}

/// Tails tried after each word: every eventually periodic sequence with
/// preperiod of length at most one and at most four digits written out, plus
/// periodic truncations of `α(q)`.
fn candidate_tails(q: &BaseValue, m: u8) -> Vec<PeriodicSeq> {
    fn words(m: u8, len: usize) -> Vec<Vec<u8>> {
        let mut out = vec![vec![]];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|w| (0..=m).map(move |d| [w.clone(), vec![d]].concat()))
                .collect();
        }
        out
    }
    let mut tails = Vec::new();
    for pre_len in 0..=1 {
        for per_len in 1..=4 - pre_len {
            for pre in words(m, pre_len) {
                for per in words(m, per_len) {
                    tails.push(periodic(&pre, &per, m));
                }
            }
        }
    }
    let alpha = quasi_greedy_alpha(q, 12).unwrap();
    let a = alpha.prefix.digits();
    for k in 1..a.len() {
        if a[k - 1] > 0 {
            let mut w = a[..k].to_vec();
            w[k - 1] -= 1;
            tails.push(periodic(&[], &w, m));
            tails.push(periodic(&a[..k], &[0], m));
        }
    }
    tails.sort();
    tails.dedup();
    tails
}

/// Words `w` of length `n` for which some candidate completion has a unique
/// expansion. Candidates are `w · tail` for the fixed tail family and the
/// completion proposed by the enumerator; the uniqueness oracle decides each.
fn brute_force_u(q: &BaseValue, m: u8, n: usize) -> (PrefixTrie, usize) {
    let tails = candidate_tails(q, m);
    let lang = Language::new(q, SetKind::U, 64).unwrap();
    let mut found = PrefixTrie::new(alphabet(m), n, TrieMode::Lower);
    let mut unknown = 0;
    for w in PrefixTrie::full(alphabet(m), n).words() {
        let proposed = lang.completion(w.digits());
        let candidates = proposed
            .into_iter()
            .chain(tails.iter().map(|t| t.prepend(w.digits())));
        for c in candidates {
            if !c.prefix(n).digits().starts_with(w.digits()) {
                continue;
            }
            let x = eval_value(&c, q).unwrap();
            match is_unique_expansion(&x, q, 64).unwrap().status {
                Status::In => {
                    found.insert(w.digits()).unwrap();
                    break;
                }
                Status::Unknown => unknown += 1,
                Status::Out => {}
            }
        }
    }
    (found, unknown)
}

fn oracle_equivalence() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut compared = 0;
    let mut uncertified = 0;
    for (m, n) in [(1u8, 7usize), (2, 4)] {
        for _ in 0..50 {
            let pd = random_base(&mut rng, m);
            let q = rational_base(m, pd);
            let r = enum_prefixes(&q, n, SetKind::U, 64).map_err(|e| e.to_string())?;
            let Some(exact) = r.exact_set() else {
                uncertified += 1;
                continue;
            };
            let (brute, unknown) = brute_force_u(&q, m, n);
            if unknown > 0 || !brute.is_subset(exact) || !exact.is_subset(&brute) {
                return Err(format!(
                    "q={}/{} M={m} n={n}: enumeration {} words, brute force {} words, {unknown} undecided",
                    pd.0,
                    pd.1,
                    exact.len(),
                    brute.len()
                ));
            }
            compared += 1;
        }
    }
    let dt = t.elapsed();
    if dt > Duration::from_secs(60) {
        return Err(format!("{dt:.2?} > 60 s"));
    }
    if uncertified > 0 {
        return Err(format!("{uncertified} enumerations were not certified"));
    }
    Ok(format!(
        "{compared}/100 bases agree (M=1 n=7, M=2 n=4) in {dt:.2?}"
    ))
}

fn inclusion_chain() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 1);
    let n = 8;
    for i in 0..30 {
        let m = if i % 2 == 0 { 1 } else { 2 };
        let mut qs: Vec<BigRational> = (0..3)
            .map(|_| {
                let (p, d) = random_base(&mut rng, m);
                rat(p, d)
            })
            .collect();
        qs.sort();
        qs.dedup();
        if qs.len() < 3 {
            qs = vec![qs[0].clone(), &qs[0] + rat(1, 1000), &qs[0] + rat(2, 1000)];
            qs.retain(|q| q <= &rat(m as i64 + 1, 1));
            if qs.len() < 3 {
                continue;
            }
        }
        let base = |q: &BigRational| BaseValue::rational(q.clone(), alphabet(m)).unwrap();
        let up = enum_prefixes(&base(&qs[0]), n, SetKind::U, 64).unwrap();
        let vr = enum_prefixes(&base(&qs[1]), n, SetKind::V, 64).unwrap();
        let us = enum_prefixes(&base(&qs[2]), n, SetKind::U, 64).unwrap();
        // certified inclusion: the upper bracket of the smaller set inside the lower bracket of the larger
        if !up.upper.is_subset(&vr.lower) || !vr.upper.is_subset(&us.lower) {
            return Err(format!(
                "triple {} < {} < {} (M={m}) not certified",
                qs[0], qs[1], qs[2]
            ));
        }
    }
    Ok("30 triples, 0 violations at n=8".into())
}

fn lipschitz() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 2);
    let t = Instant::now();
    let named = [golden(), tribonacci()];
    for i in 0..1000 {
        let (q, m) = match i % 4 {
            0 => (named[(i / 4) % 2].clone(), 1),
            1 => (rational_base(1, random_base(&mut rng, 1)), 1),
            _ => (rational_base(2, random_base(&mut rng, 2)), 2),
        };
        let k = rng.gen_range(0..=20);
        let common = random_digits(&mut rng, m, k);
        let c = random_periodic(&mut rng, m).prepend(&common);
        let d = random_periodic(&mut rng, m).prepend(&common);
        let diff = eval_value(&c, &q)
            .unwrap()
            .sub(&eval_value(&d, &q).unwrap())
            .unwrap()
            .abs()
            .unwrap();
        let bound = tail_bound(&q, k).unwrap();
        if diff.compare(&bound).unwrap() == Ordering::Greater {
            return Err(format!(
                "pair {c} / {d} at q={} exceeds the bound",
                q.spec_string()
            ));
        }
    }
    Ok(format!(
        "1000 pairs, 0 violations (exact comparison) in {:.2?}",
        t.elapsed()
    ))
}

fn continuity() -> Outcome {
    let t = Instant::now();
    let probe = |q: &BaseValue, side| {
        let mut cfg = ProbeConfig::new(side, SetKind::U, 12, 8);
        cfg.threads = 0;
        continuity_probe(q, &cfg).map_err(|e| e.to_string())
    };
    let g = probe(&golden(), Side::Right)?;
    if g.to_u != ProbeVerdict::GapDetected(Dyadic::pow2_neg(2))
        || g.to_v != ProbeVerdict::ConvergesWithinDepth
    {
        return Err(format!("golden right: to_U={} to_V={}", g.to_u, g.to_v));
    }
    let cases = [
        ("tribonacci", tribonacci(), Side::Left),
        ("kl", kl(), Side::Left),
        ("13/10", rational_base(1, (13, 10)), Side::Left),
        ("13/10", rational_base(1, (13, 10)), Side::Right),
    ];
    for (name, q, side) in cases {
        let r = probe(&q, side)?;
        if r.verdict != ProbeVerdict::ConvergesWithinDepth {
            return Err(format!("{name} {side}: {}", r.verdict));
        }
    }
    let gaps = [
        ("golden", golden(), Dyadic::pow2_neg(2)),
        ("tribonacci", tribonacci(), Dyadic::ZERO),
        ("13/10", rational_base(1, (13, 10)), Dyadic::ZERO),
    ];
    for (name, q, want) in gaps {
        let got = discontinuity_gap(&q, 10).map_err(|e| e.to_string())?;
        if got != Some(want) {
            return Err(format!("gap at {name}: {got:?}"));
        }
    }
    let dt = t.elapsed();
    if dt > Duration::from_secs(120) {
        return Err(format!("{dt:.2?} > 2 min"));
    }
    Ok(format!(
        "golden gap 1/4 vs U', 5 probes and 3 gaps as expected in {dt:.2?}"
    ))
}

fn hausdorff_golden() -> Outcome {
    let t = Instant::now();
    let g = golden();
    let u = approx_set_points(&g, SetKind::U, 20).map_err(|e| e.to_string())?;
    let v = approx_set_points(&g, SetKind::V, 20).map_err(|e| e.to_string())?;
    let h = hausdorff_real(&u, &v).map_err(|e| e.to_string())?;
    let target = g.q().sub(&XReal::one(&g)).unwrap();
    let width = h.high.sub(&h.low).unwrap();
    let allowed = tail_bound(&g, 20).unwrap().scale(&rat(2, 1));
    let contains = h.low.compare(&target).unwrap() != Ordering::Greater
        && target.compare(&h.high).unwrap() != Ordering::Greater;
    if !contains {
        return Err(format!("bracket [{}, {}] misses G - 1", h.low, h.high));
    }
    if width.compare(&allowed).unwrap() == Ordering::Greater {
        return Err(format!("width {width} exceeds 2·tail_bound(G, 20)"));
    }
    Ok(format!(
        "[{:.10}, {:.10}] contains G-1, width {:.3e} <= {:.3e}, {} V points, {:.2?}",
        h.low.to_f64(),
        h.high.to_f64(),
        width.to_f64(),
        allowed.to_f64(),
        v.points.len(),
        t.elapsed()
    ))
}

fn remark4() -> Outcome {
    let alpha = periodic(&[1], &[1, 0], 1);
    let mut checked = 0;
    for m in (2..=20).step_by(2) {
        if alpha.digit(m) != 1 {
            continue;
        }
        let c = remark4_candidate(&alpha, m).map_err(|e| e.to_string())?;
        if c.lex_cmp(&alpha) != Ordering::Less {
            return Err(format!("m={m}: candidate {c} is not below α"));
        }
        if m >= 4
            && ((c.digit(m + 1), c.digit(m + 2)) != (0, 0)
                || (alpha.digit(m + 1), alpha.digit(m + 2)) != (0, 1))
        {
            return Err(format!("m={m}: digits m+1, m+2 of {c}"));
        }
        checked += 1;
    }
    Ok(format!(
        "{checked} pivots, candidate < α, 00 < 01 for m >= 4"
    ))
}

fn random_trie(rng: &mut ChaCha8Rng, m: u8, n: usize) -> PrefixTrie {
    let mut t = PrefixTrie::new(alphabet(m), n, TrieMode::Certified);
    for _ in 0..rng.gen_range(1..8) {
        t.insert(&random_digits(rng, m, n)).unwrap();
    }
    t
}

fn trie_of(seqs: &[PeriodicSeq], n: usize) -> PrefixTrie {
    let mut t = PrefixTrie::new(seqs[0].alphabet(), n, TrieMode::Certified);
    for s in seqs {
        t.insert(s.prefix(n).digits()).unwrap();
    }
    t
}

fn ultrametric() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 3);
    for _ in 0..200 {
        let m = rng.gen_range(1..=2);
        let n = rng.gen_range(1..=8);
        let (a, b, c) = (
            random_trie(&mut rng, m, n),
            random_trie(&mut rng, m, n),
            random_trie(&mut rng, m, n),
        );
        let d = |x: &PrefixTrie, y: &PrefixTrie| symbolic_hausdorff(x, y).unwrap();
        if d(&a, &c) > d(&a, &b).max(d(&b, &c)) {
            return Err(format!(
                "triangle fails for {:?} {:?} {:?}",
                a.words(),
                b.words(),
                c.words()
            ));
        }
    }
    // perturbations inside existing cylinders leave every prefix family unchanged
    for _ in 0..200 {
        let m = rng.gen_range(1..=2);
        let n = rng.gen_range(1..=10);
        let s: Vec<_> = (0..rng.gen_range(1..4))
            .map(|_| random_periodic(&mut rng, m))
            .collect();
        let t: Vec<_> = (0..rng.gen_range(1..4))
            .map(|_| random_periodic(&mut rng, m))
            .collect();
        let host = &s[rng.gen_range(0..s.len())];
        let extra = random_periodic(&mut rng, m).prepend(host.prefix(n).digits());
        let perturbed: Vec<_> = s.iter().cloned().chain([extra]).collect();
        let before = symbolic_hausdorff(&trie_of(&s, n), &trie_of(&t, n)).unwrap();
        let after = symbolic_hausdorff(&trie_of(&perturbed, n), &trie_of(&t, n)).unwrap();
        if before != after {
            return Err("perturbation changed the distance".into());
        }
    }
    // U_2' and V_2' differ but have the same closure
    let two = BaseValue::integer(2, Alphabet::BINARY).unwrap();
    for n in 1..=10 {
        let u = enum_prefixes(&two, n, SetKind::U, 64).unwrap();
        let v = enum_prefixes(&two, n, SetKind::V, 64).unwrap();
        let d = symbolic_hausdorff(u.exact_set().unwrap(), v.exact_set().unwrap()).unwrap();
        if !d.is_zero() {
            return Err(format!("U_2' vs V_2' at depth {n}: {d}"));
        }
    }
    Ok("200 triples, 200 perturbations, U_2'/V_2' at depths 1..10: 0 violations".into())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("named constants within 5e-6, < 1 s each", named_constants),
        (
            "classification golden/tribonacci/kl/13/10, < 5 s",
            classification,
        ),
        (
            "enumeration equals brute force, 100 bases, < 60 s",
            oracle_equivalence,
        ),
        (
            "inclusion chain U'_p ⊆ V'_r ⊆ U'_s, 30 triples, n = 8",
            inclusion_chain,
        ),
        ("value difference <= M/(q^m (q-1)), 1000 pairs", lipschitz),
        ("continuity probes and gaps, < 2 min", continuity),
        (
            "real Hausdorff U_G vs V_G contains G-1, width <= 2 tb(G, 20)",
            hausdorff_golden,
        ),
        ("candidate sequence below α for even pivots", remark4),
        ("ultrametric and closure invariance", ultrametric),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let dt = t.elapsed();
        match outcome {
            Ok(detail) => println!("PASS [{}] {name} ({dt:.2?}): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL [{}] {name} ({dt:.2?}): {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
