//! Quasi-greedy and greedy expansions of 1, unique-expansion tests and base
//! classification.
//!
//! `α(q)` is the quasi-greedy expansion of 1: the lexicographically largest
//! infinite expansion, produced by the digit recursion with a strict
//! inequality. `β(q)` is the greedy expansion (non-strict recursion). Both are
//! certified eventually periodic when the remainder sequence repeats exactly.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{eval_value, tail_bound, BaseValue, XReal};
use crate::words::{thue_morse_prefix, Alphabet, PeriodicSeq, Word};

/// Default number of digits used when certifying periodicity.
pub const DEFAULT_DEPTH: usize = 64;

/// The first `depth` digits of `α(q)` (or `β(q)`), with the full sequence when it
/// was certified eventually periodic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaExpansion {
    pub prefix: Word,
    pub certified_periodic: Option<PeriodicSeq>,
    pub depth: usize,
}

impl AlphaExpansion {
    /// Digit at 1-based position `i`, if known.
    pub fn digit(&self, i: usize) -> Option<u8> {
        match &self.certified_periodic {
            Some(s) => Some(s.digit(i)),
            None if i <= self.prefix.len() => Some(self.prefix.digit(i)),
            None => None,
        }
    }

    pub fn is_certified(&self) -> bool {
        self.certified_periodic.is_some()
    }

    pub fn alphabet(&self) -> Alphabet {
        self.prefix.alphabet()
    }

    /// Number of digits available (`usize::MAX` when certified).
    pub fn known_len(&self) -> usize {
        if self.is_certified() {
            usize::MAX
        } else {
            self.prefix.len()
        }
    }

    /// Compares `s` with this expansion (or its reflection), returning `None`
    /// when the known digits do not decide.
    pub fn cmp_seq(&self, s: &PeriodicSeq, reflected: bool) -> Option<Ordering> {
        if let Some(a) = &self.certified_periodic {
            let a = if reflected { a.reflect() } else { a.clone() };
            return Some(s.lex_cmp(&a));
        }
        let m = self.alphabet().max();
        for (x, &a) in s.digits().zip(self.prefix.digits()) {
            let a = if reflected { m - a } else { a };
            if x != a {
                return Some(x.cmp(&a));
            }
        }
        None
    }
}

impl fmt::Display for AlphaExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.prefix)?;
        if let Some(p) = &self.certified_periodic {
            write!(f, " period={p}")?;
        }
        Ok(())
    }
}

/// Remembers remainders to detect the first repetition.
struct RemainderLog {
    rational: HashMap<BigRational, usize>,
    exact: HashMap<String, usize>,
    approx: Vec<(f64, XReal)>,
}

impl RemainderLog {
    fn new() -> Self {
        RemainderLog {
            rational: HashMap::new(),
            exact: HashMap::new(),
            approx: Vec::new(),
        }
    }

    /// Index of an earlier equal remainder, then records `r` at `index`.
    fn find_or_insert(&mut self, r: &XReal, index: usize) -> Result<Option<usize>> {
        if r.base().is_rational() {
            let v = r.as_rational().expect("rational base");
            return Ok(match self.rational.get(&v) {
                Some(&j) => Some(j),
                None => {
                    self.rational.insert(v, index);
                    None
                }
            });
        }
        let key = r.repr_key();
        if let Some(&j) = self.exact.get(&key) {
            return Ok(Some(j));
        }
        let approx = approx_f64(r);
        for (j, (a, prev)) in self.approx.iter().enumerate() {
            if (a - approx).abs() < 1e-9 && prev.compare(r)? == Ordering::Equal {
                return Ok(Some(j));
            }
        }
        self.exact.insert(key, index);
        self.approx.push((approx, r.clone()));
        Ok(None)
    }
}

fn approx_f64(x: &XReal) -> f64 {
    let (lo, hi) = x.enclosure();
    ((lo + hi) / BigRational::from_integer(2.into()))
        .to_f64()
        .unwrap_or(f64::NAN)
}

fn expansion_of_one(q: &BaseValue, n: usize, strict: bool) -> Result<AlphaExpansion> {
    q.check_in_range()?;
    if let Some((lo, hi)) = q.bracket() {
        // α and β are monotone in q: digits shared by both ends are shared by the bracket
        let alphabet = q.alphabet();
        let a = expansion_of_one(&BaseValue::rational(lo.clone(), alphabet)?, n, strict)?;
        let b = expansion_of_one(&BaseValue::rational(hi.clone(), alphabet)?, n, strict)?;
        if a.certified_periodic.is_some() && a.certified_periodic == b.certified_periodic {
            return Ok(AlphaExpansion { depth: n, ..a });
        }
        let common: Vec<u8> = a
            .prefix
            .digits()
            .iter()
            .zip(b.prefix.digits())
            .take_while(|(x, y)| x == y)
            .map(|(x, _)| *x)
            .collect();
        return Ok(AlphaExpansion {
            prefix: Word::new(common, alphabet)?,
            certified_periodic: None,
            depth: n,
        });
    }
    let alphabet = q.alphabet();
    if let Some(r) = q.as_rational() {
        return Ok(rational_expansion_of_one(r, alphabet, n, strict));
    }
    let m = alphabet.max();
    let mut digits: Vec<u8> = Vec::with_capacity(n);
    let mut log = RemainderLog::new();
    let mut r = XReal::one(q);
    log.find_or_insert(&r, 0)?;
    let mut periodic = None;
    while digits.len() < n {
        let t = r.times_base();
        let mut chosen = 0u8;
        for d in (0..=m).rev() {
            let s = t.cmp_rational(&BigRational::from_integer(d.into()))?;
            if s == Ordering::Greater || (!strict && s == Ordering::Equal) {
                chosen = d;
                break;
            }
        }
        digits.push(chosen);
        r = t.sub(&XReal::from_rational(
            q,
            BigRational::from_integer(chosen.into()),
        ))?;
        if let Some(j) = log.find_or_insert(&r, digits.len())? {
            let seq = PeriodicSeq::new(digits[..j].to_vec(), digits[j..].to_vec(), alphabet)?;
            let v = eval_value(&seq, q)?;
            debug_assert_eq!(v.cmp_rational(&BigRational::one())?, Ordering::Equal);
            if v.cmp_rational(&BigRational::one())? == Ordering::Equal {
                periodic = Some(seq);
            }
            break;
        }
    }
    let prefix = match &periodic {
        Some(s) => s.prefix(n),
        None => Word::new(digits, alphabet)?,
    };
    Ok(AlphaExpansion {
        prefix,
        certified_periodic: periodic,
        depth: n,
    })
}

/// Digit recursion for `q = a/b` on integers: `r_k = N_k / b^k` with
/// `N_k = a N_{k-1} - c_k b^k`. A non-integer rational base never produces an
/// eventually periodic expansion other than a finite one, so only integer bases
/// need a repetition search.
fn rational_expansion_of_one(
    q: &BigRational,
    alphabet: Alphabet,
    n: usize,
    strict: bool,
) -> AlphaExpansion {
    let m = alphabet.max();
    let (a, b) = (q.numer(), q.denom());
    let mut seen: HashMap<BigInt, usize> = HashMap::new();
    let mut num = BigInt::one();
    let mut bk = BigInt::one();
    let mut digits = Vec::with_capacity(n);
    let mut periodic = None;
    let integer = b.is_one();
    if integer {
        seen.insert(num.clone(), 0);
    }
    while digits.len() < n {
        bk *= b;
        let t = &num * a;
        let d = if strict {
            (&t - BigInt::one()) / &bk
        } else {
            &t / &bk
        };
        let d = d.to_u8().map_or(m, |d| d.min(m));
        digits.push(d);
        num = t - BigInt::from(d) * &bk;
        let k = digits.len();
        if integer {
            if let Some(&j) = seen.get(&num) {
                periodic =
                    PeriodicSeq::new(digits[..j].to_vec(), digits[j..].to_vec(), alphabet).ok();
                break;
            }
            seen.insert(num.clone(), k);
        } else if num.is_zero() {
            periodic = PeriodicSeq::new(digits.clone(), vec![0], alphabet).ok();
            break;
        }
    }
    let prefix = match &periodic {
        Some(s) => s.prefix(n),
        None => Word::from_trusted(digits, alphabet),
    };
    AlphaExpansion {
        prefix,
        certified_periodic: periodic,
        depth: n,
    }
}

/// First `n` digits of the quasi-greedy expansion `α(q)` of 1.
pub fn quasi_greedy_alpha(q: &BaseValue, n: usize) -> Result<AlphaExpansion> {
    expansion_of_one(q, n, true)
}

/// First `n` digits of the greedy expansion `β(q)` of 1.
pub fn greedy_beta(q: &BaseValue, n: usize) -> Result<AlphaExpansion> {
    expansion_of_one(q, n, false)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    In,
    Out,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MembershipVerdict {
    pub status: Status,
    /// Position `k` at which a condition fails (`Out` only).
    pub witness_index: Option<usize>,
    pub checked_depth: usize,
}

impl MembershipVerdict {
    fn inside(depth: usize) -> Self {
        MembershipVerdict {
            status: Status::In,
            witness_index: None,
            checked_depth: depth,
        }
    }

    fn outside(k: usize, depth: usize) -> Self {
        MembershipVerdict {
            status: Status::Out,
            witness_index: Some(k),
            checked_depth: depth,
        }
    }

    fn unknown(depth: usize) -> Self {
        MembershipVerdict {
            status: Status::Unknown,
            witness_index: None,
            checked_depth: depth,
        }
    }

    pub fn is_in(&self) -> bool {
        self.status == Status::In
    }
}

impl fmt::Display for MembershipVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.status {
            Status::In => write!(f, "In"),
            Status::Out => write!(f, "Out({})", self.witness_index.unwrap_or(0)),
            Status::Unknown => write!(f, "Unknown({})", self.checked_depth),
        }
    }
}

/// Decides whether `x` has a unique expansion in base `q` by following the
/// remainders `r_{k+1} = q r_k - c_{k+1}`: `Out(k)` as soon as two digits are
/// admissible at step `k`, `In` once the (forced) remainders repeat.
pub fn is_unique_expansion(x: &XReal, q: &BaseValue, depth: usize) -> Result<MembershipVerdict> {
    q.check_in_range()?;
    let m = q.alphabet().max();
    // M/(q-1) = tail bound at m = 0
    let top = tail_bound(q, 0)?;
    if x.signum()? == Ordering::Less || x.compare(&top)? == Ordering::Greater {
        // no expansion at all
        return Ok(MembershipVerdict::outside(0, 0));
    }
    let depth = depth.min(bracket_horizon(q));
    if let (Some(qr), Some(xr), None) = (q.as_rational(), x.as_rational(), q.bracket()) {
        return Ok(rational_uniqueness(
            xr,
            qr,
            m,
            &top.as_rational().expect("rational"),
            depth,
        ));
    }
    let mut log = RemainderLog::new();
    let mut r = x.clone();
    log.find_or_insert(&r, 0)?;
    for k in 1..=depth {
        let t = r.times_base();
        let mut admissible = Vec::new();
        for d in 0..=m {
            let rest = t.sub(&XReal::from_rational(
                q,
                BigRational::from_integer(d.into()),
            ))?;
            if rest.signum()? != Ordering::Less && rest.compare(&top)? != Ordering::Greater {
                admissible.push(rest);
                if admissible.len() > 1 {
                    return Ok(MembershipVerdict::outside(k, k));
                }
            }
        }
        r = admissible
            .pop()
            .expect("a representable remainder always admits a digit");
        if log.find_or_insert(&r, k)?.is_some() {
            return Ok(MembershipVerdict::inside(k));
        }
    }
    Ok(MembershipVerdict::unknown(depth))
}

/// [`is_unique_expansion`] on plain rationals: the admissible digits at each step
/// are the integers in `[t - M/(q-1), t]` with `t = q r`.
fn rational_uniqueness(
    x: BigRational,
    q: &BigRational,
    m: u8,
    top: &BigRational,
    depth: usize,
) -> MembershipVerdict {
    let mut seen = HashMap::new();
    let mut r = x;
    seen.insert(r.clone(), 0);
    let zero = BigRational::zero();
    let mmax = BigRational::from_integer(m.into());
    for k in 1..=depth {
        let t = &r * q;
        let lo = (&t - top).ceil().max(zero.clone());
        let hi = t.floor().min(mmax.clone());
        if hi > lo {
            return MembershipVerdict::outside(k, k);
        }
        r = t - hi;
        if seen.insert(r.clone(), k).is_some() {
            return MembershipVerdict::inside(k);
        }
    }
    MembershipVerdict::unknown(depth)
}

/// Steps after which the remainders of a bracketed base no longer mean anything:
/// an error `hi - lo` in `q` is amplified by about `q` per step, while tails of
/// a univoque expansion can come within `q^{-k}` of a branching threshold.
fn bracket_horizon(q: &BaseValue) -> usize {
    let Some((lo, hi)) = q.bracket() else {
        return usize::MAX;
    };
    let width = (hi - lo).to_f64().unwrap_or(0.0);
    if width <= 0.0 {
        return usize::MAX;
    }
    let growth = hi.to_f64().unwrap_or(2.0).log2();
    (-width.log2() / (2.0 * growth)).floor() as usize
}

fn lexicographic_membership(
    c: &PeriodicSeq,
    q: &BaseValue,
    depth: usize,
    strict: bool,
) -> Result<MembershipVerdict> {
    c.alphabet().ensure_same(q.alphabet())?;
    if q.exceeds_alphabet()? {
        return Ok(MembershipVerdict::inside(0));
    }
    let alpha = quasi_greedy_alpha(q, depth)?;
    membership_against(c, &alpha, strict)
}

/// Lexicographic conditions of `U_q'` (`strict`) or `V_q'` against a given `α`.
pub fn membership_against(
    c: &PeriodicSeq,
    alpha: &AlphaExpansion,
    strict: bool,
) -> Result<MembershipVerdict> {
    let m = c.alphabet().max();
    let depth = if alpha.is_certified() {
        alpha.depth
    } else {
        alpha.prefix.len()
    };
    let mut undecided = false;
    for k in 1..=c.cycle_bound() {
        let ck = c.digit(k);
        let tail = c.shift(k);
        if ck < m {
            match alpha.cmp_seq(&tail, false) {
                Some(Ordering::Less) => {}
                Some(Ordering::Equal) if !strict => {}
                Some(_) => return Ok(MembershipVerdict::outside(k, depth)),
                None => undecided = true,
            }
        }
        if ck > 0 {
            match alpha.cmp_seq(&tail, true) {
                Some(Ordering::Greater) => {}
                Some(Ordering::Equal) if !strict => {}
                Some(_) => return Ok(MembershipVerdict::outside(k, depth)),
                None => undecided = true,
            }
        }
    }
    Ok(if undecided {
        MembershipVerdict::unknown(depth)
    } else {
        MembershipVerdict::inside(depth)
    })
}

/// Membership of `c` in `U_q'` by the strict lexicographic conditions.
pub fn in_uq_prime(c: &PeriodicSeq, q: &BaseValue, depth: usize) -> Result<MembershipVerdict> {
    lexicographic_membership(c, q, depth, true)
}

/// Membership of `c` in `V_q'` by the non-strict lexicographic conditions.
pub fn in_vq_prime(c: &PeriodicSeq, q: &BaseValue, depth: usize) -> Result<MembershipVerdict> {
    lexicographic_membership(c, q, depth, false)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    NotInV,
    InVNotInClosureU,
    InClosureUNotInU,
    InU,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::NotInV => "NotInV",
            Verdict::InVNotInClosureU => "InVNotInClosureU",
            Verdict::InClosureUNotInU => "InClosureUNotInU",
            Verdict::InU => "InU",
            Verdict::Unknown => "Unknown",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BaseClass {
    pub verdict: Verdict,
    /// `false` when the verdict rests on a finite prefix of a non-periodic `α(q)`.
    pub certified: bool,
    pub evidence: String,
    pub depth: usize,
}

/// Places `q` in the chain `U ⊂ closure(U) ⊂ V` using the shifts of `α(q)`:
/// `q ∈ V` iff `reflect(α) <= σ^k α <= α` for all `k >= 1`; equality with the
/// reflection puts `q` outside `closure(U)`; equality with `α` itself (a periodic
/// `α`) puts it in `closure(U) \ U`.
pub fn classify_base(q: &BaseValue, depth: usize) -> Result<BaseClass> {
    let alpha = quasi_greedy_alpha(q, depth)?;
    let mut evidence = vec![format!("alpha={alpha}")];
    if let Some(a) = &alpha.certified_periodic {
        let abar = a.reflect();
        let mut equals_reflection = None;
        let mut equals_alpha = None;
        for k in 1..=a.cycle_bound() {
            let s = a.shift(k);
            if s.lex_cmp(&abar) == Ordering::Less || s.lex_cmp(a) == Ordering::Greater {
                evidence.push(format!("shift {k} leaves [reflect(alpha), alpha]"));
                return Ok(BaseClass {
                    verdict: Verdict::NotInV,
                    certified: true,
                    evidence: evidence.join("; "),
                    depth,
                });
            }
            if s == abar && equals_reflection.is_none() {
                equals_reflection = Some(k);
            }
            if s == *a && equals_alpha.is_none() {
                equals_alpha = Some(k);
            }
        }
        let beta = greedy_beta(q, depth)?;
        evidence.push(format!("beta={beta}"));
        let one = is_unique_expansion(&XReal::one(q), q, depth)?;
        evidence.push(format!("expansions of 1: {one}"));
        let verdict = if let Some(k) = equals_reflection {
            evidence.push(format!("shift {k} equals reflect(alpha)"));
            Verdict::InVNotInClosureU
        } else if let Some(k) = equals_alpha {
            evidence.push(format!("shift {k} equals alpha"));
            Verdict::InClosureUNotInU
        } else {
            Verdict::InU
        };
        return Ok(BaseClass {
            verdict,
            certified: true,
            evidence: evidence.join("; "),
            depth,
        });
    }

    let digits = alpha.prefix.digits();
    let m = q.alphabet().max();
    for k in 1..digits.len() {
        for (i, &d) in digits[k..].iter().enumerate() {
            let a = digits[i];
            if d != a {
                if d > a {
                    evidence.push(format!("shift {k} exceeds alpha at digit {}", i + 1));
                    return not_in_v(evidence, depth);
                }
                break;
            }
        }
        for (i, &d) in digits[k..].iter().enumerate() {
            let a = m - digits[i];
            if d != a {
                if d < a {
                    evidence.push(format!(
                        "shift {k} falls below reflect(alpha) at digit {}",
                        i + 1
                    ));
                    return not_in_v(evidence, depth);
                }
                break;
            }
        }
    }
    if q.is_rational() {
        // a non-integer rational base never has an eventually periodic α
        evidence.push(format!("no violation within {depth} digits"));
        Ok(BaseClass {
            verdict: Verdict::InU,
            certified: false,
            evidence: evidence.join("; "),
            depth,
        })
    } else {
        evidence.push("alpha not certified periodic".into());
        Ok(BaseClass {
            verdict: Verdict::Unknown,
            certified: false,
            evidence: evidence.join("; "),
            depth,
        })
    }
}

fn not_in_v(evidence: Vec<String>, depth: usize) -> Result<BaseClass> {
    Ok(BaseClass {
        verdict: Verdict::NotInV,
        certified: true,
        evidence: evidence.join("; "),
        depth,
    })
}

/// A rational enclosure of the smallest base `q` in which 1 has a unique expansion (M = 1).
#[derive(Debug, Clone)]
pub struct KlConstant {
    pub lo: BigRational,
    pub hi: BigRational,
    /// Midpoint of `[lo, hi]` as a rational base.
    pub base: BaseValue,
}

/// Brackets the root of `Σ τ_i q^{-i} = 1` in `(1, 2)` (Thue–Morse digits) to
/// width `2^{-precision_bits}`. The series is truncated after `N` terms and the
/// truncation error is controlled by the tail bound; `N` grows when a midpoint
/// is too close to call.
pub fn kl_constant(precision_bits: u32) -> Result<KlConstant> {
    if precision_bits < 8 {
        return Err(Error::Parse("precision_bits must be at least 8".into()));
    }
    let alphabet = Alphabet::BINARY;
    let two = BigRational::from_integer(2.into());
    let mut lo = BigRational::new(3.into(), 2.into());
    let mut hi = two.clone();
    let width = BigRational::new(BigInt::one(), BigInt::one() << precision_bits);
    let mut terms = 2 * precision_bits as usize + 16;
    let mut tau = thue_morse_prefix(terms);
    while &hi - &lo > width {
        let mid = (&lo + &hi) / &two;
        loop {
            match truncated_sign(tau.digits(), &mid) {
                Some(Ordering::Greater) => lo = mid,
                Some(_) => hi = mid,
                None => {
                    terms *= 2;
                    tau = thue_morse_prefix(terms);
                    continue;
                }
            }
            break;
        }
    }
    let base = BaseValue::rational_bracketed((&lo + &hi) / &two, lo.clone(), hi.clone(), alphabet)?;
    Ok(KlConstant { lo, hi, base })
}

/// Sign of `Σ_{i>=1} d_i q^{-i} - 1` for binary digits whose first `N` are
/// `digits`, or `None` when the truncation error could flip it. Works on the
/// integers `a, D` with `q = a/D`:
/// `P = Σ_{i<=N} d_i a^{N-i} D^i` compared with `a^N`, and the tail
/// `1/(q^N (q-1)) = D^{N+1} / (a^N (a-D))`.
fn truncated_sign(digits: &[u8], q: &BigRational) -> Option<Ordering> {
    let (a, d) = (q.numer(), q.denom());
    let mut acc = BigInt::zero();
    let mut dpow = BigInt::one();
    for &t in digits {
        dpow *= d;
        acc *= a;
        if t != 0 {
            acc += &dpow;
        }
    }
    let an = num_traits::pow(a.clone(), digits.len());
    let diff = acc - &an;
    if diff > BigInt::zero() {
        return Some(Ordering::Greater);
    }
    let tail = dpow * d;
    if diff * (a - d) + tail < BigInt::zero() {
        Some(Ordering::Less)
    } else {
        None
    }
}

/// `Σ_{i<=N} d_i q^{-i}` by Horner's rule in `1/q`.
#[cfg(test)]
fn truncated_sum(digits: &[u8], q: &BigRational) -> BigRational {
    let y = q.recip();
    let mut acc = BigRational::zero();
    for &d in digits.iter().rev() {
        acc = (acc + BigRational::from_integer(d.into())) * &y;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn golden() -> BaseValue {
        BaseValue::parse("poly:-1,-1,1@3/2,2", Alphabet::BINARY).unwrap()
    }

    fn tribonacci() -> BaseValue {
        BaseValue::parse("poly:-1,-1,-1,1@9/5,19/10", Alphabet::BINARY).unwrap()
    }

    fn seq(s: &str) -> PeriodicSeq {
        PeriodicSeq::parse(s, Alphabet::BINARY).unwrap()
    }

    #[test]
    fn alpha_examples() {
        let two = BaseValue::integer(2, Alphabet::BINARY).unwrap();
        let a = quasi_greedy_alpha(&two, 4).unwrap();
        assert_eq!(a.prefix.to_string(), "1111");
        assert_eq!(a.certified_periodic, Some(seq("(1)")));

        let a = quasi_greedy_alpha(&golden(), 4).unwrap();
        assert_eq!(a.prefix.to_string(), "1010");
        assert_eq!(a.certified_periodic, Some(seq("(10)")));

        let a = quasi_greedy_alpha(&tribonacci(), 6).unwrap();
        assert_eq!(a.prefix.to_string(), "110110");
        assert_eq!(a.certified_periodic, Some(seq("(110)")));

        let kl = kl_constant(64).unwrap();
        let a = quasi_greedy_alpha(&kl.base, 8).unwrap();
        assert_eq!(a.prefix, thue_morse_prefix(8));
    }

    #[test]
    fn beta_examples() {
        let b = greedy_beta(&tribonacci(), 4).unwrap();
        assert_eq!(b.prefix.to_string(), "1110");
        assert_eq!(b.certified_periodic, Some(seq("111(0)")));
        let two = BaseValue::integer(2, Alphabet::BINARY).unwrap();
        assert_eq!(greedy_beta(&two, 3).unwrap().prefix.to_string(), "111");
        let kl = kl_constant(64).unwrap();
        assert_eq!(
            greedy_beta(&kl.base, 8).unwrap().prefix,
            quasi_greedy_alpha(&kl.base, 8).unwrap().prefix
        );
    }

    #[test]
    fn alpha_rejects_out_of_range() {
        let q = BaseValue::rational(rat(5, 2), Alphabet::BINARY).unwrap();
        assert_eq!(quasi_greedy_alpha(&q, 4), Err(Error::BaseOutOfRange));
    }

    #[test]
    fn uniqueness_examples() {
        let g = golden();
        assert!(is_unique_expansion(&XReal::zero(&g), &g, 10)
            .unwrap()
            .is_in());
        let v = is_unique_expansion(&XReal::one(&g), &g, 10).unwrap();
        assert_eq!(v.status, Status::Out);
        assert_eq!(v.witness_index, Some(1));
        let kl = kl_constant(96).unwrap();
        let v = is_unique_expansion(&XReal::one(&kl.base), &kl.base, 64).unwrap();
        assert_ne!(v.status, Status::Out);
    }

    #[test]
    fn membership_examples() {
        let g = golden();
        for q in [
            g.clone(),
            BaseValue::rational(rat(19, 10), Alphabet::BINARY).unwrap(),
        ] {
            assert!(in_uq_prime(&seq("(0)"), &q, 32).unwrap().is_in());
        }
        assert!(in_vq_prime(&seq("(10)"), &g, 32).unwrap().is_in());
        assert_eq!(
            in_uq_prime(&seq("(10)"), &g, 32).unwrap().status,
            Status::Out
        );
        let q = BaseValue::rational(rat(19, 10), Alphabet::BINARY).unwrap();
        assert!(in_uq_prime(&seq("(10)"), &q, 32).unwrap().is_in());
        let x = eval_value(&seq("(10)"), &q).unwrap();
        assert!(is_unique_expansion(&x, &q, 32).unwrap().is_in());
    }

    #[test]
    fn classification_anchors() {
        assert_eq!(
            classify_base(&golden(), 64).unwrap().verdict,
            Verdict::InVNotInClosureU
        );
        assert_eq!(
            classify_base(&tribonacci(), 64).unwrap().verdict,
            Verdict::InClosureUNotInU
        );
        let kl = kl_constant(96).unwrap();
        assert_eq!(classify_base(&kl.base, 64).unwrap().verdict, Verdict::InU);
        let q = BaseValue::rational(rat(13, 10), Alphabet::BINARY).unwrap();
        let c = classify_base(&q, 64).unwrap();
        assert_eq!(c.verdict, Verdict::NotInV);
        assert!(c.certified);
    }

    #[test]
    fn kl_bracket() {
        let kl = kl_constant(20).unwrap();
        let target = rat(178723, 100000);
        assert!(&kl.hi - &kl.lo <= BigRational::new(1.into(), BigInt::one() << 20));
        let tol = rat(5, 1_000_000);
        assert!(kl.lo <= &target + &tol && &target - &tol <= kl.hi);
        let tau = thue_morse_prefix(200);
        assert!(truncated_sum(tau.digits(), &kl.lo) > BigRational::one());
        assert!(truncated_sum(tau.digits(), &kl.hi) < BigRational::one());
    }

    #[test]
    fn kl_40_is_never_outside_v() {
        let kl = kl_constant(40).unwrap();
        let c = classify_base(&kl.base, 64).unwrap();
        assert!(
            matches!(c.verdict, Verdict::InU | Verdict::Unknown),
            "{c:?}"
        );
    }
}
