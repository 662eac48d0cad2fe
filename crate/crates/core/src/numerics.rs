//! Exact bases `q > 1` and exact values of eventually periodic expansions.
//!
//! A base is either a rational number or a real algebraic number given by a
//! square-free integer polynomial together with an isolating interval. Values
//! ([`XReal`]) are quotients of polynomials in `q`, reduced modulo the defining
//! polynomial. Equality is decided symbolically; strict order by bisecting the
//! isolating interval until an enclosure excludes zero.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::words::{Alphabet, PeriodicSeq};

/// Bisection rounds allowed per sign determination.
pub const REFINEMENT_CAP: u32 = 256;

/// Isolating intervals are narrowed to this many bits at construction.
const INITIAL_WIDTH_BITS: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BaseKind {
    Rational(BigRational),
    Algebraic {
        /// Primitive integer coefficients, constant first.
        poly: Vec<BigInt>,
        lo: BigRational,
        hi: BigRational,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct BaseInner {
    alphabet: Alphabet,
    kind: BaseKind,
    /// Monic defining polynomial (`x - q` for rational bases).
    modulus: Poly,
    /// For a rational stand-in of an unknown real: the interval known to contain it.
    bracket: Option<(BigRational, BigRational)>,
}

/// A base `q > 1` over a fixed alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BaseValue(Arc<BaseInner>);

impl BaseValue {
    pub fn rational(q: BigRational, alphabet: Alphabet) -> Result<Self> {
        if q <= BigRational::one() {
            return Err(Error::DegenerateBase);
        }
        let modulus = Poly::from_coeffs(vec![-q.clone(), BigRational::one()]);
        Ok(BaseValue(Arc::new(BaseInner {
            alphabet,
            kind: BaseKind::Rational(q),
            modulus,
            bracket: None,
        })))
    }

    /// A rational base `q` standing in for an unknown real in `[lo, hi]`.
    /// Digit expansions of such a base only report digits shared by the
    /// whole bracket.
    pub fn rational_bracketed(
        q: BigRational,
        lo: BigRational,
        hi: BigRational,
        alphabet: Alphabet,
    ) -> Result<Self> {
        if !(lo <= q && q <= hi) || lo <= BigRational::one() {
            return Err(Error::DegenerateBase);
        }
        let plain = Self::rational(q, alphabet)?;
        let inner = BaseInner {
            bracket: Some((lo, hi)),
            ..Arc::unwrap_or_clone(plain.0)
        };
        Ok(BaseValue(Arc::new(inner)))
    }

    /// The bracket of a base built by [`BaseValue::rational_bracketed`].
    pub fn bracket(&self) -> Option<&(BigRational, BigRational)> {
        self.0.bracket.as_ref()
    }

    pub fn integer(q: i64, alphabet: Alphabet) -> Result<Self> {
        Self::rational(BigRational::from_integer(q.into()), alphabet)
    }

    /// Algebraic base: the unique root of `poly` (constant-first integer
    /// coefficients) in the open interval `(lo, hi)`.
    pub fn algebraic(
        poly: &[BigInt],
        lo: BigRational,
        hi: BigRational,
        alphabet: Alphabet,
    ) -> Result<Self> {
        let p = Poly::from_ints(poly);
        if p.degree().unwrap_or(0) == 0 || !p.is_square_free() || lo >= hi {
            return Err(Error::NotIsolating);
        }
        let (sl, sh) = (p.sign_at(&lo), p.sign_at(&hi));
        if sl == Ordering::Equal || sh == Ordering::Equal || sl == sh {
            return Err(Error::NotIsolating);
        }
        if p.count_roots(&lo, &hi) != 1 {
            return Err(Error::NotIsolating);
        }
        Self::from_isolated(p, lo, hi, alphabet)
    }

    /// `p` square-free with a single root in `(lo, hi)` and a sign change across it.
    fn from_isolated(
        p: Poly,
        mut lo: BigRational,
        mut hi: BigRational,
        alphabet: Alphabet,
    ) -> Result<Self> {
        let one = BigRational::one();
        let target = BigRational::new(BigInt::one(), BigInt::one() << INITIAL_WIDTH_BITS);
        let slo = p.sign_at(&lo);
        let mut rounds = 0;
        while &hi - &lo > target || lo <= one {
            let mid = (&lo + &hi) / BigRational::from_integer(2.into());
            match p.sign_at(&mid) {
                Ordering::Equal => return Self::rational(mid, alphabet),
                s if s == slo => lo = mid,
                _ => hi = mid,
            }
            rounds += 1;
            if hi <= one || rounds > INITIAL_WIDTH_BITS + REFINEMENT_CAP {
                return Err(Error::DegenerateBase);
            }
        }
        let ints = p.integer_coeffs();
        let modulus = p.monic();
        Ok(BaseValue(Arc::new(BaseInner {
            alphabet,
            kind: BaseKind::Algebraic { poly: ints, lo, hi },
            modulus,
            bracket: None,
        })))
    }

    pub fn alphabet(&self) -> Alphabet {
        self.0.alphabet
    }

    pub fn kind(&self) -> &BaseKind {
        &self.0.kind
    }

    pub fn is_rational(&self) -> bool {
        matches!(self.0.kind, BaseKind::Rational(_))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.0.kind {
            BaseKind::Rational(q) => Some(q),
            _ => None,
        }
    }

    /// Rational enclosure `[lo, hi]` of the base (degenerate for rational bases).
    pub fn interval(&self) -> (BigRational, BigRational) {
        match &self.0.kind {
            BaseKind::Rational(q) => (q.clone(), q.clone()),
            BaseKind::Algebraic { lo, hi, .. } => (lo.clone(), hi.clone()),
        }
    }

    pub fn to_f64(&self) -> f64 {
        let (lo, hi) = self.interval();
        ((lo + hi) / BigRational::from_integer(2.into()))
            .to_f64()
            .unwrap_or(f64::NAN)
    }

    /// Same real number (possibly with different isolating intervals).
    pub fn same_number(&self, other: &BaseValue) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0 {
            return true;
        }
        if self.0.modulus != other.0.modulus {
            return false;
        }
        let (a_lo, a_hi) = self.interval();
        let (b_lo, b_hi) = other.interval();
        let lo = a_lo.max(b_lo);
        let hi = a_hi.min(b_hi);
        if lo > hi {
            return false;
        }
        let p = &self.0.modulus;
        lo == hi && p.eval(&lo).is_zero() || p.sign_at(&lo) != p.sign_at(&hi)
    }

    /// The base `q + r`.
    pub fn offset(&self, r: &BigRational) -> Result<BaseValue> {
        match &self.0.kind {
            BaseKind::Rational(q) => BaseValue::rational(q + r, self.alphabet()),
            BaseKind::Algebraic { lo, hi, .. } => {
                let p = self.0.modulus.shift_arg(&-r);
                Self::from_isolated(p, lo + r, hi + r, self.alphabet())
            }
        }
    }

    /// Exact comparison of the base with a rational number.
    pub fn cmp_rational(&self, r: &BigRational) -> Result<Ordering> {
        let x = XReal::from_rational(self, r.clone());
        self.q().compare(&x)
    }

    /// `1 < q <= M+1`.
    pub fn check_in_range(&self) -> Result<()> {
        let top = BigRational::from_integer(BigInt::from(self.alphabet().max() as u32 + 1));
        if self.cmp_rational(&top)? == Ordering::Greater {
            return Err(Error::BaseOutOfRange);
        }
        Ok(())
    }

    /// `q > M+1`.
    pub fn exceeds_alphabet(&self) -> Result<bool> {
        let top = BigRational::from_integer(BigInt::from(self.alphabet().max() as u32 + 1));
        Ok(self.cmp_rational(&top)? == Ordering::Greater)
    }

    /// The base itself as a value.
    pub fn q(&self) -> XReal {
        XReal::from_poly(self, Poly::x())
    }

    /// Parses `rational:p/q`, `decimal:1.9` or `poly:c0,c1,...,cn@lo,hi`.
    /// Bare `p/q` and decimal forms are accepted as well.
    pub fn parse(s: &str, alphabet: Alphabet) -> Result<BaseValue> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("poly:") {
            let (coeffs, interval) = rest
                .split_once('@')
                .ok_or_else(|| Error::Parse(format!("missing '@lo,hi' in {s:?}")))?;
            let poly = coeffs
                .split(',')
                .map(|c| {
                    c.trim()
                        .parse::<BigInt>()
                        .map_err(|_| Error::Parse(format!("bad coefficient {c:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            let (lo, hi) = interval
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("bad interval in {s:?}")))?;
            return BaseValue::algebraic(&poly, parse_rational(lo)?, parse_rational(hi)?, alphabet);
        }
        let body = s
            .strip_prefix("rational:")
            .or_else(|| s.strip_prefix("decimal:"))
            .unwrap_or(s);
        BaseValue::rational(parse_rational(body)?, alphabet)
    }

    /// Text form accepted by [`BaseValue::parse`].
    pub fn spec_string(&self) -> String {
        match &self.0.kind {
            BaseKind::Rational(q) => format!("rational:{q}"),
            BaseKind::Algebraic { poly, lo, hi } => {
                let cs: Vec<String> = poly.iter().map(|c| c.to_string()).collect();
                format!("poly:{}@{},{}", cs.join(","), lo, hi)
            }
        }
    }

    /// Reduces a polynomial in `q` modulo the defining polynomial.
    fn reduce(&self, p: &Poly) -> Poly {
        match &self.0.kind {
            BaseKind::Rational(q) => Poly::constant(p.eval(q)),
            BaseKind::Algebraic { .. } => {
                if p.degree().unwrap_or(0) < self.0.modulus.degree().unwrap() {
                    p.clone()
                } else {
                    p.rem(&self.0.modulus)
                }
            }
        }
    }

    /// Exact sign of `p(q)`.
    fn sign_of(&self, p: &Poly) -> Result<Ordering> {
        let zero = BigRational::zero();
        let (mut lo, mut hi) = match &self.0.kind {
            BaseKind::Rational(q) => return Ok(p.eval(q).cmp(&zero)),
            BaseKind::Algebraic { lo, hi, .. } => (lo.clone(), hi.clone()),
        };
        if p.is_zero() {
            return Ok(Ordering::Equal);
        }
        if p.degree() == Some(0) {
            return Ok(p.coeffs()[0].cmp(&zero));
        }
        let modulus = &self.0.modulus;
        let slo = modulus.sign_at(&lo);
        let mut zero_tested = false;
        for _ in 0..=REFINEMENT_CAP {
            let (elo, ehi) = p.eval_interval(&lo, &hi);
            if elo > zero {
                return Ok(Ordering::Greater);
            }
            if ehi < zero {
                return Ok(Ordering::Less);
            }
            if !zero_tested {
                zero_tested = true;
                if vanishes_at_root(p, modulus, &lo, &hi) {
                    return Ok(Ordering::Equal);
                }
            }
            let mid = (&lo + &hi) / BigRational::from_integer(2.into());
            match modulus.sign_at(&mid) {
                Ordering::Equal => return Ok(p.eval(&mid).cmp(&zero)),
                s if s == slo => lo = mid,
                _ => hi = mid,
            }
        }
        Err(Error::PrecisionExhausted(REFINEMENT_CAP))
    }
}

/// Whether `p` vanishes at the root of `modulus` isolated by `(lo, hi)`.
///
/// `g = gcd(p, modulus)` is square-free and its roots are roots of `modulus`,
/// so `g` changes sign across the interval iff it vanishes at the isolated root.
fn vanishes_at_root(p: &Poly, modulus: &Poly, lo: &BigRational, hi: &BigRational) -> bool {
    let g = p.gcd(modulus);
    if g.degree().unwrap_or(0) == 0 {
        return false;
    }
    g.sign_at(lo) != g.sign_at(hi)
}

/// Parses `p/q`, an integer or a finite decimal such as `1.9`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let err = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err())?;
        let d: BigInt = d.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(BigRational::new(n, d));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(err());
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let digits = format!("{int}{frac}");
    let n: BigInt = digits.parse().map_err(|_| err())?;
    let d = num_traits::pow(BigInt::from(10), frac.len());
    let v = BigRational::new(n, d);
    Ok(if neg { -v } else { v })
}

/// An exact real number `num(q)/den(q)` over a base, with `den(q) > 0`.
#[derive(Debug, Clone)]
pub struct XReal {
    num: Poly,
    den: Poly,
    base: BaseValue,
}

impl XReal {
    fn from_poly(base: &BaseValue, p: Poly) -> XReal {
        XReal {
            num: base.reduce(&p),
            den: Poly::one(),
            base: base.clone(),
        }
    }

    /// `num(q)/den(q)`; caller guarantees `den(q) > 0`.
    fn from_fraction(base: &BaseValue, num: Poly, den: Poly) -> XReal {
        let num = base.reduce(&num);
        let den = base.reduce(&den);
        if base.is_rational() {
            let d = den.coeffs()[0].clone();
            return XReal {
                num: num.scale(&d.recip()),
                den: Poly::one(),
                base: base.clone(),
            };
        }
        XReal {
            num,
            den,
            base: base.clone(),
        }
    }

    pub fn from_rational(base: &BaseValue, r: BigRational) -> XReal {
        XReal {
            num: Poly::constant(r),
            den: Poly::one(),
            base: base.clone(),
        }
    }

    pub fn zero(base: &BaseValue) -> XReal {
        Self::from_rational(base, BigRational::zero())
    }

    pub fn one(base: &BaseValue) -> XReal {
        Self::from_rational(base, BigRational::one())
    }

    pub fn base(&self) -> &BaseValue {
        &self.base
    }

    /// Canonical representation key (numerator and denominator reduced modulo the base polynomial).
    pub(crate) fn repr_key(&self) -> String {
        format!("{}|{}", self.num, self.den)
    }

    /// The value as a rational, available when the base is rational.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.base.is_rational() {
            Some(
                self.num
                    .coeffs()
                    .first()
                    .cloned()
                    .unwrap_or_else(BigRational::zero),
            )
        } else if self.num.degree().unwrap_or(0) == 0 && self.den.degree() == Some(0) {
            let n = self
                .num
                .coeffs()
                .first()
                .cloned()
                .unwrap_or_else(BigRational::zero);
            Some(n / &self.den.coeffs()[0])
        } else {
            None
        }
    }

    fn check_base(&self, other: &XReal) -> Result<()> {
        if self.base.same_number(&other.base) {
            Ok(())
        } else {
            Err(Error::IncompatibleBases)
        }
    }

    pub fn add(&self, other: &XReal) -> Result<XReal> {
        self.check_base(other)?;
        if self.den == other.den {
            return Ok(XReal::from_fraction(
                &self.base,
                &self.num + &other.num,
                self.den.clone(),
            ));
        }
        Ok(XReal::from_fraction(
            &self.base,
            &(&self.num * &other.den) + &(&other.num * &self.den),
            &self.den * &other.den,
        ))
    }

    pub fn neg(&self) -> XReal {
        XReal {
            num: -&self.num,
            den: self.den.clone(),
            base: self.base.clone(),
        }
    }

    pub fn sub(&self, other: &XReal) -> Result<XReal> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &XReal) -> Result<XReal> {
        self.check_base(other)?;
        Ok(XReal::from_fraction(
            &self.base,
            &self.num * &other.num,
            &self.den * &other.den,
        ))
    }

    pub fn scale(&self, r: &BigRational) -> XReal {
        XReal {
            num: self.num.scale(r),
            den: self.den.clone(),
            base: self.base.clone(),
        }
    }

    /// `q · self`.
    pub fn times_base(&self) -> XReal {
        XReal::from_fraction(&self.base, &self.num * &Poly::x(), self.den.clone())
    }

    pub fn signum(&self) -> Result<Ordering> {
        self.base.sign_of(&self.num)
    }

    pub fn is_zero(&self) -> Result<bool> {
        Ok(self.signum()? == Ordering::Equal)
    }

    /// Exact comparison; fails with [`Error::IncompatibleBases`] across bases.
    pub fn compare(&self, other: &XReal) -> Result<Ordering> {
        self.check_base(other)?;
        if self.num == other.num && self.den == other.den {
            return Ok(Ordering::Equal);
        }
        if self.den == other.den {
            return self
                .base
                .sign_of(&self.base.reduce(&(&self.num - &other.num)));
        }
        let diff = &(&self.num * &other.den) - &(&other.num * &self.den);
        self.base.sign_of(&self.base.reduce(&diff))
    }

    pub fn cmp_rational(&self, r: &BigRational) -> Result<Ordering> {
        self.compare(&XReal::from_rational(&self.base, r.clone()))
    }

    pub fn abs(&self) -> Result<XReal> {
        Ok(if self.signum()? == Ordering::Less {
            self.neg()
        } else {
            self.clone()
        })
    }

    /// Rational interval containing the value, using the base's current enclosure.
    pub fn enclosure(&self) -> (BigRational, BigRational) {
        let (lo, hi) = self.base.interval();
        let (nlo, nhi) = self.num.eval_interval(&lo, &hi);
        let (dlo, dhi) = self.den.eval_interval(&lo, &hi);
        if dlo <= BigRational::zero() {
            // denominator enclosure still straddles zero; refine first
            return self.refine().enclosure();
        }
        let cands = [&nlo / &dlo, &nlo / &dhi, &nhi / &dlo, &nhi / &dhi];
        (
            cands.iter().min().unwrap().clone(),
            cands.iter().max().unwrap().clone(),
        )
    }

    /// Enclosure of width at most `2^-bits`.
    pub fn enclosure_bits(&self, bits: u32) -> (BigRational, BigRational) {
        if let Some(v) = self.as_rational() {
            let scale = BigInt::one() << bits;
            let scaled = &v * BigRational::from_integer(scale.clone());
            return (
                BigRational::new(scaled.floor().to_integer(), scale.clone()),
                BigRational::new(scaled.ceil().to_integer(), scale),
            );
        }
        let target = BigRational::new(BigInt::one(), BigInt::one() << bits);
        let mut x = self.clone();
        for _ in 0..4 * (bits + REFINEMENT_CAP) {
            let (lo, hi) = x.enclosure();
            if &hi - &lo <= target {
                return (lo, hi);
            }
            x = x.refine();
        }
        x.enclosure()
    }

    /// Same value over a base whose isolating interval is halved.
    pub fn refine(&self) -> XReal {
        let base = match &self.base.0.kind {
            BaseKind::Rational(_) => return self.clone(),
            BaseKind::Algebraic { poly, lo, hi } => {
                let m = &self.base.0.modulus;
                let mid = (lo + hi) / BigRational::from_integer(2.into());
                let slo = m.sign_at(lo);
                let (nlo, nhi) = match m.sign_at(&mid) {
                    Ordering::Equal => (mid.clone(), mid),
                    s if s == slo => (mid, hi.clone()),
                    _ => (lo.clone(), mid),
                };
                BaseValue(Arc::new(BaseInner {
                    alphabet: self.base.alphabet(),
                    kind: BaseKind::Algebraic {
                        poly: poly.clone(),
                        lo: nlo,
                        hi: nhi,
                    },
                    modulus: m.clone(),
                    bracket: None,
                }))
            }
        };
        XReal {
            num: self.num.clone(),
            den: self.den.clone(),
            base,
        }
    }

    pub fn to_f64(&self) -> f64 {
        let (lo, hi) = self.enclosure_bits(60);
        ((lo + hi) / BigRational::from_integer(2.into()))
            .to_f64()
            .unwrap_or(f64::NAN)
    }
}

impl fmt::Display for XReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_rational() {
            Some(r) => write!(f, "{r}"),
            None => write!(f, "~{:.12}", self.to_f64()),
        }
    }
}

/// `(c_i)_q = Σ c_i q^{-i}` in closed form.
pub fn eval_value(c: &PeriodicSeq, q: &BaseValue) -> Result<XReal> {
    c.alphabet().ensure_same(q.alphabet())?;
    let (lo, _) = q.interval();
    if lo <= BigRational::one() {
        return Err(Error::DegenerateBase);
    }
    let p = c.preperiod().len();
    let l = c.period().len();
    if let Some(r) = q.as_rational() {
        // integer Horner keeps the rational path free of repeated gcds
        let pre = horner_at(c.preperiod(), r);
        let w = horner_at(c.period(), r);
        let ql = num_traits::pow(r.clone(), l);
        let qp = num_traits::pow(r.clone(), p);
        let v = (pre * (&ql - BigRational::one()) + w) / (qp * (ql - BigRational::one()));
        return Ok(XReal::from_rational(q, v));
    }
    // Σ_{i<=p} c_i q^{p-i}
    let pre = digits_poly(c.preperiod());
    let w = digits_poly(c.period());
    let ql_minus_1 = &Poly::monomial(BigRational::one(), l) - &Poly::one();
    let num = &(&pre * &ql_minus_1) + &w;
    let den = &Poly::monomial(BigRational::one(), p) * &ql_minus_1;
    Ok(XReal::from_fraction(q, num, den))
}

/// `Σ_{i=1}^{n} d_i r^{n-i}` for `r = a/b`, as `(Σ d_i a^{n-i} b^{i-1}) / b^{n-1}`.
fn horner_at(digits: &[u8], r: &BigRational) -> BigRational {
    if digits.is_empty() {
        return BigRational::zero();
    }
    let (a, b) = (r.numer(), r.denom());
    let mut acc = BigInt::zero();
    let mut bpow = BigInt::one();
    for &d in digits {
        acc = acc * a + BigInt::from(d) * &bpow;
        bpow *= b;
    }
    // bpow = b^n; acc = Σ d_i a^{n-i} b^{i-1}
    BigRational::new(acc, bpow / b)
}

/// `Σ_{i=1}^{n} d_i x^{n-i}`.
fn digits_poly(digits: &[u8]) -> Poly {
    let n = digits.len();
    Poly::from_coeffs(
        (0..n)
            .map(|k| BigRational::from_integer(BigInt::from(digits[n - 1 - k])))
            .collect(),
    )
}

/// Value of a finite word `Σ_{i<=n} d_i q^{-i}`.
pub fn eval_word(digits: &[u8], q: &BaseValue) -> XReal {
    XReal::from_fraction(
        q,
        digits_poly(digits),
        Poly::monomial(BigRational::one(), digits.len()),
    )
}

/// `M / (q^m (q-1))`: bound on the value difference of two sequences sharing `m` digits.
pub fn tail_bound(q: &BaseValue, m: usize) -> Result<XReal> {
    let (lo, _) = q.interval();
    if lo <= BigRational::one() {
        return Err(Error::DegenerateBase);
    }
    let mval = BigRational::from_integer(BigInt::from(q.alphabet().max()));
    let den = &Poly::monomial(BigRational::one(), m) * &(&Poly::x() - &Poly::one());
    Ok(XReal::from_fraction(q, Poly::constant(mval), den))
}

/// The base `q` in `(1, M+1]` with `(c)_q = 1`.
pub fn base_from_expansion(c: &PeriodicSeq) -> Result<BaseValue> {
    let alphabet = c.alphabet();
    if c.is_zero() {
        return Err(Error::NoRootInRange);
    }
    let p = c.preperiod().len();
    let l = c.period().len();
    let ql_minus_1 = &Poly::monomial(BigRational::one(), l) - &Poly::one();
    // q^p (q^L - 1) - pre(q)(q^L - 1) - w(q) = 0
    let lhs = &Poly::monomial(BigRational::one(), p) * &ql_minus_1;
    let rhs = &(&digits_poly(c.preperiod()) * &ql_minus_1) + &digits_poly(c.period());
    let f = (&lhs - &rhs).square_free_part();
    let f = strip_unit_circle_factors(f);

    let one = BigRational::one();
    let top = BigRational::from_integer(BigInt::from(alphabet.max() as u32 + 1));
    match f.count_roots(&one, &top) {
        0 => return Err(Error::NoRootInRange),
        1 => {}
        _ => return Err(Error::AmbiguousRoot),
    }
    // A monic integer polynomial has only integer rational roots.
    for k in 2..=alphabet.max() as i64 + 1 {
        let kq = BigRational::from_integer(k.into());
        if f.eval(&kq).is_zero() {
            return BaseValue::rational(kq, alphabet);
        }
    }
    let (mut lo, hi) = (one, top);
    for _ in 0..INITIAL_WIDTH_BITS {
        let mid = (&lo + &hi) / BigRational::from_integer(2.into());
        if f.count_roots(&mid, &hi) == 1 {
            lo = mid;
            if !f.eval(&lo).is_zero() {
                break;
            }
        } else {
            return Err(Error::AmbiguousRoot);
        }
    }
    if f.eval(&lo).is_zero() || f.sign_at(&lo) == f.sign_at(&hi) {
        return Err(Error::AmbiguousRoot);
    }
    BaseValue::from_isolated(f, lo, hi, alphabet)
}

/// Removes factors vanishing at `0` or at roots of unity, which never carry a base.
fn strip_unit_circle_factors(mut f: Poly) -> Poly {
    let deg = f.degree().unwrap_or(0);
    for k in 0..=2 * deg {
        let probe = if k == 0 {
            Poly::x()
        } else {
            &Poly::monomial(BigRational::one(), k) - &Poly::one()
        };
        let g = f.gcd(&probe);
        if g.degree().unwrap_or(0) > 0 {
            f = f.div_rem(&g).0;
        }
    }
    f
}
