//! Digit alphabets, finite words and eventually periodic sequences.
//!
//! Positions are 1-based: `digit(1)` is the first digit of a sequence, and
//! `shift(c, k)` returns `(c_{k+i})_{i>=1}`. Every [`PeriodicSeq`] is stored in
//! canonical form (primitive period, no tail that could be absorbed into the
//! period), so structural equality coincides with equality of the infinite
//! digit streams.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::error::{Error, Result};

/// The digit set `{0, 1, ..., M}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Alphabet(u8);

impl Alphabet {
    pub fn new(max: u8) -> Result<Self> {
        if max == 0 {
            return Err(Error::InvalidAlphabet);
        }
        Ok(Alphabet(max))
    }

    pub const BINARY: Alphabet = Alphabet(1);

    #[inline]
    pub fn max(self) -> u8 {
        self.0
    }

    #[inline]
    pub fn size(self) -> usize {
        self.0 as usize + 1
    }

    pub fn check(self, digits: &[u8]) -> Result<()> {
        match digits.iter().find(|&&d| d > self.0) {
            Some(&d) => Err(Error::InvalidDigit {
                digit: d as u32,
                max: self.0,
            }),
            None => Ok(()),
        }
    }

    pub fn ensure_same(self, other: Alphabet) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch(self.0, other.0))
        }
    }
}

/// A finite word over an alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    digits: Vec<u8>,
    alphabet: Alphabet,
}

impl Word {
    pub fn new(digits: Vec<u8>, alphabet: Alphabet) -> Result<Self> {
        alphabet.check(&digits)?;
        Ok(Word { digits, alphabet })
    }

    pub(crate) fn from_trusted(digits: Vec<u8>, alphabet: Alphabet) -> Self {
        debug_assert!(alphabet.check(&digits).is_ok());
        Word { digits, alphabet }
    }

    pub fn empty(alphabet: Alphabet) -> Self {
        Word {
            digits: Vec::new(),
            alphabet,
        }
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// Digit at 1-based position `i`.
    pub fn digit(&self, i: usize) -> u8 {
        self.digits[i - 1]
    }

    pub fn reflect(&self) -> Word {
        let m = self.alphabet.max();
        Word {
            digits: self.digits.iter().map(|&d| m - d).collect(),
            alphabet: self.alphabet,
        }
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word {
            digits: self.digits[..n.min(self.digits.len())].to_vec(),
            alphabet: self.alphabet,
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut digits = self.digits.clone();
        digits.extend_from_slice(&other.digits);
        Word {
            digits,
            alphabet: self.alphabet,
        }
    }

    /// `self` followed by `0^∞`.
    pub fn zero_padded(&self) -> PeriodicSeq {
        PeriodicSeq::from_parts_trusted(self.digits.clone(), vec![0], self.alphabet)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_digits(f, &self.digits, self.alphabet)
    }
}

/// An eventually periodic sequence `preperiod · period^∞`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PeriodicSeq {
    preperiod: Vec<u8>,
    period: Vec<u8>,
    alphabet: Alphabet,
}

impl PeriodicSeq {
    pub fn new(preperiod: Vec<u8>, period: Vec<u8>, alphabet: Alphabet) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        alphabet.check(&preperiod)?;
        alphabet.check(&period)?;
        Ok(Self::from_parts_trusted(preperiod, period, alphabet))
    }

    /// Purely periodic sequence `period^∞`.
    pub fn purely_periodic(period: Vec<u8>, alphabet: Alphabet) -> Result<Self> {
        Self::new(Vec::new(), period, alphabet)
    }

    /// The constant sequence `d^∞`.
    pub fn constant(d: u8, alphabet: Alphabet) -> Self {
        Self::from_parts_trusted(Vec::new(), vec![d], alphabet)
    }

    pub(crate) fn from_parts_trusted(
        mut preperiod: Vec<u8>,
        period: Vec<u8>,
        alphabet: Alphabet,
    ) -> Self {
        let mut period = primitive_root(period);
        while let (Some(&p), Some(&l)) = (preperiod.last(), period.last()) {
            if p != l {
                break;
            }
            preperiod.pop();
            period.rotate_right(1);
        }
        PeriodicSeq {
            preperiod,
            period,
            alphabet,
        }
    }

    pub fn preperiod(&self) -> &[u8] {
        &self.preperiod
    }

    pub fn period(&self) -> &[u8] {
        &self.period
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn is_purely_periodic(&self) -> bool {
        self.preperiod.is_empty()
    }

    /// Number of positions after which `shift` starts repeating.
    pub fn cycle_bound(&self) -> usize {
        self.preperiod.len() + self.period.len()
    }

    /// Digit at 1-based position `i`.
    pub fn digit(&self, i: usize) -> u8 {
        debug_assert!(i >= 1);
        let p = self.preperiod.len();
        if i <= p {
            self.preperiod[i - 1]
        } else {
            self.period[(i - p - 1) % self.period.len()]
        }
    }

    /// The infinite digit stream `c_1, c_2, ...`.
    pub fn digits(&self) -> impl Iterator<Item = u8> + '_ {
        self.preperiod
            .iter()
            .copied()
            .chain(self.period.iter().copied().cycle())
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word {
            digits: self.digits().take(n).collect(),
            alphabet: self.alphabet,
        }
    }

    pub fn reflect(&self) -> PeriodicSeq {
        let m = self.alphabet.max();
        let flip = |v: &[u8]| v.iter().map(|&d| m - d).collect::<Vec<_>>();
        PeriodicSeq::from_parts_trusted(flip(&self.preperiod), flip(&self.period), self.alphabet)
    }

    /// `σ^k`: drops the first `k` digits.
    pub fn shift(&self, k: usize) -> PeriodicSeq {
        let p = self.preperiod.len();
        if k <= p {
            return PeriodicSeq::from_parts_trusted(
                self.preperiod[k..].to_vec(),
                self.period.clone(),
                self.alphabet,
            );
        }
        let mut period = self.period.clone();
        let r = (k - p) % period.len();
        period.rotate_left(r);
        PeriodicSeq::from_parts_trusted(Vec::new(), period, self.alphabet)
    }

    /// `w · self`.
    pub fn prepend(&self, w: &[u8]) -> PeriodicSeq {
        let mut pre = w.to_vec();
        pre.extend_from_slice(&self.preperiod);
        PeriodicSeq::from_parts_trusted(pre, self.period.clone(), self.alphabet)
    }

    /// Length of the longest common prefix, `None` when the sequences are equal.
    pub fn first_difference(&self, other: &PeriodicSeq) -> Option<usize> {
        let horizon = self.preperiod.len().max(other.preperiod.len())
            + self.period.len().lcm(&other.period.len());
        self.digits()
            .zip(other.digits())
            .take(horizon)
            .position(|(a, b)| a != b)
            .map(|i| i + 1)
    }

    /// Lexicographic order of the infinite digit streams.
    pub fn lex_cmp(&self, other: &PeriodicSeq) -> Ordering {
        match self.first_difference(other) {
            None => Ordering::Equal,
            Some(i) => self.digit(i).cmp(&other.digit(i)),
        }
    }

    /// `ρ(c, d)`: `0` if equal, else `2^{-n}` with `n` the first differing index.
    pub fn rho_distance(&self, other: &PeriodicSeq) -> Dyadic {
        match self.first_difference(other) {
            None => Dyadic::ZERO,
            Some(n) => Dyadic::pow2_neg(n as u32),
        }
    }

    /// Infinitely many nonzero digits.
    pub fn is_infinite(&self) -> bool {
        self.period.iter().any(|&d| d != 0)
    }

    /// Infinite, and the reflection is infinite as well.
    pub fn is_doubly_infinite(&self) -> bool {
        self.is_infinite() && self.period.iter().any(|&d| d < self.alphabet.max())
    }

    pub fn is_zero(&self) -> bool {
        self.preperiod.is_empty() && self.period == [0]
    }

    /// Parse `"1(10)"` style text (see [`parse_sequence`]).
    pub fn parse(s: &str, alphabet: Alphabet) -> Result<Self> {
        match parse_sequence(s, alphabet)? {
            Seq::Periodic(p) => Ok(p),
            Seq::Finite(_) => Err(Error::Parse(format!(
                "expected a periodic sequence like \"1(10)\", got {s:?}"
            ))),
        }
    }
}

impl fmt::Display for PeriodicSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_digits(f, &self.preperiod, self.alphabet)?;
        f.write_str("(")?;
        write_digits(f, &self.period, self.alphabet)?;
        f.write_str(")")
    }
}

impl PartialOrd for PeriodicSeq {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PeriodicSeq {
    fn cmp(&self, other: &Self) -> Ordering {
        self.lex_cmp(other)
    }
}

fn primitive_root(period: Vec<u8>) -> Vec<u8> {
    let n = period.len();
    for d in 1..n {
        if n.is_multiple_of(d) && (d..n).all(|i| period[i] == period[i - d]) {
            return period[..d].to_vec();
        }
    }
    period
}

fn write_digits(f: &mut fmt::Formatter<'_>, digits: &[u8], alphabet: Alphabet) -> fmt::Result {
    if alphabet.max() <= 9 {
        for d in digits {
            write!(f, "{d}")?;
        }
    } else {
        for (i, d) in digits.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
    }
    Ok(())
}

/// Either a finite word or an eventually periodic sequence, as parsed from text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Seq {
    Finite(Word),
    Periodic(PeriodicSeq),
}

impl Seq {
    pub fn alphabet(&self) -> Alphabet {
        match self {
            Seq::Finite(w) => w.alphabet(),
            Seq::Periodic(c) => c.alphabet(),
        }
    }

    /// Digit at 1-based position `i`, if the sequence reaches it.
    pub fn digit_at(&self, i: usize) -> Option<u8> {
        match self {
            Seq::Finite(w) => (i >= 1 && i <= w.len()).then(|| w.digit(i)),
            Seq::Periodic(c) => (i >= 1).then(|| c.digit(i)),
        }
    }

    /// The first `n` digits (fewer for a short finite word).
    pub fn head(&self, n: usize) -> Vec<u8> {
        (1..=n).map_while(|i| self.digit_at(i)).collect()
    }
}

impl fmt::Display for Seq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Seq::Finite(w) => w.fmt(f),
            Seq::Periodic(c) => c.fmt(f),
        }
    }
}

/// Parses `"110"` as a finite word and `"1(10)"` as `1(10)^∞`.
///
/// Digits are comma-free when `M <= 9` and comma-separated otherwise.
pub fn parse_sequence(s: &str, alphabet: Alphabet) -> Result<Seq> {
    let s = s.trim();
    let parse_digits = |t: &str| -> Result<Vec<u8>> {
        let t = t.trim();
        if t.is_empty() {
            return Ok(Vec::new());
        }
        let digits = if alphabet.max() <= 9 {
            t.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as u8)
                        .ok_or_else(|| Error::Parse(format!("bad digit {c:?} in {s:?}")))
                })
                .collect::<Result<Vec<_>>>()?
        } else {
            t.split(',')
                .map(|p| {
                    u8::from_str(p.trim()).map_err(|_| Error::Parse(format!("bad digit {p:?}")))
                })
                .collect::<Result<Vec<_>>>()?
        };
        alphabet.check(&digits)?;
        Ok(digits)
    };
    match s.find('(') {
        None => Ok(Seq::Finite(Word::new(parse_digits(s)?, alphabet)?)),
        Some(open) => {
            let close = s
                .rfind(')')
                .filter(|&c| c == s.len() - 1 && c > open)
                .ok_or_else(|| Error::Parse(format!("unbalanced parentheses in {s:?}")))?;
            let pre = parse_digits(&s[..open])?;
            let period = parse_digits(&s[open + 1..close])?;
            Ok(Seq::Periodic(PeriodicSeq::new(pre, period, alphabet)?))
        }
    }
}

/// A dyadic value that is either `0` or `2^{-k}`.
///
/// Ordered by value: `ZERO < 2^{-k-1} < 2^{-k}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dyadic(Option<u32>);

impl Dyadic {
    pub const ZERO: Dyadic = Dyadic(None);

    pub fn pow2_neg(k: u32) -> Dyadic {
        Dyadic(Some(k))
    }

    pub fn is_zero(self) -> bool {
        self.0.is_none()
    }

    /// `k` such that the value is `2^{-k}`, or `None` for zero.
    pub fn exponent(self) -> Option<u32> {
        self.0
    }

    pub fn to_rational(self) -> num_rational::BigRational {
        use num_bigint::BigInt;
        use num_traits::{One, Zero};
        match self.0 {
            None => num_rational::BigRational::zero(),
            Some(k) => num_rational::BigRational::new(BigInt::one(), BigInt::one() << k),
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.0, other.0) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (Some(a), Some(b)) => b.cmp(&a),
        }
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            None => f.write_str("0"),
            Some(0) => f.write_str("1"),
            Some(k) if k < 64 => write!(f, "1/{}", 1u64 << k),
            Some(k) => write!(f, "2^-{k}"),
        }
    }
}

impl serde::Serialize for Dyadic {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `τ_1 … τ_n` with `τ_i` the parity of the number of 1-bits of `i`.
pub fn thue_morse_prefix(n: usize) -> Word {
    Word::from_trusted(
        (1..=n as u64).map(|i| (i.count_ones() & 1) as u8).collect(),
        Alphabet::BINARY,
    )
}
