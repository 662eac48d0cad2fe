//! Dense univariate polynomials over the rationals, coefficients constant-first.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

#[cfg(test)]
pub(crate) fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Self::from_coeffs(vec![BigRational::zero(), BigRational::one()])
    }

    /// `c·x^k`.
    pub fn monomial(c: BigRational, k: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[BigInt]) -> Self {
        Self::from_coeffs(
            coeffs
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some(l) => self.scale(&l.recip()),
        }
    }

    pub fn derivative(&self) -> Poly {
        Poly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn sign_at(&self, x: &BigRational) -> Ordering {
        self.eval(x).cmp(&BigRational::zero())
    }

    /// Enclosure of `{p(x) : lo <= x <= hi}` by the mean-value form around the midpoint.
    pub fn eval_interval(&self, lo: &BigRational, hi: &BigRational) -> (BigRational, BigRational) {
        if lo == hi {
            let v = self.eval(lo);
            return (v.clone(), v);
        }
        let mid = (lo + hi) / BigRational::from_integer(BigInt::from(2));
        let radius = (hi - lo) / BigRational::from_integer(BigInt::from(2));
        let center = self.eval(&mid);
        let (dlo, dhi) = self.derivative().horner_interval(lo, hi);
        let slope = dlo.abs().max(dhi.abs());
        let spread = slope * radius;
        (&center - &spread, center + spread)
    }

    fn horner_interval(&self, lo: &BigRational, hi: &BigRational) -> (BigRational, BigRational) {
        let mut acc = (BigRational::zero(), BigRational::zero());
        for c in self.coeffs.iter().rev() {
            let prods = [&acc.0 * lo, &acc.0 * hi, &acc.1 * lo, &acc.1 * hi];
            let mn = prods.iter().min().unwrap().clone();
            let mx = prods.iter().max().unwrap().clone();
            acc = (mn + c, mx + c);
        }
        acc
    }

    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let d = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = divisor.leading().unwrap().recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - d];
        for i in (d..rem.len()).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let factor = &rem[i] * &lead_inv;
            for (j, c) in divisor.coeffs.iter().enumerate() {
                let idx = i - d + j;
                rem[idx] = &rem[idx] - &factor * c;
            }
            quot[i - d] = factor;
        }
        rem.truncate(d);
        (Poly::from_coeffs(quot), Poly::from_coeffs(rem))
    }

    pub fn rem(&self, divisor: &Poly) -> Poly {
        self.div_rem(divisor).1
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.primitive_rational();
        }
        a.monic()
    }

    /// Positive rescaling to coprime integer coefficients; keeps Euclid's remainders small.
    fn primitive_rational(&self) -> Poly {
        Poly::from_ints(&self.integer_coeffs())
    }

    /// Coprime integer coefficients of a rational multiple of `self`.
    pub fn integer_coeffs(&self) -> Vec<BigInt> {
        let den = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if g.is_zero() {
            return ints;
        }
        ints.into_iter().map(|c| c / &g).collect()
    }

    pub fn square_free_part(&self) -> Poly {
        let g = self.gcd(&self.derivative());
        if g.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        self.div_rem(&g).0
    }

    pub fn is_square_free(&self) -> bool {
        self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// `p(x + r)`.
    pub fn shift_arg(&self, r: &BigRational) -> Poly {
        let lin = Poly::from_coeffs(vec![r.clone(), BigRational::one()]);
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &Poly::constant(c.clone());
        }
        acc
    }

    pub fn sturm_chain(&self) -> Vec<Poly> {
        let mut chain = vec![self.clone(), self.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let r = chain[n - 2].rem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(-&r.primitive_rational());
        }
        chain
    }

    /// Number of distinct real roots in `(a, b]`.
    pub fn count_roots(&self, a: &BigRational, b: &BigRational) -> usize {
        let chain = self.sturm_chain();
        let va = sign_variations(&chain, a);
        let vb = sign_variations(&chain, b);
        va.saturating_sub(vb)
    }
}

fn sign_variations(chain: &[Poly], x: &BigRational) -> usize {
    let signs: Vec<Ordering> = chain
        .iter()
        .map(|p| p.sign_at(x))
        .filter(|s| *s != Ordering::Equal)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = BigRational::zero();
        Poly::from_coeffs(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + rhs.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::from_coeffs(out)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("({c})q"),
                _ => format!("({c})q^{i}"),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(&c.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>())
    }

    #[test]
    fn arithmetic() {
        let a = p(&[-1, -1, 1]);
        let b = p(&[1, 1]);
        assert_eq!(&a * &b, p(&[-1, -2, 0, 1]));
        let (q, r) = p(&[-1, -2, 0, 1]).div_rem(&b);
        assert_eq!(q, a);
        assert!(r.is_zero());
        assert_eq!(p(&[0, 0, 1]).rem(&a), p(&[1, 1]));
    }

    #[test]
    fn gcd_and_square_free() {
        let a = &p(&[-1, 1]) * &p(&[-1, 1]);
        let a = &a * &p(&[2, 1]);
        assert_eq!(a.gcd(&a.derivative()), p(&[-1, 1]));
        assert_eq!(
            a.square_free_part().monic(),
            (&p(&[-1, 1]) * &p(&[2, 1])).monic()
        );
        assert!(p(&[-1, -1, 1]).is_square_free());
    }

    #[test]
    fn sturm_counts() {
        // (x-1)(x-2)(x-3)
        let f = &(&p(&[-1, 1]) * &p(&[-2, 1])) * &p(&[-3, 1]);
        assert_eq!(f.count_roots(&rat(0, 1), &rat(4, 1)), 3);
        assert_eq!(f.count_roots(&rat(1, 1), &rat(2, 1)), 1);
        assert_eq!(f.count_roots(&rat(3, 2), &rat(5, 2)), 1);
        assert_eq!(p(&[1, 0, 1]).count_roots(&rat(-10, 1), &rat(10, 1)), 0);
    }

    #[test]
    fn interval_eval_encloses() {
        let f = p(&[-1, -1, 1]);
        let (lo, hi) = f.eval_interval(&rat(3, 2), &rat(2, 1));
        for x in [rat(3, 2), rat(7, 4), rat(2, 1)] {
            let v = f.eval(&x);
            assert!(lo <= v && v <= hi);
        }
    }

    #[test]
    fn shift_argument() {
        let f = p(&[-1, -1, 1]);
        let g = f.shift_arg(&rat(1, 2));
        assert_eq!(g.eval(&rat(3, 1)), f.eval(&rat(7, 2)));
    }
}
