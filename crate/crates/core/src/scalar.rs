//! Coefficient rings.
//!
//! Everything in the crate is generic over [`Scalar`]. The exact pipeline runs
//! on [`Rational`]; [`UniPoly`] doubles as the ring ℚ[Π] for the formal symbol
//! Π = π√−1 and as ℚ[σ] for symbolic connection parameters.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub type Rational = BigRational;

pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_rational(r: &Rational) -> Self;

    /// Inverse in the ring, if the element is a unit.
    fn try_inv(&self) -> Option<Self>;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(v)))
    }
}

impl Scalar for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn try_inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
}

impl Scalar for f64 {
    fn from_rational(r: &Rational) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }
    fn try_inv(&self) -> Option<Self> {
        if *self == 0.0 {
            None
        } else {
            Some(1.0 / self)
        }
    }
}

impl Scalar for Complex64 {
    fn from_rational(r: &Rational) -> Self {
        Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn try_inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.inv())
        }
    }
}

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    s.trim().parse::<Rational>().ok()
}

pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn factorial(k: u64) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, j| acc * BigInt::from(j))
}

pub fn binomial(n: i64, k: i64) -> Rational {
    // generalized binomial with integer top
    if k < 0 {
        return Rational::zero();
    }
    let mut acc = Rational::one();
    for j in 0..k {
        acc = acc * int(n - j) / int(j + 1);
    }
    acc
}

/// Dense univariate polynomial over ℚ, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The indeterminate itself.
    pub fn var() -> Self {
        Self::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * int(k as i64))
                .collect(),
        )
    }

    /// Multiplication by `var^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![Rational::zero(); k];
        c.extend(self.coeffs.iter().cloned());
        Self::new(c)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead_inv = d.leading().recip();
        let mut rem = self.coeffs.clone();
        let mut quo = vec![Rational::zero(); self.coeffs.len().saturating_sub(dd).max(1)];
        while rem.len() > dd {
            let k = rem.len() - 1;
            let c = &rem[k] * &lead_inv;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[k - dd + j] = &rem[k - dd + j] - &c * dc;
                }
                quo[k - dd] = c;
            }
            rem.pop();
        }
        (Self::new(quo), Self::new(rem))
    }

    pub fn gcd(a: &Self, b: &Self) -> Self {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            self.clone()
        } else {
            self.scale(&self.leading().recip())
        }
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{}", format_rational(c))?,
                1 => write!(f, "({})*Π", format_rational(c))?,
                _ => write!(f, "({})*Π^{}", format_rational(c), k)?,
            }
        }
        Ok(())
    }
}

impl Zero for UniPoly {
    fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for UniPoly {
    fn one() -> Self {
        Self::constant(Rational::one())
    }
}

impl Add for UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut c = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        UniPoly::new(c)
    }
}

impl Neg for UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl Scalar for UniPoly {
    fn from_rational(r: &Rational) -> Self {
        Self::constant(r.clone())
    }
    fn try_inv(&self) -> Option<Self> {
        if self.coeffs.len() == 1 {
            Some(Self::constant(self.coeffs[0].recip()))
        } else {
            None
        }
    }
}

/// Reduced quotient of univariate polynomials with a monic denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFn1 {
    pub num: UniPoly,
    pub den: UniPoly,
}

impl RatFn1 {
    pub fn new(num: UniPoly, den: UniPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFn1 {
                num,
                den: UniPoly::one(),
            };
        }
        let g = UniPoly::gcd(&num, &den);
        let num = num.div_rem(&g).0;
        let den = den.div_rem(&g).0;
        let l = den.leading().recip();
        RatFn1 {
            num: num.scale(&l),
            den: den.scale(&l),
        }
    }

    pub fn poly(p: UniPoly) -> Self {
        RatFn1 {
            num: p,
            den: UniPoly::one(),
        }
    }

    /// `c·var^k` for any integer `k`.
    pub fn monomial(c: Rational, k: i64) -> Self {
        if k >= 0 {
            Self::new(UniPoly::constant(c).shift(k as usize), UniPoly::one())
        } else {
            Self::new(UniPoly::constant(c), UniPoly::one().shift((-k) as usize))
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(
            self.num.clone() * o.den.clone() + o.num.clone() * self.den.clone(),
            self.den.clone() * o.den.clone(),
        )
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(self.num.clone() * o.num.clone(), self.den.clone() * o.den.clone())
    }

    pub fn div(&self, o: &Self) -> Self {
        Self::new(self.num.clone() * o.den.clone(), self.den.clone() * o.num.clone())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.num.derivative() * self.den.clone() - self.num.clone() * self.den.derivative(),
            self.den.clone() * self.den.clone(),
        )
    }

    /// If the function is `c·var^k`, returns `(c, k)`.
    pub fn as_monomial(&self) -> Option<(Rational, i64)> {
        let single = |p: &UniPoly| {
            let nz: Vec<usize> = (0..p.coeffs().len())
                .filter(|&k| !p.coeff(k).is_zero())
                .collect();
            (nz.len() == 1).then(|| (p.coeff(nz[0]), nz[0] as i64))
        };
        if self.num.is_zero() {
            return Some((Rational::zero(), 0));
        }
        let (a, i) = single(&self.num)?;
        let (b, j) = single(&self.den)?;
        Some((a / b, i - j))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unipoly_ring_ops() {
        let p = UniPoly::var() + UniPoly::one();
        let sq = p.clone() * p.clone();
        assert_eq!(sq.coeffs(), &[int(1), int(2), int(1)]);
        assert_eq!((sq.clone() - sq).degree(), None);
    }

    #[test]
    fn division_and_gcd() {
        let a = UniPoly::new(vec![int(-1), int(0), int(1)]);
        let b = UniPoly::new(vec![int(1), int(1)]);
        let (q, r) = a.div_rem(&b);
        assert!(r.is_zero());
        assert_eq!(q, UniPoly::new(vec![int(-1), int(1)]));
        assert_eq!(UniPoly::gcd(&a, &b), b);
    }

    #[test]
    fn ratfn_reduces_to_monomial() {
        let x3 = UniPoly::one().shift(3);
        let f = RatFn1::new(UniPoly::one().shift(1).scale(&int(6)), x3.scale(&int(2)));
        assert_eq!(f.as_monomial(), Some((int(3), -2)));
        let d = f.derivative();
        assert_eq!(d.as_monomial(), Some((int(-6), -3)));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), int(10));
        assert_eq!(binomial(3, 4), int(0));
        assert_eq!(binomial(-5, 2), int(15));
    }

    #[test]
    fn rational_format_round_trip() {
        let r = rat(-337216250, 3);
        assert_eq!(parse_rational(&format_rational(&r)), Some(r));
        assert_eq!(format_rational(&int(7)), "7");
    }
}
