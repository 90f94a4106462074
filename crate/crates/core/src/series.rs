//! Truncated q-series: scalar [`UniSeries`], algebra-valued [`CohSeries`]
//! with Laurent-in-z coefficients, and matrix entries [`ZqSeries`].

use std::collections::BTreeMap;

use num_traits::One;

use crate::coh_algebra::{AlgebraPresentation, CohElement};
use crate::error::{Error, Result};
use crate::scalar::{int, rat, Scalar};

/// Σ_{k ≤ order} c_k q^k.
#[derive(Clone, Debug, PartialEq)]
pub struct UniSeries<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> UniSeries<S> {
    /// Order is `coeffs.len() − 1`; an empty vector means the zero series of order 0.
    pub fn new(mut coeffs: Vec<S>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(S::zero());
        }
        UniSeries { coeffs }
    }

    pub fn with_order(coeffs: Vec<S>, order: usize) -> Self {
        let mut c = coeffs;
        c.resize(order + 1, S::zero());
        UniSeries { coeffs: c }
    }

    pub fn zero(order: usize) -> Self {
        UniSeries {
            coeffs: vec![S::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(S::one(), order)
    }

    pub fn constant(c: S, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// The series `q`.
    pub fn var(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = S::one();
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> S {
        self.coeffs.get(k).cloned().unwrap_or_else(S::zero)
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::with_order(self.coeffs.iter().take(order + 1).cloned().collect(), order)
    }

    pub fn add(&self, o: &Self) -> Self {
        let d = self.order().min(o.order());
        Self::with_order(
            (0..=d).map(|k| self.coeffs[k].clone() + o.coeffs[k].clone()).collect(),
            d,
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        UniSeries {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        UniSeries {
            coeffs: self.coeffs.iter().map(|x| x.clone() * c.clone()).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let d = self.order().min(o.order());
        let mut out = vec![S::zero(); d + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(d + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(d + 1 - i) {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        UniSeries { coeffs: out }
    }

    /// Reciprocal; the constant term must be a unit.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.coeffs[0]
            .try_inv()
            .ok_or_else(|| Error::NotUnit(format!("constant term {}", self.coeffs[0])))?;
        let d = self.order();
        let mut b = vec![S::zero(); d + 1];
        b[0] = c0.clone();
        for k in 1..=d {
            let mut s = S::zero();
            for j in 1..=k {
                s = s + self.coeffs[j].clone() * b[k - j].clone();
            }
            b[k] = -(s * c0.clone());
        }
        Ok(UniSeries { coeffs: b })
    }

    /// exp of a series with vanishing constant term.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Series("exp needs a(0) = 0".into()));
        }
        // b' = a' b
        let d = self.order();
        let mut b = vec![S::zero(); d + 1];
        b[0] = S::one();
        for k in 1..=d {
            let mut s = S::zero();
            for j in 1..=k {
                s = s + S::from_i64(j as i64) * self.coeffs[j].clone() * b[k - j].clone();
            }
            b[k] = s * S::from_rational(&rat(1, k as i64));
        }
        Ok(UniSeries { coeffs: b })
    }

    /// log of a series with constant term 1.
    pub fn log(&self) -> Result<Self> {
        if self.coeffs[0] != S::one() {
            return Err(Error::Series("log needs a(0) = 1".into()));
        }
        // (log a)' = a'/a
        let inv = self.inverse()?;
        let da = self.theta();
        let q = da.mul(&inv);
        let mut out = vec![S::zero(); self.order() + 1];
        for (k, slot) in out.iter_mut().enumerate().skip(1) {
            *slot = q.coeffs[k].clone() * S::from_rational(&rat(1, k as i64));
        }
        Ok(UniSeries { coeffs: out })
    }

    /// q·d/dq.
    pub fn theta(&self) -> Self {
        UniSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c.clone() * S::from_i64(k as i64))
                .collect(),
        }
    }

    /// a(b(q)); requires b(0) = 0.
    pub fn compose(&self, b: &Self) -> Result<Self> {
        if !b.coeffs[0].is_zero() {
            return Err(Error::Series("compose needs b(0) = 0".into()));
        }
        let d = self.order().min(b.order());
        let b = b.truncate(d);
        let mut acc = Self::zero(d);
        for k in (0..=d).rev() {
            acc = acc.mul(&b);
            acc.coeffs[0] = acc.coeffs[0].clone() + self.coeffs[k].clone();
        }
        Ok(acc)
    }

    /// Compositional inverse of a = a₁q + …, a₁ a unit.
    pub fn revert(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Series("revert needs a(0) = 0".into()));
        }
        let d = self.order();
        if d == 0 {
            return Ok(Self::zero(0));
        }
        let a1_inv = self.coeffs[1]
            .try_inv()
            .ok_or_else(|| Error::Series("revert needs a'(0) to be a unit".into()))?;
        let mut b = Self::zero(d);
        b.coeffs[1] = a1_inv.clone();
        // fix one coefficient per step: a(b) = q + c_k q^k + … ⇒ b_k −= c_k/a₁
        for k in 2..=d {
            let c = self.compose(&b)?.coeffs[k].clone();
            b.coeffs[k] = b.coeffs[k].clone() - c * a1_inv.clone();
        }
        Ok(b)
    }

    /// Removes one factor of q; requires a(0) = 0 and loses one order.
    pub fn div_q(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Series("division by q needs a(0) = 0".into()));
        }
        if self.order() == 0 {
            return Err(Error::Series("no order left after dividing by q".into()));
        }
        Ok(UniSeries {
            coeffs: self.coeffs[1..].to_vec(),
        })
    }

    /// Multiplication by q at fixed order.
    pub fn mul_q(&self) -> Self {
        let mut c = vec![S::zero()];
        c.extend(self.coeffs[..self.order()].iter().cloned());
        UniSeries { coeffs: c }
    }

    /// Substitution q ↦ λq.
    pub fn rescale(&self, lambda: &S) -> Self {
        let mut p = S::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(c.clone() * p.clone());
            p = p * lambda.clone();
        }
        UniSeries { coeffs: out }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> UniSeries<T> {
        UniSeries {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }
}

impl UniSeries<crate::Rational> {
    /// Whether every coefficient up to `order` is an integer.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }
}

/// Finite Laurent polynomial in z with coefficients in an algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct ZPoly<S> {
    rank: usize,
    terms: BTreeMap<i64, CohElement<S>>,
}

impl<S: Scalar> ZPoly<S> {
    pub fn zero(rank: usize) -> Self {
        ZPoly {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(c: CohElement<S>, j: i64) -> Self {
        let mut p = Self::zero(c.rank());
        p.add_term(j, c);
        p
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn terms(&self) -> &BTreeMap<i64, CohElement<S>> {
        &self.terms
    }

    pub fn coeff(&self, j: i64) -> CohElement<S> {
        self.terms
            .get(&j)
            .cloned()
            .unwrap_or_else(|| CohElement::zero(self.rank))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, j: i64, c: CohElement<S>) {
        assert_eq!(c.rank(), self.rank, "rank mismatch");
        let v = match self.terms.remove(&j) {
            Some(old) => old + c,
            None => c,
        };
        if !v.is_zero() {
            self.terms.insert(j, v);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (j, c) in &o.terms {
            out.add_term(*j, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        ZPoly {
            rank: self.rank,
            terms: self.terms.iter().map(|(j, c)| (*j, -c.clone())).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = Self::zero(self.rank);
        for (j, c) in &self.terms {
            out.add_term(*j, c.scale(s));
        }
        out
    }

    pub fn mul(&self, alg: &AlgebraPresentation, o: &Self) -> Self {
        let mut out = Self::zero(self.rank);
        for (i, a) in &self.terms {
            for (j, b) in &o.terms {
                out.add_term(i + j, alg.mul(a, b));
            }
        }
        out
    }

    /// Multiplication by an algebra element.
    pub fn mul_elem(&self, alg: &AlgebraPresentation, c: &CohElement<S>) -> Self {
        let mut out = Self::zero(self.rank);
        for (j, a) in &self.terms {
            out.add_term(*j, alg.mul(a, c));
        }
        out
    }

    pub fn shift(&self, k: i64) -> Self {
        ZPoly {
            rank: self.rank,
            terms: self.terms.iter().map(|(j, c)| (j + k, c.clone())).collect(),
        }
    }

    /// z ↦ −z.
    pub fn negate_z(&self) -> Self {
        ZPoly {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(j, c)| (*j, if j % 2 == 0 { c.clone() } else { -c.clone() }))
                .collect(),
        }
    }

    pub fn eval_one(&self) -> CohElement<S> {
        self.terms
            .values()
            .fold(CohElement::zero(self.rank), |acc, c| acc + c.clone())
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }
}

/// Σ_{d ≤ order} q^d P_d(z), each P_d a finite z-Laurent polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct CohSeries<S> {
    rank: usize,
    slots: Vec<ZPoly<S>>,
}

impl<S: Scalar> CohSeries<S> {
    pub fn zero(rank: usize, order: usize) -> Self {
        CohSeries {
            rank,
            slots: vec![ZPoly::zero(rank); order + 1],
        }
    }

    pub fn from_slots(rank: usize, slots: Vec<ZPoly<S>>) -> Result<Self> {
        if slots.is_empty() {
            return Err(Error::Series("a series needs at least the q⁰ slot".into()));
        }
        if let Some(s) = slots.iter().find(|s| s.rank() != rank) {
            return Err(Error::RankMismatch {
                expected: rank,
                got: s.rank(),
            });
        }
        Ok(CohSeries { rank, slots })
    }

    /// A constant (q⁰, z⁰) series.
    pub fn constant(c: CohElement<S>, order: usize) -> Self {
        let mut s = Self::zero(c.rank(), order);
        s.slots[0] = ZPoly::monomial(c, 0);
        s
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> usize {
        self.slots.len() - 1
    }

    pub fn slot(&self, d: usize) -> &ZPoly<S> {
        &self.slots[d]
    }

    pub fn slots(&self) -> &[ZPoly<S>] {
        &self.slots
    }

    pub fn coeff(&self, d: usize, j: i64) -> CohElement<S> {
        self.slots[d].coeff(j)
    }

    fn same_rank(&self, o: &Self) -> Result<()> {
        if self.rank != o.rank {
            Err(Error::RankMismatch {
                expected: self.rank,
                got: o.rank,
            })
        } else {
            Ok(())
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.same_rank(o)?;
        let d = self.order().min(o.order());
        Ok(CohSeries {
            rank: self.rank,
            slots: (0..=d).map(|k| self.slots[k].add(&o.slots[k])).collect(),
        })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.scale(&-S::one()))
    }

    pub fn scale(&self, c: &S) -> Self {
        CohSeries {
            rank: self.rank,
            slots: self.slots.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// Cauchy product in q and z.
    pub fn mul(&self, alg: &AlgebraPresentation, o: &Self) -> Result<Self> {
        self.same_rank(o)?;
        if alg.rank() != self.rank {
            return Err(Error::RankMismatch {
                expected: alg.rank(),
                got: self.rank,
            });
        }
        let d = self.order().min(o.order());
        let mut slots = vec![ZPoly::zero(self.rank); d + 1];
        for i in 0..=d {
            if self.slots[i].is_zero() {
                continue;
            }
            for j in 0..=d - i {
                slots[i + j] = slots[i + j].add(&self.slots[i].mul(alg, &o.slots[j]));
            }
        }
        Ok(CohSeries {
            rank: self.rank,
            slots,
        })
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut slots: Vec<ZPoly<S>> = self.slots.iter().take(order + 1).cloned().collect();
        slots.resize(order + 1, ZPoly::zero(self.rank));
        CohSeries {
            rank: self.rank,
            slots,
        }
    }

    /// e^{c/z} for nilpotent `c`, as a q-constant series.
    pub fn exp_over_z(alg: &AlgebraPresentation, c: &CohElement<S>, order: usize) -> Result<Self> {
        if !alg.is_nilpotent(c) {
            return Err(Error::NotNilpotent);
        }
        let mut p = ZPoly::zero(alg.rank());
        let mut term = alg.one::<S>();
        for m in 0..=alg.dim() {
            p.add_term(-(m as i64), term.clone());
            term = alg.mul(&term, c).scale(&S::from_rational(&rat(1, m as i64 + 1)));
        }
        let mut s = Self::zero(alg.rank(), order);
        s.slots[0] = p;
        Ok(s)
    }

    /// Slots evaluated at z = 1.
    pub fn eval_z1(&self) -> Vec<CohElement<S>> {
        self.slots.iter().map(|p| p.eval_one()).collect()
    }

    /// The z^j coefficient of basis component `a`, as a q-series.
    pub fn component(&self, a: usize, j: i64) -> UniSeries<S> {
        UniSeries::new(self.slots.iter().map(|p| p.coeff(j).coeffs[a].clone()).collect())
    }
}

/// Matrix entry: Σ_j z^j f_j(q) with truncated q-series f_j.
#[derive(Clone, Debug, PartialEq)]
pub struct ZqSeries<S> {
    order: usize,
    terms: BTreeMap<i64, UniSeries<S>>,
}

impl<S: Scalar> ZqSeries<S> {
    pub fn zero(order: usize) -> Self {
        ZqSeries {
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(UniSeries::one(order), 0)
    }

    pub fn monomial(f: UniSeries<S>, j: i64) -> Self {
        let mut s = Self::zero(f.order());
        s.add_term(j, f);
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn terms(&self) -> &BTreeMap<i64, UniSeries<S>> {
        &self.terms
    }

    pub fn coeff(&self, j: i64) -> UniSeries<S> {
        self.terms
            .get(&j)
            .cloned()
            .unwrap_or_else(|| UniSeries::zero(self.order))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, j: i64, f: UniSeries<S>) {
        let f = f.truncate(self.order);
        let v = match self.terms.remove(&j) {
            Some(old) => old.add(&f),
            None => f,
        };
        if !v.is_zero() {
            self.terms.insert(j, v);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.truncate(self.order.min(o.order));
        for (j, f) in &o.terms {
            out.add_term(*j, f.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        ZqSeries {
            order: self.order,
            terms: self.terms.iter().map(|(j, f)| (*j, f.neg())).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.order.min(o.order));
        for (i, a) in &self.terms {
            for (j, b) in &o.terms {
                out.add_term(i + j, a.mul(b));
            }
        }
        out
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(self.order);
        for (j, f) in &self.terms {
            out.add_term(*j, f.scale(c));
        }
        out
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut out = Self::zero(order);
        for (j, f) in &self.terms {
            out.add_term(*j, f.truncate(order));
        }
        out
    }

    pub fn negate_z(&self) -> Self {
        ZqSeries {
            order: self.order,
            terms: self
                .terms
                .iter()
                .map(|(j, f)| (*j, if j % 2 == 0 { f.clone() } else { f.neg() }))
                .collect(),
        }
    }

    pub fn rescale_q(&self, lambda: &S) -> Self {
        ZqSeries {
            order: self.order,
            terms: self.terms.iter().map(|(j, f)| (*j, f.rescale(lambda))).collect(),
        }
    }

    /// Inverse of an entry that is a z⁰ unit series.
    pub fn inverse(&self) -> Result<Self> {
        if self.terms.len() != 1 || !self.terms.contains_key(&0) {
            return Err(Error::NotUnit("pivot is not a pure z⁰ series".into()));
        }
        Ok(Self::monomial(self.terms[&0].inverse()?, 0))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> ZqSeries<T> {
        ZqSeries {
            order: self.order,
            terms: self.terms.iter().map(|(j, s)| (*j, s.map(&f))).collect(),
        }
    }
}

pub type ZqMatrix<S> = Vec<Vec<ZqSeries<S>>>;

pub fn zq_mat_mul<S: Scalar>(a: &ZqMatrix<S>, b: &ZqMatrix<S>) -> ZqMatrix<S> {
    let n = a.len();
    let m = b[0].len();
    let order = a[0][0].order().min(b[0][0].order());
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    (0..b.len()).fold(ZqSeries::zero(order), |acc, k| {
                        if a[i][k].is_zero() || b[k][j].is_zero() {
                            acc
                        } else {
                            acc.add(&a[i][k].mul(&b[k][j]))
                        }
                    })
                })
                .collect()
        })
        .collect()
}

pub fn zq_transpose<S: Scalar>(a: &ZqMatrix<S>) -> ZqMatrix<S> {
    let n = a.len();
    let m = a[0].len();
    (0..m).map(|j| (0..n).map(|i| a[i][j].clone()).collect()).collect()
}

/// Constant matrix lifted to ZqSeries entries.
pub fn zq_constant<S: Scalar>(m: &[Vec<S>], order: usize) -> ZqMatrix<S> {
    m.iter()
        .map(|row| {
            row.iter()
                .map(|c| {
                    let mut e = ZqSeries::zero(order);
                    e.add_term(0, UniSeries::constant(c.clone(), order));
                    e
                })
                .collect()
        })
        .collect()
}

/// Inverse of a unit lower-triangular matrix by forward substitution.
pub fn zq_unit_lower_inverse<S: Scalar>(l: &ZqMatrix<S>) -> Result<ZqMatrix<S>> {
    let n = l.len();
    let order = l[0][0].order();
    for i in 0..n {
        if l[i][i] != ZqSeries::one(order) {
            return Err(Error::NotUnit(format!("diagonal entry {i} is not 1")));
        }
        if (i + 1..n).any(|j| !l[i][j].is_zero()) {
            return Err(Error::Consistency("matrix is not lower triangular".into()));
        }
    }
    let mut inv = vec![vec![ZqSeries::zero(order); n]; n];
    for j in 0..n {
        inv[j][j] = ZqSeries::one(order);
        for i in j + 1..n {
            let mut s = ZqSeries::zero(order);
            for k in j..i {
                if !l[i][k].is_zero() && !inv[k][j].is_zero() {
                    s = s.add(&l[i][k].mul(&inv[k][j]));
                }
            }
            inv[i][j] = s.neg();
        }
    }
    Ok(inv)
}

/// m! as a rational.
pub fn factorial_rational(m: usize) -> crate::Rational {
    (1..=m as i64).fold(crate::Rational::one(), |acc, k| acc * int(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn s(v: &[i64]) -> UniSeries<Rational> {
        UniSeries::new(v.iter().map(|&k| int(k)).collect())
    }

    #[test]
    fn product_truncates() {
        let a = s(&[1, 1, 0]);
        let b = s(&[1, -1, 0]);
        assert_eq!(a.mul(&b), s(&[1, 0, -1]));
        assert_eq!(a.mul(&s(&[1, 1])).order(), 1);
    }

    #[test]
    fn exp_log_basics() {
        assert_eq!(UniSeries::<Rational>::zero(5).exp().unwrap(), UniSeries::one(5));
        let l = s(&[1, 1, 0, 0, 0]).log().unwrap();
        let expect: Vec<Rational> = vec![int(0), int(1), rat(-1, 2), rat(1, 3), rat(-1, 4)];
        assert_eq!(l.coeffs(), &expect[..]);
        assert!(s(&[2, 1]).log().is_err());
        assert!(s(&[1, 1]).exp().is_err());
    }

    #[test]
    fn catalan_reversion() {
        let r = s(&[0, 1, 1, 0, 0, 0]).revert().unwrap();
        assert_eq!(r, s(&[0, 1, -1, 2, -5, 14]));
        assert_eq!(s(&[0, 1, 0, 0]).revert().unwrap(), s(&[0, 1, 0, 0]));
        assert!(s(&[1, 1]).revert().is_err());
        assert!(s(&[0, 0, 1]).revert().is_err());
    }

    #[test]
    fn reciprocal_of_quintic_period() {
        let d = 8;
        let g0 = UniSeries::new(
            (0..=d)
                .map(|k| factorial_rational(5 * k) / factorial_rational(k).pow(5))
                .collect(),
        );
        assert_eq!(g0.coeff(1), int(120));
        assert_eq!(g0.coeff(2), int(113400));
        let inv = g0.inverse().unwrap();
        assert_eq!(g0.mul(&inv), UniSeries::one(d));
    }

    #[test]
    fn exponential_twist_cancels() {
        let alg = AlgebraPresentation::projective_space(4).unwrap();
        let h = alg.basis::<Rational>(1).scale(&rat(7, 3));
        let e = CohSeries::exp_over_z(&alg, &h, 3).unwrap();
        let em = CohSeries::exp_over_z(&alg, &-h, 3).unwrap();
        let mut x = CohSeries::zero(5, 3);
        x.slots[1] = ZPoly::monomial(alg.basis(2), -1);
        x.slots[2] = ZPoly::monomial(alg.basis(0), 3);
        let y = x.mul(&alg, &e).unwrap().mul(&alg, &em).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn lower_inverse() {
        let o = 3;
        let mut l = vec![vec![ZqSeries::<Rational>::zero(o); 2]; 2];
        l[0][0] = ZqSeries::one(o);
        l[1][1] = ZqSeries::one(o);
        l[1][0] = ZqSeries::monomial(UniSeries::var(o), -1);
        let inv = zq_unit_lower_inverse(&l).unwrap();
        let p = zq_mat_mul(&l, &inv);
        assert_eq!(p[1][0], ZqSeries::zero(o));
        assert_eq!(p[0][0], ZqSeries::one(o));
    }
}
