//! Laurent polynomials in (q, x), matrices of rational functions with a shared
//! denominator, and fraction-free linear algebra over ℚ(q, x).

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, int, RatFn1, Rational, Scalar, UniPoly};

/// Σ c_{a,b} q^a x^b with integer exponents.
#[derive(Clone, Debug, PartialEq)]
pub struct QxPoly<S> {
    terms: BTreeMap<(i32, i32), S>,
}

impl<S: Scalar> QxPoly<S> {
    pub fn zero() -> Self {
        QxPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(S::one())
    }

    pub fn constant(c: S) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn monomial(c: S, qe: i32, xe: i32) -> Self {
        let mut p = Self::zero();
        p.add_term(qe, xe, c);
        p
    }

    pub fn q() -> Self {
        Self::monomial(S::one(), 1, 0)
    }

    pub fn x() -> Self {
        Self::monomial(S::one(), 0, 1)
    }

    pub fn terms(&self) -> &BTreeMap<(i32, i32), S> {
        &self.terms
    }

    pub fn coeff(&self, qe: i32, xe: i32) -> S {
        self.terms.get(&(qe, xe)).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, qe: i32, xe: i32, c: S) {
        let v = match self.terms.remove(&(qe, xe)) {
            Some(old) => old + c,
            None => c,
        };
        if !v.is_zero() {
            self.terms.insert((qe, xe), v);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for ((a, b), c) in &o.terms {
            out.add_term(*a, *b, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        QxPoly {
            terms: self.terms.iter().map(|(k, c)| (*k, -c.clone())).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for ((a, b), c) in &o.terms {
            out.add_term(*a, *b, -c.clone());
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for ((a, b), c) in &self.terms {
            for ((a2, b2), c2) in &o.terms {
                out.add_term(a + a2, b + b2, c.clone() * c2.clone());
            }
        }
        out
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = Self::zero();
        for ((a, b), c) in &self.terms {
            out.add_term(*a, *b, c.clone() * s.clone());
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| acc.mul(self))
    }

    pub fn shift(&self, qe: i32, xe: i32) -> Self {
        QxPoly {
            terms: self
                .terms
                .iter()
                .map(|((a, b), c)| ((a + qe, b + xe), c.clone()))
                .collect(),
        }
    }

    /// q·∂/∂q, the action of ∂_t on functions of q = e^t.
    pub fn theta_q(&self) -> Self {
        let mut out = Self::zero();
        for ((a, b), c) in &self.terms {
            out.add_term(*a, *b, c.clone() * S::from_i64(*a as i64));
        }
        out
    }

    pub fn d_x(&self) -> Self {
        let mut out = Self::zero();
        for ((a, b), c) in &self.terms {
            out.add_term(*a, b - 1, c.clone() * S::from_i64(*b as i64));
        }
        out
    }

    /// Terms with q-exponent 0.
    pub fn q_zero_part(&self) -> Self {
        QxPoly {
            terms: self
                .terms
                .iter()
                .filter(|((a, _), _)| *a == 0)
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
        }
    }

    pub fn min_exponents(&self) -> (i32, i32) {
        let qa = self.terms.keys().map(|k| k.0).min().unwrap_or(0);
        let xb = self.terms.keys().map(|k| k.1).min().unwrap_or(0);
        (qa, xb)
    }

    pub fn max_q_exponent(&self) -> i32 {
        self.terms.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn is_polynomial(&self) -> bool {
        let (a, b) = self.min_exponents();
        a >= 0 && b >= 0
    }

    /// Exact quotient in the Laurent ring, or `None` if `d` does not divide.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (sa, sb) = self.min_exponents();
        let (da, db) = d.min_exponents();
        let num = self.shift(-sa, -sb);
        let den = d.shift(-da, -db);
        let (&(la, lb), lc) = den.terms.iter().next_back()?;
        let lc_inv = lc.try_inv()?;
        let mut rem = num;
        let mut quo = Self::zero();
        while let Some((&(ra, rb), rc)) = rem.terms.iter().next_back() {
            if ra < la || rb < lb {
                return None;
            }
            let c = rc.clone() * lc_inv.clone();
            let t = Self::monomial(c, ra - la, rb - lb);
            rem = rem.sub(&t.mul(&den));
            quo = quo.add(&t);
        }
        Some(quo.shift(sa - da, sb - db))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> QxPoly<T> {
        let mut out = QxPoly::zero();
        for ((a, b), c) in &self.terms {
            out.add_term(*a, *b, f(c));
        }
        out
    }
}

impl QxPoly<Rational> {
    /// Substitutes numeric values for q and x (nonzero when exponents are negative).
    pub fn eval(&self, q: &Rational, x: &Rational) -> Rational {
        self.terms.iter().fold(Rational::zero(), |acc, ((a, b), c)| {
            acc + c * pow_i(q, *a) * pow_i(x, *b)
        })
    }

    /// The q⁰ part as a rational function of x.
    pub fn q_zero_ratfn(&self) -> RatFn1 {
        let p = self.q_zero_part();
        let (_, xb) = p.min_exponents();
        let shift = xb.min(0);
        let mut coeffs = Vec::new();
        for ((_, b), c) in &p.terms {
            let k = (b - shift) as usize;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, Rational::zero());
            }
            coeffs[k] = c.clone();
        }
        RatFn1::new(UniPoly::new(coeffs), UniPoly::one().shift((-shift) as usize))
    }
}

fn pow_i(v: &Rational, e: i32) -> Rational {
    if e >= 0 {
        v.pow(e)
    } else {
        v.recip().pow(-e)
    }
}

impl<S: Scalar> fmt::Display for QxPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((a, b), c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            match a {
                0 => {}
                1 => write!(f, "*q")?,
                _ => write!(f, "*q^{a}")?,
            }
            match b {
                0 => {}
                1 => write!(f, "*x")?,
                _ => write!(f, "*x^{b}")?,
            }
        }
        Ok(())
    }
}

pub fn format_qx(p: &QxPoly<Rational>) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let parts: Vec<String> = p
        .terms()
        .iter()
        .rev()
        .map(|((a, b), c)| {
            let mut s = format_rational(c);
            if *a != 0 {
                s += &if *a == 1 { "*q".to_string() } else { format!("*q^{a}") };
            }
            if *b != 0 {
                s += &if *b == 1 { "*x".to_string() } else { format!("*x^{b}") };
            }
            s
        })
        .collect();
    parts.join(" + ")
}

pub type PolyMatrix<S> = Vec<Vec<QxPoly<S>>>;

pub fn poly_mat_mul<S: Scalar>(a: &PolyMatrix<S>, b: &PolyMatrix<S>) -> PolyMatrix<S> {
    let n = a.len();
    let m = b[0].len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    (0..b.len()).fold(QxPoly::zero(), |acc, k| {
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

pub fn poly_transpose<S: Scalar>(a: &PolyMatrix<S>) -> PolyMatrix<S> {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len())
        .map(|j| a.iter().map(|row| row[j].clone()).collect())
        .collect()
}

/// Square matrix num/den with a single shared denominator.
#[derive(Clone, Debug, PartialEq)]
pub struct RatMat<S> {
    pub num: PolyMatrix<S>,
    pub den: QxPoly<S>,
}

impl<S: Scalar> RatMat<S> {
    pub fn new(num: PolyMatrix<S>, den: QxPoly<S>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Input("zero denominator".into()));
        }
        Ok(RatMat { num, den })
    }

    pub fn from_poly(num: PolyMatrix<S>) -> Self {
        RatMat {
            num,
            den: QxPoly::one(),
        }
    }

    pub fn identity(size: usize) -> Self {
        let num = (0..size)
            .map(|i| {
                (0..size)
                    .map(|j| if i == j { QxPoly::one() } else { QxPoly::zero() })
                    .collect()
            })
            .collect();
        Self::from_poly(num)
    }

    pub fn size(&self) -> usize {
        self.num.len()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().flatten().all(|p| p.is_zero())
    }

    fn map_num(&self, f: impl Fn(&QxPoly<S>) -> QxPoly<S>) -> PolyMatrix<S> {
        self.num
            .iter()
            .map(|row| row.iter().map(&f).collect())
            .collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            let num = self
                .num
                .iter()
                .zip(&o.num)
                .map(|(r1, r2)| r1.iter().zip(r2).map(|(a, b)| a.add(b)).collect())
                .collect();
            return RatMat {
                num,
                den: self.den.clone(),
            };
        }
        let num = self
            .num
            .iter()
            .zip(&o.num)
            .map(|(r1, r2)| {
                r1.iter()
                    .zip(r2)
                    .map(|(a, b)| a.mul(&o.den).add(&b.mul(&self.den)))
                    .collect()
            })
            .collect();
        RatMat {
            num,
            den: self.den.mul(&o.den),
        }
    }

    pub fn neg(&self) -> Self {
        RatMat {
            num: self.map_num(|p| p.neg()),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        RatMat {
            num: poly_mat_mul(&self.num, &o.num),
            den: self.den.mul(&o.den),
        }
    }

    pub fn scale(&self, p: &QxPoly<S>) -> Self {
        RatMat {
            num: self.map_num(|a| a.mul(p)),
            den: self.den.clone(),
        }
    }

    pub fn transpose(&self) -> Self {
        RatMat {
            num: poly_transpose(&self.num),
            den: self.den.clone(),
        }
    }

    /// Left multiplication by a constant matrix.
    pub fn left_mul_const(&self, m: &[Vec<S>]) -> Self {
        let c: PolyMatrix<S> = m
            .iter()
            .map(|r| r.iter().map(|x| QxPoly::constant(x.clone())).collect())
            .collect();
        RatMat {
            num: poly_mat_mul(&c, &self.num),
            den: self.den.clone(),
        }
    }

    fn derivative(&self, d: impl Fn(&QxPoly<S>) -> QxPoly<S>) -> Self {
        let dd = d(&self.den);
        RatMat {
            num: self.map_num(|a| d(a).mul(&self.den).sub(&a.mul(&dd))),
            den: self.den.mul(&self.den),
        }
    }

    /// ∂_t with q = e^t.
    pub fn d_t(&self) -> Self {
        if self.den.theta_q().is_zero() {
            return RatMat {
                num: self.map_num(|a| a.theta_q()),
                den: self.den.clone(),
            };
        }
        self.derivative(|p| p.theta_q())
    }

    pub fn d_x(&self) -> Self {
        if self.den.d_x().is_zero() {
            return RatMat {
                num: self.map_num(|a| a.d_x()),
                den: self.den.clone(),
            };
        }
        self.derivative(|p| p.d_x())
    }

    /// Cross-multiplied equality.
    pub fn equals(&self, o: &Self) -> bool {
        self.num.iter().zip(&o.num).all(|(r1, r2)| {
            r1.iter()
                .zip(r2)
                .all(|(a, b)| a.mul(&o.den) == b.mul(&self.den))
        })
    }

    /// Divides numerators and denominator by `f` when every entry is divisible.
    pub fn reduce_by(&self, f: &QxPoly<S>) -> Self {
        let Some(den) = self.den.exact_div(f) else {
            return self.clone();
        };
        let mut num = Vec::new();
        for row in &self.num {
            let mut r = Vec::new();
            for a in row {
                match a.exact_div(f) {
                    Some(v) => r.push(v),
                    None => return self.clone(),
                }
            }
            num.push(r);
        }
        RatMat { num, den }
    }

    pub fn column(&self, j: usize) -> Vec<QxPoly<S>> {
        self.num.iter().map(|r| r[j].clone()).collect()
    }
}

impl RatMat<Rational> {
    pub fn eval(&self, q: &Rational, x: &Rational) -> Result<Vec<Vec<Rational>>> {
        let d = self.den.eval(q, x);
        if d.is_zero() {
            return Err(Error::Input("denominator vanishes at the evaluation point".into()));
        }
        Ok(self
            .num
            .iter()
            .map(|r| r.iter().map(|a| a.eval(q, x) / d.clone()).collect())
            .collect())
    }
}

/// Outcome of fraction-free elimination.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rank: usize,
    /// Original indices of pivot rows, in elimination order.
    pub pivot_rows: Vec<usize>,
    pub pivot_cols: Vec<usize>,
    /// Last pivot (a maximal nonvanishing minor up to sign).
    pub last_pivot: QxPoly<Rational>,
    pub sign: i32,
}

/// Bareiss elimination over ℚ[q^±, x^±]; every division is exact.
pub fn bareiss(m: &PolyMatrix<Rational>) -> Result<Echelon> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut a = m.clone();
    let mut order: Vec<usize> = (0..rows).collect();
    let mut prev = QxPoly::<Rational>::one();
    let mut r = 0;
    let mut pivot_cols = Vec::new();
    let mut sign = 1;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // prefer the sparsest pivot to limit growth
        let Some(p) = (r..rows)
            .filter(|&i| !a[i][c].is_zero())
            .min_by_key(|&i| a[i][c].terms().len())
        else {
            continue;
        };
        if p != r {
            a.swap(p, r);
            order.swap(p, r);
            sign = -sign;
        }
        let piv = a[r][c].clone();
        for i in r + 1..rows {
            let aic = a[i][c].clone();
            for j in c + 1..cols {
                let t = piv.mul(&a[i][j]).sub(&aic.mul(&a[r][j]));
                a[i][j] = t.exact_div(&prev).ok_or_else(|| {
                    Error::Consistency("Bareiss step was not exact".into())
                })?;
            }
            a[i][c] = QxPoly::zero();
        }
        prev = piv;
        pivot_cols.push(c);
        r += 1;
    }
    Ok(Echelon {
        rank: r,
        pivot_rows: order[..r].to_vec(),
        pivot_cols,
        last_pivot: prev,
        sign,
    })
}

pub fn rank(m: &PolyMatrix<Rational>) -> Result<usize> {
    Ok(bareiss(m)?.rank)
}

pub fn det(m: &PolyMatrix<Rational>) -> Result<QxPoly<Rational>> {
    let n = m.len();
    if n == 0 {
        return Ok(QxPoly::one());
    }
    let e = bareiss(m)?;
    if e.rank < n {
        return Ok(QxPoly::zero());
    }
    Ok(e.last_pivot.scale(&int(e.sign as i64)))
}

/// Kernel basis of `m` (vectors v with m·v = 0) as polynomial vectors.
pub fn kernel(m: &PolyMatrix<Rational>) -> Result<Vec<Vec<QxPoly<Rational>>>> {
    let cols = if m.is_empty() { 0 } else { m[0].len() };
    let e = bareiss(m)?;
    let free: Vec<usize> = (0..cols).filter(|c| !e.pivot_cols.contains(c)).collect();
    let sub = |replace: Option<(usize, usize)>| -> PolyMatrix<Rational> {
        e.pivot_rows
            .iter()
            .map(|&i| {
                e.pivot_cols
                    .iter()
                    .enumerate()
                    .map(|(k, &c)| match replace {
                        Some((kk, f)) if kk == k => m[i][f].clone(),
                        _ => m[i][c].clone(),
                    })
                    .collect()
            })
            .collect()
    };
    let base_det = det(&sub(None))?;
    let mut out = Vec::new();
    for &f in &free {
        let mut v = vec![QxPoly::zero(); cols];
        v[f] = base_det.clone();
        for (k, &c) in e.pivot_cols.iter().enumerate() {
            v[c] = det(&sub(Some((k, f))))?.neg();
        }
        out.push(normalize_vector(v));
    }
    Ok(out)
}

/// Classical adjugate: adj(m)·m = m·adj(m) = det(m)·Id.
pub fn adjugate(m: &PolyMatrix<Rational>) -> Result<PolyMatrix<Rational>> {
    let n = m.len();
    let mut adj = vec![vec![QxPoly::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: PolyMatrix<Rational> = (0..n)
                .filter(|&r| r != j)
                .map(|r| (0..n).filter(|&c| c != i).map(|c| m[r][c].clone()).collect())
                .collect();
            let d = det(&minor)?;
            adj[i][j] = if (i + j) % 2 == 0 { d } else { d.neg() };
        }
    }
    Ok(adj)
}

/// Removes the common monomial factor and rational content.
pub fn normalize_vector(v: Vec<QxPoly<Rational>>) -> Vec<QxPoly<Rational>> {
    let nz: Vec<&QxPoly<Rational>> = v.iter().filter(|p| !p.is_zero()).collect();
    if nz.is_empty() {
        return v;
    }
    let qa = nz.iter().map(|p| p.min_exponents().0).min().unwrap_or(0);
    let xb = nz.iter().map(|p| p.min_exponents().1).min().unwrap_or(0);
    let lead = nz[0].terms().values().next_back().cloned().unwrap_or_else(Rational::one);
    let inv = lead.recip();
    v.into_iter().map(|p| p.shift(-qa, -xb).scale(&inv)).collect()
}

/// Matrix whose columns are the given vectors.
pub fn columns_to_matrix(vs: &[Vec<QxPoly<Rational>>]) -> PolyMatrix<Rational> {
    if vs.is_empty() {
        return Vec::new();
    }
    let r = vs[0].len();
    (0..r)
        .map(|i| vs.iter().map(|v| v[i].clone()).collect())
        .collect()
}

pub fn span_rank(vs: &[Vec<QxPoly<Rational>>]) -> Result<usize> {
    if vs.is_empty() {
        return Ok(0);
    }
    rank(&columns_to_matrix(vs))
}

pub fn in_span(vs: &[Vec<QxPoly<Rational>>], w: &[QxPoly<Rational>]) -> Result<bool> {
    let r0 = span_rank(vs)?;
    let mut all = vs.to_vec();
    all.push(w.to_vec());
    Ok(span_rank(&all)? == r0)
}

pub fn same_span(a: &[Vec<QxPoly<Rational>>], b: &[Vec<QxPoly<Rational>>]) -> Result<bool> {
    let ra = span_rank(a)?;
    let rb = span_rank(b)?;
    let mut all = a.to_vec();
    all.extend(b.iter().cloned());
    Ok(ra == rb && span_rank(&all)? == ra)
}

#[cfg(test)]
mod tests {
    use super::*;

    type P = QxPoly<Rational>;

    fn delta() -> P {
        P::q().scale(&int(3125)).sub(&P::x().pow(5))
    }

    #[test]
    fn exact_division() {
        let a = P::x().add(&P::q());
        let b = P::x().sub(&P::one());
        let prod = a.mul(&b).mul(&delta());
        assert_eq!(prod.exact_div(&delta()), Some(a.mul(&b)));
        assert_eq!(prod.exact_div(&a), Some(b.mul(&delta())));
        assert_eq!(P::x().add(&P::one()).exact_div(&P::x().sub(&P::one())), None);
        // q is a unit in the Laurent ring
        assert!(P::x().add(&P::one()).exact_div(&P::q()).is_some());
        let laurent = P::monomial(int(2), -1, 3).mul(&b);
        assert_eq!(laurent.exact_div(&b), Some(P::monomial(int(2), -1, 3)));
    }

    #[test]
    fn derivatives() {
        let p = P::monomial(int(3), 2, -1);
        assert_eq!(p.theta_q(), P::monomial(int(6), 2, -1));
        assert_eq!(p.d_x(), P::monomial(int(-3), 2, -2));
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let m = vec![
            vec![P::x(), P::q(), P::one()],
            vec![P::one(), P::x(), P::q()],
            vec![P::q(), P::one(), P::x()],
        ];
        // x^3 + q^3 + 1 − 3qx by direct expansion
        let expect = P::x()
            .pow(3)
            .add(&P::q().pow(3))
            .add(&P::one())
            .sub(&P::q().mul(&P::x()).scale(&int(3)));
        assert_eq!(det(&m).unwrap(), expect);
    }

    #[test]
    fn kernel_and_rank() {
        let m = vec![
            vec![P::x(), P::q(), P::x().add(&P::q())],
            vec![P::one(), P::x(), P::one().add(&P::x())],
        ];
        assert_eq!(rank(&m).unwrap(), 2);
        let k = kernel(&m).unwrap();
        assert_eq!(k.len(), 1);
        for row in &m {
            let s = row
                .iter()
                .zip(&k[0])
                .fold(P::zero(), |acc, (a, b)| acc.add(&a.mul(b)));
            assert!(s.is_zero());
        }
        assert!(in_span(&[vec![P::one(), P::x()]], &[P::q(), P::q().mul(&P::x())]).unwrap());
        assert!(!in_span(&[vec![P::one(), P::x()]], &[P::q(), P::one()]).unwrap());
    }

    #[test]
    fn ratmat_derivative_and_equality() {
        let m = RatMat::new(vec![vec![P::one()]], delta()).unwrap();
        let d = m.d_x();
        // ∂_x(1/δ) = 5x^4/δ²
        let expect = RatMat::new(
            vec![vec![P::monomial(int(5), 0, 4)]],
            delta().mul(&delta()),
        )
        .unwrap();
        assert!(d.equals(&expect));
        assert_eq!(d.reduce_by(&delta()), d);
        let r = RatMat::new(vec![vec![P::x().mul(&delta())]], delta().mul(&delta())).unwrap();
        assert_eq!(r.reduce_by(&delta()).den, delta());
    }

    #[test]
    fn q_zero_rational_function() {
        let p = P::monomial(int(4), 0, -2).add(&P::monomial(int(1), 1, 0));
        assert_eq!(p.q_zero_ratfn().as_monomial(), Some((int(4), -2)));
    }
}
