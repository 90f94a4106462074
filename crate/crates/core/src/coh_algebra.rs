//! Finite-dimensional graded commutative algebras with an integration functional.

use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, int, parse_rational, rat, Rational, Scalar};
use crate::series::UniSeries;

/// Basis, grading, structure constants and ∫ of a cohomology ring.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraPresentation {
    labels: Vec<String>,
    degrees: Vec<u32>,
    table: Vec<Vec<Vec<(usize, Rational)>>>,
    integration: Vec<Rational>,
    dim: usize,
}

/// Coefficients of an element in the graded basis.
#[derive(Clone, Debug, PartialEq)]
pub struct CohElement<S> {
    pub coeffs: Vec<S>,
}

impl AlgebraPresentation {
    /// Validates and builds a presentation. `table[a][b]` lists `(γ, c_{ab}^γ)`.
    pub fn new(
        labels: Vec<String>,
        degrees: Vec<u32>,
        table: Vec<Vec<Vec<(usize, Rational)>>>,
        integration: Vec<Rational>,
        dim: usize,
    ) -> Result<Self> {
        let r = labels.len();
        let bad = |m: String| Err(Error::InvalidAlgebra(m));
        if r == 0 {
            return bad("empty basis".into());
        }
        if degrees.len() != r || table.len() != r || integration.len() != r {
            return bad("length mismatch between labels, degrees, table, integration".into());
        }
        if degrees.iter().any(|d| d % 2 != 0 || *d as usize > 2 * dim) {
            return bad("degrees must be even and at most 2·dim".into());
        }
        for (a, row) in table.iter().enumerate() {
            if row.len() != r {
                return bad(format!("table row {a} has wrong length"));
            }
            for (b, entry) in row.iter().enumerate() {
                for (g, _) in entry {
                    if *g >= r {
                        return bad(format!("index {g} out of range"));
                    }
                    if degrees[*g] != degrees[a] + degrees[b] {
                        return bad(format!("product T{a}·T{b} violates the grading"));
                    }
                }
            }
        }
        let alg = AlgebraPresentation {
            labels,
            degrees,
            table,
            integration,
            dim,
        };
        alg.validate()?;
        Ok(alg)
    }

    fn validate(&self) -> Result<()> {
        let r = self.rank();
        let bad = |m: String| Err(Error::InvalidAlgebra(m));
        if self.degrees[0] != 0 {
            return bad("T0 must have degree 0".into());
        }
        for a in 0..r {
            let e = self.basis::<Rational>(a);
            if self.mul(&self.basis(0), &e) != e {
                return bad(format!("T0 is not a unit on T{a}"));
            }
        }
        for a in 0..r {
            for b in 0..r {
                let ab = self.mul(&self.basis::<Rational>(a), &self.basis(b));
                if ab != self.mul(&self.basis(b), &self.basis(a)) {
                    return bad(format!("T{a}·T{b} is not commutative"));
                }
                for c in 0..r {
                    let l = self.mul(&ab, &self.basis(c));
                    let rr = self.mul(
                        &self.basis(a),
                        &self.mul(&self.basis::<Rational>(b), &self.basis(c)),
                    );
                    if l != rr {
                        return bad(format!("(T{a}T{b})T{c} is not associative"));
                    }
                }
            }
        }
        if det_rational(self.pairing_matrix()).is_zero() {
            return bad("Poincaré pairing is degenerate".into());
        }
        Ok(())
    }

    /// H*(Pⁿ) with basis 1, H, …, Hⁿ.
    pub fn projective_space(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidAlgebra(
                "n = 0 gives a degenerate ring".into(),
            ));
        }
        let r = n + 1;
        let labels = (0..r)
            .map(|k| match k {
                0 => "1".to_string(),
                1 => "H".to_string(),
                _ => format!("H^{k}"),
            })
            .collect();
        let degrees = (0..r as u32).map(|k| 2 * k).collect();
        let table = (0..r)
            .map(|a| {
                (0..r)
                    .map(|b| {
                        if a + b <= n {
                            vec![(a + b, Rational::one())]
                        } else {
                            vec![]
                        }
                    })
                    .collect()
            })
            .collect();
        let mut integration = vec![Rational::zero(); r];
        integration[n] = Rational::one();
        Self::new(labels, degrees, table, integration, n)
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Real degrees.
    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    /// Complex degree |α|.
    pub fn half_degree(&self, a: usize) -> usize {
        (self.degrees[a] / 2) as usize
    }

    pub fn structure(&self, a: usize, b: usize) -> &[(usize, Rational)] {
        &self.table[a][b]
    }

    pub fn integration(&self) -> &[Rational] {
        &self.integration
    }

    pub fn zero<S: Scalar>(&self) -> CohElement<S> {
        CohElement::zero(self.rank())
    }

    pub fn one<S: Scalar>(&self) -> CohElement<S> {
        self.basis(0)
    }

    pub fn basis<S: Scalar>(&self, a: usize) -> CohElement<S> {
        let mut e = CohElement::zero(self.rank());
        e.coeffs[a] = S::one();
        e
    }

    pub fn scalar<S: Scalar>(&self, c: S) -> CohElement<S> {
        let mut e = CohElement::zero(self.rank());
        e.coeffs[0] = c;
        e
    }

    fn check<S>(&self, a: &CohElement<S>) -> Result<()> {
        if a.coeffs.len() != self.rank() {
            Err(Error::RankMismatch {
                expected: self.rank(),
                got: a.coeffs.len(),
            })
        } else {
            Ok(())
        }
    }

    pub fn try_mul<S: Scalar>(&self, a: &CohElement<S>, b: &CohElement<S>) -> Result<CohElement<S>> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul(a, b))
    }

    /// Product; panics on rank mismatch (use [`Self::try_mul`] for checked input).
    pub fn mul<S: Scalar>(&self, a: &CohElement<S>, b: &CohElement<S>) -> CohElement<S> {
        assert_eq!(a.coeffs.len(), self.rank(), "rank mismatch");
        assert_eq!(b.coeffs.len(), self.rank(), "rank mismatch");
        let mut out: CohElement<S> = CohElement::zero(self.rank());
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x.clone() * y.clone();
                for (g, c) in &self.table[i][j] {
                    out.coeffs[*g] = out.coeffs[*g].clone() + xy.clone() * S::from_rational(c);
                }
            }
        }
        out
    }

    pub fn pow<S: Scalar>(&self, a: &CohElement<S>, k: usize) -> CohElement<S> {
        (0..k).fold(self.one(), |acc, _| self.mul(&acc, a))
    }

    pub fn integrate<S: Scalar>(&self, a: &CohElement<S>) -> S {
        a.coeffs
            .iter()
            .zip(&self.integration)
            .filter(|(_, w)| !w.is_zero())
            .fold(S::zero(), |acc, (c, w)| acc + c.clone() * S::from_rational(w))
    }

    pub fn try_integrate<S: Scalar>(&self, a: &CohElement<S>) -> Result<S> {
        self.check(a)?;
        Ok(self.integrate(a))
    }

    /// Grading operator μ(T_α) = (|α| − n/2)T_α.
    pub fn mu<S: Scalar>(&self, a: &CohElement<S>) -> CohElement<S> {
        CohElement {
            coeffs: a
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c.clone() * S::from_rational(&self.mu_eigenvalue(k)))
                .collect(),
        }
    }

    pub fn mu_eigenvalue(&self, a: usize) -> Rational {
        int(self.half_degree(a) as i64) - rat(self.dim as i64, 2)
    }

    /// Applies T_α ↦ λ^{|α|}T_α, a ring automorphism.
    pub fn rescale<S: Scalar>(&self, a: &CohElement<S>, lambda: &S) -> CohElement<S> {
        CohElement {
            coeffs: a
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| {
                    (0..self.half_degree(k)).fold(c.clone(), |acc, _| acc * lambda.clone())
                })
                .collect(),
        }
    }

    /// (−1)^{deg/2}.
    pub fn grading_sign<S: Scalar>(&self, a: &CohElement<S>) -> CohElement<S> {
        self.rescale(a, &-S::one())
    }

    pub fn is_nilpotent<S: Scalar>(&self, a: &CohElement<S>) -> bool {
        a.coeffs
            .iter()
            .enumerate()
            .all(|(k, c)| self.degrees[k] > 0 || c.is_zero())
    }

    /// Σ_{m ≤ dim} a^m/m! for nilpotent `a`.
    pub fn exp<S: Scalar>(&self, a: &CohElement<S>) -> Result<CohElement<S>> {
        self.check(a)?;
        if !self.is_nilpotent(a) {
            return Err(Error::NotNilpotent);
        }
        let mut term = self.one::<S>();
        let mut sum = term.clone();
        for m in 1..=self.dim {
            term = self.mul(&term, a).scale(&S::from_rational(&rat(1, m as i64)));
            sum = sum + term.clone();
        }
        Ok(sum)
    }

    /// Inverse of `c + u` with `c` a unit scalar and `u` nilpotent.
    pub fn inverse<S: Scalar>(&self, a: &CohElement<S>) -> Result<CohElement<S>> {
        self.check(a)?;
        let c = a.coeffs[0].clone();
        let ci = c
            .try_inv()
            .ok_or_else(|| Error::NotUnit(format!("degree-0 part {c}")))?;
        let mut u = a.scale(&ci);
        u.coeffs[0] = u.coeffs[0].clone() - S::one();
        if !self.is_nilpotent(&u) {
            return Err(Error::NotUnit("degree-0 part is not a pure scalar".into()));
        }
        let neg_u = -u;
        let mut term = self.one::<S>();
        let mut sum = term.clone();
        for _ in 0..self.dim {
            term = self.mul(&term, &neg_u);
            sum = sum + term.clone();
        }
        Ok(sum.scale(&ci))
    }

    /// Matrix (∫T_αT_β).
    pub fn pairing_matrix(&self) -> Vec<Vec<Rational>> {
        let r = self.rank();
        (0..r)
            .map(|a| {
                (0..r)
                    .map(|b| self.integrate(&self.mul(&self.basis::<Rational>(a), &self.basis(b))))
                    .collect()
            })
            .collect()
    }

    /// Matrix of multiplication by `a` (column β holds a·T_β).
    pub fn mult_matrix<S: Scalar>(&self, a: &CohElement<S>) -> Vec<Vec<S>> {
        let r = self.rank();
        let cols: Vec<CohElement<S>> = (0..r).map(|b| self.mul(a, &self.basis(b))).collect();
        (0..r)
            .map(|i| (0..r).map(|j| cols[j].coeffs[i].clone()).collect())
            .collect()
    }

    /// Applies a scalar power series Σ f_k a^k to a nilpotent element.
    pub fn apply_series<S: Scalar>(&self, f: &UniSeries<S>, a: &CohElement<S>) -> Result<CohElement<S>> {
        if !self.is_nilpotent(a) {
            return Err(Error::NotNilpotent);
        }
        let mut term = self.one::<S>();
        let mut sum = self.zero::<S>();
        for k in 0..=self.dim.min(f.order()) {
            sum = sum + term.scale(&f.coeff(k));
            term = self.mul(&term, a);
        }
        Ok(sum)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: AlgebraJson =
            serde_json::from_str(text).map_err(|e| Error::Input(e.to_string()))?;
        raw.into_algebra()
    }

    pub fn to_json(&self) -> String {
        let r = self.rank();
        let mut structure = Vec::with_capacity(r * r);
        for a in 0..r {
            for b in 0..r {
                structure.push(
                    self.table[a][b]
                        .iter()
                        .map(|(g, c)| (*g, format_rational(c)))
                        .collect(),
                );
            }
        }
        let raw = AlgebraJson {
            labels: self.labels.clone(),
            degrees: self.degrees.clone(),
            structure,
            integration: self.integration.iter().map(format_rational).collect(),
            dim: self.dim,
        };
        serde_json::to_string(&raw).expect("serializable")
    }

    pub fn format_element(&self, a: &CohElement<Rational>) -> String {
        let parts: Vec<String> = a
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                if k == 0 {
                    format_rational(c)
                } else {
                    format!("{}*{}", format_rational(c), self.labels[k])
                }
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

#[derive(Serialize, Deserialize)]
struct AlgebraJson {
    labels: Vec<String>,
    degrees: Vec<u32>,
    /// Flattened by the pair index a·rank + b.
    #[serde(rename = "struct")]
    structure: Vec<Vec<(usize, String)>>,
    integration: Vec<String>,
    dim: usize,
}

impl AlgebraJson {
    fn into_algebra(self) -> Result<AlgebraPresentation> {
        let r = self.labels.len();
        if self.structure.len() != r * r {
            return Err(Error::Input(format!(
                "struct must have {} entries, found {}",
                r * r,
                self.structure.len()
            )));
        }
        let parse = |s: &str| {
            parse_rational(s).ok_or_else(|| Error::Input(format!("bad rational {s:?}")))
        };
        let mut table = vec![vec![Vec::new(); r]; r];
        for (idx, entry) in self.structure.iter().enumerate() {
            let mut v = Vec::new();
            for (g, c) in entry {
                let c = parse(c)?;
                if !c.is_zero() {
                    v.push((*g, c));
                }
            }
            table[idx / r][idx % r] = v;
        }
        let integration = self
            .integration
            .iter()
            .map(|s| parse(s))
            .collect::<Result<Vec<_>>>()?;
        AlgebraPresentation::new(self.labels, self.degrees, table, integration, self.dim)
    }
}

fn det_rational(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        let piv = m[c][c].clone();
        det *= piv.clone();
        for r in c + 1..n {
            let f = &m[r][c] / &piv;
            if f.is_zero() {
                continue;
            }
            for k in c..n {
                let t = &f * &m[c][k];
                m[r][k] -= t;
            }
        }
    }
    det
}

impl<S: Scalar> CohElement<S> {
    pub fn zero(rank: usize) -> Self {
        CohElement {
            coeffs: vec![S::zero(); rank],
        }
    }

    pub fn new(coeffs: Vec<S>) -> Self {
        CohElement { coeffs }
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, c: &S) -> Self {
        CohElement {
            coeffs: self.coeffs.iter().map(|x| x.clone() * c.clone()).collect(),
        }
    }

    pub fn map<T>(&self, f: impl Fn(&S) -> T) -> CohElement<T> {
        CohElement {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }
}

impl CohElement<Rational> {
    pub fn from_ints(v: &[i64]) -> Self {
        CohElement {
            coeffs: v.iter().map(|&k| int(k)).collect(),
        }
    }

    pub fn lift<S: Scalar>(&self) -> CohElement<S> {
        self.map(S::from_rational)
    }
}

impl<S: Scalar> Add for CohElement<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        assert_eq!(self.coeffs.len(), rhs.coeffs.len(), "rank mismatch");
        CohElement {
            coeffs: self
                .coeffs
                .into_iter()
                .zip(rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl<S: Scalar> Sub for CohElement<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<S: Scalar> Neg for CohElement<S> {
    type Output = Self;
    fn neg(self) -> Self {
        CohElement {
            coeffs: self.coeffs.into_iter().map(|a| -a).collect(),
        }
    }
}

/// Exact characteristic-class data of Pⁿ as elements of H*(Pⁿ).
#[derive(Clone, Debug, PartialEq)]
pub struct ChernData {
    pub c_total: CohElement<Rational>,
    pub c1: CohElement<Rational>,
    pub todd: CohElement<Rational>,
}

pub fn chern_data(n: usize) -> Result<ChernData> {
    let alg = AlgebraPresentation::projective_space(n)?;
    let h = alg.basis::<Rational>(1);
    let one_plus_h = alg.one::<Rational>() + h.clone();
    let c_total = alg.pow(&one_plus_h, n + 1);
    let c1 = h.scale(&int(n as i64 + 1));
    // x/(1 − e^{−x}) as a power series, then raised to the (n+1)-th power
    let td1 = todd_series(n);
    let todd_line = alg.apply_series(&td1, &h)?;
    let todd = alg.pow(&todd_line, n + 1);
    Ok(ChernData { c_total, c1, todd })
}

/// Power series of x/(1 − e^{−x}) to order `order`.
pub fn todd_series(order: usize) -> UniSeries<Rational> {
    // (1 − e^{−x})/x = Σ (−1)^k x^k/(k+1)!
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut fact = Rational::one();
    for k in 0..=order {
        fact *= int(k as i64 + 1);
        let sign = if k % 2 == 0 { int(1) } else { int(-1) };
        coeffs.push(sign / fact.clone());
    }
    UniSeries::new(coeffs)
        .inverse()
        .expect("constant term is 1")
}

/// ch(O(k)) = e^{kH}.
pub fn ch_line(alg: &AlgebraPresentation, k: i64) -> CohElement<Rational> {
    let kh = alg.basis::<Rational>(1).scale(&int(k));
    alg.exp(&kh).expect("kH is nilpotent")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p4() -> AlgebraPresentation {
        AlgebraPresentation::projective_space(4).unwrap()
    }

    #[test]
    fn projective_space_shape() {
        let a = p4();
        assert_eq!(a.rank(), 5);
        assert_eq!(a.degrees(), &[0, 2, 4, 6, 8]);
        assert_eq!(a.integrate(&a.basis::<Rational>(4)), int(1));
        assert_eq!(a.integrate(&a.one::<Rational>()), int(0));
        let p1 = AlgebraPresentation::projective_space(1).unwrap();
        let h = p1.basis::<Rational>(1);
        assert!(p1.mul(&h, &h).is_zero());
        assert!(AlgebraPresentation::projective_space(0).is_err());
    }

    #[test]
    fn structure_constants_match_dense_polynomial_multiplication() {
        let a = p4();
        for i in 0..5 {
            for j in 0..5 {
                // dense product of x^i and x^j, then truncation mod x^5
                let mut dense = vec![0i64; 9];
                dense[i + j] += 1;
                dense.truncate(5);
                let got = a.mul(&a.basis::<Rational>(i), &a.basis(j));
                assert_eq!(got, CohElement::from_ints(&dense));
            }
        }
    }

    #[test]
    fn mu_on_p4() {
        let a = p4();
        let eig: Vec<Rational> = (0..5).map(|k| a.mu_eigenvalue(k)).collect();
        assert_eq!(eig, vec![int(-2), int(-1), int(0), int(1), int(2)]);
        let x = CohElement::from_ints(&[1, 1, 1, 1, 1]);
        assert_eq!(a.mu(&x), CohElement::from_ints(&[-2, -1, 0, 1, 2]));
    }

    #[test]
    fn pairing_is_antidiagonal() {
        let a = p4();
        let p = a.pairing_matrix();
        for i in 0..5 {
            for j in 0..5 {
                let expect = if i + j == 4 { int(1) } else { int(0) };
                assert_eq!(p[i][j], expect);
            }
        }
    }

    #[test]
    fn mu_is_skew_adjoint() {
        let a = p4();
        for i in 0..5 {
            for j in 0..5 {
                let ti = a.basis::<Rational>(i);
                let tj = a.basis::<Rational>(j);
                let s = a.integrate(&a.mul(&a.mu(&ti), &tj)) + a.integrate(&a.mul(&ti, &a.mu(&tj)));
                assert!(s.is_zero());
            }
        }
    }

    #[test]
    fn exp_and_inverse() {
        let a = p4();
        let h = a.basis::<Rational>(1);
        let e = a.exp(&h).unwrap();
        let em = a.exp(&-h.clone()).unwrap();
        assert_eq!(a.mul(&e, &em), a.one());
        assert_eq!(a.exp(&a.one::<Rational>()), Err(Error::NotNilpotent));
        let u = a.one::<Rational>().scale(&int(3)) + h;
        let ui = a.inverse(&u).unwrap();
        assert_eq!(a.mul(&u, &ui), a.one());
    }

    #[test]
    fn rank_mismatch_is_reported() {
        let a = p4();
        let short = CohElement::from_ints(&[1, 2]);
        assert!(matches!(
            a.try_mul(&short, &a.one()),
            Err(Error::RankMismatch { .. })
        ));
    }

    #[test]
    fn chern_classes() {
        let d1 = chern_data(1).unwrap();
        assert_eq!(d1.todd, CohElement::from_ints(&[1, 1]));
        let d4 = chern_data(4).unwrap();
        assert_eq!(d4.c1, CohElement::from_ints(&[0, 5, 0, 0, 0]));
        assert_eq!(d4.c_total, CohElement::from_ints(&[1, 5, 10, 10, 5]));
        let a = p4();
        let chi = a.integrate(&a.mul(&ch_line(&a, 1), &d4.todd));
        assert_eq!(chi, int(5));
    }

    #[test]
    fn rejects_non_commutative_presentation() {
        let one = Rational::one();
        let labels = vec!["1".into(), "a".into()];
        let mut table = vec![vec![vec![]; 2]; 2];
        table[0][0] = vec![(0, one.clone())];
        table[0][1] = vec![(1, one.clone())];
        table[1][0] = vec![(1, int(2))];
        let bad = AlgebraPresentation::new(labels, vec![0, 2], table, vec![int(0), int(1)], 1);
        assert!(bad.is_err());
    }

    #[test]
    fn json_round_trip() {
        let a = p4();
        let b = AlgebraPresentation::from_json(&a.to_json()).unwrap();
        assert_eq!(a, b);
        assert!(AlgebraPresentation::from_json("{\"labels\":[]}").is_err());
    }
}
