//! Twisted sections in (q, x), the truncated Laplace transform and the
//! solutions Ǩ^(σ,ℓ) of the second structure connection.
//!
//! A [`TwistedSection`] stands for e^{t·c}·Σ a·q^d·x^{−e}·(log x)^m with a
//! nilpotent class c, truncated at q-degree W. Since q = e^t, the weight
//! w = q·x^{−(n+1)} of every term is governed by d alone.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::coh_algebra::{AlgebraPresentation, CohElement};
use crate::error::{Error, Result};
use crate::givental::DescendantData;
use crate::ratfn::QxPoly;
use crate::report::Report;
use crate::scalar::{format_rational, int, rat, Rational, Scalar};
use crate::second_structure::SscConnection;

type Key = (u32, Rational, u32);

#[derive(Clone, Debug, PartialEq)]
pub struct TwistedSection<S> {
    rank: usize,
    t_class: CohElement<S>,
    terms: BTreeMap<Key, CohElement<S>>,
    order: u32,
}

impl<S: Scalar> TwistedSection<S> {
    pub fn zero(rank: usize, t_class: CohElement<S>, order: u32) -> Self {
        TwistedSection {
            rank,
            t_class,
            terms: BTreeMap::new(),
            order,
        }
    }

    /// The constant section `c` (no exponential prefactor).
    pub fn constant(c: CohElement<S>, order: u32) -> Self {
        let rank = c.rank();
        let mut s = Self::zero(rank, CohElement::zero(rank), order);
        s.add_term(0, Rational::zero(), 0, c);
        s
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn t_class(&self) -> &CohElement<S> {
        &self.t_class
    }

    pub fn terms(&self) -> &BTreeMap<Key, CohElement<S>> {
        &self.terms
    }

    pub fn coeff(&self, d: u32, e: &Rational, m: u32) -> CohElement<S> {
        self.terms
            .get(&(d, e.clone(), m))
            .cloned()
            .unwrap_or_else(|| CohElement::zero(self.rank))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds c·q^d·x^{−e}·(log x)^m; terms beyond the truncation are dropped.
    pub fn add_term(&mut self, d: u32, e: Rational, m: u32, c: CohElement<S>) {
        if d > self.order {
            return;
        }
        let key = (d, e, m);
        let v = match self.terms.remove(&key) {
            Some(old) => old + c,
            None => c,
        };
        if !v.is_zero() {
            self.terms.insert(key, v);
        }
    }

    /// Adds c·q^d·x^{−γ−e}, expanding x^{−γ} = Σ (−γ log x)^m/m! for nilpotent γ.
    pub fn add_twisted_term(
        &mut self,
        alg: &AlgebraPresentation,
        d: u32,
        e: Rational,
        gamma: &CohElement<S>,
        c: CohElement<S>,
    ) {
        let neg_gamma = -gamma.clone();
        let mut term = c;
        for m in 0..=alg.dim() as u32 {
            if term.is_zero() {
                break;
            }
            self.add_term(d, e.clone(), m, term.clone());
            term = alg
                .mul(&term, &neg_gamma)
                .scale(&S::from_rational(&rat(1, m as i64 + 1)));
        }
    }

    fn compatible(&self, o: &Self) -> Result<()> {
        if self.rank != o.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                got: o.rank,
            });
        }
        if self.t_class != o.t_class {
            return Err(Error::Consistency("sections carry different exponential prefactors".into()));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.compatible(o)?;
        let mut out = self.clone();
        out.order = self.order.min(o.order);
        out.terms.retain(|k, _| k.0 <= out.order);
        for ((d, e, m), c) in &o.terms {
            out.add_term(*d, e.clone(), *m, c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = Self::zero(self.rank, self.t_class.clone(), self.order);
        for ((d, e, m), c) in &self.terms {
            out.add_term(*d, e.clone(), *m, c.scale(s));
        }
        out
    }

    /// Cup product with a constant class.
    pub fn mul_elem(&self, alg: &AlgebraPresentation, c: &CohElement<S>) -> Self {
        let mut out = Self::zero(self.rank, self.t_class.clone(), self.order);
        for ((d, e, m), a) in &self.terms {
            out.add_term(*d, e.clone(), *m, alg.mul(c, a));
        }
        out
    }

    /// Multiplication by a Laurent polynomial in x with nonnegative q-powers.
    pub fn mul_qx(&self, p: &QxPoly<S>) -> Result<Self> {
        let mut out = Self::zero(self.rank, self.t_class.clone(), self.order);
        for ((a, b), s) in p.terms() {
            if *a < 0 {
                return Err(Error::Input(
                    "q^{-1} coefficients would lose terms of a truncated section".into(),
                ));
            }
            for ((d, e, m), c) in &self.terms {
                out.add_term(d + *a as u32, e - int(*b as i64), *m, c.scale(s));
            }
        }
        Ok(out)
    }

    /// ∂_t, acting on e^{t·c}q^d by c + d.
    pub fn d_t(&self, alg: &AlgebraPresentation) -> Self {
        let mut out = Self::zero(self.rank, self.t_class.clone(), self.order);
        for ((d, e, m), c) in &self.terms {
            let v = alg.mul(&self.t_class, c) + c.scale(&S::from_i64(*d as i64));
            out.add_term(*d, e.clone(), *m, v);
        }
        out
    }

    /// ∂_x(x^{−e}(log x)^m) = −e·x^{−e−1}(log x)^m + m·x^{−e−1}(log x)^{m−1}.
    pub fn d_x(&self) -> Self {
        let mut out = Self::zero(self.rank, self.t_class.clone(), self.order);
        for ((d, e, m), c) in &self.terms {
            let e1 = e + Rational::one();
            if !e.is_zero() {
                out.add_term(*d, e1.clone(), *m, c.scale(&S::from_rational(&-e.clone())));
            }
            if *m > 0 {
                out.add_term(*d, e1, m - 1, c.scale(&S::from_i64(*m as i64)));
            }
        }
        out
    }

    /// (−1)^{deg/2}, applied to coefficients and to the exponential prefactor.
    pub fn grading_sign(&self, alg: &AlgebraPresentation) -> Self {
        let mut out = Self::zero(self.rank, alg.grading_sign(&self.t_class), self.order);
        for ((d, e, m), c) in &self.terms {
            out.add_term(*d, e.clone(), *m, alg.grading_sign(c));
        }
        out
    }

    /// Product of two sections (prefactors multiply).
    pub fn mul_section(&self, alg: &AlgebraPresentation, o: &Self) -> Self {
        let order = self.order.min(o.order);
        let t_class = self.t_class.clone() + o.t_class.clone();
        let mut out = Self::zero(self.rank, t_class, order);
        for ((d1, e1, m1), c1) in &self.terms {
            for ((d2, e2, m2), c2) in &o.terms {
                if d1 + d2 <= order {
                    out.add_term(d1 + d2, e1 + e2, m1 + m2, alg.mul(c1, c2));
                }
            }
        }
        out
    }

    /// Integrates every coefficient; the prefactor must be trivial.
    pub fn integrate(&self, alg: &AlgebraPresentation) -> Result<BTreeMap<Key, S>> {
        if !self.t_class.is_zero() {
            return Err(Error::Consistency("cannot integrate through e^{tc} with c ≠ 0".into()));
        }
        let mut out = BTreeMap::new();
        for (k, c) in &self.terms {
            let v = alg.integrate(c);
            if !v.is_zero() {
                out.insert(k.clone(), v);
            }
        }
        Ok(out)
    }

    pub fn truncate(&self, order: u32) -> Self {
        let mut out = self.clone();
        out.order = order.min(self.order);
        out.terms.retain(|k, _| k.0 <= out.order);
        out
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> TwistedSection<T> {
        TwistedSection {
            rank: self.rank,
            t_class: self.t_class.map(f),
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c.map(f))).collect(),
            order: self.order,
        }
    }

    /// Human-readable description of the first nonzero term.
    pub fn leading_term(&self) -> Option<String> {
        self.terms
            .iter()
            .next()
            .map(|((d, e, m), c)| format!("q^{d} x^-({}) log^{m}: {:?}", format_rational(e), c.coeffs))
    }
}

/// Σ q^d·a_{d,k}·z^{−γ−k} with prefactor e^{t·c} and nilpotent γ.
#[derive(Clone, Debug, PartialEq)]
pub struct ZSection<S> {
    pub rank: usize,
    pub t_class: CohElement<S>,
    pub gamma: CohElement<S>,
    pub terms: BTreeMap<(u32, Rational), CohElement<S>>,
    pub order: u32,
}

impl<S: Scalar> ZSection<S> {
    pub fn new(t_class: CohElement<S>, gamma: CohElement<S>, order: u32) -> Self {
        ZSection {
            rank: gamma.rank(),
            t_class,
            gamma,
            terms: BTreeMap::new(),
            order,
        }
    }

    pub fn add_term(&mut self, d: u32, k: Rational, c: CohElement<S>) {
        if d > self.order {
            return;
        }
        let key = (d, k);
        let v = match self.terms.remove(&key) {
            Some(old) => old + c,
            None => c,
        };
        if !v.is_zero() {
            self.terms.insert(key, v);
        }
    }

    pub fn min_k(&self) -> Option<Rational> {
        self.terms.keys().map(|(_, k)| k.clone()).min()
    }

    /// z⁻¹·K.
    pub fn mul_inv_z(&self) -> Self {
        let mut out = Self::new(self.t_class.clone(), self.gamma.clone(), self.order);
        for ((d, k), c) in &self.terms {
            out.add_term(*d, k + Rational::one(), c.clone());
        }
        out
    }

    /// ∂_{z⁻¹}K = Σ a_k(γ+k) z^{−γ−k+1}.
    pub fn d_inv_z(&self, alg: &AlgebraPresentation) -> Self {
        let mut out = Self::new(self.t_class.clone(), self.gamma.clone(), self.order);
        for ((d, k), c) in &self.terms {
            let f = self.gamma.clone() + alg.scalar(S::from_rational(k));
            out.add_term(*d, k - Rational::one(), alg.mul(&f, c));
        }
        out
    }
}

fn is_integer(r: &Rational) -> bool {
    r.is_integer()
}

/// Checks the admissibility of ℓ for exponents starting at k₀.
pub fn laplace_admissible(k0: &Rational, ell: &Rational) -> Result<()> {
    let diff = ell - k0;
    if !is_integer(&diff) {
        return Err(Error::Inadmissible(format!(
            "l - k0 = {} is not an integer",
            format_rational(&diff)
        )));
    }
    if *k0 <= ell - int(2) && k0 < &Rational::zero() && &Rational::zero() < ell && is_integer(k0) {
        // 0 lies in {k0+1, …, l−1}
        return Err(Error::Inadmissible(format!(
            "0 lies in {{k0+1, ..., l-1}} for k0 = {}, l = {}",
            format_rational(k0),
            format_rational(ell)
        )));
    }
    Ok(())
}

/// Γ(γ+k+1)/Γ(γ+ℓ) by the three-case rule.
fn laplace_ratio<S: Scalar>(
    alg: &AlgebraPresentation,
    gamma: &CohElement<S>,
    k: &Rational,
    ell: &Rational,
) -> Result<CohElement<S>> {
    let shifted = |j: &Rational| gamma.clone() + alg.scalar(S::from_rational(j));
    let steps = k - ell;
    if steps >= Rational::zero() {
        let mut acc = alg.one::<S>();
        let mut j = ell.clone();
        while &j <= k {
            acc = alg.mul(&acc, &shifted(&j));
            j += Rational::one();
        }
        Ok(acc)
    } else if steps == -Rational::one() {
        Ok(alg.one())
    } else {
        let mut acc = alg.one::<S>();
        let mut j = k + Rational::one();
        while &j <= &(ell - Rational::one()) {
            acc = alg.mul(&acc, &shifted(&j));
            j += Rational::one();
        }
        alg.inverse(&acc)
    }
}

/// Lap^(ℓ)(Σ a_k z^{−γ−k}) = Σ a_k x^{−γ−k−1}·Γ(γ+k+1)/Γ(γ+ℓ).
pub fn truncated_laplace<S: Scalar>(
    alg: &AlgebraPresentation,
    k: &ZSection<S>,
    ell: &Rational,
) -> Result<TwistedSection<S>> {
    if !alg.is_nilpotent(&k.gamma) {
        return Err(Error::NotNilpotent);
    }
    let mut out = TwistedSection::zero(k.rank, k.t_class.clone(), k.order);
    let Some(k0) = k.min_k() else {
        return Ok(out);
    };
    laplace_admissible(&k0, ell)?;
    for ((d, kk), a) in &k.terms {
        if !is_integer(&(kk - &k0)) {
            return Err(Error::Inadmissible("exponents span several cosets".into()));
        }
        let c = alg.mul(a, &laplace_ratio(alg, &k.gamma, kk, ell)?);
        out.add_twisted_term(alg, *d, kk + Rational::one(), &k.gamma, c);
    }
    Ok(out)
}

/// Lap(z⁻¹K) = −∂_x Lap(K).
pub fn fl_rule_inverse_z<S: Scalar>(
    alg: &AlgebraPresentation,
    k: &ZSection<S>,
    ell: &Rational,
) -> Result<bool> {
    let lhs = truncated_laplace(alg, &k.mul_inv_z(), ell)?;
    let rhs = truncated_laplace(alg, k, ell)?.d_x().neg();
    Ok(lhs == rhs)
}

/// Lap(∂_{z⁻¹}K) = x·Lap(K); `None` when the left side is not admissible.
pub fn fl_rule_d_inv_z<S: Scalar>(
    alg: &AlgebraPresentation,
    k: &ZSection<S>,
    ell: &Rational,
) -> Result<Option<bool>> {
    // admissibility is judged on the shifted exponents before any cancellation
    if let Some(k0) = k.min_k() {
        if laplace_admissible(&(k0 - Rational::one()), ell).is_err() {
            return Ok(None);
        }
    }
    let lhs = truncated_laplace(alg, &k.d_inv_z(alg), ell)?;
    let rhs = truncated_laplace(alg, k, ell)?.mul_qx(&QxPoly::x())?;
    Ok(Some(lhs == rhs))
}

/// e^{τ₂} with τ₂ = tH, where H is the first degree-2 basis element.
fn hyperplane(alg: &AlgebraPresentation) -> Result<usize> {
    (0..alg.rank())
        .find(|&a| alg.half_degree(a) == 1)
        .ok_or_else(|| Error::InvalidAlgebra("no degree-2 class".into()))
}

/// K^(σ−1)_α = Σ_d N_{α,d}(1)·e^{tH}q^d·z^{−(ρ + ρ(d) − |α| + (n+1)/2 + σ − 1)}.
pub fn k_column(data: &DescendantData, sigma: &Rational, a: usize, order: u32) -> Result<ZSection<Rational>> {
    let alg = &data.alg;
    let h = alg.basis::<Rational>(hyperplane(alg)?);
    let n = alg.dim() as i64;
    let mut out = ZSection::new(h, data.rho(), order);
    let top = (data.order() as u32).min(order);
    for d in 0..=top {
        let k = int(data.c1_degree * d as i64) - int(alg.half_degree(a) as i64) + rat(n + 1, 2)
            + sigma.clone()
            - Rational::one();
        out.add_term(d, k, data.at_one[a][d as usize].clone());
    }
    Ok(out)
}

/// Conditions under which Ǩ^(σ,ℓ) is defined.
pub fn kcheck_admissible(n: usize, sigma: &Rational, ell: &Rational) -> Result<()> {
    let base = rat(n as i64 - 1, 2) + sigma.clone();
    if !is_integer(&(ell - &base)) {
        return Err(Error::Inadmissible(format!(
            "l = {} is not congruent to (n-1)/2 + sigma mod Z",
            format_rational(ell)
        )));
    }
    let ell_pos_int = is_integer(ell) && *ell > Rational::zero();
    let sigma_bad = {
        let s = sigma - rat(n as i64 - 1, 2);
        is_integer(&s) && s <= Rational::zero()
    };
    if ell_pos_int && sigma_bad {
        return Err(Error::Inadmissible(format!(
            "l = {} is a positive integer and sigma = {} lies in (n-1)/2 + Z<=0",
            format_rational(ell),
            format_rational(sigma)
        )));
    }
    Ok(())
}

/// Γ(ρ+a)/Γ(ρ+b) for a − b ∈ ℤ.
fn gamma_ratio(
    alg: &AlgebraPresentation,
    rho: &CohElement<Rational>,
    a: &Rational,
    b: &Rational,
) -> Result<CohElement<Rational>> {
    let steps = (a - b).to_integer();
    let from = if steps >= 0.into() { b } else { a };
    let count = num_traits::ToPrimitive::to_i64(steps.magnitude())
        .ok_or_else(|| Error::Input("gamma ratio too long".into()))?;
    let mut prod = alg.one::<Rational>();
    for j in 0..count {
        let f = rho.clone() + alg.scalar(from + int(j));
        prod = alg.mul(&prod, &f);
    }
    if steps >= 0.into() {
        Ok(prod)
    } else {
        alg.inverse(&prod)
    }
}

/// Closed form of Ǩ^(σ,ℓ)_α truncated at q-degree W.
pub fn kcheck_column(
    data: &DescendantData,
    sigma: &Rational,
    ell: &Rational,
    a: usize,
    order: u32,
) -> Result<TwistedSection<Rational>> {
    let alg = &data.alg;
    let n = alg.dim();
    kcheck_admissible(n, sigma, ell)?;
    let h = alg.basis::<Rational>(hyperplane(alg)?);
    let rho = data.rho();
    let mut out = TwistedSection::zero(alg.rank(), h, order);
    let top = (data.order() as u32).min(order);
    for d in 0..=top {
        let c = int(data.c1_degree * d as i64) - int(alg.half_degree(a) as i64)
            + rat(n as i64 + 1, 2)
            + sigma.clone();
        let coeff = alg.mul(
            &data.at_one[a][d as usize],
            &gamma_ratio(alg, &rho, &c, ell)?,
        );
        out.add_twisted_term(alg, d, c, &rho, coeff);
    }
    Ok(out)
}

/// All columns Ǩ^(σ,ℓ)_0, …, Ǩ^(σ,ℓ)_s.
pub fn kcheck_columns(
    data: &DescendantData,
    sigma: &Rational,
    ell: &Rational,
    order: u32,
) -> Result<Vec<TwistedSection<Rational>>> {
    (0..data.alg.rank())
        .map(|a| kcheck_column(data, sigma, ell, a, order))
        .collect()
}

/// Residuals δ·∂_vǨ_α − Σ_γ Ǩ_γ·numer(A_v)_{γα}, which vanish exactly when ∂_vK = K·A_v.
pub fn ssc_residuals<S: Scalar>(
    alg: &AlgebraPresentation,
    cols: &[TwistedSection<S>],
    conn: &SscConnection<S>,
) -> Result<Vec<[TwistedSection<S>; 2]>> {
    if cols.len() != alg.rank() {
        return Err(Error::RankMismatch {
            expected: alg.rank(),
            got: cols.len(),
        });
    }
    let delta = conn.divisor();
    let mut out = Vec::new();
    for a in 0..cols.len() {
        let mut pair = Vec::new();
        for (mat, deriv) in [(&conn.a_t, cols[a].d_t(alg)), (&conn.a_x, cols[a].d_x())] {
            if mat.den != delta {
                return Err(Error::Consistency("connection matrix is not over the divisor".into()));
            }
            let mut r = deriv.mul_qx(&delta)?;
            for (g, col) in cols.iter().enumerate() {
                if !mat.num[g][a].is_zero() {
                    r = r.sub(&col.mul_qx(&mat.num[g][a])?)?;
                }
            }
            pair.push(r);
        }
        let x = pair.pop().expect("two entries");
        let t = pair.pop().expect("two entries");
        out.push([t, x]);
    }
    Ok(out)
}

/// Checks that the columns form a solution of ∇̌^(σ) up to q-degree W.
pub fn verify_ssc_solution<S: Scalar>(
    alg: &AlgebraPresentation,
    cols: &[TwistedSection<S>],
    conn: &SscConnection<S>,
    order: u32,
) -> Result<Report> {
    let mut rep = Report::new(format!("solution of the connection with sigma = {}", conn.sigma));
    let res = ssc_residuals(alg, cols, conn)?;
    for (a, pair) in res.iter().enumerate() {
        for (dir, r) in ["t", "x"].iter().zip(pair.iter()) {
            let r = r.truncate(order);
            rep.push(
                format!("column {a} direction {dir}"),
                r.is_zero(),
                r.leading_term().unwrap_or_default(),
            );
        }
    }
    Ok(rep)
}

/// Converts a scalar section without logarithms and with integral x-exponents to a polynomial.
fn scalar_map_to_qx(map: &BTreeMap<Key, Rational>) -> Result<QxPoly<Rational>> {
    let mut p = QxPoly::zero();
    for ((d, e, m), c) in map {
        if *m != 0 || !e.is_integer() {
            return Err(Error::Consistency(format!(
                "term q^{d} x^-({}) log^{m} does not cancel",
                format_rational(e)
            )));
        }
        let ei: i32 = num_traits::ToPrimitive::to_i32(&e.to_integer())
            .ok_or_else(|| Error::Consistency("exponent overflow".into()))?;
        p.add_term(*d as i32, -ei, c.clone());
    }
    Ok(p)
}

/// ǧ(T_α,T_β)·δ = (−1)^{n+1}·δ·∫((−1)^{deg/2}Ǩ^{((n+1)/2,1)}_α)∪Ǩ^{(−(n+1)/2,0)}_β up to q-degree W.
pub fn metric_from_solutions(data: &DescendantData, order: u32) -> Result<Report> {
    let alg = &data.alg;
    let n = alg.dim();
    let s = rat(n as i64 + 1, 2);
    let eu = kcheck_columns(data, &s, &Rational::one(), order)?;
    let loc = kcheck_columns(data, &-s.clone(), &Rational::zero(), order)?;
    let g = crate::second_structure::second_metric(n)?;
    let sign = if n % 2 == 0 { int(-1) } else { int(1) };
    let mut rep = Report::new("second metric from Laplace solutions");
    for a in 0..alg.rank() {
        let left = eu[a].grading_sign(alg);
        for b in 0..alg.rank() {
            let prod = left.mul_section(alg, &loc[b]);
            let p = scalar_map_to_qx(&prod.integrate(alg)?)?.scale(&sign);
            let lhs = truncate_q(&p.mul(&g.den), order);
            let rhs = truncate_q(&g.num[a][b], order);
            rep.push(format!("g({a},{b})"), lhs == rhs, "");
        }
    }
    Ok(rep)
}

fn truncate_q(p: &QxPoly<Rational>, order: u32) -> QxPoly<Rational> {
    let mut out = QxPoly::zero();
    for ((a, b), c) in p.terms() {
        if *a <= order as i32 {
            out.add_term(*a, *b, c.clone());
        }
    }
    out
}

/// Ǩ^(−(n+1)/2,0)∘Δ = ρ∘Ǩ^((n+1)/2,1), compared after clearing δ^{n+1}.
pub fn kcheck_delta_relation(data: &DescendantData, order: u32) -> Result<Report> {
    let alg = &data.alg;
    let n = alg.dim();
    let s = rat(n as i64 + 1, 2);
    let eu = kcheck_columns(data, &s, &Rational::one(), order)?;
    let loc = kcheck_columns(data, &-s.clone(), &Rational::zero(), order)?;
    let dt = crate::second_structure::delta_total(n)?;
    let rho = data.rho();
    let mut rep = Report::new("K-check composed with Delta");
    for a in 0..alg.rank() {
        let mut lhs = TwistedSection::zero(alg.rank(), loc[0].t_class().clone(), order);
        for (g, col) in loc.iter().enumerate() {
            if !dt.num[g][a].is_zero() {
                lhs = lhs.add(&col.mul_qx(&dt.num[g][a])?)?;
            }
        }
        let rhs = eu[a].mul_elem(alg, &rho).mul_qx(&dt.den)?;
        let diff = lhs.sub(&rhs)?;
        rep.push(
            format!("column {a}"),
            diff.is_zero(),
            diff.leading_term().unwrap_or_default(),
        );
    }
    Ok(rep)
}

/// FL rules on the transforms K^(σ−1)_α ↦ Ǩ^(σ,ℓ)_α, plus agreement with the closed form.
pub fn laplace_report(data: &DescendantData, sigma: &Rational, ell: &Rational, order: u32) -> Result<Report> {
    let alg = &data.alg;
    let mut rep = Report::new(format!(
        "Laplace transforms sigma = {}, l = {}",
        format_rational(sigma),
        format_rational(ell)
    ));
    for a in 0..alg.rank() {
        let k = k_column(data, sigma, a, order)?;
        let lap = truncated_laplace(alg, &k, ell)?;
        let closed = kcheck_column(data, sigma, ell, a, order)?;
        rep.push(format!("column {a} closed form"), lap == closed, "");
        rep.push(
            format!("column {a} rule z^-1"),
            fl_rule_inverse_z(alg, &k, ell)?,
            "",
        );
        match fl_rule_d_inv_z(alg, &k, ell)? {
            Some(ok) => rep.push(format!("column {a} rule d/dz^-1"), ok, ""),
            None => rep.push(
                format!("column {a} rule d/dz^-1"),
                true,
                "not applicable: shifted exponents are inadmissible",
            ),
        }
    }
    Ok(rep)
}

/// x⁻¹·I^eu_0(t − ρ log x, 1) as a section, from the I-function slots at z = 1.
pub fn i_eu_section(data: &DescendantData, order: u32) -> Result<TwistedSection<Rational>> {
    let alg = &data.alg;
    let h = alg.basis::<Rational>(hyperplane(alg)?);
    let rho = data.rho();
    let i = crate::lefschetz::i_function_from(data, crate::lefschetz::Twist::Eu, 0);
    let at_one = i.eval_z1();
    let mut out = TwistedSection::zero(alg.rank(), h, order);
    for (d, c) in at_one.iter().enumerate() {
        if d as u32 > order {
            break;
        }
        // e^{(d+H)(t − (c₁/H)·log x)} = e^{tH} q^d x^{−ρ(d)−ρ}
        let e = int(data.c1_degree * d as i64) + Rational::one();
        out.add_twisted_term(alg, d as u32, e, &rho, c.clone());
    }
    Ok(out)
}

/// φ_loc = e^{(n+1)ΠH}·Ǩ^(−(n+1)/2,0)_0 with the formal symbol Π = π√−1.
pub fn phi_loc(data: &DescendantData, order: u32) -> Result<TwistedSection<crate::PiPoly>> {
    let alg = &data.alg;
    let n = alg.dim() as i64;
    let k = kcheck_column(data, &rat(-(n + 1), 2), &Rational::zero(), 0, order)?;
    let lifted = k.map(|c| crate::PiPoly::constant(c.clone()));
    let pi_rho = data
        .rho()
        .map(|c| crate::PiPoly::var() * crate::PiPoly::constant(c.clone()));
    Ok(lifted.mul_elem(alg, &alg.exp(&pi_rho)?))
}

/// φ_eu = Ǩ^((n+1)/2,1)_0.
pub fn phi_eu(data: &DescendantData, order: u32) -> Result<TwistedSection<Rational>> {
    let n = data.alg.dim() as i64;
    kcheck_column(data, &rat(n + 1, 2), &Rational::one(), 0, order)
}
