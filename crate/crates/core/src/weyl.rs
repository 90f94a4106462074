//! Differential operators Σ c_k(q, x)·∂_t^k with ∂_t·q = q·(∂_t + 1) and x
//! central, kept in normal form (derivatives on the right).

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::coh_algebra::AlgebraPresentation;
use crate::error::{Error, Result};
use crate::laplace::TwistedSection;
use crate::ratfn::{format_qx, QxPoly};
use crate::report::Report;
use crate::scalar::{binomial, format_rational, int, rat, Rational, Scalar};
use crate::second_structure::{ssc_connection, DenVec, Direction};

#[derive(Clone, Debug, PartialEq)]
pub struct WeylOp<S> {
    terms: BTreeMap<u32, QxPoly<S>>,
}

impl<S: Scalar> WeylOp<S> {
    pub fn zero() -> Self {
        WeylOp {
            terms: BTreeMap::new(),
        }
    }

    pub fn coeff_op(p: QxPoly<S>) -> Self {
        let mut w = Self::zero();
        w.add_term(0, p);
        w
    }

    pub fn scalar(c: S) -> Self {
        Self::coeff_op(QxPoly::constant(c))
    }

    pub fn one() -> Self {
        Self::scalar(S::one())
    }

    /// ∂_t.
    pub fn d() -> Self {
        let mut w = Self::zero();
        w.add_term(1, QxPoly::one());
        w
    }

    pub fn q() -> Self {
        Self::coeff_op(QxPoly::q())
    }

    pub fn x() -> Self {
        Self::coeff_op(QxPoly::x())
    }

    /// q^a x^b.
    pub fn monomial(a: i32, b: i32) -> Self {
        Self::coeff_op(QxPoly::monomial(S::one(), a, b))
    }

    /// a·∂_t + b.
    pub fn linear(a: S, b: S) -> Self {
        let mut w = Self::zero();
        w.add_term(1, QxPoly::constant(a));
        w.add_term(0, QxPoly::constant(b));
        w
    }

    pub fn terms(&self) -> &BTreeMap<u32, QxPoly<S>> {
        &self.terms
    }

    pub fn coeff(&self, k: u32) -> QxPoly<S> {
        self.terms.get(&k).cloned().unwrap_or_else(QxPoly::zero)
    }

    pub fn add_term(&mut self, k: u32, p: QxPoly<S>) {
        let v = match self.terms.remove(&k) {
            Some(old) => old.add(&p),
            None => p,
        };
        if !v.is_zero() {
            self.terms.insert(k, v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().copied()
    }

    pub fn leading_coeff(&self) -> QxPoly<S> {
        self.degree().map(|k| self.coeff(k)).unwrap_or_else(QxPoly::zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (k, p) in &o.terms {
            out.add_term(*k, p.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        WeylOp {
            terms: self.terms.iter().map(|(k, p)| (*k, p.neg())).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero();
        for (k, p) in &self.terms {
            out.add_term(*k, p.scale(c));
        }
        out
    }

    /// (f∂^a)(g∂^b) = f·Σ_j C(a,j)·(θ^j g)·∂^{a−j+b} with θ = q∂_q.
    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for (a, f) in &self.terms {
            for (b, g) in &o.terms {
                let mut theta_g = g.clone();
                for j in 0..=*a {
                    if theta_g.is_zero() {
                        break;
                    }
                    let c = S::from_rational(&binomial(*a as i64, j as i64));
                    out.add_term(a - j + b, f.mul(&theta_g).scale(&c));
                    theta_g = theta_g.theta_q();
                }
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| acc.mul(self))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> WeylOp<T> {
        let mut out = WeylOp::zero();
        for (k, p) in &self.terms {
            out.add_term(*k, p.map(f));
        }
        out
    }

    /// Applies the operator to a section, ∂_t acting through e^{t·c}q^d.
    pub fn apply(&self, alg: &AlgebraPresentation, sec: &TwistedSection<S>) -> Result<TwistedSection<S>> {
        let mut out = TwistedSection::zero(sec.rank(), sec.t_class().clone(), sec.order());
        let mut cur = sec.clone();
        let top = self.degree().unwrap_or(0);
        for k in 0..=top {
            if let Some(c) = self.terms.get(&k) {
                out = out.add(&cur.mul_qx(c)?)?;
            }
            if k < top {
                cur = cur.d_t(alg);
            }
        }
        Ok(out)
    }
}

impl<S: Scalar> fmt::Display for WeylOp<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(k, p)| match k {
                0 => format!("[{p}]"),
                1 => format!("[{p}]·∂_t"),
                _ => format!("[{p}]·∂_t^{k}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Normal form with rational coefficients printed as p/q.
pub fn format_op(op: &WeylOp<Rational>) -> String {
    if op.is_zero() {
        return "0".into();
    }
    op.terms()
        .iter()
        .rev()
        .map(|(k, p)| match k {
            0 => format!("[{}]", format_qx(p)),
            1 => format!("[{}]*Dt", format_qx(p)),
            _ => format!("[{}]*Dt^{k}", format_qx(p)),
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Π over the given shifts of ((n+1)∂_t + shift).
fn factor_product<S: Scalar>(n: usize, shifts: &[S]) -> WeylOp<S> {
    shifts.iter().fold(WeylOp::one(), |acc, s| {
        acc.mul(&WeylOp::linear(S::from_i64(n as i64 + 1), s.clone()))
    })
}

/// The shifts σ + (n+1)/2 + k, k = n, …, 0.
fn family_shifts<S: Scalar>(n: usize, sigma: &S) -> Vec<S> {
    (0..=n)
        .rev()
        .map(|k| sigma.clone() + S::from_rational(&(rat(n as i64 + 1, 2) + int(k as i64))))
        .collect()
}

/// (x∂_t)^{n+1} − q·Π_{k=0}^{n}((n+1)∂_t + σ + (n+1)/2 + k), annihilating T₀ in ∇̌^(σ).
pub fn sigma_operator<S: Scalar>(n: usize, sigma: &S) -> WeylOp<S> {
    let xd = WeylOp::x().mul(&WeylOp::d());
    xd.pow(n as u32 + 1)
        .sub(&WeylOp::q().mul(&factor_product(n, &family_shifts(n, sigma))))
}

/// Factored description in the (x∂_t) / ((n+1)∂_t + c) style.
pub fn describe_sigma_operator(n: usize, sigma: &Rational) -> String {
    let factors: Vec<String> = family_shifts(n, sigma)
        .iter()
        .map(|s| {
            if s.is_zero() {
                format!("({}Dt)", n + 1)
            } else {
                format!("({}Dt+{})", n + 1, format_rational(s))
            }
        })
        .collect();
    format!("(xDt)^{} - e^t{}", n + 1, factors.join(""))
}

/// Operators attached to the anticanonical twist of Pⁿ.
#[derive(Clone, Debug)]
pub struct TwistOperators {
    pub n: usize,
    pub d_eu: WeylOp<Rational>,
    pub d_loc: WeylOp<Rational>,
    pub p_eu: WeylOp<Rational>,
    pub p_loc: WeylOp<Rational>,
}

/// D_eu, D_loc and the reduced presentations P_eu, P_loc with D_eu = ∂_t·P_eu, D_loc = P_loc·∂_t.
pub fn build_twist_ops(n: usize) -> TwistOperators {
    let m = n as i64 + 1;
    let d_eu = sigma_operator(n, &rat(m, 2));
    let d_loc = sigma_operator(n, &rat(-m, 2));
    let xd = WeylOp::<Rational>::x().mul(&WeylOp::d());
    let lead = WeylOp::x().mul(&xd.pow(n as u32));
    let eu_shifts: Vec<Rational> = (m + 1..2 * m).rev().map(int).collect();
    let loc_shifts: Vec<Rational> = (1..m).rev().map(int).collect();
    let qm = WeylOp::q().scale(&int(m));
    let p_eu = lead.sub(&qm.mul(&factor_product(n, &eu_shifts)));
    let p_loc = lead.sub(&qm.mul(&factor_product(n, &loc_shifts)));
    TwistOperators {
        n,
        d_eu,
        d_loc,
        p_eu,
        p_loc,
    }
}

pub fn build_quintic_ops() -> TwistOperators {
    build_twist_ops(4)
}

impl TwistOperators {
    /// Both factorizations as exact normal-form equalities.
    pub fn factorization_report(&self) -> Report {
        let mut rep = Report::new("operator factorizations");
        let eu = WeylOp::d().mul(&self.p_eu);
        let loc = self.p_loc.mul(&WeylOp::d());
        rep.push("D_eu = Dt*P_eu", eu == self.d_eu, format_op(&eu.sub(&self.d_eu)));
        rep.push("D_loc = P_loc*Dt", loc == self.d_loc, format_op(&loc.sub(&self.d_loc)));
        rep
    }

    /// D_eu·q⁻¹∂_t^{n+1} = ∂_t^{n+1}·q⁻¹·D_loc.
    pub fn intertwiner_report(&self) -> Report {
        let m = self.n as u32 + 1;
        let shift = WeylOp::monomial(-1, 0).mul(&WeylOp::d().pow(m));
        let lhs = self.d_eu.mul(&shift);
        let rhs = WeylOp::d().pow(m).mul(&WeylOp::monomial(-1, 0)).mul(&self.d_loc);
        let mut rep = Report::new("intertwiner");
        let diff = lhs.sub(&rhs);
        rep.push("normal forms agree", diff.is_zero(), format_op(&diff));
        rep.push(
            "degree",
            lhs.degree() == Some(2 * m) && rhs.degree() == Some(2 * m),
            format!("{:?} / {:?}", lhs.degree(), rhs.degree()),
        );
        rep.push(
            "leading coefficient",
            lhs.leading_coeff() == rhs.leading_coeff(),
            format_qx(&lhs.leading_coeff()),
        );
        rep
    }
}

/// op(sec) truncated at q-degree W; empty result means the section is annihilated.
pub fn annihilate_check<S: Scalar>(
    alg: &AlgebraPresentation,
    op: &WeylOp<S>,
    sec: &TwistedSection<S>,
    order: u32,
) -> Result<Report> {
    let res = op.apply(alg, sec)?.truncate(order);
    let mut rep = Report::new("annihilation");
    let lowest = res.terms().keys().next().map(|k| k.0);
    rep.push(
        format!("residual up to q^{order}"),
        res.is_zero(),
        match lowest {
            Some(d) => format!("first residual at q^{d}"),
            None => String::new(),
        },
    );
    Ok(rep)
}

/// Lowest q-degree carrying a nonzero residual, if any.
pub fn residual_degree<S: Scalar>(
    alg: &AlgebraPresentation,
    op: &WeylOp<S>,
    sec: &TwistedSection<S>,
    order: u32,
) -> Result<Option<u32>> {
    let res = op.apply(alg, sec)?.truncate(order);
    Ok(res.terms().keys().next().map(|k| k.0))
}

/// Applies the operator to T₀ through ∇̌^(σ)_t; zero means it annihilates T₀.
pub fn apply_to_unit<S: Scalar>(n: usize, sigma: &S, op: &WeylOp<S>) -> Result<DenVec<S>> {
    let conn = ssc_connection(sigma, n)?;
    let delta = conn.divisor();
    let top = op.degree().ok_or_else(|| Error::Input("zero operator".into()))?;
    let mut powers = vec![DenVec::basis(n + 1, 0)];
    for _ in 0..top {
        let next = conn.covariant(Direction::T, powers.last().expect("nonempty"));
        powers.push(next);
    }
    let mut acc = vec![QxPoly::zero(); n + 1];
    for (k, c) in op.terms() {
        let v = &powers[*k as usize];
        let f = delta.pow(top - v.pow).mul(c);
        for (a, p) in acc.iter_mut().zip(&v.num) {
            *a = a.add(&p.mul(&f));
        }
    }
    Ok(DenVec { num: acc, pow: top })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::UniPoly;
    use crate::PiPoly;

    type W = WeylOp<Rational>;

    #[test]
    fn commutation_relations() {
        // ∂q = q∂ + q
        assert_eq!(W::d().mul(&W::q()), W::q().mul(&W::d()).add(&W::q()));
        // ∂q⁻¹ = q⁻¹(∂ − 1)
        let qi = W::monomial(-1, 0);
        assert_eq!(
            W::d().mul(&qi),
            qi.mul(&W::linear(int(1), int(-1)))
        );
        let xd = W::x().mul(&W::d());
        assert_eq!(xd.pow(5), W::monomial(0, 5).mul(&W::d().pow(5)));
    }

    #[test]
    fn quintic_operators_factor() {
        let ops = build_quintic_ops();
        let rep = ops.factorization_report();
        assert!(rep.passed, "{rep:?}");
        // ∂⁵ coefficient of D_eu is x⁵ − 5⁵q
        assert_eq!(
            ops.d_eu.coeff(5),
            QxPoly::monomial(int(1), 0, 5).sub(&QxPoly::monomial(int(3125), 1, 0))
        );
        for n in 1..=5 {
            assert!(build_twist_ops(n).factorization_report().passed);
        }
    }

    #[test]
    fn operator_family_specializes() {
        let ops = build_quintic_ops();
        let expect_eu = {
            let mut p = W::one();
            for k in (5..=9).rev() {
                p = p.mul(&W::linear(int(5), int(k)));
            }
            W::x().mul(&W::d()).pow(5).sub(&W::q().mul(&p))
        };
        assert_eq!(ops.d_eu, expect_eu);
        let symbolic = sigma_operator(4, &UniPoly::var());
        let at = |s: Rational| symbolic.map(|c| crate::Rational::from(c.eval(&s)));
        assert_eq!(at(rat(5, 2)), ops.d_eu);
        assert_eq!(at(rat(-5, 2)), ops.d_loc);
        assert_eq!(
            describe_sigma_operator(4, &rat(-5, 2)),
            "(xDt)^5 - e^t(5Dt+4)(5Dt+3)(5Dt+2)(5Dt+1)(5Dt)"
        );
    }

    #[test]
    fn intertwiner_identity() {
        let rep = build_quintic_ops().intertwiner_report();
        assert!(rep.passed, "{rep:?}");
        let ops = build_quintic_ops();
        let shift = W::monomial(-1, 0).mul(&W::d().pow(5));
        let lead = ops.d_eu.mul(&shift).leading_coeff();
        assert_eq!(
            lead,
            QxPoly::monomial(int(1), -1, 5).sub(&QxPoly::constant(int(3125)))
        );
    }

    #[test]
    fn associativity_on_fixed_words() {
        let a = W::x().mul(&W::d()).add(&W::q());
        let b = W::linear(int(5), int(3)).mul(&W::monomial(2, -1));
        let c = W::d().pow(2).sub(&W::monomial(-1, 1));
        assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn symbolic_operator_kills_unit() {
        for n in [1usize, 2, 4] {
            let op = sigma_operator(n, &UniPoly::var());
            let v = apply_to_unit(n, &UniPoly::var(), &op).unwrap();
            assert!(v.num.iter().all(|p| p.is_zero()), "n = {n}");
        }
        let wrong = sigma_operator(4, &(UniPoly::var() + <UniPoly as num_traits::One>::one()));
        let v = apply_to_unit(4, &UniPoly::var(), &wrong).unwrap();
        assert!(!v.num.iter().all(|p| p.is_zero()));
    }

    #[test]
    fn hypergeometric_solutions() {
        let data = crate::givental::extract_descendants(4, 4).unwrap();
        let alg = &data.alg;
        let ops = build_quintic_ops();
        let phi_eu = crate::laplace::phi_eu(&data, 4).unwrap();
        assert!(annihilate_check(alg, &ops.d_eu, &phi_eu, 4).unwrap().passed);
        let phi_loc = crate::laplace::phi_loc(&data, 4).unwrap();
        let d_loc = ops.d_loc.map(|c| PiPoly::constant(c.clone()));
        assert!(annihilate_check(alg, &d_loc, &phi_loc, 4).unwrap().passed);
        let d_eu = ops.d_eu.map(|c| PiPoly::constant(c.clone()));
        assert_eq!(residual_degree(alg, &d_eu, &phi_loc, 4).unwrap(), Some(1));
    }

    #[test]
    fn inverse_q_is_refused_on_sections() {
        let data = crate::givental::extract_descendants(4, 1).unwrap();
        let phi = crate::laplace::phi_eu(&data, 1).unwrap();
        let op = W::monomial(-1, 0);
        assert!(op.apply(&data.alg, &phi).is_err());
    }
}
