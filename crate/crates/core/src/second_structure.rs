//! Second structure connection of Pⁿ on the small locus, its second metric and
//! the difference morphisms Δ_σ.
//!
//! Matrices act on column vectors in the basis 1, H, …, Hⁿ. Entries are
//! rational functions in q = e^t and x; ∂_t acts as q·∂/∂q.

use num_traits::{One, Zero};

use crate::coh_algebra::AlgebraPresentation;
use crate::error::{Error, Result};
use crate::ratfn::{adjugate, bareiss, PolyMatrix, QxPoly, RatMat};
use crate::report::Report;
use crate::scalar::{format_rational, int, rat, Rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    T,
    X,
}

/// H•_t: ones on the subdiagonal and q in the top-right corner.
pub fn h_mult_matrix<S: Scalar>(n: usize) -> PolyMatrix<S> {
    let mut m = vec![vec![QxPoly::zero(); n + 1]; n + 1];
    for k in 0..n {
        m[k + 1][k] = QxPoly::one();
    }
    m[0][n] = QxPoly::q();
    m
}

/// 𝔈• = (n+1)·H•_t on the small locus.
pub fn euler_mult_matrix<S: Scalar>(n: usize) -> RatMat<S> {
    let c = S::from_i64(n as i64 + 1);
    RatMat::from_poly(
        h_mult_matrix::<S>(n)
            .iter()
            .map(|r| r.iter().map(|p| p.scale(&c)).collect())
            .collect(),
    )
}

/// det(𝔈• − x) = (−1)^{n+1}(x^{n+1} − (n+1)^{n+1} q).
pub fn sigma_divisor<S: Scalar>(n: usize) -> QxPoly<S> {
    let m = n as i64 + 1;
    let p = QxPoly::monomial(S::one(), 0, m as i32)
        .sub(&QxPoly::monomial(S::from_i64(m.pow(m as u32)), 1, 0));
    if m % 2 == 0 {
        p
    } else {
        p.neg()
    }
}

fn euler_minus_x(n: usize) -> PolyMatrix<Rational> {
    let mut m = euler_mult_matrix::<Rational>(n).num;
    for (k, row) in m.iter_mut().enumerate() {
        row[k] = row[k].sub(&QxPoly::x());
    }
    m
}

/// (𝔈• − x)⁻¹ as adjugate over the determinant.
pub fn resolvent(n: usize) -> Result<RatMat<Rational>> {
    RatMat::new(adjugate(&euler_minus_x(n))?, sigma_divisor(n))
}

fn lift_mat<S: Scalar>(m: &RatMat<Rational>) -> RatMat<S> {
    let f = |p: &QxPoly<Rational>| p.map(|c| S::from_rational(c));
    RatMat {
        num: m.num.iter().map(|r| r.iter().map(f).collect()).collect(),
        den: f(&m.den),
    }
}

/// Diagonal of μ − ½ − σ.
fn mu_shift<S: Scalar>(n: usize, sigma: &S) -> Vec<Vec<S>> {
    let mut d = vec![vec![S::zero(); n + 1]; n + 1];
    for (k, row) in d.iter_mut().enumerate() {
        let ev = int(k as i64) - rat(n as i64, 2) - rat(1, 2);
        row[k] = S::from_rational(&ev) - sigma.clone();
    }
    d
}

/// Connection matrices of ∇̌^(σ) = d + A_t dt + A_x dx.
#[derive(Clone, Debug)]
pub struct SscConnection<S> {
    pub n: usize,
    pub sigma: S,
    pub a_t: RatMat<S>,
    pub a_x: RatMat<S>,
}

pub fn ssc_connection<S: Scalar>(sigma: &S, n: usize) -> Result<SscConnection<S>> {
    if n == 0 {
        return Err(Error::Input("n must be positive".into()));
    }
    let res: RatMat<S> = lift_mat(&resolvent(n)?);
    let shift = mu_shift(n, sigma);
    let a_x = res.left_mul_const(&shift).neg();
    let a_t = res
        .left_mul_const(&shift)
        .mul(&RatMat::from_poly(h_mult_matrix::<S>(n)));
    Ok(SscConnection {
        n,
        sigma: sigma.clone(),
        a_t,
        a_x,
    })
}

impl<S: Scalar> SscConnection<S> {
    pub fn matrix(&self, dir: Direction) -> &RatMat<S> {
        match dir {
            Direction::T => &self.a_t,
            Direction::X => &self.a_x,
        }
    }

    pub fn divisor(&self) -> QxPoly<S> {
        sigma_divisor(self.n)
    }

    /// ∂_t A_x − ∂_x A_t + [A_t, A_x].
    pub fn curvature(&self) -> RatMat<S> {
        let comm = self
            .a_t
            .mul(&self.a_x)
            .sub(&self.a_x.mul(&self.a_t));
        self.a_x.d_t().sub(&self.a_t.d_x()).add(&comm)
    }

    pub fn is_flat(&self) -> bool {
        self.curvature().is_zero()
    }

    /// ∇̌_v applied to num/δ^pow, returning the new numerator over δ^{pow+1}.
    pub fn covariant(&self, dir: Direction, v: &DenVec<S>) -> DenVec<S> {
        let delta = self.divisor();
        let (dd, a) = match dir {
            Direction::T => (delta.theta_q(), &self.a_t),
            Direction::X => (delta.d_x(), &self.a_x),
        };
        let deriv = |p: &QxPoly<S>| match dir {
            Direction::T => p.theta_q(),
            Direction::X => p.d_x(),
        };
        let k = S::from_i64(v.pow as i64);
        let num = (0..v.num.len())
            .map(|i| {
                let mut acc = deriv(&v.num[i])
                    .mul(&delta)
                    .sub(&v.num[i].mul(&dd).scale(&k));
                for (j, vj) in v.num.iter().enumerate() {
                    if !a.num[i][j].is_zero() && !vj.is_zero() {
                        acc = acc.add(&a.num[i][j].mul(vj));
                    }
                }
                acc
            })
            .collect();
        DenVec {
            num,
            pow: v.pow + 1,
        }
    }
}

/// Vector num/δ^pow where δ is the divisor polynomial of the connection.
#[derive(Clone, Debug, PartialEq)]
pub struct DenVec<S> {
    pub num: Vec<QxPoly<S>>,
    pub pow: u32,
}

impl<S: Scalar> DenVec<S> {
    pub fn basis(rank: usize, a: usize) -> Self {
        let mut num = vec![QxPoly::zero(); rank];
        num[a] = QxPoly::one();
        DenVec { num, pow: 0 }
    }

    pub fn scale(&self, p: &QxPoly<S>) -> Self {
        DenVec {
            num: self.num.iter().map(|a| a.mul(p)).collect(),
            pow: self.pow,
        }
    }

    /// Equality of the represented rational vectors.
    pub fn equals(&self, o: &Self, delta: &QxPoly<S>) -> bool {
        let (lo, hi) = if self.pow <= o.pow { (self, o) } else { (o, self) };
        let f = delta.pow(hi.pow - lo.pow);
        lo.num.iter().zip(&hi.num).all(|(a, b)| a.mul(&f) == *b)
    }
}

/// ǧ(T_α, T_β) = ∫ T_α ∪ (𝔈• − x)⁻¹ T_β, i.e. P·(𝔈• − x)⁻¹.
pub fn second_metric(n: usize) -> Result<RatMat<Rational>> {
    let alg = AlgebraPresentation::projective_space(n)?;
    Ok(resolvent(n)?.left_mul_const(&alg.pairing_matrix()))
}

/// ∂_v ǧ = (A_v^{(σ)})ᵀ ǧ + ǧ A_v^{(−σ)} in both directions.
pub fn metric_flatness<S: Scalar>(sigma: &S, n: usize) -> Result<bool> {
    let g: RatMat<S> = lift_mat(&second_metric(n)?);
    let plus = ssc_connection(sigma, n)?;
    let minus = ssc_connection(&-sigma.clone(), n)?;
    for dir in [Direction::T, Direction::X] {
        let lhs = match dir {
            Direction::T => g.d_t(),
            Direction::X => g.d_x(),
        };
        let rhs = plus
            .matrix(dir)
            .transpose()
            .mul(&g)
            .add(&g.mul(minus.matrix(dir)));
        if !lhs.equals(&rhs) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Value of ǧ at q = 0, x = 1.
pub fn large_radius_metric(n: usize) -> Result<Vec<Vec<Rational>>> {
    second_metric(n)?.eval(&Rational::zero(), &Rational::one())
}

/// −∫ ρ^{n−|α|−|β|} T_α T_β when |α| + |β| ≤ n, else 0.
pub fn expected_large_radius_metric(n: usize) -> Result<Vec<Vec<Rational>>> {
    let alg = AlgebraPresentation::projective_space(n)?;
    let rho = alg.basis::<Rational>(1).scale(&int(n as i64 + 1));
    let r = alg.rank();
    let mut out = vec![vec![Rational::zero(); r]; r];
    for a in 0..r {
        for b in 0..r {
            let (ha, hb) = (alg.half_degree(a), alg.half_degree(b));
            if ha + hb <= n {
                let e = alg.mul(
                    &alg.pow(&rho, n - ha - hb),
                    &alg.mul(&alg.basis(a), &alg.basis(b)),
                );
                out[a][b] = -alg.integrate(&e);
            }
        }
    }
    Ok(out)
}

/// Δ_σ: (F̌, ∇̌^(σ+1)) → (F̌, ∇̌^(σ)), T_α ↦ ∇̌^(σ)_x T_α.
pub fn delta<S: Scalar>(sigma: &S, n: usize) -> Result<RatMat<S>> {
    Ok(ssc_connection(sigma, n)?.a_x)
}

/// ∂_v Δ_σ + A_v^{(σ)} Δ_σ − Δ_σ A_v^{(σ+1)} = 0 for v = t, x.
pub fn delta_intertwines<S: Scalar>(sigma: &S, n: usize) -> Result<bool> {
    let lo = ssc_connection(sigma, n)?;
    let hi = ssc_connection(&(sigma.clone() + S::one()), n)?;
    let d = lo.a_x.clone();
    for dir in [Direction::T, Direction::X] {
        let dd = match dir {
            Direction::T => d.d_t(),
            Direction::X => d.d_x(),
        };
        let lhs = dd.add(&lo.matrix(dir).mul(&d));
        let rhs = d.mul(hi.matrix(dir));
        if !lhs.equals(&rhs) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The parameters −(n+1)/2, …, (n−1)/2 in composition order (leftmost first).
pub fn delta_tower_sigmas(n: usize) -> Vec<Rational> {
    (0..=n)
        .map(|k| rat(-(n as i64 + 1), 2) + int(k as i64))
        .collect()
}

/// Δ = (−1)^{n+1} Δ_{−(n+1)/2} ∘ ⋯ ∘ Δ_{(n−1)/2}.
pub fn delta_total(n: usize) -> Result<RatMat<Rational>> {
    let mut acc = RatMat::identity(n + 1);
    for s in delta_tower_sigmas(n) {
        acc = acc.mul(&delta(&s, n)?);
    }
    Ok(if n % 2 == 0 { acc.neg() } else { acc })
}

/// Rank of a rational-function matrix over ℚ(q, x).
pub fn rank(m: &RatMat<Rational>) -> Result<usize> {
    Ok(bareiss(&m.num)?.rank)
}

pub fn det(m: &RatMat<Rational>) -> Result<QxPoly<Rational>> {
    crate::ratfn::det(&m.num)
}

/// Numerators of the P⁴ connection matrices in the form
/// A_t = (μ−½−σ)·N_t/(5⁵q − x⁵) and A_x = −(μ−½−σ)·N_x/(5⁵q − x⁵).
pub fn quintic_reference_numerators() -> (PolyMatrix<Rational>, PolyMatrix<Rational>) {
    let m = |c: i64, qe: i32, xe: i32| QxPoly::monomial(int(c), qe, xe);
    let nt = vec![
        vec![m(625, 1, 0), m(125, 1, 1), m(25, 1, 2), m(5, 1, 3), m(1, 1, 4)],
        vec![m(1, 0, 4), m(625, 1, 0), m(125, 1, 1), m(25, 1, 2), m(5, 1, 3)],
        vec![m(5, 0, 3), m(1, 0, 4), m(625, 1, 0), m(125, 1, 1), m(25, 1, 2)],
        vec![m(25, 0, 2), m(5, 0, 3), m(1, 0, 4), m(625, 1, 0), m(125, 1, 1)],
        vec![m(125, 0, 1), m(25, 0, 2), m(5, 0, 3), m(1, 0, 4), m(625, 1, 0)],
    ];
    let nx = vec![
        vec![m(1, 0, 4), m(625, 1, 0), m(125, 1, 1), m(25, 1, 2), m(5, 1, 3)],
        vec![m(5, 0, 3), m(1, 0, 4), m(625, 1, 0), m(125, 1, 1), m(25, 1, 2)],
        vec![m(25, 0, 2), m(5, 0, 3), m(1, 0, 4), m(625, 1, 0), m(125, 1, 1)],
        vec![m(125, 0, 1), m(25, 0, 2), m(5, 0, 3), m(1, 0, 4), m(625, 1, 0)],
        vec![m(625, 0, 0), m(125, 0, 1), m(25, 0, 2), m(5, 0, 3), m(1, 0, 4)],
    ];
    (nt, nx)
}

/// Compares the generated P⁴ matrices with the reference numerators.
pub fn quintic_matrix_check<S: Scalar>(sigma: &S) -> Result<Report> {
    let conn = ssc_connection(sigma, 4)?;
    let (nt, nx) = quintic_reference_numerators();
    let delta = QxPoly::monomial(S::from_i64(3125), 1, 0).sub(&QxPoly::monomial(S::one(), 0, 5));
    let lift = |m: &PolyMatrix<Rational>| -> PolyMatrix<S> {
        m.iter()
            .map(|r| r.iter().map(|p| p.map(|c| S::from_rational(c))).collect())
            .collect()
    };
    let shift = mu_shift(4, sigma);
    let ref_t = RatMat {
        num: lift(&nt),
        den: delta.clone(),
    }
    .left_mul_const(&shift);
    let ref_x = RatMat {
        num: lift(&nx),
        den: delta,
    }
    .left_mul_const(&shift)
    .neg();
    let mut rep = Report::new("quintic connection matrices");
    for (label, gen, reference) in [("A_t", &conn.a_t, &ref_t), ("A_x", &conn.a_x, &ref_x)] {
        let mut bad = Vec::new();
        for i in 0..5 {
            for j in 0..5 {
                let l = gen.num[i][j].mul(&reference.den);
                let r = reference.num[i][j].mul(&gen.den);
                if l != r {
                    bad.push(format!("({i},{j})"));
                }
            }
        }
        rep.push(
            format!("{label} entries"),
            bad.is_empty(),
            if bad.is_empty() {
                "all 25 entries agree".to_string()
            } else {
                format!("mismatched entries {}", bad.join(" "))
            },
        );
    }
    Ok(rep)
}

/// Flatness, metric flatness and Δ intertwining for a list of σ values.
pub fn flatness_report(n: usize, sigmas: &[Rational]) -> Result<Report> {
    let mut rep = Report::new(format!("second structure connection on P^{n}"));
    for s in sigmas {
        let conn = ssc_connection(s, n)?;
        let label = format_rational(s);
        rep.push(format!("flat sigma={label}"), conn.is_flat(), "");
        rep.push(
            format!("second metric flat sigma={label}"),
            metric_flatness(s, n)?,
            "",
        );
        rep.push(
            format!("Delta intertwines sigma={label}"),
            delta_intertwines(s, n)?,
            "",
        );
    }
    let symbolic = ssc_connection(&crate::scalar::UniPoly::var(), n)?;
    rep.push("flat for symbolic sigma", symbolic.is_flat(), "");
    let g0 = large_radius_metric(n)?;
    rep.push(
        "second metric at q=0, x=1",
        g0 == expected_large_radius_metric(n)?,
        format!("g(1,1) = {}", format_rational(&g0[0][0])),
    );
    let dt = delta_total(n)?;
    let r = rank(&dt)?;
    rep.push("rank of Delta", r == n, format!("rank {r}"));
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::UniPoly;

    type P = QxPoly<Rational>;

    #[test]
    fn determinant_of_shifted_euler() {
        let d = crate::ratfn::det(&euler_minus_x(4)).unwrap();
        assert_eq!(d, sigma_divisor::<Rational>(4));
        assert_eq!(d, P::monomial(int(3125), 1, 0).sub(&P::monomial(int(1), 0, 5)));
        for n in 1..=5 {
            assert_eq!(
                crate::ratfn::det(&euler_minus_x(n)).unwrap(),
                sigma_divisor::<Rational>(n)
            );
            // classical limit ±x^{n+1}
            let at0 = sigma_divisor::<Rational>(n).q_zero_part();
            assert_eq!(at0.terms().len(), 1);
        }
    }

    #[test]
    fn resolvent_inverts() {
        let r = resolvent(4).unwrap();
        let prod = RatMat::from_poly(euler_minus_x(4)).mul(&r);
        assert!(prod.equals(&RatMat::identity(5)));
    }

    #[test]
    fn quintic_matrices_match_reference() {
        for s in [rat(5, 2), rat(-5, 2), rat(1, 3)] {
            let rep = quintic_matrix_check(&s).unwrap();
            assert!(rep.passed, "{rep:?}");
        }
        let rep = quintic_matrix_check(&UniPoly::var()).unwrap();
        assert!(rep.passed);
    }

    #[test]
    fn reference_with_unfixed_entry_is_rejected() {
        let (mut nt, _) = quintic_reference_numerators();
        nt[1][4] = P::monomial(int(5), 1, 2);
        let conn = ssc_connection(&rat(5, 2), 4).unwrap();
        let shift = mu_shift(4, &rat(5, 2));
        let bad = RatMat {
            num: nt,
            den: sigma_divisor(4),
        }
        .left_mul_const(&shift);
        assert!(!bad.equals(&conn.a_t));
    }

    #[test]
    fn flatness_for_half_integers_and_symbolic_sigma() {
        for k in [-5, -3, -1, 1, 3, 5] {
            assert!(ssc_connection(&rat(k, 2), 4).unwrap().is_flat());
        }
        assert!(ssc_connection(&UniPoly::var(), 4).unwrap().is_flat());
        assert!(ssc_connection(&UniPoly::var(), 2).unwrap().is_flat());
    }

    #[test]
    fn perturbed_connection_is_not_flat() {
        let mut conn = ssc_connection(&rat(1, 2), 4).unwrap();
        conn.a_t.num[0][0] = conn.a_t.num[0][0].add(&P::x());
        assert!(!conn.is_flat());
    }

    #[test]
    fn second_metric_large_radius() {
        let g = large_radius_metric(4).unwrap();
        assert_eq!(g[0][0], int(-625));
        assert_eq!(g, expected_large_radius_metric(4).unwrap());
        for a in 0..5 {
            for b in 0..5 {
                if a + b > 4 {
                    assert!(g[a][b].is_zero());
                }
            }
        }
        assert!(metric_flatness(&rat(5, 2), 4).unwrap());
        assert!(metric_flatness(&UniPoly::var(), 3).unwrap());
    }

    #[test]
    fn delta_tower() {
        for s in delta_tower_sigmas(4) {
            assert!(delta_intertwines(&s, 4).unwrap());
        }
        assert!(delta_intertwines(&UniPoly::var(), 4).unwrap());
        let dt = delta_total(4).unwrap();
        assert_eq!(rank(&dt).unwrap(), 4);
        // nothing maps onto T₀ since ρ∪ has no unit component
        assert!(dt.num[0].iter().all(|p| p.is_zero()));
        assert!(!det(&delta(&rat(7, 2), 4).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn delta_sends_unit_to_fifth_derivative() {
        let conn = ssc_connection(&rat(-5, 2), 4).unwrap();
        let delta_poly = conn.divisor();
        let mut vx = DenVec::basis(5, 0);
        let mut vt = DenVec::basis(5, 0);
        for _ in 0..5 {
            vx = conn.covariant(Direction::X, &vx);
            vt = conn.covariant(Direction::T, &vt);
        }
        let minus_vx = vx.scale(&P::constant(int(-1)));
        let vt_over_q = vt.scale(&P::monomial(int(1), -1, 0));
        assert!(minus_vx.equals(&vt_over_q, &delta_poly));
        let dt = delta_total(4).unwrap();
        let col0 = DenVec {
            num: dt.column(0),
            pow: 5,
        };
        assert_eq!(dt.den, delta_poly.pow(5));
        assert!(col0.equals(&minus_vx, &delta_poly));
    }
}
