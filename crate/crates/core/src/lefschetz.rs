//! Twisted I-functions of the anticanonical bundle on Pⁿ, mirror maps,
//! Gromov–Witten extraction, LU factorisation of the I-matrix and the
//! quantum Serre pairing identity.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::coh_algebra::{AlgebraPresentation, CohElement};
use crate::error::{Error, Result};
use crate::givental::{extract_descendants, DescendantData};
use crate::report::Report;
use crate::scalar::{format_rational, int, Rational, Scalar, UniPoly};
use crate::series::{
    zq_constant, zq_mat_mul, zq_transpose, zq_unit_lower_inverse, CohSeries, UniSeries, ZPoly,
    ZqMatrix, ZqSeries,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Twist {
    Eu,
    Loc,
}

/// Slot d of I^eu_α = N_{α,d}(z)·Π_{k=1}^{ρ(d)}(ρ+kz); of I^loc_α uses Π_{k=0}^{ρ(d)−1}(−ρ−kz).
pub fn i_function_from(data: &DescendantData, kind: Twist, a: usize) -> CohSeries<Rational> {
    let alg = &data.alg;
    let rho = data.rho();
    let slots = data.table[a]
        .iter()
        .enumerate()
        .map(|(d, n)| {
            let top = data.c1_degree * d as i64;
            let mut p = n.clone();
            for k in 0..top {
                let factor = match kind {
                    Twist::Eu => {
                        let mut f = ZPoly::monomial(rho.clone(), 0);
                        f.add_term(1, alg.one::<Rational>().scale(&int(k + 1)));
                        f
                    }
                    Twist::Loc => {
                        let mut f = ZPoly::monomial(-rho.clone(), 0);
                        f.add_term(1, alg.one::<Rational>().scale(&int(-k)));
                        f
                    }
                };
                p = p.mul(alg, &factor);
            }
            p
        })
        .collect();
    CohSeries::from_slots(alg.rank(), slots).expect("ranks agree")
}

pub fn i_function(kind: Twist, n: usize, a: usize, order: usize) -> Result<CohSeries<Rational>> {
    let data = extract_descendants(n, order)?;
    if a > n {
        return Err(Error::Input(format!("index {a} exceeds n = {n}")));
    }
    Ok(i_function_from(&data, kind, a))
}

pub fn i_matrix_from(data: &DescendantData, kind: Twist) -> Vec<CohSeries<Rational>> {
    (0..data.alg.rank())
        .map(|a| i_function_from(data, kind, a))
        .collect()
}

/// Mirror maps of the two twisted theories and the Gromov–Witten data they encode.
#[derive(Clone, Debug, PartialEq)]
pub struct MirrorMapPair {
    pub order: usize,
    /// Mir(t) − t as a coefficient of H.
    pub mir_eu: UniSeries<Rational>,
    pub mir_loc: UniSeries<Rational>,
    pub m_eu: UniSeries<Rational>,
    pub m_loc: UniSeries<Rational>,
    pub f_bar: UniSeries<Rational>,
    /// N_1, …, N_{order−1}.
    pub n_table: Vec<Rational>,
}

/// Reads (F, G) with I_0 = F·1 + G·H/z + O(z^{-2}) and returns G/F.
fn mirror_shift(i0: &CohSeries<Rational>) -> Result<UniSeries<Rational>> {
    let f = i0.component(0, 0);
    let g = i0.component(1, -1);
    if f.coeff(0) != Rational::one() {
        return Err(Error::Input(format!(
            "F(0) = {} but must be 1",
            format_rational(&f.coeff(0))
        )));
    }
    Ok(g.mul(&f.inverse()?))
}

pub fn mirror_maps_from(data: &DescendantData) -> Result<MirrorMapPair> {
    let order = data.order();
    if order < 1 {
        return Err(Error::Input("mirror maps need order ≥ 1".into()));
    }
    let mir_eu = mirror_shift(&i_function_from(data, Twist::Eu, 0))?;
    let mir_loc = mirror_shift(&i_function_from(data, Twist::Loc, 0))?;
    let q = UniSeries::var(order);
    let m_eu = q.mul(&mir_eu.exp()?);
    let m_loc = q.mul(&mir_loc.exp()?);
    // h: q ↦ e^{c1_degree·Π}q = (−1)^{c1_degree} q
    let s = if data.c1_degree % 2 == 0 { int(1) } else { int(-1) };
    let inv_eu = m_eu.revert()?;
    let f_bar = m_loc.compose(&inv_eu.scale(&s))?.scale(&s);
    let n_table = f_bar.div_q()?.log()?.coeffs()[1..].to_vec();
    Ok(MirrorMapPair {
        order,
        mir_eu,
        mir_loc,
        m_eu,
        m_loc,
        f_bar,
        n_table,
    })
}

pub fn mirror_maps(n: usize, order: usize) -> Result<MirrorMapPair> {
    mirror_maps_from(&extract_descendants(n, order)?)
}

impl MirrorMapPair {
    /// 𝔐_loc(sq) = s·F̄(𝔐_eu(q)) with s = (−1)^{n+1}.
    pub fn compatibility_holds(&self, sign: &Rational) -> bool {
        let lhs = self.m_loc.rescale(sign);
        let rhs = self
            .f_bar
            .compose(&self.m_eu)
            .map(|x| x.scale(sign));
        rhs.map(|r| r == lhs).unwrap_or(false)
    }
}

/// Converts I-matrix columns into a matrix with entry (β, α) = Σ q^d z^j [slot_d]_β.
pub fn to_zq_matrix(cols: &[CohSeries<Rational>]) -> ZqMatrix<Rational> {
    let r = cols.len();
    let order = cols[0].order();
    let mut m = vec![vec![ZqSeries::zero(order); r]; r];
    for (a, col) in cols.iter().enumerate() {
        let mut js: Vec<i64> = col
            .slots()
            .iter()
            .flat_map(|p| p.terms().keys().copied())
            .collect();
        js.sort_unstable();
        js.dedup();
        for b in 0..r {
            for &j in &js {
                let f = col.component(b, j);
                if !f.is_zero() {
                    m[b][a].add_term(j, f);
                }
            }
        }
    }
    m
}

#[derive(Clone, Debug, PartialEq)]
pub struct LuFactors<S> {
    /// Unit lower-triangular, Id + O(z^{-1}).
    pub linv: ZqMatrix<S>,
    /// Upper-triangular, polynomial in z.
    pub v: ZqMatrix<S>,
}

/// Doolittle factorisation of the I-matrix built from `cols`.
pub fn lu_factorize(cols: &[CohSeries<Rational>]) -> Result<LuFactors<Rational>> {
    lu_zq(&to_zq_matrix(cols))
}

/// Doolittle factorisation over z-Laurent q-series; pivots must be z⁰ units.
pub fn lu_zq<S: Scalar>(a: &ZqMatrix<S>) -> Result<LuFactors<S>> {
    let r = a.len();
    let order = a[0][0].order();
    let mut l = vec![vec![ZqSeries::zero(order); r]; r];
    let mut u = vec![vec![ZqSeries::zero(order); r]; r];
    for i in 0..r {
        l[i][i] = ZqSeries::one(order);
        for j in i..r {
            let mut s = a[i][j].clone();
            for k in 0..i {
                if !l[i][k].is_zero() && !u[k][j].is_zero() {
                    s = s.sub(&l[i][k].mul(&u[k][j]));
                }
            }
            u[i][j] = s;
        }
        let piv_inv = u[i][i]
            .inverse()
            .map_err(|e| Error::NotUnit(format!("pivot {i}: {e}")))?;
        for j in i + 1..r {
            let mut s = a[j][i].clone();
            for k in 0..i {
                if !l[j][k].is_zero() && !u[k][i].is_zero() {
                    s = s.sub(&l[j][k].mul(&u[k][i]));
                }
            }
            l[j][i] = s.mul(&piv_inv);
        }
    }
    Ok(LuFactors { linv: l, v: u })
}

/// Round trip, triangularity, z-support and homogeneity of an LU factorisation.
pub fn check_lu(
    alg: &AlgebraPresentation,
    a: &ZqMatrix<Rational>,
    lu: &LuFactors<Rational>,
) -> Report {
    let mut rep = Report::new("lu_factorization");
    let r = a.len();
    let order = a[0][0].order();
    rep.push("round trip", zq_mat_mul(&lu.linv, &lu.v) == *a, "Linv·V = I-matrix");
    let mut lower_ok = true;
    let mut upper_ok = true;
    let mut homog_ok = true;
    let mut limit_ok = true;
    for i in 0..r {
        for j in 0..r {
            let le = &lu.linv[i][j];
            let ve = &lu.v[i][j];
            if i == j {
                lower_ok &= *le == ZqSeries::one(order);
            } else if j > i {
                lower_ok &= le.is_zero();
            } else {
                lower_ok &= le.terms().keys().all(|&k| k <= -1);
            }
            if i > j {
                upper_ok &= ve.is_zero();
            } else {
                upper_ok &= ve.terms().keys().all(|&k| k >= 0);
                let expect = alg.half_degree(j) as i64 - alg.half_degree(i) as i64;
                homog_ok &= ve.terms().keys().all(|&k| k == expect);
            }
            let at_zero: Rational = ve.coeff(0).coeff(0);
            let id = if i == j { Rational::one() } else { Rational::zero() };
            let higher_z_at_q0 = ve
                .terms()
                .iter()
                .filter(|(k, _)| **k != 0)
                .all(|(_, f)| f.coeff(0).is_zero());
            limit_ok &= at_zero == id && higher_z_at_q0;
        }
    }
    rep.push("Linv unit lower, only z^{≤-1} off the diagonal", lower_ok, "");
    rep.push("V upper, only z^{≥0}", upper_ok, "");
    rep.push("V column α homogeneous of degree 2|α|", homog_ok, "");
    rep.push("V → Id at q = 0", limit_ok, "");
    rep
}

fn lift_pi(m: &ZqMatrix<Rational>) -> ZqMatrix<UniPoly> {
    m.iter()
        .map(|row| row.iter().map(|e| e.map(UniPoly::from_rational)).collect())
        .collect()
}

/// Matrix of multiplication by e^{−c·Π·H/z} with c = c1_degree.
fn exp_pi_matrix(alg: &AlgebraPresentation, c: i64, order: usize) -> ZqMatrix<UniPoly> {
    let r = alg.rank();
    let mut out = vec![vec![ZqSeries::zero(order); r]; r];
    let h = alg.basis::<Rational>(1);
    let mut hm = alg.one::<Rational>();
    let coef = UniPoly::var().scale(&int(-c));
    let mut cm = UniPoly::one();
    for m in 0..=alg.dim() {
        let mat = alg.mult_matrix(&hm);
        for i in 0..r {
            for j in 0..r {
                if !mat[i][j].is_zero() {
                    let s = cm.clone() * UniPoly::from_rational(&mat[i][j]);
                    out[i][j].add_term(-(m as i64), UniSeries::constant(s, order));
                }
            }
        }
        hm = alg.mul(&hm, &h);
        cm = cm * coef.clone() * UniPoly::from_rational(&Rational::new(1.into(), (m as i64 + 1).into()));
    }
    out
}

/// Checks (γ₁, e^{−Π·c₁(E)/z}γ₂) = (L_eu(q,−z)γ₁, L_loc(h(q),z)γ₂) on all basis pairs.
///
/// L = A^{-1} where A is the lower factor of the I-matrix; the common
/// prefactor e^{tH/z} cancels because multiplications are self-adjoint.
pub fn pairing_identity_check(n: usize, order: usize) -> Result<Report> {
    let data = extract_descendants(n, order)?;
    pairing_identity_check_from(&data)
}

pub fn pairing_identity_check_from(data: &DescendantData) -> Result<Report> {
    let alg = &data.alg;
    let order = data.order();
    let lu_eu = lu_factorize(&i_matrix_from(data, Twist::Eu))?;
    let lu_loc = lu_factorize(&i_matrix_from(data, Twist::Loc))?;
    let s = if data.c1_degree % 2 == 0 { int(1) } else { int(-1) };
    let a_eu_negz: ZqMatrix<Rational> = lu_eu
        .linv
        .iter()
        .map(|row| row.iter().map(|e| e.negate_z()).collect())
        .collect();
    let a_loc_h: ZqMatrix<Rational> = lu_loc
        .linv
        .iter()
        .map(|row| row.iter().map(|e| e.rescale_q(&s)).collect())
        .collect();
    let l_eu = zq_transpose(&lift_pi(&zq_unit_lower_inverse(&a_eu_negz)?));
    let l_loc = lift_pi(&zq_unit_lower_inverse(&a_loc_h)?);
    let p: Vec<Vec<UniPoly>> = alg
        .pairing_matrix()
        .iter()
        .map(|r| r.iter().map(UniPoly::from_rational).collect())
        .collect();
    let p = zq_constant(&p, order);
    let e = exp_pi_matrix(alg, data.c1_degree, order);
    let lhs = zq_mat_mul(&p, &e);
    let rhs = zq_mat_mul(&zq_mat_mul(&zq_mat_mul(&l_eu, &p), &l_loc), &e);
    let mut rep = Report::new("pairing_identity");
    let lhs_const = lhs
        .iter()
        .flatten()
        .all(|x| x.terms().values().all(|f| f.coeffs()[1..].iter().all(|c| c.is_zero())));
    rep.push("left side q-independent", lhs_const, "");
    let mut mismatches = Vec::new();
    for i in 0..alg.rank() {
        for j in 0..alg.rank() {
            let diff = lhs[i][j].sub(&rhs[i][j]);
            for (zp, f) in diff.terms() {
                if let Some(d) = f.coeffs().iter().position(|c| !c.is_zero()) {
                    mismatches.push(format!("(T{i}, T{j}) at z^{zp}, q^{d}"));
                }
            }
        }
    }
    rep.push(
        format!("pairing identity to q^{order}"),
        mismatches.is_empty(),
        mismatches.join("; "),
    );
    let corner = rhs[0][alg.rank() - 1] == ZqSeries::one(order)
        && lhs[0][alg.rank() - 1] == ZqSeries::one(order);
    rep.push("(1, H^n) pairs to 1 on both sides", corner, "");
    Ok(rep)
}

/// Checks that the I-functions reduce to the basis at q = 0.
pub fn large_radius_check(data: &DescendantData) -> bool {
    [Twist::Eu, Twist::Loc].iter().all(|&k| {
        (0..data.alg.rank()).all(|a| {
            let i = i_function_from(data, k, a);
            *i.slot(0) == ZPoly::monomial(data.alg.basis::<Rational>(a), 0)
        })
    })
}

pub fn element_to_strings(c: &CohElement<Rational>) -> Vec<String> {
    c.coeffs.iter().map(format_rational).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use crate::series::factorial_rational;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&k| int(k)).collect()
    }

    #[test]
    fn g0_from_i_eu() {
        let i = i_function(Twist::Eu, 4, 0, 4).unwrap();
        let g0 = i.component(0, 0);
        for d in 0..=4usize {
            let oracle = factorial_rational(5 * d) / factorial_rational(d).pow(5);
            assert_eq!(g0.coeff(d), oracle);
        }
    }

    #[test]
    fn g2_from_i_loc() {
        let i = i_function(Twist::Loc, 4, 0, 4).unwrap();
        let g2 = i.component(1, -1);
        for d in 1..=4usize {
            let sign = if d % 2 == 0 { int(1) } else { int(-1) };
            let oracle =
                int(5) * sign * factorial_rational(5 * d - 1) / factorial_rational(d).pow(5);
            assert_eq!(g2.coeff(d), oracle);
        }
        assert_eq!(g2.coeff(1), int(-120));
        assert_eq!(i.component(0, 0), UniSeries::one(4));
    }

    #[test]
    fn loc_degree_zero_is_basis() {
        let data = extract_descendants(4, 2).unwrap();
        assert!(large_radius_check(&data));
    }

    #[test]
    fn quintic_mirror_maps() {
        let mm = mirror_maps(4, 6).unwrap();
        assert_eq!(&mm.m_eu.coeffs()[..6], &ints(&[0, 1, 770, 1014275, 1703916750, 3286569025625])[..]);
        assert_eq!(&mm.m_loc.coeffs()[..6], &ints(&[0, 1, -120, 63900, -63148000, 85136103750])[..]);
        assert_eq!(&mm.f_bar.coeffs()[..6], &ints(&[0, 1, -650, 50625, -53770000, -49529975000])[..]);
        assert_eq!(mm.n_table[0], int(-650));
        assert_eq!(mm.n_table[1], int(-160625));
        assert_eq!(mm.n_table[2], rat(-337216250, 3));
        assert!(mm.compatibility_holds(&int(-1)));
    }

    #[test]
    fn g1_closed_form() {
        let mm = mirror_maps(4, 4).unwrap();
        // g1/g0 with g1 = Σ (5d)!/(d!)^5 · 5 Σ_{m=d+1}^{5d} 1/m q^d
        let g0 = UniSeries::new(
            (0..=4usize)
                .map(|d| factorial_rational(5 * d) / factorial_rational(d).pow(5))
                .collect(),
        );
        let g1 = UniSeries::new(
            (0..=4usize)
                .map(|d| {
                    let h: Rational = (d + 1..=5 * d).map(|m| rat(1, m as i64)).sum();
                    factorial_rational(5 * d) / factorial_rational(d).pow(5) * int(5) * h
                })
                .collect(),
        );
        assert_eq!(mm.mir_eu, g1.mul(&g0.inverse().unwrap()));
    }

    #[test]
    fn lu_on_quintic() {
        let data = extract_descendants(4, 4).unwrap();
        for kind in [Twist::Eu, Twist::Loc] {
            let cols = i_matrix_from(&data, kind);
            let a = to_zq_matrix(&cols);
            let lu = lu_factorize(&cols).unwrap();
            let rep = check_lu(&data.alg, &a, &lu);
            assert!(rep.passed, "{rep:?}");
        }
        let lu = lu_factorize(&i_matrix_from(&data, Twist::Eu)).unwrap();
        let g0 = i_function_from(&data, Twist::Eu, 0).component(0, 0);
        assert_eq!(lu.v[0][0], ZqSeries::monomial(g0, 0));
    }

    #[test]
    fn pairing_identity_small() {
        let rep = pairing_identity_check(4, 3).unwrap();
        assert!(rep.passed, "{rep:?}");
        let rep = pairing_identity_check(3, 3).unwrap();
        assert!(rep.passed, "{rep:?}");
    }

    #[test]
    fn non_unit_pivot_rejected() {
        let o = 2;
        let mut m = vec![vec![ZqSeries::<Rational>::zero(o); 2]; 2];
        m[0][0] = ZqSeries::monomial(UniSeries::var(o), 0);
        m[1][1] = ZqSeries::one(o);
        assert!(matches!(lu_zq(&m), Err(Error::NotUnit(_))));
    }
}
