//! Small J-function of Pⁿ, inverse fundamental solution columns and the
//! two-point descendant data N_{α,d}(z).
//!
//! All series are stored with the prefactor e^{tH/z} removed, so slot d of a
//! column is a finite Laurent polynomial in z.

use serde::Deserialize;

use crate::coh_algebra::{AlgebraPresentation, CohElement};
use crate::error::{Error, Result};
use crate::scalar::{format_rational, int, parse_rational, Rational};
use crate::series::{CohSeries, ZPoly};

/// (H + kz)^{-1} = Σ_j (−1)^j H^j (kz)^{−j−1}.
fn inv_linear(alg: &AlgebraPresentation, k: i64) -> ZPoly<Rational> {
    let mut p = ZPoly::zero(alg.rank());
    let h = alg.basis::<Rational>(1);
    let mut hj = alg.one::<Rational>();
    let kr = int(k);
    let mut kpow = kr.clone();
    for j in 0..=alg.dim() {
        let sign = if j % 2 == 0 { int(1) } else { int(-1) };
        p.add_term(-(j as i64) - 1, hj.scale(&(sign / kpow.clone())));
        hj = alg.mul(&hj, &h);
        kpow *= kr.clone();
    }
    p
}

/// H + kz.
fn linear(alg: &AlgebraPresentation, h_coeff: i64, k: i64) -> ZPoly<Rational> {
    let mut p = ZPoly::monomial(alg.basis::<Rational>(1).scale(&int(h_coeff)), 0);
    p.add_term(1, alg.one::<Rational>().scale(&int(k)));
    p
}

pub(crate) fn pn(n: usize) -> Result<AlgebraPresentation> {
    AlgebraPresentation::projective_space(n)
}

/// Stripped J-function of Pⁿ: slot d is Π_{k=1}^d (H+kz)^{−(n+1)}.
pub fn j_function(n: usize, order: usize) -> Result<CohSeries<Rational>> {
    let alg = pn(n)?;
    Ok(j_function_in(&alg, order))
}

pub(crate) fn j_function_in(alg: &AlgebraPresentation, order: usize) -> CohSeries<Rational> {
    let n = alg.dim();
    let mut slots = Vec::with_capacity(order + 1);
    let mut cur = ZPoly::monomial(alg.one::<Rational>(), 0);
    slots.push(cur.clone());
    for d in 1..=order {
        let f = inv_linear(alg, d as i64);
        for _ in 0..=n {
            cur = cur.mul(alg, &f);
        }
        slots.push(cur.clone());
    }
    CohSeries::from_slots(alg.rank(), slots).expect("ranks agree")
}

/// Column k: (z∂_t)^k applied to e^{tH/z}J, stripped, so slot d is (H+dz)^k J_d.
pub fn fundsol_columns(n: usize, order: usize) -> Result<Vec<CohSeries<Rational>>> {
    let alg = pn(n)?;
    Ok(fundsol_columns_in(&alg, order))
}

pub(crate) fn fundsol_columns_in(
    alg: &AlgebraPresentation,
    order: usize,
) -> Vec<CohSeries<Rational>> {
    let j = j_function_in(alg, order);
    let mut cols = vec![j.clone()];
    for _ in 1..=alg.dim() {
        let prev = cols.last().expect("nonempty");
        let slots = (0..=order)
            .map(|d| prev.slot(d).mul(alg, &linear(alg, 1, d as i64)))
            .collect();
        cols.push(CohSeries::from_slots(alg.rank(), slots).expect("ranks agree"));
    }
    cols
}

/// N_{α,d}(z) for 0 ≤ α ≤ n and 0 ≤ d ≤ order, plus values at z = 1.
#[derive(Clone, Debug, PartialEq)]
pub struct DescendantData {
    pub alg: AlgebraPresentation,
    /// ρ(d) = c1_degree·d.
    pub c1_degree: i64,
    pub table: Vec<Vec<ZPoly<Rational>>>,
    pub at_one: Vec<Vec<CohElement<Rational>>>,
}

impl DescendantData {
    pub fn order(&self) -> usize {
        self.table[0].len() - 1
    }

    pub fn n(&self) -> usize {
        self.alg.dim()
    }

    pub fn rho(&self) -> CohElement<Rational> {
        self.alg.basis::<Rational>(1).scale(&int(self.c1_degree))
    }

    /// Each component H^k of N_{α,d}(z) must be a single z^{|α|−k−ρ(d)} monomial.
    pub fn check_homogeneity(&self) -> Result<()> {
        for (a, row) in self.table.iter().enumerate() {
            for (d, p) in row.iter().enumerate() {
                for (j, c) in p.terms() {
                    for (k, v) in c.coeffs.iter().enumerate() {
                        if num_traits::Zero::is_zero(v) {
                            continue;
                        }
                        let expect = self.alg.half_degree(a) as i64
                            - self.alg.half_degree(k) as i64
                            - self.c1_degree * d as i64;
                        if *j != expect {
                            return Err(Error::Consistency(format!(
                                "N[{a}][{d}] has component {k} at z^{j}, expected z^{expect}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Inverse of [`DescendantData::from_json`].
    pub fn to_json(&self) -> String {
        let table: Vec<Vec<Vec<(i64, Vec<String>)>>> = self
            .table
            .iter()
            .map(|row| {
                row.iter()
                    .map(|p| {
                        p.terms()
                            .iter()
                            .map(|(j, c)| (*j, c.coeffs.iter().map(format_rational).collect()))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        serde_json::json!({"c1_degree": self.c1_degree, "table": table}).to_string()
    }

    /// Imports N_{α,d}(z) for a user algebra. Schema:
    /// `{"c1_degree": int, "table": [[[[j, ["p/q", …]], …] per d] per α]}`.
    pub fn from_json(alg: AlgebraPresentation, text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Raw {
            c1_degree: i64,
            table: Vec<Vec<Vec<(i64, Vec<String>)>>>,
        }
        let raw: Raw = serde_json::from_str(text).map_err(|e| Error::Input(e.to_string()))?;
        if raw.table.len() != alg.rank() || raw.table.is_empty() {
            return Err(Error::Input("table needs one row per basis element".into()));
        }
        let order = raw.table[0].len();
        let mut table = Vec::new();
        for row in raw.table {
            if row.len() != order || order == 0 {
                return Err(Error::Input("all rows need the same number of degrees".into()));
            }
            let mut prow = Vec::new();
            for slot in row {
                let mut p = ZPoly::zero(alg.rank());
                for (j, cs) in slot {
                    if cs.len() != alg.rank() {
                        return Err(Error::RankMismatch {
                            expected: alg.rank(),
                            got: cs.len(),
                        });
                    }
                    let coeffs = cs
                        .iter()
                        .map(|s| {
                            parse_rational(s)
                                .ok_or_else(|| Error::Input(format!("bad rational {s:?}")))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    p.add_term(j, CohElement::new(coeffs));
                }
                prow.push(p);
            }
            table.push(prow);
        }
        let at_one = table
            .iter()
            .map(|r: &Vec<ZPoly<Rational>>| r.iter().map(|p| p.eval_one()).collect())
            .collect();
        let data = DescendantData {
            alg,
            c1_degree: raw.c1_degree,
            table,
            at_one,
        };
        data.check_homogeneity()?;
        Ok(data)
    }
}

/// Reads N_{α,d}(z) off the stripped fundamental-solution columns of Pⁿ.
pub fn extract_descendants(n: usize, order: usize) -> Result<DescendantData> {
    let alg = pn(n)?;
    let cols = fundsol_columns_in(&alg, order);
    let table: Vec<Vec<ZPoly<Rational>>> = cols
        .iter()
        .map(|c| c.slots().to_vec())
        .collect();
    let at_one = table
        .iter()
        .map(|r| r.iter().map(|p| p.eval_one()).collect())
        .collect();
    let data = DescendantData {
        alg,
        c1_degree: n as i64 + 1,
        table,
        at_one,
    };
    data.check_homogeneity()?;
    Ok(data)
}
