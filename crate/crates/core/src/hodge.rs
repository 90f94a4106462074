//! Hodge filtrations on the second structure connections ∇̌^(∓(n+1)/2).
//!
//! Spans are computed over the field of rational functions in (q, x): a
//! vector num/δ^k and its numerator span the same line, so membership and
//! orthogonality only ever touch polynomial numerators.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::givental::DescendantData;
use crate::laplace::{i_eu_section, kcheck_columns, TwistedSection};
use crate::ratfn::{columns_to_matrix, in_span, kernel, poly_mat_mul, poly_transpose, same_span, span_rank, QxPoly};
use crate::report::Report;
use crate::scalar::{format_rational, int, rat, RatFn1, Rational};
use crate::second_structure::{second_metric, ssc_connection, DenVec, Direction, SscConnection};

type Vector = Vec<QxPoly<Rational>>;

#[derive(Clone, Debug, PartialEq)]
pub struct FiltrationSpan {
    pub p: usize,
    pub generators: Vec<DenVec<Rational>>,
}

impl FiltrationSpan {
    pub fn numerators(&self) -> Vec<Vector> {
        self.generators.iter().map(|g| g.num.clone()).collect()
    }

    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn contains(&self, v: &DenVec<Rational>) -> Result<bool> {
        if self.generators.is_empty() {
            return Ok(v.num.iter().all(|p| p.is_zero()));
        }
        in_span(&self.numerators(), &v.num)
    }
}

fn loc_sigma(n: usize) -> Rational {
    rat(-(n as i64 + 1), 2)
}

fn eu_sigma(n: usize) -> Rational {
    rat(n as i64 + 1, 2)
}

/// Keeps the generators that raise the rank, in order.
fn independent(cands: Vec<DenVec<Rational>>) -> Result<Vec<DenVec<Rational>>> {
    let mut kept: Vec<DenVec<Rational>> = Vec::new();
    let mut nums: Vec<Vector> = Vec::new();
    for c in cands {
        if c.num.iter().all(|p| p.is_zero()) {
            continue;
        }
        nums.push(c.num.clone());
        if span_rank(&nums)? == nums.len() {
            kept.push(c);
        } else {
            nums.pop();
        }
    }
    Ok(kept)
}

/// F̌^p_loc = ⟨(∇̌_x)^k T_α : |α| ≤ k ≤ n−p⟩ for p = 0..=n.
pub fn floc_filtration(n: usize) -> Result<Vec<FiltrationSpan>> {
    let conn = ssc_connection(&loc_sigma(n), n)?;
    let r = n + 1;
    // iter[k][a] = (∇̌_x)^k T_a
    let mut iter: Vec<Vec<DenVec<Rational>>> = vec![(0..r).map(|a| DenVec::basis(r, a)).collect()];
    for k in 1..=n {
        let next = iter[k - 1].iter().map(|v| conn.covariant(Direction::X, v)).collect();
        iter.push(next);
    }
    let mut out = Vec::with_capacity(r);
    for p in 0..=n {
        let mut cands = Vec::new();
        for (k, row) in iter.iter().enumerate().take(n - p + 1) {
            cands.extend(row.iter().take(k + 1).cloned());
        }
        let generators = independent(cands)?;
        if generators.len() != n + 1 - p {
            return Err(Error::Input(format!(
                "F^{p}_loc has rank {} instead of {}",
                generators.len(),
                n + 1 - p
            )));
        }
        out.push(FiltrationSpan { p, generators });
    }
    Ok(out)
}

/// Vectors v with ǧ(v, w) = 0 for all w in the span.
fn left_orthogonal(g: &[Vector], span: &FiltrationSpan) -> Result<Vec<DenVec<Rational>>> {
    let r = g.len();
    if span.generators.is_empty() {
        return Ok((0..r).map(|a| DenVec::basis(r, a)).collect());
    }
    let gw = poly_mat_mul(&g.to_vec(), &columns_to_matrix(&span.numerators()));
    wrap_kernel(kernel(&poly_transpose(&gw))?)
}

/// Vectors w with ǧ(v, w) = 0 for all v in the span.
fn right_orthogonal(g: &[Vector], span: &FiltrationSpan) -> Result<Vec<DenVec<Rational>>> {
    let r = g.len();
    if span.generators.is_empty() {
        return Ok((0..r).map(|a| DenVec::basis(r, a)).collect());
    }
    let vg = poly_mat_mul(&poly_transpose(&columns_to_matrix(&span.numerators())), &g.to_vec());
    wrap_kernel(kernel(&vg)?)
}

fn wrap_kernel(vs: Vec<Vector>) -> Result<Vec<DenVec<Rational>>> {
    Ok(vs.into_iter().map(|num| DenVec { num, pow: 0 }).collect())
}

/// F̌^p_eu = ǧ-orthogonal of F̌^{n−p+1}_loc for p = 0..=n.
pub fn feu_filtration(n: usize, loc: &[FiltrationSpan]) -> Result<Vec<FiltrationSpan>> {
    let g = second_metric(n)?.num;
    let empty = FiltrationSpan {
        p: n + 1,
        generators: Vec::new(),
    };
    (0..=n)
        .map(|p| {
            let other = if p == 0 { &empty } else { &loc[n - p + 1] };
            let generators = left_orthogonal(&g, other)?;
            if generators.len() != n + 1 - p {
                return Err(Error::Input(format!("F^{p}_eu has rank {}", generators.len())));
            }
            Ok(FiltrationSpan { p, generators })
        })
        .collect()
}

/// Both towers, loc first.
pub fn filtrations(n: usize) -> Result<(Vec<FiltrationSpan>, Vec<FiltrationSpan>)> {
    let loc = floc_filtration(n)?;
    let eu = feu_filtration(n, &loc)?;
    Ok((loc, eu))
}

/// Lowest-q slice of p, as a polynomial in x.
fn q_slice(p: &QxPoly<Rational>, m: i32) -> QxPoly<Rational> {
    let mut out = QxPoly::zero();
    for ((qe, xe), c) in p.terms() {
        if *qe == m {
            out.add_term(0, *xe, c.clone());
        }
    }
    out
}

/// F̌^n_eu generator scaled to unit T₀-coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizedGenerator {
    pub raw: Vec<QxPoly<Rational>>,
    /// Entries at q = 0 as rational functions of x.
    pub at_q0: Vec<RatFn1>,
    pub q_independent: bool,
}

pub fn ttilde(eu: &[FiltrationSpan]) -> Result<NormalizedGenerator> {
    let top = eu.last().ok_or_else(|| Error::Input("empty filtration".into()))?;
    let g = top
        .generators
        .first()
        .ok_or_else(|| Error::Input("top piece is zero".into()))?
        .num
        .clone();
    if g[0].is_zero() {
        return Err(Error::Input("T_0-coefficient vanishes".into()));
    }
    let m = g[0].min_exponents().0;
    let mut at_q0 = Vec::with_capacity(g.len());
    let g0 = q_slice(&g[0], m).q_zero_ratfn();
    for p in &g {
        if !p.is_zero() && p.min_exponents().0 < m {
            return Err(Error::Input("normalized generator has a pole at q = 0".into()));
        }
        at_q0.push(q_slice(p, m).q_zero_ratfn().div(&g0));
    }
    let q_independent = g.iter().all(|p| p.mul(&q_slice(&g[0], m).shift(m, 0)) == q_slice(p, m).shift(m, 0).mul(&g[0]));
    Ok(NormalizedGenerator {
        raw: g,
        at_q0,
        q_independent,
    })
}

/// (∇̌_x)^k applied to a q⁰ vector, using A_x at q = 0.
pub fn q0_iterates(conn: &SscConnection<Rational>, v: &[RatFn1], count: usize) -> Vec<Vec<RatFn1>> {
    let den = conn.a_x.den.q_zero_ratfn();
    let a: Vec<Vec<RatFn1>> = conn
        .a_x
        .num
        .iter()
        .map(|row| row.iter().map(|p| p.q_zero_ratfn().div(&den)).collect())
        .collect();
    let mut out = vec![v.to_vec()];
    for _ in 0..count {
        let cur = out.last().expect("nonempty");
        let next = (0..cur.len())
            .map(|i| {
                a[i].iter()
                    .zip(cur)
                    .fold(cur[i].derivative(), |acc, (aij, vj)| acc.add(&aij.mul(vj)))
            })
            .collect();
        out.push(next);
    }
    out
}

/// Published q⁰ coefficients: row k lists c_α with (∇̌_x)^k T̃₀ = Σ c_α x^{−α−k} T_α.
pub fn quintic_reference_iterates() -> Vec<Vec<Rational>> {
    vec![
        vec![int(1), rat(-125, 3), rat(2125, 3), int(-5625), int(15000)],
        vec![int(-5), rat(565, 3), rat(-8975, 3), int(22875), int(-60000)],
        vec![int(30), int(-1030), int(15500), int(-115500), int(300000)],
        vec![int(-210), int(6610), int(-95300), int(697500), int(-1800000)],
        vec![int(1680), int(-48680), int(679000), int(-4905000), int(12600000)],
    ]
}

fn format_ratfn(f: &RatFn1) -> String {
    match f.as_monomial() {
        Some((c, k)) => format!("{}*x^{}", format_rational(&c), k),
        None => format!("({})/({})", f.num, f.den),
    }
}

pub fn format_vector(v: &[RatFn1]) -> String {
    v.iter()
        .enumerate()
        .map(|(a, f)| format!("[{}]T{}", format_ratfn(f), a))
        .collect::<Vec<_>>()
        .join(" + ")
}

/// T̃₀ and its ∇̌^((n+1)/2)_x iterates at q⁰.
pub fn ttilde_iterates(n: usize, eu: &[FiltrationSpan]) -> Result<(NormalizedGenerator, Vec<Vec<RatFn1>>)> {
    let t = ttilde(eu)?;
    let conn = ssc_connection(&eu_sigma(n), n)?;
    let its = q0_iterates(&conn, &t.at_q0, n);
    Ok((t, its))
}

/// Compares the q⁰ iterates with the published lists (n = 4 only).
pub fn quintic_basis_report(its: &[Vec<RatFn1>], q_independent: bool) -> Report {
    let mut rep = Report::new("explicit F_eu basis");
    for (k, (row, want)) in its.iter().zip(quintic_reference_iterates()).enumerate() {
        let ok = row.len() == want.len()
            && row.iter().zip(&want).enumerate().all(|(a, (f, c))| {
                *f == RatFn1::monomial(c.clone(), -(a as i64) - k as i64)
            });
        rep.push(format!("Dx^{k} T~0"), ok, format_vector(row));
    }
    rep.push(
        "T~0 q-dependence",
        true,
        if q_independent {
            "entries are q-independent"
        } else {
            "entries depend on q; compared at q^0"
        },
    );
    rep
}

/// ∇̌_t and ∇̌_x map F̌^p into F̌^{p−1}.
pub fn transversality(conn: &SscConnection<Rational>, tower: &[FiltrationSpan]) -> Result<Vec<(usize, Direction, bool)>> {
    let mut out = Vec::new();
    for p in 1..tower.len() {
        for dir in [Direction::T, Direction::X] {
            let mut ok = true;
            for g in &tower[p].generators {
                let base = DenVec {
                    num: g.num.clone(),
                    pow: 0,
                };
                if !tower[p - 1].contains(&conn.covariant(dir, &base))? {
                    ok = false;
                    break;
                }
            }
            out.push((p, dir, ok));
        }
    }
    Ok(out)
}

pub fn hodge_report(n: usize) -> Result<Report> {
    let (loc, eu) = filtrations(n)?;
    let mut rep = Report::new(format!("hodge filtrations on P^{n}"));
    let r = n + 1;
    for p in 0..=n {
        rep.push(
            format!("dim F^{p}_loc + dim F^{}_eu", n - p + 1),
            loc[p].dim() + if p == 0 { 0 } else { eu[n - p + 1].dim() } == r,
            format!("{} + {}", loc[p].dim(), if p == 0 { 0 } else { eu[n - p + 1].dim() }),
        );
        if p > 0 {
            let nested = same_span(
                &[loc[p].numerators(), loc[p - 1].numerators()].concat(),
                &loc[p - 1].numerators(),
            )? && same_span(
                &[eu[p].numerators(), eu[p - 1].numerators()].concat(),
                &eu[p - 1].numerators(),
            )?;
            rep.push(format!("F^{p} inside F^{}", p - 1), nested, String::new());
        }
    }
    // F̌^p_loc as the span of T₀-iterates
    let t0 = DenVec::<Rational>::basis(r, 0);
    let loc_conn = ssc_connection(&loc_sigma(n), n)?;
    let eu_conn = ssc_connection(&eu_sigma(n), n)?;
    let chain = |conn: &SscConnection<Rational>, v: DenVec<Rational>| {
        let mut vs = vec![v];
        for _ in 0..n {
            let next = conn.covariant(Direction::X, vs.last().expect("nonempty"));
            vs.push(next);
        }
        vs
    };
    let t0_chain = chain(&loc_conn, t0);
    let tt = ttilde(&eu)?;
    let tt_chain = chain(&eu_conn, DenVec { num: tt.raw.clone(), pow: 0 });
    for p in 1..=n {
        let k = n - p + 1;
        let lhs: Vec<Vector> = t0_chain[..k].iter().map(|v| v.num.clone()).collect();
        rep.push(format!("F^{p}_loc = <Dx^j T0>"), same_span(&lhs, &loc[p].numerators())?, String::new());
        let lhs: Vec<Vector> = tt_chain[..k].iter().map(|v| v.num.clone()).collect();
        rep.push(format!("F^{p}_eu = <Dx^j T~0>"), same_span(&lhs, &eu[p].numerators())?, String::new());
    }
    for (name, conn, tower) in [("loc", &loc_conn, &loc), ("eu", &eu_conn, &eu)] {
        for (p, dir, ok) in transversality(conn, tower)? {
            rep.push(format!("Griffiths {name} F^{p} along {dir:?}"), ok, String::new());
        }
    }
    let g = second_metric(n)?.num;
    for p in 1..=n {
        let back = right_orthogonal(&g, &eu[p])?;
        let nums: Vec<Vector> = back.iter().map(|v| v.num.clone()).collect();
        rep.push(
            format!("(F^{p}_eu)^perp = F^{}_loc", n - p + 1),
            same_span(&nums, &loc[n - p + 1].numerators())?,
            String::new(),
        );
    }
    if n == 4 {
        let its = q0_iterates(&eu_conn, &tt.at_q0, n);
        rep.merge(quintic_basis_report(&its, tt.q_independent));
    }
    Ok(rep)
}

/// Σ_α (T̃₀)_α Ǩ^((n+1)/2,1)_α against c·x^{−n−1}·I₀^eu(t − ρ log x, 1); returns c.
pub fn kcheck_ttilde_constant(data: &DescendantData, order: u32) -> Result<(Rational, Report)> {
    let alg = &data.alg;
    let n = alg.dim();
    let (_, eu) = filtrations(n)?;
    let t = ttilde(&eu)?;
    let cols = kcheck_columns(data, &eu_sigma(n), &Rational::one(), order)?;
    let mut lhs = TwistedSection::zero(alg.rank(), cols[0].t_class().clone(), order);
    for (a, f) in t.at_q0.iter().enumerate() {
        let (c, k) = f
            .as_monomial()
            .ok_or_else(|| Error::Input(format!("T~0 entry {a} is not a monomial in x")))?;
        if c.is_zero() {
            continue;
        }
        let k = i32::try_from(k).map_err(|_| Error::Input("exponent overflow".into()))?;
        lhs = lhs.add(&cols[a].mul_qx(&QxPoly::monomial(c, 0, k))?)?;
    }
    let rhs = i_eu_section(data, order)?.mul_qx(&QxPoly::monomial(Rational::one(), 0, -(n as i32)))?;
    let c = leading_ratio(&lhs, &rhs)?;
    let mut rep = Report::new("K-check of T~0");
    let diff = lhs.sub(&rhs.scale(&c))?;
    rep.push(
        format!("proportional up to q^{order}"),
        diff.is_zero(),
        diff.leading_term().unwrap_or_default(),
    );
    if !t.q_independent {
        rep.push("T~0 q-independent", false, "K-check uses the q^0 generator");
    }
    Ok((c, rep))
}

/// c with lhs = c·rhs at the first nonzero coefficient of rhs.
fn leading_ratio(lhs: &TwistedSection<Rational>, rhs: &TwistedSection<Rational>) -> Result<Rational> {
    for (key, r) in rhs.terms() {
        if let Some(i) = r.coeffs.iter().position(|c| !c.is_zero()) {
            let l = lhs.coeff(key.0, &key.1, key.2);
            return Ok(l.coeffs[i].clone() / r.coeffs[i].clone());
        }
    }
    Err(Error::Input("right side vanishes".into()))
}

/// Verifies the constant equals `expected` and that `expected − 1` is rejected.
pub fn kcheck_ttilde(data: &DescendantData, order: u32, expected: &Rational) -> Result<Report> {
    let (c, mut rep) = kcheck_ttilde_constant(data, order)?;
    rep.push("constant", &c == expected, format!("computed {}", format_rational(&c)));
    let alg = &data.alg;
    let n = alg.dim();
    // negative control at q⁰ with the wrong constant
    let (_, eu) = filtrations(n)?;
    let t = ttilde(&eu)?;
    let cols = kcheck_columns(data, &eu_sigma(n), &Rational::one(), 0)?;
    let mut lhs = TwistedSection::zero(alg.rank(), cols[0].t_class().clone(), 0);
    for (a, f) in t.at_q0.iter().enumerate() {
        if let Some((cf, k)) = f.as_monomial() {
            lhs = lhs.add(&cols[a].mul_qx(&QxPoly::monomial(cf, 0, k as i32))?)?;
        }
    }
    let rhs = i_eu_section(data, 0)?.mul_qx(&QxPoly::monomial(Rational::one(), 0, -(n as i32)))?;
    let wrong = expected.clone() - Rational::one();
    let bad = lhs.sub(&rhs.scale(&wrong))?;
    rep.push(
        format!("constant {} rejected at q^0", format_rational(&wrong)),
        !bad.is_zero(),
        String::new(),
    );
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loc_tower_dimensions() {
        let loc = floc_filtration(4).unwrap();
        let dims: Vec<usize> = loc.iter().map(|s| s.dim()).collect();
        assert_eq!(dims, vec![5, 4, 3, 2, 1]);
        assert_eq!(loc[4].generators[0], DenVec::basis(5, 0));
    }

    #[test]
    fn quintic_generator_matches_published_basis() {
        let (_, eu) = filtrations(4).unwrap();
        let (t, its) = ttilde_iterates(4, &eu).unwrap();
        let rep = quintic_basis_report(&its, t.q_independent);
        assert!(rep.passed, "{rep:#?}");
        assert_eq!(
            t.at_q0[1],
            RatFn1::monomial(rat(-125, 3), -1)
        );
    }

    #[test]
    fn hodge_invariants_small_n() {
        for n in [1usize, 2] {
            let rep = hodge_report(n).unwrap();
            assert!(rep.passed, "n = {n}: {rep:#?}");
        }
    }

    #[test]
    fn quintic_full_report() {
        let rep = hodge_report(4).unwrap();
        assert!(rep.passed, "{:#?}", rep.failures().collect::<Vec<_>>());
    }

    #[test]
    fn kcheck_constant_is_computed() {
        let data = crate::givental::extract_descendants(4, 3).unwrap();
        let (c, rep) = kcheck_ttilde_constant(&data, 3).unwrap();
        assert_eq!(c, int(24));
        assert!(rep.passed, "{rep:#?}");
        let rep = kcheck_ttilde(&data, 3, &int(24)).unwrap();
        assert!(rep.passed, "{rep:#?}");
        let wrong = kcheck_ttilde(&data, 3, &int(23)).unwrap();
        assert!(!wrong.passed);
    }
}
