use std::collections::BTreeMap;

use qserre::givental::{extract_descendants, DescendantData};
use qserre::golden;
use qserre::hodge::{filtrations, format_vector, kcheck_ttilde, ttilde_iterates};
use qserre::lefschetz::{mirror_maps_from, MirrorMapPair};
use qserre::ratfn::{format_qx, QxPoly, RatMat};
use qserre::scalar::{format_rational, int, rat, Rational};
use qserre::second_structure::{second_metric, ssc_connection};
use qserre::suites::{self, mirror_suite_from};
use qserre::weyl::{build_twist_ops, describe_sigma_operator, format_op, TwistOperators};
use qserre::{AlgebraPresentation, Error, QSeries};
use serde_json::{json, Value};

use crate::output::{Document, Section};

pub fn format_series(s: &QSeries) -> String {
    let parts: Vec<String> = (0..=s.order())
        .filter(|&k| !s.coeff(k).is_zero_rational())
        .map(|k| match k {
            0 => format_rational(&s.coeff(k)),
            1 => format!("{}*q", format_rational(&s.coeff(k))),
            _ => format!("{}*q^{k}", format_rational(&s.coeff(k))),
        })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        format!("{} + O(q^{})", parts.join(" + "), s.order() + 1)
    }
}

trait IsZeroRational {
    fn is_zero_rational(&self) -> bool;
}

impl IsZeroRational for Rational {
    fn is_zero_rational(&self) -> bool {
        *self == int(0)
    }
}

fn describe_reduced(n: usize, shifts: std::ops::RangeInclusive<i64>) -> String {
    let m = n as i64 + 1;
    let factors: String = shifts.rev().map(|k| format!("({m}Dt+{k})")).collect();
    format!("x(xDt)^{n} - {m}e^t{factors}")
}

pub fn operator_section(ops: &TwistOperators) -> Section {
    let n = ops.n;
    let m = n as i64 + 1;
    let mut s = Section::new("operators");
    s.add("D_eu", describe_sigma_operator(n, &rat(m, 2)));
    s.add("D_loc", describe_sigma_operator(n, &rat(-m, 2)));
    s.add("P_eu", describe_reduced(n, m + 1..=2 * m - 1));
    s.add("P_loc", describe_reduced(n, 1..=m - 1));
    s.add("D_eu normal form", format_op(&ops.d_eu));
    s.add("D_loc normal form", format_op(&ops.d_loc));
    s.add("P_eu normal form", format_op(&ops.p_eu));
    s.add("P_loc normal form", format_op(&ops.p_loc));
    s
}

pub fn operators(doc: &mut Document) {
    let ops = build_twist_ops(doc.config.n);
    doc.sections.push(operator_section(&ops));
    doc.report(ops.factorization_report());
    doc.report(ops.intertwiner_report());
}

fn mirror_sections(doc: &mut Document, mm: &MirrorMapPair) {
    let mut s = Section::new("mirror maps");
    s.add("M_eu", format_series(&mm.m_eu));
    s.add("M_loc", format_series(&mm.m_loc));
    s.add("F", format_series(&mm.f_bar));
    doc.sections.push(s);
    let mut t = Section::new("gromov-witten invariants");
    for (d, v) in mm.n_table.iter().enumerate() {
        t.add(format!("{}", d + 1), format_rational(v));
    }
    if mm.n_table.len() < golden::GW_TABLE.len() {
        t.add(
            "truncated",
            format!(
                "order {} yields N_d for d <= {}; the log/compose step uses one order",
                mm.order,
                mm.n_table.len()
            ),
        );
    }
    doc.sections.push(t);
}

pub fn mirror_maps(doc: &mut Document, imported: Option<DescendantData>) -> Result<(), Error> {
    let imported_run = imported.is_some();
    let data = match imported {
        Some(d) => d,
        None => extract_descendants(doc.config.n, doc.config.order)?,
    };
    let mm = mirror_maps_from(&data)?;
    mirror_sections(doc, &mm);
    let mut cfg = doc.config.clone();
    if imported_run {
        // no reference values exist for user algebras
        cfg.n = 0;
    }
    doc.report(mirror_suite_from(&cfg, &mm));
    Ok(())
}

pub fn verify(doc: &mut Document) -> Result<(), Error> {
    for r in suites::run(&doc.config)? {
        doc.report(r);
    }
    Ok(())
}

pub fn hodge(doc: &mut Document) -> Result<(), Error> {
    let n = doc.config.n;
    let (loc, eu) = filtrations(n)?;
    let mut dims = Section::new("filtration dimensions");
    for p in 0..=n {
        dims.add(format!("F^{p}_loc"), loc[p].dim().to_string());
        dims.add(format!("F^{p}_eu"), eu[p].dim().to_string());
    }
    doc.sections.push(dims);
    let (t, its) = ttilde_iterates(n, &eu)?;
    let mut s = Section::new("normalized generator of the top eu piece at q^0");
    for (k, v) in its.iter().enumerate() {
        s.add(format!("Dx^{k} T~0"), format_vector(v));
    }
    s.add(
        "q-dependence",
        if t.q_independent { "none" } else { "present; values shown at q^0" },
    );
    doc.sections.push(s);
    doc.report(qserre::hodge::hodge_report(n)?);
    Ok(())
}

pub fn quintic_report(doc: &mut Document) -> Result<(), Error> {
    if doc.config.n != 4 {
        return Err(Error::Input("quintic-report requires --n 4".into()));
    }
    operators(doc);
    let data = extract_descendants(4, doc.config.order)?;
    let mm = mirror_maps_from(&data)?;
    mirror_sections(doc, &mm);
    doc.report(mirror_suite_from(&doc.config, &mm));
    let (_, eu) = filtrations(4)?;
    let (_, its) = ttilde_iterates(4, &eu)?;
    let mut s = Section::new("normalized generator of the top eu piece at q^0");
    for (k, v) in its.iter().enumerate() {
        s.add(format!("Dx^{k} T~0"), format_vector(v));
    }
    doc.sections.push(s);
    doc.report(qserre::hodge::quintic_basis_report(&its, true));
    let w = doc.config.worder;
    let kdata = extract_descendants(4, w as usize)?;
    doc.report(kcheck_ttilde(&kdata, w, &int(golden::KCHECK_TTILDE_CONSTANT))?);
    Ok(())
}

fn poly_json(p: &QxPoly<Rational>) -> Value {
    Value::Array(
        p.terms()
            .iter()
            .map(|((a, b), c)| json!([a, b, format_rational(c)]))
            .collect(),
    )
}

fn matrix_json(m: &RatMat<Rational>) -> Value {
    json!({
        "den": poly_json(&m.den),
        "num": m.num.iter().map(|r| r.iter().map(poly_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

fn matrix_section(title: &str, m: &RatMat<Rational>) -> Section {
    let mut s = Section::new(title);
    s.add("denominator", format_qx(&m.den));
    for (i, row) in m.num.iter().enumerate() {
        for (j, p) in row.iter().enumerate() {
            s.add(format!("({i},{j})"), format_qx(p));
        }
    }
    s
}

pub fn matrices(doc: &mut Document, sigma: Option<Rational>) -> Result<(), Error> {
    let n = doc.config.n;
    let sigma = sigma.unwrap_or_else(|| rat(n as i64 + 1, 2));
    let conn = ssc_connection(&sigma, n)?;
    let g = second_metric(n)?;
    let mut head = Section::new("connection");
    head.add("sigma", format_rational(&sigma));
    head.add("divisor", format_qx(&conn.divisor()));
    head.add("flat", conn.is_flat().to_string());
    doc.sections.push(head);
    doc.sections.push(matrix_section("A_t numerators", &conn.a_t));
    doc.sections.push(matrix_section("A_x numerators", &conn.a_x));
    doc.sections.push(matrix_section("second metric numerators", &g));
    let mut data = BTreeMap::new();
    data.insert("a_t".to_string(), matrix_json(&conn.a_t));
    data.insert("a_x".to_string(), matrix_json(&conn.a_x));
    data.insert("second_metric".to_string(), matrix_json(&g));
    doc.data = data;
    let mut rep = qserre::Report::new("matrices");
    rep.push("flat", conn.is_flat(), "");
    if n == 4 {
        rep.merge(qserre::second_structure::quintic_matrix_check(&sigma)?);
    }
    doc.report(rep);
    Ok(())
}

pub fn load_imported(algebra: &str, descendants: &str) -> Result<DescendantData, Error> {
    let alg = AlgebraPresentation::from_json(algebra)?;
    DescendantData::from_json(alg, descendants)
}
