//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::time::Instant;

use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use qserre::coh_algebra::AlgebraPresentation;
use qserre::gamma_hrr::{euler_pairing, euler_pairing_report, identity_53, selfintersection_check};
use qserre::givental::extract_descendants;
use qserre::golden;
use qserre::hodge::{hodge_report, kcheck_ttilde, kcheck_ttilde_constant};
use qserre::laplace::{kcheck_columns, kcheck_delta_relation, laplace_report, phi_eu, phi_loc, verify_ssc_solution};
use qserre::lefschetz::{check_lu, i_matrix_from, lu_factorize, mirror_maps, pairing_identity_check, to_zq_matrix, Twist};
use qserre::scalar::{format_rational, int, rat, Rational};
use qserre::second_structure::{
    delta_intertwines, delta_total, delta_tower_sigmas, expected_large_radius_metric, large_radius_metric,
    metric_flatness, quintic_matrix_check, rank, ssc_connection,
};
use qserre::weyl::{annihilate_check, build_quintic_ops, residual_degree};
use qserre::{PiPoly, Report, UniPoly, UniSeries};

const TABLE_ORDER: usize = 10;
const INTEGRALITY_ORDER: usize = 16;
const ANNIHILATION_W: u32 = 10;
const SOLUTION_W: u32 = 8;
const RELATION_W: u32 = 6;
const PAIRING_ORDER: usize = 6;
const GAMMA_TOL: f64 = 1e-10;
const RANDOM_SERIES: u32 = 50;
const SERIES_ORDER: usize = 10;
const SEED: [u8; 32] = *b"qserre acceptance fixed rng seed";

type Outcome = Result<(bool, String), String>;

fn from_report(r: qserre::Result<Report>) -> Outcome {
    let r = r.map_err(|e| e.to_string())?;
    let fails: Vec<String> = r.failures().map(|c| format!("{} [{}]", c.label, c.detail)).collect();
    Ok((r.passed, fails.join("; ")))
}

fn all(parts: Vec<Outcome>) -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for p in parts {
        let (pass, note) = p?;
        ok &= pass;
        if !pass {
            notes.push(note);
        }
    }
    Ok((ok, notes.join(" | ")))
}

fn check(pass: bool, note: impl Into<String>) -> Outcome {
    Ok((pass, note.into()))
}

fn criterion_1() -> Outcome {
    let mm = mirror_maps(4, TABLE_ORDER).map_err(|e| e.to_string())?;
    let want = golden::gw_table();
    let got = &mm.n_table[..want.len().min(mm.n_table.len())];
    check(
        got == &want[..],
        got.iter().map(format_rational).collect::<Vec<_>>().join(", "),
    )
}

fn ints(s: &UniSeries<Rational>, upto: usize) -> Vec<Rational> {
    (1..=upto).map(|k| s.coeff(k)).collect()
}

fn criterion_2() -> Outcome {
    let mm = mirror_maps(4, INTEGRALITY_ORDER).map_err(|e| e.to_string())?;
    let lists = [
        ("M_eu", &mm.m_eu, golden::M_EU),
        ("M_loc", &mm.m_loc, golden::M_LOC),
        ("F", &mm.f_bar, golden::F_BAR),
    ];
    let mut parts = Vec::new();
    for (name, s, want) in lists {
        let want: Vec<Rational> = want.iter().map(|&k| int(k)).collect();
        parts.push(check(ints(s, 5) == want, format!("{name} differs through q^5")));
        parts.push(check(
            s.is_integral() && s.order() >= INTEGRALITY_ORDER - 1,
            format!("{name} not integral through q^{}", INTEGRALITY_ORDER - 1),
        ));
    }
    parts.push(check(
        mm.f_bar.coeff(4) != int(golden::F_BAR_PRINTED_Q4),
        "F q^4 equals the printed value",
    ));
    all(parts)
}

fn criterion_3() -> Outcome {
    let ops = build_quintic_ops();
    all(vec![
        from_report(Ok(ops.factorization_report())),
        from_report(Ok(ops.intertwiner_report())),
    ])
}

fn criterion_4() -> Outcome {
    let w = ANNIHILATION_W;
    let data = extract_descendants(4, w as usize).map_err(|e| e.to_string())?;
    let ops = build_quintic_ops();
    let eu = phi_eu(&data, w).map_err(|e| e.to_string())?;
    let loc = phi_loc(&data, w).map_err(|e| e.to_string())?;
    let lift = |c: &Rational| PiPoly::constant(c.clone());
    let cross = residual_degree(&data.alg, &ops.d_eu.map(lift), &loc, w).map_err(|e| e.to_string())?;
    all(vec![
        from_report(annihilate_check(&data.alg, &ops.d_eu, &eu, w)),
        from_report(annihilate_check(&data.alg, &ops.d_loc.map(lift), &loc, w)),
        check(cross == Some(1), format!("cross residual at {cross:?}")),
    ])
}

fn random_sigmas(runner: &mut TestRunner, count: usize) -> Vec<Rational> {
    let strat = (-20i64..=20, 1i64..=9).prop_map(|(p, q)| rat(p, q));
    (0..count)
        .map(|_| strat.new_tree(runner).expect("strategy").current())
        .collect()
}

fn criterion_5(rng: &mut TestRunner) -> Outcome {
    let mut parts = vec![
        from_report(quintic_matrix_check(&rat(5, 2))),
        from_report(quintic_matrix_check(&rat(-5, 2))),
        from_report(quintic_matrix_check(&UniPoly::var())),
    ];
    let mut sigmas: Vec<Rational> = [5, 3, 1].iter().flat_map(|&k| [rat(k, 2), rat(-k, 2)]).collect();
    sigmas.extend(random_sigmas(rng, 3));
    for s in sigmas {
        let flat = ssc_connection(&s, 4).map_err(|e| e.to_string())?.is_flat();
        parts.push(check(flat, format!("curvature nonzero at sigma = {}", format_rational(&s))));
    }
    all(parts)
}

fn criterion_6() -> Outcome {
    let mut parts = Vec::new();
    for s in [rat(5, 2), rat(-5, 2), rat(1, 2), rat(3, 7)] {
        let ok = metric_flatness(&s, 4).map_err(|e| e.to_string())?;
        parts.push(check(ok, format!("metric not flat at sigma = {}", format_rational(&s))));
    }
    let ok = metric_flatness(&UniPoly::var(), 4).map_err(|e| e.to_string())?;
    parts.push(check(ok, "metric not flat for symbolic sigma"));
    let got = large_radius_metric(4).map_err(|e| e.to_string())?;
    let want = expected_large_radius_metric(4).map_err(|e| e.to_string())?;
    parts.push(check(got == want, "large-radius values differ"));
    let pattern = (0..5).all(|a| (0..5).all(|b| (got[a][b] == int(0)) == (a + b > 4)));
    parts.push(check(pattern, "vanishing pattern differs"));
    all(parts)
}

fn criterion_7() -> Outcome {
    let mut parts = Vec::new();
    for s in delta_tower_sigmas(4) {
        let ok = delta_intertwines(&s, 4).map_err(|e| e.to_string())?;
        parts.push(check(ok, format!("Delta at {} does not intertwine", format_rational(&s))));
    }
    let ok = delta_intertwines(&UniPoly::var(), 4).map_err(|e| e.to_string())?;
    parts.push(check(ok, "Delta does not intertwine for symbolic sigma"));
    let r = rank(&delta_total(4).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    parts.push(check(r == 4, format!("rank {r}")));
    let data = extract_descendants(4, RELATION_W as usize).map_err(|e| e.to_string())?;
    parts.push(from_report(kcheck_delta_relation(&data, RELATION_W)));
    all(parts)
}

fn criterion_8() -> Outcome {
    let w = SOLUTION_W;
    let data = extract_descendants(4, w as usize).map_err(|e| e.to_string())?;
    let mut parts = Vec::new();
    for (sigma, ell) in [(rat(5, 2), int(1)), (rat(-5, 2), int(0))] {
        let cols = kcheck_columns(&data, &sigma, &ell, w).map_err(|e| e.to_string())?;
        let conn = ssc_connection(&sigma, 4).map_err(|e| e.to_string())?;
        parts.push(from_report(verify_ssc_solution(&data.alg, &cols, &conn, w)));
        parts.push(from_report(laplace_report(&data, &sigma, &ell, w)));
    }
    all(parts)
}

fn criterion_9() -> Outcome {
    from_report(pairing_identity_check(4, PAIRING_ORDER))
}

fn criterion_10() -> Outcome {
    let mut parts = Vec::new();
    for n in 1..=8 {
        parts.push(from_report(identity_53(n, GAMMA_TOL)));
        parts.push(from_report(euler_pairing_report(n)));
    }
    // χ(O(a), O(b)) depends only on a − b
    let shift = (-4..=4).all(|a| (-4..=4).all(|b| euler_pairing(a, b, 4).ok() == euler_pairing(a + 3, b + 3, 4).ok()));
    parts.push(check(shift, "Euler pairing is not shift invariant"));
    for k in [0, 1, 5] {
        parts.push(from_report(selfintersection_check(k, 4)));
    }
    all(parts)
}

fn criterion_11() -> Outcome {
    let data = extract_descendants(4, RELATION_W as usize).map_err(|e| e.to_string())?;
    let (c, rep) = kcheck_ttilde_constant(&data, RELATION_W).map_err(|e| e.to_string())?;
    all(vec![
        from_report(hodge_report(4)),
        from_report(Ok(rep)),
        check(
            c == int(golden::KCHECK_TTILDE_CONSTANT),
            format!("computed constant {}", format_rational(&c)),
        ),
        from_report(kcheck_ttilde(&data, RELATION_W, &c)),
    ])
}

fn series_round_trips(seed: [u8; 32]) -> Outcome {
    use proptest::prelude::*;
    let coeff = (-9i64..=9, 1i64..=4).prop_map(|(p, q)| rat(p, q));
    let tail = proptest::collection::vec(coeff.clone(), SERIES_ORDER - 1);
    let strat = (coeff.prop_filter("unit", |r| *r != int(0)), tail);
    let mut runner = TestRunner::new_with_rng(
        Config {
            cases: RANDOM_SERIES,
            failure_persistence: None,
            ..Config::default()
        },
        TestRng::from_seed(RngAlgorithm::ChaCha, &seed),
    );
    let res = runner.run(&strat, |(a1, rest)| {
        let mut c = vec![int(0), a1];
        c.extend(rest);
        let a = UniSeries::new(c);
        let q = UniSeries::var(SERIES_ORDER);
        let b = a.revert().unwrap();
        prop_assert_eq!(a.compose(&b).unwrap(), q.clone());
        prop_assert_eq!(b.compose(&a).unwrap(), q);
        prop_assert_eq!(a.exp().unwrap().log().unwrap(), a.clone());
        let unit = UniSeries::one(SERIES_ORDER).add(&a);
        prop_assert_eq!(unit.log().unwrap().exp().unwrap(), unit);
        Ok(())
    });
    check(res.is_ok(), format!("{res:?}"))
}

fn criterion_12() -> Outcome {
    let mut parts = Vec::new();
    for n in 1..=8 {
        let alg = AlgebraPresentation::projective_space(n).map_err(|e| e.to_string())?;
        let r = alg.rank();
        let e = |a| alg.basis::<Rational>(a);
        let assoc = (0..r).all(|a| {
            (0..r).all(|b| {
                (0..r).all(|c| alg.mul(&alg.mul(&e(a), &e(b)), &e(c)) == alg.mul(&e(a), &alg.mul(&e(b), &e(c))))
            })
        });
        parts.push(check(assoc, format!("P^{n} not associative")));
    }
    parts.push(series_round_trips(SEED));
    let data = extract_descendants(4, TABLE_ORDER).map_err(|e| e.to_string())?;
    for kind in [Twist::Eu, Twist::Loc] {
        let cols = i_matrix_from(&data, kind);
        let lu = lu_factorize(&cols).map_err(|e| e.to_string())?;
        parts.push(from_report(Ok(check_lu(&data.alg, &to_zq_matrix(&cols), &lu))));
    }
    all(parts)
}

fn main() {
    let mut rng = TestRunner::new_with_rng(Config::default(), TestRng::from_seed(RngAlgorithm::ChaCha, &SEED));
    let criteria: Vec<(&str, Box<dyn FnOnce() -> Outcome + '_>)> = vec![
        ("invariant table N_1..N_8", Box::new(criterion_1)),
        ("mirror-map coefficients and integrality", Box::new(criterion_2)),
        ("operator identities", Box::new(criterion_3)),
        ("solution annihilation", Box::new(criterion_4)),
        ("second-structure matrices and flatness", Box::new(|| criterion_5(&mut rng))),
        ("second metric", Box::new(criterion_6)),
        ("Delta tower", Box::new(criterion_7)),
        ("Laplace solutions", Box::new(criterion_8)),
        ("pairing identity", Box::new(criterion_9)),
        ("Gamma class and HRR", Box::new(criterion_10)),
        ("Hodge filtrations", Box::new(criterion_11)),
        ("property suites", Box::new(criterion_12)),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let (pass, note) = match f() {
            Ok(v) => v,
            Err(e) => (false, format!("error: {e}")),
        };
        let secs = start.elapsed().as_secs_f64();
        if pass {
            println!("criterion {:>2} PASS  {name} ({secs:.2}s)", i + 1);
        } else {
            failed += 1;
            println!("criterion {:>2} FAIL  {name} ({secs:.2}s): {note}", i + 1);
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all criteria passed");
}
