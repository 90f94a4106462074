//! Verification suites shared by the command-line driver and the acceptance tests.

use std::fmt;
use std::str::FromStr;

use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::givental::extract_descendants;
use crate::golden;
use crate::laplace::{kcheck_columns, kcheck_delta_relation, laplace_report, metric_from_solutions, phi_eu, phi_loc, verify_ssc_solution};
use crate::lefschetz::{i_matrix_from, lu_factorize, check_lu, to_zq_matrix, mirror_maps_from, pairing_identity_check_from, MirrorMapPair, Twist};
use crate::report::Report;
use crate::scalar::{format_rational, int, rat, Rational, UniPoly};
use crate::second_structure::{flatness_report, quintic_matrix_check, ssc_connection};
use crate::series::UniSeries;
use crate::weyl::{annihilate_check, apply_to_unit, build_twist_ops, residual_degree, sigma_operator};
use crate::PiPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Flatness,
    Laplace,
    Weyl,
    Hrr,
    Hodge,
    Mirror,
    Pairing,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Flatness,
        Suite::Laplace,
        Suite::Weyl,
        Suite::Hrr,
        Suite::Hodge,
        Suite::Mirror,
        Suite::Pairing,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Flatness => "flatness",
            Suite::Laplace => "laplace",
            Suite::Weyl => "weyl",
            Suite::Hrr => "hrr",
            Suite::Hodge => "hodge",
            Suite::Mirror => "mirror",
            Suite::Pairing => "pairing",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .iter()
            .copied()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Input(format!("unknown suite '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub n: usize,
    /// Series order D.
    pub order: usize,
    /// Weighted order W for sections.
    pub worder: u32,
    pub tol: f64,
    pub suites: Vec<Suite>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            n: 4,
            order: 10,
            worder: 8,
            tol: 1e-10,
            suites: Suite::ALL.to_vec(),
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Input("n must be at least 1".into()));
        }
        if self.order < 1 || self.worder < 1 {
            return Err(Error::Input("orders must be at least 1".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::Input("tolerance must be positive".into()));
        }
        if self.suites.is_empty() {
            return Err(Error::Input("no suites selected".into()));
        }
        Ok(())
    }

    /// Golden values exist only for the anticanonical twist of P⁴.
    pub fn golden(&self) -> bool {
        self.n == 4
    }
}

/// σ values checked for flatness: (n+1)/2 − k for k = 0..=n+1, plus three fixed non-special rationals.
pub fn flatness_sigmas(n: usize) -> Vec<Rational> {
    let top = n as i64 + 1;
    let mut out: Vec<Rational> = (0..=top).map(|k| rat(top - 2 * k, 2)).collect();
    out.extend([rat(3, 7), rat(-11, 5), rat(17, 13)]);
    out
}

pub fn flatness_suite(cfg: &RunConfig) -> Result<Report> {
    let mut rep = flatness_report(cfg.n, &flatness_sigmas(cfg.n))?;
    if cfg.golden() {
        for s in [rat(5, 2), rat(-5, 2), rat(1, 3)] {
            let mut r = quintic_matrix_check(&s)?;
            r.name = format!("printed matrices sigma={}", format_rational(&s));
            rep.merge(r);
        }
        let mut r = quintic_matrix_check(&UniPoly::var())?;
        r.name = "printed matrices symbolic sigma".into();
        rep.merge(r);
    }
    Ok(rep)
}

pub fn laplace_suite(cfg: &RunConfig) -> Result<Report> {
    let n = cfg.n;
    let w = cfg.worder;
    let data = extract_descendants(n, w as usize)?;
    let s = rat(n as i64 + 1, 2);
    let mut rep = Report::new("laplace");
    for (sigma, ell) in [(s.clone(), Rational::one()), (-s.clone(), int(0))] {
        let cols = kcheck_columns(&data, &sigma, &ell, w)?;
        let conn = ssc_connection(&sigma, n)?;
        rep.merge(verify_ssc_solution(&data.alg, &cols, &conn, w)?);
        rep.merge(laplace_report(&data, &sigma, &ell, w)?);
    }
    let w6 = w.min(6);
    let data6 = extract_descendants(n, w6 as usize)?;
    rep.merge(metric_from_solutions(&data6, w6)?);
    rep.merge(kcheck_delta_relation(&data6, w6)?);
    Ok(rep)
}

pub fn weyl_suite(cfg: &RunConfig) -> Result<Report> {
    let n = cfg.n;
    let w = cfg.worder.max(cfg.order as u32).min(10);
    let ops = build_twist_ops(n);
    let mut rep = Report::new("weyl");
    rep.merge(ops.factorization_report());
    rep.merge(ops.intertwiner_report());
    let data = extract_descendants(n, w as usize)?;
    let alg = &data.alg;
    let mut a = annihilate_check(alg, &ops.d_eu, &phi_eu(&data, w)?, w)?;
    a.name = "D_eu(phi_eu)".into();
    rep.merge(a);
    let loc = phi_loc(&data, w)?;
    let d_loc = ops.d_loc.map(|c| PiPoly::constant(c.clone()));
    let mut a = annihilate_check(alg, &d_loc, &loc, w)?;
    a.name = "D_loc(phi_loc)".into();
    rep.merge(a);
    let d_eu = ops.d_eu.map(|c| PiPoly::constant(c.clone()));
    let cross = residual_degree(alg, &d_eu, &loc, w)?;
    rep.push(
        "negative control D_eu(phi_loc) fails at q^1",
        cross == Some(1),
        format!("{cross:?}"),
    );
    let sym = UniPoly::var();
    let v = apply_to_unit(n, &sym, &sigma_operator(n, &sym))?;
    rep.push("D_sigma T0 = 0 for symbolic sigma", v.num.iter().all(|p| p.is_zero()), "");
    Ok(rep)
}

pub fn hrr_suite(cfg: &RunConfig) -> Result<Report> {
    if cfg.n > 8 {
        return Err(Error::Input("the Gamma-class suite supports n <= 8".into()));
    }
    let mut rep = Report::new("hrr");
    for n in 1..=cfg.n {
        rep.merge(crate::gamma_hrr::identity_53(n, cfg.tol)?);
        rep.merge(crate::gamma_hrr::euler_pairing_report(n)?);
    }
    for k in [0, 1, 5] {
        rep.merge(crate::gamma_hrr::selfintersection_check(k, cfg.n)?);
    }
    Ok(rep)
}

pub fn hodge_suite(cfg: &RunConfig) -> Result<Report> {
    let mut rep = crate::hodge::hodge_report(cfg.n)?;
    let w = cfg.worder.min(6);
    let data = extract_descendants(cfg.n, w as usize)?;
    if cfg.golden() {
        rep.merge(crate::hodge::kcheck_ttilde(&data, w, &int(golden::KCHECK_TTILDE_CONSTANT))?);
    } else {
        let (c, mut r) = crate::hodge::kcheck_ttilde_constant(&data, w)?;
        r.push("constant (report only)", true, format_rational(&c));
        rep.merge(r);
    }
    Ok(rep)
}

fn coeff_list(s: &UniSeries<Rational>, upto: usize) -> Vec<Rational> {
    (1..=upto).map(|k| s.coeff(k)).collect()
}

fn compare_list(rep: &mut Report, label: &str, s: &UniSeries<Rational>, want: &[i64]) {
    let upto = want.len().min(s.order());
    let got = coeff_list(s, upto);
    let want: Vec<Rational> = want[..upto].iter().map(|&k| int(k)).collect();
    rep.push(
        format!("{label} through q^{upto}"),
        got == want,
        got.iter().map(format_rational).collect::<Vec<_>>().join(", "),
    );
}

/// Mirror maps, F̄ and the N_d table; golden comparison for n = 4.
pub fn mirror_suite_from(cfg: &RunConfig, mm: &MirrorMapPair) -> Report {
    let mut rep = Report::new("mirror");
    let sign = if cfg.n % 2 == 0 { int(-1) } else { int(1) };
    rep.push("M_loc(sq) = s F(M_eu(q))", mm.compatibility_holds(&sign), "");
    for (label, s) in [("M_eu", &mm.m_eu), ("M_loc", &mm.m_loc), ("F", &mm.f_bar)] {
        rep.push(
            format!("{label} integral through q^{}", s.order()),
            s.is_integral(),
            "",
        );
    }
    if cfg.golden() {
        compare_list(&mut rep, "M_eu", &mm.m_eu, &golden::M_EU);
        compare_list(&mut rep, "M_loc", &mm.m_loc, &golden::M_LOC);
        compare_list(&mut rep, "F", &mm.f_bar, &golden::F_BAR);
        let table = golden::gw_table();
        let k = table.len().min(mm.n_table.len());
        rep.push(
            format!("N_d for d <= {k}"),
            mm.n_table[..k] == table[..k],
            mm.n_table[..k].iter().map(format_rational).collect::<Vec<_>>().join(", "),
        );
    }
    rep
}

pub fn mirror_suite(cfg: &RunConfig) -> Result<Report> {
    let data = extract_descendants(cfg.n, cfg.order)?;
    let mm = mirror_maps_from(&data)?;
    let mut rep = mirror_suite_from(cfg, &mm);
    for kind in [Twist::Eu, Twist::Loc] {
        let cols = i_matrix_from(&data, kind);
        let lu = lu_factorize(&cols)?;
        let mut r = check_lu(&data.alg, &to_zq_matrix(&cols), &lu);
        r.name = format!("LU {kind:?}");
        rep.merge(r);
    }
    Ok(rep)
}

pub fn pairing_suite(cfg: &RunConfig) -> Result<Report> {
    let data = extract_descendants(cfg.n, cfg.order.min(6))?;
    pairing_identity_check_from(&data)
}

pub fn run_suite(suite: Suite, cfg: &RunConfig) -> Result<Report> {
    let mut rep = match suite {
        Suite::Flatness => flatness_suite(cfg),
        Suite::Laplace => laplace_suite(cfg),
        Suite::Weyl => weyl_suite(cfg),
        Suite::Hrr => hrr_suite(cfg),
        Suite::Hodge => hodge_suite(cfg),
        Suite::Mirror => mirror_suite(cfg),
        Suite::Pairing => pairing_suite(cfg),
    }?;
    rep.name = suite.name().to_string();
    Ok(rep)
}

pub fn run(cfg: &RunConfig) -> Result<Vec<Report>> {
    cfg.validate()?;
    cfg.suites.iter().map(|s| run_suite(*s, cfg)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_list() {
        let s = flatness_sigmas(4);
        for v in [rat(1, 2), rat(-1, 2), rat(3, 2), rat(-3, 2), rat(5, 2), rat(-5, 2)] {
            assert!(s.contains(&v));
        }
        assert_eq!(s.len(), 9);
        assert!(flatness_sigmas(3).contains(&int(0)));
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn config_validation() {
        assert!(RunConfig::default().validate().is_ok());
        let bad = RunConfig {
            tol: 0.0,
            ..RunConfig::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn small_suites_pass() {
        let cfg = RunConfig {
            n: 2,
            order: 4,
            worder: 3,
            ..RunConfig::default()
        };
        for s in Suite::ALL {
            let rep = run_suite(s, &cfg).unwrap();
            assert!(rep.passed, "{s}: {:#?}", rep.failures().collect::<Vec<_>>());
        }
    }
}
