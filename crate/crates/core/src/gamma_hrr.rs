//! Γ̂-class arithmetic in double precision, Hirzebruch–Riemann–Roch pairings
//! and the Koszul self-intersection identity for line bundles on Pⁿ.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use crate::coh_algebra::{ch_line, chern_data, todd_series, AlgebraPresentation, CohElement};
use crate::error::{Error, Result};
use crate::report::Report;
use crate::scalar::{binomial, int, Rational};
use crate::series::UniSeries;

#[allow(clippy::excessive_precision)]
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082;

/// ζ(k) for k = 2..=9.
#[allow(clippy::excessive_precision)]
const ZETA: [f64; 8] = [
    1.644_934_066_848_226_436_472_415_166_646,
    1.202_056_903_159_594_285_399_738_161_511,
    1.082_323_233_711_138_191_516_003_696_541,
    1.036_927_755_143_369_926_331_365_486_457,
    1.017_343_061_984_449_139_714_517_929_790,
    1.008_349_277_381_922_826_839_797_549_849,
    1.004_077_356_197_944_339_378_685_238_508,
    1.002_008_392_826_082_214_417_852_769_232,
];

pub fn zeta(k: usize) -> Option<f64> {
    k.checked_sub(2).and_then(|i| ZETA.get(i)).copied()
}

/// Complex-valued class with a comparison tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericCohElement {
    pub value: CohElement<Complex64>,
    pub tol: f64,
}

impl NumericCohElement {
    pub fn new(value: CohElement<Complex64>, tol: f64) -> Self {
        NumericCohElement { value, tol }
    }

    /// Largest |a_i − b_i| and the slot where it occurs.
    pub fn max_deviation(&self, exact: &CohElement<Rational>) -> (f64, usize) {
        self.value
            .coeffs
            .iter()
            .zip(&exact.coeffs)
            .enumerate()
            .map(|(i, (a, b))| ((a - Complex64::new(b.to_f64().unwrap_or(f64::NAN), 0.0)).norm(), i))
            .fold((0.0, 0), |acc, x| if x.0 > acc.0 { x } else { acc })
    }

    pub fn approx_eq(&self, exact: &CohElement<Rational>) -> bool {
        let (d, _) = self.max_deviation(exact);
        d.is_finite() && d < self.tol
    }

    pub fn is_finite(&self) -> bool {
        self.value.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

/// log Γ(1+x) = −γ_E x + Σ_{k≥2} ζ(k)(−x)^k/k, truncated at x^order.
pub fn log_gamma_series(order: usize) -> Result<UniSeries<Complex64>> {
    let mut c = vec![Complex64::zero(); order + 1];
    if order >= 1 {
        c[1] = Complex64::new(-EULER_GAMMA, 0.0);
    }
    for (k, slot) in c.iter_mut().enumerate().skip(2) {
        let z = zeta(k).ok_or_else(|| Error::Input(format!("ζ({k}) is not tabulated")))?;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        *slot = Complex64::new(sign * z / k as f64, 0.0);
    }
    Ok(UniSeries::new(c))
}

/// Γ̂(TPⁿ) = Γ(1+H)^{n+1}.
pub fn gamma_class(n: usize) -> Result<NumericCohElement> {
    let alg = AlgebraPresentation::projective_space(n)?;
    let h = alg.basis::<Complex64>(1);
    let lg = alg.apply_series(&log_gamma_series(n)?, &h)?;
    let value = alg.exp(&lg.scale(&Complex64::new(n as f64 + 1.0, 0.0)))?;
    Ok(NumericCohElement::new(value, 1e-12))
}

/// Multiplies the degree-2k part by λ^k.
fn rescale(alg: &AlgebraPresentation, a: &CohElement<Complex64>, lambda: Complex64) -> CohElement<Complex64> {
    alg.rescale(a, &lambda)
}

/// e^{c₁/2}·Γ̂(H/2πi)·Γ̂(−H/2πi), which should equal Td(TPⁿ).
pub fn gamma_todd_product(n: usize) -> Result<NumericCohElement> {
    let alg = AlgebraPresentation::projective_space(n)?;
    let g = gamma_class(n)?.value;
    let two_pi_i_inv = Complex64::new(0.0, 2.0 * PI).inv();
    let plus = rescale(&alg, &g, two_pi_i_inv);
    let minus = rescale(&alg, &g, -two_pi_i_inv);
    let half_c1 = alg
        .basis::<Complex64>(1)
        .scale(&Complex64::new((n as f64 + 1.0) / 2.0, 0.0));
    let value = alg.mul(&alg.mul(&alg.exp(&half_c1)?, &plus), &minus);
    Ok(NumericCohElement::new(value, 1e-10))
}

pub fn identity_53(n: usize, tol: f64) -> Result<Report> {
    if n == 0 || n > 8 {
        return Err(Error::Input(format!("n = {n} outside 1..=8")));
    }
    let mut lhs = gamma_todd_product(n)?;
    lhs.tol = tol;
    let td = chern_data(n)?.todd;
    let (dev, slot) = lhs.max_deviation(&td);
    let mut rep = Report::new(format!("Gamma-Todd identity on P^{n}"));
    rep.push(
        "max deviation below tolerance",
        lhs.is_finite() && dev < tol,
        format!("{dev:.3e} at H^{slot}"),
    );
    Ok(rep)
}

/// χ(O(a) ⊗ O(b)^∨) = ∫ ch(O(a−b))·Td(TPⁿ).
pub fn euler_pairing(a: i64, b: i64, n: usize) -> Result<Rational> {
    let alg = AlgebraPresentation::projective_space(n)?;
    let td = chern_data(n)?.todd;
    Ok(alg.integrate(&alg.mul(&ch_line(&alg, a - b), &td)))
}

/// Compares χ(O(k)) with binomial(n+k, n) for −n ≤ k ≤ 10.
pub fn euler_pairing_report(n: usize) -> Result<Report> {
    let mut rep = Report::new(format!("HRR on P^{n}"));
    for k in -(n as i64)..=10 {
        let got = euler_pairing(k, 0, n)?;
        let want = binomial(n as i64 + k, n as i64);
        rep.push(format!("chi(O({k}))"), got == want, format!("{got} vs {want}"));
    }
    Ok(rep)
}

/// Td of a line bundle with first Chern class c.
fn todd_line(alg: &AlgebraPresentation, c: &CohElement<Rational>) -> Result<CohElement<Rational>> {
    alg.apply_series(&todd_series(alg.dim()), c)
}

/// ch(O − O(−k))·ch(V) = c₁(O(k))·Td(O(k))⁻¹·ch(V) for V ∈ {O, O(1), O(2)} on Pⁿ.
pub fn selfintersection_check(k: i64, n: usize) -> Result<Report> {
    let alg = AlgebraPresentation::projective_space(n)?;
    let koszul = alg.one::<Rational>() - ch_line(&alg, -k);
    let e = alg.basis::<Rational>(1).scale(&int(k));
    let td_inv = alg.inverse(&todd_line(&alg, &e)?)?;
    let normal = alg.mul(&e, &td_inv);
    let mut rep = Report::new(format!("self-intersection k = {k}"));
    rep.push("lambda_{-1} N^vee", koszul == normal, alg.format_element(&(koszul.clone() - normal.clone())));
    let mut sum_v = alg.zero::<Rational>();
    for a in 0..=2 {
        let ch_v = ch_line(&alg, a);
        let l = alg.mul(&koszul, &ch_v);
        let r = alg.mul(&normal, &ch_v);
        rep.push(format!("V = O({a})"), l == r, alg.format_element(&(l - r)));
        sum_v = sum_v + ch_v;
    }
    let lin_l = alg.mul(&koszul, &sum_v);
    let lin_r = alg.mul(&normal, &sum_v);
    rep.push("V = O + O(1) + O(2)", lin_l == lin_r, String::new());
    Ok(rep)
}

pub fn hrr_report(n_max: usize, tol: f64) -> Result<Report> {
    let mut rep = Report::new("gamma/hrr");
    for n in 1..=n_max {
        rep.merge(identity_53(n, tol)?);
        rep.merge(euler_pairing_report(n)?);
    }
    for k in [0, 1, 5] {
        rep.merge(selfintersection_check(k, 4)?);
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zeta_oracle(k: usize) -> f64 {
        // partial sum plus Euler–Maclaurin tail
        let n = 2000usize;
        let s: f64 = (1..=n).map(|m| (m as f64).powi(-(k as i32))).sum();
        let nf = n as f64;
        let kf = k as f64;
        s + nf.powf(1.0 - kf) / (kf - 1.0) - 0.5 * nf.powf(-kf) + kf / 12.0 * nf.powf(-kf - 1.0)
    }

    fn euler_gamma_oracle() -> f64 {
        let n = 100_000usize;
        let h: f64 = (1..=n).map(|m| 1.0 / m as f64).sum();
        let nf = n as f64;
        h - nf.ln() - 1.0 / (2.0 * nf) + 1.0 / (12.0 * nf * nf)
    }

    #[test]
    fn constants_match_independent_sums() {
        assert!((euler_gamma_oracle() - EULER_GAMMA).abs() < 1e-12);
        for k in 2..=9 {
            assert!((zeta_oracle(k) - zeta(k).unwrap()).abs() < 1e-11, "k = {k}");
        }
        assert!(zeta(10).is_none());
    }

    #[test]
    fn gamma_class_of_p1() {
        let g = gamma_class(1).unwrap();
        assert!((g.value.coeffs[0] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let want = -2.0 * euler_gamma_oracle();
        assert!((g.value.coeffs[1].re - want).abs() < 1e-10);
        assert!((g.value.coeffs[1].re + 1.154_431_329_8).abs() < 1e-10);
    }

    #[test]
    fn gamma_class_second_order() {
        // coefficient of H² in Γ(1+H)³ is (9γ² + 3ζ(2))/2
        let g = gamma_class(2).unwrap();
        let three = (9.0 * EULER_GAMMA.powi(2) + 3.0 * PI * PI / 6.0) / 2.0;
        assert!((g.value.coeffs[2].re - three).abs() < 1e-12);
    }

    #[test]
    fn gamma_todd_identity() {
        for n in 1..=8 {
            let rep = identity_53(n, 1e-10).unwrap();
            assert!(rep.passed, "{rep:?}");
        }
        let p1 = gamma_todd_product(1).unwrap();
        assert!((p1.value.coeffs[1] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!(identity_53(9, 1e-10).is_err());
    }

    #[test]
    fn perturbed_todd_is_rejected() {
        let lhs = gamma_todd_product(4).unwrap();
        let mut td = chern_data(4).unwrap().todd;
        td.coeffs[3] += crate::scalar::rat(1, 1_000_000);
        assert!(!lhs.approx_eq(&td));
    }

    #[test]
    fn euler_characteristics() {
        assert_eq!(euler_pairing(0, 0, 3).unwrap(), int(1));
        assert_eq!(euler_pairing(1, 0, 4).unwrap(), int(5));
        assert_eq!(euler_pairing(-1, 0, 4).unwrap(), int(0));
        assert_eq!(euler_pairing(3, 1, 4).unwrap(), euler_pairing(2, 0, 4).unwrap());
        // Serre duality: χ(O(−5)) on P⁴ is h⁴ = 1
        assert_eq!(euler_pairing(-5, 0, 4).unwrap(), int(1));
        for n in 1..=6 {
            assert!(euler_pairing_report(n).unwrap().passed);
        }
    }

    #[test]
    fn self_intersection() {
        for k in [0, 1, 5] {
            let rep = selfintersection_check(k, 4).unwrap();
            assert!(rep.passed, "{rep:?}");
        }
        // direct expansion for k = 5: 1 − e^{−5H} = 5H − 25/2 H² + 125/6 H³ − 625/24 H⁴
        let alg = AlgebraPresentation::projective_space(4).unwrap();
        let lhs = alg.one::<Rational>() - ch_line(&alg, -5);
        let want: Vec<Rational> = vec![
            int(0),
            int(5),
            crate::scalar::rat(-25, 2),
            crate::scalar::rat(125, 6),
            crate::scalar::rat(-625, 24),
        ];
        assert_eq!(lhs.coeffs, want);
    }
}
