//! CDF of the standardized von Mises distribution on [-pi, pi].
//!
//! Below kappa = 50 the Fourier series is summed with Hill's truncation
//! rule and backward recursion over the Bessel ratio terms; above it the
//! CDF of Hill's normal approximation `Phi(b sin(z/2))`,
//! `b = sqrt(2/pi) e^kappa / I_0(kappa)`, takes over. Both branches are
//! generic over duals in kappa.

use crate::dual::{Dual, Real, Scalar};
use crate::special::bessel::bessel_i0e;
use crate::special::{domain, SpecialError};

const KAPPA_NORMAL_SWITCH: f64 = 50.0;

fn check_domain<T: Scalar>(z: T, kappa: T) -> Result<(), SpecialError> {
    let zv = z.value().to_f64();
    let kv = kappa.value().to_f64();
    // allow a couple of ulps of slack at the endpoints for wrapped inputs
    let lim = std::f64::consts::PI * (1.0 + 1e-14);
    if !zv.is_finite() || zv.abs() > lim {
        return Err(domain("von_mises_cdf", format!("z = {zv} outside [-pi, pi]")));
    }
    if !(kv > 0.0) || !kv.is_finite() {
        return Err(domain("von_mises_cdf", format!("kappa = {kv} must be finite and > 0")));
    }
    Ok(())
}

/// Truncation point for the series branch; the constants target roughly
/// twelve decimal digits.
fn truncation_terms(kappa: f64) -> usize {
    (28.0 + 0.5 * kappa - 100.0 / (kappa + 5.0)).ceil().max(1.0) as usize
}

fn series_branch<T: Scalar>(z: T, kappa: T) -> T {
    let p = truncation_terms(kappa.value().to_f64());
    let sz = z.sin();
    let cz = z.cos();
    // start at sin(p z), cos(p z) and rotate down one multiple per step
    let pz = T::lit(p as f64) * z;
    let mut sn = pz.sin();
    let mut cn = pz.cos();
    let mut ratio = T::zero(); // backward recursion over I_n / I_{n-1}
    let mut acc = T::zero();
    for n in (1..p).rev() {
        let s_next = sn * cz - cn * sz;
        cn = cn * cz + sn * sz;
        sn = s_next;
        let nf = T::lit(n as f64);
        ratio = T::one() / ((nf + nf) / kappa + ratio);
        acc = ratio * (sn / nf + acc);
    }
    let two_pi = T::lit(std::f64::consts::TAU);
    T::lit(0.5) + z / two_pi + acc / T::lit(std::f64::consts::PI)
}

fn normal_branch<T: Scalar>(z: T, kappa: T) -> T {
    // b = sqrt(2/pi) e^kappa / I_0(kappa), evaluated through the scaled
    // Bessel so nothing overflows
    let b = T::lit((2.0 / std::f64::consts::PI).sqrt()) / bessel_i0e(kappa);
    let arg = b * (z * T::lit(0.5)).sin();
    // Phi(arg)
    T::lit(0.5) * (-arg / T::lit(std::f64::consts::SQRT_2)).erfc()
}

/// `F(z | 0, kappa)` on [-pi, pi].
pub fn von_mises_cdf<T: Scalar>(z: T, kappa: T) -> Result<T, SpecialError> {
    check_domain(z, kappa)?;
    if kappa.value().to_f64() < KAPPA_NORMAL_SWITCH {
        Ok(series_branch(z, kappa))
    } else {
        Ok(normal_branch(z, kappa))
    }
}

/// `dF(z | 0, kappa)/dkappa` by forward-mode differentiation.
pub fn von_mises_cdf_dkappa_ad<R: Real>(z: R, kappa: R) -> Result<R, SpecialError> {
    von_mises_cdf(Dual::constant(z), Dual::variable(kappa)).map(|d| d.tan)
}

/// Density of vonMises(0, kappa): `exp(kappa cos z) / (2 pi I_0(kappa))`,
/// computed in scaled form.
pub fn von_mises_pdf(z: f64, kappa: f64) -> f64 {
    (kappa * (z.cos() - 1.0)).exp() / (std::f64::consts::TAU * bessel_i0e(kappa))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn symmetric_about_zero() {
        for k in [0.01f64, 0.5, 2.0, 10.0, 49.0, 80.0] {
            let f = von_mises_cdf(0.0, k).unwrap();
            assert!((f - 0.5).abs() < 1e-14, "F(0|{k}) = {f}");
        }
    }

    #[test]
    fn support_endpoints() {
        for k in [0.1, 2.0, 30.0, 200.0] {
            assert!((von_mises_cdf(PI, k).unwrap() - 1.0).abs() < 1e-12);
            assert!(von_mises_cdf(-PI, k).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn reference_values_from_bessel_series() {
        // frozen from a 400-term arbitrary-precision Fourier series
        let cases: [(f64, f64, f64); 4] = [
            (1.0, 2.0, 0.88957773695503653455),
            (0.5, 0.5, 0.62087702681595404344),
            (-2.0, 10.0, 1.0518147714716647802e-7),
            (2.0, 0.01, 0.81975555369517935031),
        ];
        for (z, k, want) in cases {
            let got = von_mises_cdf(z, k).unwrap();
            assert!(
                (got - want).abs() < 1e-12,
                "F({z}|{k}) = {got}, want {want}"
            );
        }
    }

    #[test]
    fn dkappa_reference_values() {
        let cases: [(f64, f64, f64); 4] = [
            (1.0, 2.0, 0.069628588185737769801),
            (0.5, 0.5, 0.086670961829133322132),
            (-2.0, 10.0, -1.5531116179820093145e-7),
            (2.0, 0.01, 0.14441245682576813795),
        ];
        for (z, k, want) in cases {
            let got = von_mises_cdf_dkappa_ad(z, k).unwrap();
            assert!(
                (got - want).abs() < 1e-12,
                "dF/dk({z}|{k}) = {got}, want {want}"
            );
        }
        // symmetry point: derivative vanishes at z = 0
        assert!(von_mises_cdf_dkappa_ad(0.0f64, 2.0).unwrap().abs() < 1e-15);
    }

    #[test]
    fn branch_continuity_at_switch() {
        // value continuity across the series/normal-approximation switch
        for z in [-2.8f64, -1.0, -0.3, 0.4, 1.5, 3.0] {
            let lo = von_mises_cdf(z, 50.0 - 1e-3).unwrap();
            let hi = von_mises_cdf(z, 50.0 + 1e-3).unwrap();
            assert!((lo - hi).abs() < 1e-5, "z = {z}: {lo} vs {hi}");
        }
        // frozen reference just below the switch
        let got = von_mises_cdf(1.0f64, 49.9).unwrap();
        assert!((got - 0.99999999999280064181).abs() < 1e-12);
    }

    #[test]
    fn tangent_continuity_at_switch() {
        // the normal-approximation branch carries an intrinsic error of a
        // few 1e-7 absolute at the switch, which bounds what the tangents
        // can agree to
        for z in [-0.5f64, 0.2, 1.0] {
            let lo = von_mises_cdf_dkappa_ad(z, 49.999).unwrap();
            let hi = von_mises_cdf_dkappa_ad(z, 50.001).unwrap();
            assert!(
                (lo - hi).abs() < 2e-3 * lo.abs().max(1e-6),
                "z = {z}: {lo} vs {hi}"
            );
        }
    }

    #[test]
    fn nondecreasing_in_z() {
        for k in [0.01, 1.0, 10.0, 75.0] {
            let mut prev = -1.0f64;
            for i in 0..=200 {
                let z = -PI + (i as f64) * (2.0 * PI / 200.0);
                let f = von_mises_cdf(z, k).unwrap();
                assert!(f >= prev - 1e-15, "k={k} z={z}");
                assert!((-1e-15..=1.0 + 1e-15).contains(&f));
                prev = f;
            }
        }
    }

    #[test]
    fn domain_errors() {
        assert!(von_mises_cdf(3.2f64, 1.0).is_err());
        assert!(von_mises_cdf(0.0f64, 0.0).is_err());
        assert!(von_mises_cdf(f64::NAN, 1.0).is_err());
        assert!(von_mises_cdf(0.0f64, f64::NAN).is_err());
    }

    #[test]
    fn pdf_is_normalized_density() {
        // trapezoid integral of the density over [-pi, pi] is 1
        let k = 3.0;
        let n = 20_000;
        let h = 2.0 * PI / n as f64;
        let mut total = 0.0;
        for i in 0..=n {
            let z = -PI + i as f64 * h;
            let w = if i == 0 || i == n { 0.5 } else { 1.0 };
            total += w * von_mises_pdf(z, k);
        }
        assert!((total * h - 1.0).abs() < 1e-10);
    }

    #[test]
    fn single_precision_series() {
        let got = von_mises_cdf(1.0f32, 2.0f32).unwrap();
        assert!((got - 0.8895777).abs() < 1e-5);
        let d = von_mises_cdf_dkappa_ad(1.0f32, 2.0f32).unwrap();
        assert!((d - 0.069628588f32).abs() < 1e-5);
    }
}
