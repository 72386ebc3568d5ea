//! Modified Bessel functions of the first kind.
//!
//! Everything is exponentially scaled internally (`e^-x I_j(x)`), so large
//! concentrations never overflow. Ratios come from a continued fraction,
//! full order arrays from Miller's backward recursion normalized with
//! `e^-x (I_0 + 2 sum_j I_j) = 1`.

use num_traits::Zero;

use crate::dual::{Real, Scalar};
use crate::special::{domain, SpecialError};

// Asymptotic series coefficients for e^-x I_0(x) sqrt(2 pi x),
// a_k = prod_j (2j-1)^2 / (k! 8^k).
const I0E_ASYMPT: [f64; 13] = [
    1.0,
    0.125,
    0.0703125,
    0.0732421875,
    0.112152099609375,
    0.22710800170898438,
    0.57250142097473145,
    1.7277275025844574,
    6.0740420012734830,
    24.380529699556064,
    110.01714027112172,
    551.33589613141679,
    3038.0905109741613,
];

/// `e^-x I_0(x)`, generic over duals so concentration derivatives flow
/// through. Power series below x = 15, asymptotic expansion above.
pub fn bessel_i0e<T: Scalar>(x: T) -> T {
    debug_assert!(x.value() >= T::R::zero());
    if x.value() < T::R::from_f64(20.0) {
        let quarter_sq = x * x * T::lit(0.25);
        let mut term = T::one();
        let mut sum = T::one();
        for k in 1..400 {
            term = term * quarter_sq / T::lit((k * k) as f64);
            sum = sum + term;
            if T::settled(term, sum) {
                break;
            }
        }
        sum * (-x).exp()
    } else {
        let inv = T::one() / x;
        let mut acc = T::lit(I0E_ASYMPT[12]);
        for k in (0..12).rev() {
            acc = acc * inv + T::lit(I0E_ASYMPT[k]);
        }
        let two_pi = T::lit(std::f64::consts::TAU);
        acc / (two_pi * x).sqrt()
    }
}

/// `I_1(x) / I_0(x)` by the Gautschi continued fraction for consecutive
/// order ratios, stable for every positive x.
pub fn bessel_i_ratio(x: f64) -> f64 {
    assert!(x > 0.0, "bessel_i_ratio needs x > 0");
    // I_{nu+1}/I_nu = 1 / (2(nu+1)/x + 1 / (2(nu+2)/x + ...)), nu = 0
    let fpmin = 1e-300f64;
    let mut c = fpmin;
    let mut d = 0.0f64;
    let mut h = fpmin;
    for m in 1..=200 {
        let b = 2.0 * m as f64 / x;
        d = b + d;
        if d.abs() < fpmin {
            d = fpmin;
        }
        c = b + 1.0 / c;
        if c.abs() < fpmin {
            c = fpmin;
        }
        d = 1.0 / d;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h
}

/// Scaled orders `e^-x I_j(x)` for `j = 0..=max_order` by Miller's
/// backward recursion.
pub fn bessel_i_scaled(max_order: usize, x: f64) -> Result<Vec<f64>, SpecialError> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain("bessel_i_scaled", format!("x = {x} must be finite and > 0")));
    }
    let start = max_order + 20 + (2.0 * x) as usize;
    let mut raw = vec![0.0f64; max_order + 1];
    let mut above = 0.0f64; // unnormalized I_{j+1}
    let mut cur = 1e-280f64; // unnormalized I_j, arbitrary seed magnitude
    let mut tail = 0.0f64; // sum of unnormalized I_j for j >= 1
    for j in (0..=start).rev() {
        if j <= max_order {
            raw[j] = cur;
        }
        if j >= 1 {
            tail += cur;
        }
        // I_{j-1} = (2j/x) I_j + I_{j+1}
        let below = (2.0 * j as f64 / x) * cur + above;
        above = cur;
        cur = below;
        if cur > 1e260 {
            // rescale everything in flight; already-stored high orders sink
            // toward zero, which is where they belong relative to I_0
            cur *= 1e-260;
            above *= 1e-260;
            tail *= 1e-260;
            for v in raw.iter_mut() {
                *v *= 1e-260;
            }
        }
    }
    // normalize with e^-x (I_0 + 2 sum_{j>=1} I_j) = 1; raw[0] holds the
    // unnormalized I_0
    let norm = raw[0] + 2.0 * tail;
    for v in raw.iter_mut() {
        *v /= norm;
    }
    Ok(raw)
}

/// `I_order(x)`, unscaled. Guarded against overflow of the e^x factor.
pub fn bessel_i(order: usize, x: f64) -> Result<f64, SpecialError> {
    if x > 700.0 {
        return Err(domain("bessel_i", format!("e^{x} overflows the unscaled value")));
    }
    let scaled = bessel_i_scaled(order, x)?;
    Ok(scaled[order] * x.exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    // frozen from 40-digit series evaluations
    const I0_2: f64 = 2.2795853023360672674;
    const I1_2: f64 = 1.5906368546373290634;

    /// Independent oracle: ascending power series for I_j summed to
    /// convergence in double precision.
    fn bessel_series(order: usize, x: f64) -> f64 {
        let half = x / 2.0;
        let mut term = half.powi(order as i32);
        for k in 1..=order {
            term /= k as f64;
        }
        let mut sum = term;
        for k in 1..300 {
            term *= half * half / (k as f64 * (k + order) as f64);
            sum += term;
            if term < 1e-18 * sum {
                break;
            }
        }
        sum
    }

    #[test]
    fn small_argument_leading_terms() {
        let s = bessel_i_scaled(1, 1e-8).unwrap();
        let e = (1e-8f64).exp();
        assert!((s[0] * e - 1.0).abs() < 1e-12);
        assert!((s[1] * e - 0.5e-8).abs() < 1e-20);
    }

    #[test]
    fn ratio_at_two_matches_series_oracle() {
        let want = bessel_series(1, 2.0) / bessel_series(0, 2.0);
        assert!((want - 0.69777465796400798201).abs() < 1e-14);
        assert!((bessel_i_ratio(2.0) - want).abs() < 1e-14);
    }

    #[test]
    fn ratio_is_increasing_in_kappa() {
        let grid = [0.01, 0.1, 1.0, 10.0];
        let vals: Vec<f64> = grid.iter().map(|&k| bessel_i_ratio(k)).collect();
        for w in vals.windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn scaled_array_matches_series_oracle() {
        for &x in &[0.01, 0.1, 1.0, 2.0, 10.0] {
            let scaled = bessel_i_scaled(12, x).unwrap();
            for j in 0..=12 {
                let want = bessel_series(j, x) * (-x).exp();
                let got = scaled[j];
                let tol = 1e-14 * want.abs().max(1e-300);
                assert!(
                    (got - want).abs() <= tol.max(1e-305),
                    "I_{j}e({x}): got {got}, want {want}"
                );
            }
        }
    }

    #[test]
    fn unscaled_value() {
        assert!((bessel_i(0, 2.0).unwrap() - I0_2).abs() < 1e-13);
        assert!((bessel_i(1, 2.0).unwrap() - I1_2).abs() < 1e-13);
        assert!(bessel_i(0, 701.0).is_err());
    }

    #[test]
    fn i0e_series_asymptotic_agree_at_switch() {
        for x in [19.999f64, 20.001, 30.0, 50.0] {
            let series = {
                let mut term = 1.0f64;
                let mut sum = 1.0f64;
                for k in 1..1000 {
                    term *= x * x / (4.0 * (k * k) as f64);
                    sum += term;
                    if term < 1e-18 * sum {
                        break;
                    }
                }
                sum * (-x).exp()
            };
            let got = bessel_i0e(x);
            assert!(
                (got - series).abs() < 1e-12 * series,
                "i0e({x}): {got} vs series {series}"
            );
        }
    }

    #[test]
    fn i0e_dual_tangent_matches_finite_difference() {
        use crate::dual::Dual;
        for &x in &[0.5f64, 3.0, 20.0, 60.0] {
            let d = bessel_i0e(Dual::variable(x));
            let h = 1e-6 * x;
            let fd = (bessel_i0e(x + h) - bessel_i0e(x - h)) / (2.0 * h);
            assert!(
                (d.tan - fd).abs() < 1e-6 * fd.abs().max(1e-12),
                "d/dx i0e({x})"
            );
        }
    }
}
