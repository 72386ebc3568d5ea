//! Exact log-densities for the supported families.

use crate::special::bessel::bessel_i0e;
use crate::special::{domain, lgamma, SpecialError};

const LN_2PI: f64 = 1.8378770664093454836;

pub fn log_pdf_normal(z: f64, mu: f64, sigma: f64) -> Result<f64, SpecialError> {
    if !(sigma > 0.0) {
        return Err(domain("log_pdf_normal", format!("sigma = {sigma}")));
    }
    let u = (z - mu) / sigma;
    Ok(-0.5 * LN_2PI - sigma.ln() - 0.5 * u * u)
}

pub fn log_pdf_gamma(z: f64, shape: f64, rate: f64) -> Result<f64, SpecialError> {
    if !(shape > 0.0 && rate > 0.0) {
        return Err(domain("log_pdf_gamma", format!("shape = {shape}, rate = {rate}")));
    }
    if !(z > 0.0) {
        return Err(domain("log_pdf_gamma", format!("z = {z} off support")));
    }
    Ok(shape * rate.ln() + (shape - 1.0) * z.ln() - rate * z - lgamma(shape))
}

pub fn log_pdf_beta(z: f64, a: f64, b: f64) -> Result<f64, SpecialError> {
    if !(a > 0.0 && b > 0.0) {
        return Err(domain("log_pdf_beta", format!("a = {a}, b = {b}")));
    }
    if !(z > 0.0 && z < 1.0) {
        return Err(domain("log_pdf_beta", format!("z = {z} off support")));
    }
    Ok((a - 1.0) * z.ln() + (b - 1.0) * (1.0 - z).ln() - (lgamma(a) + lgamma(b) - lgamma(a + b)))
}

/// Dirichlet log-density on the open simplex.
pub fn log_pdf_dirichlet(z: &[f64], alphas: &[f64]) -> Result<f64, SpecialError> {
    if z.len() != alphas.len() || z.len() < 2 {
        return Err(domain("log_pdf_dirichlet", "dimension mismatch"));
    }
    let total: f64 = z.iter().sum();
    if (total - 1.0).abs() > 1e-8 || z.iter().any(|&v| !(v > 0.0)) {
        return Err(domain("log_pdf_dirichlet", "z not on the open simplex"));
    }
    let alpha_sum: f64 = alphas.iter().sum();
    let mut acc = lgamma(alpha_sum);
    for (&zi, &ai) in z.iter().zip(alphas) {
        if !(ai > 0.0) {
            return Err(domain("log_pdf_dirichlet", format!("alpha = {ai}")));
        }
        acc += (ai - 1.0) * zi.ln() - lgamma(ai);
    }
    Ok(acc)
}

pub fn log_pdf_student_t(z: f64, nu: f64) -> Result<f64, SpecialError> {
    if !(nu > 0.0) {
        return Err(domain("log_pdf_student_t", format!("nu = {nu}")));
    }
    Ok(lgamma(0.5 * (nu + 1.0))
        - lgamma(0.5 * nu)
        - 0.5 * (nu * std::f64::consts::PI).ln()
        - 0.5 * (nu + 1.0) * (z * z / nu).ln_1p())
}

/// Von Mises log-density; the support is the whole circle, so any finite
/// angle is valid.
pub fn log_pdf_von_mises(z: f64, mu: f64, kappa: f64) -> Result<f64, SpecialError> {
    if !(kappa > 0.0) || !kappa.is_finite() {
        return Err(domain("log_pdf_von_mises", format!("kappa = {kappa}")));
    }
    if !z.is_finite() || !mu.is_finite() {
        return Err(domain("log_pdf_von_mises", format!("z = {z}, mu = {mu}")));
    }
    Ok(kappa * ((z - mu).cos() - 1.0) - LN_2PI - bessel_i0e(kappa).ln())
}

/// Digamma-based parameter score `d log q(z|phi) / d phi` for the families
/// the score-function estimator supports.
pub mod score {
    use crate::special::bessel::bessel_i_ratio;
    use crate::special::digamma;

    pub fn gamma(z: f64, shape: f64, rate: f64) -> [f64; 2] {
        [
            rate.ln() + z.ln() - digamma(shape),
            shape / rate - z,
        ]
    }

    pub fn dirichlet(z: &[f64], alphas: &[f64]) -> Vec<f64> {
        let s: f64 = alphas.iter().sum();
        let ds = digamma(s);
        z.iter()
            .zip(alphas)
            .map(|(&zi, &ai)| ds - digamma(ai) + zi.ln())
            .collect()
    }

    /// [d/dmu, d/dkappa] of the von Mises log-density.
    pub fn von_mises(z: f64, mu: f64, kappa: f64) -> [f64; 2] {
        [
            kappa * (z - mu).sin(),
            (z - mu).cos() - bessel_i_ratio(kappa),
        ]
    }

    pub fn beta(z: f64, a: f64, b: f64) -> [f64; 2] {
        let dab = digamma(a + b);
        [dab - digamma(a) + z.ln(), dab - digamma(b) + (1.0 - z).ln()]
    }

    pub fn normal(z: f64, mu: f64, sigma: f64) -> [f64; 2] {
        let u = (z - mu) / sigma;
        [u / sigma, (u * u - 1.0) / sigma]
    }
}
