//! Standard-normal density, distribution and tail-moment primitives.
//!
//! The cdf and survival function go through the complementary error
//! function, with the survival side computed directly (never as `1 - cdf`)
//! so relative accuracy survives in the far tail.

use crate::error::{Error, Result};

/// 1/sqrt(2*pi).
pub const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

pub const SQRT_2PI: f64 = 2.506_628_274_631_000_7;

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// A standard-normal evaluation bundle at one coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalEval {
    pub z: f64,
    pub phi: f64,
    pub cdf: f64,
    pub survival: f64,
}

impl NormalEval {
    pub fn at(z: f64) -> Result<Self> {
        Ok(Self {
            z,
            phi: phi(z)?,
            cdf: normal_cdf(z)?,
            survival: normal_survival(z)?,
        })
    }
}

fn check_finite(z: f64) -> Result<f64> {
    if z.is_finite() {
        Ok(z)
    } else {
        Err(Error::NonFinite(z))
    }
}

/// Standard-normal density (2*pi)^(-1/2) exp(-z^2/2).
///
/// The squared argument is split with an fma so the rounding of `z*z` does
/// not leak into the exponential at large |z|.
pub fn phi(z: f64) -> Result<f64> {
    let z = check_finite(z)?;
    let p = z * z;
    let e = z.mul_add(z, -p); // exact low part of z^2
    Ok(INV_SQRT_2PI * (-0.5 * p).exp() * (-0.5 * e).exp())
}

/// Standard-normal cumulative distribution function.
pub fn normal_cdf(z: f64) -> Result<f64> {
    let z = check_finite(z)?;
    Ok((0.5 * libm::erfc(-z * FRAC_1_SQRT_2)).clamp(0.0, 1.0))
}

/// Standard-normal survival function, computed directly from erfc.
pub fn normal_survival(z: f64) -> Result<f64> {
    let z = check_finite(z)?;
    Ok((0.5 * libm::erfc(z * FRAC_1_SQRT_2)).clamp(0.0, 1.0))
}

/// Upper tail moment M_j(d) = integral of y^j phi(y) over [d, infinity).
///
/// Uses the recursion M_0 = survival(d), M_1 = phi(d),
/// M_j = d^(j-1) phi(d) + (j-1) M_(j-2).
pub fn tail_moment(j: u32, d: f64) -> Result<f64> {
    if j > 12 {
        return Err(Error::UnsupportedOrder(j));
    }
    let d = check_finite(d)?;
    let pd = phi(d)?;
    let mut even = normal_survival(d)?; // M_0
    let mut odd = pd; // M_1
    if j == 0 {
        return Ok(even);
    }
    if j == 1 {
        return Ok(odd);
    }
    let mut dk = d; // d^(order-1) running power
    for order in 2..=j {
        let next = dk * pd + (order - 1) as f64 * if order % 2 == 0 { even } else { odd };
        if order % 2 == 0 {
            even = next;
        } else {
            odd = next;
        }
        dk *= d;
    }
    Ok(if j.is_multiple_of(2) { even } else { odd })
}

/// Upper tail moment of |y|^j: integral of |y|^j phi(y) over [d, infinity).
///
/// For d >= 0 this equals `tail_moment`; for d < 0 the negative part is
/// folded in by symmetry.
pub fn abs_tail_moment(j: u32, d: f64) -> Result<f64> {
    if d >= 0.0 {
        return tail_moment(j, d);
    }
    // int_d^inf |y|^j phi = int_{|d|}^inf y^j phi + int_{-|d|}^{|d|} |y|^j phi
    //                     = 2 * M_j(0) - M_j(|d|)   (even split around 0)
    Ok(2.0 * tail_moment(j, 0.0)? - tail_moment(j, -d)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad;
    use rand_core::{RngCore, SeedableRng};

    #[test]
    fn phi_at_zero_is_inv_sqrt_2pi() {
        assert_eq!(phi(0.0).unwrap(), 0.3989422804014327);
    }

    #[test]
    fn phi_is_even() {
        for z in [0.5, 1.0, 3.25, 17.0] {
            assert_eq!(phi(z).unwrap(), phi(-z).unwrap());
        }
    }

    #[test]
    fn phi_sqrt_log_m_identity() {
        // phi(sqrt(log m)) * sqrt(2 pi) = exp(-log(m)/2) = m^(-1/2)
        let m = 4.0e7f64;
        let lhs = phi(m.ln().sqrt()).unwrap() * SQRT_2PI;
        let rhs = 1.0 / m.sqrt();
        assert!((lhs / rhs - 1.0).abs() < 1e-13);
        assert!(((-m.ln() / 2.0).exp() / rhs - 1.0).abs() < 1e-14);
    }

    #[test]
    fn phi_rejects_non_finite() {
        assert!(phi(f64::NAN).is_err());
        assert!(normal_cdf(f64::INFINITY).is_err());
    }

    #[test]
    fn cdf_at_zero_is_half() {
        assert_eq!(normal_cdf(0.0).unwrap(), 0.5);
    }

    #[test]
    fn mills_ratio_on_grid() {
        for x in [0.1, 0.5, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0] {
            assert!(normal_survival(x).unwrap() <= phi(x).unwrap() / x, "x={x}");
        }
    }

    #[test]
    fn mills_ratio_dense_grid() {
        for i in 1..=10_000 {
            let x = i as f64 * 1e-3 * 12.0; // up to 120 sigma
            let p = phi(x).unwrap();
            if p < 1e-300 {
                // Subnormal quantization can flip the inequality's rounding.
                continue;
            }
            assert!(normal_survival(x).unwrap() * x <= p * (1.0 + 1e-15), "x={x}");
        }
    }

    #[test]
    fn cdf_survival_complement_random() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let u = rng.next_u64() as f64 / u64::MAX as f64;
            let z = 16.0 * (u - 0.5);
            let s = normal_cdf(z).unwrap() + normal_survival(z).unwrap();
            assert!((s - 1.0).abs() <= 1e-15, "z={z} sum={s}");
        }
    }

    #[test]
    fn cdf_symmetry() {
        for z in [0.3, 1.0, 2.5, 6.0] {
            let d = (normal_cdf(-z).unwrap() - normal_survival(z).unwrap()).abs();
            assert!(d <= 1e-15, "z={z}");
        }
    }

    #[test]
    fn tail_moment_closed_forms() {
        for d in [-2.0, 0.0, 3.0] {
            let pd = phi(d).unwrap();
            let sd = normal_survival(d).unwrap();
            assert!((tail_moment(1, d).unwrap() - pd).abs() < 1e-15);
            let m3 = (d * d + 2.0) * pd;
            assert!((tail_moment(3, d).unwrap() - m3).abs() < 1e-13 * (1.0 + m3.abs()));
            let m6 = (d.powi(5) + 5.0 * d.powi(3) + 15.0 * d) * pd + 15.0 * sd;
            assert!((tail_moment(6, d).unwrap() - m6).abs() < 1e-13 * (1.0 + m6.abs()));
        }
    }

    #[test]
    fn tail_moment_identities_m2_m4() {
        for i in 0..200 {
            let d = -5.0 + i as f64 * 0.05;
            let pd = phi(d).unwrap();
            let sd = normal_survival(d).unwrap();
            let m2 = d * pd + sd;
            let m4 = (d.powi(3) + 3.0 * d) * pd + 3.0 * sd;
            assert!((tail_moment(2, d).unwrap() - m2).abs() <= 1e-12 * (1.0 + m2.abs()));
            assert!((tail_moment(4, d).unwrap() - m4).abs() <= 1e-12 * (1.0 + m4.abs()));
        }
    }

    #[test]
    fn tail_moment_rejects_large_order() {
        assert!(matches!(tail_moment(13, 0.0), Err(crate::Error::UnsupportedOrder(13))));
    }

    #[test]
    fn recursion_matches_quadrature() {
        // Independent oracle: adaptive quadrature of y^j phi(y) on [d, d+40],
        // with the remainder beyond d+40 bounded through Mills' ratio.
        for j in 0..=12u32 {
            let mut d = -10.0;
            while d <= 10.0 {
                let f = |y: f64| y.powi(j as i32) * phi(y).unwrap();
                // The honest error scale for a signed quadrature is the
                // integral of |f|: odd moments over d < 0 cancel two large
                // lobes, and far tails need relative rather than absolute
                // resolution.
                let qabs =
                    quad::integrate(|y| f(y).abs(), d, d + 40.0, 1e-15).unwrap().value;
                let tol = (1e-13 * qabs).clamp(1e-280, 1e-15);
                let q = quad::integrate(f, d, d + 40.0, tol).unwrap();
                let m = tail_moment(j, d).unwrap();
                let scale = qabs.max(1e-280);
                assert!(
                    (m - q.value).abs() <= 1e-11 * scale,
                    "j={j} d={d} m={m} q={}",
                    q.value
                );
                d += 0.5;
            }
        }
    }
}
