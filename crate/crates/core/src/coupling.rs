//! Quantile coupling of a Binomial(m, 1/2) variable to a standard normal:
//! X = F*(Phi(Z)), the Tusnady-type residual bound in the bulk, the cubic
//! inversion from the proof, and the deterministic residual series behind
//! the illustration figure.

use rand_core::{RngCore, SeedableRng};

use crate::binomial::{self, BinomialModel, DEFAULT_EXACT_CEILING};
use crate::error::{Error, Result};
use crate::gauss::normal_cdf;

/// Quantile F*(p) = min{k : cdf(k) >= p}, with a tie flag when p sits
/// within oracle resolution of a cdf step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuantileResult {
    pub k: u64,
    pub near_tie: bool,
}

fn check_p(p: f64) -> Result<()> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::Domain(format!(
            "quantile needs p in (0, 1], got {p}"
        )));
    }
    Ok(())
}

/// Binary-search quantile over a full cdf table (exact values rounded to
/// f64). Near ties are re-resolved against the exact rational cdf.
pub fn quantile_exact(model: &BinomialModel, table: &[f64], p: f64) -> Result<QuantileResult> {
    check_p(p)?;
    debug_assert_eq!(table.len() as u64, model.m() + 1);
    let mut lo = 0u64;
    let mut hi = model.m();
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if table[mid as usize] >= p {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let k = hi;
    // p is a dyadic rational, so the tie can be settled exactly.
    let tol = 1e-13 * p.min(1.0 - p).max(f64::MIN_POSITIVE);
    let near = (table[k as usize] - p).abs() <= tol
        || (k > 0 && (table[k as usize - 1] - p).abs() <= tol);
    if !near {
        return Ok(QuantileResult { k, near_tie: false });
    }
    let p_exact = num_rational::BigRational::from_float(p)
        .ok_or_else(|| Error::Domain(format!("non-finite p = {p}")))?;
    let mut k = k;
    while k > 0 && model.cdf_exact(k - 1)?.value >= p_exact {
        k -= 1;
    }
    while model.cdf_exact(k)?.value < p_exact {
        k += 1;
    }
    Ok(QuantileResult { k, near_tie: true })
}

/// Binary-search quantile through the incomplete-beta cdf; flags near ties
/// (which can flip the result by one unit at the oracle's resolution).
pub fn quantile_real(m: u64, x: f64, p: f64) -> Result<QuantileResult> {
    check_p(p)?;
    let mut lo = 0u64;
    let mut hi = m;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if binomial::cdf_real(m, x, mid)? >= p {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let k = hi;
    let tol = 1e-12 * p.min(1.0 - p).max(f64::MIN_POSITIVE);
    let near_tie = (binomial::cdf_real(m, x, k)? - p).abs() <= tol
        || (k > 0 && (binomial::cdf_real(m, x, k - 1)? - p).abs() <= tol);
    Ok(QuantileResult { k, near_tie })
}

/// F*(p) for Binomial(m, num/den), dispatching on the exact-mode ceiling.
pub fn quantile(m: u64, x_num: u64, x_den: u64, p: f64) -> Result<QuantileResult> {
    if m <= DEFAULT_EXACT_CEILING {
        let model = BinomialModel::new(m, x_num, x_den)?;
        let table = model.cdf_f64_table()?;
        quantile_exact(&model, &table, p)
    } else {
        quantile_real(m, x_num as f64 / x_den as f64, p)
    }
}

/// Reference linear-scan quantile over a cdf table.
pub fn quantile_scan(table: &[f64], p: f64) -> Result<u64> {
    check_p(p)?;
    for (k, &c) in table.iter().enumerate() {
        if c >= p {
            return Ok(k as u64);
        }
    }
    Ok(table.len() as u64 - 1)
}

/// The size threshold under which the coupling bound is certified:
/// sqrt(2 pi) 20^6 / m <= sqrt(log m).
#[derive(Debug, Clone, Copy)]
pub struct ThresholdCheck {
    pub m: u64,
    pub left: f64,
    pub right: f64,
    pub passed: bool,
}

pub fn threshold_check(m: u64) -> Result<ThresholdCheck> {
    if m < 2 {
        return Err(Error::Domain(format!("threshold check needs m >= 2, got {m}")));
    }
    let fm = m as f64;
    let left = (2.0 * std::f64::consts::PI).sqrt() * 20f64.powi(6) / fm;
    let right = fm.ln().sqrt();
    Ok(ThresholdCheck { m, left, right, passed: left <= right })
}

/// Smallest m passing `threshold_check` (the left side decreases in m and
/// the right side increases, so the crossing is unique).
pub fn minimal_coupling_m() -> Result<u64> {
    let mut lo = 2u64;
    let mut hi = 1u64 << 40;
    if !threshold_check(hi)?.passed {
        return Err(Error::Oracle("threshold not reached below 2^40".into()));
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if threshold_check(mid)?.passed {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// One coupled draw: Z = z, X = F*(Phi(z)), Y = m/2 + sqrt(m) z / 2.
#[derive(Debug, Clone, Copy)]
pub struct CouplingSample {
    pub z: f64,
    pub x_m: u64,
    pub y_m: f64,
    /// (z - z^3) / (24 sqrt(m)).
    pub correction: f64,
    /// x_m - y_m - correction.
    pub residual: f64,
    /// 1/2 + 2 * 20^6 / m.
    pub bound: f64,
    /// The quantile sat within oracle resolution of a cdf step.
    pub near_tie: bool,
}

/// Assemble the coupling at coordinate z for Binomial(m, 1/2).
///
/// Requires the size threshold and |z| <= sqrt(log m); outside either the
/// bulk bound does not apply.
pub fn coupling_sample(m: u64, z: f64) -> Result<CouplingSample> {
    let threshold = threshold_check(m)?;
    if !threshold.passed {
        return Err(Error::Threshold { left: threshold.left, right: threshold.right });
    }
    if !z.is_finite() {
        return Err(Error::NonFinite(z));
    }
    let limit = (m as f64).ln().sqrt();
    if z.abs() > limit {
        return Err(Error::OutOfBulk(format!(
            "|z| = {} exceeds sqrt(log m) = {limit}",
            z.abs()
        )));
    }
    let q = quantile(m, 1, 2, normal_cdf(z)?)?;
    Ok(assemble_sample(m, z, q))
}

fn assemble_sample(m: u64, z: f64, q: QuantileResult) -> CouplingSample {
    let fm = m as f64;
    let y_m = fm / 2.0 + fm.sqrt() * z / 2.0;
    let correction = (z - z * z * z) / (24.0 * fm.sqrt());
    CouplingSample {
        z,
        x_m: q.k,
        y_m,
        correction,
        residual: q.k as f64 - y_m - correction,
        bound: 0.5 + 2.0 * 20f64.powi(6) / fm,
        near_tie: q.near_tie,
    }
}

/// The weaker right side without the cubic correction:
/// 1/2 + (1/24) sqrt(log m / m) + |z|^3/(24 sqrt(m)) + 2 * 20^6 / m.
pub fn weaker_bound(m: u64, z: f64) -> f64 {
    let fm = m as f64;
    0.5 + (fm.ln() / fm).sqrt() / 24.0 + z.abs().powi(3) / (24.0 * fm.sqrt())
        + 2.0 * 20f64.powi(6) / fm
}

/// One verified point of the bulk coupling sweep.
#[derive(Debug, Clone, Copy)]
pub struct TusnadyCheckPoint {
    pub z: f64,
    pub x_m: u64,
    pub residual: f64,
    pub bound: f64,
    /// |x_m - y_m| against the correction-free weaker right side.
    pub plain_gap: f64,
    pub weaker: f64,
    pub passed: bool,
    pub passed_weaker: bool,
    /// Quantile near-tie: a one-unit instrument slack applies.
    pub near_tie: bool,
}

/// z-grid for the coupling sweep: `interior` Chebyshev points plus the two
/// endpoints of [-sqrt(log m), sqrt(log m)], sorted ascending.
pub fn coupling_grid(m: u64, interior: usize) -> Vec<f64> {
    let limit = (m as f64).ln().sqrt();
    let n = interior;
    let mut grid = Vec::with_capacity(n + 2);
    grid.push(-limit);
    for i in (1..=n).rev() {
        grid.push(limit * (std::f64::consts::PI * (2 * i - 1) as f64 / (2 * n) as f64).cos());
    }
    grid.push(limit);
    grid
}

/// Sweep the coupling residual over the bulk grid, checking both the sharp
/// and the correction-free bounds at every point.
pub fn verify_tusnady(m: u64, interior: usize) -> Result<Vec<TusnadyCheckPoint>> {
    use rayon::prelude::*;
    let grid = coupling_grid(m, interior);
    grid.par_iter()
        .map(|&z| {
            let s = coupling_sample(m, z)?;
            let plain_gap = (s.x_m as f64 - s.y_m).abs();
            let weaker = weaker_bound(m, z);
            Ok(TusnadyCheckPoint {
                z,
                x_m: s.x_m,
                residual: s.residual,
                bound: s.bound,
                plain_gap,
                weaker,
                passed: s.residual.abs() <= s.bound,
                passed_weaker: plain_gap <= weaker,
                near_tie: s.near_tie,
            })
        })
        .collect()
}

/// The unique real root of s^3/(3 m^2) + (1 - 1/(12 m)) s = z_tilde, three
/// ways: closed form, Newton refinement, and the Taylor inverse with its
/// Lagrange remainder bound.
#[derive(Debug, Clone, Copy)]
pub struct CubicInversion {
    pub z_tilde: f64,
    pub s_cardano: f64,
    pub s_newton: f64,
    pub s_taylor: f64,
    /// (log m)^(5/2) / m^(3/2), valid for |z_tilde| <= sqrt(m log m).
    pub taylor_error_bound: f64,
}

pub fn cubic_inverse(m: u64, z_tilde: f64) -> Result<CubicInversion> {
    if m == 0 {
        return Err(Error::Domain("cubic inversion needs m >= 1".into()));
    }
    if !z_tilde.is_finite() {
        return Err(Error::NonFinite(z_tilde));
    }
    let fm = m as f64;
    let a = 1.0 / (3.0 * fm * fm);
    let c = 1.0 - 1.0 / (12.0 * fm);

    // Depressed-cubic closed form, arranged without cancellation: with
    // A = z/(2a), C = c/(3a), R = sqrt(A^2 + C^3) and u = cbrt(A + R), the
    // textbook root u - C/u equals 2 A u^2 / (u^4 + C u^2 + C^2), a form
    // whose terms are all positive (the naive difference loses ~8 digits
    // when A << C^(3/2)). Oddness handles negative z.
    let zt = z_tilde.abs();
    let big_a = zt / (2.0 * a);
    let big_c = c / (3.0 * a);
    let root = big_a.hypot(big_c.powf(1.5));
    let u2 = (big_a + root).cbrt().powi(2);
    let s_cardano = if zt == 0.0 {
        0.0
    } else {
        (2.0 * big_a * u2 / (u2 * u2 + big_c * u2 + big_c * big_c)).copysign(z_tilde)
    };

    // Newton from s0 = z_tilde on f(s) = a s^3 + c s - z_tilde.
    let mut s = z_tilde;
    let target = 1e-14 * (1.0 + z_tilde.abs());
    for _ in 0..100 {
        let f = a * s * s * s + c * s - z_tilde;
        if f.abs() <= target {
            break;
        }
        s -= f / (3.0 * a * s * s + c);
    }
    let s_newton = s;

    let s_taylor = z_tilde + z_tilde / (12.0 * fm) - z_tilde.powi(3) / (3.0 * fm * fm);
    Ok(CubicInversion {
        z_tilde,
        s_cardano,
        s_newton,
        s_taylor,
        taylor_error_bound: fm.ln().powf(2.5) / fm.powf(1.5),
    })
}

/// Draw one standard-normal z from the seeded stream (ChaCha8 + Box-Muller);
/// stable across platforms for a fixed seed.
pub fn seeded_normal(seed: u64) -> f64 {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let u1 = ((rng.next_u64() >> 11) as f64 + 1.0) * (1.0 / 9_007_199_254_740_993.0);
    let u2 = (rng.next_u64() >> 11) as f64 * (1.0 / 9_007_199_254_740_992.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Residual series for one instance: a single seeded z held fixed while m
/// runs over [m_lo, m_hi], each residual computed from the exact cdf.
pub fn figure1_series(m_lo: u64, m_hi: u64, seed: u64) -> Result<(f64, Vec<(u64, f64)>)> {
    if m_lo < 1 || m_lo > m_hi || m_hi > DEFAULT_EXACT_CEILING {
        return Err(Error::Domain(format!(
            "series range [{m_lo}, {m_hi}] outside exact-mode capability"
        )));
    }
    let z = seeded_normal(seed);
    let p = normal_cdf(z)?;
    let mut out = Vec::with_capacity((m_hi - m_lo + 1) as usize);
    for m in m_lo..=m_hi {
        let model = BinomialModel::new(m, 1, 2)?;
        let table = model.cdf_f64_table()?;
        let q = quantile_exact(&model, &table, p)?;
        out.push((m, assemble_sample(m, z, q).residual.abs()));
    }
    Ok((z, out))
}
