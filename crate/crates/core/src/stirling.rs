//! Factorial expansion with Lindelof's remainder bound.
//!
//! log n! = (1/2) log(2 pi) + (n + 1/2) log n - n + 1/(12 n) + lambda_n,
//! with |lambda_n| <= 1/(360 n^3). The residual is measured against the
//! exact big-integer factorial with an arbitrary-precision logarithm so no
//! cancellation is lost at large n.

use num_bigint::{BigInt, BigUint};

use crate::bigfloat::{self, PREC};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct StirlingExpansion {
    pub n: u64,
    pub log_factorial_exact: f64,
    pub lambda_n: f64,
    pub lambda_bound: f64,
}

impl StirlingExpansion {
    pub fn holds(&self) -> bool {
        self.lambda_n.abs() <= self.lambda_bound
    }
}

/// |lambda_n| <= 1/(360 n^3).
pub fn lambda_bound(n: u64) -> f64 {
    1.0 / (360.0 * (n as f64).powi(3))
}

fn lambda_from_factorial(n: u64, factorial: &BigUint) -> StirlingExpansion {
    let ln_fact = bigfloat::fp_ln_big(factorial);
    // (n + 1/2) ln n = (2n + 1) ln(n) / 2
    let ln_n = bigfloat::fp_ln_big(&BigUint::from(n));
    let main = (bigfloat::fp_ln_2pi() >> 1)
        + ((BigInt::from(2 * n + 1) * &ln_n) >> 1)
        - (BigInt::from(n) << PREC)
        + ((BigInt::from(1u8) << PREC) / BigInt::from(12 * n));
    let lambda = bigfloat::fp_to_f64(&(&ln_fact - &main));
    StirlingExpansion {
        n,
        log_factorial_exact: bigfloat::fp_to_f64(&ln_fact),
        lambda_n: lambda,
        lambda_bound: lambda_bound(n),
    }
}

/// Residual of the factorial expansion at `n`, from the exact factorial.
pub fn stirling_lindelof(n: u64) -> Result<StirlingExpansion> {
    if n == 0 {
        return Err(Error::Domain("factorial expansion starts at n = 1".into()));
    }
    let mut factorial = BigUint::from(1u8);
    for i in 2..=n {
        factorial *= i;
    }
    Ok(lambda_from_factorial(n, &factorial))
}

/// Residuals for every n in 1..=n_max, sharing one incremental factorial.
pub fn lindelof_sweep(n_max: u64) -> Result<Vec<StirlingExpansion>> {
    if n_max == 0 {
        return Err(Error::Domain("sweep needs n_max >= 1".into()));
    }
    let mut out = Vec::with_capacity(n_max as usize);
    let mut factorial = BigUint::from(1u8);
    for n in 1..=n_max {
        factorial *= n;
        out.push(lambda_from_factorial(n, &factorial));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_zero() {
        assert!(stirling_lindelof(0).is_err());
    }

    #[test]
    fn lambda_at_one() {
        let s = stirling_lindelof(1).unwrap();
        // log 1! = 0, so lambda_1 = -(1/2 log(2 pi) + 1/2 * 0 - 1 + 1/12)
        let expect = -(0.5 * (2.0 * std::f64::consts::PI).ln() - 1.0 + 1.0 / 12.0);
        assert!((s.lambda_n - expect).abs() < 1e-14);
        assert!((s.lambda_n + 0.002272).abs() < 1e-6);
        assert!((s.lambda_bound - 1.0 / 360.0).abs() < 1e-18);
        assert!(s.holds());
    }

    #[test]
    fn lambda_at_ten() {
        let s = stirling_lindelof(10).unwrap();
        assert!(s.lambda_n.abs() <= 1.0 / 360_000.0);
        // 10! = 3628800
        assert!((s.log_factorial_exact - 3_628_800f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn lambda_at_ten_thousand() {
        let s = stirling_lindelof(10_000).unwrap();
        assert!(s.lambda_n.abs() <= 1.0 / (360.0 * 1e12));
    }

    #[test]
    fn sweep_matches_single_evaluations() {
        let sweep = lindelof_sweep(50).unwrap();
        assert_eq!(sweep.len(), 50);
        for s in &sweep {
            let single = stirling_lindelof(s.n).unwrap();
            assert_eq!(s.lambda_n, single.lambda_n);
            assert!(s.holds(), "n={}", s.n);
        }
    }
}
