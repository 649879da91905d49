//! Property-based invariants: structural identities that must hold for any
//! admissible inputs, not just the curated acceptance grids.

use bulkcc::binomial::{self, BinomialModel};
use bulkcc::{correction, coupling, gauss};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// cdf(a) + survival(a+1) = 1 exactly in rational arithmetic.
    #[test]
    fn exact_complement(m in 1u64..400, num in 1u64..6, a in 0u64..400) {
        let den = 6u64;
        prop_assume!(num < den && a < m);
        let model = BinomialModel::new(m, num, den).unwrap();
        let lhs = model.cdf_exact(a).unwrap().value
            + model.survival_exact(a + 1).unwrap().value;
        prop_assert!(num_traits::One::is_one(&lhs));
    }

    /// The quantile is the generalized inverse: cdf(k-1) < p <= cdf(k).
    #[test]
    fn quantile_is_generalized_inverse(m in 2u64..300, p in 1e-9f64..1.0) {
        let model = BinomialModel::new(m, 1, 2).unwrap();
        let table = model.cdf_f64_table().unwrap();
        let k = coupling::quantile_exact(&model, &table, p).unwrap().k as usize;
        prop_assert!(table[k] >= p);
        if k > 0 {
            prop_assert!(table[k - 1] < p);
        }
    }

    /// At x = 1/2 the correction minus 1/2 is an odd function of the
    /// standardized coordinate of a - 1/2, which vanishes at a = m/2 + 1/2.
    #[test]
    fn half_case_correction_is_odd(m in (2u64..2000).prop_map(|v| 2 * v), h in 0.0f64..20.0) {
        let model = BinomialModel::new(m, 1, 2).unwrap();
        let center = m as f64 / 2.0 + 0.5;
        let up = correction::c_star_at(&model, center + h).c_star - 0.5;
        let dn = correction::c_star_at(&model, center - h).c_star - 0.5;
        prop_assert!((up + dn).abs() <= 1e-12 * (1.0 + up.abs()));
    }

    /// The cubic inversion round-trips: plugging the closed-form root back
    /// into s^3/(3 m^2) + (1 - 1/(12 m)) s recovers the input coordinate.
    #[test]
    fn cubic_inverse_round_trip(m in 100u64..1_000_000, t in -1.0f64..1.0) {
        let fm = m as f64;
        let z_tilde = t * (fm * fm.ln()).sqrt();
        let c = coupling::cubic_inverse(m, z_tilde).unwrap();
        let s = c.s_cardano;
        let back = s * s * s / (3.0 * fm * fm) + (1.0 - 1.0 / (12.0 * fm)) * s;
        prop_assert!((back - z_tilde).abs() <= 1e-12 * (1.0 + z_tilde.abs()));
    }

    /// Continuous and exact cdf agree beyond test-grid m as well.
    #[test]
    fn incomplete_beta_matches_exact(m in 1u64..800, num in 1u64..10, aq in 0.0f64..1.0) {
        let den = 10u64;
        prop_assume!(num < den);
        let model = BinomialModel::new(m, num, den).unwrap();
        let a = (aq * m as f64) as u64;
        let exact = model.cdf_exact(a).unwrap().as_real;
        let real = binomial::cdf_real(m, model.x(), a).unwrap();
        prop_assert!((real - exact).abs() <= 1e-12);
    }

    /// Gaussian tail moments are decreasing in the cut and positive for
    /// even orders.
    #[test]
    fn tail_moments_monotone(j in 0u32..7, d in -6.0f64..6.0) {
        let j = 2 * (j / 2); // even orders
        let lo = gauss::tail_moment(j, d).unwrap();
        let hi = gauss::tail_moment(j, d + 0.25).unwrap();
        prop_assert!(lo >= hi - 1e-15);
        prop_assert!(hi >= 0.0);
    }
}
