//! Binomial evaluation in two regimes: exact rational arithmetic for
//! moderate m (the anchor for every tolerance in the test suites) and a
//! real-valued path through the regularized incomplete beta function for
//! large m, with the log-space pmf built on the certified factorial
//! expansion.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::bigfloat::big_ratio_to_f64;
use crate::error::{Error, Result};
use crate::gauss;

/// Default ceiling for exact-mode summation; above this, use the real path.
pub const DEFAULT_EXACT_CEILING: u64 = 20_000;

/// Binomial(m, x) with an exact rational success probability x = num/den.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinomialModel {
    m: u64,
    num: u64,
    den: u64,
    exact_ceiling: u64,
}

/// An exact probability together with its nearest f64.
#[derive(Debug, Clone)]
pub struct ExactProbability {
    pub value: BigRational,
    pub as_real: f64,
}

impl ExactProbability {
    fn from_parts(numer: BigUint, denom: BigUint) -> Self {
        let as_real = big_ratio_to_f64(&numer, &denom);
        let value = BigRational::new(BigInt::from(numer), BigInt::from(denom));
        ExactProbability { value, as_real }
    }
}

/// Inclusive central index range where the standardized coordinate stays
/// within the m^(-1/3) envelope on both sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BulkWindow {
    pub k_min: u64,
    pub k_max: u64,
}

/// Exact tail values at one cut index.
#[derive(Debug, Clone, Copy)]
pub struct TailPoint {
    pub a: u64,
    pub cdf: f64,
    pub survival: f64,
}

impl BinomialModel {
    pub fn new(m: u64, x_num: u64, x_den: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::Domain("m must be >= 1".into()));
        }
        if x_num == 0 || x_num >= x_den {
            return Err(Error::Domain(format!(
                "x = {x_num}/{x_den} must lie strictly inside (0, 1)"
            )));
        }
        let g = x_num.gcd(&x_den);
        Ok(Self {
            m,
            num: x_num / g,
            den: x_den / g,
            exact_ceiling: DEFAULT_EXACT_CEILING,
        })
    }

    pub fn with_exact_ceiling(mut self, ceiling: u64) -> Self {
        self.exact_ceiling = ceiling;
        self
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn x_parts(&self) -> (u64, u64) {
        (self.num, self.den)
    }

    pub fn x(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn mean(&self) -> f64 {
        self.m as f64 * self.x()
    }

    /// sigma_{m,x} = sqrt(m x (1-x)).
    pub fn sigma(&self) -> f64 {
        let x = self.x();
        (self.m as f64 * x * (1.0 - x)).sqrt()
    }

    /// sigma_x = sqrt(x (1-x)).
    pub fn sigma_x(&self) -> f64 {
        let x = self.x();
        (x * (1.0 - x)).sqrt()
    }

    /// Standardized coordinate delta_y = (y - m x) / sigma_{m,x}.
    pub fn delta(&self, y: f64) -> f64 {
        // y - m x with the rational product taken exactly when it fits.
        let diff = if self.m.checked_mul(self.num).is_some() {
            (y * self.den as f64 - (self.m * self.num) as f64) / self.den as f64
        } else {
            y - self.mean()
        };
        diff / self.sigma()
    }

    /// Minimal admissible tau: max{2, 1/x, 1/(1-x)}.
    pub fn minimal_tau(&self) -> f64 {
        let inv_x = self.den as f64 / self.num as f64;
        let inv_1mx = self.den as f64 / (self.den - self.num) as f64;
        inv_x.max(inv_1mx).max(2.0)
    }

    fn check_exact(&self) -> Result<()> {
        if self.m > self.exact_ceiling {
            return Err(Error::Domain(format!(
                "m = {} exceeds the exact-mode ceiling {}; use the real-valued path (cdf_real)",
                self.m, self.exact_ceiling
            )));
        }
        Ok(())
    }

    fn check_index(&self, k: u64) -> Result<()> {
        if k > self.m {
            return Err(Error::Domain(format!("index {k} outside 0..={}", self.m)));
        }
        Ok(())
    }

    /// Common denominator den^m of all exact probabilities.
    fn common_denominator(&self) -> BigUint {
        BigUint::from(self.den).pow(self.m as u32)
    }

    /// Numerator of pmf(k) over the common denominator den^m.
    fn pmf_numerator(&self, k: u64) -> BigUint {
        let p = BigUint::from(self.num);
        let r = BigUint::from(self.den - self.num);
        binomial_coefficient(self.m, k) * p.pow(k as u32) * r.pow((self.m - k) as u32)
    }

    /// P(X = k) as an exact rational.
    pub fn pmf_exact(&self, k: u64) -> Result<ExactProbability> {
        self.check_exact()?;
        self.check_index(k)?;
        Ok(ExactProbability::from_parts(
            self.pmf_numerator(k),
            self.common_denominator(),
        ))
    }

    /// P(X <= a) as an exact rational.
    pub fn cdf_exact(&self, a: u64) -> Result<ExactProbability> {
        self.check_exact()?;
        self.check_index(a)?;
        let mut stream = PmfStream::start(self, 0);
        let mut sum = BigUint::zero();
        for _ in 0..=a {
            sum += &stream.numerator;
            stream.step_up();
        }
        Ok(ExactProbability::from_parts(sum, self.common_denominator()))
    }

    /// P(X >= a) as an exact rational.
    pub fn survival_exact(&self, a: u64) -> Result<ExactProbability> {
        self.check_exact()?;
        self.check_index(a)?;
        let mut stream = PmfStream::start(self, a);
        let mut sum = BigUint::zero();
        for _ in a..=self.m {
            sum += &stream.numerator;
            stream.step_up();
        }
        Ok(ExactProbability::from_parts(sum, self.common_denominator()))
    }

    /// Exact cdf and survival at every a in [a_lo, a_hi], as f64 roundings
    /// of the exact rationals. Single streaming pass; O(m) big-int steps.
    pub fn tail_table(&self, a_lo: u64, a_hi: u64) -> Result<Vec<TailPoint>> {
        self.check_exact()?;
        self.check_index(a_hi)?;
        if a_lo > a_hi {
            return Err(Error::Domain(format!("empty range [{a_lo}, {a_hi}]")));
        }
        let den = self.common_denominator();
        // Tail mass strictly above a_hi.
        let mut upper = BigUint::zero();
        if a_hi < self.m {
            let mut stream = PmfStream::start(self, a_hi + 1);
            for _ in (a_hi + 1)..=self.m {
                upper += &stream.numerator;
                stream.step_up();
            }
        }
        // Walk a from a_hi down to a_lo, accumulating the survival numerator.
        let mut out = Vec::with_capacity((a_hi - a_lo + 1) as usize);
        let mut stream = PmfStream::start(self, a_hi);
        let mut survival_num = upper;
        let mut a = a_hi;
        loop {
            survival_num += &stream.numerator;
            let cdf_num = &den - &survival_num + &stream.numerator;
            out.push(TailPoint {
                a,
                cdf: big_ratio_to_f64(&cdf_num, &den),
                survival: big_ratio_to_f64(&survival_num, &den),
            });
            if a == a_lo {
                break;
            }
            stream.step_down();
            a -= 1;
        }
        out.reverse();
        Ok(out)
    }

    /// Exact pmf values over [k_lo, k_hi] as f64 roundings.
    pub fn pmf_f64_range(&self, k_lo: u64, k_hi: u64) -> Result<Vec<f64>> {
        self.check_exact()?;
        self.check_index(k_hi)?;
        if k_lo > k_hi {
            return Err(Error::Domain(format!("empty range [{k_lo}, {k_hi}]")));
        }
        let den = self.common_denominator();
        let mut stream = PmfStream::start(self, k_lo);
        let mut out = Vec::with_capacity((k_hi - k_lo + 1) as usize);
        for _ in k_lo..=k_hi {
            out.push(big_ratio_to_f64(&stream.numerator, &den));
            stream.step_up();
        }
        Ok(out)
    }

    /// Full exact cdf as f64, indexed by k in 0..=m.
    pub fn cdf_f64_table(&self) -> Result<Vec<f64>> {
        self.check_exact()?;
        let den = self.common_denominator();
        let mut stream = PmfStream::start(self, 0);
        let mut sum = BigUint::zero();
        let mut out = Vec::with_capacity(self.m as usize + 1);
        for _ in 0..=self.m {
            sum += &stream.numerator;
            out.push(big_ratio_to_f64(&sum, &den));
            stream.step_up();
        }
        Ok(out)
    }

    /// Exact bulk membership: |k den - m num|^3 <= m^2 min(num, den-num)^3,
    /// i.e. both standardized slopes stay within m^(-1/3). Cubing both sides
    /// keeps the comparison in integers.
    pub fn in_bulk(&self, k: u64) -> bool {
        if k > self.m {
            return false;
        }
        let lhs = {
            let kd = BigInt::from(k) * BigInt::from(self.den);
            let mn = BigInt::from(self.m) * BigInt::from(self.num);
            let d = (kd - mn).magnitude().clone();
            d.pow(3)
        };
        let rhs = BigUint::from(self.m).pow(2) * BigUint::from(self.num.min(self.den - self.num)).pow(3);
        lhs <= rhs
    }

    /// The tight integer bulk window: closed-form estimate plus local
    /// integer adjustment against the exact membership test.
    pub fn bulk_window(&self) -> BulkWindow {
        let x = self.x();
        let half = (self.m as f64).powf(2.0 / 3.0) * x.min(1.0 - x);
        let center = self.mean();
        let mut k_min = (center - half).ceil().max(0.0) as u64;
        let mut k_max = (center + half).floor().min(self.m as f64) as u64;
        while k_min > 0 && self.in_bulk(k_min - 1) {
            k_min -= 1;
        }
        while !self.in_bulk(k_min) && k_min < self.m {
            k_min += 1;
        }
        while k_max < self.m && self.in_bulk(k_max + 1) {
            k_max += 1;
        }
        while !self.in_bulk(k_max) && k_max > 0 {
            k_max -= 1;
        }
        assert!(k_min <= k_max, "empty bulk window for m={} x={}", self.m, self.x());
        BulkWindow { k_min, k_max }
    }
}

/// C(m, k) by the multiplicative recurrence, multiplying before the (always
/// exact) division. Each step is O(size of the running product); the
/// gcd-reducing generic version is quadratically slower at large k.
fn binomial_coefficient(m: u64, k: u64) -> BigUint {
    debug_assert!(k <= m);
    let k = k.min(m - k);
    let mut c = BigUint::one();
    for i in 0..k {
        c *= m - i;
        c /= i + 1;
    }
    c
}

/// Streaming pmf numerator over the common denominator den^m.
struct PmfStream<'a> {
    model: &'a BinomialModel,
    k: u64,
    numerator: BigUint,
}

impl<'a> PmfStream<'a> {
    fn start(model: &'a BinomialModel, k: u64) -> Self {
        Self { model, k, numerator: model.pmf_numerator(k) }
    }

    /// Advance k -> k+1 (no-op past m).
    fn step_up(&mut self) {
        let (m, p, r) = (self.model.m, self.model.num, self.model.den - self.model.num);
        if self.k >= m {
            return;
        }
        self.numerator *= (m - self.k) * p;
        self.numerator /= (self.k + 1) * r;
        self.k += 1;
    }

    /// Retreat k -> k-1 (no-op below 0).
    fn step_down(&mut self) {
        let (m, p, r) = (self.model.m, self.model.num, self.model.den - self.model.num);
        if self.k == 0 {
            return;
        }
        self.numerator *= self.k * r;
        self.numerator /= (m - self.k + 1) * p;
        self.k -= 1;
    }
}

/// Membership of x in the tau-interior set, plus the derived odds bound.
#[derive(Debug, Clone, Copy)]
pub struct XtauCheck {
    pub member: bool,
    /// max{x/(1-x), (1-x)/x} <= tau, implied by membership.
    pub odds_bounded: bool,
}

/// max{1/x, 1/(1-x)} <= tau membership test.
pub fn xtau_member(x: f64, tau: f64) -> Result<XtauCheck> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::Domain(format!("x = {x} outside (0, 1)")));
    }
    if tau < 2.0 {
        return Err(Error::Domain(format!("tau = {tau} must be >= 2")));
    }
    let slack = 1.0 + 1e-12; // tolerate f64 rounding on exact boundary cases
    let member = (1.0 / x).max(1.0 / (1.0 - x)) <= tau * slack;
    let odds_bounded = (x / (1.0 - x)).max((1.0 - x) / x) <= tau * slack;
    Ok(XtauCheck { member, odds_bounded })
}

/// Stirling remainder J(n) = log n! - (n log n - n + log(2 pi n)/2).
///
/// Exact (from the integer factorial) below the series cutoff; beyond it
/// the asymptotic series truncated at n^(-9) keeps the error under 3e-14.
fn stirling_j(n: u64) -> f64 {
    const CUTOFF: u64 = 16;
    static SMALL: std::sync::OnceLock<[f64; CUTOFF as usize]> = std::sync::OnceLock::new();
    if n < CUTOFF {
        let table = SMALL.get_or_init(|| {
            let mut out = [0.0; CUTOFF as usize];
            let mut factorial = 1u128;
            for i in 1..CUTOFF {
                factorial *= i as u128;
                let fi = i as f64;
                out[i as usize] = (factorial as f64).ln()
                    - (fi * fi.ln() - fi + 0.5 * (2.0 * std::f64::consts::PI * fi).ln());
            }
            out
        });
        return table[n as usize];
    }
    let r = 1.0 / (n as f64);
    let r2 = r * r;
    (((r2 / 1188.0 - 1.0 / 1680.0) * r2 + 1.0 / 1260.0) * r2 - 1.0 / 360.0) * r2 * r + r / 12.0
}

/// Log pmf of Binomial(m, x) at k, with a certified absolute error bound.
///
/// Grouped so that no term grows like m log m: the factorial remainders
/// and float rounding of the grouped terms are the whole budget.
pub fn log_pmf_real(m: u64, x: f64, k: u64) -> Result<(f64, f64)> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::Domain(format!("x = {x} outside (0, 1)")));
    }
    if k > m {
        return Err(Error::Domain(format!("index {k} outside 0..={m}")));
    }
    let fm = m as f64;
    if k == 0 {
        return Ok((fm * (-x).ln_1p(), 1e-13 * (1.0 + fm * x)));
    }
    if k == m {
        return Ok((fm * x.ln(), 1e-13 * (1.0 + fm * (1.0 - x))));
    }
    let fk = k as f64;
    let fr = (m - k) as f64;
    // d = k - m x with a single rounding via fma.
    let d = fm.mul_add(-x, fk);
    let t1 = fk * (d / (fm * x)).ln_1p();
    let t2 = fr * (-d / (fm * (1.0 - x))).ln_1p();
    let half_log = 0.5 * (fm / (fk * fr)).ln();
    let corr = stirling_j(m) - stirling_j(k) - stirling_j(m - k);
    let lp = -0.5 * (2.0 * std::f64::consts::PI).ln() + half_log - t1 - t2 + corr;
    let float_slack = f64::EPSILON * (8.0 + 4.0 * (t1.abs() + t2.abs() + half_log.abs()));
    Ok((lp, 1e-13 + float_slack))
}

/// pmf of Binomial(m, x) at k through the log-space path.
pub fn pmf_real(m: u64, x: f64, k: u64) -> Result<f64> {
    Ok(log_pmf_real(m, x, k)?.0.exp())
}

/// Continued fraction for the regularized incomplete beta (Lentz).
fn betacf(a: f64, b: f64, x: f64) -> Result<f64> {
    const FPMIN: f64 = 1e-300;
    const EPS: f64 = 3e-16;
    let max_iter = 1000 + 40 * (a.min(b).sqrt() as usize);
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < FPMIN {
        d = FPMIN;
    }
    d = 1.0 / d;
    let mut h = d;
    for i in 1..=max_iter {
        let fi = i as f64;
        let i2 = 2.0 * fi;
        let aa = fi * (b - fi) * x / ((qam + i2) * (a + i2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + fi) * (qab + fi) * x / ((a + i2) * (qap + i2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            return Ok(h);
        }
    }
    Err(Error::Oracle(format!(
        "incomplete beta continued fraction did not converge (a={a}, b={b}, x={x})"
    )))
}

/// Regularized incomplete beta I_x(a, b) for positive integer a, b.
///
/// The prefactor goes through the certified log-space pmf, so no raw
/// log-gamma cancellation enters at large arguments.
pub fn beta_reg_int(a: u64, b: u64, x: f64) -> Result<f64> {
    if a == 0 || b == 0 {
        return Err(Error::Domain("incomplete beta needs a, b >= 1".into()));
    }
    if x <= 0.0 {
        return Ok(0.0);
    }
    if x >= 1.0 {
        return Ok(1.0);
    }
    let (fa, fb) = (a as f64, b as f64);
    let n = a + b - 1;
    if x < (fa + 1.0) / (fa + fb + 2.0) {
        let lp = log_pmf_real(n, x, a)?.0 + (-x).ln_1p();
        Ok((lp.exp() * betacf(fa, fb, x)?).clamp(0.0, 1.0))
    } else {
        let lp = log_pmf_real(n, 1.0 - x, b)?.0 + x.ln();
        Ok((1.0 - lp.exp() * betacf(fb, fa, 1.0 - x)?).clamp(0.0, 1.0))
    }
}

/// P(X <= a) for Binomial(m, x) through the incomplete beta.
pub fn cdf_real(m: u64, x: f64, a: u64) -> Result<f64> {
    if a > m {
        return Err(Error::Domain(format!("index {a} outside 0..={m}")));
    }
    if a == m {
        return Ok(1.0);
    }
    beta_reg_int(m - a, a + 1, 1.0 - x)
}

/// P(X >= a) for Binomial(m, x) through the incomplete beta.
pub fn survival_real(m: u64, x: f64, a: u64) -> Result<f64> {
    if a > m {
        return Err(Error::Domain(format!("index {a} outside 0..={m}")));
    }
    if a == 0 {
        return Ok(1.0);
    }
    beta_reg_int(a, m - a + 1, x)
}

/// sigma-scaled Gaussian density at index k: phi(delta_k) / sigma_{m,x}.
pub fn gaussian_local_density(model: &BinomialModel, k: u64) -> Result<f64> {
    Ok(gauss::phi(model.delta(k as f64))? / model.sigma())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, ToPrimitive};

    fn half(m: u64) -> BinomialModel {
        BinomialModel::new(m, 1, 2).unwrap()
    }

    #[test]
    fn model_validation() {
        assert!(BinomialModel::new(0, 1, 2).is_err());
        assert!(BinomialModel::new(10, 0, 2).is_err());
        assert!(BinomialModel::new(10, 2, 2).is_err());
        assert!(BinomialModel::new(10, 3, 2).is_err());
    }

    #[test]
    fn sigma_squared_matches() {
        let model = BinomialModel::new(1000, 1, 3).unwrap();
        let s2 = model.sigma() * model.sigma();
        let expect = 1000.0 * (1.0 / 3.0) * (2.0 / 3.0);
        assert!((s2 / expect - 1.0).abs() < 1e-14);
    }

    #[test]
    fn delta_examples() {
        let model = half(100);
        assert_eq!(model.delta(55.0), 1.0);
        assert_eq!(model.delta(50.0), 0.0);
        let model = half(1000);
        let expect = 50.0 / 250f64.sqrt();
        assert!((model.delta(550.0) - expect).abs() < 1e-15);
    }

    #[test]
    fn pmf_exact_examples() {
        let model = half(4);
        let p = model.pmf_exact(2).unwrap();
        assert_eq!(p.value, BigRational::new(BigInt::from(3), BigInt::from(8)));
        assert_eq!(p.as_real, 0.375);

        let model = BinomialModel::new(10, 1, 3).unwrap();
        let p = model.pmf_exact(0).unwrap();
        assert_eq!(
            p.value,
            BigRational::new(BigInt::from(1024), BigInt::from(59049))
        );
    }

    #[test]
    fn pmf_exact_normalizes() {
        for (num, den) in [(1u64, 2u64), (1, 3), (2, 5)] {
            let model = BinomialModel::new(37, num, den).unwrap();
            let mut total = BigRational::zero();
            for k in 0..=37 {
                total += model.pmf_exact(k).unwrap().value;
            }
            assert!(total.is_one(), "x={num}/{den}");
        }
    }

    #[test]
    fn pmf_rejects_out_of_range() {
        assert!(half(4).pmf_exact(5).is_err());
    }

    #[test]
    fn exact_ceiling_is_enforced() {
        let model = half(100).with_exact_ceiling(50);
        assert!(model.pmf_exact(2).is_err());
    }

    #[test]
    fn cdf_exact_examples() {
        let model = half(4);
        let c = model.cdf_exact(2).unwrap();
        assert_eq!(c.value, BigRational::new(BigInt::from(11), BigInt::from(16)));
        assert!(model.survival_exact(0).unwrap().value.is_one());
    }

    #[test]
    fn cdf_survival_complement_exact() {
        let model = BinomialModel::new(23, 1, 3).unwrap();
        for a in 0..23 {
            let s = model.cdf_exact(a).unwrap().value + model.survival_exact(a + 1).unwrap().value;
            assert!(s.is_one(), "a={a}");
        }
    }

    #[test]
    fn central_survival_via_symmetry() {
        // m even, x = 1/2: P(X >= m/2) = 1/2 + pmf(m/2)/2 exactly.
        let model = half(1000);
        let s = model.survival_exact(500).unwrap();
        let expect = BigRational::new(BigInt::from(1), BigInt::from(2))
            + model.pmf_exact(500).unwrap().value / BigInt::from(2);
        assert_eq!(s.value, expect);
    }

    #[test]
    fn reflection_at_half() {
        let model = half(31);
        for a in 0..=31 {
            assert_eq!(
                model.cdf_exact(a).unwrap().value,
                model.survival_exact(31 - a).unwrap().value,
                "a={a}"
            );
        }
    }

    #[test]
    fn tail_table_matches_point_evaluations() {
        let model = BinomialModel::new(200, 2, 5).unwrap();
        let table = model.tail_table(60, 100).unwrap();
        assert_eq!(table.len(), 41);
        for point in [&table[0], &table[17], &table[40]] {
            let c = model.cdf_exact(point.a).unwrap();
            let s = model.survival_exact(point.a).unwrap();
            assert_eq!(point.cdf, c.as_real, "a={}", point.a);
            assert_eq!(point.survival, s.as_real, "a={}", point.a);
        }
    }

    #[test]
    fn bulk_window_examples() {
        assert_eq!(half(1000).bulk_window(), BulkWindow { k_min: 450, k_max: 550 });
        assert_eq!(
            half(1_000_000).bulk_window(),
            BulkWindow { k_min: 495_000, k_max: 505_000 }
        );
    }

    #[test]
    fn bulk_window_symmetric_at_half() {
        for m in [100u64, 999, 1234] {
            let model = half(m);
            let w = model.bulk_window();
            // symmetric about m/2: k_min + k_max = m
            assert_eq!(w.k_min + w.k_max, m, "m={m}");
        }
    }

    #[test]
    fn bulk_window_boundary_is_tight() {
        for (m, num, den) in [(1000u64, 1u64, 2u64), (1000, 1, 3), (5000, 2, 5)] {
            let model = BinomialModel::new(m, num, den).unwrap();
            let w = model.bulk_window();
            assert!(model.in_bulk(w.k_min) && model.in_bulk(w.k_max));
            if w.k_max < m {
                assert!(!model.in_bulk(w.k_max + 1), "m={m} x={num}/{den}");
            }
            if w.k_min > 0 {
                assert!(!model.in_bulk(w.k_min - 1), "m={m} x={num}/{den}");
            }
        }
    }

    #[test]
    fn xtau_examples() {
        assert!(xtau_member(0.5, 2.0).unwrap().member);
        assert!(!xtau_member(0.25, 2.0).unwrap().member);
        let check = xtau_member(0.25, 4.0).unwrap();
        assert!(check.member);
        assert!(check.odds_bounded); // x/(1-x) = 1/3 <= 4
        assert!(xtau_member(0.0, 2.0).is_err());
        assert!(xtau_member(1.5, 2.0).is_err());
    }

    #[test]
    fn cdf_real_small_example() {
        let c = cdf_real(4, 0.5, 2).unwrap();
        assert!((c - 0.6875).abs() < 1e-12);
    }

    #[test]
    fn cdf_real_matches_exact_at_m_1000() {
        let model = half(1000);
        for a in [0u64, 100, 400, 500, 600, 900, 1000] {
            let exact = model.cdf_exact(a).unwrap().as_real;
            let real = cdf_real(1000, 0.5, a).unwrap();
            let scale = exact.max(1e-300);
            assert!(
                (real - exact).abs() <= 1e-12 * scale,
                "a={a} exact={exact} real={real}"
            );
        }
    }

    #[test]
    fn survival_real_matches_exact_third() {
        let model = BinomialModel::new(3000, 1, 3).unwrap();
        for a in [1u64, 500, 1000, 1100, 2000] {
            let exact = model.survival_exact(a).unwrap().as_real;
            let real = survival_real(3000, 1.0 / 3.0, a).unwrap();
            let scale = exact.max(1e-300);
            assert!(
                (real - exact).abs() <= 1e-11 * scale,
                "a={a} exact={exact} real={real}"
            );
        }
    }

    #[test]
    fn cdf_real_large_m_symmetry() {
        // m = 4e7, x = 1/2: cdf(m/2) = 1/2 + pmf(m/2)/2, pmf via log space.
        let m = 40_000_000u64;
        let c = cdf_real(m, 0.5, m / 2).unwrap();
        let p = pmf_real(m, 0.5, m / 2).unwrap();
        let expect = 0.5 + p / 2.0;
        assert!((c - expect).abs() < 1e-7, "c={c} expect={expect}");
    }

    #[test]
    fn log_pmf_matches_exact() {
        let model = BinomialModel::new(5000, 1, 3).unwrap();
        // Stay within the f64-representable range of the exact pmf.
        for k in [600u64, 1000, 1666, 1700, 2400, 2800] {
            let exact = model.pmf_exact(k).unwrap().as_real;
            let (lp, err) = log_pmf_real(5000, 1.0 / 3.0, k).unwrap();
            let rel = (lp.exp() / exact - 1.0).abs();
            assert!(rel <= 1e-11 + 3.0 * err, "k={k} rel={rel} err={err}");
        }
    }

    #[test]
    fn exact_probability_rational_shape() {
        let p = half(4).pmf_exact(2).unwrap();
        assert!(p.value.numer() <= p.value.denom());
        assert!(p.value.denom().to_i64().unwrap() > 0);
    }
}
