//! Refined continuity correction for Binomial tails: the three-tier shift
//! c*(a), the four Gaussian tail approximations built on it, the
//! admissibility conditions on m, and the specialized x = 1/2 corollary.

use crate::binomial::{self, BinomialModel};
use crate::error::{Error, Result};
use crate::gauss::{normal_cdf, normal_survival};

/// The correction c*(a) split into its three tiers.
#[derive(Debug, Clone, Copy)]
pub struct CorrectionValue {
    pub a: f64,
    pub delta_tilde: f64,
    /// Constant tier, always 1/2.
    pub tier0: f64,
    /// Skewness tier (1-2x)/6 (delta_tilde^2 - 1), order one.
    pub tier1: f64,
    /// The m^(-1/2) brace (before division by sqrt(m)).
    pub tier2: f64,
    pub c_star: f64,
}

/// c*(a) at a real cut coordinate; reflected arguments 2mx - a pass
/// through here verbatim.
pub fn c_star_at(model: &BinomialModel, a: f64) -> CorrectionValue {
    let m = model.m() as f64;
    let x = model.x();
    let sigma_x = model.sigma_x();
    let sigma_x2 = sigma_x * sigma_x;
    let dt = model.delta(a - 0.5);
    let tier0 = 0.5;
    let tier1 = (1.0 - 2.0 * x) / 6.0 * (dt * dt - 1.0);
    let tier2 = ((1.0 / 36.0 - sigma_x2 / 36.0) * dt
        + (-5.0 / 72.0 + 7.0 * sigma_x2 / 36.0) * dt * dt * dt)
        / sigma_x;
    CorrectionValue {
        a,
        delta_tilde: dt,
        tier0,
        tier1,
        tier2,
        c_star: tier0 + tier1 + tier2 / m.sqrt(),
    }
}

/// c*(a) at an integer cut index.
pub fn c_star(model: &BinomialModel, a: u64) -> Result<CorrectionValue> {
    if a > model.m() {
        return Err(Error::Domain(format!("cut {a} outside 0..={}", model.m())));
    }
    Ok(c_star_at(model, a as f64))
}

/// Exact comparison of the integer cut a against m x = m num/den.
fn side(model: &BinomialModel, a: u64) -> std::cmp::Ordering {
    let (num, den) = model.x_parts();
    (a as u128 * den as u128).cmp(&(model.m() as u128 * num as u128))
}

fn check_x_tau(model: &BinomialModel, tau: f64) -> Result<()> {
    if !binomial::xtau_member(model.x(), tau)?.member {
        return Err(Error::Domain(format!(
            "x = {} is not tau-interior for tau = {tau}",
            model.x()
        )));
    }
    Ok(())
}

fn check_bulk(model: &BinomialModel, k: u64, what: &str) -> Result<()> {
    if !model.in_bulk(k) {
        return Err(Error::OutOfBulk(format!(
            "{what} = {k} outside the bulk window of m = {}, x = {}",
            model.m(),
            model.x()
        )));
    }
    Ok(())
}

/// P(X >= a) ~ Psi(delta_{a - c*(a)}) for a on the upper side (a >= m x).
pub fn survival_approx(model: &BinomialModel, a: u64, tau: f64) -> Result<f64> {
    check_x_tau(model, tau)?;
    if side(model, a) == std::cmp::Ordering::Less {
        return Err(Error::WrongTail(format!(
            "survival form needs a >= m x (a = {a}); use cdf_approx or the reflected survival form"
        )));
    }
    check_bulk(model, a, "a")?;
    let c = c_star_at(model, a as f64);
    normal_survival(model.delta(a as f64 - c.c_star))
}

/// P(X <= a) ~ Phi(-delta_{R - c*(R)}), R = 2mx - a, for a <= m x.
pub fn cdf_approx(model: &BinomialModel, a: u64, tau: f64) -> Result<f64> {
    check_x_tau(model, tau)?;
    if side(model, a) == std::cmp::Ordering::Greater {
        return Err(Error::WrongTail(format!(
            "cdf form needs a <= m x (a = {a}); use survival_approx or the reflected cdf form"
        )));
    }
    check_bulk(model, a, "a")?;
    let (num, den) = model.x_parts();
    let r = 2.0 * (model.m() as f64) * (num as f64) / (den as f64) - a as f64;
    let c = c_star_at(model, r);
    normal_cdf(-model.delta(r - c.c_star))
}

/// P(X <= a) ~ Phi(delta_{a+1 - c*(a+1)}) for a + 1 >= m x.
pub fn cdf_approx_reflected(model: &BinomialModel, a: u64, tau: f64) -> Result<f64> {
    check_x_tau(model, tau)?;
    if side(model, a + 1) == std::cmp::Ordering::Less {
        return Err(Error::WrongTail(format!(
            "reflected cdf form needs a + 1 >= m x (a = {a}); use cdf_approx"
        )));
    }
    check_bulk(model, a + 1, "a + 1")?;
    let c = c_star_at(model, (a + 1) as f64);
    normal_cdf(model.delta((a + 1) as f64 - c.c_star))
}

/// P(X >= a) ~ Psi(-delta_{R - c*(R)}), R = 2mx - (a+1), for a + 1 <= m x.
pub fn survival_approx_reflected(model: &BinomialModel, a: u64, tau: f64) -> Result<f64> {
    check_x_tau(model, tau)?;
    if side(model, a + 1) == std::cmp::Ordering::Greater {
        return Err(Error::WrongTail(format!(
            "reflected survival form needs a + 1 <= m x (a = {a}); use survival_approx"
        )));
    }
    check_bulk(model, a + 1, "a + 1")?;
    let (num, den) = model.x_parts();
    let r = 2.0 * (model.m() as f64) * (num as f64) / (den as f64) - (a + 1) as f64;
    let c = c_star_at(model, r);
    normal_survival(-model.delta(r - c.c_star))
}

/// Error budget of the tail approximations: 10^6 tau^5 m^(-3/2).
pub fn tail_budget(m: u64, tau: f64) -> f64 {
    1e6 * tau.powi(5) / (m as f64).powf(1.5)
}

/// The two conditions on m under which the tail budget is certified.
#[derive(Debug, Clone, Copy)]
pub struct AdmissibilityCheck {
    pub m: u64,
    pub tau: f64,
    /// m >= max(10^3, 2^(3/2) tau^3).
    pub cond_size: bool,
    /// 41 tau^3 exp(-m^(1/3)/(8 tau)) <= 750000 m^(-4/3).
    pub cond_exp: bool,
    pub budget: f64,
}

impl AdmissibilityCheck {
    pub fn admissible(&self) -> bool {
        self.cond_size && self.cond_exp
    }
}

pub fn admissibility(m: u64, tau: f64) -> Result<AdmissibilityCheck> {
    if tau.is_nan() || tau < 2.0 {
        return Err(Error::Domain(format!("tau = {tau} must be >= 2")));
    }
    let fm = m as f64;
    let cond_size = fm >= 1000.0_f64.max(2.0_f64.powf(1.5) * tau.powi(3));
    // Conservative: round the left side up before comparing.
    let lhs = 41.0 * tau.powi(3) * (-fm.powf(1.0 / 3.0) / (8.0 * tau)).exp() * (1.0 + 1e-12);
    let rhs = 750_000.0 * fm.powf(-4.0 / 3.0);
    Ok(AdmissibilityCheck {
        m,
        tau,
        cond_size,
        cond_exp: lhs <= rhs,
        budget: tail_budget(m, tau),
    })
}

/// Smallest m admissible at this tau.
///
/// The ratio of the exponential condition's sides increases in m up to
/// m = (32 tau)^3 and decreases beyond it, so a bisection on the decreasing
/// branch finds the threshold once the small-m region is ruled out.
pub fn first_admissible_m(tau: f64) -> Result<u64> {
    let m_min = 1000.0_f64.max(2.0_f64.powf(1.5) * tau.powi(3)).ceil() as u64;
    if admissibility(m_min, tau)?.admissible() {
        return Ok(m_min);
    }
    let peak = (32.0 * tau).powi(3) as u64;
    let mut lo = peak.max(m_min); // inadmissible
    let mut hi = lo;
    loop {
        hi = hi.saturating_mul(2);
        if admissibility(hi, tau)?.admissible() {
            break;
        }
        if hi > 1u64 << 60 {
            return Err(Error::Oracle(format!(
                "no admissible m found below 2^60 for tau = {tau}"
            )));
        }
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if admissibility(mid, tau)?.admissible() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// The x = 1/2 corollary value at shift t from the center m/2.
#[derive(Debug, Clone, Copy)]
pub struct CorollaryValue {
    pub s: f64,
    pub approx: f64,
    pub bound: f64,
}

/// P(X <= m/2 + t) ~ Phi(((1 - 1/(12m)) s + s^3/(3 m^2)) / (sqrt(m)/2))
/// with s = floor(t) + 1/2, for |t| <= m^(2/3)/2 - 1.
pub fn corollary_half(m: u64, t: f64) -> Result<CorollaryValue> {
    if m < 1000 {
        return Err(Error::Domain(format!("corollary needs m >= 1000, got {m}")));
    }
    let fm = m as f64;
    let t_max = fm.powf(2.0 / 3.0) / 2.0 - 1.0;
    if t.is_nan() || t.abs() > t_max {
        return Err(Error::Domain(format!(
            "|t| = {} exceeds m^(2/3)/2 - 1 = {t_max}",
            t.abs()
        )));
    }
    let s = t.floor() + 0.5;
    let arg = ((1.0 - 1.0 / (12.0 * fm)) * s + s * s * s / (3.0 * fm * fm)) / (fm.sqrt() / 2.0);
    Ok(CorollaryValue {
        s,
        approx: normal_cdf(arg)?,
        bound: 1e6 * 32.0 / fm.powf(1.5),
    })
}

/// Which of the four tail forms produced a verification point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailForm {
    Survival,
    Cdf,
    CdfReflected,
    SurvivalReflected,
}

impl TailForm {
    pub fn label(&self) -> &'static str {
        match self {
            TailForm::Survival => "survival",
            TailForm::Cdf => "cdf",
            TailForm::CdfReflected => "cdf_reflected",
            TailForm::SurvivalReflected => "survival_reflected",
        }
    }
}

/// One approximation-vs-oracle comparison.
#[derive(Debug, Clone, Copy)]
pub struct ContinuityCheckPoint {
    pub form: TailForm,
    pub a: u64,
    pub exact: f64,
    pub approx: f64,
    pub error: f64,
    pub budget: f64,
    pub passed: bool,
}

/// Sweep every bulk cut with every applicable tail form against the exact
/// tails, checking the certified budget at each point.
pub fn verify_continuity(model: &BinomialModel, tau: f64) -> Result<Vec<ContinuityCheckPoint>> {
    check_x_tau(model, tau)?;
    let window = model.bulk_window();
    let m = model.m();
    let budget = tail_budget(m, tau);
    let table = model.tail_table(window.k_min, window.k_max)?;
    let at = |a: u64| &table[(a - window.k_min) as usize];
    let mut out = Vec::new();
    let mut push = |form: TailForm, a: u64, exact: f64, approx: f64| {
        let error = (approx - exact).abs();
        out.push(ContinuityCheckPoint { form, a, exact, approx, error, budget, passed: error <= budget });
    };
    for a in window.k_min..=window.k_max {
        let point = at(a);
        if side(model, a) != std::cmp::Ordering::Less {
            push(TailForm::Survival, a, point.survival, survival_approx(model, a, tau)?);
        }
        if side(model, a) != std::cmp::Ordering::Greater {
            push(TailForm::Cdf, a, point.cdf, cdf_approx(model, a, tau)?);
        }
        if a < window.k_max {
            match side(model, a + 1) {
                std::cmp::Ordering::Less => {
                    push(TailForm::SurvivalReflected, a, point.survival, survival_approx_reflected(model, a, tau)?);
                }
                _ => {
                    push(TailForm::CdfReflected, a, point.cdf, cdf_approx_reflected(model, a, tau)?);
                }
            }
        }
    }
    Ok(out)
}

/// One corollary-vs-oracle comparison at shift t.
#[derive(Debug, Clone, Copy)]
pub struct CorollaryCheckPoint {
    pub t: f64,
    pub a: u64,
    pub exact: f64,
    pub approx: f64,
    pub error: f64,
    pub bound: f64,
    pub passed: bool,
}

/// Check the x = 1/2 corollary against exact dyadic cdf values at each t.
/// Requires even m within the exact ceiling.
pub fn verify_corollary(m: u64, ts: &[f64]) -> Result<Vec<CorollaryCheckPoint>> {
    if !m.is_multiple_of(2) {
        return Err(Error::Domain(format!("corollary sweep expects even m, got {m}")));
    }
    let model = BinomialModel::new(m, 1, 2)?;
    let mut cuts: Vec<u64> = Vec::with_capacity(ts.len());
    for &t in ts {
        let shifted = (m / 2) as i64 + t.floor() as i64;
        if shifted < 0 || shifted as u64 > m {
            return Err(Error::Domain(format!("t = {t} moves the cut outside 0..={m}")));
        }
        cuts.push(shifted as u64);
    }
    let lo = *cuts.iter().min().unwrap();
    let hi = *cuts.iter().max().unwrap();
    let table = model.tail_table(lo, hi)?;
    let mut out = Vec::with_capacity(ts.len());
    for (&t, &a) in ts.iter().zip(&cuts) {
        let value = corollary_half(m, t)?;
        let exact = table[(a - lo) as usize].cdf;
        let error = (value.approx - exact).abs();
        out.push(CorollaryCheckPoint {
            t,
            a,
            exact,
            approx: value.approx,
            error,
            bound: value.bound,
            passed: error <= value.bound,
        });
    }
    Ok(out)
}
