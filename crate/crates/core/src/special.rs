//! `2F1(1, b; b+1; -x)` and the auxiliary function of the rate closed form.
//!
//! The rate of a hop needs `∫ ln(1 + snr·y) y^{γ-1} dy`, which integrates by parts
//! into `Υ(x) = x^γ ln(1 + snr·x) - x^{γ+1}/(γ+1) · snr · 2F1(1, γ+1; γ+2; -snr·x)`.
//! With realistic link budgets `snr·x` reaches 1e8 and beyond, so the
//! hypergeometric term is evaluated through a ladder of strategies chosen by the
//! size of the argument.

use crate::error::{OislError, Result};
use crate::quadrature::{integrate_with_breaks, QuadOptions};

/// Upper argument for the direct power series.
pub const SERIES_LIMIT: f64 = 0.5;
/// Upper argument for the Pfaff-transformed series.
pub const PFAFF_LIMIT: f64 = 20.0;

const MAX_TERMS: usize = 100_000;

/// Evaluation request for `2F1(1, b; b+1; -x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyp2F1Request {
    pub b: f64,
    pub x: f64,
    pub target_rel_err: f64,
}

impl Hyp2F1Request {
    pub fn new(b: f64, x: f64) -> Self {
        Self {
            b,
            x,
            target_rel_err: 1e-13,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.b > 0.0 && self.b.is_finite()) {
            return Err(OislError::InvalidParameter {
                name: "b",
                value: self.b,
                reason: "must be positive",
            });
        }
        if !(self.x >= 0.0 && self.x.is_finite()) {
            return Err(OislError::InvalidParameter {
                name: "x",
                value: self.x,
                reason: "must be non-negative and finite",
            });
        }
        if !(1e-14..=1e-6).contains(&self.target_rel_err) {
            return Err(OislError::InvalidParameter {
                name: "target_rel_err",
                value: self.target_rel_err,
                reason: "must lie in [1e-14, 1e-6]",
            });
        }
        Ok(())
    }
}

/// `2F1(1, b; b+1; -x) = b ∫₀¹ t^{b-1} / (1 + x t) dt`, a value in `(0, 1]`.
///
/// - `x ≤ 0.5`: the alternating series `Σ b/(b+k) (-x)^k`.
/// - `0.5 < x ≤ 20`: Pfaff's transformation to `w = x/(1+x)`,
///   `(1+x)^{-1} Σ k!/(b+1)_k w^k`.
/// - `x > 20`: the integral with `u = t^b`, i.e. `∫₀¹ du / (1 + x u^{1/b})`, by
///   adaptive quadrature with breakpoints around `u = x^{-b}`.
pub fn hyp2f1_1b(req: &Hyp2F1Request) -> Result<f64> {
    req.validate()?;
    let Hyp2F1Request { b, x, target_rel_err: tol } = *req;
    if x == 0.0 {
        return Ok(1.0);
    }
    if x <= SERIES_LIMIT {
        direct_series(b, x, tol)
    } else if x <= PFAFF_LIMIT {
        pfaff_series(b, x, tol)
    } else {
        integral_form(b, x, tol)
    }
}

fn direct_series(b: f64, x: f64, tol: f64) -> Result<f64> {
    let mut sum = 1.0;
    let mut power = 1.0;
    for k in 1..MAX_TERMS {
        power *= -x;
        let term = b / (b + k as f64) * power;
        sum += term;
        // Alternating with decreasing magnitude: the next term bounds the tail.
        if (power * x).abs() * b / (b + k as f64 + 1.0) <= tol * 0.1 * sum.abs() {
            return Ok(sum);
        }
    }
    Err(OislError::NumericalFailure {
        context: "2F1 power series",
        achieved: power.abs(),
    })
}

fn pfaff_series(b: f64, x: f64, tol: f64) -> Result<f64> {
    let w = x / (1.0 + x);
    let mut sum = 1.0;
    let mut term = 1.0;
    for k in 0..MAX_TERMS {
        term *= (k as f64 + 1.0) / (b + 1.0 + k as f64) * w;
        sum += term;
        // Term ratios are below w, so the tail is under term·w/(1-w).
        if term * w / (1.0 - w) <= tol * 0.1 * sum {
            return Ok(sum / (1.0 + x));
        }
    }
    Err(OislError::NumericalFailure {
        context: "2F1 Pfaff series",
        achieved: term,
    })
}

fn integral_form(b: f64, x: f64, tol: f64) -> Result<f64> {
    let inv_b = 1.0 / b;
    let knee = (-b * x.ln()).exp();
    let breaks = decade_breaks(knee, 1.0);
    let r = integrate_with_breaks(
        |u: f64| 1.0 / (1.0 + x * u.powf(inv_b)),
        &breaks,
        QuadOptions {
            abs_tol: 0.0,
            rel_tol: (tol * 0.1).max(1e-15),
            max_intervals: 4000,
        },
    )?;
    Ok(r.value)
}

/// `[0, …, knee·10^k, …, hi]`: decade breakpoints from `knee·1e-3` to `knee·1e3`
/// clipped to `(0, hi)`.
fn decade_breaks(knee: f64, hi: f64) -> Vec<f64> {
    let mut pts = vec![0.0];
    for k in -3..=3 {
        let p = knee * 10f64.powi(k);
        if p > 0.0 && p < hi {
            pts.push(p);
        }
    }
    pts.push(hi);
    pts
}

/// `Υ(x) / x^γ = ln(1 + snr·x) - snr·x/(γ+1) · 2F1(1, γ+1; γ+2; -snr·x)`.
///
/// This is `γ ∫₀¹ ln(1 + snr·x·t) t^{γ-1} dt`, finite and positive for `x > 0`.
/// For `snr·x ≤ 0.5` the equivalent series `Σ (-1)^{k+1} s^k/k · γ/(γ+k)` is used
/// to avoid cancellation between the two terms.
pub fn upsilon_reduced(x: f64, gamma: f64, snr: f64) -> Result<f64> {
    check_upsilon_args(x, gamma, snr)?;
    let s = snr * x;
    if s <= SERIES_LIMIT {
        let mut sum = 0.0;
        let mut power = 1.0;
        for k in 1..MAX_TERMS {
            power *= -s;
            let term = -power / k as f64 * gamma / (gamma + k as f64);
            sum += term;
            if term.abs() <= 1e-17 * sum.abs() {
                return Ok(sum);
            }
        }
        return Err(OislError::NumericalFailure {
            context: "upsilon series",
            achieved: power.abs(),
        });
    }
    let f = hyp2f1_1b(&Hyp2F1Request::new(gamma + 1.0, s))?;
    Ok(s.ln_1p() - s / (gamma + 1.0) * f)
}

/// `Υ(x) = x^γ ln(1 + snr·x) - x^{γ+1}/(γ+1) · snr · 2F1(1, γ+1; γ+2; -snr·x)`,
/// assembled as `exp(γ ln x + ln(Υ/x^γ))`.
pub fn upsilon(x: f64, gamma: f64, snr: f64) -> Result<f64> {
    let reduced = upsilon_reduced(x, gamma, snr)?;
    if reduced <= 0.0 {
        return Err(OislError::NumericalFailure {
            context: "upsilon lost all significance",
            achieved: reduced.abs(),
        });
    }
    let value = (gamma * x.ln() + reduced.ln()).exp();
    if value.is_finite() {
        Ok(value)
    } else {
        Err(OislError::NumericalFailure {
            context: "upsilon overflow",
            achieved: f64::INFINITY,
        })
    }
}

fn check_upsilon_args(x: f64, gamma: f64, snr: f64) -> Result<()> {
    for (name, v) in [("x", x), ("gamma", gamma), ("snr", snr)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(OislError::InvalidParameter {
                name,
                value: v,
                reason: "must be positive and finite",
            });
        }
    }
    Ok(())
}

/// `Ω = ∫_{h_th}^{a0} ln(1 + snr·y) y^{γ-1} dy` by adaptive quadrature.
///
/// For `γ < 1` the endpoint singularity is removed with `u = y^γ`, giving
/// `(1/γ) ∫ ln(1 + snr·u^{1/γ}) du`. Breakpoints bracket `y = 1/snr`.
pub fn omega_quadrature(h_th: f64, a0: f64, gamma: f64, snr: f64) -> Result<f64> {
    check_upsilon_args(a0, gamma, snr)?;
    if !(h_th >= 0.0 && h_th <= a0) {
        return Err(OislError::InvalidParameter {
            name: "h_th",
            value: h_th,
            reason: "must lie in [0, a0]",
        });
    }
    if h_th == a0 {
        return Ok(0.0);
    }
    let opts = QuadOptions {
        abs_tol: 0.0,
        rel_tol: 1e-12,
        max_intervals: 4000,
    };
    let knee = 1.0 / snr;
    if gamma < 1.0 {
        let (lo, hi) = (h_th.powf(gamma), a0.powf(gamma));
        let inv = 1.0 / gamma;
        let pts = span_breaks(lo, hi, knee.powf(gamma));
        let r = integrate_with_breaks(|u: f64| (snr * u.powf(inv)).ln_1p(), &pts, opts)?;
        Ok(r.value / gamma)
    } else {
        let pts = span_breaks(h_th, a0, knee);
        let r = integrate_with_breaks(|y: f64| (snr * y).ln_1p() * y.powf(gamma - 1.0), &pts, opts)?;
        Ok(r.value)
    }
}

fn span_breaks(lo: f64, hi: f64, knee: f64) -> Vec<f64> {
    let mut pts = vec![lo];
    for k in -3..=3 {
        let p = knee * 10f64.powi(k);
        if p > lo && p < hi {
            pts.push(p);
        }
    }
    pts.push(hi);
    pts
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn origin_and_b_one() {
        assert_eq!(hyp2f1_1b(&Hyp2F1Request::new(2.5, 0.0)).unwrap(), 1.0);
        for x in [1e-3, 0.3, 0.5, 0.7, 5.0, 20.0, 21.0, 1e3, 1e8, 1e11] {
            let v = hyp2f1_1b(&Hyp2F1Request::new(1.0, x)).unwrap();
            let closed = x.ln_1p() / x;
            assert!(rel(v, closed) < 1e-12, "x={x}: {v} vs {closed}");
        }
    }

    #[test]
    fn b_two_closed_form() {
        // 2∫₀¹ t/(1+xt) dt = 2/x - 2 ln(1+x)/x².
        for x in [0.1, 0.5, 3.0, 20.0, 100.0, 1e6] {
            let v = hyp2f1_1b(&Hyp2F1Request::new(2.0, x)).unwrap();
            let closed = 2.0 / x - 2.0 * x.ln_1p() / (x * x);
            assert!(rel(v, closed) < 1e-11, "x={x}");
        }
    }

    #[test]
    fn strategies_agree_at_seams() {
        for b in [0.3, 1.05, 2.7] {
            for x in [SERIES_LIMIT, PFAFF_LIMIT] {
                let below = hyp2f1_1b(&Hyp2F1Request::new(b, x)).unwrap();
                let above = hyp2f1_1b(&Hyp2F1Request::new(b, x * (1.0 + 1e-12))).unwrap();
                assert!(rel(below, above) < 1e-11, "b={b} x={x}");
            }
        }
    }

    #[test]
    fn decreasing_in_argument() {
        let mut prev = 1.0 + 1e-15;
        for k in 0..80 {
            let x = 10f64.powf(-4.0 + 0.2 * k as f64);
            let v = hyp2f1_1b(&Hyp2F1Request::new(1.7, x)).unwrap();
            assert!(v < prev && v > 0.0);
            prev = v;
        }
    }

    #[test]
    fn large_argument_leading_order() {
        let v = hyp2f1_1b(&Hyp2F1Request::new(2.0, 1e10)).unwrap();
        assert!(rel(v, 2.0 / 1e10) < 0.01);
    }

    #[test]
    fn request_validation() {
        assert!(hyp2f1_1b(&Hyp2F1Request::new(0.0, 1.0)).is_err());
        assert!(hyp2f1_1b(&Hyp2F1Request::new(1.0, -1.0)).is_err());
        let mut req = Hyp2F1Request::new(1.0, 1.0);
        req.target_rel_err = 1e-3;
        assert!(hyp2f1_1b(&req).is_err());
    }

    #[test]
    fn upsilon_closed_form_at_unit_arguments() {
        let v = upsilon(1.0, 1.0, 1.0).unwrap();
        assert!(rel(v, 2.0 * LN_2 - 1.0) < 1e-14);
        let q = omega_quadrature(0.0, 1.0, 1.0, 1.0).unwrap();
        assert!(rel(q, 2.0 * LN_2 - 1.0) < 1e-12);
    }

    #[test]
    fn upsilon_vanishes_at_small_argument() {
        let v = upsilon(1e-30, 0.7, 1.0).unwrap();
        assert!(v < 1e-30);
        // Leading term s·γ/(γ+1) of the reduced form.
        let r = upsilon_reduced(1e-12, 0.5, 1.0).unwrap();
        assert!(rel(r, 1e-12 / 3.0) < 1e-10);
    }

    #[test]
    fn series_and_hypergeometric_forms_agree() {
        for gamma in [0.05, 0.8, 2.5] {
            let s_low = SERIES_LIMIT;
            let a = upsilon_reduced(s_low, gamma, 1.0).unwrap();
            let f = hyp2f1_1b(&Hyp2F1Request::new(gamma + 1.0, s_low)).unwrap();
            let b = s_low.ln_1p() - s_low / (gamma + 1.0) * f;
            assert!(rel(a, b) < 1e-12, "gamma={gamma}");
        }
    }

    #[test]
    fn omega_matches_upsilon_difference() {
        for gamma in [0.05, 0.5, 1.0, 3.0] {
            for snr in [1e6, 1e9, 1e12] {
                let (h, a0) = (1e-6, 1e-3);
                let q = omega_quadrature(h, a0, gamma, snr).unwrap();
                let closed = (upsilon(a0, gamma, snr).unwrap() - upsilon(h, gamma, snr).unwrap()) / gamma;
                assert!(rel(q, closed) < 1e-9, "gamma={gamma} snr={snr}: {q} vs {closed}");
            }
        }
    }

    #[test]
    fn omega_empty_interval_and_bad_threshold() {
        assert_eq!(omega_quadrature(1e-3, 1e-3, 0.5, 1e9).unwrap(), 0.0);
        assert!(omega_quadrature(2e-3, 1e-3, 0.5, 1e9).is_err());
    }

    #[test]
    fn upsilon_increasing() {
        let mut prev = 0.0;
        for k in 0..40 {
            let x = 10f64.powf(-7.0 + 0.1 * k as f64);
            let v = upsilon(x, 0.3, 1e9).unwrap();
            assert!(v > prev);
            prev = v;
        }
    }
}
