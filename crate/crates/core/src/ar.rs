//! Autoregressive models estimated with Burg's method.
//!
//! Coefficients use the direct-form convention
//! `X_t = α_1 X_{t-1} + … + α_p X_{t-p} + ε_t` on the demeaned series, and
//! reflection coefficients are reported in the same sign convention (a
//! positive `k_1` means positive lag-one correlation).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A fitted (or hand-built) AR(p) model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArModel {
    coefficients: Vec<f64>,
    mean: f64,
    noise_variance: f64,
    reflection: Option<Vec<f64>>,
}

impl ArModel {
    /// Model from raw coefficients; stability is then judged from the
    /// coefficients themselves.
    pub fn new(coefficients: Vec<f64>, mean: f64, noise_variance: f64) -> Result<Self> {
        if !mean.is_finite()
            || !noise_variance.is_finite()
            || coefficients.iter().any(|c| !c.is_finite())
        {
            return Err(Error::NonFiniteInput);
        }
        if noise_variance < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "noise variance must be non-negative, got {noise_variance}"
            )));
        }
        Ok(Self {
            coefficients,
            mean,
            noise_variance,
            reflection: None,
        })
    }

    /// The order-zero model that always predicts `mean`.
    pub fn degenerate(mean: f64) -> Self {
        Self {
            coefficients: Vec::new(),
            mean,
            noise_variance: 0.0,
            reflection: Some(Vec::new()),
        }
    }

    pub fn order(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn noise_variance(&self) -> f64 {
        self.noise_variance
    }

    /// Burg reflection coefficients, when the model came from [`fit_burg`].
    pub fn reflection(&self) -> Option<&[f64]> {
        self.reflection.as_deref()
    }

    pub fn is_degenerate(&self) -> bool {
        self.coefficients.is_empty()
    }
}

/// How the AR order is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum OrderCriterion {
    Fixed { order: usize, max_order: usize },
    Aic { max_order: usize },
    Fpe { max_order: usize },
}

impl OrderCriterion {
    pub fn fixed(order: usize) -> Self {
        OrderCriterion::Fixed {
            order,
            max_order: order.max(1),
        }
    }

    pub fn aic(max_order: usize) -> Self {
        OrderCriterion::Aic { max_order }
    }

    pub fn fpe(max_order: usize) -> Self {
        OrderCriterion::Fpe { max_order }
    }

    pub fn max_order(&self) -> usize {
        match *self {
            OrderCriterion::Fixed { max_order, .. }
            | OrderCriterion::Aic { max_order }
            | OrderCriterion::Fpe { max_order } => max_order,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_order() < 1 {
            return Err(Error::InvalidParameter("max_order must be at least 1".into()));
        }
        if let OrderCriterion::Fixed { order, max_order } = *self {
            if order > max_order {
                return Err(Error::InvalidParameter(format!(
                    "fixed order {order} exceeds max_order {max_order}"
                )));
            }
        }
        Ok(())
    }

    /// Same criterion with a new search cap.
    pub fn with_max_order(&self, max_order: usize) -> Self {
        match *self {
            OrderCriterion::Fixed { order, .. } => OrderCriterion::Fixed {
                order,
                max_order: max_order.max(order),
            },
            OrderCriterion::Aic { .. } => OrderCriterion::Aic { max_order },
            OrderCriterion::Fpe { .. } => OrderCriterion::Fpe { max_order },
        }
    }

    /// Same criterion with the cap lowered to `cap` (never below 1).
    /// Fixed orders are left alone.
    pub fn capped(&self, cap: usize) -> Self {
        let cap = cap.max(1);
        match *self {
            OrderCriterion::Fixed { .. } => *self,
            OrderCriterion::Aic { max_order } => OrderCriterion::Aic {
                max_order: max_order.min(cap),
            },
            OrderCriterion::Fpe { max_order } => OrderCriterion::Fpe {
                max_order: max_order.min(cap),
            },
        }
    }
}

impl Default for OrderCriterion {
    fn default() -> Self {
        OrderCriterion::Aic { max_order: 20 }
    }
}

/// Output of the order-recursive Burg pass.
struct BurgPass {
    mean: f64,
    /// `None` when the demeaned input is identically zero.
    stages: Option<Stages>,
}

struct Stages {
    /// Reflection coefficients `k_1..k_p`.
    reflection: Vec<f64>,
    /// Coefficients of the final order.
    coefficients: Vec<f64>,
    /// Prediction-error power for orders `0..=p`.
    error_power: Vec<f64>,
}

fn burg_pass(x: &[f64], order: usize) -> BurgPass {
    let n = x.len();
    let mean = x.iter().sum::<f64>() / n as f64;
    let demeaned: Vec<f64> = x.iter().map(|v| v - mean).collect();

    let spread = demeaned.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if spread <= 1e-12 * mean.abs().max(1.0) {
        return BurgPass { mean, stages: None };
    }

    let mut power = demeaned.iter().map(|v| v * v).sum::<f64>() / n as f64;
    let mut error_power = Vec::with_capacity(order + 1);
    error_power.push(power);
    let mut reflection = Vec::with_capacity(order);
    let mut coefficients: Vec<f64> = Vec::with_capacity(order);

    // forward[t] predicts x[t] from the past, backward[t] predicts x[t] from
    // the future; at stage m both are valid for t in m..n and the pairing is
    // forward[t] with backward[t - 1].
    let mut forward = demeaned.clone();
    let mut backward = demeaned;

    for m in 1..=order {
        let mut num = 0.0;
        let mut den = 0.0;
        for t in m..n {
            let f = forward[t];
            let b = backward[t - 1];
            num += f * b;
            den += f * f + b * b;
        }
        let k = if den > 0.0 {
            (2.0 * num / den).clamp(-1.0, 1.0)
        } else {
            0.0
        };

        // Levinson-Durbin step.
        let prev = coefficients.clone();
        for i in 0..prev.len() {
            coefficients[i] = prev[i] - k * prev[prev.len() - 1 - i];
        }
        coefficients.push(k);
        reflection.push(k);

        // Update errors in place; walk backwards so backward[t - 1] is still
        // the previous stage's value when it is read.
        for t in (m..n).rev() {
            let f = forward[t];
            let b = backward[t - 1];
            forward[t] = f - k * b;
            backward[t] = b - k * f;
        }

        power *= 1.0 - k * k;
        error_power.push(power.max(0.0));
    }

    BurgPass {
        mean,
        stages: Some(Stages {
            reflection,
            coefficients,
            error_power,
        }),
    }
}

fn check_input(x: &[f64], order: usize) -> Result<()> {
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteInput);
    }
    if x.len() <= order || x.is_empty() {
        return Err(Error::TooShort {
            got: x.len(),
            order,
        });
    }
    Ok(())
}

/// Fits AR(`order`) to `x` with Burg's method.
///
/// The sample mean is removed first and stored on the model. A series with
/// no variation yields the degenerate order-zero model.
pub fn fit_burg(x: &[f64], order: usize) -> Result<ArModel> {
    check_input(x, order)?;
    let pass = burg_pass(x, order);
    let Some(stages) = pass.stages else {
        return Ok(ArModel::degenerate(pass.mean));
    };
    Ok(ArModel {
        coefficients: stages.coefficients,
        mean: pass.mean,
        noise_variance: *stages.error_power.last().expect("order 0 is always present"),
        reflection: Some(stages.reflection),
    })
}

/// Prediction-error power of the Burg fits of order `0..=max_order`, or
/// `None` for a constant series.
pub fn burg_error_powers(x: &[f64], max_order: usize) -> Result<Option<Vec<f64>>> {
    check_input(x, max_order)?;
    Ok(burg_pass(x, max_order).stages.map(|s| s.error_power))
}

/// Akaike information criterion `n ln σ² + 2p`.
pub fn aic(n: usize, noise_variance: f64, order: usize) -> f64 {
    n as f64 * noise_variance.ln() + 2.0 * order as f64
}

/// Final prediction error `σ² (n + p + 1) / (n - p - 1)`.
pub fn fpe(n: usize, noise_variance: f64, order: usize) -> f64 {
    let (n, p) = (n as f64, order as f64);
    noise_variance * (n + p + 1.0) / (n - p - 1.0)
}

/// Chooses the AR order for `x`.
///
/// Information criteria are evaluated for `p = 1..=max_order` on a single
/// Burg pass; ties go to the smaller order. A constant series selects 0.
pub fn select_order(x: &[f64], criterion: &OrderCriterion) -> Result<usize> {
    criterion.validate()?;
    if let OrderCriterion::Fixed { order, .. } = *criterion {
        return Ok(order);
    }
    let n = x.len();
    let max_order = criterion.max_order();
    if n < 3 || 2 * max_order >= n {
        return Err(Error::TooShort {
            got: n,
            order: max_order,
        });
    }
    let Some(powers) = burg_error_powers(x, max_order)? else {
        return Ok(0);
    };
    let score = |p: usize| match criterion {
        OrderCriterion::Aic { .. } => aic(n, powers[p], p),
        OrderCriterion::Fpe { .. } => fpe(n, powers[p], p),
        OrderCriterion::Fixed { .. } => unreachable!(),
    };
    let mut best = 1;
    let mut best_score = score(1);
    for p in 2..=max_order {
        let s = score(p);
        if s < best_score {
            best = p;
            best_score = s;
        }
    }
    Ok(best)
}

/// One-step prediction from `history`, most recent value first. The noise
/// term is taken at its expectation.
pub fn predict_one(model: &ArModel, history: &[f64]) -> Result<f64> {
    let p = model.order();
    if history.len() < p {
        return Err(Error::InsufficientHistory {
            order: p,
            got: history.len(),
        });
    }
    let deviation: f64 = model
        .coefficients
        .iter()
        .zip(history)
        .map(|(a, h)| a * (h - model.mean))
        .sum();
    Ok(model.mean + deviation)
}

/// Iterates [`predict_one`] `horizon` times, feeding each prediction back as
/// the newest history value.
pub fn predict_multi(model: &ArModel, history: &[f64], horizon: usize) -> Result<Vec<f64>> {
    let p = model.order();
    if history.len() < p {
        return Err(Error::InsufficientHistory {
            order: p,
            got: history.len(),
        });
    }
    if horizon == 0 {
        return Err(Error::InvalidParameter("horizon must be at least 1".into()));
    }
    // Oldest first, so pushing appends the newest value.
    let mut window: Vec<f64> = history[..p].iter().rev().copied().collect();
    let mut out = Vec::with_capacity(horizon);
    for _ in 0..horizon {
        let next = model.mean
            + model
                .coefficients
                .iter()
                .zip(window.iter().rev())
                .map(|(a, h)| a * (h - model.mean))
                .sum::<f64>();
        out.push(next);
        if p > 0 {
            window.remove(0);
            window.push(next);
        }
    }
    Ok(out)
}

/// Reflection coefficients recovered from direct-form coefficients by the
/// step-down recursion. `None` if some stage has `|k| = 1`.
pub fn step_down(coefficients: &[f64]) -> Option<Vec<f64>> {
    let mut a = coefficients.to_vec();
    let mut ks = vec![0.0; a.len()];
    while let Some(&k) = a.last() {
        let m = a.len();
        ks[m - 1] = k;
        let denom = 1.0 - k * k;
        if denom <= 0.0 || !denom.is_finite() {
            return None;
        }
        let lower: Vec<f64> = (0..m - 1)
            .map(|i| (a[i] + k * a[m - 2 - i]) / denom)
            .collect();
        a = lower;
    }
    Some(ks)
}

/// Whether the model describes a stationary process.
///
/// Burg models are judged by their reflection coefficients (`|k_i| < 1`).
/// Hand-built models use the closed-form triangle for p <= 2 and the
/// step-down recursion (equivalent to all characteristic roots inside the
/// unit circle) above that.
pub fn is_stable(model: &ArModel) -> bool {
    if let Some(ks) = &model.reflection {
        return ks.iter().all(|k| k.abs() < 1.0);
    }
    match model.coefficients.as_slice() {
        [] => true,
        [a1] => a1.abs() < 1.0,
        [a1, a2] => a2.abs() < 1.0 && a1 + a2 < 1.0 && a2 - a1 < 1.0,
        coefficients => {
            step_down(coefficients).is_some_and(|ks| ks.iter().all(|k| k.abs() < 1.0))
        }
    }
}
