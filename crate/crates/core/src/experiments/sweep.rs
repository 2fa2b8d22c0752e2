//! Observed convergence orders in the time step.

use super::{run_all, ErrorReport, ExperimentSpec};
use crate::error::{Error, Result};
use serde::Serialize;

/// Least-squares slope of `ln err` against `ln tau`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrderFit {
    pub slope: f64,
    /// Errors strictly decrease as `N` grows.
    pub monotone: bool,
}

/// Fits the order of `errors[i]` at `tau = 1 / steps[i]`.
pub fn observed_order(steps: &[usize], errors: &[f64]) -> Result<OrderFit> {
    if steps.len() != errors.len() {
        return Err(Error::LengthMismatch {
            expected: steps.len(),
            got: errors.len(),
        });
    }
    if steps.len() < 2 {
        return Err(Error::InvalidParameter("need at least two points to fit an order".into()));
    }
    if let Some(e) = errors.iter().find(|e| !(e.is_finite() && **e > 0.0)) {
        return Err(Error::InvalidParameter(format!("cannot fit an order to error {e}")));
    }
    let xs: Vec<f64> = steps.iter().map(|&n| -(n as f64).ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter("step counts must differ".into()));
    }
    let mut idx: Vec<usize> = (0..steps.len()).collect();
    idx.sort_by_key(|&i| steps[i]);
    let monotone = idx.windows(2).all(|w| errors[w[1]] < errors[w[0]]);
    Ok(OrderFit {
        slope: sxy / sxx,
        monotone,
    })
}

/// Order estimate for one parameter group and one solution component.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderEstimate {
    pub scheme: &'static str,
    pub alpha: f64,
    pub theta: f64,
    pub sigma1: f64,
    pub sigma2: Option<f64>,
    pub n1: usize,
    pub n2: usize,
    pub component: usize,
    pub steps: Vec<usize>,
    pub eps_ref: Vec<f64>,
    pub order: f64,
    pub monotone: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub reports: Vec<ErrorReport>,
    pub orders: Vec<OrderEstimate>,
}

fn check_geometric(steps: &[usize]) -> Result<()> {
    let mut s = steps.to_vec();
    s.sort_unstable();
    s.dedup();
    if s.len() < 3 || s.len() != steps.len() {
        return Err(Error::InvalidParameter(format!(
            "convergence sweep needs at least 3 distinct step counts, got {steps:?}"
        )));
    }
    let r = s[1] as f64 / s[0] as f64;
    if s.windows(2).any(|w| ((w[1] as f64 / w[0] as f64) - r).abs() > 1e-12 * r) {
        return Err(Error::InvalidParameter(format!(
            "step counts {steps:?} are not a geometric progression"
        )));
    }
    Ok(())
}

/// Runs the sweep and fits `eps_ref` against `tau` for every group of runs
/// that differ only in the number of steps. A non-monotone error sequence
/// is flagged and logged, not treated as a failure.
pub fn convergence_sweep(spec: &ExperimentSpec) -> Result<SweepResult> {
    check_geometric(&spec.steps)?;
    let reports = run_all(&spec.runs()?)?;
    let mut orders = Vec::new();
    for group in reports.chunks(spec.steps.len()) {
        let first = &group[0];
        let steps: Vec<usize> = group.iter().map(|r| r.steps).collect();
        for c in 0..first.components.len() {
            let errs: Vec<f64> = group.iter().map(|r| r.components[c].eps_ref).collect();
            let fit = observed_order(&steps, &errs)?;
            if !fit.monotone {
                log::warn!(
                    "non-monotone error sequence for {} alpha={} theta={} sigma={}: {errs:?}",
                    first.scheme.as_str(),
                    first.alpha,
                    first.theta,
                    first.sigma1
                );
            }
            orders.push(OrderEstimate {
                scheme: first.scheme.as_str(),
                alpha: first.alpha,
                theta: first.theta,
                sigma1: first.sigma1,
                sigma2: first.sigma2,
                n1: first.n1,
                n2: first.n2,
                component: if first.sigma2.is_some() { c + 1 } else { 0 },
                steps: steps.clone(),
                eps_ref: errs,
                order: fit.slope,
                monotone: fit.monotone,
            });
        }
    }
    Ok(SweepResult { reports, orders })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let steps = [10, 20, 40, 80];
        let errs: Vec<f64> = steps.iter().map(|&n| 3.0 * (n as f64).powf(-2.0)).collect();
        let fit = observed_order(&steps, &errs).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-12);
        assert!(fit.monotone);
    }

    #[test]
    fn non_monotone_is_reported() {
        let fit = observed_order(&[10, 20, 40], &[1e-2, 2e-3, 3e-3]).unwrap();
        assert!(!fit.monotone);
        assert!(observed_order(&[10, 20], &[0.0, 1.0]).is_err());
        assert!(observed_order(&[10, 10], &[1.0, 1.0]).is_err());
    }

    #[test]
    fn progression_check() {
        assert!(check_geometric(&[20, 40, 80]).is_ok());
        assert!(check_geometric(&[20, 40]).is_err());
        assert!(check_geometric(&[20, 40, 60]).is_err());
    }
}
