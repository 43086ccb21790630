//! Order-of-convergence fits for defects along a decreasing `hbar` schedule.

use serde::{Deserialize, Serialize};

/// Defects below this are treated as exact zeros.
pub const DEFECT_FLOOR: f64 = 1e-12;

#[derive(Debug, thiserror::Error)]
pub enum ConvergenceError<E: std::error::Error> {
    #[error("schedule needs at least 4 strictly decreasing positive values")]
    InvalidSchedule,
    #[error(transparent)]
    Defect(E),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub hbar: f64,
    pub defect: f64,
    /// Two-point slope against the previous row; `None` on the first row or
    /// when either defect is below the floor.
    pub slope_window: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ConvergenceFit {
    /// Least-squares fit of `log defect = slope log hbar + intercept`.
    Slope { slope: f64, intercept: f64, residual: f64 },
    /// Some defect sits below the floor; no slope is fitted.
    Saturated { max_defect: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
    pub fit: ConvergenceFit,
}

impl ConvergenceTable {
    pub fn slope(&self) -> Option<f64> {
        match self.fit {
            ConvergenceFit::Slope { slope, .. } => Some(slope),
            ConvergenceFit::Saturated { .. } => None,
        }
    }

    pub fn is_saturated(&self) -> bool {
        matches!(self.fit, ConvergenceFit::Saturated { .. })
    }

    /// `hbar,defect,slope_window` rows; an empty window is left blank.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("hbar,defect,slope_window\n");
        for r in &self.rows {
            let w = r.slope_window.map(|s| s.to_string()).unwrap_or_default();
            out.push_str(&format!("{},{},{}\n", r.hbar, r.defect, w));
        }
        out
    }
}

/// Returns `(slope, intercept, rms residual)` of the log-log fit.
pub fn fit_loglog(points: &[(f64, f64)]) -> (f64, f64, f64) {
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - slope * x - intercept).powi(2))
        .sum();
    (slope, intercept, (rss / n).sqrt())
}

pub fn check_schedule(schedule: &[f64]) -> bool {
    schedule.len() >= 4
        && schedule.iter().all(|h| h.is_finite() && *h > 0.0)
        && schedule.windows(2).all(|w| w[1] < w[0])
}

/// Evaluates `defect` along `schedule` and fits the order of decay.
pub fn convergence_study<E: std::error::Error>(
    schedule: &[f64],
    mut defect: impl FnMut(f64) -> Result<f64, E>,
) -> Result<ConvergenceTable, ConvergenceError<E>> {
    if !check_schedule(schedule) {
        return Err(ConvergenceError::InvalidSchedule);
    }
    let values = schedule
        .iter()
        .map(|h| defect(*h).map(|d| (*h, d)))
        .collect::<Result<Vec<_>, E>>()
        .map_err(ConvergenceError::Defect)?;
    Ok(table_from_values(values))
}

/// Builds the table for precomputed `(hbar, defect)` pairs.
pub fn table_from_values(values: Vec<(f64, f64)>) -> ConvergenceTable {
    let above = |d: f64| d >= DEFECT_FLOOR;
    let rows = values
        .iter()
        .enumerate()
        .map(|(i, &(hbar, defect))| {
            let slope_window = (i > 0)
                .then(|| values[i - 1])
                .filter(|prev| above(prev.1) && above(defect))
                .map(|prev| (defect / prev.1).ln() / (hbar / prev.0).ln());
            ConvergenceRow {
                hbar,
                defect,
                slope_window,
            }
        })
        .collect();
    let fit = if values.iter().all(|v| above(v.1)) {
        let (slope, intercept, residual) = fit_loglog(&values);
        ConvergenceFit::Slope {
            slope,
            intercept,
            residual,
        }
    } else {
        ConvergenceFit::Saturated {
            max_defect: values.iter().fold(0.0, |m, v| m.max(v.1)),
        }
    };
    ConvergenceTable { rows, fit }
}
