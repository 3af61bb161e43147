//! Least-squares calibration of a linear-demand pricing model from
//! (price, volume) observations.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::env::{ModelKind, PricingNoise, RewardModel};
use crate::error::{Error, Result};

/// Fitted demand volume ≈ g − h·price with residual deviation σ̂.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub g: f64,
    pub h: f64,
    pub sigma: f64,
    pub rows: usize,
    /// Coefficients divided by σ̂, or left raw when σ̂ = 0.
    pub model: RewardModel,
    pub warnings: Vec<String>,
}

/// Price range of the calibrated model.
pub const PRICE_DOMAIN: (f64, f64) = (0.0, 4.0);

/// OLS fit of volume on price.
///
/// σ̂ is the residual standard deviation with n − 2 degrees of freedom; with
/// only two rows the fit is exact and σ̂ is reported as 0.
pub fn calibrate_pricing(rows: &[(f64, f64)]) -> Result<Calibration> {
    if rows.len() < 2 {
        return Err(Error::Calibration(format!(
            "need at least 2 rows, got {}",
            rows.len()
        )));
    }
    if rows.iter().any(|(p, v)| !p.is_finite() || !v.is_finite()) {
        return Err(Error::Calibration("non-finite price or volume".into()));
    }
    let n = rows.len() as f64;
    let mp = rows.iter().map(|r| r.0).sum::<f64>() / n;
    let mv = rows.iter().map(|r| r.1).sum::<f64>() / n;
    let spp: f64 = rows.iter().map(|r| (r.0 - mp).powi(2)).sum();
    if spp <= 1e-12 * mp.abs().max(1.0).powi(2) * n {
        return Err(Error::Calibration(
            "prices are constant; the design matrix is singular".into(),
        ));
    }
    let spv: f64 = rows.iter().map(|r| (r.0 - mp) * (r.1 - mv)).sum();
    let slope = spv / spp;
    let g = mv - slope * mp;
    let h = -slope;
    let ssr: f64 = rows.iter().map(|r| (r.1 - (g - h * r.0)).powi(2)).sum();
    let mut sigma = if rows.len() > 2 {
        (ssr / (n - 2.0)).sqrt()
    } else {
        0.0
    };
    // residuals at rounding level count as an exact fit
    let scale = rows.iter().map(|r| r.1.abs()).fold(0.0, f64::max).max(1.0);
    if sigma <= 1e-9 * scale {
        sigma = 0.0;
    }

    let mut warnings = Vec::new();
    let (gn, hn) = if sigma > 0.0 {
        (g / sigma, h / sigma)
    } else {
        warnings.push("zero residual noise: normalization skipped".to_string());
        (g, h)
    };
    if h <= 0.0 {
        warnings.push(format!(
            "fitted demand does not decrease with price (h = {h}); the model is not concave"
        ));
    }
    let model = RewardModel {
        kind: ModelKind::LinearPricing {
            g: gn,
            h: hn,
            price_lo: PRICE_DOMAIN.0,
            price_hi: PRICE_DOMAIN.1,
            noise: PricingNoise::PriceScaled,
        },
        noise_std: 1.0,
    };
    Ok(Calibration {
        g,
        h,
        sigma,
        rows: rows.len(),
        model,
        warnings,
    })
}

/// Reads (price, volume) rows from a CSV file with a header row. Columns
/// named `price` and `volume` (any case) are used when present, otherwise
/// the first two columns.
pub fn read_price_volume_csv(path: &Path) -> Result<Vec<(f64, f64)>> {
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(csv_err)?;
    let headers = reader.headers().map_err(csv_err)?.clone();
    let find = |name: &str| headers.iter().position(|h| h.eq_ignore_ascii_case(name));
    let (pi, vi) = match (find("price"), find("volume")) {
        (Some(p), Some(v)) => (p, v),
        _ => (0, 1),
    };
    let mut rows = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(csv_err)?;
        let field = |i: usize| -> Result<f64> {
            record
                .get(i)
                .ok_or_else(|| {
                    Error::Calibration(format!("{}: row {} is too short", path.display(), line + 2))
                })?
                .parse::<f64>()
                .map_err(|e| {
                    Error::Calibration(format!("{}: row {}: {e}", path.display(), line + 2))
                })
        };
        rows.push((field(pi)?, field(vi)?));
    }
    Ok(rows)
}
