//! Admissibility of `ρ` relative to a discrete reference embedding `ρ_ref`: exact
//! certificates where they exist, Cartan-drift evidence otherwise.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg2::{cartan_mu, invariant_hermitian_form, HermitianForm, Sl2Element};
use crate::presentation::{enumerate_ball, Presentation};
use crate::report;
use crate::repvar::{intertwiner_between, Representation};

/// Per-length statistics of `μ(ρ_ref(γ)) − μ(ρ(γ))` over the deduplicated ball.
///
/// Index `ℓ − 1` holds the elements whose shortest word has length exactly `ℓ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriftReport {
    pub lengths: Vec<usize>,
    pub min_drift: Vec<f64>,
    pub mean_drift: Vec<f64>,
    pub element_counts: Vec<usize>,
}

impl DriftReport {
    pub fn to_json(&self) -> Value {
        json!({
            "lengths": self.lengths,
            "min_drift": self.min_drift.iter().map(|&x| report::real(x)).collect::<Vec<_>>(),
            "mean_drift": self.mean_drift.iter().map(|&x| report::real(x)).collect::<Vec<_>>(),
            "element_counts": self.element_counts,
        })
    }

    /// Least-squares slope of `min_drift` against length over lengths `from..=L`.
    pub fn min_drift_slope(&self, from: usize) -> Option<f64> {
        let pts: Vec<(f64, f64)> = self
            .lengths
            .iter()
            .zip(&self.min_drift)
            .filter(|(l, d)| **l >= from && d.is_finite())
            .map(|(&l, &d)| (l as f64, d))
            .collect();
        if pts.len() < 2 {
            return None;
        }
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        Some(sxy / sxx)
    }
}

/// Drift of `ρ` against `ρ_ref` on the ball of radius `radius`, deduplicated by `ρ_ref`.
pub fn drift_scan(
    p: &Presentation,
    rho_ref: &Representation,
    rho: &Representation,
    radius: usize,
) -> Result<DriftReport> {
    if rho.presentation() != p || rho_ref.presentation() != p {
        return Err(Error::PresentationMismatch);
    }
    let ball = enumerate_ball(p, rho_ref, radius, None)?;
    let mut min_drift = vec![f64::INFINITY; radius];
    let mut sums = vec![0.0; radius];
    let mut counts = vec![0usize; radius];
    for e in ball.iter().filter(|e| e.length > 0) {
        let drift = cartan_mu(&e.image) - cartan_mu(&rho.evaluate_word(&e.word));
        let k = e.length - 1;
        min_drift[k] = min_drift[k].min(drift);
        sums[k] += drift;
        counts[k] += 1;
    }
    let mean_drift = sums.iter().zip(&counts).map(|(s, &c)| if c == 0 { f64::NAN } else { s / c as f64 }).collect();
    Ok(DriftReport { lengths: (1..=radius).collect(), min_drift, mean_drift, element_counts: counts })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerdictKind {
    AdmissibleCertified,
    LikelyAdmissible,
    NotAdmissibleCertified,
    Inconclusive,
}

impl VerdictKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            VerdictKind::AdmissibleCertified => "AdmissibleCertified",
            VerdictKind::LikelyAdmissible => "LikelyAdmissible",
            VerdictKind::NotAdmissibleCertified => "NotAdmissibleCertified",
            VerdictKind::Inconclusive => "Inconclusive",
        }
    }
}

/// Evidence attached to a certified verdict.
#[derive(Debug, Clone, PartialEq)]
pub enum Certificate {
    /// Positive-definite form preserved by every generator image.
    Hermitian(HermitianForm),
    /// `g` with `g·ρ_ref(γ)·g⁻¹ = ρ(γ)` on generators.
    Intertwiner(Sl2Element),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub rationale: String,
    pub certificate: Option<Certificate>,
    pub drift: Option<DriftReport>,
}

impl Verdict {
    pub fn to_json(&self) -> Value {
        let certificate = match &self.certificate {
            None => Value::Null,
            Some(Certificate::Hermitian(h)) => json!({
                "type": "hermitian_form",
                "matrix": report::complex_vec(&h.matrix.entries()),
            }),
            Some(Certificate::Intertwiner(g)) => json!({
                "type": "intertwiner",
                "matrix": report::complex_vec(&g.matrix().entries()),
            }),
        };
        json!({
            "verdict": self.kind.as_str(),
            "rationale": self.rationale,
            "certificate": certificate,
            "drift": self.drift.as_ref().map_or(Value::Null, DriftReport::to_json),
        })
    }
}

/// Parameters of the drift heuristic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerdictConfig {
    /// Ball radius `L`.
    pub radius: usize,
    /// Required growth of `min_drift` per unit of word length.
    pub slope_floor: f64,
    /// Additive allowance on `min_drift(L)`, e.g. `2·μ(g)` after conjugating by `g`.
    pub slack: f64,
}

impl Default for VerdictConfig {
    fn default() -> Self {
        VerdictConfig { radius: 6, slope_floor: 0.1, slack: 0.0 }
    }
}

/// Decision tree:
///
/// 1. `ρ` conjugate to `ρ_ref` → `NotAdmissibleCertified` (the conjugator is a fixed point).
/// 2. invariant Hermitian form on the generator images → `AdmissibleCertified`.
/// 3. `min_drift(L) + slack ≥ slope_floor·L` and a positive fitted slope of
///    `min_drift` over lengths `3..=L` → `LikelyAdmissible`.
/// 4. otherwise `Inconclusive`, with the drift report attached.
pub fn admissibility_verdict(
    p: &Presentation,
    rho_ref: &Representation,
    rho: &Representation,
    config: &VerdictConfig,
) -> Result<Verdict> {
    if rho.presentation() != p || rho_ref.presentation() != p {
        return Err(Error::PresentationMismatch);
    }
    if let Some(g) = intertwiner_between(rho_ref, rho) {
        return Ok(Verdict {
            kind: VerdictKind::NotAdmissibleCertified,
            rationale: "conjugate to the reference embedding: the conjugator is fixed by the whole group".into(),
            certificate: Some(Certificate::Intertwiner(g)),
            drift: None,
        });
    }
    if let Some(h) = invariant_hermitian_form(rho.images()) {
        return Ok(Verdict {
            kind: VerdictKind::AdmissibleCertified,
            rationale: "image preserves a positive-definite Hermitian form, hence lies in a compact subgroup".into(),
            certificate: Some(Certificate::Hermitian(h)),
            drift: None,
        });
    }
    let drift = drift_scan(p, rho_ref, rho, config.radius)?;
    let last = drift.min_drift.last().copied().unwrap_or(f64::NEG_INFINITY);
    let need = config.slope_floor * config.radius as f64;
    let slope = drift.min_drift_slope(3);
    let (kind, rationale) = match slope {
        Some(s) if last + config.slack >= need && s > 0.0 => (
            VerdictKind::LikelyAdmissible,
            format!("min drift {last:.6} at length {} clears {need:.6}, fitted slope {s:.6}", config.radius),
        ),
        _ => (
            VerdictKind::Inconclusive,
            format!(
                "min drift {last:.6} at length {} against {need:.6} (slack {:.6}), fitted slope {}",
                config.radius,
                config.slack,
                slope.map_or("undefined".to_string(), |s| format!("{s:.6}"))
            ),
        ),
    };
    Ok(Verdict { kind, rationale, certificate: None, drift: Some(drift) })
}
