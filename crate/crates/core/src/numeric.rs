//! Small dense helpers on top of nalgebra's SVD: numerical rank with an
//! auditable cut, kernels, column spaces and minimum-norm least squares.

use nalgebra::{ComplexField, DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// Gap ratio below which a rank decision is flagged as ill-conditioned.
pub const MIN_RANK_GAP: f64 = 1e3;

/// Outcome of thresholding a singular spectrum.
///
/// `threshold = rel_tol · max(σ_max, 1)`; `gap` is `σ_r / σ_{r+1}` at the cut, with
/// `max(σ_max, 1)` standing in for `σ_r` when `r = 0`. `None` means nothing
/// competes on the discarded side (no singular values left, or they are exactly 0).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankDecision {
    pub rank: usize,
    pub singular_values: Vec<f64>,
    pub threshold: f64,
    pub gap: Option<f64>,
}

impl RankDecision {
    pub fn from_singular_values(mut sv: Vec<f64>, rel_tol: f64) -> Self {
        sv.sort_by(|a, b| b.total_cmp(a));
        let scale = sv.first().copied().unwrap_or(0.0).max(1.0);
        let threshold = rel_tol * scale;
        let rank = sv.iter().take_while(|&&s| s >= threshold).count();
        let upper = if rank == 0 { scale } else { sv[rank - 1] };
        let gap = match sv.get(rank) {
            Some(&lower) if lower > 0.0 => Some(upper / lower),
            _ => None,
        };
        RankDecision { rank, singular_values: sv, threshold, gap }
    }

    pub fn is_well_conditioned(&self) -> bool {
        self.gap.is_none_or(|g| g >= MIN_RANK_GAP)
    }

    /// True when the gap at the cut exceeds `ratio` (or is unbounded).
    pub fn gap_exceeds(&self, ratio: f64) -> bool {
        self.gap.is_none_or(|g| g > ratio)
    }
}

/// Full SVD pieces: singular values (descending) and all right singular vectors.
fn right_svd<T>(m: &DMatrix<T>) -> (Vec<f64>, DMatrix<T>)
where
    T: ComplexField<RealField = f64>,
{
    let (rows, cols) = m.shape();
    if cols == 0 {
        return (Vec::new(), DMatrix::zeros(0, 0));
    }
    // pad with zero rows so that the thin SVD carries the whole right basis
    let padded = if rows < cols {
        let mut p = DMatrix::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("v requested");
    let sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    let mut order: Vec<usize> = (0..sv.len()).collect();
    order.sort_by(|&a, &b| sv[b].total_cmp(&sv[a]));
    let v = v_t.adjoint();
    let sorted_v = DMatrix::from_fn(cols, cols, |i, j| v[(i, order[j])].clone());
    let mut sorted_sv: Vec<f64> = order.iter().map(|&k| sv[k]).collect();
    sorted_sv.truncate(rows.min(cols));
    (sorted_sv, sorted_v)
}

/// Orthonormal kernel basis (as columns) and the rank decision behind it.
pub fn null_space<T>(m: &DMatrix<T>, rel_tol: f64) -> (DMatrix<T>, RankDecision)
where
    T: ComplexField<RealField = f64>,
{
    let cols = m.ncols();
    let (sv, v) = right_svd(m);
    let decision = RankDecision::from_singular_values(sv, rel_tol);
    let basis = v.columns(decision.rank, cols - decision.rank).into_owned();
    (basis, decision)
}

/// Orthonormal basis of the column space and the rank decision behind it.
pub fn column_space<T>(m: &DMatrix<T>, rel_tol: f64) -> (DMatrix<T>, RankDecision)
where
    T: ComplexField<RealField = f64>,
{
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return (DMatrix::zeros(rows, 0), RankDecision::from_singular_values(Vec::new(), rel_tol));
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("u requested");
    let sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    let mut order: Vec<usize> = (0..sv.len()).collect();
    order.sort_by(|&a, &b| sv[b].total_cmp(&sv[a]));
    let decision = RankDecision::from_singular_values(sv, rel_tol);
    let basis = DMatrix::from_fn(rows, decision.rank, |i, j| u[(i, order[j])].clone());
    (basis, decision)
}

/// Minimum-norm least-squares solution of `m x = b` (pseudo-inverse with the rank cut).
pub fn lstsq_min_norm<T>(m: &DMatrix<T>, b: &DVector<T>, rel_tol: f64) -> (DVector<T>, RankDecision)
where
    T: ComplexField<RealField = f64>,
{
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return (DVector::zeros(cols), RankDecision::from_singular_values(Vec::new(), rel_tol));
    }
    let svd = m.clone().svd(true, true);
    let u = svd.u.as_ref().expect("u requested");
    let v_t = svd.v_t.as_ref().expect("v requested");
    let sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    let decision = RankDecision::from_singular_values(sv.clone(), rel_tol);
    let mut x = DVector::<T>::zeros(cols);
    for (k, &s) in sv.iter().enumerate() {
        if s < decision.threshold || s == 0.0 {
            continue;
        }
        let coeff = u.column(k).dotc(b).unscale(s);
        x += v_t.row(k).adjoint() * coeff;
    }
    (x, decision)
}

/// Largest absolute entry.
pub fn max_abs<T>(m: &DMatrix<T>) -> f64
where
    T: ComplexField<RealField = f64>,
{
    m.iter().map(|x| x.clone().modulus()).fold(0.0, f64::max)
}
