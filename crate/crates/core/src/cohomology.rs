//! Twisted cohomology `H¹(Γ, 𝔰𝔩₂^ρ)` through Fox calculus, with numerical ranks.

use nalgebra::{DMatrix, DVector};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg2::{adjoint_matrix, Sl2Element, Sl2Vector, C64, ZERO};
use crate::numeric::{self, RankDecision, MIN_RANK_GAP};
use crate::presentation::Word;
use crate::report;
use crate::repvar::{fox_table, Representation, REP_TOL};

/// Default relative cocycle tolerance.
pub const COC_TOL: f64 = 1e-8;

/// Default relative singular-value cut for rank decisions.
pub const RANK_TOL: f64 = 1e-8;

/// A 1-cochain given by its values on the generators, `c(uv) = c(u) + Ad(ρ(u))c(v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cocycle {
    base: Representation,
    values: Vec<Sl2Vector>,
    defect: f64,
}

impl Cocycle {
    /// Checks `‖Z·c‖ ≤ COC_TOL·‖c‖` against the cocycle matrix of `base`.
    pub fn new(base: Representation, values: Vec<Sl2Vector>) -> Result<Self> {
        Self::with_tol(base, values, COC_TOL)
    }

    pub fn with_tol(base: Representation, values: Vec<Sl2Vector>, tol: f64) -> Result<Self> {
        let c = Self::new_unchecked(base, values)?;
        if c.defect > tol * c.norm() {
            return Err(Error::NotACocycle { defect: c.defect, tol });
        }
        Ok(c)
    }

    /// Builds the cochain and records its defect without enforcing it.
    pub fn new_unchecked(base: Representation, values: Vec<Sl2Vector>) -> Result<Self> {
        if values.len() != base.generator_count() {
            return Err(Error::ImageCount { expected: base.generator_count(), got: values.len() });
        }
        let z = cocycle_matrix(&base);
        let defect = (z * to_vector(&values)).norm();
        Ok(Cocycle { base, values, defect })
    }

    pub fn zero(base: &Representation) -> Self {
        let values = vec![Sl2Vector::zero(); base.generator_count()];
        Cocycle { base: base.clone(), values, defect: 0.0 }
    }

    /// The coboundary `γ ↦ X − Ad(ρ(γ))X`.
    pub fn coboundary(base: &Representation, x: &Sl2Vector) -> Self {
        let values = base.images().iter().map(|g| *x - x.apply(&adjoint_matrix(g))).collect();
        Self::new_unchecked(base.clone(), values).expect("one value per generator")
    }

    pub fn from_vector(base: &Representation, v: &DVector<C64>) -> Result<Self> {
        if v.len() != 3 * base.generator_count() {
            return Err(Error::ImageCount { expected: 3 * base.generator_count(), got: v.len() });
        }
        Self::new_unchecked(base.clone(), from_vector(v))
    }

    pub fn base(&self) -> &Representation {
        &self.base
    }

    pub fn values(&self) -> &[Sl2Vector] {
        &self.values
    }

    /// `‖Z·vec(c)‖`.
    pub fn defect(&self) -> f64 {
        self.defect
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm().powi(2)).sum::<f64>().sqrt()
    }

    pub fn to_vector(&self) -> DVector<C64> {
        to_vector(&self.values)
    }

    /// Value on an arbitrary word, by the cocycle rule.
    pub fn value_on(&self, w: &Word) -> Sl2Vector {
        let mut acc = Sl2Vector::zero();
        let mut g = Sl2Element::identity();
        for &x in w.letters() {
            let i = x.unsigned_abs() as usize - 1;
            let gen = self.base.images()[i];
            let (step, letter) = if x > 0 {
                (self.values[i], gen)
            } else {
                (-self.values[i].apply(&adjoint_matrix(&gen.inv())), gen.inv())
            };
            acc = acc + step.apply(&adjoint_matrix(&g));
            g = g * letter;
        }
        acc
    }

    pub fn scale(&self, k: C64) -> Self {
        Cocycle {
            base: self.base.clone(),
            values: self.values.iter().map(|v| v.scale(k)).collect(),
            defect: self.defect * k.norm(),
        }
    }
}

pub(crate) fn to_vector(values: &[Sl2Vector]) -> DVector<C64> {
    DVector::from_iterator(3 * values.len(), values.iter().flat_map(|v| v.coords()))
}

pub(crate) fn from_vector(v: &DVector<C64>) -> Vec<Sl2Vector> {
    v.as_slice().chunks(3).map(|c| Sl2Vector::new(c[0], c[1], c[2])).collect()
}

/// Fox-linearized relator conditions: block `(j, i)` is `Σ c·Ad(ρ(w))` over the terms
/// of `∂Rⱼ/∂γᵢ`. Its kernel is `Z¹`.
pub fn cocycle_matrix(rho: &Representation) -> DMatrix<C64> {
    let n = rho.generator_count();
    let fox = fox_table(rho.presentation());
    let mut z = DMatrix::zeros(3 * fox.len(), 3 * n);
    for (j, row) in fox.iter().enumerate() {
        for (i, d) in row.iter().enumerate() {
            z.view_mut((3 * j, 3 * i), (3, 3)).copy_from(&rho.evaluate_adjoint(d));
        }
    }
    z
}

/// Stacked `I − Ad(ρ(γᵢ))`. Its image is `B¹`, its kernel the centralizer algebra.
pub fn coboundary_matrix(rho: &Representation) -> DMatrix<C64> {
    let n = rho.generator_count();
    let mut b = DMatrix::zeros(3 * n, 3);
    for (i, g) in rho.images().iter().enumerate() {
        let block = nalgebra::Matrix3::identity() - adjoint_matrix(g);
        b.view_mut((3 * i, 0), (3, 3)).copy_from(&block);
    }
    b
}

/// Dimensions of `Z¹`, `B¹`, `H¹` and the centralizer, with the rank decisions
/// behind them and orthonormal bases (as columns in generator-major coordinates).
///
/// `H¹` is realized as the orthogonal complement of `B¹` inside `Z¹`.
#[derive(Debug, Clone)]
pub struct CohomologyReport {
    pub dim_z1: usize,
    pub dim_b1: usize,
    pub dim_h1: usize,
    pub dim_centralizer: usize,
    pub z1_rank: RankDecision,
    pub b1_rank: RankDecision,
    pub warnings: Vec<String>,
    base: Representation,
    z1_basis: DMatrix<C64>,
    b1_basis: DMatrix<C64>,
    h1_basis: DMatrix<C64>,
}

impl CohomologyReport {
    pub fn base(&self) -> &Representation {
        &self.base
    }

    pub fn z1_basis(&self) -> &DMatrix<C64> {
        &self.z1_basis
    }

    pub fn b1_basis(&self) -> &DMatrix<C64> {
        &self.b1_basis
    }

    pub fn h1_basis(&self) -> &DMatrix<C64> {
        &self.h1_basis
    }

    /// Both rank cuts have a spectral gap of at least `MIN_RANK_GAP`.
    pub fn is_well_conditioned(&self) -> bool {
        self.z1_rank.is_well_conditioned() && self.b1_rank.is_well_conditioned()
    }

    /// Coordinates of the class of `c` against the `H¹` basis.
    pub fn kodaira_spencer_class(&self, c: &Cocycle) -> Result<DVector<C64>> {
        if !c.base.approx_eq(&self.base, 1e-12) {
            return Err(Error::StaleBasis);
        }
        Ok(self.h1_basis.adjoint() * c.to_vector())
    }

    pub fn slice_basis(&self) -> Vec<Cocycle> {
        (0..self.dim_h1)
            .map(|k| {
                Cocycle::from_vector(&self.base, &self.h1_basis.column(k).into_owned()).expect("basis has 3n rows")
            })
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let rank = |d: &RankDecision| {
            json!({
                "rank": d.rank,
                "singular_values": d.singular_values.iter().map(|&s| report::real(s)).collect::<Vec<_>>(),
                "threshold": report::real(d.threshold),
                "gap": d.gap.map_or(Value::Null, report::real),
                "well_conditioned": d.is_well_conditioned(),
            })
        };
        let slice: Vec<Value> = self
            .slice_basis()
            .iter()
            .map(|c| Value::Array(c.values().iter().map(report::sl2_vector).collect()))
            .collect();
        json!({
            "representation": serde_json::to_value(self.base.to_json()).expect("plain data"),
            "dim_Z1": self.dim_z1,
            "dim_B1": self.dim_b1,
            "dim_H1": self.dim_h1,
            "dim_centralizer": self.dim_centralizer,
            "cocycle_rank": rank(&self.z1_rank),
            "coboundary_rank": rank(&self.b1_rank),
            "slice_basis": slice,
            "warnings": self.warnings,
        })
    }
}

pub fn cohomology_report(rho: &Representation) -> Result<CohomologyReport> {
    cohomology_report_with(rho, RANK_TOL)
}

pub fn cohomology_report_with(rho: &Representation, rank_tol: f64) -> Result<CohomologyReport> {
    if !rho.residual().is_finite() {
        return Err(Error::NonFinite);
    }
    let mut warnings = Vec::new();
    if rho.residual() > REP_TOL {
        warnings.push(format!("representation residual {:.3e} above {:.0e}", rho.residual(), REP_TOL));
    }
    let (z1_basis, z1_rank) = numeric::null_space(&cocycle_matrix(rho), rank_tol);
    let (b1_basis, b1_rank) = numeric::column_space(&coboundary_matrix(rho), rank_tol);
    for (name, d) in [("cocycle", &z1_rank), ("coboundary", &b1_rank)] {
        if !d.is_well_conditioned() {
            warnings.push(format!(
                "{name} rank {} has spectral gap {:.3e} below {:.0e}",
                d.rank,
                d.gap.unwrap_or(f64::INFINITY),
                MIN_RANK_GAP
            ));
        }
    }
    let dim_z1 = z1_basis.ncols();
    let dim_b1 = b1_basis.ncols();
    let dim_centralizer = 3 - dim_b1;
    if dim_b1 > dim_z1 {
        warnings.push(format!("B¹ (dim {dim_b1}) does not fit inside Z¹ (dim {dim_z1})"));
    }
    let dim_h1 = dim_z1.saturating_sub(dim_b1);

    // complement of B¹ in Z¹: project Z¹ off B¹ and keep the dominant directions
    let projected = &z1_basis - &b1_basis * (b1_basis.adjoint() * &z1_basis);
    let h1_basis = if dim_h1 == 0 || projected.ncols() == 0 {
        DMatrix::zeros(z1_basis.nrows(), 0)
    } else {
        let svd = projected.svd(true, false);
        let u = svd.u.expect("u requested");
        let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
        order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
        DMatrix::from_fn(u.nrows(), dim_h1, |i, j| u[(i, order[j])])
    };
    Ok(CohomologyReport {
        dim_z1,
        dim_b1,
        dim_h1,
        dim_centralizer,
        z1_rank,
        b1_rank,
        warnings,
        base: rho.clone(),
        z1_basis,
        b1_basis,
        h1_basis,
    })
}

/// Dimension of the centralizer of `ρ(Γ)`.
pub fn aut0_dimension(rho: &Representation) -> usize {
    let (_, d) = numeric::null_space(&coboundary_matrix(rho), RANK_TOL);
    3 - d.rank
}

pub fn kodaira_spencer_class(c: &Cocycle) -> Result<DVector<C64>> {
    cohomology_report(c.base())?.kodaira_spencer_class(c)
}

pub fn slice_basis(rho: &Representation) -> Result<Vec<Cocycle>> {
    Ok(cohomology_report(rho)?.slice_basis())
}

/// Allowed relative defect for a central-difference cocycle with step `h`.
pub fn path_tolerance(h: f64) -> f64 {
    COC_TOL + 10.0 * h * h
}

/// Central-difference derivative `c(γᵢ) = (ρ_h(γᵢ) − ρ_{−h}(γᵢ))/(2h) · ρ(γᵢ)⁻¹`,
/// projected to its traceless part.
///
/// Samples must lie on the variety; the result must satisfy the cocycle condition
/// within [`path_tolerance`].
pub fn path_to_cocycle(
    plus: &Representation,
    minus: &Representation,
    base: &Representation,
    h: f64,
) -> Result<Cocycle> {
    for r in [plus, minus, base] {
        if r.generator_count() != base.generator_count() || r.presentation() != base.presentation() {
            return Err(Error::PresentationMismatch);
        }
        if r.residual() > REP_TOL {
            return Err(Error::OffVariety { residual: r.residual() });
        }
    }
    let values = (0..base.generator_count())
        .map(|i| {
            let d = (*plus.images()[i].matrix() - *minus.images()[i].matrix()).scale(C64::from(0.5 / h));
            Sl2Vector::from_matrix(&(d * *base.images()[i].inv().matrix()))
        })
        .collect();
    let c = Cocycle::new_unchecked(base.clone(), values)?;
    let tol = path_tolerance(h);
    if c.defect() > tol * c.norm().max(1.0) {
        return Err(Error::NotACocycle { defect: c.defect(), tol });
    }
    Ok(c)
}

/// Samples `path(±h)` and differentiates at `path(0)`.
pub fn path_to_cocycle_fn<F>(path: F, h: f64) -> Result<Cocycle>
where
    F: Fn(f64) -> Representation,
{
    path_to_cocycle(&path(h), &path(-h), &path(0.0), h)
}

/// Whether `ρ(γ)` is semisimple, with the quantities the decision rests on.
#[derive(Debug, Clone, PartialEq)]
pub struct LunaDiagnostic {
    pub generator: usize,
    pub semisimple: bool,
    pub trace: C64,
    pub distance_to_center: f64,
}

impl LunaDiagnostic {
    pub fn to_json(&self) -> Value {
        json!({
            "generator": self.generator,
            "semisimple": self.semisimple,
            "trace": report::complex(self.trace),
            "distance_to_center": report::real(self.distance_to_center),
        })
    }
}

/// `ρ(γ)` is diagonalizable iff its trace is not ±2 or it is ±I.
pub fn luna_hypothesis_check(rho: &Representation, generator: usize) -> LunaDiagnostic {
    const TOL: f64 = 1e-9;
    let g = rho.image(generator);
    let trace = g.trace();
    let two = C64::from(2.0);
    let parabolic_trace = (trace - two).norm().min((trace + two).norm()) <= TOL;
    let distance_to_center =
        g.dist(&Sl2Element::identity()).min(g.dist(&-Sl2Element::identity()));
    LunaDiagnostic {
        generator,
        semisimple: !parabolic_trace || distance_to_center <= TOL,
        trace,
        distance_to_center,
    }
}

/// Zero vector of length `3n`.
pub fn zero_cochain(n: usize) -> DVector<C64> {
    DVector::from_element(3 * n, ZERO)
}
