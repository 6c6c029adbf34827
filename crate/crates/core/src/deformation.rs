//! Formal deformations `ρ_k(γ) = exp(Σⱼ cⱼ(γ) tʲ)·ρ(γ)` in truncated power series,
//! obstructions to extending them, and numerical continuation along cocycles.

use std::ops::{Add, Sub};

use nalgebra::{DMatrix, DVector};
use serde_json::{json, Value};

use crate::cohomology::{cocycle_matrix, from_vector, to_vector, Cocycle, COC_TOL};
use crate::error::{Error, Result};
use crate::linalg2::{exp_traceless, Mat2C, Sl2Vector, C64, ONE, ZERO};
use crate::numeric;
use crate::presentation::Word;
use crate::report;
use crate::repvar::{newton_refine, Representation, REP_TOL};

/// Default tolerance on jet coefficients.
pub const JET_TOL: f64 = 1e-8;

/// Default truncation order.
pub const DEFAULT_ORDER: usize = 6;

/// Truncated power series `Σ_{j≤N} aⱼ tʲ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    pub coefficients: Vec<C64>,
}

impl Jet {
    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficient(&self, j: usize) -> C64 {
        self.coefficients.get(j).copied().unwrap_or(ZERO)
    }
}

/// 2×2 matrix with truncated-series entries, stored as its coefficient matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixJet {
    coefficients: Vec<Mat2C>,
}

impl MatrixJet {
    pub fn new(coefficients: Vec<Mat2C>) -> Self {
        assert!(!coefficients.is_empty(), "a jet has at least the constant term");
        MatrixJet { coefficients }
    }

    pub fn constant(m: Mat2C, order: usize) -> Self {
        let mut coefficients = vec![Mat2C::zero(); order + 1];
        coefficients[0] = m;
        MatrixJet { coefficients }
    }

    pub fn identity(order: usize) -> Self {
        Self::constant(Mat2C::identity(), order)
    }

    pub fn zero(order: usize) -> Self {
        Self::constant(Mat2C::zero(), order)
    }

    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[Mat2C] {
        &self.coefficients
    }

    pub fn coefficient(&self, j: usize) -> Mat2C {
        self.coefficients.get(j).copied().unwrap_or_else(Mat2C::zero)
    }

    /// Entry `(row, col)` (0-based) as a scalar jet.
    pub fn entry(&self, row: usize, col: usize) -> Jet {
        let pick = |m: &Mat2C| m.entries()[2 * row + col];
        Jet { coefficients: self.coefficients.iter().map(pick).collect() }
    }

    pub fn det(&self) -> Jet {
        let (a, b, c, d) = (self.entry(0, 0), self.entry(0, 1), self.entry(1, 0), self.entry(1, 1));
        let n = self.order();
        let coefficients = (0..=n)
            .map(|k| {
                (0..=k)
                    .map(|j| a.coefficients[j] * d.coefficients[k - j] - b.coefficients[j] * c.coefficients[k - j])
                    .sum()
            })
            .collect();
        Jet { coefficients }
    }

    pub fn scale(&self, k: C64) -> Self {
        MatrixJet { coefficients: self.coefficients.iter().map(|m| m.scale(k)).collect() }
    }

    /// Right multiplication by a constant matrix.
    pub fn mul_constant(&self, m: &Mat2C) -> Self {
        MatrixJet { coefficients: self.coefficients.iter().map(|x| *x * *m).collect() }
    }
}

impl Add for &MatrixJet {
    type Output = MatrixJet;
    fn add(self, o: &MatrixJet) -> MatrixJet {
        let n = self.order().max(o.order());
        MatrixJet { coefficients: (0..=n).map(|j| self.coefficient(j) + o.coefficient(j)).collect() }
    }
}

impl Sub for &MatrixJet {
    type Output = MatrixJet;
    fn sub(self, o: &MatrixJet) -> MatrixJet {
        let n = self.order().max(o.order());
        MatrixJet { coefficients: (0..=n).map(|j| self.coefficient(j) - o.coefficient(j)).collect() }
    }
}

/// Cauchy product, truncated at the common order.
pub fn jet_mul(a: &MatrixJet, b: &MatrixJet) -> Result<MatrixJet> {
    if a.order() != b.order() {
        return Err(Error::OrderMismatch(a.order(), b.order()));
    }
    let n = a.order();
    let coefficients = (0..=n)
        .map(|k| (0..=k).fold(Mat2C::zero(), |acc, j| acc + a.coefficients[j] * b.coefficients[k - j]))
        .collect();
    Ok(MatrixJet { coefficients })
}

/// Inverse by `B₀ = A₀⁻¹`, `Bₖ = −A₀⁻¹ Σ_{j≥1} Aⱼ B_{k−j}`.
pub fn jet_inv(a: &MatrixJet) -> Result<MatrixJet> {
    let a0 = a.coefficients[0];
    let inv0 = a0.inverse().ok_or(Error::SingularConstant)?;
    let n = a.order();
    let mut out: Vec<Mat2C> = Vec::with_capacity(n + 1);
    out.push(inv0);
    for k in 1..=n {
        let sum = (1..=k).fold(Mat2C::zero(), |acc, j| acc + a.coefficients[j] * out[k - j]);
        out.push(-(inv0 * sum));
    }
    Ok(MatrixJet { coefficients: out })
}

/// `Σ_{j≤N} Xʲ/j!` for `X` without constant term.
pub fn exp_jet(x: &MatrixJet) -> Result<MatrixJet> {
    if x.coefficients[0].max_abs() != 0.0 {
        return Err(Error::NonzeroConstant);
    }
    let n = x.order();
    let mut sum = MatrixJet::identity(n);
    let mut power = MatrixJet::identity(n);
    for j in 1..=n {
        power = jet_mul(&power, x)?.scale(C64::from(1.0 / j as f64));
        sum = &sum + &power;
    }
    Ok(sum)
}

/// Traceless series `Σⱼ vⱼ tʲ` (index 0 of `values` is order 1).
fn tangent_jet(values: &[Sl2Vector], order: usize) -> MatrixJet {
    let mut coefficients = vec![Mat2C::zero(); order + 1];
    for (j, v) in values.iter().enumerate().take(order) {
        coefficients[j + 1] = v.to_matrix();
    }
    MatrixJet { coefficients }
}

/// Base representation with cochains `c₁ … c_k`, each a value per generator.
#[derive(Debug, Clone, PartialEq)]
pub struct DeformationJet {
    base: Representation,
    cochains: Vec<Vec<Sl2Vector>>,
}

impl DeformationJet {
    /// Validates that `c₁` is a cocycle and the relator defects vanish through order `k`.
    pub fn new(base: Representation, cochains: Vec<Vec<Sl2Vector>>) -> Result<Self> {
        let d = Self::new_unchecked(base, cochains)?;
        if let Some(c1) = d.cochains.first() {
            Cocycle::new(d.base.clone(), c1.clone())?;
        }
        d.validate(JET_TOL)?;
        Ok(d)
    }

    /// Checks only the shapes.
    pub fn new_unchecked(base: Representation, cochains: Vec<Vec<Sl2Vector>>) -> Result<Self> {
        let n = base.generator_count();
        if let Some(bad) = cochains.iter().find(|c| c.len() != n) {
            return Err(Error::ImageCount { expected: n, got: bad.len() });
        }
        Ok(DeformationJet { base, cochains })
    }

    /// The first-order deformation along a cocycle.
    pub fn from_cocycle(c: &Cocycle) -> Result<Self> {
        Self::new(c.base().clone(), vec![c.values().to_vec()])
    }

    pub fn base(&self) -> &Representation {
        &self.base
    }

    pub fn cochains(&self) -> &[Vec<Sl2Vector>] {
        &self.cochains
    }

    pub fn order(&self) -> usize {
        self.cochains.len()
    }

    pub fn extended(&self, next: Vec<Sl2Vector>) -> Result<Self> {
        let mut cochains = self.cochains.clone();
        cochains.push(next);
        Self::new_unchecked(self.base.clone(), cochains)
    }

    /// Relator defect coefficients of orders `1..=k` must be at most
    /// `tol·(1 + Σⱼ‖cⱼ‖)` in Frobenius norm.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let k = self.order();
        let scale = 1.0 + self.cochains.iter().map(|c| to_vector(c).norm()).sum::<f64>();
        for r in self.base.presentation().relators() {
            let defect = relator_defect_jet_at(self, r, k);
            for order in 1..=k {
                let size = defect.coefficient(order).frobenius();
                if size.is_nan() || size > tol * scale {
                    return Err(Error::InvalidJet { order, defect: size });
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let cochains: Vec<Value> = self
            .cochains
            .iter()
            .map(|c| Value::Array(c.iter().map(report::sl2_vector).collect()))
            .collect();
        json!({
            "representation": serde_json::to_value(self.base.to_json()).expect("plain data"),
            "order": self.order(),
            "cochains": cochains,
        })
    }
}

/// Generator jets `exp(Σⱼ cⱼ(γᵢ)tʲ)·ρ(γᵢ)`, truncated at `order`.
pub fn generator_jets_at(d: &DeformationJet, order: usize) -> Vec<MatrixJet> {
    (0..d.base.generator_count())
        .map(|i| {
            let values: Vec<Sl2Vector> = d.cochains.iter().map(|c| c[i]).collect();
            let e = exp_jet(&tangent_jet(&values, order)).expect("no constant term");
            e.mul_constant(d.base.images()[i].matrix())
        })
        .collect()
}

/// Generator jets truncated at the deformation order.
pub fn deformed_generator_jets(d: &DeformationJet) -> Vec<MatrixJet> {
    generator_jets_at(d, d.order())
}

/// `R(ρ_k) − I`, truncated at `order`.
pub fn relator_defect_jet_at(d: &DeformationJet, r: &Word, order: usize) -> MatrixJet {
    let n = d.base.generator_count();
    let forward = generator_jets_at(d, order);
    // (exp(X)ρ)⁻¹ = ρ⁻¹·exp(−X)
    let backward: Vec<MatrixJet> = (0..n)
        .map(|i| {
            let values: Vec<Sl2Vector> = d.cochains.iter().map(|c| -c[i]).collect();
            let e = exp_jet(&tangent_jet(&values, order)).expect("no constant term");
            let inv = MatrixJet::constant(*d.base.images()[i].inv().matrix(), order);
            jet_mul(&inv, &e).expect("same order")
        })
        .collect();
    let mut acc = MatrixJet::identity(order);
    for &x in r.letters() {
        let i = x.unsigned_abs() as usize - 1;
        let g = if x > 0 { &forward[i] } else { &backward[i] };
        acc = jet_mul(&acc, g).expect("same order");
    }
    &acc - &MatrixJet::identity(order)
}

/// `R(ρ_k) − I` truncated at the deformation order.
pub fn relator_defect_jet(d: &DeformationJet, r: &Word) -> MatrixJet {
    relator_defect_jet_at(d, r, d.order())
}

/// Order-`(k+1)` relator defects, right-multiplied by `ρ(R)⁻¹` and written in
/// 𝔰𝔩₂ coordinates, one triple per relator.
///
/// The trace of each coefficient is checked against the jet tolerance: a large
/// trace means the input jet was not valid through order `k`.
pub fn obstruction_vector(d: &DeformationJet) -> Result<DVector<C64>> {
    let k = d.order();
    let relators = d.base.presentation().relators();
    let mut out = DVector::zeros(3 * relators.len());
    for (j, r) in relators.iter().enumerate() {
        let defect = relator_defect_jet_at(d, r, k + 1);
        let at_r = d.base.evaluate_word(r).inv();
        let coeff = defect.coefficient(k + 1) * *at_r.matrix();
        let trace = coeff.trace().norm();
        if trace > JET_TOL * (1.0 + coeff.frobenius()) {
            return Err(Error::InvalidJet { order: k + 1, defect: trace });
        }
        let v = Sl2Vector::from_matrix(&coeff);
        out.rows_mut(3 * j, 3).copy_from(&DVector::from_column_slice(&v.coords()));
    }
    Ok(out)
}

/// Next cochain `c_{k+1}` solving `Z·c_{k+1} = −O`, or `None` when the least-squares
/// residual exceeds `JET_TOL·(1 + ‖O‖)`.
///
/// Among solutions, the minimum-norm one is returned.
pub fn extend_deformation(d: &DeformationJet) -> Result<Option<Vec<Sl2Vector>>> {
    let obstruction = obstruction_vector(d)?;
    let z = cocycle_matrix(&d.base);
    let rhs = -&obstruction;
    let (c, _) = numeric::lstsq_min_norm(&z, &rhs, crate::cohomology::RANK_TOL);
    let residual = (&z * &c - &rhs).norm();
    if residual < JET_TOL * (1.0 + obstruction.norm()) {
        Ok(Some(from_vector(&c)))
    } else {
        Ok(None)
    }
}

/// Result of extending order by order.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionOutcome {
    /// The longest valid deformation reached.
    pub jet: DeformationJet,
    /// Order at which the extension system had no solution, if any.
    pub obstructed_at: Option<usize>,
    /// Norm of each order's obstruction vector, starting at order 2.
    pub obstruction_norms: Vec<f64>,
}

impl ExtensionOutcome {
    pub fn to_json(&self) -> Value {
        json!({
            "deformation": self.jet.to_json(),
            "reached_order": self.jet.order(),
            "obstructed_at": self.obstructed_at,
            "obstruction_norms": self.obstruction_norms.iter().map(|&x| report::real(x)).collect::<Vec<_>>(),
        })
    }
}

/// Starts from `c₁` and extends until `order` or until obstructed.
pub fn extend_to_order(c1: &Cocycle, order: usize) -> Result<ExtensionOutcome> {
    let mut jet = DeformationJet::from_cocycle(c1)?;
    let mut norms = Vec::new();
    while jet.order() < order {
        norms.push(obstruction_vector(&jet)?.norm());
        match extend_deformation(&jet)? {
            Some(next) => jet = jet.extended(next)?,
            None => {
                let at = jet.order() + 1;
                return Ok(ExtensionOutcome { jet, obstructed_at: Some(at), obstruction_norms: norms });
            }
        }
    }
    Ok(ExtensionOutcome { jet, obstructed_at: None, obstruction_norms: norms })
}

/// The linear map `c₁ ↦ (order-1 relator defects)·ρ(R)⁻¹` in coordinates, built
/// column by column from jets.
pub fn first_order_defect_matrix(rho: &Representation) -> DMatrix<C64> {
    let n = rho.generator_count();
    let relators = rho.presentation().relators();
    let mut out = DMatrix::zeros(3 * relators.len(), 3 * n);
    for col in 0..3 * n {
        let mut values = vec![Sl2Vector::zero(); n];
        let mut coords = [ZERO; 3];
        coords[col % 3] = ONE;
        values[col / 3] = Sl2Vector::from(coords);
        let d = DeformationJet::new_unchecked(rho.clone(), vec![values]).expect("shape");
        for (j, r) in relators.iter().enumerate() {
            let coeff = relator_defect_jet_at(&d, r, 1).coefficient(1) * *rho.evaluate_word(r).inv().matrix();
            let v = Sl2Vector::from_matrix(&coeff).coords();
            for (b, x) in v.iter().enumerate() {
                out[(3 * j + b, col)] = *x;
            }
        }
    }
    out
}

/// Predictor–corrector continuation: each step moves `gᵢ ← exp(h·c(γᵢ))·gᵢ` and
/// refines back onto the variety.
///
/// The direction is re-projected onto the cocycles of the current point before
/// every step. The returned path starts at `ρ` and has `steps + 1` points.
pub fn integrate_curve(rho: &Representation, c: &Cocycle, h: f64, steps: usize) -> Result<Vec<Representation>> {
    if rho.residual() > REP_TOL {
        return Err(Error::OffVariety { residual: rho.residual() });
    }
    if c.base().presentation() != rho.presentation() {
        return Err(Error::PresentationMismatch);
    }
    let mut path = vec![rho.clone()];
    if c.norm() == 0.0 {
        path.resize(steps + 1, rho.clone());
        return Ok(path);
    }
    let at_rho = Cocycle::new_unchecked(rho.clone(), c.values().to_vec())?;
    if at_rho.defect() > COC_TOL * at_rho.norm() {
        return Err(Error::NotACocycle { defect: at_rho.defect(), tol: COC_TOL });
    }
    let mut direction = c.to_vector();
    for step in 1..=steps {
        let cur = path.last().expect("nonempty");
        let (kernel, _) = numeric::null_space(&cocycle_matrix(cur), crate::cohomology::RANK_TOL);
        let projected = &kernel * (kernel.adjoint() * &direction);
        let ratio = direction.norm() / projected.norm().max(f64::MIN_POSITIVE);
        direction = projected * C64::from(ratio);
        let moves: Vec<Sl2Vector> = from_vector(&direction).iter().map(|v| v.scale(C64::from(h))).collect();
        let images = cur.images().iter().zip(&moves).map(|(g, x)| exp_traceless(x) * *g).collect();
        let predicted = Representation::new(cur.presentation().clone(), images)?;
        let corrected = newton_refine(&predicted, 30, 1e-12)
            .map_err(|e| Error::CorrectorStall { step, source: Box::new(e) })?;
        if corrected.residual() > REP_TOL {
            return Err(Error::CorrectorStall {
                step,
                source: Box::new(Error::OffVariety { residual: corrected.residual() }),
            });
        }
        path.push(corrected);
    }
    Ok(path)
}

/// Elementwise check that a deformed image is in SL₂ to the jet's order.
pub fn det_defect(m: &MatrixJet) -> f64 {
    let det = m.det();
    det.coefficients
        .iter()
        .enumerate()
        .map(|(j, &x)| if j == 0 { (x - ONE).norm() } else { x.norm() })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::{cohomology_report, kodaira_spencer_class};
    use crate::linalg2::{adjoint_matrix, random_sl2, random_sl2_vector, random_su2, Sl2Element};
    use crate::presentation::{parse_presentation, Presentation};
    use crate::repvar::{abelian_representations, conjugate_representation, weeks_geometric};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(x: f64) -> C64 {
        C64::from(x)
    }

    fn z2() -> Presentation {
        parse_presentation("a,b | a b A B").unwrap()
    }

    fn jet_close(a: &MatrixJet, b: &MatrixJet, tol: f64) -> bool {
        let n = a.order().max(b.order());
        (0..=n).all(|j| (a.coefficient(j) - b.coefficient(j)).max_abs() <= tol)
    }

    #[test]
    fn jet_arithmetic_examples() {
        let e = Sl2Vector::E.to_matrix();
        let h = Sl2Vector::H.to_matrix();
        let plus = MatrixJet::new(vec![Mat2C::identity(), e, Mat2C::zero()]);
        let minus = MatrixJet::new(vec![Mat2C::identity(), -e, Mat2C::zero()]);
        assert_eq!(jet_mul(&plus, &minus).unwrap(), MatrixJet::identity(2));

        let a = MatrixJet::new(vec![Mat2C::identity(), h, Mat2C::zero(), Mat2C::zero()]);
        let inv = jet_inv(&a).unwrap();
        let expected = MatrixJet::new(vec![Mat2C::identity(), -h, h * h, -(h * h * h)]);
        assert!(jet_close(&inv, &expected, 1e-15));

        assert_eq!(jet_mul(&plus, &a).unwrap_err(), Error::OrderMismatch(2, 3));
        assert_eq!(jet_inv(&MatrixJet::zero(2)).unwrap_err(), Error::SingularConstant);
        assert_eq!(exp_jet(&a).unwrap_err(), Error::NonzeroConstant);
    }

    #[test]
    fn exp_jet_examples() {
        assert_eq!(exp_jet(&MatrixJet::zero(4)).unwrap(), MatrixJet::identity(4));
        let x = Sl2Vector::new(c(0.3), c(-1.0), C64::new(0.0, 2.0)).to_matrix();
        let ex = exp_jet(&MatrixJet::new(vec![Mat2C::zero(), x, Mat2C::zero()])).unwrap();
        assert_eq!(ex.coefficient(1), x);
        let h = Sl2Vector::H.to_matrix();
        let e = Sl2Vector::E.to_matrix();
        let ex = exp_jet(&MatrixJet::new(vec![Mat2C::zero(), h, e])).unwrap();
        assert!((ex.coefficient(2) - (e + (h * h).scale(c(0.5)))).max_abs() < 1e-15);
    }

    #[test]
    fn exp_jet_matches_the_matrix_exponential_along_a_line() {
        // exp(tX) coefficients are Xʲ/j!; compare the truncated sum at t = 0.1
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let x = random_sl2_vector(&mut rng, 1.0);
        let mut coeffs = vec![Mat2C::zero(); 12];
        coeffs[1] = x.to_matrix();
        let jet = exp_jet(&MatrixJet::new(coeffs)).unwrap();
        let t: f64 = 0.1;
        let sum = jet
            .coefficients()
            .iter()
            .enumerate()
            .fold(Mat2C::zero(), |acc, (j, m)| acc + m.scale(c(t.powi(j as i32))));
        assert!((sum - *exp_traceless(&x.scale(c(t))).matrix()).max_abs() < 1e-13);
    }

    #[test]
    fn generator_jets() {
        let rho = weeks_geometric(0).unwrap();
        let d0 = DeformationJet::new(rho.clone(), vec![]).unwrap();
        let jets = deformed_generator_jets(&d0);
        assert_eq!(jets[0].coefficients(), &[*rho.images()[0].matrix()]);

        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let cochains: Vec<Vec<Sl2Vector>> =
            (0..3).map(|_| (0..2).map(|_| random_sl2_vector(&mut rng, 1.0)).collect()).collect();
        let d = DeformationJet::new_unchecked(rho.clone(), cochains.clone()).unwrap();
        let jets = deformed_generator_jets(&d);
        for (i, jet) in jets.iter().enumerate() {
            let expected = cochains[0][i].to_matrix() * *rho.images()[i].matrix();
            assert!((jet.coefficient(1) - expected).max_abs() < 1e-14);
            assert!(det_defect(jet) < 1e-10);
        }
    }

    #[test]
    fn defect_of_a_non_cocycle_matches_the_cocycle_residual() {
        let rho = weeks_geometric(1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let values: Vec<Sl2Vector> = (0..2).map(|_| random_sl2_vector(&mut rng, 1.0)).collect();
        let d = DeformationJet::new_unchecked(rho.clone(), vec![values.clone()]).unwrap();
        let order1: f64 = rho
            .presentation()
            .relators()
            .iter()
            .map(|r| {
                let m = relator_defect_jet(&d, r).coefficient(1) * *rho.evaluate_word(r).inv().matrix();
                Sl2Vector::from_matrix(&m).norm().powi(2)
            })
            .sum::<f64>()
            .sqrt();
        let coc = Cocycle::new_unchecked(rho, values).unwrap();
        assert!((order1 - coc.defect()).abs() < 1e-10 * (1.0 + coc.defect()));
        assert!(coc.defect() > 1e-3);
        assert!(matches!(DeformationJet::new(coc.base().clone(), vec![coc.values().to_vec()]), Err(Error::NotACocycle { .. })));
    }

    #[test]
    fn first_order_operator_is_the_cocycle_matrix() {
        let mut reps = vec![Representation::trivial(&Presentation::weeks())];
        reps.extend(abelian_representations(&Presentation::weeks()).unwrap());
        reps.extend((0..6).map(|k| weeks_geometric(k).unwrap()));
        for rho in &reps {
            let diff = first_order_defect_matrix(rho) - cocycle_matrix(rho);
            assert!(numeric::max_abs(&diff) < 1e-10);
        }
    }

    #[test]
    fn free_groups_never_obstruct() {
        let rho = Representation::new(Presentation::free(1), vec![Sl2Element::diag(c(2.0))]).unwrap();
        for values in [Sl2Vector::H, Sl2Vector::E, Sl2Vector::new(c(1.0), c(2.0), c(-0.5))] {
            let c1 = Cocycle::new(rho.clone(), vec![values]).unwrap();
            let out = extend_to_order(&c1, 4).unwrap();
            assert_eq!(out.obstructed_at, None);
            assert_eq!(out.jet.order(), 4);
            assert!(out.obstruction_norms.iter().all(|&x| x == 0.0));
            assert_eq!(obstruction_vector(&out.jet).unwrap().len(), 0);
        }
    }

    #[test]
    fn weeks_trivial_zero_deformation() {
        let rho = Representation::trivial(&Presentation::weeks());
        let d = DeformationJet::new(rho, vec![vec![Sl2Vector::zero(); 2]]).unwrap();
        assert_eq!(obstruction_vector(&d).unwrap().norm(), 0.0);
    }

    #[test]
    fn commutator_obstruction() {
        let rho = Representation::trivial(&z2());
        let c1 = Cocycle::new(rho.clone(), vec![Sl2Vector::E, Sl2Vector::F]).unwrap();
        let d = DeformationJet::from_cocycle(&c1).unwrap();
        // order-2 coefficient of [exp(tE), exp(tF)] is [E, F] = H
        let o = obstruction_vector(&d).unwrap();
        let expected = DVector::from_column_slice(&Sl2Vector::H.coords());
        assert!((o - expected).norm() < 1e-15);
        assert_eq!(extend_deformation(&d).unwrap(), None);
        let out = extend_to_order(&c1, 4).unwrap();
        assert_eq!(out.obstructed_at, Some(2));
        assert_eq!(out.jet.order(), 1);

        let commuting = Cocycle::new(rho, vec![Sl2Vector::H, Sl2Vector::H]).unwrap();
        let out = extend_to_order(&commuting, 4).unwrap();
        assert_eq!(out.obstructed_at, None);
        assert_eq!(out.jet.order(), 4);
        for c in &out.jet.cochains()[1..] {
            assert!(c.iter().all(|v| v.norm() < 1e-14));
        }
        out.jet.validate(10.0 * JET_TOL).unwrap();
    }

    #[test]
    fn extensions_revalidate() {
        // ℤ² at a diagonal point: the torus direction extends
        let rho = Representation::new(z2(), vec![Sl2Element::diag(c(2.0)), Sl2Element::diag(C64::new(0.4, 0.9))]).unwrap();
        for s in cohomology_report(&rho).unwrap().slice_basis() {
            let out = extend_to_order(&s, 5).unwrap();
            assert_eq!(out.obstructed_at, None, "{:?}", s.values());
            out.jet.validate(10.0 * JET_TOL).unwrap();
        }
    }

    #[test]
    fn curves_in_the_torus() {
        let rho = Representation::new(Presentation::free(1), vec![Sl2Element::diag(c(2.0))]).unwrap();
        let dir = Cocycle::new(rho.clone(), vec![Sl2Vector::H]).unwrap();
        let path = integrate_curve(&rho, &dir, 0.05, 10).unwrap();
        assert_eq!(path.len(), 11);
        for (k, p) in path.iter().enumerate() {
            let s = p.images()[0].matrix().a;
            assert!((s.ln() - (2f64.ln() + 0.05 * k as f64)).norm() < 1e-12);
            assert!(p.images()[0].matrix().b.norm() < 1e-14);
        }
        let zero = Cocycle::zero(&rho);
        let path = integrate_curve(&rho, &zero, 0.05, 3).unwrap();
        assert!(path.iter().all(|p| p == &rho));
    }

    #[test]
    fn curves_on_a_relator_variety() {
        let rho = Representation::new(z2(), vec![Sl2Element::diag(c(2.0)), Sl2Element::diag(c(0.7))]).unwrap();
        let s = &cohomology_report(&rho).unwrap().slice_basis()[0];
        let path = integrate_curve(&rho, s, 0.02, 8).unwrap();
        for p in &path {
            assert!(p.residual() < REP_TOL);
        }
        let end = path.last().unwrap();
        let moved: f64 = end.images().iter().zip(rho.images()).map(|(a, b)| a.dist(b)).sum();
        assert!(moved > 1e-3);
    }

    #[test]
    fn weeks_trivial_refuses_to_move() {
        let rho = Representation::trivial(&Presentation::weeks());
        let fake = Cocycle::new_unchecked(rho.clone(), vec![Sl2Vector::H, Sl2Vector::zero()]).unwrap();
        assert!(matches!(integrate_curve(&rho, &fake, 0.05, 3), Err(Error::NotACocycle { .. })));
        assert!(cohomology_report(&rho).unwrap().slice_basis().is_empty());
    }

    #[test]
    fn conjugation_paths_are_tangent_to_orbits() {
        let rho = weeks_geometric(2).unwrap();
        let x = Sl2Vector::new(c(0.1), c(0.2), c(-0.3));
        let cob = Cocycle::coboundary(&rho, &x);
        assert!(kodaira_spencer_class(&cob).unwrap().norm() < 1e-9);
    }

    fn block_ad(g: &Sl2Element, v: &DVector<C64>) -> DVector<C64> {
        let ad = adjoint_matrix(g);
        let mut out = v.clone();
        for j in 0..v.len() / 3 {
            let block = ad * nalgebra::Vector3::new(v[3 * j], v[3 * j + 1], v[3 * j + 2]);
            out.rows_mut(3 * j, 3).copy_from(&block);
        }
        out
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn inverse_round_trip(seed in any::<u64>(), order in 1usize..6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut coeffs = vec![*random_sl2(&mut rng, 0.5).matrix()];
            for _ in 0..order {
                coeffs.push(random_sl2_vector(&mut rng, 1.0).to_matrix());
            }
            let a = MatrixJet::new(coeffs);
            let prod = jet_mul(&a, &jet_inv(&a).unwrap()).unwrap();
            prop_assert!(jet_close(&prod, &MatrixJet::identity(order), 1e-12));
        }

        #[test]
        fn obstruction_is_equivariant(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let rho = Representation::trivial(&z2());
            let va = random_sl2_vector(&mut rng, 1.0);
            let vb = random_sl2_vector(&mut rng, 1.0);
            let d = DeformationJet::new(rho.clone(), vec![vec![va, vb]]).unwrap();
            let o = obstruction_vector(&d).unwrap();
            for g in [random_sl2(&mut rng, 0.5), random_su2(&mut rng)] {
                let ad = adjoint_matrix(&g);
                let conj = conjugate_representation(&rho, &g);
                let dg = DeformationJet::new(conj, vec![vec![va.apply(&ad), vb.apply(&ad)]]).unwrap();
                let og = obstruction_vector(&dg).unwrap();
                prop_assert!((&og - block_ad(&g, &o)).norm() < 1e-10 * (1.0 + o.norm()));
            }
            let u = random_su2(&mut rng);
            let ad = adjoint_matrix(&u);
            let du = DeformationJet::new(conjugate_representation(&rho, &u), vec![vec![va.apply(&ad), vb.apply(&ad)]]).unwrap();
            // SU(2) preserves the trace form 2|h|² + |e|² + |f|² on each block
            let frob = |v: &DVector<C64>| {
                from_vector(v).iter().map(|x| x.to_matrix().norm_sqr()).sum::<f64>().sqrt()
            };
            prop_assert!((frob(&obstruction_vector(&du).unwrap()) - frob(&o)).abs() < 1e-8);
        }

        #[test]
        fn free_group_defects_vanish(seed in any::<u64>(), k in 1usize..=4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = Presentation::free(2);
            let rho = Representation::new(p, vec![random_sl2(&mut rng, 0.5), random_sl2(&mut rng, 0.5)]).unwrap();
            let cochains: Vec<Vec<Sl2Vector>> =
                (0..k).map(|_| (0..2).map(|_| random_sl2_vector(&mut rng, 1.0)).collect()).collect();
            let d = DeformationJet::new(rho, cochains).unwrap();
            prop_assert_eq!(obstruction_vector(&d).unwrap().len(), 0);
            prop_assert_eq!(extend_deformation(&d).unwrap(), Some(vec![Sl2Vector::zero(); 2]));
        }
    }
}
