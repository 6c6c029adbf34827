//! Points of the representation variety `R(Γ) ⊂ SL₂(ℂ)ⁿ`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg2::{adjoint_matrix, exp_traceless, Mat2C, Sl2Element, Sl2Vector, C64, ONE, ZERO};
use crate::numeric;
use crate::presentation::{
    abelianization, fox_derivative, parse_presentation, smith_normal_form, GroupRingElement, Presentation, Word,
};

/// Relator residual below which a representation counts as a point of the variety.
pub const REP_TOL: f64 = 1e-9;

/// Assignment of SL₂(ℂ) matrices to the generators of a presentation.
///
/// `residual` is the largest Frobenius defect `‖R(g) − I‖` over the relators and is
/// recomputed whenever a representation is built.
#[derive(Debug, Clone, PartialEq)]
pub struct Representation {
    presentation: Presentation,
    images: Vec<Sl2Element>,
    residual: f64,
}

impl Representation {
    pub fn new(presentation: Presentation, images: Vec<Sl2Element>) -> Result<Self> {
        if images.len() != presentation.generator_count() {
            return Err(Error::ImageCount { expected: presentation.generator_count(), got: images.len() });
        }
        let residual = residual_of(&presentation, &images);
        Ok(Representation { presentation, images, residual })
    }

    pub fn trivial(presentation: &Presentation) -> Self {
        let images = vec![Sl2Element::identity(); presentation.generator_count()];
        Representation::new(presentation.clone(), images).expect("image count matches")
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn images(&self) -> &[Sl2Element] {
        &self.images
    }

    pub fn image(&self, generator: usize) -> &Sl2Element {
        &self.images[generator - 1]
    }

    pub fn generator_count(&self) -> usize {
        self.images.len()
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn is_on_variety(&self, tol: f64) -> bool {
        self.residual <= tol
    }

    pub fn evaluate_word(&self, w: &Word) -> Sl2Element {
        evaluate_with(&self.images, w)
    }

    /// Sum of `coeff · Ad(ρ(word))` over the terms of a group-ring element.
    pub fn evaluate_adjoint(&self, x: &GroupRingElement) -> nalgebra::Matrix3<C64> {
        let mut out = nalgebra::Matrix3::zeros();
        for (c, w) in x.terms() {
            out += adjoint_matrix(&self.evaluate_word(w)) * C64::from(c as f64);
        }
        out
    }

    /// Same presentation, same images up to `tol` in Frobenius norm.
    pub fn approx_eq(&self, other: &Representation, tol: f64) -> bool {
        self.presentation == other.presentation
            && self.images.iter().zip(&other.images).all(|(a, b)| a.dist(b) <= tol)
    }

    pub fn to_json(&self) -> RepresentationJson {
        RepresentationJson {
            presentation: self.presentation.to_string(),
            images: self.images.iter().map(|g| *g.matrix()).collect(),
            residual: self.residual,
        }
    }

    pub fn from_json(json: &RepresentationJson) -> Result<Self> {
        let p = parse_presentation(&json.presentation)?;
        let images = json.images.iter().map(|m| Sl2Element::new(*m)).collect::<Result<Vec<_>>>()?;
        Representation::new(p, images)
    }
}

/// Wire format: `{ "presentation": string, "images": [matrix…], "residual": float }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepresentationJson {
    pub presentation: String,
    pub images: Vec<Mat2C>,
    pub residual: f64,
}

fn evaluate_with(images: &[Sl2Element], w: &Word) -> Sl2Element {
    let mut acc = Sl2Element::identity();
    for &x in w.letters() {
        let g = &images[x.unsigned_abs() as usize - 1];
        acc = if x > 0 { acc * *g } else { acc * g.inv() };
    }
    acc
}

fn residual_of(p: &Presentation, images: &[Sl2Element]) -> f64 {
    p.relators()
        .iter()
        .map(|r| evaluate_with(images, r).matrix().dist(&Mat2C::identity()))
        .fold(0.0, f64::max)
}

pub fn evaluate_word(rho: &Representation, w: &Word) -> Sl2Element {
    rho.evaluate_word(w)
}

pub fn relator_residual(rho: &Representation) -> f64 {
    rho.residual
}

/// Fox derivatives `∂Rⱼ/∂γᵢ`, indexed `[j][i]`.
pub fn fox_table(p: &Presentation) -> Vec<Vec<GroupRingElement>> {
    let n = p.generator_count();
    p.relators()
        .iter()
        .map(|r| (1..=n).map(|i| fox_derivative(r, i, n).expect("relators use declared generators")).collect())
        .collect()
}

/// Residual vector (entries of `Rⱼ(g) − I`) and its Jacobian for updates
/// `gᵢ ← exp(Xᵢ)·gᵢ`, with `Xᵢ ∈ 𝔰𝔩₂` in (H, E, F) coordinates.
///
/// The derivative of `Rⱼ` in the direction `Xᵢ` is `(Σ c·Ad(ρ(w))Xᵢ)·ρ(Rⱼ)`, the sum
/// running over the terms of the Fox derivative `∂Rⱼ/∂γᵢ`.
fn newton_system(rho: &Representation, fox: &[Vec<GroupRingElement>]) -> (DMatrix<C64>, DVector<C64>) {
    let n = rho.generator_count();
    let m = rho.presentation.relator_count();
    let mut jac = DMatrix::zeros(4 * m, 3 * n);
    let mut rhs = DVector::zeros(4 * m);
    for (j, r) in rho.presentation.relators().iter().enumerate() {
        let value = rho.evaluate_word(r);
        let defect = *value.matrix() - Mat2C::identity();
        for (k, e) in defect.entries().iter().enumerate() {
            rhs[4 * j + k] = *e;
        }
        for i in 0..n {
            let ad = rho.evaluate_adjoint(&fox[j][i]);
            for (b, basis) in Sl2Vector::BASIS.iter().enumerate() {
                let dir = basis.apply(&ad).to_matrix() * *value.matrix();
                for (k, e) in dir.entries().iter().enumerate() {
                    jac[(4 * j + k, 3 * i + b)] = *e;
                }
            }
        }
    }
    (jac, rhs)
}

/// Moves each image by `exp(Xᵢ)` on the left.
pub fn displace(rho: &Representation, step: &[Sl2Vector]) -> Representation {
    let images = rho.images.iter().zip(step).map(|(g, x)| exp_traceless(x) * *g).collect();
    Representation::new(rho.presentation.clone(), images).expect("image count preserved")
}

/// Damped Gauss–Newton on the relator equations over SL₂(ℂ)ⁿ.
///
/// Steps are minimum-norm least-squares solutions of the linearized relator
/// system; a step that does not lower the residual is halved up to 8 times.
/// Input already within `tol` is returned unchanged.
pub fn newton_refine(rho0: &Representation, max_iter: usize, tol: f64) -> Result<Representation> {
    if rho0.residual <= tol {
        return Ok(rho0.clone());
    }
    let images = rho0
        .images
        .iter()
        .map(|g| Sl2Element::normalized(*g.matrix()))
        .collect::<Result<Vec<_>>>()?;
    let mut cur = Representation::new(rho0.presentation.clone(), images)?;
    let fox = fox_table(&rho0.presentation);
    let n = cur.generator_count();
    for iteration in 0..max_iter {
        if cur.residual <= tol {
            return Ok(cur);
        }
        let (jac, rhs) = newton_system(&cur, &fox);
        let (step, decision) = numeric::lstsq_min_norm(&jac, &(-rhs), 1e-12);
        if decision.rank == 0 {
            return Err(Error::SingularSystem);
        }
        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..=8 {
            let xs: Vec<Sl2Vector> = (0..n)
                .map(|i| Sl2Vector::new(step[3 * i], step[3 * i + 1], step[3 * i + 2]).scale(C64::from(alpha)))
                .collect();
            let trial = displace(&cur, &xs);
            if trial.residual < cur.residual {
                accepted = Some(trial);
                break;
            }
            alpha *= 0.5;
        }
        match accepted {
            Some(next) => cur = next,
            None => return Err(Error::Stalled { iteration, residual: cur.residual }),
        }
    }
    if cur.residual <= tol {
        Ok(cur)
    } else {
        Err(Error::NoConvergence { iterations: max_iter, residual: cur.residual })
    }
}

/// Diagonal representations `γᵢ ↦ diag(ζᵢ, ζᵢ⁻¹)` factoring through a finite
/// abelianization, one per character of `H₁(Γ)`.
///
/// Characters are enumerated on the Smith-normal-form torsion generators (first
/// factor slowest) and pulled back to the generators through the column change
/// of basis. Phases are computed exactly as fractions of a full turn.
pub fn abelian_representations(p: &Presentation) -> Result<Vec<Representation>> {
    let ab = abelianization(p);
    if ab.rank_free > 0 {
        return Err(Error::ContinuousFamily { torus_dim: ab.rank_free });
    }
    let n = p.generator_count();
    let matrix: Vec<Vec<i64>> = p.relators().iter().map(|r| r.exponent_sums(n)).collect();
    let snf = smith_normal_form(&matrix, n);
    let factors: Vec<(usize, i128)> = snf
        .diagonal
        .iter()
        .enumerate()
        .filter(|(_, d)| d.abs() > 1)
        .map(|(k, d)| (k, d.abs() as i128))
        .collect();
    let lcm = factors.iter().fold(1i128, |acc, &(_, d)| acc / gcd(acc, d) * d);

    let mut out = Vec::new();
    let mut digits = vec![0i128; factors.len()];
    loop {
        let images = (0..n)
            .map(|i| {
                let num: i128 = factors
                    .iter()
                    .zip(&digits)
                    .map(|(&(k, d), &j)| j * snf.v[i][k] as i128 * (lcm / d))
                    .sum();
                let turn = num.rem_euclid(lcm);
                Sl2Element::rotation(2.0 * std::f64::consts::PI * turn as f64 / lcm as f64)
            })
            .collect();
        out.push(Representation::new(p.clone(), images)?);
        // odometer, last factor fastest
        let mut pos = factors.len();
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < factors[pos].1 {
                break;
            }
            digits[pos] = 0;
        }
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Keeps the first member of each conjugacy class (by [`intertwiner_between`]).
pub fn dedup_by_conjugacy(reps: &[Representation]) -> Vec<Representation> {
    let mut kept: Vec<Representation> = Vec::new();
    for r in reps {
        if !kept.iter().any(|k| intertwiner_between(k, r).is_some()) {
            kept.push(r.clone());
        }
    }
    kept
}

/// Coefficients of `1 + 2x² − x³ + 2x⁴ + x⁶`, constant term first.
pub const WEEKS_SEXTIC: [f64; 7] = [1.0, 0.0, 2.0, -1.0, 2.0, 0.0, 1.0];

fn sextic(x: C64) -> (C64, C64) {
    let mut p = ZERO;
    let mut dp = ZERO;
    for &c in WEEKS_SEXTIC.iter().rev() {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

/// The six roots of the Weeks sextic, Newton-polished and sorted by (Re, Im).
///
/// Indices 0–3 are the two complex-conjugate pairs `x, x̄, 1/x, 1/x̄` off the unit
/// circle (discrete faithful representations); indices 4–5 lie on the unit circle
/// and give representations with image in a conjugate of SU(2).
pub fn weeks_roots() -> [C64; 6] {
    let n = 6;
    let companion = DMatrix::<f64>::from_fn(n, n, |i, j| {
        if j == n - 1 {
            -WEEKS_SEXTIC[i]
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    let eig = companion.complex_eigenvalues();
    let mut roots: Vec<C64> = eig
        .iter()
        .map(|&z| {
            let mut x = z;
            for _ in 0..50 {
                let (p, dp) = sextic(x);
                let step = p / dp;
                x -= step;
                if step.norm() <= 1e-16 * x.norm() {
                    break;
                }
            }
            x
        })
        .collect();
    roots.sort_by(|a, b| {
        let ka = (a.re * 1e9).round();
        let kb = (b.re * 1e9).round();
        ka.total_cmp(&kb).then(a.im.total_cmp(&b.im))
    });
    [roots[0], roots[1], roots[2], roots[3], roots[4], roots[5]]
}

/// Weeks representation `a ↦ [[x, 1], [0, x⁻¹]]`, `b ↦ [[x, 0], [r, x⁻¹]]`,
/// `r = 2 − x − x⁻¹`, for the chosen sextic root, refined onto the variety.
pub fn weeks_geometric(root_index: usize) -> Result<Representation> {
    let roots = weeks_roots();
    let x = *roots.get(root_index).ok_or(Error::ImageCount { expected: 6, got: root_index })?;
    weeks_from_root(x)
}

/// Builds the Weeks representation for an arbitrary `x` and refines it.
pub fn weeks_from_root(x: C64) -> Result<Representation> {
    let rho = weeks_unrefined(x);
    newton_refine(&rho, 50, 1e-13)
}

/// The Weeks matrices for `x` without refinement.
pub fn weeks_unrefined(x: C64) -> Representation {
    let xi = x.inv();
    let r = C64::from(2.0) - x - xi;
    let a = Sl2Element::from_unchecked(Mat2C::new(x, ONE, ZERO, xi));
    let b = Sl2Element::from_unchecked(Mat2C::new(x, ZERO, r, xi));
    Representation::new(Presentation::weeks(), vec![a, b]).expect("two generators")
}

pub fn conjugate_representation(rho: &Representation, g: &Sl2Element) -> Representation {
    let images = rho.images.iter().map(|h| h.conjugate_by(g)).collect();
    Representation::new(rho.presentation.clone(), images).expect("image count preserved")
}

/// Traces of a list of words under a representation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacterSample {
    pub words: Vec<Word>,
    pub traces: Vec<C64>,
}

pub fn character_sample(rho: &Representation, words: &[Word]) -> CharacterSample {
    CharacterSample {
        words: words.to_vec(),
        traces: words.iter().map(|w| rho.evaluate_word(w).trace()).collect(),
    }
}

pub fn characters_equal(s1: &CharacterSample, s2: &CharacterSample, tol: f64) -> bool {
    s1.words == s2.words
        && s1.traces.len() == s2.traces.len()
        && s1.traces.iter().zip(&s2.traces).all(|(a, b)| (a - b).norm() <= tol)
}

/// An invertible `X` with `X·ρ(γᵢ) = η(γᵢ)·X` for all generators, scaled to det 1.
///
/// Solves the linear system on 2×2 matrices; inside its solution space the
/// determinant is a quadratic form, so if any solution is invertible then one of
/// the basis vectors or a pairwise sum is.
pub fn intertwiner_between(rho: &Representation, eta: &Representation) -> Option<Sl2Element> {
    if rho.generator_count() != eta.generator_count() {
        return None;
    }
    let n = rho.generator_count();
    let mut system = DMatrix::<C64>::zeros(4 * n, 4);
    for i in 0..n {
        let r = rho.images[i].matrix();
        let e = eta.images[i].matrix();
        let scale = 1.0 / (1.0 + r.frobenius() + e.frobenius());
        for k in 0..4 {
            let mut unit = [ZERO; 4];
            unit[k] = ONE;
            let x = Mat2C::from(unit);
            let eq = (x * *r - *e * x).scale(C64::from(scale));
            for (row, v) in eq.entries().iter().enumerate() {
                system[(4 * i + row, k)] = *v;
            }
        }
    }
    let (kernel, _) = numeric::null_space(&system, 1e-9);
    let dim = kernel.ncols();
    let column = |j: usize| Mat2C::new(kernel[(0, j)], kernel[(1, j)], kernel[(2, j)], kernel[(3, j)]);
    let mut candidates: Vec<Mat2C> = (0..dim).map(column).collect();
    for j in 0..dim {
        for l in j + 1..dim {
            candidates.push(column(j) + column(l));
        }
    }
    let best = candidates
        .into_iter()
        .map(|x| (x.det().norm() / x.norm_sqr().max(f64::MIN_POSITIVE), x))
        .max_by(|a, b| a.0.total_cmp(&b.0))?;
    if best.0 < 1e-8 {
        return None;
    }
    let g = Sl2Element::normalized(best.1).ok()?;
    let ok = rho
        .images
        .iter()
        .zip(&eta.images)
        .all(|(r, e)| r.conjugate_by(&g).dist(e) <= 1e-8 * (1.0 + e.matrix().frobenius()));
    ok.then_some(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg2::{random_sl2, Sl2Vector};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> C64 {
        C64::from(re)
    }

    fn z_rep(m: Mat2C) -> Representation {
        Representation::new(Presentation::free(1), vec![Sl2Element::new(m).unwrap()]).unwrap()
    }

    #[test]
    fn word_evaluation() {
        let p = Presentation::free(2);
        let rho = Representation::new(p.clone(), vec![Sl2Element::diag(c(2.0)), Sl2Element::diag(c(3.0))]).unwrap();
        assert!(rho.evaluate_word(&Word::new([1, 2])).dist(&Sl2Element::diag(c(6.0))) < 1e-15);
        assert_eq!(rho.evaluate_word(&Word::identity()), Sl2Element::identity());
        let trivial = Representation::trivial(&Presentation::weeks());
        let w = Word::new([1, 2, -1, 2, 2, -1]);
        assert_eq!(trivial.evaluate_word(&w), Sl2Element::identity());
        assert_eq!(relator_residual(&rho), 0.0);
    }

    #[test]
    fn image_count_is_checked() {
        let err = Representation::new(Presentation::weeks(), vec![Sl2Element::identity()]).unwrap_err();
        assert_eq!(err, Error::ImageCount { expected: 2, got: 1 });
    }

    #[test]
    fn weeks_roots_satisfy_the_sextic() {
        let roots = weeks_roots();
        for x in roots {
            assert!(sextic(x).0.norm() < 1e-13);
        }
        assert!((roots[0] - C64::new(-0.4253179379524574, -1.2701906929365365)).norm() < 1e-12);
        assert!((roots[5] - C64::new(0.6623589786223729, 0.7491866145616369)).norm() < 1e-12);
        assert!((roots[4].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn weeks_geometric_is_on_variety_and_nonabelian() {
        for k in 0..6 {
            let rho = weeks_geometric(k).unwrap();
            assert!(rho.residual() < 1e-10, "root {k}: {}", rho.residual());
            let x = weeks_roots()[k];
            assert!((rho.image(1).trace() - (x + x.inv())).norm() < 1e-10);
            let comm = rho.evaluate_word(&Word::new([1, 2, -1, -2]));
            assert!(comm.dist(&Sl2Element::identity()) > 0.1);
        }
    }

    #[test]
    fn off_variety_is_detected() {
        let x = weeks_roots()[0];
        let mut rho = weeks_unrefined(x);
        assert!(rho.residual() < 1e-12);
        let shifted = x + 1e-3;
        let a = Sl2Element::from_unchecked(Mat2C::new(shifted, ONE, ZERO, shifted.inv()));
        rho = Representation::new(Presentation::weeks(), vec![a, rho.images()[1]]).unwrap();
        assert!(rho.residual() > 1e-4);
    }

    #[test]
    fn refine_from_a_rough_root() {
        let x = weeks_roots()[0] + C64::new(1e-4, -0.7e-4);
        let rough = weeks_unrefined(x);
        assert!(rough.residual() > 1e-5);
        let refined = newton_refine(&rough, 30, 1e-13).unwrap();
        assert!(refined.residual() < 1e-12);
        // already on the variety: unchanged
        let again = newton_refine(&refined, 30, 1e-12).unwrap();
        assert_eq!(again, refined);
    }

    #[test]
    fn refine_reports_failure_far_from_the_variety() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let images = vec![random_sl2(&mut rng, 1.0), random_sl2(&mut rng, 1.0)];
        let rho = Representation::new(Presentation::weeks(), images).unwrap();
        // no basin guarantee: either a (valid) convergence or a reported failure
        match newton_refine(&rho, 5, 1e-13) {
            Ok(r) => assert!(r.residual() <= 1e-13),
            Err(e) => assert!(matches!(e, Error::Stalled { .. } | Error::NoConvergence { .. })),
        }
    }

    #[test]
    fn abelian_enumeration() {
        let reps = abelian_representations(&Presentation::weeks()).unwrap();
        assert_eq!(reps.len(), 25);
        for (idx, rho) in reps.iter().enumerate() {
            assert!(rho.residual() < 1e-12);
            let (m, n) = (idx / 5, idx % 5);
            let a = Sl2Element::rotation(2.0 * std::f64::consts::PI * m as f64 / 5.0);
            let b = Sl2Element::rotation(2.0 * std::f64::consts::PI * n as f64 / 5.0);
            assert!(rho.image(1).dist(&a) < 1e-14 && rho.image(2).dist(&b) < 1e-14);
        }
        assert_eq!(abelian_representations(&parse_presentation("a | a^5").unwrap()).unwrap().len(), 5);
        let trivial = abelian_representations(&parse_presentation("a | a").unwrap()).unwrap();
        assert_eq!(trivial.len(), 1);
        assert_eq!(trivial[0].image(1), &Sl2Element::identity());
        assert_eq!(
            abelian_representations(&Presentation::free(2)).unwrap_err(),
            Error::ContinuousFamily { torus_dim: 2 }
        );
    }

    #[test]
    fn abelian_enumeration_pulls_back_through_a_basis_change() {
        // H₁ = ℤ/6 generated by a mixed basis
        let p = parse_presentation("a,b | a^2 b^2, a^3 B^3, a b A B").unwrap();
        let reps = abelian_representations(&p).unwrap();
        assert_eq!(reps.len() as u64, abelianization(&p).torsion_order());
        for r in &reps {
            assert!(r.residual() < 1e-12);
        }
        assert_eq!(dedup_by_conjugacy(&reps).len(), reps.len() / 2 + 1);
    }

    #[test]
    fn weyl_dedup_on_weeks() {
        let reps = abelian_representations(&Presentation::weeks()).unwrap();
        assert_eq!(dedup_by_conjugacy(&reps).len(), 13);
    }

    #[test]
    fn conjugation_examples() {
        let rho = weeks_geometric(0).unwrap();
        assert!(conjugate_representation(&rho, &Sl2Element::identity()).approx_eq(&rho, 0.0));
        assert!(conjugate_representation(&rho, &-Sl2Element::identity()).approx_eq(&rho, 1e-15));
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let words: Vec<Word> = [vec![1], vec![2], vec![1, 2], vec![1, -2, 1, 1], vec![2, 2, -1, 2]]
            .into_iter()
            .map(Word::new)
            .collect();
        for _ in 0..20 {
            let g = random_sl2(&mut rng, 0.8);
            let conj = conjugate_representation(&rho, &g);
            assert!(conj.residual() < 1e-10);
            assert!(characters_equal(&character_sample(&rho, &words), &character_sample(&conj, &words), 1e-10));
            let x = intertwiner_between(&rho, &conj).expect("conjugate");
            assert!(conjugate_representation(&rho, &x).approx_eq(&conj, 1e-9));
        }
    }

    #[test]
    fn characters_do_not_see_unipotent_versus_trivial() {
        let unip = z_rep(Mat2C::real(1.0, 1.0, 0.0, 1.0));
        let triv = Representation::trivial(&Presentation::free(1));
        let words: Vec<Word> = (1..=3).map(|k| Word::new(vec![1; k])).collect();
        assert!(characters_equal(&character_sample(&unip, &words), &character_sample(&triv, &words), 1e-14));
        assert!(intertwiner_between(&unip, &triv).is_none());
        assert!(intertwiner_between(&triv, &unip).is_none());
    }

    #[test]
    fn abelian_characters_differ() {
        let reps = abelian_representations(&Presentation::weeks()).unwrap();
        let r12 = &reps[5 + 2];
        let r21 = &reps[2 * 5 + 1];
        let words: Vec<Word> = [vec![1], vec![2], vec![1, 2]].into_iter().map(Word::new).collect();
        let s12 = character_sample(r12, &words);
        let s21 = character_sample(r21, &words);
        assert!(!characters_equal(&s12, &s21, 1e-6));
        let two_pi = 2.0 * std::f64::consts::PI;
        assert!((s12.traces[0].re - 2.0 * (two_pi / 5.0).cos()).abs() < 1e-14);
        assert!((s21.traces[0].re - 2.0 * (2.0 * two_pi / 5.0).cos()).abs() < 1e-14);
    }

    #[test]
    fn schur_self_intertwiner() {
        let rho = weeks_geometric(1).unwrap();
        let g = intertwiner_between(&rho, &rho).unwrap();
        let plus = g.dist(&Sl2Element::identity());
        let minus = g.dist(&-Sl2Element::identity());
        assert!(plus.min(minus) < 1e-9);
    }

    #[test]
    fn faithful_at_small_radius() {
        let rho = weeks_geometric(0).unwrap();
        // all reduced words of length ≤ 4 give distinct matrices, none of length ≤ 6 is trivial
        let mut words = vec![Word::identity()];
        let mut frontier = vec![Word::identity()];
        for len in 1..=6 {
            let mut next = Vec::new();
            for w in &frontier {
                for x in [1, -1, 2, -2] {
                    if w.letters().last() == Some(&-x) {
                        continue;
                    }
                    let mut l = w.letters().to_vec();
                    l.push(x);
                    next.push(Word::new(l));
                }
            }
            for w in &next {
                assert!(rho.evaluate_word(w).dist(&Sl2Element::identity()) > 1e-6);
            }
            if len <= 4 {
                words.extend(next.iter().cloned());
            }
            frontier = next;
        }
        assert_eq!(words.len(), 161);
        let mats: Vec<Sl2Element> = words.iter().map(|w| rho.evaluate_word(w)).collect();
        for i in 0..mats.len() {
            for j in i + 1..mats.len() {
                assert!(mats[i].dist(&mats[j]) > 1e-6);
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let rho = weeks_geometric(2).unwrap();
        let text = serde_json::to_string(&rho.to_json()).unwrap();
        let back = Representation::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert!(back.approx_eq(&rho, 0.0));
        let _ = Sl2Vector::H;
    }
}
