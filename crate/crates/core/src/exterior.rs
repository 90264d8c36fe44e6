//! Exterior algebra on R⁴ restricted to what the calibration needs: vectors,
//! 2-vectors, the top-degree pairing and the comass norm
//!
//! ```text
//! ‖α‖ = sup { det(α ∧ β) : β simple unit 2-vector }.
//! ```
//!
//! The closed form splits ∧²R⁴ into its self-dual and anti-self-dual parts;
//! [`comass_numeric`] recomputes the same supremum by direct maximization
//! over orthonormal pairs and serves as an independent oracle.

use std::fmt;
use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub};

use nalgebra::{Matrix4, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::Tolerances;

/// Index pairs of the lexicographic basis `e12, e13, e14, e23, e24, e34`
/// (zero-based).
pub const BASIS_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// A point or vector of R⁴ = R²₁ × R²₂.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec4(pub [f64; 4]);

impl Vec4 {
    pub const ZERO: Vec4 = Vec4([0.0; 4]);

    pub const fn new(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        Vec4([x0, x1, x2, x3])
    }

    /// Standard basis vector `e_{i+1}`.
    pub fn basis(i: usize) -> Self {
        let mut v = [0.0; 4];
        v[i] = 1.0;
        Vec4(v)
    }

    /// Embeds a point of the first factor plane.
    pub const fn from_first(p: [f64; 2]) -> Self {
        Vec4([p[0], p[1], 0.0, 0.0])
    }

    /// Embeds a point of the second factor plane.
    pub const fn from_second(p: [f64; 2]) -> Self {
        Vec4([0.0, 0.0, p[0], p[1]])
    }

    /// Product point `(x, y)` with `x ∈ R²₁`, `y ∈ R²₂`.
    pub const fn from_pair(x: [f64; 2], y: [f64; 2]) -> Self {
        Vec4([x[0], x[1], y[0], y[1]])
    }

    pub fn first(&self) -> [f64; 2] {
        [self.0[0], self.0[1]]
    }

    pub fn second(&self) -> [f64; 2] {
        [self.0[2], self.0[3]]
    }

    pub fn dot(&self, other: &Vec4) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn normalized(&self) -> Option<Vec4> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| *self * (1.0 / n))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    pub fn distance(&self, other: &Vec4) -> f64 {
        (*self - *other).norm()
    }
}

impl Index<usize> for Vec4 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for Vec4 {
    type Output = Vec4;
    fn add(self, o: Vec4) -> Vec4 {
        Vec4(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

impl AddAssign for Vec4 {
    fn add_assign(&mut self, o: Vec4) {
        *self = *self + o;
    }
}

impl Sub for Vec4 {
    type Output = Vec4;
    fn sub(self, o: Vec4) -> Vec4 {
        Vec4(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }
}

impl Mul<f64> for Vec4 {
    type Output = Vec4;
    fn mul(self, s: f64) -> Vec4 {
        Vec4(self.0.map(|c| c * s))
    }
}

impl Neg for Vec4 {
    type Output = Vec4;
    fn neg(self) -> Vec4 {
        Vec4(self.0.map(|c| -c))
    }
}

/// Element of ∧²R⁴ with coefficients `[c12, c13, c14, c23, c24, c34]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TwoVector(pub [f64; 6]);

impl TwoVector {
    pub const ZERO: TwoVector = TwoVector([0.0; 6]);

    /// Basis element `e_{i+1} ∧ e_{j+1}` for zero-based `i < j`.
    pub fn basis(i: usize, j: usize) -> Self {
        wedge(&Vec4::basis(i), &Vec4::basis(j))
    }

    /// L2 norm in the orthonormal basis `{e_i ∧ e_j}`.
    pub fn norm(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn dot(&self, other: &TwoVector) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    /// Plücker residual `c12·c34 − c13·c24 + c14·c23`; zero exactly when the
    /// 2-vector is simple.
    pub fn plucker(&self) -> f64 {
        let [c12, c13, c14, c23, c24, c34] = self.0;
        c12 * c34 - c13 * c24 + c14 * c23
    }

    /// Coefficient `α_{ij}` as an antisymmetric 4×4 matrix.
    pub fn as_matrix(&self) -> [[f64; 4]; 4] {
        let mut m = [[0.0; 4]; 4];
        for (k, &(i, j)) in BASIS_PAIRS.iter().enumerate() {
            m[i][j] = self.0[k];
            m[j][i] = -self.0[k];
        }
        m
    }

    /// Components along the self-dual basis
    /// `(e12+e34)/√2, (e13−e24)/√2, (e14+e23)/√2`.
    pub fn self_dual_part(&self) -> [f64; 3] {
        let [c12, c13, c14, c23, c24, c34] = self.0;
        let s = std::f64::consts::FRAC_1_SQRT_2;
        [s * (c12 + c34), s * (c13 - c24), s * (c14 + c23)]
    }

    /// Components along the anti-self-dual basis
    /// `(e12−e34)/√2, (e13+e24)/√2, (e14−e23)/√2`.
    pub fn anti_self_dual_part(&self) -> [f64; 3] {
        let [c12, c13, c14, c23, c24, c34] = self.0;
        let s = std::f64::consts::FRAC_1_SQRT_2;
        [s * (c12 - c34), s * (c13 + c24), s * (c14 - c23)]
    }
}

impl Add for TwoVector {
    type Output = TwoVector;
    fn add(self, o: TwoVector) -> TwoVector {
        TwoVector(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

impl AddAssign for TwoVector {
    fn add_assign(&mut self, o: TwoVector) {
        *self = *self + o;
    }
}

impl Sub for TwoVector {
    type Output = TwoVector;
    fn sub(self, o: TwoVector) -> TwoVector {
        TwoVector(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }
}

impl Mul<f64> for TwoVector {
    type Output = TwoVector;
    fn mul(self, s: f64) -> TwoVector {
        TwoVector(self.0.map(|c| c * s))
    }
}

impl Neg for TwoVector {
    type Output = TwoVector;
    fn neg(self) -> TwoVector {
        TwoVector(self.0.map(|c| -c))
    }
}

impl std::iter::Sum for TwoVector {
    fn sum<I: Iterator<Item = TwoVector>>(iter: I) -> TwoVector {
        iter.fold(TwoVector::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for TwoVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels = ["e12", "e13", "e14", "e23", "e24", "e34"];
        let mut first = true;
        for (c, l) in self.0.iter().zip(labels) {
            if *c == 0.0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "{c}·{l}")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `u ∧ v`, with `c_ij = u_i v_j − u_j v_i`.
pub fn wedge(u: &Vec4, v: &Vec4) -> TwoVector {
    TwoVector(BASIS_PAIRS.map(|(i, j)| u.0[i] * v.0[j] - u.0[j] * v.0[i]))
}

/// Signed coefficient of `e1∧e2∧e3∧e4` in `α ∧ β`.
pub fn det4(alpha: &TwoVector, beta: &TwoVector) -> f64 {
    let [a12, a13, a14, a23, a24, a34] = alpha.0;
    let [b12, b13, b14, b23, b24, b34] = beta.0;
    a12 * b34 - a13 * b24 + a14 * b23 + a23 * b14 - a24 * b13 + a34 * b12
}

/// Closed-form comass: `(|P⁺α| + |P⁻α|)/√2`.
pub fn comass(alpha: &TwoVector) -> f64 {
    let norm3 = |x: [f64; 3]| x.iter().map(|c| c * c).sum::<f64>().sqrt();
    (norm3(alpha.self_dual_part()) + norm3(alpha.anti_self_dual_part()))
        * std::f64::consts::FRAC_1_SQRT_2
}

/// Matrix `M` with `det4(α, u∧v) = uᵀ M v`, built entrywise from the pairing
/// on basis 2-vectors.
pub fn pairing_matrix(alpha: &TwoVector) -> [[f64; 4]; 4] {
    let mut m = [[0.0; 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            if i != j {
                *entry = det4(alpha, &wedge(&Vec4::basis(i), &Vec4::basis(j)));
            }
        }
    }
    m
}

pub(crate) fn mat_vec(m: &[[f64; 4]; 4], v: &Vec4) -> Vec4 {
    Vec4(std::array::from_fn(|i| {
        (0..4).map(|j| m[i][j] * v.0[j]).sum()
    }))
}

pub(crate) fn mat_t_vec(m: &[[f64; 4]; 4], v: &Vec4) -> Vec4 {
    Vec4(std::array::from_fn(|j| {
        (0..4).map(|i| m[i][j] * v.0[i]).sum()
    }))
}

/// Orthonormalizes a 4×2 frame (Gram–Schmidt, i.e. QR with a positive
/// diagonal). Returns `None` for numerically degenerate frames.
pub fn orthonormalize_pair(a: &Vec4, b: &Vec4) -> Option<(Vec4, Vec4)> {
    const MIN_NORM: f64 = 1e-8;
    let na = a.norm();
    if na < MIN_NORM {
        return None;
    }
    let u = *a * (1.0 / na);
    let r = *b - u * u.dot(b);
    let nr = r.norm();
    if nr < MIN_NORM * b.norm().max(1.0) {
        return None;
    }
    Some((u, r * (1.0 / nr)))
}

/// Draws a uniformly distributed orthonormal pair in R⁴.
pub fn random_orthonormal_pair<R: Rng + ?Sized>(rng: &mut R) -> (Vec4, Vec4) {
    loop {
        let a = Vec4(std::array::from_fn(|_| rng.sample(StandardNormal)));
        let b = Vec4(std::array::from_fn(|_| rng.sample(StandardNormal)));
        if let Some(pair) = orthonormalize_pair(&a, &b) {
            return pair;
        }
    }
}

/// Draws a uniformly distributed orthonormal basis of R⁴.
pub fn random_orthonormal_basis<R: Rng + ?Sized>(rng: &mut R) -> [Vec4; 4] {
    'draw: loop {
        let mut basis = [Vec4::ZERO; 4];
        for k in 0..4 {
            let mut v = Vec4(std::array::from_fn(|_| rng.sample(StandardNormal)));
            for b in &basis[..k] {
                v = v - *b * b.dot(&v);
            }
            match v.normalized() {
                Some(n) if v.norm() > 1e-8 => basis[k] = n,
                _ => continue 'draw,
            }
        }
        return basis;
    }
}

/// Iteration cap for one local ascent of [`comass_numeric`].
const MAX_ASCENT_STEPS: usize = 20_000;

/// Local ascent of `uᵀ M v` over orthonormal pairs by alternating exact
/// maximization in `v` and in `u`. Antisymmetry of `M` keeps the pair
/// orthogonal at every step. Returns the final value and pair.
pub(crate) fn alternating_ascent(
    m: &[[f64; 4]; 4],
    mut u: Vec4,
    mut v: Vec4,
    step_tol: f64,
) -> (f64, Vec4, Vec4) {
    for _ in 0..MAX_ASCENT_STEPS {
        let Some(nv) = mat_t_vec(m, &u).normalized() else {
            break;
        };
        let Some(nu) = mat_vec(m, &nv).normalized() else {
            break;
        };
        let step = (nu - u).norm() + (nv - v).norm();
        u = nu;
        v = nv;
        if step < step_tol {
            break;
        }
    }
    (u.dot(&mat_vec(m, &v)), u, v)
}

/// Multistart numerical supremum of `det4(α, u∧v)` over orthonormal pairs.
///
/// Every start is a uniformly random orthonormal frame; each is improved by
/// [`alternating_ascent`]. The result approaches [`comass`] from below.
pub fn comass_numeric(alpha: &TwoVector, starts: usize, seed: u64) -> f64 {
    comass_numeric_with(alpha, starts, seed, Tolerances::default().optimizer_step)
}

pub fn comass_numeric_with(alpha: &TwoVector, starts: usize, seed: u64, step_tol: f64) -> f64 {
    let starts = starts.max(1);
    let m = pairing_matrix(alpha);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0.0_f64;
    for _ in 0..starts {
        let (u, v) = random_orthonormal_pair(&mut rng);
        let (value, _, _) = alternating_ascent(&m, u, v, step_tol);
        // det4 with -β flips the sign; the supremum is never negative
        best = best.max(value.abs());
    }
    best
}

/// Normal form `α = λ₁ x₁∧x₂ + λ₂ x₃∧x₄` with `λ₁ ≥ λ₂ ≥ 0` and `{x_i}`
/// orthonormal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalForm {
    pub lambda1: f64,
    pub lambda2: f64,
    pub frame: [Vec4; 4],
}

impl CanonicalForm {
    pub fn reconstruct(&self) -> TwoVector {
        let [x1, x2, x3, x4] = &self.frame;
        wedge(x1, x2) * self.lambda1 + wedge(x3, x4) * self.lambda2
    }
}

/// Picks the unit vector of an invariant subspace (given by its projector)
/// closest to a standard basis vector; the lowest index wins ties.
fn pick_in_subspace(projector: &[[f64; 4]; 4]) -> Vec4 {
    let mut best = (0, -1.0);
    for k in 0..4 {
        let col = Vec4(std::array::from_fn(|i| projector[i][k]));
        let n = col.norm();
        if n > best.1 + 1e-9 {
            best = (k, n);
        }
    }
    let k = best.0;
    Vec4(std::array::from_fn(|i| projector[i][k]))
        .normalized()
        .unwrap_or_else(|| Vec4::basis(k))
}

fn projector_onto(vectors: &[Vec4]) -> [[f64; 4]; 4] {
    let mut p = [[0.0; 4]; 4];
    for v in vectors {
        for i in 0..4 {
            for j in 0..4 {
                p[i][j] += v.0[i] * v.0[j];
            }
        }
    }
    p
}

fn complement_projector(vectors: &[Vec4]) -> [[f64; 4]; 4] {
    let mut p = projector_onto(vectors);
    for (i, row) in p.iter_mut().enumerate() {
        for (j, e) in row.iter_mut().enumerate() {
            *e = if i == j { 1.0 - *e } else { -*e };
        }
    }
    p
}

/// Computes the normal form from the spectrum of `NᵀN`, `N` the antisymmetric
/// coefficient matrix. Independent of the self-dual closed form.
pub fn canonical_form(alpha: &TwoVector) -> CanonicalForm {
    let n = alpha.as_matrix();
    let nm = Matrix4::from_fn(|i, j| n[i][j]);
    let gram = nm.transpose() * nm;
    let eig = SymmetricEigen::new(gram);
    let top = eig.eigenvalues.iter().cloned().fold(0.0_f64, f64::max);
    if top <= 1e-300 {
        return CanonicalForm {
            lambda1: 0.0,
            lambda2: 0.0,
            frame: std::array::from_fn(Vec4::basis),
        };
    }
    let scale_tol = 1e-9 * top;
    let top_vectors: Vec<Vec4> = (0..4)
        .filter(|&k| eig.eigenvalues[k] >= top - scale_tol)
        .map(|k| Vec4(std::array::from_fn(|i| eig.eigenvectors[(i, k)])))
        .collect();
    let x1 = pick_in_subspace(&projector_onto(&top_vectors));
    let nx1 = mat_vec(&n, &x1);
    let lambda1 = nx1.norm();
    // N x1 = -λ₁ x2 for α = λ₁ x1∧x2 + ...
    let x2 = (-nx1) * (1.0 / lambda1);
    let comp = complement_projector(&[x1, x2]);
    let x3 = pick_in_subspace(&comp);
    let nx3 = mat_vec(&n, &x3);
    let lambda2 = nx3.norm();
    let x4 = if lambda2 > 1e-12 * lambda1 {
        (-nx3) * (1.0 / lambda2)
    } else {
        pick_in_subspace(&complement_projector(&[x1, x2, x3]))
    };
    let lambda2 = if lambda2 > 1e-12 * lambda1 {
        lambda2
    } else {
        0.0
    };
    CanonicalForm {
        lambda1,
        lambda2,
        frame: [x1, x2, x3, x4],
    }
}

/// Error raised when constructing a simple unit 2-vector from a bad frame.
#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ExteriorError {
    #[error("frame vectors are linearly dependent")]
    DegenerateFrame,
    #[error("2-vector is not unit (|β| = {0})")]
    NotUnit(f64),
    #[error("2-vector is not simple (Plücker residual {0})")]
    NotSimple(f64),
}

/// A unit simple 2-vector together with an orthonormal witness pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimpleUnitTwoVector {
    beta: TwoVector,
    u: Vec4,
    v: Vec4,
}

impl SimpleUnitTwoVector {
    /// Orthonormalizes `(a, b)` and returns their wedge.
    pub fn from_span(a: &Vec4, b: &Vec4) -> Result<Self, ExteriorError> {
        let (u, v) = orthonormalize_pair(a, b).ok_or(ExteriorError::DegenerateFrame)?;
        Self::from_orthonormal(u, v, &Tolerances::default())
    }

    pub fn from_orthonormal(u: Vec4, v: Vec4, tol: &Tolerances) -> Result<Self, ExteriorError> {
        let beta = wedge(&u, &v);
        let n = beta.norm();
        if (n - 1.0).abs() > tol.unit {
            return Err(ExteriorError::NotUnit(n));
        }
        let p = beta.plucker();
        if p.abs() > tol.plucker {
            return Err(ExteriorError::NotSimple(p));
        }
        Ok(Self { beta, u, v })
    }

    pub fn beta(&self) -> &TwoVector {
        &self.beta
    }

    pub fn witnesses(&self) -> (Vec4, Vec4) {
        (self.u, self.v)
    }

    pub fn negated(&self) -> Self {
        Self {
            beta: -self.beta,
            u: self.v,
            v: self.u,
        }
    }
}

/// Oriented-agnostic 2-plane through the origin.
#[derive(Debug, Clone, Copy)]
pub struct Plane2(SimpleUnitTwoVector);

impl Plane2 {
    pub fn new(beta: SimpleUnitTwoVector) -> Self {
        Plane2(beta)
    }

    pub fn spanned_by(a: &Vec4, b: &Vec4) -> Result<Self, ExteriorError> {
        SimpleUnitTwoVector::from_span(a, b).map(Plane2)
    }

    pub fn representative(&self) -> &TwoVector {
        self.0.beta()
    }

    pub fn simple(&self) -> &SimpleUnitTwoVector {
        &self.0
    }
}

impl PartialEq for Plane2 {
    fn eq(&self, other: &Self) -> bool {
        // unit 2-vectors: same plane iff β = ±β'
        self.representative().dot(other.representative()).abs() > 1.0 - 1e-10
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    fn e(i: usize) -> Vec4 {
        Vec4::basis(i)
    }

    fn random_two_vector(rng: &mut ChaCha8Rng) -> TwoVector {
        TwoVector(std::array::from_fn(|_| rng.random_range(-2.0..2.0)))
    }

    #[test]
    fn wedge_basis_and_antisymmetry() {
        assert_eq!(
            wedge(&e(0), &e(1)),
            TwoVector([1.0, 0.0, 0.0, 0.0, 0.0, 0.0])
        );
        let u = Vec4::new(0.3, -1.2, 2.0, 0.7);
        assert_eq!(wedge(&u, &u), TwoVector::ZERO);
        let v = Vec4::new(1.0, 0.5, -0.25, 3.0);
        assert_eq!(wedge(&u, &v), -wedge(&v, &u));
    }

    #[test]
    fn det4_basis_values() {
        let e12 = TwoVector::basis(0, 1);
        let e34 = TwoVector::basis(2, 3);
        let e13 = TwoVector::basis(0, 2);
        let e24 = TwoVector::basis(1, 3);
        assert_eq!(det4(&e12, &e34), 1.0);
        assert_eq!(det4(&e12, &e12), 0.0);
        assert_eq!(det4(&e13, &e24), -1.0);
    }

    #[test]
    fn det4_matches_four_by_four_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let vs: [Vec4; 4] =
                std::array::from_fn(|_| Vec4(std::array::from_fn(|_| rng.random_range(-1.0..1.0))));
            let m = Matrix4::from_fn(|i, j| vs[j].0[i]);
            let d = det4(&wedge(&vs[0], &vs[1]), &wedge(&vs[2], &vs[3]));
            assert!((d - m.determinant()).abs() < 1e-12);
        }
    }

    #[test]
    fn comass_examples() {
        let e12 = TwoVector::basis(0, 1);
        let e34 = TwoVector::basis(2, 3);
        assert!((comass(&(e12 + e34)) - 1.0).abs() < 1e-15);
        assert!((comass(&e12) - 1.0).abs() < 1e-15);
        assert!((comass(&(e12 * 2.0 + e34)) - 2.0).abs() < 1e-15);
        assert_eq!(comass(&TwoVector::ZERO), 0.0);
    }

    #[test]
    fn numeric_comass_examples() {
        let a = TwoVector::basis(0, 1) + TwoVector::basis(2, 3);
        assert!((comass_numeric(&a, 32, 1) - 1.0).abs() < 1e-9);
        assert_eq!(comass_numeric(&TwoVector::ZERO, 4, 1), 0.0);
        // frozen from the multistart oracle itself: sup over the quadric of 2e12+e34
        let b = TwoVector::basis(0, 1) * 2.0 + TwoVector::basis(2, 3);
        assert!((comass_numeric(&b, 32, 9) - 2.0).abs() < 1e-9);
    }

    #[test]
    fn numeric_is_deterministic() {
        let a = TwoVector([0.3, -0.2, 1.1, 0.4, 0.0, -0.9]);
        assert_eq!(comass_numeric(&a, 8, 42), comass_numeric(&a, 8, 42));
    }

    #[test]
    fn closed_form_agrees_with_optimizer() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for k in 0..200 {
            let a = random_two_vector(&mut rng);
            let closed = comass(&a);
            let numeric = comass_numeric(&a, 32, k);
            assert!(numeric <= closed + 1e-9, "{numeric} > {closed}");
            assert!((closed - numeric).abs() < 1e-6, "{closed} vs {numeric}");
        }
    }

    #[test]
    fn orthonormal_sums_have_unit_comass() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let [x1, x2, x3, x4] = random_orthonormal_basis(&mut rng);
            for sign in [1.0, -1.0] {
                let a = wedge(&x1, &x2) + wedge(&x3, &x4) * sign;
                assert!((comass(&a) - 1.0).abs() < 1e-9);
                let attained = det4(&a, &wedge(&x3, &x4));
                assert!((attained.abs() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn canonical_form_examples() {
        let c = canonical_form(&TwoVector::basis(0, 1));
        assert_eq!((c.lambda1, c.lambda2), (1.0, 0.0));
        for (k, x) in c.frame.iter().enumerate() {
            assert!(x.distance(&e(k)) < 1e-12, "{k}: {x:?}");
        }
        let c = canonical_form(&(TwoVector::basis(0, 1) * 2.0 + TwoVector::basis(2, 3)));
        assert!((c.lambda1 - 2.0).abs() < 1e-12 && (c.lambda2 - 1.0).abs() < 1e-12);
        for (k, x) in c.frame.iter().enumerate() {
            assert!(x.distance(&e(k)) < 1e-12, "{k}: {x:?}");
        }
        let z = canonical_form(&TwoVector::ZERO);
        assert_eq!((z.lambda1, z.lambda2), (0.0, 0.0));
    }

    #[test]
    fn canonical_form_reconstructs_random_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..300 {
            let a = random_two_vector(&mut rng);
            let c = canonical_form(&a);
            assert!((c.reconstruct() - a).norm() < 1e-10);
            assert!(c.lambda1 >= c.lambda2 && c.lambda2 >= 0.0);
            assert!((c.lambda1 - comass(&a)).abs() < 1e-9);
            for i in 0..4 {
                for j in 0..4 {
                    let d = c.frame[i].dot(&c.frame[j]);
                    assert!((d - if i == j { 1.0 } else { 0.0 }).abs() < 1e-10);
                }
            }
        }
        // equal eigenvalues: the whole space is one eigenspace
        let a = TwoVector::basis(0, 1) + TwoVector::basis(2, 3);
        let c = canonical_form(&a);
        assert!((c.reconstruct() - a).norm() < 1e-10);
    }

    #[test]
    fn simple_unit_constructor_checks() {
        assert_eq!(
            SimpleUnitTwoVector::from_span(&e(0), &(e(0) * 2.0)),
            Err(ExteriorError::DegenerateFrame)
        );
        let s = SimpleUnitTwoVector::from_span(&Vec4::new(1.0, 1.0, 0.0, 0.0), &e(2)).unwrap();
        assert!((s.beta().norm() - 1.0).abs() < 1e-12);
        assert!(s.beta().plucker().abs() < 1e-12);
        assert_eq!(Plane2::new(s), Plane2::new(s.negated()));
        let t = SimpleUnitTwoVector::from_span(&e(0), &e(3)).unwrap();
        assert_ne!(Plane2::new(s), Plane2::new(t));
    }

    proptest! {
        #[test]
        fn plucker_vanishes_on_wedges(u in prop::array::uniform4(-5.0f64..5.0), v in prop::array::uniform4(-5.0f64..5.0)) {
            let w = wedge(&Vec4(u), &Vec4(v));
            prop_assert!(det4(&w, &w).abs() < 1e-12 * (1.0 + w.norm() * w.norm()));
        }

        #[test]
        fn comass_bounded_by_euclidean_norm(c in prop::array::uniform6(-5.0f64..5.0)) {
            let a = TwoVector(c);
            prop_assert!(comass(&a) <= a.norm() + 1e-12);
            prop_assert!(comass(&a) >= 0.0);
        }

        #[test]
        fn comass_of_simple_equals_norm(u in prop::array::uniform4(-5.0f64..5.0), v in prop::array::uniform4(-5.0f64..5.0)) {
            let w = wedge(&Vec4(u), &Vec4(v));
            prop_assert!((comass(&w) - w.norm()).abs() < 1e-10 * (1.0 + w.norm()));
        }

        #[test]
        fn comass_triangle_inequality(a in prop::array::uniform6(-5.0f64..5.0), b in prop::array::uniform6(-5.0f64..5.0)) {
            let (a, b) = (TwoVector(a), TwoVector(b));
            prop_assert!(comass(&(a + b)) <= comass(&a) + comass(&b) + 1e-12);
        }

        #[test]
        fn numeric_never_exceeds_closed_form(c in prop::array::uniform6(-5.0f64..5.0), seed in 0u64..1000) {
            let a = TwoVector(c);
            prop_assert!(comass_numeric(&a, 4, seed) <= comass(&a) + 1e-9);
        }
    }
}
