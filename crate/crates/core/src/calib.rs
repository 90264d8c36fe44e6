//! Calibration functionals `g_jl(P) = |det(ξ_P ∧ v_jl)|` and exhaustive
//! evaluation of signed sums of the `v_jl` under the comass norm.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::exterior::{
    comass, det4, mat_t_vec, mat_vec, pairing_matrix, random_orthonormal_pair, wedge, Plane2,
    TwoVector, Vec4,
};
use crate::geometry::ProductScene;
use crate::homology::{triangle_area, ChainZ2, SimplicialComplex};
use crate::Tolerances;

pub type Index = (usize, usize);

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum CalibError {
    #[error("triangle is degenerate (area {0:e})")]
    DegenerateTriangle(f64),
}

/// `g_jl` on an unoriented plane.
pub fn g(scene: &ProductScene, j: usize, l: usize, plane: &Plane2) -> f64 {
    det4(&scene.v[j][l], plane.representative()).abs()
}

/// `g_jl` on the plane spanned by `a`, `b` (not necessarily orthonormal).
pub fn g_span(scene: &ProductScene, j: usize, l: usize, a: &Vec4, b: &Vec4) -> f64 {
    let beta = wedge(a, b);
    let n = beta.norm();
    if n == 0.0 {
        return 0.0;
    }
    det4(&scene.v[j][l], &beta).abs() / n
}

/// Both sides of the Jacobian identity for one triangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JacobianCheck {
    pub g_value: f64,
    pub area_ratio: f64,
    pub difference: f64,
}

/// Compares `g_jl(plane of T)` with `area(p_jl(T)) / area(T)`.
pub fn jacobian_identity_check(
    scene: &ProductScene,
    j: usize,
    l: usize,
    tri: &[Vec4; 3],
) -> Result<JacobianCheck, CalibError> {
    let area = triangle_area(&tri[0], &tri[1], &tri[2]);
    let scale = (tri[1] - tri[0]).norm().max((tri[2] - tri[0]).norm());
    if area.is_nan() || area <= 1e-12 * scale * scale {
        return Err(CalibError::DegenerateTriangle(area));
    }
    let p = tri.map(|x| scene.orthogonal_project(&x, j, l));
    let area_ratio = triangle_area(&p[0], &p[1], &p[2]) / area;
    let g_value = g_span(scene, j, l, &(tri[1] - tri[0]), &(tri[2] - tri[0]));
    Ok(JacobianCheck {
        g_value,
        area_ratio,
        difference: (g_value - area_ratio).abs(),
    })
}

/// `Σ area(T)·g_jl(T)` over the support of a 2-chain.
pub fn integrate_g(
    scene: &ProductScene,
    j: usize,
    l: usize,
    k: &SimplicialComplex,
    chain: &ChainZ2,
) -> f64 {
    chain
        .support()
        .map(|t| {
            let p = k.simplex_points(2, t);
            triangle_area(&p[0], &p[1], &p[2]) * g_span(scene, j, l, &(p[1] - p[0]), &(p[2] - p[0]))
        })
        .sum()
}

/// Signs on an ordered index set; bit `b` of `bits` set means entry `b` is −1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignAssignment {
    pub domain: Vec<Index>,
    pub bits: u32,
}

impl SignAssignment {
    pub fn new(domain: Vec<Index>, bits: u32) -> Self {
        assert!(domain.len() < 32, "sign domain too large");
        Self { domain, bits }
    }

    pub fn sign(&self, position: usize) -> f64 {
        if self.bits >> position & 1 == 1 {
            -1.0
        } else {
            1.0
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (Index, f64)> + '_ {
        self.domain
            .iter()
            .enumerate()
            .map(|(b, &jl)| (jl, self.sign(b)))
    }

    /// Bits as a `+`/`-` string in domain order.
    pub fn pattern(&self) -> String {
        (0..self.domain.len())
            .map(|b| if self.sign(b) > 0.0 { '+' } else { '-' })
            .collect()
    }

    /// Number of sign maps on the domain.
    pub fn count(domain_len: usize) -> u32 {
        1 << domain_len
    }
}

/// `Σ ε(j,l) v_jl`.
pub fn sign_sum(scene: &ProductScene, eps: &SignAssignment) -> TwoVector {
    eps.entries().map(|((j, l), s)| scene.v[j][l] * s).sum()
}

/// Comass of the signed sum.
pub fn sign_sum_norm(scene: &ProductScene, eps: &SignAssignment) -> f64 {
    comass(&sign_sum(scene, eps))
}

/// `{j1,j2} × {l1,l2}` in lexicographic order.
pub fn block(rows: [usize; 2], cols: [usize; 2]) -> Vec<Index> {
    vec![
        (rows[0], cols[0]),
        (rows[0], cols[1]),
        (rows[1], cols[0]),
        (rows[1], cols[1]),
    ]
}

/// All pairs `(j, l)` with `l ≠ σ(j)`, lexicographic.
pub fn permutation_complement(sigma: [usize; 3]) -> Vec<Index> {
    (0..3)
        .flat_map(|j| (0..3).map(move |l| (j, l)))
        .filter(|&(j, l)| sigma[j] != l)
        .collect()
}

/// The six permutations of `{0,1,2}` in lexicographic order.
pub const PERMUTATIONS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// The nine 2×2 blocks in lexicographic order.
pub fn all_blocks() -> Vec<([usize; 2], [usize; 2])> {
    let pairs = [[0, 1], [0, 2], [1, 2]];
    pairs
        .iter()
        .flat_map(|&r| pairs.iter().map(move |&c| (r, c)))
        .collect()
}

pub fn row(j: usize) -> Vec<Index> {
    (0..3).map(|l| (j, l)).collect()
}

pub fn column(l: usize) -> Vec<Index> {
    (0..3).map(|j| (j, l)).collect()
}

/// Human-readable label `{11,12,...}` with one-based indices.
pub fn set_label(set: &[Index]) -> String {
    let items: Vec<String> = set
        .iter()
        .map(|(j, l)| format!("{}{}", j + 1, l + 1))
        .collect();
    format!("{{{}}}", items.join(","))
}

/// One evaluated sign map.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseRow {
    pub case: String,
    pub bits: u32,
    pub pattern: String,
    pub value: f64,
}

/// Exhaustive evaluation of a family of index sets.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CalibrationReport {
    pub label: String,
    pub rows: Vec<CaseRow>,
    pub maximum: f64,
    pub bound: f64,
    /// Rows whose value is within `tol.bound` of the maximum.
    pub attaining: Vec<(String, u32)>,
}

impl CalibrationReport {
    fn from_rows(label: &str, rows: Vec<CaseRow>, bound: f64, tol: f64) -> Self {
        let maximum = rows
            .iter()
            .map(|r| r.value)
            .fold(f64::NEG_INFINITY, f64::max);
        let attaining = rows
            .iter()
            .filter(|r| r.value >= maximum - tol)
            .map(|r| (r.case.clone(), r.bits))
            .collect();
        Self {
            label: label.to_string(),
            rows,
            maximum,
            bound,
            attaining,
        }
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.maximum <= self.bound + tol
    }
}

/// Every sign map on `set`, in increasing bit order.
pub fn enumerate_set(scene: &ProductScene, set: &[Index]) -> Vec<CaseRow> {
    let case = set_label(set);
    (0..SignAssignment::count(set.len()))
        .map(|bits| {
            let eps = SignAssignment::new(set.to_vec(), bits);
            CaseRow {
                case: case.clone(),
                bits,
                pattern: eps.pattern(),
                value: sign_sum_norm(scene, &eps),
            }
        })
        .collect()
}

/// Maximum of [`sign_sum_norm`] over all sign maps on `set`.
pub fn max_sign_sum(scene: &ProductScene, set: &[Index]) -> f64 {
    enumerate_set(scene, set)
        .iter()
        .map(|r| r.value)
        .fold(0.0, f64::max)
}

/// Sign maps on a 2×2 block (lexicographic domain) whose sum is
/// `±(w_j1 − w_j2) ∧ (u_l1 − u_l2)`.
pub const ALTERNATING_BLOCK_BITS: [u32; 2] = [0b0110, 0b1001];

/// Exhaustive bounds over the nine blocks (16 maps each) and the six
/// permutation complements (64 maps each); both bounded by 3.
pub fn verify_sign_bounds(
    scene: &ProductScene,
    tol: &Tolerances,
) -> (CalibrationReport, CalibrationReport) {
    let blocks: Vec<CaseRow> = all_blocks()
        .into_iter()
        .flat_map(|(r, c)| enumerate_set(scene, &block(r, c)))
        .collect();
    let perms: Vec<CaseRow> = PERMUTATIONS
        .iter()
        .flat_map(|&s| enumerate_set(scene, &permutation_complement(s)))
        .collect();
    (
        CalibrationReport::from_rows("blocks", blocks, 3.0, tol.bound),
        CalibrationReport::from_rows("permutation complements", perms, 3.0, tol.bound),
    )
}

/// How a computed value relates to its reference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    /// Value must equal the reference.
    Equal,
    /// Value must not exceed the reference.
    AtMost,
}

/// A fixed linear combination of the `v_jl` with a reference value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NamedPattern {
    pub label: &'static str,
    pub terms: Vec<(Index, f64)>,
    pub value: f64,
    pub reference: f64,
    pub relation: Relation,
}

impl NamedPattern {
    pub fn holds(&self, tol: f64) -> bool {
        match self.relation {
            Relation::Equal => (self.value - self.reference).abs() <= tol,
            Relation::AtMost => self.value <= self.reference + tol,
        }
    }
}

type PatternCase = (&'static str, &'static [(Index, f64)], f64, Relation);

/// Sub-case combinations arising in the permutation-complement analysis
/// (labels use one-based indices).
pub fn named_patterns(scene: &ProductScene) -> Vec<NamedPattern> {
    let r3 = 3f64.sqrt();
    let cases: [PatternCase; 8] = [
        (
            "v12-v13+v23-v21+v31-v32",
            &[
                ((0, 1), 1.0),
                ((0, 2), -1.0),
                ((1, 2), 1.0),
                ((1, 0), -1.0),
                ((2, 0), 1.0),
                ((2, 1), -1.0),
            ],
            1.5 * r3,
            Relation::Equal,
        ),
        (
            "2v11-v23-v32",
            &[((0, 0), 2.0), ((1, 2), -1.0), ((2, 1), -1.0)],
            1.5,
            Relation::Equal,
        ),
        (
            "2v11+v23+v32",
            &[((0, 0), 2.0), ((1, 2), 1.0), ((2, 1), 1.0)],
            2.5,
            Relation::AtMost,
        ),
        (
            "2v11+v23-v32",
            &[((0, 0), 2.0), ((1, 2), 1.0), ((2, 1), -1.0)],
            2.0 + r3 / 2.0,
            Relation::AtMost,
        ),
        (
            "2v21-v23-v32",
            &[((1, 0), 2.0), ((1, 2), -1.0), ((2, 1), -1.0)],
            r3 + r3 / 2.0,
            Relation::AtMost,
        ),
        (
            "2v21-v23+v32",
            &[((1, 0), 2.0), ((1, 2), -1.0), ((2, 1), 1.0)],
            2.0 + r3 / 2.0,
            Relation::AtMost,
        ),
        (
            "v11-v12-v21+v22",
            &[((0, 0), 1.0), ((0, 1), -1.0), ((1, 0), -1.0), ((1, 1), 1.0)],
            3.0,
            Relation::Equal,
        ),
        (
            "v11+v12+v13",
            &[((0, 0), 1.0), ((0, 1), 1.0), ((0, 2), 1.0)],
            0.0,
            Relation::Equal,
        ),
    ];
    cases
        .into_iter()
        .map(|(label, terms, reference, relation)| {
            let sum: TwoVector = terms.iter().map(|&((j, l), c)| scene.v[j][l] * c).sum();
            NamedPattern {
                label,
                terms: terms.to_vec(),
                value: comass(&sum),
                reference,
                relation,
            }
        })
        .collect()
}

const POINTWISE_MAX_STEPS: usize = 5_000;

/// Numerical `sup_P Σ_{(j,l)∈S} g_jl(P)` by multistart ascent over
/// orthonormal pairs. Each step fixes the signs `ε = sign det(v_jl ∧ u∧v)`
/// and takes one alternating maximization step for `Σ ε v_jl`; the objective
/// `Σ |det(v_jl ∧ u∧v)|` never decreases.
pub fn pointwise_sum_sup(scene: &ProductScene, set: &[Index], starts: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let objective = |beta: &TwoVector| -> f64 {
        set.iter()
            .map(|&(j, l)| det4(&scene.v[j][l], beta).abs())
            .sum()
    };
    let mut best = 0.0_f64;
    for _ in 0..starts.max(1) {
        let (mut u, mut v) = random_orthonormal_pair(&mut rng);
        let mut value = objective(&wedge(&u, &v));
        for _ in 0..POINTWISE_MAX_STEPS {
            let beta = wedge(&u, &v);
            let signed: TwoVector = set
                .iter()
                .map(|&(j, l)| {
                    let s = if det4(&scene.v[j][l], &beta) >= 0.0 {
                        1.0
                    } else {
                        -1.0
                    };
                    scene.v[j][l] * s
                })
                .sum();
            let m = pairing_matrix(&signed);
            let Some(nv) = mat_t_vec(&m, &u).normalized() else {
                break;
            };
            let Some(nu) = mat_vec(&m, &nv).normalized() else {
                break;
            };
            let next = objective(&wedge(&nu, &nv));
            let step = (nu - u).norm() + (nv - v).norm();
            if next < value {
                break;
            }
            u = nu;
            v = nv;
            value = next;
            if step < 1e-13 {
                break;
            }
        }
        best = best.max(value);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::{random_orthonormal_basis, SimpleUnitTwoVector};
    use crate::geometry::{build_scene, triangulate_yxy};
    use proptest::prelude::*;
    use rand::Rng;

    #[test]
    fn g_examples() {
        let sc = build_scene(0.0, 0.0);
        for j in 0..3 {
            for l in 0..3 {
                let own =
                    Plane2::spanned_by(&Vec4::from_first(sc.w[j]), &Vec4::from_second(sc.u[l]))
                        .unwrap();
                assert!(g(&sc, j, l, &own) < 1e-15);
                let q = sc.square(j, l);
                let p = Plane2::spanned_by(&q.t, &q.s).unwrap();
                assert!((g(&sc, j, l, &p) - 1.0).abs() < 1e-12);
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..500 {
            let (a, b) = random_orthonormal_pair(&mut rng);
            let p = Plane2::new(SimpleUnitTwoVector::from_span(&a, &b).unwrap());
            let q = Plane2::new(p.simple().negated());
            assert!(g(&sc, 1, 2, &p) <= 1.0 + 1e-12);
            assert_eq!(g(&sc, 1, 2, &p), g(&sc, 1, 2, &q));
        }
    }

    #[test]
    fn jacobian_examples() {
        let sc = build_scene(0.0, 0.0);
        let q = sc.square(0, 0);
        let inside = [
            q.from_coords([0.1, 0.2]),
            q.from_coords([-0.3, 0.1]),
            q.from_coords([0.2, -0.5]),
        ];
        let c = jacobian_identity_check(&sc, 0, 0, &inside).unwrap();
        assert!((c.g_value - 1.0).abs() < 1e-12 && (c.area_ratio - 1.0).abs() < 1e-12);
        let (w, u) = (Vec4::from_first(sc.w[0]), Vec4::from_second(sc.u[0]));
        let flat = [Vec4::ZERO, w, u];
        let c = jacobian_identity_check(&sc, 0, 0, &flat).unwrap();
        assert!(c.g_value < 1e-12 && c.area_ratio < 1e-12);
        assert!(matches!(
            jacobian_identity_check(&sc, 0, 0, &[Vec4::ZERO, w, w * 2.0]),
            Err(CalibError::DegenerateTriangle(_))
        ));
    }

    #[test]
    fn canonical_fill_integrates_to_square_area() {
        let sc = build_scene(0.0, 0.0);
        for n in 1..=2 {
            let t = triangulate_yxy(&sc, n).unwrap();
            for j in 0..3 {
                for l in 0..3 {
                    let v = integrate_g(&sc, j, l, &t.complex, &t.fills[j][l]);
                    assert!((v - 3.0).abs() < 1e-12, "{v}");
                }
            }
            let empty = ChainZ2::zero(2, t.complex.len(2));
            assert_eq!(integrate_g(&sc, 0, 0, &t.complex, &empty), 0.0);
        }
    }

    #[test]
    fn sign_sum_examples() {
        let sc = build_scene(0.0, 0.0);
        let b = SignAssignment::new(block([0, 1], [0, 1]), ALTERNATING_BLOCK_BITS[0]);
        assert!((sign_sum_norm(&sc, &b) - 3.0).abs() < 1e-12);
        let r = SignAssignment::new(row(0), 0);
        assert!(sign_sum_norm(&sc, &r) < 1e-12);
    }

    #[test]
    fn sign_bounds_on_reference_scene() {
        let sc = build_scene(0.0, 0.0);
        let tol = Tolerances::default();
        let (blocks, perms) = verify_sign_bounds(&sc, &tol);
        assert_eq!(blocks.rows.len(), 144);
        assert_eq!(perms.rows.len(), 384);
        assert!((blocks.maximum - 3.0).abs() < 1e-9);
        assert!(perms.holds(1e-9) && perms.maximum < 3.0 - 0.1);
        let expected: Vec<(String, u32)> = all_blocks()
            .into_iter()
            .flat_map(|(r, c)| ALTERNATING_BLOCK_BITS.map(|bits| (set_label(&block(r, c)), bits)))
            .collect();
        assert_eq!(blocks.attaining, expected);
        for p in named_patterns(&sc) {
            assert!(p.holds(1e-9), "{} = {}", p.label, p.value);
        }
    }

    #[test]
    fn maxima_are_rotation_invariant() {
        let base = verify_sign_bounds(&build_scene(0.0, 0.0), &Tolerances::default());
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..5 {
            let sc = build_scene(rng.random_range(0.0..6.3), rng.random_range(0.0..6.3));
            let (b, p) = verify_sign_bounds(&sc, &Tolerances::default());
            assert!((b.maximum - base.0.maximum).abs() < 1e-9);
            assert!((p.maximum - base.1.maximum).abs() < 1e-9);
        }
    }

    #[test]
    fn pointwise_sup_matches_enumeration() {
        let sc = build_scene(0.0, 0.0);
        let single = pointwise_sum_sup(&sc, &[(0, 0)], 16, 1);
        assert!((single - 1.0).abs() < 1e-6);
        let b = block([0, 1], [1, 2]);
        assert!((pointwise_sum_sup(&sc, &b, 32, 2) - max_sign_sum(&sc, &b)).abs() < 1e-4);
        let r = row(1);
        let sup = pointwise_sum_sup(&sc, &r, 32, 3);
        assert!(sup <= 2.0 + 1e-9);
        assert!((sup - max_sign_sum(&sc, &r)).abs() < 1e-4);
    }

    #[test]
    fn random_frames_give_unit_g_bound() {
        let sc = build_scene(0.3, -1.1);
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..100 {
            let [a, b, _, _] = random_orthonormal_basis(&mut rng);
            for j in 0..3 {
                for l in 0..3 {
                    assert!(g_span(&sc, j, l, &a, &b) <= 1.0 + 1e-12);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn sign_sum_bounded_by_set_size(mask in 1u16..512, bits in any::<u32>()) {
            let sc = build_scene(0.0, 0.0);
            let set: Vec<Index> = (0..9).filter(|b| mask >> b & 1 == 1).map(|b| (b / 3, b % 3)).collect();
            let eps = SignAssignment::new(set.clone(), bits & ((1 << set.len()) - 1));
            prop_assert!(sign_sum_norm(&sc, &eps) <= set.len() as f64 + 1e-12);
        }
    }
}
