//! The nine-piece decomposition of a competitor's fills and the mod-2 degree
//! of the projections `p_jl`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::complex::{ChainZ2, SimplicialComplex};
use super::HomologyError;
use crate::exterior::Vec4;
use crate::geometry::{Point2, ProductScene};

/// Completes four fills `Γ₁₁, Γ₁₂, Γ₂₁, Γ₂₂` (zero-based `[0][0]..[1][1]`) to
/// all nine by `Γ_j3 = Γ_j1 + Γ_j2` and `Γ_3l = Γ_1l + Γ_2l`, then checks
/// `∂Γ_jl = γ_jl` everywhere and the exactly-two property along every row
/// and column.
pub fn decompose(
    k: &SimplicialComplex,
    fills: [[&ChainZ2; 2]; 2],
    gammas: &[[ChainZ2; 3]; 3],
) -> Result<[[ChainZ2; 3]; 3], HomologyError> {
    for j in 0..2 {
        for l in 0..2 {
            if k.boundary(fills[j][l])? != gammas[j][l] {
                return Err(HomologyError::BadBoundary { j, l });
            }
        }
    }
    let mut out: [[ChainZ2; 3]; 3] =
        std::array::from_fn(|_| std::array::from_fn(|_| ChainZ2::zero(2, k.len(2))));
    for j in 0..2 {
        for l in 0..2 {
            out[j][l] = fills[j][l].clone();
        }
        out[j][2] = out[j][0].add(&out[j][1]);
    }
    for l in 0..3 {
        out[2][l] = out[0][l].add(&out[1][l]);
    }
    for j in 0..3 {
        for l in 0..3 {
            if k.boundary(&out[j][l])? != gammas[j][l] {
                return Err(HomologyError::BadBoundary { j, l });
            }
        }
    }
    if let Some(v) = exactly_two_violation(&out) {
        return Err(HomologyError::MultiplicityViolation(v));
    }
    Ok(out)
}

/// Checks that every simplex in a row's (or column's) union lies in exactly
/// two of its three chains. Returns a description of the first violation.
pub fn exactly_two_violation(chains: &[[ChainZ2; 3]; 3]) -> Option<String> {
    let len = chains[0][0].len();
    for t in 0..len {
        for j in 0..3 {
            let row = (0..3).filter(|&l| chains[j][l].contains(t)).count();
            if row != 0 && row != 2 {
                return Some(format!("simplex {t} lies in {row} chains of row {j}"));
            }
            let col = (0..3).filter(|&l| chains[l][j].contains(t)).count();
            if col != 0 && col != 2 {
                return Some(format!("simplex {t} lies in {col} chains of column {j}"));
            }
        }
    }
    None
}

/// Outcome of a mod-2 degree evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegreeOutcome {
    pub degree: u8,
    /// In-plane point actually used.
    pub point: Point2,
    /// Offset added to the requested point to make it generic, if any.
    pub perturbation: Option<Point2>,
}

const MAX_PERTURBATIONS: usize = 64;

/// Parity of the number of triangles of `gamma` whose `p_jl`-image contains
/// `y` (a point of `Q_jl`). Points on the image of an edge are moved by a
/// seeded offset of size `1e-7·diam(Q_jl)`, reported in the outcome.
pub fn mod2_degree(
    k: &SimplicialComplex,
    gamma: &ChainZ2,
    scene: &ProductScene,
    j: usize,
    l: usize,
    y: &Vec4,
    seed: u64,
) -> Result<DegreeOutcome, HomologyError> {
    if gamma.dim != 2 || gamma.len() != k.len(2) {
        return Err(HomologyError::DimensionMismatch {
            expected: 2,
            found: gamma.dim,
        });
    }
    let q = scene.square(j, l);
    let target = q.coords(y);
    let diam = q.diameter();
    if !q.contains_coords(target, -1e-12 * diam) {
        return Err(HomologyError::Degenerate(format!(
            "point {target:?} is not interior to Q_{}{}",
            j + 1,
            l + 1
        )));
    }
    let images: Vec<[Point2; 3]> = gamma
        .support()
        .map(|t| {
            let s = k.simplex(2, t);
            std::array::from_fn(|i| q.coords(&k.vertex(s[i])))
        })
        .collect();
    let edge_tol = 1e-10 * diam;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut point = target;
    let mut perturbation = None;
    for _ in 0..MAX_PERTURBATIONS {
        if images
            .iter()
            .all(|tri| !near_any_edge(tri, point, edge_tol))
        {
            let count = images
                .iter()
                .filter(|tri| strictly_inside(tri, point))
                .count();
            return Ok(DegreeOutcome {
                degree: (count % 2) as u8,
                point,
                perturbation,
            });
        }
        let angle = rng.random_range(0.0..std::f64::consts::TAU);
        let offset = [1e-7 * diam * angle.cos(), 1e-7 * diam * angle.sin()];
        point = [target[0] + offset[0], target[1] + offset[1]];
        perturbation = Some(offset);
    }
    Err(HomologyError::Degenerate(format!(
        "no generic point near {target:?} after {MAX_PERTURBATIONS} perturbations"
    )))
}

fn cross(o: Point2, a: Point2, b: Point2) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn segment_distance(a: Point2, b: Point2, p: Point2) -> f64 {
    let d = [b[0] - a[0], b[1] - a[1]];
    let len2 = d[0] * d[0] + d[1] * d[1];
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / len2).clamp(0.0, 1.0)
    };
    let c = [a[0] + t * d[0] - p[0], a[1] + t * d[1] - p[1]];
    (c[0] * c[0] + c[1] * c[1]).sqrt()
}

fn near_any_edge(tri: &[Point2; 3], p: Point2, tol: f64) -> bool {
    (0..3).any(|i| segment_distance(tri[i], tri[(i + 1) % 3], p) <= tol)
}

fn strictly_inside(tri: &[Point2; 3], p: Point2) -> bool {
    let area = cross(tri[0], tri[1], tri[2]);
    if area == 0.0 {
        return false;
    }
    let s = area.signum();
    (0..3).all(|i| s * cross(tri[i], tri[(i + 1) % 3], p) > 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_scene, triangulate_yxy};

    #[test]
    fn xor_membership_table() {
        let t = triangulate_yxy(&build_scene(0.0, 0.0), 1).unwrap();
        let f = &t.fills;
        let nine = decompose(
            &t.complex,
            [[&f[0][0], &f[0][1]], [&f[1][0], &f[1][1]]],
            &t.gammas,
        )
        .unwrap();
        assert_eq!(nine, t.fills);
        for s in 0..t.complex.len(2) {
            let (a, b, c) = (
                nine[0][0].contains(s),
                nine[0][1].contains(s),
                nine[0][2].contains(s),
            );
            assert_eq!(c, a ^ b);
        }
    }

    #[test]
    fn bad_fill_is_rejected() {
        let t = triangulate_yxy(&build_scene(0.0, 0.0), 1).unwrap();
        let f = &t.fills;
        let err = decompose(
            &t.complex,
            [[&f[0][0], &f[0][0]], [&f[1][0], &f[1][1]]],
            &t.gammas,
        );
        assert_eq!(err, Err(HomologyError::BadBoundary { j: 0, l: 1 }));
    }

    #[test]
    fn canonical_fill_has_degree_one_at_center() {
        let sc = build_scene(0.0, 0.0);
        let t = triangulate_yxy(&sc, 2).unwrap();
        for j in 0..3 {
            for l in 0..3 {
                let c = sc.square(j, l).center;
                let d = mod2_degree(&t.complex, &t.fills[j][l], &sc, j, l, &c, 5).unwrap();
                assert_eq!(d.degree, 1);
                let empty = ChainZ2::zero(2, t.complex.len(2));
                assert_eq!(
                    mod2_degree(&t.complex, &empty, &sc, j, l, &c, 5)
                        .unwrap()
                        .degree,
                    0
                );
            }
        }
    }

    #[test]
    fn edge_points_are_perturbed() {
        let sc = build_scene(0.0, 0.0);
        let t = triangulate_yxy(&sc, 1).unwrap();
        // the image of the seam o×[o,b] passes through the square's center line
        let q = sc.square(0, 0);
        let y = q.from_coords([0.0, 0.3]);
        let d = mod2_degree(&t.complex, &t.fills[0][0], &sc, 0, 0, &y, 1).unwrap();
        assert!(d.perturbation.is_some());
        assert_eq!(d.degree, 1);
        let again = mod2_degree(&t.complex, &t.fills[0][0], &sc, 0, 0, &y, 1).unwrap();
        assert_eq!(d, again);
    }
}
