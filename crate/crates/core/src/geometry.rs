//! The reference `Y×Y` scene in R⁴ = R²₁ × R²₂.
//!
//! Each factor is a `Y` centred at the origin with branch directions at 90°,
//! 210° and 330° (plus an optional rotation). With zero-based indices mod 3:
//!
//! - `a_j` / `b_l` are the branch endpoints on the unit circle,
//! - `S_j = [a_j, o] ∪ [o, a_{j+1}]`, `L_j = [a_j, a_{j+1}]`, likewise `R_l`, `M_l`,
//! - `x_j` is the midpoint of `L_j` and `w_j = x_j / |x_j|` (resp. `y_l`, `u_l`),
//! - `Q_jl = L_j × M_l`, `P_jl` its affine plane, `p_jl` the orthogonal
//!   projection onto `P_jl`,
//! - `γ_jl = ∂(S_j × R_l)`, an 8-vertex closed polygon on `∂D`,
//! - `v_jl = w_j ∧ u_l`, `D = C₁ × C₂` with `C_i` the triangle on the endpoints.

use std::f64::consts::PI;

use crate::exterior::{wedge, TwoVector, Vec4};
use crate::homology::{ChainZ2, HomologyError, SimplicialComplex};

pub type Point2 = [f64; 2];

fn add2(a: Point2, b: Point2) -> Point2 {
    [a[0] + b[0], a[1] + b[1]]
}

fn sub2(a: Point2, b: Point2) -> Point2 {
    [a[0] - b[0], a[1] - b[1]]
}

fn scale2(a: Point2, s: f64) -> Point2 {
    [a[0] * s, a[1] * s]
}

fn dot2(a: Point2, b: Point2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

fn norm2(a: Point2) -> f64 {
    dot2(a, a).sqrt()
}

fn cross2(a: Point2, b: Point2) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

/// One planar `Y`: three unit branches from a common center.
#[derive(Debug, Clone, PartialEq)]
pub struct YGraph {
    pub center: Point2,
    pub directions: [Point2; 3],
    pub endpoints: [Point2; 3],
}

impl YGraph {
    /// Branches at 90°, 210°, 330° rotated by `rotation` radians.
    pub fn standard(rotation: f64) -> Self {
        let directions: [Point2; 3] = std::array::from_fn(|j| {
            let a = PI / 2.0 + 2.0 * PI * j as f64 / 3.0 + rotation;
            [a.cos(), a.sin()]
        });
        let center = [0.0, 0.0];
        Self {
            center,
            directions,
            endpoints: directions.map(|d| add2(center, d)),
        }
    }

    /// Point at distance `r` from the center along branch `j`.
    pub fn branch_point(&self, j: usize, r: f64) -> Point2 {
        add2(self.center, scale2(self.directions[j % 3], r))
    }

    /// Whether `p` lies in the closed triangle spanned by the endpoints.
    pub fn triangle_contains(&self, p: Point2, tol: f64) -> bool {
        (0..3).all(|j| {
            let a = self.endpoints[j];
            let b = self.endpoints[(j + 1) % 3];
            let edge = sub2(b, a);
            cross2(edge, sub2(p, a)) / norm2(edge) >= -tol
        })
    }
}

/// Rectangle `Q_jl = L_j × M_l` with its in-plane frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Square {
    /// `(x_j, y_l)`, the center of the square.
    pub center: Vec4,
    /// Unit direction of `L_j`, embedded in the first factor.
    pub t: Vec4,
    /// Unit direction of `M_l`, embedded in the second factor.
    pub s: Vec4,
    pub half_side: f64,
    /// Corners `(a_j,b_l), (a_{j+1},b_l), (a_{j+1},b_{l+1}), (a_j,b_{l+1})`.
    pub corners: [Vec4; 4],
}

impl Square {
    pub fn area(&self) -> f64 {
        4.0 * self.half_side * self.half_side
    }

    pub fn diameter(&self) -> f64 {
        2.0 * std::f64::consts::SQRT_2 * self.half_side
    }

    /// In-plane coordinates of the orthogonal projection of `p`.
    pub fn coords(&self, p: &Vec4) -> Point2 {
        let d = *p - self.center;
        [d.dot(&self.t), d.dot(&self.s)]
    }

    pub fn from_coords(&self, c: Point2) -> Vec4 {
        self.center + self.t * c[0] + self.s * c[1]
    }

    pub fn project(&self, p: &Vec4) -> Vec4 {
        self.from_coords(self.coords(p))
    }

    pub fn contains_coords(&self, c: Point2, tol: f64) -> bool {
        c[0].abs() <= self.half_side + tol && c[1].abs() <= self.half_side + tol
    }

    /// Oriented direction 2-vector `t ∧ s`.
    pub fn xi(&self) -> TwoVector {
        wedge(&self.t, &self.s)
    }
}

/// The full product configuration. Indices are zero-based.
#[derive(Debug, Clone)]
pub struct ProductScene {
    pub y1: YGraph,
    pub y2: YGraph,
    pub rotations: (f64, f64),
    /// Midpoints `x_j` of `L_j`.
    pub x: [Point2; 3],
    /// Midpoints `y_l` of `M_l`.
    pub y: [Point2; 3],
    pub w: [Point2; 3],
    pub u: [Point2; 3],
    /// Unit directions of `L_j`.
    pub t: [Point2; 3],
    /// Unit directions of `M_l`.
    pub s: [Point2; 3],
    pub v: [[TwoVector; 3]; 3],
    pub squares: [[Square; 3]; 3],
    pub gamma: [[Vec<Vec4>; 3]; 3],
}

/// Builds the scene with the given factor rotations (radians).
pub fn build_scene(rotation1: f64, rotation2: f64) -> ProductScene {
    ProductScene::new(rotation1, rotation2)
}

impl Default for ProductScene {
    fn default() -> Self {
        Self::new(0.0, 0.0)
    }
}

impl ProductScene {
    pub fn new(rotation1: f64, rotation2: f64) -> Self {
        let y1 = YGraph::standard(rotation1);
        let y2 = YGraph::standard(rotation2);
        let mid =
            |g: &YGraph, j: usize| scale2(add2(g.endpoints[j], g.endpoints[(j + 1) % 3]), 0.5);
        let unit = |p: Point2| scale2(p, 1.0 / norm2(p));
        let x: [Point2; 3] = std::array::from_fn(|j| mid(&y1, j));
        let y: [Point2; 3] = std::array::from_fn(|l| mid(&y2, l));
        let w = x.map(|p| unit(sub2(p, y1.center)));
        let u = y.map(|p| unit(sub2(p, y2.center)));
        let t: [Point2; 3] =
            std::array::from_fn(|j| unit(sub2(y1.endpoints[(j + 1) % 3], y1.endpoints[j])));
        let s: [Point2; 3] =
            std::array::from_fn(|l| unit(sub2(y2.endpoints[(l + 1) % 3], y2.endpoints[l])));
        let v = std::array::from_fn(|j| {
            std::array::from_fn(|l| wedge(&Vec4::from_first(w[j]), &Vec4::from_second(u[l])))
        });
        let squares = std::array::from_fn(|j| {
            std::array::from_fn(|l| {
                let (aj, aj1) = (y1.endpoints[j], y1.endpoints[(j + 1) % 3]);
                let (bl, bl1) = (y2.endpoints[l], y2.endpoints[(l + 1) % 3]);
                Square {
                    center: Vec4::from_pair(x[j], y[l]),
                    t: Vec4::from_first(t[j]),
                    s: Vec4::from_second(s[l]),
                    half_side: 0.5 * norm2(sub2(aj1, aj)),
                    corners: [
                        Vec4::from_pair(aj, bl),
                        Vec4::from_pair(aj1, bl),
                        Vec4::from_pair(aj1, bl1),
                        Vec4::from_pair(aj, bl1),
                    ],
                }
            })
        });
        let gamma = std::array::from_fn(|j| {
            std::array::from_fn(|l| {
                let (aj, aj1, o1) = (y1.endpoints[j], y1.endpoints[(j + 1) % 3], y1.center);
                let (bl, bl1, o2) = (y2.endpoints[l], y2.endpoints[(l + 1) % 3], y2.center);
                vec![
                    Vec4::from_pair(aj, bl),
                    Vec4::from_pair(o1, bl),
                    Vec4::from_pair(aj1, bl),
                    Vec4::from_pair(aj1, o2),
                    Vec4::from_pair(aj1, bl1),
                    Vec4::from_pair(o1, bl1),
                    Vec4::from_pair(aj, bl1),
                    Vec4::from_pair(aj, o2),
                ]
            })
        });
        Self {
            y1,
            y2,
            rotations: (rotation1, rotation2),
            x,
            y,
            w,
            u,
            t,
            s,
            v,
            squares,
            gamma,
        }
    }

    pub fn square(&self, j: usize, l: usize) -> &Square {
        &self.squares[j][l]
    }

    /// `p_jl(p)`: orthogonal projection onto the affine plane `P_jl`.
    pub fn orthogonal_project(&self, p: &Vec4, j: usize, l: usize) -> Vec4 {
        self.squares[j][l].project(p)
    }

    /// Unit simple 2-vector `ξ_jl` spanning the direction plane of `P_jl`.
    pub fn xi(&self, j: usize, l: usize) -> TwoVector {
        self.squares[j][l].xi()
    }

    pub fn l_segment(&self, j: usize) -> [Point2; 2] {
        [self.y1.endpoints[j], self.y1.endpoints[(j + 1) % 3]]
    }

    pub fn m_segment(&self, l: usize) -> [Point2; 2] {
        [self.y2.endpoints[l], self.y2.endpoints[(l + 1) % 3]]
    }

    /// `S_j` as the polyline `a_j, o, a_{j+1}`.
    pub fn s_polyline(&self, j: usize) -> [Point2; 3] {
        [
            self.y1.endpoints[j],
            self.y1.center,
            self.y1.endpoints[(j + 1) % 3],
        ]
    }

    /// `R_l` as the polyline `b_l, o, b_{l+1}`.
    pub fn r_polyline(&self, l: usize) -> [Point2; 3] {
        [
            self.y2.endpoints[l],
            self.y2.center,
            self.y2.endpoints[(l + 1) % 3],
        ]
    }

    pub fn domain_contains(&self, p: &Vec4, tol: f64) -> bool {
        self.y1.triangle_contains(p.first(), tol) && self.y2.triangle_contains(p.second(), tol)
    }

    /// Whether `p` lies on `∂D` (within `tol`).
    pub fn on_domain_boundary(&self, p: &Vec4, tol: f64) -> bool {
        let near_edge = |g: &YGraph, q: Point2| {
            (0..3).any(|j| {
                let a = g.endpoints[j];
                let e = sub2(g.endpoints[(j + 1) % 3], a);
                (cross2(e, sub2(q, a)) / norm2(e)).abs() <= tol
            })
        };
        self.domain_contains(p, tol)
            && (near_edge(&self.y1, p.first()) || near_edge(&self.y2, p.second()))
    }

    /// 4-volume of `D`.
    pub fn domain_volume(&self) -> f64 {
        let area = |g: &YGraph| {
            0.5 * cross2(
                sub2(g.endpoints[1], g.endpoints[0]),
                sub2(g.endpoints[2], g.endpoints[0]),
            )
            .abs()
        };
        area(&self.y1) * area(&self.y2)
    }

    /// Exact `H²(Y×Y ∩ D)`: nine quarter-squares `[o, a_i] × [o, b_k]`.
    pub fn yxy_area(&self) -> f64 {
        let mut total = 0.0;
        for i in 0..3 {
            for k in 0..3 {
                let di = sub2(self.y1.endpoints[i], self.y1.center);
                let dk = sub2(self.y2.endpoints[k], self.y2.center);
                total += norm2(di) * norm2(dk);
            }
        }
        total
    }

    pub fn total_square_area(&self) -> f64 {
        self.squares.iter().flatten().map(Square::area).sum()
    }
}

/// Subdivision of the triangle `C` of one factor into `3n²` triangles: each
/// sector `(o, a_j, a_{j+1})` is cut into an `n×n` grid. Vertex ids start with
/// `o`, then the branch points ordered by distance to `o`, so that the branch
/// subgraph spans ids `0..1+3n` and is ordered identically in every product.
#[derive(Debug, Clone)]
pub struct FactorMesh {
    pub n: usize,
    pub points: Vec<Point2>,
    pub triangles: Vec<[usize; 3]>,
    /// `arms[j][i]` = id of the point at distance `i/n` along branch `j`.
    pub arms: [Vec<usize>; 3],
}

impl FactorMesh {
    pub fn build(y: &YGraph, n: usize) -> Self {
        assert!(n >= 1, "refinement must be positive");
        let mut points = vec![y.center];
        let mut arms: [Vec<usize>; 3] = std::array::from_fn(|_| vec![0]);
        for (j, arm) in arms.iter_mut().enumerate() {
            for i in 1..=n {
                arm.push(points.len());
                points.push(y.branch_point(j, i as f64 / n as f64));
            }
        }
        let mut triangles = Vec::with_capacity(3 * n * n);
        for j in 0..3 {
            let j1 = (j + 1) % 3;
            let (da, db) = (y.directions[j], y.directions[j1]);
            let mut id = vec![vec![usize::MAX; n + 1]; n + 1];
            for i in 0..=n {
                for k in 0..=(n - i) {
                    id[i][k] = if k == 0 {
                        arms[j][i]
                    } else if i == 0 {
                        arms[j1][k]
                    } else {
                        let p = add2(
                            y.center,
                            add2(
                                scale2(da, i as f64 / n as f64),
                                scale2(db, k as f64 / n as f64),
                            ),
                        );
                        points.push(p);
                        points.len() - 1
                    };
                }
            }
            for i in 0..n {
                for k in 0..(n - i) {
                    let mut up = [id[i][k], id[i + 1][k], id[i][k + 1]];
                    up.sort_unstable();
                    triangles.push(up);
                    if i + k + 1 < n {
                        let mut down = [id[i + 1][k], id[i + 1][k + 1], id[i][k + 1]];
                        down.sort_unstable();
                        triangles.push(down);
                    }
                }
            }
        }
        Self {
            n,
            points,
            triangles,
            arms,
        }
    }

    /// Number of vertices on the `Y` itself.
    pub fn arm_vertex_count(&self) -> usize {
        1 + 3 * self.n
    }

    /// Consecutive edges along branch `j`, each as an ordered pair of ids.
    pub fn arm_edges(&self, j: usize) -> Vec<[usize; 2]> {
        self.arms[j].windows(2).map(|w| [w[0], w[1]]).collect()
    }
}

/// Staircase triangulation of the product of two ordered simplices: one
/// maximal simplex per monotone lattice path.
pub fn staircase(p: &[usize], q: &[usize]) -> Vec<Vec<(usize, usize)>> {
    let (a, b) = (p.len() - 1, q.len() - 1);
    let mut out = Vec::new();
    let mut path = vec![(0usize, 0usize)];
    fn walk(
        a: usize,
        b: usize,
        path: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        let (i, k) = *path.last().expect("nonempty");
        if i == a && k == b {
            out.push(path.clone());
            return;
        }
        if i < a {
            path.push((i + 1, k));
            walk(a, b, path, out);
            path.pop();
        }
        if k < b {
            path.push((i, k + 1));
            walk(a, b, path, out);
            path.pop();
        }
    }
    walk(a, b, &mut path, &mut out);
    out.into_iter()
        .map(|path| path.into_iter().map(|(i, k)| (p[i], q[k])).collect())
        .collect()
}

/// Triangulated `Y×Y ∩ D` with its canonical fills and boundary cycles.
#[derive(Debug, Clone)]
pub struct YxyTriangulation {
    pub n: usize,
    pub complex: SimplicialComplex,
    /// 2-chains triangulating `S_j × R_l`.
    pub fills: [[ChainZ2; 3]; 3],
    /// 1-cycles `γ_jl = ∂(S_j × R_l)`.
    pub gammas: [[ChainZ2; 3]; 3],
    /// Quarter-square `(i, k)` of each triangle.
    pub quarter_of: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum GeometryError {
    #[error("refinement must be at least 1")]
    ZeroRefinement,
    #[error(transparent)]
    Homology(#[from] HomologyError),
}

/// Triangulates `Y×Y ∩ D`: every quarter-square `[o,a_i]×[o,b_k]` becomes an
/// `n×n` grid of `2n²` triangles, cut along the same diagonals as the product
/// grid of [`crate::ffproj::build_grid_complex`].
pub fn triangulate_yxy(scene: &ProductScene, n: usize) -> Result<YxyTriangulation, GeometryError> {
    if n == 0 {
        return Err(GeometryError::ZeroRefinement);
    }
    let f1 = FactorMesh::build(&scene.y1, n);
    let f2 = FactorMesh::build(&scene.y2, n);
    let (na, nb) = (f1.arm_vertex_count(), f2.arm_vertex_count());
    let vertices: Vec<Vec4> = (0..na)
        .flat_map(|p| (0..nb).map(move |q| (p, q)))
        .map(|(p, q)| Vec4::from_pair(f1.points[p], f2.points[q]))
        .collect();
    let vid = |p: usize, q: usize| p * nb + q;
    let mut triangles = Vec::new();
    let mut quarter = Vec::new();
    for i in 0..3 {
        for k in 0..3 {
            for e1 in f1.arm_edges(i) {
                for e2 in f2.arm_edges(k) {
                    for path in staircase(&e1, &e2) {
                        triangles.push(path.iter().map(|&(p, q)| vid(p, q)).collect::<Vec<_>>());
                        quarter.push((i, k));
                    }
                }
            }
        }
    }
    let complex = SimplicialComplex::from_simplices(vertices, triangles.clone())?;
    let mut quarter_of = vec![(0, 0); complex.len(2)];
    for (tri, q) in triangles.iter().zip(&quarter) {
        let idx = complex.index_of(tri).expect("triangle present");
        quarter_of[idx] = *q;
    }
    let fills: [[ChainZ2; 3]; 3] = std::array::from_fn(|j| {
        std::array::from_fn(|l| {
            let arms1 = [j, (j + 1) % 3];
            let arms2 = [l, (l + 1) % 3];
            ChainZ2::from_indices(
                2,
                complex.len(2),
                quarter_of
                    .iter()
                    .enumerate()
                    .filter(|(_, (i, k))| arms1.contains(i) && arms2.contains(k))
                    .map(|(t, _)| t),
            )
        })
    });
    let mut gammas: [[ChainZ2; 3]; 3] =
        std::array::from_fn(|_| std::array::from_fn(|_| ChainZ2::zero(1, 0)));
    for j in 0..3 {
        for l in 0..3 {
            gammas[j][l] = complex.boundary(&fills[j][l])?;
        }
    }
    Ok(YxyTriangulation {
        n,
        complex,
        fills,
        gammas,
        quarter_of,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::det4;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn check_invariants(sc: &ProductScene) {
        for g in [&sc.y1, &sc.y2] {
            for j in 0..3 {
                let d = g.directions[j];
                let e = g.directions[(j + 1) % 3];
                assert!((dot2(d, e) + 0.5).abs() < 1e-12);
                assert!((norm2(sub2(g.endpoints[j], g.center)) - 1.0).abs() < 1e-12);
            }
        }
        let sw = sc.w.iter().fold([0.0, 0.0], |a, &b| add2(a, b));
        let su = sc.u.iter().fold([0.0, 0.0], |a, &b| add2(a, b));
        assert!(norm2(sw) < 1e-12 && norm2(su) < 1e-12);
        for j in 0..3 {
            let row: TwoVector = (0..3).map(|l| sc.v[j][l]).sum();
            let col: TwoVector = (0..3).map(|l| sc.v[l][j]).sum();
            assert!(row.norm() < 1e-12 && col.norm() < 1e-12);
            for l in 0..3 {
                assert!((sc.v[j][l].norm() - 1.0).abs() < 1e-12);
                assert!((det4(&sc.v[j][l], &sc.xi(j, l)).abs() - 1.0).abs() < 1e-12);
                let q = sc.square(j, l);
                assert!((2.0 * q.half_side - 3f64.sqrt()).abs() < 1e-12);
                assert!((q.area() - 3.0).abs() < 1e-12);
                let g = &sc.gamma[j][l];
                for k in 0..g.len() {
                    let (a, b) = (g[k], g[(k + 1) % g.len()]);
                    for s in [0.0, 0.25, 0.5, 0.75, 1.0] {
                        assert!(sc.on_domain_boundary(&(a + (b - a) * s), 1e-12));
                    }
                }
            }
        }
    }

    #[test]
    fn reference_scene_invariants() {
        let sc = build_scene(0.0, 0.0);
        check_invariants(&sc);
        assert!((sc.total_square_area() - 27.0).abs() < 1e-12);
        assert!((sc.yxy_area() - 9.0).abs() < 1e-12);
        assert!((sc.domain_volume() - 27.0 / 16.0).abs() < 1e-12);
        // w_0 sits opposite the third branch
        assert!(norm2(add2(sc.w[0], sc.y1.directions[2])) < 1e-12);
    }

    #[test]
    fn rotated_scenes_keep_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let sc = build_scene(rng.random_range(0.0..6.3), rng.random_range(0.0..6.3));
            check_invariants(&sc);
            assert!((sc.total_square_area() - 27.0).abs() < 1e-12);
        }
    }

    #[test]
    fn projection_properties() {
        let sc = build_scene(0.0, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for j in 0..3 {
            for l in 0..3 {
                // the origin projects to the square center (o projects to x_j on L_j)
                let c = sc.orthogonal_project(&Vec4::ZERO, j, l);
                assert!(c.distance(&sc.square(j, l).center) < 1e-12);
                for corner in sc.square(j, l).corners {
                    assert!(sc.orthogonal_project(&corner, j, l).distance(&corner) < 1e-12);
                }
                // p_jl(γ_jl) walks around ∂Q_jl: corners and edge midpoints
                let q = sc.square(j, l);
                let h = q.half_side;
                let expected = [
                    [-h, -h],
                    [0.0, -h],
                    [h, -h],
                    [h, 0.0],
                    [h, h],
                    [0.0, h],
                    [-h, h],
                    [-h, 0.0],
                ];
                for (p, e) in sc.gamma[j][l].iter().zip(expected) {
                    let c = q.coords(p);
                    assert!(norm2(sub2(c, e)) < 1e-12, "{c:?} vs {e:?}");
                }
                for _ in 0..200 {
                    let a = Vec4(std::array::from_fn(|_| rng.random_range(-2.0..2.0)));
                    let b = Vec4(std::array::from_fn(|_| rng.random_range(-2.0..2.0)));
                    let pa = sc.orthogonal_project(&a, j, l);
                    assert!(sc.orthogonal_project(&pa, j, l).distance(&pa) < 1e-12);
                    let pb = sc.orthogonal_project(&b, j, l);
                    assert!(pa.distance(&pb) <= a.distance(&b) + 1e-12);
                }
            }
        }
    }

    #[test]
    fn factor_mesh_counts() {
        let y = YGraph::standard(0.0);
        for n in 1..=4 {
            let m = FactorMesh::build(&y, n);
            assert_eq!(m.triangles.len(), 3 * n * n);
            // 1 + 3n on the Y, the remaining sector points are unique to their sector
            assert_eq!(m.points.len(), 1 + 3 * n + 3 * (n * (n + 1) / 2 - n));
            let area: f64 = m
                .triangles
                .iter()
                .map(|t| {
                    let [a, b, c] = t.map(|i| m.points[i]);
                    0.5 * cross2(sub2(b, a), sub2(c, a)).abs()
                })
                .sum();
            assert!((area - 3.0 * 3f64.sqrt() / 4.0).abs() < 1e-12);
        }
    }

    #[test]
    fn staircase_counts() {
        assert_eq!(staircase(&[0, 1], &[5, 6]).len(), 2);
        assert_eq!(staircase(&[0, 1, 2], &[0, 1, 2]).len(), 6);
        for s in staircase(&[0, 1, 2], &[0, 1, 2]) {
            assert_eq!(s.len(), 5);
        }
    }

    #[test]
    fn triangulation_area_and_boundaries() {
        let sc = build_scene(0.0, 0.0);
        assert_eq!(
            triangulate_yxy(&sc, 0).unwrap_err(),
            GeometryError::ZeroRefinement
        );
        for n in 1..=4 {
            let t = triangulate_yxy(&sc, n).unwrap();
            assert_eq!(t.complex.len(2), 18 * n * n);
            let all = ChainZ2::from_indices(2, t.complex.len(2), 0..t.complex.len(2));
            assert!((t.complex.chain_area(&all) - 9.0).abs() < 1e-12);
            for j in 0..3 {
                for l in 0..3 {
                    assert!((t.complex.chain_area(&t.fills[j][l]) - 4.0).abs() < 1e-12);
                    // every edge of γ_jl lies on ∂D and on the polygon of the scene
                    for e in t.gammas[j][l].support() {
                        let s = t.complex.simplex(1, e);
                        for &v in s {
                            assert!(sc.on_domain_boundary(&t.complex.vertex(v), 1e-12));
                        }
                    }
                    assert_eq!(t.gammas[j][l].weight(), 8 * n);
                }
            }
        }
    }
}
