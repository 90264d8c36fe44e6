//! Product grids over `D = C₁ × C₂`.

use super::complex::PolyComplex;
use super::polygon::Polygon;
use super::FfError;
use crate::exterior::Vec4;
use crate::geometry::{staircase, triangulate_yxy, FactorMesh, Point2, ProductScene, YGraph};
use crate::homology::{ChainZ2, SimplicialComplex};

/// A simplicial subdivision of `D` together with its cell structure.
#[derive(Debug, Clone)]
pub struct GridComplex {
    pub n: usize,
    pub aligned: bool,
    pub simplicial: SimplicialComplex,
    pub poly: PolyComplex,
    /// Lower bound on the roundness of every cell.
    pub roundness_min: f64,
}

/// Triangulation of the factor triangle. Aligned meshes refine the three
/// sectors `(o, a_j, a_{j+1})` so the `Y` lies on edges; unaligned meshes
/// subdivide the whole triangle uniformly into `(2n)²` pieces.
fn factor_mesh(y: &YGraph, n: usize, aligned: bool) -> (Vec<Point2>, Vec<[usize; 3]>) {
    if aligned {
        let m = FactorMesh::build(y, n);
        return (m.points, m.triangles);
    }
    let m = 2 * n;
    let [a, b, c] = y.endpoints;
    let mut points = Vec::new();
    let mut id = vec![vec![0usize; m + 1]; m + 1];
    for i in 0..=m {
        for k in 0..=(m - i) {
            let (s, t) = (i as f64 / m as f64, k as f64 / m as f64);
            id[i][k] = points.len();
            points.push([
                a[0] + s * (b[0] - a[0]) + t * (c[0] - a[0]),
                a[1] + s * (b[1] - a[1]) + t * (c[1] - a[1]),
            ]);
        }
    }
    let mut tris = Vec::new();
    for i in 0..m {
        for k in 0..(m - i) {
            tris.push([id[i][k], id[i + 1][k], id[i][k + 1]]);
            if i + k + 1 < m {
                tris.push([id[i + 1][k], id[i + 1][k + 1], id[i][k + 1]]);
            }
        }
    }
    for t in tris.iter_mut() {
        t.sort_unstable();
    }
    (points, tris)
}

/// Product of the two factor meshes, each prism `T₁ × T₂` cut into six
/// 4-simplices by the staircase rule on the global vertex order.
pub fn build_grid_complex(
    scene: &ProductScene,
    n: usize,
    aligned: bool,
) -> Result<GridComplex, FfError> {
    if n == 0 {
        return Err(FfError::DegenerateCell(
            "refinement must be at least 1".into(),
        ));
    }
    let (p1, t1) = factor_mesh(&scene.y1, n, aligned);
    let (p2, t2) = factor_mesh(&scene.y2, n, aligned);
    let nq = p2.len();
    let vertices: Vec<Vec4> = p1
        .iter()
        .flat_map(|a| p2.iter().map(move |b| Vec4::from_pair(*a, *b)))
        .collect();
    let mut tops = Vec::with_capacity(6 * t1.len() * t2.len());
    for a in &t1 {
        for b in &t2 {
            for path in staircase(a, b) {
                tops.push(path.iter().map(|&(p, q)| p * nq + q).collect::<Vec<_>>());
            }
        }
    }
    let simplicial = SimplicialComplex::from_simplices(vertices, tops)?;
    let poly = PolyComplex::from_simplicial(&simplicial)?;
    let roundness_min = poly.min_roundness();
    Ok(GridComplex {
        n,
        aligned,
        simplicial,
        poly,
        roundness_min,
    })
}

impl GridComplex {
    /// Transfers a 2-chain of another complex onto this grid by vertex
    /// coordinates; fails if some triangle is not a grid face.
    pub fn import_chain(&self, from: &SimplicialComplex, c: &ChainZ2) -> Result<ChainZ2, FfError> {
        Ok(from.transfer_chain_by_coords(c, &self.simplicial, 1e-9)?)
    }

    /// Whether every triangle of the `n`-refined `Y×Y ∩ D` is a 2-face.
    pub fn contains_yxy(&self, scene: &ProductScene) -> bool {
        let Ok(t) = triangulate_yxy(scene, self.n) else {
            return false;
        };
        let all = ChainZ2::from_indices(2, t.complex.len(2), 0..t.complex.len(2));
        self.import_chain(&t.complex, &all).is_ok()
    }
}

/// `Y×Y ∩ D` at refinement `n` with the quarter `[o,a₁]×[o,b₁]` replaced by
/// a tent of four triangles over its boundary square, apex lifted by `h`
/// off the quarter's plane. The boundary cycles are unchanged.
pub fn tent_surface(scene: &ProductScene, n: usize, h: f64) -> Result<Vec<Polygon>, FfError> {
    let t = triangulate_yxy(scene, n).map_err(|e| FfError::Degenerate(e.to_string()))?;
    let mut e: Vec<Polygon> = (0..t.complex.len(2))
        .filter(|&i| t.quarter_of[i] != (0, 0))
        .map(|i| Polygon(t.complex.simplex_points(2, i)))
        .collect();
    let (o1, a) = (scene.y1.center, scene.y1.endpoints[0]);
    let (o2, b) = (scene.y2.center, scene.y2.endpoints[0]);
    let d1 = scene.y1.directions[0];
    let d2 = scene.y2.directions[0];
    let mid = Vec4::from_pair(
        [
            0.5 * (o1[0] + a[0]) - h * d1[1],
            0.5 * (o1[1] + a[1]) + h * d1[0],
        ],
        [
            0.5 * (o2[0] + b[0]) - h * d2[1],
            0.5 * (o2[1] + b[1]) + h * d2[0],
        ],
    );
    let ring = [
        Vec4::from_pair(o1, o2),
        Vec4::from_pair(a, o2),
        Vec4::from_pair(a, b),
        Vec4::from_pair(o1, b),
    ];
    for k in 0..4 {
        e.push(Polygon::triangle(mid, ring[k], ring[(k + 1) % 4]));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::build_scene;

    #[test]
    fn coarse_grid_tiles_domain() {
        let sc = build_scene(0.0, 0.0);
        let g = build_grid_complex(&sc, 1, true).unwrap();
        assert_eq!(g.simplicial.len(4), 54);
        assert!((g.poly.top_volume() - sc.domain_volume()).abs() < 1e-12);
        assert!(g.roundness_min > 0.0);
        for c in g.poly.cells(4).iter().enumerate().map(|(i, _)| (4, i)) {
            assert!(g.poly.roundness(c) >= g.roundness_min);
        }
        assert!(g.contains_yxy(&sc));
        assert!(g.simplicial.check_geometric_realization(1e-9).is_ok());
    }

    #[test]
    fn unaligned_grid_misses_the_cone() {
        let sc = build_scene(0.0, 0.0);
        let g = build_grid_complex(&sc, 1, false).unwrap();
        assert!((g.poly.top_volume() - sc.domain_volume()).abs() < 1e-12);
        assert!(!g.contains_yxy(&sc));
    }
}
