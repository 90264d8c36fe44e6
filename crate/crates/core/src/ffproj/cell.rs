//! Convex cells: affine frame, facet description and roundness.

use minilp::{ComparisonOp, OptimizationDirection, Problem};
use rand::Rng;
use rand_distr::Exp1;

use super::FfError;
use crate::exterior::Vec4;

/// Supporting half-space `normal·y ≤ offset` of a facet. The normal is a
/// unit vector in the direction space of the cell.
#[derive(Debug, Clone, PartialEq)]
pub struct Facet {
    pub normal: Vec4,
    pub offset: f64,
    /// Global vertex ids on the facet, sorted.
    pub vertices: Vec<usize>,
}

impl Facet {
    pub fn eval(&self, p: &Vec4) -> f64 {
        self.normal.dot(p) - self.offset
    }
}

/// A convex polytope given by its vertices (global ids, sorted).
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexCell {
    pub vertices: Vec<usize>,
    pub points: Vec<Vec4>,
    pub dim: usize,
    pub origin: Vec4,
    /// Orthonormal basis of the direction space.
    pub basis: Vec<Vec4>,
    pub facets: Vec<Facet>,
    pub diameter: f64,
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Gram–Schmidt on `vectors`, dropping those within `tol` of the span so far.
fn orthonormal_span(vectors: &[Vec4], tol: f64) -> Vec<Vec4> {
    let mut basis: Vec<Vec4> = Vec::new();
    for v in vectors {
        let mut r = *v;
        for _ in 0..2 {
            for b in &basis {
                r = r - *b * b.dot(&r);
            }
        }
        let n = r.norm();
        if n > tol {
            basis.push(r * (1.0 / n));
        }
    }
    basis
}

impl ConvexCell {
    /// Builds the cell from its vertex ids and coordinates. Every listed
    /// point must be a vertex of the hull.
    pub fn new(mut ids: Vec<usize>, all_points: &[Vec4]) -> Result<Self, FfError> {
        ids.sort_unstable();
        ids.dedup();
        let points: Vec<Vec4> = ids.iter().map(|&i| all_points[i]).collect();
        let origin = points[0];
        let mut diameter = 0.0_f64;
        for (i, a) in points.iter().enumerate() {
            for b in &points[i + 1..] {
                diameter = diameter.max(a.distance(b));
            }
        }
        let tol = 1e-9 * diameter.max(1e-300);
        if points.len() > 1 && diameter == 0.0 {
            return Err(FfError::DegenerateCell(format!(
                "{ids:?} has coincident points"
            )));
        }
        let diffs: Vec<Vec4> = points[1..].iter().map(|p| *p - origin).collect();
        let basis = orthonormal_span(&diffs, tol);
        let dim = basis.len();
        let local =
            |p: &Vec4| -> Vec<f64> { basis.iter().map(|b| b.dot(&(*p - origin))).collect() };
        let coords: Vec<Vec<f64>> = points.iter().map(local).collect();
        let mut facets: Vec<Facet> = Vec::new();
        if dim >= 1 {
            for subset in combinations(points.len(), dim) {
                // normal in local coordinates: complement of the subset's span
                let base = &coords[subset[0]];
                let span: Vec<Vec4> = subset[1..]
                    .iter()
                    .map(|&i| {
                        let mut v = [0.0; 4];
                        for k in 0..dim {
                            v[k] = coords[i][k] - base[k];
                        }
                        Vec4(v)
                    })
                    .collect();
                let span_basis = orthonormal_span(&span, tol);
                if span_basis.len() != dim - 1 {
                    continue;
                }
                let mut candidates: Vec<Vec4> = (0..dim).map(Vec4::basis).collect();
                for c in candidates.iter_mut() {
                    for _ in 0..2 {
                        for b in &span_basis {
                            *c = *c - *b * b.dot(c);
                        }
                    }
                }
                let Some(n_local) = candidates
                    .into_iter()
                    .max_by(|a, b| a.norm().total_cmp(&b.norm()))
                    .and_then(|c| c.normalized())
                else {
                    continue;
                };
                let normal = basis
                    .iter()
                    .enumerate()
                    .fold(Vec4::ZERO, |acc, (k, b)| acc + *b * n_local.0[k]);
                let offset = normal.dot(&points[subset[0]]);
                let vals: Vec<f64> = points.iter().map(|p| normal.dot(p) - offset).collect();
                let (normal, offset, vals) = if vals.iter().all(|&v| v <= tol) {
                    (normal, offset, vals)
                } else if vals.iter().all(|&v| v >= -tol) {
                    (-normal, -offset, vals.iter().map(|v| -v).collect())
                } else {
                    continue;
                };
                let on: Vec<usize> = vals
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| v.abs() <= tol)
                    .map(|(i, _)| ids[i])
                    .collect();
                if on.len() == points.len() || facets.iter().any(|f| f.vertices == on) {
                    continue;
                }
                facets.push(Facet {
                    normal,
                    offset,
                    vertices: on,
                });
            }
        }
        for (i, p) in ids.iter().zip(&points) {
            let on = facets.iter().filter(|f| f.vertices.contains(i)).count();
            if dim >= 1 && on < dim {
                return Err(FfError::DegenerateCell(format!(
                    "point {p:?} is not a vertex of {ids:?}"
                )));
            }
        }
        Ok(Self {
            vertices: ids,
            points,
            dim,
            origin,
            basis,
            facets,
            diameter,
        })
    }

    /// Local coordinates in the cell's affine chart.
    pub fn local(&self, p: &Vec4) -> Vec<f64> {
        self.basis
            .iter()
            .map(|b| b.dot(&(*p - self.origin)))
            .collect()
    }

    pub fn from_local(&self, x: &[f64]) -> Vec4 {
        self.basis
            .iter()
            .zip(x)
            .fold(self.origin, |acc, (b, c)| acc + *b * *c)
    }

    /// Distance from `p` to the affine hull.
    pub fn hull_distance(&self, p: &Vec4) -> f64 {
        p.distance(&self.from_local(&self.local(p)))
    }

    pub fn contains(&self, p: &Vec4, tol: f64) -> bool {
        self.hull_distance(p) <= tol && self.facets.iter().all(|f| f.eval(p) <= tol)
    }

    /// Barycenter of the vertices.
    pub fn centroid(&self) -> Vec4 {
        let n = self.points.len() as f64;
        self.points
            .iter()
            .fold(Vec4::ZERO, |a, p| a + *p * (1.0 / n))
    }

    /// Interior point with uniform Dirichlet weights on the vertices.
    pub fn sample_interior<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec4 {
        let w: Vec<f64> = self
            .points
            .iter()
            .map(|_| rng.sample::<f64, _>(Exp1))
            .collect();
        let total: f64 = w.iter().sum();
        self.points
            .iter()
            .zip(&w)
            .fold(Vec4::ZERO, |a, (p, x)| a + *p * (x / total))
    }

    /// Radius of the largest ball inside the cell within its affine hull.
    pub fn inradius(&self) -> Result<f64, FfError> {
        if self.dim == 0 {
            return Ok(0.0);
        }
        let mut lp = Problem::new(OptimizationDirection::Maximize);
        let xs: Vec<_> = (0..self.dim)
            .map(|_| lp.add_var(0.0, (f64::NEG_INFINITY, f64::INFINITY)))
            .collect();
        let r = lp.add_var(1.0, (0.0, f64::INFINITY));
        for f in &self.facets {
            let n_local: Vec<f64> = self.basis.iter().map(|b| b.dot(&f.normal)).collect();
            let rhs = f.offset - f.normal.dot(&self.origin);
            let mut row: Vec<_> = xs.iter().zip(&n_local).map(|(&x, &c)| (x, c)).collect();
            row.push((r, 1.0));
            lp.add_constraint(row, ComparisonOp::Le, rhs);
        }
        lp.solve()
            .map(|s| s.objective())
            .map_err(|e| FfError::DegenerateCell(format!("inradius LP failed: {e}")))
    }

    /// Radius of the smallest ball containing the cell.
    pub fn circumradius(&self) -> f64 {
        let n = self.points.len();
        let mut best = f64::INFINITY;
        for k in 1..=(self.dim + 1).min(n) {
            for subset in combinations(n, k) {
                let Some((c, r)) =
                    circumsphere(&subset.iter().map(|&i| self.points[i]).collect::<Vec<_>>())
                else {
                    continue;
                };
                if r >= best {
                    continue;
                }
                if self
                    .points
                    .iter()
                    .all(|p| p.distance(&c) <= r * (1.0 + 1e-12) + 1e-15)
                {
                    best = r;
                }
            }
        }
        best
    }

    /// Inradius over circumradius, so the value lies in (0, 1]; 1 for a point.
    pub fn roundness(&self) -> Result<f64, FfError> {
        if self.dim == 0 {
            return Ok(1.0);
        }
        let r = self.inradius()? / self.circumradius();
        if r > 0.0 && r.is_finite() {
            Ok(r.min(1.0))
        } else {
            Err(FfError::DegenerateCell(format!(
                "{:?} has zero roundness",
                self.vertices
            )))
        }
    }

    /// `dim`-volume of the cell (fan decomposition from the first vertex over
    /// facets not containing it).
    pub fn volume(&self) -> f64 {
        if self.dim == 0 {
            return 1.0;
        }
        if self.points.len() == self.dim + 1 {
            return crate::homology::simplex_volume(&self.points);
        }
        // pyramid formula: Σ over facets of (facet volume · distance) / dim
        let c = self.centroid();
        self.facets
            .iter()
            .map(|f| {
                let ids = f.vertices.clone();
                let face =
                    ConvexCell::new(ids, &self.global_points()).expect("facet of a valid cell");
                face.volume() * (-f.eval(&c)) / self.dim as f64
            })
            .sum()
    }

    fn global_points(&self) -> Vec<Vec4> {
        let max = self.vertices.iter().copied().max().unwrap_or(0);
        let mut pts = vec![Vec4::ZERO; max + 1];
        for (i, p) in self.vertices.iter().zip(&self.points) {
            pts[*i] = *p;
        }
        pts
    }
}

/// Center and radius of the sphere through affinely independent points,
/// inside their affine hull.
fn circumsphere(points: &[Vec4]) -> Option<(Vec4, f64)> {
    let p0 = points[0];
    let k = points.len() - 1;
    if k == 0 {
        return Some((p0, 0.0));
    }
    let e: Vec<Vec4> = points[1..].iter().map(|p| *p - p0).collect();
    let g = nalgebra::DMatrix::from_fn(k, k, |i, j| e[i].dot(&e[j]));
    let rhs = nalgebra::DVector::from_fn(k, |i, _| 0.5 * e[i].dot(&e[i]));
    let alpha = g.lu().solve(&rhs)?;
    let c = e
        .iter()
        .zip(alpha.iter())
        .fold(p0, |acc, (v, a)| acc + *v * *a);
    let r = c.distance(&p0);
    r.is_finite().then_some((c, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn roundness_examples() {
        let pts = vec![Vec4::new(0.3, 0.1, 0.0, 2.0)];
        assert_eq!(
            ConvexCell::new(vec![0], &pts).unwrap().roundness().unwrap(),
            1.0
        );
        let h = 3f64.sqrt() / 2.0;
        let tri = vec![Vec4::ZERO, Vec4::basis(0), Vec4::new(0.5, h, 0.0, 0.0)];
        let c = ConvexCell::new(vec![0, 1, 2], &tri).unwrap();
        assert_eq!(c.dim, 2);
        assert_eq!(c.facets.len(), 3);
        assert!((c.roundness().unwrap() - 0.5).abs() < 1e-9);
        let sq = vec![
            Vec4::new(0.0, 0.0, 1.0, 1.0),
            Vec4::new(1.0, 0.0, 1.0, 1.0),
            Vec4::new(1.0, 1.0, 1.0, 1.0),
            Vec4::new(0.0, 1.0, 1.0, 1.0),
        ];
        let c = ConvexCell::new(vec![0, 1, 2, 3], &sq).unwrap();
        assert_eq!(c.facets.len(), 4);
        assert!((c.roundness().unwrap() - 2f64.sqrt() / 2.0).abs() < 1e-9);
        assert!((c.volume() - 1.0).abs() < 1e-12);
        let seg = vec![Vec4::ZERO, Vec4::new(0.0, 2.0, 0.0, 0.0)];
        assert!(
            (ConvexCell::new(vec![0, 1], &seg)
                .unwrap()
                .roundness()
                .unwrap()
                - 1.0)
                .abs()
                < 1e-9
        );
    }

    #[test]
    fn rejects_non_vertices() {
        let pts = vec![Vec4::ZERO, Vec4::basis(0), Vec4::basis(0) * 0.5];
        assert!(ConvexCell::new(vec![0, 1, 2], &pts).is_err());
        let dup = vec![Vec4::ZERO, Vec4::ZERO];
        assert!(ConvexCell::new(vec![0, 1], &dup).is_err());
    }

    #[test]
    fn simplex_inradius_matches_volume_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let pts: Vec<Vec4> = (0..5)
                .map(|_| Vec4(std::array::from_fn(|_| rng.random_range(-1.0..1.0))))
                .collect();
            let c = ConvexCell::new((0..5).collect(), &pts).unwrap();
            assert_eq!(c.facets.len(), 5);
            let facet_vol: f64 = c
                .facets
                .iter()
                .map(|f| {
                    crate::homology::simplex_volume(
                        &f.vertices.iter().map(|&i| pts[i]).collect::<Vec<_>>(),
                    )
                })
                .sum();
            let r = 4.0 * c.volume() / facet_vol;
            assert!((c.inradius().unwrap() - r).abs() < 1e-9 * r.max(1.0));
            let p = c.sample_interior(&mut rng);
            assert!(c.contains(&p, 1e-12));
            assert!(c.roundness().unwrap() <= 1.0);
        }
    }
}
