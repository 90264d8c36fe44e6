//! Embedded simplicial complexes, GF(2) chains and boundary matrices.

use std::collections::{BTreeSet, HashMap};

use minilp::{ComparisonOp, OptimizationDirection, Problem};

use super::gf2::Gf2Vec;
use super::HomologyError;
use crate::exterior::Vec4;

/// Largest simplex dimension stored.
pub const MAX_DIM: usize = 4;

/// A finite simplicial complex embedded in R⁴. Simplices of each dimension
/// are sorted vertex tuples kept in lexicographic order, so indices are
/// deterministic functions of the input. Every vertex is a 0-simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplicialComplex {
    vertices: Vec<Vec4>,
    simplices: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
    faces: Vec<Vec<Vec<usize>>>,
}

impl SimplicialComplex {
    /// Closes `simplices` under taking faces.
    pub fn from_simplices(
        vertices: Vec<Vec4>,
        simplices: impl IntoIterator<Item = Vec<usize>>,
    ) -> Result<Self, HomologyError> {
        let nv = vertices.len();
        if let Some(i) = vertices.iter().position(|v| !v.is_finite()) {
            return Err(HomologyError::InvalidSimplex(format!(
                "vertex {i} is not finite"
            )));
        }
        let mut sets: Vec<BTreeSet<Vec<usize>>> = vec![BTreeSet::new(); MAX_DIM + 1];
        for i in 0..nv {
            sets[0].insert(vec![i]);
        }
        for mut s in simplices {
            s.sort_unstable();
            if s.is_empty() || s.len() > MAX_DIM + 1 {
                return Err(HomologyError::InvalidSimplex(format!(
                    "{s:?} has unsupported size"
                )));
            }
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(HomologyError::InvalidSimplex(format!(
                    "{s:?} repeats a vertex"
                )));
            }
            if let Some(&bad) = s.iter().find(|&&i| i >= nv) {
                return Err(HomologyError::InvalidSimplex(format!(
                    "{s:?} references vertex {bad} of {nv}"
                )));
            }
            if !affinely_independent(&s.iter().map(|&i| vertices[i]).collect::<Vec<_>>()) {
                return Err(HomologyError::InvalidSimplex(format!(
                    "{s:?} is degenerate"
                )));
            }
            insert_with_faces(&mut sets, s);
        }
        while sets.len() > 1 && sets.last().is_some_and(BTreeSet::is_empty) {
            sets.pop();
        }
        let simplices: Vec<Vec<Vec<usize>>> =
            sets.into_iter().map(|s| s.into_iter().collect()).collect();
        let index: Vec<HashMap<Vec<usize>, usize>> = simplices
            .iter()
            .map(|list| {
                list.iter()
                    .enumerate()
                    .map(|(i, s)| (s.clone(), i))
                    .collect()
            })
            .collect();
        let mut faces = vec![Vec::new()];
        for d in 1..simplices.len() {
            faces.push(
                simplices[d]
                    .iter()
                    .map(|s| {
                        (0..s.len())
                            .map(|k| {
                                let mut f = s.clone();
                                f.remove(k);
                                index[d - 1][&f]
                            })
                            .collect()
                    })
                    .collect(),
            );
        }
        Ok(Self {
            vertices,
            simplices,
            index,
            faces,
        })
    }

    pub fn vertices(&self) -> &[Vec4] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> Vec4 {
        self.vertices[i]
    }

    /// Top dimension present.
    pub fn dim(&self) -> usize {
        self.simplices.len() - 1
    }

    /// Number of `d`-simplices (0 above the top dimension).
    pub fn len(&self, d: usize) -> usize {
        self.simplices.get(d).map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn simplices(&self, d: usize) -> &[Vec<usize>] {
        self.simplices.get(d).map_or(&[], Vec::as_slice)
    }

    pub fn simplex(&self, d: usize, i: usize) -> &[usize] {
        &self.simplices[d][i]
    }

    pub fn simplex_points(&self, d: usize, i: usize) -> Vec<Vec4> {
        self.simplices[d][i]
            .iter()
            .map(|&v| self.vertices[v])
            .collect()
    }

    /// Index of a simplex given by its vertices in any order.
    pub fn index_of(&self, s: &[usize]) -> Option<usize> {
        let mut key = s.to_vec();
        key.sort_unstable();
        self.index
            .get(key.len().checked_sub(1)?)?
            .get(&key)
            .copied()
    }

    /// Indices of the codimension-one faces of the `d`-simplex `i`.
    pub fn faces(&self, d: usize, i: usize) -> &[usize] {
        &self.faces[d][i]
    }

    /// Nearest vertex within `tol`, by linear scan.
    pub fn locate_vertex(&self, p: &Vec4, tol: f64) -> Option<usize> {
        self.vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (i, v.distance(p)))
            .filter(|&(_, d)| d <= tol)
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(i, _)| i)
    }

    /// `d`-dimensional volume of simplex `i`.
    pub fn simplex_volume(&self, d: usize, i: usize) -> f64 {
        simplex_volume(&self.simplex_points(d, i))
    }

    pub fn triangle_area(&self, i: usize) -> f64 {
        self.simplex_volume(2, i)
    }

    /// Area of the support of a 2-chain, each simplex once.
    pub fn chain_area(&self, c: &ChainZ2) -> f64 {
        assert_eq!(c.dim, 2, "area needs a 2-chain");
        c.support().map(|t| self.triangle_area(t)).sum()
    }

    pub fn chain_len_matches(&self, c: &ChainZ2) -> bool {
        c.len() == self.len(c.dim)
    }

    /// GF(2) boundary of a chain, computed from the stored face lists.
    pub fn boundary(&self, c: &ChainZ2) -> Result<ChainZ2, HomologyError> {
        if c.dim == 0 || c.dim > self.dim() {
            return Err(HomologyError::DimensionMismatch {
                expected: 1,
                found: c.dim,
            });
        }
        if !self.chain_len_matches(c) {
            return Err(HomologyError::LengthMismatch {
                expected: self.len(c.dim),
                found: c.len(),
            });
        }
        let mut out = ChainZ2::zero(c.dim - 1, self.len(c.dim - 1));
        for s in c.support() {
            for &f in &self.faces[c.dim][s] {
                out.bits.flip(f);
            }
        }
        Ok(out)
    }

    pub fn boundary_matrix(&self, d: usize) -> BoundaryMatrix {
        assert!(d >= 1, "boundary matrices start at d = 1");
        let rows = self.len(d - 1);
        let columns = (0..self.len(d))
            .map(|s| Gf2Vec::from_indices(rows, self.faces[d][s].iter().copied()))
            .collect();
        BoundaryMatrix { d, rows, columns }
    }

    /// Chain of dimension `dim` from vertex tuples; unknown tuples are errors.
    pub fn chain_from_tuples<'a>(
        &self,
        dim: usize,
        tuples: impl IntoIterator<Item = &'a [usize]>,
    ) -> Result<ChainZ2, HomologyError> {
        let mut c = ChainZ2::zero(dim, self.len(dim));
        for t in tuples {
            let i = self
                .index_of(t)
                .filter(|_| t.len() == dim + 1)
                .ok_or_else(|| HomologyError::InvalidSimplex(format!("{t:?} not in complex")))?;
            c.bits.flip(i);
        }
        Ok(c)
    }

    /// Subcomplex generated by the `d`-simplices in `c` (plus all vertices,
    /// so vertex ids are shared with `self`).
    pub fn subcomplex(&self, c: &ChainZ2) -> SimplicialComplex {
        Self::from_simplices(
            self.vertices.clone(),
            c.support().map(|i| self.simplices[c.dim][i].clone()),
        )
        .expect("faces of a valid complex")
    }

    /// Re-expresses a chain of `self` in `target` through shared vertex ids.
    pub fn transfer_chain(
        &self,
        c: &ChainZ2,
        target: &SimplicialComplex,
    ) -> Result<ChainZ2, HomologyError> {
        target.chain_from_tuples(
            c.dim,
            c.support().map(|i| self.simplices[c.dim][i].as_slice()),
        )
    }

    /// Re-expresses a chain in `target` by matching vertex coordinates.
    pub fn transfer_chain_by_coords(
        &self,
        c: &ChainZ2,
        target: &SimplicialComplex,
        tol: f64,
    ) -> Result<ChainZ2, HomologyError> {
        let mut map = HashMap::new();
        let mut tuples = Vec::new();
        for i in c.support() {
            let mut t = Vec::new();
            for &v in &self.simplices[c.dim][i] {
                let id = match map.get(&v) {
                    Some(&id) => id,
                    None => {
                        let id = target
                            .locate_vertex(&self.vertices[v], tol)
                            .ok_or_else(|| {
                                HomologyError::InvalidSimplex(format!("vertex {v} has no match"))
                            })?;
                        map.insert(v, id);
                        id
                    }
                };
                t.push(id);
            }
            tuples.push(t);
        }
        target.chain_from_tuples(c.dim, tuples.iter().map(Vec::as_slice))
    }

    /// Maximal simplices (faces of nothing larger), as `(dim, index)`.
    pub fn maximal_simplices(&self) -> Vec<(usize, usize)> {
        let mut covered: Vec<Vec<bool>> =
            (0..=self.dim()).map(|d| vec![false; self.len(d)]).collect();
        for d in 1..=self.dim() {
            for s in 0..self.len(d) {
                for &f in &self.faces[d][s] {
                    covered[d - 1][f] = true;
                }
            }
        }
        let mut out = Vec::new();
        for (d, row) in covered.iter().enumerate() {
            for (i, &c) in row.iter().enumerate() {
                if !c {
                    out.push((d, i));
                }
            }
        }
        out
    }

    /// Pairwise check that any two maximal simplices meet exactly in their
    /// common face, so that interiors of distinct simplices are disjoint.
    /// Quadratic with an LP per overlapping pair; meant for small complexes.
    pub fn check_geometric_realization(&self, tol: f64) -> Result<(), HomologyError> {
        let maximal = self.maximal_simplices();
        let boxes: Vec<([f64; 4], [f64; 4])> = maximal
            .iter()
            .map(|&(d, i)| bounding_box(&self.simplex_points(d, i)))
            .collect();
        for a in 0..maximal.len() {
            for b in (a + 1)..maximal.len() {
                if !boxes_overlap(&boxes[a], &boxes[b], tol) {
                    continue;
                }
                let sa = self.simplex(maximal[a].0, maximal[a].1);
                let sb = self.simplex(maximal[b].0, maximal[b].1);
                let excess = improper_overlap(&self.vertices, sa, sb);
                if excess > tol {
                    return Err(HomologyError::InvalidSimplex(format!(
                        "{sa:?} and {sb:?} overlap beyond their common face"
                    )));
                }
            }
        }
        Ok(())
    }
}

fn insert_with_faces(sets: &mut [BTreeSet<Vec<usize>>], s: Vec<usize>) {
    let d = s.len() - 1;
    if sets[d].contains(&s) {
        return;
    }
    if d > 0 {
        for k in 0..s.len() {
            let mut f = s.clone();
            f.remove(k);
            insert_with_faces(sets, f);
        }
    }
    sets[d].insert(s);
}

fn bounding_box(points: &[Vec4]) -> ([f64; 4], [f64; 4]) {
    let mut lo = [f64::INFINITY; 4];
    let mut hi = [f64::NEG_INFINITY; 4];
    for p in points {
        for k in 0..4 {
            lo[k] = lo[k].min(p.0[k]);
            hi[k] = hi[k].max(p.0[k]);
        }
    }
    (lo, hi)
}

fn boxes_overlap(a: &([f64; 4], [f64; 4]), b: &([f64; 4], [f64; 4]), tol: f64) -> bool {
    (0..4).all(|k| a.0[k] <= b.1[k] + tol && b.0[k] <= a.1[k] + tol)
}

/// Largest total barycentric weight that a common point of `conv(A)` and
/// `conv(B)` can put on vertices of `A` outside `B`. Zero exactly when the
/// two simplices intersect in `conv(A ∩ B)`.
fn improper_overlap(vertices: &[Vec4], a: &[usize], b: &[usize]) -> f64 {
    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let la: Vec<_> = a
        .iter()
        .map(|v| lp.add_var(if b.contains(v) { 0.0 } else { 1.0 }, (0.0, 1.0)))
        .collect();
    let lb: Vec<_> = b.iter().map(|_| lp.add_var(0.0, (0.0, 1.0))).collect();
    lp.add_constraint(
        la.iter().map(|&v| (v, 1.0)).collect::<Vec<_>>(),
        ComparisonOp::Eq,
        1.0,
    );
    lp.add_constraint(
        lb.iter().map(|&v| (v, 1.0)).collect::<Vec<_>>(),
        ComparisonOp::Eq,
        1.0,
    );
    for k in 0..4 {
        let mut row: Vec<_> = a
            .iter()
            .zip(&la)
            .map(|(&v, &x)| (x, vertices[v].0[k]))
            .collect();
        row.extend(b.iter().zip(&lb).map(|(&v, &x)| (x, -vertices[v].0[k])));
        lp.add_constraint(row, ComparisonOp::Eq, 0.0);
    }
    match lp.solve() {
        Ok(sol) => sol.objective(),
        Err(_) => 0.0,
    }
}

/// `k`-volume of the simplex on `k+1` points (Gram determinant).
pub fn simplex_volume(points: &[Vec4]) -> f64 {
    let k = points.len().saturating_sub(1);
    if k == 0 {
        return 1.0;
    }
    let edges: Vec<Vec4> = points[1..].iter().map(|p| *p - points[0]).collect();
    let gram = nalgebra::DMatrix::from_fn(k, k, |i, j| edges[i].dot(&edges[j]));
    let det = gram.determinant().max(0.0);
    let fact: f64 = (1..=k).map(|i| i as f64).product();
    det.sqrt() / fact
}

/// Area of the triangle `abc` in R⁴.
pub fn triangle_area(a: &Vec4, b: &Vec4, c: &Vec4) -> f64 {
    // |u∧v| from its components; the Gram form cancels badly on slivers
    let (u, v) = ((*b - *a).0, (*c - *a).0);
    let mut s = 0.0;
    for i in 0..4 {
        for j in i + 1..4 {
            s += (u[i] * v[j] - u[j] * v[i]).powi(2);
        }
    }
    0.5 * s.sqrt()
}

fn affinely_independent(points: &[Vec4]) -> bool {
    let k = points.len() - 1;
    if k == 0 {
        return true;
    }
    let edges: Vec<Vec4> = points[1..].iter().map(|p| *p - points[0]).collect();
    let scale = edges.iter().map(Vec4::norm).fold(0.0, f64::max);
    if scale == 0.0 {
        return false;
    }
    let m = nalgebra::DMatrix::from_fn(4, k, |i, j| edges[j].0[i] / scale);
    let sv = m.singular_values();
    sv.iter().all(|&s| s > 1e-10)
}

/// A chain over GF(2) on the `dim`-simplices of some complex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChainZ2 {
    pub dim: usize,
    pub bits: Gf2Vec,
}

impl ChainZ2 {
    pub fn zero(dim: usize, len: usize) -> Self {
        Self {
            dim,
            bits: Gf2Vec::zeros(len),
        }
    }

    pub fn from_indices(dim: usize, len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        Self {
            dim,
            bits: Gf2Vec::from_indices(len, indices),
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.bits.is_zero()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.bits.get(i)
    }

    /// Number of simplices in the support.
    pub fn weight(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter_ones()
    }

    /// Sum over GF(2).
    pub fn add(&self, other: &ChainZ2) -> ChainZ2 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut out = self.clone();
        out.bits.xor_assign(&other.bits);
        out
    }

    pub fn add_assign(&mut self, other: &ChainZ2) {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.bits.xor_assign(&other.bits);
    }
}

/// Matrix of `∂_d` over GF(2), stored by columns.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryMatrix {
    pub d: usize,
    pub rows: usize,
    pub columns: Vec<Gf2Vec>,
}

impl BoundaryMatrix {
    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn apply(&self, x: &Gf2Vec) -> Gf2Vec {
        let mut out = Gf2Vec::zeros(self.rows);
        for j in x.iter_ones() {
            out.xor_assign(&self.columns[j]);
        }
        out
    }

    /// `self ∘ other`, column by column.
    pub fn compose(&self, other: &BoundaryMatrix) -> Vec<Gf2Vec> {
        other.columns.iter().map(|c| self.apply(c)).collect()
    }

    pub fn rank(&self) -> usize {
        super::reduce::ColumnReduction::new(self).rank()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn grid_disk(n: usize) -> SimplicialComplex {
        let mut verts = Vec::new();
        for i in 0..=n {
            for k in 0..=n {
                verts.push(Vec4::new(i as f64, k as f64, 0.0, 0.0));
            }
        }
        let id = |i: usize, k: usize| i * (n + 1) + k;
        let mut tris = Vec::new();
        for i in 0..n {
            for k in 0..n {
                tris.push(vec![id(i, k), id(i + 1, k), id(i + 1, k + 1)]);
                tris.push(vec![id(i, k), id(i, k + 1), id(i + 1, k + 1)]);
            }
        }
        SimplicialComplex::from_simplices(verts, tris).unwrap()
    }

    #[test]
    fn closure_and_ordering() {
        let k = SimplicialComplex::from_simplices(
            vec![Vec4::ZERO, Vec4::basis(0), Vec4::basis(1)],
            vec![vec![2, 0, 1]],
        )
        .unwrap();
        assert_eq!((k.len(0), k.len(1), k.len(2)), (3, 3, 1));
        assert_eq!(k.simplices(1), &[vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(k.index_of(&[2, 1]), Some(2));
        assert_eq!(k.boundary_matrix(2).columns[0].count_ones(), 3);
        assert!((k.triangle_area(0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_simplices() {
        let v = vec![Vec4::ZERO, Vec4::basis(0), Vec4::basis(0) * 2.0];
        assert!(SimplicialComplex::from_simplices(v.clone(), vec![vec![0, 1, 2]]).is_err());
        assert!(SimplicialComplex::from_simplices(v.clone(), vec![vec![0, 0]]).is_err());
        assert!(SimplicialComplex::from_simplices(v, vec![vec![0, 7]]).is_err());
    }

    #[test]
    fn boundary_of_boundary_vanishes() {
        let k = grid_disk(3);
        let d1 = k.boundary_matrix(1);
        let d2 = k.boundary_matrix(2);
        assert!(d1.compose(&d2).iter().all(Gf2Vec::is_zero));
    }

    #[test]
    fn square_grid_rank() {
        let k = grid_disk(2);
        assert_eq!(k.boundary_matrix(2).rank(), 8);
        // ∂₂ of a disk is injective; ∂₁ has rank V − 1
        assert_eq!(k.boundary_matrix(1).rank(), k.len(0) - 1);
    }

    #[test]
    fn realization_check() {
        assert!(grid_disk(2).check_geometric_realization(1e-9).is_ok());
        // two triangles crossing in the plane
        let v = vec![
            Vec4::new(0.0, 0.0, 0.0, 0.0),
            Vec4::new(2.0, 0.0, 0.0, 0.0),
            Vec4::new(0.0, 2.0, 0.0, 0.0),
            Vec4::new(1.0, 1.0, 0.0, 0.0) * 0.2,
            Vec4::new(3.0, 3.0, 0.0, 0.0),
            Vec4::new(3.0, -1.0, 0.0, 0.0),
        ];
        let k = SimplicialComplex::from_simplices(v, vec![vec![0, 1, 2], vec![3, 4, 5]]).unwrap();
        assert!(k.check_geometric_realization(1e-9).is_err());
    }
}
