//! Column reduction over GF(2) with lowest-index pivots.

use super::complex::{BoundaryMatrix, ChainZ2, SimplicialComplex};
use super::gf2::Gf2Vec;
use super::HomologyError;

/// Reduced form `R = ∂·V` of a boundary matrix: each nonzero column of `R`
/// has a distinct lowest row, and `V` records which original columns were
/// summed. Zero columns of `R` give a kernel basis.
#[derive(Debug, Clone)]
pub struct ColumnReduction {
    rows: usize,
    cols: usize,
    reduced: Vec<Gf2Vec>,
    combos: Vec<Gf2Vec>,
    pivot_col: Vec<Option<usize>>,
}

impl ColumnReduction {
    pub fn new(m: &BoundaryMatrix) -> Self {
        let cols = m.cols();
        let mut pivot_col: Vec<Option<usize>> = vec![None; m.rows];
        let mut reduced = Vec::with_capacity(cols);
        let mut combos = Vec::with_capacity(cols);
        for j in 0..cols {
            let mut r = m.columns[j].clone();
            let mut v = Gf2Vec::from_indices(cols, [j]);
            while let Some(p) = r.lowest_one() {
                match pivot_col[p] {
                    Some(k) => {
                        r.xor_assign(&reduced[k]);
                        v.xor_assign(&combos[k]);
                    }
                    None => {
                        pivot_col[p] = Some(j);
                        break;
                    }
                }
            }
            reduced.push(r);
            combos.push(v);
        }
        Self {
            rows: m.rows,
            cols,
            reduced,
            combos,
            pivot_col,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivot_col.iter().filter(|p| p.is_some()).count()
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// Basis of the kernel, one vector per zero column of the reduction.
    pub fn kernel_basis(&self) -> Vec<Gf2Vec> {
        self.reduced
            .iter()
            .zip(&self.combos)
            .filter(|(r, _)| r.is_zero())
            .map(|(_, v)| v.clone())
            .collect()
    }

    /// Some `x` with `∂x = z`, or `None` when `z` is not in the image.
    pub fn solve(&self, z: &Gf2Vec) -> Option<Gf2Vec> {
        assert_eq!(z.len(), self.rows, "right-hand side length");
        let mut r = z.clone();
        let mut x = Gf2Vec::zeros(self.cols);
        while let Some(p) = r.lowest_one() {
            let k = self.pivot_col[p]?;
            r.xor_assign(&self.reduced[k]);
            x.xor_assign(&self.combos[k]);
        }
        Some(x)
    }
}

/// Fill `x` with `∂₂x = z` for a 1-cycle `z`.
pub fn solve_boundary(k: &SimplicialComplex, z: &ChainZ2) -> Result<ChainZ2, HomologyError> {
    let red = ColumnReduction::new(&k.boundary_matrix(2));
    solve_with(k, &red, z)
}

/// As [`solve_boundary`] with a precomputed reduction of `∂₂`.
pub fn solve_with(
    k: &SimplicialComplex,
    red: &ColumnReduction,
    z: &ChainZ2,
) -> Result<ChainZ2, HomologyError> {
    if z.dim != 1 {
        return Err(HomologyError::DimensionMismatch {
            expected: 1,
            found: z.dim,
        });
    }
    if !k.boundary(z)?.is_zero() {
        return Err(HomologyError::NonCycle);
    }
    let bits = red.solve(&z.bits).ok_or(HomologyError::NotABoundary)?;
    let x = ChainZ2 { dim: 2, bits };
    debug_assert_eq!(k.boundary(&x).as_ref(), Ok(z));
    Ok(x)
}

/// Kernel basis of `∂_d` as chains.
pub fn cycle_basis(k: &SimplicialComplex, d: usize) -> Vec<ChainZ2> {
    ColumnReduction::new(&k.boundary_matrix(d))
        .kernel_basis()
        .into_iter()
        .map(|bits| ChainZ2 { dim: d, bits })
        .collect()
}

/// Rank of `H₁(K; Z/2)` = dim ker ∂₁ − rank ∂₂.
pub fn h1_rank(k: &SimplicialComplex) -> usize {
    let edges = k.len(1);
    let rank1 = if edges == 0 {
        0
    } else {
        k.boundary_matrix(1).rank()
    };
    let rank2 = if k.len(2) == 0 {
        0
    } else {
        k.boundary_matrix(2).rank()
    };
    edges - rank1 - rank2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::Vec4;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn disk(n: usize) -> SimplicialComplex {
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

    /// 3×3 grid with the middle square removed.
    fn annulus() -> (SimplicialComplex, ChainZ2) {
        let n = 3;
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
                if (i, k) == (1, 1) {
                    continue;
                }
                tris.push(vec![id(i, k), id(i + 1, k), id(i + 1, k + 1)]);
                tris.push(vec![id(i, k), id(i, k + 1), id(i + 1, k + 1)]);
            }
        }
        let k = SimplicialComplex::from_simplices(verts, tris).unwrap();
        let core = [
            [id(1, 1), id(2, 1)],
            [id(2, 1), id(2, 2)],
            [id(1, 2), id(2, 2)],
            [id(1, 1), id(1, 2)],
        ];
        let z = k
            .chain_from_tuples(1, core.iter().map(|e| e.as_slice()))
            .unwrap();
        (k, z)
    }

    /// Rank by plain row reduction over u8 rows, for cross-checking.
    fn dense_rank(m: &BoundaryMatrix) -> usize {
        let mut rows: Vec<Vec<u8>> = (0..m.rows)
            .map(|r| m.columns.iter().map(|c| c.get(r) as u8).collect())
            .collect();
        let mut rank = 0;
        for col in 0..m.cols() {
            let Some(p) = (rank..rows.len()).find(|&r| rows[r][col] == 1) else {
                continue;
            };
            rows.swap(rank, p);
            for r in 0..rows.len() {
                if r != rank && rows[r][col] == 1 {
                    let pivot = rows[rank].clone();
                    for (a, b) in rows[r].iter_mut().zip(pivot) {
                        *a ^= b;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn hand_counted_ranks() {
        // one row of two squares: four triangles, all independent
        let mut verts = Vec::new();
        for i in 0..3 {
            for k in 0..2 {
                verts.push(Vec4::new(i as f64, k as f64, 0.0, 0.0));
            }
        }
        let id = |i: usize, k: usize| i * 2 + k;
        let mut tris = Vec::new();
        for i in 0..2 {
            tris.push(vec![id(i, 0), id(i + 1, 0), id(i + 1, 1)]);
            tris.push(vec![id(i, 0), id(i, 1), id(i + 1, 1)]);
        }
        let k = SimplicialComplex::from_simplices(verts, tris).unwrap();
        let d2 = k.boundary_matrix(2);
        assert_eq!(d2.rank(), 4);
        assert_eq!(dense_rank(&d2), 4);
        for n in 1..5 {
            let k = disk(n);
            for d in 1..=2 {
                let m = k.boundary_matrix(d);
                assert_eq!(m.rank(), dense_rank(&m));
            }
        }
    }

    #[test]
    fn disk_and_annulus_homology() {
        for n in 1..4 {
            assert_eq!(h1_rank(&disk(n)), 0);
        }
        let (a, core) = annulus();
        assert_eq!(h1_rank(&a), 1);
        assert_eq!(solve_boundary(&a, &core), Err(HomologyError::NotABoundary));
    }

    #[test]
    fn disk_boundary_is_filled() {
        let k = disk(3);
        let all = ChainZ2::from_indices(2, k.len(2), 0..k.len(2));
        let z = k.boundary(&all).unwrap();
        let x = solve_boundary(&k, &z).unwrap();
        assert_eq!(k.boundary(&x).unwrap(), z);
        // ∂₂ is injective on a disk, so the fill is the whole disk
        assert_eq!(x, all);
    }

    #[test]
    fn rejects_non_cycles() {
        let k = disk(2);
        let e = ChainZ2::from_indices(1, k.len(1), [0]);
        assert_eq!(solve_boundary(&k, &e), Err(HomologyError::NonCycle));
    }

    #[test]
    fn random_boundaries_are_solved() {
        let k = disk(4);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let red = ColumnReduction::new(&k.boundary_matrix(2));
        for _ in 0..50 {
            let c =
                ChainZ2::from_indices(2, k.len(2), (0..k.len(2)).filter(|_| rng.random_bool(0.4)));
            let z = k.boundary(&c).unwrap();
            let x = solve_with(&k, &red, &z).unwrap();
            assert_eq!(k.boundary(&x).unwrap(), z);
        }
    }

    #[test]
    fn kernel_basis_is_in_kernel() {
        let (a, _) = annulus();
        let basis = cycle_basis(&a, 1);
        let m = a.boundary_matrix(1);
        assert_eq!(basis.len(), a.len(1) - m.rank());
        for c in &basis {
            assert!(a.boundary(c).unwrap().is_zero());
        }
    }
}
