//! Complexes of convex cells.

use std::collections::{BTreeSet, HashMap};

use super::cell::ConvexCell;
use super::FfError;
use crate::exterior::Vec4;
use crate::homology::SimplicialComplex;

/// Identifies a cell by dimension and index within that dimension.
pub type CellId = (usize, usize);

/// A polyhedral complex: convex cells of dimensions `0..=4` closed under
/// faces. Cells of each dimension are ordered by their sorted vertex sets.
#[derive(Debug, Clone)]
pub struct PolyComplex {
    vertices: Vec<Vec4>,
    cells: Vec<Vec<ConvexCell>>,
    index: HashMap<Vec<usize>, CellId>,
    roundness: Vec<Vec<f64>>,
    /// Lowest-index maximal cell containing each cell.
    owner: Vec<Vec<CellId>>,
    maximal: Vec<CellId>,
}

impl PolyComplex {
    /// Builds the complex generated by the given cells (vertex id lists).
    pub fn from_cells(vertices: Vec<Vec4>, cells: Vec<Vec<usize>>) -> Result<Self, FfError> {
        let mut by_dim: Vec<BTreeSet<Vec<usize>>> = vec![BTreeSet::new(); 5];
        let mut built: HashMap<Vec<usize>, ConvexCell> = HashMap::new();
        let mut stack: Vec<Vec<usize>> = cells
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c.dedup();
                c
            })
            .collect();
        while let Some(ids) = stack.pop() {
            if built.contains_key(&ids) {
                continue;
            }
            if let Some(&bad) = ids.iter().find(|&&i| i >= vertices.len()) {
                return Err(FfError::DegenerateCell(format!(
                    "vertex {bad} out of range"
                )));
            }
            let cell = ConvexCell::new(ids.clone(), &vertices)?;
            for f in &cell.facets {
                stack.push(f.vertices.clone());
            }
            by_dim[cell.dim].insert(ids.clone());
            built.insert(ids, cell);
        }
        while by_dim.len() > 1 && by_dim.last().is_some_and(BTreeSet::is_empty) {
            by_dim.pop();
        }
        let mut index = HashMap::new();
        let mut cells_out = Vec::new();
        for (d, set) in by_dim.into_iter().enumerate() {
            let mut list = Vec::with_capacity(set.len());
            for (i, ids) in set.into_iter().enumerate() {
                index.insert(ids.clone(), (d, i));
                list.push(built.remove(&ids).expect("built above"));
            }
            cells_out.push(list);
        }
        let roundness = cells_out
            .iter()
            .map(|list| {
                list.iter()
                    .map(ConvexCell::roundness)
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut complex = Self {
            vertices,
            cells: cells_out,
            index,
            roundness,
            owner: Vec::new(),
            maximal: Vec::new(),
        };
        complex.compute_owners();
        Ok(complex)
    }

    /// Every simplex of `k` becomes a cell.
    pub fn from_simplicial(k: &SimplicialComplex) -> Result<Self, FfError> {
        let tops = k
            .maximal_simplices()
            .into_iter()
            .map(|(d, i)| k.simplex(d, i).to_vec())
            .collect();
        Self::from_cells(k.vertices().to_vec(), tops)
    }

    fn compute_owners(&mut self) {
        let mut has_coface: Vec<Vec<bool>> =
            self.cells.iter().map(|l| vec![false; l.len()]).collect();
        for d in 1..self.cells.len() {
            for c in &self.cells[d] {
                for f in &c.facets {
                    let (fd, fi) = self.index[&f.vertices];
                    has_coface[fd][fi] = true;
                }
            }
        }
        let mut owner: Vec<Vec<CellId>> = self
            .cells
            .iter()
            .map(|l| vec![(usize::MAX, usize::MAX); l.len()])
            .collect();
        let mut maximal = Vec::new();
        for d in (0..self.cells.len()).rev() {
            for i in 0..self.cells[d].len() {
                if !has_coface[d][i] {
                    maximal.push((d, i));
                }
            }
        }
        maximal.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        // propagate ownership downward from maximal cells in order
        for &m in &maximal {
            let mut stack = vec![m];
            while let Some((d, i)) = stack.pop() {
                if owner[d][i].0 != usize::MAX {
                    continue;
                }
                owner[d][i] = m;
                for f in &self.cells[d][i].facets {
                    stack.push(self.index[&f.vertices]);
                }
            }
        }
        self.owner = owner;
        self.maximal = maximal;
    }

    pub fn vertices(&self) -> &[Vec4] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.cells.len() - 1
    }

    pub fn len(&self, d: usize) -> usize {
        self.cells.get(d).map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn cell(&self, id: CellId) -> &ConvexCell {
        &self.cells[id.0][id.1]
    }

    pub fn cells(&self, d: usize) -> &[ConvexCell] {
        self.cells.get(d).map_or(&[], Vec::as_slice)
    }

    pub fn roundness(&self, id: CellId) -> f64 {
        self.roundness[id.0][id.1]
    }

    /// Smallest roundness over all cells of positive dimension.
    pub fn min_roundness(&self) -> f64 {
        self.roundness
            .iter()
            .skip(1)
            .flatten()
            .copied()
            .fold(1.0, f64::min)
    }

    pub fn find(&self, vertex_ids: &[usize]) -> Option<CellId> {
        let mut key = vertex_ids.to_vec();
        key.sort_unstable();
        self.index.get(&key).copied()
    }

    /// First maximal cell (highest dimension, then index) containing `id`.
    pub fn owner(&self, id: CellId) -> CellId {
        self.owner[id.0][id.1]
    }

    /// Maximal cells, highest dimension first.
    pub fn maximal_cells(&self) -> &[CellId] {
        &self.maximal
    }

    /// Sum of the volumes of the top-dimensional cells.
    pub fn top_volume(&self) -> f64 {
        self.cells[self.dim()].iter().map(ConvexCell::volume).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_complex() {
        let v = vec![
            Vec4::new(0.0, 0.0, 0.0, 0.0),
            Vec4::new(1.0, 0.0, 0.0, 0.0),
            Vec4::new(1.0, 1.0, 0.0, 0.0),
            Vec4::new(0.0, 1.0, 0.0, 0.0),
            Vec4::new(2.0, 0.0, 0.0, 0.0),
            Vec4::new(2.0, 1.0, 0.0, 0.0),
        ];
        let k = PolyComplex::from_cells(v, vec![vec![0, 1, 2, 3], vec![1, 4, 5, 2]]).unwrap();
        assert_eq!((k.len(0), k.len(1), k.len(2)), (6, 7, 2));
        let shared = k.find(&[1, 2]).unwrap();
        assert_eq!(k.owner(shared), (2, 0));
        assert!((k.top_volume() - 2.0).abs() < 1e-12);
        assert!((k.min_roundness() - 2f64.sqrt() / 2.0).abs() < 1e-9);
    }
}
