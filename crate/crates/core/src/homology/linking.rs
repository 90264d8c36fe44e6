//! GF(2) algebra of the linking circles `s_ik` around the quarter-planes
//! `[o₁,a_i) × [o₂,b_k)`.
//!
//! In the complement of `Y×Y` the circles satisfy `s_i1+s_i2+s_i3 = 0` and
//! `s_1k+s_2k+s_3k = 0`, leaving `{s11, s12, s21, s22}` as a basis.

use serde::Serialize;

/// Coefficients of a combination `Σ c_ik s_ik` (zero-based, entries 0 or 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct LinkingClass(pub [[u8; 3]; 3]);

impl LinkingClass {
    pub fn circle(i: usize, k: usize) -> Self {
        let mut c = [[0; 3]; 3];
        c[i][k] = 1;
        LinkingClass(c)
    }

    pub fn add(&self, other: &LinkingClass) -> LinkingClass {
        LinkingClass(std::array::from_fn(|i| {
            std::array::from_fn(|k| (self.0[i][k] ^ other.0[i][k]) & 1)
        }))
    }
}

/// Coordinates over the basis `(s11, s12, s21, s22)` in that order.
pub type BasisCoords = [u8; 4];

/// Rewrites a combination in the basis using `s_i3 = s_i1 + s_i2`,
/// `s_3k = s_1k + s_2k`: the coefficient of `s_ik` (`i,k ≤ 2`) becomes
/// `c_ik + c_i3 + c_3k + c_33` mod 2.
pub fn linking_reduce(c: &LinkingClass) -> BasisCoords {
    let m = &c.0;
    let coord = |i: usize, k: usize| (m[i][k] ^ m[i][2] ^ m[2][k] ^ m[2][2]) & 1;
    [coord(0, 0), coord(0, 1), coord(1, 0), coord(1, 1)]
}

/// The five circles that a chain bounding `s11` may cross, in the order
/// `δ13, δ23, δ33, δ31, δ32` (one-based labels).
pub const OBSTRUCTION_CIRCLES: [(usize, usize); 5] = [(0, 2), (1, 2), (2, 2), (2, 0), (2, 1)];

/// `[s11] + Σ δ_ik s_ik` for a bit pattern `delta` over
/// [`OBSTRUCTION_CIRCLES`] (bit `b` ↔ entry `b`).
pub fn obstruction_combination(delta: u8, include_s11: bool) -> LinkingClass {
    let mut c = if include_s11 {
        LinkingClass::circle(0, 0)
    } else {
        LinkingClass::default()
    };
    for (b, &(i, k)) in OBSTRUCTION_CIRCLES.iter().enumerate() {
        if delta >> b & 1 == 1 {
            c = c.add(&LinkingClass::circle(i, k));
        }
    }
    c
}

/// All `δ ∈ GF(2)⁵` for which the reduced combination vanishes.
pub fn obstruction_solutions(include_s11: bool) -> Vec<u8> {
    (0u8..32)
        .filter(|&d| linking_reduce(&obstruction_combination(d, include_s11)) == [0; 4])
        .collect()
}

/// `δ` patterns solving the single basis equation `coordinate` (0..4).
pub fn single_equation_solutions(coordinate: usize) -> Vec<u8> {
    (0u8..32)
        .filter(|&d| linking_reduce(&obstruction_combination(d, true))[coordinate] == 0)
        .collect()
}

/// Enumerates all 32 patterns and confirms that `s11` cannot be cancelled by
/// the five remaining circles, while the homogeneous system is solvable.
pub fn linking_obstruction() -> bool {
    obstruction_solutions(true).is_empty() && obstruction_solutions(false).contains(&0)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The six row/column relations and their span (as 9-bit masks).
    fn relation_span() -> Vec<u16> {
        let bit = |i: usize, k: usize| 1u16 << (3 * i + k);
        let rels: Vec<u16> = (0..3)
            .map(|i| bit(i, 0) | bit(i, 1) | bit(i, 2))
            .chain((0..3).map(|k| bit(0, k) | bit(1, k) | bit(2, k)))
            .collect();
        let mut span = vec![0u16];
        for r in rels {
            let more: Vec<u16> = span.iter().map(|s| s ^ r).collect();
            for m in more {
                if !span.contains(&m) {
                    span.push(m);
                }
            }
        }
        span
    }

    fn mask(c: &LinkingClass) -> u16 {
        let mut m = 0;
        for i in 0..3 {
            for k in 0..3 {
                m |= (c.0[i][k] as u16) << (3 * i + k);
            }
        }
        m
    }

    fn embed(b: BasisCoords) -> LinkingClass {
        let mut c = [[0; 3]; 3];
        c[0][0] = b[0];
        c[0][1] = b[1];
        c[1][0] = b[2];
        c[1][1] = b[3];
        LinkingClass(c)
    }

    #[test]
    fn reduction_examples() {
        assert_eq!(linking_reduce(&LinkingClass::circle(0, 2)), [1, 1, 0, 0]);
        assert_eq!(linking_reduce(&LinkingClass::circle(2, 2)), [1, 1, 1, 1]);
        assert_eq!(linking_reduce(&LinkingClass::default()), [0; 4]);
    }

    #[test]
    fn relations_have_rank_five() {
        assert_eq!(relation_span().len(), 32);
    }

    #[test]
    fn reduction_differs_by_relations_only() {
        let span = relation_span();
        for m in 0u16..512 {
            let c = LinkingClass(std::array::from_fn(|i| {
                std::array::from_fn(|k| (m >> (3 * i + k) & 1) as u8)
            }));
            let diff = mask(&c.add(&embed(linking_reduce(&c))));
            assert!(span.contains(&diff), "{m:09b}");
        }
    }

    #[test]
    fn obstruction_enumeration() {
        assert!(obstruction_solutions(true).is_empty());
        assert!(obstruction_solutions(false).contains(&0));
        for eq in 0..4 {
            assert!(!single_equation_solutions(eq).is_empty());
        }
        assert!(linking_obstruction());
    }
}
