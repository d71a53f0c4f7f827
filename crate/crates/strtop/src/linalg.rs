//! Exact dense linear algebra over the rationals, shared by homology,
//! retracts, map inversion and spectral sequences.
//!
//! Everything here is deterministic: pivots are chosen left to right in
//! declared basis order.

use num_traits::Zero;

use crate::error::AlgebraError;
use crate::graded::{Degree, GradedMap};
use crate::scalar::{self, Scalar};

pub type Matrix = Vec<Vec<Scalar>>;

/// Reduced row echelon form; returns the matrix and its pivot columns.
pub fn rref(mut m: Matrix) -> (Matrix, Vec<usize>) {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = scalar::int(1) / m[r][c].clone();
        for x in &mut m[r] {
            *x *= inv.clone();
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                for cc in 0..cols {
                    let sub = factor.clone() * m[r][cc].clone();
                    m[i][cc] -= sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

pub fn rank(m: Matrix) -> usize {
    rref(m).1.len()
}

/// Kernel basis of an `rows x cols` matrix, as vectors of length `cols`,
/// one per free column, in declared column order.
pub fn kernel_basis(m: Matrix, cols: usize) -> Vec<Vec<Scalar>> {
    let (red, pivots) = rref(m);
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![scalar::int(0); cols];
        v[free] = scalar::int(1);
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -red[row][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Dense block of a graded map on source degree `q`.
pub fn dense_block(map: &GradedMap, q: Degree) -> Matrix {
    let rows = map.target.dim(q + map.degree);
    let cols = map.source.dim(q);
    let mut m = vec![vec![scalar::int(0); cols]; rows];
    for r in 0..rows {
        for c in 0..cols {
            m[r][c] = map.entry(q, r, c);
        }
    }
    m
}

/// Inverse of a square matrix; `None` when singular.
pub fn invert_matrix(m: Matrix) -> Option<Matrix> {
    let n = m.len();
    if n == 0 {
        return Some(Vec::new());
    }
    if m[0].len() != n {
        return None;
    }
    let aug: Matrix = (0..n)
        .map(|r| {
            let mut row = m[r].clone();
            for k in 0..n {
                row.push(if k == r { scalar::int(1) } else { scalar::int(0) });
            }
            row
        })
        .collect();
    let (red, pivots) = rref(aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some((0..n).map(|r| red[r][n..].to_vec()).collect())
}

/// Inverts a graded map block by block. The inverse has degree
/// `-map.degree`; fails with the offending source degree when some block
/// is not square or not invertible.
pub fn invert_map(map: &GradedMap) -> Result<GradedMap, AlgebraError> {
    let mut out = GradedMap::zero(map.target.clone(), map.source.clone(), -map.degree);
    // every source degree with dim > 0 must map onto a block of equal size
    let degrees: std::collections::BTreeSet<Degree> = map
        .source
        .degrees()
        .chain(map.target.degrees().map(|q| q - map.degree))
        .collect();
    for q in degrees {
        let rows = map.target.dim(q + map.degree);
        let cols = map.source.dim(q);
        if rows != cols {
            return Err(AlgebraError::SingularMap { degree: q });
        }
        if cols == 0 {
            continue;
        }
        let inv =
            invert_matrix(dense_block(map, q)).ok_or(AlgebraError::SingularMap { degree: q })?;
        for (r, row) in inv.iter().enumerate() {
            for (c, coeff) in row.iter().enumerate() {
                out.add_entry_idx(q + map.degree, r, c, coeff.clone());
            }
        }
    }
    Ok(out)
}

/// Rank of one degree block.
pub fn block_rank(map: &GradedMap, q: Degree) -> usize {
    rank(dense_block(map, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::GradedSpace;
    use crate::scalar::{int, ratio};

    #[test]
    fn rref_identifies_pivots() {
        let m = vec![
            vec![int(0), int(2), int(4)],
            vec![int(0), int(1), int(2)],
        ];
        let (_, pivots) = rref(m);
        assert_eq!(pivots, vec![1]);
    }

    #[test]
    fn kernel_of_projection() {
        // [1 0 1; 0 1 1] has kernel spanned by (-1, -1, 1)
        let m = vec![
            vec![int(1), int(0), int(1)],
            vec![int(0), int(1), int(1)],
        ];
        let k = kernel_basis(m, 3);
        assert_eq!(k, vec![vec![int(-1), int(-1), int(1)]]);
    }

    #[test]
    fn invert_matrix_roundtrip() {
        let m = vec![
            vec![int(2), int(1)],
            vec![int(1), int(1)],
        ];
        let inv = invert_matrix(m.clone()).unwrap();
        assert_eq!(inv[0], vec![int(1), int(-1)]);
        assert_eq!(inv[1], vec![int(-1), int(2)]);
        assert!(invert_matrix(vec![vec![int(1), int(2)], vec![int(2), int(4)]]).is_none());
    }

    #[test]
    fn invert_map_reports_offending_degree() {
        let v = GradedSpace::from_pairs(&[(0, "a"), (1, "b"), (1, "c")]);
        let mut f = GradedMap::zero(v.clone(), v.clone(), 0);
        f.add_entry(0, "a", "a", ratio(1, 3)).unwrap();
        f.add_entry(1, "b", "b", int(1)).unwrap();
        // degree-1 block is rank 1 of size 2: singular
        match invert_map(&f) {
            Err(AlgebraError::SingularMap { degree }) => assert_eq!(degree, 1),
            other => panic!("expected singular map error, got {other:?}"),
        }
        f.add_entry(1, "c", "c", int(2)).unwrap();
        let inv = invert_map(&f).unwrap();
        assert_eq!(inv.entry(0, 0, 0), int(3));
        assert_eq!(inv.entry(1, 1, 1), ratio(1, 2));
    }
}
