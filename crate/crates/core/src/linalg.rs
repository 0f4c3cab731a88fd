//! Small exact linear algebra over the rationals: row reduction, rank,
//! kernels and span membership.

use num_traits::{One, Zero};

use crate::lattice::Rational;

/// Reduced row echelon form. Returns the nonzero rows and their pivot columns.
pub fn rref(mut rows: Vec<Vec<Rational>>, ncols: usize) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Rational::one() / &rows[r][c];
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x = &*x - &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

pub fn rank(rows: &[Vec<Rational>], ncols: usize) -> usize {
    rref(rows.to_vec(), ncols).1.len()
}

/// A basis of `{x : row . x = 0 for every row}`.
pub fn nullspace(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let (reduced, pivots) = rref(rows.to_vec(), ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Rational::zero(); ncols];
            x[f] = Rational::one();
            for (row, &p) in reduced.iter().zip(&pivots) {
                x[p] = -row[f].clone();
            }
            x
        })
        .collect()
}

/// Whether `target` lies in the linear span of `vectors`.
pub fn in_span(target: &[Rational], vectors: &[Vec<Rational>]) -> bool {
    let n = target.len();
    let base = rank(vectors, n);
    let mut extended = vectors.to_vec();
    extended.push(target.to_vec());
    rank(&extended, n) == base
}

pub fn to_rational_rows<T: crate::lattice::RationalCoords>(items: &[T]) -> Vec<Vec<Rational>> {
    items.iter().map(|p| p.rational_coords()).collect()
}
