//! Exact rational row reduction.
//!
//! `RowReducer` maintains a reduced row-echelon basis of the span of the
//! inserted rows. Column order is fixed by the caller (the engine always
//! orders columns by descending word order, so a pivot is the largest word
//! of its row). Incoming rows are scaled integral before elimination to keep
//! the arithmetic fraction-free where possible; stored rows are normalized to
//! a leading 1, which makes the final basis the unique RREF of the row space
//! regardless of insertion order.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::poly::Scalar;

pub type Vector = Vec<Scalar>;

pub fn zero_vector(n: usize) -> Vector {
    vec![Scalar::zero(); n]
}

pub fn is_zero_vector(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

/// Scales a row by the least common multiple of its denominators, making all
/// entries integral, then divides out the content. Sign is left untouched.
fn make_primitive(row: &mut [Scalar]) {
    let mut lcm = BigInt::one();
    for c in row.iter() {
        if !c.is_zero() {
            lcm = lcm.lcm(c.denom());
        }
    }
    if !lcm.is_one() {
        let f = Scalar::from_integer(lcm);
        for c in row.iter_mut() {
            *c = &*c * &f;
        }
    }
    let mut content = BigInt::zero();
    for c in row.iter() {
        if !c.is_zero() {
            content = content.gcd(c.numer());
            if content.is_one() {
                return;
            }
        }
    }
    if !content.is_zero() && !content.is_one() {
        let f = Scalar::from_integer(content);
        for c in row.iter_mut() {
            *c = &*c / &f;
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct RowReducer {
    ncols: usize,
    /// Rows in RREF, sorted by pivot column.
    rows: Vec<Vector>,
    pivots: Vec<usize>,
}

impl RowReducer {
    pub fn new(ncols: usize) -> RowReducer {
        RowReducer {
            ncols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rows(&self) -> &[Vector] {
        &self.rows
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivots.binary_search(&col).is_ok()
    }

    /// Columns without a pivot, ascending.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ncols).filter(|c| !self.is_pivot(*c)).collect()
    }

    /// Eliminates the pivots of the basis from `row` in place, leaving the
    /// unique residual supported on free columns.
    pub fn reduce(&self, row: &mut Vector) {
        assert_eq!(row.len(), self.ncols, "column count mismatch");
        for (r, &p) in self.rows.iter().zip(&self.pivots) {
            if !row[p].is_zero() {
                let f = row[p].clone();
                for (a, b) in row.iter_mut().zip(r.iter()) {
                    if !b.is_zero() {
                        *a = &*a - &(&f * b);
                    }
                }
            }
        }
    }

    pub fn contains(&self, row: &Vector) -> bool {
        let mut r = row.clone();
        self.reduce(&mut r);
        is_zero_vector(&r)
    }

    /// Inserts a row into the basis. Returns true when the rank grew.
    pub fn insert(&mut self, mut row: Vector) -> bool {
        assert_eq!(row.len(), self.ncols, "column count mismatch");
        make_primitive(&mut row);
        self.reduce(&mut row);
        let Some(pivot) = row.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        make_primitive(&mut row);
        let lead = row[pivot].clone();
        if !lead.is_one() {
            for c in row.iter_mut() {
                if !c.is_zero() {
                    *c = &*c / &lead;
                }
            }
        }
        // Back-substitute into the existing rows to keep full RREF.
        for r in self.rows.iter_mut() {
            if !r[pivot].is_zero() {
                let f = r[pivot].clone();
                for (a, b) in r.iter_mut().zip(row.iter()) {
                    if !b.is_zero() {
                        *a = &*a - &(&f * b);
                    }
                }
            }
        }
        let at = self.pivots.partition_point(|&p| p < pivot);
        self.pivots.insert(at, pivot);
        self.rows.insert(at, row);
        true
    }
}

/// Solves `sum_j lambda_j * cols[j] = target` over the rationals.
///
/// Returns `None` when inconsistent; otherwise the particular solution with
/// every free unknown set to zero (pivots are chosen scanning the unknowns
/// left to right) together with a basis of the homogeneous solution space.
pub fn solve(cols: &[Vector], target: &Vector) -> Option<(Vector, Vec<Vector>)> {
    let n = cols.len();
    let m = target.len();
    for c in cols {
        assert_eq!(c.len(), m, "column length mismatch");
    }
    // Augmented system in the unknown-space: reduce rows of [A | t] where the
    // unknown index is the column order, so pivots prefer small indices.
    let mut reducer = RowReducer::new(n + 1);
    for i in 0..m {
        let mut row = Vector::with_capacity(n + 1);
        for c in cols {
            row.push(c[i].clone());
        }
        row.push(target[i].clone());
        reducer.insert(row);
    }
    if reducer.is_pivot(n) {
        return None; // A pivot in the target column: inconsistent.
    }
    let mut particular = zero_vector(n);
    for (r, &p) in reducer.rows().iter().zip(reducer.pivots()) {
        particular[p] = r[n].clone();
    }
    let mut nullspace = Vec::new();
    for f in reducer.free_columns() {
        if f == n {
            continue;
        }
        let mut vec = zero_vector(n);
        vec[f] = Scalar::one();
        for (r, &p) in reducer.rows().iter().zip(reducer.pivots()) {
            vec[p] = -r[f].clone();
        }
        nullspace.push(vec);
    }
    Some((particular, nullspace))
}

/// Basis of `{ v : sum_j v_j * cols[j] = 0 }`.
pub fn nullspace(cols: &[Vector]) -> Vec<Vector> {
    let m = cols.first().map_or(0, Vec::len);
    solve(cols, &zero_vector(m)).expect("homogeneous system is consistent").1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::scalar_int;

    fn row(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| scalar_int(x)).collect()
    }

    #[test]
    fn rank_and_rref_shape() {
        let mut r = RowReducer::new(3);
        assert!(r.insert(row(&[2, 4, 6])));
        assert!(r.insert(row(&[0, 3, 3])));
        assert!(!r.insert(row(&[2, 7, 9])), "dependent row");
        assert_eq!(r.rank(), 2);
        assert_eq!(r.pivots(), &[0, 1]);
        // RREF: leading ones and cleared pivot columns.
        assert_eq!(r.rows()[0], row(&[1, 0, 1]));
        assert_eq!(r.rows()[1], row(&[0, 1, 1]));
        assert_eq!(r.free_columns(), vec![2]);
    }

    #[test]
    fn rref_is_insertion_order_independent() {
        let rows = [row(&[1, 2, 3]), row(&[0, 1, 1]), row(&[1, 0, 7])];
        let mut a = RowReducer::new(3);
        let mut b = RowReducer::new(3);
        for r in &rows {
            a.insert(r.clone());
        }
        for r in rows.iter().rev() {
            b.insert(r.clone());
        }
        assert_eq!(a.rows(), b.rows());
        assert_eq!(a.pivots(), b.pivots());
    }

    #[test]
    fn reduce_leaves_free_residual() {
        let mut r = RowReducer::new(3);
        r.insert(row(&[1, 1, 0]));
        let mut probe = row(&[2, 3, 5]);
        r.reduce(&mut probe);
        assert_eq!(probe[0], scalar_int(0));
        assert!(r.contains(&row(&[5, 5, 0])));
        assert!(!r.contains(&row(&[1, 0, 0])));
    }

    #[test]
    fn solve_affine_system() {
        // cols: a=(1,0), b=(0,1), c=(1,1); target (2,3).
        let cols = vec![row(&[1, 0]), row(&[0, 1]), row(&[1, 1])];
        let t = row(&[2, 3]);
        let (part, null) = solve(&cols, &t).unwrap();
        // Free unknown (c) set to zero.
        assert_eq!(part, row(&[2, 3, 0]));
        assert_eq!(null.len(), 1);
        assert_eq!(null[0], row(&[-1, -1, 1]));
        // Inconsistent target.
        let cols2 = vec![row(&[1, 1])];
        assert!(solve(&cols2, &row(&[1, 2])).is_none());
    }

    #[test]
    fn nullspace_of_dependent_columns() {
        let cols = vec![row(&[1, 2]), row(&[2, 4])];
        let ns = nullspace(&cols);
        assert_eq!(ns.len(), 1);
        assert_eq!(ns[0], row(&[-2, 1]));
    }

    #[test]
    fn fractions_are_handled_exactly() {
        let mut r = RowReducer::new(2);
        r.insert(vec![crate::poly::scalar_ratio(1, 3), crate::poly::scalar_ratio(1, 6)]);
        assert_eq!(r.rows()[0], vec![scalar_int(1), crate::poly::scalar_ratio(1, 2)]);
    }
}
