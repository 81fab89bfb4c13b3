//! Exact linear algebra over Z and Q: determinants, inertia, kernels, HNF.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalar::{Int, Rat};

/// Fraction-free (Bareiss) determinant of a square integer matrix.
pub fn det_bareiss(m: &[Vec<Int>]) -> Int {
    let n = m.len();
    if n == 0 {
        return Int::one();
    }
    let mut a: Vec<Vec<Int>> = m.to_vec();
    let mut sign = 1i32;
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return Int::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = &num / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// Determinant of a square rational matrix by Gaussian elimination.
pub fn det_rat(m: &[Vec<Rat>]) -> Rat {
    let n = m.len();
    if n == 0 {
        return Rat::one();
    }
    let mut a: Vec<Vec<Rat>> = m.to_vec();
    let mut det = Rat::one();
    for k in 0..n {
        let pivot = match (k..n).find(|&i| !a[i][k].is_zero()) {
            Some(p) => p,
            None => return Rat::zero(),
        };
        if pivot != k {
            a.swap(k, pivot);
            det = -det;
        }
        det *= a[k][k].clone();
        let inv = a[k][k].recip();
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] * &inv;
            for j in k..n {
                let sub = &f * &a[k][j];
                a[i][j] = &a[i][j] - &sub;
            }
        }
    }
    det
}

/// Rank of a rational matrix.
pub fn rank_rat(m: &[Vec<Rat>]) -> usize {
    if m.is_empty() {
        return 0;
    }
    let rows = m.len();
    let cols = m[0].len();
    let mut a: Vec<Vec<Rat>> = m.to_vec();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let pivot = match (rank..rows).find(|&i| !a[i][col].is_zero()) {
            Some(p) => p,
            None => continue,
        };
        a.swap(rank, pivot);
        let inv = a[rank][col].recip();
        for i in rank + 1..rows {
            if a[i][col].is_zero() {
                continue;
            }
            let f = &a[i][col] * &inv;
            for j in col..cols {
                let sub = &f * &a[rank][j];
                a[i][j] = &a[i][j] - &sub;
            }
        }
        rank += 1;
    }
    rank
}

/// Solves A x = b for a square nonsingular rational A. Returns None if singular.
pub fn solve_rat(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let n = a.len();
    assert_eq!(b.len(), n);
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for k in 0..n {
        let pivot = (k..n).find(|&i| !m[i][k].is_zero())?;
        m.swap(k, pivot);
        let inv = m[k][k].recip();
        for j in k..=n {
            m[k][j] = &m[k][j] * &inv;
        }
        for i in 0..n {
            if i == k || m[i][k].is_zero() {
                continue;
            }
            let f = m[i][k].clone();
            for j in k..=n {
                let sub = &f * &m[k][j];
                m[i][j] = &m[i][j] - &sub;
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

/// Inverse of a square nonsingular rational matrix.
pub fn inverse_rat(a: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = a.len();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let e: Vec<Rat> = (0..n)
            .map(|i| if i == j { Rat::one() } else { Rat::zero() })
            .collect();
        cols.push(solve_rat(a, &e)?);
    }
    // cols holds columns of the inverse
    Some((0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect())
}

/// Inertia (positive, negative, zero counts) of a symmetric rational matrix,
/// computed by symmetric Gaussian diagonalization (congruence transforms only).
pub fn inertia_sym(m: &[Vec<Rat>]) -> (usize, usize, usize) {
    let diag = diagonalize_sym(m);
    let mut pos = 0;
    let mut neg = 0;
    let mut zero = 0;
    for d in diag {
        if d.is_zero() {
            zero += 1;
        } else if d.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
    }
    (pos, neg, zero)
}

/// Diagonal of a congruent diagonal matrix P^T M P. All transforms have
/// determinant +-1, so the product of the diagonal equals det(M).
pub fn diagonalize_sym(m: &[Vec<Rat>]) -> Vec<Rat> {
    let n = m.len();
    let mut a: Vec<Vec<Rat>> = m.to_vec();
    let mut diag = Vec::with_capacity(n);
    for k in 0..n {
        if a[k][k].is_zero() {
            // look for a later nonzero diagonal entry to swap in
            if let Some(i) = (k + 1..n).find(|&i| !a[i][i].is_zero()) {
                swap_sym(&mut a, k, i);
            } else if let Some(i) = (k + 1..n).find(|&i| !a[k][i].is_zero()) {
                // all remaining diagonal entries are zero: add row/col i into k,
                // which makes a[k][k] = 2*a[k][i] != 0
                add_sym(&mut a, k, i);
            } else {
                diag.push(Rat::zero());
                continue;
            }
        }
        let pivot = a[k][k].clone();
        let inv = pivot.recip();
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] * &inv;
            for j in k..n {
                let sub = &f * &a[k][j];
                a[i][j] = &a[i][j] - &sub;
            }
            for j in k..n {
                let sub = &f * &a[j][k];
                a[j][i] = &a[j][i] - &sub;
            }
        }
        diag.push(pivot);
    }
    diag
}

fn swap_sym(a: &mut [Vec<Rat>], i: usize, j: usize) {
    let n = a.len();
    for k in 0..n {
        a[k].swap(i, j);
    }
    a.swap(i, j);
}

// row_i += row_j and col_i += col_j
fn add_sym(a: &mut Vec<Vec<Rat>>, i: usize, j: usize) {
    let n = a.len();
    for k in 0..n {
        let v = a[j][k].clone();
        a[i][k] = &a[i][k] + &v;
    }
    for k in 0..n {
        let v = a[k][j].clone();
        a[k][i] = &a[k][i] + &v;
    }
}

/// Row-style Hermite normal form. Returns the nonzero rows with positive
/// pivots; entries above each pivot are reduced into [0, pivot).
pub fn hnf_rows(mat: &[Vec<Int>]) -> Vec<Vec<Int>> {
    if mat.is_empty() {
        return Vec::new();
    }
    let cols = mat[0].len();
    let mut a: Vec<Vec<Int>> = mat.to_vec();
    let rows = a.len();
    let mut pivot_row = 0;
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    for col in 0..cols {
        if pivot_row == rows {
            break;
        }
        if (pivot_row..rows).all(|i| a[i][col].is_zero()) {
            continue;
        }
        // gcd-eliminate everything in this column below pivot_row
        loop {
            let mut idx = None;
            for i in pivot_row..rows {
                if !a[i][col].is_zero() {
                    match idx {
                        None => idx = Some(i),
                        Some(best) => {
                            if a[i][col].abs() < a[best][col].abs() {
                                idx = Some(i);
                            }
                        }
                    }
                }
            }
            let best = idx.unwrap();
            a.swap(pivot_row, best);
            let mut done = true;
            for i in pivot_row + 1..rows {
                if a[i][col].is_zero() {
                    continue;
                }
                let q = div_floor_int(&a[i][col], &a[pivot_row][col]);
                for j in 0..cols {
                    let sub = &q * &a[pivot_row][j];
                    a[i][j] = &a[i][j] - &sub;
                }
                if !a[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[pivot_row][col].is_negative() {
            for j in 0..cols {
                a[pivot_row][j] = -a[pivot_row][j].clone();
            }
        }
        pivots.push((pivot_row, col));
        pivot_row += 1;
    }
    // reduce entries above pivots
    for &(r, c) in pivots.iter() {
        for i in 0..r {
            if a[i][c].is_zero() {
                continue;
            }
            let q = div_floor_int(&a[i][c], &a[r][c]);
            for j in 0..cols {
                let sub = &q * &a[r][j];
                a[i][j] = &a[i][j] - &sub;
            }
        }
    }
    a.truncate(pivot_row);
    a
}

fn div_floor_int(a: &Int, b: &Int) -> Int {
    a.div_floor(b)
}

/// Primitive basis of the integer kernel {x in Z^cols : M x = 0}.
///
/// Computed by row-reducing the transpose augmented with an identity block;
/// the unimodular bookkeeping makes the kernel basis automatically saturated.
/// The result is returned in row HNF (canonical).
pub fn integer_kernel(m: &[Vec<Int>], cols: usize) -> Vec<Vec<Int>> {
    // rows of `work`: [ M^T | I ], one row per column of M
    let mrows = m.len();
    let mut work: Vec<Vec<Int>> = Vec::with_capacity(cols);
    for c in 0..cols {
        let mut row: Vec<Int> = (0..mrows).map(|r| m[r][c].clone()).collect();
        for k in 0..cols {
            row.push(if k == c { Int::one() } else { Int::zero() });
        }
        work.push(row);
    }
    // eliminate the M^T part column by column with unimodular row ops
    let rows = work.len();
    let mut pivot_row = 0;
    for col in 0..mrows {
        if pivot_row == rows {
            break;
        }
        if (pivot_row..rows).all(|i| work[i][col].is_zero()) {
            continue;
        }
        loop {
            let mut idx = None;
            for i in pivot_row..rows {
                if !work[i][col].is_zero() {
                    match idx {
                        None => idx = Some(i),
                        Some(best) => {
                            if work[i][col].abs() < work[best][col].abs() {
                                idx = Some(i);
                            }
                        }
                    }
                }
            }
            let best = idx.unwrap();
            work.swap(pivot_row, best);
            let mut done = true;
            for i in pivot_row + 1..rows {
                if work[i][col].is_zero() {
                    continue;
                }
                let q = div_floor_int(&work[i][col], &work[pivot_row][col]);
                for j in 0..mrows + cols {
                    let sub = &q * &work[pivot_row][j];
                    work[i][j] = &work[i][j] - &sub;
                }
                if !work[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        pivot_row += 1;
    }
    let kernel: Vec<Vec<Int>> = work[pivot_row..]
        .iter()
        .map(|row| row[mrows..].to_vec())
        .collect();
    hnf_rows(&kernel)
}

/// Is `v` in the Z-span of the HNF basis `basis`? Reduces v by the pivots.
pub fn hnf_contains(basis: &[Vec<Int>], v: &[Int]) -> bool {
    let mut v = v.to_vec();
    for row in basis {
        let pivot_col = match row.iter().position(|x| !x.is_zero()) {
            Some(c) => c,
            None => continue,
        };
        if v[pivot_col].is_zero() {
            continue;
        }
        let (q, r) = v[pivot_col].div_rem(&row[pivot_col]);
        if !r.is_zero() {
            return false;
        }
        for j in 0..v.len() {
            let sub = &q * &row[j];
            v[j] = &v[j] - &sub;
        }
    }
    v.iter().all(|x| x.is_zero())
}

pub fn int_to_rat_mat(m: &[Vec<Int>]) -> Vec<Vec<Rat>> {
    m.iter()
        .map(|r| r.iter().map(|x| Rat::from_integer(x.clone())).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat_int;

    fn im(rows: &[&[i64]]) -> Vec<Vec<Int>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| Int::from(x)).collect())
            .collect()
    }

    #[test]
    fn bareiss_matches_rational_det() {
        let m = im(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]]);
        assert_eq!(det_bareiss(&m), Int::from(4));
        assert_eq!(det_rat(&int_to_rat_mat(&m)), rat_int(4));
    }

    #[test]
    fn inertia_of_hyperbolic_plane() {
        let u = int_to_rat_mat(&im(&[&[0, 1], &[1, 0]]));
        assert_eq!(inertia_sym(&u), (1, 1, 0));
        let d: Rat = diagonalize_sym(&u).into_iter().product();
        assert_eq!(d, rat_int(-1));
    }

    #[test]
    fn kernel_is_saturated() {
        // kernel of (2 4) in Z^2 is generated by (2,-1), primitively
        let m = im(&[&[2, 4]]);
        let k = integer_kernel(&m, 2);
        assert_eq!(k, im(&[&[2, -1]]));
    }

    #[test]
    fn hnf_canonicalizes() {
        let m = im(&[&[2, 2], &[0, 4]]);
        let h = hnf_rows(&m);
        assert_eq!(h, im(&[&[2, 2], &[0, 4]]));
        assert!(hnf_contains(&h, &[Int::from(2), Int::from(6)]));
        assert!(!hnf_contains(&h, &[Int::from(1), Int::from(1)]));
    }
}
