//! Exact linear algebra over the integers and rationals: fraction-free
//! (Bareiss) row echelon reduction with arbitrary-precision intermediates,
//! kernel bases, and rational span membership.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Fraction-free row echelon form. Returns the echelon matrix together with
/// the pivot column of each nonzero row. Entries stay integral throughout:
/// every 2x2 update is exactly divisible by the previous pivot.
pub fn bareiss_echelon(mat: &[Vec<i64>]) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let rows = mat.len();
    let cols = if rows == 0 { 0 } else { mat[0].len() };
    let mut a: Vec<Vec<BigInt>> = mat
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut pivot_cols = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r >= rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in (r + 1)..rows {
            for j in (c + 1)..cols {
                let num = &a[i][j] * &a[r][c] - &a[i][c] * &a[r][j];
                debug_assert!((&num % &prev).is_zero());
                a[i][j] = num / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivot_cols.push(c);
        r += 1;
    }
    (a, pivot_cols)
}

pub fn rank_i64(mat: &[Vec<i64>]) -> usize {
    bareiss_echelon(mat).1.len()
}

/// Primitive basis of the rational kernel: one vector per free column, with
/// content removed and first nonzero entry positive.
pub fn nullspace(mat: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    let rows = mat.len();
    let cols = if rows == 0 { 0 } else { mat[0].len() };
    let (ech, pivot_cols) = bareiss_echelon(mat);
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; cols];
        for &c in &pivot_cols {
            v[c] = true;
        }
        v
    };
    let mut basis = Vec::new();
    for free in 0..cols {
        if is_pivot[free] {
            continue;
        }
        let mut x: Vec<BigRational> = vec![BigRational::zero(); cols];
        x[free] = BigRational::one();
        // back-substitute over the pivot rows
        for (row, &pc) in pivot_cols.iter().enumerate().rev() {
            let mut s = BigRational::zero();
            for j in (pc + 1)..cols {
                if !ech[row][j].is_zero() && !x[j].is_zero() {
                    s += BigRational::from(ech[row][j].clone()) * &x[j];
                }
            }
            x[pc] = -s / BigRational::from(ech[row][pc].clone());
        }
        basis.push(primitive(&x));
    }
    basis
}

/// Clears denominators, removes content, and normalizes the sign of the
/// first nonzero entry to positive.
pub fn primitive(x: &[BigRational]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for v in x {
        lcm = lcm.lcm(v.denom());
    }
    let mut ints: Vec<BigInt> = x.iter().map(|v| (v * BigRational::from(lcm.clone())).to_integer()).collect();
    let mut content = BigInt::zero();
    for v in &ints {
        content = content.gcd(v);
    }
    if !content.is_zero() && !content.is_one() {
        for v in &mut ints {
            *v = &*v / &content;
        }
    }
    if let Some(first) = ints.iter().find(|v| !v.is_zero()) {
        if first.is_negative() {
            for v in &mut ints {
                *v = -v.clone();
            }
        }
    }
    ints
}

/// Rank of a rational matrix by plain Gaussian elimination.
pub fn rational_rank(mat: &[Vec<BigRational>]) -> usize {
    let rows = mat.len();
    let cols = if rows == 0 { 0 } else { mat[0].len() };
    let mut a = mat.to_vec();
    let mut r = 0;
    for c in 0..cols {
        if r >= rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for j in c..cols {
            let v = &a[r][j] * &inv;
            a[r][j] = v;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..cols {
                    let v = &a[i][j] - &f * &a[r][j];
                    a[i][j] = v;
                }
            }
        }
        r += 1;
    }
    r
}

/// Whether `target` lies in the rational span of `basis` (vectors given as
/// coordinate slices of equal length).
pub fn in_span(basis: &[Vec<BigRational>], target: &[BigRational]) -> bool {
    if basis.is_empty() {
        return target.iter().all(|v| v.is_zero());
    }
    let n = target.len();
    debug_assert!(basis.iter().all(|b| b.len() == n));
    // columns = basis vectors, augmented with the target
    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut row: Vec<BigRational> = basis.iter().map(|b| b[i].clone()).collect();
        row.push(target[i].clone());
        rows.push(row);
    }
    let base_rank = rational_rank(
        &rows
            .iter()
            .map(|r| r[..basis.len()].to_vec())
            .collect::<Vec<_>>(),
    );
    rational_rank(&rows) == base_rank
}

pub fn big_to_rational(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().map(|x| BigRational::from(x.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int_vec(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn kernel_of_known_rank_deficient_matrix() {
        // rows sum to zero column-wise: kernel contains (1, 1, 1)
        let m = vec![vec![1, -2, 1], vec![2, -1, -1]];
        let ker = nullspace(&m);
        assert_eq!(ker.len(), 1);
        assert_eq!(ker[0], int_vec(&[1, 1, 1]));
    }

    #[test]
    fn kernel_vectors_are_primitive_and_sign_normalized() {
        let m = vec![vec![2, 4, 6]];
        let ker = nullspace(&m);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            let mut g = BigInt::from(0);
            for x in v {
                g = g.gcd(x);
            }
            assert_eq!(g, BigInt::from(1));
            assert!(v.iter().find(|x| !x.is_zero()).unwrap() > &&BigInt::from(0));
        }
        // each kernel vector annihilates the row
        for v in &ker {
            let s: BigInt = v
                .iter()
                .zip(&m[0])
                .map(|(a, &b)| a * BigInt::from(b))
                .sum();
            assert!(s.is_zero());
        }
    }

    #[test]
    fn full_rank_matrix_has_trivial_kernel() {
        let m = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        assert!(nullspace(&m).is_empty());
        assert_eq!(rank_i64(&m), 3);
    }

    #[test]
    fn bareiss_stays_integral_on_a_dense_example() {
        let m = vec![
            vec![3, 1, 4, 1],
            vec![5, 9, 2, 6],
            vec![5, 3, 5, 8],
            vec![9, 7, 9, 3],
        ];
        let (ech, pivots) = bareiss_echelon(&m);
        assert_eq!(pivots.len(), 4);
        // last pivot of Bareiss echelon is the determinant up to sign
        let det = ech[3][3].clone();
        assert_eq!(det.magnitude().to_string(), "98"); // |det| computed by cofactor expansion
    }

    #[test]
    fn span_membership() {
        let basis = vec![
            big_to_rational(&int_vec(&[1, 0, 1])),
            big_to_rational(&int_vec(&[0, 1, 1])),
        ];
        assert!(in_span(&basis, &big_to_rational(&int_vec(&[2, 3, 5]))));
        assert!(!in_span(&basis, &big_to_rational(&int_vec(&[0, 0, 1]))));
        assert!(in_span(&[], &big_to_rational(&int_vec(&[0, 0]))));
        assert!(!in_span(&[], &big_to_rational(&int_vec(&[1, 0]))));
    }
}
