//! Small exact linear algebra: Gaussian elimination modulo prime powers and
//! over prime fields and the rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::ring::{ModPrimePower, PrimeField, Ring};

/// Solves `a·x = b` modulo `p^k` when `a` is invertible mod p.
pub fn solve_mod(ring: &ModPrimePower, a: &[Vec<BigInt>], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let n = a.len();
    let mut m: Vec<Vec<BigInt>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r: Vec<BigInt> = row.iter().map(|c| ring.reduce(c)).collect();
            r.push(ring.reduce(rhs));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| ring.is_unit(&m[r][col]))?;
        m.swap(col, piv);
        let inv = ring.div(&ring.one(), &m[col][col])?;
        for j in col..=n {
            m[col][j] = ring.mul(&m[col][j], &inv);
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in col..=n {
                    let t = ring.mul(&f, &m[col][j]);
                    m[r][j] = ring.sub(&m[r][j], &t);
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

/// Inverse modulo `p^k` of a matrix invertible mod p.
pub fn invert_mod(ring: &ModPrimePower, a: &[Vec<BigInt>]) -> Option<Vec<Vec<BigInt>>> {
    let n = a.len();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let e: Vec<BigInt> = (0..n).map(|i| if i == j { BigInt::from(1) } else { BigInt::zero() }).collect();
        cols.push(solve_mod(ring, a, &e)?);
    }
    Some((0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect())
}

/// Determinant over a prime field by elimination. Rows that are entirely
/// zero short-circuit to 0 before any elimination work.
pub fn det_mod_p(field: &PrimeField, mut m: Vec<Vec<u64>>) -> u64 {
    let n = m.len();
    if m.iter().any(|r| r.iter().all(|&c| c == 0)) {
        return 0;
    }
    let mut det = 1u64;
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| m[r][col] != 0) else {
            return 0;
        };
        if piv != col {
            m.swap(piv, col);
            det = field.neg(&det);
        }
        det = field.mul(&det, &m[col][col]);
        let inv = field.inv_u64(m[col][col]);
        for r in col + 1..n {
            if m[r][col] != 0 {
                let f = field.mul(&m[r][col], &inv);
                for j in col..n {
                    let t = field.mul(&f, &m[col][j]);
                    m[r][j] = field.sub(&m[r][j], &t);
                }
            }
        }
    }
    det
}

/// Rank over a prime field.
pub fn rank_mod_p(field: &PrimeField, mut m: Vec<Vec<u64>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(piv, rank);
        let inv = field.inv_u64(m[rank][col]);
        for r in rank + 1..rows {
            if m[r][col] != 0 {
                let f = field.mul(&m[r][col], &inv);
                for j in col..cols {
                    let t = field.mul(&f, &m[rank][j]);
                    m[r][j] = field.sub(&m[r][j], &t);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Solves a square rational system; `None` if singular.
pub fn solve_rational(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let inv = BigRational::from_integer(1.into()) / &m[col][col];
        for j in col..=n {
            m[col][j] = &m[col][j] * &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in col..=n {
                    let t = &f * &m[col][j];
                    m[r][j] -= t;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_modulo_prime_power() {
        let r = ModPrimePower::new(7, 3);
        let a = vec![vec![BigInt::from(2), BigInt::from(1)], vec![BigInt::from(1), BigInt::from(3)]];
        let b = vec![BigInt::from(5), BigInt::from(10)];
        let x = solve_mod(&r, &a, &b).unwrap();
        for (row, rhs) in a.iter().zip(&b) {
            let lhs = r.reduce(&(&row[0] * &x[0] + &row[1] * &x[1]));
            assert_eq!(lhs, r.reduce(rhs));
        }
        let singular = vec![vec![BigInt::from(7), BigInt::from(0)], vec![BigInt::from(0), BigInt::from(1)]];
        assert!(solve_mod(&r, &singular, &b).is_none());
    }

    #[test]
    fn determinant_mod_p() {
        let f = PrimeField::new(7);
        // [[2x, 2y], [1, -1]] at (2,2) gives -8 = 6 mod 7
        assert_eq!(det_mod_p(&f, vec![vec![4, 4], vec![1, 6]]), 6);
        assert_eq!(det_mod_p(&f, vec![vec![0, 0], vec![1, 6]]), 0);
        assert_eq!(rank_mod_p(&f, vec![vec![1, 2], vec![2, 4]]), 1);
    }
}
