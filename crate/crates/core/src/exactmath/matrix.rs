use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{lcm_of_denominators, Rational};
use crate::error::{Error, Result};
use crate::par::Exec;

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    /// Builds a matrix from explicit rows; every row must have the same length.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|r| r.len() != cols) {
            return Err(Error::Dimension(format!(
                "row {bad} has {} entries, expected {cols}",
                rows[bad].len()
            )));
        }
        let n = rows.len();
        Ok(RatMatrix {
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        RatMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Rational) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    /// `self - λ·I`.
    pub fn minus_scalar(&self, lambda: &Rational) -> Result<Self> {
        self.require_square()?;
        let mut m = self.clone();
        for i in 0..self.rows {
            m.data[i * self.cols + i] -= lambda;
        }
        Ok(m)
    }

    /// Row vector times matrix.
    pub fn left_mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.rows {
            return Err(Error::Dimension(format!(
                "vector of length {} against {} rows",
                v.len(),
                self.rows
            )));
        }
        let mut out = vec![Rational::zero(); self.cols];
        for (r, coeff) in v.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            for (c, entry) in self.row(r).iter().enumerate() {
                if !entry.is_zero() {
                    out[c] += coeff * entry;
                }
            }
        }
        Ok(out)
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::Dimension(format!(
                "expected a square matrix, got {}x{}",
                self.rows, self.cols
            )))
        }
    }

    /// Integer matrix `L·self` for the common denominator `L` of all entries.
    fn scaled_integers(&self, extra: &BigInt) -> (Vec<BigInt>, BigInt) {
        let l = lcm_of_denominators(&self.data);
        let l = num_integer::Integer::lcm(&l, extra);
        let ints = self
            .data
            .iter()
            .map(|x| x.numer() * (&l / x.denom()))
            .collect();
        (ints, l)
    }

    /// Each row scaled by the lcm of its own denominators; the row space is unchanged.
    fn row_scaled_integers(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|r| {
                let row = self.row(r);
                let l = lcm_of_denominators(row);
                row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
            })
            .collect()
    }
}

fn int_mul(a: &[BigInt], b: &[BigInt], n: usize, k: usize, m: usize, exec: Exec) -> Vec<BigInt> {
    let rows = exec.map(n, |r| {
        let mut out = vec![BigInt::zero(); m];
        for t in 0..k {
            let x = &a[r * k + t];
            if x.is_zero() {
                continue;
            }
            for (c, slot) in out.iter_mut().enumerate() {
                let y = &b[t * m + c];
                if !y.is_zero() {
                    *slot += x * y;
                }
            }
        }
        out
    });
    rows.into_iter().flatten().collect()
}

/// Exact product `a · b`.
pub fn mat_mul(a: &RatMatrix, b: &RatMatrix) -> Result<RatMatrix> {
    mat_mul_with(a, b, Exec::default())
}

pub fn mat_mul_with(a: &RatMatrix, b: &RatMatrix, exec: Exec) -> Result<RatMatrix> {
    if a.cols != b.rows {
        return Err(Error::Dimension(format!(
            "cannot multiply {}x{} by {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let one = BigInt::one();
    let (ai, la) = a.scaled_integers(&one);
    let (bi, lb) = b.scaled_integers(&one);
    let prod = int_mul(&ai, &bi, a.rows, a.cols, b.cols, exec);
    let denom = la * lb;
    Ok(RatMatrix {
        rows: a.rows,
        cols: b.cols,
        data: prod
            .into_iter()
            .map(|x| Rational::new(x, denom.clone()))
            .collect(),
    })
}

/// `m^t` by repeated squaring; `m^0` is the identity.
pub fn mat_pow(m: &RatMatrix, t: u32) -> Result<RatMatrix> {
    m.require_square()?;
    let mut result = RatMatrix::identity(m.rows);
    let mut base = m.clone();
    let mut e = t;
    while e > 0 {
        if e & 1 == 1 {
            result = mat_mul(&result, &base)?;
        }
        e >>= 1;
        if e > 0 {
            base = mat_mul(&base, &base)?;
        }
    }
    Ok(result)
}

/// Fraction-free (Bareiss) forward elimination with first-nonzero pivoting.
/// Returns the pivot columns; `rows` is left in echelon form.
pub(crate) fn bareiss_echelon(rows: &mut [Vec<BigInt>], cols: usize, exec: Exec) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let (top, bottom) = rows.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let pivot = &pivot_row[c];
        exec.for_each_mut(bottom, |row| {
            let factor = std::mem::take(&mut row[c]);
            for k in c + 1..cols {
                let mut v = pivot * &row[k];
                if !factor.is_zero() && !pivot_row[k].is_zero() {
                    v -= &factor * &pivot_row[k];
                }
                if !v.is_zero() {
                    debug_assert!((&v % &prev).is_zero(), "inexact Bareiss division");
                    v /= &prev;
                }
                row[k] = v;
            }
        });
        prev = pivot.clone();
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Exact rank.
pub fn rank(m: &RatMatrix) -> usize {
    rank_with(m, Exec::default())
}

pub fn rank_with(m: &RatMatrix, exec: Exec) -> usize {
    let mut rows = m.row_scaled_integers();
    bareiss_echelon(&mut rows, m.cols, exec).len()
}

/// Basis of the right kernel, one vector per free column of the reduced echelon
/// form, with a 1 in that free column.
pub fn nullspace(m: &RatMatrix) -> Vec<Vec<Rational>> {
    let mut rows = m.row_scaled_integers();
    let pivots = bareiss_echelon(&mut rows, m.cols, Exec::default());
    let mut reduced: Vec<Vec<Rational>> = rows
        .into_iter()
        .take(pivots.len())
        .map(|row| row.into_iter().map(Rational::from_integer).collect())
        .collect();
    for idx in (0..pivots.len()).rev() {
        let pc = pivots[idx];
        let lead = reduced[idx][pc].clone();
        for x in reduced[idx].iter_mut() {
            if !x.is_zero() {
                *x /= &lead;
            }
        }
        let (above, rest) = reduced.split_at_mut(idx);
        let pivot_row = &rest[0];
        for row in above.iter_mut() {
            let factor = row[pc].clone();
            if factor.is_zero() {
                continue;
            }
            for (x, p) in row.iter_mut().zip(pivot_row) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
        }
    }
    let mut is_pivot = vec![false; m.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..m.cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![Rational::zero(); m.cols];
            v[free] = Rational::one();
            for (idx, &pc) in pivots.iter().enumerate() {
                v[pc] = -reduced[idx][free].clone();
            }
            v
        })
        .collect()
}

/// True iff `∏ (m − λ·I)` over the given values is the zero matrix.
///
/// When the set contains every eigenvalue of `m`, a vanishing product is
/// equivalent to `m` being diagonalisable.
pub fn annihilation_check(m: &RatMatrix, eigenvalues: &[Rational]) -> Result<bool> {
    annihilation_check_with(m, eigenvalues, Exec::default())
}

pub fn annihilation_check_with(m: &RatMatrix, eigenvalues: &[Rational], exec: Exec) -> Result<bool> {
    m.require_square()?;
    let n = m.rows;
    if n == 0 {
        return Ok(true);
    }
    let lam_l = lcm_of_denominators(eigenvalues);
    let (base, l) = m.scaled_integers(&lam_l);
    let shifted = |lambda: &Rational| -> Vec<BigInt> {
        let mu = (lambda * Rational::from_integer(l.clone())).to_integer();
        let mut a = base.clone();
        for i in 0..n {
            a[i * n + i] -= &mu;
        }
        a
    };
    let Some((first, rest)) = eigenvalues.split_first() else {
        return Ok(m.is_zero());
    };
    let mut acc = shifted(first);
    for lambda in rest {
        if acc.iter().all(Zero::is_zero) {
            return Ok(true);
        }
        acc = int_mul(&acc, &shifted(lambda), n, n, n, exec);
    }
    Ok(acc.iter().all(Zero::is_zero))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{int, rat};

    fn m(rows: &[&[i64]]) -> RatMatrix {
        RatMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn products_and_powers() {
        let a = RatMatrix::from_rows(vec![vec![rat(1, 2), rat(1, 2)], vec![int(0), int(1)]]).unwrap();
        let sq = mat_mul(&a, &a).unwrap();
        assert_eq!(
            sq,
            RatMatrix::from_rows(vec![vec![rat(1, 4), rat(3, 4)], vec![int(0), int(1)]]).unwrap()
        );
        assert_eq!(mat_mul(&RatMatrix::identity(2), &a).unwrap(), a);
        assert_eq!(mat_pow(&a, 0).unwrap(), RatMatrix::identity(2));
        assert_eq!(mat_pow(&a, 1).unwrap(), a);
        assert_eq!(mat_pow(&a, 3).unwrap(), mat_mul(&sq, &a).unwrap());
        assert!(mat_mul(&a, &RatMatrix::zeros(3, 1)).is_err());
        assert!(mat_pow(&RatMatrix::zeros(2, 3), 2).is_err());
        assert!(RatMatrix::from_rows(vec![vec![int(1)], vec![int(1), int(2)]]).is_err());
    }

    #[test]
    fn kernels_and_ranks() {
        assert_eq!(nullspace(&RatMatrix::zeros(2, 2)).len(), 2);
        assert!(nullspace(&RatMatrix::identity(3)).is_empty());
        assert_eq!(nullspace(&m(&[&[1, 1]])), vec![vec![int(-1), int(1)]]);
        assert_eq!(rank(&RatMatrix::identity(4)), 4);
        assert_eq!(rank(&RatMatrix::zeros(3, 5)), 0);
        assert_eq!(rank(&m(&[&[1, 2, 3], &[2, 4, 6], &[0, 0, 1]])), 2);
        assert_eq!(rank(&m(&[&[0, 0, 1], &[0, 2, 0], &[0, 0, 3]])), 2);
    }

    #[test]
    fn annihilation() {
        assert!(annihilation_check(&RatMatrix::identity(3), &[int(1)]).unwrap());
        assert!(!annihilation_check(&m(&[&[0, 1], &[0, 0]]), &[int(0)]).unwrap());
        let d = RatMatrix::from_rows(vec![vec![rat(1, 3), int(0)], vec![int(0), rat(1, 2)]]).unwrap();
        assert!(annihilation_check(&d, &[rat(1, 3), rat(1, 2)]).unwrap());
        assert!(!annihilation_check(&d, &[rat(1, 3)]).unwrap());
    }
}
