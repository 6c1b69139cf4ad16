//! Small dense integer matrices with exact rank and determinant.

use std::fmt;
use std::ops::Mul;

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self { rows: r, cols: c, data: rows.concat() }
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

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.rows)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    /// Product with overflow detection.
    pub fn checked_mul(&self, other: &Self) -> Option<Self> {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let p = a.checked_mul(other[(k, j)])?;
                    out[(i, j)] = out[(i, j)].checked_add(p)?;
                }
            }
        }
        Some(out)
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    /// Rank over ℚ by integer row reduction with gcd normalisation.
    pub fn rank(&self) -> usize {
        let mut a: Vec<Vec<i128>> =
            (0..self.rows).map(|i| self.row(i).iter().map(|&x| x as i128).collect()).collect();
        let mut r = 0;
        for col in 0..self.cols {
            let Some(p) = (r..self.rows).find(|&i| a[i][col] != 0) else { continue };
            a.swap(r, p);
            for i in r + 1..self.rows {
                if a[i][col] == 0 {
                    continue;
                }
                let (f, g) = (a[r][col], a[i][col]);
                for j in col..self.cols {
                    a[i][j] = f * a[i][j] - g * a[r][j];
                }
                let d = a[i].iter().fold(0i128, |acc, &x| gcd(acc, x.abs()));
                if d > 1 {
                    a[i].iter_mut().for_each(|x| *x /= d);
                }
            }
            r += 1;
        }
        r
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> i128 {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return 1;
        }
        let mut a: Vec<Vec<i128>> = (0..n).map(|i| self.row(i).iter().map(|&x| x as i128).collect()).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k][k] == 0 {
                let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else { return 0 };
                a.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / prev;
                }
            }
            prev = a[k][k];
        }
        sign * a[n - 1][n - 1]
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        self.checked_mul(rhs).expect("integer overflow in matrix product")
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(i64::to_string).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_determinants() {
        assert_eq!(IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]).det(), 1);
        assert_eq!(IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).det(), -1);
        let m = IntMatrix::from_rows(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]]);
        assert_eq!(m.det(), -3);
        assert_eq!(m.rank(), 3);
        let s = IntMatrix::from_rows(&[vec![1, 2, 3], vec![2, 4, 6], vec![0, 0, 1]]);
        assert_eq!(s.det(), 0);
        assert_eq!(s.rank(), 2);
    }

    fn cofactor_det(m: &[Vec<i64>]) -> i128 {
        let n = m.len();
        if n == 1 {
            return m[0][0] as i128;
        }
        (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> =
                    m[1..].iter().map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect()).collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] as i128 * cofactor_det(&minor)
            })
            .sum()
    }

    proptest! {
        #[test]
        fn bareiss_matches_cofactor_expansion(rows in prop::collection::vec(prop::collection::vec(-6i64..7, 4), 4)) {
            let m = IntMatrix::from_rows(&rows);
            prop_assert_eq!(m.det(), cofactor_det(&rows));
            prop_assert_eq!(m.det() != 0, m.rank() == 4);
        }

        #[test]
        fn det_is_multiplicative(
            a in prop::collection::vec(prop::collection::vec(-4i64..5, 3), 3),
            b in prop::collection::vec(prop::collection::vec(-4i64..5, 3), 3),
        ) {
            let (a, b) = (IntMatrix::from_rows(&a), IntMatrix::from_rows(&b));
            prop_assert_eq!((&a * &b).det(), a.det() * b.det());
        }
    }
}
