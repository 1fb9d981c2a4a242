//! Dense square integer matrices, just enough exact linear algebra for the
//! lattice layer: products, transposes, application to vectors, and an exact
//! determinant for test-sized matrices.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Square integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "Vec<Vec<i64>>", try_from = "Vec<Vec<i64>>")]
pub struct IntMatrix {
    n: usize,
    a: Vec<i64>,
}

impl std::fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.n, self.n)?;
        for i in 0..self.n {
            writeln!(f, "  {:?}", &self.a[i * self.n..(i + 1) * self.n])?;
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        IntMatrix { n, a: vec![0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        let mut a = Vec::with_capacity(n * n);
        for r in rows {
            if r.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: r.len() });
            }
            a.extend_from_slice(r);
        }
        Ok(IntMatrix { n, a })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    /// Exact product; errors on i64 overflow instead of wrapping.
    pub fn mul(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.n != rhs.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: rhs.n });
        }
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc: i128 = 0;
                for k in 0..n {
                    acc += self[(i, k)] as i128 * rhs[(k, j)] as i128;
                }
                out[(i, j)] = i64::try_from(acc).map_err(|_| Error::Overflow("matrix product"))?;
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[i64]) -> Result<Vec<i64>> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: v.len() });
        }
        let n = self.n;
        let mut out = vec![0i64; n];
        for i in 0..n {
            let mut acc: i128 = 0;
            for k in 0..n {
                acc += self[(i, k)] as i128 * v[k] as i128;
            }
            out[i] = i64::try_from(acc).map_err(|_| Error::Overflow("matrix apply"))?;
        }
        Ok(out)
    }

    /// Exact determinant via fraction-free (Bareiss) elimination.
    /// Intended for small matrices; intermediate values are i128 minors.
    pub fn det(&self) -> Result<i128> {
        let n = self.n;
        if n == 0 {
            return Ok(1);
        }
        let mut m: Vec<i128> = self.a.iter().map(|&x| x as i128).collect();
        let mut sign: i128 = 1;
        let mut prev: i128 = 1;
        for k in 0..n - 1 {
            if m[k * n + k] == 0 {
                let piv = (k + 1..n).find(|&r| m[r * n + k] != 0);
                match piv {
                    Some(r) => {
                        for c in 0..n {
                            m.swap(k * n + c, r * n + c);
                        }
                        sign = -sign;
                    }
                    None => return Ok(0),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = m[i * n + j]
                        .checked_mul(m[k * n + k])
                        .and_then(|x| {
                            m[i * n + k].checked_mul(m[k * n + j]).and_then(|y| x.checked_sub(y))
                        })
                        .ok_or(Error::Overflow("determinant"))?;
                    m[i * n + j] = num / prev;
                }
                m[i * n + k] = 0;
            }
            prev = m[k * n + k];
        }
        Ok(sign * m[n * n - 1])
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.a[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.a[i * self.n + j]
    }
}

impl From<IntMatrix> for Vec<Vec<i64>> {
    fn from(m: IntMatrix) -> Self {
        (0..m.n).map(|i| m.a[i * m.n..(i + 1) * m.n].to_vec()).collect()
    }
}

impl TryFrom<Vec<Vec<i64>>> for IntMatrix {
    type Error = Error;
    fn try_from(rows: Vec<Vec<i64>>) -> Result<Self> {
        IntMatrix::from_rows(&rows)
    }
}
