use serde::{Deserialize, Serialize};

/// Dense square integer matrix, row-major. Serializes as nested row arrays.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<i64>>", into = "Vec<Vec<i64>>")]
pub struct IntMatrix {
    n: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(n: usize) -> IntMatrix {
        IntMatrix { n, data: vec![0; n * n] }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Option<IntMatrix> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return None;
        }
        Some(IntMatrix { n, data: rows.iter().flatten().copied().collect() })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.n + j] = v;
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// `self + sign·selfᵀ`.
    pub fn plus_transpose(&self, sign: i64) -> IntMatrix {
        let mut out = self.clone();
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(i, j, self.get(i, j) + sign * self.get(j, i));
            }
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Places `blocks` along the diagonal.
    pub fn block_diagonal(blocks: &[IntMatrix]) -> IntMatrix {
        let n = blocks.iter().map(|b| b.n).sum();
        let mut out = IntMatrix::zeros(n);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.n {
                for j in 0..b.n {
                    out.set(off + i, off + j, b.get(i, j));
                }
            }
            off += b.n;
        }
        out
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.data.chunks(self.n.max(1)).take(self.n).map(|r| r.to_vec()).collect()
    }
}

impl TryFrom<Vec<Vec<i64>>> for IntMatrix {
    type Error = String;

    fn try_from(rows: Vec<Vec<i64>>) -> Result<Self, Self::Error> {
        IntMatrix::from_rows(&rows).ok_or_else(|| "matrix rows must form a square".to_string())
    }
}

impl From<IntMatrix> for Vec<Vec<i64>> {
    fn from(m: IntMatrix) -> Self {
        m.rows()
    }
}
