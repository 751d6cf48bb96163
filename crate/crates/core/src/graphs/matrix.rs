use itertools::Itertools;
use rand::seq::index::sample;

use super::permutation::GraphPermutation;
use super::GraphError;
use crate::rng::stream_rng;

/// Largest size for which total unimodularity is checked exhaustively.
pub const EXHAUSTIVE_TU_MAX: usize = 7;
/// Subdeterminants drawn in sampling mode.
pub const DEFAULT_TU_SAMPLES: usize = 100_000;

/// Square integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    entries: Vec<i64>,
}

impl IntMatrix {
    pub fn new(n: usize, entries: Vec<i64>) -> Result<Self, GraphError> {
        if entries.len() != n * n {
            return Err(GraphError::InvalidParameter(format!(
                "{} entries do not form a {n}×{n} matrix",
                entries.len()
            )));
        }
        Ok(Self { n, entries })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self, GraphError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(GraphError::InvalidParameter("rows must form a square matrix".into()));
        }
        Self::new(n, rows.concat())
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        Self { n, entries }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        self.entries.chunks(self.n).map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// Determinant of the submatrix on the given rows and columns, by
    /// fraction-free (Bareiss) elimination.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> i64 {
        let m = rows.len();
        let mut a: Vec<i128> = rows
            .iter()
            .flat_map(|&r| cols.iter().map(move |&c| (r, c)))
            .map(|(r, c)| self.get(r, c) as i128)
            .collect();
        bareiss(&mut a, m) as i64
    }

    pub fn determinant(&self) -> i64 {
        let idx: Vec<usize> = (0..self.n).collect();
        self.minor(&idx, &idx)
    }

    pub fn is_invertible(&self) -> bool {
        self.determinant() != 0
    }

    /// Every square subdeterminant in {−1, 0, 1}; exhaustive up to size 7.
    pub fn is_totally_unimodular(&self) -> Result<bool, GraphError> {
        if self.n > EXHAUSTIVE_TU_MAX {
            return Err(GraphError::SizeTooLargeForExhaustive { size: self.n, max: EXHAUSTIVE_TU_MAX });
        }
        if self.entries.iter().any(|e| e.abs() > 1) {
            return Ok(false);
        }
        for m in 2..=self.n {
            for rows in (0..self.n).combinations(m) {
                for cols in (0..self.n).combinations(m) {
                    if self.minor(&rows, &cols).abs() > 1 {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Randomized check on `samples` random square submatrices.
    pub fn is_totally_unimodular_sampled(&self, samples: usize, seed: u64) -> bool {
        if self.entries.iter().any(|e| e.abs() > 1) {
            return false;
        }
        let mut rng = stream_rng(seed, 0);
        (0..samples).all(|_| {
            let m = rand::Rng::gen_range(&mut rng, 1..=self.n);
            let mut rows = sample(&mut rng, self.n, m).into_vec();
            let mut cols = sample(&mut rng, self.n, m).into_vec();
            rows.sort_unstable();
            cols.sort_unstable();
            self.minor(&rows, &cols).abs() <= 1
        })
    }

    /// Whitespace-separated integer grid, one row per line.
    pub fn to_text(&self) -> String {
        self.entries
            .chunks(self.n)
            .map(|r| r.iter().map(|v| format!("{v:>2}")).join(" "))
            .join("\n")
            + "\n"
    }

    pub fn from_text(s: &str) -> Result<Self, GraphError> {
        let rows: Vec<Vec<i64>> = s
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| {
                l.split_whitespace()
                    .map(|t| t.parse::<i64>().map_err(|e| GraphError::InvalidParameter(e.to_string())))
                    .collect()
            })
            .collect::<Result<_, _>>()?;
        Self::from_rows(&rows)
    }
}

fn bareiss(a: &mut [i128], n: usize) -> i128 {
    if n == 0 {
        return 1;
    }
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k * n + k] == 0 {
            match (k + 1..n).find(|&r| a[r * n + k] != 0) {
                Some(r) => {
                    for c in 0..n {
                        a.swap(k * n + c, r * n + c);
                    }
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i * n + j] = (a[i * n + j] * a[k * n + k] - a[i * n + k] * a[k * n + j]) / prev;
            }
        }
        prev = a[k * n + k];
    }
    sign * a[(n - 1) * n + n - 1]
}

/// Momentum matrix: M_ij = 1 if σ̃(j−1) < i ≤ σ̃(j), −1 if
/// σ̃(j) < i ≤ σ̃(j−1), 0 otherwise (i, j ∈ 1..=k+1). Rows give the lower
/// momenta p̃ = M p in terms of the upper momenta p.
pub fn build_m(sigma: &GraphPermutation) -> IntMatrix {
    let n = sigma.k() + 1;
    let mut entries = vec![0; n * n];
    for i in 1..=n {
        for j in 1..=n {
            let (lo, hi) = (sigma.tilde(j - 1), sigma.tilde(j));
            entries[(i - 1) * n + (j - 1)] = if lo < i && i <= hi {
                1
            } else if hi < i && i <= lo {
                -1
            } else {
                0
            };
        }
    }
    IntMatrix { n, entries }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinants() {
        let m = IntMatrix::from_rows(&[vec![2, 1, 0], vec![1, 3, 1], vec![0, 1, 4]]).unwrap();
        assert_eq!(m.determinant(), 18);
        let z = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(z.determinant(), -1);
        let ones = IntMatrix::from_rows(&[vec![1, 1], vec![1, 1]]).unwrap();
        assert!(!ones.is_invertible());
    }

    #[test]
    fn unimodularity_controls() {
        let two = IntMatrix::from_rows(&[vec![2, 0], vec![0, 1]]).unwrap();
        assert!(!two.is_totally_unimodular().unwrap());
        // incidence-like matrix with a ±2 minor
        let bad = IntMatrix::from_rows(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]).unwrap();
        assert!(!bad.is_totally_unimodular().unwrap());
        assert!(IntMatrix::identity(8).is_totally_unimodular().is_err());
        assert!(IntMatrix::identity(8).is_totally_unimodular_sampled(1000, 1));
    }

    #[test]
    fn transposition_matrix() {
        let m = build_m(&GraphPermutation::new(&[2, 1]).unwrap());
        assert_eq!(m.rows(), vec![vec![1, 0, 0], vec![1, -1, 1], vec![0, 0, 1]]);
        assert_eq!(IntMatrix::from_text(&m.to_text()).unwrap(), m);
    }
}
