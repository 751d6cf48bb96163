use itertools::Itertools;

use super::GraphError;

/// A permutation σ of {1, …, k} together with its extension σ̃ to
/// {0, …, k+1} fixing both endpoints.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GraphPermutation {
    /// σ̃(0..=k+1)
    tilde: Vec<usize>,
    /// σ̃⁻¹(0..=k+1)
    inverse: Vec<usize>,
}

impl GraphPermutation {
    /// From the images (σ(1), …, σ(k)), 1-based.
    pub fn new(images: &[usize]) -> Result<Self, GraphError> {
        let k = images.len();
        let mut seen = vec![false; k + 1];
        for &s in images {
            if s == 0 || s > k || seen[s] {
                return Err(GraphError::NotAPermutation(images.to_vec()));
            }
            seen[s] = true;
        }
        let mut tilde = Vec::with_capacity(k + 2);
        tilde.push(0);
        tilde.extend_from_slice(images);
        tilde.push(k + 1);
        let mut inverse = vec![0; k + 2];
        for (j, &s) in tilde.iter().enumerate() {
            inverse[s] = j;
        }
        Ok(Self { tilde, inverse })
    }

    pub fn identity(k: usize) -> Self {
        Self::new(&(1..=k).collect::<Vec<_>>()).expect("identity is a permutation")
    }

    /// Every permutation of {1, …, k} in lexicographic order of images.
    pub fn all(k: usize) -> impl Iterator<Item = Self> {
        (1..=k).permutations(k).map(|p| Self::new(&p).expect("valid"))
    }

    pub fn k(&self) -> usize {
        self.tilde.len() - 2
    }

    /// σ(j) for j ∈ 1..=k.
    pub fn sigma(&self, j: usize) -> usize {
        assert!((1..=self.k()).contains(&j));
        self.tilde[j]
    }

    /// σ̃(j) for j ∈ 0..=k+1.
    pub fn tilde(&self, j: usize) -> usize {
        self.tilde[j]
    }

    /// σ̃⁻¹(i) for i ∈ 0..=k+1.
    pub fn tilde_inverse(&self, i: usize) -> usize {
        self.inverse[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.tilde[1..self.tilde.len() - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.tilde.iter().enumerate().all(|(j, &s)| j == s)
    }
}

impl std::fmt::Display for GraphPermutation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({})", self.images().iter().map(|s| s.to_string()).join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extension_fixes_endpoints() {
        let s = GraphPermutation::new(&[3, 1, 2]).unwrap();
        assert_eq!(s.tilde(0), 0);
        assert_eq!(s.tilde(4), 4);
        assert_eq!(s.sigma(1), 3);
        assert_eq!(s.tilde_inverse(3), 1);
        assert_eq!(s.to_string(), "(3 1 2)");
    }

    #[test]
    fn rejects_non_permutations() {
        assert!(GraphPermutation::new(&[1, 1]).is_err());
        assert!(GraphPermutation::new(&[0, 1]).is_err());
        assert!(GraphPermutation::new(&[3, 1]).is_err());
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(GraphPermutation::all(4).count(), 24);
        assert_eq!(GraphPermutation::all(0).count(), 1);
        assert!(GraphPermutation::all(0).next().unwrap().is_identity());
    }
}
