use std::collections::BTreeSet;

use super::permutation::GraphPermutation;

/// Peak / valley / slope partition of {1, …, k+1}, ladder indices and
/// degree of a permutation.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct VertexClassification {
    pub peaks: BTreeSet<usize>,
    pub valleys: BTreeSet<usize>,
    pub slopes: BTreeSet<usize>,
    pub ladder: BTreeSet<usize>,
    pub degree: usize,
}

/// Index i is classified by the point (σ̃⁻¹(i), i): with j = σ̃⁻¹(i) ≤ k it
/// is a peak when σ̃(j−1) > σ(j) < σ̃(j+1), a valley when
/// σ̃(j−1) < σ(j) > σ̃(j+1), and a slope otherwise; k+1 is a valley. A
/// valley or slope i is a ladder index when |σ̃⁻¹(i) − σ̃⁻¹(i−1)| = 1, and
/// the degree counts the non-ladder indices.
pub fn classify(sigma: &GraphPermutation) -> VertexClassification {
    let k = sigma.k();
    let mut c = VertexClassification {
        peaks: BTreeSet::new(),
        valleys: BTreeSet::new(),
        slopes: BTreeSet::new(),
        ladder: BTreeSet::new(),
        degree: 0,
    };
    for i in 1..=k + 1 {
        let j = sigma.tilde_inverse(i);
        if i == k + 1 {
            c.valleys.insert(i);
        } else {
            let (prev, here, next) = (sigma.tilde(j - 1), sigma.tilde(j), sigma.tilde(j + 1));
            if prev > here && here < next {
                c.peaks.insert(i);
            } else if prev < here && here > next {
                c.valleys.insert(i);
            } else {
                c.slopes.insert(i);
            }
        }
        if !c.peaks.contains(&i) && j.abs_diff(sigma.tilde_inverse(i - 1)) == 1 {
            c.ladder.insert(i);
        }
    }
    c.degree = k + 1 - c.ladder.len();
    c
}
