use std::collections::BTreeMap;

use rayon::prelude::*;

use super::classify::classify;
use super::permutation::GraphPermutation;
use super::GraphError;

/// Largest k for which P_k is enumerated.
pub const MAX_CENSUS_K: usize = 8;

/// Number of permutations of each degree in P_k.
pub fn degree_census(k: usize) -> Result<BTreeMap<usize, u64>, GraphError> {
    if k > MAX_CENSUS_K {
        return Err(GraphError::KTooLarge { k, max: MAX_CENSUS_K });
    }
    let perms: Vec<GraphPermutation> = GraphPermutation::all(k).collect();
    Ok(perms
        .par_iter()
        .map(|s| {
            let mut m = BTreeMap::new();
            m.insert(classify(s).degree, 1u64);
            m
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (d, c) in b {
                *a.entry(d).or_insert(0) += c;
            }
            a
        }))
}

/// Smallest C with #{d(σ) = d} ≤ (Ck)^d for every d > 0 in the given
/// censuses (keyed by k).
pub fn envelope_constant(censuses: &BTreeMap<usize, BTreeMap<usize, u64>>) -> f64 {
    censuses
        .iter()
        .flat_map(|(&k, census)| {
            census
                .iter()
                .filter(|(&d, _)| d > 0)
                .map(move |(&d, &count)| (count as f64).powf(1.0 / d as f64) / k as f64)
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_censuses() {
        assert_eq!(degree_census(2).unwrap(), BTreeMap::from([(0, 1), (2, 1)]));
        let c3 = degree_census(3).unwrap();
        assert_eq!(c3.values().sum::<u64>(), 6);
        assert_eq!(c3[&0], 1);
        assert!(degree_census(9).is_err());
    }
}
