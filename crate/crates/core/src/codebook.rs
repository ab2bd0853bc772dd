//! Spatial constellation: which antennas are active for each GSSK symbol.
//!
//! All `C(N_t, n_t)` combinations are enumerated in lexicographic order and the
//! first `2^b_H` of them are kept, with `b_H = floor(log2 C(N_t, n_t))`. Entry
//! `i` carries the natural-binary label of `i`.

use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Sorted, distinct antenna indices switched on together.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AntennaCombination {
    indices: Vec<usize>,
}

impl AntennaCombination {
    /// Builds a combination from strictly increasing indices.
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::arg("antenna combination is empty"));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::arg(format!(
                "antenna indices {indices:?} are not strictly increasing"
            )));
        }
        Ok(AntennaCombination { indices })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    combos: Vec<AntennaCombination>,
    bits_per_symbol: u32,
    m_h_full: u64,
    n_transmit: usize,
}

impl Codebook {
    pub fn combos(&self) -> &[AntennaCombination] {
        &self.combos
    }

    pub fn len(&self) -> usize {
        self.combos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.combos.is_empty()
    }

    /// `b_H`, spatial bits per symbol.
    pub fn bits_per_symbol(&self) -> u32 {
        self.bits_per_symbol
    }

    /// `M_H = C(N_t, n_t)` before truncation to a power of two.
    pub fn m_h_full(&self) -> u64 {
        self.m_h_full
    }

    pub fn n_transmit(&self) -> usize {
        self.n_transmit
    }

    pub fn n_active(&self) -> usize {
        self.combos[0].len()
    }

    /// Set when only one combination survives, so no spatial bits are carried.
    pub fn is_degenerate(&self) -> bool {
        self.bits_per_symbol == 0
    }

    pub fn label(&self, index: usize) -> u32 {
        debug_assert!(index < self.combos.len());
        index as u32
    }

    /// Codebook entry carrying `bits`.
    pub fn index_of_label(&self, bits: u32) -> usize {
        bits as usize
    }

    /// Total Hamming weight over all ordered pairs, `sum_j sum_{k != j} M(j, k)`.
    pub fn total_pair_weight(&self) -> u64 {
        let n = self.combos.len() as u64;
        // Each bit position differs in exactly half of the ordered pairs.
        n * n / 2 * self.bits_per_symbol as u64
    }

    /// CSV dump with header `index,bits,antennas`; antennas are `-`-separated.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,bits,antennas\n");
        for (i, combo) in self.combos.iter().enumerate() {
            let bits = if self.bits_per_symbol == 0 {
                String::new()
            } else {
                format!("{:0width$b}", i, width = self.bits_per_symbol as usize)
            };
            let antennas: Vec<String> = combo.indices.iter().map(|a| a.to_string()).collect();
            writeln!(out, "{i},{bits},{}", antennas.join("-")).unwrap();
        }
        out
    }
}

/// `C(n, k)` with saturation at `u64::MAX`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

fn check_counts(n_transmit: usize, n_active: usize) -> Result<()> {
    if n_active == 0 || n_active > n_transmit {
        return Err(Error::arg(format!(
            "need 1 <= n_active <= n_transmit, got n_active = {n_active}, n_transmit = {n_transmit}"
        )));
    }
    let count = binomial(n_transmit as u64, n_active as u64);
    if count > crate::config::MAX_COMBINATIONS {
        return Err(Error::arg(format!("C({n_transmit}, {n_active}) = {count} is too large")));
    }
    Ok(())
}

/// Every `n_active`-subset of `0..n_transmit`, lexicographically ordered.
pub fn enumerate_combinations(n_transmit: usize, n_active: usize) -> Result<Vec<AntennaCombination>> {
    check_counts(n_transmit, n_active)?;
    let mut out = Vec::with_capacity(binomial(n_transmit as u64, n_active as u64) as usize);
    let mut current: Vec<usize> = (0..n_active).collect();
    loop {
        out.push(AntennaCombination { indices: current.clone() });
        // Rightmost position that can still advance.
        let Some(pos) = (0..n_active).rev().find(|&i| current[i] < n_transmit - n_active + i) else {
            break;
        };
        current[pos] += 1;
        for i in pos + 1..n_active {
            current[i] = current[i - 1] + 1;
        }
    }
    Ok(out)
}

pub fn build_codebook(n_transmit: usize, n_active: usize) -> Result<Codebook> {
    let mut combos = enumerate_combinations(n_transmit, n_active)?;
    let m_h_full = combos.len() as u64;
    let bits_per_symbol = 63 - m_h_full.leading_zeros();
    combos.truncate(1usize << bits_per_symbol);
    Ok(Codebook {
        combos,
        bits_per_symbol,
        m_h_full,
        n_transmit,
    })
}

/// Hamming distance between the labels of entries `j` and `k`.
pub fn bit_distance(codebook: &Codebook, j: usize, k: usize) -> Result<u32> {
    let n = codebook.len();
    if j >= n || k >= n {
        return Err(Error::arg(format!("codebook index out of range ({j}, {k}) for size {n}")));
    }
    Ok((codebook.label(j) ^ codebook.label(k)).count_ones())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn idx(c: &[AntennaCombination]) -> Vec<Vec<usize>> {
        c.iter().map(|c| c.indices().to_vec()).collect()
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(
            idx(&enumerate_combinations(3, 2).unwrap()),
            vec![vec![0, 1], vec![0, 2], vec![1, 2]]
        );
        assert_eq!(enumerate_combinations(5, 3).unwrap().len(), 10);
        assert_eq!(idx(&enumerate_combinations(2, 1).unwrap()), vec![vec![0], vec![1]]);
        assert!(enumerate_combinations(2, 3).is_err());
        assert!(enumerate_combinations(3, 0).is_err());
    }

    #[test]
    fn codebook_sizes() {
        let cb = build_codebook(5, 3).unwrap();
        assert_eq!((cb.bits_per_symbol(), cb.len(), cb.m_h_full()), (3, 8, 10));
        assert!(!cb.is_degenerate());
        let cb = build_codebook(8, 2).unwrap();
        assert_eq!((cb.m_h_full(), cb.bits_per_symbol(), cb.len()), (28, 4, 16));
        let cb = build_codebook(2, 2).unwrap();
        assert_eq!((cb.bits_per_symbol(), cb.len()), (0, 1));
        assert!(cb.is_degenerate());
    }

    #[test]
    fn distances() {
        let cb = build_codebook(5, 3).unwrap();
        assert_eq!(bit_distance(&cb, 0, 7).unwrap(), 3);
        assert_eq!(bit_distance(&cb, 4, 4).unwrap(), 0);
        assert_eq!(bit_distance(&cb, 1, 3).unwrap(), 1);
        assert!(bit_distance(&cb, 0, 8).is_err());
    }

    #[test]
    fn csv_dump() {
        let csv = build_codebook(3, 2).unwrap().to_csv();
        assert_eq!(csv, "index,bits,antennas\n0,0,0-1\n1,1,0-2\n");
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 3), 10);
        assert_eq!(binomial(28, 0), 1);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(64, 32), 1_832_624_140_942_590_534);
    }

    proptest! {
        #[test]
        fn enumeration_is_lexicographic_and_complete(n in 1usize..10, k in 1usize..10) {
            prop_assume!(k <= n);
            let all = enumerate_combinations(n, k).unwrap();
            prop_assert_eq!(all.len() as u64, binomial(n as u64, k as u64));
            for w in all.windows(2) {
                prop_assert!(w[0] < w[1]);
            }
            for c in &all {
                prop_assert_eq!(c.len(), k);
                prop_assert!(c.indices().iter().all(|&a| a < n));
            }
        }

        #[test]
        fn pair_weight_matches_brute_force(n in 2usize..9, k in 1usize..5) {
            prop_assume!(k < n);
            let cb = build_codebook(n, k).unwrap();
            let mut total = 0u64;
            let mut labels = std::collections::HashSet::new();
            for j in 0..cb.len() {
                labels.insert(cb.label(j));
                for l in 0..cb.len() {
                    if j != l {
                        total += bit_distance(&cb, j, l).unwrap() as u64;
                    }
                }
            }
            let size = 1u64 << cb.bits_per_symbol();
            prop_assert_eq!(labels.len() as u64, size);
            prop_assert_eq!(total, size * cb.bits_per_symbol() as u64 * (size / 2));
            prop_assert_eq!(total, cb.total_pair_weight());
        }
    }
}
