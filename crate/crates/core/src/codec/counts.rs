//! First-order transition counts and the empirical entropy they induce.

use super::bitstream::{decode_uint, encode_uint, BitReader, BitWriter};
use crate::error::{Error, Result};

/// The k×k table N(a,b) of transition counts of a sequence, with row sums
/// N(a) = Σ_b N(a,b). Symbols are 1-based at the API surface and 0-based
/// internally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountsTable {
    k: usize,
    counts: Vec<u64>,
    row_sums: Vec<u64>,
}

impl CountsTable {
    pub fn from_counts(k: usize, counts: Vec<u64>) -> Result<Self> {
        if counts.len() != k * k {
            return Err(Error::Invalid(format!(
                "counts table for k={k} needs {} entries, got {}",
                k * k,
                counts.len()
            )));
        }
        let row_sums = (0..k).map(|a| counts[a * k..(a + 1) * k].iter().sum()).collect();
        Ok(CountsTable { k, counts, row_sums })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// N(a,b) with 0-based a, b.
    pub fn get(&self, a: usize, b: usize) -> u64 {
        self.counts[a * self.k + b]
    }

    /// N(a) with 0-based a.
    pub fn row_sum(&self, a: usize) -> u64 {
        self.row_sums[a]
    }

    /// Total transition count, n − 1.
    pub fn total(&self) -> u64 {
        self.row_sums.iter().sum()
    }

    /// Cumulative count Σ_{b' < b} N(a, b').
    pub fn cum(&self, a: usize, b: usize) -> u64 {
        self.counts[a * self.k..a * self.k + b].iter().sum()
    }

    /// The unique b with N(a,b) = N(a) > 0, if the row is deterministic.
    pub fn deterministic_successor(&self, a: usize) -> Option<usize> {
        let t = self.row_sums[a];
        if t == 0 {
            return None;
        }
        (0..self.k).find(|&b| self.get(a, b) == t)
    }

    /// Finds the b whose cumulative bucket [cum_b, cum_b + N(a,b)) contains f.
    pub fn bucket(&self, a: usize, f: u64) -> Option<(usize, u64, u64)> {
        if f >= self.row_sums[a] {
            return None;
        }
        let mut cum = 0u64;
        for b in 0..self.k {
            let c = self.get(a, b);
            if f < cum + c {
                return Some((b, cum, c));
            }
            cum += c;
        }
        None
    }
}

/// Counts the transitions of a 1-based symbol sequence over alphabet [1, k].
pub fn count_transitions(x: &[u32], k: usize) -> Result<CountsTable> {
    if x.len() < 2 {
        return Err(Error::Invalid(format!(
            "need a sequence of length >= 2 to count transitions, got {}",
            x.len()
        )));
    }
    for &s in x {
        if s == 0 || s as usize > k {
            return Err(Error::Alphabet { symbol: s, k });
        }
    }
    let mut counts = vec![0u64; k * k];
    for w in x.windows(2) {
        counts[(w[0] as usize - 1) * k + (w[1] as usize - 1)] += 1;
    }
    CountsTable::from_counts(k, counts)
}

/// First-order empirical entropy in bits/symbol:
/// H₁ = Σ_{a,b} N(a,b)/(n−1) · log₂(N(a)/N(a,b)), zero-count terms omitted.
pub fn empirical_entropy_h1(c: &CountsTable) -> f64 {
    let total = c.total() as f64;
    let mut h = 0.0;
    for a in 0..c.k() {
        let t = c.row_sum(a) as f64;
        for b in 0..c.k() {
            let n_ab = c.get(a, b) as f64;
            if n_ab > 0.0 {
                h += n_ab / total * (t / n_ab).log2();
            }
        }
    }
    h
}

/// Emits all k² counts in row-major order via the Elias-gamma code.
/// Returns the number of bits written.
pub fn encode_params(c: &CountsTable, w: &mut BitWriter) -> usize {
    let before = w.bit_len();
    for a in 0..c.k() {
        for b in 0..c.k() {
            encode_uint(w, c.get(a, b));
        }
    }
    w.bit_len() - before
}

/// Inverse of [`encode_params`] given k.
pub fn decode_params(r: &mut BitReader, k: usize) -> Result<CountsTable> {
    let mut counts = Vec::with_capacity(k * k);
    for _ in 0..k * k {
        counts.push(decode_uint(r)?);
    }
    CountsTable::from_counts(k, counts)
}

/// The header budget 2k²·log₂(n/k²+1) + k² in bits.
pub fn params_bound_bits(k: usize, n: u64) -> f64 {
    let k2 = (k * k) as f64;
    2.0 * k2 * (n as f64 / k2 + 1.0).log2() + k2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alternating_counts() {
        let c = count_transitions(&[1, 2, 1, 2, 1], 2).unwrap();
        assert_eq!(c.get(0, 1), 2);
        assert_eq!(c.get(1, 0), 2);
        assert_eq!(c.get(0, 0), 0);
        assert_eq!(c.get(1, 1), 0);
        assert_eq!(c.total(), 4);
    }

    #[test]
    fn constant_sequence_counts() {
        for k in [1usize, 2] {
            let c = count_transitions(&[1, 1, 1], k).unwrap();
            assert_eq!(c.get(0, 0), 2);
        }
    }

    #[test]
    fn length_one_rejected() {
        assert!(count_transitions(&[1], 2).is_err());
    }

    #[test]
    fn out_of_alphabet_rejected() {
        assert!(matches!(
            count_transitions(&[1, 3], 2),
            Err(Error::Alphabet { symbol: 3, k: 2 })
        ));
        assert!(matches!(
            count_transitions(&[0, 1], 2),
            Err(Error::Alphabet { symbol: 0, k: 2 })
        ));
    }

    #[test]
    fn entropy_examples() {
        let c = count_transitions(&[1, 2, 1, 2, 1], 2).unwrap();
        assert_eq!(empirical_entropy_h1(&c), 0.0);
        let uniform = CountsTable::from_counts(2, vec![5, 5, 5, 5]).unwrap();
        assert!((empirical_entropy_h1(&uniform) - 1.0).abs() < 1e-12);
        let constant = count_transitions(&[2, 2, 2, 2], 2).unwrap();
        assert_eq!(empirical_entropy_h1(&constant), 0.0);
    }

    #[test]
    fn params_hand_encoded_example() {
        // counts (0,2,2,0) -> codewords "1","011","011","1" -> 8 bits
        let c = count_transitions(&[1, 2, 1, 2, 1], 2).unwrap();
        let mut w = BitWriter::new();
        let bits = encode_params(&c, &mut w);
        assert_eq!(bits, 8);
        let bytes = w.into_bytes();
        assert_eq!(bytes[0], 0b10110111);
        assert!(bits as f64 <= params_bound_bits(2, 5));
    }

    #[test]
    fn params_round_trip_zero_table() {
        let c = CountsTable::from_counts(2, vec![0; 4]).unwrap();
        let mut w = BitWriter::new();
        let bits = encode_params(&c, &mut w);
        assert_eq!(bits, 4);
        let bytes = w.into_bytes();
        let mut r = BitReader::new(&bytes);
        assert_eq!(decode_params(&mut r, 2).unwrap(), c);
    }

    #[test]
    fn bucket_lookup() {
        let c = CountsTable::from_counts(2, vec![3, 1, 0, 2]).unwrap();
        assert_eq!(c.bucket(0, 0), Some((0, 0, 3)));
        assert_eq!(c.bucket(0, 2), Some((0, 0, 3)));
        assert_eq!(c.bucket(0, 3), Some((1, 3, 1)));
        assert_eq!(c.bucket(0, 4), None);
        assert_eq!(c.deterministic_successor(1), Some(1));
        assert_eq!(c.deterministic_successor(0), None);
    }
}
