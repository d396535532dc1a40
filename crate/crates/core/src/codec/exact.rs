//! Exact arithmetic coder over the static first-order model
//! q(b|a) = N(a,b)/N(a), using arbitrary-precision interval arithmetic.
//!
//! The encoder tracks the interval [low/den, (low+range)/den) with exact
//! integers and emits, once, the shortest dyadic subinterval, which costs at
//! most Σ log₂(N(a)/N(a,b)) + 2 bits over the whole sequence — the "+2"
//! overhead the per-sequence length bound requires. Deterministic steps
//! (N(a,b) = N(a)) carry zero information and are skipped symmetrically by
//! encoder and decoder.

use super::bitstream::{BitReader, BitWriter};
use super::counts::CountsTable;
use crate::error::{Error, Result};
use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Encodes the transitions of `x` (1-based symbols) under its own counts.
/// Returns the number of payload bits written.
pub fn encode_exact(x: &[u32], counts: &CountsTable, w: &mut BitWriter) -> usize {
    let before = w.bit_len();
    let mut low = BigUint::zero();
    let mut range = BigUint::one();
    let mut den = BigUint::one();
    for pair in x.windows(2) {
        let a = pair[0] as usize - 1;
        let b = pair[1] as usize - 1;
        let t = counts.row_sum(a);
        let c = counts.get(a, b);
        if c == t {
            continue; // deterministic step, zero bits
        }
        let cum = counts.cum(a, b);
        low = &low * t + &range * cum;
        range *= c;
        den *= t;
    }
    if den == range {
        return 0; // every step was deterministic
    }
    // smallest l0 with 2^l0 >= den/range, then one guard bit
    let mut l0 = (den.bits() - range.bits()) as usize;
    if (&range << l0) < den {
        l0 += 1;
    }
    let l = l0 + 1;
    // z = ceil(low * 2^l / den); the dyadic interval [z/2^l, (z+1)/2^l)
    // sits inside [low/den, (low+range)/den)
    let z = ((&low << l) + &den - 1u32) / &den;
    debug_assert!(z.bits() as usize <= l);
    for i in (0..l).rev() {
        w.write_bit(z.bit(i as u64));
    }
    w.bit_len() - before
}

/// Decodes n−1 transitions starting from `first` (1-based), consuming all
/// remaining bits of `r` (the encoder's payload plus any zero padding, which
/// does not change the encoded dyadic value).
pub fn decode_exact(
    r: &mut BitReader,
    counts: &CountsTable,
    first: u32,
    n: u64,
) -> Result<Vec<u32>> {
    let l = r.remaining();
    let mut num = BigUint::zero();
    for _ in 0..l {
        num <<= 1u32;
        if r.read_bit()? {
            num += 1u32;
        }
    }
    // the residual value v = num/d starts at the encoded dyadic u in [0,1)
    // and is renormalized per step: v <- (v*T - cum)/c
    let mut d = BigUint::one() << l;
    if num >= d {
        return Err(Error::ModelMismatch("payload value outside [0,1)".into()));
    }
    let mut x = Vec::with_capacity(n as usize);
    x.push(first);
    let mut a = first as usize - 1;
    for _ in 1..n {
        let t = counts.row_sum(a);
        if t == 0 {
            return Err(Error::ModelMismatch(format!(
                "reached state {} whose count row is empty",
                a + 1
            )));
        }
        let b = if let Some(b) = counts.deterministic_successor(a) {
            b
        } else {
            let scaled = &num * t;
            let f_big = &scaled / &d;
            if f_big.bits() > 64 {
                return Err(Error::ModelMismatch("corrupt payload: bucket overflow".into()));
            }
            let f: u64 = f_big.iter_u64_digits().next().unwrap_or(0);
            let (b, cum, c) = counts
                .bucket(a, f)
                .ok_or_else(|| Error::ModelMismatch("corrupt payload: value past row total".into()))?;
            num = scaled - cum * &d;
            d *= c;
            b
        };
        x.push(b as u32 + 1);
        a = b;
    }
    Ok(x)
}
