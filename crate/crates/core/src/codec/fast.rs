//! Fast arithmetic backend: a byte-oriented 64-bit range coder with carry
//! propagation into the in-memory output buffer. Trades the exact coder's
//! per-sequence length guarantee for O(1) work per symbol; the truncation
//! overhead is a fraction of a bit per symbol plus a flat 64-bit flush.

use super::bitstream::BitReader;
use super::counts::CountsTable;
use crate::error::{Error, Result};

const TOP: u64 = 1 << 56;
const MAX_TOTAL: u64 = 1 << 32;

struct RangeEncoder {
    low: u64,
    range: u64,
    out: Vec<u8>,
}

impl RangeEncoder {
    fn new() -> Self {
        RangeEncoder { low: 0, range: u64::MAX, out: Vec::new() }
    }

    fn encode(&mut self, cum: u64, freq: u64, tot: u64) {
        let unit = self.range / tot;
        let (low, carry) = self.low.overflowing_add(cum * unit);
        self.low = low;
        if carry {
            for byte in self.out.iter_mut().rev() {
                *byte = byte.wrapping_add(1);
                if *byte != 0 {
                    break;
                }
            }
        }
        self.range = unit * freq;
        while self.range < TOP {
            self.out.push((self.low >> 56) as u8);
            self.low <<= 8;
            self.range <<= 8;
        }
    }

    fn finish(mut self) -> Vec<u8> {
        for _ in 0..8 {
            self.out.push((self.low >> 56) as u8);
            self.low <<= 8;
        }
        self.out
    }
}

/// Encodes the transitions of `x` under its own counts; returns payload bytes.
pub fn encode_fast(x: &[u32], counts: &CountsTable) -> Result<Vec<u8>> {
    if counts.total() >= MAX_TOTAL {
        return Err(Error::Invalid("fast coder supports sequences shorter than 2^32".into()));
    }
    let mut enc = RangeEncoder::new();
    for pair in x.windows(2) {
        let a = pair[0] as usize - 1;
        let b = pair[1] as usize - 1;
        let t = counts.row_sum(a);
        let c = counts.get(a, b);
        if c == t {
            continue; // deterministic step, mirrored by the decoder
        }
        enc.encode(counts.cum(a, b), c, t);
    }
    Ok(enc.finish())
}

/// Decodes n−1 transitions starting from `first`, reading payload bits from
/// `r` (positions past the end of the stream read as zeros, matching the
/// decoder's bounded lookahead past the encoder's flush).
pub fn decode_fast(
    r: &mut BitReader,
    counts: &CountsTable,
    first: u32,
    n: u64,
) -> Result<Vec<u32>> {
    let mut code = 0u64;
    for _ in 0..64 {
        code = (code << 1) | r.read_bit_or_zero() as u64;
    }
    let mut range = u64::MAX;
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
            let unit = range / t;
            let f = (code / unit).min(t - 1);
            let (b, cum, c) = counts
                .bucket(a, f)
                .ok_or_else(|| Error::ModelMismatch("corrupt payload".into()))?;
            code = code.wrapping_sub(cum * unit);
            range = unit * c;
            while range < TOP {
                code = (code << 8) | r.read_bits_or_zero(8);
                range <<= 8;
            }
            b
        };
        x.push(b as u32 + 1);
        a = b;
    }
    Ok(x)
}
