//! MSB-first bit-level I/O plus the Elias-gamma integer code.

use crate::error::{Error, Result};

/// Accumulates bits MSB-first within each byte.
#[derive(Debug, Default)]
pub struct BitWriter {
    bytes: Vec<u8>,
    bit_len: usize,
}

impl BitWriter {
    pub fn new() -> Self {
        BitWriter::default()
    }

    pub fn bit_len(&self) -> usize {
        self.bit_len
    }

    pub fn write_bit(&mut self, bit: bool) {
        let slot = self.bit_len % 8;
        if slot == 0 {
            self.bytes.push(0);
        }
        if bit {
            *self.bytes.last_mut().unwrap() |= 1 << (7 - slot);
        }
        self.bit_len += 1;
    }

    /// Writes the low `width` bits of `value`, most significant first.
    pub fn write_bits(&mut self, value: u64, width: usize) {
        debug_assert!(width <= 64);
        for i in (0..width).rev() {
            self.write_bit((value >> i) & 1 == 1);
        }
    }

    /// Pads with zero bits to the next byte boundary and returns the buffer.
    pub fn into_bytes(self) -> Vec<u8> {
        self.bytes
    }
}

/// Reads bits MSB-first from a byte slice.
#[derive(Debug)]
pub struct BitReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> BitReader<'a> {
    pub fn new(bytes: &'a [u8]) -> Self {
        BitReader { bytes, pos: 0 }
    }

    pub fn remaining(&self) -> usize {
        self.bytes.len() * 8 - self.pos
    }

    pub fn read_bit(&mut self) -> Result<bool> {
        if self.pos >= self.bytes.len() * 8 {
            return Err(Error::TruncatedStream);
        }
        let bit = (self.bytes[self.pos / 8] >> (7 - self.pos % 8)) & 1 == 1;
        self.pos += 1;
        Ok(bit)
    }

    /// Reads a bit, treating positions past the end of the stream as zeros
    /// (used by the range decoder, which reads a bounded lookahead).
    pub fn read_bit_or_zero(&mut self) -> bool {
        if self.pos >= self.bytes.len() * 8 {
            self.pos += 1;
            return false;
        }
        self.read_bit().unwrap()
    }

    /// Like [`BitReader::read_bits`] but zero-filled past the end.
    pub fn read_bits_or_zero(&mut self, width: usize) -> u64 {
        let mut v = 0u64;
        for _ in 0..width {
            v = (v << 1) | self.read_bit_or_zero() as u64;
        }
        v
    }

    pub fn read_bits(&mut self, width: usize) -> Result<u64> {
        debug_assert!(width <= 64);
        let mut v = 0u64;
        for _ in 0..width {
            v = (v << 1) | self.read_bit()? as u64;
        }
        Ok(v)
    }
}

/// Elias-gamma code for m ≥ 0: with q = floor(log₂(m+1)) and r = m+1−2^q,
/// emit q zeros, a one, then r in exactly q bits. Length 2q+1 ≤ 2log₂(m+1)+1.
pub fn encode_uint(w: &mut BitWriter, m: u64) {
    debug_assert!(m < u64::MAX);
    let v = m + 1;
    let q = 63 - v.leading_zeros() as usize;
    w.write_bits(0, q);
    w.write_bit(true);
    w.write_bits(v - (1 << q), q);
}

/// Inverse of [`encode_uint`].
pub fn decode_uint(r: &mut BitReader) -> Result<u64> {
    let mut q = 0usize;
    while !r.read_bit()? {
        q += 1;
        if q > 63 {
            return Err(Error::TruncatedStream);
        }
    }
    let rem = r.read_bits(q)?;
    Ok((1u64 << q) + rem - 1)
}

/// Codeword length of [`encode_uint`] without emitting it.
pub fn uint_code_len(m: u64) -> usize {
    let q = 63 - (m + 1).leading_zeros() as usize;
    2 * q + 1
}
