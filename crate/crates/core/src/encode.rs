//! Digit-interlacing encoding of real vectors as totally ordered keys.
//!
//! A vector `x` in `R^d` becomes the bit string
//!
//! ```text
//! 1 c_1 ... c_d | a_{1,1} ... a_{d,1} a_{1,2} ... a_{d,K} | b_{1,1} ... b_{d,1} ... b_{d,L}
//! ```
//!
//! where `c_i = 1` iff `x_i >= 0`, `a_{i,1} .. a_{i,K}` are the binary digits
//! of the integer part of `|x_i|` (most significant first, zero padded to
//! `K` digits) and `b_{i,1} .. b_{i,L}` are the first `L` fractional binary
//! digits of `|x_i|`, truncated. The leading `1` keeps the sign prefix
//! unambiguous. Keys compare as unsigned big integers, which for keys of the
//! same length is lexicographic order on the bits.
//!
//! This layout is a stable external format. Serialized keys are big-endian,
//! most significant bit first. Keys cannot be decoded back to vectors.
//!
//! Dyadic rationals use their terminating expansion. The map is injective on
//! any set of vectors whose coordinates differ within the `K + L` digit
//! budget; coarser differences collide and are then ranked as ties.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::points::PointSet;
use crate::scalar::Scalar;

pub const DEFAULT_INT_BITS: u32 = 16;
pub const DEFAULT_FRAC_BITS: u32 = 96;
/// Upper limit on `K` and `L`, well beyond the range of `f64`.
pub const MAX_DIGITS: u32 = 1 << 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncodingParams {
    /// Number of coordinates.
    pub dim: usize,
    /// Binary digits for the integer part of each `|x_i|`.
    pub int_bits: u32,
    /// Binary digits kept from the fractional part of each `|x_i|`.
    pub frac_bits: u32,
}

impl EncodingParams {
    pub fn new(dim: usize, int_bits: u32, frac_bits: u32) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Params(
                "encoding dimension must be at least 1".into(),
            ));
        }
        if int_bits == 0 || frac_bits == 0 {
            return Err(Error::Params(
                "integer and fractional digit counts must be positive".into(),
            ));
        }
        if int_bits > MAX_DIGITS || frac_bits > MAX_DIGITS {
            return Err(Error::Params(format!(
                "digit counts are limited to {MAX_DIGITS}"
            )));
        }
        Ok(Self {
            dim,
            int_bits,
            frac_bits,
        })
    }

    /// `K = 16`, `L = 96`.
    pub fn with_defaults(dim: usize) -> Result<Self> {
        Self::new(dim, DEFAULT_INT_BITS, DEFAULT_FRAC_BITS)
    }

    /// Total key length `1 + d + d (K + L)`.
    pub fn key_bits(&self) -> usize {
        1 + self.dim + self.dim * (self.int_bits as usize + self.frac_bits as usize)
    }
}

/// Fixed-length bit string ordered as an unsigned big integer.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EncodedKey {
    len: usize,
    /// Bit 0 of the string is the top bit of `words[0]`; unused low bits of
    /// the last word are zero.
    words: Vec<u64>,
}

impl EncodedKey {
    fn with_len(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    #[inline]
    fn set(&mut self, pos: usize) {
        self.words[pos / 64] |= 1u64 << (63 - pos % 64);
    }

    /// Bit at position `pos`, counting from the most significant.
    #[inline]
    pub fn bit(&self, pos: usize) -> bool {
        assert!(
            pos < self.len,
            "bit {pos} out of range for {}-bit key",
            self.len
        );
        self.words[pos / 64] >> (63 - pos % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// `'0'`/`'1'` characters, most significant bit first.
    pub fn to_bit_string(&self) -> String {
        (0..self.len)
            .map(|i| if self.bit(i) { '1' } else { '0' })
            .collect()
    }

    /// Parses the output of [`to_bit_string`](Self::to_bit_string).
    pub fn from_bit_string(s: &str) -> Result<Self> {
        let mut key = Self::with_len(s.len());
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '1' => key.set(i),
                '0' => {}
                _ => return Err(Error::Params(format!("invalid bit character {ch:?}"))),
            }
        }
        Ok(key)
    }

    /// Big-endian bytes of the key's integer value, left-padded with zero
    /// bits to a whole number of bytes.
    pub fn to_be_bytes(&self) -> Vec<u8> {
        let nbytes = self.len.div_ceil(8);
        let pad = nbytes * 8 - self.len;
        let mut out = vec![0u8; nbytes];
        for i in 0..self.len {
            if self.bit(i) {
                let pos = i + pad;
                out[pos / 8] |= 1 << (7 - pos % 8);
            }
        }
        out
    }
}

impl Ord for EncodedKey {
    fn cmp(&self, other: &Self) -> Ordering {
        // Every key starts with a 1 bit, so a longer key is a larger integer.
        self.len
            .cmp(&other.len)
            .then_with(|| self.words.cmp(&other.words))
    }
}

impl PartialOrd for EncodedKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for EncodedKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EncodedKey({})", self.to_bit_string())
    }
}

impl Serialize for EncodedKey {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_bit_string())
    }
}

impl<'de> Deserialize<'de> for EncodedKey {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Self::from_bit_string(&s).map_err(serde::de::Error::custom)
    }
}

/// `|x|` as `mantissa * 2^exponent`, exact.
#[derive(Clone, Copy)]
struct Magnitude {
    mantissa: u64,
    exponent: i32,
}

impl Magnitude {
    fn of(x: f64) -> Self {
        let (mantissa, exponent, _) = num_traits::Float::integer_decode(x);
        Self {
            mantissa,
            exponent: i32::from(exponent),
        }
    }

    /// Binary digit of weight `2^place`.
    #[inline]
    fn digit(self, place: i32) -> bool {
        let shift = place - self.exponent;
        (0..64).contains(&shift) && (self.mantissa >> shift) & 1 == 1
    }
}

/// Encodes one vector. Its length must equal `params.dim`.
pub fn encode<T: Scalar>(x: &[T], params: &EncodingParams) -> Result<EncodedKey> {
    if x.len() != params.dim {
        return Err(Error::DimensionMismatch {
            expected: params.dim,
            actual: x.len(),
        });
    }
    let d = params.dim;
    let k = params.int_bits as i32;
    let l = params.frac_bits as i32;
    let limit = 2f64.powi(k);

    let mut mags = Vec::with_capacity(d);
    let mut key = EncodedKey::with_len(params.key_bits());
    key.set(0);
    for (i, &xi) in x.iter().enumerate() {
        let v = xi.to_f64_exact();
        if !v.is_finite() {
            return Err(Error::NonFiniteInput);
        }
        let abs = v.abs();
        if abs >= limit {
            return Err(Error::Overflow {
                value: abs,
                int_bits: params.int_bits,
            });
        }
        if v >= 0.0 {
            key.set(1 + i);
        }
        mags.push(Magnitude::of(abs));
    }

    // Places K-1 down to 0 are integer digits, -1 down to -L fractional.
    let mut pos = 1 + d;
    for place in (-l..k).rev() {
        for m in &mags {
            if m.digit(place) {
                key.set(pos);
            }
            pos += 1;
        }
    }
    debug_assert_eq!(pos, key.len);
    Ok(key)
}

/// Encodes every point of `xs`; `params.dim` must match `xs.dim()`.
pub fn encode_sample<T: Scalar>(
    xs: &PointSet<T>,
    params: &EncodingParams,
) -> Result<Vec<EncodedKey>> {
    if xs.dim() == 0 {
        return Err(Error::Params(
            "cannot encode zero-dimensional points".into(),
        ));
    }
    xs.rows().map(|row| encode(row, params)).collect()
}
