//! Terminal-cut table: every bipartition value, answerable without the network.
//!
//! Values are kept exactly as integers over one shared denominator. The
//! binary form is `TCS1`, `k` (u32 LE), word size in bits (u32 LE), then
//! the denominator and the `2^(k-1) - 1` scaled values as unsigned LEB128.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::mincut::CutSolver;
use crate::network::{bipartition_count, enumerate_bipartitions, Bipartition, Network, Rational, MAX_TERMINALS};

const MAGIC: &[u8; 4] = b"TCS1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TcStore {
    k: usize,
    denominator: BigInt,
    values: Vec<BigInt>,
    word_bits: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StorageReport {
    pub value_words: usize,
    /// Value words plus one for the shared denominator.
    pub words: usize,
    pub word_bits: u32,
    pub bits: u64,
    /// `2^k`, the trivial bound.
    pub bound: u64,
}

impl StorageReport {
    pub fn within_bound(&self) -> bool {
        self.words as u64 <= self.bound
    }
}

fn word_bits_for(denominator: &BigInt, values: &[BigInt]) -> u32 {
    let widest = values.iter().chain(std::iter::once(denominator)).map(|v| v.bits()).max().unwrap_or(0);
    (widest.max(8) as u32).next_power_of_two()
}

/// Computes all bipartition values by maximum flow.
pub fn preprocess(net: &Network) -> Result<TcStore> {
    let solver = CutSolver::new(net);
    let values = enumerate_bipartitions(net.k())?
        .iter()
        .map(|bp| solver.value(bp))
        .collect::<Result<Vec<Rational>>>()?;
    let denominator = values.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let scaled: Vec<BigInt> = values.iter().map(|v| v.numer() * (&denominator / v.denom())).collect();
    Ok(TcStore {
        k: net.k(),
        word_bits: word_bits_for(&denominator, &scaled),
        denominator,
        values: scaled,
    })
}

impl TcStore {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }

    /// Value for the canonical bipartition at `index`.
    pub fn value_at(&self, index: usize) -> Rational {
        Rational::new(self.values[index].clone(), self.denominator.clone())
    }

    /// Minimum cut value separating the terminal indices in `subset` from
    /// the rest. Either side may be given.
    pub fn query(&self, subset: &[usize]) -> Result<Rational> {
        let mut mask = 0u64;
        for &i in subset {
            if i >= self.k {
                return Err(Error::InvalidQuery(format!("terminal index {i} out of range for k = {}", self.k)));
            }
            if mask >> i & 1 == 1 {
                return Err(Error::InvalidQuery(format!("terminal index {i} repeated")));
            }
            mask |= 1 << i;
        }
        self.query_mask(mask)
    }

    pub fn query_mask(&self, mask: u64) -> Result<Rational> {
        let full = (1u64 << self.k) - 1;
        if mask == 0 || mask == full || mask & !full != 0 {
            return Err(Error::InvalidQuery(format!("{mask:#b} is not a nontrivial terminal subset")));
        }
        Ok(self.value_at(Bipartition::from_any_mask(self.k, mask)?.index()))
    }

    pub fn storage_report(&self) -> StorageReport {
        let words = self.values.len() + 1;
        StorageReport {
            value_words: self.values.len(),
            words,
            word_bits: self.word_bits,
            bits: words as u64 * u64::from(self.word_bits),
            bound: 1u64 << self.k,
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&(self.k as u32).to_le_bytes());
        out.extend_from_slice(&self.word_bits.to_le_bytes());
        for v in std::iter::once(&self.denominator).chain(&self.values) {
            write_varint(&mut out, v);
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let malformed = |m: &str| Error::MalformedStore(m.to_string());
        if bytes.len() < 12 || &bytes[..4] != MAGIC {
            return Err(malformed("missing TCS1 header"));
        }
        let k = u32::from_le_bytes(bytes[4..8].try_into().expect("4 bytes")) as usize;
        let word_bits = u32::from_le_bytes(bytes[8..12].try_into().expect("4 bytes"));
        if !(2..=MAX_TERMINALS).contains(&k) {
            return Err(malformed("terminal count out of range"));
        }
        let mut pos = 12;
        let denominator = read_varint(bytes, &mut pos).ok_or_else(|| malformed("truncated denominator"))?;
        if denominator.is_zero() {
            return Err(malformed("zero denominator"));
        }
        let values = (0..bipartition_count(k))
            .map(|_| read_varint(bytes, &mut pos).ok_or_else(|| malformed("truncated value table")))
            .collect::<Result<Vec<_>>>()?;
        if pos != bytes.len() {
            return Err(malformed("trailing bytes"));
        }
        if word_bits != word_bits_for(&denominator, &values) {
            return Err(malformed("word size does not match the stored values"));
        }
        Ok(Self {
            k,
            denominator,
            values,
            word_bits,
        })
    }
}

fn write_varint(out: &mut Vec<u8>, value: &BigInt) {
    let mut v: BigUint = value.to_biguint().expect("stored values are nonnegative");
    loop {
        let low = (&v & BigUint::from(0x7fu8)).to_u32_digits().first().copied().unwrap_or(0) as u8;
        v >>= 7;
        if v.is_zero() {
            out.push(low);
            return;
        }
        out.push(low | 0x80);
    }
}

fn read_varint(bytes: &[u8], pos: &mut usize) -> Option<BigInt> {
    let mut value = BigUint::zero();
    let mut shift = 0u64;
    loop {
        let byte = *bytes.get(*pos)?;
        *pos += 1;
        value |= BigUint::from(byte & 0x7f) << shift;
        shift += 7;
        if byte & 0x80 == 0 {
            return Some(BigInt::from_biguint(Sign::Plus, value));
        }
    }
}
