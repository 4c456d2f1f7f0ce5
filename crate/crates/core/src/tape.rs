//! The shared random tape.
//!
//! Every random choice made by a generator or an LCA is a pure function of a
//! 64-bit seed and a structured [`TapeKey`]. Evaluating the same key twice
//! always yields the same bits, so algorithms that keep no memory between
//! queries still answer consistently.
//!
//! The pseudorandom function is SipHash-1-3 with 128-bit output, keyed by the
//! seed. Keys are encoded as a fixed-width 25-byte message, so distinct keys
//! are distinct PRF inputs.

use std::cell::Cell;
use std::hash::Hasher;

use siphasher::sip128::{Hasher128, SipHasher13};

use crate::error::{Error, Result};

/// Second half of the SipHash key. Fixed so that the seed alone selects the tape.
const KEY_TWEAK: u64 = 0x6c63_615f_7461_7065;

/// What a draw is used for. Part of every key, so different uses never share bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Domain {
    EdgeKeep = 1,
    Subsample = 2,
    Geom = 3,
    LagRow = 4,
    LagFree = 5,
    Shuffle = 6,
    ErSkip = 7,
    PaDraw = 8,
    UaDraw = 9,
    Permute = 10,
    TwoEdges = 11,
    Sample = 12,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TapeKey {
    pub domain: Domain,
    pub a: u64,
    pub b: u64,
    pub c: u64,
}

impl TapeKey {
    pub const fn new(domain: Domain, a: u64, b: u64, c: u64) -> Self {
        TapeKey { domain, a, b, c }
    }

    /// Key for an unordered vertex pair; `(u, v)` and `(v, u)` map to the same key.
    pub fn pair(domain: Domain, u: u32, v: u32) -> Self {
        let (lo, hi) = if u <= v { (u, v) } else { (v, u) };
        TapeKey::new(domain, lo as u64, hi as u64, 0)
    }

    fn encode(&self) -> [u8; 25] {
        let mut buf = [0u8; 25];
        buf[0] = self.domain as u8;
        buf[1..9].copy_from_slice(&self.a.to_le_bytes());
        buf[9..17].copy_from_slice(&self.b.to_le_bytes());
        buf[17..25].copy_from_slice(&self.c.to_le_bytes());
        buf
    }
}

/// Source of keyed random words. Everything else is derived from [`Tape::word`].
pub trait Tape {
    fn seed(&self) -> u64;

    /// 128 uniformly random bits for `key`.
    fn word(&self, key: TapeKey) -> u128;

    /// Bernoulli(`p`) coin.
    ///
    /// The coin is `x < floor(p * 2^128)` for the 128-bit word `x`, computed
    /// exactly from the binary expansion of `p`, so the outcome is identical on
    /// every platform.
    fn coin(&self, key: TapeKey, p: f64) -> Result<bool> {
        let x = self.word(key);
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability(p));
        }
        if p == 1.0 {
            return Ok(true);
        }
        Ok(x < fixed_point_threshold(p))
    }

    /// Geometric(`q`) on {1, 2, ...}: the index of the first success in
    /// independent trials with success probability `q`.
    ///
    /// Inverse CDF on a uniform in (0, 1); constant work regardless of the outcome.
    /// Values beyond `u64::MAX` saturate.
    fn geometric(&self, key: TapeKey, q: f64) -> Result<u64> {
        let x = (self.word(key) >> 64) as u64;
        if !(q > 0.0 && q <= 1.0) {
            return Err(Error::InvalidProbability(q));
        }
        if q == 1.0 {
            return Ok(1);
        }
        let u = unit_open(x);
        let trials = (u.ln() / (-q).ln_1p()).floor();
        // `as` saturates for values beyond u64::MAX
        Ok((trials as u64).saturating_add(1))
    }

    /// Uniform integer in `[0, bound)`. `bound` must be positive.
    fn below(&self, key: TapeKey, bound: u64) -> u64 {
        assert!(bound > 0, "empty range");
        let x = (self.word(key) >> 64) as u64;
        ((x as u128 * bound as u128) >> 64) as u64
    }

    /// Uniform in (0, 1).
    fn uniform(&self, key: TapeKey) -> f64 {
        unit_open((self.word(key) >> 64) as u64)
    }
}

/// Maps a 64-bit word into (0, 1) as `(x + 1) / (2^64 + 1)`; never returns 0.
fn unit_open(x: u64) -> f64 {
    const DENOM: f64 = 18_446_744_073_709_551_617.0;
    (x as f64 + 1.0) / DENOM
}

/// `floor(p * 2^128)` for `p` in `[0, 1)`.
fn fixed_point_threshold(p: f64) -> u128 {
    if p <= 0.0 {
        return 0;
    }
    let bits = p.to_bits();
    let biased = ((bits >> 52) & 0x7ff) as i64;
    let frac = (bits & ((1u64 << 52) - 1)) as u128;
    let (mantissa, exp) = if biased == 0 {
        (frac, -1074)
    } else {
        (frac | (1u128 << 52), biased - 1075)
    };
    // p = mantissa * 2^exp, so p * 2^128 = mantissa * 2^(exp + 128)
    let shift = exp + 128;
    if shift >= 0 {
        mantissa << shift
    } else if shift > -128 {
        mantissa >> (-shift)
    } else {
        0
    }
}

/// The seeded tape. Copying it is free; it holds no state besides the seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomTape {
    seed: u64,
}

impl RandomTape {
    pub fn new(seed: u64) -> Self {
        RandomTape { seed }
    }
}

impl Tape for RandomTape {
    fn seed(&self) -> u64 {
        self.seed
    }

    fn word(&self, key: TapeKey) -> u128 {
        let mut h = SipHasher13::new_with_keys(self.seed, KEY_TWEAK);
        h.write(&key.encode());
        h.finish128().as_u128()
    }
}

impl<T: Tape + ?Sized> Tape for &T {
    fn seed(&self) -> u64 {
        (**self).seed()
    }

    fn word(&self, key: TapeKey) -> u128 {
        (**self).word(key)
    }
}

/// Wraps a tape and counts word evaluations. Used to measure per-query work.
#[derive(Debug)]
pub struct CountingTape<T> {
    inner: T,
    evals: Cell<u64>,
}

impl<T: Tape> CountingTape<T> {
    pub fn new(inner: T) -> Self {
        CountingTape {
            inner,
            evals: Cell::new(0),
        }
    }

    pub fn evaluations(&self) -> u64 {
        self.evals.get()
    }

    /// Returns the count and resets it to zero.
    pub fn take(&self) -> u64 {
        self.evals.replace(0)
    }
}

impl<T: Tape> Tape for CountingTape<T> {
    fn seed(&self) -> u64 {
        self.inner.seed()
    }

    fn word(&self, key: TapeKey) -> u128 {
        self.evals.set(self.evals.get() + 1);
        self.inner.word(key)
    }
}
