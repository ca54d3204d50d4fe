//! Number-theoretic transform and exact cyclic-free convolution.
//!
//! Forward transforms are decimation-in-frequency (natural order in,
//! bit-reversed out) and inverse transforms decimation-in-time (bit-reversed
//! in, natural out), so no explicit bit-reversal pass is needed.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::field::PrimeField;
use crate::error::{Error, Result};

/// Below this operand length the quadratic product is faster.
const SCHOOLBOOK_CUTOFF: usize = 40;

/// Stages whose butterflies span at most this many elements run block by
/// block, so each block stays in cache across those stages.
const BLOCK: usize = 1 << 11;

/// Adjacent columns processed together in the stages above `BLOCK`.
const COLS: usize = 128;

/// Largest transform whose twiddles are kept between calls.
const CACHED_LEN: usize = 1 << 20;

/// Twiddles for every stage of transforms up to length `len`.
///
/// `fwd[l + j]` holds `w_{2l}^j` and `inv[l + j]` holds `w_{2l}^-j` for
/// each power of two `l < len` and `j < l`, each next to its Shoup
/// quotient `floor(w 2^64 / p)` at `2 (l + j) + 1`.
pub(crate) struct Twiddles {
    len: usize,
    fwd: Vec<u64>,
    inv: Vec<u64>,
}

/// `floor(w 2^64 / p)`: with `r = w 2^64 mod p` the division
/// `(w 2^64 - r) / p` is exact, so it is a product with `p^-1 mod 2^64`.
fn shoup(field: &PrimeField, w: u64) -> u64 {
    field.to_mont(w).wrapping_neg().wrapping_mul(field.p_inv())
}

impl Twiddles {
    fn build(field: &PrimeField, n: usize) -> Result<Self> {
        let p = field.modulus();
        let size = 2 * n.max(2);
        let mut fwd = vec![0u64; size];
        let mut inv = vec![0u64; size];
        if n < 2 {
            return Ok(Self { len: n, fwd, inv });
        }
        // Top stage directly, lower stages as its even powers.
        let top = n / 2;
        let w = field.root_of_unity(n)?;
        let mut cur = 1u64;
        for j in 0..top {
            fwd[2 * (top + j)] = cur;
            fwd[2 * (top + j) + 1] = shoup(field, cur);
            cur = field.mul(cur, w);
        }
        let mut len = top / 2;
        while len >= 1 {
            for j in 0..len {
                let src = 2 * (2 * len + 2 * j);
                fwd[2 * (len + j)] = fwd[src];
                fwd[2 * (len + j) + 1] = fwd[src + 1];
            }
            len /= 2;
        }
        // w^-j = -w^(len - j), and floor((p - w) 2^64 / p) = !floor(w 2^64 / p)
        let mut len = 1;
        while len < n {
            inv[2 * len] = fwd[2 * len];
            inv[2 * len + 1] = fwd[2 * len + 1];
            for j in 1..len {
                let src = 2 * (2 * len - j);
                inv[2 * (len + j)] = p - fwd[src];
                inv[2 * (len + j) + 1] = !fwd[src + 1];
            }
            len <<= 1;
        }
        Ok(Self { len: n, fwd, inv })
    }

    /// Tables covering length `n`, shared across calls for moderate sizes.
    pub(crate) fn get(field: &PrimeField, n: usize) -> Result<Arc<Twiddles>> {
        if n > CACHED_LEN {
            return Ok(Arc::new(Self::build(field, n)?));
        }
        static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Twiddles>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(t) = cache.lock().expect("twiddle cache").get(&field.modulus()) {
            if t.len >= n {
                return Ok(Arc::clone(t));
            }
        }
        // Build outside the lock; doubling sizes keeps rebuilds rare.
        let size = n.max(1 << 12);
        let built = Arc::new(Self::build(field, size)?);
        let mut guard = cache.lock().expect("twiddle cache");
        let entry = guard
            .entry(field.modulus())
            .or_insert_with(|| Arc::clone(&built));
        if entry.len < size {
            *entry = Arc::clone(&built);
        }
        Ok(built)
    }
}

/// `a w mod p` in `[0, 2p)` from the Shoup quotient `ws` of `w`.
#[inline(always)]
fn shoup_mul(p: u64, a: u64, w: u64, ws: u64) -> u64 {
    let q = ((a as u128 * ws as u128) >> 64) as u64;
    a.wrapping_mul(w).wrapping_sub(q.wrapping_mul(p))
}

/// `a b / 2^64` in `[0, 2p)`; needs `a b < p 2^64`.
#[inline(always)]
fn mont_lazy(p: u64, p_inv: u64, a: u64, b: u64) -> u64 {
    let t = a as u128 * b as u128;
    let m = (t as u64).wrapping_mul(p_inv);
    let mp_hi = ((m as u128 * p as u128) >> 64) as u64;
    ((t >> 64) as u64).wrapping_add(p).wrapping_sub(mp_hi)
}

/// Butterflies `(lo[i], hi[i])` with interleaved twiddles `w`.
#[inline(always)]
fn dif_run(p: u64, lo: &mut [u64], hi: &mut [u64], w: &[u64]) {
    let p2 = 2 * p;
    for ((x, y), wj) in lo.iter_mut().zip(hi.iter_mut()).zip(w.chunks_exact(2)) {
        let u = *x;
        let v = *y;
        let s = u + v;
        *x = if s >= p2 { s - p2 } else { s };
        *y = shoup_mul(p, u + p2 - v, wj[0], wj[1]);
    }
}

#[inline(always)]
fn dit_run(p: u64, lo: &mut [u64], hi: &mut [u64], w: &[u64]) {
    let p2 = 2 * p;
    for ((x, y), wj) in lo.iter_mut().zip(hi.iter_mut()).zip(w.chunks_exact(2)) {
        let u = *x;
        let v = shoup_mul(p, *y, wj[0], wj[1]);
        let s = u + v;
        let d = u + p2 - v;
        *x = if s >= p2 { s - p2 } else { s };
        *y = if d >= p2 { d - p2 } else { d };
    }
}

/// All stages of span at most `a.len()`, for a block that fits in cache.
fn dif_block(p: u64, a: &mut [u64], tw: &[u64]) {
    let mut len = a.len() / 2;
    while len >= 1 {
        for block in a.chunks_exact_mut(2 * len) {
            let (lo, hi) = block.split_at_mut(len);
            dif_run(p, lo, hi, &tw[2 * len..4 * len]);
        }
        len /= 2;
    }
}

fn dit_block(p: u64, a: &mut [u64], tw: &[u64]) {
    let mut len = 1;
    while len < a.len() {
        for block in a.chunks_exact_mut(2 * len) {
            let (lo, hi) = block.split_at_mut(len);
            dit_run(p, lo, hi, &tw[2 * len..4 * len]);
        }
        len *= 2;
    }
}

/// Stages of span `len >= BLOCK`, given by `lens`. Index `r + c BLOCK`
/// only meets indices with the same `r` there, so a strip of `COLS`
/// adjacent `r` runs through every such stage while it is in cache.
fn outer_stages(p: u64, a: &mut [u64], tw: &[u64], lens: &[usize], dit: bool) {
    let n = a.len();
    for r0 in (0..BLOCK).step_by(COLS) {
        for &len in lens {
            for start in (0..n).step_by(2 * len) {
                for off in (0..len).step_by(BLOCK) {
                    let i = start + off + r0;
                    let (l, h) = a.split_at_mut(i + len);
                    let (lo, hi) = (&mut l[i..i + COLS], &mut h[..COLS]);
                    let w = &tw[2 * (len + off + r0)..2 * (len + off + r0 + COLS)];
                    if dit {
                        dit_run(p, lo, hi, w);
                    } else {
                        dif_run(p, lo, hi, w);
                    }
                }
            }
        }
    }
}

/// In-place forward transform of a power-of-two length buffer: natural
/// order in, bit-reversed order out. Entries may be in `[0, 2p)` and come
/// out in `[0, 2p)`.
pub(crate) fn forward(field: &PrimeField, a: &mut [u64], tw: &Twiddles) {
    let n = a.len();
    debug_assert!(n.is_power_of_two() && n <= tw.len.max(1));
    let p = field.modulus();
    if n > BLOCK {
        let lens: Vec<usize> = (0..)
            .map(|s| n >> (s + 1))
            .take_while(|&l| l >= BLOCK)
            .collect();
        outer_stages(p, a, &tw.fwd, &lens, false);
    }
    for chunk in a.chunks_exact_mut(n.min(BLOCK)) {
        dif_block(p, chunk, &tw.fwd);
    }
}

/// Inverse of [`forward`] without the `1/n` factor: bit-reversed order in,
/// natural order out, entries in `[0, 2p)`.
pub(crate) fn inverse(field: &PrimeField, a: &mut [u64], tw: &Twiddles) {
    let n = a.len();
    debug_assert!(n.is_power_of_two() && n <= tw.len.max(1));
    let p = field.modulus();
    for chunk in a.chunks_exact_mut(n.min(BLOCK)) {
        dit_block(p, chunk, &tw.inv);
    }
    if n > BLOCK {
        let lens: Vec<usize> = (0..).map(|s| BLOCK << s).take_while(|&l| l < n).collect();
        outer_stages(p, a, &tw.inv, &lens, true);
    }
}

/// `a <- a b / 2^64` entrywise, inputs and outputs in `[0, 2p)`.
pub(crate) fn pointwise(field: &PrimeField, a: &mut [u64], b: &[u64]) {
    let (p, p_inv) = (field.modulus(), field.p_inv());
    for (x, &y) in a.iter_mut().zip(b) {
        *x = mont_lazy(p, p_inv, *x, y);
    }
}

/// Multiplies every entry (in `[0, 2p)`) by `1 / n` times `2^(64 k)` and
/// reduces to `[0, p)`. `k` undoes the `2^-64` of `k` pointwise products.
pub(crate) fn finish(field: &PrimeField, a: &mut [u64], n: usize, k: u32) {
    let n_inv = field.inv(n as u64 % field.modulus()).expect("n < p");
    // mont_mul drops one 2^64, so the multiplier carries k + 1 of them
    let mut scale = n_inv;
    for _ in 0..=k {
        scale = field.to_mont(scale);
    }
    for x in a.iter_mut() {
        *x = field.mont_mul(*x, scale);
    }
}

/// Cyclic convolution of length `x.len()` from two transforms, reduced to
/// `[0, p)`.
pub(crate) fn cyclic_from_transforms(
    field: &PrimeField,
    tw: &Twiddles,
    mut x: Vec<u64>,
    y: &[u64],
) -> Vec<u64> {
    let n = x.len();
    pointwise(field, &mut x, y);
    inverse(field, &mut x, tw);
    finish(field, &mut x, n, 1);
    x
}

pub(crate) fn schoolbook(field: &PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        let xm = field.to_mont(x);
        for (o, &y) in out[i..].iter_mut().zip(b) {
            *o = field.add(*o, field.mont_mul(y, xm));
        }
    }
    out
}

/// Full linear convolution `c_k = sum_{i+j=k} a_i b_j (mod p)`.
///
/// The result has length `|a| + |b| - 1` (empty if either input is empty).
pub fn ntt_convolve(field: &PrimeField, a: &[u64], b: &[u64]) -> Result<Vec<u64>> {
    if a.is_empty() || b.is_empty() {
        return Ok(Vec::new());
    }
    if a.len().min(b.len()) <= SCHOOLBOOK_CUTOFF {
        return Ok(schoolbook(field, a, b));
    }
    transform_convolve(field, a, b)
}

pub(crate) fn check_len(field: &PrimeField, n: usize) -> Result<()> {
    if n > field.max_transform_len() {
        return Err(Error::TransformTooLarge {
            len: n,
            capacity: field.max_transform_len(),
        });
    }
    Ok(())
}

fn transform_convolve(field: &PrimeField, a: &[u64], b: &[u64]) -> Result<Vec<u64>> {
    let out_len = a.len() + b.len() - 1;
    let n = out_len.next_power_of_two();
    check_len(field, n)?;
    let tw = Twiddles::get(field, n)?;
    let mut fa = vec![0u64; n];
    fa[..a.len()].copy_from_slice(a);
    forward(field, &mut fa, &tw);
    if std::ptr::eq(a, b) {
        let (p, p_inv) = (field.modulus(), field.p_inv());
        for x in fa.iter_mut() {
            *x = mont_lazy(p, p_inv, *x, *x);
        }
    } else {
        let mut fb = vec![0u64; n];
        fb[..b.len()].copy_from_slice(b);
        forward(field, &mut fb, &tw);
        pointwise(field, &mut fa, &fb);
    }
    inverse(field, &mut fa, &tw);
    finish(field, &mut fa, n, 1);
    fa.truncate(out_len);
    Ok(fa)
}
