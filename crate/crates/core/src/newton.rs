//! Newton iterations for truncated series over a coefficient ring `R`.
//!
//! A series is a flat buffer of `t` blocks, each block one element of `R`
//! stored as `width` field elements. `R` is the base field itself
//! (`width = 1`) or `F[y]/(y^m)` (`width = m`); everything here is written
//! once against [`CoeffRing`] and shared by both.

use crate::error::{Error, Result};
use crate::ring::ntt::{check_len, cyclic_from_transforms, forward, Twiddles};
use crate::ring::PrimeField;

/// Below this many blocks [`exp_cyclic`] falls back to [`exp`].
const EXP_BASE: usize = 64;

pub(crate) trait CoeffRing {
    fn field(&self) -> &PrimeField;

    /// Field elements per ring element.
    fn width(&self) -> usize;

    /// First `t` blocks of `a * b`.
    fn mul_trunc(&self, a: &[u64], b: &[u64], t: usize) -> Result<Vec<u64>>;

    /// Inverse of a single ring element.
    fn unit_inverse(&self, c: &[u64]) -> Result<Vec<u64>>;

    /// `exp(c)` for a nilpotent ring element.
    fn const_exp(&self, c: &[u64]) -> Result<Vec<u64>>;

    /// `log(c)` for a ring element with `c - 1` nilpotent.
    fn const_log(&self, c: &[u64]) -> Result<Vec<u64>>;
}

fn blocks<R: CoeffRing + ?Sized>(ring: &R, a: &[u64]) -> usize {
    a.len() / ring.width()
}

/// First `t` blocks of `a`, zero padded.
#[cfg(test)]
fn prefix<R: CoeffRing + ?Sized>(ring: &R, a: &[u64], t: usize) -> Vec<u64> {
    let w = ring.width();
    let mut out = vec![0u64; t * w];
    let take = a.len().min(t * w);
    out[..take].copy_from_slice(&a[..take]);
    out
}

/// `out[i] = (i + 1) * a[i + 1]` blockwise, `len` output blocks.
fn derivative<R: CoeffRing + ?Sized>(ring: &R, a: &[u64], len: usize) -> Vec<u64> {
    let f = ring.field();
    let w = ring.width();
    let mut out = vec![0u64; len * w];
    for i in 0..len.min(blocks(ring, a).saturating_sub(1)) {
        let k = f.to_mont(f.reduce(i as u64 + 1));
        let src = &a[(i + 1) * w..(i + 2) * w];
        for (o, &x) in out[i * w..(i + 1) * w].iter_mut().zip(src) {
            *o = f.mont_mul(x, k);
        }
    }
    out
}

fn scale_block(field: &PrimeField, block: &mut [u64], k: u64) {
    let km = field.to_mont(k);
    for x in block {
        *x = field.mont_mul(*x, km);
    }
}

/// Inverse of a unit series, `t` blocks, by `g <- g - g (f g - 1)`.
pub(crate) fn inverse<R: CoeffRing + ?Sized>(ring: &R, a: &[u64], t: usize) -> Result<Vec<u64>> {
    let w = ring.width();
    if blocks(ring, a) == 0 || t == 0 {
        return Err(Error::InvalidInstance(
            "series must have at least one coefficient".into(),
        ));
    }
    let mut g = ring.unit_inverse(&a[..w])?;
    let mut k = 1;
    while k < t {
        g = inverse_step(ring, a, g, k)?;
        k *= 2;
    }
    g.truncate(t * w);
    Ok(g)
}

/// One doubling step: `g` inverts `a` to `k` blocks, result to `2k`.
fn inverse_step<R: CoeffRing + ?Sized>(
    ring: &R,
    a: &[u64],
    mut g: Vec<u64>,
    k: usize,
) -> Result<Vec<u64>> {
    let f = ring.field();
    let w = ring.width();
    let k2 = 2 * k;
    let fa = &a[..a.len().min(k2 * w)];
    // a g = 1 + x^k e
    let ag = ring.mul_trunc(fa, &g, k2)?;
    let e = &ag[k * w..];
    let corr = ring.mul_trunc(&g, e, k)?;
    g.resize(k2 * w, 0);
    for (x, &c) in g[k * w..].iter_mut().zip(&corr) {
        *x = f.sub(*x, c);
    }
    Ok(g)
}

/// `log(a)` to `t` blocks: `log(a_0) + integral(a' / a)`.
pub(crate) fn log<R: CoeffRing + ?Sized>(ring: &R, a: &[u64], t: usize) -> Result<Vec<u64>> {
    let f = ring.field();
    let w = ring.width();
    if blocks(ring, a) == 0 || t == 0 {
        return Err(Error::InvalidInstance(
            "series must have at least one coefficient".into(),
        ));
    }
    let mut out = vec![0u64; t * w];
    out[..w].copy_from_slice(&ring.const_log(&a[..w])?);
    if t == 1 {
        return Ok(out);
    }
    let da = derivative(ring, a, t - 1);
    let inv = inverse(ring, &a[..a.len().min((t - 1) * w)], t - 1)?;
    let q = ring.mul_trunc(&da, &inv, t - 1)?;
    let invs = f.inverses_upto(t);
    for i in 1..t {
        let dst = &mut out[i * w..(i + 1) * w];
        dst.copy_from_slice(&q[(i - 1) * w..i * w]);
        scale_block(f, dst, invs[i]);
    }
    Ok(out)
}

/// `exp(a)` to `t` blocks.
///
/// Newton doubling `g <- g (1 + a - log g)`. The logarithm of the current
/// iterate is taken as `a_0 + integral(a' + h (g' - g a'))`, where `h` is an
/// inverse of `g` kept up to date by one inverse step per round instead of a
/// fresh inversion; `g' - g a'` vanishes below `x^(k-1)`, so `h` only needs
/// `k` blocks.
pub(crate) fn exp<R: CoeffRing + ?Sized>(ring: &R, a: &[u64], t: usize) -> Result<Vec<u64>> {
    let f = ring.field();
    let w = ring.width();
    if blocks(ring, a) == 0 || t == 0 {
        return Err(Error::InvalidInstance(
            "series must have at least one coefficient".into(),
        ));
    }
    let mut g = ring.const_exp(&a[..w])?;
    let mut h = ring.unit_inverse(&g)?;
    let da = derivative(ring, a, t);
    let invs = f.inverses_upto(2 * t);
    let mut k = 1;
    while k < t {
        let k2 = 2 * k;
        // r = g' - g a'  (mod x^(2k-1)), zero below x^(k-1)
        let dg = derivative(ring, &g, k2 - 1);
        let ga = ring.mul_trunc(&g, &da[..(k2 - 1).min(t) * w], k2 - 1)?;
        let r_hi: Vec<u64> = dg[(k - 1) * w..]
            .iter()
            .zip(&ga[(k - 1) * w..])
            .map(|(&x, &y)| f.sub(x, y))
            .collect();
        debug_assert!(dg[..(k - 1) * w]
            .iter()
            .zip(&ga[..(k - 1) * w])
            .all(|(x, y)| x == y));
        // s = h r, blocks k-1 .. 2k-2
        let s_hi = ring.mul_trunc(&h, &r_hi, k)?;
        // delta = a - log g = -integral(s), blocks k .. 2k-1
        let mut delta = vec![0u64; k * w];
        for j in 0..k {
            let dst = &mut delta[j * w..(j + 1) * w];
            for (d, &s) in dst.iter_mut().zip(&s_hi[j * w..(j + 1) * w]) {
                *d = f.neg(s);
            }
            scale_block(f, dst, invs[k + j]);
        }
        let gd = ring.mul_trunc(&g, &delta, k)?;
        g.resize(k2 * w, 0);
        g[k * w..].copy_from_slice(&gd);
        if k2 < t {
            h = inverse_step(ring, &g, h, k)?;
        }
        k = k2;
    }
    g.truncate(t * w);
    Ok(g)
}

/// Precisions `ks[0] <= EXP_BASE`, `ks[i + 1] <= 2 ks[i]`, ending at `t`.
fn precisions(t: usize) -> Vec<usize> {
    let mut ks = vec![t];
    while *ks.last().unwrap() > EXP_BASE {
        let k = *ks.last().unwrap();
        ks.push(k.div_ceil(2));
    }
    ks.reverse();
    ks
}

/// Transform length of a round that lifts `k` blocks of width `w`.
fn round_len(k: usize, w: usize) -> usize {
    (2 * k * (2 * w - 1)).next_power_of_two()
}

/// Longest transform [`exp_cyclic`] runs for `t` blocks of width `w`.
pub(crate) fn exp_transform_len(t: usize, w: usize) -> usize {
    let ks = precisions(t);
    if ks.len() < 2 {
        return 1;
    }
    round_len(ks[ks.len() - 2], w)
}

/// Blocks `rows` of `a` (width `w`) placed at stride `2w - 1`, transformed
/// at length `n`. Products of two such rows never reach the next slot.
fn packed_transform(
    f: &PrimeField,
    tw: &Twiddles,
    a: &[u64],
    w: usize,
    rows: usize,
    n: usize,
) -> Vec<u64> {
    let stride = 2 * w - 1;
    let mut out = vec![0u64; n];
    for (i, block) in a.chunks_exact(w).take(rows).enumerate() {
        out[i * stride..i * stride + w].copy_from_slice(block);
    }
    forward(f, &mut out, tw);
    out
}

/// Blocks `lo .. lo + rows` of a packed product, each cut back to width `w`.
fn unpack(c: &[u64], w: usize, lo: usize, rows: usize) -> Vec<u64> {
    let stride = 2 * w - 1;
    let mut out = Vec::with_capacity(rows * w);
    for i in lo..lo + rows {
        out.extend_from_slice(&c[i * stride..i * stride + w]);
    }
    out
}

/// `exp(a)` to `t` blocks, the doubling of [`exp`] with every product done
/// as one cyclic convolution.
///
/// Blocks are packed x-major at stride `2w - 1`. A round lifting `k`
/// blocks uses a length of at least `2k` packed blocks, so the terms that
/// wrap around land only on blocks that are already known, and the
/// transforms of `g` and `h` are computed once and reused. Precision goes
/// `.., ceil(t/2), t` rather than through powers of two.
pub(crate) fn exp_cyclic<R: CoeffRing + ?Sized>(ring: &R, a: &[u64], t: usize) -> Result<Vec<u64>> {
    let f = ring.field();
    let w = ring.width();
    if blocks(ring, a) == 0 || t == 0 {
        return Err(Error::InvalidInstance(
            "series must have at least one coefficient".into(),
        ));
    }
    let ks = precisions(t);
    let base = ks[0];
    let mut g = exp(ring, &a[..a.len().min(base * w)], base)?;
    if base == t {
        return Ok(g);
    }
    let mut h = inverse(ring, &g, base)?;
    let n_max = exp_transform_len(t, w);
    check_len(f, n_max)?;
    let tw = Twiddles::get(f, n_max)?;
    let da = derivative(ring, a, t - 1);
    let invs = f.inverses_upto(t);
    let mut k = base;
    for &target in &ks[1..] {
        let n = round_len(k, w);
        let lift = target - k;
        let g_hat = packed_transform(f, &tw, &g, w, k, n);
        // g a' in cyclic form; blocks k-1 .. 2k-1 are clean. g' has no
        // terms there, so r = g' - g a' is just the negation.
        let da_hat = packed_transform(f, &tw, &da, w, (2 * k - 1).min(t - 1), n);
        let ga = cyclic_from_transforms(f, &tw, da_hat, &g_hat);
        let r: Vec<u64> = unpack(&ga, w, k - 1, lift)
            .iter()
            .map(|&x| f.neg(x))
            .collect();
        let h_hat = packed_transform(f, &tw, &h, w, k, n);
        let s = cyclic_from_transforms(f, &tw, packed_transform(f, &tw, &r, w, lift, n), &h_hat);
        // delta_(k+j) = -s_j / (k + j), the part of a - log g above x^k
        let mut delta = unpack(&s, w, 0, lift);
        for (j, block) in delta.chunks_exact_mut(w).enumerate() {
            for x in block.iter_mut() {
                *x = f.neg(*x);
            }
            scale_block(f, block, invs[k + j]);
        }
        let gd =
            cyclic_from_transforms(f, &tw, packed_transform(f, &tw, &delta, w, lift, n), &g_hat);
        g.extend_from_slice(&unpack(&gd, w, 0, lift));
        if target < t {
            // g h = 1 + x^k e (mod x^target), wrapped terms fall below x^k
            let gh =
                cyclic_from_transforms(f, &tw, packed_transform(f, &tw, &g, w, target, n), &h_hat);
            let e = unpack(&gh, w, k, lift);
            let corr =
                cyclic_from_transforms(f, &tw, packed_transform(f, &tw, &e, w, lift, n), &h_hat);
            h.extend(unpack(&corr, w, 0, lift).iter().map(|&x| f.neg(x)));
        }
        k = target;
    }
    Ok(g)
}

/// Reference `exp` that recomputes `log g` from scratch every round,
/// following the doubling `g <- g (1 - log g + a)` literally.
#[cfg(test)]
pub(crate) fn exp_plain<R: CoeffRing + ?Sized>(ring: &R, a: &[u64], t: usize) -> Result<Vec<u64>> {
    let f = ring.field();
    let w = ring.width();
    let mut g = ring.const_exp(&a[..w])?;
    let mut k = 1;
    while k < t {
        let k2 = 2 * k;
        let lg = log(ring, &prefix(ring, &g, k2), k2)?;
        let mut factor = prefix(ring, a, k2);
        for (x, &l) in factor.iter_mut().zip(&lg) {
            *x = f.sub(*x, l);
        }
        factor[0] = f.add(factor[0], 1);
        g = ring.mul_trunc(&g, &factor, k2)?;
        k = k2;
    }
    g.truncate(t * w);
    Ok(g)
}
