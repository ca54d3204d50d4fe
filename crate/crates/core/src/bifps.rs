//! Series in `x` whose coefficients live in `F[y]/(y^m)`.
//!
//! Products pack both operands into one variable with `y = x^S`, where the
//! stride `S` exceeds every x-degree the product can reach, so a single
//! NTT convolution yields the bivariate product without collisions.

use crate::error::{Error, Result};
use crate::fps::Scalars;
use crate::newton::{self, CoeffRing};
use crate::ring::{ntt_convolve, PrimeField};

/// `coeffs[i * m + j] = [y^j x^i] f` for `i < t`, `j < m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiSeries {
    field: PrimeField,
    x_trunc: usize,
    y_trunc: usize,
    coeffs: Vec<u64>,
}

/// `F[y]/(y^m)` as a coefficient ring of width `m`.
pub(crate) struct Truncated {
    pub(crate) field: PrimeField,
    pub(crate) m: usize,
}

/// Packs the first `rows` x-coefficients of a row-major `rows x m` grid
/// with `y = x^stride`.
pub fn kronecker_pack(grid: &[u64], rows: usize, m: usize, stride: usize) -> Vec<u64> {
    assert!(rows <= stride || m == 1);
    if rows == 0 {
        return Vec::new();
    }
    let mut out = vec![0u64; stride * (m - 1) + rows];
    for i in 0..rows {
        for j in 0..m {
            out[i + stride * j] = grid[i * m + j];
        }
    }
    out
}

/// Inverse of [`kronecker_pack`], keeping x-degrees `< rows` and
/// y-degrees `< m`; missing entries read as zero.
pub fn kronecker_unpack(packed: &[u64], rows: usize, m: usize, stride: usize) -> Vec<u64> {
    let mut out = vec![0u64; rows * m];
    for i in 0..rows.min(stride) {
        for j in 0..m {
            if let Some(&v) = packed.get(i + stride * j) {
                out[i * m + j] = v;
            }
        }
    }
    out
}

impl CoeffRing for Truncated {
    fn field(&self) -> &PrimeField {
        &self.field
    }

    fn width(&self) -> usize {
        self.m
    }

    fn mul_trunc(&self, a: &[u64], b: &[u64], t: usize) -> Result<Vec<u64>> {
        let m = self.m;
        let la = (a.len() / m).min(t);
        let lb = (b.len() / m).min(t);
        if la == 0 || lb == 0 {
            return Ok(vec![0; t * m]);
        }
        // product x-degrees stay below la + lb - 1
        let stride = la + lb - 1;
        let pa = kronecker_pack(a, la, m, stride);
        let pb = kronecker_pack(b, lb, m, stride);
        let prod = ntt_convolve(&self.field, &pa, &pb)?;
        Ok(kronecker_unpack(&prod, t, m, stride))
    }

    fn unit_inverse(&self, c: &[u64]) -> Result<Vec<u64>> {
        newton::inverse(&Scalars(self.field), c, self.m)
    }

    fn const_exp(&self, c: &[u64]) -> Result<Vec<u64>> {
        newton::exp(&Scalars(self.field), c, self.m)
    }

    fn const_log(&self, c: &[u64]) -> Result<Vec<u64>> {
        newton::log(&Scalars(self.field), c, self.m)
    }
}

fn check_dims(t: usize, m: usize) -> Result<()> {
    if t == 0 || m == 0 {
        return Err(Error::InvalidInstance(format!(
            "bivariate truncations must be positive (t = {t}, m = {m})"
        )));
    }
    Ok(())
}

impl BiSeries {
    /// Wraps a row-major `t x m` grid; entries are reduced mod `p`.
    pub fn new(field: PrimeField, t: usize, m: usize, coeffs: Vec<u64>) -> Result<Self> {
        check_dims(t, m)?;
        if coeffs.len() != t * m {
            return Err(Error::InvalidInstance(format!(
                "grid has {} entries, expected {t} x {m}",
                coeffs.len()
            )));
        }
        let coeffs = coeffs.into_iter().map(|c| field.reduce(c)).collect();
        Ok(Self {
            field,
            x_trunc: t,
            y_trunc: m,
            coeffs,
        })
    }

    pub fn zero(field: PrimeField, t: usize, m: usize) -> Result<Self> {
        Self::new(field, t, m, vec![0; t * m])
    }

    pub fn one(field: PrimeField, t: usize, m: usize) -> Result<Self> {
        let mut s = Self::zero(field, t, m)?;
        s.coeffs[0] = 1;
        Ok(s)
    }

    /// Grid from `(x_degree, y_degree, value)` terms; out-of-range terms
    /// are dropped.
    pub fn from_terms(
        field: PrimeField,
        t: usize,
        m: usize,
        terms: &[(usize, usize, i64)],
    ) -> Result<Self> {
        let mut s = Self::zero(field, t, m)?;
        for &(i, j, v) in terms {
            if i < t && j < m {
                let e = &mut s.coeffs[i * m + j];
                *e = field.add(*e, field.from_i64(v));
            }
        }
        Ok(s)
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn x_trunc(&self) -> usize {
        self.x_trunc
    }

    pub fn y_trunc(&self) -> usize {
        self.y_trunc
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// `[y^j x^i]`
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.coeffs[i * self.y_trunc + j]
    }

    /// `[x^i]` as a y-vector.
    pub fn row(&self, i: usize) -> &[u64] {
        &self.coeffs[i * self.y_trunc..(i + 1) * self.y_trunc]
    }

    fn ring(&self) -> Truncated {
        Truncated {
            field: self.field,
            m: self.y_trunc,
        }
    }

    fn wrap(&self, t: usize, coeffs: Vec<u64>) -> BiSeries {
        BiSeries {
            field: self.field,
            x_trunc: t,
            y_trunc: self.y_trunc,
            coeffs,
        }
    }

    fn compatible(&self, other: &BiSeries) -> Result<()> {
        if self.field.modulus() != other.field.modulus() {
            return Err(Error::ModulusMismatch {
                left: self.field.modulus(),
                right: other.field.modulus(),
            });
        }
        if self.y_trunc != other.y_trunc {
            return Err(Error::TruncationMismatch {
                left: self.y_trunc,
                right: other.y_trunc,
            });
        }
        Ok(())
    }

    /// `self * other` truncated to x-degree `< t` (and y-degree `< m`).
    pub fn multiply(&self, other: &BiSeries, t: usize) -> Result<BiSeries> {
        self.compatible(other)?;
        check_dims(t, self.y_trunc)?;
        let coeffs = self.ring().mul_trunc(&self.coeffs, &other.coeffs, t)?;
        Ok(self.wrap(t, coeffs))
    }

    /// `1 / self`; needs the `y^0` entry of `[x^0] self` to be nonzero.
    pub fn inverse(&self, t: usize) -> Result<BiSeries> {
        check_dims(t, self.y_trunc)?;
        let coeffs = newton::inverse(&self.ring(), &self.coeffs, t)?;
        Ok(self.wrap(t, coeffs))
    }

    /// `log(self)`; needs the `y^0` entry of `[x^0] self` to equal 1. The
    /// x-constant term is `log([x^0] self)` taken inside `F[y]/(y^m)`.
    pub fn log(&self, t: usize) -> Result<BiSeries> {
        check_dims(t, self.y_trunc)?;
        let coeffs = newton::log(&self.ring(), &self.coeffs, t)?;
        Ok(self.wrap(t, coeffs))
    }

    /// `exp(self)`; needs the `y^0` entry of `[x^0] self` to be zero.
    pub fn exp(&self, t: usize) -> Result<BiSeries> {
        check_dims(t, self.y_trunc)?;
        let coeffs = newton::exp_cyclic(&self.ring(), &self.coeffs, t)?;
        Ok(self.wrap(t, coeffs))
    }

    /// Running sums of whole rows along x, i.e. `self / (1 - x)`.
    pub fn prefix_sums(&self) -> BiSeries {
        let f = &self.field;
        let m = self.y_trunc;
        let mut coeffs = self.coeffs.clone();
        for i in 1..self.x_trunc {
            let (done, rest) = coeffs.split_at_mut(i * m);
            let prev = &done[(i - 1) * m..];
            for (c, &p) in rest[..m].iter_mut().zip(prev) {
                *c = f.add(*c, p);
            }
        }
        self.wrap(self.x_trunc, coeffs)
    }
}

/// `prod_s (1 + y x^s)^count` to x-degree `< t`, y-degree `< m`.
///
/// Entry `[y^k x^j]` counts the player subsets of size `k` and total
/// weight `j` (mod p). Built as the exponential of
/// `sum_s count * sum_{j>=1} (-1)^(j+1) y^j x^(sj) / j`.
pub fn bi_binomial_product(
    field: PrimeField,
    distinct_weights: &[(u64, usize)],
    t: usize,
    m: usize,
) -> Result<BiSeries> {
    check_dims(t, m)?;
    if let Some(&(s, _)) = distinct_weights.iter().find(|&&(s, _)| s == 0) {
        return Err(Error::WeightOutOfRange {
            weight: s,
            quota: 0,
        });
    }
    let invs = field.inverses_upto(t.min(m).max(1));
    let mut log_sum = vec![0u64; t * m];
    for &(s, count) in distinct_weights {
        if s >= t as u64 {
            continue;
        }
        let s = s as usize;
        let c = field.reduce(count as u64);
        for (j, pos) in (s..t).step_by(s).enumerate() {
            let j = j + 1;
            if j >= m {
                break;
            }
            let term = field.mul(c, invs[j]);
            let e = &mut log_sum[pos * m + j];
            *e = if j % 2 == 1 {
                field.add(*e, term)
            } else {
                field.sub(*e, term)
            };
        }
    }
    BiSeries::new(field, t, m, log_sum)?.exp(t)
}

/// Size-resolved swing counts of a player with weight `w`, read off the
/// prefix form `g = prod (1 + y x^w_p) / (1 - x)`.
///
/// Entry `k` is `[y^k x^(q-1)] g/(1+yx^w) - [y^k x^(q-w-1)] g/(1+yx^w)`,
/// i.e. the number of coalitions `S` without the player with `|S| = k` and
/// `q - w <= w(S) <= q - 1` (mod p).
pub fn ss_window(g: &BiSeries, w: u64, q: u64) -> Result<Vec<u64>> {
    if w == 0 || w > q {
        return Err(Error::WeightOutOfRange {
            weight: w,
            quota: q,
        });
    }
    if (g.x_trunc as u64) < q {
        return Err(Error::InvalidInstance(format!(
            "prefix series has {} x-coefficients, quota {q} needs {q}",
            g.x_trunc
        )));
    }
    let f = &g.field;
    let m = g.y_trunc;
    let mut out = quotient_row(g, w, q - 1);
    if let Some(k) = (q - 1).checked_sub(w) {
        for (o, b) in out.iter_mut().zip(quotient_row(g, w, k)) {
            *o = f.sub(*o, b);
        }
    }
    debug_assert_eq!(out.len(), m);
    Ok(out)
}

/// `[x^k] g / (1 + y x^w)` as a y-vector:
/// `[y^l] = sum_j (-1)^j [y^(l-j) x^(k-jw)] g`.
fn quotient_row(g: &BiSeries, w: u64, k: u64) -> Vec<u64> {
    let f = &g.field;
    let m = g.y_trunc;
    let (k, w) = (k as usize, w as usize);
    let mut out = vec![0u64; m];
    for (j, idx) in (0..=k).rev().step_by(w).enumerate() {
        if j >= m {
            break;
        }
        let row = g.row(idx);
        for (o, &c) in out[j..].iter_mut().zip(row) {
            *o = if j % 2 == 0 {
                f.add(*o, c)
            } else {
                f.sub(*o, c)
            };
        }
    }
    out
}
