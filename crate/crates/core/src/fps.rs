//! Truncated univariate formal power series over a prime field.

use crate::error::{Error, Result};
use crate::newton::{self, CoeffRing};
use crate::ring::{ntt_convolve, PrimeField};

/// `coeffs[i] = [x^i] f` for `i < trunc`, every entry reduced mod `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series {
    field: PrimeField,
    coeffs: Vec<u64>,
}

/// The base field viewed as a coefficient ring of width one.
pub(crate) struct Scalars(pub(crate) PrimeField);

impl CoeffRing for Scalars {
    fn field(&self) -> &PrimeField {
        &self.0
    }

    fn width(&self) -> usize {
        1
    }

    fn mul_trunc(&self, a: &[u64], b: &[u64], t: usize) -> Result<Vec<u64>> {
        mul_trunc(&self.0, a, b, t)
    }

    fn unit_inverse(&self, c: &[u64]) -> Result<Vec<u64>> {
        Ok(vec![self.0.inv(c[0]).ok_or(Error::NotInvertible)?])
    }

    fn const_exp(&self, c: &[u64]) -> Result<Vec<u64>> {
        if c[0] != 0 {
            return Err(Error::InvalidConstantTerm { expected: "0" });
        }
        Ok(vec![1])
    }

    fn const_log(&self, c: &[u64]) -> Result<Vec<u64>> {
        if c[0] != 1 {
            return Err(Error::InvalidConstantTerm { expected: "1" });
        }
        Ok(vec![0])
    }
}

/// First `t` coefficients of `a * b`, zero padded to exactly `t`.
pub(crate) fn mul_trunc(field: &PrimeField, a: &[u64], b: &[u64], t: usize) -> Result<Vec<u64>> {
    let a = &a[..a.len().min(t)];
    let b = &b[..b.len().min(t)];
    let mut c = ntt_convolve(field, a, b)?;
    c.resize(t, 0);
    Ok(c)
}

/// First `t` coefficients of `exp(a)`, `a_0 = 0`.
pub(crate) fn exp_cyclic(field: &PrimeField, a: &[u64], t: usize) -> Result<Vec<u64>> {
    newton::exp_cyclic(&Scalars(*field), a, t)
}

fn check_trunc(t: usize) -> Result<()> {
    if t == 0 {
        return Err(Error::InvalidInstance(
            "truncation must be at least 1".into(),
        ));
    }
    Ok(())
}

impl Series {
    pub fn new(field: PrimeField, coeffs: Vec<u64>) -> Result<Self> {
        check_trunc(coeffs.len())?;
        let coeffs = coeffs.into_iter().map(|c| field.reduce(c)).collect();
        Ok(Self { field, coeffs })
    }

    pub fn from_signed(field: PrimeField, coeffs: &[i64]) -> Result<Self> {
        Self::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn zero(field: PrimeField, t: usize) -> Result<Self> {
        Self::new(field, vec![0; t])
    }

    pub fn one(field: PrimeField, t: usize) -> Result<Self> {
        let mut s = Self::zero(field, t)?;
        s.coeffs[0] = 1;
        Ok(s)
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<u64> {
        self.coeffs
    }

    pub fn trunc(&self) -> usize {
        self.coeffs.len()
    }

    /// Same series cut or zero-padded to `t` coefficients.
    pub fn truncated(&self, t: usize) -> Result<Self> {
        check_trunc(t)?;
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(t, 0);
        Ok(Self {
            field: self.field,
            coeffs,
        })
    }

    fn same_field(&self, other: &Series) -> Result<()> {
        if self.field.modulus() != other.field.modulus() {
            return Err(Error::ModulusMismatch {
                left: self.field.modulus(),
                right: other.field.modulus(),
            });
        }
        Ok(())
    }

    /// First `t` coefficients of `self * other`.
    pub fn multiply(&self, other: &Series, t: usize) -> Result<Series> {
        self.same_field(other)?;
        check_trunc(t)?;
        let coeffs = mul_trunc(&self.field, &self.coeffs, &other.coeffs, t)?;
        Ok(Series {
            field: self.field,
            coeffs,
        })
    }

    /// First `t` coefficients of `1 / self`; needs `[x^0] self != 0`.
    pub fn inverse(&self, t: usize) -> Result<Series> {
        check_trunc(t)?;
        let coeffs = newton::inverse(&Scalars(self.field), &self.coeffs, t)?;
        Ok(Series {
            field: self.field,
            coeffs,
        })
    }

    /// First `t` coefficients of `log(self)`; needs `[x^0] self = 1`.
    pub fn log(&self, t: usize) -> Result<Series> {
        check_trunc(t)?;
        let coeffs = newton::log(&Scalars(self.field), &self.coeffs, t)?;
        Ok(Series {
            field: self.field,
            coeffs,
        })
    }

    /// First `t` coefficients of `exp(self)`; needs `[x^0] self = 0`.
    pub fn exp(&self, t: usize) -> Result<Series> {
        check_trunc(t)?;
        let coeffs = exp_cyclic(&self.field, &self.coeffs, t)?;
        Ok(Series {
            field: self.field,
            coeffs,
        })
    }

    /// `self / (1 - x)`: running sums of the coefficients.
    pub fn prefix_sums(&self) -> Series {
        let f = &self.field;
        let coeffs = self
            .coeffs
            .iter()
            .scan(0u64, |acc, &c| {
                *acc = f.add(*acc, c);
                Some(*acc)
            })
            .collect();
        Series {
            field: self.field,
            coeffs,
        }
    }
}

fn check_weights(distinct_weights: &[(u64, usize)]) -> Result<()> {
    if let Some(&(s, _)) = distinct_weights.iter().find(|&&(s, _)| s == 0) {
        return Err(Error::WeightOutOfRange {
            weight: s,
            quota: 0,
        });
    }
    Ok(())
}

/// `i [x^i] log prod_s (1 + x^s)^count` for `i < t`, as exact integers.
///
/// From `log(1 + x^s) = sum_{j>=1} (-1)^(j+1) x^(sj) / j`, entry `i` is
/// `sum_{s | i} (-1)^(i/s + 1) count_s s`. The values do not depend on the
/// prime, so one table serves every field.
pub fn binomial_log_numerators(distinct_weights: &[(u64, usize)], t: usize) -> Result<Vec<i64>> {
    check_trunc(t)?;
    check_weights(distinct_weights)?;
    let overflow = || Error::UnsupportedSize("log numerators exceed 64 bits".into());
    let mut total: i64 = 0;
    let mut out = vec![0i64; t];
    for &(s, count) in distinct_weights {
        if s >= t as u64 {
            continue;
        }
        let cs = i64::try_from(count)
            .ok()
            .and_then(|c| c.checked_mul(s as i64))
            .ok_or_else(overflow)?;
        // bounds every partial sum below
        total = total.checked_add(cs).ok_or_else(overflow)?;
        let s = s as usize;
        for (j, pos) in (s..t).step_by(s).enumerate() {
            if j % 2 == 0 {
                out[pos] += cs;
            } else {
                out[pos] -= cs;
            }
        }
    }
    Ok(out)
}

/// `exp(sum_i numerators[i] x^i / i)`, truncated to `numerators.len()` terms.
pub fn binomial_product_from_numerators(field: PrimeField, numerators: &[i64]) -> Result<Series> {
    let t = numerators.len();
    check_trunc(t)?;
    let invs = field.inverses_upto(t);
    let mut log = vec![0u64; t];
    for i in 1..t {
        log[i] = field.mul(field.from_i64(numerators[i]), invs[i]);
    }
    let coeffs = exp_cyclic(&field, &log, t)?;
    Ok(Series { field, coeffs })
}

/// First `t` coefficients of `prod_s (1 + x^s)^count`.
///
/// Coefficient `i` counts the player subsets of total weight `i` (mod p).
/// Built as the exponential of the sparse logarithm, see
/// [`binomial_log_numerators`].
pub fn binomial_product(
    field: PrimeField,
    distinct_weights: &[(u64, usize)],
    t: usize,
) -> Result<Series> {
    binomial_product_from_numerators(field, &binomial_log_numerators(distinct_weights, t)?)
}

/// Swing count (mod p) of a player with weight `w`, read off
/// `g = prod (1 + x^w_p) / (1 - x)`.
///
/// The count is `A(q-1) - A(q-w-1)` with `A(k) = [x^k] g/(1+x^w)
/// = sum_j (-1)^j [x^(k - j w)] g`. Since `A(q-1) = g_(q-1) - A(q-w-1)`
/// this is `g_(q-1) - 2 A(q-w-1)`, one alternating sum of `q / w` terms.
pub fn banzhaf_window(g: &Series, w: u64, q: u64) -> Result<u64> {
    if w == 0 || w > q {
        return Err(Error::WeightOutOfRange {
            weight: w,
            quota: q,
        });
    }
    if (g.trunc() as u64) < q {
        return Err(Error::InvalidInstance(format!(
            "prefix series has {} coefficients, quota {q} needs {q}",
            g.trunc()
        )));
    }
    let f = &g.field;
    let top = g.coeffs[(q - 1) as usize];
    Ok(match (q - 1).checked_sub(w) {
        Some(k) => {
            let a = quotient_coeff(g, w, k);
            f.sub(top, f.add(a, a))
        }
        None => top,
    })
}

/// `[x^k] g / (1 + x^w)`, summing even and odd terms separately without
/// reduction.
fn quotient_coeff(g: &Series, w: u64, k: u64) -> u64 {
    let (k, w) = (k as usize, w as usize);
    let (mut even, mut odd) = (0u128, 0u128);
    let mut idx = k as isize;
    let w = w as isize;
    while idx >= w {
        even += g.coeffs[idx as usize] as u128;
        odd += g.coeffs[(idx - w) as usize] as u128;
        idx -= 2 * w;
    }
    if idx >= 0 {
        even += g.coeffs[idx as usize] as u128;
    }
    let p = g.field.modulus() as u128;
    g.field.sub((even % p) as u64, (odd % p) as u64)
}
