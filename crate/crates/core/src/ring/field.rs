use crate::error::{Error, Result};

/// A prime field `Z/pZ` with `p = c * 2^a + 1 < 2^62`.
///
/// Elements are plain `u64` values in `[0, p)`. Multiplication goes through
/// Montgomery reduction internally, but nothing outside this module ever
/// sees a Montgomery-form value except the NTT twiddle tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    modulus: u64,
    /// `p^-1 mod 2^64`
    p_inv: u64,
    /// `2^128 mod p`
    r2: u64,
    two_adicity: u32,
    /// Element of multiplicative order exactly `2^two_adicity`.
    root: u64,
}

impl PrimeField {
    /// Builds the field for an odd prime modulus below `2^62`.
    ///
    /// Primality is not checked here; the built-in table in
    /// [`crate::ring::basis`] is verified by the test suite.
    pub fn new(modulus: u64) -> Result<Self> {
        if modulus < 3 || modulus & 1 == 0 || modulus >= 1 << 62 {
            return Err(Error::InvalidInstance(format!(
                "modulus {modulus} is not an odd value in [3, 2^62)"
            )));
        }
        let mut p_inv = modulus;
        for _ in 0..6 {
            p_inv = p_inv.wrapping_mul(2u64.wrapping_sub(modulus.wrapping_mul(p_inv)));
        }
        let r = ((1u128 << 64) % modulus as u128) as u64;
        let r2 = ((r as u128 * r as u128) % modulus as u128) as u64;
        let two_adicity = (modulus - 1).trailing_zeros();
        let mut field = Self {
            modulus,
            p_inv,
            r2,
            two_adicity,
            root: 1,
        };
        let odd_part = (modulus - 1) >> two_adicity;
        let half = (modulus - 1) / 2;
        let non_residue = (2..)
            .find(|&g| field.pow(g, half) == modulus - 1)
            .expect("a prime field has a quadratic non-residue");
        field.root = field.pow(non_residue, odd_part);
        Ok(field)
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Largest power-of-two transform length supported by this field.
    pub fn max_transform_len(&self) -> usize {
        1usize
            .checked_shl(self.two_adicity.min(usize::BITS - 1))
            .unwrap_or(usize::MAX)
    }

    /// `p^-1 mod 2^64`.
    #[inline]
    pub(crate) fn p_inv(&self) -> u64 {
        self.p_inv
    }

    pub fn two_adicity(&self) -> u32 {
        self.two_adicity
    }

    /// Primitive `n`-th root of unity, `n` a power of two within capacity.
    pub fn root_of_unity(&self, n: usize) -> Result<u64> {
        if !n.is_power_of_two() || n > self.max_transform_len() {
            return Err(Error::TransformTooLarge {
                len: n,
                capacity: self.max_transform_len(),
            });
        }
        let mut w = self.root;
        let mut order = self.max_transform_len();
        while order > n {
            w = self.mul(w, w);
            order >>= 1;
        }
        Ok(w)
    }

    #[inline]
    pub fn reduce(&self, x: u64) -> u64 {
        x % self.modulus
    }

    /// Maps a signed integer into the field.
    pub fn from_i64(&self, x: i64) -> u64 {
        let r = x.unsigned_abs() % self.modulus;
        if x < 0 {
            self.neg(r)
        } else {
            r
        }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    /// `a * b * 2^-64 mod p` for `a, b < p`.
    #[inline]
    pub(crate) fn mont_mul(&self, a: u64, b: u64) -> u64 {
        let t = a as u128 * b as u128;
        let lo = t as u64;
        let hi = (t >> 64) as u64;
        let m = lo.wrapping_mul(self.p_inv);
        let mp_hi = ((m as u128 * self.modulus as u128) >> 64) as u64;
        if hi >= mp_hi {
            hi - mp_hi
        } else {
            hi + self.modulus - mp_hi
        }
    }

    #[inline]
    pub(crate) fn from_mont(&self, a: u64) -> u64 {
        self.mont_mul(a, 1)
    }

    /// Montgomery form `a * 2^64 mod p`, the multiplier format `mont_mul` expects.
    #[inline]
    pub(crate) fn to_mont(&self, a: u64) -> u64 {
        self.mont_mul(a, self.r2)
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.mont_mul(self.mont_mul(a, b), self.r2)
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1;
        base %= self.modulus;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub fn inv(&self, a: u64) -> Option<u64> {
        let a = a % self.modulus;
        if a == 0 {
            return None;
        }
        let (mut r0, mut r1) = (self.modulus as i128, a as i128);
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(r0, 1);
        Some(s0.rem_euclid(self.modulus as i128) as u64)
    }

    /// `[0, inv(1), inv(2), ..., inv(n - 1)]` by batch inversion.
    ///
    /// Requires `n <= p`.
    pub fn inverses_upto(&self, n: usize) -> Vec<u64> {
        assert!((n as u64) <= self.modulus);
        let mut inv = vec![0u64; n];
        if n < 2 {
            return inv;
        }
        // prefix products in Montgomery form, one inversion, then unwind
        let mut prefix = vec![0u64; n];
        prefix[1] = self.to_mont(1);
        for i in 2..n {
            prefix[i] = self.mont_mul(prefix[i - 1], self.to_mont(i as u64));
        }
        let mut acc = self.to_mont(self.inv(self.from_mont(prefix[n - 1])).expect("n < p"));
        for i in (2..n).rev() {
            inv[i] = self.from_mont(self.mont_mul(acc, prefix[i - 1]));
            acc = self.mont_mul(acc, self.to_mont(i as u64));
        }
        inv[1] = 1;
        inv
    }
}
