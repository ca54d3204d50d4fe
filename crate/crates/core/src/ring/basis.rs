use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::field::PrimeField;
use crate::error::{Error, Result};

/// NTT-friendly primes `c * 2^32 + 1` just below `2^62`, largest first.
///
/// Their product exceeds `2^19800`, which bounds the supported player count.
pub const PRIME_TABLE: &[u64] = &[
    0x3fffffee00000001,
    0x3fffffb400000001,
    0x3fffffa000000001,
    0x3fffff5d00000001,
    0x3fffff4900000001,
    0x3fffff4600000001,
    0x3fffff3000000001,
    0x3fffff2800000001,
    0x3fffff1c00000001,
    0x3fffff1800000001,
    0x3ffffed600000001,
    0x3ffffecb00000001,
    0x3ffffec700000001,
    0x3ffffeb800000001,
    0x3ffffeb300000001,
    0x3ffffe6a00000001,
    0x3ffffe4100000001,
    0x3ffffdf900000001,
    0x3ffffdd800000001,
    0x3ffffdd700000001,
    0x3ffffdc800000001,
    0x3ffffdc300000001,
    0x3ffffda700000001,
    0x3ffffd8300000001,
    0x3ffffd6600000001,
    0x3ffffd2d00000001,
    0x3ffffd2000000001,
    0x3ffffcfc00000001,
    0x3ffffcf700000001,
    0x3ffffce200000001,
    0x3ffffcc900000001,
    0x3ffffc7f00000001,
    0x3ffffc6c00000001,
    0x3ffffc4e00000001,
    0x3ffffbf700000001,
    0x3ffffbe200000001,
    0x3ffffbbf00000001,
    0x3ffffbb600000001,
    0x3ffffb9200000001,
    0x3ffffb6100000001,
    0x3ffffb5900000001,
    0x3ffffb5300000001,
    0x3ffffb3100000001,
    0x3ffffb0e00000001,
    0x3ffffaed00000001,
    0x3ffffade00000001,
    0x3ffffa9900000001,
    0x3ffffa9800000001,
    0x3ffffa8600000001,
    0x3ffffa7200000001,
    0x3ffffa6e00000001,
    0x3ffffa5a00000001,
    0x3ffffa5900000001,
    0x3ffffa3000000001,
    0x3ffffa1e00000001,
    0x3ffffa1400000001,
    0x3ffff9e500000001,
    0x3ffff9db00000001,
    0x3ffff9d800000001,
    0x3ffff9c400000001,
    0x3ffff99100000001,
    0x3ffff97600000001,
    0x3ffff96700000001,
    0x3ffff96000000001,
    0x3ffff94200000001,
    0x3ffff92800000001,
    0x3ffff90300000001,
    0x3ffff8fa00000001,
    0x3ffff8dc00000001,
    0x3ffff8d600000001,
    0x3ffff8d400000001,
    0x3ffff8ce00000001,
    0x3ffff8cd00000001,
    0x3ffff8ca00000001,
    0x3ffff8b600000001,
    0x3ffff89a00000001,
    0x3ffff87400000001,
    0x3ffff86800000001,
    0x3ffff86500000001,
    0x3ffff82900000001,
    0x3ffff82500000001,
    0x3ffff82300000001,
    0x3ffff82200000001,
    0x3ffff81900000001,
    0x3ffff7ff00000001,
    0x3ffff7e600000001,
    0x3ffff7c800000001,
    0x3ffff7bf00000001,
    0x3ffff7a700000001,
    0x3ffff79900000001,
    0x3ffff79600000001,
    0x3ffff79300000001,
    0x3ffff78400000001,
    0x3ffff77400000001,
    0x3ffff76b00000001,
    0x3ffff75600000001,
    0x3ffff74700000001,
    0x3ffff73300000001,
    0x3ffff73000000001,
    0x3ffff71500000001,
    0x3ffff6de00000001,
    0x3ffff6cf00000001,
    0x3ffff6c900000001,
    0x3ffff6c100000001,
    0x3ffff6b500000001,
    0x3ffff6ae00000001,
    0x3ffff6ac00000001,
    0x3ffff6ab00000001,
    0x3ffff69700000001,
    0x3ffff67e00000001,
    0x3ffff66d00000001,
    0x3ffff66300000001,
    0x3ffff63900000001,
    0x3ffff62b00000001,
    0x3ffff62200000001,
    0x3ffff62100000001,
    0x3ffff60100000001,
    0x3ffff5fa00000001,
    0x3ffff5ad00000001,
    0x3ffff5aa00000001,
    0x3ffff52300000001,
    0x3ffff4f500000001,
    0x3ffff4e100000001,
    0x3ffff4b700000001,
    0x3ffff49c00000001,
    0x3ffff47100000001,
    0x3ffff45f00000001,
    0x3ffff45400000001,
    0x3ffff44e00000001,
    0x3ffff43500000001,
    0x3ffff43200000001,
    0x3ffff42300000001,
    0x3ffff42100000001,
    0x3ffff3e200000001,
    0x3ffff3d800000001,
    0x3ffff3cf00000001,
    0x3ffff3c000000001,
    0x3ffff39f00000001,
    0x3ffff39700000001,
    0x3ffff38800000001,
    0x3ffff36f00000001,
    0x3ffff36400000001,
    0x3ffff31f00000001,
    0x3ffff31900000001,
    0x3ffff30c00000001,
    0x3ffff30a00000001,
    0x3ffff2e200000001,
    0x3ffff28c00000001,
    0x3ffff27100000001,
    0x3ffff27000000001,
    0x3ffff26b00000001,
    0x3ffff26400000001,
    0x3ffff25c00000001,
    0x3ffff24900000001,
    0x3ffff23a00000001,
    0x3ffff20d00000001,
    0x3ffff1fb00000001,
    0x3ffff1d400000001,
    0x3ffff1a400000001,
    0x3ffff19300000001,
    0x3ffff18f00000001,
    0x3ffff18a00000001,
    0x3ffff17e00000001,
    0x3ffff17b00000001,
    0x3ffff17700000001,
    0x3ffff16600000001,
    0x3ffff16500000001,
    0x3ffff14200000001,
    0x3ffff13800000001,
    0x3ffff12f00000001,
    0x3ffff10600000001,
    0x3ffff0f900000001,
    0x3ffff0d200000001,
    0x3ffff0cd00000001,
    0x3ffff0be00000001,
    0x3ffff0af00000001,
    0x3ffff08b00000001,
    0x3ffff07600000001,
    0x3ffff07300000001,
    0x3ffff04300000001,
    0x3ffff02a00000001,
    0x3ffff02500000001,
    0x3ffff01200000001,
    0x3ffff00400000001,
    0x3fffeffa00000001,
    0x3fffeff400000001,
    0x3fffefd600000001,
    0x3fffefa600000001,
    0x3fffef8c00000001,
    0x3fffef8800000001,
    0x3fffef8200000001,
    0x3fffef6a00000001,
    0x3fffef6200000001,
    0x3fffef5f00000001,
    0x3fffef1300000001,
    0x3fffeef500000001,
    0x3fffeeec00000001,
    0x3fffeedb00000001,
    0x3fffeec200000001,
    0x3fffeebd00000001,
    0x3fffee9600000001,
    0x3fffee7a00000001,
    0x3fffee7500000001,
    0x3fffee7200000001,
    0x3fffee5c00000001,
    0x3fffee4700000001,
    0x3fffee4100000001,
    0x3fffee2f00000001,
    0x3fffee2c00000001,
    0x3fffee2300000001,
    0x3fffee0c00000001,
    0x3fffee0500000001,
    0x3fffedfd00000001,
    0x3fffedee00000001,
    0x3fffede400000001,
    0x3fffedd800000001,
    0x3fffedca00000001,
    0x3fffedc100000001,
    0x3fffedb400000001,
    0x3fffeda600000001,
    0x3fffed9300000001,
    0x3fffed6f00000001,
    0x3fffed6700000001,
    0x3fffed5d00000001,
    0x3fffed4600000001,
    0x3fffed3300000001,
    0x3fffed2b00000001,
    0x3fffed1c00000001,
    0x3fffed1900000001,
    0x3fffed1500000001,
    0x3fffed1200000001,
    0x3fffed0100000001,
    0x3fffecfb00000001,
    0x3fffecf200000001,
    0x3fffecf100000001,
    0x3fffece900000001,
    0x3fffecca00000001,
    0x3fffecc200000001,
    0x3fffeca900000001,
    0x3fffeca400000001,
    0x3fffec9e00000001,
    0x3fffec8f00000001,
    0x3fffec6a00000001,
    0x3fffec6700000001,
    0x3fffec2f00000001,
    0x3fffebf000000001,
    0x3fffebde00000001,
    0x3fffebbd00000001,
    0x3fffeb9800000001,
    0x3fffeb9500000001,
    0x3fffeb8100000001,
    0x3fffeb5d00000001,
    0x3fffeb5400000001,
    0x3fffeb1100000001,
    0x3fffeae200000001,
    0x3fffeaa300000001,
    0x3fffea9a00000001,
    0x3fffea9700000001,
    0x3fffea6700000001,
    0x3fffea5e00000001,
    0x3fffea4b00000001,
    0x3fffea1e00000001,
    0x3fffea0400000001,
    0x3fffe9e800000001,
    0x3fffe9d600000001,
    0x3fffe9d300000001,
    0x3fffe9be00000001,
    0x3fffe9b800000001,
    0x3fffe9ac00000001,
    0x3fffe9a900000001,
    0x3fffe96a00000001,
    0x3fffe94a00000001,
    0x3fffe94600000001,
    0x3fffe93700000001,
    0x3fffe91d00000001,
    0x3fffe91900000001,
    0x3fffe91600000001,
    0x3fffe8f200000001,
    0x3fffe8ed00000001,
    0x3fffe8d700000001,
    0x3fffe8ce00000001,
    0x3fffe8c000000001,
    0x3fffe8b900000001,
    0x3fffe88900000001,
    0x3fffe88300000001,
    0x3fffe87d00000001,
    0x3fffe87800000001,
    0x3fffe85c00000001,
    0x3fffe83c00000001,
    0x3fffe80500000001,
    0x3fffe7fc00000001,
    0x3fffe7e200000001,
    0x3fffe7cc00000001,
    0x3fffe7c400000001,
    0x3fffe7b100000001,
    0x3fffe77200000001,
    0x3fffe76300000001,
    0x3fffe75800000001,
    0x3fffe73d00000001,
    0x3fffe71200000001,
    0x3fffe70400000001,
    0x3fffe6f700000001,
    0x3fffe6f400000001,
    0x3fffe6e500000001,
    0x3fffe6c800000001,
    0x3fffe6be00000001,
    0x3fffe68500000001,
    0x3fffe66400000001,
    0x3fffe65f00000001,
    0x3fffe65c00000001,
    0x3fffe65300000001,
    0x3fffe62200000001,
    0x3fffe62000000001,
    0x3fffe5ec00000001,
    0x3fffe5db00000001,
    0x3fffe5c300000001,
    0x3fffe59c00000001,
    0x3fffe59b00000001,
    0x3fffe59000000001,
    0x3fffe58600000001,
];

/// A list of distinct table primes whose product exceeds every count the
/// pipelines need to recover, together with precomputed Garner constants.
#[derive(Debug, Clone)]
pub struct PrimeBasis {
    fields: Vec<PrimeField>,
    product: BigUint,
    /// `garner[i] = (p_0 * ... * p_{i-1})^-1 mod p_i`
    garner: Vec<u64>,
}

impl PrimeBasis {
    /// Builds a basis from explicit moduli (must be distinct primes).
    pub fn from_moduli(moduli: &[u64]) -> Result<Self> {
        if moduli.is_empty() {
            return Err(Error::InvalidInstance("empty prime basis".into()));
        }
        let fields = moduli
            .iter()
            .map(|&p| PrimeField::new(p))
            .collect::<Result<Vec<_>>>()?;
        let mut product = BigUint::one();
        let mut garner = Vec::with_capacity(fields.len());
        for (i, f) in fields.iter().enumerate() {
            let prefix = fields[..i]
                .iter()
                .fold(1u64, |acc, g| f.mul(acc, f.reduce(g.modulus())));
            let inv = f.inv(prefix).ok_or_else(|| {
                Error::InvalidInstance(format!("modulus {} repeated in basis", f.modulus()))
            })?;
            garner.push(inv);
            product *= f.modulus();
        }
        Ok(Self {
            fields,
            product,
            garner,
        })
    }

    pub fn fields(&self) -> &[PrimeField] {
        &self.fields
    }

    pub fn moduli(&self) -> Vec<u64> {
        self.fields.iter().map(|f| f.modulus()).collect()
    }

    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }

    pub fn product(&self) -> &BigUint {
        &self.product
    }

    pub fn product_bits(&self) -> u64 {
        self.product.bits()
    }

    /// Residues of `x` modulo each basis prime.
    pub fn reduce(&self, x: &BigUint) -> Vec<u64> {
        self.fields
            .iter()
            .map(|f| {
                let r = x % f.modulus();
                r.iter_u64_digits().next().unwrap_or(0)
            })
            .collect()
    }

    /// The unique `x` in `[0, prod p_i)` with `x = residues[i] (mod p_i)`.
    ///
    /// Uses Garner's mixed-radix form, so the only big-integer work is the
    /// final Horner evaluation.
    pub fn crt_reconstruct(&self, residues: &[u64]) -> Result<BigUint> {
        if residues.len() != self.fields.len() {
            return Err(Error::ResidueCount {
                expected: self.fields.len(),
                got: residues.len(),
            });
        }
        for (f, &r) in self.fields.iter().zip(residues) {
            if r >= f.modulus() {
                return Err(Error::ResidueOutOfRange {
                    residue: r,
                    modulus: f.modulus(),
                });
            }
        }
        let mut digits: Vec<u64> = Vec::with_capacity(residues.len());
        for (i, f) in self.fields.iter().enumerate() {
            // value of the partial mixed-radix sum, reduced mod p_i
            let mut acc = 0u64;
            for (d, g) in digits.iter().zip(&self.fields).rev() {
                acc = f.add(f.mul(acc, f.reduce(g.modulus())), f.reduce(*d));
            }
            let v = f.mul(f.sub(residues[i], acc), self.garner[i]);
            digits.push(v);
        }
        let mut x = BigUint::zero();
        for (d, f) in digits.iter().zip(&self.fields).rev() {
            x *= f.modulus();
            x += *d;
        }
        Ok(x)
    }
}

/// Smallest prefix of [`PRIME_TABLE`] whose product exceeds `2^n` and whose
/// primes all exceed `t` and support transforms of length `2t` rounded up
/// to a power of two.
pub fn select_prime_basis(n: usize, t: usize) -> Result<PrimeBasis> {
    if n == 0 || t == 0 {
        return Err(Error::InvalidInstance(format!(
            "prime basis needs n >= 1 and t >= 1 (got n = {n}, t = {t})"
        )));
    }
    let transform_len = t
        .checked_mul(2)
        .and_then(usize::checked_next_power_of_two)
        .ok_or_else(|| Error::UnsupportedSize(format!("truncation {t} too large")))?;
    let mut chosen = Vec::new();
    let target = BigUint::one() << n;
    let mut product = BigUint::one();
    for &p in PRIME_TABLE {
        let capacity = 1u128 << (p - 1).trailing_zeros();
        if (p as u128) <= t as u128 || capacity < transform_len as u128 {
            continue;
        }
        chosen.push(p);
        product *= p;
        if product > target {
            break;
        }
    }
    if chosen.is_empty() {
        return Err(Error::UnsupportedSize(format!(
            "no tabled prime supports truncation {t}"
        )));
    }
    if product <= target {
        return Err(Error::UnsupportedSize(format!(
            "{n} players need more than the {} tabled primes",
            PRIME_TABLE.len()
        )));
    }
    PrimeBasis::from_moduli(&chosen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mod_pow(mut b: u128, mut e: u128, m: u128) -> u128 {
        let mut acc = 1u128;
        b %= m;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % m;
            }
            b = b * b % m;
            e >>= 1;
        }
        acc
    }

    // Deterministic Miller-Rabin for 64-bit inputs; products of two values
    // below 2^62 fit in u128.
    fn is_prime(n: u64) -> bool {
        if n < 2 {
            return false;
        }
        let n = n as u128;
        let d0 = n - 1;
        let s = d0.trailing_zeros();
        let d = d0 >> s;
        'witness: for a in [2u128, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
            if a % n == 0 {
                continue;
            }
            let mut x = mod_pow(a, d, n);
            if x == 1 || x == n - 1 {
                continue;
            }
            for _ in 1..s {
                x = x * x % n;
                if x == n - 1 {
                    continue 'witness;
                }
            }
            return false;
        }
        true
    }

    #[test]
    fn table_entries_are_distinct_ntt_primes() {
        let mut seen = std::collections::HashSet::new();
        for &p in PRIME_TABLE {
            assert!(is_prime(p), "{p} is composite");
            assert!((p - 1).trailing_zeros() >= 32);
            assert!(p < 1 << 62);
            assert!(seen.insert(p));
        }
        assert!(!is_prime(PRIME_TABLE[0] - 2));
    }

    #[test]
    fn field_inverse_holds_for_every_tabled_prime() {
        let mut x = 0x9e37_79b9_7f4a_7c15u64;
        for &p in PRIME_TABLE.iter().take(8) {
            let f = PrimeField::new(p).unwrap();
            for _ in 0..10_000 {
                x ^= x << 13;
                x ^= x >> 7;
                x ^= x << 17;
                let a = f.reduce(x);
                if a == 0 {
                    continue;
                }
                assert_eq!(f.mul(f.inv(a).unwrap(), a), 1);
            }
        }
    }

    #[test]
    fn single_prime_for_one_player() {
        let b = select_prime_basis(1, 2).unwrap();
        assert_eq!(b.len(), 1);
    }

    fn check_basis(n: usize, t: usize) -> PrimeBasis {
        let b = select_prime_basis(n, t).unwrap();
        let need = (2 * t).next_power_of_two();
        for f in b.fields() {
            assert!(is_prime(f.modulus()));
            assert!(f.modulus() > t as u64);
            assert!(f.max_transform_len() >= need);
            assert_eq!((f.modulus() - 1) % (1 << 21), 0);
        }
        assert!(b.product_bits() > n as u64);
        assert!(*b.product() > BigUint::one() << n);
        // minimality: dropping the last prime breaks the bound
        let prefix: BigUint = b.moduli()[..b.len() - 1]
            .iter()
            .map(|&p| BigUint::from(p))
            .product();
        assert!(prefix <= BigUint::one() << n);
        b
    }

    #[test]
    fn basis_for_64_players() {
        let b = check_basis(64, 1_000_000);
        assert!(b.len() >= 2);
    }

    #[test]
    fn basis_for_200_players() {
        check_basis(200, 100_000);
        check_basis(19_000, 10);
    }

    #[test]
    fn oversized_requests_fail() {
        assert!(matches!(
            select_prime_basis(4, 1 << 40),
            Err(Error::UnsupportedSize(_))
        ));
        assert!(matches!(
            select_prime_basis(30_000, 4),
            Err(Error::UnsupportedSize(_))
        ));
    }

    #[test]
    fn crt_small_moduli() {
        let b = PrimeBasis::from_moduli(&[3, 5]).unwrap();
        assert_eq!(b.crt_reconstruct(&[2, 3]).unwrap(), BigUint::from(8u32));
        assert_eq!(b.crt_reconstruct(&[0, 0]).unwrap(), BigUint::zero());
        assert!(matches!(
            b.crt_reconstruct(&[3, 0]),
            Err(Error::ResidueOutOfRange {
                residue: 3,
                modulus: 3
            })
        ));
        assert!(b.crt_reconstruct(&[1]).is_err());
        assert!(PrimeBasis::from_moduli(&[5, 5]).is_err());
    }

    proptest! {
        #[test]
        fn crt_round_trip(words in prop::collection::vec(any::<u64>(), 4)) {
            let basis = select_prime_basis(300, 16).unwrap();
            let x = BigUint::new(words.iter().flat_map(|w| [*w as u32, (*w >> 32) as u32]).collect());
            prop_assert!(&x < basis.product());
            let back = basis.crt_reconstruct(&basis.reduce(&x)).unwrap();
            prop_assert_eq!(back, x);
        }
    }
}
