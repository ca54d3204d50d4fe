use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

/// Exact non-negative count.
pub type BigCount = BigUint;

/// Exact non-negative rational, always kept in lowest terms.
pub type BigRational = Ratio<BigUint>;

/// Decimal rendering of `r` with `sig` significant digits, rounding half to
/// even. Values from `1e-6` upward print in fixed notation, smaller ones in
/// scientific notation (`1.23000000000e-9`).
pub fn to_decimal(r: &BigRational, sig: usize) -> String {
    assert!(sig >= 1);
    if r.is_zero() {
        return "0".to_string();
    }
    let num = r.numer();
    let den = r.denom();
    let ten = BigUint::from(10u32);

    // exponent e with 10^e <= r < 10^(e+1)
    let mut e: i64 = num.to_string().len() as i64 - den.to_string().len() as i64;
    loop {
        let (lhs, rhs) = scale(num, den, -e);
        if lhs < rhs {
            e -= 1;
        } else if lhs >= &rhs * &ten {
            e += 1;
        } else {
            break;
        }
    }

    // digits = round(r * 10^(sig - 1 - e))
    let shift = sig as i64 - 1 - e;
    let (n, d) = scale(num, den, shift);
    let (mut q, rem) = n.div_rem(&d);
    let twice = &rem * 2u32;
    if twice > d || (twice == d && q.is_odd()) {
        q += 1u32;
    }
    let mut digits = q.to_string();
    if digits.len() > sig {
        // rounded up to the next power of ten
        digits.truncate(sig);
        e += 1;
    }

    if e >= 0 {
        let int_len = (e + 1) as usize;
        if int_len >= digits.len() {
            let mut s = digits;
            s.push_str(&"0".repeat(int_len - s.len()));
            s
        } else {
            format!("{}.{}", &digits[..int_len], &digits[int_len..])
        }
    } else if e >= -6 {
        format!("0.{}{}", "0".repeat((-e - 1) as usize), digits)
    } else if digits.len() > 1 {
        format!("{}.{}e{}", &digits[..1], &digits[1..], e)
    } else {
        format!("{digits}e{e}")
    }
}

/// `(num * 10^k, den)` for `k >= 0`, `(num, den * 10^-k)` otherwise.
fn scale(num: &BigUint, den: &BigUint, k: i64) -> (BigUint, BigUint) {
    let p = BigUint::from(10u32).pow(k.unsigned_abs() as u32);
    if k >= 0 {
        (num * p, den.clone())
    } else {
        (num.clone(), den * p)
    }
}

/// Nearest `f64` (via a 17-digit decimal, which round-trips binary64).
pub fn to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    to_decimal(r, 17).parse().unwrap_or_else(|_| {
        r.numer().to_f64().unwrap_or(f64::INFINITY) / r.denom().to_f64().unwrap_or(f64::INFINITY)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: u64, b: u64) -> BigRational {
        Ratio::new(BigUint::from(a), BigUint::from(b))
    }

    #[test]
    fn fixed_notation() {
        assert_eq!(to_decimal(&q(3, 8), 12), "0.375000000000");
        assert_eq!(to_decimal(&q(2, 3), 12), "0.666666666667");
        assert_eq!(to_decimal(&q(1, 6), 12), "0.166666666667");
        assert_eq!(to_decimal(&q(1, 1), 12), "1.00000000000");
        assert_eq!(to_decimal(&q(0, 1), 12), "0");
        assert_eq!(to_decimal(&q(1, 1000), 3), "0.00100");
    }

    #[test]
    fn half_even_rounding() {
        // 0.125 -> 0.12, 0.375 -> 0.38
        assert_eq!(to_decimal(&q(1, 8), 2), "0.12");
        assert_eq!(to_decimal(&q(3, 8), 2), "0.38");
        assert_eq!(to_decimal(&q(999, 1000), 2), "1.0");
        assert_eq!(to_decimal(&q(25, 1), 1), "20");
    }

    #[test]
    fn scientific_for_tiny_values() {
        assert_eq!(to_decimal(&q(1, 1 << 40), 12), "9.09494701773e-13");
        assert_eq!(to_decimal(&q(3, 10_000_000), 1), "3e-7");
    }

    #[test]
    fn float_conversion() {
        assert_eq!(to_f64(&q(3, 8)), 0.375);
        assert_eq!(to_f64(&q(1, 3)), 1.0 / 3.0);
    }
}
