//! Closed-form bounds on `C(n, q)`, the largest non-overlapping code size.
//!
//! Everything is exact: integers are unbounded and ratios are rationals.
//! Floating point only appears in [`decimal`] rendering.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{param, Result};
use crate::words::check_alphabet;

fn check(n: usize, q: u32) -> Result<()> {
    check_alphabet(q)?;
    if n < 2 {
        return param(format!("n = {n} must be at least 2; C(1, q) = q"));
    }
    Ok(())
}

fn rat(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

/// `C(1, q) = q`: every single symbol is trivially non-overlapping.
pub fn length_one_value(q: u32) -> BigUint {
    BigUint::from(q)
}

/// Headline bound `q^n / (2n - 1)`; every code is strictly smaller.
pub fn headline_bound(n: usize, q: u32) -> Result<BigRational> {
    check(n, q)?;
    Ok(rat(BigUint::from(q).pow(n as u32), 2 * n - 1))
}

/// Largest integer `c` with `(2n-1) c q^(n-1) <= q^(2n-1) - q`.
///
/// Counting pairs (word of length `2n-1`, cyclic start of a codeword) gives
/// `(2n-1)|C| q^(n-1)` pairs, at most one per word and none for the `q`
/// constant words.
pub fn upper_bound(n: usize, q: u32) -> Result<BigUint> {
    check(n, q)?;
    let qb = BigUint::from(q);
    let pairs = qb.pow(2 * n as u32 - 1) - &qb;
    let per_codeword = BigUint::from(2 * n - 1) * qb.pow(n as u32 - 1);
    Ok(pairs / per_codeword)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma2Bound {
    pub value: BigUint,
    /// False when no `k >= 1` satisfies `2k <= n - 2`; `value` is then 0.
    pub in_regime: bool,
}

/// `⌊(q-1)^2 (2q-1) q^n / (4 n q^4)⌋`, the zero-run family guarantee.
pub fn lower_bound_lemma2(n: usize, q: u32) -> Result<Lemma2Bound> {
    check(n, q)?;
    if n < 4 {
        return Ok(Lemma2Bound {
            value: BigUint::zero(),
            in_regime: false,
        });
    }
    let qi = BigInt::from(q);
    let num: BigInt = (&qi - 1u32).pow(2) * (2u32 * &qi - 1u32) * qi.pow(n as u32);
    let den = BigInt::from(4 * n) * qi.pow(4);
    let value = rat(num, den).floor().to_integer();
    Ok(Lemma2Bound {
        value: value.to_biguint().expect("non-negative"),
        in_regime: true,
    })
}

/// `C(2, q) = ⌊q/2⌋ ⌈q/2⌉`.
pub fn exact_value_n2(q: u32) -> Result<BigUint> {
    check_alphabet(q)?;
    let q = u64::from(q);
    Ok(BigUint::from(q / 2) * BigUint::from(q.div_ceil(2)))
}

/// Nearest integer to `2q/3`; `2q/3` is never a half-integer.
pub fn nearest_two_thirds(q: u32) -> u64 {
    (2 * u64::from(q) + 1) / 3
}

/// `C(3, q) = m^2 (q - m)` with `m` the nearest integer to `2q/3`.
pub fn exact_value_n3(q: u32) -> Result<BigUint> {
    check_alphabet(q)?;
    let m = nearest_two_thirds(q);
    Ok(BigUint::from(m).pow(2) * BigUint::from(u64::from(q) - m))
}

/// Exact `C(n, q)` where a closed form is known (`n` in {1, 2, 3}).
pub fn exact_value(n: usize, q: u32) -> Result<Option<BigUint>> {
    check_alphabet(q)?;
    Ok(match n {
        1 => Some(length_one_value(q)),
        2 => Some(exact_value_n2(q)?),
        3 => Some(exact_value_n3(q)?),
        _ => None,
    })
}

/// `((n-1)/n)^(n-1)`: the fixed-length, large-alphabet constant.
pub fn fixed_length_constant(n: usize) -> BigRational {
    let n = n as u64;
    rat(n - 1, n).pow(n as i32 - 1)
}

/// `(q-1)^2 (2q-1) / (4 q^4)`: the fixed-alphabet, long-length constant.
pub fn fixed_alphabet_constant(q: u32) -> BigRational {
    let q = BigInt::from(q);
    let num: BigInt = (&q - 1u32).pow(2) * (2u32 * &q - 1u32);
    rat(num, 4u32 * q.pow(4))
}

/// The absolute constant `1/50` achieved for all large parameters.
pub fn general_constant() -> BigRational {
    rat(1, 50)
}

/// A code size normalised by `q^n / n`, next to the reference constants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioReport {
    pub n: usize,
    pub q: u32,
    pub size: BigUint,
    pub ratio: BigRational,
    pub fixed_length: BigRational,
    pub fixed_alphabet: BigRational,
    pub general: BigRational,
}

pub fn ratio_report(n: usize, q: u32, size: &BigUint) -> Result<RatioReport> {
    check(n, q)?;
    let scale = rat(BigUint::from(q).pow(n as u32), n);
    let ratio = BigRational::from_integer(BigInt::from(size.clone())) / scale;
    Ok(RatioReport {
        n,
        q,
        size: size.clone(),
        ratio,
        fixed_length: fixed_length_constant(n),
        fixed_alphabet: fixed_alphabet_constant(q),
        general: general_constant(),
    })
}

impl RatioReport {
    pub fn render(&self) -> String {
        format!(
            "ratio={} ratio_decimal={} fixed_length={} fixed_alphabet={} general={}",
            self.ratio,
            decimal(&self.ratio, 6),
            decimal(&self.fixed_length, 6),
            decimal(&self.fixed_alphabet, 6),
            decimal(&self.general, 6),
        )
    }
}

/// Truncated decimal rendering with `digits` fractional digits.
pub fn decimal(x: &BigRational, digits: u32) -> String {
    let neg = x.is_negative();
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = (x.abs() * BigRational::from_integer(scale.clone())).floor().to_integer();
    let (int, frac) = scaled.div_rem(&scale);
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{int}");
    }
    format!("{sign}{int}.{:0>width$}", frac.to_string(), width = digits as usize)
}

/// `|ratio - limit|` as an exact rational.
pub fn distance(ratio: &BigRational, limit: &BigRational) -> BigRational {
    (ratio - limit).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn upper_bound_examples() {
        assert_eq!(upper_bound(2, 2).unwrap(), big(1));
        assert_eq!(upper_bound(3, 3).unwrap(), big(5));
        assert_eq!(upper_bound(2, 4).unwrap(), big(5));
        assert!(upper_bound(1, 4).is_err());
        assert_eq!(length_one_value(7), big(7));
    }

    #[test]
    fn upper_bound_strictly_below_headline() {
        for n in 2..=32 {
            for q in 2..=64u32 {
                let refined = BigRational::from_integer(upper_bound(n, q).unwrap().into());
                assert!(refined < headline_bound(n, q).unwrap(), "n={n} q={q}");
            }
        }
    }

    #[test]
    fn lemma2_examples() {
        let b = lower_bound_lemma2(8, 2).unwrap();
        assert_eq!(b, Lemma2Bound { value: big(1), in_regime: true });
        assert_eq!(lower_bound_lemma2(16, 2).unwrap().value, big(192));
        let b = lower_bound_lemma2(3, 2).unwrap();
        assert_eq!(b, Lemma2Bound { value: big(0), in_regime: false });
    }

    #[test]
    fn small_length_formulas() {
        assert_eq!(exact_value_n2(2).unwrap(), big(1));
        assert_eq!(exact_value_n2(5).unwrap(), big(6));
        assert_eq!(exact_value_n2(4).unwrap(), big(4));
        assert_eq!(exact_value_n3(3).unwrap(), big(4));
        assert_eq!(exact_value_n3(4).unwrap(), big(9));
        assert_eq!(exact_value_n3(2).unwrap(), big(1));
        assert_eq!(exact_value(4, 3).unwrap(), None);
    }

    #[test]
    fn nearest_integer_matches_rounding() {
        for q in 2..2000u32 {
            let exact = 2.0 * f64::from(q) / 3.0;
            assert_eq!(nearest_two_thirds(q), exact.round() as u64);
            // nearest integer maximises i^2 (q - i)
            let best = (1..u64::from(q)).map(|i| i * i * (u64::from(q) - i)).max().unwrap();
            let m = nearest_two_thirds(q);
            assert_eq!(m * m * (u64::from(q) - m), best, "q={q}");
        }
    }

    #[test]
    fn small_length_formulas_below_upper_bound() {
        for q in 2..=1000 {
            assert!(exact_value_n2(q).unwrap() <= upper_bound(2, q).unwrap());
            assert!(exact_value_n3(q).unwrap() <= upper_bound(3, q).unwrap());
        }
    }

    #[test]
    fn ratio_examples() {
        let r = ratio_report(2, 1000, &big(250_000)).unwrap();
        assert_eq!(r.ratio, rat(1, 2));
        let r = ratio_report(3, 999, &(big(666 * 666) * big(333))).unwrap();
        assert_eq!(r.ratio, rat(4, 9));
        let r = ratio_report(3, 5, &big(0)).unwrap();
        assert!(r.ratio.is_zero());
        assert_eq!(r.fixed_length, rat(4, 9));
        assert_eq!(r.general, rat(1, 50));
        assert_eq!(fixed_alphabet_constant(2), rat(3, 64));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal(&rat(1, 3), 4), "0.3333");
        assert_eq!(decimal(&rat(-5, 2), 2), "-2.50");
        assert_eq!(decimal(&rat(7, 1), 0), "7");
        assert_eq!(decimal(&rat(1, 50), 6), "0.020000");
    }
}
