use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, ToPrimitive, Zero};

use super::hall::HallBasis;
use crate::error::{Error, Result};

/// Möbius function by trial division.
pub fn mobius(d: i64) -> Result<i32> {
    if d < 1 {
        return Err(Error::InvalidArgument(format!(
            "mobius is defined for positive integers, got {d}"
        )));
    }
    let mut n = d;
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return Ok(0);
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    Ok(sign)
}

fn divisors(n: usize) -> impl Iterator<Item = usize> {
    (1..=n).filter(move |d| n.is_multiple_of(*d))
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

fn exact_div(sum: BigInt, n: usize, what: &str) -> Result<BigInt> {
    let (q, rem) = sum.div_rem(&BigInt::from(n));
    if !rem.is_zero() {
        return Err(Error::Internal(format!(
            "{what}: divisor sum {sum} is not a multiple of {n}"
        )));
    }
    Ok(q)
}

/// Number of basic commutators of weight `n` on `r` generators (Witt's formula).
pub fn witt_rank(r: usize, n: usize) -> Result<BigInt> {
    if r < 1 || n < 1 {
        return Err(Error::InvalidArgument(format!(
            "witt_rank needs r >= 1 and n >= 1, got r={r}, n={n}"
        )));
    }
    let base = BigInt::from(r);
    let mut sum = BigInt::zero();
    for d in divisors(n) {
        let mu = mobius(d as i64)?;
        if mu != 0 {
            sum += BigInt::from(mu) * Pow::pow(&base, (n / d) as u32);
        }
    }
    exact_div(sum, n, "witt_rank")
}

/// Number of basic commutators whose per-generator weights are exactly `parts`.
///
/// The divisor sum runs over the divisors of the gcd of the nonzero parts.
pub fn witt_multirank(parts: &[usize]) -> Result<BigInt> {
    let n: usize = parts.iter().sum();
    if parts.is_empty() || n == 0 {
        return Err(Error::InvalidArgument(
            "witt_multirank needs at least one nonzero part".into(),
        ));
    }
    let g = parts
        .iter()
        .copied()
        .filter(|&p| p > 0)
        .fold(0usize, |acc, p| acc.gcd(&p));
    let mut sum = BigInt::zero();
    for d in divisors(g) {
        let mu = mobius(d as i64)?;
        if mu == 0 {
            continue;
        }
        let denom = parts
            .iter()
            .fold(BigInt::one(), |acc, &p| acc * factorial(p / d));
        sum += BigInt::from(mu) * (factorial(n / d) / denom);
    }
    exact_div(sum, n, "witt_multirank")
}

/// `A(r, n)`: total occurrences of a fixed generator across the weight-`n`
/// basic commutators, counted on an actual Hall basis.
pub fn weight_count(r: usize, n: usize) -> Result<BigInt> {
    weight_count_with_cap(r, n, super::DEFAULT_BASIS_CAP)
}

pub fn weight_count_with_cap(r: usize, n: usize, cap: usize) -> Result<BigInt> {
    if r < 1 || n < 1 {
        return Err(Error::InvalidArgument(format!(
            "weight_count needs r >= 1 and n >= 1, got r={r}, n={n}"
        )));
    }
    let basis = HallBasis::with_cap(r, n, cap)?;
    let total: u64 = basis
        .entries()
        .iter()
        .filter(|c| c.weight == n)
        .map(|c| c.multiweight[0] as u64)
        .sum();
    Ok(BigInt::from(total))
}

/// `A_r^c = Σ_{n ≤ c} A(r, n)`, evaluated by the closed Möbius form.
///
/// For `r = 1` only the single generator contributes and the value is 1.
pub fn index_exponent(r: usize, c: usize) -> Result<BigInt> {
    if r < 1 || c < 1 {
        return Err(Error::InvalidArgument(format!(
            "index_exponent needs r >= 1 and c >= 1, got r={r}, c={c}"
        )));
    }
    if r == 1 {
        return Ok(BigInt::one());
    }
    let base = BigInt::from(r);
    let mut total = BigInt::zero();
    for d in 1..=c {
        let mu = mobius(d as i64)?;
        if mu == 0 {
            continue;
        }
        let geometric = (Pow::pow(&base, (c / d) as u32) - 1) / (r - 1);
        total += BigInt::from(mu) * geometric;
    }
    Ok(total)
}

/// `[G : H] = (n_1 ⋯ n_r)^{A_r^c}` for `H = <g_i^{n_i} z_i>`.
pub fn subgroup_index_formula(r: usize, c: usize, exponents: &[usize]) -> Result<BigInt> {
    if exponents.len() != r {
        return Err(Error::InvalidArgument(format!(
            "expected {r} exponents, got {}",
            exponents.len()
        )));
    }
    if exponents.contains(&0) {
        return Err(Error::InvalidArgument("exponents must be positive".into()));
    }
    let a = index_exponent(r, c)?;
    let a = a
        .to_u32()
        .ok_or_else(|| Error::InvalidArgument(format!("index exponent {a} is too large")))?;
    let product = exponents
        .iter()
        .fold(BigInt::one(), |acc, &n| acc * BigInt::from(n));
    Ok(Pow::pow(&product, a))
}
