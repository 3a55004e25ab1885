//! Wigner 3j and Clebsch-Gordan coefficients for small half-integer angular
//! momenta.
//!
//! Values come from the Racah single-sum formula. Every factorial product is
//! carried as an exact integer and the result is only converted to floating
//! point once, at the very end, so there is no cancellation between terms of
//! the alternating sum.

use core::fmt;
use core::str::FromStr;


use crate::error::{Error, Result};

/// An angular momentum or projection quantum number stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt(i32);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);
    pub const HALF: HalfInt = HalfInt(1);
    pub const ONE: HalfInt = HalfInt(2);

    /// Build from the doubled value, so `from_twice(3)` is 3/2.
    pub const fn from_twice(twice: i32) -> Self {
        HalfInt(twice)
    }

    pub const fn from_int(value: i32) -> Self {
        HalfInt(2 * value)
    }

    pub const fn twice(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    pub const fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// Number of projections `2j + 1` for an angular momentum `j`.
    pub const fn multiplicity(self) -> usize {
        (self.0 + 1) as usize
    }

    /// Projections `-j, -j+1, ..., j` in ascending order.
    pub fn projections(self) -> impl Iterator<Item = HalfInt> {
        let j = self.0;
        (0..=j).map(move |k| HalfInt(2 * k - j))
    }
}

impl core::ops::Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl core::ops::Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 - rhs.0)
    }
}

impl core::ops::Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Error returned when a string is neither `n` nor `n/2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseHalfIntError;

impl fmt::Display for ParseHalfIntError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("expected an integer or a fraction with denominator 2")
    }
}

impl FromStr for HalfInt {
    type Err = ParseHalfIntError;

    fn from_str(s: &str) -> core::result::Result<Self, Self::Err> {
        let s = s.trim();
        match s.split_once('/') {
            Some((num, den)) => {
                let num: i32 = num.trim().parse().map_err(|_| ParseHalfIntError)?;
                match den.trim() {
                    "2" => Ok(HalfInt(num)),
                    "1" => Ok(HalfInt(2 * num)),
                    _ => Err(ParseHalfIntError),
                }
            }
            None => s.parse::<i32>().map(HalfInt::from_int).map_err(|_| ParseHalfIntError),
        }
    }
}

fn check_pair(j: HalfInt, m: HalfInt) -> Result<()> {
    if j.0 < 0 {
        return Err(Error::NegativeMomentum(j));
    }
    if (j.0 - m.0).rem_euclid(2) != 0 {
        return Err(Error::InvalidProjection { j, m });
    }
    Ok(())
}

fn factorial(n: i32) -> Option<u128> {
    (1..=n as u128).try_fold(1u128, |acc, k| acc.checked_mul(k))
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Exact rational with sign tracked separately.
#[derive(Clone, Copy)]
struct Ratio {
    negative: bool,
    num: u128,
    den: u128,
}

impl Ratio {
    const ZERO: Ratio = Ratio { negative: false, num: 0, den: 1 };

    fn checked_add(self, other: Ratio) -> Option<Ratio> {
        let g = gcd(self.den, other.den);
        let den = (self.den / g).checked_mul(other.den)?;
        let a = self.num.checked_mul(other.den / g)?;
        let b = other.num.checked_mul(self.den / g)?;
        let (negative, num) = match (self.negative, other.negative) {
            (x, y) if x == y => (x, a.checked_add(b)?),
            (x, _) if a >= b => (x, a - b),
            (_, y) => (y, b - a),
        };
        let g = gcd(num, den).max(1);
        Some(Ratio { negative, num: num / g, den: den / g })
    }

    fn to_f64(self) -> f64 {
        let v = self.num as f64 / self.den as f64;
        if self.negative {
            -v
        } else {
            v
        }
    }
}

/// Racah sum with exact integer arithmetic. Arguments are doubled values that
/// already passed the selection rules. Returns `None` on integer overflow.
fn racah_exact(tj: [i32; 3], tm: [i32; 3]) -> Option<f64> {
    let [j1, j2, j3] = tj;
    let [m1, m2, m3] = tm;
    let half = |x: i32| x / 2;

    let mut radicand_num = factorial(half(j1 + j2 - j3))?
        .checked_mul(factorial(half(j1 - j2 + j3))?)?
        .checked_mul(factorial(half(-j1 + j2 + j3))?)?;
    for (j, m) in [(j1, m1), (j2, m2), (j3, m3)] {
        radicand_num = radicand_num
            .checked_mul(factorial(half(j + m))?)?
            .checked_mul(factorial(half(j - m))?)?;
    }
    let radicand_den = factorial(half(j1 + j2 + j3) + 1)?;

    let k_min = 0.max(half(j2 - j3 - m1)).max(half(j1 - j3 + m2));
    let k_max = half(j1 + j2 - j3).min(half(j1 - m1)).min(half(j2 + m2));

    let mut sum = Ratio::ZERO;
    for k in k_min..=k_max {
        let den = factorial(k)?
            .checked_mul(factorial(half(j3 - j2 + m1) + k)?)?
            .checked_mul(factorial(half(j3 - j1 - m2) + k)?)?
            .checked_mul(factorial(half(j1 + j2 - j3) - k)?)?
            .checked_mul(factorial(half(j1 - m1) - k)?)?
            .checked_mul(factorial(half(j2 + m2) - k)?)?;
        sum = sum.checked_add(Ratio { negative: k % 2 == 1, num: 1, den })?;
    }

    let phase = if half(j1 - j2 - m3).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let g = gcd(radicand_num, radicand_den);
    let radicand = (radicand_num / g) as f64 / (radicand_den / g) as f64;
    Some(phase * radicand.sqrt() * sum.to_f64())
}

/// Floating-point Racah sum via log-factorials, used only when the exact path
/// would overflow (angular momenta well beyond what atomic fine structure needs).
fn racah_float(tj: [i32; 3], tm: [i32; 3]) -> f64 {
    let [j1, j2, j3] = tj;
    let [m1, m2, m3] = tm;
    let half = |x: i32| x / 2;
    let ln_fact = |n: i32| (1..=n).map(|k| f64::from(k).ln()).sum::<f64>();

    let mut ln_rad = ln_fact(half(j1 + j2 - j3)) + ln_fact(half(j1 - j2 + j3))
        + ln_fact(half(-j1 + j2 + j3))
        - ln_fact(half(j1 + j2 + j3) + 1);
    for (j, m) in [(j1, m1), (j2, m2), (j3, m3)] {
        ln_rad += ln_fact(half(j + m)) + ln_fact(half(j - m));
    }
    let k_min = 0.max(half(j2 - j3 - m1)).max(half(j1 - j3 + m2));
    let k_max = half(j1 + j2 - j3).min(half(j1 - m1)).min(half(j2 + m2));
    let mut sum = 0.0;
    for k in k_min..=k_max {
        let ln_den = ln_fact(k)
            + ln_fact(half(j3 - j2 + m1) + k)
            + ln_fact(half(j3 - j1 - m2) + k)
            + ln_fact(half(j1 + j2 - j3) - k)
            + ln_fact(half(j1 - m1) - k)
            + ln_fact(half(j2 + m2) - k);
        let term = (0.5 * ln_rad - ln_den).exp();
        sum += if k % 2 == 0 { term } else { -term };
    }
    let phase = if half(j1 - j2 - m3).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    phase * sum
}

/// Triangle rule `|j1 - j2| <= j3 <= j1 + j2` with integer perimeter.
pub fn triangle(j1: HalfInt, j2: HalfInt, j3: HalfInt) -> bool {
    let (a, b, c) = (j1.0, j2.0, j3.0);
    (a + b + c) % 2 == 0 && c >= (a - b).abs() && c <= a + b
}

/// Wigner 3j symbol
/// ```text
/// ( j1 j2 j3 )
/// ( m1 m2 m3 )
/// ```
///
/// Selection-rule violations (projection sum, triangle rule, `|m| > j`)
/// give exactly zero. A projection whose parity does not match its angular
/// momentum is a domain error.
pub fn wigner3j(
    j1: HalfInt,
    j2: HalfInt,
    j3: HalfInt,
    m1: HalfInt,
    m2: HalfInt,
    m3: HalfInt,
) -> Result<f64> {
    check_pair(j1, m1)?;
    check_pair(j2, m2)?;
    check_pair(j3, m3)?;

    if m1.0 + m2.0 + m3.0 != 0 || !triangle(j1, j2, j3) {
        return Ok(0.0);
    }
    if m1.0.abs() > j1.0 || m2.0.abs() > j2.0 || m3.0.abs() > j3.0 {
        return Ok(0.0);
    }

    let tj = [j1.0, j2.0, j3.0];
    let tm = [m1.0, m2.0, m3.0];
    Ok(racah_exact(tj, tm).unwrap_or_else(|| racah_float(tj, tm)))
}

/// Clebsch-Gordan coefficient `<j1 m1; j2 m2 | J M>` (Condon-Shortley phase).
pub fn clebsch_gordan(
    j1: HalfInt,
    m1: HalfInt,
    j2: HalfInt,
    m2: HalfInt,
    j: HalfInt,
    m: HalfInt,
) -> Result<f64> {
    check_pair(j, m)?;
    let w = wigner3j(j1, j2, j, m1, m2, -m)?;
    if w == 0.0 {
        return Ok(0.0);
    }
    let phase = if ((j1.0 - j2.0 + m.0) / 2).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    Ok(phase * f64::from(j.0 + 1).sqrt() * w)
}
