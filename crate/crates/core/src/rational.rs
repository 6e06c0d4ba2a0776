//! Arbitrary-precision rationals and closed rational intervals.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(n: i64) -> Int {
    Int::from(n)
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

pub fn rat_int(n: impl Into<Int>) -> Rat {
    Rat::from_integer(n.into())
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse rational from {0:?}")]
pub struct ParseRatError(pub String);

/// Parses `"p"` or `"p/q"`.
pub fn parse_rat(s: &str) -> Result<Rat, ParseRatError> {
    let err = || ParseRatError(s.to_string());
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: Int = p.trim().parse().map_err(|_| err())?;
            let q: Int = q.trim().parse().map_err(|_| err())?;
            if q.is_zero() {
                return Err(err());
            }
            Ok(Rat::new(p, q))
        }
        None => s.parse::<Int>().map(Rat::from_integer).map_err(|_| err()),
    }
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise, q > 0, reduced.
pub fn fmt_rat(r: &Rat) -> String {
    r.to_string()
}

pub fn is_integral(r: &Rat) -> bool {
    r.denom().is_one()
}

pub fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a Rat>) -> Int {
    values
        .into_iter()
        .fold(Int::one(), |acc, r| acc.lcm(r.denom()))
}

pub fn floor(r: &Rat) -> Int {
    r.floor().to_integer()
}

pub fn ceil(r: &Rat) -> Int {
    r.ceil().to_integer()
}

pub fn to_f64(r: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        // Numerator or denominator overflows f64: scale both down.
        let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(900);
        let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// A closed interval `[lo, hi]` with exact rational endpoints.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Rat,
    pub hi: Rat,
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} ~ {:.12}, {} ~ {:.12}]", self.lo, to_f64(&self.lo), self.hi, to_f64(&self.hi))
    }
}

impl Interval {
    pub fn new(lo: Rat, hi: Rat) -> Self {
        debug_assert!(lo <= hi, "inverted interval");
        Interval { lo, hi }
    }

    pub fn point(x: Rat) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn zero() -> Self {
        Self::point(Rat::zero())
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rat {
        (&self.lo + &self.hi) / rat_int(2)
    }

    pub fn contains(&self, x: &Rat) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// Sign of every point of the interval, if it is uniform and nonzero.
    pub fn strict_sign(&self) -> Option<Ordering> {
        if self.lo.is_positive() {
            Some(Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(Ordering::Less)
        } else {
            None
        }
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval::new(&self.lo + &o.lo, &self.hi + &o.hi)
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        Interval::new(&self.lo - &o.hi, &self.hi - &o.lo)
    }

    pub fn neg(&self) -> Interval {
        Interval::new(-&self.hi, -&self.lo)
    }

    pub fn scale(&self, c: &Rat) -> Interval {
        if c.is_negative() {
            Interval::new(&self.hi * c, &self.lo * c)
        } else {
            Interval::new(&self.lo * c, &self.hi * c)
        }
    }

    pub fn add_scalar(&self, c: &Rat) -> Interval {
        Interval::new(&self.lo + c, &self.hi + c)
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let products = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = products.iter().min().unwrap().clone();
        let hi = products.iter().max().unwrap().clone();
        Interval::new(lo, hi)
    }

    /// `None` when the divisor interval contains zero.
    pub fn div(&self, o: &Interval) -> Option<Interval> {
        if o.contains_zero() {
            return None;
        }
        let inv = Interval::new(o.hi.recip(), o.lo.recip());
        Some(self.mul(&inv))
    }

    /// Outward rounding of both endpoints to the grid 2^-bits.
    pub fn round_out(&self, bits: u32) -> Interval {
        let scale = Rat::from_integer(Int::one() << bits);
        let lo = Rat::new(floor(&(&self.lo * &scale)), scale.to_integer());
        let hi = Rat::new(ceil(&(&self.hi * &scale)), scale.to_integer());
        Interval { lo, hi }
    }

    /// Integers contained in the interval, if there are at most `limit` of them.
    pub fn integers(&self, limit: usize) -> Option<Vec<Int>> {
        let lo = ceil(&self.lo);
        let hi = floor(&self.hi);
        if lo > hi {
            return Some(Vec::new());
        }
        let count = &hi - &lo + Int::one();
        if count > Int::from(limit) {
            return None;
        }
        let mut out = Vec::new();
        let mut k = lo;
        while k <= hi {
            out.push(k.clone());
            k += 1;
        }
        Some(out)
    }
}

pub fn abs_max<'a>(values: impl IntoIterator<Item = &'a Rat>) -> Rat {
    values
        .into_iter()
        .map(|v| v.abs())
        .max()
        .unwrap_or_else(Rat::zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rat("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rat("-4").unwrap(), rat(-4, 1));
        assert_eq!(parse_rat(" 7 / -14 ").unwrap(), rat(-1, 2));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
        assert_eq!(fmt_rat(&rat(-2, 4)), "-1/2");
        assert_eq!(fmt_rat(&rat(6, 3)), "2");
    }

    #[test]
    fn interval_mul_handles_signs() {
        let a = Interval::new(rat(-1, 1), rat(2, 1));
        let b = Interval::new(rat(-3, 1), rat(1, 1));
        let p = a.mul(&b);
        assert_eq!(p.lo, rat(-6, 1));
        assert_eq!(p.hi, rat(3, 1));
        assert!(a.div(&b).is_none());
        assert_eq!(
            Interval::new(rat(1, 3), rat(5, 2)).integers(10).unwrap(),
            vec![int(1), int(2)]
        );
    }
}
