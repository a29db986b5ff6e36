use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::GeomError;

/// Exact rational coordinate.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Coord(BigRational);

impl Coord {
    pub fn zero() -> Self {
        Coord(BigRational::zero())
    }

    pub fn one() -> Self {
        Coord(BigRational::one())
    }

    pub fn from_int(v: i64) -> Self {
        Coord(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Coord(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Self {
        Coord(BigRational::new(num, den))
    }

    /// Exact value of a finite float.
    pub fn from_f64(v: f64) -> Option<Self> {
        BigRational::from_float(v).map(Coord)
    }

    pub fn from_rational(r: BigRational) -> Self {
        Coord(r)
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn signum(&self) -> i32 {
        if self.0.is_positive() {
            1
        } else if self.0.is_negative() {
            -1
        } else {
            0
        }
    }

    pub fn abs(&self) -> Coord {
        Coord(self.0.abs())
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn recip(&self) -> Coord {
        Coord(self.0.recip())
    }

    pub fn half(&self) -> Coord {
        Coord(&self.0 / BigRational::from_integer(BigInt::from(2)))
    }

    pub fn min(self, other: Coord) -> Coord {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Coord) -> Coord {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl fmt::Debug for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Integers print bare, everything else as `num/den`.
impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

/// Accepts `12`, `-3.25`, `1e-3`-free decimals and `num/den` fractions.
impl FromStr for Coord {
    type Err = GeomError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GeomError::BadCoordinate(s.to_string());
        let s = s.trim();
        if s.is_empty() {
            return Err(bad());
        }
        if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            return Ok(Coord(BigRational::new(n, d)));
        }
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let (int_part, frac_part) = match body.split_once('.') {
            Some((i, f)) => (i, f),
            None => (body, ""),
        };
        if (int_part.is_empty() && frac_part.is_empty())
            || !int_part.chars().all(|c| c.is_ascii_digit())
            || !frac_part.chars().all(|c| c.is_ascii_digit())
        {
            return Err(bad());
        }
        let digits = format!("{}{}", int_part, frac_part);
        let num: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse().map_err(|_| bad())?
        };
        let den = num_traits::pow(BigInt::from(10), frac_part.len());
        let mut r = BigRational::new(num, den);
        if neg {
            r = -r;
        }
        Ok(Coord(r))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl<'a, 'b> $tr<&'b Coord> for &'a Coord {
            type Output = Coord;
            fn $method(self, rhs: &'b Coord) -> Coord {
                Coord((&self.0).$method(&rhs.0))
            }
        }
        impl $tr<Coord> for Coord {
            type Output = Coord;
            fn $method(self, rhs: Coord) -> Coord {
                Coord(self.0.$method(rhs.0))
            }
        }
        impl<'a> $tr<&'a Coord> for Coord {
            type Output = Coord;
            fn $method(self, rhs: &'a Coord) -> Coord {
                Coord(self.0.$method(&rhs.0))
            }
        }
        impl<'a> $tr<Coord> for &'a Coord {
            type Output = Coord;
            fn $method(self, rhs: Coord) -> Coord {
                Coord((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Coord {
    type Output = Coord;
    fn neg(self) -> Coord {
        Coord(-self.0)
    }
}

impl Neg for &Coord {
    type Output = Coord;
    fn neg(self) -> Coord {
        Coord(-&self.0)
    }
}

impl From<i64> for Coord {
    fn from(v: i64) -> Self {
        Coord::from_int(v)
    }
}

impl From<i32> for Coord {
    fn from(v: i32) -> Self {
        Coord::from_int(v as i64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimal_and_fraction() {
        assert_eq!("1.25".parse::<Coord>().unwrap(), Coord::from_ratio(5, 4));
        assert_eq!("-0.5".parse::<Coord>().unwrap(), Coord::from_ratio(-1, 2));
        assert_eq!("3/6".parse::<Coord>().unwrap(), Coord::from_ratio(1, 2));
        assert_eq!("17".parse::<Coord>().unwrap(), Coord::from_int(17));
        assert_eq!(".5".parse::<Coord>().unwrap(), Coord::from_ratio(1, 2));
        assert!("1/0".parse::<Coord>().is_err());
        assert!("abc".parse::<Coord>().is_err());
        assert!("1.2.3".parse::<Coord>().is_err());
    }

    #[test]
    fn display_round_trips() {
        for c in [Coord::from_ratio(-7, 3), Coord::from_int(42), Coord::zero()] {
            assert_eq!(c.to_string().parse::<Coord>().unwrap(), c);
        }
    }
}
