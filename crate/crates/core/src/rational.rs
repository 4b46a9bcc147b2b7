use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;

use crate::bigreal::BigReal;
use crate::error::{domain, Error, Result};

/// A positive rational number in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PosRational {
    num: u64,
    den: u64,
}

impl PosRational {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(domain!("{num}/{den} is not a positive rational"));
        }
        let g = num.gcd(&den);
        Ok(PosRational {
            num: num / g,
            den: den / g,
        })
    }

    pub fn integer(n: u64) -> Result<Self> {
        Self::new(n, 1)
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    pub fn mul_int(&self, k: u64) -> Result<Self> {
        let num = self
            .num
            .checked_mul(k)
            .ok_or_else(|| domain!("rational overflow"))?;
        Self::new(num, self.den)
    }

    pub fn div_int(&self, k: u64) -> Result<Self> {
        let den = self
            .den
            .checked_mul(k)
            .ok_or_else(|| domain!("rational overflow"))?;
        Self::new(self.num, den)
    }

    pub fn to_bigreal(&self, prec: u32) -> BigReal {
        BigReal::from_ratio(&BigInt::from(self.num), &BigInt::from(self.den), prec)
            .expect("denominator is nonzero")
    }

    /// `sqrt(self)` at `prec` bits.
    pub fn sqrt(&self, prec: u32) -> BigReal {
        self.to_bigreal(prec + 4)
            .sqrt()
            .expect("positive radicand")
            .with_prec(prec)
    }
}

impl fmt::Display for PosRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for PosRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(alloc::format!("expected a positive rational, got {s:?}"));
        let (n, d) = match s.trim().split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let n: u64 = n.parse().map_err(|_| bad())?;
        let d: u64 = d.parse().map_err(|_| bad())?;
        Self::new(n, d).map_err(|_| bad())
    }
}
