use std::cmp::Ordering;
use std::fmt;

use rug::float::Round;
use rug::ops::AssignRound;
use rug::{Float, Integer, Rational};

/// Default working precision in bits.
pub const DEFAULT_PREC: u32 = 128;

/// A closed interval of reals with outward-rounded endpoints.
#[derive(Clone, Debug, PartialEq)]
pub struct Interval {
    lo: Float,
    hi: Float,
}

fn down<T>(prec: u32, v: T) -> Float
where
    Float: AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(prec, v, Round::Down).0
}

fn up<T>(prec: u32, v: T) -> Float
where
    Float: AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(prec, v, Round::Up).0
}

impl Interval {
    pub fn new(lo: Float, hi: Float) -> Self {
        assert!(lo <= hi, "inverted interval");
        Interval { lo, hi }
    }

    pub fn from_rational(r: &Rational, prec: u32) -> Self {
        Interval {
            lo: down(prec, r),
            hi: up(prec, r),
        }
    }

    pub fn from_integer(i: &Integer, prec: u32) -> Self {
        Interval {
            lo: down(prec, i),
            hi: up(prec, i),
        }
    }

    pub fn from_int(i: i64, prec: u32) -> Self {
        Interval::from_integer(&Integer::from(i), prec)
    }

    /// The point interval of an `f64` (exactly representable at any precision >= 53).
    pub fn from_f64(x: f64, prec: u32) -> Self {
        Interval {
            lo: down(prec, x),
            hi: up(prec, x),
        }
    }

    pub fn prec(&self) -> u32 {
        self.lo.prec()
    }

    pub fn lo(&self) -> &Float {
        &self.lo
    }

    pub fn hi(&self) -> &Float {
        &self.hi
    }

    pub fn mid(&self) -> Float {
        let s = Float::with_val(self.prec(), &self.lo + &self.hi);
        s / 2u32
    }

    pub fn to_f64(&self) -> f64 {
        self.mid().to_f64()
    }

    pub fn width(&self) -> Float {
        up(self.prec(), &self.hi - &self.lo)
    }

    pub fn contains(&self, x: &Float) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_rational(&self, x: &Rational) -> bool {
        self.lo <= *x && self.hi >= *x
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().min(&other.lo),
            hi: self.hi.clone().max(&other.hi),
        }
    }

    pub fn add(&self, o: &Interval) -> Interval {
        let p = self.prec();
        Interval {
            lo: down(p, &self.lo + &o.lo),
            hi: up(p, &self.hi + &o.hi),
        }
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        let p = self.prec();
        Interval {
            lo: down(p, &self.lo - &o.hi),
            hi: up(p, &self.hi - &o.lo),
        }
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: Float::with_val(self.prec(), -&self.hi),
            hi: Float::with_val(self.prec(), -&self.lo),
        }
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let p = self.prec();
        let pairs = [(&self.lo, &o.lo), (&self.lo, &o.hi), (&self.hi, &o.lo), (&self.hi, &o.hi)];
        let lo = pairs
            .iter()
            .map(|(a, b)| down(p, *a * *b))
            .reduce(|x, y| x.min(&y))
            .unwrap();
        let hi = pairs
            .iter()
            .map(|(a, b)| up(p, *a * *b))
            .reduce(|x, y| x.max(&y))
            .unwrap();
        Interval { lo, hi }
    }

    /// Division by an interval not containing zero.
    pub fn div(&self, o: &Interval) -> Interval {
        assert!(o.lo > 0 || o.hi < 0, "division by an interval containing zero");
        let p = self.prec();
        let pairs = [(&self.lo, &o.lo), (&self.lo, &o.hi), (&self.hi, &o.lo), (&self.hi, &o.hi)];
        let lo = pairs
            .iter()
            .map(|(a, b)| down(p, *a / *b))
            .reduce(|x, y| x.min(&y))
            .unwrap();
        let hi = pairs
            .iter()
            .map(|(a, b)| up(p, *a / *b))
            .reduce(|x, y| x.max(&y))
            .unwrap();
        Interval { lo, hi }
    }

    pub fn mul_int(&self, k: i64) -> Interval {
        self.mul(&Interval::from_int(k, self.prec()))
    }

    /// Natural logarithm of a positive interval.
    pub fn ln(&self) -> Interval {
        assert!(self.lo > 0, "logarithm of a non-positive interval");
        let p = self.prec();
        Interval {
            lo: down(p, self.lo.ln_ref()),
            hi: up(p, self.hi.ln_ref()),
        }
    }

    pub fn exp(&self) -> Interval {
        let p = self.prec();
        Interval {
            lo: down(p, self.lo.exp_ref()),
            hi: up(p, self.hi.exp_ref()),
        }
    }

    /// `x ln x` for a non-negative rational, with `0 ln 0 = 0`.
    pub fn xlnx(x: &Rational, prec: u32) -> Interval {
        if *x == 0 {
            return Interval::from_int(0, prec);
        }
        let xi = Interval::from_rational(x, prec);
        xi.mul(&xi.ln())
    }

    /// `x ln x` for a non-negative integer.
    pub fn int_xlnx(x: u64, prec: u32) -> Interval {
        if x <= 1 {
            return Interval::from_int(0, prec);
        }
        let xi = Interval::from_integer(&Integer::from(x), prec);
        xi.mul(&xi.ln())
    }

    pub fn certainly_lt(&self, o: &Interval) -> bool {
        self.hi < o.lo
    }

    pub fn certainly_le(&self, o: &Interval) -> bool {
        self.hi <= o.lo
    }

    pub fn certainly_positive(&self) -> bool {
        self.lo > 0
    }

    pub fn certainly_nonnegative(&self) -> bool {
        self.lo >= 0
    }
}

impl fmt::Display for Interval {
    /// Midpoint with 20 significant digits and a precision tag.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mid = self.mid();
        write!(f, "{:.20}[p{}]", mid, self.prec())
    }
}
