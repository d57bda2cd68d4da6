use core::ops::{Add, Mul, Neg, Sub};

use crate::rat::Rat;

/// A closed interval of doubles with outward rounding on every operation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    /// Smallest double interval containing the rational.
    pub fn from_rat(r: &Rat) -> Self {
        let x = r.to_f64();
        // to_f64 is within a couple of ulps; widen by two on each side.
        Interval {
            lo: x.next_down().next_down(),
            hi: x.next_up().next_up(),
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    /// Sign of every point in the interval, if it is uniform and nonzero.
    pub fn certain_sign(&self) -> Option<i32> {
        if self.lo > 0.0 {
            Some(1)
        } else if self.hi < 0.0 {
            Some(-1)
        } else {
            None
        }
    }

    pub fn powi(self, e: u32) -> Interval {
        let mut acc = Interval::point(1.0);
        for _ in 0..e {
            acc = acc * self;
        }
        acc
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, o: Interval) -> Interval {
        Interval {
            lo: (self.lo + o.lo).next_down(),
            hi: (self.hi + o.hi).next_up(),
        }
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, o: Interval) -> Interval {
        Interval {
            lo: (self.lo - o.hi).next_down(),
            hi: (self.hi - o.lo).next_up(),
        }
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, o: Interval) -> Interval {
        let c = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        let lo = c.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = c.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Interval {
            lo: lo.next_down(),
            hi: hi.next_up(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encloses_third() {
        let third = Interval::from_rat(&Rat::new(1, 3));
        let x = third * Interval::point(3.0);
        assert!(x.contains(1.0));
        assert!(x.width() < 1e-14);
    }

    #[test]
    fn sign_certification() {
        assert_eq!(Interval::new(1e-300, 1.0).certain_sign(), Some(1));
        assert_eq!(Interval::new(-1.0, 0.0).certain_sign(), None);
    }
}
