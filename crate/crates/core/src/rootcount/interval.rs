//! Outward-rounded interval arithmetic on `f64`.
//!
//! Hardware ops round to nearest, so every arithmetic result is widened by
//! one ulp per side; `exp` goes through libm and gets a two-ulp cushion
//! (faithful rounding leaves it within one). Endpoints may be infinite:
//! boxes reaching to infinity are legal inputs for exclusion tests.

/// Closed interval `[lo, hi]`; invariant `lo <= hi` (never NaN).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

#[inline]
fn down(x: f64) -> f64 {
    if x == f64::NEG_INFINITY {
        x
    } else if x == f64::INFINITY {
        f64::MAX
    } else {
        x.next_down()
    }
}

#[inline]
fn up(x: f64) -> f64 {
    if x == f64::INFINITY {
        x
    } else if x == f64::NEG_INFINITY {
        f64::MIN
    } else {
        x.next_up()
    }
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "bad interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    pub fn entire() -> Self {
        Interval {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
        }
    }

    #[inline]
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    #[inline]
    pub fn contains_zero(&self) -> bool {
        self.lo <= 0.0 && 0.0 <= self.hi
    }

    /// Strict containment in the interior of `other`.
    #[inline]
    pub fn inside_interior(&self, other: &Interval) -> bool {
        other.lo < self.lo && self.hi < other.hi
    }

    #[inline]
    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        if lo <= hi {
            Some(Interval { lo, hi })
        } else {
            None
        }
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    #[inline]
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        if self.lo == f64::NEG_INFINITY && self.hi == f64::INFINITY {
            return 0.0;
        }
        if self.lo == f64::NEG_INFINITY {
            return self.hi - 1.0;
        }
        if self.hi == f64::INFINITY {
            return self.lo + 1.0;
        }
        let m = 0.5 * (self.lo + self.hi);
        if m.is_finite() {
            m
        } else {
            0.5 * self.lo + 0.5 * self.hi
        }
    }

    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval {
            lo: down(self.lo + other.lo),
            hi: up(self.hi + other.hi),
        }
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        Interval {
            lo: down(self.lo - other.hi),
            hi: up(self.hi - other.lo),
        }
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        // 0 * inf products are treated as 0: the exact bound for an
        // endpoint product where one factor is exactly zero.
        #[inline]
        fn prod(a: f64, b: f64) -> f64 {
            if a == 0.0 || b == 0.0 {
                0.0
            } else {
                a * b
            }
        }
        let p1 = prod(self.lo, other.lo);
        let p2 = prod(self.lo, other.hi);
        let p3 = prod(self.hi, other.lo);
        let p4 = prod(self.hi, other.hi);
        Interval {
            lo: down(p1.min(p2).min(p3).min(p4)),
            hi: up(p1.max(p2).max(p3).max(p4)),
        }
    }

    /// Multiplication by an exact scalar.
    pub fn scale(&self, c: f64) -> Interval {
        if c == 0.0 {
            return Interval::point(0.0);
        }
        let (a, b) = if c > 0.0 {
            (self.lo * c, self.hi * c)
        } else {
            (self.hi * c, self.lo * c)
        };
        Interval {
            lo: down(a),
            hi: up(b),
        }
    }

    /// Rigorous enclosure of `exp` over the interval.
    pub fn exp(&self) -> Interval {
        let lo = if self.lo == f64::NEG_INFINITY {
            0.0
        } else {
            (self.lo.exp().next_down().next_down()).max(0.0)
        };
        let hi = if self.hi == f64::INFINITY {
            f64::INFINITY
        } else {
            self.hi.exp().next_up().next_up()
        };
        Interval { lo, hi }
    }

    /// Widens both endpoints by an absolute-plus-relative margin.
    pub fn inflate(&self, abs: f64, rel: f64) -> Interval {
        let pad_lo = abs + rel * self.lo.abs();
        let pad_hi = abs + rel * self.hi.abs();
        Interval {
            lo: down(self.lo - pad_lo),
            hi: up(self.hi + pad_hi),
        }
    }
}

/// Enclosure of a dot product between an exact vector and an interval box.
pub fn dot_interval(coeffs: &[f64], xs: &[Interval]) -> Interval {
    let mut acc = Interval::point(0.0);
    for (c, x) in coeffs.iter().zip(xs) {
        acc = acc.add(&x.scale(*c));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_encloses_true_results() {
        let a = Interval::new(1.0, 2.0);
        let b = Interval::new(-3.0, 0.5);
        let s = a.add(&b);
        assert!(s.lo <= -2.0 && s.hi >= 2.5);
        let p = a.mul(&b);
        assert!(p.lo <= -6.0 && p.hi >= 1.0);
        let d = a.sub(&b);
        assert!(d.lo <= 0.5 && d.hi >= 5.0);
    }

    #[test]
    fn exp_is_outward_rounded() {
        let x = Interval::point(1.0);
        let e = x.exp();
        assert!(e.lo < std::f64::consts::E && std::f64::consts::E < e.hi);
        assert!(e.hi - e.lo < 1e-14);

        let tail = Interval::new(f64::NEG_INFINITY, 0.0);
        let e = tail.exp();
        assert_eq!(e.lo, 0.0);
        assert!(e.hi >= 1.0);
    }

    #[test]
    fn infinite_endpoints_survive_products() {
        let ray = Interval::new(0.0, f64::INFINITY);
        let c = ray.scale(2.0);
        assert_eq!(c.hi, f64::INFINITY);
        assert!(c.lo <= 0.0);
        let z = ray.mul(&Interval::point(0.0));
        assert_eq!(z, Interval::point(0.0));
    }

    #[test]
    fn dot_products_and_membership() {
        let xs = [Interval::new(-1.0, 1.0), Interval::new(2.0, 3.0)];
        let d = dot_interval(&[2.0, -1.0], &xs);
        assert!(d.lo <= -5.0 && d.hi >= 0.0);
        assert!(d.contains_zero());
        assert!(Interval::new(0.1, 0.2).inside_interior(&Interval::new(0.0, 1.0)));
        assert!(!Interval::new(0.0, 0.2).inside_interior(&Interval::new(0.0, 1.0)));
    }
}
