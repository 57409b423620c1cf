use serde::Serialize;

/// Closed interval [lo, hi].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "inverted interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    /// max |x| over the interval.
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    /// min |x| over the interval.
    pub fn mig(&self) -> f64 {
        if self.lo <= 0.0 && self.hi >= 0.0 {
            0.0
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn bisect(&self) -> (Interval, Interval) {
        let m = self.mid();
        (Interval::new(self.lo, m), Interval::new(m, self.hi))
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }
}

/// c + Σ a_k x_k.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Affine {
    pub constant: f64,
    pub coefficients: Vec<f64>,
}

impl Affine {
    pub fn constant(c: f64, n: usize) -> Self {
        Affine {
            constant: c,
            coefficients: vec![0.0; n],
        }
    }

    pub fn variable(k: usize, n: usize) -> Self {
        let mut a = Self::constant(0.0, n);
        a.coefficients[k] = 1.0;
        a
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.constant + self.coefficients.iter().zip(x).map(|(a, v)| a * v).sum::<f64>()
    }

    /// Exact range over a box; affine forms have no dependency problem.
    pub fn range(&self, boxed: &[Interval]) -> Interval {
        let mut lo = self.constant;
        let mut hi = self.constant;
        for (a, iv) in self.coefficients.iter().zip(boxed) {
            if *a >= 0.0 {
                lo += a * iv.lo;
                hi += a * iv.hi;
            } else {
                lo += a * iv.hi;
                hi += a * iv.lo;
            }
        }
        Interval { lo, hi }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Affine {
            constant: self.constant * s,
            coefficients: self.coefficients.iter().map(|a| a * s).collect(),
        }
    }

    pub fn plus(&self, other: &Affine) -> Self {
        Affine {
            constant: self.constant + other.constant,
            coefficients: self
                .coefficients
                .iter()
                .zip(&other.coefficients)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn shifted(&self, c: f64) -> Self {
        Affine {
            constant: self.constant + c,
            coefficients: self.coefficients.clone(),
        }
    }

    /// Variables with a nonzero coefficient.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coefficients.iter().enumerate().filter(|(_, a)| **a != 0.0).map(|(k, _)| k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn affine_range_is_tight_at_corners() {
        let a = Affine {
            constant: 1.0,
            coefficients: vec![2.0, -3.0],
        };
        let b = [Interval::new(0.0, 1.0), Interval::new(-1.0, 2.0)];
        let r = a.range(&b);
        assert_eq!(r, Interval::new(1.0 - 6.0, 1.0 + 2.0 + 3.0));
        assert_eq!(a.eval(&[1.0, -1.0]), r.hi);
    }

    #[test]
    fn magnitude_bounds() {
        let i = Interval::new(-2.0, 1.0);
        assert_eq!(i.mag(), 2.0);
        assert_eq!(i.mig(), 0.0);
        assert_eq!(Interval::new(-3.0, -1.0).mig(), 1.0);
    }
}
