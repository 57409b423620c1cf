//! Bessel functions of the first kind and small combinatorial helpers.

/// J_n(x) for integer order by normalized backward recurrence.
pub fn bessel_j(n: i32, x: f64) -> f64 {
    let sign_n = if n < 0 && n % 2 != 0 { -1.0 } else { 1.0 };
    let m = n.unsigned_abs() as usize;
    let sign_x = if x < 0.0 && m % 2 == 1 { -1.0 } else { 1.0 };
    sign_n * sign_x * bessel_j_pos(m, x.abs())
}

fn bessel_j_pos(n: usize, x: f64) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let big = n.max(x.ceil() as usize);
    let mut start = big + 30 + (10.0 * (big as f64).sqrt()).ceil() as usize;
    if start % 2 == 1 {
        start += 1;
    }
    let mut next = 0.0; // J_{k+1}
    let mut cur = 1e-300; // J_k
    let mut result = if n == start { cur } else { 0.0 };
    let mut norm = 0.0;
    for k in (1..=start).rev() {
        let prev = 2.0 * k as f64 / x * cur - next;
        next = cur;
        cur = prev;
        if k - 1 == n {
            result = cur;
        }
        if (k - 1) % 2 == 0 && k - 1 > 0 {
            norm += 2.0 * cur;
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            next *= 1e-250;
            result *= 1e-250;
            norm *= 1e-250;
        }
    }
    norm += cur;
    result / norm
}

pub fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::TAU;

    /// Trapezoidal rule on the periodic integral representation; spectrally exact.
    fn quadrature(n: i32, x: f64) -> f64 {
        let m = 2048;
        let mut s = 0.0;
        for k in 0..m {
            let t = TAU * k as f64 / m as f64;
            s += (n as f64 * t - x * t.sin()).cos();
        }
        s / m as f64
    }

    #[test]
    fn known_values() {
        assert!((bessel_j(1, 1.84) - 0.581_864_936_842_083_3).abs() < 1e-14);
        assert!((bessel_j(1, 1.84) - 0.5815).abs() < 1e-3);
        assert!((bessel_j(0, 2.404_825_557_695_773)).abs() < 1e-14);
        assert!((bessel_j(0, 1.0) - 0.765_197_686_557_966_6).abs() < 1e-15);
        assert_eq!(bessel_j(3, 0.0), 0.0);
        assert_eq!(bessel_j(0, 0.0), 1.0);
    }

    #[test]
    fn against_quadrature_grid() {
        for n in -40..=40 {
            for k in 0..=80 {
                let x = -20.0 + 0.5 * k as f64;
                let a = bessel_j(n, x);
                let b = quadrature(n, x);
                assert!(
                    (a - b).abs() <= 1e-12 * b.abs().max(1e-3),
                    "n={n} x={x} {a} {b}"
                );
            }
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6.0);
        assert_eq!(binomial(5, 0), 1.0);
        assert_eq!(binomial(3, 4), 0.0);
        assert_eq!(factorial(5), 120.0);
    }

    proptest! {
        #[test]
        fn order_symmetry(n in 0i32..40, x in -20.0f64..20.0) {
            let a = bessel_j(-n, x);
            let b = if n % 2 == 0 { bessel_j(n, x) } else { -bessel_j(n, x) };
            prop_assert!((a - b).abs() < 1e-15);
        }

        #[test]
        fn recurrence_identity(n in 1i32..39, x in 0.1f64..20.0) {
            let lhs = bessel_j(n - 1, x) + bessel_j(n + 1, x);
            let rhs = 2.0 * n as f64 / x * bessel_j(n, x);
            prop_assert!((lhs - rhs).abs() < 1e-12 * (1.0 + rhs.abs()));
        }
    }
}
