//! Binomial probabilities without cancellation (Loader's saddle-point form).

use num_traits::{Float, FloatConst, FromPrimitive};

fn c<T: FromPrimitive>(x: f64) -> T {
    T::from_f64(x).expect("representable constant")
}

/// `ln n! - ((n + 1/2) ln n - n + ln sqrt(2 pi))`.
pub fn stirlerr<T: Float + FloatConst + FromPrimitive>(n: u64) -> T {
    let s0: T = c(1.0 / 12.0);
    let s1: T = c(1.0 / 360.0);
    let s2: T = c(1.0 / 1260.0);
    let s3: T = c(1.0 / 1680.0);
    let s4: T = c(1.0 / 1188.0);
    if n <= 15 {
        if n == 0 {
            return T::zero();
        }
        // Direct sum in f64; the cancellation costs a few digits at most.
        let nf = n as f64;
        let ln_fact: f64 = (2..=n).map(|k| (k as f64).ln()).sum();
        let half_ln_2pi = 0.5 * (2.0 * std::f64::consts::PI).ln();
        return c(ln_fact - (nf + 0.5) * nf.ln() + nf - half_ln_2pi);
    }
    let nf: T = c(n as f64);
    let nn = nf * nf;
    let series = if n > 500 {
        s0 - s1 / nn
    } else if n > 80 {
        s0 - (s1 - s2 / nn) / nn
    } else if n > 35 {
        s0 - (s1 - (s2 - s3 / nn) / nn) / nn
    } else {
        s0 - (s1 - (s2 - (s3 - s4 / nn) / nn) / nn) / nn
    };
    series / nf
}

/// `x ln(x / m) + m - x`, accurate when `x` is close to `m`.
pub fn bd0<T: Float + FromPrimitive>(x: T, m: T) -> T {
    let tenth: T = c(0.1);
    if (x - m).abs() < tenth * (x + m) {
        let mut v = (x - m) / (x + m);
        let mut s = (x - m) * v;
        let mut ej = (x + x) * v;
        v = v * v;
        let mut j = 1u32;
        loop {
            ej = ej * v;
            let s1 = s + ej / c(f64::from(2 * j + 1));
            if s1 == s {
                return s1;
            }
            s = s1;
            j += 1;
            if j > 1000 {
                return s;
            }
        }
    }
    x * (x / m).ln() + m - x
}

/// `C(n, x) 2^-n`.
pub fn dbinom_half<T: Float + FloatConst + FromPrimitive>(x: u64, n: u64) -> T {
    if x > n {
        return T::zero();
    }
    let half: T = c(0.5);
    if x == 0 || x == n {
        return half.powf(c(n as f64));
    }
    let (xf, nf): (T, T) = (c(x as f64), c(n as f64));
    let m = nf * half;
    let lc = stirlerr::<T>(n) - stirlerr::<T>(x) - stirlerr::<T>(n - x) - bd0(xf, m) - bd0(nf - xf, m);
    let lf = (T::PI() + T::PI()).ln() + xf.ln() + (-xf / nf).ln_1p();
    (lc - half * lf).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact(x: u64, n: u64) -> f64 {
        let mut v = 1.0f64;
        for k in 0..x {
            v = v * (n - k) as f64 / (k + 1) as f64;
        }
        v * 0.5f64.powi(n as i32)
    }

    #[test]
    fn small_cases_match_direct_products() {
        for n in 0..60u64 {
            for x in 0..=n {
                let (a, b) = (dbinom_half::<f64>(x, n), exact(x, n));
                assert!((a - b).abs() <= 1e-13 * b, "n={n} x={x}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn stirlerr_is_continuous_at_the_table_edge() {
        let a: f64 = stirlerr(15);
        let b: f64 = stirlerr(16);
        assert!(a > b && b > 0.0 && a - b < 4e-4);
    }
}
