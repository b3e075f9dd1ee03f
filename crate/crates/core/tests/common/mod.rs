//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use dndet::specfun::CompensatedSum;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// B_{2k} / (2k)!, k = 1..6.
const BERNOULLI_OVER_FACTORIAL: [f64; 6] =
    [1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0, -1.0 / 1209600.0, 1.0 / 47900160.0, -691.0 / 1307674368000.0];

/// `sum_{n >= 1} u_n^{-s}` for `u_n = n (1 + e^{-n})`, continued by summing
/// the first terms directly and closing the pure power tail by Euler-Maclaurin.
pub fn exp_corrected_zeta(s: f64) -> f64 {
    const N: usize = 40;
    let mut acc = CompensatedSum::new();
    for n in 1..N {
        let x = n as f64;
        acc.add((x * (1.0 + (-x).exp())).powf(-s));
    }
    // e^{-N} is below 1e-17, so the tail is the Hurwitz tail of n^{-s}
    let x = N as f64;
    acc.add(x.powf(1.0 - s) / (s - 1.0));
    acc.add(0.5 * x.powf(-s));
    let mut falling = -s;
    let mut pow = x.powf(-s - 1.0);
    for (k, b) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        acc.add(-b * falling * pow);
        let m = 2.0 * k as f64 + 1.0;
        falling *= (-s - m) * (-s - m - 1.0);
        pow /= x * x;
    }
    acc.value()
}

pub fn oracle_log_det() -> f64 {
    let h = 5e-4;
    let f = exp_corrected_zeta;
    let d = (f(-2.0 * h) - 8.0 * f(-h) + 8.0 * f(h) - f(2.0 * h)) / (12.0 * h);
    -d
}

/// -zeta'(2) = sum ln n / n^2, summed to N - 1 and closed by Euler-Maclaurin.
pub fn zeta_prime_two_oracle() -> f64 {
    let big_n = 1000usize;
    let mut s = CompensatedSum::new();
    for n in 2..big_n {
        let x = n as f64;
        s.add(x.ln() / (x * x));
    }
    let x = big_n as f64;
    let l = x.ln();
    s.add((l + 1.0) / x);
    s.add(0.5 * l / (x * x));
    s.add(-(1.0 - 2.0 * l) / x.powi(3) / 12.0);
    s.add((26.0 - 24.0 * l) / x.powi(5) / 720.0);
    -s.value()
}

/// zeta'(-1) from zeta'(2) through the differentiated functional equation.
pub fn zeta_prime_minus_one_oracle() -> f64 {
    1.0 / 12.0 - (EULER_GAMMA + (2.0 * PI).ln()) / 12.0 + zeta_prime_two_oracle() / (2.0 * PI * PI)
}

/// Modified Bessel function `I_n(x)` from its power series.
pub fn bessel_i(n: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = half.powi(n as i32) / (1..=n).map(f64::from).product::<f64>();
    let mut sum = term;
    for k in 1..60 {
        term *= half * half / (k as f64 * (k + n) as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}
