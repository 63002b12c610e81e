//! Exact integer combinatorics behind the closed-form operator entries.

/// Binomial coefficient `C(n, k)`, exact for `n <= 62`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// Double factorial with the conventions `(-1)!! = 0!! = 1`.
fn double_factorial_exact(n: i64) -> Option<u128> {
    let mut acc: u128 = 1;
    let mut k = n;
    while k > 1 {
        acc = acc.checked_mul(k as u128)?;
        k -= 2;
    }
    Some(acc)
}

fn ln_double_factorial(n: i64) -> f64 {
    let mut acc = 0.0;
    let mut k = n;
    while k > 1 {
        acc += (k as f64).ln();
        k -= 2;
    }
    acc
}

/// `a!! * b!! / c!!` as `f64`.
///
/// Uses exact 128-bit integers when they fit and falls back to log space otherwise.
pub fn double_factorial_ratio(a: i64, b: i64, c: i64) -> f64 {
    let exact = double_factorial_exact(a)
        .zip(double_factorial_exact(b))
        .and_then(|(x, y)| x.checked_mul(y))
        .zip(double_factorial_exact(c));
    match exact {
        Some((num, den)) => {
            // Reduce before converting so that both halves stay exact in f64 when possible.
            let g = gcd(num, den);
            (num / g) as f64 / (den / g) as f64
        }
        None => (ln_double_factorial(a) + ln_double_factorial(b) - ln_double_factorial(c)).exp(),
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}
