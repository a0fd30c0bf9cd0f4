//! Log-factorial and log-binomial helpers shared by the metrics and
//! description-length code.
//!
//! Arguments are always integers here, so instead of a general lgamma we
//! keep an exact cumulative table for small `n` (Kahan-summed) and switch
//! to the Stirling series above it. Absolute error stays near machine
//! precision for table entries and below `1e-12` for the series range.

use std::sync::OnceLock;

const TABLE_SIZE: usize = 4096;

fn table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = vec![0.0f64; TABLE_SIZE];
        let mut sum = 0.0f64;
        let mut carry = 0.0f64;
        for n in 1..TABLE_SIZE {
            let y = (n as f64).ln() - carry;
            let s = sum + y;
            carry = (s - sum) - y;
            sum = s;
            t[n] = sum;
        }
        t
    })
}

/// Natural log of `n!`.
pub fn ln_factorial(n: u64) -> f64 {
    if (n as usize) < TABLE_SIZE {
        return table()[n as usize];
    }
    let x = n as f64;
    let x2 = x * x;
    (x + 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + 1.0 / (12.0 * x)
        - 1.0 / (360.0 * x * x2)
        + 1.0 / (1260.0 * x2 * x2 * x)
}

/// Natural log of the binomial coefficient `C(n, k)`.
///
/// Requires `k <= n`.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    assert!(k <= n, "ln_binomial: k = {k} exceeds n = {n}");
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// Natural log of the multiset coefficient `((n, m)) = C(n + m - 1, m)`:
/// the number of ways to put `m` indistinct items into `n` bins.
///
/// Requires `n >= 1`.
pub fn ln_multiset(n: u64, m: u64) -> f64 {
    assert!(n >= 1, "ln_multiset: empty bin count");
    ln_binomial(n + m - 1, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact_ln_factorial(n: u64) -> f64 {
        // u128 holds factorials up to 34!.
        let mut f: u128 = 1;
        for k in 2..=n as u128 {
            f *= k;
        }
        (f as f64).ln()
    }

    #[test]
    fn matches_exact_small_factorials() {
        for n in 0..=34u64 {
            let got = ln_factorial(n);
            let want = exact_ln_factorial(n);
            assert!(
                (got - want).abs() <= 1e-12 * want.max(1.0),
                "n={n}: got {got}, want {want}"
            );
        }
    }

    #[test]
    fn series_continuous_at_table_boundary() {
        // Recompute a few values around the cutoff by direct summation.
        for n in (TABLE_SIZE as u64 - 2)..(TABLE_SIZE as u64 + 3) {
            let direct: f64 = (2..=n).map(|k| (k as f64).ln()).sum();
            let got = ln_factorial(n);
            assert!(
                (got - direct).abs() <= 1e-9,
                "n={n}: got {got}, direct {direct}"
            );
        }
    }

    #[test]
    fn binomial_identities() {
        assert_eq!(ln_binomial(10, 0), 0.0);
        assert_eq!(ln_binomial(10, 10), 0.0);
        assert!((ln_binomial(5, 2) - (10.0f64).ln()).abs() < 1e-12);
        // Pascal: C(12,5) = C(11,4) + C(11,5)
        let lhs = ln_binomial(12, 5).exp();
        let rhs = ln_binomial(11, 4).exp() + ln_binomial(11, 5).exp();
        assert!((lhs - rhs).abs() < 1e-9 * rhs);
    }

    #[test]
    fn multiset_identities() {
        // ((n, 0)) = 1, ((1, m)) = 1, ((3, 2)) = 6
        assert_eq!(ln_multiset(7, 0), 0.0);
        assert_eq!(ln_multiset(1, 42), 0.0);
        assert!((ln_multiset(3, 2) - (6.0f64).ln()).abs() < 1e-12);
    }
}
