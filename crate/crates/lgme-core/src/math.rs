//! Small numeric helpers: log-gamma based combinatorics.
//!
//! All factorial ratios and binomials are accumulated in log space and
//! exponentiated once per amplitude; plain factorials overflow f64 well
//! before the occupation numbers reached by moderate squeezing plus
//! photon addition.

/// ln Γ(x) for x > 0.
#[inline]
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// ln n! for n ≥ 0.
#[inline]
pub fn ln_factorial(n: u32) -> f64 {
    ln_gamma(n as f64 + 1.0)
}

/// ln C(n, k); requires k ≤ n.
#[inline]
pub fn ln_binomial(n: u32, k: u32) -> f64 {
    debug_assert!(k <= n);
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// ln of the rising factorial ratio (n + m)! / n!.
#[inline]
pub fn ln_rising_ratio(n: u32, m: u32) -> f64 {
    ln_factorial(n + m) - ln_factorial(n)
}

/// ln of the falling factorial ratio n! / (n − m)!; requires m ≤ n.
#[inline]
pub fn ln_falling_ratio(n: u32, m: u32) -> f64 {
    debug_assert!(m <= n);
    ln_factorial(n) - ln_factorial(n - m)
}
