//! Associated Laguerre polynomials by forward three-term recurrence.

/// Magnitude at which running recurrences are rescaled.
const RESCALE_AT: f64 = 1e150;
const RESCALE_BY: f64 = 1e-150;
const RESCALE_LOG: f64 = 345.387_763_949_106_8; // ln(1e150)

/// `L_n^k(x)` via `m L_m = (2m − 1 + k − x) L_{m−1} − (m − 1 + k) L_{m−2}`.
pub fn laguerre_assoc(n: usize, k: usize, x: f64) -> f64 {
    let k = k as f64;
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + k - x;
    for m in 2..=n {
        let m = m as f64;
        let next = ((2.0 * m - 1.0 + k - x) * cur - (m - 1.0 + k) * prev) / m;
        prev = cur;
        cur = next;
    }
    cur
}

/// `L_n^k(x) · e^{log_weight}` for `n = 0..=n_max`.
///
/// The recurrence runs on rescaled values with the scale carried in log form,
/// so large `x` with a strongly negative weight neither overflows nor turns
/// into `∞ · 0`.
pub fn scaled_laguerre_series(n_max: usize, k: usize, x: f64, log_weight: f64) -> Vec<f64> {
    let kf = k as f64;
    let mut out = Vec::with_capacity(n_max + 1);
    let mut log_scale = log_weight;
    let mut prev = 0.0;
    let mut cur = 1.0;
    out.push(cur * log_scale.exp());
    for m in 1..=n_max {
        let mf = m as f64;
        let next = ((2.0 * mf - 1.0 + kf - x) * cur - (mf - 1.0 + kf) * prev) / mf;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_AT {
            prev *= RESCALE_BY;
            cur *= RESCALE_BY;
            log_scale += RESCALE_LOG;
        }
        out.push(cur * log_scale.exp());
    }
    out
}

/// Normalized Laguerre functions
/// `ψ_n^d(x) = √(n!/(n+d)!) · x^{d/2} · e^{−x/2} · L_n^d(x)` for `n = 0..=n_max`.
///
/// These are the magnitudes of displacement-operator matrix elements and are
/// bounded by one. They obey
/// `√(n(n+d)) ψ_n = (2n − 1 + d − x) ψ_{n−1} − √((n−1)(n−1+d)) ψ_{n−2}`.
pub fn laguerre_function_series(n_max: usize, d: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    if x == 0.0 {
        let value = if d == 0 { 1.0 } else { 0.0 };
        out.resize(n_max + 1, value);
        return out;
    }
    let df = d as f64;
    let log_d_factorial: f64 = (1..=d).map(|i| (i as f64).ln()).sum();
    let mut log_scale = 0.5 * df * x.ln() - 0.5 * x - 0.5 * log_d_factorial;
    let mut prev = 0.0;
    let mut cur = 1.0;
    out.push(cur * log_scale.exp());
    for n in 1..=n_max {
        let nf = n as f64;
        let next = ((2.0 * nf - 1.0 + df - x) * cur - ((nf - 1.0) * (nf - 1.0 + df)).sqrt() * prev)
            / (nf * (nf + df)).sqrt();
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_AT {
            prev *= RESCALE_BY;
            cur *= RESCALE_BY;
            log_scale += RESCALE_LOG;
        }
        out.push(cur * log_scale.exp());
    }
    out
}
