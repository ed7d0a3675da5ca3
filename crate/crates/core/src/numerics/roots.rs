//! Sign-change root finding.

/// Bisection on an interval where `f` changes sign, assuming `f(lo) < 0 < f(hi)`
/// or the reverse. Endpoints are never evaluated, so they may sit on poles of
/// `f` as long as the sign on each side is known: `lo_negative` gives the sign
/// of `f` just inside `lo`.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, lo_negative: bool, abs_tol: f64) -> f64 {
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || (hi - lo) <= abs_tol {
            return mid;
        }
        let v = f(mid);
        if v == 0.0 {
            return mid;
        }
        if (v < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
