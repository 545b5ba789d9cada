//! Generalized Laguerre polynomials.

/// L_n^{(ν)}(x) from the three-term recurrence
///
///   (k+1) L_{k+1} = (2k+1+ν-x) L_k - (k+ν) L_{k-1}.
pub fn laguerre(n: usize, nu: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + nu - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + nu - x) * cur - (kf + nu) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}
