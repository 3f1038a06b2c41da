use crate::scalar::{lit, Real};

/// Gauss–Legendre nodes (ascending) and weights on [−1, 1].
pub fn gauss_legendre<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    assert!(n > 0, "need at least one node");
    let nf = T::from_usize_exact(n);
    let mut nodes = vec![T::zero(); n];
    let mut weights = vec![T::zero(); n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (T::PI() * (T::from_usize_exact(i) + lit(0.75)) / (nf + lit(0.5))).cos();
        let mut dp = T::one();
        for _ in 0..100 {
            let (p, pm1) = legendre_pair(n, x);
            dp = nf * (x * p - pm1) / (x * x - T::one());
            let dx = p / dp;
            x = x - dx;
            if dx.abs() <= T::epsilon() * lit(4.0) {
                break;
            }
        }
        let (p, pm1) = legendre_pair(n, x);
        dp = if p.is_finite() { nf * (x * p - pm1) / (x * x - T::one()) } else { dp };
        let w = lit::<T>(2.0) / ((T::one() - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = w;
        nodes[i] = -x;
        weights[i] = w;
    }
    (nodes, weights)
}

/// (P_n(x), P_{n−1}(x)).
fn legendre_pair<T: Real>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    if n == 0 {
        return (p0, T::zero());
    }
    for k in 1..n {
        let kf = T::from_usize_exact(k);
        let p2 = ((kf + kf + T::one()) * x * p1 - kf * p0) / (kf + T::one());
        p0 = p1;
        p1 = p2;
    }
    (p1, p0)
}

/// Legendre polynomials P_0(x), …, P_N(x).
pub fn legendre_all<T: Real>(n_max: usize, x: T) -> Vec<T> {
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(T::one());
    if n_max >= 1 {
        out.push(x);
    }
    for k in 1..n_max {
        let kf = T::from_usize_exact(k);
        let next = ((kf + kf + T::one()) * x * out[k] - kf * out[k - 1]) / (kf + T::one());
        out.push(next);
    }
    out
}
