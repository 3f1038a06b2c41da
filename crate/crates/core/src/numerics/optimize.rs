use crate::scalar::{lit, Real};

/// Maximizes `f` on `[lo, hi]` by Brent's method (golden section with
/// parabolic steps). Returns the abscissa and value of the best point seen.
/// Stops once the bracket is below `x_tol` (absolute).
pub fn maximize_bracketed<T: Real>(mut f: impl FnMut(T) -> T, lo: T, hi: T, x_tol: T) -> (T, T) {
    let golden = lit::<T>(0.381_966_011_250_105_1);
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut x = a + golden * (b - a);
    let mut fx = -f(x);
    let (mut w, mut v) = (x, x);
    let (mut fw, mut fv) = (fx, fx);
    let mut d = T::zero();
    let mut e = T::zero();
    let half = lit::<T>(0.5);
    let two = lit::<T>(2.0);
    let eps = T::epsilon().sqrt();

    for _ in 0..200 {
        let m = half * (a + b);
        let tol1 = eps * x.abs() + x_tol / lit(3.0);
        let tol2 = two * tol1;
        if (x - m).abs() <= tol2 - half * (b - a) {
            break;
        }
        let mut golden_step = true;
        if e.abs() > tol1 {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = two * (q - r);
            if q > T::zero() {
                p = -p;
            }
            q = q.abs();
            let e_prev = e;
            e = d;
            if p.abs() < (half * q * e_prev).abs() && p > q * (a - x) && p < q * (b - x) {
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = if m >= x { tol1 } else { -tol1 };
                }
                golden_step = false;
            }
        }
        if golden_step {
            e = if x >= m { a - x } else { b - x };
            d = golden * e;
        }
        let u = if d.abs() >= tol1 { x + d } else if d > T::zero() { x + tol1 } else { x - tol1 };
        let fu = -f(u);
        if fu <= fx {
            if u >= x {
                a = x;
            } else {
                b = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    (x, -fx)
}
