//! Quadrature: adaptive Gauss–Legendre panels for smooth complex integrands
//! and tanh-sinh for real integrands with endpoint singularities.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use rug::float::Round;
use rug::ops::AddAssignRound;
use rug::Float;

use super::{ComplexBall, RealBall};

/// Gauss–Legendre nodes and weights on [-1, 1], cached per (n, prec).
pub(crate) fn gl_nodes_public(n: usize, prec: u32) -> Vec<(Float, Float)> {
    gl_nodes(n, prec)
}

fn gl_nodes(n: usize, prec: u32) -> Vec<(Float, Float)> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, u32), Vec<(Float, Float)>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&(n, prec)) {
        return v.clone();
    }
    let work = prec + 32;
    let pi = Float::with_val(work, rug::float::Constant::Pi);
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        // initial guess
        let mut x = Float::with_val(
            work,
            (&pi * Float::with_val(work, (k as f64 + 0.75) / (n as f64 + 0.5))).cos_ref(),
        );
        // Newton on P_n
        for _ in 0..200 {
            let (p, dp) = legendre(&x, n, work);
            let step = Float::with_val(work, &p / &dp);
            x -= &step;
            let sf = step.to_f64().abs();
            if sf == 0.0 || sf < 2f64.powi(-((prec + 16) as i32)) {
                break;
            }
        }
        let (_, dp) = legendre(&x, n, work);
        // w = 2 / ((1 - x^2) dp^2)
        let one_minus = Float::with_val(work, 1) - Float::with_val(work, &x * &x);
        let w = Float::with_val(work, 2) / (one_minus * Float::with_val(work, &dp * &dp));
        out.push((Float::with_val(prec + 8, x), Float::with_val(prec + 8, w)));
    }
    cache.lock().unwrap().insert((n, prec), out.clone());
    out
}

fn legendre(x: &Float, n: usize, prec: u32) -> (Float, Float) {
    let mut p0 = Float::with_val(prec, 1);
    let mut p1 = Float::with_val(prec, x);
    if n == 0 {
        return (p0, Float::with_val(prec, 0));
    }
    for k in 2..=n {
        let a = Float::with_val(prec, (2 * k - 1) as u32);
        let b = Float::with_val(prec, (k - 1) as u32);
        let pk = (a * x * &p1 - b * &p0) / Float::with_val(prec, k as u32);
        p0 = p1;
        p1 = pk;
    }
    // derivative: n (x p_n - p_{n-1}) / (x^2 - 1)
    let num = Float::with_val(prec, n as u32) * (Float::with_val(prec, x * &p1) - &p0);
    let den = Float::with_val(prec, x * x) - 1u32;
    (p1, num / den)
}

/// Integrate a complex-valued function over the real segment `[a, b]`
/// (mapped by the caller into whatever contour is wanted) with adaptive
/// Gauss–Legendre bisection. The returned ball's radius includes the
/// accumulated refinement differences.
pub fn gauss_legendre_integrate(
    f: &(dyn Fn(&RealBall) -> ComplexBall + Sync),
    a: &Float,
    b: &Float,
    prec: u32,
    tol_log2: i32,
    max_depth: u32,
) -> ComplexBall {
    fn panel(
        f: &(dyn Fn(&RealBall) -> ComplexBall + Sync),
        a: &Float,
        b: &Float,
        n: usize,
        prec: u32,
    ) -> ComplexBall {
        let work = prec;
        let half = Float::with_val(work, b - a) / 2u32;
        let midp = Float::with_val(work, a + b) / 2u32;
        let nodes = gl_nodes(n, prec);
        let mut acc = ComplexBall::zero(prec);
        for (x, w) in &nodes {
            let t = Float::with_val(work, &midp + Float::with_val(work, &half * x));
            let v = f(&RealBall::from_float(t));
            acc = acc.add(&v.mul_real(&RealBall::from_float(Float::with_val(prec, w))));
        }
        acc.mul_real(&RealBall::from_float(half))
    }

    fn recurse(
        f: &(dyn Fn(&RealBall) -> ComplexBall + Sync),
        a: &Float,
        b: &Float,
        prec: u32,
        tol_log2: i32,
        depth: u32,
    ) -> ComplexBall {
        let coarse = panel(f, a, b, 20, prec);
        let fine = panel(f, a, b, 40, prec);
        let diff = coarse.sub(&fine).abs().abs_upper();
        let tol = {
            let mut t = Float::with_val(32, 1);
            t <<= tol_log2;
            t
        };
        if diff <= tol || depth == 0 {
            let mut out = fine;
            out.re.rad.add_assign_round(&diff, Round::Up);
            out.im.rad.add_assign_round(&diff, Round::Up);
            return out;
        }
        let midp = Float::with_val(prec, a + b) / 2u32;
        let left = recurse(f, a, &midp, prec, tol_log2 - 1, depth - 1);
        let right = recurse(f, &midp, b, prec, tol_log2 - 1, depth - 1);
        left.add(&right)
    }

    recurse(f, a, b, prec, tol_log2, max_depth)
}

/// Tanh-sinh quadrature of a real integrand over (0, 1), tolerant of
/// integrable endpoint singularities. Returns midpoint and a heuristic
/// error from the last level doubling; used as an independent test oracle.
pub fn tanh_sinh_integrate(
    f: &dyn Fn(&Float, &Float) -> Float,
    prec: u32,
    levels: u32,
) -> (Float, f64) {
    let work = prec + 16;
    let pi_half = Float::with_val(work, rug::float::Constant::Pi) / 2u32;
    let mut h = Float::with_val(work, 1);
    let mut prev = Float::with_val(work, 0);
    let mut value;
    let mut err = f64::INFINITY;
    for level in 0..levels {
        h /= if level == 0 { 1u32 } else { 2u32 };
        let mut sum = Float::with_val(work, 0);
        let step = if level == 0 { 1 } else { 2 };
        let start = if level == 0 { 0 } else { 1 };
        let mut k = start;
        loop {
            let t = Float::with_val(work, &h * Float::with_val(work, k as f64));
            let s = Float::with_val(work, t.sinh_ref());
            let u = Float::with_val(work, &pi_half * &s);
            if u.to_f64().abs() > 1.5 * work as f64 {
                break;
            }
            // node pair: x = 1/(1 + e^{-2u}), 1 - x = 1/(1 + e^{2u}),
            // computed stably on both ends
            let e2u = Float::with_val(work, Float::with_val(work, 2 * &u).exp_ref());
            let e2um = Float::with_val(work, 1) / &e2u;
            let x_pos = Float::with_val(work, 1) / Float::with_val(work, 1 + &e2um);
            let x_pos_c = Float::with_val(work, 1) / Float::with_val(work, 1 + &e2u);
            // weight: (pi/2) cosh(t) sech^2(u)
            let sech2 = {
                let c = Float::with_val(work, u.cosh_ref());
                Float::with_val(work, 1) / Float::with_val(work, &c * &c)
            };
            let w = Float::with_val(work, &pi_half * Float::with_val(work, t.cosh_ref())) * sech2;
            for sign in [1i32, -1] {
                if k == 0 && sign == -1 {
                    continue;
                }
                let (x, xc) = if sign == 1 {
                    (&x_pos, &x_pos_c)
                } else {
                    (&x_pos_c, &x_pos)
                };
                if x.is_zero() || xc.is_zero() {
                    continue;
                }
                let fx = f(x, xc);
                if fx.is_finite() {
                    sum += Float::with_val(work, &fx * &w) / 2u32;
                }
            }
            if w.to_f64() < 2f64.powi(-4 * prec as i32) && k > 4 {
                break;
            }
            k += step;
        }
        value = if level == 0 {
            Float::with_val(work, &sum * &h)
        } else {
            Float::with_val(work, &prev / 2u32) + Float::with_val(work, &sum * &h)
        };
        if level > 1 {
            err = Float::with_val(work, &value - &prev).to_f64().abs();
            let scale = value.to_f64().abs().max(1.0);
            if err < scale * 2f64.powi(-(prec as i32)) {
                prev = value.clone();
                break;
            }
        }
        prev = value.clone();
    }
    (prev, err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl_integrates_polynomial_exactly() {
        let prec = 128;
        let f = |x: &RealBall| {
            let x2 = x.mul(x);
            ComplexBall::from_real(x2.mul(x).add(&x2))
        };
        let a = Float::with_val(prec, 0);
        let b = Float::with_val(prec, 1);
        let v = gauss_legendre_integrate(&f, &a, &b, prec, -(prec as i32) + 10, 8);
        // integral of x^3 + x^2 over [0,1] = 1/4 + 1/3 = 7/12
        let expect = RealBall::from_rat(&crate::exact::rat(7, 12), prec);
        assert!(v.re.overlaps(&expect));
        assert!(v.re.rad_f64() < 1e-30);
    }

    #[test]
    fn gl_oscillatory() {
        let prec = 128;
        // integral of cos over [0, 10] = sin(10)
        let f = |x: &RealBall| ComplexBall::from_real(x.cos());
        let a = Float::with_val(prec, 0);
        let b = Float::with_val(prec, 10);
        let v = gauss_legendre_integrate(&f, &a, &b, prec, -(prec as i32) + 10, 12);
        let expect = RealBall::from_int(10, prec).sin();
        assert!(v.re.overlaps(&expect));
    }

    #[test]
    fn tanh_sinh_beta_integral() {
        let prec = 128;
        // int_0^1 x^{-1/2} (1-x)^{-1/2} dx = pi
        let f = |x: &Float, xc: &Float| {
            let w = x.prec();
            Float::with_val(w, 1)
                / (Float::with_val(w, x.sqrt_ref()) * Float::with_val(w, xc.sqrt_ref()))
        };
        let (v, err) = tanh_sinh_integrate(&f, 128, 12);
        let pi = Float::with_val(prec, rug::float::Constant::Pi);
        assert!((v.to_f64() - pi.to_f64()).abs() < 1e-20, "got {v} err {err}");
    }
}
