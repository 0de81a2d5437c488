//! Special-function evaluation with explicit error control: Gamma, digamma
//! and polygamma at rationals, Hurwitz zeta for integer first argument,
//! Dirichlet L-values, and the complex log-Gamma via Stirling's series with
//! its classical remainder bound.

use num_traits::{Signed, ToPrimitive, Zero};
use rug::float::Round;
use rug::ops::AddAssignRound;
use rug::Float;

use super::{rat_to_float, ComplexBall, RealBall};
use crate::exact::{Int, Rat};

/// Exact Bernoulli numbers `B_0, B_1, ...` (B_1 = -1/2), cached globally.
pub fn bernoulli(upto: usize) -> Vec<Rat> {
    use std::sync::{Mutex, OnceLock};
    static CACHE: OnceLock<Mutex<Vec<Rat>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(Vec::new()));
    let mut guard = cache.lock().unwrap();
    if guard.len() > upto {
        return guard[..=upto].to_vec();
    }
    let computed = bernoulli_uncached(upto + 16);
    *guard = computed;
    guard[..=upto].to_vec()
}

fn bernoulli_uncached(upto: usize) -> Vec<Rat> {
    use num_traits::One;
    let mut b: Vec<Rat> = Vec::with_capacity(upto + 1);
    // recurrence: sum_{j=0}^{m} C(m+1, j) B_j = 0 for m >= 1
    for m in 0..=upto {
        if m == 0 {
            b.push(Rat::one());
            continue;
        }
        let mut acc = Rat::zero();
        let mut binom = Int::one();
        for (j, bj) in b.iter().enumerate().take(m) {
            // binom = C(m+1, j)
            if j > 0 {
                binom = &binom * Int::from((m + 2 - j) as u64) / Int::from(j as u64);
            }
            acc += Rat::from_integer(binom.clone()) * bj;
        }
        let denom = Rat::from_integer(Int::from((m + 1) as u64));
        b.push(-acc / denom);
    }
    b
}

/// Gamma at an exact rational argument (not a nonpositive integer).
pub fn gamma_rat(q: &Rat, prec: u32) -> RealBall {
    assert!(
        !(q.is_integer() && !q.is_positive()),
        "gamma pole at {q}"
    );
    let work = prec + 32;
    let x = rat_to_float(q, work);
    let mid = Float::with_val(prec, x.gamma_ref());
    // input rounding error propagated through |Gamma'(x)| = |Gamma(x) psi(x)|
    let deriv = {
        let x53 = rat_to_float(q, 64);
        let g = Float::with_val(64, x53.gamma_ref());
        let p = Float::with_val(64, x53.digamma_ref());
        let mut d = Float::with_val(32, g.abs_ref());
        d *= Float::with_val(32, p.abs_ref());
        d *= 4;
        d
    };
    let in_err = {
        let mut u = Float::with_val(32, 1);
        u >>= work - 2;
        let scale = Float::with_val(32, x.abs_ref());
        let mut e = u;
        e *= scale;
        e
    };
    let mut rad = super::ulp(&mid);
    let mut extra = deriv;
    extra *= in_err;
    rad.add_assign_round(&extra, Round::Up);
    RealBall { mid, rad }
}

/// Digamma at an exact rational, via MPFR.
pub fn digamma_rat(q: &Rat, prec: u32) -> RealBall {
    assert!(
        !(q.is_integer() && !q.is_positive()),
        "digamma pole at {q}"
    );
    let work = prec + 32;
    let x = rat_to_float(q, work);
    let mid = Float::with_val(prec, x.digamma_ref());
    // |psi'(x)| bounded crudely at low precision
    let deriv = {
        let xf = q.to_f64().unwrap_or(0.5);
        let b = polygamma_f64_bound(1, xf);
        Float::with_val(32, b * 4.0)
    };
    let in_err = {
        let mut u = Float::with_val(32, 1);
        u >>= work - 2;
        let scale = Float::with_val(32, x.abs_ref());
        let mut e = u;
        e *= scale;
        e
    };
    let mut rad = super::ulp(&mid);
    let mut extra = deriv;
    extra *= in_err;
    rad.add_assign_round(&extra, Round::Up);
    RealBall { mid, rad }
}

fn polygamma_f64_bound(k: u32, x: f64) -> f64 {
    // crude bound for |psi^(k)(x)| with x > 0: k!/x^{k+1} + k!/x^k * 2
    let mut fact = 1f64;
    for i in 1..=k {
        fact *= i as f64;
    }
    fact * (1.0 / x.powi(k as i32 + 1) + 2.0 / x.powi(k as i32).max(f64::MIN_POSITIVE))
}

pub fn euler_constant(prec: u32) -> RealBall {
    let mid = Float::with_val(prec, rug::float::Constant::Euler);
    let rad = super::ulp(&mid);
    RealBall { mid, rad }
}

/// Riemann zeta at integer s >= 2.
pub fn zeta_int(s: u32, prec: u32) -> RealBall {
    assert!(s >= 2);
    let mid = Float::with_val(prec, Float::zeta_u(s));
    let rad = super::ulp(&mid);
    RealBall { mid, rad }
}

/// Hurwitz zeta `zeta(s, a)` for integer `s >= 2` and rational `a > 0`,
/// via Euler–Maclaurin with the first-omitted-term tail bound (valid here
/// because the integrand derivatives are completely monotone).
pub fn hurwitz_zeta_int(s: u32, a: &Rat, prec: u32) -> RealBall {
    assert!(s >= 2, "hurwitz zeta needs s >= 2");
    assert!(a.is_positive(), "hurwitz zeta needs a > 0");
    let work = prec + 64;
    let r_terms = 16usize;
    // choose J so the remainder bound is far below 2^-(prec+8)
    // remainder ~ |B_{2R+2}|/(2R+2)! * (s)_{2R+1} * (a+J)^{-s-2R-1}
    let bern = bernoulli(2 * r_terms + 2);
    let target = -(prec as f64) - 8.0;
    let mut j_terms = 8usize;
    let af = a.to_f64().unwrap_or(0.5);
    loop {
        let base = af + j_terms as f64;
        // log2 of the bound
        let mut log2_poch = 0f64;
        for i in 0..(2 * r_terms + 1) {
            log2_poch += ((s as f64) + i as f64).log2();
        }
        let log2_b = bern[2 * r_terms + 2].to_f64().unwrap_or(0.0).abs().log2();
        let mut log2_fact = 0f64;
        for i in 2..=(2 * r_terms + 2) {
            log2_fact += (i as f64).log2();
        }
        let log2_bound =
            log2_b - log2_fact + log2_poch - ((s as f64) + 2.0 * r_terms as f64 + 1.0) * base.log2();
        if log2_bound < target {
            break;
        }
        j_terms *= 2;
        assert!(j_terms < 1 << 24, "hurwitz zeta parameters out of range");
    }

    let one = RealBall::one(work);
    let mut sum = RealBall::zero(work);
    let a_ball = RealBall::from_rat(a, work);
    for j in 0..j_terms {
        let t = a_ball.add(&RealBall::from_int(j as i64, work));
        sum = sum.add(&t.pow_i64(-(s as i64)));
    }
    let n = a_ball.add(&RealBall::from_int(j_terms as i64, work));
    // N^{1-s}/(s-1)
    let tail1 = n
        .pow_i64(1 - s as i64)
        .div(&RealBall::from_int(s as i64 - 1, work));
    // N^{-s}/2
    let tail2 = n
        .pow_i64(-(s as i64))
        .div(&RealBall::from_int(2, work));
    sum = sum.add(&tail1).add(&tail2);
    // sum_{r=1}^{R} B_{2r}/(2r)! * (s)_{2r-1} * N^{-s-2r+1}
    let mut poch = RealBall::from_int(s as i64, work); // (s)_1
    let mut fact = Rat::from_integer(Int::from(2)); // (2r)! at r=1
    for r in 1..=r_terms {
        let coeff = &bern[2 * r] / &fact;
        let term = n
            .pow_i64(-(s as i64) - 2 * r as i64 + 1)
            .mul(&poch)
            .mul(&RealBall::from_rat(&coeff, work));
        sum = sum.add(&term);
        // update factorial (2r)! -> (2r+2)! and pochhammer (s)_{2r-1} -> (s)_{2r+1}
        fact = fact
            * Rat::from_integer(Int::from((2 * r + 1) as u64))
            * Rat::from_integer(Int::from((2 * r + 2) as u64));
        poch = poch
            .mul(&RealBall::from_int(s as i64 + 2 * r as i64 - 1, work))
            .mul(&RealBall::from_int(s as i64 + 2 * r as i64, work));
    }
    // tail bound: first omitted term magnitude
    let omitted = {
        let coeff = &bern[2 * r_terms + 2]
            / (&fact);
        n.pow_i64(-(s as i64) - 2 * r_terms as i64 - 1)
            .mul(&poch)
            .mul(&RealBall::from_rat(&coeff, work))
            .abs()
    };
    let mut rad = sum.rad.clone();
    rad.add_assign_round(&omitted.abs_upper(), Round::Up);
    let _ = one;
    let mid = Float::with_val(prec, &sum.mid);
    let mut rad_final = rad;
    rad_final.add_assign_round(&super::ulp(&mid), Round::Up);
    RealBall { mid, rad: rad_final }
}

/// Polygamma `psi^{(k)}(q)` for `k >= 1` at rational `q > 0`:
/// `(-1)^{k+1} k! zeta(k+1, q)`.
pub fn polygamma_rat(k: u32, q: &Rat, prec: u32) -> RealBall {
    assert!(k >= 1);
    let z = hurwitz_zeta_int(k + 1, q, prec);
    let mut fact = Rat::from_integer(Int::one());
    for i in 1..=k {
        fact = fact * Rat::from_integer(Int::from(i));
    }
    let sign = if k % 2 == 1 { fact } else { -fact };
    z.mul(&RealBall::from_rat(&sign, prec))
}

use num_traits::One;

/// `L(s, chi)` from Hurwitz zeta values: `q^{-s} sum_a chi(a) zeta(s, a/q)`,
/// with the character values supplied as complex balls.
pub fn dirichlet_l_from_hurwitz(
    s: u32,
    modulus: u32,
    chi_values: &[ComplexBall],
    prec: u32,
) -> ComplexBall {
    assert_eq!(chi_values.len(), modulus as usize);
    let mut acc = ComplexBall::zero(prec);
    for a in 1..modulus {
        let chi = &chi_values[a as usize];
        if chi.contains_zero() && chi.rad_upper().to_f64() == 0.0 {
            continue;
        }
        let h = hurwitz_zeta_int(s, &crate::exact::rat(a as i64, modulus as i64), prec);
        acc = acc.add(&chi.mul_real(&h));
    }
    let scale = RealBall::from_rat(&crate::exact::rat(1, modulus as i64), prec).pow_i64(s as i64);
    acc.mul_real(&scale)
}

/// Complex log-Gamma (the Stirling branch: real on the positive real axis,
/// `exp(ln_gamma(z)) = Gamma(z)` pointwise). Requires the ball to stay away
/// from the nonpositive real axis after recurrence shifts.
pub fn ln_gamma_complex(z: &ComplexBall, prec: u32) -> ComplexBall {
    let work = prec + 48;
    let r_terms = (32usize).max(prec as usize / 4);
    // remainder ~ |B_{2R+2}| / ((2R+1)(2R+2) |z|^{2R+1}) sec^{2R+2}(theta/2);
    // solve for |z| with ~110 bits of headroom for the Bernoulli growth
    let threshold = (12.0f64)
        .max(2f64.powf((prec as f64 + 110.0) / (2.0 * r_terms as f64 + 1.0)));
    // shift: lnGamma(z) = lnGamma(z + k) - sum_{j=0}^{k-1} ln(z + j)
    let mut shift_log = ComplexBall::zero(work);
    let mut zs = ComplexBall {
        re: RealBall::with_rad(Float::with_val(work, &z.re.mid), z.re.rad.clone()),
        im: RealBall::with_rad(Float::with_val(work, &z.im.mid), z.im.rad.clone()),
    };
    let mut guard = 0usize;
    while (zs.re.mid.to_f64() < threshold)
        || (zs.re.mid.to_f64().powi(2) + zs.im.mid.to_f64().powi(2)) < threshold * threshold
    {
        assert!(
            !(zs.re.contains_zero() && zs.im.contains_zero()),
            "ln_gamma at a pole"
        );
        shift_log = shift_log.add(&zs.ln());
        zs = ComplexBall {
            re: zs.re.add(&RealBall::one(work)),
            im: zs.im,
        };
        guard += 1;
        assert!(guard < 100_000, "ln_gamma shift runaway");
    }
    // Stirling: (z - 1/2) ln z - z + ln(2 pi)/2 + sum B_{2r}/(2r(2r-1) z^{2r-1})
    let half = RealBall::from_rat(&crate::exact::rat(1, 2), work);
    let lnz = zs.ln();
    let mut acc = zs
        .sub(&ComplexBall::from_real(half.clone()))
        .mul(&lnz)
        .sub(&zs);
    let two_pi = RealBall::pi(work).mul_i64(2);
    acc = acc.add(&ComplexBall::from_real(two_pi.ln().mul(&half)));
    let bern = bernoulli(2 * r_terms + 2);
    let zinv2 = zs.recip().mul(&zs.recip());
    let mut zpow = zs.recip(); // z^{-(2r-1)} at r=1
    for r in 1..=r_terms {
        let c = &bern[2 * r]
            / Rat::from_integer(Int::from((2 * r * (2 * r - 1)) as u64));
        acc = acc.add(&zpow.mul_real(&RealBall::from_rat(&c, work)));
        zpow = zpow.mul(&zinv2);
    }
    // remainder bound: |B_{2R+2}| / ((2R+1)(2R+2) |z|^{2R+1}) * sec(arg(z)/2)^{2R+2}
    let absz = zs.abs();
    let theta = zs.im.atan2(&zs.re);
    let sec = theta
        .mul(&half)
        .cos()
        .recip()
        .abs()
        .pow_i64(2 * r_terms as i64 + 2);
    let bound = RealBall::from_rat(
        &(bern[2 * r_terms + 2].abs()
            / Rat::from_integer(Int::from(((2 * r_terms + 1) * (2 * r_terms + 2)) as u64))),
        work,
    )
    .mul(&absz.pow_i64(-(2 * r_terms as i64 + 1)))
    .mul(&sec);
    let mut re = acc.re.clone();
    re.rad.add_assign_round(&bound.abs_upper(), Round::Up);
    let mut im = acc.im.clone();
    im.rad.add_assign_round(&bound.abs_upper(), Round::Up);
    let result = ComplexBall { re, im }.sub(&shift_log);
    // round down to requested precision
    ComplexBall {
        re: RealBall::with_rad(
            Float::with_val(prec, &result.re.mid),
            {
                let mut r = result.re.rad.clone();
                r.add_assign_round(&super::ulp(&result.re.mid), Round::Up);
                r
            },
        ),
        im: RealBall::with_rad(
            Float::with_val(prec, &result.im.mid),
            {
                let mut r = result.im.rad.clone();
                r.add_assign_round(&super::ulp(&result.im.mid), Round::Up);
                r
            },
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn bernoulli_values() {
        let b = bernoulli(8);
        assert_eq!(b[2], rat(1, 6));
        assert_eq!(b[4], rat(-1, 30));
        assert_eq!(b[8], rat(-1, 30));
        assert_eq!(b[3], rat(0, 1));
    }

    #[test]
    fn gamma_half() {
        let prec = 192;
        let g = gamma_rat(&rat(1, 2), prec);
        let pi = RealBall::pi(prec);
        assert!(g.mul(&g).overlaps(&pi));
        assert!(g.rad_f64() < 1e-45);
    }

    #[test]
    fn hurwitz_against_zeta() {
        let prec = 160;
        // zeta(3, 1) = zeta(3)
        let h = hurwitz_zeta_int(3, &rat(1, 1), prec);
        let z = zeta_int(3, prec);
        assert!(h.overlaps(&z));
        assert!(h.rad_f64() < 1e-40);
        // zeta(2, 1/2) = pi^2 / 2
        let h = hurwitz_zeta_int(2, &rat(1, 2), prec);
        let pi = RealBall::pi(prec);
        let expect = pi.mul(&pi).div(&RealBall::from_int(2, prec));
        assert!(h.overlaps(&expect));
    }

    #[test]
    fn polygamma_known_values() {
        let prec = 160;
        // psi^(1)(1) = pi^2/6
        let p = polygamma_rat(1, &rat(1, 1), prec);
        let pi = RealBall::pi(prec);
        let expect = pi.mul(&pi).div(&RealBall::from_int(6, prec));
        assert!(p.overlaps(&expect));
        // psi^(1)(1/2) = pi^2/2
        let p = polygamma_rat(1, &rat(1, 2), prec);
        let expect = pi.mul(&pi).div(&RealBall::from_int(2, prec));
        assert!(p.overlaps(&expect));
        // psi^(2)(1) = -2 zeta(3)
        let p = polygamma_rat(2, &rat(1, 1), prec);
        let expect = zeta_int(3, prec).mul_i64(-2);
        assert!(p.overlaps(&expect));
    }

    #[test]
    fn digamma_reflection() {
        let prec = 160;
        // psi(1 - x) - psi(x) = pi cot(pi x) at x = 1/3
        let d1 = digamma_rat(&rat(2, 3), prec);
        let d2 = digamma_rat(&rat(1, 3), prec);
        let lhs = d1.sub(&d2);
        let pi = RealBall::pi(prec);
        let x = pi.div(&RealBall::from_int(3, prec));
        let rhs = pi.mul(&x.cos().div(&x.sin()));
        assert!(lhs.overlaps(&rhs));
    }

    #[test]
    fn ln_gamma_complex_consistency() {
        let prec = 128;
        // real positive argument matches gamma_rat
        let z = ComplexBall::from_rat(&rat(7, 3), prec);
        let lg = ln_gamma_complex(&z, prec);
        let g = lg.exp();
        let expect = gamma_rat(&rat(7, 3), prec);
        assert!(g.re.overlaps(&expect));
        assert!(g.im.abs().to_f64() < 1e-30);
        // functional equation Gamma(z+1) = z Gamma(z) at a complex point
        let z = ComplexBall {
            re: RealBall::from_rat(&rat(1, 3), prec),
            im: RealBall::from_rat(&rat(5, 2), prec),
        };
        let z1 = ComplexBall {
            re: RealBall::from_rat(&rat(4, 3), prec),
            im: RealBall::from_rat(&rat(5, 2), prec),
        };
        let g = ln_gamma_complex(&z, prec).exp();
        let g1 = ln_gamma_complex(&z1, prec).exp();
        assert!(g1.overlaps(&z.mul(&g)));
    }

    #[test]
    fn l_value_chi4() {
        let prec = 160;
        // L(2, chi_4) = Catalan's constant
        let chi: Vec<ComplexBall> = (0..4)
            .map(|a| match a {
                1 => ComplexBall::one(prec),
                3 => ComplexBall::one(prec).neg(),
                _ => ComplexBall::zero(prec),
            })
            .collect();
        let l = dirichlet_l_from_hurwitz(2, 4, &chi, prec);
        let catalan = Float::with_val(prec, rug::float::Constant::Catalan);
        assert!((l.re.mid.to_f64() - catalan.to_f64()).abs() < 1e-12);
        assert!(l.im.abs().to_f64() < 1e-30);
    }
}
