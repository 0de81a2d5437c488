//! Ball arithmetic on top of MPFR: midpoint at the working precision,
//! radius tracked upward-rounded at low precision.
//!
//! Midpoint operations round to nearest; each operation adds one ulp of the
//! result to the radius on top of the propagated input radii, so a ball
//! always encloses the exact value when its inputs do. Special functions
//! evaluated at exact rational arguments carry ulp-level radii; hand-rolled
//! series (Hurwitz zeta, Stirling) add their explicit truncation bounds.
//! Quadrature radii additionally carry a refinement-difference error term,
//! which is a conservative estimate rather than a proof; everything else is
//! rigorous.

pub mod fastcx;
mod quad;
mod special;

pub use quad::{gauss_legendre_integrate, tanh_sinh_integrate};
pub use special::{
    dirichlet_l_from_hurwitz, digamma_rat, euler_constant, gamma_rat, hurwitz_zeta_int,
    ln_gamma_complex, polygamma_rat, zeta_int,
};

use rug::float::Round;
use rug::ops::{AddAssignRound, MulAssignRound};
use rug::Float;

use crate::exact::{Int, Rat};

const RAD_PREC: u32 = 32;

fn rad_zero() -> Float {
    Float::with_val(RAD_PREC, 0)
}

fn rad_add(a: &Float, b: &Float) -> Float {
    let mut r = a.clone();
    r.add_assign_round(b, Round::Up);
    r
}

fn rad_mul(a: &Float, b: &Float) -> Float {
    let mut r = a.clone();
    r.mul_assign_round(b, Round::Up);
    r
}

fn rad_from(f: &Float) -> Float {
    Float::with_val_round(RAD_PREC, f, Round::Up).0
}

/// One ulp of `x` at its own precision, as an upward-rounded radius.
fn ulp(x: &Float) -> Float {
    if x.is_zero() {
        // 2^(-prec) relative to 1; the caller's scale is unknown, so use the
        // smallest positive scale we can justify: zero result from exact ops
        // stays exact
        return rad_zero();
    }
    let e = x.get_exp().unwrap_or(0);
    let p = x.prec() as i64;
    let mut u = Float::with_val(RAD_PREC, 1);
    u >>= (p - e as i64 + 1).min(1 << 30) as u32;
    u
}

pub fn int_to_float(v: &Int, prec: u32) -> Float {
    Float::with_val(prec, rug::Integer::from_str_radix(&v.to_str_radix(16), 16).unwrap())
}

pub fn rat_to_float(v: &Rat, prec: u32) -> Float {
    let n = rug::Integer::from_str_radix(&v.numer().to_str_radix(16), 16).unwrap();
    let d = rug::Integer::from_str_radix(&v.denom().to_str_radix(16), 16).unwrap();
    let q = rug::Rational::from((n, d));
    Float::with_val(prec, q)
}

/// A real interval `mid ± rad`.
#[derive(Debug, Clone)]
pub struct RealBall {
    pub mid: Float,
    pub rad: Float,
}

impl RealBall {
    pub fn zero(prec: u32) -> Self {
        RealBall {
            mid: Float::with_val(prec, 0),
            rad: rad_zero(),
        }
    }

    pub fn one(prec: u32) -> Self {
        RealBall {
            mid: Float::with_val(prec, 1),
            rad: rad_zero(),
        }
    }

    pub fn from_int(v: i64, prec: u32) -> Self {
        RealBall {
            mid: Float::with_val(prec, v),
            rad: rad_zero(),
        }
    }

    pub fn from_rat(v: &Rat, prec: u32) -> Self {
        let mid = rat_to_float(v, prec);
        let rad = ulp(&mid);
        RealBall { mid, rad }
    }

    pub fn from_float(mid: Float) -> Self {
        RealBall {
            mid,
            rad: rad_zero(),
        }
    }

    pub fn with_rad(mid: Float, rad: Float) -> Self {
        RealBall { mid, rad }
    }

    pub fn prec(&self) -> u32 {
        self.mid.prec()
    }

    pub fn pi(prec: u32) -> Self {
        let mid = Float::with_val(prec, rug::float::Constant::Pi);
        let rad = ulp(&mid);
        RealBall { mid, rad }
    }

    pub fn add(&self, o: &RealBall) -> Self {
        let mid = Float::with_val(self.prec().max(o.prec()), &self.mid + &o.mid);
        let rad = rad_add(&rad_add(&self.rad, &o.rad), &ulp(&mid));
        RealBall { mid, rad }
    }

    pub fn sub(&self, o: &RealBall) -> Self {
        let mid = Float::with_val(self.prec().max(o.prec()), &self.mid - &o.mid);
        let rad = rad_add(&rad_add(&self.rad, &o.rad), &ulp(&mid));
        RealBall { mid, rad }
    }

    pub fn neg(&self) -> Self {
        RealBall {
            mid: Float::with_val(self.prec(), -&self.mid),
            rad: self.rad.clone(),
        }
    }

    pub fn mul(&self, o: &RealBall) -> Self {
        let prec = self.prec().max(o.prec());
        let mid = Float::with_val(prec, &self.mid * &o.mid);
        let a = rad_from(&Float::with_val(RAD_PREC, self.mid.abs_ref()));
        let b = rad_from(&Float::with_val(RAD_PREC, o.mid.abs_ref()));
        let mut rad = rad_mul(&a, &o.rad);
        rad = rad_add(&rad, &rad_mul(&b, &self.rad));
        rad = rad_add(&rad, &rad_mul(&self.rad, &o.rad));
        rad = rad_add(&rad, &ulp(&mid));
        RealBall { mid, rad }
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        let mid = Float::with_val(self.prec(), &self.mid * k);
        let kf = Float::with_val(RAD_PREC, k.unsigned_abs());
        let rad = rad_add(&rad_mul(&self.rad, &kf), &ulp(&mid));
        RealBall { mid, rad }
    }

    /// Reciprocal; requires the ball to exclude zero.
    pub fn recip(&self) -> Self {
        let prec = self.prec();
        let absmid = Float::with_val(RAD_PREC, self.mid.abs_ref());
        let denom = {
            let mut d = absmid.clone();
            // |x| - rad, rounded down
            d.sub_assign_round_down(&self.rad);
            d
        };
        assert!(
            denom.is_sign_positive() && !denom.is_zero(),
            "reciprocal of a ball containing zero"
        );
        let mid = Float::with_val(prec, self.mid.recip_ref());
        // |1/x - 1/m| <= rad / (|m| (|m| - rad))
        let mut rad = self.rad.clone();
        rad = rad_mul(&rad, &recip_up(&rad_mul(&absmid, &denom)));
        rad = rad_add(&rad, &ulp(&mid));
        RealBall { mid, rad }
    }

    pub fn div(&self, o: &RealBall) -> Self {
        self.mul(&o.recip())
    }

    pub fn abs(&self) -> Self {
        RealBall {
            mid: Float::with_val(self.prec(), self.mid.abs_ref()),
            rad: self.rad.clone(),
        }
    }

    pub fn sqrt(&self) -> Self {
        let prec = self.prec();
        let lower = {
            let mut d = Float::with_val(RAD_PREC, &self.mid);
            d.sub_assign_round_down(&self.rad);
            d
        };
        if !lower.is_sign_positive() || lower.is_zero() {
            // ball reaches zero: enclose [0, sqrt(upper)]
            let upper = rad_add(
                &Float::with_val(RAD_PREC, self.mid.abs_ref()),
                &self.rad,
            );
            let s = Float::with_val_round(RAD_PREC, upper.sqrt_ref(), Round::Up).0;
            let mid = Float::with_val(prec, self.mid.abs_ref()).sqrt();
            return RealBall { mid, rad: s };
        }
        let mid = Float::with_val(prec, self.mid.sqrt_ref());
        let sq = Float::with_val(RAD_PREC, lower.sqrt_ref());
        let mut rad = rad_mul(&self.rad, &recip_up(&rad_mul(&sq, &Float::with_val(RAD_PREC, 2))));
        rad = rad_add(&rad, &ulp(&mid));
        RealBall { mid, rad }
    }

    pub fn exp(&self) -> Self {
        let prec = self.prec();
        let mid = Float::with_val(prec, self.mid.exp_ref());
        // |e^x - e^m| <= e^m (e^rad - 1)
        let em1 = Float::with_val_round(RAD_PREC, self.rad.exp_m1_ref(), Round::Up).0;
        let scale = rad_from(&Float::with_val(RAD_PREC, mid.abs_ref()));
        let rad = rad_add(&rad_mul(&scale, &em1), &ulp(&mid));
        RealBall { mid, rad }
    }

    pub fn ln(&self) -> Self {
        let prec = self.prec();
        let lower = {
            let mut d = Float::with_val(RAD_PREC, &self.mid);
            d.sub_assign_round_down(&self.rad);
            d
        };
        assert!(lower.is_sign_positive(), "log of a ball reaching 0");
        let mid = Float::with_val(prec, self.mid.ln_ref());
        let rad = rad_add(&rad_mul(&self.rad, &recip_up(&lower)), &ulp(&mid));
        RealBall { mid, rad }
    }

    /// sin/cos propagate radius with derivative bound 1.
    pub fn sin(&self) -> Self {
        let mid = Float::with_val(self.prec(), self.mid.sin_ref());
        let rad = rad_add(&self.rad, &ulp(&mid));
        RealBall { mid, rad }
    }

    pub fn cos(&self) -> Self {
        let mid = Float::with_val(self.prec(), self.mid.cos_ref());
        let rad = rad_add(&self.rad, &ulp(&mid));
        RealBall { mid, rad }
    }

    pub fn sinh(&self) -> Self {
        let mid = Float::with_val(self.prec(), self.mid.sinh_ref());
        // derivative cosh is monotone; bound at |x| + rad
        let bound = {
            let mut x = Float::with_val(RAD_PREC, self.mid.abs_ref());
            x.add_assign_round(&self.rad, Round::Up);
            Float::with_val_round(RAD_PREC, x.cosh_ref(), Round::Up).0
        };
        let rad = rad_add(&rad_mul(&self.rad, &bound), &ulp(&mid));
        RealBall { mid, rad }
    }

    pub fn cosh(&self) -> Self {
        let mid = Float::with_val(self.prec(), self.mid.cosh_ref());
        let bound = {
            let mut x = Float::with_val(RAD_PREC, self.mid.abs_ref());
            x.add_assign_round(&self.rad, Round::Up);
            Float::with_val_round(RAD_PREC, x.cosh_ref(), Round::Up).0
        };
        let rad = rad_add(&rad_mul(&self.rad, &bound), &ulp(&mid));
        RealBall { mid, rad }
    }

    pub fn atan2(&self, x: &RealBall) -> Self {
        let prec = self.prec().max(x.prec());
        let mid = Float::with_val(prec, self.mid.atan2_ref(&x.mid));
        // |grad| <= 1/|z|; inflate by 2 for curvature
        let norm = {
            let h = Float::with_val(RAD_PREC, self.mid.abs_ref());
            let w = Float::with_val(RAD_PREC, x.mid.abs_ref());
            if h > w {
                h
            } else {
                w
            }
        };
        assert!(!norm.is_zero(), "atan2 at the origin");
        let in_rad = rad_add(&self.rad, &x.rad);
        let rad = rad_add(
            &rad_mul(&rad_mul(&in_rad, &recip_up(&norm)), &Float::with_val(RAD_PREC, 2)),
            &ulp(&mid),
        );
        RealBall { mid, rad }
    }

    /// `x^e` for integer e via binary powering.
    pub fn pow_i64(&self, e: i64) -> Self {
        if e == 0 {
            return RealBall::one(self.prec());
        }
        let base = if e < 0 { self.recip() } else { self.clone() };
        let mut acc = RealBall::one(self.prec());
        let mut cur = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&cur);
            }
            cur = cur.mul(&cur);
            k >>= 1;
        }
        acc
    }

    /// `x^q` for rational q, positive base.
    pub fn pow_rat(&self, q: &Rat) -> Self {
        self.ln().mul(&RealBall::from_rat(q, self.prec())).exp()
    }

    pub fn contains_zero(&self) -> bool {
        let a = Float::with_val(RAD_PREC, self.mid.abs_ref());
        a <= self.rad
    }

    /// Upper bound of |value| over the ball.
    pub fn abs_upper(&self) -> Float {
        let mut a = Float::with_val(RAD_PREC, self.mid.abs_ref());
        a.add_assign_round(&self.rad, Round::Up);
        a
    }

    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    pub fn rad_f64(&self) -> f64 {
        self.rad.to_f64()
    }

    /// Does the other ball overlap this one?
    pub fn overlaps(&self, o: &RealBall) -> bool {
        let d = Float::with_val(RAD_PREC, Float::with_val(self.prec().max(o.prec()), &self.mid - &o.mid).abs_ref());
        d <= rad_add(&self.rad, &o.rad)
    }
}

trait SubAssignRoundDown {
    fn sub_assign_round_down(&mut self, other: &Float);
}

impl SubAssignRoundDown for Float {
    fn sub_assign_round_down(&mut self, other: &Float) {
        use rug::ops::SubAssignRound;
        self.sub_assign_round(other, Round::Down);
    }
}

fn recip_up(x: &Float) -> Float {
    let mut r = Float::with_val(RAD_PREC, 1);
    use rug::ops::DivAssignRound;
    r.div_assign_round(x, Round::Up);
    r
}

/// A complex ball: independent real and imaginary intervals.
#[derive(Debug, Clone)]
pub struct ComplexBall {
    pub re: RealBall,
    pub im: RealBall,
}

impl ComplexBall {
    pub fn zero(prec: u32) -> Self {
        ComplexBall {
            re: RealBall::zero(prec),
            im: RealBall::zero(prec),
        }
    }

    pub fn one(prec: u32) -> Self {
        ComplexBall {
            re: RealBall::one(prec),
            im: RealBall::zero(prec),
        }
    }

    pub fn from_real(re: RealBall) -> Self {
        let prec = re.prec();
        ComplexBall {
            re,
            im: RealBall::zero(prec),
        }
    }

    pub fn from_rat(v: &Rat, prec: u32) -> Self {
        ComplexBall::from_real(RealBall::from_rat(v, prec))
    }

    pub fn i(prec: u32) -> Self {
        ComplexBall {
            re: RealBall::zero(prec),
            im: RealBall::one(prec),
        }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn add(&self, o: &ComplexBall) -> Self {
        ComplexBall {
            re: self.re.add(&o.re),
            im: self.im.add(&o.im),
        }
    }

    pub fn sub(&self, o: &ComplexBall) -> Self {
        ComplexBall {
            re: self.re.sub(&o.re),
            im: self.im.sub(&o.im),
        }
    }

    pub fn neg(&self) -> Self {
        ComplexBall {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }

    pub fn mul(&self, o: &ComplexBall) -> Self {
        ComplexBall {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn mul_real(&self, o: &RealBall) -> Self {
        ComplexBall {
            re: self.re.mul(o),
            im: self.im.mul(o),
        }
    }

    pub fn norm_sq(&self) -> RealBall {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn abs(&self) -> RealBall {
        self.norm_sq().sqrt()
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sq().recip();
        ComplexBall {
            re: self.re.mul(&n),
            im: self.im.mul(&n).neg(),
        }
    }

    pub fn div(&self, o: &ComplexBall) -> Self {
        self.mul(&o.recip())
    }

    pub fn conj(&self) -> Self {
        ComplexBall {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }

    pub fn exp(&self) -> Self {
        let r = self.re.exp();
        ComplexBall {
            re: r.mul(&self.im.cos()),
            im: r.mul(&self.im.sin()),
        }
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Self {
        let prec = self.prec();
        let re = self.norm_sq().ln().mul(&RealBall::from_rat(&crate::exact::rat(1, 2), prec));
        let im = self.im.atan2(&self.re);
        ComplexBall { re, im }
    }

    pub fn sin(&self) -> Self {
        ComplexBall {
            re: self.re.sin().mul(&self.im.cosh()),
            im: self.re.cos().mul(&self.im.sinh()),
        }
    }

    pub fn pow_i64(&self, e: i64) -> Self {
        if e == 0 {
            return ComplexBall::one(self.prec());
        }
        let base = if e < 0 { self.recip() } else { self.clone() };
        let mut acc = ComplexBall::one(self.prec());
        let mut cur = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&cur);
            }
            cur = cur.mul(&cur);
            k >>= 1;
        }
        acc
    }

    /// Principal power `z^q` with rational exponent.
    pub fn pow_rat(&self, q: &Rat) -> Self {
        if q.is_integer() {
            use num_traits::ToPrimitive;
            if let Some(e) = q.to_integer().to_i64() {
                return self.pow_i64(e);
            }
        }
        let prec = self.prec();
        self.ln().mul_real(&RealBall::from_rat(q, prec)).exp()
    }

    /// Principal power with complex exponent.
    pub fn pow(&self, w: &ComplexBall) -> Self {
        self.ln().mul(w).exp()
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn abs_upper(&self) -> Float {
        // |z| <= |re| + |im| componentwise upper bounds
        rad_add(&self.re.abs_upper(), &self.im.abs_upper())
    }

    /// The radius of the enclosing disk: rad_re + rad_im is a safe bound.
    pub fn rad_upper(&self) -> Float {
        rad_add(&self.re.rad, &self.im.rad)
    }

    pub fn overlaps(&self, o: &ComplexBall) -> bool {
        self.re.overlaps(&o.re) && self.im.overlaps(&o.im)
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn ball_basics() {
        let prec = 128;
        let a = RealBall::from_rat(&rat(1, 3), prec);
        let b = RealBall::from_rat(&rat(1, 6), prec);
        let s = a.add(&b);
        let half = RealBall::from_rat(&rat(1, 2), prec);
        assert!(s.overlaps(&half));
        assert!(s.rad_f64() < 1e-35);
        let p = a.mul(&b).mul_i64(18);
        assert!(p.overlaps(&RealBall::one(prec)));
    }

    #[test]
    fn radius_monotone_in_precision() {
        for &prec in &[128u32, 256] {
            let x = RealBall::from_rat(&rat(2, 7), prec).exp().ln();
            assert!(x.overlaps(&RealBall::from_rat(&rat(2, 7), prec)));
            let expected = 2f64.powi(-(prec as i32) + 8);
            assert!(x.rad_f64() < expected, "rad {} at prec {}", x.rad_f64(), prec);
        }
        let r128 = RealBall::from_rat(&rat(2, 7), 128).exp().rad_f64();
        let r256 = RealBall::from_rat(&rat(2, 7), 256).exp().rad_f64();
        assert!(r256 < r128);
    }

    #[test]
    fn complex_exp_ln_roundtrip() {
        let prec = 128;
        let z = ComplexBall {
            re: RealBall::from_rat(&rat(3, 7), prec),
            im: RealBall::from_rat(&rat(-2, 5), prec),
        };
        let w = z.exp().ln();
        assert!(w.overlaps(&z));
        assert!(w.rad_upper().to_f64() < 1e-30);
    }

    #[test]
    fn complex_pow_branch() {
        let prec = 128;
        // (-1 + 0i)^(1/2) principal = i; approach from positive imaginary part
        let z = ComplexBall {
            re: RealBall::from_int(-1, prec),
            im: RealBall::zero(prec),
        };
        let r = z.pow_rat(&rat(1, 2));
        assert!(r.im.to_f64() > 0.99);
        assert!(r.re.abs().to_f64() < 1e-30);
    }

    #[test]
    fn sin_complex_matches_identity() {
        let prec = 128;
        let z = ComplexBall {
            re: RealBall::from_rat(&rat(1, 3), prec),
            im: RealBall::from_rat(&rat(5, 4), prec),
        };
        // sin^2 + cos^2 = 1 with cos z = sin(pi/2 - z) ... use exp identity instead:
        // sin z = (e^{iz} - e^{-iz}) / (2i)
        let i = ComplexBall::i(prec);
        let e1 = i.mul(&z).exp();
        let e2 = i.mul(&z).neg().exp();
        let s = e1.sub(&e2).div(&i.mul_real(&RealBall::from_int(2, prec)));
        assert!(s.overlaps(&z.sin()));
    }
}
