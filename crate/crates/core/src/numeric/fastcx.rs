//! Plain high-precision complex arithmetic (midpoints only) for quadrature
//! inner loops. Error control for integrals comes from refinement
//! differences and tail bounds, so the per-operation radius bookkeeping of
//! the ball layer is not needed here.

use rug::Float;

use super::special::bernoulli;
use crate::exact::Rat;

#[derive(Debug, Clone)]
pub struct Cx {
    pub re: Float,
    pub im: Float,
}

impl Cx {
    pub fn new(re: Float, im: Float) -> Self {
        Cx { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Cx::new(Float::with_val(prec, 0), Float::with_val(prec, 0))
    }

    pub fn one(prec: u32) -> Self {
        Cx::new(Float::with_val(prec, 1), Float::with_val(prec, 0))
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        Cx::new(Float::with_val(prec, re), Float::with_val(prec, im))
    }

    pub fn from_rat(r: &Rat, prec: u32) -> Self {
        Cx::new(super::rat_to_float(r, prec), Float::with_val(prec, 0))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn add(&self, o: &Cx) -> Cx {
        Cx::new(
            Float::with_val(self.prec(), &self.re + &o.re),
            Float::with_val(self.prec(), &self.im + &o.im),
        )
    }

    pub fn sub(&self, o: &Cx) -> Cx {
        Cx::new(
            Float::with_val(self.prec(), &self.re - &o.re),
            Float::with_val(self.prec(), &self.im - &o.im),
        )
    }

    pub fn neg(&self) -> Cx {
        Cx::new(
            Float::with_val(self.prec(), -&self.re),
            Float::with_val(self.prec(), -&self.im),
        )
    }

    pub fn mul(&self, o: &Cx) -> Cx {
        let p = self.prec();
        Cx::new(
            Float::with_val(p, &self.re * &o.re) - Float::with_val(p, &self.im * &o.im),
            Float::with_val(p, &self.re * &o.im) + Float::with_val(p, &self.im * &o.re),
        )
    }

    pub fn mul_f(&self, o: &Float) -> Cx {
        Cx::new(
            Float::with_val(self.prec(), &self.re * o),
            Float::with_val(self.prec(), &self.im * o),
        )
    }

    pub fn norm_sq(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, &self.re * &self.re) + Float::with_val(p, &self.im * &self.im)
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.norm_sq().sqrt_ref())
    }

    pub fn recip(&self) -> Cx {
        let n = self.norm_sq();
        let p = self.prec();
        Cx::new(
            Float::with_val(p, &self.re / &n),
            Float::with_val(p, -&self.im) / n,
        )
    }

    pub fn div(&self, o: &Cx) -> Cx {
        self.mul(&o.recip())
    }

    pub fn exp(&self) -> Cx {
        let p = self.prec();
        let r = Float::with_val(p, self.re.exp_ref());
        Cx::new(
            Float::with_val(p, self.im.cos_ref()) * &r,
            Float::with_val(p, self.im.sin_ref()) * &r,
        )
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Cx {
        let p = self.prec();
        let re = Float::with_val(p, self.norm_sq().ln_ref()) / 2u32;
        let im = Float::with_val(p, self.im.atan2_ref(&self.re));
        Cx::new(re, im)
    }

    pub fn sin(&self) -> Cx {
        let p = self.prec();
        Cx::new(
            Float::with_val(p, self.re.sin_ref()) * Float::with_val(p, self.im.cosh_ref()),
            Float::with_val(p, self.re.cos_ref()) * Float::with_val(p, self.im.sinh_ref()),
        )
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

/// Plain-float Stirling log-Gamma (the branch with `exp(ln_gamma) = Gamma`
/// pointwise).
pub fn ln_gamma_cx(z: &Cx, prec: u32) -> Cx {
    let work = prec + 16;
    let r_terms = (32usize).max(prec as usize / 4);
    let threshold = (12.0f64)
        .max(2f64.powf((prec as f64 + 110.0) / (2.0 * r_terms as f64 + 1.0)));
    let mut zs = Cx::new(
        Float::with_val(work, &z.re),
        Float::with_val(work, &z.im),
    );
    let mut shift = Cx::zero(work);
    let t2 = threshold * threshold;
    loop {
        let re = zs.re.to_f64();
        let mag = re * re + zs.im.to_f64().powi(2);
        if re > 0.0 && mag >= t2 {
            break;
        }
        shift = shift.add(&zs.ln());
        zs = Cx::new(Float::with_val(work, &zs.re + 1u32), zs.im);
    }
    let half = Float::with_val(work, 0.5);
    let lnz = zs.ln();
    let mut acc = Cx::new(Float::with_val(work, &zs.re - &half), zs.im.clone())
        .mul(&lnz)
        .sub(&zs);
    let two_pi = Float::with_val(work, rug::float::Constant::Pi) * 2u32;
    acc.re += Float::with_val(work, two_pi.ln_ref()) / 2u32;
    let bern = bernoulli(2 * r_terms);
    let zinv = zs.recip();
    let zinv2 = zinv.mul(&zinv);
    let mut zpow = zinv;
    for r in 1..=r_terms {
        let c = super::rat_to_float(
            &(&bern[2 * r]
                / Rat::from_integer(crate::exact::Int::from((2 * r * (2 * r - 1)) as u64))),
            work,
        );
        acc = acc.add(&zpow.mul_f(&c));
        zpow = zpow.mul(&zinv2);
    }
    acc.sub(&shift)
}

/// Adaptive Gauss–Legendre on plain complexes; returns the value and an
/// error estimate from the coarse/fine differences.
pub fn gauss_legendre_fast(
    f: &dyn Fn(&Float) -> Cx,
    a: &Float,
    b: &Float,
    prec: u32,
    tol_log2: i32,
    max_depth: u32,
) -> (Cx, f64) {
    fn panel(f: &dyn Fn(&Float) -> Cx, a: &Float, b: &Float, n: usize, prec: u32) -> Cx {
        let half = Float::with_val(prec, b - a) / 2u32;
        let midp = Float::with_val(prec, a + b) / 2u32;
        let nodes = super::quad::gl_nodes_public(n, prec);
        let mut acc = Cx::zero(prec);
        for (x, w) in &nodes {
            let t = Float::with_val(prec, &midp + Float::with_val(prec, &half * x));
            let v = f(&t);
            acc = acc.add(&v.mul_f(&Float::with_val(prec, w)));
        }
        acc.mul_f(&half)
    }
    fn recurse(
        f: &dyn Fn(&Float) -> Cx,
        a: &Float,
        b: &Float,
        prec: u32,
        tol_log2: i32,
        depth: u32,
    ) -> (Cx, f64) {
        let coarse = panel(f, a, b, 20, prec);
        let fine = panel(f, a, b, 40, prec);
        let diff = coarse.sub(&fine).abs().to_f64();
        if diff <= 2f64.powi(tol_log2) || depth == 0 {
            return (fine, diff);
        }
        let midp = Float::with_val(prec, a + b) / 2u32;
        let (l, el) = recurse(f, a, &midp, prec, tol_log2 - 1, depth - 1);
        let (r, er) = recurse(f, &midp, b, prec, tol_log2 - 1, depth - 1);
        (l.add(&r), el + er)
    }
    recurse(f, a, b, prec, tol_log2, max_depth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn ln_gamma_cx_matches_ball() {
        let prec = 128;
        let z = Cx::from_f64(0.5, 50.0, prec);
        let fast = ln_gamma_cx(&z, prec);
        let ball = super::super::ln_gamma_complex(
            &crate::numeric::ComplexBall {
                re: crate::numeric::RealBall::from_rat(&rat(1, 2), prec),
                im: crate::numeric::RealBall::from_int(50, prec),
            },
            prec,
        );
        assert!((fast.re.to_f64() - ball.re.to_f64()).abs() < 1e-25);
        assert!((fast.im.to_f64() - ball.im.to_f64()).abs() < 1e-25);
        // negative real part goes through the recurrence shifts; dyadic
        // coordinates keep the functional equation exact in binary
        let z = Cx::from_f64(-2.25, 0.75, prec);
        let g = ln_gamma_cx(&z, prec).exp();
        // Gamma(z+3) = (z+2)(z+1)z Gamma(z)
        let z3 = Cx::from_f64(0.75, 0.75, prec);
        let g3 = ln_gamma_cx(&z3, prec).exp();
        let prod = Cx::from_f64(-0.25, 0.75, prec)
            .mul(&Cx::from_f64(-1.25, 0.75, prec))
            .mul(&Cx::from_f64(-2.25, 0.75, prec))
            .mul(&g);
        assert!((prod.re.to_f64() - g3.re.to_f64()).abs() < 1e-20);
        assert!((prod.im.to_f64() - g3.im.to_f64()).abs() < 1e-20);
    }
}
