//! Mellin–Barnes continuation: rigorous contour quadrature of the integral
//! representation, the small-argument lacunary series, and the symbolic
//! residue sum for the large-argument regime (with log terms at higher-order
//! poles).

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::constant::SymbolicConstant;
use crate::cyclotomic::Cyc;
use crate::eps::{EpsSeries, LogPoly, RingElem};
use crate::exact::{Int, Rat};
use crate::numeric::{gamma_rat, ComplexBall, RealBall};
use rug::Float;
use crate::{Error, Result};

type Sc = SymbolicConstant;
type ScSeries = EpsSeries<Sc>;

/// Parameters of the integral `I_p(zeta; a, alpha)`: degree `d`, nonnegative
/// integer vector `a` with `|a| = d`, parameter vector `alpha`, residue
/// shift `p`, and the separating contour abscissa.
#[derive(Debug, Clone)]
pub struct MellinBarnesSpec {
    pub d: i64,
    pub a: Vec<Int>,
    pub alpha: Vec<Rat>,
    pub p: i64,
    pub abscissa: Rat,
}

impl MellinBarnesSpec {
    /// Choose the contour abscissa separating the left pole family
    /// `{-k - p/d}` from the right family `{alpha_j/a_j - p/d + k/a_j}`.
    pub fn new(d: i64, a: Vec<Int>, alpha: Vec<Rat>, p: i64) -> Result<Self> {
        if a.len() != alpha.len() {
            return Err(Error::Malformed("a and alpha lengths differ".into()));
        }
        let total: Int = a.iter().cloned().sum();
        if total != Int::from(d) {
            return Err(Error::Malformed("|a| must equal d".into()));
        }
        if !(0..d).contains(&p) {
            return Err(Error::Malformed("p must satisfy 0 <= p < d".into()));
        }
        let pd = Rat::new(Int::from(p), Int::from(d));
        let max_left = -pd.clone();
        let mut min_right: Option<Rat> = None;
        for (aj, alj) in a.iter().zip(&alpha) {
            if aj.is_zero() {
                continue;
            }
            let v = alj / Rat::from_integer(aj.clone()) - &pd;
            min_right = Some(match min_right {
                None => v,
                Some(m) => {
                    if v < m {
                        v
                    } else {
                        m
                    }
                }
            });
        }
        let min_right = min_right
            .ok_or_else(|| Error::Malformed("no positive entries in a".into()))?;
        if min_right <= max_left {
            return Err(Error::Pole(format!(
                "contour pinched: right family starts at {min_right} left family ends at {max_left}"
            )));
        }
        let abscissa = (&max_left + &min_right) / Rat::from_integer(Int::from(2));
        Ok(MellinBarnesSpec {
            d,
            a,
            alpha,
            p,
            abscissa,
        })
    }

    /// Sector check: `|arg(e^{-pi i/d} zeta)| < pi/d`, returning the decay
    /// margin `kappa = pi - d |arg zeta'|` (lower bound).
    fn sector_margin(&self, zeta: &ComplexBall, prec: u32) -> Result<RealBall> {
        let zp = self.zeta_prime(zeta, prec);
        let arg = zp.im.atan2(&zp.re).abs();
        let pi = RealBall::pi(prec);
        let margin = pi.sub(&arg.mul_i64(self.d));
        if margin.to_f64() <= 0.0 {
            return Err(Error::Malformed(format!(
                "zeta outside the convergence sector (margin {:.3})",
                margin.to_f64()
            )));
        }
        Ok(margin)
    }

    /// `zeta' = e^{-pi i/d} zeta`.
    pub fn zeta_prime(&self, zeta: &ComplexBall, prec: u32) -> ComplexBall {
        let angle = RealBall::pi(prec).div(&RealBall::from_int(self.d, prec)).neg();
        let phase = ComplexBall {
            re: angle.cos(),
            im: angle.sin(),
        };
        phase.mul(zeta)
    }

    /// The integrand `f(c + i t)` on plain high-precision complexes.
    fn integrand_fast(
        &self,
        t: &rug::Float,
        ln_zeta_p: &crate::numeric::fastcx::Cx,
        prec: u32,
    ) -> crate::numeric::fastcx::Cx {
        use crate::numeric::fastcx::{ln_gamma_cx, Cx};
        let c = crate::numeric::rat_to_float(&self.abscissa, prec);
        let s = Cx::new(c, t.clone());
        let ds = s.mul_f(&rug::Float::with_val(prec, self.d));
        let mut acc = ln_gamma_cx(&ds, prec);
        for (aj, alj) in self.a.iter().zip(&self.alpha) {
            let shift = crate::numeric::rat_to_float(
                &(alj - Rat::new(Int::from(self.p) * aj, Int::from(self.d))),
                prec,
            );
            let ajf = crate::numeric::int_to_float(aj, prec);
            let arg = Cx::new(
                rug::Float::with_val(prec, &shift - rug::Float::with_val(prec, &s.re * &ajf)),
                rug::Float::with_val(prec, -rug::Float::with_val(prec, &s.im * &ajf)),
            );
            acc = acc.add(&ln_gamma_cx(&arg, prec));
        }
        let exponent = ds
            .neg()
            .sub(&Cx::from_rat(&Rat::from_integer(Int::from(self.p)), prec));
        acc = acc.add(&exponent.mul(ln_zeta_p));
        let mut value = acc.exp();
        let pi = rug::Float::with_val(prec, rug::float::Constant::Pi);
        for i in 1..self.d {
            let shift = crate::numeric::rat_to_float(
                &Rat::new(Int::from(self.p + i), Int::from(self.d)),
                prec,
            );
            let arg = Cx::new(
                rug::Float::with_val(prec, &s.re + &shift) * &pi,
                rug::Float::with_val(prec, &s.im * &pi),
            );
            value = value.mul(&arg.sin());
        }
        value
    }
}

/// Quadrature of `I_p(zeta)` over the truncated contour: plain-float
/// midpoints, radius assembled from the refinement differences, the decay
/// tail bound, and a roundoff allowance.
pub fn mb_eval(spec: &MellinBarnesSpec, zeta: &ComplexBall, prec: u32) -> Result<ComplexBall> {
    use crate::numeric::fastcx::{gauss_legendre_fast, Cx};
    let work = prec + 64;
    let margin = spec.sector_margin(zeta, work)?;
    let kappa = margin.to_f64();
    let lzp_ball = spec.zeta_prime(zeta, work).ln();
    let ln_zeta_p = Cx::new(lzp_ball.re.mid.clone(), lzp_ball.im.mid.clone());
    // truncation height: |f(c +- iH)| * 8 / kappa < 2^-(prec+6)
    let mut h = 10.0f64;
    let target = 2f64.powi(-(prec as i32) - 6);
    let mut tail;
    loop {
        let fh_up = spec
            .integrand_fast(&rug::Float::with_val(work, h), &ln_zeta_p, work)
            .abs()
            .to_f64();
        let fh_dn = spec
            .integrand_fast(&rug::Float::with_val(work, -h), &ln_zeta_p, work)
            .abs()
            .to_f64();
        tail = (fh_up + fh_dn) * 8.0 / kappa;
        if tail < target || h > 1e6 {
            break;
        }
        h *= 1.5;
    }
    if tail >= target {
        return Err(Error::Numeric("contour tail does not certify".into()));
    }
    let a = rug::Float::with_val(work, -h);
    let b = rug::Float::with_val(work, h);
    let f = |t: &rug::Float| spec.integrand_fast(t, &ln_zeta_p, work);
    let (integral, diff_est) =
        gauss_legendre_fast(&f, &a, &b, work, -(prec as i32) - 10, 24);
    // prefactor: (-1)^p 2^{d-1} / (2 pi)
    let two_pi = rug::Float::with_val(work, rug::float::Constant::Pi) * 2u32;
    let mut scale = rug::Float::with_val(work, 1u64 << ((spec.d - 1).min(62) as u32));
    scale /= &two_pi;
    if spec.p % 2 == 1 {
        scale = -scale;
    }
    let value = integral.mul_f(&scale);
    // radius: tail + refinement differences + roundoff allowance
    let roundoff = value.abs().to_f64().abs().max(1.0) * 2f64.powi(-(work as i32) + 24)
        * (2.0 * h);
    let rad_total = tail + diff_est * scale.to_f64().abs() + roundoff;
    let rad = rug::Float::with_val(32, rad_total);
    Ok(ComplexBall {
        re: RealBall::with_rad(Float::with_val(prec, &value.re), rad.clone()),
        im: RealBall::with_rad(Float::with_val(prec, &value.im), rad),
    })
}

/// The lacunary series `sum_k Gamma(alpha + k a)/Gamma(1 + p + d k)
/// zeta^{dk}` for small `|zeta|`.
pub fn lacunary_series_eval(
    spec: &MellinBarnesSpec,
    zeta: &ComplexBall,
    prec: u32,
) -> Result<ComplexBall> {
    let work = prec + 32;
    let mut acc = ComplexBall::zero(work);
    let zd = zeta.pow_i64(spec.d);
    let mut zpow = ComplexBall::one(work);
    let mut last_mag = f64::INFINITY;
    for k in 0..20_000i64 {
        let mut term = RealBall::one(work);
        for (aj, alj) in spec.a.iter().zip(&spec.alpha) {
            let arg = alj + Rat::from_integer(aj * Int::from(k));
            term = term.mul(&gamma_rat(&arg, work));
        }
        // 1 / (p + dk)!
        let mut fact = RealBall::one(work);
        for j in 1..=(spec.p + spec.d * k) {
            fact = fact.mul_i64(j);
        }
        let full = zpow.mul_real(&term.div(&fact));
        acc = acc.add(&full);
        let mag = full.abs().abs_upper().to_f64();
        if mag < 2f64.powi(-(prec as i32) - 16) && k > 2 {
            return Ok(acc);
        }
        if k > 50 && mag > last_mag * 4.0 {
            return Err(Error::Numeric(
                "lacunary series diverges at this argument".into(),
            ));
        }
        last_mag = mag;
        zpow = zpow.mul(&zd);
    }
    Err(Error::Numeric("lacunary series did not converge".into()))
}

/// One residue term: `coeff * zeta^{exponent} (log zeta)^{log_degree}`.
#[derive(Debug, Clone)]
pub struct ResidueTerm {
    pub exponent: Rat,
    pub log_degree: u32,
    pub coeff: SymbolicConstant,
}

/// Expansion of `Gamma(x0 + lambda t)` as a Laurent series in `t`.
fn gamma_factor_series(x0: &Rat, lambda: &Rat, trunc: i64) -> Result<ScSeries> {
    let lam = ScSeries::monomial(Sc::from_rat(lambda.clone()), 1, trunc);
    // exp(sum_{m>=1} psi^{(m-1)}(arg) (lambda t)^m / m!)
    let psi_exp = |arg: &Rat| -> Result<ScSeries> {
        let mut acc = ScSeries::zero(trunc);
        let mut pow = ScSeries::from_const(Sc::one(), trunc);
        let mut fact = Rat::one();
        for m in 1..=trunc.max(1) {
            pow = pow.mul(&lam);
            if pow.is_zero() {
                break;
            }
            fact = fact * Rat::from_integer(Int::from(m as u64));
            let psi = if m == 1 {
                Sc::psi0_raw(arg)?
            } else {
                Sc::psi(m as u32 - 1, arg)?
            };
            let invf = Rat::new(fact.denom().clone(), fact.numer().clone());
            acc = acc.add(&pow.scale(&psi).scale_rat(&invf));
        }
        Ok(acc.exp())
    };
    if !(x0.is_integer() && !x0.is_positive()) {
        let head = Sc::gamma(x0)?;
        return Ok(psi_exp(x0)?.scale(&head));
    }
    // Gamma(x0 + u) = Gamma(1 + u) / prod_{j=0}^{-x0} (x0 + j + u)
    let k = (-x0.to_integer()).to_i64().unwrap();
    let mut denom = ScSeries::from_const(Sc::one(), trunc);
    for j in 0..=k {
        let base = x0 + Rat::from_integer(Int::from(j));
        let factor = ScSeries::from_const(Sc::from_rat(base), trunc).add(&lam);
        denom = denom.mul(&factor);
    }
    let head = psi_exp(&Rat::one())?;
    let inv = denom
        .invert()
        .ok_or_else(|| Error::Internal("gamma pole factor not invertible".into()))?;
    Ok(head.mul(&inv))
}

/// Expansion of `sin(pi (x0 + t))` in `t` with exact cyclotomic leading
/// values.
fn sin_factor_series(x0: &Rat, trunc: i64) -> ScSeries {
    // sin(pi x0) cos(pi t) + cos(pi x0) sin(pi t)
    let sin0 = Sc::from_cyc(Cyc::sin_pi(x0));
    let cos0 = Sc::from_cyc(Cyc::cos_pi(x0));
    let mut acc = ScSeries::zero(trunc);
    // cos(pi t) = sum (-1)^k pi^{2k} t^{2k} / (2k)!
    let mut fact = Rat::one();
    for m in 0..trunc.max(1) {
        if m > 0 {
            fact = fact * Rat::from_integer(Int::from(m as u64));
        }
        let invf = Rat::new(fact.denom().clone(), fact.numer().clone());
        let pim = Sc::pi_pow(m).scale_rat(&invf);
        let sign = if (m / 2) % 2 == 0 { 1 } else { -1 };
        let coeff = if m % 2 == 0 {
            sin0.mul(&pim).scale_rat(&Rat::from_integer(Int::from(sign)))
        } else {
            cos0.mul(&pim).scale_rat(&Rat::from_integer(Int::from(sign)))
        };
        acc = acc.add(&ScSeries::monomial(coeff, m, trunc));
    }
    acc
}

/// Symbolic residue sum over the right pole family up to `s <= s_max`,
/// emitted as terms in `zeta` with log powers from higher-order poles.
pub fn mb_residue_sum(spec: &MellinBarnesSpec, s_max: &Rat) -> Result<Vec<ResidueTerm>> {
    let d = spec.d;
    let pd = Rat::new(Int::from(spec.p), Int::from(d));
    // collect pole locations from each Gamma(alpha_j - (p/d) a_j - a_j s)
    let mut poles: BTreeMap<Rat, ()> = BTreeMap::new();
    for (aj, alj) in spec.a.iter().zip(&spec.alpha) {
        if aj.is_zero() {
            continue;
        }
        let ajr = Rat::from_integer(aj.clone());
        let mut k = Int::zero();
        loop {
            let s0 = (alj + Rat::from_integer(k.clone())) / ajr.clone() - &pd;
            if &s0 > s_max {
                break;
            }
            if s0 > spec.abscissa {
                poles.insert(s0, ());
            }
            k += 1;
        }
    }
    let mut out: Vec<ResidueTerm> = Vec::new();
    for (s0, _) in poles {
        // pole order bookkeeping
        let mut order: i64 = 0;
        let ds0 = Rat::from_integer(Int::from(d)) * &s0;
        if ds0.is_integer() && !ds0.is_positive() {
            order += 1;
        }
        for (aj, alj) in spec.a.iter().zip(&spec.alpha) {
            if aj.is_zero() {
                continue;
            }
            let arg = alj - &pd * Rat::from_integer(aj.clone())
                - Rat::from_integer(aj.clone()) * &s0;
            if arg.is_integer() && !arg.is_positive() {
                order += 1;
            }
        }
        let mut sin_zeros = 0i64;
        for i in 1..d {
            let base = &s0 + Rat::new(Int::from(spec.p + i), Int::from(d));
            if base.is_integer() {
                sin_zeros += 1;
            }
        }
        let net_order = order - sin_zeros;
        if net_order <= 0 {
            continue;
        }
        let trunc = net_order + 3;
        // build the local Laurent expansion as EpsSeries<LogPoly> in t
        let mut prod: EpsSeries<LogPoly> = EpsSeries::from_const(LogPoly::ring_one(), trunc);
        let lift =
            |s: &ScSeries| -> EpsSeries<LogPoly> { s.map(|c| LogPoly::constant(c.clone(), 1)) };
        // Gamma(d s0 + d t)
        let g0 = gamma_factor_series(&ds0, &Rat::from_integer(Int::from(d)), trunc)?;
        prod = prod.mul(&lift(&g0));
        // sine factors
        for i in 1..d {
            let base = &s0 + Rat::new(Int::from(spec.p + i), Int::from(d));
            let sf = sin_factor_series(&base, trunc);
            prod = prod.mul(&lift(&sf));
        }
        // Gamma(alpha_j - (p/d)a_j - a_j s0 - a_j t)
        for (aj, alj) in spec.a.iter().zip(&spec.alpha) {
            let arg0 = alj - &pd * Rat::from_integer(aj.clone())
                - Rat::from_integer(aj.clone()) * &s0;
            let lam = -Rat::from_integer(aj.clone());
            if aj.is_zero() {
                // constant Gamma(alpha_j)
                let g = Sc::gamma(alj)?;
                prod = prod.mul(&EpsSeries::from_const(LogPoly::constant(g, 1), trunc));
            } else {
                let gs = gamma_factor_series(&arg0, &lam, trunc)?;
                prod = prod.mul(&lift(&gs));
            }
        }
        // power factor: zeta'^{-d s0 - p} exp(-d t log zeta')
        let log_gen = LogPoly {
            terms: [(vec![1u32], Sc::from_int(-d))].into_iter().collect(),
        };
        let expf = EpsSeries::monomial(log_gen, 1, trunc).exp();
        prod = prod.mul(&expf);
        // residue: coefficient of t^{-1}
        let res = prod.coefficient(-1);
        if res.is_ring_zero() {
            continue;
        }
        let e0 = -(Rat::from_integer(Int::from(d)) * &s0) - Rat::from_integer(Int::from(spec.p));
        // overall prefactor (-1)^{p+1} 2^{d-1}
        let mut pref = Sc::from_int(1 << (d - 1).min(62));
        if spec.p % 2 == 0 {
            pref = pref.neg();
        }
        // phase zeta'^{e0} = e^{-i pi e0 / d} zeta^{e0}; log zeta' = log zeta - i pi/d
        let phase = root_from_half_turns(&(-&e0 / Rat::from_integer(Int::from(d))));
        for (l, c) in res.terms {
            let j = l.first().cloned().unwrap_or(0);
            // (log zeta')^j = sum_i C(j,i) (log zeta)^i (-i pi/d)^{j-i}
            for i in 0..=j {
                let binom = binomial(j as i64, i as i64);
                let extra = j - i;
                // (-i pi / d)^{extra}
                let mut factor = Sc::pi_pow(extra as i64)
                    .scale_cyc(&Cyc::i().neg().pow(extra as i64))
                    .scale_rat(&Rat::new(Int::one(), Int::from(d)).pow_helper(extra));
                factor = factor.scale_rat(&Rat::from_integer(binom));
                let coeff = pref
                    .mul(&c)
                    .mul(&factor)
                    .scale_cyc(&phase);
                if coeff.is_zero() {
                    continue;
                }
                if coeff.contains_euler_tracker() {
                    return Err(Error::Internal(
                        "psi(1) tracker failed to cancel in the residue engine".into(),
                    ));
                }
                merge_term(
                    &mut out,
                    ResidueTerm {
                        exponent: e0.clone(),
                        log_degree: i,
                        coeff,
                    },
                );
            }
        }
    }
    out.sort_by(|x, y| {
        y.exponent
            .cmp(&x.exponent)
            .then(x.log_degree.cmp(&y.log_degree))
    });
    Ok(out)
}

trait PowHelper {
    fn pow_helper(&self, e: u32) -> Rat;
}

impl PowHelper for Rat {
    fn pow_helper(&self, e: u32) -> Rat {
        let mut acc = Rat::one();
        for _ in 0..e {
            acc = acc * self.clone();
        }
        acc
    }
}

fn binomial(n: i64, k: i64) -> Int {
    let mut acc = Int::one();
    for j in 0..k {
        acc = acc * Int::from(n - j) / Int::from(j + 1);
    }
    acc
}

fn merge_term(out: &mut Vec<ResidueTerm>, term: ResidueTerm) {
    for t in out.iter_mut() {
        if t.exponent == term.exponent && t.log_degree == term.log_degree {
            t.coeff = t.coeff.add(&term.coeff);
            return;
        }
    }
    out.push(term);
}

/// `e^{pi i x}` for rational `x` (half turns).
fn root_from_half_turns(x: &Rat) -> Cyc {
    // e^{pi i x} = e^{2 pi i (x/2)}
    let half = x / Rat::from_integer(Int::from(2));
    let num = half.numer().clone();
    let den = half.denom().to_u32().expect("small denominator");
    let j = num.mod_floor(&Int::from(den)).to_i64().unwrap();
    Cyc::root_of_unity(j, den)
}

/// Numeric evaluation of a residue-term list at a point (principal
/// logarithm).
pub fn residue_sum_eval(
    terms: &[ResidueTerm],
    zeta: &ComplexBall,
    prec: u32,
) -> Result<ComplexBall> {
    let env = crate::constant::SymbolEnv::default();
    let lz = zeta.ln();
    let mut acc = ComplexBall::zero(prec);
    for t in terms {
        let mut v = t.coeff.eval(prec, &env)?;
        v = v.mul(&zeta.pow_rat(&t.exponent));
        v = v.mul(&lz.pow_i64(t.log_degree as i64));
        acc = acc.add(&v);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn d2_spec(p: i64) -> MellinBarnesSpec {
        MellinBarnesSpec::new(2, vec![int(1), int(1)], vec![rat(1, 2), rat(1, 2)], p).unwrap()
    }

    #[test]
    fn abscissa_selection() {
        let s0 = d2_spec(0);
        assert_eq!(s0.abscissa, rat(1, 4));
        let s1 = d2_spec(1);
        assert_eq!(s1.abscissa, rat(-1, 4));
    }

    #[test]
    fn series_vs_quadrature_d2_p0() {
        let prec = 96;
        let spec = d2_spec(0);
        // zeta on the sector center: arg(zeta) = pi/2
        for mag in [0.3f64, 0.7] {
            let zeta = ComplexBall {
                re: RealBall::zero(prec),
                im: RealBall::from_rat(&approx_rat(mag), prec),
            };
            let series = lacunary_series_eval(&spec, &zeta, prec).unwrap();
            let quad = mb_eval(&spec, &zeta, prec).unwrap();
            let diff = series.sub(&quad).abs().to_f64();
            assert!(diff < 1e-11, "mag {mag}: diff {diff:e}");
            // closed form pi (1 - zeta^2/4)^{-1/2}
            let closed = closed_form_p0(&zeta, prec);
            let diff2 = closed.sub(&quad).abs().to_f64();
            assert!(diff2 < 1e-11, "closed form diff {diff2:e}");
        }
    }

    fn approx_rat(x: f64) -> Rat {
        Rat::new(Int::from((x * 1_000_000.0) as i64), Int::from(1_000_000))
    }

    fn closed_form_p0(zeta: &ComplexBall, prec: u32) -> ComplexBall {
        // pi (1 - zeta^2/4)^{-1/2}
        let one = ComplexBall::one(prec);
        let z2 = zeta.mul(zeta).mul_real(&RealBall::from_rat(&rat(1, 4), prec));
        let inner = one.sub(&z2);
        ComplexBall::from_real(RealBall::pi(prec)).mul(&inner.pow_rat(&rat(-1, 2)))
    }

    #[test]
    fn residues_vs_quadrature_d2_p0() {
        let prec = 96;
        let spec = d2_spec(0);
        let terms = mb_residue_sum(&spec, &rat(33, 1)).unwrap();
        assert!(!terms.is_empty());
        for mag in [3.0f64, 6.0] {
            let zeta = ComplexBall {
                re: RealBall::zero(prec),
                im: RealBall::from_rat(&approx_rat(mag), prec),
            };
            let quad = mb_eval(&spec, &zeta, prec).unwrap();
            let res = residue_sum_eval(&terms, &zeta, prec).unwrap();
            let diff = quad.sub(&res).abs().to_f64();
            assert!(diff < 1e-10, "mag {mag}: diff {diff:e}");
        }
    }

    #[test]
    fn residues_carry_logs_for_double_poles_p1() {
        let spec = d2_spec(1);
        let terms = mb_residue_sum(&spec, &rat(33, 1)).unwrap();
        // alpha = (1/2, 1/2) coincident: double poles -> log terms
        assert!(terms.iter().any(|t| t.log_degree >= 1));
        // three-way agreement via quadrature at large |zeta|
        let prec = 96;
        for mag in [3.0f64, 6.0] {
            let zeta = ComplexBall {
                re: RealBall::zero(prec),
                im: RealBall::from_rat(&approx_rat(mag), prec),
            };
            let quad = mb_eval(&spec, &zeta, prec).unwrap();
            let res = residue_sum_eval(&terms, &zeta, prec).unwrap();
            let diff = quad.sub(&res).abs().to_f64();
            assert!(diff < 1e-10, "mag {mag}: diff {diff:e}");
        }
        // small zeta: series vs quadrature
        let prec = 96;
        let zeta = ComplexBall {
            re: RealBall::zero(prec),
            im: RealBall::from_rat(&rat(1, 2), prec),
        };
        let series = lacunary_series_eval(&spec, &zeta, prec).unwrap();
        let quad = mb_eval(&spec, &zeta, prec).unwrap();
        assert!(series.sub(&quad).abs().to_f64() < 1e-12);
    }
}
