//! The symbolic ring of limiting-period constants: monomials in Gamma and
//! polygamma values at rationals, powers of pi, formal logarithms and
//! L-values, with coefficients in a cyclotomic field.
//!
//! Canonical form:
//! * Gamma arguments lie in (0,1); integer shifts are folded into the
//!   rational coefficient through the functional equation, so two
//!   constructions differing by integer shifts compare equal structurally;
//! * psi^(0) appears only as the difference `psi^(0)(q) - psi^(0)(1)`
//!   (arguments in (0,1]); `psi^(0)(1)` itself is tracked by a separate
//!   internal generator that must cancel before a value is reported;
//! * psi^(k), k >= 1, arguments lie in (0,1];
//! * roots of unity, `2 i`, and sine/cosine values at rational multiples of
//!   pi live in the cyclotomic coefficient, never in the monomial;
//! * `sin(pi q)` nodes rewrite to `pi Gamma(q)^{-1} Gamma(1-q)^{-1}`.

mod expr;
mod psi;
mod report;

pub use expr::{normalize, ConstExpr, RatJson};
pub use psi::{
    all_characters, l_value_from_psi, psi_to_log_l, DirichletCharacter, PsiRewrite,
};
pub use report::{in_ring_report, Extension, MonomialVerdict, RingReport};

use std::collections::BTreeMap;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cyclotomic::Cyc;
use crate::exact::{Int, Rat};
use crate::numeric::{
    digamma_rat, euler_constant, gamma_rat, polygamma_rat, ComplexBall, RealBall,
};
use crate::{Error, Result};

/// A single transcendental generator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Gen {
    /// pi
    Pi,
    /// psi^(0)(1); internal bookkeeping generator, must cancel in outputs
    EulerPsiOne,
    /// Gamma(q), q in (0,1)
    Gamma(Rat),
    /// psi^(0)(q) - psi^(0)(1), q in (0,1]
    PsiDiff0(Rat),
    /// psi^(k)(q), k >= 1, q in (0,1]
    Psi(u32, Rat),
    /// log p for a prime p
    LogPrime(u64),
    /// log of a positive real cyclotomic number (canonical form)
    LogCyc(Cyc),
    /// log of a named base-field unit (e.g. an arc initial coefficient)
    LogSym(String),
    /// `name^(1/root)`: formal root of a named unit
    InitialRoot(String, u32),
    /// L(k, chi)
    LValue(u32, DirichletCharacter),
}

/// A product of generator powers, sorted, without zero exponents.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Monomial(pub Vec<(Gen, i64)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn single(g: Gen, e: i64) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(g, e)])
        }
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let mut map: BTreeMap<Gen, i64> = BTreeMap::new();
        for (g, e) in self.0.iter().chain(&o.0) {
            *map.entry(g.clone()).or_insert(0) += e;
        }
        Monomial(map.into_iter().filter(|(_, e)| *e != 0).collect())
    }

    pub fn inv(&self) -> Monomial {
        Monomial(self.0.iter().map(|(g, e)| (g.clone(), -e)).collect())
    }

    pub fn exponent_of(&self, g: &Gen) -> i64 {
        self.0
            .iter()
            .find(|(h, _)| h == g)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }
}

/// An element of the constant ring: a finite sum of monomials with
/// cyclotomic coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SymbolicConstant {
    pub terms: BTreeMap<Monomial, Cyc>,
}

impl SymbolicConstant {
    pub fn zero() -> Self {
        SymbolicConstant {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        SymbolicConstant::from_rat(Rat::one())
    }

    pub fn from_rat(r: Rat) -> Self {
        SymbolicConstant::from_cyc(Cyc::from_rat(r))
    }

    pub fn from_int(v: i64) -> Self {
        SymbolicConstant::from_rat(Rat::from_integer(Int::from(v)))
    }

    pub fn from_cyc(c: Cyc) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        SymbolicConstant { terms }
    }

    pub fn from_monomial(m: Monomial, c: Cyc) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        SymbolicConstant { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn to_rat(&self) -> Option<Rat> {
        if self.is_zero() {
            return Some(Rat::zero());
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            if m.0.is_empty() {
                return c.to_rat();
            }
        }
        None
    }

    pub fn add(&self, o: &SymbolicConstant) -> SymbolicConstant {
        let mut terms = self.terms.clone();
        for (m, c) in &o.terms {
            let entry = terms.entry(m.clone()).or_insert_with(Cyc::zero);
            *entry = entry.add(c);
            if entry.is_zero() {
                terms.remove(m);
            }
        }
        SymbolicConstant { terms }
    }

    pub fn sub(&self, o: &SymbolicConstant) -> SymbolicConstant {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> SymbolicConstant {
        SymbolicConstant {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn mul(&self, o: &SymbolicConstant) -> SymbolicConstant {
        let mut out = SymbolicConstant::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let m = m1.mul(m2);
                let c = c1.mul(c2);
                let entry = out.terms.entry(m.clone()).or_insert_with(Cyc::zero);
                *entry = entry.add(&c);
                if entry.is_zero() {
                    out.terms.remove(&m);
                }
            }
        }
        out
    }

    pub fn scale_rat(&self, r: &Rat) -> SymbolicConstant {
        if r.is_zero() {
            return SymbolicConstant::zero();
        }
        SymbolicConstant {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.scale(r)))
                .collect(),
        }
    }

    pub fn scale_cyc(&self, s: &Cyc) -> SymbolicConstant {
        if s.is_zero() {
            return SymbolicConstant::zero();
        }
        SymbolicConstant {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.mul(s)))
                .collect(),
        }
    }

    /// Inverse, defined for single-monomial constants only.
    pub fn invert_monomial(&self) -> Result<SymbolicConstant> {
        if self.terms.len() != 1 {
            return Err(Error::Malformed(
                "only monomial symbolic constants are invertible".into(),
            ));
        }
        let (m, c) = self.terms.iter().next().unwrap();
        Ok(SymbolicConstant::from_monomial(m.inv(), c.inv()))
    }

    pub fn pow_i64(&self, e: i64) -> Result<SymbolicConstant> {
        if e == 0 {
            return Ok(SymbolicConstant::one());
        }
        let base = if e < 0 {
            self.invert_monomial()?
        } else {
            self.clone()
        };
        let mut acc = SymbolicConstant::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    // ------------------------------------------------------------------
    // constructors for the individual generators
    // ------------------------------------------------------------------

    pub fn pi_pow(e: i64) -> SymbolicConstant {
        SymbolicConstant::from_monomial(Monomial::single(Gen::Pi, e), Cyc::one())
    }

    /// `(2 pi i)^e`
    pub fn two_pi_i_pow(e: i64) -> SymbolicConstant {
        let two_i = Cyc::i().mul(&Cyc::from_int(2));
        SymbolicConstant::from_monomial(Monomial::single(Gen::Pi, e), two_i.pow(e))
    }

    /// `zeta_order^j`
    pub fn root_of_unity(j: i64, order: u32) -> SymbolicConstant {
        SymbolicConstant::from_cyc(Cyc::root_of_unity(j, order))
    }

    /// Gamma(q) with the argument shifted into (0,1); errors at nonpositive
    /// integers.
    pub fn gamma(q: &Rat) -> Result<SymbolicConstant> {
        if q.is_integer() {
            let n = q.to_integer();
            if !n.is_positive() {
                return Err(Error::Pole(format!("Gamma({q})")));
            }
            // (n-1)!
            let mut f = Rat::one();
            let mut k = Int::one();
            while &k < &n {
                f = f * Rat::from_integer(k.clone());
                k += 1;
            }
            return Ok(SymbolicConstant::from_rat(f));
        }
        let (q0, shift) = frac_part(q);
        // Gamma(q0 + shift) = (q0)_shift Gamma(q0) for shift >= 0
        // Gamma(q0 - s) = Gamma(q0) / ((q0-1)(q0-2)...(q0-s))
        let mut factor = Rat::one();
        if shift >= 0 {
            for j in 0..shift {
                factor = factor * (q0.clone() + Rat::from_integer(Int::from(j)));
            }
        } else {
            for j in 1..=(-shift) {
                factor = factor / (q0.clone() - Rat::from_integer(Int::from(j)));
            }
        }
        Ok(SymbolicConstant::from_monomial(
            Monomial::single(Gen::Gamma(q0), 1),
            Cyc::from_rat(factor),
        ))
    }

    /// `1/Gamma(q)`: zero at nonpositive integers.
    pub fn gamma_inv(q: &Rat) -> SymbolicConstant {
        if q.is_integer() && !q.to_integer().is_positive() {
            return SymbolicConstant::zero();
        }
        SymbolicConstant::gamma(q)
            .expect("pole handled above")
            .invert_monomial()
            .expect("gamma is monomial")
    }

    /// `sin(pi q)` rewritten through the reflection formula into
    /// `pi Gamma^{-1} Gamma^{-1}`; zero at integers.
    pub fn sin_pi_gamma(q: &Rat) -> SymbolicConstant {
        if q.is_integer() {
            return SymbolicConstant::zero();
        }
        let (q0, shift) = frac_part(q);
        let sign = if shift.rem_euclid(2) == 0 {
            Rat::one()
        } else {
            -Rat::one()
        };
        let one_minus = Rat::one() - q0.clone();
        let m = Monomial::single(Gen::Pi, 1)
            .mul(&Monomial::single(Gen::Gamma(q0), -1))
            .mul(&Monomial::single(Gen::Gamma(one_minus), -1));
        SymbolicConstant::from_monomial(m, Cyc::from_rat(sign))
    }

    /// `sin(pi q)` as an exact cyclotomic scalar.
    pub fn sin_pi_cyc(q: &Rat) -> SymbolicConstant {
        SymbolicConstant::from_cyc(Cyc::sin_pi(q))
    }

    /// `cos(pi q)` as an exact cyclotomic scalar.
    pub fn cos_pi_cyc(q: &Rat) -> SymbolicConstant {
        SymbolicConstant::from_cyc(Cyc::cos_pi(q))
    }

    /// `psi^(0)(q) - psi^(0)(1)` with the argument shifted into (0,1].
    pub fn psi_diff0(q: &Rat) -> Result<SymbolicConstant> {
        if q.is_integer() && !q.to_integer().is_positive() {
            return Err(Error::Pole(format!("psi(0) at {q}")));
        }
        let (q0, shift) = frac_part_half_open(q);
        // psi(q0 + s) = psi(q0) + sum_{j=0}^{s-1} 1/(q0+j)
        let mut harmonic = Rat::zero();
        if shift >= 0 {
            for j in 0..shift {
                harmonic = harmonic + Rat::one() / (q0.clone() + Rat::from_integer(Int::from(j)));
            }
        } else {
            for j in 1..=(-shift) {
                harmonic = harmonic - Rat::one() / (q0.clone() - Rat::from_integer(Int::from(j)));
            }
        }
        let mut out = SymbolicConstant::from_rat(harmonic);
        if q0 != Rat::one() {
            out = out.add(&SymbolicConstant::from_monomial(
                Monomial::single(Gen::PsiDiff0(q0), 1),
                Cyc::one(),
            ));
        }
        Ok(out)
    }

    /// Raw `psi^(0)(q)` as `PsiDiff0 + EulerPsiOne`; the EulerPsiOne part
    /// must cancel before results are reported.
    pub fn psi0_raw(q: &Rat) -> Result<SymbolicConstant> {
        Ok(SymbolicConstant::psi_diff0(q)?.add(&SymbolicConstant::from_monomial(
            Monomial::single(Gen::EulerPsiOne, 1),
            Cyc::one(),
        )))
    }

    /// `psi^(k)(q)` for `k >= 1`, argument shifted into (0,1].
    pub fn psi(k: u32, q: &Rat) -> Result<SymbolicConstant> {
        assert!(k >= 1);
        if q.is_integer() && !q.to_integer().is_positive() {
            return Err(Error::Pole(format!("psi({k}) at {q}")));
        }
        let (q0, shift) = frac_part_half_open(q);
        // psi^(k)(x+1) = psi^(k)(x) + (-1)^k k! / x^{k+1}
        let mut fact = Rat::one();
        for i in 1..=k {
            fact = fact * Rat::from_integer(Int::from(i));
        }
        let sign = if k % 2 == 0 { fact } else { -fact };
        let mut extra = Rat::zero();
        if shift >= 0 {
            for j in 0..shift {
                let x = q0.clone() + Rat::from_integer(Int::from(j));
                extra = extra + sign.clone() / pow_rat(&x, k + 1);
            }
        } else {
            for j in 1..=(-shift) {
                let x = q0.clone() - Rat::from_integer(Int::from(j));
                extra = extra - sign.clone() / pow_rat(&x, k + 1);
            }
        }
        let mut out = SymbolicConstant::from_rat(extra);
        out = out.add(&SymbolicConstant::from_monomial(
            Monomial::single(Gen::Psi(k, q0), 1),
            Cyc::one(),
        ));
        Ok(out)
    }

    /// `log r` for a positive rational, decomposed into prime logarithms.
    pub fn log_rat(r: &Rat) -> Result<SymbolicConstant> {
        if !r.is_positive() {
            return Err(Error::Malformed(format!("log of nonpositive rational {r}")));
        }
        let mut out = SymbolicConstant::zero();
        for (p, e) in factor_rat(r)? {
            out = out.add(&SymbolicConstant::from_monomial(
                Monomial::single(Gen::LogPrime(p), 1),
                Cyc::from_rat(Rat::from_integer(Int::from(e))),
            ));
        }
        Ok(out)
    }

    /// `log c` for a real positive cyclotomic number; rational values reduce
    /// to prime logarithms.
    pub fn log_cyc(c: &Cyc) -> Result<SymbolicConstant> {
        if let Some(r) = c.to_rat() {
            return SymbolicConstant::log_rat(&r);
        }
        if c != &c.conj() {
            return Err(Error::Malformed("log of a non-real cyclotomic number".into()));
        }
        Ok(SymbolicConstant::from_monomial(
            Monomial::single(Gen::LogCyc(c.clone()), 1),
            Cyc::one(),
        ))
    }

    pub fn log_sym(name: &str) -> SymbolicConstant {
        SymbolicConstant::from_monomial(
            Monomial::single(Gen::LogSym(name.to_string()), 1),
            Cyc::one(),
        )
    }

    /// `name^{num/root}` as `InitialRoot(name, root)^{num}`.
    pub fn initial_pow(name: &str, num: i64, root: u32) -> SymbolicConstant {
        SymbolicConstant::from_monomial(
            Monomial::single(Gen::InitialRoot(name.to_string(), root), num),
            Cyc::one(),
        )
    }

    pub fn l_value(k: u32, chi: DirichletCharacter) -> SymbolicConstant {
        SymbolicConstant::from_monomial(Monomial::single(Gen::LValue(k, chi), 1), Cyc::one())
    }

    /// Whether the internal psi^(0)(1) tracker appears anywhere.
    pub fn contains_euler_tracker(&self) -> bool {
        self.terms
            .keys()
            .any(|m| m.0.iter().any(|(g, _)| matches!(g, Gen::EulerPsiOne)))
    }

    // ------------------------------------------------------------------
    // numeric evaluation
    // ------------------------------------------------------------------

    /// Rigorous complex enclosure. Named symbols are resolved through `env`.
    pub fn eval(&self, prec: u32, env: &SymbolEnv) -> Result<ComplexBall> {
        let mut acc = ComplexBall::zero(prec);
        for (m, c) in &self.terms {
            let mut term = eval_cyc(c, prec);
            for (g, e) in &m.0 {
                let base = eval_gen(g, prec, env)?;
                term = term.mul(&base.pow_i64(*e));
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }
}

/// Named values for `LogSym` / `InitialRoot` resolution.
#[derive(Debug, Clone, Default)]
pub struct SymbolEnv {
    pub values: BTreeMap<String, Rat>,
}

impl SymbolEnv {
    pub fn with(mut self, name: &str, v: Rat) -> Self {
        self.values.insert(name.to_string(), v);
        self
    }
}

/// Evaluate a cyclotomic number as a complex ball.
pub fn eval_cyc(c: &Cyc, prec: u32) -> ComplexBall {
    if let Some(r) = c.to_rat() {
        return ComplexBall::from_rat(&r, prec);
    }
    let m = c.order();
    let two_pi = RealBall::pi(prec).mul_i64(2);
    let mut acc = ComplexBall::zero(prec);
    for (e, coef) in c.coeffs().iter().enumerate() {
        if coef.is_zero() {
            continue;
        }
        let angle = two_pi.mul(&RealBall::from_rat(
            &Rat::new(Int::from(e as u64), Int::from(m)),
            prec,
        ));
        let z = ComplexBall {
            re: angle.cos(),
            im: angle.sin(),
        };
        acc = acc.add(&z.mul_real(&RealBall::from_rat(coef, prec)));
    }
    acc
}

fn eval_gen(g: &Gen, prec: u32, env: &SymbolEnv) -> Result<ComplexBall> {
    Ok(match g {
        Gen::Pi => ComplexBall::from_real(RealBall::pi(prec)),
        Gen::EulerPsiOne => ComplexBall::from_real(euler_constant(prec).neg()),
        Gen::Gamma(q) => ComplexBall::from_real(gamma_rat(q, prec)),
        Gen::PsiDiff0(q) => {
            let d = digamma_rat(q, prec);
            let d1 = euler_constant(prec).neg();
            ComplexBall::from_real(d.sub(&d1))
        }
        Gen::Psi(k, q) => ComplexBall::from_real(polygamma_rat(*k, q, prec)),
        Gen::LogPrime(p) => {
            ComplexBall::from_real(RealBall::from_int(*p as i64, prec).ln())
        }
        Gen::LogCyc(c) => {
            let v = eval_cyc(c, prec);
            if !v.im.contains_zero() {
                return Err(Error::Numeric("log of a non-real cyclotomic".into()));
            }
            if v.re.to_f64() <= 0.0 {
                return Err(Error::Numeric("log of a nonpositive cyclotomic".into()));
            }
            ComplexBall::from_real(v.re.ln())
        }
        Gen::LogSym(name) => {
            let v = env
                .values
                .get(name)
                .ok_or_else(|| Error::Numeric(format!("unbound symbol {name}")))?;
            if !v.is_positive() {
                return Err(Error::Numeric(format!("log of nonpositive symbol {name}")));
            }
            ComplexBall::from_real(RealBall::from_rat(v, prec).ln())
        }
        Gen::InitialRoot(name, root) => {
            let v = env
                .values
                .get(name)
                .ok_or_else(|| Error::Numeric(format!("unbound symbol {name}")))?;
            let base = ComplexBall::from_rat(v, prec);
            base.pow_rat(&Rat::new(Int::one(), Int::from(*root)))
        }
        Gen::LValue(k, chi) => chi.eval_l(*k, prec),
    })
}

/// Fractional decomposition `q = q0 + shift` with `q0 in (0,1)`.
/// Integer inputs are rejected by the callers.
fn frac_part(q: &Rat) -> (Rat, i64) {
    let floor = q.floor();
    let q0 = q - &floor;
    let shift = floor.to_integer().to_i64().expect("shift fits i64");
    (q0, shift)
}

/// `q = q0 + shift` with `q0 in (0, 1]`.
fn frac_part_half_open(q: &Rat) -> (Rat, i64) {
    if q.is_integer() {
        let shift = (q - Rat::one()).to_integer().to_i64().expect("fits");
        (Rat::one(), shift)
    } else {
        frac_part(q)
    }
}

fn pow_rat(x: &Rat, e: u32) -> Rat {
    let mut acc = Rat::one();
    for _ in 0..e {
        acc = acc * x.clone();
    }
    acc
}

/// Prime factorization of a positive rational with machine-size parts.
fn factor_rat(r: &Rat) -> Result<Vec<(u64, i64)>> {
    let mut out: BTreeMap<u64, i64> = BTreeMap::new();
    let num = r
        .numer()
        .to_u64()
        .ok_or_else(|| Error::Malformed("log argument numerator too large".into()))?;
    let den = r
        .denom()
        .to_u64()
        .ok_or_else(|| Error::Malformed("log argument denominator too large".into()))?;
    for (v, sign) in [(num, 1i64), (den, -1i64)] {
        let mut n = v;
        let mut p = 2u64;
        while p * p <= n {
            while n % p == 0 {
                *out.entry(p).or_insert(0) += sign;
                n /= p;
            }
            p += 1;
        }
        if n > 1 {
            *out.entry(n).or_insert(0) += sign;
        }
    }
    Ok(out.into_iter().filter(|(_, e)| *e != 0).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn gamma_shift_normalization() {
        // Gamma(7/3) = (4/3)(1/3) Gamma(1/3)
        let g = SymbolicConstant::gamma(&rat(7, 3)).unwrap();
        let expect = SymbolicConstant::from_monomial(
            Monomial::single(Gen::Gamma(rat(1, 3)), 1),
            Cyc::from_rat(rat(4, 9)),
        );
        assert_eq!(g, expect);
        // two construction routes agree
        let a = SymbolicConstant::gamma(&rat(10, 3)).unwrap();
        let b = SymbolicConstant::gamma(&rat(7, 3))
            .unwrap()
            .mul(&SymbolicConstant::from_rat(rat(7, 3)));
        assert_eq!(a, b);
        // Gamma at positive integers is rational
        assert_eq!(
            SymbolicConstant::gamma(&rat(5, 1)).unwrap().to_rat(),
            Some(rat(24, 1))
        );
        assert!(SymbolicConstant::gamma(&rat(-2, 1)).is_err());
        assert!(SymbolicConstant::gamma_inv(&rat(-2, 1)).is_zero());
    }

    #[test]
    fn reflection_closure() {
        for den in 2..=30i64 {
            for num in 1..den {
                if num.gcd(&den) != 1 {
                    continue;
                }
                let q = rat(num, den);
                let prod = SymbolicConstant::sin_pi_gamma(&q)
                    .mul(&SymbolicConstant::gamma(&q).unwrap())
                    .mul(&SymbolicConstant::gamma(&(Rat::one() - &q)).unwrap());
                assert_eq!(prod, SymbolicConstant::pi_pow(1), "q = {q}");
            }
        }
    }

    #[test]
    fn psi_shifts() {
        // psi^(1)(10/7) = psi^(1)(3/7) - 49/9
        let p = SymbolicConstant::psi(1, &rat(10, 7)).unwrap();
        let expect = SymbolicConstant::psi(1, &rat(3, 7))
            .unwrap()
            .add(&SymbolicConstant::from_rat(rat(-49, 9)));
        assert_eq!(p, expect);
        // psi_diff0 at integers is a harmonic number
        let h = SymbolicConstant::psi_diff0(&rat(4, 1)).unwrap();
        assert_eq!(h.to_rat(), Some(rat(11, 6)));
    }

    #[test]
    fn two_pi_i_powers() {
        let x = SymbolicConstant::two_pi_i_pow(2);
        // (2 pi i)^2 = -4 pi^2
        let expect = SymbolicConstant::pi_pow(2).scale_rat(&rat(-4, 1));
        assert_eq!(x, expect);
        let inv = SymbolicConstant::two_pi_i_pow(-1);
        assert_eq!(
            x.mul(&inv),
            SymbolicConstant::two_pi_i_pow(1)
        );
    }

    #[test]
    fn log_rules() {
        // -2 log 2 representation
        let l = SymbolicConstant::log_rat(&rat(1, 4)).unwrap();
        let expect = SymbolicConstant::from_monomial(
            Monomial::single(Gen::LogPrime(2), 1),
            Cyc::from_rat(rat(-2, 1)),
        );
        assert_eq!(l, expect);
        assert!(SymbolicConstant::log_rat(&rat(1, 1)).unwrap().is_zero());
        // log(2 - 2cos(2pi/3)) = log 3
        let c = Cyc::from_int(2).sub(&Cyc::cos_pi(&rat(2, 3)).mul(&Cyc::from_int(2)));
        let l = SymbolicConstant::log_cyc(&c).unwrap();
        assert_eq!(
            l,
            SymbolicConstant::from_monomial(Monomial::single(Gen::LogPrime(3), 1), Cyc::one())
        );
    }

    #[test]
    fn eval_simple_constants() {
        let prec = 128;
        let env = SymbolEnv::default();
        // Gamma(1/2)^2 = pi
        let g = SymbolicConstant::gamma(&rat(1, 2)).unwrap();
        let v = g.mul(&g).eval(prec, &env).unwrap();
        let pi = RealBall::pi(prec);
        assert!(v.re.overlaps(&pi));
        // psi_diff0(1/2) = -2 log 2
        let lhs = SymbolicConstant::psi_diff0(&rat(1, 2))
            .unwrap()
            .eval(prec, &env)
            .unwrap();
        let rhs = SymbolicConstant::log_rat(&rat(1, 4))
            .unwrap()
            .eval(prec, &env)
            .unwrap();
        assert!(lhs.overlaps(&rhs));
        assert!(lhs.rad_upper().to_f64() < 1e-30);
    }

    #[test]
    fn fermat_cycle_toy_value() {
        // -(2 pi i)^2 / (Gamma(2/3) Gamma(1/3)) = 2 sqrt(3) pi =~ 10.8827961854
        let prec = 128;
        let c = SymbolicConstant::two_pi_i_pow(2)
            .neg()
            .mul(&SymbolicConstant::gamma_inv(&rat(2, 3)))
            .mul(&SymbolicConstant::gamma_inv(&rat(1, 3)));
        let v = c.eval(prec, &SymbolEnv::default()).unwrap();
        assert!((v.re.to_f64() - 10.882796185405306).abs() < 1e-12);
        assert!(v.im.abs().to_f64() < 1e-30);
    }

    #[test]
    fn ring_laws_randomized() {
        // a(b + c) = ab + ac on a few structured constants
        let a = SymbolicConstant::gamma(&rat(1, 3))
            .unwrap()
            .add(&SymbolicConstant::pi_pow(-1));
        let b = SymbolicConstant::psi(1, &rat(2, 5)).unwrap();
        let c = SymbolicConstant::root_of_unity(1, 7)
            .mul(&SymbolicConstant::gamma_inv(&rat(1, 3)));
        let lhs = a.mul(&b.add(&c));
        let rhs = a.mul(&b).add(&a.mul(&c));
        assert_eq!(lhs, rhs);
        let comm = b.mul(&a);
        assert_eq!(comm, a.mul(&b));
    }
}
