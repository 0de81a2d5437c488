//! Dirichlet characters and the polygamma-to-logarithm / L-value rewriting.
//!
//! The degree-0 identity expresses `psi^(0)(p/q) - psi^(0)(1)` through
//! logarithms and a cotangent; for `k >= 1` the character-sum identity over
//! primitive characters of conductor q is emitted as stated, together with a
//! numeric certificate, since the displayed inversion ignores imprimitive
//! characters (for q = 2 the primitive set is even empty while
//! `psi^(1)(1/2) = pi^2/2`).

use num_integer::Integer;
use num_traits::One;

use super::{eval_cyc, Gen, Monomial, SymbolEnv, SymbolicConstant};
use crate::cyclotomic::Cyc;
use crate::exact::{rat, Int, Rat};
use crate::numeric::{dirichlet_l_from_hurwitz, ComplexBall};
use crate::{Error, Result};

/// A Dirichlet character mod q, stored through its full value table:
/// `values[a] = Some(e)` means `chi(a) = zeta_{value_order}^e`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct DirichletCharacter {
    pub modulus: u32,
    pub value_order: u32,
    pub values: Vec<Option<u32>>,
}

impl DirichletCharacter {
    pub fn value(&self, a: u32) -> Cyc {
        match self.values[(a % self.modulus) as usize] {
            None => Cyc::zero(),
            Some(e) => Cyc::root_of_unity(e as i64, self.value_order),
        }
    }

    pub fn conj_value(&self, a: u32) -> Cyc {
        self.value(a).conj()
    }

    pub fn is_trivial(&self) -> bool {
        self.values
            .iter()
            .all(|v| matches!(v, None | Some(0)))
    }

    /// Conductor: the smallest modulus q' | q such that the character is
    /// constant on residues `a = 1 mod q'` (over units).
    pub fn conductor(&self) -> u32 {
        let q = self.modulus;
        'outer: for qp in 1..=q {
            if q % qp != 0 {
                continue;
            }
            for a in 1..q {
                let congruent = if qp == 1 { true } else { a % qp == 1 };
                if congruent
                    && gcd_u32(a, q) == 1
                    && self.values[a as usize] != Some(0)
                    && self.values[a as usize].is_some()
                {
                    continue 'outer;
                }
            }
            return qp;
        }
        q
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor() == self.modulus
    }

    /// Numeric `L(s, chi)` through Hurwitz zeta values.
    pub fn eval_l(&self, s: u32, prec: u32) -> ComplexBall {
        let values: Vec<ComplexBall> = (0..self.modulus)
            .map(|a| match self.values[a as usize] {
                None => ComplexBall::zero(prec),
                Some(_) => eval_cyc(&self.value(a), prec),
            })
            .collect();
        dirichlet_l_from_hurwitz(s, self.modulus, &values, prec)
    }
}

fn gcd_u32(a: u32, b: u32) -> u32 {
    a.gcd(&b)
}

/// Generators of `(Z/qZ)^x` together with their orders, via CRT over the
/// prime-power factors of q.
fn unit_group_generators(q: u32) -> Vec<(u32, u32)> {
    if q == 1 {
        return vec![];
    }
    let mut factors: Vec<(u32, u32)> = Vec::new();
    let mut n = q;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut pk = 1;
            while n % p == 0 {
                pk *= p;
                n /= p;
            }
            factors.push((p, pk));
        }
        p += 1;
    }
    if n > 1 {
        factors.push((n, n));
    }
    let mut gens: Vec<(u32, u32)> = Vec::new();
    for &(p, pk) in &factors {
        // local generators mod pk, lifted to mod q by CRT: 1 mod (q/pk)
        let lift = |g: u32| -> u32 {
            // x = g mod pk, x = 1 mod q/pk
            let other = q / pk;
            for x in 0..q {
                if x % pk == g % pk && (other == 1 || x % other == 1) {
                    return x;
                }
            }
            unreachable!()
        };
        if p == 2 {
            match pk {
                2 => {}
                4 => gens.push((lift(3), 2)),
                _ => {
                    gens.push((lift(pk - 1), 2));
                    gens.push((lift(5), pk / 4));
                }
            }
        } else {
            // find a primitive root mod pk
            let phi = pk / p * (p - 1);
            let root = (2..pk)
                .find(|&g| {
                    if g % p == 0 {
                        return false;
                    }
                    multiplicative_order(g, pk) == phi
                })
                .expect("primitive root exists");
            gens.push((lift(root), phi));
        }
    }
    gens
}

fn multiplicative_order(g: u32, m: u32) -> u32 {
    let mut x = g % m;
    let mut k = 1;
    while x != 1 {
        x = ((x as u64 * g as u64) % m as u64) as u32;
        k += 1;
        assert!(k <= m, "order computation runaway");
    }
    k
}

/// All Dirichlet characters mod q (there are phi(q) of them), in a
/// deterministic order.
pub fn all_characters(q: u32) -> Vec<DirichletCharacter> {
    assert!(q >= 1);
    let gens = unit_group_generators(q);
    let value_order = gens.iter().fold(1u32, |acc, (_, o)| acc.lcm(o));
    // discrete logs: exponent vector for every unit
    let mut dlog: Vec<Option<Vec<u32>>> = vec![None; q as usize];
    let orders: Vec<u32> = gens.iter().map(|(_, o)| *o).collect();
    let mut exps = vec![0u32; gens.len()];
    loop {
        let mut x: u64 = 1;
        for (i, (g, _)) in gens.iter().enumerate() {
            for _ in 0..exps[i] {
                x = x * (*g as u64) % q as u64;
            }
        }
        dlog[x as usize] = Some(exps.clone());
        // odometer
        let mut i = 0;
        loop {
            if i == gens.len() {
                // done
                break;
            }
            exps[i] += 1;
            if exps[i] < orders[i] {
                break;
            }
            exps[i] = 0;
            i += 1;
        }
        if i == gens.len() {
            break;
        }
        if exps.iter().all(|&e| e == 0) {
            break;
        }
    }
    if q == 1 {
        return vec![DirichletCharacter {
            modulus: 1,
            value_order: 1,
            values: vec![Some(0)],
        }];
    }
    // characters: one per tuple t with t_i in 0..orders_i
    let mut chars = Vec::new();
    let mut t = vec![0u32; gens.len()];
    loop {
        let mut values: Vec<Option<u32>> = vec![None; q as usize];
        for a in 0..q {
            if gcd_u32(a.max(1), q) == 1 && a != 0 || (q == 1) {
                if let Some(x) = &dlog[a as usize] {
                    let mut e: u64 = 0;
                    for i in 0..gens.len() {
                        e += t[i] as u64 * x[i] as u64 * (value_order / orders[i]) as u64;
                    }
                    values[a as usize] = Some((e % value_order as u64) as u32);
                }
            }
        }
        chars.push(DirichletCharacter {
            modulus: q,
            value_order,
            values,
        });
        let mut i = 0;
        loop {
            if i == gens.len() {
                break;
            }
            t[i] += 1;
            if t[i] < orders[i] {
                break;
            }
            t[i] = 0;
            i += 1;
        }
        if i == gens.len() || t.iter().all(|&e| e == 0) {
            break;
        }
    }
    chars
}

/// Outcome of a polygamma rewriting request.
#[derive(Debug, Clone)]
pub struct PsiRewrite {
    pub result: SymbolicConstant,
    /// Set when the k >= 1 primitive-character identity was emitted; the
    /// displayed inversion is only as strong as its numeric certificate.
    pub primitive_character_caveat: bool,
    /// |lhs - rhs| upper bound from the numeric certificate.
    pub certificate_gap: f64,
}

/// Rewrite `psi^(0)(p/q) - psi^(0)(1)` (k = 0) or `psi^(k)(p/q)` (k >= 1)
/// into logarithms / L-values.
pub fn psi_to_log_l(k: u32, p: i64, q: i64, prec: u32) -> Result<PsiRewrite> {
    if q <= 0 || p <= 0 || p >= q {
        return Err(Error::Malformed(format!("argument {p}/{q} outside (0,1)")));
    }
    let g = p.gcd(&q);
    let (p, q) = (p / g, q / g);
    if q == 1 {
        return Ok(PsiRewrite {
            result: SymbolicConstant::zero(),
            primitive_character_caveat: false,
            certificate_gap: 0.0,
        });
    }
    let env = SymbolEnv::default();
    if k == 0 {
        // -log q - (pi/2) cot(pi p/q)
        //   + (1/2) sum_{j=1}^{q-1} cos(2 pi j p / q) log(2 - 2 cos(2 pi j / q))
        let mut out = SymbolicConstant::log_rat(&rat(q, 1))?.neg();
        let cot = Cyc::cos_pi(&rat(p, q)).div(&Cyc::sin_pi(&rat(p, q)));
        out = out.add(&SymbolicConstant::from_monomial(
            Monomial::single(Gen::Pi, 1),
            cot.scale(&rat(-1, 2)),
        ));
        for j in 1..q {
            let cosfac = Cyc::cos_pi(&rat(2 * j * p, q));
            if cosfac.is_zero() {
                continue;
            }
            let arg = Cyc::from_int(2).sub(&Cyc::cos_pi(&rat(2 * j, q)).mul(&Cyc::from_int(2)));
            let logterm = SymbolicConstant::log_cyc(&arg)?;
            out = out.add(&logterm.scale_cyc(&cosfac.scale(&rat(1, 2))));
        }
        // certificate
        let lhs = SymbolicConstant::psi_diff0(&rat(p, q))?.eval(prec, &env)?;
        let rhs = out.eval(prec, &env)?;
        let gap = lhs.sub(&rhs).abs().abs_upper().to_f64();
        return Ok(PsiRewrite {
            result: out,
            primitive_character_caveat: false,
            certificate_gap: gap,
        });
    }
    // k >= 1: psi^(k)(p/q) = (-1)^{k-1} k! q^{k+1} / phi(q)
    //                        * sum_{chi primitive mod q} conj(chi)(p) L(k+1, chi)
    let primitives: Vec<DirichletCharacter> = all_characters(q as u32)
        .into_iter()
        .filter(|c| c.is_primitive())
        .collect();
    if primitives.is_empty() {
        return Err(Error::Malformed(format!(
            "no primitive characters of conductor {q}; numeric path only"
        )));
    }
    let phi_q = crate::cyclotomic::euler_phi(q as u32) as i64;
    let mut fact = Rat::one();
    for i in 1..=k {
        fact = fact * Rat::from_integer(Int::from(i));
    }
    let mut scale = fact * pow_int_rat(q, k as i64 + 1) / Rat::from_integer(Int::from(phi_q));
    if k % 2 == 0 {
        scale = -scale;
    }
    let mut sum = SymbolicConstant::zero();
    for chi in primitives {
        let coeff = chi.conj_value(p as u32);
        let term = SymbolicConstant::l_value(k + 1, chi).scale_cyc(&coeff);
        sum = sum.add(&term);
    }
    let out = sum.scale_rat(&scale);
    let lhs = SymbolicConstant::psi(k, &rat(p, q))?.eval(prec, &env)?;
    let rhs = out.eval(prec, &env)?;
    let gap = lhs.sub(&rhs).abs().abs_upper().to_f64();
    Ok(PsiRewrite {
        result: out,
        primitive_character_caveat: true,
        certificate_gap: gap,
    })
}

/// Forward direction of the proof's display:
/// `L(k+1, chi) = (-1)^{k-1}/(k! q^{k+1}) sum_{0<a<q} chi(a) psi^(k)(a/q)`,
/// valid for every character mod q.
pub fn l_value_from_psi(k: u32, chi: &DirichletCharacter) -> Result<SymbolicConstant> {
    assert!(k >= 1);
    let q = chi.modulus as i64;
    let mut sum = SymbolicConstant::zero();
    for a in 1..q {
        let v = chi.value(a as u32);
        if v.is_zero() {
            continue;
        }
        let term = SymbolicConstant::psi(k, &rat(a, q))?.scale_cyc(&v);
        sum = sum.add(&term);
    }
    let mut fact = Rat::one();
    for i in 1..=k {
        fact = fact * Rat::from_integer(Int::from(i));
    }
    let mut scale = Rat::one() / (fact * pow_int_rat(q, k as i64 + 1));
    if k % 2 == 0 {
        scale = -scale;
    }
    Ok(sum.scale_rat(&scale))
}

fn pow_int_rat(base: i64, e: i64) -> Rat {
    let mut acc = Rat::one();
    for _ in 0..e {
        acc = acc * rat(base, 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn character_counts_and_conductors() {
        for q in [3u32, 4, 5, 7, 8, 12, 14] {
            let chars = all_characters(q);
            assert_eq!(
                chars.len() as u32,
                crate::cyclotomic::euler_phi(q),
                "phi({q}) characters"
            );
            // exactly one trivial character
            assert_eq!(chars.iter().filter(|c| c.is_trivial()).count(), 1);
        }
        // mod 4: one primitive (the odd character)
        let c4 = all_characters(4);
        assert_eq!(c4.iter().filter(|c| c.is_primitive()).count(), 1);
        // mod 2: none
        let c2 = all_characters(2);
        assert_eq!(c2.iter().filter(|c| c.is_primitive()).count(), 0);
        // mod p prime: p - 2 primitive (all but trivial)
        for p in [3u32, 5, 7] {
            let cs = all_characters(p);
            assert_eq!(
                cs.iter().filter(|c| c.is_primitive()).count() as u32,
                p - 2
            );
        }
    }

    #[test]
    fn orthogonality() {
        for q in [5u32, 7, 12] {
            let chars = all_characters(q);
            for chi in &chars {
                let mut s = Cyc::zero();
                for a in 1..q {
                    s = s.add(&chi.value(a));
                }
                if chi.is_trivial() {
                    assert_eq!(
                        s.to_rat(),
                        Some(rat(crate::cyclotomic::euler_phi(q) as i64, 1))
                    );
                } else {
                    assert!(s.is_zero(), "character sum must vanish mod {q}");
                }
            }
        }
    }

    #[test]
    fn psi0_half_is_minus_two_log_two() {
        let r = psi_to_log_l(0, 1, 2, 128).unwrap();
        let expect = SymbolicConstant::from_monomial(
            Monomial::single(Gen::LogPrime(2), 1),
            Cyc::from_rat(rat(-2, 1)),
        );
        assert_eq!(r.result, expect);
        assert!(r.certificate_gap < 1e-30);
    }

    #[test]
    fn psi0_third_certificate() {
        let r = psi_to_log_l(0, 1, 3, 192).unwrap();
        assert!(r.certificate_gap < 1e-45, "gap {}", r.certificate_gap);
        assert!(!r.primitive_character_caveat);
    }

    #[test]
    fn l2_chi3_forward() {
        // L(2, chi_3) = (psi^(1)(1/3) - psi^(1)(2/3)) / 9
        let chars = all_characters(3);
        let chi = chars.iter().find(|c| !c.is_trivial()).unwrap();
        let l = l_value_from_psi(1, chi).unwrap();
        let expect = SymbolicConstant::psi(1, &rat(1, 3))
            .unwrap()
            .sub(&SymbolicConstant::psi(1, &rat(2, 3)).unwrap())
            .scale_rat(&rat(1, 9));
        assert_eq!(l, expect);
        // numeric certificate against direct L evaluation
        let env = SymbolEnv::default();
        let lhs = l.eval(192, &env).unwrap();
        let rhs = chi.eval_l(2, 192);
        assert!(lhs.sub(&rhs).abs().abs_upper().to_f64() < 1e-40);
    }

    #[test]
    fn q2_rewrite_refused() {
        assert!(psi_to_log_l(1, 1, 2, 128).is_err());
    }

    #[test]
    fn psi1_rewrite_certificate_prime_modulus() {
        // for prime q the primitive identity holds up to the trivial-character
        // (zeta) part, which the certificate must expose as a nonzero gap
        let r = psi_to_log_l(1, 1, 3, 128).unwrap();
        assert!(r.primitive_character_caveat);
        // gap = 9/phi(3) * L(2, chi_0 part) = ... nonzero
        assert!(r.certificate_gap > 1e-3, "gap {}", r.certificate_gap);
    }
}
