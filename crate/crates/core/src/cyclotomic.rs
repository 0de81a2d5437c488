//! Exact arithmetic in cyclotomic fields `Q(zeta_M)`.
//!
//! Elements are polynomials in `zeta_M = e^{2 pi i / M}` reduced modulo the
//! M-th cyclotomic polynomial. Each element carries its own order `M`;
//! binary operations lift to the least common field and results are
//! canonicalized down to the smallest cyclotomic subfield containing them,
//! so structural equality is meaningful across construction routes.
//!
//! Orders are normalized to never be `2 mod 4` (since `Q(zeta_{2k}) =
//! Q(zeta_k)` for odd `k`).

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::exact::{Int, Rat};

/// Cyclotomic polynomial cache.
fn cyclotomic_poly(m: u32) -> Vec<Int> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Vec<Int>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&m) {
        return p.clone();
    }
    // Phi_m = (x^m - 1) / prod_{d | m, d < m} Phi_d
    let mut num = vec![Int::zero(); m as usize + 1];
    num[0] = -Int::one();
    num[m as usize] = Int::one();
    let mut result = num;
    for d in 1..m {
        if m % d == 0 {
            let phi_d = cyclotomic_poly(d);
            result = poly_div_exact(&result, &phi_d);
        }
    }
    cache.lock().unwrap().insert(m, result.clone());
    result
}

/// Exact division of integer polynomials (remainder must vanish).
fn poly_div_exact(num: &[Int], den: &[Int]) -> Vec<Int> {
    let mut rem: Vec<Int> = num.to_vec();
    let dd = den.len() - 1;
    let lead = &den[dd];
    assert!(lead.is_one());
    let mut quot = vec![Int::zero(); rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        quot[k] = c.clone();
        for (i, dv) in den.iter().enumerate() {
            let t = dv * &c;
            rem[k + i] -= t;
        }
    }
    assert!(rem.iter().all(|v| v.is_zero()), "non-exact polynomial division");
    quot
}

fn normalize_order(m: u32) -> u32 {
    if m >= 2 && m % 4 == 2 {
        m / 2
    } else {
        m.max(1)
    }
}

/// An element of `Q(zeta_M)`, reduced mod `Phi_M` and canonicalized to the
/// smallest cyclotomic subfield.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cyc {
    order: u32,
    /// Coefficients in the power basis `1, zeta, ..., zeta^{phi(M)-1}`.
    coeffs: Vec<Rat>,
}

pub fn euler_phi(m: u32) -> u32 {
    let mut n = m;
    let mut result = m;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

impl Cyc {
    pub fn zero() -> Self {
        Cyc {
            order: 1,
            coeffs: vec![],
        }
    }

    pub fn one() -> Self {
        Cyc::from_rat(Rat::one())
    }

    pub fn from_rat(r: Rat) -> Self {
        if r.is_zero() {
            return Cyc::zero();
        }
        Cyc {
            order: 1,
            coeffs: vec![r],
        }
    }

    pub fn from_int(v: i64) -> Self {
        Cyc::from_rat(Rat::from_integer(Int::from(v)))
    }

    /// `zeta_M^j = e^{2 pi i j / M}`.
    pub fn root_of_unity(j: i64, m: u32) -> Self {
        assert!(m >= 1);
        let jm = (j.rem_euclid(m as i64)) as u32;
        // reduce the fraction jm/m
        let g = jm.gcd(&m);
        let (j2, m2) = if jm == 0 { (0, 1) } else { (jm / g, m / g) };
        // avoid order 2 mod 4: zeta_{2k}^j with k odd equals -zeta_k^{(j+k)/2 mod k}
        if m2 % 4 == 2 {
            let k = m2 / 2;
            // e^{2 pi i j2 / (2k)} = e^{pi i j2 / k}; j2 odd since fraction reduced
            // = -e^{pi i (j2 - k)/k} = -e^{2 pi i ((j2-k)/2 mod k)/k}
            let half = ((j2 as i64 - k as i64) / 2).rem_euclid(k as i64) as u32;
            let inner = Cyc::root_of_unity(half as i64, k);
            return inner.neg();
        }
        if m2 == 1 {
            return Cyc::one();
        }
        if m2 == 2 {
            return Cyc::from_int(-1);
        }
        let phi = euler_phi(m2) as usize;
        let mut coeffs = vec![Rat::zero(); phi];
        if (j2 as usize) < phi {
            coeffs[j2 as usize] = Rat::one();
            return Cyc { order: m2, coeffs }.canonical();
        }
        // reduce x^{j2} mod Phi_{m2}
        let mut poly = vec![Rat::zero(); j2 as usize + 1];
        poly[j2 as usize] = Rat::one();
        let red = reduce_mod_phi(&poly, m2);
        Cyc {
            order: m2,
            coeffs: red,
        }
        .canonical()
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Cyc::root_of_unity(1, 4)
    }

    /// `sin(pi q)` as an exact cyclotomic number.
    pub fn sin_pi(q: &Rat) -> Self {
        // sin(pi p/r) = (zeta_{2r}^p - zeta_{2r}^{-p}) / (2 i)
        let p = q.numer().clone();
        let r = q.denom().clone();
        let two_r = (&r * Int::from(2)).to_u32_checked();
        let pw = p.mod_floor(&(&r * Int::from(2)));
        let j = pw.to_u32_checked() as i64;
        let z1 = Cyc::root_of_unity(j, two_r);
        let z2 = Cyc::root_of_unity(-j, two_r);
        let diff = z1.sub(&z2);
        let den = Cyc::i().mul(&Cyc::from_int(2));
        diff.div(&den)
    }

    /// `cos(pi q)` as an exact cyclotomic number.
    pub fn cos_pi(q: &Rat) -> Self {
        let p = q.numer().clone();
        let r = q.denom().clone();
        let two_r = (&r * Int::from(2)).to_u32_checked();
        let pw = p.mod_floor(&(&r * Int::from(2)));
        let j = pw.to_u32_checked() as i64;
        let z1 = Cyc::root_of_unity(j, two_r);
        let z2 = Cyc::root_of_unity(-j, two_r);
        z1.add(&z2).div(&Cyc::from_int(2))
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.order == 1 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.order == 1
    }

    pub fn to_rat(&self) -> Option<Rat> {
        if self.is_zero() {
            return Some(Rat::zero());
        }
        if self.order == 1 {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    fn lift(&self, m: u32) -> Vec<Rat> {
        // coefficients of self in Q(zeta_m), m a multiple of self.order
        assert!(m % self.order == 0);
        let k = m / self.order;
        let phi_m = euler_phi(m) as usize;
        if self.is_zero() {
            return vec![Rat::zero(); phi_m];
        }
        let mut poly = vec![Rat::zero(); ((self.coeffs.len() - 1) * k as usize) + 1];
        for (e, c) in self.coeffs.iter().enumerate() {
            poly[e * k as usize] = c.clone();
        }
        reduce_mod_phi(&poly, m)
    }

    fn canonical(self) -> Cyc {
        let mut c = self;
        // trim: if zero
        if c.coeffs.iter().all(|v| v.is_zero()) {
            return Cyc::zero();
        }
        // descend to smaller cyclotomic subfields while possible
        'outer: loop {
            if c.order == 1 {
                return c;
            }
            let divisors = proper_cyclotomic_suborders(c.order);
            for m2 in divisors {
                if let Some(better) = c.try_descend(m2) {
                    c = better;
                    continue 'outer;
                }
            }
            return c;
        }
    }

    /// Attempt to express self in `Q(zeta_m2)` for `m2` dividing order.
    fn try_descend(&self, m2: u32) -> Option<Cyc> {
        let phi2 = euler_phi(m2) as usize;
        // basis of Q(zeta_m2) lifted into Q(zeta_order)
        let basis: Vec<Vec<Rat>> = (0..phi2)
            .map(|e| {
                Cyc {
                    order: m2,
                    coeffs: {
                        let mut v = vec![Rat::zero(); phi2];
                        v[e] = Rat::one();
                        v
                    },
                }
                .lift(self.order)
            })
            .collect();
        let phi = euler_phi(self.order) as usize;
        let rows: Vec<Vec<Rat>> = (0..phi)
            .map(|r| (0..phi2).map(|c| basis[c][r].clone()).collect())
            .collect();
        let x = crate::exact::solve_rat_general(&rows, &self.coeffs)?;
        // verify (solve_rat_general checks consistency already, but be sure)
        for r in 0..phi {
            let s: Rat = (0..phi2).map(|c| &basis[c][r] * &x[c]).sum();
            if s != self.coeffs[r] {
                return None;
            }
        }
        Some(Cyc {
            order: m2,
            coeffs: x,
        })
    }

    fn binop(&self, other: &Cyc, f: impl Fn(&Rat, &Rat) -> Rat) -> Cyc {
        let m = lcm_order(self.order, other.order);
        let a = self.lift(m);
        let b = other.lift(m);
        let coeffs: Vec<Rat> = a.iter().zip(&b).map(|(x, y)| f(x, y)).collect();
        Cyc { order: m, coeffs }.canonical()
    }

    pub fn add(&self, other: &Cyc) -> Cyc {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        self.binop(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Cyc) -> Cyc {
        if other.is_zero() {
            return self.clone();
        }
        self.binop(other, |a, b| a - b)
    }

    pub fn neg(&self) -> Cyc {
        Cyc {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn mul(&self, other: &Cyc) -> Cyc {
        if self.is_zero() || other.is_zero() {
            return Cyc::zero();
        }
        let m = lcm_order(self.order, other.order);
        let a = self.lift(m);
        let b = other.lift(m);
        let mut prod = vec![Rat::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let t = x * y;
                prod[i + j] = &prod[i + j] + t;
            }
        }
        Cyc {
            order: m,
            coeffs: reduce_mod_phi(&prod, m),
        }
        .canonical()
    }

    pub fn scale(&self, r: &Rat) -> Cyc {
        if r.is_zero() || self.is_zero() {
            return Cyc::zero();
        }
        Cyc {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against
    /// `Phi_M`. Panics on zero.
    pub fn inv(&self) -> Cyc {
        assert!(!self.is_zero(), "division by zero cyclotomic element");
        if self.order == 1 {
            return Cyc::from_rat(Rat::one() / &self.coeffs[0]);
        }
        let phi: Vec<Rat> = cyclotomic_poly(self.order)
            .iter()
            .map(|c| Rat::from_integer(c.clone()))
            .collect();
        let (g, _, t) = poly_ext_gcd(&phi, &self.coeffs);
        // g must be a nonzero constant
        assert!(g.len() == 1 && !g[0].is_zero(), "element not invertible");
        let scale = Rat::one() / &g[0];
        let inv_coeffs: Vec<Rat> = t.iter().map(|c| c * &scale).collect();
        Cyc {
            order: self.order,
            coeffs: reduce_mod_phi(&inv_coeffs, self.order),
        }
        .canonical()
    }

    pub fn div(&self, other: &Cyc) -> Cyc {
        self.mul(&other.inv())
    }

    pub fn pow(&self, e: i64) -> Cyc {
        if e == 0 {
            return Cyc::one();
        }
        let base = if e < 0 { self.inv() } else { self.clone() };
        let mut result = Cyc::one();
        for _ in 0..e.unsigned_abs() {
            result = result.mul(&base);
        }
        result
    }

    /// Complex conjugate (`zeta -> zeta^{-1}`).
    pub fn conj(&self) -> Cyc {
        if self.order == 1 {
            return self.clone();
        }
        let m = self.order;
        let mut acc = Cyc::zero();
        for (e, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = Cyc::root_of_unity(-(e as i64), m).scale(c);
            acc = acc.add(&term);
        }
        acc
    }

    /// Galois twist `zeta -> zeta^k` for `gcd(k, order) = 1`.
    pub fn galois(&self, k: i64) -> Cyc {
        if self.order == 1 {
            return self.clone();
        }
        let m = self.order;
        assert!(k.rem_euclid(m as i64).gcd(&(m as i64)) == 1);
        let mut acc = Cyc::zero();
        for (e, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = Cyc::root_of_unity(k * e as i64, m).scale(c);
            acc = acc.add(&term);
        }
        acc
    }

    /// True when the element lies in `Q(zeta_m2)` (numerically meaningful
    /// subfield containment; `m2` is normalized first).
    pub fn lies_in(&self, m2: u32) -> bool {
        let m2 = normalize_order(m2);
        if self.order == 1 {
            return true;
        }
        if m2 % self.order == 0 {
            return true;
        }
        let g = self.order.gcd(&m2);
        // smallest field containing self is Q(zeta_order); containment in
        // Q(zeta_m2) iff order | lcm but the intersection argument reduces to
        // order | m2 after canonicalization
        let _ = g;
        false
    }
}

fn lcm_order(a: u32, b: u32) -> u32 {
    normalize_order(a / a.gcd(&b) * b)
}

/// List of maximal proper suborders `m2 | m` with `Q(zeta_m2)` a proper
/// subfield: `m / p` for each prime `p | m`, normalized.
fn proper_cyclotomic_suborders(m: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut n = m;
    let mut p = 2;
    let mut primes = Vec::new();
    while p * p <= n {
        if n % p == 0 {
            primes.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        primes.push(n);
    }
    for p in primes {
        let cand = normalize_order(m / p);
        if cand != m && !out.contains(&cand) {
            out.push(cand);
        }
    }
    out.sort();
    out
}

/// Reduce a rational polynomial mod `Phi_m`, returning exactly `phi(m)`
/// coefficients.
fn reduce_mod_phi(poly: &[Rat], m: u32) -> Vec<Rat> {
    let phi = cyclotomic_poly(m);
    let deg = phi.len() - 1;
    let mut rem: Vec<Rat> = poly.to_vec();
    while rem.len() > deg {
        let k = rem.len() - 1;
        let c = rem[k].clone();
        if !c.is_zero() {
            // subtract c * x^{k-deg} * Phi_m
            for (i, pv) in phi.iter().enumerate() {
                let idx = k - deg + i;
                let t = Rat::from_integer(pv.clone()) * &c;
                rem[idx] = &rem[idx] - t;
            }
        }
        rem.pop();
    }
    rem.resize(deg, Rat::zero());
    rem
}

/// Extended gcd for rational polynomials: returns (g, s, t) with
/// `s a + t b = g`.
fn poly_ext_gcd(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>, Vec<Rat>) {
    let mut r0: Vec<Rat> = trim(a.to_vec());
    let mut r1: Vec<Rat> = trim(b.to_vec());
    let mut s0 = vec![Rat::one()];
    let mut s1 = vec![Rat::zero()];
    let mut t0 = vec![Rat::zero()];
    let mut t1 = vec![Rat::one()];
    while !is_zero_poly(&r1) {
        let (q, r) = poly_divmod(&r0, &r1);
        let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
        let t2 = poly_sub(&t0, &poly_mul(&q, &t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    (r0, s0, t0)
}

fn trim(mut p: Vec<Rat>) -> Vec<Rat> {
    while p.len() > 1 && p.last().unwrap().is_zero() {
        p.pop();
    }
    p
}

fn is_zero_poly(p: &[Rat]) -> bool {
    p.iter().all(|c| c.is_zero())
}

fn poly_divmod(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let b = trim(b.to_vec());
    let mut rem = trim(a.to_vec());
    let db = b.len() - 1;
    let lead = b.last().unwrap().clone();
    if rem.len() <= db && !(rem.len() == db + 1) {
        if rem.len() < b.len() {
            return (vec![Rat::zero()], rem);
        }
    }
    let mut quot = vec![Rat::zero(); rem.len().saturating_sub(db).max(1)];
    while rem.len() > db || (rem.len() == db + 1) {
        if rem.len() < b.len() || is_zero_poly(&rem) {
            break;
        }
        let k = rem.len() - 1 - db;
        let c = rem.last().unwrap() / &lead;
        quot[k] = c.clone();
        for i in 0..=db {
            let t = &b[i] * &c;
            rem[k + i] = &rem[k + i] - t;
        }
        rem = trim(rem);
        if rem.len() == 1 && rem[0].is_zero() {
            break;
        }
    }
    (trim(quot), trim(rem))
}

fn poly_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            let t = x * y;
            out[i + j] = &out[i + j] + t;
        }
    }
    trim(out)
}

fn poly_sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let n = a.len().max(b.len());
    let mut out = vec![Rat::zero(); n];
    for (i, v) in a.iter().enumerate() {
        out[i] = out[i].clone() + v;
    }
    for (i, v) in b.iter().enumerate() {
        out[i] = &out[i] - v;
    }
    trim(out)
}

trait ToU32Checked {
    fn to_u32_checked(&self) -> u32;
}

impl ToU32Checked for Int {
    fn to_u32_checked(&self) -> u32 {
        use num_traits::ToPrimitive;
        self.to_u32()
            .unwrap_or_else(|| panic!("integer {self} out of u32 range"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn roots_of_unity_relations() {
        let z = Cyc::root_of_unity(1, 5);
        assert_eq!(z.pow(5), Cyc::one());
        // 1 + z + z^2 + z^3 + z^4 = 0
        let mut s = Cyc::one();
        for j in 1..5 {
            s = s.add(&Cyc::root_of_unity(j, 5));
        }
        assert!(s.is_zero());
        // order normalization: zeta_6 = -zeta_3^2
        let z6 = Cyc::root_of_unity(1, 6);
        let z3 = Cyc::root_of_unity(2, 3).neg();
        assert_eq!(z6, z3);
        assert_eq!(z6.order(), 3);
    }

    #[test]
    fn i_squared() {
        let i = Cyc::i();
        assert_eq!(i.mul(&i), Cyc::from_int(-1));
        assert_eq!(i.pow(4), Cyc::one());
    }

    #[test]
    fn sin_cos_values() {
        assert_eq!(Cyc::sin_pi(&rat(1, 2)), Cyc::one());
        assert_eq!(Cyc::cos_pi(&rat(1, 2)), Cyc::zero());
        assert_eq!(Cyc::cos_pi(&rat(1, 3)), Cyc::from_rat(rat(1, 2)));
        assert_eq!(Cyc::sin_pi(&rat(1, 6)), Cyc::from_rat(rat(1, 2)));
        // sin^2 + cos^2 = 1 at 1/7
        let s = Cyc::sin_pi(&rat(1, 7));
        let c = Cyc::cos_pi(&rat(1, 7));
        assert_eq!(s.mul(&s).add(&c.mul(&c)), Cyc::one());
        // sin(pi/4) = sqrt(2)/2: square equals 1/2
        let s4 = Cyc::sin_pi(&rat(1, 4));
        assert_eq!(s4.mul(&s4), Cyc::from_rat(rat(1, 2)));
    }

    #[test]
    fn inverse_roundtrip() {
        let x = Cyc::root_of_unity(1, 7)
            .add(&Cyc::from_int(2))
            .mul(&Cyc::root_of_unity(3, 4).add(&Cyc::from_int(1)));
        let y = x.inv();
        assert_eq!(x.mul(&y), Cyc::one());
    }

    #[test]
    fn canonical_descent() {
        // zeta_12^3 = i lives in Q(zeta_4)
        let x = Cyc::root_of_unity(3, 12);
        assert_eq!(x, Cyc::i());
        assert_eq!(x.order(), 4);
        // zeta_12^2 = zeta_6 -> order 3 after normalization
        let y = Cyc::root_of_unity(2, 12);
        assert_eq!(y.order(), 3);
        // rational recovery
        let z = Cyc::root_of_unity(1, 8).mul(&Cyc::root_of_unity(7, 8));
        assert_eq!(z.to_rat(), Some(Rat::one()));
    }

    #[test]
    fn product_of_sines_formula() {
        // prod_{i=1}^{d-1} sin(pi i / d) = d / 2^{d-1}
        for d in 2i64..=7 {
            let mut p = Cyc::one();
            for i in 1..d {
                p = p.mul(&Cyc::sin_pi(&rat(i, d)));
            }
            let expect = rat(d, 1) / Rat::from_integer(Int::from(2).pow((d - 1) as u32));
            assert_eq!(p.to_rat(), Some(expect));
        }
    }

    #[test]
    fn conjugation() {
        let x = Cyc::root_of_unity(2, 7).add(&Cyc::from_int(3));
        let y = x.conj();
        assert_eq!(y, Cyc::root_of_unity(-2, 7).add(&Cyc::from_int(3)));
        // x * conj(x) is real: equals its own conjugate
        let n = x.mul(&y);
        assert_eq!(n, n.conj());
    }
}
