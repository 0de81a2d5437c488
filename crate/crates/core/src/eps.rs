//! Truncated Laurent series in one formal variable over a coefficient ring:
//! the `epsilon` bookkeeping for SST limits and the local parameter of
//! residue expansions share this type.

use std::fmt::Debug;

use crate::exact::Rat;

/// Minimal ring interface for series coefficients.
pub trait RingElem: Clone + Debug {
    fn ring_zero() -> Self;
    fn ring_one() -> Self;
    fn is_ring_zero(&self) -> bool;
    fn ring_add(&self, o: &Self) -> Self;
    fn ring_neg(&self) -> Self;
    fn ring_mul(&self, o: &Self) -> Self;
    fn ring_scale(&self, r: &Rat) -> Self;
    /// Multiplicative inverse where available.
    fn ring_invert(&self) -> Option<Self>;
}

/// Laurent series truncated at order `trunc` (exclusive): coefficients for
/// exponents `val, val+1, ..., trunc-1`.
#[derive(Debug, Clone)]
pub struct EpsSeries<T: RingElem> {
    pub val: i64,
    pub trunc: i64,
    pub coeffs: Vec<T>,
}

impl<T: RingElem> EpsSeries<T> {
    pub fn zero(trunc: i64) -> Self {
        EpsSeries {
            val: trunc,
            trunc,
            coeffs: Vec::new(),
        }
    }

    pub fn from_const(c: T, trunc: i64) -> Self {
        EpsSeries {
            val: 0,
            trunc,
            coeffs: if trunc > 0 { vec![c] } else { Vec::new() },
        }
        .trimmed()
    }

    /// `c * eps^k`
    pub fn monomial(c: T, k: i64, trunc: i64) -> Self {
        EpsSeries {
            val: k,
            trunc,
            coeffs: if trunc > k { vec![c] } else { Vec::new() },
        }
        .trimmed()
    }

    pub fn coefficient(&self, k: i64) -> T {
        if k < self.val || k >= self.trunc {
            return T::ring_zero();
        }
        self.coeffs
            .get((k - self.val) as usize)
            .cloned()
            .unwrap_or_else(T::ring_zero)
    }

    /// First structurally nonzero exponent within the tracked window.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs
            .iter()
            .position(|c| !c.is_ring_zero())
            .map(|i| self.val + i as i64)
    }

    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }

    fn trimmed(mut self) -> Self {
        while let Some(first) = self.coeffs.first() {
            if first.is_ring_zero() && self.coeffs.len() > 0 {
                self.coeffs.remove(0);
                self.val += 1;
            } else {
                break;
            }
        }
        while self.coeffs.len() as i64 > self.trunc - self.val {
            self.coeffs.pop();
        }
        self
    }

    pub fn add(&self, o: &EpsSeries<T>) -> EpsSeries<T> {
        let trunc = self.trunc.min(o.trunc);
        let val = self.val.min(o.val).min(trunc);
        let len = (trunc - val).max(0) as usize;
        let mut coeffs = vec![T::ring_zero(); len];
        for (i, c) in coeffs.iter_mut().enumerate() {
            let k = val + i as i64;
            *c = self.coefficient(k).ring_add(&o.coefficient(k));
        }
        EpsSeries { val, trunc, coeffs }.trimmed()
    }

    pub fn neg(&self) -> EpsSeries<T> {
        EpsSeries {
            val: self.val,
            trunc: self.trunc,
            coeffs: self.coeffs.iter().map(|c| c.ring_neg()).collect(),
        }
    }

    pub fn sub(&self, o: &EpsSeries<T>) -> EpsSeries<T> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &EpsSeries<T>) -> EpsSeries<T> {
        if self.is_zero() || o.is_zero() {
            return EpsSeries::zero(self.trunc.min(o.trunc));
        }
        // product truncation: min(t1 + v2, t2 + v1)
        let trunc = (self.trunc + o.val).min(o.trunc + self.val);
        let val = self.val + o.val;
        let len = (trunc - val).max(0) as usize;
        let mut coeffs = vec![T::ring_zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_ring_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                if b.is_ring_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].ring_add(&a.ring_mul(b));
            }
        }
        EpsSeries { val, trunc, coeffs }.trimmed()
    }

    pub fn scale(&self, c: &T) -> EpsSeries<T> {
        EpsSeries {
            val: self.val,
            trunc: self.trunc,
            coeffs: self.coeffs.iter().map(|x| x.ring_mul(c)).collect(),
        }
        .trimmed()
    }

    pub fn scale_rat(&self, r: &Rat) -> EpsSeries<T> {
        EpsSeries {
            val: self.val,
            trunc: self.trunc,
            coeffs: self.coeffs.iter().map(|x| x.ring_scale(r)).collect(),
        }
        .trimmed()
    }

    pub fn shift(&self, k: i64) -> EpsSeries<T> {
        EpsSeries {
            val: self.val + k,
            trunc: self.trunc + k,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Multiplicative inverse; the leading coefficient must be invertible.
    pub fn invert(&self) -> Option<EpsSeries<T>> {
        let v = self.valuation()?;
        let lead = self.coefficient(v);
        let lead_inv = lead.ring_invert()?;
        // write self = eps^v * lead * (1 + u) with val(u) >= 1
        let order = (self.trunc - v).max(1);
        let mut u: Vec<T> = Vec::with_capacity(order as usize);
        for k in 0..order {
            u.push(self.coefficient(v + k).ring_mul(&lead_inv));
        }
        // invert 1 + u by recursion: b_0 = 1, b_k = -sum_{i=1..k} u_i b_{k-i}
        let mut b: Vec<T> = vec![T::ring_zero(); order as usize];
        b[0] = T::ring_one();
        for k in 1..order as usize {
            let mut acc = T::ring_zero();
            for i in 1..=k {
                if i < u.len() && !u[i].is_ring_zero() {
                    acc = acc.ring_add(&u[i].ring_mul(&b[k - i]));
                }
            }
            b[k] = acc.ring_neg();
        }
        let coeffs: Vec<T> = b.into_iter().map(|x| x.ring_mul(&lead_inv)).collect();
        Some(
            EpsSeries {
                val: -v,
                trunc: -v + order,
                coeffs,
            }
            .trimmed(),
        )
    }

    /// `exp` of a series with strictly positive valuation.
    pub fn exp(&self) -> EpsSeries<T> {
        assert!(
            self.valuation().map_or(true, |v| v >= 1),
            "exp needs positive valuation"
        );
        let trunc = self.trunc;
        let mut acc = EpsSeries::from_const(T::ring_one(), trunc);
        let mut pow = EpsSeries::from_const(T::ring_one(), trunc);
        let mut factorial = crate::exact::Rat::from_integer(crate::exact::Int::from(1));
        let max_j = trunc.max(1) as usize;
        for j in 1..=max_j {
            pow = pow.mul(self);
            if pow.is_zero() {
                break;
            }
            factorial = factorial * Rat::from_integer(crate::exact::Int::from(j as u64));
            let inv = Rat::new(
                factorial.denom().clone(),
                factorial.numer().clone(),
            );
            acc = acc.add(&pow.scale_rat(&inv));
        }
        acc
    }

    pub fn map<U: RingElem>(&self, f: impl Fn(&T) -> U) -> EpsSeries<U> {
        EpsSeries {
            val: self.val,
            trunc: self.trunc,
            coeffs: self.coeffs.iter().map(|c| f(c)).collect(),
        }
        .trimmed()
    }
}

impl RingElem for crate::constant::SymbolicConstant {
    fn ring_zero() -> Self {
        crate::constant::SymbolicConstant::zero()
    }
    fn ring_one() -> Self {
        crate::constant::SymbolicConstant::one()
    }
    fn is_ring_zero(&self) -> bool {
        self.is_zero()
    }
    fn ring_add(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn ring_neg(&self) -> Self {
        self.neg()
    }
    fn ring_mul(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn ring_scale(&self, r: &Rat) -> Self {
        self.scale_rat(r)
    }
    fn ring_invert(&self) -> Option<Self> {
        self.invert_monomial().ok()
    }
}

impl RingElem for Rat {
    fn ring_zero() -> Self {
        use num_traits::Zero;
        Rat::zero()
    }
    fn ring_one() -> Self {
        use num_traits::One;
        Rat::one()
    }
    fn is_ring_zero(&self) -> bool {
        use num_traits::Zero;
        self.is_zero()
    }
    fn ring_add(&self, o: &Self) -> Self {
        self + o
    }
    fn ring_neg(&self) -> Self {
        -self.clone()
    }
    fn ring_mul(&self, o: &Self) -> Self {
        self * o
    }
    fn ring_scale(&self, r: &Rat) -> Self {
        self * r
    }
    fn ring_invert(&self) -> Option<Self> {
        use num_traits::Zero;
        if self.is_zero() {
            None
        } else {
            use num_traits::One;
            Some(Rat::one() / self)
        }
    }
}

/// Polynomials in the formal coordinate logarithms `log z_1..log z_N` with
/// symbolic-constant coefficients, keyed by exponent multi-index.
#[derive(Debug, Clone, Default)]
pub struct LogPoly {
    pub terms: std::collections::BTreeMap<Vec<u32>, crate::constant::SymbolicConstant>,
}

impl LogPoly {
    pub fn constant(c: crate::constant::SymbolicConstant, n: usize) -> Self {
        let mut terms = std::collections::BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0u32; n], c);
        }
        LogPoly { terms }
    }

    pub fn nvars(&self) -> Option<usize> {
        self.terms.keys().next().map(|k| k.len())
    }
}

impl RingElem for LogPoly {
    fn ring_zero() -> Self {
        LogPoly::default()
    }
    fn ring_one() -> Self {
        // variable count is fixed on first use; the empty-key constant
        // stands for 1 in any arity
        let mut terms = std::collections::BTreeMap::new();
        terms.insert(Vec::new(), crate::constant::SymbolicConstant::one());
        LogPoly { terms }
    }
    fn is_ring_zero(&self) -> bool {
        self.terms.values().all(|c| c.is_zero())
    }
    fn ring_add(&self, o: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (k, c) in &o.terms {
            let key = k.clone();
            let e = terms
                .entry(key)
                .or_insert_with(crate::constant::SymbolicConstant::zero);
            *e = e.add(c);
            if e.is_zero() {
                terms.remove(k);
            }
        }
        LogPoly { terms }
    }
    fn ring_neg(&self) -> Self {
        LogPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), c.neg()))
                .collect(),
        }
    }
    fn ring_mul(&self, o: &Self) -> Self {
        let mut out = LogPoly::default();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &o.terms {
                // align arities (the ring_one unit uses the empty key)
                let n = k1.len().max(k2.len());
                let mut k = vec![0u32; n];
                for (i, v) in k1.iter().enumerate() {
                    k[i] += v;
                }
                for (i, v) in k2.iter().enumerate() {
                    k[i] += v;
                }
                let c = c1.mul(c2);
                let e = out
                    .terms
                    .entry(k.clone())
                    .or_insert_with(crate::constant::SymbolicConstant::zero);
                *e = e.add(&c);
                if e.is_zero() {
                    out.terms.remove(&k);
                }
            }
        }
        out
    }
    fn ring_scale(&self, r: &Rat) -> Self {
        LogPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), c.scale_rat(r)))
                .collect(),
        }
    }
    fn ring_invert(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (k, c) = self.terms.iter().next().unwrap();
        if k.iter().any(|&e| e != 0) {
            return None;
        }
        let inv = c.invert_monomial().ok()?;
        Some(LogPoly::constant(inv, k.len()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    type RS = EpsSeries<Rat>;

    #[test]
    fn arithmetic_and_truncation() {
        // (1 + eps) * (1 - eps) = 1 - eps^2
        let a = RS::from_const(rat(1, 1), 6).add(&RS::monomial(rat(1, 1), 1, 6));
        let b = RS::from_const(rat(1, 1), 6).add(&RS::monomial(rat(-1, 1), 1, 6));
        let p = a.mul(&b);
        assert_eq!(p.coefficient(0), rat(1, 1));
        assert_eq!(p.coefficient(1), rat(0, 1));
        assert_eq!(p.coefficient(2), rat(-1, 1));
    }

    #[test]
    fn inversion() {
        // 1 / (eps (1 - eps)) = eps^{-1} (1 + eps + eps^2 + ...)
        let s = RS::monomial(rat(1, 1), 1, 6).sub(&RS::monomial(rat(1, 1), 2, 6));
        let inv = s.invert().unwrap();
        assert_eq!(inv.val, -1);
        for k in -1..3i64 {
            assert_eq!(inv.coefficient(k), rat(1, 1), "at {k}");
        }
        assert!(s.mul(&inv).sub(&RS::from_const(rat(1, 1), 3)).is_zero());
    }

    #[test]
    fn exponential() {
        let s = RS::monomial(rat(1, 1), 1, 5);
        let e = s.exp();
        assert_eq!(e.coefficient(0), rat(1, 1));
        assert_eq!(e.coefficient(1), rat(1, 1));
        assert_eq!(e.coefficient(2), rat(1, 2));
        assert_eq!(e.coefficient(3), rat(1, 6));
    }

    #[test]
    fn mul_truncation_tightness() {
        // (eps^{-1} + ... + eps^3) * (eps^2): result known to order 5
        let mut a = RS::monomial(rat(1, 1), -1, 4);
        for k in 0..4 {
            a = a.add(&RS::monomial(rat(1, 1), k, 4));
        }
        let b = RS::monomial(rat(1, 1), 2, 10);
        let p = a.mul(&b);
        assert_eq!(p.val, 1);
        assert_eq!(p.trunc, 6);
    }

    #[test]
    fn logpoly_ring() {
        use crate::constant::SymbolicConstant as SC;
        let x = LogPoly {
            terms: [(vec![1u32, 0], SC::one())].into_iter().collect(),
        };
        let y = LogPoly {
            terms: [(vec![0u32, 1], SC::from_int(2))].into_iter().collect(),
        };
        let p = x.ring_add(&y).ring_mul(&x.ring_add(&y));
        // (L1 + 2 L2)^2 = L1^2 + 4 L1 L2 + 4 L2^2
        assert_eq!(p.terms.len(), 3);
        assert_eq!(p.terms[&vec![2u32, 0]], SC::one());
        assert_eq!(p.terms[&vec![1u32, 1]], SC::from_int(4));
        assert_eq!(p.terms[&vec![0u32, 2]], SC::from_int(4));
    }
}
