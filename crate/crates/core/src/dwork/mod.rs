//! Generalized Dwork reduction: parameter cancellation, the one-variable
//! hypergeometric form of the Gamma series, the Picard–Fuchs operator, the
//! Mellin–Barnes continuation, and the perturbed-Dwork connection formula.

mod connection;
mod mb;

pub use connection::{
    connection_coefficient, connection_coefficient_eps, continue_to_dwork, dwork_basis_condition,
    dwork_coset_representatives, ContinuedExpansion, ContinuedTerm,
};
pub use mb::{lacunary_series_eval, mb_eval, mb_residue_sum, residue_sum_eval, MellinBarnesSpec, ResidueTerm};

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::constant::SymbolicConstant;
use crate::exact::{Int, Rat};
use crate::lattice::ExponentMatrix;
use crate::series::Exponent;
use crate::{Error, Result};

/// Cancelled hypergeometric data `(alpha, beta)` for the `m = 1` Dwork
/// family, with the argument scale `kappa = (-d)^{-d} prod a_k^{a_k}` and
/// the kernel generator `u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypergeometricData {
    pub alpha: Vec<Rat>,
    pub beta: Vec<Rat>,
    pub kappa: Rat,
    pub kernel: Vec<Int>,
}

/// Multiset cancellation: remove common entries of the two parameter lists,
/// sort ascending.
pub fn cancell(alpha_raw: &[Rat], beta_raw: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let mut alpha: Vec<Rat> = alpha_raw.to_vec();
    let mut beta: Vec<Rat> = Vec::new();
    'outer: for b in beta_raw {
        for (i, a) in alpha.iter().enumerate() {
            if a == b {
                alpha.remove(i);
                continue 'outer;
            }
        }
        beta.push(b.clone());
    }
    alpha.sort();
    beta.sort();
    (alpha, beta)
}

/// Build the cancelled data for the generalized Dwork family
/// (`m = 1`, pivot column `a = a_1`, `gcd(d, a_1, ..., a_n) = 1`).
pub fn dwork_data(a: &ExponentMatrix, c: &[Rat]) -> Result<HypergeometricData> {
    if !a.is_fermat_deformation || a.ncols - a.n != 1 {
        return Err(Error::Malformed("Dwork data needs a Fermat deformation with m = 1".into()));
    }
    let d = a.degree.to_i64().unwrap();
    let col = &a.columns[0];
    let mut g = Int::from(d);
    for v in col {
        g = g.gcd(v);
    }
    if !g.is_one() {
        return Err(Error::Malformed(
            "gcd(d, a_1, ..., a_n) must be 1 for the Dwork reduction".into(),
        ));
    }
    // alpha~ = (l/a_k + c_k/(d a_k)) for a_k > 0, 0 <= l < a_k
    let mut alpha_raw = Vec::new();
    for (k, ak) in col.iter().enumerate() {
        let akv = ak.to_i64().unwrap();
        for l in 0..akv {
            let v = (Rat::from_integer(Int::from(l)) + &c[k] / Rat::from_integer(Int::from(d)))
                / Rat::from_integer(ak.clone());
            alpha_raw.push(v);
        }
    }
    // beta~ = (1, 1/d, ..., (d-1)/d)
    let mut beta_raw = vec![Rat::one()];
    for j in 1..d {
        beta_raw.push(Rat::new(Int::from(j), Int::from(d)));
    }
    let (alpha, beta) = cancell(&alpha_raw, &beta_raw);
    // kappa = (-d)^{-d} prod a_k^{a_k}
    let mut kappa = Rat::one();
    for ak in col {
        let akv = ak.to_i64().unwrap();
        for _ in 0..akv {
            kappa = kappa * Rat::from_integer(ak.clone());
        }
    }
    let mut dd = Rat::one();
    for _ in 0..d {
        dd = dd * Rat::from_integer(Int::from(d));
    }
    kappa = kappa / dd;
    if d % 2 == 1 {
        kappa = -kappa;
    }
    let kernel = {
        let mut u = vec![Int::from(d)];
        for v in col {
            u.push(-v.clone());
        }
        u
    };
    Ok(HypergeometricData {
        alpha,
        beta,
        kappa,
        kernel,
    })
}

/// Hypergeometric-form descriptor for one `p`: the prefactor constant and
/// the shifted parameter lists of `F(p/d + alpha; p/d + beta; kappa z^u)`.
#[derive(Debug, Clone)]
pub struct HypergeometricForm {
    pub p: i64,
    /// exponent gamma^c_p of the monomial prefactor `z^{gamma}`
    pub exponent: Exponent,
    /// `Gamma(p/d + beta) / (Gamma(1 + gamma^c_p) Gamma(p/d + alpha))`
    pub prefactor: SymbolicConstant,
    pub upper: Vec<Rat>,
    pub lower: Vec<Rat>,
    pub kappa: Rat,
}

/// Lemma-style reduction of the Gamma series to the one-variable
/// hypergeometric `F`.
pub fn hypergeometric_form(
    a: &ExponentMatrix,
    data: &HypergeometricData,
    c: &[Rat],
    p: i64,
) -> Result<HypergeometricForm> {
    let d = a.degree.to_i64().unwrap();
    let exponent = Exponent::fermat(a, &[Int::from(p)], c)?;
    let pd = Rat::new(Int::from(p), Int::from(d));
    let mut prefactor = SymbolicConstant::one();
    for g in &exponent.gamma {
        let inv = SymbolicConstant::gamma_inv(&(g + Rat::one()));
        if inv.is_zero() {
            return Err(Error::Pole(format!(
                "Gamma series vanishes identically at p = {p}"
            )));
        }
        prefactor = prefactor.mul(&inv);
    }
    for b in &data.beta {
        prefactor = prefactor.mul(&SymbolicConstant::gamma(&(b + &pd))?);
    }
    for al in &data.alpha {
        prefactor = prefactor.mul(&SymbolicConstant::gamma(&(al + &pd))?.invert_monomial()?);
    }
    Ok(HypergeometricForm {
        p,
        exponent,
        prefactor,
        upper: data.alpha.iter().map(|x| x + &pd).collect(),
        lower: data.beta.iter().map(|x| x + &pd).collect(),
        kappa: data.kappa.clone(),
    })
}

impl HypergeometricForm {
    /// Coefficient of `w^i` in `F(upper; lower; w) = sum_i prod
    /// Gamma(upper+i)/Gamma(lower+i) w^i`, as a symbolic constant.
    pub fn f_coefficient(&self, i: i64) -> Result<SymbolicConstant> {
        let mut acc = SymbolicConstant::one();
        let iv = Rat::from_integer(Int::from(i));
        for u in &self.upper {
            acc = acc.mul(&SymbolicConstant::gamma(&(u + &iv))?);
        }
        for l in &self.lower {
            acc = acc.mul(&SymbolicConstant::gamma(&(l + &iv))?.invert_monomial()?);
        }
        Ok(acc)
    }

    /// The full coefficient of `z^{gamma + i u}` predicted by the reduction:
    /// `prefactor * F_i * kappa^i`.
    pub fn series_coefficient(&self, i: i64) -> Result<SymbolicConstant> {
        let mut kpow = Rat::one();
        for _ in 0..i {
            kpow = kpow * self.kappa.clone();
        }
        Ok(self
            .prefactor
            .mul(&self.f_coefficient(i)?)
            .scale_rat(&kpow))
    }
}

/// The hypergeometric operator
/// `P = prod (D + beta_i - 1) - z prod (D + alpha_i)`, `D = z d/dz`,
/// stored through the two expanded polynomials in `D`.
#[derive(Debug, Clone)]
pub struct PicardFuchsOperator {
    /// coefficients of `prod (D + beta_i - 1)`, low degree first
    pub beta_poly: Vec<Rat>,
    /// coefficients of `prod (D + alpha_i)`
    pub alpha_poly: Vec<Rat>,
}

pub fn picard_fuchs(alpha: &[Rat], beta: &[Rat]) -> PicardFuchsOperator {
    let mut beta_poly = vec![Rat::one()];
    for b in beta {
        beta_poly = poly_mul_linear(&beta_poly, &(b - Rat::one()));
    }
    let mut alpha_poly = vec![Rat::one()];
    for al in alpha {
        alpha_poly = poly_mul_linear(&alpha_poly, al);
    }
    PicardFuchsOperator {
        beta_poly,
        alpha_poly,
    }
}

/// multiply polynomial (in D) by (D + shift)
fn poly_mul_linear(p: &[Rat], shift: &Rat) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); p.len() + 1];
    for (i, c) in p.iter().enumerate() {
        out[i + 1] = &out[i + 1] + c;
        out[i] = &out[i] + &(c * shift);
    }
    out
}

fn eval_poly(p: &[Rat], x: &Rat) -> Rat {
    let mut acc = Rat::zero();
    for c in p.iter().rev() {
        acc = acc * x.clone() + c.clone();
    }
    acc
}

impl PicardFuchsOperator {
    pub fn order(&self) -> usize {
        (self.beta_poly.len() - 1).max(self.alpha_poly.len() - 1)
    }

    /// Apply to a one-variable series `sum_i c_i z^{s + i}` given by its
    /// coefficients; the result's `i`-th coefficient is exact, certified
    /// for `i < len - 1` (the last input coefficient feeds the `z`-shift).
    pub fn apply(&self, base: &Rat, coeffs: &[SymbolicConstant]) -> Vec<SymbolicConstant> {
        let mut out = Vec::with_capacity(coeffs.len());
        for i in 0..coeffs.len() {
            let x = base + Rat::from_integer(Int::from(i as u64));
            let mut v = coeffs[i].scale_rat(&eval_poly(&self.beta_poly, &x));
            if i >= 1 {
                let xm = base + Rat::from_integer(Int::from(i as u64 - 1));
                v = v.sub(&coeffs[i - 1].scale_rat(&eval_poly(&self.alpha_poly, &xm)));
            }
            out.push(v);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat, rat_int};
    use crate::lattice::kernel_lattice;

    fn toy() -> ExponentMatrix {
        ExponentMatrix::fermat_deformation(2, 3, &[vec![1, 2]]).unwrap()
    }

    #[test]
    fn cancell_disjoint_and_matched() {
        let a = vec![rat(1, 3), rat(1, 2)];
        let b = vec![rat(1, 5)];
        let (ca, cb) = cancell(&a, &b);
        assert_eq!(ca, vec![rat(1, 3), rat(1, 2)]);
        assert_eq!(cb, vec![rat(1, 5)]);
        // multiset semantics: a double entry cancels once
        let a = vec![rat(1, 7), rat(1, 7), rat(2, 7)];
        let b = vec![rat(1, 7), rat(3, 7)];
        let (ca, cb) = cancell(&a, &b);
        assert_eq!(ca, vec![rat(1, 7), rat(2, 7)]);
        assert_eq!(cb, vec![rat(3, 7)]);
    }

    #[test]
    fn toy_dwork_data() {
        let a = toy();
        let c = vec![rat_int(1), rat_int(2)];
        let data = dwork_data(&a, &c).unwrap();
        // alpha~ = (1/3, 5/6, 1/3), beta~ = (1, 1/3, 2/3)
        // cancelled: alpha = (1/3, 5/6), beta = (1, 2/3)
        assert_eq!(data.alpha, vec![rat(1, 3), rat(5, 6)]);
        assert_eq!(data.beta, vec![rat(2, 3), rat_int(1)]);
        assert_eq!(data.kappa, rat(-4, 27));
        assert_eq!(data.kernel, vec![int(3), int(-1), int(-2)]);
        // Lemma: beta = {1 - p/d : p in P_c} = {1, 2/3}
        let reps = crate::lattice::coset_representatives(3, 2, &a.generators_mod_d());
        let pc = crate::lattice::p_set(&a, &[int(1), int(2)], &reps);
        let mut expect: Vec<Rat> = pc
            .iter()
            .map(|p| Rat::one() - Rat::new(p[0].clone(), Int::from(3)))
            .collect();
        expect.sort();
        assert_eq!(data.beta, expect);
    }

    #[test]
    fn sec51_cancelled_parameters() {
        let a =
            ExponentMatrix::fermat_deformation(6, 7, &[vec![2, 1, 1, 1, 1, 1]]).unwrap();
        let c: Vec<Rat> = [1, 2, 1, 1, 1, 1].iter().map(|&v| rat_int(v)).collect();
        let data = dwork_data(&a, &c).unwrap();
        assert_eq!(
            data.alpha,
            vec![rat(1, 14), rat(1, 7), rat(1, 7), rat(1, 7)]
        );
        assert_eq!(
            data.beta,
            vec![rat(3, 7), rat(5, 7), rat(6, 7), rat_int(1)]
        );
    }

    #[test]
    fn hypergeometric_form_matches_series() {
        let a = toy();
        let k = kernel_lattice(&a).unwrap();
        let c = vec![rat_int(1), rat_int(2)];
        let data = dwork_data(&a, &c).unwrap();
        for p in [0i64, 1] {
            let form = hypergeometric_form(&a, &data, &c, p).unwrap();
            // compare against the raw Gamma-series coefficients at u = i*kernel
            for i in 0..=8i64 {
                let u: Vec<Int> = data.kernel.iter().map(|v| v * Int::from(i)).collect();
                let raw = crate::series::gamma_coefficient(&form.exponent.gamma, &u);
                let reduced = form.series_coefficient(i).unwrap();
                assert_eq!(raw, reduced, "p={p}, i={i}");
            }
            let _ = &k;
        }
    }

    #[test]
    fn hypergeometric_recurrence() {
        // ratio of consecutive F coefficients is the rational function
        let a = toy();
        let c = vec![rat_int(1), rat_int(2)];
        let data = dwork_data(&a, &c).unwrap();
        let form = hypergeometric_form(&a, &data, &c, 0).unwrap();
        for i in 0..6i64 {
            let this = form.f_coefficient(i).unwrap();
            let next = form.f_coefficient(i + 1).unwrap();
            let mut ratio = Rat::one();
            let iv = Rat::from_integer(Int::from(i));
            for u in &form.upper {
                ratio = ratio * (u + &iv);
            }
            for l in &form.lower {
                ratio = ratio / (l + &iv);
            }
            assert_eq!(next, this.scale_rat(&ratio));
        }
    }

    #[test]
    fn picard_fuchs_annihilates() {
        let a = toy();
        let c = vec![rat_int(1), rat_int(2)];
        let data = dwork_data(&a, &c).unwrap();
        for p in [0i64, 1] {
            let form = hypergeometric_form(&a, &data, &c, p).unwrap();
            let op = picard_fuchs(&form.upper, &form.lower);
            assert_eq!(op.order(), 2);
            let coeffs: Vec<SymbolicConstant> = (0..10)
                .map(|i| form.f_coefficient(i).unwrap())
                .collect();
            let out = op.apply(&Rat::zero(), &coeffs);
            for (i, v) in out.iter().enumerate() {
                assert!(v.is_zero(), "PF residue at z^{i} for p={p}");
            }
        }
        // degenerate guard: alpha = beta = () gives the operator 1 - z
        let op = picard_fuchs(&[], &[]);
        assert_eq!(op.order(), 0);
        let one = vec![SymbolicConstant::one(), SymbolicConstant::one()];
        let out = op.apply(&Rat::zero(), &one);
        // (1 - z) sum z^i = 1: coefficient at z^1 must vanish
        assert!(out[1].is_zero());
        assert!(!out[0].is_zero());
    }

    #[test]
    fn sec51_picard_fuchs_order_four() {
        let a =
            ExponentMatrix::fermat_deformation(6, 7, &[vec![2, 1, 1, 1, 1, 1]]).unwrap();
        let c: Vec<Rat> = [1, 2, 1, 1, 1, 1].iter().map(|&v| rat_int(v)).collect();
        let data = dwork_data(&a, &c).unwrap();
        let form = hypergeometric_form(&a, &data, &c, 0).unwrap();
        let op = picard_fuchs(&form.upper, &form.lower);
        assert_eq!(op.order(), 4);
        let coeffs: Vec<SymbolicConstant> = (0..8)
            .map(|i| form.f_coefficient(i).unwrap())
            .collect();
        let out = op.apply(&Rat::zero(), &coeffs);
        for v in &out {
            assert!(v.is_zero());
        }
    }
}
