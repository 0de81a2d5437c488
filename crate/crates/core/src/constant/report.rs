//! Membership reports for the constrained Gamma/polygamma ring `PG(M, e)`
//! and its cyclotomic / logarithmic extensions.

use num_traits::Zero;

use super::{Gen, SymbolicConstant};
use crate::exact::{Int, Rat};

/// Which extra generators the caller admits on top of `PG(M, e) ⊗ Q(zeta)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Extension {
    /// formal logs: `log p`, `log` of cyclotomic units, `log` of named units
    pub logs: bool,
    /// Dirichlet L-values
    pub l_values: bool,
    /// roots `(in f_i)^{1/N}` of named units
    pub initial_roots: bool,
}

impl Extension {
    pub fn none() -> Self {
        Extension::default()
    }

    pub fn all() -> Self {
        Extension {
            logs: true,
            l_values: true,
            initial_roots: true,
        }
    }
}

/// Verdict for one monomial.
#[derive(Debug, Clone)]
pub struct MonomialVerdict {
    pub description: String,
    /// Gamma-exponent sum `sum m_j q_j` (pi folded in as Gamma(1/2)^2).
    pub gamma_exponent_sum: Rat,
    /// All Gamma/psi argument denominators divide M.
    pub denominators_ok: bool,
    /// The exponent-sum constraint `sum ≡ k e (mod 1)` for some integer k.
    pub constraint_ok: bool,
    /// Extra generators (logs, L-values, roots) appear.
    pub uses_extension: bool,
    /// Coefficient is rational (no cyclotomic part needed).
    pub rational_coefficient: bool,
    pub pass: bool,
    pub reasons: Vec<String>,
}

/// Report for a full symbolic constant.
#[derive(Debug, Clone)]
pub struct RingReport {
    pub modulus: u32,
    pub offset: Rat,
    pub monomials: Vec<MonomialVerdict>,
    /// All monomials pass within PG(M,e) ⊗ Q(zeta) plus the allowed
    /// extension.
    pub pass: bool,
    /// All monomials pass with rational coefficients (strict PG(M,e)).
    pub strict_pass: bool,
}

/// Check membership of every monomial of `c` in `PG(M, e)` tensored with the
/// cyclotomic coefficient field, optionally extended by logs / L-values /
/// formal roots.
pub fn in_ring_report(
    c: &SymbolicConstant,
    modulus: u32,
    offset: &Rat,
    ext: Extension,
) -> RingReport {
    let m_int = Int::from(modulus);
    let mut monomials = Vec::new();
    let mut pass = true;
    let mut strict_pass = true;
    for (mono, coeff) in &c.terms {
        let mut reasons = Vec::new();
        let mut denominators_ok = true;
        let mut uses_extension = false;
        let mut gamma_sum = Rat::zero();
        for (g, e) in &mono.0 {
            match g {
                Gen::Pi => {
                    // pi = Gamma(1/2)^2 needs 2 | M; contributes e to the sum
                    if (&m_int % Int::from(2)).is_zero() {
                        gamma_sum = gamma_sum + Rat::from_integer(Int::from(*e));
                    } else {
                        denominators_ok = false;
                        reasons.push(format!("pi^{e} needs 2 | {modulus}"));
                    }
                }
                Gen::Gamma(q) => {
                    if !(&m_int % q.denom()).is_zero() {
                        denominators_ok = false;
                        reasons.push(format!("Gamma({q}) denominator does not divide {modulus}"));
                    }
                    gamma_sum = gamma_sum + q * Rat::from_integer(Int::from(*e));
                }
                Gen::PsiDiff0(q) | Gen::Psi(_, q) => {
                    if !(&m_int % q.denom()).is_zero() {
                        denominators_ok = false;
                        reasons.push(format!(
                            "psi argument {q} denominator does not divide {modulus}"
                        ));
                    }
                }
                Gen::EulerPsiOne => {
                    denominators_ok = false;
                    reasons.push("uncancelled psi^(0)(1) tracker".into());
                }
                Gen::LogPrime(_) | Gen::LogCyc(_) | Gen::LogSym(_) => {
                    uses_extension = true;
                    if !ext.logs {
                        reasons.push("logarithm generator not admitted".into());
                    }
                }
                Gen::InitialRoot(_, _) => {
                    uses_extension = true;
                    if !ext.initial_roots {
                        reasons.push("formal root generator not admitted".into());
                    }
                }
                Gen::LValue(_, _) => {
                    uses_extension = true;
                    if !ext.l_values {
                        reasons.push("L-value generator not admitted".into());
                    }
                }
            }
        }
        // constraint: gamma_sum ≡ k*offset (mod 1) for some integer k,
        // i.e. den(gamma_sum) divides den(offset) when offset != 0,
        // and gamma_sum ∈ Z when offset = 0
        let constraint_ok = if offset.is_zero() {
            gamma_sum.is_integer()
        } else {
            (offset.denom() % gamma_sum.denom()).is_zero()
        };
        if !constraint_ok {
            reasons.push(format!(
                "Gamma exponent sum {gamma_sum} incompatible with offset {offset}"
            ));
        }
        let rational_coefficient = coeff.is_rational();
        let extension_ok = reasons
            .iter()
            .all(|r| !r.contains("not admitted") && !r.contains("tracker"));
        let this_pass = denominators_ok && constraint_ok && extension_ok;
        let description = if mono.0.is_empty() {
            "1".to_string()
        } else {
            mono.0
                .iter()
                .map(|(g, e)| format!("{g:?}^{e}"))
                .collect::<Vec<_>>()
                .join(" ")
        };
        pass &= this_pass;
        strict_pass &= this_pass && rational_coefficient && !uses_extension;
        monomials.push(MonomialVerdict {
            description,
            gamma_exponent_sum: gamma_sum,
            denominators_ok,
            constraint_ok,
            uses_extension,
            rational_coefficient,
            pass: this_pass,
            reasons,
        });
    }
    RingReport {
        modulus,
        offset: offset.clone(),
        monomials,
        pass,
        strict_pass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn gamma_pair_member() {
        // Gamma(1/3) Gamma(2/3): sum = 1 ≡ 0
        let c = SymbolicConstant::gamma(&rat(1, 3))
            .unwrap()
            .mul(&SymbolicConstant::gamma(&rat(2, 3)).unwrap());
        let r = in_ring_report(&c, 3, &Rat::zero(), Extension::none());
        assert!(r.pass && r.strict_pass);
    }

    #[test]
    fn wrong_denominator_rejected() {
        let c = SymbolicConstant::gamma(&rat(1, 5)).unwrap();
        let r = in_ring_report(&c, 3, &Rat::zero(), Extension::none());
        assert!(!r.pass);
        assert!(!r.monomials[0].denominators_ok);
    }

    #[test]
    fn offset_constraint() {
        // Gamma(1/3) alone: sum 1/3; member of PG(3, 1/3) but not PG(3, 0)
        let c = SymbolicConstant::gamma(&rat(1, 3)).unwrap();
        assert!(!in_ring_report(&c, 3, &Rat::zero(), Extension::none()).pass);
        assert!(in_ring_report(&c, 3, &rat(1, 3), Extension::none()).pass);
    }

    #[test]
    fn pi_powers_fold() {
        // pi^3 in PG(2, 0): sum contributes 3 ∈ Z
        let c = SymbolicConstant::pi_pow(3);
        assert!(in_ring_report(&c, 2, &Rat::zero(), Extension::none()).pass);
        // odd modulus: rejected
        assert!(!in_ring_report(&c, 3, &Rat::zero(), Extension::none()).pass);
    }

    #[test]
    fn extensions_gate_generators() {
        let c = SymbolicConstant::log_rat(&rat(2, 1)).unwrap();
        assert!(!in_ring_report(&c, 14, &Rat::zero(), Extension::none()).pass);
        assert!(
            in_ring_report(
                &c,
                14,
                &Rat::zero(),
                Extension {
                    logs: true,
                    ..Extension::none()
                }
            )
            .pass
        );
    }

    #[test]
    fn euler_tracker_always_fails() {
        let c = SymbolicConstant::psi0_raw(&rat(1, 2)).unwrap();
        assert!(c.contains_euler_tracker());
        let r = in_ring_report(&c, 14, &Rat::zero(), Extension::all());
        assert!(!r.pass);
    }
}
