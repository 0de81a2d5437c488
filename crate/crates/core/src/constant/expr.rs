//! Serializable expression trees for symbolic constants, and their
//! normalization into canonical [`SymbolicConstant`] form.
//!
//! Exact rationals are serialized as `{"num": "...", "den": "..."}` string
//! pairs.

use num_traits::One;
use serde::{Deserialize, Serialize};

use super::{Gen, SymbolicConstant};
use crate::cyclotomic::Cyc;
use crate::exact::{Int, Rat};
use crate::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RatJson {
    pub num: String,
    pub den: String,
}

impl RatJson {
    pub fn from_rat(r: &Rat) -> Self {
        RatJson {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
        }
    }

    pub fn to_rat(&self) -> Result<Rat> {
        let num: Int = self
            .num
            .parse()
            .map_err(|_| Error::Malformed(format!("bad integer {}", self.num)))?;
        let den: Int = self
            .den
            .parse()
            .map_err(|_| Error::Malformed(format!("bad integer {}", self.den)))?;
        if den == Int::from(0) {
            return Err(Error::Malformed("zero denominator".into()));
        }
        Ok(Rat::new(num, den))
    }
}

/// Expression tree for constructing and serializing symbolic constants.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConstExpr {
    Rational { value: RatJson },
    Pi,
    TwoPiI,
    RootOfUnity { j: i64, order: u32 },
    /// coefficients of an element of Q(zeta_order) in the power basis
    Cyclotomic { order: u32, coeffs: Vec<RatJson> },
    Gamma { arg: RatJson },
    GammaInv { arg: RatJson },
    SinPi { arg: RatJson },
    PsiDiff0 { arg: RatJson },
    Psi { k: u32, arg: RatJson },
    LogRat { arg: RatJson },
    LogSym { name: String },
    InitialRoot { name: String, root: u32 },
    Add { terms: Vec<ConstExpr> },
    Mul { factors: Vec<ConstExpr> },
    Pow { base: Box<ConstExpr>, exp: i64 },
}

/// Normalize an expression tree into canonical form. `sin(pi q)` rewrites
/// through the reflection formula; Gamma/psi arguments are shifted into
/// their canonical windows.
pub fn normalize(e: &ConstExpr) -> Result<SymbolicConstant> {
    Ok(match e {
        ConstExpr::Rational { value } => SymbolicConstant::from_rat(value.to_rat()?),
        ConstExpr::Pi => SymbolicConstant::pi_pow(1),
        ConstExpr::TwoPiI => SymbolicConstant::two_pi_i_pow(1),
        ConstExpr::RootOfUnity { j, order } => SymbolicConstant::root_of_unity(*j, *order),
        ConstExpr::Cyclotomic { order, coeffs } => {
            let mut acc = Cyc::zero();
            for (e, c) in coeffs.iter().enumerate() {
                let term = Cyc::root_of_unity(e as i64, *order).scale(&c.to_rat()?);
                acc = acc.add(&term);
            }
            SymbolicConstant::from_cyc(acc)
        }
        ConstExpr::Gamma { arg } => SymbolicConstant::gamma(&arg.to_rat()?)?,
        ConstExpr::GammaInv { arg } => SymbolicConstant::gamma_inv(&arg.to_rat()?),
        ConstExpr::SinPi { arg } => SymbolicConstant::sin_pi_gamma(&arg.to_rat()?),
        ConstExpr::PsiDiff0 { arg } => SymbolicConstant::psi_diff0(&arg.to_rat()?)?,
        ConstExpr::Psi { k, arg } => {
            if *k == 0 {
                return Err(Error::Malformed(
                    "psi^(0) must be the PsiDiff0 difference".into(),
                ));
            }
            SymbolicConstant::psi(*k, &arg.to_rat()?)?
        }
        ConstExpr::LogRat { arg } => SymbolicConstant::log_rat(&arg.to_rat()?)?,
        ConstExpr::LogSym { name } => SymbolicConstant::log_sym(name),
        ConstExpr::InitialRoot { name, root } => SymbolicConstant::initial_pow(name, 1, *root),
        ConstExpr::Add { terms } => {
            let mut acc = SymbolicConstant::zero();
            for t in terms {
                acc = acc.add(&normalize(t)?);
            }
            acc
        }
        ConstExpr::Mul { factors } => {
            let mut acc = SymbolicConstant::one();
            for f in factors {
                acc = acc.mul(&normalize(f)?);
            }
            acc
        }
        ConstExpr::Pow { base, exp } => normalize(base)?.pow_i64(*exp)?,
    })
}

impl SymbolicConstant {
    /// Export to a sum-of-products expression tree (inverse of
    /// [`normalize`] up to canonical form).
    pub fn to_expr(&self) -> ConstExpr {
        let mut terms = Vec::new();
        for (m, c) in &self.terms {
            let mut factors: Vec<ConstExpr> = Vec::new();
            if let Some(r) = c.to_rat() {
                if !r.is_one() || m.0.is_empty() {
                    factors.push(ConstExpr::Rational {
                        value: RatJson::from_rat(&r),
                    });
                }
            } else {
                factors.push(ConstExpr::Cyclotomic {
                    order: c.order(),
                    coeffs: c.coeffs().iter().map(RatJson::from_rat).collect(),
                });
            }
            for (g, e) in &m.0 {
                let base = match g {
                    Gen::Pi => ConstExpr::Pi,
                    Gen::EulerPsiOne => ConstExpr::PsiDiff0 {
                        // tracker is internal; exporting it is a bug upstream
                        arg: RatJson::from_rat(&Rat::one()),
                    },
                    Gen::Gamma(q) => ConstExpr::Gamma {
                        arg: RatJson::from_rat(q),
                    },
                    Gen::PsiDiff0(q) => ConstExpr::PsiDiff0 {
                        arg: RatJson::from_rat(q),
                    },
                    Gen::Psi(k, q) => ConstExpr::Psi {
                        k: *k,
                        arg: RatJson::from_rat(q),
                    },
                    Gen::LogPrime(p) => ConstExpr::LogRat {
                        arg: RatJson {
                            num: p.to_string(),
                            den: "1".into(),
                        },
                    },
                    Gen::LogCyc(cy) => ConstExpr::Mul {
                        factors: vec![ConstExpr::LogSym {
                            name: format!("cyc:{cy:?}"),
                        }],
                    },
                    Gen::LogSym(name) => ConstExpr::LogSym { name: name.clone() },
                    Gen::InitialRoot(name, root) => ConstExpr::InitialRoot {
                        name: name.clone(),
                        root: *root,
                    },
                    Gen::LValue(k, chi) => ConstExpr::LogSym {
                        name: format!("L({},chi mod {})", k + 0, chi.modulus),
                    },
                };
                if *e == 1 {
                    factors.push(base);
                } else {
                    factors.push(ConstExpr::Pow {
                        base: Box::new(base),
                        exp: *e,
                    });
                }
            }
            terms.push(if factors.len() == 1 {
                factors.pop().unwrap()
            } else {
                ConstExpr::Mul { factors }
            });
        }
        if terms.is_empty() {
            ConstExpr::Rational {
                value: RatJson::from_rat(&Rat::from_integer(Int::from(0))),
            }
        } else if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            ConstExpr::Add { terms }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn normalize_idempotent_roundtrip() {
        let e = ConstExpr::Add {
            terms: vec![
                ConstExpr::Mul {
                    factors: vec![
                        ConstExpr::Gamma {
                            arg: RatJson::from_rat(&rat(7, 3)),
                        },
                        ConstExpr::Pow {
                            base: Box::new(ConstExpr::Pi),
                            exp: -2,
                        },
                    ],
                },
                ConstExpr::SinPi {
                    arg: RatJson::from_rat(&rat(1, 6)),
                },
            ],
        };
        let c1 = normalize(&e).unwrap();
        let c2 = normalize(&c1.to_expr()).unwrap();
        assert_eq!(c1, c2);
    }

    #[test]
    fn json_roundtrip() {
        let c = SymbolicConstant::gamma(&rat(1, 3))
            .unwrap()
            .mul(&SymbolicConstant::two_pi_i_pow(2))
            .add(&SymbolicConstant::psi(1, &rat(2, 7)).unwrap());
        let json = serde_json::to_string(&c.to_expr()).unwrap();
        let back: ConstExpr = serde_json::from_str(&json).unwrap();
        assert_eq!(normalize(&back).unwrap(), c);
    }

    #[test]
    fn sin_pi_normalizes_to_reflection() {
        let e = ConstExpr::Mul {
            factors: vec![
                ConstExpr::SinPi {
                    arg: RatJson::from_rat(&rat(1, 3)),
                },
                ConstExpr::Gamma {
                    arg: RatJson::from_rat(&rat(1, 3)),
                },
                ConstExpr::Gamma {
                    arg: RatJson::from_rat(&rat(2, 3)),
                },
            ],
        };
        assert_eq!(normalize(&e).unwrap(), SymbolicConstant::pi_pow(1));
    }
}
