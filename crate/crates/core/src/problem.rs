//! Problem-description and result JSON types (`"format": 1`). Exact
//! rationals travel as `{"num", "den"}` string pairs; symbolic constants as
//! expression trees.

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::constant::{ConstExpr, SymbolicConstant};
use crate::exact::{Int, Rat};
use crate::lattice::ExponentMatrix;
use crate::limit::{ArcCoordinate, DegenerationArc, LimitingPeriodTable, TableOptions};
use crate::{Error, Result};

pub use crate::constant::RatJson;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArcCoordinateJson {
    pub order: i64,
    pub initial: RatJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbol: Option<String>,
    #[serde(default)]
    pub taylor: Vec<RatJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OptionsJson {
    #[serde(default)]
    pub truncation: Option<i64>,
    #[serde(default)]
    pub eps_order: Option<i64>,
    #[serde(default)]
    pub precision: Option<u32>,
    #[serde(default)]
    pub tolerance: Option<f64>,
}

/// The problem description consumed by the CLI.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemDescription {
    pub format: u32,
    pub n: usize,
    pub d: i64,
    /// deformation monomial exponents `a_1..a_m`
    pub monomials: Vec<Vec<i64>>,
    /// parameter vectors `c`
    pub parameters: Vec<Vec<i64>>,
    /// arc coordinates for all `m + n` coordinates
    #[serde(default)]
    pub arc: Vec<ArcCoordinateJson>,
    #[serde(default)]
    pub options: Option<OptionsJson>,
}

impl ProblemDescription {
    pub fn parse(text: &str) -> Result<Self> {
        let p: ProblemDescription = serde_json::from_str(text)
            .map_err(|e| Error::Malformed(format!("problem JSON: {e}")))?;
        if p.format != 1 {
            return Err(Error::Malformed(format!("unsupported format {}", p.format)));
        }
        for a in &p.monomials {
            if a.len() != p.n {
                return Err(Error::Malformed("monomial length must equal n".into()));
            }
            let total: i64 = a.iter().sum();
            if total != p.d {
                return Err(Error::Malformed(format!(
                    "monomial {a:?} has degree {total}, expected {}",
                    p.d
                )));
            }
        }
        if !p.arc.is_empty() && p.arc.len() != p.monomials.len() + p.n {
            return Err(Error::Malformed("arc length must equal m + n".into()));
        }
        Ok(p)
    }

    pub fn matrix(&self) -> Result<ExponentMatrix> {
        ExponentMatrix::fermat_deformation(self.n, self.d, &self.monomials)
    }

    pub fn degeneration_arc(&self) -> Result<DegenerationArc> {
        if self.arc.is_empty() {
            return Err(Error::Malformed("no arc in the problem description".into()));
        }
        let coords = self
            .arc
            .iter()
            .map(|c| {
                Ok(ArcCoordinate {
                    order: c.order,
                    initial: c.initial.to_rat()?,
                    symbol: c.symbol.clone(),
                    taylor: c
                        .taylor
                        .iter()
                        .map(|t| t.to_rat())
                        .collect::<Result<Vec<_>>>()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let arc = DegenerationArc { coords };
        arc.validate()?;
        Ok(arc)
    }

    pub fn parameter_vectors(&self) -> Vec<Vec<Int>> {
        self.parameters
            .iter()
            .map(|c| c.iter().map(|&v| Int::from(v)).collect())
            .collect()
    }

    pub fn table_options(&self) -> TableOptions {
        let mut o = TableOptions::default();
        if let Some(opts) = &self.options {
            if let Some(v) = opts.truncation {
                o.depth = v;
            }
            if let Some(v) = opts.eps_order {
                o.eps_order = v;
            }
            if let Some(v) = opts.precision {
                o.precision = v;
            }
            if let Some(v) = opts.tolerance {
                o.tolerance = v;
            }
        }
        o
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RingReportJson {
    pub modulus: u32,
    pub pass: bool,
    pub strict_pass: bool,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LeadingEntryJson {
    pub alpha: RatJson,
    pub log_degree: u32,
    pub coefficient: ConstExpr,
    pub decimal: String,
    pub ring: RingReportJson,
    pub certificate_gap: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TableRowJson {
    pub c: Vec<String>,
    pub member: Vec<String>,
    pub alpha0: RatJson,
    pub leading: Vec<LeadingEntryJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TableJson {
    pub format: u32,
    pub n_a: String,
    pub cprime: Vec<RatJson>,
    pub triangulation: String,
    /// the rows generate the period entries; assembling the literal
    /// comparison matrix would need the V-filtration indices
    pub generating_set_only: bool,
    pub rows: Vec<TableRowJson>,
}

pub fn table_to_json(t: &LimitingPeriodTable) -> TableJson {
    TableJson {
        format: 1,
        n_a: t.n_a.to_string(),
        cprime: t.cprime.iter().map(RatJson::from_rat).collect(),
        triangulation: match t.triangulation {
            crate::fan::KnownTriangulation::Fermat => "T(Fer)".to_string(),
            crate::fan::KnownTriangulation::Dwork { pivot } => format!("T(a_{})", pivot + 1),
        },
        generating_set_only: t.generating_set_only,
        rows: t
            .rows
            .iter()
            .map(|r| TableRowJson {
                c: r.c.iter().map(|v| v.to_string()).collect(),
                member: r.member.iter().map(|v| v.to_string()).collect(),
                alpha0: RatJson::from_rat(&r.alpha0),
                leading: r
                    .leading
                    .iter()
                    .map(|l| LeadingEntryJson {
                        alpha: RatJson::from_rat(&l.alpha),
                        log_degree: l.log_degree,
                        coefficient: l.coefficient.to_expr(),
                        decimal: format!("{:.20e}{:+.20e}i", l.numeric.0, l.numeric.1),
                        ring: RingReportJson {
                            modulus: l.report.modulus,
                            pass: l.report.pass,
                            strict_pass: l.report.strict_pass,
                            failures: l
                                .report
                                .monomials
                                .iter()
                                .filter(|m| !m.pass)
                                .flat_map(|m| m.reasons.clone())
                                .collect(),
                        },
                        certificate_gap: l.certificate_gap,
                    })
                    .collect(),
            })
            .collect(),
    }
}

/// CSV summary: row id, leading exponent, decimal value, symbolic form,
/// ring verdict.
pub fn table_to_csv(t: &LimitingPeriodTable) -> String {
    let mut out = String::from("c,member,alpha,log_degree,decimal,symbolic,ring_pass\n");
    for r in &t.rows {
        for l in &r.leading {
            let sym = serde_json::to_string(&l.coefficient.to_expr()).unwrap_or_default();
            out.push_str(&format!(
                "\"{}\",\"{}\",{},{},{:+.16e}{:+.16e}i,{:?},{}\n",
                r.c.iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(" "),
                r.member
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(" "),
                rat_display(&l.alpha),
                l.log_degree,
                l.numeric.0,
                l.numeric.1,
                sym,
                l.report.pass
            ));
        }
    }
    out
}

fn rat_display(r: &Rat) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Fan-report JSON for the `fan` subcommand.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FanReportJson {
    pub format: u32,
    pub weight: Vec<RatJson>,
    pub skeleton: bool,
    pub is_triangulation: bool,
    pub maximal_cells: Vec<Vec<usize>>,
    pub recognized: Option<String>,
}

pub fn fan_report(a: &ExponentMatrix, w: &[Rat]) -> Result<FanReportJson> {
    let skeleton = crate::fan::skeleton_membership(a, w)?;
    let s = crate::fan::subdivision_from_weight(a, w)?;
    let is_tri = crate::fan::is_regular_triangulation(a, &s);
    let recognized = crate::fan::recognize_triangulation(a, &s).map(|t| match t {
        crate::fan::KnownTriangulation::Fermat => "T(Fer)".to_string(),
        crate::fan::KnownTriangulation::Dwork { pivot } => format!("T(a_{})", pivot + 1),
    });
    Ok(FanReportJson {
        format: 1,
        weight: w.iter().map(RatJson::from_rat).collect(),
        skeleton,
        is_triangulation: is_tri,
        maximal_cells: s
            .maximal
            .iter()
            .map(|c| c.indices.iter().map(|&i| i + 1).collect())
            .collect(),
        recognized,
    })
}

impl SymbolicConstant {
    pub fn decimal_string(&self, prec: u32, env: &crate::constant::SymbolEnv) -> Result<String> {
        let v = self.eval(prec, env)?;
        let digits = (prec.to_f64().unwrap_or(64.0) * 0.301) as usize;
        Ok(format!(
            "{:.*e} {:+.*e} i (+/- {:.3e})",
            digits.min(40),
            v.re.to_f64(),
            digits.min(40),
            v.im.to_f64(),
            v.rad_upper().to_f64()
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    #[test]
    fn parse_and_roundtrip() {
        let text = r#"{
            "format": 1,
            "n": 2,
            "d": 3,
            "monomials": [[1, 2]],
            "parameters": [[1, 2]],
            "arc": [
                {"order": 1, "initial": {"num": "1", "den": "1"}},
                {"order": 0, "initial": {"num": "1", "den": "1"}},
                {"order": 0, "initial": {"num": "1", "den": "1"}}
            ],
            "options": {"precision": 128}
        }"#;
        let p = ProblemDescription::parse(text).unwrap();
        let a = p.matrix().unwrap();
        assert!(a.is_fermat_deformation);
        let arc = p.degeneration_arc().unwrap();
        assert_eq!(arc.coords.len(), 3);
        let json = serde_json::to_string(&p).unwrap();
        let p2 = ProblemDescription::parse(&json).unwrap();
        assert_eq!(p2.n, 2);
    }

    #[test]
    fn table_json_roundtrip() {
        let a = ExponentMatrix::fermat_deformation(2, 3, &[vec![1, 2]]).unwrap();
        let arc = DegenerationArc::monomial(&[1, 0, 0]);
        let table = crate::limit::limiting_period_table(
            &a,
            &arc,
            &[vec![int(1), int(2)]],
            &TableOptions::default(),
        )
        .unwrap();
        let json = table_to_json(&table);
        let text = serde_json::to_string_pretty(&json).unwrap();
        let back: TableJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.rows.len(), 2);
        // coefficients reparse into structurally equal constants
        for (r1, r2) in json.rows.iter().zip(&back.rows) {
            for (l1, l2) in r1.leading.iter().zip(&r2.leading) {
                let c1 = crate::constant::normalize(&l1.coefficient).unwrap();
                let c2 = crate::constant::normalize(&l2.coefficient).unwrap();
                assert_eq!(c1, c2);
            }
        }
        let csv = table_to_csv(&table);
        assert!(csv.lines().count() >= 3);
    }

    #[test]
    fn malformed_inputs_rejected() {
        assert!(ProblemDescription::parse("{}").is_err());
        let bad_degree = r#"{"format":1,"n":2,"d":3,"monomials":[[1,1]],"parameters":[]}"#;
        assert!(ProblemDescription::parse(bad_degree).is_err());
    }
}
