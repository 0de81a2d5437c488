//! Pullback of solution series along a degeneration arc, Puiseux-log
//! expansion in the arc parameter, initial-coefficient extraction, and the
//! limiting-period table with ring-membership reports and numeric
//! certificates.

use std::collections::BTreeMap;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::constant::{in_ring_report, Extension, RingReport, SymbolEnv, SymbolicConstant};
use crate::exact::{Int, Rat};
use crate::fan::{recognize_triangulation, skeleton_membership, subdivision_from_weight, KnownTriangulation};
use crate::lattice::{
    compute_n_a, coset_representatives, kernel_lattice, p_set, ExponentMatrix, KernelLattice,
};
use crate::numeric::{ComplexBall, RealBall};
use crate::sst::LaurentLogSeries;
use crate::{Error, Result};

/// One coordinate of a degeneration arc `f_i(t) = in_i t^{o_i} (1 + tail)`.
#[derive(Debug, Clone)]
pub struct ArcCoordinate {
    pub order: i64,
    /// nonzero initial coefficient
    pub initial: Rat,
    /// optional symbol name; any non-unit initial is treated as a named
    /// base-field unit so its roots and logarithm stay formal
    pub symbol: Option<String>,
    /// Taylor coefficients of `f_i/t^{o_i}` after the initial one
    pub taylor: Vec<Rat>,
}

/// A degeneration arc `t -> (f_1(t), ..., f_N(t))`.
#[derive(Debug, Clone)]
pub struct DegenerationArc {
    pub coords: Vec<ArcCoordinate>,
}

impl DegenerationArc {
    /// Pure monomial arc from orders (all initials 1).
    pub fn monomial(orders: &[i64]) -> Self {
        DegenerationArc {
            coords: orders
                .iter()
                .map(|&o| ArcCoordinate {
                    order: o,
                    initial: Rat::one(),
                    symbol: None,
                    taylor: Vec::new(),
                })
                .collect(),
        }
    }

    /// The induced weight vector `w_f` of vanishing orders.
    pub fn weight(&self) -> Vec<Rat> {
        self.coords
            .iter()
            .map(|c| Rat::from_integer(Int::from(c.order)))
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        for (i, c) in self.coords.iter().enumerate() {
            if c.initial.is_zero() {
                return Err(Error::Malformed(format!(
                    "arc coordinate {i} has zero initial coefficient"
                )));
            }
        }
        Ok(())
    }

    fn symbol_name(&self, i: usize) -> String {
        self.coords[i]
            .symbol
            .clone()
            .unwrap_or_else(|| format!("in{}", i + 1))
    }

    /// Environment binding every named initial to its rational value.
    pub fn env(&self) -> SymbolEnv {
        let mut env = SymbolEnv::default();
        for (i, c) in self.coords.iter().enumerate() {
            env = env.with(&self.symbol_name(i), c.initial.clone());
        }
        env
    }
}

/// A truncated one-variable series in `t^{1/ram}` and `log t`.
#[derive(Debug, Clone)]
pub struct PuiseuxLogSeries {
    pub ram: u32,
    pub terms: BTreeMap<(Rat, u32), SymbolicConstant>,
    pub trunc: Rat,
}

impl PuiseuxLogSeries {
    pub fn coefficient(&self, alpha: &Rat, log_degree: u32) -> Result<SymbolicConstant> {
        if *alpha > self.trunc {
            return Err(Error::InsufficientTruncation(format!(
                "t-exponent {alpha} beyond truncation {}",
                self.trunc
            )));
        }
        Ok(self
            .terms
            .get(&(alpha.clone(), log_degree))
            .cloned()
            .unwrap_or_else(SymbolicConstant::zero))
    }

    pub fn leading_exponent(&self) -> Option<Rat> {
        self.terms
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((a, _), _)| a.clone())
            .min()
    }

    pub fn add(&self, o: &PuiseuxLogSeries) -> PuiseuxLogSeries {
        let mut terms = self.terms.clone();
        for (k, v) in &o.terms {
            let e = terms.entry(k.clone()).or_insert_with(SymbolicConstant::zero);
            *e = e.add(v);
            if e.is_zero() {
                terms.remove(k);
            }
        }
        PuiseuxLogSeries {
            ram: self.ram.max(o.ram),
            terms,
            trunc: if self.trunc < o.trunc {
                self.trunc.clone()
            } else {
                o.trunc.clone()
            },
        }
    }

    pub fn max_log_degree(&self) -> u32 {
        self.terms.keys().map(|(_, l)| *l).max().unwrap_or(0)
    }
}

/// Substitute the arc into a log-bearing series. The series must be
/// truncated against the arc weight (`series.weight == w_f`), so every
/// omitted term has `t`-exponent above the bound.
pub fn pullback(
    series: &LaurentLogSeries,
    arc: &DegenerationArc,
    ram: u32,
) -> Result<PuiseuxLogSeries> {
    arc.validate()?;
    let n = series.base.len();
    if arc.coords.len() != n {
        return Err(Error::Malformed("arc length must match coordinate count".into()));
    }
    let wf = arc.weight();
    if wf != series.weight {
        return Err(Error::Malformed(
            "series is truncated against a different weight than the arc orders".into(),
        ));
    }
    // t-order bound: terms with w_f . x <= bound are certified
    let trunc = series.bound.clone();
    let mut out: BTreeMap<(Rat, u32), SymbolicConstant> = BTreeMap::new();
    for ((t_off, l), coeff) in &series.terms {
        // exponent vector x = base + t_off
        let x: Vec<Rat> = series
            .base
            .iter()
            .zip(t_off)
            .map(|(b, t)| b + Rat::from_integer(t.clone()))
            .collect();
        let alpha0: Rat = x
            .iter()
            .zip(&arc.coords)
            .map(|(xi, c)| xi * Rat::from_integer(Int::from(c.order)))
            .sum();
        // symbolic initial factor prod in_i^{x_i}
        let mut head = coeff.clone();
        for (i, xi) in x.iter().enumerate() {
            if arc.coords[i].initial.is_one() || xi.is_zero() {
                continue;
            }
            if xi.is_integer() {
                // rational power
                let e = xi.to_integer().to_i64().ok_or_else(|| {
                    Error::Malformed("exponent too large".into())
                })?;
                let mut f = Rat::one();
                for _ in 0..e.unsigned_abs() {
                    f = f * arc.coords[i].initial.clone();
                }
                if e < 0 {
                    f = Rat::one() / f;
                }
                head = head.scale_rat(&f);
            } else {
                let scaled = xi * Rat::from_integer(Int::from(ram));
                if !scaled.is_integer() {
                    return Err(Error::Malformed(format!(
                        "exponent {xi} denominator does not divide the ramification {ram}"
                    )));
                }
                head = head.mul(&SymbolicConstant::initial_pow(
                    &arc.symbol_name(i),
                    scaled.to_integer().to_i64().unwrap(),
                    ram,
                ));
            }
        }
        // tail factor: prod (1 + tau_i)^{x_i}, expanded in t up to trunc - alpha0
        let budget = &trunc - &alpha0;
        let mut tail: BTreeMap<Rat, Rat> = BTreeMap::new();
        tail.insert(Rat::zero(), Rat::one());
        for (i, xi) in x.iter().enumerate() {
            if arc.coords[i].taylor.is_empty() || xi.is_zero() {
                continue;
            }
            let tau: Vec<(Rat, Rat)> = arc.coords[i]
                .taylor
                .iter()
                .enumerate()
                .map(|(j, cj)| {
                    (
                        Rat::from_integer(Int::from(j as i64 + 1)),
                        cj / &arc.coords[i].initial,
                    )
                })
                .collect();
            let expansion = binomial_expand(&tau, xi, &budget);
            tail = poly_mul_trunc(&tail, &expansion, &budget);
        }
        // log factor: prod_i (o_i log t + Lsym_i + log(1 + tau_i))^{l_i}
        // expanded as a polynomial in log t with Puiseux-polynomial
        // SymbolicConstant coefficients
        let mut log_parts: BTreeMap<(Rat, u32), SymbolicConstant> = BTreeMap::new();
        log_parts.insert((Rat::zero(), 0), SymbolicConstant::one());
        for (i, li) in l.iter().enumerate() {
            for _ in 0..*li {
                let mut factor: BTreeMap<(Rat, u32), SymbolicConstant> = BTreeMap::new();
                // o_i log t
                if arc.coords[i].order != 0 {
                    factor.insert(
                        (Rat::zero(), 1),
                        SymbolicConstant::from_int(arc.coords[i].order),
                    );
                }
                // log of the initial
                if !arc.coords[i].initial.is_one() {
                    factor
                        .entry((Rat::zero(), 0))
                        .or_insert_with(SymbolicConstant::zero);
                    let lg = SymbolicConstant::log_sym(&arc.symbol_name(i));
                    let e = factor.get_mut(&(Rat::zero(), 0)).unwrap();
                    *e = e.add(&lg);
                }
                // log(1 + tau_i) expansion
                if !arc.coords[i].taylor.is_empty() {
                    let tau: Vec<(Rat, Rat)> = arc.coords[i]
                        .taylor
                        .iter()
                        .enumerate()
                        .map(|(j, cj)| {
                            (
                                Rat::from_integer(Int::from(j as i64 + 1)),
                                cj / &arc.coords[i].initial,
                            )
                        })
                        .collect();
                    for (e, c) in log_series(&tau, &budget) {
                        let entry = factor
                            .entry((e, 0))
                            .or_insert_with(SymbolicConstant::zero);
                        *entry = entry.add(&SymbolicConstant::from_rat(c));
                    }
                }
                log_parts = logpoly_mul(&log_parts, &factor, &budget);
            }
        }
        // assemble: head * tail * log_parts at t^{alpha0 + ...}
        for (te, tc) in &tail {
            for ((le, ld), lc) in &log_parts {
                let e = &alpha0 + te + le;
                if e > trunc {
                    continue;
                }
                let c = head.scale_rat(tc).mul(lc);
                if c.is_zero() {
                    continue;
                }
                let entry = out
                    .entry((e.clone(), *ld))
                    .or_insert_with(SymbolicConstant::zero);
                *entry = entry.add(&c);
                if entry.is_zero() {
                    out.remove(&(e, *ld));
                }
            }
        }
    }
    Ok(PuiseuxLogSeries {
        ram,
        terms: out,
        trunc,
    })
}

/// `(1 + sum c_j t^{e_j})^{x}` by the truncated binomial series with exact
/// rational binomial coefficients of rational exponent.
fn binomial_expand(tau: &[(Rat, Rat)], x: &Rat, budget: &Rat) -> BTreeMap<Rat, Rat> {
    let mut out: BTreeMap<Rat, Rat> = BTreeMap::new();
    out.insert(Rat::zero(), Rat::one());
    if budget <= &Rat::zero() {
        return out;
    }
    let min_step = tau
        .iter()
        .map(|(e, _)| e.clone())
        .min()
        .unwrap_or_else(Rat::one);
    let max_k = (budget / &min_step).floor().to_integer().to_i64().unwrap_or(0);
    let mut binom = Rat::one();
    let mut tau_pow: BTreeMap<Rat, Rat> = out.clone();
    for k in 0..max_k {
        binom = binom * (x - Rat::from_integer(Int::from(k)))
            / Rat::from_integer(Int::from(k + 1));
        tau_pow = poly_mul_trunc(&tau_pow, &tau.iter().cloned().collect(), budget);
        if tau_pow.is_empty() {
            break;
        }
        for (e, c) in &tau_pow {
            let entry = out.entry(e.clone()).or_insert_with(Rat::zero);
            *entry = entry.clone() + c * &binom;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// `log(1 + sum c_j t^{e_j})` truncated.
fn log_series(tau: &[(Rat, Rat)], budget: &Rat) -> BTreeMap<Rat, Rat> {
    let mut out: BTreeMap<Rat, Rat> = BTreeMap::new();
    if budget <= &Rat::zero() {
        return out;
    }
    let min_step = tau
        .iter()
        .map(|(e, _)| e.clone())
        .min()
        .unwrap_or_else(Rat::one);
    let max_k = (budget / &min_step).floor().to_integer().to_i64().unwrap_or(0);
    let base: BTreeMap<Rat, Rat> = tau.iter().cloned().collect();
    let mut tau_pow: BTreeMap<Rat, Rat> = BTreeMap::new();
    tau_pow.insert(Rat::zero(), Rat::one());
    for k in 1..=max_k {
        tau_pow = poly_mul_trunc(&tau_pow, &base, budget);
        if tau_pow.is_empty() {
            break;
        }
        let sign = if k % 2 == 1 { Rat::one() } else { -Rat::one() };
        let factor = sign / Rat::from_integer(Int::from(k));
        for (e, c) in &tau_pow {
            let entry = out.entry(e.clone()).or_insert_with(Rat::zero);
            *entry = entry.clone() + c * &factor;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn poly_mul_trunc(
    a: &BTreeMap<Rat, Rat>,
    b: &BTreeMap<Rat, Rat>,
    budget: &Rat,
) -> BTreeMap<Rat, Rat> {
    let mut out: BTreeMap<Rat, Rat> = BTreeMap::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e = ea + eb;
            if &e > budget {
                continue;
            }
            let entry = out.entry(e).or_insert_with(Rat::zero);
            *entry = entry.clone() + ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn logpoly_mul(
    a: &BTreeMap<(Rat, u32), SymbolicConstant>,
    b: &BTreeMap<(Rat, u32), SymbolicConstant>,
    budget: &Rat,
) -> BTreeMap<(Rat, u32), SymbolicConstant> {
    let mut out: BTreeMap<(Rat, u32), SymbolicConstant> = BTreeMap::new();
    for ((ea, la), ca) in a {
        for ((eb, lb), cb) in b {
            let e = ea + eb;
            if &e > budget {
                continue;
            }
            let key = (e, la + lb);
            let entry = out.entry(key.clone()).or_insert_with(SymbolicConstant::zero);
            *entry = entry.add(&ca.mul(cb));
            if entry.is_zero() {
                out.remove(&key);
            }
        }
    }
    out
}

/// Numeric counterpart of `pullback` for one `(alpha, log-degree)` slot:
/// each series coefficient and each arc factor is evaluated as a ball first
/// and the contributions are summed in floating form. Used as the
/// certificate against the symbolic assembly.
pub fn pullback_numeric_coefficient(
    series: &LaurentLogSeries,
    arc: &DegenerationArc,
    alpha: &Rat,
    log_degree: u32,
    prec: u32,
) -> Result<ComplexBall> {
    let env = arc.env();
    let n = series.base.len();
    let mut acc = ComplexBall::zero(prec);
    for ((t_off, l), coeff) in &series.terms {
        let x: Vec<Rat> = series
            .base
            .iter()
            .zip(t_off)
            .map(|(b, t)| b + Rat::from_integer(t.clone()))
            .collect();
        let alpha0: Rat = x
            .iter()
            .zip(&arc.coords)
            .map(|(xi, c)| xi * Rat::from_integer(Int::from(c.order)))
            .sum();
        if &alpha0 > alpha {
            continue;
        }
        // numeric head: coeff * prod in^x
        let mut head = coeff.eval(prec, &env)?;
        for (i, xi) in x.iter().enumerate() {
            if arc.coords[i].initial.is_one() || xi.is_zero() {
                continue;
            }
            let base = ComplexBall::from_rat(&arc.coords[i].initial, prec);
            head = head.mul(&base.pow_rat(xi));
        }
        // numeric tail coefficients
        let budget = alpha - &alpha0;
        let mut tail: BTreeMap<Rat, ComplexBall> = BTreeMap::new();
        tail.insert(Rat::zero(), ComplexBall::one(prec));
        for (i, xi) in x.iter().enumerate() {
            if arc.coords[i].taylor.is_empty() || xi.is_zero() {
                continue;
            }
            let tau: Vec<(Rat, Rat)> = arc.coords[i]
                .taylor
                .iter()
                .enumerate()
                .map(|(j, cj)| {
                    (
                        Rat::from_integer(Int::from(j as i64 + 1)),
                        cj / &arc.coords[i].initial,
                    )
                })
                .collect();
            let exp = binomial_expand(&tau, xi, &budget);
            let mut next: BTreeMap<Rat, ComplexBall> = BTreeMap::new();
            for (ea, ca) in &tail {
                for (eb, cb) in &exp {
                    let e = ea + eb;
                    if &e > &budget {
                        continue;
                    }
                    let v = ca.mul(&ComplexBall::from_rat(cb, prec));
                    let entry = next.entry(e).or_insert_with(|| ComplexBall::zero(prec));
                    *entry = entry.add(&v);
                }
            }
            tail = next;
        }
        // numeric log parts
        let mut log_parts: BTreeMap<(Rat, u32), ComplexBall> = BTreeMap::new();
        log_parts.insert((Rat::zero(), 0), ComplexBall::one(prec));
        for (i, li) in l.iter().enumerate() {
            for _ in 0..*li {
                let mut factor: BTreeMap<(Rat, u32), ComplexBall> = BTreeMap::new();
                if arc.coords[i].order != 0 {
                    factor.insert(
                        (Rat::zero(), 1),
                        ComplexBall::from_real(RealBall::from_int(arc.coords[i].order, prec)),
                    );
                }
                if !arc.coords[i].initial.is_one() {
                    let lg = ComplexBall::from_real(
                        RealBall::from_rat(&arc.coords[i].initial, prec).ln(),
                    );
                    let entry = factor
                        .entry((Rat::zero(), 0))
                        .or_insert_with(|| ComplexBall::zero(prec));
                    *entry = entry.add(&lg);
                }
                if !arc.coords[i].taylor.is_empty() {
                    let tau: Vec<(Rat, Rat)> = arc.coords[i]
                        .taylor
                        .iter()
                        .enumerate()
                        .map(|(j, cj)| {
                            (
                                Rat::from_integer(Int::from(j as i64 + 1)),
                                cj / &arc.coords[i].initial,
                            )
                        })
                        .collect();
                    for (e, c) in log_series(&tau, &budget) {
                        let entry = factor
                            .entry((e, 0))
                            .or_insert_with(|| ComplexBall::zero(prec));
                        *entry = entry.add(&ComplexBall::from_rat(&c, prec));
                    }
                }
                let mut next: BTreeMap<(Rat, u32), ComplexBall> = BTreeMap::new();
                for ((ea, la), ca) in &log_parts {
                    for ((eb, lb), cb) in &factor {
                        let e = ea + eb;
                        if &e > &budget {
                            continue;
                        }
                        let v = ca.mul(cb);
                        let entry = next
                            .entry((e, la + lb))
                            .or_insert_with(|| ComplexBall::zero(prec));
                        *entry = entry.add(&v);
                    }
                }
                log_parts = next;
            }
        }
        for (te, tc) in &tail {
            for ((le, ld), lc) in &log_parts {
                if *ld != log_degree {
                    continue;
                }
                let e = &alpha0 + te + le;
                if &e != alpha {
                    continue;
                }
                acc = acc.add(&head.mul(tc).mul(lc));
            }
        }
    }
    let _ = n;
    Ok(acc)
}

/// One row of the limiting-period table.
#[derive(Debug, Clone)]
pub struct TableRow {
    pub c: Vec<Int>,
    pub member: Vec<Int>,
    pub alpha0: Rat,
    /// leading window `[alpha0, alpha0 + 1)`: exponent, log degree,
    /// coefficient, ring verdict, certificate gap
    pub leading: Vec<LeadingEntry>,
    pub expansion: PuiseuxLogSeries,
}

#[derive(Debug, Clone)]
pub struct LeadingEntry {
    pub alpha: Rat,
    pub log_degree: u32,
    pub coefficient: SymbolicConstant,
    pub report: RingReport,
    pub certificate_gap: f64,
    pub numeric: (f64, f64),
}

#[derive(Debug, Clone)]
pub struct LimitingPeriodTable {
    pub n_a: Int,
    pub cprime: Vec<Rat>,
    pub triangulation: KnownTriangulation,
    pub rows: Vec<TableRow>,
    /// the emitted rows generate the period entries; the literal matrix
    /// would need the V-filtration indices, which are out of scope
    pub generating_set_only: bool,
}

/// Options of the pipeline.
#[derive(Debug, Clone)]
pub struct TableOptions {
    /// kernel steps admitted per direction in the truncation bound
    pub depth: i64,
    pub eps_order: i64,
    pub precision: u32,
    pub tolerance: f64,
}

impl Default for TableOptions {
    fn default() -> Self {
        TableOptions {
            depth: 8,
            eps_order: 8,
            precision: 128,
            tolerance: 1e-10,
        }
    }
}

/// Full pipeline: skeleton test, triangulation recognition, continuation,
/// pullback, leading-coefficient extraction, ring reports and certificates.
pub fn limiting_period_table(
    a: &ExponentMatrix,
    arc: &DegenerationArc,
    cs: &[Vec<Int>],
    opts: &TableOptions,
) -> Result<LimitingPeriodTable> {
    arc.validate()?;
    let lattice = kernel_lattice(a)?;
    let wf = arc.weight();
    if skeleton_membership(a, &wf)? {
        return Err(Error::SkeletonHit(format!(
            "arc orders {:?} lie on the skeleton; the subdivision is not a triangulation",
            arc.coords.iter().map(|c| c.order).collect::<Vec<_>>()
        )));
    }
    let sub = subdivision_from_weight(a, &wf)?;
    let tri = recognize_triangulation(a, &sub).ok_or_else(|| {
        Error::UnsupportedTriangulation(
            "arc induces a regular triangulation outside {T(Fer), T(a_1)}".into(),
        )
    })?;
    if let KnownTriangulation::Dwork { pivot } = tri {
        if pivot != 0 {
            return Err(Error::UnsupportedTriangulation(
                "Dwork continuation is implemented for pivot column 1".into(),
            ));
        }
    }
    let n_a = compute_n_a(a)?;
    let ram = n_a.to_u32().ok_or_else(|| Error::Internal("N_A too large".into()))?;
    let d = a.degree.to_u32().unwrap();
    let reps = coset_representatives(d, a.n, &a.generators_mod_d());
    let env = arc.env();
    let row_inputs: Vec<(Vec<Int>, Vec<Int>)> = {
        let mut v = Vec::new();
        for c in cs {
            for p in p_set(a, c, &reps) {
                v.push((c.clone(), p));
            }
        }
        v
    };
    // deterministic perturbation-direction candidates: the geometric default
    // first, then other geometric bases when a parameter collides with it
    let mut last_err: Option<Error> = None;
    for cprime in cprime_candidates(a.n) {
        let rows: Vec<Result<TableRow>> = crate::par::map_collect(row_inputs.clone(), |(c, p)| {
            build_row(a, &lattice, arc, &c, &p, tri, ram, &cprime, opts, &env)
        });
        let mut out_rows = Vec::with_capacity(rows.len());
        let mut failed = None;
        for r in rows {
            match r {
                Ok(row) => out_rows.push(row),
                Err(e @ (Error::Pole(_) | Error::Malformed(_))) => {
                    failed = Some(e);
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        match failed {
            None => {
                return Ok(LimitingPeriodTable {
                    n_a,
                    cprime,
                    triangulation: tri,
                    rows: out_rows,
                    generating_set_only: true,
                })
            }
            Some(e) => last_err = Some(e),
        }
    }
    Err(last_err.unwrap_or_else(|| Error::Internal("no perturbation direction worked".into())))
}

/// Perturbation-direction candidates `(1, k, k^2, ...)` for k = 2, 3, 5, 7.
pub fn cprime_candidates(n: usize) -> Vec<Vec<Rat>> {
    [2i64, 3, 5, 7]
        .iter()
        .map(|&k| {
            let mut v = Vec::with_capacity(n);
            let mut cur = Rat::one();
            for _ in 0..n {
                v.push(cur.clone());
                cur = cur * Rat::from_integer(Int::from(k));
            }
            v
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn build_row(
    a: &ExponentMatrix,
    lattice: &KernelLattice,
    arc: &DegenerationArc,
    c: &[Int],
    p: &[Int],
    tri: KnownTriangulation,
    ram: u32,
    cprime: &[Rat],
    opts: &TableOptions,
    env: &SymbolEnv,
) -> Result<TableRow> {
    let wf = arc.weight();
    let c_rat: Vec<Rat> = c.iter().map(|v| Rat::from_integer(v.clone())).collect();
    // prefactor of the key expansion
    let total: Int = c.iter().cloned().sum();
    let r = (total / &a.degree).to_i64().unwrap();
    let mut fact = Rat::one();
    for j in 1..r {
        fact = fact * Rat::from_integer(Int::from(j));
    }
    let mut prefactor =
        SymbolicConstant::two_pi_i_pow(a.n as i64).scale_rat(&(Rat::one() / fact));
    if r % 2 == 1 {
        prefactor = prefactor.neg();
    }
    let log_series = match tri {
        KnownTriangulation::Fermat => {
            let exponent = crate::series::Exponent::fermat(a, p, &c_rat)?;
            let bound = weight_bound(lattice, &exponent.gamma, &wf, opts.depth);
            let s = crate::series::truncated_gamma_series(a, lattice, &exponent, &wf, &bound)?;
            vec![wrap_series(&s)]
        }
        KnownTriangulation::Dwork { .. } => {
            let expansion =
                crate::dwork::continue_to_dwork(a, &c_rat, p, cprime, opts.eps_order)?;
            continued_to_log_series(a, lattice, &expansion, &wf, opts)?
        }
    };
    // pull back and sum
    let mut pulled: Option<PuiseuxLogSeries> = None;
    for ls in &log_series {
        let scaled = ls.scale(&prefactor);
        let pb = pullback(&scaled, arc, ram)?;
        pulled = Some(match pulled {
            None => pb,
            Some(acc) => acc.add(&pb),
        });
    }
    let expansion = pulled.ok_or_else(|| Error::Internal("empty expansion".into()))?;
    let alpha0 = expansion
        .leading_exponent()
        .ok_or_else(|| Error::Internal("expansion vanished identically".into()))?;
    // leading window [alpha0, alpha0 + 1)
    let window_end = &alpha0 + Rat::one();
    let mut leading = Vec::new();
    for ((alpha, ld), coeff) in &expansion.terms {
        if alpha >= &window_end || coeff.is_zero() {
            continue;
        }
        let report = in_ring_report(
            coeff,
            ram,
            &Rat::zero(),
            Extension {
                logs: true,
                l_values: true,
                initial_roots: true,
            },
        );
        // certificate: symbolic value vs floating reassembly
        let sym = coeff.eval(opts.precision, env)?;
        // reconstruct: numeric pullback of the same slot, divided by nothing
        // (prefactor folded into the series)
        let mut numeric = ComplexBall::zero(opts.precision);
        for ls in &log_series {
            let scaled = ls.scale(&prefactor);
            numeric = numeric.add(&pullback_numeric_coefficient(
                &scaled,
                arc,
                alpha,
                *ld,
                opts.precision,
            )?);
        }
        let gap = sym.sub(&numeric).abs().abs_upper().to_f64();
        if gap > opts.tolerance {
            return Err(Error::Numeric(format!(
                "certificate gap {gap:e} above tolerance at t^{alpha} log^{ld}"
            )));
        }
        leading.push(LeadingEntry {
            alpha: alpha.clone(),
            log_degree: *ld,
            coefficient: coeff.clone(),
            report,
            certificate_gap: gap,
            numeric: sym.to_f64_pair(),
        });
    }
    Ok(TableRow {
        c: c.to_vec(),
        member: p.to_vec(),
        alpha0,
        leading,
        expansion,
    })
}

/// Weight bound admitting `depth` kernel steps per direction above the
/// exponent's own weight.
pub fn weight_bound(lattice: &KernelLattice, gamma: &[Rat], w: &[Rat], depth: i64) -> Rat {
    let wg: Rat = w.iter().zip(gamma).map(|(a, b)| a * b).sum();
    let mut step = Rat::zero();
    for u in &lattice.basis {
        let s = crate::exact::dot_rat_int(w, u);
        let a = if s.is_negative() { -s } else { s };
        if a > step {
            step = a;
        }
    }
    if step.is_zero() {
        step = Rat::one();
    }
    wg + step * Rat::from_integer(Int::from(depth))
}

/// Wrap a log-free truncated series as a trivial log series.
pub fn wrap_series(s: &crate::series::TruncatedSeries) -> LaurentLogSeries {
    let n = s.exponent.gamma.len();
    LaurentLogSeries {
        base: s.exponent.gamma.clone(),
        weight: s.weight.clone(),
        bound: s.bound.clone(),
        terms: s
            .terms
            .iter()
            .map(|(u, c)| ((u.clone(), vec![0u32; n]), c.clone()))
            .collect(),
    }
}

/// Realize a continued expansion as log series: plain linear combination on
/// the very generic route, per-eigenclass SST limits otherwise.
pub fn continued_to_log_series(
    a: &ExponentMatrix,
    lattice: &KernelLattice,
    expansion: &crate::dwork::ContinuedExpansion,
    wf: &[Rat],
    opts: &TableOptions,
) -> Result<Vec<LaurentLogSeries>> {
    let mut out = Vec::new();
    for class in expansion.eigenclasses() {
        let members: Vec<crate::series::Exponent> = class
            .iter()
            .map(|&i| expansion.terms[i].exponent.clone())
            .collect();
        let coeffs: Vec<crate::eps::EpsSeries<SymbolicConstant>> = class
            .iter()
            .map(|&i| expansion.terms[i].coefficient.clone())
            .collect();
        let bound = weight_bound(lattice, &members[0].gamma, wf, opts.depth);
        let all_plain = coeffs
            .iter()
            .all(|s| s.valuation().map_or(true, |v| v >= 0));
        if all_plain && members.len() == 1 {
            let s =
                crate::series::truncated_gamma_series(a, lattice, &members[0], wf, &bound)?;
            let c0 = coeffs[0].coefficient(0);
            out.push(wrap_series(&s).scale(&c0));
            continue;
        }
        // eps route (also covers plain multi-member classes uniformly)
        let family = crate::sst::PerturbedExponentFamily::new(
            a,
            members,
            expansion.cprime.clone(),
        )?;
        let member_terms: Vec<_> = (0..family.len())
            .map(|k| {
                crate::sst::perturbed_series_terms(
                    lattice,
                    &family.members[k],
                    &family.deltas[k],
                    &family.base,
                    wf,
                    &bound,
                    opts.eps_order,
                    true,
                )
            })
            .collect::<Result<_>>()?;
        let limit =
            crate::sst::sst_limit(&family, &member_terms, &coeffs, wf, &bound, opts.eps_order)?;
        out.push(limit);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat, rat_int};

    fn toy() -> ExponentMatrix {
        ExponentMatrix::fermat_deformation(2, 3, &[vec![1, 2]]).unwrap()
    }

    #[test]
    fn monomial_pullback_matches_series() {
        // arc f = (t, 1, 1) on the toy Dwork data, series phi(gamma^c_0)
        let a = toy();
        let lattice = kernel_lattice(&a).unwrap();
        let c = vec![rat_int(1), rat_int(2)];
        let e = crate::series::Exponent::fermat(&a, &[int(0)], &c).unwrap();
        let arc = DegenerationArc::monomial(&[1, 0, 0]);
        let wf = arc.weight();
        let bound = weight_bound(&lattice, &e.gamma, &wf, 3);
        let s = crate::series::truncated_gamma_series(&a, &lattice, &e, &wf, &bound).unwrap();
        let pb = pullback(&wrap_series(&s), &arc, 6).unwrap();
        // leading at t^0: 1/(Gamma(2/3) Gamma(1/3)); next term at t^3
        assert_eq!(pb.leading_exponent(), Some(Rat::zero()));
        let lead = pb.coefficient(&Rat::zero(), 0).unwrap();
        let expect = SymbolicConstant::gamma_inv(&rat(2, 3))
            .mul(&SymbolicConstant::gamma_inv(&rat(1, 3)));
        assert_eq!(lead, expect);
        assert!(!pb.coefficient(&rat_int(3), 0).unwrap().is_zero());
        assert!(pb.coefficient(&rat_int(1), 0).unwrap().is_zero());
        assert!(pb.coefficient(&rat_int(100), 0).is_err());
    }

    #[test]
    fn initial_coefficient_scaling() {
        // in_1 = 2: u-term at kernel vector (3,-1,-2) picks up 2^3
        let a = toy();
        let lattice = kernel_lattice(&a).unwrap();
        let c = vec![rat_int(1), rat_int(2)];
        let e = crate::series::Exponent::fermat(&a, &[int(0)], &c).unwrap();
        let mut arc = DegenerationArc::monomial(&[1, 0, 0]);
        arc.coords[0].initial = rat_int(2);
        let wf = arc.weight();
        let bound = weight_bound(&lattice, &e.gamma, &wf, 3);
        let s = crate::series::truncated_gamma_series(&a, &lattice, &e, &wf, &bound).unwrap();
        let pb = pullback(&wrap_series(&s), &arc, 6).unwrap();
        let base = crate::series::gamma_coefficient(
            &e.gamma,
            &[int(3), int(-1), int(-2)],
        );
        let got = pb.coefficient(&rat_int(3), 0).unwrap();
        assert_eq!(got, base.scale_rat(&rat_int(8)));
    }

    #[test]
    fn tail_and_log_substitution() {
        // f_1 = t (1 + t), log z_1 factor splits across log degrees
        let a = toy();
        let series = LaurentLogSeries {
            base: vec![rat_int(1), Rat::zero(), Rat::zero()],
            weight: vec![rat_int(1), Rat::zero(), Rat::zero()],
            bound: rat_int(4),
            terms: [
                ((vec![int(0), int(0), int(0)], vec![1u32, 0, 0]), SymbolicConstant::one()),
            ]
            .into_iter()
            .collect(),
        };
        let mut arc = DegenerationArc::monomial(&[1, 0, 0]);
        arc.coords[0].taylor = vec![rat_int(1)];
        let pb = pullback(&series, &arc, 6).unwrap();
        // z_1^1 log z_1 with z_1 = t(1+t):
        //   (t + t^2)(log t + log(1+t)) =
        //   t log t + t^2 log t + t^2 + (1/2) t^3 + ...
        let _ = &a;
        assert_eq!(pb.coefficient(&rat_int(1), 1).unwrap(), SymbolicConstant::one());
        assert_eq!(pb.coefficient(&rat_int(2), 1).unwrap(), SymbolicConstant::one());
        assert_eq!(pb.coefficient(&rat_int(2), 0).unwrap(), SymbolicConstant::one());
        // t^3 log-free: from t * (t^2/2 ... log(1+t) = t - t^2/2 + t^3/3)
        // plus t^2 * (t - t^2/2): coefficient 1/3 - 1/2 + 1 = ... compute:
        // (t + t^2)(t - t^2/2 + t^3/3) = t^2 + t^3(1 - 1/2) + ...
        assert_eq!(
            pb.coefficient(&rat_int(3), 0).unwrap(),
            SymbolicConstant::from_rat(rat(1, 2))
        );
    }

    #[test]
    fn numeric_certificate_agrees() {
        let a = toy();
        let lattice = kernel_lattice(&a).unwrap();
        let c = vec![rat_int(1), rat_int(2)];
        let e = crate::series::Exponent::fermat(&a, &[int(1)], &c).unwrap();
        let mut arc = DegenerationArc::monomial(&[1, 0, 0]);
        arc.coords[0].initial = rat(3, 2);
        arc.coords[0].taylor = vec![rat(1, 3), rat(-1, 5)];
        let wf = arc.weight();
        let bound = weight_bound(&lattice, &e.gamma, &wf, 4);
        let s = crate::series::truncated_gamma_series(&a, &lattice, &e, &wf, &bound).unwrap();
        let ls = wrap_series(&s);
        let pb = pullback(&ls, &arc, 6).unwrap();
        let env = arc.env();
        for ((alpha, ld), coeff) in pb.terms.iter().take(6) {
            let sym = coeff.eval(128, &env).unwrap();
            let num = pullback_numeric_coefficient(&ls, &arc, alpha, *ld, 128).unwrap();
            let gap = sym.sub(&num).abs().abs_upper().to_f64();
            assert!(gap < 1e-25, "gap {gap:e} at {alpha}, {ld}");
        }
    }

    #[test]
    fn toy_table_end_to_end() {
        let a = toy();
        let arc = DegenerationArc::monomial(&[1, 0, 0]);
        let table = limiting_period_table(
            &a,
            &arc,
            &[vec![int(1), int(2)]],
            &TableOptions::default(),
        )
        .unwrap();
        assert_eq!(table.rows.len(), 2);
        assert_eq!(table.triangulation, KnownTriangulation::Fermat);
        // the alpha = 0 row equals the closed-form cycle value
        let row0 = table
            .rows
            .iter()
            .find(|r| r.member.iter().all(|v| v.is_zero()))
            .unwrap();
        assert_eq!(row0.alpha0, Rat::zero());
        let lead = &row0.leading[0];
        let cycle = crate::fermat::fermat_cycle_value(2, 3, &[int(1), int(2)], 1).unwrap();
        assert_eq!(lead.coefficient, cycle);
        assert!(lead.report.pass);
        for row in &table.rows {
            for l in &row.leading {
                assert!(l.certificate_gap < 1e-20);
                assert!(l.report.pass);
            }
        }
    }

    #[test]
    fn skeleton_arc_refused() {
        let a = toy();
        // equal orders put pi_A(w) at the origin of the Gale line
        let arc = DegenerationArc::monomial(&[1, 1, 1]);
        let r = limiting_period_table(
            &a,
            &arc,
            &[vec![int(1), int(2)]],
            &TableOptions::default(),
        );
        match r {
            Err(Error::SkeletonHit(_)) => {}
            other => panic!("expected skeleton hit, got {other:?}"),
        }
    }

    #[test]
    fn dwork_arc_table() {
        // orders (0,1,1) induce T(a_1) on the toy matrix; use a very
        // generic parameter is impossible for integral c, so the eps route
        // is exercised
        let a = toy();
        let arc = DegenerationArc::monomial(&[0, 1, 1]);
        let opts = TableOptions {
            depth: 6,
            ..TableOptions::default()
        };
        let table =
            limiting_period_table(&a, &arc, &[vec![int(1), int(2)]], &opts).unwrap();
        assert!(matches!(
            table.triangulation,
            KnownTriangulation::Dwork { pivot: 0 }
        ));
        assert_eq!(table.rows.len(), 2);
        for row in &table.rows {
            assert!(!row.leading.is_empty());
            for l in &row.leading {
                assert!(l.report.pass, "ring report fails: {:?}", l.report);
                assert!(l.certificate_gap < 1e-10);
            }
        }
    }
}
