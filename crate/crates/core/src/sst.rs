//! ε-perturbation of Gamma series and SST limits: expand
//! `1/Gamma(1 + gamma + u + eps delta)` by the three integrality cases,
//! combine members with `eps`-Laurent coefficients, and extract the
//! `eps^0` layer as a log-bearing series.

use std::collections::BTreeMap;

use num_traits::{Signed, ToPrimitive, Zero};

use crate::constant::SymbolicConstant;
use crate::eps::{EpsSeries, LogPoly};
use crate::exact::{Int, Rat};
use crate::lattice::KernelLattice;
use crate::series::{truncation_region, Exponent};
use crate::{Error, Result};

type Sc = SymbolicConstant;
type ScSeries = EpsSeries<Sc>;

/// A family of exponents sharing one residue class mod `Z^N`, each with its
/// perturbation direction `delta_k` (so the perturbed exponent is
/// `gamma_k + eps delta_k`).
#[derive(Debug, Clone)]
pub struct PerturbedExponentFamily {
    pub members: Vec<Exponent>,
    pub deltas: Vec<Vec<Rat>>,
    pub cprime: Vec<Rat>,
    /// Residue-class base: `gamma` of the first member.
    pub base: Vec<Rat>,
}

/// Default perturbation direction `c' = (1, 2, 4, ..., 2^{n-1})`.
pub fn default_cprime(n: usize) -> Vec<Rat> {
    (0..n)
        .map(|i| Rat::from_integer(Int::from(1i64 << i.min(62))))
        .collect()
}

impl PerturbedExponentFamily {
    /// Build a family from exponents at `c`, computing each member's
    /// perturbation direction by solving on its own simplex with zero
    /// offsets.
    pub fn new(
        a: &crate::lattice::ExponentMatrix,
        members: Vec<Exponent>,
        cprime: Vec<Rat>,
    ) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::Malformed("empty perturbation family".into()));
        }
        let base = members[0].gamma.clone();
        let mut deltas = Vec::with_capacity(members.len());
        for m in &members {
            for (g, b) in m.gamma.iter().zip(&base) {
                if !(g - b).is_integer() {
                    return Err(Error::Malformed(
                        "family members must agree mod Z^N".into(),
                    ));
                }
            }
            let delta = Exponent::solve(a, &m.simplex, &zero_offsets(m), &cprime)?;
            deltas.push(delta.gamma);
        }
        // |delta| must be member-independent, deltas pairwise distinct
        let sums: Vec<Rat> = deltas
            .iter()
            .map(|d| d.iter().cloned().sum::<Rat>())
            .collect();
        if sums.iter().any(|s| s != &sums[0]) {
            return Err(Error::Internal(
                "perturbation weights |delta| differ across the family".into(),
            ));
        }
        for i in 0..deltas.len() {
            for j in 0..i {
                if deltas[i] == deltas[j] {
                    return Err(Error::Malformed(
                        "perturbation directions must be pairwise distinct".into(),
                    ));
                }
            }
        }
        Ok(PerturbedExponentFamily {
            members,
            deltas,
            cprime,
            base,
        })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

fn zero_offsets(e: &Exponent) -> Vec<(usize, Int)> {
    e.offsets
        .iter()
        .map(|(j, _)| (*j, Int::zero()))
        .collect()
}

/// The ε-expansion of `1/Gamma(1 + x + eps delta)` to the given order.
/// With `drop_e` the `psi^(0)(1)`-part (the global `e(eps)` factor) is
/// deleted, i.e. `psi` values enter through `psi^(0) - psi^(0)(1)`.
pub fn eps_gamma_coefficient(x: &Rat, delta: &Rat, order: i64, drop_e: bool) -> Result<ScSeries> {
    let trunc = order;
    if delta.is_zero() {
        // no perturbation in this coordinate
        let c = Sc::gamma_inv(&(x + Rat::one()));
        return Ok(ScSeries::from_const(c, trunc));
    }
    let eps_delta = ScSeries::monomial(Sc::from_rat(delta.clone()), 1, trunc);
    // exp(-sum_{n>=1} psi^{(n-1)}(arg) (eps delta)^n / n!) for arg = 1+x or 1
    let psi_exp = |arg: &Rat, drop_e: bool| -> Result<ScSeries> {
        let mut acc = ScSeries::zero(trunc);
        let mut pow = ScSeries::from_const(Sc::one(), trunc);
        let mut factorial = Rat::one();
        for n in 1..=trunc.max(1) {
            pow = pow.mul(&eps_delta);
            if pow.is_zero() {
                break;
            }
            factorial = factorial * Rat::from_integer(Int::from(n as u64));
            let psi_val = if n == 1 {
                if drop_e {
                    Sc::psi_diff0(arg)?
                } else {
                    Sc::psi0_raw(arg)?
                }
            } else {
                Sc::psi(n as u32 - 1, arg)?
            };
            let inv_fact = Rat::new(factorial.denom().clone(), factorial.numer().clone());
            acc = acc.add(&pow.scale(&psi_val).scale_rat(&inv_fact));
        }
        Ok(acc.neg().exp())
    };
    use num_traits::One;
    if !x.is_integer() {
        let arg = x + Rat::one();
        let head = Sc::gamma_inv(&arg);
        Ok(psi_exp(&arg, drop_e)?.scale(&head))
    } else {
        let xi = x.to_integer();
        let tail = psi_exp(&Rat::one(), drop_e)?;
        if xi.is_negative() {
            // eps delta (eps delta - 1) ... (eps delta + 1 + x)
            let mut poly = ScSeries::from_const(Sc::one(), trunc);
            let count = (-xi.clone()).to_i64().expect("small shift");
            for j in 0..count {
                let factor = eps_delta.add(&ScSeries::from_const(Sc::from_int(-j), trunc));
                poly = poly.mul(&factor);
            }
            Ok(poly.mul(&tail))
        } else {
            // 1 / ((eps delta + 1)...(eps delta + x))
            let count = xi.to_i64().expect("small shift");
            let mut denom = ScSeries::from_const(Sc::one(), trunc);
            for j in 1..=count {
                let factor = eps_delta.add(&ScSeries::from_const(Sc::from_int(j), trunc));
                denom = denom.mul(&factor);
            }
            let inv = denom
                .invert()
                .ok_or_else(|| Error::Internal("unit series not invertible".into()))?;
            Ok(inv.mul(&tail))
        }
    }
}

/// Terms of one perturbed member, keyed by the integer offset of the
/// tracked monomial from the family base.
pub fn perturbed_series_terms(
    lattice: &KernelLattice,
    member: &Exponent,
    delta: &[Rat],
    base: &[Rat],
    weight: &[Rat],
    bound: &Rat,
    order: i64,
    drop_e: bool,
) -> Result<BTreeMap<Vec<Int>, ScSeries>> {
    let region = truncation_region(lattice, member, weight, bound)?;
    let mut out = BTreeMap::new();
    for (_, u) in region {
        let mut series = ScSeries::from_const(Sc::one(), order);
        for (i, ui) in u.iter().enumerate() {
            let x = &member.gamma[i] + Rat::from_integer(ui.clone());
            series = series.mul(&eps_gamma_coefficient(&x, &delta[i], order, drop_e)?);
            if series.is_zero() {
                break;
            }
        }
        if series.is_zero() {
            continue;
        }
        // key: gamma_member + u - base, an integer vector
        let key: Vec<Int> = member
            .gamma
            .iter()
            .zip(&u)
            .zip(base)
            .map(|((g, ui), b)| {
                let t = g + Rat::from_integer(ui.clone()) - b;
                debug_assert!(t.is_integer());
                t.to_integer()
            })
            .collect();
        let entry = out.entry(key).or_insert_with(|| ScSeries::zero(order));
        *entry = entry.add(&series);
    }
    Ok(out)
}

/// A truncated multivariate Laurent series with formal coordinate logs:
/// terms keyed by (integer offset from the base exponent, log multi-index).
#[derive(Debug, Clone)]
pub struct LaurentLogSeries {
    pub base: Vec<Rat>,
    pub weight: Vec<Rat>,
    pub bound: Rat,
    pub terms: BTreeMap<(Vec<Int>, Vec<u32>), SymbolicConstant>,
}

impl LaurentLogSeries {
    pub fn max_log_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|(_, l)| l.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn coefficient(&self, t: &[Int], l: &[u32]) -> SymbolicConstant {
        self.terms
            .get(&(t.to_vec(), l.to_vec()))
            .cloned()
            .unwrap_or_else(SymbolicConstant::zero)
    }

    /// Keys grouped by exponent offset.
    pub fn offsets(&self) -> Vec<Vec<Int>> {
        let mut v: Vec<Vec<Int>> = self.terms.keys().map(|(t, _)| t.clone()).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Is the offset within the weight-certified region?
    pub fn in_region(&self, t: &[Int]) -> bool {
        let wg: Rat = self
            .weight
            .iter()
            .zip(&self.base)
            .map(|(a, b)| a * b)
            .sum();
        let wt: Rat = self
            .weight
            .iter()
            .zip(t)
            .map(|(a, b)| a * Rat::from_integer(b.clone()))
            .sum();
        wg + wt <= self.bound
    }

    /// Scale every coefficient.
    pub fn scale(&self, c: &SymbolicConstant) -> LaurentLogSeries {
        LaurentLogSeries {
            base: self.base.clone(),
            weight: self.weight.clone(),
            bound: self.bound.clone(),
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.clone(), v.mul(c)))
                .collect(),
        }
    }
}

/// The SST limit `lim_{eps->0} sum_k C_k(eps) phi_k`: combines member term
/// tables with `eps`-Laurent coefficients and the formal `z^{eps delta_k}`
/// log factors, then extracts the `eps^0` layer.
pub fn sst_limit(
    family: &PerturbedExponentFamily,
    member_terms: &[BTreeMap<Vec<Int>, ScSeries>],
    coeffs: &[ScSeries],
    weight: &[Rat],
    bound: &Rat,
    order: i64,
) -> Result<LaurentLogSeries> {
    assert_eq!(member_terms.len(), family.len());
    assert_eq!(coeffs.len(), family.len());
    let n = family.base.len();
    // union of keys
    let mut keys: std::collections::BTreeSet<Vec<Int>> = std::collections::BTreeSet::new();
    for t in member_terms {
        keys.extend(t.keys().cloned());
    }
    let mut terms = BTreeMap::new();
    for key in keys {
        // total(eps) = sum_k C_k(eps) phi_{k,key}(eps) exp(eps Lambda_k)
        let mut total: EpsSeries<LogPoly> = EpsSeries::zero(order);
        for k in 0..family.len() {
            let Some(phi) = member_terms[k].get(&key) else {
                continue;
            };
            let scalar = coeffs[k].mul(phi);
            if scalar.is_zero() {
                continue;
            }
            let lifted: EpsSeries<LogPoly> = scalar.map(|c| LogPoly::constant(c.clone(), n));
            // exp(eps * sum_i delta_i L_i)
            let lambda = LogPoly {
                terms: (0..n)
                    .filter(|&i| !family.deltas[k][i].is_zero())
                    .map(|i| {
                        let mut l = vec![0u32; n];
                        l[i] = 1;
                        (l, Sc::from_rat(family.deltas[k][i].clone()))
                    })
                    .collect(),
            };
            let exp_factor = EpsSeries::monomial(lambda, 1, order).exp();
            total = total.add(&lifted.mul(&exp_factor));
        }
        if let Some(v) = total.valuation() {
            if v < 0 {
                return Err(Error::LimitNotFound(format!(
                    "eps^{v} survives at tracked monomial {key:?}"
                )));
            }
        }
        let layer = total.coefficient(0);
        for (l, c) in layer.terms {
            if c.is_zero() {
                continue;
            }
            let l = if l.len() == n { l } else { vec![0u32; n] };
            terms.insert((key.clone(), l), c);
        }
    }
    Ok(LaurentLogSeries {
        base: family.base.clone(),
        weight: weight.to_vec(),
        bound: bound.clone(),
        terms,
    })
}

/// Find `eps`-Laurent coefficient vectors producing a full set of
/// independent limits, by fraction-free elimination over the `eps`-Laurent
/// field on the tracked-monomial coefficient matrix.
pub fn auto_limit_basis(
    a: &crate::lattice::ExponentMatrix,
    lattice: &KernelLattice,
    family: &PerturbedExponentFamily,
    weight: &[Rat],
    bound: &Rat,
) -> Result<(Vec<Vec<ScSeries>>, Vec<LaurentLogSeries>)> {
    let _ = a;
    let s = family.len() as i64;
    let mut order = 2 * s + 2;
    for _attempt in 0..3 {
        match auto_limit_basis_at_order(lattice, family, weight, bound, order)? {
            Some(result) => return Ok(result),
            None => {
                order *= 2;
            }
        }
    }
    Err(Error::Internal(
        "auto_limit_basis: cancellation exhausted the eps truncation".into(),
    ))
}

fn auto_limit_basis_at_order(
    lattice: &KernelLattice,
    family: &PerturbedExponentFamily,
    weight: &[Rat],
    bound: &Rat,
    order: i64,
) -> Result<Option<(Vec<Vec<ScSeries>>, Vec<LaurentLogSeries>)>> {
    let n = family.base.len();
    let s = family.len();
    let member_terms: Vec<BTreeMap<Vec<Int>, ScSeries>> = {
        let mut v = Vec::with_capacity(s);
        for k in 0..s {
            v.push(perturbed_series_terms(
                lattice,
                &family.members[k],
                &family.deltas[k],
                &family.base,
                weight,
                bound,
                order,
                true,
            )?);
        }
        v
    };
    // columns: (key, log multi-index) with |l| <= s - 1
    let mut columns: std::collections::BTreeSet<(Vec<Int>, Vec<u32>)> =
        std::collections::BTreeSet::new();
    let mut entries: Vec<BTreeMap<(Vec<Int>, Vec<u32>), ScSeries>> = Vec::with_capacity(s);
    for k in 0..s {
        let mut row = BTreeMap::new();
        for (key, phi) in &member_terms[k] {
            // expand exp(eps Lambda_k): contribution at log index l is
            // eps^{|l|} prod delta_i^{l_i} / l_i!
            for l in log_indices(n, (s - 1) as u32, &family.deltas[k]) {
                let total: u32 = l.iter().sum();
                let mut c = Rat::one();
                for i in 0..n {
                    for rep in 0..l[i] {
                        c = c * &family.deltas[k][i] / Rat::from_integer(Int::from(rep as u64 + 1));
                    }
                }
                let contrib = phi
                    .shift(total as i64)
                    .scale_rat(&c);
                if contrib.is_zero() {
                    continue;
                }
                let colkey = (key.clone(), l.clone());
                columns.insert(colkey.clone());
                let e = row.entry(colkey).or_insert_with(|| ScSeries::zero(order));
                *e = e.add(&contrib);
            }
        }
        entries.push(row);
    }
    let columns: Vec<(Vec<Int>, Vec<u32>)> = columns.into_iter().collect();
    // fraction-free echelon with transform tracking
    let mut rows: Vec<(Vec<ScSeries>, Vec<ScSeries>)> = (0..s)
        .map(|k| {
            let r: Vec<ScSeries> = columns
                .iter()
                .map(|c| {
                    entries[k]
                        .get(c)
                        .cloned()
                        .unwrap_or_else(|| ScSeries::zero(order))
                })
                .collect();
            let mut transform = vec![ScSeries::zero(order); s];
            transform[k] = ScSeries::from_const(Sc::one(), order);
            (r, transform)
        })
        .collect();
    let mut used_rows: Vec<usize> = Vec::new();
    let mut used_cols: Vec<usize> = Vec::new();
    for _step in 0..s {
        // pivot: unused (row, col) minimizing entry valuation
        let mut best: Option<(usize, usize, i64)> = None;
        for (ri, (row, _)) in rows.iter().enumerate() {
            if used_rows.contains(&ri) {
                continue;
            }
            for (ci, e) in row.iter().enumerate() {
                if used_cols.contains(&ci) {
                    continue;
                }
                if let Some(v) = e.valuation() {
                    if best.map_or(true, |(_, _, bv)| v < bv) {
                        best = Some((ri, ci, v));
                    }
                }
            }
        }
        let Some((pr, pc, _)) = best else {
            // some unused row has no usable pivot: either exhausted
            // truncation or genuine rank deficiency
            let exhausted = rows.iter().enumerate().any(|(ri, (row, _))| {
                !used_rows.contains(&ri)
                    && row.iter().all(|e| e.is_zero())
            });
            if exhausted {
                return Ok(None);
            }
            return Err(Error::Internal(
                "auto_limit_basis: rank deficiency in the member matrix".into(),
            ));
        };
        let pivot_entry = rows[pr].0[pc].clone();
        let pivot_row = rows[pr].clone();
        for (ri, (row, transform)) in rows.iter_mut().enumerate() {
            if ri == pr || row[pc].is_zero() {
                continue;
            }
            let factor = row[pc].clone();
            for (ci, e) in row.iter_mut().enumerate() {
                *e = pivot_entry.mul(e).sub(&factor.mul(&pivot_row.0[ci]));
            }
            for (ti, t) in transform.iter_mut().enumerate() {
                *t = pivot_entry.mul(t).sub(&factor.mul(&pivot_row.1[ti]));
            }
        }
        used_rows.push(pr);
        used_cols.push(pc);
    }
    // scale each row to valuation zero and take limits
    let mut coeff_vectors = Vec::with_capacity(s);
    let mut limits = Vec::with_capacity(s);
    for &ri in &used_rows {
        let (row, transform) = &rows[ri];
        let vals: Vec<i64> = row.iter().filter_map(|e| e.valuation()).collect();
        let Some(&v) = vals.iter().min() else {
            return Ok(None);
        };
        let coeffs: Vec<ScSeries> = transform.iter().map(|t| t.shift(-v)).collect();
        let limit = sst_limit(
            family,
            &member_terms,
            &coeffs,
            weight,
            bound,
            order - v.abs(),
        )?;
        if limit.terms.is_empty() {
            return Ok(None);
        }
        coeff_vectors.push(coeffs);
        limits.push(limit);
    }
    // independence of the eps^0 layers, verified numerically
    if !limits_independent(&limits)? {
        return Err(Error::Internal(
            "auto_limit_basis produced dependent limits".into(),
        ));
    }
    Ok(Some((coeff_vectors, limits)))
}

fn log_indices(n: usize, max_total: u32, delta: &[Rat]) -> Vec<Vec<u32>> {
    // multi-indices supported on the nonzero entries of delta
    let support: Vec<usize> = (0..n).filter(|&i| !delta[i].is_zero()).collect();
    let mut out = vec![vec![0u32; n]];
    for &i in &support {
        let mut next = Vec::new();
        for base in &out {
            let used: u32 = base.iter().sum();
            for e in 0..=(max_total - used) {
                let mut l = base.clone();
                l[i] = e;
                next.push(l);
            }
        }
        out = next;
    }
    out.sort();
    out.dedup();
    out.retain(|l| l.iter().sum::<u32>() <= max_total);
    out
}

fn limits_independent(limits: &[LaurentLogSeries]) -> Result<bool> {
    let prec = 128;
    let env = crate::constant::SymbolEnv::default();
    // common key set
    let mut keys: std::collections::BTreeSet<(Vec<Int>, Vec<u32>)> =
        std::collections::BTreeSet::new();
    for l in limits {
        keys.extend(l.terms.keys().cloned());
    }
    let keys: Vec<_> = keys.into_iter().collect();
    let mut rows: Vec<Vec<(f64, f64)>> = Vec::new();
    for l in limits {
        let mut row = Vec::with_capacity(keys.len());
        for k in &keys {
            let c = l
                .terms
                .get(k)
                .cloned()
                .unwrap_or_else(SymbolicConstant::zero);
            let v = c.eval(prec, &env)?;
            row.push(v.to_f64_pair());
        }
        rows.push(row);
    }
    // numeric rank by Gaussian elimination over complex f64
    let m = rows.len();
    let ncols = keys.len();
    let mut rank = 0usize;
    let mut col = 0usize;
    let norm = rows
        .iter()
        .flat_map(|r| r.iter().map(|(a, b)| (a * a + b * b).sqrt()))
        .fold(0.0f64, f64::max)
        .max(1e-300);
    while rank < m && col < ncols {
        let (pi, pv) = (rank..m)
            .map(|i| {
                let (a, b) = rows[i][col];
                (i, (a * a + b * b).sqrt())
            })
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        if pv < norm * 1e-20 {
            col += 1;
            continue;
        }
        rows.swap(rank, pi);
        let (pa, pb) = rows[rank][col];
        let pn = pa * pa + pb * pb;
        for i in 0..m {
            if i == rank {
                continue;
            }
            let (xa, xb) = rows[i][col];
            // factor = x / p
            let fa = (xa * pa + xb * pb) / pn;
            let fb = (xb * pa - xa * pb) / pn;
            for j in col..ncols {
                let (ra, rb) = rows[rank][j];
                let (ia, ib) = rows[i][j];
                rows[i][j] = (ia - (fa * ra - fb * rb), ib - (fa * rb + fb * ra));
            }
        }
        rank += 1;
        col += 1;
    }
    Ok(rank == m)
}

// ---------------------------------------------------------------------
// GKZ operators on log-bearing series
// ---------------------------------------------------------------------

/// Apply a single `z_i d/dz_i` to a log series (exponent-preserving part of
/// the Euler operator).
fn theta_apply(s: &LaurentLogSeries, i: usize) -> LaurentLogSeries {
    let mut terms: BTreeMap<(Vec<Int>, Vec<u32>), SymbolicConstant> = BTreeMap::new();
    for ((t, l), c) in &s.terms {
        // theta_i [z^x (log z)^l] = x_i z^x (log z)^l + l_i z^x (log z)^{l - e_i}
        let x = &s.base[i] + Rat::from_integer(t[i].clone());
        let c1 = c.scale_rat(&x);
        if !c1.is_zero() {
            let e = terms
                .entry((t.clone(), l.clone()))
                .or_insert_with(SymbolicConstant::zero);
            *e = e.add(&c1);
        }
        if l[i] > 0 {
            let mut l2 = l.clone();
            l2[i] -= 1;
            let c2 = c.scale_rat(&Rat::from_integer(Int::from(l[i] as u64)));
            let e = terms
                .entry((t.clone(), l2))
                .or_insert_with(SymbolicConstant::zero);
            *e = e.add(&c2);
        }
    }
    terms.retain(|_, c| !c.is_zero());
    LaurentLogSeries {
        base: s.base.clone(),
        weight: s.weight.clone(),
        bound: s.bound.clone(),
        terms,
    }
}

/// `∂_i` on a log series: shifts the i-th exponent down by one.
fn partial_apply(s: &LaurentLogSeries, i: usize) -> LaurentLogSeries {
    let theta = theta_apply(s, i);
    let mut base = s.base.clone();
    base[i] = &base[i] - Rat::one();
    // z^{-1}: exponent offsets keep their integer keys against the shifted base
    LaurentLogSeries {
        base,
        weight: s.weight.clone(),
        bound: s.bound.clone(),
        terms: theta.terms,
    }
}

use num_traits::One;

/// Euler operator `sum_j a_{row,j} theta_j + c_row` on a log series; returns
/// the result (all keys certified).
pub fn euler_apply_log(
    a: &crate::lattice::ExponentMatrix,
    row: usize,
    c_entry: &Rat,
    s: &LaurentLogSeries,
) -> LaurentLogSeries {
    let mut acc = s.scale(&SymbolicConstant::from_rat(c_entry.clone()));
    for j in 0..a.ncols {
        if a.columns[j][row].is_zero() {
            continue;
        }
        let t = theta_apply(s, j);
        let scaled = t.scale(&SymbolicConstant::from_rat(Rat::from_integer(
            a.columns[j][row].clone(),
        )));
        for (k, c) in scaled.terms {
            let e = acc.terms.entry(k.clone()).or_insert_with(SymbolicConstant::zero);
            *e = e.add(&c);
            if e.is_zero() {
                acc.terms.remove(&k);
            }
        }
    }
    acc.terms.retain(|_, c| !c.is_zero());
    acc
}

/// Toric operator on a log series; output terms at keys whose both
/// preimages satisfy the weight bound are certified.
pub fn toric_apply_log(
    plus: &[Int],
    minus: &[Int],
    s: &LaurentLogSeries,
) -> (LaurentLogSeries, Vec<(Vec<Int>, Vec<u32>)>) {
    let apply_monomial = |s: &LaurentLogSeries, exps: &[Int]| -> LaurentLogSeries {
        let mut cur = s.clone();
        for (i, e) in exps.iter().enumerate() {
            let count = e.to_i64().expect("small exponent");
            for _ in 0..count {
                cur = partial_apply(&cur, i);
            }
        }
        cur
    };
    let left = apply_monomial(s, plus);
    let right = apply_monomial(s, minus);
    // left base: base - plus; right base: base - minus; they differ by
    // u = plus - minus in L_A, so right keys shift by u to align
    let u: Vec<Int> = plus.iter().zip(minus).map(|(p, m)| p - m).collect();
    let mut terms = left.terms.clone();
    for ((t, l), c) in &right.terms {
        // the minus part lives at base - minus = out_base + u
        let key: Vec<Int> = t.iter().zip(&u).map(|(a, b)| a + b).collect();
        let e = terms
            .entry((key.clone(), l.clone()))
            .or_insert_with(SymbolicConstant::zero);
        *e = e.sub(c);
        if e.is_zero() {
            terms.remove(&(key, l.clone()));
        }
    }
    let out = LaurentLogSeries {
        base: left.base.clone(),
        weight: s.weight.clone(),
        bound: s.bound.clone(),
        terms,
    };
    // certified keys: both preimages inside the weight region of the input
    let mut certified = Vec::new();
    let mut all_keys: std::collections::BTreeSet<(Vec<Int>, Vec<u32>)> =
        std::collections::BTreeSet::new();
    all_keys.extend(out.terms.keys().cloned());
    for ((t, l), _) in &left.terms {
        all_keys.insert((t.clone(), l.clone()));
    }
    for (t, l) in all_keys {
        // contributing input keys: t (plus part) and t - u (minus part)
        let p2: Vec<Int> = t.iter().zip(&u).map(|(a, b)| a - b).collect();
        if s.in_region(&t) && s.in_region(&p2) {
            certified.push((t, l));
        }
    }
    (out, certified)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat, rat_int};
    use crate::fan::fermat_weight;
    use crate::lattice::{kernel_lattice, ExponentMatrix};

    #[test]
    fn eps_gamma_cases() {
        // x = 0: unit series, value 1 at eps = 0
        let s = eps_gamma_coefficient(&rat_int(0), &rat_int(1), 4, true).unwrap();
        assert_eq!(s.coefficient(0), Sc::one());
        // x = -2, delta = 1: valuation 1, leading coefficient from
        // eps(eps - 1): coefficient of eps^1 is -(-1)^... = -1? product
        // eps*(eps-1) = -eps + eps^2
        let s = eps_gamma_coefficient(&rat_int(-2), &rat_int(1), 4, true).unwrap();
        assert_eq!(s.valuation(), Some(1));
        assert_eq!(s.coefficient(1), Sc::from_int(-1));
        // x = -1/3: leading 1/Gamma(2/3), next order carries PsiDiff0(2/3)
        let s = eps_gamma_coefficient(&rat(-1, 3), &rat_int(1), 3, true).unwrap();
        assert_eq!(s.valuation(), Some(0));
        assert_eq!(s.coefficient(0), Sc::gamma_inv(&rat(2, 3)));
        let c1 = s.coefficient(1);
        // -psi~(2/3)/Gamma(2/3)
        let expect = Sc::gamma_inv(&rat(2, 3))
            .mul(&Sc::psi_diff0(&rat(2, 3)).unwrap())
            .neg();
        assert_eq!(c1, expect);
    }

    #[test]
    fn single_member_limit_is_plain_series() {
        let a = ExponentMatrix::fermat_deformation(2, 3, &[vec![1, 2]]).unwrap();
        let k = kernel_lattice(&a).unwrap();
        let c = vec![rat(1, 2), rat(1, 2)];
        let e = Exponent::fermat(&a, &[int(0)], &c).unwrap();
        let w = fermat_weight(&a);
        let wg: Rat = w.iter().zip(&e.gamma).map(|(x, y)| x * y).sum();
        let wu = crate::exact::dot_rat_int(&w, &k.basis[0]);
        let bound = wg + wu * rat_int(3);
        let family =
            PerturbedExponentFamily::new(&a, vec![e.clone()], default_cprime(2)).unwrap();
        let terms = perturbed_series_terms(
            &k, &e, &family.deltas[0], &family.base, &w, &bound, 6, true,
        )
        .unwrap();
        let limit = sst_limit(
            &family,
            &[terms],
            &[ScSeries::from_const(Sc::one(), 6)],
            &w,
            &bound,
            6,
        )
        .unwrap();
        assert_eq!(limit.max_log_degree(), 0);
        // matches the unperturbed series coefficients
        let plain =
            crate::series::truncated_gamma_series(&a, &k, &e, &w, &bound).unwrap();
        for (u, coeff) in &plain.terms {
            let key: Vec<Int> = u.clone();
            let got = limit.coefficient(&key, &vec![0u32; 3]);
            assert_eq!(&got, coeff);
        }
    }

    #[test]
    fn difference_quotient_produces_log() {
        // Dwork-side coincident pair: c = (1,2) is resonant for T(a_1); the
        // exponents gamma^c_0(a_1, i) for i = 0, 1 both equal (-1, 0, 0)
        // but perturb in distinct directions under c' = (1, 3).
        let a = ExponentMatrix::fermat_deformation(2, 3, &[vec![1, 2]]).unwrap();
        let k = kernel_lattice(&a).unwrap();
        let c = vec![rat_int(1), rat_int(2)];
        let e0 = Exponent::dwork(&a, &[int(0)], &c, 0).unwrap();
        let e1 = Exponent::dwork(&a, &[int(0)], &c, 1).unwrap();
        assert_eq!(e0.gamma, e1.gamma);
        let cprime = vec![rat_int(1), rat_int(3)];
        let family =
            PerturbedExponentFamily::new(&a, vec![e0.clone(), e1.clone()], cprime).unwrap();
        assert_ne!(family.deltas[0], family.deltas[1]);
        let w = vec![rat_int(0), rat_int(1), rat_int(1)];
        let wg: Rat = w.iter().zip(&e0.gamma).map(|(x, y)| x * y).sum();
        let bound = wg + rat_int(12);
        let order = 6i64;
        let terms: Vec<_> = (0..2)
            .map(|i| {
                perturbed_series_terms(
                    &k,
                    &family.members[i],
                    &family.deltas[i],
                    &family.base,
                    &w,
                    &bound,
                    order,
                    true,
                )
                .unwrap()
            })
            .collect();
        // the family is doubly resonant: every eps^0 coefficient vanishes,
        // so logs require eps^{-2} coefficients with matched leading
        // cancellation ((3/2) phi_1 - phi_2 kills the eps^1 layer)
        let c1 = ScSeries::monomial(Sc::from_rat(rat(3, 2)), -2, order);
        let c2 = ScSeries::monomial(Sc::one(), -2, order).neg();
        let limit = sst_limit(&family, &terms, &[c1, c2], &w, &bound, order).unwrap();
        assert_eq!(limit.max_log_degree(), 1);
        assert!(!limit.terms.is_empty());
        // an unmatched difference quotient must be rejected
        let bad1 = ScSeries::monomial(Sc::one(), -2, order);
        let bad2 = bad1.neg();
        assert!(sst_limit(&family, &terms, &[bad1, bad2], &w, &bound, order).is_err());
    }

    #[test]
    fn drop_e_factor_invariance() {
        let a = ExponentMatrix::fermat_deformation(2, 3, &[vec![1, 2]]).unwrap();
        let k = kernel_lattice(&a).unwrap();
        let c = vec![rat_int(1), rat_int(2)];
        let e0 = Exponent::dwork(&a, &[int(0)], &c, 0).unwrap();
        let e1 = Exponent::dwork(&a, &[int(0)], &c, 1).unwrap();
        let family = PerturbedExponentFamily::new(
            &a,
            vec![e0.clone(), e1.clone()],
            vec![rat_int(1), rat_int(3)],
        )
        .unwrap();
        let w = vec![rat_int(0), rat_int(1), rat_int(1)];
        let wg: Rat = w.iter().zip(&e0.gamma).map(|(x, y)| x * y).sum();
        let bound = wg + rat_int(9);
        let order = 6i64;
        let one_over_eps = ScSeries::monomial(Sc::one(), -1, order);
        let coeffs = [one_over_eps.clone(), one_over_eps.neg()];
        let mut results = Vec::new();
        for drop_e in [true, false] {
            let terms: Vec<_> = (0..2)
                .map(|i| {
                    perturbed_series_terms(
                        &k,
                        &family.members[i],
                        &family.deltas[i],
                        &family.base,
                        &w,
                        &bound,
                        order,
                        drop_e,
                    )
                    .unwrap()
                })
                .collect();
            results.push(sst_limit(&family, &terms, &coeffs, &w, &bound, order).unwrap());
        }
        // the e(eps)-bearing limit may carry the EulerPsiOne tracker in
        // intermediate coefficients; after cancellation both must agree
        assert_eq!(results[0].terms.len(), results[1].terms.len());
        for (k1, v1) in &results[0].terms {
            let v2 = &results[1].terms[k1];
            assert_eq!(v1, v2, "coefficients differ at {k1:?}");
            assert!(!v1.contains_euler_tracker());
        }
    }

    #[test]
    fn auto_limit_toy_resonant_class() {
        let a = ExponentMatrix::fermat_deformation(2, 3, &[vec![1, 2]]).unwrap();
        let k = kernel_lattice(&a).unwrap();
        let c = vec![rat_int(1), rat_int(2)];
        let e0 = Exponent::dwork(&a, &[int(0)], &c, 0).unwrap();
        let e1 = Exponent::dwork(&a, &[int(0)], &c, 1).unwrap();
        let w = vec![rat_int(0), rat_int(1), rat_int(1)];
        let wg: Rat = w.iter().zip(&e0.gamma).map(|(x, y)| x * y).sum();
        let bound = wg + rat_int(15);
        let family = PerturbedExponentFamily::new(
            &a,
            vec![e0, e1],
            vec![rat_int(1), rat_int(3)],
        )
        .unwrap();
        let (coeffs, limits) = auto_limit_basis(&a, &k, &family, &w, &bound).unwrap();
        assert_eq!(limits.len(), 2);
        assert_eq!(coeffs.len(), 2);
        // log degree stays below the family size
        for l in &limits {
            assert!(l.max_log_degree() < 2);
        }
        // every limit is GKZ-annihilated on the certified region
        let op_u = &k.basis[0];
        for l in &limits {
            let plus: Vec<Int> = op_u
                .iter()
                .map(|v| if v.is_positive() { v.clone() } else { Int::zero() })
                .collect();
            let minus: Vec<Int> = op_u
                .iter()
                .map(|v| if v.is_negative() { -v.clone() } else { Int::zero() })
                .collect();
            let (out, certified) = toric_apply_log(&plus, &minus, l);
            for key in &certified {
                assert!(
                    out.terms
                        .get(key)
                        .map(|c| c.is_zero())
                        .unwrap_or(true),
                    "toric residue at {key:?}"
                );
            }
            for row in 0..2 {
                let out = euler_apply_log(&a, row, &c[row], l);
                assert!(out.terms.is_empty(), "euler row {row}");
            }
        }
    }}
