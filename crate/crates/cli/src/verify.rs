//! Verification suites behind `gkz-periods verify <suite>`: each check
//! prints one pass/fail line; the exit code is nonzero when any fails.

use gkz_periods::constant::{l_value_from_psi, psi_to_log_l, SymbolEnv, SymbolicConstant};
use gkz_periods::dwork::{
    lacunary_series_eval, mb_eval, mb_residue_sum, residue_sum_eval, MellinBarnesSpec,
};
use gkz_periods::exact::{int, rat, rat_int, Int, Rat};
use gkz_periods::fan::fermat_weight;
use gkz_periods::fermat::{fermat_cycle_quadrature, fermat_cycle_value};
use gkz_periods::lattice::{
    self, index_sets, kernel_lattice, normalized_volume, volume_subgroup_order, ExponentMatrix,
};
use gkz_periods::numeric::{ComplexBall, RealBall};
use gkz_periods::series::{
    gkz_apply, gkz_apply_euler, truncated_gamma_series, Exponent, GkzOperator,
};
use gkz_periods::Error;

struct Report {
    failures: u32,
    checks: u32,
}

impl Report {
    fn new() -> Self {
        Report {
            failures: 0,
            checks: 0,
        }
    }

    fn check(&mut self, name: &str, ok: bool, detail: &str) {
        self.checks += 1;
        if ok {
            println!("PASS {name}{}", fmt_detail(detail));
        } else {
            self.failures += 1;
            println!("FAIL {name}{}", fmt_detail(detail));
        }
    }
}

fn fmt_detail(d: &str) -> String {
    if d.is_empty() {
        String::new()
    } else {
        format!(" ({d})")
    }
}

pub fn run_suite(suite: &str, seed: u64, precision: u32) -> Result<i32, Error> {
    let mut report = Report::new();
    match suite {
        "combinatorics" => combinatorics(&mut report)?,
        "gkz" => gkz(&mut report)?,
        "mb" => mb(&mut report, precision)?,
        "fermat" => fermat(&mut report, precision)?,
        "polygamma" => polygamma(&mut report, precision)?,
        "all" => {
            combinatorics(&mut report)?;
            gkz(&mut report)?;
            fermat(&mut report, precision)?;
            polygamma(&mut report, precision)?;
            mb(&mut report, precision)?;
        }
        other => {
            return Err(Error::Malformed(format!(
                "unknown suite {other}; use combinatorics|gkz|mb|fermat|polygamma|all"
            )))
        }
    }
    let _ = seed;
    println!("{} checks, {} failures", report.checks, report.failures);
    Ok(if report.failures == 0 { 0 } else { 1 })
}

fn combinatorics(r: &mut Report) -> Result<(), Error> {
    let ci = index_sets(7, 6, &[vec![2, 1, 1, 1, 1, 1]]);
    r.check("count of I at (6,7)", ci.elements.len() == 6666, "");
    r.check("class count", ci.classes.len() == 2401, "");
    let h = ci.class_size_histogram();
    let expect: std::collections::BTreeMap<usize, usize> =
        [(2, 1080), (3, 780), (4, 540), (6, 1)].into_iter().collect();
    r.check("class-size histogram", h == expect, "");
    let ci2 = index_sets(7, 6, &[vec![2, 1, 1, 1, 1, 1], vec![1, 1, 2, 1, 1, 1]]);
    r.check("two-generator class count", ci2.classes.len() == 343, "");
    let h2 = ci2.class_size_histogram();
    let expect2: std::collections::BTreeMap<usize, usize> =
        [(15, 48), (16, 72), (20, 108), (21, 72), (26, 42), (30, 1)]
            .into_iter()
            .collect();
    r.check("two-generator histogram", h2 == expect2, "");
    let a = ExponentMatrix::fermat_deformation(6, 7, &[vec![2, 1, 1, 1, 1, 1]])
        .map_err(|e| e)?;
    let reps = lattice::coset_representatives(7, 6, &a.generators_mod_d());
    let c: Vec<Int> = [1, 2, 1, 1, 1, 1].iter().map(|&v| int(v)).collect();
    let pc = lattice::p_set(&a, &c, &reps);
    let got: Vec<i64> = pc
        .iter()
        .map(|p| {
            use num_traits::ToPrimitive;
            p[0].to_i64().unwrap()
        })
        .collect();
    r.check("P_c for c = (1,2,1,1,1,1)", got == vec![0, 1, 2, 4], "");
    // vol/subgroup cross-check on small instances
    let mut all = true;
    for (n, d, gens) in [
        (2usize, 3i64, vec![vec![1i64, 2]]),
        (2, 4, vec![vec![1, 3]]),
        (3, 4, vec![vec![1, 1, 2]]),
        (3, 5, vec![vec![1, 2, 2], vec![3, 1, 1]]),
        (4, 3, vec![vec![1, 1, 1, 0]]),
    ] {
        let a = ExponentMatrix::fermat_deformation(n, d, &gens)?;
        let geo = normalized_volume(&a)?;
        let grp = volume_subgroup_order(&a)?;
        all &= geo == grp;
    }
    r.check("normalized volume = subgroup order", all, "5 instances");
    Ok(())
}

fn gkz(r: &mut Report) -> Result<(), Error> {
    for (label, n, d, gens, c) in [
        ("toy d=3", 2usize, 3i64, vec![vec![1i64, 2]], vec![rat(1, 2), rat(1, 2)]),
        (
            "sec 5.1",
            6,
            7,
            vec![vec![2, 1, 1, 1, 1, 1]],
            vec![
                rat(1, 2),
                rat(5, 2),
                rat(3, 2),
                rat(1, 2),
                rat(1, 2),
                rat(1, 2),
            ],
        ),
    ] {
        let a = ExponentMatrix::fermat_deformation(n, d, &gens)?;
        let lattice = kernel_lattice(&a)?;
        let w = fermat_weight(&a);
        let mut ok = true;
        for p in 0..(d.min(3)) {
            let e = Exponent::fermat(&a, &[int(p)], &c)?;
            let bound = gkz_periods::limit::weight_bound(&lattice, &e.gamma, &w, 6);
            let s = truncated_gamma_series(&a, &lattice, &e, &w, &bound)?;
            for u in &lattice.basis {
                let op = GkzOperator::toric_from_kernel(u);
                ok &= gkz_apply(&op, &s).is_zero_on_certified();
            }
            for row in 0..n {
                ok &= gkz_apply_euler(&a, row, &c[row], &s).is_zero_on_certified();
            }
            // negative control
            let mut bad = s.clone();
            if let Some(key) = bad.terms.keys().next().cloned() {
                let v = bad.terms.get_mut(&key).unwrap();
                *v = v.scale_rat(&rat(7, 5));
                let op = GkzOperator::toric_from_kernel(&lattice.basis[0]);
                ok &= !gkz_apply(&op, &bad).is_zero_on_certified();
            }
        }
        r.check(&format!("GKZ annihilation, {label}"), ok, "");
    }
    Ok(())
}

fn mb(r: &mut Report, precision: u32) -> Result<(), Error> {
    let prec = precision.max(96);
    // d = 2 closed form
    let spec = MellinBarnesSpec::new(2, vec![int(1), int(1)], vec![rat(1, 2), rat(1, 2)], 0)?;
    let zeta = ComplexBall {
        re: RealBall::zero(prec),
        im: RealBall::from_rat(&rat(1, 2), prec),
    };
    let series = lacunary_series_eval(&spec, &zeta, prec)?;
    let quad = mb_eval(&spec, &zeta, prec)?;
    let gap = series.sub(&quad).abs().to_f64();
    r.check("MB series vs quadrature (d=2)", gap < 1e-10, &format!("{gap:.2e}"));
    let terms = mb_residue_sum(&spec, &rat(33, 1))?;
    let zeta_big = ComplexBall {
        re: RealBall::zero(prec),
        im: RealBall::from_int(4, prec),
    };
    let quad_big = mb_eval(&spec, &zeta_big, prec)?;
    let res = residue_sum_eval(&terms, &zeta_big, prec)?;
    let gap = quad_big.sub(&res).abs().to_f64();
    r.check("MB residues vs quadrature (d=2)", gap < 1e-10, &format!("{gap:.2e}"));
    // d = 3 without closed form
    let spec3 = MellinBarnesSpec::new(3, vec![int(1), int(2)], vec![rat(1, 3), rat(2, 3)], 0)?;
    let angle_zeta = |mag: f64| {
        // sector center: arg zeta = pi/3
        let prec = prec;
        let pi = RealBall::pi(prec);
        let third = pi.div(&RealBall::from_int(3, prec));
        let m = RealBall::from_rat(&rat((mag * 1000.0) as i64, 1000), prec);
        ComplexBall {
            re: third.cos().mul(&m),
            im: third.sin().mul(&m),
        }
    };
    let z_small = angle_zeta(0.4);
    let gap = lacunary_series_eval(&spec3, &z_small, prec)?
        .sub(&mb_eval(&spec3, &z_small, prec)?)
        .abs()
        .to_f64();
    r.check("MB series vs quadrature (d=3)", gap < 1e-10, &format!("{gap:.2e}"));
    let terms3 = mb_residue_sum(&spec3, &rat(26, 1))?;
    let z_big = angle_zeta(4.0);
    let gap = mb_eval(&spec3, &z_big, prec)?
        .sub(&residue_sum_eval(&terms3, &z_big, prec)?)
        .abs()
        .to_f64();
    r.check("MB residues vs quadrature (d=3)", gap < 1e-10, &format!("{gap:.2e}"));
    Ok(())
}

fn fermat(r: &mut Report, precision: u32) -> Result<(), Error> {
    let prec = precision.max(96);
    let env = SymbolEnv::default();
    for (n, d, c) in [
        (2usize, 3i64, vec![int(1), int(2)]),
        (2, 4, vec![int(1), int(3)]),
        (3, 4, vec![int(1), int(1), int(2)]),
    ] {
        let closed = fermat_cycle_value(n, d, &c, 1)?.eval(prec, &env)?;
        let quad = fermat_cycle_quadrature(n, d, &c, 96)?;
        let gap = closed.sub(&quad).abs().to_f64();
        r.check(
            &format!("Fermat cycle value n={n} d={d}"),
            gap < 1e-8,
            &format!("{gap:.2e}"),
        );
    }
    Ok(())
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    if b == 0 { a.abs() } else { gcd_i64(b, a % b) }
}

fn polygamma(r: &mut Report, precision: u32) -> Result<(), Error> {
    let prec = precision.max(128);
    let mut worst = 0f64;
    for q in [3i64, 4, 5, 7, 14] {
        for p in 1..q {
            if gcd_i64(p, q) != 1 {
                continue;
            }
            let rw = psi_to_log_l(0, p, q, prec)?;
            worst = worst.max(rw.certificate_gap);
        }
    }
    r.check(
        "psi(0) log identity, q in {3,4,5,7,14}",
        worst < 1e-25,
        &format!("worst {worst:.2e}"),
    );
    let mut worst = 0f64;
    for q in [3u32, 5, 7] {
        for chi in gkz_periods::constant::all_characters(q) {
            if chi.is_trivial() {
                continue;
            }
            let sym = l_value_from_psi(1, &chi)?;
            let lhs = sym.eval(prec, &SymbolEnv::default())?;
            let rhs = chi.eval_l(2, prec);
            worst = worst.max(lhs.sub(&rhs).abs().abs_upper().to_f64());
        }
    }
    r.check(
        "forward L-value sums, q in {3,5,7}",
        worst < 1e-20,
        &format!("worst {worst:.2e}"),
    );
    // structural spot check: psi_diff0(1/2) = -2 log 2
    let lhs = psi_to_log_l(0, 1, 2, prec)?.result;
    let expect = SymbolicConstant::log_rat(&rat(1, 4))?;
    r.check("psi_diff0(1/2) = -2 log 2", lhs == expect, "");
    let _ = rat_int(0);
    let _: Rat = rat(0, 1);
    Ok(())
}
