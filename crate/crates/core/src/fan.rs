//! Regular subdivisions from weight vectors, triangulation and skeleton
//! tests, weight extension, and recognition of the Fermat and
//! Dwork-perturbation triangulations.
//!
//! Everything is decided in exact rational arithmetic; boundary weights
//! produce the genuine coarser subdivision, never a silent perturbation.

use num_traits::{Signed, Zero};

use crate::exact::{dot_rat, rank_rat, solve_rat_general, IMat, Int, Rat};
use crate::lattice::{gale_dual, kernel_lattice, ExponentMatrix};
use crate::{Error, Result};

/// One maximal cell of a regular subdivision together with an exact witness
/// normal vector (`normal . a_i = w_i` on the cell, `< w_j` off it).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub indices: Vec<usize>,
    pub normal: Vec<Rat>,
}

/// A regular polyhedral subdivision `S(w)`, stored through its maximal cells.
#[derive(Debug, Clone)]
pub struct Subdivision {
    pub maximal: Vec<Cell>,
    pub weight: Vec<Rat>,
}

impl Subdivision {
    pub fn maximal_index_sets(&self) -> Vec<Vec<usize>> {
        self.maximal.iter().map(|c| c.indices.clone()).collect()
    }
}

/// Compute `S(w)`: a subset belongs to the subdivision iff some vector `n`
/// satisfies `n.a_i = w_i` on it and `n.a_j < w_j` off it. Maximal cells are
/// found by solving for the normal on each rank-n column subset and reading
/// off its tight set.
pub fn subdivision_from_weight(a: &ExponentMatrix, w: &[Rat]) -> Result<Subdivision> {
    if w.len() != a.ncols {
        return Err(Error::Malformed("weight length must match column count".into()));
    }
    let n = a.n;
    let cols: Vec<Vec<Rat>> = a
        .columns
        .iter()
        .map(|c| c.iter().map(|v| Rat::from_integer(v.clone())).collect())
        .collect();
    let mut cells: Vec<Cell> = Vec::new();
    let mut subset = vec![0usize; n];
    enumerate_subsets(a.ncols, n, &mut subset, 0, 0, &mut |sel| {
        let rows: Vec<Vec<Rat>> = sel.iter().map(|&j| cols[j].clone()).collect();
        if rank_rat(&rows) != n {
            return;
        }
        let rhs: Vec<Rat> = sel.iter().map(|&j| w[j].clone()).collect();
        let Some(normal) = crate::exact::solve_rat(&rows, &rhs) else {
            return;
        };
        // tight set and strictness
        let mut tight = Vec::new();
        for j in 0..a.ncols {
            let v = dot_rat(&normal, &cols[j]);
            if v == w[j] {
                tight.push(j);
            } else if v > w[j] {
                return; // not a lower-hull normal
            }
        }
        if !cells.iter().any(|c| c.indices == tight) {
            cells.push(Cell {
                indices: tight,
                normal,
            });
        }
    });
    cells.sort_by(|x, y| x.indices.cmp(&y.indices));
    // maximal cells of a proper subdivision never contain one another
    for i in 0..cells.len() {
        for j in 0..cells.len() {
            if i != j
                && cells[i]
                    .indices
                    .iter()
                    .all(|v| cells[j].indices.contains(v))
            {
                return Err(Error::Internal(
                    "subdivision produced nested maximal cells".into(),
                ));
            }
        }
    }
    Ok(Subdivision {
        maximal: cells,
        weight: w.to_vec(),
    })
}

fn enumerate_subsets(
    total: usize,
    k: usize,
    buf: &mut Vec<usize>,
    pos: usize,
    start: usize,
    f: &mut impl FnMut(&[usize]),
) {
    if pos == k {
        f(buf);
        return;
    }
    for i in start..total {
        buf[pos] = i;
        enumerate_subsets(total, k, buf, pos + 1, i + 1, f);
    }
}

/// Re-verify the witness pattern of a cell exactly.
pub fn verify_cell(a: &ExponentMatrix, w: &[Rat], cell: &Cell) -> bool {
    for j in 0..a.ncols {
        let v: Rat = (0..a.n)
            .map(|i| &cell.normal[i] * Rat::from_integer(a.columns[j][i].clone()))
            .sum();
        let tight = cell.indices.contains(&j);
        if tight && v != w[j] {
            return false;
        }
        if !tight && v >= w[j] {
            return false;
        }
    }
    true
}

/// True iff all maximal cells are simplices (cardinality `n`, independent
/// columns).
pub fn is_regular_triangulation(a: &ExponentMatrix, s: &Subdivision) -> bool {
    s.maximal.iter().all(|c| {
        c.indices.len() == a.n && {
            let sel: Vec<Vec<Int>> = c.indices.iter().map(|&j| a.columns[j].clone()).collect();
            !IMat::from_columns(&sel).det().is_zero()
        }
    })
}

/// Membership of `x` in the cone spanned by the given generators, decided
/// exactly via independent subsets.
fn cone_member(gens: &[Vec<Rat>], x: &[Rat]) -> bool {
    if x.iter().all(|v| v.is_zero()) {
        return true;
    }
    if gens.is_empty() {
        return false;
    }
    let dim = x.len();
    // enumerate independent subsets up to size min(dim, #gens)
    let max_k = gens.len().min(dim);
    for k in 1..=max_k {
        let mut subset = vec![0usize; k];
        let mut found = false;
        enumerate_subsets(gens.len(), k, &mut subset, 0, 0, &mut |sel| {
            if found {
                return;
            }
            let chosen: Vec<Vec<Rat>> = sel.iter().map(|&i| gens[i].clone()).collect();
            if rank_rat(&chosen) != k {
                return;
            }
            // solve sum lambda_i g_i = x as an overdetermined system in lambda
            let rows: Vec<Vec<Rat>> = (0..dim)
                .map(|r| (0..k).map(|c| chosen[c][r].clone()).collect())
                .collect();
            let rhs: Vec<Rat> = x.to_vec();
            if let Some(lambda) = solve_rat_general(&rows, &rhs) {
                // verify consistency and nonnegativity
                let ok = (0..dim).all(|r| {
                    let s: Rat = (0..k).map(|c| &chosen[c][r] * &lambda[c]).sum();
                    s == x[r]
                }) && lambda.iter().all(|l| !l.is_negative());
                if ok {
                    found = true;
                }
            }
        });
        if found {
            return true;
        }
    }
    false
}

/// Skeleton membership: `pi_A(w)` lies in the union of cones spanned by at
/// most `N - n - 1` Gale vectors.
pub fn skeleton_membership(a: &ExponentMatrix, w: &[Rat]) -> Result<bool> {
    let k = kernel_lattice(a)?;
    let r = k.dim();
    if r == 0 {
        return Ok(false);
    }
    let g = gale_dual(a, &k);
    let target = g.project(w);
    if target.iter().all(|v| v.is_zero()) {
        return Ok(true);
    }
    let limit = r - 1; // N - n - 1 generators at most
    if limit == 0 {
        // only the origin; target is nonzero here
        return Ok(false);
    }
    let mut subset = vec![0usize; limit];
    let mut hit = false;
    enumerate_subsets(a.ncols, limit, &mut subset, 0, 0, &mut |sel| {
        if hit {
            return;
        }
        let gens: Vec<Vec<Rat>> = sel.iter().map(|&i| g.vectors[i].clone()).collect();
        if cone_member(&gens, &target) {
            hit = true;
        }
    });
    Ok(hit)
}

/// The Fermat triangulation `T(Fer)`: the single maximal simplex picking the
/// scaled unit columns.
pub fn t_fer_cells(a: &ExponentMatrix) -> Vec<Vec<usize>> {
    let m = a.ncols - a.n;
    vec![(m..a.ncols).collect()]
}

/// The Dwork-perturbation triangulation `T(a_1)` around deformation column
/// `pivot` (0-based): simplices `{pivot} ∪ {m..m+n-1} \ {m+j}` for each `j`
/// with `a_{j,pivot} != 0`.
pub fn t_a1_cells(a: &ExponentMatrix, pivot: usize) -> Vec<Vec<usize>> {
    let m = a.ncols - a.n;
    let mut cells = Vec::new();
    for j in 0..a.n {
        if !a.columns[pivot][j].is_zero() {
            let mut cell: Vec<usize> = vec![pivot];
            for t in 0..a.n {
                if t != j {
                    cell.push(m + t);
                }
            }
            cell.sort();
            cells.push(cell);
        }
    }
    cells.sort();
    cells
}

/// Which known triangulation a subdivision is, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KnownTriangulation {
    Fermat,
    Dwork { pivot: usize },
}

pub fn recognize_triangulation(
    a: &ExponentMatrix,
    s: &Subdivision,
) -> Option<KnownTriangulation> {
    if !is_regular_triangulation(a, s) {
        return None;
    }
    let got = s.maximal_index_sets();
    if got == t_fer_cells(a) {
        return Some(KnownTriangulation::Fermat);
    }
    let m = a.ncols - a.n;
    (0..m)
        .find(|&p| got == t_a1_cells(a, p))
        .map(|p| KnownTriangulation::Dwork { pivot: p })
}

/// Perturbation-of-the-generalized-Dwork test around deformation column 0:
/// the two strict inequality families on the weight vector. When true, the
/// induced subdivision is checked to be `T(a_1)`.
pub fn is_dwork_perturbation(a: &ExponentMatrix, w: &[Rat]) -> Result<bool> {
    if !a.is_fermat_deformation || a.ncols == a.n {
        return Err(Error::Malformed(
            "Dwork perturbation test needs a Fermat deformation with m >= 1".into(),
        ));
    }
    let m = a.ncols - a.n;
    let d = Rat::from_integer(a.degree.clone());
    let ai = |j: usize, l: usize| Rat::from_integer(a.columns[l][j].clone());
    // w_1 d < sum_k w_{m+k} a_{k1}
    let lhs = &w[0] * &d;
    let rhs: Rat = (0..a.n).map(|k| &w[m + k] * ai(k, 0)).sum();
    if lhs >= rhs {
        return Ok(false);
    }
    for l in 1..m {
        for j in 0..a.n {
            if a.columns[0][j].is_zero() {
                continue;
            }
            let lhs = (ai(j, l) * &w[0] - ai(j, 0) * &w[l]) * &d;
            let rhs: Rat = (0..a.n)
                .map(|k| &w[m + k] * (ai(j, l) * ai(k, 0) - ai(j, 0) * ai(k, l)))
                .sum();
            if lhs >= rhs {
                return Ok(false);
            }
        }
    }
    // cross-check: the subdivision must be exactly T(a_1)
    let s = subdivision_from_weight(a, w)?;
    if s.maximal_index_sets() != t_a1_cells(a, 0) {
        return Err(Error::Internal(
            "Dwork inequalities hold but S(w) is not T(a_1)".into(),
        ));
    }
    Ok(true)
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

fn seed_from(a: &ExponentMatrix, w: &[Rat]) -> u64 {
    let mut s: u64 = 0x6b7a_1dd2;
    for c in &a.columns {
        for v in c {
            for b in v.to_signed_bytes_le() {
                s = splitmix64(&mut s) ^ (b as u64);
            }
        }
    }
    for r in w {
        for b in r.numer().to_signed_bytes_le() {
            s = splitmix64(&mut s) ^ (b as u64);
        }
    }
    s
}

/// Extend a weight on the first `m` coordinates of a Fermat-deformation
/// matrix by deterministic pseudorandom entries on the scaled unit columns,
/// retrying with growing magnitude until `S(w')` is a regular triangulation.
pub fn extend_weight(a: &ExponentMatrix, w_front: &[Rat]) -> Result<Vec<Rat>> {
    let m = a.ncols - a.n;
    if w_front.len() != m {
        return Err(Error::Malformed("need one weight per deformation column".into()));
    }
    let mut state = seed_from(a, w_front);
    for attempt in 0..64u32 {
        let magnitude = Int::from(1u64 << (12 + attempt.min(40)));
        let mut w: Vec<Rat> = w_front.to_vec();
        for _ in 0..a.n {
            let r = splitmix64(&mut state) % (1u64 << 12);
            let val = Rat::new(&magnitude * Int::from(r + 1), Int::from(1u64 << 12));
            w.push(val);
        }
        let s = subdivision_from_weight(a, &w)?;
        if is_regular_triangulation(a, &s) {
            return Ok(w);
        }
    }
    Err(Error::Internal(
        "weight extension failed after 64 attempts".into(),
    ))
}

/// A deterministic generic regular triangulation of `A`, used by the
/// normalized-volume computation.
pub fn generic_triangulation(a: &ExponentMatrix) -> Result<Subdivision> {
    let mut state = seed_from(a, &[]);
    for _ in 0..64u32 {
        let w: Vec<Rat> = (0..a.ncols)
            .map(|_| {
                let r = splitmix64(&mut state) % (1u64 << 20);
                Rat::new(Int::from(r), Int::from(1u64 << 10))
            })
            .collect();
        let s = subdivision_from_weight(a, &w)?;
        if is_regular_triangulation(a, &s) {
            return Ok(s);
        }
    }
    Err(Error::Internal(
        "no generic triangulation found after 64 attempts".into(),
    ))
}

/// Weight vector inducing `T(a_1)` around pivot column 0:
/// `w_1 << w_{m+1..m+n} << w_2..w_m`.
pub fn t_a1_weight(a: &ExponentMatrix) -> Vec<Rat> {
    let m = a.ncols - a.n;
    let mut w: Vec<Rat> = Vec::with_capacity(a.ncols);
    w.push(Rat::from_integer(Int::from(0)));
    for j in 1..m {
        w.push(Rat::from_integer(Int::from(1_000_000 + j as i64)));
    }
    for j in 0..a.n {
        w.push(Rat::new(Int::from(1000 + j as i64), Int::from(1000)));
    }
    w
}

/// Weight vector inducing `T(Fer)`: front weights large, unit-column weights
/// small and generic.
pub fn fermat_weight(a: &ExponentMatrix) -> Vec<Rat> {
    let m = a.ncols - a.n;
    let mut w: Vec<Rat> = Vec::with_capacity(a.ncols);
    for j in 0..m {
        w.push(Rat::from_integer(Int::from(1_000_000 + j as i64)));
    }
    for j in 0..a.n {
        w.push(Rat::new(Int::from(1 + j as i64), Int::from(1000)));
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int};

    fn line_config() -> ExponentMatrix {
        // A = [[1,1,1],[0,1,2]]: three collinear points 0,1,2 lifted over a segment
        ExponentMatrix::new(
            2,
            vec![
                vec![Int::from(1), Int::from(0)],
                vec![Int::from(1), Int::from(1)],
                vec![Int::from(1), Int::from(2)],
            ],
            Int::from(1),
        )
        .unwrap()
    }

    #[test]
    fn lower_hull_triangulation() {
        let a = line_config();
        let s = subdivision_from_weight(&a, &[rat_int(1), rat_int(0), rat_int(1)]).unwrap();
        assert_eq!(s.maximal_index_sets(), vec![vec![0, 1], vec![1, 2]]);
        assert!(is_regular_triangulation(&a, &s));
        for c in &s.maximal {
            assert!(verify_cell(&a, &s.weight, c));
        }
    }

    #[test]
    fn flat_weight_single_cell() {
        let a = line_config();
        let s = subdivision_from_weight(&a, &[rat_int(0), rat_int(0), rat_int(0)]).unwrap();
        assert_eq!(s.maximal_index_sets(), vec![vec![0, 1, 2]]);
        assert!(!is_regular_triangulation(&a, &s));
    }

    #[test]
    fn skeleton_examples() {
        let a = line_config();
        // N - n - 1 = 0: skeleton is the origin of the Gale space
        assert!(!skeleton_membership(&a, &[rat_int(1), rat_int(0), rat_int(1)]).unwrap());
        assert!(!skeleton_membership(&a, &[rat_int(0), rat_int(2), rat_int(0)]).unwrap());
        assert!(skeleton_membership(&a, &[rat_int(1), rat_int(1), rat_int(1)]).unwrap());
    }

    #[test]
    fn fermat_weight_gives_t_fer() {
        let a = ExponentMatrix::fermat_deformation(2, 3, &[vec![1, 2]]).unwrap();
        let w = fermat_weight(&a);
        let s = subdivision_from_weight(&a, &w).unwrap();
        assert_eq!(
            recognize_triangulation(&a, &s),
            Some(KnownTriangulation::Fermat)
        );
    }

    #[test]
    fn dwork_perturbation_toy() {
        let a = ExponentMatrix::fermat_deformation(2, 3, &[vec![1, 2]]).unwrap();
        // w_1 small, unit weights moderate: 0*3 < 1*1 + 1*2
        let w = vec![rat_int(0), rat_int(1), rat_int(1)];
        assert!(is_dwork_perturbation(&a, &w).unwrap());
        let s = subdivision_from_weight(&a, &w).unwrap();
        assert_eq!(
            recognize_triangulation(&a, &s),
            Some(KnownTriangulation::Dwork { pivot: 0 })
        );
        // equal weights: equality in eq:5.1, not a perturbation
        let weq = vec![rat_int(1), rat_int(1), rat_int(1)];
        assert!(!is_dwork_perturbation(&a, &weq).unwrap());
    }

    #[test]
    fn extend_weight_verifies() {
        let a = ExponentMatrix::fermat_deformation(2, 3, &[vec![1, 2]]).unwrap();
        let w = extend_weight(&a, &[rat(0, 1)]).unwrap();
        let s = subdivision_from_weight(&a, &w).unwrap();
        assert!(is_regular_triangulation(&a, &s));
        assert_eq!(w[0], rat(0, 1));
    }

    #[test]
    fn rescaling_stability() {
        let a = ExponentMatrix::fermat_deformation(2, 3, &[vec![1, 2]]).unwrap();
        let w = vec![rat_int(0), rat_int(1), rat_int(1)];
        let s1 = subdivision_from_weight(&a, &w).unwrap();
        let w2: Vec<Rat> = w.iter().map(|v| v * rat_int(7)).collect();
        let s2 = subdivision_from_weight(&a, &w2).unwrap();
        assert_eq!(s1.maximal_index_sets(), s2.maximal_index_sets());
    }
}
