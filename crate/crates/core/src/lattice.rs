//! Exact lattice combinatorics of the exponent matrix: kernel lattice, Gale
//! dual, normalized volume, character index sets `I`, `I_c`, the ordered sets
//! `P_c`, and the denominator `N_A`.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exact::{dot_rat_int, invert_rat, lcm_int, rank_rat, solve_rat, IMat, Int, Rat};
use crate::par;
use crate::{Error, Result};

/// The integer matrix `A` of monomial exponents together with its degree
/// data. Columns are the exponent vectors `a_1..a_N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentMatrix {
    /// Ambient dimension (row count).
    pub n: usize,
    /// Column count.
    pub ncols: usize,
    /// The columns `a_1..a_N`.
    pub columns: Vec<Vec<Int>>,
    /// Common degree `d` (every column sums to `d`).
    pub degree: Int,
    /// Set when the last `n` columns are exactly `d e_1, ..., d e_n`.
    pub is_fermat_deformation: bool,
}

impl ExponentMatrix {
    /// Build from explicit columns, checking rank and homogeneity.
    pub fn new(n: usize, columns: Vec<Vec<Int>>, degree: Int) -> Result<Self> {
        if columns.is_empty() || columns.iter().any(|c| c.len() != n) {
            return Err(Error::Malformed("columns must all have length n".into()));
        }
        let ncols = columns.len();
        let m = IMat::from_columns(&columns);
        if m.rank() != n {
            return Err(Error::Malformed("rank of A must equal n".into()));
        }
        // homogeneity: a rational row vector v with v a_j = 1 for all j must
        // exist; hypersurface matrices have uniform column sums d and
        // v = (1/d,...,1/d)
        let rows: Vec<Vec<Rat>> = (0..ncols)
            .map(|j| {
                (0..n)
                    .map(|i| Rat::from_integer(columns[j][i].clone()))
                    .collect()
            })
            .collect();
        let rhs = vec![Rat::one(); ncols];
        if crate::exact::solve_rat_general(&rows, &rhs).is_none() {
            return Err(Error::Malformed("matrix is not homogeneous".into()));
        }
        let sums: Vec<Int> = columns.iter().map(|c| c.iter().cloned().sum()).collect();
        if sums.iter().all(|s| *s == sums[0]) && sums[0] != degree {
            return Err(Error::Malformed(format!(
                "column sum {} differs from degree {degree}",
                sums[0]
            )));
        }
        let is_fermat_deformation = ncols >= n && {
            (0..n).all(|i| {
                let col = &columns[ncols - n + i];
                col.iter().enumerate().all(|(r, v)| {
                    if r == i {
                        *v == degree
                    } else {
                        v.is_zero()
                    }
                })
            })
        };
        Ok(ExponentMatrix {
            n,
            ncols,
            columns,
            degree,
            is_fermat_deformation,
        })
    }

    /// Fermat-deformation matrix `[a_1 .. a_m | d e_1 .. d e_n]`.
    pub fn fermat_deformation(n: usize, d: i64, extra: &[Vec<i64>]) -> Result<Self> {
        let degree = Int::from(d);
        let mut columns: Vec<Vec<Int>> = extra
            .iter()
            .map(|a| a.iter().map(|&v| Int::from(v)).collect())
            .collect();
        for i in 0..n {
            let mut e = vec![Int::zero(); n];
            e[i] = degree.clone();
            columns.push(e);
        }
        ExponentMatrix::new(n, columns, degree)
    }

    /// Pure Fermat matrix `[d e_1 .. d e_n]`.
    pub fn pure_fermat(n: usize, d: i64) -> Result<Self> {
        Self::fermat_deformation(n, d, &[])
    }

    /// Number of deformation monomials (`m = N - n` for Fermat deformations,
    /// otherwise the full column count).
    pub fn deformation_count(&self) -> usize {
        if self.is_fermat_deformation {
            self.ncols - self.n
        } else {
            self.ncols
        }
    }

    /// The first `m` columns as i64 row-major matrix `a_{ij}` (i-th row of
    /// the ambient space, j-th deformation monomial).
    pub fn deformation_entry(&self, i: usize, j: usize) -> &Int {
        &self.columns[j][i]
    }

    pub fn as_imat(&self) -> IMat {
        IMat::from_columns(&self.columns)
    }

    /// Reductions of the deformation columns modulo `d`, as elements of
    /// `(Z/dZ)^n`.
    pub fn generators_mod_d(&self) -> Vec<Vec<u32>> {
        let d = &self.degree;
        (0..self.deformation_count())
            .map(|j| {
                self.columns[j]
                    .iter()
                    .map(|v| v.mod_floor(d).to_u32().unwrap())
                    .collect()
            })
            .collect()
    }
}

/// Primitive basis of the integer kernel of `A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelLattice {
    pub basis: Vec<Vec<Int>>,
}

/// Compute the kernel lattice of `A` in canonical reduced form.
pub fn kernel_lattice(a: &ExponentMatrix) -> Result<KernelLattice> {
    let m = a.as_imat();
    if m.rank() != a.n {
        return Err(Error::Malformed("rank of A below n".into()));
    }
    let basis = m.kernel_basis();
    for u in &basis {
        debug_assert!(m.mul_vec(u).iter().all(|v| v.is_zero()));
        let s: Int = u.iter().cloned().sum();
        debug_assert!(s.is_zero(), "kernel vector coordinate sum must vanish");
    }
    Ok(KernelLattice { basis })
}

impl KernelLattice {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of an ambient kernel vector in this basis, if it lies in
    /// the lattice.
    pub fn coordinates(&self, u: &[Int]) -> Option<Vec<Int>> {
        if self.basis.is_empty() {
            return if u.iter().all(|v| v.is_zero()) {
                Some(Vec::new())
            } else {
                None
            };
        }
        let ncols = self.basis.len();
        let rows: Vec<Vec<Rat>> = (0..u.len())
            .map(|i| {
                (0..ncols)
                    .map(|k| Rat::from_integer(self.basis[k][i].clone()))
                    .collect()
            })
            .collect();
        let rhs: Vec<Rat> = u.iter().map(|v| Rat::from_integer(v.clone())).collect();
        let x = crate::exact::solve_rat_general(&rows, &rhs)?;
        // verify integrality and exactness
        let mut ints = Vec::with_capacity(ncols);
        for xi in &x {
            if !xi.is_integer() {
                return None;
            }
            ints.push(xi.to_integer());
        }
        let rebuilt = self.combination(&ints);
        if rebuilt == u {
            Some(ints)
        } else {
            None
        }
    }

    /// The ambient vector with the given kernel coordinates.
    pub fn combination(&self, x: &[Int]) -> Vec<Int> {
        assert_eq!(x.len(), self.basis.len());
        if self.basis.is_empty() {
            return Vec::new();
        }
        let len = self.basis[0].len();
        let mut v = vec![Int::zero(); len];
        for (k, c) in x.iter().enumerate() {
            for i in 0..len {
                v[i] += &self.basis[k][i] * c;
            }
        }
        v
    }
}

/// Gale dual of `A`: the vectors `g_1..g_N`, where `g_i` collects the i-th
/// coordinates of the kernel basis vectors. `g_i` represents the restriction
/// of the i-th coordinate functional to the kernel lattice, expressed in the
/// dual basis of the chosen kernel basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaleDual {
    pub vectors: Vec<Vec<Rat>>,
}

pub fn gale_dual(a: &ExponentMatrix, lattice: &KernelLattice) -> GaleDual {
    let vectors = (0..a.ncols)
        .map(|i| {
            lattice
                .basis
                .iter()
                .map(|u| Rat::from_integer(u[i].clone()))
                .collect()
        })
        .collect();
    GaleDual { vectors }
}

impl GaleDual {
    /// Projection `pi_A(w)` of a weight vector to the dual of the kernel
    /// lattice: `pi_A(w) = sum_i w_i g_i`, so that `pi_A(w) . x = w . u`
    /// whenever `x` is the kernel-coordinate vector of `u`.
    pub fn project(&self, w: &[Rat]) -> Vec<Rat> {
        assert_eq!(w.len(), self.vectors.len());
        let dim = self.vectors.first().map_or(0, |g| g.len());
        let mut p = vec![Rat::zero(); dim];
        for (wi, g) in w.iter().zip(&self.vectors) {
            for k in 0..dim {
                p[k] = &p[k] + &(wi * &g[k]);
            }
        }
        p
    }
}

/// The index set `I` of Fermat characters with its partition into classes
/// `I_c` modulo the subgroup generated by the deformation columns.
#[derive(Debug, Clone)]
pub struct CharacterIndex {
    pub d: u32,
    pub n: usize,
    /// All elements of `I`, each with entries in `1..d` summing to `0 mod d`.
    pub elements: Vec<Vec<u32>>,
    /// Partition of `elements` into classes; each class lists indices into
    /// `elements`, sorted.
    pub classes: Vec<Vec<usize>>,
    /// One representative per class: the lexicographically smallest element.
    pub representatives: Vec<Vec<u32>>,
}

impl CharacterIndex {
    /// Histogram of class sizes: `size -> count`.
    pub fn class_size_histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for c in &self.classes {
            *h.entry(c.len()).or_insert(0) += 1;
        }
        h
    }

    /// The class containing `c` (reduced mod d), if `c` reduces into `I`.
    pub fn class_of(&self, c: &[u32]) -> Option<&Vec<usize>> {
        let pos = self.elements.iter().position(|e| e == c)?;
        self.classes.iter().find(|cl| cl.contains(&pos))
    }

    /// Closed-form cardinality `(d-1)((d-1)^{n-1} - (-1)^{n-1})/d` of `I`.
    pub fn cardinality_formula(d: u32, n: usize) -> Int {
        let dm1: Int = Int::from(d) - Int::one();
        let sign = if (n - 1) % 2 == 0 {
            Int::one()
        } else {
            -Int::one()
        };
        let inner = num_traits::pow::pow(dm1.clone(), n - 1) - sign;
        dm1 * inner / Int::from(d)
    }
}

fn add_mod(a: &[u32], b: &[u32], d: u32) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| (x + y) % d).collect()
}

/// Enumerate the subgroup of `(Z/dZ)^n` generated by the given elements
/// (breadth-first from 0 over generator additions). Returned sorted.
pub fn subgroup_mod_d(d: u32, n: usize, generators: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let zero = vec![0u32; n];
    let mut seen = std::collections::BTreeSet::new();
    seen.insert(zero.clone());
    let mut frontier = vec![zero];
    while let Some(x) = frontier.pop() {
        for g in generators {
            let y = add_mod(&x, g, d);
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    seen.into_iter().collect()
}

/// Build the character index set for degree `d`, dimension `n`, and the
/// deformation generators reduced mod d.
pub fn index_sets(d: u32, n: usize, generators: &[Vec<u32>]) -> CharacterIndex {
    assert!(d >= 2 && n >= 2);
    // enumerate I
    let mut elements: Vec<Vec<u32>> = Vec::new();
    let mut cur = vec![1u32; n];
    loop {
        let total: u64 = cur.iter().map(|&v| v as u64).sum();
        if total % (d as u64) == 0 {
            elements.push(cur.clone());
        }
        // odometer over entries 1..d
        let mut k = n;
        loop {
            if k == 0 {
                break;
            }
            k -= 1;
            cur[k] += 1;
            if cur[k] < d {
                break;
            }
            cur[k] = 1;
            if k == 0 {
                break;
            }
        }
        if cur.iter().all(|&v| v == 1) {
            break;
        }
    }
    elements.sort();

    let subgroup = subgroup_mod_d(d, n, generators);
    // canonical class key: the lexicographically smallest translate by the
    // subgroup that lands in I (entries nonzero); membership in I is
    // automatic for translates with all entries nonzero except that the
    // translate of c in I stays in I iff all entries stay nonzero.
    let index_of: BTreeMap<Vec<u32>, usize> =
        elements.iter().cloned().zip(0..).collect();
    let keys: Vec<usize> = par::map_range(elements.len(), |i| {
        let c = &elements[i];
        let mut best: Option<&Vec<u32>> = None;
        let mut best_idx = usize::MAX;
        for h in &subgroup {
            let t = add_mod(c, h, d);
            if t.iter().all(|&v| v != 0) {
                if let Some(&j) = index_of.get(&t) {
                    if best.is_none() || j < best_idx {
                        best_idx = j;
                        best = Some(&elements[j]);
                    }
                }
            }
        }
        let _ = best;
        best_idx
    });
    let mut class_map: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, k) in keys.iter().enumerate() {
        class_map.entry(*k).or_default().push(i);
    }
    let classes: Vec<Vec<usize>> = class_map.values().cloned().collect();
    let representatives = class_map
        .keys()
        .map(|&k| elements[k].clone())
        .collect();
    CharacterIndex {
        d,
        n,
        elements,
        classes,
        representatives,
    }
}

/// Coset representatives of `Z^m / Ker(h)` for the homomorphism
/// `h(q) = sum_i q_i abar_i` into `(Z/dZ)^n`: breadth-first over nonnegative
/// `q` in graded-lexicographic order, keeping the first preimage of each
/// subgroup element.
pub fn coset_representatives(d: u32, n: usize, generators: &[Vec<u32>]) -> Vec<Vec<Int>> {
    let m = generators.len();
    let order = subgroup_mod_d(d, n, generators).len();
    if m == 0 {
        return vec![Vec::new()];
    }
    let mut reps: Vec<Vec<Int>> = Vec::new();
    let mut seen: std::collections::BTreeSet<Vec<u32>> = std::collections::BTreeSet::new();
    let mut degree = 0u64;
    while reps.len() < order {
        let mut layer = compositions(degree, m);
        layer.sort();
        for q in layer {
            let mut image = vec![0u32; n];
            for (j, &qj) in q.iter().enumerate() {
                let mul = (qj % d as u64) as u32;
                for i in 0..n {
                    image[i] = (image[i] + generators[j][i] * mul) % d;
                }
            }
            if seen.insert(image) {
                reps.push(q.iter().map(|&v| Int::from(v)).collect());
                if reps.len() == order {
                    break;
                }
            }
        }
        degree += 1;
    }
    reps
}

/// All vectors in `Z_{>=0}^parts` with coordinate sum `total`.
fn compositions(total: u64, parts: usize) -> Vec<Vec<u64>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            let mut v = vec![first];
            v.append(&mut rest);
            out.push(v);
        }
    }
    out
}

/// Geometric normalized volume: sum of `|det A_sigma|` over the maximal
/// simplices of any regular triangulation, divided by the index
/// `[Z^n : Z A]` from the elementary divisors.
pub fn normalized_volume(a: &ExponentMatrix) -> Result<Int> {
    let tri = crate::fan::generic_triangulation(a)?;
    let mut total = Int::zero();
    for cell in &tri.maximal {
        let cols: Vec<Vec<Int>> = cell.indices.iter().map(|&i| a.columns[i].clone()).collect();
        let det = IMat::from_columns(&cols).det().abs();
        total += det;
    }
    let divs = a.as_imat().elementary_divisors();
    if divs.len() != a.n {
        return Err(Error::Malformed("A does not have full rank".into()));
    }
    let index: Int = divs.iter().product();
    if (&total % &index) != Int::zero() {
        return Err(Error::Internal(format!(
            "normalized volume {total} not divisible by lattice index {index}"
        )));
    }
    let vol = total / index;
    if a.is_fermat_deformation {
        let order = subgroup_mod_d(
            a.degree.to_u32().unwrap(),
            a.n,
            &a.generators_mod_d(),
        )
        .len();
        if vol != Int::from(order) {
            return Err(Error::Internal(format!(
                "geometric volume {vol} disagrees with subgroup order {order}"
            )));
        }
    }
    Ok(vol)
}

/// Subgroup-order route to the normalized volume, valid for
/// Fermat-deformation matrices.
pub fn volume_subgroup_order(a: &ExponentMatrix) -> Result<Int> {
    if !a.is_fermat_deformation {
        return Err(Error::Malformed(
            "subgroup-order volume needs a Fermat deformation".into(),
        ));
    }
    let order = subgroup_mod_d(a.degree.to_u32().unwrap(), a.n, &a.generators_mod_d()).len();
    Ok(Int::from(order))
}

/// The ordered subset `P_c` of the coset representatives: `p` belongs to
/// `P_c` iff no entry of `cbar + h(p)` in `(Z/dZ)^n` vanishes.
pub fn p_set(
    a: &ExponentMatrix,
    c: &[Int],
    representatives: &[Vec<Int>],
) -> Vec<Vec<Int>> {
    let d = a.degree.to_u32().unwrap();
    let gens = a.generators_mod_d();
    let cbar: Vec<u32> = c
        .iter()
        .map(|v| v.mod_floor(&a.degree).to_u32().unwrap())
        .collect();
    representatives
        .iter()
        .filter(|p| {
            (0..a.n).all(|i| {
                let mut acc = cbar[i] as u64;
                for (j, pj) in p.iter().enumerate() {
                    let mul = pj.mod_floor(&a.degree).to_u64().unwrap();
                    acc += gens[j][i] as u64 * mul;
                }
                acc % d as u64 != 0
            })
        })
        .cloned()
        .collect()
}

/// Smallest positive `N_A` such that `N_A [a'_1 ... a'_n]^{-1}` is integral
/// for every nonsingular n-tuple drawn from the deformation columns and the
/// scaled unit columns.
pub fn compute_n_a(a: &ExponentMatrix) -> Result<Int> {
    if !a.is_fermat_deformation {
        return Err(Error::Malformed(
            "N_A is defined for Fermat-deformation matrices".into(),
        ));
    }
    // candidate columns: a_1..a_m (deduplicated against the scaled units)
    // plus d e_1..d e_n, i.e. all columns of A
    let n = a.n;
    let cols = &a.columns;
    let mut lcm = Int::one();
    let mut chosen = vec![0usize; n];
    fn tuples(
        start: usize,
        k: usize,
        n: usize,
        total: usize,
        chosen: &mut Vec<usize>,
        cols: &[Vec<Int>],
        lcm: &mut Int,
    ) {
        if k == n {
            let sel: Vec<Vec<Int>> = chosen.iter().map(|&i| cols[i].clone()).collect();
            let m = IMat::from_columns(&sel);
            if m.det().is_zero() {
                return;
            }
            let rows: Vec<Vec<Rat>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| Rat::from_integer(sel[j][i].clone()))
                        .collect()
                })
                .collect();
            let inv = invert_rat(&rows).expect("nonsingular");
            for row in &inv {
                for v in row {
                    *lcm = lcm_int(lcm, v.denom());
                }
            }
            return;
        }
        for i in start..total {
            chosen[k] = i;
            tuples(i + 1, k + 1, n, total, chosen, cols, lcm);
        }
    }
    tuples(0, 0, n, cols.len(), &mut chosen, cols, &mut lcm);
    Ok(lcm)
}

/// Check that a rational row vector `v` with `v a_j = 1` for all columns
/// exists, returning it.
pub fn homogeneity_vector(a: &ExponentMatrix) -> Result<Vec<Rat>> {
    // solve A^T v = 1 (least structured: pick n independent columns)
    let rows: Vec<Vec<Rat>> = (0..a.ncols)
        .map(|j| {
            (0..a.n)
                .map(|i| Rat::from_integer(a.columns[j][i].clone()))
                .collect()
        })
        .collect();
    let rhs = vec![Rat::one(); a.ncols];
    crate::exact::solve_rat_general(&rows, &rhs)
        .ok_or_else(|| Error::Malformed("matrix is not homogeneous".into()))
}

/// `v . c` for the homogeneity vector; this is the `e`-offset used in the
/// coefficient-ring contract.
pub fn homogeneity_pairing(a: &ExponentMatrix, c: &[Rat]) -> Result<Rat> {
    let v = homogeneity_vector(a)?;
    Ok(crate::exact::dot_rat(&v, c))
}

/// Exact membership `u in L_A` test for ambient integer vectors.
pub fn in_kernel(a: &ExponentMatrix, u: &[Int]) -> bool {
    a.as_imat().mul_vec(u).iter().all(|v| v.is_zero())
}

/// Convenience: `pi_A(w) . u` computed ambiently (`= w . u` for `u` in the
/// kernel).
pub fn weight_pairing(w: &[Rat], u: &[Int]) -> Rat {
    dot_rat_int(w, u)
}

/// Verify the kernel basis is primitive by elementary divisors of the basis
/// matrix (all must be 1), and that each vector is annihilated by `A`.
pub fn verify_kernel(a: &ExponentMatrix, k: &KernelLattice) -> bool {
    if k.basis.is_empty() {
        return a.ncols == a.n;
    }
    let am = a.as_imat();
    if !k.basis.iter().all(|u| am.mul_vec(u).iter().all(|v| v.is_zero())) {
        return false;
    }
    let rows: Vec<Vec<Rat>> = k
        .basis
        .iter()
        .map(|u| u.iter().map(|v| Rat::from_integer(v.clone())).collect())
        .collect();
    if rank_rat(&rows) != k.basis.len() {
        return false;
    }
    let m = IMat::from_rows(k.basis.clone());
    m.elementary_divisors().iter().all(|d| d.is_one())
}

/// Solve `A gamma = -c` with `gamma_i = p_i` prescribed off the simplex.
/// Used by the series module; lives here to keep all exact solves together.
pub fn solve_exponent(
    a: &ExponentMatrix,
    simplex: &[usize],
    offsets: &[(usize, Int)],
    c: &[Rat],
) -> Result<Vec<Rat>> {
    if simplex.len() != a.n {
        return Err(Error::Malformed("simplex must have n elements".into()));
    }
    let mut rhs: Vec<Rat> = c.iter().map(|v| -v.clone()).collect();
    for (j, p) in offsets {
        for i in 0..a.n {
            let t = Rat::from_integer(&a.columns[*j][i] * p);
            rhs[i] = &rhs[i] - t;
        }
    }
    let rows: Vec<Vec<Rat>> = (0..a.n)
        .map(|i| {
            simplex
                .iter()
                .map(|&j| Rat::from_integer(a.columns[j][i].clone()))
                .collect()
        })
        .collect();
    let sol = solve_rat(&rows, &rhs)
        .ok_or_else(|| Error::Malformed("singular simplex submatrix".into()))?;
    let mut gamma = vec![Rat::zero(); a.ncols];
    for (k, &j) in simplex.iter().enumerate() {
        gamma[j] = sol[k].clone();
    }
    for (j, p) in offsets {
        gamma[*j] = Rat::from_integer(p.clone());
    }
    Ok(gamma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat_int};

    fn toy() -> ExponentMatrix {
        // d=3, a=(1,2), n=2: A = [[1,3,0],[2,0,3]]
        ExponentMatrix::fermat_deformation(2, 3, &[vec![1, 2]]).unwrap()
    }

    #[test]
    fn toy_kernel_and_gale() {
        let a = toy();
        assert!(a.is_fermat_deformation);
        let k = kernel_lattice(&a).unwrap();
        assert_eq!(k.basis, vec![vec![int(3), int(-1), int(-2)]]);
        assert!(verify_kernel(&a, &k));
        let g = gale_dual(&a, &k);
        assert_eq!(
            g.vectors,
            vec![vec![rat_int(3)], vec![rat_int(-1)], vec![rat_int(-2)]]
        );
        // duality: pi_A(w) . coords(u) = w . u for all u in the lattice
        let w = vec![rat_int(5), rat_int(7), rat_int(-2)];
        let p = g.project(&w);
        for u in &k.basis {
            let coords = k.coordinates(u).unwrap();
            let lhs: Rat = p
                .iter()
                .zip(&coords)
                .map(|(a, b)| a * Rat::from_integer(b.clone()))
                .sum();
            assert_eq!(lhs, weight_pairing(&w, u));
        }
    }

    #[test]
    fn pure_fermat_kernel_empty() {
        let a = ExponentMatrix::pure_fermat(2, 3).unwrap();
        let k = kernel_lattice(&a).unwrap();
        assert!(k.basis.is_empty());
        let g = gale_dual(&a, &k);
        assert!(g.vectors.iter().all(|v| v.is_empty()));
    }

    #[test]
    fn volume_toy() {
        let a = toy();
        assert_eq!(normalized_volume(&a).unwrap(), int(3));
        assert_eq!(volume_subgroup_order(&a).unwrap(), int(3));
        let pf = ExponentMatrix::pure_fermat(3, 4).unwrap();
        assert_eq!(normalized_volume(&pf).unwrap(), int(1));
    }

    #[test]
    fn index_sets_toy() {
        let ci = index_sets(3, 2, &[vec![1, 2]]);
        assert_eq!(ci.elements, vec![vec![1, 2], vec![2, 1]]);
        assert_eq!(ci.classes.len(), 1);
        assert_eq!(CharacterIndex::cardinality_formula(3, 2), int(2));
    }

    #[test]
    fn coset_reps_m1() {
        let reps = coset_representatives(3, 2, &[vec![1, 2]]);
        assert_eq!(
            reps,
            vec![vec![int(0)], vec![int(1)], vec![int(2)]]
        );
    }

    #[test]
    fn p_set_examples() {
        let a = toy();
        let reps = coset_representatives(3, 2, &a.generators_mod_d());
        // c = (1,2): P_c = {0,1}
        let p = p_set(&a, &[int(1), int(2)], &reps);
        assert_eq!(p, vec![vec![int(0)], vec![int(1)]]);
        // c = (3,3): cbar = 0, P_c = {1,2}
        let p = p_set(&a, &[int(3), int(3)], &reps);
        assert_eq!(p, vec![vec![int(1)], vec![int(2)]]);
    }

    #[test]
    fn n_a_examples() {
        let pf = ExponentMatrix::pure_fermat(2, 3).unwrap();
        assert_eq!(compute_n_a(&pf).unwrap(), int(3));
        let a = toy();
        assert_eq!(compute_n_a(&a).unwrap(), int(6));
    }

    #[test]
    fn exponent_solve_fermat() {
        let a = toy();
        // T(Fer) simplex {1,2} (0-based), p = 0 on column 0, c = (1,2)
        let gamma = solve_exponent(
            &a,
            &[1, 2],
            &[(0, int(0))],
            &[rat_int(1), rat_int(2)],
        )
        .unwrap();
        assert_eq!(
            gamma,
            vec![rat_int(0), crate::exact::rat(-1, 3), crate::exact::rat(-2, 3)]
        );
    }
}
