use gkz_periods::lattice::*;
use gkz_periods::exact::*;

#[test]
fn sec51_combinatorics() {
    let t0 = std::time::Instant::now();
    let ci = index_sets(7, 6, &[vec![2,1,1,1,1,1]]);
    assert_eq!(ci.elements.len(), 6666);
    assert_eq!(ci.classes.len(), 2401);
    let h = ci.class_size_histogram();
    let expect: std::collections::BTreeMap<usize, usize> =
        [(2usize,1080usize),(3,780),(4,540),(6,1)].into_iter().collect();
    assert_eq!(h, expect);
    let a = ExponentMatrix::fermat_deformation(6, 7, &[vec![2,1,1,1,1,1]]).unwrap();
    let reps = coset_representatives(7, 6, &a.generators_mod_d());
    let p = p_set(&a, &[int(1),int(2),int(1),int(1),int(1),int(1)], &reps);
    let pv: Vec<i64> = p.iter().map(|v| {
        use num_traits::ToPrimitive; v[0].to_i64().unwrap()
    }).collect();
    assert_eq!(pv, vec![0,1,2,4]);
    assert_eq!(normalized_volume(&a).unwrap(), int(7));
    assert_eq!(compute_n_a(&a).unwrap(), int(14));
    println!("sec51 combinatorics in {:?}", t0.elapsed());
}

#[test]
fn sec52_combinatorics() {
    let t0 = std::time::Instant::now();
    let ci = index_sets(7, 6, &[vec![2,1,1,1,1,1], vec![1,1,2,1,1,1]]);
    assert_eq!(ci.classes.len(), 343);
    let h = ci.class_size_histogram();
    let expect: std::collections::BTreeMap<usize, usize> =
        [(15usize,48usize),(16,72),(20,108),(21,72),(26,42),(30,1)].into_iter().collect();
    assert_eq!(h, expect);
    let a = ExponentMatrix::fermat_deformation(6, 7, &[vec![2,1,1,1,1,1], vec![1,1,2,1,1,1]]).unwrap();
    // kernel: B-matrix columns span; primitivity via elementary divisors
    let k = kernel_lattice(&a).unwrap();
    assert_eq!(k.dim(), 2);
    assert!(verify_kernel(&a, &k));
    // B columns must lie in the lattice
    let b1: Vec<Int> = vec![7,0,-2,-1,-1,-1,-1,-1].into_iter().map(Int::from).collect();
    let b2: Vec<Int> = vec![0,7,-1,-1,-2,-1,-1,-1].into_iter().map(Int::from).collect();
    assert!(k.coordinates(&b1).is_some());
    assert!(k.coordinates(&b2).is_some());
    assert_eq!(normalized_volume(&a).unwrap(), int(49));
    // P_c for c=(1,2,1,1,1,1) has cardinality 26
    let reps = coset_representatives(7, 6, &a.generators_mod_d());
    let p = p_set(&a, &[int(1),int(2),int(1),int(1),int(1),int(1)], &reps);
    assert_eq!(p.len(), 26);
    println!("sec52 combinatorics in {:?}", t0.elapsed());
}
