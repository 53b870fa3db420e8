use walgebra::hecke::{double_centralizer_check, DualitySetting, EtaConvention, WGenerators};
use walgebra::linalg::SparseMatrix;
use walgebra::Partition;

fn settings(max_n: usize, max_d: usize) -> Vec<DualitySetting> {
    (1..=max_n)
        .flat_map(Partition::all)
        .flat_map(|lam| (1..=max_d).map(move |d| DualitySetting::new(&lam, d)))
        .collect()
}

#[test]
fn daha_relations_up_to_gl3() {
    for s in settings(3, 3) {
        let r = s.verify_daha();
        assert!(r.all_pass(), "{:?} d={}: {r:?}", s.shape, s.d);
    }
}

#[test]
fn cyclotomic_relation_annihilates_x1() {
    for s in settings(4, 3) {
        assert!(s.cyclotomic_check(), "{:?} d={}", s.shape, s.d);
    }
}

#[test]
fn x1_eigenvalues_are_the_cyclotomic_roots() {
    // on V, x_1 is triangular with diagonal entries lambda'_col - lambda_1
    let lam = Partition::new(vec![3, 2, 2]).unwrap();
    let s = DualitySetting::new(&lam, 1);
    let x = s.x1_op();
    let conj = lam.conjugate();
    let roots: Vec<i64> = conj.parts().iter().map(|&c| c as i64 - lam.first() as i64).collect();
    for i in 0..s.dim() {
        let v = x.get(i, i).to_integer();
        assert!(roots.iter().any(|r| v == (*r).into()), "entry {v}");
    }
}

#[test]
fn permutations_generate_the_symmetric_group_image() {
    let s = DualitySetting::new(&Partition::column(2), 3);
    let dim = walgebra::hecke::algebra_dim(s.dim(), &s.s_ops());
    // (C^2)^{⊗3}: irreducibles (3) and (2,1) of S_3, dimensions 1 and 2
    assert_eq!(dim, 1 + 4);
}

#[test]
fn exact_and_modular_dimensions_agree() {
    let lam = Partition::new(vec![2, 1]).unwrap();
    let w = WGenerators::new(&lam);
    let s = DualitySetting::new(&lam, 2);
    let r = double_centralizer_check(&s, &w, EtaConvention::Untwist).unwrap();
    assert!(r.all_pass(), "{r:?}");
    let mut hecke: Vec<SparseMatrix> = s.s_ops();
    hecke.push(s.x1_op());
    assert_eq!(walgebra::hecke::commutant_dim(s.dim(), &hecke).unwrap(), r.dims.hecke_commutant);
    assert_eq!(walgebra::hecke::algebra_dim(s.dim(), &hecke), r.dims.hecke_image);
    let imgs = w.images(&s, EtaConvention::Untwist).unwrap();
    assert_eq!(walgebra::hecke::commutant_dim(s.dim(), &imgs).unwrap(), r.dims.w_commutant);
    assert_eq!(walgebra::hecke::algebra_dim(s.dim(), &imgs), r.dims.w_image);
}
