//! The degreewise linear-algebra oracle must reproduce hand-derived Ext
//! dimensions and then agree with the Groebner-based engine.

mod support;

use grmod::*;
use support::ext_graded_dims_oracle;

fn plane() -> Ring {
    parse_ring(101, &["x", "y"], "grevlex", &[]).unwrap()
}

#[test]
fn oracle_reproduces_koszul_ext_of_the_residue_field() {
    // over F[x,y]: Ext^0(k, R) = Ext^1(k, R) = 0 and Ext^2(k, R) = k(2),
    // one dimension in degree -2
    let r = plane();
    let k = FpModule::residue_field(r.clone());
    let rm = FpModule::ring_module(r.clone());
    assert_eq!(ext_graded_dims_oracle(&k, &rm, 0, -3, 3), vec![0; 7]);
    assert_eq!(ext_graded_dims_oracle(&k, &rm, 1, -3, 3), vec![0; 7]);
    assert_eq!(
        ext_graded_dims_oracle(&k, &rm, 2, -3, 3),
        vec![0, 1, 0, 0, 0, 0, 0]
    );
}

#[test]
fn oracle_reproduces_self_extensions_of_the_residue_field() {
    // over F[x,y]: dim Ext^i(k, k) = binomial(2, i), concentrated in
    // degree -i (a map out of the step-i free module lowers degrees by i)
    let r = plane();
    let k = FpModule::residue_field(r.clone());
    assert_eq!(ext_graded_dims_oracle(&k, &k, 0, -3, 1), vec![0, 0, 0, 1, 0]);
    assert_eq!(ext_graded_dims_oracle(&k, &k, 1, -3, 1), vec![0, 0, 2, 0, 0]);
    assert_eq!(ext_graded_dims_oracle(&k, &k, 2, -3, 1), vec![0, 1, 0, 0, 0]);
    assert_eq!(ext_graded_dims_oracle(&k, &k, 3, -3, 1), vec![0; 5]);
}

#[test]
fn oracle_matches_hom_of_a_twisted_line_module() {
    // Hom(R/(x), R/(x)) = R/(x): dimensions 1 in each degree >= 0
    let r = plane();
    let line = FpModule::cyclic(r.clone(), &[r.parse_poly("x").unwrap()]).unwrap();
    assert_eq!(
        ext_graded_dims_oracle(&line, &line, 0, -1, 3),
        vec![0, 1, 1, 1, 1]
    );
    // Ext^1(R/(x), R/(x)) = R/(x) twisted down by the relation degree
    assert_eq!(
        ext_graded_dims_oracle(&line, &line, 1, -2, 2),
        vec![0, 1, 1, 1, 1]
    );
}

#[test]
fn oracle_and_engine_agree_on_periodic_self_extensions() {
    // over F[x]/(x^2) the resolution of k is periodic
    let r = parse_ring(101, &["x"], "grevlex", &["x^2"]).unwrap();
    let k = FpModule::residue_field(r.clone());
    for i in 0..=3 {
        let engine = ext(&k, &k, i, 3).unwrap().hilbert_window(-4, 6);
        let oracle = ext_graded_dims_oracle(&k, &k, i, -4, 6);
        assert_eq!(engine, oracle, "mismatch at cohomological index {i}");
    }
}
