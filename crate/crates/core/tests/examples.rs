//! Worked examples for every stage, checked against hand computation or
//! brute force.

mod common;

use common::*;
use gapforge::codes::{balanced_code, hadamard, reed_solomon};
use gapforge::enumerate::Limits;
use gapforge::frontend::{circuit_to_quadratic, eval_circuit, parse_circuit};
use gapforge::linalg::{kron, nullspace_basis, rank, symmetric_solution_basis};
use gapforge::oracle::{
    affine_min_weight, quad_nonzero_solve, subspace_min_weight, verify_mdp, Verdict,
};
use gapforge::reduction::{amplify, mdp_to_ncp, quad_to_mdp, GapMeta};
use gapforge::{make_field, Error, FieldSpec, MatrixFq, MdpInstance, Rational, VectorFq};

const CAP: u128 = 1 << 22;

fn f2() -> FieldSpec {
    make_field(2, 1).unwrap()
}

fn v(f: &FieldSpec, xs: &[u32]) -> VectorFq {
    VectorFq::new(f, xs.to_vec()).unwrap()
}

fn meta(yes: u64, no: u64) -> GapMeta {
    GapMeta {
        yes_threshold: yes,
        no_threshold: no,
        d: 1,
        eps: Rational::from_integer(0),
        t: 1,
        provenance: "hand-built".into(),
    }
}

#[test]
fn field_construction() {
    assert_eq!(make_field(2, 1).unwrap().modulus(), &[0, 1]);
    let f4 = make_field(2, 2).unwrap();
    assert_eq!(f4.modulus(), &[1, 1, 1]);
    // x * (x + 1) = x^2 + x = 1
    assert_eq!(f4.mul(2, 3), 1);
    assert_eq!(f2().add(1, 1), 0);

    // The smallest irreducible monic quadratic over F_3, found by root testing.
    let f3 = make_field(3, 1).unwrap();
    let smallest = (0..9u32)
        .map(|i| [i % 3, i / 3, 1])
        .find(|c| (0..3).all(|x| f3.add(f3.add(c[0], f3.mul(c[1], x)), f3.mul(x, x)) != 0))
        .unwrap();
    let f9 = make_field(3, 2).unwrap();
    assert_eq!(f9.modulus(), &smallest);
    for a in 1..9 {
        assert_eq!(f9.mul(a, f9.inv(a).unwrap()), 1);
    }
    assert_eq!(f4.to_coords(&f2(), 2).unwrap(), vec![0, 1]);
    assert_eq!(f4.to_coords(&f2(), 0).unwrap(), vec![0, 0]);
    assert!(matches!(make_field(4, 1), Err(Error::NotPrime(4))));
}

#[test]
fn linear_algebra() {
    let f = f2();
    assert_eq!(v(&f, &[1, 0, 1, 0]).weight(), 2);
    let ones = MatrixFq::from_rows(&f, &[vec![1, 1], vec![1, 1]]).unwrap();
    assert_eq!(rank(&ones), 1);
    assert_eq!(
        rank(&v(&f, &[1, 0, 1]).outer(&v(&f, &[0, 1, 1])).unwrap()),
        1
    );

    assert!(nullspace_basis(&MatrixFq::identity(&f, 3)).is_empty());
    assert_eq!(nullspace_basis(&MatrixFq::zeros(&f, 1, 3)).len(), 3);
    let a = MatrixFq::from_rows(&f, &[vec![1, 1, 0], vec![0, 1, 1]]).unwrap();
    assert_eq!(nullspace_basis(&a), vec![v(&f, &[1, 1, 1])]);

    assert_eq!(symmetric_solution_basis(&f, &[], 2).unwrap().len(), 3);
    let x11 = MatrixFq::from_rows(&f, &[vec![1]]).unwrap();
    assert!(symmetric_solution_basis(&f, &[x11], 1).unwrap().is_empty());

    assert_eq!(
        v(&f, &[1, 0]).kron(&v(&f, &[1, 1])).unwrap(),
        v(&f, &[1, 1, 0, 0])
    );
    let i2 = MatrixFq::identity(&f, 2);
    assert_eq!(kron(&i2, &i2).unwrap(), MatrixFq::identity(&f, 4));
}

#[test]
fn hadamard_codes() {
    let l = Limits::default();
    let h22 = hadamard(&f2(), 2, &l).unwrap();
    assert_eq!(h22.block_len(), 4);
    assert_eq!(h22.weight_profile(CAP).unwrap(), vec![2, 2, 2]);
    assert_eq!(h22.min_distance_exhaustive(CAP).unwrap(), 2);
    let h31 = hadamard(&make_field(3, 1).unwrap(), 1, &l).unwrap();
    assert_eq!(h31.weight_profile(CAP).unwrap(), vec![2, 2]);
    let h23 = hadamard(&f2(), 3, &l).unwrap();
    assert_eq!((h23.block_len(), h23.d_claimed()), (8, Some(4)));
    assert_eq!(h23.eps(), Some(Rational::from_integer(0)));
}

#[test]
fn reed_solomon_examples() {
    let f = f2();
    let rs = reed_solomon(&f, 2, 2).unwrap();
    assert_eq!(rs.ext().q(), 4);
    assert_eq!(rs.encode(&v(&f, &[1, 1])).unwrap().weight(), 3);
    assert!(rs.encode(&v(&f, &[0, 0])).unwrap().is_zero());
    assert!(rs.min_distance_exhaustive(CAP).unwrap() >= 3);
    assert!(matches!(
        reed_solomon(&f, 5, 2),
        Err(Error::DegreeTooLarge { .. })
    ));
}

#[test]
fn balanced_code_examples() {
    let l = Limits::default();
    let c = balanced_code(&f2(), 2, Rational::new(1, 2), &l).unwrap();
    assert_eq!(c.block_len(), 16);
    for w in c.weight_profile(CAP).unwrap() {
        assert!((4..=8).contains(&w), "weight {w}");
    }
    assert!(c.min_distance_exhaustive(CAP).unwrap() >= 4);

    let c = balanced_code(&f2(), 4, Rational::new(1, 5), &l).unwrap();
    assert_eq!(c.block_len(), 1024);
    let profile = c.weight_profile(CAP).unwrap();
    assert_eq!(profile.len(), 15);
    assert!(profile.iter().all(|&w| (410..=512).contains(&w)));
    assert_eq!(naive_min_distance(&c), profile[0]);
}

#[test]
fn circuit_examples() {
    let c = parse_circuit(NOT_CIRCUIT).unwrap();
    assert_eq!(c.len(), 2);
    assert!(eval_circuit(&c, &[false]).unwrap());
    assert!(matches!(
        parse_circuit("g1 = AND g1 g1"),
        Err(Error::ForwardReference { line: 1, .. })
    ));
    assert!(matches!(parse_circuit(""), Err(Error::NoOutput)));
    let and_not = parse_circuit(AND_NOT_CIRCUIT).unwrap();
    assert!(!eval_circuit(&and_not, &[false]).unwrap());
    assert!(!eval_circuit(&and_not, &[true]).unwrap());
    let or = parse_circuit("a = INPUT\nb = INPUT\nc = OR a b\nOUTPUT c").unwrap();
    assert!(eval_circuit(&or, &[true, false]).unwrap());
}

#[test]
fn gadget_examples() {
    let f = f2();
    let sys = circuit_to_quadratic(&parse_circuit(NOT_CIRCUIT).unwrap(), &f);
    assert_eq!((sys.n_vars(), sys.m()), (3, 4));
    assert!(naive_is_solution(&sys, &[0, 1, 1]));
    assert!(naive_is_solution(&sys, &[0, 0, 0]));
    let sols: Vec<_> = all_vectors(2, 3)
        .filter(|x| naive_is_solution(&sys, x))
        .collect();
    assert_eq!(sols, vec![vec![0, 0, 0], vec![0, 1, 1]]);
    assert_eq!(
        quad_nonzero_solve(&sys, false, CAP).unwrap(),
        Some(vec![0, 1, 1])
    );

    let sys = circuit_to_quadratic(&parse_circuit(AND_NOT_CIRCUIT).unwrap(), &f);
    assert!(all_vectors(2, 4)
        .filter(|x| naive_is_solution(&sys, x))
        .all(|x| x == [0, 0, 0, 0]));
    assert_eq!(quad_nonzero_solve(&sys, false, CAP).unwrap(), None);
}

#[test]
fn reduction_examples() {
    let f = f2();
    let l = Limits::default();
    let code = hadamard(&f, 3, &l).unwrap();
    let sys = circuit_to_quadratic(&parse_circuit(NOT_CIRCUIT).unwrap(), &f);
    let yes = quad_to_mdp(&sys, &code, true, &l).unwrap();
    let x = v(&f, &[0, 1, 1]);
    let cx = code.encode(&x).unwrap();
    assert_eq!(cx.kron(&cx).unwrap().weight(), 16);
    let rep = verify_mdp(&yes, None, CAP);
    assert_eq!(rep.verdict, Verdict::YesConfirmed);
    assert!(rep.oracle_value.unwrap() <= 17);

    let ncp = mdp_to_ncp(&yes).unwrap();
    let w = affine_min_weight(ncp.offset(), ncp.hom_basis(), CAP).unwrap();
    assert!(w.weight <= 17);

    let amp = amplify(&yes, 1, &l).unwrap();
    assert_eq!(amp, yes);
    let amp = amplify(&yes, 2, &l).unwrap();
    let w2 = subspace_min_weight(&f, amp.len(), amp.basis(), CAP)
        .unwrap()
        .unwrap();
    assert!(w2.weight <= 17 * 17);
}

#[test]
fn small_subspaces() {
    let f = f2();
    let l = Limits::default();
    let basis = vec![v(&f, &[1, 1, 0]), v(&f, &[0, 1, 1])];
    assert_eq!(
        subspace_min_weight(&f, 3, &basis, CAP)
            .unwrap()
            .unwrap()
            .weight,
        2
    );
    assert_eq!(
        subspace_min_weight(&f, 3, &[v(&f, &[1, 0, 0])], CAP)
            .unwrap()
            .unwrap()
            .weight,
        1
    );
    assert_eq!(
        affine_min_weight(&v(&f, &[1, 1, 1]), &[], CAP)
            .unwrap()
            .weight,
        3
    );
    assert_eq!(
        affine_min_weight(&v(&f, &[1, 0]), &[v(&f, &[0, 1])], CAP)
            .unwrap()
            .weight,
        1
    );

    let line = MdpInstance::new(&f, 3, vec![v(&f, &[1, 1, 0])], None, meta(1, 3)).unwrap();
    let sq = amplify(&line, 2, &l).unwrap();
    assert_eq!(sq.dim(), 1);
    assert_eq!(
        subspace_min_weight(&f, 9, sq.basis(), CAP)
            .unwrap()
            .unwrap()
            .weight,
        4
    );

    let flat = MdpInstance::new(&f, 2, vec![v(&f, &[1, 0])], Some(1), meta(1, 3)).unwrap();
    assert!(matches!(mdp_to_ncp(&flat), Err(Error::EmptySlice)));

    // oracle value 2 falls strictly between thresholds 1 and 3
    let gap = MdpInstance::new(&f, 3, vec![v(&f, &[1, 1, 0])], None, meta(1, 3)).unwrap();
    assert_eq!(verify_mdp(&gap, None, CAP).verdict, Verdict::GapViolation);
}
