//! Hand-computed invariants for small operators, checked through the public API.

use opkit_core::atoms::{symbolic_invariants, AtomTree};
use opkit_core::chains::{alpha_seq, beta_seq, iterate};
use opkit_core::invariants::{analyze_matrix, ExtNat, IndexValue};
use opkit_core::kato::{kato_decompose, verify_certificate};
use opkit_core::RatMatrix;
use proptest::prelude::*;

use ExtNat::{Finite, Infinite};

fn j2_plus_j3() -> RatMatrix {
    RatMatrix::block_diag(&[RatMatrix::jordan_block(2), RatMatrix::jordan_block(3)])
}

#[test]
fn unequal_jordan_blocks() {
    let t = j2_plus_j3();
    let lat = iterate(&t).unwrap();
    let alpha = alpha_seq(&lat);
    let beta = beta_seq(&lat);
    assert_eq!((0..5).map(|n| *alpha.get(n)).collect::<Vec<_>>(), [2, 2, 1, 0, 0]);
    assert_eq!((0..5).map(|n| *beta.get(n)).collect::<Vec<_>>(), [2, 2, 1, 0, 0]);

    let r = analyze_matrix(&t).unwrap();
    assert_eq!((r.dis, r.v), (Finite(3), Finite(2)));
    assert_eq!(r.jump, Some(Finite(2)));
    assert_eq!(r.index, Some(IndexValue::Finite(0)));
    assert_eq!(r.flags.nilpotent, Some(true));
    // nullity of T^3 is 5, not 3·α(T)
    assert_eq!(t.pow(3).unwrap().rank(), 0);
}

#[test]
fn jordan_plus_invertible_certificate() {
    let t = RatMatrix::from_ints(&[&[0, 1, 0], &[0, 0, 0], &[0, 0, 2]]);
    let cert = kato_decompose(&t).unwrap();
    assert_eq!((cert.m_basis.dim(), cert.n_basis.dim()), (1, 2));
    assert_eq!((cert.degree, cert.iterations), (2, 1));
    assert!(verify_certificate(&t, &cert).all_passed());
}

#[test]
fn invertible_has_no_nilpotent_part() {
    let t = RatMatrix::from_ints(&[&[2, 1], &[0, 3]]);
    let r = analyze_matrix(&t).unwrap();
    assert_eq!((r.dis, r.v, r.jump), (Finite(0), Infinite, Some(Finite(0))));
    let cert = kato_decompose(&t).unwrap();
    assert_eq!((cert.n_basis.dim(), cert.degree), (0, 0));
}

#[test]
fn symbolic_atoms() {
    let t = AtomTree::DirectSum(vec![AtomTree::ZeroInf, AtomTree::ForwardShift(1)]);
    let r = symbolic_invariants(&t).unwrap();
    assert_eq!((r.m_t, r.a_e, r.d_e), (Finite(1), Finite(1), Finite(1)));
    assert_eq!(r.index, Some(IndexValue::Finite(-1)));
    assert_eq!(r.dim, Infinite);

    let cubed = AtomTree::ForwardShift(1).power(3);
    let r = symbolic_invariants(&cubed).unwrap();
    assert_eq!(r.index, Some(IndexValue::Finite(-3)));
    assert!(r.flags.fredholm && r.flags.semi_regular);

    let r = symbolic_invariants(&AtomTree::BackwardShift(2)).unwrap();
    assert_eq!(r.index, Some(IndexValue::Finite(2)));
    assert_eq!(*r.alpha.get(0), Finite(2));
}

#[test]
fn zero_inf_is_not_fredholm() {
    let r = symbolic_invariants(&AtomTree::ZeroInf).unwrap();
    assert_eq!(*r.alpha.get(0), Infinite);
    assert_eq!(*r.alpha.get(1), Finite(0));
    assert!(!r.flags.fredholm);
    assert!(r.flags.b_fredholm);
}

proptest! {
    #[test]
    fn jordan_sums_max_and_min(sizes in proptest::collection::vec(1usize..5, 1..4)) {
        let blocks: Vec<_> = sizes.iter().map(|&s| RatMatrix::jordan_block(s)).collect();
        let t = RatMatrix::block_diag(&blocks);
        let r = analyze_matrix(&t).unwrap();
        prop_assert_eq!(r.dis, Finite(*sizes.iter().max().unwrap()));
        prop_assert_eq!(r.v, Finite(*sizes.iter().min().unwrap()));
        prop_assert_eq!(r.jump, Some(Finite(sizes.len())));
    }

    #[test]
    fn shift_index_scales(k in 1usize..4, n in 1usize..5) {
        let r = symbolic_invariants(&AtomTree::ForwardShift(k).power(n)).unwrap();
        prop_assert_eq!(r.index, Some(IndexValue::Finite(-((k * n) as i64))));
    }
}
