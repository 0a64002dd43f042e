//! Hand-computed facts about the pointed category with a zero object `T`
//! and an object `S` retracting onto it (`u = t ∘ s` idempotent on `S`).

mod common;

use common::{load, mor, names, obj};
use starkit::completion::{regular_completion, CompletionError};
use starkit::fincat::is_jointly_monic;
use starkit::ideals::{kernels, pointed_ideal, restrict_ideal, CoverWitness};
use starkit::limits::{
    coequalizer, has_weak_finite_limits, image_factorization, is_regular_category, is_regular_epi,
    kernel_pairs, products, Mode,
};
use starkit::stars::{
    check_theorem_a, is_normal_category, is_star_regular, kernel_star, satisfies_star_pi0,
    StarError,
};
use starkit::{MultiPointed, ParallelPair, Verdict};

fn ptset2() -> starkit::corpus::Corpus {
    load("ptset2.fincat")
}

#[test]
fn zero_ideal_is_the_pointed_ideal() {
    let c = ptset2();
    let cat = c.category("PtSet2").unwrap();
    let zero = c.ideal("PtSet2", "zero").unwrap();
    assert_eq!(pointed_ideal(cat).as_ref(), Some(zero));
    assert_eq!(zero.names(cat), ["1_T", "s", "t", "u"]);
}

#[test]
fn s_coequalizes_identity_and_idempotent() {
    let c = ptset2();
    let cat = c.category("PtSet2").unwrap();
    let (one_s, u, s) = (mor(cat, "1_S"), mor(cat, "u"), mor(cat, "s"));
    assert_eq!(coequalizer(cat, ParallelPair::new(one_s, u)), Some(s));
    assert!(is_regular_epi(cat, s));
    assert!(!is_regular_epi(cat, u));
    assert!(!cat.is_mono(u));
    assert!(!cat.is_epi(u));
}

#[test]
fn idempotent_factors_through_the_zero_object() {
    let c = ptset2();
    let cat = c.category("PtSet2").unwrap();
    let u = mor(cat, "u");
    assert_eq!(
        image_factorization(cat, u),
        Some((mor(cat, "s"), mor(cat, "t")))
    );
    assert!(!is_jointly_monic(cat, ParallelPair::new(u, u)));
}

#[test]
fn no_self_product_and_no_weak_kernel_pair_of_s() {
    let c = ptset2();
    let cat = c.category("PtSet2").unwrap();
    let s_obj = obj(cat, "S");
    assert!(products(cat, s_obj, s_obj, Mode::Weak).is_empty());
    assert!(kernel_pairs(cat, mor(cat, "s"), Mode::Weak).is_empty());
    assert!(!has_weak_finite_limits(cat));
    assert!(!is_regular_category(cat).passed());
}

#[test]
fn kernels_in_the_zero_ideal() {
    let c = ptset2();
    let cat = c.category("PtSet2").unwrap();
    let zero = c.ideal("PtSet2", "zero").unwrap();
    let k = |f| names(cat, kernels(cat, zero, mor(cat, f), Mode::Strict));
    assert_eq!(k("1_S"), ["t"]);
    assert_eq!(k("u"), ["1_S"]);
    assert_eq!(k("s"), ["1_S"]);
    assert_eq!(k("1_T"), ["1_T"]);
}

#[test]
fn star_condition_fails_at_the_identity() {
    let c = ptset2();
    let cat = c.category("PtSet2").unwrap();
    let zero = c.ideal("PtSet2", "zero").unwrap();
    let m = MultiPointed::new(cat, zero);
    let r = satisfies_star_pi0(m, ParallelPair::new(mor(cat, "1_S"), mor(cat, "u"))).unwrap();
    assert_eq!(r.verdict, Verdict::Fail);
    assert!(r.witnesses[0].contains("1_S coequalizes the star"), "{r:?}");
}

#[test]
fn theorem_needs_weak_kernel_pairs() {
    let c = ptset2();
    let cat = c.category("PtSet2").unwrap();
    let zero = c.ideal("PtSet2", "zero").unwrap();
    let r = check_theorem_a(MultiPointed::new(cat, zero));
    assert_eq!(r.verdict, Verdict::Inapplicable);
    assert!(r.witnesses[0].contains("no weak kernel pair"));
}

#[test]
fn not_normal_because_not_regular() {
    let c = ptset2();
    let cat = c.category("PtSet2").unwrap();
    let r = is_normal_category(cat).unwrap();
    assert_eq!(r.verdict, Verdict::Fail);
    assert!(r.witnesses[0].contains("no product S×S"), "{r:?}");
    let zero = c.ideal("PtSet2", "zero").unwrap();
    assert!(matches!(
        kernel_star(MultiPointed::new(cat, zero), mor(cat, "u")),
        Err(StarError::NoKernelPair(_))
    ));
    assert!(!is_star_regular(MultiPointed::new(cat, zero)).passed());
}

#[test]
fn restricting_zero_to_the_big_object() {
    let c = ptset2();
    let cat = c.category("PtSet2").unwrap();
    let zero = c.ideal("PtSet2", "zero").unwrap();
    let w = CoverWitness::new(cat, &[obj(cat, "S")]);
    assert_eq!(restrict_ideal(&w, zero).names(w.sub()), ["u"]);
}

#[test]
fn completion_refused_without_weak_limits() {
    let c = ptset2();
    let cat = c.category("PtSet2").unwrap();
    assert!(matches!(
        regular_completion(cat),
        Err(CompletionError::PreconditionFailed(_))
    ));
}
