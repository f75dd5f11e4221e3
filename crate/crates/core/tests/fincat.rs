mod common;

use common::{mor, obj};
use proptest::prelude::*;
use spanforge_core::corpus;
use spanforge_core::fincat::{
    check_bc_pair, global_predicates, morphism_flags, validate_category, validate_functor,
    CategoryViolation, FunctorData, Variance,
};
use spanforge_core::spans::{relation, RelationContext};
use spanforge_core::{MorClass, MorId, QuotCat, RawCategory, RelationKind, SpanCategory};

fn diamond_raw() -> RawCategory {
    let mut raw = RawCategory::new("DIAMOND");
    let o = raw.add_object("0");
    let a = raw.add_object("a");
    let b = raw.add_object("b");
    let t = raw.add_object("1");
    let oa = raw.add_morphism("le_0_a", o, a);
    let ob = raw.add_morphism("le_0_b", o, b);
    let ot = raw.add_morphism("le_0_1", o, t);
    let at = raw.add_morphism("le_a_1", a, t);
    let bt = raw.add_morphism("le_b_1", b, t);
    raw.set_compose(at, oa, ot);
    raw.set_compose(bt, ob, ot);
    raw.fill_identity_composites();
    raw
}

#[test]
fn one_morphism_category_is_valid() {
    let mut raw = RawCategory::new("ONE");
    raw.add_object("*");
    raw.fill_identity_composites();
    assert!(validate_category(&raw).is_ok());
}

#[test]
fn diamond_table_is_valid_with_nine_morphisms() {
    let raw = diamond_raw();
    assert_eq!(raw.morphisms.len(), 9);
    assert!(validate_category(&raw).is_ok());
    let cat = raw.build().expect("category");
    assert_eq!(cat.num_morphisms(), 9);
}

#[test]
fn broken_identity_law_is_reported() {
    // e∘e = e is fine, but e∘1 = 1 breaks the right identity law
    let mut raw = RawCategory::new("BAD");
    raw.add_object("*");
    let e = raw.add_morphism("e", 0, 0);
    raw.set_compose(e, e, e);
    raw.set_compose(e, 0, 0);
    raw.fill_identity_composites();
    let rep = validate_category(&raw);
    assert!(rep
        .violations
        .iter()
        .any(|v| matches!(v, CategoryViolation::RightIdentity { f, .. } if *f == e)));
}

#[test]
fn non_associative_table_is_reported() {
    let mut raw = RawCategory::new("BAD");
    raw.add_object("*");
    let a = raw.add_morphism("a", 0, 0);
    let b = raw.add_morphism("b", 0, 0);
    raw.set_compose(a, a, b);
    raw.set_compose(a, b, a);
    raw.set_compose(b, a, b);
    raw.set_compose(b, b, b);
    raw.fill_identity_composites();
    let rep = validate_category(&raw);
    assert!(rep.violations.iter().any(|v| v.law() == "associativity"));
    assert!(raw.build().is_err());
}

#[test]
fn missing_composite_is_reported() {
    let mut raw = diamond_raw();
    let idx = |l: &str| raw.morphisms.iter().position(|m| m.label == l).unwrap();
    let (at, oa) = (idx("le_a_1"), idx("le_0_a"));
    raw.compose.remove(&(at, oa));
    let rep = validate_category(&raw);
    assert!(rep.violations.iter().any(|v| v.law() == "totality"));
}

#[test]
fn identity_flags_are_all_true() {
    let cat = corpus::diamond();
    for o in cat.object_ids() {
        let f = morphism_flags(&cat, cat.identity(o)).unwrap();
        assert!(f.mono && f.epi && f.section && f.retraction && f.iso);
    }
}

#[test]
fn diamond_inclusion_is_mono_and_epi_only() {
    let cat = corpus::diamond();
    let f = morphism_flags(&cat, mor(&cat, "le_0_a")).unwrap();
    assert!(f.mono && f.epi);
    assert!(!f.section && !f.retraction && !f.iso);
}

#[test]
fn idempotent_has_no_flags() {
    let cat = corpus::idempotent_monoid();
    let f = morphism_flags(&cat, mor(&cat, "e")).unwrap();
    assert!(!f.mono && !f.epi && !f.section && !f.retraction && !f.iso);
}

#[test]
fn unknown_morphism_id_is_an_input_error() {
    let cat = corpus::terminal();
    assert!(morphism_flags(&cat, MorId(99)).is_err());
}

#[test]
fn flags_agree_with_brute_force() {
    for inst in common::all_instances() {
        let cat = &inst.cat;
        for m in cat.morphism_ids() {
            let f = morphism_flags(cat, m).unwrap();
            assert_eq!(f.mono, common::mono(cat, m), "{} {}", inst.name, cat.label(m));
            assert_eq!(f.epi, common::epi(cat, m), "{} {}", inst.name, cat.label(m));
            assert_eq!(f.iso, common::iso(cat, m), "{} {}", inst.name, cat.label(m));
        }
    }
}

#[test]
fn diamond_global_predicates() {
    let cat = corpus::diamond();
    let g = global_predicates(&cat);
    assert_eq!(g.initial, vec![obj(&cat, "0")]);
    assert_eq!(g.terminal, vec![obj(&cat, "1")]);
    assert_eq!(g.strict_initial, vec![obj(&cat, "0")]);
    assert!(!g.strictly_connected);
}

#[test]
fn one_object_global_predicates() {
    let cat = corpus::terminal();
    let g = global_predicates(&cat);
    let star = obj(&cat, "*");
    assert_eq!(g.initial, vec![star]);
    assert_eq!(g.terminal, vec![star]);
    assert!(g.strictly_connected);
}

#[test]
fn discrete_pair_has_no_initial_or_terminal() {
    let g = global_predicates(&corpus::discrete(2));
    assert!(g.initial.is_empty() && g.terminal.is_empty());
    assert!(!g.strictly_connected);
}

#[test]
fn initial_objects_agree_with_brute_force() {
    for inst in common::all_instances() {
        assert_eq!(global_predicates(&inst.cat).initial, common::initial_objects(&inst.cat), "{}", inst.name);
    }
}

#[test]
fn identity_functor_is_a_functor() {
    let cat = corpus::diamond();
    assert!(validate_functor(&FunctorData::identity(&cat), &cat, &cat).is_ok());
}

#[test]
fn functor_breaking_composition_is_reported() {
    let cat = corpus::chain(3);
    let mut f = FunctorData::identity(&cat);
    // send 0≤2 to itself but 1≤2 to the identity on 2: types break
    let m = mor(&cat, "le_1_2");
    f.mmap[m.idx()] = Some(cat.identity(obj(&cat, "2")));
    assert!(!validate_functor(&f, &cat, &cat).is_ok());
}

fn contravariant_identity(cat: &spanforge_core::FinCat, class: &MorClass) -> FunctorData {
    let mut g = FunctorData::identity(cat).restricted(class);
    g.variance = Variance::Contravariant;
    g
}

#[test]
fn identity_pair_satisfies_beck_chevalley() {
    let z2 = corpus::cyclic_group(2);
    let class = MorClass::all(&z2);
    let f = FunctorData::identity(&z2);
    let g = contravariant_identity(&z2, &class);
    let rep = check_bc_pair(&f, &g, &z2, &class, &z2).unwrap();
    assert!(rep.is_ok(), "{rep:?}");
    assert!(rep.squares_checked > 0);
}

#[test]
fn scrambled_contravariant_part_fails_beck_chevalley() {
    let z2 = corpus::cyclic_group(2);
    let class = MorClass::all(&z2);
    let f = FunctorData::identity(&z2);
    let mut g = contravariant_identity(&z2, &class);
    let one = z2.identity(obj(&z2, "*"));
    for m in g.mmap.iter_mut() {
        *m = Some(one);
    }
    assert!(validate_functor(&g, &z2, &z2).is_ok());
    let rep = check_bc_pair(&f, &g, &z2, &class, &z2).unwrap();
    let gen = mor(&z2, "g1_1_*");
    assert!(rep.failures.iter().any(|x| x.s == gen && x.f == gen), "{rep:?}");
}

#[test]
fn quotient_functors_satisfy_beck_chevalley() {
    for inst in corpus::builtin() {
        let sc = SpanCategory::new(&inst.cat, &inst.class).unwrap();
        for kind in [RelationKind::Iso, RelationKind::Z, RelationKind::A, RelationKind::Az] {
            let part = relation(&sc, &kind, &RelationContext::default()).unwrap();
            let q = QuotCat::new(&sc, &part).unwrap();
            let rep = check_bc_pair(&q.phi, &q.psi, &inst.cat, &inst.class, &q.cat).unwrap();
            assert!(rep.is_ok(), "{} {kind}: {rep:?}", inst.name);
        }
    }
}

#[test]
fn beck_chevalley_rejects_wrong_variance() {
    let cat = corpus::terminal();
    let f = FunctorData::identity(&cat);
    assert!(check_bc_pair(&f, &f, &cat, &MorClass::all(&cat), &cat).is_err());
}

fn random_poset() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (1usize..6).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
        let len = pairs.len();
        (Just(n), proptest::collection::vec(any::<bool>(), len)).prop_map(move |(n, keep)| {
            let covers = pairs.iter().zip(keep).filter(|(_, k)| *k).map(|(p, _)| *p).collect();
            (n, covers)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn posets_round_trip_through_raw_tables((n, covers) in random_poset()) {
        let labels: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
        let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
        let cat = corpus::poset("P", &refs, &covers).unwrap();
        let raw = cat.to_raw();
        prop_assert!(validate_category(&raw).is_ok());
        let again = raw.build().unwrap();
        prop_assert_eq!(again.num_morphisms(), cat.num_morphisms());
        for m in cat.morphism_ids() {
            prop_assert!(common::mono(&cat, m));
            prop_assert!(common::epi(&cat, m));
            prop_assert_eq!(morphism_flags(&cat, m).unwrap().iso, cat.is_identity(m));
        }
    }
}
