mod common;

use std::collections::BTreeSet;

use common::{mor, obj};
use spanforge_core::corpus;
use spanforge_core::limits::{
    binary_product, enumerate_all_ofs, enumerate_pullbacks, factorize, is_pullback, kernel_pair,
    pullback, terminal_object, terminal_pullback_product, validate_ofs,
};
use spanforge_core::{Cospan, FinCat, MorClass, Ofs, PullbackCone};

#[test]
fn diamond_pullback_is_the_meet() {
    let cat = corpus::diamond();
    let c = pullback(&cat, mor(&cat, "le_a_1"), mor(&cat, "le_b_1")).unwrap();
    assert_eq!(c.apex, obj(&cat, "0"));
    assert_eq!(c.p, mor(&cat, "le_0_a"));
    assert_eq!(c.q, mor(&cat, "le_0_b"));
}

#[test]
fn pullback_along_identity_is_the_map_itself() {
    for inst in corpus::builtin() {
        let cat = &inst.cat;
        for s in cat.morphism_ids() {
            let id = cat.identity(cat.cod(s));
            let cone = PullbackCone {
                apex: cat.dom(s),
                p: s,
                q: cat.identity(cat.dom(s)),
            };
            assert!(is_pullback(cat, Cospan { f: id, s }, cone), "{} {}", inst.name, cat.label(s));
        }
    }
}

#[test]
fn idempotent_has_no_kernel_pair() {
    let cat = corpus::idempotent_monoid();
    let e = mor(&cat, "e");
    assert!(pullback(&cat, e, e).is_none());
    assert!(kernel_pair(&cat, e).is_none());
    assert!(enumerate_pullbacks(&cat, Cospan { f: e, s: e }).all.is_empty());
}

#[test]
fn monos_have_trivial_kernel_pairs() {
    for inst in corpus::builtin() {
        let cat = &inst.cat;
        for s in cat.morphism_ids().filter(|&m| common::mono(cat, m)) {
            let k = kernel_pair(cat, s).unwrap();
            assert!(is_pullback(
                cat,
                Cospan { f: s, s },
                PullbackCone {
                    apex: cat.dom(s),
                    p: cat.identity(cat.dom(s)),
                    q: cat.identity(cat.dom(s)),
                }
            ));
            assert!(common::iso(cat, k.p) && k.p == k.q, "{} {}", inst.name, cat.label(s));
        }
    }
    let cat = corpus::diamond();
    let k = kernel_pair(&cat, mor(&cat, "le_0_1")).unwrap();
    let id0 = cat.identity(obj(&cat, "0"));
    assert_eq!((k.apex, k.p, k.q), (obj(&cat, "0"), id0, id0));
}

fn cone_set(cat: &FinCat, f: spanforge_core::MorId, s: spanforge_core::MorId) -> BTreeSet<(u32, u32, u32)> {
    enumerate_pullbacks(cat, Cospan { f, s })
        .all
        .into_iter()
        .map(|c| (c.apex.0, c.p.0, c.q.0))
        .collect()
}

#[test]
fn pullback_enumeration_matches_brute_force() {
    let mut instances = common::shipped_instances();
    instances.extend(corpus::builtin());
    instances.extend(corpus::random_instances(common::SEED, 30).unwrap());
    for inst in instances {
        let cat = &inst.cat;
        for s in cat.morphism_ids() {
            for &f in cat.into(cat.cod(s)) {
                let oracle: BTreeSet<(u32, u32, u32)> = common::limit_cones(cat, f, s)
                    .into_iter()
                    .map(|(a, p, q)| (a.0, p.0, q.0))
                    .collect();
                assert_eq!(cone_set(cat, f, s), oracle, "{}", inst.name);
                let canon = enumerate_pullbacks(cat, Cospan { f, s }).canonical;
                assert_eq!(canon.is_some(), !oracle.is_empty());
                if let Some(c) = canon {
                    assert!(oracle.contains(&(c.apex.0, c.p.0, c.q.0)));
                    assert_eq!(pullback(cat, f, s), Some(c));
                }
            }
        }
    }
}

#[test]
fn product_with_terminal_is_the_object() {
    for inst in corpus::builtin() {
        let cat = &inst.cat;
        let Some(t) = terminal_object(cat) else { continue };
        for a in cat.object_ids() {
            let p = binary_product(cat, a, t).unwrap();
            assert!(common::iso(cat, p.pa), "{}", inst.name);
        }
    }
}

#[test]
fn diamond_product_of_a_and_b_is_zero() {
    let cat = corpus::diamond();
    let (a, b) = (obj(&cat, "a"), obj(&cat, "b"));
    let p = binary_product(&cat, a, b).unwrap();
    assert_eq!(p.apex, obj(&cat, "0"));
    let via_terminal = terminal_pullback_product(&cat, a, b, &MorClass::all(&cat)).unwrap();
    assert_eq!(via_terminal.apex, obj(&cat, "0"));
    assert!(terminal_pullback_product(&cat, a, b, &MorClass::isos(&cat)).is_none());
}

#[test]
fn discrete_pair_has_no_product() {
    let cat = corpus::discrete(2);
    assert!(binary_product(&cat, obj(&cat, "x0"), obj(&cat, "x1")).is_none());
}

#[test]
fn product_existence_matches_brute_force() {
    let mut instances = corpus::builtin();
    instances.extend(corpus::random_instances(common::SEED, 30).unwrap());
    for inst in instances {
        let cat = &inst.cat;
        for a in cat.object_ids() {
            for b in cat.object_ids() {
                let oracle = common::product_apexes(cat, a, b);
                match binary_product(cat, a, b) {
                    Some(p) => assert!(oracle.contains(&p.apex), "{}", inst.name),
                    None => assert!(oracle.is_empty(), "{}", inst.name),
                }
            }
        }
    }
}

#[test]
fn iso_all_is_a_factorization_system_for_stable_all() {
    for inst in corpus::builtin() {
        let cat = &inst.cat;
        let all = MorClass::all(cat);
        if spanforge_core::classes::validate_stable_class(cat, &all).is_ok() {
            let ofs = Ofs { p: MorClass::isos(cat), s: all };
            assert!(validate_ofs(cat, &ofs).is_ok(), "{}", inst.name);
        }
    }
}

#[test]
fn all_iso_is_a_factorization_system_on_diamond() {
    let cat = corpus::diamond();
    let ofs = Ofs { p: MorClass::all(&cat), s: MorClass::isos(&cat) };
    assert!(validate_ofs(&cat, &ofs).is_ok());
}

#[test]
fn all_all_is_not_a_factorization_system() {
    let cat = corpus::chain(2);
    let ofs = Ofs { p: MorClass::all(&cat), s: MorClass::all(&cat) };
    let rep = validate_ofs(&cat, &ofs);
    assert!(!rep.is_ok());
    assert!(!rep.factorization_ok() || !rep.orthogonality_ok());
}

/// Every pair of iso-containing classes, checked directly.
fn brute_force_ofs(cat: &FinCat) -> Vec<Ofs> {
    let free: Vec<_> = cat.morphism_ids().filter(|&m| !common::iso(cat, m)).collect();
    let class_of = |mask: u32| {
        let mut c = MorClass::isos(cat);
        for (i, &m) in free.iter().enumerate() {
            if mask & (1 << i) != 0 {
                c.insert(m);
            }
        }
        c
    };
    let mut out = Vec::new();
    for ps in 0..(1u32 << free.len()) {
        for ss in 0..(1u32 << free.len()) {
            let ofs = Ofs { p: class_of(ps), s: class_of(ss) };
            if validate_ofs(cat, &ofs).is_ok()
                && spanforge_core::classes::validate_stable_class(cat, &ofs.s).is_ok()
            {
                out.push(ofs);
            }
        }
    }
    out
}

#[test]
fn three_chain_factorization_systems_match_brute_force() {
    let cat = corpus::chain(3);
    let found = enumerate_all_ofs(&cat).unwrap();
    let oracle = brute_force_ofs(&cat);
    assert_eq!(found.len(), oracle.len());
    for o in &oracle {
        assert!(found.contains(o));
    }
    let iso_all = Ofs { p: MorClass::isos(&cat), s: MorClass::all(&cat) };
    let all_iso = Ofs { p: MorClass::all(&cat), s: MorClass::isos(&cat) };
    assert!(found.contains(&iso_all) && found.contains(&all_iso));
}

#[test]
fn degenerate_factorizations() {
    let cat = corpus::diamond();
    let iso_all = Ofs { p: MorClass::isos(&cat), s: MorClass::all(&cat) };
    let all_iso = Ofs { p: MorClass::all(&cat), s: MorClass::isos(&cat) };
    for f in cat.morphism_ids() {
        let (p, s) = factorize(&cat, &iso_all, f).unwrap();
        assert!(common::iso(&cat, p) && cat.comp(s, p) == f);
        let (p, s) = factorize(&cat, &all_iso, f).unwrap();
        assert!(common::iso(&cat, s) && cat.comp(s, p) == f);
    }
    let f = mor(&cat, "le_0_1");
    assert_eq!(factorize(&cat, &iso_all, f).unwrap(), (cat.identity(obj(&cat, "0")), f));
}

#[test]
fn missing_factorization_is_an_invalid_instance() {
    let cat = corpus::chain(2);
    let ofs = Ofs { p: MorClass::isos(&cat), s: MorClass::isos(&cat) };
    assert!(matches!(
        factorize(&cat, &ofs, mor(&cat, "le_0_1")),
        Err(spanforge_core::Error::InvalidInstance(_))
    ));
}
