//! Instance builders: small posets, groups, finite-set categories, partial
//! map categories, and seeded random instances.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classes::{self, MorClass};
use crate::error::{Error, Result};
use crate::fincat::{FinCat, MorId, RawCategory};
use crate::limits::{self, Ofs};
use crate::structures::RestrictionCat;

/// A category with a designated class and, optionally, a factorization
/// system whose right class is that class.
#[derive(Clone, Debug)]
pub struct Instance {
    pub name: String,
    pub cat: FinCat,
    pub class: MorClass,
    pub ofs: Option<Ofs>,
}

impl Instance {
    pub fn new(name: impl Into<String>, cat: FinCat, class: MorClass) -> Instance {
        Instance {
            name: name.into(),
            cat,
            class,
            ofs: None,
        }
    }

    pub fn with_ofs(mut self, ofs: Ofs) -> Instance {
        self.ofs = Some(ofs);
        self
    }
}

fn build(raw: RawCategory) -> Result<FinCat> {
    raw.build()
        .map_err(|r| Error::Internal(format!("builder produced a non-category: {:?}", r.violations.first())))
}

/// The poset on `labels` generated by `covers` (pairs `x ≤ y`).
pub fn poset(name: &str, labels: &[&str], covers: &[(usize, usize)]) -> Result<FinCat> {
    let n = labels.len();
    let mut leq = vec![vec![false; n]; n];
    for (i, row) in leq.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(a, b) in covers {
        leq[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if leq[i][k] && leq[k][j] {
                    leq[i][j] = true;
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && leq[i][j] && leq[j][i] {
                return Err(Error::Input(format!("{name}: relation is not antisymmetric")));
            }
        }
    }
    poset_from_matrix(name, labels, &leq)
}

fn poset_from_matrix(name: &str, labels: &[&str], leq: &[Vec<bool>]) -> Result<FinCat> {
    let n = labels.len();
    let objects: Vec<String> = labels.iter().map(|s| s.to_string()).collect();
    let mut mors = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if leq[i][j] {
                let label = if i == j {
                    format!("1_{}", labels[i])
                } else {
                    format!("le_{}_{}", labels[i], labels[j])
                };
                mors.push(((i, j), i, j, label));
            }
        }
    }
    let raw = RawCategory::from_concrete(name, &objects, &mors, |o| (o, o), |g, f| (f.0, g.1))?;
    build(raw)
}

/// `0 ≤ a ≤ 1`, `0 ≤ b ≤ 1`.
pub fn diamond() -> FinCat {
    poset("DIAMOND", &["0", "a", "b", "1"], &[(0, 1), (0, 2), (1, 3), (2, 3)]).expect("diamond")
}

pub fn chain(n: usize) -> FinCat {
    let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    let covers: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    poset(&format!("CHAIN{n}"), &refs, &covers).expect("chain")
}

pub fn discrete(n: usize) -> FinCat {
    let labels: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    poset(&format!("DISCRETE{n}"), &refs, &[]).expect("discrete")
}

pub fn terminal() -> FinCat {
    poset("TERMINAL", &["*"], &[]).expect("terminal")
}

/// Two objects and an inverse pair between them.
pub fn walking_iso() -> FinCat {
    let objects = vec!["x".to_string(), "y".to_string()];
    let mors = vec![
        ((0usize, 0usize), 0, 0, "1_x".to_string()),
        ((0, 1), 0, 1, "i".to_string()),
        ((1, 0), 1, 0, "j".to_string()),
        ((1, 1), 1, 1, "1_y".to_string()),
    ];
    build(RawCategory::from_concrete("WALKING_ISO", &objects, &mors, |o| (o, o), |g, f| (f.0, g.1)).expect("iso"))
        .expect("iso")
}

/// The cyclic group of order `n` as a one-object category.
pub fn cyclic_group(n: usize) -> FinCat {
    group_times_poset(n, &["*"], &[], &format!("Z{n}"))
}

/// `Z/n × P` for the poset generated by `covers`.
pub fn group_times_poset(n: usize, labels: &[&str], covers: &[(usize, usize)], name: &str) -> FinCat {
    let p = poset("P", labels, covers).expect("poset");
    let objects: Vec<String> = labels.iter().map(|s| s.to_string()).collect();
    let mut mors = Vec::new();
    for m in p.morphism_ids() {
        let (d, c) = (p.dom(m).idx(), p.cod(m).idx());
        for g in 0..n {
            let label = if g == 0 {
                p.label(m).to_string()
            } else {
                format!("g{g}_{}", p.label(m))
            };
            mors.push(((g, d, c), d, c, label));
        }
    }
    let raw = RawCategory::from_concrete(name, &objects, &mors, |o| (0, o, o), |g, f| ((g.0 + f.0) % n, f.1, g.2))
        .expect("group x poset");
    build(raw).expect("group x poset")
}

/// `{1, e}` with `e∘e = e`. No kernel pair of `e` exists.
pub fn idempotent_monoid() -> FinCat {
    let objects = vec!["*".to_string()];
    let mors = vec![(false, 0, 0, "1_*".to_string()), (true, 0, 0, "e".to_string())];
    build(RawCategory::from_concrete("IDEMPOTENT", &objects, &mors, |_| false, |g, f| *g || *f).expect("monoid"))
        .expect("monoid")
}

fn all_maps(a: usize, b: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..a {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..b).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

fn map_label(a: usize, b: usize, v: &[usize]) -> String {
    let digits: String = v.iter().map(|x| x.to_string()).collect();
    format!("m{a}{b}_{digits}")
}

/// Finite sets `{0..k}` for `k` in `sizes`, with all maps.
pub fn finset(sizes: &[usize]) -> FinCat {
    let objects: Vec<String> = sizes.iter().map(|k| format!("n{k}")).collect();
    let mut mors = Vec::new();
    for (i, &a) in sizes.iter().enumerate() {
        for (j, &b) in sizes.iter().enumerate() {
            for v in all_maps(a, b) {
                let label = if i == j && v.iter().enumerate().all(|(x, &y)| x == y) {
                    format!("1_n{a}")
                } else {
                    map_label(a, b, &v)
                };
                mors.push(((i, j, v), i, j, label));
            }
        }
    }
    let name = format!("FINSET{}", sizes.iter().map(|k| k.to_string()).collect::<String>());
    let raw = RawCategory::from_concrete(
        &name,
        &objects,
        &mors,
        |o| (o, o, (0..sizes[o]).collect()),
        |g, f| (f.0, g.1, f.2.iter().map(|&x| g.2[x]).collect()),
    )
    .expect("finset");
    build(raw).expect("finset")
}

pub fn injections(cat: &FinCat) -> MorClass {
    MorClass::from_predicate(cat, |m| cat.is_mono(m))
}

pub fn surjections(cat: &FinCat) -> MorClass {
    MorClass::from_predicate(cat, |m| cat.is_epi(m))
}

/// Partial maps between the sets `{0..k}`, `k ≤ n`, with the restriction
/// `f̄` = partial identity on the domain of definition of `f`.
pub fn partial_maps(n: usize) -> RestrictionCat {
    let sizes: Vec<usize> = (0..=n).collect();
    let objects: Vec<String> = sizes.iter().map(|k| format!("p{k}")).collect();
    let mut mors = Vec::new();
    for &a in &sizes {
        for &b in &sizes {
            // value b encodes "undefined"
            for v in all_maps(a, b + 1) {
                let pv: Vec<Option<usize>> = v.iter().map(|&x| (x < b).then_some(x)).collect();
                let label = if a == b && pv.iter().enumerate().all(|(x, y)| *y == Some(x)) {
                    format!("1_p{a}")
                } else {
                    let digits: String = pv
                        .iter()
                        .map(|y| y.map_or("u".to_string(), |y| y.to_string()))
                        .collect();
                    format!("q{a}{b}_{digits}")
                };
                mors.push(((a, b, pv), a, b, label));
            }
        }
    }
    let raw = RawCategory::from_concrete(
        &format!("PARTIAL{n}"),
        &objects,
        &mors,
        |o| (o, o, (0..o).map(Some).collect()),
        |g, f| (f.0, g.1, f.2.iter().map(|x| x.and_then(|x| g.2[x])).collect()),
    )
    .expect("partial maps");
    let cat = build(raw).expect("partial maps");
    let bar = cat
        .morphism_ids()
        .map(|m| {
            let a = cat.dom(m);
            let defined: Vec<bool> = partial_values(&cat, m).iter().map(Option::is_some).collect();
            cat.hom(a, a)
                .iter()
                .copied()
                .find(|&e| {
                    partial_values(&cat, e)
                        .iter()
                        .enumerate()
                        .all(|(x, y)| if defined[x] { *y == Some(x) } else { y.is_none() })
                })
                .expect("partial identity")
        })
        .collect();
    RestrictionCat { cat, bar }
}

/// Decodes a partial-map label back into its values.
fn partial_values(cat: &FinCat, m: MorId) -> Vec<Option<usize>> {
    let label = cat.label(m);
    if let Some(k) = label.strip_prefix("1_p") {
        let k: usize = k.parse().expect("size");
        return (0..k).map(Some).collect();
    }
    let digits = label.split('_').nth(1).unwrap_or("");
    digits
        .chars()
        .map(|c| c.to_digit(10).map(|d| d as usize))
        .collect()
}

/// Built-in instances used when no corpus files are given.
pub fn builtin() -> Vec<Instance> {
    let mut out = Vec::new();
    let d = diamond();
    out.push(Instance::new("diamond-all", d.clone(), MorClass::all(&d)));
    out.push(Instance::new("diamond-iso", d.clone(), MorClass::isos(&d)));
    for n in [2, 3] {
        let c = chain(n);
        out.push(Instance::new(format!("chain{n}-all"), c.clone(), MorClass::all(&c)));
    }
    let w = walking_iso();
    out.push(Instance::new("walking-iso", w.clone(), MorClass::all(&w)));
    let t = terminal();
    out.push(Instance::new("terminal", t.clone(), MorClass::all(&t)));
    let x = discrete(2);
    out.push(Instance::new("discrete2", x.clone(), MorClass::all(&x)));
    let z2 = cyclic_group(2);
    out.push(Instance::new("z2", z2.clone(), MorClass::all(&z2)));
    let gp = group_times_poset(2, &["0", "1"], &[(0, 1)], "Z2xCHAIN2");
    out.push(Instance::new("z2-chain2", gp.clone(), MorClass::all(&gp)));
    let fs = finset(&[0, 1, 2]);
    let inj = injections(&fs);
    out.push(
        Instance::new("finset2-inj", fs.clone(), inj.clone()).with_ofs(Ofs {
            p: surjections(&fs),
            s: inj,
        }),
    );
    out
}

/// A random instance drawn from one of several families, validated.
fn random_instance(rng: &mut ChaCha8Rng, index: usize) -> Result<Instance> {
    let family = rng.gen_range(0..3);
    let cat = match family {
        0 | 1 => {
            let n = rng.gen_range(1..=5);
            let labels: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
            let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
            let mut covers = Vec::new();
            for j in 0..n {
                for i in 0..j {
                    if rng.gen_bool(0.35) {
                        covers.push((i, j));
                    }
                }
            }
            if family == 0 {
                poset(&format!("RANDPOSET{index}"), &refs, &covers)?
            } else {
                let g = rng.gen_range(1..=3);
                group_times_poset(g, &refs, &covers, &format!("RANDGP{index}"))
            }
        }
        _ => {
            let mut sizes = vec![0usize, 1, 2];
            sizes.shuffle(rng);
            sizes.truncate(rng.gen_range(1..=3));
            sizes.sort_unstable();
            finset(&sizes)
        }
    };
    // try a few random candidate classes, fall back to a guaranteed one
    let free: Vec<MorId> = cat.morphism_ids().filter(|&m| !cat.is_iso(m)).collect();
    for _ in 0..6 {
        let mut class = MorClass::isos(&cat);
        for &m in &free {
            if rng.gen_bool(0.5) {
                class.insert(m);
            }
        }
        if classes::validate_stable_class(&cat, &class).is_ok() {
            return Ok(finish(format!("random{index}"), cat, class));
        }
    }
    let all = MorClass::all(&cat);
    let class = if classes::validate_stable_class(&cat, &all).is_ok() {
        all
    } else {
        MorClass::isos(&cat)
    };
    Ok(finish(format!("random{index}"), cat, class))
}

fn finish(name: String, cat: FinCat, class: MorClass) -> Instance {
    let mut inst = Instance::new(name, cat, class);
    // attach a factorization system when the class admits one
    let p = MorClass::from_predicate(&inst.cat, |m| {
        inst.class.iter().all(|s| limits::orthogonal(&inst.cat, m, s))
    });
    let ofs = Ofs {
        p,
        s: inst.class.clone(),
    };
    if limits::validate_ofs(&inst.cat, &ofs).is_ok() {
        inst.ofs = Some(ofs);
    }
    inst
}

/// `count` validated random instances from a fixed seed.
pub fn random_instances(seed: u64, count: usize) -> Result<Vec<Instance>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|i| random_instance(&mut rng, i)).collect()
}
