use serde::{Deserialize, Serialize};

use super::{Partition, SpanCategory, SpanId};
use crate::classes::MorClass;
use crate::error::{Error, Result};
use crate::fincat::{
    validate_category, validate_functor, FinCat, FunctorData, MorId, ObjId, RawCategory,
    RawMorphism, Variance,
};

/// The quotient of the span category by a compatible partition.
///
/// Morphism `m` of `cat` is block `m` of `partition`.
#[derive(Clone, Debug)]
pub struct QuotCat {
    pub partition: Partition,
    pub cat: FinCat,
    /// Least span class of each block.
    pub reps: Vec<SpanId>,
    /// `f ↦ [1, f]`.
    pub phi: FunctorData,
    /// `s ↦ [s, 1]`, contravariant, defined on `S`.
    pub psi: FunctorData,
}

impl QuotCat {
    pub fn new(sc: &SpanCategory, partition: &Partition) -> Result<QuotCat> {
        if partition.len() != sc.len() {
            return Err(Error::Input("partition does not match the span category".into()));
        }
        let c = &sc.cat;
        let nb = partition.num_blocks();
        let reps: Vec<SpanId> = partition.blocks().iter().map(|b| b[0]).collect();
        let mut raw = RawCategory::new(format!("{}/{}", c.name(), partition.kind));
        raw.objects = c.object_ids().map(|o| c.object_label(o).to_string()).collect();
        raw.morphisms = reps
            .iter()
            .map(|&r| RawMorphism {
                label: sc.label(r),
                dom: sc.get(r).dom.idx(),
                cod: sc.get(r).cod.idx(),
            })
            .collect();
        raw.identities = c
            .object_ids()
            .map(|o| Some(partition.block_of(sc.identity(o))))
            .collect();
        for (bs, &rs) in reps.iter().enumerate() {
            for &rt in sc.out_of(sc.get(rs).cod) {
                let bt = partition.block_of(rt);
                raw.compose
                    .entry((bt, bs))
                    .or_insert_with(|| partition.block_of(sc.comp(rt, rs)));
            }
        }
        // every representative pair must agree with the table
        for sigma in sc.ids() {
            for &tau in sc.out_of(sc.get(sigma).cod) {
                let got = partition.block_of(sc.comp(tau, sigma));
                let want = raw.compose[&(partition.block_of(tau), partition.block_of(sigma))];
                if got != want {
                    return Err(Error::Internal(format!(
                        "composition not well defined on blocks: {} after {}",
                        sc.label(tau),
                        sc.label(sigma)
                    )));
                }
            }
        }
        let report = validate_category(&raw);
        if !report.is_ok() {
            return Err(Error::Internal(format!(
                "quotient is not a category: {:?}",
                report.violations.first()
            )));
        }
        let cat = raw.build().map_err(|_| Error::Internal("quotient build".into()))?;
        debug_assert_eq!(cat.num_morphisms(), nb);
        let omap: Vec<ObjId> = c.object_ids().collect();
        let phi = FunctorData {
            name: "Phi".into(),
            omap: omap.clone(),
            mmap: c
                .morphism_ids()
                .map(|f| Some(MorId(partition.block_of(sc.phi(f)) as u32)))
                .collect(),
            variance: Variance::Covariant,
        };
        let psi = FunctorData {
            name: "Psi".into(),
            omap,
            mmap: c
                .morphism_ids()
                .map(|s| sc.psi(s).map(|x| MorId(partition.block_of(x) as u32)))
                .collect(),
            variance: Variance::Contravariant,
        };
        Ok(QuotCat {
            partition: partition.clone(),
            cat,
            reps,
            phi,
            psi,
        })
    }

    pub fn morphism_of(&self, span: SpanId) -> MorId {
        MorId(self.partition.block_of(span) as u32)
    }

    /// Number of blocks per hom-set, row-major over objects.
    pub fn hom_sizes(&self) -> Vec<Vec<usize>> {
        let c = &self.cat;
        c.object_ids()
            .map(|a| c.object_ids().map(|b| c.hom(a, b).len()).collect())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InducedFunctor {
    pub functor: Option<FunctorData>,
    /// Related spans with different values `Ff∘Gs`.
    pub inconsistent: Vec<(SpanId, SpanId)>,
}

fn span_value(sc: &SpanCategory, f: &FunctorData, g: &FunctorData, target: &FinCat, x: SpanId) -> MorId {
    let r = sc.get(x).rep;
    target.comp(f.at(r.f), g.at(r.s))
}

/// The functor `H[s,f] = Ff∘Gs` on the quotient, if the pair is consistent
/// with the partition.
pub fn induced_functor(
    sc: &SpanCategory,
    quot: &QuotCat,
    f: &FunctorData,
    g: &FunctorData,
    target: &FinCat,
) -> Result<InducedFunctor> {
    if f.variance != Variance::Covariant || g.variance != Variance::Contravariant {
        return Err(Error::Input("need a covariant F and a contravariant G".into()));
    }
    if !f.is_total() || !validate_functor(f, &sc.cat, target).is_ok() {
        return Err(Error::Input(format!("{} is not a functor into the target", f.name)));
    }
    if !validate_functor(g, &sc.cat, target).is_ok() || sc.class.iter().any(|s| g.mor(s).is_none())
    {
        return Err(Error::Input(format!("{} is not a functor on S", g.name)));
    }
    if f.omap != g.omap {
        return Err(Error::Input("F and G disagree on objects".into()));
    }
    let mut inconsistent = Vec::new();
    let mut mmap = Vec::with_capacity(quot.reps.len());
    for block in quot.partition.blocks() {
        let first = span_value(sc, f, g, target, block[0]);
        for &y in &block[1..] {
            if span_value(sc, f, g, target, y) != first {
                inconsistent.push((block[0], y));
            }
        }
        mmap.push(Some(first));
    }
    let functor = inconsistent.is_empty().then(|| FunctorData {
        name: format!("H({},{})", f.name, g.name),
        omap: f.omap.clone(),
        mmap,
        variance: Variance::Covariant,
    });
    Ok(InducedFunctor {
        functor,
        inconsistent,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalizationReport {
    pub refines: bool,
    /// Members `x` of the inverted class with `F(Φx)` not invertible.
    pub not_inverted: Vec<MorId>,
    /// Spans merged by the coarser partition on which `F` differs.
    pub conflicts: Vec<(SpanId, SpanId)>,
    pub factor: Option<FunctorData>,
    /// The comparison functor is full and bijective on objects, so a factor
    /// is unique whenever it exists.
    pub unique: bool,
}

impl LocalizationReport {
    pub fn is_ok(&self) -> bool {
        self.refines && self.not_inverted.is_empty() && self.conflicts.is_empty() && self.factor.is_some()
    }
}

/// Checks that `func`, defined on the finer quotient `from`, inverts the
/// image of `inverted` and factors through the coarser quotient `to`.
pub fn check_localization(
    sc: &SpanCategory,
    from: &QuotCat,
    to: &QuotCat,
    inverted: &MorClass,
    func: &FunctorData,
    target: &FinCat,
) -> Result<LocalizationReport> {
    if from.partition.len() != sc.len() || to.partition.len() != sc.len() {
        return Err(Error::Input("quotients come from a different span category".into()));
    }
    if !func.is_total() || !validate_functor(func, &from.cat, target).is_ok() {
        return Err(Error::Input(format!("{} is not a functor on the quotient", func.name)));
    }
    let refines = from.partition.refines(&to.partition);
    let not_inverted: Vec<MorId> = inverted
        .iter()
        .filter(|&x| !target.is_iso(func.at(from.phi.at(x))))
        .collect();
    let mut conflicts = Vec::new();
    let mut mmap = vec![None; to.reps.len()];
    for (b, block) in to.partition.blocks().iter().enumerate() {
        let first = func.at(from.morphism_of(block[0]));
        for &y in &block[1..] {
            if func.at(from.morphism_of(y)) != first {
                conflicts.push((block[0], y));
            }
        }
        mmap[b] = Some(first);
    }
    // Γ hits every block of `to` because blocks are nonempty
    let unique = to.partition.blocks().iter().all(|b| !b.is_empty());
    let factor = (refines && conflicts.is_empty()).then(|| FunctorData {
        name: format!("{}'", func.name),
        omap: func.omap.clone(),
        mmap,
        variance: Variance::Covariant,
    });
    Ok(LocalizationReport {
        refines,
        not_inverted,
        conflicts,
        factor,
        unique,
    })
}
