use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use spanforge_bench::{instances, remark47};
use spanforge_core::backends::{bounded_prover, Backend, CertRelation, ProverBounds, SPred};
use spanforge_core::spans::{relation, RelationContext};
use spanforge_core::structures::par;
use spanforge_core::{RelationKind, SpanCategory};

fn span_category(c: &mut Criterion) {
    let mut g = c.benchmark_group("span_category");
    for inst in instances() {
        g.bench_with_input(BenchmarkId::from_parameter(&inst.name), &inst, |b, i| {
            b.iter(|| SpanCategory::new(&i.cat, &i.class).unwrap())
        });
    }
    g.finish();
}

fn saturation(c: &mut Criterion) {
    let mut g = c.benchmark_group("saturate");
    for inst in instances() {
        let sc = SpanCategory::new(&inst.cat, &inst.class).unwrap();
        let ctx = RelationContext { ofs: inst.ofs.clone(), ..Default::default() };
        for kind in [RelationKind::Z, RelationKind::A, RelationKind::Az] {
            let id = BenchmarkId::new(kind.to_string(), &inst.name);
            g.bench_function(id, |b| b.iter(|| relation(&sc, &kind, &ctx).unwrap()));
        }
    }
    g.finish();
}

fn partial_maps(c: &mut Criterion) {
    let mut g = c.benchmark_group("par");
    for inst in instances() {
        let sc = SpanCategory::new(&inst.cat, &inst.class).unwrap();
        g.bench_function(&inst.name, |b| b.iter(|| par(&sc).unwrap()));
    }
    g.finish();
}

fn prover(c: &mut Criterion) {
    let (inputs, target) = remark47();
    let bounds = ProverBounds { max_apex: 4, max_steps: 6 };
    c.bench_function("prover/remark47", |b| {
        b.iter(|| bounded_prover(Backend::FinSet, SPred::All, CertRelation::A, &inputs.span, &target, bounds).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = span_category, saturation, partial_maps, prover
}
criterion_main!(benches);
