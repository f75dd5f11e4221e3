//! Fixtures shared by the benchmarks.

use spanforge_core::backends::TemplateInputs;
use spanforge_core::backends::BSpan;
use spanforge_core::corpus::{self, Instance};
use spanforge_core::frontend::parse_document;

/// Built-in instances plus the largest few generated ones.
pub fn instances() -> Vec<Instance> {
    let mut out = corpus::builtin();
    let mut random = corpus::random_instances(7, 40).expect("random instances");
    random.sort_by_key(|i| std::cmp::Reverse(i.cat.num_morphisms()));
    out.extend(random.into_iter().take(3));
    out
}

/// The shipped prover problem: inputs and target span.
pub fn remark47() -> (TemplateInputs, BSpan) {
    let doc = parse_document(include_str!("../../core/corpus/remark47.sf")).expect("shipped file parses");
    let p = &doc.problems[0];
    (p.inputs.clone(), p.target.clone().expect("target span"))
}
