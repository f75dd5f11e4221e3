use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::{RelationKind, SpanCategory, SpanId};

/// An equivalence relation on all span classes of one instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub kind: RelationKind,
    /// Block index per span. Blocks are numbered by their least member.
    block: Vec<usize>,
    blocks: Vec<Vec<SpanId>>,
}

struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }
}

impl Partition {
    pub fn discrete(n: usize, kind: RelationKind) -> Partition {
        Partition {
            kind,
            block: (0..n).collect(),
            blocks: (0..n).map(|i| vec![i]).collect(),
        }
    }

    fn from_union_find(uf: &mut UnionFind, kind: RelationKind) -> Partition {
        let n = uf.parent.len();
        let mut root_block = vec![usize::MAX; n];
        let mut block = vec![0; n];
        let mut blocks: Vec<Vec<SpanId>> = Vec::new();
        for x in 0..n {
            let r = uf.find(x);
            if root_block[r] == usize::MAX {
                root_block[r] = blocks.len();
                blocks.push(Vec::new());
            }
            block[x] = root_block[r];
            blocks[root_block[r]].push(x);
        }
        Partition {
            kind,
            block,
            blocks,
        }
    }

    /// The equivalence generated by `pairs`, with no compatibility closure.
    pub fn from_pairs(n: usize, pairs: &[(SpanId, SpanId)], kind: RelationKind) -> Partition {
        let mut uf = UnionFind::new(n);
        for &(a, b) in pairs {
            uf.union(a, b);
        }
        Partition::from_union_find(&mut uf, kind)
    }

    pub fn len(&self) -> usize {
        self.block.len()
    }

    pub fn is_empty(&self) -> bool {
        self.block.is_empty()
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_of(&self, s: SpanId) -> usize {
        self.block[s]
    }

    pub fn block(&self, b: usize) -> &[SpanId] {
        &self.blocks[b]
    }

    pub fn blocks(&self) -> &[Vec<SpanId>] {
        &self.blocks
    }

    pub fn same(&self, a: SpanId, b: SpanId) -> bool {
        self.block[a] == self.block[b]
    }

    pub fn is_discrete(&self) -> bool {
        self.blocks.len() == self.block.len()
    }

    /// First pair related here but not in `coarser`, if any.
    pub fn refinement_witness(&self, coarser: &Partition) -> Option<(SpanId, SpanId)> {
        self.blocks.iter().find_map(|b| {
            b.iter()
                .find(|&&x| !coarser.same(b[0], x))
                .map(|&x| (b[0], x))
        })
    }

    pub fn refines(&self, coarser: &Partition) -> bool {
        self.refinement_witness(coarser).is_none()
    }

    /// Same blocks, regardless of relation tag.
    pub fn same_blocks(&self, other: &Partition) -> bool {
        self.block == other.block
    }

    /// Compatibility audit: a pair of related spans whose whiskering by some
    /// span is not related. `None` means the partition is compatible.
    pub fn compatibility_witness(
        &self,
        sc: &SpanCategory,
    ) -> Option<(SpanId, SpanId, SpanId)> {
        for b in &self.blocks {
            let x = b[0];
            for &y in &b[1..] {
                let (dx, cx) = (sc.get(x).dom, sc.get(x).cod);
                if (dx, cx) != (sc.get(y).dom, sc.get(y).cod) {
                    return Some((x, y, x));
                }
                for &rho in sc.out_of(cx) {
                    if !self.same(sc.comp(rho, x), sc.comp(rho, y)) {
                        return Some((x, y, rho));
                    }
                }
                for &pi in sc.into(dx) {
                    if !self.same(sc.comp(x, pi), sc.comp(y, pi)) {
                        return Some((x, y, pi));
                    }
                }
            }
        }
        None
    }
}

/// Least compatible equivalence relation containing `seed`.
///
/// Each merge enqueues the whiskered pairs of the merging pair; pairs that
/// merge nothing are dropped, since their whiskers are already related via
/// the merge forest.
pub fn saturate(sc: &SpanCategory, seed: &[(SpanId, SpanId)], kind: RelationKind) -> Partition {
    let mut uf = UnionFind::new(sc.len());
    let mut work: VecDeque<(SpanId, SpanId)> = seed.iter().copied().collect();
    while let Some((x, y)) = work.pop_front() {
        if !uf.union(x, y) {
            continue;
        }
        let (dom, cod) = (sc.get(x).dom, sc.get(x).cod);
        for &rho in sc.out_of(cod) {
            work.push_back((sc.comp(rho, x), sc.comp(rho, y)));
        }
        for &pi in sc.into(dom) {
            work.push_back((sc.comp(x, pi), sc.comp(y, pi)));
        }
    }
    Partition::from_union_find(&mut uf, kind)
}
