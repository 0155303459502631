//! Production tables and their bilinear application.
//!
//! Each rule maps an embedding of type `left` at genus `i` combined with an
//! embedding of type `right` at genus `j` to a weighted set of embeddings of
//! the result: `coefficient` of them of kind `kind` at genus
//! `i + j + genus_increment`.

use num_bigint::BigUint;

use crate::pgd::{ClosureKind, ClosurePartials, Genus, GenusDistribution, Partials, UUPartials, UuKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Term<K> {
    pub kind: K,
    pub coefficient: u32,
    pub genus_increment: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProductionRule<L, R, K: 'static> {
    pub left: L,
    pub right: R,
    pub consequent: &'static [Term<K>],
}

impl<L, R, K> ProductionRule<L, R, K> {
    pub fn coefficient_sum(&self) -> u32 {
        self.consequent.iter().map(|t| t.coefficient).sum()
    }
}

const fn term<K>(kind: K, coefficient: u32, genus_increment: usize) -> Term<K> {
    Term {
        kind,
        coefficient,
        genus_increment,
    }
}

const fn rule<L, R, K>(left: L, right: R, consequent: &'static [Term<K>]) -> ProductionRule<L, R, K> {
    ProductionRule {
        left,
        right,
        consequent,
    }
}

use ClosureKind::{DdDoublePrime, SsDot, SsPrime};
use UuKind::{Dot, Prime};

/// Parallel join of two strings with a spike attached at each merged root.
pub const MODIFIED_PARALLEL: [ProductionRule<UuKind, UuKind, UuKind>; 4] = [
    rule(Dot, Dot, &[term(Dot, 4, 1)]),
    rule(Dot, Prime, &[term(Prime, 4, 1)]),
    rule(Prime, Dot, &[term(Prime, 4, 1)]),
    rule(Prime, Prime, &[term(Dot, 2, 0), term(Prime, 2, 0)]),
];

/// Series join with the merged root smoothed away.
pub const MODIFIED_SERIES: [ProductionRule<UuKind, UuKind, UuKind>; 4] = [
    rule(Dot, Dot, &[term(Dot, 1, 0)]),
    rule(Dot, Prime, &[term(Dot, 1, 0)]),
    rule(Prime, Dot, &[term(Dot, 1, 0)]),
    rule(Prime, Prime, &[term(Prime, 1, 0)]),
];

/// Plain parallel join; both merged roots become bivalent.
pub const PARALLEL_JOIN: [ProductionRule<UuKind, UuKind, ClosureKind>; 4] = [
    rule(Dot, Dot, &[term(SsDot, 1, 1)]),
    rule(Dot, Prime, &[term(SsPrime, 1, 1)]),
    rule(Prime, Dot, &[term(SsPrime, 1, 1)]),
    rule(Prime, Prime, &[term(DdDoublePrime, 1, 0)]),
];

/// Parallel join of a bivalent-rooted graph with a third string, making
/// both roots trivalent.
pub const PARALLEL_CLOSURE: [ProductionRule<ClosureKind, UuKind, Genus>; 6] = [
    rule(DdDoublePrime, Dot, &[term(Genus, 4, 1)]),
    rule(DdDoublePrime, Prime, &[term(Genus, 2, 0), term(Genus, 2, 1)]),
    rule(SsDot, Dot, &[term(Genus, 4, 1)]),
    rule(SsDot, Prime, &[term(Genus, 4, 1)]),
    rule(SsPrime, Dot, &[term(Genus, 4, 1)]),
    rule(SsPrime, Prime, &[term(Genus, 4, 0)]),
];

/// Applies a rule table bilinearly: every pair of nonzero entries of `a`
/// and `b` contributes through the rule for their kinds.
pub fn apply<A, B, C>(rules: &[ProductionRule<A::Kind, B::Kind, C::Kind>], a: &A, b: &B) -> C
where
    A: Partials,
    B: Partials,
    C: Partials,
{
    let mut out = C::default();
    for r in rules {
        let product = a.part(r.left).convolve(b.part(r.right));
        if product.is_zero() {
            continue;
        }
        for t in r.consequent {
            out.part_mut(t.kind)
                .add_assign_scaled_shifted(&product, &BigUint::from(t.coefficient), t.genus_increment);
        }
    }
    out
}

pub fn mod_parallel(a: &UUPartials, b: &UUPartials) -> UUPartials {
    apply(&MODIFIED_PARALLEL, a, b)
}

pub fn mod_series(a: &UUPartials, b: &UUPartials) -> UUPartials {
    apply(&MODIFIED_SERIES, a, b)
}

pub fn join_parallel(a: &UUPartials, b: &UUPartials) -> ClosurePartials {
    apply(&PARALLEL_JOIN, a, b)
}

pub fn close_parallel(a: &ClosurePartials, b: &UUPartials) -> GenusDistribution {
    apply(&PARALLEL_CLOSURE, a, b)
}
