//! Genus distributions and partitioned genus distributions over exact
//! nonnegative integers.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Counts indexed by genus, with trailing zeros trimmed so that equality is
/// structural. Also used for each partial of a partitioned distribution.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct GenusDistribution {
    counts: Vec<BigUint>,
}

impl GenusDistribution {
    pub fn new(mut counts: Vec<BigUint>) -> Self {
        while counts.last().is_some_and(Zero::is_zero) {
            counts.pop();
        }
        GenusDistribution { counts }
    }

    pub fn from_u64s(counts: &[u64]) -> Self {
        Self::new(counts.iter().copied().map(BigUint::from).collect())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// The distribution of a graph with a single (planar) embedding.
    pub fn one() -> Self {
        GenusDistribution {
            counts: vec![BigUint::one()],
        }
    }

    /// `count` embeddings, all in genus `genus`.
    pub fn monomial(genus: usize, count: impl Into<BigUint>) -> Self {
        let mut counts = vec![BigUint::zero(); genus];
        counts.push(count.into());
        Self::new(counts)
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    pub fn get(&self, genus: usize) -> BigUint {
        self.counts.get(genus).cloned().unwrap_or_default()
    }

    /// One past the largest genus with a nonzero count.
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_zero(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    pub fn min_genus(&self) -> Option<usize> {
        self.counts.iter().position(|c| !c.is_zero())
    }

    pub fn max_genus(&self) -> Option<usize> {
        self.counts.len().checked_sub(1)
    }

    /// Whether the genera with nonzero counts form an interval. The zero
    /// distribution counts as consecutive.
    pub fn has_consecutive_support(&self) -> bool {
        match self.min_genus() {
            None => true,
            Some(lo) => self.counts[lo..].iter().all(|c| !c.is_zero()),
        }
    }

    pub fn shift(&self, by: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut counts = vec![BigUint::zero(); by];
        counts.extend(self.counts.iter().cloned());
        GenusDistribution { counts }
    }

    pub fn scale(&self, factor: &BigUint) -> Self {
        if factor.is_zero() {
            return Self::zero();
        }
        GenusDistribution {
            counts: self.counts.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign_scaled_shifted(other, &BigUint::one(), 0);
        out
    }

    /// Cauchy product; only nonzero entries of each side are visited.
    pub fn convolve(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut counts = vec![BigUint::zero(); self.len() + other.len() - 1];
        let right: Vec<(usize, &BigUint)> = other.counts.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        for (i, a) in self.counts.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for &(j, b) in &right {
                counts[i + j] += a * b;
            }
        }
        Self::new(counts)
    }

    /// `self += factor * shift(other, by)`.
    pub fn add_assign_scaled_shifted(&mut self, other: &Self, factor: &BigUint, by: usize) {
        if other.is_zero() || factor.is_zero() {
            return;
        }
        let needed = other.len() + by;
        if self.counts.len() < needed {
            self.counts.resize(needed, BigUint::zero());
        }
        for (i, c) in other.counts.iter().enumerate() {
            if !c.is_zero() {
                self.counts[i + by] += c * factor;
            }
        }
    }

    pub fn to_decimal_strings(&self) -> Vec<String> {
        self.counts.iter().map(BigUint::to_string).collect()
    }

    pub fn from_decimal_strings<S: AsRef<str>>(items: &[S]) -> Option<Self> {
        items
            .iter()
            .map(|s| s.as_ref().parse::<BigUint>().ok())
            .collect::<Option<Vec<_>>>()
            .map(Self::new)
    }
}

impl fmt::Display for GenusDistribution {
    /// Space-separated counts from genus 0; the zero distribution prints `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, c) in self.counts.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// A finite family of genus-indexed partials, addressed by a kind.
pub trait Partials: Default {
    type Kind: Copy + 'static;

    fn part(&self, kind: Self::Kind) -> &GenusDistribution;
    fn part_mut(&mut self, kind: Self::Kind) -> &mut GenusDistribution;
}

/// The single "partial" of a plain genus distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Genus;

impl Partials for GenusDistribution {
    type Kind = Genus;

    fn part(&self, _: Genus) -> &GenusDistribution {
        self
    }

    fn part_mut(&mut self, _: Genus) -> &mut GenusDistribution {
        self
    }
}

/// Partials of a string whose two roots are univalent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UuKind {
    /// The roots lie on different face-boundary walks.
    Dot,
    /// The roots lie on the same face-boundary walk.
    Prime,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct UUPartials {
    pub uu_dot: GenusDistribution,
    pub uu_prime: GenusDistribution,
}

impl UUPartials {
    /// `K2`: one planar embedding, both roots on its single face.
    pub fn k2() -> Self {
        UUPartials {
            uu_dot: GenusDistribution::zero(),
            uu_prime: GenusDistribution::one(),
        }
    }

    pub fn from_u64s(uu_dot: &[u64], uu_prime: &[u64]) -> Self {
        UUPartials {
            uu_dot: GenusDistribution::from_u64s(uu_dot),
            uu_prime: GenusDistribution::from_u64s(uu_prime),
        }
    }

    /// The genus distribution of the underlying string.
    pub fn gd(&self) -> GenusDistribution {
        self.uu_dot.add(&self.uu_prime)
    }

    pub fn total(&self) -> BigUint {
        self.uu_dot.total() + self.uu_prime.total()
    }

    /// Nonzero entries as `(kind, genus)` pairs.
    pub fn nonzero_count(&self) -> usize {
        [&self.uu_dot, &self.uu_prime]
            .iter()
            .map(|d| d.counts().iter().filter(|c| !c.is_zero()).count())
            .sum()
    }
}

impl Partials for UUPartials {
    type Kind = UuKind;

    fn part(&self, kind: UuKind) -> &GenusDistribution {
        match kind {
            UuKind::Dot => &self.uu_dot,
            UuKind::Prime => &self.uu_prime,
        }
    }

    fn part_mut(&mut self, kind: UuKind) -> &mut GenusDistribution {
        match kind {
            UuKind::Dot => &mut self.uu_dot,
            UuKind::Prime => &mut self.uu_prime,
        }
    }
}

/// Partials of two strings joined in parallel, both roots bivalent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClosureKind {
    /// One walk twice through each root, different walks at the two roots.
    SsDot,
    /// The same walk twice through both roots.
    SsPrime,
    /// The same two walks through both roots.
    DdDoublePrime,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ClosurePartials {
    pub ss_dot: GenusDistribution,
    pub ss_prime: GenusDistribution,
    pub dd_dprime: GenusDistribution,
}

impl ClosurePartials {
    pub fn from_u64s(ss_dot: &[u64], ss_prime: &[u64], dd_dprime: &[u64]) -> Self {
        ClosurePartials {
            ss_dot: GenusDistribution::from_u64s(ss_dot),
            ss_prime: GenusDistribution::from_u64s(ss_prime),
            dd_dprime: GenusDistribution::from_u64s(dd_dprime),
        }
    }

    pub fn gd(&self) -> GenusDistribution {
        self.ss_dot.add(&self.ss_prime).add(&self.dd_dprime)
    }

    pub fn total(&self) -> BigUint {
        self.ss_dot.total() + self.ss_prime.total() + self.dd_dprime.total()
    }
}

impl Partials for ClosurePartials {
    type Kind = ClosureKind;

    fn part(&self, kind: ClosureKind) -> &GenusDistribution {
        match kind {
            ClosureKind::SsDot => &self.ss_dot,
            ClosureKind::SsPrime => &self.ss_prime,
            ClosureKind::DdDoublePrime => &self.dd_dprime,
        }
    }

    fn part_mut(&mut self, kind: ClosureKind) -> &mut GenusDistribution {
        match kind {
            ClosureKind::SsDot => &mut self.ss_dot,
            ClosureKind::SsPrime => &mut self.ss_prime,
            ClosureKind::DdDoublePrime => &mut self.dd_dprime,
        }
    }
}
