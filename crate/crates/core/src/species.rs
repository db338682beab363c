//! Finite label sets, subsets of them, and the set compositions that the
//! Hopf operations sum over.
//!
//! A [`LabelSet`] keeps its labels sorted, so a subset is just a bitmask over
//! label positions. Everything that needs a canonical order (graph keys,
//! formal sums, printed output) uses that position order.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest label set a [`Subset`] bitmask can address.
pub const MAX_LABELS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(Arc<str>);

impl Label {
    pub fn new(id: impl AsRef<str>) -> Result<Self> {
        let id = id.as_ref();
        if id.is_empty() || id.chars().any(char::is_whitespace) {
            return Err(Error::InvalidLabel(id.to_string()));
        }
        Ok(Label(Arc::from(id)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A set of vertex positions, relative to some [`LabelSet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Subset(pub u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn full(n: usize) -> Subset {
        debug_assert!(n <= MAX_LABELS);
        if n == MAX_LABELS {
            Subset(u64::MAX)
        } else {
            Subset((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Subset {
        Subset(1 << i)
    }

    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> Subset {
        Subset(indices.into_iter().fold(0, |m, i| m | (1 << i)))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_LABELS && self.0 >> i & 1 == 1
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub fn difference(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    pub fn insert(self, i: usize) -> Subset {
        Subset(self.0 | 1 << i)
    }

    /// Positions in increasing order.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    /// Re-index a subset of `within` so that the j-th member of `within`
    /// becomes position j. Used when moving to the label set of a restriction.
    pub fn compress(self, within: Subset) -> Subset {
        debug_assert!(self.is_subset_of(within));
        let mut out = 0u64;
        for (j, i) in within.indices().enumerate() {
            if self.contains(i) {
                out |= 1 << j;
            }
        }
        Subset(out)
    }

    /// Inverse of [`Subset::compress`]: position j maps to the j-th member of `within`.
    pub fn expand(self, within: Subset) -> Subset {
        let mut out = 0u64;
        for (j, i) in within.indices().enumerate() {
            if self.contains(j) {
                out |= 1 << i;
            }
        }
        Subset(out)
    }

    /// Nonempty submasks of `self`, in increasing numeric order.
    pub fn nonempty_submasks(self) -> impl Iterator<Item = Subset> {
        let universe = self.0;
        let mut cur = 0u64;
        std::iter::from_fn(move || {
            cur = (cur | !universe).wrapping_add(1) & universe;
            (cur != 0).then_some(Subset(cur))
        })
    }
}

/// Sorted, duplicate-free finite set of labels.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LabelSet {
    labels: Arc<[Label]>,
}

impl LabelSet {
    pub fn new(labels: impl IntoIterator<Item = Label>) -> Result<Self> {
        let mut labels: Vec<Label> = labels.into_iter().collect();
        labels.sort();
        if let Some(w) = labels.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateLabel(w[0].to_string()));
        }
        if labels.len() > MAX_LABELS {
            return Err(Error::SizeLimit {
                what: "label set",
                size: labels.len(),
                limit: MAX_LABELS,
            });
        }
        Ok(LabelSet {
            labels: labels.into(),
        })
    }

    pub fn from_strs<S: AsRef<str>>(ids: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels = ids.into_iter().map(Label::new).collect::<Result<Vec<_>>>()?;
        LabelSet::new(labels)
    }

    /// Labels "0", "1", …, "n-1".
    pub fn range(n: usize) -> Self {
        LabelSet::from_strs((0..n).map(|i| i.to_string())).expect("numeric labels are valid")
    }

    pub fn empty() -> Self {
        LabelSet::default()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn get(&self, i: usize) -> &Label {
        &self.labels[i]
    }

    pub fn position(&self, label: &Label) -> Option<usize> {
        self.labels.binary_search(label).ok()
    }

    pub fn position_of(&self, id: &str) -> Result<usize> {
        self.labels
            .binary_search_by(|l| l.as_str().cmp(id))
            .map_err(|_| Error::UnknownLabel(id.to_string()))
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.len())
    }

    pub fn subset<S: AsRef<str>>(&self, ids: impl IntoIterator<Item = S>) -> Result<Subset> {
        let mut mask = Subset::EMPTY;
        for id in ids {
            mask = mask.insert(self.position_of(id.as_ref())?);
        }
        Ok(mask)
    }

    pub fn contains_subset(&self, s: Subset) -> bool {
        s.is_subset_of(self.full())
    }

    pub fn check_subset(&self, s: Subset) -> Result<()> {
        if self.contains_subset(s) {
            Ok(())
        } else {
            Err(Error::Domain)
        }
    }

    /// The label set of the members of `s`.
    pub fn restrict(&self, s: Subset) -> LabelSet {
        LabelSet {
            labels: s.indices().map(|i| self.labels[i].clone()).collect(),
        }
    }

    pub fn labels_of(&self, s: Subset) -> Vec<&Label> {
        s.indices().map(|i| &self.labels[i]).collect()
    }

    pub fn is_disjoint(&self, other: &LabelSet) -> bool {
        self.first_shared(other).is_none()
    }

    pub(crate) fn first_shared(&self, other: &LabelSet) -> Option<&Label> {
        self.labels.iter().find(|l| other.position(l).is_some())
    }

    pub fn format_subset(&self, s: Subset) -> String {
        let names: Vec<&str> = s.indices().map(|i| self.labels[i].as_str()).collect();
        format!("{{{}}}", names.join(","))
    }
}

impl fmt::Display for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_subset(self.full()))
    }
}

/// An ordered sequence of non-empty, pairwise disjoint blocks covering a
/// label set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Composition {
    blocks: Vec<Subset>,
}

impl Composition {
    /// Validates the blocks against a ground set of `n` positions.
    pub fn new(n: usize, blocks: Vec<Subset>) -> Result<Self> {
        let mut seen = Subset::EMPTY;
        for b in &blocks {
            if b.is_empty() {
                return Err(Error::InvalidComposition("empty block".into()));
            }
            if !b.intersection(seen).is_empty() {
                return Err(Error::InvalidComposition("overlapping blocks".into()));
            }
            seen = seen.union(*b);
        }
        if seen != Subset::full(n) {
            return Err(Error::InvalidComposition(
                "blocks do not cover the ground set".into(),
            ));
        }
        Ok(Composition { blocks })
    }

    pub fn blocks(&self) -> &[Subset] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Block index of every position of the ground set.
    pub fn block_of(&self, n: usize) -> Vec<usize> {
        let mut out = vec![usize::MAX; n];
        for (j, b) in self.blocks.iter().enumerate() {
            for i in b.indices() {
                out[i] = j;
            }
        }
        out
    }
}

/// A decomposition lets blocks be empty; only used for display and
/// conversions, every sum runs over compositions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Decomposition {
    pub blocks: Vec<Subset>,
}

impl Decomposition {
    /// Drop empty blocks.
    pub fn to_composition(&self, n: usize) -> Result<Composition> {
        Composition::new(
            n,
            self.blocks.iter().copied().filter(|b| !b.is_empty()).collect(),
        )
    }
}

/// Streaming enumeration of the compositions of an `n`-element set into
/// exactly `k` blocks, lexicographic in the block masks.
pub struct Compositions {
    k: usize,
    blocks: Vec<Subset>,
    started: bool,
    done: bool,
}

impl Compositions {
    fn new(n: usize, k: usize) -> Self {
        let done = if n == 0 { k != 0 } else { k == 0 || k > n };
        let mut it = Compositions {
            k,
            blocks: Vec::with_capacity(k),
            started: false,
            done,
        };
        if !it.done {
            it.fill_from(0, Subset::full(n));
        }
        it
    }

    /// Fill positions `from..k` with the smallest valid choices.
    fn fill_from(&mut self, from: usize, mut remaining: Subset) {
        self.blocks.truncate(from);
        for j in from..self.k {
            let block = if j + 1 == self.k {
                remaining
            } else {
                Subset(remaining.0 & remaining.0.wrapping_neg())
            };
            self.blocks.push(block);
            remaining = remaining.difference(block);
        }
    }

    fn advance(&mut self) -> bool {
        if self.k < 2 {
            return false;
        }
        // The last block is forced, so start from the one before it.
        for j in (0..self.k - 1).rev() {
            let universe = self.blocks[j..]
                .iter()
                .fold(Subset::EMPTY, |acc, b| acc.union(*b));
            let need = self.k - 1 - j;
            let mut cur = self.blocks[j].0;
            loop {
                cur = (cur | !universe.0).wrapping_add(1) & universe.0;
                if cur == 0 {
                    break;
                }
                if (universe.0 & !cur).count_ones() as usize >= need {
                    self.blocks.truncate(j);
                    self.blocks.push(Subset(cur));
                    let rest = universe.difference(Subset(cur));
                    self.fill_from(j + 1, rest);
                    return true;
                }
            }
        }
        false
    }
}

impl Iterator for Compositions {
    type Item = Composition;

    fn next(&mut self) -> Option<Composition> {
        if self.done {
            return None;
        }
        if self.started && !self.advance() {
            self.done = true;
            return None;
        }
        self.started = true;
        Some(Composition {
            blocks: self.blocks.clone(),
        })
    }
}

/// Compositions of `labels` into exactly `k` blocks. An empty stream when
/// `k` is 0 (unless the set is empty) or `k > |I|`.
pub fn enumerate_compositions(labels: &LabelSet, k: usize) -> Compositions {
    Compositions::new(labels.len(), k)
}

/// Compositions of `labels` into any number of blocks, by increasing block count.
pub fn all_compositions(labels: &LabelSet) -> impl Iterator<Item = Composition> {
    let n = labels.len();
    let ks = if n == 0 { 0..=0 } else { 1..=n };
    ks.flat_map(move |k| Compositions::new(n, k))
}

/// All `2^|I|` subsets, in increasing bitmask order.
pub fn enumerate_subsets(
    labels: &LabelSet,
    max_vertices: usize,
) -> Result<impl Iterator<Item = Subset>> {
    let n = labels.len();
    if n > max_vertices {
        return Err(Error::SizeLimit {
            what: "subset enumeration",
            size: n,
            limit: max_vertices,
        });
    }
    Ok((0..1u64 << n).map(Subset))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stirling2(n: usize, k: usize) -> u64 {
        let mut t = vec![vec![0u64; k + 1]; n + 1];
        t[0][0] = 1;
        for i in 1..=n {
            for j in 1..=k.min(i) {
                t[i][j] = j as u64 * t[i - 1][j] + t[i - 1][j - 1];
            }
        }
        t[n][k]
    }

    fn factorial(n: usize) -> u64 {
        (1..=n as u64).product()
    }

    // Counts maps [n] -> [k] hitting every value.
    fn brute_surjections(n: usize, k: usize) -> u64 {
        if k == 0 {
            return u64::from(n == 0);
        }
        let total = (k as u64).pow(n as u32);
        (0..total)
            .filter(|&code| {
                let mut hit = vec![false; k];
                let mut c = code;
                for _ in 0..n {
                    hit[(c % k as u64) as usize] = true;
                    c /= k as u64;
                }
                hit.iter().all(|&h| h)
            })
            .count() as u64
    }

    #[test]
    fn singleton_has_one_composition() {
        let ls = LabelSet::from_strs(["a"]).unwrap();
        let all: Vec<_> = enumerate_compositions(&ls, 1).collect();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].blocks(), &[Subset(1)]);
    }

    #[test]
    fn two_labels_two_blocks() {
        let ls = LabelSet::from_strs(["a", "b"]).unwrap();
        let all: Vec<Vec<String>> = enumerate_compositions(&ls, 2)
            .map(|c| c.blocks().iter().map(|b| ls.format_subset(*b)).collect())
            .collect();
        assert_eq!(all, vec![vec!["{a}", "{b}"], vec!["{b}", "{a}"]]);
    }

    #[test]
    fn three_labels_two_blocks_is_six() {
        assert_eq!(enumerate_compositions(&LabelSet::range(3), 2).count(), 6);
        assert_eq!(brute_surjections(3, 2), 6);
    }

    #[test]
    fn degenerate_block_counts() {
        assert_eq!(enumerate_compositions(&LabelSet::range(3), 0).count(), 0);
        assert_eq!(enumerate_compositions(&LabelSet::range(3), 4).count(), 0);
        assert_eq!(enumerate_compositions(&LabelSet::empty(), 0).count(), 1);
        assert_eq!(enumerate_compositions(&LabelSet::empty(), 1).count(), 0);
    }

    #[test]
    fn counts_match_surjections_and_stirling() {
        for n in 0..=7 {
            for k in 0..=n {
                let ls = LabelSet::range(n);
                let got = enumerate_compositions(&ls, k).count() as u64;
                assert_eq!(got, brute_surjections(n, k), "n={n} k={k}");
                assert_eq!(got, factorial(k) * stirling2(n, k), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn compositions_are_valid_distinct_and_sorted() {
        let n = 5;
        for k in 1..=n {
            let all: Vec<_> = enumerate_compositions(&LabelSet::range(n), k).collect();
            for c in &all {
                Composition::new(n, c.blocks().to_vec()).unwrap();
                let mut members: Vec<usize> = c.blocks().iter().flat_map(|b| b.indices()).collect();
                members.sort_unstable();
                assert_eq!(members, (0..n).collect::<Vec<_>>());
            }
            let keys: Vec<Vec<u64>> = all
                .iter()
                .map(|c| c.blocks().iter().map(|b| b.0).collect())
                .collect();
            let mut sorted = keys.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(keys, sorted);
        }
    }

    #[test]
    fn ordered_bell_number_for_nine() {
        let total = all_compositions(&LabelSet::range(9)).count();
        assert_eq!(total, 7_087_261);
    }

    #[test]
    fn subsets() {
        let sub: Vec<_> = enumerate_subsets(&LabelSet::empty(), 20).unwrap().collect();
        assert_eq!(sub, vec![Subset::EMPTY]);
        let ls = LabelSet::from_strs(["a"]).unwrap();
        let sub: Vec<_> = enumerate_subsets(&ls, 20).unwrap().collect();
        assert_eq!(sub, vec![Subset(0), Subset(1)]);
        assert_eq!(enumerate_subsets(&LabelSet::range(3), 20).unwrap().count(), 8);
        assert!(matches!(
            enumerate_subsets(&LabelSet::range(21), 20),
            Err(Error::SizeLimit { .. })
        ));
    }

    #[test]
    fn compress_expand_roundtrip() {
        let within = Subset(0b101101);
        for s in within.nonempty_submasks() {
            assert_eq!(s.compress(within).expand(within), s);
        }
        assert_eq!(Subset(0b100100).compress(within), Subset(0b1010));
    }

    #[test]
    fn labels_are_validated() {
        assert!(Label::new("").is_err());
        assert!(Label::new("a b").is_err());
        assert!(matches!(
            LabelSet::from_strs(["a", "a"]),
            Err(Error::DuplicateLabel(_))
        ));
    }
}
