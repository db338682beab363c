//! Named coloring invariants of directed graphs and their brute-force oracles.
//!
//! The binomial-basis coefficient `c_k` of each invariant is a sum over
//! surjective colorings `f: I → [k]`, which are the compositions of `I` into
//! `k` blocks (block `j` is `f⁻¹(j+1)`). These sums run over the composition
//! stream directly and are independent of the character engine in [`crate::hopf`].

use std::collections::BTreeMap;

use num_bigint::BigInt;


use crate::binpoly::BinPoly;
use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::hopf::{aa_poly, aa_poly_of_sum, antipode, BasicCharacter, EdgeCharacter};
use crate::ring::{CoeffRing, MPoly, Var};
use crate::species::enumerate_compositions;
use crate::Limits;

/// Counts of edges going up, staying level and going down under a coloring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
struct EdgeProfile {
    ascents: u32,
    level: u32,
    descents: u32,
}

fn profile(g: &Digraph, color: &[usize]) -> EdgeProfile {
    let mut p = EdgeProfile::default();
    for &(u, v) in g.edges() {
        match color[u].cmp(&color[v]) {
            std::cmp::Ordering::Less => p.ascents += 1,
            std::cmp::Ordering::Equal => p.level += 1,
            std::cmp::Ordering::Greater => p.descents += 1,
        }
    }
    p
}

/// For every k, the multiset of edge profiles over surjective colorings onto [k].
fn surjective_profiles(g: &Digraph, limits: &Limits) -> Result<Vec<BTreeMap<EdgeProfile, u64>>> {
    limits.check_compositions(g.len())?;
    let n = g.len();
    let mut out = vec![BTreeMap::new(); n + 1];
    if n == 0 {
        out[0].insert(EdgeProfile::default(), 1);
        return Ok(out);
    }
    for (k, slot) in out.iter_mut().enumerate().skip(1) {
        for c in enumerate_compositions(g.vertices(), k) {
            let color = c.block_of(n);
            *slot.entry(profile(g, &color)).or_insert(0) += 1;
        }
    }
    Ok(out)
}

fn count_where(
    g: &Digraph,
    limits: &Limits,
    keep: impl Fn(&EdgeProfile) -> bool,
) -> Result<BinPoly<BigInt>> {
    let profiles = surjective_profiles(g, limits)?;
    Ok(BinPoly::new(
        profiles
            .iter()
            .map(|m| {
                m.iter()
                    .filter(|(p, _)| keep(p))
                    .map(|(_, c)| BigInt::from(*c))
                    .sum()
            })
            .collect(),
    ))
}

/// Colorings strictly increasing along every edge.
pub fn strict_chromatic(g: &Digraph, limits: &Limits) -> Result<BinPoly<BigInt>> {
    count_where(g, limits, |p| p.ascents as usize == g.edge_count())
}

/// Colorings weakly increasing along every edge.
pub fn weak_chromatic(g: &Digraph, limits: &Limits) -> Result<BinPoly<BigInt>> {
    count_where(g, limits, |p| p.descents == 0)
}

/// Three-variable coloring generating function: `y` per ascending edge, `z`
/// per descending edge.
pub fn b_polynomial(g: &Digraph, limits: &Limits) -> Result<BinPoly<MPoly>> {
    let profiles = surjective_profiles(g, limits)?;
    Ok(BinPoly::new(
        profiles
            .iter()
            .map(|m| {
                m.iter().fold(MPoly::zero(), |acc, (p, c)| {
                    acc.plus(&MPoly::monomial(*c, [0, p.ascents, p.descents]))
                })
            })
            .collect(),
    ))
}

/// Colorings with no descending edge, weighted `q` per level edge.
pub fn edge_invariant(g: &Digraph, limits: &Limits) -> Result<BinPoly<MPoly>> {
    let profiles = surjective_profiles(g, limits)?;
    Ok(BinPoly::new(
        profiles
            .iter()
            .map(|m| {
                m.iter()
                    .filter(|(p, _)| p.descents == 0)
                    .fold(MPoly::zero(), |acc, (p, c)| {
                        acc.plus(&MPoly::monomial(*c, [p.level, 0, 0]))
                    })
            })
            .collect(),
    ))
}

/// Strict count read off the B-polynomial: the coefficient of `y^{|E|}` in
/// `B(n, y, 1)`.
pub fn strict_from_b(b: &BinPoly<MPoly>, edge_count: usize) -> BinPoly<BigInt> {
    b.map(|c| {
        c.substitute(Var::Z, &MPoly::one())
            .coefficient_of_power(Var::Y, edge_count as u32)
            .as_constant()
            .expect("only y and z occur in a B-polynomial")
    })
}

/// `B(n, 1, 0)`.
pub fn weak_from_b(b: &BinPoly<MPoly>) -> BinPoly<BigInt> {
    b.map(|c| c.eval(&BigInt::zero(), &BigInt::one(), &BigInt::zero()))
}

/// `q^{|E|}·B(n, 1/q, 0)`.
pub fn edge_from_b(b: &BinPoly<MPoly>, edge_count: usize) -> BinPoly<MPoly> {
    b.map(|c| {
        c.substitute(Var::Z, &MPoly::zero())
            .terms()
            .fold(MPoly::zero(), |acc, (e, k)| {
                acc.plus(&MPoly::monomial(k.clone(), [edge_count as u32 - e[1], 0, 0]))
            })
    })
}

/// Visits every map `I → [n]` as a 0-based color vector.
pub(crate) fn for_each_map(len: usize, n: u64, mut f: impl FnMut(&[usize])) {
    if len == 0 {
        f(&[]);
        return;
    }
    if n == 0 {
        return;
    }
    let mut color = vec![0usize; len];
    loop {
        f(&color);
        let mut i = 0;
        loop {
            if i == len {
                return;
            }
            color[i] += 1;
            if color[i] as u64 == n {
                color[i] = 0;
                i += 1;
            } else {
                break;
            }
        }
    }
}

fn brute_count(
    g: &Digraph,
    n: u64,
    limits: &Limits,
    what: &'static str,
    keep: impl Fn(usize, usize) -> bool,
) -> Result<BigInt> {
    limits.check_work(what, n, g.len())?;
    let mut count: u64 = 0;
    for_each_map(g.len(), n, |color| {
        if g.edges().iter().all(|&(u, v)| keep(color[u], color[v])) {
            count += 1;
        }
    });
    Ok(BigInt::from(count))
}

/// Exhaustive count of `f: I → [n]` with `f(u) < f(v)` on every edge.
pub fn brute_strict(g: &Digraph, n: u64, limits: &Limits) -> Result<BigInt> {
    brute_count(g, n, limits, "strict coloring count", |a, b| a < b)
}

/// Exhaustive count of `f: I → [n]` with `f(u) ≤ f(v)` on every edge.
pub fn brute_weak(g: &Digraph, n: u64, limits: &Limits) -> Result<BigInt> {
    brute_count(g, n, limits, "weak coloring count", |a, b| a <= b)
}

/// Exhaustive `B_g(n, y, z)` over all `n^{|I|}` maps.
pub fn brute_b_polynomial(g: &Digraph, n: u64, limits: &Limits) -> Result<MPoly> {
    limits.check_work("B-polynomial count", n, g.len())?;
    let mut counts: BTreeMap<EdgeProfile, u64> = BTreeMap::new();
    for_each_map(g.len(), n, |color| {
        *counts.entry(profile(g, color)).or_insert(0) += 1;
    });
    Ok(counts.iter().fold(MPoly::zero(), |acc, (p, c)| {
        acc.plus(&MPoly::monomial(*c, [0, p.ascents, p.descents]))
    }))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReciprocityVerdict {
    /// The graph has a directed cycle, so the identity is not asserted.
    HypothesisViolated,
    Checked {
        n: u64,
        /// `(-1)^{|I|}·χ_g(-n)` from the basic character.
        character_side: BigInt,
        /// `(-1)^{|I|}·π^>_g(-n)` from the strict chromatic polynomial.
        strict_side: BigInt,
        /// `π^≥_g(n)` by exhaustive count.
        weak_side: BigInt,
        holds: bool,
    },
}

impl ReciprocityVerdict {
    pub fn holds(&self) -> bool {
        match self {
            ReciprocityVerdict::HypothesisViolated => true,
            ReciprocityVerdict::Checked { holds, .. } => *holds,
        }
    }
}

pub fn check_reciprocity(g: &Digraph, n: u64, limits: &Limits) -> Result<ReciprocityVerdict> {
    if !g.is_acyclic() {
        return Ok(ReciprocityVerdict::HypothesisViolated);
    }
    let sign = if g.len().is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
    let minus_n = -BigInt::from(n);
    let character_side = &sign * aa_poly(g, &BasicCharacter, limits)?.eval(&minus_n);
    let strict_side = &sign * strict_chromatic(g, limits)?.eval(&minus_n);
    let weak_side = brute_weak(g, n, limits)?;
    let holds = character_side == weak_side && strict_side == weak_side;
    Ok(ReciprocityVerdict::Checked {
        n,
        character_side,
        strict_side,
        weak_side,
        holds,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeReciprocityVerdict {
    pub n: u64,
    /// `ψ_g(-n)`.
    pub lhs: MPoly,
    /// The edge invariant of the antipode of `g`, evaluated at `n`.
    pub rhs: MPoly,
    pub holds: bool,
}

pub fn check_edge_reciprocity(g: &Digraph, n: u64, limits: &Limits) -> Result<EdgeReciprocityVerdict> {
    let lhs = edge_invariant(g, limits)?.eval(&-BigInt::from(n));
    let s = antipode(g, limits)?;
    let rhs = aa_poly_of_sum(&s, &EdgeCharacter, limits)?.eval(&BigInt::from(n));
    Ok(EdgeReciprocityVerdict {
        n,
        holds: lhs == rhs,
        lhs,
        rhs,
    })
}

/// Fails with [`Error::NotAcyclic`] on cyclic graphs.
pub fn require_acyclic(g: &Digraph) -> Result<()> {
    if g.is_acyclic() {
        Ok(())
    } else {
        Err(Error::NotAcyclic)
    }
}
