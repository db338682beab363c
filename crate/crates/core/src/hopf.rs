//! Formal sums of graphs, the Takeuchi antipode, characters, and the
//! polynomial invariant a character induces.
//!
//! The invariant of a graph `g` on `I` under a character `ζ` is
//! `Σ_k c_k·C(n,k)` where `c_k` sums `ζ(g|T_1)⋯ζ(g|T_k)` over the
//! compositions `(T_1,…,T_k)` of `I` whose prefix unions are all lower halves.
//! Those compositions are exactly the strict chains of lower halves from `∅`
//! to `I`, which is how both the antipode and the invariant enumerate them.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;
use rayon::prelude::*;

use crate::binpoly::BinPoly;
use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::ring::{CoeffRing, MPoly, Var};
use crate::species::{LabelSet, Subset};
use crate::Limits;

/// Integer linear combination of graphs on one label set.
#[derive(Clone, PartialEq, Eq)]
pub struct FormalSum {
    vertex_set: LabelSet,
    terms: BTreeMap<Digraph, BigInt>,
}

impl FormalSum {
    pub fn zero(vertex_set: LabelSet) -> Self {
        FormalSum {
            vertex_set,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_graph(g: &Digraph) -> Self {
        let mut s = FormalSum::zero(g.vertices().clone());
        s.terms.insert(g.clone(), BigInt::one());
        s
    }

    pub fn vertex_set(&self) -> &LabelSet {
        &self.vertex_set
    }

    pub fn add_term(&mut self, g: Digraph, coeff: BigInt) -> Result<()> {
        if g.vertices() != &self.vertex_set {
            return Err(Error::Precondition(format!(
                "graph on {} added to a sum over {}",
                g.vertices(),
                self.vertex_set
            )));
        }
        self.add_unchecked(g, coeff);
        Ok(())
    }

    fn add_unchecked(&mut self, g: Digraph, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(g).or_default();
        *entry += coeff;
        if entry.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    /// Terms in canonical graph order.
    pub fn terms(&self) -> impl Iterator<Item = (&Digraph, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, g: &Digraph) -> BigInt {
        self.terms.get(g).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn plus(&self, other: &FormalSum) -> Result<FormalSum> {
        let mut out = self.clone();
        for (g, c) in &other.terms {
            out.add_term(g.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn scale(&self, k: &BigInt) -> FormalSum {
        let mut out = FormalSum::zero(self.vertex_set.clone());
        for (g, c) in &self.terms {
            out.add_unchecked(g.clone(), c * k);
        }
        out
    }
}

impl fmt::Display for FormalSum {
    /// One term per line: `-1·[(0,1),(0,2),(1,2)]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return writeln!(f, "0");
        }
        for (g, c) in &self.terms {
            let sign = if c.is_negative() { '-' } else { '+' };
            writeln!(f, "{sign}{}·{}", c.abs(), g.edge_string())?;
        }
        Ok(())
    }
}

impl fmt::Debug for FormalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FormalSum over {}:\n{self}", self.vertex_set)
    }
}

/// A multiplicative, relabeling-invariant function of graphs with
/// `ζ(empty graph) = 1`.
pub trait Character: Sync {
    type Value: CoeffRing;

    fn name(&self) -> &str;

    fn eval(&self, g: &Digraph) -> Self::Value;
}

/// 1 on edgeless graphs, 0 otherwise.
#[derive(Debug, Clone, Copy, Default)]
pub struct BasicCharacter;

impl Character for BasicCharacter {
    type Value = BigInt;

    fn name(&self) -> &str {
        "basic"
    }

    fn eval(&self, g: &Digraph) -> BigInt {
        char_basic(g)
    }
}

/// `q^{|E|}`.
#[derive(Debug, Clone, Copy, Default)]
pub struct EdgeCharacter;

impl Character for EdgeCharacter {
    type Value = MPoly;

    fn name(&self) -> &str {
        "edge"
    }

    fn eval(&self, g: &Digraph) -> MPoly {
        char_edge(g)
    }
}

/// Wraps a user-supplied function. Multiplicativity is the caller's promise.
pub struct FnCharacter<F> {
    name: String,
    f: F,
}

impl<F> FnCharacter<F> {
    pub fn new(name: impl Into<String>, f: F) -> Self {
        FnCharacter {
            name: name.into(),
            f,
        }
    }
}

impl<R: CoeffRing, F: Fn(&Digraph) -> R + Sync> Character for FnCharacter<F> {
    type Value = R;

    fn name(&self) -> &str {
        &self.name
    }

    fn eval(&self, g: &Digraph) -> R {
        (self.f)(g)
    }
}

pub fn char_basic(g: &Digraph) -> BigInt {
    if g.edge_count() == 0 {
        BigInt::one()
    } else {
        BigInt::zero()
    }
}

pub fn char_edge(g: &Digraph) -> MPoly {
    MPoly::var_pow(Var::Q, g.edge_count() as u32)
}

/// Walks every strict chain of lower halves `∅ ⊂ P_1 ⊂ … ⊂ I`, handing the
/// block index of each vertex and the chain length to `leaf`.
struct ChainWalker<'a> {
    preds: &'a [Subset],
    full: Subset,
}

impl ChainWalker<'_> {
    /// Blocks that can follow `prefix`: nonempty `B ⊆ I∖prefix` such that
    /// `prefix ∪ B` is again a lower half.
    fn extensions(&self, prefix: Subset) -> impl Iterator<Item = Subset> + '_ {
        let closed = move |b: Subset| {
            let p = prefix.union(b);
            b.indices().all(|v| self.preds[v].is_subset_of(p))
        };
        self.full.difference(prefix).nonempty_submasks().filter(move |b| closed(*b))
    }

    fn walk(&self, prefix: Subset, depth: usize, block: &mut [usize], leaf: &mut impl FnMut(&[usize], usize)) {
        let candidates: Vec<Subset> = self.extensions(prefix).collect();
        for b in candidates {
            for v in b.indices() {
                block[v] = depth;
            }
            let next = prefix.union(b);
            if next == self.full {
                leaf(block, depth + 1);
            } else {
                self.walk(next, depth + 1, block, leaf);
            }
        }
    }
}

/// Takeuchi's alternating sum `Σ_c (-1)^{len c} μ_c Δ_c(g)` over the
/// compositions of the vertex set, with equal graphs merged.
pub fn antipode(g: &Digraph, limits: &Limits) -> Result<FormalSum> {
    limits.check_compositions(g.len())?;
    if g.is_empty() {
        return Ok(FormalSum::from_graph(g));
    }
    let preds = g.predecessor_masks();
    let walker = ChainWalker {
        preds: &preds,
        full: g.vertices().full(),
    };
    let first_blocks: Vec<Subset> = walker.extensions(Subset::EMPTY).collect();

    let run = |first: Subset| -> HashMap<Vec<usize>, i128> {
        let mut acc: HashMap<Vec<usize>, i128> = HashMap::new();
        let mut block = vec![0usize; g.len()];
        let mut record = |block: &[usize], len: usize| {
            let kept: Vec<usize> = g
                .edges()
                .iter()
                .enumerate()
                .filter(|(_, &(u, v))| block[u] == block[v])
                .map(|(i, _)| i)
                .collect();
            let sign = if len.is_multiple_of(2) { 1 } else { -1 };
            *acc.entry(kept).or_default() += sign;
        };
        for v in first.indices() {
            block[v] = 0;
        }
        if first == walker.full {
            record(&block, 1);
        } else {
            walker.walk(first, 1, &mut block, &mut record);
        }
        acc
    };

    let partials: Vec<HashMap<Vec<usize>, i128>> = if limits.parallel {
        first_blocks.par_iter().map(|b| run(*b)).collect()
    } else {
        first_blocks.iter().map(|b| run(*b)).collect()
    };

    let mut merged: HashMap<Vec<usize>, i128> = HashMap::new();
    for part in partials {
        for (k, c) in part {
            *merged.entry(k).or_default() += c;
        }
    }
    let mut out = FormalSum::zero(g.vertices().clone());
    for (kept, c) in merged {
        out.add_unchecked(g.with_edge_indices(&kept), BigInt::from(c));
    }
    Ok(out)
}

/// Linear extension of [`antipode`].
pub fn antipode_of_sum(s: &FormalSum, limits: &Limits) -> Result<FormalSum> {
    let mut out = FormalSum::zero(s.vertex_set().clone());
    for (g, c) in s.terms() {
        out = out.plus(&antipode(g, limits)?.scale(c))?;
    }
    Ok(out)
}

/// The polynomial invariant of `g` under `zeta`, in the binomial basis.
///
/// `c_k` accumulates over chains of lower halves by prefix: the running total
/// at a lower half `P` after `j` blocks is the sum over chains ending at `P` of
/// the product of `ζ` on their blocks.
pub fn aa_poly<C: Character>(g: &Digraph, zeta: &C, limits: &Limits) -> Result<BinPoly<C::Value>> {
    limits.check_compositions(g.len())?;
    let n = g.len();
    if n == 0 {
        return Ok(BinPoly::new(vec![C::Value::one()]));
    }
    let preds = g.predecessor_masks();
    let walker = ChainWalker {
        preds: &preds,
        full: g.vertices().full(),
    };
    let mut block_value: Vec<Option<C::Value>> = vec![None; 1 << n];
    let mut coeffs = vec![C::Value::zero(); n + 1];
    let mut level: BTreeMap<Subset, C::Value> = BTreeMap::new();
    level.insert(Subset::EMPTY, C::Value::one());
    for coeff in coeffs.iter_mut().skip(1) {
        let mut next: BTreeMap<Subset, C::Value> = BTreeMap::new();
        for (prefix, val) in &level {
            for b in walker.extensions(*prefix) {
                let z = block_value[b.0 as usize]
                    .get_or_insert_with(|| zeta.eval(&g.restrict_unchecked(b)))
                    .clone();
                if z.is_zero() {
                    continue;
                }
                let term = val.times(&z);
                let slot = next.entry(prefix.union(b)).or_insert_with(C::Value::zero);
                *slot = slot.plus(&term);
            }
        }
        if let Some(top) = next.remove(&walker.full) {
            *coeff = top;
        }
        next.retain(|_, v| !v.is_zero());
        level = next;
        if level.is_empty() {
            break;
        }
    }
    Ok(BinPoly::new(coeffs))
}

/// `Σ coeff·ζ(graph)`.
pub fn char_of_sum<C: Character>(s: &FormalSum, zeta: &C) -> C::Value {
    s.terms()
        .fold(C::Value::zero(), |acc, (g, c)| acc.plus(&zeta.eval(g).scale(c)))
}

/// Linear extension of [`aa_poly`].
pub fn aa_poly_of_sum<C: Character>(
    s: &FormalSum,
    zeta: &C,
    limits: &Limits,
) -> Result<BinPoly<C::Value>> {
    let mut out = BinPoly::zero();
    for (g, c) in s.terms() {
        let p = aa_poly(g, zeta, limits)?;
        out = out.plus(&p.scale(&C::Value::from_integer(c)));
    }
    Ok(out)
}

pub fn eval_binpoly<R: CoeffRing>(p: &BinPoly<R>, n: &BigInt) -> R {
    p.eval(n)
}
