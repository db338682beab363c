//! Extended Boolean functions `2^I → ℚ ∪ {+∞}` and their Hopf operations.
//!
//! The function `low(g)` of a directed graph is 0 on lower halves and `+∞`
//! elsewhere; [`check_low_morphism`] compares its restriction, contraction
//! and product against the graph-side operations.

use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::species::{LabelSet, Subset};
use crate::Limits;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExtValue {
    Finite(BigRational),
    Infinite,
}

impl ExtValue {
    pub fn zero() -> Self {
        ExtValue::Finite(BigRational::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtValue::Finite(_))
    }

    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            ExtValue::Finite(v) => Some(v),
            ExtValue::Infinite => None,
        }
    }

    /// `+∞` absorbs.
    pub fn add(&self, other: &ExtValue) -> ExtValue {
        match (self, other) {
            (ExtValue::Finite(a), ExtValue::Finite(b)) => ExtValue::Finite(a + b),
            _ => ExtValue::Infinite,
        }
    }

    /// `self ≤ other` in the extended order.
    pub fn le(&self, other: &ExtValue) -> bool {
        match (self, other) {
            (_, ExtValue::Infinite) => true,
            (ExtValue::Infinite, ExtValue::Finite(_)) => false,
            (ExtValue::Finite(a), ExtValue::Finite(b)) => a <= b,
        }
    }
}

impl From<i64> for ExtValue {
    fn from(v: i64) -> Self {
        ExtValue::Finite(BigRational::from_integer(v.into()))
    }
}

impl fmt::Display for ExtValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtValue::Finite(v) => write!(f, "{v}"),
            ExtValue::Infinite => f.write_str("inf"),
        }
    }
}

/// Dense table indexed by subset bitmask over `ground`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtBool {
    ground: LabelSet,
    values: Vec<ExtValue>,
}

impl ExtBool {
    pub fn new(ground: LabelSet, values: Vec<ExtValue>) -> Result<Self> {
        let expected = 1usize
            .checked_shl(ground.len() as u32)
            .ok_or_else(|| Error::InvalidFunction("ground set too large".into()))?;
        if values.len() != expected {
            return Err(Error::InvalidFunction(format!(
                "expected {expected} values, got {}",
                values.len()
            )));
        }
        if values[0] != ExtValue::zero() {
            return Err(Error::InvalidFunction("value on the empty set must be 0".into()));
        }
        if !values[expected - 1].is_finite() {
            return Err(Error::InvalidFunction(
                "value on the ground set must be finite".into(),
            ));
        }
        Ok(ExtBool { ground, values })
    }

    pub fn from_fn(
        ground: LabelSet,
        limits: &Limits,
        f: impl Fn(Subset) -> ExtValue,
    ) -> Result<Self> {
        limits.check_subsets(ground.len())?;
        let values = (0..1u64 << ground.len()).map(|m| f(Subset(m))).collect();
        ExtBool::new(ground, values)
    }

    pub fn zero(ground: LabelSet, limits: &Limits) -> Result<Self> {
        ExtBool::from_fn(ground, limits, |_| ExtValue::zero())
    }

    pub fn ground(&self) -> &LabelSet {
        &self.ground
    }

    pub fn value(&self, s: Subset) -> &ExtValue {
        &self.values[s.0 as usize]
    }

    pub fn values(&self) -> &[ExtValue] {
        &self.values
    }
}

impl fmt::Display for ExtBool {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (m, v) in self.values.iter().enumerate() {
            writeln!(f, "{} = {v}", self.ground.format_subset(Subset(m as u64)))?;
        }
        Ok(())
    }
}

/// 0 on lower halves of `g`, `+∞` elsewhere.
pub fn low(g: &Digraph, limits: &Limits) -> Result<ExtBool> {
    let preds = g.predecessor_masks();
    ExtBool::from_fn(g.vertices().clone(), limits, |s| {
        if s.indices().all(|v| preds[v].is_subset_of(s)) {
            ExtValue::zero()
        } else {
            ExtValue::Infinite
        }
    })
}

/// `(u·v)(E) = u(E∩S) + v(E∩T)` on the disjoint union of the grounds.
pub fn bf_product(u: &ExtBool, v: &ExtBool, limits: &Limits) -> Result<ExtBool> {
    if let Some(l) = u.ground.first_shared(&v.ground) {
        return Err(Error::NotDisjoint(l.to_string()));
    }
    let ground = LabelSet::new(
        u.ground
            .labels()
            .iter()
            .chain(v.ground.labels())
            .cloned(),
    )?;
    let side_mask = |part: &LabelSet| {
        Subset::from_indices(
            part.labels()
                .iter()
                .map(|l| ground.position(l).expect("label in union")),
        )
    };
    let (s, t) = (side_mask(&u.ground), side_mask(&v.ground));
    ExtBool::from_fn(ground.clone(), limits, |e| {
        u.value(e.intersection(s).compress(s))
            .add(v.value(e.intersection(t).compress(t)))
    })
}

/// `z|_S(E) = z(E)` for `E ⊆ S`.
pub fn bf_restrict(z: &ExtBool, s: Subset) -> Result<ExtBool> {
    z.ground.check_subset(s)?;
    let values = (0..1u64 << s.len())
        .map(|m| z.value(Subset(m).expand(s)).clone())
        .collect();
    ExtBool::new(z.ground.restrict(s), values)
}

/// `z/_S(E) = z(E∪S) − z(S)` on the complement of `S`; `None` when
/// `z(S) = +∞`, the zero of the coproduct.
pub fn bf_contract(z: &ExtBool, s: Subset) -> Result<Option<ExtBool>> {
    z.ground.check_subset(s)?;
    let Some(base) = z.value(s).finite().cloned() else {
        return Ok(None);
    };
    let t = z.ground.full().difference(s);
    let values = (0..1u64 << t.len())
        .map(|m| match z.value(Subset(m).expand(t).union(s)) {
            ExtValue::Finite(v) => ExtValue::Finite(v - &base),
            ExtValue::Infinite => ExtValue::Infinite,
        })
        .collect();
    ExtBool::new(z.ground.restrict(t), values).map(Some)
}

/// `z(A∪B) + z(A∩B) ≤ z(A) + z(B)` whenever `z(A)` and `z(B)` are finite.
pub fn is_submodular(z: &ExtBool, limits: &Limits) -> Result<bool> {
    Ok(submodularity_violation(z, limits)?.is_none())
}

/// First violating pair `(A, B)`, if any.
pub fn submodularity_violation(z: &ExtBool, limits: &Limits) -> Result<Option<(Subset, Subset)>> {
    let n = z.ground.len();
    limits.check_subsets(n)?;
    let finite: Vec<Subset> = (0..1u64 << n)
        .map(Subset)
        .filter(|s| z.value(*s).is_finite())
        .collect();
    for (i, &a) in finite.iter().enumerate() {
        for &b in &finite[i + 1..] {
            if a.is_subset_of(b) || b.is_subset_of(a) {
                continue;
            }
            let lhs = z.value(a.union(b)).add(z.value(a.intersection(b)));
            let rhs = z.value(a).add(z.value(b));
            if !lhs.le(&rhs) {
                return Ok(Some((a, b)));
            }
        }
    }
    Ok(None)
}

/// Outcome of comparing `low` against the graph-side Hopf operations at one split.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowMorphismVerdict {
    pub split: Subset,
    pub lower_half: bool,
    /// `low(g)|_S == low(g|_S)`; `None` when `S` is not a lower half.
    pub restriction: Option<bool>,
    /// Contraction and coproduct agree, including both being zero.
    pub contraction: bool,
    /// `low(g|_S · g|_T) == low(g|_S) · low(g|_T)`.
    pub product: bool,
}

impl LowMorphismVerdict {
    pub fn holds(&self) -> bool {
        self.restriction.unwrap_or(true) && self.contraction && self.product
    }
}

pub fn check_low_morphism(g: &Digraph, s: Subset, limits: &Limits) -> Result<LowMorphismVerdict> {
    let z = low(g, limits)?;
    let t = g.vertices().full().difference(s);
    let coproduct = g.coproduct(s)?;
    let contracted = bf_contract(&z, s)?;
    let (restriction, contraction) = match (&coproduct, &contracted) {
        (Some((gs, gt)), Some(zc)) => (
            Some(bf_restrict(&z, s)? == low(gs, limits)?),
            *zc == low(gt, limits)?,
        ),
        (None, None) => (None, true),
        _ => (None, false),
    };
    let gs = g.restrict(s)?;
    let gt = g.restrict(t)?;
    let product =
        low(&gs.product(&gt)?, limits)? == bf_product(&low(&gs, limits)?, &low(&gt, limits)?, limits)?;
    Ok(LowMorphismVerdict {
        split: s,
        lower_half: coproduct.is_some(),
        restriction,
        contraction,
        product,
    })
}
