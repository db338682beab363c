//! Seeded property suites over the whole library.
//!
//! Each suite returns a [`SuiteReport`] listing how many identities were
//! checked and a description of every failure.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::digraph::Digraph;
use crate::error::Result;
use crate::hopf::{aa_poly, aa_poly_of_sum, antipode, BasicCharacter, EdgeCharacter};
use crate::invariants::{
    brute_strict, brute_weak, check_edge_reciprocity, check_reciprocity, strict_chromatic,
    ReciprocityVerdict,
};
use crate::polytope::{ascent_lattice_count, check_theorem1, generic_count, vertex_sum_count};
use crate::species::{Label, LabelSet, Subset};
use crate::subfun::{bf_product, check_low_morphism, is_submodular, low};
use crate::Limits;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    HopfAxioms,
    Morphism,
    Theorem1,
    Reciprocity,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::HopfAxioms, Suite::Morphism, Suite::Theorem1, Suite::Reciprocity];

    pub fn name(self) -> &'static str {
        match self {
            Suite::HopfAxioms => "hopf-axioms",
            Suite::Morphism => "morphism",
            Suite::Theorem1 => "theorem1",
            Suite::Reciprocity => "reciprocity",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub checks: usize,
    pub failures: Vec<String>,
    /// Checks not run because a hypothesis does not hold.
    pub skipped: Vec<String>,
}

impl SuiteReport {
    fn new(suite: &'static str) -> Self {
        SuiteReport {
            suite,
            checks: 0,
            failures: Vec::new(),
            skipped: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn absorb(&mut self, other: SuiteReport) {
        self.checks += other.checks;
        self.failures.extend(other.failures);
        self.skipped.extend(other.skipped);
    }
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Each ordered pair of distinct vertices becomes an edge with probability `p`.
pub fn random_digraph(rng: &mut impl Rng, labels: LabelSet, p: f64) -> Digraph {
    let n = labels.len();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Digraph::new(labels, edges).expect("random edges are simple")
}

/// Random acyclic graph: edges only go forward in a random vertex order.
pub fn random_dag(rng: &mut impl Rng, labels: LabelSet, p: f64) -> Digraph {
    let n = labels.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                edges.push((order[i], order[j]));
            }
        }
    }
    Digraph::new(labels, edges).expect("random edges are simple")
}

/// Every simple digraph on labels `0..n`.
pub fn all_digraphs(n: usize) -> impl Iterator<Item = Digraph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (0..n).map(move |v| (u, v)))
        .filter(|(u, v)| u != v)
        .collect();
    let labels = LabelSet::range(n);
    (0u64..1 << pairs.len()).map(move |bits| {
        let edges = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| bits >> i & 1 == 1)
            .map(|(_, e)| *e)
            .collect();
        Digraph::new(labels.clone(), edges).expect("distinct pairs without loops")
    })
}

/// Labels `prefix0, prefix1, …`.
pub fn prefixed_labels(prefix: &str, n: usize) -> LabelSet {
    LabelSet::from_strs((0..n).map(|i| format!("{prefix}{i}"))).expect("labels are valid")
}

fn random_subset(rng: &mut impl Rng, within: Subset) -> Subset {
    Subset::from_indices(within.indices().filter(|_| rng.gen_bool(0.5)))
}

/// `Δ_{S,T∪U}` then `Δ_{T,U}` on the right factor.
fn split_right_first(g: &Digraph, s: Subset, t: Subset) -> Result<Option<[Digraph; 3]>> {
    let Some((gs, rest)) = g.coproduct(s)? else {
        return Ok(None);
    };
    let rest_full = g.vertices().full().difference(s);
    let Some((gt, gu)) = rest.coproduct(t.compress(rest_full))? else {
        return Ok(None);
    };
    Ok(Some([gs, gt, gu]))
}

/// `Δ_{S∪T,U}` then `Δ_{S,T}` on the left factor.
fn split_left_first(g: &Digraph, s: Subset, t: Subset) -> Result<Option<[Digraph; 3]>> {
    let st = s.union(t);
    let Some((left, gu)) = g.coproduct(st)? else {
        return Ok(None);
    };
    let Some((gs, gt)) = left.coproduct(s.compress(st))? else {
        return Ok(None);
    };
    Ok(Some([gs, gt, gu]))
}

fn coassociativity(g: &Digraph, s: Subset, t: Subset, report: &mut SuiteReport) -> Result<()> {
    let a = split_right_first(g, s, t)?;
    let b = split_left_first(g, s, t)?;
    let vs = g.vertices();
    report.check(a == b, || {
        format!("coassociativity fails for {g} at S={} T={}", vs.format_subset(s), vs.format_subset(t))
    });
    Ok(())
}

/// `Δ_{S'}(g·h) = Δ_{S'∩I}(g) · Δ_{S'∩J}(h)`, including agreement on zero.
fn compatibility(g: &Digraph, h: &Digraph, s: Subset, report: &mut SuiteReport) -> Result<()> {
    let gh = g.product(h)?;
    let lhs = gh.coproduct(s)?;
    let in_g = mask_of_labels(&gh, g.vertices());
    let in_h = mask_of_labels(&gh, h.vertices());
    let rhs = match (
        g.coproduct(s.intersection(in_g).compress(in_g))?,
        h.coproduct(s.intersection(in_h).compress(in_h))?,
    ) {
        (Some((g1, g2)), Some((h1, h2))) => Some((g1.product(&h1)?, g2.product(&h2)?)),
        _ => None,
    };
    report.check(lhs == rhs, || {
        format!("compatibility fails for {g} · {h} at {}", gh.vertices().format_subset(s))
    });
    Ok(())
}

fn mask_of_labels(g: &Digraph, part: &LabelSet) -> Subset {
    Subset::from_indices(
        part.labels()
            .iter()
            .map(|l| g.vertices().position(l).expect("label present")),
    )
}

fn random_bijection(rng: &mut impl Rng, labels: &LabelSet, prefix: &str) -> BTreeMap<Label, Label> {
    let mut targets: Vec<usize> = (0..labels.len()).collect();
    targets.shuffle(rng);
    labels
        .labels()
        .iter()
        .zip(targets)
        .map(|(l, t)| (l.clone(), Label::new(format!("{prefix}{t}")).expect("valid label")))
        .collect()
}

fn image_mask(g: &Digraph, sigma: &BTreeMap<Label, Label>, target: &LabelSet, s: Subset) -> Subset {
    Subset::from_indices(
        s.indices()
            .map(|i| target.position(&sigma[g.vertices().get(i)]).expect("image present")),
    )
}

/// Relabeling commutes with restriction, coproduct and product.
fn naturality(
    g: &Digraph,
    h: &Digraph,
    s: Subset,
    rng: &mut impl Rng,
    report: &mut SuiteReport,
) -> Result<()> {
    let sigma = random_bijection(rng, g.vertices(), "s");
    let tau = random_bijection(rng, h.vertices(), "t");
    let g2 = g.relabel(&sigma)?;
    let s2 = image_mask(g, &sigma, g2.vertices(), s);
    report.check(
        g.restrict(s)?.relabel(&sigma)? == g2.restrict(s2)?,
        || format!("relabel/restrict naturality fails for {g}"),
    );
    let lhs = g.coproduct(s)?.map(|(a, b)| (a.relabel(&sigma), b.relabel(&sigma)));
    let lhs = match lhs {
        Some((a, b)) => Some((a?, b?)),
        None => None,
    };
    report.check(lhs == g2.coproduct(s2)?, || {
        format!("relabel/coproduct naturality fails for {g}")
    });
    let mut both = sigma.clone();
    both.extend(tau.clone());
    report.check(
        g.product(h)?.relabel(&both)? == g2.product(&h.relabel(&tau)?)?,
        || format!("relabel/product naturality fails for {g} · {h}"),
    );
    Ok(())
}

fn unitality(g: &Digraph, report: &mut SuiteReport) -> Result<()> {
    let one = Digraph::empty();
    report.check(g.product(&one)? == *g && one.product(g)? == *g, || {
        format!("product unit fails for {g}")
    });
    report.check(
        g.coproduct(Subset::EMPTY)? == Some((one.clone(), g.clone()))
            && g.coproduct(g.vertices().full())? == Some((g.clone(), one.clone())),
        || format!("counit fails for {g}"),
    );
    Ok(())
}

/// One instance of the axiom suite: `g` and a partner `h` on disjoint labels.
/// With `exhaustive`, every decomposition of the vertex sets is tried;
/// otherwise one random split of each kind.
pub fn hopf_axioms_instance(
    g: &Digraph,
    h: &Digraph,
    rng: &mut impl Rng,
    exhaustive: bool,
) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(Suite::HopfAxioms.name());
    let full = g.vertices().full();
    unitality(g, &mut report)?;
    report.check(g.product(h)? == h.product(g)?, || format!("product not commutative for {g} · {h}"));
    let gh_full = g.product(h)?.vertices().full();
    if exhaustive {
        for s in 0..=full.0 {
            let s = Subset(s);
            let rest = full.difference(s);
            for t in std::iter::once(Subset::EMPTY).chain(rest.nonempty_submasks()) {
                coassociativity(g, s, t, &mut report)?;
            }
        }
        for s in 0..=gh_full.0 {
            compatibility(g, h, Subset(s), &mut report)?;
        }
        for s in 0..=full.0 {
            naturality(g, h, Subset(s), rng, &mut report)?;
        }
    } else {
        let s = random_subset(rng, full);
        let t = random_subset(rng, full.difference(s));
        coassociativity(g, s, t, &mut report)?;
        compatibility(g, h, random_subset(rng, gh_full), &mut report)?;
        naturality(g, h, random_subset(rng, full), rng, &mut report)?;
    }
    Ok(report)
}

/// `instances` random graph pairs with at most `max_vertices` vertices each.
pub fn hopf_axioms_random(instances: usize, max_vertices: usize, seed: u64) -> Result<SuiteReport> {
    let mut rng = rng_from_seed(seed);
    let mut report = SuiteReport::new(Suite::HopfAxioms.name());
    for _ in 0..instances {
        let n = rng.gen_range(0..=max_vertices);
        let m = rng.gen_range(0..=max_vertices.saturating_sub(n).min(3));
        let p = rng.gen_range(0.1..0.7);
        let g = random_digraph(&mut rng, prefixed_labels("a", n), p);
        let h = random_digraph(&mut rng, prefixed_labels("b", m), p);
        report.absorb(hopf_axioms_instance(&g, &h, &mut rng, false)?);
    }
    Ok(report)
}

/// `low` against coproduct at every split, and against product with `h`.
pub fn morphism_instance(g: &Digraph, h: &Digraph, limits: &Limits) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(Suite::Morphism.name());
    for s in 0..=g.vertices().full().0 {
        let v = check_low_morphism(g, Subset(s), limits)?;
        report.check(v.holds(), || {
            format!("low is not compatible at {} for {g}: {v:?}", g.vertices().format_subset(Subset(s)))
        });
    }
    let lhs = low(&g.product(h)?, limits)?;
    let rhs = bf_product(&low(g, limits)?, &low(h, limits)?, limits)?;
    report.check(lhs == rhs, || format!("low(g·h) != low(g)·low(h) for {g} · {h}"));
    report.check(is_submodular(&low(g, limits)?, limits)?, || format!("low({g}) not submodular"));
    Ok(report)
}

pub fn theorem1_instance(g: &Digraph, samples: usize, seed: u64, limits: &Limits) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(Suite::Theorem1.name());
    let t = check_theorem1(g, samples, seed, limits)?;
    report.checks += t.samples;
    for m in &t.mismatches {
        report.failures.push(format!(
            "{g}: x = {} ({:?}) base member {} but cone member {}",
            m.x, m.kind, m.base_member, m.cone_member
        ));
    }
    if t.certificates_verified != t.flow_calls {
        report.failures.push(format!(
            "{g}: {} of {} max-flow results lacked a matching min-cut certificate",
            t.flow_calls - t.certificates_verified,
            t.flow_calls
        ));
    }
    Ok(report)
}

/// Reciprocity identities for `g` with `n ≤ max_n`, plus the coloring
/// identities they rest on.
pub fn reciprocity_instance(g: &Digraph, max_n: u64, limits: &Limits) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(Suite::Reciprocity.name());
    let acyclic = g.is_acyclic();
    if !acyclic {
        report
            .skipped
            .push("hypothesis violated: graph not acyclic".to_string());
    }
    let chi = aa_poly(g, &BasicCharacter, limits)?;
    let strict = strict_chromatic(g, limits)?;
    report.check(chi == strict, || format!("{g}: χ = {chi} but π^> = {strict}"));
    let s = antipode(g, limits)?;
    let chi_s = aa_poly_of_sum(&s, &BasicCharacter, limits)?;
    let psi = aa_poly(g, &EdgeCharacter, limits)?;
    let psi_s = aa_poly_of_sum(&s, &EdgeCharacter, limits)?;
    for n in 0..=max_n {
        let nb = BigInt::from(n);
        let minus = -nb.clone();
        report.check(chi.eval(&minus) == chi_s.eval(&nb), || {
            format!("{g}: χ(-{n}) != χ_S(g)({n})")
        });
        report.check(psi.eval(&minus) == psi_s.eval(&nb), || {
            format!("{g}: ψ(-{n}) != ψ_S(g)({n})")
        });
        report.check(check_edge_reciprocity(g, n, limits)?.holds, || {
            format!("{g}: edge reciprocity fails at n={n}")
        });
        let bs = brute_strict(g, n, limits)?;
        report.check(strict.eval(&nb) == bs, || format!("{g}: π^>({n}) != brute count"));
        report.check(generic_count(g, n, limits)? == bs, || format!("{g}: generic count at {n}"));
        report.check(ascent_lattice_count(g, n, true, limits)? == bs, || {
            format!("{g}: interior lattice count at {n}")
        });
        let bw = brute_weak(g, n, limits)?;
        report.check(ascent_lattice_count(g, n, false, limits)? == bw, || {
            format!("{g}: closed lattice count at {n}")
        });
        if acyclic && n >= 1 {
            let v = check_reciprocity(g, n, limits)?;
            report.check(v.holds(), || format!("{g}: reciprocity fails: {v:?}"));
            if let ReciprocityVerdict::Checked { weak_side, .. } = &v {
                report.check(&vertex_sum_count(g, n, limits)? == weak_side, || {
                    format!("{g}: vertex sum count at {n}")
                });
            }
        }
    }
    Ok(report)
}

/// The suites the CLI runs against a single graph.
pub fn run_suite(suite: Suite, g: &Digraph, seed: u64, samples: usize, limits: &Limits) -> Result<SuiteReport> {
    let mut rng = rng_from_seed(seed);
    match suite {
        Suite::HopfAxioms => {
            let m = rng.gen_range(0..=3);
            let h = random_digraph(&mut rng, fresh_labels(g, m), 0.4);
            let exhaustive = g.len() + h.len() <= 9;
            let mut report = hopf_axioms_instance(g, &h, &mut rng, exhaustive)?;
            if !exhaustive {
                for _ in 0..samples {
                    report.absorb(hopf_axioms_instance(g, &h, &mut rng, false)?);
                }
            }
            Ok(report)
        }
        Suite::Morphism => {
            let m = rng.gen_range(1..=3);
            let h = random_digraph(&mut rng, fresh_labels(g, m), 0.4);
            morphism_instance(g, &h, limits)
        }
        Suite::Theorem1 => theorem1_instance(g, samples, seed, limits),
        Suite::Reciprocity => reciprocity_instance(g, 5, limits),
    }
}

/// Labels not used by `g`.
fn fresh_labels(g: &Digraph, m: usize) -> LabelSet {
    let mut prefix = String::from("h");
    while g.vertices().labels().iter().any(|l| l.as_str().starts_with(&prefix)) {
        prefix.push('h');
    }
    prefixed_labels(&prefix, m)
}
