//! Base polytopes of extended submodular functions and the cone of a graph.
//!
//! The cone of `g` is generated by `e_v − e_u` for every edge `(u,v)`. It
//! coincides with the base polytope of `low(g)`; [`check_theorem1`] tests
//! that equality sample by sample, deciding cone membership with a max-flow
//! whose optimality is audited through a min-cut certificate.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::flow::{audit, max_flow, Capacity, CutCertificate, FlowNetwork};
use crate::invariants::for_each_map;
use crate::species::{LabelSet, Subset};
use crate::subfun::{low, ExtBool, ExtValue};
use crate::Limits;

/// A rational vector indexed by a label set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalVec {
    labels: LabelSet,
    coords: Vec<BigRational>,
}

impl RationalVec {
    pub fn new(labels: LabelSet, coords: Vec<BigRational>) -> Result<Self> {
        if coords.len() != labels.len() {
            return Err(Error::Precondition(format!(
                "vector has {} coordinates, vertex set has {}",
                coords.len(),
                labels.len()
            )));
        }
        Ok(RationalVec { labels, coords })
    }

    pub fn zero(labels: LabelSet) -> Self {
        let coords = vec![BigRational::zero(); labels.len()];
        RationalVec { labels, coords }
    }

    pub fn from_ints(labels: LabelSet, coords: &[i64]) -> Result<Self> {
        RationalVec::new(
            labels,
            coords.iter().map(|&c| BigRational::from_integer(c.into())).collect(),
        )
    }

    /// Comma-separated rationals such as `-2, 1, 1` or `1/3,-1/3`, in label order.
    pub fn parse(labels: LabelSet, text: &str) -> Result<Self> {
        let mut coords = Vec::new();
        if text.trim().is_empty() {
            return RationalVec::new(labels, coords);
        }
        let mut column = 1;
        for part in text.split(',') {
            let token = part.trim().replace('−', "-");
            let value = parse_rational(&token).ok_or_else(|| Error::Parse {
                line: 1,
                column: column + part.chars().count() - part.trim_start().chars().count(),
                message: format!("not a rational number: {:?}", part.trim()),
            })?;
            coords.push(value);
            column += part.chars().count() + 1;
        }
        RationalVec::new(labels, coords)
    }

    pub fn labels(&self) -> &LabelSet {
        &self.labels
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    /// `x(A) = Σ_{i∈A} x_i`.
    pub fn sum_over(&self, s: Subset) -> BigRational {
        s.indices().map(|i| &self.coords[i]).sum()
    }

    pub fn total(&self) -> BigRational {
        self.coords.iter().sum()
    }

    pub fn add_scaled(&mut self, other: &RationalVec, k: &BigRational) {
        for (a, b) in self.coords.iter_mut().zip(&other.coords) {
            *a += b * k;
        }
    }
}

impl fmt::Display for RationalVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            (!d.is_zero()).then(|| BigRational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

/// `x(I) = z(I)` and `x(A) ≤ z(A)` for every `A` with `z(A)` finite.
pub fn base_member(z: &ExtBool, x: &RationalVec, limits: &Limits) -> Result<bool> {
    if z.ground() != x.labels() {
        return Err(Error::Precondition("vector and function have different ground sets".into()));
    }
    let n = z.ground().len();
    limits.check_subsets(n)?;
    let full = z.ground().full();
    let total = z.value(full).finite().expect("z(I) is finite by construction");
    if &x.total() != total {
        return Ok(false);
    }
    Ok((0..1u64 << n).map(Subset).all(|a| match z.value(a) {
        ExtValue::Finite(bound) => &x.sum_over(a) <= bound,
        ExtValue::Infinite => true,
    }))
}

/// `e_v − e_u` for every edge `(u, v)`, in edge order.
pub fn cone_generators(g: &Digraph) -> Vec<RationalVec> {
    g.edges()
        .iter()
        .map(|&(u, v)| {
            let mut x = RationalVec::zero(g.vertices().clone());
            x.coords[v] = BigRational::from_integer(1.into());
            x.coords[u] = BigRational::from_integer((-1).into());
            x
        })
        .collect()
}

/// Every generator `e_v − e_u` has `1_S·(e_v − e_u) ≤ 0`.
pub fn bounded_in_direction(g: &Digraph, s: Subset) -> bool {
    g.edges().iter().all(|&(u, v)| {
        let dot = i32::from(s.contains(v)) - i32::from(s.contains(u));
        dot <= 0
    })
}

/// Node positions in a network built by [`build_flow_network`]: vertex `i`
/// of the graph is node `i`, then the source `α` and the sink `ω`. Arcs
/// `0..|E|` are the graph's edges in order.
pub fn source_node(g: &Digraph) -> usize {
    g.len()
}

pub fn sink_node(g: &Digraph) -> usize {
    g.len() + 1
}

/// The graph's edges with infinite capacity, `α → i` with capacity `−x_i`
/// when `x_i < 0`, and `i → ω` with capacity `x_i` when `x_i > 0`.
pub fn build_flow_network(g: &Digraph, x: &RationalVec) -> Result<FlowNetwork> {
    if g.vertices() != x.labels() {
        return Err(Error::Precondition("vector and graph have different vertex sets".into()));
    }
    if !x.total().is_zero() {
        return Err(Error::Precondition("coordinates must sum to zero".into()));
    }
    let mut names: Vec<String> = g.vertices().labels().iter().map(|l| l.to_string()).collect();
    names.push("alpha".into());
    names.push("omega".into());
    let (alpha, omega) = (source_node(g), sink_node(g));
    let mut net = FlowNetwork::new(names, alpha, omega)?;
    for &(u, v) in g.edges() {
        net.add_arc(u, v, Capacity::Infinite)?;
    }
    for (i, c) in x.coords.iter().enumerate() {
        if c.is_negative() {
            net.add_arc(alpha, i, Capacity::Finite(-c))?;
        } else if c.is_positive() {
            net.add_arc(i, omega, Capacity::Finite(c.clone()))?;
        }
    }
    Ok(net)
}

/// Nonnegative edge weights `λ` with `x = Σ λ_(u,v)·(e_v − e_u)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeWitness {
    /// One weight per edge, in [`Digraph::edges`] order.
    pub lambda: Vec<BigRational>,
}

impl ConeWitness {
    pub fn reconstruct(&self, g: &Digraph) -> RationalVec {
        let mut x = RationalVec::zero(g.vertices().clone());
        for (&(u, v), l) in g.edges().iter().zip(&self.lambda) {
            x.coords[v] += l;
            x.coords[u] -= l;
        }
        x
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeReport {
    pub sum_zero: bool,
    /// `Σ_{x_i > 0} x_i`, the capacity of either trivial cut.
    pub required: BigRational,
    /// `None` when `x(I) ≠ 0` and no flow was computed.
    pub flow_value: Option<BigRational>,
    /// Audited min cut of the flow computation.
    pub certificate: Option<CutCertificate>,
    pub witness: Option<ConeWitness>,
}

impl ConeReport {
    pub fn is_member(&self) -> bool {
        self.witness.is_some()
    }
}

pub fn cone_member_report(g: &Digraph, x: &RationalVec) -> Result<ConeReport> {
    if g.vertices() != x.labels() {
        return Err(Error::Precondition("vector and graph have different vertex sets".into()));
    }
    let required: BigRational = x.coords.iter().filter(|c| c.is_positive()).sum();
    if !x.total().is_zero() {
        return Ok(ConeReport {
            sum_zero: false,
            required,
            flow_value: None,
            certificate: None,
            witness: None,
        });
    }
    let net = build_flow_network(g, x)?;
    let result = max_flow(&net)?;
    let certificate = audit(&net, &result)
        .map_err(|e| Error::Precondition(format!("max-flow audit failed: {e}")))?;
    let witness = if result.value == required {
        let w = ConeWitness {
            lambda: result.flow[..g.edge_count()].to_vec(),
        };
        if &w.reconstruct(g) != x {
            return Err(Error::Precondition(format!(
                "flow witness does not reconstruct {x}"
            )));
        }
        Some(w)
    } else {
        None
    };
    Ok(ConeReport {
        sum_zero: true,
        required,
        flow_value: Some(result.value),
        certificate: Some(certificate),
        witness,
    })
}

/// `Some(λ)` iff `x` lies in the cone of `g`.
pub fn cone_member(g: &Digraph, x: &RationalVec) -> Result<Option<ConeWitness>> {
    Ok(cone_member_report(g, x)?.witness)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleKind {
    ConicCombination,
    Perturbed,
    SumZero,
}

#[derive(Debug, Clone)]
pub struct Theorem1Mismatch {
    pub x: RationalVec,
    pub kind: SampleKind,
    pub base_member: bool,
    pub cone_member: bool,
}

#[derive(Debug, Clone, Default)]
pub struct Theorem1Report {
    pub samples: usize,
    pub members: usize,
    pub flow_calls: usize,
    pub certificates_verified: usize,
    pub mismatches: Vec<Theorem1Mismatch>,
}

impl Theorem1Report {
    pub fn holds(&self) -> bool {
        self.mismatches.is_empty() && self.certificates_verified == self.flow_calls
    }
}

fn random_rational(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> BigRational {
    let den: i64 = rng.gen_range(1..=4);
    let num: i64 = rng.gen_range(lo * den..=hi * den);
    BigRational::new(num.into(), den.into())
}

/// A sum-zero vector: random coordinates, the last one balancing the rest.
fn random_sum_zero(rng: &mut ChaCha8Rng, labels: &LabelSet, spread: i64) -> RationalVec {
    let n = labels.len();
    let mut coords: Vec<BigRational> = (0..n).map(|_| random_rational(rng, -spread, spread)).collect();
    if let Some(last) = n.checked_sub(1) {
        let rest: BigRational = coords[..last].iter().sum();
        coords[last] = -rest;
    }
    RationalVec {
        labels: labels.clone(),
        coords,
    }
}

/// Draws a seeded mix of conic combinations of generators, perturbations of
/// those, and free sum-zero vectors, and checks that base-polytope membership
/// for `low(g)` agrees with cone membership on each.
pub fn check_theorem1(g: &Digraph, samples: usize, seed: u64, limits: &Limits) -> Result<Theorem1Report> {
    let z = low(g, limits)?;
    let gens = cone_generators(g);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = Theorem1Report::default();
    for i in 0..samples {
        let kind = match i % 3 {
            0 => SampleKind::ConicCombination,
            1 => SampleKind::Perturbed,
            _ => SampleKind::SumZero,
        };
        let x = match kind {
            SampleKind::SumZero => random_sum_zero(&mut rng, g.vertices(), 3),
            SampleKind::ConicCombination | SampleKind::Perturbed => {
                let mut x = RationalVec::zero(g.vertices().clone());
                for gen in &gens {
                    if rng.gen_bool(0.6) {
                        let k = random_rational(&mut rng, 0, 3);
                        x.add_scaled(gen, &k);
                    }
                }
                if kind == SampleKind::Perturbed {
                    let eps = random_sum_zero(&mut rng, g.vertices(), 1);
                    x.add_scaled(&eps, &BigRational::from_integer(1.into()));
                }
                x
            }
        };
        let in_base = base_member(&z, &x, limits)?;
        let report_x = cone_member_report(g, &x)?;
        if report_x.flow_value.is_some() {
            report.flow_calls += 1;
            let cert = report_x.certificate.as_ref().expect("flow calls are audited");
            if Some(&cert.capacity) == report_x.flow_value.as_ref() {
                report.certificates_verified += 1;
            }
        }
        let in_cone = report_x.is_member();
        report.samples += 1;
        if in_cone {
            report.members += 1;
        }
        if in_base != in_cone {
            report.mismatches.push(Theorem1Mismatch {
                x,
                kind,
                base_member: in_base,
                cone_member: in_cone,
            });
        }
    }
    Ok(report)
}

fn count_maps(
    g: &Digraph,
    n: u64,
    limits: &Limits,
    what: &'static str,
    keep: impl Fn(usize, usize) -> bool,
) -> Result<BigInt> {
    limits.check_work(what, n, g.len())?;
    let mut count = 0u64;
    for_each_map(g.len(), n, |y| {
        if g.edges().iter().all(|&(u, v)| keep(y[u], y[v])) {
            count += 1;
        }
    });
    Ok(count.into())
}

/// Maps `y: I → [n]` generic for the cone: `y(v) < y(u)` for every edge `(u, v)`.
pub fn generic_count(g: &Digraph, n: u64, limits: &Limits) -> Result<BigInt> {
    count_maps(g, n, limits, "generic direction count", |yu, yv| yv < yu)
}

/// `Σ_y` (vertices of the face maximising `y`) over `y: I → [n]`. For an
/// acyclic graph the cone is pointed, and the face is the apex exactly when
/// `y` is weakly order-reversing, so this counts those maps.
pub fn vertex_sum_count(g: &Digraph, n: u64, limits: &Limits) -> Result<BigInt> {
    if !g.is_acyclic() {
        return Err(Error::NotAcyclic);
    }
    count_maps(g, n, limits, "vertex sum count", |yu, yv| yv <= yu)
}

/// Lattice points in a dilation of `Δ_g = [0,1]^I ∩ {x_u ≤ x_v : (u,v) ∈ E}`.
///
/// With `interior`, counts points of the open dilation `(n+1)·Δ_g`:
/// `0 < x_i < n+1` and `x_u < x_v`. Otherwise counts points of `(n−1)·Δ_g`:
/// `0 ≤ x_i ≤ n−1` and `x_u ≤ x_v`; for `n = 0` that dilation is empty.
pub fn ascent_lattice_count(g: &Digraph, n: u64, interior: bool, limits: &Limits) -> Result<BigInt> {
    if !interior && n == 0 {
        return Ok(BigInt::from(u8::from(g.is_empty())));
    }
    let dilation = if interior { n + 1 } else { n - 1 };
    let side = dilation + 1;
    limits.check_work("lattice point scan", side, g.len())?;
    let mut count = 0u64;
    for_each_map(g.len(), side, |x| {
        let inside = if interior {
            x.iter().all(|&c| c > 0 && (c as u64) < dilation)
                && g.edges().iter().all(|&(u, v)| x[u] < x[v])
        } else {
            g.edges().iter().all(|&(u, v)| x[u] <= x[v])
        };
        if inside {
            count += 1;
        }
    });
    Ok(count.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::max_flow;

    fn lim() -> Limits {
        Limits::default()
    }

    fn g3() -> Digraph {
        Digraph::from_labels(&["0", "1", "2"], &[("0", "1"), ("1", "2"), ("0", "2")]).unwrap()
    }

    fn vec3(c: &[i64]) -> RationalVec {
        RationalVec::from_ints(LabelSet::range(3), c).unwrap()
    }

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn base_member_examples() {
        let z = low(&g3(), &lim()).unwrap();
        assert!(base_member(&z, &vec3(&[-1, 0, 1]), &lim()).unwrap());
        assert!(!base_member(&z, &vec3(&[1, 0, -1]), &lim()).unwrap());
        assert!(!base_member(&z, &vec3(&[0, 0, 1]), &lim()).unwrap());
    }

    #[test]
    fn generators() {
        let gens = cone_generators(&g3());
        let want: Vec<RationalVec> = [[-1, 1, 0], [-1, 0, 1], [0, -1, 1]]
            .iter()
            .map(|c| vec3(c))
            .collect();
        assert_eq!(gens, want);
        assert!(gens.iter().all(|v| v.total().is_zero()));
        assert!(cone_generators(&Digraph::edgeless(LabelSet::range(2))).is_empty());
    }

    #[test]
    fn network_construction() {
        let net = build_flow_network(&g3(), &vec3(&[-2, 1, 1])).unwrap();
        let arcs: Vec<(String, String, String)> = net
            .arcs()
            .iter()
            .map(|a| (net.name(a.tail).into(), net.name(a.head).into(), a.capacity.to_string()))
            .collect();
        let s = |a: &str, b: &str, c: &str| (a.to_string(), b.to_string(), c.to_string());
        assert_eq!(
            arcs,
            vec![
                s("0", "1", "inf"),
                s("0", "2", "inf"),
                s("1", "2", "inf"),
                s("alpha", "0", "2"),
                s("1", "omega", "1"),
                s("2", "omega", "1"),
            ]
        );
        let zero = build_flow_network(&g3(), &vec3(&[0, 0, 0])).unwrap();
        assert_eq!(zero.arcs().len(), 3);
        assert!(build_flow_network(&g3(), &vec3(&[1, 1, 1])).is_err());
    }

    #[test]
    fn trivial_cuts_have_equal_capacity() {
        let g = g3();
        let x = vec3(&[-2, 1, 1]);
        let net = build_flow_network(&g, &x).unwrap();
        let mut only_source = vec![false; 5];
        only_source[source_node(&g)] = true;
        let mut all_but_sink = vec![true; 5];
        all_but_sink[sink_node(&g)] = false;
        assert_eq!(net.cut_capacity(&only_source), Capacity::Finite(r(2)));
        assert_eq!(net.cut_capacity(&all_but_sink), Capacity::Finite(r(2)));
    }

    #[test]
    fn flow_on_g3_network() {
        let net = build_flow_network(&g3(), &vec3(&[-2, 1, 1])).unwrap();
        let res = max_flow(&net).unwrap();
        assert_eq!(res.value, r(2));
        assert_eq!(audit(&net, &res).unwrap().capacity, r(2));
    }

    #[test]
    fn cone_member_examples() {
        let g = g3();
        let w = cone_member(&g, &vec3(&[-1, 0, 1])).unwrap().unwrap();
        assert_eq!(w.reconstruct(&g), vec3(&[-1, 0, 1]));
        assert_eq!(cone_member(&g, &vec3(&[1, 0, -1])).unwrap(), None);
        let rep = cone_member_report(&g, &vec3(&[1, 0, -1])).unwrap();
        assert_eq!(rep.flow_value, Some(r(0)));
        let w = cone_member(&g, &vec3(&[-2, 1, 1])).unwrap().unwrap();
        assert_eq!(w.reconstruct(&g), vec3(&[-2, 1, 1]));
        assert!(w.lambda.iter().all(|l| !l.is_negative()));
        let rep = cone_member_report(&g, &vec3(&[1, 1, 1])).unwrap();
        assert!(!rep.sum_zero && !rep.is_member());
    }

    #[test]
    fn theorem1_examples() {
        let rep = check_theorem1(&g3(), 200, 7, &lim()).unwrap();
        assert!(rep.holds(), "{:?}", rep.mismatches);
        assert!(rep.members > 0 && rep.members < rep.samples);

        let e = Digraph::edgeless(LabelSet::range(3));
        let rep = check_theorem1(&e, 60, 1, &lim()).unwrap();
        assert!(rep.holds());
        assert!(cone_member(&e, &vec3(&[0, 0, 0])).unwrap().is_some());
        assert!(cone_member(&e, &vec3(&[1, -1, 0])).unwrap().is_none());

        let cyc = Digraph::from_labels(&["a", "b"], &[("a", "b"), ("b", "a")]).unwrap();
        let rep = check_theorem1(&cyc, 60, 3, &lim()).unwrap();
        assert!(rep.holds());
        assert_eq!(rep.members, rep.samples);
    }

    #[test]
    fn rational_vectors_parse() {
        let ls = LabelSet::range(3);
        let x = RationalVec::parse(ls.clone(), "−2, 1/2, 3/2").unwrap();
        assert_eq!(x.coords()[1], BigRational::new(1.into(), 2.into()));
        assert!(x.total().is_zero());
        assert!(RationalVec::parse(ls.clone(), "1,2").is_err());
        assert!(matches!(RationalVec::parse(ls, "1,x,2"), Err(Error::Parse { column: 3, .. })));
    }

    #[test]
    fn boundedness_matches_lower_halves() {
        let g = g3();
        for m in 0..8 {
            let s = Subset(m);
            assert_eq!(bounded_in_direction(&g, s), g.coproduct(s).unwrap().is_some());
        }
    }

    #[test]
    fn generic_and_vertex_counts() {
        assert_eq!(generic_count(&g3(), 3, &lim()).unwrap(), BigInt::from(1));
        assert_eq!(generic_count(&Digraph::edgeless(LabelSet::range(3)), 4, &lim()).unwrap(), BigInt::from(64));
        let cyc = Digraph::from_labels(&["a", "b"], &[("a", "b"), ("b", "a")]).unwrap();
        assert_eq!(generic_count(&cyc, 4, &lim()).unwrap(), BigInt::from(0));
        assert_eq!(vertex_sum_count(&g3(), 3, &lim()).unwrap(), BigInt::from(10));
        assert_eq!(vertex_sum_count(&Digraph::edgeless(LabelSet::range(2)), 3, &lim()).unwrap(), BigInt::from(9));
        let edge = Digraph::from_labels(&["a", "b"], &[("a", "b")]).unwrap();
        assert_eq!(vertex_sum_count(&edge, 2, &lim()).unwrap(), BigInt::from(3));
        assert_eq!(vertex_sum_count(&cyc, 2, &lim()), Err(Error::NotAcyclic));
    }

    #[test]
    fn lattice_counts() {
        assert_eq!(ascent_lattice_count(&g3(), 3, true, &lim()).unwrap(), BigInt::from(1));
        assert_eq!(ascent_lattice_count(&g3(), 3, false, &lim()).unwrap(), BigInt::from(10));
        let e = Digraph::edgeless(LabelSet::range(3));
        assert_eq!(ascent_lattice_count(&e, 4, false, &lim()).unwrap(), BigInt::from(64));
        assert_eq!(ascent_lattice_count(&g3(), 0, false, &lim()).unwrap(), BigInt::from(0));
        assert_eq!(ascent_lattice_count(&g3(), 0, true, &lim()).unwrap(), BigInt::from(0));
    }
}
