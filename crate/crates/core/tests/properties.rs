use std::collections::BTreeMap;

use hopfdg::flow::{audit, max_flow, Capacity, FlowNetwork};
use hopfdg::hopf::{aa_poly, antipode, antipode_of_sum, char_basic, char_edge};
use hopfdg::invariants::{
    b_polynomial, brute_strict, brute_weak, edge_invariant, strict_chromatic, strict_from_b, weak_chromatic,
};
use hopfdg::polytope::{bounded_in_direction, cone_member, generic_count, vertex_sum_count, RationalVec};
use hopfdg::species::all_compositions;
use hopfdg::subfun::{bf_contract, bf_restrict, check_low_morphism, is_submodular, low, ExtBool, ExtValue};
use hopfdg::{
    BasicCharacter, CoeffRing, Composition, Digraph, EdgeCharacter, FormalSum, Label, LabelSet, Limits, MPoly,
    Subset, Var,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn graph_on(labels: LabelSet, bits: u64) -> Digraph {
    let n = labels.len();
    let pairs = (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).filter(|(u, v)| u != v);
    let edges = pairs.enumerate().filter(|(i, _)| bits >> i & 1 == 1).map(|(_, e)| e).collect();
    Digraph::new(labels, edges).unwrap()
}

fn arb_graph(max: usize) -> impl Strategy<Value = Digraph> {
    (0..=max, any::<u64>()).prop_map(|(n, bits)| graph_on(LabelSet::range(n), bits))
}

fn prefixed(prefix: &str, n: usize) -> LabelSet {
    LabelSet::from_strs((0..n).map(|i| format!("{prefix}{i}"))).unwrap()
}

/// Two graphs on disjoint label sets.
fn arb_pair(max: usize) -> impl Strategy<Value = (Digraph, Digraph)> {
    (0..=max, any::<u64>(), 0..=max, any::<u64>()).prop_map(|(n, a, m, b)| {
        (graph_on(prefixed("a", n), a), graph_on(prefixed("b", m), b))
    })
}

fn with_subset(g: Digraph) -> impl Strategy<Value = (Digraph, Subset)> {
    let full = g.vertices().full().0;
    (Just(g), 0..=full).prop_map(|(g, s)| (g, Subset(s)))
}

fn arb_graph_and_subset(max: usize) -> impl Strategy<Value = (Digraph, Subset)> {
    arb_graph(max).prop_flat_map(with_subset)
}

fn limits() -> Limits {
    Limits::default()
}

fn pow(n: u64, k: usize) -> BigInt {
    BigInt::from(n).pow(k as u32)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn lower_halves_form_a_lattice(g in arb_graph(6), a in any::<u64>(), b in any::<u64>()) {
        let full = g.vertices().full();
        let (a, b) = (Subset(a).intersection(full), Subset(b).intersection(full));
        if g.is_lower_half(a).unwrap() && g.is_lower_half(b).unwrap() {
            prop_assert!(g.is_lower_half(a.union(b)).unwrap());
            prop_assert!(g.is_lower_half(a.intersection(b)).unwrap());
        }
        let halves = g.lower_halves(&limits()).unwrap();
        let expected: Vec<Subset> = (0..=full.0).map(Subset).filter(|&s| g.is_lower_half(s).unwrap()).collect();
        prop_assert_eq!(halves, expected);
    }

    #[test]
    fn nested_restriction_and_coproduct((g, s) in arb_graph_and_subset(6), t in any::<u64>()) {
        let full = g.vertices().full();
        let t = Subset(t).intersection(full.difference(s));
        let st = s.union(t);
        let g_st = g.restrict(st).unwrap();
        prop_assert_eq!(g_st.restrict(s.compress(st)).unwrap(), g.restrict(s).unwrap());
        let rest = full.difference(s);
        let g_rest = g.restrict(rest).unwrap();
        let via_st = g_st.restrict(st.difference(s).compress(st)).unwrap();
        prop_assert_eq!(via_st, g_rest.restrict(t.compress(rest)).unwrap());
    }

    #[test]
    fn coproduct_matches_cone_boundedness((g, s) in arb_graph_and_subset(6)) {
        let lower = g.is_lower_half(s).unwrap();
        prop_assert_eq!(g.coproduct(s).unwrap().is_some(), lower);
        prop_assert_eq!(bounded_in_direction(&g, s), lower);
        if let Some((a, b)) = g.coproduct(s).unwrap() {
            prop_assert_eq!(a, g.restrict(s).unwrap());
            prop_assert_eq!(b, g.restrict(g.vertices().full().difference(s)).unwrap());
        }
    }

    #[test]
    fn relabel_commutes_with_operations((g, s) in arb_graph_and_subset(5), shift in 0usize..5) {
        let n = g.len();
        let sigma: BTreeMap<Label, Label> = (0..n)
            .map(|i| (g.vertices().get(i).clone(), Label::new(format!("x{}", (i + shift) % n.max(1))).unwrap()))
            .collect();
        let g2 = g.relabel(&sigma).unwrap();
        let s2 = Subset::from_indices(s.indices().map(|i| g2.vertices().position(&sigma[g.vertices().get(i)]).unwrap()));
        prop_assert_eq!(g.restrict(s).unwrap().relabel(&sigma).unwrap(), g2.restrict(s2).unwrap());
        prop_assert_eq!(g.coproduct(s).unwrap().is_some(), g2.coproduct(s2).unwrap().is_some());
    }

    #[test]
    fn product_splits_back((g, h) in arb_pair(3), s in any::<u64>()) {
        let gh = g.product(&h).unwrap();
        prop_assert_eq!(gh.edge_count(), g.edge_count() + h.edge_count());
        prop_assert_eq!(&gh, &h.product(&g).unwrap());
        let s = Subset(s).intersection(gh.vertices().full());
        let restricted = gh.restrict(s).unwrap();
        let in_g = Subset::from_indices(g.vertices().labels().iter().map(|l| gh.vertices().position(l).unwrap()));
        let in_h = gh.vertices().full().difference(in_g);
        let parts = g.restrict(s.intersection(in_g).compress(in_g)).unwrap()
            .product(&h.restrict(s.intersection(in_h).compress(in_h)).unwrap()).unwrap();
        prop_assert_eq!(restricted, parts);
    }

    #[test]
    fn characters_are_multiplicative((g, h) in arb_pair(3)) {
        let gh = g.product(&h).unwrap();
        prop_assert_eq!(char_basic(&gh), char_basic(&g) * char_basic(&h));
        prop_assert_eq!(char_edge(&gh), char_edge(&g).times(&char_edge(&h)));
    }

    #[test]
    fn invariants_are_multiplicative((g, h) in arb_pair(3)) {
        let gh = g.product(&h).unwrap();
        let l = limits();
        let (a, b, c) = (
            aa_poly(&g, &BasicCharacter, &l).unwrap(),
            aa_poly(&h, &BasicCharacter, &l).unwrap(),
            aa_poly(&gh, &BasicCharacter, &l).unwrap(),
        );
        let (pa, pb, pc) = (
            aa_poly(&g, &EdgeCharacter, &l).unwrap(),
            aa_poly(&h, &EdgeCharacter, &l).unwrap(),
            aa_poly(&gh, &EdgeCharacter, &l).unwrap(),
        );
        for n in 0..=5i64 {
            let n = BigInt::from(n);
            prop_assert_eq!(c.eval(&n), a.eval(&n) * b.eval(&n));
            prop_assert_eq!(pc.eval(&n), pa.eval(&n).times(&pb.eval(&n)));
        }
    }

    #[test]
    fn aa_poly_low_values_and_degree(g in arb_graph(6)) {
        let l = limits();
        let chi = aa_poly(&g, &BasicCharacter, &l).unwrap();
        let psi = aa_poly(&g, &EdgeCharacter, &l).unwrap();
        prop_assert!(chi.degree().is_none_or(|d| d <= g.len()));
        prop_assert!(psi.degree().is_none_or(|d| d <= g.len()));
        prop_assert_eq!(chi.eval_i64(1), char_basic(&g));
        prop_assert_eq!(psi.eval_i64(1), char_edge(&g));
        if !g.is_empty() {
            prop_assert_eq!(chi.eval_i64(0), BigInt::from(0));
            prop_assert!(psi.eval_i64(0).is_zero());
        }
    }

    #[test]
    fn main_theorem_coefficientwise(g in arb_graph(6)) {
        let l = limits();
        prop_assert_eq!(strict_chromatic(&g, &l).unwrap(), aa_poly(&g, &BasicCharacter, &l).unwrap());
    }

    #[test]
    fn chromatic_polynomials_match_brute_force(g in arb_graph(5)) {
        let l = limits();
        let (s, w) = (strict_chromatic(&g, &l).unwrap(), weak_chromatic(&g, &l).unwrap());
        for n in 0..=5u64 {
            prop_assert_eq!(s.eval_i64(n as i64), brute_strict(&g, n, &l).unwrap());
            prop_assert_eq!(w.eval_i64(n as i64), brute_weak(&g, n, &l).unwrap());
        }
    }

    #[test]
    fn b_polynomial_identities(g in arb_graph(5)) {
        let l = limits();
        let b = b_polynomial(&g, &l).unwrap();
        let rb = b_polynomial(&g.reversed(), &l).unwrap();
        prop_assert_eq!(&rb, &b.map(|c| c.swap_vars(Var::Y, Var::Z)));
        let one = BigInt::from(1);
        for n in 0..=5u64 {
            let at = b.eval_i64(n as i64).eval(&one, &one, &one);
            prop_assert_eq!(at, pow(n, g.len()));
        }
        prop_assert_eq!(strict_from_b(&b, g.edge_count()), strict_chromatic(&g, &l).unwrap());
        let psi_at_one = edge_invariant(&g, &l).unwrap().map(|c| c.substitute(Var::Q, &MPoly::constant(1)).as_constant().unwrap());
        prop_assert_eq!(psi_at_one, weak_chromatic(&g, &l).unwrap());
    }

    #[test]
    fn coloring_counts_match_the_polynomial(g in arb_graph(5)) {
        let l = limits();
        let s = strict_chromatic(&g, &l).unwrap();
        let sign = if g.len() % 2 == 0 { 1 } else { -1 };
        for n in 0..=4u64 {
            prop_assert_eq!(generic_count(&g, n, &l).unwrap(), s.eval_i64(n as i64));
            if g.is_acyclic() && n >= 1 {
                prop_assert_eq!(vertex_sum_count(&g, n, &l).unwrap(), s.eval_i64(-(n as i64)) * sign);
            }
        }
    }

    #[test]
    fn low_is_submodular_and_a_morphism((g, s) in arb_graph_and_subset(5)) {
        let l = limits();
        prop_assert!(is_submodular(&low(&g, &l).unwrap(), &l).unwrap());
        prop_assert!(check_low_morphism(&g, s, &l).unwrap().holds());
    }

    #[test]
    fn contract_and_restrict_are_associative(
        n in 0usize..5,
        raw in prop::collection::vec(prop::option::weighted(0.8, -6i64..7), 32),
        s in any::<u64>(),
        t in any::<u64>(),
    ) {
        let ground = LabelSet::range(n);
        let z = ExtBool::from_fn(ground.clone(), &limits(), |a| {
            if a.is_empty() || a == ground.full() {
                ExtValue::Finite(BigRational::from_integer(BigInt::from(if a.is_empty() { 0 } else { raw[0].unwrap_or(1) })))
            } else {
                raw[a.0 as usize].map_or(ExtValue::Infinite, |v| ExtValue::Finite(BigRational::from_integer(v.into())))
            }
        }).unwrap();
        let full = ground.full();
        let s = Subset(s).intersection(full);
        let t = Subset(t).intersection(full.difference(s));
        let st = s.union(t);
        // restriction is only defined where the table is finite
        prop_assume!(z.value(s).is_finite() && z.value(st).is_finite());
        let z_st = bf_restrict(&z, st).unwrap();
        prop_assert_eq!(bf_restrict(&z_st, s.compress(st)).unwrap(), bf_restrict(&z, s).unwrap());
        let rest = full.difference(s);
        let lhs = bf_contract(&z_st, s.compress(st)).unwrap();
        let rhs = bf_contract(&z, s).unwrap().map(|c| bf_restrict(&c, t.compress(rest)).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn cone_witnesses_reconstruct(g in arb_graph(5), coords in prop::collection::vec(-4i64..5, 5)) {
        let n = g.len();
        let mut c: Vec<i64> = coords[..n].to_vec();
        if n > 0 {
            let rest: i64 = c[..n - 1].iter().sum();
            c[n - 1] = -rest;
        }
        let x = RationalVec::from_ints(g.vertices().clone(), &c).unwrap();
        if let Some(w) = cone_member(&g, &x).unwrap() {
            prop_assert!(w.lambda.iter().all(|l| *l >= BigRational::from_integer(0.into())));
            prop_assert_eq!(w.reconstruct(&g), x);
        }
    }

    #[test]
    fn max_flow_passes_audit(
        n in 2usize..7,
        arcs in prop::collection::vec((0usize..7, 0usize..7, prop::option::weighted(0.9, (0i64..9, 1i64..4))), 0..20),
    ) {
        let names = (0..n).map(|i| format!("v{i}")).collect();
        let mut net = FlowNetwork::new(names, 0, n - 1).unwrap();
        for (u, v, cap) in arcs {
            let (u, v) = (u % n, v % n);
            if u == v || v == 0 || u == n - 1 {
                continue;
            }
            let cap = match cap {
                Some((a, b)) => Capacity::Finite(BigRational::new(a.into(), b.into())),
                None => Capacity::Infinite,
            };
            net.add_arc(u, v, cap).unwrap();
        }
        if let Ok(result) = max_flow(&net) {
            let cert = audit(&net, &result).unwrap();
            prop_assert_eq!(&result.value, &cert.capacity);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn antipode_is_an_involution(g in arb_graph(4)) {
        let l = limits();
        let twice = antipode_of_sum(&antipode(&g, &l).unwrap(), &l).unwrap();
        prop_assert_eq!(twice, FormalSum::from_graph(&g));
    }

    #[test]
    fn mu_delta_matches_iterated_coproduct(g in arb_graph(5), pick in any::<prop::sample::Index>()) {
        let comps: Vec<Composition> = all_compositions(g.vertices()).collect();
        let c = &comps[pick.index(comps.len())];
        let mut expected = Some(Digraph::edgeless(LabelSet::empty()));
        let mut rest = g.clone();
        let mut rest_mask = g.vertices().full();
        for &block in c.blocks() {
            expected = match (expected, rest.coproduct(block.compress(rest_mask)).unwrap()) {
                (Some(acc), Some((left, right))) => {
                    rest = right;
                    rest_mask = rest_mask.difference(block);
                    Some(acc.product(&left).unwrap())
                }
                _ => None,
            };
            if expected.is_none() {
                break;
            }
        }
        prop_assert_eq!(g.mu_delta(c).unwrap(), expected);
    }
}
