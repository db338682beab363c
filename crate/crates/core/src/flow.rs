//! Exact maximum flow on networks with rational and infinite capacities.
//!
//! Capacities are scaled to integers by the lcm of their denominators and
//! infinite arcs get the surrogate `1 + Σ finite capacities`. When some cut
//! is finite, every cut crossing a surrogate arc is more expensive than it, so
//! the maximum flow and the minimum cut are unchanged. Augmentation uses
//! shortest paths (Edmonds–Karp).

use std::collections::VecDeque;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Capacity {
    Finite(BigRational),
    Infinite,
}

impl fmt::Display for Capacity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Capacity::Finite(c) => write!(f, "{c}"),
            Capacity::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowArc {
    pub tail: usize,
    pub head: usize,
    pub capacity: Capacity,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowNetwork {
    names: Vec<String>,
    source: usize,
    sink: usize,
    arcs: Vec<FlowArc>,
}

impl FlowNetwork {
    /// Nodes are `0..names.len()`.
    pub fn new(names: Vec<String>, source: usize, sink: usize) -> Result<Self> {
        if source >= names.len() || sink >= names.len() || source == sink {
            return Err(Error::Precondition("source and sink must be distinct nodes".into()));
        }
        Ok(FlowNetwork {
            names,
            source,
            sink,
            arcs: Vec::new(),
        })
    }

    pub fn add_arc(&mut self, tail: usize, head: usize, capacity: Capacity) -> Result<usize> {
        let n = self.names.len();
        if tail >= n || head >= n {
            return Err(Error::Precondition("arc endpoint out of range".into()));
        }
        if tail == head {
            return Err(Error::Precondition("self-loop arc".into()));
        }
        if head == self.source || tail == self.sink {
            return Err(Error::Precondition(
                "the source takes no incoming arcs and the sink no outgoing arcs".into(),
            ));
        }
        if let Capacity::Finite(c) = &capacity {
            if c.is_negative() {
                return Err(Error::Precondition("negative capacity".into()));
            }
        }
        self.arcs.push(FlowArc {
            tail,
            head,
            capacity,
        });
        Ok(self.arcs.len() - 1)
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, node: usize) -> &str {
        &self.names[node]
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    pub fn arcs(&self) -> &[FlowArc] {
        &self.arcs
    }

    /// Capacity of the arcs leaving `side` (a node → in-side flag map).
    pub fn cut_capacity(&self, side: &[bool]) -> Capacity {
        let mut total = BigRational::zero();
        for a in &self.arcs {
            if side[a.tail] && !side[a.head] {
                match &a.capacity {
                    Capacity::Finite(c) => total += c,
                    Capacity::Infinite => return Capacity::Infinite,
                }
            }
        }
        Capacity::Finite(total)
    }
}

impl fmt::Display for FlowNetwork {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.arcs {
            writeln!(f, "{} -> {} cap {}", self.names[a.tail], self.names[a.head], a.capacity)?;
        }
        Ok(())
    }
}

/// Source side of a cut together with its capacity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutCertificate {
    pub source_side: Vec<bool>,
    pub capacity: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowResult {
    pub value: BigRational,
    /// Flow on each arc, in [`FlowNetwork::arcs`] order.
    pub flow: Vec<BigRational>,
    /// Nodes reachable from the source in the final residual graph.
    pub min_cut: CutCertificate,
}

struct Residual {
    to: usize,
    cap: BigInt,
    rev: usize,
}

pub fn max_flow(net: &FlowNetwork) -> Result<FlowResult> {
    let n = net.node_count();

    // Some cut is finite iff the sink is unreachable along infinite arcs.
    let mut seen = vec![false; n];
    seen[net.source] = true;
    let mut queue = VecDeque::from([net.source]);
    while let Some(v) = queue.pop_front() {
        for a in net.arcs.iter().filter(|a| a.tail == v && a.capacity == Capacity::Infinite) {
            if !seen[a.head] {
                seen[a.head] = true;
                queue.push_back(a.head);
            }
        }
    }
    if seen[net.sink] {
        return Err(Error::Unbounded);
    }

    let scale = net
        .arcs
        .iter()
        .filter_map(|a| match &a.capacity {
            Capacity::Finite(c) => Some(c.denom().clone()),
            Capacity::Infinite => None,
        })
        .fold(BigInt::one(), |l, d| l.lcm(&d));
    let scaled = |c: &BigRational| (c * BigRational::from_integer(scale.clone())).to_integer();
    let finite_total: BigInt = net
        .arcs
        .iter()
        .filter_map(|a| match &a.capacity {
            Capacity::Finite(c) => Some(scaled(c)),
            Capacity::Infinite => None,
        })
        .sum();
    let surrogate = finite_total + BigInt::one();

    let mut graph: Vec<Vec<Residual>> = (0..n).map(|_| Vec::new()).collect();
    let mut arc_pos = Vec::with_capacity(net.arcs.len());
    let mut initial = Vec::with_capacity(net.arcs.len());
    for a in &net.arcs {
        let cap = match &a.capacity {
            Capacity::Finite(c) => scaled(c),
            Capacity::Infinite => surrogate.clone(),
        };
        let (fwd, back) = (graph[a.tail].len(), graph[a.head].len());
        graph[a.tail].push(Residual {
            to: a.head,
            cap: cap.clone(),
            rev: back,
        });
        graph[a.head].push(Residual {
            to: a.tail,
            cap: BigInt::zero(),
            rev: fwd,
        });
        arc_pos.push((a.tail, fwd));
        initial.push(cap);
    }

    let mut total = BigInt::zero();
    loop {
        // BFS for a shortest augmenting path.
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut visited = vec![false; n];
        visited[net.source] = true;
        let mut queue = VecDeque::from([net.source]);
        while let Some(v) = queue.pop_front() {
            if v == net.sink {
                break;
            }
            for (i, e) in graph[v].iter().enumerate() {
                if e.cap.is_positive() && !visited[e.to] {
                    visited[e.to] = true;
                    parent[e.to] = Some((v, i));
                    queue.push_back(e.to);
                }
            }
        }
        if !visited[net.sink] {
            break;
        }
        let mut bottleneck: Option<BigInt> = None;
        let mut v = net.sink;
        while let Some((u, i)) = parent[v] {
            let c = &graph[u][i].cap;
            if bottleneck.as_ref().is_none_or(|b| c < b) {
                bottleneck = Some(c.clone());
            }
            v = u;
        }
        let bottleneck = bottleneck.expect("path has at least one arc");
        let mut v = net.sink;
        while let Some((u, i)) = parent[v] {
            graph[u][i].cap -= &bottleneck;
            let rev = graph[u][i].rev;
            graph[v][rev].cap += &bottleneck;
            v = u;
        }
        total += bottleneck;
    }

    let unscale = |x: BigInt| BigRational::new(x, scale.clone());
    let flow: Vec<BigRational> = arc_pos
        .iter()
        .zip(&initial)
        .map(|(&(t, i), cap)| unscale(cap - &graph[t][i].cap))
        .collect();

    let mut side = vec![false; n];
    side[net.source] = true;
    let mut queue = VecDeque::from([net.source]);
    while let Some(v) = queue.pop_front() {
        for e in &graph[v] {
            if e.cap.is_positive() && !side[e.to] {
                side[e.to] = true;
                queue.push_back(e.to);
            }
        }
    }
    let capacity = match net.cut_capacity(&side) {
        Capacity::Finite(c) => c,
        Capacity::Infinite => unreachable!("a residual-closed cut never crosses a surrogate arc"),
    };
    Ok(FlowResult {
        value: unscale(total),
        flow,
        min_cut: CutCertificate {
            source_side: side,
            capacity,
        },
    })
}

/// Independent optimality audit: capacity bounds, conservation, the value,
/// and a cut rebuilt from the flow alone whose capacity equals the value.
/// Returns that cut.
pub fn audit(net: &FlowNetwork, result: &FlowResult) -> std::result::Result<CutCertificate, String> {
    let n = net.node_count();
    if result.flow.len() != net.arcs.len() {
        return Err("flow vector length differs from arc count".into());
    }
    let mut balance = vec![BigRational::zero(); n];
    for (a, f) in net.arcs.iter().zip(&result.flow) {
        if f.is_negative() {
            return Err(format!("negative flow on {} -> {}", net.name(a.tail), net.name(a.head)));
        }
        if let Capacity::Finite(c) = &a.capacity {
            if f > c {
                return Err(format!("flow exceeds capacity on {} -> {}", net.name(a.tail), net.name(a.head)));
            }
        }
        balance[a.tail] -= f;
        balance[a.head] += f;
    }
    for (v, b) in balance.iter().enumerate() {
        if v != net.source && v != net.sink && !b.is_zero() {
            return Err(format!("conservation fails at {}", net.name(v)));
        }
    }
    if -&balance[net.source] != result.value || balance[net.sink] != result.value {
        return Err("reported value differs from net source out-flow".into());
    }

    let mut side = vec![false; n];
    side[net.source] = true;
    let mut queue = VecDeque::from([net.source]);
    while let Some(v) = queue.pop_front() {
        for (a, f) in net.arcs.iter().zip(&result.flow) {
            let forward = a.tail == v
                && !side[a.head]
                && match &a.capacity {
                    Capacity::Finite(c) => f < c,
                    Capacity::Infinite => true,
                };
            if forward {
                side[a.head] = true;
                queue.push_back(a.head);
            }
            let backward = a.head == v && !side[a.tail] && f.is_positive();
            if backward {
                side[a.tail] = true;
                queue.push_back(a.tail);
            }
        }
    }
    if side[net.sink] {
        return Err("an augmenting path remains".into());
    }
    match net.cut_capacity(&side) {
        Capacity::Finite(c) if c == result.value => Ok(CutCertificate {
            source_side: side,
            capacity: c,
        }),
        Capacity::Finite(c) => Err(format!("cut capacity {c} differs from flow value {}", result.value)),
        Capacity::Infinite => Err("residual cut has infinite capacity".into()),
    }
}
