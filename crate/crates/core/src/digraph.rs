//! Directed graphs as a set species: relabeling, restriction, disjoint-union
//! product, lower halves and the coproduct they support.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::species::{Composition, Label, LabelSet, Subset};
use crate::Limits;

/// A simple directed graph on a sorted label set.
///
/// Edges are stored as position pairs sorted lexicographically, which is the
/// canonical form: two graphs are equal iff they have the same labels and the
/// same edge pairs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Digraph {
    vertices: LabelSet,
    edges: Vec<(usize, usize)>,
}

impl Digraph {
    pub fn new(vertices: LabelSet, mut edges: Vec<(usize, usize)>) -> Result<Self> {
        let n = vertices.len();
        for &(u, v) in &edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u},{v}) has an endpoint outside the vertex set"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!(
                    "self-loop at {}",
                    vertices.get(u)
                )));
            }
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            let (u, v) = w[0];
            return Err(Error::InvalidGraph(format!(
                "parallel edge {} -> {}",
                vertices.get(u),
                vertices.get(v)
            )));
        }
        Ok(Digraph { vertices, edges })
    }

    pub fn from_labels<S: AsRef<str>>(vertices: &[S], edges: &[(S, S)]) -> Result<Self> {
        let ls = LabelSet::from_strs(vertices)?;
        let mut pairs = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            pairs.push((ls.position_of(u.as_ref())?, ls.position_of(v.as_ref())?));
        }
        Digraph::new(ls, pairs)
    }

    pub fn edgeless(vertices: LabelSet) -> Self {
        Digraph {
            vertices,
            edges: Vec::new(),
        }
    }

    /// The unit: the graph on the empty label set.
    pub fn empty() -> Self {
        Digraph::edgeless(LabelSet::empty())
    }

    pub fn vertices(&self) -> &LabelSet {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_labels(&self) -> impl Iterator<Item = (&Label, &Label)> {
        self.edges
            .iter()
            .map(|&(u, v)| (self.vertices.get(u), self.vertices.get(v)))
    }

    /// Bitmask of in-neighbours of every vertex.
    pub fn predecessor_masks(&self) -> Vec<Subset> {
        let mut preds = vec![Subset::EMPTY; self.len()];
        for &(u, v) in &self.edges {
            preds[v] = preds[v].insert(u);
        }
        preds
    }

    /// Transport along a bijection of labels.
    pub fn relabel(&self, sigma: &BTreeMap<Label, Label>) -> Result<Digraph> {
        let mut images = Vec::with_capacity(self.len());
        for l in self.vertices.labels() {
            let img = sigma
                .get(l)
                .ok_or_else(|| Error::Bijection(format!("no image for {l}")))?;
            images.push(img.clone());
        }
        let target = LabelSet::new(images.iter().cloned()).map_err(|e| match e {
            Error::DuplicateLabel(l) => Error::Bijection(format!("{l} is hit twice")),
            other => other,
        })?;
        let pos: Vec<usize> = images
            .iter()
            .map(|l| target.position(l).expect("image is in target"))
            .collect();
        let edges = self.edges.iter().map(|&(u, v)| (pos[u], pos[v])).collect();
        Digraph::new(target, edges)
    }

    pub fn restrict(&self, s: Subset) -> Result<Digraph> {
        self.vertices.check_subset(s)?;
        Ok(self.restrict_unchecked(s))
    }

    pub(crate) fn restrict_unchecked(&self, s: Subset) -> Digraph {
        let mut pos = vec![usize::MAX; self.len()];
        for (j, i) in s.indices().enumerate() {
            pos[i] = j;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| s.contains(u) && s.contains(v))
            .map(|&(u, v)| (pos[u], pos[v]))
            .collect();
        // Order is preserved by the monotone re-indexing, so no re-sort is needed.
        Digraph {
            vertices: self.vertices.restrict(s),
            edges,
        }
    }

    /// Disjoint union.
    pub fn product(&self, other: &Digraph) -> Result<Digraph> {
        if let Some(l) = self.vertices.first_shared(&other.vertices) {
            return Err(Error::NotDisjoint(l.to_string()));
        }
        let union = LabelSet::new(
            self.vertices
                .labels()
                .iter()
                .chain(other.vertices.labels())
                .cloned(),
        )?;
        let map_of = |g: &Digraph| -> Vec<usize> {
            g.vertices
                .labels()
                .iter()
                .map(|l| union.position(l).expect("label in union"))
                .collect()
        };
        let (p1, p2) = (map_of(self), map_of(other));
        let edges = self
            .edges
            .iter()
            .map(|&(u, v)| (p1[u], p1[v]))
            .chain(other.edges.iter().map(|&(u, v)| (p2[u], p2[v])))
            .collect();
        Digraph::new(union, edges)
    }

    /// True iff no edge enters `s` from its complement.
    pub fn is_lower_half(&self, s: Subset) -> Result<bool> {
        self.vertices.check_subset(s)?;
        Ok(self.is_lower_half_unchecked(s))
    }

    pub(crate) fn is_lower_half_unchecked(&self, s: Subset) -> bool {
        self.edges
            .iter()
            .all(|&(u, v)| s.contains(u) || !s.contains(v))
    }

    pub fn lower_halves(&self, limits: &Limits) -> Result<Vec<Subset>> {
        limits.check_subsets(self.len())?;
        let preds = self.predecessor_masks();
        Ok((0..1u64 << self.len())
            .map(Subset)
            .filter(|s| s.indices().all(|v| preds[v].is_subset_of(*s)))
            .collect())
    }

    /// `Some((g|S, g|T))` when `s` is a lower half, `None` (the zero) otherwise.
    pub fn coproduct(&self, s: Subset) -> Result<Option<(Digraph, Digraph)>> {
        if !self.is_lower_half(s)? {
            return Ok(None);
        }
        let t = self.vertices.full().difference(s);
        Ok(Some((self.restrict_unchecked(s), self.restrict_unchecked(t))))
    }

    /// Iterated coproduct along `c` followed by the product back onto the
    /// full label set. Defined iff every prefix union of blocks is a lower
    /// half; the result keeps only edges inside a block.
    pub fn mu_delta(&self, c: &Composition) -> Result<Option<Digraph>> {
        let c = Composition::new(self.len(), c.blocks().to_vec())?;
        let block = c.block_of(self.len());
        Ok(self.mu_delta_by_block(&block))
    }

    /// `block[i]` is the block index of vertex i.
    pub(crate) fn mu_delta_by_block(&self, block: &[usize]) -> Option<Digraph> {
        let mut kept = Vec::new();
        for &(u, v) in &self.edges {
            // Prefix j ⊇ block(v) misses u exactly when block(u) > block(v).
            match block[u].cmp(&block[v]) {
                std::cmp::Ordering::Greater => return None,
                std::cmp::Ordering::Equal => kept.push((u, v)),
                std::cmp::Ordering::Less => {}
            }
        }
        Some(Digraph {
            vertices: self.vertices.clone(),
            edges: kept,
        })
    }

    /// Same vertices, only the edges at the given indices of [`Digraph::edges`].
    pub(crate) fn with_edge_indices(&self, idx: &[usize]) -> Digraph {
        Digraph {
            vertices: self.vertices.clone(),
            edges: idx.iter().map(|&i| self.edges[i]).collect(),
        }
    }

    pub fn reversed(&self) -> Digraph {
        let edges = self.edges.iter().map(|&(u, v)| (v, u)).collect();
        Digraph::new(self.vertices.clone(), edges).expect("reversal keeps a simple graph simple")
    }

    pub fn is_acyclic(&self) -> bool {
        // 0 = unvisited, 1 = on stack, 2 = done
        let n = self.len();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
        }
        let mut state = vec![0u8; n];
        for root in 0..n {
            if state[root] != 0 {
                continue;
            }
            let mut stack = vec![(root, 0usize)];
            state[root] = 1;
            while let Some(&mut (v, ref mut next)) = stack.last_mut() {
                if *next < adj[v].len() {
                    let w = adj[v][*next];
                    *next += 1;
                    match state[w] {
                        0 => {
                            state[w] = 1;
                            stack.push((w, 0));
                        }
                        1 => return false,
                        _ => {}
                    }
                } else {
                    state[v] = 2;
                    stack.pop();
                }
            }
        }
        true
    }

    /// Parse the line-oriented graph format:
    ///
    /// ```text
    /// # comment
    /// vertices: 0 1 2
    /// 0 -> 1
    /// 1 -> 2
    /// ```
    pub fn parse(text: &str) -> Result<Digraph> {
        let err = |line: usize, column: usize, message: String| Error::Parse {
            line,
            column,
            message,
        };
        let mut labels: Option<LabelSet> = None;
        let mut edges = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line_no = lineno + 1;
            let content = raw.split('#').next().unwrap_or("");
            if content.trim().is_empty() {
                continue;
            }
            let indent = content.len() - content.trim_start().len();
            let content = content.trim();
            match &labels {
                None => {
                    let rest = content.strip_prefix("vertices:").ok_or_else(|| {
                        err(line_no, indent + 1, "expected `vertices:` header".into())
                    })?;
                    let ls = LabelSet::from_strs(rest.split_whitespace())
                        .map_err(|e| err(line_no, indent + 1, e.to_string()))?;
                    labels = Some(ls);
                }
                Some(ls) => {
                    let (tail, head) = content.split_once("->").ok_or_else(|| {
                        err(line_no, indent + 1, "expected an edge `u -> v`".into())
                    })?;
                    let (tail, head) = (tail.trim(), head.trim());
                    let arrow = content.find("->").unwrap() + 2;
                    let after = &content[arrow..];
                    let head_col = indent + arrow + after.len() - after.trim_start().len() + 1;
                    let u = ls
                        .position_of(tail)
                        .map_err(|e| err(line_no, indent + 1, e.to_string()))?;
                    let v = ls
                        .position_of(head)
                        .map_err(|e| err(line_no, head_col, e.to_string()))?;
                    if u == v {
                        return Err(err(line_no, indent + 1, format!("self-loop at {tail}")));
                    }
                    if edges.contains(&(u, v)) {
                        return Err(err(
                            line_no,
                            indent + 1,
                            format!("parallel edge {tail} -> {head}"),
                        ));
                    }
                    edges.push((u, v));
                }
            }
        }
        let labels = labels.ok_or_else(|| err(1, 1, "missing `vertices:` header".into()))?;
        Digraph::new(labels, edges)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("vertices:");
        for l in self.vertices.labels() {
            out.push(' ');
            out.push_str(l.as_str());
        }
        out.push('\n');
        for (u, v) in self.edge_labels() {
            out.push_str(&format!("{u} -> {v}\n"));
        }
        out
    }

    /// Edge list like `[(0,1),(1,2)]`.
    pub fn edge_string(&self) -> String {
        let parts: Vec<String> = self.edge_labels().map(|(u, v)| format!("({u},{v})")).collect();
        format!("[{}]", parts.join(","))
    }
}

impl fmt::Display for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.vertices, self.edge_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // G3 is recovered from its lower halves {∅,{0},{0,1},{0,1,2}} and three edges.
    fn g3() -> Digraph {
        Digraph::from_labels(&["0", "1", "2"], &[("0", "1"), ("1", "2"), ("0", "2")]).unwrap()
    }

    fn two_cycle() -> Digraph {
        Digraph::from_labels(&["a", "b"], &[("a", "b"), ("b", "a")]).unwrap()
    }

    fn mask(g: &Digraph, ids: &[&str]) -> Subset {
        g.vertices().subset(ids).unwrap()
    }

    #[test]
    fn g3_is_the_unique_three_edge_graph_with_its_lower_halves() {
        let lim = Limits::default();
        let want = vec![Subset(0), Subset(0b001), Subset(0b011), Subset(0b111)];
        let pairs: Vec<(usize, usize)> = (0..3)
            .flat_map(|u| (0..3).map(move |v| (u, v)))
            .filter(|(u, v)| u != v)
            .collect();
        let mut matches = Vec::new();
        for bits in 0u32..1 << pairs.len() {
            if bits.count_ones() != 3 {
                continue;
            }
            let edges = (0..pairs.len()).filter(|i| bits >> i & 1 == 1).map(|i| pairs[i]).collect();
            let g = Digraph::new(LabelSet::range(3), edges).unwrap();
            if g.lower_halves(&lim).unwrap() == want {
                matches.push(g);
            }
        }
        assert_eq!(matches, vec![g3()]);
    }

    #[test]
    fn construction_rejects_loops_and_parallel_edges() {
        assert!(Digraph::from_labels(&["a"], &[("a", "a")]).is_err());
        assert!(Digraph::from_labels(&["a", "b"], &[("a", "b"), ("a", "b")]).is_err());
        assert!(Digraph::new(LabelSet::range(2), vec![(0, 2)]).is_err());
    }

    #[test]
    fn relabel_examples() {
        let g = Digraph::from_labels(&["0", "1"], &[("0", "1")]).unwrap();
        let id: BTreeMap<Label, Label> = g
            .vertices()
            .labels()
            .iter()
            .map(|l| (l.clone(), l.clone()))
            .collect();
        assert_eq!(g.relabel(&id).unwrap(), g);

        let sigma: BTreeMap<Label, Label> = [("0", "a"), ("1", "b")]
            .iter()
            .map(|(x, y)| (Label::new(x).unwrap(), Label::new(y).unwrap()))
            .collect();
        let h = g.relabel(&sigma).unwrap();
        assert_eq!(h, Digraph::from_labels(&["a", "b"], &[("a", "b")]).unwrap());

        let tau: BTreeMap<Label, Label> = [("a", "y"), ("b", "x")]
            .iter()
            .map(|(x, y)| (Label::new(x).unwrap(), Label::new(y).unwrap()))
            .collect();
        let composed: BTreeMap<Label, Label> = sigma
            .iter()
            .map(|(k, v)| (k.clone(), tau[v].clone()))
            .collect();
        assert_eq!(
            h.relabel(&tau).unwrap(),
            g.relabel(&composed).unwrap()
        );
    }

    #[test]
    fn relabel_rejects_non_bijections() {
        let g = Digraph::edgeless(LabelSet::from_strs(["a", "b"]).unwrap());
        let partial: BTreeMap<Label, Label> =
            [(Label::new("a").unwrap(), Label::new("x").unwrap())].into();
        assert!(matches!(g.relabel(&partial), Err(Error::Bijection(_))));
        let collapsing: BTreeMap<Label, Label> = [
            (Label::new("a").unwrap(), Label::new("x").unwrap()),
            (Label::new("b").unwrap(), Label::new("x").unwrap()),
        ]
        .into();
        assert!(matches!(g.relabel(&collapsing), Err(Error::Bijection(_))));
    }

    #[test]
    fn restrict_examples() {
        let g = g3();
        let r = g.restrict(mask(&g, &["0", "1"])).unwrap();
        assert_eq!(r, Digraph::from_labels(&["0", "1"], &[("0", "1")]).unwrap());
        assert_eq!(g.restrict(g.vertices().full()).unwrap(), g);
        assert_eq!(g.restrict(Subset::EMPTY).unwrap(), Digraph::empty());
        assert_eq!(g.restrict(Subset(0b1000)), Err(Error::Domain));
    }

    #[test]
    fn product_examples() {
        let a = Digraph::edgeless(LabelSet::from_strs(["a"]).unwrap());
        let b = Digraph::edgeless(LabelSet::from_strs(["b"]).unwrap());
        assert_eq!(
            a.product(&b).unwrap(),
            Digraph::edgeless(LabelSet::from_strs(["a", "b"]).unwrap())
        );
        let g = g3();
        assert_eq!(g.product(&Digraph::empty()).unwrap(), g);
        let h = Digraph::from_labels(&["x", "y"], &[("y", "x")]).unwrap();
        let gh = g.product(&h).unwrap();
        assert_eq!(gh.edge_count(), 4);
        assert_eq!(gh, h.product(&g).unwrap());
        assert!(matches!(g.product(&g), Err(Error::NotDisjoint(_))));
    }

    #[test]
    fn lower_half_examples() {
        let g = g3();
        assert!(g.is_lower_half(mask(&g, &["0", "1"])).unwrap());
        assert!(!g.is_lower_half(mask(&g, &["1"])).unwrap());
        assert!(g.is_lower_half(Subset::EMPTY).unwrap());
        assert!(g.is_lower_half(g.vertices().full()).unwrap());
    }

    #[test]
    fn lower_halves_examples() {
        let lim = Limits::default();
        assert_eq!(
            g3().lower_halves(&lim).unwrap(),
            vec![Subset(0), Subset(0b001), Subset(0b011), Subset(0b111)]
        );
        assert_eq!(
            Digraph::edgeless(LabelSet::range(4)).lower_halves(&lim).unwrap().len(),
            16
        );
        assert_eq!(
            two_cycle().lower_halves(&lim).unwrap(),
            vec![Subset(0), Subset(0b11)]
        );
    }

    #[test]
    fn coproduct_examples() {
        let g = g3();
        let (l, r) = g.coproduct(mask(&g, &["0", "1"])).unwrap().unwrap();
        assert_eq!(l, Digraph::from_labels(&["0", "1"], &[("0", "1")]).unwrap());
        assert_eq!(r, Digraph::edgeless(LabelSet::from_strs(["2"]).unwrap()));
        assert_eq!(g.coproduct(mask(&g, &["1", "2"])).unwrap(), None);
        let (l, r) = g.coproduct(Subset::EMPTY).unwrap().unwrap();
        assert_eq!((l, r), (Digraph::empty(), g));
    }

    #[test]
    fn mu_delta_examples() {
        let g = g3();
        let s = |ids: &[&str]| mask(&g, ids);
        let c = Composition::new(3, vec![s(&["0"]), s(&["1"]), s(&["2"])]).unwrap();
        assert_eq!(
            g.mu_delta(&c).unwrap(),
            Some(Digraph::edgeless(LabelSet::range(3)))
        );
        let c = Composition::new(3, vec![s(&["0", "1"]), s(&["2"])]).unwrap();
        assert_eq!(
            g.mu_delta(&c).unwrap(),
            Some(Digraph::new(LabelSet::range(3), vec![(0, 1)]).unwrap())
        );
        let c = Composition::new(3, vec![s(&["1"]), s(&["0", "2"])]).unwrap();
        assert_eq!(g.mu_delta(&c).unwrap(), None);
    }

    #[test]
    fn acyclicity() {
        assert!(g3().is_acyclic());
        assert!(!two_cycle().is_acyclic());
        let c3 = Digraph::from_labels(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("c", "a")])
            .unwrap();
        assert!(!c3.is_acyclic());
        assert!(Digraph::empty().is_acyclic());
    }

    #[test]
    fn parse_and_print() {
        let text = "# G3\nvertices: 0 1 2\n0 -> 1\n1 -> 2  # chain\n0 -> 2\n";
        let g = Digraph::parse(text).unwrap();
        assert_eq!(g, g3());
        assert_eq!(Digraph::parse(&g.to_text()).unwrap(), g);
        assert_eq!(Digraph::parse("vertices:\n").unwrap(), Digraph::empty());
    }

    #[test]
    fn parse_errors_carry_positions() {
        let bad = "vertices: a b\na -> c\n";
        match Digraph::parse(bad) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 6)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            Digraph::parse("a -> b\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            Digraph::parse("vertices: a b\na b\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            Digraph::parse("vertices: a\na -> a\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(Digraph::parse(""), Err(Error::Parse { .. })));
    }
}
