//! Labelled defining graphs of Artin systems, their standard presentations,
//! finite-type recognition and graph-level certificates.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::freegroup::{AbMap, FreeWord};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("invalid graph JSON at line {line}, column {column}: {msg}")]
    Json { line: usize, column: usize, msg: String },
    #[error("{field}: {msg}")]
    Field { field: String, msg: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArtinError {
    #[error("odd dihedral label needs m >= 1, got {0}")]
    BadParameter(i64),
    #[error("{0}")]
    Precondition(String),
    #[error("certificate check failed: {0}")]
    CertificateFailed(String),
}

/// How pairs of vertices that are not joined by an edge are read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    /// Non-edges carry label 2 (the generators commute).
    #[default]
    Complete,
    /// Non-edges carry no relation.
    FreeProduct,
}

/// Defining graph: vertex names and labelled edges, labels `>= 3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    vertices: Vec<String>,
    edges: BTreeMap<(usize, usize), u32>,
}

#[derive(Serialize, Deserialize)]
struct GraphFile {
    vertices: Vec<String>,
    #[serde(default)]
    edges: Vec<EdgeFile>,
}

#[derive(Serialize, Deserialize)]
struct EdgeFile {
    u: String,
    v: String,
    label: i64,
}

fn key(i: usize, j: usize) -> (usize, usize) {
    if i < j {
        (i, j)
    } else {
        (j, i)
    }
}

impl LabeledGraph {
    pub fn new<S: Into<String>>(vertices: impl IntoIterator<Item = S>) -> Self {
        LabeledGraph { vertices: vertices.into_iter().map(Into::into).collect(), edges: BTreeMap::new() }
    }

    /// Vertices `s1..sn`.
    pub fn with_vertices(n: usize) -> Self {
        Self::new((1..=n).map(|i| format!("s{i}")))
    }

    /// Adds or replaces an edge; label 2 removes the edge.
    pub fn set_label(&mut self, i: usize, j: usize, label: u32) {
        assert!(i != j && i < self.len() && j < self.len(), "bad edge ({i}, {j})");
        assert!(label >= 2, "labels are at least 2");
        if label == 2 {
            self.edges.remove(&key(i, j));
        } else {
            self.edges.insert(key(i, j), label);
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> impl Iterator<Item = ((usize, usize), u32)> + '_ {
        self.edges.iter().map(|(&k, &l)| (k, l))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges.contains_key(&key(i, j))
    }

    /// Label of the pair; 2 for non-edges.
    pub fn label(&self, i: usize, j: usize) -> u32 {
        self.edges.get(&key(i, j)).copied().unwrap_or(2)
    }

    /// Whether `s_i s_j = s_j s_i` is one of the defining relations.
    pub fn commute(&self, i: usize, j: usize, conv: Convention) -> bool {
        !self.has_edge(i, j) && conv == Convention::Complete
    }

    pub fn neighbours(&self, i: usize) -> Vec<usize> {
        (0..self.len()).filter(|&j| j != i && self.has_edge(i, j)).collect()
    }

    /// Relabels vertices: vertex `i` becomes vertex `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut names = vec![String::new(); self.len()];
        for (i, &p) in perm.iter().enumerate() {
            names[p] = self.vertices[i].clone();
        }
        let mut g = LabeledGraph::new(names);
        for (&(i, j), &l) in &self.edges {
            g.set_label(perm[i], perm[j], l);
        }
        g
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        let file: GraphFile = serde_json::from_str(text).map_err(|e| GraphError::Json {
            line: e.line(),
            column: e.column(),
            msg: e.to_string(),
        })?;
        let mut index = BTreeMap::new();
        for (i, v) in file.vertices.iter().enumerate() {
            if v.is_empty() {
                return Err(GraphError::Field { field: format!("vertices[{i}]"), msg: "empty name".into() });
            }
            if index.insert(v.clone(), i).is_some() {
                return Err(GraphError::Field {
                    field: format!("vertices[{i}]"),
                    msg: format!("duplicate vertex '{v}'"),
                });
            }
        }
        let mut g = LabeledGraph::new(file.vertices.clone());
        for (k, e) in file.edges.iter().enumerate() {
            let lookup = |name: &str, f: &str| {
                index.get(name).copied().ok_or_else(|| GraphError::Field {
                    field: format!("edges[{k}].{f}"),
                    msg: format!("unknown vertex '{name}'"),
                })
            };
            let u = lookup(&e.u, "u")?;
            let v = lookup(&e.v, "v")?;
            if u == v {
                return Err(GraphError::Field { field: format!("edges[{k}]"), msg: "self-loop".into() });
            }
            if e.label < 3 || e.label > u32::MAX as i64 {
                return Err(GraphError::Field {
                    field: format!("edges[{k}].label"),
                    msg: format!("label must be at least 3, got {}", e.label),
                });
            }
            if g.has_edge(u, v) {
                return Err(GraphError::Field {
                    field: format!("edges[{k}]"),
                    msg: format!("duplicate edge {{{}, {}}}", e.u, e.v),
                });
            }
            g.set_label(u, v, e.label as u32);
        }
        Ok(g)
    }

    pub fn to_json(&self) -> String {
        let file = GraphFile {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|(&(i, j), &l)| EdgeFile {
                    u: self.vertices[i].clone(),
                    v: self.vertices[j].clone(),
                    label: l as i64,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("graph serializes")
    }

    /// Connected components of the subgraph keeping the edges accepted by
    /// `keep`, each sorted, ordered by smallest vertex.
    pub fn components(&self, keep: impl Fn(u32) -> bool) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                #[allow(clippy::needless_range_loop)]
                for w in 0..n {
                    if !seen[w] && w != v && self.has_edge(v, w) && keep(self.label(v, w)) {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    fn odd_edges(&self) -> Vec<(usize, usize, u32)> {
        self.edges.iter().filter(|(_, &l)| l % 2 == 1).map(|(&(i, j), &l)| (i, j, l)).collect()
    }
}

/// Generators and relators of a finitely presented group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relators: Vec<FreeWord>,
}

impl Presentation {
    pub fn new(generators: Vec<String>, relators: Vec<FreeWord>) -> Self {
        Presentation { generators, relators }
    }
}

/// Alternating word `a b a b ...` of length `len`.
pub fn alternating(a: usize, b: usize, len: u32) -> FreeWord {
    FreeWord::from_syllables((0..len).map(|k| (if k % 2 == 0 { a } else { b }, 1)))
}

/// Relator `u(s_i, s_j) u(s_j, s_i)^-1` with alternating words of length `label`.
pub fn artin_relator(i: usize, j: usize, label: u32) -> FreeWord {
    alternating(i, j, label).concat(&alternating(j, i, label).invert())
}

/// One relator per vertex pair `i < j` (pairs without relation skipped under
/// the free-product convention).
pub fn standard_presentation(g: &LabeledGraph, conv: Convention) -> Presentation {
    let n = g.len();
    let mut relators = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if g.has_edge(i, j) || conv == Convention::Complete {
                relators.push(artin_relator(i, j, g.label(i, j)));
            }
        }
    }
    Presentation::new(g.vertices.clone(), relators)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    D,
    E,
    F,
    H,
    I2,
}

/// Irreducible finite Coxeter type; `param` is the rank, or the label for `I2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TypeTag {
    pub family: Family,
    pub param: u32,
}

impl TypeTag {
    pub fn new(family: Family, param: u32) -> Result<Self, String> {
        let ok = match family {
            Family::A => param >= 1,
            Family::B => param >= 2,
            Family::D => param >= 4,
            Family::E => (6..=8).contains(&param),
            Family::F => param == 4,
            Family::H => (3..=4).contains(&param),
            Family::I2 => param >= 3,
        };
        if ok {
            Ok(TypeTag { family, param })
        } else {
            Err(format!("parameter {param} out of range for family {family:?}"))
        }
    }

    /// Number of generators.
    pub fn rank(&self) -> usize {
        match self.family {
            Family::I2 => 2,
            _ => self.param as usize,
        }
    }

    /// The Coxeter graph with vertices `s1..sn` in the conventional numbering.
    pub fn coxeter_graph(&self) -> LabeledGraph {
        let n = self.rank();
        let mut g = LabeledGraph::with_vertices(n);
        let path = |g: &mut LabeledGraph, len: usize| {
            for i in 0..len.saturating_sub(1) {
                g.set_label(i, i + 1, 3);
            }
        };
        match self.family {
            Family::A => path(&mut g, n),
            Family::B => {
                path(&mut g, n);
                g.set_label(n - 2, n - 1, 4);
            }
            Family::F => {
                path(&mut g, 4);
                g.set_label(1, 2, 4);
            }
            Family::H => {
                path(&mut g, n);
                g.set_label(n - 2, n - 1, 5);
            }
            Family::D => {
                path(&mut g, n - 1);
                g.set_label(n - 3, n - 1, 3);
            }
            Family::E => {
                path(&mut g, n - 1);
                g.set_label(2, n - 1, 3);
            }
            Family::I2 => g.set_label(0, 1, self.param),
        }
        g
    }
}

impl fmt::Display for TypeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::I2 => write!(f, "I2({})", self.param),
            fam => write!(f, "{:?}{}", fam, self.param),
        }
    }
}

impl FromStr for TypeTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("I2(").and_then(|r| r.strip_suffix(')')) {
            let m = rest.parse().map_err(|_| format!("bad label in '{s}'"))?;
            return TypeTag::new(Family::I2, m);
        }
        let (head, tail) = s.split_at(s.find(|c: char| c.is_ascii_digit()).unwrap_or(s.len()));
        let family = match head {
            "A" => Family::A,
            "B" => Family::B,
            "D" => Family::D,
            "E" => Family::E,
            "F" => Family::F,
            "H" => Family::H,
            _ => return Err(format!("unknown type '{s}'")),
        };
        let n = tail.parse().map_err(|_| format!("bad rank in '{s}'"))?;
        TypeTag::new(family, n)
    }
}

/// Types of the components of the Coxeter graph (edges with label `>= 3`),
/// ordered by smallest vertex; `None` when some component is not of finite type.
pub fn classify_finite_type(g: &LabeledGraph) -> Option<Vec<TypeTag>> {
    g.components(|_| true).iter().map(|c| classify_component(g, c)).collect()
}

fn classify_component(g: &LabeledGraph, comp: &[usize]) -> Option<TypeTag> {
    let n = comp.len();
    let tag = |f, p| Some(TypeTag { family: f, param: p });
    if n == 1 {
        return tag(Family::A, 1);
    }
    let edges: Vec<(usize, usize, u32)> =
        g.edges().filter(|((i, _), _)| comp.contains(i)).map(|((i, j), l)| (i, j, l)).collect();
    if edges.len() != n - 1 {
        return None;
    }
    let deg = |v: usize| edges.iter().filter(|e| e.0 == v || e.1 == v).count();
    let maxdeg = comp.iter().map(|&v| deg(v)).max()?;
    if maxdeg <= 2 {
        // Path: read labels from one end.
        let start = *comp.iter().find(|&&v| deg(v) == 1)?;
        let mut labels = Vec::new();
        let (mut prev, mut cur) = (usize::MAX, start);
        loop {
            let next = edges.iter().find_map(|&(i, j, l)| {
                if i == cur && j != prev {
                    Some((j, l))
                } else if j == cur && i != prev {
                    Some((i, l))
                } else {
                    None
                }
            });
            match next {
                Some((w, l)) => {
                    labels.push(l);
                    prev = cur;
                    cur = w;
                }
                None => break,
            }
        }
        let nn = n as u32;
        if n == 2 {
            return match labels[0] {
                3 => tag(Family::A, 2),
                4 => tag(Family::B, 2),
                m => tag(Family::I2, m),
            };
        }
        let odd: Vec<usize> = (0..labels.len()).filter(|&k| labels[k] != 3).collect();
        return match odd.as_slice() {
            [] => tag(Family::A, nn),
            [k] => {
                let end = *k == 0 || *k == labels.len() - 1;
                match labels[*k] {
                    4 if end => tag(Family::B, nn),
                    4 if n == 4 => tag(Family::F, 4),
                    5 if end && n <= 4 => tag(Family::H, nn),
                    _ => None,
                }
            }
            _ => None,
        };
    }
    if maxdeg > 3 || edges.iter().any(|e| e.2 != 3) {
        return None;
    }
    let branch: Vec<usize> = comp.iter().copied().filter(|&v| deg(v) == 3).collect();
    if branch.len() != 1 {
        return None;
    }
    let c = branch[0];
    let mut arms: Vec<usize> = Vec::new();
    for &(i, j, _) in edges.iter().filter(|e| e.0 == c || e.1 == c) {
        let mut len = 1;
        let (mut prev, mut cur) = (c, if i == c { j } else { i });
        loop {
            let next = edges.iter().find_map(|&(a, b, _)| {
                if a == cur && b != prev {
                    Some(b)
                } else if b == cur && a != prev {
                    Some(a)
                } else {
                    None
                }
            });
            match next {
                Some(w) => {
                    prev = cur;
                    cur = w;
                    len += 1;
                }
                None => break,
            }
        }
        arms.push(len);
    }
    arms.sort_unstable();
    match arms.as_slice() {
        [1, 1, c] => tag(Family::D, *c as u32 + 3),
        [1, 2, 2] => tag(Family::E, 6),
        [1, 2, 3] => tag(Family::E, 7),
        [1, 2, 4] => tag(Family::E, 8),
        _ => None,
    }
}

/// Abelianization: components of the odd-label subgraph, each generator
/// sent to the basis vector of its component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianizationData {
    pub rank: usize,
    pub map: AbMap,
    pub components: Vec<Vec<usize>>,
}

pub fn abelianization_structure(g: &LabeledGraph) -> AbelianizationData {
    let components = g.components(|l| l % 2 == 1);
    let rank = components.len();
    let mut images = vec![vec![0; rank]; g.len()];
    for (c, comp) in components.iter().enumerate() {
        for &v in comp {
            images[v][c] = 1;
        }
    }
    AbelianizationData { rank, map: AbMap::new(rank, images), components }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// `f = sum (label - 1)` over a spanning tree of the odd subgraph minimizing
/// it; `None` unless the odd subgraph is connected and spanning.
pub fn derived_generators_bound(g: &LabeledGraph) -> Option<u64> {
    let n = g.len();
    if n == 0 {
        return None;
    }
    let mut edges = g.odd_edges();
    edges.sort_by_key(|&(i, j, l)| (l, i, j));
    let mut uf = UnionFind::new(n);
    let mut total = 0u64;
    let mut used = 0;
    for (i, j, l) in edges {
        if uf.union(i, j) {
            total += u64::from(l - 1);
            used += 1;
        }
    }
    (used == n - 1).then_some(total)
}

/// Spanning trees of the odd subgraph, edge sets in lexicographic order,
/// at most `cap` of them.
pub fn odd_spanning_trees(g: &LabeledGraph, cap: usize) -> Vec<Vec<(usize, usize)>> {
    let n = g.len();
    let edges: Vec<(usize, usize)> = g.odd_edges().into_iter().map(|(i, j, _)| (i, j)).collect();
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    fn rec(
        edges: &[(usize, usize)],
        k: usize,
        need: usize,
        chosen: &mut Vec<(usize, usize)>,
        n: usize,
        cap: usize,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if out.len() >= cap {
            return;
        }
        if chosen.len() == need {
            out.push(chosen.clone());
            return;
        }
        if edges.len() - k < need - chosen.len() {
            return;
        }
        // include edges[k] if it keeps the chosen set a forest
        let mut uf = UnionFind::new(n);
        for &(a, b) in chosen.iter() {
            uf.union(a, b);
        }
        let (a, b) = edges[k];
        if uf.find(a) != uf.find(b) {
            chosen.push(edges[k]);
            rec(edges, k + 1, need, chosen, n, cap, out);
            chosen.pop();
        }
        rec(edges, k + 1, need, chosen, n, cap, out);
    }
    rec(&edges, 0, n - 1, &mut Vec::new(), n, cap, &mut out);
    out
}

/// Tree distances from every vertex (BFS), `usize::MAX` when unreachable.
fn tree_distances(n: usize, tree: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in tree {
        adj[a].push(b);
        adj[b].push(a);
    }
    (0..n)
        .map(|s| {
            let mut d = vec![usize::MAX; n];
            d[s] = 0;
            let mut q = VecDeque::from([s]);
            while let Some(v) = q.pop_front() {
                for &w in &adj[v] {
                    if d[w] == usize::MAX {
                        d[w] = d[v] + 1;
                        q.push_back(w);
                    }
                }
            }
            d
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PerfectnessWitness {
    /// Path `a-b-c-d` of tree edges labelled 3 spanning a subsystem of type A4.
    A4Segment([usize; 4]),
    /// Adjacent tree edges `a-b` (label 3) and `b-c` (label 5) spanning a
    /// subsystem of type H3.
    H3Pair([usize; 3]),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerfectnessCertificate {
    pub tree: Vec<(usize, usize)>,
    pub witness: PerfectnessWitness,
}

/// Maximum number of spanning trees examined by the certificate search.
pub const SPANNING_TREE_CAP: usize = 20_000;

/// Searches an odd spanning tree whose distance-2 pairs commute and which
/// contains an A4 segment or an H3 pair. `None` is inconclusive.
pub fn perfectness_structural_certificate(g: &LabeledGraph, conv: Convention) -> Option<PerfectnessCertificate> {
    let n = g.len();
    for tree in odd_spanning_trees(g, SPANNING_TREE_CAP) {
        let dist = tree_distances(n, &tree);
        let ok = (0..n).all(|a| (a + 1..n).all(|b| dist[a][b] != 2 || g.commute(a, b, conv)));
        if !ok {
            continue;
        }
        let tset: BTreeSet<(usize, usize)> = tree.iter().copied().collect();
        let in_tree = |a: usize, b: usize| tset.contains(&key(a, b));
        let nbrs = |v: usize| -> Vec<usize> { (0..n).filter(|&w| in_tree(v, w)).collect() };
        let mut witness = None;
        'search: for b in 0..n {
            for &a in &nbrs(b) {
                for &c in &nbrs(b) {
                    if a == c {
                        continue;
                    }
                    if g.label(a, b) == 3 && g.label(b, c) == 5 && g.commute(a, c, conv) {
                        witness = Some(PerfectnessWitness::H3Pair([a, b, c]));
                        break 'search;
                    }
                    if g.label(a, b) != 3 || g.label(b, c) != 3 {
                        continue;
                    }
                    for &d in &nbrs(c) {
                        if d == b || g.label(c, d) != 3 {
                            continue;
                        }
                        if a < d && g.commute(a, c, conv) && g.commute(b, d, conv) && g.commute(a, d, conv) {
                            witness = Some(PerfectnessWitness::A4Segment([a, b, c, d]));
                            break 'search;
                        }
                    }
                }
            }
        }
        if let Some(witness) = witness {
            return Some(PerfectnessCertificate { tree, witness });
        }
    }
    None
}

/// `2m` when all edges carry one odd label `2m+1`, form a spanning tree and
/// every commuting pair lies at even tree distance: then the derived group
/// maps onto a free group of rank `2m`.
pub fn free_quotient_obstruction(g: &LabeledGraph, conv: Convention) -> Option<u32> {
    let n = g.len();
    let labels: BTreeSet<u32> = g.edges().map(|(_, l)| l).collect();
    if labels.len() != 1 || n < 2 {
        return None;
    }
    let label = *labels.iter().next()?;
    if label % 2 == 0 || g.edge_count() != n - 1 || g.components(|_| true).len() != 1 {
        return None;
    }
    let tree: Vec<(usize, usize)> = g.edges().map(|(k, _)| k).collect();
    let dist = tree_distances(n, &tree);
    let parity_ok = (0..n).all(|a| (a + 1..n).all(|b| !g.commute(a, b, conv) || dist[a][b].is_multiple_of(2)));
    parity_ok.then_some(label - 1)
}

/// Rewrites a word in `s` (generator 0) and `s'` (generator 1), of total
/// exponent zero under `s, s' -> 1`, in the conjugates `a_n = s^n a s^-n` of
/// `a = s' s^-1`. The result uses generator index `n` for `a_n`.
pub fn rewrite_in_conjugates(w: &FreeWord) -> Result<Vec<(usize, i64)>, ArtinError> {
    let mut p: i64 = 0;
    let mut out = Vec::new();
    for (g, e) in w.letters() {
        match (g, e) {
            (0, 1) => p += 1,
            (0, _) => p -= 1,
            (1, 1) => {
                out.push((p, 1));
                p += 1;
            }
            (1, _) => {
                p -= 1;
                out.push((p, -1));
            }
            _ => return Err(ArtinError::Precondition(format!("generator {g} is neither s nor s'"))),
        }
        if p < 0 {
            // Indices below zero are fine for the free basis but never occur
            // for the words handled here.
            return Err(ArtinError::CertificateFailed("negative conjugate index".into()));
        }
    }
    if p != 0 {
        return Err(ArtinError::Precondition("word is not in the kernel of s, s' -> 1".into()));
    }
    Ok(out.into_iter().map(|(i, e)| (i as usize, e)).collect())
}

/// Output of the odd-label two-generator rewriting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OddDihedral {
    pub free_rank: u32,
    /// `r0` as syllables `(index n of a_n, ±1)`.
    pub r0: Vec<(usize, i64)>,
}

impl OddDihedral {
    pub fn render(&self) -> String {
        self.r0
            .iter()
            .map(|&(i, e)| if e == 1 { format!("a{i}") } else { format!("a{i}^-1") })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Checks that the rewritten relator splits into an increasing positive
/// part and a negative part whose inverse is increasing, with the lowest
/// and highest index each occurring once and all indices in `[0, top]`.
fn staircase_check(r0: &[(usize, i64)], top: usize) -> Result<(), ArtinError> {
    let split = r0.iter().position(|&(_, e)| e < 0).unwrap_or(r0.len());
    let (pos, neg) = r0.split_at(split);
    if neg.iter().any(|&(_, e)| e > 0) {
        return Err(ArtinError::CertificateFailed("positive letter after a negative one".into()));
    }
    if !pos.windows(2).all(|w| w[0].0 < w[1].0) {
        return Err(ArtinError::CertificateFailed("indices not increasing in the positive part".into()));
    }
    if !neg.windows(2).all(|w| w[0].0 > w[1].0) {
        return Err(ArtinError::CertificateFailed("indices not increasing in the negative part".into()));
    }
    if r0.iter().any(|&(i, _)| i > top) {
        return Err(ArtinError::CertificateFailed(format!("index above {top}")));
    }
    for k in [0, top] {
        let c = r0.iter().filter(|&&(i, _)| i == k).count();
        if c != 1 {
            return Err(ArtinError::CertificateFailed(format!("a{k} occurs {c} times")));
        }
    }
    Ok(())
}

/// Group of type `I2(2m+1)`: rewriting the relator in the conjugates of
/// `a = s' s^-1` yields the staircase relator `r0`; the derived group is
/// free of rank `2m`.
pub fn odd_dihedral_derived(m: i64) -> Result<OddDihedral, ArtinError> {
    if m < 1 {
        return Err(ArtinError::BadParameter(m));
    }
    let r = artin_relator(0, 1, (2 * m + 1) as u32);
    let r0 = rewrite_in_conjugates(&r)?;
    staircase_check(&r0, 2 * m as usize)?;
    Ok(OddDihedral { free_rank: 2 * m as u32, r0 })
}

/// Kernel rank `l - 1` for the one-relator group `v1 = v2` in `s`, `s'`
/// (generators 0 and 1) under the generalized two-generator conditions.
pub fn generalized_artin_certificate(v1: &FreeWord, v2: &FreeWord) -> Result<u32, ArtinError> {
    let pre = |msg: &str| Err(ArtinError::Precondition(msg.to_string()));
    for (name, v) in [("v1", v1), ("v2", v2)] {
        if v.is_empty() {
            return pre(&format!("{name} is empty"));
        }
        if v.syllables().iter().any(|&(_, e)| e < 0) {
            return pre(&format!("{name} is not a positive word"));
        }
        if v.generator_bound() > 2 {
            return pre(&format!("{name} uses a generator other than s, s'"));
        }
    }
    let l = v1.len();
    if v2.len() != l {
        return pre("lengths differ");
    }
    if l.is_multiple_of(2) {
        return pre("length is even");
    }
    let m = (l - 1) / 2;
    let first = |v: &FreeWord| v.syllables()[0].0;
    let last = |v: &FreeWord| v.syllables()[v.syllables().len() - 1].0;
    if first(v1) == first(v2) {
        return pre("initial letters equal");
    }
    if last(v1) == last(v2) {
        return pre("terminal letters equal");
    }
    if v1.exponent_sums(2)[0] as usize != m + 1 {
        return pre("s must occur m+1 times in v1");
    }
    if v2.exponent_sums(2)[1] as usize != m + 1 {
        return pre("s' must occur m+1 times in v2");
    }
    // Take s to be the initial letter of v1.
    let swap = [FreeWord::generator(1), FreeWord::generator(0)];
    let (v1, v2) = if first(v1) == 0 { (v1.clone(), v2.clone()) } else { (v1.substitute(&swap), v2.substitute(&swap)) };
    let r0 = rewrite_in_conjugates(&v1.concat(&v2.invert()))?;
    let top = l - 1;
    staircase_check(&r0, top)?;
    Ok(top as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freegroup::{parse_word, NameTable};

    fn tag(s: &str) -> TypeTag {
        s.parse().unwrap()
    }

    fn w(s: &str) -> FreeWord {
        parse_word(s, &mut NameTable::declared(&["s1", "s2", "s3"])).unwrap()
    }

    #[test]
    fn presentations() {
        let p = standard_presentation(&tag("I2(3)").coxeter_graph(), Convention::Complete);
        assert_eq!(p.relators, vec![w("s1 s2 s1").concat(&w("s2 s1 s2").invert())]);
        let p = standard_presentation(&tag("A3").coxeter_graph(), Convention::Complete);
        assert_eq!(p.relators.len(), 3);
        assert_eq!(p.relators[1], w("s1 s3 s1^-1 s3^-1"));
        let p = standard_presentation(&LabeledGraph::with_vertices(2), Convention::Complete);
        assert_eq!(p.relators, vec![w("s1 s2 s1^-1 s2^-1")]);
        let p = standard_presentation(&LabeledGraph::with_vertices(2), Convention::FreeProduct);
        assert!(p.relators.is_empty());
    }

    #[test]
    fn classification() {
        let mut g = LabeledGraph::with_vertices(4);
        for i in 0..3 {
            g.set_label(i, i + 1, 3);
        }
        assert_eq!(classify_finite_type(&g), Some(vec![tag("A4")]));
        let mut g = LabeledGraph::with_vertices(3);
        g.set_label(0, 1, 3);
        g.set_label(1, 2, 4);
        assert_eq!(classify_finite_type(&g), Some(vec![tag("B3")]));
        g.set_label(0, 2, 3);
        g.set_label(1, 2, 3);
        assert_eq!(classify_finite_type(&g), None);
        for t in ["A1", "A7", "B2", "B8", "D4", "D8", "E6", "E7", "E8", "F4", "H3", "H4", "I2(5)", "I2(12)"] {
            assert_eq!(classify_finite_type(&tag(t).coxeter_graph()), Some(vec![tag(t)]), "{t}");
        }
        assert_eq!(classify_finite_type(&tag("I2(3)").coxeter_graph()), Some(vec![tag("A2")]));
        assert_eq!(classify_finite_type(&tag("I2(4)").coxeter_graph()), Some(vec![tag("B2")]));
        assert_eq!(classify_finite_type(&LabeledGraph::with_vertices(2)), Some(vec![tag("A1"), tag("A1")]));
    }

    #[test]
    fn abelianization() {
        let a = abelianization_structure(&tag("A5").coxeter_graph());
        assert_eq!(a.rank, 1);
        assert!(a.map.images.iter().all(|v| v == &vec![1]));
        let b = abelianization_structure(&tag("B4").coxeter_graph());
        assert_eq!(b.rank, 2);
        assert_eq!(b.map.images, vec![vec![1, 0], vec![1, 0], vec![1, 0], vec![0, 1]]);
        assert_eq!(abelianization_structure(&LabeledGraph::with_vertices(3)).rank, 3);
    }

    #[test]
    fn generator_bounds() {
        assert_eq!(derived_generators_bound(&tag("I2(5)").coxeter_graph()), Some(4));
        assert_eq!(derived_generators_bound(&tag("A3").coxeter_graph()), Some(4));
        assert_eq!(derived_generators_bound(&tag("B2").coxeter_graph()), None);
        let mut tri = LabeledGraph::with_vertices(3);
        tri.set_label(0, 1, 5);
        tri.set_label(1, 2, 3);
        tri.set_label(0, 2, 3);
        assert_eq!(derived_generators_bound(&tri), Some(4));
    }

    #[test]
    fn perfectness_certificates() {
        let c = perfectness_structural_certificate(&tag("A5").coxeter_graph(), Convention::Complete).unwrap();
        assert!(matches!(c.witness, PerfectnessWitness::A4Segment(_)));
        let c = perfectness_structural_certificate(&tag("H4").coxeter_graph(), Convention::Complete).unwrap();
        assert_eq!(c.witness, PerfectnessWitness::H3Pair([1, 2, 3]));
        assert!(perfectness_structural_certificate(&tag("I2(3)").coxeter_graph(), Convention::Complete).is_none());
        assert!(perfectness_structural_certificate(&tag("A3").coxeter_graph(), Convention::Complete).is_none());
        assert!(perfectness_structural_certificate(&tag("D4").coxeter_graph(), Convention::Complete).is_none());
        assert!(perfectness_structural_certificate(&tag("A5").coxeter_graph(), Convention::FreeProduct).is_none());
    }

    #[test]
    fn free_quotients() {
        assert_eq!(free_quotient_obstruction(&tag("I2(5)").coxeter_graph(), Convention::Complete), Some(4));
        assert_eq!(free_quotient_obstruction(&tag("A4").coxeter_graph(), Convention::Complete), None);
        let mut star = LabeledGraph::with_vertices(4);
        for leaf in 1..4 {
            star.set_label(0, leaf, 5);
        }
        assert_eq!(free_quotient_obstruction(&star, Convention::Complete), Some(4));
        assert_eq!(free_quotient_obstruction(&tag("A4").coxeter_graph(), Convention::FreeProduct), Some(2));
    }

    #[test]
    fn odd_dihedral() {
        let d = odd_dihedral_derived(1).unwrap();
        assert_eq!((d.free_rank, d.render().as_str()), (2, "a1 a2^-1 a0^-1"));
        let d = odd_dihedral_derived(2).unwrap();
        assert_eq!((d.free_rank, d.render().as_str()), (4, "a1 a3 a4^-1 a2^-1 a0^-1"));
        assert_eq!(odd_dihedral_derived(3).unwrap().free_rank, 6);
        assert_eq!(odd_dihedral_derived(0), Err(ArtinError::BadParameter(0)));
    }

    #[test]
    fn generalized_certificates() {
        let n = ["s", "s'"];
        let p = |t: &str| parse_word(t, &mut NameTable::declared(&n)).unwrap();
        for m in 1..=4i64 {
            let v1 = p("s s'").pow(m).concat(&p("s"));
            let v2 = p("s' s").pow(m).concat(&p("s'"));
            assert_eq!(generalized_artin_certificate(&v1, &v2), Ok(2 * m as u32));
        }
        assert_eq!(generalized_artin_certificate(&p("s s' s"), &p("s' s s'")), Ok(2));
        assert_eq!(generalized_artin_certificate(&p("s^2 s'^2 s"), &p("s' s^2 s'^2")), Ok(4));
        assert_eq!(
            generalized_artin_certificate(&p("s s' s"), &p("s s' s'")),
            Err(ArtinError::Precondition("initial letters equal".into()))
        );
        assert!(generalized_artin_certificate(&p("s s'^-1 s"), &p("s' s s'")).is_err());
    }

    #[test]
    fn graph_json() {
        let g = tag("B3").coxeter_graph();
        assert_eq!(LabeledGraph::from_json(&g.to_json()).unwrap(), g);
        let bad = r#"{"vertices":["a","b"],"edges":[{"u":"a","v":"b","label":2}]}"#;
        assert!(matches!(LabeledGraph::from_json(bad), Err(GraphError::Field { .. })));
        let bad = r#"{"vertices":["a","b"],"edges":[{"u":"a","v":"c","label":3}]}"#;
        assert_eq!(LabeledGraph::from_json(bad).unwrap_err().to_string(), "edges[0].v: unknown vertex 'c'");
        assert!(matches!(LabeledGraph::from_json("{\"vertices\": [}"), Err(GraphError::Json { line: 1, .. })));
    }
}
