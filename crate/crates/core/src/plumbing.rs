//! Plumbing graphs with at most one cycle.
//!
//! Vertices carry Euler numbers, edges carry an intersection sign. Reversing the
//! orientation of one base sphere flips every edge at that vertex, so only the
//! product of signs around the cycle is meaningful; graphs are stored with every
//! cycle edge `+` except possibly the one that closes the cycle.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{abelian_group_of, det, is_perfect_square, AbelianGroup, IntMatrix};
use crate::sl2::{MonodromyWord, Sl2};
use crate::strings::{recognize_family, FamilyParams, IntString};

pub use crate::sl2::Sign;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub name: String,
    pub weight: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub sign: Sign,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.a == self.b
    }

    fn other(&self, v: usize) -> usize {
        if self.a == v {
            self.b
        } else {
            self.a
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlumbingGraph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
}

/// The unique cycle, in traversal order: `vertices[i]` and `vertices[i+1]` (mod n)
/// are joined by `edges[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

impl PlumbingGraph {
    /// Validates names and endpoints, rejects more than one independent cycle and
    /// normalises cycle signs.
    pub fn from_parts<S: AsRef<str>>(vertices: &[(S, i64)], edges: &[(S, S, Sign)]) -> Result<Self> {
        let mut index = BTreeMap::new();
        let mut vs = Vec::with_capacity(vertices.len());
        for (i, (name, weight)) in vertices.iter().enumerate() {
            let name = name.as_ref().to_string();
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(name));
            }
            vs.push(Vertex { name, weight: *weight });
        }
        let lookup = |n: &str| index.get(n).copied().ok_or_else(|| Error::UnknownVertex(n.to_string()));
        let es = edges
            .iter()
            .map(|(a, b, sign)| {
                Ok(Edge {
                    a: lookup(a.as_ref())?,
                    b: lookup(b.as_ref())?,
                    sign: *sign,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_indexed(vs, es)
    }

    fn from_indexed(vertices: Vec<Vertex>, edges: Vec<Edge>) -> Result<Self> {
        let mut g = PlumbingGraph { vertices, edges };
        let cycles = g.cycle_count();
        if cycles > 1 {
            return Err(Error::TooManyCycles(cycles));
        }
        g.normalize_cycle_signs();
        Ok(g)
    }

    /// Linear plumbing with vertices `v1, v2, …` (zero-padded) and `+` edges.
    pub fn path(weights: &[i64]) -> Self {
        let names = padded_names(weights.len());
        let vs: Vec<(&str, i64)> = names.iter().map(String::as_str).zip(weights.iter().copied()).collect();
        let es: Vec<(&str, &str, Sign)> = names.windows(2).map(|w| (w[0].as_str(), w[1].as_str(), Sign::Plus)).collect();
        Self::from_parts(&vs, &es).expect("a path is a tree")
    }

    /// Cyclic plumbing with the given weights and overall cycle sign.
    pub fn cyclic(weights: &[i64], sign: Sign) -> Result<Self> {
        let n = weights.len();
        if n == 0 {
            return Err(Error::NotACycle);
        }
        let names = padded_names(n);
        let vs: Vec<(&str, i64)> = names.iter().map(String::as_str).zip(weights.iter().copied()).collect();
        let mut es: Vec<(&str, &str, Sign)> = (0..n)
            .map(|i| (names[i].as_str(), names[(i + 1) % n].as_str(), Sign::Plus))
            .collect();
        es[n - 1].2 = sign;
        Self::from_parts(&vs, &es)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v.name == name)
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    /// Connected components as sorted vertex index lists, ordered by first index.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut x = x;
            while p[x] != r {
                let nx = p[x];
                p[x] = r;
                x = nx;
            }
            r
        }
        for e in &self.edges {
            let (ra, rb) = (find(&mut parent, e.a), find(&mut parent, e.b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..n {
            let r = find(&mut parent, v);
            groups.entry(r).or_default().push(v);
        }
        groups.into_values().collect()
    }

    /// First Betti number of the graph: `edges − vertices + components`.
    pub fn cycle_count(&self) -> usize {
        self.edges.len() + self.components().len() - self.vertices.len()
    }

    pub fn is_tree(&self) -> bool {
        self.cycle_count() == 0 && self.components().len() <= 1
    }

    /// A tree in which every vertex has degree at most two.
    pub fn is_linear(&self) -> bool {
        self.is_tree() && (0..self.len()).all(|v| self.degree(v) <= 2)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|e| usize::from(e.a == v) + usize::from(e.b == v))
            .sum()
    }

    fn neighbors_sorted(&self, v: usize) -> Vec<usize> {
        let mut ns: Vec<usize> = self
            .edges
            .iter()
            .filter(|e| e.a == v || e.b == v)
            .map(|e| e.other(v))
            .collect();
        ns.sort_by(|&x, &y| self.vertices[x].name.cmp(&self.vertices[y].name));
        ns.dedup();
        ns
    }

    /// The unique cycle, traversed from its lexicographically smallest vertex
    /// toward the smaller-named neighbour.
    pub fn cycle(&self) -> Option<Cycle> {
        if self.cycle_count() != 1 {
            return None;
        }
        let n = self.vertices.len();
        let mut alive = vec![true; n];
        let mut deg: Vec<usize> = (0..n).map(|v| self.degree(v)).collect();
        let mut queue: VecDeque<usize> = (0..n).filter(|&v| deg[v] <= 1).collect();
        while let Some(v) = queue.pop_front() {
            if !alive[v] {
                continue;
            }
            alive[v] = false;
            for e in self.edges.iter().filter(|e| !e.is_loop() && (e.a == v || e.b == v)) {
                let u = e.other(v);
                if alive[u] {
                    deg[u] -= 1;
                    if deg[u] <= 1 {
                        queue.push_back(u);
                    }
                }
            }
        }
        let cycle_edges: Vec<usize> = (0..self.edges.len())
            .filter(|&i| alive[self.edges[i].a] && alive[self.edges[i].b])
            .collect();
        let start = (0..n)
            .filter(|&v| alive[v])
            .min_by(|&x, &y| self.vertices[x].name.cmp(&self.vertices[y].name))?;

        let mut order = vec![start];
        let mut used: Vec<usize> = Vec::new();
        let mut cur = start;
        loop {
            let next = cycle_edges
                .iter()
                .copied()
                .filter(|i| !used.contains(i))
                .filter(|&i| {
                    let e = &self.edges[i];
                    e.a == cur || e.b == cur
                })
                .min_by(|&i, &j| {
                    let (oi, oj) = (self.edges[i].other(cur), self.edges[j].other(cur));
                    self.vertices[oi].name.cmp(&self.vertices[oj].name).then(i.cmp(&j))
                });
            let Some(ei) = next else { break };
            used.push(ei);
            cur = self.edges[ei].other(cur);
            if cur == start {
                break;
            }
            order.push(cur);
        }
        Some(Cycle {
            vertices: order,
            edges: used,
        })
    }

    /// Reverses the orientation of vertex `v`'s base sphere.
    fn flip_vertex(&mut self, v: usize) {
        for e in self.edges.iter_mut().filter(|e| !e.is_loop() && (e.a == v || e.b == v)) {
            e.sign = e.sign.flip();
        }
    }

    fn normalize_cycle_signs(&mut self) {
        let Some(c) = self.cycle() else { return };
        let len = c.edges.len();
        for i in 0..len.saturating_sub(1) {
            if self.edges[c.edges[i]].sign == Sign::Minus {
                self.flip_vertex(c.vertices[i + 1]);
            }
        }
    }

    /// Product of the signs around the cycle, if there is one.
    pub fn cycle_sign(&self) -> Option<Sign> {
        self.cycle()
            .map(|c| c.edges.iter().fold(Sign::Plus, |acc, &i| acc * self.edges[i].sign))
    }

    /// Removes the listed vertices and every incident edge.
    pub fn without_vertices(&self, remove: &[usize]) -> PlumbingGraph {
        let keep: Vec<usize> = (0..self.len()).filter(|v| !remove.contains(v)).collect();
        let mut map = vec![usize::MAX; self.len()];
        for (new, &old) in keep.iter().enumerate() {
            map[old] = new;
        }
        PlumbingGraph {
            vertices: keep.iter().map(|&v| self.vertices[v].clone()).collect(),
            edges: self
                .edges
                .iter()
                .filter(|e| map[e.a] != usize::MAX && map[e.b] != usize::MAX)
                .map(|e| Edge {
                    a: map[e.a],
                    b: map[e.b],
                    sign: e.sign,
                })
                .collect(),
        }
    }

    /// Canonical text key: vertices renumbered by a name-ordered breadth-first
    /// traversal of each component.
    pub fn canonical_form(&self) -> String {
        let mut order: Vec<usize> = Vec::with_capacity(self.len());
        let mut seen = vec![false; self.len()];
        let mut roots: Vec<usize> = (0..self.len()).collect();
        roots.sort_by(|&x, &y| self.vertices[x].name.cmp(&self.vertices[y].name));
        for r in roots {
            if seen[r] {
                continue;
            }
            seen[r] = true;
            let mut queue = VecDeque::from([r]);
            while let Some(v) = queue.pop_front() {
                order.push(v);
                for u in self.neighbors_sorted(v) {
                    if !seen[u] {
                        seen[u] = true;
                        queue.push_back(u);
                    }
                }
            }
        }
        let mut rank = vec![0; self.len()];
        for (i, &v) in order.iter().enumerate() {
            rank[v] = i;
        }
        let weights: Vec<String> = order.iter().map(|&v| self.vertices[v].weight.to_string()).collect();
        let mut edges: Vec<(usize, usize, char)> = self
            .edges
            .iter()
            .map(|e| {
                let (x, y) = (rank[e.a], rank[e.b]);
                (x.min(y), x.max(y), e.sign.symbol())
            })
            .collect();
        edges.sort();
        let edges: Vec<String> = edges.iter().map(|(x, y, s)| format!("{x}-{y}{s}")).collect();
        format!("w={};e={}", weights.join(","), edges.join(","))
    }
}

fn padded_names(n: usize) -> Vec<String> {
    let width = n.to_string().len();
    (1..=n).map(|i| format!("v{i:0width$}")).collect()
}

/// Graph file format: `vertex <name> <weight>` and `edge <name> <name> <+|->`,
/// `#` starts a comment.
impl FromStr for PlumbingGraph {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        parse_graph(text)
    }
}

pub fn parse_graph(text: &str) -> Result<PlumbingGraph> {
    let mut vertices: Vec<(String, i64)> = Vec::new();
    let mut edges: Vec<(String, String, Sign)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        match toks.as_slice() {
            ["vertex", name, weight] => {
                let w = weight
                    .parse::<i64>()
                    .map_err(|_| Error::parse(line, format!("bad weight `{weight}`")))?;
                vertices.push((name.to_string(), w));
            }
            ["edge", a, b, sign] => {
                let s = Sign::parse_symbol(sign)
                    .ok_or_else(|| Error::parse(line, format!("bad sign `{sign}`")))?;
                edges.push((a.to_string(), b.to_string(), s));
            }
            _ => return Err(Error::parse(line, format!("unrecognised line `{content}`"))),
        }
    }
    PlumbingGraph::from_parts(&vertices, &edges)
}

impl fmt::Display for PlumbingGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.vertices {
            writeln!(f, "vertex {} {}", v.name, v.weight)?;
        }
        for e in &self.edges {
            writeln!(
                f,
                "edge {} {} {}",
                self.vertices[e.a].name, self.vertices[e.b].name, e.sign
            )?;
        }
        Ok(())
    }
}

/// Diagonal: weight plus `2·sign` per self-loop. Off-diagonal: summed edge signs.
pub fn intersection_form(g: &PlumbingGraph) -> IntMatrix {
    let n = g.len();
    let mut q = vec![vec![0i64; n]; n];
    for (i, v) in g.vertices.iter().enumerate() {
        q[i][i] = v.weight;
    }
    for e in &g.edges {
        let s = e.sign.to_i64();
        if e.is_loop() {
            q[e.a][e.a] += 2 * s;
        } else {
            q[e.a][e.b] += s;
            q[e.b][e.a] += s;
        }
    }
    IntMatrix::from_rows(&q)
}

/// `H₁` of the boundary: `coker Q` for a forest, `Z ⊕ coker Q` with one cycle.
pub fn boundary_homology(g: &PlumbingGraph) -> Result<AbelianGroup> {
    let cycles = g.cycle_count();
    if cycles > 1 {
        return Err(Error::TooManyCycles(cycles));
    }
    Ok(abelian_group_of(&intersection_form(g)).with_extra_free(cycles))
}

/// Cyclic plumbing bounded by the torus bundle of a monodromy word.
///
/// * positive hyperbolic `(a₁,…,aₙ)` with all `aᵢ ≥ 2`, some `≥ 3`: weights `−aᵢ`,
///   all edges `+`;
/// * `-:(2,…,2)` of length `n`: the negative parabolic bundle, see
///   [`parabolic_cycle_plumbing`].
pub fn cycle_plumbing_from_word(w: &MonodromyWord) -> Result<PlumbingGraph> {
    let a = &w.coeffs;
    if a.is_empty() || a.iter().any(|&x| x < 2) {
        return Err(Error::UnsupportedWord(w.to_string()));
    }
    let hyperbolic = a.iter().any(|&x| x >= 3);
    match (w.sign, hyperbolic) {
        (Sign::Plus, true) => {
            let weights: Vec<i64> = a.iter().map(|&x| -x).collect();
            PlumbingGraph::cyclic(&weights, Sign::Plus)
        }
        (Sign::Minus, false) => parabolic_cycle_plumbing(a.len() as i64),
        _ => Err(Error::UnsupportedWord(w.to_string())),
    }
}

/// Cyclic plumbing bounded by the negative parabolic bundle with monodromy `−T^n`,
/// `|n| ≥ 1`.
///
/// For `n > 0`: `n` vertices of weight `−2` and one `−` edge. For `n < 0`: the
/// orientation reverse, `|n|` vertices of weight `+2` with cycle sign `(−1)^{|n|+1}`.
pub fn parabolic_cycle_plumbing(n: i64) -> Result<PlumbingGraph> {
    if n == 0 {
        return Err(Error::UnsupportedWord("-T^0".into()));
    }
    let len = n.unsigned_abs() as usize;
    if n > 0 {
        PlumbingGraph::cyclic(&vec![-2; len], Sign::Minus)
    } else {
        let sign = if len % 2 == 1 { Sign::Plus } else { Sign::Minus };
        PlumbingGraph::cyclic(&vec![2; len], sign)
    }
}

/// Monodromy of a cyclic plumbing: the product `Π T^{wᵢ}S` in traversal order and
/// the product of the cycle's edge signs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleMonodromy {
    pub product: Sl2,
    pub sign: Sign,
}

impl CycleMonodromy {
    /// `sign · product`
    pub fn monodromy(&self) -> Sl2 {
        self.product.scaled(self.sign)
    }
}

pub fn cycle_monodromy(g: &PlumbingGraph) -> Result<CycleMonodromy> {
    let c = g.cycle().ok_or(Error::NotACycle)?;
    if c.vertices.len() != g.len() {
        return Err(Error::NotACycle);
    }
    let product = c
        .vertices
        .iter()
        .fold(Sl2::identity(), |acc, &v| &acc * &Sl2::twist(g.vertices[v].weight));
    let sign = c.edges.iter().fold(Sign::Plus, |acc, &e| acc * g.edges[e].sign);
    Ok(CycleMonodromy { product, sign })
}

fn require_tree(g: &PlumbingGraph) -> Result<()> {
    if g.is_tree() {
        Ok(())
    } else {
        Err(Error::NotATree)
    }
}

/// Identifies `v1 ∈ g1` with `v2 ∈ g2`, summing weights. The merged vertex keeps
/// `v1`'s name; clashing names from `g2` get a `'` suffix.
pub fn join(g1: &PlumbingGraph, v1: &str, g2: &PlumbingGraph, v2: &str) -> Result<PlumbingGraph> {
    require_tree(g1)?;
    require_tree(g2)?;
    let i1 = g1.index_of(v1)?;
    let i2 = g2.index_of(v2)?;

    let mut vertices = g1.vertices.clone();
    vertices[i1].weight += g2.vertices[i2].weight;
    let mut map = vec![i1; g2.len()];
    for (j, v) in g2.vertices.iter().enumerate() {
        if j == i2 {
            continue;
        }
        let mut name = v.name.clone();
        while vertices.iter().any(|u| u.name == name) {
            name.push('\'');
        }
        map[j] = vertices.len();
        vertices.push(Vertex { name, weight: v.weight });
    }
    let mut edges = g1.edges.clone();
    edges.extend(g2.edges.iter().map(|e| Edge {
        a: map[e.a],
        b: map[e.b],
        sign: e.sign,
    }));
    PlumbingGraph::from_indexed(vertices, edges)
}

/// Identifies two vertices of a tree, summing weights, so that the new cycle has
/// overall sign `sign`.
pub fn self_join(g: &PlumbingGraph, v1: &str, v2: &str, sign: Sign) -> Result<PlumbingGraph> {
    require_tree(g)?;
    let i1 = g.index_of(v1)?;
    let i2 = g.index_of(v2)?;
    if i1 == i2 {
        return Err(Error::SameVertex);
    }
    let mut vertices = g.vertices.clone();
    vertices[i1].weight += vertices[i2].weight;
    vertices.remove(i2);
    let reindex = |v: usize| {
        let v = if v == i2 { i1 } else { v };
        if v > i2 {
            v - 1
        } else {
            v
        }
    };
    // In a tree every edge can be made `+` by orienting the base spheres, so the
    // closed cycle starts out positive.
    let edges: Vec<Edge> = g
        .edges
        .iter()
        .map(|e| Edge {
            a: reindex(e.a),
            b: reindex(e.b),
            sign: Sign::Plus,
        })
        .collect();
    let mut out = PlumbingGraph { vertices, edges };
    if sign == Sign::Minus {
        let c = out.cycle().ok_or(Error::NotACycle)?;
        let last = *c.edges.last().expect("cycle has an edge");
        out.edges[last].sign = Sign::Minus;
    }
    PlumbingGraph::from_indexed(out.vertices, out.edges)
}

/// Homology-level check of the hypotheses on `(X, v)` used by the join rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JoinHypotheses {
    /// `H₁(∂X) ≅ Z`. Sharp for linear plumbings, necessary in general.
    pub boundary_is_s1xs2: bool,
    /// Every component of `X \ v` has nondegenerate intersection form.
    pub complement_is_qs3: bool,
}

impl JoinHypotheses {
    pub fn holds(&self) -> bool {
        self.boundary_is_s1xs2 && self.complement_is_qs3
    }
}

pub fn check_join_hypotheses(g: &PlumbingGraph, v: &str) -> Result<JoinHypotheses> {
    require_tree(g)?;
    let vi = g.index_of(v)?;
    let h = boundary_homology(g)?;
    let boundary_is_s1xs2 = h.free_rank == 1 && h.torsion.is_empty();
    let rest = g.without_vertices(&[vi]);
    let complement_is_qs3 = rest.components().iter().all(|comp| {
        let q = intersection_form(&rest).principal_submatrix(comp);
        abelian_group_of(&q).free_rank == 0
    });
    Ok(JoinHypotheses {
        boundary_is_s1xs2,
        complement_is_qs3,
    })
}

// ---------------------------------------------------------------------------
// Certification ledger
// ---------------------------------------------------------------------------

/// Starting facts a certificate may rest on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Axiom {
    /// Every negative parabolic torus bundle bounds a rational homology circle.
    NegativeParabolic,
    /// Positive hyperbolic bundles from the hyperbolic family.
    HyperbolicFamily(FamilyParams),
    /// A linear plumbing with boundary `S¹×S²` (which bounds `S¹×B³`).
    S1xS2Seed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    Axiom(Axiom),
    /// Self-join of a certified tree with nonzero determinant.
    SelfJoin { det: BigInt, base: Box<Provenance> },
    /// Join of a certified tree with a tree passing [`check_join_hypotheses`]
    /// (checked at homology level).
    Join { base: Box<Provenance> },
}

impl Provenance {
    /// Every axiom this certificate ultimately rests on.
    pub fn axioms(&self) -> Vec<&Axiom> {
        match self {
            Provenance::Axiom(a) => vec![a],
            Provenance::SelfJoin { base, .. } | Provenance::Join { base } => base.axioms(),
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Axiom(Axiom::NegativeParabolic) => write!(f, "negative-parabolic"),
            Provenance::Axiom(Axiom::HyperbolicFamily(p)) => write!(f, "hyperbolic-family({p})"),
            Provenance::Axiom(Axiom::S1xS2Seed) => write!(f, "s1xs2-seed(linear)"),
            Provenance::SelfJoin { det, base } => write!(f, "self-join(det={det})<-{base}"),
            Provenance::Join { base } => write!(f, "join(homology-level-hypothesis)<-{base}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Obstruction {
    /// `b₁ ≠ 1`: not a rational homology `S¹×S²`.
    Betti(usize),
    /// Torsion of `H₁` has non-square order.
    NonSquareTorsion(BigInt),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    BoundsQsb(Provenance),
    Obstructed(Obstruction),
    Unknown,
}

impl Status {
    pub fn label(&self) -> &'static str {
        match self {
            Status::BoundsQsb(_) => "bounds-QSB",
            Status::Obstructed(_) => "obstructed",
            Status::Unknown => "unknown",
        }
    }

    pub fn reason(&self) -> String {
        match self {
            Status::BoundsQsb(p) => p.to_string(),
            Status::Obstructed(Obstruction::Betti(b)) => format!("betti(b1={b})"),
            Status::Obstructed(Obstruction::NonSquareTorsion(t)) => format!("square-order(torsion={t})"),
            Status::Unknown => "none".to_string(),
        }
    }

    pub fn is_bounding(&self) -> bool {
        matches!(self, Status::BoundsQsb(_))
    }
}

/// Plumbing graph together with how it was assembled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Construction {
    Seed(PlumbingGraph),
    Join {
        left: Box<Construction>,
        v1: String,
        right: Box<Construction>,
        v2: String,
    },
    SelfJoin {
        base: Box<Construction>,
        v1: String,
        v2: String,
        sign: Sign,
    },
}

impl Construction {
    pub fn seed(g: PlumbingGraph) -> Self {
        Construction::Seed(g)
    }

    pub fn join_with(self, v1: &str, other: Construction, v2: &str) -> Self {
        Construction::Join {
            left: Box::new(self),
            v1: v1.to_string(),
            right: Box::new(other),
            v2: v2.to_string(),
        }
    }

    pub fn self_join(self, v1: &str, v2: &str, sign: Sign) -> Self {
        Construction::SelfJoin {
            base: Box::new(self),
            v1: v1.to_string(),
            v2: v2.to_string(),
            sign,
        }
    }

    pub fn build(&self) -> Result<PlumbingGraph> {
        match self {
            Construction::Seed(g) => Ok(g.clone()),
            Construction::Join { left, v1, right, v2 } => join(&left.build()?, v1, &right.build()?, v2),
            Construction::SelfJoin { base, v1, v2, sign } => self_join(&base.build()?, v1, v2, *sign),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Descriptor {
    Word(MonodromyWord),
    /// `±T^n`
    Parabolic { sign: Sign, n: i64 },
    Graph(Construction),
}

impl Descriptor {
    pub fn canonical_form(&self) -> Result<String> {
        Ok(match self {
            Descriptor::Word(w) => {
                let s = IntString::new(w.coeffs.clone());
                let best = (0..s.len().max(1)).map(|r| s.rotated(r)).min().unwrap_or_default();
                format!("word:{}", MonodromyWord::new(best.into_entries(), w.sign))
            }
            Descriptor::Parabolic { sign, n } => match sign {
                Sign::Plus => format!("parabolic:T^{n}"),
                Sign::Minus => format!("parabolic:-T^{n}"),
            },
            Descriptor::Graph(c) => format!("graph:{}", c.build()?.canonical_form()),
        })
    }
}

/// Parses `3,2,2`, `-:2,2`, `T^n` or `-T^n`.
impl FromStr for Descriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let power = |rest: &str, sign| {
            rest.parse::<i64>()
                .map(|n| Descriptor::Parabolic { sign, n })
                .map_err(|_| Error::MalformedDescriptor(s.to_string()))
        };
        if let Some(rest) = s.strip_prefix("-T^") {
            return power(rest, Sign::Minus);
        }
        if let Some(rest) = s.strip_prefix("T^") {
            return power(rest, Sign::Plus);
        }
        s.parse::<MonodromyWord>()
            .map(Descriptor::Word)
            .map_err(|_| Error::MalformedDescriptor(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LedgerEntry {
    pub descriptor: String,
    pub status: Status,
}

impl fmt::Display for LedgerEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "descriptor={} status={} reason={}",
            self.descriptor,
            self.status.label(),
            self.status.reason()
        )
    }
}

/// Evaluated descriptors in insertion order, keyed by canonical form.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Ledger {
    entries: Vec<LedgerEntry>,
}

impl Ledger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn entries(&self) -> &[LedgerEntry] {
        &self.entries
    }

    pub fn get(&self, descriptor: &str) -> Option<&LedgerEntry> {
        self.entries.iter().find(|e| e.descriptor == descriptor)
    }

    pub fn report(&self) -> String {
        self.entries.iter().map(|e| format!("{e}\n")).collect()
    }
}

/// Evaluates a descriptor and records it. A descriptor already in the ledger is
/// returned unchanged.
pub fn ledger_evaluate(mut ledger: Ledger, d: &Descriptor) -> Result<(Ledger, LedgerEntry)> {
    let key = d.canonical_form()?;
    if let Some(e) = ledger.get(&key) {
        let e = e.clone();
        return Ok((ledger, e));
    }
    let status = match d {
        Descriptor::Word(w) => monodromy_status(&w.matrix(), Some(w)),
        Descriptor::Parabolic { sign, n } => monodromy_status(&Sl2::t_pow(*n).scaled(*sign), None),
        Descriptor::Graph(c) => evaluate_construction(c)?.1,
    };
    let entry = LedgerEntry { descriptor: key, status };
    ledger.entries.push(entry.clone());
    Ok((ledger, entry))
}

/// `H₁` of the torus bundle with monodromy `m`: `Z ⊕ coker(m − I)`.
pub fn torus_bundle_homology(m: &Sl2) -> AbelianGroup {
    let [a, b, c, d] = m.entries();
    let one = BigInt::from(1);
    let shifted = IntMatrix::new(2, 2, vec![a - &one, b.clone(), c.clone(), d - &one]).expect("2x2");
    abelian_group_of(&shifted).with_extra_free(1)
}

fn monodromy_status(m: &Sl2, word: Option<&MonodromyWord>) -> Status {
    if m.trace() == BigInt::from(-2) {
        return Status::BoundsQsb(Provenance::Axiom(Axiom::NegativeParabolic));
    }
    if let Some(w) = word.filter(|w| w.sign == Sign::Plus) {
        if let Some(p) = recognize_family(&IntString::new(w.coeffs.clone())) {
            return Status::BoundsQsb(Provenance::Axiom(Axiom::HyperbolicFamily(p)));
        }
    }
    obstruction_status(&torus_bundle_homology(m))
}

fn obstruction_status(h: &AbelianGroup) -> Status {
    if h.free_rank != 1 {
        return Status::Obstructed(Obstruction::Betti(h.free_rank));
    }
    let t = h.torsion_order();
    if is_perfect_square(&t) {
        Status::Unknown
    } else {
        Status::Obstructed(Obstruction::NonSquareTorsion(t))
    }
}

/// Axioms that apply to a graph on its own, without construction history.
fn graph_axioms(g: &PlumbingGraph) -> Result<Option<Provenance>> {
    if g.is_linear() {
        let h = boundary_homology(g)?;
        if h.free_rank == 1 && h.torsion.is_empty() {
            return Ok(Some(Provenance::Axiom(Axiom::S1xS2Seed)));
        }
        return Ok(None);
    }
    let Ok(cm) = cycle_monodromy(g) else {
        return Ok(None);
    };
    if cm.monodromy().trace() == BigInt::from(-2) {
        return Ok(Some(Provenance::Axiom(Axiom::NegativeParabolic)));
    }
    if cm.sign == Sign::Plus {
        let c = g.cycle().expect("cyclic");
        let a: Vec<i64> = c.vertices.iter().map(|&v| -g.vertices[v].weight).collect();
        let mut rev = a.clone();
        rev.reverse();
        // Both traversal directions describe the same plumbing.
        for s in [a, rev] {
            if let Some(p) = recognize_family(&IntString::new(s)) {
                return Ok(Some(Provenance::Axiom(Axiom::HyperbolicFamily(p))));
            }
        }
    }
    Ok(None)
}

/// Builds the graph and decides its status from the construction history.
pub fn evaluate_construction(c: &Construction) -> Result<(PlumbingGraph, Status)> {
    let (g, derived) = match c {
        Construction::Seed(g) => (g.clone(), None),
        Construction::SelfJoin { base, v1, v2, sign } => {
            let (bg, bs) = evaluate_construction(base)?;
            let g = self_join(&bg, v1, v2, *sign)?;
            let mut derived = None;
            if let Status::BoundsQsb(p) = bs {
                let d = det(&intersection_form(&g))?;
                if !d.is_zero() {
                    derived = Some(Provenance::SelfJoin { det: d, base: Box::new(p) });
                }
            }
            (g, derived)
        }
        Construction::Join { left, v1, right, v2 } => {
            let (lg, ls) = evaluate_construction(left)?;
            let (rg, rs) = evaluate_construction(right)?;
            let g = join(&lg, v1, &rg, v2)?;
            let mut derived = None;
            for (certified, other, ov) in [(&rs, &lg, v1), (&ls, &rg, v2)] {
                if let Status::BoundsQsb(p) = certified {
                    if check_join_hypotheses(other, ov)?.holds() {
                        derived = Some(Provenance::Join { base: Box::new(p.clone()) });
                        break;
                    }
                }
            }
            (g, derived)
        }
    };
    let status = match derived.or(graph_axioms(&g)?) {
        Some(p) => Status::BoundsQsb(p),
        None => obstruction_status(&boundary_homology(&g)?),
    };
    Ok((g, status))
}

/// Construction script: named trees and operations on them.
///
/// ```text
/// tree X
/// vertex a -1
/// edge a b +
/// end
/// selfjoin Y X a b -
/// join Z X a W b
/// ```
pub fn parse_construction_script(text: &str) -> Result<Vec<(String, Construction)>> {
    let mut defs: Vec<(String, Construction)> = Vec::new();
    let lookup = |defs: &[(String, Construction)], name: &str, line: usize| {
        defs.iter()
            .find(|(n, _)| n == name)
            .map(|(_, c)| c.clone())
            .ok_or_else(|| Error::parse(line, format!("undefined construction `{name}`")))
    };
    let lines: Vec<&str> = text.lines().collect();
    let mut i = 0;
    while i < lines.len() {
        let line = i + 1;
        let content = lines[i].split('#').next().unwrap_or("").trim();
        i += 1;
        if content.is_empty() {
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        let (name, c) = match toks.as_slice() {
            ["tree", name] => {
                let mut body = String::new();
                loop {
                    let Some(l) = lines.get(i) else {
                        return Err(Error::parse(line, "unterminated tree block"));
                    };
                    i += 1;
                    if l.split('#').next().unwrap_or("").trim() == "end" {
                        break;
                    }
                    body.push_str(l);
                    body.push('\n');
                }
                (name.to_string(), Construction::seed(parse_graph(&body)?))
            }
            ["selfjoin", name, base, v1, v2, sign] => {
                let s = Sign::parse_symbol(sign)
                    .ok_or_else(|| Error::parse(line, format!("bad sign `{sign}`")))?;
                (name.to_string(), lookup(&defs, base, line)?.self_join(v1, v2, s))
            }
            ["join", name, left, v1, right, v2] => {
                let l = lookup(&defs, left, line)?;
                let r = lookup(&defs, right, line)?;
                (name.to_string(), l.join_with(v1, r, v2))
            }
            _ => return Err(Error::parse(line, format!("unrecognised line `{content}`"))),
        };
        if defs.iter().any(|(n, _)| *n == name) {
            return Err(Error::parse(line, format!("`{name}` defined twice")));
        }
        defs.push((name, c));
    }
    Ok(defs)
}
