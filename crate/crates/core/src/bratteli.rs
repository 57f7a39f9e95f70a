//! Bratteli diagrams of AF-algebras: the two named infinite diagrams (kept as a
//! rule plus a materialized truncation), diagram ideals, quotients and
//! semi-decisions about the dimension of the limit algebra.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::Limits;

/// Largest vertex count accepted by [`enumerate_ideals`].
pub const ENUMERATION_VERTEX_LIMIT: usize = 20;

/// Extra rule-generated levels used to close truncated ideals in [`is_essential`].
const ESSENTIAL_LOOKAHEAD: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// n vertices at level n; (n,k) → (n+1,k) and (n,k) → (n+1,n+1).
    YInfty,
    /// Two copies of the y_infty pattern, the right copy also feeding its
    /// newest vertex into the newest vertex of the left copy.
    StrictlyRfd,
}

/// A vertex, both coordinates 0-based. Displays 1-based as `(n,k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex {
    pub level: usize,
    pub index: usize,
}

impl Vertex {
    pub fn new(level: usize, index: usize) -> Self {
        Vertex { level, index }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.level + 1, self.index + 1)
    }
}

/// An edge between consecutive levels; `from` and `to` index into those levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub mult: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawDiagram")]
pub struct BratteliDiagram {
    /// Matrix sizes of the vertices, level by level.
    levels: Vec<Vec<u64>>,
    /// `edges[n]` connects level n to level n+1.
    edges: Vec<Vec<Edge>>,
    rule: Option<Rule>,
}

#[derive(Deserialize)]
struct RawDiagram {
    levels: Vec<Vec<u64>>,
    #[serde(default)]
    edges: Vec<Vec<Edge>>,
    #[serde(default)]
    rule: Option<Rule>,
}

impl TryFrom<RawDiagram> for BratteliDiagram {
    type Error = Error;

    fn try_from(raw: RawDiagram) -> Result<Self> {
        let d = BratteliDiagram {
            levels: raw.levels,
            edges: raw.edges,
            rule: raw.rule,
        };
        d.validate()?;
        if let Some(rule) = d.rule {
            let expected = build(rule, d.depth().max(1), &Limits { depth_cap: usize::MAX, ..Limits::default() })?;
            if d.depth() > 0 && expected != d {
                return Err(Error::Malformed(format!(
                    "diagram data does not match rule {rule:?}"
                )));
            }
        }
        Ok(d)
    }
}

impl BratteliDiagram {
    /// Builds a diagram from explicit data, checking every structural invariant.
    pub fn new(levels: Vec<Vec<u64>>, edges: Vec<Vec<Edge>>) -> Result<Self> {
        let d = BratteliDiagram {
            levels,
            edges,
            rule: None,
        };
        d.validate()?;
        Ok(d)
    }

    fn validate(&self) -> Result<()> {
        let depth = self.levels.len();
        if self.edges.len() != depth.saturating_sub(1) {
            return Err(Error::Malformed(format!(
                "{depth} levels need {} edge lists, got {}",
                depth.saturating_sub(1),
                self.edges.len()
            )));
        }
        for (n, level) in self.levels.iter().enumerate() {
            if level.is_empty() {
                return Err(Error::Malformed(format!("level {} is empty", n + 1)));
            }
            if level.contains(&0) {
                return Err(Error::Malformed(format!("level {} has a vertex of size 0", n + 1)));
            }
        }
        for (n, edges) in self.edges.iter().enumerate() {
            let (src, dst) = (&self.levels[n], &self.levels[n + 1]);
            let mut incoming = vec![0u64; dst.len()];
            let mut has_out = vec![false; src.len()];
            for e in edges {
                if e.from >= src.len() || e.to >= dst.len() {
                    return Err(Error::Malformed(format!(
                        "edge {}→{} out of range between levels {} and {}",
                        e.from,
                        e.to,
                        n + 1,
                        n + 2
                    )));
                }
                if e.mult == 0 {
                    return Err(Error::Malformed("edge multiplicity must be at least 1".into()));
                }
                has_out[e.from] = true;
                let add = e
                    .mult
                    .checked_mul(src[e.from])
                    .and_then(|x| x.checked_add(incoming[e.to]))
                    .ok_or_else(|| Error::Malformed("dimension overflow".into()))?;
                incoming[e.to] = add;
            }
            if let Some(i) = has_out.iter().position(|&x| !x) {
                return Err(Error::Malformed(format!(
                    "vertex {} has no outgoing edge",
                    Vertex::new(n, i)
                )));
            }
            for (i, (&k, &sum)) in dst.iter().zip(&incoming).enumerate() {
                if sum == 0 {
                    return Err(Error::Malformed(format!(
                        "vertex {} has no incoming edge",
                        Vertex::new(n + 1, i)
                    )));
                }
                if k != sum {
                    return Err(Error::Malformed(format!(
                        "vertex {} has size {k} but its incoming edges give {sum}",
                        Vertex::new(n + 1, i)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Number of materialized levels.
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn rule(&self) -> Option<Rule> {
        self.rule
    }

    pub fn levels(&self) -> &[Vec<u64>] {
        &self.levels
    }

    pub fn edges(&self) -> &[Vec<Edge>] {
        &self.edges
    }

    pub fn dims(&self, level: usize) -> &[u64] {
        &self.levels[level]
    }

    pub fn vertex_count(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.levels
            .iter()
            .enumerate()
            .flat_map(|(n, l)| (0..l.len()).map(move |i| Vertex::new(n, i)))
    }

    fn successors(&self, v: Vertex) -> impl Iterator<Item = &Edge> {
        self.edges
            .get(v.level)
            .into_iter()
            .flatten()
            .filter(move |e| e.from == v.index)
    }

    /// Σ k_v² over a level: the dimension of the level's finite-dimensional algebra.
    pub fn level_dimension(&self, level: usize) -> u128 {
        self.levels[level].iter().map(|&k| u128::from(k) * u128::from(k)).sum()
    }

    /// Re-materializes a rule-defined diagram to a new depth.
    pub fn with_depth(&self, depth: usize, limits: &Limits) -> Result<BratteliDiagram> {
        match self.rule {
            Some(rule) => build(rule, depth, limits),
            None => Err(Error::Precondition(
                "only rule-defined diagrams can be re-materialized".into(),
            )),
        }
    }

    fn empty_sets(&self) -> Vec<BTreeSet<usize>> {
        vec![BTreeSet::new(); self.depth()]
    }

    /// DOT rendering, one rank per level; members of `mark` are filled and tagged `marked=true`.
    pub fn to_dot(&self, mark: Option<&DiagramIdeal>) -> String {
        let mut out = String::from("digraph bratteli {\n  rankdir=TB;\n  node [shape=circle];\n");
        for (n, level) in self.levels.iter().enumerate() {
            out.push_str("  { rank=same;");
            for (i, k) in level.iter().enumerate() {
                let v = Vertex::new(n, i);
                let marked = mark.is_some_and(|u| u.contains(v));
                out.push_str(&format!(" v{n}_{i} [label=\"{k}\", tooltip=\"{v}\""));
                if marked {
                    out.push_str(", marked=true, style=filled, fillcolor=lightblue");
                }
                out.push_str("];");
            }
            out.push_str(" }\n");
        }
        for (n, edges) in self.edges.iter().enumerate() {
            for e in edges {
                out.push_str(&format!("  v{n}_{} -> v{}_{}", e.from, n + 1, e.to));
                if e.mult > 1 {
                    out.push_str(&format!(" [label=\"{}\"]", e.mult));
                }
                out.push_str(";\n");
            }
        }
        out.push_str("}\n");
        out
    }
}

fn build(rule: Rule, depth: usize, limits: &Limits) -> Result<BratteliDiagram> {
    if depth == 0 {
        return Err(Error::Precondition("depth must be at least 1".into()));
    }
    limits.check_depth(depth)?;
    let mut edges: Vec<Vec<Edge>> = Vec::new();
    for n in 1..depth {
        // n vertices (per half) at this level, n+1 at the next.
        let single = |from, to| Edge { from, to, mult: 1 };
        let mut level = Vec::new();
        match rule {
            Rule::YInfty => {
                for k in 0..n {
                    level.push(single(k, k));
                    level.push(single(k, n));
                }
            }
            Rule::StrictlyRfd => {
                // Left copy occupies 0..n, right copy n..2n (next level: 0..n+1, n+1..2n+2).
                for k in 0..n {
                    level.push(single(k, k));
                    level.push(single(k, n));
                }
                for k in 0..n {
                    level.push(single(n + k, n + 1 + k));
                    level.push(single(n + k, 2 * n + 1));
                }
                level.push(single(2 * n - 1, n));
            }
        }
        level.sort();
        edges.push(level);
    }
    let first: Vec<u64> = match rule {
        Rule::YInfty => vec![1],
        Rule::StrictlyRfd => vec![1, 1],
    };
    let mut levels = vec![first];
    for (n, es) in edges.iter().enumerate() {
        let width = match rule {
            Rule::YInfty => n + 2,
            Rule::StrictlyRfd => 2 * (n + 2),
        };
        let mut next = vec![0u64; width];
        for e in es {
            next[e.to] = levels[n][e.from]
                .checked_mul(e.mult)
                .and_then(|x| x.checked_add(next[e.to]))
                .ok_or_else(|| Error::cap("vertex dimension bits", 65, 64))?;
        }
        levels.push(next);
    }
    Ok(BratteliDiagram {
        levels,
        edges,
        rule: Some(rule),
    })
}

/// The diagram with vertex sizes (1), (1,1), (1,1,2), (1,1,2,4), …
pub fn build_y_infty(depth: usize, limits: &Limits) -> Result<BratteliDiagram> {
    build(Rule::YInfty, depth, limits)
}

/// The two-halves diagram. Level n lists L(n,1..n) then R(n,1..n); within each
/// half edges follow the y_infty pattern and R(n,n) → L(n+1,n+1) joins them.
pub fn build_strictly_rfd(depth: usize, limits: &Limits) -> Result<BratteliDiagram> {
    build(Rule::StrictlyRfd, depth, limits)
}

/// Per-level vertex sets, optionally tagged with the formula that produced them.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DiagramIdeal {
    /// Member positions, level by level.
    pub members: Vec<BTreeSet<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

impl DiagramIdeal {
    pub fn new(members: Vec<BTreeSet<usize>>) -> Self {
        DiagramIdeal {
            members,
            description: None,
        }
    }

    pub fn empty(d: &BratteliDiagram) -> Self {
        DiagramIdeal::new(d.empty_sets())
    }

    pub fn full(d: &BratteliDiagram) -> Self {
        DiagramIdeal::new(d.levels.iter().map(|l| (0..l.len()).collect()).collect())
    }

    pub fn from_vertices<I: IntoIterator<Item = Vertex>>(d: &BratteliDiagram, vs: I) -> Self {
        let mut u = DiagramIdeal::empty(d);
        for v in vs {
            if v.level < u.members.len() {
                u.members[v.level].insert(v.index);
            }
        }
        u
    }

    fn described(mut self, text: String) -> Self {
        self.description = Some(text);
        self
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.members.get(v.level).is_some_and(|s| s.contains(&v.index))
    }

    pub fn is_empty(&self) -> bool {
        self.members.iter().all(BTreeSet::is_empty)
    }

    pub fn len(&self) -> usize {
        self.members.iter().map(BTreeSet::len).sum()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.members
            .iter()
            .enumerate()
            .flat_map(|(n, s)| s.iter().map(move |&i| Vertex::new(n, i)))
    }

    pub fn intersects(&self, other: &DiagramIdeal) -> bool {
        self.vertices().any(|v| other.contains(v))
    }

    /// Same member sets, ignoring the description.
    pub fn same_members(&self, other: &DiagramIdeal) -> bool {
        let depth = self.members.len().max(other.members.len());
        let empty = BTreeSet::new();
        (0..depth).all(|n| {
            self.members.get(n).unwrap_or(&empty) == other.members.get(n).unwrap_or(&empty)
        })
    }

    /// Restriction to the first `depth` levels.
    pub fn truncate(&self, depth: usize) -> DiagramIdeal {
        let mut members = self.members.clone();
        members.resize(depth, BTreeSet::new());
        DiagramIdeal {
            members,
            description: self.description.clone(),
        }
    }
}

impl fmt::Display for DiagramIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<String> = self.vertices().map(|v| v.to_string()).collect();
        write!(f, "{{{}}}", vs.join(", "))
    }
}

/// Why a vertex set is not an ideal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IdealViolation {
    /// A member has an edge to a non-member.
    Hereditary { from: Vertex, to: Vertex },
    /// A non-member all of whose successors are members.
    Saturated { vertex: Vertex },
}

impl fmt::Display for IdealViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdealViolation::Hereditary { from, to } => {
                write!(f, "not hereditary: {from} is a member but {to} is not")
            }
            IdealViolation::Saturated { vertex } => {
                write!(f, "not saturated: every successor of {vertex} is a member")
            }
        }
    }
}

fn check_shape(d: &BratteliDiagram, u: &DiagramIdeal) -> Result<()> {
    if u.members.len() > d.depth() {
        return Err(Error::Malformed(format!(
            "vertex set has {} levels but the diagram only {}",
            u.members.len(),
            d.depth()
        )));
    }
    for v in u.vertices() {
        if v.index >= d.levels[v.level].len() {
            return Err(Error::Malformed(format!("vertex {v} is not in the diagram")));
        }
    }
    Ok(())
}

/// The first violation of the closure conditions, scanning level by level.
/// The deepest materialized level is only checked for heredity, since
/// saturation there would need the next level.
pub fn ideal_violation(d: &BratteliDiagram, u: &DiagramIdeal) -> Result<Option<IdealViolation>> {
    check_shape(d, u)?;
    for (n, edges) in d.edges.iter().enumerate() {
        for e in edges {
            let (from, to) = (Vertex::new(n, e.from), Vertex::new(n + 1, e.to));
            if u.contains(from) && !u.contains(to) {
                return Ok(Some(IdealViolation::Hereditary { from, to }));
            }
        }
        for i in 0..d.levels[n].len() {
            let v = Vertex::new(n, i);
            if !u.contains(v) && d.successors(v).all(|e| u.contains(Vertex::new(n + 1, e.to))) {
                return Ok(Some(IdealViolation::Saturated { vertex: v }));
            }
        }
    }
    Ok(None)
}

pub fn is_ideal(d: &BratteliDiagram, u: &DiagramIdeal) -> Result<bool> {
    Ok(ideal_violation(d, u)?.is_none())
}

fn require_rule(d: &BratteliDiagram, rule: Rule, op: &str) -> Result<()> {
    if d.rule != Some(rule) {
        return Err(Error::Precondition(format!(
            "{op} needs the {rule:?} diagram, got rule {:?}",
            d.rule
        )));
    }
    Ok(())
}

/// The ideal U(Y∞ ∖ F) = {(n,k) : k ∉ F, n ≥ max F} of the y_infty diagram,
/// with F given as 1-based column numbers. F = ∅ gives every vertex.
pub fn ideal_from_open_set(d: &BratteliDiagram, omitted: &BTreeSet<usize>) -> Result<DiagramIdeal> {
    require_rule(d, Rule::YInfty, "ideal_from_open_set")?;
    if omitted.contains(&0) {
        return Err(Error::Malformed("columns are numbered from 1".into()));
    }
    let start = omitted.iter().next_back().copied().unwrap_or(1).max(1);
    let members = d
        .levels
        .iter()
        .enumerate()
        .map(|(n, level)| {
            if n + 1 < start {
                BTreeSet::new()
            } else {
                (0..level.len()).filter(|i| !omitted.contains(&(i + 1))).collect()
            }
        })
        .collect();
    let names: Vec<String> = omitted.iter().map(usize::to_string).collect();
    Ok(DiagramIdeal::new(members).described(format!("U(Y∞ ∖ {{{}}})", names.join(","))))
}

/// The largest ideal containing no vertex of `avoid`: every vertex with no
/// path into `avoid`.
pub fn largest_ideal_avoiding(d: &BratteliDiagram, avoid: &DiagramIdeal) -> Result<DiagramIdeal> {
    check_shape(d, avoid)?;
    let mut reaches: Vec<Vec<bool>> = d.levels.iter().map(|l| vec![false; l.len()]).collect();
    for n in (0..d.depth()).rev() {
        for i in 0..d.levels[n].len() {
            let v = Vertex::new(n, i);
            reaches[n][i] =
                avoid.contains(v) || d.successors(v).any(|e| reaches[n + 1][e.to]);
        }
    }
    let members = reaches
        .iter()
        .map(|r| r.iter().enumerate().filter(|(_, &x)| !x).map(|(i, _)| i).collect())
        .collect();
    Ok(DiagramIdeal::new(members))
}

/// Left-half vertices of the strictly_rfd diagram.
pub fn left_half(d: &BratteliDiagram) -> Result<DiagramIdeal> {
    require_rule(d, Rule::StrictlyRfd, "left_half")?;
    let members = d.levels.iter().map(|l| (0..l.len() / 2).collect()).collect();
    Ok(DiagramIdeal::new(members).described("left half".into()))
}

/// U_k in the strictly_rfd diagram: the largest ideal avoiding column k
/// (1-based) of the left half. Needs depth ≥ k so the column is visible.
pub fn strictly_rfd_u(d: &BratteliDiagram, k: usize) -> Result<DiagramIdeal> {
    require_rule(d, Rule::StrictlyRfd, "strictly_rfd_u")?;
    if k == 0 {
        return Err(Error::Malformed("columns are numbered from 1".into()));
    }
    if d.depth() < k {
        return Err(Error::Precondition(format!(
            "depth {} is too shallow to see column {k}",
            d.depth()
        )));
    }
    let column = DiagramIdeal::from_vertices(d, (k - 1..d.depth()).map(|n| Vertex::new(n, k - 1)));
    Ok(largest_ideal_avoiding(d, &column)?.described(format!("U_{k}")))
}

/// The diagram on the complement of `u`, with the induced edges. Trailing
/// empty levels are dropped; the quotient by everything has no levels.
pub fn quotient(d: &BratteliDiagram, u: &DiagramIdeal) -> Result<BratteliDiagram> {
    if let Some(v) = ideal_violation(d, u)? {
        return Err(Error::Precondition(format!("not an ideal: {v}")));
    }
    let kept: Vec<Vec<usize>> = d
        .levels
        .iter()
        .enumerate()
        .map(|(n, l)| (0..l.len()).filter(|&i| !u.contains(Vertex::new(n, i))).collect())
        .collect();
    let depth = kept.iter().take_while(|k| !k.is_empty()).count();
    let renumber = |n: usize, i: usize| kept[n].binary_search(&i).ok();
    let levels = (0..depth)
        .map(|n| kept[n].iter().map(|&i| d.levels[n][i]).collect())
        .collect();
    let edges = (0..depth.saturating_sub(1))
        .map(|n| {
            d.edges[n]
                .iter()
                .filter_map(|e| {
                    Some(Edge {
                        from: renumber(n, e.from)?,
                        to: renumber(n + 1, e.to)?,
                        mult: e.mult,
                    })
                })
                .collect()
        })
        .collect();
    BratteliDiagram::new(levels, edges)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LimitDimension {
    /// Stable from `from_level` (1-based): the limit is ⊕ M_{dims[i]}.
    Finite { dims: Vec<u64>, from_level: usize },
    Infinite,
    Undetermined,
}

/// Semi-decides the size of the limit algebra from levels 1..=horizon.
///
/// Finite when, from some level on, consecutive levels are joined by a
/// multiplicity-one bijection. Infinite only for the named rules, whose level
/// dimensions grow strictly at every step.
pub fn limit_dimension(d: &BratteliDiagram, horizon: usize) -> Result<LimitDimension> {
    if horizon > d.depth() {
        return Err(Error::Precondition(format!(
            "horizon {horizon} exceeds the materialized depth {}",
            d.depth()
        )));
    }
    if horizon == 0 {
        return Ok(LimitDimension::Undetermined);
    }
    let bijective = |n: usize| {
        let (src, dst) = (&d.levels[n], &d.levels[n + 1]);
        let es = &d.edges[n];
        src.len() == dst.len()
            && es.len() == src.len()
            && es.iter().all(|e| e.mult == 1)
            && es.iter().map(|e| e.from).collect::<BTreeSet<_>>().len() == src.len()
            && es.iter().map(|e| e.to).collect::<BTreeSet<_>>().len() == dst.len()
    };
    // Smallest start level with every later transition bijective; need at least one transition.
    let mut start = horizon - 1;
    while start > 0 && bijective(start - 1) {
        start -= 1;
    }
    if start + 1 < horizon {
        return Ok(LimitDimension::Finite {
            dims: d.levels[start].clone(),
            from_level: start + 1,
        });
    }
    let growing = horizon >= 2
        && (1..horizon).all(|n| d.level_dimension(n) > d.level_dimension(n - 1));
    if d.rule.is_some() && growing {
        return Ok(LimitDimension::Infinite);
    }
    Ok(LimitDimension::Undetermined)
}

/// k(j) for j = 1..=j_max: the matrix size of the quotient of the y_infty
/// diagram by U(Y∞ ∖ {j}). Needs depth ≥ j_max + 1 to see stabilization.
pub fn primitive_quotient_sizes(d: &BratteliDiagram, j_max: usize) -> Result<Vec<u64>> {
    require_rule(d, Rule::YInfty, "primitive_quotient_sizes")?;
    if d.depth() < j_max + 1 {
        return Err(Error::Precondition(format!(
            "depth {} is insufficient for j up to {j_max}; need {}",
            d.depth(),
            j_max + 1
        )));
    }
    (1..=j_max)
        .map(|j| {
            let u = ideal_from_open_set(d, &BTreeSet::from([j]))?;
            let q = quotient(d, &u)?;
            match limit_dimension(&q, q.depth())? {
                LimitDimension::Finite { dims, .. } if dims.len() == 1 => Ok(dims[0]),
                other => Err(Error::Precondition(format!(
                    "quotient for j = {j} did not stabilize to a full matrix algebra: {other:?}"
                ))),
            }
        })
        .collect()
}

/// Every ideal of the truncated diagram, by brute force over vertex subsets.
pub fn enumerate_ideals(d: &BratteliDiagram) -> Result<Vec<DiagramIdeal>> {
    let vs: Vec<Vertex> = d.vertices().collect();
    if vs.len() > ENUMERATION_VERTEX_LIMIT {
        return Err(Error::cap("ideal enumeration vertices", vs.len(), ENUMERATION_VERTEX_LIMIT));
    }
    let mut out = Vec::new();
    for mask in 0u32..(1 << vs.len()) {
        let u = DiagramIdeal::from_vertices(
            d,
            vs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v),
        );
        if ideal_violation(d, &u)?.is_none() {
            out.push(u);
        }
    }
    Ok(out)
}

/// Brute-force ideals of a truncated y_infty diagram compared with the
/// open-set formula.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdealComparison {
    pub depth: usize,
    pub enumerated: usize,
    /// Distinct formula ideals after restriction (including the zero ideal).
    pub formula: usize,
    pub matched: usize,
    /// Formula ideals missing from the enumeration.
    pub missing: Vec<DiagramIdeal>,
    /// Enumerated sets that no formula ideal restricts to.
    pub truncation_artifacts: Vec<DiagramIdeal>,
}

impl IdealComparison {
    pub fn discrepancies(&self) -> usize {
        self.missing.len()
    }
}

pub fn compare_with_open_set_formula(d: &BratteliDiagram) -> Result<IdealComparison> {
    require_rule(d, Rule::YInfty, "compare_with_open_set_formula")?;
    let depth = d.depth();
    let mut formula: Vec<DiagramIdeal> = vec![DiagramIdeal::empty(d).described("zero ideal".into())];
    // Any F with max F > depth restricts to the zero ideal, so subsets of 1..=depth suffice.
    for mask in 0u32..(1 << depth) {
        let f: BTreeSet<usize> = (1..=depth).filter(|j| mask >> (j - 1) & 1 == 1).collect();
        let u = ideal_from_open_set(d, &f)?;
        if !formula.iter().any(|w| w.same_members(&u)) {
            formula.push(u);
        }
    }
    let enumerated = enumerate_ideals(d)?;
    let missing: Vec<DiagramIdeal> = formula
        .iter()
        .filter(|u| !enumerated.iter().any(|e| e.same_members(u)))
        .cloned()
        .collect();
    let truncation_artifacts: Vec<DiagramIdeal> = enumerated
        .iter()
        .filter(|e| !formula.iter().any(|u| u.same_members(e)))
        .map(|e| e.clone().described("truncation artifact".into()))
        .collect();
    Ok(IdealComparison {
        depth,
        enumerated: enumerated.len(),
        formula: formula.len(),
        matched: formula.len() - missing.len(),
        missing,
        truncation_artifacts,
    })
}

fn hereditary_closure(d: &BratteliDiagram, u: &DiagramIdeal) -> DiagramIdeal {
    let mut out = u.truncate(d.depth());
    for (n, edges) in d.edges.iter().enumerate() {
        for e in edges {
            if out.members[n].contains(&e.from) {
                out.members[n + 1].insert(e.to);
            }
        }
    }
    out
}

/// Whether `u` meets every non-empty ideal of the truncation. For rule-defined
/// diagrams both sides are first closed forward through a few extra levels, so
/// ideals that only look disjoint because of the cut-off are not counted.
pub fn is_essential(d: &BratteliDiagram, u: &DiagramIdeal, limits: &Limits) -> Result<bool> {
    check_shape(d, u)?;
    let ideals = enumerate_ideals(d)?;
    let ext = match d.rule {
        Some(_) => d.with_depth(
            d.depth() + ESSENTIAL_LOOKAHEAD,
            &Limits {
                depth_cap: limits.depth_cap + ESSENTIAL_LOOKAHEAD,
                ..*limits
            },
        )?,
        None => d.clone(),
    };
    let u_ext = hereditary_closure(&ext, u);
    Ok(ideals
        .iter()
        .filter(|v| !v.is_empty())
        .all(|v| hereditary_closure(&ext, v).intersects(&u_ext)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lim() -> Limits {
        Limits::default()
    }

    fn set(xs: &[usize]) -> BTreeSet<usize> {
        xs.iter().copied().collect()
    }

    #[test]
    fn y_infty_dims() {
        let d = build_y_infty(4, &lim()).unwrap();
        assert_eq!(d.levels(), &[vec![1], vec![1, 1], vec![1, 1, 2], vec![1, 1, 2, 4]]);
        assert_eq!(build_y_infty(1, &lim()).unwrap().levels(), &[vec![1]]);
        let d6 = build_y_infty(6, &lim()).unwrap();
        assert_eq!(*d6.dims(5).last().unwrap(), 16);
        assert!(build_y_infty(0, &lim()).is_err());
        assert_eq!(build_y_infty(13, &lim()).unwrap_err().kind(), "resource_cap");
    }

    #[test]
    fn strictly_rfd_shape() {
        let d = build_strictly_rfd(3, &lim()).unwrap();
        assert_eq!(d.levels(), &[vec![1, 1], vec![1, 2, 1, 1], vec![1, 2, 4, 1, 1, 2]]);
    }

    #[test]
    fn ideal_checks() {
        let d = build_y_infty(5, &lim()).unwrap();
        for j in 1..=5 {
            let u = ideal_from_open_set(&d, &set(&[j])).unwrap();
            assert!(is_ideal(&d, &u).unwrap(), "j = {j}");
        }
        assert!(is_ideal(&d, &DiagramIdeal::empty(&d)).unwrap());
        assert!(is_ideal(&d, &DiagramIdeal::full(&d)).unwrap());
        let single = DiagramIdeal::from_vertices(&d, [Vertex::new(2, 0)]);
        assert_eq!(
            ideal_violation(&d, &single).unwrap(),
            Some(IdealViolation::Hereditary {
                from: Vertex::new(2, 0),
                to: Vertex::new(3, 0)
            })
        );
    }

    #[test]
    fn open_set_formula() {
        let d = build_y_infty(4, &lim()).unwrap();
        let u = ideal_from_open_set(&d, &set(&[2])).unwrap();
        let expected = DiagramIdeal::from_vertices(
            &d,
            d.vertices().filter(|v| v.level >= 1 && v.index != 1),
        );
        assert!(u.same_members(&expected));
        let u = ideal_from_open_set(&d, &set(&[1, 3])).unwrap();
        let expected = DiagramIdeal::from_vertices(
            &d,
            d.vertices().filter(|v| v.level >= 2 && v.index != 0 && v.index != 2),
        );
        assert!(u.same_members(&expected));
        let all = ideal_from_open_set(&d, &BTreeSet::new()).unwrap();
        assert!(all.same_members(&DiagramIdeal::full(&d)));
    }

    #[test]
    fn quotients() {
        let d = build_y_infty(8, &lim()).unwrap();
        let q = quotient(&d, &ideal_from_open_set(&d, &set(&[2])).unwrap()).unwrap();
        assert!(q.levels().iter().all(|l| l == &vec![1]));
        assert_eq!(
            limit_dimension(&q, q.depth()).unwrap(),
            LimitDimension::Finite { dims: vec![1], from_level: 1 }
        );
        let q = quotient(&d, &ideal_from_open_set(&d, &set(&[1, 3])).unwrap()).unwrap();
        assert_eq!(
            limit_dimension(&q, q.depth()).unwrap(),
            LimitDimension::Finite { dims: vec![1, 2], from_level: 3 }
        );
        assert_eq!(quotient(&d, &DiagramIdeal::empty(&d)).unwrap().levels(), d.levels());
        assert_eq!(limit_dimension(&d, 8).unwrap(), LimitDimension::Infinite);
        let bad = DiagramIdeal::from_vertices(&d, [Vertex::new(2, 0)]);
        assert_eq!(quotient(&d, &bad).unwrap_err().kind(), "precondition");
    }

    #[test]
    fn strictly_rfd_quotients() {
        let d = build_strictly_rfd(7, &lim()).unwrap();
        let u3 = strictly_rfd_u(&d, 3).unwrap();
        assert!(is_ideal(&d, &u3).unwrap());
        let q = quotient(&d, &u3).unwrap();
        assert_eq!(q.levels()[..3], [vec![1, 1], vec![1, 2, 1], vec![4]]);
        assert_eq!(
            limit_dimension(&q, q.depth()).unwrap(),
            LimitDimension::Finite { dims: vec![4], from_level: 3 }
        );
        let left = left_half(&d).unwrap();
        let right = quotient(&d, &left).unwrap();
        let y = build_y_infty(7, &lim()).unwrap();
        assert_eq!((right.levels(), right.edges()), (y.levels(), y.edges()));
    }

    #[test]
    fn k_sequence_from_diagram() {
        let d = build_y_infty(11, &lim()).unwrap();
        let ks = primitive_quotient_sizes(&d, 10).unwrap();
        assert_eq!(ks, vec![1, 1, 2, 4, 8, 16, 32, 64, 128, 256]);
        assert!(primitive_quotient_sizes(&d, 11).is_err());
    }

    #[test]
    fn enumeration_matches_formula() {
        let d1 = build_y_infty(1, &lim()).unwrap();
        assert_eq!(enumerate_ideals(&d1).unwrap().len(), 2);
        let d3 = build_y_infty(3, &lim()).unwrap();
        let cmp = compare_with_open_set_formula(&d3).unwrap();
        assert_eq!(cmp.discrepancies(), 0);
        assert_eq!(cmp.enumerated, cmp.formula + cmp.truncation_artifacts.len());
        let big = build_y_infty(6, &lim()).unwrap();
        assert_eq!(enumerate_ideals(&big).unwrap_err().kind(), "resource_cap");
    }

    #[test]
    fn essential_ideals() {
        let d = build_strictly_rfd(3, &lim()).unwrap();
        assert!(is_essential(&d, &left_half(&d).unwrap(), &lim()).unwrap());
        assert!(is_essential(&d, &DiagramIdeal::full(&d), &lim()).unwrap());

        let chains = BratteliDiagram::new(
            vec![vec![1, 1]; 3],
            vec![vec![Edge { from: 0, to: 0, mult: 1 }, Edge { from: 1, to: 1, mult: 1 }]; 2],
        )
        .unwrap();
        let left = DiagramIdeal::from_vertices(&chains, (0..3).map(|n| Vertex::new(n, 0)));
        assert!(is_ideal(&chains, &left).unwrap());
        assert!(!is_essential(&chains, &left, &lim()).unwrap());
    }

    #[test]
    fn json_round_trip_and_validation() {
        let d = build_strictly_rfd(3, &lim()).unwrap();
        let json = serde_json::to_string(&d).unwrap();
        let back: BratteliDiagram = serde_json::from_str(&json).unwrap();
        assert_eq!(back, d);
        let bad = r#"{"levels": [[1], [2]], "edges": [[{"from": 0, "to": 0, "mult": 1}]], "rule": null}"#;
        assert!(serde_json::from_str::<BratteliDiagram>(bad).is_err());
        let dead = r#"{"levels": [[1, 1], [1]], "edges": [[{"from": 0, "to": 0, "mult": 1}]]}"#;
        assert!(serde_json::from_str::<BratteliDiagram>(dead).is_err());
    }

    #[test]
    fn dot_marks_members() {
        let d = build_y_infty(3, &lim()).unwrap();
        let u = ideal_from_open_set(&d, &set(&[2])).unwrap();
        let dot = d.to_dot(Some(&u));
        assert_eq!(dot.matches("marked=true").count(), u.len());
        assert!(dot.contains("v1_0 -> v2_2"));
    }
}
