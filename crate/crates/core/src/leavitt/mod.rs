//! Leavitt path algebras of finite quivers by normal-form rewriting, their
//! relation presentation, and stable representations.
//!
//! Conventions: `p^e = 1_{t(e)} p^e 1_{s(e)}`, `p*_e p^f = δ_{e,f} 1_{s(e)}` and, at
//! each vertex `v` with a nonempty incoming fiber, `1_v = Σ_{t(e)=v} p^e p*_e`.
//! A path `e1.e2...ek` is the product `p^{e1} p^{e2} ... p^{ek}` and requires
//! `s(e_i) = t(e_{i+1})`.
//!
//! | here              | usual Leavitt path algebra notation |
//! |-------------------|-------------------------------------|
//! | `t(e)`            | `s(e)`                              |
//! | `s(e)`            | `r(e)`                              |
//! | `p^e`             | `e`                                 |
//! | `p*_e`            | `e*`                                |
//! | incoming fiber    | edges emitted by a vertex           |

mod element;
mod rewrite;
mod stable;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::quiver::{discrete_quiver, ClassicalQuiver, QuantumQuiver, QuiverError};

pub use element::{LpaElement, LpaMonomial};
pub use rewrite::Strategy;
pub use stable::{
    cp_relation_audit, module_to_rep, rep_to_module, stable_rep_check, AuditEntry, Combination,
    ModuleAction, ModuleFailure, Presentation, Relation, RelationKind, StableFailure, StableRep,
    StableRepFile, StableReport,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LeavittError {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("label `{0}` cannot be used in words (whitespace or one of . * ( ) ; + is not allowed)")]
    BadLabel(String),
    #[error("cannot parse `{text}`: {reason}")]
    Parse { text: String, reason: String },
    #[error("elements belong to different algebras")]
    AlgebraMismatch,
    #[error("shape mismatch at vertex `{vertex}`: {detail}")]
    Shape { vertex: String, detail: String },
    #[error("module relation fails for generators `{left}` `{right}`")]
    Relation { left: String, right: String },
    #[error("quantum quiver has no discreteness witness: its structure maps are not linearized set maps")]
    NotDiscrete,
    #[error(transparent)]
    Quiver(#[from] QuiverError),
}

/// Which vertices carry the relation `1_v = Σ_{t(e)=v} p^e p*_e`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Only vertices with a nonempty incoming fiber.
    #[default]
    Standard,
    /// Every vertex; vertices with empty fiber, and everything they force, vanish.
    Absolute,
}

impl std::str::FromStr for Mode {
    type Err = LeavittError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "standard" => Ok(Mode::Standard),
            "absolute" => Ok(Mode::Absolute),
            other => Err(LeavittError::Parse {
                text: other.to_string(),
                reason: "mode is `standard` or `absolute`".into(),
            }),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Standard => "standard",
            Mode::Absolute => "absolute",
        })
    }
}

/// A generator of the free algebra on a quiver.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Vertex(usize),
    Edge(usize),
    Ghost(usize),
}

#[derive(Debug, PartialEq, Eq)]
struct Data {
    quiver: ClassicalQuiver,
    mode: Mode,
    s: Vec<usize>,
    t: Vec<usize>,
    incoming: Vec<Vec<usize>>,
    dead_vertex: Vec<bool>,
    dead_edge: Vec<bool>,
    /// Special edge of each vertex carrying the sum relation.
    special: Vec<Option<usize>>,
}

/// The Leavitt path algebra of a finite quiver in a given mode. Cheap to clone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Leavitt {
    data: Arc<Data>,
}

fn valid_label(l: &str) -> bool {
    !l.is_empty() && !l.chars().any(|c| c.is_whitespace() || ".*();+".contains(c))
}

impl Leavitt {
    pub fn new(quiver: ClassicalQuiver, mode: Mode) -> Result<Self, LeavittError> {
        quiver.check()?;
        for l in quiver.vertices.iter().chain(quiver.edges.iter().map(|e| &e.name)) {
            if !valid_label(l) {
                return Err(LeavittError::BadLabel(l.clone()));
            }
        }
        let nv = quiver.vertices.len();
        let ne = quiver.edges.len();
        let (s, t): (Vec<usize>, Vec<usize>) = (0..ne).map(|e| quiver.endpoints(e)).unzip();
        let incoming: Vec<Vec<usize>> = (0..nv).map(|v| quiver.incoming(v)).collect();
        let mut dead_vertex = vec![false; nv];
        let mut dead_edge = vec![false; ne];
        if mode == Mode::Absolute {
            loop {
                let mut changed = false;
                for e in 0..ne {
                    if !dead_edge[e] && (dead_vertex[s[e]] || dead_vertex[t[e]]) {
                        dead_edge[e] = true;
                        changed = true;
                    }
                }
                for v in 0..nv {
                    if !dead_vertex[v] && incoming[v].iter().all(|&e| dead_edge[e]) {
                        dead_vertex[v] = true;
                        changed = true;
                    }
                }
                if !changed {
                    break;
                }
            }
        }
        let special = incoming
            .iter()
            .map(|fiber| {
                fiber
                    .iter()
                    .copied()
                    .filter(|&e| !dead_edge[e])
                    .min_by(|&a, &b| quiver.edges[a].name.cmp(&quiver.edges[b].name))
            })
            .collect();
        Ok(Leavitt {
            data: Arc::new(Data {
                quiver,
                mode,
                s,
                t,
                incoming,
                dead_vertex,
                dead_edge,
                special,
            }),
        })
    }

    /// Accepts a quantum quiver only when its structure maps are linearized set maps.
    pub fn from_quantum(q: &QuantumQuiver, mode: Mode) -> Result<Self, LeavittError> {
        let classical = discrete_quiver(q).ok_or(LeavittError::NotDiscrete)?;
        Leavitt::new(classical, mode)
    }

    pub fn quiver(&self) -> &ClassicalQuiver {
        &self.data.quiver
    }

    pub fn mode(&self) -> Mode {
        self.data.mode
    }

    pub fn num_vertices(&self) -> usize {
        self.data.quiver.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.data.quiver.edges.len()
    }

    pub fn s(&self, e: usize) -> usize {
        self.data.s[e]
    }

    pub fn t(&self, e: usize) -> usize {
        self.data.t[e]
    }

    /// Edges with `t(e) = v`.
    pub fn incoming(&self, v: usize) -> &[usize] {
        &self.data.incoming[v]
    }

    pub fn special_edge(&self, v: usize) -> Option<usize> {
        self.data.special[v]
    }

    pub fn is_dead_vertex(&self, v: usize) -> bool {
        self.data.dead_vertex[v]
    }

    pub fn is_dead_edge(&self, e: usize) -> bool {
        self.data.dead_edge[e]
    }

    /// Vertices where `1_v = Σ_{t(e)=v} p^e p*_e` is imposed with a nonzero right side.
    pub fn has_sum_relation(&self, v: usize) -> bool {
        self.data.special[v].is_some()
    }

    pub fn vertex_label(&self, v: usize) -> &str {
        &self.data.quiver.vertices[v]
    }

    pub fn edge_label(&self, e: usize) -> &str {
        &self.data.quiver.edges[e].name
    }

    pub fn vertex_index(&self, label: &str) -> Result<usize, LeavittError> {
        self.data
            .quiver
            .vertex_index(label)
            .ok_or_else(|| LeavittError::UnknownVertex(label.to_string()))
    }

    pub fn edge_index(&self, label: &str) -> Result<usize, LeavittError> {
        self.data
            .quiver
            .edge_index(label)
            .ok_or_else(|| LeavittError::UnknownEdge(label.to_string()))
    }

    /// All generators: vertices, then edges, then ghost edges.
    pub fn generators(&self) -> Vec<Letter> {
        (0..self.num_vertices())
            .map(Letter::Vertex)
            .chain((0..self.num_edges()).map(Letter::Edge))
            .chain((0..self.num_edges()).map(Letter::Ghost))
            .collect()
    }

    pub fn letter_label(&self, l: Letter) -> String {
        match l {
            Letter::Vertex(v) => format!("v({})", self.vertex_label(v)),
            Letter::Edge(e) => self.edge_label(e).to_string(),
            Letter::Ghost(e) => format!("{}*", self.edge_label(e)),
        }
    }

    pub fn word_label(&self, w: &[Letter]) -> String {
        w.iter().map(|&l| self.letter_label(l)).collect::<Vec<_>>().join(" ")
    }

    /// `(left, right)` vertices with `l = 1_left · l · 1_right`.
    pub fn letter_vertices(&self, l: Letter) -> (usize, usize) {
        match l {
            Letter::Vertex(v) => (v, v),
            Letter::Edge(e) => (self.t(e), self.s(e)),
            Letter::Ghost(e) => (self.s(e), self.t(e)),
        }
    }

    /// Parses a whitespace-separated word such as `v(a) e e*`.
    pub fn parse_word(&self, text: &str) -> Result<Vec<Letter>, LeavittError> {
        let letters: Vec<Letter> = text
            .split_whitespace()
            .map(|tok| self.parse_letter(tok))
            .collect::<Result<_, _>>()?;
        if letters.is_empty() {
            return Err(LeavittError::Parse {
                text: text.to_string(),
                reason: "empty word".into(),
            });
        }
        Ok(letters)
    }

    fn parse_letter(&self, tok: &str) -> Result<Letter, LeavittError> {
        if let Some(inner) = tok.strip_prefix("v(").and_then(|r| r.strip_suffix(')')) {
            return Ok(Letter::Vertex(self.vertex_index(inner)?));
        }
        if let Some(edge) = tok.strip_suffix('*') {
            return Ok(Letter::Ghost(self.edge_index(edge)?));
        }
        Ok(Letter::Edge(self.edge_index(tok)?))
    }

    /// Normal form of a word.
    pub fn normalize(&self, word: &[Letter]) -> LpaElement {
        self.normalize_with(word, Strategy::Leftmost)
    }

    pub fn normalize_with(&self, word: &[Letter], strategy: Strategy) -> LpaElement {
        rewrite::normalize(self, word, strategy)
    }

    pub fn normalize_text(&self, text: &str) -> Result<LpaElement, LeavittError> {
        Ok(self.normalize(&self.parse_word(text)?))
    }

    /// `Σ_v 1_v`.
    pub fn unit(&self) -> LpaElement {
        let mut out = LpaElement::zero(self);
        for v in 0..self.num_vertices() {
            out = out.add(&self.normalize(&[Letter::Vertex(v)]));
        }
        out
    }

    /// Normal-form monomials reached by closing the generators under products.
    /// Returns `None` when more than `limit` monomials appear.
    pub fn closure_basis(&self, limit: usize) -> Option<Vec<LpaMonomial>> {
        let mut basis: BTreeSet<LpaMonomial> = BTreeSet::new();
        for g in self.generators() {
            basis.extend(self.normalize(&[g]).terms().map(|(m, _)| m.clone()));
        }
        let mut frontier: Vec<LpaMonomial> = basis.iter().cloned().collect();
        while !frontier.is_empty() {
            let current: Vec<LpaMonomial> = basis.iter().cloned().collect();
            let mut fresh = Vec::new();
            for a in &frontier {
                for b in &current {
                    for (x, y) in [(a, b), (b, a)] {
                        for (m, _) in self.mul_monomials(x, y).terms() {
                            if !basis.contains(m) {
                                basis.insert(m.clone());
                                fresh.push(m.clone());
                            }
                        }
                    }
                }
                if basis.len() > limit {
                    return None;
                }
            }
            frontier = fresh;
        }
        Some(basis.into_iter().collect())
    }

    pub fn mul_monomials(&self, a: &LpaMonomial, b: &LpaMonomial) -> LpaElement {
        let mut w = a.word();
        w.extend(b.word());
        self.normalize(&w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dead_vertices_in_absolute_mode() {
        let a2 = Leavitt::new(ClassicalQuiver::a2(), Mode::Absolute).unwrap();
        assert!(a2.is_dead_vertex(0));
        assert!(a2.is_dead_edge(0));
        assert!(a2.is_dead_vertex(1));
        let lp = Leavitt::new(ClassicalQuiver::single_loop(), Mode::Absolute).unwrap();
        assert!(!lp.is_dead_vertex(0));
        let std = Leavitt::new(ClassicalQuiver::a2(), Mode::Standard).unwrap();
        assert!(!std.has_sum_relation(0));
        assert_eq!(std.special_edge(1), Some(0));
    }

    #[test]
    fn parsing_words() {
        let q = Leavitt::new(ClassicalQuiver::a2(), Mode::Standard).unwrap();
        assert_eq!(
            q.parse_word("v(a) e e*").unwrap(),
            vec![Letter::Vertex(0), Letter::Edge(0), Letter::Ghost(0)]
        );
        assert_eq!(q.parse_word("f").unwrap_err(), LeavittError::UnknownEdge("f".into()));
        assert_eq!(q.parse_word("v(z)").unwrap_err(), LeavittError::UnknownVertex("z".into()));
        assert!(q.parse_word("  ").is_err());
        let bad = ClassicalQuiver {
            vertices: vec!["a.b".into()],
            edges: vec![],
        };
        assert_eq!(Leavitt::new(bad, Mode::Standard).unwrap_err(), LeavittError::BadLabel("a.b".into()));
    }

    #[test]
    fn quantum_quivers_need_a_witness() {
        let qq = QuantumQuiver::from_classical(&ClassicalQuiver::single_loop()).unwrap();
        assert!(Leavitt::from_quantum(&qq, Mode::Standard).is_ok());
        use crate::coalg::Coalgebra;
        use crate::elements::CoalgebraMap;
        let c = Arc::new(Coalgebra::comatrix(2));
        let pt = Arc::new(Coalgebra::singleton());
        let s = CoalgebraMap::new(c.clone(), Arc::new(pt.opposite()), c.eps_matrix()).unwrap();
        let qq = QuantumQuiver::new(s, CoalgebraMap::counit_collapse(c)).unwrap();
        assert_eq!(Leavitt::from_quantum(&qq, Mode::Standard).unwrap_err(), LeavittError::NotDiscrete);
    }
}
