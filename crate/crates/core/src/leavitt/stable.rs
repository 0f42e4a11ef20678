use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Leavitt, LeavittError, Letter, LpaElement, Mode};
use crate::exact::{Matrix, Scalar};

/// Vertex spaces `N_v` with `ω_v: N_v -> ⊕_{t(e)=v} N_{s(e)}` and `σ_v` back.
/// Blocks follow the incoming fiber in edge order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StableRep {
    alg: Leavitt,
    dims: Vec<usize>,
    omega: Vec<Matrix>,
    sigma: Vec<Matrix>,
}

fn fiber_dim(alg: &Leavitt, dims: &[usize], v: usize) -> usize {
    alg.incoming(v).iter().map(|&e| dims[alg.s(e)]).sum()
}

/// Row offset of each incoming edge's block at `v`.
fn offsets(alg: &Leavitt, dims: &[usize], v: usize) -> Vec<(usize, usize)> {
    let mut at = 0;
    alg.incoming(v)
        .iter()
        .map(|&e| {
            let o = at;
            at += dims[alg.s(e)];
            (e, o)
        })
        .collect()
}

impl StableRep {
    pub fn new(
        alg: &Leavitt,
        dims: Vec<usize>,
        omega: Vec<Matrix>,
        sigma: Vec<Matrix>,
    ) -> Result<Self, LeavittError> {
        let nv = alg.num_vertices();
        if dims.len() != nv || omega.len() != nv || sigma.len() != nv {
            return Err(LeavittError::Shape {
                vertex: String::new(),
                detail: format!("expected data for {nv} vertices"),
            });
        }
        for v in 0..nv {
            let f = fiber_dim(alg, &dims, v);
            let shape_err = |what: &str, got: (usize, usize), want: (usize, usize)| LeavittError::Shape {
                vertex: alg.vertex_label(v).to_string(),
                detail: format!("{what} is {got:?}, expected {want:?}"),
            };
            if omega[v].shape() != (f, dims[v]) {
                return Err(shape_err("omega", omega[v].shape(), (f, dims[v])));
            }
            if sigma[v].shape() != (dims[v], f) {
                return Err(shape_err("sigma", sigma[v].shape(), (dims[v], f)));
            }
        }
        Ok(StableRep {
            alg: alg.clone(),
            dims,
            omega,
            sigma,
        })
    }

    pub fn algebra(&self) -> &Leavitt {
        &self.alg
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn omega(&self, v: usize) -> &Matrix {
        &self.omega[v]
    }

    pub fn sigma(&self, v: usize) -> &Matrix {
        &self.sigma[v]
    }

    pub fn from_file(alg: &Leavitt, file: &StableRepFile) -> Result<Self, LeavittError> {
        let nv = alg.num_vertices();
        let mut dims = vec![0; nv];
        for (label, &d) in &file.dims {
            dims[alg.vertex_index(label)?] = d;
        }
        let dense = |table: &BTreeMap<String, Vec<Vec<Scalar>>>, v: usize, shape: (usize, usize)| {
            let label = alg.vertex_label(v);
            let mut m = Matrix::zeros(shape.0, shape.1);
            if let Some(rows) = table.get(label) {
                if rows.len() != shape.0 || rows.iter().any(|r| r.len() != shape.1) {
                    return Err(LeavittError::Shape {
                        vertex: label.to_string(),
                        detail: format!("expected a {}×{} matrix", shape.0, shape.1),
                    });
                }
                for (i, row) in rows.iter().enumerate() {
                    for (j, x) in row.iter().enumerate() {
                        m.set(i, j, x.clone());
                    }
                }
            }
            Ok(m)
        };
        for label in file.omega.keys().chain(file.sigma.keys()) {
            alg.vertex_index(label)?;
        }
        let mut omega = Vec::with_capacity(nv);
        let mut sigma = Vec::with_capacity(nv);
        for v in 0..nv {
            let f = fiber_dim(alg, &dims, v);
            omega.push(dense(&file.omega, v, (f, dims[v]))?);
            sigma.push(dense(&file.sigma, v, (dims[v], f))?);
        }
        StableRep::new(alg, dims, omega, sigma)
    }

    pub fn to_file(&self) -> StableRepFile {
        let label = |v: usize| self.alg.vertex_label(v).to_string();
        StableRepFile {
            dims: (0..self.dims.len()).map(|v| (label(v), self.dims[v])).collect(),
            omega: (0..self.dims.len()).map(|v| (label(v), self.omega[v].to_dense())).collect(),
            sigma: (0..self.dims.len()).map(|v| (label(v), self.sigma[v].to_dense())).collect(),
        }
    }
}

/// On-disk stable representation, keyed by vertex label; matrices are dense rows.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StableRepFile {
    pub dims: BTreeMap<String, usize>,
    #[serde(default)]
    pub omega: BTreeMap<String, Vec<Vec<Scalar>>>,
    #[serde(default)]
    pub sigma: BTreeMap<String, Vec<Vec<Scalar>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "equation", rename_all = "snake_case")]
pub enum StableFailure {
    /// `σ_v ∘ ω_v ≠ Id`.
    Retraction { vertex: String },
    /// Block `(row_edge, col_edge)` of `ω_v ∘ σ_v` differs from `δ Id`.
    Section {
        vertex: String,
        row_edge: String,
        col_edge: String,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct StableReport {
    pub failures: Vec<StableFailure>,
}

impl StableReport {
    pub fn passes(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `σ_v∘ω_v = Id` at every vertex carrying the sum relation (every vertex in
/// absolute mode), and `ω_v∘σ_v = Id` blockwise everywhere.
pub fn stable_rep_check(r: &StableRep) -> StableReport {
    let alg = &r.alg;
    let mut failures = Vec::new();
    for v in 0..alg.num_vertices() {
        let vl = alg.vertex_label(v).to_string();
        let imposed = alg.mode() == Mode::Absolute || !alg.incoming(v).is_empty();
        if imposed && r.sigma[v].mul(&r.omega[v]) != Matrix::identity(r.dims[v]) {
            failures.push(StableFailure::Retraction { vertex: vl.clone() });
        }
        let ws = r.omega[v].mul(&r.sigma[v]);
        let offs = offsets(alg, &r.dims, v);
        for &(f, of) in &offs {
            for &(e, oe) in &offs {
                let (df, de) = (r.dims[alg.s(f)], r.dims[alg.s(e)]);
                let block = ws.block(of, oe, df, de);
                let expected = if e == f { Matrix::identity(df) } else { Matrix::zeros(df, de) };
                if block != expected {
                    failures.push(StableFailure::Section {
                        vertex: vl.clone(),
                        row_edge: alg.edge_label(f).to_string(),
                        col_edge: alg.edge_label(e).to_string(),
                    });
                }
            }
        }
    }
    StableReport { failures }
}

/// Right module structure on `N = ⊕_v N_v`: `p^e` acts `N_{t(e)} -> N_{s(e)}` and
/// `p*_e` acts `N_{s(e)} -> N_{t(e)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleAction {
    alg: Leavitt,
    pub dims: Vec<usize>,
    /// `dims[s(e)] × dims[t(e)]`.
    pub edge: Vec<Matrix>,
    /// `dims[t(e)] × dims[s(e)]`.
    pub ghost: Vec<Matrix>,
}

/// A relation that fails in a module, with the generators whose product exposed it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuleFailure {
    pub left: String,
    pub right: String,
}

impl ModuleAction {
    pub fn algebra(&self) -> &Leavitt {
        &self.alg
    }

    fn offset(&self, v: usize) -> usize {
        self.dims[..v].iter().sum()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Matrix of `n ↦ n ◁ l` on `N`.
    pub fn letter(&self, l: Letter) -> Matrix {
        let n = self.total_dim();
        let mut m = Matrix::zeros(n, n);
        match l {
            Letter::Vertex(v) => m.set_block(self.offset(v), self.offset(v), &Matrix::identity(self.dims[v])),
            Letter::Edge(e) => {
                let (s, t) = (self.alg.s(e), self.alg.t(e));
                m.set_block(self.offset(s), self.offset(t), &self.edge[e]);
            }
            Letter::Ghost(e) => {
                let (s, t) = (self.alg.s(e), self.alg.t(e));
                m.set_block(self.offset(t), self.offset(s), &self.ghost[e]);
            }
        }
        m
    }

    /// `n ◁ (l₁ ⋯ l_k) = (⋯(n ◁ l₁) ⋯) ◁ l_k`.
    pub fn word(&self, w: &[Letter]) -> Matrix {
        let mut m = Matrix::identity(self.total_dim());
        for &l in w {
            m = self.letter(l).mul(&m);
        }
        m
    }

    pub fn element(&self, x: &LpaElement) -> Matrix {
        let n = self.total_dim();
        let mut out = Matrix::zeros(n, n);
        for (m, c) in x.terms() {
            out = out.add(&self.word(&m.word()).scale(c));
        }
        out
    }

    pub fn combination(&self, c: &Combination) -> Matrix {
        let n = self.total_dim();
        let mut out = Matrix::zeros(n, n);
        for (x, w) in &c.0 {
            out = out.add(&self.word(w).scale(x));
        }
        out
    }

    /// Compares the action of every generator and every product of two
    /// generators with the action of its normal form.
    pub fn relation_failure(&self) -> Option<ModuleFailure> {
        let gens = self.alg.generators();
        for &x in &gens {
            if self.element(&self.alg.normalize(&[x])) != self.letter(x) {
                return Some(ModuleFailure {
                    left: self.alg.letter_label(x),
                    right: String::new(),
                });
            }
        }
        for &x in &gens {
            for &y in &gens {
                let direct = self.letter(y).mul(&self.letter(x));
                if self.element(&self.alg.normalize(&[x, y])) != direct {
                    return Some(ModuleFailure {
                        left: self.alg.letter_label(x),
                        right: self.alg.letter_label(y),
                    });
                }
            }
        }
        None
    }

    pub fn satisfies(&self, r: &Relation) -> bool {
        self.combination(&r.lhs) == self.combination(&r.rhs)
    }
}

/// Reads the edge and ghost actions off the blocks of `ω` and `σ`, then checks
/// the module relations against the normal forms.
pub fn rep_to_module(r: &StableRep) -> Result<ModuleAction, LeavittError> {
    let alg = &r.alg;
    let ne = alg.num_edges();
    let mut edge = vec![Matrix::zeros(0, 0); ne];
    let mut ghost = vec![Matrix::zeros(0, 0); ne];
    for v in 0..alg.num_vertices() {
        for (e, o) in offsets(alg, &r.dims, v) {
            let ds = r.dims[alg.s(e)];
            edge[e] = r.omega[v].block(o, 0, ds, r.dims[v]);
            ghost[e] = r.sigma[v].block(0, o, r.dims[v], ds);
        }
    }
    let m = ModuleAction {
        alg: alg.clone(),
        dims: r.dims.clone(),
        edge,
        ghost,
    };
    match m.relation_failure() {
        None => Ok(m),
        Some(f) => Err(LeavittError::Relation {
            left: f.left,
            right: f.right,
        }),
    }
}

/// Stacks edge actions into `ω_v` and ghost actions into `σ_v`.
pub fn module_to_rep(m: &ModuleAction) -> Result<StableRep, LeavittError> {
    if let Some(f) = m.relation_failure() {
        return Err(LeavittError::Relation {
            left: f.left,
            right: f.right,
        });
    }
    let alg = &m.alg;
    let mut omega = Vec::new();
    let mut sigma = Vec::new();
    for v in 0..alg.num_vertices() {
        let f = fiber_dim(alg, &m.dims, v);
        let mut w = Matrix::zeros(f, m.dims[v]);
        let mut s = Matrix::zeros(m.dims[v], f);
        for (e, o) in offsets(alg, &m.dims, v) {
            w.set_block(o, 0, &m.edge[e]);
            s.set_block(0, o, &m.ghost[e]);
        }
        omega.push(w);
        sigma.push(s);
    }
    StableRep::new(alg, m.dims.clone(), omega, sigma)
}

/// A formal linear combination of words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Combination(pub Vec<(Scalar, Vec<Letter>)>);

impl Combination {
    fn word(w: Vec<Letter>) -> Self {
        Combination(vec![(Scalar::one(), w)])
    }

    fn zero() -> Self {
        Combination(Vec::new())
    }

    pub fn render(&self, alg: &Leavitt) -> String {
        if self.0.is_empty() {
            return "0".into();
        }
        self.0
            .iter()
            .map(|(c, w)| {
                if c.is_one() {
                    alg.word_label(w)
                } else {
                    format!("{c} {}", alg.word_label(w))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    pub fn normalize(&self, alg: &Leavitt) -> LpaElement {
        self.0
            .iter()
            .fold(LpaElement::zero(alg), |acc, (c, w)| acc.add(&alg.normalize(w).scale(c)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationKind {
    VertexIdempotent,
    VertexOrthogonal,
    EdgeEndpoint,
    GhostContraction,
    VertexSum,
    VanishingVertex,
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RelationKind::VertexIdempotent => "vertex idempotent",
            RelationKind::VertexOrthogonal => "vertex orthogonality",
            RelationKind::EdgeEndpoint => "edge endpoint",
            RelationKind::GhostContraction => "ghost contraction",
            RelationKind::VertexSum => "vertex sum",
            RelationKind::VanishingVertex => "vanishing vertex",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Relation {
    pub kind: RelationKind,
    pub text: String,
    #[serde(skip)]
    pub lhs: Combination,
    #[serde(skip)]
    pub rhs: Combination,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Presentation {
    pub mode: Mode,
    pub vertices: Vec<String>,
    pub edges: Vec<String>,
    pub ghosts: Vec<String>,
    pub relations: Vec<Relation>,
}

/// A relation together with whether the rewriting system reproduces it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditEntry {
    pub kind: RelationKind,
    pub relation: String,
    pub normalizes: bool,
}

impl Presentation {
    pub fn cross_check(&self, alg: &Leavitt) -> Vec<AuditEntry> {
        self.relations
            .iter()
            .map(|r| AuditEntry {
                kind: r.kind,
                relation: r.text.clone(),
                normalizes: r.lhs.normalize(alg) == r.rhs.normalize(alg),
            })
            .collect()
    }
}

/// Generators and relations of the algebra in its mode.
pub fn cp_relation_audit(alg: &Leavitt) -> Presentation {
    let nv = alg.num_vertices();
    let ne = alg.num_edges();
    let mut relations = Vec::new();
    let mut push = |kind, lhs: Combination, rhs: Combination| {
        let text = format!("{} = {}", lhs.render(alg), rhs.render(alg));
        relations.push(Relation { kind, text, lhs, rhs });
    };
    let vx = Letter::Vertex;
    for v in 0..nv {
        push(
            RelationKind::VertexIdempotent,
            Combination::word(vec![vx(v), vx(v)]),
            Combination::word(vec![vx(v)]),
        );
        for w in 0..nv {
            if w != v {
                push(
                    RelationKind::VertexOrthogonal,
                    Combination::word(vec![vx(v), vx(w)]),
                    Combination::zero(),
                );
            }
        }
    }
    for e in 0..ne {
        let (s, t) = (alg.s(e), alg.t(e));
        let (p, g) = (Letter::Edge(e), Letter::Ghost(e));
        for (a, b, x) in [(vx(t), p, p), (p, vx(s), p), (vx(s), g, g), (g, vx(t), g)] {
            push(RelationKind::EdgeEndpoint, Combination::word(vec![a, b]), Combination::word(vec![x]));
        }
    }
    for e in 0..ne {
        for f in 0..ne {
            if alg.t(e) != alg.t(f) {
                continue;
            }
            let rhs = if e == f {
                Combination::word(vec![vx(alg.s(e))])
            } else {
                Combination::zero()
            };
            push(
                RelationKind::GhostContraction,
                Combination::word(vec![Letter::Ghost(e), Letter::Edge(f)]),
                rhs,
            );
        }
    }
    for v in 0..nv {
        let fiber = alg.incoming(v);
        if alg.mode() == Mode::Absolute && alg.is_dead_vertex(v) {
            push(RelationKind::VanishingVertex, Combination::word(vec![vx(v)]), Combination::zero());
        } else if !fiber.is_empty() {
            let lhs = Combination(
                fiber
                    .iter()
                    .map(|&e| (Scalar::one(), vec![Letter::Edge(e), Letter::Ghost(e)]))
                    .collect(),
            );
            push(RelationKind::VertexSum, lhs, Combination::word(vec![vx(v)]));
        }
    }
    Presentation {
        mode: alg.mode(),
        vertices: (0..nv).map(|v| alg.letter_label(vx(v))).collect(),
        edges: (0..ne).map(|e| alg.letter_label(Letter::Edge(e))).collect(),
        ghosts: (0..ne).map(|e| alg.letter_label(Letter::Ghost(e))).collect(),
        relations,
    }
}
