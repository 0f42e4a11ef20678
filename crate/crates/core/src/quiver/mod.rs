//! Classical and quantum quivers, and comodules over coalgebras.

mod comodule;

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coalg::{format_combination, CoalgError, Coalgebra};
use crate::elements::{grouplikes, CoalgebraMap, ElementsError};
use crate::exact::Matrix;
use crate::partial::{is_admissible, PartialError};

pub use comodule::{
    adjunction_check, coinduce, corestrict, cotensor, AdjunctionReport, Coinduced, Comodule,
    ComoduleFile, ComoduleReport,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuiverError {
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("edge `{edge}` has unknown endpoint `{vertex}`")]
    UnknownVertex { edge: String, vertex: String },
    #[error("`{0}` has the wrong source or target coalgebra")]
    WrongCoalgebra(&'static str),
    #[error("`{0}` is not a coalgebra map")]
    NotCoalgebraMap(&'static str),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("comodule over `{0}` expected")]
    ComoduleMismatch(String),
    #[error("coaction of a coinduced comodule does not restrict to the cotensor product")]
    NotClosed,
    #[error("points of `{0}` cannot be enumerated")]
    NoPoints(String),
    #[error("a source point does not map to a vertex point")]
    PointOutsideVertices,
    #[error(transparent)]
    Coalg(#[from] CoalgError),
    #[error(transparent)]
    Elements(#[from] ElementsError),
    #[error(transparent)]
    Partial(#[from] PartialError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Edge {
    pub name: String,
    pub s: String,
    pub t: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassicalQuiver {
    pub vertices: Vec<String>,
    pub edges: Vec<Edge>,
}

impl ClassicalQuiver {
    pub fn new(vertices: Vec<String>, edges: Vec<Edge>) -> Result<Self, QuiverError> {
        let q = ClassicalQuiver { vertices, edges };
        q.check()?;
        Ok(q)
    }

    pub fn check(&self) -> Result<(), QuiverError> {
        let mut seen = BTreeSet::new();
        for v in &self.vertices {
            if !seen.insert(v.as_str()) {
                return Err(QuiverError::DuplicateLabel(v.clone()));
            }
        }
        let mut names = BTreeSet::new();
        for e in &self.edges {
            if !names.insert(e.name.as_str()) {
                return Err(QuiverError::DuplicateLabel(e.name.clone()));
            }
            for v in [&e.s, &e.t] {
                if !seen.contains(v.as_str()) {
                    return Err(QuiverError::UnknownVertex {
                        edge: e.name.clone(),
                        vertex: v.clone(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self, QuiverError> {
        let q: ClassicalQuiver =
            serde_json::from_str(text).map_err(|e| QuiverError::Shape(e.to_string()))?;
        q.check()?;
        Ok(q)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("quiver serializes")
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == label)
    }

    pub fn edge_index(&self, name: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.name == name)
    }

    /// `(s, t)` as vertex indices.
    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        let edge = &self.edges[e];
        (
            self.vertex_index(&edge.s).expect("checked"),
            self.vertex_index(&edge.t).expect("checked"),
        )
    }

    /// Edges `e` with `t(e) = v`, in edge order.
    pub fn incoming(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len()).filter(|&e| self.endpoints(e).1 == v).collect()
    }

    /// Edges `e` with `s(e) = v`, in edge order.
    pub fn outgoing(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len()).filter(|&e| self.endpoints(e).0 == v).collect()
    }

    /// `a -> b`.
    pub fn a2() -> Self {
        ClassicalQuiver {
            vertices: vec!["a".into(), "b".into()],
            edges: vec![Edge {
                name: "e".into(),
                s: "a".into(),
                t: "b".into(),
            }],
        }
    }

    /// One vertex `v` with one loop `e`.
    pub fn single_loop() -> Self {
        ClassicalQuiver {
            vertices: vec!["v".into()],
            edges: vec![Edge {
                name: "e".into(),
                s: "v".into(),
                t: "v".into(),
            }],
        }
    }

    /// One vertex `v` with loops `e1, ..., en`.
    pub fn rose(n: usize) -> Self {
        ClassicalQuiver {
            vertices: vec!["v".into()],
            edges: (1..=n)
                .map(|i| Edge {
                    name: format!("e{i}"),
                    s: "v".into(),
                    t: "v".into(),
                })
                .collect(),
        }
    }
}

/// Edge coalgebra `D1`, vertex coalgebra `D0`, source `∂₀: D1 -> D0^o` and target `∂₁: D1 -> D0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuantumQuiver {
    d1: Arc<Coalgebra>,
    d0: Arc<Coalgebra>,
    source: CoalgebraMap,
    target: CoalgebraMap,
}

/// Outcome of the quantum quiver compatibility test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuiverCheck {
    pub holds: bool,
    /// Edge-coalgebra basis indices where the identity fails.
    pub offending: Vec<usize>,
    pub offending_labels: Vec<String>,
}

impl QuantumQuiver {
    pub fn new(source: CoalgebraMap, target: CoalgebraMap) -> Result<Self, QuiverError> {
        let d1 = source.source().clone();
        let d0 = target.target().clone();
        if target.source() != &d1 {
            return Err(QuiverError::WrongCoalgebra("target"));
        }
        if **source.target() != d0.opposite() {
            return Err(QuiverError::WrongCoalgebra("source"));
        }
        if !source.is_coalgebra_map() {
            return Err(QuiverError::NotCoalgebraMap("source"));
        }
        if !target.is_coalgebra_map() {
            return Err(QuiverError::NotCoalgebraMap("target"));
        }
        Ok(QuantumQuiver {
            d1,
            d0,
            source,
            target,
        })
    }

    pub fn edges(&self) -> &Arc<Coalgebra> {
        &self.d1
    }

    pub fn vertices(&self) -> &Arc<Coalgebra> {
        &self.d0
    }

    pub fn source(&self) -> &CoalgebraMap {
        &self.source
    }

    pub fn target(&self) -> &CoalgebraMap {
        &self.target
    }

    /// Linearizes edges and vertices; `∂₀ = s`, `∂₁ = t`.
    pub fn from_classical(q: &ClassicalQuiver) -> Result<Self, QuiverError> {
        q.check()?;
        let names: Vec<&str> = q.edges.iter().map(|e| e.name.as_str()).collect();
        let d1 = Arc::new(Coalgebra::linearize(&names)?.with_name("kE"));
        let d0 = Arc::new(Coalgebra::linearize(&q.vertices)?.with_name("kV"));
        let (s, t): (Vec<usize>, Vec<usize>) = (0..q.edges.len()).map(|e| q.endpoints(e)).unzip();
        let source = CoalgebraMap::from_set_map(d1.clone(), Arc::new(d0.opposite()), &s)?;
        let target = CoalgebraMap::from_set_map(d1, d0, &t)?;
        QuantumQuiver::new(source, target)
    }

    /// `∂₀(d₍₁₎)⊗∂₁(d₍₂₎) = ∂₀(d₍₂₎)⊗∂₁(d₍₁₎)` on every basis element, i.e. the pair
    /// `(∂₀, ∂₁)` is admissible. With `literal`, the right-hand side is
    /// `∂₀(d₍₂₎)⊗∂₀(d₍₁₎)` instead.
    pub fn check(&self, literal: bool) -> Result<QuiverCheck, QuiverError> {
        let offending = if literal {
            let lhs = self.source.matrix().kron(self.target.matrix()).mul(&self.d1.delta_matrix());
            let rhs = self
                .source
                .matrix()
                .kron(self.source.matrix())
                .mul(&self.d1.opposite().delta_matrix());
            let diff = lhs.sub(&rhs);
            (0..diff.cols())
                .filter(|&k| diff.column_entries(k).next().is_some())
                .collect()
        } else {
            is_admissible(&self.source, &self.target)?.offending
        };
        Ok(QuiverCheck {
            holds: offending.is_empty(),
            offending_labels: offending.iter().map(|&k| self.d1.label(k).to_string()).collect(),
            offending,
        })
    }

    /// Points over `k{pt}`: group-likes of the edge and vertex coalgebras with
    /// `s(e) = ∂₀∘e` and `t(e) = ∂₁∘e`.
    pub fn classical_points(&self) -> Result<ClassicalQuiver, QuiverError> {
        let points = |c: &Arc<Coalgebra>| {
            let mut g = grouplikes(c).map_err(|_| QuiverError::NoPoints(c.name().into()))?;
            g.sort_by_key(|x| x.coords.iter().position(|v| !v.is_zero()));
            Ok::<_, QuiverError>(g)
        };
        let verts = points(&self.d0)?;
        let edges = points(&self.d1)?;
        let name = |c: &Coalgebra, coords: &[crate::exact::Scalar]| format_combination(c.basis(), coords);
        let vertex_names: Vec<String> = verts.iter().map(|g| name(&self.d0, &g.coords)).collect();
        let find = |coords: Vec<crate::exact::Scalar>| {
            verts
                .iter()
                .position(|g| g.coords == coords)
                .ok_or(QuiverError::PointOutsideVertices)
        };
        let mut out = Vec::with_capacity(edges.len());
        for g in &edges {
            let s = find(self.source.apply(&g.coords))?;
            let t = find(self.target.apply(&g.coords))?;
            out.push(Edge {
                name: name(&self.d1, &g.coords),
                s: vertex_names[s].clone(),
                t: vertex_names[t].clone(),
            });
        }
        Ok(ClassicalQuiver {
            vertices: vertex_names,
            edges: out,
        })
    }
}

/// A linearized set map with finite fibers; the case in which the left adjoint
/// of coinduction is available in closed form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiFinite {
    pub image: Vec<usize>,
}

impl QuasiFinite {
    /// Succeeds exactly when both coalgebras are linearized sets and every
    /// column of the matrix is a basis vector.
    pub fn detect(f: &CoalgebraMap) -> Option<Self> {
        let set_like = |c: &Coalgebra| {
            c.delta().nnz() == c.dim()
                && (0..c.dim()).all(|k| c.delta().get(k, k, k).is_one() && c.eps()[k].is_one())
        };
        if !set_like(f.source()) || !set_like(f.target()) {
            return None;
        }
        let m = f.matrix();
        let image = (0..m.cols())
            .map(|c| {
                let entries: Vec<_> = m.column_entries(c).collect();
                match entries.as_slice() {
                    [(r, x)] if x.is_one() => Some(*r),
                    _ => None,
                }
            })
            .collect::<Option<Vec<usize>>>()?;
        Some(QuasiFinite { image })
    }

    /// Source indices over each target index.
    pub fn fibers(&self, target_dim: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); target_dim];
        for (s, &t) in self.image.iter().enumerate() {
            out[t].push(s);
        }
        out
    }
}

/// A quantum quiver whose structure maps are linearized set maps, read back as a classical quiver.
pub fn discrete_quiver(q: &QuantumQuiver) -> Option<ClassicalQuiver> {
    let s = QuasiFinite::detect(&q.source)?;
    let t = QuasiFinite::detect(&q.target)?;
    Some(ClassicalQuiver {
        vertices: q.d0.basis().to_vec(),
        edges: (0..q.d1.dim())
            .map(|e| Edge {
                name: q.d1.label(e).to_string(),
                s: q.d0.label(s.image[e]).to_string(),
                t: q.d0.label(t.image[e]).to_string(),
            })
            .collect(),
    })
}

pub(crate) fn first_nonzero_column(m: &Matrix) -> Option<usize> {
    (0..m.cols()).find(|&c| m.column_entries(c).next().is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elements::basis_element;

    fn comatrix_transpose() -> (Arc<Coalgebra>, CoalgebraMap, CoalgebraMap) {
        let c = Arc::new(Coalgebra::comatrix(2));
        let op = Arc::new(c.opposite());
        let t = CoalgebraMap::from_set_map(c.clone(), op, &[0, 2, 1, 3]).unwrap();
        let id = CoalgebraMap::identity(c.clone());
        (c, t, id)
    }

    #[test]
    fn classical_quivers_pass_and_recover_points() {
        for q in [
            ClassicalQuiver::single_loop(),
            ClassicalQuiver::a2(),
            ClassicalQuiver::rose(2),
            ClassicalQuiver::default(),
        ] {
            let qq = QuantumQuiver::from_classical(&q).unwrap();
            assert!(qq.check(false).unwrap().holds);
            assert_eq!(qq.classical_points().unwrap(), q);
            assert_eq!(discrete_quiver(&qq).unwrap(), q);
        }
        let empty = QuantumQuiver::from_classical(&ClassicalQuiver::default()).unwrap();
        assert_eq!(empty.edges().dim(), 0);
    }

    #[test]
    fn literal_reading_rejects_a2() {
        let qq = QuantumQuiver::from_classical(&ClassicalQuiver::a2()).unwrap();
        let r = qq.check(true).unwrap();
        assert!(!r.holds);
        assert_eq!(r.offending_labels, vec!["e".to_string()]);
        let loop_q = QuantumQuiver::from_classical(&ClassicalQuiver::single_loop()).unwrap();
        assert!(loop_q.check(true).unwrap().holds);
    }

    #[test]
    fn edge_points_are_admissible() {
        let q = ClassicalQuiver::a2();
        let qq = QuantumQuiver::from_classical(&q).unwrap();
        for e in 0..q.edges.len() {
            let pt = CoalgebraMap::from_element(&basis_element(qq.edges(), e));
            let s = qq.source().compose(&pt).unwrap();
            let t = qq.target().compose(&pt).unwrap();
            assert!(is_admissible(&s, &t).unwrap().admissible());
        }
    }

    #[test]
    fn comatrix_edges_over_a_point() {
        let c = Arc::new(Coalgebra::comatrix(2));
        let pt = Arc::new(Coalgebra::singleton());
        let s = CoalgebraMap::new(c.clone(), Arc::new(pt.opposite()), c.eps_matrix()).unwrap();
        let t = CoalgebraMap::counit_collapse(c);
        let qq = QuantumQuiver::new(s, t).unwrap();
        assert!(qq.check(false).unwrap().holds);
        assert!(qq.check(true).unwrap().holds);
    }

    #[test]
    fn comatrix_over_itself_fails() {
        let (_, t, id) = comatrix_transpose();
        let qq = QuantumQuiver::new(t, id).unwrap();
        let r = qq.check(false).unwrap();
        assert!(!r.holds);
        assert!(r.offending_labels.contains(&"d12".to_string()));
    }

    #[test]
    fn wrong_direction_rejected() {
        let c = Arc::new(Coalgebra::comatrix(2));
        let id = CoalgebraMap::identity(c.clone());
        assert_eq!(
            QuantumQuiver::new(id.clone(), id).unwrap_err(),
            QuiverError::WrongCoalgebra("source")
        );
        let op = Arc::new(c.opposite());
        let not_map = CoalgebraMap::new(c.clone(), op, Matrix::identity(4)).unwrap();
        assert_eq!(
            QuantumQuiver::new(not_map, CoalgebraMap::identity(c)).unwrap_err(),
            QuiverError::NotCoalgebraMap("source")
        );
    }

    #[test]
    fn quasi_finite_detection() {
        let s = Arc::new(Coalgebra::linearize(&["a", "b", "c"]).unwrap());
        let t = Arc::new(Coalgebra::linearize(&["x", "y"]).unwrap());
        let f = CoalgebraMap::from_set_map(s, t, &[0, 0, 1]).unwrap();
        let qf = QuasiFinite::detect(&f).unwrap();
        assert_eq!(qf.fibers(2), vec![vec![0, 1], vec![2]]);
        let (_, _, id) = comatrix_transpose();
        assert!(QuasiFinite::detect(&id).is_none());
    }

    #[test]
    fn bad_classical_quivers() {
        let text = r#"{"vertices":["a"],"edges":[{"name":"e","s":"a","t":"z"}]}"#;
        assert!(matches!(
            ClassicalQuiver::from_json(text),
            Err(QuiverError::UnknownVertex { .. })
        ));
        let text = r#"{"vertices":["a","a"],"edges":[]}"#;
        assert_eq!(
            ClassicalQuiver::from_json(text).unwrap_err(),
            QuiverError::DuplicateLabel("a".into())
        );
        let q = ClassicalQuiver::a2();
        assert_eq!(ClassicalQuiver::from_json(&q.to_json()).unwrap(), q);
    }
}
