//! Quantum elements `C -> D`: coalgebra-map membership and the structured
//! families (group-likes, primitives, matrix units, nilpotents, functors).

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::coalg::{Coalgebra, Element, FiniteCategory};
use crate::exact::{unit_vec, ExactError, Matrix, Scalar};
use crate::partial::ConvElement;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ElementsError {
    #[error("map matrix is {found:?}, expected {expected:?} (dim target × dim source)")]
    Shape {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("maps do not compose: target and source differ")]
    NotComposable,
    #[error("group-like enumeration is not available for `{0}`; only verification of candidates is supported")]
    VerificationOnly(String),
    #[error("`{0}` is not a group-like element")]
    NotGrouplike(String),
    #[error("element does not belong to the coalgebra")]
    WrongCoalgebra,
    #[error("matrix unit family is not square")]
    NotSquare,
    #[error("functional family has {found} members, expected {expected}")]
    FamilySize { expected: usize, found: usize },
    #[error("set map sends `{0}` outside the target")]
    BadSetMap(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// First violated law of a candidate coalgebra map, by basis indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum MapViolation {
    /// `Δ_D f(c_k)` and `(f⊗f) Δ_C(c_k)` differ at the coefficient of `d_i ⊗ d_j`.
    Comultiplication { k: usize, i: usize, j: usize },
    /// `ε_D f(c_k) ≠ ε_C(c_k)`.
    Counit { k: usize },
}

/// A linear map between coalgebras; columns indexed by the source basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoalgebraMap {
    source: Arc<Coalgebra>,
    target: Arc<Coalgebra>,
    mat: Matrix,
}

impl CoalgebraMap {
    /// Wraps a candidate matrix without checking the coalgebra laws.
    pub fn new(
        source: Arc<Coalgebra>,
        target: Arc<Coalgebra>,
        mat: Matrix,
    ) -> Result<Self, ElementsError> {
        let expected = (target.dim(), source.dim());
        if mat.shape() != expected {
            return Err(ElementsError::Shape {
                expected,
                found: mat.shape(),
            });
        }
        Ok(CoalgebraMap { source, target, mat })
    }

    pub fn source(&self) -> &Arc<Coalgebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Coalgebra> {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.mat
    }

    pub fn apply(&self, c: &[Scalar]) -> Vec<Scalar> {
        self.mat.apply(c)
    }

    /// The coefficient functional `c ↦ (coefficient of d_m in f(c))`.
    pub fn coefficient(&self, m: usize) -> ConvElement {
        ConvElement::new(self.source.clone(), self.mat.row(m)).expect("row length is dim source")
    }

    /// First violated law, or `None` for a genuine coalgebra map.
    pub fn violation(&self) -> Option<MapViolation> {
        let n = self.target.dim();
        let lhs = self.target.delta_matrix().mul(&self.mat);
        let rhs = self.mat.kron(&self.mat).mul(&self.source.delta_matrix());
        let diff = lhs.sub(&rhs);
        let first = diff
            .entries()
            .into_iter()
            .map(|(row, k, _)| (k, row / n, row % n))
            .min();
        if let Some((k, i, j)) = first {
            return Some(MapViolation::Comultiplication { k, i, j });
        }
        let counit = self.target.eps_matrix().mul(&self.mat);
        (0..self.source.dim())
            .find(|&k| counit.get(0, k) != self.source.eps()[k])
            .map(|k| MapViolation::Counit { k })
    }

    pub fn is_coalgebra_map(&self) -> bool {
        self.violation().is_none()
    }

    pub fn identity(c: Arc<Coalgebra>) -> Self {
        let n = c.dim();
        CoalgebraMap {
            source: c.clone(),
            target: c,
            mat: Matrix::identity(n),
        }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &CoalgebraMap) -> Result<Self, ElementsError> {
        if *inner.target != *self.source {
            return Err(ElementsError::NotComposable);
        }
        Ok(CoalgebraMap {
            source: inner.source.clone(),
            target: self.target.clone(),
            mat: self.mat.mul(&inner.mat),
        })
    }

    /// The unique map to the one-point coalgebra, given by the counit.
    pub fn counit_collapse(c: Arc<Coalgebra>) -> Self {
        let mat = c.eps_matrix();
        CoalgebraMap {
            source: c,
            target: Arc::new(Coalgebra::singleton()),
            mat,
        }
    }

    /// Linear extension of a set map between linearized sets; `image[s]` is the
    /// target basis index of source basis element `s`.
    pub fn from_set_map(
        source: Arc<Coalgebra>,
        target: Arc<Coalgebra>,
        image: &[usize],
    ) -> Result<Self, ElementsError> {
        if image.len() != source.dim() {
            return Err(ElementsError::FamilySize {
                expected: source.dim(),
                found: image.len(),
            });
        }
        let mut mat = Matrix::zeros(target.dim(), source.dim());
        for (s, &t) in image.iter().enumerate() {
            if t >= target.dim() {
                return Err(ElementsError::BadSetMap(source.label(s).to_string()));
            }
            mat.set(t, s, Scalar::one());
        }
        CoalgebraMap::new(source, target, mat)
    }

    /// `c ↦ Σ_m x_m(c) d_m` from one functional on `C` per basis element of `D`.
    pub fn from_coefficients(
        target: Arc<Coalgebra>,
        coefficients: &[ConvElement],
    ) -> Result<Self, ElementsError> {
        if coefficients.len() != target.dim() {
            return Err(ElementsError::FamilySize {
                expected: target.dim(),
                found: coefficients.len(),
            });
        }
        let Some(first) = coefficients.first() else {
            return Err(ElementsError::FamilySize {
                expected: target.dim(),
                found: 0,
            });
        };
        let source = first.coalgebra().clone();
        let mut mat = Matrix::zeros(target.dim(), source.dim());
        for (m, x) in coefficients.iter().enumerate() {
            if **x.coalgebra() != *source {
                return Err(ElementsError::WrongCoalgebra);
            }
            for (k, v) in x.coords().iter().enumerate() {
                mat.set(m, k, v.clone());
            }
        }
        CoalgebraMap::new(source, target, mat)
    }

    /// The map `k{pt} -> D` picking out an element.
    pub fn from_element(g: &Element) -> Self {
        CoalgebraMap {
            source: Arc::new(Coalgebra::singleton()),
            target: g.coalgebra.clone(),
            mat: Matrix::column_vector(&g.coords),
        }
    }
}

/// Checks `Δ(g) = g⊗g` and `ε(g) = 1`.
pub fn verify_grouplike(g: &Element) -> bool {
    let c = &g.coalgebra;
    let gg = Matrix::column_vector(&g.coords).mul(&Matrix::row_vector(&g.coords));
    c.comultiply(&g.coords) == gg && g.counit().is_one()
}

/// All group-like elements of a decomposition coalgebra (0/1 structure
/// constants, at most one composite per pair), as built by `linearize`,
/// `fd_monoid_additive` and `fd_category`.
///
/// On such a coalgebra a group-like is a scalar function `λ` on the basis with
/// `λ_i λ_j = λ_{i∘j}` (or `0` when `i∘j` is undefined) and `Σ ε_k λ_k = 1`.
/// Iterating any basis element either leaves the table (so `λ` is nilpotent,
/// hence zero) or cycles (so `λ` is zero or a root of unity), which confines
/// every value to `{0, 1, -1, i, -i}` over the Gaussian rationals.
pub fn grouplikes(d: &Arc<Coalgebra>) -> Result<Vec<Element>, ElementsError> {
    let table = d
        .decomposition_table()
        .ok_or_else(|| ElementsError::VerificationOnly(d.name().to_string()))?;
    let n = d.dim();
    let candidates = [
        Scalar::zero(),
        Scalar::one(),
        Scalar::from_int(-1),
        Scalar::i(),
        -Scalar::i(),
    ];
    // equations indexed by the largest variable they mention
    let mut by_var: Vec<Vec<(usize, usize, Option<usize>)>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in 0..n {
            let comp = table.get(&(i, j)).copied();
            let top = i.max(j).max(comp.unwrap_or(0));
            by_var[top].push((i, j, comp));
        }
    }
    let mut found = Vec::new();
    let mut lambda: Vec<Scalar> = Vec::with_capacity(n);
    fn search(
        lambda: &mut Vec<Scalar>,
        n: usize,
        by_var: &[Vec<(usize, usize, Option<usize>)>],
        candidates: &[Scalar],
        d: &Arc<Coalgebra>,
        found: &mut Vec<Element>,
    ) {
        let v = lambda.len();
        if v == n {
            if d.counit(lambda).is_one() {
                found.push(Element::new(d.clone(), lambda.clone()).expect("length"));
            }
            return;
        }
        for x in candidates {
            lambda.push(x.clone());
            let ok = by_var[v].iter().all(|&(i, j, comp)| {
                let prod = &lambda[i] * &lambda[j];
                match comp {
                    Some(k) => prod == lambda[k],
                    None => prod.is_zero(),
                }
            });
            if ok {
                search(lambda, n, by_var, candidates, d, found);
            }
            lambda.pop();
        }
    }
    search(&mut lambda, n, &by_var, &candidates, d, &mut found);
    debug_assert!(found.iter().all(verify_grouplike));
    Ok(found)
}

/// Basis of `{p : Δ(p) = p⊗g + h⊗p}`; with `g = h` these are the `g`-primitives.
pub fn primitives(g: &Element, h: &Element) -> Result<Vec<Element>, ElementsError> {
    if g.coalgebra != h.coalgebra {
        return Err(ElementsError::WrongCoalgebra);
    }
    for x in [g, h] {
        if !verify_grouplike(x) {
            return Err(ElementsError::NotGrouplike(x.to_string()));
        }
    }
    let d = &g.coalgebra;
    let n = d.dim();
    let system = d
        .delta_matrix()
        .sub(&Matrix::identity(n).kron(&Matrix::column_vector(&g.coords)))
        .sub(&Matrix::column_vector(&h.coords).kron(&Matrix::identity(n)));
    let kernel = system.kernel();
    let basis: Vec<Element> = (0..kernel.cols())
        .map(|c| Element::new(d.clone(), kernel.column(c)).expect("length"))
        .collect();
    debug_assert!(basis.iter().all(|p| p.counit().is_zero()));
    Ok(basis)
}

/// A relation of a functional family that fails in the convolution algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "relation", rename_all = "snake_case")]
pub enum RelationFailure {
    /// The product of the two named members is not what the relations demand.
    Product { left: String, right: String },
    /// The members that should sum to the unit do not.
    Completeness,
}

/// Checks `x_ij x_j'k = δ_jj' x_ik` and `Σ_i x_ii = ε` in `F(C)`.
pub fn matrix_unit_system_check(
    x: &[Vec<ConvElement>],
) -> Result<Option<RelationFailure>, ElementsError> {
    let n = x.len();
    if n == 0 || x.iter().any(|row| row.len() != n) {
        return Err(ElementsError::NotSquare);
    }
    let c = x[0][0].coalgebra().clone();
    if x.iter().flatten().any(|e| **e.coalgebra() != *c) {
        return Err(ElementsError::WrongCoalgebra);
    }
    for i in 0..n {
        for j in 0..n {
            for jp in 0..n {
                for k in 0..n {
                    let prod = x[i][j].mul(&x[jp][k]);
                    let expected = if j == jp {
                        x[i][k].clone()
                    } else {
                        ConvElement::zero(c.clone())
                    };
                    if prod != expected {
                        return Ok(Some(RelationFailure::Product {
                            left: format!("x({},{})", i + 1, j + 1),
                            right: format!("x({},{})", jp + 1, k + 1),
                        }));
                    }
                }
            }
        }
    }
    let sum = (0..n).fold(ConvElement::zero(c.clone()), |acc, i| acc.add(&x[i][i]));
    if sum != ConvElement::unit(c) {
        return Ok(Some(RelationFailure::Completeness));
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Nilpotency {
    pub nilpotent: bool,
    /// Smallest `m` with `x^m = 0`, when found within the bound.
    pub exponent: Option<usize>,
    pub bound: usize,
}

/// Searches for `m ≤ bound` with `x^m = 0`; the default bound is `dim C`.
pub fn nilpotent_element_check(x: &ConvElement, bound: Option<usize>) -> Nilpotency {
    let bound = bound.unwrap_or_else(|| x.coalgebra().dim()).max(1);
    let mut power = x.clone();
    for m in 1..=bound {
        if power.is_zero() {
            return Nilpotency {
                nilpotent: true,
                exponent: Some(m),
                bound,
            };
        }
        power = power.mul(x);
    }
    Nilpotency {
        nilpotent: false,
        exponent: None,
        bound,
    }
}

/// Checks that `m ↦ x_m` is a functor into the multiplicative monoid of `F(C)`
/// with `Σ_objects x_id = 1`: `x_{m1} x_{m2}` equals `x_{m1∘m2}` when the
/// composite exists and vanishes otherwise.
pub fn finite_support_functor_check(
    cat: &FiniteCategory,
    x: &[ConvElement],
) -> Result<Option<RelationFailure>, ElementsError> {
    let nm = cat.morphisms.len();
    if x.len() != nm || nm == 0 {
        return Err(ElementsError::FamilySize {
            expected: nm,
            found: x.len(),
        });
    }
    let c = x[0].coalgebra().clone();
    if x.iter().any(|e| **e.coalgebra() != *c) {
        return Err(ElementsError::WrongCoalgebra);
    }
    for m1 in 0..nm {
        for m2 in 0..nm {
            let prod = x[m1].mul(&x[m2]);
            let expected = match cat.compose(m1, m2) {
                Some(m) => x[m].clone(),
                None => ConvElement::zero(c.clone()),
            };
            if prod != expected {
                return Ok(Some(RelationFailure::Product {
                    left: cat.morphisms[m1].name.clone(),
                    right: cat.morphisms[m2].name.clone(),
                }));
            }
        }
    }
    let sum = cat
        .identities
        .iter()
        .fold(ConvElement::zero(c.clone()), |acc, &id| acc.add(&x[id]));
    if sum != ConvElement::unit(c) {
        return Ok(Some(RelationFailure::Completeness));
    }
    Ok(None)
}

/// The element `Σ_k λ_k c_k` as a vector, for building candidates by hand.
pub fn element(c: &Arc<Coalgebra>, coords: Vec<Scalar>) -> Result<Element, ElementsError> {
    Element::new(c.clone(), coords).map_err(|_| ElementsError::Shape {
        expected: (c.dim(), 1),
        found: (0, 1),
    })
}

/// Basis element `c_k` as an element.
pub fn basis_element(c: &Arc<Coalgebra>, k: usize) -> Element {
    Element::new(c.clone(), unit_vec(c.dim(), k)).expect("length matches")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(c: Coalgebra) -> Arc<Coalgebra> {
        Arc::new(c)
    }

    #[test]
    fn identity_and_set_maps_are_coalgebra_maps() {
        let c = arc(Coalgebra::comatrix(2));
        assert!(CoalgebraMap::identity(c.clone()).is_coalgebra_map());
        assert!(CoalgebraMap::counit_collapse(c).is_coalgebra_map());
        let s = arc(Coalgebra::linearize(&["a", "b", "c"]).unwrap());
        let t = arc(Coalgebra::linearize(&["x", "y"]).unwrap());
        let f = CoalgebraMap::from_set_map(s, t, &[0, 1, 0]).unwrap();
        assert!(f.is_coalgebra_map());
    }

    #[test]
    fn scaled_map_fails_counit() {
        let s = arc(Coalgebra::linearize(&["a", "b"]).unwrap());
        let t = arc(Coalgebra::linearize(&["x"]).unwrap());
        let mat = Matrix::from_rows(&[vec![1.into(), 2.into()]]);
        let f = CoalgebraMap::new(s, t, mat).unwrap();
        // Δ(2x) ≠ 2x⊗2x also fails, at b
        assert_eq!(
            f.violation(),
            Some(MapViolation::Comultiplication { k: 1, i: 0, j: 0 })
        );
        let bad_shape = CoalgebraMap::new(
            arc(Coalgebra::omega()),
            arc(Coalgebra::singleton()),
            Matrix::zeros(2, 2),
        );
        assert!(matches!(bad_shape, Err(ElementsError::Shape { .. })));
    }

    #[test]
    fn counit_only_failure() {
        // 0 : k{a} -> k{x} intertwines Δ but not ε
        let f = CoalgebraMap::new(
            arc(Coalgebra::linearize(&["a"]).unwrap()),
            arc(Coalgebra::linearize(&["x"]).unwrap()),
            Matrix::zeros(1, 1),
        )
        .unwrap();
        assert_eq!(f.violation(), Some(MapViolation::Counit { k: 0 }));
    }

    #[test]
    fn grouplike_enumeration() {
        let s = arc(Coalgebra::linearize(&["a", "b"]).unwrap());
        let g = grouplikes(&s).unwrap();
        assert_eq!(g, vec![basis_element(&s, 1), basis_element(&s, 0)]);

        let d = arc(Coalgebra::fd_monoid_additive(3));
        assert_eq!(grouplikes(&d).unwrap(), vec![basis_element(&d, 0)]);

        let m = arc(Coalgebra::comatrix(2));
        assert!(grouplikes(&m).unwrap().is_empty());

        let z2 = arc(Coalgebra::fd_category(&cyclic(2)).unwrap());
        assert_eq!(grouplikes(&z2).unwrap().len(), 2);
        // cube roots of unity are not Gaussian rationals
        let z3 = arc(Coalgebra::fd_category(&cyclic(3)).unwrap());
        assert_eq!(grouplikes(&z3).unwrap().len(), 1);
        let z4 = arc(Coalgebra::fd_category(&cyclic(4)).unwrap());
        assert_eq!(grouplikes(&z4).unwrap().len(), 4);

        // k{a,b} in the basis u = a+b, v = a-b: Δ(u) = (u⊗u + v⊗v)/2
        let mut t = crate::exact::Tensor3::zeros([2, 2, 2]);
        let half = Scalar::ratio(1, 2);
        for (k, i, j) in [(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)] {
            t.set(k, i, j, half.clone()).unwrap();
        }
        let rotated = Coalgebra::new("rotated", vec!["u".into(), "v".into()], t, vec![2.into(), 0.into()], None).unwrap();
        assert!(rotated.is_valid());
        assert!(matches!(
            grouplikes(&arc(rotated)),
            Err(ElementsError::VerificationOnly(_))
        ));
    }

    fn cyclic(n: usize) -> FiniteCategory {
        let morphisms = (0..n)
            .map(|k| crate::coalg::Morphism {
                name: format!("g{k}"),
                source: 0,
                target: 0,
            })
            .collect();
        let mut composition = std::collections::BTreeMap::new();
        for a in 0..n {
            for b in 0..n {
                composition.insert((a, b), (a + b) % n);
            }
        }
        FiniteCategory {
            objects: vec!["*".into()],
            morphisms,
            identities: vec![0],
            composition,
            truncated: false,
        }
    }

    #[test]
    fn non_grouplike_candidate() {
        let m = arc(Coalgebra::comatrix(2));
        let g = element(&m, vec![1.into(), 1.into(), 0.into(), 0.into()]).unwrap();
        assert!(!verify_grouplike(&g));
    }

    #[test]
    fn grouplikes_are_maps_from_the_point() {
        for c in [
            Coalgebra::linearize(&["a", "b", "c"]).unwrap(),
            Coalgebra::fd_monoid_additive(2),
            Coalgebra::fd_category(&FiniteCategory::chain(3)).unwrap(),
        ] {
            let c = arc(c);
            for g in grouplikes(&c).unwrap() {
                assert!(CoalgebraMap::from_element(&g).is_coalgebra_map());
            }
        }
    }

    #[test]
    fn primitive_spaces() {
        let d1 = arc(Coalgebra::fd_monoid_additive(1));
        let g = basis_element(&d1, 0);
        assert_eq!(primitives(&g, &g).unwrap(), vec![basis_element(&d1, 1)]);

        let d2 = arc(Coalgebra::fd_monoid_additive(2));
        let g = basis_element(&d2, 0);
        assert_eq!(primitives(&g, &g).unwrap(), vec![basis_element(&d2, 1)]);

        let s = arc(Coalgebra::linearize(&["a", "b"]).unwrap());
        let a = basis_element(&s, 0);
        assert!(primitives(&a, &a).unwrap().is_empty());
        let b = basis_element(&s, 1);
        // (a, b)-primitives: a - b
        let p = primitives(&a, &b).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p[0].coords[0], -p[0].coords[1].clone());
        assert!(!p[0].coords[0].is_zero());

        let not_g = element(&s, vec![1.into(), 1.into()]).unwrap();
        assert!(matches!(primitives(&not_g, &not_g), Err(ElementsError::NotGrouplike(_))));
    }

    #[test]
    fn matrix_units_of_the_comatrix_dual() {
        let c = arc(Coalgebra::comatrix(2));
        let e = |k: usize| ConvElement::basis(c.clone(), k);
        let units = vec![vec![e(0), e(1)], vec![e(2), e(3)]];
        assert_eq!(matrix_unit_system_check(&units).unwrap(), None);

        let mut broken = units.clone();
        broken[1][0] = ConvElement::zero(c.clone());
        assert!(matrix_unit_system_check(&broken).unwrap().is_some());

        let pt = arc(Coalgebra::singleton());
        assert_eq!(
            matrix_unit_system_check(&[vec![ConvElement::unit(pt)]]).unwrap(),
            None
        );
        assert_eq!(
            matrix_unit_system_check(&[vec![e(0), e(1)]]),
            Err(ElementsError::NotSquare)
        );
    }

    #[test]
    fn nilpotents() {
        let c = arc(Coalgebra::fd_monoid_additive(3));
        let x = ConvElement::basis(c.clone(), 1);
        let r = nilpotent_element_check(&x, None);
        assert!(r.nilpotent);
        assert_eq!(r.exponent, Some(4));
        assert_eq!(r.bound, 4);
        assert!(!nilpotent_element_check(&ConvElement::unit(c.clone()), None).nilpotent);
        assert_eq!(
            nilpotent_element_check(&ConvElement::zero(c), None).exponent,
            Some(1)
        );
    }

    #[test]
    fn functor_checks() {
        let c = arc(Coalgebra::comatrix(2));
        let units: Vec<ConvElement> = (0..4).map(|k| ConvElement::basis(c.clone(), k)).collect();
        assert_eq!(
            finite_support_functor_check(&FiniteCategory::pair(2), &units).unwrap(),
            None
        );
        // the associated map is the identity of comatrix(2)
        let f = CoalgebraMap::from_coefficients(c.clone(), &units).unwrap();
        assert_eq!(f, CoalgebraMap::identity(c));

        let pt = arc(Coalgebra::singleton());
        let one = FiniteCategory::discrete(&["*"]);
        assert_eq!(
            finite_support_functor_check(&one, &[ConvElement::unit(pt.clone())]).unwrap(),
            None
        );

        // chain 0<1: x_{m00} = x_{m11} = ε/2-ish breaks multiplicativity
        let chain = FiniteCategory::chain(2);
        let half = ConvElement::unit(pt.clone()).scale(&Scalar::ratio(1, 2));
        let bad = vec![half.clone(), ConvElement::zero(pt), half];
        assert!(finite_support_functor_check(&chain, &bad).unwrap().is_some());
    }
}
