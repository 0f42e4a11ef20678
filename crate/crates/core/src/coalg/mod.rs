//! Finite-dimensional counital coassociative coalgebras.

mod category;
mod json;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::exact::{ExactError, Matrix, Scalar, Tensor3};

pub use category::{FiniteCategory, Morphism};
pub use json::CoalgebraFile;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoalgError {
    #[error("dimension mismatch: {0}")]
    Shape(String),
    #[error("duplicate basis label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown basis label `{0}`")]
    UnknownLabel(String),
    #[error("star data is not a permutation of the basis")]
    BadStar,
    #[error("invalid category: {0}")]
    InvalidCategory(String),
    #[error("invalid coalgebra: {0}")]
    Invalid(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// A violated coalgebra law, located by basis indices.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum Violation {
    /// Coefficient of `c_i ⊗ c_j ⊗ c_l` differs between `(Δ⊗id)Δ(c_k)` and `(id⊗Δ)Δ(c_k)`.
    Coassociativity { k: usize, i: usize, j: usize, l: usize },
    /// `Σ_i ε(c_i) Δ(c_k)_{ij} ≠ δ_{kj}`.
    LeftCounit { k: usize, j: usize },
    /// `Σ_j ε(c_j) Δ(c_k)_{ij} ≠ δ_{ki}`.
    RightCounit { k: usize, i: usize },
    StarNotInvolutive { k: usize },
    StarComultiplication { k: usize, i: usize, j: usize },
    StarCounit { k: usize },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A coalgebra given by structure constants in a labelled basis.
///
/// `delta[k][i][j]` is the coefficient of `c_i ⊗ c_j` in `Δ(c_k)`. The optional
/// `star` is an antilinear involution sending `c_k` to `c_{star[k]}`.
#[derive(Clone, Debug)]
pub struct Coalgebra {
    name: String,
    basis: Vec<String>,
    delta: Tensor3,
    eps: Vec<Scalar>,
    star: Option<Vec<usize>>,
}

impl PartialEq for Coalgebra {
    fn eq(&self, other: &Self) -> bool {
        self.basis == other.basis
            && self.delta == other.delta
            && self.eps == other.eps
            && self.star == other.star
    }
}

impl Eq for Coalgebra {}

impl Coalgebra {
    /// Builds a coalgebra after shape checks only; call [`Coalgebra::validate`] for the laws.
    pub fn new(
        name: impl Into<String>,
        basis: Vec<String>,
        delta: Tensor3,
        eps: Vec<Scalar>,
        star: Option<Vec<usize>>,
    ) -> Result<Self, CoalgError> {
        let n = basis.len();
        if delta.dims() != [n, n, n] {
            return Err(CoalgError::Shape(format!(
                "delta has dims {:?}, basis has {} labels",
                delta.dims(),
                n
            )));
        }
        if eps.len() != n {
            return Err(CoalgError::Shape(format!(
                "eps has length {}, basis has {} labels",
                eps.len(),
                n
            )));
        }
        check_distinct(&basis)?;
        if let Some(s) = &star {
            check_permutation(s, n)?;
        }
        Ok(Coalgebra {
            name: name.into(),
            basis,
            delta,
            eps,
            star,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_star(mut self, star: Option<Vec<usize>>) -> Result<Self, CoalgError> {
        if let Some(s) = &star {
            check_permutation(s, self.dim())?;
        }
        self.star = star;
        Ok(self)
    }

    pub fn with_eps(mut self, eps: Vec<Scalar>) -> Result<Self, CoalgError> {
        if eps.len() != self.dim() {
            return Err(CoalgError::Shape("eps length".into()));
        }
        self.eps = eps;
        Ok(self)
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn label(&self, i: usize) -> &str {
        &self.basis[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.basis.iter().position(|b| b == label)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn delta(&self) -> &Tensor3 {
        &self.delta
    }

    pub fn eps(&self) -> &[Scalar] {
        &self.eps
    }

    pub fn star(&self) -> Option<&[usize]> {
        self.star.as_deref()
    }

    /// `Δ` as a `dim² × dim` matrix; row `i*dim + j` holds the `c_i ⊗ c_j` coefficient.
    pub fn delta_matrix(&self) -> Matrix {
        self.delta.unfold_first()
    }

    /// `ε` as a `1 × dim` matrix.
    pub fn eps_matrix(&self) -> Matrix {
        Matrix::row_vector(&self.eps)
    }

    /// `Δ(c)` as a `dim × dim` coefficient matrix.
    pub fn comultiply(&self, c: &[Scalar]) -> Matrix {
        self.delta
            .contract(0, c)
            .expect("coordinate vector length matches dimension")
    }

    pub fn counit(&self, c: &[Scalar]) -> Scalar {
        crate::exact::dot(&self.eps, c)
    }

    /// Applies the antilinear star to a coordinate vector.
    pub fn apply_star(&self, c: &[Scalar]) -> Option<Vec<Scalar>> {
        let star = self.star.as_ref()?;
        let mut out = vec![Scalar::zero(); self.dim()];
        for (k, x) in c.iter().enumerate() {
            out[star[k]] = x.conj();
        }
        Some(out)
    }

    pub fn is_cocommutative(&self) -> bool {
        self.delta
            .iter()
            .all(|((k, i, j), x)| &self.delta.get(k, j, i) == x)
    }

    /// Lists every violated law; an empty report means the data is a (*-)coalgebra.
    pub fn validate(&self) -> ValidationReport {
        let n = self.dim();
        let mut violations = Vec::new();
        let d = self.delta_matrix();
        let id = Matrix::identity(n);
        let left = d.kron(&id).mul(&d);
        let right = id.kron(&d).mul(&d);
        let diff = left.sub(&right);
        let mut coassoc: Vec<_> = diff
            .entries()
            .into_iter()
            .map(|(row, k, _)| Violation::Coassociativity {
                k,
                i: row / (n * n),
                j: (row / n) % n,
                l: row % n,
            })
            .collect();
        coassoc.sort_by_key(|v| match v {
            Violation::Coassociativity { k, i, j, l } => (*k, *i, *j, *l),
            _ => unreachable!(),
        });
        violations.extend(coassoc);

        for k in 0..n {
            let dk = self.comultiply(&crate::exact::unit_vec(n, k));
            for j in 0..n {
                let s: Scalar = (0..n).map(|i| &self.eps[i] * &dk.get(i, j)).sum();
                if s != kronecker(k, j) {
                    violations.push(Violation::LeftCounit { k, j });
                }
            }
            for i in 0..n {
                let s: Scalar = (0..n).map(|j| &self.eps[j] * &dk.get(i, j)).sum();
                if s != kronecker(k, i) {
                    violations.push(Violation::RightCounit { k, i });
                }
            }
        }

        if let Some(star) = &self.star {
            for k in 0..n {
                if star[star[k]] != k {
                    violations.push(Violation::StarNotInvolutive { k });
                }
                if self.eps[star[k]] != self.eps[k].conj() {
                    violations.push(Violation::StarCounit { k });
                }
                // Δ(c_k*) = Σ conj(δ^k_{ij}) c_j* ⊗ c_i*
                for i in 0..n {
                    for j in 0..n {
                        let lhs = self.delta.get(star[k], star[j], star[i]);
                        if lhs != self.delta.get(k, i, j).conj() {
                            violations.push(Violation::StarComultiplication { k, i, j });
                        }
                    }
                }
            }
        }
        ValidationReport { violations }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_valid()
    }

    /// The linearization `kS`: every label is group-like.
    pub fn linearize<S: AsRef<str>>(labels: &[S]) -> Result<Self, CoalgError> {
        let basis: Vec<String> = labels.iter().map(|s| s.as_ref().to_string()).collect();
        let n = basis.len();
        let mut delta = Tensor3::zeros([n, n, n]);
        for k in 0..n {
            delta.set(k, k, k, Scalar::one())?;
        }
        let name = format!("k{{{}}}", basis.join(","));
        Coalgebra::new(name, basis, delta, vec![Scalar::one(); n], Some((0..n).collect()))
    }

    /// The one-point coalgebra `k{pt}`, terminal in the category of coalgebras.
    pub fn singleton() -> Self {
        Coalgebra::linearize(&["pt"]).expect("one label")
    }

    pub fn empty() -> Self {
        Coalgebra::linearize::<&str>(&[]).expect("no labels")
    }

    /// Truth values `k{bot, top}`.
    pub fn omega() -> Self {
        Coalgebra::linearize(&["bot", "top"])
            .expect("distinct labels")
            .with_name("kOmega")
    }

    /// The comatrix coalgebra with `Δ(d_ik) = Σ_j d_ij ⊗ d_jk`, `ε(d_ik) = δ_ik` and
    /// star `d_ij* = d_ji`.
    pub fn comatrix(n: usize) -> Self {
        assert!(n >= 1, "comatrix needs n >= 1");
        let c = Coalgebra::fd_category(&FiniteCategory::pair(n)).expect("pair category is valid");
        let star = (0..n * n).map(|idx| (idx % n) * n + idx / n).collect();
        c.with_name(format!("comatrix({n})"))
            .with_star(Some(star))
            .expect("transpose is a permutation")
    }

    /// Truncated divided-power coalgebra `d_0..d_n`, `Δ(d_m) = Σ_{a+b=m} d_a ⊗ d_b`.
    pub fn fd_monoid_additive(n: usize) -> Self {
        let dim = n + 1;
        let basis = (0..dim).map(|k| format!("d{k}")).collect();
        let mut delta = Tensor3::zeros([dim, dim, dim]);
        for m in 0..dim {
            for a in 0..=m {
                delta.set(m, a, m - a, Scalar::one()).expect("in range");
            }
        }
        let eps = (0..dim).map(|k| kronecker(k, 0)).collect();
        Coalgebra::new(format!("additive({n})"), basis, delta, eps, Some((0..dim).collect()))
            .expect("consistent shapes")
    }

    /// The decomposition coalgebra of a finite category: `Δ(m) = Σ_{m1∘m2=m} m1 ⊗ m2`.
    pub fn fd_category(cat: &FiniteCategory) -> Result<Self, CoalgError> {
        cat.check()?;
        let n = cat.morphisms.len();
        let mut delta = Tensor3::zeros([n, n, n]);
        for (&(m1, m2), &m) in &cat.composition {
            delta.set(m, m1, m2, Scalar::one())?;
        }
        let eps = (0..n)
            .map(|m| {
                if cat.is_identity(m) {
                    Scalar::one()
                } else {
                    Scalar::zero()
                }
            })
            .collect();
        let basis = cat.morphisms.iter().map(|m| m.name.clone()).collect();
        Coalgebra::new("category", basis, delta, eps, None)
    }

    /// The co-opposite coalgebra: `Δ^o = τ∘Δ`.
    pub fn opposite(&self) -> Self {
        let name = match self.name.strip_suffix("^o") {
            Some(base) => base.to_string(),
            None => format!("{}^o", self.name),
        };
        Coalgebra {
            name,
            basis: self.basis.clone(),
            delta: self.delta.swap_last(),
            eps: self.eps.clone(),
            star: self.star.clone(),
        }
    }

    /// Tensor product; basis element `(a, b)` sits at index `a * other.dim() + b`.
    pub fn tensor(&self, other: &Coalgebra) -> Self {
        let (n1, n2) = (self.dim(), other.dim());
        let n = n1 * n2;
        let basis: Vec<String> = self
            .basis
            .iter()
            .flat_map(|a| other.basis.iter().map(move |b| format!("({a},{b})")))
            .collect();
        let mut delta = Tensor3::zeros([n, n, n]);
        for ((k1, i1, j1), x) in self.delta.iter() {
            for ((k2, i2, j2), y) in other.delta.iter() {
                delta
                    .set(k1 * n2 + k2, i1 * n2 + i2, j1 * n2 + j2, x * y)
                    .expect("in range");
            }
        }
        let eps = self
            .eps
            .iter()
            .flat_map(|x| other.eps.iter().map(move |y| x * y))
            .collect();
        let star = match (&self.star, &other.star) {
            (Some(s1), Some(s2)) => Some(
                (0..n)
                    .map(|idx| s1[idx / n2] * n2 + s2[idx % n2])
                    .collect(),
            ),
            _ => None,
        };
        Coalgebra {
            name: format!("{}⊗{}", self.name, other.name),
            basis,
            delta,
            eps,
            star,
        }
    }

    /// For coalgebras whose structure constants are 0/1 with at most one `k`
    /// per pair `(i, j)`, returns the partial composition `(i, j) ↦ k`.
    pub fn decomposition_table(&self) -> Option<BTreeMap<(usize, usize), usize>> {
        let mut table = BTreeMap::new();
        for ((k, i, j), x) in self.delta.iter() {
            if !x.is_one() || table.insert((i, j), k).is_some() {
                return None;
            }
        }
        Some(table)
    }

    /// `k`-th basis vector as an element.
    pub fn basis_element(self: &Arc<Self>, k: usize) -> Element {
        Element::new(self.clone(), crate::exact::unit_vec(self.dim(), k)).expect("length matches")
    }
}

fn kronecker(a: usize, b: usize) -> Scalar {
    if a == b {
        Scalar::one()
    } else {
        Scalar::zero()
    }
}

fn check_distinct(labels: &[String]) -> Result<(), CoalgError> {
    let mut seen = std::collections::BTreeSet::new();
    for l in labels {
        if !seen.insert(l.as_str()) {
            return Err(CoalgError::DuplicateLabel(l.clone()));
        }
    }
    Ok(())
}

fn check_permutation(p: &[usize], n: usize) -> Result<(), CoalgError> {
    if p.len() != n {
        return Err(CoalgError::BadStar);
    }
    let mut hit = vec![false; n];
    for &x in p {
        if x >= n || std::mem::replace(&mut hit[x], true) {
            return Err(CoalgError::BadStar);
        }
    }
    Ok(())
}

/// A vector of a coalgebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element {
    pub coalgebra: Arc<Coalgebra>,
    pub coords: Vec<Scalar>,
}

impl Element {
    pub fn new(coalgebra: Arc<Coalgebra>, coords: Vec<Scalar>) -> Result<Self, CoalgError> {
        if coords.len() != coalgebra.dim() {
            return Err(CoalgError::Shape(format!(
                "element has {} coordinates, coalgebra has dimension {}",
                coords.len(),
                coalgebra.dim()
            )));
        }
        Ok(Element { coalgebra, coords })
    }

    pub fn counit(&self) -> Scalar {
        self.coalgebra.counit(&self.coords)
    }

    pub fn comultiply(&self) -> Matrix {
        self.coalgebra.comultiply(&self.coords)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_combination(self.coalgebra.basis(), &self.coords))
    }
}

/// Renders `Σ x_k label_k`, e.g. `d11 + -1/2 d12`; the zero vector is `0`.
pub fn format_combination(labels: &[String], coords: &[Scalar]) -> String {
    let terms: Vec<String> = coords
        .iter()
        .zip(labels)
        .filter(|(x, _)| !x.is_zero())
        .map(|(x, l)| {
            if x.is_one() {
                l.clone()
            } else if x.is_real() {
                format!("{x} {l}")
            } else {
                format!("({x}) {l}")
            }
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coassoc_oracle(c: &Coalgebra) -> bool {
        // direct four-index sum, independent of the matrix formulation
        let n = c.dim();
        let d = c.delta();
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    for l in 0..n {
                        let lhs: Scalar = (0..n).map(|p| &d.get(k, p, l) * &d.get(p, i, j)).sum();
                        let rhs: Scalar = (0..n).map(|q| &d.get(k, i, q) * &d.get(q, j, l)).sum();
                        if lhs != rhs {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    #[test]
    fn constructors_validate() {
        for c in [
            Coalgebra::linearize(&["a", "b"]).unwrap(),
            Coalgebra::singleton(),
            Coalgebra::empty(),
            Coalgebra::omega(),
            Coalgebra::comatrix(1),
            Coalgebra::comatrix(2),
            Coalgebra::comatrix(3),
            Coalgebra::fd_monoid_additive(0),
            Coalgebra::fd_monoid_additive(2),
            Coalgebra::fd_category(&FiniteCategory::chain(2)).unwrap(),
        ] {
            assert!(c.is_valid(), "{}: {:?}", c.name(), c.validate());
            assert!(coassoc_oracle(&c));
        }
        assert_eq!(Coalgebra::empty().dim(), 0);
        assert_eq!(Coalgebra::fd_category(&FiniteCategory::chain(2)).unwrap().dim(), 3);
    }

    #[test]
    fn comatrix_structure() {
        let c = Coalgebra::comatrix(2);
        assert_eq!(c.basis(), ["d11", "d12", "d21", "d22"]);
        let d12 = c.comultiply(&crate::exact::unit_vec(4, 1));
        let mut expected = Matrix::zeros(4, 4);
        expected.set(0, 1, Scalar::one());
        expected.set(1, 3, Scalar::one());
        assert_eq!(d12, expected);
        assert!(!c.is_cocommutative());
        assert_eq!(
            Coalgebra::comatrix(1).delta(),
            Coalgebra::singleton().delta()
        );
    }

    #[test]
    fn counit_violation_is_located() {
        let c = Coalgebra::comatrix(2)
            .with_eps(vec![Scalar::one(); 4])
            .unwrap();
        let report = c.validate();
        assert!(!report.is_valid());
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::LeftCounit { k: 1, .. })));
    }

    #[test]
    fn primitive_example_is_additive_truncation() {
        let c = Coalgebra::fd_monoid_additive(1);
        assert_eq!(c.dim(), 2);
        // Δ(d1) = d0⊗d1 + d1⊗d0
        assert!(c.delta().get(1, 0, 1).is_one());
        assert!(c.delta().get(1, 1, 0).is_one());
        assert_eq!(c.delta().nnz(), 3);
    }

    #[test]
    fn pair_category_gives_comatrix() {
        let from_cat = Coalgebra::fd_category(&FiniteCategory::pair(2)).unwrap();
        assert_eq!(from_cat.delta(), Coalgebra::comatrix(2).delta());
        assert_eq!(from_cat.basis(), Coalgebra::comatrix(2).basis());
        let discrete = Coalgebra::fd_category(&FiniteCategory::discrete(&["a", "b"])).unwrap();
        let lin = Coalgebra::linearize(&["a", "b"]).unwrap();
        assert_eq!(discrete.delta(), lin.delta());
        assert_eq!(discrete.eps(), lin.eps());
    }

    #[test]
    fn opposite_and_tensor() {
        let c = Coalgebra::comatrix(2);
        let o = c.opposite();
        assert_ne!(o, c);
        assert!(o.is_valid());
        assert_eq!(o.opposite(), c);
        let s = Coalgebra::linearize(&["a", "b"]).unwrap();
        assert_eq!(s.opposite(), s);

        let t = c.tensor(&c);
        assert_eq!(t.dim(), 16);
        assert!(t.is_valid());
        let unit = c.tensor(&Coalgebra::singleton());
        assert_eq!(unit.delta(), c.delta());
        assert_eq!(unit.eps(), c.eps());
    }

    #[test]
    fn duplicate_labels_rejected() {
        assert_eq!(
            Coalgebra::linearize(&["a", "a"]).unwrap_err(),
            CoalgError::DuplicateLabel("a".into())
        );
    }

    #[test]
    fn star_laws_detect_bad_involution() {
        let good = Coalgebra::comatrix(2);
        assert!(good.is_valid());
        // identity star does not flip Δ on the comatrix coalgebra
        let bad = good.with_star(Some(vec![0, 1, 2, 3])).unwrap();
        assert!(bad
            .validate()
            .violations
            .iter()
            .any(|v| matches!(v, Violation::StarComultiplication { .. })));
    }

    #[test]
    fn decomposition_table_detection() {
        assert!(Coalgebra::comatrix(2).decomposition_table().is_some());
        assert!(Coalgebra::fd_monoid_additive(3).decomposition_table().is_some());
        let t = Coalgebra::comatrix(2).tensor(&Coalgebra::comatrix(2));
        assert!(t.decomposition_table().is_some());
    }

    #[test]
    fn element_display() {
        let c = Arc::new(Coalgebra::comatrix(2));
        let e = Element::new(c, vec![1.into(), Scalar::ratio(-1, 2), 0.into(), 0.into()]).unwrap();
        assert_eq!(e.to_string(), "d11 + -1/2 d12");
    }
}
