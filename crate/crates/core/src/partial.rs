//! The convolution algebra `F(C)` and the partial tensor pairing of
//! coalgebra maps with a common source.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::coalg::{format_combination, Coalgebra};
use crate::elements::{CoalgebraMap, ElementsError, MapViolation, RelationFailure};
use crate::exact::{is_zero_vec, unit_vec, vec_add, vec_scale, vec_sub, Matrix, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartialError {
    #[error("functionals live on different coalgebras")]
    CoalgebraMismatch,
    #[error("maps have different sources")]
    SourceMismatch,
    #[error("map {index} is not a coalgebra map: {violation:?}")]
    NotVerified { index: usize, violation: MapViolation },
    #[error("pair is not admissible; symmetry fails at basis element `{label}`")]
    NotAdmissible { k: usize, label: String },
    #[error("refusing to pair an uncertified pair")]
    Uncertified,
    #[error("target `{0}` is not a linearized set")]
    NotSetLike(String),
    #[error("family is not a complete set of orthogonal idempotents: {0:?}")]
    Family(RelationFailure),
    #[error("coalgebra has no star structure")]
    NoStar,
    #[error(transparent)]
    Elements(#[from] ElementsError),
}

/// A linear functional on `C`, i.e. an element of the convolution algebra `F(C)`.
#[derive(Clone, PartialEq, Eq)]
pub struct ConvElement {
    coalgebra: Arc<Coalgebra>,
    coords: Vec<Scalar>,
}

impl ConvElement {
    pub fn new(coalgebra: Arc<Coalgebra>, coords: Vec<Scalar>) -> Result<Self, PartialError> {
        if coords.len() != coalgebra.dim() {
            return Err(PartialError::CoalgebraMismatch);
        }
        Ok(ConvElement { coalgebra, coords })
    }

    pub fn zero(c: Arc<Coalgebra>) -> Self {
        let n = c.dim();
        ConvElement {
            coalgebra: c,
            coords: vec![Scalar::zero(); n],
        }
    }

    /// The unit of `F(C)`: the counit.
    pub fn unit(c: Arc<Coalgebra>) -> Self {
        let coords = c.eps().to_vec();
        ConvElement { coalgebra: c, coords }
    }

    /// The dual-basis functional `e_k`.
    pub fn basis(c: Arc<Coalgebra>, k: usize) -> Self {
        let coords = unit_vec(c.dim(), k);
        ConvElement { coalgebra: c, coords }
    }

    pub fn coalgebra(&self) -> &Arc<Coalgebra> {
        &self.coalgebra
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.coords)
    }

    pub fn eval(&self, c: &[Scalar]) -> Scalar {
        crate::exact::dot(&self.coords, c)
    }

    fn same(&self, other: &ConvElement) -> Result<(), PartialError> {
        if Arc::ptr_eq(&self.coalgebra, &other.coalgebra) || self.coalgebra == other.coalgebra {
            Ok(())
        } else {
            Err(PartialError::CoalgebraMismatch)
        }
    }

    /// Convolution `(x∗y)(c) = x(c₁) y(c₂)`.
    pub fn try_mul(&self, other: &ConvElement) -> Result<ConvElement, PartialError> {
        self.same(other)?;
        let mut out = vec![Scalar::zero(); self.coords.len()];
        for ((k, i, j), d) in self.coalgebra.delta().iter() {
            let (x, y) = (&self.coords[i], &other.coords[j]);
            if !x.is_zero() && !y.is_zero() {
                out[k] += &(&(d * x) * y);
            }
        }
        Ok(ConvElement {
            coalgebra: self.coalgebra.clone(),
            coords: out,
        })
    }

    /// Convolution; panics when the coalgebras differ.
    pub fn mul(&self, other: &ConvElement) -> ConvElement {
        self.try_mul(other).expect("convolution of functionals on one coalgebra")
    }

    pub fn add(&self, other: &ConvElement) -> ConvElement {
        self.same(other).expect("same coalgebra");
        ConvElement {
            coalgebra: self.coalgebra.clone(),
            coords: vec_add(&self.coords, &other.coords),
        }
    }

    pub fn sub(&self, other: &ConvElement) -> ConvElement {
        self.same(other).expect("same coalgebra");
        ConvElement {
            coalgebra: self.coalgebra.clone(),
            coords: vec_sub(&self.coords, &other.coords),
        }
    }

    pub fn scale(&self, s: &Scalar) -> ConvElement {
        ConvElement {
            coalgebra: self.coalgebra.clone(),
            coords: vec_scale(&self.coords, s),
        }
    }

    pub fn pow(&self, m: u32) -> ConvElement {
        (0..m).fold(ConvElement::unit(self.coalgebra.clone()), |acc, _| acc.mul(self))
    }

    /// `x*(c) = conj(x(c*))`.
    pub fn star(&self) -> Result<ConvElement, PartialError> {
        let star = self.coalgebra.star().ok_or(PartialError::NoStar)?;
        let coords = (0..self.coords.len())
            .map(|k| self.coords[star[k]].conj())
            .collect();
        Ok(ConvElement {
            coalgebra: self.coalgebra.clone(),
            coords,
        })
    }
}

impl fmt::Display for ConvElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self
            .coalgebra
            .basis()
            .iter()
            .map(|l| format!("e[{l}]"))
            .collect();
        f.write_str(&format_combination(&labels, &self.coords))
    }
}

impl fmt::Debug for ConvElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ConvElement({self})")
    }
}

pub fn conv_mul(x: &ConvElement, y: &ConvElement) -> Result<ConvElement, PartialError> {
    x.try_mul(y)
}

pub fn conv_unit(c: Arc<Coalgebra>) -> ConvElement {
    ConvElement::unit(c)
}

/// `kron(X1, X2) Δ_C`: the candidate map `c ↦ x1(c₁) ⊗ x2(c₂)`.
fn mixed(x1: &CoalgebraMap, x2: &CoalgebraMap, flip: bool) -> Matrix {
    let delta = if flip {
        x1.source().opposite().delta_matrix()
    } else {
        x1.source().delta_matrix()
    };
    x1.matrix().kron(x2.matrix()).mul(&delta)
}

/// Outcome of the symmetry test for a pair of maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Admissibility {
    /// Source basis indices `k` where `x1(c₁)⊗x2(c₂) ≠ x1(c₂)⊗x2(c₁)`.
    pub offending: Vec<usize>,
    /// The difference tensor at the first offending index, as a `dim D1 × dim D2` matrix.
    pub witness: Option<Matrix>,
}

impl Admissibility {
    pub fn admissible(&self) -> bool {
        self.offending.is_empty()
    }

    pub fn first_offending(&self) -> Option<usize> {
        self.offending.first().copied()
    }
}

fn require_maps(maps: &[&CoalgebraMap]) -> Result<(), PartialError> {
    let source = maps[0].source();
    for (index, m) in maps.iter().enumerate() {
        if m.source() != source {
            return Err(PartialError::SourceMismatch);
        }
        if let Some(violation) = m.violation() {
            return Err(PartialError::NotVerified { index, violation });
        }
    }
    Ok(())
}

fn symmetry(x1: &CoalgebraMap, x2: &CoalgebraMap) -> Admissibility {
    let diff = mixed(x1, x2, false).sub(&mixed(x1, x2, true));
    let mut offending: Vec<usize> = (0..diff.cols())
        .filter(|&k| diff.column_entries(k).next().is_some())
        .collect();
    offending.sort_unstable();
    let witness = offending.first().map(|&k| {
        let d2 = x2.target().dim();
        let mut w = Matrix::zeros(x1.target().dim(), d2);
        for (row, v) in diff.column_entries(k) {
            w.set(row / d2, row % d2, v.clone());
        }
        w
    });
    Admissibility { offending, witness }
}

/// Tests `x1(c₁)⊗x2(c₂) = x1(c₂)⊗x2(c₁)` on every basis element of the common source.
pub fn is_admissible(x1: &CoalgebraMap, x2: &CoalgebraMap) -> Result<Admissibility, PartialError> {
    require_maps(&[x1, x2])?;
    Ok(symmetry(x1, x2))
}

/// Two coalgebra maps with a common source, with a record of whether their
/// symmetry condition has been checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissiblePair {
    pub x1: CoalgebraMap,
    pub x2: CoalgebraMap,
    certified: bool,
}

impl AdmissiblePair {
    /// Verifies both maps and the symmetry condition.
    pub fn certify(x1: CoalgebraMap, x2: CoalgebraMap) -> Result<Self, PartialError> {
        let adm = is_admissible(&x1, &x2)?;
        if let Some(k) = adm.first_offending() {
            return Err(PartialError::NotAdmissible {
                k,
                label: x1.source().label(k).to_string(),
            });
        }
        Ok(AdmissiblePair {
            x1,
            x2,
            certified: true,
        })
    }

    pub fn uncertified(x1: CoalgebraMap, x2: CoalgebraMap) -> Self {
        AdmissiblePair {
            x1,
            x2,
            certified: false,
        }
    }

    pub fn is_certified(&self) -> bool {
        self.certified
    }
}

/// `(x1, x2)(c) = x1(c₁) ⊗ x2(c₂)`, a map into `D1 ⊗ D2`.
pub fn pair(p: &AdmissiblePair) -> Result<CoalgebraMap, PartialError> {
    if !p.certified {
        return Err(PartialError::Uncertified);
    }
    Ok(pair_unchecked(&p.x1, &p.x2))
}

fn pair_unchecked(x1: &CoalgebraMap, x2: &CoalgebraMap) -> CoalgebraMap {
    let target = Arc::new(x1.target().tensor(x2.target()));
    CoalgebraMap::new(x1.source().clone(), target, mixed(x1, x2, false))
        .expect("kron shape matches tensor target")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AssocReport {
    /// `(x1, x2)` and `((x1, x2), x3)` are both admissible.
    pub left_defined: bool,
    /// `(x2, x3)` and `(x1, (x2, x3))` are both admissible.
    pub right_defined: bool,
    /// When both nestings exist, whether they agree after re-association.
    pub maps_equal: Option<bool>,
}

impl AssocReport {
    pub fn holds(&self) -> bool {
        self.left_defined == self.right_defined && self.maps_equal != Some(false)
    }
}

/// Compares the two nestings of a triple. Row-major Kronecker indexing makes
/// the re-association `(D1⊗D2)⊗D3 ≅ D1⊗(D2⊗D3)` the identity on indices.
pub fn partial_assoc_check(
    x1: &CoalgebraMap,
    x2: &CoalgebraMap,
    x3: &CoalgebraMap,
) -> Result<AssocReport, PartialError> {
    require_maps(&[x1, x2, x3])?;
    let nest = |a: &CoalgebraMap, b: &CoalgebraMap| -> Option<CoalgebraMap> {
        symmetry(a, b).admissible().then(|| pair_unchecked(a, b))
    };
    let left = nest(x1, x2).and_then(|p| nest(&p, x3));
    let right = nest(x2, x3).and_then(|p| nest(x1, &p));
    let maps_equal = match (&left, &right) {
        (Some(l), Some(r)) => Some(l.matrix() == r.matrix()),
        _ => None,
    };
    Ok(AssocReport {
        left_defined: left.is_some(),
        right_defined: right.is_some(),
        maps_equal,
    })
}

/// Scalar shadow of the symmetry condition:
/// `Σ_{ij} δ^k_{ij} (x_i y_j − x_j y_i) = 0` for every `k`.
pub fn functionals_admissible(x: &ConvElement, y: &ConvElement) -> Result<bool, PartialError> {
    x.same(y)?;
    let n = x.coalgebra.dim();
    let mut acc = vec![Scalar::zero(); n];
    for ((k, i, j), d) in x.coalgebra.delta().iter() {
        let t = &(&x.coords[i] * &y.coords[j]) - &(&x.coords[j] * &y.coords[i]);
        acc[k] += &(d * &t);
    }
    Ok(is_zero_vec(&acc))
}

/// True when every basis element is group-like (the coalgebra is `kT`).
pub fn is_set_like(c: &Coalgebra) -> bool {
    c.eps().iter().all(Scalar::is_one)
        && c.delta().nnz() == c.dim()
        && (0..c.dim()).all(|k| c.delta().get(k, k, k).is_one())
}

/// `f: C -> kT` as the family `x_t` of coefficient functionals.
pub fn orthogonal_idempotent_family(f: &CoalgebraMap) -> Result<Vec<ConvElement>, PartialError> {
    if !is_set_like(f.target()) {
        return Err(PartialError::NotSetLike(f.target().name().to_string()));
    }
    if let Some(violation) = f.violation() {
        return Err(PartialError::NotVerified {
            index: 0,
            violation,
        });
    }
    Ok((0..f.target().dim()).map(|t| f.coefficient(t)).collect())
}

/// Checks `x_s x_t = δ_st x_s` and `Σ_t x_t = ε`.
pub fn idempotent_family_failure(family: &[ConvElement], labels: &[String]) -> Option<RelationFailure> {
    let c = family.first()?.coalgebra.clone();
    for (s, xs) in family.iter().enumerate() {
        for (t, xt) in family.iter().enumerate() {
            let prod = xs.mul(xt);
            let ok = if s == t { prod == *xs } else { prod.is_zero() };
            if !ok {
                return Some(RelationFailure::Product {
                    left: labels[s].clone(),
                    right: labels[t].clone(),
                });
            }
        }
    }
    let sum = family
        .iter()
        .fold(ConvElement::zero(c.clone()), |acc, x| acc.add(x));
    (sum != ConvElement::unit(c)).then_some(RelationFailure::Completeness)
}

/// Inverse of [`orthogonal_idempotent_family`].
pub fn assemble(target: Arc<Coalgebra>, family: &[ConvElement]) -> Result<CoalgebraMap, PartialError> {
    if !is_set_like(&target) {
        return Err(PartialError::NotSetLike(target.name().to_string()));
    }
    if family.len() != target.dim() || family.is_empty() {
        return Err(ElementsError::FamilySize {
            expected: target.dim(),
            found: family.len(),
        }
        .into());
    }
    let c = family[0].coalgebra.clone();
    if family.iter().any(|x| x.same(&family[0]).is_err()) {
        return Err(PartialError::CoalgebraMismatch);
    }
    if let Some(failure) = idempotent_family_failure(family, target.basis()) {
        return Err(PartialError::Family(failure));
    }
    let f = CoalgebraMap::from_coefficients(target, family)?;
    debug_assert!(f.source() == &c && f.is_coalgebra_map());
    Ok(f)
}
