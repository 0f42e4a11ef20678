use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{first_nonzero_column, QuiverError};
use crate::coalg::Coalgebra;
use crate::elements::CoalgebraMap;
use crate::exact::{Matrix, Scalar};

/// A finite-dimensional right comodule `ρ: M -> M⊗C`, stored as a
/// `dim·dim C × dim` matrix with row index `m·dim C + c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comodule {
    coalgebra: Arc<Coalgebra>,
    dim: usize,
    coaction: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComoduleReport {
    pub coassociative: bool,
    pub counital: bool,
    /// First module basis index where coassociativity fails.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coassociativity_witness: Option<usize>,
    /// First module basis index where the counit law fails.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counit_witness: Option<usize>,
}

impl ComoduleReport {
    pub fn is_valid(&self) -> bool {
        self.coassociative && self.counital
    }
}

/// `τ: A⊗B -> B⊗A` for dimensions `a`, `b`.
fn flip(a: usize, b: usize) -> Matrix {
    let perm: Vec<usize> = (0..a * b).map(|idx| (idx % b) * a + idx / b).collect();
    Matrix::permutation(&perm)
}

impl Comodule {
    pub fn new(coalgebra: Arc<Coalgebra>, dim: usize, coaction: Matrix) -> Result<Self, QuiverError> {
        if coaction.shape() != (dim * coalgebra.dim(), dim) {
            return Err(QuiverError::Shape(format!(
                "coaction is {:?}, expected {:?}",
                coaction.shape(),
                (dim * coalgebra.dim(), dim)
            )));
        }
        Ok(Comodule {
            coalgebra,
            dim,
            coaction,
        })
    }

    pub fn coalgebra(&self) -> &Arc<Coalgebra> {
        &self.coalgebra
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coaction(&self) -> &Matrix {
        &self.coaction
    }

    /// `C` with `ρ = Δ`.
    pub fn regular(c: Arc<Coalgebra>) -> Self {
        let n = c.dim();
        let coaction = c.delta_matrix();
        Comodule {
            coalgebra: c,
            dim: n,
            coaction,
        }
    }

    /// `ρ(m) = m ⊗ c_{grade[m]}`; a comodule when each graded piece sits over a group-like basis element.
    pub fn graded(c: Arc<Coalgebra>, grade: &[usize]) -> Result<Self, QuiverError> {
        let dc = c.dim();
        let mut coaction = Matrix::zeros(grade.len() * dc, grade.len());
        for (m, &g) in grade.iter().enumerate() {
            if g >= dc {
                return Err(QuiverError::Shape(format!("grade {g} out of range")));
            }
            coaction.set(m * dc + g, m, Scalar::one());
        }
        Comodule::new(c, grade.len(), coaction)
    }

    /// `ρ(m) = m ⊗ pt` over the singleton coalgebra.
    pub fn trivial(dim: usize) -> Self {
        Comodule::graded(Arc::new(Coalgebra::singleton()), &vec![0; dim]).expect("grade 0 exists")
    }

    pub fn validate(&self) -> ComoduleReport {
        let dc = self.coalgebra.dim();
        let rho = &self.coaction;
        let lhs = rho.kron(&Matrix::identity(dc)).mul(rho);
        let rhs = Matrix::identity(self.dim).kron(&self.coalgebra.delta_matrix()).mul(rho);
        let coassoc = first_nonzero_column(&lhs.sub(&rhs));
        let counit = Matrix::identity(self.dim).kron(&self.coalgebra.eps_matrix()).mul(rho);
        let counit = first_nonzero_column(&counit.sub(&Matrix::identity(self.dim)));
        ComoduleReport {
            coassociative: coassoc.is_none(),
            counital: counit.is_none(),
            coassociativity_witness: coassoc,
            counit_witness: counit,
        }
    }

    /// A right comodule over `C^o` for the left `C`-comodule `λ: M -> C⊗M`
    /// (row index `c·dim + m`).
    pub fn from_left(c: &Arc<Coalgebra>, dim: usize, left: &Matrix) -> Result<Self, QuiverError> {
        if left.shape() != (c.dim() * dim, dim) {
            return Err(QuiverError::Shape("left coaction".into()));
        }
        Comodule::new(Arc::new(c.opposite()), dim, flip(c.dim(), dim).mul(left))
    }

    /// `λ: M -> D⊗M` for a right comodule over `D^o`, read as a left `D`-comodule.
    pub fn left_coaction(&self) -> Matrix {
        flip(self.dim, self.coalgebra.dim()).mul(&self.coaction)
    }

    /// Dimension of the space of comodule maps `self -> other`.
    pub fn hom_dim(&self, other: &Comodule) -> Result<usize, QuiverError> {
        if self.coalgebra != other.coalgebra {
            return Err(QuiverError::ComoduleMismatch(self.coalgebra.name().into()));
        }
        Ok(comodule_hom_constraints(self, other).kernel().cols())
    }

    /// Whether `phi: self -> other` (a `dim other × dim self` matrix) intertwines the coactions.
    pub fn is_map_to(&self, other: &Comodule, phi: &Matrix) -> bool {
        let dc = self.coalgebra.dim();
        phi.shape() == (other.dim, self.dim)
            && self.coalgebra == other.coalgebra
            && other.coaction.mul(phi) == phi.kron(&Matrix::identity(dc)).mul(&self.coaction)
    }
}

/// Linear conditions on `φ` (variable `a·dim M + b` for entry `(a, b)`) for `ρ_N φ = (φ⊗id)ρ_M`.
fn comodule_hom_constraints(m: &Comodule, n: &Comodule) -> Matrix {
    let (dm, dn, dc) = (m.dim, n.dim, m.coalgebra.dim());
    let mut a = Matrix::zeros(dn * dc * dm, dn * dm);
    for (row, col, x) in n.coaction.entries() {
        // row = n'·dc + c, col = a
        for b in 0..dm {
            a.add_at(row * dm + b, col * dm + b, &x);
        }
    }
    for (row, col, x) in m.coaction.entries() {
        // row = b·dc + c, col = m
        let (b, c) = (row / dc, row % dc);
        for np in 0..dn {
            a.add_at((np * dc + c) * dm + col, np * dm + b, &-x.clone());
        }
    }
    a
}

/// File form of a comodule: entries `(m, m', c, x)` meaning `ρ(m)` has coefficient `x` on `m'⊗c`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComoduleFile {
    pub dim: usize,
    pub coaction: Vec<(usize, usize, usize, Scalar)>,
}

impl ComoduleFile {
    pub fn into_comodule(self, c: Arc<Coalgebra>) -> Result<Comodule, QuiverError> {
        let dc = c.dim();
        let mut rho = Matrix::zeros(self.dim * dc, self.dim);
        for (m, mp, k, x) in &self.coaction {
            if *m >= self.dim || *mp >= self.dim || *k >= dc {
                return Err(QuiverError::Shape(format!("entry ({m}, {mp}, {k}) out of range")));
            }
            rho.add_at(mp * dc + k, *m, x);
        }
        Comodule::new(c, self.dim, rho)
    }

    pub fn from_comodule(m: &Comodule) -> Self {
        let dc = m.coalgebra.dim();
        ComoduleFile {
            dim: m.dim,
            coaction: m
                .coaction
                .entries()
                .into_iter()
                .map(|(row, col, x)| (col, row / dc, row % dc, x))
                .collect(),
        }
    }
}

/// Corestriction along `f: C -> D`: `ρ' = (id⊗f)∘ρ`.
pub fn corestrict(f: &CoalgebraMap, m: &Comodule) -> Result<Comodule, QuiverError> {
    if f.source() != &m.coalgebra {
        return Err(QuiverError::ComoduleMismatch(f.source().name().into()));
    }
    let coaction = Matrix::identity(m.dim).kron(f.matrix()).mul(&m.coaction);
    Comodule::new(f.target().clone(), m.dim, coaction)
}

fn cotensor_left(n: &Comodule, p_dim: usize, lambda: &Matrix) -> Matrix {
    let lhs = n.coaction.kron(&Matrix::identity(p_dim));
    let rhs = Matrix::identity(n.dim).kron(lambda);
    lhs.sub(&rhs).kernel()
}

/// `N □_D P` as a basis of `N⊗P` (columns), where `p` is a right `D^o`-comodule
/// standing for the left `D`-comodule structure on `P`.
pub fn cotensor(n: &Comodule, p: &Comodule) -> Result<Matrix, QuiverError> {
    if p.coalgebra.opposite() != *n.coalgebra {
        return Err(QuiverError::ComoduleMismatch(n.coalgebra.opposite().name().into()));
    }
    Ok(cotensor_left(n, p.dim, &p.left_coaction()))
}

/// Coinduction `f*N = N □_D C` with its `C`-coaction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coinduced {
    /// Columns span the cotensor product inside `N⊗C`.
    pub embedding: Matrix,
    pub comodule: Comodule,
}

/// `C` is a left `D`-comodule by `(f⊗id)∘Δ`; the `C`-coaction is `id⊗Δ` restricted.
pub fn coinduce(f: &CoalgebraMap, n: &Comodule) -> Result<Coinduced, QuiverError> {
    if f.target() != &n.coalgebra {
        return Err(QuiverError::ComoduleMismatch(f.target().name().into()));
    }
    let c = f.source();
    let dc = c.dim();
    let lambda = f.matrix().kron(&Matrix::identity(dc)).mul(&c.delta_matrix());
    let k = cotensor_left(n, dc, &lambda);
    let r = k.cols();
    let image = Matrix::identity(n.dim).kron(&c.delta_matrix()).mul(&k);
    let basis = k.kron(&Matrix::identity(dc));
    let coaction = match basis.solve_matrix(&image) {
        Ok(Some(x)) => x,
        _ => return Err(QuiverError::NotClosed),
    };
    Ok(Coinduced {
        embedding: k,
        comodule: Comodule::new(c.clone(), r, coaction)?,
    })
}

/// Checks for the corestriction ⊣ coinduction adjunction on `M` (over `C`) and `N` (over `D`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdjunctionReport {
    /// `dim Hom_D(f_* M, N)`.
    pub hom_corestricted: usize,
    /// `dim Hom_C(M, f* N)`.
    pub hom_coinduced: usize,
    /// `ρ_M: M -> f* f_* M` lands in the cotensor product and is a `C`-map.
    pub unit_is_map: bool,
    /// `id⊗ε: f_* f* N -> N` is a `D`-map.
    pub counit_is_map: bool,
    /// `ε_{f_* M} ∘ f_*(η_M) = id`.
    pub left_triangle: bool,
    /// `f*(ε_N) ∘ η_{f* N} = id`.
    pub right_triangle: bool,
}

impl AdjunctionReport {
    pub fn holds(&self) -> bool {
        self.hom_corestricted == self.hom_coinduced
            && self.unit_is_map
            && self.counit_is_map
            && self.left_triangle
            && self.right_triangle
    }
}

pub fn adjunction_check(
    f: &CoalgebraMap,
    m: &Comodule,
    n: &Comodule,
) -> Result<AdjunctionReport, QuiverError> {
    let c = f.source();
    let dc = c.dim();
    let eps_c = c.eps_matrix();
    let fm = corestrict(f, m)?;
    let fn_ = coinduce(f, n)?;

    // unit at M: m ↦ ρ(m) in f_*M ⊗ C, expressed in the cotensor basis of f*(f_*M)
    let ffm = coinduce(f, &fm)?;
    let unit_coords = ffm.embedding.solve_matrix(&m.coaction).ok().flatten();
    let unit_is_map = unit_coords
        .as_ref()
        .is_some_and(|eta| m.is_map_to(&ffm.comodule, eta));
    let left_triangle = Matrix::identity(m.dim).kron(&eps_c).mul(&m.coaction) == Matrix::identity(m.dim);

    // counit at N: N⊗C ⊇ f*N -> N
    let counit = Matrix::identity(n.dim).kron(&eps_c).mul(&fn_.embedding);
    let f_fn = corestrict(f, &fn_.comodule)?;
    let counit_is_map = f_fn.is_map_to(n, &counit);
    // η_{f*N} = ρ_{f*N}; f*(ε_N) = ε_N⊗id; composite must be the embedding
    let right_triangle =
        counit.kron(&Matrix::identity(dc)).mul(&fn_.comodule.coaction) == fn_.embedding;

    Ok(AdjunctionReport {
        hom_corestricted: fm.hom_dim(n)?,
        hom_coinduced: m.hom_dim(&fn_.comodule)?,
        unit_is_map,
        counit_is_map,
        left_triangle,
        right_triangle,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(labels: &[&str]) -> Arc<Coalgebra> {
        Arc::new(Coalgebra::linearize(labels).unwrap())
    }

    #[test]
    fn regular_and_graded_are_valid() {
        for c in [Coalgebra::comatrix(2), Coalgebra::omega(), Coalgebra::fd_monoid_additive(3)] {
            assert!(Comodule::regular(Arc::new(c)).validate().is_valid());
        }
        let v = set(&["u", "w"]);
        assert!(Comodule::graded(v.clone(), &[0, 0, 1]).unwrap().validate().is_valid());
    }

    #[test]
    fn mixed_grading_breaks_counit() {
        let v = set(&["u", "w"]);
        // m0 ↦ m0⊗u + m0⊗w
        let mut rho = Matrix::zeros(2, 1);
        rho.set(1, 0, Scalar::one());
        rho.set(0, 0, Scalar::one());
        let r = Comodule::new(v, 1, rho).unwrap().validate();
        assert!(!r.counital);
        assert_eq!(r.counit_witness, Some(0));
    }

    #[test]
    fn corestriction_merges_fibers() {
        let s = set(&["a", "b", "c"]);
        let t = set(&["x", "y"]);
        let f = CoalgebraMap::from_set_map(s.clone(), t.clone(), &[0, 0, 1]).unwrap();
        let m = Comodule::graded(s.clone(), &[0, 1, 2, 2]).unwrap();
        let fm = corestrict(&f, &m).unwrap();
        assert!(fm.validate().is_valid());
        assert_eq!(fm, Comodule::graded(t, &[0, 0, 1, 1]).unwrap());
        assert_eq!(corestrict(&CoalgebraMap::identity(s), &m).unwrap(), m);
        let c = Arc::new(Coalgebra::comatrix(2));
        let collapsed = corestrict(&CoalgebraMap::counit_collapse(c.clone()), &Comodule::regular(c)).unwrap();
        assert_eq!(collapsed, Comodule::trivial(4));
    }

    #[test]
    fn cotensor_with_the_coalgebra_is_identity() {
        let d = Arc::new(Coalgebra::comatrix(2));
        let reg = Comodule::regular(d.clone());
        let left = Comodule::from_left(&d, 4, &d.delta_matrix()).unwrap();
        assert!(left.validate().is_valid());
        assert_eq!(cotensor(&reg, &left).unwrap().cols(), reg.dim());
        let co = coinduce(&CoalgebraMap::identity(d), &reg).unwrap();
        assert_eq!(co.comodule.dim(), 4);
        assert!(co.comodule.validate().is_valid());
    }

    #[test]
    fn cotensor_over_a_point_is_tensor() {
        let pt = Arc::new(Coalgebra::singleton());
        let n = Comodule::trivial(2);
        let p = Comodule::graded(Arc::new(pt.opposite()), &[0, 0, 0]).unwrap();
        assert_eq!(cotensor(&n, &p).unwrap().cols(), 6);
    }

    #[test]
    fn pullback_of_a_grading() {
        let s = set(&["a", "b", "c"]);
        let t = set(&["x", "y"]);
        let f = CoalgebraMap::from_set_map(s.clone(), t.clone(), &[0, 0, 1]).unwrap();
        // N_x = 2, N_y = 1
        let n = Comodule::graded(t, &[0, 0, 1]).unwrap();
        let co = coinduce(&f, &n).unwrap();
        assert!(co.comodule.validate().is_valid());
        // (f*N)_s = N_{f(s)}: dims 2, 2, 1
        assert_eq!(co.comodule.dim(), 5);
        let mut per_grade = [0usize; 3];
        for (row, _, _) in co.comodule.coaction().entries() {
            per_grade[row % 3] += 1;
        }
        assert_eq!(per_grade, [2, 2, 1]);
    }

    #[test]
    fn adjunction_instances() {
        let s = set(&["a", "b"]);
        let t = set(&["x"]);
        let f = CoalgebraMap::from_set_map(s.clone(), t.clone(), &[0, 0]).unwrap();
        let m = Comodule::graded(s.clone(), &[0, 1]).unwrap();
        let n = Comodule::graded(t, &[0]).unwrap();
        let r = adjunction_check(&f, &m, &n).unwrap();
        assert!(r.holds(), "{r:?}");
        // Hom(k_a ⊕ k_b -> k_x) is 2-dimensional
        assert_eq!(r.hom_corestricted, 2);

        let omega = Arc::new(Coalgebra::omega());
        let collapse = CoalgebraMap::counit_collapse(omega.clone());
        let r = adjunction_check(&collapse, &Comodule::regular(omega), &Comodule::trivial(1)).unwrap();
        assert!(r.holds(), "{r:?}");

        let c = Arc::new(Coalgebra::comatrix(2));
        let id = CoalgebraMap::identity(c.clone());
        let reg = Comodule::regular(c);
        let r = adjunction_check(&id, &reg, &reg).unwrap();
        assert!(r.holds(), "{r:?}");
        assert_eq!(r.hom_corestricted, 4);
    }

    #[test]
    fn file_round_trip() {
        let m = Comodule::regular(Arc::new(Coalgebra::comatrix(2)));
        let file = ComoduleFile::from_comodule(&m);
        let text = serde_json::to_string(&file).unwrap();
        let back: ComoduleFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.into_comodule(m.coalgebra().clone()).unwrap(), m);
    }
}
