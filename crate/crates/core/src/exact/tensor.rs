use std::collections::BTreeMap;

use super::{ExactError, Matrix, Scalar};

/// Sparse three-index tensor with zero entries elided.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tensor3 {
    dims: [usize; 3],
    entries: BTreeMap<(usize, usize, usize), Scalar>,
}

impl Tensor3 {
    pub fn zeros(dims: [usize; 3]) -> Self {
        Tensor3 {
            dims,
            entries: BTreeMap::new(),
        }
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> Scalar {
        self.entries.get(&(i, j, k)).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, x: Scalar) -> Result<(), ExactError> {
        self.check(i, j, k)?;
        if x.is_zero() {
            self.entries.remove(&(i, j, k));
        } else {
            self.entries.insert((i, j, k), x);
        }
        Ok(())
    }

    pub fn add_at(&mut self, i: usize, j: usize, k: usize, x: &Scalar) -> Result<(), ExactError> {
        self.check(i, j, k)?;
        let e = self.entries.entry((i, j, k)).or_default();
        *e += x;
        if e.is_zero() {
            self.entries.remove(&(i, j, k));
        }
        Ok(())
    }

    fn check(&self, i: usize, j: usize, k: usize) -> Result<(), ExactError> {
        if i >= self.dims[0] || j >= self.dims[1] || k >= self.dims[2] {
            return Err(ExactError::IndexOutOfRange {
                index: vec![i, j, k],
                dims: self.dims.to_vec(),
            });
        }
        Ok(())
    }

    /// Nonzero entries in lexicographic index order.
    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize, usize), &Scalar)> {
        self.entries.iter().map(|(&idx, x)| (idx, x))
    }

    /// Nonzero entries with first index `i`.
    pub fn slice0(&self, i: usize) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.entries
            .range((i, 0, 0)..(i + 1, 0, 0))
            .map(|(&(_, j, k), x)| (j, k, x))
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Contract index `axis` against `v`; the two remaining indices keep their order.
    pub fn contract(&self, axis: usize, v: &[Scalar]) -> Result<Matrix, ExactError> {
        if axis > 2 {
            return Err(ExactError::AxisOutOfRange(axis));
        }
        if v.len() != self.dims[axis] {
            return Err(ExactError::LengthMismatch {
                expected: self.dims[axis],
                found: v.len(),
            });
        }
        let rest: Vec<usize> = (0..3).filter(|&a| a != axis).collect();
        let mut out = Matrix::zeros(self.dims[rest[0]], self.dims[rest[1]]);
        for (&(i, j, k), x) in &self.entries {
            let idx = [i, j, k];
            let c = &v[idx[axis]];
            if c.is_zero() {
                continue;
            }
            out.add_at(idx[rest[0]], idx[rest[1]], &(x * c));
        }
        Ok(out)
    }

    /// The `dims[1]*dims[2] x dims[0]` matrix with entry `((j, k), i) = t[i][j][k]`.
    pub fn unfold_first(&self) -> Matrix {
        let mut m = Matrix::zeros(self.dims[1] * self.dims[2], self.dims[0]);
        for (&(i, j, k), x) in &self.entries {
            m.set(j * self.dims[2] + k, i, x.clone());
        }
        m
    }

    /// Inverse of [`Tensor3::unfold_first`].
    pub fn fold_first(m: &Matrix, d1: usize, d2: usize) -> Result<Tensor3, ExactError> {
        if m.rows() != d1 * d2 {
            return Err(ExactError::LengthMismatch {
                expected: d1 * d2,
                found: m.rows(),
            });
        }
        let mut t = Tensor3::zeros([m.cols(), d1, d2]);
        for (r, i, x) in m.entries() {
            t.set(i, r / d2, r % d2, x)?;
        }
        Ok(t)
    }

    /// Swap the last two indices.
    pub fn swap_last(&self) -> Tensor3 {
        Tensor3 {
            dims: [self.dims[0], self.dims[2], self.dims[1]],
            entries: self
                .entries
                .iter()
                .map(|(&(i, j, k), x)| ((i, k, j), x.clone()))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grouplike_pair() -> Tensor3 {
        let mut t = Tensor3::zeros([2, 2, 2]);
        t.set(0, 0, 0, Scalar::one()).unwrap();
        t.set(1, 1, 1, Scalar::one()).unwrap();
        t
    }

    #[test]
    fn contract_with_basis_vector_is_a_slice() {
        let t = grouplike_pair();
        let m = t.contract(0, &[Scalar::zero(), Scalar::one()]).unwrap();
        let mut want = Matrix::zeros(2, 2);
        want.set(1, 1, Scalar::one());
        assert_eq!(m, want);
    }

    #[test]
    fn contract_with_zero_vector() {
        let t = grouplike_pair();
        let m = t.contract(1, &[Scalar::zero(), Scalar::zero()]).unwrap();
        assert!(m.is_zero());
    }

    #[test]
    fn contract_sum_of_grouplikes() {
        // a(x)a + b(x)b
        let m = grouplike_pair().contract(0, &[Scalar::one(), Scalar::one()]).unwrap();
        assert_eq!(m, Matrix::identity(2));
    }

    #[test]
    fn contract_errors() {
        let t = grouplike_pair();
        assert!(matches!(t.contract(3, &[]), Err(ExactError::AxisOutOfRange(3))));
        assert!(t.contract(0, &[Scalar::one()]).is_err());
        let mut t = t;
        assert!(t.set(2, 0, 0, Scalar::one()).is_err());
    }

    #[test]
    fn unfold_round_trip() {
        let mut t = Tensor3::zeros([2, 3, 2]);
        t.set(1, 2, 0, Scalar::ratio(1, 3)).unwrap();
        t.set(0, 1, 1, Scalar::from_int(-2)).unwrap();
        let back = Tensor3::fold_first(&t.unfold_first(), 3, 2).unwrap();
        assert_eq!(back, t);
    }
}
