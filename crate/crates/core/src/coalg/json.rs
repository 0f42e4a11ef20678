use serde::{Deserialize, Serialize};

use super::{CoalgError, Coalgebra};
use crate::exact::{Scalar, Tensor3};

/// A basis reference in a file: either a position or a label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BasisRef {
    Index(usize),
    Label(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarPair {
    pub from: String,
    pub to: String,
}

/// On-disk coalgebra description.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoalgebraFile {
    pub name: String,
    pub basis: Vec<String>,
    pub delta: Vec<(BasisRef, BasisRef, BasisRef, Scalar)>,
    pub eps: Vec<Scalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub star: Option<Vec<StarPair>>,
}

impl CoalgebraFile {
    pub fn into_coalgebra(self) -> Result<Coalgebra, CoalgError> {
        let n = self.basis.len();
        let resolve = |r: &BasisRef| -> Result<usize, CoalgError> {
            match r {
                BasisRef::Index(i) if *i < n => Ok(*i),
                BasisRef::Index(i) => Err(CoalgError::UnknownLabel(i.to_string())),
                BasisRef::Label(l) => self
                    .basis
                    .iter()
                    .position(|b| b == l)
                    .ok_or_else(|| CoalgError::UnknownLabel(l.clone())),
            }
        };
        let mut delta = Tensor3::zeros([n, n, n]);
        for (k, i, j, x) in &self.delta {
            delta.add_at(resolve(k)?, resolve(i)?, resolve(j)?, x)?;
        }
        let star = match &self.star {
            None => None,
            Some(pairs) => {
                let mut perm = vec![usize::MAX; n];
                for p in pairs {
                    let from = resolve(&BasisRef::Label(p.from.clone()))?;
                    let to = resolve(&BasisRef::Label(p.to.clone()))?;
                    perm[from] = to;
                }
                Some(perm)
            }
        };
        Coalgebra::new(self.name, self.basis, delta, self.eps, star)
    }

    pub fn from_coalgebra(c: &Coalgebra) -> Self {
        CoalgebraFile {
            name: c.name().to_string(),
            basis: c.basis().to_vec(),
            delta: c
                .delta()
                .iter()
                .map(|((k, i, j), x)| {
                    (BasisRef::Index(k), BasisRef::Index(i), BasisRef::Index(j), x.clone())
                })
                .collect(),
            eps: c.eps().to_vec(),
            star: c.star().map(|s| {
                s.iter()
                    .enumerate()
                    .map(|(from, &to)| StarPair {
                        from: c.label(from).to_string(),
                        to: c.label(to).to_string(),
                    })
                    .collect()
            }),
        }
    }
}

impl Coalgebra {
    pub fn from_json(text: &str) -> Result<Self, CoalgError> {
        let file: CoalgebraFile =
            serde_json::from_str(text).map_err(|e| CoalgError::Invalid(e.to_string()))?;
        file.into_coalgebra()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&CoalgebraFile::from_coalgebra(self))
            .expect("coalgebra files always serialize")
    }
}
