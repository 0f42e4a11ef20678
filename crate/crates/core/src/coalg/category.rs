use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::CoalgError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Morphism {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

/// A small category given by its full composition table.
///
/// `composition[(m1, m2)] = m1 ∘ m2` for `source(m1) == target(m2)`. A
/// `truncated` category may leave composable pairs undefined; it stands for a
/// decomposition-closed piece of a larger category (for example the divisors
/// of `n` inside the multiplicative monoid).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteCategory {
    pub objects: Vec<String>,
    pub morphisms: Vec<Morphism>,
    pub identities: Vec<usize>,
    pub composition: BTreeMap<(usize, usize), usize>,
    #[serde(default)]
    pub truncated: bool,
}

impl FiniteCategory {
    pub fn compose(&self, m1: usize, m2: usize) -> Option<usize> {
        self.composition.get(&(m1, m2)).copied()
    }

    pub fn is_identity(&self, m: usize) -> bool {
        self.identities.contains(&m)
    }

    pub fn morphism_index(&self, name: &str) -> Option<usize> {
        self.morphisms.iter().position(|m| m.name == name)
    }

    /// Checks endpoints, identities, totality (unless truncated) and associativity.
    pub fn check(&self) -> Result<(), CoalgError> {
        let bad = |msg: String| Err(CoalgError::InvalidCategory(msg));
        let nm = self.morphisms.len();
        if self.identities.len() != self.objects.len() {
            return bad("one identity per object required".into());
        }
        for m in &self.morphisms {
            if m.source >= self.objects.len() || m.target >= self.objects.len() {
                return bad(format!("morphism {} has an unknown endpoint", m.name));
            }
        }
        let mut names: Vec<&str> = self.morphisms.iter().map(|m| m.name.as_str()).collect();
        names.sort_unstable();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return bad("duplicate morphism names".into());
        }
        for (obj, &id) in self.identities.iter().enumerate() {
            let Some(m) = self.morphisms.get(id) else {
                return bad(format!("identity index {id} out of range"));
            };
            if m.source != obj || m.target != obj {
                return bad(format!("identity {} is not an endomorphism of its object", m.name));
            }
        }
        for (&(m1, m2), &m) in &self.composition {
            if m1 >= nm || m2 >= nm || m >= nm {
                return bad("composition table index out of range".into());
            }
            let (a, b, c) = (&self.morphisms[m1], &self.morphisms[m2], &self.morphisms[m]);
            if a.source != b.target {
                return bad(format!("{} ∘ {} is not composable", a.name, b.name));
            }
            if c.source != b.source || c.target != a.target {
                return bad(format!("{} ∘ {} has wrong endpoints", a.name, b.name));
            }
        }
        for (i, m) in self.morphisms.iter().enumerate() {
            let left = self.identities[m.target];
            let right = self.identities[m.source];
            if self.compose(left, i) != Some(i) || self.compose(i, right) != Some(i) {
                return bad(format!("identity law fails at {}", m.name));
            }
        }
        if !self.truncated {
            for i in 0..nm {
                for j in 0..nm {
                    if self.morphisms[i].source == self.morphisms[j].target
                        && self.compose(i, j).is_none()
                    {
                        return bad(format!(
                            "missing composite {} ∘ {}",
                            self.morphisms[i].name, self.morphisms[j].name
                        ));
                    }
                }
            }
        }
        for a in 0..nm {
            for b in 0..nm {
                for c in 0..nm {
                    let left = self.compose(a, b).and_then(|ab| self.compose(ab, c));
                    let right = self.compose(b, c).and_then(|bc| self.compose(a, bc));
                    let composable = self.morphisms[a].source == self.morphisms[b].target
                        && self.morphisms[b].source == self.morphisms[c].target;
                    if composable && left != right {
                        return bad(format!(
                            "associativity fails at ({}, {}, {})",
                            self.morphisms[a].name, self.morphisms[b].name, self.morphisms[c].name
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Discrete category: only identities.
    pub fn discrete<S: AsRef<str>>(labels: &[S]) -> Self {
        let objects: Vec<String> = labels.iter().map(|s| s.as_ref().to_string()).collect();
        let morphisms = objects
            .iter()
            .enumerate()
            .map(|(i, o)| Morphism {
                name: o.clone(),
                source: i,
                target: i,
            })
            .collect();
        let composition = (0..objects.len()).map(|i| ((i, i), i)).collect();
        FiniteCategory {
            identities: (0..objects.len()).collect(),
            objects,
            morphisms,
            composition,
            truncated: false,
        }
    }

    /// Pair category on `{1..n}`: one arrow `d_ij: j -> i` for every pair,
    /// `d_ij ∘ d_jk = d_ik`.
    pub fn pair(n: usize) -> Self {
        let objects: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let idx = |i: usize, j: usize| i * n + j;
        let mut morphisms = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                morphisms.push(Morphism {
                    name: comatrix_label(n, i, j),
                    source: j,
                    target: i,
                });
            }
        }
        let mut composition = BTreeMap::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    composition.insert((idx(i, j), idx(j, k)), idx(i, k));
                }
            }
        }
        FiniteCategory {
            objects,
            morphisms,
            identities: (0..n).map(|i| idx(i, i)).collect(),
            composition,
            truncated: false,
        }
    }

    /// The chain `0 < 1 < ... < n-1` as a poset category; `m{i}{j}` is the arrow `i -> j`.
    pub fn chain(n: usize) -> Self {
        let objects: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let mut morphisms = Vec::new();
        let mut index = BTreeMap::new();
        for i in 0..n {
            for j in i..n {
                index.insert((i, j), morphisms.len());
                morphisms.push(Morphism {
                    name: format!("m{i}{j}"),
                    source: i,
                    target: j,
                });
            }
        }
        let mut composition = BTreeMap::new();
        for (&(j, k), &outer) in &index {
            for (&(i, j2), &inner) in &index {
                if j2 == j {
                    composition.insert((outer, inner), index[&(i, k)]);
                }
            }
        }
        FiniteCategory {
            objects,
            identities: (0..n).map(|i| index[&(i, i)]).collect(),
            morphisms,
            composition,
            truncated: false,
        }
    }

    /// One-object truncation of `(N_{>0}, ×, 1)` to `{1, ..., n}`.
    pub fn divisor_monoid(n: usize) -> Self {
        assert!(n >= 1);
        let morphisms = (1..=n)
            .map(|k| Morphism {
                name: format!("d{k}"),
                source: 0,
                target: 0,
            })
            .collect();
        let mut composition = BTreeMap::new();
        for a in 1..=n {
            for b in 1..=n {
                if a * b <= n {
                    composition.insert((a - 1, b - 1), a * b - 1);
                }
            }
        }
        FiniteCategory {
            objects: vec!["*".into()],
            morphisms,
            identities: vec![0],
            composition,
            truncated: true,
        }
    }
}

pub(crate) fn comatrix_label(n: usize, i: usize, j: usize) -> String {
    if n < 10 {
        format!("d{}{}", i + 1, j + 1)
    } else {
        format!("d{},{}", i + 1, j + 1)
    }
}
