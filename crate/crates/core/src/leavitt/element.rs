use std::collections::BTreeMap;
use std::fmt;

use super::{Leavitt, LeavittError, Letter};
use crate::exact::Scalar;

/// `p^α (p^β)*` meeting at `vertex`; a bare vertex when both paths are empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LpaMonomial {
    pub alpha: Vec<usize>,
    pub beta: Vec<usize>,
    pub vertex: usize,
}

impl LpaMonomial {
    pub fn vertex(v: usize) -> Self {
        LpaMonomial {
            alpha: Vec::new(),
            beta: Vec::new(),
            vertex: v,
        }
    }

    /// Reads a word with no applicable rewrite: edges followed by ghost edges, or a single vertex.
    pub(super) fn from_irreducible(alg: &Leavitt, word: &[Letter]) -> Self {
        if let [Letter::Vertex(v)] = word {
            return LpaMonomial::vertex(*v);
        }
        let mut alpha = Vec::new();
        let mut ghosts = Vec::new();
        for &l in word {
            match l {
                Letter::Edge(e) => {
                    debug_assert!(ghosts.is_empty(), "edge after ghost is reducible");
                    alpha.push(e);
                }
                Letter::Ghost(e) => ghosts.push(e),
                Letter::Vertex(_) => unreachable!("vertex next to a letter is reducible"),
            }
        }
        let vertex = match (alpha.last(), ghosts.first()) {
            (Some(&e), _) | (None, Some(&e)) => alg.s(e),
            (None, None) => unreachable!("words are nonempty"),
        };
        ghosts.reverse();
        LpaMonomial {
            alpha,
            beta: ghosts,
            vertex,
        }
    }

    pub fn word(&self) -> Vec<Letter> {
        if self.alpha.is_empty() && self.beta.is_empty() {
            return vec![Letter::Vertex(self.vertex)];
        }
        let mut w: Vec<Letter> = self.alpha.iter().map(|&e| Letter::Edge(e)).collect();
        w.extend(self.beta.iter().rev().map(|&e| Letter::Ghost(e)));
        w
    }

    /// Vertex at the free end of `α`: `t` of its first edge, or the meeting vertex.
    pub fn left_vertex(&self, alg: &Leavitt) -> usize {
        self.alpha.first().map_or(self.vertex, |&e| alg.t(e))
    }

    /// Vertex at the free end of `β`.
    pub fn right_vertex(&self, alg: &Leavitt) -> usize {
        self.beta.first().map_or(self.vertex, |&e| alg.t(e))
    }

    fn path(&self, alg: &Leavitt, p: &[usize]) -> String {
        if p.is_empty() {
            format!("v({})", alg.vertex_label(self.vertex))
        } else {
            p.iter().map(|&e| alg.edge_label(e)).collect::<Vec<_>>().join(".")
        }
    }

    pub fn render(&self, alg: &Leavitt) -> String {
        format!("{} ; {}*", self.path(alg, &self.alpha), self.path(alg, &self.beta))
    }
}

/// A finite linear combination of normal-form monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpaElement {
    alg: Leavitt,
    terms: BTreeMap<LpaMonomial, Scalar>,
}

impl LpaElement {
    pub fn zero(alg: &Leavitt) -> Self {
        LpaElement {
            alg: alg.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub(super) fn from_terms(alg: &Leavitt, mut terms: BTreeMap<LpaMonomial, Scalar>) -> Self {
        terms.retain(|_, c| !c.is_zero());
        LpaElement {
            alg: alg.clone(),
            terms,
        }
    }

    pub fn monomial(alg: &Leavitt, m: LpaMonomial) -> Self {
        LpaElement::from_terms(alg, BTreeMap::from([(m, Scalar::one())]))
    }

    pub fn algebra(&self) -> &Leavitt {
        &self.alg
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LpaMonomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &LpaMonomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &LpaElement) -> LpaElement {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            *terms.entry(m.clone()).or_insert_with(Scalar::zero) += c;
        }
        LpaElement::from_terms(&self.alg, terms)
    }

    pub fn scale(&self, s: &Scalar) -> LpaElement {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect();
        LpaElement::from_terms(&self.alg, terms)
    }

    pub fn sub(&self, other: &LpaElement) -> LpaElement {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn try_mul(&self, other: &LpaElement) -> Result<LpaElement, LeavittError> {
        if self.alg != other.alg {
            return Err(LeavittError::AlgebraMismatch);
        }
        let mut out = LpaElement::zero(&self.alg);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out = out.add(&self.alg.mul_monomials(a, b).scale(&(x * y)));
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &LpaElement) -> LpaElement {
        self.try_mul(other).expect("same algebra")
    }

    /// Parses the text form produced by `Display`; input need not be in normal form.
    pub fn parse(alg: &Leavitt, text: &str) -> Result<Self, LeavittError> {
        let bad = |reason: &str| LeavittError::Parse {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        let text = text.trim();
        if text == "0" {
            return Ok(LpaElement::zero(alg));
        }
        let mut out = LpaElement::zero(alg);
        for term in split_terms(text) {
            let term = term.trim();
            let (coef, mono) = match term.split_once(" * ") {
                Some((c, m)) => {
                    let c = c.trim();
                    let c = c.strip_prefix('(').and_then(|c| c.strip_suffix(')')).unwrap_or(c);
                    (c.parse::<Scalar>().map_err(|_| bad("bad coefficient"))?, m)
                }
                None => (Scalar::one(), term),
            };
            let (alpha, beta) = mono.split_once(" ; ").ok_or_else(|| bad("expected `alpha ; beta*`"))?;
            let beta = beta.trim().strip_suffix('*').ok_or_else(|| bad("beta must end with `*`"))?;
            let mut word = parse_path(alg, alpha.trim(), Letter::Edge)?;
            let mut ghosts = parse_path(alg, beta, Letter::Ghost)?;
            ghosts.reverse();
            word.extend(ghosts);
            out = out.add(&alg.normalize(&word).scale(&coef));
        }
        Ok(out)
    }
}

fn parse_path(alg: &Leavitt, p: &str, make: fn(usize) -> Letter) -> Result<Vec<Letter>, LeavittError> {
    if let Some(v) = p.strip_prefix("v(").and_then(|r| r.strip_suffix(')')) {
        return Ok(vec![Letter::Vertex(alg.vertex_index(v)?)]);
    }
    p.split('.').map(|e| Ok(make(alg.edge_index(e.trim())?))).collect()
}

/// Splits on ` + ` outside parentheses.
fn split_terms(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b' ' if depth == 0 && text[i..].starts_with(" + ") => {
                out.push(&text[start..i]);
                i += 3;
                start = i;
                continue;
            }
            _ => {}
        }
        i += 1;
    }
    out.push(&text[start..]);
    out
}

impl fmt::Display for LpaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut rendered: Vec<(String, &Scalar)> =
            self.terms.iter().map(|(m, c)| (m.render(&self.alg), c)).collect();
        rendered.sort();
        let parts: Vec<String> = rendered
            .into_iter()
            .map(|(m, c)| {
                if c.is_real() {
                    format!("{c} * {m}")
                } else {
                    format!("({c}) * {m}")
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}
