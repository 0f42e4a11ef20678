use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{Leavitt, Letter, LpaElement, LpaMonomial};
use crate::exact::Scalar;

/// Which redex to contract next.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Strategy {
    Leftmost,
    Rightmost,
    /// Uniformly random redex, reproducible from the seed.
    Random(u64),
}

#[derive(Clone, Copy, Debug)]
struct Redex {
    pos: usize,
    len: usize,
}

type Replacement = Vec<(Scalar, Vec<Letter>)>;

fn rewrite_pair(alg: &Leavitt, a: Letter, b: Letter) -> Option<Replacement> {
    if alg.letter_vertices(a).1 != alg.letter_vertices(b).0 {
        return Some(Vec::new());
    }
    match (a, b) {
        (Letter::Vertex(_), other) | (other, Letter::Vertex(_)) => {
            Some(vec![(Scalar::one(), vec![other])])
        }
        (Letter::Ghost(e), Letter::Edge(f)) => {
            if e == f {
                Some(vec![(Scalar::one(), vec![Letter::Vertex(alg.s(e))])])
            } else {
                Some(Vec::new())
            }
        }
        (Letter::Edge(e), Letter::Ghost(f)) if e == f && alg.special_edge(alg.t(e)) == Some(e) => {
            let v = alg.t(e);
            let mut out = vec![(Scalar::one(), vec![Letter::Vertex(v)])];
            for &g in alg.incoming(v) {
                if g != e && !alg.is_dead_edge(g) {
                    out.push((Scalar::from_int(-1), vec![Letter::Edge(g), Letter::Ghost(g)]));
                }
            }
            Some(out)
        }
        _ => None,
    }
}

fn is_dead(alg: &Leavitt, l: Letter) -> bool {
    match l {
        Letter::Vertex(v) => alg.is_dead_vertex(v),
        Letter::Edge(e) | Letter::Ghost(e) => alg.is_dead_edge(e),
    }
}

fn redexes(alg: &Leavitt, word: &[Letter]) -> Vec<Redex> {
    let mut out = Vec::new();
    for (pos, &l) in word.iter().enumerate() {
        if is_dead(alg, l) {
            out.push(Redex { pos, len: 1 });
        }
        if pos + 1 < word.len() && rewrite_pair(alg, l, word[pos + 1]).is_some() {
            out.push(Redex { pos, len: 2 });
        }
    }
    out
}

fn contract(alg: &Leavitt, word: &[Letter], r: Redex) -> Replacement {
    let middle = if r.len == 1 {
        Vec::new()
    } else {
        rewrite_pair(alg, word[r.pos], word[r.pos + 1]).expect("redex")
    };
    middle
        .into_iter()
        .map(|(c, mid)| {
            let mut w = word[..r.pos].to_vec();
            w.extend(mid);
            w.extend_from_slice(&word[r.pos + r.len..]);
            (c, w)
        })
        .collect()
}

pub(super) fn normalize(alg: &Leavitt, word: &[Letter], strategy: Strategy) -> LpaElement {
    let mut rng = match strategy {
        Strategy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    let mut work: Vec<(Scalar, Vec<Letter>)> = vec![(Scalar::one(), word.to_vec())];
    let mut done: BTreeMap<LpaMonomial, Scalar> = BTreeMap::new();
    while let Some((c, w)) = work.pop() {
        let rs = redexes(alg, &w);
        let chosen = match (strategy, rs.is_empty()) {
            (_, true) => {
                let m = LpaMonomial::from_irreducible(alg, &w);
                let slot = done.entry(m).or_insert_with(Scalar::zero);
                *slot += &c;
                continue;
            }
            (Strategy::Leftmost, false) => rs[0],
            (Strategy::Rightmost, false) => rs[rs.len() - 1],
            (Strategy::Random(_), false) => {
                let rng = rng.as_mut().expect("seeded");
                rs[rng.gen_range(0..rs.len())]
            }
        };
        for (k, w2) in contract(alg, &w, chosen) {
            work.push((&c * &k, w2));
        }
    }
    LpaElement::from_terms(alg, done)
}
