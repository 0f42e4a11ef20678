//! Propositions (idempotent functionals), their partial Boolean operations,
//! states, expectations and positivity.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::coalg::{Coalgebra, Element};
use crate::elements::CoalgebraMap;
use crate::exact::{vec_add, vec_scale, Matrix, Scalar};
use crate::partial::{self, AdmissiblePair, ConvElement, PartialError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QlogicError {
    #[error("functional is not idempotent")]
    NotIdempotent,
    #[error("state must have counit 1, found {0}")]
    NotNormalized(Scalar),
    #[error("positivity witness does not reproduce Δ(c)")]
    BadWitness,
    #[error("state carries no positivity witness")]
    NoWitness,
    #[error("coalgebra has no star structure")]
    NoStar,
    #[error("target is not the truth-value coalgebra k{{bot, top}}")]
    NotTruthValued,
    #[error("convex parameter {0} needs rational square roots of t and 1-t")]
    Unsupported(Scalar),
    #[error("convex parameter {0} is outside [0, 1]")]
    OutOfRange(Scalar),
    #[error("positivity fails: ⟨x*x⟩ = {value}, witness sum = {witness}")]
    Positivity { value: Scalar, witness: Scalar },
    #[error("weights must be nonnegative rationals on a linearized set with trivial star")]
    BadWeights,
    #[error(transparent)]
    Partial(#[from] PartialError),
}

/// A certified idempotent `x ∗ x = x` of `F(C)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Proposition {
    x: ConvElement,
}

impl Proposition {
    pub fn new(x: ConvElement) -> Result<Self, QlogicError> {
        if x.mul(&x) != x {
            return Err(QlogicError::NotIdempotent);
        }
        Ok(Proposition { x })
    }

    pub fn truth(c: Arc<Coalgebra>) -> Self {
        Proposition {
            x: ConvElement::unit(c),
        }
    }

    pub fn falsity(c: Arc<Coalgebra>) -> Self {
        Proposition {
            x: ConvElement::zero(c),
        }
    }

    pub fn functional(&self) -> &ConvElement {
        &self.x
    }

    pub fn coalgebra(&self) -> &Arc<Coalgebra> {
        self.x.coalgebra()
    }

    /// `x_⊥ = ε − x_⊤`.
    pub fn negation(&self) -> Proposition {
        Proposition {
            x: ConvElement::unit(self.coalgebra().clone()).sub(&self.x),
        }
    }

    /// `x* = x`, the condition for a probability interpretation.
    pub fn is_self_adjoint(&self) -> Result<bool, QlogicError> {
        Ok(self.x.star()? == self.x)
    }

    /// The classifying map `C -> k{bot, top}`.
    pub fn to_map(&self) -> CoalgebraMap {
        let omega = Arc::new(Coalgebra::omega());
        partial::assemble(omega, &[self.negation().x, self.x.clone()])
            .expect("an idempotent and its complement form an orthogonal family")
    }
}

fn top_index(target: &Coalgebra) -> Result<usize, QlogicError> {
    if target.dim() != 2 || !partial::is_set_like(target) {
        return Err(QlogicError::NotTruthValued);
    }
    Ok(target.index_of("top").unwrap_or(1))
}

/// The proposition `x_⊤` classified by a map into `k{bot, top}`.
pub fn truth_value_map(f: &CoalgebraMap) -> Result<Proposition, QlogicError> {
    let top = top_index(f.target())?;
    let family = partial::orthogonal_idempotent_family(f)?;
    Ok(Proposition {
        x: family[top].clone(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Connective {
    And,
    Or,
}

/// `C -> kΩ×kΩ -> k(Ω×Ω) -> kΩ` through the pairing of the two classifying maps.
fn connective(p: &Proposition, q: &Proposition, op: Connective) -> Result<Proposition, QlogicError> {
    let pair = AdmissiblePair::certify(p.to_map(), q.to_map())?;
    let paired = partial::pair(&pair)?;
    let omega = Arc::new(Coalgebra::omega());
    // (bot,bot), (bot,top), (top,bot), (top,top)
    let table = match op {
        Connective::And => [0, 0, 0, 1],
        Connective::Or => [0, 1, 1, 1],
    };
    let op_map = CoalgebraMap::from_set_map(paired.target().clone(), omega, &table)
        .expect("four basis pairs");
    let composite = op_map.compose(&paired).expect("targets agree");
    truth_value_map(&composite)
}

/// `p ∧ q`; requires the classifying maps to form an admissible pair. Equals `p ∗ q`.
pub fn prop_and(p: &Proposition, q: &Proposition) -> Result<Proposition, QlogicError> {
    connective(p, q, Connective::And)
}

/// `p ∨ q`; requires the classifying maps to form an admissible pair. Equals `p + q − p ∗ q`.
pub fn prop_or(p: &Proposition, q: &Proposition) -> Result<Proposition, QlogicError> {
    connective(p, q, Connective::Or)
}

/// An element with `ε(c) = 1`, optionally with `{c_i}` such that `Δ(c) = Σ c_i* ⊗ c_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct State {
    element: Element,
    witness: Option<Vec<Element>>,
}

impl State {
    pub fn new(element: Element) -> Result<Self, QlogicError> {
        let e = element.counit();
        if !e.is_one() {
            return Err(QlogicError::NotNormalized(e));
        }
        Ok(State {
            element,
            witness: None,
        })
    }

    /// Attaches a positivity witness after checking `Δ(c) = Σ c_i* ⊗ c_i` exactly.
    pub fn with_witness(mut self, witness: Vec<Element>) -> Result<Self, QlogicError> {
        let c = &self.element.coalgebra;
        if c.star().is_none() {
            return Err(QlogicError::NoStar);
        }
        let n = c.dim();
        let mut sum = Matrix::zeros(n, n);
        for w in &witness {
            if w.coalgebra != *c {
                return Err(QlogicError::BadWitness);
            }
            let ws = c.apply_star(&w.coords).expect("star present");
            sum = sum.add(&Matrix::column_vector(&ws).mul(&Matrix::row_vector(&w.coords)));
        }
        if sum != self.element.comultiply() {
            return Err(QlogicError::BadWitness);
        }
        self.witness = Some(witness);
        Ok(self)
    }

    pub fn element(&self) -> &Element {
        &self.element
    }

    pub fn witness(&self) -> Option<&[Element]> {
        self.witness.as_deref()
    }
}

/// `⟨x⟩_c = x(c)`.
pub fn expectation(x: &ConvElement, s: &State) -> Result<Scalar, QlogicError> {
    if **x.coalgebra() != *s.element.coalgebra {
        return Err(PartialError::CoalgebraMismatch.into());
    }
    Ok(x.eval(&s.element.coords))
}

/// Probability of a proposition in a state.
pub fn probability(p: &Proposition, s: &State) -> Result<Scalar, QlogicError> {
    expectation(p.functional(), s)
}

pub fn star_on_functionals(x: &ConvElement) -> Result<ConvElement, QlogicError> {
    x.star().map_err(|_| QlogicError::NoStar)
}

/// Returns `⟨x* ∗ x⟩_c` after checking it equals `Σ_i |x(c_i)|²` and is a nonnegative rational.
pub fn positivity_check(x: &ConvElement, s: &State) -> Result<Scalar, QlogicError> {
    let witness = s.witness().ok_or(QlogicError::NoWitness)?;
    let xs = star_on_functionals(x)?;
    let value = expectation(&xs.mul(x), s)?;
    let sum: BigRational = witness
        .iter()
        .map(|w| x.eval(&w.coords).norm_sqr())
        .fold(BigRational::zero(), |a, b| a + b);
    let witness_sum = Scalar::from_rational(sum);
    if value != witness_sum || !value.is_nonnegative_real() {
        return Err(QlogicError::Positivity {
            value,
            witness: witness_sum,
        });
    }
    Ok(value)
}

/// `(1−t) c₀ + t c₁`. When both states are witnessed the result is witnessed
/// by `√(1−t) c₀,ᵢ` and `√t c₁,ⱼ`, which requires both roots to be rational.
pub fn convex_combination(s0: &State, s1: &State, t: &Scalar) -> Result<State, QlogicError> {
    if s0.element.coalgebra != s1.element.coalgebra {
        return Err(PartialError::CoalgebraMismatch.into());
    }
    let one_minus = &Scalar::one() - t;
    if !t.is_nonnegative_real() || !one_minus.is_nonnegative_real() {
        return Err(QlogicError::OutOfRange(t.clone()));
    }
    let coords = vec_add(
        &vec_scale(&s0.element.coords, &one_minus),
        &vec_scale(&s1.element.coords, t),
    );
    let c = s0.element.coalgebra.clone();
    let state = State::new(Element::new(c.clone(), coords).expect("length"))?;
    match (s0.witness(), s1.witness()) {
        (Some(w0), Some(w1)) => {
            let (Some(r0), Some(r1)) = (one_minus.rational_sqrt(), t.rational_sqrt()) else {
                return Err(QlogicError::Unsupported(t.clone()));
            };
            let scaled = |w: &[Element], r: &Scalar| -> Vec<Element> {
                w.iter()
                    .map(|e| Element::new(c.clone(), vec_scale(&e.coords, r)).expect("length"))
                    .collect()
            };
            let mut witness = scaled(w0, &r0);
            witness.extend(scaled(w1, &r1));
            state.with_witness(witness)
        }
        _ => Ok(state),
    }
}

/// Writes `n ≥ 0` as a sum of four squares.
pub fn four_squares(n: &BigInt) -> [BigInt; 4] {
    assert!(!n.is_negative());
    let n = n.to_u64().expect("four-square search is limited to 64-bit inputs");
    let isqrt = |m: u64| -> u64 {
        let mut r = (m as f64).sqrt() as u64;
        while r * r > m {
            r -= 1;
        }
        while (r + 1) * (r + 1) <= m {
            r += 1;
        }
        r
    };
    let mut a = isqrt(n);
    loop {
        let ra = n - a * a;
        let mut b = isqrt(ra);
        loop {
            let rb = ra - b * b;
            let mut c = isqrt(rb);
            loop {
                let rc = rb - c * c;
                let d = isqrt(rc);
                if d * d == rc {
                    return [a, b, c, d].map(BigInt::from);
                }
                if c == 0 || c * c * 2 < rb {
                    break;
                }
                c -= 1;
            }
            if b == 0 {
                break;
            }
            b -= 1;
        }
        // Lagrange's theorem guarantees termination before a underflows
        a -= 1;
    }
}

/// A state on a linearized set with trivial star from nonnegative weights
/// summing to one, witnessed via four-square decompositions of the weights.
pub fn distribution_state(c: &Arc<Coalgebra>, weights: &[Scalar]) -> Result<State, QlogicError> {
    let trivial_star = c.star().is_some_and(|s| s.iter().enumerate().all(|(k, &t)| k == t));
    if !partial::is_set_like(c) || !trivial_star || weights.len() != c.dim() {
        return Err(QlogicError::BadWeights);
    }
    let mut witness = Vec::new();
    for (k, w) in weights.iter().enumerate() {
        let Some(r) = w.as_rational().filter(|r| !r.is_negative()) else {
            return Err(QlogicError::BadWeights);
        };
        if r.is_zero() {
            continue;
        }
        // p/q = pq / q², pq = a² + b² + c² + d², witnesses (a + b i)/q and (c + d i)/q
        let (p, q) = (r.numer(), r.denom());
        let [a, b, cc, d] = four_squares(&(p * q));
        for (re, im) in [(a, b), (cc, d)] {
            if re.is_zero() && im.is_zero() {
                continue;
            }
            let lam = Scalar::new(
                BigRational::new(re, q.clone()),
                BigRational::new(im, q.clone()),
            );
            let mut coords = vec![Scalar::zero(); c.dim()];
            coords[k] = lam;
            witness.push(Element::new(c.clone(), coords).expect("length"));
        }
    }
    let state = State::new(Element::new(c.clone(), weights.to_vec()).expect("length"))?;
    state.with_witness(witness)
}

/// The state `Σ ρ_bf d_bf` on `comatrix(n)` with `ρ = W* W`, witnessed by
/// `c_(m,l) = Σ_b w_lb d_mb`. `W` must have `Σ |w_lb|² = 1`.
pub fn density_state(c: &Arc<Coalgebra>, w: &Matrix) -> Result<State, QlogicError> {
    let n = w.cols();
    if c.dim() != n * n || c.star().is_none() {
        return Err(QlogicError::BadWitness);
    }
    let rho = w.conj().transpose().mul(w);
    let coords: Vec<Scalar> = (0..n * n).map(|k| rho.get(k / n, k % n)).collect();
    let state = State::new(Element::new(c.clone(), coords).expect("length"))?;
    let mut witness = Vec::new();
    for m in 0..n {
        for l in 0..w.rows() {
            let mut v = vec![Scalar::zero(); n * n];
            for b in 0..n {
                v[m * n + b] = w.get(l, b);
            }
            if v.iter().any(|x| !x.is_zero()) {
                witness.push(Element::new(c.clone(), v).expect("length"));
            }
        }
    }
    state.with_witness(witness)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(c: Coalgebra) -> Arc<Coalgebra> {
        Arc::new(c)
    }

    #[test]
    fn truth_values_of_constant_maps() {
        let c = arc(Coalgebra::comatrix(2));
        let o = arc(Coalgebra::omega());
        let eps = c.eps_matrix();
        let top = CoalgebraMap::new(c.clone(), o.clone(), Matrix::zeros(1, 4).vstack(&eps).unwrap()).unwrap();
        assert_eq!(truth_value_map(&top).unwrap(), Proposition::truth(c.clone()));
        let bot = CoalgebraMap::new(c.clone(), o, eps.vstack(&Matrix::zeros(1, 4)).unwrap()).unwrap();
        assert_eq!(truth_value_map(&bot).unwrap(), Proposition::falsity(c));
    }

    #[test]
    fn comatrix_connectives() {
        let c = arc(Coalgebra::comatrix(2));
        let e11 = Proposition::new(ConvElement::basis(c.clone(), 0)).unwrap();
        let e22 = Proposition::new(ConvElement::basis(c.clone(), 3)).unwrap();
        assert_eq!(truth_value_map(&e11.to_map()).unwrap(), e11);
        assert_eq!(prop_and(&e11, &e22).unwrap(), Proposition::falsity(c.clone()));
        assert_eq!(prop_or(&e11, &e22).unwrap(), Proposition::truth(c.clone()));
        let t = Proposition::truth(c.clone());
        assert_eq!(prop_and(&e11, &t).unwrap(), e11);

        // e11 and the projection onto (1,1)/√2 do not commute
        let half = Scalar::ratio(1, 2);
        let p = Proposition::new(ConvElement::new(c.clone(), vec![half.clone(); 4]).unwrap()).unwrap();
        assert!(matches!(
            prop_and(&e11, &p),
            Err(QlogicError::Partial(PartialError::NotAdmissible { .. }))
        ));
    }

    #[test]
    fn connectives_on_sets_are_min_and_max() {
        let c = arc(Coalgebra::linearize(&["a", "b", "c", "d"]).unwrap());
        let ind = |bits: [i64; 4]| {
            Proposition::new(ConvElement::new(c.clone(), bits.map(Scalar::from).to_vec()).unwrap()).unwrap()
        };
        let p = ind([1, 1, 0, 0]);
        let q = ind([1, 0, 1, 0]);
        assert_eq!(prop_and(&p, &q).unwrap(), ind([1, 0, 0, 0]));
        assert_eq!(prop_or(&p, &q).unwrap(), ind([1, 1, 1, 0]));
        // de Morgan in F
        assert_eq!(
            prop_or(&p, &q).unwrap().negation(),
            prop_and(&p.negation(), &q.negation()).unwrap()
        );
    }

    #[test]
    fn expectations() {
        let o = arc(Coalgebra::omega());
        let s = State::new(Element::new(o.clone(), vec![Scalar::ratio(1, 3), Scalar::ratio(2, 3)]).unwrap()).unwrap();
        let top = ConvElement::basis(o.clone(), 1);
        assert_eq!(expectation(&top, &s).unwrap(), Scalar::ratio(2, 3));
        assert_eq!(expectation(&ConvElement::unit(o.clone()), &s).unwrap(), Scalar::one());
        assert_eq!(expectation(&ConvElement::zero(o.clone()), &s).unwrap(), Scalar::zero());
        assert!(matches!(
            State::new(Element::new(o, vec![1.into(), 1.into()]).unwrap()),
            Err(QlogicError::NotNormalized(_))
        ));
    }

    #[test]
    fn four_square_decompositions() {
        for n in 0u64..300 {
            let sq = four_squares(&BigInt::from(n));
            let total: BigInt = sq.iter().map(|x| x * x).sum();
            assert_eq!(total, BigInt::from(n));
        }
    }

    #[test]
    fn witnessed_distribution_on_omega() {
        let o = arc(Coalgebra::omega());
        let s = distribution_state(&o, &[Scalar::ratio(2, 7), Scalar::ratio(5, 7)]).unwrap();
        let top = ConvElement::basis(o.clone(), 1);
        let v = positivity_check(&top, &s).unwrap();
        assert_eq!(v, Scalar::ratio(5, 7));
        assert_eq!(positivity_check(&ConvElement::unit(o.clone()), &s).unwrap(), Scalar::one());
        let plain = State::new(s.element().clone()).unwrap();
        assert_eq!(positivity_check(&top, &plain), Err(QlogicError::NoWitness));
    }

    #[test]
    fn density_states_on_comatrix() {
        let c = arc(Coalgebra::comatrix(2));
        // W = [[3/5, 4/5 i], [0, 0]] has unit norm
        let w = Matrix::from_rows(&[
            vec![Scalar::ratio(3, 5), "4/5 i".parse().unwrap()],
            vec![Scalar::zero(), Scalar::zero()],
        ]);
        let s = density_state(&c, &w).unwrap();
        let x = ConvElement::new(c.clone(), vec![1.into(), Scalar::i(), 2.into(), Scalar::ratio(-1, 2)]).unwrap();
        let v = positivity_check(&x, &s).unwrap();
        assert!(v.is_nonnegative_real());
        let e11 = Proposition::new(ConvElement::basis(c.clone(), 0)).unwrap();
        assert!(e11.is_self_adjoint().unwrap());
        assert_eq!(probability(&e11, &s).unwrap(), Scalar::ratio(9, 25));
    }

    #[test]
    fn convex_combinations() {
        let o = arc(Coalgebra::omega());
        let s0 = distribution_state(&o, &[1.into(), 0.into()]).unwrap();
        let s1 = distribution_state(&o, &[Scalar::ratio(1, 3), Scalar::ratio(2, 3)]).unwrap();
        let mix = convex_combination(&s0, &s1, &Scalar::ratio(9, 25)).unwrap();
        assert!(mix.witness().is_some());
        let top = ConvElement::basis(o.clone(), 1);
        assert_eq!(expectation(&top, &mix).unwrap(), Scalar::ratio(6, 25));
        assert_eq!(
            convex_combination(&s0, &s1, &Scalar::ratio(1, 2)),
            Err(QlogicError::Unsupported(Scalar::ratio(1, 2)))
        );
        assert!(matches!(
            convex_combination(&s0, &s1, &Scalar::from_int(2)),
            Err(QlogicError::OutOfRange(_))
        ));
    }
}
