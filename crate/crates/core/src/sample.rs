//! Seeded generators of test instances: coalgebra maps and admissible tuples,
//! propositions with witnessed states, stable representations and words.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coalg::Coalgebra;
use crate::elements::{CoalgebraMap, element};
use crate::exact::{Matrix, Scalar};
use crate::leavitt::{Leavitt, Letter, StableRep};
use crate::partial::ConvElement;
use crate::qlogic::{density_state, distribution_state, Proposition, State};

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn small_int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    fn nonzero_ratio(&mut self) -> Scalar {
        let mut n = 0;
        while n == 0 {
            n = self.small_int(-4, 4);
        }
        Scalar::ratio(n, self.small_int(1, 3))
    }

    /// `{s0, ..., s(n-1)}` with `lo ≤ n ≤ hi`.
    pub fn set(&mut self, lo: usize, hi: usize) -> Arc<Coalgebra> {
        let n = self.rng.gen_range(lo..=hi);
        let labels: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
        Arc::new(Coalgebra::linearize(&labels).expect("distinct labels"))
    }

    pub fn set_map(&mut self, source: &Arc<Coalgebra>, target: &Arc<Coalgebra>) -> CoalgebraMap {
        let image: Vec<usize> = (0..source.dim()).map(|_| self.rng.gen_range(0..target.dim())).collect();
        CoalgebraMap::from_set_map(source.clone(), target.clone(), &image).expect("in range")
    }

    /// `c ↦ ε(c) t` for a basis element `t` of a linearized set.
    pub fn point_map(&mut self, source: &Arc<Coalgebra>, target: &Arc<Coalgebra>) -> CoalgebraMap {
        let t = self.rng.gen_range(0..target.dim());
        let mut m = Matrix::zeros(target.dim(), source.dim());
        for (k, e) in source.eps().iter().enumerate() {
            m.set(t, k, e.clone());
        }
        CoalgebraMap::new(source.clone(), target.clone(), m).expect("shape")
    }

    /// `d_n ↦ λⁿ d_n` on an additive divisor coalgebra.
    pub fn scaling(&mut self, c: &Arc<Coalgebra>) -> CoalgebraMap {
        let lambda = Scalar::ratio(self.small_int(-3, 3), self.small_int(1, 2));
        let mut m = Matrix::zeros(c.dim(), c.dim());
        for k in 0..c.dim() {
            m.set(k, k, lambda.pow(k as u32));
        }
        CoalgebraMap::new(c.clone(), c.clone(), m).expect("shape")
    }

    /// A rank-one idempotent `u vᵀ` with `vᵀu = 1` in the convolution algebra of `comatrix(2)`.
    pub fn comatrix_idempotent(&mut self) -> [Scalar; 4] {
        loop {
            let (a, b) = (self.small_int(-3, 3), self.small_int(-3, 3));
            let c = self.small_int(-3, 3);
            if b == 0 {
                if a == 0 {
                    continue;
                }
                // v = (1/a, d) with d free
                let d = Scalar::from_int(self.small_int(-2, 2));
                let v0 = Scalar::ratio(1, a);
                return [&Scalar::from_int(a) * &v0, &Scalar::from_int(a) * &d, Scalar::zero(), Scalar::zero()];
            }
            // a c + b d = 1
            let d = Scalar::ratio(1 - a * c, b);
            let (a, b, c) = (Scalar::from_int(a), Scalar::from_int(b), Scalar::from_int(c));
            return [&a * &c, &a * &d, &b * &c, &b * &d];
        }
    }

    /// A coalgebra map from `comatrix(2)` onto a linearized set, sending two basis
    /// points to a complementary pair of idempotents `P`, `I - P`.
    pub fn comatrix_to_set(
        &mut self,
        c: &Arc<Coalgebra>,
        target: &Arc<Coalgebra>,
        p: &[Scalar; 4],
    ) -> CoalgebraMap {
        let ones = [Scalar::one(), Scalar::zero(), Scalar::zero(), Scalar::one()];
        let mut m = Matrix::zeros(target.dim(), 4);
        let n = target.dim();
        let (t0, t1) = if n == 1 {
            (0, 0)
        } else {
            let t0 = self.rng.gen_range(0..n);
            let mut t1 = self.rng.gen_range(0..n);
            while t1 == t0 {
                t1 = self.rng.gen_range(0..n);
            }
            (t0, t1)
        };
        for k in 0..4 {
            m.add_at(t0, k, &p[k]);
            m.add_at(t1, k, &(&ones[k] - &p[k]));
        }
        CoalgebraMap::new(c.clone(), target.clone(), m).expect("shape")
    }

    /// Two or three coalgebra maps with a common source drawn from linearized
    /// sets, `comatrix(2)` and the additive divisor coalgebra on `{0, 1, 2}`;
    /// every adjacent pair is admissible.
    pub fn admissible_tuple(&mut self, len: usize) -> Vec<CoalgebraMap> {
        match self.rng.gen_range(0..3) {
            0 => {
                let s = self.set(1, 4);
                (0..len)
                    .map(|_| {
                        let t = self.set(1, 3);
                        self.set_map(&s, &t)
                    })
                    .collect()
            }
            1 => {
                let c = Arc::new(Coalgebra::comatrix(2));
                let p = self.comatrix_idempotent();
                // identity and transpose commute only with point maps; maps built
                // from one idempotent commute with each other
                let free = self.rng.gen_range(0..len);
                let general = self.rng.gen_range(0..3);
                (0..len)
                    .map(|i| {
                        let t = self.set(1, 3);
                        match (i == free, general) {
                            (true, 0) => CoalgebraMap::identity(c.clone()),
                            (true, 1) => {
                                let op = Arc::new(c.opposite());
                                CoalgebraMap::from_set_map(c.clone(), op, &[0, 2, 1, 3]).expect("transpose")
                            }
                            (false, 0 | 1) => self.point_map(&c, &t),
                            _ if self.rng.gen_bool(0.3) => self.point_map(&c, &t),
                            _ => self.comatrix_to_set(&c, &t, &p),
                        }
                    })
                    .collect()
            }
            _ => {
                let c = Arc::new(Coalgebra::fd_monoid_additive(2));
                (0..len)
                    .map(|_| {
                        if self.rng.gen_bool(0.5) {
                            self.scaling(&c)
                        } else {
                            let t = self.set(1, 3);
                            self.point_map(&c, &t)
                        }
                    })
                    .collect()
            }
        }
    }

    /// A coalgebra map into a linearized set, for idempotent-family round trips.
    pub fn map_to_set(&mut self) -> CoalgebraMap {
        let target = self.set(1, 4);
        match self.rng.gen_range(0..4) {
            0 => {
                let s = self.set(1, 5);
                self.set_map(&s, &target)
            }
            1 => {
                let c = Arc::new(Coalgebra::comatrix(2));
                let p = self.comatrix_idempotent();
                self.comatrix_to_set(&c, &target, &p)
            }
            2 => {
                let c = Arc::new(Coalgebra::fd_monoid_additive(self.rng.gen_range(1..=4)));
                self.point_map(&c, &target)
            }
            _ => {
                let c = Arc::new(Coalgebra::omega());
                self.set_map(&c, &target)
            }
        }
    }

    /// A self-adjoint proposition and a state with a positivity witness on the same coalgebra.
    pub fn proposition_and_state(&mut self) -> (Proposition, State) {
        if self.rng.gen_bool(0.5) {
            let c = self.set(2, 5);
            let n = c.dim();
            let bits: Vec<Scalar> = (0..n).map(|_| Scalar::from_int(self.rng.gen_range(0..2))).collect();
            let p = Proposition::new(ConvElement::new(c.clone(), bits).expect("length")).expect("indicator");
            let raw: Vec<i64> = (0..n).map(|_| self.small_int(0, 6)).collect();
            let total: i64 = raw.iter().sum::<i64>().max(1);
            let mut weights: Vec<Scalar> = raw.iter().map(|&w| Scalar::ratio(w, total)).collect();
            if raw.iter().all(|&w| w == 0) {
                weights[0] = Scalar::one();
            }
            let s = distribution_state(&c, &weights).expect("weights sum to one");
            (p, s)
        } else {
            let c = Arc::new(Coalgebra::comatrix(2));
            let p = self.projection();
            let p = Proposition::new(ConvElement::new(c.clone(), p.to_vec()).expect("length"))
                .expect("projection is idempotent");
            let w = self.unit_norm_matrix();
            (p, density_state(&c, &w).expect("unit trace"))
        }
    }

    /// `v v† / v†v` for a Gaussian-integer vector `v`, listed as `P11, P12, P21, P22`.
    pub fn projection(&mut self) -> [Scalar; 4] {
        let mut v = [Scalar::zero(), Scalar::zero()];
        while v.iter().all(Scalar::is_zero) {
            for x in &mut v {
                *x = Scalar::new(
                    Scalar::from_int(self.small_int(-2, 2)).re().clone(),
                    Scalar::from_int(self.small_int(-2, 2)).re().clone(),
                );
            }
        }
        let norm = Scalar::from_rational(v[0].norm_sqr() + v[1].norm_sqr());
        let inv = norm.inv().expect("nonzero");
        let entry = |i: usize, j: usize| &(&v[i] * &v[j].conj()) * &inv;
        [entry(0, 0), entry(0, 1), entry(1, 0), entry(1, 1)]
    }

    /// A `k × 2` Gaussian-rational matrix with `Σ |w|² = 1`.
    pub fn unit_norm_matrix(&mut self) -> Matrix {
        let row = |s: &mut Self| -> [Scalar; 2] {
            loop {
                let (m, n, p, q) = (s.small_int(-3, 3), s.small_int(-3, 3), s.small_int(-3, 3), s.small_int(-3, 3));
                let total = m * m + n * n + p * p + q * q;
                if total == 0 {
                    continue;
                }
                let a = m * m + n * n - p * p - q * q;
                let b = 2 * (m * q + n * p);
                let c = 2 * (n * q - m * p);
                let first = Scalar::gaussian(Scalar::ratio(a, total), Scalar::ratio(b, total));
                return [first, Scalar::ratio(c, total)];
            }
        };
        let triples = [(3, 4, 5), (5, 12, 13), (8, 15, 17)];
        if self.rng.gen_bool(0.5) {
            Matrix::from_rows(&[row(self).to_vec()])
        } else {
            let &(x, y, z) = triples.choose(&mut self.rng).expect("nonempty");
            let r0: Vec<Scalar> = row(self).iter().map(|e| e * &Scalar::ratio(x, z)).collect();
            let r1: Vec<Scalar> = row(self).iter().map(|e| e * &Scalar::ratio(y, z)).collect();
            Matrix::from_rows(&[r0, r1])
        }
    }

    /// An invertible `n × n` matrix with small rational entries and its inverse.
    pub fn invertible(&mut self, n: usize) -> (Matrix, Matrix) {
        let mut m = Matrix::identity(n);
        for i in 0..n {
            let s = self.nonzero_ratio();
            m = Matrix::identity(n).add(&Matrix::from_entries(n, n, vec![(i, i, &s - &Scalar::one())]).expect("in range")).mul(&m);
        }
        for _ in 0..2 * n {
            let i = self.rng.gen_range(0..n);
            let j = self.rng.gen_range(0..n);
            if i != j {
                let c = Scalar::from_int(self.small_int(-2, 2));
                let e = Matrix::identity(n).add(&Matrix::from_entries(n, n, vec![(i, j, c)]).expect("in range"));
                m = e.mul(&m);
            }
        }
        let inv = m.inverse().expect("product of elementary matrices");
        (m, inv)
    }

    /// A stable representation of a quiver in which every vertex has at most one
    /// incoming edge: `ω_v` is a random isomorphism and `σ_v` its inverse.
    pub fn stable_rep(&mut self, alg: &Leavitt) -> Option<StableRep> {
        let nv = alg.num_vertices();
        if (0..nv).any(|v| alg.incoming(v).len() > 1) {
            return None;
        }
        let mut dims: Vec<Option<usize>> = vec![None; nv];
        for v in 0..nv {
            if alg.is_dead_vertex(v) {
                dims[v] = Some(0);
            }
        }
        for start in 0..nv {
            // walk back along incoming edges to a vertex with known dimension, a source, or a cycle
            let mut chain = vec![start];
            let mut v = start;
            let d = loop {
                if let Some(d) = dims[v] {
                    break d;
                }
                match alg.incoming(v).first() {
                    Some(&e) if !chain.contains(&alg.s(e)) => {
                        v = alg.s(e);
                        chain.push(v);
                    }
                    _ => break self.rng.gen_range(1..=3),
                }
            };
            for u in chain {
                dims[u].get_or_insert(d);
            }
        }
        let dims: Vec<usize> = dims.into_iter().map(|d| d.expect("assigned")).collect();
        let mut omega = Vec::with_capacity(nv);
        let mut sigma = Vec::with_capacity(nv);
        for (v, &d) in dims.iter().enumerate() {
            if alg.incoming(v).is_empty() {
                omega.push(Matrix::zeros(0, d));
                sigma.push(Matrix::zeros(d, 0));
            } else {
                let (w, s) = self.invertible(d);
                omega.push(w);
                sigma.push(s);
            }
        }
        StableRep::new(alg, dims, omega, sigma).ok()
    }

    /// A word of length `1..=max_len` that mostly follows composable letters.
    pub fn word(&mut self, alg: &Leavitt, max_len: usize) -> Vec<Letter> {
        let gens = alg.generators();
        let len = self.rng.gen_range(1..=max_len);
        let mut w = vec![*gens.choose(&mut self.rng).expect("generators")];
        while w.len() < len {
            let right = alg.letter_vertices(*w.last().expect("nonempty")).1;
            let next: Vec<Letter> = gens.iter().copied().filter(|&l| alg.letter_vertices(l).0 == right).collect();
            let l = if !next.is_empty() && self.rng.gen_bool(0.9) {
                *next.choose(&mut self.rng).expect("nonempty")
            } else {
                *gens.choose(&mut self.rng).expect("generators")
            };
            w.push(l);
        }
        w
    }

    /// A random element of `C` with small integer coordinates.
    pub fn element(&mut self, c: &Arc<Coalgebra>) -> crate::coalg::Element {
        let coords = (0..c.dim()).map(|_| Scalar::from_int(self.small_int(-3, 3))).collect();
        element(c, coords).expect("length")
    }
}
