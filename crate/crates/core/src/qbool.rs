//! Representable quantum Boolean algebras: structure maps on a coalgebra `B`,
//! exhaustive checks of the lattice, complement and weak de Morgan diagrams,
//! and the negation-uniqueness probe.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coalg::Coalgebra;
use crate::elements::CoalgebraMap;
use crate::exact::{Matrix, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QboolError {
    #[error("shape mismatch for `{0}`")]
    Shape(&'static str),
    #[error("`{0}` is not a coalgebra map")]
    NotCoalgebraMap(&'static str),
    #[error("negation is not an involution")]
    NotInvolutive,
    #[error("no negation is present: the structure has no complement")]
    NoNegation,
    #[error("tables are not a bounded distributive lattice: {0}")]
    NotALattice(String),
    #[error("negation table is not a complement: {0}")]
    NotComplement(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("lattice axioms fail; negation probe needs a lattice")]
    LatticeFails,
    #[error(transparent)]
    Coalg(#[from] crate::coalg::CoalgError),
}

/// Coalgebra `B` with `⊥, ⊤: k{pt} -> B`, `∧, ∨: B⊗B -> B` and optional `¬: B -> B^o`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QBoolStructure {
    b: Arc<Coalgebra>,
    bot: Matrix,
    top: Matrix,
    meet: Matrix,
    join: Matrix,
    neg: Option<Matrix>,
}

/// Result of one axiom diagram.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomResult {
    pub name: String,
    pub passed: bool,
    /// Basis tuple (one label per tensor factor) where the two sides first differ.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Vec<String>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub axioms: Vec<AxiomResult>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.axioms.iter().all(|a| a.passed)
    }

    pub fn get(&self, name: &str) -> Option<&AxiomResult> {
        self.axioms.iter().find(|a| a.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomResult> {
        self.axioms.iter().filter(|a| !a.passed)
    }
}

fn id(n: usize) -> Matrix {
    Matrix::identity(n)
}

/// `τ: B⊗B -> B⊗B`.
fn flip(n: usize) -> Matrix {
    let perm: Vec<usize> = (0..n * n).map(|idx| (idx % n) * n + idx / n).collect();
    Matrix::permutation(&perm)
}

impl QBoolStructure {
    /// Builds the structure after checking shapes and that every structure map
    /// is a coalgebra map (`¬` into `B^o`, and involutive).
    pub fn new(
        b: Arc<Coalgebra>,
        bot: Matrix,
        top: Matrix,
        meet: Matrix,
        join: Matrix,
        neg: Option<Matrix>,
    ) -> Result<Self, QboolError> {
        let q = QBoolStructure {
            b,
            bot,
            top,
            meet,
            join,
            neg,
        };
        q.check_structure()?;
        Ok(q)
    }

    fn check_structure(&self) -> Result<(), QboolError> {
        let n = self.b.dim();
        let pt = Arc::new(Coalgebra::singleton());
        let bb = Arc::new(self.b.tensor(&self.b));
        let maps: [(&'static str, &Matrix, &Arc<Coalgebra>); 4] = [
            ("bot", &self.bot, &pt),
            ("top", &self.top, &pt),
            ("meet", &self.meet, &bb),
            ("join", &self.join, &bb),
        ];
        for (name, m, source) in maps {
            let f = CoalgebraMap::new(source.clone(), self.b.clone(), m.clone())
                .map_err(|_| QboolError::Shape(name))?;
            if !f.is_coalgebra_map() {
                return Err(QboolError::NotCoalgebraMap(name));
            }
        }
        if let Some(neg) = &self.neg {
            check_negation(&self.b, neg)?;
        }
        debug_assert_eq!(self.meet.cols(), n * n);
        Ok(())
    }

    pub fn coalgebra(&self) -> &Arc<Coalgebra> {
        &self.b
    }

    pub fn bot(&self) -> &Matrix {
        &self.bot
    }

    pub fn top(&self) -> &Matrix {
        &self.top
    }

    pub fn meet(&self) -> &Matrix {
        &self.meet
    }

    pub fn join(&self) -> &Matrix {
        &self.join
    }

    pub fn neg(&self) -> Option<&Matrix> {
        self.neg.as_ref()
    }

    pub fn with_neg(mut self, neg: Option<Matrix>) -> Result<Self, QboolError> {
        if let Some(m) = &neg {
            check_negation(&self.b, m)?;
        }
        self.neg = neg;
        Ok(self)
    }

    pub fn with_meet(mut self, meet: Matrix) -> Result<Self, QboolError> {
        self.meet = meet;
        self.check_structure()?;
        Ok(self)
    }

    pub fn with_join(mut self, join: Matrix) -> Result<Self, QboolError> {
        self.join = join;
        self.check_structure()?;
        Ok(self)
    }

    fn compare(&self, name: &str, lhs: &Matrix, rhs: &Matrix, factors: usize) -> AxiomResult {
        let diff = lhs.sub(rhs);
        let col = (0..diff.cols()).find(|&c| diff.column_entries(c).next().is_some());
        AxiomResult {
            name: name.to_string(),
            passed: col.is_none(),
            counterexample: col.map(|c| self.decode(c, factors)),
        }
    }

    fn decode(&self, mut idx: usize, factors: usize) -> Vec<String> {
        let n = self.b.dim();
        let mut out = vec![String::new(); factors];
        for slot in out.iter_mut().rev() {
            *slot = self.b.label(idx % n).to_string();
            idx /= n;
        }
        out
    }

    /// The ten lattice diagrams, each as an exact equality of linear maps.
    pub fn check_lattice_axioms(&self) -> AxiomReport {
        let n = self.b.dim();
        let (m, j) = (&self.meet, &self.join);
        let delta = self.b.delta_matrix();
        let i1 = id(n);
        let b_eps = i1.kron(&self.b.eps_matrix());
        let dbb = delta.kron(&id(n * n));
        let shuffle = i1.kron(&flip(n)).kron(&i1);
        let mut axioms = Vec::with_capacity(10);
        for (op, name) in [(m, "meet"), (j, "join")] {
            axioms.push(self.compare(
                &format!("associativity({name})"),
                &op.mul(&i1.kron(op)),
                &op.mul(&op.kron(&i1)),
                3,
            ));
        }
        axioms.push(self.compare("identity(meet, top)", &m.mul(&i1.kron(&self.top)), &i1, 1));
        axioms.push(self.compare("identity(join, bot)", &j.mul(&i1.kron(&self.bot)), &i1, 1));
        axioms.push(self.compare("commutativity(meet)", &m.mul(&flip(n)), m, 2));
        axioms.push(self.compare("commutativity(join)", &j.mul(&flip(n)), j, 2));
        // b₁ ∧ (b₂ ∨ b') = b ε(b')
        axioms.push(self.compare(
            "absorption(meet over join)",
            &m.mul(&i1.kron(j)).mul(&delta.kron(&i1)),
            &b_eps,
            2,
        ));
        axioms.push(self.compare(
            "absorption(join over meet)",
            &j.mul(&i1.kron(m)).mul(&delta.kron(&i1)),
            &b_eps,
            2,
        ));
        // b ∨ (b' ∧ b'') = (b₁ ∨ b') ∧ (b₂ ∨ b'')
        axioms.push(self.compare(
            "distributivity(join over meet)",
            &j.mul(&i1.kron(m)),
            &m.mul(&j.kron(j)).mul(&shuffle).mul(&dbb),
            3,
        ));
        axioms.push(self.compare(
            "distributivity(meet over join)",
            &m.mul(&i1.kron(j)),
            &j.mul(&m.kron(m)).mul(&shuffle).mul(&dbb),
            3,
        ));
        AxiomReport { axioms }
    }

    /// `¬b₁ ∨ b₂ = ε(b)⊤`, `¬b₁ ∧ b₂ = ε(b)⊥` and the two forms with `¬` on `b₂`.
    pub fn check_complement(&self) -> Result<AxiomReport, QboolError> {
        let neg = self.neg.as_ref().ok_or(QboolError::NoNegation)?;
        Ok(complement_report(self, neg))
    }

    /// The four weak de Morgan identities on every basis pair `(b, b')`.
    ///
    /// The second law is checked in its classically valid form
    /// `(b₁∧b'₁) ∧ (¬b₂∨¬b'₂) = εε⊥` and `(b₁∧b'₁) ∨ (¬b₂∨¬b'₂) = εε⊤`.
    pub fn check_weak_de_morgan(&self) -> Result<AxiomReport, QboolError> {
        self.de_morgan(false)
    }

    /// The second weak de Morgan law with `⊤` and `⊥` exchanged on the right-hand
    /// sides; fails already on the two-element algebra.
    pub fn check_weak_de_morgan_swapped(&self) -> Result<AxiomReport, QboolError> {
        self.de_morgan(true)
    }

    fn de_morgan(&self, swapped: bool) -> Result<AxiomReport, QboolError> {
        let neg = self.neg.as_ref().ok_or(QboolError::NoNegation)?;
        let n = self.b.dim();
        let (m, j) = (&self.meet, &self.join);
        let delta = self.b.delta_matrix();
        let i1 = id(n);
        // b⊗b' ↦ b₁⊗b'₁⊗b₂⊗b'₂
        let spread = i1
            .kron(&flip(n))
            .kron(&i1)
            .mul(&delta.kron(&delta));
        let eps2 = self.b.eps_matrix().kron(&self.b.eps_matrix());
        let top = self.top.mul(&eps2);
        let bot = self.bot.mul(&eps2);
        let negneg = neg.kron(neg);
        let not_and = m.mul(&negneg);
        let not_or = j.mul(&negneg);
        let first_join = j.kron(&not_and);
        let first_meet = m.kron(&not_or);
        let (second_top, second_bot) = if swapped { (&top, &bot) } else { (&bot, &top) };
        let axioms = vec![
            self.compare(
                "de_morgan_1(join)",
                &j.mul(&first_join).mul(&spread),
                &top,
                2,
            ),
            self.compare(
                "de_morgan_1(meet)",
                &m.mul(&first_join).mul(&spread),
                &bot,
                2,
            ),
            self.compare(
                "de_morgan_2(meet)",
                &m.mul(&first_meet).mul(&spread),
                second_top,
                2,
            ),
            self.compare(
                "de_morgan_2(join)",
                &j.mul(&first_meet).mul(&spread),
                second_bot,
                2,
            ),
        ];
        Ok(AxiomReport { axioms })
    }

    /// Compares a candidate negation with the structure's own.
    pub fn negation_uniqueness_probe(&self, candidate: &Matrix) -> Result<ProbeVerdict, QboolError> {
        Ok(self.negation_uniqueness_sweep(std::slice::from_ref(candidate))?.remove(0))
    }

    /// [`Self::negation_uniqueness_probe`] over many candidates, checking the lattice axioms once.
    pub fn negation_uniqueness_sweep(&self, candidates: &[Matrix]) -> Result<Vec<ProbeVerdict>, QboolError> {
        if !self.check_lattice_axioms().all_pass() {
            return Err(QboolError::LatticeFails);
        }
        let neg = self.neg.as_ref().ok_or(QboolError::NoNegation)?;
        Ok(candidates.iter().map(|c| self.probe(neg, c)).collect())
    }

    fn probe(&self, neg: &Matrix, candidate: &Matrix) -> ProbeVerdict {
        if let Err(e) = check_negation(&self.b, candidate) {
            return ProbeVerdict::NotStructural(e.to_string());
        }
        let report = complement_report(self, candidate);
        if let Some(failure) = report.failures().next() {
            return ProbeVerdict::FailsComplement(failure.clone());
        }
        if candidate == neg {
            ProbeVerdict::Equal
        } else {
            ProbeVerdict::Differs
        }
    }
}

fn complement_report(q: &QBoolStructure, neg: &Matrix) -> AxiomReport {
    let n = q.b.dim();
    let delta = q.b.delta_matrix();
    let i1 = id(n);
    let eps = q.b.eps_matrix();
    let top = q.top.mul(&eps);
    let bot = q.bot.mul(&eps);
    let left = neg.kron(&i1).mul(&delta);
    let right = i1.kron(neg).mul(&delta);
    AxiomReport {
        axioms: vec![
            q.compare("complement(not b1 join b2)", &q.join.mul(&left), &top, 1),
            q.compare("complement(not b1 meet b2)", &q.meet.mul(&left), &bot, 1),
            q.compare("complement(b1 join not b2)", &q.join.mul(&right), &top, 1),
            q.compare("complement(b1 meet not b2)", &q.meet.mul(&right), &bot, 1),
        ],
    }
}

fn check_negation(b: &Arc<Coalgebra>, neg: &Matrix) -> Result<(), QboolError> {
    let op = Arc::new(b.opposite());
    let f = CoalgebraMap::new(b.clone(), op, neg.clone()).map_err(|_| QboolError::Shape("neg"))?;
    if !f.is_coalgebra_map() {
        return Err(QboolError::NotCoalgebraMap("neg"));
    }
    if neg.mul(neg) != id(b.dim()) {
        return Err(QboolError::NotInvolutive);
    }
    Ok(())
}

/// Outcome of comparing a candidate negation with the canonical one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "detail", rename_all = "snake_case")]
pub enum ProbeVerdict {
    /// The candidate is the structure's negation.
    Equal,
    /// The candidate is not an involutive coalgebra map `B -> B^o`.
    NotStructural(String),
    /// The candidate violates a complement identity: it is not a negation.
    FailsComplement(AxiomResult),
    /// A second negation satisfying every axiom; would contradict uniqueness.
    Differs,
}

/// A finite lattice given by operation tables over named elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BooleanTables {
    pub elements: Vec<String>,
    pub meet: Vec<Vec<String>>,
    pub join: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub neg: Option<Vec<String>>,
    pub bot: String,
    pub top: String,
}

/// Index form of [`BooleanTables`].
struct Tables {
    n: usize,
    meet: Vec<Vec<usize>>,
    join: Vec<Vec<usize>>,
    neg: Option<Vec<usize>>,
    bot: usize,
    top: usize,
}

impl BooleanTables {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tables serialize")
    }

    fn indexed(&self) -> Result<Tables, QboolError> {
        let n = self.elements.len();
        let find = |s: &String| {
            self.elements
                .iter()
                .position(|e| e == s)
                .ok_or_else(|| QboolError::UnknownElement(s.clone()))
        };
        let table = |t: &Vec<Vec<String>>, what: &str| -> Result<Vec<Vec<usize>>, QboolError> {
            if t.len() != n || t.iter().any(|r| r.len() != n) {
                return Err(QboolError::NotALattice(format!("{what} table is not {n}×{n}")));
            }
            t.iter().map(|r| r.iter().map(find).collect()).collect()
        };
        let neg = match &self.neg {
            None => None,
            Some(v) if v.len() == n => Some(v.iter().map(find).collect::<Result<Vec<_>, _>>()?),
            Some(_) => return Err(QboolError::NotComplement("wrong length".into())),
        };
        crate::coalg::Coalgebra::linearize(&self.elements)?;
        Ok(Tables {
            n,
            meet: table(&self.meet, "meet")?,
            join: table(&self.join, "join")?,
            neg,
            bot: find(&self.bot)?,
            top: find(&self.top)?,
        })
    }

    /// Two-element algebra on `bot`, `top`.
    pub fn two_element() -> Self {
        let mut t = BooleanTables::powerset(1);
        t.elements = vec!["bot".into(), "top".into()];
        let rename = |s: &String| if s == "{}" { "bot".to_string() } else { "top".to_string() };
        t.meet = t.meet.iter().map(|r| r.iter().map(rename).collect()).collect();
        t.join = t.join.iter().map(|r| r.iter().map(rename).collect()).collect();
        t.neg = t.neg.map(|v| v.iter().map(rename).collect());
        t.bot = "bot".into();
        t.top = "top".into();
        t
    }

    /// Subsets of `{a, b, c, ...}` (`atoms ≤ 26`) ordered by bitmask.
    pub fn powerset(atoms: usize) -> Self {
        assert!(atoms <= 26);
        let size = 1usize << atoms;
        let label = |mask: usize| {
            let names: Vec<String> = (0..atoms)
                .filter(|b| mask & (1 << b) != 0)
                .map(|b| ((b'a' + b as u8) as char).to_string())
                .collect();
            format!("{{{}}}", names.join(","))
        };
        let full = size - 1;
        BooleanTables {
            elements: (0..size).map(label).collect(),
            meet: (0..size).map(|x| (0..size).map(|y| label(x & y)).collect()).collect(),
            join: (0..size).map(|x| (0..size).map(|y| label(x | y)).collect()).collect(),
            neg: Some((0..size).map(|x| label(full ^ x)).collect()),
            bot: label(0),
            top: label(full),
        }
    }

    /// The chain `0 < 1 < ... < len-1` with min and max.
    pub fn chain(len: usize) -> Self {
        assert!(len >= 1);
        let label = |i: usize| i.to_string();
        BooleanTables {
            elements: (0..len).map(label).collect(),
            meet: (0..len).map(|x| (0..len).map(|y| label(x.min(y))).collect()).collect(),
            join: (0..len).map(|x| (0..len).map(|y| label(x.max(y))).collect()).collect(),
            neg: None,
            bot: label(0),
            top: label(len - 1),
        }
    }
}

impl Tables {
    fn lattice_failure(&self) -> Option<String> {
        let n = self.n;
        let (m, j) = (&self.meet, &self.join);
        for x in 0..n {
            if m[x][self.top] != x || j[x][self.bot] != x {
                return Some(format!("identity fails at {x}"));
            }
            for y in 0..n {
                if m[x][y] != m[y][x] || j[x][y] != j[y][x] {
                    return Some(format!("commutativity fails at ({x}, {y})"));
                }
                if m[x][j[x][y]] != x || j[x][m[x][y]] != x {
                    return Some(format!("absorption fails at ({x}, {y})"));
                }
                for z in 0..n {
                    if m[m[x][y]][z] != m[x][m[y][z]] || j[j[x][y]][z] != j[x][j[y][z]] {
                        return Some(format!("associativity fails at ({x}, {y}, {z})"));
                    }
                    if j[x][m[y][z]] != m[j[x][y]][j[x][z]] || m[x][j[y][z]] != j[m[x][y]][m[x][z]] {
                        return Some(format!("distributivity fails at ({x}, {y}, {z})"));
                    }
                }
            }
        }
        None
    }

    fn is_complement(&self, neg: &[usize]) -> bool {
        (0..self.n).all(|x| {
            self.join[x][neg[x]] == self.top && self.meet[x][neg[x]] == self.bot && neg[neg[x]] == x
        })
    }

    /// Complements are unique in a distributive lattice; returns them if every element has one.
    fn search_complement(&self) -> Option<Vec<usize>> {
        (0..self.n)
            .map(|x| {
                (0..self.n).find(|&y| self.join[x][y] == self.top && self.meet[x][y] == self.bot)
            })
            .collect()
    }
}

fn column_map(rows: usize, images: impl Iterator<Item = usize>) -> Matrix {
    let images: Vec<usize> = images.collect();
    let mut m = Matrix::zeros(rows, images.len());
    for (c, r) in images.into_iter().enumerate() {
        m.set(r, c, Scalar::one());
    }
    m
}

/// Linear extension of a finite bounded distributive lattice. The negation is
/// the table's `neg` when given, otherwise the complement when every element has one.
pub fn linearize_boolean(t: &BooleanTables) -> Result<QBoolStructure, QboolError> {
    let tables = t.indexed()?;
    if let Some(reason) = tables.lattice_failure() {
        return Err(QboolError::NotALattice(reason));
    }
    if let Some(neg) = &tables.neg {
        if !tables.is_complement(neg) {
            return Err(QboolError::NotComplement(format!("{:?}", t.neg)));
        }
    }
    build(tables, &t.elements)
}

/// Linear extension of arbitrary tables, with no classical lattice check, so
/// that the diagrammatic axioms can report what fails.
pub fn linearize_tables(t: &BooleanTables) -> Result<QBoolStructure, QboolError> {
    build(t.indexed()?, &t.elements)
}

fn build(tables: Tables, labels: &[String]) -> Result<QBoolStructure, QboolError> {
    let neg = match &tables.neg {
        Some(neg) => Some(neg.clone()),
        None => tables.search_complement(),
    };
    let n = tables.n;
    let b = Arc::new(Coalgebra::linearize(labels)?.with_name("kB"));
    let pair_image = |tab: &Vec<Vec<usize>>| column_map(n, (0..n * n).map(|idx| tab[idx / n][idx % n]));
    QBoolStructure::new(
        b,
        column_map(n, std::iter::once(tables.bot)),
        column_map(n, std::iter::once(tables.top)),
        pair_image(&tables.meet),
        pair_image(&tables.join),
        neg.map(|v| column_map(n, v.into_iter())),
    )
}

/// All involutions of `{0..n-1}` as permutation matrices, in lexicographic order.
pub fn set_involutions(n: usize) -> Vec<Matrix> {
    fn go(perm: &mut Vec<Option<usize>>, out: &mut Vec<Vec<usize>>) {
        let Some(i) = perm.iter().position(Option::is_none) else {
            out.push(perm.iter().map(|x| x.expect("filled")).collect());
            return;
        };
        perm[i] = Some(i);
        go(perm, out);
        for j in i + 1..perm.len() {
            if perm[j].is_none() {
                perm[i] = Some(j);
                perm[j] = Some(i);
                go(perm, out);
                perm[j] = None;
            }
        }
        perm[i] = None;
    }
    let mut out = Vec::new();
    go(&mut vec![None; n], &mut out);
    out.sort();
    out.iter().map(|p| Matrix::permutation(p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_element_algebra_passes_everything() {
        let q = linearize_boolean(&BooleanTables::two_element()).unwrap();
        assert_eq!(q.coalgebra().basis(), Coalgebra::omega().basis());
        let lattice = q.check_lattice_axioms();
        assert_eq!(lattice.axioms.len(), 10);
        assert!(lattice.all_pass(), "{lattice:?}");
        assert!(q.check_complement().unwrap().all_pass());
        assert!(q.check_weak_de_morgan().unwrap().all_pass());
    }

    #[test]
    fn swapped_second_law_fails_classically() {
        let q = linearize_boolean(&BooleanTables::two_element()).unwrap();
        let r = q.check_weak_de_morgan_swapped().unwrap();
        assert!(r.get("de_morgan_1(join)").unwrap().passed);
        let bad = r.get("de_morgan_2(meet)").unwrap();
        assert!(!bad.passed);
        assert_eq!(bad.counterexample.as_deref(), Some(&["bot".to_string(), "bot".to_string()][..]));
    }

    #[test]
    fn powerset_of_two_atoms() {
        let q = linearize_boolean(&BooleanTables::powerset(2)).unwrap();
        assert!(q.check_lattice_axioms().all_pass());
        assert!(q.check_complement().unwrap().all_pass());
        assert!(q.check_weak_de_morgan().unwrap().all_pass());
    }

    #[test]
    fn meet_taking_join_value_on_a_pair_breaks_absorption() {
        let q = linearize_boolean(&BooleanTables::two_element()).unwrap();
        // meet(bot, top) := join(bot, top) = top
        let mut meet = q.meet().clone();
        meet.set(0, 1, Scalar::zero());
        meet.set(1, 1, Scalar::one());
        let mutated = q.clone().with_meet(meet).unwrap();
        let report = mutated.check_lattice_axioms();
        let abs = report.get("absorption(meet over join)").unwrap();
        assert!(!abs.passed);
        assert_eq!(abs.counterexample.as_deref(), Some(&["bot".to_string(), "top".to_string()][..]));

        // exchanging both tables on a pair gives a structure where absorption still holds
        let mut meet = q.meet().clone();
        let mut join = q.join().clone();
        meet.set(0, 1, Scalar::zero());
        meet.set(1, 1, Scalar::one());
        join.set(1, 1, Scalar::zero());
        join.set(0, 1, Scalar::one());
        let both = q.with_meet(meet).unwrap().with_join(join).unwrap();
        let report = both.check_lattice_axioms();
        assert!(report.get("absorption(meet over join)").unwrap().passed);
        assert!(!report.get("commutativity(meet)").unwrap().passed);
    }

    #[test]
    fn unchecked_tables_report_the_broken_axiom() {
        let mut t = BooleanTables::two_element();
        t.meet[0][1] = t.top.clone();
        assert!(matches!(linearize_boolean(&t), Err(QboolError::NotALattice(_))));
        let q = linearize_tables(&t).unwrap();
        let report = q.check_lattice_axioms();
        assert!(!report.get("commutativity(meet)").unwrap().passed);
        assert!(q.neg().is_some());
    }

    #[test]
    fn identity_negation_fails_complement_at_bot() {
        let q = linearize_boolean(&BooleanTables::two_element()).unwrap();
        let q = q.with_neg(Some(Matrix::identity(2))).unwrap();
        let r = q.check_complement().unwrap();
        let first = r.failures().next().unwrap();
        assert_eq!(first.counterexample.as_deref(), Some(&["bot".to_string()][..]));
    }

    #[test]
    fn chain_has_no_complement() {
        let q = linearize_boolean(&BooleanTables::chain(3)).unwrap();
        assert!(q.check_lattice_axioms().all_pass());
        assert_eq!(q.check_complement(), Err(QboolError::NoNegation));
    }

    #[test]
    fn probe_verdicts() {
        let q = linearize_boolean(&BooleanTables::two_element()).unwrap();
        let neg = q.neg().unwrap().clone();
        assert_eq!(q.negation_uniqueness_probe(&neg).unwrap(), ProbeVerdict::Equal);
        assert!(matches!(
            q.negation_uniqueness_probe(&Matrix::identity(2)).unwrap(),
            ProbeVerdict::FailsComplement(_)
        ));
        let not_inv = Matrix::from_rows(&[vec![1.into(), 1.into()], vec![0.into(), 0.into()]]);
        assert!(matches!(
            q.negation_uniqueness_probe(&not_inv).unwrap(),
            ProbeVerdict::NotStructural(_)
        ));

        let q4 = linearize_boolean(&BooleanTables::powerset(2)).unwrap();
        // complement after swapping the atoms {a} and {b}
        let swap = Matrix::permutation(&[0, 2, 1, 3]);
        let candidate = q4.neg().unwrap().mul(&swap);
        assert!(matches!(
            q4.negation_uniqueness_probe(&candidate).unwrap(),
            ProbeVerdict::FailsComplement(_)
        ));
    }

    #[test]
    fn involution_counts() {
        let counts: Vec<usize> = (0..=8).map(|n| set_involutions(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 10, 26, 76, 232, 764]);
    }

    #[test]
    fn bad_tables_rejected() {
        let mut t = BooleanTables::two_element();
        t.meet[0][1] = "top".into();
        t.meet[1][0] = "top".into();
        assert!(matches!(linearize_boolean(&t), Err(QboolError::NotALattice(_))));
        let mut t = BooleanTables::two_element();
        t.neg = Some(vec!["bot".into(), "top".into()]);
        assert!(matches!(linearize_boolean(&t), Err(QboolError::NotComplement(_))));
        let json = BooleanTables::powerset(1).to_json();
        assert_eq!(BooleanTables::from_json(&json).unwrap(), BooleanTables::powerset(1));
    }
}
