//! Acceptance sweeps. Each criterion prints one `PASS`/`FAIL` line; the binary
//! exits nonzero when any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qcomb::coalg::{Coalgebra, FiniteCategory};
use qcomb::elements::CoalgebraMap;
use qcomb::exact::Scalar;
use qcomb::leavitt::{
    cp_relation_audit, module_to_rep, rep_to_module, stable_rep_check, Leavitt, Letter, LpaElement,
    LpaMonomial, Mode, Strategy,
};
use qcomb::partial::{
    assemble, conv_mul, functionals_admissible, orthogonal_idempotent_family, pair,
    partial_assoc_check, AdmissiblePair, ConvElement,
};
use qcomb::qbool::{linearize_boolean, set_involutions, BooleanTables, ProbeVerdict};
use qcomb::qlogic::{expectation, positivity_check, probability};
use qcomb::quiver::{ClassicalQuiver, Edge, QuantumQuiver};
use qcomb::sample::Sampler;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn constructors_validate() -> Outcome {
    let mut checked = 0;
    let mut check = |c: Coalgebra| -> Result<(), String> {
        checked += 1;
        ensure(c.validate().is_valid(), || format!("{} fails validate", c.name()))
    };
    for n in 0..=8 {
        let labels: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        check(Coalgebra::linearize(&labels).map_err(|e| e.to_string())?)?;
    }
    for n in 1..=4 {
        check(Coalgebra::comatrix(n))?;
    }
    for n in 0..=6 {
        check(Coalgebra::fd_monoid_additive(n))?;
    }
    for n in 1..=3 {
        check(Coalgebra::fd_category(&FiniteCategory::pair(n)).map_err(|e| e.to_string())?)?;
    }
    check(Coalgebra::fd_category(&FiniteCategory::chain(3)).map_err(|e| e.to_string())?)?;
    Ok(format!("{checked} coalgebras valid"))
}

fn partial_monoidal() -> Outcome {
    let mut s = Sampler::new(0x5eed_0002);
    for i in 0..200 {
        let t = s.admissible_tuple(2);
        let p = AdmissiblePair::certify(t[0].clone(), t[1].clone()).map_err(|e| format!("pair {i}: {e}"))?;
        let m = pair(&p).map_err(|e| e.to_string())?;
        ensure(m.is_coalgebra_map(), || format!("pair {i}: paired map is not a coalgebra map"))?;
    }
    for i in 0..50 {
        let t = s.admissible_tuple(3);
        let r = partial_assoc_check(&t[0], &t[1], &t[2]).map_err(|e| e.to_string())?;
        ensure(r.holds() && r.maps_equal == Some(true), || format!("triple {i}: {r:?}"))?;
    }
    Ok("200 pairs, 50 triples".into())
}

fn functionals(c: &Arc<Coalgebra>, values: &[i64]) -> Vec<ConvElement> {
    let n = c.dim();
    let mut out = Vec::new();
    let total = values.len().pow(n as u32);
    for mut code in 0..total {
        let coords = (0..n)
            .map(|_| {
                let v = values[code % values.len()];
                code /= values.len();
                Scalar::from_int(v)
            })
            .collect();
        out.push(ConvElement::new(c.clone(), coords).expect("length"));
    }
    out
}

fn partial_commutative() -> Outcome {
    let mut admissible = 0usize;
    let mut total = 0usize;
    let mut sweep = |xs: &[ConvElement]| -> Result<(), String> {
        for x in xs {
            for y in xs {
                total += 1;
                if functionals_admissible(x, y).map_err(|e| e.to_string())? {
                    admissible += 1;
                    let xy = conv_mul(x, y).map_err(|e| e.to_string())?;
                    let yx = conv_mul(y, x).map_err(|e| e.to_string())?;
                    ensure(xy == yx, || format!("{x:?} and {y:?} admissible but do not commute"))?;
                }
            }
        }
        Ok(())
    };
    let comatrix = Arc::new(Coalgebra::comatrix(2));
    sweep(&functionals(&comatrix, &[-1, 0, 1]))?;
    sweep(&functionals(&Arc::new(Coalgebra::fd_monoid_additive(2)), &[-1, 0, 1, 2]))?;
    sweep(&functionals(
        &Arc::new(Coalgebra::fd_category(&FiniteCategory::pair(2)).map_err(|e| e.to_string())?),
        &[0, 1],
    ))?;
    let mut s = Sampler::new(0x5eed_0003);
    for _ in 0..100 {
        let t = s.admissible_tuple(2);
        let mut coeffs = Vec::new();
        for m in &t {
            for k in 0..m.target().dim() {
                coeffs.push(m.coefficient(k));
            }
        }
        sweep(&coeffs)?;
    }
    let e11 = ConvElement::basis(comatrix.clone(), 0);
    let e12 = ConvElement::basis(comatrix, 1);
    ensure(!functionals_admissible(&e11, &e12).map_err(|e| e.to_string())?, || {
        "e11, e12 reported admissible".into()
    })?;
    ensure(e11.mul(&e12) != e12.mul(&e11), || "e11 and e12 commute".into())?;
    Ok(format!("{admissible} of {total} pairs admissible, all commute; (e11, e12) rejected"))
}

fn idempotent_round_trip() -> Outcome {
    let mut s = Sampler::new(0x5eed_0004);
    for i in 0..100 {
        let f = s.map_to_set();
        let family = orthogonal_idempotent_family(&f).map_err(|e| e.to_string())?;
        for x in &family {
            ensure(x.mul(x) == *x, || format!("instance {i}: coefficient not idempotent"))?;
        }
        let back = assemble(f.target().clone(), &family).map_err(|e| format!("instance {i}: {e}"))?;
        ensure(back == f, || format!("instance {i}: round trip changed the map"))?;
    }
    for _ in 0..100 {
        let (p, _) = s.proposition_and_state();
        let x = p.functional();
        ensure(x.mul(x) == *x, || "proposition not idempotent".into())?;
    }
    let omega = Arc::new(Coalgebra::omega());
    let target = Arc::new(Coalgebra::linearize(&["bot", "top"]).map_err(|e| e.to_string())?);
    for image in [[0, 0], [0, 1], [1, 0], [1, 1]] {
        let f = CoalgebraMap::from_set_map(omega.clone(), target.clone(), &image).map_err(|e| e.to_string())?;
        let family = orthogonal_idempotent_family(&f).map_err(|e| e.to_string())?;
        ensure(assemble(target.clone(), &family).map_err(|e| e.to_string())? == f, || {
            "qΩ round trip failed".into()
        })?;
    }
    Ok("100 maps round trip, 100 propositions idempotent".into())
}

fn boolean_corpus() -> Vec<BooleanTables> {
    (0..=3).map(BooleanTables::powerset).collect()
}

fn quantum_boolean() -> Outcome {
    for t in boolean_corpus() {
        let q = linearize_boolean(&t).map_err(|e| e.to_string())?;
        let n = t.elements.len();
        let lattice = q.check_lattice_axioms();
        ensure(lattice.axioms.len() == 10 && lattice.all_pass(), || {
            format!("{n} elements: {:?}", lattice.failures().collect::<Vec<_>>())
        })?;
        let complement = q.check_complement().map_err(|e| e.to_string())?;
        ensure(complement.axioms.len() == 4 && complement.all_pass(), || format!("{n} elements: complement"))?;
        let dm = q.check_weak_de_morgan().map_err(|e| e.to_string())?;
        ensure(dm.axioms.len() == 4 && dm.all_pass(), || format!("{n} elements: de Morgan"))?;
    }
    let chain = linearize_boolean(&BooleanTables::chain(3)).map_err(|e| e.to_string())?;
    ensure(chain.check_lattice_axioms().all_pass(), || "3-chain lattice axioms".into())?;
    ensure(chain.neg().is_none() && chain.check_complement().is_err(), || {
        "3-chain reported a complement".into()
    })?;
    for candidate in set_involutions(3) {
        if let Ok(with) = chain.clone().with_neg(Some(candidate)) {
            ensure(!with.check_complement().map_err(|e| e.to_string())?.all_pass(), || {
                "3-chain admits a complement".into()
            })?;
        }
    }
    Ok("1, 2, 4, 8 element algebras pass; 3-chain complement-free".into())
}

fn negation_uniqueness() -> Outcome {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for t in boolean_corpus() {
        let q = linearize_boolean(&t).map_err(|e| e.to_string())?;
        let verdicts = q
            .negation_uniqueness_sweep(&set_involutions(t.elements.len()))
            .map_err(|e| e.to_string())?;
        for v in verdicts {
            let key = match v {
                ProbeVerdict::Equal => "equal",
                ProbeVerdict::NotStructural(_) => "not structural",
                ProbeVerdict::FailsComplement(_) => "fails complement",
                ProbeVerdict::Differs => return Err(format!("{} elements: a second negation", t.elements.len())),
            };
            *counts.entry(key).or_default() += 1;
        }
    }
    ensure(counts.get("equal") == Some(&4), || format!("{counts:?}"))?;
    Ok(format!("{counts:?}"))
}

fn expectation_positivity() -> Outcome {
    let mut s = Sampler::new(0x5eed_0007);
    let zero = BigRational::zero();
    let one = BigRational::one();
    for i in 0..120 {
        let (p, st) = s.proposition_and_state();
        ensure(st.witness().is_some(), || format!("instance {i}: state without witness"))?;
        let unit = ConvElement::unit(p.coalgebra().clone());
        ensure(expectation(&unit, &st).map_err(|e| e.to_string())?.is_one(), || {
            format!("instance {i}: <eps> != 1")
        })?;
        let pr = probability(&p, &st).map_err(|e| e.to_string())?;
        ensure(pr.is_real() && *pr.re() >= zero && *pr.re() <= one, || format!("instance {i}: probability {pr}"))?;
        let pos = positivity_check(p.functional(), &st).map_err(|e| e.to_string())?;
        ensure(pos.is_real() && *pos.re() >= zero, || format!("instance {i}: positivity {pos}"))?;
    }
    Ok("120 propositions and witnessed states".into())
}

fn a_n(n: usize) -> ClassicalQuiver {
    ClassicalQuiver {
        vertices: (1..=n).map(|i| format!("v{i}")).collect(),
        edges: (1..n)
            .map(|i| Edge {
                name: format!("e{i}"),
                s: format!("v{i}"),
                t: format!("v{}", i + 1),
            })
            .collect(),
    }
}

fn matrix_units(n: usize) -> Result<(), String> {
    let alg = Leavitt::new(a_n(n), Mode::Standard).map_err(|e| e.to_string())?;
    let basis = alg.closure_basis(200).ok_or("closure did not terminate")?;
    ensure(basis.len() == n * n, || format!("A{n}: {} basis elements", basis.len()))?;
    // m ↦ E_(left vertex, right vertex)
    let unit_of = |m: &LpaMonomial| (m.left_vertex(&alg), m.right_vertex(&alg));
    let index: BTreeMap<(usize, usize), &LpaMonomial> = basis.iter().map(|m| (unit_of(m), m)).collect();
    ensure(index.len() == n * n, || format!("A{n}: bijection to matrix units is not injective"))?;
    for a in &basis {
        for b in &basis {
            let (i, j) = unit_of(a);
            let (k, l) = unit_of(b);
            let expected = if j == k {
                LpaElement::monomial(&alg, index[&(i, l)].clone())
            } else {
                LpaElement::zero(&alg)
            };
            ensure(alg.mul_monomials(a, b) == expected, || {
                format!("A{n}: {} · {} breaks E_ij E_kl = δ_jk E_il", a.render(&alg), b.render(&alg))
            })?;
        }
    }
    let diag = (0..n).fold(LpaElement::zero(&alg), |acc, v| acc.add(&LpaElement::monomial(&alg, index[&(v, v)].clone())));
    ensure(diag == alg.unit(), || format!("A{n}: diagonal units do not sum to 1"))
}

fn loop_power(alg: &Leavitt, k: i64) -> LpaElement {
    let letters = if k >= 0 {
        vec![Letter::Edge(0); k as usize]
    } else {
        vec![Letter::Ghost(0); (-k) as usize]
    };
    if letters.is_empty() {
        alg.unit()
    } else {
        alg.normalize(&letters)
    }
}

fn leavitt_oracle() -> Outcome {
    for n in 1..=4 {
        matrix_units(n)?;
    }
    let alg = Leavitt::new(ClassicalQuiver::single_loop(), Mode::Standard).map_err(|e| e.to_string())?;
    for a in 0..=6i64 {
        for b in 0..=6i64 {
            let mut w = vec![Letter::Edge(0); a as usize];
            w.extend(vec![Letter::Ghost(0); b as usize]);
            let x = if w.is_empty() { alg.unit() } else { alg.normalize(&w) };
            ensure(x == loop_power(&alg, a - b), || format!("p^{a} (p*)^{b} != x^{}", a - b))?;
        }
    }
    for k in -6..=6i64 {
        for l in -6..=6i64 {
            ensure(loop_power(&alg, k).mul(&loop_power(&alg, l)) == loop_power(&alg, k + l), || {
                format!("x^{k} x^{l} != x^{}", k + l)
            })?;
        }
        ensure(loop_power(&alg, k).len() == 1, || format!("x^{k} is not a single monomial"))?;
    }
    Ok("A1..A4 are matrix units; loop exponents add".into())
}

fn confluence_corpus() -> Vec<(String, ClassicalQuiver, Mode)> {
    let mut out = vec![
        ("loop".to_string(), ClassicalQuiver::single_loop(), Mode::Standard),
        ("A2".to_string(), ClassicalQuiver::a2(), Mode::Standard),
        ("A3".to_string(), a_n(3), Mode::Standard),
        ("rose2".to_string(), ClassicalQuiver::rose(2), Mode::Standard),
        ("rose3".to_string(), ClassicalQuiver::rose(3), Mode::Standard),
    ];
    let mut mixed = a_n(2);
    mixed.edges.push(Edge {
        name: "f".into(),
        s: "v1".into(),
        t: "v2".into(),
    });
    mixed.edges.push(Edge {
        name: "g".into(),
        s: "v2".into(),
        t: "v2".into(),
    });
    out.push(("parallel-with-loop".into(), mixed.clone(), Mode::Standard));
    out.push(("parallel-with-loop".into(), mixed, Mode::Absolute));
    out.push(("A3".into(), a_n(3), Mode::Absolute));
    out
}

fn rewriting_confluence() -> Outcome {
    let strategies = [
        Strategy::Leftmost,
        Strategy::Rightmost,
        Strategy::Random(11),
        Strategy::Random(12),
        Strategy::Random(13),
    ];
    let mut s = Sampler::new(0x5eed_0009);
    let corpus = confluence_corpus();
    let mut nonzero = 0;
    for (name, q, mode) in &corpus {
        let alg = Leavitt::new(q.clone(), *mode).map_err(|e| e.to_string())?;
        for _ in 0..500 {
            let w = s.word(&alg, 10);
            let reference = alg.normalize_with(&w, strategies[0]);
            if !reference.is_zero() {
                nonzero += 1;
            }
            for st in &strategies[1..] {
                ensure(alg.normalize_with(&w, *st) == reference, || {
                    format!("{name} ({mode}): {} differs under {st:?}", alg.word_label(&w))
                })?;
            }
        }
    }
    Ok(format!("{} quivers × 500 words, {nonzero} nonzero normal forms", corpus.len()))
}

fn stable_module_equivalence() -> Outcome {
    let mut s = Sampler::new(0x5eed_000a);
    let mut count = 0;
    for q in [ClassicalQuiver::single_loop(), ClassicalQuiver::a2()] {
        let alg = Leavitt::new(q, Mode::Standard).map_err(|e| e.to_string())?;
        let audit = cp_relation_audit(&alg);
        for _ in 0..30 {
            let r = s.stable_rep(&alg).ok_or("no stable representation sampled")?;
            ensure(stable_rep_check(&r).passes(), || "sampled representation is not stable".into())?;
            let m = rep_to_module(&r).map_err(|e| e.to_string())?;
            for rel in &audit.relations {
                ensure(m.satisfies(rel), || format!("module violates {}", rel.text))?;
            }
            let back = module_to_rep(&m).map_err(|e| e.to_string())?;
            ensure(back == r, || "module_to_rep ∘ rep_to_module is not the identity".into())?;
            ensure(rep_to_module(&back).map_err(|e| e.to_string())? == m, || {
                "rep_to_module ∘ module_to_rep is not the identity".into()
            })?;
            count += 1;
        }
    }
    Ok(format!("{count} representations round trip, all relations hold"))
}

fn random_quiver(rng: &mut ChaCha8Rng) -> ClassicalQuiver {
    let nv = rng.gen_range(1..=5);
    let ne = rng.gen_range(0..=8);
    let v = |i: usize| format!("v{i}");
    ClassicalQuiver {
        vertices: (0..nv).map(v).collect(),
        edges: (0..ne)
            .map(|i| Edge {
                name: format!("e{i}"),
                s: v(rng.gen_range(0..nv)),
                t: v(rng.gen_range(0..nv)),
            })
            .collect(),
    }
}

fn quiver_compatibility() -> Outcome {
    let mut corpus = vec![ClassicalQuiver::default(), ClassicalQuiver::single_loop(), ClassicalQuiver::a2()];
    corpus.extend((1..=5).map(a_n));
    corpus.extend((1..=8).map(ClassicalQuiver::rose));
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_000b);
    corpus.extend((0..200).map(|_| random_quiver(&mut rng)));
    let mut shapes = BTreeSet::new();
    for q in &corpus {
        let qq = QuantumQuiver::from_classical(q).map_err(|e| e.to_string())?;
        let r = qq.check(false).map_err(|e| e.to_string())?;
        ensure(r.holds, || format!("{} fails at {:?}", q.to_json(), r.offending_labels))?;
        shapes.insert((q.vertices.len(), q.edges.len()));
    }
    let c = Arc::new(Coalgebra::comatrix(2));
    let transpose = CoalgebraMap::from_set_map(c.clone(), Arc::new(c.opposite()), &[0, 2, 1, 3]).map_err(|e| e.to_string())?;
    let qq = QuantumQuiver::new(transpose, CoalgebraMap::identity(c)).map_err(|e| e.to_string())?;
    let r = qq.check(false).map_err(|e| e.to_string())?;
    ensure(!r.holds && r.offending_labels.contains(&"d12".to_string()), || {
        format!("comatrix quiver: {:?}", r.offending_labels)
    })?;
    Ok(format!(
        "{} quivers ({} shapes) pass; comatrix quiver fails at {:?}",
        corpus.len(),
        shapes.len(),
        r.offending_labels
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("constructor validity", constructors_validate),
        ("partial monoidal structure", partial_monoidal),
        ("partial commutativity of F", partial_commutative),
        ("orthogonal idempotents and qΩ", idempotent_round_trip),
        ("quantum Boolean algebras", quantum_boolean),
        ("negation uniqueness probe", negation_uniqueness),
        ("expectation and positivity", expectation_positivity),
        ("Leavitt oracle equivalence", leavitt_oracle),
        ("rewriting confluence", rewriting_confluence),
        ("stable representations and modules", stable_module_equivalence),
        ("quiver compatibility", quiver_compatibility),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panic: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {:>2}. {name} [{secs:.2}s]: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {:>2}. {name} [{secs:.2}s]: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
