use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::json;

use qcomb::coalg::{format_combination, Coalgebra, CoalgebraFile, Element};
use qcomb::elements::{grouplikes, primitives, CoalgebraMap};
use qcomb::exact::{Matrix, Scalar};
use qcomb::leavitt::{
    cp_relation_audit, module_to_rep, rep_to_module, stable_rep_check, Leavitt, LpaElement, LpaMonomial,
    StableRep, StableRepFile,
};
use qcomb::partial::{
    assemble, conv_mul, functionals_admissible, idempotent_family_failure, is_admissible,
    orthogonal_idempotent_family, pair, partial_assoc_check, AdmissiblePair,
};
use qcomb::qbool::{linearize_tables, set_involutions, AxiomReport, BooleanTables, ProbeVerdict};
use qcomb::qlogic::{expectation, positivity_check, Proposition, State};
use qcomb::quiver::{ComoduleFile, QuantumQuiver};
use qcomb::sample::Sampler;

use crate::input::{builtin, require_file, FunctionalsFile, Inputs, MapsFile, QuiverInput, StateFile};
use crate::report::Findings;
use crate::{Command, Flags};

pub fn name(c: &Command) -> String {
    let debug = format!("{c:?}");
    let head = debug.split([' ', '{']).next().unwrap_or_default();
    let mut out = String::new();
    for (i, ch) in head.chars().enumerate() {
        if ch.is_uppercase() && i > 0 {
            out.push('-');
        }
        out.push(ch.to_ascii_lowercase());
    }
    out
}

pub fn run(c: &Command, flags: &Flags, inputs: &mut Inputs) -> Result<Findings> {
    let mut f = Findings::default();
    match c {
        Command::Validate { coalgebra } => validate(&*inputs.coalgebra(coalgebra)?, &mut f),
        Command::Grouplikes { coalgebra } => {
            let c = inputs.coalgebra(coalgebra)?;
            let gs = grouplikes(&c)?;
            f.detail("count", gs.len());
            f.detail("grouplikes", gs.iter().map(render_element).collect::<Vec<_>>());
        }
        Command::Primitives { coalgebra, g, h } => {
            let c = inputs.coalgebra(coalgebra)?;
            let gs = grouplikes(&c)?;
            let pick = |i: usize| {
                gs.get(i)
                    .ok_or_else(|| anyhow!("group-like {i} requested but only {} exist", gs.len()))
            };
            let (gl, hl) = (pick(*g)?, pick(*h)?);
            let ps = primitives(gl, hl)?;
            f.detail("g", render_element(gl));
            f.detail("h", render_element(hl));
            f.detail("dimension", ps.len());
            f.detail("basis", ps.iter().map(render_element).collect::<Vec<_>>());
        }
        Command::Admissible { maps, samples } => {
            require_file(maps, flags.seed)?;
            match maps {
                Some(path) => {
                    let ms = load_maps(inputs, path, 2)?;
                    admissible_pair(&ms[0], &ms[1], &mut f)?;
                }
                None => {
                    let mut s = Sampler::new(flags.seed.expect("checked"));
                    let mut admissible = 0;
                    for i in 0..*samples {
                        let t = s.admissible_tuple(2);
                        let r = is_admissible(&t[0], &t[1])?;
                        let flipped = is_admissible(&t[1], &t[0])?;
                        if r.admissible() && flipped.admissible() {
                            admissible += 1;
                        } else {
                            f.fail(json!({"sample": i, "offending": labels_of(t[0].source(), &r.offending)}));
                        }
                    }
                    f.detail("samples", samples);
                    f.detail("admissible", admissible);
                }
            }
        }
        Command::Pair { maps, samples } => {
            require_file(maps, flags.seed)?;
            match maps {
                Some(path) => {
                    let ms = load_maps(inputs, path, 2)?;
                    pair_maps(&ms, &mut f)?;
                }
                None => {
                    let mut s = Sampler::new(flags.seed.expect("checked"));
                    for i in 0..*samples {
                        let t = s.admissible_tuple(if i % 4 == 3 { 3 } else { 2 });
                        let mut g = Findings::default();
                        pair_maps(&t, &mut g)?;
                        for c in g.counterexamples {
                            f.fail(json!({"sample": i, "failure": c}));
                        }
                    }
                    f.detail("samples", samples);
                }
            }
        }
        Command::Conv { functionals } => {
            let file: FunctionalsFile = inputs.json(functionals)?;
            conv(file, &mut f)?;
        }
        Command::Idempotents { maps, samples } => {
            require_file(maps, flags.seed)?;
            let ms = match maps {
                Some(path) => load_maps(inputs, path, 1)?,
                None => {
                    let mut s = Sampler::new(flags.seed.expect("checked"));
                    (0..*samples).map(|_| s.map_to_set()).collect()
                }
            };
            idempotents(&ms, maps.is_some(), &mut f)?;
        }
        Command::Expect { state, samples } => {
            require_file(state, flags.seed)?;
            match state {
                Some(path) => {
                    let file: StateFile = inputs.json(path)?;
                    expect_file(file, &mut f)?;
                }
                None => {
                    let mut s = Sampler::new(flags.seed.expect("checked"));
                    for i in 0..*samples {
                        let (p, st) = s.proposition_and_state();
                        let mut g = Findings::default();
                        check_state(&st, &[p.functional().clone()], &mut g)?;
                        for c in g.counterexamples {
                            f.fail(json!({"sample": i, "failure": c}));
                        }
                    }
                    f.detail("samples", samples);
                }
            }
        }
        Command::QboolCheck { tables } => {
            let t: BooleanTables = inputs.json(tables)?;
            qbool_check(&t, flags, &mut f)?;
        }
        Command::Demorgan { tables } => {
            let t: BooleanTables = inputs.json(tables)?;
            let q = linearize_tables(&t)?;
            let r = if flags.strict_paper {
                q.check_weak_de_morgan_swapped()?
            } else {
                q.check_weak_de_morgan()?
            };
            axioms("de_morgan", &r, &mut f);
        }
        Command::QuiverCheck { quiver } => {
            let q = match inputs.quiver(quiver)? {
                QuiverInput::Classical(c) => QuantumQuiver::from_classical(&c)?,
                QuiverInput::Quantum(q) => q.build()?,
            };
            let r = q.check(flags.strict_paper)?;
            f.detail("form", if flags.strict_paper { "literal" } else { "admissible" });
            f.detail("edges", q.edges().dim());
            f.detail("vertices", q.vertices().dim());
            if !r.holds {
                f.fail(json!({"offending": r.offending_labels}));
            }
        }
        Command::ComoduleCheck { coalgebra, comodule } => {
            let c = inputs.coalgebra(coalgebra)?;
            let file: ComoduleFile = inputs.json(comodule)?;
            let m = file.into_comodule(c)?;
            let r = m.validate();
            f.detail("dim", m.dim());
            f.detail("coassociative", r.coassociative);
            f.detail("counital", r.counital);
            if !r.is_valid() {
                f.fail(&r);
            }
        }
        Command::LpaNormalize { quiver, expr } => {
            let alg = inputs.leavitt(quiver, flags.mode)?;
            let x = parse_expr(&alg, expr)?;
            f.detail("mode", alg.mode());
            f.detail("input", expr);
            f.detail("normal_form", x.to_string());
            f.detail("terms", x.len());
        }
        Command::LpaMul { quiver, left, right } => {
            let alg = inputs.leavitt(quiver, flags.mode)?;
            let (x, y) = (parse_expr(&alg, left)?, parse_expr(&alg, right)?);
            f.detail("mode", alg.mode());
            f.detail("left", x.to_string());
            f.detail("right", y.to_string());
            f.detail("product", x.mul(&y).to_string());
        }
        Command::LpaTable { quiver, limit } => {
            let alg = inputs.leavitt(quiver, flags.mode)?;
            lpa_table(&alg, *limit, &mut f);
        }
        Command::StableCheck { quiver, rep } => {
            let alg = inputs.leavitt(quiver, flags.mode)?;
            let file: StableRepFile = inputs.json(rep)?;
            let r = StableRep::from_file(&alg, &file)?;
            let report = stable_rep_check(&r);
            f.detail("dims", vertex_map(&alg, r.dims()));
            for failure in report.failures {
                f.fail(failure);
            }
        }
        Command::RepRoundtrip { quiver, rep, samples } => {
            let alg = inputs.leavitt(quiver, flags.mode)?;
            require_file(rep, flags.seed)?;
            let reps = match rep {
                Some(path) => {
                    let file: StableRepFile = inputs.json(path)?;
                    vec![StableRep::from_file(&alg, &file)?]
                }
                None => {
                    let mut s = Sampler::new(flags.seed.expect("checked"));
                    (0..*samples)
                        .map(|_| {
                            s.stable_rep(&alg)
                                .ok_or_else(|| anyhow!("sampling needs every vertex to have at most one incoming edge"))
                        })
                        .collect::<Result<Vec<_>>>()?
                }
            };
            let audit = cp_relation_audit(&alg);
            for (i, r) in reps.iter().enumerate() {
                round_trip(i, r, &audit.relations, &mut f);
            }
            f.detail("representations", reps.len());
            f.detail("relations", audit.relations.len());
        }
        Command::CpAudit { quiver } => {
            let alg = inputs.leavitt(quiver, flags.mode)?;
            let p = cp_relation_audit(&alg);
            let entries = p.cross_check(&alg);
            for e in entries.iter().filter(|e| !e.normalizes) {
                f.fail(e);
            }
            f.detail("presentation", &p);
            f.detail("audit", &entries);
        }
        Command::Builtin { name } => {
            let c = builtin(name)?;
            let report = c.validate();
            f.detail("coalgebra", CoalgebraFile::from_coalgebra(&c));
            if !report.is_valid() {
                f.fail(&report);
            }
        }
    }
    Ok(f)
}

fn render_element(e: &Element) -> String {
    format_combination(e.coalgebra.basis(), &e.coords)
}

fn labels_of(c: &Coalgebra, idx: &[usize]) -> Vec<String> {
    idx.iter().map(|&k| c.label(k).to_string()).collect()
}

fn dense(m: &Matrix) -> Vec<Vec<Scalar>> {
    m.to_dense()
}

fn vertex_map<T: Clone>(alg: &Leavitt, v: &[T]) -> BTreeMap<String, T> {
    v.iter()
        .enumerate()
        .map(|(i, x)| (alg.vertex_label(i).to_string(), x.clone()))
        .collect()
}

fn validate(c: &Coalgebra, f: &mut Findings) {
    let r = c.validate();
    f.detail("name", c.name());
    f.detail("dim", c.dim());
    f.detail("cocommutative", c.is_cocommutative());
    f.detail("has_star", c.star().is_some());
    for v in r.violations {
        f.fail(v);
    }
}

fn load_maps(inputs: &mut Inputs, path: &Path, min: usize) -> Result<Vec<CoalgebraMap>> {
    let file: MapsFile = inputs.json(path)?;
    let ms = file.build().with_context(|| path.display().to_string())?;
    if ms.len() < min {
        bail!("{}: expected at least {min} maps", path.display());
    }
    for (i, m) in ms.iter().enumerate() {
        if let Some(v) = m.violation() {
            bail!("{}: map {i} is not a coalgebra map: {v:?}", path.display());
        }
    }
    Ok(ms)
}

fn admissible_pair(x1: &CoalgebraMap, x2: &CoalgebraMap, f: &mut Findings) -> Result<()> {
    let r = is_admissible(x1, x2)?;
    f.detail("source", x1.source().name());
    if !r.admissible() {
        f.fail(json!({
            "offending": labels_of(x1.source(), &r.offending),
            "witness": r.witness.as_ref().map(dense),
        }));
    }
    Ok(())
}

fn pair_maps(ms: &[CoalgebraMap], f: &mut Findings) -> Result<()> {
    let adm = is_admissible(&ms[0], &ms[1])?;
    if !adm.admissible() {
        f.fail(json!({"step": "admissible", "offending": labels_of(ms[0].source(), &adm.offending)}));
        return Ok(());
    }
    let p = pair(&AdmissiblePair::certify(ms[0].clone(), ms[1].clone())?)?;
    f.detail("target", p.target().name());
    f.detail("paired", dense(p.matrix()));
    if let Some(v) = p.violation() {
        f.fail(json!({"step": "paired map", "violation": v}));
    }
    if ms.len() >= 3 {
        let r = partial_assoc_check(&ms[0], &ms[1], &ms[2])?;
        f.detail("associativity", &r);
        if !r.holds() {
            f.fail(json!({"step": "associativity", "report": r}));
        }
    }
    Ok(())
}

fn conv(file: FunctionalsFile, f: &mut Findings) -> Result<()> {
    let (c, xs) = file.build()?;
    if xs.is_empty() {
        bail!("no functionals given");
    }
    let product = xs[1..].iter().try_fold(xs[0].clone(), |acc, x| conv_mul(&acc, x))?;
    f.detail("coalgebra", c.name());
    f.detail("product", product.coords());
    let mut pairs = Vec::new();
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            let admissible = functionals_admissible(&xs[i], &xs[j])?;
            let commute = xs[i].mul(&xs[j]) == xs[j].mul(&xs[i]);
            pairs.push(json!({"left": i, "right": j, "admissible": admissible, "commute": commute}));
            if admissible && !commute {
                f.fail(json!({"left": i, "right": j, "reason": "admissible but not commuting"}));
            }
        }
    }
    f.detail("pairs", pairs);
    Ok(())
}

fn idempotents(ms: &[CoalgebraMap], list: bool, f: &mut Findings) -> Result<()> {
    let mut families = Vec::new();
    for (i, m) in ms.iter().enumerate() {
        let family = orthogonal_idempotent_family(m)?;
        if let Some(failure) = idempotent_family_failure(&family, m.target().basis()) {
            f.fail(json!({"map": i, "failure": failure}));
            continue;
        }
        match assemble(m.target().clone(), &family) {
            Ok(back) if back == *m => {}
            Ok(_) => f.fail(json!({"map": i, "failure": "assembled map differs"})),
            Err(e) => f.fail(json!({"map": i, "failure": e.to_string()})),
        }
        if list {
            let entries: BTreeMap<String, Vec<Scalar>> = m
                .target()
                .basis()
                .iter()
                .cloned()
                .zip(family.iter().map(|x| x.coords().to_vec()))
                .collect();
            families.push(entries);
        }
    }
    f.detail("maps", ms.len());
    if list {
        f.detail("families", families);
    }
    Ok(())
}

fn expect_file(file: StateFile, f: &mut Findings) -> Result<()> {
    let c = file.coalgebra.build()?;
    let elem = |v: Vec<Scalar>| qcomb::elements::element(&c, v);
    let mut st = State::new(elem(file.state)?)?;
    if let Some(w) = file.witness {
        st = st.with_witness(w.into_iter().map(elem).collect::<Result<Vec<_>, _>>()?)?;
    }
    let xs = file
        .functionals
        .into_iter()
        .map(|v| qcomb::partial::ConvElement::new(c.clone(), v))
        .collect::<Result<Vec<_>, _>>()?;
    f.detail("witnessed", st.witness().is_some());
    check_state(&st, &xs, f)
}

fn check_state(st: &State, xs: &[qcomb::partial::ConvElement], f: &mut Findings) -> Result<()> {
    let c = st.element().coalgebra.clone();
    let unit = expectation(&qcomb::partial::ConvElement::unit(c), st)?;
    f.detail("counit_expectation", &unit);
    if !unit.is_one() {
        f.fail(json!({"check": "counit", "value": unit}));
    }
    let mut rows = Vec::new();
    for (i, x) in xs.iter().enumerate() {
        let e = expectation(x, st)?;
        let mut row = json!({"functional": i, "expectation": e});
        if let Ok(p) = Proposition::new(x.clone()) {
            let in_range = e.is_real() && e.is_nonnegative_real() && (&Scalar::one() - &e).is_nonnegative_real();
            row["proposition"] = json!(true);
            if p.is_self_adjoint()? && !in_range {
                f.fail(json!({"functional": i, "check": "probability in [0, 1]", "value": e}));
            }
        }
        if st.witness().is_some() {
            let pos = positivity_check(x, st)?;
            row["positivity"] = json!(pos);
            if !pos.is_nonnegative_real() {
                f.fail(json!({"functional": i, "check": "positivity", "value": pos}));
            }
        }
        rows.push(row);
    }
    f.detail("functionals", rows);
    Ok(())
}

fn axioms(key: &str, r: &AxiomReport, f: &mut Findings) {
    let summary: BTreeMap<&str, bool> = r.axioms.iter().map(|a| (a.name.as_str(), a.passed)).collect();
    f.detail(key, summary);
    for a in r.failures() {
        f.fail(a);
    }
}

fn qbool_check(t: &BooleanTables, flags: &Flags, f: &mut Findings) -> Result<()> {
    let q = linearize_tables(t)?;
    f.detail("elements", t.elements.len());
    let lattice = q.check_lattice_axioms();
    axioms("lattice", &lattice, f);
    if q.neg().is_none() {
        f.detail("complement", "none");
        f.fail(json!({"complement": "no set involution satisfies the complement axioms"}));
        return Ok(());
    }
    axioms("complement", &q.check_complement()?, f);
    let dm = if flags.strict_paper {
        q.check_weak_de_morgan_swapped()?
    } else {
        q.check_weak_de_morgan()?
    };
    axioms("de_morgan", &dm, f);
    if lattice.all_pass() && t.elements.len() <= 8 {
        let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
        for v in q.negation_uniqueness_sweep(&set_involutions(t.elements.len()))? {
            let key = match v {
                ProbeVerdict::Equal => "equal",
                ProbeVerdict::NotStructural(_) => "not_structural",
                ProbeVerdict::FailsComplement(_) => "fails_complement",
                ProbeVerdict::Differs => {
                    f.fail(json!({"probe": "a second negation passes the complement axioms"}));
                    "differs"
                }
            };
            *counts.entry(key).or_default() += 1;
        }
        f.detail("negation_probe", counts);
    }
    Ok(())
}

fn parse_expr(alg: &Leavitt, text: &str) -> Result<LpaElement> {
    if text.contains(';') || text.trim() == "0" {
        Ok(LpaElement::parse(alg, text)?)
    } else {
        Ok(alg.normalize(&alg.parse_word(text)?))
    }
}

fn lpa_table(alg: &Leavitt, limit: usize, f: &mut Findings) {
    f.detail("mode", alg.mode());
    let Some(basis) = alg.closure_basis(limit) else {
        f.fail(json!({"closure": format!("more than {limit} monomials")}));
        return;
    };
    let names: Vec<String> = basis.iter().map(|m| m.render(alg)).collect();
    let table: Vec<Vec<String>> = basis
        .iter()
        .map(|a| basis.iter().map(|b| alg.mul_monomials(a, b).to_string()).collect())
        .collect();
    f.detail("size", basis.len());
    f.detail("basis", &names);
    f.detail("table", table);
    f.detail("matrix_units", matrix_units(alg, &basis));
}

/// `m ↦ E(left vertex, right vertex)` when that is a multiplicative bijection onto
/// the matrix units over the vertices it reaches.
fn matrix_units(alg: &Leavitt, basis: &[LpaMonomial]) -> Option<BTreeMap<String, String>> {
    let unit = |m: &LpaMonomial| (m.left_vertex(alg), m.right_vertex(alg));
    let index: BTreeMap<(usize, usize), &LpaMonomial> = basis.iter().map(|m| (unit(m), m)).collect();
    let n = (basis.len() as f64).sqrt() as usize;
    if index.len() != basis.len() || n * n != basis.len() {
        return None;
    }
    for a in basis {
        for b in basis {
            let ((i, j), (k, l)) = (unit(a), unit(b));
            let expected = match (j == k).then(|| index.get(&(i, l))) {
                Some(Some(m)) => LpaElement::monomial(alg, (*m).clone()),
                Some(None) => return None,
                None => LpaElement::zero(alg),
            };
            if alg.mul_monomials(a, b) != expected {
                return None;
            }
        }
    }
    Some(
        basis
            .iter()
            .map(|m| {
                let (i, j) = unit(m);
                (m.render(alg), format!("E({}, {})", alg.vertex_label(i), alg.vertex_label(j)))
            })
            .collect(),
    )
}

fn round_trip(i: usize, r: &StableRep, relations: &[qcomb::leavitt::Relation], f: &mut Findings) {
    let report = stable_rep_check(r);
    if !report.passes() {
        f.fail(json!({"representation": i, "stable": report}));
        return;
    }
    let m = match rep_to_module(r) {
        Ok(m) => m,
        Err(e) => {
            f.fail(json!({"representation": i, "rep_to_module": e.to_string()}));
            return;
        }
    };
    for rel in relations.iter().filter(|rel| !m.satisfies(rel)) {
        f.fail(json!({"representation": i, "relation": rel.text}));
    }
    match module_to_rep(&m) {
        Ok(back) if back == *r => {}
        Ok(_) => f.fail(json!({"representation": i, "module_to_rep": "differs from the input"})),
        Err(e) => f.fail(json!({"representation": i, "module_to_rep": e.to_string()})),
    }
}
