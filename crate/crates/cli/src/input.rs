use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use qcomb::coalg::{Coalgebra, CoalgebraFile, FiniteCategory};
use qcomb::elements::CoalgebraMap;
use qcomb::exact::{Matrix, Scalar};
use qcomb::leavitt::{Leavitt, Mode};
use qcomb::partial::ConvElement;
use qcomb::quiver::{ClassicalQuiver, QuantumQuiver};

#[derive(Clone, Debug, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// Files read so far, in order, with their digests.
#[derive(Default)]
pub struct Inputs {
    pub digests: Vec<InputDigest>,
}

impl Inputs {
    pub fn read(&mut self, path: &Path) -> Result<String> {
        let bytes = fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
        self.digests.push(InputDigest {
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(&bytes)),
        });
        String::from_utf8(bytes).with_context(|| format!("{} is not UTF-8", path.display()))
    }

    pub fn json<T: DeserializeOwned>(&mut self, path: &Path) -> Result<T> {
        let text = self.read(path)?;
        Self::parse(path, &text)
    }

    /// Parses against the concrete format so that errors keep their line and column.
    fn parse<T: DeserializeOwned>(path: &Path, text: &str) -> Result<T> {
        serde_json::from_str(text).map_err(|e| anyhow!("{}: {e}", path.display()))
    }

    pub fn coalgebra(&mut self, path: &Path) -> Result<Arc<Coalgebra>> {
        let text = self.read(path)?;
        let spec = if text.trim_start().starts_with('"') {
            CoalgebraSpec::Builtin(Self::parse(path, &text)?)
        } else {
            CoalgebraSpec::File(Self::parse(path, &text)?)
        };
        spec.build().with_context(|| path.display().to_string())
    }

    pub fn quiver(&mut self, path: &Path) -> Result<QuiverInput> {
        let text = self.read(path)?;
        let value: serde_json::Value = Self::parse(path, &text)?;
        if value.get("source").is_some() {
            return Ok(QuiverInput::Quantum(Self::parse(path, &text)?));
        }
        let q: ClassicalQuiver = Self::parse(path, &text)?;
        q.check().with_context(|| path.display().to_string())?;
        Ok(QuiverInput::Classical(q))
    }

    pub fn leavitt(&mut self, path: &Path, mode: Mode) -> Result<Leavitt> {
        let alg = match self.quiver(path)? {
            QuiverInput::Classical(q) => Leavitt::new(q, mode)?,
            QuiverInput::Quantum(q) => Leavitt::from_quantum(&q.build()?, mode)?,
        };
        Ok(alg)
    }
}

/// A coalgebra given inline in file format, or by a builtin name such as
/// `comatrix:2`, `linearize:a,b,c`, `additive:3`, `pair:2`, `chain:3`,
/// `divisors:6`, `omega`, `singleton`, optionally prefixed by `opposite:`.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum CoalgebraSpec {
    Builtin(String),
    File(CoalgebraFile),
}

impl CoalgebraSpec {
    pub fn build(self) -> Result<Arc<Coalgebra>> {
        Ok(Arc::new(match self {
            CoalgebraSpec::File(f) => f.into_coalgebra()?,
            CoalgebraSpec::Builtin(name) => builtin(&name)?,
        }))
    }
}

pub fn builtin(name: &str) -> Result<Coalgebra> {
    if let Some(rest) = name.strip_prefix("opposite:") {
        return Ok(builtin(rest)?.opposite());
    }
    let (head, arg) = name.split_once(':').unwrap_or((name, ""));
    let number = || -> Result<usize> {
        arg.parse()
            .map_err(|_| anyhow!("builtin `{head}` needs a size, e.g. `{head}:2`"))
    };
    Ok(match head {
        "omega" => Coalgebra::omega(),
        "singleton" => Coalgebra::singleton(),
        "empty" => Coalgebra::empty(),
        "comatrix" => Coalgebra::comatrix(number()?),
        "additive" => Coalgebra::fd_monoid_additive(number()?),
        "pair" => Coalgebra::fd_category(&FiniteCategory::pair(number()?))?,
        "chain" => Coalgebra::fd_category(&FiniteCategory::chain(number()?))?,
        "divisors" => Coalgebra::fd_category(&FiniteCategory::divisor_monoid(number()?))?,
        "linearize" => {
            let labels: Vec<&str> = if arg.is_empty() { Vec::new() } else { arg.split(',').collect() };
            Coalgebra::linearize(&labels)?
        }
        _ => bail!("unknown builtin coalgebra `{name}`"),
    })
}

pub fn dense(rows: &[Vec<Scalar>], shape: (usize, usize), what: &str) -> Result<Matrix> {
    if rows.len() != shape.0 || rows.iter().any(|r| r.len() != shape.1) {
        bail!("{what}: expected a {}×{} matrix", shape.0, shape.1);
    }
    let mut m = Matrix::zeros(shape.0, shape.1);
    for (i, row) in rows.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            m.set(i, j, x.clone());
        }
    }
    Ok(m)
}

/// A linear map out of the file's source coalgebra: a matrix with one row per
/// target basis element, or a set map listing the target label of each source basis element.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub target: CoalgebraSpec,
    #[serde(default)]
    pub matrix: Option<Vec<Vec<Scalar>>>,
    #[serde(default)]
    pub images: Option<Vec<String>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapsFile {
    pub source: CoalgebraSpec,
    pub maps: Vec<MapSpec>,
}

impl MapsFile {
    pub fn build(self) -> Result<Vec<CoalgebraMap>> {
        let source = self.source.build()?;
        self.maps
            .into_iter()
            .enumerate()
            .map(|(i, spec)| {
                let target = spec.target.build()?;
                match (spec.matrix, spec.images) {
                    (Some(rows), None) => {
                        let m = dense(&rows, (target.dim(), source.dim()), &format!("map {i}"))?;
                        Ok(CoalgebraMap::new(source.clone(), target, m)?)
                    }
                    (None, Some(labels)) => {
                        let image = labels
                            .iter()
                            .map(|l| target.index_of(l).ok_or_else(|| anyhow!("map {i}: unknown target label `{l}`")))
                            .collect::<Result<Vec<_>>>()?;
                        Ok(CoalgebraMap::from_set_map(source.clone(), target, &image)?)
                    }
                    _ => bail!("map {i}: give exactly one of `matrix` or `images`"),
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionalsFile {
    pub coalgebra: CoalgebraSpec,
    pub functionals: Vec<Vec<Scalar>>,
}

impl FunctionalsFile {
    pub fn build(self) -> Result<(Arc<Coalgebra>, Vec<ConvElement>)> {
        let c = self.coalgebra.build()?;
        let xs = self
            .functionals
            .into_iter()
            .map(|v| ConvElement::new(c.clone(), v))
            .collect::<Result<Vec<_>, _>>()?;
        Ok((c, xs))
    }
}

/// A state `s` on a coalgebra, an optional positivity witness `s = Σ w*w`,
/// and functionals to evaluate.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub coalgebra: CoalgebraSpec,
    pub state: Vec<Scalar>,
    #[serde(default)]
    pub witness: Option<Vec<Vec<Scalar>>>,
    #[serde(default)]
    pub functionals: Vec<Vec<Scalar>>,
}

/// Edge coalgebra, vertex coalgebra, and the source and target maps as matrices.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantumQuiverFile {
    pub edges: CoalgebraSpec,
    pub vertices: CoalgebraSpec,
    pub source: Vec<Vec<Scalar>>,
    pub target: Vec<Vec<Scalar>>,
}

impl QuantumQuiverFile {
    pub fn build(self) -> Result<QuantumQuiver> {
        let d1 = self.edges.build()?;
        let d0 = self.vertices.build()?;
        let op = Arc::new(d0.opposite());
        let s = dense(&self.source, (d0.dim(), d1.dim()), "source")?;
        let t = dense(&self.target, (d0.dim(), d1.dim()), "target")?;
        Ok(QuantumQuiver::new(
            CoalgebraMap::new(d1.clone(), op, s)?,
            CoalgebraMap::new(d1, d0, t)?,
        )?)
    }
}

pub enum QuiverInput {
    Classical(ClassicalQuiver),
    Quantum(QuantumQuiverFile),
}

pub fn require_file(file: &Option<PathBuf>, seed: Option<u64>) -> Result<()> {
    if file.is_none() && seed.is_none() {
        bail!("give an input file or `--seed N` for a sampled sweep");
    }
    Ok(())
}
