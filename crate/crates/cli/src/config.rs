//! JSON mechanism configuration.
//!
//! ```json
//! {
//!   "weights": [[1.0, 0.0], [0.0, 1.0]],
//!   "bias": [0.0, 0.0],
//!   "generators": "rx",
//!   "povm": { "computational": { "n": 2, "k": 2 } },
//!   "eta": 0.1,
//!   "sigma": 0.2
//! }
//! ```
//!
//! `generators` is `"rx"`, `"equatorial"`, or a list of 2×2 matrices whose entries
//! are `[re, im]` pairs (then `scheme` picks the encoder, default `"rx"`).
//! `povm` is either `computational` or `{ "elements": [...], "values": [...] }`.

use std::path::Path;

use anyhow::{bail, Context};
use hyperq_core::encode::{povm_computational, EncodingSpec, LinearLayer, Povm, Scheme};
use hyperq_core::linalg::{ComplexMatrix, RealMatrix};
use hyperq_core::mechanism::MechanismConfig;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

type JsonMatrix = Vec<Vec<[f64; 2]>>;

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub weights: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub bias: Option<Vec<f64>>,
    #[serde(default)]
    pub qubits: Option<usize>,
    pub generators: Generators,
    #[serde(default)]
    pub scheme: Option<SchemeName>,
    pub povm: PovmSpec,
    #[serde(default)]
    pub eta: f64,
    #[serde(default)]
    pub sigma: f64,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(untagged)]
pub enum Generators {
    Named(SchemeName),
    Explicit(Vec<JsonMatrix>),
}

#[derive(Clone, Copy, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum SchemeName {
    Rx,
    Equatorial,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PovmSpec {
    Computational {
        n: usize,
        k: usize,
    },
    #[serde(untagged)]
    Explicit {
        elements: Vec<JsonMatrix>,
        #[serde(default)]
        values: Option<Vec<f64>>,
    },
}

fn complex_matrix(m: &JsonMatrix) -> anyhow::Result<ComplexMatrix> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    if m.iter().any(|r| r.len() != cols) {
        bail!("ragged matrix");
    }
    let data = m
        .iter()
        .flatten()
        .map(|[re, im]| Complex64::new(*re, *im))
        .collect();
    Ok(ComplexMatrix::new(rows, cols, data)?)
}

impl ConfigFile {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> anyhow::Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    fn qubit_count(&self) -> anyhow::Result<usize> {
        if let Generators::Explicit(g) = &self.generators {
            return Ok(g.len());
        }
        if let Some(w) = &self.weights {
            return Ok(w.len());
        }
        self.qubits
            .context("`qubits` is required when neither weights nor explicit generators are given")
    }

    pub fn build(&self) -> anyhow::Result<MechanismConfig> {
        let n = self.qubit_count()?;
        let encoding = match &self.generators {
            Generators::Named(SchemeName::Rx) => EncodingSpec::rx(n)?,
            Generators::Named(SchemeName::Equatorial) => EncodingSpec::equatorial(n)?,
            Generators::Explicit(gs) => {
                let gens = gs
                    .iter()
                    .map(complex_matrix)
                    .collect::<anyhow::Result<Vec<_>>>()?;
                let scheme = match self.scheme.unwrap_or(SchemeName::Rx) {
                    SchemeName::Rx => Scheme::RxProduct,
                    SchemeName::Equatorial => Scheme::Equatorial,
                };
                EncodingSpec::new(gens, scheme)?
            }
        };
        let layer = match &self.weights {
            Some(rows) => {
                let w = RealMatrix::from_rows(rows)?;
                let b = self.bias.clone().unwrap_or_else(|| vec![0.0; w.rows()]);
                LinearLayer::new(w, b)?
            }
            None => match &self.bias {
                Some(b) => LinearLayer::new(RealMatrix::identity(n), b.clone())?,
                None => LinearLayer::identity(n),
            },
        };
        let povm = match &self.povm {
            PovmSpec::Computational { n, k } => povm_computational(*n, *k)?,
            PovmSpec::Explicit { elements, values } => {
                let els = elements
                    .iter()
                    .map(complex_matrix)
                    .collect::<anyhow::Result<Vec<_>>>()?;
                let vals = values
                    .clone()
                    .unwrap_or_else(|| (0..els.len()).map(|v| v as f64).collect());
                Povm::new(els, vals)?
            }
        };
        Ok(MechanismConfig::new(
            layer, encoding, povm, self.eta, self.sigma,
        )?)
    }
}
