//! Experiment configuration: problem generator specs and run specs.

use crate::instance_io::{GeometrySpec, SetSpec};
use anyhow::{bail, Result};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub problems: Vec<ProblemSpec>,
    pub runs: Vec<RunSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub id: String,
    pub family: FamilySpec,
    pub set: SetSpec,
    pub geometry: GeometrySpec,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FamilySpec {
    Quadratic {
        dim: usize,
        l: f64,
        sigma: f64,
    },
    PwlStrong {
        dim: usize,
        pieces: usize,
        sigma: f64,
    },
    Holder {
        dim: usize,
        terms: usize,
        rho: f64,
        mu: f64,
    },
    Lasso {
        rows: usize,
        dim: usize,
        tau: f64,
    },
}

impl FamilySpec {
    pub fn dim(&self) -> usize {
        match self {
            FamilySpec::Quadratic { dim, .. }
            | FamilySpec::PwlStrong { dim, .. }
            | FamilySpec::Holder { dim, .. }
            | FamilySpec::Lasso { dim, .. } => *dim,
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum RunClass {
    Nonsmooth,
    Structured,
    Cgm,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum VariantSpec {
    Classical,
    Modified,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum ModelSpec {
    ExtendedMd,
    DualAveraging,
    Hybrid,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ScheduleSpec {
    SimpleAveraging {
        #[serde(default)]
        beta: f64,
    },
    /// Constants resolved from the instance at run time.
    ClassicalStructured,
    ModifiedStructured,
    WeakNonstrong {
        /// Absent means: tune from the estimated constant and `d(x*)`.
        gamma: Option<f64>,
    },
    WeakStrong {
        /// Absent means: smallest power that reaches the best decay branch.
        p: Option<f64>,
        #[serde(default)]
        beta: f64,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunSpec {
    pub id: String,
    pub class: RunClass,
    pub variant: VariantSpec,
    pub model: ModelSpec,
    pub schedule: ScheduleSpec,
    pub iterations: usize,
    pub problems: Vec<String>,
    /// Wrap the structured oracle with this accuracy slack.
    #[serde(default)]
    pub oracle_delta: Option<f64>,
    /// Fault-injection factor on certificate increments (default 1.0); used by
    /// harness self-tests to confirm that a wrong accumulator trips the
    /// certificate-relation check.
    #[serde(default)]
    pub certificate_scale: Option<f64>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let mut ids = HashSet::new();
        for p in &self.problems {
            if !ids.insert(p.id.as_str()) {
                bail!("duplicate problem id {:?}", p.id);
            }
            if p.family.dim() == 0 {
                bail!("problem {:?} has zero dimension", p.id);
            }
            if let FamilySpec::Holder { rho, mu, .. } = &p.family {
                if !(1.0..2.0).contains(rho) {
                    bail!("problem {:?}: rho must lie in [1, 2)", p.id);
                }
                if *mu < 0.0 {
                    bail!("problem {:?}: mu must be non-negative", p.id);
                }
            }
            if let FamilySpec::Quadratic { l, sigma, .. } = &p.family {
                if *l <= 0.0 || *sigma < 0.0 || sigma > l {
                    bail!("problem {:?}: need 0 <= sigma <= L, L > 0", p.id);
                }
            }
            if matches!(p.geometry, GeometrySpec::Entropy) && !matches!(p.set, SetSpec::Simplex) {
                bail!("problem {:?}: entropy geometry needs the simplex", p.id);
            }
        }
        let mut run_ids = HashSet::new();
        for r in &self.runs {
            if !run_ids.insert(r.id.as_str()) {
                bail!("duplicate run id {:?}", r.id);
            }
            if r.iterations == 0 {
                bail!("run {:?}: iterations must be positive", r.id);
            }
            if r.problems.is_empty() {
                bail!("run {:?} lists no problems", r.id);
            }
            for pid in &r.problems {
                let prob = self
                    .problems
                    .iter()
                    .find(|p| &p.id == pid)
                    .ok_or_else(|| anyhow::anyhow!("run {:?}: unknown problem {:?}", r.id, pid))?;
                compatible(r, prob)?;
            }
            if r.class == RunClass::Nonsmooth && r.model == ModelSpec::Hybrid {
                bail!("run {:?}: non-smooth runs use a single auxiliary sequence", r.id);
            }
            if let Some(d) = r.oracle_delta {
                if d < 0.0 {
                    bail!("run {:?}: oracle_delta must be non-negative", r.id);
                }
                if r.class != RunClass::Structured {
                    bail!("run {:?}: oracle_delta applies to structured runs", r.id);
                }
            }
        }
        Ok(())
    }
}

fn compatible(run: &RunSpec, prob: &ProblemSpec) -> Result<()> {
    match run.class {
        RunClass::Nonsmooth => match prob.family {
            FamilySpec::PwlStrong { .. } | FamilySpec::Quadratic { .. } => Ok(()),
            _ => bail!(
                "run {:?}: family of problem {:?} has no subgradient-oracle form",
                run.id,
                prob.id
            ),
        },
        RunClass::Structured => match prob.family {
            FamilySpec::Quadratic { .. } | FamilySpec::Holder { .. } | FamilySpec::Lasso { .. } => {
                Ok(())
            }
            _ => bail!(
                "run {:?}: family of problem {:?} has no structured-model form",
                run.id,
                prob.id
            ),
        },
        RunClass::Cgm => {
            if matches!(prob.set, SetSpec::Unconstrained) {
                bail!(
                    "run {:?}: conditional gradient needs a bounded set on {:?}",
                    run.id,
                    prob.id
                );
            }
            match prob.family {
                FamilySpec::Quadratic { sigma, .. } if sigma == 0.0 => Ok(()),
                FamilySpec::Holder { mu, .. } if mu == 0.0 => Ok(()),
                _ => bail!(
                    "run {:?}: conditional gradient needs sigma = 0 on {:?}",
                    run.id,
                    prob.id
                ),
            }
        }
    }
}
