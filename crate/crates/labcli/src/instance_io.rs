//! Problem-instance files: JSON with base64-encoded little-endian f64 arrays.
//!
//! Files are written by `gen` and read back by `run`; they carry everything a
//! run needs (matrices, constants, the constructed reference optimum, the
//! feasible set and geometry declarations), so repeated runs are a pure
//! function of these files.

use anyhow::{anyhow, bail, Context, Result};
use base64::engine::general_purpose::STANDARD as B64;
use base64::Engine;
use proxgrad::geometry::{FeasibleSet, ProxGeometry};
use proxgrad::instances::{HolderInstance, LassoInstance, Matrix, PwlInstance, QuadraticInstance};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

pub fn encode_f64s(v: &[f64]) -> String {
    let mut bytes = Vec::with_capacity(v.len() * 8);
    for x in v {
        bytes.extend_from_slice(&x.to_le_bytes());
    }
    B64.encode(bytes)
}

pub fn decode_f64s(s: &str) -> Result<Vec<f64>> {
    let bytes = B64.decode(s).context("invalid base64 payload")?;
    if bytes.len() % 8 != 0 {
        bail!("payload length {} is not a multiple of 8", bytes.len());
    }
    Ok(bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect())
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SetSpec {
    Unconstrained,
    Box { half_width: f64 },
    Simplex,
    Ball { radius: f64 },
}

impl SetSpec {
    pub fn build(&self, dim: usize) -> FeasibleSet {
        match self {
            SetSpec::Unconstrained => FeasibleSet::Unconstrained { dim },
            SetSpec::Box { half_width } => FeasibleSet::symmetric_box(dim, *half_width),
            SetSpec::Simplex => FeasibleSet::Simplex { dim },
            SetSpec::Ball { radius } => FeasibleSet::Ball {
                center: vec![0.0; dim],
                radius: *radius,
            },
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "kebab-case")]
pub enum GeometrySpec {
    Euclidean,
    Entropy,
}

impl GeometrySpec {
    /// The prox-center must minimize `d` over the set, so the Euclidean
    /// geometry centers at the set's natural midpoint.
    pub fn build(&self, dim: usize, set: &SetSpec) -> Result<ProxGeometry> {
        match self {
            GeometrySpec::Euclidean => Ok(match set {
                SetSpec::Simplex => ProxGeometry::euclidean(vec![1.0 / dim as f64; dim]),
                _ => ProxGeometry::euclidean(vec![0.0; dim]),
            }),
            GeometrySpec::Entropy => {
                if !matches!(set, SetSpec::Simplex) {
                    bail!("entropy geometry requires the simplex feasible set");
                }
                Ok(ProxGeometry::entropy_simplex(dim))
            }
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FamilyData {
    Quadratic {
        dim: usize,
        l: f64,
        sigma: f64,
        a_b64: String,
        b_b64: String,
    },
    PwlStrong {
        dim: usize,
        pieces: usize,
        sigma: f64,
        slopes_b64: String,
        vertex_b64: String,
    },
    Holder {
        dim: usize,
        terms: usize,
        rho: f64,
        mu: f64,
        m_est: f64,
        a_b64: String,
        rhs_b64: String,
        anchor_b64: String,
    },
    Lasso {
        rows: usize,
        dim: usize,
        tau: f64,
        l: f64,
        a_b64: String,
        rhs_b64: String,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceFile {
    pub schema: u32,
    pub id: String,
    pub family: FamilyData,
    pub set: SetSpec,
    pub geometry: GeometrySpec,
    pub x_star_b64: Option<String>,
    pub f_star: Option<f64>,
}

impl InstanceFile {
    pub fn dim(&self) -> usize {
        match &self.family {
            FamilyData::Quadratic { dim, .. }
            | FamilyData::PwlStrong { dim, .. }
            | FamilyData::Holder { dim, .. }
            | FamilyData::Lasso { dim, .. } => *dim,
        }
    }

    pub fn x_star(&self) -> Result<Option<Vec<f64>>> {
        self.x_star_b64.as_deref().map(decode_f64s).transpose()
    }

    pub fn quadratic(&self) -> Result<QuadraticInstance> {
        match &self.family {
            FamilyData::Quadratic {
                dim,
                l,
                sigma,
                a_b64,
                b_b64,
            } => {
                let data = decode_f64s(a_b64)?;
                if data.len() != dim * dim {
                    bail!("matrix payload size mismatch");
                }
                Ok(QuadraticInstance {
                    a: Matrix {
                        rows: *dim,
                        cols: *dim,
                        data,
                    },
                    b: decode_f64s(b_b64)?,
                    l: *l,
                    sigma: *sigma,
                    x_star: self
                        .x_star()?
                        .ok_or_else(|| anyhow!("quadratic instances carry x_star"))?,
                    f_star: self
                        .f_star
                        .ok_or_else(|| anyhow!("quadratic instances carry f_star"))?,
                })
            }
            _ => bail!("instance {} is not a quadratic", self.id),
        }
    }

    pub fn pwl(&self) -> Result<PwlInstance> {
        match &self.family {
            FamilyData::PwlStrong {
                dim,
                pieces,
                sigma,
                slopes_b64,
                vertex_b64,
            } => {
                let data = decode_f64s(slopes_b64)?;
                if data.len() != 2 * pieces * dim {
                    bail!("slope payload size mismatch");
                }
                let vertex = decode_f64s(vertex_b64)?;
                Ok(PwlInstance {
                    slopes: Matrix {
                        rows: 2 * pieces,
                        cols: *dim,
                        data,
                    },
                    sigma: *sigma,
                    x_star: vertex.clone(),
                    vertex,
                    f_star: 0.0,
                })
            }
            _ => bail!("instance {} is not piecewise-linear", self.id),
        }
    }

    pub fn holder(&self) -> Result<HolderInstance> {
        match &self.family {
            FamilyData::Holder {
                dim,
                terms,
                rho,
                mu,
                m_est,
                a_b64,
                rhs_b64,
                anchor_b64,
            } => {
                let data = decode_f64s(a_b64)?;
                if data.len() != terms * dim {
                    bail!("matrix payload size mismatch");
                }
                let anchor = decode_f64s(anchor_b64)?;
                Ok(HolderInstance {
                    a: Matrix {
                        rows: *terms,
                        cols: *dim,
                        data,
                    },
                    b: decode_f64s(rhs_b64)?,
                    rho: *rho,
                    mu: *mu,
                    x_star: anchor.clone(),
                    anchor,
                    f_star: 0.0,
                    m_est: *m_est,
                })
            }
            _ => bail!("instance {} is not a Holder instance", self.id),
        }
    }

    pub fn lasso(&self) -> Result<LassoInstance> {
        match &self.family {
            FamilyData::Lasso {
                rows,
                dim,
                tau,
                l,
                a_b64,
                rhs_b64,
            } => {
                let data = decode_f64s(a_b64)?;
                if data.len() != rows * dim {
                    bail!("matrix payload size mismatch");
                }
                Ok(LassoInstance {
                    a: Matrix {
                        rows: *rows,
                        cols: *dim,
                        data,
                    },
                    b: decode_f64s(rhs_b64)?,
                    tau: *tau,
                    l: *l,
                })
            }
            _ => bail!("instance {} is not a lasso instance", self.id),
        }
    }
}

pub fn from_quadratic(
    id: &str,
    inst: &QuadraticInstance,
    set: SetSpec,
    geometry: GeometrySpec,
) -> InstanceFile {
    InstanceFile {
        schema: SCHEMA_VERSION,
        id: id.to_string(),
        family: FamilyData::Quadratic {
            dim: inst.dim(),
            l: inst.l,
            sigma: inst.sigma,
            a_b64: encode_f64s(&inst.a.data),
            b_b64: encode_f64s(&inst.b),
        },
        set,
        geometry,
        x_star_b64: Some(encode_f64s(&inst.x_star)),
        f_star: Some(inst.f_star),
    }
}

pub fn from_pwl(
    id: &str,
    inst: &PwlInstance,
    set: SetSpec,
    geometry: GeometrySpec,
) -> InstanceFile {
    InstanceFile {
        schema: SCHEMA_VERSION,
        id: id.to_string(),
        family: FamilyData::PwlStrong {
            dim: inst.dim(),
            pieces: inst.slopes.rows / 2,
            sigma: inst.sigma,
            slopes_b64: encode_f64s(&inst.slopes.data),
            vertex_b64: encode_f64s(&inst.vertex),
        },
        set,
        geometry,
        x_star_b64: Some(encode_f64s(&inst.x_star)),
        f_star: Some(inst.f_star),
    }
}

pub fn from_holder(
    id: &str,
    inst: &HolderInstance,
    set: SetSpec,
    geometry: GeometrySpec,
) -> InstanceFile {
    InstanceFile {
        schema: SCHEMA_VERSION,
        id: id.to_string(),
        family: FamilyData::Holder {
            dim: inst.dim(),
            terms: inst.a.rows,
            rho: inst.rho,
            mu: inst.mu,
            m_est: inst.m_est,
            a_b64: encode_f64s(&inst.a.data),
            rhs_b64: encode_f64s(&inst.b),
            anchor_b64: encode_f64s(&inst.anchor),
        },
        set,
        geometry,
        x_star_b64: Some(encode_f64s(&inst.x_star)),
        f_star: Some(inst.f_star),
    }
}

pub fn from_lasso(
    id: &str,
    inst: &LassoInstance,
    set: SetSpec,
    geometry: GeometrySpec,
) -> InstanceFile {
    InstanceFile {
        schema: SCHEMA_VERSION,
        id: id.to_string(),
        family: FamilyData::Lasso {
            rows: inst.a.rows,
            dim: inst.dim(),
            tau: inst.tau,
            l: inst.l,
            a_b64: encode_f64s(&inst.a.data),
            rhs_b64: encode_f64s(&inst.b),
        },
        set,
        geometry,
        x_star_b64: None,
        f_star: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f64_payload_roundtrip() {
        let v = vec![0.0, -1.5, f64::MAX, 1e-300, std::f64::consts::PI];
        let decoded = decode_f64s(&encode_f64s(&v)).unwrap();
        for (a, b) in v.iter().zip(&decoded) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn entropy_geometry_requires_simplex() {
        assert!(GeometrySpec::Entropy
            .build(3, &SetSpec::Box { half_width: 1.0 })
            .is_err());
        assert!(GeometrySpec::Entropy.build(3, &SetSpec::Simplex).is_ok());
    }
}
