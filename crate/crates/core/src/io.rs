//! JSON schemas for cones, polytopes, measures and solutions.
//!
//! Loaders return the parsed value together with warnings, for instance when
//! an input vector had to be normalized noticeably. Parse errors carry the
//! line, column and field path of the offending value.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::cone::{Cone, ConeKind, UnitVector};
use crate::error::{Error, Result};
use crate::measures::{Atom, DiscreteMeasure, Domain};
use crate::polytope::{CPolytope, Facet};
use crate::solver::Solution;

/// Vectors whose norm differs from one by more than this produce a warning
/// when normalized on load.
pub const NORMALIZATION_WARNING: f64 = 1e-6;

/// A loaded value and the warnings raised while building it.
#[derive(Clone, Debug)]
pub struct Loaded<T> {
    pub value: T,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<ConeKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axis: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub half_angle: Option<f64>,
}

impl ConeSpec {
    pub fn from_cone(cone: &Cone) -> ConeSpec {
        match (cone.kind(), cone.circular_params()) {
            (ConeKind::Circular, Some((axis, alpha))) => ConeSpec {
                dim: Some(cone.dim()),
                kind: Some(ConeKind::Circular),
                generators: None,
                axis: Some(axis.as_slice().to_vec()),
                half_angle: Some(alpha),
            },
            _ => ConeSpec {
                dim: Some(cone.dim()),
                kind: Some(ConeKind::Polyhedral),
                generators: Some(cone.generators().iter().map(|g| g.as_slice().to_vec()).collect()),
                axis: None,
                half_angle: None,
            },
        }
    }

    pub fn build(&self) -> Result<Loaded<Cone>> {
        let mut warnings = Vec::new();
        let circular = self.axis.is_some() || self.half_angle.is_some();
        let kind = self.kind.unwrap_or(if circular { ConeKind::Circular } else { ConeKind::Polyhedral });
        let cone = match kind {
            ConeKind::Circular => {
                let (Some(axis), Some(alpha)) = (&self.axis, self.half_angle) else {
                    return Err(Error::Invalid("circular cone needs \"axis\" and \"half_angle\"".into()));
                };
                note_normalization(axis, "axis", &mut warnings);
                Cone::circular(axis, alpha)?
            }
            ConeKind::Polyhedral => {
                let Some(gens) = &self.generators else {
                    return Err(Error::Invalid("polyhedral cone needs \"generators\"".into()));
                };
                if circular {
                    return Err(Error::Invalid("polyhedral cone cannot have \"axis\" or \"half_angle\"".into()));
                }
                for (i, g) in gens.iter().enumerate() {
                    note_normalization(g, &format!("generator {i}"), &mut warnings);
                }
                let dim = self.dim.or(gens.first().map(|g| g.len())).unwrap_or(0);
                Cone::polyhedral(dim, gens)?
            }
        };
        if let Some(dim) = self.dim {
            if dim != cone.dim() {
                return Err(Error::DimensionMismatch { expected: dim, found: cone.dim() });
            }
        }
        Ok(Loaded { value: cone, warnings })
    }
}

fn note_normalization(v: &[f64], what: &str, warnings: &mut Vec<String>) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > NORMALIZATION_WARNING {
        warnings.push(format!("{what} normalized (norm was {norm})"));
    }
}

fn unit(v: &[f64], what: &str, warnings: &mut Vec<String>) -> Result<UnitVector> {
    note_normalization(v, what, warnings);
    UnitVector::from_slice(v)
}

/// A cone given inline or as a path to a cone file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ConeRef {
    Inline(ConeSpec),
    Path(PathBuf),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FacetSpec {
    pub u: Vec<f64>,
    pub h: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeSpec {
    pub cone: ConeRef,
    pub facets: Vec<FacetSpec>,
}

impl PolytopeSpec {
    pub fn from_polytope(p: &CPolytope) -> PolytopeSpec {
        PolytopeSpec {
            cone: ConeRef::Inline(ConeSpec::from_cone(p.cone())),
            facets: p.facets().iter().map(|f| FacetSpec { u: f.u.as_slice().to_vec(), h: f.h }).collect(),
        }
    }

    /// Builds the polytope; cone paths are resolved against `base`.
    pub fn build(&self, base: &Path) -> Result<Loaded<CPolytope>> {
        let Loaded { value: cone, mut warnings } = match &self.cone {
            ConeRef::Inline(spec) => spec.build()?,
            ConeRef::Path(path) => load_cone(&base.join(path))?,
        };
        let facets = self
            .facets
            .iter()
            .enumerate()
            .map(|(i, f)| Ok(Facet { u: unit(&f.u, &format!("facet {i} normal"), &mut warnings)?, h: f.h }))
            .collect::<Result<Vec<_>>>()?;
        Ok(Loaded { value: CPolytope::new(cone, facets)?, warnings })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSpec {
    pub u: Vec<f64>,
    pub mass: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureSpec {
    pub domain: Domain,
    pub atoms: Vec<AtomSpec>,
}

impl MeasureSpec {
    pub fn from_measure(m: &DiscreteMeasure) -> MeasureSpec {
        MeasureSpec {
            domain: m.domain,
            atoms: m
                .atoms
                .iter()
                .map(|a| AtomSpec { u: a.u.as_slice().to_vec(), mass: a.mass, error: a.error })
                .collect(),
        }
    }

    pub fn build(&self) -> Result<Loaded<DiscreteMeasure>> {
        let mut warnings = Vec::new();
        let atoms = self
            .atoms
            .iter()
            .enumerate()
            .map(|(i, a)| {
                Ok(Atom { u: unit(&a.u, &format!("atom {i} direction"), &mut warnings)?, mass: a.mass, error: a.error })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Loaded { value: DiscreteMeasure::new(self.domain, atoms)?, warnings })
    }
}

/// `solution.json`: the polytope plus solver diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionSpec {
    #[serde(flatten)]
    pub polytope: PolytopeSpec,
    pub tau1: f64,
    pub iterations: usize,
    pub converged: bool,
    pub residuals: Vec<f64>,
    pub objective_trace: Vec<f64>,
    pub achieved: MeasureSpec,
    pub up_to_dilation: bool,
    pub b_distance: f64,
    pub warnings: Vec<String>,
}

impl SolutionSpec {
    pub fn from_solution(s: &Solution) -> SolutionSpec {
        SolutionSpec {
            polytope: PolytopeSpec::from_polytope(&s.polytope),
            tau1: s.tau1,
            iterations: s.iterations,
            converged: s.converged,
            residuals: s.residuals.clone(),
            objective_trace: s.objective_trace.clone(),
            achieved: MeasureSpec::from_measure(&s.achieved),
            up_to_dilation: s.up_to_dilation,
            b_distance: s.b_distance,
            warnings: s.warnings.clone(),
        }
    }
}

/// Parses JSON, reporting the field path, line and column on failure.
pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        Error::Invalid(format!("JSON error at field `{path}` (line {}, column {}): {inner}", inner.line(), inner.column()))
    })
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

/// Pretty JSON with a trailing newline. Floats are written in the shortest
/// form that parses back to the same value.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn load_cone(path: &Path) -> Result<Loaded<Cone>> {
    parse::<ConeSpec>(&read(path)?)?.build()
}

/// Loads a polytope file. A polytope file may also be a solution file.
pub fn load_polytope(path: &Path) -> Result<Loaded<CPolytope>> {
    let value: serde_json::Value = parse(&read(path)?)?;
    let spec = PolytopeSpec {
        cone: parse(&value.get("cone").map(|c| c.to_string()).unwrap_or_else(|| "null".into()))
            .map_err(|e| Error::Invalid(format!("cone: {e}")))?,
        facets: parse(&value.get("facets").map(|c| c.to_string()).unwrap_or_else(|| "null".into()))
            .map_err(|e| Error::Invalid(format!("facets: {e}")))?,
    };
    spec.build(path.parent().unwrap_or(Path::new(".")))
}

pub fn load_measure(path: &Path) -> Result<Loaded<DiscreteMeasure>> {
    parse::<MeasureSpec>(&read(path)?)?.build()
}

pub fn cone_json(cone: &Cone) -> Result<String> {
    to_json(&ConeSpec::from_cone(cone))
}

pub fn polytope_json(p: &CPolytope) -> Result<String> {
    to_json(&PolytopeSpec::from_polytope(p))
}

pub fn measure_json(m: &DiscreteMeasure) -> Result<String> {
    to_json(&MeasureSpec::from_measure(m))
}

pub fn solution_json(s: &Solution) -> Result<String> {
    to_json(&SolutionSpec::from_solution(s))
}
