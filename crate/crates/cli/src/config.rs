//! Experiment descriptors.
//!
//! A config is one JSON object: `{"experiment": name, ...params}` plus the
//! optional keys `seed` and `output`.

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Context, Result};
use hyperlab_core::cohomology::FiniteModule;
use hyperlab_core::group::descriptor::{finite_group, named_group, parse_group};
use hyperlab_core::integer_rep::examples;
use hyperlab_core::isolation::standard_candidates;
use hyperlab_core::lie::{named_algebra, parse_lie};
use hyperlab_core::linalg::IntMatrix;
use hyperlab_core::{
    conjugate_subgroup, Element, FiniteGroup, IntegerRep, LieAlgebraData, SamplableGroup, SubgroupHandle,
};
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const EXPERIMENTS: [(&str, &str); 9] = [
    ("approximate", "grid subgroups (C_n)^m x| F converging to a torus-by-finite group"),
    ("isolate", "isolation verdicts from the derived subalgebra"),
    ("mz-probe", "conjugacy search between two subgroups"),
    ("turing-gap", "distance from the finite subgroups of SO(3) to SO(3)"),
    ("myers", "Ricci lower bound, Myers diameter and exponential coverage"),
    ("h2-table", "second cohomology of finite modules"),
    ("minimal-classes", "minimality of integral representations"),
    ("example-3-1", "G_alpha versus G_beta: lattice quotients and centers"),
    ("functorial-probe", "openness probe for the induced map on subgroups"),
];

#[derive(Debug)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub seed: Option<u64>,
    pub output: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "experiment", rename_all = "kebab-case")]
pub enum Experiment {
    Approximate(ApproximateParams),
    Isolate(IsolateParams),
    MzProbe(MzProbeParams),
    TuringGap(TuringGapParams),
    Myers(MyersParams),
    H2Table(H2TableParams),
    MinimalClasses(MinimalClassesParams),
    #[serde(rename = "example-3-1")]
    AlphaBetaExample(NoParams),
    FunctorialProbe(FunctorialProbeParams),
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Approximate(_) => "approximate",
            Experiment::Isolate(_) => "isolate",
            Experiment::MzProbe(_) => "mz-probe",
            Experiment::TuringGap(_) => "turing-gap",
            Experiment::Myers(_) => "myers",
            Experiment::H2Table(_) => "h2-table",
            Experiment::MinimalClasses(_) => "minimal-classes",
            Experiment::AlphaBetaExample(_) => "example-3-1",
            Experiment::FunctorialProbe(_) => "functorial-probe",
        }
    }
}

pub fn parse(bytes: &[u8]) -> Result<ExperimentConfig> {
    let value: Value = serde_json::from_slice(bytes).context("config is not valid JSON")?;
    let Value::Object(mut map) = value else { bail!("config must be a JSON object") };
    let seed = match map.remove("seed") {
        None => None,
        Some(v) => Some(v.as_u64().ok_or_else(|| anyhow!("`seed` must be a non-negative integer"))?),
    };
    let output = match map.remove("output") {
        None => None,
        Some(Value::String(s)) => Some(s),
        Some(_) => bail!("`output` must be a string"),
    };
    let tag = map.get("experiment").cloned();
    let experiment = Experiment::deserialize(Value::Object(map)).map_err(|e| match tag {
        Some(Value::String(t)) => anyhow!("experiment `{t}`: {e}"),
        _ => anyhow!("{e}"),
    })?;
    Ok(ExperimentConfig { experiment, seed, output })
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoParams {}

/// A built-in name or an inline descriptor.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum Spec {
    Name(String),
    Inline(Value),
}

impl Spec {
    pub fn label(&self) -> String {
        match self {
            Spec::Name(n) => n.clone(),
            Spec::Inline(v) => v.get("name").and_then(Value::as_str).map_or_else(|| "inline".to_owned(), str::to_owned),
        }
    }

    pub fn group(&self) -> Result<SamplableGroup> {
        Ok(match self {
            Spec::Name(n) => named_group(n)?,
            Spec::Inline(v) => parse_group(&v.to_string())?,
        })
    }

    pub fn algebra(&self) -> Result<LieAlgebraData> {
        Ok(match self {
            Spec::Name(n) => named_algebra(n)?,
            Spec::Inline(v) => parse_lie(&v.to_string())?,
        })
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApproximateParams {
    pub group: Spec,
    pub ns: Vec<i64>,
    #[serde(default = "default_approx_eps")]
    pub eps: f64,
}

fn default_approx_eps() -> f64 {
    0.004
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IsolateParams {
    #[serde(default)]
    pub algebra: Option<Spec>,
    #[serde(default)]
    pub algebras: Option<Vec<Spec>>,
}

impl IsolateParams {
    pub fn specs(&self) -> Vec<Spec> {
        match (&self.algebra, &self.algebras) {
            (None, None) => ["so3", "su2", "su2+su2", "R^1", "R^2", "R^3", "u2", "so3+R"]
                .iter()
                .map(|s| Spec::Name((*s).to_owned()))
                .collect(),
            (a, list) => a.iter().cloned().chain(list.iter().flatten().cloned()).collect(),
        }
    }
}

/// Subgroups of an ambient group.
#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SubgroupSpec {
    Full,
    Trivial,
    /// `(C_n)^m x| F` inside a torus or torus-by-finite group.
    Grid { n: i64 },
    /// A finite rotation group by name: `C<n>`, `D<n>`, `T`, `O`, `I`.
    Rotations { name: String },
    /// `g H g⁻¹` with `g` given in chart coordinates.
    Conjugate {
        inner: Box<SubgroupSpec>,
        #[serde(default)]
        component: usize,
        coords: Vec<f64>,
    },
}

impl SubgroupSpec {
    pub fn label(&self) -> String {
        match self {
            SubgroupSpec::Full => "full".into(),
            SubgroupSpec::Trivial => "trivial".into(),
            SubgroupSpec::Grid { n } => format!("C{n}"),
            SubgroupSpec::Rotations { name } => name.clone(),
            SubgroupSpec::Conjugate { inner, component, coords } => format!("{}^g({component};{coords:?})", inner.label()),
        }
    }

    pub fn build(&self, parent: &SamplableGroup) -> Result<SubgroupHandle> {
        Ok(match self {
            SubgroupSpec::Full => SubgroupHandle::full(parent.clone()),
            SubgroupSpec::Trivial => SubgroupHandle::trivial(parent.clone()),
            SubgroupSpec::Grid { n } => {
                if !matches!(parent, SamplableGroup::Torus(_) | SamplableGroup::Semidirect(_)) || *n < 1 {
                    bail!("grid subgroup C{n} needs a torus or torus-by-finite ambient and n >= 1");
                }
                SubgroupHandle::cyclic_grid(parent.clone(), *n)
            }
            SubgroupSpec::Rotations { name } => {
                let elements = rotation_group(name)?;
                let wrap: fn(hyperlab_core::Rotation) -> Element = match parent {
                    SamplableGroup::So3 => Element::Rotation,
                    _ => bail!("rotation group `{name}` needs the ambient SO3"),
                };
                SubgroupHandle::finite(parent.clone(), elements.into_iter().map(wrap).collect())
            }
            SubgroupSpec::Conjugate { inner, component, coords } => {
                if coords.len() != parent.chart_dim() || *component >= parent.chart_components() {
                    bail!(
                        "conjugator for {} needs {} chart coordinates and a component below {}",
                        parent.name(),
                        parent.chart_dim(),
                        parent.chart_components()
                    );
                }
                let g = parent.from_chart(*component, coords);
                conjugate_subgroup(&inner.build(parent)?, &g)?
            }
        })
    }
}

fn rotation_group(name: &str) -> Result<Vec<hyperlab_core::Rotation>> {
    standard_candidates()
        .into_iter()
        .find(|c| c.name == name)
        .map(|c| c.elements)
        .ok_or_else(|| anyhow!("unknown rotation group `{name}`; use C1..C60, D1..D30, T, O or I"))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MzProbeParams {
    #[serde(default = "default_ambient")]
    pub ambient: Spec,
    pub h: SubgroupSpec,
    pub k: SubgroupSpec,
    #[serde(default = "default_budget")]
    pub budget: usize,
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_search_eps")]
    pub eps: f64,
}

fn default_ambient() -> Spec {
    Spec::Name("SO3".into())
}
fn default_budget() -> usize {
    200
}
fn default_restarts() -> usize {
    8
}
fn default_tol() -> f64 {
    1e-3
}
fn default_search_eps() -> f64 {
    0.1
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TuringGapParams {
    #[serde(default = "default_turing_mesh")]
    pub mesh: f64,
    /// Names from the standard list; all of them when absent.
    #[serde(default)]
    pub candidates: Option<Vec<String>>,
}

fn default_turing_mesh() -> f64 {
    0.02
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MyersParams {
    pub algebra: Spec,
    #[serde(default = "default_ambient")]
    pub group: Spec,
    #[serde(default = "default_coverage_mesh")]
    pub mesh: f64,
    /// Radius to test instead of the Myers bound.
    #[serde(default)]
    pub delta: Option<f64>,
}

fn default_coverage_mesh() -> f64 {
    0.05
}

/// A finite group by name (`C<n>`, `D<n>`, `S3`, `V4`) or by table.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum FiniteGroupSpec {
    Name(String),
    Table {
        #[serde(default)]
        elements: Option<Vec<String>>,
        table: Vec<Vec<String>>,
    },
}

impl FiniteGroupSpec {
    pub fn build(&self) -> Result<FiniteGroup> {
        match self {
            FiniteGroupSpec::Table { elements, table } => Ok(finite_group(elements.as_deref(), table)?),
            FiniteGroupSpec::Name(name) => {
                let order = |s: &str| s.parse::<usize>().ok().filter(|&n| (1..=60).contains(&n));
                match name.as_str() {
                    "S3" => Ok(FiniteGroup::symmetric3()),
                    "V4" => Ok(FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2))),
                    _ => {
                        if let Some(n) = name.strip_prefix('C').and_then(order) {
                            Ok(FiniteGroup::cyclic(n))
                        } else if let Some(n) = name.strip_prefix('D').and_then(order) {
                            Ok(FiniteGroup::dihedral(n))
                        } else {
                            bail!("unknown finite group `{name}`")
                        }
                    }
                }
            }
        }
    }
}

/// `element id → matrix` on generators.
fn generator_images(group: &FiniteGroup, generators: &BTreeMap<String, Vec<Vec<i64>>>) -> Result<Vec<(usize, IntMatrix)>> {
    generators
        .iter()
        .map(|(id, rows)| {
            let g = group.index_of(id).ok_or_else(|| anyhow!("unknown element `{id}`; ids are {:?}", group.ids()))?;
            if rows.is_empty() || rows.iter().any(|r| r.len() != rows.len()) {
                bail!("matrix for `{id}` is not square");
            }
            Ok((g, IntMatrix::from_rows(rows)))
        })
        .collect()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSpec {
    #[serde(default)]
    pub name: Option<String>,
    pub group: FiniteGroupSpec,
    pub factors: Vec<i64>,
    #[serde(default)]
    pub generators: BTreeMap<String, Vec<Vec<i64>>>,
}

impl ModuleSpec {
    pub fn build(&self) -> Result<(String, FiniteModule)> {
        let group = self.group.build()?;
        let images = generator_images(&group, &self.generators)?;
        let module = FiniteModule::from_generators(group, self.factors.clone(), &images)?;
        let name = self.name.clone().unwrap_or_else(|| format!("{:?}", self.factors));
        Ok((name, module))
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct H2TableParams {
    #[serde(default)]
    pub modules: Option<Vec<ModuleSpec>>,
}

impl H2TableParams {
    pub fn modules(&self) -> Result<Vec<(String, FiniteModule)>> {
        match &self.modules {
            Some(list) => list.iter().map(ModuleSpec::build).collect(),
            None => default_modules(),
        }
    }
}

fn default_modules() -> Result<Vec<(String, FiniteModule)>> {
    let c2 = FiniteGroup::cyclic(2);
    let swap = IntMatrix::from_rows(&[[0, 1], [1, 0]]);
    Ok(vec![
        ("C2 on Z2".into(), FiniteModule::trivial(c2.clone(), vec![2])?),
        ("C2 on Z4 by sign".into(), FiniteModule::from_generators(c2.clone(), vec![4], &[(1, IntMatrix::from_rows(&[[-1]]))])?),
        ("C2 on Z3^2 by swap".into(), FiniteModule::from_generators(c2.clone(), vec![3, 3], &[(1, swap)])?),
        ("C2 on Z4^2 by alpha".into(), FiniteModule::new(c2.clone(), vec![4, 4], examples::alpha().matrices().to_vec())?),
        ("C2 on Z4^2 by beta".into(), FiniteModule::new(c2, vec![4, 4], examples::beta().matrices().to_vec())?),
        ("C3 on Z3".into(), FiniteModule::trivial(FiniteGroup::cyclic(3), vec![3])?),
        ("V4 on Z2".into(), FiniteModule::trivial(FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2)), vec![2])?),
        ("S3 on Z3".into(), FiniteModule::trivial(FiniteGroup::symmetric3(), vec![3])?),
    ])
}

/// A built-in representation (`alpha`, `beta`, `quarter_turn`, `sign`,
/// `circle`) or one given on generators.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum RepSpec {
    Name(String),
    Custom {
        #[serde(default)]
        name: Option<String>,
        group: FiniteGroupSpec,
        generators: BTreeMap<String, Vec<Vec<i64>>>,
    },
}

impl RepSpec {
    pub fn build(&self) -> Result<(String, IntegerRep)> {
        match self {
            RepSpec::Name(n) => {
                let rep = match n.as_str() {
                    "alpha" => examples::alpha(),
                    "beta" => examples::beta(),
                    "quarter_turn" => examples::quarter_turn(),
                    "sign" => examples::sign(),
                    "circle" => examples::circle(),
                    _ => bail!("unknown representation `{n}`"),
                };
                Ok((n.clone(), rep))
            }
            RepSpec::Custom { name, group, generators } => {
                let group = group.build()?;
                let images = generator_images(&group, generators)?;
                if images.is_empty() {
                    bail!("representation needs at least one generator image");
                }
                Ok((name.clone().unwrap_or_else(|| "custom".into()), IntegerRep::from_generators(group, &images)?))
            }
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MinimalClassesParams {
    #[serde(default)]
    pub reps: Option<Vec<RepSpec>>,
}

impl MinimalClassesParams {
    pub fn reps(&self) -> Result<Vec<(String, IntegerRep)>> {
        match &self.reps {
            Some(list) => list.iter().map(RepSpec::build).collect(),
            None => ["quarter_turn", "sign", "alpha", "beta"].iter().map(|n| RepSpec::Name((*n).into()).build()).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum MapKind {
    /// `T² → T`, first coordinate.
    TorusProjection,
    /// `SU(2) → SO(3)`.
    DoubleCover,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Hit {
    /// Chart coordinates of the centre in the domain.
    pub center: Vec<f64>,
    pub radius: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorialProbeParams {
    #[serde(default = "default_map")]
    pub map: MapKind,
    #[serde(default)]
    pub eps: Option<f64>,
    #[serde(default)]
    pub hits: Option<Vec<Hit>>,
    /// Subgroups of the codomain.
    #[serde(default)]
    pub battery: Option<Vec<SubgroupSpec>>,
}

fn default_map() -> MapKind {
    MapKind::TorusProjection
}
