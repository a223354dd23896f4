use std::f64::consts::PI;
use std::sync::Arc;

use anyhow::{anyhow, bail};
use hyperlab_core::cohomology::h2;
use hyperlab_core::functorial::{openness_probe, GroupHom};
use hyperlab_core::hyperspace::{Region, VietorisNbhd};
use hyperlab_core::integer_rep::{
    examples, glz_conjugate, invariant_lattice_quotient, minimality_check, Irreducibility, DEFAULT_ENTRY_BOUND,
};
use hyperlab_core::isolation::{
    approximation_report, conjugacy_search, isolation_verdict, standard_candidates, turing_gap, IsolationReason, SearchConfig,
};
use hyperlab_core::lie::{derived_subalgebra, exp_coverage_check, myers_bound, ricci_min};
use hyperlab_core::linalg::{q, q_frac, IntMatrix};
use hyperlab_core::{build_semidirect, center_components, RationalLattice, SamplableGroup, SubgroupHandle};
use serde_json::{json, Value};

use crate::config::*;

pub enum Failure {
    /// The config is well-formed JSON but names something invalid.
    Schema(anyhow::Error),
    /// The experiment itself could not be carried out.
    Experiment(anyhow::Error),
}

trait Classify<T> {
    fn schema(self) -> Result<T, Failure>;
    fn failed(self) -> Result<T, Failure>;
}

impl<T, E: Into<anyhow::Error>> Classify<T> for Result<T, E> {
    fn schema(self) -> Result<T, Failure> {
        self.map_err(|e| Failure::Schema(e.into()))
    }
    fn failed(self) -> Result<T, Failure> {
        self.map_err(|e| Failure::Experiment(e.into()))
    }
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<(), Failure> {
    if cond {
        Ok(())
    } else {
        Err(Failure::Schema(anyhow!(msg())))
    }
}

pub enum Output {
    Table { columns: Vec<&'static str>, rows: Vec<Vec<String>> },
    Structured(Value),
}

pub fn run(experiment: &Experiment, seed: u64) -> Result<Output, Failure> {
    match experiment {
        Experiment::Approximate(p) => approximate(p),
        Experiment::Isolate(p) => isolate(p),
        Experiment::MzProbe(p) => mz_probe(p, seed),
        Experiment::TuringGap(p) => turing(p),
        Experiment::Myers(p) => myers(p),
        Experiment::H2Table(p) => h2_table(p),
        Experiment::MinimalClasses(p) => minimal_classes(p),
        Experiment::AlphaBetaExample(_) => alpha_beta_example(),
        Experiment::FunctorialProbe(p) => functorial_probe(p),
    }
}

fn approximate(p: &ApproximateParams) -> Result<Output, Failure> {
    let g = p.group.group().schema()?;
    require(!p.ns.is_empty() && p.ns.iter().all(|&n| n >= 1), || "`ns` must be a non-empty list of positive integers".into())?;
    require(p.eps > 0.0, || "`eps` must be positive".into())?;
    require(matches!(g, SamplableGroup::Torus(_) | SamplableGroup::Semidirect(_)), || {
        format!("`{}` is not a torus or torus-by-finite group", p.group.label())
    })?;
    let report = approximation_report(&g, &p.ns, p.eps).failed()?;
    let mut previous = f64::INFINITY;
    let rows = report
        .rows
        .iter()
        .map(|r| {
            let lower = r.estimate - r.error_bound;
            let decreasing = lower < previous;
            previous = lower;
            vec![
                r.n.map_or_else(String::new, |n| n.to_string()),
                r.estimate.to_string(),
                r.error_bound.to_string(),
                lower.to_string(),
                decreasing.to_string(),
            ]
        })
        .collect();
    Ok(Output::Table { columns: vec!["n", "estimate", "error_bound", "lower_bound", "decreasing"], rows })
}

fn isolate(p: &IsolateParams) -> Result<Output, Failure> {
    let specs = p.specs();
    let algebras = specs.iter().map(|s| s.algebra().map(|l| (s.label(), l))).collect::<Result<Vec<_>, _>>().schema()?;
    let rows = algebras
        .iter()
        .map(|(name, l)| {
            let v = isolation_verdict(l).failed()?;
            let codim = match v.reason {
                IsolationReason::PerfectIdentityComponent => 0,
                IsolationReason::NonPerfect { codimension, .. } => codimension,
            };
            Ok(vec![
                name.clone(),
                l.dim().to_string(),
                derived_subalgebra(l).dim.to_string(),
                v.isolated.to_string(),
                codim.to_string(),
            ])
        })
        .collect::<Result<_, Failure>>()?;
    Ok(Output::Table { columns: vec!["algebra", "dim", "derived_dim", "isolated", "codimension"], rows })
}

fn mz_probe(p: &MzProbeParams, seed: u64) -> Result<Output, Failure> {
    let ambient = p.ambient.group().schema()?;
    let h = p.h.build(&ambient).schema()?;
    let k = p.k.build(&ambient).schema()?;
    require(p.eps > 0.0 && p.tol >= 0.0 && p.budget > 0, || "`eps` must be positive, `tol` non-negative and `budget` positive".into())?;
    let config = SearchConfig { budget: p.budget, restarts: p.restarts, tol: p.tol, seed, eps: p.eps };
    let r = conjugacy_search(&h, &k, &ambient, &config).failed()?;
    Ok(Output::Structured(json!({
        "ambient": p.ambient.label(),
        "h": p.h.label(),
        "k": p.k.label(),
        "config": config,
        "status": if r.converged { "Converged" } else { "NonConverged" },
        "best_g": r.best_g.label(),
        "residual": r.residual,
        "error_bound": r.error_bound,
        "baseline": r.baseline,
        "iterations": r.iterations,
        "evaluations": r.evaluations,
        "restart": r.restart,
        "converged": r.converged,
    })))
}

fn turing(p: &TuringGapParams) -> Result<Output, Failure> {
    require(p.mesh > 0.0, || "`mesh` must be positive".into())?;
    let all = standard_candidates();
    let candidates = match &p.candidates {
        None => all,
        Some(names) => names
            .iter()
            .map(|n| all.iter().find(|c| &c.name == n).cloned().ok_or_else(|| anyhow!("unknown candidate `{n}`")))
            .collect::<Result<Vec<_>, _>>()
            .schema()?,
    };
    require(!candidates.is_empty(), || "`candidates` is empty".into())?;
    let report = turing_gap(&candidates, p.mesh).failed()?;
    let lower = report.lower_bound();
    let mut value = serde_json::to_value(&report).failed()?;
    value["lower_bound"] = json!(lower);
    value["gap_positive"] = json!(lower > 0.0);
    Ok(Output::Structured(value))
}

fn myers(p: &MyersParams) -> Result<Output, Failure> {
    let l = p.algebra.algebra().schema()?;
    let g = p.group.group().schema()?;
    require(matches!(g, SamplableGroup::So3 | SamplableGroup::Su2), || "`group` must be SO3 or SU2".into())?;
    require(p.mesh > 0.0 && p.delta.is_none_or(|d| d > 0.0), || "`mesh` and `delta` must be positive".into())?;
    let ric = ricci_min(&l).failed()?;
    let bound = myers_bound(&l).failed()?;
    let delta = p.delta.unwrap_or(bound);
    let coverage = exp_coverage_check(&g, &l, delta, p.mesh, None).failed()?;
    Ok(Output::Structured(json!({
        "algebra": p.algebra.label(),
        "group": g.name(),
        "ric_min": ric.value,
        "ric_min_exact": ric.exact.as_ref().map(ToString::to_string),
        "gram_condition": ric.gram_condition,
        "myers_bound": bound,
        "delta": delta,
        "coverage": coverage.covered,
        "coverage_report": coverage,
    })))
}

fn h2_table(p: &H2TableParams) -> Result<Output, Failure> {
    let modules = p.modules().schema()?;
    let rows = modules
        .iter()
        .map(|(name, m)| {
            let inv = h2(m).failed()?;
            let join = |xs: &[i64]| xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
            Ok(vec![
                name.clone(),
                m.group().order().to_string(),
                join(m.factors()),
                join(&inv),
                inv.iter().product::<i64>().to_string(),
            ])
        })
        .collect::<Result<_, Failure>>()?;
    Ok(Output::Table { columns: vec!["module", "group_order", "factors", "h2_invariants", "h2_order"], rows })
}

fn minimal_classes(p: &MinimalClassesParams) -> Result<Output, Failure> {
    let reps = p.reps().schema()?;
    let rows = reps
        .iter()
        .map(|(name, rep)| {
            let r = minimality_check(rep).failed()?;
            let conj = |k: i64| r.quotient_checks.iter().find(|c| c.k == k).map_or_else(String::new, |c| c.conjugate.to_string());
            let witness = match &r.irreducibility {
                Irreducibility::Reducible { witness } => witness
                    .iter()
                    .map(|v| format!("({})", v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")))
                    .collect::<Vec<_>>()
                    .join(" "),
                _ => String::new(),
            };
            Ok(vec![
                name.clone(),
                rep.dim().to_string(),
                r.faithful.to_string(),
                r.irreducibility.is_irreducible().to_string(),
                conj(2),
                conj(3),
                format!("{:?}", r.verdict),
                witness,
            ])
        })
        .collect::<Result<_, Failure>>()?;
    Ok(Output::Table {
        columns: vec!["rep", "dim", "faithful", "irreducible", "k2_conjugate", "k3_conjugate", "verdict", "witness"],
        rows,
    })
}

fn alpha_beta_example() -> Result<Output, Failure> {
    let alpha_lattice = RationalLattice::from_rows(&[vec![q(1), q(0)], vec![q_frac(1, 2), q_frac(1, 2)]]).failed()?;
    let from_alpha = invariant_lattice_quotient(&examples::alpha(), &alpha_lattice).failed()?;
    let equals_beta = from_alpha.matrices() == examples::beta().matrices();

    let beta_lattice = RationalLattice::from_rows(&[vec![q_frac(1, 2), q(0)], vec![q(0), q(1)]]).failed()?;
    let from_beta = invariant_lattice_quotient(&examples::beta(), &beta_lattice).failed()?;
    let m = from_beta.matrix(1).clone();
    let p = IntMatrix::from_rows(&[[1, 1], [0, 1]]);
    let p_inv = IntMatrix::from_rows(&[[1, -1], [0, 1]]);
    let conjugated = p.mul(&m).mul(&p_inv);
    let is_diag = p.mul(&p_inv) == IntMatrix::identity(2) && conjugated == IntMatrix::from_rows(&[[1, 0], [0, -1]]);
    let search = glz_conjugate(&from_beta, &examples::alpha(), DEFAULT_ENTRY_BOUND).failed()?;

    let ga = build_semidirect(2, examples::alpha()).failed()?;
    let gb = build_semidirect(2, examples::beta()).failed()?;
    let ca = center_components(&ga).failed()?;
    let cb = center_components(&gb).failed()?;
    let all_pass = equals_beta && is_diag && search.is_found() && ca == (1, 2) && cb == (1, 1);
    Ok(Output::Structured(json!({
        "alpha_lattice": {
            "basis": [["1", "0"], ["1/2", "1/2"]],
            "induced": from_alpha.matrix(1).to_rows(),
            "equals_beta": equals_beta,
        },
        "beta_lattice": {
            "basis": [["1/2", "0"], ["0", "1"]],
            "induced": m.to_rows(),
            "p": p.to_rows(),
            "p_induced_p_inv": conjugated.to_rows(),
            "is_diag_1_minus_1": is_diag,
            "glz_search_against_alpha": search,
        },
        "centers": {
            "G_alpha": { "dimension": ca.0, "components": ca.1 },
            "G_beta": { "dimension": cb.0, "components": cb.1 },
        },
        "all_pass": all_pass,
    })))
}

fn functorial_probe(p: &FunctorialProbeParams) -> Result<Output, Failure> {
    let (f, default_hits, default_battery, default_eps) = match p.map {
        MapKind::TorusProjection => (
            GroupHom::torus_projection(2, vec![0]).failed()?,
            vec![(vec![0.1, 0.3], 0.15), (vec![0.55, 0.8], 0.15)],
            [8, 12, 16, 32].iter().map(|&n| SubgroupSpec::Grid { n }).chain([SubgroupSpec::Full]).collect::<Vec<_>>(),
            0.05,
        ),
        MapKind::DoubleCover => (
            GroupHom::double_cover(),
            vec![(vec![0.0, 0.0, 0.0], 0.8), (vec![0.0, 0.0, PI / 2.0], 0.8)],
            ["C4", "C8", "D4", "O"]
                .iter()
                .map(|n| SubgroupSpec::Rotations { name: (*n).into() })
                .chain([SubgroupSpec::Full])
                .collect(),
            0.3,
        ),
    };
    let f = Arc::new(f);
    let eps = p.eps.unwrap_or(default_eps);
    require(eps > 0.0, || "`eps` must be positive".into())?;
    let domain = f.domain().clone();
    let hits: Vec<(Vec<f64>, f64)> = match &p.hits {
        Some(h) => h.iter().map(|h| (h.center.clone(), h.radius)).collect(),
        None => default_hits,
    };
    let regions = hits
        .iter()
        .map(|(c, r)| {
            if c.len() != domain.chart_dim() || !(*r > 0.0) {
                bail!("hit centres need {} chart coordinates and a positive radius", domain.chart_dim());
            }
            Ok(Region::ball(domain.from_chart(0, c), *r))
        })
        .collect::<anyhow::Result<Vec<_>>>()
        .schema()?;
    let specs = p.battery.clone().unwrap_or(default_battery);
    let battery = specs
        .iter()
        .map(|s| s.build(f.codomain()).map(|h| (s.label(), h)))
        .collect::<anyhow::Result<Vec<_>>>()
        .schema()?;
    let nbhd = VietorisNbhd { u0: Region::Whole, hits: regions };
    let report = openness_probe(&f, &SubgroupHandle::full(domain.clone()), &nbhd, &battery, eps).failed()?;
    Ok(Output::Structured(json!({
        "map": p.map,
        "domain": domain.name(),
        "codomain": f.codomain().name(),
        "eps": eps,
        "hits": hits.iter().map(|(c, r)| json!({"center": c, "radius": r})).collect::<Vec<_>>(),
        "report": report,
    })))
}
