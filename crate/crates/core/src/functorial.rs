//! Surjective homomorphisms between samplable groups and their action on
//! compact subgroups: images, preimages and the openness probe.

use std::collections::HashSet;
use std::sync::Arc;

use num_rational::Rational64;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::group::{Element, GroupError, Quat, Realization, SamplableGroup, SemidirectGroup, SubgroupHandle, TorusPoint};
use crate::hyperspace::{hausdorff_distance, vietoris_contains, Ball, HausdorffEstimate, Region, SampleSet, VietorisNbhd};
use crate::integer_rep::{RationalLattice, RepError};
use crate::linalg::{IntMatrix, RatMatrix};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FunctorError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error("invalid homomorphism: {0}")]
    InvalidRule(String),
}

#[derive(Clone, Debug)]
pub enum HomRule {
    Identity,
    /// `𝕋ᵐ → 𝕋ᵏ`, keeping the listed coordinates.
    TorusProjection { coords: Vec<usize> },
    /// `𝕋ᵐ → 𝕋ᵐ/(Λ/ℤᵐ) ≅ 𝕋ᵐ`, `x ↦ C⁻¹x`.
    TorusLatticeQuotient { lattice: RationalLattice, c_inv: IntMatrix },
    /// `(t, g) ↦ (C⁻¹t, φ(g))` for an invariant lattice and a surjection
    /// `φ` of the finite parts.
    SemidirectQuotient { lattice: RationalLattice, c_inv: IntMatrix, f_map: Vec<usize> },
    /// The double cover SU(2) → SO(3).
    DoubleCover,
    /// `second ∘ first`.
    Composite(Arc<GroupHom>, Arc<GroupHom>),
}

/// A surjective continuous homomorphism.
#[derive(Clone, Debug)]
pub struct GroupHom {
    domain: SamplableGroup,
    codomain: SamplableGroup,
    rule: HomRule,
}

fn lattice_c_inv(lattice: &RationalLattice) -> IntMatrix {
    lattice.column_matrix().inverse().and_then(|m| m.to_int()).expect("lattice contains ℤᵐ")
}

impl GroupHom {
    pub fn identity(g: SamplableGroup) -> Self {
        Self { domain: g.clone(), codomain: g, rule: HomRule::Identity }
    }

    pub fn torus_projection(m: usize, coords: Vec<usize>) -> Result<Self, FunctorError> {
        let mut sorted = coords.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if coords.is_empty() || sorted.len() != coords.len() || sorted.last().is_some_and(|&c| c >= m) {
            return Err(FunctorError::InvalidRule(format!("coordinates {coords:?} of T^{m}")));
        }
        Ok(Self {
            domain: SamplableGroup::Torus(m),
            codomain: SamplableGroup::Torus(coords.len()),
            rule: HomRule::TorusProjection { coords },
        })
    }

    pub fn torus_lattice_quotient(lattice: RationalLattice) -> Self {
        let m = lattice.dim();
        let c_inv = lattice_c_inv(&lattice);
        Self {
            domain: SamplableGroup::Torus(m),
            codomain: SamplableGroup::Torus(m),
            rule: HomRule::TorusLatticeQuotient { lattice, c_inv },
        }
    }

    /// Checks `C⁻¹·A(g)·C = B(φ(g))` exactly and that `φ` is a surjective
    /// homomorphism.
    pub fn semidirect_quotient(
        domain: Arc<SemidirectGroup>,
        codomain: Arc<SemidirectGroup>,
        lattice: RationalLattice,
        f_map: Vec<usize>,
    ) -> Result<Self, FunctorError> {
        let (f, f2) = (domain.quotient(), codomain.quotient());
        if domain.dim() != codomain.dim() || lattice.dim() != domain.dim() {
            return Err(FunctorError::InvalidRule("dimension mismatch".into()));
        }
        if !f.is_homomorphism_to(f2, &f_map) || f2.elements().any(|h| !f_map.contains(&h)) {
            return Err(FunctorError::InvalidRule("finite part is not a surjective homomorphism".into()));
        }
        let induced = crate::integer_rep::invariant_lattice_quotient(domain.rep(), &lattice)?;
        for g in f.elements() {
            if induced.matrix(g) != codomain.action(f_map[g]) {
                return Err(FunctorError::InvalidRule(format!(
                    "induced action of `{}` does not match the codomain",
                    f.id(g)
                )));
            }
        }
        let c_inv = lattice_c_inv(&lattice);
        Ok(Self {
            domain: SamplableGroup::Semidirect(domain),
            codomain: SamplableGroup::Semidirect(codomain),
            rule: HomRule::SemidirectQuotient { lattice, c_inv, f_map },
        })
    }

    pub fn double_cover() -> Self {
        Self { domain: SamplableGroup::Su2, codomain: SamplableGroup::So3, rule: HomRule::DoubleCover }
    }

    pub fn compose(first: Arc<GroupHom>, second: Arc<GroupHom>) -> Result<Self, FunctorError> {
        if first.codomain.name() != second.domain.name() {
            return Err(FunctorError::InvalidRule("codomain and domain differ".into()));
        }
        Ok(Self {
            domain: first.domain.clone(),
            codomain: second.codomain.clone(),
            rule: HomRule::Composite(first, second),
        })
    }

    pub fn domain(&self) -> &SamplableGroup {
        &self.domain
    }

    pub fn codomain(&self) -> &SamplableGroup {
        &self.codomain
    }

    pub fn rule(&self) -> &HomRule {
        &self.rule
    }

    pub fn apply(&self, x: &Element) -> Result<Element, GroupError> {
        if !self.domain.contains(x) {
            return Err(GroupError::ForeignElement(self.domain.name()));
        }
        Ok(match (&self.rule, x) {
            (HomRule::Identity, _) => x.clone(),
            (HomRule::TorusProjection { coords }, Element::Torus(t)) => {
                Element::Torus(TorusPoint::new(coords.iter().map(|&i| t.coords()[i]).collect()))
            }
            (HomRule::TorusLatticeQuotient { c_inv, .. }, Element::Torus(t)) => Element::Torus(t.act(c_inv)),
            (HomRule::SemidirectQuotient { c_inv, f_map, .. }, Element::Semidirect(t, g)) => {
                Element::Semidirect(t.act(c_inv), f_map[*g])
            }
            (HomRule::DoubleCover, Element::Spin(q)) => Element::Rotation(q.to_rotation()),
            (HomRule::Composite(f, g), _) => g.apply(&f.apply(x)?)?,
            _ => unreachable!("membership checked"),
        })
    }

    /// Upper bound on the Lipschitz constant for the chosen metrics.
    pub fn lipschitz(&self) -> f64 {
        match &self.rule {
            HomRule::Identity | HomRule::TorusProjection { .. } => 1.0,
            HomRule::TorusLatticeQuotient { c_inv, .. } => c_inv.frobenius_norm().max(1.0),
            HomRule::SemidirectQuotient { c_inv, .. } => c_inv.frobenius_norm().max(1.0),
            // ‖R(p) − R(q)‖ = 2√2 sin(θ/2) against √2‖p − q‖ = 2√2 sin(θ/4)
            HomRule::DoubleCover => 2.0,
            HomRule::Composite(f, g) => f.lipschitz() * g.lipschitz(),
        }
    }

    /// A factor `κ ≤ 1` with `B(f(x), κr) ⊆ f(B(x, r))` for all `x`, `r`.
    pub fn openness_factor(&self) -> f64 {
        match &self.rule {
            HomRule::Identity | HomRule::TorusProjection { .. } | HomRule::DoubleCover => 1.0,
            HomRule::TorusLatticeQuotient { lattice, .. } | HomRule::SemidirectQuotient { lattice, .. } => {
                let c = lattice.column_matrix().to_f64_rows();
                let norm = c.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
                (1.0 / norm).min(1.0)
            }
            HomRule::Composite(f, g) => f.openness_factor() * g.openness_factor(),
        }
    }

    pub fn has_finite_kernel(&self) -> bool {
        match &self.rule {
            HomRule::TorusProjection { coords } => {
                matches!(self.domain, SamplableGroup::Torus(m) if m == coords.len())
            }
            HomRule::Composite(f, g) => f.has_finite_kernel() && g.has_finite_kernel(),
            _ => true,
        }
    }

    /// Samples of `ker f` with mesh at most `eps`.
    pub fn kernel_samples(&self, eps: f64) -> Result<SampleSet, GroupError> {
        match &self.rule {
            HomRule::Identity => Ok(SampleSet::exact(vec![self.domain.identity()])),
            HomRule::TorusProjection { coords } => {
                let SamplableGroup::Torus(m) = self.domain else { unreachable!() };
                let rest: Vec<usize> = (0..m).filter(|i| !coords.contains(i)).collect();
                if rest.is_empty() {
                    return Ok(SampleSet::exact(vec![self.domain.identity()]));
                }
                let net = SamplableGroup::Torus(rest.len()).eps_net(eps)?;
                let pts = net
                    .points()
                    .iter()
                    .map(|p| {
                        let Element::Torus(t) = p else { unreachable!() };
                        let mut c = vec![Rational64::from_integer(0); m];
                        for (k, &i) in rest.iter().enumerate() {
                            c[i] = t.coords()[k];
                        }
                        Element::Torus(TorusPoint::new(c))
                    })
                    .collect();
                Ok(SampleSet::new(pts, net.mesh()))
            }
            HomRule::TorusLatticeQuotient { lattice, .. } => {
                Ok(SampleSet::exact(lattice_points(lattice).into_iter().map(Element::Torus).collect()))
            }
            HomRule::SemidirectQuotient { lattice, f_map, .. } => {
                let SamplableGroup::Semidirect(g) = &self.domain else { unreachable!() };
                let e2 = match &self.codomain {
                    SamplableGroup::Semidirect(h) => h.quotient().identity(),
                    _ => unreachable!(),
                };
                let lam = lattice_points(lattice);
                let pts = g
                    .quotient()
                    .elements()
                    .filter(|&x| f_map[x] == e2)
                    .flat_map(|x| lam.iter().map(move |t| Element::Semidirect(t.clone(), x)))
                    .collect();
                Ok(SampleSet::exact(pts))
            }
            HomRule::DoubleCover => Ok(SampleSet::exact(vec![Element::Spin(Quat::IDENTITY), Element::Spin(Quat::IDENTITY.neg())])),
            HomRule::Composite(..) => preimage_samples(self, &SubgroupHandle::trivial(self.codomain.clone()), eps),
        }
    }

    /// One preimage of `y`.
    pub fn lift_point(&self, y: &Element) -> Result<Element, GroupError> {
        if !self.codomain.contains(y) {
            return Err(GroupError::ForeignElement(self.codomain.name()));
        }
        Ok(match (&self.rule, y) {
            (HomRule::Identity, _) => y.clone(),
            (HomRule::TorusProjection { coords }, Element::Torus(t)) => {
                let SamplableGroup::Torus(m) = self.domain else { unreachable!() };
                let mut c = vec![Rational64::from_integer(0); m];
                for (k, &i) in coords.iter().enumerate() {
                    c[i] = t.coords()[k];
                }
                Element::Torus(TorusPoint::new(c))
            }
            (HomRule::TorusLatticeQuotient { lattice, .. }, Element::Torus(t)) => Element::Torus(apply_columns(lattice, t)),
            (HomRule::SemidirectQuotient { lattice, f_map, .. }, Element::Semidirect(t, h)) => {
                let g = f_map.iter().position(|x| x == h).expect("surjective");
                Element::Semidirect(apply_columns(lattice, t), g)
            }
            (HomRule::DoubleCover, Element::Rotation(r)) => Element::Spin(r.to_quat()),
            (HomRule::Composite(f, g), _) => f.lift_point(&g.lift_point(y)?)?,
            _ => unreachable!("membership checked"),
        })
    }
}

/// `x ↦ C·x` with exact rational arithmetic, reduced mod ℤᵐ.
fn apply_columns(lattice: &RationalLattice, t: &TorusPoint) -> TorusPoint {
    let c = lattice.column_matrix();
    let x: Vec<crate::linalg::Q> = t
        .coords()
        .iter()
        .map(|r| crate::linalg::q_frac(*r.numer(), *r.denom()))
        .collect();
    let y = c.mul_vec(&x);
    TorusPoint::new(
        y.iter()
            .map(|v| {
                let n = v.numer().to_i64().expect("small numerator");
                let d = v.denom().to_i64().expect("small denominator");
                Rational64::new(n, d)
            })
            .collect(),
    )
}

/// The finite group `Λ/ℤᵐ` as torus points.
fn lattice_points(lattice: &RationalLattice) -> Vec<TorusPoint> {
    let m = lattice.dim();
    let gens: Vec<TorusPoint> = (0..m)
        .map(|i| {
            let row = lattice.basis().row(i);
            TorusPoint::new(
                row.iter()
                    .map(|v| Rational64::new(v.numer().to_i64().expect("small"), v.denom().to_i64().expect("small")))
                    .collect(),
            )
        })
        .collect();
    let mut pts = vec![TorusPoint::zero(m)];
    let mut i = 0;
    while i < pts.len() {
        for g in &gens {
            let y = pts[i].add(g);
            if !pts.contains(&y) {
                pts.push(y);
            }
        }
        i += 1;
    }
    pts.sort();
    pts
}

/// Drops repeated points. Exact elements compare by value; floating ones by
/// coordinates rounded to the group tolerance, so near-duplicates on either
/// side of a rounding boundary may both survive.
fn dedup(points: Vec<Element>, exact: bool) -> Vec<Element> {
    let round = |xs: &[f64]| -> Vec<i64> { xs.iter().map(|x| (x / crate::group::TAU_GROUP).round() as i64).collect() };
    let mut seen: HashSet<(String, Vec<i64>)> = HashSet::with_capacity(points.len());
    points
        .into_iter()
        .filter(|p| {
            let key = match (exact, p) {
                (false, Element::Rotation(r)) => (String::new(), round(&r.0)),
                (false, Element::Spin(q)) => (String::new(), round(&q.0)),
                _ => (p.label(), Vec::new()),
            };
            seen.insert(key)
        })
        .collect()
}

/// `f(K)`. The identity rule returns `K` itself.
pub fn pushforward(f: &Arc<GroupHom>, k: &SubgroupHandle) -> Result<SubgroupHandle, FunctorError> {
    if k.parent.name() != f.domain.name() {
        return Err(FunctorError::InvalidRule("subgroup does not live in the domain".into()));
    }
    if matches!(f.rule, HomRule::Identity) {
        return Ok(k.clone());
    }
    Ok(SubgroupHandle {
        parent: f.codomain.clone(),
        realization: Realization::Image { hom: f.clone(), source: Box::new(k.clone()) },
    })
}

/// Samples of `f(K)`: `mesh ≤ lipschitz(f)·mesh(K) ≤ eps`.
pub fn image_samples(f: &GroupHom, source: &SubgroupHandle, eps: f64) -> Result<SampleSet, GroupError> {
    let lip = f.lipschitz();
    let s = source.sample(eps / lip)?;
    let pts = s.points().iter().map(|x| f.apply(x)).collect::<Result<Vec<_>, _>>()?;
    Ok(SampleSet::new(dedup(pts, f.codomain.is_exact()), s.mesh() * lip))
}

/// `f⁻¹(L)`.
pub fn lift_preimage(f: &Arc<GroupHom>, l: &SubgroupHandle) -> Result<SubgroupHandle, FunctorError> {
    if l.parent.name() != f.codomain.name() {
        return Err(FunctorError::InvalidRule("subgroup does not live in the codomain".into()));
    }
    Ok(SubgroupHandle {
        parent: f.domain.clone(),
        realization: Realization::Preimage { hom: f.clone(), target: Box::new(l.clone()) },
    })
}

/// Samples of `f⁻¹(L)`: lifts of samples of `L` times samples of `ker f`.
/// A point of `f⁻¹(L)` is within `mesh(L)/κ` of a lift's coset (κ the
/// openness factor) and then within the kernel mesh of a sample.
pub fn preimage_samples(f: &GroupHom, target: &SubgroupHandle, eps: f64) -> Result<SampleSet, GroupError> {
    if let HomRule::Composite(first, second) = &f.rule {
        let mid = SubgroupHandle {
            parent: second.domain.clone(),
            realization: Realization::Preimage { hom: second.clone(), target: Box::new(target.clone()) },
        };
        return preimage_samples(first, &mid, eps);
    }
    let kappa = f.openness_factor();
    let distortion = f.domain.translation_distortion();
    let l = target.sample(eps * kappa / 2.0)?;
    let ker = f.kernel_samples(eps / (2.0 * distortion))?;
    let mut pts = Vec::with_capacity(l.len() * ker.len());
    for y in l.points() {
        let lifted = f.lift_point(y)?;
        for k in ker.points() {
            pts.push(f.domain.multiply(&lifted, k)?);
        }
    }
    let mesh = l.mesh() / kappa + distortion * ker.mesh();
    Ok(SampleSet::new(dedup(pts, f.domain.is_exact()), mesh))
}


#[derive(Clone, Debug, Serialize)]
pub struct CandidateVerdict {
    pub name: String,
    /// `None` when membership in the image neighbourhood is undecidable.
    pub in_image_nbhd: Option<bool>,
    pub lifted_member: Option<bool>,
    /// `d_H(f(lift), L̂)`.
    pub round_trip: HausdorffEstimate,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeReport {
    pub precondition: bool,
    pub image_radius_factor: f64,
    pub candidates: Vec<CandidateVerdict>,
    pub all_pass: bool,
}

fn image_region(f: &GroupHom, r: &Region) -> Result<Region, GroupError> {
    let kappa = f.openness_factor();
    Ok(match r {
        Region::Whole => Region::Whole,
        Region::Balls(balls) => Region::Balls(
            balls
                .iter()
                .map(|b| Ok(Ball { center: f.apply(&b.center)?, radius: b.radius * kappa }))
                .collect::<Result<_, GroupError>>()?,
        ),
    })
}

fn restrict(samples: SampleSet, u0: &Region) -> Option<SampleSet> {
    match u0 {
        Region::Whole => Some(samples),
        Region::Balls(balls) => {
            let mesh = samples.mesh();
            let kept: Vec<Element> = samples
                .points()
                .iter()
                .filter(|p| balls.iter().any(|b| p.distance(&b.center) < b.radius))
                .cloned()
                .collect();
            (!kept.is_empty()).then(|| SampleSet::new(kept, mesh))
        }
    }
}

/// Instantiates the image neighbourhood `𝒱(V₀, …, Vₙ)` with
/// `Vᵢ ⊇ B(f(c), κr)` for every ball `B(c, r)` of `Uᵢ`, and checks for each
/// candidate `L̂ ∈ 𝒱(V)` that `f⁻¹(L̂) ∩ U₀` lies in `𝒱(U)` and maps back
/// onto `L̂`.
pub fn openness_probe(
    f: &Arc<GroupHom>,
    k: &SubgroupHandle,
    nbhd: &VietorisNbhd,
    battery: &[(String, SubgroupHandle)],
    eps: f64,
) -> Result<ProbeReport, FunctorError> {
    let ks = k.sample(eps)?;
    let precondition = matches!(vietoris_contains(&ks, nbhd), Ok(Ok(c)) if c.member);
    let image = VietorisNbhd {
        u0: image_region(f, &nbhd.u0)?,
        hits: nbhd.hits.iter().map(|u| image_region(f, u)).collect::<Result<_, _>>()?,
    };
    let candidates: Vec<CandidateVerdict> = battery
        .par_iter()
        .map(|(name, l)| -> Result<CandidateVerdict, FunctorError> {
            let ls = l.sample(eps)?;
            let in_image_nbhd = match vietoris_contains(&ls, &image) {
                Ok(Ok(c)) => Some(c.member),
                Ok(Err(_)) => None,
                Err(_) => Some(false),
            };
            let lift = lift_preimage(f, l)?;
            let lifted = lift.sample(eps)?;
            let back = image_samples(f, &lift, eps)?;
            let round_trip = hausdorff_distance(&back, &ls);
            let lifted_member = restrict(lifted, &nbhd.u0).and_then(|s| match vietoris_contains(&s, nbhd) {
                Ok(Ok(c)) => Some(c.member),
                _ => None,
            });
            let pass = precondition
                && in_image_nbhd == Some(true)
                && lifted_member == Some(true)
                && round_trip.estimate <= round_trip.error_bound + f.codomain.tolerance();
            Ok(CandidateVerdict { name: name.clone(), in_image_nbhd, lifted_member, round_trip, pass })
        })
        .collect::<Result<_, _>>()?;
    let all_pass = precondition && candidates.iter().all(|c| c.pass);
    Ok(ProbeReport { precondition, image_radius_factor: f.openness_factor(), candidates, all_pass })
}

/// Rows of `C⁻¹` as a rational matrix, for reporting.
pub fn quotient_matrix(lattice: &RationalLattice) -> RatMatrix {
    RatMatrix::from_int(&lattice_c_inv(lattice))
}
