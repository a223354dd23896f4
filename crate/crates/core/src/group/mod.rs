//! Compact groups realized as metric groups with ε-net generators: finite
//! groups, tori, torus-by-finite semidirect products, SO(3) and SU(2).

pub mod descriptor;
pub mod rotation;
mod semidirect;
mod subgroup;
mod torus;

use std::sync::Arc;

use rand::Rng;
use thiserror::Error;

pub use rotation::{ExpGrid, Quat, Rotation, RotationKind};
pub use semidirect::{build_semidirect, center_components, torus_grid, SemidirectGroup};
pub use subgroup::{conjugate_subgroup, Realization, SubgroupHandle};
pub use torus::{TorusPoint, CHART_DENOMINATOR};

use crate::finite::{FiniteGroup, FiniteGroupError};
use crate::hyperspace::SampleSet;
use crate::integer_rep::RepError;

/// Closure/associativity tolerance for floating-point realizations.
pub const TAU_GROUP: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GroupError {
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Finite(#[from] FiniteGroupError),
    #[error("torus dimension must be positive")]
    ZeroDimension,
    #[error("ε must be positive, got {0}")]
    NonPositiveEpsilon(f64),
    #[error("element does not belong to {0}")]
    ForeignElement(String),
    #[error("action is not faithful: kernel has {0} elements")]
    NotFaithful(usize),
    #[error("invalid group descriptor: {0}")]
    Descriptor(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

/// An element of one of the supported groups.
#[derive(Clone, Debug, PartialEq)]
pub enum Element {
    Finite(usize),
    Torus(TorusPoint),
    Semidirect(TorusPoint, usize),
    Rotation(Rotation),
    Spin(Quat),
}

impl Element {
    /// The metric of the ambient group the element belongs to. Elements of
    /// different kinds are at infinite distance.
    pub fn distance(&self, other: &Element) -> f64 {
        match (self, other) {
            (Element::Finite(a), Element::Finite(b)) => f64::from(u8::from(a != b)),
            (Element::Torus(a), Element::Torus(b)) => a.distance(b),
            (Element::Semidirect(s, g), Element::Semidirect(t, h)) => {
                if g == h {
                    s.distance(t)
                } else {
                    1.0 + (s.dim() as f64).sqrt() / 2.0
                }
            }
            (Element::Rotation(a), Element::Rotation(b)) => a.distance(b),
            (Element::Spin(a), Element::Spin(b)) => a.distance(b),
            _ => f64::INFINITY,
        }
    }

    /// Short human-readable form.
    pub fn label(&self) -> String {
        let torus = |t: &TorusPoint| {
            let parts: Vec<String> = t.coords().iter().map(|c| c.to_string()).collect();
            format!("({})", parts.join(","))
        };
        match self {
            Element::Finite(i) => format!("#{i}"),
            Element::Torus(t) => torus(t),
            Element::Semidirect(t, g) => format!("[{}, #{g}]", torus(t)),
            Element::Rotation(r) => format!("{:?}", r.0),
            Element::Spin(q) => format!("{:?}", q.0),
        }
    }
}

/// A compact metric group with an ε-net generator.
#[derive(Clone, Debug)]
pub enum SamplableGroup {
    Finite(Arc<FiniteGroup>),
    Torus(usize),
    Semidirect(Arc<SemidirectGroup>),
    So3,
    Su2,
}

impl SamplableGroup {
    pub fn name(&self) -> String {
        match self {
            SamplableGroup::Finite(f) => format!("finite(order {})", f.order()),
            SamplableGroup::Torus(m) => format!("T^{m}"),
            SamplableGroup::Semidirect(g) => format!("T^{} x| F(order {})", g.dim(), g.quotient().order()),
            SamplableGroup::So3 => "SO3".into(),
            SamplableGroup::Su2 => "SU2".into(),
        }
    }

    /// Whether elements and products are represented exactly.
    pub fn is_exact(&self) -> bool {
        !matches!(self, SamplableGroup::So3 | SamplableGroup::Su2)
    }

    pub fn tolerance(&self) -> f64 {
        if self.is_exact() {
            0.0
        } else {
            TAU_GROUP
        }
    }

    pub fn identity(&self) -> Element {
        match self {
            SamplableGroup::Finite(f) => Element::Finite(f.identity()),
            SamplableGroup::Torus(m) => Element::Torus(TorusPoint::zero(*m)),
            SamplableGroup::Semidirect(g) => {
                let (t, e) = g.identity();
                Element::Semidirect(t, e)
            }
            SamplableGroup::So3 => Element::Rotation(Rotation::IDENTITY),
            SamplableGroup::Su2 => Element::Spin(Quat::IDENTITY),
        }
    }

    pub fn contains(&self, x: &Element) -> bool {
        match (self, x) {
            (SamplableGroup::Finite(f), Element::Finite(i)) => *i < f.order(),
            (SamplableGroup::Torus(m), Element::Torus(t)) => t.dim() == *m,
            (SamplableGroup::Semidirect(g), Element::Semidirect(t, h)) => {
                t.dim() == g.dim() && *h < g.quotient().order()
            }
            (SamplableGroup::So3, Element::Rotation(r)) => {
                r.transpose().mul(r).distance(&Rotation::IDENTITY) < 1e-6
            }
            (SamplableGroup::Su2, Element::Spin(q)) => (q.chord(&Quat([0.0; 4])) - 1.0).abs() < 1e-6,
            _ => false,
        }
    }

    fn check(&self, x: &Element) -> Result<(), GroupError> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(GroupError::ForeignElement(self.name()))
        }
    }

    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element, GroupError> {
        self.check(a)?;
        self.check(b)?;
        Ok(match (self, a, b) {
            (SamplableGroup::Finite(f), Element::Finite(x), Element::Finite(y)) => Element::Finite(f.mul(*x, *y)),
            (SamplableGroup::Torus(_), Element::Torus(x), Element::Torus(y)) => Element::Torus(x.add(y)),
            (SamplableGroup::Semidirect(g), Element::Semidirect(s, x), Element::Semidirect(t, y)) => {
                let (u, z) = g.multiply(&(s.clone(), *x), &(t.clone(), *y));
                Element::Semidirect(u, z)
            }
            (SamplableGroup::So3, Element::Rotation(x), Element::Rotation(y)) => Element::Rotation(x.mul(y)),
            (SamplableGroup::Su2, Element::Spin(x), Element::Spin(y)) => Element::Spin(x.mul(y)),
            _ => unreachable!("membership checked"),
        })
    }

    pub fn invert(&self, a: &Element) -> Result<Element, GroupError> {
        self.check(a)?;
        Ok(match (self, a) {
            (SamplableGroup::Finite(f), Element::Finite(x)) => Element::Finite(f.inv(*x)),
            (SamplableGroup::Torus(_), Element::Torus(x)) => Element::Torus(x.neg()),
            (SamplableGroup::Semidirect(g), Element::Semidirect(s, x)) => {
                let (u, z) = g.invert(&(s.clone(), *x));
                Element::Semidirect(u, z)
            }
            (SamplableGroup::So3, Element::Rotation(x)) => Element::Rotation(x.transpose()),
            (SamplableGroup::Su2, Element::Spin(x)) => Element::Spin(x.conj()),
            _ => unreachable!("membership checked"),
        })
    }

    /// `g h g⁻¹`.
    pub fn conjugate(&self, g: &Element, h: &Element) -> Result<Element, GroupError> {
        self.multiply(&self.multiply(g, h)?, &self.invert(g)?)
    }

    /// Upper bound on the Lipschitz constant of every conjugation map.
    pub fn conjugation_lipschitz(&self) -> f64 {
        match self {
            SamplableGroup::Semidirect(g) => g.action_norm(),
            _ => 1.0,
        }
    }

    /// Upper bound on `d(ab, ac) / d(b, c)`.
    pub fn translation_distortion(&self) -> f64 {
        self.conjugation_lipschitz()
    }

    /// Upper bound on the diameter.
    pub fn diameter_bound(&self) -> f64 {
        match self {
            SamplableGroup::Finite(f) => f64::from(u8::from(f.order() > 1)),
            SamplableGroup::Torus(m) => (*m as f64).sqrt() / 2.0,
            SamplableGroup::Semidirect(g) => 1.0 + (g.dim() as f64).sqrt() / 2.0,
            SamplableGroup::So3 => 2.0 * 2f64.sqrt(),
            SamplableGroup::Su2 => 2.0 * 2f64.sqrt(),
        }
    }

    /// A finite ε-net with its certified mesh (`mesh ≤ ε`).
    pub fn eps_net(&self, eps: f64) -> Result<SampleSet, GroupError> {
        if eps.is_nan() || eps <= 0.0 {
            return Err(GroupError::NonPositiveEpsilon(eps));
        }
        Ok(match self {
            SamplableGroup::Finite(f) => SampleSet::exact(f.elements().map(Element::Finite).collect()),
            SamplableGroup::Torus(m) => {
                let n = torus_net_size(*m, eps);
                SampleSet::new(
                    torus_grid(*m, n).into_iter().map(Element::Torus).collect(),
                    torus_net_mesh(*m, n),
                )
            }
            SamplableGroup::Semidirect(g) => {
                let n = torus_net_size(g.dim(), eps);
                SampleSet::new(
                    g.grid_elements(n).into_iter().map(|(t, h)| Element::Semidirect(t, h)).collect(),
                    torus_net_mesh(g.dim(), n),
                )
            }
            SamplableGroup::So3 => {
                let grid = ExpGrid::covering(RotationKind::So3, spacing_for(RotationKind::So3, eps));
                SampleSet::new(grid.points().into_iter().map(|v| Element::Rotation(Rotation::exp(v))).collect(), grid.mesh())
            }
            SamplableGroup::Su2 => {
                let grid = ExpGrid::covering(RotationKind::Su2, spacing_for(RotationKind::Su2, eps));
                SampleSet::new(grid.points().into_iter().map(|v| Element::Spin(Quat::exp(v))).collect(), grid.mesh())
            }
        })
    }

    /// Dimension of the search chart on each component.
    pub fn chart_dim(&self) -> usize {
        match self {
            SamplableGroup::Finite(_) => 0,
            SamplableGroup::Torus(m) => *m,
            SamplableGroup::Semidirect(g) => g.dim(),
            SamplableGroup::So3 | SamplableGroup::Su2 => 3,
        }
    }

    /// Number of chart components (the finite part).
    pub fn chart_components(&self) -> usize {
        match self {
            SamplableGroup::Finite(f) => f.order(),
            SamplableGroup::Semidirect(g) => g.quotient().order(),
            _ => 1,
        }
    }

    /// Chart map: exponential coordinates for SO(3)/SU(2), torus
    /// coordinates (rounded to `1/CHART_DENOMINATOR`) otherwise.
    pub fn from_chart(&self, component: usize, x: &[f64]) -> Element {
        match self {
            SamplableGroup::Finite(_) => Element::Finite(component),
            SamplableGroup::Torus(_) => Element::Torus(TorusPoint::from_f64(x)),
            SamplableGroup::Semidirect(_) => Element::Semidirect(TorusPoint::from_f64(x), component),
            SamplableGroup::So3 => Element::Rotation(Rotation::exp([x[0], x[1], x[2]])),
            SamplableGroup::Su2 => Element::Spin(Quat::exp([x[0], x[1], x[2]])),
        }
    }

    /// Half-width of the chart box that covers the group.
    pub fn chart_radius(&self) -> f64 {
        match self {
            SamplableGroup::So3 => RotationKind::So3.covering_radius(),
            SamplableGroup::Su2 => RotationKind::Su2.covering_radius(),
            _ => 0.5,
        }
    }

    /// A random element, drawn through the chart.
    pub fn random_element<R: Rng>(&self, rng: &mut R) -> Element {
        let c = rng.random_range(0..self.chart_components());
        let r = self.chart_radius();
        let x: Vec<f64> = (0..self.chart_dim()).map(|_| rng.random_range(-r..r)).collect();
        self.from_chart(c, &x)
    }
}

/// Grid spacing whose exponential image has mesh exactly `eps`.
fn spacing_for(kind: RotationKind, eps: f64) -> f64 {
    eps / (kind.chart_lipschitz() * 3f64.sqrt() / 2.0)
}

/// Grid size `n` of the torus ε-net: `n = ⌊√m/ε⌋ + 1`, mesh `√m/(2n) < ε/2`.
pub fn torus_net_size(m: usize, eps: f64) -> i64 {
    ((m as f64).sqrt() / eps).floor() as i64 + 1
}

/// Covering radius of the `(1/n)`-grid in `𝕋ᵐ`.
pub fn torus_net_mesh(m: usize, n: i64) -> f64 {
    (m as f64).sqrt() / (2.0 * n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integer_rep::examples;
    use rand::SeedableRng;

    #[test]
    fn circle_net_covers() {
        let net = SamplableGroup::Torus(1).eps_net(0.25).unwrap();
        assert_eq!(net.len(), 5);
        let pts: Vec<Element> = net.points().to_vec();
        let worst = (0..10_000)
            .map(|k| {
                let x = Element::Torus(TorusPoint::grid(&[k], 10_000));
                pts.iter().map(|p| p.distance(&x)).fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max);
        assert!(worst <= 0.25);
        assert!(worst <= net.mesh());
    }

    #[test]
    fn finite_net_is_the_group() {
        let g = SamplableGroup::Finite(Arc::new(FiniteGroup::dihedral(4)));
        let net = g.eps_net(0.01).unwrap();
        assert_eq!(net.len(), 8);
        assert_eq!(net.mesh(), 0.0);
    }

    #[test]
    fn metric_axioms_on_samples() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let groups = [
            SamplableGroup::Torus(2),
            SamplableGroup::Semidirect(Arc::new(build_semidirect(2, examples::beta()).unwrap())),
            SamplableGroup::So3,
            SamplableGroup::Su2,
        ];
        for g in &groups {
            for _ in 0..200 {
                let (a, b, c) = (g.random_element(&mut rng), g.random_element(&mut rng), g.random_element(&mut rng));
                assert_eq!(a.distance(&b), b.distance(&a));
                assert!(a.distance(&c) <= a.distance(&b) + b.distance(&c) + 1e-12);
                assert_eq!(a.distance(&a), 0.0);
                let ab = g.multiply(&a, &b).unwrap();
                let ac = g.multiply(&a, &c).unwrap();
                assert!(ab.distance(&ac) <= g.translation_distortion() * b.distance(&c) + 1e-9);
                let e = g.multiply(&a, &g.invert(&a).unwrap()).unwrap();
                assert!(e.distance(&g.identity()) <= g.tolerance() + 1e-12);
            }
        }
    }

    #[test]
    fn net_refinement_stays_a_net() {
        let g = SamplableGroup::Torus(2);
        let coarse = g.eps_net(0.3).unwrap();
        let fine = g.eps_net(0.1).unwrap();
        let mut union = coarse.points().to_vec();
        union.extend_from_slice(fine.points());
        let oracle = g.eps_net(0.01).unwrap();
        let worst = oracle
            .points()
            .iter()
            .map(|x| union.iter().map(|p| p.distance(x)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max);
        assert!(worst + oracle.mesh() <= 0.3);
    }
}
