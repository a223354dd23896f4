use std::sync::Arc;

use super::{Element, GroupError, SamplableGroup};
use crate::functorial::{self, GroupHom};
use crate::hyperspace::SampleSet;

/// How a compact subgroup is realized.
#[derive(Clone, Debug)]
pub enum Realization {
    Full,
    /// An explicit finite subgroup.
    Finite(Vec<Element>),
    /// `(Cₙ)ᵐ` in a torus, or `(Cₙ)ᵐ ⋊ F` in a semidirect product.
    CyclicGrid(i64),
    Conjugate { inner: Box<SubgroupHandle>, by: Element },
    Preimage { hom: Arc<GroupHom>, target: Box<SubgroupHandle> },
    Image { hom: Arc<GroupHom>, source: Box<SubgroupHandle> },
}

/// A compact subgroup of a samplable group.
#[derive(Clone, Debug)]
pub struct SubgroupHandle {
    pub parent: SamplableGroup,
    pub realization: Realization,
}

impl SubgroupHandle {
    pub fn full(parent: SamplableGroup) -> Self {
        Self { parent, realization: Realization::Full }
    }

    pub fn finite(parent: SamplableGroup, elements: Vec<Element>) -> Self {
        Self { parent, realization: Realization::Finite(elements) }
    }

    pub fn cyclic_grid(parent: SamplableGroup, n: i64) -> Self {
        Self { parent, realization: Realization::CyclicGrid(n) }
    }

    pub fn trivial(parent: SamplableGroup) -> Self {
        let e = parent.identity();
        Self::finite(parent, vec![e])
    }

    /// Samples forming an ε-net of the subgroup (`mesh ≤ eps`); exact
    /// realizations ignore `eps` and return mesh 0.
    pub fn sample(&self, eps: f64) -> Result<SampleSet, GroupError> {
        match &self.realization {
            Realization::Full => self.parent.eps_net(eps),
            Realization::Finite(elems) => {
                for x in elems {
                    if !self.parent.contains(x) {
                        return Err(GroupError::ForeignElement(self.parent.name()));
                    }
                }
                Ok(SampleSet::exact(elems.clone()))
            }
            Realization::CyclicGrid(n) => {
                if *n < 1 {
                    return Err(GroupError::Unsupported(format!("grid order {n}")));
                }
                match &self.parent {
                    SamplableGroup::Torus(m) => {
                        Ok(SampleSet::exact(super::torus_grid(*m, *n).into_iter().map(Element::Torus).collect()))
                    }
                    SamplableGroup::Semidirect(g) => Ok(SampleSet::exact(
                        g.grid_elements(*n).into_iter().map(|(t, h)| Element::Semidirect(t, h)).collect(),
                    )),
                    other => Err(GroupError::Unsupported(format!("cyclic grid subgroup of {}", other.name()))),
                }
            }
            Realization::Conjugate { inner, by } => {
                let lip = self.parent.conjugation_lipschitz();
                let base = inner.sample(eps / lip)?;
                let pts = base
                    .points()
                    .iter()
                    .map(|h| self.parent.conjugate(by, h))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(SampleSet::new(pts, base.mesh() * lip))
            }
            Realization::Preimage { hom, target } => functorial::preimage_samples(hom, target, eps),
            Realization::Image { hom, source } => functorial::image_samples(hom, source, eps),
        }
    }

    /// Whether `sample` returns mesh-0 sets.
    pub fn is_exact(&self) -> bool {
        match &self.realization {
            Realization::Full => matches!(self.parent, SamplableGroup::Finite(_)),
            Realization::Finite(_) | Realization::CyclicGrid(_) => true,
            Realization::Conjugate { inner, .. } => inner.is_exact(),
            Realization::Preimage { hom, target } => target.is_exact() && hom.has_finite_kernel(),
            Realization::Image { source, .. } => source.is_exact(),
        }
    }

    /// Largest distance from a product of two samples to the sample set:
    /// zero for exact realizations closed under multiplication.
    pub fn closure_defect(&self, eps: f64) -> Result<f64, GroupError> {
        let s = self.sample(eps)?;
        let mut worst: f64 = 0.0;
        for a in s.points() {
            for b in s.points() {
                let ab = self.parent.multiply(a, b)?;
                worst = worst.max(s.distance_to(&ab));
            }
        }
        Ok(worst)
    }
}

/// `g H g⁻¹`.
pub fn conjugate_subgroup(h: &SubgroupHandle, g: &Element) -> Result<SubgroupHandle, GroupError> {
    if !h.parent.contains(g) {
        return Err(GroupError::ForeignElement(h.parent.name()));
    }
    Ok(SubgroupHandle {
        parent: h.parent.clone(),
        realization: Realization::Conjugate { inner: Box::new(h.clone()), by: g.clone() },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::rotation::finite;
    use crate::group::{build_semidirect, Rotation};
    use crate::hyperspace::hausdorff_distance;
    use crate::integer_rep::examples;

    fn so3_cyclic(n: usize) -> SubgroupHandle {
        SubgroupHandle::finite(SamplableGroup::So3, finite::cyclic(n).into_iter().map(Element::Rotation).collect())
    }

    #[test]
    fn conjugating_a_rotation_group_moves_it() {
        let h = so3_cyclic(4);
        let g = Element::Rotation(Rotation::about_axis([1.0, 0.0, 0.0], 0.1));
        let moved = conjugate_subgroup(&h, &g).unwrap();
        let d = hausdorff_distance(&h.sample(0.1).unwrap(), &moved.sample(0.1).unwrap());
        assert!(d.estimate > 0.0);
        let back = conjugate_subgroup(&moved, &SamplableGroup::So3.invert(&g).unwrap()).unwrap();
        let d = hausdorff_distance(&h.sample(0.1).unwrap(), &back.sample(0.1).unwrap());
        assert!(d.estimate < 1e-12);
    }

    #[test]
    fn identity_conjugation_is_trivial() {
        let h = so3_cyclic(5);
        let moved = conjugate_subgroup(&h, &SamplableGroup::So3.identity()).unwrap();
        assert_eq!(h.sample(1.0).unwrap().points(), moved.sample(1.0).unwrap().points());
    }

    #[test]
    fn torus_factor_is_normal() {
        let ga = SamplableGroup::Semidirect(Arc::new(build_semidirect(2, examples::alpha()).unwrap()));
        let torus_part = SubgroupHandle::finite(
            ga.clone(),
            ga.eps_net(0.1).unwrap().points().iter().filter(|x| matches!(x, Element::Semidirect(_, 0))).cloned().collect(),
        );
        let g = Element::Semidirect(crate::group::TorusPoint::grid(&[1, 3], 7), 1);
        let moved = conjugate_subgroup(&torus_part, &g).unwrap();
        let d = hausdorff_distance(&torus_part.sample(0.1).unwrap(), &moved.sample(0.1).unwrap());
        assert_eq!(d.estimate, 0.0);
    }

    #[test]
    fn grid_subgroups_are_closed() {
        let gb = SamplableGroup::Semidirect(Arc::new(build_semidirect(2, examples::beta()).unwrap()));
        for n in [1, 2, 4] {
            let h = SubgroupHandle::cyclic_grid(gb.clone(), n);
            assert_eq!(h.closure_defect(0.1).unwrap(), 0.0);
            assert_eq!(h.sample(0.1).unwrap().len() as i64, 2 * n * n);
        }
        let icosa = SubgroupHandle::finite(
            SamplableGroup::So3,
            finite::icosahedral().into_iter().map(Element::Rotation).collect(),
        );
        assert!(icosa.closure_defect(0.1).unwrap() < crate::group::TAU_GROUP);
    }
}
