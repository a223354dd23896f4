//! Compact subgroups of compact Lie groups, computed at desk scale.
//!
//! Groups are sampled through certified ε-nets and compared in the
//! Hausdorff metric. Exact integer and rational arithmetic backs the
//! representation theory of torus-by-finite groups, the Lie algebra
//! computations and finite group cohomology.

pub mod cohomology;
pub mod finite;
pub mod functorial;
pub mod group;
pub mod hyperspace;
pub mod integer_rep;
pub mod isolation;
pub mod lie;
pub mod linalg;

pub use finite::{FiniteGroup, FiniteGroupError};
pub use group::{
    build_semidirect, center_components, conjugate_subgroup, Element, GroupError, Quat, Rotation, SamplableGroup,
    SemidirectGroup, SubgroupHandle, TorusPoint,
};
pub use hyperspace::{hausdorff_distance, HausdorffEstimate, SampleSet};
pub use integer_rep::{IntegerRep, RationalLattice, RepError};
pub use lie::{LieAlgebraData, LieError};
