//! JSON group descriptors.
//!
//! ```json
//! {"type":"semidirect","m":2,"table":[["1","-1"],["-1","1"]],"action":{"1":[[1,0],[0,1]],"-1":[[1,1],[0,-1]]}}
//! ```
//!
//! Element order is taken from `"elements"` when present, otherwise from the
//! first row of the table, which must then be the identity's row.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{build_semidirect, GroupError, SamplableGroup};
use crate::finite::FiniteGroup;
use crate::integer_rep::{examples, IntegerRep};
use crate::linalg::IntMatrix;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum GroupDescriptor {
    Finite {
        #[serde(default)]
        elements: Option<Vec<String>>,
        table: Vec<Vec<String>>,
    },
    Torus {
        m: usize,
    },
    Semidirect {
        m: usize,
        #[serde(default)]
        elements: Option<Vec<String>>,
        table: Vec<Vec<String>>,
        action: BTreeMap<String, Vec<Vec<i64>>>,
    },
    So3,
    Su2,
}

/// Finite group from a table of ids.
pub fn finite_group(elements: Option<&[String]>, table: &[Vec<String>]) -> Result<FiniteGroup, GroupError> {
    let ids: Vec<String> = match elements {
        Some(e) => e.to_vec(),
        None => {
            let first = table.first().ok_or_else(|| GroupError::Descriptor("empty table".into()))?;
            let identity_first = table.iter().enumerate().all(|(i, row)| row.first() == first.get(i));
            if !identity_first {
                return Err(GroupError::Descriptor(
                    "without \"elements\", the first row and column must belong to the identity".into(),
                ));
            }
            first.clone()
        }
    };
    Ok(FiniteGroup::from_id_table(&ids, table)?)
}

/// Integer representation from an id table and an `id → matrix` map.
pub fn integer_rep(
    elements: Option<&[String]>,
    table: &[Vec<String>],
    action: &BTreeMap<String, Vec<Vec<i64>>>,
) -> Result<IntegerRep, GroupError> {
    let group = finite_group(elements, table)?;
    let mut matrices = Vec::with_capacity(group.order());
    for id in group.ids() {
        let rows = action.get(id).ok_or_else(|| GroupError::Descriptor(format!("no matrix for element `{id}`")))?;
        let m = rows.len();
        if m == 0 || rows.iter().any(|r| r.len() != m) {
            return Err(GroupError::Descriptor(format!("matrix for `{id}` is not square")));
        }
        matrices.push(IntMatrix::from_rows(rows));
    }
    if let Some(extra) = action.keys().find(|k| group.index_of(k).is_none()) {
        return Err(GroupError::Descriptor(format!("matrix given for unknown element `{extra}`")));
    }
    Ok(IntegerRep::new(group, matrices)?)
}

impl GroupDescriptor {
    pub fn build(&self) -> Result<SamplableGroup, GroupError> {
        match self {
            GroupDescriptor::Finite { elements, table } => {
                Ok(SamplableGroup::Finite(Arc::new(finite_group(elements.as_deref(), table)?)))
            }
            GroupDescriptor::Torus { m } => {
                if *m == 0 {
                    Err(GroupError::ZeroDimension)
                } else {
                    Ok(SamplableGroup::Torus(*m))
                }
            }
            GroupDescriptor::Semidirect { m, elements, table, action } => {
                let rep = integer_rep(elements.as_deref(), table, action)?;
                Ok(SamplableGroup::Semidirect(Arc::new(build_semidirect(*m, rep)?)))
            }
            GroupDescriptor::So3 => Ok(SamplableGroup::So3),
            GroupDescriptor::Su2 => Ok(SamplableGroup::Su2),
        }
    }
}

pub fn parse_group(json: &str) -> Result<SamplableGroup, GroupError> {
    let d: GroupDescriptor = serde_json::from_str(json).map_err(|e| GroupError::Descriptor(e.to_string()))?;
    d.build()
}

/// Built-in groups: `T`, `T^m`/`Tm`, `G_alpha`, `G_beta`, `SO3`, `SU2`.
pub fn named_group(name: &str) -> Result<SamplableGroup, GroupError> {
    let torus_dim = name.strip_prefix("T^").or_else(|| name.strip_prefix('T')).map(|s| if s.is_empty() { Ok(1) } else { s.parse::<usize>() });
    match name {
        "G_alpha" => Ok(SamplableGroup::Semidirect(Arc::new(build_semidirect(2, examples::alpha())?))),
        "G_beta" => Ok(SamplableGroup::Semidirect(Arc::new(build_semidirect(2, examples::beta())?))),
        "SO3" => Ok(SamplableGroup::So3),
        "SU2" => Ok(SamplableGroup::Su2),
        _ => match torus_dim {
            Some(Ok(m)) if m > 0 => Ok(SamplableGroup::Torus(m)),
            _ => Err(GroupError::Descriptor(format!("unknown group `{name}`"))),
        },
    }
}
