//! Finite groups given by multiplication tables.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FiniteGroupError {
    #[error("multiplication table is not {n}×{n}")]
    Shape { n: usize },
    #[error("unknown element id `{0}`")]
    UnknownId(String),
    #[error("duplicate element id `{0}`")]
    DuplicateId(String),
    #[error("table has no identity element")]
    NoIdentity,
    #[error("row or column of `{0}` is not a permutation")]
    NotLatin(String),
    #[error("multiplication is not associative at ({0}, {1}, {2})")]
    NotAssociative(String, String, String),
}

/// A finite group; elements are indices `0..order` with string ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGroup {
    ids: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

impl FiniteGroup {
    /// Validates a table given as indices.
    pub fn from_index_table(ids: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self, FiniteGroupError> {
        let n = ids.len();
        if table.len() != n || table.iter().any(|r| r.len() != n) {
            return Err(FiniteGroupError::Shape { n });
        }
        let mut seen = BTreeSet::new();
        for id in &ids {
            if !seen.insert(id.clone()) {
                return Err(FiniteGroupError::DuplicateId(id.clone()));
            }
        }
        for row in &table {
            if row.iter().any(|&x| x >= n) {
                return Err(FiniteGroupError::Shape { n });
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or(FiniteGroupError::NoIdentity)?;
        for a in 0..n {
            let row: BTreeSet<usize> = table[a].iter().copied().collect();
            let col: BTreeSet<usize> = (0..n).map(|b| table[b][a]).collect();
            if row.len() != n || col.len() != n {
                return Err(FiniteGroupError::NotLatin(ids[a].clone()));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(FiniteGroupError::NotAssociative(
                            ids[a].clone(),
                            ids[b].clone(),
                            ids[c].clone(),
                        ));
                    }
                }
            }
        }
        let inverses = (0..n).map(|a| (0..n).find(|&b| table[a][b] == identity).expect("latin row")).collect();
        Ok(Self { ids, table, identity, inverses })
    }

    /// Builds a group from a table of string ids; `elements` fixes the row
    /// order.
    pub fn from_id_table(elements: &[String], table: &[Vec<String>]) -> Result<Self, FiniteGroupError> {
        let index: HashMap<&str, usize> = elements.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let table = table
            .iter()
            .map(|row| {
                row.iter()
                    .map(|s| index.get(s.as_str()).copied().ok_or_else(|| FiniteGroupError::UnknownId(s.clone())))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_index_table(elements.to_vec(), table)
    }

    /// Builds a group by closing a multiplication closure over labelled
    /// elements `0..n`.
    pub fn from_fn(ids: Vec<String>, mul: impl Fn(usize, usize) -> usize) -> Result<Self, FiniteGroupError> {
        let n = ids.len();
        let table = (0..n).map(|a| (0..n).map(|b| mul(a, b)).collect()).collect();
        Self::from_index_table(ids, table)
    }

    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        Self::from_fn((0..n).map(|i| i.to_string()).collect(), |a, b| (a + b) % n).expect("cyclic group table")
    }

    /// Dihedral group of order `2n`: rotations `r^k` then reflections `s r^k`.
    pub fn dihedral(n: usize) -> Self {
        assert!(n >= 1);
        let ids = (0..n).map(|k| format!("r{k}")).chain((0..n).map(|k| format!("s{k}"))).collect();
        Self::from_fn(ids, |a, b| {
            let (fa, ka) = (a >= n, a % n);
            let (fb, kb) = (b >= n, b % n);
            // r^a s = s r^-a
            let k = if fb { (n + kb - ka) % n } else { (ka + kb) % n };
            if fa ^ fb { n + k } else { k }
        })
        .expect("dihedral group table")
    }

    pub fn symmetric3() -> Self {
        let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];
        let ids = perms.iter().map(|p| format!("{}{}{}", p[0], p[1], p[2])).collect();
        Self::from_fn(ids, |a, b| {
            let (p, q) = (perms[a], perms[b]);
            let comp = [p[q[0]], p[q[1]], p[q[2]]];
            perms.iter().position(|x| *x == comp).expect("closed")
        })
        .expect("S3 table")
    }

    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let (na, nb) = (a.order(), b.order());
        let ids = (0..na * nb).map(|i| format!("({},{})", a.ids[i / nb], b.ids[i % nb])).collect();
        Self::from_fn(ids, |x, y| a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb)).expect("product table")
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    pub fn order(&self) -> usize {
        self.ids.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn id(&self, a: usize) -> &str {
        &self.ids[a]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|s| s == id)
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        self.elements().all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Subgroup generated by `gens`, sorted.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[self.identity] = true;
        let mut queue: VecDeque<usize> = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.order()).filter(|&i| seen[i]).collect()
    }

    /// A generating set, chosen greedily by decreasing element order.
    pub fn generators(&self) -> Vec<usize> {
        let mut by_order: Vec<usize> = self.elements().collect();
        by_order.sort_by_key(|&a| (std::cmp::Reverse(self.element_order(a)), a));
        let mut gens = Vec::new();
        let mut span = vec![self.identity];
        for a in by_order {
            if span.len() == self.order() {
                break;
            }
            if span.binary_search(&a).is_err() {
                gens.push(a);
                span = self.closure(&gens);
            }
        }
        gens
    }

    pub fn is_homomorphism_to(&self, other: &FiniteGroup, map: &[usize]) -> bool {
        map.len() == self.order()
            && self.elements().all(|a| self.elements().all(|b| map[self.mul(a, b)] == other.mul(map[a], map[b])))
    }

    /// All isomorphisms `self → other`, each as an index map. Deterministic
    /// order: lexicographic in generator images.
    pub fn isomorphisms(&self, other: &FiniteGroup) -> Vec<Vec<usize>> {
        if self.order() != other.order() {
            return Vec::new();
        }
        let gens = self.generators();
        let orders: Vec<usize> = gens.iter().map(|&g| self.element_order(g)).collect();
        let candidates: Vec<Vec<usize>> = orders
            .iter()
            .map(|&o| other.elements().filter(|&b| other.element_order(b) == o).collect())
            .collect();
        let mut out = Vec::new();
        let mut choice = vec![0usize; gens.len()];
        if candidates.iter().any(Vec::is_empty) {
            return out;
        }
        'outer: loop {
            let images: Vec<usize> = choice.iter().zip(&candidates).map(|(&c, cand)| cand[c]).collect();
            if let Some(map) = self.extend_to_map(other, &gens, &images) {
                let bijective = map.iter().collect::<BTreeSet<_>>().len() == self.order();
                if bijective && self.is_homomorphism_to(other, &map) {
                    out.push(map);
                }
            }
            // odometer
            for k in (0..choice.len()).rev() {
                choice[k] += 1;
                if choice[k] < candidates[k].len() {
                    continue 'outer;
                }
                choice[k] = 0;
            }
            break;
        }
        out
    }

    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        self.isomorphisms(self)
    }

    fn extend_to_map(&self, other: &FiniteGroup, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
        let mut map = vec![usize::MAX; self.order()];
        map[self.identity] = other.identity;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for (&g, &h) in gens.iter().zip(images) {
                let y = self.mul(x, g);
                let img = other.mul(map[x], h);
                if map[y] == usize::MAX {
                    map[y] = img;
                    queue.push_back(y);
                } else if map[y] != img {
                    return None;
                }
            }
        }
        map.iter().all(|&m| m != usize::MAX).then_some(map)
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn id_table(&self) -> Vec<Vec<String>> {
        self.table.iter().map(|row| row.iter().map(|&x| self.ids[x].clone()).collect()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dihedral_is_a_group_of_right_order() {
        for n in 1..=6 {
            let d = FiniteGroup::dihedral(n);
            assert_eq!(d.order(), 2 * n);
            // every reflection is an involution
            for k in 0..n {
                assert_eq!(d.mul(n + k, n + k), d.identity());
            }
        }
        assert!(!FiniteGroup::dihedral(3).is_abelian());
    }

    #[test]
    fn isomorphism_counts() {
        assert_eq!(FiniteGroup::cyclic(5).automorphisms().len(), 4);
        assert_eq!(FiniteGroup::symmetric3().automorphisms().len(), 6);
        let klein = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2));
        assert_eq!(klein.automorphisms().len(), 6);
        assert!(FiniteGroup::cyclic(4).isomorphisms(&klein).is_empty());
        assert_eq!(FiniteGroup::symmetric3().isomorphisms(&FiniteGroup::dihedral(3)).len(), 6);
    }

    #[test]
    fn rejects_bad_tables() {
        let ids: Vec<String> = vec!["a".into(), "b".into()];
        let bad = FiniteGroup::from_index_table(ids.clone(), vec![vec![0, 1], vec![1, 1]]);
        assert!(bad.is_err());
        let ids: Vec<String> = vec!["a".into(), "b".into(), "c".into()];
        // x·y = −x − y mod 3 is a quasigroup without identity
        let no_id = FiniteGroup::from_index_table(ids, vec![vec![0, 2, 1], vec![2, 1, 0], vec![1, 0, 2]]);
        assert!(no_id.is_err());
    }
}
