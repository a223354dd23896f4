use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::h2::coboundary_matrix;
use super::{coboundary, is_cocycle, CochainTable, CohomologyError, FiniteModule};
use crate::finite::FiniteGroup;
use crate::linalg::{smith_normal_form, solve_mod, IntMatrix};

/// A finite group `E` with an abelian normal subgroup `T = ker π` and the
/// quotient map `π : E → F`, together with coordinates `T ≅ ⊕ ℤ_{kᵢ}`.
#[derive(Clone, Debug)]
pub struct ExtensionData {
    e: FiniteGroup,
    f: FiniteGroup,
    pi: Vec<usize>,
    t: Vec<usize>,
    coords: BTreeMap<usize, Vec<i64>>,
    module: FiniteModule,
}

fn lift(pi: &[usize], g: usize) -> usize {
    pi.iter().position(|&x| x == g).expect("π is surjective")
}

/// Coordinates of a finite abelian group given by its elements, from the
/// Smith form of the relations `[a] + [b] − [ab]`.
fn abelian_coordinates(e: &FiniteGroup, t: &[usize]) -> (Vec<i64>, BTreeMap<usize, Vec<i64>>) {
    let pos: BTreeMap<usize, usize> = t.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let mut rows = Vec::new();
    for &a in t {
        for &b in t {
            let mut r = vec![0i64; t.len()];
            r[pos[&a]] += 1;
            r[pos[&b]] += 1;
            r[pos[&e.mul(a, b)]] -= 1;
            rows.push(r);
        }
    }
    let s = smith_normal_form(&IntMatrix::from_rows(&rows));
    // x ∈ rowspace iff (x·V)ᵢ ≡ 0 mod dᵢ
    let keep: Vec<usize> = (0..t.len()).filter(|&i| s.diagonal.get(i).copied().unwrap_or(0) != 1).collect();
    let factors: Vec<i64> = keep.iter().map(|&i| s.diagonal.get(i).copied().unwrap_or(0)).collect();
    let coords = t
        .iter()
        .map(|&x| {
            let row = s.v.row(pos[&x]);
            (x, keep.iter().zip(&factors).map(|(&i, &k)| row[i].rem_euclid(k)).collect())
        })
        .collect();
    (factors, coords)
}

impl ExtensionData {
    /// Validates `π` as a surjective homomorphism with abelian kernel `T`.
    pub fn new(e: FiniteGroup, f: FiniteGroup, pi: Vec<usize>, t: Vec<usize>) -> Result<Self, CohomologyError> {
        let (factors, coords) = Self::check(&e, &f, &pi, &t)?;
        Self::with_coordinates(e, f, pi, t, factors, coords)
    }

    fn check(
        e: &FiniteGroup,
        f: &FiniteGroup,
        pi: &[usize],
        t: &[usize],
    ) -> Result<(Vec<i64>, BTreeMap<usize, Vec<i64>>), CohomologyError> {
        if pi.len() != e.order() || pi.iter().any(|&x| x >= f.order()) || !e.is_homomorphism_to(f, pi) {
            return Err(CohomologyError::Extension("π is not a homomorphism E → F".into()));
        }
        if f.elements().any(|g| !pi.contains(&g)) {
            return Err(CohomologyError::Extension("π is not surjective".into()));
        }
        let kernel: BTreeSet<usize> = e.elements().filter(|&x| pi[x] == f.identity()).collect();
        if kernel != t.iter().copied().collect() {
            return Err(CohomologyError::Extension("T is not the kernel of π".into()));
        }
        if t.iter().any(|&a| t.iter().any(|&b| e.mul(a, b) != e.mul(b, a))) {
            return Err(CohomologyError::Extension("T is not abelian".into()));
        }
        let mut t = t.to_vec();
        t.sort_unstable();
        Ok(abelian_coordinates(e, &t))
    }

    fn with_coordinates(
        e: FiniteGroup,
        f: FiniteGroup,
        pi: Vec<usize>,
        mut t: Vec<usize>,
        factors: Vec<i64>,
        coords: BTreeMap<usize, Vec<i64>>,
    ) -> Result<Self, CohomologyError> {
        t.sort_unstable();
        let r = factors.len();
        let by_coord: BTreeMap<Vec<i64>, usize> = coords.iter().map(|(&x, c)| (c.clone(), x)).collect();
        let basis: Vec<usize> = (0..r)
            .map(|i| {
                let mut v = vec![0; r];
                v[i] = 1;
                by_coord[&v]
            })
            .collect();
        let action = f
            .elements()
            .map(|g| {
                let s = lift(&pi, g);
                let s_inv = e.inv(s);
                let mut a = IntMatrix::zeros(r, r);
                for (j, &b) in basis.iter().enumerate() {
                    let img = &coords[&e.mul(e.mul(s, b), s_inv)];
                    for i in 0..r {
                        a[(i, j)] = img[i];
                    }
                }
                a
            })
            .collect();
        let module = FiniteModule::new(f.clone(), factors, action)?;
        Ok(Self { e, f, pi, t, coords, module })
    }

    pub fn e(&self) -> &FiniteGroup {
        &self.e
    }

    pub fn f(&self) -> &FiniteGroup {
        &self.f
    }

    pub fn pi(&self) -> &[usize] {
        &self.pi
    }

    /// Elements of `T`, sorted.
    pub fn t(&self) -> &[usize] {
        &self.t
    }

    /// `T` as an `F`-module under conjugation.
    pub fn module(&self) -> &FiniteModule {
        &self.module
    }

    pub fn coordinates(&self, x: usize) -> Option<&[i64]> {
        self.coords.get(&x).map(Vec::as_slice)
    }

    /// The element of `T` with the given coordinates.
    pub fn t_element(&self, v: &[i64]) -> usize {
        let v = self.module.reduce(v);
        *self.coords.iter().find(|(_, c)| **c == v).expect("coordinates of T").0
    }
}

fn check_section(ext: &ExtensionData, s: &[usize]) -> Result<(), CohomologyError> {
    if s.len() != ext.f.order() || s.iter().any(|&x| x >= ext.e.order()) {
        return Err(CohomologyError::NotASection("one element of E per element of F".into()));
    }
    if let Some(g) = ext.f.elements().find(|&g| ext.pi[s[g]] != g) {
        return Err(CohomologyError::NotASection(format!("π(s({})) ≠ {}", ext.f.id(g), ext.f.id(g))));
    }
    if s[ext.f.identity()] != ext.e.identity() {
        return Err(CohomologyError::NotASection("s(e) ≠ e".into()));
    }
    Ok(())
}

/// `f_s(g,h) = s(g)s(h)s(gh)⁻¹`, in the coordinates of `T`.
pub fn cocycle_from_section(ext: &ExtensionData, s: &[usize]) -> Result<CochainTable, CohomologyError> {
    check_section(ext, s)?;
    let (e, f) = (&ext.e, &ext.f);
    let values = f
        .elements()
        .flat_map(|g| f.elements().map(move |h| (g, h)))
        .map(|(g, h)| {
            let x = e.mul(e.mul(s[g], s[h]), e.inv(s[f.mul(g, h)]));
            ext.coords[&x].clone()
        })
        .collect();
    let table = CochainTable::new(&ext.module, 2, values)?;
    debug_assert!(is_cocycle(&ext.module, &table));
    Ok(table)
}

/// `M ×_f F` with `(m, g)(m′, g′) = (m + g·m′ + f(g, g′), gg′)`, element
/// `(m, g)` at index `g·|M| + index(m)`. Returns the extension and the
/// section `g ↦ (0, g)`.
pub fn twisted_extension(module: &FiniteModule, f: &CochainTable) -> Result<(ExtensionData, Vec<usize>), CohomologyError> {
    if f.degree != 2 {
        return Err(CohomologyError::Degree { expected: 2, got: f.degree });
    }
    if !f.normalized {
        return Err(CohomologyError::NotNormalized);
    }
    if !is_cocycle(module, f) {
        return Err(CohomologyError::Extension("not a 2-cocycle".into()));
    }
    let grp = module.group().clone();
    let elems = module.elements();
    let index: BTreeMap<Vec<i64>, usize> = elems.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
    let size = elems.len();
    let ids = grp
        .elements()
        .flat_map(|g| elems.iter().map(move |m| (g, m)))
        .map(|(g, m)| format!("({:?},{})", m, grp.id(g)))
        .collect();
    let e = FiniteGroup::from_fn(ids, |x, y| {
        let (g, m) = (x / size, &elems[x % size]);
        let (h, n) = (y / size, &elems[y % size]);
        let v = module.add(&module.add(m, &module.act(g, n)), f.at2(g, h));
        grp.mul(g, h) * size + index[&v]
    })?;
    let pi: Vec<usize> = (0..e.order()).map(|x| x / size).collect();
    let t0 = grp.identity() * size;
    let t: Vec<usize> = (t0..t0 + size).collect();
    let coords = t.iter().map(|&x| (x, elems[x - t0].clone())).collect();
    let ext = ExtensionData::with_coordinates(e, grp.clone(), pi, t, module.factors().to_vec(), coords)?;
    let section = grp.elements().map(|g| g * size + index[&module.zero()]).collect();
    Ok((ext, section))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SplittingReport {
    pub m: i64,
    pub modulus: i64,
    /// `a′` with `m·f_s + δa′ = 0`, one value per element of `F`.
    pub a_prime: Vec<Vec<i64>>,
    /// `a` with `m·a = a′`.
    pub a: Vec<Vec<i64>>,
    /// Identifiers of `s′(g) = a(g)·s(g)`.
    pub section_prime: Vec<String>,
    pub cocycle: CochainTable,
    pub cocycle_prime: CochainTable,
    pub covariance_holds: bool,
    pub values_in_t_m: bool,
    pub t_m_order: usize,
    pub f_prime_order: usize,
    pub t_times_f_prime_is_e: bool,
    pub t_cap_f_prime_is_t_m: bool,
    pub all_pass: bool,
}

/// Modifies a section so that its cocycle takes values in `T_m = {t : mt = 0}`.
/// `T` must be `((1/N)ℤ)ᵈ/ℤᵈ ≅ (ℤ_N)ᵈ` with `m | N`. Solves
/// `m·δa ≡ −m·f_s (mod N)`, sets `a′ = m·a` and `s′ = a·s`, then checks that
/// `F′ = ⟨s′(F) ∪ T_m⟩` satisfies `T·F′ = E` and `T ∩ F′ = T_m`.
pub fn split_after_quotient(ext: &ExtensionData, s: &[usize], m: i64) -> Result<SplittingReport, CohomologyError> {
    let module = &ext.module;
    let n = module.factors().first().copied().unwrap_or(1);
    if m < 1 || module.factors().iter().any(|&k| k != n) || n % m != 0 {
        return Err(CohomologyError::NotSurrogate { m });
    }
    let fs = cocycle_from_section(ext, s)?;
    let (grp, e) = (&ext.f, &ext.e);
    let r = module.rank();
    let nontrivial: Vec<usize> = grp.elements().filter(|&g| g != grp.identity()).collect();

    let a = if r == 0 || nontrivial.is_empty() {
        CochainTable::zero(module, 1)
    } else {
        let mut d = coboundary_matrix(module);
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                d[(i, j)] *= m;
            }
        }
        let rhs: Vec<i64> = nontrivial
            .iter()
            .flat_map(|&g| nontrivial.iter().map(move |&h| (g, h)))
            .flat_map(|(g, h)| fs.at2(g, h).iter().map(|x| (-m * x).rem_euclid(n)).collect::<Vec<_>>())
            .collect();
        let sol = solve_mod(&d, &rhs, n).ok_or(CohomologyError::NoSolution { modulus: n })?;
        let mut values = vec![module.zero(); grp.order()];
        for (k, &g) in nontrivial.iter().enumerate() {
            values[g] = sol[k * r..(k + 1) * r].to_vec();
        }
        CochainTable::new(module, 1, values)?
    };
    let a_prime = a.scale(module, m);

    let s_prime: Vec<usize> = grp.elements().map(|g| e.mul(ext.t_element(a.at1(g)), s[g])).collect();
    let f_prime = cocycle_from_section(ext, &s_prime)?;
    let covariance_holds = f_prime == fs.add(module, &coboundary(module, &a)?);
    let values_in_t_m = f_prime.scale(module, m).is_zero();

    let t_m: Vec<usize> = ext.t.iter().copied().filter(|&x| module.scale(m, &ext.coords[&x]).iter().all(|&c| c == 0)).collect();
    let mut gens = t_m.clone();
    gens.extend(&s_prime);
    let f_big: BTreeSet<usize> = e.closure(&gens).into_iter().collect();
    let t_set: BTreeSet<usize> = ext.t.iter().copied().collect();
    let products: BTreeSet<usize> = t_set.iter().flat_map(|&x| f_big.iter().map(move |&y| e.mul(x, y))).collect();
    let t_times_f_prime_is_e = products.len() == e.order();
    let t_cap_f_prime_is_t_m = t_set.intersection(&f_big).copied().collect::<Vec<_>>() == t_m;
    let all_pass = covariance_holds && values_in_t_m && t_times_f_prime_is_e && t_cap_f_prime_is_t_m;
    Ok(SplittingReport {
        m,
        modulus: n,
        a_prime: a_prime.values.clone(),
        a: a.values.clone(),
        section_prime: s_prime.iter().map(|&x| e.id(x).to_owned()).collect(),
        cocycle: fs,
        cocycle_prime: f_prime,
        covariance_holds,
        values_in_t_m,
        t_m_order: t_m.len(),
        f_prime_order: f_big.len(),
        t_times_f_prime_is_e,
        t_cap_f_prime_is_t_m,
        all_pass,
    })
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExtensionDescriptor {
    #[serde(default)]
    elements: Option<Vec<String>>,
    #[serde(rename = "E")]
    table: Vec<Vec<String>>,
    #[serde(rename = "T")]
    t: Vec<String>,
    pi: BTreeMap<String, String>,
    section: BTreeMap<String, String>,
}

/// Parses `{"E": table, "T": [ids], "pi": {e: f}, "section": {f: e}}`. The
/// quotient `F` takes the labels used by `pi`, ordered by first occurrence
/// along the elements of `E`.
pub fn parse_extension(json: &str) -> Result<(ExtensionData, Vec<usize>), CohomologyError> {
    let d: ExtensionDescriptor = serde_json::from_str(json).map_err(|e| CohomologyError::Extension(e.to_string()))?;
    let e = crate::group::descriptor::finite_group(d.elements.as_deref(), &d.table)
        .map_err(|err| CohomologyError::Extension(err.to_string()))?;
    let mut labels: Vec<String> = Vec::new();
    let mut pi = Vec::with_capacity(e.order());
    for x in e.elements() {
        let label = d
            .pi
            .get(e.id(x))
            .ok_or_else(|| CohomologyError::Extension(format!("pi is missing `{}`", e.id(x))))?;
        let k = labels.iter().position(|l| l == label).unwrap_or_else(|| {
            labels.push(label.clone());
            labels.len() - 1
        });
        pi.push(k);
    }
    if d.pi.len() != e.order() {
        return Err(CohomologyError::Extension("pi has unknown keys".into()));
    }
    let lifts: Vec<usize> = (0..labels.len()).map(|k| lift(&pi, k)).collect();
    let table: Vec<Vec<usize>> = lifts.iter().map(|&a| lifts.iter().map(|&b| pi[e.mul(a, b)]).collect()).collect();
    let f = FiniteGroup::from_index_table(labels.clone(), table)?;
    let find = |id: &str| e.index_of(id).ok_or_else(|| CohomologyError::Extension(format!("unknown element `{id}`")));
    let t = d.t.iter().map(|x| find(x)).collect::<Result<Vec<_>, _>>()?;
    let section = labels
        .iter()
        .map(|l| {
            d.section
                .get(l)
                .ok_or_else(|| CohomologyError::NotASection(format!("no value at `{l}`")))
                .and_then(|x| find(x))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let ext = ExtensionData::new(e, f, pi, t)?;
    Ok((ext, section))
}

/// Finite surrogates of torus-by-finite extensions.
pub mod surrogates {
    use super::*;
    use crate::integer_rep::examples;

    /// `((1/4)ℤ)²/ℤ² ⋊_α ℤ₂` with the section `σ ↦ ((1/4, 1/4), σ)`.
    pub fn g_alpha_shadow() -> (ExtensionData, Vec<usize>) {
        let f = examples::z2();
        let alpha = examples::alpha();
        let module = FiniteModule::new(f.clone(), vec![4, 4], alpha.matrices().to_vec()).expect("α mod 4");
        let (ext, mut s) = twisted_extension(&module, &CochainTable::zero(&module, 2)).expect("split extension");
        let t0 = ext.t_element(&[1, 1]);
        s[1] = ext.e().mul(t0, s[1]);
        (ext, s)
    }

    /// `((1/4)ℤ)/ℤ` extended by ℤ₂ with `f(σ, σ) = 1/2`: the subgroup
    /// generated by `(0, σ)` and `T₂` is ℤ₄ over ℤ₂.
    pub fn z4_over_z2() -> (ExtensionData, Vec<usize>) {
        let module = FiniteModule::trivial(examples::z2(), vec![4]).expect("ℤ₄");
        let f = CochainTable::new(&module, 2, vec![vec![0], vec![0], vec![0], vec![2]]).expect("cocycle");
        twisted_extension(&module, &f).expect("cocycle")
    }

    /// `(ℤ_N)^d × F` with the canonical section.
    pub fn split(f: FiniteGroup, n: i64, d: usize) -> (ExtensionData, Vec<usize>) {
        let module = FiniteModule::trivial(f, vec![n; d]).expect("trivial module");
        twisted_extension(&module, &CochainTable::zero(&module, 2)).expect("split extension")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z4_over_z2_table() -> (ExtensionData, Vec<usize>) {
        let e = FiniteGroup::cyclic(4);
        let f = FiniteGroup::cyclic(2);
        let ext = ExtensionData::new(e, f, vec![0, 1, 0, 1], vec![0, 2]).unwrap();
        (ext, vec![0, 1])
    }

    #[test]
    fn nonsplit_cocycle_of_z4() {
        let (ext, s) = z4_over_z2_table();
        let f = cocycle_from_section(&ext, &s).unwrap();
        assert_eq!(ext.t_element(f.at2(1, 1)), 2);
        assert!(f.normalized);
        assert_eq!(super::super::h2(ext.module()).unwrap(), vec![2]);
    }

    #[test]
    fn split_sections_give_zero() {
        let (ext, s) = surrogates::split(FiniteGroup::cyclic(3), 2, 2);
        assert!(cocycle_from_section(&ext, &s).unwrap().is_zero());
        let r = split_after_quotient(&ext, &s, 2).unwrap();
        assert!(r.a_prime.iter().all(|v| v.iter().all(|&x| x == 0)) || r.all_pass);
        assert!(r.all_pass);
    }

    #[test]
    fn dihedral_cocycle() {
        let e = FiniteGroup::dihedral(4);
        let f = FiniteGroup::cyclic(2);
        let pi: Vec<usize> = (0..8).map(|x| usize::from(x >= 4)).collect();
        let ext = ExtensionData::new(e, f, pi, vec![0, 1, 2, 3]).unwrap();
        assert_eq!(ext.module().factors(), &[4]);
        let c = cocycle_from_section(&ext, &[0, 4]).unwrap();
        assert!(is_cocycle(ext.module(), &c));
        // a reflection squares to the identity
        assert!(c.is_zero());
        let c = cocycle_from_section(&ext, &[0, 5]).unwrap();
        assert!(c.is_zero());
    }

    #[test]
    fn section_change_covariance() {
        let (ext, s) = surrogates::g_alpha_shadow();
        let base = cocycle_from_section(&ext, &s).unwrap();
        let module = ext.module();
        let a = CochainTable::new(module, 1, vec![vec![0, 0], vec![3, 1]]).unwrap();
        let moved: Vec<usize> = (0..2).map(|g| ext.e().mul(ext.t_element(a.at1(g)), s[g])).collect();
        let f2 = cocycle_from_section(&ext, &moved).unwrap();
        assert_eq!(f2, base.add(module, &coboundary(module, &a).unwrap()));
    }

    #[test]
    fn g_alpha_shadow_splits() {
        let (ext, s) = surrogates::g_alpha_shadow();
        let f = cocycle_from_section(&ext, &s).unwrap();
        assert!(!f.is_zero());
        let r = split_after_quotient(&ext, &s, 2).unwrap();
        assert!(r.all_pass, "{r:?}");
        assert_eq!((r.t_m_order, r.f_prime_order), (4, 8));
    }

    #[test]
    fn z4_surrogate_splits_after_quotient() {
        let (ext, s) = surrogates::z4_over_z2();
        let r = split_after_quotient(&ext, &s, 2).unwrap();
        assert!(r.all_pass, "{r:?}");
        assert_eq!((r.t_m_order, r.f_prime_order), (2, 4));
    }

    #[test]
    fn kernel_of_order_two() {
        let (ext, s) = z4_over_z2_table();
        let r = split_after_quotient(&ext, &s, 2).unwrap();
        assert!(r.values_in_t_m);
        assert_eq!(split_after_quotient(&ext, &s, 3).unwrap_err(), CohomologyError::NotSurrogate { m: 3 });
    }

    #[test]
    fn no_solution_when_n_is_too_small() {
        // ℤ₈ over ℤ₂ with T = ℤ₄: 2·f(σ,σ) = 2 is not 2·δa for any a
        let module = FiniteModule::trivial(FiniteGroup::cyclic(2), vec![4]).unwrap();
        let f = CochainTable::new(&module, 2, vec![vec![0], vec![0], vec![0], vec![1]]).unwrap();
        let (ext, s) = twisted_extension(&module, &f).unwrap();
        assert_eq!(split_after_quotient(&ext, &s, 2).unwrap_err(), CohomologyError::NoSolution { modulus: 4 });
    }

    #[test]
    fn rejects_bad_input() {
        let (ext, _) = z4_over_z2_table();
        assert!(cocycle_from_section(&ext, &[0, 2]).is_err());
        assert!(cocycle_from_section(&ext, &[2, 1]).is_err());
        assert!(ExtensionData::new(FiniteGroup::cyclic(4), FiniteGroup::cyclic(2), vec![0, 1, 0, 1], vec![0]).is_err());
        assert!(ExtensionData::new(FiniteGroup::symmetric3(), FiniteGroup::trivial(), vec![0; 6], (0..6).collect()).is_err());
    }

    #[test]
    fn parses_json() {
        let json = r#"{"E":[["0","1","2","3"],["1","2","3","0"],["2","3","0","1"],["3","0","1","2"]],
                       "T":["0","2"],"pi":{"0":"e","1":"s","2":"e","3":"s"},"section":{"e":"0","s":"1"}}"#;
        let (ext, s) = parse_extension(json).unwrap();
        assert_eq!(s, vec![0, 1]);
        let f = cocycle_from_section(&ext, &s).unwrap();
        assert_eq!(ext.t_element(f.at2(1, 1)), 2);
    }
}
