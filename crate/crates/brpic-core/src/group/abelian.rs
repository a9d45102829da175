//! Invariant-factor decompositions of finite abelian groups, duals with an
//! explicit pairing, and (semi)direct products built from them.

use super::{FiniteGroup, Group, GroupMap, Subgroup};
use crate::error::{Error, Result};
use std::collections::HashMap;

/// Invariant-factor decomposition of an abelian subgroup: the subgroup is
/// the internal direct sum of the cyclic groups generated by `basis`, with
/// orders `invariant_factors` (d1 | d2 | ... | dr).
#[derive(Debug, Clone)]
pub struct AbelianStructure {
    pub subject: Subgroup,
    pub invariant_factors: Vec<u64>,
    pub basis: Vec<usize>,
    pub exponent: u64,
    /// coordinates of each subgroup element (local, sorted order) in the
    /// basis: coords[local][k] is defined mod invariant_factors[k]
    coords: Vec<Vec<u64>>,
    local_of: HashMap<usize, usize>,
}

impl AbelianStructure {
    pub fn new(subject: Subgroup) -> Result<AbelianStructure> {
        if !subject.is_abelian {
            return Err(Error::NotAbelian);
        }
        let parent = &subject.parent;
        let elems = &subject.elements;
        let n = elems.len();
        if n == 1 {
            return Ok(AbelianStructure {
                subject,
                invariant_factors: vec![],
                basis: vec![],
                exponent: 1,
                coords: vec![vec![]],
                local_of: HashMap::from([(0usize, 0usize)]),
            });
        }
        // generating set inside the subgroup, greedy over ascending elements
        let mut gens: Vec<usize> = Vec::new();
        let mut have: Vec<usize> = vec![0];
        for &g in elems.iter() {
            if have.len() == n {
                break;
            }
            if have.binary_search(&g).is_err() {
                gens.push(g);
                have = parent.closure(&gens);
            }
        }
        let k = gens.len();
        // integer word vector for every element via BFS over the Cayley
        // graph; relations come from the non-tree edges
        let mut word: HashMap<usize, Vec<i64>> = HashMap::new();
        word.insert(0, vec![0; k]);
        let mut order_bfs = vec![0usize];
        let mut qi = 0;
        let mut relations: Vec<Vec<i64>> = Vec::new();
        while qi < order_bfs.len() {
            let x = order_bfs[qi];
            qi += 1;
            for (j, &g) in gens.iter().enumerate() {
                let y = parent.mul(x, g);
                let mut w = word[&x].clone();
                w[j] += 1;
                if let Some(existing) = word.get(&y) {
                    let rel: Vec<i64> = w.iter().zip(existing).map(|(a, b)| a - b).collect();
                    if rel.iter().any(|&c| c != 0) {
                        relations.push(rel);
                    }
                } else {
                    word.insert(y, w);
                    order_bfs.push(y);
                }
            }
        }
        let (factors_all, basis_cols) = integer_smith(&relations, k);
        // new generators: basis element j = sum_i basis_cols[j][i] * gens[i]
        let mut basis = Vec::new();
        let mut invariant_factors = Vec::new();
        for (f, combo) in factors_all.iter().zip(&basis_cols) {
            if *f == 1 {
                continue;
            }
            let mut e = 0usize;
            for (i, &c) in combo.iter().enumerate() {
                let c = c.rem_euclid(parent.element_order(gens[i]) as i64) as usize;
                for _ in 0..c {
                    e = parent.mul(e, gens[i]);
                }
            }
            basis.push(e);
            invariant_factors.push(*f);
        }
        // ascending divisibility chain
        let mut pairs: Vec<(u64, usize)> = invariant_factors
            .iter()
            .copied()
            .zip(basis.iter().copied())
            .collect();
        pairs.sort_by_key(|p| p.0);
        let invariant_factors: Vec<u64> = pairs.iter().map(|p| p.0).collect();
        let basis: Vec<usize> = pairs.iter().map(|p| p.1).collect();
        let exponent = invariant_factors.last().copied().unwrap_or(1);
        let total: u64 = invariant_factors.iter().product();
        if total as usize != n {
            return Err(Error::CrossCheck(format!(
                "abelian decomposition size {total} != {n}"
            )));
        }
        // coordinate table: enumerate all basis combinations
        let mut local_of = HashMap::new();
        for (i, &e) in elems.iter().enumerate() {
            local_of.insert(e, i);
        }
        let mut coords = vec![Vec::new(); n];
        let mut seen = vec![false; n];
        let r = invariant_factors.len();
        let mut tuple = vec![0u64; r];
        loop {
            let mut e = 0usize;
            for (j, &c) in tuple.iter().enumerate() {
                for _ in 0..c {
                    e = parent.mul(e, basis[j]);
                }
            }
            let li = local_of[&e];
            if seen[li] {
                return Err(Error::CrossCheck(
                    "abelian basis is not a direct sum".into(),
                ));
            }
            seen[li] = true;
            coords[li] = tuple.clone();
            // increment mixed-radix tuple
            let mut j = 0;
            loop {
                if j == r {
                    if !seen.iter().all(|&b| b) {
                        return Err(Error::CrossCheck("basis fails to span".into()));
                    }
                    return Ok(AbelianStructure {
                        subject,
                        invariant_factors,
                        basis,
                        exponent,
                        coords,
                        local_of,
                    });
                }
                tuple[j] += 1;
                if tuple[j] == invariant_factors[j] {
                    tuple[j] = 0;
                    j += 1;
                } else {
                    break;
                }
            }
        }
    }

    pub fn order(&self) -> usize {
        self.subject.order()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    /// Coordinates of a parent element (must lie in the subgroup).
    pub fn coords_of(&self, parent_elem: usize) -> &[u64] {
        &self.coords[self.local_of[&parent_elem]]
    }

    pub fn contains(&self, parent_elem: usize) -> bool {
        self.local_of.contains_key(&parent_elem)
    }

    /// Element with the given coordinates.
    pub fn from_coords(&self, tuple: &[u64]) -> usize {
        let parent = &self.subject.parent;
        let mut e = 0usize;
        for (j, &c) in tuple.iter().enumerate() {
            let c = c % self.invariant_factors[j];
            for _ in 0..c {
                e = parent.mul(e, self.basis[j]);
            }
        }
        e
    }

    /// Dual pairing <a, chi> in Z/exponent: chi is a dual element given by
    /// coordinates chi_j mod d_j; the value is sum chi_j * a_j * (m/d_j).
    pub fn pairing(&self, a: usize, chi: &DualElement) -> u64 {
        let m = self.exponent;
        let ac = self.coords_of(a);
        let mut v = 0u64;
        for j in 0..self.rank() {
            v = (v + chi.coords[j] * ac[j] % m * (m / self.invariant_factors[j])) % m;
        }
        v
    }

    /// All dual elements (characters), in lexicographic coordinate order.
    pub fn dual_elements(&self) -> Vec<DualElement> {
        let r = self.rank();
        let mut out = Vec::new();
        let mut tuple = vec![0u64; r];
        loop {
            out.push(DualElement {
                coords: tuple.clone(),
            });
            let mut j = 0;
            loop {
                if j == r {
                    return out;
                }
                tuple[j] += 1;
                if tuple[j] == self.invariant_factors[j] {
                    tuple[j] = 0;
                    j += 1;
                } else {
                    break;
                }
            }
        }
    }

    /// The dual group as a standalone abelian table group; element order is
    /// the lexicographic coordinate order of `dual_elements`.
    pub fn dual_group(&self) -> Group {
        abelian_from_factors(&self.invariant_factors, format!("dual({})", self.order()))
    }
}

/// A character of an abelian structure, written in dual coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DualElement {
    pub coords: Vec<u64>,
}

/// The abstract abelian group with the given cyclic factor orders, elements
/// in lexicographic coordinate order (identity first).
pub fn abelian_from_factors(factors: &[u64], name: String) -> Group {
    let n: u64 = factors.iter().product::<u64>().max(1);
    let n = n as usize;
    let r = factors.len();
    let idx = |tuple: &[u64]| -> usize {
        let mut i = 0usize;
        for j in (0..r).rev() {
            i = i * factors[j] as usize + tuple[j] as usize;
        }
        i
    };
    let tuple_of = |mut i: usize| -> Vec<u64> {
        let mut t = vec![0u64; r];
        for j in 0..r {
            t[j] = (i % factors[j] as usize) as u64;
            i /= factors[j] as usize;
        }
        t
    };
    let mut table = vec![0usize; n * n];
    for i in 0..n {
        let ti = tuple_of(i);
        for j in 0..n {
            let tj = tuple_of(j);
            let sum: Vec<u64> = ti
                .iter()
                .zip(&tj)
                .zip(factors)
                .map(|((a, b), f)| (a + b) % f)
                .collect();
            table[i * n + j] = idx(&sum);
        }
    }
    FiniteGroup::from_table(table, name).expect("abelian table is a group")
}

/// Semidirect product carrier x| Q where the carrier is described by cyclic
/// factor orders and the action sends each q to a matrix on carrier
/// coordinates. Multiplication: (a1, q1)(a2, q2) = (a1 + q1·a2, q1 q2).
/// The action must be a homomorphism Q -> Aut(carrier); verified.
pub fn semidirect(
    factors: &[u64],
    q: &Group,
    action: &dyn Fn(usize, &[u64]) -> Vec<u64>,
    name: String,
) -> Result<Group> {
    let carrier = abelian_from_factors(factors, "carrier".into());
    let nc = carrier.order;
    let r = factors.len();
    let tuple_of = |mut i: usize| -> Vec<u64> {
        let mut t = vec![0u64; r];
        for j in 0..r {
            t[j] = (i % factors[j] as usize) as u64;
            i /= factors[j] as usize;
        }
        t
    };
    let idx = |tuple: &[u64]| -> usize {
        let mut i = 0usize;
        for j in (0..r).rev() {
            i = i * factors[j] as usize + (tuple[j] % factors[j]) as usize;
        }
        i
    };
    // action as permutations of the carrier, one per element of Q
    let mut perms: Vec<Vec<usize>> = Vec::with_capacity(q.order);
    for qe in 0..q.order {
        let mut p = vec![0usize; nc];
        let mut seen = vec![false; nc];
        for a in 0..nc {
            let img = idx(&action(qe, &tuple_of(a)));
            p[a] = img;
            if seen[img] {
                return Err(Error::ActionNotHomomorphism);
            }
            seen[img] = true;
        }
        // must be additive
        for a in 0..nc {
            for b in 0..nc {
                if p[carrier.mul(a, b)] != carrier.mul(p[a], p[b]) {
                    return Err(Error::ActionNotHomomorphism);
                }
            }
        }
        perms.push(p);
    }
    // homomorphism property of the action
    for q1 in 0..q.order {
        for q2 in 0..q.order {
            let q12 = q.mul(q1, q2);
            for a in 0..nc {
                if perms[q12][a] != perms[q1][perms[q2][a]] {
                    return Err(Error::ActionNotHomomorphism);
                }
            }
        }
    }
    let n = nc * q.order;
    let mut table = vec![0usize; n * n];
    let pair = |a: usize, qe: usize| a * q.order + qe;
    for a1 in 0..nc {
        for q1 in 0..q.order {
            for a2 in 0..nc {
                for q2 in 0..q.order {
                    let a = carrier.mul(a1, perms[q1][a2]);
                    let qe = q.mul(q1, q2);
                    table[pair(a1, q1) * n + pair(a2, q2)] = pair(a, qe);
                }
            }
        }
    }
    FiniteGroup::from_table(table, name)
}

/// Contragredient action of Q = G/N on the dual of N: (q . chi)(n) =
/// chi(s(q)^{-1} n s(q)) for any section s. Returns the dual-coordinate
/// matrix action for use with `semidirect`.
pub fn dual_conjugation_action(
    ab: &AbelianStructure,
    proj: &GroupMap,
) -> Result<impl Fn(usize, &[u64]) -> Vec<u64>> {
    let parent = ab.subject.parent.clone();
    let qg = proj.target.clone();
    // a section: minimal preimage per coset
    let mut section = vec![usize::MAX; qg.order];
    for x in 0..parent.order {
        let c = proj.apply(x);
        if section[c] == usize::MAX {
            section[c] = x;
        }
    }
    let m = ab.exponent;
    let factors = ab.invariant_factors.clone();
    let r = factors.len();
    // per coset q, matrix M with (q.chi)_i = sum_j M[i][j] chi_j
    let mut mats: Vec<Vec<Vec<u64>>> = Vec::with_capacity(qg.order);
    for qe in 0..qg.order {
        let s = section[qe];
        let sinv = parent.inv(s);
        let mut mat = vec![vec![0u64; r]; r];
        for j in 0..r {
            // chi_j composed with conjugation: evaluate on each basis elt
            for (i, &bi) in ab.basis.iter().enumerate() {
                let conj = parent.mul(parent.mul(sinv, bi), s);
                if !ab.contains(conj) {
                    return Err(Error::NotNormal);
                }
                let cc = ab.coords_of(conj);
                // chi_j(conj) = cc_j * (m/d_j); the new character's i-th
                // coordinate c must satisfy c * (m/d_i) = value on b_i
                let val = cc[j] * (m / factors[j]) % m;
                let unit = m / factors[i];
                if val % unit != 0 {
                    return Err(Error::CrossCheck(
                        "conjugated character has wrong order".into(),
                    ));
                }
                mat[i][j] = (val / unit) % factors[i];
            }
        }
        mats.push(mat);
    }
    Ok(move |qe: usize, chi: &[u64]| -> Vec<u64> {
        let mat = &mats[qe];
        (0..r)
            .map(|i| {
                let mut v = 0u64;
                for j in 0..r {
                    v = (v + mat[i][j] * chi[j]) % factors[i];
                }
                v
            })
            .collect()
    })
}

/// Integer Smith normal form of a relation matrix (rows are relations on k
/// generators). Returns (factors per generator slot, generator combinations
/// as rows of B^{-1}); factor 0 means infinite, which cannot happen for a
/// finite group's full relation set.
fn integer_smith(rels: &[Vec<i64>], k: usize) -> (Vec<u64>, Vec<Vec<i64>>) {
    let rows = rels.len();
    let mut a: Vec<Vec<i128>> = rels
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut binv: Vec<Vec<i128>> = (0..k)
        .map(|i| (0..k).map(|j| i128::from(i == j)).collect())
        .collect();
    let nmin = rows.min(k);
    let mut diag: Vec<i128> = Vec::new();
    for t in 0..nmin {
        loop {
            // minimal nonzero |entry| in trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..k {
                    if a[i][j] != 0
                        && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            a.swap(t, pi);
            if pj != t {
                for row in a.iter_mut() {
                    row.swap(t, pj);
                }
                binv.swap(t, pj);
            }
            if a[t][t] < 0 {
                for row in a.iter_mut() {
                    row[t] = -row[t];
                }
                for x in binv[t].iter_mut() {
                    *x = -*x;
                }
            }
            let d = a[t][t];
            let mut dirty = false;
            for i in t + 1..rows {
                let q = a[i][t].div_euclid(d);
                if q != 0 {
                    for j in 0..k {
                        a[i][j] -= q * a[t][j];
                    }
                }
                if a[i][t] != 0 {
                    dirty = true;
                }
            }
            for j in t + 1..k {
                let q = a[t][j].div_euclid(d);
                if q != 0 {
                    for row in a.iter_mut() {
                        row[j] -= q * row[t];
                    }
                    for i in 0..k {
                        let add = q * binv[j][i];
                        binv[t][i] += add;
                    }
                }
                if a[t][j] != 0 {
                    dirty = true;
                }
            }
            if !dirty {
                // pivot must divide the rest; otherwise fold an offender in
                let mut offender = None;
                'scan: for i in t + 1..rows {
                    for j in t + 1..k {
                        if a[i][j] % d != 0 {
                            offender = Some(i);
                            break 'scan;
                        }
                    }
                }
                match offender {
                    None => {
                        diag.push(d);
                        break;
                    }
                    Some(i) => {
                        let (lo, hi) = a.split_at_mut(i);
                        for (x, &y) in lo[t].iter_mut().zip(hi[0].iter()) {
                            *x += y;
                        }
                    }
                }
            }
        }
        if diag.len() <= t {
            break;
        }
    }
    let mut factors = vec![0u64; k];
    for j in 0..k {
        factors[j] = diag.get(j).map(|&d| d.unsigned_abs() as u64).unwrap_or(0);
    }
    let gens = binv
        .into_iter()
        .map(|r| r.into_iter().map(|x| x as i64).collect())
        .collect();
    (factors, gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_group, opposite, Subgroup};
    use crate::Caps;

    fn g(spec: &str) -> Group {
        build_group(spec, &Caps::default()).unwrap()
    }

    #[test]
    fn invariant_factors() {
        let v4 = g("C2xC2");
        let ab = AbelianStructure::new(Subgroup::full(&v4)).unwrap();
        assert_eq!(ab.invariant_factors, vec![2, 2]);

        let c6 = g("C6");
        let ab = AbelianStructure::new(Subgroup::full(&c6)).unwrap();
        assert_eq!(ab.invariant_factors, vec![6]);

        let m = g("C2xC4");
        let ab = AbelianStructure::new(Subgroup::full(&m)).unwrap();
        assert_eq!(ab.invariant_factors, vec![2, 4]);

        let big = g("C2xC6");
        let ab = AbelianStructure::new(Subgroup::full(&big)).unwrap();
        assert_eq!(ab.invariant_factors, vec![2, 6]);
    }

    #[test]
    fn pairing_nondegenerate() {
        for spec in ["C2xC2", "C6", "C2xC4", "C8"] {
            let grp = g(spec);
            let ab = AbelianStructure::new(Subgroup::full(&grp)).unwrap();
            let duals = ab.dual_elements();
            assert_eq!(duals.len(), grp.order);
            for a in 1..grp.order {
                assert!(
                    duals.iter().any(|chi| ab.pairing(a, chi) != 0),
                    "degenerate pairing at {a} in {spec}"
                );
            }
        }
    }

    #[test]
    fn semidirect_trivial_action_is_product() {
        let c3 = g("C3");
        let sd = semidirect(&[2], &c3, &|_, chi| chi.to_vec(), "C2:C3".into()).unwrap();
        assert_eq!(sd.order, 6);
        assert!(sd.is_abelian());
    }

    #[test]
    fn semidirect_dihedral() {
        // dual(C9) x| C2 with inversion = D18
        let c2 = g("C2");
        let sd = semidirect(
            &[9],
            &c2,
            &|qe, chi| {
                if qe == 0 {
                    chi.to_vec()
                } else {
                    vec![(9 - chi[0]) % 9]
                }
            },
            "dual(C9):C2".into(),
        )
        .unwrap();
        assert_eq!(sd.order, 18);
        let d18 = g("D18");
        assert!(crate::group::is_isomorphic(&sd, &d18).is_some());
    }

    #[test]
    fn bad_action_rejected() {
        let c2 = g("C2");
        // "action" that is not additive
        let r = semidirect(
            &[4],
            &c2,
            &|qe, chi| {
                if qe == 0 {
                    chi.to_vec()
                } else {
                    vec![(chi[0] * chi[0]) % 4]
                }
            },
            "bad".into(),
        );
        assert!(r.is_err());
    }

    #[test]
    fn dual_action_on_normal_subgroup() {
        // N = V inside S4, Q = S4/V acting by conjugation on dual(V)
        let s4 = g("S4");
        let v = s4
            .normal_abelian_subgroups()
            .into_iter()
            .find(|s| s.order() == 4)
            .unwrap();
        let ab = AbelianStructure::new(v.clone()).unwrap();
        let (q, proj) = crate::group::quotient(&s4, &v).unwrap();
        let act = dual_conjugation_action(&ab, &proj).unwrap();
        let sd = semidirect(&[2, 2], &q, &act, "dual(V):S3".into()).unwrap();
        assert_eq!(sd.order, 24);
        // the paper identifies this with S4 itself
        assert!(crate::group::is_isomorphic(&sd, &s4).is_some());
    }

    #[test]
    fn opposite_quotients_work() {
        let s4 = g("S4");
        let op = opposite(&s4);
        let subs = op.normal_abelian_subgroups();
        assert_eq!(subs.len(), 2);
    }
}
