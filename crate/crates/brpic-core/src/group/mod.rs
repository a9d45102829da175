//! Finite group arithmetic on dense multiplication tables.
//!
//! Groups are immutable after construction and shared via `Arc`; element 0
//! is always the identity. All enumeration routines return canonically
//! sorted, duplicate-free output so downstream results are reproducible
//! byte for byte.

mod abelian;
mod aut;
mod families;
mod goursat;

pub use abelian::{abelian_from_factors, dual_conjugation_action, semidirect, AbelianStructure, DualElement};
pub use aut::{all_isomorphisms, automorphism_group, find_complement, is_isomorphic, AutGroup};
pub use families::{build_group, parse_spec, GroupSpecAst};
pub use goursat::{goursat_full_subgroups, GoursatTriple};

use crate::error::{Error, Result};
use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

/// A finite group as a dense multiplication table over indices 0..order,
/// identity at index 0.
#[derive(Debug)]
pub struct FiniteGroup {
    pub order: usize,
    table: Vec<usize>,
    pub inverse: Vec<usize>,
    pub name: String,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.table == other.table
    }
}
impl Eq for FiniteGroup {}

pub type Group = Arc<FiniteGroup>;

impl FiniteGroup {
    /// Build from a row-major table; validates identity/inverse always and
    /// full associativity when `order <= 64`.
    pub fn from_table(table: Vec<usize>, name: impl Into<String>) -> Result<Group> {
        let name = name.into();
        let n2 = table.len();
        let order = (n2 as f64).sqrt() as usize;
        if order * order != n2 || order == 0 {
            return Err(Error::InvalidTable(format!(
                "table length {n2} is not a positive square"
            )));
        }
        if table.iter().any(|&x| x >= order) {
            return Err(Error::InvalidTable("entry out of range".into()));
        }
        for g in 0..order {
            if table[g] != g || table[g * order] != g {
                return Err(Error::InvalidTable(
                    "identity must sit at index 0".into(),
                ));
            }
        }
        let mut inverse = vec![usize::MAX; order];
        for g in 0..order {
            let mut found = None;
            for h in 0..order {
                if table[g * order + h] == 0 {
                    if table[h * order + g] != 0 {
                        return Err(Error::InvalidTable(format!(
                            "one-sided inverse at {g}"
                        )));
                    }
                    found = Some(h);
                    break;
                }
            }
            inverse[g] =
                found.ok_or_else(|| Error::InvalidTable(format!("no inverse for {g}")))?;
        }
        let group = FiniteGroup {
            order,
            table,
            inverse,
            name,
        };
        if order <= 64 {
            group.scan_associativity()?;
        } else {
            // spot-check rows are permutations; full constructions are
            // associative by construction
            for g in 0..order {
                let mut seen = vec![false; order];
                for h in 0..order {
                    let x = group.mul(g, h);
                    if seen[x] {
                        return Err(Error::InvalidTable(format!(
                            "row {g} is not a permutation"
                        )));
                    }
                    seen[x] = true;
                }
            }
        }
        Ok(Arc::new(group))
    }

    /// Full O(n^3) associativity scan.
    pub fn scan_associativity(&self) -> Result<()> {
        let n = self.order;
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Err(Error::InvalidTable(format!(
                            "associativity fails at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// BFS closure from generators of any hashable element type; element
    /// numbering is identity first, then generator-word (BFS) order.
    pub fn from_generators<T, F>(
        gens: &[T],
        identity: T,
        mul: F,
        name: impl Into<String>,
        cap: usize,
    ) -> Result<Group>
    where
        T: Clone + Eq + std::hash::Hash,
        F: Fn(&T, &T) -> T,
    {
        let mut index: HashMap<T, usize> = HashMap::new();
        let mut elems: Vec<T> = vec![identity.clone()];
        index.insert(identity, 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in gens {
                let prod = mul(&elems[i], g);
                if !index.contains_key(&prod) {
                    if elems.len() >= cap {
                        return Err(Error::CapExceeded {
                            what: "group order".into(),
                            got: elems.len() + 1,
                            cap,
                        });
                    }
                    index.insert(prod.clone(), elems.len());
                    elems.push(prod);
                    queue.push_back(elems.len() - 1);
                }
            }
        }
        let n = elems.len();
        let mut table = vec![0usize; n * n];
        for i in 0..n {
            for j in 0..n {
                table[i * n + j] = index[&mul(&elems[i], &elems[j])];
            }
        }
        FiniteGroup::from_table(table, name)
    }

    #[inline(always)]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline(always)]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut n = 1;
        while x != 0 {
            x = self.mul(x, g);
            n += 1;
        }
        n
    }

    /// Multiset of element orders, as sorted (order, count) pairs.
    pub fn order_profile(&self) -> Vec<(usize, usize)> {
        let mut counts: HashMap<usize, usize> = HashMap::new();
        for g in 0..self.order {
            *counts.entry(self.element_order(g)).or_default() += 1;
        }
        let mut v: Vec<_> = counts.into_iter().collect();
        v.sort();
        v
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn center(&self) -> Vec<usize> {
        (0..self.order)
            .filter(|&z| (0..self.order).all(|g| self.mul(z, g) == self.mul(g, z)))
            .collect()
    }

    pub fn exponent(&self) -> usize {
        (0..self.order).fold(1usize, |acc, g| {
            let o = self.element_order(g);
            acc / crate::zmod::gcd(acc as u64, o as u64) as usize * o
        })
    }

    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.order];
        let mut classes = Vec::new();
        for x in 0..self.order {
            if seen[x] {
                continue;
            }
            let mut class: BTreeSet<usize> = BTreeSet::new();
            for g in 0..self.order {
                class.insert(self.conj(g, x));
            }
            for &y in &class {
                seen[y] = true;
            }
            classes.push(class.into_iter().collect());
        }
        classes
    }

    /// Closure of a set of elements under product and inverse.
    pub fn closure(&self, seed: &[usize]) -> Vec<usize> {
        let mut in_set = vec![false; self.order];
        in_set[0] = true;
        let mut elems = vec![0usize];
        let mut queue: VecDeque<usize> = VecDeque::from([0]);
        for &s in seed {
            if !in_set[s] {
                in_set[s] = true;
                elems.push(s);
                queue.push_back(s);
            }
        }
        let gens: Vec<usize> = seed.to_vec();
        while let Some(x) = queue.pop_front() {
            for &g in &gens {
                for y in [self.mul(x, g), self.mul(g, x)] {
                    if !in_set[y] {
                        in_set[y] = true;
                        elems.push(y);
                        queue.push_back(y);
                    }
                }
            }
        }
        elems.sort_unstable();
        elems
    }

    /// Greedy small generating set, deterministic (ascending element scan).
    pub fn generating_set(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut have = vec![false; self.order];
        have[0] = true;
        let mut count = 1;
        for g in 1..self.order {
            if count == self.order {
                break;
            }
            if !have[g] {
                gens.push(g);
                for x in self.closure(&gens) {
                    if !have[x] {
                        have[x] = true;
                        count += 1;
                    }
                }
            }
        }
        gens
    }

    /// All subgroups, as sorted element sets, canonically ordered by
    /// (order, elements). Exponential in principle; fine at order <= 64.
    pub fn all_subgroups(self: &Group) -> Vec<Subgroup> {
        let mut known: BTreeSet<Vec<usize>> = BTreeSet::new();
        known.insert(vec![0]);
        let mut frontier: Vec<Vec<usize>> = vec![vec![0]];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for h in &frontier {
                let member: BTreeSet<usize> = h.iter().copied().collect();
                for g in 1..self.order {
                    if member.contains(&g) {
                        continue;
                    }
                    let mut seed = h.clone();
                    seed.push(g);
                    let k = self.closure(&seed);
                    if known.insert(k.clone()) {
                        next.push(k);
                    }
                }
            }
            frontier = next;
        }
        let mut list: Vec<Vec<usize>> = known.into_iter().collect();
        list.sort_by_key(|s| (s.len(), s.clone()));
        list.into_iter()
            .map(|elems| Subgroup::from_sorted(self.clone(), elems))
            .collect()
    }

    /// Normal abelian subgroups, complete and canonically sorted.
    pub fn normal_abelian_subgroups(self: &Group) -> Vec<Subgroup> {
        self.all_subgroups()
            .into_iter()
            .filter(|s| s.is_abelian && s.is_normal)
            .collect()
    }

    /// Commutator subgroup [G, G].
    pub fn derived_subgroup(self: &Group) -> Subgroup {
        let mut comms = BTreeSet::new();
        for a in 0..self.order {
            for b in 0..self.order {
                let c = self.mul(
                    self.mul(a, b),
                    self.mul(self.inv(a), self.inv(b)),
                );
                comms.insert(c);
            }
        }
        let seed: Vec<usize> = comms.into_iter().collect();
        Subgroup::from_sorted(self.clone(), self.closure(&seed))
    }
}

/// The same element set with reversed multiplication.
pub fn opposite(g: &Group) -> Group {
    let n = g.order;
    let mut table = vec![0usize; n * n];
    for a in 0..n {
        for b in 0..n {
            table[a * n + b] = g.mul(b, a);
        }
    }
    FiniteGroup::from_table(table, format!("{}^op", g.name)).expect("opposite of a valid group")
}

/// Direct product with coordinate embeddings; pair (a, b) gets index
/// a*|H| + b, so the identity pair is 0.
pub fn direct_product(g: &Group, h: &Group, cap: usize) -> Result<(Group, GroupMap, GroupMap)> {
    let n = g.order * h.order;
    if n > cap {
        return Err(Error::CapExceeded {
            what: "direct product order".into(),
            got: n,
            cap,
        });
    }
    let mut table = vec![0usize; n * n];
    for a1 in 0..g.order {
        for b1 in 0..h.order {
            let i = a1 * h.order + b1;
            for a2 in 0..g.order {
                for b2 in 0..h.order {
                    let j = a2 * h.order + b2;
                    table[i * n + j] = g.mul(a1, a2) * h.order + h.mul(b1, b2);
                }
            }
        }
    }
    let p = FiniteGroup::from_table(table, format!("{}x{}", g.name, h.name))?;
    let embed_g = GroupMap::new(
        g.clone(),
        p.clone(),
        (0..g.order).map(|a| a * h.order).collect(),
    )?;
    let embed_h = GroupMap::new(h.clone(), p.clone(), (0..h.order).collect())?;
    Ok((p, embed_g, embed_h))
}

/// A subgroup as a sorted element set with cached structure flags.
#[derive(Debug, Clone)]
pub struct Subgroup {
    pub parent: Group,
    pub elements: Vec<usize>,
    membership: Vec<bool>,
    pub is_normal: bool,
    pub is_abelian: bool,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.parent, &other.parent) && self.elements == other.elements
    }
}
impl Eq for Subgroup {}

impl Subgroup {
    /// Wrap a sorted element set already known to be closed.
    pub fn from_sorted(parent: Group, elements: Vec<usize>) -> Subgroup {
        let mut membership = vec![false; parent.order];
        for &e in &elements {
            membership[e] = true;
        }
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(elements
            .iter()
            .all(|&a| elements.iter().all(|&b| membership[parent.mul(a, b)])));
        let is_abelian = elements
            .iter()
            .all(|&a| elements.iter().all(|&b| parent.mul(a, b) == parent.mul(b, a)));
        let is_normal = (0..parent.order)
            .all(|g| elements.iter().all(|&x| membership[parent.conj(g, x)]));
        Subgroup {
            parent,
            elements,
            membership,
            is_normal,
            is_abelian,
        }
    }

    pub fn generated(parent: &Group, seed: &[usize]) -> Subgroup {
        Subgroup::from_sorted(parent.clone(), parent.closure(seed))
    }

    pub fn trivial(parent: &Group) -> Subgroup {
        Subgroup::from_sorted(parent.clone(), vec![0])
    }

    pub fn full(parent: &Group) -> Subgroup {
        Subgroup::from_sorted(parent.clone(), (0..parent.order).collect())
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    #[inline]
    pub fn contains(&self, g: usize) -> bool {
        self.membership[g]
    }

    /// Realize the subgroup as a standalone group; `to_parent` maps local
    /// indices back to parent indices (local order = sorted parent indices,
    /// so the identity stays at 0).
    pub fn as_group(&self) -> (Group, Vec<usize>) {
        let n = self.elements.len();
        let mut local: HashMap<usize, usize> = HashMap::new();
        for (i, &e) in self.elements.iter().enumerate() {
            local.insert(e, i);
        }
        let mut table = vec![0usize; n * n];
        for i in 0..n {
            for j in 0..n {
                table[i * n + j] = local[&self.parent.mul(self.elements[i], self.elements[j])];
            }
        }
        let g = FiniteGroup::from_table(table, format!("{}<{}>", self.parent.name, n))
            .expect("closed subset is a group");
        (g, self.elements.clone())
    }

    pub fn conjugate_by(&self, g: usize) -> Subgroup {
        let mut elems: Vec<usize> = self
            .elements
            .iter()
            .map(|&x| self.parent.conj(g, x))
            .collect();
        elems.sort_unstable();
        Subgroup::from_sorted(self.parent.clone(), elems)
    }
}

/// Quotient by a normal subgroup; cosets are numbered by ascending minimal
/// representative so the identity coset is 0. Returns the quotient and the
/// projection.
pub fn quotient(g: &Group, n: &Subgroup) -> Result<(Group, GroupMap)> {
    if !Arc::ptr_eq(&n.parent, g) {
        return Err(Error::NotSubgroup("quotient".into()));
    }
    if !n.is_normal {
        return Err(Error::NotNormal);
    }
    let ord = g.order;
    let mut coset_of = vec![usize::MAX; ord];
    let mut reps = Vec::new();
    for x in 0..ord {
        if coset_of[x] != usize::MAX {
            continue;
        }
        let id = reps.len();
        reps.push(x);
        for &h in &n.elements {
            coset_of[g.mul(x, h)] = id;
        }
    }
    let q = reps.len();
    let mut table = vec![0usize; q * q];
    for (i, &a) in reps.iter().enumerate() {
        for (j, &b) in reps.iter().enumerate() {
            table[i * q + j] = coset_of[g.mul(a, b)];
        }
    }
    let qg = FiniteGroup::from_table(table, format!("{}/N{}", g.name, n.order()))?;
    let proj = GroupMap::new(g.clone(), qg.clone(), coset_of)?;
    Ok((qg, proj))
}

/// A homomorphism between table groups, stored as the image array.
#[derive(Debug, Clone)]
pub struct GroupMap {
    pub source: Group,
    pub target: Group,
    pub images: Vec<usize>,
}

impl PartialEq for GroupMap {
    fn eq(&self, other: &Self) -> bool {
        self.images == other.images
    }
}
impl Eq for GroupMap {}
impl PartialOrd for GroupMap {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for GroupMap {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.images.cmp(&other.images)
    }
}

impl GroupMap {
    /// Verified constructor: checks the homomorphism property by full scan.
    pub fn new(source: Group, target: Group, images: Vec<usize>) -> Result<GroupMap> {
        if images.len() != source.order || images.iter().any(|&x| x >= target.order) {
            return Err(Error::NotHomomorphism);
        }
        for a in 0..source.order {
            for b in 0..source.order {
                if images[source.mul(a, b)] != target.mul(images[a], images[b]) {
                    return Err(Error::NotHomomorphism);
                }
            }
        }
        Ok(GroupMap {
            source,
            target,
            images,
        })
    }

    /// Unchecked constructor for maps built correct by construction.
    pub fn new_unchecked(source: Group, target: Group, images: Vec<usize>) -> GroupMap {
        GroupMap {
            source,
            target,
            images,
        }
    }

    pub fn identity(g: &Group) -> GroupMap {
        GroupMap::new_unchecked(g.clone(), g.clone(), (0..g.order).collect())
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn is_bijective(&self) -> bool {
        if self.source.order != self.target.order {
            return false;
        }
        let mut seen = vec![false; self.target.order];
        for &y in &self.images {
            if seen[y] {
                return false;
            }
            seen[y] = true;
        }
        true
    }

    /// self after other: x -> self(other(x)).
    pub fn compose(&self, other: &GroupMap) -> GroupMap {
        debug_assert_eq!(other.target.order, self.source.order);
        GroupMap::new_unchecked(
            other.source.clone(),
            self.target.clone(),
            other.images.iter().map(|&x| self.images[x]).collect(),
        )
    }

    pub fn inverse_map(&self) -> Result<GroupMap> {
        if !self.is_bijective() {
            return Err(Error::NotBijective);
        }
        let mut inv = vec![0usize; self.source.order];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y] = x;
        }
        Ok(GroupMap::new_unchecked(
            self.target.clone(),
            self.source.clone(),
            inv,
        ))
    }

    pub fn kernel(&self) -> Subgroup {
        let elems: Vec<usize> = (0..self.source.order)
            .filter(|&x| self.images[x] == 0)
            .collect();
        Subgroup::from_sorted(self.source.clone(), elems)
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.target.order];
        for &y in &self.images {
            seen[y] = true;
        }
        seen.into_iter().all(|b| b)
    }

    /// Conjugation by g as an automorphism.
    pub fn conjugation(g: &Group, by: usize) -> GroupMap {
        GroupMap::new_unchecked(
            g.clone(),
            g.clone(),
            (0..g.order).map(|x| g.conj(by, x)).collect(),
        )
    }
}
