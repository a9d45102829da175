//! Alternating bicharacters: the canonical form of k^x-valued second
//! cohomology on abelian groups.
//!
//! A class mu on abelian N is determined by Alt(mu)(x, y) = mu(x, y) -
//! mu(y, x) (written additively), and every alternating bicharacter arises
//! from the upper-triangular cocycle on an invariant-factor basis. Working
//! with forms instead of raw cocycles makes invariance scans and
//! deduplication plain table equality.

use super::CohomologyClass2;
use crate::error::{Error, Result};
use crate::group::{AbelianStructure, Group, Subgroup};
use std::sync::Arc;

/// Domain of a bicharacter: one abelian subgroup (square case) or a pair
/// of elementwise-commuting subgroups.
#[derive(Debug, Clone)]
pub enum AltDomain {
    Square(Subgroup),
    Pair(Subgroup, Subgroup),
}

impl AltDomain {
    pub fn left(&self) -> &Subgroup {
        match self {
            AltDomain::Square(s) => s,
            AltDomain::Pair(a, _) => a,
        }
    }

    pub fn right(&self) -> &Subgroup {
        match self {
            AltDomain::Square(s) => s,
            AltDomain::Pair(_, b) => b,
        }
    }
}

/// b(x, y) stored over the sorted element lists of the two legs, values in
/// Z/modulus, additive in each slot, and alternating (b(x,x) = 0) in the
/// square case.
#[derive(Debug, Clone)]
pub struct AlternatingBicharacter {
    pub domain: AltDomain,
    pub modulus: u64,
    /// row-major |left| x |right|
    pub values: Vec<u64>,
}

impl PartialEq for AlternatingBicharacter {
    fn eq(&self, other: &Self) -> bool {
        self.domain.left().elements == other.domain.left().elements
            && self.domain.right().elements == other.domain.right().elements
            && self.modulus == other.modulus
            && self.values == other.values
    }
}
impl Eq for AlternatingBicharacter {}

impl AlternatingBicharacter {
    pub fn zero(domain: AltDomain, modulus: u64) -> AlternatingBicharacter {
        let rows = domain.left().order();
        let cols = domain.right().order();
        AlternatingBicharacter {
            domain,
            modulus,
            values: vec![0; rows * cols],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v % self.modulus == 0)
    }

    /// value at parent elements (x, y)
    pub fn at(&self, x: usize, y: usize) -> u64 {
        let l = self.domain.left();
        let r = self.domain.right();
        let i = l.elements.binary_search(&x).expect("x in left leg");
        let j = r.elements.binary_search(&y).expect("y in right leg");
        self.values[i * r.order() + j]
    }

    pub fn at_local(&self, i: usize, j: usize) -> u64 {
        self.values[i * self.domain.right().order() + j]
    }

    /// additive in each slot; alternating on the diagonal in square case
    pub fn scan_bilinear(&self) -> bool {
        let l = self.domain.left();
        let r = self.domain.right();
        let parent = &l.parent;
        let m = self.modulus;
        for (i, &x1) in l.elements.iter().enumerate() {
            for (i2, &x2) in l.elements.iter().enumerate() {
                let x12 = parent.mul(x1, x2);
                let i12 = l.elements.binary_search(&x12).unwrap();
                for j in 0..r.order() {
                    let lhs = self.values[i12 * r.order() + j];
                    let rhs =
                        (self.values[i * r.order() + j] + self.values[i2 * r.order() + j]) % m;
                    if lhs % m != rhs {
                        return false;
                    }
                }
            }
        }
        for (j, &y1) in r.elements.iter().enumerate() {
            for (j2, &y2) in r.elements.iter().enumerate() {
                let y12 = parent.mul(y1, y2);
                let j12 = r.elements.binary_search(&y12).unwrap();
                for i in 0..l.order() {
                    let lhs = self.values[i * r.order() + j12];
                    let rhs =
                        (self.values[i * r.order() + j] + self.values[i * r.order() + j2]) % m;
                    if lhs % m != rhs {
                        return false;
                    }
                }
            }
        }
        if let AltDomain::Square(s) = &self.domain {
            for i in 0..s.order() {
                if self.values[i * s.order() + i] % m != 0 {
                    return false;
                }
            }
        }
        true
    }

    /// G-invariance scan: b(gxg^-1, gyg^-1) = b(x, y) for all g.
    pub fn is_invariant(&self) -> bool {
        let l = self.domain.left();
        let r = self.domain.right();
        let parent = &l.parent;
        for g in 0..parent.order {
            for &x in &l.elements {
                let cx = parent.conj(g, x);
                if !l.contains(cx) {
                    return false;
                }
                for &y in &r.elements {
                    let cy = parent.conj(g, y);
                    if !r.contains(cy) {
                        return false;
                    }
                    if self.at(cx, cy) != self.at(x, y) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Alt(mu)(x, y) = mu(x, y) - mu(y, x) on a pair of elementwise-commuting
/// subgroups of mu's group; modulus is inherited from mu.
pub fn alt_bicharacter(
    mu: &CohomologyClass2,
    l1: &Subgroup,
    l2: &Subgroup,
) -> Result<AlternatingBicharacter> {
    if !Arc::ptr_eq(&l1.parent, &mu.group) || !Arc::ptr_eq(&l2.parent, &mu.group) {
        return Err(Error::NotSubgroup("alt_bicharacter legs".into()));
    }
    let parent = &mu.group;
    for &x in &l1.elements {
        for &y in &l2.elements {
            if parent.mul(x, y) != parent.mul(y, x) {
                return Err(Error::Mismatch(format!(
                    "legs contain a non-commuting pair ({x}, {y})"
                )));
            }
        }
    }
    let n = parent.order;
    let m = mu.modulus;
    let mut values = vec![0u64; l1.order() * l2.order()];
    for (i, &x) in l1.elements.iter().enumerate() {
        for (j, &y) in l2.elements.iter().enumerate() {
            values[i * l2.order() + j] =
                (mu.values[x * n + y] + m - mu.values[y * n + x] % m) % m;
        }
    }
    let same = l1.elements == l2.elements;
    let b = AlternatingBicharacter {
        domain: if same {
            AltDomain::Square(l1.clone())
        } else {
            AltDomain::Pair(l1.clone(), l2.clone())
        },
        modulus: m,
        values,
    };
    if !b.scan_bilinear() {
        return Err(Error::CrossCheck("Alt(mu) failed bilinearity".into()));
    }
    Ok(b)
}

/// Reduce a form with values that are multiples of modulus/target into the
/// target modulus (exact).
pub fn rescale_form(b: &AlternatingBicharacter, target: u64) -> Result<AlternatingBicharacter> {
    if b.modulus % target != 0 {
        return Err(Error::Mismatch("rescale target must divide modulus".into()));
    }
    let k = b.modulus / target;
    let mut values = Vec::with_capacity(b.values.len());
    for &v in &b.values {
        if v % k != 0 {
            return Err(Error::CrossCheck(
                "form value not divisible during rescale".into(),
            ));
        }
        values.push(v / k % target);
    }
    Ok(AlternatingBicharacter {
        domain: b.domain.clone(),
        modulus: target,
        values,
    })
}

/// The upper-triangular representative cocycle of an alternating form on an
/// abelian subgroup: mu_b(x, y) = sum_{i<j} x_i y_j b(e_i, e_j) in basis
/// coordinates, valued mod `modulus` (a multiple of the form's modulus).
/// Alt(mu_b) = b exactly.
pub fn class_from_bicharacter(
    b: &AlternatingBicharacter,
    modulus: u64,
) -> Result<CohomologyClass2> {
    let AltDomain::Square(nsub) = &b.domain else {
        return Err(Error::Mismatch("class_from_bicharacter needs one leg".into()));
    };
    if modulus % b.modulus != 0 {
        return Err(Error::Mismatch("modulus must absorb the form".into()));
    }
    if !b.scan_bilinear() {
        return Err(Error::Mismatch("form is not alternating-bilinear".into()));
    }
    let scale = modulus / b.modulus;
    let ab = AbelianStructure::new(nsub.clone())?;
    let r = ab.rank();
    let (ng, to_parent) = nsub.as_group();
    let k = ng.order;
    let mut values = vec![0u64; k * k];
    for a in 0..k {
        let ca = ab.coords_of(to_parent[a]).to_vec();
        for c in 0..k {
            let cc = ab.coords_of(to_parent[c]).to_vec();
            let mut v = 0u64;
            for i in 0..r {
                for j in i + 1..r {
                    let bij = b.at(ab.basis[i], ab.basis[j]) % b.modulus;
                    v = (v + ca[i] % b.modulus * (cc[j] % b.modulus) % b.modulus * bij)
                        % b.modulus;
                }
            }
            values[a * k + c] = v * scale % modulus;
        }
    }
    Ok(CohomologyClass2 {
        group: ng,
        modulus,
        rank: 1,
        values,
    })
}

/// All G-invariant alternating bicharacters on a normal abelian subgroup,
/// zero form first, then sorted by value table. Values live mod the
/// exponent of N.
pub fn invariant_classes(n: &Subgroup) -> Result<Vec<AlternatingBicharacter>> {
    if !n.is_normal {
        return Err(Error::NotNormal);
    }
    if !n.is_abelian {
        return Err(Error::NotAbelian);
    }
    let ab = AbelianStructure::new(n.clone())?;
    let m = ab.exponent.max(1);
    let r = ab.rank();
    let k = n.order();
    // basis values b(e_i, e_j) for i < j range over multiples of m/d_i
    let mut slots = Vec::new();
    for i in 0..r {
        for j in i + 1..r {
            slots.push((i, j, ab.invariant_factors[i]));
        }
    }
    let mut out = Vec::new();
    let mut choice = vec![0u64; slots.len()];
    loop {
        // expand the form to the full table
        let mut values = vec![0u64; k * k];
        for (a, &ea) in n.elements.iter().enumerate() {
            let ca = ab.coords_of(ea).to_vec();
            for (c, &ec) in n.elements.iter().enumerate() {
                let cc = ab.coords_of(ec).to_vec();
                let mut v = 0u64;
                for (s, &(i, j, di)) in slots.iter().enumerate() {
                    let bij = choice[s] * (m / di) % m;
                    // b(e_i, e_j) = bij, b(e_j, e_i) = -bij
                    v = (v + ca[i] * cc[j] % m * bij) % m;
                    v = (v + ca[j] * cc[i] % m * (m - bij) % m) % m;
                }
                values[a * k + c] = v;
            }
        }
        let b = AlternatingBicharacter {
            domain: AltDomain::Square(n.clone()),
            modulus: m,
            values,
        };
        debug_assert!(b.scan_bilinear());
        if b.is_invariant() {
            out.push(b);
        }
        let mut s = 0;
        loop {
            if s == slots.len() {
                out.sort_by(|a, b| a.values.cmp(&b.values));
                return Ok(out);
            }
            choice[s] += 1;
            if choice[s] == slots[s].2 {
                choice[s] = 0;
                s += 1;
            } else {
                break;
            }
        }
    }
}

/// Non-degeneracy: x -> b(x, .) and y -> b(., y) both injective.
pub fn is_nondegenerate(b: &AlternatingBicharacter) -> bool {
    let l = b.domain.left().order();
    let r = b.domain.right().order();
    let m = b.modulus;
    if l != r {
        return false;
    }
    for i in 1..l {
        if (0..r).all(|j| b.values[i * r + j] % m == 0) {
            return false;
        }
    }
    for j in 1..r {
        if (0..l).all(|i| b.values[i * r + j] % m == 0) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::{schur_multiplier, SchurContext};
    use crate::group::build_group;
    use crate::Caps;

    fn g(spec: &str) -> Group {
        build_group(spec, &Caps::default()).unwrap()
    }

    #[test]
    fn zero_and_vacuous_nondegeneracy() {
        let v4 = g("C2xC2");
        let full = Subgroup::full(&v4);
        let z = AlternatingBicharacter::zero(AltDomain::Square(full), 2);
        assert!(!is_nondegenerate(&z));
        let triv = Subgroup::trivial(&v4);
        let z1 = AlternatingBicharacter::zero(AltDomain::Square(triv), 1);
        assert!(is_nondegenerate(&z1), "1x1 is vacuously nondegenerate");
    }

    #[test]
    fn v4_schur_class_gives_symplectic_form() {
        // the unique nondegenerate alternating form on V, found two ways
        let v4 = g("C2xC2");
        let ctx = schur_multiplier(&v4, &Caps::default()).unwrap();
        assert_eq!(ctx.factors, vec![2]);
        let mu = CohomologyClass2::from_table(&v4, 4, ctx.class_table(&[1]));
        let full = Subgroup::full(&v4);
        let b = alt_bicharacter(&mu, &full, &full).unwrap();
        let b = rescale_form(&b, 2).unwrap();
        assert!(is_nondegenerate(&b));
        // independent enumeration: invariant forms on V are zero and one
        // nondegenerate form
        let forms = invariant_classes(&full).unwrap();
        assert_eq!(forms.len(), 2);
        assert!(forms[0].is_zero());
        assert_eq!(forms[1].values, b.values);
    }

    #[test]
    fn alt_is_additive_in_the_class() {
        let v4 = g("C2xC2");
        let ctx = SchurContext::new(&v4, 4).unwrap();
        let t1 = ctx.class_table(&[1]);
        let mu1 = CohomologyClass2::from_table(&v4, 4, t1);
        let mu_sum = mu1.add(&mu1);
        let full = Subgroup::full(&v4);
        let b1 = alt_bicharacter(&mu1, &full, &full).unwrap();
        let bs = alt_bicharacter(&mu_sum, &full, &full).unwrap();
        for (a, b) in b1.values.iter().zip(&bs.values) {
            assert_eq!((2 * a) % 4, *b % 4);
        }
    }

    #[test]
    fn roundtrip_on_mixed_group() {
        // Alt(class_from_bicharacter(b)) = b for every alternating form on
        // Z/2 x Z/4 (finite enumeration: two forms)
        let m24 = g("C2xC4");
        let full = Subgroup::full(&m24);
        let forms = invariant_classes(&full).unwrap();
        assert_eq!(forms.len(), 2, "forms on C2xC4: b(e1,e2) in {{0, 2}}");
        for b in &forms {
            let mu = class_from_bicharacter(b, 8).unwrap();
            assert!(mu.scan_cocycle(None));
            let sub_full = Subgroup::full(&mu.group);
            let back = alt_bicharacter(&mu, &sub_full, &sub_full).unwrap();
            let back = rescale_form(&back, b.modulus).unwrap();
            // compare over matching element order: as_group preserves the
            // sorted order of a full subgroup
            assert_eq!(back.values, b.values);
        }
        // same roundtrip on V
        let v4 = g("C2xC2");
        let fullv = Subgroup::full(&v4);
        for b in invariant_classes(&fullv).unwrap() {
            let mu = class_from_bicharacter(&b, 4).unwrap();
            let sub_full = Subgroup::full(&mu.group);
            let back = rescale_form(
                &alt_bicharacter(&mu, &sub_full, &sub_full).unwrap(),
                b.modulus,
            )
            .unwrap();
            assert_eq!(back.values, b.values);
        }
    }

    #[test]
    fn nontrivial_form_class_is_not_a_coboundary() {
        let v4 = g("C2xC2");
        let full = Subgroup::full(&v4);
        let forms = invariant_classes(&full).unwrap();
        let mu = class_from_bicharacter(&forms[1], 4).unwrap();
        let ctx = SchurContext::new(&mu.group, 4).unwrap();
        assert!(!ctx.is_trivial(&mu.values));
        let zero = class_from_bicharacter(&forms[0], 4).unwrap();
        assert!(ctx.is_trivial(&zero.values));
    }

    #[test]
    fn invariant_counts_from_the_examples() {
        // V normal in S4: zero and the nondegenerate form survive
        let s4 = g("S4");
        let v = s4
            .normal_abelian_subgroups()
            .into_iter()
            .find(|s| s.order() == 4)
            .unwrap();
        assert_eq!(invariant_classes(&v).unwrap().len(), 2);

        // cyclic subgroups carry only the zero form
        let d8 = g("D8");
        let r4 = d8
            .all_subgroups()
            .into_iter()
            .find(|s| s.order() == 4 && s.elements.iter().any(|&x| d8.element_order(x) == 4))
            .unwrap();
        assert!(r4.is_normal);
        assert_eq!(invariant_classes(&r4).unwrap().len(), 1);

        let pq = g("pq(3,7)");
        let x7 = pq
            .all_subgroups()
            .into_iter()
            .find(|s| s.order() == 7)
            .unwrap();
        assert_eq!(invariant_classes(&x7).unwrap().len(), 1);
    }
}
