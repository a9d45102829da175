//! Goursat enumeration of subgroups of G x H with full projections.
//!
//! A subgroup L <= G x H projects onto both factors exactly when it is the
//! pullback {(x, y) : phi(x L1) = y L2} for normal subgroups L1 of G, L2 of
//! H and an isomorphism phi: G/L1 -> H/L2, so enumerating triples replaces
//! a brute-force scan of the product's subgroup lattice.

use super::{
    all_isomorphisms, direct_product, quotient, Group, GroupMap, Subgroup,
};
use crate::caps::Caps;
use crate::error::Result;

/// (L1 normal in G, L2 normal in H, phi: G/L1 -> H/L2) plus the realized
/// subgroup of G x H.
pub struct GoursatTriple {
    pub l1: Subgroup,
    pub l2: Subgroup,
    /// isomorphism between the quotients
    pub phi: GroupMap,
    /// projections used to define phi's source and target
    pub proj1: GroupMap,
    pub proj2: GroupMap,
    /// the product group G x H shared by all triples of one enumeration
    pub product: Group,
    /// realized subgroup of `product`, sorted element set
    pub realized: Subgroup,
}

impl GoursatTriple {
    /// |L| = |L1| * |G| = |L2| * |H| for full-projection subgroups.
    pub fn check_sizes(&self, g_order: usize, h_order: usize) -> bool {
        let l = self.realized.order();
        l == self.l1.order() * h_order && l == self.l2.order() * g_order
    }
}

/// Enumerate all Goursat triples over G x H. With `abelian_legs_only`, L1
/// and L2 are restricted to abelian normal subgroups. Deterministic order:
/// legs ascending by (|L1|, L1 elements, |L2|, L2 elements), then the
/// isomorphism transversal sorted by image vector.
pub fn goursat_full_subgroups(
    g: &Group,
    h: &Group,
    abelian_legs_only: bool,
    caps: &Caps,
) -> Result<Vec<GoursatTriple>> {
    let (product, _, _) = direct_product(g, h, caps.product)?;
    let normals_g: Vec<Subgroup> = g
        .all_subgroups()
        .into_iter()
        .filter(|s| s.is_normal && (!abelian_legs_only || s.is_abelian))
        .collect();
    let normals_h: Vec<Subgroup> = h
        .all_subgroups()
        .into_iter()
        .filter(|s| s.is_normal && (!abelian_legs_only || s.is_abelian))
        .collect();

    let mut out = Vec::new();
    for l1 in &normals_g {
        let (q1, proj1) = quotient(g, l1)?;
        for l2 in &normals_h {
            if l1.order() * h.order != l2.order() * g.order {
                continue; // |G/L1| != |H/L2|
            }
            let (q2, proj2) = quotient(h, l2)?;
            let isos = all_isomorphisms(&q1, &q2, caps)?;
            for phi in isos {
                let realized = realize(&product, g, h, &proj1, &proj2, &phi);
                out.push(GoursatTriple {
                    l1: l1.clone(),
                    l2: l2.clone(),
                    phi,
                    proj1: proj1.clone(),
                    proj2: proj2.clone(),
                    product: product.clone(),
                    realized,
                });
            }
        }
    }
    Ok(out)
}

fn realize(
    product: &Group,
    g: &Group,
    h: &Group,
    proj1: &GroupMap,
    proj2: &GroupMap,
    phi: &GroupMap,
) -> Subgroup {
    let mut elems = Vec::new();
    for x in 0..g.order {
        let qx = phi.apply(proj1.apply(x));
        for y in 0..h.order {
            if proj2.apply(y) == qx {
                elems.push(x * h.order + y);
            }
        }
    }
    elems.sort_unstable();
    Subgroup::from_sorted(product.clone(), elems)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_group, opposite};
    use crate::Caps;
    use std::collections::BTreeSet;

    fn g(spec: &str) -> Group {
        build_group(spec, &Caps::default()).unwrap()
    }

    #[test]
    fn graph_triples_of_s4() {
        let caps = Caps::default();
        let s4 = g("S4");
        let triples = goursat_full_subgroups(&s4, &s4, false, &caps).unwrap();
        // L1 = L2 = 1 blocks are graphs of Aut(S4): 24 of them
        let graphs = triples
            .iter()
            .filter(|t| t.l1.order() == 1 && t.l2.order() == 1)
            .count();
        assert_eq!(graphs, 24);
        for t in &triples {
            assert!(t.check_sizes(24, 24));
        }
    }

    #[test]
    fn z2_square_exhaustive() {
        let caps = Caps::default();
        let c2 = g("C2");
        let triples = goursat_full_subgroups(&c2, &c2, false, &caps).unwrap();
        // graph of identity and the full product
        assert_eq!(triples.len(), 2);
        let sizes: BTreeSet<usize> = triples.iter().map(|t| t.realized.order()).collect();
        assert_eq!(sizes, BTreeSet::from([2, 4]));
    }

    #[test]
    fn abelian_flag_v_legs() {
        let caps = Caps::default();
        let s4 = g("S4");
        let triples = goursat_full_subgroups(&s4, &s4, true, &caps).unwrap();
        let v_legs = triples
            .iter()
            .filter(|t| t.l1.order() == 4 && t.l2.order() == 4)
            .count();
        // phi ranges over Aut(S3): 6 triples
        assert_eq!(v_legs, 6);
    }

    /// Brute-force oracle: realized subgroups must match the full-projection
    /// subgroups of the product exactly.
    fn brute_force_full_projection(gr: &Group, hr: &Group) -> BTreeSet<Vec<usize>> {
        let caps = Caps::default();
        let (p, _, _) = direct_product(gr, hr, caps.product).unwrap();
        p.all_subgroups()
            .into_iter()
            .filter(|s| {
                let mut p1 = BTreeSet::new();
                let mut p2 = BTreeSet::new();
                for &e in &s.elements {
                    p1.insert(e / hr.order);
                    p2.insert(e % hr.order);
                }
                p1.len() == gr.order && p2.len() == hr.order
            })
            .map(|s| s.elements)
            .collect()
    }

    #[test]
    fn matches_bruteforce_on_small_products() {
        let caps = Caps::default();
        for (a, b) in [("C2", "C2"), ("S3", "S3"), ("C4", "C4"), ("D8", "D8")] {
            let ga = g(a);
            let gb = opposite(&g(b));
            let triples = goursat_full_subgroups(&ga, &gb, false, &caps).unwrap();
            let got: BTreeSet<Vec<usize>> = triples
                .iter()
                .map(|t| t.realized.elements.clone())
                .collect();
            assert_eq!(got.len(), triples.len(), "no duplicate triples");
            let want = brute_force_full_projection(&ga, &gb);
            assert_eq!(got, want, "{a} x {b}^op");
        }
    }
}
