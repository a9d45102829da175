//! Verifiable consequences of the inflation-restriction sequence for a
//! semidirect product G = N x| T:
//!
//!   H^2(G, k^x) = H^2(T, k^x) x M~(G)
//!   0 -> H^1(T, dual N) -> M~(G) -res-> H^2(N, k^x)^T -> H^2(T, dual N)
//!
//! where M~(G) is the kernel of restriction to T. The transgression map
//! has no closed form here, so exactness is certified at the level the
//! sequence pins down numerically: the product decomposition, the size of
//! ker(res restricted to M~), and the image of res inside the invariants.

use super::{h1, h2, CohomologyClass2, GModule, SchurContext};
use crate::error::{Error, Result};
use crate::group::{quotient, AbelianStructure, Group, Subgroup};

pub struct FiveTermReport {
    pub h2_g: u128,
    pub h2_t: u128,
    pub m_tilde: u128,
    pub h1_t_dual_n: u128,
    pub h2_n_invariants: u128,
    pub h2_t_dual_n: u128,
    pub res_kernel_on_m_tilde: u128,
    pub res_image_order: u128,
    /// |H2(G)| = |H2(T)| * |M~|
    pub product_decomposition_ok: bool,
    /// |ker(res|M~)| = |H1(T, dual N)|
    pub exact_at_m_tilde: bool,
    /// image of res lands inside the T-invariants
    pub image_in_invariants: bool,
}

/// Run the five-term consequences for an internal decomposition G = N x| T.
pub fn five_term_check(g: &Group, n: &Subgroup, t: &Subgroup, caps: &crate::Caps) -> Result<FiveTermReport> {
    // validate the decomposition
    if !n.is_normal {
        return Err(Error::NotNormal);
    }
    if n.order() * t.order() != g.order {
        return Err(Error::Mismatch("N and T sizes do not multiply to |G|".into()));
    }
    if t.elements.iter().any(|&x| x != 0 && n.contains(x)) {
        return Err(Error::Mismatch("N and T intersect nontrivially".into()));
    }

    let m = g.order as u64;
    let ctx_g = SchurContext::new(g, m)?;
    let (tg, t_to_parent) = t.as_group();
    let ctx_t = SchurContext::new(&tg, m)?;

    // M~ = kernel of restriction to T, computed by enumerating the (small)
    // Schur group of G
    let classes = ctx_g.all_classes(4096)?;
    let mut m_tilde_coords: Vec<Vec<u64>> = Vec::new();
    for coords in &classes {
        let table = ctx_g.class_table(coords);
        let restricted = restrict_table(&table, g, &t_to_parent, m);
        if ctx_t.is_trivial(&restricted) {
            m_tilde_coords.push(coords.clone());
        }
    }
    let m_tilde = m_tilde_coords.len() as u128;

    // dual of N as a T-module via conjugation
    let ab = AbelianStructure::new(n.clone())?;
    let rank = ab.rank();
    let (h1_size, h2_t_dual_size) = if rank == 0 {
        (1u128, 1u128)
    } else {
        // matrices of t acting on dual coordinates
        let (_q, proj) = quotient_like_embed(g, n, t)?;
        let act = crate::group::dual_conjugation_action(&ab, &proj)?;
        // tg-local element ti corresponds to the coset of its parent image
        let action: Vec<Vec<Vec<u64>>> = (0..tg.order)
            .map(|ti| {
                let qe = proj.apply(t_to_parent[ti]);
                (0..rank)
                    .map(|i| {
                        (0..rank)
                            .map(|j| {
                                let mut chi = vec![0u64; rank];
                                chi[j] = 1;
                                act(qe, &chi)[i]
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let md = GModule::new(&tg, &ab.invariant_factors, action)?;
        (h1(&tg, &md)?.order(), h2(&tg, &md)?.order())
    };

    // T-invariant classes on N, via alternating forms restricted to
    // invariance under conjugation by G (T acts through G; N acts trivially
    // on its own classes, so G-invariance equals T-invariance here)
    let forms = super::invariant_classes(n)?;
    let h2_n_inv = forms.len() as u128;

    // restriction of M~ to N, recognized through Alt
    let (ng, n_to_parent) = n.as_group();
    let n_full = Subgroup::full(&ng);
    let mut images = std::collections::BTreeSet::new();
    let mut kernel = 0u128;
    for coords in &m_tilde_coords {
        let table = ctx_g.class_table(coords);
        let restricted = restrict_table(&table, g, &n_to_parent, m);
        let mu = CohomologyClass2::from_table(&ng, m, restricted);
        let b = super::alt_bicharacter(&mu, &n_full, &n_full)?;
        let b = super::alt::rescale_form(&b, ab.exponent.max(1))?;
        if b.is_zero() {
            kernel += 1;
        }
        images.insert(b.values.clone());
    }
    let res_image_order = images.len() as u128;

    // every restricted class must be T-invariant: check membership in the
    // computed invariant list (translate local form back to parent indices)
    let image_in_invariants = images.iter().all(|vals| {
        forms.iter().any(|f| localized_form(f, n) == *vals)
    });

    let h2_g = ctx_g.order();
    let h2_t = ctx_t.order();
    let report = FiveTermReport {
        h2_g,
        h2_t,
        m_tilde,
        h1_t_dual_n: h1_size,
        h2_n_invariants: h2_n_inv,
        h2_t_dual_n: h2_t_dual_size,
        res_kernel_on_m_tilde: kernel,
        res_image_order,
        product_decomposition_ok: h2_g == h2_t * m_tilde,
        exact_at_m_tilde: kernel == h1_size,
        image_in_invariants,
    };
    let _ = caps;
    Ok(report)
}

/// Restriction of a parent table to a subgroup given by its element list.
fn restrict_table(table: &[u64], g: &Group, to_parent: &[usize], m: u64) -> Vec<u64> {
    let k = to_parent.len();
    let n = g.order;
    let mut out = vec![0u64; k * k];
    for a in 0..k {
        for b in 0..k {
            out[a * k + b] = table[to_parent[a] * n + to_parent[b]] % m;
        }
    }
    out
}

/// A form on subgroup N expressed over local (sorted) element indices.
fn localized_form(b: &super::AlternatingBicharacter, n: &Subgroup) -> Vec<u64> {
    let k = n.order();
    let mut out = vec![0u64; k * k];
    for (i, &x) in n.elements.iter().enumerate() {
        for (j, &y) in n.elements.iter().enumerate() {
            out[i * k + j] = b.at(x, y);
        }
    }
    out
}

/// Projection G -> G/N (the quotient is isomorphic to T but we need the
/// projection for the conjugation action).
fn quotient_like_embed(
    g: &Group,
    n: &Subgroup,
    _t: &Subgroup,
) -> Result<(Group, crate::group::GroupMap)> {
    quotient(g, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_group, find_complement};
    use crate::Caps;

    fn g(spec: &str) -> Group {
        build_group(spec, &Caps::default()).unwrap()
    }

    #[test]
    fn s4_as_v_by_s3() {
        let caps = Caps::default();
        let s4 = g("S4");
        let v = s4
            .normal_abelian_subgroups()
            .into_iter()
            .find(|s| s.order() == 4)
            .unwrap();
        let t = find_complement(&s4, &v).unwrap();
        let rep = five_term_check(&s4, &v, &t, &caps).unwrap();
        // M~(S4) = Z/2, H1(S3, dual V) = 1, restriction into H2(V)^{S3}
        // injective
        assert_eq!(rep.h2_g, 2);
        assert_eq!(rep.h2_t, 1, "H2(S3) is trivial");
        assert_eq!(rep.m_tilde, 2);
        assert_eq!(rep.h1_t_dual_n, 1);
        assert_eq!(rep.res_kernel_on_m_tilde, 1, "restriction injective on M~");
        assert_eq!(rep.h2_n_invariants, 2);
        assert!(rep.product_decomposition_ok);
        assert!(rep.exact_at_m_tilde);
        assert!(rep.image_in_invariants);
    }

    #[test]
    fn direct_product_trivial_case() {
        let caps = Caps::default();
        let c6 = g("C2xC3");
        let n = c6
            .all_subgroups()
            .into_iter()
            .find(|s| s.order() == 2)
            .unwrap();
        let t = c6
            .all_subgroups()
            .into_iter()
            .find(|s| s.order() == 3)
            .unwrap();
        let rep = five_term_check(&c6, &n, &t, &caps).unwrap();
        assert_eq!(rep.h2_g, 1);
        assert_eq!(rep.h2_t, 1);
        assert_eq!(rep.m_tilde, 1);
        assert_eq!(rep.h1_t_dual_n, 1);
        assert_eq!(rep.h2_t_dual_n, 1);
        assert!(rep.product_decomposition_ok && rep.exact_at_m_tilde);
    }
}
