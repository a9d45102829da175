//! Automorphism groups and isomorphism testing by backtracking on
//! generator images, with invariant pruning.

use super::{Group, GroupMap, Subgroup};
use crate::caps::Caps;
use crate::error::{Error, Result};

/// Aut(G) with the inner subgroup identified and an outer transversal.
pub struct AutGroup {
    pub group: Group,
    /// all automorphisms, sorted by image vector
    pub all: Vec<GroupMap>,
    /// indices into `all` realizing Inn(G)
    pub inner: Vec<usize>,
    /// coset transversal of Out(G): indices into `all`, identity coset
    /// first; every automorphism is transversal[i] composed with an inner
    pub outer_transversal: Vec<usize>,
    /// coset index of every automorphism
    pub coset_of: Vec<usize>,
}

impl AutGroup {
    pub fn out_order(&self) -> usize {
        self.outer_transversal.len()
    }

    pub fn aut_order(&self) -> usize {
        self.all.len()
    }
}

/// Enumerate Aut(G) by backtracking over images of a generating set.
pub fn automorphism_group(g: &Group, caps: &Caps) -> Result<AutGroup> {
    if g.order > caps.analysis {
        return Err(Error::CapExceeded {
            what: "automorphism group order cap".into(),
            got: g.order,
            cap: caps.analysis,
        });
    }
    let gens = g.generating_set();
    let mut images = all_embeddings(g, g, &gens, true, caps.max_automorphisms)?;
    images.sort();
    let all: Vec<GroupMap> = images
        .into_iter()
        .map(|im| GroupMap::new_unchecked(g.clone(), g.clone(), im))
        .collect();

    // Inn(G) via conjugation maps
    let mut inner = Vec::new();
    for x in 0..g.order {
        let conj = GroupMap::conjugation(g, x);
        let idx = all
            .binary_search_by(|m| m.images.cmp(&conj.images))
            .map_err(|_| Error::CrossCheck("conjugation missing from Aut".into()))?;
        if !inner.contains(&idx) {
            inner.push(idx);
        }
    }
    inner.sort_unstable();
    let z = g.center().len();
    if inner.len() != g.order / z {
        return Err(Error::CrossCheck("|Inn| != |G|/|Z|".into()));
    }

    // coset decomposition: a ~ b iff a^{-1} b inner; greedy over sorted list
    let mut coset_of = vec![usize::MAX; all.len()];
    let mut transversal = Vec::new();
    for i in 0..all.len() {
        if coset_of[i] != usize::MAX {
            continue;
        }
        let c = transversal.len();
        transversal.push(i);
        // coset i . Inn
        for &j in &inner {
            let comp = all[i].compose(&all[j]);
            let idx = all
                .binary_search_by(|m| m.images.cmp(&comp.images))
                .expect("composition stays in Aut");
            coset_of[idx] = c;
        }
    }
    if transversal.len() * inner.len() != all.len() {
        return Err(Error::CrossCheck("coset decomposition of Aut failed".into()));
    }
    // identity coset first: identity map sorts wherever, so rotate
    let id_images: Vec<usize> = (0..g.order).collect();
    let id_idx = all
        .binary_search_by(|m| m.images.cmp(&id_images))
        .expect("identity is an automorphism");
    let id_coset = coset_of[id_idx];
    if id_coset != 0 {
        transversal.swap(0, id_coset);
        for c in coset_of.iter_mut() {
            if *c == 0 {
                *c = id_coset;
            } else if *c == id_coset {
                *c = 0;
            }
        }
    }
    // use the identity itself as the representative of coset 0
    transversal[0] = id_idx;

    Ok(AutGroup {
        group: g.clone(),
        all,
        inner,
        outer_transversal: transversal,
        coset_of,
    })
}

/// A witness isomorphism G -> H, or None.
pub fn is_isomorphic(g: &Group, h: &Group) -> Option<GroupMap> {
    if g.order != h.order {
        return None;
    }
    if g.order_profile() != h.order_profile() {
        return None;
    }
    if g.center().len() != h.center().len() {
        return None;
    }
    if g.is_abelian() != h.is_abelian() {
        return None;
    }
    if g.derived_subgroup().order() != h.derived_subgroup().order() {
        return None;
    }
    let gens = g.generating_set();
    let found = all_embeddings(g, h, &gens, false, 1).ok()?;
    found
        .into_iter()
        .next()
        .map(|im| GroupMap::new_unchecked(g.clone(), h.clone(), im))
}

/// All isomorphisms G -> H (empty when none): one witness composed with
/// every automorphism of G.
pub fn all_isomorphisms(g: &Group, h: &Group, caps: &Caps) -> Result<Vec<GroupMap>> {
    let Some(w) = is_isomorphic(g, h) else {
        return Ok(Vec::new());
    };
    let aut = automorphism_group(g, caps)?;
    let mut out: Vec<GroupMap> = aut
        .all
        .iter()
        .map(|a| w.compose(a))
        .collect();
    out.sort();
    Ok(out)
}

/// Backtracking core: all bijective homomorphisms G -> H sending the given
/// generating set anywhere consistent. `all` controls whether to enumerate
/// every solution (true) or stop at `limit` (used with limit=1 for a single
/// witness). Errors with CapExceeded when more than `limit` solutions exist
/// in `all` mode.
fn all_embeddings(
    g: &Group,
    h: &Group,
    gens: &[usize],
    all: bool,
    limit: usize,
) -> Result<Vec<Vec<usize>>> {
    let orders_h: Vec<usize> = (0..h.order).map(|x| h.element_order(x)).collect();
    let mut candidates: Vec<Vec<usize>> = Vec::new();
    for &s in gens {
        let os = g.element_order(s);
        candidates.push((0..h.order).filter(|&t| orders_h[t] == os).collect());
    }
    let mut solutions = Vec::new();
    let mut chosen = vec![0usize; gens.len()];
    backtrack(
        g,
        h,
        gens,
        &candidates,
        0,
        &mut chosen,
        &mut solutions,
        all,
        limit,
    )?;
    Ok(solutions)
}

#[allow(clippy::too_many_arguments)]
fn backtrack(
    g: &Group,
    h: &Group,
    gens: &[usize],
    candidates: &[Vec<usize>],
    depth: usize,
    chosen: &mut Vec<usize>,
    solutions: &mut Vec<Vec<usize>>,
    all: bool,
    limit: usize,
) -> Result<()> {
    if depth == gens.len() {
        if let Some(full) = extend_hom(g, h, &gens[..depth], chosen) {
            if full.len() == g.order && is_bijection(&full, h.order) {
                let images: Vec<usize> = (0..g.order).map(|x| full[x]).collect();
                solutions.push(images);
                if all && solutions.len() > limit {
                    return Err(Error::CapExceeded {
                        what: "automorphism count".into(),
                        got: solutions.len(),
                        cap: limit,
                    });
                }
            }
        }
        return Ok(());
    }
    for &cand in &candidates[depth] {
        chosen[depth] = cand;
        // partial consistency: the prefix must define an injective hom on
        // the subgroup it generates
        if extend_hom(g, h, &gens[..=depth], &chosen[..=depth]).is_some() {
            backtrack(
                g,
                h,
                gens,
                candidates,
                depth + 1,
                chosen,
                solutions,
                all,
                limit,
            )?;
            if !all && !solutions.is_empty() {
                return Ok(());
            }
        }
    }
    Ok(())
}

/// Extend gen -> image assignments to the generated subgroup by word
/// closure; None on any inconsistency or non-injectivity.
fn extend_hom(
    g: &Group,
    h: &Group,
    gens: &[usize],
    images: &[usize],
) -> Option<Vec<usize>> {
    let mut map = vec![usize::MAX; g.order];
    let mut hit = vec![false; h.order];
    map[0] = 0;
    hit[0] = true;
    let mut frontier = vec![0usize];
    let mut i = 0;
    while i < frontier.len() {
        let x = frontier[i];
        i += 1;
        for (j, &s) in gens.iter().enumerate() {
            let xs = g.mul(x, s);
            let img = h.mul(map[x], images[j]);
            if map[xs] == usize::MAX {
                if hit[img] {
                    return None; // not injective
                }
                map[xs] = img;
                hit[img] = true;
                frontier.push(xs);
            } else if map[xs] != img {
                return None; // relation violated
            }
        }
    }
    // close also under left products to certify the homomorphism property
    for &x in &frontier {
        for &y in &frontier {
            let xy = g.mul(x, y);
            if map[xy] == usize::MAX || map[xy] != h.mul(map[x], map[y]) {
                return None;
            }
        }
    }
    let defined: Vec<usize> = map;
    Some(defined)
}

fn is_bijection(map: &[usize], target_order: usize) -> bool {
    if map.iter().any(|&x| x == usize::MAX) {
        return false;
    }
    let mut seen = vec![false; target_order];
    for &y in map.iter() {
        if seen[y] {
            return false;
        }
        seen[y] = true;
    }
    map.len() == target_order
}

/// Find an internal complement T to a normal subgroup N (N x| T = G),
/// smallest by element set; None when no complement exists.
pub fn find_complement(g: &Group, n: &Subgroup) -> Option<Subgroup> {
    let target = g.order / n.order();
    g.all_subgroups()
        .into_iter()
        .find(|t| t.order() == target && t.elements.iter().all(|&x| x == 0 || !n.contains(x)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_group, opposite};
    use crate::Caps;

    fn g(spec: &str) -> Group {
        build_group(spec, &Caps::default()).unwrap()
    }

    #[test]
    fn aut_orders() {
        let caps = Caps::default();
        assert_eq!(automorphism_group(&g("C2xC2"), &caps).unwrap().aut_order(), 6);
        assert_eq!(automorphism_group(&g("S4"), &caps).unwrap().aut_order(), 24);
        assert_eq!(automorphism_group(&g("D8"), &caps).unwrap().aut_order(), 8);
        assert_eq!(automorphism_group(&g("Q8"), &caps).unwrap().aut_order(), 24);
    }

    #[test]
    fn out_groups() {
        let caps = Caps::default();
        // Out(S4) = 1
        assert_eq!(automorphism_group(&g("S4"), &caps).unwrap().out_order(), 1);
        // Out(Q8) = S3
        let aut = automorphism_group(&g("Q8"), &caps).unwrap();
        assert_eq!(aut.out_order(), 6);
        // Out(D8) = C2
        assert_eq!(automorphism_group(&g("D8"), &caps).unwrap().out_order(), 2);
        // Out(D30) = (Z/15)^x / {+-1} of order 4
        assert_eq!(automorphism_group(&g("D30"), &caps).unwrap().out_order(), 4);
        // Out(D18) has order 3
        assert_eq!(automorphism_group(&g("D18"), &caps).unwrap().out_order(), 3);
    }

    #[test]
    fn aut_closure_properties() {
        let caps = Caps::default();
        for spec in ["S3", "D8", "Q8", "A4"] {
            let grp = g(spec);
            let aut = automorphism_group(&grp, &caps).unwrap();
            assert_eq!(
                aut.aut_order(),
                aut.inner.len() * aut.out_order(),
                "{spec}"
            );
            // composition and inversion stay inside
            for a in aut.all.iter().take(6) {
                for b in aut.all.iter().take(6) {
                    let c = a.compose(b);
                    assert!(aut
                        .all
                        .binary_search_by(|m| m.images.cmp(&c.images))
                        .is_ok());
                }
                let inv = a.inverse_map().unwrap();
                assert!(aut
                    .all
                    .binary_search_by(|m| m.images.cmp(&inv.images))
                    .is_ok());
            }
        }
    }

    #[test]
    fn iso_tests() {
        assert!(is_isomorphic(&g("C4"), &g("C2xC2")).is_none());
        assert!(is_isomorphic(&g("S4"), &g("S4")).is_some());
        assert!(is_isomorphic(&g("D12"), &g("A4")).is_none());
        assert!(is_isomorphic(&g("C6"), &g("C2xC3")).is_some());
        let s3 = g("S3");
        let w = is_isomorphic(&s3, &opposite(&s3)).unwrap();
        assert!(w.is_bijective());
        assert!(is_isomorphic(&g("pq(2,3)"), &s3).is_some());
    }

    #[test]
    fn complements() {
        let s4 = g("S4");
        let v = s4
            .normal_abelian_subgroups()
            .into_iter()
            .find(|s| s.order() == 4)
            .unwrap();
        let t = find_complement(&s4, &v).unwrap();
        assert_eq!(t.order(), 6);
        // Q8 has no complement to <-1>
        let q8 = g("Q8");
        let center = q8
            .normal_abelian_subgroups()
            .into_iter()
            .find(|s| s.order() == 2)
            .unwrap();
        assert!(find_complement(&q8, &center).is_none());
    }
}
