//! Invertible Vec_G-bimodule categories as pairs (L, mu) with L a
//! full-projection subgroup of G x G^op and mu a k^x-valued class on L.
//!
//! Invertibility needs abelian legs L1 = L cap (G x 1), L2 = L cap
//! (1 x G^op) with Alt(mu) nondegenerate between them. Data are collected
//! into orbits under conjugation by G x G^op combined with cohomologous
//! identification; each orbit is one element of BrPic(Vec_G).

use crate::cohomology::{
    alt::rescale_form, AltDomain, AlternatingBicharacter, SchurContext,
};
use crate::error::{Error, Result};
use crate::group::{
    goursat_full_subgroups, opposite, GoursatTriple, Group, Subgroup,
};
use crate::lagrangian::Lagrangian;
use crate::Caps;
use rayon::prelude::*;
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// One Goursat triple with its realized group and Schur data.
pub struct TripleData {
    pub triple: GoursatTriple,
    /// realized L as a standalone group; local index i corresponds to
    /// product element to_product[i]
    pub lgroup: Group,
    pub to_product: Vec<usize>,
    from_product: HashMap<usize, usize>,
    pub schur: SchurContext,
    /// legs as local subgroups of lgroup
    pub l1_local: Subgroup,
    pub l2_local: Subgroup,
}

/// An invertible datum: a class (by coordinates) on one realized triple.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BimoduleDatum {
    pub triple: usize,
    pub coords: Vec<u64>,
}

/// An orbit of data under conjugation + cohomologous identification; the
/// representative is the lexicographic minimum.
pub struct BimoduleOrbit {
    pub representative: BimoduleDatum,
    pub items: Vec<BimoduleDatum>,
}

impl BimoduleOrbit {
    pub fn size(&self) -> usize {
        self.items.len()
    }
}

/// Everything produced by the enumeration; analyses keep this alive to act
/// on data.
pub struct BimoduleContext {
    pub group: Group,
    pub gop: Group,
    pub product: Group,
    pub triples: Vec<TripleData>,
    by_elements: BTreeMap<Vec<usize>, usize>,
    product_gens: Vec<usize>,
    pub orbits: Vec<BimoduleOrbit>,
}

/// Enumerate BrPic(Vec_G) as bimodule-datum orbits.
pub fn enumerate_invertible(g: &Group, caps: &Caps) -> Result<BimoduleContext> {
    if g.order > caps.bimodule {
        return Err(Error::CapExceeded {
            what: "group order for bimodule enumeration".into(),
            got: g.order,
            cap: caps.bimodule,
        });
    }
    let gop = opposite(g);
    let all_triples = goursat_full_subgroups(g, &gop, true, caps)?;
    // nondegeneracy forces |L1| = |L2|
    let mut kept: Vec<GoursatTriple> = all_triples
        .into_iter()
        .filter(|t| t.l1.order() == t.l2.order())
        .collect();
    // deterministic order: legs ascending, then realized element set
    kept.sort_by(|a, b| {
        (a.l1.order(), &a.l1.elements, &a.l2.elements, &a.realized.elements).cmp(&(
            b.l1.order(),
            &b.l1.elements,
            &b.l2.elements,
            &b.realized.elements,
        ))
    });
    let product = kept
        .first()
        .map(|t| t.product.clone())
        .unwrap_or_else(|| crate::group::direct_product(g, &gop, caps.product).unwrap().0);

    let datas: Vec<Result<TripleData>> = kept
        .into_par_iter()
        .map(|triple| build_triple_data(g, &gop, triple))
        .collect();
    let mut triples = Vec::with_capacity(datas.len());
    for d in datas {
        triples.push(d?);
    }
    let by_elements: BTreeMap<Vec<usize>, usize> = triples
        .iter()
        .enumerate()
        .map(|(i, t)| (t.triple.realized.elements.clone(), i))
        .collect();
    let product_gens = product.generating_set();

    let mut ctx = BimoduleContext {
        group: g.clone(),
        gop,
        product,
        triples,
        by_elements,
        product_gens,
        orbits: Vec::new(),
    };

    // all invertible data, in enumeration order
    let mut data: Vec<BimoduleDatum> = Vec::new();
    for (ti, td) in ctx.triples.iter().enumerate() {
        for coords in td.schur.all_classes(4096)? {
            let table = td.schur.class_table(&coords);
            let mu = crate::cohomology::CohomologyClass2::from_table(
                &td.lgroup,
                td.schur.modulus,
                table,
            );
            let b = crate::cohomology::alt_bicharacter(&mu, &td.l1_local, &td.l2_local)?;
            if crate::cohomology::alt::is_nondegenerate(&b) {
                data.push(BimoduleDatum { triple: ti, coords });
            }
        }
    }

    // orbit closure under conjugation by product generators; cohomologous
    // identification is implicit in the class coordinates
    let mut seen: BTreeSet<BimoduleDatum> = BTreeSet::new();
    let mut orbits = Vec::new();
    for d in &data {
        if seen.contains(d) {
            continue;
        }
        let mut orbit: BTreeSet<BimoduleDatum> = BTreeSet::new();
        let mut queue = vec![d.clone()];
        orbit.insert(d.clone());
        while let Some(cur) = queue.pop() {
            for gi in 0..ctx.product_gens.len() {
                let c = ctx.product_gens[gi];
                let next = ctx.conjugate_datum(&cur, c)?;
                if orbit.insert(next.clone()) {
                    queue.push(next);
                }
            }
        }
        for o in &orbit {
            seen.insert(o.clone());
        }
        let items: Vec<BimoduleDatum> = orbit.into_iter().collect();
        orbits.push(BimoduleOrbit {
            representative: items[0].clone(),
            items,
        });
    }
    orbits.sort_by(|a, b| a.representative.cmp(&b.representative));
    // every enumerated datum must have landed in exactly one orbit
    let total: usize = orbits.iter().map(|o| o.size()).sum();
    if total != data.len() {
        return Err(Error::CrossCheck(format!(
            "orbit partition covers {total} of {} data",
            data.len()
        )));
    }
    ctx.orbits = orbits;
    Ok(ctx)
}

fn build_triple_data(g: &Group, gop: &Group, triple: GoursatTriple) -> Result<TripleData> {
    let (lgroup, to_product) = triple.realized.as_group();
    let from_product: HashMap<usize, usize> =
        to_product.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let schur = SchurContext::new(&lgroup, lgroup.order as u64)?;
    // legs inside the local group: L1 pairs (x, 1), L2 pairs (1, y)
    let nop = gop.order;
    let l1_elems: Vec<usize> = triple
        .l1
        .elements
        .iter()
        .map(|&x| from_product[&(x * nop)])
        .collect::<Vec<_>>();
    let l2_elems: Vec<usize> = triple
        .l2
        .elements
        .iter()
        .map(|&y| from_product[&y])
        .collect::<Vec<_>>();
    let mut l1_sorted = l1_elems;
    l1_sorted.sort_unstable();
    let mut l2_sorted = l2_elems;
    l2_sorted.sort_unstable();
    let l1_local = Subgroup::from_sorted(lgroup.clone(), l1_sorted);
    let l2_local = Subgroup::from_sorted(lgroup.clone(), l2_sorted);
    if !l1_local.is_abelian || !l2_local.is_abelian {
        return Err(Error::CrossCheck("legs must be abelian".into()));
    }
    let _ = g;
    Ok(TripleData {
        triple,
        lgroup,
        to_product,
        from_product,
        schur,
        l1_local,
        l2_local,
    })
}

impl BimoduleContext {
    /// The regular bimodule: the antidiagonal {(g, g^{-1})} with the
    /// trivial class.
    pub fn identity_datum(&self) -> Result<BimoduleDatum> {
        let n = self.gop.order;
        let mut elems: Vec<usize> = (0..self.group.order)
            .map(|x| x * n + self.group.inv(x))
            .collect();
        elems.sort_unstable();
        let ti = *self
            .by_elements
            .get(&elems)
            .ok_or_else(|| Error::CrossCheck("antidiagonal triple missing".into()))?;
        let k = self.triples[ti].schur.factors.len();
        Ok(BimoduleDatum {
            triple: ti,
            coords: vec![0; k],
        })
    }

    pub fn datum_table(&self, d: &BimoduleDatum) -> Vec<u64> {
        self.triples[d.triple].schur.class_table(&d.coords)
    }

    /// Conjugate a datum by a product element.
    pub fn conjugate_datum(&self, d: &BimoduleDatum, c: usize) -> Result<BimoduleDatum> {
        let src = &self.triples[d.triple];
        let p = &self.product;
        let mut elems: Vec<usize> = src.to_product.iter().map(|&e| p.conj(c, e)).collect();
        elems.sort_unstable();
        let ti = *self
            .by_elements
            .get(&elems)
            .ok_or_else(|| Error::CrossCheck("conjugate triple missing".into()))?;
        let dst = &self.triples[ti];
        let table = self.datum_table(d);
        let m = src.schur.modulus;
        let kd = dst.lgroup.order;
        let ks = src.lgroup.order;
        let cinv = p.inv(c);
        let mut out = vec![0u64; kd * kd];
        for a in 0..kd {
            let pa = p.conj(cinv, dst.to_product[a]);
            let la = src.from_product[&pa];
            for b in 0..kd {
                let pb = p.conj(cinv, dst.to_product[b]);
                let lb = src.from_product[&pb];
                out[a * kd + b] = table[la * ks + lb] % m;
            }
        }
        let coords = dst
            .schur
            .class_coords(&out)
            .ok_or_else(|| Error::CrossCheck("conjugated class not expressible".into()))?;
        Ok(BimoduleDatum {
            triple: ti,
            coords,
        })
    }

    /// The inverse element: opposite subgroup with the negated pulled-back
    /// class.
    pub fn inverse_datum(&self, d: &BimoduleDatum) -> Result<BimoduleDatum> {
        let src = &self.triples[d.triple];
        let p = &self.product;
        let n = self.gop.order;
        let swap = |e: usize| -> usize { (e % n) * n + e / n };
        let mut elems: Vec<usize> = src.to_product.iter().map(|&e| swap(e)).collect();
        elems.sort_unstable();
        let ti = *self
            .by_elements
            .get(&elems)
            .ok_or_else(|| Error::CrossCheck("opposite triple missing".into()))?;
        let dst = &self.triples[ti];
        let table = self.datum_table(d);
        let m = src.schur.modulus;
        let kd = dst.lgroup.order;
        let ks = src.lgroup.order;
        // mu_vee((x1,x2),(y1,y2)) = mu((x2^-1, x1^-1), (y2^-1, y1^-1));
        // the result is negated to invert the class
        let mut out = vec![0u64; kd * kd];
        for a in 0..kd {
            let pa = dst.to_product[a];
            let qa = p.inv(swap(pa));
            let la = src.from_product[&qa];
            for b in 0..kd {
                let pb = dst.to_product[b];
                let qb = p.inv(swap(pb));
                let lb = src.from_product[&qb];
                out[a * kd + b] = (m - table[la * ks + lb] % m) % m;
            }
        }
        let coords = dst
            .schur
            .class_coords(&out)
            .ok_or_else(|| Error::CrossCheck("inverse class not expressible".into()))?;
        Ok(BimoduleDatum {
            triple: ti,
            coords,
        })
    }

    /// Orbit index containing a datum.
    pub fn orbit_of(&self, d: &BimoduleDatum) -> Result<usize> {
        self.orbits
            .iter()
            .position(|o| o.items.binary_search(d).is_ok())
            .ok_or_else(|| Error::CrossCheck("datum outside every orbit".into()))
    }

    /// Order <= 2 test: some product element conjugates L onto the
    /// opposite subgroup with mu^g cohomologous to the inverse class.
    pub fn is_involution(&self, d: &BimoduleDatum) -> Result<bool> {
        let inv = self.inverse_datum(d)?;
        let src = &self.triples[d.triple];
        let dst = &self.triples[inv.triple];
        let p = &self.product;
        let target_elems = &dst.triple.realized.elements;
        let inv_table = self.datum_table(&inv);
        // candidates up to right multiplication by L (inner conjugation of
        // L fixes classes)
        let mut coset_seen: BTreeSet<usize> = BTreeSet::new();
        let table = self.datum_table(d);
        let m = src.schur.modulus;
        let ks = src.lgroup.order;
        let kd = dst.lgroup.order;
        for c in 0..p.order {
            let mut elems: Vec<usize> =
                src.to_product.iter().map(|&e| p.conj(c, e)).collect();
            elems.sort_unstable();
            if &elems != target_elems {
                continue;
            }
            let coset_rep = src
                .to_product
                .iter()
                .map(|&l| p.mul(c, l))
                .min()
                .unwrap_or(c);
            if !coset_seen.insert(coset_rep) {
                continue;
            }
            let cinv = p.inv(c);
            let mut conj_table = vec![0u64; kd * kd];
            for a in 0..kd {
                let la = src.from_product[&p.conj(cinv, dst.to_product[a])];
                for b in 0..kd {
                    let lb = src.from_product[&p.conj(cinv, dst.to_product[b])];
                    conj_table[a * kd + b] = table[la * ks + lb] % m;
                }
            }
            if dst.schur.same_class(&conj_table, &inv_table) {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// The image of the canonical point: L_(L1, Alt(mu) restricted to L1).
    pub fn canonical_image(&self, d: &BimoduleDatum) -> Result<Lagrangian> {
        let td = &self.triples[d.triple];
        let table = self.datum_table(d);
        let m = td.schur.modulus;
        // legs as subgroups of G with values read through the local group
        let n1 = td.triple.l1.clone();
        let k = n1.order();
        let nop = self.gop.order;
        let mut vals = vec![0u64; k * k];
        for (i, &x) in n1.elements.iter().enumerate() {
            let lx = td.from_product[&(x * nop)];
            for (j, &y) in n1.elements.iter().enumerate() {
                let ly = td.from_product[&(y * nop)];
                let ks = td.lgroup.order;
                vals[i * k + j] =
                    (table[lx * ks + ly] + m - table[ly * ks + lx] % m) % m;
            }
        }
        let form = AlternatingBicharacter {
            domain: AltDomain::Square(n1.clone()),
            modulus: m,
            values: vals,
        };
        if !form.scan_bilinear() {
            return Err(Error::CrossCheck("restricted Alt not bilinear".into()));
        }
        let ab = crate::group::AbelianStructure::new(n1.clone())?;
        let form = rescale_form(&form, ab.exponent.max(1))?;
        if !form.is_invariant() {
            return Err(Error::CrossCheck(
                "restricted class is not G-invariant".into(),
            ));
        }
        Ok(Lagrangian { n: n1, b: form })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::build_group;

    fn g(spec: &str) -> Group {
        build_group(spec, &Caps::default()).unwrap()
    }

    #[test]
    fn orbit_counts_from_the_worked_examples() {
        let caps = Caps::default();
        assert_eq!(enumerate_invertible(&g("S3"), &caps).unwrap().orbits.len(), 2);
        assert_eq!(enumerate_invertible(&g("Q8"), &caps).unwrap().orbits.len(), 6);
    }

    #[test]
    fn identity_datum_properties() {
        let caps = Caps::default();
        let ctx = enumerate_invertible(&g("S3"), &caps).unwrap();
        let idd = ctx.identity_datum().unwrap();
        // the antidiagonal has trivial legs, conditions hold vacuously
        let td = &ctx.triples[idd.triple];
        assert_eq!(td.l1_local.order(), 1);
        assert_eq!(td.l2_local.order(), 1);
        assert!(ctx.is_involution(&idd).unwrap());
        let img = ctx.canonical_image(&idd).unwrap();
        assert!(img.is_canonical_point());
        // inverse of the identity stays in its orbit
        let inv = ctx.inverse_datum(&idd).unwrap();
        assert_eq!(
            ctx.orbit_of(&idd).unwrap(),
            ctx.orbit_of(&inv).unwrap()
        );
    }

    #[test]
    fn inverse_is_an_orbit_involution() {
        let caps = Caps::default();
        for spec in ["S3", "D8"] {
            let ctx = enumerate_invertible(&g(spec), &caps).unwrap();
            for orbit in &ctx.orbits {
                let d = &orbit.representative;
                let inv = ctx.inverse_datum(d).unwrap();
                let back = ctx.inverse_datum(&inv).unwrap();
                assert_eq!(
                    ctx.orbit_of(&back).unwrap(),
                    ctx.orbit_of(d).unwrap(),
                    "{spec}: double inverse returns to the orbit"
                );
                // legs swap under the inverse
                let td = &ctx.triples[d.triple];
                let ti = &ctx.triples[inv.triple];
                assert_eq!(td.triple.l1.elements, ti.triple.l2.elements);
                // involution test agrees with orbit-level comparison
                let inv_orbit = ctx.orbit_of(&inv).unwrap();
                let d_orbit = ctx.orbit_of(d).unwrap();
                assert_eq!(
                    ctx.is_involution(d).unwrap(),
                    inv_orbit == d_orbit,
                    "{spec}"
                );
            }
        }
    }

    #[test]
    fn datum_invariants() {
        let caps = Caps::default();
        let ctx = enumerate_invertible(&g("D8"), &caps).unwrap();
        for orbit in &ctx.orbits {
            let d = &orbit.representative;
            let td = &ctx.triples[d.triple];
            // |L| = |L1| * |G|
            assert_eq!(
                td.lgroup.order,
                td.triple.l1.order() * ctx.group.order
            );
            assert!(td.triple.l1.is_normal && td.triple.l2.is_normal);
            // canonical image is a valid Lagrangian (invariance re-verified
            // inside canonical_image)
            ctx.canonical_image(d).unwrap();
        }
    }
}
