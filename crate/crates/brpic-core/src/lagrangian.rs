//! Lagrangian subcategories of the center of Vec_G, in their
//! group-theoretic parameterization: pairs (N, b) of a normal abelian
//! subgroup and a G-invariant alternating bicharacter on it.

use crate::cohomology::{h2, invariant_classes, AlternatingBicharacter, GModule};
use crate::error::{Error, Result};
use crate::group::{
    self, dual_conjugation_action, is_isomorphic, quotient, AbelianStructure, Group, Subgroup,
};
use crate::Caps;
use std::cmp::Ordering;

/// One Lagrangian subcategory L_(N, b). Equality and ordering are canonical:
/// (|N|, b nonzero, N element set, b table), which reproduces the listing
/// convention of the worked examples (trivial forms before nontrivial ones
/// at the same support).
#[derive(Debug, Clone)]
pub struct Lagrangian {
    pub n: Subgroup,
    pub b: AlternatingBicharacter,
}

impl Lagrangian {
    pub fn sort_key(&self) -> (usize, bool, Vec<usize>, Vec<u64>) {
        (
            self.n.order(),
            !self.b.is_zero(),
            self.n.elements.clone(),
            self.b.values.clone(),
        )
    }

    pub fn is_canonical_point(&self) -> bool {
        self.n.order() == 1
    }

    /// Short display like "(<4 elems>, mu)" used by reports.
    pub fn describe(&self) -> String {
        let elems: Vec<String> = self.n.elements.iter().map(|e| e.to_string()).collect();
        let form = if self.b.is_zero() { "1" } else { "mu" };
        format!("L({{{}}}, {})", elems.join(","), form)
    }
}

impl PartialEq for Lagrangian {
    fn eq(&self, other: &Self) -> bool {
        self.n.elements == other.n.elements && self.b.values == other.b.values
    }
}
impl Eq for Lagrangian {}
impl PartialOrd for Lagrangian {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Lagrangian {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

/// The status a label can take; candidate sets are deduplicated by
/// isomorphism and only a singleton pins the group down.
pub enum LabelStatus {
    CanonicalRepG,
    Semidirect(Group),
    CandidateSet(Vec<Group>),
}

pub struct LagrangianLabel {
    pub lagrangian: Lagrangian,
    pub status: LabelStatus,
}

/// All Lagrangian subcategories of Z(Vec_G): the Cartesian assembly of
/// normal abelian subgroups with their invariant alternating bicharacters,
/// canonically sorted.
pub fn enumerate_lagrangians(g: &Group) -> Result<Vec<Lagrangian>> {
    let mut out = Vec::new();
    for n in g.normal_abelian_subgroups() {
        for b in invariant_classes(&n)? {
            out.push(Lagrangian { n: n.clone(), b });
        }
    }
    out.sort();
    Ok(out)
}

/// The canonical subcategory Rep(G): support 1, trivial form.
pub fn canonical_lagrangian(g: &Group) -> Lagrangian {
    let n = Subgroup::trivial(g);
    let b = AlternatingBicharacter::zero(
        crate::cohomology::AltDomain::Square(n.clone()),
        1,
    );
    Lagrangian { n, b }
}

/// Attach the dual-group label to a Lagrangian: Rep(G) itself for trivial
/// support; the semidirect product dual(N) x| G/N for a trivial form; and
/// the set of extensions of G/N by dual(N) compatible with the conjugation
/// action otherwise (the extension class of a specific nonzero form has no
/// usable closed form, so the set of all extension classes is reported).
pub fn label(lag: &Lagrangian, caps: &Caps) -> Result<LagrangianLabel> {
    if lag.is_canonical_point() {
        return Ok(LagrangianLabel {
            lagrangian: lag.clone(),
            status: LabelStatus::CanonicalRepG,
        });
    }
    let g = &lag.n.parent;
    let ab = AbelianStructure::new(lag.n.clone())?;
    let (q, proj) = quotient(g, &lag.n)?;
    let act = dual_conjugation_action(&ab, &proj)?;
    if lag.b.is_zero() {
        let witness = group::semidirect(
            &ab.invariant_factors,
            &q,
            &act,
            format!("dual({})x|{}", lag.n.order(), q.name),
        )?;
        debug_assert_eq!(witness.order, g.order);
        return Ok(LagrangianLabel {
            lagrangian: lag.clone(),
            status: LabelStatus::Semidirect(witness),
        });
    }
    // nonzero form: enumerate extensions over every class of
    // H^2(G/N, dual N)
    let rank = ab.rank();
    let action: Vec<Vec<Vec<u64>>> = (0..q.order)
        .map(|qe| {
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
    let md = GModule::new(&q, &ab.invariant_factors, action)?;
    let hg = h2(&q, &md)?;
    let mut classes: Vec<Vec<u64>> = vec![vec![0; hg.invariant_factors.len()]];
    {
        let k = hg.invariant_factors.len();
        let mut t = vec![0u64; k];
        loop {
            let mut j = 0;
            loop {
                if j == k {
                    break;
                }
                t[j] += 1;
                if t[j] == hg.invariant_factors[j] {
                    t[j] = 0;
                    j += 1;
                } else {
                    break;
                }
            }
            if t.iter().all(|&x| x == 0) {
                break;
            }
            classes.push(t.clone());
        }
    }
    let mut groups: Vec<Group> = Vec::new();
    for coords in classes {
        let ext = extension_group(&md, &hg, &coords, &ab, &q, caps)?;
        if !groups.iter().any(|gk| is_isomorphic(gk, &ext).is_some()) {
            groups.push(ext);
        }
    }
    groups.sort_by_key(|e| e.order);
    Ok(LagrangianLabel {
        lagrangian: lag.clone(),
        status: LabelStatus::CandidateSet(groups),
    })
}

/// Build the extension of Q by the dual carrier along a 2-cocycle class.
fn extension_group(
    md: &GModule,
    hg: &crate::cohomology::CohomologyGroup,
    coords: &[u64],
    ab: &AbelianStructure,
    q: &Group,
    caps: &Caps,
) -> Result<Group> {
    let r = ab.rank();
    let m = md.exponent;
    let nq = q.order;
    // realized cocycle table in embedded coordinates
    let mut table_vals = vec![0u64; nq * nq * r];
    for (c, gen) in coords.iter().zip(&hg.generators) {
        if *c == 0 {
            continue;
        }
        for (t, &v) in table_vals.iter_mut().zip(&gen.values) {
            *t = (*t + c * v) % m;
        }
    }
    // unembed: coordinate i is a multiple of m/d_i
    let factors = &ab.invariant_factors;
    let nu = |q1: usize, q2: usize| -> Vec<u64> {
        (0..r)
            .map(|i| {
                let v = table_vals[(q1 * nq + q2) * r + i] % m;
                let unit = m / factors[i];
                debug_assert_eq!(v % unit, 0);
                v / unit % factors[i]
            })
            .collect()
    };
    // elements (chi, q), chi in lexicographic coordinate order
    let carrier_order: usize = factors.iter().product::<u64>() as usize;
    let order = carrier_order * nq;
    if order > caps.analysis.max(64) {
        return Err(Error::CapExceeded {
            what: "extension order".into(),
            got: order,
            cap: caps.analysis.max(64),
        });
    }
    let tuple_of = |mut i: usize| -> Vec<u64> {
        let mut t = vec![0u64; r];
        for j in 0..r {
            t[j] = (i % factors[j] as usize) as u64;
            i /= factors[j] as usize;
        }
        t
    };
    let idx_of = |t: &[u64]| -> usize {
        let mut i = 0usize;
        for j in (0..r).rev() {
            i = i * factors[j] as usize + (t[j] % factors[j]) as usize;
        }
        i
    };
    let mut table = vec![0usize; order * order];
    let pair = |chi: usize, qe: usize| chi * nq + qe;
    for chi1 in 0..carrier_order {
        let t1 = tuple_of(chi1);
        for q1 in 0..nq {
            for chi2 in 0..carrier_order {
                let t2 = tuple_of(chi2);
                for q2 in 0..nq {
                    // chi1 + q1.chi2 + nu(q1, q2)
                    let mut acted = vec![0u64; r];
                    for i in 0..r {
                        let mut v = 0u64;
                        for j in 0..r {
                            v = (v + md.action[q1][i][j] * t2[j]) % factors[i];
                        }
                        acted[i] = v;
                    }
                    let twist = nu(q1, q2);
                    let sum: Vec<u64> = (0..r)
                        .map(|i| (t1[i] + acted[i] + twist[i]) % factors[i])
                        .collect();
                    table[pair(chi1, q1) * order + pair(chi2, q2)] =
                        pair(idx_of(&sum), q.mul(q1, q2));
                }
            }
        }
    }
    crate::group::FiniteGroup::from_table(table, format!("ext({})", q.name))
}

/// Membership of a Lagrangian in L_0(G) decided through its label when
/// that label is definite; None defers to the orbit computation.
pub fn in_l0_by_label(lag: &Lagrangian, caps: &Caps) -> Result<Option<bool>> {
    let g = &lag.n.parent;
    let lab = label(lag, caps)?;
    Ok(match lab.status {
        LabelStatus::CanonicalRepG => Some(true),
        LabelStatus::Semidirect(w) => Some(is_isomorphic(&w, g).is_some()),
        LabelStatus::CandidateSet(set) => {
            if set.len() == 1 {
                Some(is_isomorphic(&set[0], g).is_some())
            } else {
                None
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::build_group;

    fn g(spec: &str) -> Group {
        build_group(spec, &Caps::default()).unwrap()
    }

    #[test]
    fn counts_from_the_worked_examples() {
        assert_eq!(enumerate_lagrangians(&g("D8")).unwrap().len(), 7);
        assert_eq!(enumerate_lagrangians(&g("Q8")).unwrap().len(), 5);
        assert_eq!(enumerate_lagrangians(&g("S4")).unwrap().len(), 3);
        assert_eq!(enumerate_lagrangians(&g("S3")).unwrap().len(), 2);
        assert_eq!(enumerate_lagrangians(&g("C1")).unwrap().len(), 1);
    }

    #[test]
    fn canonical_is_listed_first() {
        for spec in ["S3", "D8", "Q8", "S4", "A4"] {
            let grp = g(spec);
            let all = enumerate_lagrangians(&grp).unwrap();
            assert_eq!(all[0], canonical_lagrangian(&grp), "{spec}");
        }
    }

    #[test]
    fn q8_semidirect_labels_differ_from_q8() {
        // every semidirect label over nontrivial N is a different group
        let caps = Caps::default();
        let q8 = g("Q8");
        for lag in enumerate_lagrangians(&q8).unwrap() {
            if lag.is_canonical_point() {
                continue;
            }
            let lab = label(&lag, &caps).unwrap();
            match lab.status {
                LabelStatus::Semidirect(w) => {
                    assert_eq!(w.order, 8);
                    assert!(
                        is_isomorphic(&w, &q8).is_none(),
                        "Q8 admits no nontrivial semidirect decomposition"
                    );
                }
                _ => panic!("Q8 forms are all trivial"),
            }
        }
        // in particular N = <i> gives the dihedral group
        let lag4 = enumerate_lagrangians(&q8)
            .unwrap()
            .into_iter()
            .find(|l| l.n.order() == 4)
            .unwrap();
        let lab = label(&lag4, &caps).unwrap();
        if let LabelStatus::Semidirect(w) = lab.status {
            assert!(is_isomorphic(&w, &g("D8")).is_some());
        } else {
            unreachable!()
        }
    }

    #[test]
    fn d8_nonzero_form_candidates_contain_d8() {
        let caps = Caps::default();
        let d8 = g("D8");
        let lag = enumerate_lagrangians(&d8)
            .unwrap()
            .into_iter()
            .find(|l| !l.b.is_zero())
            .unwrap();
        let lab = label(&lag, &caps).unwrap();
        match lab.status {
            LabelStatus::CandidateSet(set) => {
                assert!(
                    set.iter().any(|e| is_isomorphic(e, &d8).is_some()),
                    "candidate set must contain D8"
                );
                for e in &set {
                    assert_eq!(e.order, 8);
                }
            }
            _ => panic!("nonzero form must produce a candidate set"),
        }
    }

    #[test]
    fn l0_membership_by_label() {
        let caps = Caps::default();
        // D18: N = <r> gives dual(C9) x| C2 = D18, so membership holds
        let d18 = g("D18");
        let lag = enumerate_lagrangians(&d18)
            .unwrap()
            .into_iter()
            .find(|l| l.n.order() == 9)
            .unwrap();
        assert_eq!(in_l0_by_label(&lag, &caps).unwrap(), Some(true));

        // D8: N = <r^2> (the center) gives C2^3, not D8
        let d8 = g("D8");
        let lag = enumerate_lagrangians(&d8)
            .unwrap()
            .into_iter()
            .find(|l| l.n.order() == 2)
            .unwrap();
        assert_eq!(in_l0_by_label(&lag, &caps).unwrap(), Some(false));
        let lab = label(&lag, &caps).unwrap();
        if let LabelStatus::Semidirect(w) = lab.status {
            assert!(is_isomorphic(&w, &g("C2xC2xC2")).is_some());
        } else {
            unreachable!()
        }

        // the canonical point is always inside
        assert_eq!(
            in_l0_by_label(&canonical_lagrangian(&d8), &caps).unwrap(),
            Some(true)
        );
    }
}
