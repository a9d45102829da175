//! H^1 and H^2 with arbitrary finite coefficient modules.
//!
//! These run on small groups (quotients and complements), so unknowns are
//! the full normalized cochain tables in embedded coordinates: coordinate i
//! of a value is a multiple of exponent/d_i, enforced by singleton
//! constraint rows. Everything is solved per prime power and reassembled.

use super::{Cochain1, Cohomology1Group, CohomologyClass2, CohomologyGroup, GModule};
use crate::error::{Error, Result};
use crate::group::Group;
use crate::zmod::{crt_idempotents, prime_powers, smith_mod, solve_homogeneous, Echelon};

const MAX_UNKNOWNS: usize = 4096;

struct Layout {
    n: usize,
    r: usize,
}

impl Layout {
    /// unknown index of f(a, b)[i], a, b >= 1
    fn slot2(&self, a: usize, b: usize, i: usize) -> usize {
        ((a - 1) * (self.n - 1) + (b - 1)) * self.r + i
    }

    fn width2(&self) -> usize {
        (self.n - 1) * (self.n - 1) * self.r
    }

    fn slot1(&self, a: usize, i: usize) -> usize {
        (a - 1) * self.r + i
    }

    fn width1(&self) -> usize {
        (self.n - 1) * self.r
    }
}

/// H^2(G, M) = Z^2 / B^2 with explicit generators; no quotient by the
/// connecting map (compare `schur_multiplier` for k^x coefficients).
pub fn h2(g: &Group, module: &GModule) -> Result<CohomologyGroup> {
    let n = g.order;
    let r = module.rank();
    let lay = Layout { n, r };
    if n <= 1 || r == 0 {
        return Ok(CohomologyGroup {
            invariant_factors: vec![],
            generators: vec![],
        });
    }
    if lay.width2() > MAX_UNKNOWNS {
        return Err(Error::CapExceeded {
            what: "cocycle unknowns".into(),
            got: lay.width2(),
            cap: MAX_UNKNOWNS,
        });
    }
    let m = module.exponent;
    let emb: Vec<Vec<Vec<u64>>> = (0..n).map(|x| module.embedded_matrix(x)).collect();
    let width = lay.width2();

    let mut factors_per_prime: Vec<Vec<u64>> = Vec::new();
    let mut gens_per_prime: Vec<Vec<Vec<u64>>> = Vec::new();
    let pps = prime_powers(m);
    let idem = crt_idempotents(m);
    for &pe in &pps {
        let mut eqs = Echelon::new(pe, width);
        // subgroup constraints d_i * y_i = 0
        for a in 1..n {
            for b in 1..n {
                for i in 0..r {
                    let di = module.factors[i] % pe;
                    if di != 0 {
                        let mut row = vec![0u64; width];
                        row[lay.slot2(a, b, i)] = di;
                        eqs.insert(row);
                    }
                }
            }
        }
        // cocycle identity g.f(h,k) - f(gh,k) + f(g,hk) - f(g,h) = 0
        let mut row = vec![0u64; width];
        for gx in 1..n {
            for h in 1..n {
                for k in 1..n {
                    let gh = g.mul(gx, h);
                    let hk = g.mul(h, k);
                    for i in 0..r {
                        for x in row.iter_mut() {
                            *x = 0;
                        }
                        for j in 0..r {
                            let c = emb[gx][i][j] % pe;
                            if c != 0 {
                                let s = lay.slot2(h, k, j);
                                row[s] = (row[s] + c) % pe;
                            }
                        }
                        if gh != 0 {
                            let s = lay.slot2(gh, k, i);
                            row[s] = (row[s] + pe - 1) % pe;
                        }
                        if hk != 0 {
                            let s = lay.slot2(gx, hk, i);
                            row[s] = (row[s] + 1) % pe;
                        }
                        let s = lay.slot2(gx, h, i);
                        row[s] = (row[s] + pe - 1) % pe;
                        if row.iter().any(|&x| x != 0) {
                            eqs.insert(row.clone());
                        }
                    }
                }
            }
        }
        let sols = solve_homogeneous(&eqs);
        // intersect with the embedded subgroup: solutions already satisfy
        // constraints (they were equations); coboundaries:
        let mut cob: Vec<Vec<u64>> = Vec::new();
        for x0 in 1..n {
            for c0 in 0..r {
                // lambda = embedded basis cochain at (x0, c0):
                // value (m/d_c0) * e_c0 at x0
                let scale = (m / module.factors[c0]) % pe;
                let mut u = vec![0u64; width];
                for a in 1..n {
                    for b in 1..n {
                        // d i f... d(lambda)(a,b) = a.lambda(b) - lambda(ab) + lambda(a)
                        let ab = g.mul(a, b);
                        for i in 0..r {
                            let mut v = 0u64;
                            if b == x0 {
                                v = (v + emb[a][i][c0] % pe * scale) % pe;
                            }
                            if ab == x0 && i == c0 {
                                v = (v + (pe - scale % pe)) % pe;
                            }
                            if a == x0 && i == c0 {
                                v = (v + scale) % pe;
                            }
                            if v != 0 {
                                u[lay.slot2(a, b, i)] = v;
                            }
                        }
                    }
                }
                cob.push(u);
            }
        }
        let (f, gens) = quotient_of_spans(&sols, &cob, width, pe);
        factors_per_prime.push(f);
        gens_per_prime.push(gens);
    }
    let (factors, gen_vecs) = crt_merge(&factors_per_prime, &gens_per_prime, &idem, m, width);
    let generators = gen_vecs
        .into_iter()
        .map(|u| {
            let mut values = vec![0u64; n * n * r];
            for a in 1..n {
                for b in 1..n {
                    for i in 0..r {
                        values[(a * n + b) * r + i] = u[lay.slot2(a, b, i)];
                    }
                }
            }
            CohomologyClass2 {
                group: g.clone(),
                modulus: m,
                rank: r,
                values,
            }
        })
        .collect();
    Ok(CohomologyGroup {
        invariant_factors: factors,
        generators,
    })
}

/// H^1(G, M): crossed homomorphisms modulo principal ones. For the trivial
/// action this is Hom(G, M).
pub fn h1(g: &Group, module: &GModule) -> Result<Cohomology1Group> {
    let n = g.order;
    let r = module.rank();
    let lay = Layout { n, r };
    if n <= 1 || r == 0 {
        return Ok(Cohomology1Group {
            invariant_factors: vec![],
            generators: vec![],
        });
    }
    if lay.width1() > MAX_UNKNOWNS {
        return Err(Error::CapExceeded {
            what: "cochain unknowns".into(),
            got: lay.width1(),
            cap: MAX_UNKNOWNS,
        });
    }
    let m = module.exponent;
    let emb: Vec<Vec<Vec<u64>>> = (0..n).map(|x| module.embedded_matrix(x)).collect();
    let width = lay.width1();
    let pps = prime_powers(m);
    let idem = crt_idempotents(m);
    let mut factors_per_prime = Vec::new();
    let mut gens_per_prime = Vec::new();
    for &pe in &pps {
        let mut eqs = Echelon::new(pe, width);
        for a in 1..n {
            for i in 0..r {
                let di = module.factors[i] % pe;
                if di != 0 {
                    let mut row = vec![0u64; width];
                    row[lay.slot1(a, i)] = di;
                    eqs.insert(row);
                }
            }
        }
        // f(ab) = f(a) + a.f(b); normalized f(1) = 0 makes a=1 or b=1 void
        let mut row = vec![0u64; width];
        for a in 1..n {
            for b in 1..n {
                let ab = g.mul(a, b);
                for i in 0..r {
                    for x in row.iter_mut() {
                        *x = 0;
                    }
                    if ab != 0 {
                        row[lay.slot1(ab, i)] = 1;
                    }
                    let s = lay.slot1(a, i);
                    row[s] = (row[s] + pe - 1) % pe;
                    for j in 0..r {
                        let c = emb[a][i][j] % pe;
                        if c != 0 {
                            let s = lay.slot1(b, j);
                            row[s] = (row[s] + pe - c) % pe;
                        }
                    }
                    if row.iter().any(|&x| x != 0) {
                        eqs.insert(row.clone());
                    }
                }
            }
        }
        let sols = solve_homogeneous(&eqs);
        // principal crossed homs: x -> x.v - v for embedded basis vectors v
        let mut prin: Vec<Vec<u64>> = Vec::new();
        for c0 in 0..r {
            let scale = (m / module.factors[c0]) % pe;
            let mut u = vec![0u64; width];
            for a in 1..n {
                for i in 0..r {
                    let mut v = emb[a][i][c0] % pe * scale % pe;
                    if i == c0 {
                        v = (v + pe - scale % pe) % pe;
                    }
                    u[lay.slot1(a, i)] = v;
                }
            }
            prin.push(u);
        }
        let (f, gens) = quotient_of_spans(&sols, &prin, width, pe);
        factors_per_prime.push(f);
        gens_per_prime.push(gens);
    }
    let (factors, gen_vecs) = crt_merge(&factors_per_prime, &gens_per_prime, &idem, m, width);
    let generators = gen_vecs
        .into_iter()
        .map(|u| {
            let mut values = vec![0u64; n * r];
            for a in 1..n {
                for i in 0..r {
                    values[a * r + i] = u[lay.slot1(a, i)];
                }
            }
            Cochain1 {
                group: g.clone(),
                modulus: m,
                rank: r,
                values,
            }
        })
        .collect();
    Ok(Cohomology1Group {
        invariant_factors: factors,
        generators,
    })
}

/// Quotient span(z) / span(t) over Z/pe: nontrivial factors (descending)
/// plus generator vectors.
pub fn quotient_of_spans(
    z: &[Vec<u64>],
    t: &[Vec<u64>],
    width: usize,
    pe: u64,
) -> (Vec<u64>, Vec<Vec<u64>>) {
    let mut zspan = Echelon::new(pe, width);
    for row in z {
        zspan.insert(row.clone());
    }
    let zrows = zspan.row_matrix();
    let s = zrows.len();
    let total = s + t.len();
    let mut rel_ech = Echelon::new_tracked(pe, width, total);
    for row in zrows.iter().chain(t.iter()) {
        rel_ech.insert(row.clone());
    }
    let relations: Vec<Vec<u64>> = rel_ech
        .kernel_rows()
        .iter()
        .map(|kv| kv[..s].to_vec())
        .collect();
    let sm = smith_mod(&relations, s, pe);
    let mut pairs: Vec<(u64, Vec<u64>)> = sm
        .factors
        .iter()
        .zip(&sm.gen_coords)
        .filter(|(f, _)| **f > 1)
        .map(|(f, c)| {
            let mut u = vec![0u64; width];
            for (ci, zr) in c.iter().zip(&zrows) {
                for (x, &y) in u.iter_mut().zip(zr) {
                    *x = (*x + ci * y) % pe;
                }
            }
            (*f, u)
        })
        .collect();
    pairs.sort_by(|a, b| b.0.cmp(&a.0));
    let factors = pairs.iter().map(|p| p.0).collect();
    let gens = pairs.into_iter().map(|p| p.1).collect();
    (factors, gens)
}

/// Merge per-prime factor/generator lists (descending) into the global
/// ascending invariant factors with CRT-fused generator vectors.
pub fn crt_merge(
    factors_per_prime: &[Vec<u64>],
    gens_per_prime: &[Vec<Vec<u64>>],
    idem: &[u64],
    m: u64,
    width: usize,
) -> (Vec<u64>, Vec<Vec<u64>>) {
    let max_slots = factors_per_prime.iter().map(|v| v.len()).max().unwrap_or(0);
    let mut factors = Vec::new();
    let mut gens = Vec::new();
    for slot in 0..max_slots {
        let mut f = 1u64;
        let mut u = vec![0u64; width];
        for (pi, (pf, pg)) in factors_per_prime.iter().zip(gens_per_prime).enumerate() {
            if let Some(&x) = pf.get(slot) {
                f *= x;
                for (a, &b) in u.iter_mut().zip(&pg[slot]) {
                    *a = (*a + idem[pi] * b) % m;
                }
            }
        }
        factors.push(f);
        gens.push(u);
    }
    factors.reverse();
    gens.reverse();
    (factors, gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_group, quotient, AbelianStructure, Subgroup};
    use crate::Caps;

    fn g(spec: &str) -> Group {
        build_group(spec, &Caps::default()).unwrap()
    }

    #[test]
    fn h2_trivial_coefficients() {
        // H2(Z/2, Z/2) = Z/2 (exhaustive oracle: two normalized cochains on
        // the single nontrivial pair; the nonzero one is the cocycle class)
        let c2 = g("C2");
        let md = GModule::trivial(&c2, &[2]);
        let h = h2(&c2, &md).unwrap();
        assert_eq!(h.invariant_factors, vec![2]);
        assert!(h.generators[0].scan_cocycle(None));

        // H2(Z/2, Z/3) = 0 by coprimality
        let md = GModule::trivial(&c2, &[3]);
        assert!(h2(&c2, &md).unwrap().is_trivial());

        // H2(V4, Z/2) has order 8
        let v4 = g("C2xC2");
        let md = GModule::trivial(&v4, &[2]);
        let h = h2(&v4, &md).unwrap();
        assert_eq!(h.order(), 8);

        // H2(C4, Z/4) = Z/4
        let c4 = g("C4");
        let md = GModule::trivial(&c4, &[4]);
        assert_eq!(h2(&c4, &md).unwrap().invariant_factors, vec![4]);
    }

    #[test]
    fn h2_matches_schur_size_identity() {
        for spec in ["S3", "D8", "Q8", "A4"] {
            let grp = g(spec);
            let nord = grp.order as u64;
            let md = GModule::trivial(&grp, &[nord]);
            let h = h2(&grp, &md).unwrap();
            let ctx = super::super::schur_multiplier(&grp, &Caps::default()).unwrap();
            let gab = (grp.order / grp.derived_subgroup().order()) as u128;
            assert_eq!(h.order(), ctx.order() * gab, "{spec}");
            assert_eq!(h.order(), ctx.full_h2_order, "{spec}");
        }
    }

    #[test]
    fn h1_examples() {
        // H1(S3, V with permutation action) is trivial
        let s4 = g("S4");
        let v = s4
            .normal_abelian_subgroups()
            .into_iter()
            .find(|s| s.order() == 4)
            .unwrap();
        let ab = AbelianStructure::new(v.clone()).unwrap();
        let (q, proj) = quotient(&s4, &v).unwrap();
        // S3 = S4/V acts on V by conjugation; dualize to get the module
        let act = crate::group::dual_conjugation_action(&ab, &proj).unwrap();
        let action: Vec<Vec<Vec<u64>>> = (0..q.order)
            .map(|qe| {
                (0..2)
                    .map(|i| {
                        (0..2)
                            .map(|j| {
                                let mut chi = vec![0u64; 2];
                                chi[j] = 1;
                                act(qe, &chi)[i]
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let md = GModule::new(&q, &[2, 2], action).unwrap();
        let h = h1(&q, &md).unwrap();
        assert_eq!(h.order(), 1, "H1(S3, dual(V)) = 1");

        // H1(S3, Z/6 trivial) = Hom(S3, Z/6) = Z/2
        let s3 = g("S3");
        let md = GModule::trivial(&s3, &[6]);
        let h = h1(&s3, &md).unwrap();
        assert_eq!(h.invariant_factors, vec![2]);

        // H1(Z/3, Z/4) = 0 by coprimality
        let c3 = g("C3");
        let md = GModule::trivial(&c3, &[4]);
        assert_eq!(h1(&c3, &md).unwrap().order(), 1);
    }

    #[test]
    fn h1_trivial_action_is_hom() {
        // |H1(G, Z/m trivial)| = |Hom(G^ab, Z/m)| checked directly
        for (spec, m, want) in [("S4", 4u64, 2u128), ("A4", 6, 3), ("D8", 2, 4)] {
            let grp = g(spec);
            let md = GModule::trivial(&grp, &[m]);
            assert_eq!(h1(&grp, &md).unwrap().order(), want, "{spec} mod {m}");
        }
        let _ = Subgroup::trivial(&g("C2"));
    }
}
