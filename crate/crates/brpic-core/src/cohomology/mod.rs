//! Group cohomology in degrees one and two with finite coefficients.
//!
//! Values of k^x-valued cochains are represented additively in Z/m for a
//! module-dependent modulus m; a class on a subgroup embeds into a larger
//! modulus via the canonical inclusion Z/d -> Z/m. General coefficient
//! modules carry mixed cyclic factors (d_1 | ... | d_r); their values are
//! stored in "embedded" form, coordinate i scaled by m/d_i, so that all
//! linear algebra happens in Z/m per prime power.

pub mod alt;
mod five_term;
mod module_solver;
mod solver;

pub use alt::{
    alt_bicharacter, class_from_bicharacter, invariant_classes, AltDomain,
    AlternatingBicharacter,
};
pub use five_term::{five_term_check, FiveTermReport};
pub use module_solver::{h1, h2};
pub use solver::{GenTree, SchurContext};

use crate::error::{Error, Result};
use crate::group::{Group, GroupMap, Subgroup};
use std::sync::Arc;

/// A finite G-module: an abelian carrier with cyclic factors acted on by G
/// through coordinate matrices. `action[g]` has entry (i, j) defined mod
/// factors[i]; the trivial constructor uses identity matrices.
pub struct GModule {
    pub group: Group,
    pub factors: Vec<u64>,
    pub exponent: u64,
    pub action: Vec<Vec<Vec<u64>>>,
}

impl GModule {
    pub fn trivial(group: &Group, factors: &[u64]) -> GModule {
        let r = factors.len();
        let id: Vec<Vec<u64>> = (0..r)
            .map(|i| (0..r).map(|j| u64::from(i == j)).collect())
            .collect();
        GModule {
            group: group.clone(),
            factors: factors.to_vec(),
            exponent: lcm_all(factors),
            action: vec![id; group.order],
        }
    }

    /// Verified constructor: action must be a homomorphism into Aut(carrier).
    pub fn new(group: &Group, factors: &[u64], action: Vec<Vec<Vec<u64>>>) -> Result<GModule> {
        let m = GModule {
            group: group.clone(),
            factors: factors.to_vec(),
            exponent: lcm_all(factors),
            action,
        };
        m.verify()?;
        Ok(m)
    }

    fn verify(&self) -> Result<()> {
        let g = &self.group;
        let r = self.factors.len();
        if self.action.len() != g.order {
            return Err(Error::ActionNotHomomorphism);
        }
        // identity acts as identity; action multiplicative; each matrix a
        // well-defined bijection of the carrier
        for (i, row) in self.action[0].iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v % self.factors[i] != u64::from(i == j) % self.factors[i] {
                    return Err(Error::ActionNotHomomorphism);
                }
            }
        }
        for a in 0..g.order {
            // well-definedness: M[i][j] * d_j = 0 mod d_i
            for i in 0..r {
                for j in 0..r {
                    if self.action[a][i][j] * self.factors[j] % self.factors[i] != 0 {
                        return Err(Error::ActionNotHomomorphism);
                    }
                }
            }
            for b in 0..g.order {
                let ab = g.mul(a, b);
                let prod = mat_mul(&self.action[a], &self.action[b], &self.factors);
                for i in 0..r {
                    for j in 0..r {
                        if prod[i][j] % self.factors[i]
                            != self.action[ab][i][j] % self.factors[i]
                        {
                            return Err(Error::ActionNotHomomorphism);
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn is_trivial_action(&self) -> bool {
        self.action.iter().all(|m| {
            m.iter().enumerate().all(|(i, row)| {
                row.iter()
                    .enumerate()
                    .all(|(j, &v)| v % self.factors[i] == u64::from(i == j) % self.factors[i])
            })
        })
    }

    /// Action matrix of g in embedded coordinates mod `exponent`:
    /// B[i][j] = A[i][j] * d_j / d_i (integral by well-definedness).
    pub fn embedded_matrix(&self, g: usize) -> Vec<Vec<u64>> {
        let r = self.rank();
        let mexp = self.exponent;
        (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        let num = self.action[g][i][j] % self.factors[i] * self.factors[j];
                        debug_assert_eq!(num % self.factors[i], 0);
                        num / self.factors[i] % mexp
                    })
                    .collect()
            })
            .collect()
    }
}

fn lcm_all(factors: &[u64]) -> u64 {
    factors
        .iter()
        .fold(1u64, |acc, &f| acc / crate::zmod::gcd(acc, f) * f)
}

fn mat_mul(a: &[Vec<u64>], b: &[Vec<u64>], factors: &[u64]) -> Vec<Vec<u64>> {
    let r = factors.len();
    (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    let mut v = 0u64;
                    for (k, fk) in factors.iter().enumerate() {
                        let _ = fk;
                        v += a[i][k] % factors[i] * (b[k][j] % factors[k]);
                    }
                    v % factors[i]
                })
                .collect()
        })
        .collect()
}

/// A normalized 1-cochain: values[x] is an r-vector in embedded form
/// (coordinate i a multiple of modulus/d_i), values[0] = 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cochain1 {
    pub group: Group,
    pub modulus: u64,
    pub rank: usize,
    pub values: Vec<u64>, // n * rank
}

/// A normalized 2-cocycle: values[(g*n + h)*rank + i] in embedded form;
/// f(1, .) = f(., 1) = 0. For k^x-valued classes rank = 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyClass2 {
    pub group: Group,
    pub modulus: u64,
    pub rank: usize,
    pub values: Vec<u64>,
}

impl CohomologyClass2 {
    pub fn from_table(group: &Group, modulus: u64, table: Vec<u64>) -> CohomologyClass2 {
        debug_assert_eq!(table.len(), group.order * group.order);
        CohomologyClass2 {
            group: group.clone(),
            modulus,
            rank: 1,
            values: table,
        }
    }

    pub fn zero(group: &Group, modulus: u64, rank: usize) -> CohomologyClass2 {
        CohomologyClass2 {
            group: group.clone(),
            modulus,
            rank,
            values: vec![0; group.order * group.order * rank],
        }
    }

    #[inline]
    pub fn at(&self, g: usize, h: usize) -> &[u64] {
        let n = self.group.order;
        &self.values[(g * n + h) * self.rank..(g * n + h + 1) * self.rank]
    }

    /// Verify the (action-twisted) cocycle identity by full scan.
    pub fn scan_cocycle(&self, module: Option<&GModule>) -> bool {
        let n = self.group.order;
        let m = self.modulus;
        let r = self.rank;
        for g in 0..n {
            if self.at(g, 0).iter().any(|&v| v % m != 0)
                || self.at(0, g).iter().any(|&v| v % m != 0)
            {
                return false;
            }
        }
        let id_mat: Vec<Vec<u64>>;
        let mats: Vec<Vec<Vec<u64>>>;
        let act: &[Vec<Vec<u64>>] = match module {
            Some(md) => {
                mats = (0..n).map(|g| md.embedded_matrix(g)).collect();
                &mats
            }
            None => {
                id_mat = (0..r)
                    .map(|i| (0..r).map(|j| u64::from(i == j)).collect())
                    .collect();
                mats = vec![id_mat.clone(); n];
                &mats
            }
        };
        for g in 0..n {
            for h in 0..n {
                for k in 0..n {
                    let fhk = self.at(h, k);
                    let a = &act[g];
                    for i in 0..r {
                        let mut ghk = 0u64;
                        for j in 0..r {
                            ghk = (ghk + a[i][j] * (fhk[j] % m)) % m;
                        }
                        let v = ghk + self.at(g, self.group.mul(h, k))[i] + 2 * m * 2
                            - self.at(self.group.mul(g, h), k)[i] % m
                            - self.at(g, h)[i] % m;
                        if v % m != 0 {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    pub fn add(&self, other: &CohomologyClass2) -> CohomologyClass2 {
        debug_assert_eq!(self.modulus, other.modulus);
        CohomologyClass2 {
            group: self.group.clone(),
            modulus: self.modulus,
            rank: self.rank,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| (a + b) % self.modulus)
                .collect(),
        }
    }

    pub fn neg(&self) -> CohomologyClass2 {
        CohomologyClass2 {
            group: self.group.clone(),
            modulus: self.modulus,
            rank: self.rank,
            values: self
                .values
                .iter()
                .map(|&a| (self.modulus - a % self.modulus) % self.modulus)
                .collect(),
        }
    }
}

/// Invariant factors plus explicit generating 2-cocycles.
pub struct CohomologyGroup {
    pub invariant_factors: Vec<u64>,
    pub generators: Vec<CohomologyClass2>,
}

impl CohomologyGroup {
    pub fn order(&self) -> u128 {
        self.invariant_factors.iter().map(|&f| f as u128).product()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }
}

/// Invariant factors plus explicit generating crossed homomorphisms.
pub struct Cohomology1Group {
    pub invariant_factors: Vec<u64>,
    pub generators: Vec<Cochain1>,
}

impl Cohomology1Group {
    pub fn order(&self) -> u128 {
        self.invariant_factors.iter().map(|&f| f as u128).product()
    }
}

/// H^2(G, k^x) at modulus |G|: the Schur multiplier with explicit
/// representing cocycles valued in Z/|G|.
pub fn schur_multiplier(g: &Group, caps: &crate::Caps) -> Result<SchurContext> {
    if g.order > caps.analysis {
        return Err(Error::CapExceeded {
            what: "group order for Schur multiplier".into(),
            got: g.order,
            cap: caps.analysis,
        });
    }
    SchurContext::new(g, g.order as u64)
}

/// Pointwise restriction of a rank-1 class to a subgroup, returned on the
/// subgroup realized as a standalone group (same modulus).
pub fn restrict(c: &CohomologyClass2, h: &Subgroup) -> Result<CohomologyClass2> {
    if !Arc::ptr_eq(&h.parent, &c.group) {
        return Err(Error::NotSubgroup("restriction".into()));
    }
    debug_assert_eq!(c.rank, 1);
    let (hg, to_parent) = h.as_group();
    let k = hg.order;
    let n = c.group.order;
    let mut values = vec![0u64; k * k];
    for a in 0..k {
        for b in 0..k {
            values[a * k + b] = c.values[to_parent[a] * n + to_parent[b]] % c.modulus;
        }
    }
    Ok(CohomologyClass2 {
        group: hg,
        modulus: c.modulus,
        rank: 1,
        values,
    })
}

/// Pullback f^theta = f o (theta^{-1} x theta^{-1}) along a bijective map
/// theta whose source is the group of f; the result lives on theta's
/// target.
pub fn pullback(c: &CohomologyClass2, theta: &GroupMap) -> Result<CohomologyClass2> {
    if !theta.is_bijective() {
        return Err(Error::NotBijective);
    }
    if !Arc::ptr_eq(&theta.source, &c.group) {
        return Err(Error::Mismatch("pullback domain".into()));
    }
    debug_assert_eq!(c.rank, 1);
    let inv = theta.inverse_map()?;
    let n = theta.target.order;
    let src_n = c.group.order;
    let mut values = vec![0u64; n * n];
    for a in 0..n {
        for b in 0..n {
            values[a * n + b] = c.values[inv.apply(a) * src_n + inv.apply(b)] % c.modulus;
        }
    }
    Ok(CohomologyClass2 {
        group: theta.target.clone(),
        modulus: c.modulus,
        rank: 1,
        values,
    })
}

/// Conjugate class f^g = f o (conj_{g^{-1}} x conj_{g^{-1}}): the pullback
/// along conjugation by g.
pub fn conjugate_class(c: &CohomologyClass2, by: usize) -> CohomologyClass2 {
    let g = &c.group;
    let n = g.order;
    let inv = g.inv(by);
    let mut values = vec![0u64; n * n * c.rank];
    for a in 0..n {
        let ca = g.conj(inv, a);
        for b in 0..n {
            let cb = g.conj(inv, b);
            for i in 0..c.rank {
                values[(a * n + b) * c.rank + i] = c.values[(ca * n + cb) * c.rank + i];
            }
        }
    }
    CohomologyClass2 {
        group: c.group.clone(),
        modulus: c.modulus,
        rank: c.rank,
        values,
    }
}

/// Solve d(lambda) = f - g for a normalized 1-cochain; None when the
/// classes differ in H^2(G, Z/m). Trivial coefficients, rank 1.
pub fn is_cohomologous(f: &CohomologyClass2, g: &CohomologyClass2) -> Result<Option<Cochain1>> {
    if !Arc::ptr_eq(&f.group, &g.group) || f.modulus != g.modulus || f.rank != g.rank {
        return Err(Error::Mismatch("is_cohomologous on different contexts".into()));
    }
    debug_assert_eq!(f.rank, 1);
    let grp = &f.group;
    let n = grp.order;
    let m = f.modulus;
    let diff: Vec<u64> = f
        .values
        .iter()
        .zip(&g.values)
        .map(|(&a, &b)| (a + m - b % m) % m)
        .collect();
    let tree = solver::GenTree::new(grp);
    let width = tree.width(n);
    let mut lambda_total = vec![0u64; n];
    for (pi, pe) in crate::zmod::prime_powers(m).into_iter().enumerate() {
        let idem = crate::zmod::crt_idempotents(m)[pi];
        let mut stack = crate::zmod::Echelon::new_tracked(pe, width, n.saturating_sub(1));
        for x in 1..n {
            let mut u = solver::coboundary_uvec(grp, &tree, x, pe);
            for v in u.iter_mut() {
                *v %= pe;
            }
            stack.insert(u);
        }
        let mut u = solver::uvec_of_table(grp, &tree, &diff, m);
        for v in u.iter_mut() {
            *v %= pe;
        }
        let Some(coeffs) = stack.express(&u) else {
            return Ok(None);
        };
        for (x, &c) in coeffs.iter().enumerate() {
            lambda_total[x + 1] = (lambda_total[x + 1] + idem * c) % m;
        }
    }
    // certify the witness: d(lambda) must equal the difference exactly
    let check = solver::coboundary_table(grp, &lambda_total, m);
    if check != diff {
        return Err(Error::CrossCheck(
            "coboundary witness failed verification".into(),
        ));
    }
    Ok(Some(Cochain1 {
        group: grp.clone(),
        modulus: m,
        rank: 1,
        values: lambda_total,
    }))
}

/// Rescale a rank-1 class from modulus m into modulus M (m | M) via the
/// canonical inclusion Z/m -> Z/M.
pub fn rescale_up(c: &CohomologyClass2, big: u64) -> Result<CohomologyClass2> {
    if big % c.modulus != 0 {
        return Err(Error::Mismatch("rescale target must be a multiple".into()));
    }
    let k = big / c.modulus;
    Ok(CohomologyClass2 {
        group: c.group.clone(),
        modulus: big,
        rank: c.rank,
        values: c.values.iter().map(|&v| v % c.modulus * k).collect(),
    })
}
