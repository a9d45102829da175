use super::{gcd, unit_multiplier};

/// Smith form of a relation matrix over Z/mZ.
///
/// Presents the quotient (Z/m)^s / rowspan(rels). `factors[j]` is the order
/// of the j-th cyclic factor (1 entries dropped by callers), and
/// `gen_coords[j]` expresses a generator of that factor in the original
/// s coordinates.
pub struct SmithMod {
    pub factors: Vec<u64>,
    pub gen_coords: Vec<Vec<u64>>,
}

/// Diagonalize `rels` (rows of width s) over Z/m, tracking the inverse of
/// the accumulated column transform so quotient generators can be recovered.
pub fn smith_mod(rels: &[Vec<u64>], s: usize, m: u64) -> SmithMod {
    let mut a: Vec<Vec<u64>> = rels
        .iter()
        .map(|r| r.iter().map(|&x| x % m).collect())
        .collect();
    let rows = a.len();
    // binv tracks B^{-1} where column ops accumulate into B
    let mut binv: Vec<Vec<u64>> = (0..s)
        .map(|i| (0..s).map(|j| u64::from(i == j)).collect())
        .collect();

    let nmin = rows.min(s);
    let mut diag = Vec::with_capacity(s);
    for k in 0..nmin {
        loop {
            // pivot: entry with minimal gcd(entry, m) in the trailing block
            let mut best: Option<(usize, usize, u64)> = None;
            for i in k..rows {
                for j in k..s {
                    let v = a[i][j] % m;
                    if v != 0 {
                        let g = gcd(v, m);
                        if best.map_or(true, |(_, _, bg)| g < bg) {
                            best = Some((i, j, g));
                        }
                    }
                }
            }
            let Some((pi, pj, _)) = best else {
                break;
            };
            a.swap(k, pi);
            if pj != k {
                for row in a.iter_mut() {
                    row.swap(k, pj);
                }
                binv.swap(k, pj); // column swap on A = row swap on B^{-1}
            }
            let u = unit_multiplier(a[k][k], m);
            for row in a.iter_mut() {
                row[k] = row[k] * u % m;
            }
            // scaling column k of A by u scales row k of B^{-1} by u^{-1};
            // equivalently B^{-1} row k stays consistent if we scale by the
            // inverse unit. unit_multiplier returns a unit, so invert it.
            let uinv = super::modinv(u, m);
            for x in binv[k].iter_mut() {
                *x = *x * uinv % m;
            }
            let d = a[k][k];
            debug_assert!(d == 0 || m % d == 0);
            // clear column k below
            for i in k + 1..rows {
                if a[i][k] % m != 0 {
                    let q = a[i][k] / d;
                    debug_assert_eq!(a[i][k] % d, 0, "pivot gcd was minimal");
                    for j in 0..s {
                        a[i][j] = (a[i][j] + (m - q * a[k][j] % m) % m) % m;
                    }
                }
            }
            // clear row k to the right: col_j -= q * col_k
            for j in k + 1..s {
                if a[k][j] % m != 0 {
                    let q = a[k][j] / d;
                    debug_assert_eq!(a[k][j] % d, 0);
                    for row in a.iter_mut() {
                        row[j] = (row[j] + (m - q * row[k] % m) % m) % m;
                    }
                    // col_j(A) -= q col_k(A)  ==>  row_k(B^{-1}) += q row_j(B^{-1})
                    let (bk, bj) = if k < j {
                        let (lo, hi) = binv.split_at_mut(j);
                        (&mut lo[k], &hi[0])
                    } else {
                        unreachable!()
                    };
                    for (x, &y) in bk.iter_mut().zip(bj.iter()) {
                        *x = (*x + q * y) % m;
                    }
                }
            }
            // pivot must divide the remaining block, else repeat with a
            // smaller gcd showing up after elimination
            let clean = (k + 1..rows).all(|i| (k + 1..s).all(|j| a[i][j] % d == 0));
            if clean {
                diag.push(d);
                break;
            }
        }
        if diag.len() <= k {
            // no pivot found; rest of the matrix is zero
            break;
        }
    }

    // orders of the quotient factors: gcd(d, m) per diagonal slot, m for
    // coordinates with no relation. Callers pass prime-power m, where
    // divisors form a chain, so sorting yields the invariant-factor order.
    let mut pairs: Vec<(u64, Vec<u64>)> = (0..s)
        .map(|j| {
            let d = diag.get(j).copied().unwrap_or(0);
            let f = if d == 0 { m } else { gcd(d, m) };
            (f, std::mem::take(&mut binv[j]))
        })
        .collect();
    pairs.sort_by(|a, b| a.0.cmp(&b.0));
    let (factors, gen_coords) = pairs.into_iter().unzip();
    SmithMod {
        factors,
        gen_coords,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quotient_size_brute(rels: &[Vec<u64>], s: usize, m: u64) -> u128 {
        // |(Z/m)^s| / |rowspan|
        let mut ech = crate::zmod::Echelon::new(m, s);
        for r in rels {
            ech.insert(r.clone());
        }
        (m as u128).pow(s as u32) / ech.span_size()
    }

    #[test]
    fn smith_factors_give_quotient_order() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for &m in &[4u64, 8, 9, 27, 25] {
            for _ in 0..40 {
                let s = rng.gen_range(1..4usize);
                let k = rng.gen_range(0..4usize);
                let rels: Vec<Vec<u64>> = (0..k)
                    .map(|_| (0..s).map(|_| rng.gen_range(0..m)).collect())
                    .collect();
                let sm = smith_mod(&rels, s, m);
                let size: u128 = sm.factors.iter().map(|&f| f as u128).product();
                assert_eq!(size, quotient_size_brute(&rels, s, m), "m={m} rels={rels:?}");
            }
        }
    }

    #[test]
    fn generators_have_declared_order() {
        // prime power modulus: generator x with factor f must satisfy
        // f*x in rowspan and k*x not in rowspan for k < f dividing f
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for &m in &[8u64, 9, 27] {
            for _ in 0..40 {
                let s = rng.gen_range(1..4usize);
                let k = rng.gen_range(0..4usize);
                let rels: Vec<Vec<u64>> = (0..k)
                    .map(|_| (0..s).map(|_| rng.gen_range(0..m)).collect())
                    .collect();
                let sm = smith_mod(&rels, s, m);
                let mut ech = crate::zmod::Echelon::new(m, s);
                for r in &rels {
                    ech.insert(r.clone());
                }
                for (f, g) in sm.factors.iter().zip(&sm.gen_coords) {
                    let scaled: Vec<u64> = g.iter().map(|&x| x * f % m).collect();
                    assert!(ech.contains(&scaled) || scaled.iter().all(|&x| x == 0));
                    if *f > 1 {
                        let spf = (2..).find(|q| f % q == 0).unwrap();
                        let p = f / spf;
                        let sc: Vec<u64> = g.iter().map(|&x| x * p % m).collect();
                        assert!(!ech.contains(&sc), "m={m} f={f} rels={rels:?}");
                    }
                }
            }
        }
    }
}
