use super::{extgcd, unit_multiplier};

/// Howell-style echelon form over Z/mZ with optional transform tracking.
///
/// Rows are inserted one at a time. The basis keeps at most one row per
/// pivot column, pivots normalized to divisors of m. After every basis
/// change the "closure" rows (m/pivot times the row) are folded back in, so
/// the final basis has the Howell property: every vector of the row span
/// reduces to zero by greedy elimination. Transforms express each basis row
/// (and each collected kernel vector) as a combination of the inserted rows.
pub struct Echelon {
    pub modulus: u64,
    pub width: usize,
    /// basis[c] = Some((row, transform)) with leading column c.
    basis: Vec<Option<(Vec<u64>, Vec<u64>)>>,
    /// Transform width (number of original rows), fixed at construction.
    tr_width: usize,
    inserted: usize,
    /// Transforms of rows that reduced to zero: left-kernel generators.
    kernel: Vec<Vec<u64>>,
    track: bool,
}

impl Echelon {
    pub fn new(modulus: u64, width: usize) -> Self {
        Echelon {
            modulus,
            width,
            basis: vec![None; width],
            tr_width: 0,
            inserted: 0,
            kernel: Vec::new(),
            track: false,
        }
    }

    /// Tracking variant; `expected_rows` fixes the transform width.
    pub fn new_tracked(modulus: u64, width: usize, expected_rows: usize) -> Self {
        Echelon {
            modulus,
            width,
            basis: vec![None; width],
            tr_width: expected_rows,
            inserted: 0,
            kernel: Vec::new(),
            track: true,
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.iter().filter(|b| b.is_some()).count()
    }

    pub fn rows(&self) -> impl Iterator<Item = &Vec<u64>> {
        self.basis.iter().flatten().map(|(r, _)| r)
    }

    pub fn kernel_rows(&self) -> &[Vec<u64>] {
        &self.kernel
    }

    /// Insert a row; returns true if it enlarged the span.
    pub fn insert(&mut self, row: Vec<u64>) -> bool {
        let tr = if self.track {
            let mut t = vec![0u64; self.tr_width];
            assert!(self.inserted < self.tr_width, "more rows than declared");
            t[self.inserted] = 1;
            t
        } else {
            Vec::new()
        };
        self.inserted += 1;
        self.insert_with_transform(row, tr)
    }

    fn insert_with_transform(&mut self, row: Vec<u64>, tr: Vec<u64>) -> bool {
        let mut grew = false;
        let mut pending = vec![(row, tr)];
        while let Some((mut row, mut tr)) = pending.pop() {
            let m = self.modulus;
            loop {
                let c = match row.iter().position(|&x| x % m != 0) {
                    Some(c) => c,
                    None => {
                        if self.track && tr.iter().any(|&x| x % m != 0) {
                            self.kernel.push(tr);
                        }
                        break;
                    }
                };
                match &self.basis[c] {
                    None => {
                        // normalize pivot to gcd(val, m)
                        let u = unit_multiplier(row[c], m);
                        scale(&mut row, u, m);
                        scale(&mut tr, u, m);
                        let piv = row[c];
                        debug_assert_eq!(m % piv, 0);
                        // queue the torsion closure of this new basis row
                        if piv > 1 {
                            let k = m / piv;
                            let crow = scaled(&row, k, m);
                            let ctr = scaled(&tr, k, m);
                            pending.push((crow, ctr));
                        }
                        self.basis[c] = Some((row, tr));
                        grew = true;
                        break;
                    }
                    Some((b, _)) => {
                        let d = b[c];
                        if row[c] % d == 0 {
                            let q = row[c] / d;
                            let (b, bt) = self.basis[c].as_ref().unwrap();
                            let (b, bt) = (b.clone(), bt.clone());
                            submul(&mut row, &b, q, m);
                            if self.track {
                                submul(&mut tr, &bt, q, m);
                            }
                        } else {
                            // combine to realize gcd(row[c], d) at column c
                            let (g, s, t) = extgcd(row[c] as i128, d as i128);
                            let s = s.rem_euclid(m as i128) as u64;
                            let t = t.rem_euclid(m as i128) as u64;
                            let (b, bt) = self.basis[c].take().unwrap();
                            let mut nrow = combined(&row, s, &b, t, m);
                            let mut ntr = if self.track {
                                combined(&tr, s, &bt, t, m)
                            } else {
                                Vec::new()
                            };
                            debug_assert_eq!(nrow[c] as i128 % (m as i128), g % m as i128);
                            let u = unit_multiplier(nrow[c], m);
                            scale(&mut nrow, u, m);
                            scale(&mut ntr, u, m);
                            let piv = nrow[c];
                            if piv > 1 {
                                let k = m / piv;
                                pending.push((scaled(&nrow, k, m), scaled(&ntr, k, m)));
                            }
                            self.basis[c] = Some((nrow, ntr));
                            grew = true;
                            // the displaced basis row reenters the queue
                            pending.push((b, bt));
                        }
                    }
                }
            }
        }
        grew
    }

    /// Greedy reduction of `v`. Returns the residue and, when tracking, the
    /// coefficients over the inserted rows that were subtracted.
    pub fn reduce(&self, v: &[u64]) -> (Vec<u64>, Vec<u64>) {
        let m = self.modulus;
        let mut v: Vec<u64> = v.iter().map(|&x| x % m).collect();
        let mut coeff = vec![0u64; self.tr_width];
        for c in 0..self.width {
            if v[c] % m == 0 {
                continue;
            }
            if let Some((b, bt)) = &self.basis[c] {
                let d = b[c];
                if v[c] % d == 0 {
                    let q = v[c] / d;
                    submul(&mut v, b, q, m);
                    if self.track {
                        for (x, y) in coeff.iter_mut().zip(bt) {
                            *x = (*x + q * y) % m;
                        }
                    }
                }
            }
        }
        (v, coeff)
    }

    /// Is `v` in the row span?
    pub fn contains(&self, v: &[u64]) -> bool {
        let (r, _) = self.reduce(v);
        r.iter().all(|&x| x % self.modulus == 0)
    }

    /// Express `v` as a combination of the inserted rows, if in the span.
    pub fn express(&self, v: &[u64]) -> Option<Vec<u64>> {
        assert!(self.track);
        let (r, coeff) = self.reduce(v);
        if r.iter().all(|&x| x % self.modulus == 0) {
            Some(coeff)
        } else {
            None
        }
    }

    /// Number of elements of the row span. Only safe for small spans; use
    /// `span_size_log` when ranks are large.
    pub fn span_size(&self) -> u128 {
        let m = self.modulus as u128;
        self.rows().map(|r| {
            let c = r.iter().position(|&x| x != 0).unwrap();
            m / r[c] as u128
        }).product()
    }

    /// For a prime-power modulus p^e: the exponent a with |span| = p^a.
    pub fn span_size_log(&self, p: u64) -> u64 {
        let m = self.modulus;
        self.rows()
            .map(|r| {
                let c = r.iter().position(|&x| x != 0).unwrap();
                let mut q = m / r[c];
                let mut a = 0u64;
                while q % p == 0 {
                    q /= p;
                    a += 1;
                }
                debug_assert_eq!(q, 1, "pivot not a p-power divisor");
                a
            })
            .sum()
    }

    /// Basis rows as a plain matrix, ordered by pivot column.
    pub fn into_rows(self) -> Vec<Vec<u64>> {
        self.basis.into_iter().flatten().map(|(r, _)| r).collect()
    }

    pub fn row_matrix(&self) -> Vec<Vec<u64>> {
        self.rows().cloned().collect()
    }
}

fn scale(v: &mut [u64], k: u64, m: u64) {
    for x in v.iter_mut() {
        *x = *x * k % m;
    }
}

fn scaled(v: &[u64], k: u64, m: u64) -> Vec<u64> {
    v.iter().map(|&x| x * k % m).collect()
}

fn submul(v: &mut [u64], b: &[u64], q: u64, m: u64) {
    for (x, &y) in v.iter_mut().zip(b) {
        *x = (*x + (m - q % m * y % m) % m) % m;
    }
}

fn combined(a: &[u64], s: u64, b: &[u64], t: u64, m: u64) -> Vec<u64> {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| (s * x % m + t * y % m) % m)
        .collect()
}

/// Solution space {x : B x^T = 0} of the homogeneous system whose
/// equations are the rows of `eqs`, as an echelon basis of row vectors.
pub fn solve_homogeneous(eqs: &Echelon) -> Vec<Vec<u64>> {
    let m = eqs.modulus;
    let n = eqs.width;
    let rows = eqs.row_matrix();
    // left kernel of the transpose, tracked
    let mut ech = Echelon::new_tracked(m, rows.len(), n);
    for i in 0..n {
        let col: Vec<u64> = rows.iter().map(|r| r[i]).collect();
        ech.insert(col);
    }
    let mut sol = Echelon::new(m, n);
    for k in ech.kernel_rows() {
        sol.insert(k.clone());
    }
    sol.into_rows()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exhaustive span of a few generator rows (small cases only).
    fn brute_span(rows: &[Vec<u64>], m: u64) -> std::collections::BTreeSet<Vec<u64>> {
        let n = rows[0].len();
        let mut set = std::collections::BTreeSet::new();
        let mut coeffs = vec![0u64; rows.len()];
        loop {
            let mut v = vec![0u64; n];
            for (c, r) in coeffs.iter().zip(rows) {
                for (x, &y) in v.iter_mut().zip(r) {
                    *x = (*x + c * y) % m;
                }
            }
            set.insert(v);
            let mut i = 0;
            loop {
                if i == coeffs.len() {
                    return set;
                }
                coeffs[i] += 1;
                if coeffs[i] == m {
                    coeffs[i] = 0;
                    i += 1;
                } else {
                    break;
                }
            }
        }
    }

    #[test]
    fn span_and_membership_match_bruteforce() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for &m in &[4u64, 6, 8, 9, 12] {
            for _ in 0..30 {
                let n = rng.gen_range(1..4usize);
                let k = rng.gen_range(1..4usize);
                let rows: Vec<Vec<u64>> = (0..k)
                    .map(|_| (0..n).map(|_| rng.gen_range(0..m)).collect())
                    .collect();
                let brute = brute_span(&rows, m);
                let mut ech = Echelon::new_tracked(m, n, k);
                for r in &rows {
                    ech.insert(r.clone());
                }
                assert_eq!(ech.span_size(), brute.len() as u128);
                // every brute element reduces to zero with valid coefficients
                for v in &brute {
                    let coeffs = ech.express(v).expect("span member must express");
                    let mut chk = vec![0u64; n];
                    for (c, r) in coeffs.iter().zip(&rows) {
                        for (x, &y) in chk.iter_mut().zip(r) {
                            *x = (*x + c * y) % m;
                        }
                    }
                    assert_eq!(&chk, v);
                }
                // a non-member must not express
                let mut probe = vec![0u64; n];
                for _ in 0..20 {
                    for x in probe.iter_mut() {
                        *x = rng.gen_range(0..m);
                    }
                    assert_eq!(brute.contains(&probe), ech.contains(&probe));
                }
            }
        }
    }

    #[test]
    fn left_kernel_matches_bruteforce() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for &m in &[4u64, 8, 9, 12] {
            for _ in 0..25 {
                let n = rng.gen_range(1..4usize);
                let k = rng.gen_range(1..4usize);
                let rows: Vec<Vec<u64>> = (0..k)
                    .map(|_| (0..n).map(|_| rng.gen_range(0..m)).collect())
                    .collect();
                let mut ech = Echelon::new_tracked(m, n, k);
                for r in &rows {
                    ech.insert(r.clone());
                }
                // brute force kernel {c : sum c_i rows_i = 0}
                let mut brute = std::collections::BTreeSet::new();
                let mut c = vec![0u64; k];
                'outer: loop {
                    let mut v = vec![0u64; n];
                    for (ci, r) in c.iter().zip(&rows) {
                        for (x, &y) in v.iter_mut().zip(r) {
                            *x = (*x + ci * y) % m;
                        }
                    }
                    if v.iter().all(|&x| x == 0) {
                        brute.insert(c.clone());
                    }
                    let mut i = 0;
                    loop {
                        if i == k {
                            break 'outer;
                        }
                        c[i] += 1;
                        if c[i] == m {
                            c[i] = 0;
                            i += 1;
                        } else {
                            break;
                        }
                    }
                }
                let mut ker = Echelon::new(m, k);
                for kv in ech.kernel_rows() {
                    ker.insert(kv.clone());
                }
                assert_eq!(ker.span_size(), brute.len() as u128, "m={m} rows={rows:?}");
                for kv in &brute {
                    assert!(ker.contains(kv));
                }
            }
        }
    }

    #[test]
    fn homogeneous_solutions() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for &m in &[4u64, 9, 12] {
            for _ in 0..20 {
                let n = rng.gen_range(1..4usize);
                let k = rng.gen_range(1..5usize);
                let rows: Vec<Vec<u64>> = (0..k)
                    .map(|_| (0..n).map(|_| rng.gen_range(0..m)).collect())
                    .collect();
                let mut eqs = Echelon::new(m, n);
                for r in &rows {
                    eqs.insert(r.clone());
                }
                let sols = solve_homogeneous(&eqs);
                // every solution basis vector annihilates every equation
                for s in &sols {
                    for r in &rows {
                        let dot: u64 = s.iter().zip(r).map(|(&a, &b)| a * b % m).sum::<u64>() % m;
                        assert_eq!(dot, 0);
                    }
                }
                // count solutions brute force, compare with span size
                let mut count = 0u128;
                let mut x = vec![0u64; n];
                'outer: loop {
                    if rows.iter().all(|r| {
                        x.iter().zip(r).map(|(&a, &b)| a * b % m).sum::<u64>() % m == 0
                    }) {
                        count += 1;
                    }
                    let mut i = 0;
                    loop {
                        if i == n {
                            break 'outer;
                        }
                        x[i] += 1;
                        if x[i] == m {
                            x[i] = 0;
                            i += 1;
                        } else {
                            break;
                        }
                    }
                }
                let mut span = Echelon::new(m, n);
                for s in sols {
                    span.insert(s);
                }
                assert_eq!(span.span_size(), count);
            }
        }
    }
}
