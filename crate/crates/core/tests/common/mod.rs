//! Independent oracles for the integration tests. Nothing here calls the
//! library's Gröbner, cohomology or linear algebra code.
#![allow(dead_code, clippy::needless_range_loop)]

use cotwist_core::{AbGroup, CycNum, NcPoly, Presentation, Word};
use num_traits::ToPrimitive;
use rand::Rng;

// ---------- prime field images of Q(zeta_N) ----------

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// `F_p` with `p = 1 mod N` and a fixed primitive `N`-th root standing in for `zeta_N`.
pub struct Fp {
    pub p: u64,
    pub zeta: u64,
    pub conductor: u32,
}

impl Fp {
    pub fn new(conductor: u32) -> Fp {
        let n = conductor.max(1) as u64;
        let mut p = (1u64 << 30) / n * n + 1;
        while !is_prime(p) {
            p += n;
        }
        let factors: Vec<u64> = (2..=n).filter(|q| n.is_multiple_of(*q) && is_prime(*q)).collect();
        let zeta = (2..p)
            .map(|g| pow_mod(g, (p - 1) / n, p))
            .find(|&z| factors.iter().all(|q| pow_mod(z, n / q, p) != 1))
            .expect("a primitive root exists");
        Fp { p, zeta, conductor }
    }

    pub fn inv(&self, a: u64) -> u64 {
        pow_mod(a, self.p - 2, self.p)
    }

    pub fn image(&self, c: &CycNum) -> u64 {
        assert_eq!(c.conductor(), self.conductor);
        let mut acc = 0u64;
        let mut z = 1u64;
        for q in c.coeffs() {
            let num = q.numer() % self.p as i64;
            let num = (num.to_i64().unwrap() + self.p as i64) as u64 % self.p;
            let den = (q.denom() % self.p as i64).to_u64().unwrap();
            acc = (acc + num * self.inv(den) % self.p * z) % self.p;
            z = z * self.zeta % self.p;
        }
        acc
    }

    /// Rank by Gaussian elimination mod `p`.
    pub fn rank(&self, mut rows: Vec<Vec<u64>>) -> usize {
        let p = self.p;
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut rank = 0;
        for c in 0..ncols {
            let Some(piv) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
                continue;
            };
            rows.swap(rank, piv);
            let inv = self.inv(rows[rank][c]);
            for x in rows[rank].iter_mut() {
                *x = *x * inv % p;
            }
            let pivot = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row[c] != 0 {
                    let f = row[c];
                    for (x, y) in row.iter_mut().zip(&pivot) {
                        *x = (*x + p - f * y % p) % p;
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}

// ---------- dense quotient dimensions ----------

/// All words of weighted degree `d`.
pub fn words_of_degree(weights: &[u32], d: u32) -> Vec<Vec<usize>> {
    if d == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for (i, &w) in weights.iter().enumerate() {
        if w <= d {
            for mut tail in words_of_degree(weights, d - w) {
                tail.insert(0, i);
                out.push(tail);
            }
        }
    }
    out
}

fn weight(word: &[usize], weights: &[u32]) -> u32 {
    word.iter().map(|&l| weights[l]).sum()
}

type SparseRow = Vec<(Vec<usize>, u64)>;

/// `dim (k<X>/I)_d` for `d <= bound`, from the span of all `u r v` computed mod `p`.
pub fn dense_quotient_dims(pres: &Presentation, bound: u32) -> Vec<u64> {
    let f = Fp::new(pres.conductor());
    let weights = pres.weights();
    let rels: Vec<(u32, SparseRow)> = pres
        .relations()
        .iter()
        .map(|r| {
            let terms: SparseRow = r.terms().map(|(w, c)| (w.letters().to_vec(), f.image(c))).collect();
            (weight(&terms[0].0, &weights), terms)
        })
        .collect();
    (0..=bound)
        .map(|d| {
            let words = words_of_degree(&weights, d);
            let index: std::collections::HashMap<&Vec<usize>, usize> =
                words.iter().enumerate().map(|(i, w)| (w, i)).collect();
            let mut rows = Vec::new();
            for (rd, terms) in &rels {
                if *rd > d {
                    continue;
                }
                let rest = d - rd;
                for l in 0..=rest {
                    for u in words_of_degree(&weights, l) {
                        for v in words_of_degree(&weights, rest - l) {
                            let mut row = vec![0u64; words.len()];
                            for (w, c) in terms {
                                let full: Vec<usize> = u.iter().chain(w).chain(&v).copied().collect();
                                let k = index[&full];
                                row[k] = (row[k] + c) % f.p;
                            }
                            rows.push(row);
                        }
                    }
                }
            }
            (words.len() - f.rank(rows)) as u64
        })
        .collect()
}

// ---------- finite group tables ----------

pub fn mult_table(g: &AbGroup) -> Vec<Vec<usize>> {
    let els = g.elements();
    els.iter()
        .map(|a| els.iter().map(|b| g.index(&g.mul(a, b))).collect())
        .collect()
}

/// Cocycle identity and normalization on exponent tables valued in `Z/m`.
pub fn is_cocycle_exp(mt: &[Vec<usize>], table: &[u32], m: u32) -> bool {
    let n = mt.len();
    let at = |a: usize, b: usize| table[a * n + b];
    if (0..n).any(|a| at(0, a) % m != 0 || at(a, 0) % m != 0) {
        return false;
    }
    for (a, row) in mt.iter().enumerate() {
        for (b, &ab) in row.iter().enumerate() {
            for c in 0..n {
                if (at(a, b) + at(ab, c)) % m != (at(a, mt[b][c]) + at(b, c)) % m {
                    return false;
                }
            }
        }
    }
    true
}

/// Every normalized `Z/m`-valued cocycle table (exponents of a primitive `m`-th root).
pub fn enumerate_cocycles(g: &AbGroup, m: u32) -> Vec<Vec<u32>> {
    let mt = mult_table(g);
    let n = mt.len();
    let free: Vec<usize> = (1..n).flat_map(|a| (1..n).map(move |b| a * n + b)).collect();
    let total = (m as u64).pow(free.len() as u32);
    let mut out = Vec::new();
    let mut table = vec![0u32; n * n];
    for code in 0..total {
        let mut c = code;
        for &k in &free {
            table[k] = (c % m as u64) as u32;
            c /= m as u64;
        }
        if is_cocycle_exp(&mt, &table, m) {
            out.push(table.clone());
        }
    }
    out
}

/// Backtracking search for `rho: G -> Z/m` with `rho(e) = 0` and
/// `rho(a) + rho(b) - rho(ab) = mu(a,b)` for all pairs.
pub fn rho_search(mt: &[Vec<usize>], mu: &[u32], m: u32) -> Option<Vec<u32>> {
    let n = mt.len();
    let mut rho = vec![0u32; n];
    fn consistent(mt: &[Vec<usize>], mu: &[u32], m: u32, rho: &[u32], k: usize) -> bool {
        let n = mt.len();
        for a in 0..=k {
            for b in 0..=k {
                let ab = mt[a][b];
                if ab <= k && (rho[a] + rho[b] + m - rho[ab]) % m != mu[a * n + b] % m {
                    return false;
                }
            }
        }
        true
    }
    fn go(mt: &[Vec<usize>], mu: &[u32], m: u32, rho: &mut Vec<u32>, k: usize) -> bool {
        if k == rho.len() {
            return true;
        }
        for v in 0..m {
            rho[k] = v;
            if consistent(mt, mu, m, rho, k) && go(mt, mu, m, rho, k + 1) {
                return true;
            }
        }
        false
    }
    if !consistent(mt, mu, m, &rho, 0) {
        return None;
    }
    go(mt, mu, m, &mut rho, 1).then_some(rho)
}

pub fn exp_table_to_cyc(table: &[u32], m: u32) -> Vec<CycNum> {
    table.iter().map(|&k| CycNum::zeta_pow(m, k as i64)).collect()
}

// ---------- Schur multiplier by Smith form over Z/p^k ----------

/// `|ker M|` for `M` acting on `(Z/q)^cols` with `q = p^k`.
fn kernel_size_prime_power(mut rows: Vec<Vec<i64>>, cols: usize, p: i64, k: u32) -> u64 {
    let q = p.pow(k);
    let val = |x: i64| -> u32 {
        let mut x = x.rem_euclid(q);
        if x == 0 {
            return k;
        }
        let mut v = 0;
        while x % p == 0 {
            x /= p;
            v += 1;
        }
        v
    };
    let inv_unit = |u: i64| -> i64 { (1..q).find(|x| (u * x).rem_euclid(q) == 1).expect("unit") };
    let mut size = 1u64;
    let mut col_done = vec![false; cols];
    let mut row_done = vec![false; rows.len()];
    loop {
        let mut best: Option<(u32, usize, usize)> = None;
        for (r, row) in rows.iter().enumerate() {
            if row_done[r] {
                continue;
            }
            for c in 0..cols {
                if !col_done[c] {
                    let v = val(row[c]);
                    if v < k && best.is_none_or(|b| v < b.0) {
                        best = Some((v, r, c));
                    }
                }
            }
        }
        let Some((v, r, c)) = best else { break };
        let pv = p.pow(v);
        let unit = rows[r][c].rem_euclid(q) / pv;
        let uinv = inv_unit(unit);
        // clear column c in the other rows
        for rr in 0..rows.len() {
            if rr != r && !row_done[rr] {
                let f = (rows[rr][c].rem_euclid(q) / pv * uinv).rem_euclid(q);
                if f != 0 {
                    let pivot = rows[r].clone();
                    for (x, y) in rows[rr].iter_mut().zip(&pivot) {
                        *x = (*x - f * y).rem_euclid(q);
                    }
                }
            }
        }
        // column operations clear row r without touching the kernel size
        for cc in 0..cols {
            if cc != c && !col_done[cc] {
                let f = (rows[r][cc].rem_euclid(q) / pv * uinv).rem_euclid(q);
                if f != 0 {
                    for row in rows.iter_mut() {
                        row[cc] = (row[cc] - f * row[c]).rem_euclid(q);
                    }
                }
            }
        }
        size *= pv as u64;
        row_done[r] = true;
        col_done[c] = true;
    }
    let free = col_done.iter().filter(|d| !**d).count() as u32;
    size * (q as u64).pow(free)
}

fn kernel_size(rows: &[Vec<i64>], cols: usize, e: u64) -> u64 {
    let mut n = e;
    let mut acc = 1;
    let mut p = 2;
    while n > 1 {
        if n.is_multiple_of(p) {
            let mut k = 0;
            while n.is_multiple_of(p) {
                n /= p;
                k += 1;
            }
            acc *= kernel_size_prime_power(rows.to_vec(), cols, p as i64, k);
        }
        p += 1;
    }
    acc
}

/// Number of distinct alternators of `Z/e`-valued cocycles, `e` the exponent.
/// Over an algebraically closed field a cocycle of an abelian group is a
/// coboundary exactly when its alternator is trivial, and every alternating
/// bicharacter is reached with `mu_e` values, so this counts classes.
pub fn schur_order_brute(g: &AbGroup) -> u64 {
    let mt = mult_table(g);
    let n = mt.len();
    let e = g.exponent() as u64;
    let var = |a: usize, b: usize| a * n + b;
    let mut cocycle_rows = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let mut row = vec![0i64; n * n];
                row[var(a, b)] += 1;
                row[var(mt[a][b], c)] += 1;
                row[var(a, mt[b][c])] -= 1;
                row[var(b, c)] -= 1;
                cocycle_rows.push(row);
            }
        }
    }
    for a in 0..n {
        let mut row = vec![0i64; n * n];
        row[var(0, a)] = 1;
        cocycle_rows.push(row.clone());
        let mut row = vec![0i64; n * n];
        row[var(a, 0)] = 1;
        cocycle_rows.push(row);
    }
    let z = kernel_size(&cocycle_rows, n * n, e);
    let mut with_alt = cocycle_rows.clone();
    for a in 0..n {
        for b in 0..n {
            let mut row = vec![0i64; n * n];
            row[var(a, b)] += 1;
            row[var(b, a)] -= 1;
            with_alt.push(row);
        }
    }
    let sym = kernel_size(&with_alt, n * n, e);
    z / sym
}

/// Every abelian group of order at most `n`, as invariant factor lists.
pub fn abelian_groups_up_to(n: u32) -> Vec<Vec<u32>> {
    fn parts(order: u32, max_next: u32) -> Vec<Vec<u32>> {
        // invariant factors d1 | d2 | ... listed largest first
        if order == 1 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for d in (2..=order.min(max_next)).rev() {
            if order.is_multiple_of(d) {
                for mut rest in parts(order / d, d) {
                    if rest.first().is_none_or(|&r| d % r == 0) {
                        rest.insert(0, d);
                        out.push(rest);
                    }
                }
            }
        }
        out
    }
    (1..=n)
        .flat_map(|o| parts(o, o))
        .map(|mut f| {
            f.reverse();
            f
        })
        .collect()
}

// ---------- random data ----------

/// A random homogeneous polynomial of degree `d` in `n` degree-one letters.
pub fn random_poly<R: Rng>(rng: &mut R, n: usize, d: usize, conductor: u32, terms: usize) -> NcPoly {
    let mut p = NcPoly::zero();
    for _ in 0..terms {
        let w = Word((0..d).map(|_| rng.gen_range(0..n)).collect());
        let c = &CycNum::from_int(conductor, rng.gen_range(-3..=3)) * &CycNum::zeta_pow(conductor, rng.gen_range(0..4));
        p.add_term(w, c);
    }
    p
}
