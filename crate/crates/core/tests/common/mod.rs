//! Reference arithmetic and brute-force checks that share no code with the
//! library beyond reading a field's parameters.
#![allow(dead_code)]

use packset::FieldCtx;

/// `F_{p^k}` with elements packed as base-`p` digit strings.
pub struct RefField {
    pub p: u64,
    pub k: usize,
    /// Monic modulus, low degree first; empty for a prime field.
    pub modulus: Vec<u64>,
}

impl RefField {
    pub fn of(ctx: &FieldCtx) -> Self {
        RefField {
            p: ctx.p(),
            k: ctx.k() as usize,
            modulus: ctx.modulus().map(<[u64]>::to_vec).unwrap_or_default(),
        }
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.k as u32)
    }

    fn digits(&self, mut x: u64) -> Vec<u64> {
        let mut d = vec![0; self.k];
        for c in d.iter_mut() {
            *c = x % self.p;
            x /= self.p;
        }
        d
    }

    fn pack(&self, d: &[u64]) -> u64 {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    pub fn add(&self, x: u64, y: u64) -> u64 {
        let (a, b) = (self.digits(x), self.digits(y));
        let s: Vec<u64> = a.iter().zip(&b).map(|(u, v)| (u + v) % self.p).collect();
        self.pack(&s)
    }

    pub fn mul(&self, x: u64, y: u64) -> u64 {
        if self.k == 1 {
            return ((x as u128 * y as u128) % self.p as u128) as u64;
        }
        let (a, b) = (self.digits(x), self.digits(y));
        let mut prod = vec![0u64; 2 * self.k - 1];
        for (i, u) in a.iter().enumerate() {
            for (j, v) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + u * v) % self.p;
            }
        }
        for deg in (self.k..prod.len()).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            for (i, m) in self.modulus[..self.k].iter().enumerate() {
                let idx = deg - self.k + i;
                prod[idx] = (prod[idx] + (self.p - c) * m % self.p) % self.p;
            }
            prod[deg] = 0;
        }
        self.pack(&prod[..self.k])
    }
}

/// Every dense error vector of length `n` with at most `t` entries from
/// `alphabet` and zeros elsewhere.
pub fn all_errors(n: usize, alphabet: &[u64], t: usize) -> Vec<Vec<u64>> {
    fn rec(pos: usize, left: usize, cur: &mut Vec<u64>, alphabet: &[u64], out: &mut Vec<Vec<u64>>) {
        if pos == cur.len() {
            out.push(cur.clone());
            return;
        }
        rec(pos + 1, left, cur, alphabet, out);
        if left > 0 {
            for &a in alphabet {
                cur[pos] = a;
                rec(pos + 1, left - 1, cur, alphabet, out);
            }
            cur[pos] = 0;
        }
    }
    let mut out = Vec::new();
    rec(0, t, &mut vec![0; n], alphabet, &mut out);
    out
}

pub fn syndrome(f: &RefField, b: &[u64], e: &[u64]) -> u64 {
    b.iter().zip(e).fold(0, |s, (&x, &a)| f.add(s, f.mul(a, x)))
}

/// Pairwise comparison of all syndromes; `true` iff no two distinct error
/// vectors collide.
pub fn pairwise_is_packing(f: &RefField, b: &[u64], alphabet: &[u64], t: usize) -> bool {
    let errs = all_errors(b.len(), alphabet, t);
    let syn: Vec<u64> = errs.iter().map(|e| syndrome(f, b, e)).collect();
    for i in 0..syn.len() {
        for j in 0..i {
            if syn[i] == syn[j] {
                return false;
            }
        }
    }
    true
}

pub fn distinct_syndromes(f: &RefField, b: &[u64], alphabet: &[u64], t: usize) -> usize {
    let mut syn: Vec<u64> = all_errors(b.len(), alphabet, t)
        .iter()
        .map(|e| syndrome(f, b, e))
        .collect();
    syn.sort_unstable();
    syn.dedup();
    syn.len()
}
