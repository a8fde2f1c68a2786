//! Exact arithmetic in prime fields and small extension fields.
//!
//! Elements are stored as a single packed integer in `[0, q)`. In an
//! extension field `F_{p^k}` the packed value is `sum c_i p^i`, where
//! `c_0 .. c_{k-1}` are the coefficients of the residue modulo the defining
//! polynomial. Packing is a bijection, so equality of `Elem` is equality
//! of field elements.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ntheory::{is_prime, mul_mod, pow_mod, FactoredInteger};
use crate::rng;

const Q_LIMIT: u64 = 1 << 62;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(u64);

impl Elem {
    /// Packed representation in `[0, q)`.
    pub fn value(self) -> u64 {
        self.0
    }
}

/// JSON form of an element: an integer in a prime field, a coefficient
/// array (low to high) in an extension field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElemRepr {
    Int(u64),
    Coeffs(Vec<u64>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FieldWire", into = "FieldWire")]
pub struct FieldCtx {
    p: u64,
    k: u32,
    /// Monic, low-to-high, length `k + 1`; absent for prime fields.
    modulus: Option<Vec<u64>>,
    q: u64,
}

#[derive(Serialize, Deserialize)]
struct FieldWire {
    p: u64,
    k: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    modulus: Option<Vec<u64>>,
}

impl From<FieldCtx> for FieldWire {
    fn from(f: FieldCtx) -> Self {
        FieldWire {
            p: f.p,
            k: f.k,
            modulus: f.modulus,
        }
    }
}

impl TryFrom<FieldWire> for FieldCtx {
    type Error = Error;

    fn try_from(w: FieldWire) -> Result<Self> {
        match (w.k, w.modulus) {
            (1, None) => FieldCtx::prime(w.p),
            (k, Some(m)) if k >= 2 && m.len() == k as usize + 1 => FieldCtx::with_modulus(w.p, m),
            _ => Err(Error::Malformed("field: k and modulus disagree".into())),
        }
    }
}

impl FieldCtx {
    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p >= Q_LIMIT {
            return Err(Error::FieldTooLarge { p, k: 1 });
        }
        Ok(FieldCtx {
            p,
            k: 1,
            modulus: None,
            q: p,
        })
    }

    /// `F_{p^k}` for `k >= 2`, with a monic irreducible modulus found by
    /// seeded random search.
    pub fn extension(p: u64, k: u32, seed: u64) -> Result<Self> {
        use rand::Rng as _;
        let q = Self::check_extension_size(p, k)?;
        let mut rng = rng::stream(seed, 0);
        loop {
            let mut m: Vec<u64> = (0..k).map(|_| rng.gen_range(0..p)).collect();
            m.push(1);
            if m[0] != 0 && poly::is_irreducible(&m, p) {
                return Ok(FieldCtx {
                    p,
                    k,
                    modulus: Some(m),
                    q,
                });
            }
        }
    }

    /// `F_{p^k}` with a caller-supplied modulus (monic, low to high).
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Self> {
        let k = modulus.len().saturating_sub(1) as u32;
        let q = Self::check_extension_size(p, k)?;
        if modulus.last() != Some(&1) || modulus.iter().any(|&c| c >= p) {
            return Err(Error::Malformed(
                "modulus must be monic with coefficients below p".into(),
            ));
        }
        if !poly::is_irreducible(&modulus, p) {
            return Err(Error::Malformed("modulus is reducible".into()));
        }
        Ok(FieldCtx {
            p,
            k,
            modulus: Some(modulus),
            q,
        })
    }

    fn check_extension_size(p: u64, k: u32) -> Result<u64> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k < 2 {
            return Err(Error::InvalidParameter(format!(
                "extension degree {k} must be at least 2"
            )));
        }
        match p.checked_pow(k) {
            Some(q) if q < Q_LIMIT => Ok(q),
            _ => Err(Error::FieldTooLarge { p, k }),
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> Option<&[u64]> {
        self.modulus.as_deref()
    }

    pub fn is_prime_field(&self) -> bool {
        self.k == 1
    }

    pub fn zero(&self) -> Elem {
        Elem(0)
    }

    pub fn one(&self) -> Elem {
        Elem(1)
    }

    /// Element from its packed value; fails unless `v < q`.
    pub fn elem(&self, v: u64) -> Result<Elem> {
        if v < self.q {
            Ok(Elem(v))
        } else {
            Err(Error::NotInField(v))
        }
    }

    pub(crate) fn elem_unchecked(&self, v: u64) -> Elem {
        debug_assert!(v < self.q);
        Elem(v)
    }

    /// Image of the integer `n` under `Z -> F_p -> F_q`.
    pub fn from_int(&self, n: u64) -> Elem {
        Elem(n % self.p)
    }

    /// Every element in packed order, zero first.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.q).map(Elem)
    }

    pub fn coeffs(&self, e: Elem) -> Vec<u64> {
        let mut v = e.0;
        (0..self.k)
            .map(|_| {
                let c = v % self.p;
                v /= self.p;
                c
            })
            .collect()
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<Elem> {
        if coeffs.len() != self.k as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::Malformed(format!(
                "expected {} coefficients below {}",
                self.k, self.p
            )));
        }
        Ok(Elem(
            coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c),
        ))
    }

    pub fn to_repr(&self, e: Elem) -> ElemRepr {
        if self.is_prime_field() {
            ElemRepr::Int(e.0)
        } else {
            ElemRepr::Coeffs(self.coeffs(e))
        }
    }

    pub fn from_repr(&self, r: &ElemRepr) -> Result<Elem> {
        match r {
            ElemRepr::Int(v) if self.is_prime_field() => self.elem(*v),
            ElemRepr::Coeffs(c) if !self.is_prime_field() => self.from_coeffs(c),
            _ => Err(Error::Malformed(
                "element representation does not match the field".into(),
            )),
        }
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.is_prime_field() {
            let s = a.0 + b.0;
            return Elem(if s >= self.p { s - self.p } else { s });
        }
        self.digitwise(a, b, |x, y| {
            let s = x + y;
            if s >= self.p {
                s - self.p
            } else {
                s
            }
        })
    }

    pub fn neg(&self, a: Elem) -> Elem {
        if self.is_prime_field() {
            return Elem(if a.0 == 0 { 0 } else { self.p - a.0 });
        }
        self.digitwise(a, Elem(0), |x, _| if x == 0 { 0 } else { self.p - x })
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.modulus {
            None => Elem(mul_mod(a.0, b.0, self.p)),
            Some(m) => {
                let prod = poly::mul(&self.coeffs(a), &self.coeffs(b), self.p);
                let r = poly::rem(prod, m, self.p);
                let mut c = r;
                c.resize(self.k as usize, 0);
                Elem(c.iter().rev().fold(0, |acc, &x| acc * self.p + x))
            }
        }
    }

    pub fn pow(&self, a: Elem, mut exp: u64) -> Elem {
        if self.is_prime_field() {
            return Elem(pow_mod(a.0, exp, self.p));
        }
        let mut base = a;
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.q - 2))
    }

    /// Multiplicative order of `g`, given the factorization of `q - 1`.
    pub fn element_order(&self, g: Elem, fact: &FactoredInteger) -> Result<u64> {
        if g.0 == 0 {
            return Err(Error::ZeroElement);
        }
        crate::ntheory::check_group_order(self, fact)?;
        let mut order = self.q - 1;
        for &(r, e) in &fact.factors {
            for _ in 0..e {
                if self.pow(g, order / r) == self.one() {
                    order /= r;
                } else {
                    break;
                }
            }
        }
        Ok(order)
    }

    fn digitwise(&self, a: Elem, b: Elem, f: impl Fn(u64, u64) -> u64) -> Elem {
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u64;
        let mut place = 1u64;
        for i in 0..self.k {
            out += f(x % self.p, y % self.p) * place;
            x /= self.p;
            y /= self.p;
            if i + 1 < self.k {
                place *= self.p;
            }
        }
        Elem(out)
    }
}

/// Dense polynomials over `F_p`, coefficients low to high.
pub(crate) mod poly {
    use crate::ntheory::{mul_mod, pow_mod};

    fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
            }
        }
        trim(out)
    }

    pub fn rem(a: Vec<u64>, m: &[u64], p: u64) -> Vec<u64> {
        let mut a = trim(a);
        let m = trim(m.to_vec());
        let dm = m.len() - 1;
        let lead_inv = pow_mod(m[dm], p - 2, p);
        while a.len() > dm {
            let shift = a.len() - 1 - dm;
            let c = mul_mod(*a.last().unwrap(), lead_inv, p);
            for (i, &mi) in m.iter().enumerate() {
                let sub = mul_mod(c, mi, p);
                a[shift + i] = (a[shift + i] + p - sub) % p;
            }
            a = trim(a);
        }
        a
    }

    pub fn gcd(a: Vec<u64>, b: Vec<u64>, p: u64) -> Vec<u64> {
        let (mut a, mut b) = (trim(a), trim(b));
        while !b.is_empty() {
            let r = rem(a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    fn pow_mod_poly(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut acc = vec![1u64];
        let mut b = rem(base.to_vec(), m, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = rem(mul(&acc, &b, p), m, p);
            }
            b = rem(mul(&b, &b, p), m, p);
            e >>= 1;
        }
        acc
    }

    fn prime_divisors(mut n: u64) -> Vec<u64> {
        let mut out = Vec::new();
        let mut d = 2;
        while d * d <= n {
            if n.is_multiple_of(d) {
                out.push(d);
                while n.is_multiple_of(d) {
                    n /= d;
                }
            }
            d += 1;
        }
        if n > 1 {
            out.push(n);
        }
        out
    }

    /// Rabin's test: `x^(p^k) = x mod f` and `gcd(x^(p^(k/r)) - x, f) = 1`
    /// for every prime `r | k`.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let f = trim(f.to_vec());
        if f.len() < 2 {
            return false;
        }
        let k = (f.len() - 1) as u64;
        if k == 1 {
            return true;
        }
        let x = vec![0u64, 1];
        // frob[j] = x^(p^j) mod f
        let mut frob = vec![rem(x.clone(), &f, p)];
        for j in 1..=k as usize {
            let next = pow_mod_poly(&frob[j - 1], p, &f, p);
            frob.push(next);
        }
        if frob[k as usize] != rem(x.clone(), &f, p) {
            return false;
        }
        prime_divisors(k).into_iter().all(|r| {
            let mut h = frob[(k / r) as usize].clone();
            h.resize(h.len().max(2), 0);
            h[1] = (h[1] + p - 1) % p;
            gcd(f.clone(), h, p).len() == 1
        })
    }
}
