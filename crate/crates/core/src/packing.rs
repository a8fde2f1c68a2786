//! Error alphabets, sparse error vectors, syndromes and packing sets, with
//! an exhaustive verifier, greedy maximal extension and an exact
//! maximum-size search.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::bounds::{error_count, max_b_upper};
use crate::error::{Error, Result};
use crate::field::{Elem, ElemRepr, FieldCtx};
use crate::rng;

/// Default limit on the number of error vectors a verifier may enumerate.
pub const DEFAULT_ENUM_CAP: u64 = 100_000_000;

/// Above this many syndromes the verifier switches from a hash table to
/// sorting.
pub const HASH_PATH_LIMIT: u128 = 10_000_000;

// Fields up to this size use a bitmap instead of a hash set.
const BITMAP_Q_LIMIT: u64 = 1 << 27;

/// The restricted set of nonzero error values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErrorAlphabet {
    elements: Vec<Elem>,
    lambda: Option<u64>,
}

impl ErrorAlphabet {
    pub fn new(ctx: &FieldCtx, elements: Vec<Elem>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::InvalidParameter("alphabet must be nonempty".into()));
        }
        let mut seen = HashSet::new();
        for &e in &elements {
            ctx.elem(e.value())?;
            if e == ctx.zero() {
                return Err(Error::InvalidParameter(
                    "alphabet must not contain 0".into(),
                ));
            }
            if !seen.insert(e) {
                return Err(Error::InvalidParameter(format!(
                    "alphabet repeats element {}",
                    e.value()
                )));
            }
        }
        let n = elements.len() as u64;
        let lambda = (ctx.is_prime_field() && elements.iter().all(|e| e.value() <= n)).then_some(n);
        Ok(ErrorAlphabet { elements, lambda })
    }

    pub fn from_values(ctx: &FieldCtx, values: &[u64]) -> Result<Self> {
        let elems = values
            .iter()
            .map(|&v| ctx.elem(v))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ctx, elems)
    }

    /// `{1, 2, ..., lambda}` in a prime field.
    pub fn limited_magnitude(ctx: &FieldCtx, lambda: u64) -> Result<Self> {
        if !ctx.is_prime_field() || lambda == 0 || lambda >= ctx.p() {
            return Err(Error::InvalidParameter(format!(
                "limited-magnitude alphabet needs a prime field and 1 <= lambda < p, got lambda = {lambda}"
            )));
        }
        Self::new(ctx, (1..=lambda).map(|v| ctx.from_int(v)).collect())
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `Some(lambda)` iff the alphabet is `{1..lambda}` in a prime field.
    pub fn lambda(&self) -> Option<u64> {
        self.lambda
    }

    pub fn contains(&self, e: Elem) -> bool {
        self.elements.contains(&e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackingConfig {
    pub t: u32,
}

impl PackingConfig {
    pub fn new(t: u32) -> Result<Self> {
        if t == 0 {
            return Err(Error::InvalidParameter("t must be at least 1".into()));
        }
        Ok(PackingConfig { t })
    }
}

/// Sparse error: `(position in B, value)` pairs with strictly increasing
/// positions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ErrorVector {
    entries: Vec<(usize, Elem)>,
}

impl ErrorVector {
    pub fn new(entries: Vec<(usize, Elem)>) -> Result<Self> {
        if entries.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidParameter(
                "error vector positions must be strictly increasing".into(),
            ));
        }
        Ok(ErrorVector { entries })
    }

    pub fn empty() -> Self {
        ErrorVector::default()
    }

    pub fn weight(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(usize, Elem)] {
        &self.entries
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.iter().map(|&(i, _)| i)
    }

    /// Dense form of length `n`.
    pub fn to_dense(&self, ctx: &FieldCtx, n: usize) -> Vec<Elem> {
        let mut v = vec![ctx.zero(); n];
        for &(i, a) in &self.entries {
            v[i] = a;
        }
        v
    }

    pub fn to_wire(&self, ctx: &FieldCtx) -> ErrorVectorWire {
        ErrorVectorWire {
            support: self.support().collect(),
            values: self.entries.iter().map(|&(_, a)| ctx.to_repr(a)).collect(),
        }
    }

    pub fn from_wire(ctx: &FieldCtx, w: &ErrorVectorWire) -> Result<Self> {
        if w.support.len() != w.values.len() {
            return Err(Error::Malformed(
                "support and values differ in length".into(),
            ));
        }
        let entries = w
            .support
            .iter()
            .zip(&w.values)
            .map(|(&i, v)| Ok((i, ctx.from_repr(v)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorVectorWire {
    pub support: Vec<usize>,
    pub values: Vec<ElemRepr>,
}

/// The lexicographically least colliding pair in enumeration order:
/// `first` is the earliest vector sharing its syndrome with any other, and
/// `second` is the next vector with that syndrome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub first: ErrorVector,
    pub second: ErrorVector,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum Status {
    #[default]
    Unverified,
    VerifiedExhaustive,
    VerifiedSufficient,
    Refuted(Box<Witness>),
}

impl Status {
    pub fn is_certified(&self) -> bool {
        matches!(
            self,
            Status::VerifiedExhaustive | Status::VerifiedSufficient
        )
    }

    pub fn name(&self) -> &'static str {
        match self {
            Status::Unverified => "Unverified",
            Status::VerifiedExhaustive => "VerifiedExhaustive",
            Status::VerifiedSufficient => "VerifiedSufficient",
            Status::Refuted(_) => "Refuted",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syndrome(pub Elem);

/// An ordered, duplicate-free subset of `F_q^*` bound to an alphabet and a
/// weight limit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackingSet {
    field: FieldCtx,
    elements: Vec<Elem>,
    alphabet: ErrorAlphabet,
    config: PackingConfig,
    status: Status,
}

impl PackingSet {
    pub fn new(
        field: FieldCtx,
        elements: Vec<Elem>,
        alphabet: ErrorAlphabet,
        config: PackingConfig,
    ) -> Result<Self> {
        let mut seen = HashSet::new();
        for &b in &elements {
            field.elem(b.value())?;
            if b == field.zero() {
                return Err(Error::InvalidParameter(
                    "packing set must not contain 0".into(),
                ));
            }
            if !seen.insert(b) {
                return Err(Error::InvalidParameter(format!(
                    "duplicate element {}",
                    b.value()
                )));
            }
        }
        for &a in alphabet.elements() {
            field.elem(a.value())?;
        }
        Ok(PackingSet {
            field,
            elements,
            alphabet,
            config,
            status: Status::Unverified,
        })
    }

    /// Convenience constructor for prime fields.
    pub fn from_values(p: u64, b: &[u64], a: &[u64], t: u32) -> Result<Self> {
        let field = FieldCtx::prime(p)?;
        let elems = b
            .iter()
            .map(|&v| field.elem(v))
            .collect::<Result<Vec<_>>>()?;
        let alphabet = ErrorAlphabet::from_values(&field, a)?;
        Self::new(field, elems, alphabet, PackingConfig::new(t)?)
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn alphabet(&self) -> &ErrorAlphabet {
        &self.alphabet
    }

    pub fn t(&self) -> u32 {
        self.config.t
    }

    pub fn config(&self) -> PackingConfig {
        self.config
    }

    pub fn status(&self) -> &Status {
        &self.status
    }

    pub fn with_status(mut self, status: Status) -> Self {
        self.status = status;
        self
    }

    /// Number of weight-`<= t` restricted error vectors.
    pub fn error_count(&self) -> u128 {
        error_count(self.len() as u64, self.alphabet.len() as u64, self.config.t)
    }

    /// `S_B(e) = sum_b e_b * b`.
    pub fn syndrome(&self, e: &ErrorVector) -> Result<Syndrome> {
        let f = &self.field;
        let mut s = f.zero();
        for &(i, a) in e.entries() {
            let b = *self
                .elements
                .get(i)
                .ok_or_else(|| Error::InvalidParameter(format!("position {i} out of range")))?;
            s = f.add(s, f.mul(a, b));
        }
        Ok(Syndrome(s))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("packing set serializes")
    }
}

#[derive(Serialize, Deserialize)]
struct PackingWire {
    field: FieldCtx,
    #[serde(rename = "B")]
    b: Vec<ElemRepr>,
    #[serde(rename = "A")]
    a: Vec<ElemRepr>,
    t: u32,
    status: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    witness: Option<[ErrorVectorWire; 2]>,
}

impl Serialize for PackingSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let f = &self.field;
        let witness = match &self.status {
            Status::Refuted(w) => Some([w.first.to_wire(f), w.second.to_wire(f)]),
            _ => None,
        };
        PackingWire {
            field: f.clone(),
            b: self.elements.iter().map(|&e| f.to_repr(e)).collect(),
            a: self
                .alphabet
                .elements()
                .iter()
                .map(|&e| f.to_repr(e))
                .collect(),
            t: self.config.t,
            status: self.status.name().to_string(),
            witness,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PackingSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = PackingWire::deserialize(d)?;
        let build = || -> Result<PackingSet> {
            let f = w.field;
            let b =
                w.b.iter()
                    .map(|r| f.from_repr(r))
                    .collect::<Result<Vec<_>>>()?;
            let a =
                w.a.iter()
                    .map(|r| f.from_repr(r))
                    .collect::<Result<Vec<_>>>()?;
            let alphabet = ErrorAlphabet::new(&f, a)?;
            let status = match (w.status.as_str(), &w.witness) {
                ("Unverified", _) => Status::Unverified,
                ("VerifiedExhaustive", _) => Status::VerifiedExhaustive,
                ("VerifiedSufficient", _) => Status::VerifiedSufficient,
                ("Refuted", Some([x, y])) => Status::Refuted(Box::new(Witness {
                    first: ErrorVector::from_wire(&f, x)?,
                    second: ErrorVector::from_wire(&f, y)?,
                })),
                (other, _) => return Err(Error::Malformed(format!("unknown status {other:?}"))),
            };
            Ok(PackingSet::new(f, b, alphabet, PackingConfig::new(w.t)?)?.with_status(status))
        };
        build().map_err(D::Error::custom)
    }
}

/// Cursor over all error patterns of weight `<= t` on `n` positions with
/// an alphabet of `a` values: weight ascending, then supports in
/// lexicographic order, then value tuples in lexicographic order of
/// alphabet index.
#[derive(Debug, Clone)]
pub(crate) struct PatternCursor {
    n: usize,
    a: usize,
    max_w: usize,
    pub support: Vec<usize>,
    pub values: Vec<usize>,
    started: bool,
}

impl PatternCursor {
    pub fn new(n: usize, a: usize, t: u32) -> Self {
        PatternCursor {
            n,
            a,
            max_w: (t as usize).min(n),
            support: Vec::new(),
            values: Vec::new(),
            started: false,
        }
    }

    /// Moves to the next pattern; false once exhausted.
    pub fn advance(&mut self) -> bool {
        if !self.started {
            self.started = true;
            return true;
        }
        if self.a == 0 {
            return false;
        }
        // value odometer, last coordinate fastest
        for i in (0..self.values.len()).rev() {
            if self.values[i] + 1 < self.a {
                self.values[i] += 1;
                self.values[i + 1..].iter_mut().for_each(|v| *v = 0);
                return true;
            }
        }
        self.values.iter_mut().for_each(|v| *v = 0);
        // next combination of the same size
        let w = self.support.len();
        for i in (0..w).rev() {
            if self.support[i] < self.n - w + i {
                self.support[i] += 1;
                for j in i + 1..w {
                    self.support[j] = self.support[j - 1] + 1;
                }
                return true;
            }
        }
        if w < self.max_w {
            self.support = (0..w + 1).collect();
            self.values = vec![0; w + 1];
            return true;
        }
        false
    }
}

/// Every restricted error vector of weight `<= t` on `b_size` positions,
/// each exactly once, in deterministic order (weight, support, values).
pub fn enumerate_error_vectors(
    b_size: usize,
    alphabet: &ErrorAlphabet,
    t: u32,
) -> impl Iterator<Item = ErrorVector> + '_ {
    let mut cur = PatternCursor::new(b_size, alphabet.len(), t);
    std::iter::from_fn(move || {
        cur.advance().then(|| ErrorVector {
            entries: cur
                .support
                .iter()
                .zip(&cur.values)
                .map(|(&i, &v)| (i, alphabet.elements()[v]))
                .collect(),
        })
    })
}

/// `products[i][v] = alphabet[v] * B[i]`.
fn product_table(ps: &PackingSet) -> Vec<Vec<Elem>> {
    let f = &ps.field;
    ps.elements
        .iter()
        .map(|&b| {
            ps.alphabet
                .elements()
                .iter()
                .map(|&a| f.mul(a, b))
                .collect()
        })
        .collect()
}

fn pattern_syndrome(f: &FieldCtx, products: &[Vec<Elem>], cur: &PatternCursor) -> Elem {
    cur.support
        .iter()
        .zip(&cur.values)
        .fold(f.zero(), |s, (&i, &v)| f.add(s, products[i][v]))
}

/// Streams `(index, syndrome)` for every pattern in enumeration order until
/// `visit` returns false.
fn for_each_syndrome(ps: &PackingSet, mut visit: impl FnMut(u64, Elem) -> bool) {
    let products = product_table(ps);
    let mut cur = PatternCursor::new(ps.len(), ps.alphabet.len(), ps.config.t);
    let mut idx = 0u64;
    while cur.advance() {
        if !visit(idx, pattern_syndrome(&ps.field, &products, &cur)) {
            return;
        }
        idx += 1;
    }
}

fn vectors_at(ps: &PackingSet, indices: [u64; 2]) -> [ErrorVector; 2] {
    let mut out = [ErrorVector::empty(), ErrorVector::empty()];
    for (i, e) in enumerate_error_vectors(ps.len(), &ps.alphabet, ps.config.t).enumerate() {
        for (slot, &want) in indices.iter().enumerate() {
            if i as u64 == want {
                out[slot] = e.clone();
            }
        }
        if i as u64 >= indices[0].max(indices[1]) {
            break;
        }
    }
    out
}

/// Outcome of an exhaustive verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    VerifiedExhaustive,
    Refuted(Box<Witness>),
}

impl From<Verdict> for Status {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::VerifiedExhaustive => Status::VerifiedExhaustive,
            Verdict::Refuted(w) => Status::Refuted(w),
        }
    }
}

fn check_cap(count: u128, cap: u64) -> Result<()> {
    if count > cap as u128 {
        return Err(Error::EnumerationTooLarge { count, cap });
    }
    Ok(())
}

enum SeenSet {
    Bitmap(Vec<u64>),
    Hash(HashSet<u64>),
}

impl SeenSet {
    fn new(q: u64, expected: u128) -> Self {
        if q <= BITMAP_Q_LIMIT {
            SeenSet::Bitmap(vec![0; q.div_ceil(64) as usize])
        } else {
            SeenSet::Hash(HashSet::with_capacity(expected.min(q as u128) as usize))
        }
    }

    /// False if already present.
    fn insert(&mut self, v: u64) -> bool {
        match self {
            SeenSet::Bitmap(bits) => {
                let (w, b) = ((v / 64) as usize, v % 64);
                let fresh = bits[w] & (1 << b) == 0;
                bits[w] |= 1 << b;
                fresh
            }
            SeenSet::Hash(h) => h.insert(v),
        }
    }

    fn contains(&self, v: u64) -> bool {
        match self {
            SeenSet::Bitmap(bits) => bits[(v / 64) as usize] & (1 << (v % 64)) != 0,
            SeenSet::Hash(h) => h.contains(&v),
        }
    }
}

/// Checks that `e -> S_B(e)` is injective on restricted error vectors of
/// weight `<= t`, using the default enumeration cap.
pub fn verify_packing(ps: &PackingSet) -> Result<Verdict> {
    verify_packing_with_cap(ps, DEFAULT_ENUM_CAP)
}

pub fn verify_packing_with_cap(ps: &PackingSet, cap: u64) -> Result<Verdict> {
    let m = ps.error_count();
    check_cap(m, cap)?;
    if m > HASH_PATH_LIMIT {
        return verify_packing_by_sort(ps, cap);
    }
    let mut seen = SeenSet::new(ps.field.q(), m);
    let mut collided = false;
    for_each_syndrome(ps, |_, s| {
        collided = !seen.insert(s.value());
        !collided
    });
    if !collided {
        return Ok(Verdict::VerifiedExhaustive);
    }
    // a full pass marks every syndrome that occurs at least twice
    let mut once = SeenSet::new(ps.field.q(), m);
    let mut repeated = SeenSet::new(ps.field.q(), m);
    for_each_syndrome(ps, |_, s| {
        if !once.insert(s.value()) {
            repeated.insert(s.value());
        }
        true
    });
    let mut pair: (Option<(u64, Elem)>, u64) = (None, 0);
    for_each_syndrome(ps, |idx, s| match pair.0 {
        None if repeated.contains(s.value()) => {
            pair.0 = Some((idx, s));
            true
        }
        Some((_, syn)) if s == syn => {
            pair.1 = idx;
            false
        }
        _ => true,
    });
    let first = pair.0.expect("a repeated syndrome exists").0;
    let [a, b] = vectors_at(ps, [first, pair.1]);
    Ok(Verdict::Refuted(Box::new(Witness {
        first: a,
        second: b,
    })))
}

/// Sort-based verifier: materializes `(syndrome, index)` pairs and sorts
/// them. Same verdict and witness as the hash path.
pub fn verify_packing_by_sort(ps: &PackingSet, cap: u64) -> Result<Verdict> {
    let m = ps.error_count();
    check_cap(m, cap)?;
    let mut pairs: Vec<(u64, u64)> = Vec::with_capacity(m as usize);
    for_each_syndrome(ps, |idx, s| {
        pairs.push((s.value(), idx));
        true
    });
    pairs.sort_unstable();
    // the first window of each class holds its two smallest indices
    let mut best: Option<(u64, u64)> = None;
    for (i, w) in pairs.windows(2).enumerate() {
        let opens_class = i == 0 || pairs[i - 1].0 != w[0].0;
        if !opens_class || w[0].0 != w[1].0 {
            continue;
        }
        let (first, second) = (w[0].1, w[1].1);
        if best.is_none_or(|(f, _)| first < f) {
            best = Some((first, second));
        }
    }
    Ok(match best {
        None => Verdict::VerifiedExhaustive,
        Some((first, second)) => {
            let [a, b] = vectors_at(ps, [first, second]);
            Verdict::Refuted(Box::new(Witness {
                first: a,
                second: b,
            }))
        }
    })
}

/// Syndromes of the current set grouped by exact error weight, for
/// incremental extension.
struct SyndromeLevels {
    field: FieldCtx,
    alphabet: Vec<Elem>,
    t: usize,
    levels: Vec<Vec<Elem>>,
    all: SeenSet,
    size: u128,
    cap: u64,
}

struct Checkpoint {
    lengths: Vec<usize>,
}

impl SyndromeLevels {
    fn new(ps: &PackingSet, cap: u64) -> Result<Option<Self>> {
        let t = ps.config.t as usize;
        let mut levels = vec![Vec::new(); t + 1];
        let m = ps.error_count();
        check_cap(m, cap)?;
        let mut all = SeenSet::new(ps.field.q(), m);
        let products = product_table(ps);
        let mut cur = PatternCursor::new(ps.len(), ps.alphabet.len(), ps.config.t);
        while cur.advance() {
            let s = pattern_syndrome(&ps.field, &products, &cur);
            if !all.insert(s.value()) {
                return Ok(None);
            }
            levels[cur.support.len()].push(s);
        }
        Ok(Some(SyndromeLevels {
            field: ps.field.clone(),
            alphabet: ps.alphabet.elements().to_vec(),
            t,
            levels,
            all,
            size: m,
            cap,
        }))
    }

    /// Syndromes created by adding `u`, by resulting weight, or `None` if
    /// any collides.
    fn new_syndromes(&self, u: Elem) -> Result<Option<Vec<Vec<Elem>>>> {
        let f = &self.field;
        let multiples: Vec<Elem> = self.alphabet.iter().map(|&a| f.mul(a, u)).collect();
        let mut fresh = HashSet::new();
        let mut out = vec![Vec::new(); self.t + 1];
        let mut added: u128 = 0;
        for w in 0..self.t {
            for &s in &self.levels[w] {
                for &au in &multiples {
                    let v = f.add(s, au);
                    if self.contains(v) || !fresh.insert(v) {
                        return Ok(None);
                    }
                    out[w + 1].push(v);
                    added += 1;
                }
            }
        }
        check_cap(self.size + added, self.cap)?;
        Ok(Some(out))
    }

    fn contains(&self, v: Elem) -> bool {
        match &self.all {
            SeenSet::Bitmap(bits) => bits[(v.value() / 64) as usize] & (1 << (v.value() % 64)) != 0,
            SeenSet::Hash(h) => h.contains(&v.value()),
        }
    }

    fn commit(&mut self, new: Vec<Vec<Elem>>) -> Checkpoint {
        let lengths = self.levels.iter().map(Vec::len).collect();
        for (w, vals) in new.into_iter().enumerate() {
            for v in vals {
                self.all.insert(v.value());
                self.size += 1;
                self.levels[w].push(v);
            }
        }
        Checkpoint { lengths }
    }

    fn rollback(&mut self, cp: Checkpoint) {
        for (w, len) in cp.lengths.into_iter().enumerate() {
            for v in self.levels[w].drain(len..) {
                self.size -= 1;
                match &mut self.all {
                    SeenSet::Bitmap(bits) => {
                        bits[(v.value() / 64) as usize] &= !(1 << (v.value() % 64))
                    }
                    SeenSet::Hash(h) => {
                        h.remove(&v.value());
                    }
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CandidateOrder {
    Ascending,
    SeededShuffle(u64),
}

/// Greedily extends a packing set to a maximal one: every `u` of
/// `F_q^* \ B` is tried in the given order and kept whenever the set stays
/// a packing set. Only syndromes involving `u` are checked against the
/// existing table.
pub fn extend_to_maximal(ps: &PackingSet, order: CandidateOrder) -> Result<PackingSet> {
    extend_to_maximal_with_cap(ps, order, DEFAULT_ENUM_CAP)
}

pub fn extend_to_maximal_with_cap(
    ps: &PackingSet,
    order: CandidateOrder,
    cap: u64,
) -> Result<PackingSet> {
    let mut levels = SyndromeLevels::new(ps, cap)?
        .ok_or_else(|| Error::InvalidParameter("starting set is not a packing set".into()))?;
    let f = &ps.field;
    let mut members: HashSet<Elem> = ps.elements.iter().copied().collect();
    let mut candidates: Vec<Elem> = f
        .elements()
        .skip(1)
        .filter(|e| !members.contains(e))
        .collect();
    if let CandidateOrder::SeededShuffle(seed) = order {
        candidates.shuffle(&mut rng::stream(seed, 0));
    }
    let mut elements = ps.elements.clone();
    loop {
        let mut grew = false;
        for &u in &candidates {
            if members.contains(&u) {
                continue;
            }
            if let Some(new) = levels.new_syndromes(u)? {
                levels.commit(new);
                members.insert(u);
                elements.push(u);
                grew = true;
            }
        }
        // a confirming pass that adds nothing proves maximality
        if !grew {
            break;
        }
    }
    Ok(
        PackingSet::new(f.clone(), elements, ps.alphabet.clone(), ps.config)?
            .with_status(Status::VerifiedExhaustive),
    )
}

/// True iff no element of `F_q^* \ B` can be added.
pub fn is_maximal(ps: &PackingSet, cap: u64) -> Result<bool> {
    let Some(levels) = SyndromeLevels::new(ps, cap)? else {
        return Err(Error::InvalidParameter("not a packing set".into()));
    };
    let members: HashSet<Elem> = ps.elements.iter().copied().collect();
    for u in ps.field.elements().skip(1).filter(|e| !members.contains(e)) {
        if levels.new_syndromes(u)?.is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Largest field size accepted by [`exhaustive_maximum`].
pub const EXHAUSTIVE_Q_LIMIT: u64 = 257;

/// Exact maximum size of a `(t, A, q)`-packing set by depth-first search
/// over ascending candidates, pruned by the upper bound.
///
/// Scaling by a nonzero constant preserves the packing property, so the
/// search only considers sets containing 1. `size_cap` stops the search
/// once a set of that size is found.
pub fn exhaustive_maximum(
    field: &FieldCtx,
    alphabet: &ErrorAlphabet,
    t: u32,
    size_cap: Option<usize>,
) -> Result<(usize, PackingSet)> {
    if field.q() > EXHAUSTIVE_Q_LIMIT {
        return Err(Error::InvalidParameter(format!(
            "exhaustive search needs q <= {EXHAUSTIVE_Q_LIMIT}, got {}",
            field.q()
        )));
    }
    let config = PackingConfig::new(t)?;
    let upper = max_b_upper(alphabet.len() as u64, t, field.q())? as usize;
    let target = size_cap.map_or(upper, |c| c.min(upper));
    let start = PackingSet::new(field.clone(), vec![field.one()], alphabet.clone(), config)?;
    let mut levels =
        SyndromeLevels::new(&start, u64::MAX)?.expect("a singleton is always a packing set");
    let candidates: Vec<Elem> = field.elements().skip(2).collect();

    struct Search<'a> {
        candidates: &'a [Elem],
        target: usize,
        current: Vec<Elem>,
        best: Vec<Elem>,
    }

    fn dfs(s: &mut Search<'_>, levels: &mut SyndromeLevels, from: usize) -> Result<()> {
        if s.current.len() > s.best.len() {
            s.best = s.current.clone();
        }
        for i in from..s.candidates.len() {
            if s.best.len() >= s.target
                || s.current.len() + (s.candidates.len() - i) <= s.best.len()
            {
                return Ok(());
            }
            let u = s.candidates[i];
            if let Some(new) = levels.new_syndromes(u)? {
                let cp = levels.commit(new);
                s.current.push(u);
                dfs(s, levels, i + 1)?;
                s.current.pop();
                levels.rollback(cp);
            }
        }
        Ok(())
    }

    let mut search = Search {
        candidates: &candidates,
        target,
        current: vec![field.one()],
        best: Vec::new(),
    };
    if target == 0 {
        search.best.clear();
    } else {
        dfs(&mut search, &mut levels, 0)?;
    }
    let best = search.best;
    let ps = PackingSet::new(field.clone(), best, alphabet.clone(), config)?
        .with_status(Status::VerifiedExhaustive);
    Ok((ps.len(), ps))
}
