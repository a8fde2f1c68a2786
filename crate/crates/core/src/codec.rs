//! The single-parity-row code of a certified packing set: systematic
//! encoding, a syndrome lookup table, restricted-error injection and
//! table decoding.

use std::collections::HashMap;

use rand::seq::index::sample;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, ElemRepr, FieldCtx};
use crate::packing::{
    enumerate_error_vectors, ErrorAlphabet, ErrorVector, ErrorVectorWire, PackingSet, Witness,
    DEFAULT_ENUM_CAP,
};
use crate::rng::Rng;

/// Codewords `c` with `sum_b c_b b = 0`; length `B`, dimension `B - 1`. The
/// last position of `B` carries the parity symbol.
#[derive(Debug, Clone)]
pub struct RestrictedCode {
    packing: PackingSet,
    parity_inv: Elem,
}

impl RestrictedCode {
    pub fn new(packing: PackingSet) -> Result<Self> {
        if !packing.status().is_certified() {
            return Err(Error::NotCertified);
        }
        let last = *packing
            .elements()
            .last()
            .ok_or_else(|| Error::InvalidParameter("code needs at least one element".into()))?;
        let parity_inv = packing.field().inv(last)?;
        Ok(RestrictedCode {
            packing,
            parity_inv,
        })
    }

    pub fn packing(&self) -> &PackingSet {
        &self.packing
    }

    pub fn field(&self) -> &FieldCtx {
        self.packing.field()
    }

    pub fn len(&self) -> usize {
        self.packing.len()
    }

    pub fn is_empty(&self) -> bool {
        self.packing.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.len() - 1
    }

    pub fn rate(&self) -> f64 {
        self.dimension() as f64 / self.len() as f64
    }

    fn check_word(&self, word: &[Elem], len: usize) -> Result<()> {
        if word.len() != len {
            return Err(Error::InvalidParameter(format!(
                "expected {len} symbols, got {}",
                word.len()
            )));
        }
        for &x in word {
            self.field().elem(x.value())?;
        }
        Ok(())
    }

    /// `sum_i word_i * b_i`.
    pub fn syndrome(&self, word: &[Elem]) -> Result<Elem> {
        self.check_word(word, self.len())?;
        let f = self.field();
        Ok(word
            .iter()
            .zip(self.packing.elements())
            .fold(f.zero(), |s, (&x, &b)| f.add(s, f.mul(x, b))))
    }

    /// Systematic encoding: the message fills the first `B - 1` positions and
    /// the last one is `-(sum m_i b_i) / b_last`.
    pub fn encode(&self, message: &[Elem]) -> Result<Vec<Elem>> {
        self.check_word(message, self.dimension())?;
        let f = self.field();
        let partial = message
            .iter()
            .zip(self.packing.elements())
            .fold(f.zero(), |s, (&x, &b)| f.add(s, f.mul(x, b)));
        let mut word = message.to_vec();
        word.push(f.neg(f.mul(partial, self.parity_inv)));
        Ok(word)
    }
}

/// Map from syndrome to the unique restricted error of weight `<= t`
/// producing it.
#[derive(Debug, Clone)]
pub struct SyndromeTable {
    entries: HashMap<Elem, ErrorVector>,
    max_weight: u32,
}

impl SyndromeTable {
    /// Table for every restricted error of weight `<= max_weight`. Fails with
    /// `CertificationContradiction` if two errors share a syndrome.
    pub fn build(code: &RestrictedCode, max_weight: u32, cap: u64) -> Result<Self> {
        let ps = code.packing();
        let count =
            crate::bounds::error_count(ps.len() as u64, ps.alphabet().len() as u64, max_weight);
        if count > cap as u128 {
            return Err(Error::EnumerationTooLarge { count, cap });
        }
        let mut entries = HashMap::with_capacity(count as usize);
        for e in enumerate_error_vectors(ps.len(), ps.alphabet(), max_weight) {
            let s = ps.syndrome(&e)?.0;
            if let Some(prev) = entries.insert(s, e.clone()) {
                return Err(Error::CertificationContradiction(Box::new(Witness {
                    first: prev,
                    second: e,
                })));
            }
        }
        Ok(SyndromeTable {
            entries,
            max_weight,
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_weight(&self) -> u32 {
        self.max_weight
    }

    pub fn lookup(&self, s: Elem) -> Option<&ErrorVector> {
        self.entries.get(&s)
    }
}

/// Table for the code's own weight limit and the default cap.
pub fn build_syndrome_table(code: &RestrictedCode) -> Result<SyndromeTable> {
    SyndromeTable::build(code, code.packing().t(), DEFAULT_ENUM_CAP)
}

/// Adds a random restricted error: weight uniform in `0..=t`, support
/// uniform among positions, values uniform in the alphabet.
pub fn inject_error(
    ctx: &FieldCtx,
    codeword: &[Elem],
    alphabet: &ErrorAlphabet,
    t: u32,
    rng: &mut Rng,
) -> (Vec<Elem>, ErrorVector) {
    let n = codeword.len();
    let w = rng.gen_range(0..=(t as usize).min(n));
    let mut support = sample(rng, n, w).into_vec();
    support.sort_unstable();
    let entries: Vec<(usize, Elem)> = support
        .into_iter()
        .map(|i| (i, alphabet.elements()[rng.gen_range(0..alphabet.len())]))
        .collect();
    let error = ErrorVector::new(entries).expect("sorted distinct support");
    (add_error(ctx, codeword, &error), error)
}

pub fn add_error(ctx: &FieldCtx, word: &[Elem], error: &ErrorVector) -> Vec<Elem> {
    let mut out = word.to_vec();
    for &(i, a) in error.entries() {
        out[i] = ctx.add(out[i], a);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecodeOutcome {
    Corrected {
        message: Vec<Elem>,
        error: ErrorVector,
    },
    /// The syndrome matches no error in the model.
    Uncorrectable { syndrome: Elem },
}

/// Looks up the received word's syndrome, removes the matching error and
/// returns the message part. Errors outside the model may decode to the
/// wrong message.
pub fn decode(
    code: &RestrictedCode,
    table: &SyndromeTable,
    received: &[Elem],
) -> Result<DecodeOutcome> {
    let s = code.syndrome(received)?;
    let Some(error) = table.lookup(s) else {
        return Ok(DecodeOutcome::Uncorrectable { syndrome: s });
    };
    let f = code.field();
    let mut word = received.to_vec();
    for &(i, a) in error.entries() {
        word[i] = f.sub(word[i], a);
    }
    word.truncate(code.dimension());
    Ok(DecodeOutcome::Corrected {
        message: word,
        error: error.clone(),
    })
}

/// One line of a round-trip transcript.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptLine {
    pub message: Vec<ElemRepr>,
    pub codeword: Vec<ElemRepr>,
    pub error: ErrorVectorWire,
    pub received: Vec<ElemRepr>,
    pub decoded_ok: bool,
}

impl TranscriptLine {
    pub fn new(
        ctx: &FieldCtx,
        message: &[Elem],
        codeword: &[Elem],
        error: &ErrorVector,
        received: &[Elem],
        decoded_ok: bool,
    ) -> Self {
        let repr = |v: &[Elem]| v.iter().map(|&e| ctx.to_repr(e)).collect();
        TranscriptLine {
            message: repr(message),
            codeword: repr(codeword),
            error: error.to_wire(ctx),
            received: repr(received),
            decoded_ok,
        }
    }
}
