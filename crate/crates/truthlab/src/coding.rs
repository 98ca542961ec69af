//! Arithmetization: injective numeric codes for terms, formulas, and sentence
//! sequences, with exact round trips.
//!
//! A code is a big natural packing a nibble (base-16) digit stream:
//!
//! - Every unsigned quantity ("symbol") is written as a little-endian varint
//!   over nibbles: each nibble carries 3 payload bits, the high bit flags
//!   continuation. `0` is the single nibble `0x0`.
//! - The stream is a symbol sequence `sort body`, packed low-nibble-first
//!   into the natural, followed by a single sentinel nibble `0x1` at the most
//!   significant position (so leading-zero digits survive the integer
//!   packing). A code whose top nibble is not `1` is malformed.
//! - Sorts: `1` term, `2` formula, `3` sentence sequence.
//! - Term and formula bodies are `n` followed by `n` node records; the
//!   node emitted last is the root. Node records are `tag fields...` with
//!   child references given as indices of earlier records, in first-visit
//!   postorder, so shared subobjects are emitted once and codes stay linear
//!   in the number of distinct nodes.
//! - Tags: `0` zero, `1` successor(child), `2` sum(l, r), `3` product(l, r),
//!   `4` variable(index), `5` equation(l, r), `6` negation(child),
//!   `7` conjunction(l, r), `8` disjunction(l, r), `9` universal(var, body),
//!   `10` existential(var, body), `11` provability atom(payload).
//! - Sequence bodies are `count` followed by a shared node pool as above and
//!   then `count` root references.
//!
//! Because emission order is determined by the structure alone, encoding is a
//! function of the object, and decoding inverts it exactly; equal codes
//! therefore mean equal objects. Codes of subobjects are *not* numerically
//! smaller than codes of their parents under this packing; no order relation
//! between codes is promised.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::syntax::{Formula, FormulaKind, SentenceSeq, Term, TermKind, VarName};

/// A natural-number code of a syntactic object.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Code(BigUint);

impl Code {
    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn from_value(value: BigUint) -> Code {
        Code(value)
    }

    /// Parses a decimal code string.
    pub fn parse_decimal(text: &str) -> Result<Code> {
        text.parse::<BigUint>()
            .map(Code)
            .map_err(|e| Error::MalformedCode(format!("not a decimal natural: {e}")))
    }

    pub fn to_hex(&self) -> String {
        format!("{:x}", self.0)
    }

    /// Number of bits in the packed representation.
    pub fn bits(&self) -> u64 {
        self.0.bits()
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

const SORT_TERM: u64 = 1;
const SORT_FORMULA: u64 = 2;
const SORT_SEQ: u64 = 3;

fn sort_name(sort: u64) -> &'static str {
    match sort {
        SORT_TERM => "term",
        SORT_FORMULA => "formula",
        SORT_SEQ => "sequence",
        _ => "unknown",
    }
}

// ---------------------------------------------------------------------------
// Symbol stream <-> packed natural.

struct SymbolWriter {
    nibbles: Vec<u8>,
}

impl SymbolWriter {
    fn new() -> Self {
        SymbolWriter { nibbles: Vec::new() }
    }

    fn put(&mut self, mut value: u64) {
        loop {
            let payload = (value & 0x7) as u8;
            value >>= 3;
            if value == 0 {
                self.nibbles.push(payload);
                return;
            }
            self.nibbles.push(payload | 0x8);
        }
    }

    fn put_usize(&mut self, value: usize) {
        self.put(value as u64);
    }

    fn pack(mut self) -> Code {
        self.nibbles.push(0x1); // sentinel keeps the digit count recoverable
        let mut bytes = vec![0u8; (self.nibbles.len() + 1) / 2];
        for (i, nib) in self.nibbles.iter().enumerate() {
            bytes[i / 2] |= nib << (4 * (i % 2));
        }
        Code(BigUint::from_bytes_le(&bytes))
    }
}

struct SymbolReader {
    nibbles: Vec<u8>,
    pos: usize,
}

impl SymbolReader {
    fn new(code: &Code) -> Result<Self> {
        if code.0.is_zero() {
            return Err(Error::MalformedCode("zero has no digit stream".into()));
        }
        let bytes = code.0.to_bytes_le();
        let mut nibbles = Vec::with_capacity(bytes.len() * 2);
        for b in bytes {
            nibbles.push(b & 0xf);
            nibbles.push(b >> 4);
        }
        while nibbles.last() == Some(&0) {
            nibbles.pop();
        }
        if nibbles.pop() != Some(0x1) {
            return Err(Error::MalformedCode("missing sentinel digit".into()));
        }
        Ok(SymbolReader { nibbles, pos: 0 })
    }

    fn get(&mut self) -> Result<u64> {
        let mut value: u64 = 0;
        let mut shift = 0;
        loop {
            let nib = *self
                .nibbles
                .get(self.pos)
                .ok_or_else(|| Error::MalformedCode("truncated symbol".into()))?;
            self.pos += 1;
            if shift >= 64 {
                return Err(Error::MalformedCode("symbol overflows 64 bits".into()));
            }
            value |= ((nib & 0x7) as u64) << shift;
            shift += 3;
            if nib & 0x8 == 0 {
                return Ok(value);
            }
        }
    }

    fn get_usize(&mut self) -> Result<usize> {
        Ok(self.get()? as usize)
    }

    fn finish(&self) -> Result<()> {
        if self.pos == self.nibbles.len() {
            Ok(())
        } else {
            Err(Error::MalformedCode("trailing digits after the stream".into()))
        }
    }
}

// ---------------------------------------------------------------------------
// Node pool emission.

const TAG_ZERO: u64 = 0;
const TAG_SUCC: u64 = 1;
const TAG_ADD: u64 = 2;
const TAG_MUL: u64 = 3;
const TAG_VAR: u64 = 4;
const TAG_EQ: u64 = 5;
const TAG_NOT: u64 = 6;
const TAG_AND: u64 = 7;
const TAG_OR: u64 = 8;
const TAG_FORALL: u64 = 9;
const TAG_EXISTS: u64 = 10;
const TAG_PRPROP: u64 = 11;

#[derive(Default)]
struct Pool {
    /// Emitted records: tag plus field symbols.
    records: Vec<(u64, Vec<u64>)>,
    term_index: HashMap<Term, usize>,
    formula_index: HashMap<Formula, usize>,
}

impl Pool {
    fn emit_term(&mut self, t: &Term) -> usize {
        if let Some(&i) = self.term_index.get(t) {
            return i;
        }
        let record = match t.kind() {
            TermKind::Zero => (TAG_ZERO, vec![]),
            TermKind::Succ(inner) => {
                let i = self.emit_term(inner);
                (TAG_SUCC, vec![i as u64])
            }
            TermKind::Add(l, r) => {
                let (i, j) = (self.emit_term(l), self.emit_term(r));
                (TAG_ADD, vec![i as u64, j as u64])
            }
            TermKind::Mul(l, r) => {
                let (i, j) = (self.emit_term(l), self.emit_term(r));
                (TAG_MUL, vec![i as u64, j as u64])
            }
            TermKind::Var(v) => (TAG_VAR, vec![v.index() as u64]),
        };
        self.records.push(record);
        let idx = self.records.len() - 1;
        self.term_index.insert(t.clone(), idx);
        idx
    }

    fn emit_formula(&mut self, f: &Formula) -> usize {
        if let Some(&i) = self.formula_index.get(f) {
            return i;
        }
        let record = match f.kind() {
            FormulaKind::Eq(l, r) => {
                let (i, j) = (self.emit_term(l), self.emit_term(r));
                (TAG_EQ, vec![i as u64, j as u64])
            }
            FormulaKind::Not(g) => {
                let i = self.emit_formula(g);
                (TAG_NOT, vec![i as u64])
            }
            FormulaKind::And(l, r) => {
                let (i, j) = (self.emit_formula(l), self.emit_formula(r));
                (TAG_AND, vec![i as u64, j as u64])
            }
            FormulaKind::Or(l, r) => {
                let (i, j) = (self.emit_formula(l), self.emit_formula(r));
                (TAG_OR, vec![i as u64, j as u64])
            }
            FormulaKind::Forall(v, g) => {
                let i = self.emit_formula(g);
                (TAG_FORALL, vec![v.index() as u64, i as u64])
            }
            FormulaKind::Exists(v, g) => {
                let i = self.emit_formula(g);
                (TAG_EXISTS, vec![v.index() as u64, i as u64])
            }
            FormulaKind::PrProp(payload) => {
                let i = self.emit_formula(payload);
                (TAG_PRPROP, vec![i as u64])
            }
        };
        self.records.push(record);
        let idx = self.records.len() - 1;
        self.formula_index.insert(f.clone(), idx);
        idx
    }

    fn write(&self, w: &mut SymbolWriter) {
        w.put_usize(self.records.len());
        for (tag, fields) in &self.records {
            w.put(*tag);
            for field in fields {
                w.put(*field);
            }
        }
    }
}

/// One decoded pool entry: either sort.
#[derive(Clone)]
enum Node {
    T(Term),
    F(Formula),
}

fn read_pool(r: &mut SymbolReader) -> Result<Vec<Node>> {
    let n = r.get_usize()?;
    // A record takes at least one nibble; larger counts cannot be honest.
    if n > r.nibbles.len() {
        return Err(Error::MalformedCode(format!(
            "claimed {n} records in a shorter stream"
        )));
    }
    let mut nodes: Vec<Node> = Vec::with_capacity(n);
    let term_at = |nodes: &[Node], idx: usize| -> Result<Term> {
        match nodes.get(idx) {
            Some(Node::T(t)) => Ok(t.clone()),
            Some(Node::F(_)) => Err(Error::MalformedCode(format!(
                "record {idx} is a formula where a term is required"
            ))),
            None => Err(Error::MalformedCode(format!("forward reference to record {idx}"))),
        }
    };
    let formula_at = |nodes: &[Node], idx: usize| -> Result<Formula> {
        match nodes.get(idx) {
            Some(Node::F(f)) => Ok(f.clone()),
            Some(Node::T(_)) => Err(Error::MalformedCode(format!(
                "record {idx} is a term where a formula is required"
            ))),
            None => Err(Error::MalformedCode(format!("forward reference to record {idx}"))),
        }
    };
    for _ in 0..n {
        let tag = r.get()?;
        let node = match tag {
            TAG_ZERO => Node::T(Term::zero()),
            TAG_SUCC => Node::T(Term::succ(term_at(&nodes, r.get_usize()?)?)),
            TAG_ADD => {
                let l = term_at(&nodes, r.get_usize()?)?;
                let rr = term_at(&nodes, r.get_usize()?)?;
                Node::T(Term::add(l, rr))
            }
            TAG_MUL => {
                let l = term_at(&nodes, r.get_usize()?)?;
                let rr = term_at(&nodes, r.get_usize()?)?;
                Node::T(Term::mul(l, rr))
            }
            TAG_VAR => {
                let idx = r.get()?;
                if idx > u32::MAX as u64 {
                    return Err(Error::MalformedCode("variable index out of range".into()));
                }
                Node::T(Term::var(VarName(idx as u32)))
            }
            TAG_EQ => {
                let l = term_at(&nodes, r.get_usize()?)?;
                let rr = term_at(&nodes, r.get_usize()?)?;
                Node::F(Formula::eq(l, rr))
            }
            TAG_NOT => Node::F(Formula::not(formula_at(&nodes, r.get_usize()?)?)),
            TAG_AND => {
                let l = formula_at(&nodes, r.get_usize()?)?;
                let rr = formula_at(&nodes, r.get_usize()?)?;
                Node::F(Formula::and(l, rr))
            }
            TAG_OR => {
                let l = formula_at(&nodes, r.get_usize()?)?;
                let rr = formula_at(&nodes, r.get_usize()?)?;
                Node::F(Formula::or(l, rr))
            }
            TAG_FORALL => {
                let v = r.get()?;
                if v > u32::MAX as u64 {
                    return Err(Error::MalformedCode("variable index out of range".into()));
                }
                Node::F(Formula::forall(
                    VarName(v as u32),
                    formula_at(&nodes, r.get_usize()?)?,
                ))
            }
            TAG_EXISTS => {
                let v = r.get()?;
                if v > u32::MAX as u64 {
                    return Err(Error::MalformedCode("variable index out of range".into()));
                }
                Node::F(Formula::exists(
                    VarName(v as u32),
                    formula_at(&nodes, r.get_usize()?)?,
                ))
            }
            TAG_PRPROP => {
                let payload = formula_at(&nodes, r.get_usize()?)?;
                Node::F(Formula::prprop(payload).map_err(|e| {
                    Error::MalformedCode(format!("provability atom payload is open: {e}"))
                })?)
            }
            other => return Err(Error::MalformedCode(format!("unknown node tag {other}"))),
        };
        nodes.push(node);
    }
    Ok(nodes)
}

fn expect_sort(r: &mut SymbolReader, expected: u64) -> Result<()> {
    let sort = r.get()?;
    if sort != expected {
        return Err(Error::SortMismatch {
            expected: sort_name(expected),
            found: sort_name(sort),
        });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Public encoders and decoders.

pub fn encode_term(t: &Term) -> Code {
    let mut w = SymbolWriter::new();
    w.put(SORT_TERM);
    let mut pool = Pool::default();
    pool.emit_term(t);
    pool.write(&mut w);
    w.pack()
}

pub fn decode_term(code: &Code) -> Result<Term> {
    let mut r = SymbolReader::new(code)?;
    expect_sort(&mut r, SORT_TERM)?;
    let nodes = read_pool(&mut r)?;
    r.finish()?;
    match nodes.last() {
        Some(Node::T(t)) => Ok(t.clone()),
        Some(Node::F(_)) => Err(Error::SortMismatch {
            expected: "term",
            found: "formula",
        }),
        None => Err(Error::MalformedCode("empty node pool".into())),
    }
}

pub fn encode_formula(phi: &Formula) -> Code {
    let mut w = SymbolWriter::new();
    w.put(SORT_FORMULA);
    let mut pool = Pool::default();
    pool.emit_formula(phi);
    pool.write(&mut w);
    w.pack()
}

pub fn decode_formula(code: &Code) -> Result<Formula> {
    let mut r = SymbolReader::new(code)?;
    expect_sort(&mut r, SORT_FORMULA)?;
    let nodes = read_pool(&mut r)?;
    r.finish()?;
    match nodes.last() {
        Some(Node::F(f)) => Ok(f.clone()),
        Some(Node::T(_)) => Err(Error::SortMismatch {
            expected: "formula",
            found: "term",
        }),
        None => Err(Error::MalformedCode("empty node pool".into())),
    }
}

pub fn encode_seq(seq: &SentenceSeq) -> Code {
    let mut w = SymbolWriter::new();
    w.put(SORT_SEQ);
    w.put_usize(seq.len());
    let mut pool = Pool::default();
    let roots: Vec<usize> = seq.iter().map(|f| pool.emit_formula(f)).collect();
    pool.write(&mut w);
    for root in roots {
        w.put_usize(root);
    }
    w.pack()
}

/// Length of an encoded sequence, read from the header without decoding the
/// node pool.
pub fn seq_length(code: &Code) -> Result<usize> {
    let mut r = SymbolReader::new(code)?;
    expect_sort(&mut r, SORT_SEQ)?;
    r.get_usize()
}

/// Extracts element `index` of an encoded sequence.
pub fn seq_get(code: &Code, index: usize) -> Result<Formula> {
    let seq = decode_seq(code)?;
    let len = seq.len();
    seq.as_slice()
        .get(index)
        .cloned()
        .ok_or(Error::IndexOutOfRange { index, len })
}

pub fn decode_seq(code: &Code) -> Result<SentenceSeq> {
    let mut r = SymbolReader::new(code)?;
    expect_sort(&mut r, SORT_SEQ)?;
    let count = r.get_usize()?;
    let nodes = read_pool(&mut r)?;
    if count > r.nibbles.len() {
        return Err(Error::MalformedCode(format!(
            "claimed {count} roots in a shorter stream"
        )));
    }
    let mut items = Vec::with_capacity(count);
    for _ in 0..count {
        let idx = r.get_usize()?;
        match nodes.get(idx) {
            Some(Node::F(f)) => items.push(f.clone()),
            Some(Node::T(_)) => {
                return Err(Error::MalformedCode(format!(
                    "sequence root {idx} is a term"
                )))
            }
            None => {
                return Err(Error::MalformedCode(format!(
                    "sequence root {idx} out of range"
                )))
            }
        }
    }
    r.finish()?;
    SentenceSeq::new(items)
}
