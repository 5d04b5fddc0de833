//! Vocabularies, finite structures over `{0..n-1}`, exhaustive enumeration of
//! structures, and bit-string encodings.

use alloc::{
    format,
    string::{String, ToString},
    sync::Arc,
    vec,
    vec::Vec,
};
use core::{cmp::Ordering, fmt, hash, ops::RangeInclusive};

/// Symbols with a fixed numeric interpretation on every structure.
pub const NUMERIC_SYMBOLS: &[&str] = &["=", "<=", "<", "BIT", "suc", "0", "max"];

/// Words of the formula grammar. They can never name a symbol or a variable.
pub const KEYWORDS: &[&str] = &[
    "all", "ex", "true", "false", "EX2", "ALL2", "EXINJ", "EXFUN", "inj", "fun", "BIT", "suc",
    "max",
];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("`{0}` is not a valid symbol name")]
    InvalidSymbol(String),
    #[error("symbol `{0}` declared twice")]
    DuplicateSymbol(String),
    #[error("relation `{0}` must have positive arity")]
    ZeroArity(String),
    #[error("structures need a non-empty universe")]
    EmptyUniverse,
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("no interpretation given for `{0}`")]
    MissingInterpretation(String),
    #[error("`{0}` interpreted twice")]
    DuplicateInterpretation(String),
    #[error("`{symbol}` has arity {expected}, got a tuple of length {found}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("value {value} for `{symbol}` is outside the universe of size {size}")]
    OutOfRange {
        symbol: String,
        value: usize,
        size: usize,
    },
    #[error("expected {expected} bits, got {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("constant `{symbol}` decodes to {value}, outside the universe of size {size}")]
    ConstantOutOfRange {
        symbol: String,
        value: usize,
        size: usize,
    },
    #[error("invalid bit character {0:?}")]
    InvalidBit(char),
    #[error("strings must be non-empty")]
    EmptyWord,
    #[error("vocabulary `{0}` is not a string vocabulary (one unary relation, no constants)")]
    NotAStringVocabulary(String),
    #[error("structure space too large to index")]
    TooLarge,
    #[error("expected a structure over `{expected}`, got one over `{found}`")]
    VocabularyMismatch { expected: String, found: String },
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// A function-free vocabulary: relation symbols with arities plus constants.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vocabulary {
    name: String,
    relations: Vec<(String, usize)>,
    constants: Vec<String>,
}

impl Vocabulary {
    pub fn new<R, C, S, T>(name: &str, relations: R, constants: C) -> Result<Arc<Self>, ModelError>
    where
        R: IntoIterator<Item = (S, usize)>,
        C: IntoIterator<Item = T>,
        S: Into<String>,
        T: Into<String>,
    {
        if !is_identifier(name) {
            return Err(ModelError::InvalidSymbol(name.to_string()));
        }
        let relations: Vec<(String, usize)> =
            relations.into_iter().map(|(s, a)| (s.into(), a)).collect();
        let constants: Vec<String> = constants.into_iter().map(Into::into).collect();
        let mut seen: Vec<&str> = Vec::new();
        for sym in relations.iter().map(|(s, _)| s).chain(constants.iter()) {
            if !is_identifier(sym) || KEYWORDS.contains(&sym.as_str()) {
                return Err(ModelError::InvalidSymbol(sym.clone()));
            }
            if seen.contains(&sym.as_str()) {
                return Err(ModelError::DuplicateSymbol(sym.clone()));
            }
            seen.push(sym);
        }
        if let Some((s, _)) = relations.iter().find(|(_, a)| *a == 0) {
            return Err(ModelError::ZeroArity(s.clone()));
        }
        Ok(Arc::new(Vocabulary {
            name: name.to_string(),
            relations,
            constants,
        }))
    }

    /// `graph = ⟨E/2, k⟩`.
    pub fn graph() -> Arc<Self> {
        Self::new("graph", [("E", 2)], ["k"]).expect("valid vocabulary")
    }

    /// Binary strings as structures: `string = ⟨Q/1⟩`.
    pub fn string() -> Arc<Self> {
        Self::new("string", [("Q", 1)], [] as [&str; 0]).expect("valid vocabulary")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn relations(&self) -> &[(String, usize)] {
        &self.relations
    }

    pub fn constants(&self) -> &[String] {
        &self.constants
    }

    pub fn relation_index(&self, symbol: &str) -> Option<usize> {
        self.relations.iter().position(|(s, _)| s == symbol)
    }

    pub fn arity(&self, symbol: &str) -> Option<usize> {
        self.relation_index(symbol).map(|i| self.relations[i].1)
    }

    pub fn constant_index(&self, symbol: &str) -> Option<usize> {
        self.constants.iter().position(|c| c == symbol)
    }

    pub fn has_symbol(&self, symbol: &str) -> bool {
        self.relation_index(symbol).is_some() || self.constant_index(symbol).is_some()
    }

    /// True for vocabularies with exactly one unary relation and no constants.
    pub fn is_string_vocabulary(&self) -> bool {
        self.relations.len() == 1 && self.relations[0].1 == 1 && self.constants.is_empty()
    }
}

impl fmt::Display for Vocabulary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "vocab {} {{", self.name)?;
        for (s, a) in &self.relations {
            write!(f, " rel {s}/{a};")?;
        }
        for c in &self.constants {
            write!(f, " const {c};")?;
        }
        f.write_str(" }")
    }
}

pub(crate) fn checked_pow(base: usize, exp: usize) -> Option<usize> {
    let exp = u32::try_from(exp).ok()?;
    base.checked_pow(exp)
}

/// A set of `arity`-tuples over `{0..size-1}`, stored as a characteristic
/// bit vector indexed by lexicographic rank.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TupleSet {
    size: usize,
    arity: usize,
    bits: Vec<u64>,
}

impl TupleSet {
    pub fn empty(size: usize, arity: usize) -> Self {
        let cap = checked_pow(size, arity).expect("tuple space fits in memory");
        TupleSet {
            size,
            arity,
            bits: vec![0; cap.div_ceil(64)],
        }
    }

    pub fn full(size: usize, arity: usize) -> Self {
        let mut s = Self::empty(size, arity);
        for i in 0..s.capacity() {
            s.insert_index(i);
        }
        s
    }

    /// The tuple set whose characteristic vector is the binary expansion of
    /// `code`, the lexicographically first tuple being the least significant
    /// bit. Needs `size^arity <= 64`.
    pub fn from_code(size: usize, arity: usize, code: u64) -> Self {
        let mut s = Self::empty(size, arity);
        s.set_code(code);
        s
    }

    pub(crate) fn set_code(&mut self, code: u64) {
        debug_assert!(self.capacity() <= 64);
        let cap = self.capacity();
        if let Some(w) = self.bits.first_mut() {
            *w = if cap == 64 {
                code
            } else {
                code & ((1u64 << cap) - 1)
            };
        }
    }

    pub(crate) fn clear(&mut self) {
        self.bits.iter_mut().for_each(|w| *w = 0);
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Number of candidate tuples, `size^arity`.
    pub fn capacity(&self) -> usize {
        checked_pow(self.size, self.arity).unwrap_or(usize::MAX)
    }

    /// Lexicographic rank of a tuple. Components must be `< size`.
    pub fn index_of(&self, tuple: &[usize]) -> usize {
        debug_assert_eq!(tuple.len(), self.arity);
        tuple.iter().fold(0, |acc, &t| acc * self.size + t)
    }

    pub fn tuple_at(&self, mut index: usize) -> Vec<usize> {
        let mut t = vec![0; self.arity];
        for slot in t.iter_mut().rev() {
            *slot = index % self.size;
            index /= self.size;
        }
        t
    }

    pub fn contains(&self, tuple: &[usize]) -> bool {
        tuple.len() == self.arity
            && tuple.iter().all(|&t| t < self.size)
            && self.contains_index(self.index_of(tuple))
    }

    #[inline]
    pub fn contains_index(&self, index: usize) -> bool {
        self.bits[index / 64] >> (index % 64) & 1 == 1
    }

    #[inline]
    pub fn insert_index(&mut self, index: usize) {
        self.bits[index / 64] |= 1 << (index % 64);
    }

    pub fn remove_index(&mut self, index: usize) {
        self.bits[index / 64] &= !(1 << (index % 64));
    }

    /// Inserts a tuple; panics on out-of-range components.
    pub fn insert(&mut self, tuple: &[usize]) {
        assert!(tuple.len() == self.arity && tuple.iter().all(|&t| t < self.size));
        let i = self.index_of(tuple);
        self.insert_index(i);
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// Member tuples in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.capacity())
            .filter(|&i| self.contains_index(i))
            .map(|i| self.tuple_at(i))
    }
}

impl fmt::Debug for TupleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for TupleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, t) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str("(")?;
            for (j, x) in t.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str(")")?;
        }
        f.write_str("}")
    }
}

/// A finite structure with universe `{0..size-1}`.
///
/// Relations and constants are stored in vocabulary order. Numeric symbols are
/// never stored; the evaluator computes them from element indices.
#[derive(Clone)]
pub struct Structure {
    vocab: Arc<Vocabulary>,
    size: usize,
    relations: Vec<TupleSet>,
    constants: Vec<usize>,
}

impl PartialEq for Structure {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.vocab, &other.vocab) || self.vocab == other.vocab)
            && self.size == other.size
            && self.relations == other.relations
            && self.constants == other.constants
    }
}

impl Eq for Structure {}

impl hash::Hash for Structure {
    fn hash<H: hash::Hasher>(&self, state: &mut H) {
        self.vocab.name.hash(state);
        self.size.hash(state);
        self.relations.hash(state);
        self.constants.hash(state);
    }
}

impl Ord for Structure {
    fn cmp(&self, other: &Self) -> Ordering {
        let vocab = if Arc::ptr_eq(&self.vocab, &other.vocab) {
            Ordering::Equal
        } else {
            self.vocab.cmp(&other.vocab)
        };
        vocab
            .then(self.size.cmp(&other.size))
            .then_with(|| self.relations.cmp(&other.relations))
            .then_with(|| self.constants.cmp(&other.constants))
    }
}

impl PartialOrd for Structure {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Structure<{}>[{}]", self.vocab.name, self)
    }
}

/// The body of the text format: `size = 3; E = {(0,1)}; k = 2;`.
impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "size = {};", self.size)?;
        for ((sym, _), rel) in self.vocab.relations.iter().zip(&self.relations) {
            write!(f, " {sym} = {rel};")?;
        }
        for (sym, c) in self.vocab.constants.iter().zip(&self.constants) {
            write!(f, " {sym} = {c};")?;
        }
        Ok(())
    }
}

/// Builds and validates a structure.
///
/// `rels` and `consts` must interpret every symbol of `vocab` exactly once.
pub fn make_structure<'a, R, T, P, C>(
    vocab: &Arc<Vocabulary>,
    size: usize,
    rels: R,
    consts: C,
) -> Result<Structure, ModelError>
where
    R: IntoIterator<Item = (&'a str, T)>,
    T: IntoIterator<Item = P>,
    P: AsRef<[usize]>,
    C: IntoIterator<Item = (&'a str, usize)>,
{
    if size == 0 {
        return Err(ModelError::EmptyUniverse);
    }
    let mut relations: Vec<Option<TupleSet>> = vec![None; vocab.relations.len()];
    for (sym, tuples) in rels {
        let i = vocab
            .relation_index(sym)
            .ok_or_else(|| ModelError::UnknownSymbol(sym.to_string()))?;
        if relations[i].is_some() {
            return Err(ModelError::DuplicateInterpretation(sym.to_string()));
        }
        let arity = vocab.relations[i].1;
        checked_pow(size, arity).ok_or(ModelError::TooLarge)?;
        let mut set = TupleSet::empty(size, arity);
        for t in tuples {
            let t = t.as_ref();
            if t.len() != arity {
                return Err(ModelError::ArityMismatch {
                    symbol: sym.to_string(),
                    expected: arity,
                    found: t.len(),
                });
            }
            if let Some(&bad) = t.iter().find(|&&x| x >= size) {
                return Err(ModelError::OutOfRange {
                    symbol: sym.to_string(),
                    value: bad,
                    size,
                });
            }
            set.insert(t);
        }
        relations[i] = Some(set);
    }
    let mut constants: Vec<Option<usize>> = vec![None; vocab.constants.len()];
    for (sym, value) in consts {
        let i = vocab.constant_index(sym).ok_or_else(|| {
            if vocab.relation_index(sym).is_some() {
                ModelError::ArityMismatch {
                    symbol: sym.to_string(),
                    expected: vocab.arity(sym).unwrap_or(0),
                    found: 0,
                }
            } else {
                ModelError::UnknownSymbol(sym.to_string())
            }
        })?;
        if constants[i].is_some() {
            return Err(ModelError::DuplicateInterpretation(sym.to_string()));
        }
        if value >= size {
            return Err(ModelError::OutOfRange {
                symbol: sym.to_string(),
                value,
                size,
            });
        }
        constants[i] = Some(value);
    }
    let relations = relations
        .into_iter()
        .enumerate()
        .map(|(i, r)| {
            r.ok_or_else(|| ModelError::MissingInterpretation(vocab.relations[i].0.clone()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let constants = constants
        .into_iter()
        .enumerate()
        .map(|(i, c)| {
            c.ok_or_else(|| ModelError::MissingInterpretation(vocab.constants[i].clone()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Structure {
        vocab: vocab.clone(),
        size,
        relations,
        constants,
    })
}

impl Structure {
    /// Assembles a structure from interpretations given in vocabulary order.
    pub fn from_parts(
        vocab: Arc<Vocabulary>,
        size: usize,
        relations: Vec<TupleSet>,
        constants: Vec<usize>,
    ) -> Result<Self, ModelError> {
        if size == 0 {
            return Err(ModelError::EmptyUniverse);
        }
        if relations.len() != vocab.relations.len() {
            let missing = vocab.relations.get(relations.len()).map(|r| r.0.clone());
            return Err(ModelError::MissingInterpretation(
                missing.unwrap_or_default(),
            ));
        }
        if constants.len() != vocab.constants.len() {
            let missing = vocab.constants.get(constants.len()).cloned();
            return Err(ModelError::MissingInterpretation(
                missing.unwrap_or_default(),
            ));
        }
        for ((sym, arity), rel) in vocab.relations.iter().zip(&relations) {
            if rel.arity != *arity || rel.size != size {
                return Err(ModelError::ArityMismatch {
                    symbol: sym.clone(),
                    expected: *arity,
                    found: rel.arity,
                });
            }
        }
        for (sym, &c) in vocab.constants.iter().zip(&constants) {
            if c >= size {
                return Err(ModelError::OutOfRange {
                    symbol: sym.clone(),
                    value: c,
                    size,
                });
            }
        }
        Ok(Structure {
            vocab,
            size,
            relations,
            constants,
        })
    }

    pub fn vocab(&self) -> &Arc<Vocabulary> {
        &self.vocab
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn relations(&self) -> &[TupleSet] {
        &self.relations
    }

    pub fn constants(&self) -> &[usize] {
        &self.constants
    }

    pub fn relation(&self, symbol: &str) -> Option<&TupleSet> {
        self.vocab
            .relation_index(symbol)
            .map(|i| &self.relations[i])
    }

    pub fn constant(&self, symbol: &str) -> Option<usize> {
        self.vocab.constant_index(symbol).map(|i| self.constants[i])
    }

    pub(crate) fn check_vocab(&self, vocab: &Arc<Vocabulary>) -> Result<(), ModelError> {
        if Arc::ptr_eq(&self.vocab, vocab) || *self.vocab == **vocab {
            Ok(())
        } else {
            Err(ModelError::VocabularyMismatch {
                expected: vocab.name.clone(),
                found: self.vocab.name.clone(),
            })
        }
    }
}

/// All structures of a vocabulary whose sizes lie in a range, indexed so that
/// any slice of the enumeration can be produced independently.
///
/// Within a size, the index is `rel_code * n^c + const_code`: `rel_code` is a
/// bit counter over the concatenated lexicographic tuple lists of all relations
/// (first tuple = least significant bit), `const_code` lists constant values
/// in lexicographic order. Sizes come in increasing order.
#[derive(Debug, Clone)]
pub struct StructureSpace {
    vocab: Arc<Vocabulary>,
    blocks: Vec<SizeBlock>,
    len: u64,
}

#[derive(Debug, Clone)]
struct SizeBlock {
    size: usize,
    start: u64,
    const_count: u64,
    caps: Vec<usize>,
}

impl StructureSpace {
    pub fn new(vocab: &Arc<Vocabulary>, sizes: RangeInclusive<usize>) -> Result<Self, ModelError> {
        if *sizes.start() == 0 {
            return Err(ModelError::EmptyUniverse);
        }
        let mut blocks = Vec::new();
        let mut len: u64 = 0;
        for n in sizes {
            let caps = vocab
                .relations
                .iter()
                .map(|(_, a)| checked_pow(n, *a).ok_or(ModelError::TooLarge))
                .collect::<Result<Vec<_>, _>>()?;
            let bits: usize = caps.iter().sum();
            if bits >= 64 {
                return Err(ModelError::TooLarge);
            }
            let const_count =
                checked_pow(n, vocab.constants.len()).ok_or(ModelError::TooLarge)? as u64;
            let count = (1u64 << bits)
                .checked_mul(const_count)
                .ok_or(ModelError::TooLarge)?;
            blocks.push(SizeBlock {
                size: n,
                start: len,
                const_count,
                caps,
            });
            len = len.checked_add(count).ok_or(ModelError::TooLarge)?;
        }
        Ok(StructureSpace {
            vocab: vocab.clone(),
            blocks,
            len,
        })
    }

    pub fn vocab(&self) -> &Arc<Vocabulary> {
        &self.vocab
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// The structure at a global index; panics when `index >= len()`.
    pub fn get(&self, index: u64) -> Structure {
        assert!(index < self.len, "structure index out of range");
        let block = self
            .blocks
            .iter()
            .rev()
            .find(|b| b.start <= index)
            .expect("index inside some block");
        let local = index - block.start;
        let n = block.size;
        let mut const_code = local % block.const_count;
        let mut rel_code = local / block.const_count;
        let relations = block
            .caps
            .iter()
            .zip(&self.vocab.relations)
            .map(|(&cap, (_, arity))| {
                let mut set = TupleSet::empty(n, *arity);
                for i in 0..cap {
                    if rel_code & 1 == 1 {
                        set.insert_index(i);
                    }
                    rel_code >>= 1;
                }
                set
            })
            .collect();
        let mut constants = vec![0; self.vocab.constants.len()];
        for c in constants.iter_mut().rev() {
            *c = (const_code % n as u64) as usize;
            const_code /= n as u64;
        }
        Structure {
            vocab: self.vocab.clone(),
            size: n,
            relations,
            constants,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = Structure> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }
}

/// Every structure of one size, in the deterministic enumeration order.
pub fn enumerate_structures(
    vocab: &Arc<Vocabulary>,
    size: usize,
) -> Result<impl Iterator<Item = Structure>, ModelError> {
    let space = StructureSpace::new(vocab, size..=size)?;
    Ok((0..space.len()).map(move |i| space.get(i)))
}

/// A structure coded as bits: relation characteristic vectors over
/// lexicographically ordered tuples, then each constant in binary, most
/// significant bit first, using `⌈log2 n⌉` bits.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitEncoding(pub Vec<bool>);

impl BitEncoding {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for BitEncoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl core::str::FromStr for BitEncoding {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(ModelError::InvalidBit(other)),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(BitEncoding)
    }
}

fn constant_width(size: usize) -> usize {
    if size <= 1 {
        0
    } else {
        (usize::BITS - (size - 1).leading_zeros()) as usize
    }
}

/// Number of bits `decode` expects for a vocabulary and size.
pub fn encoding_length(vocab: &Vocabulary, size: usize) -> Result<usize, ModelError> {
    let rel: usize = vocab
        .relations
        .iter()
        .map(|(_, a)| checked_pow(size, *a).ok_or(ModelError::TooLarge))
        .sum::<Result<usize, _>>()?;
    Ok(rel + vocab.constants.len() * constant_width(size))
}

pub fn encode(structure: &Structure) -> BitEncoding {
    let mut bits = Vec::new();
    for rel in &structure.relations {
        bits.extend((0..rel.capacity()).map(|i| rel.contains_index(i)));
    }
    let width = constant_width(structure.size);
    for &c in &structure.constants {
        bits.extend((0..width).rev().map(|b| c >> b & 1 == 1));
    }
    BitEncoding(bits)
}

pub fn decode(
    vocab: &Arc<Vocabulary>,
    size: usize,
    bits: &BitEncoding,
) -> Result<Structure, ModelError> {
    if size == 0 {
        return Err(ModelError::EmptyUniverse);
    }
    let expected = encoding_length(vocab, size)?;
    if bits.len() != expected {
        return Err(ModelError::LengthMismatch {
            expected,
            found: bits.len(),
        });
    }
    let mut it = bits.0.iter().copied();
    let relations = vocab
        .relations
        .iter()
        .map(|(_, a)| {
            let mut set = TupleSet::empty(size, *a);
            for i in 0..set.capacity() {
                if it.next() == Some(true) {
                    set.insert_index(i);
                }
            }
            set
        })
        .collect();
    let width = constant_width(size);
    let mut constants = Vec::with_capacity(vocab.constants.len());
    for sym in &vocab.constants {
        let value = (0..width).fold(0usize, |acc, _| {
            acc << 1 | usize::from(it.next() == Some(true))
        });
        if value >= size {
            return Err(ModelError::ConstantOutOfRange {
                symbol: sym.clone(),
                value,
                size,
            });
        }
        constants.push(value);
    }
    Ok(Structure {
        vocab: vocab.clone(),
        size,
        relations,
        constants,
    })
}

/// Reads a binary word as a structure over `⟨Q/1⟩`: the universe is the set
/// of positions (0 = leftmost) and `Q` holds the positions of 1-bits.
pub fn string_to_structure(word: &str) -> Result<Structure, ModelError> {
    word_to_structure(&Vocabulary::string(), word)
}

/// Like [`string_to_structure`] for any vocabulary with a single unary relation.
pub fn word_to_structure(vocab: &Arc<Vocabulary>, word: &str) -> Result<Structure, ModelError> {
    if !vocab.is_string_vocabulary() {
        return Err(ModelError::NotAStringVocabulary(vocab.name.clone()));
    }
    if word.is_empty() {
        return Err(ModelError::EmptyWord);
    }
    let bits: BitEncoding = word.parse()?;
    decode(vocab, bits.len(), &bits)
}

/// Inverse of [`word_to_structure`].
pub fn structure_to_word(structure: &Structure) -> Result<String, ModelError> {
    if !structure.vocab.is_string_vocabulary() {
        return Err(ModelError::NotAStringVocabulary(
            structure.vocab.name.clone(),
        ));
    }
    Ok(format!("{}", encode(structure)))
}
