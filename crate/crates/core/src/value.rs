//! Finite strings over ω whose entries are either naturals or (structural)
//! codes of other finite strings.
//!
//! A [`FinString`] is a view `buf[..len]` of a shared immutable buffer, so the
//! prefixes produced by the jump approximations share storage with the string
//! they were cut from. Iterated jumps nest codes of codes of prefixes; the
//! unfolded tree of such a value grows exponentially in the nesting depth, so
//! equality is decided by a longest-common-prefix computation memoized on
//! buffer identity. Every comparison stays polynomial in the size of the
//! underlying buffer graph.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::Error;

/// An entry of a Baire-space string.
#[derive(Clone)]
pub enum Value {
    Nat(u64),
    Code(FinString),
}

/// A finite string of [`Value`]s.
#[derive(Clone)]
pub struct FinString {
    buf: Arc<[Value]>,
    len: usize,
}

impl Default for FinString {
    fn default() -> Self {
        FinString::empty()
    }
}

impl FinString {
    pub fn empty() -> FinString {
        FinString { buf: Arc::from(Vec::new()), len: 0 }
    }

    pub fn from_vec(entries: Vec<Value>) -> FinString {
        let len = entries.len();
        FinString { buf: Arc::from(entries), len }
    }

    /// The string `⟨Nat 0, …, Nat 0⟩` with `n` entries.
    pub fn zeros(n: usize) -> FinString {
        FinString::from_vec(alloc::vec![Value::Nat(0); n])
    }

    pub fn nats(entries: &[u64]) -> FinString {
        FinString::from_vec(entries.iter().map(|&n| Value::Nat(n)).collect())
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> Option<&Value> {
        if i < self.len {
            Some(&self.buf[i])
        } else {
            None
        }
    }

    pub fn first(&self) -> Option<&Value> {
        self.get(0)
    }

    pub fn last(&self) -> Option<&Value> {
        if self.len == 0 {
            None
        } else {
            Some(&self.buf[self.len - 1])
        }
    }

    pub fn as_slice(&self) -> &[Value] {
        &self.buf[..self.len]
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Value> {
        self.as_slice().iter()
    }

    /// `σ↾n`. Shares storage with `self`; `n` is clamped to `|σ|`.
    pub fn restrict(&self, n: usize) -> FinString {
        FinString { buf: self.buf.clone(), len: n.min(self.len) }
    }

    /// The whole underlying buffer, of which `self` is a prefix.
    pub fn whole(&self) -> FinString {
        FinString { buf: self.buf.clone(), len: self.buf.len() }
    }

    /// A fresh string `σ⌢v`.
    pub fn append(&self, v: Value) -> FinString {
        let mut entries = self.as_slice().to_vec();
        entries.push(v);
        FinString::from_vec(entries)
    }

    /// `self ⊆ other` (prefix).
    pub fn is_prefix_of(&self, other: &FinString) -> bool {
        prefix(self, other)
    }

    /// Address of the shared buffer, used as a cache key together with `len`.
    /// Only meaningful while the string is alive.
    pub fn buffer_id(&self) -> usize {
        Arc::as_ptr(&self.buf) as *const Value as usize
    }

    /// Number of distinct buffers reachable from this string (a size measure
    /// of the shared representation).
    pub fn shared_size(&self) -> usize {
        let mut seen = BTreeMap::new();
        let mut todo = alloc::vec![self];
        while let Some(s) = todo.pop() {
            if seen.insert(s.buffer_id(), ()).is_some() {
                continue;
            }
            for v in s.buf.iter() {
                if let Value::Code(inner) = v {
                    todo.push(inner);
                }
            }
        }
        seen.len()
    }
}

/// `σ ⊆ τ`: `|σ| ≤ |τ|` and the entries agree below `|σ|`.
pub fn prefix(sigma: &FinString, tau: &FinString) -> bool {
    if sigma.len > tau.len {
        return false;
    }
    if sigma.len == 0 || Arc::ptr_eq(&sigma.buf, &tau.buf) {
        return true;
    }
    Comparator::default().lcp(&sigma.buf, &tau.buf) >= sigma.len
}

/// Prefix tests that share one common-prefix memo. The borrow keeps every
/// compared buffer alive, so the memo's address keys stay valid.
#[derive(Default)]
pub struct PrefixMemo<'a> {
    cmp: Comparator,
    _strings: core::marker::PhantomData<&'a FinString>,
}

impl<'a> PrefixMemo<'a> {
    pub fn new() -> PrefixMemo<'a> {
        PrefixMemo::default()
    }

    /// `σ ⊆ τ`.
    pub fn is_prefix(&mut self, sigma: &'a FinString, tau: &'a FinString) -> bool {
        if sigma.len > tau.len {
            return false;
        }
        if sigma.len == 0 || Arc::ptr_eq(&sigma.buf, &tau.buf) {
            return true;
        }
        self.cmp.lcp(&sigma.buf, &tau.buf) >= sigma.len
    }
}

/// `encode(σ) = Code(σ)`.
pub fn encode(sigma: &FinString) -> Value {
    Value::Code(sigma.clone())
}

/// Inverse of [`encode`].
pub fn decode(v: &Value) -> Result<FinString, Error> {
    match v {
        Value::Code(s) => Ok(s.clone()),
        Value::Nat(_) => Err(Error::NotACode),
    }
}

/// Memo of longest common prefixes between pairs of live buffers.
#[derive(Default)]
struct Comparator {
    memo: BTreeMap<(usize, usize), usize>,
}

fn pair_key(a: &Arc<[Value]>, b: &Arc<[Value]>) -> (usize, usize) {
    (Arc::as_ptr(a) as *const Value as usize, Arc::as_ptr(b) as *const Value as usize)
}

impl Comparator {
    /// Longest common prefix of two buffers. Nesting can be far deeper than
    /// the call stack, so the recursion runs on an explicit stack.
    fn lcp(&mut self, a: &Arc<[Value]>, b: &Arc<[Value]>) -> usize {
        struct Frame<'x> {
            a: &'x [Value],
            b: &'x [Value],
            key: (usize, usize),
            i: usize,
        }
        if Arc::ptr_eq(a, b) {
            return a.len();
        }
        let key = pair_key(a, b);
        if let Some(&n) = self.memo.get(&key) {
            return n;
        }
        let mut stack = alloc::vec![Frame { a, b, key, i: 0 }];
        let mut result = 0;
        while let Some(top) = stack.last_mut() {
            let n = top.a.len().min(top.b.len());
            let mut pending = None;
            while top.i < n {
                let same = match (&top.a[top.i], &top.b[top.i]) {
                    (Value::Nat(m), Value::Nat(k)) => m == k,
                    (Value::Code(s), Value::Code(t)) => {
                        if s.len != t.len {
                            false
                        } else if s.len == 0 || Arc::ptr_eq(&s.buf, &t.buf) {
                            true
                        } else {
                            let key = pair_key(&s.buf, &t.buf);
                            match self.memo.get(&key) {
                                Some(&l) => l >= s.len,
                                None => {
                                    pending = Some(Frame { a: &s.buf, b: &t.buf, key, i: 0 });
                                    break;
                                }
                            }
                        }
                    }
                    _ => false,
                };
                if !same {
                    break;
                }
                top.i += 1;
            }
            if let Some(f) = pending {
                stack.push(f);
                continue;
            }
            let done = stack.pop().unwrap();
            self.memo.insert(done.key, done.i);
            result = done.i;
        }
        result
    }

    fn value_eq(&mut self, x: &Value, y: &Value) -> bool {
        match (x, y) {
            (Value::Nat(m), Value::Nat(n)) => m == n,
            (Value::Code(s), Value::Code(t)) => {
                s.len == t.len && (s.len == 0 || self.lcp(&s.buf, &t.buf) >= s.len)
            }
            _ => false,
        }
    }
}

/// Moves the codes out of a uniquely owned buffer so that dropping deeply
/// nested values does not recurse.
fn take_children(buf: &mut Arc<[Value]>, stack: &mut Vec<FinString>) {
    if let Some(entries) = Arc::get_mut(buf) {
        for v in entries.iter_mut() {
            if let Value::Code(_) = v {
                if let Value::Code(s) = core::mem::replace(v, Value::Nat(0)) {
                    // a shared buffer only loses a reference here
                    if Arc::strong_count(&s.buf) == 1 {
                        stack.push(s);
                    }
                }
            }
        }
    }
}

impl Drop for FinString {
    fn drop(&mut self) {
        let mut stack = Vec::new();
        take_children(&mut self.buf, &mut stack);
        while let Some(mut s) = stack.pop() {
            take_children(&mut s.buf, &mut stack);
        }
    }
}

impl PartialEq for FinString {
    fn eq(&self, other: &Self) -> bool {
        self.len == other.len && prefix(self, other)
    }
}

impl Eq for FinString {}

impl PartialEq for Value {
    fn eq(&self, other: &Self) -> bool {
        Comparator::default().value_eq(self, other)
    }
}

impl Eq for Value {}

impl From<u64> for Value {
    fn from(n: u64) -> Self {
        Value::Nat(n)
    }
}

impl From<Vec<Value>> for FinString {
    fn from(v: Vec<Value>) -> Self {
        FinString::from_vec(v)
    }
}

impl FromIterator<Value> for FinString {
    fn from_iter<I: IntoIterator<Item = Value>>(iter: I) -> Self {
        FinString::from_vec(iter.into_iter().collect())
    }
}

// Rendering: top-level strings as ⟨a, b⟩, nested codes as [a,b].

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Nat(n) => write!(f, "{n}"),
            Value::Code(s) => {
                f.write_str("[")?;
                for (i, v) in s.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{v}")?;
                }
                f.write_str("]")
            }
        }
    }
}

impl fmt::Display for FinString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("⟨")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("⟩")
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Debug for FinString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses the bracket rendering back into a string. Accepts `⟨…⟩`, `<…>` or
/// `[…]` as the outer delimiters; inner codes use `[…]`.
pub fn parse_string(input: &str) -> Result<FinString, Error> {
    let chars: Vec<char> = input.chars().collect();
    let mut pos = 0;
    skip_ws(&chars, &mut pos);
    let close = match chars.get(pos) {
        Some('⟨') => '⟩',
        Some('<') => '>',
        Some('[') => ']',
        _ => return Err(Error::Parse { pos, msg: String::from("expected '⟨', '<' or '['") }),
    };
    pos += 1;
    let s = parse_entries(&chars, &mut pos, close)?;
    skip_ws(&chars, &mut pos);
    if pos != chars.len() {
        return Err(Error::Parse { pos, msg: String::from("trailing input") });
    }
    Ok(s)
}

fn skip_ws(chars: &[char], pos: &mut usize) {
    while *pos < chars.len() && chars[*pos].is_whitespace() {
        *pos += 1;
    }
}

fn parse_entries(chars: &[char], pos: &mut usize, close: char) -> Result<FinString, Error> {
    let mut out = Vec::new();
    skip_ws(chars, pos);
    if chars.get(*pos) == Some(&close) {
        *pos += 1;
        return Ok(FinString::from_vec(out));
    }
    loop {
        skip_ws(chars, pos);
        match chars.get(*pos) {
            Some('[') => {
                *pos += 1;
                out.push(Value::Code(parse_entries(chars, pos, ']')?));
            }
            Some(c) if c.is_ascii_digit() => {
                let start = *pos;
                let mut n: u64 = 0;
                while let Some(d) = chars.get(*pos).and_then(|c| c.to_digit(10)) {
                    n = n
                        .checked_mul(10)
                        .and_then(|n| n.checked_add(d as u64))
                        .ok_or(Error::Parse { pos: start, msg: String::from("number too large") })?;
                    *pos += 1;
                }
                out.push(Value::Nat(n));
            }
            _ => return Err(Error::Parse { pos: *pos, msg: String::from("expected a number or '['") }),
        }
        skip_ws(chars, pos);
        match chars.get(*pos) {
            Some(',') => *pos += 1,
            Some(c) if *c == close => {
                *pos += 1;
                return Ok(FinString::from_vec(out));
            }
            _ => {
                let mut msg = String::from("expected ',' or '");
                msg.push(close);
                msg.push('\'');
                return Err(Error::Parse { pos: *pos, msg });
            }
        }
    }
}

/// Cantor pairing.
fn pair(a: u128, b: u128) -> Option<u128> {
    let s = a.checked_add(b)?;
    s.checked_mul(s.checked_add(1)?)?.checked_div(2)?.checked_add(b)
}

fn unpair(z: u128) -> (u128, u128) {
    // w = floor((sqrt(8z+1)-1)/2), computed without floating point.
    let mut lo: u128 = 0;
    let mut hi: u128 = 1u128 << 64;
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        if mid.checked_mul(mid + 1).map(|m| m / 2 <= z).unwrap_or(false) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    let w = lo;
    let t = w * (w + 1) / 2;
    let b = z - t;
    (w - b, b)
}

/// Canonical injective numeric code of a value: `Nat n ↦ 2n`,
/// `Code(σ) ↦ 2·⟨|σ|, entries⟩ + 1` with entries folded right-to-left
/// through Cantor pairing. `None` on `u128` overflow. The jump machinery
/// never uses this; it exists for functionals that inspect codes numerically.
pub fn numeric_code(v: &Value) -> Option<u128> {
    match v {
        Value::Nat(n) => (*n as u128).checked_mul(2),
        Value::Code(s) => {
            let mut acc: u128 = 0;
            for e in s.iter().rev() {
                acc = pair(numeric_code(e)?, acc)?;
            }
            pair(s.len() as u128, acc)?.checked_mul(2)?.checked_add(1)
        }
    }
}

/// Inverse of [`numeric_code`] on its image. `None` when `z` is not the code
/// of any value.
pub fn from_numeric_code(z: u128) -> Option<Value> {
    if z.is_multiple_of(2) {
        return u64::try_from(z / 2).ok().map(Value::Nat);
    }
    let (len, mut acc) = unpair(z / 2);
    let mut entries = Vec::new();
    for _ in 0..len {
        let (head, rest) = unpair(acc);
        entries.push(from_numeric_code(head)?);
        acc = rest;
    }
    if acc != 0 {
        return None;
    }
    Some(Value::Code(FinString::from_vec(entries)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;
    use alloc::vec;

    fn code(entries: Vec<Value>) -> Value {
        Value::Code(FinString::from_vec(entries))
    }

    #[test]
    fn empty_is_prefix_of_everything() {
        let t = FinString::nats(&[3, 1, 4]);
        assert!(prefix(&FinString::empty(), &t));
        assert!(prefix(&FinString::empty(), &FinString::empty()));
    }

    #[test]
    fn reflexive_and_mismatch() {
        let s = FinString::nats(&[0, 1]);
        assert!(prefix(&s, &s));
        assert!(!prefix(&s, &FinString::nats(&[0, 2])));
    }

    #[test]
    fn shared_memo_matches_single_tests() {
        let nested = |k: u64| FinString::from_vec(vec![code(vec![code(vec![Value::Nat(k)])]), Value::Nat(1)]);
        let strings = [nested(0), nested(0).restrict(1), nested(1), FinString::empty()];
        let mut memo = PrefixMemo::new();
        for a in &strings {
            for b in &strings {
                assert_eq!(memo.is_prefix(a, b), prefix(a, b));
            }
        }
    }

    #[test]
    fn nat_never_equals_code() {
        assert_ne!(Value::Nat(0), code(vec![]));
        assert_ne!(code(vec![Value::Nat(0)]), Value::Nat(0));
    }

    #[test]
    fn encode_injective_on_lengths() {
        let a = encode(&FinString::nats(&[0, 0]));
        let b = encode(&FinString::nats(&[0]));
        assert_ne!(a, b);
        assert_eq!(encode(&FinString::empty()), code(vec![]));
    }

    #[test]
    fn decode_rejects_nat() {
        assert_eq!(decode(&Value::Nat(3)), Err(Error::NotACode));
    }

    #[test]
    fn views_share_storage_but_compare_structurally() {
        let s = FinString::zeros(5);
        let t = FinString::zeros(7);
        assert!(prefix(&s.restrict(3), &t));
        assert_eq!(s.restrict(3), t.restrict(3));
        assert_eq!(encode(&s.restrict(2)), encode(&t.restrict(2)));
    }

    #[test]
    fn render_and_parse() {
        let s = FinString::from_vec(vec![Value::Nat(0), code(vec![Value::Nat(0), Value::Nat(0)]), Value::Nat(1)]);
        let text = format!("{s}");
        assert_eq!(text, "⟨0, [0,0], 1⟩");
        assert_eq!(parse_string(&text).unwrap(), s);
        assert_eq!(parse_string("<0,[0,0],1>").unwrap(), s);
        assert!(matches!(parse_string("⟨0,,1⟩"), Err(Error::Parse { pos: 3, .. })));
    }

    #[test]
    fn deep_sharing_compares_fast() {
        // 60 levels of codes-of-prefixes; the unfolded tree is astronomically large.
        fn tower(base: usize, depth: usize) -> FinString {
            let mut s = FinString::zeros(base);
            for _ in 0..depth {
                let n = s.len();
                s = (1..=n).map(|t| encode(&s.restrict(t))).collect();
            }
            s
        }
        let a = tower(60, 40);
        let b = tower(60, 40);
        assert_eq!(a, b);
        assert!(!prefix(&tower(60, 40), &tower(59, 40)));
    }

    #[test]
    fn numeric_code_roundtrip_small() {
        let v = code(vec![Value::Nat(2), code(vec![]), code(vec![Value::Nat(0)])]);
        let z = numeric_code(&v).unwrap();
        assert_eq!(from_numeric_code(z), Some(v));
        assert_eq!(numeric_code(&Value::Nat(5)), Some(10));
    }
}
