use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Elements of a finite algebra are the integers `0..n`.
pub type Elem = u32;

/// A named operation symbol together with its arity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OpSymbol {
    #[serde(rename = "op")]
    pub name: String,
    pub arity: usize,
}

impl OpSymbol {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        OpSymbol {
            name: name.into(),
            arity,
        }
    }
}

/// An ordered list of operation symbols with unique names.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    symbols: Vec<OpSymbol>,
}

impl Signature {
    pub fn new(symbols: Vec<OpSymbol>) -> Result<Self> {
        for (i, s) in symbols.iter().enumerate() {
            if symbols[..i].iter().any(|t| t.name == s.name) {
                return Err(Error::DuplicateSymbol(s.name.clone()));
            }
        }
        Ok(Signature { symbols })
    }

    /// Builds a signature from `(name, arity)` pairs. Panics on duplicate names;
    /// intended for the built-in signatures.
    pub fn from_pairs(pairs: &[(&str, usize)]) -> Self {
        Signature::new(pairs.iter().map(|&(n, a)| OpSymbol::new(n, a)).collect())
            .expect("built-in signature has unique names")
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[OpSymbol] {
        &self.symbols
    }

    pub fn symbol(&self, op: usize) -> &OpSymbol {
        &self.symbols[op]
    }

    pub fn arity(&self, op: usize) -> usize {
        self.symbols[op].arity
    }

    pub fn lookup(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }

    pub fn has(&self, name: &str, arity: usize) -> bool {
        self.lookup(name)
            .map(|i| self.arity(i) == arity)
            .unwrap_or(false)
    }

    /// Indices of the arity-0 symbols.
    pub fn constants(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&i| self.arity(i) == 0)
    }

    pub fn max_arity(&self) -> usize {
        self.symbols.iter().map(|s| s.arity).max().unwrap_or(0)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .symbols
            .iter()
            .map(|s| format!("{}/{}", s.name, s.arity))
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Anything that interprets a signature over the universe `0..size()`.
///
/// Tabular algebras and the tuple-backed free algebras both implement this, so
/// the search kernels work over either.
pub trait Algebra {
    fn signature(&self) -> &Signature;
    fn size(&self) -> usize;
    /// Applies operation `op` to `args`. `args.len()` must equal the arity and
    /// every argument must be in range; implementations may panic otherwise.
    fn apply(&self, op: usize, args: &[Elem]) -> Elem;

    fn label(&self) -> Option<&str> {
        None
    }

    fn constant(&self, op: usize) -> Elem {
        self.apply(op, &[])
    }
}

impl<T: Algebra + ?Sized> Algebra for &T {
    fn signature(&self) -> &Signature {
        (**self).signature()
    }
    fn size(&self) -> usize {
        (**self).size()
    }
    fn apply(&self, op: usize, args: &[Elem]) -> Elem {
        (**self).apply(op, args)
    }
    fn label(&self) -> Option<&str> {
        (**self).label()
    }
}

/// A finite algebra given by flat row-major operation tables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteAlgebra {
    name: Option<String>,
    signature: Signature,
    size: usize,
    tables: Vec<Vec<Elem>>,
}

fn table_len(size: usize, arity: usize) -> Option<usize> {
    let mut len = 1usize;
    for _ in 0..arity {
        len = len.checked_mul(size)?;
    }
    Some(len)
}

impl FiniteAlgebra {
    pub fn new(
        name: Option<String>,
        signature: Signature,
        size: usize,
        tables: Vec<Vec<Elem>>,
    ) -> Result<Self> {
        if size == 0 {
            return Err(Error::EmptyUniverse);
        }
        if tables.len() != signature.len() {
            return Err(Error::SignatureMismatch(format!(
                "{} table(s) for {} symbol(s)",
                tables.len(),
                signature.len()
            )));
        }
        for (op, table) in tables.iter().enumerate() {
            let sym = signature.symbol(op);
            let expected = table_len(size, sym.arity)
                .ok_or_else(|| Error::cap("table size", usize::MAX as u64, size as u64))?;
            if table.len() != expected {
                return Err(Error::TableSize {
                    symbol: sym.name.clone(),
                    expected,
                    found: table.len(),
                });
            }
            if let Some(&bad) = table.iter().find(|&&v| v as usize >= size) {
                return Err(Error::ElementOutOfRange {
                    elem: bad as u64,
                    size,
                });
            }
        }
        Ok(FiniteAlgebra {
            name,
            signature,
            size,
            tables,
        })
    }

    /// Tabulates `f` over every argument tuple. Entries are range-checked.
    pub fn from_fn<F>(
        name: Option<String>,
        signature: Signature,
        size: usize,
        mut f: F,
    ) -> Result<Self>
    where
        F: FnMut(usize, &[Elem]) -> Elem,
    {
        let mut tables = Vec::with_capacity(signature.len());
        for op in 0..signature.len() {
            let arity = signature.arity(op);
            let len = table_len(size, arity)
                .ok_or_else(|| Error::cap("table size", usize::MAX as u64, size as u64))?;
            let mut table = Vec::with_capacity(len);
            for_each_tuple(size, arity, |args| table.push(f(op, args)));
            tables.push(table);
        }
        FiniteAlgebra::new(name, signature, size, tables)
    }

    /// Materializes any [`Algebra`] into tables.
    pub fn tabulate<A: Algebra + ?Sized>(alg: &A, name: Option<String>) -> Result<Self> {
        FiniteAlgebra::from_fn(name, alg.signature().clone(), alg.size(), |op, args| {
            alg.apply(op, args)
        })
    }

    pub fn trivial(signature: Signature) -> Self {
        let tables = (0..signature.len()).map(|_| vec![0]).collect();
        FiniteAlgebra {
            name: Some("trivial".into()),
            signature,
            size: 1,
            tables,
        }
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn tables(&self) -> &[Vec<Elem>] {
        &self.tables
    }

    pub fn table(&self, op: usize) -> &[Elem] {
        &self.tables[op]
    }

    pub fn is_trivial(&self) -> bool {
        self.size == 1
    }

    /// Looks up an operation by name.
    pub fn op(&self, name: &str) -> Result<usize> {
        self.signature
            .lookup(name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    pub fn universe(&self) -> impl Iterator<Item = Elem> {
        0..self.size as Elem
    }

    /// Applies a named operation, checking arity and ranges.
    pub fn eval_op(&self, name: &str, args: &[Elem]) -> Result<Elem> {
        let op = self.op(name)?;
        let arity = self.signature.arity(op);
        if arity != args.len() {
            return Err(Error::ArityMismatch {
                symbol: name.to_string(),
                expected: arity,
                found: args.len(),
            });
        }
        for &a in args {
            self.check_elem(a)?;
        }
        Ok(self.apply(op, args))
    }

    pub fn check_elem(&self, a: Elem) -> Result<()> {
        if (a as usize) < self.size {
            Ok(())
        } else {
            Err(Error::ElementOutOfRange {
                elem: a as u64,
                size: self.size,
            })
        }
    }

    /// Stable byte encoding of the tables, used for deterministic sorting.
    pub fn table_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(&(self.size as u64).to_le_bytes());
        for t in &self.tables {
            for &v in t {
                out.extend_from_slice(&v.to_le_bytes());
            }
        }
        out
    }
}

impl Algebra for FiniteAlgebra {
    fn signature(&self) -> &Signature {
        &self.signature
    }

    fn size(&self) -> usize {
        self.size
    }

    #[inline]
    fn apply(&self, op: usize, args: &[Elem]) -> Elem {
        let mut idx = 0usize;
        for &a in args {
            idx = idx * self.size + a as usize;
        }
        self.tables[op][idx]
    }

    fn label(&self) -> Option<&str> {
        self.name.as_deref()
    }
}

/// Calls `f` on every tuple of length `arity` over `0..size`, in lexicographic
/// order (first coordinate most significant).
pub fn for_each_tuple<F: FnMut(&[Elem])>(size: usize, arity: usize, mut f: F) {
    if arity == 0 {
        f(&[]);
        return;
    }
    if size == 0 {
        return;
    }
    let mut t = vec![0 as Elem; arity];
    loop {
        f(&t);
        let mut i = arity;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            t[i] += 1;
            if (t[i] as usize) < size {
                break;
            }
            t[i] = 0;
        }
    }
}

/// Advances an odometer over `0..size` in place. Returns `false` after the last tuple.
pub(crate) fn next_tuple(t: &mut [Elem], size: usize) -> bool {
    let mut i = t.len();
    while i > 0 {
        i -= 1;
        t[i] += 1;
        if (t[i] as usize) < size {
            return true;
        }
        t[i] = 0;
    }
    false
}

/// A map between universes, re-checkable against both algebras.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Homomorphism {
    pub map: Vec<Elem>,
}

impl Homomorphism {
    pub fn new(map: Vec<Elem>) -> Self {
        Homomorphism { map }
    }

    pub fn identity(n: usize) -> Self {
        Homomorphism {
            map: (0..n as Elem).collect(),
        }
    }

    #[inline]
    pub fn image(&self, a: Elem) -> Elem {
        self.map[a as usize]
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = std::collections::HashSet::with_capacity(self.map.len());
        self.map.iter().all(|v| seen.insert(*v))
    }

    pub fn is_surjective(&self, target_size: usize) -> bool {
        let mut hit = vec![false; target_size];
        for &v in &self.map {
            if let Some(h) = hit.get_mut(v as usize) {
                *h = true;
            }
        }
        hit.into_iter().all(|h| h)
    }

    /// Checks the homomorphism condition on every operation and every argument
    /// tuple, independently of how the map was found.
    pub fn verify<S: Algebra + ?Sized, T: Algebra + ?Sized>(&self, source: &S, target: &T) -> bool {
        if source.signature() != target.signature() || self.map.len() != source.size() {
            return false;
        }
        if self.map.iter().any(|&v| v as usize >= target.size()) {
            return false;
        }
        let sig = source.signature();
        let mut img = Vec::with_capacity(sig.max_arity());
        for op in 0..sig.len() {
            let mut ok = true;
            for_each_tuple(source.size(), sig.arity(op), |args| {
                if !ok {
                    return;
                }
                img.clear();
                img.extend(args.iter().map(|&a| self.image(a)));
                ok = self.image(source.apply(op, args)) == target.apply(op, &img);
            });
            if !ok {
                return false;
            }
        }
        true
    }

    pub fn compose(&self, after: &Homomorphism) -> Homomorphism {
        Homomorphism {
            map: self.map.iter().map(|&a| after.image(a)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z3() -> FiniteAlgebra {
        let sig = Signature::from_pairs(&[("add", 2), ("zero", 0)]);
        FiniteAlgebra::from_fn(Some("Z3".into()), sig, 3, |op, a| match op {
            0 => (a[0] + a[1]) % 3,
            _ => 0,
        })
        .unwrap()
    }

    #[test]
    fn duplicate_symbols_rejected() {
        let err = Signature::new(vec![OpSymbol::new("f", 1), OpSymbol::new("f", 2)]).unwrap_err();
        assert_eq!(err, Error::DuplicateSymbol("f".into()));
    }

    #[test]
    fn table_validation() {
        let sig = Signature::from_pairs(&[("f", 1)]);
        assert!(matches!(
            FiniteAlgebra::new(None, sig.clone(), 2, vec![vec![0]]),
            Err(Error::TableSize { .. })
        ));
        assert!(matches!(
            FiniteAlgebra::new(None, sig.clone(), 2, vec![vec![0, 2]]),
            Err(Error::ElementOutOfRange { .. })
        ));
        assert_eq!(
            FiniteAlgebra::new(None, sig, 0, vec![vec![]]),
            Err(Error::EmptyUniverse)
        );
    }

    #[test]
    fn row_major_lookup() {
        let a = z3();
        assert_eq!(a.apply(0, &[2, 2]), 1);
        assert_eq!(a.eval_op("add", &[1, 2]).unwrap(), 0);
        assert!(a.eval_op("add", &[1]).is_err());
        assert!(a.eval_op("mul", &[1, 1]).is_err());
        assert!(a.eval_op("add", &[1, 5]).is_err());
    }

    #[test]
    fn verify_rejects_non_homomorphisms() {
        let a = z3();
        assert!(Homomorphism::identity(3).verify(&a, &a));
        // x -> 2x is an automorphism of Z3
        assert!(Homomorphism::new(vec![0, 2, 1]).verify(&a, &a));
        assert!(!Homomorphism::new(vec![0, 1, 1]).verify(&a, &a));
    }

    #[test]
    fn tuple_enumeration_is_lexicographic() {
        let mut seen = Vec::new();
        for_each_tuple(2, 2, |t| seen.push(t.to_vec()));
        assert_eq!(seen, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        let mut count = 0;
        for_each_tuple(5, 0, |_| count += 1);
        assert_eq!(count, 1);
    }
}
