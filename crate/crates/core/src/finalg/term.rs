//! Terms, (quasi-)identities, their s-expression syntax, and evaluation.
//!
//! Terms are pure syntax over symbol names. They are resolved against a
//! signature by [`Term::compile`], which also expands the derived connectives
//! used throughout the catalog (`box`, `imp`, `neg`, `mu`, ...) when the
//! signature lacks them as basic operations.

use std::fmt;

use crate::error::{Error, Result};
use crate::finalg::algebra::{next_tuple, Algebra, Elem, Signature};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(usize),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(i: usize) -> Term {
        Term::Var(i)
    }

    pub fn app(name: &str, args: Vec<Term>) -> Term {
        Term::App(name.to_string(), args)
    }

    pub fn constant(name: &str) -> Term {
        Term::App(name.to_string(), Vec::new())
    }

    pub fn unary(name: &str, t: Term) -> Term {
        Term::App(name.to_string(), vec![t])
    }

    pub fn binary(name: &str, s: Term, t: Term) -> Term {
        Term::App(name.to_string(), vec![s, t])
    }

    /// One more than the largest variable index, or 0 for ground terms.
    pub fn nvars(&self) -> usize {
        match self {
            Term::Var(i) => i + 1,
            Term::App(_, args) => args.iter().map(Term::nvars).max().unwrap_or(0),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    /// Resolves symbol names against `sig`, expanding derived connectives.
    pub fn compile(&self, sig: &Signature) -> Result<CompiledTerm> {
        let mut code = Vec::new();
        emit(self, sig, &mut code)?;
        Ok(CompiledTerm {
            code,
            nvars: self.nvars(),
        })
    }

    pub fn parse(src: &str) -> Result<Term> {
        let sx = Sexp::parse(src)?;
        term_from_sexp(&sx)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(i) => write!(f, "v{i}"),
            Term::App(name, args) if args.is_empty() => write!(f, "{name}"),
            Term::App(name, args) => {
                write!(f, "({name}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

fn alias(name: &str) -> &str {
    match name {
        "and" | "∧" => "meet",
        "or" | "∨" => "join",
        "not" | "¬" => "neg",
        "top" => "one",
        "bot" | "bottom" => "zero",
        "diamond" | "◇" => "dia",
        "□" => "box",
        "implies" | "=>" => "imp",
        other => other,
    }
}

fn emit(t: &Term, sig: &Signature, code: &mut Vec<Instr>) -> Result<()> {
    match t {
        Term::Var(i) => {
            code.push(Instr::Var(*i));
            Ok(())
        }
        Term::App(raw, args) => {
            let name = alias(raw);
            if let Some(op) = sig.lookup(name) {
                let arity = sig.arity(op);
                if arity != args.len() {
                    return Err(Error::ArityMismatch {
                        symbol: name.to_string(),
                        expected: arity,
                        found: args.len(),
                    });
                }
                for a in args {
                    emit(a, sig, code)?;
                }
                code.push(Instr::Op(op, arity));
                return Ok(());
            }
            match expand_derived(name, args, sig)? {
                Some(expanded) => emit(&expanded, sig, code),
                None => Err(Error::UnknownSymbol(raw.clone())),
            }
        }
    }
}

fn need(name: &str, args: &[Term], n: usize) -> Result<()> {
    if args.len() == n {
        Ok(())
    } else {
        Err(Error::ArityMismatch {
            symbol: name.to_string(),
            expected: n,
            found: args.len(),
        })
    }
}

/// Definitions of derived connectives in terms of basic operations.
fn expand_derived(name: &str, args: &[Term], sig: &Signature) -> Result<Option<Term>> {
    let has = |n: &str, a: usize| sig.has(n, a);
    let out = match name {
        "box" if has("dia", 1) && (has("neg", 1) || has("imp", 2)) => {
            need(name, args, 1)?;
            Term::unary(
                "neg",
                Term::unary("dia", Term::unary("neg", args[0].clone())),
            )
        }
        "neg" if has("imp", 2) && has("zero", 0) => {
            need(name, args, 1)?;
            Term::binary("imp", args[0].clone(), Term::constant("zero"))
        }
        "imp" if has("neg", 1) && has("join", 2) => {
            need(name, args, 2)?;
            Term::binary("join", Term::unary("neg", args[0].clone()), args[1].clone())
        }
        "iff" if has("meet", 2) => {
            need(name, args, 2)?;
            Term::binary(
                "meet",
                Term::binary("imp", args[0].clone(), args[1].clone()),
                Term::binary("imp", args[1].clone(), args[0].clone()),
            )
        }
        // McKinsey term: box dia x => dia box x
        "mu" => {
            need(name, args, 1)?;
            let x = args[0].clone();
            Term::binary(
                "imp",
                Term::unary("box", Term::unary("dia", x.clone())),
                Term::unary("dia", Term::unary("box", x)),
            )
        }
        _ => return Ok(None),
    };
    Ok(Some(out))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Instr {
    Var(usize),
    Op(usize, usize),
}

/// A term resolved against a signature, stored as a postfix program.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompiledTerm {
    code: Vec<Instr>,
    nvars: usize,
}

impl CompiledTerm {
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Evaluates without range checks; `asg` must cover all variables.
    pub fn eval_unchecked<A: Algebra + ?Sized>(
        &self,
        alg: &A,
        asg: &[Elem],
        stack: &mut Vec<Elem>,
    ) -> Elem {
        stack.clear();
        for ins in &self.code {
            match *ins {
                Instr::Var(i) => stack.push(asg[i]),
                Instr::Op(op, arity) => {
                    let base = stack.len() - arity;
                    let v = alg.apply(op, &stack[base..]);
                    stack.truncate(base);
                    stack.push(v);
                }
            }
        }
        stack[0]
    }

    pub fn eval<A: Algebra + ?Sized>(&self, alg: &A, asg: &[Elem]) -> Result<Elem> {
        if asg.len() < self.nvars {
            return Err(Error::ShortAssignment {
                needed: self.nvars,
                found: asg.len(),
            });
        }
        if let Some(&bad) = asg.iter().find(|&&a| a as usize >= alg.size()) {
            return Err(Error::ElementOutOfRange {
                elem: bad as u64,
                size: alg.size(),
            });
        }
        Ok(self.eval_unchecked(alg, asg, &mut Vec::new()))
    }
}

/// Value of the term operation induced by `t` at assignment `asg`.
pub fn eval_term<A: Algebra + ?Sized>(alg: &A, t: &Term, asg: &[Elem]) -> Result<Elem> {
    t.compile(alg.signature())?.eval(alg, asg)
}

/// An equation `lhs = rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
}

impl Equation {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        Equation { lhs, rhs }
    }

    pub fn nvars(&self) -> usize {
        self.lhs.nvars().max(self.rhs.nvars())
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(= {} {})", self.lhs, self.rhs)
    }
}

/// `premise_1 & ... & premise_m -> conclusion`, universally quantified over
/// `v0..v{nvars-1}`. An empty premise makes it an identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuasiIdentity {
    pub nvars: usize,
    pub premise: Vec<Equation>,
    pub conclusion: Equation,
}

impl QuasiIdentity {
    pub fn new(nvars: usize, premise: Vec<Equation>, conclusion: Equation) -> Result<Self> {
        let q = QuasiIdentity {
            nvars,
            premise,
            conclusion,
        };
        let used = q.used_vars();
        if used > nvars {
            return Err(Error::Parse(format!(
                "quasi-identity declares {nvars} variable(s) but uses v{}",
                used - 1
            )));
        }
        Ok(q)
    }

    pub fn identity(lhs: Term, rhs: Term) -> Self {
        let eq = Equation::new(lhs, rhs);
        QuasiIdentity {
            nvars: eq.nvars(),
            premise: Vec::new(),
            conclusion: eq,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.premise.is_empty()
    }

    fn used_vars(&self) -> usize {
        self.premise
            .iter()
            .map(Equation::nvars)
            .chain(std::iter::once(self.conclusion.nvars()))
            .max()
            .unwrap_or(0)
    }

    /// Accepts `(qi (vars n) (prem eq...) (concl eq))`, `(id (vars n) eq)` or a
    /// bare equation `(= s t)`.
    pub fn parse(src: &str) -> Result<Self> {
        let sx = Sexp::parse(src)?;
        qi_from_sexp(&sx)
    }

    pub fn compile(&self, sig: &Signature) -> Result<CompiledQi> {
        let pair = |e: &Equation| -> Result<(CompiledTerm, CompiledTerm)> {
            Ok((e.lhs.compile(sig)?, e.rhs.compile(sig)?))
        };
        Ok(CompiledQi {
            nvars: self.nvars,
            premise: self.premise.iter().map(pair).collect::<Result<_>>()?,
            conclusion: pair(&self.conclusion)?,
        })
    }
}

impl fmt::Display for QuasiIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(qi (vars {})", self.nvars)?;
        if !self.premise.is_empty() {
            write!(f, " (prem")?;
            for e in &self.premise {
                write!(f, " {e}")?;
            }
            write!(f, ")")?;
        }
        write!(f, " (concl {}))", self.conclusion)
    }
}

pub struct CompiledQi {
    nvars: usize,
    premise: Vec<(CompiledTerm, CompiledTerm)>,
    conclusion: (CompiledTerm, CompiledTerm),
}

impl CompiledQi {
    pub fn premise_holds<A: Algebra + ?Sized>(
        &self,
        alg: &A,
        asg: &[Elem],
        stack: &mut Vec<Elem>,
    ) -> bool {
        self.premise
            .iter()
            .all(|(s, t)| s.eval_unchecked(alg, asg, stack) == t.eval_unchecked(alg, asg, stack))
    }

    pub fn conclusion_holds<A: Algebra + ?Sized>(
        &self,
        alg: &A,
        asg: &[Elem],
        stack: &mut Vec<Elem>,
    ) -> bool {
        let (s, t) = &self.conclusion;
        s.eval_unchecked(alg, asg, stack) == t.eval_unchecked(alg, asg, stack)
    }

    /// First assignment (lexicographic) satisfying the premise but not the
    /// conclusion, if any.
    pub fn counterexample<A: Algebra + ?Sized>(&self, alg: &A) -> Option<Vec<Elem>> {
        let mut asg = vec![0 as Elem; self.nvars];
        let mut stack = Vec::new();
        loop {
            if self.premise_holds(alg, &asg, &mut stack)
                && !self.conclusion_holds(alg, &asg, &mut stack)
            {
                return Some(asg);
            }
            if !next_tuple(&mut asg, alg.size()) {
                return None;
            }
        }
    }

    /// First assignment satisfying the premise, if any.
    pub fn premise_solution<A: Algebra + ?Sized>(&self, alg: &A) -> Option<Vec<Elem>> {
        let mut asg = vec![0 as Elem; self.nvars];
        let mut stack = Vec::new();
        loop {
            if self.premise_holds(alg, &asg, &mut stack) {
                return Some(asg);
            }
            if !next_tuple(&mut asg, alg.size()) {
                return None;
            }
        }
    }
}

/// Checks an identity; returns a counter-assignment when it fails.
pub fn check_identity<A: Algebra + ?Sized>(
    alg: &A,
    id: &QuasiIdentity,
) -> Result<Option<Vec<Elem>>> {
    if !id.is_identity() {
        return Err(Error::Precondition(
            "check_identity expects an empty premise".into(),
        ));
    }
    check_quasi_identity(alg, id)
}

/// Checks a quasi-identity; returns a counter-assignment when it fails.
pub fn check_quasi_identity<A: Algebra + ?Sized>(
    alg: &A,
    q: &QuasiIdentity,
) -> Result<Option<Vec<Elem>>> {
    let compiled = q.compile(alg.signature())?;
    Ok(compiled.counterexample(alg))
}

// ---------------------------------------------------------------------------
// s-expressions

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sexp {
    Atom(String),
    List(Vec<Sexp>),
}

impl Sexp {
    pub fn parse(src: &str) -> Result<Sexp> {
        let tokens = tokenize(src);
        let mut pos = 0;
        let sx = parse_sexp(&tokens, &mut pos)?;
        if pos != tokens.len() {
            return Err(Error::Parse(format!(
                "trailing input after s-expression: `{}`",
                tokens[pos..].join(" ")
            )));
        }
        Ok(sx)
    }

    fn head(&self) -> Option<&str> {
        match self {
            Sexp::List(items) => match items.first() {
                Some(Sexp::Atom(a)) => Some(a.as_str()),
                _ => None,
            },
            Sexp::Atom(_) => None,
        }
    }
}

fn tokenize(src: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for ch in src.chars() {
        match ch {
            '(' | ')' => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
                out.push(ch.to_string());
            }
            c if c.is_whitespace() => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

fn parse_sexp(tokens: &[String], pos: &mut usize) -> Result<Sexp> {
    let tok = tokens
        .get(*pos)
        .ok_or_else(|| Error::Parse("unexpected end of input".into()))?;
    *pos += 1;
    match tok.as_str() {
        "(" => {
            let mut items = Vec::new();
            loop {
                match tokens.get(*pos).map(String::as_str) {
                    Some(")") => {
                        *pos += 1;
                        return Ok(Sexp::List(items));
                    }
                    Some(_) => items.push(parse_sexp(tokens, pos)?),
                    None => return Err(Error::Parse("unbalanced parentheses".into())),
                }
            }
        }
        ")" => Err(Error::Parse("unexpected `)`".into())),
        atom => Ok(Sexp::Atom(atom.to_string())),
    }
}

fn var_index(atom: &str) -> Option<usize> {
    let rest = atom.strip_prefix('v')?;
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    rest.parse().ok()
}

fn term_from_sexp(sx: &Sexp) -> Result<Term> {
    match sx {
        Sexp::Atom(a) => Ok(match var_index(a) {
            Some(i) => Term::Var(i),
            None => Term::constant(a),
        }),
        Sexp::List(items) => {
            let (head, rest) = items
                .split_first()
                .ok_or_else(|| Error::Parse("empty list is not a term".into()))?;
            let name = match head {
                Sexp::Atom(a) if var_index(a).is_none() => a.clone(),
                _ => return Err(Error::Parse(format!("bad operator in term: {head:?}"))),
            };
            let args = rest
                .iter()
                .map(term_from_sexp)
                .collect::<Result<Vec<_>>>()?;
            Ok(Term::App(name, args))
        }
    }
}

fn equation_from_sexp(sx: &Sexp) -> Result<Equation> {
    match sx {
        Sexp::List(items) if items.len() == 3 && sx.head() == Some("=") => Ok(Equation::new(
            term_from_sexp(&items[1])?,
            term_from_sexp(&items[2])?,
        )),
        _ => Err(Error::Parse(format!("expected (= s t), found {sx:?}"))),
    }
}

fn vars_from_sexp(sx: &Sexp) -> Result<usize> {
    match sx {
        Sexp::List(items) if items.len() == 2 && sx.head() == Some("vars") => match &items[1] {
            Sexp::Atom(n) => n
                .parse()
                .map_err(|_| Error::Parse(format!("bad variable count `{n}`"))),
            _ => Err(Error::Parse("bad (vars n)".into())),
        },
        _ => Err(Error::Parse("expected (vars n)".into())),
    }
}

fn qi_from_sexp(sx: &Sexp) -> Result<QuasiIdentity> {
    match sx.head() {
        Some("=") => {
            let eq = equation_from_sexp(sx)?;
            QuasiIdentity::new(eq.nvars(), Vec::new(), eq)
        }
        Some("qi") | Some("id") => {
            let Sexp::List(items) = sx else {
                unreachable!()
            };
            let mut nvars = None;
            let mut premise = Vec::new();
            let mut conclusion = None;
            for item in &items[1..] {
                match item.head() {
                    Some("vars") => nvars = Some(vars_from_sexp(item)?),
                    Some("prem") => {
                        let Sexp::List(eqs) = item else {
                            unreachable!()
                        };
                        for e in &eqs[1..] {
                            premise.push(equation_from_sexp(e)?);
                        }
                    }
                    Some("concl") => {
                        let Sexp::List(eqs) = item else {
                            unreachable!()
                        };
                        if eqs.len() != 2 {
                            return Err(Error::Parse("(concl ...) takes one equation".into()));
                        }
                        conclusion = Some(equation_from_sexp(&eqs[1])?);
                    }
                    Some("=") => conclusion = Some(equation_from_sexp(item)?),
                    _ => return Err(Error::Parse(format!("unexpected clause {item:?}"))),
                }
            }
            let conclusion = conclusion.ok_or_else(|| Error::Parse("missing conclusion".into()))?;
            if sx.head() == Some("id") && !premise.is_empty() {
                return Err(Error::Parse("an identity has no premise".into()));
            }
            let inferred = premise
                .iter()
                .map(Equation::nvars)
                .chain(std::iter::once(conclusion.nvars()))
                .max()
                .unwrap_or(0);
            QuasiIdentity::new(nvars.unwrap_or(inferred), premise, conclusion)
        }
        _ => Err(Error::Parse(
            "expected (qi ...), (id ...) or (= s t)".into(),
        )),
    }
}
