//! Backtracking homomorphism search.
//!
//! The source is seeded on a generating set. Generator images are tried in
//! ascending target order; after each assignment the images of everything the
//! assigned generators produce are forced by forward propagation, and a clash
//! prunes the branch. Once all generators are placed the propagated map is
//! total and every operation instance has been checked, so each leaf is a
//! homomorphism. Witnesses come out in lexicographic order of generator images.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::finalg::algebra::{Algebra, Elem, Homomorphism};
use crate::finalg::closure::{for_each_new_tuple, generating_set};

const UNSET: Elem = Elem::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomMode {
    /// The first homomorphism found.
    Any,
    /// Every homomorphism.
    All,
    /// The first injective homomorphism.
    Injective,
    /// The first surjective homomorphism.
    Surjective,
}

pub struct HomSearch<'a, S: Algebra + ?Sized, T: Algebra + ?Sized> {
    source: &'a S,
    target: &'a T,
    generators: Option<Vec<Elem>>,
    fixed: Vec<(Elem, Elem)>,
    injective: bool,
    surjective: bool,
    classes: Option<(Vec<u64>, Vec<u64>)>,
    deadline: Option<Instant>,
}

impl<'a, S: Algebra + ?Sized, T: Algebra + ?Sized> HomSearch<'a, S, T> {
    pub fn new(source: &'a S, target: &'a T) -> Self {
        HomSearch {
            source,
            target,
            generators: None,
            fixed: Vec::new(),
            injective: false,
            surjective: false,
            classes: None,
            deadline: None,
        }
    }

    /// Uses the given generating set of the source instead of computing one.
    pub fn generators(mut self, gens: Vec<Elem>) -> Self {
        self.generators = Some(gens);
        self
    }

    /// Forces `a` to map to `b`.
    pub fn fix(mut self, a: Elem, b: Elem) -> Self {
        self.fixed.push((a, b));
        self
    }

    pub fn injective(mut self) -> Self {
        self.injective = true;
        self
    }

    pub fn surjective(mut self) -> Self {
        self.surjective = true;
        self
    }

    /// Only allow `a -> b` when `source_class[a] == target_class[b]`.
    pub fn classes(mut self, source_class: Vec<u64>, target_class: Vec<u64>) -> Self {
        self.classes = Some((source_class, target_class));
        self
    }

    pub fn deadline(mut self, deadline: Option<Instant>) -> Self {
        self.deadline = deadline;
        self
    }

    /// Visits homomorphisms in lexicographic order of generator images until
    /// `visit` returns `false`.
    pub fn for_each<F: FnMut(&Homomorphism) -> bool>(&self, mut visit: F) -> Result<()> {
        if self.source.signature() != self.target.signature() {
            return Err(Error::SignatureMismatch(
                "homomorphism search needs equal signatures".into(),
            ));
        }
        if self.injective && self.source.size() > self.target.size() {
            return Ok(());
        }
        if self.surjective && self.source.size() < self.target.size() {
            return Ok(());
        }
        let gens = match &self.generators {
            Some(g) => g.clone(),
            None => generating_set(self.source),
        };
        let mut prop = Propagator::new(
            self.source,
            self.target,
            self.injective,
            self.classes.as_ref(),
        );
        if !prop.seed_constants() {
            return Ok(());
        }
        for &(a, b) in &self.fixed {
            if !prop.assign(a, b) {
                return Ok(());
            }
        }
        if !prop.propagate() {
            return Ok(());
        }
        let mut ctx = Dfs {
            gens: &gens,
            surjective: self.surjective,
            deadline: self.deadline,
            nodes: 0,
            stop: false,
        };
        ctx.run(&mut prop, 0, &mut visit)
    }

    pub fn first(&self) -> Result<Option<Homomorphism>> {
        let mut out = None;
        self.for_each(|h| {
            out = Some(h.clone());
            false
        })?;
        Ok(out)
    }

    pub fn all(&self) -> Result<Vec<Homomorphism>> {
        let mut out = Vec::new();
        self.for_each(|h| {
            out.push(h.clone());
            true
        })?;
        Ok(out)
    }

    pub fn exists(&self) -> Result<bool> {
        Ok(self.first()?.is_some())
    }
}

/// Homomorphisms from `a` to `b` in the requested mode. `Any`, `Injective` and
/// `Surjective` return at most one witness.
pub fn homs<S: Algebra + ?Sized, T: Algebra + ?Sized>(
    a: &S,
    b: &T,
    mode: HomMode,
) -> Result<Vec<Homomorphism>> {
    let search = HomSearch::new(a, b);
    match mode {
        HomMode::All => search.all(),
        HomMode::Any => Ok(search.first()?.into_iter().collect()),
        HomMode::Injective => Ok(search.injective().first()?.into_iter().collect()),
        HomMode::Surjective => Ok(search.surjective().first()?.into_iter().collect()),
    }
}

/// First injective homomorphism, if any.
pub fn embedding<S: Algebra + ?Sized, T: Algebra + ?Sized>(
    a: &S,
    b: &T,
) -> Result<Option<Homomorphism>> {
    HomSearch::new(a, b).injective().first()
}

/// Extends `gens[i] -> images[i]` to a homomorphism, if possible. `gens` must
/// generate `source` together with the constants.
pub fn extend<S: Algebra + ?Sized, T: Algebra + ?Sized>(
    source: &S,
    gens: &[Elem],
    target: &T,
    images: &[Elem],
) -> Result<Option<Homomorphism>> {
    if gens.len() != images.len() {
        return Err(Error::Precondition(
            "one image per generator is required".into(),
        ));
    }
    let mut search = HomSearch::new(source, target).generators(gens.to_vec());
    for (&g, &b) in gens.iter().zip(images) {
        search = search.fix(g, b);
    }
    search.first()
}

struct Dfs<'g> {
    gens: &'g [Elem],
    surjective: bool,
    deadline: Option<Instant>,
    nodes: u64,
    stop: bool,
}

impl Dfs<'_> {
    fn run<S, T, F>(
        &mut self,
        prop: &mut Propagator<'_, S, T>,
        level: usize,
        visit: &mut F,
    ) -> Result<()>
    where
        S: Algebra + ?Sized,
        T: Algebra + ?Sized,
        F: FnMut(&Homomorphism) -> bool,
    {
        if self.stop {
            return Ok(());
        }
        self.nodes += 1;
        if self.nodes.is_multiple_of(4096) {
            if let Some(d) = self.deadline {
                if Instant::now() > d {
                    return Err(Error::timeout("search nodes", self.nodes));
                }
            }
        }
        if level == self.gens.len() {
            debug_assert!(
                prop.img.iter().all(|&v| v != UNSET),
                "generators must generate the source"
            );
            if prop.img.contains(&UNSET) {
                return Err(Error::Precondition(
                    "generator list does not generate the source algebra".into(),
                ));
            }
            if self.surjective && !prop.is_onto() {
                return Ok(());
            }
            let h = Homomorphism::new(prop.img.clone());
            if !visit(&h) {
                self.stop = true;
            }
            return Ok(());
        }
        let g = self.gens[level];
        if prop.img[g as usize] != UNSET {
            return self.run(prop, level + 1, visit);
        }
        let mark = prop.mark();
        for b in 0..prop.target.size() as Elem {
            if prop.assign(g, b) && prop.propagate() {
                self.run(prop, level + 1, visit)?;
            }
            prop.undo(mark);
            if self.stop {
                break;
            }
        }
        Ok(())
    }
}

struct Propagator<'a, S: ?Sized, T: ?Sized> {
    source: &'a S,
    target: &'a T,
    img: Vec<Elem>,
    members: Vec<Elem>,
    done: usize,
    used: Option<Vec<bool>>,
    classes: Option<&'a (Vec<u64>, Vec<u64>)>,
    ops: Vec<(usize, usize)>,
    sargs: Vec<Elem>,
    targs: Vec<Elem>,
}

impl<'a, S: Algebra + ?Sized, T: Algebra + ?Sized> Propagator<'a, S, T> {
    fn new(
        source: &'a S,
        target: &'a T,
        injective: bool,
        classes: Option<&'a (Vec<u64>, Vec<u64>)>,
    ) -> Self {
        let sig = source.signature();
        Propagator {
            source,
            target,
            img: vec![UNSET; source.size()],
            members: Vec::with_capacity(source.size()),
            done: 0,
            used: injective.then(|| vec![false; target.size()]),
            classes,
            ops: (0..sig.len())
                .map(|op| (op, sig.arity(op)))
                .filter(|&(_, a)| a > 0)
                .collect(),
            sargs: Vec::new(),
            targs: Vec::new(),
        }
    }

    fn seed_constants(&mut self) -> bool {
        let sig = self.source.signature();
        let consts: Vec<usize> = sig.constants().collect();
        consts
            .into_iter()
            .all(|c| self.assign(self.source.constant(c), self.target.constant(c)))
    }

    /// Records `a -> b`; false on a clash.
    fn assign(&mut self, a: Elem, b: Elem) -> bool {
        let cur = self.img[a as usize];
        if cur != UNSET {
            return cur == b;
        }
        if let Some((sc, tc)) = self.classes {
            if sc[a as usize] != tc[b as usize] {
                return false;
            }
        }
        if let Some(used) = &mut self.used {
            if used[b as usize] {
                return false;
            }
            used[b as usize] = true;
        }
        self.img[a as usize] = b;
        self.members.push(a);
        true
    }

    fn propagate(&mut self) -> bool {
        while self.done < self.members.len() {
            let p = self.done;
            for oi in 0..self.ops.len() {
                let (op, arity) = self.ops[oi];
                let mut ok = true;
                let mut forced: Vec<(Elem, Elem)> = Vec::new();
                {
                    let members = &self.members;
                    let img = &self.img;
                    let sargs = &mut self.sargs;
                    let targs = &mut self.targs;
                    let source = self.source;
                    let target = self.target;
                    for_each_new_tuple(p, arity, |idx| {
                        if !ok {
                            return;
                        }
                        sargs.clear();
                        targs.clear();
                        for &i in idx {
                            let a = members[i];
                            sargs.push(a);
                            targs.push(img[a as usize]);
                        }
                        let a = source.apply(op, sargs);
                        let b = target.apply(op, targs);
                        let cur = img[a as usize];
                        if cur == UNSET {
                            forced.push((a, b));
                        } else if cur != b {
                            ok = false;
                        }
                    });
                }
                if !ok {
                    return false;
                }
                for (a, b) in forced {
                    if !self.assign(a, b) {
                        return false;
                    }
                }
            }
            self.done += 1;
        }
        true
    }

    fn mark(&self) -> usize {
        self.members.len()
    }

    fn undo(&mut self, mark: usize) {
        while self.members.len() > mark {
            let a = self.members.pop().unwrap();
            let b = self.img[a as usize];
            if let Some(used) = &mut self.used {
                used[b as usize] = false;
            }
            self.img[a as usize] = UNSET;
        }
        self.done = self.done.min(mark);
    }

    fn is_onto(&self) -> bool {
        let mut hit = vec![false; self.target.size()];
        let mut count = 0;
        for &b in &self.img {
            if !hit[b as usize] {
                hit[b as usize] = true;
                count += 1;
            }
        }
        count == self.target.size()
    }
}
