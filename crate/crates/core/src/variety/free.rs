//! Free algebras of finite rank as subalgebras of products of the generators.

use std::time::Instant;

use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::finalg::closure::{for_each_new_tuple, subalgebra_generated};
use crate::finalg::{
    extend, for_each_tuple, Algebra, Elem, FiniteAlgebra, Homomorphism, Signature,
};

use super::spec::VarietySpec;

/// A pointed subalgebra `Sg^B(a)` of a generator `B`, used as one coordinate
/// of the free algebra.
#[derive(Clone, Debug)]
pub struct Coordinate {
    /// Index of `B` among the spec's generators.
    pub generator: usize,
    /// Images of the free generators in `B`.
    pub assignment: Vec<Elem>,
    /// The subalgebra generated by the assignment, re-indexed.
    pub algebra: FiniteAlgebra,
    /// Inclusion of `algebra` into `B`.
    pub inclusion: Vec<Elem>,
    gens: Vec<Elem>,
}

/// The homomorphism `F(k) -> B` induced by one assignment of the free
/// generators, factored through a kept coordinate.
#[derive(Clone, Debug)]
struct Evaluation {
    generator: usize,
    assignment: Vec<Elem>,
    coordinate: usize,
    map: Vec<Elem>,
}

/// Largest free algebra that is also tabulated for fast evaluation.
const TABULATE_LIMIT: usize = 1024;
/// Largest number of generator assignments `|B|^k` considered per generator.
const ASSIGNMENT_LIMIT: usize = 1 << 16;

/// Free algebra of rank `k` for the class generated by a finite list of finite
/// algebras. Elements are tuples over the kept coordinates; published
/// element numbers follow the lexicographic order of those tuples.
#[derive(Clone, Debug)]
pub struct FreeAlgebra {
    signature: Signature,
    rank: usize,
    label: String,
    coordinates: Vec<Coordinate>,
    evaluations: Vec<Evaluation>,
    width: usize,
    data: Vec<Elem>,
    index: TupleIndex,
    generators: Vec<Elem>,
    table: Option<FiniteAlgebra>,
}

type Tuple = SmallVec<[Elem; 24]>;

/// Tuple lookup. Tuples whose mixed-radix code fits in 64 bits are keyed by
/// that code.
#[derive(Clone, Debug)]
enum TupleIndex {
    Packed {
        radix: Vec<u64>,
        map: FxHashMap<u64, Elem>,
    },
    Wide(FxHashMap<Box<[Elem]>, Elem>),
}

impl TupleIndex {
    fn new(sizes: &[usize]) -> Self {
        let mut radix = Vec::with_capacity(sizes.len());
        let mut acc: u64 = 1;
        for &s in sizes.iter().rev() {
            radix.push(acc);
            match acc.checked_mul(s as u64) {
                Some(a) => acc = a,
                None => return TupleIndex::Wide(FxHashMap::default()),
            }
        }
        radix.reverse();
        TupleIndex::Packed {
            radix,
            map: FxHashMap::default(),
        }
    }

    fn code(radix: &[u64], t: &[Elem]) -> u64 {
        radix.iter().zip(t).map(|(&r, &x)| r * x as u64).sum()
    }

    fn get(&self, t: &[Elem]) -> Option<Elem> {
        match self {
            TupleIndex::Packed { radix, map } => map.get(&Self::code(radix, t)).copied(),
            TupleIndex::Wide(map) => map.get(t).copied(),
        }
    }

    fn insert(&mut self, t: &[Elem], e: Elem) {
        match self {
            TupleIndex::Packed { radix, map } => {
                map.insert(Self::code(radix, t), e);
            }
            TupleIndex::Wide(map) => {
                map.insert(t.into(), e);
            }
        }
    }

    fn len(&self) -> usize {
        match self {
            TupleIndex::Packed { map, .. } => map.len(),
            TupleIndex::Wide(map) => map.len(),
        }
    }

    fn cleared(&self) -> Self {
        match self {
            TupleIndex::Packed { radix, .. } => TupleIndex::Packed {
                radix: radix.clone(),
                map: FxHashMap::default(),
            },
            TupleIndex::Wide(_) => TupleIndex::Wide(FxHashMap::default()),
        }
    }
}

impl FreeAlgebra {
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// The free generators `g_0 … g_{k-1}`.
    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn coordinates(&self) -> &[Coordinate] {
        &self.coordinates
    }

    /// Coordinates of element `e`.
    pub fn tuple(&self, e: Elem) -> &[Elem] {
        let i = e as usize * self.width;
        &self.data[i..i + self.width]
    }

    /// Element with the given coordinates, if it belongs to the free algebra.
    pub fn element(&self, tuple: &[Elem]) -> Option<Elem> {
        self.index.get(tuple)
    }

    /// Value of `e` under the homomorphism into generator `generator` sending
    /// the free generators to `assignment`.
    pub fn evaluate(&self, generator: usize, assignment: &[Elem], e: Elem) -> Option<Elem> {
        let ev = self
            .evaluations
            .iter()
            .find(|ev| ev.generator == generator && ev.assignment == assignment)?;
        Some(ev.map[self.tuple(e)[ev.coordinate] as usize])
    }

    /// Every homomorphism into a generator, as `(generator, assignment, map)`,
    /// in lexicographic order of generator then assignment.
    pub fn evaluations(&self) -> impl Iterator<Item = (usize, &[Elem], Homomorphism)> + '_ {
        self.evaluations.iter().map(move |ev| {
            let map = (0..self.size() as Elem)
                .map(|e| ev.map[self.tuple(e)[ev.coordinate] as usize])
                .collect();
            (
                ev.generator,
                ev.assignment.as_slice(),
                Homomorphism::new(map),
            )
        })
    }

    /// Tabulated copy, if the algebra is small enough to have been tabulated.
    pub fn tabulated(&self) -> Option<&FiniteAlgebra> {
        self.table.as_ref()
    }

    /// Tabulated copy; tabulates on demand for algebras up to `limit` elements.
    pub fn to_finite(&self, limit: usize) -> Result<FiniteAlgebra> {
        if let Some(t) = &self.table {
            return Ok(t.clone());
        }
        if self.size() > limit {
            return Err(Error::cap(
                "tabulated free algebra size",
                limit as u64,
                self.size() as u64,
            ));
        }
        FiniteAlgebra::tabulate(self, Some(self.label.clone()))
    }

    fn compute(&self, op: usize, args: &[Elem], out: &mut Tuple) {
        out.clear();
        let mut buf: SmallVec<[Elem; 4]> = SmallVec::new();
        for (c, coord) in self.coordinates.iter().enumerate() {
            buf.clear();
            buf.extend(args.iter().map(|&a| self.data[a as usize * self.width + c]));
            out.push(coord.algebra.apply(op, &buf));
        }
    }
}

impl Algebra for FreeAlgebra {
    fn signature(&self) -> &Signature {
        &self.signature
    }

    fn size(&self) -> usize {
        self.data.len() / self.width
    }

    fn apply(&self, op: usize, args: &[Elem]) -> Elem {
        if let Some(t) = &self.table {
            return t.apply(op, args);
        }
        let mut out = Tuple::new();
        self.compute(op, args, &mut out);
        self.index
            .get(&out)
            .expect("free algebra is closed under the operations")
    }

    fn label(&self) -> Option<&str> {
        Some(&self.label)
    }
}

struct Candidate {
    generator: usize,
    assignment: Vec<Elem>,
    algebra: FiniteAlgebra,
    inclusion: Vec<Elem>,
    gens: Vec<Elem>,
}

/// Pointed subalgebras `Sg^B(a)` for every generator `B` and `a ∈ B^k`; keeps
/// one representative per class of those that are not homomorphic images of
/// a larger kept one.
fn reduce_coordinates(spec: &VarietySpec, k: usize) -> Result<(Vec<Coordinate>, Vec<Evaluation>)> {
    let mut cands = Vec::new();
    for (j, b) in spec.generators().iter().enumerate() {
        let count = b.size().checked_pow(k as u32).unwrap_or(usize::MAX);
        if count > ASSIGNMENT_LIMIT {
            return Err(Error::cap(
                "generator assignments",
                ASSIGNMENT_LIMIT as u64,
                count as u64,
            ));
        }
        let mut err = None;
        for_each_tuple(b.size(), k, |a| {
            if err.is_some() {
                return;
            }
            match subalgebra_generated(b, a) {
                Ok(sub) => {
                    let pos = |x: Elem| {
                        sub.universe
                            .binary_search(&x)
                            .expect("generator in subuniverse") as Elem
                    };
                    cands.push(Candidate {
                        generator: j,
                        assignment: a.to_vec(),
                        gens: a.iter().map(|&x| pos(x)).collect(),
                        inclusion: sub.universe.clone(),
                        algebra: sub.algebra,
                    });
                }
                Err(e) => err = Some(e),
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
    }
    // larger pointed algebras first; the sort is stable so ties keep input order
    let mut order: Vec<usize> = (0..cands.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(cands[i].algebra.size()));
    let mut kept: Vec<Coordinate> = Vec::new();
    let mut evals: Vec<Option<Evaluation>> = vec![None; cands.len()];
    for &i in &order {
        let cand = &cands[i];
        let mut found = None;
        for (c, coord) in kept.iter().enumerate() {
            if coord.algebra.size() < cand.algebra.size() {
                break;
            }
            if let Some(h) = extend(&coord.algebra, &coord.gens, &cand.algebra, &cand.gens)? {
                found = Some((c, h));
                break;
            }
        }
        let (c, local) = match found {
            Some((c, h)) => (c, h.map),
            None => {
                kept.push(Coordinate {
                    generator: cand.generator,
                    assignment: cand.assignment.clone(),
                    algebra: cand.algebra.clone(),
                    inclusion: cand.inclusion.clone(),
                    gens: cand.gens.clone(),
                });
                (kept.len() - 1, (0..cand.algebra.size() as Elem).collect())
            }
        };
        evals[i] = Some(Evaluation {
            generator: cand.generator,
            assignment: cand.assignment.clone(),
            coordinate: c,
            map: local.iter().map(|&x| cand.inclusion[x as usize]).collect(),
        });
    }
    Ok((
        kept,
        evals
            .into_iter()
            .map(|e| e.expect("every candidate evaluated"))
            .collect(),
    ))
}

/// Free algebra of rank `k` within the spec's caps, with a fresh deadline.
pub fn free_algebra(spec: &VarietySpec, k: usize) -> Result<FreeAlgebra> {
    free_algebra_until(spec, k, Some(spec.caps.deadline()))
}

/// Free algebra of rank `k`, giving up at `deadline`.
pub fn free_algebra_until(
    spec: &VarietySpec,
    k: usize,
    deadline: Option<Instant>,
) -> Result<FreeAlgebra> {
    if k > spec.caps.rank_max {
        return Err(Error::cap("rank", spec.caps.rank_max as u64, k as u64));
    }
    let size_max = spec.caps.size_max;
    let (coordinates, evaluations) = reduce_coordinates(spec, k)?;
    // every generator contributes a candidate, so at least one is kept
    let width = coordinates.len();
    let sig = spec.signature().clone();

    let sizes: Vec<usize> = coordinates.iter().map(|c| c.algebra.size()).collect();
    let mut data: Vec<Elem> = Vec::new();
    let mut index = TupleIndex::new(&sizes);
    let insert = |t: &[Elem], data: &mut Vec<Elem>, index: &mut TupleIndex| -> Result<Elem> {
        if let Some(e) = index.get(t) {
            return Ok(e);
        }
        let e = index.len();
        if e >= size_max {
            return Err(Error::cap("free algebra size", size_max as u64, e as u64));
        }
        index.insert(t, e as Elem);
        data.extend_from_slice(t);
        Ok(e as Elem)
    };
    for c in sig.constants() {
        let t: Tuple = coordinates
            .iter()
            .map(|co| co.algebra.constant(c))
            .collect();
        insert(&t, &mut data, &mut index)?;
    }
    let mut gen_elems = Vec::with_capacity(k);
    for i in 0..k {
        let t: Tuple = coordinates.iter().map(|co| co.gens[i]).collect();
        gen_elems.push(insert(&t, &mut data, &mut index)?);
    }
    if data.is_empty() {
        return Err(Error::EmptyGenerated);
    }

    let ops: Vec<(usize, usize)> = (0..sig.len())
        .map(|o| (o, sig.arity(o)))
        .filter(|&(_, a)| a > 0)
        .collect();
    let mut fresh: Vec<Elem> = Vec::new();
    let mut buf: SmallVec<[Elem; 4]> = SmallVec::new();
    let mut p = 0usize;
    while p < data.len() / width {
        for &(op, arity) in &ops {
            fresh.clear();
            for_each_new_tuple(p, arity, |idx| {
                for (c, coord) in coordinates.iter().enumerate() {
                    buf.clear();
                    buf.extend(idx.iter().map(|&i| data[i * width + c]));
                    fresh.push(coord.algebra.apply(op, &buf));
                }
            });
            for t in fresh.chunks(width) {
                insert(t, &mut data, &mut index)?;
            }
        }
        if p.is_multiple_of(64) {
            if let Some(d) = deadline {
                if Instant::now() > d {
                    return Err(Error::timeout(
                        "free algebra elements",
                        (data.len() / width) as u64,
                    ));
                }
            }
        }
        p += 1;
    }

    // re-index in lexicographic tuple order
    let n = data.len() / width;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| data[a * width..(a + 1) * width].cmp(&data[b * width..(b + 1) * width]));
    let mut rank_of = vec![0 as Elem; n];
    for (new, &old) in order.iter().enumerate() {
        rank_of[old] = new as Elem;
    }
    let mut sorted = Vec::with_capacity(data.len());
    for &old in &order {
        sorted.extend_from_slice(&data[old * width..(old + 1) * width]);
    }
    let mut index = index.cleared();
    for e in 0..n {
        index.insert(&sorted[e * width..(e + 1) * width], e as Elem);
    }
    let generators = gen_elems.iter().map(|&g| rank_of[g as usize]).collect();
    let mut free = FreeAlgebra {
        signature: sig,
        rank: k,
        label: format!("F{}({k})", spec.label()),
        coordinates,
        evaluations,
        width,
        data: sorted,
        index,
        generators,
        table: None,
    };
    if free.size() <= TABULATE_LIMIT {
        free.table = Some(FiniteAlgebra::tabulate(&free, Some(free.label.clone()))?);
    }
    Ok(free)
}

/// Free algebras of increasing rank for one spec, built on demand and kept.
pub struct FreeTower<'a> {
    spec: &'a VarietySpec,
    deadline: Option<Instant>,
    levels: Vec<Option<Result<FreeAlgebra>>>,
}

impl<'a> FreeTower<'a> {
    pub fn new(spec: &'a VarietySpec, deadline: Option<Instant>) -> Self {
        FreeTower {
            spec,
            deadline,
            levels: Vec::new(),
        }
    }

    pub fn spec(&self) -> &VarietySpec {
        self.spec
    }

    pub fn deadline(&self) -> Option<Instant> {
        self.deadline
    }

    pub fn get(&mut self, k: usize) -> Result<&FreeAlgebra> {
        if self.levels.len() <= k {
            self.levels.resize_with(k + 1, || None);
        }
        if self.levels[k].is_none() {
            self.levels[k] = Some(free_algebra_until(self.spec, k, self.deadline));
        }
        self.levels[k]
            .as_ref()
            .expect("just built")
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Sizes of the free algebras built so far, indexed by rank (`None` for
    /// ranks not built or over the caps).
    pub fn sizes(&self) -> Vec<Option<usize>> {
        self.levels
            .iter()
            .map(|l| l.as_ref().and_then(|r| r.as_ref().ok()).map(|f| f.size()))
            .collect()
    }
}
