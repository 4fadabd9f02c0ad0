//! Free resolutions of the ground module over a profile algebra.
//!
//! The resolution `.. -> F_2 -> F_1 -> F_0 -> M2 -> 0` is built degreewise:
//! one cell per (filtration f, internal degree t), processed in column order
//! (t ascending, f ascending within t). Within a cell the weight filtration
//! is swept upward: the basis of a bidegree slice of a free module consists
//! of pairs `tau^c dual(m) g` with `c` determined by the slice weight, so the
//! slice at weight w is spanned by the pairs with `w(m) + w(g) <= w`, and one
//! incremental elimination per cell serves every slice.
//!
//! New generators are added exactly when the kernel of the previous
//! differential is not yet covered by the image, per slice; the chosen
//! differential of a new generator is the canonical echelon remainder of the
//! uncovered kernel vector. Correctness of the extracted Ext groups does not
//! depend on minimality: Ext is computed as homology of the dual complex.
//!
//! Everything is deterministic. Generator identity is the content-addressed
//! tuple `(f, t, w, idx)`, so a resumed computation produces bit-identical
//! output to an uninterrupted one.

mod checkpoint;
mod ext;
mod solver;

pub use checkpoint::{checkpoint_load, checkpoint_save, CheckpointError};
pub use ext::{ExtGroup, ExtTable};
pub use solver::{CellSolver, SolveStrategy, SolverCache};

use std::collections::BTreeMap;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::f2::{BitVector, EchelonSpace, Inserted, Solver};
use crate::hopf::{Algebra, MonoId};

/// Stable identifier of a resolution generator: homological filtration,
/// internal degree, weight, and index within that tridegree cell.
///
/// The corresponding Ext generator sits at `(s, f, w) = (t - f, f, w)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct GenId {
    pub f: u32,
    pub t: u32,
    pub w: i32,
    pub idx: u32,
}

impl GenId {
    pub fn stem(&self) -> i64 {
        self.t as i64 - self.f as i64
    }
}

impl fmt::Display for GenId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g[{},{},{},{}]", self.f, self.t, self.w, self.idx)
    }
}

/// One term `tau^tau * dual(mono) * gen` of a free-module element.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Term {
    pub gen: GenId,
    pub mono: MonoId,
    pub tau: u32,
}

/// A homogeneous element of a free module, of bidegree `(t, w)` with the
/// operation-side weight convention (`tau` raises w by 1, `dual(m)` by
/// `w(m)`).
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ModuleElement {
    pub t: u32,
    pub w: i64,
    pub terms: Vec<Term>,
}

impl ModuleElement {
    pub fn zero(t: u32, w: i64) -> ModuleElement {
        ModuleElement {
            t,
            w,
            terms: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn normalize(&mut self) {
        self.terms.sort_unstable();
        let mut out: Vec<Term> = Vec::with_capacity(self.terms.len());
        for t in self.terms.drain(..) {
            if out.last() == Some(&t) {
                out.pop();
            } else {
                out.push(t);
            }
        }
        self.terms = out;
    }

    pub fn add_assign(&mut self, other: &ModuleElement) {
        assert_eq!((self.t, self.w), (other.t, other.w), "inhomogeneous sum");
        self.terms.extend_from_slice(&other.terms);
        self.normalize();
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ResolutionError {
    #[error("requested region needs internal degree {needed} but the profile degree cap is {cap}")]
    DegreeCapExceeded { needed: u32, cap: u32 },
    #[error("resolution not completed at filtration {f}, internal degree {t}")]
    Incomplete { f: u32, t: u32 },
}

/// A generator of the resolution, together with its differential (an element
/// of the previous free module).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GenRec {
    pub id: GenId,
    pub diff: ModuleElement,
}

/// One basis pair `tau^c dual(mono) gen` of a bidegree slice; `weight` is
/// `w(mono) + w(gen)`, the slice weight at which the pair becomes alive.
#[derive(Clone, Copy, Debug)]
pub struct SlicePair {
    pub gen: GenId,
    pub mono: MonoId,
    pub weight: i64,
}

pub struct Resolution {
    algebra: Arc<Algebra>,
    /// Completed cells: (f, t) -> generators in creation (w, idx) order.
    cells: BTreeMap<(u32, u32), Vec<GenRec>>,
    /// frontier[f] = largest t with every cell (f, t') for t' <= t complete.
    frontier: Vec<i64>,
}

impl Resolution {
    /// A fresh resolution: `F_0` is free on one generator mapping onto the
    /// ground module.
    pub fn new(algebra: Arc<Algebra>) -> Resolution {
        let g0 = GenRec {
            id: GenId {
                f: 0,
                t: 0,
                w: 0,
                idx: 0,
            },
            diff: ModuleElement::zero(0, 0),
        };
        let mut cells = BTreeMap::new();
        cells.insert((0, 0), vec![g0]);
        Resolution {
            algebra,
            cells,
            frontier: vec![i64::MAX],
        }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    /// Largest t through which filtration `f` is complete (`-1` if the row
    /// has not started; `F_0` is complete everywhere).
    pub fn frontier(&self, f: u32) -> i64 {
        if f == 0 {
            return i64::MAX;
        }
        self.frontier.get(f as usize).copied().unwrap_or(-1)
    }

    pub fn is_complete(&self, f: u32, t: u32) -> bool {
        self.frontier(f) >= t as i64
    }

    pub fn gens_at(&self, f: u32, t: u32) -> &[GenRec] {
        self.cells.get(&(f, t)).map_or(&[], |v| v.as_slice())
    }

    pub fn gen_count(&self) -> usize {
        self.cells.values().map(|v| v.len()).sum()
    }

    pub fn diff(&self, id: GenId) -> &ModuleElement {
        let cell = self
            .cells
            .get(&(id.f, id.t))
            .unwrap_or_else(|| panic!("no cell for {id}"));
        let pos = cell
            .iter()
            .position(|g| g.id == id)
            .unwrap_or_else(|| panic!("generator {id} not found in its cell"));
        &cell[pos].diff
    }

    /// All generators of filtration `f` with `t <= t_max`, in canonical
    /// (t, w, idx) order.
    pub fn gens_through(&self, f: u32, t_max: u32) -> Vec<GenId> {
        let mut out = Vec::new();
        for t in 0..=t_max {
            for g in self.gens_at(f, t) {
                out.push(g.id);
            }
        }
        out
    }

    /// Canonical basis pairs of the degree-`t` part of `F_f`, sorted by
    /// (generator, monomial). This indexes the columns of every slice matrix
    /// at (f, t).
    pub fn slice_pairs(&self, f: u32, t: u32) -> Vec<SlicePair> {
        let mut out = Vec::new();
        for tg in 0..=t {
            let gens = self.gens_at(f, tg);
            if gens.is_empty() {
                continue;
            }
            let dm = t - tg;
            for g in gens {
                for mono in self.algebra.ids_of_degree(dm) {
                    let (_, wm) = self.algebra.bidegree(mono);
                    out.push(SlicePair {
                        gen: g.id,
                        mono,
                        weight: wm as i64 + g.id.w as i64,
                    });
                }
            }
        }
        out.sort_by_key(|p| (p.gen, p.mono));
        out
    }

    /// The differential of the pair `dual(mono) * gen`, as a bit vector over
    /// the canonical target pairs indexed by `col_index`.
    fn expand_pair(
        &self,
        pair: &SlicePair,
        col_index: &HashMap<(GenId, MonoId), usize>,
        width: usize,
    ) -> BitVector {
        let mut v = BitVector::zeros(width);
        let diff = self.diff(pair.gen);
        let dm = self.algebra.bidegree(pair.mono).0;
        for term in &diff.terms {
            let dj = self.algebra.bidegree(term.mono).0;
            let table = self.algebra.split_table(dm, dj);
            if let Some(products) = table.get(&(pair.mono, term.mono)) {
                for &(m2, _) in products {
                    let col = col_index[&(term.gen, m2)];
                    v.flip(col);
                }
            }
        }
        v
    }

    /// Differential of a basis pair over indexed target pairs; exposed for
    /// the slice solver.
    pub(crate) fn expand_pair_public(
        &self,
        pair: &SlicePair,
        col_index: &HashMap<(GenId, MonoId), usize>,
        width: usize,
    ) -> BitVector {
        self.expand_pair(pair, col_index, width)
    }

    /// Applies the differential to a module element of filtration `f >= 1`.
    pub fn apply_diff(&self, elem: &ModuleElement) -> ModuleElement {
        let mut acc: HashMap<(GenId, MonoId), bool> = HashMap::new();
        for term in &elem.terms {
            let diff = self.diff(term.gen);
            let dm = self.algebra.bidegree(term.mono).0;
            for t2 in &diff.terms {
                let dj = self.algebra.bidegree(t2.mono).0;
                let table = self.algebra.split_table(dm, dj);
                if let Some(products) = table.get(&(term.mono, t2.mono)) {
                    for &(m2, _) in products {
                        *acc.entry((t2.gen, m2)).or_insert(false) ^= true;
                    }
                }
            }
        }
        self.collect_element(acc, elem.t, elem.w)
    }

    /// `tau^c dual(mono) * elem`.
    pub fn act(&self, mono: MonoId, c: u32, elem: &ModuleElement) -> ModuleElement {
        let (dm, wm) = self.algebra.bidegree(mono);
        let w = elem.w + wm as i64 + c as i64;
        let t = elem.t + dm;
        let mut acc: HashMap<(GenId, MonoId), bool> = HashMap::new();
        for term in &elem.terms {
            let dj = self.algebra.bidegree(term.mono).0;
            let table = self.algebra.split_table(dm, dj);
            if let Some(products) = table.get(&(mono, term.mono)) {
                for &(m2, _) in products {
                    *acc.entry((term.gen, m2)).or_insert(false) ^= true;
                }
            }
        }
        self.collect_element(acc, t, w)
    }

    fn collect_element(
        &self,
        acc: HashMap<(GenId, MonoId), bool>,
        t: u32,
        w: i64,
    ) -> ModuleElement {
        let mut out = ModuleElement::zero(t, w);
        for ((gen, mono), odd) in acc {
            if odd {
                let (_, wm) = self.algebra.bidegree(mono);
                let tau = w - wm as i64 - gen.w as i64;
                debug_assert!(tau >= 0, "negative tau power in module element");
                out.terms.push(Term {
                    gen,
                    mono,
                    tau: tau as u32,
                });
            }
        }
        out.normalize();
        out
    }

    /// Extends the resolution so that every filtration `1..=max_f` is
    /// complete through internal degree `max_stem + max_f`. Cells already
    /// complete are skipped; output is bit-identical to an uninterrupted
    /// run with the same final bounds.
    pub fn extend(&mut self, max_stem: u32, max_f: u32) -> Result<(), ResolutionError> {
        let t_max = max_stem + max_f;
        let cap = self.algebra.profile().degree_cap;
        // Finite profiles contain every monomial they ever will; only a
        // cap-truncated algebra (full A) can run out of operations.
        if self.algebra.profile().is_cap_limited() && t_max > cap {
            return Err(ResolutionError::DegreeCapExceeded { needed: t_max, cap });
        }
        if self.frontier.len() <= max_f as usize {
            self.frontier.resize(max_f as usize + 1, -1);
        }
        for t in 1..=t_max {
            for f in 1..=max_f.min(t) {
                if self.frontier[f as usize] >= t as i64 {
                    continue;
                }
                self.process_cell(f, t);
                self.frontier[f as usize] = t as i64;
            }
        }
        Ok(())
    }

    fn process_cell(&mut self, f: u32, t: u32) {
        debug_assert!(f >= 1 && t >= f);
        // Target slice of d_{f-1}: F_{f-2} at degree t, or the ground module
        // (zero above degree 0) for f = 1.
        let (tgt_width, tgt_index) = if f >= 2 {
            let tgt = self.slice_pairs(f - 2, t);
            let index: HashMap<(GenId, MonoId), usize> = tgt
                .iter()
                .enumerate()
                .map(|(i, p)| ((p.gen, p.mono), i))
                .collect();
            (tgt.len(), index)
        } else {
            (0, HashMap::new())
        };

        let src = self.slice_pairs(f - 1, t);
        let src_index: HashMap<(GenId, MonoId), usize> = src
            .iter()
            .enumerate()
            .map(|(i, p)| ((p.gen, p.mono), i))
            .collect();
        let img_src = self.slice_pairs(f, t);

        // Weight-sorted processing order (stable within equal weights, so
        // ties follow the canonical column order).
        let mut src_order: Vec<usize> = (0..src.len()).collect();
        src_order.sort_by_key(|&i| (src[i].weight, i));
        let mut img_order: Vec<usize> = (0..img_src.len()).collect();
        img_order.sort_by_key(|&i| (img_src[i].weight, i));

        let mut kernel = Solver::new(tgt_width, src.len());
        let mut image = EchelonSpace::new(src.len());
        let mut new_gens: Vec<GenRec> = Vec::new();

        let mut si = 0usize;
        let mut ii = 0usize;
        let weights: Vec<i64> = {
            let mut ws: Vec<i64> = src_order
                .iter()
                .map(|&i| src[i].weight)
                .chain(img_order.iter().map(|&i| img_src[i].weight))
                .collect();
            ws.sort_unstable();
            ws.dedup();
            ws
        };

        for &w in &weights {
            // Image rows of this weight first: coverage at weight w must see
            // everything alive at w.
            while ii < img_order.len() && img_src[img_order[ii]].weight == w {
                let p = &img_src[img_order[ii]];
                let row = self.expand_pair(p, &src_index, src.len());
                image.insert(row);
                ii += 1;
            }
            let mut pending: Vec<BitVector> = Vec::new();
            while si < src_order.len() && src[src_order[si]].weight == w {
                let p = &src[src_order[si]];
                let row = if f >= 2 {
                    self.expand_pair(p, &tgt_index, tgt_width)
                } else {
                    // Augmentation: every pair at t >= 1 is a cycle.
                    BitVector::zeros(0)
                };
                if let Inserted::Dependent(combo) = kernel.insert(row) {
                    // Remap the combination (insertion order) to canonical
                    // column indexing over the source pairs.
                    let mut vec = BitVector::zeros(src.len());
                    for i in combo.ones() {
                        vec.set(src_order[i], true);
                    }
                    pending.push(vec);
                }
                si += 1;
            }
            let mut idx_at_w: u32 = 0;
            for v in pending {
                let r = image.reduce(v);
                if r.is_zero() {
                    continue;
                }
                let id = GenId {
                    f,
                    t,
                    w: i32::try_from(w).expect("weight out of range"),
                    idx: idx_at_w,
                };
                idx_at_w += 1;
                let diff = self.vector_to_element(&src, &r, t, w);
                image.insert(r);
                new_gens.push(GenRec { id, diff });
            }
        }

        if !new_gens.is_empty() {
            self.cells.insert((f, t), new_gens);
        }
    }

    fn vector_to_element(&self, src: &[SlicePair], v: &BitVector, t: u32, w: i64) -> ModuleElement {
        let mut out = ModuleElement::zero(t, w);
        for i in v.ones() {
            let p = &src[i];
            let tau = w - p.weight;
            debug_assert!(tau >= 0);
            out.terms.push(Term {
                gen: p.gen,
                mono: p.mono,
                tau: tau as u32,
            });
        }
        out.normalize();
        out
    }

    /// The unit-coefficient matrix of `d` at (f, t): for each generator of
    /// (f, t), the generators of (f-1, t) hit by a unit-monomial term of its
    /// differential (with the forced tau power). This is the matrix of the
    /// dual (Ext) differential.
    pub fn unit_matrix(&self, f: u32, t: u32) -> Vec<(GenId, Vec<GenId>)> {
        let unit = self.algebra.unit();
        self.gens_at(f, t)
            .iter()
            .map(|g| {
                let targets = g
                    .diff
                    .terms
                    .iter()
                    .filter(|term| term.mono == unit)
                    .map(|term| term.gen)
                    .collect();
                (g.id, targets)
            })
            .collect()
    }

    /// Structural equality, used by determinism and checkpoint tests.
    pub fn same_as(&self, other: &Resolution) -> bool {
        self.algebra.profile() == other.algebra.profile()
            && self.cells == other.cells
            && self.frontier == other.frontier
    }

    /// Read-only view of all completed cells.
    pub fn cells(&self) -> &BTreeMap<(u32, u32), Vec<GenRec>> {
        &self.cells
    }

    pub(crate) fn from_parts(
        algebra: Arc<Algebra>,
        cells: BTreeMap<(u32, u32), Vec<GenRec>>,
        frontier: Vec<i64>,
    ) -> Resolution {
        Resolution {
            algebra,
            cells,
            frontier,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::MotivicProfile;

    pub(crate) fn resolve(preset: &str, cap: u32, stem: u32, f: u32) -> Resolution {
        let alg = Algebra::new(MotivicProfile::preset(preset, cap).unwrap());
        let mut res = Resolution::new(alg);
        res.extend(stem, f).unwrap();
        res
    }

    #[test]
    fn h0_tower_over_b() {
        let res = resolve("B", 38, 0, 3);
        for f in 1..=3u32 {
            let stem0: Vec<_> = res
                .gens_at(f, f)
                .iter()
                .map(|g| (g.id.stem(), g.id.f, g.id.w))
                .collect();
            assert_eq!(stem0, vec![(0, f, 0)], "h_0 tower at filtration {f}");
        }
    }

    #[test]
    fn exterior_tau3_is_polynomial_on_v3() {
        // Over E(tau_3), exactly one generator in each filtration f, at
        // (s, f, w) = (14f, f, 7f).
        let res = resolve("E-tau3", 60, 42, 3);
        for f in 1..=3u32 {
            let mut found = Vec::new();
            for t in f..=(42 + 3) {
                for g in res.gens_at(f, t) {
                    found.push((g.id.stem(), g.id.f, g.id.w));
                }
            }
            assert_eq!(found, vec![(14 * f as i64, f, 7 * f as i32)]);
        }
    }

    #[test]
    fn d_squared_is_zero_everywhere() {
        let res = resolve("B", 38, 10, 5);
        for (&(f, _), gens) in res.cells() {
            if f < 2 {
                continue;
            }
            for g in gens {
                let dd = res.apply_diff(&g.diff);
                assert!(dd.is_zero(), "d.d != 0 at {}", g.id);
            }
        }
    }

    #[test]
    fn extension_is_deterministic_and_resumable() {
        let a = resolve("B", 38, 12, 4);
        let b = resolve("B", 38, 12, 4);
        assert!(a.same_as(&b));

        // Resume from a smaller region.
        let mut c = resolve("B", 38, 6, 4);
        c.extend(12, 4).unwrap();
        assert!(a.same_as(&c));

        // Growing f afterwards also matches.
        let mut d = resolve("B", 38, 12, 2);
        d.extend(12, 4).unwrap();
        assert!(a.same_as(&d));
    }

    #[test]
    fn degree_cap_is_enforced() {
        let alg = Algebra::new(MotivicProfile::preset("A", 10).unwrap());
        let mut res = Resolution::new(alg);
        match res.extend(20, 3) {
            Err(ResolutionError::DegreeCapExceeded { needed: 23, cap: 10 }) => {}
            other => panic!("expected cap error, got {other:?}"),
        }
    }
}
