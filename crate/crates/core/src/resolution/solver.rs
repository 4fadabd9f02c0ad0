//! Weight-aware preimage solving against the differential of one cell.
//!
//! Chain-map lifting repeatedly solves `d(y) = target` inside a bidegree
//! slice. Rows (the differentials of the F_f basis pairs at degree t) are
//! fed into an incremental echelon in ascending weight order; a solution for
//! a weight-w target is only valid if its combination uses rows alive at w
//! (tau powers must stay nonnegative). The canonical solve is checked for
//! that and falls back to a fresh elimination over the eligible prefix when
//! the check fails, so answers are exact for any query order.
//!
//! Kernel combinations discovered along the way are kept: a perturbed solve
//! strategy adds a seed-selected subset of them to the particular solution,
//! which exercises independence of downstream constructions from preimage
//! choices.

use std::collections::HashMap;

use super::{GenId, ModuleElement, Resolution, SlicePair, Term};
use crate::f2::{BitVector, Inserted, Solver};
use crate::hopf::MonoId;

/// Preimage choice strategy for `d(y) = target` solves.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SolveStrategy {
    /// Deterministic echelon back-substitution.
    Canonical,
    /// Canonical plus a seed-selected element of the kernel.
    Perturbed(u64),
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

pub struct CellSolver {
    f: u32,
    t: u32,
    src: Vec<SlicePair>,
    /// Indices into `src`, ascending weight (stable).
    order: Vec<usize>,
    tgt: Vec<SlicePair>,
    tgt_index: HashMap<(GenId, MonoId), usize>,
    /// Expanded rows in `order` sequence, cached for fallback solves.
    rows: Vec<BitVector>,
    solver: Solver,
    fed: usize,
    /// Kernel combinations over `order`-indices, tagged with entry weight.
    kernels: Vec<(i64, BitVector)>,
}

impl CellSolver {
    pub fn new(res: &Resolution, f: u32, t: u32) -> CellSolver {
        assert!(f >= 1);
        let src = res.slice_pairs(f, t);
        let tgt = res.slice_pairs(f - 1, t);
        let tgt_index = tgt
            .iter()
            .enumerate()
            .map(|(i, p)| ((p.gen, p.mono), i))
            .collect();
        let mut order: Vec<usize> = (0..src.len()).collect();
        order.sort_by_key(|&i| (src[i].weight, i));
        let capacity = src.len();
        CellSolver {
            f,
            t,
            src,
            order,
            tgt,
            tgt_index,
            rows: Vec::new(),
            solver: Solver::new(0, capacity),
            fed: 0,
            kernels: Vec::new(),
        }
    }

    fn ensure_solver_width(&mut self) {
        if self.rows.is_empty() && self.fed == 0 {
            self.solver = Solver::new(self.tgt.len(), self.src.len());
        }
    }

    pub fn approx_bytes(&self) -> usize {
        let width = self.tgt.len() + self.src.len();
        (self.rows.len() * width) / 8 + self.src.len() * 24 + self.tgt.len() * 24
    }

    fn feed_to(&mut self, res: &Resolution, w: i64) {
        self.ensure_solver_width();
        while self.fed < self.order.len() {
            let idx = self.order[self.fed];
            if self.src[idx].weight > w {
                break;
            }
            let row = res.expand_pair_public(&self.src[idx], &self.tgt_index, self.tgt.len());
            self.rows.push(row.clone());
            if let Inserted::Dependent(combo) = self.solver.insert(row) {
                self.kernels.push((self.src[idx].weight, combo));
            }
            self.fed += 1;
        }
    }

    /// Converts a module element of `F_{f-1}` at degree t into the canonical
    /// target-pair bit vector.
    pub fn element_to_target(&self, elem: &ModuleElement) -> BitVector {
        let mut v = BitVector::zeros(self.tgt.len());
        for term in &elem.terms {
            let i = *self
                .tgt_index
                .get(&(term.gen, term.mono))
                .unwrap_or_else(|| panic!("term outside slice at ({}, {})", self.f, self.t));
            v.flip(i);
        }
        v
    }

    /// Solves `d(y) = target` with `y` in the weight-w slice of `F_f` at
    /// degree t. Returns `None` when the target is not in the image.
    pub fn solve(
        &mut self,
        res: &Resolution,
        target: &ModuleElement,
        w: i64,
        strategy: SolveStrategy,
    ) -> Option<ModuleElement> {
        debug_assert_eq!(target.t, self.t);
        self.feed_to(res, w);
        let tv = self.element_to_target(target);
        let mut combo = match self.solver.solve(&tv) {
            Some(c) if self.combo_eligible(&c, w) => c,
            _ => self.restricted_solve(&tv, w)?,
        };
        if let SolveStrategy::Perturbed(seed) = strategy {
            let cell_salt = ((self.f as u64) << 32) ^ self.t as u64;
            for (k, (kw, kv)) in self.kernels.iter().enumerate() {
                if *kw <= w && splitmix(seed ^ cell_salt ^ k as u64) & 1 == 1 {
                    combo.xor_assign(kv);
                }
            }
        }
        Some(self.combo_to_element(&combo, w))
    }

    fn combo_eligible(&self, combo: &BitVector, w: i64) -> bool {
        combo.ones().all(|i| self.src[self.order[i]].weight <= w)
    }

    /// Fresh elimination over the rows alive at weight w only.
    fn restricted_solve(&self, tv: &BitVector, w: i64) -> Option<BitVector> {
        let alive = self
            .order
            .iter()
            .take_while(|&&i| self.src[i].weight <= w)
            .count();
        let mut solver = Solver::new(self.tgt.len(), alive);
        for row in &self.rows[..alive] {
            solver.insert(row.clone());
        }
        let small = solver.solve(tv)?;
        let mut combo = BitVector::zeros(self.src.len().max(alive));
        for i in small.ones() {
            combo.set(i, true);
        }
        Some(combo)
    }

    fn combo_to_element(&self, combo: &BitVector, w: i64) -> ModuleElement {
        let mut elem = ModuleElement::zero(self.t, w);
        for i in combo.ones() {
            let p = &self.src[self.order[i]];
            let tau = w - p.weight;
            debug_assert!(tau >= 0, "ineligible row in solution");
            elem.terms.push(Term {
                gen: p.gen,
                mono: p.mono,
                tau: tau as u32,
            });
        }
        elem.terms.sort_unstable();
        elem
    }
}

/// LRU cache of cell solvers, keyed by (f, t). Rebuilding a solver is just
/// redoing its elimination, so eviction is purely a memory/time trade.
pub struct SolverCache {
    cells: HashMap<(u32, u32), CellSolver>,
    lru: Vec<(u32, u32)>,
    budget_bytes: usize,
}

impl SolverCache {
    pub fn new(budget_bytes: usize) -> SolverCache {
        SolverCache {
            cells: HashMap::new(),
            lru: Vec::new(),
            budget_bytes,
        }
    }

    pub fn clear(&mut self) {
        self.cells.clear();
        self.lru.clear();
    }

    pub fn with_cell<R>(
        &mut self,
        res: &Resolution,
        f: u32,
        t: u32,
        op: impl FnOnce(&mut CellSolver, &Resolution) -> R,
    ) -> R {
        let key = (f, t);
        if !self.cells.contains_key(&key) {
            self.cells.insert(key, CellSolver::new(res, f, t));
        }
        self.lru.retain(|k| *k != key);
        self.lru.push(key);
        let result = {
            let cell = self.cells.get_mut(&key).unwrap();
            op(cell, res)
        };
        self.evict();
        result
    }

    fn evict(&mut self) {
        let mut total: usize = self.cells.values().map(|c| c.approx_bytes()).sum();
        while total > self.budget_bytes && self.lru.len() > 1 {
            let key = self.lru.remove(0);
            if let Some(cell) = self.cells.remove(&key) {
                total -= cell.approx_bytes();
            }
        }
    }
}

impl Default for SolverCache {
    fn default() -> Self {
        // Generous but bounded; rebuilds are deterministic either way.
        SolverCache::new(1_500_000_000)
    }
}
