//! The reduced cobar complex: an independent brute-force oracle for Ext
//! dimensions.
//!
//! `C^f` is the f-fold tensor power of the augmentation coideal of the dual
//! algebra over `M2`; the differential inserts reduced coproducts. In the
//! weight-w slice of internal degree t, the basis is the set of monomial
//! tuples `[m_1 | .. | m_f]` of total degree t and total weight `>= w` (the
//! deficit is a tau power), and the slice at weight w contains the slice at
//! w + 1, so one elimination per (f, t) with rows fed in descending weight
//! order yields the ranks of every slice at once.
//!
//! Tuple counts grow combinatorially with f and t. Cells whose elimination
//! would exceed the budget are skipped and reported, never silently wrong;
//! dimensions touching a skipped cell come back as `None`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::f2::{BitVector, EchelonSpace};
use crate::hopf::Algebra;

#[derive(Clone, Copy, Debug)]
pub struct CobarBudget {
    /// Upper bound on estimated elimination word operations per cell.
    pub max_ops: u64,
    /// Upper bound on estimated retained echelon bits per cell.
    pub max_bits: u64,
}

impl Default for CobarBudget {
    fn default() -> Self {
        CobarBudget {
            max_ops: 4_000_000_000,
            max_bits: 6_000_000_000,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SkippedCell {
    pub f: u32,
    pub t: u32,
    pub rows: u64,
    pub cols: u64,
}

/// Rank of a differential as a step function of the weight cutoff: pivots
/// tagged with the weight of the row that created them.
struct RankSteps {
    /// Pivot row weights, sorted descending.
    pivot_weights: Vec<i64>,
}

impl RankSteps {
    fn rank_at(&self, w: i64) -> usize {
        self.pivot_weights.partition_point(|&pw| pw >= w)
    }
}

struct CellDims {
    /// Tuple weights sorted descending.
    weights: Vec<i64>,
}

impl CellDims {
    fn dim_at(&self, w: i64) -> usize {
        self.weights.partition_point(|&tw| tw >= w)
    }
}

/// Per-tridegree homology dimensions of the reduced cobar complex.
pub struct CobarTable {
    f_max: u32,
    t_max: u32,
    dims: BTreeMap<(u32, u32), CellDims>,
    ranks: BTreeMap<(u32, u32), RankSteps>,
    skipped: Vec<SkippedCell>,
}

impl CobarTable {
    pub fn skipped(&self) -> &[SkippedCell] {
        &self.skipped
    }

    pub fn f_max(&self) -> u32 {
        self.f_max
    }

    pub fn t_max(&self) -> u32 {
        self.t_max
    }

    fn rank_available(&self, f: u32, t: u32) -> bool {
        f == 0 || self.ranks.contains_key(&(f, t)) || !self.skipped.iter().any(|s| (s.f, s.t) == (f, t))
    }

    /// Homology dimension at filtration f, internal degree t, weight w, or
    /// `None` if a contributing cell was skipped for resources.
    pub fn dim(&self, f: u32, t: u32, w: i64) -> Option<usize> {
        assert!(f <= self.f_max && t <= self.t_max, "outside computed region");
        if f == 0 {
            return Some(usize::from(t == 0 && w <= 0));
        }
        if !self.rank_available(f, t) || !self.rank_available(f - 1, t) {
            return None;
        }
        let c = self.dims.get(&(f, t)).map_or(0, |d| d.dim_at(w));
        let r_out = self.ranks.get(&(f, t)).map_or(0, |r| r.rank_at(w));
        let r_in = if f == 1 {
            0
        } else {
            self.ranks.get(&(f - 1, t)).map_or(0, |r| r.rank_at(w))
        };
        Some(c - r_out - r_in)
    }

    /// Dimension indexed by stem like the resolution tables.
    pub fn dim_stem(&self, s: i64, f: u32, w: i64) -> Option<usize> {
        let t = s + f as i64;
        if t < 0 {
            return Some(0);
        }
        self.dim(f, t as u32, w)
    }
}

/// Enumerates the degree-t basis tuples of the f-fold coideal power,
/// lexicographically by monomial id. Returns a flat array of stride f plus
/// the weight of each tuple.
fn enumerate_tuples(algebra: &Algebra, f: u32, t: u32) -> (Vec<u32>, Vec<i64>) {
    let mut flat = Vec::new();
    let mut weights = Vec::new();
    let mut stack: Vec<u32> = Vec::with_capacity(f as usize);
    fn rec(
        algebra: &Algebra,
        remaining_slots: u32,
        remaining_t: u32,
        stack: &mut Vec<u32>,
        flat: &mut Vec<u32>,
        weights: &mut Vec<i64>,
        weight_acc: i64,
    ) {
        if remaining_slots == 0 {
            if remaining_t == 0 {
                flat.extend_from_slice(stack);
                weights.push(weight_acc);
            }
            return;
        }
        // Each factor needs degree >= 1, and the rest need at least 1 each.
        let max_d = remaining_t.saturating_sub(remaining_slots - 1);
        for d in 1..=max_d {
            for id in algebra.ids_of_degree(d) {
                let (_, wm) = algebra.bidegree(id);
                stack.push(id);
                rec(
                    algebra,
                    remaining_slots - 1,
                    remaining_t - d,
                    stack,
                    flat,
                    weights,
                    weight_acc + wm as i64,
                );
                stack.pop();
            }
        }
    }
    rec(algebra, f, t, &mut stack, &mut flat, &mut weights, 0);
    (flat, weights)
}

/// Tuple counts by dynamic programming, for budgeting without enumeration.
fn count_tuples(algebra: &Algebra, f_max: u32, t_max: u32) -> Vec<Vec<u64>> {
    let mut counts_by_degree = vec![0u64; t_max as usize + 1];
    for (d, c) in counts_by_degree.iter_mut().enumerate().skip(1) {
        *c = algebra.ids_of_degree(d as u32).count() as u64;
    }
    let mut table = vec![vec![0u64; t_max as usize + 1]; f_max as usize + 1];
    table[0][0] = 1;
    for f in 1..=f_max as usize {
        for t in 1..=t_max as usize {
            let mut acc = 0u64;
            for d in 1..=t {
                if counts_by_degree[d] > 0 {
                    acc = acc.saturating_add(counts_by_degree[d] * table[f - 1][t - d]);
                }
            }
            table[f][t] = acc;
        }
    }
    table
}

/// Computes per-tridegree homology dimensions of the reduced cobar complex
/// of the profile, for `f <= f_max`, `t <= t_max`, within the budget.
pub fn cobar_ext_dims(
    algebra: &Arc<Algebra>,
    t_max: u32,
    f_max: u32,
    budget: &CobarBudget,
) -> CobarTable {
    assert!(
        !algebra.profile().is_cap_limited() || t_max <= algebra.profile().degree_cap,
        "cobar range exceeds the profile degree cap"
    );
    let counts = count_tuples(algebra, f_max + 1, t_max);
    let mut dims = BTreeMap::new();
    let mut ranks = BTreeMap::new();
    let mut skipped = Vec::new();

    for t in 1..=t_max {
        // Reuse the column tuples of step f as the row tuples of step f+1.
        let mut rows_cache: Option<(Vec<u32>, Vec<i64>)> = None;
        for f in 1..=f_max {
            let nrows = counts[f as usize][t as usize];
            let ncols = counts[f as usize + 1][t as usize];
            if nrows == 0 {
                rows_cache = None;
                continue;
            }
            // Cost model: full elimination touches about
            // rows * min(rows, cols) * cols/64 words and retains about
            // min(rows, cols) * cols bits.
            let r = nrows.min(ncols.max(1));
            let ops = nrows
                .saturating_mul(r)
                .saturating_mul(ncols / 64 + 1);
            let bits = r.saturating_mul(ncols.max(1));
            if ops > budget.max_ops || bits > budget.max_bits {
                skipped.push(SkippedCell {
                    f,
                    t,
                    rows: nrows,
                    cols: ncols,
                });
                rows_cache = None;
                continue;
            }

            let (row_flat, row_weights) = match rows_cache.take() {
                Some(x) => x,
                None => enumerate_tuples(algebra, f, t),
            };
            let (col_flat, col_weights) = enumerate_tuples(algebra, f + 1, t);
            let stride_in = f as usize;
            let stride_out = f as usize + 1;
            let col_index: HashMap<&[u32], u32> = col_flat
                .chunks_exact(stride_out)
                .enumerate()
                .map(|(i, c)| (c, i as u32))
                .collect();

            dims.entry((f, t)).or_insert_with(|| {
                let mut ws = row_weights.clone();
                ws.sort_unstable_by(|a, b| b.cmp(a));
                CellDims { weights: ws }
            });
            if f == f_max {
                let mut ws = col_weights.clone();
                ws.sort_unstable_by(|a, b| b.cmp(a));
                dims.entry((f + 1, t)).or_insert(CellDims { weights: ws });
            }

            // Rows in descending weight order; ties in tuple order.
            let n = row_weights.len();
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by_key(|&i| (std::cmp::Reverse(row_weights[i]), i));

            let mut ech = EchelonSpace::new(col_index.len());
            let mut pivot_weights = Vec::new();
            let mut scratch = Vec::with_capacity(stride_out);
            for &i in &order {
                let tuple = &row_flat[i * stride_in..(i + 1) * stride_in];
                let mut row = BitVector::zeros(col_index.len());
                for (pos, &m) in tuple.iter().enumerate() {
                    for &(a, b, _) in algebra.coproduct(m).iter() {
                        if a == algebra.unit() || b == algebra.unit() {
                            continue;
                        }
                        scratch.clear();
                        scratch.extend_from_slice(&tuple[..pos]);
                        scratch.push(a);
                        scratch.push(b);
                        scratch.extend_from_slice(&tuple[pos + 1..]);
                        let col = col_index[scratch.as_slice()];
                        row.flip(col as usize);
                    }
                }
                if ech.insert(row).is_some() {
                    pivot_weights.push(row_weights[i]);
                }
            }
            ranks.insert((f, t), RankSteps { pivot_weights });
            rows_cache = Some((col_flat, col_weights));
        }
    }

    CobarTable {
        f_max,
        t_max,
        dims,
        ranks,
        skipped,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::MotivicProfile;

    #[test]
    fn exterior_tau3_cobar_is_polynomial() {
        let alg = Algebra::new(MotivicProfile::preset("E-tau3", 64).unwrap());
        let table = cobar_ext_dims(&alg, 45, 3, &CobarBudget::default());
        assert!(table.skipped().is_empty());
        for f in 1..=3u32 {
            for t in f..=45 {
                for w in 0..=25i64 {
                    let expect = usize::from(t == 15 * f && w <= 7 * f as i64);
                    assert_eq!(
                        table.dim(f, t, w).unwrap(),
                        expect,
                        "E(tau_3) at f={f} t={t} w={w}"
                    );
                }
            }
        }
    }

    #[test]
    fn ground_module_at_f0() {
        let alg = Algebra::new(MotivicProfile::preset("B", 38).unwrap());
        let table = cobar_ext_dims(&alg, 6, 2, &CobarBudget::default());
        assert_eq!(table.dim(0, 0, 0), Some(1));
        assert_eq!(table.dim(0, 0, -4), Some(1));
        assert_eq!(table.dim(0, 0, 1), Some(0));
        assert_eq!(table.dim(0, 3, 0), Some(0));
    }

    #[test]
    fn b_cobar_low_degrees() {
        // h_0 at (f, t, w) = (1, 1, 0) and its tau multiples; h_1 at
        // (1, 2, 1); h_0-tower at t = f.
        let alg = Algebra::new(MotivicProfile::preset("B", 38).unwrap());
        let table = cobar_ext_dims(&alg, 10, 5, &CobarBudget::default());
        assert!(table.skipped().is_empty());
        assert_eq!(table.dim(1, 1, 0), Some(1));
        assert_eq!(table.dim(1, 1, 1), Some(0));
        assert_eq!(table.dim(1, 2, 1), Some(1));
        assert_eq!(table.dim(2, 2, 0), Some(1));
        assert_eq!(table.dim(3, 3, 0), Some(1));
        // v_3 appears at (1, 15, 7) which is outside this t range; check a
        // zero group instead.
        assert_eq!(table.dim(2, 3, 2), Some(0));
    }

    #[test]
    fn budget_skips_are_reported() {
        let alg = Algebra::new(MotivicProfile::preset("B", 38).unwrap());
        let tiny = CobarBudget {
            max_ops: 10,
            max_bits: 10,
        };
        let table = cobar_ext_dims(&alg, 8, 3, &tiny);
        assert!(!table.skipped().is_empty());
        assert!(table.dim(2, 6, 0).is_none());
    }
}
