//! Trigraded Ext groups read off a completed resolution.
//!
//! A weight-w cochain at (f, t) is a functional on the generators of
//! filtration f and degree t with weight >= w, assigning `tau^{w(g) - w}` to
//! each supported generator; as a bit vector it is indexed by the full
//! canonical generator list of (f, t). The Ext differential counts the
//! unit-monomial terms of the differentials of the next filtration's
//! generators, restricted to the eligible weight range. The tau action
//! (s, f, w) -> (s, f, w-1) is induced by the inclusion of eligible
//! generator sets.

use std::collections::BTreeMap;

use super::{GenId, Resolution, ResolutionError};
use crate::f2::{kernel_basis, row_reduce, BitMatrix, BitVector, EchelonSpace, Solver};

/// The Ext group at one tridegree: an F2 basis of cocycle classes (bit
/// vectors over the canonical generator list of (f, t)), the echelon of
/// coboundaries at this weight, and the matrix of the tau action into the
/// group one weight down (rows indexed by this basis, columns by that one).
#[derive(Clone, Debug)]
pub struct ExtGroup {
    pub dim: usize,
    pub basis: Vec<BitVector>,
    pub coboundaries: EchelonSpace,
    pub tau_matrix: BitMatrix,
}

impl ExtGroup {
    /// Coordinates of a cocycle in the chosen basis, or `None` if it is not
    /// in the span of basis and coboundaries.
    pub fn coordinates(&self, cocycle: &BitVector) -> Option<BitVector> {
        let width = cocycle.len();
        let mut solver = Solver::new(width, self.basis.len() + self.coboundaries.rank());
        for b in &self.basis {
            solver.insert(b.clone());
        }
        for c in self.coboundaries.basis() {
            solver.insert(c.clone());
        }
        let combo = solver.solve(cocycle)?;
        let mut coords = BitVector::zeros(self.basis.len());
        for i in combo.ones() {
            if i < self.basis.len() {
                coords.set(i, true);
            }
        }
        Some(coords)
    }

    pub fn is_zero_class(&self, cocycle: &BitVector) -> bool {
        self.coboundaries.contains(cocycle)
    }
}

struct CellExt {
    band_lo: i64,
    band_hi: i64,
    gens: Vec<GenId>,
    /// Groups indexed by `w - band_lo` for `w` in `band_lo..=band_hi`.
    groups: Vec<ExtGroup>,
}

/// Ext dimensions, chosen bases, and tau actions over a completed region.
///
/// Valid for `f <= max_f`, internal degree `t <= max_t`; weights outside a
/// cell's stored band resolve structurally (zero above, stable below, where
/// the tau action is an isomorphism).
pub struct ExtTable {
    max_f: u32,
    max_t: u32,
    cells: BTreeMap<(u32, u32), CellExt>,
}

impl ExtTable {
    /// Reads Ext off the resolution for `f <= max_f`, `t <= max_t`. Requires
    /// filtrations through `max_f + 1` to be complete through `max_t`.
    pub fn new(res: &Resolution, max_f: u32, max_t: u32) -> Result<ExtTable, ResolutionError> {
        for f in 1..=max_f + 1 {
            if !res.is_complete(f, max_t) {
                return Err(ResolutionError::Incomplete { f, t: max_t });
            }
        }
        let mut cells = BTreeMap::new();
        for f in 1..=max_f {
            for t in f..=max_t {
                if let Some(cell) = Self::build_cell(res, f, t) {
                    cells.insert((f, t), cell);
                }
            }
        }
        Ok(ExtTable {
            max_f,
            max_t,
            cells,
        })
    }

    fn build_cell(res: &Resolution, f: u32, t: u32) -> Option<CellExt> {
        let gens: Vec<GenId> = res.gens_at(f, t).iter().map(|g| g.id).collect();
        if gens.is_empty() {
            return None;
        }
        let gens_below: Vec<GenId> = res.gens_at(f - 1, t).iter().map(|g| g.id).collect();
        let gens_above: Vec<GenId> = res.gens_at(f + 1, t).iter().map(|g| g.id).collect();

        // up[i][j]: the differential of gens_above[i] has a unit term on
        // gens[j]; down[i][j]: d(gens[i]) has a unit term on gens_below[j].
        let up = unit_bits(res, f + 1, t, &gens);
        let down = unit_bits(res, f, t, &gens_below);

        let band_hi = gens.iter().map(|g| g.w as i64).max().unwrap();
        let mut band_lo = band_hi;
        for g in gens.iter().chain(&gens_below).chain(&gens_above) {
            band_lo = band_lo.min(g.w as i64);
        }

        let mut groups: Vec<ExtGroup> = Vec::new();
        for w in band_lo..=band_hi {
            let lower = groups.last();
            let g = Self::group_at(&gens, &gens_below, &gens_above, &up, &down, w, lower);
            groups.push(g);
        }
        Some(CellExt {
            band_lo,
            band_hi,
            gens,
            groups,
        })
    }

    fn group_at(
        gens: &[GenId],
        gens_below: &[GenId],
        gens_above: &[GenId],
        up: &[Vec<bool>],
        down: &[Vec<bool>],
        w: i64,
        lower: Option<&ExtGroup>,
    ) -> ExtGroup {
        let n = gens.len();
        let elig: Vec<usize> = (0..n).filter(|&j| gens[j].w as i64 >= w).collect();

        // Cocycles: kernel of the up matrix on eligible rows and columns.
        let mut m_up = BitMatrix::new(elig.len());
        for (i, ga) in gens_above.iter().enumerate() {
            if (ga.w as i64) < w {
                continue;
            }
            let mut row = BitVector::zeros(elig.len());
            for (k, &j) in elig.iter().enumerate() {
                if up[i][j] {
                    row.set(k, true);
                }
            }
            m_up.push_row(row);
        }
        let cocycles_small = kernel_basis(&m_up);

        // Coboundaries: spans of d* applied to eligible lower functionals.
        let mut image_rows = Vec::new();
        for (i, gb) in gens_below.iter().enumerate() {
            if (gb.w as i64) < w {
                continue;
            }
            let mut row = BitVector::zeros(elig.len());
            for (k, &j) in elig.iter().enumerate() {
                if down[j][i] {
                    row.set(k, true);
                }
            }
            image_rows.push(row);
        }
        let cob_small = row_reduce(&BitMatrix::from_rows(elig.len(), image_rows));

        let embed = |v: &BitVector| -> BitVector {
            let mut out = BitVector::zeros(n);
            for k in v.ones() {
                out.set(elig[k], true);
            }
            out
        };

        let mut coboundaries = EchelonSpace::new(n);
        for row in cob_small.basis() {
            debug_assert!(
                {
                    // d^2 = 0 on the Ext complex: coboundaries are cocycles.
                    let mut reducer = row_reduce(&BitMatrix::from_rows(
                        elig.len(),
                        cocycles_small.clone(),
                    ));
                    reducer.insert(row.clone()).is_none()
                },
                "coboundary is not a cocycle"
            );
            coboundaries.insert(embed(row));
        }

        // Quotient basis, deterministically: reduce each kernel vector by
        // coboundaries and previously chosen representatives.
        let mut reducer = coboundaries.clone();
        let mut basis = Vec::new();
        for z in &cocycles_small {
            let r = reducer.reduce(embed(z));
            if !r.is_zero() {
                reducer.insert(r.clone());
                basis.push(r);
            }
        }

        // Tau action into the lower-weight group: the same bit vector read
        // one weight down.
        let tau_matrix = match lower {
            None => BitMatrix::new(0),
            Some(lo) => {
                let mut m = BitMatrix::new(lo.dim);
                for b in &basis {
                    let coords = lo
                        .coordinates(b)
                        .expect("tau image must be a class one weight down");
                    m.push_row(coords);
                }
                m
            }
        };

        ExtGroup {
            dim: basis.len(),
            basis,
            coboundaries,
            tau_matrix,
        }
    }

    pub fn max_f(&self) -> u32 {
        self.max_f
    }

    pub fn max_t(&self) -> u32 {
        self.max_t
    }

    fn check_region(&self, s: i64, f: u32) -> Result<(), ResolutionError> {
        let t = s + f as i64;
        if f > self.max_f || t > self.max_t as i64 || t < 0 {
            return Err(ResolutionError::Incomplete {
                f,
                t: t.max(0) as u32,
            });
        }
        Ok(())
    }

    /// F2 dimension of Ext at (s, f, w).
    pub fn dim(&self, s: i64, f: u32, w: i64) -> Result<usize, ResolutionError> {
        if f == 0 {
            // Ext^0 is the ground module: one class per tau power.
            return Ok(usize::from(s == 0 && w <= 0));
        }
        self.check_region(s, f)?;
        let t = (s + f as i64) as u32;
        Ok(match self.cells.get(&(f, t)) {
            None => 0,
            Some(cell) => {
                if w > cell.band_hi {
                    0
                } else {
                    let wq = w.max(cell.band_lo);
                    cell.groups[(wq - cell.band_lo) as usize].dim
                }
            }
        })
    }

    /// The group data at (s, f, w), if nonzero; weights below the band
    /// resolve to the stable band floor.
    pub fn group(&self, s: i64, f: u32, w: i64) -> Option<&ExtGroup> {
        let t = s + f as i64;
        if t < 0 || f == 0 || f > self.max_f || t > self.max_t as i64 {
            return None;
        }
        let cell = self.cells.get(&(f, t as u32))?;
        if w > cell.band_hi {
            return None;
        }
        let wq = w.max(cell.band_lo);
        let g = &cell.groups[(wq - cell.band_lo) as usize];
        (g.dim > 0).then_some(g)
    }

    /// Canonical generator list indexing the basis bit vectors at (s, f).
    pub fn cell_gens(&self, s: i64, f: u32) -> &[GenId] {
        let t = s + f as i64;
        if t < 0 {
            return &[];
        }
        self.cells
            .get(&(f, t as u32))
            .map_or(&[], |c| c.gens.as_slice())
    }

    /// Rank of the tau action (s, f, w) -> (s, f, w - 1).
    pub fn tau_rank(&self, s: i64, f: u32, w: i64) -> Result<usize, ResolutionError> {
        if f == 0 {
            return Ok(usize::from(s == 0 && w <= 0));
        }
        self.check_region(s, f)?;
        let t = (s + f as i64) as u32;
        let Some(cell) = self.cells.get(&(f, t)) else {
            return Ok(0);
        };
        if w > cell.band_hi {
            return Ok(0);
        }
        if w <= cell.band_lo {
            // Stable range: tau acts isomorphically.
            return Ok(cell.groups[0].dim);
        }
        let g = &cell.groups[(w - cell.band_lo) as usize];
        Ok(row_reduce(&g.tau_matrix).rank())
    }

    /// Whether a full-width cocycle vector represents zero at (s, f, w).
    pub fn is_zero_class(&self, s: i64, f: u32, w: i64, cocycle: &BitVector) -> bool {
        match self.group(s, f, w) {
            None => true,
            Some(g) => g.is_zero_class(cocycle),
        }
    }

    /// All stored nonzero groups as (s, f, w, dim, tau_rank). Weights run
    /// over each cell's band only; dimensions are stable below it.
    pub fn rows(&self) -> Vec<(i64, u32, i64, usize, usize)> {
        let mut out = Vec::new();
        for (&(f, t), cell) in &self.cells {
            for (k, g) in cell.groups.iter().enumerate() {
                if g.dim == 0 {
                    continue;
                }
                let w = cell.band_lo + k as i64;
                let tr = if w == cell.band_lo {
                    g.dim
                } else {
                    row_reduce(&g.tau_matrix).rank()
                };
                out.push((t as i64 - f as i64, f, w, g.dim, tr));
            }
        }
        out.sort();
        out
    }
}

fn unit_bits(res: &Resolution, f: u32, t: u32, cols: &[GenId]) -> Vec<Vec<bool>> {
    let col_pos: BTreeMap<GenId, usize> = cols.iter().enumerate().map(|(i, &g)| (g, i)).collect();
    res.unit_matrix(f, t)
        .into_iter()
        .map(|(_, targets)| {
            let mut row = vec![false; cols.len()];
            for g in targets {
                if let Some(&i) = col_pos.get(&g) {
                    row[i] = !row[i];
                }
            }
            row
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::{Algebra, MotivicProfile};

    fn table(preset: &str, cap: u32, stem: u32, f: u32) -> ExtTable {
        let alg = Algebra::new(MotivicProfile::preset(preset, cap).unwrap());
        let mut res = Resolution::new(alg);
        res.extend(stem, f).unwrap();
        ExtTable::new(&res, f - 1, stem + f - 1).unwrap()
    }

    #[test]
    fn ext_b_has_v3_at_14_1_7() {
        let t = table("B", 38, 16, 3);
        assert_eq!(t.dim(14, 1, 7).unwrap(), 1);
        assert_eq!(t.dim(14, 1, 8).unwrap(), 0);
        // The tau multiple survives one weight down.
        assert_eq!(t.dim(14, 1, 6).unwrap(), 1);
        assert_eq!(t.tau_rank(14, 1, 7).unwrap(), 1);
    }

    #[test]
    fn h0_tower_dims() {
        let t = table("B", 38, 4, 5);
        for f in 1..=4 {
            assert_eq!(t.dim(0, f, 0).unwrap(), 1, "h_0^{f}");
            assert_eq!(t.dim(0, f, 1).unwrap(), 0);
        }
        // h_1 tower on the Witt diagonal.
        assert_eq!(t.dim(1, 1, 1).unwrap(), 1);
        assert_eq!(t.dim(2, 2, 2).unwrap(), 1);
    }

    #[test]
    fn ext0_is_ground_module() {
        let t = table("B", 38, 4, 3);
        assert_eq!(t.dim(0, 0, 0).unwrap(), 1);
        assert_eq!(t.dim(0, 0, -3).unwrap(), 1);
        assert_eq!(t.dim(0, 0, 1).unwrap(), 0);
        assert_eq!(t.dim(1, 0, 0).unwrap(), 0);
    }

    #[test]
    fn region_errors_are_reported() {
        let t = table("B", 38, 4, 3);
        assert!(t.dim(40, 1, 0).is_err());
        assert!(t.dim(2, 7, 0).is_err());
    }
}
