//! Python bindings: profiles, resolutions, Ext tables, and the chain-level
//! operations, exposed as a thin session object.
//!
//! Build with `cargo build --release -p motex-py`, then import the cdylib
//! as `motex_py` (see `python/smoke_test.py` at the workspace root).

use std::sync::Arc;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use motex::hopf::{Algebra, MotivicProfile};
use motex::naming::{AlgebraKey, Namer};
use motex::resolution::{
    checkpoint_load, checkpoint_save, ExtTable, SolveStrategy, SolverCache,
};
use motex::yoneda::{
    class_is_zero, classes_equal, ext_product, massey, restrict, restriction_map, ExtClass,
};

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

/// A resolution of the ground module over a named profile algebra.
#[pyclass]
struct Resolution {
    inner: motex::resolution::Resolution,
    cache: SolverCache,
    table: Option<(u32, u32, Arc<ExtTable>)>,
}

impl Resolution {
    fn table_for(&mut self, f_max: u32, t_max: u32) -> PyResult<Arc<ExtTable>> {
        match &self.table {
            Some((f, t, table)) if *f >= f_max && *t >= t_max => Ok(table.clone()),
            _ => {
                let table =
                    Arc::new(ExtTable::new(&self.inner, f_max, t_max).map_err(err)?);
                self.table = Some((f_max, t_max, table.clone()));
                Ok(table)
            }
        }
    }

    fn region(&self) -> (u32, u32) {
        let mut max_f = 0;
        while self.inner.frontier(max_f + 1) >= 0 {
            max_f += 1;
        }
        let t = (1..=max_f)
            .map(|f| self.inner.frontier(f))
            .min()
            .unwrap_or(0)
            .max(0) as u32;
        (max_f.saturating_sub(1), t)
    }

    fn full_table(&mut self) -> PyResult<Arc<ExtTable>> {
        let (f, t) = self.region();
        self.table_for(f, t)
    }

    fn namer_key(&self) -> PyResult<AlgebraKey> {
        AlgebraKey::of_profile(self.inner.algebra().profile())
            .ok_or_else(|| PyValueError::new_err("no naming table for this algebra"))
    }

    fn eval_expr(&mut self, expr: &str) -> PyResult<ExtClass> {
        let key = self.namer_key()?;
        let table = self.full_table()?;
        let mut namer = Namer::new(&self.inner, &table, &mut self.cache, key);
        namer
            .eval(expr)
            .map_err(err)?
            .ok_or_else(|| PyValueError::new_err("empty expression"))
    }

    fn describe(&mut self, x: &ExtClass) -> PyResult<String> {
        if class_is_zero(&self.inner, x) {
            return Ok("0".to_string());
        }
        let key = self.namer_key()?;
        let table = self.full_table()?;
        let mut namer = Namer::new(&self.inner, &table, &mut self.cache, key);
        Ok(match namer.express(x) {
            Ok(Some(s)) => s,
            _ => format!("[unnamed class at ({}, {}, {})]", x.s, x.f, x.w),
        })
    }
}

#[pymethods]
impl Resolution {
    /// Builds a fresh resolution over a preset algebra
    /// (A, A2, B, E-tau3, B-classical, A-classical).
    #[new]
    #[pyo3(signature = (preset, degree_cap = 128))]
    fn new(preset: &str, degree_cap: u32) -> PyResult<Self> {
        let profile = MotivicProfile::preset(preset, degree_cap)
            .ok_or_else(|| PyValueError::new_err(format!("unknown preset {preset:?}")))?;
        Ok(Resolution {
            inner: motex::resolution::Resolution::new(Algebra::new(profile)),
            cache: SolverCache::default(),
            table: None,
        })
    }

    /// Extends through every filtration `<= max_f` and stem `<= max_stem`.
    fn extend(&mut self, max_stem: u32, max_f: u32) -> PyResult<()> {
        self.table = None;
        self.inner.extend(max_stem, max_f).map_err(err)
    }

    fn gen_count(&self) -> usize {
        self.inner.gen_count()
    }

    /// Generator tridegrees `(s, f, w)` in canonical order.
    fn generators(&self) -> Vec<(i64, u32, i32)> {
        let mut out = Vec::new();
        for (&(f, t), gens) in self.inner.cells() {
            for g in gens {
                out.push((t as i64 - f as i64, f, g.id.w));
            }
        }
        out.sort();
        out
    }

    /// F2 dimension of Ext at (s, f, w).
    fn dim(&mut self, s: i64, f: u32, w: i64) -> PyResult<usize> {
        self.full_table()?.dim(s, f, w).map_err(err)
    }

    /// Rank of the tau action (s, f, w) -> (s, f, w-1).
    fn tau_rank(&mut self, s: i64, f: u32, w: i64) -> PyResult<usize> {
        self.full_table()?.tau_rank(s, f, w).map_err(err)
    }

    /// All nonzero groups as rows (s, f, w, dim, tau_rank).
    fn rows(&mut self) -> PyResult<Vec<(i64, u32, i64, usize, usize)>> {
        Ok(self.full_table()?.rows())
    }

    /// Product of two name expressions, as (s, f, w, description).
    fn product(&mut self, left: &str, right: &str) -> PyResult<(i64, u32, i64, String)> {
        let l = self.eval_expr(left)?;
        let r = self.eval_expr(right)?;
        let p = ext_product(&self.inner, &mut self.cache, &l, &r, SolveStrategy::Canonical)
            .map_err(err)?;
        let desc = self.describe(&p)?;
        Ok((p.s, p.f, p.w, desc))
    }

    /// Triple Massey product of name expressions:
    /// (s, f, w, description, indeterminacy dimension).
    fn massey(&mut self, a: &str, b: &str, c: &str) -> PyResult<(i64, u32, i64, String, usize)> {
        let (ca, cb, cc) = (self.eval_expr(a)?, self.eval_expr(b)?, self.eval_expr(c)?);
        let table = self.full_table()?;
        let coset = massey(
            &self.inner,
            &mut self.cache,
            &table,
            &ca,
            &cb,
            &cc,
            SolveStrategy::Canonical,
        )
        .map_err(err)?;
        let indet = {
            let (_, ech) = coset.reduced(&table);
            ech.rank()
        };
        let desc = self.describe(&coset.rep)?;
        Ok((coset.rep.s, coset.rep.f, coset.rep.w, desc, indet))
    }

    /// Restriction of a name expression along the inclusion of `sub`'s
    /// algebra, described in `sub`'s names.
    fn restrict(&mut self, expr: &str, sub: &mut Resolution) -> PyResult<String> {
        let x = self.eval_expr(expr)?;
        let map = restriction_map(
            &self.inner,
            &mut self.cache,
            &sub.inner,
            x.f,
            x.t(),
            SolveStrategy::Canonical,
        )
        .map_err(err)?;
        let r = restrict(&self.inner, &sub.inner, &map, &x).map_err(err)?;
        sub.describe(&r)
    }

    /// Whether two name expressions denote the same Ext class.
    fn equal(&mut self, left: &str, right: &str) -> PyResult<bool> {
        let l = self.eval_expr(left)?;
        let r = self.eval_expr(right)?;
        Ok(classes_equal(&self.inner, &l, &r))
    }

    /// Whether the expression denotes zero.
    fn is_zero(&mut self, expr: &str) -> PyResult<bool> {
        let x = self.eval_expr(expr)?;
        Ok(class_is_zero(&self.inner, &x))
    }

    /// Serializes the resolution to a checkpoint file.
    fn save(&self, path: &str) -> PyResult<()> {
        std::fs::write(path, checkpoint_save(&self.inner)).map_err(err)
    }

    /// Loads a resolution from a checkpoint file.
    #[staticmethod]
    fn load(path: &str) -> PyResult<Resolution> {
        let blob = std::fs::read(path).map_err(err)?;
        Ok(Resolution {
            inner: checkpoint_load(&blob).map_err(err)?,
            cache: SolverCache::default(),
            table: None,
        })
    }

    fn __repr__(&self) -> String {
        format!(
            "<Resolution: {} generators, {} cells>",
            self.inner.gen_count(),
            self.inner.cells().len()
        )
    }
}

/// The preset algebra names.
#[pyfunction]
fn presets() -> Vec<&'static str> {
    motex::hopf::PRESET_NAMES.to_vec()
}

#[pymodule]
fn motex_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Resolution>()?;
    m.add_function(wrap_pyfunction!(presets, m)?)?;
    Ok(())
}
