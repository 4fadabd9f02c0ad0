//! Conventional names for Ext classes.
//!
//! The literature names classes (h0, h1, c0, d0, e0, g2, v3, ..) by
//! convention; an engine cannot infer those names, so they are resolved
//! through a curated table keyed by tridegree. Where a tridegree has
//! dimension greater than one, an entry carries a disambiguating
//! fingerprint: a product relation that exactly one class in the group
//! satisfies (for example, e0 in Ext_B is the class X at (17, 4, 10) with
//! h1^2 X = c0 u; the other candidate differs by h1^3 v3 and fails it).
//!
//! Name expressions (`h0^3 g2`, `P e0 v3^2 + P h1^3 v3^3`) are parsed as
//! sums of products of powers of named classes, with `tau` available as the
//! weight-lowering scalar.

use std::collections::HashMap;

use crate::resolution::{ExtTable, Resolution, SolveStrategy, SolverCache};
use crate::yoneda::{class_is_zero, classes_equal, ext_product, ExtClass, YonedaError};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum AlgebraKey {
    /// The full motivic Steenrod algebra.
    A,
    /// The subalgebra A(2).
    A2,
    /// The subalgebra B.
    B,
}

impl AlgebraKey {
    pub fn of_profile(profile: &crate::hopf::MotivicProfile) -> Option<AlgebraKey> {
        for (key, preset) in [(AlgebraKey::A, "A"), (AlgebraKey::A2, "A2"), (AlgebraKey::B, "B")] {
            let p = crate::hopf::MotivicProfile::preset(preset, profile.degree_cap)
                .unwrap()
                .clamped();
            if p.mode == profile.mode
                && p.tau_present == profile.tau_present
                && p.tau_tail == profile.tau_tail
                && p.xi_heights == profile.xi_heights
                && p.xi_tail == profile.xi_tail
            {
                return Some(key);
            }
        }
        None
    }
}

#[derive(Clone, Debug)]
enum Pin {
    /// The tridegree must be one-dimensional.
    Unique,
    /// The unique class X with `prod(multipliers) * X = prod(equals)`.
    Product {
        multipliers: &'static [&'static str],
        equals: &'static [&'static str],
    },
}

struct NameEntry {
    name: &'static str,
    algebra: AlgebraKey,
    s: i64,
    f: u32,
    w: i64,
    pin: Pin,
    /// Identification is by literature convention; entries whose degrees
    /// are reconstructed from chart arithmetic rather than stated sources
    /// are flagged.
    heuristic: bool,
}

const fn entry(
    name: &'static str,
    algebra: AlgebraKey,
    s: i64,
    f: u32,
    w: i64,
) -> NameEntry {
    NameEntry {
        name,
        algebra,
        s,
        f,
        w,
        pin: Pin::Unique,
        heuristic: false,
    }
}

fn table_entries() -> Vec<NameEntry> {
    use AlgebraKey::{A, A2, B};
    let mut v = Vec::new();
    for alg in [A, A2, B] {
        v.push(entry("h0", alg, 0, 1, 0));
        v.push(entry("h1", alg, 1, 1, 1));
        v.push(entry("h2", alg, 3, 1, 2));
    }
    for alg in [A2, B] {
        v.push(entry("c0", alg, 8, 3, 5));
        v.push(entry("P", alg, 8, 4, 4));
        v.push(entry("d0", alg, 14, 4, 8));
        v.push(entry("u", alg, 11, 3, 7));
        v.push(entry("g", alg, 20, 4, 12));
        v.push(NameEntry {
            name: "e0",
            algebra: alg,
            s: 17,
            f: 4,
            w: 10,
            pin: Pin::Product {
                multipliers: &["h1", "h1"],
                equals: &["c0", "u"],
            },
            heuristic: false,
        });
        v.push(NameEntry {
            name: "a",
            algebra: alg,
            s: 12,
            f: 3,
            w: 6,
            pin: Pin::Unique,
            heuristic: true,
        });
        v.push(NameEntry {
            name: "n",
            algebra: alg,
            s: 15,
            f: 3,
            w: 8,
            pin: Pin::Unique,
            heuristic: true,
        });
    }
    v.push(entry("v3", B, 14, 1, 7));
    // Full Steenrod algebra names.
    v.push(entry("h3", A, 7, 1, 4));
    v.push(entry("h5", A, 31, 1, 16));
    v.push(entry("c0", A, 8, 3, 5));
    v.push(entry("d0", A, 14, 4, 8));
    v.push(entry("e0", A, 17, 4, 10));
    v.push(entry("g2", A, 44, 4, 24));
    v.push(entry("e0g", A, 37, 8, 22));
    v.push(entry("Mh1", A, 46, 7, 25));
    // Mahowald-operator family names in the full algebra; degrees from
    // chart arithmetic.
    v.push(NameEntry {
        name: "MP",
        algebra: A,
        s: 53,
        f: 10,
        w: 28,
        pin: Pin::Unique,
        heuristic: true,
    });
    v.push(NameEntry {
        name: "Delta2h1h3",
        algebra: A,
        s: 56,
        f: 10,
        w: 29,
        pin: Pin::Unique,
        heuristic: true,
    });
    v.push(NameEntry {
        name: "B4",
        algebra: A,
        s: 60,
        f: 9,
        w: 32,
        pin: Pin::Unique,
        heuristic: true,
    });
    v.push(NameEntry {
        name: "tB5",
        algebra: A,
        s: 66,
        f: 10,
        w: 35,
        pin: Pin::Unique,
        heuristic: true,
    });
    v
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NamingError {
    #[error("unknown name {0:?} for this algebra")]
    Unknown(String),
    #[error("name {name:?}: tridegree ({s},{f},{w}) has dimension {dim}, cannot identify uniquely")]
    Ambiguous {
        name: String,
        s: i64,
        f: u32,
        w: i64,
        dim: usize,
    },
    #[error("name {name:?}: no class in the group satisfies its fingerprint")]
    FingerprintFailed { name: String },
    #[error("table region too small for {0:?}")]
    Region(String),
    #[error("expression syntax error: {0}")]
    Syntax(String),
    #[error("chain-level computation failed: {0}")]
    Yoneda(#[from] YonedaError),
}

/// Resolves names and name expressions against one resolution and its Ext
/// table.
pub struct Namer<'a> {
    res: &'a Resolution,
    table: &'a ExtTable,
    cache: &'a mut SolverCache,
    key: AlgebraKey,
    memo: HashMap<&'static str, ExtClass>,
}

impl<'a> Namer<'a> {
    pub fn new(
        res: &'a Resolution,
        table: &'a ExtTable,
        cache: &'a mut SolverCache,
        key: AlgebraKey,
    ) -> Namer<'a> {
        Namer {
            res,
            table,
            cache,
            key,
            memo: HashMap::new(),
        }
    }

    pub fn known_names(&self) -> Vec<&'static str> {
        let mut names: Vec<&'static str> = table_entries()
            .iter()
            .filter(|e| e.algebra == self.key)
            .map(|e| e.name)
            .collect();
        names.sort_unstable();
        names
    }

    /// Whether the named entry is flagged as heuristically identified.
    pub fn is_heuristic(&self, name: &str) -> bool {
        table_entries()
            .iter()
            .any(|e| e.algebra == self.key && e.name == name && e.heuristic)
    }

    pub fn resolve(&mut self, name: &str) -> Result<ExtClass, NamingError> {
        if let Some(c) = self
            .memo
            .iter()
            .find(|(k, _)| **k == name)
            .map(|(_, v)| v.clone())
        {
            return Ok(c);
        }
        let entries = table_entries();
        let entry = entries
            .iter()
            .find(|e| e.algebra == self.key && e.name == name)
            .ok_or_else(|| NamingError::Unknown(name.to_string()))?;
        let group = self
            .table
            .group(entry.s, entry.f, entry.w)
            .ok_or_else(|| match self.table.dim(entry.s, entry.f, entry.w) {
                Err(_) => NamingError::Region(name.to_string()),
                Ok(d) => NamingError::Ambiguous {
                    name: name.to_string(),
                    s: entry.s,
                    f: entry.f,
                    w: entry.w,
                    dim: d,
                },
            })?;
        let class = match &entry.pin {
            Pin::Unique => {
                if group.dim != 1 {
                    return Err(NamingError::Ambiguous {
                        name: name.to_string(),
                        s: entry.s,
                        f: entry.f,
                        w: entry.w,
                        dim: group.dim,
                    });
                }
                ExtClass::from_vector(entry.s, entry.f, entry.w, group.basis[0].clone())
            }
            Pin::Product {
                multipliers,
                equals,
            } => {
                let basis = group.basis.clone();
                let (s, f, w) = (entry.s, entry.f, entry.w);
                let mut mult = ExtClass::unit();
                for m in multipliers.iter() {
                    let mc = self.resolve(m)?;
                    mult = ext_product(self.res, self.cache, &mult, &mc, SolveStrategy::Canonical)?;
                }
                let mut rhs = ExtClass::unit();
                for m in equals.iter() {
                    let mc = self.resolve(m)?;
                    rhs = ext_product(self.res, self.cache, &rhs, &mc, SolveStrategy::Canonical)?;
                }
                let mut found = Vec::new();
                // Scan the affine set of nonzero classes in the group.
                for mask in 1u32..(1 << basis.len()) {
                    let mut cand = ExtClass::from_vector(
                        s,
                        f,
                        w,
                        crate::f2::BitVector::zeros(basis[0].len()),
                    );
                    for (i, b) in basis.iter().enumerate() {
                        if mask & (1 << i) != 0 {
                            cand.cocycle.xor_assign(b);
                        }
                    }
                    let prod =
                        ext_product(self.res, self.cache, &mult, &cand, SolveStrategy::Canonical)?;
                    if classes_equal(self.res, &prod, &rhs) {
                        found.push(cand);
                    }
                }
                match found.len() {
                    1 => found.pop().unwrap(),
                    0 => {
                        return Err(NamingError::FingerprintFailed {
                            name: name.to_string(),
                        })
                    }
                    n => {
                        return Err(NamingError::Ambiguous {
                            name: name.to_string(),
                            s,
                            f,
                            w,
                            dim: n,
                        })
                    }
                }
            }
        };
        self.memo.insert(entry.name, class.clone());
        Ok(class)
    }

    /// Evaluates a name expression: a sum of products of powers,
    /// `"P e0 v3^2 + P h1^3 v3^3"`. `tau` denotes the ground scalar of
    /// tridegree (0, 0, -1). Returns `None` for the empty (zero) expression.
    pub fn eval(&mut self, expr: &str) -> Result<Option<ExtClass>, NamingError> {
        let mut acc: Option<ExtClass> = None;
        for term in expr.split('+') {
            let term = term.trim();
            if term.is_empty() || term == "0" {
                continue;
            }
            let mut prod = ExtClass::unit();
            for factor in term.split(['*', ' ']).filter(|s| !s.is_empty()) {
                let (name, exp) = match factor.split_once('^') {
                    None => (factor, 1u32),
                    Some((n, e)) => (
                        n,
                        e.parse::<u32>()
                            .map_err(|_| NamingError::Syntax(factor.to_string()))?,
                    ),
                };
                let base = if name == "tau" {
                    ExtClass {
                        s: 0,
                        f: 0,
                        w: -1,
                        cocycle: crate::f2::BitVector::from_indices(1, &[0]),
                    }
                } else {
                    self.resolve(name)?
                };
                for _ in 0..exp {
                    prod =
                        ext_product(self.res, self.cache, &prod, &base, SolveStrategy::Canonical)?;
                }
            }
            acc = Some(match acc {
                None => prod,
                Some(a) => {
                    if (a.s, a.f, a.w) != (prod.s, prod.f, prod.w) {
                        return Err(NamingError::Syntax(format!(
                            "inhomogeneous sum: ({},{},{}) + ({},{},{})",
                            a.s, a.f, a.w, prod.s, prod.f, prod.w
                        )));
                    }
                    a.add(&prod)
                }
            });
        }
        Ok(acc)
    }

    /// Expresses a class as a sum of products of named classes at its
    /// tridegree, if the named products span it. Used for human-readable
    /// output of restrictions.
    pub fn express(&mut self, x: &ExtClass) -> Result<Option<String>, NamingError> {
        if class_is_zero(self.res, x) {
            return Ok(Some("0".to_string()));
        }
        let Some(group) = self.table.group(x.s, x.f, x.w) else {
            return Ok(None);
        };
        let monomials = self.named_monomials(x.s, x.f, x.w)?;
        let coords_of = |g: &crate::resolution::ExtGroup, c: &ExtClass| g.coordinates(&c.cocycle);
        let Some(target) = coords_of(group, x) else {
            return Ok(None);
        };
        // Greedy linear solve over the monomial coordinates.
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for (label, class) in &monomials {
            if let Some(c) = coords_of(group, class) {
                if !c.is_zero() {
                    rows.push(c);
                    labels.push(label.clone());
                }
            }
        }
        let m = crate::f2::BitMatrix::from_rows(target.len(), rows);
        let Some(sol) = crate::f2::solve(&m, &target) else {
            return Ok(None);
        };
        let parts: Vec<String> = sol.ones().map(|i| labels[i].clone()).collect();
        Ok(Some(parts.join(" + ")))
    }

    /// All products of named generators landing in the tridegree, with
    /// display labels.
    fn named_monomials(
        &mut self,
        s: i64,
        f: u32,
        w: i64,
    ) -> Result<Vec<(String, ExtClass)>, NamingError> {
        let names = self.known_names();
        let mut gens = Vec::new();
        for n in names {
            match self.resolve(n) {
                Ok(c) => gens.push((n, c)),
                Err(NamingError::Region(_)) | Err(NamingError::Ambiguous { .. }) => continue,
                Err(e) => return Err(e),
            }
        }
        // Depth-first search over exponent vectors, pruned by tridegree.
        let mut out = Vec::new();
        let mut stack: Vec<(usize, i64, u32, i64, Vec<(usize, u32)>)> =
            vec![(0, 0, 0, 0, Vec::new())];
        while let Some((i, cs, cf, cw, expo)) = stack.pop() {
            if cs == s && cf == f && cw == w && !expo.is_empty() {
                let mut label = Vec::new();
                let mut class = ExtClass::unit();
                for &(gi, e) in &expo {
                    let (name, c) = &gens[gi];
                    label.push(if e == 1 {
                        (*name).to_string()
                    } else {
                        format!("{name}^{e}")
                    });
                    for _ in 0..e {
                        class = ext_product(self.res, self.cache, &class, c, SolveStrategy::Canonical)?;
                    }
                }
                if !class_is_zero(self.res, &class) {
                    out.push((label.join(" "), class));
                }
                continue;
            }
            if i >= gens.len() || cs > s || cf > f || cw > w {
                continue;
            }
            stack.push((i + 1, cs, cf, cw, expo.clone()));
            let (_, c) = &gens[i];
            if c.s == 0 && c.f == 0 {
                continue;
            }
            let mut e = 1u32;
            loop {
                let ns = cs + c.s * e as i64;
                let nf = cf + c.f * e;
                let nw = cw + c.w * e as i64;
                if ns > s || nf > f || nw > w {
                    break;
                }
                let mut ne = expo.clone();
                ne.push((i, e));
                stack.push((i + 1, ns, nf, nw, ne));
                e += 1;
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::{Algebra, MotivicProfile};
    use crate::resolution::Resolution;

    #[test]
    fn algebra_key_detection() {
        for (name, key) in [
            ("A", AlgebraKey::A),
            ("A2", AlgebraKey::A2),
            ("B", AlgebraKey::B),
        ] {
            let p = MotivicProfile::preset(name, 40).unwrap();
            assert_eq!(AlgebraKey::of_profile(&p), Some(key));
        }
        let e = MotivicProfile::preset("E-tau3", 40).unwrap();
        assert_eq!(AlgebraKey::of_profile(&e), None);
    }

    #[test]
    fn resolve_basic_names_over_b() {
        let alg = Algebra::new(MotivicProfile::preset("B", 38).unwrap());
        let mut res = Resolution::new(alg);
        res.extend(22, 7).unwrap();
        let table = ExtTable::new(&res, 6, 28).unwrap();
        let mut cache = SolverCache::default();
        let mut namer = Namer::new(&res, &table, &mut cache, AlgebraKey::B);
        for (name, deg) in [
            ("h0", (0i64, 1u32, 0i64)),
            ("h1", (1, 1, 1)),
            ("h2", (3, 1, 2)),
            ("v3", (14, 1, 7)),
            ("c0", (8, 3, 5)),
            ("d0", (14, 4, 8)),
            ("u", (11, 3, 7)),
            ("e0", (17, 4, 10)),
        ] {
            let c = namer.resolve(name).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!((c.s, c.f, c.w), deg, "{name}");
        }
    }

    #[test]
    fn expression_evaluation() {
        let alg = Algebra::new(MotivicProfile::preset("B", 38).unwrap());
        let mut res = Resolution::new(alg);
        res.extend(10, 5).unwrap();
        let table = ExtTable::new(&res, 4, 14).unwrap();
        let mut cache = SolverCache::default();
        let mut namer = Namer::new(&res, &table, &mut cache, AlgebraKey::B);
        let h0cubed = namer.eval("h0^3").unwrap().unwrap();
        assert_eq!((h0cubed.s, h0cubed.f, h0cubed.w), (0, 3, 0));
        let sum = namer.eval("h1 h1 + h1^2").unwrap().unwrap();
        assert!(crate::yoneda::class_is_zero(&res, &sum));
        let tau_h1 = namer.eval("tau h1").unwrap().unwrap();
        assert_eq!((tau_h1.s, tau_h1.f, tau_h1.w), (1, 1, 0));
    }
}
