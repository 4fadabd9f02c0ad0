//! The verification harness: runs the acceptance checks end to end and
//! reports each expected value with its provenance next to the computed
//! one.
//!
//! Heavy fixtures (resolutions of A, B, A(2), E(tau_3) to the depths the
//! checks need) are built once and optionally checkpointed to a cache
//! directory, so reruns are cheap and bit-identical.

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use crate::cobar::{cobar_ext_dims, CobarBudget};
use crate::hopf::{check_hopf_axioms, is_primitive, Algebra, Monomial, MotivicProfile};
use crate::naming::{AlgebraKey, Namer};
use crate::resolution::{
    checkpoint_load, checkpoint_save, ExtTable, Resolution, SolveStrategy, SolverCache,
};
use crate::yoneda::{
    class_is_zero, classes_equal, ext_product, massey, restrict, restriction_map, Coset, ExtClass,
    RestrictionMap,
};

#[derive(Clone, Debug)]
pub struct Check {
    pub label: String,
    /// Where the expected value comes from (literature relation, oracle,
    /// definition, determinism contract).
    pub source: &'static str,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

impl Check {
    fn new(
        label: impl Into<String>,
        source: &'static str,
        expected: impl Into<String>,
        computed: impl Into<String>,
        pass: bool,
    ) -> Check {
        Check {
            label: label.into(),
            source,
            expected: expected.into(),
            computed: computed.into(),
            pass,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub id: u8,
    pub name: &'static str,
    pub pass: bool,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub seconds: f64,
}

impl CriterionReport {
    pub fn render(&self) -> String {
        let mut out = format!(
            "criterion {} ({}): {} [{:.1}s]\n",
            self.id,
            self.name,
            if self.pass { "PASS" } else { "FAIL" },
            self.seconds
        );
        for c in &self.checks {
            out.push_str(&format!(
                "  [{}] {} | expected {} ({}) | computed {}\n",
                if c.pass { "ok" } else { "FAIL" },
                c.label,
                c.expected,
                c.source,
                c.computed
            ));
        }
        for n in &self.notes {
            out.push_str(&format!("  note: {n}\n"));
        }
        out
    }
}

fn finish(id: u8, name: &'static str, checks: Vec<Check>, notes: Vec<String>, t0: Instant) -> CriterionReport {
    CriterionReport {
        id,
        name,
        pass: checks.iter().all(|c| c.pass),
        checks,
        notes,
        seconds: t0.elapsed().as_secs_f64(),
    }
}

struct Bundle {
    res: Resolution,
    cache: SolverCache,
    tables: HashMap<(u32, u32), Arc<ExtTable>>,
}

impl Bundle {
    fn table(&mut self, f_max: u32, t_max: u32) -> Arc<ExtTable> {
        if let Some(t) = self.tables.get(&(f_max, t_max)) {
            return t.clone();
        }
        let t = Arc::new(ExtTable::new(&self.res, f_max, t_max).expect("table region"));
        self.tables.insert((f_max, t_max), t.clone());
        t
    }
}

/// Fixture depths for the full (paper) suite.
const A_CAP: u32 = 80;
const A_BOUNDS: (u32, u32) = (54, 14);
const A_EXT_BOUNDS: (u32, u32) = (66, 12);
const B_BOUNDS: (u32, u32) = (90, 15);
const A2_BOUNDS: (u32, u32) = (66, 18);
const E_BOUNDS: (u32, u32) = (45, 9);

pub struct Harness {
    pub cache_dir: Option<PathBuf>,
    pub cobar_budget: CobarBudget,
    /// Include the stem-66 extension of A (for the non-gating extended
    /// rows); the main suite does not need it.
    pub extended_a: bool,
    a: Option<Bundle>,
    b: Option<Bundle>,
    a2: Option<Bundle>,
    e: Option<Bundle>,
}

impl Harness {
    pub fn new(cache_dir: Option<PathBuf>) -> Harness {
        Harness {
            cache_dir,
            cobar_budget: CobarBudget {
                max_ops: 6_000_000_000_000,
                max_bits: 12_000_000_000,
            },
            extended_a: false,
            a: None,
            b: None,
            a2: None,
            e: None,
        }
    }

    fn build_bundle(
        cache_dir: &Option<PathBuf>,
        key: &str,
        preset: &str,
        cap: u32,
        bounds: &[(u32, u32)],
    ) -> Bundle {
        let path = cache_dir.as_ref().map(|d| d.join(format!("fixture-{key}.motx")));
        if let Some(p) = &path {
            if let Ok(blob) = std::fs::read(p) {
                if let Ok(res) = checkpoint_load(&blob) {
                    let complete = bounds
                        .iter()
                        .all(|&(stem, f)| (1..=f).all(|ff| res.is_complete(ff, stem + f)));
                    if complete && res.algebra().profile().degree_cap
                        == MotivicProfile::preset(preset, cap).unwrap().degree_cap
                    {
                        return Bundle {
                            res,
                            cache: SolverCache::default(),
                            tables: HashMap::new(),
                        };
                    }
                }
            }
        }
        let alg = Algebra::new(MotivicProfile::preset(preset, cap).unwrap());
        let mut res = Resolution::new(alg);
        for &(stem, f) in bounds {
            res.extend(stem, f).expect("fixture bounds exceed degree cap");
        }
        if let Some(p) = &path {
            let _ = std::fs::create_dir_all(p.parent().unwrap());
            // Write-then-rename so concurrent readers never see a torn file.
            let tmp = p.with_extension(format!("tmp{}", std::process::id()));
            if std::fs::write(&tmp, checkpoint_save(&res)).is_ok() {
                let _ = std::fs::rename(&tmp, p);
            }
        }
        Bundle {
            res,
            cache: SolverCache::default(),
            tables: HashMap::new(),
        }
    }

    fn a_bundle(&mut self) -> &mut Bundle {
        if self.a.is_none() {
            let mut bounds = vec![A_BOUNDS];
            if self.extended_a {
                bounds.push(A_EXT_BOUNDS);
            }
            let key = if self.extended_a { "A-ext" } else { "A" };
            self.a = Some(Self::build_bundle(&self.cache_dir, key, "A", A_CAP, &bounds));
        }
        self.a.as_mut().unwrap()
    }

    fn b_bundle(&mut self) -> &mut Bundle {
        if self.b.is_none() {
            self.b = Some(Self::build_bundle(&self.cache_dir, "B", "B", 128, &[B_BOUNDS]));
        }
        self.b.as_mut().unwrap()
    }

    fn a2_bundle(&mut self) -> &mut Bundle {
        if self.a2.is_none() {
            self.a2 = Some(Self::build_bundle(
                &self.cache_dir,
                "A2",
                "A2",
                128,
                &[A2_BOUNDS],
            ));
        }
        self.a2.as_mut().unwrap()
    }

    fn e_bundle(&mut self) -> &mut Bundle {
        if self.e.is_none() {
            self.e = Some(Self::build_bundle(
                &self.cache_dir,
                "E",
                "E-tau3",
                128,
                &[E_BOUNDS],
            ));
        }
        self.e.as_mut().unwrap()
    }

    /// Restriction chain map from the B resolution into the A resolution.
    fn a_to_b_map(&mut self, f_max: u32, t_max: u32) -> RestrictionMap {
        self.b_bundle();
        let b = self.b.take().unwrap();
        let map = {
            let a = self.a_bundle();
            restriction_map(&a.res, &mut a.cache, &b.res, f_max, t_max, SolveStrategy::Canonical)
                .expect("restriction map")
        };
        self.b = Some(b);
        map
    }

    fn a_to_a2_map(&mut self, f_max: u32, t_max: u32) -> RestrictionMap {
        self.a2_bundle();
        let a2 = self.a2.take().unwrap();
        let map = {
            let a = self.a_bundle();
            restriction_map(&a.res, &mut a.cache, &a2.res, f_max, t_max, SolveStrategy::Canonical)
                .expect("restriction map")
        };
        self.a2 = Some(a2);
        map
    }

    // ----- criterion 1 -------------------------------------------------

    pub fn criterion_1(&mut self) -> CriterionReport {
        let t0 = Instant::now();
        let mut checks = Vec::new();
        for (label, preset, cap) in [
            ("axioms of B*", "B", 128),
            ("axioms of A(2)*", "A2", 128),
            ("axioms of degree-capped A*", "A", 40),
        ] {
            let alg = Algebra::new(MotivicProfile::preset(preset, cap).unwrap());
            let report = check_hopf_axioms(&alg, 40);
            checks.push(Check::new(
                format!("{label} through t <= 40"),
                "Hopf quotient well-definedness",
                "pass",
                report
                    .witness
                    .clone()
                    .unwrap_or_else(|| format!("pass ({} monomials, {} pairs)", report.monomials_checked, report.pairs_checked)),
                report.pass,
            ));
        }
        let b = Algebra::new(MotivicProfile::preset("B", 128).unwrap());
        let prim = is_primitive(&b, &Monomial::tau_gen(3));
        checks.push(Check::new(
            "tau_3 primitive in B*",
            "splitting of B*",
            "primitive",
            if prim { "primitive" } else { "not primitive" },
            prim,
        ));
        finish(1, "Hopf well-definedness", checks, vec![], t0)
    }

    // ----- criterion 2 -------------------------------------------------

    pub fn criterion_2(&mut self, max_stem: i64, max_f: u32) -> CriterionReport {
        let t0 = Instant::now();
        let b_table = {
            let b = self.b_bundle();
            b.table(max_f, (max_stem + max_f as i64) as u32)
        };
        let a2_table = {
            let a2 = self.a2_bundle();
            a2.table(max_f, (max_stem + max_f as i64) as u32)
        };
        let mut compared = 0u64;
        let mut bad = Vec::new();
        for s in 0..=max_stem {
            for f in 1..=max_f {
                for w in -2..=(s + 2) {
                    let lhs_dim = b_table.dim(s, f, w).unwrap();
                    let lhs_tau = b_table.tau_rank(s, f, w).unwrap();
                    let mut rhs_dim = 0;
                    let mut rhs_tau = 0;
                    let mut k = 0i64;
                    loop {
                        let (s2, f2, w2) = (s - 14 * k, f as i64 - k, w - 7 * k);
                        if s2 < 0 || f2 < 0 {
                            break;
                        }
                        if f2 == 0 {
                            rhs_dim += usize::from(s2 == 0 && w2 <= 0);
                            rhs_tau += usize::from(s2 == 0 && w2 <= 0);
                        } else {
                            rhs_dim += a2_table.dim(s2, f2 as u32, w2).unwrap();
                            rhs_tau += a2_table.tau_rank(s2, f2 as u32, w2).unwrap();
                        }
                        k += 1;
                    }
                    compared += 1;
                    if lhs_dim != rhs_dim || lhs_tau != rhs_tau {
                        bad.push((s, f, w, lhs_dim, rhs_dim, lhs_tau, rhs_tau));
                    }
                }
            }
        }
        let checks = vec![Check::new(
            format!("dims and tau-ranks of Ext_B vs convolution with the v3 tower, s <= {max_stem}, f <= {max_f}"),
            "splitting of Ext_B",
            format!("{compared} tridegrees identical"),
            if bad.is_empty() {
                format!("{compared} tridegrees identical")
            } else {
                format!("{} mismatches, first at {:?}", bad.len(), bad[0])
            },
            bad.is_empty(),
        )];
        finish(2, "Ext_B = M2[v3] (x) Ext_A(2)", checks, vec![], t0)
    }

    // ----- criterion 3 -------------------------------------------------

    pub fn criterion_3(&mut self, t_max: u32, f_max: u32) -> CriterionReport {
        let t0 = Instant::now();
        let budget = self.cobar_budget;
        let mut checks = Vec::new();
        let mut notes = Vec::new();
        let jobs: Vec<(&'static str, Arc<ExtTable>, Arc<Algebra>)> = {
            let b = self.b_bundle();
            let b_pair = (b.table(f_max, t_max), b.res.algebra().clone());
            let a2 = self.a2_bundle();
            let a2_pair = (a2.table(f_max, t_max), a2.res.algebra().clone());
            let e = self.e_bundle();
            let e_pair = (e.table(f_max, t_max), e.res.algebra().clone());
            vec![
                ("B", b_pair.0, b_pair.1),
                ("A2", a2_pair.0, a2_pair.1),
                ("E-tau3", e_pair.0, e_pair.1),
            ]
        };
        // The three oracles are independent; run them concurrently.
        let cobars: Vec<_> = std::thread::scope(|scope| {
            let handles: Vec<_> = jobs
                .iter()
                .map(|(_, _, alg)| {
                    let alg = alg.clone();
                    scope.spawn(move || cobar_ext_dims(&alg, t_max, f_max, &budget))
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        for ((key, table, _), cobar) in jobs.iter().zip(cobars) {
            let key = *key;
            let mut compared = 0u64;
            let mut unavailable = 0u64;
            let mut mismatches = Vec::new();
            for f in 1..=f_max {
                for t in f..=t_max {
                    for w in -1..=(t as i64) {
                        match cobar.dim(f, t, w) {
                            None => unavailable += 1,
                            Some(cd) => {
                                compared += 1;
                                let rd = table.dim(t as i64 - f as i64, f, w).unwrap();
                                if cd != rd {
                                    mismatches.push((f, t, w, cd, rd));
                                }
                            }
                        }
                    }
                }
            }
            let full = cobar.skipped().is_empty();
            if !full {
                let worst = cobar
                    .skipped()
                    .iter()
                    .max_by_key(|s| s.rows)
                    .unwrap();
                notes.push(format!(
                    "{key}: {} cells over the resource budget (largest {} x {} at f={}, t={}); the brute-force cobar complex grows combinatorially and the skipped corner is beyond exact dense elimination on this machine",
                    cobar.skipped().len(),
                    worst.rows,
                    worst.cols,
                    worst.f,
                    worst.t
                ));
            }
            checks.push(Check::new(
                format!("{key}: cobar homology dims vs resolution Ext dims, t <= {t_max}, f <= {f_max}"),
                "independent brute-force oracle",
                "full coverage, zero mismatches",
                format!(
                    "{compared} tridegrees compared, {} mismatches, {unavailable} unavailable (resource bound)",
                    mismatches.len()
                ),
                mismatches.is_empty() && full,
            ));
        }
        finish(3, "oracle equivalence", checks, notes, t0)
    }

    // ----- criterion 4 -------------------------------------------------

    pub fn criterion_4(&mut self, max_k: u32) -> CriterionReport {
        let t0 = Instant::now();
        let mut checks = Vec::new();
        let a2 = self.a2_bundle();
        let table = a2.table(A2_BOUNDS.1 - 1, A2_BOUNDS.0 + A2_BOUNDS.1 - 1);
        let mut namer = Namer::new(&a2.res, &table, &mut a2.cache, AlgebraKey::A2);

        let pairs = [
            ("e0^2", "d0 g", "relation in Ext_A(2)"),
            ("h1^2 e0", "c0 u", "relation in Ext_A(2)"),
        ];
        for (lhs, rhs, src) in pairs {
            let l = namer.eval(lhs).unwrap().unwrap();
            let r = namer.eval(rhs).unwrap().unwrap();
            let ok = classes_equal(&a2.res, &l, &r);
            checks.push(Check::new(
                format!("{lhs} = {rhs}"),
                src,
                "equal",
                if ok { "equal" } else { "different" }.to_string(),
                ok,
            ));
        }
        for k in 0..=max_k {
            let expr = format!("h0 d0 e0^{k}");
            let c = namer.eval(&expr).unwrap().unwrap();
            let nonzero = !class_is_zero(&a2.res, &c);
            checks.push(Check::new(
                format!("{expr} != 0 at ({}, {}, {})", c.s, c.f, c.w),
                "infinite e0 family in Ext_A(2)",
                "nonzero",
                if nonzero { "nonzero" } else { "zero" }.to_string(),
                nonzero,
            ));
            if k >= 2 {
                let tt = namer.eval(&format!("tau^2 h0 d0 e0^{k}")).unwrap().unwrap();
                let is_zero = class_is_zero(&a2.res, &tt);
                checks.push(Check::new(
                    format!("tau^2 h0 d0 e0^{k} = 0"),
                    "tau-torsion of the e0 family",
                    "zero",
                    if is_zero { "zero" } else { "nonzero" }.to_string(),
                    is_zero,
                ));
            }
        }
        finish(4, "Ext_A(2) facts", checks, vec![], t0)
    }

    // ----- criterion 5 + 8 shared machinery ----------------------------

    fn mahowald_bracket(&mut self, arg: &str) -> (Coset, ExtClass) {
        let a = self.a_bundle();
        let table = a.table(A_BOUNDS.1 - 1, A_BOUNDS.0 + A_BOUNDS.1 - 1);
        let (g2, h0cubed, x) = {
            let mut namer = Namer::new(&a.res, &table, &mut a.cache, AlgebraKey::A);
            (
                namer.resolve("g2").expect("g2"),
                namer.eval("h0^3").unwrap().unwrap(),
                namer.resolve(arg).expect("bracket argument"),
            )
        };
        let coset = massey(
            &a.res,
            &mut a.cache,
            &table,
            &g2,
            &h0cubed,
            &x,
            SolveStrategy::Canonical,
        )
        .expect("Massey product defined");
        (coset, x)
    }

    pub fn criterion_5(&mut self) -> CriterionReport {
        let t0 = Instant::now();
        let mut checks = Vec::new();

        // h0^3 g2 = 0 over the full algebra.
        {
            let a = self.a_bundle();
            let table = a.table(A_BOUNDS.1 - 1, A_BOUNDS.0 + A_BOUNDS.1 - 1);
            let mut namer = Namer::new(&a.res, &table, &mut a.cache, AlgebraKey::A);
            let p = namer.eval("h0^3 g2").unwrap().unwrap();
            let ok = class_is_zero(&a.res, &p);
            checks.push(Check::new(
                "h0^3 g2 = 0 in Ext_C",
                "relation in Ext_C",
                "zero",
                if ok { "zero" } else { "nonzero" }.to_string(),
                ok,
            ));
        }

        let (coset, _h1) = self.mahowald_bracket("h1");
        {
            let a = self.a_bundle();
            let nonzero = !class_is_zero(&a.res, &coset.rep);
            let deg_ok = (coset.rep.s, coset.rep.f, coset.rep.w) == (46, 7, 25);
            checks.push(Check::new(
                "M h1 = <g2, h0^3, h1> nonzero at (46, 7, 25)",
                "Mahowald operator on h1",
                "nonzero at (46,7,25)",
                format!(
                    "{} at ({},{},{})",
                    if nonzero { "nonzero" } else { "zero" },
                    coset.rep.s,
                    coset.rep.f,
                    coset.rep.w
                ),
                nonzero && deg_ok,
            ));
        }

        // Restriction to B: p*(M h1) = (e0 v3^2 + h1^3 v3^3) p*(h1), and
        // p* kills the indeterminacy.
        let h1_a = {
            let a = self.a_bundle();
            let table_a = a.table(A_BOUNDS.1 - 1, A_BOUNDS.0 + A_BOUNDS.1 - 1);
            let g = table_a.group(1, 1, 1).unwrap();
            ExtClass::from_vector(1, 1, 1, g.basis[0].clone())
        };
        let map = self.a_to_b_map(8, 54);
        let (a, b) = (self.a.as_ref().unwrap(), self.b.as_mut().unwrap());
        let r_mh1 = restrict(&a.res, &b.res, &map, &coset.rep).unwrap();
        let r_h1 = restrict(&a.res, &b.res, &map, &h1_a).unwrap();
        let b_table = b.table(14, 104);
        let rhs = {
            let mut namer = Namer::new(&b.res, &b_table, &mut b.cache, AlgebraKey::B);
            let v = namer.eval("e0 v3^2 + h1^3 v3^3").unwrap().unwrap();
            ext_product(&b.res, &mut b.cache, &v, &r_h1, SolveStrategy::Canonical).unwrap()
        };
        let ok = classes_equal(&b.res, &r_mh1, &rhs);
        checks.push(Check::new(
            "p*(M h1) = (e0 v3^2 + h1^3 v3^3) p*(h1) in Ext_B",
            "restriction of the Mahowald operator",
            "equal",
            if ok { "equal" } else { "different" }.to_string(),
            ok,
        ));

        let mut indet_killed = true;
        for d in &coset.indet {
            let rd = restrict(&a.res, &b.res, &map, d).unwrap();
            if !class_is_zero(&b.res, &rd) {
                indet_killed = false;
            }
        }
        checks.push(Check::new(
            format!(
                "p* kills the indeterminacy of M h1 ({} spanning elements)",
                coset.indet.len()
            ),
            "restriction of the Mahowald operator",
            "all zero",
            if indet_killed { "all zero" } else { "nonzero image" }.to_string(),
            indet_killed,
        ));

        finish(5, "M h1 end-to-end", checks, vec![], t0)
    }

    // ----- criterion 6 -------------------------------------------------

    pub fn criterion_6(&mut self) -> CriterionReport {
        let t0 = Instant::now();
        let mut checks = Vec::new();
        let (coset, _) = self.mahowald_bracket("h1");
        let a = self.a_bundle();
        let table = a.table(A_BOUNDS.1 - 1, A_BOUNDS.0 + A_BOUNDS.1 - 1);
        let mut namer = Namer::new(&a.res, &table, &mut a.cache, AlgebraKey::A);
        let h1 = namer.resolve("h1").unwrap();
        let rhs = namer.eval("e0^3 + d0 e0g").unwrap().unwrap();
        drop(namer);
        let mut lhs = coset.rep.clone();
        for _ in 0..5 {
            lhs = ext_product(&a.res, &mut a.cache, &lhs, &h1, SolveStrategy::Canonical).unwrap();
        }
        let deg_ok = (lhs.s, lhs.f, lhs.w) == (51, 12, 30);
        let ok = classes_equal(&a.res, &lhs, &rhs);
        checks.push(Check::new(
            "M h1^6 = <g2, h0^3, h1> h1^5 = e0^3 + d0 e0g at (51, 12, 30)",
            "relation in Ext_C",
            "equal at (51,12,30)",
            format!(
                "{} at ({},{},{})",
                if ok { "equal" } else { "different" },
                lhs.s,
                lhs.f,
                lhs.w
            ),
            ok && deg_ok,
        ));
        // The bracket-times-h1^5 identity is insensitive to the bracket
        // indeterminacy: multiplying the indeterminacy by h1^5 must vanish.
        let mut indet_ok = true;
        for d in &coset.indet {
            let mut e = d.clone();
            for _ in 0..5 {
                e = ext_product(&a.res, &mut a.cache, &e, &h1, SolveStrategy::Canonical).unwrap();
            }
            if !class_is_zero(&a.res, &e) {
                indet_ok = false;
            }
        }
        checks.push(Check::new(
            "indeterminacy of the bracket times h1^5 vanishes",
            "well-definedness of M h1^6",
            "all zero",
            if indet_ok { "all zero" } else { "nonzero" }.to_string(),
            indet_ok,
        ));
        finish(6, "M h1^6 relation", checks, vec![], t0)
    }

    // ----- criterion 7 -------------------------------------------------

    pub fn criterion_7(&mut self) -> CriterionReport {
        let t0 = Instant::now();
        let mut checks = Vec::new();

        // Table row (53, 10, 28): p*(MP) = P e0 v3^2 + P h1^3 v3^3.
        let mp = {
            let a = self.a_bundle();
            let table = a.table(A_BOUNDS.1 - 1, A_BOUNDS.0 + A_BOUNDS.1 - 1);
            let mut namer = Namer::new(&a.res, &table, &mut a.cache, AlgebraKey::A);
            namer.resolve("MP").expect("MP named class")
        };
        let map = self.a_to_b_map(11, 63);
        let (a, b) = (self.a.as_ref().unwrap(), self.b.as_mut().unwrap());
        let r = restrict(&a.res, &b.res, &map, &mp).unwrap();
        let b_table = b.table(14, 104);
        let expected = {
            let mut namer = Namer::new(&b.res, &b_table, &mut b.cache, AlgebraKey::B);
            namer.eval("P e0 v3^2 + P h1^3 v3^3").unwrap().unwrap()
        };
        let ok = classes_equal(&b.res, &r, &expected);
        checks.push(Check::new(
            "p*(MP) = P e0 v3^2 + P h1^3 v3^3 at (53, 10, 28)",
            "restriction table row",
            "equal",
            if ok { "equal" } else { "different" }.to_string(),
            ok,
        ));

        // The (90, 12, 48) row is beyond desk scale as a Massey product;
        // its algebraic content is the identity
        // (e0 v3^2 + h1^3 v3^3)^2 = d0 g v3^4 + h1^6 v3^6 in Ext_B.
        {
            let b = self.b.as_mut().unwrap();
            let b_table = b.table(14, 104);
            let mut namer = Namer::new(&b.res, &b_table, &mut b.cache, AlgebraKey::B);
            let lhs0 = namer.eval("e0 v3^2 + h1^3 v3^3").unwrap().unwrap();
            let rhs = namer.eval("d0 g v3^4 + h1^6 v3^6").unwrap().unwrap();
            drop(namer);
            let lhs = ext_product(&b.res, &mut b.cache, &lhs0, &lhs0, SolveStrategy::Canonical)
                .unwrap();
            let deg_ok = (lhs.s, lhs.f, lhs.w) == (90, 12, 48);
            let ok = classes_equal(&b.res, &lhs, &rhs);
            checks.push(Check::new(
                "(e0 v3^2 + h1^3 v3^3)^2 = d0 g v3^4 + h1^6 v3^6 at (90, 12, 48)",
                "square of the bracket value in Ext_B",
                "equal at (90,12,48)",
                format!(
                    "{} at ({},{},{})",
                    if ok { "equal" } else { "different" },
                    lhs.s,
                    lhs.f,
                    lhs.w
                ),
                ok && deg_ok,
            ));
        }
        finish(7, "restriction table rows", checks, vec![], t0)
    }

    /// Non-gating extended rows at stems 56, 60, 66; requires the extended
    /// A fixture.
    pub fn extended_rows(&mut self) -> CriterionReport {
        let t0 = Instant::now();
        assert!(self.extended_a, "extended rows need the extended A fixture");
        let mut checks = Vec::new();
        let rows = [
            ("Delta2h1h3", "tau P g v3^2", (56i64, 10u32, 29i64)),
            ("B4", "a g v3^2", (60, 9, 32)),
            ("tB5", "tau h2 n g v3^2", (66, 10, 35)),
        ];
        // Candidate classes per row: the named class when the tridegree is
        // one-dimensional, otherwise every nonzero combination in the group
        // (identification is then up to that ambiguity and reported so).
        let candidates: Vec<(usize, Vec<ExtClass>, usize)> = {
            let a = self.a_bundle();
            let table = a.table(A_EXT_BOUNDS.1 - 1, A_EXT_BOUNDS.0 + A_EXT_BOUNDS.1 - 1);
            rows.iter()
                .enumerate()
                .filter_map(|(i, (_, _, (s, f, w)))| {
                    let group = table.group(*s, *f, *w)?;
                    let mut cands = Vec::new();
                    for mask in 1u32..(1 << group.dim.min(8)) {
                        let mut v = crate::f2::BitVector::zeros(group.basis[0].len());
                        for (k, b) in group.basis.iter().enumerate() {
                            if mask & (1 << k) != 0 {
                                v.xor_assign(b);
                            }
                        }
                        cands.push(ExtClass::from_vector(*s, *f, *w, v));
                    }
                    Some((i, cands, group.dim))
                })
                .collect()
        };
        let map = self.a_to_b_map(11, 77);
        let (a, b) = (self.a.as_ref().unwrap(), self.b.as_mut().unwrap());
        let b_table = b.table(14, 104);
        for (i, cands, dim) in candidates {
            let (name, formula, deg) = rows[i];
            let expected = {
                let mut namer = Namer::new(&b.res, &b_table, &mut b.cache, AlgebraKey::B);
                namer.eval(formula).unwrap().unwrap()
            };
            let mut matches = 0usize;
            for cand in &cands {
                let r = restrict(&a.res, &b.res, &map, cand).unwrap();
                if classes_equal(&b.res, &r, &expected) {
                    matches += 1;
                }
            }
            let (computed, ok) = if dim == 1 {
                (
                    if matches == 1 { "equal" } else { "different" }.to_string(),
                    matches == 1,
                )
            } else {
                (
                    format!(
                        "{matches} of {} candidate classes restrict to the formula (tridegree has dimension {dim}; identification ambiguous)",
                        cands.len()
                    ),
                    matches >= 1,
                )
            };
            checks.push(Check::new(
                format!("p*({name}) = {formula} at {deg:?}"),
                "restriction table row (heuristic identification)",
                "equal",
                computed,
                ok,
            ));
        }
        finish(10, "extended restriction rows (non-gating)", checks, vec![], t0)
    }

    // ----- criterion 8 -------------------------------------------------

    pub fn criterion_8(&mut self) -> CriterionReport {
        let t0 = Instant::now();
        let mut checks = Vec::new();
        for arg in ["h1", "h2"] {
            let (coset, _) = self.mahowald_bracket(arg);
            let a = self.a_bundle();
            let nonzero = !class_is_zero(&a.res, &coset.rep);
            checks.push(Check::new(
                format!("M {arg} != 0 in Ext_C"),
                "Mahowald operator spot check",
                "nonzero",
                if nonzero { "nonzero" } else { "zero" }.to_string(),
                nonzero,
            ));
        }
        // Corollary hypothesis: the images e0 * q*(x) are nonzero in
        // Ext_A(2) for x = h1, h2.
        let a_table = {
            let a = self.a_bundle();
            a.table(A_BOUNDS.1 - 1, A_BOUNDS.0 + A_BOUNDS.1 - 1)
        };
        let map = self.a_to_a2_map(2, 12);
        let (a, a2) = (self.a.as_ref().unwrap(), self.a2.as_mut().unwrap());
        let a2_table = a2.table(A2_BOUNDS.1 - 1, A2_BOUNDS.0 + A2_BOUNDS.1 - 1);
        for (name, s, f, w) in [("h1", 1i64, 1u32, 1i64), ("h2", 3, 1, 2)] {
            let g = a_table.group(s, f, w).unwrap();
            let x = ExtClass::from_vector(s, f, w, g.basis[0].clone());
            let qx = restrict(&a.res, &a2.res, &map, &x).unwrap();
            let e0 = {
                let mut namer = Namer::new(&a2.res, &a2_table, &mut a2.cache, AlgebraKey::A2);
                namer.resolve("e0").unwrap()
            };
            let prod =
                ext_product(&a2.res, &mut a2.cache, &e0, &qx, SolveStrategy::Canonical).unwrap();
            let nonzero = !class_is_zero(&a2.res, &prod);
            checks.push(Check::new(
                format!("e0 * image({name}) != 0 in Ext_A(2)"),
                "detection hypothesis",
                "nonzero",
                if nonzero { "nonzero" } else { "zero" }.to_string(),
                nonzero,
            ));
        }
        finish(8, "M x nonzero spot checks", checks, vec![], t0)
    }

    // ----- criterion 9 -------------------------------------------------

    /// `deep` exercises the perturbation property on the Mahowald bracket
    /// over the full algebra; the quick variant uses a small bracket over B.
    pub fn criterion_9(&mut self, deep: bool) -> CriterionReport {
        let t0 = Instant::now();
        let mut checks = Vec::new();

        // d o d = 0 on every generator of every fixture.
        {
            let mut all_zero = true;
            let mut count = 0usize;
            for bundle in [&self.a, &self.b, &self.a2, &self.e].into_iter().flatten() {
                for (&(f, _), gens) in bundle.res.cells() {
                    if f < 2 {
                        continue;
                    }
                    for g in gens {
                        count += 1;
                        if !bundle.res.apply_diff(&g.diff).is_zero() {
                            all_zero = false;
                        }
                    }
                }
            }
            checks.push(Check::new(
                format!("d o d = 0 on {count} generators"),
                "chain complex contract",
                "all zero",
                if all_zero { "all zero" } else { "violation" }.to_string(),
                all_zero,
            ));
        }

        // Checkpoint resume is bit-identical to an uninterrupted run.
        {
            let alg = Algebra::new(MotivicProfile::preset("B", 128).unwrap());
            let mut direct = Resolution::new(alg.clone());
            direct.extend(16, 6).unwrap();
            let mut partial = Resolution::new(alg);
            partial.extend(8, 6).unwrap();
            let blob = checkpoint_save(&partial);
            let mut resumed = checkpoint_load(&blob).unwrap();
            resumed.extend(16, 6).unwrap();
            let ok = checkpoint_save(&direct) == checkpoint_save(&resumed);
            checks.push(Check::new(
                "checkpoint resume equals uninterrupted run (bit-identical)",
                "determinism contract",
                "identical",
                if ok { "identical" } else { "different" }.to_string(),
                ok,
            ));
        }

        // Massey representatives under perturbed preimage choices differ by
        // indeterminacy only.
        {
            let (bundle, triple): (&mut Bundle, (ExtClass, ExtClass, ExtClass)) = if deep {
                let a = self.a_bundle();
                let table = a.table(A_BOUNDS.1 - 1, A_BOUNDS.0 + A_BOUNDS.1 - 1);
                let mut namer = Namer::new(&a.res, &table, &mut a.cache, AlgebraKey::A);
                let t = (
                    namer.resolve("g2").unwrap(),
                    namer.eval("h0^3").unwrap().unwrap(),
                    namer.resolve("h1").unwrap(),
                );
                drop(namer);
                (self.a.as_mut().unwrap(), t)
            } else {
                let b = self.b_bundle();
                let table = b.table(6, 20);
                let mut namer = Namer::new(&b.res, &table, &mut b.cache, AlgebraKey::B);
                let t = (
                    namer.resolve("h1").unwrap(),
                    namer.resolve("h0").unwrap(),
                    namer.resolve("h1").unwrap(),
                );
                drop(namer);
                (self.b.as_mut().unwrap(), t)
            };
            let table = if deep {
                bundle.table(A_BOUNDS.1 - 1, A_BOUNDS.0 + A_BOUNDS.1 - 1)
            } else {
                bundle.table(6, 20)
            };
            let (x, y, z) = triple;
            let canonical = massey(
                &bundle.res,
                &mut bundle.cache,
                &table,
                &x,
                &y,
                &z,
                SolveStrategy::Canonical,
            )
            .unwrap();
            let mut ok = true;
            for seed in [11u64, 9001] {
                let perturbed = massey(
                    &bundle.res,
                    &mut bundle.cache,
                    &table,
                    &x,
                    &y,
                    &z,
                    SolveStrategy::Perturbed(seed),
                )
                .unwrap();
                match table.group(canonical.rep.s, canonical.rep.f, canonical.rep.w) {
                    Some(g) => {
                        let coords = g.coordinates(&perturbed.rep.cocycle).unwrap();
                        if !canonical.contains_coords(&table, &coords) {
                            ok = false;
                        }
                    }
                    None => {
                        if !class_is_zero(&bundle.res, &perturbed.rep)
                            || !class_is_zero(&bundle.res, &canonical.rep)
                        {
                            ok = false;
                        }
                    }
                }
            }
            checks.push(Check::new(
                "perturbed Massey representatives lie in the canonical coset",
                "well-definedness of brackets",
                "in coset",
                if ok { "in coset" } else { "outside coset" }.to_string(),
                ok,
            ));
        }

        finish(9, "determinism and robustness", checks, vec![], t0)
    }

    /// Runs an operation against the full-algebra fixture (resolution,
    /// solver cache, Ext table).
    pub fn with_a<R>(
        &mut self,
        op: impl FnOnce(&Resolution, &mut SolverCache, &ExtTable) -> R,
    ) -> R {
        let a = self.a_bundle();
        let table = a.table(A_BOUNDS.1 - 1, A_BOUNDS.0 + A_BOUNDS.1 - 1);
        op(&a.res, &mut a.cache, &table)
    }

    /// Runs an operation against the B fixture.
    pub fn with_b<R>(
        &mut self,
        op: impl FnOnce(&Resolution, &mut SolverCache, &ExtTable) -> R,
    ) -> R {
        let b = self.b_bundle();
        let table = b.table(14, 104);
        op(&b.res, &mut b.cache, &table)
    }

    /// The cached restriction chain map from the B fixture into the A
    /// fixture, through the requested region.
    pub fn restriction_a_to_b(&mut self, f_max: u32, t_max: u32) -> RestrictionMap {
        self.a_to_b_map(f_max, t_max)
    }

    /// Both fixtures at once, for restriction-based checks.
    pub fn with_a_and_b<R>(
        &mut self,
        op: impl FnOnce(&Resolution, &mut SolverCache, &Resolution, &mut SolverCache) -> R,
    ) -> R {
        self.a_bundle();
        self.b_bundle();
        let mut a = self.a.take().unwrap();
        let b = self.b.as_mut().unwrap();
        let r = op(&a.res, &mut a.cache, &b.res, &mut b.cache);
        self.a = Some(a);
        r
    }

    /// The full gating suite.
    pub fn paper_suite(&mut self) -> Vec<CriterionReport> {
        vec![
            self.criterion_1(),
            self.criterion_2(45, 14),
            self.criterion_3(24, 8),
            self.criterion_4(3),
            self.criterion_5(),
            self.criterion_6(),
            self.criterion_7(),
            self.criterion_8(),
            self.criterion_9(true),
        ]
    }

    /// A fast subset: axioms, splitting and oracle equivalence over small
    /// ranges, low powers of the e0 family, determinism checks.
    pub fn quick_suite(&mut self) -> Vec<CriterionReport> {
        vec![
            self.criterion_1(),
            self.criterion_2(24, 10),
            self.criterion_3(14, 8),
            self.criterion_4(1),
            self.criterion_9(false),
        ]
    }
}
