//! Integration tests for the cross-cutting invariants: classical/motivic
//! consistency, tau coherence of the Ext tables, bracket shuffling
//! containments, and the module-shuffle description of restricted Massey
//! products.

use std::path::PathBuf;
use std::sync::Arc;

use motex::f2::BitVector;
use motex::hopf::{Algebra, MotivicProfile};
use motex::resolution::{ExtTable, Resolution, SolveStrategy, SolverCache};
use motex::verify::Harness;
use motex::yoneda::{
    class_is_zero, classes_equal, ext_product, massey, restrict, restriction_map, Coset, ExtClass,
};

fn cache_dir() -> Option<PathBuf> {
    std::env::var_os("MOTEX_FIXTURE_DIR")
        .map(PathBuf::from)
        .or_else(|| option_env!("CARGO_TARGET_TMPDIR").map(PathBuf::from))
}

fn resolve(preset: &str, cap: u32, stem: u32, f: u32) -> Resolution {
    let alg = Algebra::new(MotivicProfile::preset(preset, cap).unwrap());
    let mut res = Resolution::new(alg);
    res.extend(stem, f).unwrap();
    res
}

/// Classical Ext dims agree with the tau-stable ranks of motivic Ext in
/// weight-collapsed bidegrees.
#[test]
fn classical_cross_check_through_stem_20() {
    let max_stem = 20i64;
    let max_f = 10u32;
    let cl = resolve("A-classical", 40, max_stem as u32, max_f + 1);
    let mo = resolve("A", 40, max_stem as u32, max_f + 1);
    let cl_table = ExtTable::new(&cl, max_f, (max_stem + max_f as i64) as u32).unwrap();
    let mo_table = ExtTable::new(&mo, max_f, (max_stem + max_f as i64) as u32).unwrap();
    for s in 0..=max_stem {
        for f in 1..=max_f {
            let classical = cl_table.dim(s, f, 0).unwrap();
            // Far below every band the motivic dims are tau-stable; that
            // stable value is the tau-inverted (classical) dimension.
            let stable = mo_table.dim(s, f, -1000).unwrap();
            assert_eq!(
                classical, stable,
                "classical vs tau-stable motivic at ({s}, {f})"
            );
        }
    }
}

/// Composing the stored tau matrices two steps agrees with re-expressing a
/// weight-w basis directly at weight w - 2.
#[test]
fn tau_action_composes_coherently() {
    let res = resolve("B", 128, 24, 9);
    let table = ExtTable::new(&res, 8, 32).unwrap();
    let mut checked = 0;
    for (s, f, w, _, _) in table.rows() {
        let Some(g2) = table.group(s, f, w) else { continue };
        let (Some(g1), Some(g0)) = (table.group(s, f, w - 1), table.group(s, f, w - 2)) else {
            continue;
        };
        for b in &g2.basis {
            // Route one: express at w-1, push through that group's tau.
            let at_w1 = g1.coordinates(b).expect("tau image");
            let mut via = BitVector::zeros(g0.dim);
            for i in at_w1.ones() {
                via.xor_assign(&g0.coordinates(&g1.basis[i]).unwrap());
            }
            // Route two: express directly at w-2.
            let direct = g0.coordinates(b).expect("tau^2 image");
            assert_eq!(via, direct, "tau coherence at ({s},{f},{w})");
            checked += 1;
        }
    }
    assert!(checked > 100, "coherence check covered {checked} classes");
}

fn coset_subset(table: &ExtTable, small: &Coset, big: &Coset) -> bool {
    let (rep_s, _) = small.reduced(table);
    let (rep_b, ech_b) = big.reduced(table);
    let mut d = rep_s;
    d.xor_assign(&rep_b);
    if !ech_b.contains(&d) {
        return false;
    }
    let (_, ech_s) = small.reduced(table);
    ech_s.basis().iter().all(|v| ech_b.contains(v))
}

/// Shuffling containments of the Mahowald bracket:
/// <h0^2 g2, h0, h1> is contained in <h0 g2, h0^2, h1> is contained in
/// <g2, h0^3, h1>.
#[test]
fn bracket_shuffling_containments() {
    let mut harness = Harness::new(cache_dir());
    harness.with_a(|res, cache, table| {
        let class = |s: i64, f: u32, w: i64| {
            let g = table.group(s, f, w).unwrap();
            assert_eq!(g.dim, 1);
            ExtClass::from_vector(s, f, w, g.basis[0].clone())
        };
        let g2 = class(44, 4, 24);
        let h0 = class(0, 1, 0);
        let h1 = class(1, 1, 1);
        let h0h0 = ext_product(res, cache, &h0, &h0, SolveStrategy::Canonical).unwrap();
        let h0cubed = ext_product(res, cache, &h0h0, &h0, SolveStrategy::Canonical).unwrap();
        let h0g2 = ext_product(res, cache, &h0, &g2, SolveStrategy::Canonical).unwrap();
        let h0h0g2 = ext_product(res, cache, &h0h0, &g2, SolveStrategy::Canonical).unwrap();
        assert!(!class_is_zero(res, &h0g2));
        assert!(!class_is_zero(res, &h0h0g2));

        let strat = SolveStrategy::Canonical;
        let inner = massey(res, cache, table, &h0h0g2, &h0, &h1, strat).unwrap();
        let middle = massey(res, cache, table, &h0g2, &h0h0, &h1, strat).unwrap();
        let outer = massey(res, cache, table, &g2, &h0cubed, &h1, strat).unwrap();
        assert!(
            coset_subset(table, &inner, &middle),
            "<h0^2 g2, h0, h1> inside <h0 g2, h0^2, h1>"
        );
        assert!(
            coset_subset(table, &middle, &outer),
            "<h0 g2, h0^2, h1> inside <g2, h0^3, h1>"
        );
    });
}

/// The bracket <h0^3, g2, h0^3> vanishes (which is what makes the iterated
/// operator well-defined).
#[test]
fn symmetric_bracket_on_h0_cubed_vanishes() {
    let mut harness = Harness::new(cache_dir());
    harness.with_a(|res, cache, table| {
        let class = |s: i64, f: u32, w: i64| {
            let g = table.group(s, f, w).unwrap();
            ExtClass::from_vector(s, f, w, g.basis[0].clone())
        };
        let g2 = class(44, 4, 24);
        let h0 = class(0, 1, 0);
        let h0sq = ext_product(res, cache, &h0, &h0, SolveStrategy::Canonical).unwrap();
        let h0cubed = ext_product(res, cache, &h0sq, &h0, SolveStrategy::Canonical).unwrap();
        let coset = massey(
            res,
            cache,
            table,
            &h0cubed,
            &g2,
            &h0cubed,
            SolveStrategy::Canonical,
        )
        .unwrap();
        assert_eq!((coset.rep.s, coset.rep.f, coset.rep.w), (45, 9, 24));
        // Zero as a coset: the representative lies in the indeterminacy.
        match table.group(45, 9, 24) {
            None => {}
            Some(g) => {
                let coords = g.coordinates(&coset.rep.cocycle).unwrap();
                let (_, ech) = coset.reduced(table);
                let zero = motex::f2::BitVector::zeros(coords.len());
                let mut d = coords;
                d.xor_assign(&zero);
                assert!(
                    ech.contains(&d) || d.is_zero(),
                    "<h0^3, g2, h0^3> must contain zero"
                );
            }
        }
    });
}

/// Module shuffle: the restriction of <g2, h0^3, x> equals the restricted
/// bracket <1, g2, h0^3> (computed inside Ext_B through the restriction of
/// the factors) multiplied by the restriction of x, with no indeterminacy.
#[test]
fn restricted_bracket_shuffles_through_the_module_structure() {
    let mut harness = Harness::new(cache_dir());
    // The bracket over A and its restriction.
    let (bracket, h1_a, g2_a, h0cubed_a) = harness.with_a(|res, cache, table| {
        let class = |s: i64, f: u32, w: i64| {
            let g = table.group(s, f, w).unwrap();
            ExtClass::from_vector(s, f, w, g.basis[0].clone())
        };
        let g2 = class(44, 4, 24);
        let h0 = class(0, 1, 0);
        let h1 = class(1, 1, 1);
        let h0sq = ext_product(res, cache, &h0, &h0, SolveStrategy::Canonical).unwrap();
        let h0cubed = ext_product(res, cache, &h0sq, &h0, SolveStrategy::Canonical).unwrap();
        let coset = massey(res, cache, table, &g2, &h0cubed, &h1, SolveStrategy::Canonical)
            .unwrap();
        (coset, h1, g2, h0cubed)
    });
    let map = harness.restriction_a_to_b(8, 54);
    let verdict = harness.with_a_and_b(|a_res, _a_cache, b_res, b_cache| {
        let p_mh1 = restrict(a_res, b_res, &map, &bracket.rep).unwrap();
        let p_h1 = restrict(a_res, b_res, &map, &h1_a).unwrap();
        let p_g2 = restrict(a_res, b_res, &map, &g2_a).unwrap();
        let p_h0cubed = restrict(a_res, b_res, &map, &h0cubed_a).unwrap();
        assert!(class_is_zero(b_res, &p_g2), "image of g2 vanishes in Ext_B");

        // The module bracket <1, g2, h0^3> realized internally over B.
        // With first entry 1 the internal bracket carries the full group as
        // formal indeterminacy, so the shuffle is a coset-level statement:
        // p*(<g2, h0^3, h1>) lies in (bracket coset) * p*(h1).
        let b_table = ExtTable::new(b_res, 10, 60).unwrap();
        let one = ExtClass::unit();
        let module_bracket = massey(
            b_res,
            b_cache,
            &b_table,
            &one,
            &p_g2,
            &p_h0cubed,
            SolveStrategy::Canonical,
        )
        .unwrap();
        let shuffled_rep = ext_product(
            b_res,
            b_cache,
            &module_bracket.rep,
            &p_h1,
            SolveStrategy::Canonical,
        )
        .unwrap();
        let mut diff = shuffled_rep.add(&p_mh1);
        let mut in_coset = class_is_zero(b_res, &diff);
        if !in_coset {
            // Subtract indeterminacy images until the difference bounds.
            let mut span: Vec<ExtClass> = Vec::new();
            for d in &module_bracket.indet {
                let dd =
                    ext_product(b_res, b_cache, d, &p_h1, SolveStrategy::Canonical).unwrap();
                if !class_is_zero(b_res, &dd) {
                    span.push(dd);
                }
            }
            // Brute force over the (small) span.
            let n = span.len().min(12);
            'outer: for mask in 0u32..(1 << n) {
                let mut cand = diff.clone();
                for (i, v) in span.iter().take(n).enumerate() {
                    if mask & (1 << i) != 0 {
                        cand = cand.add(v);
                    }
                }
                if class_is_zero(b_res, &cand) {
                    in_coset = true;
                    break 'outer;
                }
            }
            diff = shuffled_rep.add(&p_mh1);
            let _ = diff;
        }
        in_coset
    });
    assert!(verdict, "restriction shuffles through the module structure");
}

/// Products on computed classes commute and associate across a sampled
/// range (spot property check over B).
#[test]
fn product_commutativity_and_associativity_samples() {
    for preset in ["B", "A2"] {
        product_sample_check(preset);
    }
}

fn product_sample_check(preset: &str) {
    let res = Arc::new(resolve(preset, 128, 30, 8));
    let table = ExtTable::new(&res, 7, 37).unwrap();
    let mut cache = SolverCache::default();
    let mut classes = Vec::new();
    for (s, f, w, _, _) in table.rows() {
        if s + (f as i64) > 18 || f == 0 {
            continue;
        }
        let g = table.group(s, f, w).unwrap();
        classes.push(ExtClass::from_vector(s, f, w, g.basis[0].clone()));
    }
    classes.truncate(14);
    for x in &classes {
        for y in &classes {
            if x.s + y.s > 30 || x.f + y.f > 7 {
                continue;
            }
            let xy = ext_product(&res, &mut cache, x, y, SolveStrategy::Canonical).unwrap();
            let yx = ext_product(&res, &mut cache, y, x, SolveStrategy::Canonical).unwrap();
            assert!(
                classes_equal(&res, &xy, &yx),
                "commutativity at ({},{},{}) * ({},{},{})",
                x.s,
                x.f,
                x.w,
                y.s,
                y.f,
                y.w
            );
        }
    }
    // Associativity on a few triples.
    for x in classes.iter().take(4) {
        for y in classes.iter().take(4) {
            for z in classes.iter().take(4) {
                if x.s + y.s + z.s > 18 || x.f + y.f + z.f > 7 {
                    continue;
                }
                let xy = ext_product(&res, &mut cache, x, y, SolveStrategy::Canonical).unwrap();
                let xy_z = ext_product(&res, &mut cache, &xy, z, SolveStrategy::Canonical).unwrap();
                let yz = ext_product(&res, &mut cache, y, z, SolveStrategy::Canonical).unwrap();
                let x_yz = ext_product(&res, &mut cache, x, &yz, SolveStrategy::Canonical).unwrap();
                assert!(classes_equal(&res, &xy_z, &x_yz), "associativity");
            }
        }
    }
    // tau-linearity: tau (x y) = (tau x) y.
    let tau = ExtClass {
        s: 0,
        f: 0,
        w: -1,
        cocycle: motex::f2::BitVector::from_indices(1, &[0]),
    };
    for x in classes.iter().take(5) {
        for y in classes.iter().take(5) {
            if x.s + y.s > 20 || x.f + y.f > 7 {
                continue;
            }
            let xy = ext_product(&res, &mut cache, x, y, SolveStrategy::Canonical).unwrap();
            let txy = ext_product(&res, &mut cache, &tau, &xy, SolveStrategy::Canonical).unwrap();
            let tx = ext_product(&res, &mut cache, &tau, x, SolveStrategy::Canonical).unwrap();
            let tx_y = ext_product(&res, &mut cache, &tx, y, SolveStrategy::Canonical).unwrap();
            assert!(classes_equal(&res, &txy, &tx_y), "tau-linearity");
        }
    }
}

/// The restriction values the analysis pivots on: p*(d0) = d0,
/// p*(e0) = e0 + h1^3 v3, p*(h5) = 0.
#[test]
fn restriction_values_of_d0_e0_h5() {
    let amb = resolve("A", 45, 32, 8);
    let sub = resolve("B", 128, 32, 8);
    let mut amb_cache = SolverCache::default();
    let map = restriction_map(&amb, &mut amb_cache, &sub, 7, 40, SolveStrategy::Canonical)
        .unwrap();
    let amb_table = ExtTable::new(&amb, 7, 40).unwrap();
    let sub_table = ExtTable::new(&sub, 7, 40).unwrap();
    let mut sub_cache = SolverCache::default();

    let amb_class = |s: i64, f: u32, w: i64| {
        let g = amb_table.group(s, f, w).unwrap();
        assert_eq!(g.dim, 1);
        ExtClass::from_vector(s, f, w, g.basis[0].clone())
    };

    // p*(d0) = d0: both tridegrees are one-dimensional.
    let d0 = amb_class(14, 4, 8);
    let r = restrict(&amb, &sub, &map, &d0).unwrap();
    let d0_b = {
        let g = sub_table.group(14, 4, 8).unwrap();
        ExtClass::from_vector(14, 4, 8, g.basis[0].clone())
    };
    assert!(classes_equal(&sub, &r, &d0_b));

    // p*(h5) = 0 for degree reasons.
    let h5 = amb_class(31, 1, 16);
    let r = restrict(&amb, &sub, &map, &h5).unwrap();
    assert!(class_is_zero(&sub, &r), "p*(h5) = 0");

    // p*(e0) = e0 + h1^3 v3, where e0 in Ext_B is pinned by h1^2 e0 = c0 u.
    let mut namer = motex::naming::Namer::new(
        &sub,
        &sub_table,
        &mut sub_cache,
        motex::naming::AlgebraKey::B,
    );
    let expected = namer.eval("e0 + h1^3 v3").unwrap().unwrap();
    let e0_a = amb_class(17, 4, 10);
    let r = restrict(&amb, &sub, &map, &e0_a).unwrap();
    assert!(
        classes_equal(&sub, &r, &expected),
        "p*(e0) = e0 + h1^3 v3"
    );
    let not_e0 = namer.eval("e0").unwrap().unwrap();
    assert!(!classes_equal(&sub, &r, &not_e0));
}
