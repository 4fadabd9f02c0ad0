//! Exhaustive verification that a profile presents a well-defined Hopf
//! algebra quotient: counit laws, coassociativity, multiplicativity of the
//! coproduct after quotient reduction, and vanishing of the ambient
//! coproducts of everything the quotient kills.

use super::{coproduct_mono, mono_mul, CoeffMode, Monomial, MotivicProfile, TensorElement};
use crate::hopf::Algebra;

#[derive(Debug, Clone)]
pub struct AxiomReport {
    pub pass: bool,
    /// Description of the first failing check, if any.
    pub witness: Option<String>,
    pub monomials_checked: usize,
    pub pairs_checked: usize,
}

impl AxiomReport {
    fn fail(witness: String, monomials: usize, pairs: usize) -> AxiomReport {
        AxiomReport {
            pass: false,
            witness: Some(witness),
            monomials_checked: monomials,
            pairs_checked: pairs,
        }
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
struct TripleTerm {
    a: Monomial,
    b: Monomial,
    c: Monomial,
    tau: u32,
}

fn dedup_parity<T: Ord>(mut v: Vec<T>) -> Vec<T> {
    v.sort();
    let mut out: Vec<T> = Vec::with_capacity(v.len());
    for x in v {
        if out.last() == Some(&x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

fn psi_on_left(profile: &MotivicProfile, psi: &TensorElement) -> Vec<TripleTerm> {
    let mut out = Vec::new();
    for term in &psi.terms {
        let inner = coproduct_mono(profile, &term.left);
        for t2 in &inner.terms {
            out.push(TripleTerm {
                a: t2.left.clone(),
                b: t2.right.clone(),
                c: term.right.clone(),
                tau: term.tau + t2.tau,
            });
        }
    }
    dedup_parity(out)
}

fn psi_on_right(profile: &MotivicProfile, psi: &TensorElement) -> Vec<TripleTerm> {
    let mut out = Vec::new();
    for term in &psi.terms {
        let inner = coproduct_mono(profile, &term.right);
        for t2 in &inner.terms {
            out.push(TripleTerm {
                a: term.left.clone(),
                b: t2.left.clone(),
                c: t2.right.clone(),
                tau: term.tau + t2.tau,
            });
        }
    }
    dedup_parity(out)
}

/// Applies the counit to one tensor factor: terms whose selected factor is
/// a scalar survive, as monomials with the tau power folded in.
fn counit_contract(psi: &TensorElement, left: bool) -> Vec<Monomial> {
    let mut out = Vec::new();
    for term in &psi.terms {
        let (scalar, kept) = if left {
            (&term.left, &term.right)
        } else {
            (&term.right, &term.left)
        };
        if scalar.is_one() {
            let mut m = kept.clone();
            m.tau_power += term.tau;
            out.push(m);
        }
    }
    dedup_parity(out)
}

/// The ambient (untruncated) profile in the same mode, capped at `cap`.
fn ambient_profile(mode: CoeffMode, cap: u32) -> MotivicProfile {
    MotivicProfile {
        mode,
        tau_present: Vec::new(),
        tau_tail: mode == CoeffMode::Motivic,
        xi_heights: Vec::new(),
        xi_tail: Some(super::Height::Unbounded),
        degree_cap: cap,
    }
}

/// Does the profile admit this monomial (all exponents within profile
/// heights, the degree cap being a construction truncation, not part of
/// the quotient)?
fn valid_in(profile: &MotivicProfile, m: &Monomial) -> bool {
    let mut mask = m.taus;
    while mask != 0 {
        let i = mask.trailing_zeros();
        if !profile.tau_profile_present(i) {
            return false;
        }
        mask &= mask - 1;
    }
    for (idx, &a) in m.xis.iter().enumerate() {
        if a > 0 && !profile.xi_profile_height(idx as u32 + 1).allows(a) {
            return false;
        }
    }
    true
}

/// Exhaustively verifies the Hopf axioms on all basis monomials with
/// `t <= t_max`: counit laws, coassociativity, multiplicativity of the
/// coproduct after quotient reduction, and that the ambient coproduct of
/// every element killed by the quotient reduces to zero. Returns a passing
/// report or the first failing witness.
pub fn check_hopf_axioms(algebra: &Algebra, t_max: u32) -> AxiomReport {
    let profile = algebra.profile();
    // Finite profiles are empty above their intrinsic maximal degree.
    let t_max = t_max.min(profile.degree_cap);
    let mut monomials = 0usize;
    let mut pairs = 0usize;

    // Killed generators: ambient coproduct must project to zero.
    let amb_cap = profile
        .degree_cap
        .max(2 * (t_max.min(profile.degree_cap)))
        .max(64);
    let ambient = ambient_profile(profile.mode, amb_cap);
    if profile.mode == CoeffMode::Motivic {
        for i in 0..=profile.max_tau_index() + 1 {
            // Only generators the profile itself kills carry quotient
            // content; absence forced by the degree cap is a truncation.
            if profile.tau_profile_present(i) || super::tau_degree(i).0 > amb_cap {
                continue;
            }
            let psi = coproduct_mono(&ambient, &Monomial::tau_gen(i));
            for term in &psi.terms {
                if valid_in(profile, &term.left) && valid_in(profile, &term.right) {
                    return AxiomReport::fail(
                        format!(
                            "killed generator tau{i} has surviving coproduct term {} (x) {}",
                            term.left, term.right
                        ),
                        monomials,
                        pairs,
                    );
                }
            }
        }
    }
    for j in 1..=profile.max_xi_index() + 1 {
        if profile.xi_degree(j).0 > amb_cap {
            continue;
        }
        let h = profile.xi_profile_height(j);
        let relation_exp = match h.max_exponent() {
            Some(e) => e + 1,
            None => continue,
        };
        if (relation_exp as u64) * (profile.xi_degree(j).0 as u64) > amb_cap as u64 {
            continue;
        }
        // The relation xi_j^{height}: its ambient coproduct must die.
        let rel = Monomial::xi_power(j, relation_exp);
        let psi = coproduct_mono(&ambient, &rel);
        let survivors: Vec<_> = psi
            .terms
            .iter()
            .filter(|t| valid_in(profile, &t.left) && valid_in(profile, &t.right))
            .cloned()
            .collect();
        if !dedup_parity(survivors.clone()).is_empty() {
            let t = &survivors[0];
            return AxiomReport::fail(
                format!(
                    "relation {} has surviving coproduct term {} (x) {}",
                    rel, t.left, t.right
                ),
                monomials,
                pairs,
            );
        }
    }

    let ids: Vec<_> = (0..=t_max).flat_map(|t| algebra.ids_of_degree(t)).collect();

    for &id in &ids {
        let m = algebra.monomial(id);
        let psi = coproduct_mono(profile, m);
        monomials += 1;

        let expected = vec![m.clone()];
        if counit_contract(&psi, true) != expected || counit_contract(&psi, false) != expected {
            return AxiomReport::fail(format!("counit law fails on {m}"), monomials, pairs);
        }

        if psi_on_left(profile, &psi) != psi_on_right(profile, &psi) {
            return AxiomReport::fail(format!("coassociativity fails on {m}"), monomials, pairs);
        }
    }

    for &a in &ids {
        let (ta, _) = algebra.bidegree(a);
        if ta == 0 {
            continue;
        }
        for &b in &ids {
            if b < a {
                continue;
            }
            let (tb, _) = algebra.bidegree(b);
            if tb == 0 || ta + tb > t_max {
                continue;
            }
            pairs += 1;
            let ma = algebra.monomial(a);
            let mb = algebra.monomial(b);
            let product_psi = match mono_mul(profile, ma, mb) {
                None => TensorElement::zero(ta + tb, 0),
                Some(prod) => coproduct_mono(profile, &prod),
            };
            let termwise = coproduct_mono(profile, ma).mul(profile, &coproduct_mono(profile, mb));
            if dedup_parity(product_psi.terms) != dedup_parity(termwise.terms) {
                return AxiomReport::fail(
                    format!("coproduct multiplicativity fails on {ma} * {mb}"),
                    monomials,
                    pairs,
                );
            }
        }
    }

    AxiomReport {
        pass: true,
        witness: None,
        monomials_checked: monomials,
        pairs_checked: pairs,
    }
}

/// Whether a basis monomial is primitive in the quotient:
/// `psi(m) = m (x) 1 + 1 (x) m`.
pub fn is_primitive(algebra: &Algebra, m: &Monomial) -> bool {
    let psi = coproduct_mono(algebra.profile(), m);
    psi.terms.len() == 2
        && psi
            .terms
            .iter()
            .all(|t| (t.left.is_one() || t.right.is_one()) && t.tau == 0)
}

/// Report from [`multiply_dual`]-level sanity of a profile: every generator
/// relation reduces consistently.
#[cfg(test)]
pub fn relation_products_vanish(algebra: &Algebra) -> bool {
    use super::DualElement;
    let profile = algebra.profile();
    if profile.mode == CoeffMode::Classical {
        return true;
    }
    for i in 0..=profile.max_tau_index() {
        if !profile.tau_at(i) {
            continue;
        }
        let ti = DualElement::from_monomial(profile, Monomial::tau_gen(i));
        let sq = super::multiply_dual(profile, &ti, &ti);
        let expect_zero = !profile.xi_at(i + 1).present()
            || profile.xi_degree(i + 1).0 > profile.degree_cap;
        if expect_zero != sq.is_zero() {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::Height;

    #[test]
    fn b_star_passes_axioms() {
        let alg = Algebra::new(MotivicProfile::preset("B", 64).unwrap());
        let report = check_hopf_axioms(&alg, 30);
        assert!(report.pass, "witness: {:?}", report.witness);
    }

    #[test]
    fn a2_star_passes_axioms() {
        let alg = Algebra::new(MotivicProfile::preset("A2", 64).unwrap());
        let report = check_hopf_axioms(&alg, 30);
        assert!(report.pass, "witness: {:?}", report.witness);
    }

    #[test]
    fn e_tau3_passes_axioms() {
        let alg = Algebra::new(MotivicProfile::preset("E-tau3", 64).unwrap());
        let report = check_hopf_axioms(&alg, 15);
        assert!(report.pass, "witness: {:?}", report.witness);
    }

    #[test]
    fn capped_a_passes_axioms() {
        let alg = Algebra::new(MotivicProfile::preset("A", 24).unwrap());
        let report = check_hopf_axioms(&alg, 24);
        assert!(report.pass, "witness: {:?}", report.witness);
    }

    #[test]
    fn invalid_profile_fails_with_witness() {
        // Keeping xi_2 at height 4 while truncating xi_1 to height 2 is not
        // a Hopf quotient: the coproduct of the killed xi_3 contains
        // xi_2^2 (x) xi_1 with both factors alive.
        let p = MotivicProfile {
            mode: CoeffMode::Motivic,
            tau_present: vec![true, true, true],
            tau_tail: false,
            xi_heights: vec![Height::Bounded(2), Height::Bounded(4)],
            xi_tail: None,
            degree_cap: 64,
        }
        .clamped();
        let alg = Algebra::new(p);
        let report = check_hopf_axioms(&alg, 20);
        assert!(!report.pass);
        let w = report.witness.unwrap();
        assert!(w.contains("xi3") || w.contains("xi2"), "witness: {w}");
    }

    #[test]
    fn tau3_primitive_in_b_star() {
        let alg = Algebra::new(MotivicProfile::preset("B", 64).unwrap());
        assert!(is_primitive(&alg, &Monomial::tau_gen(3)));
        assert!(!is_primitive(&alg, &Monomial::tau_gen(1)));
    }

    #[test]
    fn relation_consistency() {
        let alg = Algebra::new(MotivicProfile::preset("B", 64).unwrap());
        assert!(relation_products_vanish(&alg));
    }
}
