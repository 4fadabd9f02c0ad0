//! Quotient dual Steenrod algebras presented from profile data.
//!
//! The dual C-motivic Steenrod algebra is `M2[tau_0, tau_1, .., xi_1, xi_2, ..]`
//! modulo `tau_i^2 = tau * xi_{i+1}`, over the ground ring `M2 = F2[tau]`.
//! A profile selects truncation heights for the generators; the quotient is
//! free over `M2` on the monomials within heights. Classical mode presents
//! `F2[zeta_1, zeta_2, ..]` with heights and no tau.
//!
//! Bidegrees `(t, w)` on the dual (homology) side:
//!  - `tau_i`: `(2^{i+1} - 1, 2^i - 1)`, `xi_i`: `(2^{i+1} - 2, 2^i - 1)`,
//!  - the ground element `tau`: `(0, -1)`,
//!  - classical `zeta_i`: `(2^i - 1, 0)`.

mod algebra;
mod axioms;

pub use algebra::{inclusion_image, milnor_multiply, Algebra, InclusionError, MilnorElement, MonoId};
pub use axioms::{check_hopf_axioms, is_primitive, AxiomReport};

use std::cmp::Ordering;
use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CoeffMode {
    Motivic,
    Classical,
}

/// Truncation height of a polynomial generator: `Bounded(h)` imposes
/// `x^h = 0` (so `h = 1` means the generator is absent), `Unbounded` keeps
/// all powers up to the degree cap.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Height {
    Bounded(u32),
    Unbounded,
}

impl Height {
    pub fn max_exponent(self) -> Option<u32> {
        match self {
            Height::Bounded(h) => Some(h - 1),
            Height::Unbounded => None,
        }
    }

    pub fn present(self) -> bool {
        !matches!(self, Height::Bounded(0) | Height::Bounded(1))
    }

    fn allows(self, exp: u32) -> bool {
        match self {
            Height::Bounded(h) => exp < h,
            Height::Unbounded => true,
        }
    }
}

/// Finite presentation data for a quotient of the dual Steenrod algebra.
///
/// `tau_present[i]` / `xi_heights[j]` describe `tau_i` / `xi_{j+1}` (in
/// classical mode `xi_heights[j]` describes `zeta_{j+1}` and the tau data is
/// empty). The `tail` fields extend the pattern to all higher indices,
/// truncated only by `degree_cap`; this is how the full algebra `A` is
/// presented.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MotivicProfile {
    pub mode: CoeffMode,
    pub tau_present: Vec<bool>,
    pub tau_tail: bool,
    pub xi_heights: Vec<Height>,
    pub xi_tail: Option<Height>,
    pub degree_cap: u32,
}

pub const PRESET_NAMES: [&str; 6] = ["A", "A2", "B", "E-tau3", "B-classical", "A-classical"];

impl MotivicProfile {
    /// Named presets. `degree_cap` is a hard construction-time bound on
    /// monomial internal degree; finite profiles clamp it to their intrinsic
    /// maximal degree.
    pub fn preset(name: &str, degree_cap: u32) -> Option<MotivicProfile> {
        let b4 = Height::Bounded(4);
        let b2 = Height::Bounded(2);
        let p = match name {
            "A" => MotivicProfile {
                mode: CoeffMode::Motivic,
                tau_present: Vec::new(),
                tau_tail: true,
                xi_heights: Vec::new(),
                xi_tail: Some(Height::Unbounded),
                degree_cap,
            },
            "A2" => MotivicProfile {
                mode: CoeffMode::Motivic,
                tau_present: vec![true, true, true],
                tau_tail: false,
                xi_heights: vec![b4, b2],
                xi_tail: None,
                degree_cap,
            },
            "B" => MotivicProfile {
                mode: CoeffMode::Motivic,
                tau_present: vec![true, true, true, true],
                tau_tail: false,
                xi_heights: vec![b4, b2],
                xi_tail: None,
                degree_cap,
            },
            "E-tau3" => MotivicProfile {
                mode: CoeffMode::Motivic,
                tau_present: vec![false, false, false, true],
                tau_tail: false,
                xi_heights: Vec::new(),
                xi_tail: None,
                degree_cap,
            },
            "B-classical" => MotivicProfile {
                mode: CoeffMode::Classical,
                tau_present: Vec::new(),
                tau_tail: false,
                xi_heights: vec![Height::Bounded(8), b4, b2, b2],
                xi_tail: None,
                degree_cap,
            },
            "A-classical" => MotivicProfile {
                mode: CoeffMode::Classical,
                tau_present: Vec::new(),
                tau_tail: false,
                xi_heights: Vec::new(),
                xi_tail: Some(Height::Unbounded),
                degree_cap,
            },
            _ => return None,
        };
        Some(p.clamped())
    }

    /// Clamps the degree cap to the intrinsic maximal monomial degree when
    /// every generator is bounded.
    pub fn clamped(mut self) -> MotivicProfile {
        if let Some(intrinsic) = self.intrinsic_max_degree() {
            self.degree_cap = self.degree_cap.min(intrinsic);
        }
        self
    }

    /// Whether the degree cap genuinely truncates the algebra (some
    /// generator family is unbounded). Finite profiles contain all their
    /// monomials regardless of the cap.
    pub fn is_cap_limited(&self) -> bool {
        self.intrinsic_max_degree().is_none()
    }

    fn intrinsic_max_degree(&self) -> Option<u32> {
        if self.tau_tail || self.xi_tail.map_or(false, |h| h.present()) {
            return None;
        }
        let mut total = 0u32;
        for (i, &p) in self.tau_present.iter().enumerate() {
            if p {
                total += tau_degree(i as u32).0;
            }
        }
        for (j, h) in self.xi_heights.iter().enumerate() {
            match h.max_exponent() {
                Some(e) => total += e * self.xi_degree(j as u32 + 1).0,
                None => return None,
            }
        }
        Some(total)
    }

    pub fn tau_at(&self, i: u32) -> bool {
        self.tau_profile_present(i) && tau_degree(i).0 <= self.degree_cap
    }

    /// Whether `tau_i` is present in the profile itself, ignoring the
    /// degree cap. A generator absent only because of the cap is a
    /// construction truncation, not quotient content.
    pub fn tau_profile_present(&self, i: u32) -> bool {
        if self.mode == CoeffMode::Classical {
            return false;
        }
        match self.tau_present.get(i as usize) {
            Some(&p) => p,
            None => self.tau_tail,
        }
    }

    /// Height of `xi_j` (motivic, `j >= 1`) or `zeta_j` (classical).
    pub fn xi_at(&self, j: u32) -> Height {
        let h = self.xi_profile_height(j);
        if h.present() && self.xi_degree(j).0 <= self.degree_cap {
            h
        } else {
            Height::Bounded(1)
        }
    }

    /// Height of `xi_j` in the profile itself, ignoring the degree cap.
    pub fn xi_profile_height(&self, j: u32) -> Height {
        assert!(j >= 1);
        match self.xi_heights.get(j as usize - 1) {
            Some(&h) => h,
            None => self.xi_tail.unwrap_or(Height::Bounded(1)),
        }
    }

    /// Bidegree of `xi_j` / `zeta_j` in this profile's mode.
    pub fn xi_degree(&self, j: u32) -> (u32, u32) {
        match self.mode {
            CoeffMode::Motivic => ((1 << (j + 1)) - 2, (1 << j) - 1),
            CoeffMode::Classical => ((1 << j) - 1, 0),
        }
    }

    /// Largest tau index that can appear under the degree cap.
    pub fn max_tau_index(&self) -> u32 {
        if self.mode == CoeffMode::Classical {
            return 0;
        }
        let mut max = self.tau_present.len() as u32;
        if self.tau_tail {
            while tau_degree(max).0 <= self.degree_cap {
                max += 1;
            }
        }
        max
    }

    /// Largest xi/zeta index that can appear under the degree cap.
    pub fn max_xi_index(&self) -> u32 {
        let mut max = self.xi_heights.len() as u32;
        if self.xi_tail.map_or(false, |h| h.present()) {
            while self.xi_degree(max + 1).0 <= self.degree_cap {
                max += 1;
            }
        }
        max
    }

    /// Whether `sub`'s heights are dominated by `self`'s, indexwise.
    pub fn contains(&self, sub: &MotivicProfile) -> bool {
        if self.mode != sub.mode {
            return false;
        }
        for i in 0..=sub.max_tau_index() {
            if sub.tau_at(i) && !self.tau_at(i) {
                return false;
            }
        }
        for j in 1..=sub.max_xi_index().max(1) {
            let (sh, ah) = (sub.xi_at(j), self.xi_at(j));
            let ok = match (sh, ah) {
                (_, Height::Unbounded) => true,
                (Height::Unbounded, _) => false,
                (Height::Bounded(s), Height::Bounded(a)) => s <= a,
            };
            if !ok {
                return false;
            }
        }
        true
    }
}

pub fn tau_degree(i: u32) -> (u32, u32) {
    ((1 << (i + 1)) - 1, (1 << i) - 1)
}

/// A monomial of the dual algebra: `tau^tau_power * prod tau_i^{e_i} *
/// prod xi_j^{a_j}` (classical: `prod zeta_j^{a_j}`).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    pub tau_power: u32,
    /// Bitmask of exterior `tau_i` factors (bit `i` set means `tau_i`).
    pub taus: u64,
    /// Exponents of `xi_1, xi_2, ..` (`zeta_1, ..` classically); trailing
    /// zeros trimmed.
    pub xis: Vec<u32>,
}

impl Monomial {
    pub fn one() -> Monomial {
        Monomial {
            tau_power: 0,
            taus: 0,
            xis: Vec::new(),
        }
    }

    pub fn tau_gen(i: u32) -> Monomial {
        Monomial {
            tau_power: 0,
            taus: 1 << i,
            xis: Vec::new(),
        }
    }

    pub fn xi_power(j: u32, e: u32) -> Monomial {
        assert!(j >= 1);
        let mut xis = vec![0; j as usize];
        xis[j as usize - 1] = e;
        let mut m = Monomial {
            tau_power: 0,
            taus: 0,
            xis,
        };
        m.trim();
        m
    }

    pub fn ground_tau(c: u32) -> Monomial {
        Monomial {
            tau_power: c,
            taus: 0,
            xis: Vec::new(),
        }
    }

    fn trim(&mut self) {
        while self.xis.last() == Some(&0) {
            self.xis.pop();
        }
    }

    pub fn is_one(&self) -> bool {
        self.tau_power == 0 && self.is_scalar()
    }

    /// True when the monomial is a power of the ground tau (possibly 1).
    pub fn is_scalar(&self) -> bool {
        self.taus == 0 && self.xis.is_empty()
    }

    pub fn xi_exp(&self, j: u32) -> u32 {
        self.xis.get(j as usize - 1).copied().unwrap_or(0)
    }

    /// `(t, w)` in the profile's mode, with the ground tau contributing
    /// `(0, -1)` per power.
    pub fn bidegree(&self, profile: &MotivicProfile) -> (u32, i64) {
        let mut t = 0u32;
        let mut w = -(self.tau_power as i64);
        let mut mask = self.taus;
        while mask != 0 {
            let i = mask.trailing_zeros();
            let (dt, dw) = tau_degree(i);
            t += dt;
            w += dw as i64;
            mask &= mask - 1;
        }
        for (idx, &a) in self.xis.iter().enumerate() {
            let (dt, dw) = profile.xi_degree(idx as u32 + 1);
            t += a * dt;
            w += (a as i64) * (dw as i64);
        }
        (t, w)
    }

    /// Strips the ground tau power, returning `(power, reduced monomial)`.
    pub fn split_tau(mut self) -> (u32, Monomial) {
        let c = self.tau_power;
        self.tau_power = 0;
        (c, self)
    }

    /// Canonical order: lexicographic on the exponent tuple
    /// `(tau_0, tau_1, .., xi_1, xi_2, ..)`, tau power last.
    pub fn canonical_cmp(&self, other: &Monomial) -> Ordering {
        let a = self.taus.reverse_bits();
        let b = other.taus.reverse_bits();
        a.cmp(&b)
            .then_with(|| {
                let n = self.xis.len().max(other.xis.len());
                for j in 0..n {
                    let x = self.xis.get(j).copied().unwrap_or(0);
                    let y = other.xis.get(j).copied().unwrap_or(0);
                    match x.cmp(&y) {
                        Ordering::Equal => {}
                        o => return o,
                    }
                }
                Ordering::Equal
            })
            .then(self.tau_power.cmp(&other.tau_power))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.canonical_cmp(other)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.tau_power == 1 {
            parts.push("tau".to_string());
        } else if self.tau_power > 1 {
            parts.push(format!("tau^{}", self.tau_power));
        }
        let mut mask = self.taus;
        while mask != 0 {
            let i = mask.trailing_zeros();
            parts.push(format!("tau{i}"));
            mask &= mask - 1;
        }
        for (idx, &a) in self.xis.iter().enumerate() {
            if a == 1 {
                parts.push(format!("xi{}", idx + 1));
            } else if a > 1 {
                parts.push(format!("xi{}^{a}", idx + 1));
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

/// Multiplies two monomials in the quotient, rewriting `tau_i^2` to
/// `tau * xi_{i+1}` when `xi_{i+1}` is present (to zero otherwise) and
/// truncating by the xi heights. Returns `None` for zero.
///
/// The rewrite is applied before height truncation; it is confluent because
/// rewriting `tau_i^2` only ever creates generators of strictly higher index.
pub fn mono_mul(profile: &MotivicProfile, a: &Monomial, b: &Monomial) -> Option<Monomial> {
    let mut tau_power = a.tau_power + b.tau_power;
    let carries = a.taus & b.taus;
    let taus = a.taus ^ b.taus;
    let n = a.xis.len().max(b.xis.len());
    let mut xis = vec![0u32; n];
    for (j, x) in xis.iter_mut().enumerate() {
        *x = a.xis.get(j).copied().unwrap_or(0) + b.xis.get(j).copied().unwrap_or(0);
    }
    let mut mask = carries;
    while mask != 0 {
        let i = mask.trailing_zeros();
        // tau_i^2 -> tau * xi_{i+1}
        if profile.mode == CoeffMode::Classical {
            unreachable!("classical monomials carry no tau_i");
        }
        if !profile.xi_at(i + 1).present() {
            return None;
        }
        tau_power += 1;
        if xis.len() < (i + 1) as usize {
            xis.resize((i + 1) as usize, 0);
        }
        xis[i as usize] += 1;
        mask &= mask - 1;
    }
    for (j, &x) in xis.iter().enumerate() {
        if x > 0 && !profile.xi_at(j as u32 + 1).allows(x) {
            return None;
        }
    }
    let mut mask = taus;
    while mask != 0 {
        let i = mask.trailing_zeros();
        if !profile.tau_at(i) {
            return None;
        }
        mask &= mask - 1;
    }
    let mut m = Monomial {
        tau_power,
        taus,
        xis,
    };
    m.trim();
    Some(m)
}

pub fn mono_pow(profile: &MotivicProfile, m: &Monomial, mut e: u32) -> Option<Monomial> {
    let mut result = Monomial::one();
    let mut base = m.clone();
    while e > 0 {
        if e & 1 == 1 {
            result = mono_mul(profile, &result, &base)?;
        }
        e >>= 1;
        if e > 0 {
            base = mono_mul(profile, &base, &base)?;
        }
    }
    Some(result)
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

/// A homogeneous F2[tau]-linear combination of monomials, all of bidegree
/// `(t, w)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DualElement {
    pub t: u32,
    pub w: i64,
    pub terms: Vec<Monomial>,
}

impl DualElement {
    pub fn zero(t: u32, w: i64) -> DualElement {
        DualElement {
            t,
            w,
            terms: Vec::new(),
        }
    }

    pub fn from_monomial(profile: &MotivicProfile, m: Monomial) -> DualElement {
        let (t, w) = m.bidegree(profile);
        DualElement {
            t,
            w,
            terms: vec![m],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &DualElement) -> DualElement {
        assert_eq!((self.t, self.w), (other.t, other.w), "inhomogeneous sum");
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        DualElement {
            t: self.t,
            w: self.w,
            terms: dedup_parity(terms),
        }
    }
}

/// Product in the quotient dual algebra.
pub fn multiply_dual(profile: &MotivicProfile, a: &DualElement, b: &DualElement) -> DualElement {
    let mut terms = Vec::new();
    for x in &a.terms {
        for y in &b.terms {
            if let Some(m) = mono_mul(profile, x, y) {
                terms.push(m);
            }
        }
    }
    DualElement {
        t: a.t + b.t,
        w: a.w + b.w,
        terms: dedup_parity(terms),
    }
}

/// A term `tau^c (left x right)` of an element of `B* (x) B*`; both factors
/// are tau-power-free, the ground tau being extracted into `c` (the tensor
/// is over `M2`).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct TensorTerm {
    pub left: Monomial,
    pub right: Monomial,
    pub tau: u32,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TensorElement {
    pub t: u32,
    pub w: i64,
    pub terms: Vec<TensorTerm>,
}

impl TensorElement {
    pub fn zero(t: u32, w: i64) -> TensorElement {
        TensorElement {
            t,
            w,
            terms: Vec::new(),
        }
    }

    pub fn unit() -> TensorElement {
        TensorElement {
            t: 0,
            w: 0,
            terms: vec![TensorTerm {
                left: Monomial::one(),
                right: Monomial::one(),
                tau: 0,
            }],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &TensorElement) -> TensorElement {
        assert_eq!((self.t, self.w), (other.t, other.w), "inhomogeneous sum");
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        TensorElement {
            t: self.t,
            w: self.w,
            terms: dedup_parity(terms),
        }
    }

    pub fn mul(&self, profile: &MotivicProfile, other: &TensorElement) -> TensorElement {
        let mut terms = Vec::new();
        for x in &self.terms {
            for y in &other.terms {
                let Some(l) = mono_mul(profile, &x.left, &y.left) else {
                    continue;
                };
                let Some(r) = mono_mul(profile, &x.right, &y.right) else {
                    continue;
                };
                let (cl, l) = l.split_tau();
                let (cr, r) = r.split_tau();
                terms.push(TensorTerm {
                    left: l,
                    right: r,
                    tau: x.tau + y.tau + cl + cr,
                });
            }
        }
        TensorElement {
            t: self.t + other.t,
            w: self.w + other.w,
            terms: dedup_parity(terms),
        }
    }

    fn frobenius_pow(&self, profile: &MotivicProfile, k: u32) -> TensorElement {
        // (sum u (x) v)^(2^k) = sum u^(2^k) (x) v^(2^k) in characteristic 2.
        let e = 1u32 << k;
        let mut terms = Vec::new();
        for term in &self.terms {
            let Some(l) = mono_pow(profile, &term.left, e) else {
                continue;
            };
            let Some(r) = mono_pow(profile, &term.right, e) else {
                continue;
            };
            let (cl, l) = l.split_tau();
            let (cr, r) = r.split_tau();
            terms.push(TensorTerm {
                left: l,
                right: r,
                tau: term.tau * e + cl + cr,
            });
        }
        TensorElement {
            t: self.t * e,
            w: self.w * e as i64,
            terms: dedup_parity(terms),
        }
    }
}

/// Coproduct of `tau_i`, reduced into the profile:
/// `tau_i -> tau_i (x) 1 + sum_k xi_{i-k}^{2^k} (x) tau_k` with `xi_0 = 1`.
pub fn gen_coproduct_tau(profile: &MotivicProfile, i: u32) -> TensorElement {
    let (t, w) = tau_degree(i);
    let mut terms = Vec::new();
    terms.push(TensorTerm {
        left: Monomial::tau_gen(i),
        right: Monomial::one(),
        tau: 0,
    });
    for k in 0..=i {
        let left = if k == i {
            Monomial::one()
        } else {
            let m = Monomial::xi_power(i - k, 1 << k);
            if !profile.xi_at(i - k).allows(1 << k) {
                continue;
            }
            m
        };
        if !profile.tau_at(k) {
            continue;
        }
        terms.push(TensorTerm {
            left,
            right: Monomial::tau_gen(k),
            tau: 0,
        });
    }
    TensorElement {
        t,
        w: w as i64,
        terms: dedup_parity(terms),
    }
}

/// Coproduct of `xi_j` (motivic) or `zeta_j` (classical), reduced:
/// `xi_j -> sum_k xi_{j-k}^{2^k} (x) xi_k` with `xi_0 = 1`.
pub fn gen_coproduct_xi(profile: &MotivicProfile, j: u32) -> TensorElement {
    let (t, w) = profile.xi_degree(j);
    let mut terms = Vec::new();
    for k in 0..=j {
        let left = if k == j {
            Monomial::one()
        } else {
            if !profile.xi_at(j - k).allows(1 << k) {
                continue;
            }
            Monomial::xi_power(j - k, 1 << k)
        };
        let right = if k == 0 {
            Monomial::one()
        } else {
            if !profile.xi_at(k).allows(1) {
                continue;
            }
            Monomial::xi_power(k, 1)
        };
        terms.push(TensorTerm {
            left,
            right,
            tau: 0,
        });
    }
    TensorElement {
        t,
        w: w as i64,
        terms: dedup_parity(terms),
    }
}

/// Coproduct of a monomial, computed multiplicatively from the generator
/// formulas with every tensor factor reduced into the quotient.
pub fn coproduct_mono(profile: &MotivicProfile, m: &Monomial) -> TensorElement {
    let mut acc = TensorElement::unit();
    acc.terms[0].tau = m.tau_power;
    acc.w = -(m.tau_power as i64);
    let mut mask = m.taus;
    while mask != 0 {
        let i = mask.trailing_zeros();
        acc = acc.mul(profile, &gen_coproduct_tau(profile, i));
        mask &= mask - 1;
    }
    for (idx, &a) in m.xis.iter().enumerate() {
        if a == 0 {
            continue;
        }
        let base = gen_coproduct_xi(profile, idx as u32 + 1);
        for k in 0..32 {
            if a & (1 << k) != 0 {
                acc = acc.mul(profile, &base.frobenius_pow(profile, k));
            }
        }
    }
    acc
}

/// Coproduct of a homogeneous element.
pub fn coproduct(profile: &MotivicProfile, x: &DualElement) -> TensorElement {
    let mut acc = TensorElement::zero(x.t, x.w);
    for m in &x.terms {
        acc = acc.add(&coproduct_mono(profile, m));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b_star() -> MotivicProfile {
        MotivicProfile::preset("B", 64).unwrap()
    }

    #[test]
    fn tau0_squared_rewrites_to_tau_xi1() {
        let p = b_star();
        let t0 = Monomial::tau_gen(0);
        let m = mono_mul(&p, &t0, &t0).unwrap();
        assert_eq!(m.tau_power, 1);
        assert_eq!(m.taus, 0);
        assert_eq!(m.xis, vec![1]);
    }

    #[test]
    fn tau2_squared_vanishes_in_b() {
        // tau_2^2 = tau xi_3, and xi_3 is not in the profile.
        let p = b_star();
        let t2 = Monomial::tau_gen(2);
        assert_eq!(mono_mul(&p, &t2, &t2), None);
    }

    #[test]
    fn xi1_fourth_power_vanishes_in_b() {
        let p = b_star();
        let sq = Monomial::xi_power(1, 2);
        assert_eq!(mono_mul(&p, &sq, &sq), None);
    }

    #[test]
    fn multiply_dual_matches_relations() {
        let p = b_star();
        let t0 = DualElement::from_monomial(&p, Monomial::tau_gen(0));
        let prod = multiply_dual(&p, &t0, &t0);
        assert_eq!(prod.terms.len(), 1);
        assert_eq!(prod.terms[0].tau_power, 1);
        assert_eq!(prod.terms[0].xis, vec![1]);
        assert_eq!((prod.t, prod.w), (2, 0));
    }

    #[test]
    fn coproduct_of_tau1() {
        // tau_1 -> tau_1 (x) 1 + xi_1 (x) tau_0 + 1 (x) tau_1
        let p = b_star();
        let psi = coproduct_mono(&p, &Monomial::tau_gen(1));
        assert_eq!(psi.terms.len(), 3);
        let expected = vec![
            TensorTerm {
                left: Monomial::one(),
                right: Monomial::tau_gen(1),
                tau: 0,
            },
            TensorTerm {
                left: Monomial::xi_power(1, 1),
                right: Monomial::tau_gen(0),
                tau: 0,
            },
            TensorTerm {
                left: Monomial::tau_gen(1),
                right: Monomial::one(),
                tau: 0,
            },
        ];
        assert_eq!(psi.terms, dedup_parity(expected));
    }

    #[test]
    fn coproduct_of_xi1_is_primitive_shape() {
        let p = b_star();
        let psi = coproduct_mono(&p, &Monomial::xi_power(1, 1));
        assert_eq!(psi.terms.len(), 2);
        assert!(psi
            .terms
            .iter()
            .any(|t| t.left.is_one() && t.right == Monomial::xi_power(1, 1)));
        assert!(psi
            .terms
            .iter()
            .any(|t| t.right.is_one() && t.left == Monomial::xi_power(1, 1)));
    }

    #[test]
    fn tau3_is_primitive_in_b() {
        // In B*, the xi_3, xi_2^2, xi_1^4 terms of the ambient coproduct die.
        let p = b_star();
        let psi = coproduct_mono(&p, &Monomial::tau_gen(3));
        assert_eq!(psi.terms.len(), 2);
        for term in &psi.terms {
            assert!(term.left.is_one() || term.right.is_one());
        }
    }

    #[test]
    fn classical_zeta_degrees() {
        let p = MotivicProfile::preset("B-classical", 64).unwrap();
        assert_eq!(p.xi_degree(1), (1, 0));
        assert_eq!(p.xi_degree(4), (15, 0));
        assert_eq!(p.degree_cap, 7 + 9 + 7 + 15);
    }

    #[test]
    fn b_star_intrinsic_cap() {
        assert_eq!(b_star().degree_cap, 38);
    }
}
