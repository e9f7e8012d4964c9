//! Combinatorial loop product/coproduct calculus on 3-dimensional lens
//! spaces, and the coproduct-based homeomorphism detector.
//!
//! Degree-3 classes `ρ_{ℓ,m}` multiply by summing indices. Their coproduct
//! lands in the span of figure-eight classes `β_{k,k'}` (`0 < k, k' < p`,
//! coefficients in `Z/p`):
//!
//! `∨ρ_{ℓ,m} = Σ_{0<t<ℓ, t,(ℓ-t)≠0 mod p} β_{t,ℓ-t}
//!           + q' Σ_{0<t<qℓ+pm, tq',(ℓ-tq')≠0 mod p} β_{tq',ℓ-tq'}`
//!
//! with `q'` the inverse of `q` mod `p`. The detector compares, for a
//! hypothetical degree-1 homotopy equivalence of multiplication degree `ℓ`
//! (`ℓ²q₂ ≡ q₁ mod p`), the transferred coproduct of `ρ_{1,0}` against the
//! coproduct of every candidate image class `(1-a)ρ̄_{ℓ,0} + aρ̄_{ℓ,1}`:
//! a witness `(ℓ, a)` exists precisely when the spaces are homeomorphic
//! (`q₁q₂ ≡ ±1` or `q₁ ≡ ±q₂ mod p`), and the scan checks this
//! equivalence exhaustively.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A 3-dimensional lens space, given by `p ≥ 2` and `0 < q < p` coprime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LensSpace {
    pub p: u64,
    pub q: u64,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// Inverse of `q` mod `p` (requires `gcd(q, p) = 1`; `p` need not be
/// prime).
pub fn mod_inverse(q: u64, p: u64) -> Result<u64> {
    let (mut r0, mut r1) = (p as i128, (q % p) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let k = r0 / r1;
        (r0, r1) = (r1, r0 - k * r1);
        (s0, s1) = (s1, s0 - k * s1);
    }
    if r0 != 1 {
        return Err(Error::Invalid(format!("{q} is not a unit mod {p}")));
    }
    Ok(s0.rem_euclid(p as i128) as u64)
}

impl LensSpace {
    pub fn new(p: u64, q: u64) -> Result<LensSpace> {
        if p < 2 {
            return Err(Error::Invalid(format!("lens space needs p >= 2, got {p}")));
        }
        if q == 0 || q >= p {
            return Err(Error::Invalid(format!(
                "lens space needs 0 < q < p, got q={q}, p={p}"
            )));
        }
        if gcd(p, q) != 1 {
            return Err(Error::Invalid(format!("p={p} and q={q} are not coprime")));
        }
        Ok(LensSpace { p, q })
    }

    pub fn q_inverse(&self) -> u64 {
        mod_inverse(self.q, self.p).expect("validated on construction")
    }
}

/// A formal integer combination of the degree-3 classes `ρ_{ℓ,m}`,
/// `ℓ, m ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RhoClass {
    pub terms: BTreeMap<(u64, u64), i64>,
}

impl RhoClass {
    pub fn zero() -> RhoClass {
        RhoClass::default()
    }

    pub fn generator(l: u64, m: u64) -> RhoClass {
        let mut x = RhoClass::zero();
        x.add_term(l, m, 1);
        x
    }

    pub fn add_term(&mut self, l: u64, m: u64, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.terms.entry((l, m)).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&(l, m));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// The loop product on `ρ`-classes: indices add,
/// `ρ_{ℓ₁,m₁} ∧ ρ_{ℓ₂,m₂} = ρ_{ℓ₁+ℓ₂,m₁+m₂}`, extended bilinearly.
pub fn rho_product(x: &RhoClass, y: &RhoClass) -> RhoClass {
    let mut out = RhoClass::zero();
    for ((l1, m1), c1) in &x.terms {
        for ((l2, m2), c2) in &y.terms {
            out.add_term(l1 + l2, m1 + m2, c1 * c2);
        }
    }
    out
}

/// A `Z/p`-linear combination of figure-eight classes `β_{k,k'}` with
/// `0 < k, k' < p`. Symbols with either index `≡ 0` mod `p` are zero in
/// relative homology and are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LensH1Class {
    pub p: u64,
    pub coeffs: BTreeMap<(u64, u64), u64>,
}

impl LensH1Class {
    pub fn zero(p: u64) -> LensH1Class {
        LensH1Class { p, coeffs: BTreeMap::new() }
    }

    /// Adds `c · β_{k,k'}` with indices and coefficient reduced mod `p`;
    /// a zero index kills the symbol.
    pub fn add_term(&mut self, k: u64, kp: u64, c: u64) {
        let (k, kp, c) = (k % self.p, kp % self.p, c % self.p);
        if k == 0 || kp == 0 || c == 0 {
            return;
        }
        let e = self.coeffs.entry((k, kp)).or_insert(0);
        *e = (*e + c) % self.p;
        if *e == 0 {
            self.coeffs.remove(&(k, kp));
        }
    }

    pub fn add(&self, other: &LensH1Class) -> LensH1Class {
        assert_eq!(self.p, other.p, "mixed moduli");
        let mut out = self.clone();
        for ((k, kp), c) in &other.coeffs {
            out.add_term(*k, *kp, *c);
        }
        out
    }

    pub fn scale(&self, c: u64) -> LensH1Class {
        let mut out = LensH1Class::zero(self.p);
        for ((k, kp), x) in &self.coeffs {
            out.add_term(*k, *kp, x * (c % self.p));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// The loop coproduct of `ρ_{ℓ,m}`, per the two-sum formula in the module
/// docs. The global orientation sign is fixed to `+` (it is a single
/// overall convention and cancels in every comparison made here).
pub fn rho_coproduct(space: &LensSpace, l: u64, m: u64) -> LensH1Class {
    let (p, q) = (space.p, space.q);
    let qi = space.q_inverse();
    let mut out = LensH1Class::zero(p);
    // First sum: 0 < t < ℓ, t and ℓ-t nonzero mod p.
    for t in 1..l {
        out.add_term(t % p, (l - t) % p, 1);
    }
    // Second sum: 0 < t < qℓ + pm, coefficient q', symbol β_{tq', ℓ-tq'}.
    let bound = q * l + p * m;
    for t in 1..bound {
        let k = (t * qi) % p;
        // ℓ - tq' mod p, computed without going negative
        let kp = ((l % p) + p - k % p) % p;
        out.add_term(k, kp, qi);
    }
    out
}

/// Bilinear coproduct of a whole `ρ`-class; integer coefficients reduce
/// mod `p`.
pub fn rho_class_coproduct(space: &LensSpace, x: &RhoClass) -> LensH1Class {
    let mut out = LensH1Class::zero(space.p);
    for ((l, m), c) in &x.terms {
        let cp = c.rem_euclid(space.p as i64) as u64;
        out = out.add(&rho_coproduct(space, *l, *m).scale(cp));
    }
    out
}

/// Rewrites the primed figure-eight symbol `β'_{a,b}` (based along the
/// other core circle) in the `β`-basis: `β'_{a,b} = q' β_{q'a, q'b}`,
/// solved from `β_{k,k'} = q β'_{qk,qk'}`.
pub fn beta_prime_convert(space: &LensSpace, a: u64, b: u64) -> LensH1Class {
    let qi = space.q_inverse();
    let mut out = LensH1Class::zero(space.p);
    out.add_term((qi * a) % space.p, (qi * b) % space.p, qi);
    out
}

/// Pushforward along a map of multiplication degree `ℓ` on `π₁`:
/// `β_{k,k'} ↦ ℓ β̄_{ℓk, ℓk'}`, `Z/p`-linearly. Requires `gcd(ℓ,p)=1`.
pub fn transfer(l: u64, x: &LensH1Class) -> Result<LensH1Class> {
    if gcd(l % x.p, x.p) != 1 {
        return Err(Error::Invalid(format!("transfer degree {l} is not a unit mod {}", x.p)));
    }
    let mut out = LensH1Class::zero(x.p);
    for ((k, kp), c) in &x.coeffs {
        out.add_term((l * k) % x.p, (l * kp) % x.p, (l % x.p) * c);
    }
    Ok(out)
}

/// All `ℓ ∈ {1..p-1}` with `ℓ² q₂ ≡ q₁ mod p`: the possible degrees on
/// `π₁` of a degree-1 homotopy equivalence from `(p,q₁)` to `(p,q₂)`.
pub fn homotopy_equiv_degrees(p: u64, q1: u64, q2: u64) -> Vec<u64> {
    (1..p).filter(|l| (l * l * q2) % p == q1 % p).collect()
}

/// The classification criterion: `(p,q₁)` and `(p,q₂)` are homeomorphic
/// iff `q₁q₂ ≡ ±1` or `q₁ ≡ ±q₂` mod `p`.
pub fn homeomorphic(p: u64, q1: u64, q2: u64) -> bool {
    let (q1, q2) = (q1 % p, q2 % p);
    (q1 * q2) % p == 1 % p
        || (q1 * q2) % p == (p - 1) % p
        || q1 == q2
        || (q1 + q2) % p == 0
}

/// The orientation-preserving refinement: a **degree-1** homeomorphism
/// exists iff `q₁q₂ ≡ 1` or `q₁ ≡ q₂` mod `p`. The minus cases of
/// [`homeomorphic`] are realized only by orientation-reversing maps,
/// which the degree-1 detector deliberately does not see.
pub fn oriented_homeomorphic(p: u64, q1: u64, q2: u64) -> bool {
    let (q1, q2) = (q1 % p, q2 % p);
    (q1 * q2) % p == 1 % p || q1 == q2
}

/// Searches for a pair `(ℓ, a)` making the coproduct commute with a
/// hypothetical homotopy equivalence `(p,q₁) → (p,q₂)` sending `ρ_{1,0}`
/// to `(1-a)ρ̄_{ℓ,0} + aρ̄_{ℓ,1}`: compares
/// `∨((1-a)ρ̄_{ℓ,0} + aρ̄_{ℓ,1})` with `transfer(ℓ, ∨ρ_{1,0})`. Returns
/// the first witness in lexicographic `(ℓ, a)` order, or `None`; `None`
/// is also returned vacuously when no candidate degree `ℓ` exists.
pub fn coproduct_invariance_search(p: u64, q1: u64, q2: u64) -> Result<Option<(u64, u64)>> {
    let source = LensSpace::new(p, q1)?;
    let target = LensSpace::new(p, q2)?;
    let degrees = homotopy_equiv_degrees(p, q1, q2);
    let cop_source = rho_coproduct(&source, 1, 0);
    for l in degrees {
        let pushed = transfer(l, &cop_source)?;
        let cop_l0 = rho_coproduct(&target, l, 0);
        let cop_l1 = rho_coproduct(&target, l, 1);
        // The candidate (1-a)∨ρ̄_{ℓ,0} + a∨ρ̄_{ℓ,1} equals
        // ∨ρ̄_{ℓ,0} + a(∨ρ̄_{ℓ,1} - ∨ρ̄_{ℓ,0}); matching `pushed` is the
        // simultaneous congruence a·delta ≡ diff (mod p) per symbol.
        let delta = cop_l1.add(&cop_l0.scale(p - 1));
        let diff = pushed.add(&cop_l0.scale(p - 1));
        let mut keys: Vec<(u64, u64)> = delta.coeffs.keys().copied().collect();
        keys.extend(diff.coeffs.keys().copied());
        keys.sort_unstable();
        keys.dedup();
        'outer: for a in 0..p {
            for key in &keys {
                let d = delta.coeffs.get(key).copied().unwrap_or(0);
                let r = diff.coeffs.get(key).copied().unwrap_or(0);
                if (a * d) % p != r {
                    continue 'outer;
                }
            }
            return Ok(Some((l, a)));
        }
    }
    Ok(None)
}

/// One row of the exhaustive scan report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScanPair {
    pub p: u64,
    pub q1: u64,
    pub q2: u64,
    pub degrees: Vec<u64>,
    pub witness: Option<(u64, u64)>,
    pub homeomorphic: bool,
}

/// The result of scanning all lens-space pairs up to `p_max`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScanReport {
    pub p_max: u64,
    pub pairs_checked: u64,
    pub non_preserving: Vec<(u64, u64, u64)>,
    pub counterexamples: Vec<ScanPair>,
}

fn search_cached(
    p: u64,
    q1: u64,
    q2: u64,
    cache: &mut std::collections::HashMap<(u64, u64), (LensH1Class, LensH1Class)>,
) -> Result<Option<(u64, u64)>> {
    let source = LensSpace::new(p, q1)?;
    let target = LensSpace::new(p, q2)?;
    let cop_source = rho_coproduct(&source, 1, 0);
    for l in homotopy_equiv_degrees(p, q1, q2) {
        let pushed = transfer(l, &cop_source)?;
        let (cop_l0, cop_l1) = cache
            .entry((q2, l))
            .or_insert_with(|| (rho_coproduct(&target, l, 0), rho_coproduct(&target, l, 1)));
        let delta = cop_l1.add(&cop_l0.scale(p - 1));
        let diff = pushed.add(&cop_l0.scale(p - 1));
        let mut keys: Vec<(u64, u64)> = delta.coeffs.keys().copied().collect();
        keys.extend(diff.coeffs.keys().copied());
        keys.sort_unstable();
        keys.dedup();
        'outer: for a in 0..p {
            for key in &keys {
                let d = delta.coeffs.get(key).copied().unwrap_or(0);
                let r = diff.coeffs.get(key).copied().unwrap_or(0);
                if (a * d) % p != r {
                    continue 'outer;
                }
            }
            return Ok(Some((l, a)));
        }
    }
    Ok(None)
}

fn scan_one_p(p: u64) -> Result<(u64, Vec<(u64, u64, u64)>, Vec<ScanPair>)> {
    let mut checked = 0;
    let mut non_preserving = Vec::new();
    let mut counterexamples = Vec::new();
    let mut cache = std::collections::HashMap::new();
    for q1 in 1..p {
        if gcd(p, q1) != 1 {
            continue;
        }
        for q2 in 1..p {
            if gcd(p, q2) != 1 {
                continue;
            }
            // The decision procedure's case analysis needs q₂ ≠ 1; when
            // q₂ = 1 run the search in the opposite direction instead.
            let (a, b) = if q2 == 1 && q1 != 1 { (q2, q1) } else { (q1, q2) };
            let degrees = homotopy_equiv_degrees(p, a, b);
            if degrees.is_empty() {
                continue; // no homotopy equivalence of the analyzed form
            }
            checked += 1;
            let witness = search_cached(p, a, b, &mut cache)?;
            let homeo = oriented_homeomorphic(p, q1, q2);
            if witness.is_none() {
                non_preserving.push((p, q1, q2));
            }
            // A witness must never occur on a non-homeomorphic pair, and
            // every pair admitting a degree-1 homeomorphism must yield one.
            if witness.is_some() != homeo || (witness.is_some() && !homeomorphic(p, q1, q2)) {
                counterexamples.push(ScanPair {
                    p,
                    q1,
                    q2,
                    degrees,
                    witness,
                    homeomorphic: homeo,
                });
            }
        }
    }
    Ok((checked, non_preserving, counterexamples))
}

/// Scans every `p ≤ p_max` and every coprime pair `(q₁,q₂)` admitting a
/// candidate degree, asserting `witness exists ⇔ a degree-1 homeomorphism
/// exists` (and, a fortiori, that a witness never occurs on a
/// non-homeomorphic pair). Any violation is reported as a counterexample.
/// `threads` fans the outer loop out over that many worker threads (`0`
/// means one).
pub fn thm_lens_scan(p_max: u64, threads: usize) -> Result<ScanReport> {
    if p_max < 2 {
        return Err(Error::Invalid("scan needs p_max >= 2".into()));
    }
    let workers = threads.max(1);
    let ps: Vec<u64> = (2..=p_max).collect();
    let mut results: Vec<Result<(u64, Vec<(u64, u64, u64)>, Vec<ScanPair>)>> = Vec::new();
    if workers == 1 {
        for p in &ps {
            results.push(scan_one_p(*p));
        }
    } else {
        let chunks: Vec<Vec<u64>> = (0..workers)
            .map(|w| ps.iter().copied().skip(w).step_by(workers).collect())
            .collect();
        let mut per_worker: Vec<Vec<_>> = std::thread::scope(|scope| {
            let handles: Vec<_> = chunks
                .iter()
                .map(|chunk| scope.spawn(move || chunk.iter().map(|p| scan_one_p(*p)).collect()))
                .collect();
            handles.into_iter().map(|h| h.join().expect("scan worker panicked")).collect()
        });
        for w in &mut per_worker {
            results.append(w);
        }
    }
    let mut report = ScanReport {
        p_max,
        pairs_checked: 0,
        non_preserving: Vec::new(),
        counterexamples: Vec::new(),
    };
    for r in results {
        let (checked, non_pres, ces) = r?;
        report.pairs_checked += checked;
        report.non_preserving.extend(non_pres);
        report.counterexamples.extend(ces);
    }
    report.non_preserving.sort_unstable();
    report.counterexamples.sort_by_key(|c| (c.p, c.q1, c.q2));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn beta(p: u64, entries: &[(u64, u64, u64)]) -> LensH1Class {
        let mut x = LensH1Class::zero(p);
        for (k, kp, c) in entries {
            x.add_term(*k, *kp, *c);
        }
        x
    }

    #[test]
    fn lens_space_validation() {
        assert!(LensSpace::new(7, 2).is_ok());
        assert!(LensSpace::new(1, 1).is_err());
        assert!(LensSpace::new(6, 3).is_err());
        assert!(LensSpace::new(7, 0).is_err());
        assert!(LensSpace::new(7, 7).is_err());
    }

    #[test]
    fn rho_product_sums_indices() {
        let a = RhoClass::generator(1, 0);
        let b = RhoClass::generator(0, 1);
        assert_eq!(rho_product(&a, &b), RhoClass::generator(1, 1));
        let unit = RhoClass::generator(0, 0);
        assert_eq!(rho_product(&a, &unit), a);
        let cube = rho_product(&a, &rho_product(&a, &a));
        assert_eq!(cube, RhoClass::generator(3, 0));
        // commutative and associative on a random-ish combination
        let mut x = RhoClass::generator(2, 1);
        x.add_term(0, 3, -2);
        assert_eq!(rho_product(&x, &b), rho_product(&b, &x));
        assert_eq!(
            rho_product(&rho_product(&x, &a), &b),
            rho_product(&x, &rho_product(&a, &b))
        );
    }

    #[test]
    fn coproduct_reference_values() {
        // simple loops: trivial coproduct
        let l71 = LensSpace::new(7, 1).unwrap();
        assert!(rho_coproduct(&l71, 1, 0).is_zero());
        // hand-checked values on (7,2)
        let l72 = LensSpace::new(7, 2).unwrap();
        assert_eq!(
            rho_coproduct(&l72, 2, 0),
            beta(7, &[(1, 1, 5), (4, 5, 4), (5, 4, 4)])
        );
        assert_eq!(
            rho_coproduct(&l72, 2, 1),
            beta(7, &[(1, 1, 2), (4, 5, 1), (5, 4, 1), (3, 6, 4), (6, 3, 4)])
        );
    }

    #[test]
    fn coproduct_never_emits_zero_indices() {
        for (p, q) in [(5, 2), (7, 3), (8, 3), (9, 2)] {
            let sp = LensSpace::new(p, q).unwrap();
            for l in 0..2 * p {
                for m in 0..3 {
                    for ((k, kp), c) in &rho_coproduct(&sp, l, m).coeffs {
                        assert!(*k > 0 && *k < p && *kp > 0 && *kp < p && *c > 0 && *c < p);
                    }
                }
            }
        }
    }

    #[test]
    fn beta_prime_relation() {
        // q = 1: the two based families agree
        let l71 = LensSpace::new(7, 1).unwrap();
        assert_eq!(beta_prime_convert(&l71, 2, 3), beta(7, &[(2, 3, 1)]));
        // (7,2): β'_{1,1} = 4 β_{4,4}
        let l72 = LensSpace::new(7, 2).unwrap();
        assert_eq!(beta_prime_convert(&l72, 1, 1), beta(7, &[(4, 4, 4)]));
        // round trip β_{k,k'} = q β'_{qk,qk'} back to itself
        for k in 1..7 {
            for kp in 1..7 {
                let back = beta_prime_convert(&l72, (2 * k) % 7, (2 * kp) % 7).scale(2);
                assert_eq!(back, beta(7, &[(k, kp, 1)]));
            }
        }
    }

    #[test]
    fn transfer_is_multiplicative_and_invertible() {
        let x = beta(7, &[(1, 1, 1), (4, 5, 3)]);
        assert_eq!(transfer(1, &x).unwrap(), x);
        assert_eq!(transfer(2, &beta(7, &[(1, 1, 1)])).unwrap(), beta(7, &[(2, 2, 2)]));
        // composition law and invertibility
        let t2 = transfer(2, &x).unwrap();
        let t3_then = transfer(3, &t2).unwrap();
        assert_eq!(t3_then, transfer(6, &x).unwrap());
        let inv = transfer(mod_inverse(2, 7).unwrap(), &t2).unwrap();
        // ℓ·ℓ' = 2·4 = 8 ≡ 1, so the composite rescales by 1
        assert_eq!(inv, x);
        assert!(transfer(7, &x).is_err());
    }

    #[test]
    fn equivalence_degrees() {
        assert_eq!(homotopy_equiv_degrees(7, 1, 2), vec![2, 5]);
        assert!(homotopy_equiv_degrees(5, 1, 2).is_empty());
        let d = homotopy_equiv_degrees(11, 3, 3);
        assert!(d.contains(&1) && d.contains(&10));
    }

    #[test]
    fn homeomorphism_criterion() {
        assert!(!homeomorphic(7, 1, 2));
        assert!(homeomorphic(7, 2, 2));
        assert!(homeomorphic(7, 2, 4)); // 2·4 = 8 ≡ 1 mod 7
        assert!(homeomorphic(7, 3, 5));
        assert!(homeomorphic(7, 1, 6)); // mirror pair: q₁ ≡ -q₂
        assert!(oriented_homeomorphic(7, 2, 4));
        assert!(!oriented_homeomorphic(7, 1, 6)); // mirror only
    }

    #[test]
    fn invariance_search_reference_cases() {
        // the non-preserving pair: homotopy equivalent, no witness
        assert_eq!(coproduct_invariance_search(7, 1, 2).unwrap(), None);
        // identity direction always succeeds with ℓ = 1
        let (l, _a) = coproduct_invariance_search(7, 2, 2).unwrap().unwrap();
        assert_eq!(l, 1);
        // homeomorphic pair (3·5 ≡ 1 mod 7) has a witness
        assert!(coproduct_invariance_search(7, 3, 5).unwrap().is_some());
    }

    #[test]
    fn scan_small_range_has_no_counterexamples() {
        let report = thm_lens_scan(13, 2).unwrap();
        assert!(report.counterexamples.is_empty(), "{:?}", report.counterexamples);
        assert!(report.non_preserving.contains(&(7, 1, 2)));
        assert!(report.pairs_checked > 0);
        // pairs with no witness are exactly the ones with no degree-1
        // homeomorphism (mirror-only pairs included)
        for (p, q1, q2) in &report.non_preserving {
            assert!(!oriented_homeomorphic(*p, *q1, *q2), "({p},{q1},{q2}) flagged wrongly");
        }
        // deterministic regardless of thread count
        let rerun = thm_lens_scan(13, 5).unwrap();
        assert_eq!(report.pairs_checked, rerun.pairs_checked);
        assert_eq!(report.non_preserving, rerun.non_preserving);
    }
}
