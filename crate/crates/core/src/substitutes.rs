//! Gross-substitutes and submodularity tests, plus the demand and greedy
//! characterizations used to cross-check them.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};
use crate::subset::{all_subsets, pairs_outside, triples_outside, SubsetMask};
use crate::valuation::{PriceVector, Valuation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    /// `∂_ij v(S) > max(∂_ik v(S), ∂_jk v(S))`.
    TripleInequality,
    /// `∂_ij v(S) > 0`.
    Nonpositivity,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GsViolation {
    pub set: SubsetMask,
    pub i: usize,
    pub j: usize,
    /// Third item for triple violations; `None` for a pairwise one.
    pub k: Option<usize>,
    pub lhs: Rational,
    pub rhs: Rational,
    pub kind: ViolationKind,
}

impl fmt::Display for GsViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.kind, self.k) {
            (ViolationKind::TripleInequality, Some(k)) => write!(
                f,
                "S={}: d_{},{} = {} > max(d_{},{}, d_{},{}) = {}",
                self.set,
                self.i,
                self.j,
                format_rational(&self.lhs),
                self.i,
                k,
                self.j,
                k,
                format_rational(&self.rhs)
            ),
            _ => write!(
                f,
                "S={}: d_{},{} = {} > 0",
                self.set,
                self.i,
                self.j,
                format_rational(&self.lhs)
            ),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GsReport {
    pub violations: Vec<GsViolation>,
    /// Number of `(S, {i,j,k})` instances examined.
    pub triples_checked: usize,
    /// Number of `(S, {i,j})` instances examined.
    pub pairs_checked: usize,
}

impl GsReport {
    pub fn is_gs(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Every violation of `∂_ij v(S) <= max[∂_ik v(S), ∂_jk v(S)] <= 0`.
///
/// For each `S` in increasing order the pairwise sign conditions are listed
/// before the triple conditions.
pub fn check_gs(v: &Valuation) -> GsReport {
    let n = v.n();
    let mut report = GsReport::default();
    for s in all_subsets(n) {
        for (i, j) in pairs_outside(n, s) {
            report.pairs_checked += 1;
            let d = v.d2_unchecked(i, j, s);
            if d.is_positive() {
                report.violations.push(GsViolation {
                    set: s,
                    i,
                    j,
                    k: None,
                    lhs: d,
                    rhs: Rational::zero(),
                    kind: ViolationKind::Nonpositivity,
                });
            }
        }
        for (i, j, k) in triples_outside(n, s) {
            report.triples_checked += 1;
            let dij = v.d2_unchecked(i, j, s);
            let dik = v.d2_unchecked(i, k, s);
            let djk = v.d2_unchecked(j, k, s);
            // At most one of the three rotations can fail: the failing pair is a strict unique max.
            let candidates = [
                (i, j, k, &dij, &dik, &djk),
                (i, k, j, &dik, &dij, &djk),
                (j, k, i, &djk, &dij, &dik),
            ];
            for (a, b, c, lhs, o1, o2) in candidates {
                let rhs = o1.max(o2);
                if lhs > rhs {
                    report.violations.push(GsViolation {
                        set: s,
                        i: a,
                        j: b,
                        k: Some(c),
                        lhs: lhs.clone(),
                        rhs: rhs.clone(),
                        kind: ViolationKind::TripleInequality,
                    });
                }
            }
        }
    }
    report
}

/// GS via the triangle form on `Δ = -∂`: every `Δ^S_ij >= 0` and, within each
/// triple, the smallest of the three `Δ` values is attained at least twice.
pub fn is_gs_triangle_form(v: &Valuation) -> bool {
    let n = v.n();
    all_subsets(n).all(|s| {
        pairs_outside(n, s)
            .into_iter()
            .all(|(i, j)| !v.d2_unchecked(i, j, s).is_positive())
            && triples_outside(n, s).into_iter().all(|(i, j, k)| {
                let mut deltas = [
                    -v.d2_unchecked(i, j, s),
                    -v.d2_unchecked(i, k, s),
                    -v.d2_unchecked(j, k, s),
                ];
                deltas.sort();
                deltas[0] == deltas[1]
            })
    })
}

/// `∂_ij v(S) <= 0` everywhere.
pub fn check_submodular(v: &Valuation) -> bool {
    submodular_violation(v).is_none()
}

/// First `(S, i, j, ∂_ij v(S))` with a positive second derivative, in
/// canonical order.
pub fn submodular_violation(v: &Valuation) -> Option<(SubsetMask, usize, usize, Rational)> {
    let n = v.n();
    all_subsets(n).find_map(|s| {
        pairs_outside(n, s).into_iter().find_map(|(i, j)| {
            let d = v.d2_unchecked(i, j, s);
            d.is_positive().then_some((s, i, j, d))
        })
    })
}

/// `v_p(S) = v(S) - sum_{i in S} p_i`.
pub fn priced(v: &Valuation, p: &PriceVector) -> Result<Valuation> {
    if p.len() != v.n() {
        return Err(Error::DimensionMismatch {
            expected: v.n(),
            found: p.len(),
        });
    }
    Ok(Valuation::from_fn(v.n(), |s| &v[s] - p.total(s)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DemandResult {
    pub max_value: Rational,
    /// Every bundle attaining `max_value`, in increasing mask order.
    pub demanded: Vec<SubsetMask>,
}

impl DemandResult {
    pub fn contains(&self, bundle: SubsetMask) -> bool {
        self.demanded.contains(&bundle)
    }
}

/// `D(v; p) = argmax_S v_p(S)` by exhaustive search.
pub fn demand(v: &Valuation, p: &PriceVector) -> Result<DemandResult> {
    let vp = priced(v, p)?;
    let max_value = vp
        .values()
        .iter()
        .max()
        .cloned()
        .unwrap_or_else(Rational::zero);
    let demanded = vp
        .iter()
        .filter(|(_, val)| **val == max_value)
        .map(|(s, _)| s)
        .collect();
    Ok(DemandResult {
        max_value,
        demanded,
    })
}

/// Adds the item with the largest positive marginal of `v_p` until none is
/// positive. Ties go to the smallest item.
pub fn greedy(v: &Valuation, p: &PriceVector) -> Result<SubsetMask> {
    let vp = priced(v, p)?;
    let n = v.n();
    let mut current = SubsetMask::EMPTY;
    loop {
        let mut best: Option<(usize, Rational)> = None;
        for i in current.complement(n).items() {
            let gain = &vp[current.with(i)] - &vp[current];
            if gain.is_positive() && best.as_ref().is_none_or(|(_, g)| gain > *g) {
                best = Some((i, gain));
            }
        }
        match best {
            Some((i, _)) => current = current.with(i),
            None => return Ok(current),
        }
    }
}

/// True iff every bundle that no single add, drop or swap improves is a
/// global maximizer of `v_p`.
pub fn check_local_global(v: &Valuation, p: &PriceVector) -> Result<bool> {
    Ok(local_not_global(v, p)?.is_none())
}

/// A local maximizer of `v_p` that is not a global one, if any.
pub fn local_not_global(v: &Valuation, p: &PriceVector) -> Result<Option<SubsetMask>> {
    let vp = priced(v, p)?;
    let n = v.n();
    let global = vp
        .values()
        .iter()
        .max()
        .cloned()
        .unwrap_or_else(Rational::zero);
    for s in all_subsets(n) {
        let here = &vp[s];
        if *here == global {
            continue;
        }
        let outside: Vec<usize> = s.complement(n).items().collect();
        let inside: Vec<usize> = s.items().collect();
        let improved = outside.iter().any(|&i| vp[s.with(i)] > *here)
            || inside.iter().any(|&i| vp[s.without(i)] > *here)
            || inside
                .iter()
                .any(|&i| outside.iter().any(|&j| vp[s.without(i).with(j)] > *here));
        if !improved {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn positive_interaction_is_not_submodular() {
        let mut v = Valuation::zero(2);
        v.set_value(SubsetMask::from_items([1, 2]), int(1)).unwrap();
        assert!(!check_submodular(&v));
        let report = check_gs(&v);
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].kind, ViolationKind::Nonpositivity);
        assert_eq!(report.triples_checked, 0);
    }

    #[test]
    fn additive_is_gs() {
        let v = Valuation::additive(&[int(1), int(-2), frac(1, 3), int(4)]);
        assert!(check_gs(&v).is_gs());
        assert!(is_gs_triangle_form(&v));
        for p in [PriceVector::zero(4), PriceVector::uniform(4, int(1))] {
            assert!(check_local_global(&v, &p).unwrap());
        }
    }

    #[test]
    fn priced_dimension_mismatch() {
        assert!(priced(&Valuation::zero(2), &PriceVector::zero(3)).is_err());
        let v = Valuation::additive(&[int(1), int(2)]);
        assert_eq!(priced(&v, &PriceVector::zero(2)).unwrap(), v);
    }

    #[test]
    fn greedy_small_cases() {
        let v = Valuation::additive(&[int(3), int(1)]);
        assert_eq!(
            greedy(&v, &PriceVector::uniform(2, int(2))).unwrap(),
            SubsetMask::singleton(1)
        );
        assert_eq!(
            greedy(&v, &PriceVector::uniform(2, int(1000))).unwrap(),
            SubsetMask::EMPTY
        );
        let d = demand(&v, &PriceVector::uniform(2, int(1000))).unwrap();
        assert_eq!(d.demanded, vec![SubsetMask::EMPTY]);
        assert_eq!(d.max_value, int(0));
    }
}
