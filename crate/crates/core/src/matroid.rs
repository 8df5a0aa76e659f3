//! Matroids given by their bases, their rank functions, and exhaustive
//! enumeration on small ground sets.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};

use crate::error::{invalid, Result};
use crate::rational::{int, Rational};
use crate::subset::{all_subsets, SubsetMask, MAX_ITEMS};
use crate::substitutes::check_gs;
use crate::valuation::Valuation;

/// Largest ground set accepted by [`enumerate_matroids`].
pub const MAX_ENUMERATION_ITEMS: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matroid {
    n: usize,
    rank: usize,
    /// Sorted, distinct.
    bases: Vec<SubsetMask>,
}

impl Matroid {
    /// Validates cardinalities and the basis exchange axiom.
    pub fn new(n: usize, bases: impl IntoIterator<Item = SubsetMask>) -> Result<Self> {
        if n > MAX_ITEMS {
            return invalid(format!("n={n} exceeds {MAX_ITEMS}"));
        }
        let mut bases: Vec<SubsetMask> = bases.into_iter().collect();
        bases.sort();
        bases.dedup();
        for b in &bases {
            b.check(n)?;
        }
        if !check_basis_exchange(n, &bases)? {
            return invalid("basis family violates the exchange axiom");
        }
        let rank = bases[0].len();
        Ok(Matroid { n, rank, bases })
    }

    fn from_sorted_unchecked(n: usize, bases: Vec<SubsetMask>) -> Self {
        let rank = bases[0].len();
        Matroid { n, rank, bases }
    }

    /// `U^k_n`: every `k`-subset is a basis.
    pub fn uniform(n: usize, k: usize) -> Result<Self> {
        if k > n {
            return invalid(format!("uniform matroid rank {k} exceeds n={n}"));
        }
        Matroid::new(n, all_subsets(n).filter(|s| s.len() == k))
    }

    pub fn free(n: usize) -> Self {
        Matroid::from_sorted_unchecked(n, vec![SubsetMask::full(n)])
    }

    /// Every element a loop.
    pub fn all_loops(n: usize) -> Self {
        Matroid::from_sorted_unchecked(n, vec![SubsetMask::EMPTY])
    }

    /// Cycle matroid of a multigraph; item `i` is the edge `edges[i - 1]`.
    pub fn graphic(edges: &[(usize, usize)]) -> Result<Self> {
        let n = edges.len();
        let rank_of = |s: SubsetMask| {
            let mut parent: Vec<usize> = (0..=2 * n + 2).collect();
            fn find(p: &mut [usize], x: usize) -> usize {
                let mut r = x;
                while p[r] != r {
                    r = p[r];
                }
                p[x] = r;
                r
            }
            let mut rank = 0;
            for i in s.items() {
                let (a, b) = edges[i - 1];
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra] = rb;
                    rank += 1;
                }
            }
            rank
        };
        if edges.iter().any(|&(a, b)| a > 2 * n + 2 || b > 2 * n + 2) {
            return invalid("vertex labels must be at most 2n+2");
        }
        let full = rank_of(SubsetMask::full(n));
        Matroid::new(
            n,
            all_subsets(n).filter(|s| s.len() == full && rank_of(*s) == full),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn bases(&self) -> &[SubsetMask] {
        &self.bases
    }

    pub fn is_independent(&self, set: SubsetMask) -> bool {
        self.bases.iter().any(|b| set.is_subset_of(*b))
    }

    /// `r(S) = max |S ∩ B|` over bases.
    pub fn rank_of(&self, set: SubsetMask) -> usize {
        self.bases
            .iter()
            .map(|b| (*b & set).len())
            .max()
            .unwrap_or(0)
    }

    pub fn rank_function(&self) -> Valuation {
        Valuation::from_fn(self.n, |s| int(self.rank_of(s) as i64))
    }

    /// `r(S) - sum_{i in S} r({i})`.
    pub fn normalized_rank(&self) -> Valuation {
        let loops_free: Vec<i64> = (1..=self.n)
            .map(|i| self.rank_of(SubsetMask::singleton(i)) as i64)
            .collect();
        Valuation::from_fn(self.n, |s| {
            let singles: i64 = s.items().map(|i| loops_free[i - 1]).sum();
            int(self.rank_of(s) as i64 - singles)
        })
    }

    /// Restriction to `keep`, as a matroid on the same ground set whose other
    /// elements are loops.
    pub fn restrict(&self, keep: SubsetMask) -> Matroid {
        let r = self.rank_of(keep);
        let mut bases: Vec<SubsetMask> = self
            .bases
            .iter()
            .map(|b| *b & keep)
            .filter(|b| b.len() == r)
            .collect();
        bases.sort();
        bases.dedup();
        Matroid::from_sorted_unchecked(self.n, bases)
    }

    /// Relabel items: item `i` becomes `perm[i - 1]`.
    pub fn permute(&self, perm: &[usize]) -> Matroid {
        let mut bases: Vec<SubsetMask> = self.bases.iter().map(|b| b.permute(perm)).collect();
        bases.sort();
        Matroid::from_sorted_unchecked(self.n, bases)
    }

    /// Lexicographically smallest sorted basis list over all relabellings.
    pub fn canonical_form(&self) -> Matroid {
        (1..=self.n)
            .permutations(self.n)
            .map(|p| self.permute(&p))
            .min_by(|a, b| a.bases.cmp(&b.bases))
            .unwrap_or_else(|| self.clone())
    }
}

impl fmt::Display for Matroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={}\nbases:", self.n)?;
        for b in &self.bases {
            write!(f, " {b}")?;
        }
        Ok(())
    }
}

/// Basis exchange: for all `A, B` and `x ∈ A∖B` some `y ∈ B∖A` has `A - x + y`
/// in the family.
pub fn check_basis_exchange(n: usize, family: &[SubsetMask]) -> Result<bool> {
    let Some(first) = family.first() else {
        return invalid("basis family must be nonempty");
    };
    let r = first.len();
    if family.iter().any(|b| b.len() != r) {
        return invalid("basis family mixes cardinalities");
    }
    for b in family {
        b.check(n)?;
    }
    let mut member = vec![false; 1 << n];
    for b in family {
        member[b.index()] = true;
    }
    Ok(exchange_holds(family, &member))
}

fn exchange_holds(family: &[SubsetMask], member: &[bool]) -> bool {
    family.iter().all(|&a| {
        family.iter().all(|&b| {
            (a - b).items().all(|x| {
                (b - a)
                    .items()
                    .any(|y| member[a.without(x).with(y).index()])
            })
        })
    })
}

/// `v(∅) = 0`, every `∂_i v(S) ∈ {0, 1}` and `v` is gross substitutes.
pub fn is_matroid_rank_valuation(v: &Valuation) -> bool {
    if !v[SubsetMask::EMPTY].is_zero() {
        return false;
    }
    let n = v.n();
    let unit_marginals = all_subsets(n).all(|s| {
        s.complement(n).items().all(|i| {
            let m = &v[s.with(i)] - &v[s];
            m.is_zero() || m.is_one()
        })
    });
    unit_marginals && check_gs(v).is_gs()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedMatroid {
    pub matroid: Matroid,
    pub weights: Vec<Rational>,
}

impl WeightedMatroid {
    pub fn new(matroid: Matroid, weights: Vec<Rational>) -> Result<Self> {
        if weights.len() != matroid.n() {
            return invalid(format!(
                "expected {} weights, got {}",
                matroid.n(),
                weights.len()
            ));
        }
        if let Some(w) = weights.iter().find(|w| w.is_negative()) {
            return invalid(format!("negative weight {w}"));
        }
        Ok(WeightedMatroid { matroid, weights })
    }
}

/// All labelled matroids on `[n]`, sorted by rank then basis list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatroidCatalog {
    pub n: usize,
    pub entries: Vec<Matroid>,
    /// `iso_class[i]` indexes `canonical_forms`.
    pub iso_class: Vec<usize>,
    /// One canonical representative per isomorphism class, sorted.
    pub canonical_forms: Vec<Matroid>,
}

impl MatroidCatalog {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Every nonempty family of equal-size subsets satisfying basis exchange,
/// rank by rank.
pub fn enumerate_matroids(n: usize) -> Result<MatroidCatalog> {
    if n > MAX_ENUMERATION_ITEMS {
        return invalid(format!(
            "matroid enumeration supports n <= {MAX_ENUMERATION_ITEMS}, got {n}"
        ));
    }
    let mut entries = Vec::new();
    let mut member = vec![false; 1 << n];
    for r in 0..=n {
        let layer: Vec<SubsetMask> = all_subsets(n).filter(|s| s.len() == r).collect();
        let total: u64 = 1 << layer.len();
        let mut family = Vec::with_capacity(layer.len());
        for pick in 1..total {
            family.clear();
            family.extend(
                layer
                    .iter()
                    .enumerate()
                    .filter(|(idx, _)| pick >> idx & 1 == 1)
                    .map(|(_, s)| *s),
            );
            for b in &family {
                member[b.index()] = true;
            }
            if exchange_holds(&family, &member) {
                entries.push(Matroid::from_sorted_unchecked(n, family.clone()));
            }
            for b in &family {
                member[b.index()] = false;
            }
        }
    }
    entries.sort();

    let canon: Vec<Matroid> = entries.iter().map(Matroid::canonical_form).collect();
    let classes: BTreeMap<&Matroid, usize> = canon
        .iter()
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();
    let iso_class = canon.iter().map(|m| classes[m]).collect();
    let canonical_forms = classes.keys().map(|m| (*m).clone()).collect();
    Ok(MatroidCatalog {
        n,
        entries,
        iso_class,
        canonical_forms,
    })
}

/// Number of isomorphism classes under the `n!` item relabellings.
pub fn isomorphism_classes(catalog: &MatroidCatalog) -> usize {
    catalog
        .entries
        .iter()
        .map(Matroid::canonical_form)
        .collect::<std::collections::BTreeSet<_>>()
        .len()
}

/// Distinct nonzero normalized rank functions of all matroids on `[n]`, in
/// catalog order of first occurrence.
pub fn normalized_rank_generators(n: usize) -> Result<Vec<Valuation>> {
    if n > 5 {
        return invalid(format!("generator catalogs support n <= 5, got {n}"));
    }
    let catalog = enumerate_matroids(n)?;
    Ok(dedup_generators(&catalog)
        .into_iter()
        .map(|(_, v)| v)
        .collect())
}

/// Like [`normalized_rank_generators`], keeping the first matroid that
/// produced each vector.
pub fn dedup_generators(catalog: &MatroidCatalog) -> Vec<(Matroid, Valuation)> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for m in &catalog.entries {
        let v = m.normalized_rank();
        if v.is_zero() || !seen.insert(v.clone()) {
            continue;
        }
        out.push((m.clone(), v));
    }
    out
}
