//! Substitution trees: the `Δ^S_ij = -∂_ij v(S)` tensor, minimal labelled
//! trees stored as laminar families, tree concordance, and integration of a
//! tensor back into a normalized valuation.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::error::{invalid, Error, Result};
use crate::rational::Rational;
use crate::subset::{all_subsets, pairs_outside, triples_outside, SubsetMask};
use crate::substitutes::check_gs;
use crate::valuation::Valuation;

/// `Δ^S_ij` for every `S` and unordered pair `{i, j}` outside `S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaTensor {
    n: usize,
    values: Vec<Rational>,
}

impl DeltaTensor {
    pub fn zeros(n: usize) -> Self {
        assert!(n <= 10, "delta tensors are limited to n <= 10");
        DeltaTensor {
            n,
            values: vec![Rational::zero(); (1 << n) * n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn slot(&self, set: SubsetMask, i: usize, j: usize) -> usize {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        (set.index() * self.n + (a - 1)) * self.n + (b - 1)
    }

    fn check_key(&self, set: SubsetMask, i: usize, j: usize) -> Result<()> {
        set.check(self.n)?;
        if i == j || i == 0 || j == 0 || i > self.n || j > self.n {
            return invalid(format!("bad item pair ({i},{j}) for n={}", self.n));
        }
        if set.contains(i) || set.contains(j) {
            return invalid(format!("items {i},{j} must lie outside {set}"));
        }
        Ok(())
    }

    pub fn get(&self, set: SubsetMask, i: usize, j: usize) -> Result<&Rational> {
        self.check_key(set, i, j)?;
        Ok(self.at(set, i, j))
    }

    pub fn set(&mut self, set: SubsetMask, i: usize, j: usize, value: Rational) -> Result<()> {
        self.check_key(set, i, j)?;
        let slot = self.slot(set, i, j);
        self.values[slot] = value;
        Ok(())
    }

    /// Unchecked lookup; symmetric in `i, j`.
    pub fn at(&self, set: SubsetMask, i: usize, j: usize) -> &Rational {
        &self.values[self.slot(set, i, j)]
    }

    /// `(S, i, j, Δ^S_ij)` with `i < j`, `S` increasing.
    pub fn entries(&self) -> impl Iterator<Item = (SubsetMask, usize, usize, &Rational)> + '_ {
        all_subsets(self.n).flat_map(move |s| {
            pairs_outside(self.n, s)
                .into_iter()
                .map(move |(i, j)| (s, i, j, self.at(s, i, j)))
        })
    }

    /// Relabel items: item `i` becomes `perm[i - 1]`.
    pub fn permute(&self, perm: &[usize]) -> DeltaTensor {
        let mut out = DeltaTensor::zeros(self.n);
        for (s, i, j, d) in self.entries() {
            let slot = out.slot(s.permute(perm), perm[i - 1], perm[j - 1]);
            out.values[slot] = d.clone();
        }
        out
    }
}

pub fn delta_tensor(v: &Valuation) -> DeltaTensor {
    let mut d = DeltaTensor::zeros(v.n());
    for s in all_subsets(v.n()) {
        for (i, j) in pairs_outside(v.n(), s) {
            let slot = d.slot(s, i, j);
            d.values[slot] = -v.d2_unchecked(i, j, s);
        }
    }
    d
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeNode {
    pub subset: SubsetMask,
    pub label: Rational,
}

/// Minimal substitution tree for one conditioning set, as the laminar family
/// of its internal nodes. Leaves are implicit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledTree {
    /// The conditioning set `S`.
    pub set: SubsetMask,
    /// Leaf set `[n] ∖ S`; always the first node.
    pub ground: SubsetMask,
    /// Preorder: every node precedes its descendants; siblings by smallest item.
    pub nodes: Vec<TreeNode>,
}

impl LabeledTree {
    pub fn family(&self) -> Vec<SubsetMask> {
        self.nodes.iter().map(|n| n.subset).collect()
    }

    /// Label of the smallest node containing both leaves.
    pub fn lca_label(&self, i: usize, j: usize) -> Option<&Rational> {
        self.nodes
            .iter()
            .filter(|n| n.subset.contains(i) && n.subset.contains(j))
            .min_by_key(|n| n.subset.len())
            .map(|n| &n.label)
    }

    /// Smallest strict ancestor of the node at `idx`.
    pub fn parent_of(&self, idx: usize) -> Option<usize> {
        let child = self.nodes[idx].subset;
        self.nodes
            .iter()
            .enumerate()
            .filter(|(k, n)| *k != idx && child.is_subset_of(n.subset) && child != n.subset)
            .min_by_key(|(_, n)| n.subset.len())
            .map(|(k, _)| k)
    }

    /// The `Δ^S` matrix induced by lowest-common-ancestor labels.
    pub fn induced_deltas(&self) -> BTreeMap<(usize, usize), Rational> {
        let leaves: Vec<usize> = self.ground.items().collect();
        let mut out = BTreeMap::new();
        for (a, &i) in leaves.iter().enumerate() {
            for &j in &leaves[a + 1..] {
                if let Some(l) = self.lca_label(i, j) {
                    out.insert((i, j), l.clone());
                }
            }
        }
        out
    }
}

/// Checks `Δ >= 0` on every pair and min-attained-twice on every triple of
/// `[n] ∖ S`. Returns the first offending triple (or pair, repeated).
fn triangle_violation(d: &DeltaTensor, set: SubsetMask) -> Option<(usize, usize, usize)> {
    let n = d.n;
    for (i, j) in pairs_outside(n, set) {
        if d.at(set, i, j).is_negative() {
            return Some((i, j, j));
        }
    }
    for (i, j, k) in triples_outside(n, set) {
        let mut vals = [d.at(set, i, j), d.at(set, i, k), d.at(set, j, k)];
        vals.sort();
        if vals[0] != vals[1] {
            return Some((i, j, k));
        }
    }
    None
}

/// The unique minimal labelled tree for `Δ^S`.
///
/// Each node takes the minimum pair value over its leaves as label; its
/// children are the connected components of the graph joining leaves whose
/// value exceeds that label.
pub fn extract_tree(d: &DeltaTensor, set: SubsetMask) -> Result<LabeledTree> {
    set.check(d.n)?;
    let ground = set.complement(d.n);
    if ground.len() < 2 {
        return invalid(format!(
            "S={set} leaves fewer than two items; no substitution tree exists"
        ));
    }
    if let Some((i, j, k)) = triangle_violation(d, set) {
        return Err(Error::NotGrossSubstitutes { set, i, j, k });
    }
    let mut nodes = Vec::new();
    build_node(d, set, ground, &mut nodes);
    Ok(LabeledTree { set, ground, nodes })
}

fn build_node(d: &DeltaTensor, set: SubsetMask, leaves: SubsetMask, out: &mut Vec<TreeNode>) {
    let items: Vec<usize> = leaves.items().collect();
    let label = items
        .iter()
        .enumerate()
        .flat_map(|(a, &i)| items[a + 1..].iter().map(move |&j| d.at(set, i, j)))
        .min()
        .cloned()
        .expect("node with at least two leaves");
    out.push(TreeNode {
        subset: leaves,
        label: label.clone(),
    });

    let mut remaining = leaves;
    while let Some(seed) = remaining.items().next() {
        let mut component = SubsetMask::singleton(seed);
        let mut frontier = vec![seed];
        while let Some(i) = frontier.pop() {
            for j in (remaining - component).items() {
                if *d.at(set, i, j) > label {
                    component = component.with(j);
                    frontier.push(j);
                }
            }
        }
        remaining = remaining - component;
        if component.len() >= 2 {
            build_node(d, set, component, out);
        }
    }
}

/// Minimal trees for every `S` leaving at least two items.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeStructure {
    pub n: usize,
    pub trees: BTreeMap<SubsetMask, LabeledTree>,
}

impl TreeStructure {
    pub fn family(&self, set: SubsetMask) -> Option<Vec<SubsetMask>> {
        self.trees.get(&set).map(LabeledTree::family)
    }
}

pub fn tree_structure(v: &Valuation) -> Result<TreeStructure> {
    let d = delta_tensor(v);
    let n = v.n();
    let mut trees = BTreeMap::new();
    for s in all_subsets(n) {
        if s.complement(n).len() >= 2 {
            trees.insert(s, extract_tree(&d, s)?);
        }
    }
    Ok(TreeStructure { n, trees })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaminarCheckResult {
    pub laminar: bool,
    /// A crossing pair when the family is not laminar.
    pub witness: Option<(SubsetMask, SubsetMask)>,
}

/// Every pair of members is nested or disjoint.
pub fn is_laminar(n: usize, family: &[SubsetMask]) -> LaminarCheckResult {
    debug_assert!(family.iter().all(|s| s.fits(n)));
    for (a, &x) in family.iter().enumerate() {
        for &y in &family[a + 1..] {
            if crosses(x, y) {
                return LaminarCheckResult {
                    laminar: false,
                    witness: Some((x, y)),
                };
            }
        }
    }
    LaminarCheckResult {
        laminar: true,
        witness: None,
    }
}

fn crosses(x: SubsetMask, y: SubsetMask) -> bool {
    !(x - y).is_empty() && !(x & y).is_empty() && !(y - x).is_empty()
}

/// Where two GS valuations fail to be tree-concordant, if anywhere: the
/// conditioning set and a crossing pair of minimal-tree nodes.
pub fn concordance_witness(
    u: &Valuation,
    v: &Valuation,
) -> Result<Option<(SubsetMask, SubsetMask, SubsetMask)>> {
    if u.n() != v.n() {
        return Err(Error::DimensionMismatch {
            expected: u.n(),
            found: v.n(),
        });
    }
    let tu = tree_structure(u)?;
    let tv = tree_structure(v)?;
    for (s, tree_u) in &tu.trees {
        let fu = tree_u.family();
        let fv = tv.trees[s].family();
        for &x in &fu {
            for &y in &fv {
                if crosses(x, y) {
                    return Ok(Some((*s, x, y)));
                }
            }
        }
    }
    Ok(None)
}

/// For every `S`, the union of the two minimal laminar families is laminar.
pub fn concordant(u: &Valuation, v: &Valuation) -> Result<bool> {
    Ok(concordance_witness(u, v)?.is_none())
}

/// `αu + βv` for concordant GS valuations; the result is re-checked for GS.
pub fn concordant_sum(
    u: &Valuation,
    v: &Valuation,
    alpha: &Rational,
    beta: &Rational,
) -> Result<Valuation> {
    if alpha.is_negative() || beta.is_negative() {
        return invalid("concordant sum needs nonnegative coefficients");
    }
    let witness = concordance_witness(u, v)?;
    if let Some((set, x, y)) = witness {
        if alpha.is_positive() && beta.is_positive() {
            return Err(Error::NotConcordant { set, x, y });
        }
    }
    let sum = u.linear_combination(alpha, v, beta)?;
    let report = check_gs(&sum);
    if !report.is_gs() {
        return Err(Error::Verification(format!(
            "concordant sum failed the GS check: {}",
            report.violations[0]
        )));
    }
    Ok(sum)
}

/// First `(S, {i,j,k})` breaking
/// `Δ^{S+k}_ij - Δ^S_ij = Δ^{S+j}_ik - Δ^S_ik = Δ^{S+i}_jk - Δ^S_jk`.
pub fn integrability_violation(d: &DeltaTensor) -> Option<(SubsetMask, usize, usize, usize)> {
    let n = d.n;
    for s in all_subsets(n) {
        for (i, j, k) in triples_outside(n, s) {
            let a = d.at(s.with(k), i, j) - d.at(s, i, j);
            let b = d.at(s.with(j), i, k) - d.at(s, i, k);
            let c = d.at(s.with(i), j, k) - d.at(s, j, k);
            if a != b || b != c {
                return Some((s, i, j, k));
            }
        }
    }
    None
}

pub fn check_integrability(d: &DeltaTensor) -> bool {
    integrability_violation(d).is_none()
}

/// The unique normalized valuation with `delta_tensor(v) = d`:
/// `v(S) = -sum_{i<j in S} Δ^{S_{<i}}_ij`.
pub fn reconstruct(d: &DeltaTensor) -> Result<Valuation> {
    let order: Vec<usize> = (1..=d.n).collect();
    reconstruct_in_order(d, &order)
}

/// [`reconstruct`] with the items ranked by `order` (first is smallest).
pub fn reconstruct_in_order(d: &DeltaTensor, order: &[usize]) -> Result<Valuation> {
    let n = d.n;
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (1..=n).collect::<Vec<_>>() {
        return invalid("order must be a permutation of the items");
    }
    if let Some((set, i, j, k)) = integrability_violation(d) {
        return Err(Error::NotIntegrable { set, i, j, k });
    }
    Ok(Valuation::from_fn(n, |s| {
        let ranked: Vec<usize> = order.iter().copied().filter(|&i| s.contains(i)).collect();
        let mut total = Rational::zero();
        for (a, &i) in ranked.iter().enumerate() {
            let before = SubsetMask::from_items(ranked[..a].iter().copied());
            for &j in &ranked[a + 1..] {
                total -= d.at(before, i, j);
            }
        }
        total
    }))
}

/// For every `S` and triple: whenever `Δ_ik = Δ_jk = Δ_ij - α` with `α >= 0`,
/// also `Δ^{S+j}_ik = Δ^{S+i}_jk = Δ^{S+k}_ij - α`.
pub fn check_label_consistency(d: &DeltaTensor) -> bool {
    let n = d.n;
    all_subsets(n).all(|s| {
        triples_outside(n, s).into_iter().all(|(a, b, c)| {
            [(a, b, c), (a, c, b), (b, c, a)]
                .into_iter()
                .all(|(i, j, k)| {
                    let top = d.at(s, i, j);
                    let (ik, jk) = (d.at(s, i, k), d.at(s, j, k));
                    if ik != jk || top < ik {
                        return true;
                    }
                    let alpha = top - ik;
                    let lhs = d.at(s.with(j), i, k);
                    lhs == d.at(s.with(i), j, k) && *lhs == d.at(s.with(k), i, j) - &alpha
                })
        })
    })
}
