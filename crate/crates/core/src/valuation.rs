//! Set functions `v : 2^[n] -> Q` stored densely, with discrete derivatives
//! and the affine normal form.

use std::ops::{Add, Index};

use num_traits::Zero;

use crate::error::{invalid, Error, Result};
use crate::rational::Rational;
use crate::subset::{all_subsets, SubsetMask, MAX_ITEMS};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Valuation {
    n: usize,
    values: Vec<Rational>,
}

/// Per-item prices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PriceVector(pub Vec<Rational>);

impl PriceVector {
    pub fn zero(n: usize) -> Self {
        PriceVector(vec![Rational::zero(); n])
    }

    pub fn uniform(n: usize, p: Rational) -> Self {
        PriceVector(vec![p; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Price of item `i` (1-based).
    pub fn of(&self, item: usize) -> &Rational {
        &self.0[item - 1]
    }

    /// Total price of a bundle.
    pub fn total(&self, set: SubsetMask) -> Rational {
        set.items()
            .fold(Rational::zero(), |acc, i| acc + &self.0[i - 1])
    }
}

/// `S -> v(S) + sum_{i in S} p_i + c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineTransform {
    pub prices: PriceVector,
    pub constant: Rational,
}

impl AffineTransform {
    pub fn identity(n: usize) -> Self {
        AffineTransform {
            prices: PriceVector::zero(n),
            constant: Rational::zero(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.constant.is_zero() && self.prices.0.iter().all(Zero::is_zero)
    }
}

impl Valuation {
    pub fn zero(n: usize) -> Self {
        assert!(n <= MAX_ITEMS, "at most {MAX_ITEMS} items supported");
        Valuation {
            n,
            values: vec![Rational::zero(); 1 << n],
        }
    }

    pub fn from_fn<F: FnMut(SubsetMask) -> Rational>(n: usize, f: F) -> Self {
        assert!(n <= MAX_ITEMS, "at most {MAX_ITEMS} items supported");
        Valuation {
            n,
            values: all_subsets(n).map(f).collect(),
        }
    }

    pub fn from_values(n: usize, values: Vec<Rational>) -> Result<Self> {
        if n > MAX_ITEMS {
            return invalid(format!("n={n} exceeds the limit of {MAX_ITEMS} items"));
        }
        if values.len() != 1 << n {
            return invalid(format!(
                "expected {} values for n={n}, got {}",
                1usize << n,
                values.len()
            ));
        }
        Ok(Valuation { n, values })
    }

    /// `v(S) = sum_{i in S} w_i`.
    pub fn additive(weights: &[Rational]) -> Self {
        let prices = PriceVector(weights.to_vec());
        Valuation::from_fn(weights.len(), |s| prices.total(s))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, set: SubsetMask) -> Result<&Rational> {
        set.check(self.n)?;
        Ok(&self.values[set.index()])
    }

    pub fn set_value(&mut self, set: SubsetMask, value: Rational) -> Result<()> {
        set.check(self.n)?;
        self.values[set.index()] = value;
        Ok(())
    }

    fn check_item(&self, item: usize) -> Result<()> {
        if item == 0 || item > self.n {
            return invalid(format!("item {item} out of range 1..={}", self.n));
        }
        Ok(())
    }

    /// `v(S | T) = v(S ∪ T) - v(T)`.
    pub fn marginal(&self, set: SubsetMask, given: SubsetMask) -> Result<Rational> {
        set.check(self.n)?;
        given.check(self.n)?;
        Ok(&self[set | given] - &self[given])
    }

    /// `∂_i v(S) = v(S + i) - v(S)`, defined for `i ∉ S`.
    pub fn d1(&self, item: usize, set: SubsetMask) -> Result<Rational> {
        self.check_item(item)?;
        set.check(self.n)?;
        if set.contains(item) {
            return invalid(format!("item {item} belongs to {set}"));
        }
        Ok(&self[set.with(item)] - &self[set])
    }

    /// `∂_ij v(S) = v(S + ij) - v(S + i) - v(S + j) + v(S)`.
    pub fn d2(&self, i: usize, j: usize, set: SubsetMask) -> Result<Rational> {
        self.check_item(i)?;
        self.check_item(j)?;
        set.check(self.n)?;
        if i == j {
            return invalid(format!(
                "second derivative needs distinct items, got {i} twice"
            ));
        }
        if set.contains(i) || set.contains(j) {
            return invalid(format!("items {i},{j} must lie outside {set}"));
        }
        Ok(self.d2_unchecked(i, j, set))
    }

    pub(crate) fn d2_unchecked(&self, i: usize, j: usize, set: SubsetMask) -> Rational {
        &self[set.with(i).with(j)] - &self[set.with(i)] - &self[set.with(j)] + &self[set]
    }

    pub fn apply_affine(&self, t: &AffineTransform) -> Result<Valuation> {
        if t.prices.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: t.prices.len(),
            });
        }
        Ok(Valuation::from_fn(self.n, |s| {
            &self[s] + t.prices.total(s) + &t.constant
        }))
    }

    pub fn is_normalized(&self) -> bool {
        self[SubsetMask::EMPTY].is_zero()
            && (1..=self.n).all(|i| self[SubsetMask::singleton(i)].is_zero())
    }

    /// Returns the normal form `v0` and the transform with `apply_affine(v0, t) = v`.
    pub fn normalize(&self) -> (Valuation, AffineTransform) {
        let constant = self[SubsetMask::EMPTY].clone();
        let prices = PriceVector(
            (1..=self.n)
                .map(|i| &self[SubsetMask::singleton(i)] - &constant)
                .collect(),
        );
        let normal = Valuation::from_fn(self.n, |s| &self[s] - prices.total(s) - &constant);
        (normal, AffineTransform { prices, constant })
    }

    pub fn inner_product(&self, other: &Valuation) -> Result<Rational> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .filter(|(a, b)| !a.is_zero() && !b.is_zero())
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b))
    }

    /// `w(T) = v(∪_{t ∈ T} S_t)` for a partition `S_1, ..., S_k` of `[n]`.
    pub fn item_grouping(&self, partition: &[SubsetMask]) -> Result<Valuation> {
        let mut covered = SubsetMask::EMPTY;
        for block in partition {
            block.check(self.n)?;
            if block.is_empty() {
                return invalid("empty block in partition");
            }
            if !covered.is_disjoint(*block) {
                return invalid(format!("block {block} overlaps an earlier block"));
            }
            covered = covered | *block;
        }
        if covered != SubsetMask::full(self.n) {
            return invalid(format!(
                "partition does not cover [{}]: missing {}",
                self.n,
                SubsetMask::full(self.n) - covered
            ));
        }
        Ok(Valuation::from_fn(partition.len(), |t| {
            let union = t
                .items()
                .fold(SubsetMask::EMPTY, |acc, b| acc | partition[b - 1]);
            self[union].clone()
        }))
    }

    pub fn scale(&self, factor: &Rational) -> Valuation {
        Valuation {
            n: self.n,
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }

    /// `αu + βv`.
    pub fn linear_combination(
        &self,
        alpha: &Rational,
        other: &Valuation,
        beta: &Rational,
    ) -> Result<Valuation> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(Valuation {
            n: self.n,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a * alpha + b * beta)
                .collect(),
        })
    }

    /// Relabel items: item `i` becomes `perm[i - 1]`.
    pub fn permute(&self, perm: &[usize]) -> Valuation {
        assert_eq!(perm.len(), self.n);
        let mut values = vec![Rational::zero(); self.values.len()];
        for s in all_subsets(self.n) {
            values[s.permute(perm).index()] = self[s].clone();
        }
        Valuation { n: self.n, values }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    /// `(S, v(S))` in canonical subset order.
    pub fn iter(&self) -> impl Iterator<Item = (SubsetMask, &Rational)> {
        all_subsets(self.n).zip(self.values.iter())
    }
}

impl Index<SubsetMask> for Valuation {
    type Output = Rational;

    fn index(&self, set: SubsetMask) -> &Rational {
        &self.values[set.index()]
    }
}

impl Add for &Valuation {
    type Output = Valuation;

    fn add(self, rhs: &Valuation) -> Valuation {
        assert_eq!(
            self.n, rhs.n,
            "adding valuations over different ground sets"
        );
        Valuation {
            n: self.n,
            values: self
                .values
                .iter()
                .zip(&rhs.values)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}
