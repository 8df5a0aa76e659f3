//! Membership in cones spanned by normalized matroid rank functions: exact
//! decomposition or a verified Farkas certificate, weighted rank functions,
//! the small-n gross-substitutes cone catalogs, and samplers built on them.

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};
use crate::lp::{solve_nonnegative, Feasibility};
use crate::matroid::{dedup_generators, enumerate_matroids, Matroid, WeightedMatroid};
use crate::rational::{frac, to_primitive_integer, Rational};
use crate::subset::{all_subsets, SubsetMask};
use crate::substitutes::check_gs;
use crate::valuation::Valuation;

/// Named generators of a cone of normalized valuations on `[n]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeSpec {
    pub n: usize,
    pub generators: Vec<(String, Valuation)>,
}

impl ConeSpec {
    /// Checks that generators are normalized, pairwise distinct and GS.
    pub fn new(n: usize, generators: Vec<(String, Valuation)>) -> Result<Self> {
        for (idx, (name, g)) in generators.iter().enumerate() {
            if g.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: g.n(),
                });
            }
            if !g.is_normalized() {
                return invalid(format!("generator {name} is not normalized"));
            }
            if generators[..idx].iter().any(|(_, h)| h == g) {
                return invalid(format!("generator {name} is duplicated"));
            }
            if !check_gs(g).is_gs() {
                return invalid(format!("generator {name} is not gross substitutes"));
            }
        }
        Ok(ConeSpec { n, generators })
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Relabel items of every generator.
    pub fn permute(&self, perm: &[usize]) -> ConeSpec {
        ConeSpec {
            n: self.n,
            generators: self
                .generators
                .iter()
                .map(|(name, g)| (name.clone(), g.permute(perm)))
                .collect(),
        }
    }

    /// `sum_i coefficients[i] * generator_i`.
    pub fn combine(&self, coefficients: &[Rational]) -> Result<Valuation> {
        if coefficients.len() != self.len() {
            return invalid(format!(
                "expected {} coefficients, got {}",
                self.len(),
                coefficients.len()
            ));
        }
        let mut acc = Valuation::zero(self.n);
        for ((_, g), c) in self.generators.iter().zip(coefficients) {
            if !c.is_zero() {
                acc = &acc + &g.scale(c);
            }
        }
        Ok(acc)
    }
}

/// Distinct nonzero normalized rank functions of all matroids on `[n]`.
pub fn matroid_cone(n: usize) -> Result<ConeSpec> {
    if n > 5 {
        return invalid(format!("matroid cones are built for n <= 5, got {n}"));
    }
    let catalog = enumerate_matroids(n)?;
    let generators = dedup_generators(&catalog)
        .into_iter()
        .map(|(m, v)| {
            let bases: Vec<String> = m.bases().iter().map(|b| b.to_string()).collect();
            (format!("rank {} bases {}", m.rank(), bases.join(" ")), v)
        })
        .collect();
    Ok(ConeSpec { n, generators })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    /// `(generator index, α)`, one entry per generator, all `α >= 0`.
    pub coefficients: Vec<(usize, Rational)>,
}

impl Decomposition {
    pub fn alphas(&self) -> Vec<Rational> {
        self.coefficients.iter().map(|(_, a)| a.clone()).collect()
    }

    pub fn support(&self) -> impl Iterator<Item = &(usize, Rational)> {
        self.coefficients.iter().filter(|(_, a)| !a.is_zero())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FarkasCertificate {
    pub y: Valuation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecompositionResult {
    Decomposable(Decomposition),
    Certified(FarkasCertificate),
}

impl DecompositionResult {
    pub fn is_decomposable(&self) -> bool {
        matches!(self, DecompositionResult::Decomposable(_))
    }
}

/// Writes a normalized target as a nonnegative combination of the cone's
/// generators, or returns a certificate that no such combination exists.
/// Either answer is verified before it is returned.
pub fn decompose(target: &Valuation, cone: &ConeSpec) -> Result<DecompositionResult> {
    decompose_traced(target, cone).map(|(r, _)| r)
}

/// [`decompose`] plus the number of simplex pivots taken.
pub fn decompose_traced(
    target: &Valuation,
    cone: &ConeSpec,
) -> Result<(DecompositionResult, usize)> {
    if target.n() != cone.n {
        return Err(Error::DimensionMismatch {
            expected: cone.n,
            found: target.n(),
        });
    }
    if !target.is_normalized() {
        return invalid("decomposition target must be normalized");
    }
    let columns: Vec<Vec<Rational>> = cone
        .generators
        .iter()
        .map(|(_, g)| g.values().to_vec())
        .collect();
    let outcome = solve_nonnegative(&columns, target.values())?;
    let result = match outcome.result {
        Feasibility::Feasible(alpha) => {
            if alpha.iter().any(Signed::is_negative) || cone.combine(&alpha)? != *target {
                return Err(Error::Verification(
                    "simplex solution does not reproduce the target".into(),
                ));
            }
            DecompositionResult::Decomposable(Decomposition {
                coefficients: alpha.into_iter().enumerate().collect(),
            })
        }
        Feasibility::Infeasible(y) => {
            let y = Valuation::from_values(cone.n, to_primitive_integer(&y))?;
            let cert = FarkasCertificate { y };
            if !verify_certificate(&cert, target, cone) {
                return Err(Error::Verification(
                    "extracted Farkas certificate failed verification".into(),
                ));
            }
            DecompositionResult::Certified(cert)
        }
    };
    Ok((result, outcome.pivots))
}

/// `⟨y, target⟩ < 0` and `⟨y, g⟩ >= 0` for every generator.
pub fn verify_certificate(cert: &FarkasCertificate, target: &Valuation, cone: &ConeSpec) -> bool {
    if cert.y.n() != target.n() || cert.y.n() != cone.n {
        return false;
    }
    let Ok(t) = cert.y.inner_product(target) else {
        return false;
    };
    t.is_negative()
        && cone
            .generators
            .iter()
            .all(|(_, g)| cert.y.inner_product(g).is_ok_and(|p| !p.is_negative()))
}

/// Items by decreasing weight, ties by index.
fn weight_order(wm: &WeightedMatroid) -> Vec<usize> {
    let mut order: Vec<usize> = (1..=wm.matroid.n()).collect();
    order.sort_by(|&a, &b| wm.weights[b - 1].cmp(&wm.weights[a - 1]).then(a.cmp(&b)));
    order
}

/// Maximum weight of an independent subset of `S`, by the greedy algorithm.
pub fn weighted_rank_valuation(wm: &WeightedMatroid) -> Valuation {
    let order = weight_order(wm);
    Valuation::from_fn(wm.matroid.n(), |s| {
        let mut chosen = SubsetMask::EMPTY;
        let mut total = Rational::zero();
        for &i in order.iter().filter(|&&i| s.contains(i)) {
            if wm.matroid.is_independent(chosen.with(i)) {
                chosen = chosen.with(i);
                total += &wm.weights[i - 1];
            }
        }
        total
    })
}

/// Telescoping decomposition of a weighted rank function into unweighted ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedRankDecomposition {
    /// Items by decreasing weight.
    pub order: Vec<usize>,
    /// `(w_j - w_{j+1}, restriction to the j heaviest items)`, zero gaps dropped.
    pub terms: Vec<(Rational, Matroid)>,
}

impl WeightedRankDecomposition {
    pub fn evaluate(&self, n: usize) -> Valuation {
        self.terms.iter().fold(Valuation::zero(n), |acc, (c, m)| {
            &acc + &m.rank_function().scale(c)
        })
    }
}

pub fn weighted_rank_decompose(wm: &WeightedMatroid) -> WeightedRankDecomposition {
    let order = weight_order(wm);
    let n = order.len();
    let mut terms = Vec::new();
    let mut prefix = SubsetMask::EMPTY;
    for (pos, &item) in order.iter().enumerate() {
        prefix = prefix.with(item);
        let next = if pos + 1 < n {
            wm.weights[order[pos + 1] - 1].clone()
        } else {
            Rational::zero()
        };
        let gap = &wm.weights[item - 1] - next;
        if !gap.is_zero() {
            terms.push((gap, wm.matroid.restrict(prefix)));
        }
    }
    WeightedRankDecomposition { order, terms }
}

/// The cases of the four-item cone description, named by the shape of the
/// `∅`-tree and the sub-case of the deep tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum G4Case {
    Shallow,
    Deep1,
    Deep2,
    Deep3a,
    Deep3b,
    Deep3c,
}

impl G4Case {
    pub const ALL: [G4Case; 6] = [
        G4Case::Shallow,
        G4Case::Deep1,
        G4Case::Deep2,
        G4Case::Deep3a,
        G4Case::Deep3b,
        G4Case::Deep3c,
    ];

    pub fn name(self) -> &'static str {
        match self {
            G4Case::Shallow => "shallow",
            G4Case::Deep1 => "deep1",
            G4Case::Deep2 => "deep2",
            G4Case::Deep3a => "deep3a",
            G4Case::Deep3b => "deep3b",
            G4Case::Deep3c => "deep3c",
        }
    }
}

impl fmt::Display for G4Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for G4Case {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        G4Case::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown G4 case `{s}`")))
    }
}

enum Shape {
    Uniform(usize),
    /// Edge endpoints for items a, b, c, d (or a, b, c).
    Graph(&'static [(usize, usize)]),
}

fn generator(n: usize, name: &str, shape: Shape) -> (String, Valuation) {
    let m = match shape {
        Shape::Uniform(k) => Matroid::uniform(n, k),
        Shape::Graph(edges) => Matroid::graphic(edges),
    }
    .expect("hard-coded generator matroids are valid");
    (name.to_string(), m.normalized_rank())
}

/// `r[U²₁]` normalized: `v(12) = -1`.
pub fn g2_generators() -> ConeSpec {
    ConeSpec {
        n: 2,
        generators: vec![generator(2, "U2_1", Shape::Uniform(1))],
    }
}

/// `U³₁`, `U³₂` and the graphic matroid with `a, b` parallel and `c` in series.
pub fn g3_generators() -> ConeSpec {
    ConeSpec {
        n: 3,
        generators: vec![
            generator(3, "U3_1", Shape::Uniform(1)),
            generator(3, "U3_2", Shape::Uniform(2)),
            generator(3, "M_((ab)c)", Shape::Graph(&[(0, 1), (0, 1), (1, 2)])),
        ],
    }
}

/// Six generators per case, in the order of the case's coordinates
/// (`x, y, z, w, q, t`; `x, y, q, w, s, t` for deep3c).
pub fn g4_generators(case: G4Case) -> ConeSpec {
    use Shape::{Graph, Uniform};

    // a, b parallel; c, d a path hanging off them.
    const AB_PARALLEL_PATH: &[(usize, usize)] = &[(0, 1), (0, 1), (1, 2), (2, 3)];
    // c, d parallel, closing a triangle with a and b.
    const CD_DOUBLED_TRIANGLE: &[(usize, usize)] = &[(0, 2), (1, 2), (0, 1), (0, 1)];
    // b, c, d parallel; a in series.
    const BCD_PARALLEL: &[(usize, usize)] = &[(1, 2), (0, 1), (0, 1), (0, 1)];
    // c, d parallel; a and b pendant at opposite ends.
    const CD_PARALLEL_PENDANTS: &[(usize, usize)] = &[(0, 3), (1, 2), (0, 1), (0, 1)];
    // Triangles on three items with the fourth pendant.
    const TRIANGLE_ABD: &[(usize, usize)] = &[(0, 1), (0, 2), (1, 3), (1, 2)];
    const TRIANGLE_BCD: &[(usize, usize)] = &[(1, 3), (0, 2), (1, 2), (0, 1)];
    const TRIANGLE_ACD: &[(usize, usize)] = &[(0, 2), (1, 3), (1, 2), (0, 1)];
    const TRIANGLE_ABC: &[(usize, usize)] = &[(0, 2), (1, 2), (0, 1), (1, 3)];

    let shapes: [(&str, Shape); 6] = match case {
        G4Case::Shallow => [
            ("x", Uniform(1)),
            ("y", Graph(AB_PARALLEL_PATH)),
            ("z", Graph(CD_DOUBLED_TRIANGLE)),
            ("w", Uniform(2)),
            ("q", Graph(TRIANGLE_ABD)),
            ("t", Uniform(3)),
        ],
        G4Case::Deep1 => [
            ("x", Uniform(1)),
            ("y", Graph(BCD_PARALLEL)),
            ("z", Graph(CD_PARALLEL_PENDANTS)),
            ("w", Uniform(2)),
            ("q", Graph(TRIANGLE_BCD)),
            ("t", Uniform(3)),
        ],
        G4Case::Deep2 => [
            ("x", Uniform(1)),
            ("y", Graph(BCD_PARALLEL)),
            ("z", Graph(CD_PARALLEL_PENDANTS)),
            ("w", Uniform(2)),
            ("q", Graph(TRIANGLE_ACD)),
            ("t", Uniform(3)),
        ],
        G4Case::Deep3a => [
            ("x", Uniform(1)),
            ("y", Graph(BCD_PARALLEL)),
            ("z", Graph(CD_DOUBLED_TRIANGLE)),
            ("w", Uniform(2)),
            ("q", Graph(TRIANGLE_ABD)),
            ("t", Uniform(3)),
        ],
        G4Case::Deep3b => [
            ("x", Uniform(1)),
            ("y", Graph(BCD_PARALLEL)),
            ("z", Graph(CD_DOUBLED_TRIANGLE)),
            ("w", Uniform(2)),
            ("q", Graph(TRIANGLE_ABC)),
            ("t", Uniform(3)),
        ],
        G4Case::Deep3c => [
            ("x", Uniform(1)),
            ("y", Graph(BCD_PARALLEL)),
            ("q", Graph(CD_DOUBLED_TRIANGLE)),
            ("w", Uniform(2)),
            ("s", Graph(CD_PARALLEL_PENDANTS)),
            ("t", Uniform(3)),
        ],
    };
    ConeSpec {
        n: 4,
        generators: shapes
            .into_iter()
            .map(|(name, shape)| generator(4, name, shape))
            .collect(),
    }
}

/// Every case cone for `n` in {2, 3, 4}, before item relabelling.
pub fn gs_case_cones(n: usize) -> Result<Vec<ConeSpec>> {
    match n {
        2 => Ok(vec![g2_generators()]),
        3 => Ok(vec![g3_generators()]),
        4 => Ok(G4Case::ALL.into_iter().map(g4_generators).collect()),
        _ => invalid(format!("GS cone catalogs exist for n in 2..=4, got {n}")),
    }
}

/// Seeded GS valuations: a uniform case and item relabelling, then
/// coefficients `a / b` with `a` uniform in `0..=5` and `b` in `1..=3`.
pub fn sample_gs(n: usize, seed: u64, count: usize) -> Result<Vec<Valuation>> {
    let cones = gs_case_cones(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let cone = &cones[rng.random_range(0..cones.len())];
        let mut perm: Vec<usize> = (1..=n).collect();
        perm.shuffle(&mut rng);
        let coeffs: Vec<Rational> = (0..cone.len())
            .map(|_| frac(rng.random_range(0..=5), rng.random_range(1..=3)))
            .collect();
        let v = cone.combine(&coeffs)?.permute(&perm);
        if !check_gs(&v).is_gs() {
            return Err(Error::Verification(format!(
                "sampled valuation is not GS (case generators {:?})",
                cone.generators.iter().map(|(n, _)| n).collect::<Vec<_>>()
            )));
        }
        out.push(v);
    }
    Ok(out)
}

/// `v(S | T) <= w(S | T)` for all `S, T`.
pub fn is_strong_quotient(v: &Valuation, w: &Valuation) -> Result<bool> {
    if v.n() != w.n() {
        return Err(Error::DimensionMismatch {
            expected: v.n(),
            found: w.n(),
        });
    }
    let n = v.n();
    Ok(all_subsets(n).all(|s| {
        all_subsets(n).all(|t| {
            let u = s | t;
            &v[u] - &v[t] <= &w[u] - &w[t]
        })
    }))
}
