//! Manifolds as cohomology models with tangent root data, Chern-number
//! extraction, rational bordism vectors indexed by partitions, products, and
//! the symmetric-function machinery (Newton identities, rewriting symmetric
//! polynomials in elementary symmetric / Chern classes).

use crate::cohomology::{
    char_class, CharClassKind, Bounds, CohElement, CohSpace, Expo, MPoly,
};
use crate::series::{rat_int, Rational};
use num::bigint::BigInt;
use num::{One, Zero};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BordismError {
    #[error("polynomial is not symmetric in the given variables")]
    NotSymmetric,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: u32, got: u32 },
}

/// A partition with decreasing parts; the canonical ordering is
/// lexicographic on the part vectors.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition(pub Vec<u32>);

impl Partition {
    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn of(parts: &[u32]) -> Self {
        let mut v: Vec<u32> = parts.iter().copied().filter(|p| *p > 0).collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        Partition(v)
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains_part(&self, p: u32) -> bool {
        self.0.contains(&p)
    }

    pub fn conjugate(&self) -> Partition {
        let max = self.0.first().copied().unwrap_or(0);
        Partition((1..=max).map(|j| self.0.iter().filter(|p| **p >= j).count() as u32).collect())
    }

    /// Multiplicity map value -> count, with the count of zeros in `n_vars`
    /// variables included under key 0.
    fn counts_padded(&self, n_vars: usize) -> BTreeMap<u32, u32> {
        let mut m = BTreeMap::new();
        for p in &self.0 {
            *m.entry(*p).or_insert(0) += 1;
        }
        let zeros = n_vars as i64 - self.0.len() as i64;
        debug_assert!(zeros >= 0);
        m.insert(0, zeros as u32);
        m
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({})",
            self.0
                .iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(",")
        )
    }
}

/// All partitions of n, in decreasing lexicographic order.
pub fn partitions_of(n: u32) -> Vec<Partition> {
    fn rec(remaining: u32, max_part: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition(prefix.clone()));
            return;
        }
        let hi = remaining.min(max_part);
        for p in (1..=hi).rev() {
            prefix.push(p);
            rec(remaining - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n.max(1), &mut Vec::new(), &mut out);
    if n == 0 {
        return vec![Partition::empty()];
    }
    out
}

pub fn binomial_big(n: i64, k: i64) -> BigInt {
    if k < 0 || k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

fn factorial_big(n: u32) -> BigInt {
    (1..=n as i64).fold(BigInt::one(), |acc, j| acc * BigInt::from(j))
}

/// A symmetric polynomial in `n_vars` degree-1 roots, stored in the
/// monomial-symmetric basis m_lambda.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricPoly {
    pub n_vars: usize,
    pub terms: BTreeMap<Partition, Rational>,
}

impl SymmetricPoly {
    pub fn zero(n_vars: usize) -> Self {
        SymmetricPoly {
            n_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n_vars: usize) -> Self {
        let mut s = Self::zero(n_vars);
        s.terms.insert(Partition::empty(), Rational::one());
        s
    }

    pub fn monomial_basis(lambda: Partition, n_vars: usize) -> Self {
        let mut s = Self::zero(n_vars);
        if lambda.len() <= n_vars {
            s.terms.insert(lambda, Rational::one());
        }
        s
    }

    pub fn add_term(&mut self, lambda: Partition, c: Rational) {
        if c.is_zero() || lambda.len() > self.n_vars {
            return;
        }
        let entry = self.terms.entry(lambda).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            let dead: Vec<Partition> = self
                .terms
                .iter()
                .filter(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone())
                .collect();
            for k in dead {
                self.terms.remove(&k);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Interpret a raw polynomial in the root variables as a symmetric
    /// polynomial; errors if it is not symmetric.
    pub fn from_mpoly(p: &MPoly<Rational>, n_vars: usize) -> Result<Self, BordismError> {
        let mut groups: BTreeMap<Partition, (Rational, u64)> = BTreeMap::new();
        for (e, c) in p.terms() {
            if e.0.len() != n_vars {
                return Err(BordismError::NotSymmetric);
            }
            let lambda = Partition::of(&e.0.iter().map(|x| *x as u32).collect::<Vec<_>>());
            match groups.entry(lambda) {
                std::collections::btree_map::Entry::Vacant(v) => {
                    v.insert((c.clone(), 1));
                }
                std::collections::btree_map::Entry::Occupied(mut o) => {
                    if o.get().0 != *c {
                        return Err(BordismError::NotSymmetric);
                    }
                    o.get_mut().1 += 1;
                }
            }
        }
        let mut out = Self::zero(n_vars);
        for (lambda, (c, seen)) in groups {
            // the full orbit of the monomial must be present
            let counts = lambda.counts_padded(n_vars);
            let mut orbit = factorial_big(n_vars as u32);
            for m in counts.values() {
                orbit /= factorial_big(*m);
            }
            if BigInt::from(seen) != orbit {
                return Err(BordismError::NotSymmetric);
            }
            out.add_term(lambda, c);
        }
        Ok(out)
    }

    /// Multiply by the elementary symmetric polynomial e_k.
    pub fn mul_e(&self, k: u32) -> Self {
        let mut out = Self::zero(self.n_vars);
        if k == 0 {
            return self.clone();
        }
        for (alpha, coeff) in &self.terms {
            let counts = alpha.counts_padded(self.n_vars);
            let values: Vec<u32> = counts.keys().copied().collect();
            let caps: Vec<u32> = values.iter().map(|v| counts[v]).collect();
            // choose how many positions of each current value get a +1
            let mut choice = vec![0u32; values.len()];
            enumerate_choices(&caps, k, 0, &mut choice, &mut |ch| {
                let mut beta_counts: BTreeMap<u32, i64> = BTreeMap::new();
                for (i, v) in values.iter().enumerate() {
                    *beta_counts.entry(*v).or_insert(0) += (counts[v] - ch[i]) as i64;
                    if ch[i] > 0 {
                        *beta_counts.entry(*v + 1).or_insert(0) += ch[i] as i64;
                    }
                }
                let mut beta_parts = Vec::new();
                for (v, m) in &beta_counts {
                    if *v > 0 {
                        for _ in 0..*m {
                            beta_parts.push(*v);
                        }
                    }
                }
                let beta = Partition::of(&beta_parts);
                // multiplicity: prod over values v of C(m_v(beta), increments into v)
                let mut mult = BigInt::one();
                for (i, v) in values.iter().enumerate() {
                    if ch[i] > 0 {
                        let mv = *beta_counts.get(&(*v + 1)).unwrap_or(&0);
                        mult *= binomial_big(mv, ch[i] as i64);
                    }
                }
                out.add_term(
                    beta,
                    coeff * Rational::from_integer(mult),
                );
            });
        }
        out
    }

    /// Multiply by a full product of elementary symmetric polynomials.
    pub fn mul_e_product(&self, mu: &Partition) -> Self {
        let mut out = self.clone();
        for part in &mu.0 {
            out = out.mul_e(*part);
        }
        out
    }
}

fn enumerate_choices(
    caps: &[u32],
    total: u32,
    idx: usize,
    choice: &mut Vec<u32>,
    f: &mut impl FnMut(&[u32]),
) {
    if idx == caps.len() {
        if total == 0 {
            f(choice);
        }
        return;
    }
    let remaining_cap: u32 = caps[idx..].iter().sum();
    if remaining_cap < total {
        return;
    }
    for c in 0..=caps[idx].min(total) {
        choice[idx] = c;
        enumerate_choices(caps, total - c, idx + 1, choice, f);
        choice[idx] = 0;
    }
}

/// Rewrites symmetric polynomials as polynomials in the elementary
/// symmetric polynomials e_i (equivalently the Chern classes c_i), by
/// leading-monomial elimination in lexicographic order. Caches the m-basis
/// expansions of e-products.
pub struct ChernRewriter {
    n_vars: usize,
    e_cache: HashMap<Partition, SymmetricPoly>,
}

impl ChernRewriter {
    pub fn new(n_vars: usize) -> Self {
        ChernRewriter {
            n_vars,
            e_cache: HashMap::new(),
        }
    }

    fn e_product(&mut self, mu: &Partition) -> SymmetricPoly {
        if let Some(p) = self.e_cache.get(mu) {
            return p.clone();
        }
        let p = if mu.is_empty() {
            SymmetricPoly::one(self.n_vars)
        } else {
            let mut rest = mu.clone();
            let first = rest.0.remove(0);
            self.e_product(&rest).mul_e(first)
        };
        self.e_cache.insert(mu.clone(), p.clone());
        p
    }

    /// Express `f` as sum of coeff * c_mu (mu running over partitions,
    /// c_mu = prod c_{mu_i}).
    pub fn to_chern(&mut self, f: &SymmetricPoly) -> BTreeMap<Partition, Rational> {
        assert_eq!(f.n_vars, self.n_vars);
        let mut work = f.clone();
        let mut out = BTreeMap::new();
        while let Some((lambda, c)) = work.terms.iter().next_back().map(|(l, c)| (l.clone(), c.clone()))
        {
            let mu = lambda.conjugate();
            let e = self.e_product(&mu);
            for (beta, coeff) in &e.terms {
                work.add_term(beta.clone(), -(coeff * &c));
            }
            *out.entry(mu).or_insert_with(Rational::zero) += c;
        }
        out.retain(|_, v| !v.is_zero());
        out
    }
}

/// symmetric_to_chern on a raw root polynomial: checks symmetry, then
/// rewrites in c_1..c_n.
pub fn symmetric_to_chern(
    p: &MPoly<Rational>,
    n_vars: usize,
) -> Result<BTreeMap<Partition, Rational>, BordismError> {
    let sym = SymmetricPoly::from_mpoly(p, n_vars)?;
    Ok(ChernRewriter::new(n_vars).to_chern(&sym))
}

/// The power sum s_n = x_1^n + ... expressed in the c-basis via Newton's
/// identities.
pub fn power_sum_in_chern(n: u32) -> BTreeMap<Partition, Rational> {
    // p_k = sum_{i=1}^{k-1} (-1)^{i-1} e_i p_{k-i} + (-1)^{k-1} k e_k
    let mut p: Vec<BTreeMap<Partition, Rational>> = vec![BTreeMap::new()];
    for k in 1..=n {
        let mut acc: BTreeMap<Partition, Rational> = BTreeMap::new();
        for i in 1..k {
            let sign = if (i - 1) % 2 == 0 { 1 } else { -1 };
            for (mu, c) in &p[(k - i) as usize] {
                let mut parts = mu.0.clone();
                parts.push(i);
                let key = Partition::of(&parts);
                *acc.entry(key).or_insert_with(Rational::zero) += c * rat_int(sign);
            }
        }
        let sign = if (k - 1) % 2 == 0 { 1 } else { -1 };
        *acc.entry(Partition::of(&[k])).or_insert_with(Rational::zero) +=
            rat_int(sign * k as i64);
        acc.retain(|_, v| !v.is_zero());
        p.push(acc);
    }
    p.pop().unwrap()
}

/// A modeled manifold: complex dimension, cohomology model, and stable
/// tangent data as degree-1 roots (positive and negative virtual parts).
#[derive(Debug, Clone)]
pub struct Manifold {
    pub n: u32,
    pub space: CohSpace,
    pub tangent_pos: Vec<CohElement>,
    pub tangent_neg: Vec<CohElement>,
}

impl Manifold {
    pub fn new(
        n: u32,
        space: CohSpace,
        tangent_pos: Vec<CohElement>,
        tangent_neg: Vec<CohElement>,
    ) -> Self {
        assert_eq!(
            tangent_pos.len() as i64 - tangent_neg.len() as i64,
            n as i64,
            "virtual tangent rank must equal the complex dimension"
        );
        assert_eq!(space.dim(), n, "cohomology model dimension mismatch");
        Manifold {
            n,
            space,
            tangent_pos,
            tangent_neg,
        }
    }

    /// CP^n with tangent roots (n+1) copies of h and one trivial negative root.
    pub fn projective_space(n: u32) -> Self {
        if n == 0 {
            let space = CohSpace::make_base(&[]);
            return Manifold::new(0, space, vec![MPoly::zero()], vec![MPoly::zero()]);
        }
        let space = CohSpace::make_base(&[n]);
        let h = space.h(0);
        Manifold::new(
            n,
            space,
            vec![h; n as usize + 1],
            vec![MPoly::zero()],
        )
    }

    /// Product manifold: concatenated cohomology models and root lists.
    pub fn product(a: &Manifold, b: &Manifold) -> Self {
        let (space, embed_a, embed_b) = product_space(&a.space, &b.space);
        let map = |roots: &[CohElement], e: &GenMap| -> Vec<CohElement> {
            roots.iter().map(|r| e.apply(r)).collect()
        };
        let mut pos = map(&a.tangent_pos, &embed_a);
        pos.extend(map(&b.tangent_pos, &embed_b));
        let mut neg = map(&a.tangent_neg, &embed_a);
        neg.extend(map(&b.tangent_neg, &embed_b));
        Manifold::new(a.n + b.n, space, pos, neg)
    }

    /// First Chern class of the virtual tangent bundle.
    pub fn c1(&self) -> CohElement {
        let mut out = MPoly::zero();
        for r in &self.tangent_pos {
            out = out.add(r);
        }
        for r in &self.tangent_neg {
            out = out.sub(r);
        }
        out
    }

    /// Total Chern class of the virtual tangent bundle, truncated at n.
    pub fn chern_total(&self) -> CohElement {
        char_class_in_space(
            &self.space,
            &self.tangent_pos,
            &self.tangent_neg,
            CharClassKind::ChernTotal,
        )
    }

    /// All Chern numbers, as a bordism vector.
    pub fn chern_numbers(&self) -> BordismVector {
        let total = self.chern_total();
        let classes: Vec<CohElement> =
            (0..=self.n as u16).map(|d| total.graded_part(d)).collect();
        let bounds = self.space.bounds();
        let mut numbers = BTreeMap::new();
        for lambda in partitions_of(self.n) {
            let mut prod = self.space.one_elem();
            for part in &lambda.0 {
                prod = prod.mul(&classes[*part as usize], &bounds);
            }
            numbers.insert(lambda, self.space.integrate(&prod));
        }
        BordismVector {
            n: self.n,
            numbers,
        }
    }
}

/// Characteristic class computed inside a space's truncation bounds.
pub fn char_class_in_space(
    space: &CohSpace,
    pos: &[CohElement],
    neg: &[CohElement],
    kind: CharClassKind,
) -> CohElement {
    let raw = char_class(pos, neg, kind, space.dim() as u16, space.n_gens());
    // re-truncate against per-generator bounds
    let bounds = space.bounds();
    let mut out = MPoly::zero();
    for (e, c) in raw.terms() {
        if bounds_admit(&bounds, e) {
            out.add_term(e.clone(), c.clone());
        }
    }
    out
}

fn bounds_admit(b: &Bounds, e: &Expo) -> bool {
    e.degree() <= b.cap
        && e.0
            .iter()
            .zip(&b.per_gen)
            .all(|(x, m)| m.is_none_or(|m| *x <= m))
}

/// Generator re-indexing used when embedding factor cohomology into a product.
pub struct GenMap {
    pub index: Vec<usize>,
    pub total: usize,
}

impl GenMap {
    pub fn apply(&self, p: &CohElement) -> CohElement {
        let mut out = MPoly::zero();
        for (e, c) in p.terms() {
            let mut v = vec![0u16; self.total];
            for (i, x) in e.0.iter().enumerate() {
                if *x > 0 {
                    v[self.index[i]] += *x;
                }
            }
            out.add_term(Expo(v), c.clone());
        }
        out
    }
}

/// Product of two cohomology models, with embeddings of each factor.
pub fn product_space(a: &CohSpace, b: &CohSpace) -> (CohSpace, GenMap, GenMap) {
    let dims: Vec<u32> = a
        .base_dims()
        .iter()
        .chain(b.base_dims().iter())
        .copied()
        .collect();
    let (ba, bb) = (a.base_dims().len(), b.base_dims().len());
    let (la, lb) = (a.n_layers(), b.n_layers());
    let total = ba + bb + la + lb;
    let embed_a = GenMap {
        index: (0..ba).chain(ba + bb..ba + bb + la).collect(),
        total,
    };
    let embed_b = GenMap {
        index: (ba..ba + bb)
            .chain(ba + bb + la..total)
            .collect(),
        total,
    };
    let mut space = CohSpace::make_base(&dims);
    for (factor, embed, count) in [(a, &embed_a, la), (b, &embed_b, lb)] {
        for l in 0..count {
            let roots: Vec<CohElement> = factor
                .layer_roots(l)
                .iter()
                .map(|r| embed.apply(r))
                .collect();
            space = space
                .add_projective_bundle(&roots)
                .expect("product layer roots are base classes");
        }
    }
    (space, embed_a, embed_b)
}

/// A rational complex-bordism class of dimension n, given by its Chern
/// numbers indexed by the partitions of n.
#[derive(Debug, Clone, PartialEq)]
pub struct BordismVector {
    n: u32,
    numbers: BTreeMap<Partition, Rational>,
}

impl BordismVector {
    pub fn zero(n: u32) -> Self {
        let numbers = partitions_of(n)
            .into_iter()
            .map(|l| (l, Rational::zero()))
            .collect();
        BordismVector { n, numbers }
    }

    pub fn from_numbers(n: u32, entries: &[(Partition, Rational)]) -> Self {
        let mut v = Self::zero(n);
        for (l, c) in entries {
            assert_eq!(l.weight(), n, "partition weight must equal the dimension");
            *v.numbers.get_mut(l).unwrap() += c.clone();
        }
        v
    }

    pub fn dim(&self) -> u32 {
        self.n
    }

    pub fn get(&self, lambda: &Partition) -> Rational {
        self.numbers
            .get(lambda)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn numbers(&self) -> impl Iterator<Item = (&Partition, &Rational)> {
        self.numbers.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.numbers.values().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut out = self.clone();
        for (l, c) in &other.numbers {
            *out.numbers.get_mut(l).unwrap() += c.clone();
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&rat_int(-1)))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        BordismVector {
            n: self.n,
            numbers: self
                .numbers
                .iter()
                .map(|(l, c)| (l.clone(), c * r))
                .collect(),
        }
    }

    /// True when every Chern number whose monomial contains c_1 vanishes.
    pub fn is_su(&self) -> bool {
        self.numbers
            .iter()
            .all(|(l, c)| !l.contains_part(1) || c.is_zero())
    }

    /// Pair a c-basis polynomial (partition -> coefficient) with the numbers.
    pub fn pair(&self, poly: &BTreeMap<Partition, Rational>) -> Rational {
        let mut acc = Rational::zero();
        for (mu, c) in poly {
            if mu.weight() == self.n {
                acc += c * self.get(mu);
            } else if !c.is_zero() {
                // degree mismatch contributes nothing
            }
        }
        acc
    }

    /// The power-sum Chern number s_n.
    pub fn s_number(&self) -> Rational {
        self.pair(&power_sum_in_chern(self.n))
    }
}

/// Chern numbers of the product class, via the Cauchy expansion of
/// c(E + F) in the two Chern alphabets.
pub fn bordism_product(b1: &BordismVector, b2: &BordismVector) -> BordismVector {
    let n = b1.n + b2.n;
    let mut numbers = BTreeMap::new();
    for lambda in partitions_of(n) {
        let mut acc = Rational::zero();
        // split each part lambda_i = a_i + b_i with sum a_i = b1.n
        let parts = &lambda.0;
        let mut a_parts: Vec<u32> = Vec::new();
        let mut b_parts: Vec<u32> = Vec::new();
        split_parts(
            parts,
            0,
            b1.n,
            b2.n,
            &mut a_parts,
            &mut b_parts,
            &mut |ap, bp| {
                acc += b1.get(&Partition::of(ap)) * b2.get(&Partition::of(bp));
            },
        );
        numbers.insert(lambda, acc);
    }
    BordismVector { n, numbers }
}

#[allow(clippy::too_many_arguments)]
fn split_parts(
    parts: &[u32],
    idx: usize,
    rem_a: u32,
    rem_b: u32,
    a_parts: &mut Vec<u32>,
    b_parts: &mut Vec<u32>,
    f: &mut impl FnMut(&[u32], &[u32]),
) {
    if idx == parts.len() {
        if rem_a == 0 && rem_b == 0 {
            f(a_parts, b_parts);
        }
        return;
    }
    let p = parts[idx];
    for a in 0..=p.min(rem_a) {
        let b = p - a;
        if b > rem_b {
            continue;
        }
        if a > 0 {
            a_parts.push(a);
        }
        if b > 0 {
            b_parts.push(b);
        }
        split_parts(parts, idx + 1, rem_a - a, rem_b - b, a_parts, b_parts, f);
        if a > 0 {
            a_parts.pop();
        }
        if b > 0 {
            b_parts.pop();
        }
    }
}

/// The K3 surface class: c_1^2 = 0, c_2 = 24.
pub fn k3_vector() -> BordismVector {
    BordismVector::from_numbers(2, &[(Partition::of(&[2]), rat_int(24))])
}

/// The almost complex 6-sphere class: c_3 = 2, all other numbers 0.
pub fn s6_vector() -> BordismVector {
    BordismVector::from_numbers(3, &[(Partition::of(&[3]), rat_int(2))])
}

/// The dimension-4 generator stand-in: c_4 = 6, c_2^2 = 2, c_1-numbers 0.
pub fn x4_vector() -> BordismVector {
    BordismVector::from_numbers(
        4,
        &[
            (Partition::of(&[4]), rat_int(6)),
            (Partition::of(&[2, 2]), rat_int(2)),
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rat;

    #[test]
    fn partition_enumeration() {
        assert_eq!(partitions_of(0).len(), 1);
        assert_eq!(partitions_of(4).len(), 5);
        assert_eq!(partitions_of(5).len(), 7);
        assert_eq!(partitions_of(12).len(), 77);
        // canonical ordering is decreasing lexicographic
        let p4 = partitions_of(4);
        assert_eq!(p4[0], Partition::of(&[4]));
        assert_eq!(p4[4], Partition::of(&[1, 1, 1, 1]));
    }

    #[test]
    fn conjugate_partitions() {
        assert_eq!(Partition::of(&[3, 1]).conjugate(), Partition::of(&[2, 1, 1]));
        assert_eq!(Partition::of(&[2, 2]).conjugate(), Partition::of(&[2, 2]));
        assert_eq!(Partition::empty().conjugate(), Partition::empty());
    }

    #[test]
    fn cp1_first_chern_class() {
        // oracle: c(TCP^1) = (1+h)^2 so c_1 = 2h, integrating to 2
        let m = Manifold::projective_space(1);
        let v = m.chern_numbers();
        assert_eq!(v.get(&Partition::of(&[1])), rat_int(2));
    }

    #[test]
    fn cp2_chern_numbers() {
        // oracle: expand (1+h)^3, integrate
        let v = Manifold::projective_space(2).chern_numbers();
        assert_eq!(v.get(&Partition::of(&[1, 1])), rat_int(9));
        assert_eq!(v.get(&Partition::of(&[2])), rat_int(3));
    }

    #[test]
    fn cpn_top_c1_power() {
        for n in 1..=6u32 {
            let v = Manifold::projective_space(n).chern_numbers();
            let ones = Partition(vec![1; n as usize]);
            assert_eq!(
                v.get(&ones),
                Rational::from_integer(BigInt::from(n as i64 + 1).pow(n)),
                "c1^n of P^{}",
                n
            );
        }
    }

    #[test]
    fn cp1_times_cpn_minus_1_c1_power() {
        for n in 2..=5u32 {
            let m = Manifold::product(
                &Manifold::projective_space(1),
                &Manifold::projective_space(n - 1),
            );
            let ones = Partition(vec![1; n as usize]);
            assert_eq!(
                m.chern_numbers().get(&ones),
                Rational::from_integer(BigInt::from(2) * BigInt::from(n as i64).pow(n)),
                "c1^n of P^1 x P^{}",
                n - 1
            );
        }
    }

    #[test]
    fn product_with_point_is_identity() {
        let m = Manifold::projective_space(2);
        let p = Manifold::product(&m, &Manifold::projective_space(0));
        assert_eq!(p.chern_numbers(), m.chern_numbers());
    }

    #[test]
    fn cp1_squared_c1_squared() {
        // oracle: (2h1 + 2h2)^2 integrated over P^1 x P^1
        let m = Manifold::product(
            &Manifold::projective_space(1),
            &Manifold::projective_space(1),
        );
        assert_eq!(m.chern_numbers().get(&Partition::of(&[1, 1])), rat_int(8));
    }

    #[test]
    fn s_number_examples() {
        // s_1 = c_1
        assert_eq!(
            Manifold::projective_space(1).chern_numbers().s_number(),
            rat_int(2)
        );
        // oracle: Newton identity s_2 = c_1^2 - 2 c_2 on the K3 numbers
        assert_eq!(k3_vector().s_number(), rat_int(-48));
        // oracle: power sum of (n+1) equal roots h, integrated over CP^n
        for n in 1..=6u32 {
            assert_eq!(
                Manifold::projective_space(n).chern_numbers().s_number(),
                rat_int(n as i64 + 1),
                "s_n of P^{}",
                n
            );
        }
    }

    #[test]
    fn newton_identities_small() {
        let s2 = power_sum_in_chern(2);
        assert_eq!(s2.get(&Partition::of(&[1, 1])), Some(&rat_int(1)));
        assert_eq!(s2.get(&Partition::of(&[2])), Some(&rat_int(-2)));
        let s3 = power_sum_in_chern(3);
        assert_eq!(s3.get(&Partition::of(&[1, 1, 1])), Some(&rat_int(1)));
        assert_eq!(s3.get(&Partition::of(&[2, 1])), Some(&rat_int(-3)));
        assert_eq!(s3.get(&Partition::of(&[3])), Some(&rat_int(3)));
    }

    #[test]
    fn symmetric_to_chern_examples() {
        let n = 4;
        // x1 + ... + xn -> c1
        let mut p = MPoly::zero();
        for i in 0..n {
            let mut e = Expo::zeros(n);
            e.0[i] = 1;
            p.add_term(e, rat_int(1));
        }
        let c = symmetric_to_chern(&p, n).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[&Partition::of(&[1])], rat_int(1));

        // sum x_i^2 -> c1^2 - 2 c2 (oracle: Newton identity)
        let mut p = MPoly::zero();
        for i in 0..n {
            let mut e = Expo::zeros(n);
            e.0[i] = 2;
            p.add_term(e, rat_int(1));
        }
        let c = symmetric_to_chern(&p, n).unwrap();
        assert_eq!(c[&Partition::of(&[1, 1])], rat_int(1));
        assert_eq!(c[&Partition::of(&[2])], rat_int(-2));

        // e2 -> c2
        let mut p = MPoly::zero();
        for i in 0..n {
            for j in i + 1..n {
                let mut e = Expo::zeros(n);
                e.0[i] = 1;
                e.0[j] = 1;
                p.add_term(e, rat_int(1));
            }
        }
        let c = symmetric_to_chern(&p, n).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[&Partition::of(&[2])], rat_int(1));
    }

    #[test]
    fn non_symmetric_rejected() {
        let mut p = MPoly::zero();
        let mut e = Expo::zeros(3);
        e.0[0] = 2;
        p.add_term(e, rat_int(1));
        assert_eq!(
            symmetric_to_chern(&p, 3).unwrap_err(),
            BordismError::NotSymmetric
        );
        // orbit present but with mismatched coefficients
        let mut p = MPoly::zero();
        for (i, c) in [(0, 1), (1, 1), (2, 2)] {
            let mut e = Expo::zeros(3);
            e.0[i] = 1;
            p.add_term(e, rat_int(c));
        }
        assert_eq!(
            symmetric_to_chern(&p, 3).unwrap_err(),
            BordismError::NotSymmetric
        );
    }

    #[test]
    fn bordism_product_unit() {
        let point = BordismVector::from_numbers(0, &[(Partition::empty(), rat_int(1))]);
        let b = k3_vector();
        assert_eq!(bordism_product(&point, &b), b);
    }

    #[test]
    fn bordism_product_matches_manifold_product() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let pool: Vec<Manifold> = vec![
            Manifold::projective_space(1),
            Manifold::projective_space(2),
            Manifold::projective_space(3),
            Manifold::product(
                &Manifold::projective_space(1),
                &Manifold::projective_space(1),
            ),
        ];
        for _ in 0..8 {
            let a = &pool[rng.gen_range(0..pool.len())];
            let b = &pool[rng.gen_range(0..pool.len())];
            let via_manifold = Manifold::product(a, b).chern_numbers();
            let via_vectors = bordism_product(&a.chern_numbers(), &b.chern_numbers());
            assert_eq!(via_manifold, via_vectors);
        }
    }

    #[test]
    fn k3_squared() {
        // oracle (product manifold route with two c1 = 0 factors):
        // c2(X x Y) = c2 + c2', so c2^2 integrates to 2*24*24 and c4 to 24*24
        let sq = bordism_product(&k3_vector(), &k3_vector());
        assert_eq!(sq.get(&Partition::of(&[2, 2])), rat_int(1152));
        assert_eq!(sq.get(&Partition::of(&[4])), rat_int(576));
        for (l, c) in sq.numbers() {
            if l.contains_part(1) {
                assert!(c.is_zero(), "c1-containing number {} nonzero", l);
            }
        }
        assert!(sq.is_su());
    }

    #[test]
    fn s_number_vanishes_on_products() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let pool = [k3_vector(), s6_vector(), x4_vector()];
        for _ in 0..6 {
            let a = &pool[rng.gen_range(0..pool.len())];
            let b = &pool[rng.gen_range(0..pool.len())];
            let ab = bordism_product(
                &a.scale(&rat(rng.gen_range(-3..4), 1)),
                b,
            );
            assert_eq!(ab.s_number(), rat_int(0));
        }
        // also through honest manifolds
        let m = Manifold::product(
            &Manifold::projective_space(2),
            &Manifold::projective_space(3),
        );
        assert_eq!(m.chern_numbers().s_number(), rat_int(0));
    }

    #[test]
    fn vector_linearity() {
        let a = k3_vector();
        let b = a.scale(&rat(3, 2)).sub(&a).sub(&a.scale(&rat(1, 2)));
        assert!(b.is_zero());
    }
}
