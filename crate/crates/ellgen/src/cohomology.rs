//! Finite cohomology models with integration.
//!
//! A [`CohSpace`] is a product of projective spaces (generators h1, h2, ...,
//! one per factor, with h_i^{n_i+1} = 0) plus bundle layers: each layer is a
//! projective bundle P(V) for a split bundle V given by degree-1 Chern roots
//! on the base, contributing one fiber generator u of degree 1. The ring
//! above a layer is free in u; integration reduces u-powers through the
//! Segre-class pushforward pi_*(u^i) = c_{i-(r-1)}(-V) and then pairs with
//! the fundamental class of the base.

use crate::series::{GSeries, Rational};
use num::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Coefficient rings the cohomology model can be tensored with.
pub trait Coeff: Clone + PartialEq + std::fmt::Debug {
    fn ring_zero() -> Self;
    fn ring_one() -> Self;
    fn is_ring_zero(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn scale_rat(&self, r: &Rational) -> Self;
}

impl Coeff for Rational {
    fn ring_zero() -> Self {
        <Rational as Zero>::zero()
    }
    fn ring_one() -> Self {
        <Rational as One>::one()
    }
    fn is_ring_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self.clone()
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn scale_rat(&self, r: &Rational) -> Self {
        self * r
    }
}

impl Coeff for GSeries {
    fn ring_zero() -> Self {
        GSeries::zero()
    }
    fn ring_one() -> Self {
        GSeries::one()
    }
    fn is_ring_zero(&self) -> bool {
        GSeries::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn neg_ref(&self) -> Self {
        self.neg()
    }
    fn from_rational(r: &Rational) -> Self {
        GSeries::constant(r.clone())
    }
    fn scale_rat(&self, r: &Rational) -> Self {
        self.scale(r)
    }
}

/// Exponent vector over the space's generators.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Expo(pub Vec<u16>);

impl Expo {
    pub fn zeros(n: usize) -> Self {
        Expo(vec![0; n])
    }

    pub fn degree(&self) -> u16 {
        self.0.iter().sum()
    }

    fn add(&self, other: &Expo) -> Expo {
        Expo(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

/// Truncation shape: per-generator exponent bounds plus a total-degree cap.
#[derive(Debug, Clone)]
pub struct Bounds {
    pub per_gen: Vec<Option<u16>>,
    pub cap: u16,
}

impl Bounds {
    pub fn free(n_gens: usize, cap: u16) -> Self {
        Bounds {
            per_gen: vec![None; n_gens],
            cap,
        }
    }

    fn admits(&self, e: &Expo) -> bool {
        if e.degree() > self.cap {
            return false;
        }
        e.0.iter()
            .zip(&self.per_gen)
            .all(|(x, b)| b.is_none_or(|m| *x <= m))
    }
}

/// A graded element of the cohomology model, with coefficients in `C`.
#[derive(Debug, Clone, PartialEq)]
pub struct MPoly<C: Coeff> {
    terms: BTreeMap<Expo, C>,
}

pub type CohElement = MPoly<Rational>;

impl<C: Coeff> MPoly<C> {
    pub fn zero() -> Self {
        MPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n_gens: usize, c: C) -> Self {
        let mut p = Self::zero();
        p.add_term(Expo::zeros(n_gens), c);
        p
    }

    pub fn one(n_gens: usize) -> Self {
        Self::constant(n_gens, C::ring_one())
    }

    pub fn monomial(e: Expo, c: C) -> Self {
        let mut p = Self::zero();
        p.add_term(e, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Expo, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &Expo) -> C {
        self.terms.get(e).cloned().unwrap_or_else(C::ring_zero)
    }

    pub fn add_term(&mut self, e: Expo, c: C) {
        if c.is_ring_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().add_ref(&c);
                if sum.is_ring_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.neg_ref()))
                .collect(),
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if Zero::is_zero(r) {
            return Self::zero();
        }
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.scale_rat(r)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self, bounds: &Bounds) -> Self {
        let mut out = Self::zero();
        for (ea, ca) in &self.terms {
            if ea.degree() > bounds.cap {
                continue;
            }
            for (eb, cb) in &other.terms {
                let e = ea.add(eb);
                if bounds.admits(&e) {
                    out.add_term(e, ca.mul_ref(cb));
                }
            }
        }
        out
    }

    pub fn pow(&self, n: u32, bounds: &Bounds) -> Self {
        let gens = bounds.per_gen.len();
        let mut out = Self::one(gens);
        for _ in 0..n {
            out = out.mul(self, bounds);
        }
        out
    }

    /// The homogeneous component of the given total degree.
    pub fn graded_part(&self, d: u16) -> Self {
        MPoly {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.degree() == d)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn max_degree(&self) -> u16 {
        self.terms.keys().map(|e| e.degree()).max().unwrap_or(0)
    }

    /// True when every monomial has the same total degree.
    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(|e| e.degree());
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|x| x == d),
        }
    }
}

impl CohElement {
    /// Sorted monomial rendering for debugging output.
    pub fn render(&self, gen_names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (e, c) in &self.terms {
            let mut s = if c.denom().is_one() {
                format!("{}", c.numer())
            } else {
                format!("{}/{}", c.numer(), c.denom())
            };
            for (i, x) in e.0.iter().enumerate() {
                if *x > 0 {
                    s.push_str(&format!("*{}", gen_names[i]));
                    if *x > 1 {
                        s.push_str(&format!("^{}", x));
                    }
                }
            }
            parts.push(s);
        }
        parts.join(" + ")
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CohError {
    #[error("bundle roots must be homogeneous of degree 1 on the base")]
    DegreeMismatch,
}

/// A line bundle, recorded by its first Chern class (homogeneous of degree 1;
/// the zero element models the trivial bundle).
#[derive(Debug, Clone, PartialEq)]
pub struct LineData {
    pub c1: CohElement,
}

impl LineData {
    pub fn new(c1: CohElement) -> Result<Self, CohError> {
        if c1.terms().all(|(e, _)| e.degree() == 1) {
            Ok(LineData { c1 })
        } else {
            Err(CohError::DegreeMismatch)
        }
    }

    pub fn trivial() -> Self {
        LineData {
            c1: MPoly::zero(),
        }
    }
}

/// Re-embed an element into a space with more generators appended.
pub fn widen_element(p: &CohElement, n_new: usize) -> CohElement {
    let mut q = MPoly::zero();
    for (e, c) in p.terms() {
        let mut v = e.0.clone();
        v.resize(n_new, 0);
        q.add_term(Expo(v), c.clone());
    }
    q
}

#[derive(Debug, Clone)]
struct Layer {
    rank: usize,
    roots: Vec<CohElement>,
    /// segre[j] = c_j(-V), a base element of degree j.
    segre: Vec<CohElement>,
}

/// A product of projective spaces with optional parallel bundle layers.
#[derive(Debug, Clone)]
pub struct CohSpace {
    base_dims: Vec<u32>,
    layers: Vec<Layer>,
}

impl CohSpace {
    /// Product of projective spaces CP^{n_1} x ... x CP^{n_m}.
    pub fn make_base(dims: &[u32]) -> Self {
        CohSpace {
            base_dims: dims.to_vec(),
            layers: Vec::new(),
        }
    }

    pub fn base_dims(&self) -> &[u32] {
        &self.base_dims
    }

    pub fn n_base_gens(&self) -> usize {
        self.base_dims.len()
    }

    pub fn n_gens(&self) -> usize {
        self.base_dims.len() + self.layers.len()
    }

    pub fn n_layers(&self) -> usize {
        self.layers.len()
    }

    /// Total complex dimension.
    pub fn dim(&self) -> u32 {
        self.base_dims.iter().sum::<u32>()
            + self
                .layers
                .iter()
                .map(|l| l.rank as u32 - 1)
                .sum::<u32>()
    }

    pub fn bounds(&self) -> Bounds {
        let mut per_gen: Vec<Option<u16>> =
            self.base_dims.iter().map(|d| Some(*d as u16)).collect();
        per_gen.extend(std::iter::repeat_n(None, self.layers.len()));
        Bounds {
            per_gen,
            cap: self.dim() as u16,
        }
    }

    /// The i-th base hyperplane class.
    pub fn h(&self, i: usize) -> CohElement {
        let mut e = Expo::zeros(self.n_gens());
        e.0[i] = 1;
        MPoly::monomial(e, Rational::one())
    }

    /// The fiber generator of the given layer.
    pub fn u(&self, layer: usize) -> CohElement {
        let mut e = Expo::zeros(self.n_gens());
        e.0[self.base_dims.len() + layer] = 1;
        MPoly::monomial(e, Rational::one())
    }

    pub fn one_elem(&self) -> CohElement {
        MPoly::one(self.n_gens())
    }

    pub fn gen_names(&self) -> Vec<String> {
        let mut names: Vec<String> = (1..=self.base_dims.len())
            .map(|i| format!("h{}", i))
            .collect();
        if self.layers.len() == 1 {
            names.push("u".to_string());
        } else {
            names.extend((1..=self.layers.len()).map(|i| format!("u{}", i)));
        }
        names
    }

    /// Append a projective-bundle layer P(V) with the given Chern roots of V.
    /// Roots must be degree-1 elements supported on the base generators; the
    /// rank of V is the number of roots given, zero roots included.
    pub fn add_projective_bundle(&self, roots: &[CohElement]) -> Result<CohSpace, CohError> {
        let n_base = self.base_dims.len();
        for r in roots {
            if r.is_zero() {
                continue;
            }
            let deg_ok = r.terms().all(|(e, _)| e.degree() == 1);
            let base_only = r
                .terms()
                .all(|(e, _)| e.0.iter().skip(n_base).all(|x| *x == 0));
            if !deg_ok || !base_only {
                return Err(CohError::DegreeMismatch);
            }
        }
        let mut out = self.clone();
        // widen existing element exponent vectors lazily: elements carry
        // their own generator count, so re-embed roots into the new space.
        let widen = |p: &CohElement, n_new: usize| -> CohElement {
            let mut q = MPoly::zero();
            for (e, c) in p.terms() {
                let mut v = e.0.clone();
                v.resize(n_new, 0);
                q.add_term(Expo(v), c.clone());
            }
            q
        };
        let n_new = self.n_gens() + 1;
        let roots_w: Vec<CohElement> = roots.iter().map(|r| widen(r, n_new)).collect();
        let base_cap: u16 = self.base_dims.iter().sum::<u32>() as u16;
        let mut bounds = Bounds {
            per_gen: self.base_dims.iter().map(|d| Some(*d as u16)).collect(),
            cap: base_cap,
        };
        bounds.per_gen.resize(n_new, None);
        // c(-V) = prod (1 + rho)^{-1} = prod sum_j (-rho)^j on the base
        let mut total = MPoly::one(n_new);
        for r in &roots_w {
            let mut inv = MPoly::one(n_new);
            let mut pw = MPoly::one(n_new);
            for j in 1..=base_cap {
                pw = pw.mul(&r.neg(), &bounds);
                if pw.is_zero() {
                    break;
                }
                let _ = j;
                inv = inv.add(&pw);
            }
            total = total.mul(&inv, &bounds);
        }
        let segre: Vec<CohElement> = (0..=base_cap).map(|j| total.graded_part(j)).collect();
        out.layers.push(Layer {
            rank: roots.len(),
            roots: roots_w,
            segre,
        });
        // widen earlier layers' stored elements
        for l in out.layers.iter_mut() {
            l.roots = l.roots.iter().map(|r| widen(r, n_new)).collect();
            l.segre = l.segre.iter().map(|s| widen(s, n_new)).collect();
        }
        Ok(out)
    }

    /// The pushforward pi_*(u^i) of the given layer, as a base element.
    pub fn pushforward_u_power(&self, layer: usize, i: usize) -> CohElement {
        let l = &self.layers[layer];
        let j = i as i64 - (l.rank as i64 - 1);
        if j < 0 || j as usize >= l.segre.len() {
            return MPoly::zero();
        }
        l.segre[j as usize].clone()
    }

    pub fn layer_rank(&self, layer: usize) -> usize {
        self.layers[layer].rank
    }

    pub fn layer_roots(&self, layer: usize) -> &[CohElement] {
        &self.layers[layer].roots
    }

    /// Integrate against the fundamental class. Layer generators are pushed
    /// down via Segre classes; the base pairing extracts the coefficient of
    /// h_1^{n_1} ... h_m^{n_m}. Vanishes off the top total degree.
    pub fn integrate<C: Coeff>(&self, p: &MPoly<C>) -> C {
        let mut acc = C::ring_zero();
        for (e, c) in p.terms() {
            let w = self.integral_weight(e);
            if !Zero::is_zero(&w) {
                acc = acc.add_ref(&c.scale_rat(&w));
            }
        }
        acc
    }

    /// Rational weight the monomial contributes under integration.
    pub fn integral_weight(&self, e: &Expo) -> Rational {
        let n_base = self.base_dims.len();
        if (e.degree() as u32) != self.dim() {
            return Rational::zero();
        }
        let bounds = Bounds {
            per_gen: self.base_dims.iter().map(|d| Some(*d as u16)).collect(),
            cap: self.base_dims.iter().sum::<u32>() as u16,
        };
        let mut bounds = bounds;
        bounds.per_gen.resize(self.n_gens(), None);
        let base_mono = {
            let mut v = e.0.clone();
            for x in v.iter_mut().skip(n_base) {
                *x = 0;
            }
            MPoly::monomial(Expo(v), Rational::one())
        };
        let mut prod = base_mono;
        for (l, layer) in self.layers.iter().enumerate() {
            let i = e.0[n_base + l] as usize;
            let s = self.pushforward_u_power(l, i);
            if s.is_zero() {
                return Rational::zero();
            }
            prod = prod.mul(&s, &bounds);
            let _ = layer;
        }
        // extract the coefficient of the top base monomial
        let mut top = vec![0u16; self.n_gens()];
        for (i, d) in self.base_dims.iter().enumerate() {
            top[i] = *d as u16;
        }
        prod.coeff(&Expo(top))
    }
}

/// Kinds of exponential characteristic classes built from Chern roots.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharClassKind {
    ChernTotal,
    ChernCharacter,
    Todd,
}

/// Rational coefficients of the Todd series x / (1 - e^{-x}).
pub fn todd_coefficients(up_to: usize) -> Vec<Rational> {
    // invert (1 - e^{-x})/x = sum_{j>=0} (-1)^j x^j / (j+1)!
    let mut denom = Vec::with_capacity(up_to + 1);
    let mut fact = Rational::one();
    for j in 0..=up_to {
        fact *= Rational::from_integer((j as i64 + 1).into());
        let sign = if j % 2 == 0 { 1 } else { -1 };
        denom.push(Rational::from_integer(sign.into()) / fact.clone());
    }
    invert_power_series(&denom)
}

/// Coefficients of 1/f for a rational power series f with f(0) != 0.
pub fn invert_power_series(f: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); f.len()];
    out[0] = f[0].recip();
    for m in 1..f.len() {
        let mut acc = Rational::zero();
        for j in 1..=m {
            acc += &f[j] * &out[m - j];
        }
        out[m] = -acc / f[0].clone();
    }
    out
}

/// Evaluate a rational power series at a nilpotent cohomology element.
pub fn eval_series_at<C: Coeff>(
    coeffs: &[Rational],
    x: &MPoly<C>,
    bounds: &Bounds,
) -> MPoly<C> {
    let gens = bounds.per_gen.len();
    let mut out = MPoly::constant(gens, C::from_rational(&coeffs[0]));
    let mut pw = MPoly::one(gens);
    for c in coeffs.iter().skip(1) {
        pw = pw.mul(x, bounds);
        if pw.is_zero() {
            break;
        }
        out = out.add(&pw.scale(c));
    }
    out
}

/// Exponential characteristic class from positive and negative Chern roots,
/// truncated above the given degree.
pub fn char_class(
    roots_pos: &[CohElement],
    roots_neg: &[CohElement],
    kind: CharClassKind,
    dim: u16,
    n_gens: usize,
) -> CohElement {
    let bounds = Bounds::free(n_gens, dim);
    let exp_coeffs: Vec<Rational> = {
        let mut fact = Rational::one();
        (0..=dim as usize)
            .map(|j| {
                if j > 0 {
                    fact *= Rational::from_integer((j as i64).into());
                }
                fact.recip()
            })
            .collect()
    };
    match kind {
        CharClassKind::ChernCharacter => {
            let mut out = MPoly::zero();
            for r in roots_pos {
                out = out.add(&eval_series_at(&exp_coeffs, r, &bounds));
            }
            for r in roots_neg {
                out = out.sub(&eval_series_at(&exp_coeffs, r, &bounds));
            }
            out
        }
        CharClassKind::ChernTotal | CharClassKind::Todd => {
            let series: Vec<Rational> = match kind {
                CharClassKind::ChernTotal => {
                    let mut v = vec![Rational::zero(); dim as usize + 1];
                    v[0] = Rational::one();
                    if dim >= 1 {
                        v[1] = Rational::one();
                    }
                    v
                }
                _ => todd_coefficients(dim as usize),
            };
            let inv_series = invert_power_series(&series);
            let mut out = MPoly::one(n_gens);
            for r in roots_pos {
                out = out.mul(&eval_series_at(&series, r, &bounds), &bounds);
            }
            for r in roots_neg {
                out = out.mul(&eval_series_at(&inv_series, r, &bounds), &bounds);
            }
            out
        }
    }
}

impl fmt::Display for CohElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.terms.keys().map(|e| e.0.len()).max().unwrap_or(0);
        let names: Vec<String> = (0..n).map(|i| format!("x{}", i + 1)).collect();
        write!(f, "{}", self.render(&names))
    }
}
