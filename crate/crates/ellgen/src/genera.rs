//! Hirzebruch genus evaluation.
//!
//! A genus with characteristic series Q(x) is evaluated on a manifold as
//! the integral of prod Q(root) over positive roots times prod Q(root)^{-1}
//! over negative roots, and on a bordism vector through the universal
//! polynomial: the degree-n part of Q(x_1)...Q(x_n) rewritten in Chern
//! classes and paired with the vector's numbers.
//!
//! Both routes factor through a genus-independent pairing: integrating the
//! product of root powers while tracking the multiset of x-degrees drawn
//! from each factor. The genus enters only at assembly, as products of the
//! x-coefficients of its factor series. That keeps the expensive series
//! arithmetic proportional to the number of partitions of n rather than to
//! the size of the cohomology ring.
//!
//! chi_y and chi_yz are assembled over an exact coefficient ring: Laurent
//! polynomials in y and z localized at (1 + y), so the results are exact
//! polynomials, never windowed Laurent data.

use crate::bordism::{
    binomial_big, partitions_of, BordismVector, ChernRewriter, Manifold, Partition,
    SymmetricPoly,
};
use crate::cohomology::{todd_coefficients, Coeff, CohElement, MPoly};
use crate::jacobi::phi_one_over_y;
use crate::series::{default_y_prec, rat, rat_int, GSeries, Rational, VarKey};
use num::{One, Signed, Zero};
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenusError {
    #[error("bordism vector is not SU: a c1-containing Chern number is nonzero")]
    NotSU,
}

// ---------------------------------------------------------------------------
// Exact coefficients for chi_y / chi_yz: Q[y, z] localized at (1 + y).
// ---------------------------------------------------------------------------

/// terms / (1 + y)^dpow, with terms a polynomial in y and z. Kept reduced:
/// (1 + y) never divides the numerator while dpow > 0.
#[derive(Debug, Clone, PartialEq)]
pub struct YzRat {
    terms: BTreeMap<(i64, u32), Rational>,
    dpow: u32,
}

impl YzRat {
    pub fn zero() -> Self {
        YzRat {
            terms: BTreeMap::new(),
            dpow: 0,
        }
    }

    pub fn from_terms(terms: &[((i64, u32), Rational)]) -> Self {
        let mut out = Self::zero();
        for ((y, z), c) in terms {
            out.put((*y, *z), c.clone());
        }
        out.reduce();
        out
    }

    pub fn monomial(y: i64, z: u32, c: Rational) -> Self {
        Self::from_terms(&[((y, z), c)])
    }

    /// 1 / (1 + y)^d
    pub fn inv_one_plus_y(d: u32) -> Self {
        let mut out = Self::from_terms(&[((0, 0), Rational::one())]);
        out.dpow = d;
        out
    }

    fn put(&mut self, key: (i64, u32), c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(key).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    fn reduce(&mut self) {
        if self.terms.is_empty() {
            self.dpow = 0;
            return;
        }
        while self.dpow > 0 {
            match divide_one_plus_y(&self.terms) {
                Some(q) => {
                    self.terms = q;
                    self.dpow -= 1;
                }
                None => break,
            }
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.dpow == 0
    }

    pub fn polynomial_terms(&self) -> Option<&BTreeMap<(i64, u32), Rational>> {
        if self.dpow == 0 {
            Some(&self.terms)
        } else {
            None
        }
    }

    /// Coefficient of y^p in the power-series expansion in y (z must be 0
    /// in all terms with nonzero coefficient unless asked per z-slice).
    pub fn y_expansion_coefficient(&self, p: i64) -> Rational {
        let mut acc = Rational::zero();
        for ((e, z), c) in &self.terms {
            assert_eq!(*z, 0, "y-expansion requested on a z-dependent value");
            let j = p - e;
            if j < 0 {
                continue;
            }
            // [y^j] (1+y)^{-d} = (-1)^j C(d+j-1, j)
            let b = if self.dpow == 0 {
                if j == 0 {
                    num::BigInt::one()
                } else {
                    num::BigInt::zero()
                }
            } else {
                let sign = if j % 2 == 0 { 1 } else { -1 };
                binomial_big(self.dpow as i64 + j - 1, j) * num::BigInt::from(sign)
            };
            acc += c * Rational::from_integer(b);
        }
        acc
    }
}

/// Divide each z-slice by (1 + y); None if not exactly divisible.
fn divide_one_plus_y(
    terms: &BTreeMap<(i64, u32), Rational>,
) -> Option<BTreeMap<(i64, u32), Rational>> {
    let mut out = BTreeMap::new();
    let zs: std::collections::BTreeSet<u32> = terms.keys().map(|(_, z)| *z).collect();
    for z in zs {
        let slice: BTreeMap<i64, &Rational> = terms
            .iter()
            .filter(|((_, zz), _)| *zz == z)
            .map(|((y, _), c)| (*y, c))
            .collect();
        let lo = *slice.keys().next().unwrap();
        let hi = *slice.keys().next_back().unwrap();
        let mut carry = Rational::zero();
        for e in lo..=hi {
            let a = slice.get(&e).cloned().cloned().unwrap_or_else(Rational::zero);
            let q = a - carry;
            if e == hi {
                if !q.is_zero() {
                    return None;
                }
            } else if !q.is_zero() {
                out.insert((e, z), q.clone());
            }
            carry = q;
        }
        if !carry.is_zero() {
            return None;
        }
    }
    Some(out)
}

impl Coeff for YzRat {
    fn ring_zero() -> Self {
        Self::zero()
    }
    fn ring_one() -> Self {
        Self::from_terms(&[((0, 0), Rational::one())])
    }
    fn is_ring_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add_ref(&self, other: &Self) -> Self {
        let d = self.dpow.max(other.dpow);
        let mut out = YzRat {
            terms: BTreeMap::new(),
            dpow: d,
        };
        for (t, up) in [(self, d - self.dpow), (other, d - other.dpow)] {
            let mut lifted = t.terms.clone();
            for _ in 0..up {
                lifted = mul_one_plus_y(&lifted);
            }
            for (k, c) in lifted {
                out.put(k, c);
            }
        }
        out.reduce();
        out
    }
    fn mul_ref(&self, other: &Self) -> Self {
        let mut out = YzRat {
            terms: BTreeMap::new(),
            dpow: self.dpow + other.dpow,
        };
        for ((y1, z1), c1) in &self.terms {
            for ((y2, z2), c2) in &other.terms {
                out.put((y1 + y2, z1 + z2), c1 * c2);
            }
        }
        out.reduce();
        out
    }
    fn neg_ref(&self) -> Self {
        YzRat {
            terms: self.terms.iter().map(|(k, c)| (*k, -c.clone())).collect(),
            dpow: self.dpow,
        }
    }
    fn from_rational(r: &Rational) -> Self {
        Self::from_terms(&[((0, 0), r.clone())])
    }
    fn scale_rat(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        YzRat {
            terms: self.terms.iter().map(|(k, c)| (*k, c * r)).collect(),
            dpow: self.dpow,
        }
    }
}

fn mul_one_plus_y(terms: &BTreeMap<(i64, u32), Rational>) -> BTreeMap<(i64, u32), Rational> {
    let mut out: BTreeMap<(i64, u32), Rational> = BTreeMap::new();
    for ((y, z), c) in terms {
        for dy in [0, 1] {
            let e = out.entry((*y + dy, *z)).or_insert_with(Rational::zero);
            *e += c;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

// ---------------------------------------------------------------------------
// The genus-independent pairing of a manifold's roots.
// ---------------------------------------------------------------------------

/// Multiset of x-degrees (>= 1) drawn from positive and negative factors.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sig {
    pub pos: Vec<u8>,
    pub neg: Vec<u8>,
}

impl Sig {
    fn empty() -> Self {
        Sig {
            pos: Vec::new(),
            neg: Vec::new(),
        }
    }

    fn with(&self, d: u8, positive: bool) -> Self {
        let mut out = self.clone();
        let v = if positive { &mut out.pos } else { &mut out.neg };
        let idx = v.partition_point(|x| *x <= d);
        v.insert(idx, d);
        out
    }
}

/// Formal sums of signatures with rational coefficients; the coefficient
/// ring the pairing is computed in.
#[derive(Debug, Clone, PartialEq)]
struct SymTally(BTreeMap<Sig, Rational>);

impl Coeff for SymTally {
    fn ring_zero() -> Self {
        SymTally(BTreeMap::new())
    }
    fn ring_one() -> Self {
        let mut m = BTreeMap::new();
        m.insert(Sig::empty(), Rational::one());
        SymTally(m)
    }
    fn is_ring_zero(&self) -> bool {
        self.0.is_empty()
    }
    fn add_ref(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (s, c) in &other.0 {
            let e = out.0.entry(s.clone()).or_insert_with(Rational::zero);
            *e += c;
            if e.is_zero() {
                out.0.remove(s);
            }
        }
        out
    }
    fn mul_ref(&self, other: &Self) -> Self {
        let mut out = SymTally(BTreeMap::new());
        for (s1, c1) in &self.0 {
            for (s2, c2) in &other.0 {
                let mut pos = s1.pos.clone();
                pos.extend_from_slice(&s2.pos);
                pos.sort_unstable();
                let mut neg = s1.neg.clone();
                neg.extend_from_slice(&s2.neg);
                neg.sort_unstable();
                let key = Sig { pos, neg };
                let e = out.0.entry(key).or_insert_with(Rational::zero);
                *e += c1 * c2;
            }
        }
        out.0.retain(|_, c| !c.is_zero());
        out
    }
    fn neg_ref(&self) -> Self {
        SymTally(self.0.iter().map(|(s, c)| (s.clone(), -c.clone())).collect())
    }
    fn from_rational(r: &Rational) -> Self {
        if r.is_zero() {
            return Self::ring_zero();
        }
        let mut m = BTreeMap::new();
        m.insert(Sig::empty(), r.clone());
        SymTally(m)
    }
    fn scale_rat(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::ring_zero();
        }
        SymTally(self.0.iter().map(|(s, c)| (s.clone(), c * r)).collect())
    }
}

/// The integrals of root-power products, indexed by the degree multiset,
/// together with the total factor counts.
pub struct Pairing {
    pub j_pos: usize,
    pub j_neg: usize,
    pub has_nontrivial_neg: bool,
    pub sums: BTreeMap<Sig, Rational>,
}

/// Integrate prod over roots of (sum_d [d] r^d), keeping the multiset of
/// degrees formal. Genus-independent; one pass per manifold serves every
/// exponential genus.
pub fn root_pairing(m: &Manifold) -> Pairing {
    let bounds = m.space.bounds();
    let gens = m.space.n_gens();
    let cap = m.n as usize;
    let mut state: MPoly<SymTally> = MPoly::one(gens);
    let mut has_nontrivial_neg = false;
    for (roots, positive) in [(&m.tangent_pos, true), (&m.tangent_neg, false)] {
        for r in roots.iter() {
            if r.is_zero() {
                continue;
            }
            if !positive {
                has_nontrivial_neg = true;
            }
            let mut factor: MPoly<SymTally> = MPoly::one(gens);
            let mut pw: CohElement = MPoly::one(gens);
            for d in 1..=cap {
                pw = pw.mul(r, &bounds);
                if pw.is_zero() {
                    break;
                }
                let sig = Sig::empty().with(d as u8, positive);
                for (e, c) in pw.terms() {
                    let mut t = SymTally::ring_zero();
                    t.0.insert(sig.clone(), c.clone());
                    factor.add_term(e.clone(), t);
                }
            }
            state = state.mul(&factor, &bounds);
        }
    }
    let total: SymTally = m.space.integrate(&state);
    Pairing {
        j_pos: m.tangent_pos.len(),
        j_neg: m.tangent_neg.len(),
        has_nontrivial_neg,
        sums: total.0,
    }
}

// ---------------------------------------------------------------------------
// Assembly: pairing + factor-series coefficients -> genus value.
// ---------------------------------------------------------------------------

/// Power-series inverse in x over any coefficient ring, given the inverse of
/// the constant term.
pub fn xseries_inverse<C: Coeff>(f: &[C], c0_inv: C) -> Vec<C> {
    let mut out = vec![C::ring_zero(); f.len()];
    out[0] = c0_inv.clone();
    for m in 1..f.len() {
        let mut acc = C::ring_zero();
        for j in 1..=m {
            acc = acc.add_ref(&f[j].mul_ref(&out[m - j]));
        }
        out[m] = acc.mul_ref(&c0_inv).neg_ref();
    }
    out
}

fn xs_mul<C: Coeff>(a: &[C], b: &[C], n: usize) -> Vec<C> {
    let mut out = vec![C::ring_zero(); n + 1];
    for (i, ai) in a.iter().enumerate().take(n + 1) {
        if ai.is_ring_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(n + 1 - i) {
            out[i + j] = out[i + j].add_ref(&ai.mul_ref(bj));
        }
    }
    out
}

/// Evaluate on a manifold pairing. Requires the factor series to satisfy
/// (negative constant term) = (positive constant term)^{-1}; the net
/// constant-power exponent is then n + len(neg-part) - len(pos-part) >= 0,
/// so no inverse constants are ever multiplied in.
fn assemble_manifold<C: Coeff>(
    pairing: &Pairing,
    n: u32,
    pos: &[C],
    neg: Option<&[C]>,
    base0: &C,
) -> C {
    let mut base_pows: Vec<C> = vec![C::ring_one()];
    let mut prod_cache: HashMap<(Vec<u8>, bool), C> = HashMap::new();
    let mut value = C::ring_zero();
    for (sig, coeff) in &pairing.sums {
        if coeff.is_zero() {
            continue;
        }
        // pos-degrees sum + neg-degrees sum = n for any nonzero pairing, so
        // len(pos) <= n and the exponent never underflows
        assert!(sig.pos.len() <= n as usize + sig.neg.len());
        let e = n as usize + sig.neg.len() - sig.pos.len();
        while base_pows.len() <= e {
            let next = base_pows.last().unwrap().mul_ref(base0);
            base_pows.push(next);
        }
        let mut term = base_pows[e].clone();
        if !sig.pos.is_empty() {
            let p = multiset_product(&sig.pos, true, pos, &mut prod_cache);
            term = term.mul_ref(&p);
        }
        if !sig.neg.is_empty() {
            let neg_coeffs = neg.expect("negative factor coefficients required");
            let p = multiset_product(&sig.neg, false, neg_coeffs, &mut prod_cache);
            term = term.mul_ref(&p);
        }
        value = value.add_ref(&term.scale_rat(coeff));
    }
    value
}

fn multiset_product<C: Coeff>(
    ds: &[u8],
    positive: bool,
    coeffs: &[C],
    cache: &mut HashMap<(Vec<u8>, bool), C>,
) -> C {
    if ds.is_empty() {
        return C::ring_one();
    }
    let key = (ds.to_vec(), positive);
    if let Some(v) = cache.get(&key) {
        return v.clone();
    }
    let rest = multiset_product(&ds[..ds.len() - 1], positive, coeffs, cache);
    let v = rest.mul_ref(&coeffs[ds[ds.len() - 1] as usize]);
    cache.insert(key, v.clone());
    v
}

// ---------------------------------------------------------------------------
// The universal polynomial route for vectors.
// ---------------------------------------------------------------------------

type ChernTable = Vec<(Partition, BTreeMap<Partition, Rational>)>;

static CHERN_TABLES: OnceLock<Mutex<HashMap<u32, Arc<ChernTable>>>> = OnceLock::new();

/// For each partition lambda of n, the rewrite of the monomial symmetric
/// function m_lambda (in n roots) as a polynomial in the Chern classes.
pub fn monomial_chern_table(n: u32) -> Arc<ChernTable> {
    let tables = CHERN_TABLES.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = tables.lock().unwrap();
    if let Some(t) = guard.get(&n) {
        return t.clone();
    }
    let mut rewriter = ChernRewriter::new(n as usize);
    let table: ChernTable = partitions_of(n)
        .into_iter()
        .map(|lambda| {
            let m = SymmetricPoly::monomial_basis(lambda.clone(), n as usize);
            let c = rewriter.to_chern(&m);
            (lambda, c)
        })
        .collect();
    let arc = Arc::new(table);
    guard.insert(n, arc.clone());
    arc
}

/// Degree-n part of Q(x_1)...Q(x_n) paired with the vector's numbers:
/// sum over partitions of coeffs[0]^{n - len} * prod coeffs[part] * r_lambda.
pub fn universal_value<C: Coeff>(b: &BordismVector, coeffs: &[C]) -> C {
    let n = b.dim();
    assert!(coeffs.len() > n as usize, "factor series truncated below n");
    let table = monomial_chern_table(n);
    let mut const_pows: Vec<C> = vec![C::ring_one()];
    let mut cache: HashMap<(Vec<u8>, bool), C> = HashMap::new();
    let mut value = C::ring_zero();
    for (lambda, chern_poly) in table.iter() {
        let r = b.pair(chern_poly);
        if r.is_zero() {
            continue;
        }
        let l = lambda.len();
        while const_pows.len() <= (n as usize - l) {
            let next = const_pows.last().unwrap().mul_ref(&coeffs[0]);
            const_pows.push(next);
        }
        let ds: Vec<u8> = lambda.0.iter().rev().map(|p| *p as u8).collect();
        let p = multiset_product(&ds, true, coeffs, &mut cache);
        value = value.add_ref(&const_pows[n as usize - l].mul_ref(&p).scale_rat(&r));
    }
    value
}

// ---------------------------------------------------------------------------
// Factor series.
// ---------------------------------------------------------------------------

/// A genus given by its characteristic power series Q(x); coefficients are
/// series in the value ring, with Q(0) = 1.
#[derive(Debug, Clone)]
pub struct GenusSpec {
    pub name: String,
    pub q_coeffs: Vec<GSeries>,
}

impl GenusSpec {
    pub fn new(name: &str, q_coeffs: Vec<GSeries>) -> Self {
        assert!(
            q_coeffs
                .first()
                .map(|c| c.agrees_with(&GSeries::one()))
                .unwrap_or(false),
            "Q(0) must be 1"
        );
        GenusSpec {
            name: name.to_string(),
            q_coeffs,
        }
    }

    /// Q(x) from rational coefficients.
    pub fn from_rational_series(name: &str, coeffs: &[Rational]) -> Self {
        Self::new(
            name,
            coeffs.iter().map(|c| GSeries::constant(c.clone())).collect(),
        )
    }

    /// The Todd genus: Q(x) = x / (1 - e^{-x}).
    pub fn todd(n: usize) -> Self {
        Self::from_rational_series("todd", &todd_coefficients(n))
    }

    /// The L-genus: Q(x) = x (1 + e^{-2x}) / (1 - e^{-2x}).
    pub fn l_genus(n: usize) -> Self {
        // numerator and denominator of x(1+e^{-2x}) / (1-e^{-2x}), both with
        // valuation 1 in x; shift out one power of x and divide.
        let len = n + 2;
        let mut num = vec![Rational::zero(); len];
        let mut den = vec![Rational::zero(); len];
        let mut fact = Rational::one();
        let mut pw = Rational::one();
        num[0] = rat_int(2);
        for j in 1..len {
            fact *= rat_int(j as i64);
            pw *= rat_int(-2);
            // x * (1 + e^{-2x}) has x^{j+1}-coefficient (-2)^j / j!
            num[j] = &pw / &fact;
            // (1 - e^{-2x}) has x^j-coefficient -(-2)^j / j!; valuation 1
            if j < len {
                den[j - 1] = -(&pw / &fact);
            }
        }
        let mut inv_den = crate::cohomology::invert_power_series(&den);
        inv_den.truncate(n + 1);
        let mut out = vec![Rational::zero(); n + 1];
        for (i, a) in num.iter().enumerate().take(n + 1) {
            for (j, b) in inv_den.iter().enumerate().take(n + 1 - i) {
                out[i + j] += a * b;
            }
        }
        Self::from_rational_series("signature", &out)
    }
}

/// Factor series of the elliptic genus with the prefactor pulled off:
/// Q(x) = Phi(q,1/y)^{-1} R(x), where
/// R(x) = x/(1-e^{-x}) e^{kx} prod_m (1-y q^{m-1} e^{-x})(1-y^{-1} q^m e^x)
///        / ((1-q^m e^x)(1-q^m e^{-x})).
/// All coefficients are exact Laurent polynomials in y per (q, k)-term;
/// R(0) = Phi(q, 1/y).
fn elliptic_r_series(n: usize, q_prec: i64) -> (Vec<GSeries>, GSeries) {
    let mut r: Vec<GSeries> = vec![GSeries::zero_to(q_prec); n + 1];
    // start with x/(1-e^{-x}) * e^{kx}
    let td = todd_coefficients(n);
    for (j, c) in td.iter().enumerate() {
        r[j] = GSeries::constant(c.clone());
        r[j].set_q_prec(q_prec);
    }
    let mut exp_k: Vec<GSeries> = Vec::with_capacity(n + 1);
    let mut fact = Rational::one();
    for j in 0..=n {
        if j > 0 {
            fact *= rat_int(j as i64);
        }
        let mut s = GSeries::zero_to(q_prec);
        s.add_assign_term(
            VarKey {
                q: 0,
                k: j as u32,
                z: 0,
                t: 0,
            },
            0,
            fact.recip(),
        );
        exp_k.push(s);
    }
    r = xs_mul(&r, &exp_k, n);
    // Lambda factors: (1 - y q^{m-1} e^{-x}) for m-1 < q_prec,
    //                 (1 - y^{-1} q^m e^x) for m < q_prec
    for e in 0..q_prec {
        r = xs_mul(&r, &lambda_factor(n, q_prec, e as u32, 1, -1), n);
    }
    for m in 1..q_prec {
        r = xs_mul(&r, &lambda_factor(n, q_prec, m as u32, -1, 1), n);
    }
    // S factors: (1 - q^m e^{+-x})^{-1} = sum_i q^{im} e^{+-ix}
    for m in 1..q_prec {
        for sign in [1i64, -1] {
            r = xs_mul(&r, &s_factor(n, q_prec, m as u32, sign), n);
        }
    }
    let f = r[0].clone();
    (r, f)
}

/// 1 - y^{y_sign} q^e e^{x_sign x} as an x-series.
fn lambda_factor(n: usize, q_prec: i64, e: u32, y_sign: i64, x_sign: i64) -> Vec<GSeries> {
    let mut out = Vec::with_capacity(n + 1);
    let mut fact = Rational::one();
    let mut pw = Rational::one();
    for j in 0..=n {
        let mut s = GSeries::zero_to(q_prec);
        if j == 0 {
            s.add_assign_term(VarKey::default(), 0, rat_int(1));
        } else {
            fact *= rat_int(j as i64);
            pw *= rat_int(x_sign);
        }
        s.add_assign_term(VarKey::q(e), y_sign, -(&pw / &fact));
        out.push(s);
    }
    out
}

/// (1 - q^m e^{sign x})^{-1} as an x-series: coefficient of x^j is
/// sum_i q^{im} (sign i)^j / j!.
fn s_factor(n: usize, q_prec: i64, m: u32, sign: i64) -> Vec<GSeries> {
    let mut out = Vec::with_capacity(n + 1);
    let mut fact = Rational::one();
    for j in 0..=n as i64 {
        if j > 0 {
            fact *= rat_int(j);
        }
        let mut s = GSeries::zero_to(q_prec);
        let mut i = 0i64;
        while (i * m as i64) < q_prec {
            let base = sign * i;
            let c = rat_int(num::pow::pow(base, j as usize)) / fact.clone();
            if !(i == 0 && j > 0) {
                s.add_assign_term(VarKey::q((i * m as i64) as u32), 0, c);
            }
            i += 1;
        }
        out.push(s);
    }
    out
}

type EllipticFactors = (Arc<Vec<GSeries>>, GSeries);

static ELLIPTIC_FACTORS: OnceLock<Mutex<HashMap<(usize, i64), EllipticFactors>>> =
    OnceLock::new();

fn elliptic_factors(n: usize, q_prec: i64) -> EllipticFactors {
    let cache = ELLIPTIC_FACTORS.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    if let Some(v) = guard.get(&(n, q_prec)) {
        return v.clone();
    }
    let (r, f) = elliptic_r_series(n, q_prec);
    let v = (Arc::new(r), f);
    guard.insert((n, q_prec), v.clone());
    v
}

/// Factor series of chi_y / chi_yz: T(x) = x/(1-e^{-x}) e^{zx} (1 + y e^{-x})
/// (z omitted for chi_y). T(0) = 1 + y.
fn chi_factor_series(n: usize, with_z: bool) -> Vec<YzRat> {
    let td = todd_coefficients(n);
    let mut t: Vec<YzRat> = td.iter().map(YzRat::from_rational).collect();
    // (1 + y e^{-x}): x^j coefficient is y (-1)^j / j! for j >= 1, 1 + y at 0
    let mut lam = Vec::with_capacity(n + 1);
    let mut fact = Rational::one();
    for j in 0..=n {
        if j == 0 {
            lam.push(YzRat::from_terms(&[
                ((0, 0), Rational::one()),
                ((1, 0), Rational::one()),
            ]));
        } else {
            fact *= rat_int(j as i64);
            let sign = if j % 2 == 0 { 1 } else { -1 };
            lam.push(YzRat::monomial(1, 0, rat_int(sign) / fact.clone()));
        }
    }
    t = xs_mul(&t, &lam, n);
    if with_z {
        let mut ez = Vec::with_capacity(n + 1);
        let mut fact = Rational::one();
        for j in 0..=n {
            if j > 0 {
                fact *= rat_int(j as i64);
            }
            ez.push(YzRat::monomial(0, j as u32, fact.recip()));
        }
        t = xs_mul(&t, &ez, n);
    }
    t
}

// ---------------------------------------------------------------------------
// Public genus values.
// ---------------------------------------------------------------------------

/// A chi_y / chi_yz value: t^n times an exact polynomial in y (and z).
#[derive(Debug, Clone, PartialEq)]
pub struct ChiValue {
    pub n: u32,
    terms: BTreeMap<(i64, u32), Rational>,
}

impl ChiValue {
    fn from_yz(n: u32, v: &YzRat) -> Self {
        let terms = v
            .polynomial_terms()
            .expect("chi value must clear its (1+y) denominators")
            .clone();
        for (y, _) in terms.keys() {
            assert!(
                *y >= 0 && *y <= n as i64,
                "chi_y degree must lie in 0..=n"
            );
        }
        ChiValue { n, terms }
    }

    pub fn zero(n: u32) -> Self {
        ChiValue {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|c| c.is_zero())
    }

    pub fn coeff(&self, y: i64, z: u32) -> Rational {
        self.terms.get(&(y, z)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, u32), &Rational)> {
        self.terms.iter().filter(|(_, c)| !c.is_zero())
    }

    pub fn z_zero_part(&self) -> ChiValue {
        ChiValue {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|((_, z), _)| *z == 0)
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
        }
    }

    pub fn involves_z(&self) -> bool {
        self.terms().any(|((_, z), _)| *z > 0)
    }

    /// Substitute a rational for y (z must be absent).
    pub fn eval_y(&self, y: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for ((e, z), c) in self.terms() {
            assert_eq!(*z, 0, "eval_y on a z-dependent value");
            acc += c * num::pow::pow(y.clone(), *e as usize);
        }
        acc
    }

    /// Second derivative in y, evaluated at y = -1 (z must be absent).
    pub fn second_derivative_at_minus_one(&self) -> Rational {
        let mut acc = Rational::zero();
        for ((e, z), c) in self.terms() {
            assert_eq!(*z, 0);
            if *e >= 2 {
                let sign = if e % 2 == 0 { 1 } else { -1 };
                acc += c * rat_int(sign * e * (e - 1));
            }
        }
        acc
    }

    /// As a GSeries carrying the t^n grading.
    pub fn to_gseries(&self) -> GSeries {
        let mut s = GSeries::zero();
        for ((y, z), c) in self.terms() {
            s.add_assign_term(
                VarKey {
                    q: 0,
                    k: 0,
                    z: *z,
                    t: self.n,
                },
                *y,
                c.clone(),
            );
        }
        s
    }

    /// Compact polynomial rendering, e.g. "t^2*(2 - 20y + 2y^2)".
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut body = String::new();
        let mut first = true;
        for ((y, z), c) in self.terms() {
            let mag = c.abs();
            let sign = if c < &Rational::zero() { "-" } else { "+" };
            if first {
                if sign == "-" {
                    body.push('-');
                }
                first = false;
            } else {
                body.push_str(&format!(" {} ", sign));
            }
            let show_coeff = !mag.is_one() || (*y == 0 && *z == 0);
            if show_coeff {
                if mag.denom().is_one() {
                    body.push_str(&mag.numer().to_string());
                } else {
                    body.push_str(&format!("{}/{}", mag.numer(), mag.denom()));
                }
            }
            if *y > 0 {
                body.push('y');
                if *y > 1 {
                    body.push_str(&format!("^{}", y));
                }
            }
            if *z > 0 {
                body.push('z');
                if *z > 1 {
                    body.push_str(&format!("^{}", z));
                }
            }
        }
        if self.n == 0 {
            body
        } else if self.n == 1 {
            format!("t*({})", body)
        } else {
            format!("t^{}*({})", self.n, body)
        }
    }
}

/// Evaluate a genus on a manifold by cohomological integration.
pub fn genus_eval(m: &Manifold, g: &GenusSpec) -> GSeries {
    assert!(
        g.q_coeffs.len() > m.n as usize,
        "Q series truncated below the manifold dimension"
    );
    let pairing = root_pairing(m);
    let neg = if pairing.has_nontrivial_neg {
        Some(xseries_inverse(&g.q_coeffs, GSeries::one()))
    } else {
        None
    };
    assemble_manifold(&pairing, m.n, &g.q_coeffs, neg.as_deref(), &GSeries::one())
}

/// Evaluate a genus on a bordism vector through the universal polynomial.
pub fn genus_eval_vector(b: &BordismVector, g: &GenusSpec) -> GSeries {
    universal_value(b, &g.q_coeffs)
}

/// The unscaled elliptic genus alpha = Phi(q, 1/y)^n phi: exact Laurent
/// polynomial coefficients in y for every (q, k) term.
pub fn unscaled_genus_manifold(m: &Manifold, q_prec: i64) -> GSeries {
    let (r, f) = elliptic_factors(m.n as usize, q_prec);
    let pairing = root_pairing(m);
    let neg = if pairing.has_nontrivial_neg {
        let c = phi_inverse(q_prec, m.n, None);
        Some(xseries_inverse(&r, c))
    } else {
        None
    };
    let alpha = assemble_manifold(&pairing, m.n, &r, neg.as_deref(), &f);
    assert_alpha_polynomial(&alpha, !pairing.has_nontrivial_neg);
    alpha
}

/// alpha on a bordism vector, through the universal route. The constant
/// coefficient of the factor series is R(0) = Phi(q, 1/y), so the universal
/// sum is exactly Phi^{n - len} weighted by the R-products.
pub fn unscaled_genus_vector(b: &BordismVector, q_prec: i64) -> GSeries {
    let (r, _f) = elliptic_factors(b.dim() as usize, q_prec);
    let alpha = universal_value(b, &r);
    assert_alpha_polynomial(&alpha, true);
    alpha
}

fn assert_alpha_polynomial(alpha: &GSeries, expect_exact: bool) {
    if expect_exact {
        for (key, c) in alpha.terms() {
            if key.k == 0 {
                assert!(
                    c.is_exact(),
                    "q^{} coefficient of alpha at k = 0 is not a finite Laurent polynomial",
                    key.q
                );
            }
        }
    }
}

fn phi_inverse(q_prec: i64, n: u32, y_len: Option<i64>) -> GSeries {
    let len = y_len.unwrap_or_else(|| 2 * default_y_prec(n as i64, q_prec));
    phi_one_over_y(q_prec)
        .inv(len)
        .expect("Phi(q, 1/y) is a unit")
}

/// The complex elliptic genus of a manifold, as a series in q, y, k.
/// Both the cohomological and the universal route are computed and compared.
pub fn elliptic_genus_manifold(m: &Manifold, q_prec: i64) -> GSeries {
    let alpha = unscaled_genus_manifold(m, q_prec);
    let alpha_vec = unscaled_genus_vector(&m.chern_numbers(), q_prec);
    assert!(
        alpha.agrees_with(&alpha_vec),
        "cohomological and universal elliptic genus routes disagree"
    );
    phi_to_genus(&alpha, m.n, q_prec)
}

/// The complex elliptic genus of a bordism vector (universal route only).
pub fn elliptic_genus_vector(b: &BordismVector, q_prec: i64) -> GSeries {
    let alpha = unscaled_genus_vector(b, q_prec);
    phi_to_genus(&alpha, b.dim(), q_prec)
}

fn phi_to_genus(alpha: &GSeries, n: u32, q_prec: i64) -> GSeries {
    let c = phi_inverse(q_prec, n, None);
    let mut out = alpha.clone();
    for _ in 0..n {
        out = out.mul(&c);
    }
    out
}

/// True iff the elliptic genus (including all k-terms) vanishes identically
/// to the given q-precision. Works on the unscaled form, so only exact
/// narrow series are involved.
pub fn elliptic_genus_vanishes(m: &Manifold, q_prec: i64) -> bool {
    unscaled_genus_manifold(m, q_prec).is_zero()
}

/// chi_y of a manifold: t^n chi(X, Lambda_y T*X) via the HRR integrand
/// td(T) prod (1 + y e^{-root}), computed exactly in y.
pub fn chi_y_manifold(m: &Manifold) -> ChiValue {
    chi_manifold(m, false)
}

/// chi_yz of a manifold: the canonical twist adds e^{z c1} to the integrand.
pub fn chi_yz_manifold(m: &Manifold) -> ChiValue {
    chi_manifold(m, true)
}

fn chi_manifold(m: &Manifold, with_z: bool) -> ChiValue {
    let t = chi_factor_series(m.n as usize, with_z);
    let pairing = root_pairing(m);
    let neg = if pairing.has_nontrivial_neg {
        Some(xseries_inverse(&t, YzRat::inv_one_plus_y(1)))
    } else {
        None
    };
    let base0 = t[0].clone();
    let v = assemble_manifold(&pairing, m.n, &t, neg.as_deref(), &base0);
    ChiValue::from_yz(m.n, &v)
}

/// chi_y of a bordism vector.
pub fn chi_y_vector(b: &BordismVector) -> ChiValue {
    let t = chi_factor_series(b.dim() as usize, false);
    ChiValue::from_yz(b.dim(), &universal_value(b, &t))
}

/// chi_yz of a bordism vector.
pub fn chi_yz_vector(b: &BordismVector) -> ChiValue {
    let t = chi_factor_series(b.dim() as usize, true);
    ChiValue::from_yz(b.dim(), &universal_value(b, &t))
}

/// The degree-(n-k) component of td(T_X) ch(Omega_X^p).
pub fn chi_p_class(m: &Manifold, p: u32, k: u32) -> CohElement {
    assert!(p <= m.n && k <= m.n);
    let bounds = m.space.bounds();
    let gens = m.space.n_gens();
    let t = chi_factor_series(m.n as usize, false);
    let tinv = xseries_inverse(&t, YzRat::inv_one_plus_y(1));
    let mut total: MPoly<YzRat> = MPoly::one(gens);
    for (roots, coeffs) in [(&m.tangent_pos, &t), (&m.tangent_neg, &tinv)] {
        for r in roots.iter() {
            let mut factor: MPoly<YzRat> = MPoly::constant(gens, coeffs[0].clone());
            let mut pw: CohElement = MPoly::one(gens);
            for coeff in coeffs.iter().take(m.n as usize + 1).skip(1) {
                pw = pw.mul(r, &bounds);
                if pw.is_zero() {
                    break;
                }
                for (e, c) in pw.terms() {
                    factor.add_term(e.clone(), coeff.scale_rat(c));
                }
            }
            total = total.mul(&factor, &bounds);
        }
    }
    let mut out: CohElement = MPoly::zero();
    for (e, c) in total.terms() {
        let coeff = c.y_expansion_coefficient(p as i64);
        out.add_term(e.clone(), coeff);
    }
    out.graded_part((m.n - k) as u16)
}

/// Classical specializations of a chi_y value: Todd (y=0), Euler (y=-1),
/// signature (y=1).
pub fn classical_specializations(chi: &ChiValue) -> (Rational, Rational, Rational) {
    assert!(!chi.involves_z(), "specializations expect a chi_y value");
    (
        chi.eval_y(&Rational::zero()),
        chi.eval_y(&rat_int(-1)),
        chi.eval_y(&Rational::one()),
    )
}

/// Residual of the Libgober-Wood relation chi''(-1) = n(3n-5)/12 chi(-1)
/// on the chi_y genus of an SU vector.
pub fn libgober_wood_check(b: &BordismVector) -> Result<Rational, GenusError> {
    if !b.is_su() {
        return Err(GenusError::NotSU);
    }
    let chi = chi_y_vector(b);
    let n = b.dim() as i64;
    let residual = chi.second_derivative_at_minus_one()
        - rat(n * (3 * n - 5), 12) * chi.eval_y(&rat_int(-1));
    Ok(residual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bordism::{k3_vector, s6_vector, x4_vector};
    use crate::jacobi::{jacobi_series, JacobiName, YWindow};

    fn cp(n: u32) -> Manifold {
        Manifold::projective_space(n)
    }

    #[test]
    fn todd_genus_of_projective_spaces() {
        // oracle: chi(CP^n, O) = 1 (arithmetic genus)
        for n in 0..=5u32 {
            let g = GenusSpec::todd(n as usize);
            let v = genus_eval(&cp(n), &g);
            assert!(v.agrees_with(&GSeries::one()), "Todd(CP^{})", n);
        }
    }

    #[test]
    fn degree_one_extraction_genus() {
        // Q = 1 + x evaluates c1
        let g = GenusSpec::from_rational_series("c1", &[rat_int(1), rat_int(1)]);
        let v = genus_eval(&cp(1), &g);
        assert!(v.agrees_with(&GSeries::constant(rat_int(2))));
    }

    #[test]
    fn l_genus_is_signature() {
        // oracle: signature of CP^2 is 1
        let g = GenusSpec::l_genus(2);
        let v = genus_eval(&cp(2), &g);
        assert!(v.agrees_with(&GSeries::one()));
        // and of CP^1 x CP^1 is 0
        let m = Manifold::product(&cp(1), &cp(1));
        let v = genus_eval(&m, &GenusSpec::l_genus(2));
        assert!(v.is_zero());
    }

    #[test]
    fn vector_route_matches_manifold_route() {
        let g = GenusSpec::todd(4);
        for m in [
            cp(2),
            cp(4),
            Manifold::product(&cp(1), &cp(3)),
            Manifold::product(&cp(2), &cp(2)),
        ] {
            let direct = genus_eval(&m, &g);
            let via_vector = genus_eval_vector(&m.chern_numbers(), &g);
            assert!(direct.agrees_with(&via_vector));
        }
    }

    #[test]
    fn todd_on_k3_vector() {
        // oracle: (c1^2 + c2)/12 = 24/12 = 2
        let v = genus_eval_vector(&k3_vector(), &GenusSpec::todd(2));
        assert!(v.agrees_with(&GSeries::constant(rat_int(2))));
    }

    #[test]
    fn euler_genus_on_s6() {
        // the c_n-extracting genus: chi_y at y = -1; c3(S6) = 2 by construction
        let chi = chi_y_vector(&s6_vector());
        assert_eq!(chi.eval_y(&rat_int(-1)), rat_int(2));
        // any genus on the zero vector is 0
        let z = crate::bordism::BordismVector::zero(3);
        assert!(genus_eval_vector(&z, &GenusSpec::todd(3)).is_zero());
    }

    #[test]
    fn chi_y_of_cp1() {
        // oracle: chi(O) = 1, chi(Omega^1) = -1
        let chi = chi_y_manifold(&cp(1));
        assert_eq!(chi.coeff(0, 0), rat_int(1));
        assert_eq!(chi.coeff(1, 0), rat_int(-1));
        assert_eq!(chi.render(), "t*(1 - y)");
    }

    #[test]
    fn chi_y_of_generator_vectors() {
        let k3 = chi_y_vector(&k3_vector());
        assert_eq!(k3.render(), "t^2*(2 - 20y + 2y^2)");
        let s6 = chi_y_vector(&s6_vector());
        assert_eq!(s6.render(), "t^3*(-y + y^2)");
        let x4 = chi_y_vector(&x4_vector());
        assert_eq!(x4.render(), "t^4*(-y + 4y^2 - y^3)");
    }

    #[test]
    fn chi_yz_of_cp1_follows_hrr() {
        // oracle: chi(O(2z)) + y chi(O(2z-2)) = (2z+1) + y(2z-1)
        let chi = chi_yz_manifold(&cp(1));
        assert_eq!(chi.coeff(0, 0), rat_int(1));
        assert_eq!(chi.coeff(0, 1), rat_int(2));
        assert_eq!(chi.coeff(1, 0), rat_int(-1));
        assert_eq!(chi.coeff(1, 1), rat_int(2));
        // z = 0 slice is chi_y
        assert_eq!(chi.z_zero_part(), chi_y_manifold(&cp(1)));
    }

    #[test]
    fn chi_yz_equals_chi_y_on_su_vectors() {
        for b in [k3_vector(), s6_vector(), x4_vector()] {
            let yz = chi_yz_vector(&b);
            assert!(!yz.involves_z());
            assert_eq!(yz, chi_y_vector(&b));
        }
    }

    #[test]
    fn chi_yz_point() {
        let chi = chi_yz_manifold(&cp(0));
        assert_eq!(chi.coeff(0, 0), rat_int(1));
        assert_eq!(chi.render(), "1");
    }

    #[test]
    fn elliptic_genus_of_k3_is_x2() {
        let q_prec = 6;
        let w = YWindow::symmetric(default_y_prec(2, q_prec) - 1);
        let phi = elliptic_genus_vector(&k3_vector(), q_prec);
        let x2 = jacobi_series(JacobiName::X2, q_prec, w);
        assert!(phi.agrees_with(&x2));
    }

    #[test]
    fn elliptic_genus_of_s6_is_x3() {
        let q_prec = 6;
        let w = YWindow::symmetric(default_y_prec(3, q_prec) - 1);
        let phi = elliptic_genus_vector(&s6_vector(), q_prec);
        let x3 = jacobi_series(JacobiName::X3, q_prec, w);
        assert!(phi.agrees_with(&x3));
    }

    #[test]
    fn elliptic_genus_of_x4_vector_is_x4() {
        let q_prec = 6;
        let w = YWindow::symmetric(default_y_prec(4, q_prec) - 1);
        let phi = elliptic_genus_vector(&x4_vector(), q_prec);
        let x4 = jacobi_series(JacobiName::X4, q_prec, w);
        assert!(phi.agrees_with(&x4));
    }

    #[test]
    fn elliptic_genus_of_cp1_at_q0() {
        // oracle: hand expansion of Q(x)'s x-coefficient at q^0:
        // 1 + 2k + 2y/(1-y); the k-dependence is essential.
        let phi = elliptic_genus_manifold(&cp(1), 3);
        let q0k0 = phi.coeff(VarKey::default());
        assert_eq!(q0k0.coeff(0), rat_int(1));
        for e in 1..=6 {
            assert_eq!(q0k0.coeff(e), rat_int(2), "y^{}", e);
        }
        let q0k1 = phi.coeff(VarKey {
            q: 0,
            k: 1,
            z: 0,
            t: 0,
        });
        assert_eq!(q0k1.coeff(0), rat_int(2));
        assert!(phi.max_k() >= 1);
    }

    #[test]
    fn alpha_of_point_and_k3() {
        let alpha = unscaled_genus_manifold(&cp(0), 4);
        assert!(alpha.agrees_with(&GSeries::one()));
        // alpha(K3) at q^0 under y -> -y is 2 - 20y + 2y^2
        let alpha = unscaled_genus_vector(&k3_vector(), 4);
        let q0 = alpha.substitute_y_neg().q_coefficient(0);
        let chi = chi_y_vector(&k3_vector());
        for e in 0..=2 {
            assert_eq!(q0.coeff(VarKey::default()).coeff(e), chi.coeff(e, 0));
        }
        // alpha(S6) at q^0, y -> -y: -y + y^2
        let alpha = unscaled_genus_vector(&s6_vector(), 4);
        let q0 = alpha.substitute_y_neg().q_coefficient(0);
        assert_eq!(q0.coeff(VarKey::default()).coeff(1), rat_int(-1));
        assert_eq!(q0.coeff(VarKey::default()).coeff(2), rat_int(1));
    }

    #[test]
    fn chi_y_from_alpha_specialization() {
        // chi_y(X) = (1+y)^n phi(X)(0, -y) at k = 0, equivalently
        // alpha(X)(0, -y): check for small manifolds
        for m in [cp(1), cp(2), Manifold::product(&cp(1), &cp(1))] {
            let alpha = unscaled_genus_manifold(&m, 3);
            let chi = chi_y_manifold(&m);
            let q0 = alpha.substitute_y_neg().q_coefficient(0).k_zero_part();
            for e in 0..=(m.n as i64) {
                assert_eq!(
                    q0.coeff(VarKey::default()).coeff(e),
                    chi.coeff(e, 0),
                    "y^{} of chi_y({}-fold)",
                    e,
                    m.n
                );
            }
        }
    }

    #[test]
    fn classical_specializations_table() {
        let (todd, euler, sig) = classical_specializations(&chi_y_vector(&k3_vector()));
        assert_eq!((todd, euler, sig), (rat_int(2), rat_int(24), rat_int(-16)));
        let (todd, euler, sig) = classical_specializations(&chi_y_manifold(&cp(2)));
        assert_eq!((todd, euler, sig), (rat_int(1), rat_int(3), rat_int(1)));
        let (todd, euler, sig) = classical_specializations(&chi_y_manifold(&cp(0)));
        assert_eq!((todd, euler, sig), (rat_int(1), rat_int(1), rat_int(1)));
    }

    #[test]
    fn euler_matches_top_chern_number() {
        for m in [cp(1), cp(2), cp(3), Manifold::product(&cp(1), &cp(2))] {
            let euler = chi_y_manifold(&m).eval_y(&rat_int(-1));
            let ones = Partition(vec![m.n]);
            let top = m.chern_numbers().get(&Partition::of(&ones.0));
            assert_eq!(euler, top, "c_n = Euler for dim {}", m.n);
        }
    }

    #[test]
    fn libgober_wood_on_generators() {
        assert_eq!(libgober_wood_check(&k3_vector()).unwrap(), rat_int(0));
        assert_eq!(libgober_wood_check(&s6_vector()).unwrap(), rat_int(0));
        assert_eq!(libgober_wood_check(&x4_vector()).unwrap(), rat_int(0));
        let k3k3 = crate::bordism::bordism_product(&k3_vector(), &k3_vector());
        assert_eq!(libgober_wood_check(&k3k3).unwrap(), rat_int(0));
        // non-SU input is rejected
        let cp2 = cp(2).chern_numbers();
        assert_eq!(libgober_wood_check(&cp2).unwrap_err(), GenusError::NotSU);
    }

    #[test]
    fn chi_p_classes() {
        let m = cp(2);
        // p = 0, k = 0: the degree-n Todd component integrates to Todd = 1
        let td_part = chi_p_class(&m, 0, 0);
        assert_eq!(m.space.integrate(&td_part), rat_int(1));
        // sum_p (-1)^p of the degree-n parts integrates to the Euler number
        let mut euler = Rational::zero();
        for p in 0..=m.n {
            let sign = if p % 2 == 0 { 1 } else { -1 };
            euler += m.space.integrate(&chi_p_class(&m, p, 0)) * rat_int(sign);
        }
        assert_eq!(euler, rat_int(3));
        // sum_p y^p integral chi_p_class = chi_y / t^n
        let chi = chi_y_manifold(&m);
        for p in 0..=m.n {
            assert_eq!(
                m.space.integrate(&chi_p_class(&m, p, 0)),
                chi.coeff(p as i64, 0),
                "chi^{} of CP^2",
                p
            );
        }
    }

    #[test]
    fn nontrivial_negative_roots_present_the_same_class() {
        // an alternative presentation of the CP^1 tangent data:
        // (1+h)^3 / ((1+h)(1+0)) = (1+h)^2, same Chern numbers, so every
        // genus must agree; this drives the inverse-factor series path
        let cp1 = cp(1);
        let space = cp1.space.clone();
        let h = space.h(0);
        let alt = Manifold::new(
            1,
            space,
            vec![h.clone(), h.clone(), h.clone()],
            vec![h.clone(), MPoly::zero()],
        );
        assert_eq!(alt.chern_numbers(), cp1.chern_numbers());
        assert_eq!(chi_y_manifold(&alt), chi_y_manifold(&cp1));
        assert_eq!(chi_yz_manifold(&alt), chi_yz_manifold(&cp1));
        let g = GenusSpec::todd(1);
        assert!(genus_eval(&alt, &g).agrees_with(&genus_eval(&cp1, &g)));
        let a1 = unscaled_genus_manifold(&alt, 3);
        let a2 = unscaled_genus_manifold(&cp1, 3);
        assert!(a1.agrees_with(&a2));
    }

    #[test]
    fn chi_p_classes_on_a_layered_space() {
        // the fiber of the flop: sum_p y^p integral chi_p_class = chi_y / t^n
        // on a space with a bundle layer
        let inst_base = Manifold::projective_space(0);
        let space = inst_base
            .space
            .add_projective_bundle(&[
                MPoly::zero(),
                MPoly::zero(),
                MPoly::zero(),
                MPoly::zero(),
            ])
            .unwrap();
        let u = space.u(0);
        let f = Manifold::new(
            3,
            space.clone(),
            vec![u.clone(), u.clone(), u.neg(), u.neg(), MPoly::zero()],
            vec![MPoly::zero(), MPoly::zero()],
        );
        let chi = chi_y_manifold(&f);
        assert!(chi.is_zero());
        for p in 0..=3u32 {
            assert_eq!(
                f.space.integrate(&chi_p_class(&f, p, 0)),
                chi.coeff(p as i64, 0),
                "chi^{} of the fiber",
                p
            );
        }
    }

    #[test]
    fn serre_symmetry_on_su_vectors() {
        for b in [k3_vector(), s6_vector(), x4_vector()] {
            let chi = chi_y_vector(&b);
            let n = b.dim() as i64;
            for i in 0..=n {
                let sign = if n % 2 == 0 { 1 } else { -1 };
                assert_eq!(
                    chi.coeff(i, 0),
                    chi.coeff(n - i, 0) * rat_int(sign),
                    "Serre symmetry at i = {}",
                    i
                );
            }
            if n % 2 == 1 {
                assert_eq!(chi.coeff(0, 0), rat_int(0));
            }
        }
    }

    #[test]
    fn genus_multiplicativity() {
        use crate::bordism::bordism_product;
        // chi_y is a ring homomorphism
        let k3 = k3_vector();
        let s6 = s6_vector();
        let prod = bordism_product(&k3, &s6);
        let lhs = chi_y_vector(&prod);
        let a = chi_y_vector(&k3);
        let b = chi_y_vector(&s6);
        for i in 0..=5i64 {
            let mut conv = Rational::zero();
            for j in 0..=i {
                conv += a.coeff(j, 0) * b.coeff(i - j, 0);
            }
            assert_eq!(lhs.coeff(i, 0), conv);
        }
    }

    #[test]
    fn k_independence_on_su_vectors() {
        for b in [k3_vector(), s6_vector(), x4_vector()] {
            let phi = elliptic_genus_vector(&b, 4);
            assert_eq!(phi.max_k(), 0, "SU vector must have no k-dependence");
        }
        // and CP^1 does depend on k
        let phi = elliptic_genus_vector(&cp(1).chern_numbers(), 4);
        assert!(phi.max_k() >= 1);
    }

    use crate::bordism::Partition;

    #[test]
    fn named_vector_derivation_oracles() {
        // K3: solve Todd-and-Euler conditions in dimension 2 from
        // chi_y = 2 - 20y + 2y^2.
        // Using basis vectors e_lambda and the chi_y universal polynomial.
        let basis2 = [Partition::of(&[1, 1]), Partition::of(&[2])];
        let cols: Vec<ChiValue> = basis2
            .iter()
            .map(|l| {
                chi_y_vector(&crate::bordism::BordismVector::from_numbers(
                    2,
                    &[(l.clone(), rat_int(1))],
                ))
            })
            .collect();
        // rows: y^0 and y^1 coefficients; target (2, -20)
        let sol = solve2(
            [
                [cols[0].coeff(0, 0), cols[1].coeff(0, 0)],
                [cols[0].coeff(1, 0), cols[1].coeff(1, 0)],
            ],
            [rat_int(2), rat_int(-20)],
        );
        assert_eq!(sol, [rat_int(0), rat_int(24)]);

        // S6: SU conditions force c1^3 = c1c2 = 0; Euler = chi(-1) = 2 gives c3.
        let chi_c3 = chi_y_vector(&crate::bordism::BordismVector::from_numbers(
            3,
            &[(Partition::of(&[3]), rat_int(1))],
        ));
        let euler_per_c3 = chi_c3.eval_y(&rat_int(-1));
        assert_eq!(rat_int(2) / euler_per_c3, rat_int(2));

        // X4: c1-numbers vanish; solve Todd = 0, signature = 2 for (c2^2, c4).
        let basis4 = [Partition::of(&[2, 2]), Partition::of(&[4])];
        let cols: Vec<ChiValue> = basis4
            .iter()
            .map(|l| {
                chi_y_vector(&crate::bordism::BordismVector::from_numbers(
                    4,
                    &[(l.clone(), rat_int(1))],
                ))
            })
            .collect();
        let todd = |c: &ChiValue| c.eval_y(&Rational::zero());
        let sig = |c: &ChiValue| c.eval_y(&Rational::one());
        let sol = solve2(
            [
                [todd(&cols[0]), todd(&cols[1])],
                [sig(&cols[0]), sig(&cols[1])],
            ],
            [rat_int(0), rat_int(2)],
        );
        assert_eq!(sol, [rat_int(2), rat_int(6)]);
        // and the full chi_y of the solved vector matches the table
        assert_eq!(
            chi_y_vector(&x4_vector()).render(),
            "t^4*(-y + 4y^2 - y^3)"
        );
    }

    fn solve2(a: [[Rational; 2]; 2], b: [Rational; 2]) -> [Rational; 2] {
        let det = &a[0][0] * &a[1][1] - &a[0][1] * &a[1][0];
        assert!(!det.is_zero());
        let x = (&b[0] * &a[1][1] - &a[0][1] * &b[1]) / det.clone();
        let y = (&a[0][0] * &b[1] - &b[0] * &a[1][0]) / det;
        [x, y]
    }
}
