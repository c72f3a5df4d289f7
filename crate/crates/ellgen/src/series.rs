//! Exact truncated-series arithmetic.
//!
//! The working ring is Q((y))[k, z, t][[q]], truncated in q and in y:
//! a [`GSeries`] is a map from (q, k, z, t)-exponents to [`YLaurent`]
//! coefficients. All coefficients are exact rationals; truncation bounds
//! (q_prec per series, y prec per coefficient) are tracked through every
//! operation, never rounded.
//!
//! k, z, t are plain polynomial variables (they only ever appear to degree
//! bounded by the complex dimension of the originating computation), so they
//! carry no truncation of their own.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Exact rational scalar: arbitrary-precision, always reduced, denominator > 0.
pub type Rational = BigRational;

/// Shorthand constructors for rationals.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Sentinel precision meaning "exact to all orders".
pub const PREC_EXACT: i64 = i64::MAX / 4;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeriesError {
    #[error("series is not invertible: the q^0 k^0 z^0 t^0 coefficient is zero")]
    NotInvertible,
}

/// A truncated Laurent series in y over Q.
///
/// Coefficients are stored for exponents `val .. val + coeffs.len()`;
/// exponents below `val` and between the stored range and `prec` are exactly
/// zero; exponents `>= prec` are unknown. A series with `prec == PREC_EXACT`
/// is an exact Laurent polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YLaurent {
    val: i64,
    coeffs: Vec<Rational>,
    prec: i64,
}

impl YLaurent {
    pub fn zero() -> Self {
        YLaurent {
            val: 0,
            coeffs: Vec::new(),
            prec: PREC_EXACT,
        }
    }

    pub fn zero_to(prec: i64) -> Self {
        YLaurent {
            val: 0,
            coeffs: Vec::new(),
            prec,
        }
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(0, c)
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// c * y^e as an exact polynomial.
    pub fn monomial(e: i64, c: Rational) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            YLaurent {
                val: e,
                coeffs: vec![c],
                prec: PREC_EXACT,
            }
        }
    }

    /// Build from (exponent, coefficient) pairs, exact unless `prec` is given.
    pub fn from_terms(terms: &[(i64, Rational)], prec: i64) -> Self {
        let mut s = Self::zero_to(prec);
        for (e, c) in terms {
            s.add_term(*e, c.clone());
        }
        s
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec >= PREC_EXACT
    }

    /// Lowest stored exponent (first nonzero after normalization); 0 for zero series.
    pub fn valuation(&self) -> i64 {
        self.val
    }

    /// Exponent just past the highest stored nonzero coefficient.
    pub fn support_end(&self) -> i64 {
        self.val + self.coeffs.len() as i64
    }

    pub fn coeff(&self, e: i64) -> Rational {
        if e < self.val || e >= self.val + self.coeffs.len() as i64 {
            Rational::zero()
        } else {
            self.coeffs[(e - self.val) as usize].clone()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.val + i as i64, c))
    }

    fn normalize(&mut self) {
        // truncate at prec, trim zero fringes
        if !self.is_exact() {
            let keep = (self.prec - self.val).max(0) as usize;
            self.coeffs.truncate(keep);
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead_zeros = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros > 0 {
            self.coeffs.drain(..lead_zeros);
            self.val += lead_zeros as i64;
        }
        if self.coeffs.is_empty() {
            self.val = 0;
        }
    }

    pub fn add_term(&mut self, e: i64, c: Rational) {
        if c.is_zero() || e >= self.prec {
            return;
        }
        if self.coeffs.is_empty() {
            self.val = e;
            self.coeffs.push(c);
            return;
        }
        if e < self.val {
            let mut head = vec![Rational::zero(); (self.val - e) as usize];
            head.extend(std::mem::take(&mut self.coeffs));
            self.coeffs = head;
            self.val = e;
        }
        let idx = (e - self.val) as usize;
        if idx >= self.coeffs.len() {
            self.coeffs.resize(idx + 1, Rational::zero());
        }
        self.coeffs[idx] += c;
        self.normalize();
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = self.prec.min(other.prec);
        let mut out = Self::zero_to(prec);
        for (e, c) in self.terms() {
            out.add_term(e, c.clone());
        }
        for (e, c) in other.terms() {
            out.add_term(e, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c = -c.clone();
        }
        out
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero_to(self.prec);
        }
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c *= r.clone();
        }
        out.normalize();
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        // Unknown tails only pollute exponents >= min(p1 + v2, p2 + v1).
        let prec = if self.is_exact() && other.is_exact()
            || self.is_zero() && self.is_exact()
            || other.is_zero() && other.is_exact()
        {
            PREC_EXACT
        } else {
            sat_add(self.prec, other.val).min(sat_add(other.prec, self.val))
        };
        let mut out = Self::zero_to(prec);
        if self.is_zero() || other.is_zero() {
            return out;
        }
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let ea = self.val + i as i64;
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let e = ea + other.val + j as i64;
                if e >= out.prec {
                    break;
                }
                out.add_term(e, a * b);
            }
        }
        out
    }

    /// Multiplicative inverse. The lowest coefficient must be nonzero.
    /// For exact polynomials the caller supplies the target precision via
    /// `len_hint` (number of coefficients to produce past the valuation).
    pub fn inv(&self, len_hint: i64) -> Result<Self, SeriesError> {
        if self.is_zero() {
            return Err(SeriesError::NotInvertible);
        }
        let v = self.val;
        let lead = self.coeffs[0].clone();
        debug_assert!(!lead.is_zero());
        let len = if self.is_exact() {
            len_hint
        } else {
            (self.prec - v).min(len_hint)
        };
        if len <= 0 {
            return Ok(Self::zero_to(-v));
        }
        // (c y^v (1 + u))^{-1} = c^{-1} y^{-v} sum (-u)^j
        let mut inv_coeffs = vec![Rational::zero(); len as usize];
        inv_coeffs[0] = lead.recip();
        for m in 1..len as usize {
            // sum_{j=1}^{m} a_j * binv_{m-j} = 0  (a_j relative coefficients)
            let mut acc = Rational::zero();
            for j in 1..=m {
                if j < self.coeffs.len() && !self.coeffs[j].is_zero() {
                    acc += &self.coeffs[j] * &inv_coeffs[m - j];
                }
            }
            inv_coeffs[m] = -acc / lead.clone();
        }
        let mut out = YLaurent {
            val: -v,
            coeffs: inv_coeffs,
            prec: sat_add(-v, len),
        };
        if self.is_exact() && self.coeffs.len() == 1 {
            // monomial inverse is exact
            out.prec = PREC_EXACT;
            out.coeffs.truncate(1);
        }
        out.normalize();
        Ok(out)
    }

    /// Substitute y -> 1/y (exact reversal of the coefficient range).
    /// Only meaningful for exact polynomials or for symmetric-window checks.
    pub fn reciprocal_substitution(&self) -> Self {
        let mut out = Self::zero_to(if self.is_exact() { PREC_EXACT } else { -self.val + 1 });
        for (e, c) in self.terms() {
            out.add_term(-e, c.clone());
        }
        out
    }

    /// True if both series agree on every exponent below min(prec).
    pub fn agrees_with(&self, other: &Self) -> bool {
        let p = self.prec.min(other.prec);
        let lo = self.val.min(other.val);
        let hi = (self.support_end().max(other.support_end())).min(p);
        (lo..hi).all(|e| self.coeff(e) == other.coeff(e))
    }
}

fn sat_add(a: i64, b: i64) -> i64 {
    a.saturating_add(b).min(PREC_EXACT)
}

/// Exponent key for the polynomial variables riding along with q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct VarKey {
    pub q: u32,
    pub k: u32,
    pub z: u32,
    pub t: u32,
}

impl VarKey {
    pub fn q(q: u32) -> Self {
        VarKey {
            q,
            ..Default::default()
        }
    }

    fn add(&self, other: &VarKey) -> VarKey {
        VarKey {
            q: self.q + other.q,
            k: self.k + other.k,
            z: self.z + other.z,
            t: self.t + other.t,
        }
    }
}

/// Truncated series in q with YLaurent coefficients and exact polynomial
/// dependence on k, z, t.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GSeries {
    q_prec: i64,
    terms: BTreeMap<VarKey, YLaurent>,
}

impl GSeries {
    pub fn zero() -> Self {
        GSeries {
            q_prec: PREC_EXACT,
            terms: BTreeMap::new(),
        }
    }

    pub fn zero_to(q_prec: i64) -> Self {
        GSeries {
            q_prec,
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut s = Self::zero();
        if !c.is_zero() {
            s.terms.insert(VarKey::default(), YLaurent::constant(c));
        }
        s
    }

    pub fn from_ylaurent(y: YLaurent) -> Self {
        let mut s = Self::zero();
        if !(y.is_zero() && y.is_exact()) {
            s.terms.insert(VarKey::default(), y);
        }
        s
    }

    /// c * q^a k^b z^c t^d y^e as an exact term.
    pub fn monomial(key: VarKey, y_exp: i64, c: Rational) -> Self {
        let mut s = Self::zero();
        if !c.is_zero() {
            s.terms.insert(key, YLaurent::monomial(y_exp, c));
        }
        s
    }

    pub fn q_prec(&self) -> i64 {
        self.q_prec
    }

    pub fn set_q_prec(&mut self, q_prec: i64) {
        self.q_prec = q_prec;
        self.terms.retain(|k, _| (k.q as i64) < q_prec);
    }

    pub fn coeff(&self, key: VarKey) -> YLaurent {
        self.terms.get(&key).cloned().unwrap_or_else(YLaurent::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&VarKey, &YLaurent)> {
        self.terms.iter().filter(|(_, y)| !y.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|y| y.is_zero())
    }

    /// Largest k-exponent carrying a nonzero coefficient.
    pub fn max_k(&self) -> u32 {
        self.terms().map(|(k, _)| k.k).max().unwrap_or(0)
    }

    /// Add a YLaurent coefficient onto the given (q,k,z,t) key.
    pub fn insert_add(&mut self, key: VarKey, y: YLaurent) {
        if (key.q as i64) >= self.q_prec {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                if !(y.is_zero() && y.is_exact()) {
                    e.insert(y);
                }
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&y);
                if sum.is_zero() && sum.is_exact() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Self::zero_to(self.q_prec.min(other.q_prec));
        for (k, y) in &self.terms {
            out.insert_add(*k, y.clone());
        }
        for (k, y) in &other.terms {
            out.insert_add(*k, y.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for y in out.terms.values_mut() {
            *y = y.neg();
        }
        out
    }

    pub fn scale(&self, r: &Rational) -> Self {
        let mut out = Self::zero_to(self.q_prec);
        if r.is_zero() {
            return out;
        }
        for (k, y) in &self.terms {
            out.insert_add(*k, y.scale(r));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let qmin_a = self.terms.keys().map(|k| k.q as i64).min().unwrap_or(0);
        let qmin_b = other.terms.keys().map(|k| k.q as i64).min().unwrap_or(0);
        let q_prec = if self.q_prec >= PREC_EXACT && other.q_prec >= PREC_EXACT {
            PREC_EXACT
        } else {
            sat_add(self.q_prec, qmin_b).min(sat_add(other.q_prec, qmin_a))
        };
        let mut out = Self::zero_to(q_prec);
        for (ka, ya) in self.terms() {
            for (kb, yb) in other.terms() {
                if (ka.q + kb.q) as i64 >= q_prec {
                    continue;
                }
                out.insert_add(ka.add(kb), ya.mul(yb));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Multiplicative inverse. Requires the q^0 part to be a unit YLaurent
    /// concentrated on k = z = t = 0. `y_len` bounds the coefficient count
    /// produced when inverting exact polynomials in y.
    pub fn inv(&self, y_len: i64) -> Result<Self, SeriesError> {
        let zero_key = VarKey::default();
        let head = self
            .terms
            .get(&zero_key)
            .cloned()
            .ok_or(SeriesError::NotInvertible)?;
        if head.is_zero() {
            return Err(SeriesError::NotInvertible);
        }
        if self
            .terms()
            .any(|(k, _)| k.q == 0 && *k != zero_key)
        {
            return Err(SeriesError::NotInvertible);
        }
        let head_inv = head.inv(y_len)?;
        // a = h (1 + r), r with q >= 1: a^{-1} = h^{-1} sum (-h^{-1} rest)^j
        let q_prec = self.q_prec;
        let mut rest = Self::zero_to(q_prec);
        for (k, y) in self.terms() {
            if k.q >= 1 {
                rest.insert_add(*k, y.clone());
            }
        }
        let h_inv = Self::from_ylaurent(head_inv);
        let neg_t = rest.mul(&h_inv).neg();
        // inverting an exact polynomial with q-terms yields a genuine
        // power series; truncate it at a documented working precision
        let work_prec = if q_prec >= PREC_EXACT && !rest.is_zero() {
            64
        } else {
            q_prec
        };
        let mut out = Self::one();
        let mut power = Self::one();
        for _ in 0..work_prec.clamp(0, 1 << 20) {
            power = power.mul(&neg_t);
            if power.is_zero() {
                break;
            }
            out = out.add(&power);
        }
        let mut out = out.mul(&h_inv);
        out.q_prec = out.q_prec.min(work_prec);
        Ok(out)
    }

    /// Substitute y -> -y.
    pub fn substitute_y_neg(&self) -> Self {
        let mut out = Self::zero_to(self.q_prec);
        for (k, y) in self.terms() {
            let mut flipped = YLaurent::zero_to(y.prec());
            for (e, c) in y.terms() {
                let sign = if e.rem_euclid(2) == 1 {
                    -c.clone()
                } else {
                    c.clone()
                };
                flipped.add_term(e, sign);
            }
            out.insert_add(*k, flipped);
        }
        out
    }

    /// Extract the sub-series with the given q-exponent (q removed).
    pub fn q_coefficient(&self, q: u32) -> Self {
        let mut out = Self::zero();
        for (k, y) in self.terms() {
            if k.q == q {
                out.insert_add(VarKey { q: 0, ..*k }, y.clone());
            }
        }
        out
    }

    /// Extract the sub-series with k = 0.
    pub fn k_zero_part(&self) -> Self {
        let mut out = Self::zero_to(self.q_prec);
        for (key, y) in self.terms() {
            if key.k == 0 {
                out.insert_add(*key, y.clone());
            }
        }
        out
    }

    /// Substitute an exact rational for y. Errors are impossible for exact
    /// polynomial coefficients; truncated coefficients would not be exact, so
    /// this panics if any coefficient is inexact.
    pub fn eval_y(&self, y_val: &Rational) -> Self {
        let mut out = Self::zero_to(self.q_prec);
        for (key, y) in self.terms() {
            assert!(
                y.is_exact(),
                "eval_y requires exact y-polynomial coefficients"
            );
            let mut acc = Rational::zero();
            for (e, c) in y.terms() {
                assert!(e >= 0, "eval_y requires nonnegative y-exponents");
                acc += c * num::pow::pow(y_val.clone(), e as usize);
            }
            out.insert_add(*key, YLaurent::constant(acc));
        }
        out
    }

    /// True if the two series agree coefficientwise within the common
    /// precision window.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let q_prec = self.q_prec.min(other.q_prec);
        let keys: std::collections::BTreeSet<VarKey> = self
            .terms()
            .chain(other.terms())
            .map(|(k, _)| *k)
            .filter(|k| (k.q as i64) < q_prec)
            .collect();
        keys.iter()
            .all(|k| self.coeff(*k).agrees_with(&other.coeff(*k)))
    }

    /// Canonical text rendering: terms sorted by (q, k, z, t, y) exponent.
    pub fn render_text(&self) -> String {
        let mut parts = Vec::new();
        for (key, y) in self.terms() {
            for (e, c) in y.terms() {
                parts.push(render_term(key, e, c));
            }
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }

    /// JSON rendering mirroring the canonical text: one object per term with
    /// string-encoded integers.
    pub fn render_json(&self) -> serde_json::Value {
        let mut arr = Vec::new();
        for (key, y) in self.terms() {
            for (e, c) in y.terms() {
                arr.push(serde_json::json!({
                    "num": c.numer().to_string(),
                    "den": c.denom().to_string(),
                    "q": key.q.to_string(),
                    "k": key.k.to_string(),
                    "z": key.z.to_string(),
                    "t": key.t.to_string(),
                    "y": e.to_string(),
                }));
            }
        }
        serde_json::Value::Array(arr)
    }
}

fn render_term(key: &VarKey, y_exp: i64, c: &Rational) -> String {
    let mut s = if c.denom().is_one() {
        format!("{}", c.numer())
    } else {
        format!("{}/{}", c.numer(), c.denom())
    };
    let mut push = |var: &str, e: i64| {
        if e != 0 {
            s.push_str(&format!(" * {}^{}", var, e));
        }
    };
    push("q", key.q as i64);
    push("k", key.k as i64);
    push("z", key.z as i64);
    push("t", key.t as i64);
    push("y", y_exp);
    s
}

impl fmt::Display for GSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render_text())
    }
}

/// Default y-precision for a computation of complex dimension `n` at
/// q-precision `m`: coefficients are stored for y-exponents up to m*n + n.
pub fn default_y_prec(n: i64, q_prec: i64) -> i64 {
    q_prec * n + n + 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geom(prec: i64) -> YLaurent {
        // 1 + y + y^2 + ...
        let terms: Vec<(i64, Rational)> = (0..prec).map(|e| (e, rat_int(1))).collect();
        YLaurent::from_terms(&terms, prec)
    }

    #[test]
    fn difference_of_squares() {
        // (1 + qy)(1 - qy) = 1 - q^2 y^2 at q_prec >= 3
        let mut a = GSeries::zero_to(4);
        a.insert_add(VarKey::default(), YLaurent::one());
        a.insert_add(VarKey::q(1), YLaurent::monomial(1, rat_int(1)));
        let mut b = GSeries::zero_to(4);
        b.insert_add(VarKey::default(), YLaurent::one());
        b.insert_add(VarKey::q(1), YLaurent::monomial(1, rat_int(-1)));
        let prod = a.mul(&b);
        let mut expect = GSeries::zero_to(4);
        expect.insert_add(VarKey::default(), YLaurent::one());
        expect.insert_add(VarKey::q(2), YLaurent::monomial(2, rat_int(-1)));
        assert!(prod.agrees_with(&expect));
    }

    #[test]
    fn mul_by_one_is_identity() {
        let mut a = GSeries::zero_to(3);
        a.insert_add(VarKey::q(1), YLaurent::from_terms(&[(-1, rat(2, 3)), (2, rat_int(5))], 8));
        let prod = a.mul(&GSeries::one());
        assert!(prod.agrees_with(&a));
        assert_eq!(prod.q_prec(), 3);
    }

    #[test]
    fn sum_n_yn_times_one_minus_y_squared() {
        // oracle: y/(1-y)^2 = sum n y^n, so (sum n y^n)(1-y)^2 = y
        let prec = 12;
        let terms: Vec<(i64, Rational)> = (1..prec).map(|e| (e, rat_int(e))).collect();
        let s = YLaurent::from_terms(&terms, prec);
        let one_minus_y = YLaurent::from_terms(&[(0, rat_int(1)), (1, rat_int(-1))], PREC_EXACT);
        let product = s.mul(&one_minus_y).mul(&one_minus_y);
        assert!(product.agrees_with(&YLaurent::monomial(1, rat_int(1))));
    }

    #[test]
    fn inv_one_minus_y_is_geometric() {
        let one_minus_y = YLaurent::from_terms(&[(0, rat_int(1)), (1, rat_int(-1))], PREC_EXACT);
        let inv = one_minus_y.inv(10).unwrap();
        assert!(inv.agrees_with(&geom(10)));
    }

    #[test]
    fn inv_of_one_is_one() {
        let one = GSeries::one();
        let inv = one.inv(6).unwrap();
        assert!(inv.agrees_with(&GSeries::one()));
    }

    #[test]
    fn inv_round_trip_on_units() {
        let mut a = GSeries::zero_to(5);
        a.insert_add(
            VarKey::default(),
            YLaurent::from_terms(&[(-1, rat_int(2)), (0, rat_int(3)), (1, rat(1, 2))], 9),
        );
        a.insert_add(VarKey::q(1), YLaurent::monomial(0, rat_int(7)));
        a.insert_add(VarKey::q(2), YLaurent::monomial(-2, rat(1, 3)));
        let inv = a.inv(20).unwrap();
        let back = inv.inv(20).unwrap();
        assert!(back.agrees_with(&a));
        assert!(a.mul(&inv).agrees_with(&GSeries::one()));
    }

    #[test]
    fn not_invertible_without_constant_term() {
        let mut a = GSeries::zero_to(3);
        a.insert_add(VarKey::q(1), YLaurent::one());
        assert_eq!(a.inv(5).unwrap_err(), SeriesError::NotInvertible);
        let mut b = GSeries::zero_to(3);
        b.insert_add(
            VarKey {
                k: 1,
                ..Default::default()
            },
            YLaurent::one(),
        );
        assert_eq!(b.inv(5).unwrap_err(), SeriesError::NotInvertible);
    }

    fn random_series(rng: &mut impl rand::Rng, q_prec: i64) -> GSeries {
        let mut s = GSeries::zero_to(q_prec);
        for _ in 0..6 {
            let key = VarKey {
                q: rng.gen_range(0..q_prec as u32),
                k: rng.gen_range(0..2),
                z: 0,
                t: rng.gen_range(0..2),
            };
            let e = rng.gen_range(-3..4);
            let c = rat(rng.gen_range(-5..6), rng.gen_range(1..4));
            let mut y = YLaurent::zero_to(8);
            y.add_term(e, c);
            s.insert_add(key, y);
        }
        s
    }

    #[test]
    fn ring_laws_on_random_triples() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let a = random_series(&mut rng, 4);
            let b = random_series(&mut rng, 4);
            let c = random_series(&mut rng, 4);
            assert!(a.mul(&b).agrees_with(&b.mul(&a)));
            assert!(a.add(&b).agrees_with(&b.add(&a)));
            assert!(a.mul(&b).mul(&c).agrees_with(&a.mul(&b.mul(&c))));
            let lhs = a.mul(&b.add(&c));
            let rhs = a.mul(&b).add(&a.mul(&c));
            assert!(lhs.agrees_with(&rhs));
        }
    }

    #[test]
    fn precision_monotonicity() {
        // recomputing at higher precision agrees on shared coefficients
        let build = |q_prec: i64, y_prec: i64| -> GSeries {
            let mut phi_like = GSeries::zero_to(q_prec);
            phi_like.insert_add(
                VarKey::default(),
                YLaurent::from_terms(&[(0, rat_int(1)), (-1, rat_int(-1))], y_prec),
            );
            for m in 1..q_prec as u32 {
                phi_like.insert_add(VarKey::q(m), YLaurent::from_terms(&[(1, rat_int(-1))], y_prec));
            }
            phi_like.inv(y_prec).unwrap()
        };
        let low = build(3, 6);
        let high = build(6, 12);
        assert!(low.agrees_with(&high));
    }

    #[test]
    fn render_canonical_text() {
        let mut s = GSeries::zero_to(4);
        s.insert_add(VarKey::q(1), YLaurent::monomial(-2, rat(1, 2)));
        s.insert_add(
            VarKey {
                q: 0,
                k: 1,
                z: 0,
                t: 2,
            },
            YLaurent::monomial(0, rat_int(-3)),
        );
        assert_eq!(s.render_text(), "-3 * k^1 * t^2 + 1/2 * q^1 * y^-2");
        let json = s.render_json();
        assert_eq!(json[0]["num"], "-3");
        assert_eq!(json[1]["den"], "2");
        assert_eq!(json[1]["y"], "-2");
    }
}
