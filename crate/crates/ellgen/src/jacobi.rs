//! q-expansions of the Jacobi forms and modular forms underlying the
//! elliptic genus: the normalized sigma-function product Phi, the
//! Weierstrass function wp and its derivative, the Eisenstein series g2, g3,
//! the integral generators x2 = 24 wp, x3 = wp', x4 = 6 wp^2 - g2/2, and the
//! discriminant cusp form Delta both as g2^3 - 27 g3^2 and as a weight-12
//! polynomial in x2, x3, x4.
//!
//! Expansions follow Lang's series:
//!
//!   wp  = 1/12 + y/(1-y)^2 - 2 sum n q^{mn} + sum n q^{mn} (y^n + y^{-n})
//!   wp' = y(1+y)/(1-y)^3 + sum n^2 q^{mn} (y^n - y^{-n})
//!   g2  = (1/12)  [ 1 + 240 sum m^3 q^m / (1-q^m) ]
//!   g3  = (1/216) [-1 + 504 sum m^5 q^m / (1-q^m) ]
//!
//! with y/(1-y)^2 = sum n y^n and y(1+y)/(1-y)^3 = sum n^2 y^n expanded as
//! power series in y (elements of Q((y)) have finite polar part).

use crate::series::{rat, rat_int, GSeries, Rational, VarKey, YLaurent};
use num::Zero;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JacobiName {
    Phi,
    Wp,
    WpPrime,
    G2,
    G3,
    X2,
    X3,
    X4,
    DeltaModular,
    DeltaPoly,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown Jacobi form name: {0}")]
pub struct UnknownName(pub String);

impl FromStr for JacobiName {
    type Err = UnknownName;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "Phi" | "phi" => JacobiName::Phi,
            "wp" => JacobiName::Wp,
            "wp_prime" => JacobiName::WpPrime,
            "g2" => JacobiName::G2,
            "g3" => JacobiName::G3,
            "x2" => JacobiName::X2,
            "x3" => JacobiName::X3,
            "x4" => JacobiName::X4,
            "delta_modular" => JacobiName::DeltaModular,
            "delta_poly" => JacobiName::DeltaPoly,
            other => return Err(UnknownName(other.to_string())),
        })
    }
}

/// y-window for truncated Laurent coefficients; `hi` is the last stored
/// exponent (prec = hi + 1), `lo` documents the expected polar depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct YWindow {
    pub lo: i64,
    pub hi: i64,
}

impl YWindow {
    pub fn symmetric(w: i64) -> Self {
        YWindow { lo: -w, hi: w }
    }

    pub fn prec(&self) -> i64 {
        self.hi + 1
    }
}

/// Expand a named Jacobi/modular form to the given q-precision
/// (q-exponents 0..q_prec) and y-window.
pub fn jacobi_series(name: JacobiName, q_prec: i64, window: YWindow) -> GSeries {
    assert!(q_prec >= 1, "q_prec must be at least 1");
    match name {
        JacobiName::Phi => phi(q_prec, false),
        JacobiName::Wp => wp(q_prec, window),
        JacobiName::WpPrime => wp_prime(q_prec, window),
        JacobiName::G2 => g2(q_prec),
        JacobiName::G3 => g3(q_prec),
        JacobiName::X2 => wp(q_prec, window).scale(&rat_int(24)),
        JacobiName::X3 => wp_prime(q_prec, window),
        JacobiName::X4 => x4(q_prec, window),
        JacobiName::DeltaModular => delta_modular(q_prec),
        JacobiName::DeltaPoly => delta_poly(q_prec, window),
    }
}

/// Phi(q, y) = prod_{m>=1} (1 - y^{-1} q^{m-1})(1 - y q^m) / (1 - q^m)^2.
/// With `inverted_y` the substitution y -> 1/y is applied to the product.
pub fn phi(q_prec: i64, inverted_y: bool) -> GSeries {
    let (down, up) = if inverted_y { (1, -1) } else { (-1, 1) };
    // m = 1 first factor has q-exponent 0
    let mut out = binomial_factor(q_prec, 0, down);
    for e in 1..q_prec {
        out = out.mul(&binomial_factor(q_prec, e as u32, down));
        out = out.mul(&binomial_factor(q_prec, e as u32, up));
    }
    for m in 1..q_prec {
        let geo = q_geometric(q_prec, m as u32);
        out = out.mul(&geo).mul(&geo);
    }
    out
}

/// Phi(q, 1/y), the prefactor of the elliptic genus.
pub fn phi_one_over_y(q_prec: i64) -> GSeries {
    phi(q_prec, true)
}

/// 1 - y^{sign} q^e
fn binomial_factor(q_prec: i64, e: u32, sign: i64) -> GSeries {
    let mut s = GSeries::zero_to(q_prec);
    s.add_assign_term(VarKey::default(), 0, rat_int(1));
    s.add_assign_term(VarKey::q(e), sign, rat_int(-1));
    s
}

/// (1 - q^m)^{-1} = sum_j q^{jm}, truncated.
fn q_geometric(q_prec: i64, m: u32) -> GSeries {
    let mut s = GSeries::zero_to(q_prec);
    let mut e = 0u32;
    while (e as i64) < q_prec {
        s.add_assign_term(VarKey::q(e), 0, rat_int(1));
        e += m;
    }
    s
}

fn wp(q_prec: i64, window: YWindow) -> GSeries {
    let prec = window.prec();
    let mut s = GSeries::zero_to(q_prec);
    let mut q0 = YLaurent::zero_to(prec);
    q0.add_term(0, rat(1, 12));
    for n in 1..prec {
        q0.add_term(n, rat_int(n));
    }
    s.set_coeff(VarKey::default(), q0);
    for m in 1..q_prec {
        for n in 1.. {
            let e = m * n;
            if e >= q_prec {
                break;
            }
            s.add_assign_term(VarKey::q(e as u32), 0, rat_int(-2 * n));
            s.add_assign_term(VarKey::q(e as u32), n, rat_int(n));
            s.add_assign_term(VarKey::q(e as u32), -n, rat_int(n));
        }
    }
    s
}

fn wp_prime(q_prec: i64, window: YWindow) -> GSeries {
    let prec = window.prec();
    let mut s = GSeries::zero_to(q_prec);
    let mut q0 = YLaurent::zero_to(prec);
    for n in 1..prec {
        q0.add_term(n, rat_int(n * n));
    }
    s.set_coeff(VarKey::default(), q0);
    for m in 1..q_prec {
        for n in 1.. {
            let e = m * n;
            if e >= q_prec {
                break;
            }
            s.add_assign_term(VarKey::q(e as u32), n, rat_int(n * n));
            s.add_assign_term(VarKey::q(e as u32), -n, rat_int(-n * n));
        }
    }
    s
}

fn divisor_power_sum(e: i64, p: u32) -> Rational {
    let mut acc = Rational::zero();
    for d in 1..=e {
        if e % d == 0 {
            acc += rat_int(num::pow::pow(d, p as usize));
        }
    }
    acc
}

fn g2(q_prec: i64) -> GSeries {
    let mut s = GSeries::zero_to(q_prec);
    s.add_assign_term(VarKey::default(), 0, rat(1, 12));
    for e in 1..q_prec {
        s.add_assign_term(VarKey::q(e as u32), 0, rat_int(20) * divisor_power_sum(e, 3));
    }
    s
}

fn g3(q_prec: i64) -> GSeries {
    let mut s = GSeries::zero_to(q_prec);
    s.add_assign_term(VarKey::default(), 0, rat(-1, 216));
    for e in 1..q_prec {
        s.add_assign_term(VarKey::q(e as u32), 0, rat(7, 3) * divisor_power_sum(e, 5));
    }
    s
}

fn x4(q_prec: i64, window: YWindow) -> GSeries {
    let p = wp(q_prec, window);
    p.mul(&p).scale(&rat_int(6)).sub(&g2(q_prec).scale(&rat(1, 2)))
}

fn delta_modular(q_prec: i64) -> GSeries {
    let a = g2(q_prec);
    let b = g3(q_prec);
    a.pow(3).sub(&b.mul(&b).scale(&rat_int(27)))
}

/// Delta as the weight-12 polynomial in x2, x3, x4. Weight homogeneity
/// (x2, x3, x4 of weights 2, 3, 4) forces the final term to be -8 x4^3.
fn delta_poly(q_prec: i64, window: YWindow) -> GSeries {
    delta_poly_with_last_exponent(q_prec, window, 3)
}

/// The same polynomial with a configurable exponent on the last term,
/// so the misprinted -8 x4^2 variant can be shown to fail the identity.
pub fn delta_poly_with_last_exponent(q_prec: i64, window: YWindow, x4_exp: u32) -> GSeries {
    let x2 = jacobi_series(JacobiName::X2, q_prec, window);
    let x3 = jacobi_series(JacobiName::X3, q_prec, window);
    let x4s = x4(q_prec, window);
    let t1 = x2.pow(3).mul(&x3.pow(2)).scale(&rat(-1, 32));
    let t2 = x2.pow(2).mul(&x4s.pow(2)).scale(&rat(1, 16));
    let t3 = x2.mul(&x3.pow(2)).mul(&x4s).scale(&rat(9, 2));
    let t4 = x3.pow(4).scale(&rat_int(-27));
    let t5 = x4s.pow(x4_exp).scale(&rat_int(-8));
    t1.add(&t2).add(&t3).add(&t4).add(&t5)
}

/// Residual of the Weierstrass equation wp'^2 - (4 wp^3 - g2 wp - g3);
/// identically zero within the window.
pub fn verify_weierstrass(q_prec: i64, window: YWindow) -> GSeries {
    let p = wp(q_prec, window);
    let dp = wp_prime(q_prec, window);
    let rhs = p
        .pow(3)
        .scale(&rat_int(4))
        .sub(&g2(q_prec).mul(&p))
        .sub(&g3(q_prec));
    dp.mul(&dp).sub(&rhs)
}

/// Residual of delta_modular - delta_poly (zero) together with the q^0
/// coefficient of delta_modular (zero: Delta is a cusp form).
pub fn verify_delta(q_prec: i64, window: YWindow) -> (GSeries, YLaurent) {
    let dm = delta_modular(q_prec);
    let dp = delta_poly(q_prec, window);
    let cusp = dm.coeff(VarKey::default());
    (dm.sub(&dp), cusp)
}

impl GSeries {
    /// Convenience used throughout this module: add c * q^... y^e.
    pub fn add_assign_term(&mut self, key: VarKey, y_exp: i64, c: Rational) {
        let mut y = YLaurent::zero();
        y.add_term(y_exp, c);
        self.insert_add(key, y);
    }

    pub fn set_coeff(&mut self, key: VarKey, y: YLaurent) {
        self.insert_add(key, y);
    }
}
