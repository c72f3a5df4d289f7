//! The discriminant combination of bordism generators.
//!
//! The elliptic genus sends the built-in K3 / S6 / X4 vectors to the Jacobi
//! forms x2, x3, x4. The weight-12 polynomial
//!   -(1/32) x2^3 x3^2 + (1/16) x2^2 x4^2 + (9/2) x2 x3^2 x4 - 27 x3^4 - 8 x4^3
//! evaluated on those vectors is a dimension-12 bordism class whose elliptic
//! genus is the cusp form g2^3 - 27 g3^2 and whose chi_y genus vanishes: the
//! one relation of the twisted chi_y image Q[x1,x2,x3,x4]/(Delta).

use crate::bordism::{
    bordism_product, k3_vector, partitions_of, s6_vector, x4_vector, BordismVector,
};
use crate::genera::elliptic_genus_vector;
use crate::jacobi::{jacobi_series, JacobiName, YWindow};
use crate::series::{default_y_prec, rat, rat_int, GSeries};

/// The three built-in generator vectors, with their genus images verified
/// against the Jacobi-form expansions rather than assumed.
pub struct GeneratorSet {
    pub x2_vec: BordismVector,
    pub x3_vec: BordismVector,
    pub x4_vec: BordismVector,
}

impl GeneratorSet {
    pub fn new() -> Self {
        GeneratorSet {
            x2_vec: k3_vector(),
            x3_vec: s6_vector(),
            x4_vec: x4_vector(),
        }
    }

    /// Check elliptic_genus(x_i vector) = x_i series, coefficientwise.
    pub fn verify(&self, q_prec: i64) -> bool {
        let pairs = [
            (&self.x2_vec, JacobiName::X2),
            (&self.x3_vec, JacobiName::X3),
            (&self.x4_vec, JacobiName::X4),
        ];
        pairs.iter().all(|(v, name)| {
            let w = YWindow::symmetric(default_y_prec(v.dim() as i64, q_prec) - 1);
            elliptic_genus_vector(v, q_prec).agrees_with(&jacobi_series(*name, q_prec, w))
        })
    }
}

impl Default for GeneratorSet {
    fn default() -> Self {
        Self::new()
    }
}

/// The dimension-12 class representing the discriminant.
pub fn delta_vector() -> BordismVector {
    let gens = GeneratorSet::new();
    let x2 = &gens.x2_vec;
    let x3 = &gens.x3_vec;
    let x4 = &gens.x4_vec;
    let p = bordism_product;
    let x2x2 = p(x2, x2);
    let x3x3 = p(x3, x3);
    let x4x4 = p(x4, x4);
    let t1 = p(&p(&x2x2, x2), &x3x3).scale(&rat(-1, 32));
    let t2 = p(&x2x2, &x4x4).scale(&rat(1, 16));
    let t3 = p(&p(x2, &x3x3), x4).scale(&rat(9, 2));
    let t4 = p(&x3x3, &x3x3).scale(&rat_int(-27));
    let t5 = p(&x4x4, x4).scale(&rat_int(-8));
    t1.add(&t2).add(&t3).add(&t4).add(&t5)
}

/// Residual of elliptic_genus(delta_vector) - (g2^3 - 27 g3^2).
pub fn delta_genus_residual(q_prec: i64) -> GSeries {
    let phi = elliptic_genus_vector(&delta_vector(), q_prec);
    let dm = jacobi_series(
        JacobiName::DeltaModular,
        q_prec,
        YWindow::symmetric(default_y_prec(12, q_prec) - 1),
    );
    phi.sub(&dm)
}

/// One row of the graded-dimension report for Q[x1..x4]/(Delta).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientRow {
    pub degree: u32,
    /// monomials in x1..x4 (weights 1..4) of this weight
    pub monomials: u64,
    /// relations contributed by Delta * (weight d-12 monomials)
    pub relations: u64,
    /// graded dimension of the quotient
    pub dim: u64,
    /// number of partitions of d (the dimension of all Chern numbers)
    pub partitions: u64,
}

fn weighted_monomial_count(d: u32) -> u64 {
    let mut count = 0u64;
    for e in 0..=d / 4 {
        for c in 0..=(d - 4 * e) / 3 {
            for b in 0..=(d - 4 * e - 3 * c) / 2 {
                let _ = b;
                count += 1;
            }
        }
    }
    count
}

/// Graded dimensions of Q[x1,x2,x3,x4]/(Delta(x2,x3,x4)) up to max_dim,
/// against the count of all Chern numbers (partitions of d). For d <= 4
/// every Chern number survives; in d = 5 exactly six of the seven do.
pub fn quotient_dimension_report(max_dim: u32) -> Vec<QuotientRow> {
    assert!(max_dim <= 16, "report covers degrees up to 16");
    (0..=max_dim)
        .map(|d| {
            let monomials = weighted_monomial_count(d);
            let relations = if d >= 12 {
                weighted_monomial_count(d - 12)
            } else {
                0
            };
            QuotientRow {
                degree: d,
                monomials,
                relations,
                dim: monomials - relations,
                partitions: partitions_of(d).len() as u64,
            }
        })
        .collect()
}
