//! The acceptance suite: every headline identity as a callable check, shared
//! by the `acceptance` integration test target and the CLI's `verify-all`.
//! All comparisons are exact; the few runtime budgets are part of the
//! criteria and are measured in wall time.

use crate::bordism::{
    bordism_product, k3_vector, s6_vector, x4_vector, Manifold,
};
use crate::cohomology::{LineData, MPoly};
use crate::delta::{delta_genus_residual, delta_vector};
use crate::flops::{
    cp_example_instance, flop_vanishing, gcd_profile, random_instance, s_n_closed_form,
    s_n_twisted, twisted_bundle, FlopInstance, SnRoute,
};
use crate::genera::{
    chi_y_manifold, chi_y_vector, chi_yz_manifold, classical_specializations,
    elliptic_genus_vector, genus_eval, genus_eval_vector, libgober_wood_check,
    unscaled_genus_manifold, GenusSpec,
};
use crate::jacobi::{jacobi_series, verify_delta, verify_weierstrass, JacobiName, YWindow};
use crate::series::{default_y_prec, rat_int, Rational, VarKey};
use num::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub details: String,
}

impl CheckResult {
    fn new(id: u32, name: &str, passed: bool, details: String) -> Self {
        CheckResult {
            id,
            name: name.to_string(),
            passed,
            details,
        }
    }

    pub fn line(&self) -> String {
        format!(
            "criterion {:2} [{}] {} — {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.details
        )
    }
}

/// Seeded configuration for the randomized parts of the suite.
#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    pub seed: u64,
    pub flop_instances: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 0,
            flop_instances: 20,
        }
    }
}

/// Criterion 1: Weierstrass identity to q-order 8, y-window +-10, under 10 s.
pub fn check_weierstrass() -> CheckResult {
    let start = Instant::now();
    let residual = verify_weierstrass(9, YWindow::symmetric(10));
    let elapsed = start.elapsed();
    let ok = residual.is_zero() && elapsed.as_secs_f64() < 10.0;
    CheckResult::new(
        1,
        "Weierstrass identity",
        ok,
        format!(
            "wp'^2 - 4wp^3 + g2 wp + g3 residual {} to q^8, window ±10, {:.2}s",
            if residual.is_zero() { "= 0" } else { "nonzero" },
            elapsed.as_secs_f64()
        ),
    )
}

/// Criterion 2: Delta identity to q-order 6 with vanishing q^0 coefficient.
pub fn check_delta_identity() -> CheckResult {
    let (residual, cusp) = verify_delta(7, YWindow::symmetric(16));
    let ok = residual.is_zero() && cusp.is_zero();
    CheckResult::new(
        2,
        "Delta identity",
        ok,
        format!(
            "g2^3 - 27g3^2 vs x2,x3,x4 polynomial (x4^3 final term): residual {}, cusp q^0 {}",
            if residual.is_zero() { "= 0" } else { "nonzero" },
            if cusp.is_zero() { "= 0" } else { "nonzero" }
        ),
    )
}

/// Criterion 3: Elliptic genus of K3/S6/X4 vectors equals 24wp, wp', 6wp^2 - g2/2
/// coefficientwise to q-order 5.
pub fn check_generator_genera() -> CheckResult {
    let q_prec = 6;
    let names = [
        (k3_vector(), JacobiName::X2, "K3 -> 24wp"),
        (s6_vector(), JacobiName::X3, "S6 -> wp'"),
        (x4_vector(), JacobiName::X4, "X4 -> 6wp^2 - g2/2"),
    ];
    let mut all = true;
    let mut parts = Vec::new();
    for (v, name, label) in &names {
        let w = YWindow::symmetric(default_y_prec(v.dim() as i64, q_prec) - 1);
        let phi = elliptic_genus_vector(v, q_prec);
        let target = jacobi_series(*name, q_prec, w);
        let ok = phi.agrees_with(&target);
        all &= ok;
        parts.push(format!("{}: {}", label, if ok { "ok" } else { "MISMATCH" }));
    }
    CheckResult::new(3, "generator genera", all, parts.join("; "))
}

/// Criterion 4: chi_y of K3/S6/X4 equals the printed table exactly.
pub fn check_chi_y_table() -> CheckResult {
    let rows = [
        (k3_vector(), "t^2*(2 - 20y + 2y^2)"),
        (s6_vector(), "t^3*(-y + y^2)"),
        (x4_vector(), "t^4*(-y + 4y^2 - y^3)"),
    ];
    let mut all = true;
    let mut parts = Vec::new();
    for (v, expect) in &rows {
        let got = chi_y_vector(v).render();
        let ok = got == *expect;
        all &= ok;
        parts.push(format!("{}{}", got, if ok { "" } else { " (MISMATCH)" }));
    }
    CheckResult::new(4, "chi_y table", all, parts.join("; "))
}

/// Criterion 5: s_n of the CP^{n-3} example: 0, 0, 5, 7, 14, 18 for n = 3..8, and
/// closed form / bracket / integration agree for 5 <= n <= 12.
pub fn check_s_n_example() -> CheckResult {
    let expected = [0i64, 0, 5, 7, 14, 18];
    let mut ok = true;
    for (idx, n) in (3..=8u32).enumerate() {
        ok &= s_n_closed_form(n) == rat_int(expected[idx]);
    }
    let mut routes_ok = true;
    for n in 5..=12u32 {
        let inst = cp_example_instance(n);
        let closed = s_n_closed_form(n);
        let bracket = s_n_twisted(&inst, SnRoute::Bracket);
        let integration = s_n_twisted(&inst, SnRoute::Integration);
        routes_ok &= closed == bracket && bracket == integration;
    }
    CheckResult::new(
        5,
        "s_n of the CP^{n-3} example",
        ok && routes_ok,
        format!(
            "values 0,0,5,7,14,18 for n=3..8: {}; three routes agree for n=5..12: {}",
            if ok { "ok" } else { "MISMATCH" },
            if routes_ok { "ok" } else { "MISMATCH" }
        ),
    )
}

/// Criterion 6: Flop vanishing: elliptic genus (all k-terms), chi_y and chi_yz of the
/// twisted bundle vanish to q-order 4 for the fiber, the CP^2 example and
/// seeded random instances over bases of dimension <= 5; under 2 minutes.
pub fn check_flop_vanishing(config: &VerifyConfig) -> CheckResult {
    let start = Instant::now();
    let q_prec = 5;
    let fiber = FlopInstance::new(
        Manifold::projective_space(0),
        [LineData::trivial(), LineData::trivial()],
        [LineData::trivial(), LineData::trivial()],
    );
    let mut failures = Vec::new();
    if !flop_vanishing(&fiber, q_prec) {
        failures.push("fiber".to_string());
    }
    if !flop_vanishing(&cp_example_instance(5), q_prec) {
        failures.push("CP^2 example".to_string());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for i in 0..config.flop_instances {
        let inst = random_instance(&mut rng, 5, i % 2 == 0);
        if !flop_vanishing(&inst, q_prec) {
            failures.push(format!("random instance {}", i));
        }
    }
    let elapsed = start.elapsed();
    let ok = failures.is_empty() && elapsed.as_secs_f64() < 120.0;
    CheckResult::new(
        6,
        "flop vanishing",
        ok,
        format!(
            "fiber + CP^2 example + {} seeded instances at q-order 4: {}; {:.1}s",
            config.flop_instances,
            if failures.is_empty() {
                "all vanish".to_string()
            } else {
                format!("FAILED: {}", failures.join(", "))
            },
            elapsed.as_secs_f64()
        ),
    )
}

/// Criterion 7: All Chern numbers of the fiber F vanish.
pub fn check_fiber_nullbordant() -> CheckResult {
    let fiber = FlopInstance::new(
        Manifold::projective_space(0),
        [LineData::trivial(), LineData::trivial()],
        [LineData::trivial(), LineData::trivial()],
    );
    let numbers = twisted_bundle(&fiber).chern_numbers();
    CheckResult::new(
        7,
        "fiber Chern numbers",
        numbers.is_zero(),
        format!(
            "c_lambda(F) for all partitions of 3: {}",
            if numbers.is_zero() { "all zero" } else { "NONZERO" }
        ),
    )
}

/// Criterion 8: gcd/Novikov classification for 5 <= n <= 40, under 1 minute.
pub fn check_gcd_novikov() -> CheckResult {
    let start = Instant::now();
    let mut mismatches = Vec::new();
    for n in 5..=40u32 {
        let p = gcd_profile(n);
        if !p.matches {
            mismatches.push(format!("n={} got {} expected {}", n, p.odd_gcd, p.expected));
        }
    }
    let elapsed = start.elapsed();
    let ok = mismatches.is_empty() && elapsed.as_secs_f64() < 60.0;
    CheckResult::new(
        8,
        "gcd/Novikov profile",
        ok,
        format!(
            "odd part of bracket gcd matches p/1 classification for n=5..40: {}; {:.1}s",
            if mismatches.is_empty() {
                "ok".to_string()
            } else {
                mismatches.join("; ")
            },
            elapsed.as_secs_f64()
        ),
    )
}

/// Criterion 9: chi_y(delta_vector) = 0 and elliptic_genus(delta_vector) equals
/// g2^3 - 27 g3^2 to q-order 4.
pub fn check_delta_kernel() -> CheckResult {
    let chi = chi_y_vector(&delta_vector());
    let residual = delta_genus_residual(5);
    let ok = chi.is_zero() && residual.is_zero();
    CheckResult::new(
        9,
        "Delta kernel",
        ok,
        format!(
            "chi_y(delta_vector) {}; elliptic genus matches g2^3 - 27g3^2 to q^4: {}",
            if chi.is_zero() { "= 0" } else { "NONZERO" },
            if residual.is_zero() { "ok" } else { "MISMATCH" }
        ),
    )
}

/// Criterion 10: Libgober-Wood residual vanishes for K3, S6, X4, K3^2, K3*S6.
pub fn check_libgober_wood() -> CheckResult {
    let k3 = k3_vector();
    let vectors = [
        ("K3", k3.clone()),
        ("S6", s6_vector()),
        ("X4", x4_vector()),
        ("K3^2", bordism_product(&k3, &k3)),
        ("K3*S6", bordism_product(&k3, &s6_vector())),
    ];
    let mut all = true;
    let mut parts = Vec::new();
    for (name, v) in &vectors {
        let r = libgober_wood_check(v).expect("SU vectors");
        let ok = r.is_zero();
        all &= ok;
        parts.push(format!("{}: {}", name, if ok { "0" } else { "NONZERO" }));
    }
    CheckResult::new(10, "Libgober-Wood relation", all, parts.join("; "))
}

/// Criterion 11: Property suites: multiplicativity, route agreement, the chi_y /
/// elliptic specialization, Serre symmetry with odd-dimension Todd
/// vanishing, Segre pushforward identities, classical specializations.
pub fn check_property_suites(config: &VerifyConfig) -> CheckResult {
    let mut failures: Vec<String> = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(7));

    let pool: Vec<Manifold> = vec![
        Manifold::projective_space(1),
        Manifold::projective_space(2),
        Manifold::projective_space(3),
        Manifold::product(
            &Manifold::projective_space(1),
            &Manifold::projective_space(1),
        ),
    ];

    // genus multiplicativity on randomized products
    for i in 0..6 {
        let a = &pool[rand::Rng::gen_range(&mut rng, 0..pool.len())];
        let b = &pool[rand::Rng::gen_range(&mut rng, 0..pool.len())];
        let prod = Manifold::product(a, b);
        let g = GenusSpec::todd(prod.n as usize);
        let lhs = genus_eval(&prod, &g);
        let rhs = genus_eval(a, &g).mul(&genus_eval(b, &g));
        if !lhs.agrees_with(&rhs) {
            failures.push(format!("Todd multiplicativity #{}", i));
        }
        let chi_prod = chi_y_manifold(&prod);
        let (ca, cb) = (chi_y_manifold(a), chi_y_manifold(b));
        for y_exp in 0..=(prod.n as i64) {
            let mut conv = Rational::zero();
            for j in 0..=y_exp {
                conv += ca.coeff(j, 0) * cb.coeff(y_exp - j, 0);
            }
            if chi_prod.coeff(y_exp, 0) != conv {
                failures.push(format!("chi_y multiplicativity #{}", i));
                break;
            }
        }
    }

    // route agreement: manifold vs vector evaluation
    for m in &pool {
        let g = GenusSpec::todd(m.n as usize);
        if !genus_eval(m, &g).agrees_with(&genus_eval_vector(&m.chern_numbers(), &g)) {
            failures.push(format!("route agreement dim {}", m.n));
        }
        if chi_y_manifold(m) != chi_y_vector(&m.chern_numbers()) {
            failures.push(format!("chi_y route agreement dim {}", m.n));
        }
    }

    // chi_y(X) = (1+y)^n phi(X)(0,-y) at k=0 for all modeled manifolds of
    // dimension <= 4, via alpha = Phi^n phi
    let dims_le_4: Vec<Manifold> = vec![
        Manifold::projective_space(0),
        Manifold::projective_space(1),
        Manifold::projective_space(2),
        Manifold::projective_space(3),
        Manifold::projective_space(4),
        Manifold::product(
            &Manifold::projective_space(1),
            &Manifold::projective_space(1),
        ),
        Manifold::product(
            &Manifold::projective_space(1),
            &Manifold::projective_space(3),
        ),
        Manifold::product(
            &Manifold::projective_space(2),
            &Manifold::projective_space(2),
        ),
        twisted_bundle(&FlopInstance::new(
            Manifold::projective_space(0),
            [LineData::trivial(), LineData::trivial()],
            [LineData::trivial(), LineData::trivial()],
        )),
    ];
    for m in &dims_le_4 {
        let alpha = unscaled_genus_manifold(m, 3);
        let chi = chi_y_manifold(m);
        let q0 = alpha.substitute_y_neg().q_coefficient(0).k_zero_part();
        for e in 0..=(m.n as i64) {
            if q0.coeff(VarKey::default()).coeff(e) != chi.coeff(e, 0) {
                failures.push(format!("chi_y from alpha, dim {}", m.n));
                break;
            }
        }
    }

    // Serre symmetry and odd-dimension Todd vanishing on SU vectors
    let su_vectors = [
        k3_vector(),
        s6_vector(),
        x4_vector(),
        bordism_product(&k3_vector(), &s6_vector()),
    ];
    for v in &su_vectors {
        let chi = chi_y_vector(v);
        let n = v.dim() as i64;
        let sign = if n % 2 == 0 { 1 } else { -1 };
        for i in 0..=n {
            if chi.coeff(i, 0) != chi.coeff(n - i, 0) * rat_int(sign) {
                failures.push(format!("Serre symmetry dim {}", n));
                break;
            }
        }
        if n % 2 == 1 && !chi.coeff(0, 0).is_zero() {
            failures.push(format!("odd-dimension Todd vanishing dim {}", n));
        }
    }

    // Segre pushforward identities: pi_*(u^{r-1}) = 1, lower powers 0, and
    // the projection formula on a random bundle
    {
        let base = crate::cohomology::CohSpace::make_base(&[2, 1]);
        let roots = vec![
            base.h(0),
            base.h(0).scale(&rat_int(-2)).add(&base.h(1)),
            base.h(1),
            MPoly::zero(),
        ];
        let space = base.add_projective_bundle(&roots).unwrap();
        for i in 0..3 {
            if !space.pushforward_u_power(0, i).is_zero() {
                failures.push("Segre: low powers".into());
            }
        }
        if space.pushforward_u_power(0, 3) != space.one_elem() {
            failures.push("Segre: u^{r-1}".into());
        }
        let bounds = space.bounds();
        let beta = space.h(0).mul(&space.h(1), &bounds);
        let i = 5;
        let lhs = space.integrate(&beta.mul(&space.u(0).pow(i, &bounds), &bounds));
        let rhs = space.integrate(
            &beta
                .mul(&space.pushforward_u_power(0, i as usize), &bounds)
                .mul(&space.u(0).pow(3, &bounds), &bounds),
        );
        if lhs != rhs {
            failures.push("Segre: projection formula".into());
        }
    }

    // classical specializations
    for n in 1..=4u32 {
        let (todd, euler, _sig) =
            classical_specializations(&chi_y_manifold(&Manifold::projective_space(n)));
        if todd != rat_int(1) || euler != rat_int(n as i64 + 1) {
            failures.push(format!("classical specializations CP^{}", n));
        }
    }
    let (_, _, sig) = classical_specializations(&chi_y_manifold(&Manifold::projective_space(2)));
    if sig != rat_int(1) {
        failures.push("signature(CP^2)".into());
    }

    let ok = failures.is_empty();
    CheckResult::new(
        11,
        "property suites",
        ok,
        if ok {
            "multiplicativity, route agreement, chi_y/alpha specialization, Serre symmetry, \
             Segre pushforward, classical specializations: all hold"
                .to_string()
        } else {
            format!("FAILED: {}", failures.join(", "))
        },
    )
}

/// Criterion 12: Recorded discrepancy: chi_yz(CP^1) follows the
/// Hirzebruch-Riemann-Roch value t(1 + 2z - y(1 - 2z)) rather than the
/// frequently printed 1 - y + 2z.
pub fn check_chi_yz_cp1_discrepancy() -> CheckResult {
    let chi = chi_yz_manifold(&Manifold::projective_space(1));
    let ok = chi.coeff(0, 0) == rat_int(1)
        && chi.coeff(1, 0) == rat_int(-1)
        && chi.coeff(0, 1) == rat_int(2)
        && chi.coeff(1, 1) == rat_int(2);
    CheckResult::new(
        12,
        "chi_yz(CP^1) discrepancy record",
        ok,
        format!(
            "HRR value {} (z^0 part 1 - y, z-coefficient 2 at y = 0); \
             note: the frequently printed value \"1 - y + 2z\" drops the 2yz term",
            chi.render()
        ),
    )
}

/// Run the full acceptance suite.
pub fn run_all(config: &VerifyConfig) -> Vec<CheckResult> {
    vec![
        check_weierstrass(),
        check_delta_identity(),
        check_generator_genera(),
        check_chi_y_table(),
        check_s_n_example(),
        check_flop_vanishing(config),
        check_fiber_nullbordant(),
        check_gcd_novikov(),
        check_delta_kernel(),
        check_libgober_wood(),
        check_property_suites(config),
        check_chi_yz_cp1_discrepancy(),
    ]
}
