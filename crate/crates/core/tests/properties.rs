use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nctrap_core::dirac::{dirac_bracket, parse_poly, poisson, primary_constraints, Coeff, PhasePolynomial, Symbol};
use nctrap_core::exact::parse_rational;
use nctrap_core::spectra::{
    dev_tilde_c_form, dev_tilde_ratio, effective_params, jz_star_signal, jz_tilde_signal, ReducedSystem,
};
use nctrap_core::{c_from, eta_from_c, Error, NCParams, TrapConfig};

fn coeff() -> impl Strategy<Value = Coeff> {
    prop_oneof![
        (-5i64..=5, 1i64..=4).prop_map(|(n, d)| Coeff::ratio(n, d)),
        (-3i64..=3).prop_map(|n| &Coeff::int(n) * &Coeff::symbol(Symbol::G)),
        (1i64..=3).prop_map(|n| &Coeff::ratio(1, n) * &Coeff::symbol(Symbol::K)),
    ]
}

fn poly(max_terms: usize) -> impl Strategy<Value = PhasePolynomial> {
    prop::collection::vec((prop::array::uniform4(0u32..=2), coeff()), 1..=max_terms).prop_map(|terms| {
        let mut p = PhasePolynomial::zero();
        for (mut e, c) in terms {
            // total degree at most 4
            while e.iter().sum::<u32>() > 4 {
                let i = e.iter().position(|&k| k > 0).unwrap();
                e[i] -= 1;
            }
            p = &p + &PhasePolynomial::term(e, c);
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn poisson_antisymmetric(a in poly(4), b in poly(4)) {
        prop_assert_eq!(poisson(&a, &b), -&poisson(&b, &a));
    }

    #[test]
    fn poisson_leibniz(a in poly(3), b in poly(3), c in poly(3)) {
        let lhs = poisson(&a, &(&b * &c));
        let rhs = &(&poisson(&a, &b) * &c) + &(&b * &poisson(&a, &c));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn poisson_jacobi(a in poly(3), b in poly(3), c in poly(3)) {
        let s = &(&poisson(&a, &poisson(&b, &c)) + &poisson(&b, &poisson(&c, &a))) + &poisson(&c, &poisson(&a, &b));
        prop_assert!(s.is_zero());
    }

    #[test]
    fn print_parse_round_trip(a in poly(5)) {
        let text = a.to_string();
        prop_assert_eq!(parse_poly(&text).unwrap(), a, "{}", text);
    }

    #[test]
    fn constraints_strongly_vanish(f in poly(4)) {
        let cs = primary_constraints(&Coeff::symbol(Symbol::G)).unwrap();
        for phi in cs.phis() {
            prop_assert!(dirac_bracket(phi, &f, &cs).is_zero());
        }
    }

    #[test]
    fn eta_c_inverse(theta in 1e-6f64..1e3, c in 1e-3f64..1e3) {
        let eta = eta_from_c(theta, c).unwrap();
        let back = c_from(theta, eta).unwrap();
        prop_assert!((back / c - 1.0).abs() < 1e-14);
    }
}

#[test]
fn stiffness_identity_random() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let trap = TrapConfig::new(
            rng.gen_range(0.1..10.0),
            rng.gen_range(0.1..3.0),
            rng.gen_range(0.0..5.0),
            rng.gen_range(0.1..10.0),
            0.0,
        )
        .unwrap();
        let nc = NCParams::new(rng.gen_range(0.0..0.3), rng.gen_range(0.0..0.3), 1.0).unwrap();
        let ep = effective_params(&trap, &nc);
        let scale = ep.m_omega_p_sq.abs().max(ep.stiffness.abs());
        worst = worst.max(ep.identity_residual().abs() / scale);
    }
    assert!(worst < 1e-13, "{worst}");
}

#[test]
fn commutative_regression() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10_000 {
        let mass = 10f64.powf(rng.gen_range(-3.0..3.0));
        let trap = TrapConfig::new(
            mass,
            10f64.powf(rng.gen_range(-2.0..2.0)),
            10f64.powf(rng.gen_range(-3.0..3.0)),
            10f64.powf(rng.gen_range(-2.0..2.0)),
            0.0,
        )
        .unwrap();
        let nc = NCParams::commutative(1.0);
        let ep = effective_params(&trap, &nc);
        let rel = |a: f64, b: f64| (a / b - 1.0).abs();
        assert!(rel(ep.mass, trap.mass()) < 1e-14);
        assert!(rel(ep.coupling, trap.mass() * trap.omega_c()) < 1e-14);
        assert!(rel(ep.stiffness, trap.kappa()) < 1e-14);
        let star = jz_star_signal(&ep, &nc, 0).unwrap();
        assert!(rel(star.signal.j0_hbar, 0.5) < 1e-14);
    }
}

#[test]
fn commutative_zero_field_is_typed() {
    let trap = TrapConfig::new(1.0, 1.0, 0.0, 1.0, 0.0).unwrap();
    let nc = NCParams::commutative(1.0);
    let ep = effective_params(&trap, &nc);
    assert!(matches!(
        ReducedSystem::from_effective(&ep),
        Err(Error::UndefinedReduction(_))
    ));
    assert!(matches!(jz_star_signal(&ep, &nc, 2), Err(Error::UndefinedReduction(_))));
    assert!(matches!(jz_tilde_signal(&trap, &nc), Err(Error::UndefinedReduction(_))));
}

#[test]
fn dev_tilde_paths_and_monotonicity() {
    let mut prev = f64::INFINITY;
    for k in 0..=120 {
        let c_sq = 10f64.powf(-6.0 + 0.1 * k as f64);
        for (mu, w) in [(1.0, 1.0), (2.5, 0.3), (0.1, 7.0)] {
            let theta: f64 = 0.37;
            let eta = theta / c_sq;
            let a = dev_tilde_ratio(&mu, &w, &theta, &eta);
            let b = dev_tilde_c_form(&mu, &w, &c_sq);
            assert!((a - b).abs() <= 1e-12 * a.abs().max(b.abs()), "{c_sq}: {a} {b}");
        }
        let d = dev_tilde_c_form(&1.0, &1.0, &c_sq);
        assert!(d < prev);
        prev = d;
    }
}

#[test]
fn tilde_rational_example() {
    let trap = TrapConfig::trap_units(0.0).unwrap();
    let nc = NCParams::from_c(0.1, 2.5f64.sqrt(), 1.0).unwrap();
    let s = jz_tilde_signal(&trap, &nc).unwrap();
    assert!((s.j0_hbar - 0.5 * 5.0 / 7.0).abs() < 1e-12);
    let (mu, w, c_sq) = (
        parse_rational("1").unwrap(),
        parse_rational("1").unwrap(),
        parse_rational("5/2").unwrap(),
    );
    let dev = dev_tilde_c_form(&mu, &w, &c_sq);
    assert_eq!(dev, parse_rational("2/7").unwrap());
}

#[test]
fn tilde_signal_below_commutative() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let trap = TrapConfig::trap_units(0.0).unwrap();
    for _ in 0..1000 {
        let nc = NCParams::new(rng.gen_range(1e-6..1.0), rng.gen_range(1e-6..1.0), 1.0).unwrap();
        let s = jz_tilde_signal(&trap, &nc).unwrap();
        assert!(s.j0_hbar < 0.5);
        assert!(s.interval_hbar < 1.0);
    }
}
