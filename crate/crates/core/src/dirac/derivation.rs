//! Reduction to one degree of freedom and the full replay of the constraint
//! analysis, from the primary constraints to the reduced oscillator.

use num_rational::BigRational;
use serde::Serialize;

use super::constraints::{
    dirac_bracket, lagrange_multipliers, preservation_residual, primary_constraints, velocities, ConstraintSet,
};
use super::parse::{parse_coeff, parse_poly};
use super::poly::{PhasePolynomial, Var};
use super::scalar::{Coeff, Symbol, N_SYMBOLS};
use crate::error::{Error, Result};

/// Reduced Hamiltonian in (x, p) = √2·(x₁, p₁), stored on the x1/p1 slots.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedHamiltonian {
    pub hamiltonian: PhasePolynomial,
    pub mu_star: Coeff,
    pub omega_star: Coeff,
    pub energy: Coeff,
    /// {x, p}_D on the rescaled pair.
    pub bracket: Coeff,
}

impl ReducedHamiltonian {
    /// Printed with the reduced variable names x and p.
    pub fn display(&self) -> String {
        self.hamiltonian.to_string().replace("x1", "x").replace("p1", "p")
    }
}

/// Eliminate x₂ = −2p₁/G and p₂ = Gx₁/2, rescale by √2, and read off
/// p²/2μ* + μ*ω*²x²/2 + E.
pub fn reduce_to_one_dof(h: &PhasePolynomial, cs: &ConstraintSet) -> Result<ReducedHamiltonian> {
    let g = cs
        .primary_coupling()
        .ok_or_else(|| Error::Structural("reduction needs the primary constraint pair".into()))?;
    let g_inv = g.inverse()?;
    let x2 = PhasePolynomial::var(Var::P1).scale(&(&Coeff::int(-2) * &g_inv));
    let p2 = PhasePolynomial::var(Var::X1).scale(&(&g * &Coeff::ratio(1, 2)));
    let sub = h.substitute_some(&[None, Some(x2), None, Some(p2)]);
    if sub.depends_on(Var::X2) || sub.depends_on(Var::P2) {
        return Err(Error::Structural(format!("x2/p2 survive elimination: {sub}")));
    }

    // x₁ = x/√2, p₁ = p/√2: a monomial of even degree d picks up 2^(-d/2)
    let mut rescaled = PhasePolynomial::zero();
    for (e, c) in sub.terms() {
        let d = e[0] + e[2];
        if d % 2 != 0 {
            return Err(Error::Structural(format!(
                "odd-degree term {} cannot be rescaled rationally",
                PhasePolynomial::term(*e, c.clone())
            )));
        }
        let factor = Coeff::rational(BigRational::new(1.into(), num_bigint::BigInt::from(2).pow(d / 2)));
        rescaled = &rescaled + &PhasePolynomial::term(*e, c * &factor);
    }

    let mut c_xx = Coeff::zero();
    let mut c_pp = Coeff::zero();
    let mut energy = Coeff::zero();
    for (e, c) in rescaled.terms() {
        match e {
            [2, 0, 0, 0] => c_xx = c.clone(),
            [0, 0, 2, 0] => c_pp = c.clone(),
            [0, 0, 0, 0] => energy = c.clone(),
            _ => {
                return Err(Error::Structural(format!(
                    "reduced Hamiltonian is not a plain oscillator: {rescaled}"
                )))
            }
        }
    }
    let mu_star = (&Coeff::int(2) * &c_pp)
        .inverse()
        .map_err(|_| Error::Structural(format!("p^2 coefficient {c_pp} is not invertible")))?;
    let omega_star = (&Coeff::int(4) * &(&c_xx * &c_pp))
        .sqrt_monomial()
        .ok_or_else(|| Error::Structural(format!("omega_star^2 = 4*({c_xx})*({c_pp}) has no exact root")))?;

    let b = dirac_bracket(&PhasePolynomial::var(Var::X1), &PhasePolynomial::var(Var::P1), cs);
    let bracket = b
        .as_constant()
        .map(|c| &Coeff::int(2) * &c)
        .ok_or_else(|| Error::Structural(format!("{{x1,p1}}_D = {b} is not constant")))?;

    Ok(ReducedHamiltonian {
        hamiltonian: rescaled,
        mu_star,
        omega_star,
        energy,
        bracket,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Derivation {
    pub label: String,
    /// (name, exact expression) in derivation order.
    pub lines: Vec<(String, String)>,
    pub checks: Vec<Check>,
    /// Exact results behind the printed lines, for substitution checks.
    #[serde(skip)]
    pub values: Vec<(String, PhasePolynomial)>,
}

impl Derivation {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiracReport {
    pub symbolic: Derivation,
    pub specialized: Derivation,
    /// Symbolic results with G = 2, K = 1 substituted, compared to the
    /// specialized run.
    pub consistency: Vec<Check>,
}

impl DiracReport {
    pub fn all_pass(&self) -> bool {
        self.symbolic.all_pass() && self.specialized.all_pass() && self.consistency.iter().all(|c| c.pass)
    }

    pub fn checks(&self) -> impl Iterator<Item = &Check> {
        self.symbolic
            .checks
            .iter()
            .chain(&self.specialized.checks)
            .chain(&self.consistency)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for d in [&self.symbolic, &self.specialized] {
            out.push_str(&format!("# {}\n", d.label));
            for (name, expr) in &d.lines {
                out.push_str(&format!("{name} = {expr}\n"));
            }
            out.push('\n');
        }
        out.push_str("# checks\n");
        for c in self.checks() {
            let tag = if c.pass { "ok" } else { "MISMATCH" };
            out.push_str(&format!(
                "[{tag}] {}: expected {}, got {}\n",
                c.name, c.expected, c.actual
            ));
        }
        let status = if self.all_pass() {
            "all checks passed"
        } else {
            "REGRESSION"
        };
        out.push_str(&format!("# {status}\n"));
        out
    }

    pub fn to_json(&self) -> String {
        crate::format::to_json(self)
    }
}

pub const DEFAULT_HAMILTONIAN: &str = "K/2*x1^2 + K/2*x2^2 + E";

/// Replay symbolically and with G = 2, K = 1.
pub fn replay() -> Result<DiracReport> {
    let int = |i: i64| BigRational::from_integer(i.into());
    let values = (int(2), int(1));
    let symbolic = replay_with(None)?;
    let specialized = replay_with(Some(values.clone()))?;
    let subst = substitution(Some(values));

    let mut consistency = Vec::new();
    for ((name, sym), (_, num)) in symbolic.values.iter().zip(&specialized.values) {
        let (actual, pass) = match sym.specialize(&subst) {
            Ok(p) => (p.to_string(), &p == num),
            Err(e) => (format!("error: {e}"), false),
        };
        consistency.push(Check {
            name: format!("{name} at G=2, K=1"),
            expected: num.to_string(),
            actual,
            pass,
        });
    }
    Ok(DiracReport {
        symbolic,
        specialized,
        consistency,
    })
}

fn substitution(values: Option<(BigRational, BigRational)>) -> [Option<BigRational>; N_SYMBOLS] {
    let mut s: [Option<BigRational>; N_SYMBOLS] = Default::default();
    if let Some((g, k)) = values {
        s[Symbol::G as usize] = Some(g);
        s[Symbol::K as usize] = Some(k);
    }
    s
}

fn matrix_text(m: &[[Coeff; 2]; 2]) -> String {
    format!("[[{}, {}], [{}, {}]]", m[0][0], m[0][1], m[1][0], m[1][1])
}

/// One pass of the analysis. `None` keeps G and K symbolic.
pub fn replay_with(values: Option<(BigRational, BigRational)>) -> Result<Derivation> {
    let label = match &values {
        None => "Dirac constraint analysis (symbolic G, K)".to_string(),
        Some((g, k)) => format!("Dirac constraint analysis (G = {g}, K = {k})"),
    };
    let subst = substitution(values);
    let target = |s: &str| -> Result<PhasePolynomial> { parse_poly(s)?.specialize(&subst) };
    let target_c = |s: &str| -> Result<Coeff> { parse_coeff(s)?.specialize(&subst) };

    let g = target_c("G")?;
    let h = target(DEFAULT_HAMILTONIAN)?;
    let cs = primary_constraints(&g)?;

    let mut lines = Vec::new();
    let mut values: Vec<(String, PhasePolynomial)> = Vec::new();
    let mut checks = Vec::new();
    let mut check = |name: &str, expected: String, actual: String| {
        checks.push(Check {
            name: name.to_string(),
            pass: expected == actual,
            expected,
            actual,
        });
    };

    lines.push(("phi1".to_string(), cs.phis()[0].to_string()));
    lines.push(("phi2".to_string(), cs.phis()[1].to_string()));
    values.push(("phi1".into(), cs.phis()[0].clone()));
    values.push(("phi2".into(), cs.phis()[1].clone()));
    check("phi1", target("p1 + G/2*x2")?.to_string(), cs.phis()[0].to_string());
    check("phi2", target("p2 - G/2*x1")?.to_string(), cs.phis()[1].to_string());

    let c_text = matrix_text(cs.matrix());
    lines.push(("C".into(), c_text.clone()));
    let g_t = target_c("G")?;
    check(
        "C = G*eps",
        matrix_text(&[[Coeff::zero(), g_t.clone()], [-&g_t, Coeff::zero()]]),
        c_text,
    );

    let ci_text = matrix_text(cs.inverse());
    lines.push(("C^-1".into(), ci_text.clone()));
    let inv_t = target_c("1/G")?;
    check(
        "C^-1 = -eps/G",
        matrix_text(&[[Coeff::zero(), -&inv_t], [inv_t, Coeff::zero()]]),
        ci_text,
    );
    check("C * C^-1 = 1", "true".into(), cs.product_is_identity().to_string());

    let pairs = [
        ("{x1,p1}_D", Var::X1, Var::P1, "1/2"),
        ("{x2,p2}_D", Var::X2, Var::P2, "1/2"),
        ("{x1,p2}_D", Var::X1, Var::P2, "0"),
        ("{x2,p1}_D", Var::X2, Var::P1, "0"),
        ("{x1,x2}_D", Var::X1, Var::X2, "-1/G"),
        ("{p1,p2}_D", Var::P1, Var::P2, "-G/4"),
    ];
    for (name, a, b, expect) in pairs {
        let bracket = dirac_bracket(&PhasePolynomial::var(a), &PhasePolynomial::var(b), &cs);
        let v = bracket.to_string();
        values.push((name.to_string(), bracket));
        lines.push((name.to_string(), v.clone()));
        check(name, target(expect)?.to_string(), v);
    }

    let mut strong = Vec::new();
    for (i, phi) in cs.phis().iter().enumerate() {
        for v in Var::ALL {
            let b = dirac_bracket(phi, &PhasePolynomial::var(v), &cs);
            if !b.is_zero() {
                strong.push(format!(
                    "{{phi{},{}}}_D = {b}",
                    i + 1,
                    super::poly::VAR_NAMES[v as usize]
                ));
            }
        }
    }
    let strong_text = if strong.is_empty() {
        "0".to_string()
    } else {
        strong.join("; ")
    };
    lines.push(("{phi_i, v}_D".into(), strong_text.clone()));
    check("strong conditions {phi_i, v}_D", "0".into(), strong_text);

    lines.push(("H0".into(), h.to_string()));
    let lambda = lagrange_multipliers(&h, &cs);
    for (i, (l, expect)) in lambda.iter().zip(["-K/G*x2", "K/G*x1"]).enumerate() {
        let name = format!("lambda{}", i + 1);
        lines.push((name.clone(), l.to_string()));
        values.push((name.clone(), l.clone()));
        check(&name, target(expect)?.to_string(), l.to_string());
    }
    let residual = preservation_residual(&h, &cs, &lambda);
    check(
        "constraint preservation {phi_i, H0} + C_ij lambda_j",
        "0".into(),
        if residual.iter().all(|r| r.is_zero()) {
            "0".into()
        } else {
            format!("{} ; {}", residual[0], residual[1])
        },
    );
    let vel = velocities(&h, &cs, &lambda);
    for i in 0..2 {
        check(
            &format!("x{}_dot = lambda{}", i + 1, i + 1),
            lambda[i].to_string(),
            vel[i].to_string(),
        );
    }

    let reduced = reduce_to_one_dof(&h, &cs)?;
    lines.push(("x2".into(), target("-2/G*p1")?.to_string()));
    lines.push(("p2".into(), target("G/2*x1")?.to_string()));
    lines.push(("H_reduced".into(), reduced.display()));
    lines.push(("mu_star".into(), reduced.mu_star.to_string()));
    lines.push(("omega_star".into(), reduced.omega_star.to_string()));
    lines.push(("{x,p}_D".into(), reduced.bracket.to_string()));
    values.push(("H_reduced".into(), reduced.hamiltonian.clone()));
    values.push(("mu_star".into(), PhasePolynomial::constant(reduced.mu_star.clone())));
    values.push((
        "omega_star".into(),
        PhasePolynomial::constant(reduced.omega_star.clone()),
    ));
    check(
        "mu_star",
        target_c("G^2/(2K)")?.to_string(),
        reduced.mu_star.to_string(),
    );
    check(
        "omega_star",
        target_c("K/G")?.to_string(),
        reduced.omega_star.to_string(),
    );
    check("{x,p}_D", "1".into(), reduced.bracket.to_string());

    // H = p²/2μ* + μ*ω*²x²/2 + E rebuilt from the identified parameters
    let mu = &reduced.mu_star;
    let w = &reduced.omega_star;
    let rebuilt = &(&PhasePolynomial::term([0, 0, 2, 0], (&Coeff::int(2) * mu).inverse()?)
        + &PhasePolynomial::term([2, 0, 0, 0], &(&(mu * w) * w) * &Coeff::ratio(1, 2)))
        + &PhasePolynomial::constant(target_c("E")?);
    check(
        "H_reduced = p^2/(2 mu_star) + mu_star omega_star^2 x^2/2 + E",
        rebuilt.to_string(),
        reduced.hamiltonian.to_string(),
    );

    Ok(Derivation {
        label,
        lines,
        checks,
        values,
    })
}
