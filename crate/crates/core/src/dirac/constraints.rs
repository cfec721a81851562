use super::poly::{poisson, PhasePolynomial, Var};
use super::scalar::Coeff;
use crate::error::{Error, Result};

/// A pair of second-class constraints with a constant, invertible bracket matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintSet {
    phis: [PhasePolynomial; 2],
    c: [[Coeff; 2]; 2],
    c_inv: [[Coeff; 2]; 2],
}

impl ConstraintSet {
    /// Computes C_ij = {φ_i, φ_j} and its inverse. Only two constraints with a
    /// phase-space independent bracket are supported.
    pub fn new(phis: Vec<PhasePolynomial>) -> Result<Self> {
        let phis: [PhasePolynomial; 2] = phis
            .try_into()
            .map_err(|v: Vec<_>| Error::Structural(format!("expected 2 constraints, got {}", v.len())))?;
        let mut c: [[Coeff; 2]; 2] = Default::default();
        for i in 0..2 {
            for j in 0..2 {
                let b = poisson(&phis[i], &phis[j]);
                c[i][j] = b
                    .as_constant()
                    .ok_or_else(|| Error::Structural(format!("{{phi{},phi{}}} = {b} is not constant", i + 1, j + 1)))?;
            }
        }
        if c[0][1] != -&c[1][0] || !c[0][0].is_zero() || !c[1][1].is_zero() {
            return Err(Error::Structural("constraint matrix is not antisymmetric".into()));
        }
        if c[0][1].is_zero() {
            return Err(Error::DegenerateConstraints(
                "{phi1, phi2} = 0: constraint matrix is singular".into(),
            ));
        }
        let inv = c[0][1].inverse()?;
        let c_inv = [[Coeff::zero(), -&inv], [inv, Coeff::zero()]];
        let cs = ConstraintSet { phis, c, c_inv };
        if !cs.product_is_identity() {
            return Err(Error::Consistency("C * C^-1 != 1".into()));
        }
        Ok(cs)
    }

    pub fn phis(&self) -> &[PhasePolynomial; 2] {
        &self.phis
    }

    pub fn matrix(&self) -> &[[Coeff; 2]; 2] {
        &self.c
    }

    pub fn inverse(&self) -> &[[Coeff; 2]; 2] {
        &self.c_inv
    }

    pub fn product_is_identity(&self) -> bool {
        (0..2).all(|i| {
            (0..2).all(|j| {
                let s = &(&self.c[i][0] * &self.c_inv[0][j]) + &(&self.c[i][1] * &self.c_inv[1][j]);
                s == if i == j { Coeff::one() } else { Coeff::zero() }
            })
        })
    }

    /// The coupling G when the constraints have the primary form
    /// φ₁ = p₁ + (G/2)x₂, φ₂ = p₂ − (G/2)x₁.
    pub fn primary_coupling(&self) -> Option<Coeff> {
        let g = self.c[0][1].clone();
        let expect = primary_phis(&g);
        (expect == self.phis).then_some(g)
    }
}

fn primary_phis(g: &Coeff) -> [PhasePolynomial; 2] {
    let half = g * &Coeff::ratio(1, 2);
    [
        &PhasePolynomial::var(Var::P1) + &PhasePolynomial::var(Var::X2).scale(&half),
        &PhasePolynomial::var(Var::P2) - &PhasePolynomial::var(Var::X1).scale(&half),
    ]
}

/// φ_i = p_i + (G/2)ε_ij x_j.
pub fn primary_constraints(g: &Coeff) -> Result<ConstraintSet> {
    if g.is_zero() {
        return Err(Error::DegenerateConstraints(
            "G = 0: constraint matrix is singular".into(),
        ));
    }
    ConstraintSet::new(primary_phis(g).to_vec())
}

/// {A,B}_D = {A,B} − Σ_ij {A,φ_i}(C⁻¹)_ij{φ_j,B}.
pub fn dirac_bracket(a: &PhasePolynomial, b: &PhasePolynomial, cs: &ConstraintSet) -> PhasePolynomial {
    let mut out = poisson(a, b);
    let a_phi: Vec<_> = cs.phis.iter().map(|phi| poisson(a, phi)).collect();
    let phi_b: Vec<_> = cs.phis.iter().map(|phi| poisson(phi, b)).collect();
    for i in 0..2 {
        for j in 0..2 {
            if cs.c_inv[i][j].is_zero() {
                continue;
            }
            out = &out - &(&a_phi[i] * &phi_b[j]).scale(&cs.c_inv[i][j]);
        }
    }
    out
}

/// λ solving C·λ = −{φ, H}.
pub fn lagrange_multipliers(h: &PhasePolynomial, cs: &ConstraintSet) -> [PhasePolynomial; 2] {
    let rhs: Vec<_> = cs.phis.iter().map(|phi| -&poisson(phi, h)).collect();
    std::array::from_fn(|i| &rhs[0].scale(&cs.c_inv[i][0]) + &rhs[1].scale(&cs.c_inv[i][1]))
}

/// {φ_i, H} + Σ_j C_ij λ_j, which vanishes when the constraints are preserved.
pub fn preservation_residual(
    h: &PhasePolynomial,
    cs: &ConstraintSet,
    lambda: &[PhasePolynomial; 2],
) -> [PhasePolynomial; 2] {
    std::array::from_fn(|i| {
        let mut r = poisson(&cs.phis[i], h);
        for j in 0..2 {
            r = &r + &lambda[j].scale(&cs.c[i][j]);
        }
        r
    })
}

/// Total velocities ẋ_i = {x_i, H} + Σ_k λ_k ∂φ_k/∂p_i.
pub fn velocities(h: &PhasePolynomial, cs: &ConstraintSet, lambda: &[PhasePolynomial; 2]) -> [PhasePolynomial; 2] {
    std::array::from_fn(|i| {
        let mut v = poisson(&PhasePolynomial::var(Var::x(i)), h);
        for k in 0..2 {
            v = &v + &(&lambda[k] * &cs.phis[k].derivative(Var::p(i)));
        }
        v
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirac::parse::{parse_coeff, parse_poly};
    use crate::dirac::scalar::Symbol;

    fn g() -> Coeff {
        Coeff::symbol(Symbol::G)
    }

    fn var(v: Var) -> PhasePolynomial {
        PhasePolynomial::var(v)
    }

    fn konst(s: &str) -> PhasePolynomial {
        PhasePolynomial::constant(parse_coeff(s).unwrap())
    }

    #[test]
    fn matrix_for_g_two() {
        let cs = primary_constraints(&Coeff::int(2)).unwrap();
        let c = cs.matrix();
        assert_eq!(c[0][1], Coeff::int(2));
        assert_eq!(c[1][0], Coeff::int(-2));
        let ci = cs.inverse();
        assert_eq!(ci[0][1], Coeff::ratio(-1, 2));
        assert_eq!(ci[1][0], Coeff::ratio(1, 2));
        assert!(cs.product_is_identity());
        assert!(matches!(
            primary_constraints(&Coeff::zero()),
            Err(Error::DegenerateConstraints(_))
        ));
    }

    #[test]
    fn dirac_brackets_symbolic() {
        let cs = primary_constraints(&g()).unwrap();
        assert_eq!(dirac_bracket(&var(Var::X1), &var(Var::P1), &cs), konst("1/2"));
        assert_eq!(dirac_bracket(&var(Var::X2), &var(Var::P2), &cs), konst("1/2"));
        assert!(dirac_bracket(&var(Var::X1), &var(Var::P2), &cs).is_zero());
        assert_eq!(dirac_bracket(&var(Var::X1), &var(Var::X2), &cs), konst("-1/G"));
        assert_eq!(dirac_bracket(&var(Var::P1), &var(Var::P2), &cs), konst("-G/4"));
        for phi in cs.phis() {
            for v in Var::ALL {
                assert!(dirac_bracket(phi, &var(v), &cs).is_zero());
            }
        }
    }

    #[test]
    fn multipliers() {
        let cs = primary_constraints(&g()).unwrap();
        let h = parse_poly("K/2*x1^2 + K/2*x2^2 + E").unwrap();
        let lambda = lagrange_multipliers(&h, &cs);
        assert_eq!(lambda[0], parse_poly("-K/G*x2").unwrap());
        assert_eq!(lambda[1], parse_poly("K/G*x1").unwrap());
        assert!(preservation_residual(&h, &cs, &lambda).iter().all(|r| r.is_zero()));
        let v = velocities(&h, &cs, &lambda);
        assert_eq!(v, lambda);

        let cs2 = primary_constraints(&Coeff::int(2)).unwrap();
        let l = lagrange_multipliers(&parse_poly("7").unwrap(), &cs2);
        assert!(l.iter().all(|p| p.is_zero()));
    }

    #[test]
    fn structural_checks() {
        assert!(matches!(
            ConstraintSet::new(vec![var(Var::P1)]),
            Err(Error::Structural(_))
        ));
        // bracket depends on phase space
        let bad = ConstraintSet::new(vec![parse_poly("p1 + x2^2").unwrap(), parse_poly("p2").unwrap()]);
        assert!(matches!(bad, Err(Error::Structural(_))));
        let deg = ConstraintSet::new(vec![var(Var::P1), var(Var::P2)]);
        assert!(matches!(deg, Err(Error::DegenerateConstraints(_))));
        let cs = primary_constraints(&g()).unwrap();
        assert_eq!(cs.primary_coupling(), Some(g()));
        let other = ConstraintSet::new(vec![var(Var::P1), var(Var::X1)]).unwrap();
        assert_eq!(other.primary_coupling(), None);
    }
}
