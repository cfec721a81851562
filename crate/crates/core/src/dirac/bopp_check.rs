//! The linear shift realizing the deformed algebra, checked with exact brackets.

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::{poisson, PhasePolynomial, Var};
use super::scalar::Coeff;
use crate::bopp::BoppMap;
use crate::exact::ratio_to_f64;

/// (x̂₁, x̂₂, p̂₁, p̂₂)/ξ as polynomials: x_i − (θ/2ħ)ε_ij p_j and p_i + (η/2ħ)ε_ij x_j.
pub fn bopp_polynomials(theta: &BigRational, eta: &BigRational, hbar: &BigRational) -> [PhasePolynomial; 4] {
    let two_hbar = BigRational::from_integer(2.into()) * hbar;
    let a = Coeff::rational(theta / &two_hbar);
    let b = Coeff::rational(eta / &two_hbar);
    let v = PhasePolynomial::var;
    [
        &v(Var::X1) - &v(Var::P2).scale(&a),
        &v(Var::X2) + &v(Var::P1).scale(&a),
        &v(Var::P1) + &v(Var::X2).scale(&b),
        &v(Var::P2) - &v(Var::X1).scale(&b),
    ]
}

/// ħ times the brackets of the deformed variables, i.e. the commutators divided by i.
#[derive(Debug, Clone, PartialEq)]
pub struct BoppBrackets {
    pub xi_sq: BigRational,
    pub x1x2: BigRational,
    pub p1p2: BigRational,
    /// [i][j] = ħ{x̂_i, p̂_j}
    pub xp: [[BigRational; 2]; 2],
    pub target_x1x2: BigRational,
    pub target_p1p2: BigRational,
    pub hbar: BigRational,
}

impl BoppBrackets {
    /// All brackets equal ξ²θ, ξ²η and ħδ_ij exactly.
    pub fn exact(&self) -> bool {
        let xp_ok = (0..2)
            .all(|i| (0..2).all(|j| self.xp[i][j] == if i == j { self.hbar.clone() } else { BigRational::zero() }));
        xp_ok && self.x1x2 == self.target_x1x2 && self.p1p2 == self.target_p1p2
    }
}

pub fn bopp_bracket_check(theta: &BigRational, eta: &BigRational, hbar: &BigRational) -> BoppBrackets {
    let four = BigRational::from_integer(4.into());
    let xi_sq = BigRational::one() / (BigRational::one() + theta * eta / (four * hbar * hbar));
    let vars = bopp_polynomials(theta, eta, hbar);
    let bracket = |a: usize, b: usize| -> BigRational {
        let c = poisson(&vars[a], &vars[b])
            .as_constant()
            .expect("linear maps have constant brackets");
        c.as_rational().expect("no symbols") * &xi_sq * hbar
    };
    BoppBrackets {
        x1x2: bracket(0, 1),
        p1p2: bracket(2, 3),
        xp: [[bracket(0, 2), bracket(0, 3)], [bracket(1, 2), bracket(1, 3)]],
        target_x1x2: &xi_sq * theta,
        target_p1p2: &xi_sq * eta,
        hbar: hbar.clone(),
        xi_sq,
    }
}

/// Largest relative gap between the floating-point map and ξ times the
/// exact polynomial coefficients.
pub fn bopp_matrix_gap(map: &BoppMap, theta: &BigRational, eta: &BigRational, hbar: &BigRational) -> f64 {
    let polys = bopp_polynomials(theta, eta, hbar);
    let check = bopp_bracket_check(theta, eta, hbar);
    let xi = ratio_to_f64(&check.xi_sq).sqrt();
    let mut gap: f64 = 0.0;
    for (row, poly) in polys.iter().enumerate() {
        for col in 0..4 {
            let mut e = [0; 4];
            e[col] = 1;
            let exact = poly.coeff(&e).as_rational().map(|r| ratio_to_f64(&r)).unwrap_or(0.0) * xi;
            let got = map.matrix[row][col];
            let scale = exact.abs().max(f64::MIN_POSITIVE);
            gap = gap.max((got - exact).abs() / scale.max(1e-300));
        }
    }
    gap
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bopp::bopp_map;
    use crate::exact::parse_rational;
    use crate::nc::NCParams;

    fn q(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn deformed_algebra_is_exact() {
        for (t, e) in [("0.1", "0.04"), ("0", "0"), ("3", "7/5"), ("1/3", "0")] {
            let b = bopp_bracket_check(&q(t), &q(e), &q("1"));
            assert!(b.exact(), "{t} {e}: {b:?}");
        }
        let b = bopp_bracket_check(&q("0.1"), &q("0.04"), &q("1"));
        assert_eq!(b.xi_sq, q("1000/1001"));
        assert_eq!(b.x1x2, q("100/1001"));
        // non-unit ħ
        assert!(bopp_bracket_check(&q("2"), &q("5"), &q("3/2")).exact());
    }

    #[test]
    fn float_map_matches_polynomials() {
        let m = bopp_map(&NCParams::new(0.1, 0.04, 1.0).unwrap());
        let gap = bopp_matrix_gap(&m, &q("0.1"), &q("0.04"), &q("1"));
        assert!(gap < 1e-15, "{gap}");
    }
}
