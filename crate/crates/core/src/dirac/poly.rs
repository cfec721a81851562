use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;

use super::scalar::{Coeff, N_SYMBOLS};
use crate::error::Result;

pub const VAR_NAMES: [&str; 4] = ["x1", "x2", "p1", "p2"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    X1 = 0,
    X2 = 1,
    P1 = 2,
    P2 = 3,
}

impl Var {
    pub const ALL: [Var; 4] = [Var::X1, Var::X2, Var::P1, Var::P2];

    pub fn from_name(name: &str) -> Option<Var> {
        VAR_NAMES.iter().position(|v| *v == name).map(|i| Var::ALL[i])
    }

    pub fn x(i: usize) -> Var {
        [Var::X1, Var::X2][i]
    }

    pub fn p(i: usize) -> Var {
        [Var::P1, Var::P2][i]
    }
}

pub type Exp = [u32; 4];

/// Polynomial in (x1, x2, p1, p2) with exact [`Coeff`] coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct PhasePolynomial {
    terms: BTreeMap<Exp, Coeff>,
}

impl PhasePolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Coeff) -> Self {
        Self::term([0; 4], c)
    }

    pub fn var(v: Var) -> Self {
        let mut e = [0; 4];
        e[v as usize] = 1;
        Self::term(e, Coeff::one())
    }

    pub fn term(exp: Exp, c: Coeff) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, c);
        p
    }

    fn add_term(&mut self, exp: Exp, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exp) {
            Some(slot) => {
                let sum = &*slot + &c;
                if sum.is_zero() {
                    self.terms.remove(&exp);
                } else {
                    *slot = sum;
                }
            }
            None => {
                self.terms.insert(exp, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &Coeff)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: &Exp) -> Coeff {
        self.terms.get(exp).cloned().unwrap_or_default()
    }

    /// The constant value when the polynomial has no phase-space dependence.
    pub fn as_constant(&self) -> Option<Coeff> {
        match self.terms.len() {
            0 => Some(Coeff::zero()),
            1 => self.terms.get(&[0; 4]).cloned(),
            _ => None,
        }
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn depends_on(&self, v: Var) -> bool {
        self.terms.keys().any(|e| e[v as usize] > 0)
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        let mut out = Self::zero();
        for (e, k) in &self.terms {
            out.add_term(*e, k * c);
        }
        out
    }

    pub fn derivative(&self, v: Var) -> Self {
        let i = v as usize;
        let mut out = Self::zero();
        for (e, k) in &self.terms {
            if e[i] > 0 {
                let mut d = *e;
                d[i] -= 1;
                out.add_term(d, k * &Coeff::int(e[i] as i64));
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::constant(Coeff::one());
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Replace each variable by a polynomial.
    pub fn substitute(&self, images: &[PhasePolynomial; 4]) -> Self {
        let mut out = Self::zero();
        for (e, k) in &self.terms {
            let mut t = Self::constant(k.clone());
            for (i, &n) in e.iter().enumerate() {
                if n > 0 {
                    t = &t * &images[i].pow(n);
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Replace some variables, keeping the others.
    pub fn substitute_some(&self, images: &[Option<PhasePolynomial>; 4]) -> Self {
        let full: [PhasePolynomial; 4] =
            std::array::from_fn(|i| images[i].clone().unwrap_or_else(|| Self::var(Var::ALL[i])));
        self.substitute(&full)
    }

    /// Specialize symbols in every coefficient.
    pub fn specialize(&self, values: &[Option<BigRational>; N_SYMBOLS]) -> Result<Self> {
        let mut out = Self::zero();
        for (e, k) in &self.terms {
            out.add_term(*e, k.specialize(values)?);
        }
        Ok(out)
    }

    /// Canonical print order: total degree descending, then exponents descending.
    pub fn ordered_terms(&self) -> Vec<(&Exp, &Coeff)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        v
    }
}

/// Canonical Poisson bracket {A, B} = Σ_i (∂A/∂x_i ∂B/∂p_i − ∂A/∂p_i ∂B/∂x_i).
pub fn poisson(a: &PhasePolynomial, b: &PhasePolynomial) -> PhasePolynomial {
    let mut out = PhasePolynomial::zero();
    for i in 0..2 {
        let (x, p) = (Var::x(i), Var::p(i));
        out = &out + &(&a.derivative(x) * &b.derivative(p));
        out = &out - &(&a.derivative(p) * &b.derivative(x));
    }
    out
}

impl Add for &PhasePolynomial {
    type Output = PhasePolynomial;
    fn add(self, rhs: &PhasePolynomial) -> PhasePolynomial {
        let mut out = self.clone();
        for (e, k) in &rhs.terms {
            out.add_term(*e, k.clone());
        }
        out
    }
}

impl Sub for &PhasePolynomial {
    type Output = PhasePolynomial;
    fn sub(self, rhs: &PhasePolynomial) -> PhasePolynomial {
        self + &(-rhs)
    }
}

impl Neg for &PhasePolynomial {
    type Output = PhasePolynomial;
    fn neg(self) -> PhasePolynomial {
        self.scale(&Coeff::int(-1))
    }
}

impl Mul for &PhasePolynomial {
    type Output = PhasePolynomial;
    fn mul(self, rhs: &PhasePolynomial) -> PhasePolynomial {
        let mut out = PhasePolynomial::zero();
        for (ea, ka) in &self.terms {
            for (eb, kb) in &rhs.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]];
                out.add_term(e, ka * kb);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for PhasePolynomial {
            type Output = PhasePolynomial;
            fn $m(self, rhs: PhasePolynomial) -> PhasePolynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for PhasePolynomial {
    type Output = PhasePolynomial;
    fn neg(self) -> PhasePolynomial {
        -&self
    }
}

fn fmt_monomial(e: &Exp) -> String {
    let parts: Vec<String> = (0..4)
        .filter(|&i| e[i] > 0)
        .map(|i| {
            if e[i] == 1 {
                VAR_NAMES[i].to_string()
            } else {
                format!("{}^{}", VAR_NAMES[i], e[i])
            }
        })
        .collect();
    parts.join("*")
}

/// Prints `G/2*x2`, `(G + K)*x1`, `x1^2*p1`; parses back to the same value.
impl fmt::Display for PhasePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.ordered_terms();
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, k)) in terms.into_iter().enumerate() {
            let mono = fmt_monomial(e);
            let single = k.is_single_term();
            let negative = single && k.starts_negative();
            let mag = if negative { -k } else { k.clone() };
            let body = match (mono.is_empty(), single, mag == Coeff::one()) {
                (true, _, _) => mag.to_string(),
                (false, true, true) => mono,
                (false, true, false) => format!("{mag}*{mono}"),
                (false, false, _) => format!("({mag})*{mono}"),
            };
            match (i, negative) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => f.write_str(&body)?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PhasePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}
