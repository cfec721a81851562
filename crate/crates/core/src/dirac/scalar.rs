//! Exact coefficients: Laurent polynomials over Q in the symbols G, K, hbar
//! and E. Division is closed for monomial divisors, which covers every
//! quotient in the constraint analysis.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::rational_sqrt;

pub const SYMBOLS: [&str; 4] = ["G", "K", "hbar", "E"];
pub const N_SYMBOLS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symbol {
    G = 0,
    K = 1,
    Hbar = 2,
    E = 3,
}

impl Symbol {
    pub fn from_name(name: &str) -> Option<Symbol> {
        match name {
            "G" => Some(Symbol::G),
            "K" => Some(Symbol::K),
            "hbar" => Some(Symbol::Hbar),
            "E" => Some(Symbol::E),
            _ => None,
        }
    }
}

pub type SymExp = [i32; N_SYMBOLS];

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Coeff {
    terms: BTreeMap<SymExp, BigRational>,
}

impl Coeff {
    pub fn zero() -> Self {
        Coeff::default()
    }

    pub fn one() -> Self {
        Self::rational(BigRational::one())
    }

    pub fn rational(r: BigRational) -> Self {
        let mut c = Coeff::zero();
        c.add_term([0; N_SYMBOLS], r);
        c
    }

    pub fn int(i: i64) -> Self {
        Self::rational(BigRational::from_integer(BigInt::from(i)))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::rational(BigRational::new(n.into(), d.into()))
    }

    pub fn symbol(s: Symbol) -> Self {
        Self::monomial(unit_exp(s, 1), BigRational::one())
    }

    pub fn monomial(exp: SymExp, r: BigRational) -> Self {
        let mut c = Coeff::zero();
        c.add_term(exp, r);
        c
    }

    fn add_term(&mut self, exp: SymExp, r: BigRational) {
        if r.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp).or_insert_with(BigRational::zero);
        *slot += r;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SymExp, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The rational value when no symbol appears.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&[0; N_SYMBOLS]).cloned(),
            _ => None,
        }
    }

    pub fn as_monomial(&self) -> Option<(SymExp, BigRational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(e, r)| (*e, r.clone()))
        } else {
            None
        }
    }

    pub fn inverse(&self) -> Result<Coeff> {
        match self.as_monomial() {
            Some((e, r)) => Ok(Coeff::monomial(e.map(|k| -k), r.recip())),
            None if self.is_zero() => Err(Error::DegenerateConstraints("division by zero coefficient".into())),
            None => Err(Error::Structural(format!(
                "cannot divide by non-monomial coefficient {self}"
            ))),
        }
    }

    pub fn checked_div(&self, rhs: &Coeff) -> Result<Coeff> {
        Ok(self * &rhs.inverse()?)
    }

    pub fn pow(&self, k: i32) -> Result<Coeff> {
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut out = Coeff::one();
        for _ in 0..k.unsigned_abs() {
            out = &out * &base;
        }
        Ok(out)
    }

    /// Square root of a monomial with even exponents and a perfect-square
    /// rational part; the positive branch.
    pub fn sqrt_monomial(&self) -> Option<Coeff> {
        let (e, r) = self.as_monomial()?;
        if e.iter().any(|k| k % 2 != 0) {
            return None;
        }
        Some(Coeff::monomial(e.map(|k| k / 2), rational_sqrt(&r)?))
    }

    /// Substitute rational values for every symbol.
    pub fn eval(&self, values: &[BigRational; N_SYMBOLS]) -> Result<BigRational> {
        let mut acc = BigRational::zero();
        for (e, r) in &self.terms {
            let mut t = r.clone();
            for (k, &p) in e.iter().enumerate() {
                if p != 0 {
                    if values[k].is_zero() && p < 0 {
                        return Err(Error::Domain(format!("{} = 0 in a denominator", SYMBOLS[k])));
                    }
                    t *= num_traits::pow::pow(values[k].clone(), p.unsigned_abs() as usize).pow_sign(p);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Substitute values for a subset of symbols, keeping the others.
    pub fn specialize(&self, values: &[Option<BigRational>; N_SYMBOLS]) -> Result<Coeff> {
        let mut out = Coeff::zero();
        for (e, r) in &self.terms {
            let mut exp = *e;
            let mut t = r.clone();
            for k in 0..N_SYMBOLS {
                if let (Some(v), p) = (&values[k], e[k]) {
                    if p < 0 && v.is_zero() {
                        return Err(Error::Domain(format!("{} = 0 in a denominator", SYMBOLS[k])));
                    }
                    t *= num_traits::pow::pow(v.clone(), p.unsigned_abs() as usize).pow_sign(p);
                    exp[k] = 0;
                }
            }
            out.add_term(exp, t);
        }
        Ok(out)
    }

    /// Canonical order: total degree descending, then exponents descending.
    fn ordered(&self) -> Vec<(&SymExp, &BigRational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| {
            let da: i32 = a.0.iter().sum();
            let db: i32 = b.0.iter().sum();
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        v
    }

    /// True when the printed form is a single signed product/quotient, so it
    /// can be used as a factor without parentheses.
    pub fn is_single_term(&self) -> bool {
        self.terms.len() <= 1
    }

    /// First printed term is negative.
    pub fn starts_negative(&self) -> bool {
        self.ordered().first().map(|(_, r)| r.is_negative()).unwrap_or(false)
    }
}

trait PowSign {
    fn pow_sign(self, p: i32) -> Self;
}

impl PowSign for BigRational {
    fn pow_sign(self, p: i32) -> Self {
        if p < 0 {
            self.recip()
        } else {
            self
        }
    }
}

fn unit_exp(s: Symbol, k: i32) -> SymExp {
    let mut e = [0; N_SYMBOLS];
    e[s as usize] = k;
    e
}

impl Add for &Coeff {
    type Output = Coeff;
    fn add(self, rhs: &Coeff) -> Coeff {
        let mut out = self.clone();
        for (e, r) in &rhs.terms {
            out.add_term(*e, r.clone());
        }
        out
    }
}

impl Sub for &Coeff {
    type Output = Coeff;
    fn sub(self, rhs: &Coeff) -> Coeff {
        self + &(-rhs)
    }
}

impl Neg for &Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        Coeff {
            terms: self.terms.iter().map(|(e, r)| (*e, -r.clone())).collect(),
        }
    }
}

impl Mul for &Coeff {
    type Output = Coeff;
    fn mul(self, rhs: &Coeff) -> Coeff {
        let mut out = Coeff::zero();
        for (ea, ra) in &self.terms {
            for (eb, rb) in &rhs.terms {
                let mut e = *ea;
                for k in 0..N_SYMBOLS {
                    e[k] += eb[k];
                }
                out.add_term(e, ra * rb);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Coeff {
            type Output = Coeff;
            fn $m(self, rhs: Coeff) -> Coeff {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        -&self
    }
}

fn sym_factor(k: usize, p: i32) -> String {
    if p == 1 {
        SYMBOLS[k].to_string()
    } else {
        format!("{}^{}", SYMBOLS[k], p)
    }
}

/// One term `r·Π sᵏ` in fraction style, without sign: `G^2/(2K)`, `1/G`, `G/4`.
fn fmt_term_abs(e: &SymExp, r: &BigRational) -> String {
    let num = r.numer().abs();
    let den = r.denom().clone();
    let up: Vec<String> = (0..N_SYMBOLS)
        .filter(|&k| e[k] > 0)
        .map(|k| sym_factor(k, e[k]))
        .collect();
    let down: Vec<String> = (0..N_SYMBOLS)
        .filter(|&k| e[k] < 0)
        .map(|k| sym_factor(k, -e[k]))
        .collect();

    let numerator = match (num.is_one(), up.is_empty()) {
        (true, true) => "1".to_string(),
        (true, false) => up.join("*"),
        (false, true) => num.to_string(),
        (false, false) => format!("{}{}", num, up.join("*")),
    };
    let denominator = match (den.is_one(), down.is_empty()) {
        (true, true) => return numerator,
        (true, false) => down.join("*"),
        (false, true) => den.to_string(),
        (false, false) => format!("{}{}", den, down.join("*")),
    };
    let factors = down.len() + usize::from(!den.is_one());
    if factors > 1 {
        format!("{numerator}/({denominator})")
    } else {
        format!("{numerator}/{denominator}")
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.ordered();
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, r)) in terms.iter().enumerate() {
            let body = fmt_term_abs(e, r);
            match (i, r.is_negative()) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => f.write_str(&body)?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Coeff({self})")
    }
}
