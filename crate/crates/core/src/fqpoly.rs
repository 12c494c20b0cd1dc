//! Dense polynomials over F_q in the variable t.
//!
//! Coefficients are stored little-endian and kept canonical: no trailing
//! zeros, the zero polynomial is the empty vector. These are the numerators
//! and denominators of elements in the localization of F_q[t] at (t).

use crate::error::{Error, Result};
use crate::residue_field::{FieldElement, ResidueField};
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FqPoly(Vec<FieldElement>);

impl FqPoly {
    pub fn zero() -> Self {
        FqPoly(Vec::new())
    }

    pub fn one() -> Self {
        FqPoly(vec![FieldElement::ONE])
    }

    pub fn constant(c: FieldElement) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            FqPoly(vec![c])
        }
    }

    pub fn from_coeffs(coeffs: Vec<FieldElement>) -> Self {
        let mut p = FqPoly(coeffs);
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.0
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.0.get(i).copied().unwrap_or(FieldElement::ZERO)
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    /// t-adic order: index of the lowest nonzero coefficient; None for 0.
    pub fn t_order(&self) -> Option<usize> {
        self.0.iter().position(|c| !c.is_zero())
    }

    /// Multiplication by t^k.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![FieldElement::ZERO; k];
        v.extend_from_slice(&self.0);
        FqPoly(v)
    }

    /// Division by t^k; all of the k lowest coefficients must be zero.
    pub fn unshift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        debug_assert!(self.0[..k].iter().all(|c| c.is_zero()));
        FqPoly(self.0[k..].to_vec())
    }

    pub fn add(&self, rhs: &Self, f: &ResidueField) -> Self {
        let n = self.0.len().max(rhs.0.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(f.add(self.coeff(i), rhs.coeff(i)));
        }
        Self::from_coeffs(v)
    }

    pub fn neg(&self, f: &ResidueField) -> Self {
        FqPoly(self.0.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn sub(&self, rhs: &Self, f: &ResidueField) -> Self {
        self.add(&rhs.neg(f), f)
    }

    pub fn mul(&self, rhs: &Self, f: &ResidueField) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut v = vec![FieldElement::ZERO; self.0.len() + rhs.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in rhs.0.iter().enumerate() {
                v[i + j] = f.add(v[i + j], f.mul(a, b));
            }
        }
        Self::from_coeffs(v)
    }

    pub fn scale(&self, c: FieldElement, f: &ResidueField) -> Self {
        Self::from_coeffs(self.0.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// Long division: (quotient, remainder) with deg(rem) < deg(rhs).
    pub fn div_rem(&self, rhs: &Self, f: &ResidueField) -> (Self, Self) {
        assert!(!rhs.is_zero(), "division by the zero polynomial");
        let db = rhs.0.len() - 1;
        if self.0.len() <= db {
            return (Self::zero(), self.clone());
        }
        let lead_inv = f.inv(rhs.0[db]).expect("leading coefficient is nonzero");
        let mut rem = self.0.clone();
        let mut quot = vec![FieldElement::ZERO; rem.len() - db];
        for i in (db..rem.len()).rev() {
            let c = f.mul(rem[i], lead_inv);
            if c.is_zero() {
                continue;
            }
            quot[i - db] = c;
            for (k, &b) in rhs.0.iter().enumerate() {
                rem[i - db + k] = f.sub(rem[i - db + k], f.mul(c, b));
            }
        }
        (Self::from_coeffs(quot), Self::from_coeffs(rem))
    }

    /// Monic greatest common divisor by the Euclidean algorithm.
    pub fn gcd(&self, rhs: &Self, f: &ResidueField) -> Self {
        let (mut a, mut b) = (self.clone(), rhs.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b, f);
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let lead = a.0[a.0.len() - 1];
        a.scale(f.inv(lead).expect("nonzero lead"), f)
    }

    /// Renders coefficients as field codes: "2+1*t+3*t^2", "0" for zero.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        let mut first = true;
        for (i, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                out.push('+');
            }
            first = false;
            match i {
                0 => write!(out, "{}", c.0).unwrap(),
                1 => write!(out, "{}*t", c.0).unwrap(),
                _ => write!(out, "{}*t^{}", c.0, i).unwrap(),
            }
        }
        out
    }

    /// Parses the `render` syntax. Accepts terms `c`, `c*t`, `c*t^k`, `t`,
    /// `t^k` joined by `+`, with coefficients given as field codes.
    pub fn parse(s: &str, q: u64) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial literal".into()));
        }
        let mut coeffs: Vec<FieldElement> = Vec::new();
        for term in s.split('+') {
            let term = term.trim();
            let (code, power) = parse_term(term, q)?;
            if coeffs.len() <= power {
                coeffs.resize(power + 1, FieldElement::ZERO);
            }
            if !coeffs[power].is_zero() {
                return Err(Error::Parse(format!("repeated power t^{power} in '{s}'")));
            }
            coeffs[power] = FieldElement(code);
        }
        Ok(Self::from_coeffs(coeffs))
    }
}

fn parse_term(term: &str, q: u64) -> Result<(u16, usize)> {
    let bad = |m: &str| Error::Parse(format!("bad term '{term}': {m}"));
    let (coeff_part, t_part) = match term.split_once('*') {
        Some((c, t)) => (c.trim(), Some(t.trim())),
        None if term.starts_with('t') => ("1", Some(term)),
        None => (term.trim(), None),
    };
    let code: u64 = coeff_part
        .parse()
        .map_err(|_| bad("coefficient is not an integer"))?;
    if code >= q {
        return Err(bad(&format!("coefficient code {code} not below q = {q}")));
    }
    let power = match t_part {
        None => 0,
        Some("t") => 1,
        Some(t) => {
            let exp = t
                .strip_prefix("t^")
                .ok_or_else(|| bad("expected t or t^k"))?;
            exp.parse().map_err(|_| bad("exponent is not an integer"))?
        }
    };
    Ok((code as u16, power))
}
