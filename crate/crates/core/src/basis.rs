//! The generalized binomial basis F_n: exact evaluation and fast residues.
//!
//! F_n(x) is the product over k < n of (x - u_k) / (u_n - u_k), with
//! F_0 = 1. Its residue class factors digit by digit: writing n in base q
//! and expanding x pi-adically, F_n(x) is congruent to the product of the
//! single-digit values F_{n_i}(x_i). Those single-digit values live in a
//! q-by-q table computed once per model, which turns residue evaluation
//! into a handful of table lookups with early exit on a zero factor.
//!
//! `fn_eval_exact` is the oracle side of that pair: it evaluates the
//! defining product in exact arithmetic, without reducing fractions, and is
//! deliberately independent of the digit path so the two can be checked
//! against each other.

use crate::domain::{digits_of, DvdModel, VElement};
use crate::error::{Error, Result};
use crate::residue_field::FieldElement;

/// q-by-q table of single-digit coefficient residues: entry (a, b) is the
/// residue of F_a evaluated at the representative with label b.
#[derive(Debug, Clone)]
pub struct DigitCoeffTable {
    q: usize,
    cells: Vec<FieldElement>,
}

impl DigitCoeffTable {
    /// Builds the table entirely in the residue field: with rho_i the
    /// residue of representative i, entry (a, b) is
    /// prod_{k<a} (rho_b - rho_k) / (rho_a - rho_k).
    pub fn build(model: &DvdModel) -> Self {
        let f = model.field();
        let q = model.q() as usize;
        let rho: Vec<FieldElement> = (0..q as u16).map(|i| model.rep_residue(i)).collect();
        let mut cells = vec![FieldElement::ONE; q * q];
        // numerators grow incrementally in a; the denominator is per-row
        let mut nums = vec![FieldElement::ONE; q];
        for a in 1..q {
            let mut den = FieldElement::ONE;
            for k in 0..a {
                den = f.mul(den, f.sub(rho[a], rho[k]));
            }
            let den_inv = f.inv(den).expect("representatives have distinct residues");
            for b in 0..q {
                nums[b] = f.mul(nums[b], f.sub(rho[b], rho[a - 1]));
                cells[a * q + b] = f.mul(nums[b], den_inv);
            }
        }
        DigitCoeffTable { q, cells }
    }

    pub fn get(&self, a: u16, b: u16) -> FieldElement {
        self.cells[a as usize * self.q + b as usize]
    }
}

/// Exact F_n(x): the full node product in the quotient field, numerator and
/// denominator kept unreduced.
pub fn fn_eval_exact(n: u64, x: &VElement, model: &DvdModel) -> VElement {
    let f = model.field();
    if n == 0 {
        return model.one();
    }
    let u_n = model.u_of(n);
    let mut num = None::<VElement>;
    let mut den = None::<VElement>;
    for k in 0..n {
        let u_k = model.u_of(k);
        let nf = x.sub(&u_k, f);
        if nf.is_zero() {
            // x is a node below n, so the whole product vanishes
            return model.zero();
        }
        let df = u_n.sub(&u_k, f);
        num = Some(match num {
            None => nf,
            Some(acc) => acc.mul(&nf, f),
        });
        den = Some(match den {
            None => df,
            Some(acc) => acc.mul(&df, f),
        });
    }
    num.unwrap()
        .div(&den.unwrap(), f)
        .expect("the u_k are pairwise distinct, so the denominator is nonzero")
}

/// Residue of F_n(u_m) through the digit factorization.
pub fn fn_residue(n: u64, m: u64, model: &DvdModel) -> FieldElement {
    let table = model.digit_coeff_table();
    let q = model.q();
    let mut n = n;
    let mut m = m;
    let mut acc = FieldElement::ONE;
    // digits of n beyond those of m read as m_i = 0; digits of m beyond
    // those of n contribute the factor F_0 = 1 and are skipped
    while n > 0 {
        let factor = table.get((n % q) as u16, (m % q) as u16);
        if factor.is_zero() {
            return FieldElement::ZERO;
        }
        acc = model.field().mul(acc, factor);
        n /= q;
        m /= q;
    }
    acc
}

/// Digit product against an explicit label profile. Labels beyond the end
/// of the slice read as 0, so the profile must either cover every digit of
/// n or come from a point whose expansion genuinely ends in zeros.
pub fn fn_residue_labels(n: u64, labels: &[u16], model: &DvdModel) -> FieldElement {
    let table = model.digit_coeff_table();
    let q = model.q();
    let mut n = n;
    let mut i = 0;
    let mut acc = FieldElement::ONE;
    while n > 0 {
        let xi = labels.get(i).copied().unwrap_or(0);
        let factor = table.get((n % q) as u16, xi);
        if factor.is_zero() {
            return FieldElement::ZERO;
        }
        acc = model.field().mul(acc, factor);
        n /= q;
        i += 1;
    }
    acc
}

/// Residue of F_n(x) for any integral x: expands x to as many digits as n
/// has and applies the digit product.
pub fn fn_residue_at(n: u64, x: &VElement, model: &DvdModel) -> Result<FieldElement> {
    if !model.valuation(x).at_least(0) {
        return Err(Error::NotIntegral);
    }
    if n == 0 {
        return Ok(FieldElement::ONE);
    }
    let depth = digits_of(n, model.q()).len();
    let labels = model.expand(x, depth)?;
    Ok(fn_residue_labels(n, &labels, model))
}
