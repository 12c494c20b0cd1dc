//! Residue-class counts and their generating polynomials in
//! Z[x]/(x^{q-1}-1).
//!
//! For fixed n, eps_j counts the m in [0, n] whose coefficient residue
//! F_m(u_n) is the j-th power of the primitive root; the zero class is
//! tracked separately so the counts partition [0, n]. The generating
//! polynomial G_n collects the eps_j as coefficients. Because residues
//! factor digit by digit, G_n is congruent mod x^{q-1}-1 to the product of
//! the single-digit polynomials G_{n_i} — equivalently, the product over
//! digit values j of G_j raised to the number of times j occurs in the
//! base-q expansion of n. `verify_main_theorem` checks that identity by
//! comparing reduced coefficient vectors, which both sides already are.

use crate::basis::fn_residue;
use crate::domain::{digits_of, DvdModel};
use crate::error::{Error, Result};
use crate::words::{z_of, DigitWord};
use serde::Serialize;

/// A class in Z[x]/(x^{q-1}-1) with nonnegative integer coefficients,
/// stored as the reduced representative of degree < q-1 (length 1 when
/// q = 2).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CyclicPoly {
    q: u64,
    coeffs: Vec<u64>,
}

impl CyclicPoly {
    pub fn one(q: u64) -> Self {
        let mut coeffs = vec![0; (q - 1) as usize];
        coeffs[0] = 1;
        CyclicPoly { q, coeffs }
    }

    pub fn from_coeffs(q: u64, coeffs: Vec<u64>) -> Result<Self> {
        if coeffs.len() != (q - 1) as usize {
            return Err(Error::LengthMismatch {
                left: (q - 1) as usize,
                right: coeffs.len(),
            });
        }
        Ok(CyclicPoly { q, coeffs })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// The coefficient sum, i.e. the value at x = 1.
    pub fn eval_at_one(&self) -> u64 {
        self.coeffs.iter().sum()
    }

    /// Human-readable form like "4+2x+x^3"; "0" for the zero class.
    pub fn render(&self) -> String {
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            terms.push(match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "x".to_string(),
                (1, c) => format!("{c}x"),
                (i, 1) => format!("x^{i}"),
                (i, c) => format!("{c}x^{i}"),
            });
        }
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join("+")
        }
    }
}

/// Cyclic convolution: coefficient k of the product collects all i + j
/// congruent to k mod q-1.
pub fn cyclic_mul(a: &CyclicPoly, b: &CyclicPoly) -> Result<CyclicPoly> {
    if a.coeffs.len() != b.coeffs.len() {
        return Err(Error::LengthMismatch {
            left: a.coeffs.len(),
            right: b.coeffs.len(),
        });
    }
    let n = a.coeffs.len();
    let mut out = vec![0u64; n];
    for (i, &ai) in a.coeffs.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.coeffs.iter().enumerate() {
            let k = (i + j) % n;
            out[k] += ai * bj;
        }
    }
    Ok(CyclicPoly {
        q: a.q,
        coeffs: out,
    })
}

/// The counts (eps_0..eps_{q-2}) plus the zero class for one argument n.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistributionCounts {
    pub n: u64,
    pub eps: Vec<u64>,
    pub zero_count: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EpsMethod {
    /// Classify every F_m(u_n) for m in [0, n] directly.
    BruteForce,
    /// Convolve the single-digit count vectors along the digits of n.
    Convolution,
}

pub fn eps_counts(n: u64, model: &DvdModel, method: EpsMethod) -> DistributionCounts {
    match method {
        EpsMethod::BruteForce => {
            let f = model.field();
            let mut eps = vec![0u64; (model.q() - 1) as usize];
            let mut zero_count = 0u64;
            for m in 0..=n {
                let r = fn_residue(m, n, model);
                if r.is_zero() {
                    zero_count += 1;
                } else {
                    eps[f.dlog(r).expect("nonzero residue") as usize] += 1;
                }
            }
            DistributionCounts { n, eps, zero_count }
        }
        EpsMethod::Convolution => {
            let mut acc = CyclicPoly::one(model.q());
            for &d in &digits_of(n, model.q()) {
                let digit_counts = eps_counts(d as u64, model, EpsMethod::BruteForce);
                let digit_poly = CyclicPoly {
                    q: model.q(),
                    coeffs: digit_counts.eps,
                };
                acc = cyclic_mul(&acc, &digit_poly).expect("equal lengths by construction");
            }
            let unit_total = acc.eval_at_one();
            DistributionCounts {
                n,
                eps: acc.coeffs,
                zero_count: n + 1 - unit_total,
            }
        }
    }
}

/// The generating polynomial G_n with coefficients eps_j(u_n).
pub fn gen_poly(n: u64, model: &DvdModel) -> CyclicPoly {
    let counts = eps_counts(n, model, EpsMethod::BruteForce);
    CyclicPoly {
        q: model.q(),
        coeffs: counts.eps,
    }
}

/// The word-to-polynomial map: a word goes to the generating polynomial of
/// u at its integer image. Concatenation of words corresponds to cyclic
/// multiplication, which `homomorphism` tests and the acceptance suite
/// exercise at scale.
pub fn gamma(word: &DigitWord, model: &DvdModel) -> CyclicPoly {
    gen_poly(z_of(word, model.q()), model)
}

/// Occurrence counts e_j of each digit value j among the base-q digits of
/// n; by convention the expansion of 0 is the single digit 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DigitStats {
    pub e: Vec<u64>,
}

pub fn digit_stats(n: u64, q: u64) -> DigitStats {
    let mut e = vec![0u64; q as usize];
    for &d in &digits_of(n, q) {
        e[d as usize] += 1;
    }
    DigitStats { e }
}

/// The product side of the factorization: prod over digit values j of
/// G_j^{e_j(n)}, reduced cyclically.
pub fn theorem_rhs(n: u64, model: &DvdModel) -> CyclicPoly {
    let stats = digit_stats(n, model.q());
    let mut acc = CyclicPoly::one(model.q());
    for (j, &count) in stats.e.iter().enumerate() {
        if count == 0 {
            continue;
        }
        let g_j = gen_poly(j as u64, model);
        for _ in 0..count {
            acc = cyclic_mul(&acc, &g_j).expect("equal lengths by construction");
        }
    }
    acc
}

#[derive(Debug, Clone, Serialize)]
pub struct MainTheoremReport {
    pub n: u64,
    pub pass: bool,
    pub lhs: CyclicPoly,
    pub rhs: CyclicPoly,
}

/// Compares G_n against the digit-statistics product as reduced coefficient
/// vectors: both have degree below q-1, so congruence mod x^{q-1}-1 is
/// equality.
pub fn verify_main_theorem(n: u64, model: &DvdModel) -> MainTheoremReport {
    let lhs = gen_poly(n, model);
    let rhs = theorem_rhs(n, model);
    MainTheoremReport {
        n,
        pass: lhs == rhs,
        lhs,
        rhs,
    }
}
