//! Two concrete discrete valuation domains with finite residue field, and
//! the digit machinery built on them.
//!
//! The models are the localization of Z at a prime p (uniformizer p, residue
//! field F_p) and the localization of F_q[t] at (t) (uniformizer t, residue
//! field F_q). Both admit exact arithmetic, which is what makes every
//! congruence in this crate checkable without rounding: elements are kept as
//! unreduced numerator/denominator pairs, and valuation and residue are read
//! off without gcd normalization.
//!
//! A model fixes a list of representatives r_0..r_{q-1} with r_0 = 0 whose
//! residues exhaust the residue field. Writing n in base q as (n_i), the
//! element u_n = sum r_{n_i} pi^i transfers integers into the domain; its
//! digit expansion recovers exactly the base-q digits of n. Representatives
//! beyond the defaults (r_i = i, or the constant with code i) can be
//! permuted and perturbed by multiples of the uniformizer from a seed, which
//! exercises every theorem here under a representative set with no special
//! structure.

use crate::basis::DigitCoeffTable;
use crate::error::{Error, Result};
use crate::fqpoly::FqPoly;
use crate::residue_field::{FieldElement, ResidueField};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::str::FromStr;
use std::sync::OnceLock;

/// Little-endian digit labels in `[0, q)`.
pub type DigitVector = Vec<u16>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    /// Z localized at (p): integers with denominators coprime to p.
    RationalLocalization,
    /// F_q[t] localized at (t): rational functions with den(0) != 0.
    PowerSeriesLocalization,
}

/// pi-adic order of an element; +infinity for zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn at_least(self, k: i64) -> bool {
        match self {
            Valuation::Finite(v) => v >= k,
            Valuation::Infinite => true,
        }
    }
}

/// An exact element of the quotient field of the chosen model, stored as an
/// unreduced fraction. The representation is not canonical; equality,
/// valuation and residue are representation-independent.
#[derive(Debug, Clone)]
pub enum VElement {
    Rat { num: BigInt, den: BigInt },
    Fun { num: FqPoly, den: FqPoly },
}

impl VElement {
    pub fn from_int<T: Into<BigInt>>(n: T) -> Self {
        VElement::Rat {
            num: n.into(),
            den: BigInt::one(),
        }
    }

    pub fn rat(num: BigInt, den: BigInt) -> Self {
        debug_assert!(!den.is_zero());
        VElement::Rat { num, den }
    }

    pub fn from_poly(num: FqPoly) -> Self {
        VElement::Fun {
            num,
            den: FqPoly::one(),
        }
    }

    pub fn fun(num: FqPoly, den: FqPoly) -> Self {
        debug_assert!(!den.is_zero());
        VElement::Fun { num, den }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            VElement::Rat { num, .. } => num.is_zero(),
            VElement::Fun { num, .. } => num.is_zero(),
        }
    }

    pub fn add(&self, rhs: &Self, f: &ResidueField) -> Self {
        match (self, rhs) {
            (VElement::Rat { num: a, den: b }, VElement::Rat { num: c, den: d }) => VElement::Rat {
                num: a * d + c * b,
                den: b * d,
            },
            (VElement::Fun { num: a, den: b }, VElement::Fun { num: c, den: d }) => VElement::Fun {
                num: a.mul(d, f).add(&c.mul(b, f), f),
                den: b.mul(d, f),
            },
            _ => panic!("mixed element kinds"),
        }
    }

    pub fn neg(&self, f: &ResidueField) -> Self {
        match self {
            VElement::Rat { num, den } => VElement::Rat {
                num: -num,
                den: den.clone(),
            },
            VElement::Fun { num, den } => VElement::Fun {
                num: num.neg(f),
                den: den.clone(),
            },
        }
    }

    pub fn sub(&self, rhs: &Self, f: &ResidueField) -> Self {
        self.add(&rhs.neg(f), f)
    }

    pub fn mul(&self, rhs: &Self, f: &ResidueField) -> Self {
        match (self, rhs) {
            (VElement::Rat { num: a, den: b }, VElement::Rat { num: c, den: d }) => VElement::Rat {
                num: a * c,
                den: b * d,
            },
            (VElement::Fun { num: a, den: b }, VElement::Fun { num: c, den: d }) => VElement::Fun {
                num: a.mul(c, f),
                den: b.mul(d, f),
            },
            _ => panic!("mixed element kinds"),
        }
    }

    pub fn div(&self, rhs: &Self, f: &ResidueField) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match (self, rhs) {
            (VElement::Rat { num: a, den: b }, VElement::Rat { num: c, den: d }) => {
                Ok(VElement::Rat {
                    num: a * d,
                    den: b * c,
                })
            }
            (VElement::Fun { num: a, den: b }, VElement::Fun { num: c, den: d }) => {
                Ok(VElement::Fun {
                    num: a.mul(d, f),
                    den: b.mul(c, f),
                })
            }
            _ => panic!("mixed element kinds"),
        }
    }

    /// Mathematical equality of fractions, by cross-multiplication.
    pub fn eq_in(&self, rhs: &Self, f: &ResidueField) -> bool {
        match (self, rhs) {
            (VElement::Rat { num: a, den: b }, VElement::Rat { num: c, den: d }) => a * d == c * b,
            (VElement::Fun { num: a, den: b }, VElement::Fun { num: c, den: d }) => {
                a.mul(d, f) == c.mul(b, f)
            }
            _ => panic!("mixed element kinds"),
        }
    }

    /// The same value with the fraction reduced and the denominator
    /// normalized (positive, or monic). Display-only: the arithmetic paths
    /// never reduce.
    pub fn reduced(&self, f: &ResidueField) -> Self {
        match self {
            VElement::Rat { num, den } => {
                if num.is_zero() {
                    return VElement::from_int(0);
                }
                let g = num_integer::Integer::gcd(num, den);
                let (mut num, mut den) = (num / &g, den / &g);
                if den.is_negative() {
                    num = -num;
                    den = -den;
                }
                VElement::Rat { num, den }
            }
            VElement::Fun { num, den } => {
                if num.is_zero() {
                    return VElement::from_poly(FqPoly::zero());
                }
                let g = num.gcd(den, f);
                let (num, _) = num.div_rem(&g, f);
                let (den, _) = den.div_rem(&g, f);
                let lead = den.coeffs()[den.coeffs().len() - 1];
                let lead_inv = f.inv(lead).expect("nonzero lead");
                VElement::Fun {
                    num: num.scale(lead_inv, f),
                    den: den.scale(lead_inv, f),
                }
            }
        }
    }

    /// Textual form: "num/den" with den omitted when 1, or
    /// "c0+c1*t+.../(d0+d1*t+...)" with coefficients as field codes.
    pub fn render(&self) -> String {
        match self {
            VElement::Rat { num, den } => {
                if den.is_one() {
                    num.to_string()
                } else {
                    format!("{num}/{den}")
                }
            }
            VElement::Fun { num, den } => {
                if den == &FqPoly::one() {
                    num.render()
                } else {
                    format!("{}/({})", num.render(), den.render())
                }
            }
        }
    }
}

/// How the representative list is chosen.
#[derive(Debug, Clone)]
pub enum RepSpec {
    /// r_i = i (rational model) or the constant with code i (function field).
    Default,
    /// Deterministic permutation of the nonzero classes plus bounded
    /// uniformizer-multiple perturbations, driven by splitmix64.
    Seeded(u64),
    /// Caller-supplied list; validated against the model invariants.
    Explicit(Vec<VElement>),
}

/// A discrete valuation domain model: residue field, uniformizer, and the
/// representative set R. Immutable after construction.
#[derive(Debug)]
pub struct DvdModel {
    kind: ModelKind,
    field: ResidueField,
    reps: Vec<VElement>,
    rep_residues: Vec<FieldElement>,
    /// residue class code -> digit label (index into reps)
    label_of_class: Vec<u16>,
    digit_table: OnceLock<DigitCoeffTable>,
}

impl DvdModel {
    pub fn new(kind: ModelKind, field: ResidueField, reps: RepSpec) -> Result<Self> {
        if kind == ModelKind::RationalLocalization && field.degree() != 1 {
            return Err(Error::InvalidConfig(
                "the rational model needs a prime residue field (d = 1)".into(),
            ));
        }
        let reps = match reps {
            RepSpec::Default => default_reps(kind, &field),
            RepSpec::Seeded(seed) => seeded_reps(kind, &field, seed),
            RepSpec::Explicit(list) => list,
        };
        let mut model = DvdModel {
            kind,
            field,
            reps,
            rep_residues: Vec::new(),
            label_of_class: Vec::new(),
            digit_table: OnceLock::new(),
        };
        model.validate_reps()?;
        Ok(model)
    }

    fn validate_reps(&mut self) -> Result<()> {
        let q = self.field.q() as usize;
        if self.reps.len() != q {
            return Err(Error::InvalidReps(format!(
                "expected {q} representatives, got {}",
                self.reps.len()
            )));
        }
        if !self.reps[0].is_zero() {
            return Err(Error::InvalidReps("r_0 must be zero".into()));
        }
        let mut residues = Vec::with_capacity(q);
        let mut label_of_class = vec![u16::MAX; q];
        for (i, r) in self.reps.iter().enumerate() {
            match (self.kind, r) {
                (ModelKind::RationalLocalization, VElement::Rat { den, .. }) => {
                    if !den.is_one() {
                        return Err(Error::InvalidReps(format!("r_{i} is not an integer")));
                    }
                }
                (ModelKind::PowerSeriesLocalization, VElement::Fun { den, .. }) => {
                    if den != &FqPoly::one() {
                        return Err(Error::InvalidReps(format!("r_{i} is not a polynomial")));
                    }
                }
                _ => return Err(Error::InvalidReps(format!("r_{i} has the wrong kind"))),
            }
            let class = residue_of(r, self.kind, &self.field)
                .map_err(|_| Error::InvalidReps(format!("r_{i} is not integral")))?;
            if label_of_class[class.0 as usize] != u16::MAX {
                return Err(Error::InvalidReps(format!(
                    "r_{i} repeats residue class {}",
                    class.0
                )));
            }
            label_of_class[class.0 as usize] = i as u16;
            residues.push(class);
        }
        self.rep_residues = residues;
        self.label_of_class = label_of_class;
        Ok(())
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn field(&self) -> &ResidueField {
        &self.field
    }

    pub fn q(&self) -> u64 {
        self.field.q()
    }

    pub fn reps(&self) -> &[VElement] {
        &self.reps
    }

    pub fn rep(&self, label: u16) -> &VElement {
        &self.reps[label as usize]
    }

    /// Residue class of the representative with the given digit label.
    pub fn rep_residue(&self, label: u16) -> FieldElement {
        self.rep_residues[label as usize]
    }

    /// Digit label of the representative lying in the given residue class.
    pub fn label_of_class(&self, class: FieldElement) -> u16 {
        self.label_of_class[class.0 as usize]
    }

    pub fn zero(&self) -> VElement {
        match self.kind {
            ModelKind::RationalLocalization => VElement::from_int(0),
            ModelKind::PowerSeriesLocalization => VElement::from_poly(FqPoly::zero()),
        }
    }

    pub fn one(&self) -> VElement {
        match self.kind {
            ModelKind::RationalLocalization => VElement::from_int(1),
            ModelKind::PowerSeriesLocalization => VElement::from_poly(FqPoly::one()),
        }
    }

    /// The per-digit coefficient table, built on first use.
    pub fn digit_coeff_table(&self) -> &DigitCoeffTable {
        self.digit_table
            .get_or_init(|| DigitCoeffTable::build(self))
    }

    /// u_n: base-q digits of n reassembled with representatives and powers
    /// of the uniformizer.
    pub fn u_of(&self, n: u64) -> VElement {
        self.assemble(&digits_of(n, self.q()))
    }

    /// sum over i of r_{labels[i]} pi^i.
    pub fn assemble(&self, labels: &[u16]) -> VElement {
        match self.kind {
            ModelKind::RationalLocalization => {
                let p = BigInt::from(self.field.p());
                let mut acc = BigInt::zero();
                let mut pw = BigInt::one();
                for &d in labels {
                    let VElement::Rat { num, .. } = self.rep(d) else {
                        unreachable!()
                    };
                    acc += num * &pw;
                    pw *= &p;
                }
                VElement::rat(acc, BigInt::one())
            }
            ModelKind::PowerSeriesLocalization => {
                let mut acc = FqPoly::zero();
                for (i, &d) in labels.iter().enumerate() {
                    let VElement::Fun { num, .. } = self.rep(d) else {
                        unreachable!()
                    };
                    acc = acc.add(&num.shift(i), &self.field);
                }
                VElement::from_poly(acc)
            }
        }
    }

    pub fn valuation(&self, x: &VElement) -> Valuation {
        match x {
            VElement::Rat { num, den } => {
                if num.is_zero() {
                    return Valuation::Infinite;
                }
                let p = self.field.p();
                Valuation::Finite(big_order(num, p) as i64 - big_order(den, p) as i64)
            }
            VElement::Fun { num, den } => {
                let Some(vn) = num.t_order() else {
                    return Valuation::Infinite;
                };
                let vd = den.t_order().expect("denominator is nonzero");
                Valuation::Finite(vn as i64 - vd as i64)
            }
        }
    }

    /// The class of x in the residue field; 0 whenever the valuation is
    /// positive. Fails with `NotIntegral` on negative valuation.
    pub fn residue(&self, x: &VElement) -> Result<FieldElement> {
        residue_of(x, self.kind, &self.field)
    }

    /// First `depth` digit labels of the pi-adic expansion of x.
    ///
    /// Elements with infinite expansions (such as -1 in the rational model)
    /// are truncated at `depth`; every residue computed downstream depends
    /// on finitely many digits.
    pub fn expand(&self, x: &VElement, depth: usize) -> Result<DigitVector> {
        if !self.valuation(x).at_least(0) {
            return Err(Error::NotIntegral);
        }
        let mut y = x.clone();
        let mut digits = Vec::with_capacity(depth);
        for _ in 0..depth {
            let class = self.residue(&y)?;
            let label = self.label_of_class(class);
            digits.push(label);
            // (y - r) / pi, as an unreduced fraction
            y = match y.sub(self.rep(label), &self.field) {
                VElement::Rat { num, den } => VElement::Rat {
                    num,
                    den: den * BigInt::from(self.field.p()),
                },
                VElement::Fun { num, den } => VElement::Fun {
                    num,
                    den: den.shift(1),
                },
            };
        }
        Ok(digits)
    }

    /// Parses the textual element form for this model.
    pub fn parse_element(&self, s: &str) -> Result<VElement> {
        let s = s.trim();
        match self.kind {
            ModelKind::RationalLocalization => {
                let (num, den) = match s.split_once('/') {
                    Some((n, d)) => (n.trim(), d.trim()),
                    None => (s, "1"),
                };
                let num = BigInt::from_str(num)
                    .map_err(|_| Error::Parse(format!("bad integer '{num}'")))?;
                let den = BigInt::from_str(den)
                    .map_err(|_| Error::Parse(format!("bad integer '{den}'")))?;
                if den.is_zero() {
                    return Err(Error::Parse("zero denominator".into()));
                }
                if (&den % BigInt::from(self.field.p())).is_zero() {
                    return Err(Error::Parse(format!(
                        "denominator {den} is divisible by p = {}",
                        self.field.p()
                    )));
                }
                Ok(VElement::rat(num, den))
            }
            ModelKind::PowerSeriesLocalization => {
                let (num, den) = match s.split_once('/') {
                    Some((n, d)) => {
                        let d = d.trim();
                        let d = d
                            .strip_prefix('(')
                            .and_then(|d| d.strip_suffix(')'))
                            .unwrap_or(d);
                        (n.trim(), d)
                    }
                    None => (s, "1"),
                };
                let num = FqPoly::parse(num, self.q())?;
                let den = FqPoly::parse(den, self.q())?;
                if den.is_zero() {
                    return Err(Error::Parse("zero denominator".into()));
                }
                if den.t_order() != Some(0) {
                    return Err(Error::Parse(
                        "denominator has zero constant term (not a unit)".into(),
                    ));
                }
                Ok(VElement::fun(num, den))
            }
        }
    }
}

fn residue_of(x: &VElement, kind: ModelKind, f: &ResidueField) -> Result<FieldElement> {
    match x {
        VElement::Rat { num, den } => {
            debug_assert_eq!(kind, ModelKind::RationalLocalization);
            if num.is_zero() {
                return Ok(FieldElement::ZERO);
            }
            let p = f.p();
            let vn = big_order(num, p);
            let vd = big_order(den, p);
            if vn < vd {
                return Err(Error::NotIntegral);
            }
            if vn > vd {
                return Ok(FieldElement::ZERO);
            }
            let big_p = BigInt::from(p);
            let unit_mod = |x: &BigInt, v: u64| -> FieldElement {
                let stripped = x / big_p.pow(v as u32);
                let m = ((&stripped % &big_p) + &big_p) % &big_p;
                FieldElement(m.try_into().expect("residue code fits u16"))
            };
            let a = unit_mod(num, vn);
            let b = unit_mod(den, vd);
            f.div(a, b)
        }
        VElement::Fun { num, den } => {
            debug_assert_eq!(kind, ModelKind::PowerSeriesLocalization);
            let Some(vn) = num.t_order() else {
                return Ok(FieldElement::ZERO);
            };
            let vd = den.t_order().expect("denominator is nonzero");
            if vn < vd {
                return Err(Error::NotIntegral);
            }
            if vn > vd {
                return Ok(FieldElement::ZERO);
            }
            f.div(num.coeff(vn), den.coeff(vd))
        }
    }
}

/// p-adic order of a nonzero integer.
fn big_order(n: &BigInt, p: u64) -> u64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    while (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    v
}

fn default_reps(kind: ModelKind, field: &ResidueField) -> Vec<VElement> {
    let q = field.q() as u16;
    match kind {
        ModelKind::RationalLocalization => (0..q).map(VElement::from_int).collect(),
        ModelKind::PowerSeriesLocalization => (0..q)
            .map(|i| VElement::from_poly(FqPoly::constant(FieldElement(i))))
            .collect(),
    }
}

/// splitmix64: the update and output mix documented in the README; used so
/// seeded representative sets reproduce bit-for-bit across languages.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
}

/// Bound on the perturbation multiplier in seeded rational representatives.
const REP_EXTRA_BOUND: u64 = 4;

fn seeded_reps(kind: ModelKind, field: &ResidueField, seed: u64) -> Vec<VElement> {
    let q = field.q();
    let mut rng = SplitMix64::new(seed);
    // Fisher-Yates over the nonzero classes, high index downward
    let mut perm: Vec<u16> = (1..q as u16).collect();
    for i in (1..perm.len()).rev() {
        let j = (rng.next_u64() % (i as u64 + 1)) as usize;
        perm.swap(i, j);
    }
    let mut reps = Vec::with_capacity(q as usize);
    match kind {
        ModelKind::RationalLocalization => {
            reps.push(VElement::from_int(0));
            let p = field.p();
            for &class in &perm {
                let extra = rng.next_u64() % REP_EXTRA_BOUND;
                reps.push(VElement::from_int(
                    BigInt::from(class) + BigInt::from(p * extra),
                ));
            }
        }
        ModelKind::PowerSeriesLocalization => {
            reps.push(VElement::from_poly(FqPoly::zero()));
            for &class in &perm {
                let e1 = FieldElement((rng.next_u64() % q) as u16);
                let e2 = FieldElement((rng.next_u64() % q) as u16);
                let poly = FqPoly::from_coeffs(vec![FieldElement(class), e1, e2]);
                reps.push(VElement::from_poly(poly));
            }
        }
    }
    reps
}

/// Little-endian base-q digits; `[0]` for n = 0, no trailing zeros otherwise.
pub fn digits_of(n: u64, q: u64) -> DigitVector {
    assert!(q >= 2, "base must be at least 2");
    if n == 0 {
        return vec![0];
    }
    let mut digits = Vec::new();
    let mut n = n;
    while n > 0 {
        digits.push((n % q) as u16);
        n /= q;
    }
    digits
}

/// Drops the lowest s base-q digits: floor(n / q^s).
pub fn n_shift(n: u64, s: u32, q: u64) -> u64 {
    let mut n = n;
    for _ in 0..s {
        if n == 0 {
            break;
        }
        n /= q;
    }
    n
}

/// The window of r+1 digits starting at position s, reassembled at
/// position 0: sum over i in 0..=r of n_{i+s} q^i.
pub fn n_slice(n: u64, r: u32, s: u32, q: u64) -> u64 {
    let mut m = n_shift(n, s, q);
    let mut acc = 0u64;
    let mut scale = 1u64;
    for _ in 0..=r {
        if m == 0 {
            break;
        }
        acc += m % q * scale;
        m /= q;
        scale = scale.saturating_mul(q);
    }
    acc
}

/// Outcome of checking that (u_n) is very well distributed and well ordered:
/// v(u_n - u_m) >= k exactly when q^k divides n - m.
#[derive(Debug, Clone, serde::Serialize)]
pub struct VwdwoReport {
    pub pass: bool,
    pub pairs_checked: u64,
    pub failure: Option<VwdwoFailure>,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct VwdwoFailure {
    pub n: u64,
    pub m: u64,
    pub k: u32,
    pub valuation_at_least_k: bool,
    pub power_divides_difference: bool,
}

/// Exhaustive check over 0 <= m < n <= max_n and 1 <= k <= kmax.
pub fn verify_vwdwo(model: &DvdModel, max_n: u64, kmax: u32) -> VwdwoReport {
    let us: Vec<VElement> = (0..=max_n).map(|n| model.u_of(n)).collect();
    let q = model.q();
    let mut pairs = 0;
    for n in 1..=max_n {
        for m in 0..n {
            let diff = us[n as usize].sub(&us[m as usize], model.field());
            let v = model.valuation(&diff);
            pairs += 1;
            let mut power = 1u64;
            for k in 1..=kmax {
                power = power.saturating_mul(q);
                let val_ok = v.at_least(k as i64);
                let div_ok = (n - m) % power == 0;
                if val_ok != div_ok {
                    return VwdwoReport {
                        pass: false,
                        pairs_checked: pairs,
                        failure: Some(VwdwoFailure {
                            n,
                            m,
                            k,
                            valuation_at_least_k: val_ok,
                            power_divides_difference: div_ok,
                        }),
                    };
                }
            }
        }
    }
    VwdwoReport {
        pass: true,
        pairs_checked: pairs,
        failure: None,
    }
}
