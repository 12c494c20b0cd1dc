//! Digit words, the maps into the domain and into the integers, and the
//! index-set bijection behind the convolution identity.
//!
//! A digit word is a nonempty tuple of representative labels. Concatenation
//! makes the words a semigroup. Two maps transfer a word alpha into
//! arithmetic data: upsilon(alpha) assembles the labeled representatives
//! against powers of the uniformizer, and z(alpha) reads the labels as
//! base-q digits of an integer, so that upsilon(alpha) = u_{z(alpha)}.
//!
//! For each class index j, S_j(alpha) collects the m <= z(alpha) whose
//! coefficient residue F_m(upsilon(alpha)) is the j-th power of the fixed
//! primitive root. The pairing (l, m) -> l + q^deg(alpha) m maps the union
//! of S_j(alpha) x S_{n-j}(beta) bijectively onto S_n(alpha . beta), which
//! is what `verify_bijection` machine-checks, together with the cardinality
//! convolution it implies.

use crate::basis::fn_residue_labels;
use crate::domain::{DvdModel, VElement};
use crate::error::{Error, Result};
use serde::Serialize;

/// A nonempty word of digit labels in `[0, q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitWord(Vec<u16>);

impl DigitWord {
    pub fn new(labels: Vec<u16>, q: u64) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::Parse("a word needs at least one label".into()));
        }
        if let Some(&bad) = labels.iter().find(|&&l| l as u64 >= q) {
            return Err(Error::Parse(format!("label {bad} not below q = {q}")));
        }
        Ok(DigitWord(labels))
    }

    pub fn labels(&self) -> &[u16] {
        &self.0
    }

    pub fn deg(&self) -> usize {
        self.0.len()
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut labels = self.0.clone();
        labels.extend_from_slice(&other.0);
        DigitWord(labels)
    }

    /// Comma-separated labels, e.g. "2,0,1".
    pub fn parse(s: &str, q: u64) -> Result<Self> {
        let labels = s
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<u16>()
                    .map_err(|_| Error::Parse(format!("bad label '{}'", part.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(labels, q)
    }

    pub fn render(&self) -> String {
        self.0
            .iter()
            .map(|l| l.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// upsilon: the word assembled against powers of the uniformizer.
pub fn upsilon(word: &DigitWord, model: &DvdModel) -> VElement {
    model.assemble(word.labels())
}

/// z: the word read as little-endian base-q digits of an integer.
pub fn z_of(word: &DigitWord, q: u64) -> u64 {
    let mut acc = 0u64;
    for &l in word.labels().iter().rev() {
        acc = acc
            .checked_mul(q)
            .and_then(|a| a.checked_add(l as u64))
            .expect("z fits in u64");
    }
    acc
}

/// S_j: the m in [0, z] whose coefficient residue at upsilon(word) is the
/// j-th power of the primitive root. j is reduced mod q-1.
pub fn s_set(word: &DigitWord, j: i64, model: &DvdModel) -> Vec<u64> {
    let f = model.field();
    let target = f.root_pow(j);
    let z = z_of(word, model.q());
    let profile = expansion_profile(word, model);
    (0..=z)
        .filter(|&m| fn_residue_labels(m, &profile, model) == target)
        .collect()
}

/// All S_j at once: entry j lists the members of S_j(word).
pub fn s_sets(word: &DigitWord, model: &DvdModel) -> Vec<Vec<u64>> {
    let f = model.field();
    let classes = (model.q() - 1) as usize;
    let z = z_of(word, model.q());
    let profile = expansion_profile(word, model);
    let mut sets = vec![Vec::new(); classes];
    for m in 0..=z {
        let r = fn_residue_labels(m, &profile, model);
        if !r.is_zero() {
            sets[f.dlog(r).expect("nonzero residue") as usize].push(m);
        }
    }
    sets
}

/// Digit labels of the expansion of upsilon(word), long enough to classify
/// every m <= z. The expansion of an assembled word is the word itself
/// followed by zeros, which `fn_residue_labels` reads implicitly.
fn expansion_profile(word: &DigitWord, model: &DvdModel) -> Vec<u16> {
    let x = upsilon(word, model);
    model
        .expand(&x, word.deg())
        .expect("assembled words are integral")
}

/// The pairing t = l + q^deg(alpha) m underlying the bijection.
pub fn psi(l: u64, m: u64, alpha: &DigitWord, q: u64) -> Result<u64> {
    let z = z_of(alpha, q);
    if l > z {
        return Err(Error::OutOfRange { value: l, bound: z });
    }
    let scale = q
        .checked_pow(alpha.deg() as u32)
        .expect("q^deg fits in u64");
    scale
        .checked_mul(m)
        .and_then(|s| s.checked_add(l))
        .ok_or(Error::OutOfRange {
            value: m,
            bound: u64::MAX / scale,
        })
}

/// Outcome of checking the index-set bijection and its cardinality
/// convolution for one class index n.
#[derive(Debug, Clone, Serialize)]
pub struct BijectionReport {
    pub n: i64,
    pub pass: bool,
    /// Number of pairs in the union of S_j(alpha) x S_{n-j}(beta).
    pub pair_count: u64,
    /// Size of S_n(alpha . beta).
    pub image_size: u64,
    pub collisions: u64,
    pub image_matches: bool,
    pub psi_in_range: bool,
    pub convolution_matches: bool,
}

/// Applies the pairing to every pair in the union of S_j(alpha) x
/// S_{n-j}(beta) and checks that the image is exactly S_n(alpha . beta),
/// with no collisions, every value within [0, z], and the cardinality
/// convolution identity satisfied.
pub fn verify_bijection(
    alpha: &DigitWord,
    beta: &DigitWord,
    n: i64,
    model: &DvdModel,
) -> BijectionReport {
    let q = model.q();
    let classes = (q - 1) as i64;
    let sets_a = s_sets(alpha, model);
    let sets_b = s_sets(beta, model);
    let gamma = alpha.concat(beta);
    let expected = s_set(&gamma, n, model);
    let z_gamma = z_of(&gamma, q);

    let mut image = Vec::new();
    let mut pair_count = 0u64;
    let mut in_range = true;
    for j in 0..classes {
        let left = &sets_a[j as usize];
        let right = &sets_b[(n - j).rem_euclid(classes) as usize];
        pair_count += left.len() as u64 * right.len() as u64;
        for &l in left {
            for &m in right {
                let t = psi(l, m, alpha, q).expect("l <= z(alpha) by construction");
                in_range &= t <= z_gamma;
                image.push(t);
            }
        }
    }
    image.sort_unstable();
    let collisions = {
        let mut dups = 0u64;
        for w in image.windows(2) {
            if w[0] == w[1] {
                dups += 1;
            }
        }
        dups
    };
    let image_matches = image == expected;
    let convolution_matches = expected.len() as u64 == pair_count;
    BijectionReport {
        n,
        pass: image_matches && collisions == 0 && in_range && convolution_matches,
        pair_count,
        image_size: expected.len() as u64,
        collisions,
        image_matches,
        psi_in_range: in_range,
        convolution_matches,
    }
}

/// Uniform random word of the given degree, driven by any u64 source.
pub fn random_word(degree: usize, q: u64, mut next: impl FnMut() -> u64) -> DigitWord {
    let labels = (0..degree.max(1)).map(|_| (next() % q) as u16).collect();
    DigitWord(labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::fn_residue_at;
    use crate::domain::SplitMix64;
    use crate::testutil::{fqt, fqt_seeded, zp, zp_seeded};
    use proptest::prelude::*;

    fn w(labels: &[u16], q: u64) -> DigitWord {
        DigitWord::new(labels.to_vec(), q).unwrap()
    }

    #[test]
    fn concat_examples() {
        assert_eq!(w(&[1], 3).concat(&w(&[1], 3)), w(&[1, 1], 3));
        assert_eq!(w(&[2, 0], 3).concat(&w(&[1], 3)), w(&[2, 0, 1], 3));
        let (a, b) = (w(&[1, 2], 3), w(&[0, 1, 2], 3));
        assert_eq!(a.concat(&b).deg(), a.deg() + b.deg());
    }

    #[test]
    fn word_construction_rejects_bad_labels() {
        assert!(DigitWord::new(vec![], 3).is_err());
        assert!(DigitWord::new(vec![3], 3).is_err());
        assert!(DigitWord::parse("2,0,1", 3).is_ok());
        assert!(DigitWord::parse("2,,1", 3).is_err());
    }

    #[test]
    fn upsilon_examples() {
        let m = zp(3);
        assert!(upsilon(&w(&[2, 1], 3), &m).eq_in(&VElement::from_int(5), m.field()));
        assert!(upsilon(&w(&[0], 3), &m).is_zero());

        let m2 = fqt(2, 1);
        let expected = m2.parse_element("1+1*t").unwrap();
        assert!(upsilon(&w(&[1, 1], 2), &m2).eq_in(&expected, m2.field()));
    }

    #[test]
    fn z_examples() {
        assert_eq!(z_of(&w(&[2, 1], 3), 3), 5);
        assert_eq!(z_of(&w(&[0, 0, 1], 2), 2), 4);
        assert_eq!(z_of(&w(&[0], 5), 5), 0);
    }

    #[test]
    fn upsilon_equals_u_at_z() {
        // including words with trailing zero labels
        let m = zp(3);
        for labels in [vec![1u16], vec![2, 1], vec![1, 0], vec![0, 0, 2, 0]] {
            let word = w(&labels, 3);
            let lhs = upsilon(&word, &m);
            let rhs = m.u_of(z_of(&word, 3));
            assert!(lhs.eq_in(&rhs, m.field()), "{labels:?}");
        }
    }

    #[test]
    fn s_set_examples() {
        let m = zp(3);
        assert_eq!(s_set(&w(&[2], 3), 0, &m), vec![0, 2]);
        assert_eq!(s_set(&w(&[2], 3), 1, &m), vec![1]);
        assert_eq!(s_set(&w(&[1, 1], 3), 0, &m), vec![0, 1, 3, 4]);
        // index normalization mod q-1
        assert_eq!(s_set(&w(&[2], 3), 2, &m), s_set(&w(&[2], 3), 0, &m));
        assert_eq!(s_set(&w(&[2], 3), -1, &m), s_set(&w(&[2], 3), 1, &m));
    }

    #[test]
    fn s_set_matches_pointwise_classification() {
        for model in [zp(3), zp_seeded(5, 3), fqt(2, 2)] {
            let q = model.q();
            let word = w(&[2 % q as u16, 1, 0], q);
            let x = upsilon(&word, &model);
            let z = z_of(&word, q);
            for j in 0..q as i64 - 1 {
                let target = model.field().root_pow(j);
                let direct: Vec<u64> = (0..=z)
                    .filter(|&m| fn_residue_at(m, &x, &model).unwrap() == target)
                    .collect();
                assert_eq!(s_set(&word, j, &model), direct, "q={q} j={j}");
            }
        }
    }

    #[test]
    fn psi_examples() {
        assert_eq!(psi(1, 1, &w(&[1], 3), 3).unwrap(), 4);
        assert_eq!(psi(0, 0, &w(&[1], 3), 3).unwrap(), 0);
        assert_eq!(psi(8, 2, &w(&[3, 1], 5), 5).unwrap(), 58);
        assert!(matches!(
            psi(2, 0, &w(&[1], 3), 3),
            Err(Error::OutOfRange { value: 2, bound: 1 })
        ));
    }

    #[test]
    fn bijection_worked_example() {
        let m = zp(3);
        let report = verify_bijection(&w(&[1], 3), &w(&[1], 3), 0, &m);
        assert!(report.pass, "{report:?}");
        assert_eq!(report.image_size, 4); // {0, 1, 3, 4}

        let report = verify_bijection(&w(&[2], 3), &w(&[2], 3), 2, &m);
        assert!(report.pass, "{report:?}");
        assert_eq!(report.pair_count, 5); // 2*2 + 1*1
    }

    #[test]
    fn bijection_with_empty_sides() {
        // S_j([0]) is empty for j != 0, so for n = 1 both sides are empty
        let m = zp(3);
        let report = verify_bijection(&w(&[0], 3), &w(&[0], 3), 1, &m);
        assert!(report.pass, "{report:?}");
        assert_eq!(report.pair_count, 0);
        assert_eq!(report.image_size, 0);
    }

    #[test]
    fn partition_of_index_range() {
        for model in [zp(3), zp(5), fqt(2, 2), zp_seeded(3, 5)] {
            let q = model.q();
            for labels in [
                vec![1u16],
                vec![(q - 1) as u16, 1],
                vec![1, 0, (q - 1) as u16],
            ] {
                let word = w(&labels, q);
                let z = z_of(&word, q);
                let x = upsilon(&word, &model);
                let unit_total: u64 = s_sets(&word, &model).iter().map(|s| s.len() as u64).sum();
                let zero_total = (0..=z)
                    .filter(|&m| fn_residue_at(m, &x, &model).unwrap().is_zero())
                    .count() as u64;
                assert_eq!(unit_total + zero_total, z + 1, "q={q} {labels:?}");
            }
        }
    }

    #[test]
    fn bijection_binary_field() {
        // q = 2 has a single residue class index
        let m = zp(2);
        for (a, b) in [(vec![1u16], vec![1u16]), (vec![1, 0], vec![1, 1])] {
            let report = verify_bijection(&w(&a, 2), &w(&b, 2), 0, &m);
            assert!(report.pass, "{report:?}");
        }
    }

    proptest! {
        #[test]
        fn bijection_random_words(
            seed in 0u64..500, da in 1usize..4, db in 1usize..4, n in 0i64..6
        ) {
            let mut rng = SplitMix64::new(seed);
            for model in [zp(3), zp(5), fqt(2, 2), zp_seeded(5, seed), fqt_seeded(2, 2, seed)] {
                let q = model.q();
                let alpha = random_word(da, q, || rng.next_u64());
                let beta = random_word(db, q, || rng.next_u64());
                let report = verify_bijection(&alpha, &beta, n, &model);
                prop_assert!(report.pass, "q={} alpha={:?} beta={:?} n={} {:?}",
                    q, alpha, beta, n, report);
            }
        }

        #[test]
        fn psi_images_stay_within_bound(seed in 0u64..200) {
            let mut rng = SplitMix64::new(seed);
            let m = zp(3);
            let alpha = random_word(1 + (seed % 3) as usize, 3, || rng.next_u64());
            let beta = random_word(1 + (seed % 2) as usize, 3, || rng.next_u64());
            let z_gamma = z_of(&alpha.concat(&beta), 3);
            for l in s_sets(&alpha, &m).concat() {
                for m_idx in s_sets(&beta, &m).concat() {
                    let t = psi(l, m_idx, &alpha, 3).unwrap();
                    prop_assert!(t <= z_gamma);
                }
            }
        }
    }
}
