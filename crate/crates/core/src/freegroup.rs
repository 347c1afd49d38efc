//! Free groups: reduced words, the integral group ring, Fox derivatives and
//! abelianization into Laurent polynomials.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::laurent::{LaurentPoly, Monomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FreeGroupError {
    #[error("generator {0} is not covered by the abelianization map")]
    UncoveredGenerator(usize),
    #[error("exponent sums ({0}, {1}) are not coprime")]
    NotCoprime(i64, i64),
    #[error("relator must involve exactly two generators, found {0}")]
    NotTwoGenerator(usize),
    #[error("word parse error: {0}")]
    Parse(String),
}

/// Freely reduced word stored as syllables `(generator, exponent)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FreeWord {
    syl: Vec<(usize, i64)>,
}

impl FreeWord {
    pub fn identity() -> Self {
        FreeWord { syl: Vec::new() }
    }

    pub fn generator(g: usize) -> Self {
        Self::power_of(g, 1)
    }

    pub fn power_of(g: usize, e: i64) -> Self {
        let mut w = Self::identity();
        w.push(g, e);
        w
    }

    /// Builds a reduced word from arbitrary syllables.
    pub fn from_syllables<I: IntoIterator<Item = (usize, i64)>>(it: I) -> Self {
        let mut w = Self::identity();
        for (g, e) in it {
            w.push(g, e);
        }
        w
    }

    /// Builds a word from signed letters: `+(g+1)` for `g`, `-(g+1)` for `g^-1`.
    pub fn from_letters(letters: &[i64]) -> Self {
        Self::from_syllables(letters.iter().map(|&l| {
            assert!(l != 0, "letter 0 is not a generator");
            ((l.unsigned_abs() - 1) as usize, l.signum())
        }))
    }

    fn push(&mut self, g: usize, e: i64) {
        if e == 0 {
            return;
        }
        if let Some(last) = self.syl.last_mut() {
            if last.0 == g {
                last.1 += e;
                if last.1 == 0 {
                    self.syl.pop();
                }
                return;
            }
        }
        self.syl.push((g, e));
    }

    pub fn syllables(&self) -> &[(usize, i64)] {
        &self.syl
    }

    pub fn is_identity(&self) -> bool {
        self.syl.is_empty()
    }

    /// Number of letters.
    pub fn len(&self) -> usize {
        self.syl.iter().map(|s| s.1.unsigned_abs() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.syl.is_empty()
    }

    pub fn letters(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.syl.iter().flat_map(|&(g, e)| std::iter::repeat_n((g, e.signum()), e.unsigned_abs() as usize))
    }

    /// Largest generator index plus one.
    pub fn generator_bound(&self) -> usize {
        self.syl.iter().map(|s| s.0 + 1).max().unwrap_or(0)
    }

    pub fn concat(&self, other: &FreeWord) -> FreeWord {
        let mut w = self.clone();
        for &(g, e) in &other.syl {
            w.push(g, e);
        }
        w
    }

    pub fn invert(&self) -> FreeWord {
        FreeWord { syl: self.syl.iter().rev().map(|&(g, e)| (g, -e)).collect() }
    }

    pub fn pow(&self, n: i64) -> FreeWord {
        let base = if n < 0 { self.invert() } else { self.clone() };
        let mut w = FreeWord::identity();
        for _ in 0..n.unsigned_abs() {
            w = w.concat(&base);
        }
        w
    }

    /// Strips a conjugating prefix: the result is cyclically reduced.
    pub fn cyclic_reduce(&self) -> FreeWord {
        let mut s = self.syl.clone();
        loop {
            if s.len() < 2 {
                break;
            }
            let (g0, e0) = s[0];
            let (g1, e1) = s[s.len() - 1];
            if g0 != g1 {
                break;
            }
            // merge the last syllable into the first
            s.pop();
            let e = e0 + e1;
            if e == 0 {
                s.remove(0);
            } else {
                s[0].1 = e;
                break;
            }
        }
        FreeWord { syl: s }
    }

    /// Cyclic rotation by moving the first `k` letters to the end.
    pub fn rotate(&self, k: usize) -> FreeWord {
        let letters: Vec<(usize, i64)> = self.letters().collect();
        if letters.is_empty() {
            return self.clone();
        }
        let k = k % letters.len();
        FreeWord::from_syllables(letters[k..].iter().chain(&letters[..k]).copied())
    }

    /// True when the two words are conjugate in the free group.
    pub fn is_conjugate(&self, other: &FreeWord) -> bool {
        let a = self.cyclic_reduce();
        let b = other.cyclic_reduce();
        if a.len() != b.len() {
            return false;
        }
        if a.is_identity() {
            return true;
        }
        (0..a.len()).any(|k| a.rotate(k) == b)
    }

    /// Replaces generator `i` by `images[i]`.
    pub fn substitute(&self, images: &[FreeWord]) -> FreeWord {
        let mut w = FreeWord::identity();
        for &(g, e) in &self.syl {
            w = w.concat(&images[g].pow(e));
        }
        w
    }

    pub fn exponent_sums(&self, ngens: usize) -> Vec<i64> {
        exponent_sums(self, ngens)
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.syl.is_empty() {
            return "1".into();
        }
        self.syl
            .iter()
            .map(|&(g, e)| {
                let n = names.get(g).cloned().unwrap_or_else(|| format!("g{g}"));
                if e == 1 {
                    n
                } else {
                    format!("{n}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.generator_bound()).map(|i| format!("x{i}")).collect();
        f.write_str(&self.render(&names))
    }
}

/// Generator names, mapped to indices in order of declaration.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NameTable {
    names: Vec<String>,
    frozen: bool,
}

impl NameTable {
    /// Names are assigned indices on first occurrence.
    pub fn open() -> Self {
        Self::default()
    }

    /// Only the declared names are accepted.
    pub fn declared<S: AsRef<str>>(names: &[S]) -> Self {
        NameTable { names: names.iter().map(|s| s.as_ref().to_string()).collect(), frozen: true }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index(&mut self, name: &str) -> Result<usize, FreeGroupError> {
        if let Some(i) = self.names.iter().position(|n| n == name) {
            return Ok(i);
        }
        if self.frozen {
            return Err(FreeGroupError::Parse(format!("undeclared generator '{name}'")));
        }
        self.names.push(name.to_string());
        Ok(self.names.len() - 1)
    }
}

/// Parses whitespace-separated tokens `gen` or `gen^k`.
pub fn parse_word(input: &str, table: &mut NameTable) -> Result<FreeWord, FreeGroupError> {
    let mut w = FreeWord::identity();
    for tok in input.split_whitespace() {
        let (name, exp) = match tok.split_once('^') {
            Some((n, k)) => {
                let k: i64 = k.parse().map_err(|_| FreeGroupError::Parse(format!("bad exponent in '{tok}'")))?;
                (n, k)
            }
            None => (tok, 1),
        };
        let valid = !name.is_empty()
            && name.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'');
        if !valid {
            return Err(FreeGroupError::Parse(format!("bad generator name in '{tok}'")));
        }
        let g = table.index(name)?;
        w.push(g, exp);
    }
    Ok(w)
}

/// Element of `Z[F]`: a finite map from reduced words to nonzero integers.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GroupRingElem {
    terms: BTreeMap<FreeWord, BigInt>,
}

impl GroupRingElem {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_word(w: FreeWord) -> Self {
        let mut e = Self::zero();
        e.add_term(w, BigInt::one());
        e
    }

    pub fn one() -> Self {
        Self::from_word(FreeWord::identity())
    }

    pub fn add_term(&mut self, w: FreeWord, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(w) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FreeWord, &BigInt)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), -c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(a.concat(b), ca * cb);
            }
        }
        out
    }

    /// Left multiplication by a group element.
    pub fn left_mul_word(&self, w: &FreeWord) -> Self {
        let mut out = Self::zero();
        for (b, c) in &self.terms {
            out.add_term(w.concat(b), c.clone());
        }
        out
    }

    pub fn generator_bound(&self) -> usize {
        self.terms.keys().map(FreeWord::generator_bound).max().unwrap_or(0)
    }
}

/// Fox derivative `D_gen(w)`.
pub fn fox_derivative(w: &FreeWord, gen: usize) -> GroupRingElem {
    let mut out = GroupRingElem::zero();
    let mut prefix = FreeWord::identity();
    for &(g, e) in w.syllables() {
        if g == gen {
            if e > 0 {
                // prefix * (1 + g + ... + g^(e-1))
                for k in 0..e {
                    out.add_term(prefix.concat(&FreeWord::power_of(g, k)), BigInt::one());
                }
            } else {
                // -prefix * (g^-1 + ... + g^e)
                for k in 1..=-e {
                    out.add_term(prefix.concat(&FreeWord::power_of(g, -k)), -BigInt::one());
                }
            }
        }
        prefix.push(g, e);
    }
    out
}

/// Homomorphism `F -> Z^rank` given by images of the generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbMap {
    pub rank: usize,
    pub images: Vec<Vec<i64>>,
}

impl AbMap {
    pub fn new(rank: usize, images: Vec<Vec<i64>>) -> Self {
        assert!(images.iter().all(|v| v.len() == rank), "image of wrong rank");
        AbMap { rank, images }
    }

    /// The abelianization of a free group of rank `n`.
    pub fn identity(n: usize) -> Self {
        let images = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        AbMap { rank: n, images }
    }

    pub fn image_of_word(&self, w: &FreeWord) -> Result<Vec<i64>, FreeGroupError> {
        let mut v = vec![0; self.rank];
        for &(g, e) in w.syllables() {
            let img = self.images.get(g).ok_or(FreeGroupError::UncoveredGenerator(g))?;
            for (x, y) in v.iter_mut().zip(img) {
                *x += e * y;
            }
        }
        Ok(v)
    }
}

pub fn abelianize(e: &GroupRingElem, m: &AbMap) -> Result<LaurentPoly, FreeGroupError> {
    let mut out = LaurentPoly::zero(m.rank);
    for (w, c) in e.terms() {
        out.add_term(Monomial(m.image_of_word(w)?), c.clone());
    }
    Ok(out)
}

pub fn exponent_sums(w: &FreeWord, ngens: usize) -> Vec<i64> {
    let mut out = vec![0; ngens];
    for &(g, e) in w.syllables() {
        if g < ngens {
            out[g] += e;
        }
    }
    out
}

/// Result of the exponent-sum normalizing basis change on a two-generator
/// relator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoGenBasis {
    /// The new generators `a`, `t` as words in the old generators `x`, `y`.
    pub new_in_old: [FreeWord; 2],
    /// The old generators `x`, `y` as words in `a`, `t`.
    pub old_in_new: [FreeWord; 2],
    /// The relator rewritten in `a`, `t`; exponent sums `(1, 0)`.
    pub relator: FreeWord,
}

/// Nielsen moves driven by the Euclidean algorithm on the exponent sums of
/// `w`, producing a basis `(a, t)` in which `w` has exponent sums `(1, 0)`.
pub fn normalize_two_gen_basis(w: &FreeWord) -> Result<TwoGenBasis, FreeGroupError> {
    if w.generator_bound() > 2 {
        return Err(FreeGroupError::NotTwoGenerator(w.generator_bound()));
    }
    let s = exponent_sums(w, 2);
    let (mut p, mut q) = (s[0], s[1]);
    if p.gcd(&q) != 1 {
        return Err(FreeGroupError::NotCoprime(p, q));
    }
    let x = FreeWord::generator(0);
    let y = FreeWord::generator(1);
    let mut new_in_old = [x.clone(), y.clone()];
    let mut old_in_new = [x.clone(), y.clone()];

    // Apply the basis change whose new generators are `fwd` (in the current
    // basis) and whose inverse expresses the current basis as `back`.
    let mut apply = |fwd: [FreeWord; 2], back: [FreeWord; 2]| {
        new_in_old = [fwd[0].substitute(&new_in_old), fwd[1].substitute(&new_in_old)];
        old_in_new = [old_in_new[0].substitute(&back), old_in_new[1].substitute(&back)];
    };

    while p != 0 && q != 0 {
        if p.abs() <= q.abs() {
            // X' = X Y^c, Y' = Y: sums (p, q - c p)
            let c = q.div_euclid(p);
            apply([x.concat(&y.pow(c)), y.clone()], [x.concat(&y.pow(-c)), y.clone()]);
            q -= c * p;
        } else {
            // Y' = Y X^c: sums (p - c q, q)
            let c = p.div_euclid(q);
            apply([x.clone(), y.concat(&x.pow(c))], [x.clone(), y.concat(&x.pow(-c))]);
            p -= c * q;
        }
    }
    if p == 0 {
        apply([y.clone(), x.clone()], [y.clone(), x.clone()]);
        std::mem::swap(&mut p, &mut q);
    }
    if p < 0 {
        apply([x.invert(), y.clone()], [x.invert(), y.clone()]);
        p = -p;
    }
    debug_assert_eq!((p, q), (1, 0));
    let relator = w.substitute(&old_in_new);
    debug_assert_eq!(exponent_sums(&relator, 2), vec![1, 0]);
    Ok(TwoGenBasis { new_in_old, old_in_new, relator })
}
