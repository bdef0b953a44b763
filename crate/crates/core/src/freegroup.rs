//! Reduced words in free groups and their endomorphisms.
//!
//! Generators come in pairs `α_j, β_j` (`j ≥ 1`) spanning `F_{2g}`; index 0
//! names the bare rank-two alphabet `{α, β}` that the projections land in.
//! Text form: `a1 A1 b1 B1 …` (capital = inverse); bare `a b A B` for index 0.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::lattice::{self, Mat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    Alpha(u32),
    Beta(u32),
}

impl Gen {
    pub fn index(self) -> u32 {
        match self {
            Gen::Alpha(i) | Gen::Beta(i) => i,
        }
    }

    /// Position in the ordered generating set `α₁, β₁, α₂, β₂, …`.
    fn slot(self) -> usize {
        match self {
            Gen::Alpha(i) => 2 * (i as usize - 1),
            Gen::Beta(i) => 2 * (i as usize - 1) + 1,
        }
    }

    fn from_slot(s: usize) -> Self {
        let i = (s / 2 + 1) as u32;
        if s.is_multiple_of(2) {
            Gen::Alpha(i)
        } else {
            Gen::Beta(i)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub gen: Gen,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: Gen, inverse: bool) -> Self {
        Self { gen, inverse }
    }

    pub fn inv(self) -> Self {
        Self { gen: self.gen, inverse: !self.inverse }
    }

    pub fn exponent(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

/// A freely reduced word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FreeWord {
    letters: Vec<Letter>,
}

impl FreeWord {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn letter(gen: Gen, exponent: i64) -> Self {
        let inverse = exponent < 0;
        Self { letters: vec![Letter::new(gen, inverse); exponent.unsigned_abs() as usize] }
    }

    pub fn from_letters<I: IntoIterator<Item = Letter>>(it: I) -> Self {
        let mut w = Self::empty();
        for l in it {
            w.push(l);
        }
        w
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    fn push(&mut self, l: Letter) {
        if self.letters.last() == Some(&l.inv()) {
            self.letters.pop();
        } else {
            self.letters.push(l);
        }
    }

    pub fn mul(&self, other: &FreeWord) -> FreeWord {
        let mut w = self.clone();
        for &l in &other.letters {
            w.push(l);
        }
        w
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord { letters: self.letters.iter().rev().map(|l| l.inv()).collect() }
    }

    pub fn pow(&self, e: i64) -> FreeWord {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        (0..e.unsigned_abs()).fold(FreeWord::empty(), |acc, _| acc.mul(&base))
    }

    pub fn conjugate(&self, by: &FreeWord) -> FreeWord {
        by.mul(self).mul(&by.inverse())
    }

    pub fn commutator(u: &FreeWord, v: &FreeWord) -> FreeWord {
        u.mul(v).mul(&u.inverse()).mul(&v.inverse())
    }

    /// Largest generator index used (0 for the empty word or the bare alphabet).
    pub fn max_index(&self) -> u32 {
        self.letters.iter().map(|l| l.gen.index()).max().unwrap_or(0)
    }

    /// Exponent sum of one generator.
    pub fn exponent_sum(&self, gen: Gen) -> i64 {
        self.letters.iter().filter(|l| l.gen == gen).map(|l| l.exponent()).sum()
    }

    /// Abelianization in coordinates `(α₁, β₁, …, α_g, β_g)`.
    pub fn abelianize(&self, g: u32) -> Vec<i64> {
        let mut v = vec![0; 2 * g as usize];
        for l in &self.letters {
            if l.gen.index() >= 1 && l.gen.index() <= g {
                v[l.gen.slot()] += l.exponent();
            }
        }
        v
    }

    /// Cyclic reduction, used to compare words up to conjugation.
    pub fn cyclically_reduced(&self) -> FreeWord {
        let mut s = 0;
        let mut e = self.letters.len();
        while e - s >= 2 && self.letters[s] == self.letters[e - 1].inv() {
            s += 1;
            e -= 1;
        }
        FreeWord { letters: self.letters[s..e].to_vec() }
    }

    /// Equality up to conjugation.
    pub fn conjugate_to(&self, other: &FreeWord) -> bool {
        let a = self.cyclically_reduced().letters;
        let b = other.cyclically_reduced().letters;
        if a.len() != b.len() {
            return false;
        }
        if a.is_empty() {
            return true;
        }
        (0..a.len()).any(|k| a[k..].iter().chain(&a[..k]).eq(b.iter()))
    }

    /// The surface relator `∏_{i=1}^g [α_i, β_i]`.
    pub fn boundary_word(g: u32) -> FreeWord {
        (1..=g).fold(FreeWord::empty(), |acc, i| {
            acc.mul(&FreeWord::commutator(
                &FreeWord::letter(Gen::Alpha(i), 1),
                &FreeWord::letter(Gen::Beta(i), 1),
            ))
        })
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            let c = match (l.gen, l.inverse) {
                (Gen::Alpha(_), false) => 'a',
                (Gen::Alpha(_), true) => 'A',
                (Gen::Beta(_), false) => 'b',
                (Gen::Beta(_), true) => 'B',
            };
            write!(f, "{c}")?;
            if l.gen.index() > 0 {
                write!(f, "{}", l.gen.index())?;
            }
        }
        Ok(())
    }
}

impl FromStr for FreeWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        if chars == ['1'] {
            return Ok(FreeWord::empty());
        }
        let mut out = FreeWord::empty();
        let mut i = 0;
        while i < chars.len() {
            let (alpha, inverse) = match chars[i] {
                'a' => (true, false),
                'A' => (true, true),
                'b' => (false, false),
                'B' => (false, true),
                c => return Err(Error::parse(format!("word {s:?}, char {i}"), format!("unexpected {c:?}"))),
            };
            i += 1;
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let idx: u32 = if start == i {
                0
            } else {
                chars[start..i]
                    .iter()
                    .collect::<String>()
                    .parse()
                    .map_err(|_| Error::parse(format!("word {s:?}"), "bad generator index"))?
            };
            let gen = if alpha { Gen::Alpha(idx) } else { Gen::Beta(idx) };
            out.push(Letter::new(gen, inverse));
        }
        Ok(out)
    }
}

/// An endomorphism of `F_{2g}` given by the images of `α₁, β₁, …, α_g, β_g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeEndo {
    genus: u32,
    images: Vec<FreeWord>,
}

impl FreeEndo {
    pub fn identity(genus: u32) -> Self {
        Self { genus, images: (0..2 * genus as usize).map(|s| FreeWord::letter(Gen::from_slot(s), 1)).collect() }
    }

    /// Identity with some generator images overridden.
    pub fn with_images(genus: u32, overrides: &[(Gen, FreeWord)]) -> Result<Self> {
        let mut e = Self::identity(genus);
        for (gen, w) in overrides {
            if gen.index() == 0 || gen.index() > genus {
                return Err(Error::IndexOutOfRange { what: "free generator", index: gen.index() as usize, max: genus as usize });
            }
            if w.max_index() > genus || w.letters().iter().any(|l| l.gen.index() == 0) {
                return Err(Error::WrongAlphabet(format!("image {w} is not a word in F_{}", 2 * genus)));
            }
            e.images[gen.slot()] = w.clone();
        }
        Ok(e)
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn image(&self, gen: Gen) -> &FreeWord {
        &self.images[gen.slot()]
    }

    pub fn apply(&self, w: &FreeWord) -> FreeWord {
        let mut out = FreeWord::empty();
        for l in w.letters() {
            let img = if l.gen.index() == 0 || l.gen.index() > self.genus {
                FreeWord::from_letters([*l])
            } else {
                self.images[l.gen.slot()].clone()
            };
            out = out.mul(&if l.inverse { img.inverse() } else { img });
        }
        out
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn after(&self, inner: &FreeEndo) -> FreeEndo {
        FreeEndo { genus: self.genus, images: inner.images.iter().map(|w| self.apply(w)).collect() }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.genus)
    }

    /// Integer matrix of the induced map on `Z^{2g}`; column `s` is the image of generator `s`.
    pub fn abelianization(&self) -> Mat {
        let cols: Vec<Vec<i64>> = self.images.iter().map(|w| w.abelianize(self.genus)).collect();
        lattice::from_columns(&cols, 2 * self.genus as usize)
    }
}

/// Generator letter helpers.
pub fn alpha(i: u32) -> FreeWord {
    FreeWord::letter(Gen::Alpha(i), 1)
}

pub fn beta(i: u32) -> FreeWord {
    FreeWord::letter(Gen::Beta(i), 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> FreeWord {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(w("b1A1").to_string(), "b1A1");
        assert_eq!(w("a1A1b2").to_string(), "b2");
        assert_eq!(w("abA").to_string(), "abA");
        assert!(w("").is_empty());
        assert!("x1".parse::<FreeWord>().is_err());
    }

    #[test]
    fn group_laws() {
        let u = w("a1b2A2");
        assert!(u.mul(&u.inverse()).is_empty());
        assert_eq!(u.pow(2), u.mul(&u));
        assert_eq!(u.pow(-1), u.inverse());
        assert!(FreeWord::commutator(&u, &u).is_empty());
    }

    #[test]
    fn conjugacy() {
        let d = FreeWord::boundary_word(2);
        let c = d.conjugate(&w("b1a2"));
        assert!(c.conjugate_to(&d));
        assert!(!d.conjugate_to(&w("a1b1A1")));
    }

    #[test]
    fn endo_composition() {
        let f = FreeEndo::with_images(1, &[(Gen::Alpha(1), w("a1B1"))]).unwrap();
        let g = FreeEndo::with_images(1, &[(Gen::Alpha(1), w("a1b1"))]).unwrap();
        assert!(f.after(&g).is_identity());
        assert_eq!(f.abelianization(), vec![vec![1, 0], vec![-1, 1]]);
    }
}
