//! Mapping classes as words in Dehn twists, with their actions cached.
//!
//! Every mapping class carries three synchronized actions:
//! - `abs`: the action on H₁(S), a matrix on loop coordinates;
//! - `diff`: the difference map `x ↦ φ*x − x` from relative classes to loop classes;
//! - `filled`: the action on π₁ of the capped-off surface, a free-group endomorphism.
//!
//! Words are stored in application order: the first letter acts first.

use std::fmt;

use crate::error::{Error, Result};
use crate::freegroup::{alpha, beta, FreeEndo, FreeWord, Gen};
use crate::lattice::{self, Mat};
use crate::surface::{abs_to_rel, intersection_form, pair, rel_from_rho_prime, AbsClass, RelClass, SurfaceSig};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TwistName {
    A(u32),
    B(u32),
    C(u32),
    Bdry(u32),
    Pants(u32, u32),
    Custom(String),
}

impl fmt::Display for TwistName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TwistName::A(i) => write!(f, "a_{i}"),
            TwistName::B(i) => write!(f, "b_{i}"),
            TwistName::C(i) => write!(f, "c_{i}"),
            TwistName::Bdry(k) => write!(f, "bdry_{k}"),
            TwistName::Pants(k, l) => write!(f, "pants_{k}_{l}"),
            TwistName::Custom(label) => write!(f, "custom:{label}"),
        }
    }
}

/// A Dehn twist about a curve, positive power meaning the right-handed twist.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistGenerator {
    pub name: TwistName,
    /// Class of the twisting curve (orientation is irrelevant to the twist).
    pub class: AbsClass,
    pi1: FreeEndo,
    pi1_inverse: Option<FreeEndo>,
}

/// Free-group index of the `m`-th genus pair (0-based), and the letters its
/// two loops map to: first loop ↦ β, second loop ↦ α⁻¹.
pub fn genus_letters(sig: SurfaceSig, m: usize) -> (u32, FreeWord, FreeWord) {
    let j = sig.genus - m as u32;
    (j, beta(j), alpha(j).inverse())
}

/// Matrix sending genus-block loop coordinates to abelianized free coordinates `(α₁, β₁, …)`.
pub fn genus_to_free(sig: SurfaceSig) -> Mat {
    let g = sig.genus as usize;
    let mut m = lattice::zeros(2 * g, 2 * g);
    for k in 0..g {
        let j = sig.genus as usize - k;
        // loop 2k ↦ β_j, loop 2k+1 ↦ −α_j
        m[2 * (j - 1) + 1][2 * k] = 1;
        m[2 * (j - 1)][2 * k + 1] = -1;
    }
    m
}

fn range_check(what: &'static str, i: u32, max: u32) -> Result<()> {
    if i == 0 || i > max {
        Err(Error::IndexOutOfRange { what, index: i as usize, max: max as usize })
    } else {
        Ok(())
    }
}

impl TwistGenerator {
    /// A catalog generator by name: `a_i`, `b_i`, `c_i`, `bdry_k`, `pants_k_l`.
    pub fn catalog(sig: SurfaceSig, name: &str) -> Result<Self> {
        Self::from_name(sig, parse_twist_name(name)?)
    }

    pub fn from_name(sig: SurfaceSig, name: TwistName) -> Result<Self> {
        let g = sig.genus;
        let nb = sig.boundary_loops() as u32;
        let off = nb as usize;
        let mut c = vec![0i64; sig.rank()];
        let (pi1, pi1_inverse) = match name {
            TwistName::A(i) => {
                range_check("a-twist", i, g)?;
                c[off + 2 * (i as usize - 1)] = 1;
                let j = g - i + 1;
                (
                    FreeEndo::with_images(g, &[(Gen::Alpha(j), alpha(j).mul(&beta(j).inverse()))])?,
                    FreeEndo::with_images(g, &[(Gen::Alpha(j), alpha(j).mul(&beta(j)))])?,
                )
            }
            TwistName::B(i) => {
                range_check("b-twist", i, g)?;
                c[off + 2 * (i as usize - 1) + 1] = 1;
                let j = g - i + 1;
                (
                    FreeEndo::with_images(g, &[(Gen::Beta(j), beta(j).mul(&alpha(j)))])?,
                    FreeEndo::with_images(g, &[(Gen::Beta(j), beta(j).mul(&alpha(j).inverse()))])?,
                )
            }
            TwistName::C(i) => {
                range_check("c-twist", i, g.saturating_sub(1))?;
                c[off + 2 * (i as usize - 1)] = -1;
                c[off + 2 * i as usize] = 1;
                c_twist_pi1(g, i)?
            }
            TwistName::Bdry(k) => {
                range_check("boundary twist", k, nb)?;
                c[k as usize - 1] = 1;
                (FreeEndo::identity(g), FreeEndo::identity(g))
            }
            TwistName::Pants(k, l) => {
                range_check("pants twist", k, nb)?;
                range_check("pants twist", l, nb)?;
                if k >= l {
                    return Err(Error::InvalidGenerator(format!("pants_{k}_{l} needs k < l")));
                }
                c[k as usize - 1] = 1;
                c[l as usize - 1] = 1;
                (FreeEndo::identity(g), FreeEndo::identity(g))
            }
            TwistName::Custom(_) => {
                return Err(Error::InvalidGenerator("custom twists are built with TwistGenerator::custom".into()))
            }
        };
        Ok(Self { name, class: AbsClass::new(sig, c)?, pi1, pi1_inverse: Some(pi1_inverse) })
    }

    /// A user-supplied twist. The π₁ action must abelianize to the twist's
    /// homology action on the genus block and fix the boundary word up to
    /// conjugation; a supplied inverse must invert it.
    pub fn custom(label: &str, class: AbsClass, pi1: Option<FreeEndo>, pi1_inverse: Option<FreeEndo>) -> Result<Self> {
        let sig = class.sig;
        let g = sig.genus;
        let pi1 = pi1.unwrap_or_else(|| FreeEndo::identity(g));
        let bad = |m: String| Error::InvalidGenerator(format!("custom twist {label}: {m}"));
        if pi1.genus() != g || pi1_inverse.as_ref().is_some_and(|f| f.genus() != g) {
            return Err(bad("π₁ action has the wrong rank".into()));
        }
        let gen = Self { name: TwistName::Custom(label.to_string()), class, pi1, pi1_inverse };
        let expected = lattice::mat_mul(
            &lattice::mat_mul(&genus_to_free(sig), &genus_block(&twist_abs_matrix(&gen.class, 1)?, sig))?,
            &free_to_genus(sig),
        )?;
        if gen.pi1.abelianization() != expected {
            return Err(bad("π₁ action does not abelianize to the twist's homology action".into()));
        }
        let d = FreeWord::boundary_word(g);
        if !gen.pi1.apply(&d).conjugate_to(&d) {
            return Err(bad("π₁ action does not fix the boundary word up to conjugation".into()));
        }
        if let Some(inv) = &gen.pi1_inverse {
            if !inv.after(&gen.pi1).is_identity() || !gen.pi1.after(inv).is_identity() {
                return Err(bad("pi1_inverse is not inverse to pi1".into()));
            }
        }
        Ok(gen)
    }

    pub fn sig(&self) -> SurfaceSig {
        self.class.sig
    }

    pub fn pi1(&self) -> &FreeEndo {
        &self.pi1
    }

    pub fn pi1_inverse(&self) -> Option<&FreeEndo> {
        self.pi1_inverse.as_ref()
    }
}

/// π₁ action of the twist about the curve joining genus pairs `i` and `i+1`.
///
/// In free-group terms the curve is `β_lo α_hi β_hi⁻¹ α_hi⁻¹` with
/// `lo = g−i`, `hi = g−i+1`; `u = α_hi β_hi α_hi⁻¹`.
fn c_twist_pi1(g: u32, i: u32) -> Result<(FreeEndo, FreeEndo)> {
    let lo = g - i;
    let hi = g - i + 1;
    let (a_lo, b_lo, a_hi, b_hi) = (alpha(lo), beta(lo), alpha(hi), beta(hi));
    let u = a_hi.mul(&b_hi).mul(&a_hi.inverse());
    let ui = u.inverse();
    let fwd = FreeEndo::with_images(
        g,
        &[
            (Gen::Alpha(lo), a_lo.mul(&b_lo.inverse()).mul(&u)),
            (Gen::Beta(lo), ui.mul(&b_lo).mul(&u)),
            (Gen::Alpha(hi), ui.mul(&b_lo).mul(&a_hi)),
        ],
    )?;
    let inv = FreeEndo::with_images(
        g,
        &[
            (Gen::Alpha(lo), a_lo.mul(&ui).mul(&b_lo)),
            (Gen::Beta(lo), b_lo.inverse().mul(&u).mul(&b_lo).mul(&ui).mul(&b_lo)),
            (Gen::Alpha(hi), b_lo.inverse().mul(&a_hi).mul(&b_hi)),
        ],
    )?;
    Ok((fwd, inv))
}

/// Every catalog twist available on `sig`.
pub fn catalog_names(sig: SurfaceSig) -> Vec<String> {
    let g = sig.genus;
    let nb = sig.boundary_loops() as u32;
    let mut out = Vec::new();
    for i in 1..=g {
        out.push(format!("a_{i}"));
        out.push(format!("b_{i}"));
    }
    out.extend((1..g).map(|i| format!("c_{i}")));
    out.extend((1..=nb).map(|k| format!("bdry_{k}")));
    for k in 1..=nb {
        out.extend((k + 1..=nb).map(|l| format!("pants_{k}_{l}")));
    }
    out
}

pub fn parse_twist_name(name: &str) -> Result<TwistName> {
    let bad = || Error::InvalidGenerator(format!("unknown twist {name:?}"));
    let parts: Vec<&str> = name.trim().split('_').collect();
    let num = |s: &str| s.parse::<u32>().map_err(|_| bad());
    match parts.as_slice() {
        ["a", i] => Ok(TwistName::A(num(i)?)),
        ["b", i] => Ok(TwistName::B(num(i)?)),
        ["c", i] => Ok(TwistName::C(num(i)?)),
        ["bdry", k] => Ok(TwistName::Bdry(num(k)?)),
        ["pants", k, l] => Ok(TwistName::Pants(num(k)?, num(l)?)),
        _ => Err(bad()),
    }
}

fn genus_block(m: &Mat, sig: SurfaceSig) -> Mat {
    let b = sig.boundary_loops();
    m[b..].iter().map(|row| row[b..].to_vec()).collect()
}

fn free_to_genus(sig: SurfaceSig) -> Mat {
    // inverse of genus_to_free: it is a signed permutation, so the inverse is the transpose
    lattice::transpose(&genus_to_free(sig))
}

/// `y ↦ y − e (y·C) C`
fn twist_abs_matrix(c: &AbsClass, e: i64) -> Result<Mat> {
    let sig = c.sig;
    let qc = lattice::mat_vec(&intersection_form(sig), &c.coords)?;
    let n = sig.rank();
    let mut a = lattice::identity(n);
    for i in 0..n {
        for j in 0..n {
            // (y·C) = Σ_j y_j (QC)_j
            let t = lattice::mul(lattice::mul(e, c.coords[i])?, qc[j])?;
            a[i][j] = lattice::add(a[i][j], lattice::neg(t)?)?;
        }
    }
    Ok(a)
}

/// `x ↦ −e ⟨x, C⟩ C`
fn twist_diff_matrix(c: &AbsClass, e: i64) -> Result<Mat> {
    let n = c.sig.rank();
    let mut d = lattice::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            d[i][j] = lattice::neg(lattice::mul(lattice::mul(e, c.coords[i])?, c.coords[j])?)?;
        }
    }
    Ok(d)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappingClass {
    sig: SurfaceSig,
    word: Vec<(TwistGenerator, i64)>,
    abs: Mat,
    diff: Mat,
    filled: FreeEndo,
}

impl MappingClass {
    pub fn identity(sig: SurfaceSig) -> Self {
        let n = sig.rank();
        Self {
            sig,
            word: Vec::new(),
            abs: lattice::identity(n),
            diff: lattice::zeros(n, n),
            filled: FreeEndo::identity(sig.genus),
        }
    }

    /// The single letter `gen^power`.
    pub fn twist(gen: &TwistGenerator, power: i64) -> Result<Self> {
        let sig = gen.sig();
        if power == 0 {
            return Ok(Self::identity(sig));
        }
        let step = if power > 0 {
            gen.pi1.clone()
        } else {
            gen.pi1_inverse.clone().ok_or_else(|| Error::NotInvertible(gen.name.to_string()))?
        };
        let mut filled = FreeEndo::identity(sig.genus);
        if !step.is_identity() {
            for _ in 0..power.unsigned_abs() {
                filled = step.after(&filled);
            }
        }
        Ok(Self {
            sig,
            word: vec![(gen.clone(), power)],
            abs: twist_abs_matrix(&gen.class, power)?,
            diff: twist_diff_matrix(&gen.class, power)?,
            filled,
        })
    }

    /// Product of letters in application order.
    pub fn from_word(sig: SurfaceSig, word: &[(TwistGenerator, i64)]) -> Result<Self> {
        let mut phi = Self::identity(sig);
        for (gen, p) in word {
            gen.sig().same_as(&sig)?;
            if *p == 0 {
                continue;
            }
            phi = compose(&Self::twist(gen, *p)?, &phi)?;
        }
        Ok(phi)
    }

    /// Catalog word from `(name, power)` pairs.
    pub fn from_catalog(sig: SurfaceSig, word: &[(&str, i64)]) -> Result<Self> {
        let letters: Vec<(TwistGenerator, i64)> =
            word.iter().map(|(n, p)| Ok((TwistGenerator::catalog(sig, n)?, *p))).collect::<Result<_>>()?;
        Self::from_word(sig, &letters)
    }

    pub fn inverse(&self) -> Result<Self> {
        let word: Vec<(TwistGenerator, i64)> = self.word.iter().rev().map(|(g, p)| (g.clone(), -p)).collect();
        Self::from_word(self.sig, &word)
    }

    pub fn sig(&self) -> SurfaceSig {
        self.sig
    }

    pub fn word(&self) -> &[(TwistGenerator, i64)] {
        &self.word
    }

    /// Action on H₁(S) in loop coordinates.
    pub fn abs_matrix(&self) -> &Mat {
        &self.abs
    }

    /// Difference map: column `j` is `φ*ς'_j − ς'_j` in loop coordinates.
    pub fn diff_matrix(&self) -> &Mat {
        &self.diff
    }

    pub fn filled_image(&self) -> &FreeEndo {
        &self.filled
    }

    pub fn act_abs(&self, y: &AbsClass) -> Result<AbsClass> {
        self.sig.same_as(&y.sig)?;
        AbsClass::new(self.sig, lattice::mat_vec(&self.abs, &y.coords)?)
    }

    /// `φ*x − x`, a loop class.
    pub fn diff_apply(&self, x: &RelClass) -> Result<AbsClass> {
        self.sig.same_as(&x.sig)?;
        AbsClass::new(self.sig, lattice::mat_vec(&self.diff, &x.coords)?)
    }

    /// `φ*x` on relative homology.
    pub fn act_rel(&self, x: &RelClass) -> Result<RelClass> {
        x.add(&abs_to_rel(&self.diff_apply(x)?))
    }

    /// Row `i` holds the loop coordinates of `ρ'_i − φ*ρ'_i`.
    pub fn t_matrix(&self) -> Result<Mat> {
        (1..=self.sig.rank())
            .map(|i| {
                let d = self.diff_apply(&rel_from_rho_prime(self.sig, i)?)?;
                lattice::vec_scale(-1, &d.coords)
            })
            .collect()
    }

    /// `Aᵀ Q A = Q`
    pub fn preserves_form(&self) -> Result<bool> {
        let q = intersection_form(self.sig);
        let lhs = lattice::mat_mul(&lattice::mat_mul(&lattice::transpose(&self.abs), &q)?, &self.abs)?;
        Ok(lhs == q)
    }

    /// Abelianized filled action agrees with the genus block of the homology action.
    pub fn filled_matches_homology(&self) -> Result<bool> {
        let m = genus_to_free(self.sig);
        let lhs = lattice::mat_mul(&self.filled.abelianization(), &m)?;
        let rhs = lattice::mat_mul(&m, &genus_block(&self.abs, self.sig))?;
        Ok(lhs == rhs)
    }

    /// Pairing used by the self-linking formula: `⟨φ*a, y⟩`.
    pub fn pushed_pairing(&self, a: &RelClass, y: &AbsClass) -> Result<i64> {
        pair(&self.act_rel(a)?, y)
    }

    /// Human-readable word, e.g. `a_1^-2 pants_1_2`.
    pub fn word_string(&self) -> String {
        if self.word.is_empty() {
            return "id".into();
        }
        self.word
            .iter()
            .map(|(g, p)| if *p == 1 { g.name.to_string() } else { format!("{}^{}", g.name, p) })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// `ψ∘φ`, with `φ` applied first.
pub fn compose(psi: &MappingClass, phi: &MappingClass) -> Result<MappingClass> {
    psi.sig.same_as(&phi.sig)?;
    let mut word = phi.word.clone();
    word.extend(psi.word.iter().cloned());
    Ok(MappingClass {
        sig: psi.sig,
        word,
        abs: lattice::mat_mul(&psi.abs, &phi.abs)?,
        diff: lattice::mat_add(&lattice::mat_mul(&psi.abs, &phi.diff)?, &psi.diff)?,
        filled: psi.filled.after(&phi.filled),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::rel_from_rho_prime as rp;

    fn sig(g: u32, r: u32) -> SurfaceSig {
        SurfaceSig::new(g, r).unwrap()
    }

    fn letter(s: SurfaceSig, n: &str, e: i64) -> MappingClass {
        MappingClass::twist(&TwistGenerator::catalog(s, n).unwrap(), e).unwrap()
    }

    #[test]
    fn case_differences() {
        let s = sig(2, 1);
        let d = letter(s, "a_1", 1).diff_apply(&rp(s, 2).unwrap()).unwrap();
        assert_eq!(d.coords, vec![1, 0, 0, 0]);
        let d = letter(s, "b_1", 1).diff_apply(&rp(s, 1).unwrap()).unwrap();
        assert_eq!(d.coords, vec![0, -1, 0, 0]);
    }

    #[test]
    fn t_matrix_small() {
        let ann = sig(0, 2);
        assert_eq!(letter(ann, "bdry_1", 1).t_matrix().unwrap(), vec![vec![1]]);
        let pants = sig(0, 3);
        assert_eq!(letter(pants, "pants_1_2", 1).t_matrix().unwrap(), vec![vec![1, 1], vec![1, 1]]);
        assert_eq!(MappingClass::identity(pants).t_matrix().unwrap(), lattice::zeros(2, 2));
    }

    #[test]
    fn catalog_validity() {
        let s = sig(2, 3);
        for n in ["a_1", "b_2", "c_1", "bdry_2", "pants_1_2"] {
            assert!(TwistGenerator::catalog(s, n).is_ok(), "{n}");
        }
        for n in ["a_3", "c_2", "bdry_3", "pants_2_1", "d_1", "a_0"] {
            assert!(TwistGenerator::catalog(s, n).is_err(), "{n}");
        }
    }

    #[test]
    fn catalog_pi1_actions_are_automorphisms_fixing_boundary() {
        let s = sig(3, 1);
        let d = FreeWord::boundary_word(3);
        for n in ["a_1", "a_2", "a_3", "b_1", "b_3", "c_1", "c_2"] {
            let g = TwistGenerator::catalog(s, n).unwrap();
            assert_eq!(g.pi1().apply(&d), d, "{n}");
            assert!(g.pi1_inverse().unwrap().after(g.pi1()).is_identity(), "{n}");
            assert!(g.pi1().after(g.pi1_inverse().unwrap()).is_identity(), "{n}");
            let phi = MappingClass::twist(&g, 1).unwrap();
            assert!(phi.filled_matches_homology().unwrap(), "{n}");
            assert!(phi.preserves_form().unwrap(), "{n}");
        }
    }

    #[test]
    fn c_twist_image_word() {
        // the loop ρ_{2i} ↦ α_hi⁻¹; its image is α⁻¹ β'⁻¹ α β α⁻¹
        let s = sig(2, 1);
        let g = TwistGenerator::catalog(s, "c_1").unwrap();
        let img = g.pi1().apply(&"A2".parse().unwrap());
        assert_eq!(img.to_string(), "A2B1a2b2A2");
    }

    #[test]
    fn identity_and_inverse_laws() {
        let s = sig(2, 2);
        let phi = MappingClass::from_catalog(s, &[("a_1", 2), ("c_1", -1), ("bdry_1", 3), ("b_2", 1)]).unwrap();
        let id = MappingClass::identity(s);
        let left = compose(&id, &phi).unwrap();
        assert_eq!((left.abs_matrix(), left.diff_matrix(), left.filled_image()), (phi.abs_matrix(), phi.diff_matrix(), phi.filled_image()));
        let both = compose(&phi, &phi.inverse().unwrap()).unwrap();
        assert_eq!(both.abs_matrix(), &lattice::identity(s.rank()));
        assert_eq!(both.diff_matrix(), &lattice::zeros(s.rank(), s.rank()));
        assert!(both.filled_image().is_identity());
    }

    #[test]
    fn absolute_action_splits_through_difference() {
        // A = I + D·R where R sends loops to relative classes
        let s = sig(2, 2);
        let phi = MappingClass::from_catalog(s, &[("a_2", 1), ("c_1", 2), ("b_1", -1)]).unwrap();
        for j in 1..=s.rank() {
            let y = AbsClass::basis(s, j).unwrap();
            let via = y.add(&phi.diff_apply(&abs_to_rel(&y)).unwrap()).unwrap();
            assert_eq!(phi.act_abs(&y).unwrap(), via);
        }
    }

    #[test]
    fn custom_twist_checks() {
        let s = sig(1, 1);
        let a = TwistGenerator::catalog(s, "a_1").unwrap();
        let ok = TwistGenerator::custom("a", a.class.clone(), Some(a.pi1().clone()), a.pi1_inverse().cloned());
        assert!(ok.is_ok());
        let wrong = TwistGenerator::custom("x", a.class.clone(), None, None);
        assert!(wrong.is_err());
        let gen = ok.unwrap();
        let no_inv = TwistGenerator::custom("a", gen.class.clone(), Some(gen.pi1().clone()), None).unwrap();
        assert!(matches!(MappingClass::twist(&no_inv, -1), Err(Error::NotInvertible(_))));
    }
}
