//! Self-linking numbers of closed braids in open books.
//!
//! `sl = −n + hat_exp(b) − ⟨φ*a, [b]⟩ + c(φ, a)`, where `a` is a relative
//! class with `[b] = a − φ*a`.

use serde::Serialize;
use std::fmt;

use crate::error::{Error, Result};
use crate::lattice;
use crate::mapclass::{MappingClass, TwistGenerator};
use crate::morita::pullback_k;
use crate::snf;
use crate::surface::{
    intersection_form, pair, rel_from_rho_prime, rel_from_rho_prime_coords, rho_prime_coords, AbsClass, ChamberKind,
    RelClass, SurfaceSig,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BraidGen {
    /// Standard generator `σ_k` exchanging strands `k` and `k+1`.
    Sigma(u32),
    /// Strand `n` travelling once around the loop `ρ_j`.
    Rho(u32),
}

impl fmt::Display for BraidGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BraidGen::Sigma(k) => write!(f, "s_{k}"),
            BraidGen::Rho(j) => write!(f, "r_{j}"),
        }
    }
}

impl std::str::FromStr for BraidGen {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidGenerator(format!("unknown braid generator {s:?}"));
        let (head, idx) = s.trim().split_once('_').ok_or_else(bad)?;
        let idx: u32 = idx.parse().map_err(|_| bad())?;
        match head {
            "s" | "sigma" => Ok(BraidGen::Sigma(idx)),
            "r" | "rho" => Ok(BraidGen::Rho(idx)),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BraidWord {
    sig: SurfaceSig,
    strands: u32,
    letters: Vec<(BraidGen, i64)>,
}

impl BraidWord {
    pub fn new(sig: SurfaceSig, strands: u32, letters: Vec<(BraidGen, i64)>) -> Result<Self> {
        if strands == 0 {
            return Err(Error::InvalidGenerator("a braid needs at least one strand".into()));
        }
        for &(g, e) in &letters {
            if e == 0 {
                return Err(Error::InvalidGenerator(format!("{g} has exponent 0")));
            }
            match g {
                BraidGen::Sigma(k) if k == 0 || k >= strands => {
                    return Err(Error::IndexOutOfRange { what: "sigma", index: k as usize, max: strands as usize - 1 })
                }
                BraidGen::Rho(j) if j == 0 || j as usize > sig.rank() => {
                    return Err(Error::IndexOutOfRange { what: "rho", index: j as usize, max: sig.rank() })
                }
                _ => {}
            }
        }
        Ok(Self { sig, strands, letters })
    }

    pub fn sig(&self) -> SurfaceSig {
        self.sig
    }

    pub fn strands(&self) -> u32 {
        self.strands
    }

    pub fn letters(&self) -> &[(BraidGen, i64)] {
        &self.letters
    }

    fn letter_class(&self, g: BraidGen) -> Vec<i64> {
        match g {
            BraidGen::Sigma(_) => vec![0; self.sig.rank()],
            BraidGen::Rho(j) => lattice::basis_vector(self.sig.rank(), j as usize - 1),
        }
    }
}

/// `Σ ε_i [b_i]`, with σ-letters contributing nothing.
pub fn braid_homology(b: &BraidWord) -> Result<AbsClass> {
    let mut v = vec![0i64; b.sig.rank()];
    for &(g, e) in &b.letters {
        if let BraidGen::Rho(j) = g {
            let i = j as usize - 1;
            v[i] = lattice::add(v[i], e)?;
        }
    }
    AbsClass::new(b.sig, v)
}

/// `Σ ε_i − Σ_{j<i} ε_i ε_j [b_j]·[b_i]`
pub fn hat_exp(b: &BraidWord) -> Result<i64> {
    let q = intersection_form(b.sig);
    let mut total = 0i64;
    // running Σ_{j<i} ε_j [b_j], so the correction for letter i is (prefix · [b_i]) ε_i
    let mut prefix = vec![0i64; b.sig.rank()];
    for &(g, e) in &b.letters {
        total = lattice::add(total, e)?;
        let cls = b.letter_class(g);
        let qb = lattice::mat_vec(&q, &cls)?;
        let cross = lattice::dot(&prefix, &qb)?;
        total = lattice::add(total, lattice::neg(lattice::mul(cross, e)?)?)?;
        prefix = lattice::axpy(&prefix, e, &cls)?;
    }
    Ok(total)
}

/// A class `a` with `[b] = a − φ*a`, plus the lattice of other choices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ASolution {
    pub a: RelClass,
    /// Adding any integer combination of these to `a` gives another solution.
    pub kernel: Vec<RelClass>,
}

/// Solves `tᵀ s = [b]` and returns `a = Σ s_i ρ'_i`.
pub fn solve_a(b: &BraidWord, phi: &MappingClass) -> Result<ASolution> {
    phi.sig().same_as(&b.sig)?;
    let sig = phi.sig();
    let target = braid_homology(b)?;
    let tt = lattice::transpose(&phi.t_matrix()?);
    let sol = snf::solve(&tt, &target.coords)?.ok_or(Error::NotNullHomologous)?;
    let a = rel_from_rho_prime_coords(sig, &sol.particular)?;
    if !residual_is_zero(phi, &a, &target)? {
        return Err(Error::Internal("solve_a produced a nonzero residual".into()));
    }
    let kernel = sol.kernel.iter().map(|k| rel_from_rho_prime_coords(sig, k)).collect::<Result<_>>()?;
    Ok(ASolution { a, kernel })
}

/// `a − φ*a = [b]` exactly.
pub fn residual_is_zero(phi: &MappingClass, a: &RelClass, b_class: &AbsClass) -> Result<bool> {
    let d = phi.diff_apply(a)?;
    Ok(lattice::vec_add(&d.coords, &b_class.coords)?.iter().all(|&x| x == 0))
}

/// The closed three-term expression
/// `−2 π*k(φ,a) + Σ_j ⟨ς'_j, φ*a − a⟩ − Σ_j ⟨a, ρ_j⟩ ⟨ς'_j, φ*ς'_j − ς'_j⟩`.
///
/// It agrees with [`c_value`] on a single twist evaluated on an arc-basis
/// vector, and everywhere on planar pages.
pub fn c_three_term(phi: &MappingClass, a: &RelClass) -> Result<i64> {
    phi.sig().same_as(&a.sig)?;
    let k = pullback_k(phi, a)?;
    let da = phi.diff_apply(a)?;
    let second = da.coords.iter().try_fold(0i64, |s, &x| lattice::add(s, x))?;
    let diff = phi.diff_matrix();
    let mut third = 0i64;
    for (j, &aj) in a.coords.iter().enumerate() {
        third = lattice::add(third, lattice::mul(aj, diff[j][j])?)?;
    }
    lattice::add(lattice::add(lattice::mul(-2, k)?, second)?, lattice::neg(third)?)
}

/// Values of c for one positive twist on the arc basis `ρ'_1, …`.
pub fn twist_c_functional(gen: &TwistGenerator) -> Result<Vec<i64>> {
    let sig = gen.sig();
    let t = MappingClass::twist(gen, 1)?;
    (1..=sig.rank()).map(|j| c_three_term(&t, &rel_from_rho_prime(sig, j)?)).collect()
}

/// c(φ, a), linear in `a` and satisfying `c(ψφ, a) = c(φ, a) + c(ψ, φ*a)`.
///
/// Built from the per-twist functionals; a letter `T^p` contributes
/// `p λ(a) + p(p−1)/2 λ(v)` where `v = T*a − a` (so `T^p_* a = a + p v`).
pub fn c_value(phi: &MappingClass, a: &RelClass) -> Result<i64> {
    phi.sig().same_as(&a.sig)?;
    let mut cur = a.clone();
    let mut total = 0i64;
    for (gen, p) in phi.word() {
        let lambda = twist_c_functional(gen)?;
        let v = MappingClass::twist(gen, 1)?.act_rel(&cur)?.sub(&cur)?;
        let la = lattice::dot(&lambda, &rho_prime_coords(&cur))?;
        let lv = lattice::dot(&lambda, &rho_prime_coords(&v))?;
        let tri = lattice::mul(*p, lattice::add(*p, -1)?)? / 2;
        total = lattice::add(total, lattice::add(lattice::mul(*p, la)?, lattice::mul(tri, lv)?)?)?;
        cur = cur.add(&v.scale(*p)?)?;
    }
    Ok(total)
}

/// `−Σ_j x_j Σ_{i≠j} t_{j,i}` on a planar page, `x` the arc-basis coordinates of `a`.
pub fn c_planar(phi: &MappingClass, a: &RelClass) -> Result<i64> {
    phi.sig().same_as(&a.sig)?;
    if !phi.sig().is_planar() {
        return Err(Error::NonPlanar(phi.sig().genus));
    }
    let t = phi.t_matrix()?;
    let x = rho_prime_coords(a);
    let mut total = 0i64;
    for (j, row) in t.iter().enumerate() {
        let off: i64 = row.iter().enumerate().filter(|&(i, _)| i != j).try_fold(0i64, |s, (_, &v)| lattice::add(s, v))?;
        total = lattice::add(total, lattice::mul(x[j], off)?)?;
    }
    lattice::neg(total)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SlReport {
    pub sl: i64,
    /// Arc-basis coordinates of the class used.
    pub a: Vec<i64>,
    pub n: u32,
    pub hat_exp: i64,
    pub pairing_term: i64,
    pub c: i64,
}

/// Self-linking number of the closure of `b` in the open book `(S, φ)`.
/// Uses `a` when given (after checking it), otherwise solves for one.
pub fn self_linking(phi: &MappingClass, b: &BraidWord, a: Option<&RelClass>) -> Result<SlReport> {
    phi.sig().same_as(&b.sig)?;
    let b_class = braid_homology(b)?;
    let a = match a {
        Some(a) => {
            phi.sig().same_as(&a.sig)?;
            if !residual_is_zero(phi, a, &b_class)? {
                return Err(Error::InconsistentA);
            }
            a.clone()
        }
        None => solve_a(b, phi)?.a,
    };
    let he = hat_exp(b)?;
    let pairing_term = pair(&phi.act_rel(&a)?, &b_class)?;
    let c = c_value(phi, &a)?;
    let sl = lattice::add(lattice::add(-(b.strands as i64), he)?, lattice::add(lattice::neg(pairing_term)?, c)?)?;
    Ok(SlReport { sl, a: rho_prime_coords(&a), n: b.strands, hat_exp: he, pairing_term, c })
}

/// Planar closed form `−n + a_σ + Σ_j a_{ρ_j}(1 − s_j) − Σ_j s_j Σ_{i≠j} t_{j,i}`.
pub fn sl_planar(phi: &MappingClass, b: &BraidWord) -> Result<i64> {
    phi.sig().same_as(&b.sig)?;
    if !phi.sig().is_planar() {
        return Err(Error::NonPlanar(phi.sig().genus));
    }
    let s = rho_prime_coords(&solve_a(b, phi)?.a);
    let t = phi.t_matrix()?;
    let mut a_sigma = 0i64;
    let mut a_rho = vec![0i64; phi.sig().rank()];
    for &(g, e) in &b.letters {
        match g {
            BraidGen::Sigma(_) => a_sigma = lattice::add(a_sigma, e)?,
            BraidGen::Rho(j) => a_rho[j as usize - 1] = lattice::add(a_rho[j as usize - 1], e)?,
        }
    }
    let mut sl = lattice::add(-(b.strands as i64), a_sigma)?;
    for j in 0..a_rho.len() {
        sl = lattice::add(sl, lattice::mul(a_rho[j], lattice::add(1, -s[j])?)?)?;
        let off = t[j].iter().enumerate().filter(|&(i, _)| i != j).try_fold(0i64, |acc, (_, &v)| lattice::add(acc, v))?;
        sl = lattice::add(sl, lattice::neg(lattice::mul(s[j], off)?)?)?;
    }
    Ok(sl)
}

/// Coordinates of a relative class grouped by chamber.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormalFormCoords {
    /// `(p, q)` per torus chamber.
    pub torus: Vec<(i64, i64)>,
    /// Number of parallel arcs per annulus chamber.
    pub annulus: Vec<i64>,
}

pub fn normal_form(a: &RelClass) -> NormalFormCoords {
    let mut torus = Vec::new();
    let mut annulus = Vec::new();
    for ch in a.sig.chambers() {
        match ch.kind {
            ChamberKind::Torus => torus.push((a.coords[ch.owned[0] - 1], a.coords[ch.owned[1] - 1])),
            ChamberKind::Annulus => annulus.push(a.coords[ch.owned[0] - 1]),
        }
    }
    NormalFormCoords { torus, annulus }
}

pub fn from_normal_form(sig: SurfaceSig, nf: &NormalFormCoords) -> Result<RelClass> {
    if nf.torus.len() != sig.genus as usize || nf.annulus.len() != sig.boundary_loops() {
        return Err(Error::Precondition(format!("normal form does not fit {sig}")));
    }
    let mut coords = vec![0; sig.rank()];
    coords[..sig.boundary_loops()].copy_from_slice(&nf.annulus);
    for (m, &(p, q)) in nf.torus.iter().enumerate() {
        let (i, j) = sig.genus_pair(m);
        coords[i] = p;
        coords[j] = q;
    }
    RelClass::new(sig, coords)
}
