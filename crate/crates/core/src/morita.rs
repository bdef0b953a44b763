//! Morita's d-function and the crossed homomorphism k built from it.

use crate::error::{Error, Result};
use crate::freegroup::{FreeWord, Gen, Letter};
use crate::mapclass::{genus_letters, MappingClass};
use crate::surface::{rho_prime_coords, RelClass, SurfaceSig};

/// d on the rank-two alphabet: each `β^δ` contributes `δ` times the α-exponent
/// accumulated to its left. Equivalent to reading the word in the interleaved
/// form `α^{ε₁}β^{δ₁}⋯` with unit exponents and summing `δ_i Σ_{j≤i} ε_j`.
pub fn d_value(w: &FreeWord) -> Result<i64> {
    let mut alpha_sum = 0i64;
    let mut d = 0i64;
    for l in w.letters() {
        match l.gen {
            Gen::Alpha(0) => alpha_sum += l.exponent(),
            Gen::Beta(0) => d += l.exponent() * alpha_sum,
            other => {
                return Err(Error::WrongAlphabet(format!("d expects a word in {{a, b}}, found generator index {}", other.index())))
            }
        }
    }
    Ok(d)
}

/// Keep only the `i`-th pair `α_i, β_i`, renamed to the bare `α, β`, and reduce.
pub fn project_p(genus: u32, i: u32, w: &FreeWord) -> Result<FreeWord> {
    if i == 0 || i > genus {
        return Err(Error::IndexOutOfRange { what: "projection", index: i as usize, max: genus as usize });
    }
    Ok(FreeWord::from_letters(w.letters().iter().filter(|l| l.gen.index() == i).map(|l| {
        let gen = match l.gen {
            Gen::Alpha(_) => Gen::Alpha(0),
            Gen::Beta(_) => Gen::Beta(0),
        };
        Letter::new(gen, l.inverse)
    })))
}

/// A word on the capped-off surface representing the image of `a`.
///
/// Boundary coordinates are dropped; each genus arc contributes its loop's
/// letter raised to the arc-basis coordinate, pairs in ascending order.
pub fn rep_word(a: &RelClass) -> FreeWord {
    let sig = a.sig;
    let x = rho_prime_coords(a);
    let mut w = FreeWord::empty();
    for m in 0..sig.genus as usize {
        let (p, q) = sig.genus_pair(m);
        let (_, first, second) = genus_letters(sig, m);
        w = w.mul(&first.pow(x[p])).mul(&second.pow(x[q]));
    }
    w
}

/// `Σ_i d(p_i(φ w)) − d(p_i(w))` for an arbitrary representative word.
pub fn k_of_word(phi: &MappingClass, w: &FreeWord) -> Result<i64> {
    let g = phi.sig().genus;
    let image = phi.filled_image().apply(w);
    let mut k = 0i64;
    for i in 1..=g {
        k += d_value(&project_p(g, i, &image)?)? - d_value(&project_p(g, i, w)?)?;
    }
    Ok(k)
}

/// k on a one-boundary surface.
pub fn k_value(phi: &MappingClass, a: &RelClass) -> Result<i64> {
    phi.sig().same_as(&a.sig)?;
    if phi.sig().boundary_count != 1 {
        return Err(Error::Precondition(format!("k is defined on S_{{g,1}}; use the pullback on {}", phi.sig())));
    }
    pullback_k(phi, a)
}

/// k pulled back along capping off: evaluate on the filled action and the filled class.
pub fn pullback_k(phi: &MappingClass, a: &RelClass) -> Result<i64> {
    phi.sig().same_as(&a.sig)?;
    if phi.sig().genus == 0 {
        return Ok(0);
    }
    k_of_word(phi, &rep_word(a))
}

/// The filled surface of `sig`.
pub fn filled(sig: SurfaceSig) -> SurfaceSig {
    SurfaceSig { genus: sig.genus, boundary_count: 1 }
}
