//! Surface signatures and the integral homology lattices of a page.
//!
//! Indices are 1-based in the public API (matching the usual naming of the
//! loops ρ₁, ρ₂, …) and 0-based in storage: loop `j` lives at `coords[j - 1]`.
//!
//! Absolute classes use the loop basis: indices `1..r` are boundary-encircling
//! loops, then `g` genus pairs `(r + 2m, r + 2m + 1)` with intersection `+1`.
//! Relative classes are stored in the basis dual to the loops under the
//! homology/cohomology pairing, so pairing is the plain dot product. Classes
//! given in the arc basis (ρ'ⱼ, the arcs dual to the loops by intersection)
//! are converted by [`rel_from_rho_prime`].

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};
use crate::lattice::{self, Mat};

/// The page `S_{g,r}`: genus `g`, `r ≥ 1` boundary components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurfaceSig {
    pub genus: u32,
    #[serde(rename = "boundary")]
    pub boundary_count: u32,
}

impl SurfaceSig {
    pub fn new(genus: u32, boundary_count: u32) -> Result<Self> {
        if boundary_count == 0 {
            return Err(Error::InvalidSignature("a page needs at least one boundary component".into()));
        }
        if genus > 1000 || boundary_count > 1000 {
            return Err(Error::InvalidSignature(format!("S_{{{genus},{boundary_count}}} is too large")));
        }
        Ok(Self { genus, boundary_count })
    }

    /// The disc, page of the trivial open book of S³.
    pub fn disc() -> Self {
        Self { genus: 0, boundary_count: 1 }
    }

    pub fn validate(&self) -> Result<()> {
        Self::new(self.genus, self.boundary_count).map(|_| ())
    }

    /// Rank of H₁(S) and of H₁(S, ∂S): `2g + r − 1`.
    pub fn rank(&self) -> usize {
        2 * self.genus as usize + self.boundary_count as usize - 1
    }

    /// Number of boundary-encircling loops, `r − 1`.
    pub fn boundary_loops(&self) -> usize {
        self.boundary_count as usize - 1
    }

    pub fn is_planar(&self) -> bool {
        self.genus == 0
    }

    /// 0-based storage positions of the `m`-th genus pair (`m` 0-based).
    pub fn genus_pair(&self, m: usize) -> (usize, usize) {
        let p = self.boundary_loops() + 2 * m;
        (p, p + 1)
    }

    /// Whether 0-based position `i` belongs to the genus block.
    pub fn is_genus_index(&self, i: usize) -> bool {
        i >= self.boundary_loops()
    }

    pub fn check_index(&self, j: usize) -> Result<()> {
        if j == 0 || j > self.rank() {
            Err(Error::IndexOutOfRange { what: "basis", index: j, max: self.rank() })
        } else {
            Ok(())
        }
    }

    pub fn same_as(&self, other: &SurfaceSig) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::SignatureMismatch(self.to_string(), other.to_string()))
        }
    }

    /// Torus chambers first, then annulus chambers.
    pub fn chambers(&self) -> Vec<Chamber> {
        let mut out = Vec::with_capacity(self.genus as usize + self.boundary_loops());
        for m in 0..self.genus as usize {
            let (p, q) = self.genus_pair(m);
            out.push(Chamber { kind: ChamberKind::Torus, index: m + 1, owned: vec![p + 1, q + 1] });
        }
        for k in 0..self.boundary_loops() {
            out.push(Chamber { kind: ChamberKind::Annulus, index: k + 1, owned: vec![k + 1] });
        }
        out
    }
}

impl fmt::Display for SurfaceSig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S_{{{},{}}}", self.genus, self.boundary_count)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChamberKind {
    Torus,
    Annulus,
}

/// A piece of the page cut along the walls: a once-punctured torus or an annulus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chamber {
    pub kind: ChamberKind,
    /// 1-based within its kind.
    pub index: usize,
    /// 1-based basis indices living in this chamber.
    pub owned: Vec<usize>,
}

/// A class in H₁(S; Z), coordinates in the loop basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbsClass {
    pub sig: SurfaceSig,
    pub coords: Vec<i64>,
}

/// A class in H₁(S, ∂S; Z), coordinates in the basis dual to the loops.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RelClass {
    pub sig: SurfaceSig,
    pub coords: Vec<i64>,
}

macro_rules! class_common {
    ($t:ident) => {
        impl $t {
            pub fn new(sig: SurfaceSig, coords: Vec<i64>) -> Result<Self> {
                if coords.len() != sig.rank() {
                    return Err(Error::LengthMismatch { expected: sig.rank(), got: coords.len() });
                }
                Ok(Self { sig, coords })
            }

            pub fn zero(sig: SurfaceSig) -> Self {
                Self { sig, coords: vec![0; sig.rank()] }
            }

            /// The `j`-th basis vector, 1-based.
            pub fn basis(sig: SurfaceSig, j: usize) -> Result<Self> {
                sig.check_index(j)?;
                Ok(Self { sig, coords: lattice::basis_vector(sig.rank(), j - 1) })
            }

            pub fn is_zero(&self) -> bool {
                self.coords.iter().all(|&x| x == 0)
            }

            pub fn add(&self, other: &Self) -> Result<Self> {
                self.sig.same_as(&other.sig)?;
                Ok(Self { sig: self.sig, coords: lattice::vec_add(&self.coords, &other.coords)? })
            }

            pub fn sub(&self, other: &Self) -> Result<Self> {
                self.sig.same_as(&other.sig)?;
                Ok(Self { sig: self.sig, coords: lattice::vec_sub(&self.coords, &other.coords)? })
            }

            pub fn scale(&self, c: i64) -> Result<Self> {
                Ok(Self { sig: self.sig, coords: lattice::vec_scale(c, &self.coords)? })
            }
        }
    };
}

class_common!(AbsClass);
class_common!(RelClass);

/// The intersection form on H₁(S): zero on the boundary block, `J = [[0,1],[-1,0]]` on each genus pair.
pub fn intersection_form(sig: SurfaceSig) -> Mat {
    let n = sig.rank();
    let mut q = lattice::zeros(n, n);
    for m in 0..sig.genus as usize {
        let (p, r) = sig.genus_pair(m);
        q[p][r] = 1;
        q[r][p] = -1;
    }
    q
}

/// Algebraic intersection `y₁ · y₂`.
pub fn intersect(y1: &AbsClass, y2: &AbsClass) -> Result<i64> {
    y1.sig.same_as(&y2.sig)?;
    let mut s = 0i64;
    for m in 0..y1.sig.genus as usize {
        let (p, q) = y1.sig.genus_pair(m);
        s = lattice::add(s, lattice::mul(y1.coords[p], y2.coords[q])?)?;
        s = lattice::add(s, lattice::neg(lattice::mul(y1.coords[q], y2.coords[p])?)?)?;
    }
    Ok(s)
}

/// The pairing of a relative class with an absolute class.
pub fn pair(x: &RelClass, y: &AbsClass) -> Result<i64> {
    x.sig.same_as(&y.sig)?;
    lattice::dot(&x.coords, &y.coords)
}

/// The arc class ρ'ⱼ (1-based) in the stored relative basis.
///
/// Boundary arcs are unchanged. On a genus pair `(p, q)` the arcs are
/// `ρ'_p = ς'_q` and `ρ'_q = −ς'_p`.
pub fn rel_from_rho_prime(sig: SurfaceSig, j: usize) -> Result<RelClass> {
    sig.check_index(j)?;
    let i = j - 1;
    let mut coords = vec![0; sig.rank()];
    if !sig.is_genus_index(i) {
        coords[i] = 1;
    } else {
        let off = i - sig.boundary_loops();
        let (p, q) = sig.genus_pair(off / 2);
        if off.is_multiple_of(2) {
            coords[q] = 1;
        } else {
            coords[p] = -1;
        }
    }
    Ok(RelClass { sig, coords })
}

/// Relative class from coordinates in the arc basis.
pub fn rel_from_rho_prime_coords(sig: SurfaceSig, x: &[i64]) -> Result<RelClass> {
    if x.len() != sig.rank() {
        return Err(Error::LengthMismatch { expected: sig.rank(), got: x.len() });
    }
    let mut out = RelClass::zero(sig);
    for (j, &c) in x.iter().enumerate() {
        if c != 0 {
            out = out.add(&rel_from_rho_prime(sig, j + 1)?.scale(c)?)?;
        }
    }
    Ok(out)
}

/// Arc-basis coordinates of a relative class (inverse of [`rel_from_rho_prime_coords`]).
pub fn rho_prime_coords(a: &RelClass) -> Vec<i64> {
    let sig = a.sig;
    let mut x = a.coords.clone();
    for m in 0..sig.genus as usize {
        let (p, q) = sig.genus_pair(m);
        x[p] = a.coords[q];
        x[q] = -a.coords[p];
    }
    x
}

/// The image of a loop class in relative homology. Boundary loops die; genus
/// loops become the arcs they are parallel to.
pub fn abs_to_rel(y: &AbsClass) -> RelClass {
    let sig = y.sig;
    let mut coords = vec![0; sig.rank()];
    for m in 0..sig.genus as usize {
        let (p, q) = sig.genus_pair(m);
        // y_p ρ'_p + y_q ρ'_q = y_p ς'_q − y_q ς'_p
        coords[q] = y.coords[p];
        coords[p] = -y.coords[q];
    }
    RelClass { sig, coords }
}
