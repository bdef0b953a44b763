//! Combinatorial open book foliations, stored as region decompositions.
//!
//! Each region holds one hyperbolic point and has a fixed boundary layout.
//! Corners are listed counter-clockwise and side `k` runs from corner `k`
//! toward the next corner (or toward ∂F for a-sides). Gluing two sides
//! identifies them with reversed traversal, so the start of one meets the
//! end of the other.
//!
//! | kind | corners        | sides (in order)                                   |
//! |------|----------------|----------------------------------------------------|
//! | aa   | v1+ v2+        | a(v1→∂) ∂ a(∂→v2) a(v2→∂) ∂ a(∂→v1)                |
//! | ab   | v1+ w− v2+     | b(v1→w) b(w→v2) a(v2→∂) ∂ a(∂→v1)                  |
//! | bb   | v1+ w1− v2+ w2−| b(v1→w1) b(w1→v2) b(v2→w2) b(w2→v1)               |
//! | ac   | v+             | a(v→∂) ∂ a(∂→v) c                                  |
//! | bc   | v+ w−          | b(v→w) b(w→v) c                                    |
//! | cc   |                | c c c                                              |

mod complex;
mod extract;
mod graph;

pub use complex::Complex;
pub use extract::extract_ot_disc;
pub use graph::{be_check, build_sep_graph, find_ot_witness, ot_disc_report, BeReport, Component, OtReport, SepGraph, Vertex, Witness};

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllipticPoint {
    pub id: String,
    pub sign: i8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub binding: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegionKind {
    Aa,
    Ab,
    Bb,
    Ac,
    Bc,
    Cc,
}

impl fmt::Display for RegionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RegionKind::Aa => "aa",
            RegionKind::Ab => "ab",
            RegionKind::Bb => "bb",
            RegionKind::Ac => "ac",
            RegionKind::Bc => "bc",
            RegionKind::Cc => "cc",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SideType {
    A,
    B,
    C,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum End {
    Corner(usize),
    Bdry,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SideShape {
    pub ty: SideType,
    /// `None` for c-sides, which are closed circles.
    pub ends: Option<(End, End)>,
}

#[derive(Debug)]
pub struct Layout {
    pub corner_signs: &'static [i8],
    pub sides: &'static [SideShape],
    /// Sides followed by a segment of ∂F.
    pub boundary_after: &'static [usize],
    /// Euler characteristic of the open region.
    pub chi: i64,
}

const fn a(from: End, to: End) -> SideShape {
    SideShape { ty: SideType::A, ends: Some((from, to)) }
}
const fn b(from: usize, to: usize) -> SideShape {
    SideShape { ty: SideType::B, ends: Some((End::Corner(from), End::Corner(to))) }
}
const C: SideShape = SideShape { ty: SideType::C, ends: None };
use End::{Bdry, Corner};

static AA: Layout = Layout {
    corner_signs: &[1, 1],
    sides: &[a(Corner(0), Bdry), a(Bdry, Corner(1)), a(Corner(1), Bdry), a(Bdry, Corner(0))],
    boundary_after: &[0, 2],
    chi: 1,
};
static AB: Layout = Layout {
    corner_signs: &[1, -1, 1],
    sides: &[b(0, 1), b(1, 2), a(Corner(2), Bdry), a(Bdry, Corner(0))],
    boundary_after: &[2],
    chi: 1,
};
static BB: Layout = Layout { corner_signs: &[1, -1, 1, -1], sides: &[b(0, 1), b(1, 2), b(2, 3), b(3, 0)], boundary_after: &[], chi: 1 };
static AC: Layout =
    Layout { corner_signs: &[1], sides: &[a(Corner(0), Bdry), a(Bdry, Corner(0)), C], boundary_after: &[0], chi: 0 };
static BC: Layout = Layout { corner_signs: &[1, -1], sides: &[b(0, 1), b(1, 0), C], boundary_after: &[], chi: 0 };
static CC: Layout = Layout { corner_signs: &[], sides: &[C, C, C], boundary_after: &[], chi: -1 };

impl RegionKind {
    pub fn layout(self) -> &'static Layout {
        match self {
            RegionKind::Aa => &AA,
            RegionKind::Ab => &AB,
            RegionKind::Bb => &BB,
            RegionKind::Ac => &AC,
            RegionKind::Bc => &BC,
            RegionKind::Cc => &CC,
        }
    }

    pub fn has_c(self) -> bool {
        matches!(self, RegionKind::Ac | RegionKind::Bc | RegionKind::Cc)
    }

    /// Corner indices of the two positive elliptic points joined by the singular leaf.
    pub fn singular_leaf_corners(self) -> Option<(usize, usize)> {
        match self {
            RegionKind::Aa => Some((0, 1)),
            RegionKind::Ab | RegionKind::Bb => Some((0, 2)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub id: String,
    #[serde(rename = "type")]
    pub kind: RegionKind,
    pub sign: i8,
    #[serde(default)]
    pub corners: Vec<String>,
    /// Side names; defaults to `s1, s2, …`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sides: Vec<String>,
}

impl Region {
    pub fn new(id: impl Into<String>, kind: RegionKind, sign: i8, corners: &[&str]) -> Self {
        Self { id: id.into(), kind, sign, corners: corners.iter().map(|s| s.to_string()).collect(), sides: Vec::new() }
    }

    pub fn side_name(&self, i: usize) -> String {
        self.sides.get(i).cloned().unwrap_or_else(|| format!("s{}", i + 1))
    }

    pub fn side_index(&self, name: &str) -> Option<usize> {
        let n = self.kind.layout().sides.len();
        if self.sides.is_empty() {
            let i: usize = name.strip_prefix('s')?.parse().ok()?;
            (1..=n).contains(&i).then_some(i - 1)
        } else {
            self.sides.iter().position(|s| s == name)
        }
    }
}

/// Foliations without hyperbolic points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Atom {
    /// Disc swept by a-arcs from one positive elliptic point.
    #[serde(rename = "a-disc")]
    ADisc,
    /// Sphere swept by b-arcs between one positive and one negative elliptic point.
    #[serde(rename = "b-sphere")]
    BSphere,
    /// Torus swept by c-circles.
    #[serde(rename = "c-torus")]
    CTorus,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct FoliatedSurface {
    #[serde(default)]
    pub elliptic: Vec<EllipticPoint>,
    #[serde(default)]
    pub regions: Vec<Region>,
    /// Pairs of `"region.side"` references.
    #[serde(default)]
    pub gluing: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atom: Option<Atom>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct SingularityCounts {
    pub e_plus: i64,
    pub e_minus: i64,
    pub h_plus: i64,
    pub h_minus: i64,
}

impl SingularityCounts {
    pub fn chi(&self) -> i64 {
        self.e_plus + self.e_minus - self.h_plus - self.h_minus
    }

    /// `−(e₊ − e₋) + (h₊ − h₋)`, which is `−⟨e(ξ), [F]⟩`.
    pub fn sl(&self) -> i64 {
        -(self.e_plus - self.e_minus) + (self.h_plus - self.h_minus)
    }
}

impl FoliatedSurface {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::parse(format!("line {}, column {}", e.line(), e.column()), e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("foliated surfaces serialize")
    }

    pub fn glue(&mut self, r1: &str, s1: &str, r2: &str, s2: &str) {
        self.gluing.push([format!("{r1}.{s1}"), format!("{r2}.{s2}")]);
    }

    pub fn elliptic_sign(&self, id: &str) -> Option<i8> {
        self.elliptic.iter().find(|e| e.id == id).map(|e| e.sign)
    }

    pub fn has_c_regions(&self) -> bool {
        self.atom == Some(Atom::CTorus) || self.regions.iter().any(|r| r.kind.has_c())
    }

    /// Every violated invariant, each naming the offending piece.
    pub fn violations(&self) -> Vec<String> {
        match Complex::build(self) {
            Ok(_) => Vec::new(),
            Err(Error::Invalid(v)) => v,
            Err(e) => vec![e.to_string()],
        }
    }

    pub fn validate(&self) -> Result<Complex> {
        Complex::build(self)
    }

    pub fn counts(&self) -> Result<SingularityCounts> {
        self.validate()?;
        Ok(self.counts_unchecked())
    }

    fn counts_unchecked(&self) -> SingularityCounts {
        let mut c = SingularityCounts::default();
        for e in &self.elliptic {
            if e.sign > 0 {
                c.e_plus += 1;
            } else {
                c.e_minus += 1;
            }
        }
        for r in &self.regions {
            if r.sign > 0 {
                c.h_plus += 1;
            } else {
                c.h_minus += 1;
            }
        }
        c
    }

    /// χ from the singularity counts, cross-checked against the glued cell complex.
    pub fn euler_char(&self) -> Result<i64> {
        let cx = self.validate()?;
        let by_counts = self.counts_unchecked().chi();
        if by_counts != cx.chi {
            return Err(Error::Internal(format!("count formula gives χ = {by_counts}, cell complex gives {}", cx.chi)));
        }
        Ok(by_counts)
    }

    /// `−(e₊ − e₋) + (h₊ − h₋)`; for a closed surface this is `−⟨e(ξ), [F]⟩` rather than a self-linking number.
    pub fn sl_boundary(&self) -> Result<i64> {
        Ok(self.counts()?.sl())
    }

    pub fn has_boundary(&self) -> Result<bool> {
        Ok(self.validate()?.boundary_components > 0)
    }
}


#[cfg(test)]
mod tests {
    use super::samples::*;
    use super::*;

    #[test]
    fn counts_and_chi() {
        let s = sphere();
        assert_eq!(s.counts().unwrap(), SingularityCounts { e_plus: 2, e_minus: 2, h_plus: 1, h_minus: 1 });
        assert_eq!(s.euler_char().unwrap(), 2);
        assert_eq!(s.sl_boundary().unwrap(), 0);
        let d = ot_disc();
        assert_eq!(d.counts().unwrap(), SingularityCounts { e_plus: 2, e_minus: 1, h_plus: 2, h_minus: 0 });
        assert_eq!(d.euler_char().unwrap(), 1);
        assert_eq!(d.sl_boundary().unwrap(), 1);
        let a = a_disc();
        assert_eq!(a.counts().unwrap(), SingularityCounts { e_plus: 1, ..Default::default() });
        assert_eq!(a.euler_char().unwrap(), 1);
        assert_eq!(a.sl_boundary().unwrap(), -1);
    }

    #[test]
    fn json_round_trip() {
        let d = ot_disc();
        let back = FoliatedSurface::from_json(&d.to_json()).unwrap();
        assert_eq!(back, d);
        assert!(FoliatedSurface::from_json("{\"regions\": 3}").is_err());
    }

    #[test]
    fn side_names() {
        let mut r = Region::new("R", RegionKind::Ab, 1, &["a", "b", "c"]);
        assert_eq!(r.side_index("s4"), Some(3));
        assert_eq!(r.side_index("s5"), None);
        r.sides = vec!["x".into(), "y".into(), "z".into(), "t".into()];
        assert_eq!(r.side_index("z"), Some(2));
        assert_eq!(r.side_name(0), "x");
    }
}
