//! The separatrix graphs G₋₋ and G₊₊ and the analyses built on them.

use serde::Serialize;
use std::collections::HashMap;

use super::complex::UnionFind;
use super::{FoliatedSurface, RegionKind};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum Vertex {
    Elliptic(String),
    /// A separatrix end on ∂F, numbered in creation order.
    Fake(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SepGraph {
    pub sign: i8,
    pub vertices: Vec<Vertex>,
    /// `(u, v, region id)`, one per qualifying hyperbolic point.
    pub edges: Vec<(usize, usize, String)>,
}

/// A connected component, as vertex and edge indices into its graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

impl SepGraph {
    pub fn fake_count(&self) -> usize {
        self.vertices.iter().filter(|v| matches!(v, Vertex::Fake(_))).count()
    }

    pub fn components(&self) -> Vec<Component> {
        let mut uf = UnionFind::new(self.vertices.len());
        for (u, v, _) in &self.edges {
            uf.union(*u, *v);
        }
        let mut by_root: HashMap<usize, Component> = HashMap::new();
        let mut order = Vec::new();
        for v in 0..self.vertices.len() {
            let r = uf.find(v);
            by_root
                .entry(r)
                .or_insert_with(|| {
                    order.push(r);
                    Component { vertices: Vec::new(), edges: Vec::new() }
                })
                .vertices
                .push(v);
        }
        for (i, (u, _, _)) in self.edges.iter().enumerate() {
            let r = uf.find(*u);
            by_root.get_mut(&r).expect("root exists").edges.push(i);
        }
        order.into_iter().map(|r| by_root.remove(&r).expect("root exists")).collect()
    }

    fn is_tree(&self) -> bool {
        !self.vertices.is_empty() && self.components().len() == 1 && self.edges.len() + 1 == self.vertices.len()
    }

    fn is_circle(&self) -> bool {
        if self.vertices.is_empty() || self.components().len() != 1 || self.edges.len() != self.vertices.len() {
            return false;
        }
        let mut deg = vec![0usize; self.vertices.len()];
        for (u, v, _) in &self.edges {
            deg[*u] += 1;
            deg[*v] += 1;
        }
        deg.iter().all(|&d| d == 2)
    }
}

/// G₋₋ (`sign < 0`) or G₊₊ (`sign > 0`).
pub fn build_sep_graph(fs: &FoliatedSurface, sign: i8) -> Result<SepGraph> {
    fs.validate()?;
    let sign = sign.signum();
    let mut vertices: Vec<Vertex> =
        fs.elliptic.iter().filter(|e| e.sign == sign).map(|e| Vertex::Elliptic(e.id.clone())).collect();
    let index: HashMap<String, usize> = vertices
        .iter()
        .enumerate()
        .map(|(i, v)| match v {
            Vertex::Elliptic(id) => (id.clone(), i),
            Vertex::Fake(_) => unreachable!(),
        })
        .collect();
    let mut fakes = 0;
    let mut fake = |vertices: &mut Vec<Vertex>| {
        vertices.push(Vertex::Fake(fakes));
        fakes += 1;
        vertices.len() - 1
    };
    let mut edges = Vec::new();
    for r in fs.regions.iter().filter(|r| r.sign == sign) {
        let at = |k: usize| index[&r.corners[k]];
        let e = match (sign > 0, r.kind) {
            (true, RegionKind::Aa) => (at(0), at(1)),
            (true, RegionKind::Ab | RegionKind::Bb) => (at(0), at(2)),
            (false, RegionKind::Bb) => (at(1), at(3)),
            (false, RegionKind::Ab) => (at(1), fake(&mut vertices)),
            (false, RegionKind::Aa) => (fake(&mut vertices), fake(&mut vertices)),
            _ => continue,
        };
        edges.push((e.0, e.1, r.id.clone()));
    }
    Ok(SepGraph { sign, vertices, edges })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OtReport {
    pub ot_disc: bool,
    /// Failed conditions; empty exactly when `ot_disc` holds.
    pub reasons: Vec<String>,
}

/// Whether the surface is a transverse overtwisted disc.
///
/// Checks every condition visible in the region data. That the boundary is
/// a positively braided unknot is an embedding property and is assumed.
pub fn ot_disc_report(fs: &FoliatedSurface) -> Result<OtReport> {
    let cx = fs.validate()?;
    let mut reasons = Vec::new();
    if cx.boundary_components != 1 || cx.chi != 1 {
        reasons.push(format!("not a disc: χ = {}, {} boundary components", cx.chi, cx.boundary_components));
    }
    if fs.has_c_regions() {
        reasons.push("foliation contains c-circles".into());
    }
    let gmm = build_sep_graph(fs, -1)?;
    if gmm.fake_count() > 0 {
        reasons.push(format!("G₋₋ has {} fake vertices", gmm.fake_count()));
    }
    if !gmm.is_tree() {
        reasons.push("G₋₋ is not a nonempty connected tree".into());
    }
    let gpp = build_sep_graph(fs, 1)?;
    if !gpp.is_circle() {
        reasons.push("G₊₊ is not a circle".into());
    }
    let ot = reasons.is_empty();
    if ot && fs.sl_boundary()? != 1 {
        return Err(Error::Internal("transverse overtwisted disc without sl = 1".into()));
    }
    Ok(OtReport { ot_disc: ot, reasons })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BeReport {
    pub sl: i64,
    pub chi: i64,
    pub slack: i64,
    /// `sl > −χ`
    pub violated: bool,
    /// `sl + χ = 2(e₋ − h₋)`
    pub identity_check: bool,
}

pub fn be_check(fs: &FoliatedSurface) -> Result<BeReport> {
    let cx = fs.validate()?;
    if cx.boundary_components == 0 {
        return Err(Error::Precondition("the inequality concerns surfaces with boundary; this one is closed".into()));
    }
    let c = fs.counts()?;
    let chi = fs.euler_char()?;
    let sl = c.sl();
    Ok(BeReport { sl, chi, slack: sl + chi, violated: sl > -chi, identity_check: sl + chi == 2 * (c.e_minus - c.h_minus) })
}

/// A component of G₋₋ that is a tree without fake vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// Negative elliptic point ids.
    pub vertices: Vec<String>,
    /// Regions carrying its edges.
    pub edges: Vec<String>,
}

/// A component of G₋₋ with `e₋ − h₋ = 1` and no fake vertices, if any.
pub fn find_ot_witness(fs: &FoliatedSurface) -> Result<Option<Witness>> {
    if !fs.has_boundary()? {
        return Err(Error::Precondition("witness search needs a surface with boundary".into()));
    }
    let g = build_sep_graph(fs, -1)?;
    for comp in g.components() {
        let mut ids = Vec::new();
        let mut has_fake = false;
        for &v in &comp.vertices {
            match &g.vertices[v] {
                Vertex::Elliptic(id) => ids.push(id.clone()),
                Vertex::Fake(_) => has_fake = true,
            }
        }
        if !has_fake && ids.len() == comp.edges.len() + 1 {
            return Ok(Some(Witness { vertices: ids, edges: comp.edges.iter().map(|&e| g.edges[e].2.clone()).collect() }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::super::samples::*;
    use super::super::*;
    use super::*;

    #[test]
    fn graphs_of_the_disc() {
        let d = ot_disc();
        let gmm = build_sep_graph(&d, -1).unwrap();
        assert_eq!(gmm.vertices, vec![Vertex::Elliptic("w".into())]);
        assert!(gmm.edges.is_empty());
        let gpp = build_sep_graph(&d, 1).unwrap();
        assert_eq!(gpp.edges.len(), 2);
        assert!(gpp.is_circle());
    }

    #[test]
    fn ot_predicate() {
        assert!(ot_disc_report(&ot_disc()).unwrap().ot_disc);
        let r = ot_disc_report(&a_disc()).unwrap();
        assert!(!r.ot_disc);
        assert!(r.reasons.iter().any(|m| m.contains("G₋₋")));
        assert!(!ot_disc_report(&sphere()).unwrap().ot_disc);
    }

    #[test]
    fn bennequin_eliashberg() {
        let r = be_check(&ot_disc()).unwrap();
        assert_eq!((r.sl, r.chi, r.violated, r.identity_check), (1, 1, true, true));
        let r = be_check(&a_disc()).unwrap();
        assert_eq!((r.sl, r.chi, r.violated), (-1, 1, false));
        assert!(be_check(&sphere()).is_err());
    }

    #[test]
    fn witnesses() {
        let w = find_ot_witness(&ot_disc()).unwrap().unwrap();
        assert_eq!(w.vertices, vec!["w".to_string()]);
        assert!(w.edges.is_empty());
        assert!(find_ot_witness(&a_disc()).unwrap().is_none());
        assert!(matches!(find_ot_witness(&sphere()), Err(Error::Precondition(_))));
    }

    #[test]
    fn negative_aa_gives_two_fakes() {
        let mut fs = FoliatedSurface {
            elliptic: vec![
                EllipticPoint { id: "v1".into(), sign: 1, binding: None },
                EllipticPoint { id: "v2".into(), sign: 1, binding: None },
            ],
            regions: vec![Region::new("R", RegionKind::Aa, -1, &["v1", "v2"])],
            ..Default::default()
        };
        fs.glue("R", "s1", "R", "s4");
        fs.glue("R", "s2", "R", "s3");
        let g = build_sep_graph(&fs, -1).unwrap();
        assert_eq!(g.fake_count(), 2);
        assert_eq!(g.edges.len(), 1);
        assert!(build_sep_graph(&fs, 1).unwrap().edges.is_empty());
    }
}
