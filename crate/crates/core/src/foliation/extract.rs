//! Cutting a transverse overtwisted disc out of a surface around a witness.
//!
//! The disc is the closure of the union of regions whose b-arcs end on the
//! witness, cut open along the positive separatrices. Negative bb-tiles on
//! the witness are kept whole. A positive tile is split along its singular
//! leaf, and the half around each witness corner becomes a positive ab-tile
//! whose new a-sides are the two halves of the cut. Around a positive
//! elliptic point the kept sectors form chains; each chain becomes its own
//! elliptic point, closed up by gluing the a-sides at its two ends.

use std::collections::{HashMap, HashSet};

use super::complex::UnionFind;
use super::graph::{build_sep_graph, ot_disc_report, Vertex, Witness};
use super::{EllipticPoint, End, FoliatedSurface, Region, RegionKind};
use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq)]
enum NewSide {
    From(usize, usize),
    Cut,
}

/// Tile index and side index.
type TileSide = (usize, usize);

struct Tile {
    id: String,
    kind: RegionKind,
    sign: i8,
    /// Source corner ids, positive ones renamed later.
    corners: Vec<String>,
    sides: Vec<NewSide>,
    half: bool,
}

fn check_witness(fs: &FoliatedSurface, w: &Witness) -> Result<HashSet<String>> {
    let g = build_sep_graph(fs, -1)?;
    let want: HashSet<&String> = w.vertices.iter().collect();
    for comp in g.components() {
        let ids: HashSet<&String> = comp
            .vertices
            .iter()
            .filter_map(|&v| match &g.vertices[v] {
                Vertex::Elliptic(id) => Some(id),
                Vertex::Fake(_) => None,
            })
            .collect();
        if ids == want {
            let fakes = comp.vertices.len() - ids.len();
            if fakes == 0 && ids.len() == comp.edges.len() + 1 {
                return Ok(w.vertices.iter().cloned().collect());
            }
            break;
        }
    }
    Err(Error::Precondition("the given vertex set is not a fake-free tree component of G₋₋".into()))
}

pub fn extract_ot_disc(fs: &FoliatedSurface, witness: &Witness) -> Result<FoliatedSurface> {
    let cx = fs.validate()?;
    if cx.boundary_components == 0 {
        return Err(Error::Precondition("extraction needs a surface with boundary".into()));
    }
    if fs.has_c_regions() {
        return Err(Error::Precondition("extraction needs a foliation without c-circles".into()));
    }
    let gamma = check_witness(fs, witness)?;

    let mut tiles: Vec<Tile> = Vec::new();
    for (ri, r) in fs.regions.iter().enumerate() {
        let n = r.corners.len();
        let on_gamma: Vec<usize> = (0..n).filter(|&k| gamma.contains(&r.corners[k])).collect();
        if on_gamma.is_empty() {
            continue;
        }
        match (r.sign, r.kind) {
            (-1, RegionKind::Bb) => tiles.push(Tile {
                id: r.id.clone(),
                kind: RegionKind::Bb,
                sign: -1,
                corners: r.corners.clone(),
                sides: (0..4).map(|s| NewSide::From(ri, s)).collect(),
                half: false,
            }),
            (1, RegionKind::Ab | RegionKind::Bb) => {
                for k in on_gamma {
                    let prev = (k + n - 1) % n;
                    let next = (k + 1) % n;
                    tiles.push(Tile {
                        id: format!("{}~{}", r.id, r.corners[k]),
                        kind: RegionKind::Ab,
                        sign: 1,
                        corners: vec![r.corners[prev].clone(), r.corners[k].clone(), r.corners[next].clone()],
                        sides: vec![NewSide::From(ri, prev), NewSide::From(ri, k), NewSide::Cut, NewSide::Cut],
                        half: true,
                    });
                }
            }
            _ => return Err(Error::Internal(format!("region {} touches the witness unexpectedly", r.id))),
        }
    }

    let mut new_of: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
    for (t, tile) in tiles.iter().enumerate() {
        for (s, side) in tile.sides.iter().enumerate() {
            if let NewSide::From(ri, si) = *side {
                new_of.insert((ri, si), (t, s));
            }
        }
    }

    // inherited b-gluings, and the links of positive corners they induce
    let mut base = Vec::new();
    let mut count = 0;
    for tile in &tiles {
        base.push(count);
        count += tile.corners.len();
    }
    let mut uf = UnionFind::new(count);
    let mut gluing: Vec<((usize, usize), (usize, usize))> = Vec::new();
    for (t, tile) in tiles.iter().enumerate() {
        for (s, side) in tile.sides.iter().enumerate() {
            let NewSide::From(ri, si) = *side else { continue };
            let (rj, sj) = cx.partner[ri][si].expect("validated");
            let &(t2, s2) = new_of
                .get(&(rj, sj))
                .ok_or_else(|| Error::Internal(format!("partner of {}.s{} was not collected", fs.regions[ri].id, si + 1)))?;
            if (t, s) < (t2, s2) {
                gluing.push(((t, s), (t2, s2)));
            }
            let ends = |tile: &Tile, s: usize| tile.kind.layout().sides[s].ends.expect("b-side");
            let (f1, e1) = ends(tile, s);
            let (f2, e2) = ends(&tiles[t2], s2);
            for (x, y) in [(f1, e2), (e1, f2)] {
                if let (End::Corner(a), End::Corner(b)) = (x, y) {
                    uf.union(base[t] + a, base[t2] + b);
                }
            }
        }
    }

    // name one elliptic copy per chain and close each chain with its cut sides
    let mut positive: Vec<(usize, usize)> = Vec::new();
    for (t, tile) in tiles.iter().enumerate() {
        for (k, &sg) in tile.kind.layout().corner_signs.iter().enumerate() {
            if sg > 0 {
                positive.push((t, k));
            }
        }
    }
    let mut class_name: HashMap<usize, String> = HashMap::new();
    let mut copies: HashMap<String, usize> = HashMap::new();
    let mut ends: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
    for &(t, k) in &positive {
        let root = uf.find(base[t] + k);
        let src = tiles[t].corners[k].clone();
        class_name.entry(root).or_insert_with(|| {
            let n = copies.entry(src.clone()).or_insert(0);
            *n += 1;
            format!("{src}#{n}")
        });
        if tiles[t].half {
            ends.entry(root).or_default().push((t, k));
        }
    }
    let mut roots: Vec<usize> = ends.keys().copied().collect();
    roots.sort_unstable();
    for root in roots {
        let e = &ends[&root];
        let (outgoing, incoming): (Vec<TileSide>, Vec<TileSide>) = e.iter().partition(|&&(_, k)| k == 2);
        if outgoing.len() != 1 || incoming.len() != 1 {
            return Err(Error::Internal(format!("chain at {} does not have one end of each orientation", class_name[&root])));
        }
        // s3 runs v→∂, s4 runs ∂→v
        gluing.push(((outgoing[0].0, 2), (incoming[0].0, 3)));
    }

    let mut out = FoliatedSurface::default();
    let mut named: Vec<&String> = class_name.values().collect();
    named.sort();
    for e in fs.elliptic.iter().filter(|e| gamma.contains(&e.id)) {
        out.elliptic.push(e.clone());
    }
    for name in named {
        let src = name.split('#').next().expect("nonempty");
        let binding = fs.elliptic.iter().find(|e| e.id == src).and_then(|e| e.binding.clone());
        out.elliptic.push(EllipticPoint { id: name.clone(), sign: 1, binding });
    }
    for (t, tile) in tiles.iter().enumerate() {
        let corners = tile
            .corners
            .iter()
            .enumerate()
            .map(|(k, c)| if tile.kind.layout().corner_signs[k] > 0 { class_name[&uf.find(base[t] + k)].clone() } else { c.clone() })
            .collect();
        out.regions.push(Region { id: tile.id.clone(), kind: tile.kind, sign: tile.sign, corners, sides: Vec::new() });
    }
    for ((t1, s1), (t2, s2)) in gluing {
        out.gluing.push([format!("{}.s{}", tiles[t1].id, s1 + 1), format!("{}.s{}", tiles[t2].id, s2 + 1)]);
    }

    let report = ot_disc_report(&out)?;
    if !report.ot_disc {
        return Err(Error::Internal(format!("extracted surface is not an overtwisted disc: {}", report.reasons.join("; "))));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::samples::*;
    use super::super::*;
    use super::*;

    #[test]
    fn disc_extracts_to_itself() {
        let d = ot_disc();
        let w = find_ot_witness(&d).unwrap().unwrap();
        let e = extract_ot_disc(&d, &w).unwrap();
        assert_eq!(e.regions.len(), 2);
        assert_eq!(e.counts().unwrap(), d.counts().unwrap());
        assert!(ot_disc_report(&e).unwrap().ot_disc);
    }

    #[test]
    fn rejects_non_witness() {
        let d = ot_disc();
        let bogus = Witness { vertices: vec!["v1".into()], edges: vec![] };
        assert!(matches!(extract_ot_disc(&d, &bogus), Err(Error::Precondition(_))));
    }
}
