//! Validation and the glued cell complex.

use std::collections::{HashMap, HashSet};

use super::{Atom, End, FoliatedSurface, RegionKind, SideType};
use crate::error::{Error, Result};

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

/// A validated surface with its gluing resolved.
#[derive(Debug, Clone)]
pub struct Complex {
    /// `partner[r][s]` is the side glued to side `s` of region `r`.
    pub partner: Vec<Vec<Option<(usize, usize)>>>,
    pub region_index: HashMap<String, usize>,
    pub boundary_components: usize,
    pub connected: bool,
    /// Euler characteristic of the glued complex.
    pub chi: i64,
}

impl Complex {
    pub fn build(fs: &FoliatedSurface) -> Result<Complex> {
        let mut bad = Vec::new();

        let mut sign_of: HashMap<&str, i8> = HashMap::new();
        for e in &fs.elliptic {
            if e.sign != 1 && e.sign != -1 {
                bad.push(format!("elliptic {}: sign must be +1 or -1, got {}", e.id, e.sign));
            }
            if sign_of.insert(&e.id, e.sign).is_some() {
                bad.push(format!("elliptic {}: duplicate id", e.id));
            }
        }

        if let Some(atom) = fs.atom {
            return Self::atom(fs, atom, bad);
        }
        if fs.regions.is_empty() {
            bad.push("surface has no regions; hyperbolic-free surfaces must declare an atom".into());
            return Err(Error::Invalid(bad));
        }

        let mut region_index = HashMap::new();
        for (i, r) in fs.regions.iter().enumerate() {
            if region_index.insert(r.id.clone(), i).is_some() {
                bad.push(format!("region {}: duplicate id", r.id));
            }
            if r.sign != 1 && r.sign != -1 {
                bad.push(format!("region {}: hyperbolic sign must be +1 or -1, got {}", r.id, r.sign));
            }
            let lay = r.kind.layout();
            if r.corners.len() != lay.corner_signs.len() {
                bad.push(format!("region {}: {} expects {} corners, got {}", r.id, r.kind, lay.corner_signs.len(), r.corners.len()));
                continue;
            }
            if !r.sides.is_empty() && r.sides.len() != lay.sides.len() {
                bad.push(format!("region {}: {} expects {} side names, got {}", r.id, r.kind, lay.sides.len(), r.sides.len()));
            }
            let mut corner_ok = true;
            for (k, c) in r.corners.iter().enumerate() {
                match sign_of.get(c.as_str()) {
                    None => {
                        bad.push(format!("region {}: corner {c} is not a declared elliptic point", r.id));
                        corner_ok = false;
                    }
                    Some(&s) if s != lay.corner_signs[k] => {
                        corner_ok = false;
                        let on_a = lay.sides.iter().any(|sd| {
                            sd.ty == SideType::A && sd.ends.is_some_and(|(f, t)| f == End::Corner(k) || t == End::Corner(k))
                        });
                        if on_a {
                            bad.push(format!("region {}: corner {c}: a-arc endpoint must be positive", r.id));
                        } else {
                            bad.push(format!(
                                "region {}: corner {c} has sign {s:+}, {} pattern needs {:+} (b-arc endpoints must have opposite signs)",
                                r.id, r.kind, lay.corner_signs[k]
                            ));
                        }
                    }
                    _ => {}
                }
            }
            if corner_ok {
                if let Some((p, q)) = r.kind.singular_leaf_corners() {
                    if r.corners[p] == r.corners[q] {
                        bad.push(format!(
                            "region {}: both ends of the singular leaf lie on the positive elliptic point {}",
                            r.id, r.corners[p]
                        ));
                    }
                }
                if matches!(r.kind, RegionKind::Ab | RegionKind::Bb) {
                    let distinct: HashSet<&String> = r.corners.iter().collect();
                    if distinct.len() != r.corners.len() {
                        bad.push(format!("region {}: {} tiles cannot be degenerate; corners must be distinct", r.id, r.kind));
                    }
                }
            }
        }
        if !bad.is_empty() {
            return Err(Error::Invalid(bad));
        }

        // resolve the gluing
        let mut partner: Vec<Vec<Option<(usize, usize)>>> =
            fs.regions.iter().map(|r| vec![None; r.kind.layout().sides.len()]).collect();
        let resolve = |s: &str, bad: &mut Vec<String>| -> Option<(usize, usize)> {
            let Some((rid, side)) = s.rsplit_once('.') else {
                bad.push(format!("gluing: malformed side reference {s:?}"));
                return None;
            };
            let Some(&ri) = region_index.get(rid) else {
                bad.push(format!("gluing: unknown region {rid:?}"));
                return None;
            };
            match fs.regions[ri].side_index(side) {
                Some(si) => Some((ri, si)),
                None => {
                    bad.push(format!("gluing: region {rid} has no side {side:?}"));
                    None
                }
            }
        };
        for [x, y] in &fs.gluing {
            let (Some(p), Some(q)) = (resolve(x, &mut bad), resolve(y, &mut bad)) else { continue };
            for (u, v) in [(p, q), (q, p)] {
                if partner[u.0][u.1].is_some() {
                    bad.push(format!("side {}.{} is glued more than once", fs.regions[u.0].id, fs.regions[u.0].side_name(u.1)));
                }
                partner[u.0][u.1] = Some(v);
            }
            if p == q {
                bad.push(format!("side {x} is glued to itself"));
            }
        }
        for (ri, r) in fs.regions.iter().enumerate() {
            for si in 0..partner[ri].len() {
                if partner[ri][si].is_none() {
                    bad.push(format!("side {}.{} is not glued", r.id, r.side_name(si)));
                }
            }
        }
        if !bad.is_empty() {
            return Err(Error::Invalid(bad));
        }

        // corner slots and ∂-ends of a-sides get union-find ids
        let mut corner_base = Vec::new();
        let mut n = 0;
        for r in &fs.regions {
            corner_base.push(n);
            n += r.corners.len();
        }
        let mut bdry_base = Vec::new();
        for r in &fs.regions {
            bdry_base.push(n);
            n += r.kind.layout().sides.len();
        }
        let mut uf = UnionFind::new(n);
        let mut regions_uf = UnionFind::new(fs.regions.len());
        let key = |ri: usize, si: usize, e: End| match e {
            End::Corner(k) => corner_base[ri] + k,
            End::Bdry => bdry_base[ri] + si,
        };

        let mut glued_pairs = 0i64;
        for ri in 0..fs.regions.len() {
            for si in 0..partner[ri].len() {
                let (rj, sj) = partner[ri][si].expect("checked above");
                if (ri, si) > (rj, sj) {
                    continue;
                }
                regions_uf.union(ri, rj);
                let (r1, r2) = (&fs.regions[ri], &fs.regions[rj]);
                let name = |r: &super::Region, s: usize| format!("{}.{}", r.id, r.side_name(s));
                let sh1 = r1.kind.layout().sides[si];
                let sh2 = r2.kind.layout().sides[sj];
                if sh1.ty != sh2.ty {
                    bad.push(format!("gluing {} to {}: side types differ", name(r1, si), name(r2, sj)));
                    continue;
                }
                if matches!(r1.kind, RegionKind::Ab | RegionKind::Bb) && ri == rj {
                    bad.push(format!("region {}: {} tiles cannot have sides glued to each other", r1.id, r1.kind));
                    continue;
                }
                let (Some((f1, t1)), Some((f2, t2))) = (sh1.ends, sh2.ends) else { continue };
                glued_pairs += 1;
                for (e1, e2) in [(f1, t2), (t1, f2)] {
                    match (e1, e2) {
                        (End::Corner(c1), End::Corner(c2)) => {
                            if r1.corners[c1] != r2.corners[c2] {
                                bad.push(format!(
                                    "gluing {} to {} identifies distinct elliptic points {} and {}",
                                    name(r1, si),
                                    name(r2, sj),
                                    r1.corners[c1],
                                    r2.corners[c2]
                                ));
                            }
                        }
                        (End::Bdry, End::Bdry) => {}
                        _ => {
                            bad.push(format!(
                                "gluing {} to {}: orientations disagree (an end on ∂F meets an elliptic point)",
                                name(r1, si),
                                name(r2, sj)
                            ));
                            continue;
                        }
                    }
                    uf.union(key(ri, si, e1), key(rj, sj, e2));
                }
            }
        }
        if !bad.is_empty() {
            return Err(Error::Invalid(bad));
        }

        // elliptic points are exactly the corner classes
        let mut class_id: HashMap<usize, &str> = HashMap::new();
        let mut id_classes: HashMap<&str, HashSet<usize>> = HashMap::new();
        for (ri, r) in fs.regions.iter().enumerate() {
            for (k, c) in r.corners.iter().enumerate() {
                let root = uf.find(corner_base[ri] + k);
                class_id.insert(root, c);
                id_classes.entry(c).or_default().insert(root);
            }
        }
        for e in &fs.elliptic {
            match id_classes.get(e.id.as_str()) {
                None => bad.push(format!("elliptic {} is not a corner of any region", e.id)),
                Some(cl) if cl.len() > 1 => {
                    bad.push(format!("elliptic {} appears in {} separate corner cycles; its neighborhood is not a disc", e.id, cl.len()))
                }
                _ => {}
            }
        }

        // ∂F: points are classes of a-side ends, segments join consecutive a-sides
        let mut bpoints = HashSet::new();
        let mut segments = 0i64;
        let mut seg_uf = UnionFind::new(n);
        let mut chi_regions = 0i64;
        for (ri, r) in fs.regions.iter().enumerate() {
            let lay = r.kind.layout();
            chi_regions += lay.chi;
            for (si, sh) in lay.sides.iter().enumerate() {
                if let Some((f, t)) = sh.ends {
                    if f == End::Bdry || t == End::Bdry {
                        bpoints.insert(uf.find(bdry_base[ri] + si));
                    }
                }
            }
            for &si in lay.boundary_after {
                segments += 1;
                let from = uf.find(bdry_base[ri] + si);
                let to = uf.find(bdry_base[ri] + (si + 1) % lay.sides.len());
                seg_uf.union(from, to);
            }
        }
        let boundary_components = bpoints.iter().map(|&p| seg_uf.find(p)).collect::<HashSet<_>>().len();

        let roots: HashSet<usize> = (0..fs.regions.len()).map(|i| regions_uf.find(i)).collect();
        let connected = roots.len() == 1;
        if !connected {
            bad.push(format!("glued complex has {} components; a surface must be connected", roots.len()));
        }
        if !bad.is_empty() {
            return Err(Error::Invalid(bad));
        }

        let vertices = (class_id.len() + bpoints.len()) as i64;
        let chi = vertices - glued_pairs - segments + chi_regions;
        Ok(Complex { partner, region_index, boundary_components, connected, chi })
    }

    fn atom(fs: &FoliatedSurface, atom: Atom, mut bad: Vec<String>) -> Result<Complex> {
        if !fs.regions.is_empty() || !fs.gluing.is_empty() {
            bad.push(format!("atom {atom:?} carries no regions or gluing"));
        }
        let mut signs: Vec<i8> = fs.elliptic.iter().map(|e| e.sign).collect();
        signs.sort_unstable();
        let (want, chi, bdry): (&[i8], i64, usize) = match atom {
            Atom::ADisc => (&[1], 1, 1),
            Atom::BSphere => (&[-1, 1], 2, 0),
            Atom::CTorus => (&[], 0, 0),
        };
        if signs != want {
            bad.push(format!("atom {atom:?} needs elliptic signs {want:?}, got {signs:?}"));
        }
        if !bad.is_empty() {
            return Err(Error::Invalid(bad));
        }
        Ok(Complex { partner: Vec::new(), region_index: HashMap::new(), boundary_components: bdry, connected: true, chi })
    }
}

#[cfg(test)]
mod tests {
    use super::super::samples::*;
    use super::super::*;

    #[test]
    fn samples_validate() {
        assert!(sphere().violations().is_empty());
        assert!(ot_disc().violations().is_empty());
        assert_eq!(ot_disc().validate().unwrap().boundary_components, 1);
        assert_eq!(sphere().validate().unwrap().boundary_components, 0);
    }

    #[test]
    fn negative_a_endpoint_is_caught() {
        let mut fs = ot_disc();
        fs.regions[0].corners = vec!["w".into(), "w".into(), "v2".into()];
        let v = fs.violations();
        assert!(v.iter().any(|m| m.contains("a-arc endpoint must be positive")), "{v:?}");
    }

    #[test]
    fn wrong_corner_pattern_is_caught() {
        let mut fs = ot_disc();
        fs.regions[0].corners = vec!["v1".into(), "v2".into(), "v2".into()];
        assert!(!fs.violations().is_empty());
    }

    #[test]
    fn every_elliptic_sign_flip_is_caught() {
        for base in [sphere(), ot_disc(), a_disc()] {
            for i in 0..base.elliptic.len() {
                let mut m = base.clone();
                m.elliptic[i].sign = -m.elliptic[i].sign;
                assert!(!m.violations().is_empty(), "flip {i} missed");
            }
        }
    }

    #[test]
    fn gluing_defects() {
        let mut fs = ot_disc();
        fs.gluing.pop();
        assert!(fs.violations().iter().any(|m| m.contains("not glued")));
        let mut fs = ot_disc();
        fs.gluing[2] = ["R1.s3".into(), "R2.s3".into()];
        fs.gluing[3] = ["R1.s4".into(), "R2.s4".into()];
        assert!(fs.violations().iter().any(|m| m.contains("orientations disagree")));
        let mut fs = ot_disc();
        fs.gluing[0] = ["R1.s1".into(), "R9.s2".into()];
        assert!(fs.violations().iter().any(|m| m.contains("unknown region")));
    }

    #[test]
    fn degenerate_aa_tile() {
        // s1 and s4 share v1; gluing them closes a disc around v1
        let mut fs = FoliatedSurface {
            elliptic: vec![
                EllipticPoint { id: "v1".into(), sign: 1, binding: None },
                EllipticPoint { id: "v2".into(), sign: 1, binding: None },
            ],
            regions: vec![Region::new("R", RegionKind::Aa, 1, &["v1", "v2"])],
            ..Default::default()
        };
        fs.glue("R", "s1", "R", "s4");
        fs.glue("R", "s2", "R", "s3");
        let cx = fs.validate().unwrap();
        assert_eq!(cx.chi, 1);
        assert_eq!(fs.euler_char().unwrap(), 1);
    }

    #[test]
    fn singular_leaf_on_one_point_is_rejected() {
        let mut fs = FoliatedSurface {
            elliptic: vec![EllipticPoint { id: "v".into(), sign: 1, binding: None }],
            regions: vec![Region::new("R", RegionKind::Aa, 1, &["v", "v"])],
            ..Default::default()
        };
        fs.glue("R", "s1", "R", "s2");
        fs.glue("R", "s3", "R", "s4");
        assert!(fs.violations().iter().any(|m| m.contains("singular leaf")));
    }
}
