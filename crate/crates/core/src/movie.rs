//! Movie presentations: leaves on a page and the saddle events between them,
//! compiled into a region decomposition.
//!
//! Leaves are oriented from tail to head. An a-leaf runs from a positive
//! elliptic point to a braid strand, a b-leaf from a positive to a negative
//! elliptic point; c-leaves are closed. A saddle between two leaves swaps
//! their heads, and leaf ids stay with their tails. c-leaves are born by a
//! self-event and die by merging into another leaf.
//!
//! Script format, one statement per line (`#` starts a comment):
//!
//! ```text
//! openbook 0 2
//! monodromy bdry_1^-1
//! braid 1
//! leaf A a v1 s1
//! leaf B b v2 w
//! event 1/3 + A.l B.r
//! event 2/3 + A.l B.r
//! close A=A B=B
//! ```

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::foliation::{Atom, EllipticPoint, FoliatedSurface, Region, RegionKind};
use crate::mapclass::MappingClass;
use crate::slcalc::{BraidGen, BraidWord};
use crate::surface::SurfaceSig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LeafKind {
    A,
    B,
    C,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Leaf {
    pub id: String,
    pub kind: LeafKind,
    /// Elliptic point for a- and b-leaves.
    pub tail: Option<String>,
    /// Strand for a-leaves, elliptic point for b-leaves.
    pub head: Option<String>,
}

impl Leaf {
    fn c(id: &str) -> Self {
        Leaf { id: id.to_string(), kind: LeafKind::C, tail: None, head: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Slot {
    L,
    R,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Time {
    num: i64,
    den: i64,
}

impl Time {
    fn parse(s: &str) -> Option<Time> {
        let (num, den) = if let Some((n, d)) = s.split_once('/') {
            (n.trim().parse().ok()?, d.trim().parse().ok()?)
        } else if let Some((i, f)) = s.split_once('.') {
            let digits = f.len() as u32;
            if digits > 15 {
                return None;
            }
            let den = 10i64.pow(digits);
            let whole: i64 = if i.is_empty() { 0 } else { i.parse().ok()? };
            let frac: i64 = if f.is_empty() { 0 } else { f.parse().ok()? };
            (whole * den + frac, den)
        } else {
            (s.parse().ok()?, 1)
        };
        (den > 0).then_some(Time { num, den })
    }

    fn cmp_time(&self, o: &Time) -> Ordering {
        (self.num as i128 * o.den as i128).cmp(&(o.num as i128 * self.den as i128))
    }

    fn in_unit_interval(&self) -> bool {
        self.num > 0 && self.num < self.den
    }
}

impl std::fmt::Display for Time {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MovieEvent {
    pub time: Option<Time>,
    pub sign: i8,
    pub first: (String, Slot),
    pub second: (String, Slot),
    /// Id of a c-leaf created by a self-event.
    pub creates: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MoviePresentation {
    pub sig: SurfaceSig,
    pub monodromy: Vec<(String, i64)>,
    pub braid: Option<BraidWord>,
    pub leaves: Vec<Leaf>,
    pub events: Vec<MovieEvent>,
    /// Final leaf id ↦ initial leaf id.
    pub closure: Vec<(String, String)>,
    /// Explicit sign annotations on elliptic points.
    pub sign_hints: BTreeMap<String, i8>,
}

/// Where a region side comes from: a leaf just before or just after the event.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SideSrc {
    Before(String),
    After(String),
}

/// The region produced by one event.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TileShape {
    pub kind: RegionKind,
    pub corners: Vec<String>,
    pub sides: Vec<SideSrc>,
}

/// Line, strand count and letters of a `braid` statement.
type BraidDecl = (usize, u32, Vec<(BraidGen, i64)>);

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::parse(format!("line {line}"), msg)
}

fn strip_sign(tok: &str) -> (Option<i8>, &str) {
    if let Some(r) = tok.strip_prefix('+') {
        (Some(1), r)
    } else if let Some(r) = tok.strip_prefix('-') {
        (Some(-1), r)
    } else {
        (None, tok)
    }
}

fn parse_slot(tok: &str, line: usize) -> Result<(String, Slot)> {
    let (id, slot) = tok.rsplit_once('.').ok_or_else(|| perr(line, format!("expected <leaf>.<l|r>, got {tok:?}")))?;
    let slot = match slot {
        "l" | "L" => Slot::L,
        "r" | "R" => Slot::R,
        _ => return Err(perr(line, format!("slot must be l or r, got {slot:?}"))),
    };
    Ok((id.to_string(), slot))
}

fn parse_power(tok: &str) -> Option<(&str, i64)> {
    match tok.split_once('^') {
        Some((g, p)) => Some((g, p.parse().ok()?)),
        None => Some((tok, 1)),
    }
}

fn parse_sign(tok: &str) -> Option<i8> {
    match tok {
        "+" | "+1" => Some(1),
        "-" | "-1" => Some(-1),
        _ => None,
    }
}

pub fn parse_movie(doc: &str) -> Result<MoviePresentation> {
    if doc.trim_start().starts_with('{') {
        let j: MovieJson =
            serde_json::from_str(doc).map_err(|e| Error::parse(format!("line {}, column {}", e.line(), e.column()), e.to_string()))?;
        return parse_movie(&j.to_script());
    }
    let mut sig = SurfaceSig::disc();
    let mut monodromy = Vec::new();
    let mut braid_decl: Option<BraidDecl> = None;
    let mut leaves: Vec<Leaf> = Vec::new();
    let mut events = Vec::new();
    let mut closure: Option<Vec<(String, String)>> = None;
    let mut sign_hints = BTreeMap::new();
    let mut hint = |id: &str, s: Option<i8>, line: usize| -> Result<()> {
        if let Some(s) = s {
            if sign_hints.insert(id.to_string(), s).is_some_and(|old| old != s) {
                return Err(perr(line, format!("conflicting sign annotations on {id}")));
            }
        }
        Ok(())
    };

    for (ln, raw) in doc.lines().enumerate() {
        let line = ln + 1;
        let text = raw.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        let toks: Vec<&str> = text.split_whitespace().collect();
        match toks[0] {
            "openbook" => {
                if toks.len() != 3 {
                    return Err(perr(line, "expected: openbook <genus> <boundary>"));
                }
                let g = toks[1].parse().map_err(|_| perr(line, "bad genus"))?;
                let r = toks[2].parse().map_err(|_| perr(line, "bad boundary count"))?;
                sig = SurfaceSig::new(g, r).map_err(|e| perr(line, e.to_string()))?;
            }
            "monodromy" => {
                for t in &toks[1..] {
                    let (g, p) = parse_power(t).ok_or_else(|| perr(line, format!("bad twist {t:?}")))?;
                    monodromy.push((g.to_string(), p));
                }
            }
            "braid" => {
                let n: u32 = toks.get(1).and_then(|t| t.parse().ok()).ok_or_else(|| perr(line, "expected: braid <strands> <word>"))?;
                let mut word = Vec::new();
                for t in &toks[2..] {
                    let (g, p) = parse_power(t).ok_or_else(|| perr(line, format!("bad braid letter {t:?}")))?;
                    word.push((g.parse().map_err(|e: Error| perr(line, e.to_string()))?, p));
                }
                braid_decl = Some((line, n, word));
            }
            "leaf" => {
                if toks.len() < 3 {
                    return Err(perr(line, "expected: leaf <id> <a|b|c> ..."));
                }
                let id = toks[1].to_string();
                if leaves.iter().any(|l| l.id == id) {
                    return Err(perr(line, format!("duplicate leaf {id}")));
                }
                let leaf = match (toks[2], toks.len()) {
                    ("a", 5) => {
                        let (s, e) = strip_sign(toks[3]);
                        if s == Some(-1) {
                            return Err(perr(line, "the elliptic end of an a-leaf is positive"));
                        }
                        hint(e, s, line)?;
                        Leaf { id, kind: LeafKind::A, tail: Some(e.into()), head: Some(toks[4].into()) }
                    }
                    ("b", 5) => {
                        let (s1, e1) = strip_sign(toks[3]);
                        let (s2, e2) = strip_sign(toks[4]);
                        hint(e1, s1, line)?;
                        hint(e2, s2, line)?;
                        Leaf { id, kind: LeafKind::B, tail: Some(e1.into()), head: Some(e2.into()) }
                    }
                    ("c", 3) => Leaf::c(&id),
                    _ => return Err(perr(line, "expected: leaf <id> a <elliptic> <strand> | b <e1> <e2> | c")),
                };
                leaves.push(leaf);
            }
            "event" => {
                let mut i = 1;
                let mut time = None;
                if toks.get(i).and_then(|t| parse_sign(t)).is_none() {
                    let t = toks.get(i).ok_or_else(|| perr(line, "incomplete event"))?;
                    time = Some(Time::parse(t).ok_or_else(|| perr(line, format!("bad time {t:?}")))?);
                    i += 1;
                }
                let sign = toks.get(i).and_then(|t| parse_sign(t)).ok_or_else(|| perr(line, "event sign must be + or -"))?;
                let first = parse_slot(toks.get(i + 1).ok_or_else(|| perr(line, "incomplete event"))?, line)?;
                let second = parse_slot(toks.get(i + 2).ok_or_else(|| perr(line, "incomplete event"))?, line)?;
                let creates = match &toks[i + 3..] {
                    [] => None,
                    ["->", id] => Some(id.to_string()),
                    _ => return Err(perr(line, "trailing tokens after event; expected `-> <new leaf>`")),
                };
                if let (Some(t), Some(prev)) = (time, events.last().and_then(|e: &(usize, MovieEvent)| e.1.time)) {
                    match t.cmp_time(&prev) {
                        Ordering::Equal => return Err(perr(line, "two events at the same time (no saddle-saddle connections)")),
                        Ordering::Less => return Err(perr(line, "event times must be increasing")),
                        Ordering::Greater => {}
                    }
                }
                if let Some(t) = time {
                    if !t.in_unit_interval() {
                        return Err(perr(line, "event times lie strictly between 0 and 1"));
                    }
                }
                events.push((line, MovieEvent { time, sign, first, second, creates }));
            }
            "close" => {
                let mut pairs = Vec::new();
                for t in &toks[1..] {
                    let (f, i) = t.split_once('=').ok_or_else(|| perr(line, format!("expected final=initial, got {t:?}")))?;
                    pairs.push((f.to_string(), i.to_string()));
                }
                closure = Some(pairs);
            }
            other => return Err(perr(line, format!("unknown statement {other:?}"))),
        }
    }

    let strands = leaves.iter().filter(|l| l.kind == LeafKind::A).count() as u32;
    let braid = match braid_decl {
        Some((line, n, word)) => {
            if n != strands {
                return Err(perr(line, format!("braid has {n} strands but the page has {strands} a-leaves")));
            }
            Some(BraidWord::new(sig, n, word).map_err(|e| perr(line, e.to_string()))?)
        }
        None => None,
    };
    MappingClass::from_catalog(sig, &monodromy.iter().map(|(g, p)| (g.as_str(), *p)).collect::<Vec<_>>())
        .map_err(|e| Error::parse("monodromy", e.to_string()))?;

    let mut m = MoviePresentation {
        sig,
        monodromy,
        braid,
        leaves,
        events: Vec::new(),
        closure: Vec::new(),
        sign_hints,
    };
    check_initial_page(&m.leaves)?;
    // replay to check every event and the closure
    let mut page = m.leaves.clone();
    for (line, ev) in &events {
        page = step(&page, ev).map_err(|e| perr(*line, e.to_string()))?.0;
    }
    m.events = events.into_iter().map(|(_, e)| e).collect();
    m.closure = match closure {
        Some(c) => c,
        None => page.iter().map(|l| (l.id.clone(), l.id.clone())).collect(),
    };
    check_closure(&page, &m.leaves, &m.closure)?;
    Ok(m)
}

fn check_initial_page(leaves: &[Leaf]) -> Result<()> {
    let mut seen = HashSet::new();
    for l in leaves {
        for e in [&l.tail, &l.head].into_iter().flatten() {
            if !seen.insert(e.as_str()) {
                return Err(Error::parse("leaves", format!("{e} is an endpoint of more than one leaf")));
            }
        }
    }
    Ok(())
}

fn check_closure(last: &[Leaf], first: &[Leaf], closure: &[(String, String)]) -> Result<()> {
    let fin: HashMap<&str, &Leaf> = last.iter().map(|l| (l.id.as_str(), l)).collect();
    let ini: HashMap<&str, &Leaf> = first.iter().map(|l| (l.id.as_str(), l)).collect();
    let mut used_f = HashSet::new();
    let mut used_i = HashSet::new();
    let bad = |m: String| Error::parse("close", m);
    for (f, i) in closure {
        let lf = fin.get(f.as_str()).ok_or_else(|| bad(format!("{f} is not a leaf of the last page")))?;
        let li = ini.get(i.as_str()).ok_or_else(|| bad(format!("{i} is not a leaf of the first page")))?;
        if !used_f.insert(f.as_str()) || !used_i.insert(i.as_str()) {
            return Err(bad(format!("{f}={i} repeats a leaf")));
        }
        if lf.kind != li.kind {
            return Err(bad(format!("closure maps {:?}-leaf {f} to {:?}-leaf {i}", lf.kind, li.kind)));
        }
        if lf.tail != li.tail || (lf.kind == LeafKind::B && lf.head != li.head) {
            return Err(bad(format!("closure {f}={i} moves an elliptic point")));
        }
    }
    if used_f.len() != fin.len() || used_i.len() != ini.len() {
        return Err(bad("closure must match every leaf of the last page with one of the first".into()));
    }
    Ok(())
}

/// One saddle. Returns the next page and the region it creates.
pub fn step(leaves: &[Leaf], ev: &MovieEvent) -> Result<(Vec<Leaf>, TileShape)> {
    let find = |id: &str| {
        leaves.iter().position(|l| l.id == id).ok_or_else(|| Error::Precondition(format!("leaf {id} is not on this page")))
    };
    let (x, y) = (find(&ev.first.0)?, find(&ev.second.0)?);
    if ev.first.1 == ev.second.1 {
        return Err(Error::Precondition("incompatible slots: a describing arc joins opposite sides".into()));
    }
    let mut out = leaves.to_vec();
    let (lx, ly) = (&leaves[x], &leaves[y]);
    let before = |l: &Leaf| SideSrc::Before(l.id.clone());
    let after = |l: &Leaf| SideSrc::After(l.id.clone());
    let fresh = |id: &Option<String>| -> Result<String> {
        let id = id.clone().ok_or_else(|| Error::Precondition("a self-event must name the c-leaf it creates (-> id)".into()))?;
        if leaves.iter().any(|l| l.id == id) {
            return Err(Error::Precondition(format!("leaf {id} already exists")));
        }
        Ok(id)
    };
    let no_new = || -> Result<()> {
        if ev.creates.is_some() {
            Err(Error::Precondition("only self-events create leaves".into()))
        } else {
            Ok(())
        }
    };
    use LeafKind::*;
    let tile = match (lx.kind, ly.kind, x == y) {
        (A | B, A | B, false) => {
            no_new()?;
            // the kind follows the head: strands make a-leaves
            out[x].head = ly.head.clone();
            out[x].kind = ly.kind;
            out[y].head = lx.head.clone();
            out[y].kind = lx.kind;
            let (f, s) = if lx.kind == A && ly.kind == B { (ly, lx) } else { (lx, ly) };
            let t = |l: &Leaf| l.tail.clone().expect("a/b leaf");
            let h = |l: &Leaf| l.head.clone().expect("a/b leaf");
            let (kind, corners) = match (f.kind, s.kind) {
                (A, A) => (RegionKind::Aa, vec![t(f), t(s)]),
                (B, A) => (RegionKind::Ab, vec![t(f), h(f), t(s)]),
                _ => (RegionKind::Bb, vec![t(f), h(f), t(s), h(s)]),
            };
            TileShape { kind, corners, sides: vec![before(f), after(s), before(s), after(f)] }
        }
        (A | B, C, false) | (C, A | B, false) => {
            no_new()?;
            let (xl, cl, ci) = if lx.kind == C { (ly, lx, x) } else { (lx, ly, y) };
            let (kind, corners) = if xl.kind == A {
                (RegionKind::Ac, vec![xl.tail.clone().expect("a-leaf")])
            } else {
                (RegionKind::Bc, vec![xl.tail.clone().expect("b-leaf"), xl.head.clone().expect("b-leaf")])
            };
            let shape = TileShape { kind, corners, sides: vec![before(xl), after(xl), before(cl)] };
            out.remove(ci);
            shape
        }
        (A | B, _, true) => {
            let id = fresh(&ev.creates)?;
            let kind = if lx.kind == A { RegionKind::Ac } else { RegionKind::Bc };
            let corners = [&lx.tail, &lx.head].into_iter().take(if lx.kind == A { 1 } else { 2 }).flatten().cloned().collect();
            out.push(Leaf::c(&id));
            TileShape { kind, corners, sides: vec![before(lx), after(lx), SideSrc::After(id)] }
        }
        (C, C, false) => {
            no_new()?;
            out.remove(y);
            TileShape { kind: RegionKind::Cc, corners: vec![], sides: vec![before(lx), before(ly), after(lx)] }
        }
        (C, _, true) => {
            let id = fresh(&ev.creates)?;
            out.push(Leaf::c(&id));
            TileShape { kind: RegionKind::Cc, corners: vec![], sides: vec![before(lx), after(lx), SideSrc::After(id)] }
        }
    };
    Ok((out, tile))
}

fn invalid(msg: String) -> Error {
    Error::Invalid(vec![msg])
}

/// Elliptic signs: a-tails positive, b-leaves joining opposite signs, plus annotations.
fn infer_signs(m: &MoviePresentation, pages: &[Vec<Leaf>]) -> Result<BTreeMap<String, i8>> {
    let mut adj: HashMap<String, Vec<String>> = HashMap::new();
    let mut forced: BTreeMap<String, i8> = m.sign_hints.clone();
    let mut order: Vec<String> = Vec::new();
    let note = |e: &String, order: &mut Vec<String>, adj: &mut HashMap<String, Vec<String>>| {
        if !adj.contains_key(e) {
            adj.insert(e.clone(), Vec::new());
            order.push(e.clone());
        }
    };
    for page in pages {
        for l in page {
            match l.kind {
                LeafKind::A => {
                    let t = l.tail.clone().expect("a-leaf");
                    note(&t, &mut order, &mut adj);
                    if forced.insert(t.clone(), 1) == Some(-1) {
                        return Err(invalid(format!("{t} ends an a-leaf but is annotated negative")));
                    }
                }
                LeafKind::B => {
                    let (t, h) = (l.tail.clone().expect("b-leaf"), l.head.clone().expect("b-leaf"));
                    note(&t, &mut order, &mut adj);
                    note(&h, &mut order, &mut adj);
                    adj.get_mut(&t).expect("noted").push(h.clone());
                    adj.get_mut(&h).expect("noted").push(t);
                }
                LeafKind::C => {}
            }
        }
    }
    let mut sign: BTreeMap<String, i8> = BTreeMap::new();
    // forced vertices seed first so their components take the forced colouring
    let seeds: Vec<(String, i8)> = order
        .iter()
        .filter_map(|e| forced.get(e).map(|&s| (e.clone(), s)))
        .chain(order.iter().map(|e| (e.clone(), 1)))
        .collect();
    for (seed, s0) in seeds {
        if sign.contains_key(&seed) {
            continue;
        }
        sign.insert(seed.clone(), s0);
        let mut q = VecDeque::from([seed]);
        while let Some(v) = q.pop_front() {
            let sv = sign[&v];
            for u in &adj[&v] {
                match sign.get(u) {
                    Some(&su) if su == sv => {
                        return Err(invalid(format!("b-leaf between {v} and {u} cannot join opposite signs")))
                    }
                    Some(_) => {}
                    None => {
                        sign.insert(u.clone(), -sv);
                        q.push_back(u.clone());
                    }
                }
            }
        }
    }
    for (e, s) in &forced {
        if sign.get(e).is_some_and(|x| x != s) {
            return Err(invalid(format!("sign annotation on {e} contradicts the b-leaves")));
        }
    }
    for page in pages {
        for l in page.iter().filter(|l| l.kind == LeafKind::B) {
            let (t, h) = (l.tail.as_ref().expect("b-leaf"), l.head.as_ref().expect("b-leaf"));
            if sign[t] != 1 || sign[h] != -1 {
                return Err(invalid(format!("b-leaf {} must run from a positive to a negative elliptic point", l.id)));
            }
        }
    }
    Ok(sign)
}

/// Compile a movie into a validated region decomposition.
pub fn compile(m: &MoviePresentation) -> Result<FoliatedSurface> {
    let mut pages = vec![m.leaves.clone()];
    let mut tiles = Vec::new();
    for ev in &m.events {
        let (next, tile) = step(pages.last().expect("nonempty"), ev)?;
        pages.push(next);
        tiles.push(tile);
    }
    let signs = infer_signs(m, &pages)?;
    let mut fs = FoliatedSurface {
        elliptic: signs.iter().map(|(id, &sign)| EllipticPoint { id: id.clone(), sign, binding: None }).collect(),
        ..Default::default()
    };

    let closure: HashMap<&str, &str> = m.closure.iter().map(|(f, i)| (f.as_str(), i.as_str())).collect();
    if tiles.is_empty() {
        let cycles = closure_cycles(&closure);
        if cycles != 1 {
            return Err(invalid(format!("eventless movie sweeps {cycles} separate surfaces")));
        }
        let kinds: HashSet<LeafKind> = m.leaves.iter().map(|l| l.kind).collect();
        fs.atom = Some(match kinds.into_iter().next() {
            Some(LeafKind::A) => Atom::ADisc,
            Some(LeafKind::B) => Atom::BSphere,
            Some(LeafKind::C) => Atom::CTorus,
            None => return Err(invalid("movie has no leaves".into())),
        });
        fs.validate()?;
        return Ok(fs);
    }

    // leaf segments between events become gluings
    #[derive(Clone)]
    enum Open {
        Initial(String),
        Side(String),
    }
    let side_ref = |e: usize, s: usize| format!("E{}.s{}", e + 1, s + 1);
    let mut open: HashMap<String, Open> = m.leaves.iter().map(|l| (l.id.clone(), Open::Initial(l.id.clone()))).collect();
    let mut first_side: HashMap<String, String> = HashMap::new();
    for (e, (tile, ev)) in tiles.iter().zip(&m.events).enumerate() {
        fs.regions.push(Region {
            id: format!("E{}", e + 1),
            kind: tile.kind,
            sign: ev.sign,
            corners: tile.corners.clone(),
            sides: Vec::new(),
        });
        for (s, src) in tile.sides.iter().enumerate() {
            if let SideSrc::Before(id) = src {
                match open.remove(id).expect("leaf alive") {
                    Open::Initial(init) => {
                        first_side.insert(init, side_ref(e, s));
                    }
                    Open::Side(prev) => fs.gluing.push([prev, side_ref(e, s)]),
                }
            }
        }
        for (s, src) in tile.sides.iter().enumerate() {
            if let SideSrc::After(id) = src {
                open.insert(id.clone(), Open::Side(side_ref(e, s)));
            }
        }
    }
    let mut finals: Vec<&String> = open.keys().collect();
    finals.sort();
    for f in finals {
        let Open::Side(side) = &open[f] else {
            return Err(invalid(format!("leaf {f} takes part in no event; the surface would be disconnected")));
        };
        let mut target = closure[f.as_str()];
        let mut hops = 0;
        while !first_side.contains_key(target) {
            // an initial leaf that never met an event before it was closed up
            target = closure[target];
            hops += 1;
            if hops > closure.len() {
                return Err(Error::Internal("closure chain does not reach an event".into()));
            }
        }
        fs.gluing.push([side.clone(), first_side[target].clone()]);
    }
    fs.validate()?;
    Ok(fs)
}

fn closure_cycles(closure: &HashMap<&str, &str>) -> usize {
    let mut seen = HashSet::new();
    let mut cycles = 0;
    let mut keys: Vec<&&str> = closure.keys().collect();
    keys.sort();
    for &&k in &keys {
        if seen.contains(k) {
            continue;
        }
        cycles += 1;
        let mut cur = k;
        while seen.insert(cur) {
            cur = closure[cur];
        }
    }
    cycles
}

impl MoviePresentation {
    /// Canonical script text; parsing it gives back the same presentation.
    pub fn to_script(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "openbook {} {}", self.sig.genus, self.sig.boundary_count);
        if !self.monodromy.is_empty() {
            let w: Vec<String> = self.monodromy.iter().map(|(g, p)| format!("{g}^{p}")).collect();
            let _ = writeln!(s, "monodromy {}", w.join(" "));
        }
        if let Some(b) = &self.braid {
            let w: Vec<String> = b.letters().iter().map(|(g, p)| format!("{g}^{p}")).collect();
            let _ = writeln!(s, "braid {} {}", b.strands(), w.join(" ")).map(|_| ());
            s = s.replace(" \n", "\n");
        }
        let ann = |e: &String| match self.sign_hints.get(e) {
            Some(1) => format!("+{e}"),
            Some(-1) => format!("-{e}"),
            _ => e.clone(),
        };
        for l in &self.leaves {
            let _ = match l.kind {
                LeafKind::A => writeln!(s, "leaf {} a {} {}", l.id, ann(l.tail.as_ref().unwrap()), l.head.as_ref().unwrap()),
                LeafKind::B => writeln!(s, "leaf {} b {} {}", l.id, ann(l.tail.as_ref().unwrap()), ann(l.head.as_ref().unwrap())),
                LeafKind::C => writeln!(s, "leaf {} c", l.id),
            };
        }
        for ev in &self.events {
            let slot = |x: &(String, Slot)| format!("{}.{}", x.0, if x.1 == Slot::L { "l" } else { "r" });
            let time = ev.time.map(|t| format!("{t} ")).unwrap_or_default();
            let sign = if ev.sign > 0 { "+" } else { "-" };
            let _ = write!(s, "event {time}{sign} {} {}", slot(&ev.first), slot(&ev.second));
            if let Some(c) = &ev.creates {
                let _ = write!(s, " -> {c}");
            }
            s.push('\n');
        }
        let pairs: Vec<String> = self.closure.iter().map(|(f, i)| format!("{f}={i}")).collect();
        let _ = writeln!(s, "close {}", pairs.join(" "));
        s
    }

    /// The movie run backwards: events in reverse order with opposite
    /// signs. Births become deaths and deaths become births.
    pub fn reversed(&self) -> Result<MoviePresentation> {
        let mut pages = vec![self.leaves.clone()];
        for ev in &self.events {
            let next = step(pages.last().expect("nonempty"), ev)?.0;
            pages.push(next);
        }
        let mut events = Vec::new();
        for (ev, before) in self.events.iter().zip(&pages).rev() {
            let mut back = ev.clone();
            back.sign = -ev.sign;
            back.time = ev.time.map(|t| Time { num: t.den - t.num, den: t.den });
            back.creates = None;
            if let Some(c) = &ev.creates {
                back.second.0 = c.clone();
            } else if ev.first.0 != ev.second.0 {
                let kind = |id: &str| before.iter().find(|l| l.id == id).map(|l| l.kind);
                let dead = match (kind(&ev.first.0), kind(&ev.second.0)) {
                    (Some(LeafKind::C), Some(LeafKind::A | LeafKind::B)) => Some((ev.second.0.clone(), ev.first.0.clone())),
                    (Some(_), Some(LeafKind::C)) => Some((ev.first.0.clone(), ev.second.0.clone())),
                    _ => None,
                };
                if let Some((survivor, dead)) = dead {
                    back.first.0 = survivor.clone();
                    back.second.0 = survivor;
                    back.creates = Some(dead);
                }
            }
            events.push(back);
        }
        Ok(MoviePresentation {
            sig: self.sig,
            monodromy: self.monodromy.clone(),
            braid: self.braid.clone(),
            leaves: pages.pop().expect("nonempty"),
            events,
            closure: self.closure.iter().map(|(f, i)| (i.clone(), f.clone())).collect(),
            sign_hints: self.sign_hints.clone(),
        })
    }
}

/// JSON form of a movie; each field mirrors a script statement.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MovieJson {
    #[serde(default)]
    pub openbook: Option<SurfaceSig>,
    #[serde(default)]
    pub monodromy: String,
    #[serde(default)]
    pub braid: Option<String>,
    pub leaves: Vec<String>,
    #[serde(default)]
    pub events: Vec<String>,
    #[serde(default)]
    pub close: Option<String>,
}

impl MovieJson {
    fn to_script(&self) -> String {
        let mut s = String::new();
        if let Some(sig) = self.openbook {
            let _ = writeln!(s, "openbook {} {}", sig.genus, sig.boundary_count);
        }
        if !self.monodromy.trim().is_empty() {
            let _ = writeln!(s, "monodromy {}", self.monodromy);
        }
        if let Some(b) = &self.braid {
            let _ = writeln!(s, "braid {b}");
        }
        for l in &self.leaves {
            let _ = writeln!(s, "leaf {l}");
        }
        for e in &self.events {
            let _ = writeln!(s, "event {e}");
        }
        if let Some(c) = &self.close {
            let _ = writeln!(s, "close {c}");
        }
        s
    }
}

/// Parameters for [`random_movie`].
#[derive(Debug, Clone, Copy)]
pub struct RandomMovie {
    pub max_a: usize,
    pub max_b: usize,
    pub max_events: usize,
    /// Probability of inserting a c-leaf birth and death pair.
    pub c_rate: f64,
    /// Probability that a saddle is positive.
    pub positive_rate: f64,
}

impl Default for RandomMovie {
    fn default() -> Self {
        Self { max_a: 3, max_b: 3, max_events: 6, c_rate: 0.2, positive_rate: 0.5 }
    }
}

/// A random movie whose heads return to their starting places, so it closes
/// up with the identity closure. May fail to compile (e.g. disconnected).
pub fn random_movie<R: Rng>(rng: &mut R, p: RandomMovie) -> MoviePresentation {
    let n_a = rng.gen_range(0..=p.max_a);
    let n_b = rng.gen_range(usize::from(n_a == 0)..=p.max_b);
    let mut leaves = Vec::new();
    for i in 1..=n_a {
        leaves.push(Leaf { id: format!("A{i}"), kind: LeafKind::A, tail: Some(format!("v{i}")), head: Some(format!("s{i}")) });
    }
    for j in 1..=n_b {
        leaves.push(Leaf {
            id: format!("B{j}"),
            kind: LeafKind::B,
            tail: Some(format!("u{j}")),
            head: Some(format!("w{j}")),
        });
    }
    let ids: Vec<String> = leaves.iter().map(|l| l.id.clone()).collect();
    let sign = |rng: &mut R| if rng.gen_bool(p.positive_rate) { 1 } else { -1 };
    let slots = |rng: &mut R| if rng.gen_bool(0.5) { (Slot::L, Slot::R) } else { (Slot::R, Slot::L) };
    let swap = |x: &str, y: &str, rng: &mut R| {
        let (s1, s2) = slots(rng);
        MovieEvent { time: None, sign: sign(rng), first: (x.into(), s1), second: (y.into(), s2), creates: None }
    };

    let mut events = Vec::new();
    let mut page = leaves.clone();
    let mut c_count = 0;
    let mut live_c: Vec<String> = Vec::new();
    let k = if ids.len() >= 2 { rng.gen_range(1..=p.max_events) } else { 0 };
    let push = |ev: MovieEvent, page: &mut Vec<Leaf>, events: &mut Vec<MovieEvent>| {
        *page = step(page, &ev).expect("generated events are well formed").0;
        events.push(ev);
    };
    for _ in 0..k {
        let pair: Vec<&String> = ids.choose_multiple(rng, 2).collect();
        let ev = swap(pair[0], pair[1], rng);
        push(ev, &mut page, &mut events);
        if rng.gen_bool(p.c_rate) && !ids.is_empty() {
            c_count += 1;
            let host = ids.choose(rng).expect("nonempty").clone();
            let c = format!("C{c_count}");
            let ev = MovieEvent {
                time: None,
                sign: sign(rng),
                first: (host.clone(), Slot::L),
                second: (host, Slot::R),
                creates: Some(c.clone()),
            };
            push(ev, &mut page, &mut events);
            live_c.push(c);
        }
        if !live_c.is_empty() && rng.gen_bool(0.5) {
            let c = live_c.swap_remove(rng.gen_range(0..live_c.len()));
            let into = if !live_c.is_empty() && rng.gen_bool(0.3) {
                live_c.choose(rng).expect("nonempty").clone()
            } else {
                ids.choose(rng).expect("nonempty").clone()
            };
            let ev = swap(&into, &c, rng);
            push(ev, &mut page, &mut events);
        }
    }
    for c in std::mem::take(&mut live_c) {
        let into = ids.choose(rng).expect("nonempty").clone();
        let ev = swap(&into, &c, rng);
        push(ev, &mut page, &mut events);
    }
    // send every head home
    for l in &leaves {
        let here = page.iter().find(|x| x.id == l.id).expect("a/b leaves persist").head.clone();
        if here != l.head {
            let other = page.iter().find(|x| x.head == l.head).expect("heads are permuted").id.clone();
            let ev = swap(&l.id, &other, rng);
            push(ev, &mut page, &mut events);
        }
    }
    let closure = ids.iter().map(|i| (i.clone(), i.clone())).collect();
    let sig = SurfaceSig::disc();
    let braid = BraidWord::new(sig, n_a.max(1) as u32, Vec::new()).ok().filter(|_| n_a > 0);
    MoviePresentation { sig, monodromy: Vec::new(), braid, leaves, events, closure, sign_hints: BTreeMap::new() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foliation::{be_check, ot_disc_report, SingularityCounts};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const OT: &str = "openbook 0 2\nmonodromy bdry_1^-1\nbraid 1\nleaf A a v1 s1\nleaf B b v2 w\nevent 1/3 + A.l B.r\nevent 2/3 + A.l B.r\nclose A=A B=B\n";
    const SPHERE: &str = "leaf L1 b v1 w1\nleaf L2 b v2 w2\nevent 1/4 - L1.l L2.r\nevent 3/4 + L1.l L2.r\nclose L1=L1 L2=L2\n";

    #[test]
    fn overtwisted_disc_movie() {
        let m = parse_movie(OT).unwrap();
        let fs = compile(&m).unwrap();
        assert_eq!(fs.counts().unwrap(), SingularityCounts { e_plus: 2, e_minus: 1, h_plus: 2, h_minus: 0 });
        assert_eq!(fs.euler_char().unwrap(), 1);
        assert!(ot_disc_report(&fs).unwrap().ot_disc);
        assert!(be_check(&fs).unwrap().violated);
    }

    #[test]
    fn sphere_movie() {
        let fs = compile(&parse_movie(SPHERE).unwrap()).unwrap();
        assert_eq!(fs.counts().unwrap(), SingularityCounts { e_plus: 2, e_minus: 2, h_plus: 1, h_minus: 1 });
        assert_eq!(fs.euler_char().unwrap(), 2);
    }

    #[test]
    fn eventless_a_leaf() {
        let fs = compile(&parse_movie("braid 1\nleaf A a v s\n").unwrap()).unwrap();
        assert_eq!(fs.atom, Some(Atom::ADisc));
        assert_eq!(fs.sl_boundary().unwrap(), -1);
    }

    #[test]
    fn rejections() {
        let same_time = "leaf L1 b v1 w1\nleaf L2 b v2 w2\nevent 1/2 - L1.l L2.r\nevent 1/2 + L1.l L2.r\n";
        let e = parse_movie(same_time).unwrap_err().to_string();
        assert!(e.contains("no saddle-saddle connections"), "{e}");
        let wrong_type = "leaf A a v1 s1\nleaf B b v2 w\nevent + A.l B.r\nclose A=B B=A\n";
        assert!(parse_movie(wrong_type).is_err());
        let slots = "leaf L1 b v1 w1\nleaf L2 b v2 w2\nevent - L1.l L2.l\n";
        assert!(parse_movie(slots).unwrap_err().to_string().contains("incompatible slots"));
        assert!(parse_movie("leaf X q").is_err());
        assert!(parse_movie("bogus 1").is_err());
    }

    #[test]
    fn surgery_transitions() {
        let a = |id: &str, v: &str, s: &str| Leaf { id: id.into(), kind: LeafKind::A, tail: Some(v.into()), head: Some(s.into()) };
        let ev = |x: &str, y: &str, c: Option<&str>| MovieEvent {
            time: None,
            sign: 1,
            first: (x.into(), Slot::L),
            second: (y.into(), Slot::R),
            creates: c.map(String::from),
        };
        let (page, tile) = step(&[a("X", "v1", "s1"), a("Y", "v2", "s2")], &ev("X", "Y", None)).unwrap();
        assert_eq!(tile.kind, RegionKind::Aa);
        assert_eq!(page[0].head.as_deref(), Some("s2"));
        assert_eq!(page[1].head.as_deref(), Some("s1"));
        let (page, tile) = step(&[a("X", "v1", "s1"), Leaf::c("C")], &ev("X", "C", None)).unwrap();
        assert_eq!(tile.kind, RegionKind::Ac);
        assert_eq!(page.len(), 1);
        let b = Leaf { id: "Y".into(), kind: LeafKind::B, tail: Some("v".into()), head: Some("w".into()) };
        let (page, tile) = step(&[b], &ev("Y", "Y", Some("C"))).unwrap();
        assert_eq!(tile.kind, RegionKind::Bc);
        assert_eq!(page.len(), 2);
        assert_eq!(page[1].kind, LeafKind::C);
    }

    #[test]
    fn script_round_trip() {
        for doc in [OT, SPHERE] {
            let m = parse_movie(doc).unwrap();
            let again = parse_movie(&m.to_script()).unwrap();
            assert_eq!(again, m);
            assert_eq!(again.to_script(), m.to_script());
        }
    }

    #[test]
    fn reversal_swaps_hyperbolic_signs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        for _ in 0..300 {
            let m = random_movie(&mut rng, RandomMovie::default());
            let Ok(fs) = compile(&m) else { continue };
            let rev = compile(&m.reversed().unwrap()).unwrap();
            let (c, r) = (fs.counts().unwrap(), rev.counts().unwrap());
            assert_eq!((r.e_plus, r.e_minus, r.h_plus, r.h_minus), (c.e_plus, c.e_minus, c.h_minus, c.h_plus));
            assert_eq!(rev.euler_char().unwrap(), fs.euler_char().unwrap());
            checked += 1;
        }
        assert!(checked > 50);
    }

    #[test]
    fn json_form() {
        let j = r#"{"openbook": {"genus": 0, "boundary": 2}, "monodromy": "bdry_1^-1", "braid": "1",
                    "leaves": ["A a v1 s1", "B b v2 w"], "events": ["1/3 + A.l B.r", "2/3 + A.l B.r"], "close": "A=A B=B"}"#;
        assert_eq!(parse_movie(j).unwrap(), parse_movie(OT).unwrap());
    }

    #[test]
    fn random_movies_mostly_compile() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let ok = (0..200).filter(|_| compile(&random_movie(&mut rng, RandomMovie::default())).is_ok()).count();
        assert!(ok > 50, "{ok}");
    }
}
