//! One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

use obfol::foliation::{be_check, extract_ot_disc, find_ot_witness, ot_disc_report, SingularityCounts};
use obfol::freegroup::FreeWord;
use obfol::mapclass::{compose, MappingClass};
use obfol::morita::{d_value, k_value};
use obfol::movie::{compile, parse_movie};
use obfol::props::{foliation_corpus, random_braid, random_class, random_rel};
use obfol::slcalc::{
    braid_homology, c_planar, c_value, residual_is_zero, self_linking, sl_planar, solve_a, BraidGen, BraidWord,
};
use obfol::surface::{rel_from_rho_prime, SurfaceSig};
use obfol::{Error, Result};

type Check = Result<std::result::Result<(), String>>;

fn sig(g: u32, r: u32) -> SurfaceSig {
    SurfaceSig::new(g, r).unwrap()
}

fn expect<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> std::result::Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got:?}, want {want:?}"))
    }
}

fn d_goldens() -> Check {
    for (w, want) in [("bA", 0), ("ba", 0), ("B", 0), ("aBA", -1)] {
        if let Err(e) = expect(w, d_value(&w.parse::<FreeWord>()?)?, want) {
            return Ok(Err(e));
        }
    }
    Ok(Ok(()))
}

fn twist_at(s: SurfaceSig, name: &str, rho: usize) -> Result<(MappingClass, obfol::surface::RelClass)> {
    Ok((MappingClass::from_catalog(s, &[(name, 1)])?, rel_from_rho_prime(s, rho)?))
}

/// The four cases at index i: (A_i, 2i), (B_i, 2i−1), (C_i, 2i), (C_i, 2i+2).
fn cases(i: usize) -> [(String, usize); 4] {
    [(format!("a_{i}"), 2 * i), (format!("b_{i}"), 2 * i - 1), (format!("c_{i}"), 2 * i), (format!("c_{i}"), 2 * i + 2)]
}

fn k_goldens() -> Check {
    let s = sig(2, 1);
    for ((name, rho), want) in cases(1).into_iter().zip([0, 0, 0, -1]) {
        let (phi, a) = twist_at(s, &name, rho)?;
        if let Err(e) = expect(&format!("k({name}, ρ'{rho})"), k_value(&phi, &a)?, want) {
            return Ok(Err(e));
        }
    }
    Ok(Ok(()))
}

fn c_goldens() -> Check {
    for g in [2, 3] {
        let s = sig(g, 1);
        for i in 1..g as usize {
            for ((name, rho), want) in cases(i).into_iter().zip([0, 0, -1, 1]) {
                let (phi, a) = twist_at(s, &name, rho)?;
                if let Err(e) = expect(&format!("c({name}, ρ'{rho}) on S_{g},1"), c_value(&phi, &a)?, want) {
                    return Ok(Err(e));
                }
            }
        }
    }
    Ok(Ok(()))
}

fn genus_one_vanishing(rng: &mut ChaCha8Rng) -> Check {
    let s = sig(1, 1);
    for _ in 0..200 {
        let phi = random_class(rng, s, 6..=6)?;
        let a = random_rel(rng, s, 5)?;
        let c = c_value(&phi, &a)?;
        if c != 0 {
            return Ok(Err(format!("c({}, {:?}) = {c}", phi.word_string(), a.coords)));
        }
    }
    Ok(Ok(()))
}

fn crossed_laws(rng: &mut ChaCha8Rng) -> Check {
    for s in [sig(2, 1), sig(0, 4)] {
        for _ in 0..200 {
            let phi = random_class(rng, s, 1..=4)?;
            let psi = random_class(rng, s, 1..=4)?;
            let (a, b) = (random_rel(rng, s, 3)?, random_rel(rng, s, 3)?);
            if c_value(&phi, &a.add(&b)?)? != c_value(&phi, &a)? + c_value(&phi, &b)? {
                return Ok(Err(format!("additivity on {s} for {}", phi.word_string())));
            }
            let lhs = c_value(&compose(&psi, &phi)?, &a)?;
            let rhs = c_value(&phi, &a)? + c_value(&psi, &phi.act_rel(&a)?)?;
            if lhs != rhs {
                return Ok(Err(format!("crossed law on {s}: ψ = {}, φ = {}", psi.word_string(), phi.word_string())));
            }
        }
    }
    Ok(Ok(()))
}

fn planar_reduction(rng: &mut ChaCha8Rng) -> Check {
    let mut sl_cases = 0;
    for n in 0..100 {
        let s = if n % 2 == 0 { sig(0, 3) } else { sig(0, 4) };
        let phi = random_class(rng, s, 1..=5)?;
        let a = random_rel(rng, s, 3)?;
        if c_value(&phi, &a)? != c_planar(&phi, &a)? {
            return Ok(Err(format!("c ≠ c_planar for {} on {s}", phi.word_string())));
        }
        let b = random_braid(rng, s, 1..=3, 0..=6, 0.4)?;
        match (self_linking(&phi, &b, None), sl_planar(&phi, &b)) {
            (Ok(r), Ok(p)) if r.sl == p => sl_cases += 1,
            (Err(Error::NotNullHomologous), Err(Error::NotNullHomologous)) => {}
            (x, y) => return Ok(Err(format!("sl vs sl_planar for {}: {x:?} / {y:?}", phi.word_string()))),
        }
    }
    if sl_cases < 30 {
        return Ok(Err(format!("only {sl_cases} solvable sl instances")));
    }
    Ok(Ok(()))
}

fn bennequin(rng: &mut ChaCha8Rng) -> Check {
    let d = SurfaceSig::disc();
    let id = MappingClass::identity(d);
    let sigma = |p| BraidWord::new(d, 2, vec![(BraidGen::Sigma(1), p)]);
    if let Err(e) = expect("σ₁", self_linking(&id, &sigma(1)?, None)?.sl, -1) {
        return Ok(Err(e));
    }
    if let Err(e) = expect("σ₁³", self_linking(&id, &sigma(3)?, None)?.sl, 1) {
        return Ok(Err(e));
    }
    for _ in 0..100 {
        let b = random_braid(rng, d, 1..=6, 0..=12, 0.0)?;
        let exp: i64 = b.letters().iter().map(|&(_, e)| e).sum();
        let sl = self_linking(&id, &b, None)?.sl;
        if sl != exp - b.strands() as i64 {
            return Ok(Err(format!("{:?}: sl = {sl}", b.letters())));
        }
    }
    Ok(Ok(()))
}

fn annulus_reduction(rng: &mut ChaCha8Rng) -> Check {
    let s = sig(0, 2);
    let mut done = 0;
    while done < 100 {
        let m = rng.gen_range(1..=3i64) * if rng.gen_bool(0.5) { 1 } else { -1 };
        let phi = MappingClass::from_catalog(s, &[("bdry_1", m)])?;
        let b = random_braid(rng, s, 1..=4, 0..=8, 0.5)?;
        let r = match self_linking(&phi, &b, None) {
            Ok(r) => r,
            Err(Error::NotNullHomologous) => continue,
            Err(e) => return Err(e),
        };
        // arcs pair with the core once and the twist only adds core loops, so φ*(a)·[b] = s·w
        let w: i64 = b.letters().iter().filter(|(g, _)| matches!(g, BraidGen::Rho(_))).map(|&(_, e)| e).sum();
        let exp: i64 = b.letters().iter().map(|&(_, e)| e).sum();
        let want = -(b.strands() as i64) + exp - r.a[0] * w;
        if r.c != 0 || r.sl != want {
            return Ok(Err(format!("bdry_1^{m}, {:?}: {r:?}, expected sl {want}", b.letters())));
        }
        done += 1;
    }
    Ok(Ok(()))
}

const SPHERE: &str = "\
leaf L1 b v1 w1
leaf L2 b v2 w2
event 1/4 - L1.l L2.r
event 3/4 + L1.l L2.r
close L1=L1 L2=L2
";

const OT_DISC: &str = "\
openbook 0 2
monodromy bdry_1^-1
braid 1
leaf A a v1 s1
leaf B b v2 w
event 1/3 + A.l B.r
event 2/3 + A.l B.r
close A=A B=B
";

fn foliation_goldens() -> Check {
    let sphere = compile(&parse_movie(SPHERE)?)?;
    if let Err(e) = expect("sphere counts", sphere.counts()?, SingularityCounts { e_plus: 2, e_minus: 2, h_plus: 1, h_minus: 1 })
        .and(expect("sphere χ", sphere.euler_char()?, 2))
    {
        return Ok(Err(e));
    }
    let disc = compile(&parse_movie(OT_DISC)?)?;
    let be = be_check(&disc)?;
    let r = expect("disc counts", disc.counts()?, SingularityCounts { e_plus: 2, e_minus: 1, h_plus: 2, h_minus: 0 })
        .and(expect("disc χ", disc.euler_char()?, 1))
        .and(expect("disc sl", disc.sl_boundary()?, 1))
        .and(expect("OT predicate", ot_disc_report(&disc)?.ot_disc, true))
        .and(expect("B-E violated", be.violated, true));
    Ok(r)
}

fn corpus_properties(corpus: &[(obfol::movie::MoviePresentation, obfol::foliation::FoliatedSurface)]) -> Check {
    if corpus.len() < 500 {
        return Ok(Err(format!("corpus has {} surfaces", corpus.len())));
    }
    for (m, fs) in corpus {
        let cx = fs.validate()?;
        let c = fs.counts()?;
        if c.e_plus + c.e_minus - c.h_plus - c.h_minus != cx.chi {
            return Ok(Err(format!("count χ ≠ cell χ for\n{}", m.to_script())));
        }
        if cx.boundary_components > 0 && (c.e_minus - c.e_plus) + (c.h_plus - c.h_minus) + cx.chi != 2 * (c.e_minus - c.h_minus) {
            return Ok(Err(format!("sl + χ ≠ 2(e₋ − h₋) for\n{}", m.to_script())));
        }
        for i in 0..fs.elliptic.len() {
            let mut bad = fs.clone();
            bad.elliptic[i].sign = -bad.elliptic[i].sign;
            if bad.validate().is_ok() {
                return Ok(Err(format!("sign flip of {} not caught in\n{}", fs.elliptic[i].id, m.to_script())));
            }
        }
    }
    Ok(Ok(()))
}

fn witness_pipeline(corpus: &[(obfol::movie::MoviePresentation, obfol::foliation::FoliatedSurface)]) -> Check {
    let mut hits = 0;
    for (m, fs) in corpus {
        if fs.has_c_regions() || !fs.has_boundary()? {
            continue;
        }
        let c = fs.counts()?;
        if c.sl() + fs.euler_char()? <= 0 {
            continue;
        }
        let Some(w) = find_ot_witness(fs)? else {
            return Ok(Err(format!("no witness for\n{}", m.to_script())));
        };
        let d = extract_ot_disc(fs, &w)?;
        if !ot_disc_report(&d)?.ot_disc || d.sl_boundary()? != 1 {
            return Ok(Err(format!("extraction is not an OT disc for\n{}", m.to_script())));
        }
        hits += 1;
    }
    if hits < 20 {
        return Ok(Err(format!("only {hits} violating surfaces in the corpus")));
    }
    Ok(Ok(()))
}

fn solve_a_checks(rng: &mut ChaCha8Rng) -> Check {
    for _ in 0..300 {
        let s = [sig(0, 2), sig(0, 3), sig(1, 1), sig(1, 2), sig(2, 1)][rng.gen_range(0..5)];
        let phi = random_class(rng, s, 0..=4)?;
        let b = random_braid(rng, s, 1..=3, 0..=6, 0.5)?;
        if let Ok(sol) = solve_a(&b, &phi) {
            if !residual_is_zero(&phi, &sol.a, &braid_homology(&b)?)? {
                return Ok(Err(format!("nonzero residual for {} on {s}", phi.word_string())));
            }
        }
    }
    let s = sig(0, 2);
    let rho = BraidWord::new(s, 1, vec![(BraidGen::Rho(1), 1)])?;
    if !matches!(solve_a(&rho, &MappingClass::identity(s)), Err(Error::NotNullHomologous)) {
        return Ok(Err("identity on the annulus should leave ρ₁ unsolvable".into()));
    }
    // the annulus with a left-handed core twist: the overtwisted example
    let phi = MappingClass::from_catalog(s, &[("bdry_1", -1)])?;
    let sol = solve_a(&rho, &phi)?;
    let r = expect("residual", residual_is_zero(&phi, &sol.a, &braid_homology(&rho)?)?, true)
        .and(expect("a", obfol::surface::rho_prime_coords(&sol.a), vec![-1]))
        .and(expect("sl", self_linking(&phi, &rho, None)?.sl, 1));
    Ok(r)
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    let start = Instant::now();
    let corpus = foliation_corpus(7, 1000);
    let corpus_time = start.elapsed();
    let mut failed = 0;
    let mut report = |n: usize, what: &str, r: Check| {
        let line = match r {
            Ok(Ok(())) => format!("criterion {n:>2}: PASS  {what}"),
            Ok(Err(why)) => format!("criterion {n:>2}: FAIL  {what}: {why}"),
            Err(e) => format!("criterion {n:>2}: FAIL  {what}: error {e}"),
        };
        if line.contains("FAIL") {
            failed += 1;
        }
        println!("{line}");
    };
    report(1, "d-function goldens", d_goldens());
    report(2, "k goldens on S_2,1", k_goldens());
    report(3, "c goldens on S_2,1 and S_3,1", c_goldens());
    report(4, "c vanishes on S_1,1", genus_one_vanishing(&mut rng));
    report(5, "crossed-homomorphism laws on S_2,1 and S_0,4", crossed_laws(&mut rng));
    report(6, "planar reduction of c and sl", planar_reduction(&mut rng));
    report(7, "Bennequin reduction on the disc", bennequin(&mut rng));
    report(8, "annulus reduction", annulus_reduction(&mut rng));
    report(9, "foliation goldens: sphere and overtwisted disc", foliation_goldens());
    report(10, "properties over 1000 generated foliated surfaces", corpus_properties(&corpus));
    let t = Instant::now();
    let w = witness_pipeline(&corpus);
    let elapsed = t.elapsed() + corpus_time;
    let w = w.map(|r| r.and_then(|()| if elapsed.as_secs() < 30 { Ok(()) } else { Err(format!("took {elapsed:?}")) }));
    report(11, "witness pipeline over the corpus", w);
    report(12, "solve_a residuals and annulus examples", solve_a_checks(&mut rng));
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
