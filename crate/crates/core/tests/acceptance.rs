//! Acceptance suite: one PASS/FAIL line per criterion.

mod common;

use std::collections::HashSet;
use std::time::{Duration, Instant};

use common::*;
use nilrigid::algebra::{GraphAlgebra, NilElement};
use nilrigid::automorphism::{induced_derived_map, AffineGenerator};
use nilrigid::dynamics::{lyapunov_gap_estimate, to_f64_matrices, FMatrix, Start, WalkConfig};
use nilrigid::gallery::{standard_generators, Example};
use nilrigid::graph::GraphSpec;
use nilrigid::linalg::{unit, QMatrix};
use nilrigid::rational::{half, q, qr};
use nilrigid::report::{analyze_example, AnalysisOptions};
use nilrigid::rigidity::*;
use nilrigid::Error;
use num_traits::ToPrimitive;
use rand::Rng;

const RUNTIME_HEISENBERG: Duration = Duration::from_secs(1);
const RUNTIME_GALLERY: Duration = Duration::from_secs(5);
const RUNTIME_TORUS: Duration = Duration::from_secs(2);
const ALGEBRA_CASES: usize = 200;
const FUNCTOR_PAIRS: usize = 100;
const EQUIVARIANCE_PAIRS: usize = 100;
const LATTICE_WORD_LENGTH: usize = 6;
const RANDOM_SETS: usize = 50;
const LYAPUNOV_STEPS: usize = 100_000;
const LYAPUNOV_REL_TOL: f64 = 0.05;
const ROTATION_GAP_TOL: f64 = 0.01;

type Outcome = Result<String, String>;
type Criterion = (&'static str, Box<dyn Fn() -> Outcome>);

fn check(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let t = Instant::now();
    let detail = f()?;
    let dt = t.elapsed();
    check(dt < limit, format!("took {dt:?}, limit {limit:?}"))?;
    Ok(format!("{detail}; {:.3}s", dt.as_secs_f64()))
}

fn heisenberg() -> Outcome {
    timed(RUNTIME_HEISENBERG, || {
        let r = analyze_example(Example::Heisenberg, &AnalysisOptions::default()).map_err(|e| e.to_string())?;
        check(r.verdict.status == Status::NotRigid, format!("verdict {}", r.verdict.status))?;
        check(
            r.verdict.certificate == Some(Certificate::FixedVector { vector: vec![q(1)] }),
            format!("certificate {:?}", r.verdict.certificate),
        )?;
        check(r.certificate_verified == Some(true), "certificate did not verify")?;
        Ok("NOT_RIGID, FixedVector u12".into())
    })
}

fn dense_gallery(ex: Example, classes: Option<Vec<Vec<&str>>>) -> Outcome {
    timed(RUNTIME_GALLERY, || {
        let gs = ex.build().map_err(|e| e.to_string())?;
        let fixed = fixed_vectors_in_derived(&gs).map_err(|e| e.to_string())?;
        check(fixed.is_empty(), format!("fixed space of dimension {}", fixed.len()))?;
        let r = analyze_example(ex, &AnalysisOptions::default()).map_err(|e| e.to_string())?;
        check(r.verdict.status == Status::Rigid, format!("verdict {}", r.verdict.status))?;
        check(r.verdict.assumptions == ["zariski-dense"], format!("assumptions {:?}", r.verdict.assumptions))?;
        check(r.certificate_verified == Some(true), "certificate did not verify")?;
        if let Some(expected) = classes {
            let got = r.graph.as_ref().map(|g| g.coherent_classes.clone()).unwrap_or_default();
            check(got == expected, format!("coherent classes {got:?}"))?;
        }
        Ok(format!("fixed space {{0}}, RIGID under zariski-dense, {} generators", gs.len()))
    })
}

fn torus() -> Outcome {
    let m = |rows: &[&[i64]]| QMatrix::from_i64(rows);
    let b = Budgets::default();
    let free = timed(RUNTIME_TORUS, || {
        let v =
            torus_verdict(2, vec![m(&[&[1, 2], &[0, 1]]), m(&[&[1, 0], &[2, 1]])], &b).map_err(|e| e.to_string())?;
        check(v.status == Status::Rigid, format!("free pair verdict {}", v.status))?;
        match v.certificate {
            Some(Certificate::ProximalIrreducible { proximal, .. }) => {
                check(proximal.word.len() <= 2, format!("word `{}`", proximal.word))?;
                check(proximal.path == spectral::GapPath::ExactSturm, "gap not certified exactly")?;
                Ok(format!("free pair RIGID via `{}`", proximal.word))
            }
            c => Err(format!("free pair certificate {c:?}")),
        }
    })?;
    let unip = timed(RUNTIME_TORUS, || {
        let v = torus_verdict(2, vec![m(&[&[1, 1], &[0, 1]])], &b).map_err(|e| e.to_string())?;
        check(v.status == Status::NotRigid, format!("unipotent verdict {}", v.status))?;
        match v.certificate {
            Some(Certificate::InvariantLine { point, .. }) if point.coords() == unit(2, 0).as_slice() => {
                Ok("unipotent NOT_RIGID via line e1".into())
            }
            c => Err(format!("unipotent certificate {c:?}")),
        }
    })?;
    let rot = timed(RUNTIME_TORUS, || {
        let v = torus_verdict(2, vec![m(&[&[0, -1], &[1, 0]])], &b).map_err(|e| e.to_string())?;
        check(v.status == Status::NotRigid, format!("rotation verdict {}", v.status))?;
        check(
            v.certificate == Some(Certificate::InvariantPDForm { form: QMatrix::identity(2) }),
            format!("rotation certificate {:?}", v.certificate),
        )?;
        Ok("rotation NOT_RIGID via PD form I".into())
    })?;
    Ok(format!("{free}; {unip}; {rot}"))
}

fn sum(a: &NilElement, b: &NilElement) -> NilElement {
    NilElement::new(
        a.v.iter().zip(&b.v).map(|(x, y)| x + y).collect(),
        a.w.iter().zip(&b.w).map(|(x, y)| x + y).collect(),
    )
}

fn algebra_suite() -> Outcome {
    let graphs = [
        GraphSpec::complete(2),
        GraphSpec::complete(3),
        GraphSpec::path(3),
        GraphSpec::star(3),
        GraphSpec::complete(4),
    ];
    let mut r = rng(1);
    let mut failures = [0usize; 4];
    for i in 0..ALGEBRA_CASES {
        let alg = GraphAlgebra::new(graphs[i % graphs.len()].clone());
        let (x, y, z) = (element(&mut r, &alg), element(&mut r, &alg), element(&mut r, &alg));
        let mul = |a: &NilElement, b: &NilElement| alg.multiply(a, b).unwrap();
        let br = |a: &NilElement, b: &NilElement| alg.bracket(a, b).unwrap();
        if mul(&mul(&x, &y), &z) != mul(&x, &mul(&y, &z)) {
            failures[0] += 1;
        }
        if !sum(&sum(&br(&x, &br(&y, &z)), &br(&y, &br(&z, &x))), &br(&z, &br(&x, &y))).is_identity() {
            failures[1] += 1;
        }
        if br(&x, &y) != br(&y, &x).scale(&q(-1)) {
            failures[2] += 1;
        }
        if !br(&br(&x, &y), &z).is_identity() || !br(&z, &br(&x, &y)).is_identity() {
            failures[3] += 1;
        }
    }
    check(failures == [0; 4], format!("failures (assoc, jacobi, antisym, step-2) = {failures:?}"))?;
    Ok(format!("{ALGEBRA_CASES} cases each: associativity, Jacobi, antisymmetry, step-2 nilpotency"))
}

/// Wedge-square oracle: `Λ²g` keeps the span of the non-edges.
fn wedge_preserves_kernel(graph: &GraphSpec, g: &QMatrix) -> bool {
    let n = graph.vertex_count();
    (0..n).all(|i| {
        (i + 1..n).all(|j| {
            graph.adjacent(i, j)
                || graph.edges().iter().all(|&(a, b)| &g[(a, i)] * &g[(b, j)] == &g[(b, i)] * &g[(a, j)])
        })
    })
}

fn p_functor() -> Outcome {
    let mut r = rng(2);
    let mut failures = 0;
    let mut incompatible = 0;
    let examples: Vec<Example> = gallery().into_iter().filter(|e| e.graph().is_some()).collect();
    for ex in &examples {
        let alg = GraphAlgebra::new(ex.graph().unwrap());
        let n = alg.dim_v();
        if !induced_derived_map(&alg, &QMatrix::identity(n)).is_ok_and(|p| p.is_identity()) {
            failures += 1;
        }
        for _ in 0..FUNCTOR_PAIRS {
            let g = compatible_linear(&mut r, &alg);
            let h = compatible_linear(&mut r, &alg);
            let p = |m: &QMatrix| induced_derived_map(&alg, m);
            match (p(&g.mul(&h)), p(&g), p(&h)) {
                (Ok(gh), Ok(pg), Ok(ph)) if gh == pg.mul(&ph) => {}
                _ => failures += 1,
            }
            let k = if r.gen_bool(0.5) { invertible(&mut r, n) } else { unimodular(&mut r, n, 1) };
            let oracle = wedge_preserves_kernel(alg.graph(), &k);
            match induced_derived_map(&alg, &k) {
                Ok(_) if oracle => {}
                Err(Error::NotBracketCompatible) if !oracle => incompatible += 1,
                _ => failures += 1,
            }
        }
    }
    check(failures == 0, format!("{failures} failures"))?;
    Ok(format!(
        "{FUNCTOR_PAIRS} pairs on each of {} gallery graphs; {incompatible} incompatible maps rejected as predicted",
        examples.len()
    ))
}

fn equivariance() -> Outcome {
    let alg = GraphAlgebra::new(GraphSpec::complete(2));
    let mut gens = standard_generators(&alg).unwrap();
    let inv: Vec<AffineGenerator> = gens.iter().map(|g| g.invert(&alg).unwrap()).collect();
    gens.extend(inv);
    let t = AffineGenerator::translation(&alg, NilElement::new(vec![q(1), q(-2)], vec![qr(3, 2)])).unwrap();
    gens.push(gens[0].compose(&alg, &gens[2]).unwrap());
    gens.push(t);
    let mut r = rng(3);
    let mut failures = 0;
    let mut checked = 0;
    for _ in 0..EQUIVARIANCE_PAIRS {
        let (x, y) = (element(&mut r, &alg), element(&mut r, &alg));
        if x == y {
            continue;
        }
        for g in &gens {
            let lhs = alg.rho(&g.apply(&alg, &x).unwrap(), &g.apply(&alg, &y).unwrap()).unwrap();
            let rhs = alg.rho(&x, &y).unwrap().apply(&g.linear_action_on_g(&alg)).unwrap();
            checked += 1;
            if lhs != rhs {
                failures += 1;
            }
        }
    }
    check(failures == 0, format!("{failures} of {checked} failed"))?;
    Ok(format!("{checked} exact checks ({} generators)", gens.len()))
}

type Key = Vec<(i64, i64)>;

fn key(x: &NilElement) -> Key {
    x.v.iter().chain(&x.w).map(|c| (c.numer().to_i64().unwrap(), c.denom().to_i64().unwrap())).collect()
}

/// Words of length <= `len` in `(e_a, 0)`, `(0, u_e / 2)` and their inverses.
fn reachable(alg: &GraphAlgebra, len: usize) -> Vec<NilElement> {
    let mut letters = Vec::new();
    for a in 0..alg.dim_v() {
        letters.push(alg.basis_v(a));
    }
    for e in 0..alg.dim_w() {
        letters.push(alg.basis_w(e).scale(&half()));
    }
    let inverses: Vec<NilElement> = letters.iter().map(|x| alg.inverse(x).unwrap()).collect();
    letters.extend(inverses);
    let mut seen: HashSet<Key> = HashSet::new();
    let mut all = vec![alg.identity()];
    seen.insert(key(&all[0]));
    let mut frontier = all.clone();
    for _ in 0..len {
        let mut next = Vec::new();
        for p in &frontier {
            for l in &letters {
                let y = alg.multiply(p, l).unwrap();
                if seen.insert(key(&y)) {
                    next.push(y);
                }
            }
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    all
}

fn lattice_oracle() -> Outcome {
    let mut report = Vec::new();
    for (name, g) in [("K2", GraphSpec::complete(2)), ("P3", GraphSpec::path(3)), ("star-3", GraphSpec::star(3))] {
        let alg = GraphAlgebra::new(g);
        let pts = reachable(&alg, LATTICE_WORD_LENGTH);
        let set: HashSet<Key> = pts.iter().map(key).collect();
        let mut disagreements = 0;
        // every reachable point is in the lattice, and every off-lattice shift of one is not
        let mut shifts: Vec<NilElement> = (0..alg.dim_v()).map(|a| alg.basis_v(a).scale(&half())).collect();
        shifts.extend((0..alg.dim_w()).map(|e| alg.basis_w(e).scale(&qr(1, 4))));
        for p in &pts {
            if !alg.lattice_contains(p) {
                disagreements += 1;
            }
            for s in &shifts {
                if alg.lattice_contains(&alg.multiply(p, s).unwrap()) {
                    disagreements += 1;
                }
            }
        }
        // small lattice points are all reachable, small non-lattice points never are
        let (n, m) = (alg.dim_v(), alg.dim_w());
        let vals = [q(-1), q(0), q(1)];
        let halves = [qr(-1, 2), q(0), qr(1, 2)];
        let total = 3usize.pow((n + m) as u32);
        let mut boxed = 0;
        for idx in 0..total {
            let mut t = idx;
            let mut v = Vec::new();
            let mut w = Vec::new();
            for _ in 0..n {
                v.push(vals[t % 3].clone());
                t /= 3;
            }
            for _ in 0..m {
                w.push(halves[t % 3].clone());
                t /= 3;
            }
            let weight: usize = v.iter().chain(&w).filter(|c| **c != q(0)).count();
            if weight > 2 {
                continue;
            }
            let x = NilElement::new(v, w);
            boxed += 1;
            if !alg.lattice_contains(&x) || !set.contains(&key(&x)) {
                disagreements += 1;
            }
            let mut off = x.clone();
            off.v[0] += qr(1, 3);
            if alg.lattice_contains(&off) || set.contains(&key(&off)) {
                disagreements += 1;
            }
        }
        check(disagreements == 0, format!("{name}: {disagreements} disagreements"))?;
        report.push(format!("{name} {} reachable, {boxed} box points", pts.len()));
    }
    Ok(report.join(", "))
}

/// Maximal coherent subsets by enumerating every vertex subset.
fn brute_force_classes(n: usize, adj: &[Vec<bool>]) -> Vec<Vec<usize>> {
    let coherent = |mask: u32| {
        (0..n)
            .filter(|a| mask >> a & 1 == 1)
            .all(|a| (0..n).filter(|b| mask >> b & 1 == 1).all(|b| (0..n).all(|g| !adj[a][g] || g == b || adj[b][g])))
    };
    let sets: Vec<u32> = (1..1u32 << n).filter(|&m| coherent(m)).collect();
    let mut maximal: Vec<Vec<usize>> = sets
        .iter()
        .filter(|&&m| !sets.iter().any(|&o| o != m && o & m == m))
        .map(|&m| (0..n).filter(|v| m >> v & 1 == 1).collect())
        .collect();
    maximal.sort();
    maximal
}

fn coherent_components() -> Outcome {
    let mut graphs = 0;
    for n in 1..=5usize {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let labels: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
        for mask in 0u32..1 << pairs.len() {
            let chosen: Vec<(usize, usize)> =
                pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, p)| *p).collect();
            let mut adj = vec![vec![false; n]; n];
            for &(i, j) in &chosen {
                adj[i][j] = true;
                adj[j][i] = true;
            }
            let edges: Vec<(String, String)> =
                chosen.iter().map(|&(i, j)| (labels[i].clone(), labels[j].clone())).collect();
            let g = GraphSpec::new(&labels, &edges).map_err(|e| e.to_string())?;
            let mut got: Vec<Vec<usize>> = g.coherent_components().classes().to_vec();
            got.sort();
            let expected = brute_force_classes(n, &adj);
            check(got == expected, format!("n={n} edges {chosen:?}: {got:?} vs {expected:?}"))?;
            graphs += 1;
        }
    }
    Ok(format!("{graphs} labelled graphs on 1..=5 vertices"))
}

fn certificate_soundness() -> Outcome {
    let b = Budgets::default();
    let mut sets: Vec<GeneratorSet> = gallery().iter().map(|e| e.build().unwrap()).collect();
    let gallery_len = sets.len();
    sets.extend(random_sets(2024, RANDOM_SETS));
    let mut emitted = 0;
    for (i, gs) in sets.iter().enumerate() {
        let mut verdicts = vec![general_measure_verdict(gs, &b)];
        if gs.algebra().is_some() {
            verdicts.extend(nilmanifold_verdict(gs, true, &b).ok());
        }
        for v in verdicts {
            let Some(c) = &v.certificate else { continue };
            emitted += 1;
            check(verify_certificate(c, gs), format!("set {i}: {} failed to verify", c.kind()))?;
            check(!verify_certificate(&mutate(c), gs), format!("set {i}: mutated {} verified", c.kind()))?;
        }
    }
    Ok(format!(
        "{emitted} certificates over {gallery_len} gallery sets and {RANDOM_SETS} random sets; all mutations rejected"
    ))
}

fn dynamics() -> Outcome {
    let cfg = WalkConfig { steps: LYAPUNOV_STEPS, seed: 42, burn_in: 0, start: Start::Random };
    let hyp: Vec<FMatrix> = to_f64_matrices(&[QMatrix::from_i64(&[&[2, 1], &[1, 1]])]);
    let rot: Vec<FMatrix> = to_f64_matrices(&[QMatrix::from_i64(&[&[0, -1], &[1, 0]])]);
    let a = lyapunov_gap_estimate(&hyp, &cfg).map_err(|e| e.to_string())?;
    let a2 = lyapunov_gap_estimate(&hyp, &cfg).map_err(|e| e.to_string())?;
    let exact = 2.0 * ((3.0 + 5f64.sqrt()) / 2.0).ln();
    let gap = a.gap().unwrap();
    check((gap - exact).abs() <= LYAPUNOV_REL_TOL * exact, format!("hyperbolic gap {gap} vs {exact}"))?;
    let r = lyapunov_gap_estimate(&rot, &cfg).map_err(|e| e.to_string())?;
    let r2 = lyapunov_gap_estimate(&rot, &cfg).map_err(|e| e.to_string())?;
    let rgap = r.gap().unwrap();
    check(rgap.abs() < ROTATION_GAP_TOL, format!("rotation gap {rgap}"))?;
    check(a == a2 && r == r2, "estimates differ between runs")?;
    Ok(format!("hyperbolic gap {gap:.5} (exact {exact:.5}), rotation gap {rgap:.2e}, deterministic"))
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("Heisenberg reproduction", Box::new(heisenberg)),
        ("complete graph K3", Box::new(|| dense_gallery(Example::Complete(3), None))),
        (
            "star graph with 3 leaves",
            Box::new(|| dense_gallery(Example::Star(3), Some(vec![vec!["l1", "l2", "l3"], vec!["c"]]))),
        ),
        ("torus examples", Box::new(torus)),
        ("algebra property suite", Box::new(algebra_suite)),
        ("P-functor suite", Box::new(p_functor)),
        ("rho equivariance", Box::new(equivariance)),
        ("lattice oracle", Box::new(lattice_oracle)),
        ("coherent components", Box::new(coherent_components)),
        ("certificate soundness", Box::new(certificate_soundness)),
        ("dynamics consistency", Box::new(dynamics)),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or(p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
