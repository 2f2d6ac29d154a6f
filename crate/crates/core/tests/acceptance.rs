//! Acceptance suite: every criterion at its stated tolerance and time budget, one line each.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spheremap_core::bounds::BoundsEngine;
use spheremap_core::harmonics::{fourier_degree, harmonic_decompose, laplacian, map_fourier_degree};
use spheremap_core::hodge::{
    check_equivariance, classical_hopf_map, equivariance_inputs, fiber_map_matches_hopf, intertwiner_p, is_isometry,
    sd_characters, sd_split, u1_char_exterior, ExtElement, HodgeContext, LaurentChar,
};
use spheremap_core::hopf::{
    chain_witness, clifford_system, normed_bilinear_from_clifford, odd_sphere_fibration, radon_hurwitz, verify_normed,
    ChainName,
};
use spheremap_core::linalg::{rational_rotation, rational_unitary, Matrix};
use spheremap_core::maps::{
    column_map, compose, grassmannian_projector_map, is_constant, reflection_map, verify_matrix_map,
    verify_projector_map, verify_sphere_map, SphereMap,
};
use spheremap_core::scalar::{int, rat, rational_to_f64, Coeff};
use spheremap_core::wilson::{
    check_simple_length_spectrum, enumerate_classes, evaluate_classes, perturbed_example, symmetric_example,
    wilson_vector, FlatBundle, SchottkyGroup,
};
use spheremap_core::{rational_sphere_points, GaussianRational, MultiPoly, Rational, SphereContext};

type Outcome = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn expected_q(n: usize) -> usize {
    match n {
        2..=3 => 2,
        4..=7 => 4,
        8..=15 => 8,
        16..=31 => 16,
        _ => 32,
    }
}

fn q_table() -> Outcome {
    let mut engine = BoundsEngine::new();
    for n in 2..=47 {
        let q = engine.q_bounds(n).map_err(|e| e.to_string())?;
        ensure!(q.exact && q.lower == expected_q(n) && q.upper == expected_q(n), "n = {n}: got {q:?}");
    }
    let q = engine.q_bounds(48).map_err(|e| e.to_string())?;
    ensure!((q.lower, q.upper, q.exact) == (32, 48, false), "n = 48: got [{}, {}] exact={}", q.lower, q.upper, q.exact);
    Ok(())
}

fn witnesses() -> Outcome {
    let mut engine = BoundsEngine::new();
    for n in 2..=48 {
        let q = engine.q_bounds(n).map_err(|e| e.to_string())?;
        let w = q.witness.ok_or(format!("n = {n}: no witness"))?;
        let f = engine.witness_map(&w).map_err(|e| e.to_string())?;
        let rep = verify_sphere_map(&f);
        ensure!(rep.pass && rep.residual.is_zero(), "{}: nonzero residual", w.label());
        ensure!(!is_constant(&f), "{}: constant", w.label());
        ensure!(f.source_dim() == n && f.target_dim() == q.upper, "{}: dimensions", w.label());
    }
    let chain = chain_witness(ChainName::S31ToS16).map_err(|e| e.to_string())?;
    ensure!(chain.degree_repr() == 4, "S31_to_S16 degree {}", chain.degree_repr());
    Ok(())
}

fn clifford_suite() -> Outcome {
    for m in 1..=64usize {
        let cs = clifford_system(m);
        ensure!(cs.len() as u64 == radon_hurwitz(m as u64) - 1, "m = {m}: {} structures", cs.len());
        ensure!(cs.check().is_ok(), "m = {m}: relations fail");
    }
    for m in [2usize, 4, 8, 16, 24, 32, 40] {
        let f = normed_bilinear_from_clifford(&clifford_system(m)).map_err(|e| e.to_string())?;
        ensure!(verify_normed(&f), "m = {m}: |F(x,y)|^2 != |x|^2|y|^2");
    }
    Ok(())
}

fn standard_constructions() -> Outcome {
    fn reflections<C: spheremap_core::maps::ReflectionField>(r: usize) -> Outcome {
        let m = reflection_map::<C>(r).map_err(|e| e.to_string())?;
        let rep = verify_matrix_map(&m);
        ensure!(rep.pass && rep.det_is_constant && rep.det.constant_term().is_one(), "r = {r}: matrix map fails");
        for j in 1..=m.size() {
            ensure!(verify_sphere_map(&column_map(&m, j).map_err(|e| e.to_string())?).pass, "r = {r}: column {j}");
        }
        Ok(())
    }
    for r in 1..=6 {
        reflections::<Rational>(r)?;
        reflections::<GaussianRational>(r)?;
    }
    let hopf = classical_hopf_map();
    let sources: [(&str, SphereMap); 3] =
        [("identity S2", SphereMap::identity(2)), ("hopf", hopf), ("identity S4", SphereMap::identity(4))];
    for (name, f) in &sources {
        for k in 1..=f.target_dim() + 1 {
            let p = grassmannian_projector_map(f, k, f.target_dim() + 2).map_err(|e| e.to_string())?;
            let rep = verify_projector_map(&p);
            ensure!(rep.idempotent && rep.symmetric && rep.trace_ok, "{name}, k = {k}: {rep:?}");
        }
    }
    Ok(())
}

fn hodge_certificates() -> Outcome {
    for (dim, rotations) in [(4usize, 100usize), (8, 25)] {
        let ctx = HodgeContext::new(dim).map_err(|e| e.to_string())?;
        let split = sd_split::<Rational>(&ctx).map_err(|e| e.to_string())?;
        for v in rational_sphere_points(dim - 1, 100, 11) {
            let p = intertwiner_p(&ctx, &split, &v).map_err(|e| e.to_string())?;
            ensure!(is_isometry(&p), "dim {dim}: p(v) not an isometry");
        }
        let inputs = equivariance_inputs(&ctx, rotations, 5).map_err(|e| e.to_string())?;
        let reports: Vec<_> = std::thread::scope(|s| {
            let handles: Vec<_> =
                inputs.iter().map(|(r, v)| s.spawn(|| check_equivariance(&ctx, &split, r, v))).collect();
            handles.into_iter().map(|h| h.join().expect("trial thread")).collect()
        });
        for rep in reports {
            let rep = rep.map_err(|e| e.to_string())?;
            ensure!(rep.pass(), "dim {dim}: {rep:?}");
        }
    }
    ensure!(fiber_map_matches_hopf().map_err(|e| e.to_string())?, "fiber map differs from the Hopf expression");
    Ok(())
}

/// Oracle: multiplicity of `Λ^±` at weight `w` is `(dim V_w ± tr(⋆|V_w)/ε)/2`, from the orthogonal
/// weight basis `f_S` of wedges of `e_{2j-1} ∓ i e_{2j}`.
fn character_oracle(n: usize) -> (LaurentChar, LaurentChar) {
    let ctx = HodgeContext::new(2 * n).unwrap();
    let one = GaussianRational::one();
    let i = GaussianRational::i();
    let mut vecs = Vec::new();
    for j in 0..n {
        for (w, s) in [(1i64, -i.clone()), (-1, i.clone())] {
            let mut c = vec![GaussianRational::zero(); 2 * n];
            c[2 * j] = one.clone();
            c[2 * j + 1] = s;
            vecs.push((w, ctx.vector(&c).unwrap()));
        }
    }
    let mut stats: std::collections::BTreeMap<i64, (u64, GaussianRational)> = Default::default();
    for mask in 0u32..(1 << (2 * n)) {
        if mask.count_ones() as usize != n {
            continue;
        }
        let mut acc: ExtElement<GaussianRational> = ctx.blade(0);
        let mut weight = 0;
        for (b, (w, f)) in vecs.iter().enumerate() {
            if mask & (1 << b) != 0 {
                acc = ctx.wedge(&acc, f);
                weight += w;
            }
        }
        let diag = ctx.inner(&ctx.star(&acc), &acc).div_ref(&ctx.inner(&acc, &acc));
        let e = stats.entry(weight).or_insert((0, GaussianRational::zero()));
        e.0 += 1;
        e.1 += &diag;
    }
    let eps = if n.is_multiple_of(2) { one } else { i };
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for (w, (dim, tr)) in stats {
        let t = tr.div_ref(&eps);
        let t = rational_to_f64(&t.re()).round() as i64;
        plus.push((w, ((dim as i64 + t) / 2) as u64));
        minus.push((w, ((dim as i64 - t) / 2) as u64));
    }
    (LaurentChar::from_pairs(plus), LaurentChar::from_pairs(minus))
}

fn characters() -> Outcome {
    for n in 2..=6usize {
        let c = u1_char_exterior(n, n).map_err(|e| e.to_string())?;
        ensure!(c.multiplicity(n as i64) == 1, "n = {n}: weight {n} multiplicity {}", c.multiplicity(n as i64));
    }
    let (p, m) = sd_characters(2).map_err(|e| e.to_string())?;
    ensure!(p == LaurentChar::from_pairs([(2, 1), (0, 1), (-2, 1)]), "n = 2: Λ+ = {p:?}");
    ensure!(m == LaurentChar::from_pairs([(0, 3)]), "n = 2: Λ- = {m:?}");
    for n in 2..=4usize {
        let got = sd_characters(n).map_err(|e| e.to_string())?;
        ensure!(got == character_oracle(n), "n = {n}: disagrees with the weight-enumeration oracle");
        ensure!(got.0 != got.1, "n = {n}: characters coincide");
    }
    Ok(())
}

fn harmonics() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for trial in 0..200 {
        let nvars = rng.random_range(1..=8usize);
        let degree = rng.random_range(0..=6usize);
        let terms: Vec<(Vec<u16>, Rational)> = (0..rng.random_range(1..=6))
            .map(|_| {
                let mut e = vec![0u16; nvars];
                for _ in 0..degree {
                    e[rng.random_range(0..nvars)] += 1;
                }
                (e, rat(rng.random_range(-20..=20), rng.random_range(1..=6)))
            })
            .collect();
        let p = MultiPoly::from_terms(nvars, terms).map_err(|e| e.to_string())?;
        let dec = harmonic_decompose(&p).map_err(|e| e.to_string())?;
        ensure!(dec.reconstruct() == p, "trial {trial}: reconstruction");
        ensure!(dec.components.iter().all(|(_, h)| laplacian(h).is_zero()), "trial {trial}: non-harmonic piece");
    }
    let hopf = classical_hopf_map();
    let ctx = SphereContext::for_sphere(3);
    for (i, c) in hopf.coords().iter().enumerate() {
        let d = fourier_degree(c, &ctx).map_err(|e| e.to_string())?;
        ensure!(d == 2, "Hopf coordinate {i} has Fourier degree {d}");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let s3 = odd_sphere_fibration(1).map_err(|e| e.to_string())?;
    for trial in 0..100 {
        let rot = rotation_map(&rational_rotation(4, rng.random()).map_err(|e| e.to_string())?);
        let f = match trial % 4 {
            0 => compose(&rot, &SphereMap::constant(3, 2)),
            1 => compose(&rot, &s3),
            2 => compose(&rot, &SphereMap::identity(3)),
            _ => SphereMap::new(3, vec![MultiPoly::sum_of_squares(4).pow(rng.random_range(1..=3)), MultiPoly::zero(4)]),
        }
        .map_err(|e| e.to_string())?;
        let zero = map_fourier_degree(&f).map_err(|e| e.to_string())? == 0;
        ensure!(zero == is_constant(&f), "trial {trial}: degree zero = {zero}, is_constant = {}", is_constant(&f));
        let pts = rational_sphere_points(3, 5, rng.random());
        let first = f.eval(&pts[0]).map_err(|e| e.to_string())?;
        let sampled = pts.iter().all(|v| f.eval(v).unwrap() == first);
        ensure!(sampled == zero, "trial {trial}: sample evaluation disagrees");
    }
    Ok(())
}

fn rotation_map(r: &Matrix<Rational>) -> SphereMap {
    let n = r.rows();
    let coords = (0..n)
        .map(|i| (0..n).fold(MultiPoly::zero(n), |acc, j| &acc + &MultiPoly::var(n, j).scale(&r[(i, j)])))
        .collect();
    SphereMap::new(n - 1, coords).unwrap()
}

fn wilson_suite() -> Outcome {
    let g = perturbed_example();
    let classes = enumerate_classes(2, 8).map_err(|e| e.to_string())?;
    for r in 1..=3 {
        let w = wilson_vector(&FlatBundle::trivial(2, r), &classes).map_err(|e| e.to_string())?;
        ensure!(w.iter().all(|x| *x == GaussianRational::from_int(r as i64)), "(a) rank {r}");
    }
    let b = FlatBundle::random_unitary(2, 2, 1);
    let base = wilson_vector(&b, &classes).map_err(|e| e.to_string())?;
    for s in 0..20 {
        let gauged = b.gauge_conjugate(&rational_unitary(2, 100 + s)).map_err(|e| e.to_string())?;
        ensure!(wilson_vector(&gauged, &classes).map_err(|e| e.to_string())? == base, "(b) gauge {s}");
    }
    let one = GaussianRational::one();
    let chi1 = FlatBundle::character(&[one.clone(), one.clone()]).map_err(|e| e.to_string())?;
    let chi2 = FlatBundle::character(&[-one.clone(), one]).map_err(|e| e.to_string())?;
    ensure!(
        wilson_vector(&chi1, &classes).unwrap() != wilson_vector(&chi2, &classes).unwrap(),
        "(c) characters not distinguished"
    );
    let mut bundles = vec![chi1, chi2, FlatBundle::trivial(2, 2)];
    bundles.extend((0..10).map(|s| FlatBundle::random_unitary(2, 1 + (s % 3) as usize, 200 + s)));
    for bundle in &bundles {
        let r2 = int((bundle.rank() * bundle.rank()) as i64);
        let w = wilson_vector(bundle, &classes).map_err(|e| e.to_string())?;
        ensure!(w.iter().all(|x| x.norm_sqr() <= r2), "(d) |W| exceeds rank {}", bundle.rank());
    }
    let trivial = FlatBundle::trivial(2, 1);
    let entries = evaluate_classes(&g, &trivial, &classes).map_err(|e| e.to_string())?;
    let rep = check_simple_length_spectrum(&entries, 1e-9).map_err(|e| e.to_string())?;
    ensure!(rep.is_simple(), "(e) perturbed collisions: {:?}", rep.collisions.first());
    let sym = evaluate_classes(&symmetric_example(), &trivial, &classes).map_err(|e| e.to_string())?;
    let rep = check_simple_length_spectrum(&sym, 1e-9).map_err(|e| e.to_string())?;
    let planted = rep.collisions.iter().any(|c| {
        let pair = (c.first.as_slice(), c.second.as_slice());
        pair == ([1].as_slice(), [2].as_slice()) || pair == ([2].as_slice(), [1].as_slice())
    });
    ensure!(planted, "(e) planted collision (a, b) not reported");
    Ok(())
}

fn trace_formula() -> Outcome {
    let g: SchottkyGroup = perturbed_example();
    let classes = enumerate_classes(2, 8).map_err(|e| e.to_string())?;
    for bundle in [FlatBundle::trivial(2, 1), FlatBundle::trivial(2, 3), FlatBundle::random_unitary(2, 2, 3)] {
        for e in evaluate_classes(&g, &bundle, &classes).map_err(|e| e.to_string())? {
            let root_len = g.geodesic_length(&e.class.root).map_err(|e| e.to_string())?;
            ensure!(e.primitive_length == root_len, "{:?}: numerator length is not the primitive length", e.class.word);
            let l = e.length;
            let det = ((1.0 - l.exp()) * (1.0 - (-l).exp())).abs().sqrt();
            let (wr, wi) = e.wilson.to_f64_pair();
            let scale = root_len / (2.0 * std::f64::consts::PI * det);
            for (got, want) in [(e.dg_coeff.0, scale * wr), (e.dg_coeff.1, scale * wi)] {
                let err = (got - want).abs() / want.abs().max(f64::MIN_POSITIVE);
                ensure!(want == got || err <= 1e-10, "{:?}: relative error {err:e}", e.class.word);
            }
        }
    }
    Ok(())
}

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn main() {
    let criteria = [
        Criterion { id: 1, name: "q-table exactness", budget: Duration::from_secs(300), run: q_table },
        Criterion { id: 2, name: "witness certification", budget: Duration::from_secs(120), run: witnesses },
        Criterion { id: 3, name: "Clifford suite", budget: Duration::from_secs(120), run: clifford_suite },
        Criterion {
            id: 4,
            name: "reflection, column and projector maps",
            budget: Duration::from_secs(60),
            run: standard_constructions,
        },
        Criterion { id: 5, name: "Hodge certificates", budget: Duration::from_secs(180), run: hodge_certificates },
        Criterion { id: 6, name: "character computations", budget: Duration::from_secs(60), run: characters },
        Criterion { id: 7, name: "harmonics", budget: Duration::from_secs(120), run: harmonics },
        Criterion { id: 8, name: "Wilson suite", budget: Duration::from_secs(120), run: wilson_suite },
        Criterion { id: 9, name: "trace-formula coefficient", budget: Duration::from_secs(60), run: trace_formula },
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let selected: Vec<&Criterion> = criteria
        .iter()
        .filter(|c| filter.is_empty() || filter.iter().any(|f| c.name.contains(f.as_str()) || c.id.to_string() == *f))
        .collect();
    let results: Vec<(Outcome, Duration)> = selected
        .iter()
        .map(|c| {
            let start = Instant::now();
            let outcome = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|p| {
                Err(p
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_else(|| "panic".into()))
            });
            (outcome, start.elapsed())
        })
        .collect();
    let mut failed = 0;
    for (c, (outcome, elapsed)) in selected.iter().zip(results) {
        let over = elapsed > c.budget;
        let verdict = match (&outcome, over) {
            (Ok(()), false) => "PASS".to_string(),
            (Ok(()), true) => format!("FAIL: over budget of {} s", c.budget.as_secs()),
            (Err(e), _) => format!("FAIL: {e}"),
        };
        if !verdict.starts_with("PASS") {
            failed += 1;
        }
        println!("criterion {} {:<40} {:>8.2} s  {}", c.id, c.name, elapsed.as_secs_f64(), verdict);
    }
    println!("acceptance: {} passed, {} failed", selected.len() - failed, failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
