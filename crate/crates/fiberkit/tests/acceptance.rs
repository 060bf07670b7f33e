//! Acceptance gate: one test per release criterion, each printing a single
//! pass/fail line. Run with `cargo test --test acceptance -- --nocapture`
//! to see every line.

use fiberkit::diffeo::{RigidDiffeo, RigidTriple};
use fiberkit::fibering::{
    differing_fiber_point, fibering_distance, is_fiber_preserving, trivialize, untrivialize,
    Fibering,
};
use fiberkit::james::{h_map, james_concat, GeneratorFamily, JamesWord, SphereGrid};
use fiberkit::loops::{
    sup_distance, transport, transport_inverse, ComponentClass, LoopSO3, RotationPath,
};
use fiberkit::nullhomotopy::{LiftedMap, SphereToCircleMap};
use fiberkit::rotation::{CircleMap, Rotation, S2Point, Sign};
use fiberkit::verify::{
    crossing_parity_class, random_circle_map, random_diffeo, random_loop, random_nonconstant_loop,
    random_orthogonal, random_point, random_triple, rng_from_seed,
};
use rand::Rng;

const N: usize = 128;

fn report(number: usize, pass: bool, detail: &str) {
    println!(
        "criterion {number}: {} ({detail})",
        if pass { "pass" } else { "FAIL" }
    );
    assert!(pass, "criterion {number} failed: {detail}");
}

#[test]
fn criterion_01_group_axioms() {
    let mut rng = rng_from_seed(101);
    let mut worst = 0.0f64;
    let id = RigidDiffeo::identity(N);
    for _ in 0..1000 {
        let f = random_diffeo(&mut rng, N);
        let g = random_diffeo(&mut rng, N);
        let h = random_diffeo(&mut rng, N);
        let cases = [
            (f.compose(&g).compose(&h), f.compose(&g.compose(&h))),
            (f.compose(&id), f.clone()),
            (f.compose(&f.inverse()), id.clone()),
            (f.inverse().compose(&f), id.clone()),
        ];
        for _ in 0..200 {
            let x: f64 = rng.gen();
            let y = random_point(&mut rng);
            for (lhs, rhs) in &cases {
                let (xa, ya) = lhs.apply(x, y);
                let (xb, yb) = rhs.apply(x, y);
                worst = worst
                    .max(CircleMap::circle_distance(xa, xb))
                    .max(ya.angle_to(yb));
            }
        }
    }
    report(
        1,
        worst < 1e-9,
        &format!("associativity, identity, inverses: sup error {worst:.3e} over 1000 triples x 200 points"),
    );
}

#[test]
fn criterion_02_fiber_preserver_characterization() {
    let mut rng = rng_from_seed(102);
    let ft = Fibering::trivial(N);
    let mut worst_fix = 0.0f64;
    let mut constants_ok = true;
    for _ in 0..100 {
        let triple = RigidTriple::new(
            random_circle_map(&mut rng, N),
            random_orthogonal(&mut rng),
            LoopSO3::constant_identity(N),
        );
        constants_ok &= is_fiber_preserving(&triple.unfactorize());
        worst_fix = worst_fix.max(fibering_distance(&ft.pushforward(&triple), &ft));
    }
    let mut movers_ok = true;
    for _ in 0..100 {
        let triple = RigidTriple::new(
            random_circle_map(&mut rng, N),
            random_orthogonal(&mut rng),
            random_nonconstant_loop(&mut rng, N, 1e-2),
        );
        movers_ok &= !is_fiber_preserving(&triple.unfactorize());
    }
    report(
        2,
        constants_ok && worst_fix < 1e-9 && movers_ok,
        &format!(
            "100 constant-loop elements preserve fibers (sup {worst_fix:.3e}), 100 nonconstant ones do not"
        ),
    );
}

#[test]
fn criterion_03_phi_bijection() {
    let mut rng = rng_from_seed(103);
    let mut worst_rt = 0.0f64;
    for _ in 0..100 {
        let l = random_loop(&mut rng, N, None);
        worst_rt = worst_rt.max(sup_distance(&l, Fibering::phi(l.clone()).loop_so3()));
    }
    let mut loops: Vec<LoopSO3> = Vec::new();
    while loops.len() < 100 {
        let l = random_loop(&mut rng, N, None);
        if loops.iter().all(|m| sup_distance(&l, m) > 1e-3) {
            loops.push(l);
        }
    }
    let fiberings: Vec<Fibering> = loops.iter().map(|l| Fibering::phi(l.clone())).collect();
    let mut all_witnessed = true;
    let mut min_sep = f64::INFINITY;
    for i in 0..fiberings.len() {
        for j in i + 1..fiberings.len() {
            match differing_fiber_point(&fiberings[i], &fiberings[j]) {
                Some((_, _, sep)) => min_sep = min_sep.min(sep),
                None => all_witnessed = false,
            }
        }
    }
    report(
        3,
        worst_rt < 1e-12 && all_witnessed && min_sep > 0.0,
        &format!(
            "round trip exact ({worst_rt:.3e}); witnesses for all 4950 pairs, min separation {min_sep:.3e}"
        ),
    );
}

#[test]
fn criterion_04_trivialization_round_trips() {
    let mut rng = rng_from_seed(104);
    let mut worst = 0.0f64;
    let mut saw_reflection = false;
    let mut saw_reversal = false;
    for k in 0..100 {
        let mut triple = random_triple(&mut rng, N);
        if k % 4 == 0 {
            triple.beta.parity = Sign::Minus;
        }
        if k % 4 == 1 {
            triple.alpha = CircleMap::new(triple.alpha.offset, Sign::Minus);
        }
        saw_reflection |= triple.beta.determinant() < 0.0;
        saw_reversal |= triple.alpha.orientation == Sign::Minus;
        let (fib, a, b) = trivialize(&triple);
        let back = untrivialize(&fib, a, b);
        worst = worst.max(sup_distance(&back.gamma, &triple.gamma));
        let (fib2, _, _) = trivialize(&back);
        worst = worst.max(fibering_distance(&fib2, &fib));
    }
    report(
        4,
        worst < 1e-6 && saw_reflection && saw_reversal,
        &format!("both compositions identities, sup error {worst:.3e}, incl. det -1 and reversed circle maps"),
    );
}

#[test]
fn criterion_05_transport_relation() {
    let mut rng = rng_from_seed(105);
    let mut worst_rel = 0.0f64;
    let mut worst_rebase = 0.0f64;
    for _ in 0..100 {
        let alpha = random_circle_map(&mut rng, N);
        let beta = random_orthogonal(&mut rng);
        let gamma = random_loop(&mut rng, N, None);
        let transported = transport(alpha, beta, &gamma);
        let round = transport_inverse(alpha, beta, &transported);
        let shift = gamma.evaluate(alpha.apply(0.0)).inverse();
        let expected = RotationPath::new(
            (0..=N)
                .map(|i| gamma.evaluate(i as f64 / N as f64).compose(shift))
                .collect(),
        );
        for i in 0..=N {
            let t = i as f64 / N as f64;
            worst_rel = worst_rel.max(round.evaluate(t).angle_to(expected.evaluate(t)));
        }
        let rebased = round.rebase().expect("transported path rebases");
        worst_rebase = worst_rebase.max(sup_distance(&rebased, &gamma));
    }
    report(
        5,
        worst_rel < 1e-6 && worst_rebase < 1e-6,
        &format!(
            "inverse of transport is right-translation (sup {worst_rel:.3e}); rebase recovers the loop (sup {worst_rebase:.3e})"
        ),
    );
}

#[test]
fn criterion_06_classifier_against_oracle() {
    let mut rng = rng_from_seed(106);
    let mut agree = true;
    for _ in 0..200 {
        let l = random_loop(&mut rng, 256, None);
        agree &= l.classify().unwrap() == crossing_parity_class(&l);
    }
    let grid = SphereGrid::lat_lon(32, 64).unwrap();
    let gs = LoopSO3::gluck(S2Point::south(), 64).unwrap();
    let mut grid_ok = true;
    for &p in grid.points() {
        let gp = LoopSO3::gluck(p, 64).unwrap();
        grid_ok &= gp.classify().unwrap() == ComponentClass::Nontrivial;
        grid_ok &= gp.concatenate(&gs).classify().unwrap() == ComponentClass::Trivial;
    }
    report(
        6,
        agree && grid_ok,
        &format!(
            "oracle agreement on 200 loops; full twists nontrivial and twist pairs trivial at {} grid points",
            grid.len()
        ),
    );
}

#[test]
fn criterion_07_h_map_swaps_components() {
    let mut rng = rng_from_seed(107);
    let mut ok = true;
    for _ in 0..100 {
        let g = random_loop(&mut rng, 64, None);
        let c = g.classify().unwrap();
        let h = h_map(&g);
        ok &= h.classify().unwrap() != c;
        ok &= h_map(&h).classify().unwrap() == c;
    }
    report(7, ok, "h flips the class and h.h restores it on 100 loops");
}

#[test]
fn criterion_08_james_model() {
    let mut rng = rng_from_seed(108);
    let mut norm_ok = true;
    for _ in 0..50 {
        let k = rng.gen_range(1..=4);
        let mut letters: Vec<S2Point> = (0..k).map(|_| random_point(&mut rng)).collect();
        let clean = JamesWord::normalize(&letters);
        for _ in 0..rng.gen_range(1..=3) {
            let at = rng.gen_range(0..=letters.len());
            letters.insert(at, S2Point::north());
        }
        let w = JamesWord::normalize(&letters);
        norm_ok &= w.len() == clean.len()
            && w
                .letters()
                .iter()
                .zip(clean.letters())
                .all(|(a, b)| a.angle_to(*b) < 1e-12);
    }
    let mut worst_piecewise = 0.0f64;
    for _ in 0..100 {
        let k = rng.gen_range(1..=5);
        let letters: Vec<S2Point> = (0..k).map(|_| random_point(&mut rng)).collect();
        let word = JamesWord::normalize(&letters);
        let l = james_concat(&word, 32 * k);
        let t: f64 = rng.gen();
        let j = ((t * k as f64).floor() as usize).min(k - 1);
        let local = t * k as f64 - j as f64;
        let expected = Rotation(Rotation::axis_angle_lift(word.letters()[j], local));
        worst_piecewise = worst_piecewise.max(l.evaluate(t).angle_to(expected));
    }
    let mut parity_ok = true;
    for k in 1..=5 {
        let letters: Vec<S2Point> = (0..k).map(|_| random_point(&mut rng)).collect();
        let l = james_concat(&JamesWord::normalize(&letters), 32 * k);
        let expected = if k % 2 == 1 {
            ComponentClass::Nontrivial
        } else {
            ComponentClass::Trivial
        };
        parity_ok &= l.classify().unwrap() == expected;
    }
    report(
        8,
        norm_ok && worst_piecewise < 1e-6 && parity_ok,
        &format!(
            "normalization on 50 words; piecewise formula sup {worst_piecewise:.3e} over 100 samples; parity for lengths 1-5"
        ),
    );
}

#[test]
fn criterion_09_nullhomotopy() {
    let constant = SphereToCircleMap::from_fn(16, 32, |_| 0.37).unwrap();
    let fixed = constant
        .sup_distance(&constant.homotopy_to_constant(0.5).unwrap());
    let avg = LiftedMap::from_fn(64, 128, |p| p.0[2]).average().abs();
    let f = SphereToCircleMap::from_fn(32, 64, |p| 0.3 * p.0[2] + 0.2 * p.0[0] + 0.1 * p.0[1])
        .unwrap();
    let mut seed_dep = 0.0f64;
    for &t in &[0.0, 0.25, 0.5, 0.75, 1.0] {
        let a = f.homotopy_to_constant_from(t, (0, 0)).unwrap();
        let b = f.homotopy_to_constant_from(t, (17, 40)).unwrap();
        seed_dep = seed_dep.max(a.sup_distance(&b));
    }
    let end = f.homotopy_to_constant(1.0).unwrap();
    let c0 = end.values()[0];
    let spread = end
        .values()
        .iter()
        .map(|&v| CircleMap::circle_distance(v, c0))
        .fold(0.0, f64::max);
    report(
        9,
        fixed < 1e-12 && avg < 1e-3 && seed_dep < 1e-9 && spread < 1e-9,
        &format!(
            "constant fixed ({fixed:.3e}); height average {avg:.3e}; lift dependence {seed_dep:.3e}; endpoint spread {spread:.3e}"
        ),
    );
}

#[test]
fn criterion_10_family_continuity_under_refinement() {
    let mut ratios = Vec::new();
    for target in [ComponentClass::Nontrivial, ComponentClass::Trivial] {
        let coarse =
            GeneratorFamily::for_component(SphereGrid::lat_lon(16, 32).unwrap(), 64, target)
                .unwrap();
        let fine =
            GeneratorFamily::for_component(SphereGrid::lat_lon(32, 64).unwrap(), 64, target)
                .unwrap();
        ratios.push(fine.max_adjacent_distance() / coarse.max_adjacent_distance());
    }
    let ok = ratios.iter().all(|r| (0.3..=0.7).contains(r));
    report(
        10,
        ok,
        &format!(
            "refinement 16x32 -> 32x64 shrinks adjacent distance by {:.3} (N) and {:.3} (T)",
            ratios[0], ratios[1]
        ),
    );
}

#[test]
fn criterion_11_pushforward_action_coherence() {
    let mut rng = rng_from_seed(111);
    let mut worst = 0.0f64;
    let mut classes_ok = true;
    for _ in 0..100 {
        let f = random_diffeo(&mut rng, N);
        let fp = random_diffeo(&mut rng, N);
        let base = Fibering::phi(random_loop(&mut rng, N, None));
        let composed = base.pushforward_diffeo(&fp.compose(&f));
        let sequential = base.pushforward_diffeo(&f).pushforward_diffeo(&fp);
        worst = worst.max(fibering_distance(&composed, &sequential));
        classes_ok &= composed.loop_so3().classify().unwrap()
            == sequential.loop_so3().classify().unwrap();
    }
    report(
        11,
        worst < 1e-6 && classes_ok,
        &format!("both routes agree (sup {worst:.3e}) with matching component classes, 100 instances"),
    );
}
