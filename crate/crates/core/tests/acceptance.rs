//! Acceptance suite: one pass/fail line per criterion.
//!
//! All comparisons are exact (integer or canonical-string equality). The only
//! other pinned quantity is the time budget per criterion.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use odometer_homology::abelian::{smith_normal_form, FgAbelianGroup, IntMatrix};
use odometer_homology::cli::{execute, parse_spec, Command, ReportOptions};
use odometer_homology::colimit::Multiplicity;
use odometer_homology::fullgroup::{ah_certificate, AhLevel};
use odometer_homology::homology::{
    groupoid_chain_homology, odometer_homology, transfer_between, transfer_map_with, z2_homology, FiniteGroupoid,
    InvolutionModule,
};
use odometer_homology::ktheory::k_theory_dihedral;
use odometer_homology::odometer::{
    cocycle, fixed_points_extendable, fixed_points_limit, is_topologically_free, Chain, FixedCount, FreenessVerdict,
    GroupElement, GroupKind, Horizon, OdometerSpec, Tail, Transversal,
};

/// Wall-clock budget for each criterion.
const TIME_BUDGET: Duration = Duration::from_secs(60);
const SEED: u64 = 20_240_601;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn eq<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Result<(), String> {
    check(got == want, || format!("{}: got {:?}, want {:?}", what, got, want))
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn dihedral(start: u64, ratio: u64, depth: usize) -> OdometerSpec {
    OdometerSpec::geometric(GroupKind::Dihedral, start, ratio, depth).unwrap()
}

/// Dihedral chains for the fixed-point and homology checks; every chain reaches
/// level 6 with `n_6 <= 10^4`, and the 2-adic valuation of `n_i` is constant
/// from level 3 on or grows at every level.
fn dihedral_matrix() -> Vec<OdometerSpec> {
    let mut out = Vec::new();
    for (start, ratio) in [(2, 2), (4, 2), (3, 2), (5, 2), (3, 3), (6, 3), (2, 3), (1, 5), (2, 5), (3, 5)] {
        out.push(dihedral(start, ratio, 6));
    }
    let mixed: [(&[i64], u64); 6] = [
        (&[2, 6, 30], 3),
        (&[3, 6, 12], 2),
        (&[3, 15, 45], 5),
        (&[2, 4, 12], 3),
        (&[5, 10, 30], 2),
        (&[3, 6, 30, 60], 2),
    ];
    for (chain, ratio) in mixed {
        out.push(
            OdometerSpec::explicit(
                GroupKind::Dihedral,
                chain.iter().map(|&n| BigInt::from(n)),
                6,
                Some(Tail::Geometric { ratio }),
            )
            .unwrap(),
        );
    }
    for s in &out {
        assert!(s.modulus(6).unwrap() <= BigInt::from(10_000), "n_6 of {:?} exceeds 10^4", s.chain());
    }
    out
}

fn describe(spec: &OdometerSpec) -> String {
    match spec.chain() {
        Chain::Geometric { start, ratio } => format!("{}*{}^i", start, ratio),
        Chain::Explicit(ns) => format!("{:?}+", ns.iter().map(|n| n.to_string()).collect::<Vec<_>>()),
    }
}

fn hk_document(start: u64, ratio: u64) -> Result<serde_json::Value, String> {
    let text = format!(
        r#"{{"group":"dihedral","chain":{{"geometric":{{"start":{},"ratio":{}}}}},"depth":6}}"#,
        start, ratio
    );
    let spec = ok(parse_spec(&text))?;
    Ok(ok(execute(&Command::HkCheck, &spec, &ReportOptions::default()))?.document)
}

fn criterion_1() -> Outcome {
    let doc = hk_document(2, 2)?;
    eq("K0", doc["ktheory"]["K0"].as_str(), Some("Z[1/2] (+) Z^1"))?;
    eq("K1", doc["ktheory"]["K1"].as_str(), Some("0"))?;
    for (degree, want) in [("0", "Z[1/2]"), ("1", "Z_2"), ("2", "0"), ("3", "Z_2")] {
        eq(&format!("H{}", degree), doc["homology"][degree].as_str(), Some(want))?;
    }
    eq("even parity", doc["k0_vs_even"]["verdict"].as_str(), Some("mismatch"))?;
    eq("odd parity", doc["k1_vs_odd"]["verdict"].as_str(), Some("mismatch"))?;
    Ok("2^i: K0 = Z[1/2] (+) Z, K1 = 0, H = Z[1/2], Z_2, 0, Z_2; mismatch in both parities".into())
}

fn criterion_2() -> Outcome {
    let odd = hk_document(3, 3)?;
    eq("K0 (3^i)", odd["ktheory"]["K0"].as_str(), Some("Z[1/3] (+) Z^2"))?;
    eq("H1 (3^i)", odd["homology"]["1"].as_str(), Some("Z_2^2"))?;
    eq("odd parity (3^i)", odd["k1_vs_odd"]["verdict"].as_str(), Some("mismatch"))?;

    let mixed_spec = dihedral(6, 3, 6);
    let k = ok(k_theory_dihedral(&mixed_spec))?;
    eq("multiplicity of 2", k.k0_rank1.multiplicity(2), Multiplicity::Finite(1))?;
    eq("multiplicity of 3", k.k0_rank1.multiplicity(3), Multiplicity::Infinite)?;
    eq("infinite primes", k.k0_rank1.infinite_primes(), vec![3])?;
    eq("free summands", k.k0_free, 2)?;
    let mixed = hk_document(6, 3)?;
    eq("K0 (6*3^i)", mixed["ktheory"]["K0"].as_str(), Some("{m/n_i} over 2 * 3^inf (+) Z^2"))?;
    eq("H1 (6*3^i)", mixed["homology"]["1"].as_str(), Some("Z_2^2"))?;
    eq("fixed counts", mixed["ktheory"]["fixed_points"].clone(), serde_json::json!([2, 0]))?;
    Ok("3^i: K0 = Z[1/3] (+) Z^2, H1 = Z_2^2; 6*3^i: K0 = {m/n_i} (+) Z^2, H1 = Z_2^2, fixed (2, 0)".into())
}

/// Projections to `Z_{n_3}` of reflections' fixed points in `Z_{n_6}`, counted directly.
fn reflection_fixed_direct(spec: &OdometerSpec, t: u64) -> u64 {
    let n6 = spec.modulus_usize(6).unwrap() as u64;
    let n3 = spec.modulus_usize(3).unwrap() as u64;
    let mut seen: Vec<u64> = (0..n6).filter(|x| (2 * x) % n6 == t % n6).map(|x| x % n3).collect();
    seen.sort();
    seen.dedup();
    seen.len() as u64
}

fn criterion_3() -> Outcome {
    let matrix = dihedral_matrix();
    let mut compared = 0;
    for spec in &matrix {
        for t in [0u64, 1] {
            let g = GroupElement::from_ints(GroupKind::Dihedral, t as i64, true);
            let closed = ok(fixed_points_limit(spec, &g))?;
            let brute = ok(fixed_points_extendable(spec, &g, 3, Horizon::Level(6)))?;
            let direct = FixedCount::Finite(BigInt::from(reflection_fixed_direct(spec, t)));
            eq(&format!("{} (t = {}) enumeration vs direct", describe(spec), t), &brute, &direct)?;
            eq(&format!("{} (t = {}) closed form vs enumeration", describe(spec), t), &closed, &brute)?;
            compared += 1;
        }
    }
    Ok(format!("{} chains, {} reflection counts at d = 3, D = 6 equal the closed form", matrix.len(), compared))
}

fn criterion_4() -> Outcome {
    for n in 1..=50usize {
        let fixed = (0..n).filter(|x| (2 * x) % n == 0).count();
        check(fixed == 1 || fixed == 2, || format!("negation mod {} fixes {}", n, fixed))?;
        let h1 = z2_homology(&InvolutionModule::negation(n), 1);
        eq(&format!("H1 of negation on Z^{}", n), h1, FgAbelianGroup::new(0, vec![2u64; fixed]))?;
    }
    let mut free = 0;
    for n in (2..=50usize).step_by(2) {
        let half_turn = InvolutionModule::new((0..n).map(|x| (x + n / 2) % n).collect()).map_err(|e| e.to_string())?;
        for module in [InvolutionModule::reflection(n, 1), half_turn] {
            check(module.fixed_points() == 0, || format!("involution on Z^{} has fixed points", n))?;
            check(z2_homology(&module, 2).is_trivial(), || format!("H2 nonzero for a free involution on Z^{}", n))?;
            free += 1;
        }
    }
    Ok(format!("n <= 50: H1 = Z_2^(1 or 2) matching negation's fixed points; H2 = 0 on {} free involutions", free))
}

fn criterion_5() -> Outcome {
    for n in 1..=12usize {
        let g = FiniteGroupoid::negation(n);
        let fixed = (0..n).filter(|x| (2 * x) % n == 0).count();
        let orbits = (n + fixed) / 2;
        for degree in 0..=3usize {
            let want = match degree {
                0 => FgAbelianGroup::free(orbits),
                d if d % 2 == 1 => FgAbelianGroup::new(0, vec![2u64; fixed]),
                _ => FgAbelianGroup::trivial(),
            };
            let got = ok(groupoid_chain_homology(&g, degree))?;
            eq(&format!("H{} of Z_2 x| Z_{}", degree, n), got, want)?;
        }
    }
    Ok("n <= 12, degrees 0..3: chain complex equals the orbit-stabilizer formula".into())
}

fn criterion_6() -> Outcome {
    let mut certified = Vec::new();
    for kind in [GroupKind::Dihedral, GroupKind::Integers] {
        let chains: [(u64, u64, usize); 4] = [(3, 3, 2), (2, 2, 3), (6, 2, 2), (3, 2, 3)];
        let mut seen = Vec::new();
        for (start, ratio, depth) in chains {
            let spec = OdometerSpec::geometric(kind, start, ratio, depth).unwrap();
            for level in 1..=depth {
                let n = spec.modulus_usize(level).unwrap();
                if ![3, 4, 6, 8, 9].contains(&n) || seen.contains(&n) {
                    continue;
                }
                seen.push(n);
                let c = ok(ah_certificate(&spec, AhLevel::Level(level)))?;
                check(c.exact, || format!("{} n = {}: not exact", kind.name(), n))?;
                eq(&format!("{} n = {} split", kind.name(), n), c.split, Some(true))?;
            }
        }
        seen.sort();
        eq(&format!("{} levels covered", kind.name()), &seen, &vec![3, 4, 6, 8, 9])?;
        certified.push(format!("{} {:?}", kind.name(), seen));
    }
    for (ratio, h0) in [(2, "0"), (3, "Z_2")] {
        let c = ok(ah_certificate(&dihedral(ratio, ratio, 4), AhLevel::Colimit))?;
        check(c.exact, || format!("colimit for ratio {} not exact", ratio))?;
        eq(&format!("H0 (x) Z_2 for ratio {}", ratio), c.groups[0].as_str(), h0)?;
    }
    Ok(format!("levels exact and split ({}); colimits 2^i, 3^i exact with H0 (x) Z_2 = 0, Z_2", certified.join(", ")))
}

fn criterion_7() -> Outcome {
    let mut witnesses = 0;
    for (start, ratio) in [(2, 2), (3, 3), (6, 3), (5, 2)] {
        let spec = dihedral(start, ratio, 4);
        match ok(is_topologically_free(&spec, 4))? {
            FreenessVerdict::Free { witnesses: ws } => {
                check(!ws.is_empty(), || "no witnesses".into())?;
                for w in &ws {
                    let n = spec.modulus(w.level).unwrap();
                    eq("gamma", w.gamma.as_str(), "(0,1)")?;
                    eq("b", w.b.clone(), format!("({},0)", n))?;
                    eq("conjugate", w.conjugate.clone(), format!("({},1)", BigInt::from(2) * &n))?;
                    // the identity itself, recomputed in the group
                    let b = GroupElement::translation(GroupKind::Dihedral, n.clone());
                    let flip = GroupElement::from_ints(GroupKind::Dihedral, 0, true);
                    let prod = &(&b * &flip) * &b.inverse();
                    eq("(n_j,0)(0,1)(-n_j,0)", prod, GroupElement::new(GroupKind::Dihedral, BigInt::from(2) * &n, true))?;
                    witnesses += 1;
                }
            }
            other => return Err(format!("dihedral {}*{}^i: {:?}", start, ratio, other)),
        }
        let dp = OdometerSpec::geometric(GroupKind::DirectProduct, start, ratio, 4).unwrap();
        let v = ok(is_topologically_free(&dp, 4))?;
        check(v.is_not_free(), || format!("direct product {}*{}^i: {:?}", start, ratio, v))?;
        let z = OdometerSpec::geometric(GroupKind::Integers, start, ratio, 4).unwrap();
        let v = ok(is_topologically_free(&z, 4))?;
        check(v.is_free(), || format!("Z {}*{}^i: {:?}", start, ratio, v))?;
    }
    Ok(format!("dihedral Free ({} witnesses (n_j,0) -> (2n_j,1)), Z x Z_2 NotFree, Z Free", witnesses))
}

/// Fraction-free (Bareiss) determinant, independent of the library's.
fn bareiss(m: &IntMatrix) -> BigInt {
    let n = m.rows();
    let mut a: Vec<Vec<BigInt>> = m.to_nested();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

fn snf_suite(rng: &mut StdRng) -> Result<(), String> {
    for case in 0..500 {
        let rows = rng.gen_range(1..=12);
        let cols = rng.gen_range(1..=12);
        let a = IntMatrix::from_fn(rows, cols, |_, _| BigInt::from(rng.gen_range(-50i64..=50)));
        let d = smith_normal_form(&a);
        eq(&format!("case {}: U A V", case), d.u.mul(&a).mul(&d.v), d.s.clone())?;
        for (name, m) in [("U", &d.u), ("V", &d.v)] {
            check(bareiss(m).abs().is_one(), || format!("case {}: {} not unimodular", case, name))?;
        }
        let diag = d.nonzero_diagonal();
        for i in 0..rows {
            for j in 0..cols {
                let on_diag = i == j && i < diag.len();
                check(on_diag || d.s[(i, j)].is_zero(), || format!("case {}: S not diagonal", case))?;
            }
        }
        check(diag.iter().all(|x| x.is_positive()), || format!("case {}: negative factor", case))?;
        check(diag.windows(2).all(|w| w[1].is_multiple_of(&w[0])), || format!("case {}: divisibility", case))?;
        if rows == cols {
            let det = bareiss(&a).abs();
            let prod: BigInt = if diag.len() == rows { diag.iter().product() } else { BigInt::zero() };
            eq(&format!("case {}: |det A|", case), prod, det)?;
        }
    }
    Ok(())
}

fn random_element(rng: &mut StdRng, kind: GroupKind) -> GroupElement {
    GroupElement::from_ints(kind, rng.gen_range(-40..=40), kind.has_flip() && rng.gen_bool(0.5))
}

fn cocycle_suite(rng: &mut StdRng) -> Result<(), String> {
    let specs = [dihedral(2, 2, 4), dihedral(3, 3, 3), dihedral(6, 5, 2)];
    for case in 0..100 {
        let kind = [GroupKind::Dihedral, GroupKind::Integers, GroupKind::DirectProduct][case % 3];
        let base = &specs[case % specs.len()];
        let spec = OdometerSpec::new(kind, base.chain().clone(), base.depth(), base.declared_tail()).unwrap();
        let level = rng.gen_range(1..=spec.depth());
        let (g, h) = (random_element(rng, kind), random_element(rng, kind));
        let cg = ok(cocycle(&spec, level, &g))?;
        let ch = ok(cocycle(&spec, level, &h))?;
        let cgh = ok(cocycle(&spec, level, &(&g * &h)))?;
        check(cg.verify() && ch.verify() && cgh.verify(), || format!("case {}: defining identity", case))?;
        for k in 0..cg.reps.len() {
            eq(&format!("case {}: sigma", case), cgh.sigma[k], cg.sigma[ch.sigma[k]])?;
            eq(&format!("case {}: h", case), cgh.h[k].clone(), &cg.h[ch.sigma[k]] * &ch.h[k])?;
        }
    }
    Ok(())
}

fn transversal_suite(rng: &mut StdRng) -> Result<(), String> {
    let specs = [dihedral(2, 2, 4), dihedral(3, 3, 4), dihedral(6, 5, 3)];
    for case in 0..50 {
        let kind = [GroupKind::Dihedral, GroupKind::Integers, GroupKind::DirectProduct][case % 3];
        let base = &specs[(case / 3) % specs.len()];
        let spec = OdometerSpec::new(kind, base.chain().clone(), base.depth(), base.declared_tail()).unwrap();
        let level = rng.gen_range(1..spec.depth());
        let r = spec.ratio(level).unwrap() as usize;
        let t = Transversal::randomized(kind, r, rng);
        let got = ok(transfer_map_with(&spec, level, &t))?;
        let want = ok(transfer_between(&spec, level, level + 1, 1))?;
        check(got.agrees_with(&want), || format!("case {}: transfer depends on the transversal", case))?;
    }
    Ok(())
}

fn transitivity_suite() -> Result<(), String> {
    for ratio in [2, 3] {
        for kind in GroupKind::ALL {
            let spec = OdometerSpec::geometric(kind, ratio, ratio, 5).unwrap();
            for level in 1..=3 {
                let a = ok(transfer_between(&spec, level, level + 1, 1))?;
                let b = ok(transfer_between(&spec, level + 1, level + 2, 1))?;
                let direct = ok(transfer_between(&spec, level, level + 2, 1))?;
                let composed = ok(b.compose(&a))?;
                check(composed.agrees_with(&direct), || format!("{} ratio {} level {}", kind.name(), ratio, level))?;
            }
        }
    }
    Ok(())
}

fn criterion_8() -> Outcome {
    let mut rng = StdRng::seed_from_u64(SEED);
    snf_suite(&mut rng)?;
    cocycle_suite(&mut rng)?;
    transversal_suite(&mut rng)?;
    transitivity_suite()?;
    let matrix = dihedral_matrix();
    for spec in &matrix {
        let h = ok(odometer_homology(spec, 3))?;
        eq(&format!("H1 vs H3 for {}", describe(spec)), h.degree(1), h.degree(3))?;
    }
    Ok(format!(
        "SNF 500/500, cocycle 100/100, transversals 50/50, transitivity ratios 2 and 3, H1 = H3 on {} chains",
        matrix.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("HK counterexample, even ratio", criterion_1),
        ("HK counterexample, odd and mixed", criterion_2),
        ("fixed-point oracle", criterion_3),
        ("involution homology", criterion_4),
        ("groupoid chain complex", criterion_5),
        ("AH exactness", criterion_6),
        ("topological freeness", criterion_7),
        ("property suites", criterion_8),
    ];
    // failures are reported on the criterion line
    std::panic::set_hook(Box::new(|_| {}));
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {}", msg))
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > TIME_BUDGET => Err(format!("exceeded {:?}", TIME_BUDGET)),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("criterion {} [{}]: PASS ({:.2?}) {}", i + 1, name, elapsed, detail),
            Err(detail) => {
                failures += 1;
                println!("criterion {} [{}]: FAIL ({:.2?}) {}", i + 1, name, elapsed, detail);
            }
        }
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
