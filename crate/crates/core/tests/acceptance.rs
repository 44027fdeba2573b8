//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use groupdet::parity::FailureKind;
use groupdet::{
    check_even_divisibility, check_membership, circulant_det, dedekind_product,
    enumerate_characters, find_witness, group_determinant, laquer_split, laquer_vs_theorem1,
    search_values, theorem1_factors, verify_theorem2, AbelianGroup, Assignment, CyclotomicInt,
    MembershipSpec, RunOptions, SearchOptions, SearchReport,
};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn grp(orders: &[usize]) -> AbelianGroup {
    AbelianGroup::new(orders).unwrap()
}

fn random_values(rng: &mut ChaCha8Rng, n: usize, b: i64) -> Vec<i64> {
    (0..n).map(|_| rng.gen_range(-b..=b)).collect()
}

fn det(g: &AbelianGroup, xs: &[i64]) -> BigInt {
    group_determinant(g, &Assignment::from_i64(g, xs).unwrap()).unwrap()
}

fn search(orders: &[usize], b: i64) -> SearchReport {
    search_values(&grp(orders), b, &SearchOptions::default()).unwrap()
}

fn dual_path_exactness() -> Outcome {
    let groups: &[&[usize]] = &[
        &[1],
        &[2],
        &[3],
        &[4],
        &[5],
        &[6],
        &[7],
        &[8],
        &[9],
        &[10],
        &[11],
        &[12],
        &[2, 2],
        &[2, 3],
        &[2, 4],
        &[2, 5],
        &[2, 6],
        &[3, 3],
        &[3, 4],
        &[4, 3],
        &[6, 2],
        &[2, 2, 2],
        &[2, 2, 3],
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let trials = 240;
    for _ in 0..trials {
        let g = grp(groups[rng.gen_range(0..groups.len())]);
        let xs = random_values(&mut rng, g.order(), 4);
        let x = Assignment::from_i64(&g, &xs).unwrap();
        let lhs = dedekind_product(&g, &x).unwrap();
        let rhs = group_determinant(&g, &x).unwrap();
        ensure!(
            lhs == rhs,
            "{g} {xs:?}: character product {lhs} vs elimination {rhs}"
        );
    }
    Ok(format!("{trials} random assignments, |G| <= 12"))
}

fn product_split_identity() -> Outcome {
    let groups: &[&[usize]] = &[
        &[2, 2],
        &[2, 3],
        &[4, 2],
        &[3, 3],
        &[2, 2, 2],
        &[2, 2, 3],
        &[4, 4],
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut splits, mut checks) = (0, 0);
    for &orders in groups {
        let g = grp(orders);
        for cut in 1..g.rank() {
            let (h, k) = g.split(cut).unwrap();
            splits += 1;
            for _ in 0..50 {
                let xs = random_values(&mut rng, g.order(), 4);
                let x = Assignment::from_i64(&g, &xs).unwrap();
                let rep = theorem1_factors(&h, &k, &x).unwrap();
                ensure!(
                    rep.matched && rep.product == det(&g, &xs),
                    "{g} cut {cut} {xs:?}: product {} vs {}",
                    rep.product,
                    rep.direct_det
                );
                checks += 1;
            }
        }
    }
    Ok(format!("{splits} splits, {checks} assignments"))
}

fn coprime_split_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checks = 0;
    for (r, s) in [(3, 2), (5, 2), (3, 5)] {
        for _ in 0..50 {
            let xs: Vec<BigInt> = random_values(&mut rng, r * s, 4)
                .into_iter()
                .map(BigInt::from)
                .collect();
            let rep = laquer_split(r, s, &xs).unwrap();
            let direct = circulant_det(r * s, &xs).unwrap();
            ensure!(
                rep.product == direct,
                "(r,s)=({r},{s}) {xs:?}: {} vs {direct}",
                rep.product
            );
            ensure!(
                laquer_vs_theorem1(r, s, &xs).unwrap(),
                "(r,s)=({r},{s}) {xs:?}: factors differ from the product-split factors"
            );
            checks += 1;
        }
    }
    Ok(format!("{checks} assignments over (3,2), (5,2), (3,5)"))
}

fn value_set_two_by_two() -> Outcome {
    let rep = search(&[2, 2], 2);
    ensure!(
        rep.counts().evaluated == 625,
        "evaluated {}",
        rep.counts().evaluated
    );
    let div = check_even_divisibility(&rep, 4);
    ensure!(
        div.passed(),
        "even values not divisible by 2^4: {:?}",
        div.violations
    );
    let mem = check_membership(&rep, MembershipSpec::Z2Z2);
    ensure!(
        mem.passed(),
        "values outside the 2x2 set: {:?}",
        mem.violations
    );
    ensure!(
        rep.even_valuation_min() == Some(4),
        "minimum even valuation {:?}",
        rep.even_valuation_min()
    );
    let at_identity = det(rep.group(), &[2, 0, 0, 0]);
    ensure!(
        at_identity == BigInt::from(16),
        "x_e = 2 gives {at_identity}"
    );
    ensure!(rep.contains(&at_identity), "16 missing from the report");
    Ok(format!(
        "{} distinct values, min even valuation 4",
        rep.counts().distinct
    ))
}

fn value_set_two_cubed() -> Outcome {
    let rep = search(&[2, 2, 2], 1);
    ensure!(
        rep.counts().evaluated == 6561,
        "evaluated {}",
        rep.counts().evaluated
    );
    let div = check_even_divisibility(&rep, 8);
    ensure!(
        div.passed(),
        "even values not divisible by 2^8: {:?}",
        div.violations
    );
    let mem = check_membership(&rep, MembershipSpec::Z2Z2Z2);
    ensure!(
        mem.passed(),
        "values outside the 2x2x2 set: {:?}",
        mem.violations
    );
    Ok(format!(
        "{} distinct values, min even valuation {:?}",
        rep.counts().distinct,
        rep.even_valuation_min()
    ))
}

fn value_set_four_by_two() -> Outcome {
    let rep = search(&[4, 2], 2);
    ensure!(
        rep.counts().evaluated == 390_625,
        "evaluated {}",
        rep.counts().evaluated
    );
    let div = check_even_divisibility(&rep, 8);
    ensure!(
        div.passed(),
        "even values not divisible by 2^8: {:?}",
        div.violations
    );
    let mem = check_membership(&rep, MembershipSpec::Z4Z2);
    ensure!(
        mem.passed(),
        "values outside the 4x2 set: {:?}",
        mem.violations
    );
    Ok(format!(
        "{} distinct values, min even valuation {:?}",
        rep.counts().distinct,
        rep.even_valuation_min()
    ))
}

fn cyclic_two_power_bound() -> Outcome {
    let mut notes = Vec::new();
    for (n, order, b) in [(2u64, 4usize, 3i64), (3, 8, 2)] {
        let rep = search(&[order], b);
        let div = check_even_divisibility(&rep, n + 2);
        ensure!(
            div.passed(),
            "(Z/{order}, B={b}): even values below 2^{}: {:?}",
            n + 2,
            div.violations
        );
        let exact = rep
            .achieved()
            .iter()
            .find(|(v, _)| v.trailing_zeros() == Some(n + 2));
        let Some((v, w)) = exact else {
            return Err(format!(
                "(Z/{order}, B={b}): no even value of valuation exactly {} (min {:?})",
                n + 2,
                rep.even_valuation_min()
            ));
        };
        notes.push(format!("Z/{order}: {v} at {w:?}"));
    }
    Ok(notes.join("; "))
}

fn cyclic_six_value_set() -> Outcome {
    let rep = search(&[6], 2);
    let mem = check_membership(&rep, MembershipSpec::S2p(3));
    ensure!(mem.passed(), "values outside S2p(3): {:?}", mem.violations);
    let g = grp(&[6]);
    let opts = RunOptions::default();
    for t in [1, 5, 7] {
        let w = find_witness(&g, 3, &BigInt::from(t), &opts).unwrap();
        let Some(w) = w else {
            return Err(format!("no witness for {t} at B=3"));
        };
        ensure!(
            det(&g, &w) == BigInt::from(t),
            "witness {w:?} does not give {t}"
        );
    }
    for t in [2, 3] {
        let w = find_witness(&g, 3, &BigInt::from(t), &opts).unwrap();
        ensure!(w.is_none(), "excluded value {t} found at {w:?}");
    }
    Ok(format!(
        "{} distinct values; 1, 5, 7 found; 2, 3 absent",
        rep.counts().distinct
    ))
}

fn factor_parity() -> Outcome {
    let mut total = 0;
    for (h, l, b) in [(&[2][..], 1, 2), (&[2], 2, 1), (&[4], 1, 2)] {
        let s = verify_theorem2(&grp(h), l, b, None, &RunOptions::default()).unwrap();
        let bad = s
            .failures
            .iter()
            .find(|f| f.kind == FailureKind::Congruence);
        ensure!(
            bad.is_none(),
            "{}: mixed factor parity at {:?}",
            s.group,
            bad.map(|f| &f.witness)
        );
        ensure!(s.passed(), "{}: {:?}", s.group, s.failures.first());
        total += s.assignments_checked;
    }
    Ok(format!("{total} assignments"))
}

fn structural_properties() -> Outcome {
    let groups: &[&[usize]] = &[
        &[2],
        &[3],
        &[4],
        &[5],
        &[6],
        &[7],
        &[8],
        &[9],
        &[10],
        &[12],
        &[2, 2],
        &[2, 3],
        &[2, 4],
        &[3, 3],
        &[2, 6],
        &[3, 4],
        &[2, 2, 2],
        &[2, 2, 3],
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut trials = 0;

    for _ in 0..200 {
        let g = grp(groups[rng.gen_range(0..groups.len())]);
        let x = Assignment::from_i64(&g, &random_values(&mut rng, g.order(), 3)).unwrap();
        let y = Assignment::from_i64(&g, &random_values(&mut rng, g.order(), 3)).unwrap();
        let xy = group_determinant(&g, &x.convolve(&y).unwrap()).unwrap();
        let dx = group_determinant(&g, &x).unwrap();
        let dy = group_determinant(&g, &y).unwrap();
        ensure!(
            xy == &dx * &dy,
            "{g}: convolution gives {xy}, expected {}",
            &dx * &dy
        );
        trials += 1;
    }

    for _ in 0..150 {
        let g = grp(groups[rng.gen_range(0..groups.len())]);
        let x = Assignment::from_i64(&g, &random_values(&mut rng, g.order(), 3)).unwrap();
        let dx = group_determinant(&g, &x).unwrap();
        for a in g.elements() {
            let da = group_determinant(&g, &x.translate(&a).unwrap()).unwrap();
            ensure!(
                da == dx || da == -&dx,
                "{g}: translate by {a} gives {da}, base {dx}"
            );
        }
        trials += 1;
    }

    for _ in 0..150 {
        let g = grp(groups[rng.gen_range(0..groups.len())]);
        let x = Assignment::from_i64(&g, &random_values(&mut rng, g.order(), 3)).unwrap();
        let dx = group_determinant(&g, &x).unwrap();
        for u in 1..g.exponent() {
            if let Ok(xu) = x.scale(u) {
                let du = group_determinant(&g, &xu).unwrap();
                ensure!(du == dx, "{g}: scaling by {u} gives {du}, base {dx}");
            }
        }
        trials += 1;
    }

    let ortho_groups: &[&[usize]] = &[
        &[1],
        &[2],
        &[3],
        &[4],
        &[5],
        &[6],
        &[8],
        &[12],
        &[16],
        &[2, 2],
        &[2, 3],
        &[4, 2],
        &[3, 3],
        &[2, 2, 2],
        &[4, 4],
        &[2, 8],
        &[2, 2, 2, 2],
        &[2, 2, 3],
        &[3, 5],
    ];
    for &orders in ortho_groups {
        let g = grp(orders);
        let level = g.exponent();
        let order = BigInt::from(g.order());
        let chars = enumerate_characters(&g);
        let elems = g.elements();
        for chi in &chars {
            let sum = elems.iter().fold(CyclotomicInt::zero(level), |acc, x| {
                acc.try_add(&chi.value(x).unwrap()).unwrap()
            });
            let want = if chi.is_trivial() {
                order.clone()
            } else {
                BigInt::from(0)
            };
            ensure!(
                sum == CyclotomicInt::from_integer(level, want),
                "{g}: sum over {chi} is {sum}"
            );
        }
        for x in &elems {
            let sum = chars.iter().fold(CyclotomicInt::zero(level), |acc, chi| {
                acc.try_add(&chi.value(x).unwrap()).unwrap()
            });
            let want = if *x == g.identity() {
                order.clone()
            } else {
                BigInt::from(0)
            };
            ensure!(
                sum == CyclotomicInt::from_integer(level, want),
                "{g}: dual sum at {x} is {sum}"
            );
        }
        trials += 1;
    }

    Ok(format!("{trials} trials"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (
            "character product equals elimination determinant",
            dual_path_exactness,
        ),
        ("product-split factorization", product_split_identity),
        ("coprime circulant split", coprime_split_identity),
        ("value set of 2x2, B=2", value_set_two_by_two),
        ("value set of 2x2x2, B=1", value_set_two_cubed),
        ("value set of 4x2, B=2", value_set_four_by_two),
        ("even values of Z/4 and Z/8", cyclic_two_power_bound),
        ("value set of Z/6", cyclic_six_value_set),
        ("factor parity over the exhaustive boxes", factor_parity),
        ("structural properties", structural_properties),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name} ({detail}) [{secs:.2}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {detail} [{secs:.2}s]", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
