//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line, then exits nonzero if any
//! criterion failed.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use massey::arith::ExactRational;
use massey::ffield::{sweep, FqField};
use massey::groupcoh::{brute_force_massey, characters, triple_massey, u4_lift_exists, FiniteGroup, MasseyStatus};
use massey::masseyq::{
    certify_point_with, decide_massey_q, local_point_oracle, massey_defined_local, SearchOptions,
    SquareClassTriple,
};
use massey::places::{cup_vanishes_globally, hilbert_symbol, relevant_places, Place};
use massey::torsor::TorsorCheck;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{oracle_symbol, random_squarefree, squarefree_upto};

const HILBERT_BOUND: i128 = 30;
const HILBERT_PLACES: [Place; 7] = [
    Place::Real,
    Place::Prime(2),
    Place::Prime(3),
    Place::Prime(5),
    Place::Prime(7),
    Place::Prime(11),
    Place::Prime(13),
];
const HILBERT_LIMIT: Duration = Duration::from_secs(120);
const SWEEP_FIELDS: [u32; 6] = [3, 5, 7, 9, 11, 13];
const SWEEP_LIMIT: Duration = Duration::from_secs(300);
const DWYER_LIMIT: Duration = Duration::from_secs(600);
const SYMBOLIC_LIMIT: Duration = Duration::from_secs(10);
const COROLLARY_SAMPLES: usize = 100;
const COROLLARY_BOUND: i128 = 20;
const COROLLARY_HEIGHT: u64 = 500;
const COROLLARY_BUDGET: Duration = Duration::from_secs(10);
const INVARIANCE_SAMPLES: usize = 500;
const LOCAL_SAMPLES: usize = 200;

struct Outcome {
    passed: bool,
    summary: String,
}

fn outcome(passed: bool, summary: impl Into<String>) -> Outcome {
    Outcome { passed, summary: summary.into() }
}

fn within(limit: Duration, elapsed: Duration) -> bool {
    elapsed <= limit
}

fn hilbert_oracle() -> Outcome {
    let start = Instant::now();
    let values = squarefree_upto(HILBERT_BOUND);
    let mut checked = 0usize;
    let mut mismatches = Vec::new();
    for &a in &values {
        for &b in &values {
            for place in HILBERT_PLACES {
                checked += 1;
                let formula = hilbert_symbol(a, b, place);
                let oracle = oracle_symbol(a, b, place);
                if formula != oracle {
                    mismatches.push(format!("({a},{b})_{place}: formula {formula}, oracle {oracle}"));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let passed = mismatches.is_empty() && within(HILBERT_LIMIT, elapsed);
    let mut summary = format!(
        "{checked} symbols, {} disagreements, {:.1}s (limit {}s)",
        mismatches.len(),
        elapsed.as_secs_f64(),
        HILBERT_LIMIT.as_secs()
    );
    if let Some(first) = mismatches.first() {
        summary.push_str(&format!("; first: {first}"));
    }
    outcome(passed, summary)
}

fn product_formula() -> Outcome {
    let values = squarefree_upto(HILBERT_BOUND);
    let mut violations = Vec::new();
    let mut pairs = 0usize;
    for &a in &values {
        for &b in &values {
            pairs += 1;
            let places = relevant_places(&[a, b]).expect("squarefree inputs");
            let product: i8 = places.iter().map(|&v| hilbert_symbol(a, b, v)).product();
            if product != 1 {
                violations.push((a, b));
            }
        }
    }
    outcome(violations.is_empty(), format!("{pairs} pairs, {} violations{}", violations.len(), first_note(violations.first())))
}

fn norm_images() -> Outcome {
    let start = Instant::now();
    let mut lines = Vec::new();
    let mut ok = true;
    for q in SWEEP_FIELDS {
        let report = sweep(&FqField::new(q).expect("supported field")).expect("sweep within caps");
        let expected = (q as usize - 1).pow(2);
        ok &= report.pairs_checked == expected && report.pairs_equal == expected;
        lines.push(format!("q={q}: {}/{}", report.pairs_equal, expected));
    }
    let elapsed = start.elapsed();
    ok &= within(SWEEP_LIMIT, elapsed);
    outcome(ok, format!("{}; {:.1}s (limit {}s)", lines.join(", "), elapsed.as_secs_f64(), SWEEP_LIMIT.as_secs()))
}

fn finite_field_points() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for q in SWEEP_FIELDS {
        let report = sweep(&FqField::new(q).expect("supported field")).expect("sweep within caps");
        let expected = (q as usize - 1).pow(3);
        ok &= report.triples_checked == expected && report.triples_with_points == expected;
        lines.push(format!("q={q}: {}/{}", report.triples_with_points, expected));
    }
    outcome(ok, lines.join(", "))
}

struct DwyerTally {
    instances: usize,
    lift_disagreements: Vec<String>,
    brute_disagreements: Vec<String>,
    defined: usize,
    coset_violations: Vec<String>,
    elapsed: Duration,
}

fn dwyer_sweep() -> DwyerTally {
    let start = Instant::now();
    let mut t = DwyerTally {
        instances: 0,
        lift_disagreements: Vec::new(),
        brute_disagreements: Vec::new(),
        defined: 0,
        coset_violations: Vec::new(),
        elapsed: Duration::ZERO,
    };
    for g in FiniteGroup::zoo() {
        let chars = characters(&g);
        for a in &chars {
            for b in &chars {
                for c in &chars {
                    t.instances += 1;
                    let label = || format!("{} ({}, {}, {})", g.name(), a.bits(), b.bits(), c.bits());
                    let fast = triple_massey(&g, a, b, c).expect("characters are homomorphisms");
                    let lift = u4_lift_exists(&g, a, b, c).expect("zoo groups have few generators");
                    if lift.is_some() != (fast.status == MasseyStatus::ContainsZero) {
                        t.lift_disagreements.push(label());
                    }
                    let brute = brute_force_massey(&g, a, b, c).expect("zoo groups have order <= 8");
                    if brute.status != fast.status {
                        t.brute_disagreements.push(label());
                    }
                    if fast.status != MasseyStatus::Undefined {
                        t.defined += 1;
                        let coset: BTreeSet<_> = fast.value_classes(&g);
                        if coset != brute.classes {
                            t.coset_violations.push(label());
                        }
                    }
                }
            }
        }
    }
    t.elapsed = start.elapsed();
    t
}

fn first_note<T: std::fmt::Debug>(first: Option<&T>) -> String {
    first.map(|v| format!(", first: {v:?}")).unwrap_or_default()
}

fn dwyer(t: &DwyerTally) -> Outcome {
    let passed = t.lift_disagreements.is_empty() && t.brute_disagreements.is_empty() && within(DWYER_LIMIT, t.elapsed);
    outcome(
        passed,
        format!(
            "{} triples over 8 groups, {} lift / {} brute-force disagreements, {:.1}s (limit {}s){}",
            t.instances,
            t.lift_disagreements.len(),
            t.brute_disagreements.len(),
            t.elapsed.as_secs_f64(),
            DWYER_LIMIT.as_secs(),
            first_note(t.lift_disagreements.first().or(t.brute_disagreements.first()))
        ),
    )
}

fn coset_law(t: &DwyerTally) -> Outcome {
    outcome(
        t.coset_violations.is_empty() && t.defined > 0,
        format!("{} defined instances, {} coset-law violations{}", t.defined, t.coset_violations.len(), first_note(t.coset_violations.first())),
    )
}

fn symbolic() -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();
    let mut ok = true;
    for check in TorsorCheck::ALL {
        let good = check.run(false);
        let bad = check.run(true);
        ok &= good.passed && !bad.passed;
        notes.push(format!(
            "{check} {}/{}",
            if good.passed { "pass" } else { "FAIL" },
            if bad.passed { "mutation survived" } else { "mutation caught" }
        ));
    }
    let elapsed = start.elapsed();
    ok &= within(SYMBOLIC_LIMIT, elapsed);
    outcome(ok, format!("{}; {:.2}s (limit {}s)", notes.join(", "), elapsed.as_secs_f64(), SYMBOLIC_LIMIT.as_secs()))
}

fn gartner() -> Outcome {
    let (a, b, c) = (313, 457, 521);
    let t = SquareClassTriple::new(a, b, c).expect("primes are squarefree");
    let v = decide_massey_q(&t).expect("small primes factor");
    let places = [Place::Real, Place::Prime(2), Place::Prime(313), Place::Prime(457), Place::Prime(521)];
    let mut bad = Vec::new();
    for (x, y) in [(a, b), (b, c), (a, c)] {
        for p in places {
            if hilbert_symbol(x, y, p) != 1 {
                bad.push(format!("({x},{y})_{p}"));
            }
        }
    }
    outcome(
        v.defined && v.vanishes && bad.is_empty(),
        format!("defined={} vanishes={}, {} symbols != +1 {:?}", v.defined, v.vanishes, bad.len(), bad),
    )
}

fn corollary() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x3_3);
    let mut seen = BTreeSet::new();
    while seen.len() < COROLLARY_SAMPLES {
        let a = random_squarefree(&mut rng, COROLLARY_BOUND);
        let b = random_squarefree(&mut rng, COROLLARY_BOUND);
        if cup_vanishes_globally(a, b).expect("squarefree").0 {
            seen.insert((a, b));
        }
    }
    let mut failures = Vec::new();
    let mut misses = Vec::new();
    let mut max_height = 0u64;
    for &(a, b) in &seen {
        let t = SquareClassTriple::new(a, b, a).expect("squarefree");
        let v = decide_massey_q(&t).expect("small inputs factor");
        if !(v.defined && v.vanishes) {
            failures.push((a, b));
            continue;
        }
        let opts = SearchOptions { height: COROLLARY_HEIGHT, deadline: Some(Instant::now() + COROLLARY_BUDGET) };
        match certify_point_with(&t, &opts).point {
            Some(p) if p.verify(&t) => {
                let h = p.y.iter().map(|q| q.numer().magnitude().clone()).max().expect("four coordinates");
                max_height = max_height.max(u64::try_from(h).unwrap_or(u64::MAX));
            }
            Some(_) => failures.push((a, b)),
            None => misses.push((a, b)),
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{} pairs, {} not vanishing or bad certificate, {} search-height findings {:?}, max certificate height {}",
            seen.len(),
            failures.len(),
            misses.len(),
            misses,
            max_height
        ),
    )
}

fn random_square(rng: &mut impl Rng) -> ExactRational {
    let r = ExactRational::new(BigInt::from(rng.gen_range(1..=30)), BigInt::from(rng.gen_range(1..=30)));
    &r * &r
}

fn invariances() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut scaling = 0usize;
    let mut symmetry = 0usize;
    for _ in 0..INVARIANCE_SAMPLES {
        let raw = [0; 3].map(|_| random_squarefree(&mut rng, 60));
        let t = SquareClassTriple::new(raw[0], raw[1], raw[2]).expect("squarefree");
        let v = decide_massey_q(&t).expect("small inputs factor");
        let scaled: [ExactRational; 3] =
            raw.map(|x| ExactRational::from_integer(BigInt::from(x)) * random_square(&mut rng));
        let (t2, _) = SquareClassTriple::reduce(&scaled).expect("nonzero");
        let v2 = decide_massey_q(&t2).expect("small inputs factor");
        if t2 != t || (v2.defined, v2.vanishes) != (v.defined, v.vanishes) {
            scaling += 1;
        }
        let vr = decide_massey_q(&t.reversed()).expect("small inputs factor");
        if (vr.defined, vr.vanishes) != (v.defined, v.vanishes) {
            symmetry += 1;
        }
    }
    let mut local = 0usize;
    let mut local_checked = 0usize;
    for _ in 0..LOCAL_SAMPLES {
        let raw = [0; 3].map(|_| random_squarefree(&mut rng, 30));
        let t = SquareClassTriple::new(raw[0], raw[1], raw[2]).expect("squarefree");
        for p in [3u64, 5, 7, 11, 13] {
            if raw.iter().any(|&x| x % p as i128 == 0) {
                continue;
            }
            local_checked += 1;
            let oracle = local_point_oracle(&t, p).expect("good odd prime");
            if oracle != massey_defined_local(&t, Place::Prime(p)).solvable {
                local += 1;
            }
        }
    }
    outcome(
        scaling == 0 && symmetry == 0 && local == 0,
        format!(
            "{INVARIANCE_SAMPLES} triples: {scaling} scaling / {symmetry} symmetry violations; \
             {local_checked} local checks, {local} oracle disagreements"
        ),
    )
}

fn main() {
    let suite_start = Instant::now();
    let mut results: Vec<(usize, &str, Outcome, Duration)> = Vec::new();
    let mut run = |n: usize, name: &'static str, f: &dyn Fn() -> Outcome| {
        let start = Instant::now();
        let o = f();
        let elapsed = start.elapsed();
        println!(
            "criterion {n:>2} {} {name}: {} [{:.2}s]",
            if o.passed { "PASS" } else { "FAIL" },
            o.summary,
            elapsed.as_secs_f64()
        );
        results.push((n, name, o, elapsed));
    };
    run(1, "hilbert symbol vs brute-force conic oracle", &hilbert_oracle);
    run(2, "product formula", &product_formula);
    run(3, "norm image equals residue-field norm image", &norm_images);
    run(4, "X(a,b,c) has points over every F_q", &finite_field_points);
    let tally = dwyer_sweep();
    run(5, "cochain Massey = U4 lift = brute force", &|| dwyer(&tally));
    run(6, "value set is a coset of the indeterminacy", &|| coset_law(&tally));
    run(7, "symbolic torsor identities and mutations", &symbolic);
    run(8, "decide 313 457 521", &gartner);
    run(9, "defined (a,b,a) vanishes and certifies", &corollary);
    run(10, "square-class, symmetry and local-oracle invariances", &invariances);
    let failed: Vec<usize> = results.iter().filter(|r| !r.2.passed).map(|r| r.0).collect();
    println!(
        "acceptance: {}/{} criteria passed in {:.1}s",
        results.len() - failed.len(),
        results.len(),
        suite_start.elapsed().as_secs_f64()
    );
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
