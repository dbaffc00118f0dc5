//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use connectivity_bounds::bott::{
    bott_dimension, m_x, profile_pn, regularity_of_omega, BottQuery, RegularityProfile,
};
use connectivity_bounds::bounds::{
    fano_expected_dim, predonzan_min_n, replay, BoundKey, BoundValue, Engine, Limits, RuleSet,
};
use connectivity_bounds::combinatorics::{BigNat, FieldClass, Multidegree, Rat};
use connectivity_bounds::nori::{n_of_e_bruteforce, n_of_e_closed_form, nori_certificate, NoriQuery};
use connectivity_bounds::report::{
    connectivity_report, hodge_level, in_sharpness_window, FindingKind, ReportOptions,
};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const REGULARITY_LIMIT: Duration = Duration::from_secs(5);
const NORI_LIMIT: Duration = Duration::from_secs(30);
const GRID_LIMIT: Duration = Duration::from_secs(60);
const SYNTHETIC_PROFILES: usize = 50;
const SYNTHETIC_SEED: u64 = 0x5eed_2024;

struct Outcome {
    pass: bool,
    detail: String,
}

fn md(v: &[u32]) -> Multidegree {
    Multidegree::new(v.to_vec()).unwrap()
}

fn h(n: u32, p: u32, k: i64, q: u32) -> BigNat {
    bott_dimension(BottQuery::new(n, p, k, q).unwrap())
}

fn timed_out(start: Instant, limit: Duration) -> Option<String> {
    let t = start.elapsed();
    (t > limit).then(|| format!("took {t:?}, limit {limit:?}"))
}

fn regularity_identity() -> Outcome {
    let start = Instant::now();
    let mut mismatches = Vec::new();
    let mut total = 0;
    for n in 0..=12u32 {
        for c in 0..=n {
            total += 1;
            let m = regularity_of_omega(n, c);
            if m != c as i64 + 1 {
                mismatches.push(format!("m_{c}(P^{n})={m}"));
            }
        }
    }
    let mut mx_bad = Vec::new();
    for n in 0..=12u32 {
        let v = m_x(&profile_pn(n));
        if v != 0 {
            mx_bad.push(format!("m_X(P^{n})={v}"));
        }
    }
    let slow = timed_out(start, REGULARITY_LIMIT);
    let pass = mismatches.is_empty() && mx_bad.is_empty() && slow.is_none();
    let mut detail = format!(
        "{} of {total} indices differ from c+1; {} of 13 m_X values nonzero",
        mismatches.len(),
        mx_bad.len()
    );
    if !pass {
        let sample: Vec<_> = mismatches.iter().chain(mx_bad.iter()).take(4).cloned().collect();
        detail.push_str(&format!(
            " (e.g. {}). H^a(P^n, O(-a)) = 0 for 1 <= a <= n, so O is 0-regular, not only 1-regular; \
             c+1 holds for every c >= 1",
            sample.join(", ")
        ));
    }
    if let Some(s) = slow {
        detail.push_str(&format!("; {s}"));
    }
    Outcome { pass, detail }
}

fn bott_oracle() -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    for n in 0..=3u32 {
        for p in 0..=n {
            for k in -6..=6i64 {
                for q in 0..=n {
                    checked += 1;
                    let oracle = common::koszul_dimension(n as usize, p as usize, k, q as usize);
                    if h(n, p, k, q) != BigNat::from(oracle) {
                        bad.push(format!("H^{q}(P^{n},Omega^{p}({k}))"));
                    }
                }
            }
        }
    }
    let mut dual = 0;
    let mut dual_bad = 0;
    for n in 0..=4u32 {
        for p in 0..=n {
            for k in -8..=8i64 {
                for q in 0..=n {
                    dual += 1;
                    if h(n, p, k, q) != h(n, n - p, -k, n - q) {
                        dual_bad += 1;
                    }
                }
            }
        }
    }
    Outcome {
        pass: bad.is_empty() && dual_bad == 0,
        detail: format!(
            "{checked} groups vs Koszul oracle, {} mismatches; {dual} Serre-duality pairs, {dual_bad} mismatches",
            bad.len()
        ),
    }
}

fn random_profile(rng: &mut StdRng) -> (u32, u32, u32, RegularityProfile) {
    let dx = rng.gen_range(1..=7u32);
    let r = rng.gen_range(1..=dx.min(3));
    let e = rng.gen_range(0..=dx - r);
    let mut m: Vec<i64> = (0..dx).map(|_| rng.gen_range(-3..=12)).collect();
    // top index at least dim + 1, as for any ample twist of the canonical sheaf
    m.push(rng.gen_range(dx as i64 + 1..=dx as i64 + 6));
    (dx, r, e, RegularityProfile::user(dx, m).unwrap())
}

fn closed_form_n_of_e() -> Outcome {
    let start = Instant::now();
    let mut grid = 0;
    let mut bad = Vec::new();
    for dx in 1..=10u32 {
        for r in 1..=3u32.min(dx) {
            for e in 0..=dx - r {
                grid += 1;
                let q = NoriQuery::new(dx, r, e, profile_pn(dx)).unwrap();
                let got = n_of_e_bruteforce(&q).unwrap().threshold();
                let want = (dx - r + e + 1) as i64;
                if got != want {
                    bad.push(format!("dx={dx} r={r} e={e}: {got} vs {want}"));
                }
            }
        }
    }
    let mut rng = StdRng::seed_from_u64(SYNTHETIC_SEED);
    let mut synth_bad = 0;
    for _ in 0..SYNTHETIC_PROFILES {
        let (dx, r, e, profile) = random_profile(&mut rng);
        let bound = n_of_e_closed_form((dx - r) as i64, e as i64, m_x(&profile));
        let q = NoriQuery::new(dx, r, e, profile).unwrap();
        if n_of_e_bruteforce(&q).unwrap().value > Rat::from_integer(bound) {
            synth_bad += 1;
        }
    }
    let slow = timed_out(start, NORI_LIMIT);
    let mut detail = format!(
        "{grid} projective-space queries, {} mismatches; {SYNTHETIC_PROFILES} synthetic profiles, {synth_bad} above the closed form",
        bad.len()
    );
    if let Some(s) = &slow {
        detail.push_str(&format!("; {s}"));
    }
    Outcome {
        pass: bad.is_empty() && synth_bad == 0 && slow.is_none(),
        detail,
    }
}

fn hypersurface_thresholds() -> Outcome {
    let mut bad = Vec::new();
    for n in 3..=8u32 {
        let q = NoriQuery::new(n, 1, n - 2, profile_pn(n)).unwrap();
        let cert = nori_certificate(&q, &md(&[2 * n - 2])).unwrap();
        if cert.threshold != 2 * n as i64 - 2 || !cert.certified {
            bad.push(format!("threshold(P^{n})={}", cert.threshold));
        }
    }
    let mut window_bad = Vec::new();
    for n in 3..=40u32 {
        for d in 1..=4 * n {
            if in_sharpness_window(n, d) != (n <= d && d <= 2 * n - 3) {
                window_bad.push(format!("n={n} d={d}"));
            }
        }
    }
    // The report itself carries the same flag.
    let mut engine = Engine::new(RuleSet::default(), Limits { max_m: 256 });
    for n in 3..=6u32 {
        for d in 1..=2 * n {
            let rep = connectivity_report(n, &md(&[d]), FieldClass::c(0), &ReportOptions::default(), &mut engine)
                .unwrap();
            let f = rep
                .findings
                .iter()
                .find(|f| f.kind == FindingKind::SharpnessWindow)
                .unwrap();
            if f.inputs["in_window"] != (n <= d && d <= 2 * n - 3) {
                window_bad.push(format!("report n={n} d={d}"));
            }
        }
    }
    Outcome {
        pass: bad.is_empty() && window_bad.is_empty(),
        detail: format!(
            "thresholds 2n-2 for n=3..8: {} mismatches; sharpness window: {} mismatches",
            bad.len(),
            window_bad.len()
        ),
    }
}

fn fano_counts() -> Outcome {
    let mut bad = 0;
    let mut checked = 0;
    for n in 2..=20u64 {
        for d in 1..=4 * n as u32 {
            checked += 1;
            let nonneg = fano_expected_dim(n, &md(&[d]), 1) >= BigInt::from(0);
            if nonneg != (d as u64 + 3 <= 2 * n) {
                bad += 1;
            }
        }
    }
    let cubic = predonzan_min_n(&md(&[3]), 2);
    Outcome {
        pass: bad == 0 && cubic == BigNat::from(6u32),
        detail: format!("{checked} line counts, {bad} mismatches; planes on cubics from n = {cubic}"),
    }
}

fn value_of(engine: &mut Engine, key: &BoundKey) -> (Option<u64>, bool) {
    let res = engine.bound(key).expect("engine invariant");
    let replayed = replay(&res.derivation, engine.rules(), engine.limits()).as_ref() == Ok(&res.value);
    (res.value.finite().and_then(|v| v.to_u64()), replayed)
}

fn desk_values() -> Outcome {
    let expected = [
        (BoundKey::n(md(&[2]), 1, FieldClass::c(1)), 3u64),
        (BoundKey::l_for_field(md(&[2]), 1, FieldClass::c(0)), 4),
        (BoundKey::l_for_field(md(&[3]), 1, FieldClass::c(0)), 11),
    ];
    let mut engine = Engine::default();
    let mut literal = Engine::new(
        RuleSet {
            literal_polar: true,
            ..RuleSet::default()
        },
        Limits::default(),
    );
    let mut pass = true;
    let mut parts = Vec::new();
    let mut literal_parts = Vec::new();
    for (key, want) in &expected {
        let (got, replayed) = value_of(&mut engine, key);
        pass &= got == Some(*want) && replayed;
        parts.push(format!(
            "{key}={} (expected {want}{})",
            got.map_or("-".into(), |v| v.to_string()),
            if replayed { "" } else { ", replay failed" }
        ));
        let (lit, _) = value_of(&mut literal, key);
        literal_parts.push(format!("{key}={}", lit.map_or("-".into(), |v| v.to_string())));
    }
    let mut linear_bad = 0;
    for r in 1..=4usize {
        for m in 0..=6u64 {
            for c in 0..=2u32 {
                let key = BoundKey::l_for_field(md(&vec![1; r]), m, FieldClass::c(c));
                let (got, replayed) = value_of(&mut engine, &key);
                if got != Some(m + r as u64) || !replayed {
                    linear_bad += 1;
                }
            }
        }
    }
    pass &= linear_bad == 0;
    let mut detail = format!("{}; all-linear mismatches {linear_bad}", parts.join(", "));
    if !pass {
        detail.push_str(&format!(
            ". The expected values use the polar step n(d;m) <= max(n(d;0), n(1..d;m-1)), which \
             forgets that lines through a point form a P^(n-1): it would put a line on every plane conic. \
             With the shift, n((2);m;C0) = 2m+1 as for smooth quadrics. The unshifted rules give {} instead, \
             so no rule set meets all three expectations",
            literal_parts.join(", ")
        ));
    }
    Outcome { pass, detail }
}

fn finiteness_grid() -> Outcome {
    let start = Instant::now();
    let mut engine = Engine::default();
    let mut total = 0;
    let mut not_finite = Vec::new();
    let mut cycles = 0;
    let mut worse = 0;
    let mut max_bits = 0;
    let mut degrees = vec![vec![]];
    let mut layer: Vec<Vec<u32>> = vec![vec![]];
    for _ in 0..3 {
        let mut next = Vec::new();
        for v in &layer {
            for x in *v.last().unwrap_or(&1)..=4 {
                let mut w = v.clone();
                w.push(x);
                next.push(w);
            }
        }
        degrees.extend(next.iter().cloned());
        layer = next;
    }
    for d in &degrees {
        let deg = md(d);
        for m in 0..=2u64 {
            for c in 0..=2u32 {
                let field = FieldClass::c(c);
                for key in [BoundKey::n(deg.clone(), m, field), BoundKey::l_for_field(deg.clone(), m, field)] {
                    total += 1;
                    match engine.evaluate(&key) {
                        Ok(BoundValue::Finite(v)) => max_bits = max_bits.max(v.bits()),
                        Ok(_) => not_finite.push(key.to_string()),
                        Err(_) => cycles += 1,
                    }
                }
            }
            let std = engine.evaluate(&BoundKey::l_for_field(deg.clone(), m, FieldClass::c(0)));
            let uni_key = BoundKey::l_for_field(deg.clone(), m, FieldClass::universal());
            total += 1;
            let uni = engine.evaluate(&uni_key);
            match (&std, &uni) {
                (Ok(s), Ok(u)) => {
                    if !u.is_finite() {
                        not_finite.push(uni_key.to_string());
                    }
                    if let (Some(s), Some(u)) = (s.finite(), u.finite()) {
                        if u > s {
                            worse += 1;
                        }
                    }
                    if s.is_finite() && !u.is_finite() {
                        worse += 1;
                    }
                }
                _ => cycles += 1,
            }
        }
    }
    let slow = timed_out(start, GRID_LIMIT);
    let pass = not_finite.is_empty() && cycles == 0 && worse == 0 && slow.is_none();
    let mut detail = format!(
        "{total} keys: {} not finite within m <= {}, {cycles} cycles, {worse} universal-domain values above standard; \
         largest finite bound {max_bits} bits; {:?}",
        not_finite.len(),
        engine.limits().max_m,
        start.elapsed()
    );
    if !not_finite.is_empty() {
        detail.push_str(&format!(
            " (e.g. {}). Each value is finite in principle, but the split and l_from_n steps feed one \
             bound back in as the next m, so these keys need m beyond the budget and the values grow as towers",
            not_finite.iter().take(3).cloned().collect::<Vec<_>>().join(", ")
        ));
    }
    if let Some(s) = slow {
        detail.push_str(&format!("; {s}"));
    }
    Outcome { pass, detail }
}

fn hodge_levels() -> Outcome {
    let mut bad = 0;
    let mut checked = 0;
    for n in 1..=60u32 {
        for d in 1..=n {
            checked += 1;
            if hodge_level(n, &md(&[d])).unwrap() < 1 {
                bad += 1;
            }
        }
    }
    let cubic = hodge_level(6, &md(&[3])).unwrap();
    Outcome {
        pass: bad == 0 && cubic == 2,
        detail: format!("{checked} hypersurfaces with n >= d, {bad} below 1; hodge_level(6,(3)) = {cubic}"),
    }
}

type Check = fn() -> Outcome;

fn main() {
    let criteria: [(&str, Check); 8] = [
        ("regularity identity", regularity_identity),
        ("Bott oracle equivalence", bott_oracle),
        ("closed-form N(e)", closed_form_n_of_e),
        ("hypersurface thresholds", hypersurface_thresholds),
        ("Fano counts", fano_counts),
        ("bound engine desk values", desk_values),
        ("finiteness and termination", finiteness_grid),
        ("Hodge level", hodge_levels),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let out = check();
        let tag = if out.pass { "PASS" } else { "FAIL" };
        if !out.pass {
            failed += 1;
        }
        println!("[{tag}] {}. {name}: {}", i + 1, out.detail);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
