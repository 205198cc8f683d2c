//! Acceptance criteria 1-9. Each criterion prints one PASS/FAIL line; the
//! test fails if any criterion fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use ramspace::audit::{audit_axioms, AuditBounds, Axiom, AxiomReport};
use ramspace::forcing::{
    check_alt1, check_alt2, galvin_search, verify_certificate, Dichotomy, Forcing, FrontFamily, GalvinParams, Outcome,
    Verified,
};
use ramspace::gf::{enumerate_rre, gaussian_binomial};
use ramspace::ramsey::{
    abstract_ellentuck_witness, classical_ramsey_number, dual_to_classical_encoding, glr_witness, verify_result, Mode,
    Replay, WitnessOutcome, WitnessResult,
};
use ramspace::spaces::{enumerate_partitions, Ellentuck, EllentuckApprox, MatrixSpace, PartitionSpace};
use ramspace::{Space, Stem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const AUDIT_LIMIT: Duration = Duration::from_secs(60);
const R33_LIMIT: Duration = Duration::from_secs(60);
const GLR_LIMIT: Duration = Duration::from_secs(10);
const GALVIN_FIXTURES: usize = 100;
const ENCODING_SAMPLES: usize = 200;
const ENCODING_SEED: u64 = 0x5eed_0008;

struct Line {
    id: usize,
    pass: bool,
    detail: String,
}

fn line(id: usize, pass: bool, detail: impl Into<String>) -> Line {
    Line { id, pass, detail: detail.into() }
}

fn audits() -> (Vec<AxiomReport>, Duration) {
    let t = Instant::now();
    let reports = vec![
        audit_axioms(&Ellentuck::new(8).unwrap(), &AuditBounds::new(4, 2)).unwrap(),
        audit_axioms(&MatrixSpace::new(2, 4).unwrap(), &AuditBounds::new(3, 3).without_a6()).unwrap(),
        audit_axioms(&PartitionSpace::new(6).unwrap(), &AuditBounds::new(3, 3).without_a6()).unwrap(),
    ];
    (reports, t.elapsed())
}

fn criterion_1(reports: &[AxiomReport], elapsed: Duration) -> Line {
    let core = [Axiom::A1, Axiom::A2, Axiom::A3, Axiom::A4i, Axiom::A4ii, Axiom::A5i, Axiom::A5ii];
    let mut failed = Vec::new();
    for r in reports {
        for ax in core {
            if !r.verdict(ax).is_bounded_pass() {
                failed.push(format!("{} {}", r.space, ax.label()));
            }
        }
    }
    if !reports[0].verdict(Axiom::A6).is_bounded_pass() {
        failed.push("ellentuck A6".into());
    }
    let pass = failed.is_empty() && elapsed < AUDIT_LIMIT;
    line(1, pass, format!("axiom audits, failed={failed:?}, {:.2}s", elapsed.as_secs_f64()))
}

fn criterion_2(reports: &[AxiomReport]) -> Line {
    let mut pairs = 0;
    let mut bad = 0;
    for r in reports {
        match r.verdict(Axiom::LengthDepth) {
            v if v.is_bounded_pass() => pairs += v.instances(),
            _ => bad += 1,
        }
    }
    line(2, bad == 0 && pairs > 0, format!("length at most depth, {pairs} pairs, {bad} violations"))
}

/// Each color class of a bad 2-coloring of K_5 is a 5-cycle.
fn is_pentagon(r: &WitnessResult) -> bool {
    let Some(bad) = &r.bad else { return false };
    if bad.level != 5 || bad.entries.len() != 10 {
        return false;
    }
    let mut degree = [[0u8; 5]; 2];
    for (key, c) in &bad.entries {
        let e = EllentuckApprox::parse(key).unwrap();
        for &x in e.elements() {
            degree[*c as usize][x as usize] += 1;
        }
    }
    degree.iter().all(|d| d.iter().all(|&x| x == 2))
}

fn r33() -> WitnessResult {
    classical_ramsey_number(2, 3, 2, 8, Mode::exhaustive()).unwrap()
}

fn criterion_3() -> (Line, String) {
    let t = Instant::now();
    let r = r33();
    let v = verify_result(&r);
    let lower = classical_ramsey_number(2, 3, 2, 5, Mode::exhaustive()).unwrap();
    let lower_ok =
        lower.outcome == WitnessOutcome::ExhaustedBound(5) && verify_result(&lower).is_ok() && is_pentagon(&lower);
    let shifted = abstract_ellentuck_witness(9, 3, 4, 2, 9, Mode::exhaustive()).unwrap();
    let elapsed = t.elapsed();
    let verified = matches!(&v, Ok(v) if v.replay == Replay::Enumerated(1 << 15) && v.bad_level == Some(5));
    let pass = r.outcome == WitnessOutcome::Found(6)
        && verified
        && is_pentagon(&r)
        && lower_ok
        && shifted.outcome == WitnessOutcome::Found(7)
        && elapsed < R33_LIMIT;
    let detail = format!(
        "R(3,3) {}, replay {:?}, pentagon at 5 {}, shifted {}, {:.2}s",
        r.outcome,
        v.map(|v| v.replay),
        lower_ok,
        shifted.outcome,
        elapsed.as_secs_f64()
    );
    (line(3, pass, detail), r.certificate())
}

fn fano() -> WitnessResult {
    glr_witness(2, 1, 2, 2, 4, Mode::exhaustive()).unwrap()
}

fn criterion_4() -> (Line, String) {
    let t = Instant::now();
    let r = fano();
    let v = verify_result(&r);
    let elapsed = t.elapsed();
    let verified = matches!(&v, Ok(v) if v.replay == Replay::Enumerated(1 << 7) && v.bad_level == Some(2));
    let pass = r.outcome == WitnessOutcome::Found(3) && verified && elapsed < GLR_LIMIT;
    let detail = format!("GLR(2;1,2;2) {}, replay {:?}, {:.2}s", r.outcome, v.map(|v| v.replay), elapsed.as_secs_f64());
    (line(4, pass, detail), r.certificate())
}

/// Number of `k`-dimensional subspaces of `F_q^m` from the product formula.
fn subspace_count(m: u32, k: u32, q: u128) -> u128 {
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num *= q.pow(m) - q.pow(i);
        den *= q.pow(k) - q.pow(i);
    }
    num / den
}

fn stirling_table(n: usize) -> Vec<Vec<u128>> {
    let mut s = vec![vec![0u128; n + 1]; n + 1];
    s[0][0] = 1;
    for i in 1..=n {
        for k in 1..=i {
            s[i][k] = k as u128 * s[i - 1][k] + s[i - 1][k - 1];
        }
    }
    s
}

fn criterion_5() -> Line {
    let mut checked = 0;
    let mut mismatches = Vec::new();
    for q in [2u8, 3] {
        for m in 0..=5usize {
            for k in 0..=m {
                let got = enumerate_rre(k, m, q, 1 << 20).unwrap().len() as u128;
                let want = subspace_count(m as u32, k as u32, q as u128);
                checked += 1;
                if got != want || gaussian_binomial(m as u32, k as u32, q as u32) != want {
                    mismatches.push(format!("q={q} m={m} k={k}"));
                }
            }
        }
    }
    for (n, row) in stirling_table(8).iter().enumerate() {
        for (k, &want) in row.iter().enumerate().take(n + 1) {
            checked += 1;
            if enumerate_partitions(n, k, 1 << 20).unwrap().len() as u128 != want {
                mismatches.push(format!("n={n} k={k}"));
            }
        }
    }
    line(5, mismatches.is_empty(), format!("counts, {checked} cases, mismatches={mismatches:?}"))
}

fn bits(m: u32) -> EllentuckApprox {
    EllentuckApprox::new((0..8).filter(|i| m >> i & 1 == 1).collect())
}

fn mask(a: &EllentuckApprox) -> u32 {
    a.elements().iter().fold(0, |m, &x| m | 1 << x)
}

fn submasks(t: u32, f: &mut dyn FnMut(u32)) {
    let mut s = t;
    loop {
        f(s);
        if s == 0 {
            break;
        }
        s = (s - 1) & t;
    }
}

#[derive(Default)]
struct Sweep {
    families: u64,
    checks: u64,
    violations: u64,
    rejecting: u64,
    undecided: u64,
}

const YES: u8 = 0;
const NO: u8 = 1;
const UNKNOWN: u8 = 2;

/// Heredity of accepts and rejects, one-point extensions and rejection
/// witnesses for one family, over every stem of
/// Ellentuck's space on 8 points and every `a` with `|a| ≤ 2` below it.
fn sweep_family(sp: &Ellentuck, members: Vec<EllentuckApprox>, out: &mut Sweep) {
    let family = FrontFamily::new(sp, members, 2).unwrap();
    let engine = Forcing::new(sp, &family, 8);
    // verdicts indexed by (stem, a) as 8-bit masks
    let idx = |t: u32, a: u32| (t << 8 | a) as usize;
    let mut acc = vec![UNKNOWN; 1 << 16];
    let mut rej = vec![UNKNOWN; 1 << 16];
    for t in 0u32..256 {
        let b = Stem::new(sp, bits(t)).unwrap();
        submasks(t, &mut |a| {
            if a.count_ones() > 3 {
                return;
            }
            acc[idx(t, a)] = match engine.accepts(&b, &bits(a)).unwrap().outcome {
                Outcome::Accepts => YES,
                Outcome::NotAccepted { .. } => NO,
                _ => UNKNOWN,
            };
            if a.count_ones() <= 2 {
                rej[idx(t, a)] = match engine.rejects(&b, &bits(a)).unwrap().outcome {
                    Outcome::Rejects => YES,
                    Outcome::NotRejected { .. } => NO,
                    _ => UNKNOWN,
                };
            }
        });
    }
    out.families += 1;
    for t in 0u32..256 {
        let b = Stem::new(sp, bits(t)).unwrap();
        submasks(t, &mut |a| {
            if a.count_ones() > 2 {
                return;
            }
            if acc[idx(t, a)] == UNKNOWN || rej[idx(t, a)] == UNKNOWN {
                out.undecided += 1;
            }
            let top_bit = 32 - a.leading_zeros();
            let above = |w: u32| if top_bit == 0 { w } else { w & !((1u32 << top_bit) - 1) };
            if acc[idx(t, a)] == YES {
                // every reduct still containing a accepts a
                submasks(t & !a, &mut |r| {
                    out.checks += 1;
                    if acc[idx(r | a, a)] == NO {
                        out.violations += 1;
                    }
                });
                // every one-point extension of a inside B is accepted
                for x in 0..8 {
                    if above(t) >> x & 1 == 1 {
                        out.checks += 1;
                        if acc[idx(t, a | 1 << x)] != YES {
                            out.violations += 1;
                        }
                    }
                }
            }
            if rej[idx(t, a)] == YES {
                out.rejecting += 1;
                // every reduct still containing a rejects a
                submasks(t & !a, &mut |r| {
                    out.checks += 1;
                    if rej[idx(r | a, a)] == NO {
                        out.violations += 1;
                    }
                });
                // some reduct over a has no extension of a accepted by B
                out.checks += 1;
                match engine.rejection_witness(&b, &bits(a)).unwrap() {
                    None => out.violations += 1,
                    Some(w) => {
                        let w = mask(w.top());
                        if w & !t != 0 || w & a != a {
                            out.violations += 1;
                        }
                        for x in 0..8 {
                            if above(w) >> x & 1 == 1 && acc[idx(t, a | 1 << x)] == YES {
                                out.violations += 1;
                            }
                        }
                    }
                }
            }
        });
    }
}

/// Families of at most two members drawn from every `a` with `|a| ≤ 2`,
/// and families of three members drawn from those inside `{0, …, 4}`.
fn sweep_families(sp: &Ellentuck) -> Vec<Vec<EllentuckApprox>> {
    let pool: Vec<EllentuckApprox> = sp.universe().into_iter().filter(|a| a.len() <= 2).collect();
    let mut out = vec![vec![]];
    for i in 0..pool.len() {
        out.push(vec![pool[i].clone()]);
        for j in i + 1..pool.len() {
            out.push(vec![pool[i].clone(), pool[j].clone()]);
        }
    }
    let small: Vec<&EllentuckApprox> = pool.iter().filter(|a| a.elements().iter().all(|&x| x < 5)).collect();
    for i in 0..small.len() {
        for j in i + 1..small.len() {
            for k in j + 1..small.len() {
                out.push(vec![small[i].clone(), small[j].clone(), small[k].clone()]);
            }
        }
    }
    out
}

fn criterion_6() -> Line {
    let sp = Ellentuck::new(8).unwrap();
    let families = sweep_families(&sp);
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(8);
    let t = Instant::now();
    let parts: Vec<Sweep> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let (sp, families) = (&sp, &families);
                scope.spawn(move || {
                    let mut s = Sweep::default();
                    for f in families.iter().skip(w).step_by(workers) {
                        sweep_family(sp, f.clone(), &mut s);
                    }
                    s
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut s = Sweep::default();
    for p in parts {
        s.families += p.families;
        s.checks += p.checks;
        s.violations += p.violations;
        s.rejecting += p.rejecting;
        s.undecided += p.undecided;
    }
    let pass = s.violations == 0 && s.checks > 0 && s.rejecting > 0;
    line(
        6,
        pass,
        format!(
            "forcing sweep, {} families, {} checks, {} rejecting pairs, {} undecided pairs, {} violations, {:.2}s",
            s.families,
            s.checks,
            s.rejecting,
            s.undecided,
            s.violations,
            t.elapsed().as_secs_f64()
        ),
    )
}

fn e(xs: &[u32]) -> EllentuckApprox {
    EllentuckApprox::new(xs.to_vec())
}

fn pairs(ground: u32, keep: impl Fn(u32, u32) -> bool) -> Vec<EllentuckApprox> {
    let mut out = Vec::new();
    for a in 0..ground {
        for b in a + 1..ground {
            if keep(a, b) {
                out.push(e(&[a, b]));
            }
        }
    }
    out
}

fn singles(ground: u32, keep: impl Fn(u32) -> bool) -> Vec<EllentuckApprox> {
    (0..ground).filter(|&x| keep(x)).map(|x| e(&[x])).collect()
}

/// Hand-written families on twelve points, then every family of at most two
/// members over `{0, …, 3}` and every three-member family over `{0, 1, 2}`
/// (members of size at most 2), on six points.
fn galvin_fixtures() -> Vec<(u32, Vec<EllentuckApprox>, usize)> {
    let mut out = vec![
        (12, vec![], 2),
        (12, singles(12, |_| true), 1),
        (12, singles(12, |x| x % 2 == 0), 1),
        (12, singles(12, |x| x % 3 == 0), 1),
        (12, singles(12, |x| x >= 6), 1),
        (12, vec![e(&[])], 0),
        (12, pairs(12, |_, _| true), 2),
        (12, pairs(12, |a, b| a % 2 == 0 && b % 2 == 0), 2),
        (12, pairs(12, |a, b| b == a + 1), 2),
        (12, pairs(12, |a, b| (a + b) % 2 == 1), 2),
        (12, pairs(12, |a, _| a == 0), 2),
        (12, [vec![e(&[0])], pairs(12, |a, _| a != 0)].concat(), 2),
        (12, [singles(12, |x| x % 2 == 1), pairs(12, |a, b| a % 2 == 0 && b % 2 == 0)].concat(), 2),
    ];
    let pool: Vec<EllentuckApprox> =
        Ellentuck::new(4).unwrap().universe().into_iter().filter(|a| a.len() <= 2).collect();
    out.push((6, vec![], 2));
    for i in 0..pool.len() {
        out.push((6, vec![pool[i].clone()], 2));
        for j in i + 1..pool.len() {
            out.push((6, vec![pool[i].clone(), pool[j].clone()], 2));
        }
    }
    let small: Vec<&EllentuckApprox> = pool.iter().filter(|a| a.elements().iter().all(|&x| x < 3)).collect();
    for i in 0..small.len() {
        for j in i + 1..small.len() {
            for k in j + 1..small.len() {
                out.push((6, vec![small[i].clone(), small[j].clone(), small[k].clone()], 2));
            }
        }
    }
    out
}

fn criterion_7() -> (Line, String) {
    let fixtures = galvin_fixtures();
    let mut certs = String::new();
    let (mut alt1, mut alt2, mut inconclusive, mut failures) = (0, 0, 0, Vec::new());
    for (i, (ground, members, bound)) in fixtures.iter().enumerate() {
        let sp = Ellentuck::new(*ground).unwrap();
        let a = Stem::new(&sp, sp.full()).unwrap();
        let family = FrontFamily::new(&sp, members.clone(), *bound).unwrap();
        let r = galvin_search(&sp, &a, &family, &GalvinParams::new(*bound)).unwrap();
        certs.push_str(&r.certificate);
        let replay = verify_certificate(&sp, &r.certificate);
        let (stem, expected) = match &r.outcome {
            Dichotomy::Alt1 { stem } => {
                alt1 += 1;
                (stem, Verified::Alt1)
            }
            Dichotomy::Alt2 { stem, .. } => {
                alt2 += 1;
                (stem, Verified::Alt2)
            }
            Dichotomy::Inconclusive { candidate, .. } => {
                inconclusive += 1;
                (candidate, Verified::Inconclusive)
            }
        };
        if replay.as_ref().ok() != Some(&expected) {
            failures.push(format!("fixture {i}: replay {replay:?}"));
        }
        let both = check_alt1(&sp, &family, stem.top()).is_ok() && check_alt2(&sp, &family, stem.top()).is_ok();
        if both {
            failures.push(format!("fixture {i}: both alternatives"));
        }
    }
    let pass = fixtures.len() >= GALVIN_FIXTURES && failures.is_empty() && alt1 + alt2 > 0;
    let detail = format!(
        "Galvin dichotomy, {} families, alt1={alt1} alt2={alt2} inconclusive={inconclusive}, failures={failures:?}",
        fixtures.len()
    );
    (line(7, pass, detail), certs)
}

/// Block minima other than 0, computed from the label vector.
fn minima_oracle(labels: &[usize]) -> BTreeSet<u32> {
    let mut seen = BTreeSet::new();
    let mut minima = BTreeSet::new();
    for (i, &l) in labels.iter().enumerate() {
        if seen.insert(l) && i != 0 {
            minima.insert(i as u32);
        }
    }
    minima
}

fn criterion_8() -> Line {
    let mut rng = ChaCha8Rng::seed_from_u64(ENCODING_SEED);
    let keys: Vec<(u32, u32)> = (1..=6).flat_map(|a| (a + 1..=6).map(move |b| (a, b))).collect();
    let partitions: Vec<_> = (3..=7).flat_map(|n| enumerate_partitions(n, 3, 1 << 20).unwrap()).collect();
    let (mut checks, mut mismatches) = (0u64, 0u64);
    for _ in 0..ENCODING_SAMPLES {
        let c: Vec<u8> = keys.iter().map(|_| rng.gen_range(0..2)).collect();
        let color = |set: &[u32]| -> Option<u8> {
            let [a, b] = set else { return None };
            keys.iter().position(|&k| k == (*a, *b)).map(|i| c[i])
        };
        for t in &partitions {
            checks += 1;
            let enc = dual_to_classical_encoding(t);
            let oracle: Vec<u32> = minima_oracle(&t.labels()).into_iter().collect();
            let zero_first = t.blocks()[0].first() == Some(&0);
            let d = color(enc.elements());
            if !zero_first
                || enc.len() != 2
                || enc.elements() != oracle.as_slice()
                || d.is_none()
                || d != color(&oracle)
            {
                mismatches += 1;
            }
        }
    }
    line(
        8,
        mismatches == 0 && checks > 0,
        format!(
            "dual encoding, {ENCODING_SAMPLES} colorings x {} partitions, {mismatches} mismatches",
            partitions.len()
        ),
    )
}

fn criterion_9(first: &[String; 3]) -> Line {
    let again = [r33().certificate(), fano().certificate(), criterion_7().1];
    let same: Vec<bool> = first.iter().zip(&again).map(|(a, b)| a == b).collect();
    line(9, same.iter().all(|&s| s), format!("determinism, identical certificates {same:?}"))
}

#[test]
fn acceptance() {
    let (lines, certs) = std::thread::scope(|scope| {
        let h6 = scope.spawn(criterion_6);
        let h1 = scope.spawn(|| {
            let (reports, elapsed) = audits();
            (criterion_1(&reports, elapsed), criterion_2(&reports))
        });
        let (l3, c3) = criterion_3();
        let (l4, c4) = criterion_4();
        let l5 = criterion_5();
        let (l7, c7) = criterion_7();
        let l8 = criterion_8();
        let (l1, l2) = h1.join().unwrap();
        let l6 = h6.join().unwrap();
        (vec![l1, l2, l3, l4, l5, l6, l7, l8], [c3, c4, c7])
    });
    let mut lines = lines;
    lines.push(criterion_9(&certs));
    for l in &lines {
        println!("{} criterion {}: {}", if l.pass { "PASS" } else { "FAIL" }, l.id, l.detail);
    }
    let failed: Vec<usize> = lines.iter().filter(|l| !l.pass).map(|l| l.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
