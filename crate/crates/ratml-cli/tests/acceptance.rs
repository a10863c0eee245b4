//! Acceptance suite: twelve end-to-end checks covering the truncated-map
//! golden vectors, the structural propositions, the exact/approximate
//! decoder guarantees, and the two reproduction experiments driven through
//! the compiled binary. Each check prints one PASS line with its runtime.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::process::{Command, Stdio};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use ratml::code::{self, RandomCodeSpec};
use ratml::decode::{approx_ml_decode, bit_errors, ml_decode};
use ratml::rational_map::{
    classify_vertex, derivative_closed_form, derivative_oracle, gradient_residual, jacobian_at_p,
    jacobian_numeric, SumKind,
};
use ratml::taylor::{clean_truncated_map, general_taylor, theta};
use ratml::{BitVector, LikelihoodPoint, LinearCode, PointClass};

fn report(no: u32, start: Instant, detail: &str) {
    println!(
        "criterion {no:02} PASS ({:.2}s): {detail}",
        start.elapsed().as_secs_f64()
    );
}

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ratml"));
    cmd.env_remove("RATML_WORKERS");
    cmd
}

fn word_from(bits: u64, n: usize) -> BitVector {
    let mut w = BitVector::zeros(n);
    for j in 0..n {
        if bits >> j & 1 == 1 {
            w.set(j, true);
        }
    }
    w
}

fn random_word(n: usize, rng: &mut ratml::rng::ChaCha8Rng) -> BitVector {
    let mut w = BitVector::zeros(n);
    for j in 0..n {
        if ratml::rng::unit_f64(rng) < 0.5 {
            w.set(j, true);
        }
    }
    w
}

/// Fifty seeded circulant draws shared by the coefficient-engine and
/// truncation-theorem checks. All have n <= 12, k <= 6.
fn seeded_pool() -> Vec<LinearCode> {
    let mut out = Vec::new();
    for idx in 0..50u64 {
        let mut rng = ratml::rng::stream(42, "pool", &[idx]);
        let mut pick = |m: usize| -> usize {
            ((ratml::rng::unit_f64(&mut rng) * m as f64) as usize).min(m - 1)
        };
        let k = 3 + pick(4);
        let blocks = 1 + pick(12 / k - 1);
        let weight = 1 + pick(k);
        let seed = (ratml::rng::unit_f64(&mut rng) * 9.007_199_254_740_992e15) as u64;
        let spec = RandomCodeSpec {
            k,
            blocks,
            weight,
            seed,
        };
        out.push(code::random_systematic_circulant(&spec).expect("pool draw"));
    }
    out
}

// ---------------------------------------------------------------------------
// Sweep fixtures: each experiment runs through the binary once per worker
// count, and the byte-identical outputs are shared by criteria 10-12.

struct SweepFixture {
    csvs: [String; 3],
    duration: Duration,
}

const WORKER_GRID: [usize; 3] = [1, 4, 8];

const BCH_SPEC: &str = "builtin = bch63_7\n\
    decoder = ml\n\
    decoder = approx:3\n\
    decoder = bm\n\
    epsilon = 0.1\n\
    trials = 1000000\n\
    seed = 0\n";

const RATE_SPEC: &str = "k = 16\n\
    w = 2\n\
    blocks = 1\n\
    blocks = 2\n\
    blocks = 3\n\
    realizations = 10\n\
    decoder = approx:3\n\
    epsilon = 0.16\n\
    trials = 100000\n\
    seed = 0\n";

fn run_fixture(tag: &str, spec: &str) -> SweepFixture {
    let dir = tempfile::tempdir().expect("tempdir");
    let spec_path = dir.path().join(format!("{tag}.spec"));
    std::fs::write(&spec_path, spec).expect("write spec");
    let start = Instant::now();
    let csvs = WORKER_GRID.map(|w| {
        let out = dir.path().join(format!("{tag}_w{w}.csv"));
        let status = bin()
            .arg("ber")
            .arg(&spec_path)
            .args(["--workers", &w.to_string()])
            .arg("--out")
            .arg(&out)
            .stdout(Stdio::null())
            .status()
            .expect("spawn ber");
        assert!(status.success(), "{tag} sweep failed at --workers {w}");
        std::fs::read_to_string(&out).expect("read csv")
    });
    SweepFixture {
        csvs,
        duration: start.elapsed(),
    }
}

fn bch_fixture() -> &'static SweepFixture {
    static FIG: OnceLock<SweepFixture> = OnceLock::new();
    FIG.get_or_init(|| run_fixture("bch63", BCH_SPEC))
}

fn rate_fixture() -> &'static SweepFixture {
    static FIG: OnceLock<SweepFixture> = OnceLock::new();
    FIG.get_or_init(|| run_fixture("rates", RATE_SPEC))
}

struct Row {
    decoder: String,
    rate: String,
    realization: String,
    pe: f64,
    lo: f64,
    hi: f64,
}

fn parse_rows(csv: &str) -> Vec<Row> {
    let mut lines = csv.lines();
    let header = lines.next().expect("csv header");
    assert!(header.starts_with("code,decoder,"), "unexpected header");
    lines
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            assert_eq!(f.len(), 15, "csv arity: {line}");
            Row {
                decoder: f[1].to_string(),
                rate: f[4].to_string(),
                realization: f[7].to_string(),
                pe: f[10].parse().expect("pe"),
                lo: f[11].parse().expect("lo"),
                hi: f[12].parse().expect("hi"),
            }
        })
        .collect()
}

fn find<'a>(rows: &'a [Row], decoder: &str, rate: &str, realization: &str) -> &'a Row {
    let hits: Vec<&Row> = rows
        .iter()
        .filter(|r| r.decoder == decoder && r.rate == rate && r.realization == realization)
        .collect();
    assert_eq!(hits.len(), 1, "row lookup {decoder}/{rate}/{realization}");
    hits[0]
}

// ---------------------------------------------------------------------------

/// The known truncated map of the 16-coordinate Hermitian-derived code:
/// coordinate i couples to a partner through three disjoint pairs, every
/// cubic coefficient is 4. Entry order follows coordinates 1..=16.
const HERMITIAN_TRIPLES: [(usize, [(usize, usize); 3]); 16] = [
    (7, [(3, 9), (5, 11), (13, 15)]),
    (8, [(4, 10), (6, 12), (14, 16)]),
    (9, [(1, 7), (5, 11), (13, 15)]),
    (10, [(2, 8), (6, 12), (14, 16)]),
    (11, [(1, 7), (3, 9), (13, 15)]),
    (12, [(2, 8), (4, 10), (14, 16)]),
    (1, [(3, 9), (5, 11), (13, 15)]),
    (2, [(4, 10), (6, 12), (14, 16)]),
    (3, [(1, 7), (5, 11), (13, 15)]),
    (4, [(2, 8), (6, 12), (14, 16)]),
    (5, [(1, 7), (3, 9), (13, 15)]),
    (6, [(2, 8), (4, 10), (14, 16)]),
    (15, [(1, 7), (3, 9), (5, 11)]),
    (16, [(2, 8), (4, 10), (6, 12)]),
    (13, [(1, 7), (3, 9), (5, 11)]),
    (14, [(2, 8), (4, 10), (6, 12)]),
];

fn normalized(text: &str) -> String {
    let mut lines = text.lines();
    let header = lines.next().unwrap_or_default().trim().to_string();
    let mut body: Vec<String> = lines
        .map(|l| l.trim_end().to_string())
        .filter(|l| !l.is_empty())
        .collect();
    body.sort();
    let mut out = header;
    for line in body {
        out.push('\n');
        out.push_str(&line);
    }
    out
}

#[test]
fn criterion_01_hermitian_golden_map() {
    let start = Instant::now();
    let dir = tempfile::tempdir().expect("tempdir");
    let out = dir.path().join("hermitian.taylor");
    let status = bin()
        .args(["taylor", "hermitian16", "--order", "3", "--mode", "clean"])
        .arg("--out")
        .arg(&out)
        .stdout(Stdio::null())
        .status()
        .expect("spawn taylor");
    assert!(status.success());
    let produced = std::fs::read_to_string(&out).expect("read map");

    let mut expected = String::from("n 16 order 3\n");
    for (idx, (partner, pairs)) in HERMITIAN_TRIPLES.iter().enumerate() {
        let i = idx + 1;
        let _ = writeln!(expected, "{i}\t1\t{i}");
        for (a, b) in pairs {
            let mut t = [*a, *b, *partner];
            t.sort_unstable();
            let _ = writeln!(expected, "{i}\t4\t{},{},{}", t[0], t[1], t[2]);
        }
    }
    assert_eq!(normalized(&produced), normalized(&expected));
    assert!(start.elapsed() < Duration::from_secs(1), "over 1s");
    report(1, start, "all 16 truncated coordinates match the golden text");
}

#[test]
fn criterion_02_hermitian_distance_and_self_duality() {
    let start = Instant::now();
    let herm = code::hermitian_16();
    assert_eq!(herm.min_distance().unwrap(), 4);
    assert!(
        herm.generator().same_row_space(herm.parity_check()),
        "code is not self-dual"
    );
    let dual = herm.dual().unwrap();
    assert_eq!(dual.min_distance().unwrap(), 4);
    assert!(start.elapsed() < Duration::from_secs(1), "over 1s");
    report(2, start, "d = 4, dual d = 4, generator and check rows agree");
}

#[test]
fn criterion_03_vertex_census() {
    let start = Instant::now();
    let codes = [code::repetition(3), code::hamming_7_4(), code::hermitian_16()];
    let mut detail = String::new();
    for c in &codes {
        let (n, k) = (c.n(), c.k());
        let mut fixed = 0u64;
        let mut poles = 0u64;
        for bits in 0..1u64 << n {
            match classify_vertex(c, &word_from(bits, n)).unwrap() {
                PointClass::CodewordFixed => fixed += 1,
                PointClass::Pole => poles += 1,
                other => panic!("vertex classified {other:?}"),
            }
        }
        assert_eq!(fixed, 1 << k, "{}", c.name());
        assert_eq!(poles, (1u64 << n) - (1 << k), "{}", c.name());
        let _ = write!(detail, "{} {fixed}/{poles} ", c.name());
    }
    assert!(start.elapsed() < Duration::from_secs(10), "over 10s");
    report(3, start, &format!("fixed/pole counts {detail}"));
}

fn structural_codes() -> Vec<LinearCode> {
    let circ = |k, blocks, weight, seed| {
        code::random_systematic_circulant(&RandomCodeSpec {
            k,
            blocks,
            weight,
            seed,
        })
        .expect("circulant")
    };
    vec![
        code::repetition(3),
        code::hamming_7_4(),
        code::hermitian_16(),
        circ(4, 2, 2, 11),
        // Three identical blocks force duplicate columns, so the Jacobian
        // at the center has off-diagonal ones.
        circ(4, 3, 2, 3),
        circ(5, 1, 3, 2),
    ]
}

#[test]
fn criterion_04_jacobian_forms() {
    let start = Instant::now();
    let mut vertices = 0usize;
    for c in &structural_codes() {
        let n = c.n();
        assert!(n <= 16);
        let closed = jacobian_at_p(c);
        let numeric = jacobian_numeric(c, &LikelihoodPoint::center(n), 1e-5).unwrap();
        for i in 0..n {
            for j in 0..n {
                let want = if closed.get(i, j) { 1.0 } else { 0.0 };
                assert!(
                    (numeric[i][j] - want).abs() <= 1e-6,
                    "{} J[{i}][{j}] = {} want {want}",
                    c.name(),
                    numeric[i][j]
                );
            }
        }
        // Zero Jacobian at codeword vertices needs d >= 2; all test codes
        // qualify.
        assert!(c.min_distance().unwrap() >= 2);
        c.for_each_codeword(|x| {
            let jac = jacobian_numeric(c, &LikelihoodPoint::vertex(x), 1e-5).unwrap();
            let max = jac
                .iter()
                .flatten()
                .fold(0.0f64, |m, v| m.max(v.abs()));
            assert!(max <= 1e-4, "{} vertex {x:?} max {max}", c.name());
            vertices += 1;
        })
        .unwrap();
    }
    assert!(start.elapsed() < Duration::from_secs(30), "over 30s");
    report(
        4,
        start,
        &format!("closed form matches finite differences; zero at {vertices} codeword vertices"),
    );
}

#[test]
fn criterion_05_gradient_identity() {
    let start = Instant::now();
    let bch = code::bch_63_7();
    let pool = structural_codes();
    let mut codes: Vec<&LinearCode> = pool.iter().collect();
    codes.push(bch.linear());
    let mut worst = 0.0f64;
    for (ci, &c) in codes.iter().enumerate() {
        for t in 0..100u64 {
            let mut rng = ratml::rng::stream(5, "gradient", &[ci as u64, t]);
            let u: Vec<f64> = (0..c.n())
                .map(|_| 0.05 + 0.9 * ratml::rng::unit_f64(&mut rng))
                .collect();
            let point = LikelihoodPoint::new(u).unwrap();
            let r = gradient_residual(c, &point).unwrap();
            assert!(r <= 1e-9, "{} residual {r}", c.name());
            worst = worst.max(r);
        }
    }
    assert!(start.elapsed() < Duration::from_secs(10), "over 10s");
    report(
        5,
        start,
        &format!("residual <= 1e-9 at 100 interior points per code (worst {worst:.2e})"),
    );
}

#[test]
fn criterion_06_derivative_engine_equivalence() {
    let start = Instant::now();
    let pool = seeded_pool();
    let mut checked = 0u64;
    for c in &pool {
        let n = c.n();
        assert!(n <= 12 && c.k() <= 6);
        let mut subsets: Vec<Vec<usize>> = vec![vec![]];
        for a in 0..n {
            subsets.push(vec![a]);
            for b in a + 1..n {
                subsets.push(vec![a, b]);
                for d in b + 1..n {
                    subsets.push(vec![a, b, d]);
                }
            }
        }
        for s in &subsets {
            let kinds = std::iter::once(SumKind::Full).chain((0..n).map(SumKind::Restricted));
            for kind in kinds {
                assert_eq!(
                    derivative_closed_form(c, kind, s).unwrap(),
                    derivative_oracle(c, kind, s).unwrap(),
                    "{} {kind:?} S={s:?}",
                    c.name()
                );
                checked += 1;
            }
        }
    }
    assert!(start.elapsed() < Duration::from_secs(60), "over 60s");
    report(
        6,
        start,
        &format!("closed forms equal enumeration on 50 codes ({checked} derivatives)"),
    );
}

#[test]
fn criterion_07_truncation_matches_theta() {
    let start = Instant::now();
    let pool = seeded_pool();
    let seeded_qualifying = pool
        .iter()
        .filter(|c| c.max_clean_order().order >= 3)
        .count();
    assert!(
        seeded_qualifying >= 5,
        "only {seeded_qualifying} qualifying seeded codes"
    );
    let herm = code::hermitian_16();
    let bch = code::bch_63_7();
    let mut verified = 0usize;
    for c in pool
        .iter()
        .chain([&herm, bch.linear()])
        .filter(|c| c.max_clean_order().order >= 3)
    {
        let tm = general_taylor(c, 3).unwrap();
        for i in 0..c.n() {
            let expected: BTreeSet<Vec<usize>> = theta(c, i, 3)
                .unwrap()
                .tuples()
                .iter()
                .map(|t| {
                    let mut t = t.clone();
                    t.sort_unstable();
                    t
                })
                .collect();
            let mut cubics = BTreeSet::new();
            let mut linear = 0usize;
            for term in tm.terms(i) {
                match term.vars() {
                    [v] => {
                        assert_eq!(*v as usize, i, "{} linear var", c.name());
                        assert_eq!(term.coeff(), 1.0, "{} linear coeff", c.name());
                        linear += 1;
                    }
                    [_, _] => panic!("{} has an order-2 term at {i}", c.name()),
                    vars @ [_, _, _] => {
                        assert_eq!(term.coeff(), 4.0, "{} cubic coeff", c.name());
                        cubics.insert(vars.iter().map(|&v| v as usize).collect());
                    }
                    vars => panic!("{} term of degree {}", c.name(), vars.len()),
                }
            }
            assert_eq!(linear, 1, "{} linear part", c.name());
            assert_eq!(cubics, expected, "{} coordinate {i}", c.name());
        }
        verified += 1;
    }
    assert!(start.elapsed() < Duration::from_secs(60), "over 60s");
    report(
        7,
        start,
        &format!(
            "order-3 terms equal 4 x theta on {verified} codes ({seeded_qualifying} seeded)"
        ),
    );
}

#[test]
fn criterion_08_codewords_self_decode() {
    let start = Instant::now();
    let bch = code::bch_63_7();
    let circ_clean = code::random_systematic_circulant(&RandomCodeSpec {
        k: 8,
        blocks: 1,
        weight: 3,
        seed: 1,
    })
    .unwrap();
    let circ_general = code::random_systematic_circulant(&RandomCodeSpec {
        k: 6,
        blocks: 1,
        weight: 2,
        seed: 2,
    })
    .unwrap();
    let rep = code::repetition(3);
    let ham = code::hamming_7_4();
    let herm = code::hermitian_16();
    let codes: Vec<&LinearCode> = vec![
        &rep,
        &ham,
        &herm,
        bch.linear(),
        &circ_clean,
        &circ_general,
    ];
    let maps: Vec<_> = codes
        .iter()
        .map(|c| {
            if c.max_clean_order().order >= 3 {
                clean_truncated_map(c, 3).unwrap()
            } else {
                general_taylor(c, 3).unwrap()
            }
        })
        .collect();
    for t in 0..1000u64 {
        let which = (t % codes.len() as u64) as usize;
        let c = codes[which];
        let mut rng = ratml::rng::stream(8, "selfdecode", &[t]);
        let m = random_word(c.k(), &mut rng);
        let x = c.encode(&m).unwrap();
        assert_eq!(ml_decode(c, &x, 0.1).unwrap().decoded, x, "{}", c.name());
        assert_eq!(
            approx_ml_decode(&maps[which], &x, 0.1).unwrap().decoded,
            x,
            "{}",
            c.name()
        );
    }
    assert!(start.elapsed() < Duration::from_secs(30), "over 30s");
    report(8, start, "1000 codewords map to themselves under ml and approx");
}

/// Independent bitwise decision rule: weigh every codeword by the channel
/// likelihood of the received word and compare the mass on each side of
/// every bit. Shares no code with the map evaluation path.
fn marginalization_oracle(c: &LinearCode, y: &BitVector, eps: f64) -> BitVector {
    let n = c.n();
    let mut num = vec![0.0f64; n];
    let mut denom = 0.0f64;
    c.for_each_codeword(|x| {
        let d = bit_errors(x, y);
        let w = eps.powi(d as i32) * (1.0 - eps).powi((n - d) as i32);
        denom += w;
        for i in x.ones() {
            num[i] += w;
        }
    })
    .unwrap();
    let mut out = BitVector::zeros(n);
    for i in 0..n {
        if num[i] >= denom - num[i] {
            out.set(i, true);
        }
    }
    out
}

#[test]
fn criterion_09_ml_equals_marginalization() {
    let start = Instant::now();
    let bch = code::bch_63_7();
    let circ_a = code::random_systematic_circulant(&RandomCodeSpec {
        k: 6,
        blocks: 1,
        weight: 3,
        seed: 9,
    })
    .unwrap();
    let circ_b = code::random_systematic_circulant(&RandomCodeSpec {
        k: 4,
        blocks: 2,
        weight: 2,
        seed: 3,
    })
    .unwrap();
    let rep = code::repetition(3);
    let ham = code::hamming_7_4();
    let herm = code::hermitian_16();
    let codes: Vec<&LinearCode> = vec![&rep, &ham, &herm, bch.linear(), &circ_a, &circ_b];
    for c in &codes {
        assert!(c.k() <= 12);
    }
    for t in 0..1000u64 {
        let c = codes[(t % codes.len() as u64) as usize];
        let mut rng = ratml::rng::stream(9, "mloracle", &[t]);
        let y = random_word(c.n(), &mut rng);
        let eps = 0.02 + 0.46 * ratml::rng::unit_f64(&mut rng);
        let got = ml_decode(c, &y, eps).unwrap().decoded;
        assert_eq!(got, marginalization_oracle(c, &y, eps), "{} t={t}", c.name());
    }
    assert!(start.elapsed() < Duration::from_secs(30), "over 30s");
    report(9, start, "1000 received words decide identically to the oracle");
}

#[test]
fn criterion_10_bch_error_rate_comparison() {
    let start = Instant::now();
    let fx = bch_fixture();
    assert!(fx.duration < Duration::from_secs(1200), "over 20min");
    let rows = parse_rows(&fx.csvs[0]);
    let ml = find(&rows, "ml", "0.111111", "0");
    let ap = find(&rows, "approx:3", "0.111111", "0");
    let bm = find(&rows, "bm", "0.111111", "0");
    println!(
        "criterion 10 estimates: ml {:.2e} [{:.2e},{:.2e}] approx {:.2e} [{:.2e},{:.2e}] bm {:.2e} [{:.2e},{:.2e}]",
        ml.pe, ml.lo, ml.hi, ap.pe, ap.lo, ap.hi, bm.pe, bm.lo, bm.hi
    );
    // Closeness of approx to exact ml: at 1e6 trials both worst-bit counts
    // are single digits, so the comparison is interval evidence, not point
    // estimates. The intervals must be consistent with approx <= 2 x ml.
    assert!(
        ap.lo <= 2.0 * ml.hi,
        "interval evidence refutes approx <= 2 x ml: [{:.2e},{:.2e}] vs ml [{:.2e},{:.2e}]",
        ap.lo,
        ap.hi,
        ml.lo,
        ml.hi
    );
    // Separation of the bounded-distance baseline: holds pointwise and the
    // intervals must be consistent with bm >= 10 x approx.
    assert!(
        bm.pe >= 10.0 * ap.pe,
        "bm {:.2e} is not 10 x approx {:.2e}",
        bm.pe,
        ap.pe
    );
    assert!(bm.hi >= 10.0 * ap.lo, "interval evidence refutes separation");
    // The three estimates keep the expected order.
    assert!(ml.pe <= ap.pe && ap.pe <= bm.pe, "ordering violated");
    report(
        10,
        start,
        &format!(
            "ml {:.1e} <= approx {:.1e} (intervals consistent with 2x) <= bm {:.1e} (>= 10x)",
            ml.pe, ap.pe, bm.pe
        ),
    );
}

#[test]
fn criterion_11_rate_sweep_trend() {
    let start = Instant::now();
    let fx = rate_fixture();
    assert!(fx.duration < Duration::from_secs(1800), "over 30min");
    let rows = parse_rows(&fx.csvs[0]);
    let half = find(&rows, "approx:3", "0.500000", "best");
    let third = find(&rows, "approx:3", "0.333333", "best");
    let quarter = find(&rows, "approx:3", "0.250000", "best");
    println!(
        "criterion 11 best-of-10 estimates: rate 1/2 {:.4}, rate 1/3 {:.4}, rate 1/4 {:.4}",
        half.pe, third.pe, quarter.pe
    );
    assert!(
        half.pe > third.pe && third.pe > quarter.pe,
        "best estimates do not strictly decrease: {} {} {}",
        half.pe,
        third.pe,
        quarter.pe
    );
    // Separation target: the rate-1/4 worst-bit estimate at least 10x below
    // the uncoded error rate 0.16. Exact bitwise decoding measures ~0.045
    // on these same draws (k = 16 is far from the asymptotic regime), so no
    // order-3 truncation can reach 0.016; the assert records that gap
    // honestly instead of hiding it.
    assert!(
        quarter.pe <= 0.016,
        "rate-1/4 worst-bit estimate {:.4} misses the 10x separation target 0.016 \
         (exact bitwise decoding measures ~0.045 on the same draws)",
        quarter.pe
    );
    report(
        11,
        start,
        &format!(
            "best pe {:.3} > {:.3} > {:.3} and rate 1/4 below 0.016",
            half.pe, third.pe, quarter.pe
        ),
    );
}

#[test]
fn criterion_12_worker_count_invariance() {
    let start = Instant::now();
    let bch = bch_fixture();
    let rates = rate_fixture();
    assert_eq!(bch.csvs[0], bch.csvs[1], "bch csv differs at workers 4");
    assert_eq!(bch.csvs[0], bch.csvs[2], "bch csv differs at workers 8");
    assert_eq!(rates.csvs[0], rates.csvs[1], "rate csv differs at workers 4");
    assert_eq!(rates.csvs[0], rates.csvs[2], "rate csv differs at workers 8");
    report(
        12,
        start,
        &format!(
            "byte-identical csvs across workers 1/4/8 ({} and {} bytes)",
            bch.csvs[0].len(),
            rates.csvs[0].len()
        ),
    );
}
