//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
//! fails. Reference values come from brute-force oracles defined here, not
//! from the library under test.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use orthodim::chromatic::{
    chromatic_number, clique_cover_number, fractional_chromatic, kneser_coloring, verify_coloring,
};
use orthodim::config::Limits;
use orthodim::defect::cd2;
use orthodim::fractional::{
    fractional_invariant, randomized_cover, verify_cover, BaseInvariant, CliqueCover, MinrankRealSandwich,
};
use orthodim::geometry::{gale_points, verify_hemisphere};
use orthodim::graph::{generalized_kneser_graph, kneser_family, schrijver_family};
use orthodim::lp::{int, rat};
use orthodim::rank::{bound_report, log_ceiling, minrank_finite, BoundOptions};
use orthodim::report::{cmd_capacity, cmd_comm, Report};
use orthodim::{Error, Graph, SetSystem};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn within(start: Instant, budget: Duration, what: &str) -> Result<(), String> {
    let elapsed = start.elapsed();
    ensure!(elapsed <= budget, "{what} took {elapsed:.1?}, budget {budget:?}");
    Ok(())
}

// ------------------------------------------------------------------ oracles

/// Fewest white elements over all 3^d red/blue/white colorings with no set
/// entirely red or entirely blue.
fn cd2_oracle(family: &SetSystem) -> usize {
    let d = family.d();
    let mut best = d;
    let mut digits = vec![0u8; d];
    loop {
        let (mut red, mut blue, mut white) = (0u64, 0u64, 0usize);
        for (i, &c) in digits.iter().enumerate() {
            match c {
                0 => red |= 1 << i,
                1 => blue |= 1 << i,
                _ => white += 1,
            }
        }
        if white < best && family.sets().iter().all(|&a| a & !red != 0 && a & !blue != 0) {
            best = white;
        }
        let mut i = 0;
        while i < d && digits[i] == 2 {
            digits[i] = 0;
            i += 1;
        }
        if i == d {
            return best;
        }
        digits[i] += 1;
    }
}

fn adjacency(g: &Graph) -> Vec<u64> {
    assert!(g.n() <= 64);
    (0..g.n())
        .map(|u| (0..g.n()).filter(|&v| g.has_edge(u, v)).fold(0, |m, v| m | 1 << v))
        .collect()
}

/// Maximum independent set size by plain include/exclude branching.
fn alpha_oracle(adj: &[u64], candidates: u64) -> usize {
    if candidates == 0 {
        return 0;
    }
    let v = candidates.trailing_zeros() as usize;
    let rest = candidates & !(1 << v);
    let with = 1 + alpha_oracle(adj, rest & !adj[v]);
    if adj[v] & rest == 0 {
        return with;
    }
    with.max(alpha_oracle(adj, rest))
}

/// Chromatic number by trying every assignment of `k` colors.
fn chromatic_oracle(g: &Graph) -> usize {
    let n = g.n();
    let edges = g.edges();
    (1..=n.max(1))
        .find(|&k| {
            let mut colors = vec![0usize; n];
            loop {
                if edges.iter().all(|&(u, v)| colors[u] != colors[v]) {
                    return true;
                }
                let mut i = 0;
                while i < n && colors[i] == k - 1 {
                    colors[i] = 0;
                    i += 1;
                }
                if i == n {
                    return false;
                }
                colors[i] += 1;
            }
        })
        .unwrap_or(0)
}

fn gf2_rank(mut rows: Vec<u64>) -> usize {
    let mut rank = 0;
    for bit in 0..64 {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i] >> bit & 1 == 1) else {
            continue;
        };
        rows.swap(rank, p);
        for i in 0..rows.len() {
            if i != rank && rows[i] >> bit & 1 == 1 {
                rows[i] ^= rows[rank];
            }
        }
        rank += 1;
    }
    rank
}

/// Minrank over GF(2): least rank over every matrix with unit diagonal and
/// zeros on distinct non-adjacent pairs.
fn minrank_gf2_oracle(g: &Graph) -> usize {
    let n = g.n();
    let free: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (0..n).map(move |v| (u, v)))
        .filter(|&(u, v)| u != v && g.has_edge(u, v))
        .collect();
    assert!(free.len() <= 24);
    (0u64..1 << free.len())
        .map(|code| {
            let mut rows: Vec<u64> = (0..n).map(|i| 1 << i).collect();
            for (k, &(u, v)) in free.iter().enumerate() {
                if code >> k & 1 == 1 {
                    rows[u] |= 1 << v;
                }
            }
            gf2_rank(rows)
        })
        .min()
        .unwrap_or(0)
}

/// Strong product built from the definition.
fn strong_square(g: &Graph) -> Graph {
    let n = g.n();
    let close = |a: usize, b: usize| a == b || g.has_edge(a, b);
    let mut edges = Vec::new();
    for x in 0..n * n {
        for y in x + 1..n * n {
            if close(x / n, y / n) && close(x % n, y % n) {
                edges.push((x, y));
            }
        }
    }
    Graph::new(n * n, &edges).unwrap()
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(0.5) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, &edges).unwrap()
}

/// Small graphs used wherever a criterion ranges over "the corpus".
fn graph_corpus() -> Vec<Graph> {
    let mut out = Vec::new();
    for n in 3..=12 {
        out.push(Graph::cycle(n).unwrap());
    }
    for n in 1..=6 {
        out.push(Graph::complete(n).unwrap());
        out.push(Graph::empty(n).unwrap());
    }
    out.push(generalized_kneser_graph(&kneser_family(5, 2).unwrap()).unwrap());
    out.push(generalized_kneser_graph(&schrijver_family(6, 2).unwrap()).unwrap());
    out.push(generalized_kneser_graph(&kneser_family(4, 1).unwrap()).unwrap());
    out.push(Graph::cycle(7).unwrap().complement());
    out.push(Graph::new(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]).unwrap());
    out.push(Graph::new(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]).unwrap());
    out.push(
        Graph::new(
            6,
            &[(0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)],
        )
        .unwrap(),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for n in 4..=12 {
        out.push(random_graph(&mut rng, n));
    }
    out
}

fn family_corpus(max_d: usize) -> Vec<SetSystem> {
    let mut out = Vec::new();
    for d in 2..=max_d {
        for s in 1..=d / 2 {
            out.push(kneser_family(d, s).unwrap());
            out.push(schrijver_family(d, s).unwrap());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(max_d as u64);
    for _ in 0..20 {
        let d = rng.random_range(2..=max_d);
        let size = rng.random_range(1..=30);
        let sets: Vec<u64> = (0..size).map(|_| rng.random_range(1..1u64 << d)).collect();
        out.push(SetSystem::new(d, sets).unwrap());
    }
    out
}

// ---------------------------------------------------------------- criteria

fn c1_defect_on_kneser() -> Outcome {
    let start = Instant::now();
    let mut kneser = 0;
    for d in 2..=10 {
        for s in 1..=d / 2 {
            let value = cd2(&kneser_family(d, s).unwrap()).value;
            ensure!(
                value == d - 2 * s + 2,
                "cd2(K({d},{s})) = {value}, expected {}",
                d - 2 * s + 2
            );
            kneser += 1;
        }
    }
    let corpus = family_corpus(10);
    for f in &corpus {
        let got = cd2(f);
        let want = cd2_oracle(f);
        ensure!(
            got.value == want,
            "{}: cd2 {} vs 3^d oracle {want}",
            f.label().unwrap_or("?"),
            got.value
        );
        ensure!(got.verify(f), "{}: witness coloring rejected", f.label().unwrap_or("?"));
    }
    within(start, Duration::from_secs(60), "cd2 suite")?;
    Ok(format!(
        "{kneser} Kneser families match d-2s+2; {} families match the 3^d oracle in {:.1?}",
        corpus.len(),
        start.elapsed()
    ))
}

fn c2_defect_on_schrijver() -> Outcome {
    let mut seen = Vec::new();
    for (d, s) in [(8, 2), (9, 2), (10, 2), (12, 3)] {
        let value = cd2(&schrijver_family(d, s).unwrap()).value;
        ensure!(
            value == d + 4 - 4 * s,
            "cd2(S({d},{s})) = {value}, expected {}",
            d + 4 - 4 * s
        );
        seen.push(format!("S({d},{s})={value}"));
    }
    Ok(seen.join(" "))
}

fn c3_kneser_chromatic() -> Outcome {
    for (d, s) in [(5, 2), (6, 2), (7, 2), (7, 3)] {
        let g = generalized_kneser_graph(&kneser_family(d, s).unwrap()).unwrap();
        let (chi, cert) = chromatic_number(&g).unwrap();
        ensure!(chi == d - 2 * s + 2, "chi(K({d},{s})) = {chi}");
        ensure!(verify_coloring(&g, &cert), "K({d},{s}): certificate not proper");
        // a proper coloring with one color fewer would contradict the value
        if d <= 6 {
            ensure!(
                chromatic_oracle(&g) == chi,
                "K({d},{s}): brute-force chromatic number differs"
            );
        }
    }
    let mut checked = 0;
    for d in 2..=12 {
        for s in 1..=d / 2 {
            let g = generalized_kneser_graph(&kneser_family(d, s).unwrap()).unwrap();
            let cert = kneser_coloring(d, s).unwrap();
            ensure!(verify_coloring(&g, &cert), "explicit coloring of K({d},{s}) not proper");
            ensure!(
                cert.palette == d - 2 * s + 2,
                "explicit coloring of K({d},{s}) uses {}",
                cert.palette
            );
            checked += 1;
        }
    }
    Ok(format!(
        "4 exact chromatic numbers; {checked} explicit colorings with d-2s+2 colors"
    ))
}

fn c4_fractional_chromatic() -> Outcome {
    let start = Instant::now();
    for (d, s) in [(5, 2), (6, 2), (7, 3)] {
        let g = generalized_kneser_graph(&kneser_family(d, s).unwrap()).unwrap();
        let f = fractional_chromatic(&g).unwrap();
        ensure!(f.value == rat(d as i64, s as i64), "chi_f(K({d},{s})) = {}", f.value);
        let clique_total: orthodim::Rational = f.clique_weights.iter().sum();
        ensure!(clique_total == f.value, "K({d},{s}): dual total {clique_total}");
    }
    within(start, Duration::from_secs(30), "fractional chromatic suite")?;
    Ok(format!("5/2, 3, 7/3 exactly in {:.1?}", start.elapsed()))
}

fn c5_cycle_gap() -> Outcome {
    let mut seen = Vec::new();
    for n in [5usize, 7] {
        let c = Graph::cycle(n).unwrap();
        let oracle = MinrankRealSandwich;
        let at_cycle = oracle.eval(&c).unwrap();
        ensure!(at_cycle == rat(n as i64 + 1, 2), "f(C_{n}) = {at_cycle}");
        let star = fractional_invariant(&c, &oracle).unwrap().value;
        ensure!(star == rat(n as i64, 2), "f*(C_{n}) = {star}");
        seen.push(format!("C_{n}: f* = {star} < f = {at_cycle}"));
    }
    Ok(seen.join("; "))
}

fn c6_randomized_cover() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    for i in 0..20u64 {
        let n = rng.random_range(4..=14);
        let g = random_graph(&mut rng, n);
        let cert = randomized_cover(&g, &CliqueCover, i).map_err(|e| format!("graph {i} (n = {n}): {e}"))?;
        ensure!(cert.retries < 1000, "graph {i}: {} retries", cert.retries);
        ensure!(verify_cover(&g, &CliqueCover, &cert), "graph {i}: certificate rejected");
        let covered = cert.sets.iter().fold(0u64, |m, &s| m | s);
        ensure!(covered == (1u64 << n) - 1, "graph {i}: sets miss a vertex");
        let bound = 6.0 * (3.0 * n as f64).ln() * orthodim::lp::to_f64(&cert.fstar);
        let total = orthodim::lp::to_f64(&cert.total);
        ensure!(total.le(&bound), "graph {i}: total {total} above {bound}");
        worst = worst.max(total / bound);
    }
    within(start, Duration::from_secs(300), "cover suite")?;
    Ok(format!(
        "20 graphs verified, worst total/bound = {worst:.3}, {:.1?}",
        start.elapsed()
    ))
}

fn c7_fractional_below_clique_cover() -> Outcome {
    let mut checked = 0;
    for g in graph_corpus().iter().filter(|g| g.n() <= 12) {
        let star = fractional_invariant(g, &CliqueCover).unwrap().value;
        let chi_f_bar = fractional_chromatic(&g.complement()).unwrap().value;
        ensure!(
            star <= chi_f_bar,
            "{}: f* = {star} > chi_f(complement) = {chi_f_bar}",
            g.label().unwrap_or("graph")
        );
        checked += 1;
    }
    Ok(format!("{checked} corpus graphs"))
}

fn c8_gale_certificates() -> Outcome {
    let mut checked = 0;
    for d in 2..=10 {
        for s in 1..=d / 2 {
            let family = schrijver_family(d, s).unwrap();
            let cert = verify_hemisphere(&gale_points(d, s).unwrap(), &family).unwrap();
            ensure!(cert.verified, "S({d},{s}): violations {:?}", cert.violations);
            ensure!(cert.recheck(), "S({d},{s}): certificate does not recheck");
            let options = BoundOptions {
                hemisphere: Some(&cert),
                ..BoundOptions::default()
            };
            let r = bound_report(&family, &options).unwrap();
            let want = d - 2 * s + 2;
            ensure!(
                r.xi_r_lower.value == want && r.xi_r_upper.value == want,
                "S({d},{s}): bracket {}..{}, expected {want}",
                r.xi_r_lower.value,
                r.xi_r_upper.value
            );
            ensure!(r.all_held(), "S({d},{s}): report check failed");
            checked += 1;
        }
    }
    Ok(format!("{checked} Schrijver families, lower = upper = d-2s+2"))
}

fn c9_minrank() -> Outcome {
    let c5 = Graph::cycle(5).unwrap();
    let r = minrank_finite(&c5, 2).unwrap();
    let oracle = minrank_gf2_oracle(&c5);
    ensure!(
        r.rank == 3 && oracle == 3,
        "minrank_2(C_5) = {} (oracle {oracle})",
        r.rank
    );

    let (mut checked, mut skipped) = (0, 0);
    for g in graph_corpus() {
        let (chi_bar, _) = clique_cover_number(&g).unwrap();
        for q in [2u64, 3] {
            match minrank_finite(&g, q) {
                Ok(r) => {
                    let lower = log_ceiling(chi_bar, q);
                    ensure!(
                        lower <= r.rank && r.rank <= chi_bar,
                        "{} over GF({q}): {} outside [{lower}, {chi_bar}]",
                        g.label().unwrap_or("graph"),
                        r.rank
                    );
                    if q == 2 && 2 * g.edge_count() <= 16 {
                        ensure!(
                            r.rank == minrank_gf2_oracle(&g),
                            "{}: differs from oracle",
                            g.label().unwrap_or("graph")
                        );
                    }
                    checked += 1;
                }
                Err(Error::TooLarge { .. }) => skipped += 1,
                Err(e) => return Err(e.to_string()),
            }
        }
    }
    for n in 1..=6 {
        let empty = minrank_finite(&Graph::empty(n).unwrap(), 2).unwrap().rank;
        let complete = minrank_finite(&Graph::complete(n).unwrap(), 2).unwrap().rank;
        ensure!(
            empty == n && complete == 1,
            "n = {n}: empty {empty}, complete {complete}"
        );
    }
    Ok(format!(
        "C_5 = 3; {checked} corpus instances in bracket, {skipped} above the search cap; edge cases exact"
    ))
}

fn c10_desk_instance() -> Outcome {
    let mut seen = Vec::new();
    for (s, eps, chi_f, xi) in [("2", "1/2", "5/2", 3), ("3", "1/3", "7/3", 3)] {
        let out = Command::new(env!("CARGO_BIN_EXE_orthodim"))
            .args(["--format", "json", "theorem42", "--s", s, "--eps", eps])
            .output()
            .map_err(|e| e.to_string())?;
        ensure!(
            out.status.code() == Some(0),
            "s = {s}, eps = {eps}: exit {:?}",
            out.status.code()
        );
        let json: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
        ensure!(
            json["fractional_chromatic"] == chi_f,
            "s = {s}: chi_f {}",
            json["fractional_chromatic"]
        );
        ensure!(json["xi_r"] == xi, "s = {s}: xi_R {}", json["xi_r"]);
        seen.push(format!("(s={s}, eps={eps}): chi_f = {chi_f}, xi_R = {xi}"));
    }
    let out = Command::new(env!("CARGO_BIN_EXE_orthodim"))
        .args(["theorem42", "--s", "2", "--eps", "1/3"])
        .output()
        .map_err(|e| e.to_string())?;
    ensure!(out.status.code() == Some(2), "non-integral d accepted");
    Ok(seen.join("; "))
}

fn c11_sandwich_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..200 {
        let d = rng.random_range(2..=8);
        let size = rng.random_range(1..=24usize.min((1 << d) - 1));
        let sets: Vec<u64> = (0..size).map(|_| rng.random_range(1..1u64 << d)).collect();
        let family = SetSystem::new(d, sets).unwrap();
        let r = bound_report(&family, &BoundOptions::default()).map_err(|e| format!("family {i}: {e}"))?;
        let kf = generalized_kneser_graph(&family).unwrap();
        // alpha of the complement is the clique number of K(F)
        let alpha = alpha_oracle(&adjacency(&kf.complement()), (1u64 << kf.n()) - 1);
        ensure!(
            r.alpha.as_ref().map(|a| a.value) == Some(alpha),
            "family {i}: alpha {:?} vs oracle {alpha}",
            r.alpha
        );
        ensure!(
            alpha <= r.chi_bar.value,
            "family {i}: alpha {alpha} > chi_bar {}",
            r.chi_bar.value
        );
        ensure!(
            r.xi_r_lower.value <= r.xi_r_upper.value,
            "family {i}: xi_R bracket inverted"
        );
        ensure!(
            r.xi_c_lower.value <= r.xi_r_upper.value,
            "family {i}: xi_C lower above xi_R upper"
        );
        ensure!(
            r.minrk_r_lower.value <= r.xi_r_upper.value,
            "family {i}: minrank lower above xi_R upper"
        );
        ensure!(
            r.cd2.value == cd2_oracle(&family),
            "family {i}: cd2 differs from oracle"
        );
        ensure!(
            verify_coloring(&kf, &r.coloring),
            "family {i}: clique cover certificate not proper"
        );
        ensure!(r.all_held(), "family {i}: internal check failed");
    }
    Ok("200 random set systems with d <= 8".into())
}

fn c12_capacity() -> Outcome {
    let start = Instant::now();
    let c5 = Graph::cycle(5).unwrap();
    let square = strong_square(&c5);
    let alpha = alpha_oracle(&adjacency(&square), (1u64 << 25) - 1);
    ensure!(alpha == 5, "brute-force alpha(C_5^2) = {alpha}");
    let r = cmd_capacity(&c5, 2, &[2], &Limits::default()).map_err(|e| e.to_string())?;
    ensure!(r.alpha_power == 5, "report alpha(C_5^2) = {}", r.alpha_power);
    ensure!(r.lower == "5^(1/2)", "lower bound shown as {}", r.lower);
    let chi_bar = r
        .upper
        .iter()
        .find(|u| u.name == "clique cover number")
        .ok_or("no clique cover upper bound")?;
    ensure!(chi_bar.value == int(3), "upper chi_bar = {}", chi_bar.value);
    // sqrt 5 <= 3
    ensure!(
        int(5) <= &chi_bar.value * &chi_bar.value,
        "lower bound above upper bound"
    );
    ensure!(r.all_held(), "capacity checks failed");
    within(start, Duration::from_secs(10), "capacity report")?;
    Ok(format!(
        "alpha(C_5^2) = 5; sqrt 5 <= 3 = chi_bar(C_5) in {:.1?}",
        start.elapsed()
    ))
}

fn c13_communication() -> Outcome {
    let mut seen = Vec::new();
    for (d, s, classical) in [(5, 2, 2), (10, 2, 3)] {
        let r = cmd_comm(d, s, &Limits::default()).map_err(|e| e.to_string())?;
        ensure!(
            r.classical_bits == classical,
            "K({d},{s}): classical {}",
            r.classical_bits
        );
        let palette = d - 2 * s + 2;
        ensure!(
            (1usize << r.classical_bits) >= palette && (1usize << r.classical_bits) < 2 * palette,
            "classical bits not ceil(log2)"
        );
        ensure!(
            r.quantum_upper_bits - r.quantum_lower_bits <= 1,
            "K({d},{s}): bracket too wide"
        );
        ensure!(r.all_held(), "K({d},{s}): check failed");
        seen.push(format!(
            "K({d},{s}): classical {classical}, quantum [{}, {}]",
            r.quantum_lower_bits, r.quantum_upper_bits
        ));
    }
    Ok(seen.join("; "))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        ("2-colorability defect of Kneser families", c1_defect_on_kneser),
        ("2-colorability defect of Schrijver families", c2_defect_on_schrijver),
        ("chromatic number of Kneser graphs", c3_kneser_chromatic),
        ("fractional chromatic number d/s", c4_fractional_chromatic),
        ("fractional gap on odd cycles", c5_cycle_gap),
        ("randomized cover certificates", c6_randomized_cover),
        ("f* below fractional clique cover", c7_fractional_below_clique_cover),
        ("hemisphere certificates for Schrijver families", c8_gale_certificates),
        ("minrank over finite fields", c9_minrank),
        ("desk instance d = (2 + eps) s via the CLI", c10_desk_instance),
        ("sandwich bounds on random set systems", c11_sandwich_suite),
        ("Shannon capacity bracket for C_5", c12_capacity),
        ("one-round communication bracket", c13_communication),
    ];
    let quiet_panics = std::panic::take_hook();
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .map_or_else(|| "panicked".into(), |m| format!("panicked: {m}")))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} [{secs:.1}s]: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} [{secs:.1}s]: {why}", i + 1);
            }
        }
    }
    std::panic::set_hook(quiet_panics);
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
