//! Acceptance criteria, run in order with one PASS/FAIL line each.
//!
//! Dataset-backed criteria read from `$PARTIAL_BALANCE_DATA` (default
//! `crates/core/tests/data`); `scripts/fetch-datasets.sh` fills it.

use std::io::Write;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use partial_balance::balance::{type_mean, undirected_balance, BalanceMode, BalanceTally};
use partial_balance::census::{census, choose3, enumerate_triads, TriadType};
use partial_balance::cli::{comparison, prepare};
use partial_balance::graph::{
    cancelled_pairs, project_undirected, InputFormat, PreprocessConfig, Sign, SignedDigraph,
};
use partial_balance::oracle;
use partial_balance::report::round2;
use partial_balance::signstats::{composition_directed, composition_undirected, metrics};

type Outcome = Result<String, String>;

/// Network, per-type (ratio, count) for 030T, 120D, 120U, 300, reported average.
type TableRow = (&'static str, [(f64, u64); 4], f64);

type Criterion = (&'static str, fn() -> Outcome);

fn data_dir() -> PathBuf {
    std::env::var_os("PARTIAL_BALANCE_DATA")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data")))
}

fn dataset(name: &str) -> Result<PathBuf, String> {
    let p = data_dir().join(name);
    if p.is_file() {
        Ok(p)
    } else {
        Err(format!(
            "dataset {} not found; run scripts/fetch-datasets.sh",
            p.display()
        ))
    }
}

fn within(label: &str, got: f64, want: f64, tol: f64, failures: &mut Vec<String>) {
    if (got - want).abs() > tol + 1e-12 {
        failures.push(format!("{label} = {got:.4}, expected {want} ± {tol}"));
    }
}

fn exact<T: PartialEq + std::fmt::Debug>(label: &str, got: T, want: T, failures: &mut Vec<String>) {
    if got != want {
        failures.push(format!("{label} = {got:?}, expected {want:?}"));
    }
}

fn verdict(summary: String, failures: Vec<String>) -> Outcome {
    if failures.is_empty() {
        Ok(summary)
    } else if summary.is_empty() {
        Err(failures.join("; "))
    } else {
        Err(format!("{}; {summary}", failures.join("; ")))
    }
}

fn highland() -> Outcome {
    let path = dataset("highland.tsv")?;
    let start = Instant::now();
    let prepared = prepare(&path, InputFormat::TsvSign, &PreprocessConfig::default())
        .map_err(|e| e.to_string())?;
    let g = &prepared.graph;
    let tally = BalanceTally::of_graph(g);
    let c = census(g);
    let und = undirected_balance(&prepared.projection);
    let comp = composition_directed(g);
    let m = metrics(g).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();

    let mut f = Vec::new();
    exact("transitive triads", tally.transitive_triads(), 68, &mut f);
    exact("300 triads", c.get(TriadType::T300), 68, &mut f);
    let type_mean = tally.type_mean().map_err(|e| e.to_string())?;
    within("partial balance", type_mean, 0.87, 0.005, &mut f);
    exact(
        "undirected balanced/imbalanced",
        (und.balanced, und.imbalanced),
        (24, 2),
        &mut f,
    );
    within(
        "undirected ratio",
        und.ratio.unwrap_or(f64::NAN),
        0.92,
        0.005,
        &mut f,
    );
    for (label, got, want) in [
        ("+++", comp.ppp, 0.28),
        ("+--", comp.pnn, 0.59),
        ("++-", comp.ppn, 0.03),
        ("---", comp.nnn, 0.10),
    ] {
        within(label, got, want, 0.01, &mut f);
    }
    within("density", m.density, 0.48, 0.005, &mut f);
    if elapsed >= Duration::from_secs(1) {
        f.push(format!("runtime {elapsed:?} >= 1s"));
    }
    verdict(
        format!(
            "{} nodes, {} edges, {} triads, balance {:.4}, undirected {}/{}, density {:.4}, {:?}",
            g.node_count(),
            g.edge_count(),
            tally.transitive_triads(),
            type_mean,
            und.balanced,
            und.imbalanced,
            m.density,
            elapsed
        ),
        f,
    )
}

fn bitcoin() -> Outcome {
    let mut f = Vec::new();
    let mut notes = Vec::new();
    for (name, file, want_mean, want_300, want_np) in [
        ("otc", "bitcoin-otc.csv", 0.88, 13_752.0, 0.86),
        ("alpha", "bitcoin-alpha.csv", 0.86, 9_894.0, 0.84),
    ] {
        let path = match dataset(file) {
            Ok(p) => p,
            Err(e) => {
                f.push(e);
                continue;
            }
        };
        let start = Instant::now();
        let prepared = prepare(&path, InputFormat::CsvRating, &PreprocessConfig::default())
            .map_err(|e| e.to_string())?;
        let tally = BalanceTally::of_graph(&prepared.graph);
        let elapsed = start.elapsed();
        let mean = tally.type_mean().map_err(|e| e.to_string())?;
        let np = tally.nonpartial().map_err(|e| e.to_string())?;
        let t300 = tally.type_balance()[3].triad_count as f64;
        within(&format!("{name} type-mean"), mean, want_mean, 0.03, &mut f);
        within(
            &format!("{name} non-partial"),
            np.ratio,
            want_np,
            0.03,
            &mut f,
        );
        if (t300 - want_300).abs() > 0.05 * want_300 {
            f.push(format!(
                "{name} 300 triads = {t300}, expected {want_300} ± 5%"
            ));
        }
        if elapsed >= Duration::from_secs(30) {
            f.push(format!("{name} runtime {elapsed:?} >= 30s"));
        }
        notes.push(format!(
            "{name}: built {}/{} -> giant {}/{} nodes/edges, 300={t300}, type-mean {mean:.4}, non-partial {:.4}, {elapsed:?}",
            prepared.built.node_count(),
            prepared.built.edge_count(),
            prepared.graph.node_count(),
            prepared.graph.edge_count(),
            np.ratio
        ));
    }
    verdict(notes.join(" | "), f)
}

fn aggregation_arithmetic() -> Outcome {
    #[rustfmt::skip]
    let rows: [TableRow; 10] = [
        ("Bitcoin-OTC",     [(0.91, 3706), (0.85, 2096), (0.83, 2910), (0.93, 13752)], 0.88),
        ("Bitcoin-Alpha",   [(0.82, 974), (0.82, 1142), (0.87, 1780), (0.92, 9894)], 0.86),
        ("Highland",        [(0.00, 0), (0.00, 0), (0.00, 0), (0.87, 68)], 0.87),
        ("House A",         [(0.67, 27), (0.85, 13), (1.00, 13), (1.00, 4)], 0.88),
        ("House B",         [(0.43, 21), (0.33, 6), (0.80, 15), (0.88, 4)], 0.61),
        ("House C",         [(0.82, 17), (1.00, 8), (1.00, 3), (1.00, 1)], 0.96),
        ("Enron-Morality",  [(0.91, 4514), (0.92, 2390), (0.92, 3615), (0.94, 3056)], 0.92),
        ("Enron-Sentiment", [(0.67, 4238), (0.68, 2384), (0.64, 3513), (0.70, 3056)], 0.68),
        ("Avocado-Morality",[(0.81, 8787), (0.86, 14111), (0.87, 26165), (0.93, 124371)], 0.87),
        ("Avocado-Sentiment",[(0.76, 8577), (0.81, 14276), (0.83, 28615), (0.90, 144865)], 0.82),
    ];
    let mut f = Vec::new();
    for (name, types, want) in rows {
        let ratios = types.map(|(r, n)| (n > 0).then_some(r));
        let got = round2(type_mean(&ratios).expect("at least one type present"));
        within(name, got, want, 0.005, &mut f);
    }
    verdict(format!("{} of 10 rows reproduced", 10 - f.len()), f)
}

fn oracle_sweep() -> Outcome {
    let mut graphs = 0;
    let mut bad = Vec::new();
    for (ni, n) in [5usize, 10, 20, 30].into_iter().enumerate() {
        for (ei, ep) in [0.2, 0.5].into_iter().enumerate() {
            for (qi, q) in [0.0, 0.3, 0.7].into_iter().enumerate() {
                for s in 0..100u64 {
                    let seed = (((ni * 2 + ei) * 3 + qi) as u64) * 1000 + s;
                    let g =
                        oracle::random_signed_digraph(n, ep, q, seed).map_err(|e| e.to_string())?;
                    let mismatches = oracle::check(&g).map_err(|e| e.to_string())?;
                    graphs += 1;
                    if !mismatches.is_empty() {
                        bad.push(format!("n={n} p={ep} q={q} seed={seed}: {}", mismatches[0]));
                    }
                }
            }
        }
    }
    let summary = format!("{graphs} graphs, {} mismatching", bad.len());
    bad.truncate(5);
    verdict(summary, bad)
}

fn properties() -> Outcome {
    let mut f = Vec::new();
    let mut instances = 0;
    for seed in 0..300u64 {
        let n = 3 + (seed % 23) as usize;
        let ep = [0.1, 0.3, 0.6, 0.9][(seed % 4) as usize];
        let q = [0.0, 0.2, 0.5, 0.8, 1.0][(seed % 5) as usize];
        let g =
            oracle::random_signed_digraph(n, ep, q, 10_000 + seed).map_err(|e| e.to_string())?;
        instances += 1;
        let tag = format!("seed {seed}");

        if census(&g).total() != choose3(n as u64) {
            f.push(format!("{tag}: census total"));
        }
        for t in enumerate_triads(&g) {
            let want = match t.triad_type {
                TriadType::T030T => 1,
                TriadType::T120D | TriadType::T120U => 2,
                TriadType::T300 => 6,
                _ => 0,
            };
            if t.triples.len() != want {
                f.push(format!(
                    "{tag}: {} has {} triples",
                    t.triad_type,
                    t.triples.len()
                ));
            }
        }

        let flipped = g.flipped();
        for (a, b) in [
            (composition_directed(&g), composition_directed(&flipped)),
            (
                composition_undirected(&project_undirected(&g)),
                composition_undirected(&project_undirected(&flipped)),
            ),
        ] {
            if a.total != b.total
                || a.counts != [b.counts[3], b.counts[2], b.counts[1], b.counts[0]]
            {
                f.push(format!("{tag}: sign flip"));
            }
            if a.total > 0 && (a.proportions().iter().sum::<f64>() - 1.0).abs() > 1e-9 {
                f.push(format!("{tag}: proportions"));
            }
        }

        let tally = BalanceTally::of_graph(&g);
        if tally.transitive_triads() > 0 {
            let np = tally.nonpartial().unwrap().ratio;
            if np > tally.triad_mean().unwrap() + 1e-12 {
                f.push(format!("{tag}: non-partial above triad-mean"));
            }
        }

        let pos_edges: Vec<_> = g.edges().map(|(u, v, _)| (u, v, Sign::Positive)).collect();
        let pos = SignedDigraph::from_index_edges(n, &pos_edges).unwrap();
        let t = BalanceTally::of_graph(&pos);
        if t.transitive_triads() > 0 {
            let scores = [
                t.overall(BalanceMode::TypeMean).unwrap(),
                t.overall(BalanceMode::TriadMean).unwrap(),
                t.nonpartial().unwrap().ratio,
            ];
            if scores != [1.0; 3] {
                f.push(format!("{tag}: all-positive scored {scores:?}"));
            }
        }
        let u = undirected_balance(&project_undirected(&pos));
        if u.triangles > 0 && u.ratio != Some(1.0) {
            f.push(format!("{tag}: all-positive undirected {:?}", u.ratio));
        }
    }
    let summary = format!("{instances} random instances");
    f.truncate(5);
    verdict(summary, f)
}

fn projection_rules() -> Outcome {
    use Sign::{Negative as N, Positive as P};
    let mut f = Vec::new();
    let g = SignedDigraph::from_edges([
        ("a", "b", P),
        ("b", "a", P),
        ("c", "d", N),
        ("d", "c", N),
        ("e", "f", P),
        ("f", "e", N),
        ("g", "h", N),
    ])
    .unwrap();
    let u = project_undirected(&g);
    let sign = |x: &str, y: &str| u.sign(u.index_of(x).ok()?, u.index_of(y).ok()?);
    exact("agreeing ++", sign("a", "b"), Some(P), &mut f);
    exact("agreeing --", sign("c", "d"), Some(N), &mut f);
    exact("mismatch", sign("e", "f"), None, &mut f);
    exact("single direction", sign("h", "g"), Some(N), &mut f);
    let cancelled: Vec<_> = cancelled_pairs(&g)
        .into_iter()
        .map(|(x, y)| (g.id(x), g.id(y)))
        .collect();
    exact("cancelled", cancelled, vec![("e", "f")], &mut f);

    // directed 3-cycle a->b->c->a next to a 030T on {c,d,e}
    let g = SignedDigraph::from_edges([
        ("a", "b", P),
        ("b", "c", P),
        ("c", "a", N),
        ("c", "d", P),
        ("d", "e", P),
        ("c", "e", P),
    ])
    .unwrap();
    let u = project_undirected(&g);
    let r = comparison("fixture", &g, &u, BalanceMode::TypeMean).map_err(|e| e.to_string())?;
    let tally = BalanceTally::of_graph(&g);
    exact("transitive triads", tally.transitive_triads(), 1, &mut f);
    exact("undirected triangles", r.undirected.triangles, 2, &mut f);
    exact(
        "undirected-only",
        r.undirected_only_triangles.clone(),
        vec![["a", "b", "c"].map(String::from)],
        &mut f,
    );
    exact("cycle class", census(&g).get(TriadType::T030C), 1, &mut f);
    exact(
        "verdict",
        r.verdict.as_str(),
        "directed != undirected",
        &mut f,
    );

    let mut sym = Vec::new();
    for (x, y, s) in [
        ("1", "2", P),
        ("2", "3", N),
        ("1", "3", N),
        ("3", "4", P),
        ("2", "4", N),
    ] {
        sym.extend([(x, y, s), (y, x, s)]);
    }
    let g = SignedDigraph::from_edges(sym).unwrap();
    let r = comparison(
        "symmetric",
        &g,
        &project_undirected(&g),
        BalanceMode::TypeMean,
    )
    .map_err(|e| e.to_string())?;
    exact(
        "symmetric verdict",
        r.verdict.as_str(),
        "directed = undirected",
        &mut f,
    );

    verdict(
        "agreement, mismatch, single-direction and 3-cycle fixtures".into(),
        f,
    )
}

fn perf_graph(n: usize, m: usize, seed: u64) -> SignedDigraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picks = index::sample(&mut rng, n * (n - 1), m);
    let mut edges: Vec<_> = picks
        .into_iter()
        .map(|k| {
            let u = k / (n - 1);
            let mut v = k % (n - 1);
            if v >= u {
                v += 1;
            }
            (u, v)
        })
        .collect();
    edges.sort_unstable();
    let edges: Vec<_> = edges
        .into_iter()
        .map(|(u, v)| {
            (
                u,
                v,
                if rng.gen_bool(0.3) {
                    Sign::Negative
                } else {
                    Sign::Positive
                },
            )
        })
        .collect();
    SignedDigraph::from_index_edges(n, &edges).unwrap()
}

fn best_of(threads: usize, g: &SignedDigraph) -> (Duration, usize) {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap();
    let mut best = Duration::MAX;
    let mut count = 0;
    for _ in 0..3 {
        let start = Instant::now();
        count = pool.install(|| enumerate_triads(g).len());
        best = best.min(start.elapsed());
    }
    (best, count)
}

fn performance() -> Outcome {
    let g = perf_graph(5_000, 35_000, 7);
    let (single, triads) = best_of(1, &g);
    let (four, _) = best_of(4, &g);
    let speedup = single.as_secs_f64() / four.as_secs_f64();
    let cores = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1);
    let mut f = Vec::new();
    if single >= Duration::from_secs(10) {
        f.push(format!("single-threaded {single:?} >= 10s"));
    }
    if speedup < 2.0 {
        f.push(format!(
            "speedup {speedup:.2}x at 4 workers < 2x ({cores} cores available)"
        ));
    }
    verdict(
        format!(
            "{} edges, {triads} triads, 1 worker {single:?}, 4 workers {four:?}",
            g.edge_count()
        ),
        f,
    )
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("1 highland tribes end-to-end", highland),
        ("2 bitcoin otc/alpha", bitcoin),
        ("3 type-mean aggregation arithmetic", aggregation_arithmetic),
        ("4 oracle equivalence", oracle_sweep),
        ("5 property suite", properties),
        ("6 undirected projection", projection_rules),
        ("7 performance gate", performance),
    ];
    let mut failed = 0;
    let mut out = std::io::stdout().lock();
    for (name, check) in criteria {
        let line = match check() {
            Ok(detail) => format!("PASS criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                format!("FAIL criterion {name}: {detail}")
            }
        };
        writeln!(out, "{line}").unwrap();
        out.flush().unwrap();
    }
    writeln!(
        out,
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    )
    .unwrap();
    if failed > 0 {
        std::process::exit(1);
    }
}
