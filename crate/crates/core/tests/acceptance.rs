//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use dagproof::compress::{
    compress_levels, compress_proof, insert_separation, Bounds, CleanseRoute, CompressionTrace, DEFAULT_THREAD_CAP,
};
use dagproof::corpus::{
    exhaustive_implicational, locally_correct_trees, random_full_language, random_provable, variable_names,
};
use dagproof::encode::{classical_sat, encode_hamiltonian, hamiltonian_oracle, kripke_valid, statman_translate};
use dagproof::formula::{DiGraph, Formula, Sequent};
use dagproof::hsc::{prove_lm, sc_to_nd, Prover, SequentProof};
use dagproof::nd::{check_local_correctness, measures, proves, proves_threads, unfold};

const UNFOLD_BUDGET: usize = 100_000;

struct Outcome {
    failures: Vec<String>,
    detail: String,
}

impl Outcome {
    fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Shared state: the provable formulas of criterion 1 and every pipeline run.
#[derive(Default)]
struct Runs {
    sweep: Vec<Formula>,
    sweep_proofs: Vec<(Formula, SequentProof)>,
    traces: Vec<(String, CompressionTrace)>,
    /// Stage sizes of every run, including runs that failed to cleanse.
    sizes: Vec<(String, Bounds)>,
    corpus_proofs: Vec<(Formula, SequentProof)>,
}

/// The compression checks shared by criteria 2 and 5.
fn certify(label: &str, pr: &SequentProof, runs: &mut Runs, failures: &mut Vec<String>) {
    let tree = match sc_to_nd(pr) {
        Ok(t) => t,
        Err(e) => return failures.push(format!("{label}: translation failed: {e}")),
    };
    let trace = match compress_proof(&tree, DEFAULT_THREAD_CAP) {
        Ok(t) => t,
        Err(e) => {
            // The size bounds concern the stages before cleansing; keep
            // measuring them.
            let lc = compress_levels(&tree).expect("sequent proofs translate to trees");
            let flat = insert_separation(&lc).flat;
            let m = measures(&tree);
            runs.sizes.push((
                label.to_string(),
                Bounds {
                    h: m.height,
                    phi: m.phi,
                    w_tree: m.weight,
                    w_prime: measures(&lc.prime).weight,
                    w_flat: measures(&flat).weight,
                    w_star: 0,
                },
            ));
            return failures.push(format!("{label}: compression failed: {e}"));
        }
    };
    let star = &trace.star;
    if star.has_sep() {
        failures.push(format!("{label}: result contains separation nodes"));
    }
    if !check_local_correctness(star).is_ok() {
        failures.push(format!("{label}: result is not locally correct"));
    }
    if !proves(star).unwrap_or(false) {
        failures.push(format!("{label}: result has open assumptions"));
    }
    match unfold(star, UNFOLD_BUDGET) {
        Ok(u) if proves_threads(&u.tree) => {}
        Ok(_) => failures.push(format!("{label}: unfolded result has an open thread")),
        Err(e) => failures.push(format!("{label}: unfolding failed: {e}")),
    }
    runs.sizes.push((label.to_string(), trace.bounds));
    runs.traces.push((label.to_string(), trace));
}

fn oracle_sweep(runs: &mut Runs) -> Outcome {
    let formulas = exhaustive_implicational(&variable_names(2), 7);
    let mut failures = Vec::new();
    for f in &formulas {
        let proof = prove_lm(&Sequent::goal(f.clone()));
        let verdict = kripke_valid(f, 6).expect("6 worlds is within bounds");
        match (&proof, verdict.countermodel()) {
            (Some(_), Some(m)) => failures.push(format!("{f}: proved and refuted by {}", serde_json::to_string(m).unwrap())),
            (None, None) => failures.push(format!("{f}: unproved without a countermodel")),
            _ => {}
        }
        if let Some(pr) = proof {
            runs.sweep.push(f.clone());
            runs.sweep_proofs.push((f.clone(), pr));
        }
    }
    Outcome { failures, detail: format!("{} formulas, {} provable", formulas.len(), runs.sweep.len()) }
}

fn round_trip(runs: &mut Runs) -> Outcome {
    let corpus = random_provable(2024, 200, 14, &variable_names(3), 1_000_000);
    let mut failures = Vec::new();
    if corpus.len() < 200 {
        failures.push(format!("corpus has only {} formulas", corpus.len()));
    }
    let sweep = std::mem::take(&mut runs.sweep);
    for f in corpus.iter().chain(&sweep) {
        let pr = prove_lm(&Sequent::goal(f.clone())).expect("corpus formulas are provable");
        certify(&f.to_string(), &pr, runs, &mut failures);
        runs.corpus_proofs.push((f.clone(), pr));
    }
    runs.sweep = sweep;
    let with_sep = runs.traces.iter().filter(|(_, t)| !t.sep_nodes.is_empty()).count();
    let searched = runs.traces.iter().filter(|(_, t)| t.route == CleanseRoute::Search).count();
    Outcome {
        failures,
        detail: format!(
            "{} pipeline runs, {with_sep} with separation nodes, {searched} resolved by search",
            runs.traces.len()
        ),
    }
}

fn hamiltonian_equivalence() -> Outcome {
    let mut failures = Vec::new();
    let mut graphs = 0;
    for n in 1..=4 {
        for g in DiGraph::enumerate_all(n) {
            graphs += 1;
            let oracle = hamiltonian_oracle(&g).unwrap();
            let sat = classical_sat(&encode_hamiltonian(&g)).unwrap();
            if oracle != sat {
                failures.push(format!("{}: oracle {oracle}, sat {sat}", g.to_json()));
            }
        }
    }
    Outcome { failures, detail: format!("{graphs} graphs") }
}

fn certificate_chain(runs: &mut Runs) -> Outcome {
    let mut failures = Vec::new();
    let mut proved = 0;
    let mut certified = 0;
    let mut slowest = Duration::ZERO;
    for n in 1..=3 {
        for g in DiGraph::enumerate_all(n) {
            if hamiltonian_oracle(&g).unwrap() {
                continue;
            }
            let label = g.to_json().to_string();
            let negated = Formula::imp(encode_hamiltonian(&g), Formula::Falsum);
            let goal = Sequent::goal(statman_translate(&negated));
            let start = Instant::now();
            let result = Prover::with_deadline(start + Duration::from_secs(60)).prove(&goal);
            slowest = slowest.max(start.elapsed());
            match result {
                Ok(Some(pr)) => {
                    proved += 1;
                    let before = failures.len();
                    certify(&label, &pr, runs, &mut failures);
                    certified += usize::from(failures.len() == before);
                }
                Ok(None) => failures.push(format!("{label}: translation not provable")),
                Err(e) => failures.push(format!("{label}: {e}")),
            }
        }
    }
    Outcome {
        failures,
        detail: format!("{proved} proved, {certified} certified, slowest proof search {:.2}s", slowest.as_secs_f64()),
    }
}

fn bounds(runs: &Runs) -> Outcome {
    let mut failures = Vec::new();
    let mut worst_prime = 0.0f64;
    let mut worst_flat = 0.0f64;
    for (label, b) in &runs.sizes {
        worst_prime = worst_prime.max(b.w_prime as f64 / (b.h * b.phi) as f64);
        worst_flat = worst_flat.max(b.w_flat as f64 / b.w_prime as f64);
        if !b.prime_within() {
            failures.push(format!("{label}: |prime| = {} > h*phi = {}*{}", b.w_prime, b.h, b.phi));
        }
        if !b.flat_within() {
            failures.push(format!("{label}: |flat| = {} > 2*|prime| = {}", b.w_flat, 2 * b.w_prime));
        }
    }
    Outcome {
        failures,
        detail: format!(
            "{} runs, max |prime|/(h*phi) = {worst_prime:.3}, max |flat|/|prime| = {worst_flat:.3}",
            runs.sizes.len()
        ),
    }
}

fn statman_properties() -> Outcome {
    let corpus = random_full_language(99, 200, 12, &variable_names(3));
    let mut failures = Vec::new();
    let mut valid = 0;
    for f in &corpus {
        let t = statman_translate(f);
        let w = f.weight();
        if t.weight() > w * w * w {
            failures.push(format!("{f}: weight {} exceeds {}", t.weight(), w * w * w));
        }
        let semantic = kripke_valid(f, 5).unwrap().countermodel().is_none();
        let proved = prove_lm(&Sequent::goal(t)).is_some();
        valid += usize::from(semantic);
        if semantic != proved {
            failures.push(format!("{f}: kripke {semantic}, prover {proved}"));
        }
    }
    Outcome { failures, detail: format!("{} formulas, {valid} valid", corpus.len()) }
}

fn thread_semantics() -> Outcome {
    let pool = exhaustive_implicational(&variable_names(2), 5);
    let trees = locally_correct_trees(&pool, 6);
    let mut failures = Vec::new();
    let mut closed = 0;
    for t in &trees {
        let direct = proves(t).unwrap();
        closed += usize::from(direct);
        if direct != proves_threads(t) {
            failures.push(format!("disagreement on\n{}", t.to_dot("tree")));
        }
    }
    Outcome { failures, detail: format!("{} trees, {closed} closed", trees.len()) }
}

fn height_envelope(runs: &Runs) -> Outcome {
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for (f, pr) in runs.sweep_proofs.iter().chain(&runs.corpus_proofs) {
        let (h, w) = (pr.height(), f.weight());
        worst = worst.max(h as f64 / w as f64);
        if h > 2 * w {
            failures.push(format!("{f}: height {h} > 2*{w}"));
        }
    }
    Outcome { failures, detail: format!("max height/weight = {worst:.3}") }
}

fn main() -> ExitCode {
    let mut runs = Runs::default();
    let mut all = true;
    let mut report = |n: usize, name: &str, run: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let o = run();
        let status = if o.pass() { "PASS" } else { "FAIL" };
        println!("{status} criterion {n}: {name} ({}; {:.1}s)", o.detail, start.elapsed().as_secs_f64());
        for f in o.failures.iter().take(10) {
            println!("    {f}");
        }
        if o.failures.len() > 10 {
            println!("    ... {} more", o.failures.len() - 10);
        }
        all &= o.pass();
    };
    report(1, "prover agrees with Kripke search", &mut || oracle_sweep(&mut runs));
    report(2, "compression round trip", &mut || round_trip(&mut runs));
    report(4, "Hamiltonian encoding matches the oracle", &mut hamiltonian_equivalence);
    report(5, "non-Hamiltonicity certificates", &mut || certificate_chain(&mut runs));
    report(3, "compression size bounds", &mut || bounds(&runs));
    report(6, "Statman translation properties", &mut statman_properties);
    report(7, "direct and thread semantics agree", &mut thread_semantics);
    report(8, "proof height envelope", &mut || height_envelope(&runs));
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
