use std::time::{Duration, Instant};

use dagproof::compress::{compress_proof, CompressError, CompressionTrace};
use dagproof::formula::{Formula, Sequent};
use dagproof::hsc::{sc_to_nd, Prover, ProverError, SequentProof};
use dagproof::nd::Deduction;
use serde::Serialize;

use crate::input::{input_error, Failure, Outcome};

#[derive(Debug, Clone, Copy)]
pub struct Limits {
    pub thread_cap: usize,
    pub timeout: Option<Duration>,
    pub max_worlds: usize,
}

impl Limits {
    pub fn prover(&self) -> Prover {
        match self.timeout {
            Some(t) => Prover::with_deadline(Instant::now() + t),
            None => Prover::new(),
        }
    }
}

/// Search for a proof of `⇒ f`; `Ok(None)` when there is none.
pub fn prove(f: &Formula, limits: &Limits) -> Outcome<Option<SequentProof>> {
    match limits.prover().prove(&Sequent::goal(f.clone())) {
        Ok(p) => Ok(p),
        Err(ProverError::Timeout) => Err(Failure::Resource("proof search timed out".into())),
        Err(ProverError::NotImplicational) => Err(input_error(
            "formula is not purely implicational; apply `translate` first",
        )),
    }
}

pub fn translate(pr: &SequentProof) -> Outcome<Deduction> {
    sc_to_nd(pr).map_err(|e| Failure::Resource(format!("natural deduction translation: {e}")))
}

pub fn compress(t: &Deduction, limits: &Limits) -> Outcome<CompressionTrace> {
    compress_proof(t, limits.thread_cap).map_err(|e| match e {
        CompressError::ThreadCap { .. } => Failure::Resource(e.to_string()),
        CompressError::NotTree | CompressError::SepPresent { .. } | CompressError::LocallyIncorrect => {
            input_error(e)
        }
        _ => Failure::Negative(format!("compression failed: {e}")),
    })
}

/// One row of a benchmark or batch CSV.
#[derive(Debug, Clone, Default, Serialize)]
pub struct RunRecord {
    pub id: String,
    /// `|ρ|`.
    pub weight: usize,
    pub sc_height: Option<usize>,
    pub height: Option<usize>,
    pub phi: Option<usize>,
    pub size_tree: Option<usize>,
    pub size_prime: Option<usize>,
    pub size_flat: Option<usize>,
    pub size_star: Option<usize>,
    pub proved: Option<bool>,
    pub coherent: Option<bool>,
    /// Every stage verdict holds, size bounds included.
    pub certified: Option<bool>,
    /// Agreement with the independent oracle for this corpus.
    pub agrees: Option<bool>,
    pub error: Option<String>,
    #[serde(skip)]
    pub durations: Durations,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Durations {
    pub prove: Duration,
    pub translate: Duration,
    pub compress: Duration,
}

/// Prove, translate and compress `f`, filling in the record. Failures after
/// the proof search are recorded, not returned.
pub fn record(id: String, f: &Formula, limits: &Limits) -> RunRecord {
    let mut r = RunRecord { id, weight: f.weight(), ..RunRecord::default() };
    let start = Instant::now();
    let proof = prove(f, limits);
    r.durations.prove = start.elapsed();
    match proof {
        Ok(Some(pr)) => {
            r.proved = Some(true);
            r.sc_height = Some(pr.height());
            run_proof(&mut r, &pr, limits);
        }
        Ok(None) => r.proved = Some(false),
        Err(e) => r.error = Some(e.to_string()),
    }
    r
}

fn run_proof(r: &mut RunRecord, pr: &SequentProof, limits: &Limits) {
    let start = Instant::now();
    let tree = translate(pr);
    r.durations.translate = start.elapsed();
    let tree = match tree {
        Ok(t) => t,
        Err(e) => {
            r.certified = Some(false);
            r.error = Some(e.to_string());
            return;
        }
    };
    let start = Instant::now();
    let trace = compress(&tree, limits);
    r.durations.compress = start.elapsed();
    match trace {
        Ok(trace) => {
            let b = trace.bounds;
            r.height = Some(b.h);
            r.phi = Some(b.phi);
            r.size_tree = Some(b.w_tree);
            r.size_prime = Some(b.w_prime);
            r.size_flat = Some(b.w_flat);
            r.size_star = Some(b.w_star);
            r.coherent = Some(trace.verdicts.coherent);
            r.certified = Some(trace.certified() && b.prime_within() && b.flat_within());
        }
        Err(e) => {
            r.certified = Some(false);
            r.error = Some(e.to_string());
        }
    }
}

/// Serialize records as a versioned CSV followed by a summary comment.
pub fn write_csv(records: &[RunRecord], timings: bool) -> anyhow::Result<String> {
    let mut out = String::from("# dagproof-v1\n");
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<&str> = vec![
        "id", "weight", "sc_height", "height", "phi", "size_tree", "size_prime", "size_flat", "size_star",
        "proved", "coherent", "certified", "agrees", "error",
    ];
    if timings {
        header.extend(["prove_ms", "translate_ms", "compress_ms"]);
    }
    w.write_record(&header)?;
    for r in records {
        let cell = |v: Option<String>| v.unwrap_or_default();
        let mut row = vec![
            r.id.clone(),
            r.weight.to_string(),
            cell(r.sc_height.map(|v| v.to_string())),
            cell(r.height.map(|v| v.to_string())),
            cell(r.phi.map(|v| v.to_string())),
            cell(r.size_tree.map(|v| v.to_string())),
            cell(r.size_prime.map(|v| v.to_string())),
            cell(r.size_flat.map(|v| v.to_string())),
            cell(r.size_star.map(|v| v.to_string())),
            cell(r.proved.map(|v| v.to_string())),
            cell(r.coherent.map(|v| v.to_string())),
            cell(r.certified.map(|v| v.to_string())),
            cell(r.agrees.map(|v| v.to_string())),
            cell(r.error.clone()),
        ];
        if timings {
            let ms = |d: Duration| format!("{:.3}", d.as_secs_f64() * 1000.0);
            row.extend([ms(r.durations.prove), ms(r.durations.translate), ms(r.durations.compress)]);
        }
        w.write_record(&row)?;
    }
    out.push_str(&String::from_utf8(w.into_inner()?)?);
    out.push_str(&summary(records));
    out.push('\n');
    Ok(out)
}

fn summary(records: &[RunRecord]) -> String {
    let count = |p: &dyn Fn(&RunRecord) -> bool| records.iter().filter(|r| p(r)).count();
    let max_ratio = |v: &dyn Fn(&RunRecord) -> Option<usize>| {
        records
            .iter()
            .filter_map(|r| v(r).map(|x| x as f64 / r.weight as f64))
            .fold(0.0f64, f64::max)
    };
    format!(
        "# summary rows={} proved={} certified={} uncertified={} disagreements={} max_height_ratio={:.4} max_star_ratio={:.4}",
        records.len(),
        count(&|r| r.proved == Some(true)),
        count(&|r| r.certified == Some(true)),
        count(&|r| r.certified == Some(false)),
        count(&|r| r.agrees == Some(false)),
        max_ratio(&|r| r.sc_height),
        max_ratio(&|r| r.size_star),
    )
}
