use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use dagproof::compress::{CompressionTrace, TraceDocument};
use dagproof::corpus::{exhaustive_implicational, random_implicational, variable_names};
use dagproof::encode::{
    classical_sat, encode_hamiltonian, hamiltonian_oracle, kripke_valid, statman_translate, KripkeModel,
    KripkeVerdict,
};
use dagproof::formula::{parse_graph, DiGraph, Formula};
use dagproof::hsc::{check_sc_proof, SequentProof};
use dagproof::nd::{
    check_local_correctness, measures, open_assumptions, proves_modified, proves_with_choices, Deduction,
    ModifiedVerdict, ProofDocument,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::input::{
    from_json, input_error, parse_with_caret, read_file, read_formula_arg, read_text_or_file, Failure, Outcome,
};
use crate::pipeline::{self, Limits, RunRecord};
use crate::Format;

fn pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("documents serialize")
}

fn no_dot(command: &str) -> Failure {
    input_error(format!("`{command}` has no dot output"))
}

fn kripke(f: &Formula, limits: &Limits) -> Outcome<KripkeVerdict> {
    kripke_valid(f, limits.max_worlds).map_err(input_error)
}

fn model_text(m: &KripkeModel) -> String {
    let mut out = format!("worlds: {}\n", m.worlds());
    let order: Vec<String> = m.order().iter().map(|(i, j)| format!("w{i} <= w{j}")).collect();
    let _ = writeln!(out, "order: {}", order.join(", "));
    for w in 0..m.worlds() {
        let vars: Vec<&str> = m.true_at(w).iter().map(|v| &**v).collect();
        let _ = writeln!(out, "w{w}: {}", vars.join(" "));
    }
    out
}

fn model_dot(m: &KripkeModel) -> String {
    let mut out = String::from("digraph \"countermodel\" {\n");
    for w in 0..m.worlds() {
        let vars: Vec<&str> = m.true_at(w).iter().map(|v| &**v).collect();
        let _ = writeln!(out, "  w{w} [label=\"w{w}: {}\"];", vars.join(" "));
    }
    for (i, j) in m.order() {
        let _ = writeln!(out, "  w{i} -> w{j};");
    }
    out.push_str("}\n");
    out
}

pub fn prove(arg: &str, countermodel: bool, format: Option<Format>, limits: &Limits) -> Outcome {
    let f = read_formula_arg(arg)?;
    if let Some(pr) = pipeline::prove(&f, limits)? {
        match format.unwrap_or(Format::Json) {
            Format::Json => println!("{}", pretty(&pr)),
            Format::Text => print!("{}", pr.render()),
            Format::Dot => print!("{}", pipeline::translate(&pr)?.to_dot("proof")),
        }
        return Ok(());
    }
    if countermodel {
        match kripke(&f, limits)? {
            KripkeVerdict::Countermodel(m) => match format.unwrap_or(Format::Json) {
                Format::Json => println!("{}", pretty(&m)),
                Format::Text => print!("{}", model_text(&m)),
                Format::Dot => print!("{}", model_dot(&m)),
            },
            KripkeVerdict::NoCountermodel { max_worlds } => {
                eprintln!("no countermodel with at most {max_worlds} worlds")
            }
        }
    }
    Err(Failure::Negative(format!("not provable: {f}")))
}

pub fn translate(arg: &str, format: Option<Format>) -> Outcome {
    let f = read_formula_arg(arg)?;
    let t = statman_translate(&f);
    match format.unwrap_or(Format::Text) {
        Format::Text => println!("{t}"),
        Format::Json => println!(
            "{}",
            pretty(&json!({
                "input": f,
                "output": t,
                "input_weight": f.weight(),
                "output_weight": t.weight(),
            }))
        ),
        Format::Dot => return Err(no_dot("translate")),
    }
    Ok(())
}

pub fn encode(graph: &str, negate: bool, translate: bool, oracle: bool, format: Option<Format>) -> Outcome {
    let g = parse_graph(&read_file(graph)?).map_err(input_error)?;
    let mut f = encode_hamiltonian(&g);
    if negate {
        f = f.negate();
    }
    if translate {
        f = statman_translate(&f);
    }
    let verdict = if oracle {
        Some(hamiltonian_oracle(&g).map_err(input_error)?)
    } else {
        None
    };
    match format.unwrap_or(Format::Text) {
        Format::Text => {
            println!("{f}");
            if let Some(h) = verdict {
                println!("{}", if h { "Hamiltonian" } else { "non-Hamiltonian" });
            }
        }
        Format::Json => println!(
            "{}",
            pretty(&json!({ "graph": g.to_json(), "formula": f, "hamiltonian": verdict }))
        ),
        Format::Dot => return Err(no_dot("encode")),
    }
    Ok(())
}

pub fn oracle(arg: &str, format: Option<Format>, limits: &Limits) -> Outcome {
    let f = read_formula_arg(arg)?;
    let translated = (!f.is_purely_implicational()).then(|| statman_translate(&f));
    let provable = pipeline::prove(translated.as_ref().unwrap_or(&f), limits)?.is_some();
    let verdict = kripke(&f, limits)?;
    let agrees = provable == verdict.countermodel().is_none();
    match format.unwrap_or(Format::Json) {
        Format::Json => println!(
            "{}",
            pretty(&json!({
                "formula": f,
                "translated": translated,
                "provable": provable,
                "max_worlds": limits.max_worlds,
                "countermodel": verdict.countermodel(),
                "agrees": agrees,
            }))
        ),
        Format::Text => {
            println!("formula: {f}");
            if let Some(t) = &translated {
                println!("translated: {t}");
            }
            println!("provable: {provable}");
            match verdict.countermodel() {
                Some(m) => print!("countermodel:\n{}", model_text(m)),
                None => println!("no countermodel with at most {} worlds", limits.max_worlds),
            }
            println!("agrees: {agrees}");
        }
        Format::Dot => return Err(no_dot("oracle")),
    }
    if agrees {
        Ok(())
    } else {
        Err(Failure::Negative("prover and Kripke search disagree".into()))
    }
}

/// A tree-like proof from formula text, a proof document or a sequent proof.
fn tree_from_input(text: &str, limits: &Limits) -> Outcome<Deduction> {
    let text = text.trim();
    if !text.starts_with('{') {
        let f = parse_with_caret(text)?;
        let pr = pipeline::prove(&f, limits)?.ok_or_else(|| Failure::Negative(format!("not provable: {f}")))?;
        return pipeline::translate(&pr);
    }
    let value: Value = from_json(text).map_err(|e| input_error(format!("malformed JSON: {e}")))?;
    if value.get("nodes").is_some() {
        let doc: ProofDocument = serde_json::from_value(value).map_err(input_error)?;
        doc.to_deduction().map_err(input_error)
    } else if value.get("conclusion").is_some() {
        let pr: SequentProof = serde_json::from_value(value).map_err(input_error)?;
        if !check_sc_proof(&pr) {
            return Err(input_error("sequent proof does not check"));
        }
        pipeline::translate(&pr)
    } else {
        Err(input_error("expected a formula, a proof document or a sequent proof"))
    }
}

fn trace_text(trace: &CompressionTrace) -> String {
    let b = trace.bounds;
    let v = trace.verdicts;
    let mut out = String::new();
    let _ = writeln!(out, "formula: {}", trace.tree.root_formula());
    let _ = writeln!(out, "h = {}, phi = {}", b.h, b.phi);
    let _ = writeln!(out, "|tree| = {}, |prime| = {}, |flat| = {}, |star| = {}", b.w_tree, b.w_prime, b.w_flat, b.w_star);
    let _ = writeln!(out, "|prime| <= h*phi: {}", v.prime_bound);
    let _ = writeln!(out, "|flat| <= 2|prime|: {}", v.flat_bound);
    let _ = writeln!(out, "separation nodes: {}, threads: {}", trace.sep_nodes.len(), trace.threads);
    let _ = writeln!(out, "coherent: {}", v.coherent);
    let _ = writeln!(out, "star proves: {}", v.star_proves);
    let _ = writeln!(out, "certified: {}", trace.certified());
    out
}

pub fn compress(arg: &str, out_dir: Option<&Path>, format: Option<Format>, limits: &Limits) -> Outcome {
    let tree = tree_from_input(&read_text_or_file(arg)?, limits)?;
    let trace = pipeline::compress(&tree, limits)?;
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir).map_err(|e| input_error(format!("creating {}: {e}", dir.display())))?;
        for (name, d) in [("tree", &trace.tree), ("prime", &trace.prime), ("flat", &trace.flat), ("star", &trace.star)] {
            let path = dir.join(format!("{name}.dot"));
            std::fs::write(&path, d.to_dot(name)).map_err(|e| input_error(format!("writing {}: {e}", path.display())))?;
            eprintln!("wrote {}", path.display());
        }
    }
    match format.unwrap_or(Format::Json) {
        Format::Json => println!("{}", pretty(&trace.to_document())),
        Format::Text => print!("{}", trace_text(&trace)),
        Format::Dot => print!("{}", trace.star.to_dot("star")),
    }
    if trace.certified() {
        Ok(())
    } else {
        Err(Failure::Negative(format!("trace not certified: {:?}", trace.verdicts)))
    }
}

fn write_output(csv: &str, path: Option<&Path>) -> Outcome {
    match path {
        Some(p) => std::fs::write(p, csv).map_err(|e| input_error(format!("writing {}: {e}", p.display()))),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

pub fn compress_batch(arg: &str, csv: Option<&Path>, timings: bool, limits: &Limits) -> Outcome {
    let text = read_file(arg)?;
    let mut records = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let at = |m: String| input_error(format!("line {}: {m}", i + 1));
        let value: Value = serde_json::from_str(line).map_err(|e| at(e.to_string()))?;
        let (id, formula) = match &value {
            Value::String(s) => (None, s.as_str()),
            Value::Object(o) => match o.get("formula") {
                Some(Value::String(s)) => (o.get("id").map(|v| v.as_str().map_or(v.to_string(), String::from)), s.as_str()),
                _ => return Err(at("expected a \"formula\" string".into())),
            },
            _ => return Err(at("expected a string or an object".into())),
        };
        let f = parse_with_caret(formula).map_err(|e| at(e.to_string()))?;
        let id = id.unwrap_or_else(|| format!("item-{:04}", i + 1));
        records.push(pipeline::record(id, &f, limits));
    }
    let out = pipeline::write_csv(&records, timings)?;
    write_output(&out, csv)?;
    let failed = records.iter().filter(|r| r.certified != Some(true)).count();
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Negative(format!("{failed} of {} items not certified", records.len())))
    }
}

#[derive(Debug, Serialize)]
struct CheckReport {
    kind: &'static str,
    certified: bool,
    residue: Vec<Formula>,
    problems: Vec<String>,
}

fn check_deduction(d: &Deduction, choices: Option<&std::collections::BTreeMap<usize, usize>>, report: &mut CheckReport) {
    for v in check_local_correctness(d).violations {
        report.problems.push(v.to_string());
    }
    let residue: Option<BTreeSet<Formula>> = if !d.has_sep() {
        Some(open_assumptions(d).expect("separation-free"))
    } else if let Some(choices) = choices {
        match proves_with_choices(d, choices) {
            Ok(r) => Some(r),
            Err(e) => {
                report.problems.push(e.to_string());
                None
            }
        }
    } else {
        match proves_modified(d) {
            ModifiedVerdict::Proved { .. } => Some(BTreeSet::new()),
            ModifiedVerdict::NotProved => {
                report.problems.push("no choice of separation premises closes the proof".into());
                None
            }
        }
    };
    if let Some(r) = residue {
        report.residue.extend(r);
    }
}

fn check_trace(doc: &TraceDocument, report: &mut CheckReport) -> Outcome {
    let stage = |d: &ProofDocument| d.to_deduction().map_err(input_error);
    let tree = stage(&doc.stages.tree)?;
    let prime = stage(&doc.stages.prime)?;
    let flat = stage(&doc.stages.flat)?;
    let star = stage(&doc.stages.star)?;
    let choices = doc.stages.flat.choice_map().map_err(input_error)?;
    if star.has_sep() {
        report.problems.push("star stage contains separation nodes".into());
    }
    if star.root_formula() != tree.root_formula() {
        report.problems.push("star stage proves a different formula".into());
    }
    check_deduction(&star, None, report);
    let mut flat_report = CheckReport { kind: "flat", certified: false, residue: vec![], problems: vec![] };
    check_deduction(&flat, choices.as_ref(), &mut flat_report);
    report.problems.extend(flat_report.problems.into_iter().map(|p| format!("flat stage: {p}")));
    report.residue.extend(flat_report.residue);
    let (mt, mp, mf) = (measures(&tree), measures(&prime), measures(&flat));
    if mp.weight > mt.height * mt.phi {
        report.problems.push(format!("|prime| = {} exceeds h*phi = {}", mp.weight, mt.height * mt.phi));
    }
    if mf.weight > 2 * mp.weight {
        report.problems.push(format!("|flat| = {} exceeds 2|prime| = {}", mf.weight, 2 * mp.weight));
    }
    Ok(())
}

pub fn check(arg: &str, format: Option<Format>) -> Outcome {
    let text = read_file(arg)?;
    let value: Value = from_json(&text).map_err(|e| input_error(format!("malformed JSON: {e}")))?;
    let mut report = CheckReport { kind: "", certified: false, residue: vec![], problems: vec![] };
    if value.get("stages").is_some() {
        report.kind = "trace";
        let doc: TraceDocument = serde_json::from_value(value).map_err(input_error)?;
        check_trace(&doc, &mut report)?;
    } else if value.get("nodes").is_some() {
        report.kind = "deduction";
        let doc: ProofDocument = serde_json::from_value(value).map_err(input_error)?;
        let d = doc.to_deduction().map_err(input_error)?;
        let choices = doc.choice_map().map_err(input_error)?;
        check_deduction(&d, choices.as_ref(), &mut report);
    } else if value.get("conclusion").is_some() {
        report.kind = "sequent";
        let pr: SequentProof = serde_json::from_value(value).map_err(input_error)?;
        if !check_sc_proof(&pr) {
            report.problems.push("not a correct sequent proof".into());
        }
    } else {
        return Err(input_error("unrecognized document: expected a deduction, sequent proof or trace"));
    }
    report.certified = report.problems.is_empty() && report.residue.is_empty();
    match format.unwrap_or(Format::Text) {
        Format::Json => println!("{}", pretty(&report)),
        Format::Text => {
            println!("{}: {}", report.kind, if report.certified { "certified" } else { "not certified" });
            if !report.residue.is_empty() {
                let items: Vec<String> = report.residue.iter().map(|f| f.to_string()).collect();
                println!("open assumptions: {{{}}}", items.join(", "));
            }
            for p in &report.problems {
                println!("  {p}");
            }
        }
        Format::Dot => return Err(no_dot("check")),
    }
    if report.certified {
        Ok(())
    } else {
        Err(Failure::Negative("not certified".into()))
    }
}

pub enum Corpus {
    RandomImp { count: usize, max_weight: usize, vars: usize, seed: u64 },
    ExhaustiveImp { max_weight: usize, vars: usize },
    AllGraphs { n: usize },
}

fn formula_records(prefix: &str, formulas: &[Formula], limits: &Limits) -> Outcome<Vec<RunRecord>> {
    let mut records = Vec::with_capacity(formulas.len());
    for (i, f) in formulas.iter().enumerate() {
        let mut r = pipeline::record(format!("{prefix}-{i:04}"), f, limits);
        if let Some(proved) = r.proved {
            r.agrees = Some(proved == kripke(f, limits)?.countermodel().is_none());
        }
        records.push(r);
    }
    Ok(records)
}

fn graph_records(n: usize, limits: &Limits) -> Outcome<Vec<RunRecord>> {
    let mut records = Vec::new();
    for (i, g) in DiGraph::enumerate_all(n).enumerate() {
        let alpha = encode_hamiltonian(&g);
        let hamiltonian = hamiltonian_oracle(&g).map_err(input_error)?;
        let satisfiable = classical_sat(&alpha).map_err(input_error)?;
        let certificate = statman_translate(&alpha.negate());
        let id = format!("graph-{n}-{i:04}");
        // Only non-Hamiltonian graphs have a certificate to search for.
        let mut r = if hamiltonian {
            RunRecord { id, weight: certificate.weight(), ..RunRecord::default() }
        } else {
            pipeline::record(id, &certificate, limits)
        };
        r.agrees = Some(hamiltonian == satisfiable);
        records.push(r);
    }
    Ok(records)
}

pub fn bench(corpus: Corpus, timings: bool, csv: Option<&Path>, limits: &Limits) -> Outcome {
    let records = match corpus {
        Corpus::RandomImp { count, max_weight, vars, seed } => {
            let formulas = random_implicational(seed, count, max_weight, &variable_names(vars));
            formula_records("random-imp", &formulas, limits)?
        }
        Corpus::ExhaustiveImp { max_weight, vars } => {
            let formulas = exhaustive_implicational(&variable_names(vars), max_weight);
            formula_records("exhaustive-imp", &formulas, limits)?
        }
        Corpus::AllGraphs { n } => graph_records(n, limits)?,
    };
    let out = pipeline::write_csv(&records, timings)?;
    write_output(&out, csv)?;
    let disagreements = records.iter().filter(|r| r.agrees == Some(false)).count();
    if disagreements == 0 {
        Ok(())
    } else {
        Err(Failure::Negative(format!("{disagreements} oracle disagreements")))
    }
}
