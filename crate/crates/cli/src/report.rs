//! Executes a job and writes its report files.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use ucayley::cayley::CayleyGraph;
use ucayley::instance::{Error as EngineError, Instance};
use ucayley::pst::decide_pst;
use ucayley::spectra::{check_axioms, dense_deviation, oracle_agrees, spectrum_oracle, Spectrum};

use crate::config::{Analysis, JobConfig};
use crate::CliError;

/// Files written by a run, relative to the output directory, in write order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunSummary {
    pub out_dir: PathBuf,
    pub files: Vec<String>,
}

fn engine(field: &str) -> impl Fn(EngineError) -> CliError + '_ {
    move |e| {
        if e.is_cap_exceeded() {
            CliError::CapExceeded(format!("{field}: {e}"))
        } else {
            CliError::Validation { field: field.into(), message: e.to_string() }
        }
    }
}

/// Writes through a temporary file in the same directory and renames it into
/// place, so readers never observe a partial report.
pub fn write_atomic(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    let path = dir.join(name);
    let io = |source| CliError::Io { path: path.clone(), source };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(&path).map_err(|e| io(e.error))?;
    Ok(())
}

/// Pretty JSON with object keys in sorted order and a trailing newline.
pub fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("value serializes");
    s.push('\n');
    s
}

fn prepare_dir(dir: &Path, force: bool) -> Result<(), CliError> {
    let io = |source| CliError::Io { path: dir.to_path_buf(), source };
    if dir.exists() {
        let nonempty = fs::read_dir(dir).map_err(io)?.next().is_some();
        if nonempty && !force {
            return Err(CliError::Validation {
                field: "output".into(),
                message: format!("{} is not empty; pass --force to overwrite", dir.display()),
            });
        }
    } else {
        fs::create_dir_all(dir).map_err(io)?;
    }
    Ok(())
}

fn classes_json(instance: &Instance) -> Value {
    let p = instance.partition();
    let ring = instance.ring();
    let list: Vec<Value> = (0..p.len())
        .map(|i| {
            json!({
                "class": i,
                "rep": ring.render_idx(p.rep(i)),
                "size": p.class_size(i),
                "label": p.label(i),
            })
        })
        .collect();
    Value::Array(list)
}

fn structure_json(config: &JobConfig, instance: &Instance, graph: &CayleyGraph) -> Value {
    let mut v = json!({
        "ring": config.ring.to_string(),
        "ring_size": graph.order(),
        "subgroup_size": instance.subgroup().len(),
        "class_count": instance.partition().len(),
        "classes": classes_json(instance),
        "selected_classes": graph.classes(),
        "degree": graph.degree(),
    });
    let obj = v.as_object_mut().expect("object");
    if config.wants(Analysis::Structure) {
        let conn = graph.connectivity();
        obj.insert("connectivity".into(), json!(conn));
        obj.insert("components".into(), json!(conn.component_count));
        obj.insert("diameter".into(), json!(conn.diameter));
        obj.insert("bipartite".into(), json!(graph.is_bipartite()));
        obj.insert("anti_connected".into(), json!(graph.is_anti_connected()));
        let crit = match graph.connected_by_ideal_criterion() {
            Ok(c) => json!(c),
            Err(e) => json!({ "inapplicable": e.to_string() }),
        };
        obj.insert("ideal_criterion".into(), crit);
        obj.insert("diameter_bound".into(), json!(graph.diameter_bound()));
    }
    if config.wants(Analysis::Prime) {
        let report = graph.prime_check();
        obj.insert("prime_verdict".into(), json!(report.verdict));
        obj.insert("prime".into(), json!(report));
    }
    v
}

fn charpoly_text(spectrum: &Spectrum) -> String {
    match spectrum.char_poly() {
        Ok(cp) => format!("{cp}\n"),
        Err(_) => {
            let mut out = format!("# spectrum is not integral; factors over Q(z{})\n", spectrum.order());
            for (value, mult) in spectrum.distinct() {
                let _ = writeln!(out, "(x - ({value}))^{mult}");
            }
            out
        }
    }
}

fn spectrum_csv(spectrum: &Spectrum, instance: &Instance) -> String {
    let ring = instance.ring();
    let mut out = String::from("class,rep,size,eigenvalue,real\n");
    for e in spectrum.entries() {
        let rep = ring.render_idx(e.rep).to_string().replace('"', "\"\"");
        let _ = writeln!(out, "{},\"{}\",{},\"{}\",{:.12}", e.class, rep, e.size, e.eigenvalue, e.eigenvalue.to_complex().re);
    }
    out
}

fn oracle_json(config: &JobConfig, instance: &Instance, graph: &CayleyGraph, spectrum: &Spectrum) -> Value {
    let oracle = spectrum_oracle(graph, instance.functional());
    let (first, second) = spectrum.moments();
    let degree = graph.degree() as i64;
    let max_abs = spectrum.entries().iter().map(|e| e.eigenvalue.to_complex().norm()).fold(0.0, f64::max);
    let dense = (graph.order() <= config.caps.dense).then(|| dense_deviation(spectrum, graph)).flatten();
    let axioms = check_axioms(instance.partition(), instance.functional());
    json!({
        "per_element_agrees": oracle_agrees(spectrum, instance.partition(), &oracle),
        "dense_max_deviation": dense,
        "first_moment_zero": first.is_zero(),
        "second_moment_matches": second.as_integer().ok() == Some(graph.order() as i64 * degree),
        "max_abs_eigenvalue_is_degree": (max_abs - degree as f64).abs() < 1e-9,
        "superclass_axioms": axioms,
    })
}

/// Runs every requested analysis, writing reports into `out_dir`.
pub fn run(config: &JobConfig, out_dir: &Path, force: bool) -> Result<RunSummary, CliError> {
    config.validate()?;
    if let Some(n) = config.ring.element_count() {
        if config.wants(Analysis::OracleVerify) && n > config.caps.oracle as u128 {
            return Err(CliError::CapExceeded(format!(
                "caps.oracle: oracle-verify needs |R| <= {}, ring has {n} elements",
                config.caps.oracle
            )));
        }
    }
    let instance = Instance::build_with_cap(&config.ring, &config.subgroup, config.caps.ring_size).map_err(engine("ring"))?;
    let graph = instance.graph(&config.selector).map_err(engine("selector"))?;
    prepare_dir(out_dir, force)?;
    let mut files = Vec::new();
    let mut emit = |name: &str, contents: String| -> Result<(), CliError> {
        write_atomic(out_dir, name, &contents)?;
        files.push(name.to_string());
        Ok(())
    };

    emit("config.json", render_json(&serde_json::to_value(config).expect("config serializes")))?;
    if config.formats.json && (config.wants(Analysis::Structure) || config.wants(Analysis::Prime)) {
        emit("structure.json", render_json(&structure_json(config, &instance, &graph)))?;
    }
    let needs_spectrum = [Analysis::Spectrum, Analysis::Charpoly, Analysis::Pst, Analysis::OracleVerify]
        .iter()
        .any(|&a| config.wants(a));
    let spectrum = if needs_spectrum { Some(instance.spectrum(&graph).map_err(engine("ring"))?) } else { None };
    if let Some(spectrum) = &spectrum {
        if config.wants(Analysis::Spectrum) {
            if config.formats.json {
                emit("spectrum.json", render_json(&spectrum.to_json(instance.partition())))?;
            }
            if config.formats.csv {
                emit("spectrum.csv", spectrum_csv(spectrum, &instance))?;
            }
        }
        if config.wants(Analysis::Charpoly) {
            emit("charpoly.txt", charpoly_text(spectrum))?;
        }
        if config.wants(Analysis::Pst) && config.formats.json {
            let report = decide_pst(&graph, spectrum, instance.functional());
            emit("pst.json", render_json(&report.to_json(instance.ring())))?;
        }
        if config.wants(Analysis::OracleVerify) && config.formats.json {
            emit("oracle.json", render_json(&oracle_json(config, &instance, &graph, spectrum)))?;
        }
    }
    if config.formats.dot {
        let dot = graph.to_dot(config.caps.dot_edges).map_err(|e| CliError::CapExceeded(format!("caps.dot_edges: {e}")))?;
        emit("graph.dot", dot)?;
    }
    Ok(RunSummary { out_dir: out_dir.to_path_buf(), files })
}
