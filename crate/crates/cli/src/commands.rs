//! `analyze`, `verify` and `examples`.

use pontryagin::gen::{fixture, builtin_fixtures};
use pontryagin::theorem::{proof_witness, verify_main_theorem, GapReport};
use pontryagin::{Error, Interval, PiSelfadjointOperator, Tolerance};
use serde_json::{json, Map, Value};

use crate::instance::{self, Expected, InputError, InstanceFile};
use crate::{json, ExitCode, Outcome, SCHEMA_VERSION};

#[derive(Debug, Clone, Default)]
pub struct Flags {
    pub tol: Tolerance,
    /// Overrides the file's intervals when non-empty.
    pub intervals: Vec<Interval>,
    pub witness: bool,
}

/// Exit code for a library error raised while evaluating a valid file.
pub fn classify(e: &Error) -> ExitCode {
    match e {
        Error::EndpointInSpectrum { .. } | Error::NoAdmissibleSubinterval { .. } => {
            ExitCode::IllPosed
        }
        _ => ExitCode::Input,
    }
}

fn input_error(e: &InputError) -> Outcome {
    Outcome::fail(ExitCode::Input, format!("input error at {e}"))
}

fn library_error(e: &Error) -> Outcome {
    let code = classify(e);
    let kind = if code == ExitCode::IllPosed {
        "ill-posed interval"
    } else {
        "error"
    };
    Outcome::fail(code, format!("{kind}: {e}"))
}

fn header(tol: &Tolerance) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("schema_version".into(), json!(SCHEMA_VERSION));
    m.insert("tolerance".into(), json::to_value(tol));
    m
}

type Prepared = (
    InstanceFile,
    instance::Loaded,
    Vec<(Interval, Option<Expected>)>,
);

fn load(text: &str, flags: &Flags) -> Result<Prepared, Outcome> {
    let file = instance::parse(text).map_err(|e| input_error(&e))?;
    let loaded = file.load(text, &flags.tol).map_err(|e| input_error(&e))?;
    let intervals = if flags.intervals.is_empty() {
        let from_file = file.intervals(text).map_err(|e| input_error(&e))?;
        if from_file.is_empty() {
            vec![(Interval::real_line(), None)]
        } else {
            from_file
        }
    } else {
        flags.intervals.iter().map(|iv| (*iv, None)).collect()
    };
    Ok((file, loaded, intervals))
}

fn spectrum_value(op: &PiSelfadjointOperator, tol: &Tolerance) -> Result<Value, Error> {
    let spec = op.spectrum(tol)?;
    Ok(Value::Array(
        spec.entries
            .iter()
            .map(|p| json!({"value": [p.value.re, p.value.im], "multiplicity": p.multiplicity}))
            .collect(),
    ))
}

pub fn analyze(text: &str, flags: &Flags) -> Outcome {
    let (file, loaded, intervals) = match load(text, flags) {
        Ok(x) => x,
        Err(o) => return o,
    };
    let tol = &flags.tol;
    let run = || -> Result<Value, Error> {
        let mut doc = header(tol);
        if let Some(name) = &file.name {
            doc.insert("name".into(), json!(name));
        }
        doc.insert(
            "space".into(),
            json!({
                "dim": loaded.space.dim(),
                "kappa_plus": loaded.space.kappa_plus(),
                "kappa_minus": loaded.space.kappa_minus(),
            }),
        );
        let ops: Vec<(&str, &PiSelfadjointOperator)> = std::iter::once(("a1", &loaded.op1))
            .chain(loaded.op2.iter().map(|op| ("a2", op)))
            .collect();
        let mut spectra = Map::new();
        for (key, op) in &ops {
            spectra.insert((*key).into(), spectrum_value(op, tol)?);
        }
        doc.insert("spectrum".into(), Value::Object(spectra));
        let mut rows = Vec::new();
        for (iv, _) in &intervals {
            let (mut eig, mut sig, mut inertia) = (Map::new(), Map::new(), Map::new());
            for (key, op) in &ops {
                let i = op.gap_inertia(iv, tol)?;
                eig.insert((*key).into(), json!(i.dim()));
                sig.insert((*key).into(), json!(i.signature()));
                inertia.insert((*key).into(), json::to_value(&i));
            }
            rows.push(
                json!({"interval": json::to_value(iv), "eig": eig, "sig": sig, "inertia": inertia}),
            );
        }
        doc.insert("intervals".into(), Value::Array(rows));
        if let Some(pair) = &loaded.pair {
            doc.insert(
                "pair".into(),
                json!({"n": pair.n(), "agreement_dim": pair.agreement().dim()}),
            );
        }
        Ok(Value::Object(doc))
    };
    match run() {
        Ok(doc) => Outcome::ok(json::render(&doc)),
        Err(e) => library_error(&e),
    }
}

/// Field-by-field comparison; returns the names of mismatching fields.
pub fn mismatches(expected: &Expected, r: &GapReport) -> Vec<String> {
    let mut out = Vec::new();
    let mut check = |name: &str, want: Option<i64>, got: i64| {
        if let Some(w) = want {
            if w != got {
                out.push(format!("{name}: expected {w}, computed {got}"));
            }
        }
    };
    check("n", expected.n.map(|x| x as i64), r.n as i64);
    check("kappa", expected.kappa.map(|x| x as i64), r.kappa as i64);
    check("eig1", expected.eig1.map(|x| x as i64), r.eig1 as i64);
    check("eig2", expected.eig2.map(|x| x as i64), r.eig2 as i64);
    check("sig1", expected.sig1, r.sig1);
    check("sig2", expected.sig2, r.sig2);
    check("slack", expected.slack, r.slack);
    out
}

pub fn verify(text: &str, flags: &Flags) -> Outcome {
    let (file, loaded, intervals) = match load(text, flags) {
        Ok(x) => x,
        Err(o) => return o,
    };
    let Some(pair) = loaded.pair else {
        return Outcome::fail(
            ExitCode::Input,
            "input error: verify needs both a1 and a2".into(),
        );
    };
    let tol = &flags.tol;
    let mut all_hold = true;
    let mut expectations_met = true;
    let mut results = Vec::new();
    for (iv, expected) in &intervals {
        let report = match verify_main_theorem(&pair, iv, tol) {
            Ok(r) => r,
            Err(e) => return library_error(&e),
        };
        all_hold &= report.all_hold();
        let mut entry = Map::new();
        entry.insert("report".into(), json::to_value(&report));
        if let Some(exp) = expected {
            let diffs = mismatches(exp, &report);
            expectations_met &= diffs.is_empty();
            entry.insert("expected".into(), json::to_value(exp));
            entry.insert("mismatches".into(), json!(diffs));
        }
        if flags.witness {
            match proof_witness(&pair, iv, tol) {
                Ok(w) => {
                    all_hold &= w.all_ok();
                    entry.insert("witness".into(), json::to_value(&w));
                }
                Err(e) => return library_error(&e),
            }
        }
        results.push(Value::Object(entry));
    }
    let mut doc = header(tol);
    if let Some(name) = &file.name {
        doc.insert("name".into(), json!(name));
    }
    doc.insert("results".into(), Value::Array(results));
    doc.insert("all_hold".into(), json!(all_hold));
    doc.insert("expectations_met".into(), json!(expectations_met));
    let code = if !all_hold {
        ExitCode::Violation
    } else if !expectations_met {
        ExitCode::Mismatch
    } else {
        ExitCode::Ok
    };
    Outcome {
        stdout: json::render(&Value::Object(doc)),
        stderr: String::new(),
        code,
    }
}

pub fn fixture_names() -> Vec<&'static str> {
    builtin_fixtures().iter().map(|f| f.name).collect()
}

/// With a name, the fixture's instance file; without, an expected-vs-computed table.
pub fn examples(name: Option<&str>, tol: &Tolerance) -> Outcome {
    if let Some(name) = name {
        return match fixture(name) {
            Some(f) => Outcome::ok(instance::emit(&InstanceFile::from_fixture(&f))),
            None => Outcome::fail(
                ExitCode::Input,
                format!(
                    "unknown example {name:?}; valid names: {}",
                    fixture_names().join(", ")
                ),
            ),
        };
    }
    let mut table = format!(
        "{:<10} {:<9} {:>8} {:>8}  {}\n",
        "fixture", "quantity", "expected", "computed", "status"
    );
    let mut all_match = true;
    for f in builtin_fixtures() {
        let report = match f
            .pair(tol)
            .and_then(|p| verify_main_theorem(&p, &f.interval, tol))
        {
            Ok(r) => r,
            Err(e) => return library_error(&e),
        };
        let e = f.expected;
        let rows = [
            ("n", e.n as i64, report.n as i64),
            ("kappa", e.kappa as i64, report.kappa as i64),
            ("eig1", e.eig1 as i64, report.eig1 as i64),
            ("eig2", e.eig2 as i64, report.eig2 as i64),
            ("slack", e.slack, report.slack),
        ];
        for (q, want, got) in rows {
            let ok = want == got;
            all_match &= ok;
            table.push_str(&format!(
                "{:<10} {:<9} {:>8} {:>8}  {}\n",
                f.name,
                q,
                want,
                got,
                if ok { "ok" } else { "MISMATCH" }
            ));
        }
        if !report.all_hold() {
            all_match = false;
            table.push_str(&format!("{:<10} bounds violated\n", f.name));
        }
    }
    Outcome {
        stdout: table,
        stderr: String::new(),
        code: if all_match {
            ExitCode::Ok
        } else {
            ExitCode::Mismatch
        },
    }
}
