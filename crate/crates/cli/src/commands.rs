use std::path::Path;

use qgrowth_core::fourier::{self, FiniteQG};
use qgrowth_core::growth::{
    classify, gk_fit, growth_sequence_with_cap, strict_growth_constants_with, GrowthSequence,
    GrowthValue, StrictParams, DEFAULT_CAP,
};
use qgrowth_core::ring::{kac_witness, load_ring, parse_generator, validate_ring};
use qgrowth_core::{DimensionFunction, Error, RepVector, Ring};
use serde_json::{json, Value};

use crate::args::{DimFn, Format, RingArgs, RunConfig};
use crate::{cache, CliError, Outcome};

fn dimension_function(kind: DimFn) -> DimensionFunction {
    match kind {
        DimFn::Vector => DimensionFunction::vector(),
        DimFn::Quantum => DimensionFunction::quantum(),
    }
}

fn dimfn_name(kind: DimFn) -> &'static str {
    match kind {
        DimFn::Vector => "vector",
        DimFn::Quantum => "quantum",
    }
}

pub(crate) fn ring_and_generator(args: &RingArgs) -> Result<(Ring, RepVector), Error> {
    let ring = load_ring(&args.ring)?;
    let u = parse_generator(ring.as_ref(), &args.generator)?;
    Ok((ring, u))
}

/// The growth sequence, served from the cache when one is configured.
fn sequence(
    cfg: &RunConfig,
    args: &RingArgs,
    n: usize,
    dimfn: DimFn,
) -> Result<GrowthSequence, CliError> {
    let (ring, u) = ring_and_generator(args)?;
    let d = dimension_function(dimfn);
    let key = cache::cache_key(
        &ring.spec(),
        &args.ring,
        &u.to_string(),
        dimfn_name(dimfn),
        n,
    );
    if let Some(dir) = &cfg.cache_dir {
        if let Some(values) = cache::load(dir, &key) {
            if values.len() == n + 1 {
                return Ok(GrowthSequence {
                    ring: ring.spec(),
                    generator: u,
                    dimfn: d.kind(),
                    values,
                });
            }
        }
    }
    let seq = growth_sequence_with_cap(ring.as_ref(), &u, &d, n, cfg.cap.unwrap_or(DEFAULT_CAP))?;
    if let Some(dir) = &cfg.cache_dir {
        cache::store(dir, &key, &seq).map_err(|e| CliError::io(dir, e))?;
    }
    Ok(seq)
}

fn value_json(v: &GrowthValue) -> Value {
    match v {
        GrowthValue::Exact(b) => json!(b.to_string()),
        GrowthValue::Real(x) => json!(x),
    }
}

pub fn growth(
    cfg: &RunConfig,
    args: &RingArgs,
    n: usize,
    dimfn: DimFn,
) -> Result<Outcome, CliError> {
    let seq = sequence(cfg, args, n, dimfn)?;
    let report = classify(&seq).ok();
    let body = match cfg.format {
        Format::Text => seq.to_csv(),
        Format::Json => {
            let rows: Vec<Value> = seq
                .values
                .iter()
                .enumerate()
                .map(|(n, b)| json!([n, value_json(b)]))
                .collect();
            pretty(&json!({
                "ring": seq.ring,
                "generator": seq.generator.to_string(),
                "dimfn": dimfn_name(dimfn),
                "table": rows,
                "report": report.as_ref().map(|r| r.to_json()),
            }))
        }
    };
    let note = report.map(|r| {
        format!(
            "classification={}, gamma={:.4}, rate={:.4}, window={}..{}",
            r.classification.tag(),
            r.gamma,
            r.rate,
            r.window.0,
            r.window.1
        )
    });
    Ok(Outcome::ok(body).with_note(note))
}

pub fn dim(
    cfg: &RunConfig,
    args: &RingArgs,
    n: usize,
    dimfn: DimFn,
    window: f64,
    strict: Option<f64>,
) -> Result<Outcome, CliError> {
    if !(window > 0.0 && window <= 1.0) {
        return Err(CliError::Spec(format!(
            "window must lie in (0, 1], got {window}"
        )));
    }
    let seq = sequence(cfg, args, n, dimfn)?;
    let (gamma, diag) = gk_fit(&seq, window)?;
    let classification = classify(&seq)
        .map(|r| r.classification.tag())
        .unwrap_or("insufficient");
    let mut failed = false;
    let strict_json =
        strict.map(
            |g| match strict_growth_constants_with(&seq, g, &StrictParams::default()) {
                Ok(s) => json!({ "gamma": g, "passed": true, "c": s.c, "d_const": s.d_const,
                             "ratio": s.ratio, "drift": s.drift, "range": [s.range.0, s.range.1] }),
                Err(f) => {
                    failed = true;
                    json!({ "gamma": g, "passed": false, "reason": f.reason })
                }
            },
        );
    let body = match cfg.format {
        Format::Json => pretty(&json!({
            "ring": seq.ring,
            "generator": seq.generator.to_string(),
            "dimfn": dimfn_name(dimfn),
            "n": n,
            "gamma": gamma,
            "stderr": diag.stderr,
            "residual": diag.residual,
            "window": [diag.window.0, diag.window.1],
            "classification": classification,
            "strict": strict_json,
        })),
        Format::Text => {
            let mut s = format!(
                "gamma={gamma:.6}, stderr={:.3e}, residual={:.3e}, window={}..{}, classification={classification}\n",
                diag.stderr, diag.residual, diag.window.0, diag.window.1
            );
            if let Some(v) = &strict_json {
                s.push_str(&match v["passed"].as_bool() {
                    Some(true) => format!(
                        "strict=true, c={:.6e}, D={:.6e}, D/c={:.4}\n",
                        v["c"].as_f64().unwrap(),
                        v["d_const"].as_f64().unwrap(),
                        v["ratio"].as_f64().unwrap()
                    ),
                    _ => format!(
                        "strict=false, reason={}\n",
                        v["reason"].as_str().unwrap_or("")
                    ),
                });
            }
            s
        }
    };
    Ok(Outcome::new(if failed { 1 } else { 0 }, body))
}

pub fn kac(cfg: &RunConfig, args: &RingArgs, n: usize) -> Result<Outcome, CliError> {
    let (ring, u) = ring_and_generator(args)?;
    let witness = kac_witness(ring.as_ref(), &u, n)?;
    let qdims: Vec<(String, f64)> = u.support().map(|g| (g.to_string(), ring.qdim(g))).collect();
    let body = match cfg.format {
        Format::Json => pretty(&json!({
            "ring": ring.spec(),
            "radius": n,
            "kac": witness.is_none(),
            "qdim": qdims.iter().map(|(g, q)| (g.clone(), json!(q))).collect::<serde_json::Map<_, _>>(),
            "witness": witness.as_ref().map(|(v, d, q)| json!({ "irrep": v.to_string(), "dim": d, "qdim": q })),
        })),
        Format::Text => {
            let mut parts = vec![format!("kac={}", witness.is_none())];
            parts.extend(qdims.iter().map(|(g, q)| format!("qdim({g})={q}")));
            let mut s = parts.join(", ");
            s.push('\n');
            if let Some((v, d, q)) = &witness {
                if !qdims.iter().any(|(g, _)| *g == v.to_string()) {
                    s.push_str(&format!("witness={v}, dim={d}, qdim={q}\n"));
                }
            }
            s
        }
    };
    Ok(Outcome::ok(body))
}

pub fn validate(cfg: &RunConfig, ring: &str, samples: usize) -> Result<Outcome, CliError> {
    let ring = load_ring(ring)?;
    let rep = validate_ring(ring.as_ref(), samples);
    let body = match cfg.format {
        Format::Json => pretty(&serde_json::to_value(&rep).map_err(Error::from)?),
        Format::Text => {
            let mut s = format!(
                "ring={}, sampled={}, violations={}\n",
                rep.ring,
                rep.sampled,
                rep.violations.len()
            );
            for v in &rep.violations {
                s.push_str(&format!("{v}\n"));
            }
            s
        }
    };
    Ok(Outcome::new(if rep.is_ok() { 0 } else { 1 }, body))
}

/// A finite model from a file, or one of the builtins `s3`, `z<n>`, with a
/// `-dual` suffix selecting the cocommutative model.
pub fn load_model(name: &str) -> Result<FiniteQG, Error> {
    let path = Path::new(name);
    if path.is_file() {
        return FiniteQG::load(name);
    }
    let (base, dual) = match name.strip_suffix("-dual") {
        Some(b) => (b, true),
        None => (name, false),
    };
    let qg = if base == "s3" {
        FiniteQG::s3()
    } else if let Some(n) = base.strip_prefix('z').and_then(|n| n.parse::<usize>().ok()) {
        if n == 0 {
            return Err(Error::Precondition("group order must be positive".into()));
        }
        FiniteQG::cyclic(n)
    } else {
        return Err(Error::Io {
            path: name.to_string(),
            source: std::io::Error::new(
                std::io::ErrorKind::NotFound,
                "no such model file or builtin",
            ),
        });
    };
    Ok(if dual {
        FiniteQG::cocommutative(&format!("{}-dual", qg.name()), qg.group().clone())
    } else {
        qg
    })
}

pub fn fourier_verify(cfg: &RunConfig, group: &str, samples: usize) -> Result<Outcome, CliError> {
    let qg = load_model(group)?;
    let tol = cfg.tol.unwrap_or(1e-10);
    let rep = fourier::verify(&qg, samples, cfg.seed, tol)?;
    let body = match cfg.format {
        Format::Json => pretty(&serde_json::to_value(&rep).map_err(Error::from)?),
        Format::Text => {
            let mut s = format!(
                "model={}, samples={}, seed={}, tol={:e}\n",
                rep.model, rep.samples, rep.seed, rep.tolerance
            );
            for (name, r) in rep.residuals() {
                let verdict = if r < tol { "ok" } else { "FAIL" };
                s.push_str(&format!("{name}={r:.3e} {verdict}\n"));
            }
            s.push_str(&format!(
                "submultiplicativity={:.3e}\nsemisimplicity={:.3e}\npassed={}\n",
                rep.submultiplicativity, rep.semisimplicity, rep.passed
            ));
            s
        }
    };
    Ok(Outcome::new(if rep.passed { 0 } else { 1 }, body))
}

pub(crate) fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize") + "\n"
}
