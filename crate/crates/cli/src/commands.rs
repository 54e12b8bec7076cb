//! One function per subcommand, each returning the envelope pieces.

use crate::json::{complex, ext, int, object, real};
use crate::{CriticalArg, FamilyArg, Failure, FormArg, MapArg, Outcome};
use modatlas::critical::{dual_reciprocal, locate, truncated_boundary, winding, CriticalForm, CriticalRecord, Winding, DEFAULT_QUAD_POINTS};
use modatlas::geometry::{tessellate as tiles_to_depth, ArcTriangle, Family, SideArc, Tile, TileWord};
use modatlas::locus::{csv_rows, trace, Interval, StopReason};
use modatlas::modular::{eval_form, Form, GroupElement};
use modatlas::polymorphic::{s2_pair, s_derivative, s_map, MapKey};
use modatlas::verify::{run_suite, CheckReport, Status, Suite, TolProfile};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::Value;

fn s(x: impl ToString) -> Value {
    Value::String(x.to_string())
}

fn empty() -> Value {
    object::<[(String, Value); 0], String>([])
}

fn form_name(f: FormArg) -> (&'static str, Form) {
    match f {
        FormArg::E2 => ("E2", Form::E2),
        FormArg::E4 => ("E4", Form::E4),
        FormArg::E6 => ("E6", Form::E6),
        FormArg::Delta => ("DELTA", Form::Delta),
        FormArg::J => ("J", Form::J),
    }
}

pub fn eval(form: FormArg, tau: Complex64, tol: f64) -> Result<Outcome, Failure> {
    let (name, f) = form_name(form);
    let v = eval_form(f, tau, tol)?;
    Ok(Outcome {
        inputs: object([("form", s(name)), ("tau", complex(tau)), ("tol", real(tol))]),
        results: object([("form", s(name)), ("value", complex(v.value))]),
        residuals: object([("error_estimate", real(v.error_estimate))]),
        code: 0,
        csv: None,
    })
}

pub fn map(m: MapArg, tau: Complex64, tol: f64) -> Result<Outcome, Failure> {
    let (name, results) = match m {
        MapArg::Single(k) => {
            let value = s_map(k, tau, tol)?;
            let mut fields = vec![("fn", s(k)), ("value", ext(value))];
            // the derivative is omitted at poles
            if let Ok(d) = s_derivative(k, tau, tol) {
                fields.push(("derivative", complex(d)));
            }
            (k.name().to_string(), object(fields))
        }
        MapArg::Pair => {
            let values = s2_pair(tau, tol)?;
            ("s2pair".to_string(), object([("fn", s("s2pair")), ("values", Value::Array(values.into_iter().map(ext).collect()))]))
        }
    };
    Ok(Outcome {
        inputs: object([("fn", s(name)), ("tau", complex(tau)), ("tol", real(tol))]),
        results,
        residuals: empty(),
        code: 0,
        csv: None,
    })
}

fn critical_form(f: CriticalArg) -> CriticalForm {
    match f {
        CriticalArg::E2 => CriticalForm::E2,
        CriticalArg::E4 => CriticalForm::E4,
        CriticalArg::E6 => CriticalForm::E6,
    }
}

struct TileResult {
    tile: Tile,
    winding: Winding,
    records: Vec<(CriticalRecord, f64)>,
}

fn scan_tile(form: CriticalForm, tile: Tile, h: f64, grid: usize, tol: f64) -> Result<TileResult, Failure> {
    let contour = truncated_boundary(&tile.triangle, h)?;
    let w = winding(&form.target(), &contour, DEFAULT_QUAD_POINTS, tol)?;
    let records = locate(form, &tile, grid, h, tol)?
        .into_iter()
        .map(|r| {
            let dual = dual_reciprocal(form, r.location, tol)?;
            Ok((r, dual))
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    Ok(TileResult { tile, winding: w, records })
}

fn record_json(r: &CriticalRecord, dual: f64) -> Value {
    object([
        ("form", s(r.form)),
        ("tile", s(&r.tile_word)),
        ("location", complex(r.location)),
        ("residual", real(r.residual)),
        ("simplicity_witness", real(r.simplicity_witness)),
        ("dual_reciprocal", real(dual)),
        ("grid", int(r.method.grid as i64)),
        ("newton_iterations", int(r.method.newton_iterations as i64)),
    ])
}

pub fn critical(form: CriticalArg, tile: Option<&str>, depth: Option<usize>, h: f64, grid: usize, tol: f64) -> Result<Outcome, Failure> {
    if !(h > 1.0) || grid < 2 {
        return Err(Failure::Invalid(format!("need --truncate above 1 and --grid of at least 2 (got {h}, {grid})")));
    }
    let form = critical_form(form);
    let tiles = match (tile, depth) {
        (Some(word), _) => vec![Tile::from_word(Family::V, TileWord::parse(word)?)],
        (None, Some(d)) => tiles_to_depth(Family::V, d)?,
        (None, None) => unreachable!("clap requires --tile or --depth"),
    };
    let scanned = tiles.into_par_iter().map(|t| scan_tile(form, t, h, grid, tol)).collect::<Result<Vec<_>, Failure>>()?;
    let mut worst = (0.0f64, f64::INFINITY, 0.0f64, 0.0f64);
    let mut total = 0usize;
    let per_tile: Vec<Value> = scanned
        .iter()
        .map(|t| {
            worst.3 = worst.3.max((t.winding.value - t.winding.count as f64).abs());
            for (r, dual) in &t.records {
                worst.0 = worst.0.max(r.residual);
                worst.1 = worst.1.min(r.simplicity_witness);
                worst.2 = worst.2.max(*dual);
            }
            total += t.records.len();
            object([
                ("tile", s(&t.tile.word)),
                ("cusp_at_infinity", Value::Bool(t.tile.has_cusp_at_infinity())),
                ("winding", real(t.winding.value)),
                ("count", int(t.winding.count)),
                ("records", Value::Array(t.records.iter().map(|(r, d)| record_json(r, *d)).collect())),
            ])
        })
        .collect();
    let selector = match (tile, depth) {
        (Some(word), _) => ("tile", s(word)),
        (None, d) => ("depth", int(d.unwrap_or(0) as i64)),
    };
    Ok(Outcome {
        inputs: object([("form", s(form)), selector, ("truncate", real(h)), ("grid", int(grid as i64)), ("tol", real(tol))]),
        results: object([("total", int(total as i64)), ("tiles", Value::Array(per_tile))]),
        residuals: object([
            ("max_residual", real(worst.0)),
            ("min_simplicity_witness", real(worst.1)),
            ("max_dual_reciprocal", real(worst.2)),
            ("max_winding_gap", real(worst.3)),
        ]),
        code: 0,
        csv: None,
    })
}

fn status_name(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "fail",
        Status::Skipped => "skipped",
    }
}

fn report_json(r: &CheckReport) -> Value {
    let checks = r
        .checks
        .iter()
        .map(|c| {
            let mut fields = vec![
                ("id", s(&c.id)),
                ("status", s(status_name(c.status))),
                ("worst_residual", real(c.worst_residual)),
                ("tolerance", real(c.tolerance)),
                ("samples", int(c.samples as i64)),
            ];
            if let Some(n) = &c.note {
                fields.push(("note", s(n)));
            }
            object(fields)
        })
        .collect();
    object([("suite", s(&r.suite)), ("overall", s(status_name(r.overall))), ("checks", Value::Array(checks))])
}

fn suite_name(s: Suite) -> &'static str {
    match s {
        Suite::All => "all",
        Suite::Identities => "identities",
        Suite::Mapping => "mapping",
        Suite::Counts => "counts",
        Suite::Ode => "ode",
    }
}

pub fn verify(suite: Suite, seed: u64, strict: bool) -> Outcome {
    let profile = if strict { TolProfile::STRICT } else { TolProfile::DEFAULT };
    let report = run_suite(suite, seed, profile);
    let failed = report.checks.iter().filter(|c| c.status == Status::Fail).count();
    Outcome {
        inputs: object([("suite", s(suite_name(suite))), ("seed", Value::Number(seed.into())), ("strict", Value::Bool(strict))]),
        results: report_json(&report),
        residuals: object([("checks", int(report.checks.len() as i64)), ("failed", int(failed as i64))]),
        code: if report.overall == Status::Pass { 0 } else { 1 },
        csv: None,
    }
}

fn stop_name(r: StopReason) -> &'static str {
    match r {
        StopReason::MaxPoints => "max_points",
        StopReason::LowCusp => "low_cusp",
        StopReason::HighCusp => "high_cusp",
        StopReason::LeftRegion => "left_region",
        StopReason::LeftInterval => "left_interval",
    }
}

pub fn locus(map: MapKey, interval: Interval, start: Complex64, step: f64, max: usize, to_csv: bool) -> Result<Outcome, Failure> {
    if !(step > 0.0) || max == 0 {
        return Err(Failure::Invalid(format!("need a positive --step and --max (got {step}, {max})")));
    }
    let curve = trace(map, interval, start, step, max, None)?;
    let inputs = object([("fn", s(map)), ("interval", s(interval)), ("start", complex(start)), ("step", real(step)), ("max", int(max as i64))]);
    let residuals = object([("max_residual", real(curve.max_residual()))]);
    let csv = to_csv.then(|| {
        let mut rows = vec![["tau_re", "tau_im", "s_re", "s_im", "residual"].map(String::from).to_vec()];
        rows.extend(csv_rows(&curve).into_iter().map(|r| r.to_vec()));
        rows
    });
    let points = curve
        .points
        .iter()
        .map(|p| object([("tau", complex(p.tau)), ("value", ext(p.value)), ("residual", real(p.residual)), ("step", real(p.step))]))
        .collect();
    Ok(Outcome {
        inputs,
        results: object([
            ("stops", Value::Array(vec![s(stop_name(curve.stops.0)), s(stop_name(curve.stops.1))])),
            ("count", int(curve.points.len() as i64)),
            ("points", Value::Array(points)),
        ]),
        residuals,
        code: 0,
        csv,
    })
}

fn element_json(g: &GroupElement) -> Value {
    object([
        ("a", int(g.a)),
        ("b", int(g.b)),
        ("c", int(g.c)),
        ("d", int(g.d)),
        ("conjugate_first", Value::Bool(g.conjugate_first)),
    ])
}

fn side_json(side: &SideArc) -> Value {
    match *side {
        SideArc::Segment { point, direction, s0, s1 } => object([
            ("kind", s("segment")),
            ("point", complex(point)),
            ("direction", complex(direction)),
            ("s0", real(s0)),
            ("s1", real(s1)),
        ]),
        SideArc::Arc { center, radius, theta0, theta1 } => object([
            ("kind", s("arc")),
            ("center", complex(center)),
            ("radius", real(radius)),
            ("theta0", real(theta0)),
            ("theta1", real(theta1)),
        ]),
    }
}

fn triangle_json(t: &ArcTriangle) -> Vec<(&'static str, Value)> {
    vec![
        ("vertices", Value::Array(t.vertices.iter().map(|v| ext(*v)).collect())),
        ("sides", Value::Array(t.sides.iter().map(side_json).collect())),
        ("interior_orientation", Value::Bool(t.interior_orientation)),
        ("interior_point", complex(t.interior_point)),
    ]
}

pub fn tessellate(family: FamilyArg, depth: usize) -> Result<Outcome, Failure> {
    let (name, fam) = match family {
        FamilyArg::T => ("T", Family::T),
        FamilyArg::V => ("V", Family::V),
    };
    let tiles = tiles_to_depth(fam, depth)?;
    let list = tiles
        .iter()
        .map(|t| {
            let mut fields = vec![("word", s(&t.word)), ("element", element_json(&t.element))];
            fields.extend(triangle_json(&t.triangle));
            object(fields)
        })
        .collect();
    Ok(Outcome {
        inputs: object([("family", s(name)), ("depth", int(depth as i64))]),
        results: object([("count", int(tiles.len() as i64)), ("tiles", Value::Array(list))]),
        residuals: empty(),
        code: 0,
        csv: None,
    })
}
