use num_complex::Complex;
use ruijsenaars_fusion::fusion::{fusion_table, s_matrix, FusionTable, Route};
use ruijsenaars_fusion::lattice::joint_spectrum;
use ruijsenaars_fusion::lr::lr_coefficients;
use ruijsenaars_fusion::partition::vertical_strips;
use ruijsenaars_fusion::verify::{run_suite, Suite, VerifyConfig};
use ruijsenaars_fusion::{ModelParams, Partition, PolyTable, Result, Scalar};
use serde_json::{json, Value};

use crate::output::{cell, num, parts, Cplx, Rendered, Table};

fn f<T: Scalar>(x: T) -> f64 {
    x.to_f64_lossy()
}

fn c<T: Scalar>(z: Complex<T>) -> Cplx {
    Cplx::new(Complex::new(f(z.re), f(z.im)))
}

pub fn poly<T: Scalar>(prm: &ModelParams<T>, mu: &Partition) -> Result<Rendered> {
    let table = PolyTable::elliptic(prm.clone());
    let p = table.get(mu)?;
    let mut rows = Table::new(&["key", "value"]);
    let coefficients: Vec<Value> = p
        .coeffs()
        .iter()
        .map(|(key, v)| {
            rows.push(vec![cell(key), num(f(*v))]);
            json!({ "key": parts(key), "exponents": key.e_exponents(), "value": f(*v) })
        })
        .collect();
    Ok(Rendered { json: json!({ "mu": parts(mu), "coefficients": coefficients }), table: rows })
}

pub fn lr<T: Scalar>(prm: &ModelParams<T>, lam: &Partition, mu: &Partition) -> Result<Rendered> {
    let table = PolyTable::elliptic(prm.clone());
    let coeffs = lr_coefficients(lam, mu, &table)?;
    let mut rows = Table::new(&["nu", "value"]);
    let entries: Vec<Value> = coeffs
        .iter()
        .map(|(nu, v)| {
            rows.push(vec![cell(nu), num(f(*v))]);
            json!({ "nu": parts(nu), "value": f(*v) })
        })
        .collect();
    Ok(Rendered {
        json: json!({ "lam": parts(lam), "mu": parts(mu), "coefficients": entries }),
        table: rows,
    })
}

pub fn pieri<T: Scalar>(prm: &ModelParams<T>, lam: &Partition, r: Option<usize>) -> Result<Rendered> {
    let table = PolyTable::elliptic(prm.clone());
    let coeffs = table.coeffs();
    let sizes: Vec<usize> = match r {
        Some(r) => vec![r],
        None => (1..=prm.n()).collect(),
    };
    let mut rows = Table::new(&["r", "nu", "psi_prime", "hop"]);
    let mut entries = Vec::new();
    for r in sizes {
        for nu in vertical_strips(lam, r) {
            let psi = f(coeffs.psi_prime(lam, &nu)?);
            let hop = f(coeffs.hop_b(lam, &nu)?);
            rows.push(vec![r.to_string(), cell(&nu), num(psi), num(hop)]);
            entries.push(json!({ "r": r, "nu": parts(&nu), "psi_prime": psi, "hop": hop }));
        }
    }
    Ok(Rendered { json: json!({ "lam": parts(lam), "strips": entries }), table: rows })
}

pub fn spectrum<T: Scalar>(prm: &ModelParams<T>, seed: u64) -> Result<Rendered> {
    let spec = joint_spectrum(prm, seed)?;
    let n = prm.n();
    let mut header = vec!["label"];
    const E_COLS: [&str; 16] = [
        "e1_re", "e1_im", "e2_re", "e2_im", "e3_re", "e3_im", "e4_re", "e4_im", "e5_re", "e5_im", "e6_re",
        "e6_im", "e7_re", "e7_im", "e8_re", "e8_im",
    ];
    header.extend(E_COLS.iter().take(2 * n.min(8)));
    header.extend(["delta", "dual_norm"]);
    let mut rows = Table::new(&header);
    let points: Vec<Value> = spec
        .points
        .iter()
        .zip(&spec.delta)
        .map(|(pt, d)| {
            let mut row = vec![cell(&pt.label)];
            for z in pt.e.iter().take(8) {
                row.push(num(f(z.re)));
                row.push(num(f(z.im)));
            }
            row.push(num(f(*d)));
            row.push(num(f(pt.dual_norm)));
            rows.push(row);
            json!({
                "label": parts(&pt.label),
                "e": pt.e.iter().map(|z| c(*z)).collect::<Vec<_>>(),
                "eigenvector": pt.eigenvector.iter().map(|z| c(*z)).collect::<Vec<_>>(),
                "delta": f(*d),
                "dual_norm": f(pt.dual_norm),
            })
        })
        .collect();
    Ok(Rendered {
        json: json!({
            "points": points,
            "continuation_steps": spec.steps.iter().map(|p| f(*p)).collect::<Vec<_>>(),
        }),
        table: rows,
    })
}

fn table_json<T: Scalar>(t: &FusionTable<T>) -> Value {
    let entries: Vec<Value> = t
        .entries
        .iter()
        .map(|((l, m, k), v)| json!({ "lam": parts(l), "mu": parts(m), "kappa": parts(k), "value": f(*v) }))
        .collect();
    json!({
        "route": t.route,
        "labels": t.labels.iter().map(parts).collect::<Vec<_>>(),
        "entries": entries,
        "max_imag": f(t.max_imag),
        "extrapolated": t.extrapolated,
        "flagged": t.flagged.iter().map(|(l, m, k)| [parts(l), parts(m), parts(k)]).collect::<Vec<_>>(),
    })
}

fn table_rows<T: Scalar>(t: &FusionTable<T>, rows: &mut Table) {
    for ((l, m, k), v) in &t.entries {
        rows.push(vec![cell(l), cell(m), cell(k), num(f(*v))]);
    }
}

/// Route selector accepted on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum RouteArg {
    Verlinde,
    Projection,
    Lr,
    Both,
}

pub fn fusion<T: Scalar>(prm: &ModelParams<T>, route: RouteArg, seed: u64) -> Result<Rendered> {
    let single = |r: Route| -> Result<Rendered> {
        let t = fusion_table(prm, r, seed)?;
        let mut rows = Table::new(&["lam", "mu", "kappa", "value"]);
        table_rows(&t, &mut rows);
        Ok(Rendered { json: json!({ "table": table_json(&t) }), table: rows })
    };
    match route {
        RouteArg::Verlinde => single(Route::Verlinde),
        RouteArg::Projection => single(Route::Projection),
        RouteArg::Lr => single(Route::Lr),
        RouteArg::Both => {
            let v = fusion_table(prm, Route::Verlinde, seed)?;
            let l = fusion_table(prm, Route::Lr, seed)?;
            let mut rows = Table::new(&["lam", "mu", "kappa", "verlinde", "lr", "diff"]);
            let mut diffs = Vec::new();
            for key in v.entries.keys().chain(l.entries.keys().filter(|k| !v.entries.contains_key(*k))) {
                let (a, b) = (f(v.get(&key.0, &key.1, &key.2)), f(l.get(&key.0, &key.1, &key.2)));
                rows.push(vec![cell(&key.0), cell(&key.1), cell(&key.2), num(a), num(b), num(a - b)]);
                diffs.push(json!({
                    "lam": parts(&key.0), "mu": parts(&key.1), "kappa": parts(&key.2),
                    "verlinde": a, "lr": b, "diff": a - b,
                }));
            }
            Ok(Rendered {
                json: json!({
                    "table": table_json(&v),
                    "lr_table": table_json(&l),
                    "diff": { "max_abs": f(v.max_difference(&l)), "entries": diffs },
                }),
                table: rows,
            })
        }
    }
}

pub fn smatrix<T: Scalar>(prm: &ModelParams<T>, seed: u64) -> Result<Rendered> {
    let spec = joint_spectrum(prm, seed)?;
    let table = PolyTable::elliptic(prm.clone());
    let sm = s_matrix(&spec, &table)?;
    let size = sm.labels.len();
    let grid = |m: &ruijsenaars_fusion::linalg::CMatrix<T>| -> Vec<Vec<Cplx>> {
        (0..size).map(|i| (0..size).map(|j| c(m[(i, j)])).collect()).collect()
    };
    let mut rows = Table::new(&["matrix", "row", "col", "re", "im"]);
    for (name, m) in [("S", &sm.s), ("S_inv", &sm.sinv)] {
        for i in 0..size {
            for j in 0..size {
                let z = m[(i, j)];
                rows.push(vec![name.into(), cell(&sm.labels[i]), cell(&sm.labels[j]), num(f(z.re)), num(f(z.im))]);
            }
        }
    }
    let (det, predicted) = sm.determinant_check();
    Ok(Rendered {
        json: json!({
            "labels": sm.labels.iter().map(parts).collect::<Vec<_>>(),
            "s": grid(&sm.s),
            "s_inv": grid(&sm.sinv),
            "n_value": f(sm.n_value),
            "identity_residual": f(sm.identity_defect()),
            "determinant": {
                "abs": f(det),
                "predicted": f(predicted),
                "relative_residual": f(((det - predicted) / predicted).abs()),
            },
        }),
        table: rows,
    })
}

/// Runs a suite; the flag reports whether every check passed.
pub fn verify(suite: Suite, cfg: &VerifyConfig) -> (Rendered, bool) {
    let reports = run_suite(suite, cfg);
    let ok = reports.iter().all(|r| r.pass);
    let mut rows = Table::new(&["id", "max_abs", "max_rel", "tolerance", "pass", "note"]);
    for r in &reports {
        rows.push(vec![
            r.id.clone(),
            num(r.max_abs),
            num(r.max_rel),
            num(r.tolerance),
            r.pass.to_string(),
            r.note.clone().unwrap_or_default(),
        ]);
    }
    let json = json!({ "suite": suite, "config": cfg, "passed": ok, "reports": reports });
    (Rendered { json, table: rows }, ok)
}
