//! Acceptance criteria, one line each. Exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use ruijsenaars_fusion::fusion::Route;
use ruijsenaars_fusion::lattice::DEFAULT_SEED;
use ruijsenaars_fusion::oracles::OracleReport;
use ruijsenaars_fusion::verify::*;

const SEED: u64 = DEFAULT_SEED;

type Criterion = (&'static str, Box<dyn Fn() -> Vec<OracleReport>>);

fn criteria() -> Vec<Criterion> {
    vec![
        ("commutativity of truncated operators", Box::new(|| {
            vec![check_commutativity(&[2, 3, 4], &[1, 2, 3], &WIDE_GRID)]
        })),
        ("gauge identity on all strips of level (3,3)", Box::new(|| vec![check_gauge(3, 3, &WIDE_GRID)])),
        ("Pieri ring identity", Box::new(|| vec![check_pieri_ring(&[2, 3], 5, &GENERIC_GRID)])),
        ("unitriangularity and homogeneity", Box::new(|| vec![check_triangularity(3, 6, &GENERIC_GRID)])),
        ("vanishing support of LR coefficients", Box::new(|| {
            vec![check_lr_support(2, 4, &GENERIC_GRID), check_lr_support(3, 3, &GENERIC_GRID)]
        })),
        ("spectrum count and p=0 closed form", Box::new(|| {
            let mut grid = GENERIC_GRID.to_vec();
            grid.push((1.0, -0.3));
            vec![
                check_spectrum_count(&[2, 3], &[1, 2, 3], &grid, SEED),
                check_spectrum_p0(&[2, 3], &[1, 2, 3], &[0.3, 0.7, 1.0, 1.3, 1.7], SEED),
            ]
        })),
        ("spectral variety vanishing", Box::new(|| {
            vec![check_spectral_variety(&[2, 3], &[1, 2], &GENERIC_GRID, SEED)]
        })),
        ("dual orthogonality", Box::new(|| {
            vec![check_dual_orthogonality(&[2, 3], &[1, 2], &GENERIC_GRID, SEED)]
        })),
        ("Verlinde formula consistency", Box::new(|| check_verlinde(&[2, 3], &[1, 2], &GENERIC_GRID, SEED))),
        ("LR route vs Verlinde route", Box::new(|| {
            vec![check_route_agreement(&[2, 3], &[1, 2], &GENERIC_GRID, SEED)]
        })),
        ("classical endpoint at g=1", Box::new(|| {
            check_classical_endpoint(&[2, 3], &[1, 2], &[0.0, 0.5, -0.3], SEED)
        })),
        ("refined Pieri endpoint at p=0", Box::new(|| {
            vec![
                check_refined_pieri(&[2, 3], &[1, 2, 3], &[0.7, 1.3], Route::Lr, SEED),
                check_refined_pieri(&[2, 3], &[1, 2, 3], &[0.7, 1.3], Route::Verlinde, SEED),
            ]
        })),
        ("Kac-Peterson S-matrix and normalization", Box::new(|| {
            check_kac_peterson(&[2, 3], &[1, 2], &[0.0, 0.4], SEED)
        })),
        ("Schur and Macdonald polynomial limits", Box::new(|| {
            vec![
                check_schur_limit(&[2, 3], 4, &[0.0, 0.4], SEED),
                check_macdonald_pieri(&[2, 3], 4, &[0.7, 1.3]),
            ]
        })),
    ]
}

fn main() -> ExitCode {
    let mut failed = 0;
    for (i, (name, run)) in criteria().into_iter().enumerate() {
        let start = Instant::now();
        let reports = run();
        let ok = reports.iter().all(|r| r.pass);
        let detail: Vec<String> = reports
            .iter()
            .map(|r| {
                let mut s = format!("{} dev={:.2e} tol={:.0e}", r.id, r.max_rel, r.tolerance);
                if let Some(note) = &r.note {
                    s.push_str(&format!(" ({note})"));
                }
                s
            })
            .collect();
        println!(
            "C{:<2} {} {name} [{}] {:.1}s",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            detail.join(", "),
            start.elapsed().as_secs_f64()
        );
        if !ok {
            failed += 1;
        }
    }
    println!("{} of 14 criteria passed", 14 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
