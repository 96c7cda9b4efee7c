use std::time::{Duration, Instant};

use cymirror::cli::pipeline::{full_run, printed_diagnostics};
use cymirror::cli::catalog;
use cymirror::series::is_integral;

#[test]
fn every_catalog_model_runs_clean() {
    let models = catalog();
    let handles: Vec<_> = models
        .into_iter()
        .map(|cfg| {
            std::thread::spawn(move || {
                let m = cfg.resolve().unwrap();
                let t = Instant::now();
                let run = full_run(&m, 12, 5, None).unwrap_or_else(|e| panic!("{}: {e}", cfg.name));
                assert!(t.elapsed() < Duration::from_secs(60), "{} too slow", cfg.name);
                let name = &cfg.name;
                assert!(run.operator.spec.annihilates(&run.phi0.series), "{name}");
                assert!(run.frame.phi0.coeffs().iter().all(is_integral), "{name}: Φ0");
                assert!(run.frame.q_of_z.coeffs().iter().all(is_integral), "{name}: q(z)");
                assert!(run.frame.k_q.coeffs().iter().all(is_integral), "{name}: K_q");
                let inst = run.instantons.as_ref().unwrap();
                assert!(inst.all_integral() && inst.all_nonnegative(), "{name}: n = {:?}", inst.n);
                if let Some(p) = &cfg.printed {
                    let d = printed_diagnostics(&m, &run, p).unwrap();
                    for key in ["k_q", "instantons", "z_of_q"] {
                        if !d[key].is_null() {
                            assert_eq!(d[key]["matches"], true, "{name}: {key} {}", d[key]);
                        }
                    }
                }
                cfg.name
            })
        })
        .collect();
    let names: Vec<String> = handles.into_iter().map(|h| h.join().unwrap()).collect();
    assert_eq!(names.len(), 24);
}

#[test]
fn fitted_and_constructed_operators_agree_on_ci() {
    // the quintic's series fitted from raw coefficients gives back the constructed operator
    let quintic = cymirror::cli::catalog_entry("quintic").unwrap().resolve().unwrap();
    let constructed = cymirror::cli::pipeline::operator(&quintic, None).unwrap();
    let coeffs = cymirror::cli::pipeline::phi0(&quintic, 44, None).unwrap().series;
    let fitted = cymirror::operator::fit_recurrence_auto(&coeffs, 4, 5).unwrap();
    assert_eq!(fitted.mu_normalized().unwrap(), constructed.spec);
}
