//! Self-contained verification suites over randomized corpora, with
//! reproducible seeding and replayable counterexamples.
//!
//! Each suite drives one family of invariants. A report carries the case
//! count, the failure count, and the first counterexample as a JSON value
//! embedding the exact failing input, so any failure can be replayed
//! directly from the report.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::lagrangian::plucker::{plucker, plucker_sign_class, SignClass};
use crate::lagrangian::witness::orbit_witness;
use crate::lagrangian::{
    self, approach_sequence, cell_degeneration, cell_index, chart, classify_double,
    classify_schubert, closure_deformation, closure_deformation_limit, covered_cell_indices, flow,
    orbit_dimension,
};
use crate::linalg::det;
use crate::rational::Rational;
use crate::sample;
use crate::symplectic::ustar::minor_identity_report;
use crate::weyl::{
    self, all_subsets, bruhat_leq_cosets, build_w_k, build_x_k, coset_index_of, dual_index,
    enumerate_group, word_to_perm,
};

pub const SUITE_NAMES: &[&str] = &[
    "weyl", "minors", "plucker", "flow", "cells", "orbits", "closure",
];

#[derive(Clone, Copy, Debug)]
pub struct VerifyConfig {
    pub n_max: usize,
    pub count: usize,
    pub seed: u64,
    pub tolerance: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            n_max: 3,
            count: 100,
            seed: 0,
            tolerance: 1e-9,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub cases: usize,
    pub failures: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_counterexample: Option<serde_json::Value>,
}

impl SuiteReport {
    fn new(suite: &str) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            cases: 0,
            failures: 0,
            first_counterexample: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    fn check(&mut self, ok: bool, counterexample: impl FnOnce() -> serde_json::Value) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first_counterexample.is_none() {
                self.first_counterexample = Some(counterexample());
            }
        }
    }
}

fn case_rng(seed: u64, case: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add(case.wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

/// Runs one named suite; None for an unknown name.
pub fn run_suite(name: &str, cfg: &VerifyConfig) -> Option<SuiteReport> {
    let report = match name {
        "weyl" => suite_weyl(cfg),
        "minors" => suite_minors(cfg),
        "plucker" => suite_plucker(cfg),
        "flow" => suite_flow(cfg),
        "cells" => suite_cells(cfg),
        "orbits" => suite_orbits(cfg),
        "closure" => suite_closure(cfg),
        _ => return None,
    };
    Some(report)
}

pub fn run_all(cfg: &VerifyConfig) -> Vec<SuiteReport> {
    SUITE_NAMES
        .iter()
        .map(|name| run_suite(name, cfg).expect("known suite name"))
        .collect()
}

/// Group structure, reduced words, coset words, and the duality
/// involution, checked against full enumeration at small rank.
fn suite_weyl(cfg: &VerifyConfig) -> SuiteReport {
    let mut r = SuiteReport::new("weyl");
    for n in 1..=cfg.n_max.min(3) {
        for w in enumerate_group(n) {
            let word = w.reduced_word();
            r.check(word.len() == w.length(), || {
                json!({"n": n, "w": w, "word": word, "length": w.length()})
            });
            let rebuilt = word_to_perm(&word, n).unwrap();
            r.check(rebuilt == w, || json!({"n": n, "w": w, "word": word}));
            let inv = w.inverse();
            r.check(weyl::compose(&inv, &w).is_identity(), || {
                json!({"n": n, "w": w, "inverse": inv})
            });
        }
        for k in all_subsets(n) {
            let w_k = build_w_k(&k, n).unwrap();
            r.check(coset_index_of(&w_k) == k, || {
                json!({"n": n, "K": k, "w_K": w_k})
            });
            let dd = dual_index(&dual_index(&k, n).unwrap(), n).unwrap();
            r.check(dd == k, || json!({"n": n, "K": k, "double_dual": dd}));
        }
        for idx in 0..=n {
            let x = build_x_k(idx, n).unwrap();
            r.check(weyl::double_coset_index_of(&x) == idx, || {
                json!({"n": n, "k": idx, "x_k": x})
            });
        }
    }
    r
}

/// Closed-form minor identities and the dense positivity criterion for
/// lower-unipotent products.
fn suite_minors(cfg: &VerifyConfig) -> SuiteReport {
    let mut r = SuiteReport::new("minors");
    for case in 0..cfg.count as u64 {
        let mut rng = case_rng(cfg.seed, case);
        let n = 1 + (case as usize % cfg.n_max.max(1));
        let params = sample::u_star_params(n, &mut rng);
        let report = minor_identity_report(&params);
        for item in &report {
            r.check(item.holds(), || json!({"n": n, "params": params, "k": item.k}));
        }
        let pos = sample::u_star_params_positive_slice(n, &mut rng);
        r.check(
            crate::symplectic::ustar::theorem_dense_check(&pos) == Ok(true),
            || json!({"n": n, "params": pos}),
        );
    }
    r
}

/// Sign-class equivalence with the exact positivity tests, and the
/// determinant scaling law under re-representation.
fn suite_plucker(cfg: &VerifyConfig) -> SuiteReport {
    let mut r = SuiteReport::new("plucker");
    for case in 0..cfg.count as u64 {
        let mut rng = case_rng(cfg.seed, case);
        let n = 1 + (case as usize % cfg.n_max.min(4).max(1));
        let p = if case % 2 == 0 {
            sample::random_lagrangian(n, &mut rng)
        } else {
            sample::nonnegative_point(n, &mut rng)
        };
        let class = plucker_sign_class(&p);
        r.check((class == SignClass::Positive) == p.is_theta_positive(), || {
            json!({"n": n, "point": p, "class": class})
        });
        r.check((class != SignClass::Mixed) == p.is_theta_nonnegative(), || {
            json!({"n": n, "point": p, "class": class})
        });
        let g = sample::invertible_matrix(n, &mut rng);
        let scaled = plucker(&p.right_translate(&g).unwrap());
        let expected = plucker(&p).scale(&det(&g).unwrap()).unwrap();
        r.check(scaled == expected, || json!({"n": n, "point": p, "g": g}));
    }
    r
}

/// Contractive flow: strict positivity for c > 1, exact semigroup law,
/// exact chart conjugacy, and Frobenius contraction.
fn suite_flow(cfg: &VerifyConfig) -> SuiteReport {
    let mut r = SuiteReport::new("flow");
    let speeds = [Rational::new(3, 2).unwrap(), Rational::from_integer(2), Rational::from_integer(10)];
    for case in 0..cfg.count as u64 {
        let mut rng = case_rng(cfg.seed, case);
        let n = 1 + (case as usize % cfg.n_max.max(1));
        let p = sample::nonnegative_point(n, &mut rng);
        let c = &speeds[case as usize % speeds.len()];
        let moved = flow(c, &p).unwrap();
        r.check(moved.is_theta_positive(), || {
            json!({"n": n, "point": p, "c": c})
        });
        let twice = flow(c, &flow(c, &p).unwrap()).unwrap();
        let joint = flow(&(c * c), &p).unwrap();
        r.check(twice.rep() == joint.rep(), || json!({"n": n, "point": p, "c": c}));

        let b = chart(&p).unwrap();
        let b_moved = chart(&moved).unwrap();
        let scale = (c * c).recip().unwrap();
        r.check(b_moved.matrix() == &b.matrix().scale(&scale), || {
            json!({"n": n, "point": p, "c": c})
        });
        if !b.matrix().is_zero() {
            r.check(
                b_moved.matrix().frobenius_sq() < b.matrix().frobenius_sq(),
                || json!({"n": n, "point": p, "c": c}),
            );
        }
    }
    r
}

/// Cholesky cells: the pivot support equals the flag profile index on
/// sampled cell points, and interior points fill the dense cell.
fn suite_cells(cfg: &VerifyConfig) -> SuiteReport {
    let mut r = SuiteReport::new("cells");
    for case in 0..cfg.count as u64 {
        let mut rng = case_rng(cfg.seed, case);
        let n = 1 + (case as usize % cfg.n_max.max(1));
        let subsets = all_subsets(n);
        let k = &subsets[case as usize % subsets.len()];
        let p = sample::cell_point(k, n, &mut rng).unwrap();
        r.check(cell_index(&p).as_ref() == Ok(k), || {
            json!({"n": n, "K": k, "point": p})
        });
        r.check(classify_schubert(&p).as_ref() == Ok(k), || {
            json!({"n": n, "K": k, "point": p})
        });
        let interior = sample::interior_point(n, &mut rng);
        let full: weyl::CosetIndex = (1..=n).collect();
        r.check(cell_index(&interior) == Ok(full), || {
            json!({"n": n, "point": interior})
        });
    }
    r
}

/// Orbit structure: stratum sanity, witness residuals, signature
/// comparability, and the dimension formula.
fn suite_orbits(cfg: &VerifyConfig) -> SuiteReport {
    let mut r = SuiteReport::new("orbits");
    for n in 1..=cfg.n_max {
        for l in 0..=n {
            for k in 0..=l {
                let formula = n * l - (l * l - l) / 2 - k * (k + 1) / 2;
                r.check(orbit_dimension(k, l, n) == Ok(formula), || {
                    json!({"n": n, "k": k, "l": l})
                });
            }
        }
    }
    for case in 0..cfg.count as u64 {
        let mut rng = case_rng(cfg.seed, case);
        let n = 1 + (case as usize % cfg.n_max.max(1));
        let p = sample::nonnegative_point(n, &mut rng);
        let (k, l) = classify_double(&p);
        r.check(k <= l, || json!({"n": n, "point": p, "k": k, "l": l}));
        let sig = lagrangian::classify(&p).unwrap();
        r.check(
            bruhat_leq_cosets(&sig.k_minus, &sig.k_plus, n) == Ok(true),
            || json!({"n": n, "point": p, "signature": sig}),
        );
        match orbit_witness(&p, cfg.tolerance) {
            Ok(w) => r.check(w.k == k && w.l == l, || {
                json!({"n": n, "point": p, "witness_k": w.k, "witness_l": w.l})
            }),
            Err(e) => r.check(false, || json!({"n": n, "point": p, "error": e.to_string()})),
        }
    }
    r
}

/// Degenerations: stratum deformations classify correctly at finite p and
/// in the limit, and covering-cell sequences land in the right cell while
/// converging entrywise at rate 1/m.
fn suite_closure(cfg: &VerifyConfig) -> SuiteReport {
    let mut r = SuiteReport::new("closure");
    let n_max = cfg.n_max.min(3);
    let p_max = (cfg.count as u64).clamp(1, 20);
    for n in 1..=n_max {
        for l in 0..=n {
            for k in 0..=l {
                for p in [1, 2, 7] {
                    let seq = approach_sequence(k, l, n, p).unwrap();
                    r.check(
                        seq.is_theta_positive() && classify_double(&seq) == (0, n),
                        || json!({"n": n, "k": k, "l": l, "p": p}),
                    );
                }
                for lp in k..=l {
                    for kp in k..=lp {
                        for p in 1..=p_max {
                            let d = closure_deformation(k, l, kp, lp, n, p).unwrap();
                            r.check(classify_double(&d) == (k, l), || {
                                json!({"n": n, "quad": [k, l, kp, lp], "p": p})
                            });
                        }
                        let lim = closure_deformation_limit(k, l, kp, lp, n).unwrap();
                        r.check(classify_double(&lim) == (kp, lp), || {
                            json!({"n": n, "quad": [k, l, kp, lp]})
                        });
                    }
                }
            }
        }
    }
    // Cell coverings: degenerate from every covering cell down to a
    // sampled point and interpolate the 1/m expansion exactly.
    for case in 0..(cfg.count as u64).min(60) {
        let mut rng = case_rng(cfg.seed, case);
        let n = 1 + (case as usize % n_max.max(1));
        let subsets = all_subsets(n);
        let l_idx = &subsets[case as usize % subsets.len()];
        for k_idx in covered_cell_indices(l_idx, n).unwrap() {
            let q = sample::cell_point(&k_idx, n, &mut rng).unwrap();
            let s_q = q.chart_form().unwrap();
            let mut diffs = Vec::new();
            for m in [1u64, 2, 5] {
                let d = cell_degeneration(&q, l_idx, m).unwrap();
                r.check(cell_index(&d).as_ref() == Ok(l_idx), || {
                    json!({"n": n, "L": l_idx, "K": k_idx, "point": q, "m": m})
                });
                diffs.push(&d.chart_form().unwrap() - &s_q);
            }
            // diff(m) must be exactly alpha/m + beta/m^2: fit alpha and
            // beta from m = 1, 2 and confirm at m = 5. The fit forces
            // every entry to vanish as m grows.
            let four = Rational::from_integer(4);
            let alpha = &diffs[1].scale(&four) - &diffs[0];
            let beta = &diffs[0] - &alpha;
            let fifth = Rational::new(1, 5).unwrap();
            let twenty_fifth = Rational::new(1, 25).unwrap();
            let predicted = &alpha.scale(&fifth) + &beta.scale(&twenty_fifth);
            r.check(predicted == diffs[2], || {
                json!({"n": n, "L": l_idx, "K": k_idx, "point": q})
            });
        }
    }
    r
}
