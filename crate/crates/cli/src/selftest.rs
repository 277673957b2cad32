//! Quick invariant checks on the installed build.

use std::time::Instant;

use entorder::linalg::{hermitian_eig, kron, Subsystem};
use entorder::measures::{
    entropy_of_entanglement, eof_closed_form, evaluate, relative_entropy_entanglement, AnsatzObjective, MeasureId,
    OptimizerConfig, OPTIMIZER_TOL,
};
use entorder::ordering::{same_order, sandwich_construct, witness_from_gap, StateRef};
use entorder::rng::SeedSpec;
use entorder::states::{
    binary_entropy, ginibre_mixed, haar_pure, haar_unitary, is_ppt, random_separable, werner, State,
};
use serde_json::json;

use crate::commands::emit;
use crate::config::{Failure, RunConfig};

const EXACT: f64 = 1e-9;

struct Check {
    name: &'static str,
    passed: bool,
    detail: String,
}

struct Counts {
    small: usize,
    pure: usize,
    mixed: usize,
    separable: usize,
    rotated: usize,
}

type Outcome = Result<(bool, String), entorder::Error>;
type Suite<'a> = Vec<(&'static str, Box<dyn Fn() -> Outcome + 'a>)>;

fn eigen_reconstruction(n: usize, seed: u64) -> Outcome {
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let rho = ginibre_mixed((2, 2), 4, SeedSpec::new(seed, i as u64).child(12))?;
        let eig = hermitian_eig(rho.matrix())?;
        if eig.values.windows(2).any(|w| w[0] < w[1]) {
            return Ok((false, format!("matrix {i}: eigenvalues not in descending order")));
        }
        worst = worst.max(eig.reconstruct().max_abs_diff(rho.matrix()));
    }
    Ok((worst <= 1e-10, format!("{n} matrices, max reconstruction error {worst:.2e}")))
}

fn state_invariants(n: usize, seed: u64) -> Outcome {
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let rho = haar_pure((2, 2), SeedSpec::new(seed, i as u64).child(13))?.density();
        let purity = |m: entorder::CMatrix| m.trace_product(&m).re;
        worst = worst.max((purity(rho.reduced(Subsystem::A)) - purity(rho.reduced(Subsystem::B))).abs());
        if !is_ppt(&random_separable(16, SeedSpec::new(seed, i as u64).child(14))?).ppt {
            return Ok((false, format!("separable sample {i} failed the PPT test")));
        }
    }
    let threshold_ok = is_ppt(&werner(0.5)?).ppt && !is_ppt(&werner(0.51)?).ppt;
    Ok((
        worst <= 1e-12 && threshold_ok,
        format!("{n} pure states, max reduced purity mismatch {worst:.2e}; werner PPT threshold at F = 1/2: {threshold_ok}"),
    ))
}

fn gradient_check(n: usize, seed: u64) -> Outcome {
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let s = SeedSpec::new(seed, i as u64);
        let rho = ginibre_mixed((2, 2), 4, s.child(15))?;
        let obj = AnsatzObjective::new(&rho, 1e-3)?;
        let x = AnsatzObjective::random_start(16, &mut s.child(16).rng());
        let (_, g) = obj.value_and_gradient(&x);
        let mut work = x.clone();
        let mut err = 0.0;
        let mut norm = 0.0;
        for k in 0..x.len() {
            work[k] = x[k] + 1e-5;
            let up = obj.value(&work);
            work[k] = x[k] - 1e-5;
            let down = obj.value(&work);
            work[k] = x[k];
            let fd = (up - down) / 2e-5;
            err += (g[k] - fd) * (g[k] - fd);
            norm += fd * fd;
        }
        worst = worst.max((err / norm).sqrt());
    }
    Ok((worst <= 1e-4, format!("{n} random points, max relative gradient error {worst:.2e}")))
}

fn sandwich_chain(n: usize, seed: u64) -> Outcome {
    let mut tried = 0;
    let mut i = 0u64;
    while tried < n && i < 100 * n as u64 {
        let rho = ginibre_mixed((2, 2), 2, SeedSpec::new(seed, i).child(17))?;
        i += 1;
        let ef = eof_closed_form(&rho)?.value;
        if !(0.05..0.95).contains(&ef) {
            continue;
        }
        tried += 1;
        let (phi, psi) = sandwich_construct(&rho, 0.01)?;
        let (up, down) = (eof_closed_form(&phi.density())?.value, eof_closed_form(&psi.density())?.value);
        if !(up >= ef && ef >= down) {
            return Ok((false, format!("E_F chain broken: {up} >= {ef} >= {down} fails")));
        }
    }
    Ok((tried == n, format!("{tried} states with E_F in (0.05, 0.95), chain E_F(phi) >= E_F(rho) >= E_F(psi) holds")))
}

fn pure_coincidence(n: usize, seed: u64, opt: &OptimizerConfig) -> Outcome {
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let psi = haar_pure((2, 2), SeedSpec::new(seed, i as u64))?;
        let s = entropy_of_entanglement(&psi)?.value;
        let rho = psi.density();
        let ef = eof_closed_form(&rho)?.value;
        let er = relative_entropy_entanglement(&rho, &opt.with_seed(SeedSpec::new(seed, i as u64).child(1)))?.0.value;
        if (ef - s).abs() > EXACT {
            return Ok((false, format!("state {i}: E_F {ef} vs S {s}")));
        }
        worst = worst.max((er - s).abs());
    }
    Ok((worst <= OPTIMIZER_TOL, format!("{n} pure states, max |E_R - S| = {worst:.2e}")))
}

fn werner_oracle(opt: &OptimizerConfig) -> Outcome {
    let mut worst: [f64; 2] = [0.0; 2];
    for f in [0.6, 0.75, 0.9] {
        let rho = werner(f)?;
        let c: f64 = 2.0 * f - 1.0;
        let ef_true = binary_entropy(0.5 + (1.0 - c * c).sqrt() / 2.0)?;
        let er_true = 1.0 - binary_entropy(f)?;
        worst[0] = worst[0].max((eof_closed_form(&rho)?.value - ef_true).abs());
        worst[1] = worst[1].max((relative_entropy_entanglement(&rho, opt)?.0.value - er_true).abs());
    }
    Ok((
        worst[0] <= EXACT && worst[1] <= OPTIMIZER_TOL,
        format!("max error E_F {:.2e}, E_R {:.2e}", worst[0], worst[1]),
    ))
}

fn separable_zero(n: usize, seed: u64, opt: &OptimizerConfig) -> Outcome {
    let mut worst: [f64; 2] = [0.0; 2];
    for i in 0..n {
        let rho = random_separable(16, SeedSpec::new(seed, i as u64).child(7))?;
        worst[0] = worst[0].max(eof_closed_form(&rho)?.value);
        worst[1] = worst[1].max(relative_entropy_entanglement(&rho, opt)?.0.value);
    }
    Ok((
        worst[0] <= EXACT && worst[1] <= OPTIMIZER_TOL,
        format!("{n} separable states, max E_F {:.2e}, max E_R {:.2e}", worst[0], worst[1]),
    ))
}

fn rel_ent_below_formation(n: usize, seed: u64, opt: &OptimizerConfig) -> Outcome {
    let mut worst = f64::NEG_INFINITY;
    for i in 0..n {
        let rho = ginibre_mixed((2, 2), 4, SeedSpec::new(seed, i as u64).child(8))?;
        let ef = eof_closed_form(&rho)?.value;
        let er = relative_entropy_entanglement(&rho, &opt.with_seed(SeedSpec::new(seed, i as u64).child(9)))?.0.value;
        worst = worst.max(er - ef);
    }
    Ok((worst <= OPTIMIZER_TOL, format!("{n} Ginibre states, max E_R - E_F = {worst:.2e}")))
}

fn local_unitary_invariance(n: usize, seed: u64, opt: &OptimizerConfig) -> Outcome {
    let mut worst: [f64; 2] = [0.0; 2];
    for i in 0..n {
        let s = SeedSpec::new(seed, i as u64);
        let rho = ginibre_mixed((2, 2), 3, s.child(10))?;
        let mut rng = s.child(11).rng();
        let u = kron(&haar_unitary(2, &mut rng), &haar_unitary(2, &mut rng));
        let rotated = rho.conjugate_by(&u)?;
        let (a, b) = (State::Mixed(rho), State::Mixed(rotated));
        for (k, id) in [MeasureId::FormationClosedForm, MeasureId::RelativeEntropyPPT].into_iter().enumerate() {
            let va = evaluate(id, &a, opt)?.value;
            let vb = evaluate(id, &b, opt)?.value;
            worst[k] = worst[k].max((va - vb).abs());
        }
    }
    Ok((
        worst[0] <= EXACT && worst[1] <= OPTIMIZER_TOL,
        format!("{n} rotated states, max change E_F {:.2e}, E_R {:.2e}", worst[0], worst[1]),
    ))
}

fn werner_witness(opt: &OptimizerConfig) -> Outcome {
    let ids = [MeasureId::FormationClosedForm, MeasureId::RelativeEntropyPPT];
    let found = witness_from_gap(&werner(0.75)?, ids, opt, 1e-3)?;
    Ok(match found {
        Some(g) => (
            g.witness.holds(1e-3),
            format!("werner F=0.75: Schmidt weight {:.4}, margins {:.4} / {:.4}", g.schmidt_weight, g.witness.margins[0], g.witness.margins[1]),
        ),
        None => (false, "werner F=0.75 gave no witness".into()),
    })
}

fn ordering_symmetry() -> Outcome {
    let e1 = [0.1, 0.5, 0.3, 0.3, 0.9];
    let e2 = [0.2, 0.4, 0.6, 0.1, 0.8];
    let ids = [MeasureId::FormationClosedForm, MeasureId::RelativeEntropyPPT];
    let ab = same_order(ids, &e1, &e2, 1e-3)?;
    let ba = same_order([ids[1], ids[0]], &e2, &e1, 1e-3)?;
    let ok = (ab.agreements, ab.ties, ab.violations.len()) == (ba.agreements, ba.ties, ba.violations.len())
        && ab.violations.iter().all(|w| w.holds(1e-3))
        && ab.violations.iter().all(|w| !matches!(w.state_a, StateRef::Inline(_)));
    Ok((ok, format!("{} agreements, {} ties, {} violations both ways", ab.agreements, ab.ties, ab.violations.len())))
}

pub fn run(cfg: &RunConfig) -> Result<(), Failure> {
    let strict = cfg.strict.unwrap_or(false);
    let counts = if strict {
        Counts { small: 50, pure: 100, mixed: 100, separable: 20, rotated: 20 }
    } else {
        Counts { small: 10, pure: 10, mixed: 10, separable: 4, rotated: 4 }
    };
    let seed = cfg.resolved_seed()?;
    let opt = cfg.optimizer()?;
    let started = Instant::now();

    let suite: Suite = vec![
        ("eigen_reconstruction", Box::new(|| eigen_reconstruction(10 * counts.small, seed))),
        ("state_invariants", Box::new(|| state_invariants(counts.small, seed))),
        ("gradient_check", Box::new(|| gradient_check(counts.small, seed))),
        ("pure_coincidence", Box::new(|| pure_coincidence(counts.pure, seed, &opt))),
        ("werner_oracle", Box::new(|| werner_oracle(&opt))),
        ("separable_zero", Box::new(|| separable_zero(counts.separable, seed, &opt))),
        ("rel_ent_below_formation", Box::new(|| rel_ent_below_formation(counts.mixed, seed, &opt))),
        ("local_unitary_invariance", Box::new(|| local_unitary_invariance(counts.rotated, seed, &opt))),
        ("werner_witness", Box::new(|| werner_witness(&opt))),
        ("sandwich_chain", Box::new(|| sandwich_chain(counts.small, seed))),
        ("ordering_symmetry", Box::new(ordering_symmetry)),
    ];

    let mut checks = Vec::new();
    for (name, f) in suite {
        let (passed, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
        eprintln!("{} {name}: {detail}", if passed { "PASS" } else { "FAIL" });
        checks.push(Check { name, passed, detail });
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    eprintln!("selftest: {}/{} passed in {:.1}s", checks.len() - failed, checks.len(), started.elapsed().as_secs_f64());

    let summary = json!({
        "strict": strict,
        "seed": seed,
        "passed": checks.len() - failed,
        "failed": failed,
        "checks": checks
            .iter()
            .map(|c| json!({ "name": c.name, "passed": c.passed, "detail": c.detail }))
            .collect::<Vec<_>>(),
    });
    emit(cfg, serde_json::to_string_pretty(&summary).expect("summary serializes"))?;
    if failed > 0 {
        Err(Failure::Selftest(failed))
    } else {
        Ok(())
    }
}
