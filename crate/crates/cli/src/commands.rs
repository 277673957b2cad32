use std::time::Instant;

use entorder::measures::{evaluate, MeasureValue, Status};
use entorder::ordering::{
    parse_grid, random_search_capped, required_gap, scan_family, witness_from_values, SandwichDemo, StateRef,
    DEFAULT_PAIR_CAP,
};
use entorder::states::{FamilySpec, State, StateFile};
use serde_json::{json, Value};

use crate::config::{Failure, Format, RunConfig};

const DEFAULT_SAMPLER: &str = "ginibre:k=4";
const DEFAULT_SAMPLES: usize = 1000;
const DEFAULT_FAMILY: &str = "werner";
const DEFAULT_GRID: &str = "0.5:1.0:0.05";

pub struct Input {
    pub state: State,
    pub reference: StateRef,
}

pub fn resolve_input(cfg: &RunConfig) -> Result<Input, Failure> {
    match (&cfg.state, &cfg.state_file) {
        (Some(_), Some(_)) => Err(Failure::Config("give either --state or --state-file, not both".into())),
        (None, None) => Err(Failure::Config("no input state (use --state or --state-file)".into())),
        (Some(spec), None) => {
            let mut spec: FamilySpec = spec.parse()?;
            // a sampler spec without its own seed takes the run seed; its stream stays as written
            if let FamilySpec::Ginibre { seed, .. } | FamilySpec::Haar { seed, .. } | FamilySpec::Separable { seed, .. } =
                &mut spec
            {
                seed.get_or_insert(cfg.resolved_seed()?);
            }
            Ok(Input { state: spec.build()?, reference: StateRef::Family(spec) })
        }
        (None, Some(path)) => {
            let text =
                std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            let file = StateFile::from_json(&text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            Ok(Input { state: file.into_state()?, reference: StateRef::File(path.display().to_string()) })
        }
    }
}

/// Writes the payload to `--out` or standard output.
pub fn emit(cfg: &RunConfig, mut payload: String) -> Result<(), Failure> {
    if !payload.ends_with('\n') {
        payload.push('\n');
    }
    match &cfg.out {
        Some(path) => std::fs::write(path, payload).map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(payload.as_bytes()).and_then(|_| out.flush()).map_err(|e| Failure::Io(e.to_string()))
        }
    }
}

fn pretty(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("report types serialize")
}

fn status_name(s: Status) -> &'static str {
    match s {
        Status::Exact => "exact",
        Status::UpperBound => "upper_bound",
    }
}

pub fn measure(cfg: &RunConfig) -> Result<(), Failure> {
    let input = resolve_input(cfg)?;
    let opt = cfg.optimizer()?;
    let values: Vec<MeasureValue> =
        cfg.measures().into_iter().map(|id| evaluate(id, &input.state, &opt)).collect::<Result<_, _>>()?;
    let payload = match cfg.format() {
        Format::Json => pretty(&values),
        Format::Csv => {
            let mut s = String::from("measure,value,status,converged,iterations,restarts\n");
            for v in &values {
                s.push_str(&format!(
                    "{},{:?},{},{},{},{}\n",
                    v.measure,
                    v.value,
                    status_name(v.status),
                    v.diagnostics.converged,
                    v.diagnostics.iterations,
                    v.diagnostics.restarts
                ));
            }
            s
        }
    };
    emit(cfg, payload)
}

pub fn scan(cfg: &RunConfig) -> Result<(), Failure> {
    let family = FamilySpec::scan_family(cfg.family.as_deref().unwrap_or(DEFAULT_FAMILY))?;
    let grid = parse_grid(cfg.grid.as_deref().unwrap_or(DEFAULT_GRID))?;
    let opt = cfg.optimizer()?;
    let started = Instant::now();
    let table = scan_family(&family, &grid, &cfg.measures(), &opt)?;
    let failed = table.rows.iter().filter(|r| r.error.is_some()).count();
    eprintln!("scan: {} points, {failed} with errors, {:.1}s", grid.len(), started.elapsed().as_secs_f64());
    emit(
        cfg,
        match cfg.format() {
            Format::Json => pretty(&table.to_json()),
            Format::Csv => table.to_csv(),
        },
    )
}

pub fn search(cfg: &RunConfig) -> Result<(), Failure> {
    let sampler: FamilySpec = cfg.sampler.as_deref().unwrap_or(DEFAULT_SAMPLER).parse()?;
    let samples = cfg.samples.unwrap_or(DEFAULT_SAMPLES);
    if samples < 2 {
        return Err(Failure::Config(format!("--samples must be at least 2, got {samples}")));
    }
    let measures = cfg.measure_pair()?;
    let delta = cfg.delta()?;
    let seed = cfg.resolved_seed()?;
    let opt = cfg.optimizer()?;
    eprintln!("search: {samples} samples from {sampler}, measures {}/{}, seed {seed}", measures[0], measures[1]);
    let started = Instant::now();
    let report = random_search_capped(
        samples,
        &sampler,
        measures,
        &opt,
        delta,
        seed,
        cfg.pair_cap.unwrap_or(DEFAULT_PAIR_CAP),
    )?;
    eprintln!(
        "search: {} pairs, {} agreements, {} ties, {} verified violations, {} gap witnesses, {:.1}s",
        report.compared(),
        report.agreements,
        report.ties,
        report.violations.len(),
        report.witnesses.len(),
        started.elapsed().as_secs_f64()
    );
    emit(
        cfg,
        match cfg.format() {
            Format::Json => pretty(&report),
            Format::Csv => report.to_csv(),
        },
    )
}

pub fn witness(cfg: &RunConfig) -> Result<(), Failure> {
    let input = resolve_input(cfg)?;
    let measures = cfg.measure_pair()?;
    let delta = cfg.delta()?;
    let opt = cfg.optimizer()?;
    let v1 = evaluate(measures[0], &input.state, &opt)?.value;
    let v2 = evaluate(measures[1], &input.state, &opt)?.value;
    let rho = input.state.density();
    let found = witness_from_values(&rho, input.reference.clone(), [v1, v2], measures, &opt, delta)?;
    let sandwich = match SandwichDemo::new(&rho, input.reference.clone(), delta, measures, &opt) {
        Ok(demo) => serde_json::to_value(&demo).expect("sandwich serializes"),
        Err(e) => json!({ "error": e.to_string() }),
    };

    match &found {
        Some(w) => eprintln!(
            "witness: found, pure state Schmidt weight {:.6}, margins {:.6} / {:.6}",
            w.schmidt_weight, w.witness.margins[0], w.witness.margins[1]
        ),
        None => eprintln!(
            "witness: none (gap {:.3e}, needs more than {:.3e})",
            (v1 - v2).abs(),
            required_gap(measures, delta)
        ),
    }

    let payload = match cfg.format() {
        Format::Json => {
            let witness = match &found {
                Some(w) => serde_json::to_value(w).expect("witness serializes"),
                None => Value::String("none".into()),
            };
            pretty(&json!({
                "measures": measures,
                "delta": delta,
                "state": input.reference,
                "values": [v1, v2],
                "witness": witness,
                "sandwich": sandwich,
            }))
        }
        Format::Csv => match &found {
            Some(g) => {
                let w = &g.witness;
                format!(
                    "a,b,e1_a,e1_b,e2_a,e2_b,margin1,margin2,schmidt_weight\n\"{}\",\"{}\",{:?},{:?},{:?},{:?},{:?},{:?},{:?}\n",
                    w.state_a.to_string().replace('"', "\"\""),
                    w.state_b.to_string().replace('"', "\"\""),
                    w.e1[0],
                    w.e1[1],
                    w.e2[0],
                    w.e2[1],
                    w.margins[0],
                    w.margins[1],
                    g.schmidt_weight
                )
            }
            None => "none\n".into(),
        },
    };
    emit(cfg, payload)
}
