use std::collections::BTreeMap;

use iet_core::cantor::{
    address, classify, content_bound, interval_of_word, sample_words, vdc_conjugacy_check,
    verify_conjugacy, verify_key_lemma, AddressResult, AdicSeq, Classification, ContentBound, Tail,
    TnCantorSpec,
};
use iet_core::decompose::{
    cross_validate_components, decompose_with_components, divisibility_report, SampleStatus,
};
use iet_core::identities::verify_identities;
use iet_core::render::{cantor_svg, tn_svg};
use iet_core::return_map::{first_return_map_on, verify_return_levels};
use iet_core::{
    compose_restricted, lattice_oracle, orbit, parse_rat, ComposeOptions, HalfOpenInterval,
    IetError, PeriodOutcome, Rat, ReversalMap,
};
use num_bigint::BigUint;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::maps::MapArg;
use crate::output::{Output, Status, Table};
use crate::{Command, Drawing, Suite};

type Result<T> = std::result::Result<T, IetError>;

pub fn error_code(e: &IetError) -> u8 {
    match e {
        IetError::RefinementOverflow { .. }
        | IetError::StepCapExceeded { .. }
        | IetError::OracleTooLarge { .. }
        | IetError::DepthExceeded { .. } => 3,
        IetError::NotInvariant => 1,
        _ => 2,
    }
}

pub fn status_note(s: Status) -> &'static str {
    match s {
        Status::Ok => "ok",
        Status::VerificationFailed => "verification failed",
        Status::CapExceeded => "a configured cap was reached; the result is incomplete",
    }
}

fn parse_json(text: &str) -> Value {
    serde_json::from_str(text).expect("library emits valid JSON")
}

fn parse_n(text: &str) -> Result<BigUint> {
    text.trim()
        .parse::<BigUint>()
        .ok()
        .filter(|n| *n > BigUint::ZERO)
        .ok_or_else(|| IetError::Parse(format!("N: expected a positive integer, got {text:?}")))
}

fn check_depth(depth: usize, cfg: &RunConfig) -> Result<()> {
    if depth > cfg.depth_cap {
        return Err(IetError::DepthExceeded {
            depth,
            max: cfg.depth_cap,
        });
    }
    Ok(())
}

fn opts(cfg: &RunConfig) -> ComposeOptions {
    ComposeOptions {
        piece_cap: cfg.piece_cap,
        ..Default::default()
    }
}

fn period_json(p: PeriodOutcome) -> (Value, Status) {
    match p {
        PeriodOutcome::Found(p) => (json!({ "period": p.to_string() }), Status::Ok),
        PeriodOutcome::CapReached(c) => {
            (json!({ "cap_reached": c.to_string() }), Status::CapExceeded)
        }
    }
}

pub fn run(cmd: &Command, cfg: &RunConfig) -> Result<Output> {
    match cmd {
        Command::Orbit { map, x, steps } => {
            let map: MapArg = map.parse()?;
            if *steps > cfg.iteration_cap {
                return Err(IetError::StepCapExceeded {
                    cap: cfg.iteration_cap,
                });
            }
            let rec = orbit(&map.as_map(), &parse_rat::<Rat>(x)?, *steps)?;
            let mut t = Table::new(&["step", "point"]);
            for (i, p) in rec.points.iter().enumerate() {
                t.push(vec![i.to_string(), p.to_string()]);
            }
            Ok(Output::data(parse_json(&rec.to_json())).with_table(t))
        }
        Command::Period { map, x } => {
            let map: MapArg = map.parse()?;
            let p = map
                .as_map()
                .least_period(&parse_rat(x)?, cfg.iteration_cap)?;
            let (v, status) = period_json(p);
            Ok(Output::data(v).with_status(status))
        }
        Command::Decompose {
            map,
            oracle,
            cross_validate,
            divisibility,
        } => run_decompose(map, oracle.is_some(), *cross_validate, *divisibility, cfg),
        Command::ReturnMap {
            map,
            target,
            source,
        } => {
            let map: MapArg = map.parse()?;
            let target = HalfOpenInterval::<Rat>::parse(target)?;
            let source = match source {
                Some(s) => HalfOpenInterval::parse(s)?,
                None => target.clone(),
            };
            let res = first_return_map_on(
                &map.as_map(),
                &target,
                &source,
                cfg.iteration_cap,
                cfg.piece_cap,
            )?;
            let mut t = Table::new(&["lo", "hi", "translation", "return_time"]);
            for (p, r) in res.induced.pieces().iter().zip(&res.return_times) {
                t.push(vec![
                    p.interval.lo().to_string(),
                    p.interval.hi().to_string(),
                    p.translation.to_string(),
                    r.to_string(),
                ]);
            }
            Ok(Output::data(json!({
                "induced": parse_json(&res.induced.to_json()),
                "return_times": res.return_times.iter().map(u64::to_string).collect::<Vec<_>>(),
                "constant_time": res.constant_time().map(|t| t.to_string()),
                "equals_reversal": res.as_reversal().map(|m| m.to_string()),
            }))
            .with_table(t))
        }
        Command::Compose {
            map,
            target,
            steps,
            require_invariant,
        } => {
            let map: MapArg = map.parse()?;
            let target = HalfOpenInterval::<Rat>::parse(target)?;
            let o = ComposeOptions {
                require_invariant: *require_invariant,
                ..opts(cfg)
            };
            let iet = compose_restricted(&map.as_map(), &target, *steps, o)?;
            let report = iet.validate();
            let mut v = parse_json(&iet.to_json());
            v["invariant"] = json!(report.is_valid());
            let mut t = Table::new(&["lo", "hi", "translation"]);
            for p in iet.pieces() {
                t.push(vec![
                    p.interval.lo().to_string(),
                    p.interval.hi().to_string(),
                    p.translation.to_string(),
                ]);
            }
            Ok(Output::data(v).with_table(t))
        }
        Command::Address { n, x, depth } => {
            let depth = depth.unwrap_or(cfg.depth_cap);
            check_depth(depth, cfg)?;
            let spec: TnCantorSpec = TnCantorSpec::new(parse_n(n)?, depth)?;
            let x: Rat = parse_rat(x)?;
            let v = match address(spec.spec(), &x, depth)? {
                AddressResult::Prefix(w) => {
                    let wi = interval_of_word(spec.spec(), &w)?;
                    json!({"kind": "prefix", "word": w.to_string(), "lo": wi.lo.to_string(), "hi": wi.hi.to_string()})
                }
                AddressResult::Gap { word, lo, hi } => {
                    json!({"kind": "gap", "word": word.to_string(), "lo": lo.to_string(), "hi": hi.to_string()})
                }
                AddressResult::RightEndpoint(w) => {
                    json!({"kind": "right_endpoint", "word": w.to_string()})
                }
            };
            Ok(Output::data(v))
        }
        Command::Classify { n, x, depth } => {
            let depth = depth.unwrap_or(cfg.depth_cap);
            check_depth(depth, cfg)?;
            let spec: TnCantorSpec = TnCantorSpec::new(parse_n(n)?, depth)?;
            let c = classify(&spec, &parse_rat(x)?, depth, cfg.iteration_cap)?;
            let (verdict, word) = match &c {
                Classification::Periodic { word, .. } => ("periodic", word),
                Classification::BoundaryPeriodic { word, .. } => ("boundary_periodic", word),
                Classification::InCantorPrefix(word) => ("in_cantor_prefix", word),
            };
            let mut v = json!({"verdict": verdict, "word": word.to_string()});
            let mut status = Status::Ok;
            if let Some(p) = c.period() {
                let (pv, s) = period_json(p);
                v.as_object_mut()
                    .unwrap()
                    .extend(pv.as_object().unwrap().clone());
                status = s;
            }
            Ok(Output::data(v).with_status(status))
        }
        Command::Cantor { n, levels } => {
            check_depth(*levels, cfg)?;
            let spec: TnCantorSpec = TnCantorSpec::new(parse_n(n)?, *levels)?;
            let s = spec.spec();
            let mut t = Table::new(&["level", "word", "lo", "hi"]);
            let mut rows = Vec::new();
            for k in 0..=*levels {
                let level = s.level(k)?;
                rows.push(
                    level
                        .iter()
                        .map(|wi| {
                            t.push(vec![k.to_string(), wi.word.to_string(), wi.lo.to_string(), wi.hi.to_string()]);
                            json!({"word": wi.word.to_string(), "lo": wi.lo.to_string(), "hi": wi.hi.to_string()})
                        })
                        .collect::<Vec<_>>(),
                );
            }
            let lengths = (0..=*levels)
                .map(|k| Ok(s.length(k)?.to_string()))
                .collect::<Result<Vec<_>>>()?;
            Ok(Output::data(json!({
                "n": spec.n().to_string(),
                "degenerate": s.is_degenerate(),
                "lengths": lengths,
                "levels": rows,
            }))
            .with_table(t))
        }
        Command::Content { n, d, k, eps } => {
            check_depth(*k, cfg)?;
            let spec: TnCantorSpec = TnCantorSpec::new(parse_n(n)?, *k)?;
            let b = content_bound(spec.spec(), &parse_rat(d)?, *k)?;
            let mut v = match &b {
                ContentBound::Exact(x) => json!({"kind": "exact", "value": x.to_string()}),
                ContentBound::Log2Upper(u) => json!({"kind": "log2_upper", "value": u.to_string()}),
            };
            if let Some(eps) = eps {
                let e: Rat = parse_rat(eps)?;
                if e <= Rat::from_integer(0.into()) {
                    return Err(IetError::InvalidArgument("eps must be positive".into()));
                }
                v["certified_below"] = json!(b.certified_below(&e));
            }
            Ok(Output::data(v))
        }
        Command::Verify {
            suite,
            n,
            pieces,
            max_len,
            samples,
        } => run_verify(*suite, n, *pieces, *max_len, *samples, cfg),
        Command::Render {
            what,
            n,
            pieces,
            levels,
            ..
        } => {
            let n = parse_n(n)?;
            let svg = match what {
                Drawing::Fig1 => {
                    if *pieces > cfg.piece_cap {
                        return Err(IetError::RefinementOverflow { cap: cfg.piece_cap });
                    }
                    tn_svg(&ReversalMap::<Rat>::new(n)?, *pieces)?
                }
                Drawing::Cantor => {
                    check_depth(*levels, cfg)?;
                    cantor_svg(TnCantorSpec::<Rat>::new(n, *levels)?.spec(), *levels)?
                }
            };
            Ok(Output::raw(svg))
        }
        Command::ShowConfig => Ok(Output::data(serde_json::to_value(cfg).expect("plain data"))),
    }
}

fn run_decompose(
    map: &str,
    with_oracle: bool,
    cross: Option<usize>,
    divisibility: bool,
    cfg: &RunConfig,
) -> Result<Output> {
    let map: MapArg = map.parse()?;
    let iet = map.finite()?;
    let dec = decompose_with_components(iet)?;
    let spectrum = &dec.spectrum;
    let mut v = parse_json(&spectrum.to_json());
    let mut status = Status::Ok;
    let mut t = Table::new(&["period", "measure"]);
    for e in &spectrum.entries {
        t.push(vec![e.period.to_string(), e.measure.to_string()]);
    }

    if with_oracle {
        v["oracle"] = match lattice_oracle(iet, None, cfg.oracle_cap) {
            Ok(o) => {
                let measures = o.measures::<Rat>()?;
                let from_oracle: BTreeMap<BigUint, Rat> = measures
                    .iter()
                    .map(|(len, m)| (BigUint::from(*len), m.clone()))
                    .collect();
                let from_spectrum: BTreeMap<BigUint, Rat> = spectrum
                    .entries
                    .iter()
                    .map(|e| (e.period.clone(), e.measure.clone()))
                    .collect();
                let agrees = from_oracle == from_spectrum;
                if !agrees {
                    status = Status::VerificationFailed;
                }
                json!({
                    "modulus": o.modulus.to_string(),
                    "points": o.point_count.to_string(),
                    "cycles": o.cycle_lengths.iter().map(|(len, count)| json!({
                        "length": len.to_string(),
                        "count": count.to_string(),
                        "measure": measures[len].to_string(),
                    })).collect::<Vec<_>>(),
                    "agrees": agrees,
                })
            }
            Err(e @ IetError::OracleTooLarge { .. }) => {
                status = Status::CapExceeded;
                json!({ "error": e.to_string() })
            }
            Err(e) => return Err(e),
        };
    }

    if let Some(per) = cross {
        let cv = cross_validate_components(iet, &dec, per, cfg.iteration_cap, cfg.seed)?;
        if !cv.passed() {
            status = Status::VerificationFailed;
        }
        let mismatches: Vec<Value> = cv
            .outcomes
            .iter()
            .filter_map(|o| match o.status {
                SampleStatus::Mismatch(got) => Some(json!({
                    "x": o.x.to_string(),
                    "expected": o.expected.to_string(),
                    "found": match got {
                        PeriodOutcome::Found(p) => p.to_string(),
                        PeriodOutcome::CapReached(_) => "cap".to_string(),
                    },
                })),
                _ => None,
            })
            .collect();
        v["cross_validation"] = json!({
            "seed": cv.seed.to_string(),
            "cap": cv.cap.to_string(),
            "matched": cv.matched().to_string(),
            "skipped": cv.skipped().to_string(),
            "mismatches": mismatches,
        });
    }

    if divisibility {
        let MapArg::Finite {
            rmn: Some((m, n)), ..
        } = &map
        else {
            return Err(IetError::InvalidArgument(
                "--divisibility needs an R:<m>,<n> map".into(),
            ));
        };
        v["divisibility"] = parse_json(&divisibility_report(spectrum, *m, *n)?.to_json());
    }
    Ok(Output::data(v).with_table(t).with_status(status))
}

fn suite_output(suite: &str, cases: Vec<Value>, passed: bool, t: Table) -> Output {
    let status = if passed {
        Status::Ok
    } else {
        Status::VerificationFailed
    };
    Output::data(json!({"suite": suite, "passed": passed, "cases": cases}))
        .with_table(t)
        .with_status(status)
}

fn ns_or(ns: &[u64], default: &[u64]) -> Result<Vec<BigUint>> {
    let ns = if ns.is_empty() { default } else { ns };
    ns.iter()
        .map(|n| {
            if *n == 0 {
                Err(IetError::InvalidArgument("N must be positive".into()))
            } else {
                Ok(BigUint::from(*n))
            }
        })
        .collect()
}

fn run_verify(
    suite: Suite,
    ns: &[u64],
    pieces: usize,
    max_len: Option<usize>,
    samples: usize,
    cfg: &RunConfig,
) -> Result<Output> {
    match suite {
        Suite::ReturnLemma => {
            let ns = ns_or(ns, &[1, 2, 3, 5, 10])?;
            let jobs: Vec<(BigUint, u32)> = ns
                .iter()
                .flat_map(|n| [(n.clone(), 1), (n.clone(), 2)])
                .collect();
            // par_iter keeps input order in the collected results
            let reports: Vec<_> = jobs
                .par_iter()
                .map(|(n, levels)| verify_return_levels::<Rat>(n, *levels, pieces))
                .collect();
            let mut t = Table::new(&["n", "levels", "m", "return_time", "pieces", "passed"]);
            let mut cases = Vec::new();
            for ((_, levels), r) in jobs.iter().zip(&reports) {
                t.push(vec![
                    r.n.to_string(),
                    levels.to_string(),
                    r.m.to_string(),
                    r.expected_time.to_string(),
                    r.pieces_compared.to_string(),
                    r.passed().to_string(),
                ]);
                cases.push(json!({
                    "n": r.n.to_string(),
                    "levels": levels.to_string(),
                    "m": r.m.to_string(),
                    "return_time": r.expected_time.to_string(),
                    "pieces_compared": r.pieces_compared.to_string(),
                    "passed": r.passed(),
                    "discrepancy": r.first_discrepancy,
                }));
            }
            let passed = reports.iter().all(|r| r.passed());
            Ok(suite_output("return-lemma", cases, passed, t))
        }
        Suite::KeyLemma | Suite::Conjugacy => {
            let key = suite == Suite::KeyLemma;
            let ns = ns_or(ns, &[1, 2, 3])?;
            let max_len = max_len.unwrap_or(if key { 8 } else { 12 });
            // conjugacy evaluates h one level below the word
            let depth = if key { max_len } else { max_len + 1 };
            check_depth(depth, cfg)?;
            let words = sample_words(samples, max_len, cfg.seed);
            let mut t = Table::new(&["n", "cases", "failures"]);
            let mut cases = Vec::new();
            let mut passed = true;
            for n in ns {
                let spec: TnCantorSpec = TnCantorSpec::new(n.clone(), depth)?;
                let rep = if key {
                    verify_key_lemma(&spec, max_len)?
                } else {
                    verify_conjugacy(&spec, &words)?
                };
                passed &= rep.passed();
                t.push(vec![
                    n.to_string(),
                    rep.cases.to_string(),
                    rep.failures.len().to_string(),
                ]);
                cases.push(json!({
                    "n": n.to_string(),
                    "cases": rep.cases.to_string(),
                    "failures": rep.failures,
                }));
            }
            let name = if key { "key-lemma" } else { "conjugacy" };
            Ok(suite_output(name, cases, passed, t))
        }
        Suite::Vdc => {
            // the halving spec needs two levels beyond the word
            let max_len = max_len.unwrap_or(cfg.depth_cap.saturating_sub(2).max(1));
            check_depth(max_len + 2, cfg)?;
            let mut alphas = vec![AdicSeq::zero()];
            alphas.extend(
                sample_words(samples.saturating_sub(1), max_len, cfg.seed)
                    .into_iter()
                    .map(|w| AdicSeq::new(w, Tail::AllZeros)),
            );
            let checks = alphas
                .iter()
                .map(vdc_conjugacy_check::<Rat>)
                .collect::<Result<Vec<_>>>()?;
            let failures: Vec<Value> = checks
                .iter()
                .filter(|c| !c.passed())
                .map(|c| json!({"alpha": c.alpha.to_string(), "x": c.x.to_string(), "image": c.image.to_string(), "expected": c.expected.to_string()}))
                .collect();
            let passed = failures.is_empty();
            let mut t = Table::new(&["cases", "failures"]);
            t.push(vec![checks.len().to_string(), failures.len().to_string()]);
            let cases = vec![json!({"cases": checks.len().to_string(), "failures": failures})];
            Ok(suite_output("vdc", cases, passed, t))
        }
        Suite::RemarkIdentities => {
            let checks = verify_identities::<Rat>()?;
            let passed = checks.iter().filter(|c| c.claimed).all(|c| c.holds);
            let mut t = Table::new(&["identity", "claimed", "holds", "detail"]);
            for c in &checks {
                t.push(vec![
                    c.name.clone(),
                    c.claimed.to_string(),
                    c.holds.to_string(),
                    c.detail.clone(),
                ]);
            }
            let cases = checks
                .iter()
                .map(|c| serde_json::to_value(c).expect("plain data"))
                .collect();
            Ok(suite_output("remark-identities", cases, passed, t))
        }
    }
}
