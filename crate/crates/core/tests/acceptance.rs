//! Acceptance suite. Runs every criterion in sequence, prints one PASS/FAIL
//! line each, and exits non-zero if any failed.
//!
//! `cargo test --test acceptance`

use std::collections::BTreeMap;
use std::fs;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use nbchain::crypto::KeyPair;
use nbchain::ledger::{
    endorse, select_peers, Block, EndorsedTransaction, EndorsementPolicy, Ledger, Membership, Orderer,
    OrdererConfig, Peer, SmartContract, TransactionProposal, TxPayload, TxValidity,
};
use nbchain::metrics::RunSummary;
use nbchain::radio::{dl_duration, ul_duration, CeLevel, CellConfig, RandomAccessChannel, TimingModel};
use nbchain::scenario::{
    latency_points, ratio_points, run_sweep, sweep, write_outputs, CalibrationProfile, RunOutput, Scenario,
    ScenarioConfig, World,
};
use nbchain::sim::{ActorId, SimTime};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

/// Checks shared by every full run the suite performs.
#[derive(Default)]
struct RunLog {
    runs: usize,
    conservation_failures: Vec<String>,
    chain_failures: Vec<String>,
}

impl RunLog {
    fn check(&mut self, label: &str, out: &RunOutput) {
        self.runs += 1;
        let traced = out.trace.metric_sum("ul_bytes") + out.trace.metric_sum("dl_bytes");
        if traced != out.traffic.total_bytes() {
            self.conservation_failures
                .push(format!("{label}: ledger {} vs trace {traced}", out.traffic.total_bytes()));
        }
        let encoded: Vec<Vec<u8>> = out.blocks.iter().map(Block::encode).collect();
        if let Err(e) = Ledger::verify_encoded(&encoded) {
            self.chain_failures.push(format!("{label}: {e}"));
        }
    }
}

fn run_point(log: &mut RunLog, label: &str, cfg: ScenarioConfig) -> Result<RunSummary, String> {
    let out = World::run(cfg).map_err(|e| format!("{label}: {e}"))?;
    log.check(label, &out);
    Ok(out.summary)
}

const FIG5_SEEDS: [u64; 5] = [1, 2, 3, 4, 5];

fn fig5_summaries(log: &mut RunLog) -> Result<(Vec<RunSummary>, Duration), String> {
    let t = Instant::now();
    let mut rows = Vec::new();
    for seed in FIG5_SEEDS {
        let base = ScenarioConfig {
            profile: CalibrationProfile::fig5(),
            seed,
            ..ScenarioConfig::default()
        };
        for p in sweep(Scenario::Usecase1, &base) {
            rows.push(run_point(log, &format!("uc1/{}/s{seed}", p.label), p.cfg)?);
        }
    }
    Ok((rows, t.elapsed()))
}

fn fig5_trend(rows: &[RunSummary], elapsed: Duration) -> Outcome {
    let pts = ratio_points(rows);
    let ratio = |p: u32, e: u32| pts.iter().find(|x| x.payload_bytes == p && x.e == e).map(|x| x.ratio);
    let ps = [50, 100, 150, 200];
    let mut problems = Vec::new();
    for e in 0..=4 {
        for w in ps.windows(2) {
            match (ratio(w[0], e), ratio(w[1], e)) {
                (Some(a), Some(b)) if b > a => {}
                other => problems.push(format!("E={e}: P {}→{} gives {other:?}", w[0], w[1])),
            }
        }
    }
    for p in ps {
        for e in 1..4 {
            match (ratio(p, e), ratio(p, e + 1)) {
                (Some(a), Some(b)) if b <= a => {}
                other => problems.push(format!("P={p}: E {e}→{} gives {other:?}", e + 1)),
            }
        }
    }
    if elapsed >= Duration::from_secs(60) {
        problems.push(format!("runtime {:.1} s >= 60 s", elapsed.as_secs_f64()));
    }
    let table: Vec<String> = ps
        .iter()
        .map(|&p| {
            let r: Vec<String> = (1..=4).map(|e| format!("{:.3}", ratio(p, e).unwrap_or(f64::NAN))).collect();
            format!("P{p}:[{}]", r.join(" "))
        })
        .collect();
    let detail = format!("{} seeds, {:.1} s, {}", FIG5_SEEDS.len(), elapsed.as_secs_f64(), table.join(" "));
    if problems.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{}; {detail}", problems.join("; ")))
    }
}

fn fig5_anchor(rows: &[RunSummary]) -> Outcome {
    let pts = ratio_points(rows);
    let r = pts
        .iter()
        .find(|x| x.payload_bytes == 50 && x.e == 2)
        .map(|x| x.ratio)
        .ok_or("no P=50, E=2 point")?;
    let detail = format!("ratio(P=50, E=2) = {r:.4}, expected [0.4, 0.6]");
    if (0.4..=0.6).contains(&r) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn fig6_anchor(log: &mut RunLog) -> Outcome {
    let base = ScenarioConfig {
        profile: CalibrationProfile::fig6(),
        seed: 1,
        ..ScenarioConfig::default()
    };
    let mut rows = Vec::new();
    let mut slowest = Duration::ZERO;
    for p in sweep(Scenario::Usecase2, &base) {
        let t = Instant::now();
        rows.push(run_point(log, &format!("uc2/{}", p.label), p.cfg)?);
        slowest = slowest.max(t.elapsed());
    }
    let pts = latency_points(&rows);
    let mean = |b: u32| pts.iter().find(|x| x.b == b).map(|x| x.mean_s);
    let baseline = mean(0).ok_or("no baseline latency")?;
    let b100 = mean(100).ok_or("no b=100 latency")?;
    let dlt: Vec<(u32, f64)> = [10, 30, 50, 100].iter().filter_map(|&b| mean(b).map(|m| (b, m))).collect();
    let mut problems = Vec::new();
    if (baseline - 0.832).abs() > 0.10 * 0.832 {
        problems.push(format!("baseline {baseline:.4} s outside 0.832 ± 10%"));
    }
    if (b100 - 1.63).abs() > 0.15 * 1.63 {
        problems.push(format!("b=100 {b100:.4} s outside 1.63 ± 15%"));
    }
    if dlt.len() != 4 {
        problems.push("missing block sizes".into());
    }
    for w in dlt.windows(2) {
        if w[1].1 < w[0].1 {
            problems.push(format!("mean drops from b={} to b={}", w[0].0, w[1].0));
        }
    }
    if let Some((b, m)) = dlt.iter().find(|(_, m)| *m < baseline) {
        problems.push(format!("b={b} mean {m:.4} below baseline"));
    }
    if slowest >= Duration::from_secs(60) {
        problems.push(format!("slowest run {:.1} s", slowest.as_secs_f64()));
    }
    let series: Vec<String> = dlt.iter().map(|(b, m)| format!("b{b}={m:.4}")).collect();
    let detail = format!(
        "baseline={baseline:.4} s {} (slowest run {:.2} s)",
        series.join(" "),
        slowest.as_secs_f64()
    );
    if problems.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{}; {detail}", problems.join("; ")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Variant {
    Compliant,
    MissingEndorsement,
    DuplicatePeer,
    CorruptedSignature,
    DuplicateTxId,
}

/// Builds one envelope of the given variant and pushes it through the
/// orderer and committer. Returns whether the variant's transaction was
/// committed (for `DuplicateTxId`, whether the second copy was).
fn policy_instance(e: u32, variant: Variant, rng: &mut ChaCha8Rng, instance: u64) -> bool {
    let seed = instance * 16 + u64::from(e);
    let pool = 4;
    let policy = EndorsementPolicy::new(e, pool);
    let ue = ActorId::Ue(0);
    let key = KeyPair::derive(seed, "ue0");
    let peers: Vec<Peer> = (0..pool).map(|i| Peer::new(i, seed)).collect();
    let mut membership = Membership::default();
    membership.insert(ue, key.public());
    for p in &peers {
        membership.insert(p.id, p.key.public());
    }
    let mut ledger = Ledger::new(SmartContract::new(1000, 6));
    let payload = TxPayload::Reading {
        sensor: 0,
        seq: rng.gen(),
        ppm: rng.gen_range(300..1500),
    }
    .encode(rng.gen_range(13..=200));
    let proposal = TransactionProposal::new_signed(ue, payload, SimTime::from_us(rng.gen()), rng.gen(), &key);
    let chosen = select_peers(&policy, rng);
    let mut endorsements: Vec<_> = chosen
        .iter()
        .map(|id| {
            let ActorId::Peer(i) = id else { unreachable!() };
            endorse(&peers[*i as usize], &proposal, &membership, &ledger).expect("valid proposal")
        })
        .collect();
    match variant {
        Variant::Compliant | Variant::DuplicateTxId => {}
        Variant::MissingEndorsement => {
            let drop = rng.gen_range(0..endorsements.len());
            endorsements.remove(drop);
        }
        Variant::DuplicatePeer => {
            // With E >= 2 one endorser is replaced by a copy of another, so the
            // envelope still has E entries; with E = 1 the copy is appended.
            let i = rng.gen_range(0..endorsements.len());
            let copy = endorsements[i];
            if endorsements.len() > 1 {
                let j = (i + 1) % endorsements.len();
                endorsements[j] = copy;
            } else {
                endorsements.push(copy);
            }
        }
        Variant::CorruptedSignature => {
            let i = rng.gen_range(0..endorsements.len());
            let byte = rng.gen_range(0..endorsements[i].signature.0.len());
            endorsements[i].signature.0[byte] ^= rng.gen_range(1..=255u8);
        }
    }
    let etx = EndorsedTransaction {
        proposal,
        endorsements,
    };
    let tx = etx.tx_id();
    let mut orderer = Orderer::new(OrdererConfig {
        block_size_b: 1,
        ..OrdererConfig::default()
    });
    let copies = if variant == Variant::DuplicateTxId { 2 } else { 1 };
    let mut valid_commits = 0;
    for k in 0..copies {
        let now = SimTime::from_secs(k + 1);
        if orderer.submit(etx.clone(), now, &policy, &membership).is_err() {
            continue;
        }
        let batch = orderer.cut_block(now).expect("b=1 cuts immediately");
        let result = ledger.validate_and_commit(batch.block, &policy, &membership).expect("chain links");
        valid_commits += result.validity.iter().filter(|v| **v == TxValidity::Valid).count();
    }
    match variant {
        Variant::DuplicateTxId => valid_commits > 1,
        _ => valid_commits == 1 && ledger.is_committed(&tx),
    }
}

fn endorsement_policy_suite() -> Outcome {
    let variants = [
        Variant::Compliant,
        Variant::MissingEndorsement,
        Variant::DuplicatePeer,
        Variant::CorruptedSignature,
        Variant::DuplicateTxId,
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0xE4D0);
    let mut failures: BTreeMap<(u32, Variant), u32> = BTreeMap::new();
    let mut cases = 0;
    for e in 1..=4 {
        for v in variants {
            for i in 0..100 {
                cases += 1;
                let committed = policy_instance(e, v, &mut rng, i);
                let expected = v == Variant::Compliant;
                if committed != expected {
                    *failures.entry((e, v)).or_default() += 1;
                }
            }
        }
    }
    if failures.is_empty() {
        Ok(format!("{cases} instances (E 1..4 × 5 variants × 100)"))
    } else {
        Err(format!("mismatches: {failures:?}"))
    }
}

fn hash_chain(log: &mut RunLog) -> Outcome {
    let cfg = ScenarioConfig {
        profile: CalibrationProfile::fig6(),
        n_ues: 2,
        n_transactions: 300,
        block_size_b: 10,
        seed: 11,
        ..ScenarioConfig::default()
    };
    let out = World::run(cfg).map_err(|e| e.to_string())?;
    log.check("chain", &out);
    if !log.chain_failures.is_empty() {
        return Err(format!("chain verification failed: {:?}", log.chain_failures));
    }
    let encoded: Vec<Vec<u8>> = out.blocks.iter().map(Block::encode).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC4A1);
    let mutations = 2000;
    let mut undetected = 0;
    for _ in 0..mutations {
        let mut chain = encoded.clone();
        let b = rng.gen_range(0..chain.len());
        let i = rng.gen_range(0..chain[b].len());
        chain[b][i] ^= rng.gen_range(1..=255u8);
        if Ledger::verify_encoded(&chain).is_ok() {
            undetected += 1;
        }
    }
    let detail = format!(
        "{} runs verified, {} blocks fuzzed with {mutations} single-byte mutations, {undetected} undetected",
        log.runs,
        encoded.len()
    );
    if undetected == 0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn ra_statistics() -> Outcome {
    let occasions = 10_000u64;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut lines = Vec::new();
    let mut ok = true;
    for n in [2u32, 4, 8, 16] {
        let mut ch = RandomAccessChannel::new(SimTime::from_ms(40), 48);
        // Successes are correlated within an occasion, so the interval is
        // built from the per-occasion success fractions.
        let mut fractions = Vec::with_capacity(occasions as usize);
        for k in 0..occasions {
            let ready = SimTime::from_ms(40 * k);
            let mut occasion = ready;
            for ue in 0..n {
                occasion = ch.register(ActorId::Ue(ue), ready, ch.draw_preamble(&mut rng)).0;
            }
            let res = ch.resolve(occasion);
            assert_eq!(res.len(), n as usize);
            fractions.push(res.iter().filter(|o| o.success).count() as f64 / f64::from(n));
        }
        let m = fractions.len() as f64;
        let mean = fractions.iter().sum::<f64>() / m;
        let var = fractions.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0);
        let half = 1.96 * (var / m).sqrt();
        let expected = (1.0 - 1.0 / 48.0f64).powi(n as i32 - 1);
        let inside = (mean - expected).abs() <= half;
        ok &= inside;
        lines.push(format!("N={n}: {mean:.4}±{half:.4} vs {expected:.4}"));
    }
    if ok {
        Ok(lines.join(", "))
    } else {
        Err(lines.join(", "))
    }
}

fn radio_timing_oracle() -> Outcome {
    // Written out rather than via div_ceil so the oracle shares no code path.
    #[allow(clippy::manual_div_ceil)]
    fn ceil_div(a: u64, b: u64) -> u64 {
        (a + b - 1) / b
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x7141);
    let mut mismatches = 0;
    let trials = 10_000;
    for _ in 0..trials {
        let bytes: u32 = rng.gen_range(1..=2000);
        let tbs: u32 = rng.gen_range(16..=2536);
        let reps: u32 = 1 << rng.gen_range(0..=7);
        let ce = [CeLevel::Ce0, CeLevel::Ce1, CeLevel::Ce2][rng.gen_range(0..3)];
        let mut cfg = CellConfig {
            ul_tbs_bits_per_ru: tbs,
            dl_tbs_bits_per_subframe: tbs,
            ..CellConfig::default()
        };
        cfg.repetitions_per_ce[ce.index()] = reps;
        let units = ceil_div(u64::from(bytes) * 8, u64::from(tbs)) * u64::from(reps);
        let ul_expected = units * 8_000;
        let dl_expected = units * 1_000;
        if ul_duration(bytes, ce, &cfg).as_us() != ul_expected || dl_duration(bytes, ce, &cfg).as_us() != dl_expected {
            mismatches += 1;
        }
        let rate: u64 = rng.gen_range(10_000..=1_000_000);
        let peak = CellConfig {
            timing_model: TimingModel::PeakRate,
            ul_peak_rate_bps: rate,
            dl_peak_rate_bps: rate,
            ..cfg
        };
        let us = ceil_div(u64::from(bytes) * 8 * 1_000_000, rate) * u64::from(reps);
        if ul_duration(bytes, ce, &peak).as_us() != us || dl_duration(bytes, ce, &peak).as_us() != us {
            mismatches += 1;
        }
    }
    let detail = format!("{trials} random (payload, TBS, repetition) triples, both timing models, {mismatches} mismatches");
    if mismatches == 0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn byte_conservation(log: &RunLog) -> Outcome {
    let detail = format!("{} runs checked", log.runs);
    if log.conservation_failures.is_empty() && log.runs > 0 {
        Ok(detail)
    } else {
        Err(format!("{detail}; failures: {:?}", log.conservation_failures))
    }
}

fn contract_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC02);
    let (threshold, window) = (1000u32, 6usize);
    let mut decisions = 0;
    let mut alarms = 0;
    for stream in 0..100 {
        let sensor = ActorId::Ue(stream);
        let readings: Vec<u32> = (0..200).map(|_| rng.gen_range(700..=1300)).collect();
        let mut contract = SmartContract::new(threshold, window);
        for i in 0..readings.len() {
            let got = contract.observe(sensor, readings[i]).1.is_some();
            let lo = (i + 1).saturating_sub(window);
            let w = &readings[lo..=i];
            let mean = w.iter().map(|&x| f64::from(x)).sum::<f64>() / w.len() as f64;
            let want = mean > f64::from(threshold);
            if got != want {
                return Err(format!("stream {stream}, reading {i}: contract {got}, oracle {want}"));
            }
            decisions += 1;
            alarms += usize::from(want);
        }
    }
    Ok(format!("100 streams × 200 readings, {decisions} decisions ({alarms} alarms) all equal"))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cases = [
        (Scenario::Usecase1, CalibrationProfile::fig5(), 100),
        (Scenario::Usecase2, CalibrationProfile::fig6(), 300),
        (Scenario::Baseline, CalibrationProfile::fig6(), 300),
    ];
    let mut files = 0;
    for (scenario, profile, n) in cases {
        let base = ScenarioConfig {
            profile,
            n_transactions: n,
            seed: 99,
            ..ScenarioConfig::default()
        };
        let mut outputs = Vec::new();
        for rep in 0..2 {
            let out = dir.path().join(format!("{}-{rep}", scenario.name()));
            fs::create_dir_all(&out).map_err(|e| e.to_string())?;
            let runs = run_sweep(&sweep(scenario, &base)).map_err(|e| e.to_string())?;
            write_outputs(&out, scenario, &runs, false).map_err(|e| e.to_string())?;
            outputs.push(out);
        }
        let mut names = vec!["summary.csv".to_string()];
        for entry in fs::read_dir(outputs[0].join("per_tx")).map_err(|e| e.to_string())? {
            names.push(format!("per_tx/{}", entry.map_err(|e| e.to_string())?.file_name().to_string_lossy()));
        }
        for name in names {
            let a = fs::read(outputs[0].join(&name)).map_err(|e| e.to_string())?;
            let b = fs::read(outputs[1].join(&name)).map_err(|e| e.to_string())?;
            if a != b {
                return Err(format!("{}: {name} differs between replays", scenario.name()));
            }
            files += 1;
        }
    }
    Ok(format!("{files} CSV files bit-identical across replays"))
}

fn main() -> ExitCode {
    let mut results: Vec<(&str, Outcome)> = Vec::new();
    let mut log = RunLog::default();

    match fig5_summaries(&mut log) {
        Ok((rows, elapsed)) => {
            results.push(("fig5 trend", fig5_trend(&rows, elapsed)));
            results.push(("fig5 anchor", fig5_anchor(&rows)));
        }
        Err(e) => {
            results.push(("fig5 trend", Err(e.clone())));
            results.push(("fig5 anchor", Err(e)));
        }
    }
    results.push(("fig6 anchor", fig6_anchor(&mut log)));
    results.push(("endorsement policy", endorsement_policy_suite()));
    results.push(("hash-chain integrity", hash_chain(&mut log)));
    results.push(("RA collision statistics", ra_statistics()));
    results.push(("radio timing oracle", radio_timing_oracle()));
    results.push(("byte conservation", byte_conservation(&log)));
    results.push(("smart-contract oracle", contract_oracle()));
    results.push(("determinism", determinism()));

    println!();
    let mut failed = 0;
    for (name, r) in &results {
        match r {
            Ok(d) => println!("PASS  {name}: {d}"),
            Err(d) => {
                failed += 1;
                println!("FAIL  {name}: {d}");
            }
        }
    }
    println!("\n{} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
