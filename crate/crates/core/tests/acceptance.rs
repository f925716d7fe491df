//! End-to-end acceptance checks. Each test writes one `criterion N: PASS|FAIL` line.

use std::collections::BTreeMap;
use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use mrsqkd::adversary::TpStrategy;
use mrsqkd::bell::{chain_relation_holds, xor_rule_holds, ChainSpec};
use mrsqkd::harness::stats::binomial_sigma;
use mrsqkd::harness::{run_campaign, run_trials, verify_backends, CampaignConfig};
use mrsqkd::protocol::{Group, ProtocolRun};
use mrsqkd::{BellType, Bit, Gate};

// Written to the raw handle so the line survives output capture.
fn report(criterion: u8, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let line = format!("criterion {criterion}: {verdict}  {detail}\n");
    let _ = std::io::stderr().write_all(line.as_bytes());
}

fn within(observed: f64, expected: f64, sigma: f64) -> bool {
    (observed - expected).abs() <= 3.0 * sigma
}

#[derive(Default, Clone, Copy)]
struct Tally {
    passed: u64,
    total: u64,
}

impl Tally {
    fn add(&mut self, ok: bool) {
        self.passed += ok as u64;
        self.total += 1;
    }

    fn rate(&self) -> f64 {
        self.passed as f64 / self.total as f64
    }

    fn matches(&self, p: f64) -> bool {
        within(self.rate(), p, binomial_sigma(p, self.total))
    }
}

/// Per-check pass tallies keyed by (group, component length).
fn component_tallies(runs: &[ProtocolRun]) -> BTreeMap<(Group, usize), Tally> {
    let mut out: BTreeMap<(Group, usize), Tally> = BTreeMap::new();
    for run in runs {
        for check in &run.step4.checks {
            if let Some(ok) = check.passed {
                out.entry((check.group, check.length)).or_default().add(ok);
            }
        }
    }
    out
}

fn pooled(tallies: &BTreeMap<(Group, usize), Tally>, keep: impl Fn(Group) -> bool) -> Tally {
    tallies.iter().filter(|((g, _), _)| keep(*g)).fold(Tally::default(), |acc, (_, t)| Tally {
        passed: acc.passed + t.passed,
        total: acc.total + t.total,
    })
}

/// Fraction of all 4^c announcements that satisfy the cycle rule for all-φ+ sources.
fn enumerated_cycle_pass(c: usize) -> f64 {
    let initials = vec![BellType::PhiPlus; c];
    let total = 4usize.pow(c as u32);
    let hits = (0..total)
        .filter(|&code| {
            let results: Vec<BellType> =
                (0..c).map(|i| BellType::from_code2(((code >> (2 * i)) & 3) as u8).unwrap()).collect();
            xor_rule_holds(&initials, &results).unwrap()
        })
        .count();
    hits as f64 / total as f64
}

/// Fraction of all 4^len announcements that satisfy a chain check with fixed endpoint bits.
fn enumerated_chain_pass(len: usize, zmr1: Bit, zmr2: Bit) -> f64 {
    let total = 4usize.pow(len as u32);
    let hits = (0..total)
        .filter(|&code| {
            let mrs: Vec<BellType> =
                (0..len).map(|i| BellType::from_code2(((code >> (2 * i)) & 3) as u8).unwrap()).collect();
            let spec = ChainSpec {
                is1: BellType::PhiPlus,
                is2: BellType::PhiPlus,
                intermediates: vec![BellType::PhiPlus; len - 1],
                zmr1,
                zmr2,
                mrs,
            };
            chain_relation_holds(&spec).unwrap()
        })
        .count();
    hits as f64 / total as f64
}

#[test]
fn criterion_1_honest_completeness() {
    let started = Instant::now();
    let cfg = CampaignConfig::new(64, 1000, TpStrategy::honest(), 0);
    let result = run_campaign(&cfg).unwrap();
    let elapsed = started.elapsed();
    let aborts = result.summary.aborted;
    let matched = result.stats.iter().filter(|s| s.keys_match == Some(true)).count();
    let pass = aborts == 0 && matched == 1000 && elapsed < Duration::from_secs(60);
    report(1, pass, &format!("aborts={aborts} keys_match={matched}/1000 elapsed={elapsed:.2?}"));
    assert!(pass);
}

#[test]
fn criterion_2_qubit_efficiency() {
    let started = Instant::now();
    let cfg = CampaignConfig::new(256, 2000, TpStrategy::honest(), 0);
    let s = run_campaign(&cfg).unwrap().summary;
    let elapsed = started.elapsed();
    let key_ok = within(s.mean_raw_key, 96.0, s.raw_key_se);
    let qe_ok = within(s.qubit_efficiency, 0.1875, s.qubit_efficiency_se);
    let pass = key_ok && qe_ok && elapsed < Duration::from_secs(120);
    report(
        2,
        pass,
        &format!(
            "mean_raw_key={:.3}±{:.3} (96) qe={:.5}±{:.5} (0.1875) elapsed={elapsed:.2?}",
            s.mean_raw_key, s.raw_key_se, s.qubit_efficiency, s.qubit_efficiency_se
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_3_backend_equivalence() {
    let started = Instant::now();
    let r = verify_backends(12, 10_000, 0).unwrap();
    let elapsed = started.elapsed();
    let violations: u64 = r.circuits.iter().map(|c| c.relation_violations).sum();
    let failed: Vec<&str> = r.circuits.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    let pass = r.passed() && violations == 0 && elapsed < Duration::from_secs(300);
    report(
        3,
        pass,
        &format!("circuits={} failed={failed:?} relation_violations={violations} elapsed={elapsed:.2?}", r.circuits.len()),
    );
    assert!(pass);
}

#[test]
fn criterion_4_modification_attack() {
    let started = Instant::now();
    let mut pass = true;
    let mut parts = Vec::new();
    for m in [1usize, 2, 4, 8] {
        let cfg = CampaignConfig::new(256, 5000, TpStrategy::modification(Gate::X, m), 0);
        let s = run_campaign(&cfg).unwrap().summary;
        let expected = 1.0 - 0.5f64.powi(m as i32);
        let ok = within(s.detection_rate, expected, binomial_sigma(expected, s.trials));
        pass &= ok;
        parts.push(format!("x m={m}: {:.4} vs {expected:.4} {}", s.detection_rate, if ok { "ok" } else { "off" }));
    }
    let cfg = CampaignConfig::new(256, 5000, TpStrategy::modification(Gate::Z, 256), 0);
    let z = run_campaign(&cfg).unwrap();
    let z_ok = z.summary.aborted == 0 && z.stats.iter().all(|s| s.keys_match == Some(true));
    pass &= z_ok;
    parts.push(format!("z m=n: detection={:.4} mismatch={:.4}", z.summary.detection_rate, z.summary.mismatch_rate));
    let elapsed = started.elapsed();
    pass &= elapsed < Duration::from_secs(300);
    report(4, pass, &format!("{} elapsed={elapsed:.2?}", parts.join("; ")));
    assert!(pass);
}

#[test]
fn criterion_5_naive_measurement_attack() {
    let started = Instant::now();
    let mut runs = Vec::new();
    let mut detection = Vec::new();
    for n in [2usize, 4, 8, 16, 32, 64, 128, 256] {
        let cfg = CampaignConfig::new(n, 2000, TpStrategy::naive_measure(), 0);
        let batch = run_trials(&cfg, |_, run| run).unwrap();
        let aborted = batch.iter().filter(|r| r.stats.aborted()).count();
        detection.push((n, aborted as f64 / batch.len() as f64, batch.len() as u64));
        runs.extend(batch);
    }
    let tallies = component_tallies(&runs);
    let mut pass = true;
    let mut parts = Vec::new();

    let g1 = pooled(&tallies, |g| g == Group::One);
    let g1_ok = g1.matches(enumerated_cycle_pass(1));
    pass &= g1_ok;
    parts.push(format!("group1={:.4}/{}", g1.rate(), g1.total));

    for (&(group, len), t) in tallies.iter().filter(|((g, len), t)| *g == Group::Two && t.total >= 100 && *len <= 8) {
        let expected = enumerated_cycle_pass(len);
        let ok = t.matches(expected);
        pass &= ok;
        parts.push(format!("{group:?} c={len}: {:.4} vs {expected:.4}", t.rate()));
    }

    let expected_chain = enumerated_chain_pass(3, Bit::ZERO, Bit::ONE);
    let chains = pooled(&tallies, |g| g == Group::Four);
    let chain_ok = chains.matches(expected_chain);
    pass &= chain_ok;
    parts.push(format!("chain={:.4} vs {expected_chain:.4} over {}", chains.rate(), chains.total));

    let mut monotone = true;
    for w in detection.windows(2) {
        let (_, a, ta) = w[0];
        let (_, b, tb) = w[1];
        let sigma = (binomial_sigma(a, ta).powi(2) + binomial_sigma(b, tb).powi(2)).sqrt();
        monotone &= b >= a - 3.0 * sigma;
    }
    let (_, d256, _) = detection[detection.len() - 1];
    pass &= monotone && d256 > 0.99;
    let curve: Vec<String> = detection.iter().map(|(n, d, _)| format!("{n}:{d:.4}")).collect();
    parts.push(format!("detection {} monotone={monotone}", curve.join(",")));

    let elapsed = started.elapsed();
    report(5, pass, &format!("{} elapsed={elapsed:.2?}", parts.join("; ")));
    assert!(pass);
}

#[test]
fn criterion_6_parity_aware_attack() {
    let started = Instant::now();
    let cfg = CampaignConfig::new(64, 10_000, TpStrategy::parity_aware_measure(), 0);
    let runs = run_trials(&cfg, |_, run| run).unwrap();
    let tallies = component_tallies(&runs);

    let case4_failures: u64 = tallies.iter().filter(|((g, _), _)| *g == Group::Four).map(|(_, t)| t.total - t.passed).sum();
    let chain_aborts = runs
        .iter()
        .filter(|r| r.outcome.abort.is_some_and(|a| matches!(a.group, Group::Three | Group::Four)))
        .count();
    let cycles = pooled(&tallies, |g| matches!(g, Group::One | Group::Two));
    let cycle_ok = cycles.matches(0.5);

    let trials = runs.len() as u64;
    let predicted: f64 =
        runs.iter().map(|r| 1.0 - 0.5f64.powi(r.stats.cycle_components as i32)).sum::<f64>() / trials as f64;
    let observed = runs.iter().filter(|r| r.stats.aborted()).count() as f64 / trials as f64;
    let detection_ok = within(observed, predicted, binomial_sigma(predicted, trials));

    let pass = case4_failures == 0 && chain_aborts == 0 && cycle_ok && detection_ok;
    let elapsed = started.elapsed();
    report(
        6,
        pass,
        &format!(
            "chain_aborts={chain_aborts} case4_failures={case4_failures} cycle_pass={:.4}/{} detection={observed:.4} vs {predicted:.4} elapsed={elapsed:.2?}",
            cycles.rate(),
            cycles.total
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_7_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_mrsqkd");
    let commands: [&[&str]; 4] = [
        &["campaign", "--attack", "honest", "--n", "64", "--trials", "200"],
        &["campaign", "--attack", "modify", "--gate", "x", "--m", "4", "--n", "256", "--trials", "200"],
        &["campaign", "--attack", "naive-measure", "--n", "32", "--trials", "200"],
        &["campaign", "--attack", "parity-measure", "--n", "64", "--trials", "200"],
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (i, args) in commands.iter().enumerate() {
        let mut outputs = Vec::new();
        for rep in 0..2 {
            let path = dir.path().join(format!("c{i}_{rep}.csv"));
            let status = Command::new(bin)
                .args(*args)
                .args(["--seed", "77", "--out"])
                .arg(&path)
                .output()
                .unwrap()
                .status;
            assert!(status.success(), "{args:?} exited with {status}");
            outputs.push(std::fs::read(&path).unwrap());
        }
        let same = outputs[0] == outputs[1] && !outputs[0].is_empty();
        pass &= same;
        parts.push(format!("{}={}", args[2], if same { "identical" } else { "differs" }));
    }
    report(7, pass, &parts.join(" "));
    assert!(pass);
}
