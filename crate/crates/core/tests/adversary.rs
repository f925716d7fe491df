//! Third-party strategies run end to end.

use mrsqkd::adversary::TpStrategy;
use mrsqkd::protocol::{run_protocol, ProtocolConfig, Record, Status, Transcript};
use mrsqkd::{BackendKind, Error, Gate};

fn strategies() -> Vec<TpStrategy> {
    let mut all = vec![TpStrategy::honest(), TpStrategy::naive_measure(), TpStrategy::parity_aware_measure()];
    all.extend(Gate::ALL.map(|g| TpStrategy::modification(g, 3)));
    all
}

#[test]
fn measuring_tp_knows_every_case3_bit_of_a_completed_run() {
    for strategy in [TpStrategy::naive_measure(), TpStrategy::parity_aware_measure()] {
        let mut completed = 0;
        for seed in 0..400 {
            let run = run_protocol(&ProtocolConfig::new(16, seed), &strategy).unwrap();
            if run.outcome.status != Status::Completed {
                continue;
            }
            completed += 1;
            let key = &run.outcome.raw_key_alice;
            let case3 = &key[run.stats.case1_bits..];
            let leaked: Vec<_> = run.side_info.case3_bits.iter().map(|&(_, b)| b).collect();
            assert_eq!(case3, leaked.as_slice(), "{strategy} seed {seed}");
            if strategy == TpStrategy::parity_aware_measure() {
                assert_eq!(run.outcome.raw_key_alice, run.outcome.raw_key_bob);
            }
        }
        assert!(completed > 10, "{strategy}: only {completed} completed runs");
    }
}

#[test]
fn honest_tp_learns_nothing() {
    let run = run_protocol(&ProtocolConfig::new(32, 5), &TpStrategy::honest()).unwrap();
    assert!(run.side_info.case3_bits.is_empty());
}

#[test]
fn z_modification_on_every_qubit_is_invisible() {
    for seed in 0..50 {
        let run = run_protocol(&ProtocolConfig::new(32, seed), &TpStrategy::modification(Gate::Z, 32)).unwrap();
        assert_eq!(run.outcome.status, Status::Completed);
        assert_eq!(run.outcome.raw_key_alice, run.outcome.raw_key_bob);
    }
}

#[test]
fn x_modification_corrupts_or_aborts() {
    let mut bad = 0;
    for seed in 0..100 {
        let run = run_protocol(&ProtocolConfig::new(16, seed), &TpStrategy::modification(Gate::X, 16)).unwrap();
        if run.outcome.status == Status::Aborted || run.outcome.raw_key_alice != run.outcome.raw_key_bob {
            bad += 1;
        }
    }
    assert!(bad > 90, "{bad}");
}

#[test]
fn modification_count_is_bounded_by_n() {
    let err = run_protocol(&ProtocolConfig::new(8, 0), &TpStrategy::modification(Gate::X, 9)).unwrap_err();
    assert!(matches!(err, Error::InvalidArgument(_)));
    assert!(run_protocol(&ProtocolConfig::new(8, 0), &TpStrategy::modification(Gate::X, 8)).is_ok());
}

#[test]
fn every_strategy_writes_a_committed_parseable_transcript() {
    for strategy in strategies() {
        for seed in 0..20 {
            let run = run_protocol(&ProtocolConfig::new(12, seed), &strategy).unwrap();
            assert!(run.transcript.ordering_holds());
            let text = run.transcript.to_text();
            let parsed = Transcript::parse(&text).unwrap();
            assert_eq!(parsed.records(), run.transcript.records());
            assert_eq!(parsed.to_text(), text);
        }
    }
}

#[test]
fn announcement_cannot_be_replaced_after_orders() {
    let run = run_protocol(&ProtocolConfig::new(8, 3), &TpStrategy::naive_measure()).unwrap();
    let mut transcript = run.transcript.clone();
    let original = transcript.announcement().unwrap().clone();
    let mut forged = original.clone();
    forged.results.reverse();
    assert!(transcript.push(Record::MrAnnounce(forged)).is_err());
    assert_eq!(transcript.announcement(), Some(&original));
    assert_eq!(transcript.records(), run.transcript.records());
}

#[test]
fn orders_before_announcement_are_rejected() {
    let run = run_protocol(&ProtocolConfig::new(8, 4), &TpStrategy::honest()).unwrap();
    let order = run
        .transcript
        .records()
        .iter()
        .find(|r| matches!(r, Record::OrderAnnounce { .. }))
        .unwrap()
        .clone();
    let mut fresh = Transcript::new();
    assert!(fresh.push(order).is_err());
}

#[test]
fn backends_agree_on_attack_outcomes() {
    for strategy in strategies() {
        let mut config = ProtocolConfig::new(8, 11);
        let tableau = run_protocol(&config, &strategy).unwrap();
        config.backend = BackendKind::Dense;
        let dense = run_protocol(&config, &strategy).unwrap();
        // same classical randomness; quantum outcomes may differ but layout must not
        assert_eq!(tableau.classification, dense.classification, "{strategy}");
    }
}
