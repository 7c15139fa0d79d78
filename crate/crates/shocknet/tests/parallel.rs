//! Parallel drivers reproduce the sequential core results exactly.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use shocknet::core::fixtures;
use shocknet::core::signature::{partition_tally, signature_mc};
use shocknet::core::sim::{mc_reliability_curve, simulate_lifetimes, SimConfig};
use shocknet::core::{DamageModel, Error, FirstArrivalLaw, Grid, Network, SignatureKind};
use shocknet::parallel;

fn networks() -> Vec<Network> {
    let mut nets = vec![fixtures::bridge(), fixtures::series_parallel(), fixtures::series(4), fixtures::parallel(3)];
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for links in 3..=6 {
        nets.push(fixtures::random_network(&mut rng, 4, links));
    }
    nets
}

#[test]
fn partition_tally_matches_sequential() {
    for net in networks() {
        assert_eq!(parallel::partition_tally(&net, 10).unwrap(), partition_tally(&net, 10).unwrap());
    }
}

#[test]
fn partition_tally_limits() {
    let net = fixtures::parallel(6);
    assert!(matches!(parallel::partition_tally(&net, 5), Err(Error::EnumerationLimit { n: 6, limit: 5 })));
    let down = Network::from_edges(&[("a", "b"), ("c", "d")], &["a", "c"]).unwrap();
    assert_eq!(parallel::partition_tally(&down, 10), Err(Error::InitiallyDown));
}

#[test]
fn signature_mc_matches_sequential() {
    for net in networks().iter().take(4) {
        for kind in [SignatureKind::Classical, SignatureKind::Tie, SignatureKind::Fatal] {
            assert_eq!(
                parallel::signature_mc(net, kind, 3_000, 11).unwrap(),
                signature_mc(net, kind, 3_000, 11).unwrap()
            );
        }
    }
    assert!(parallel::signature_mc(&fixtures::bridge(), SignatureKind::Tie, 0, 1).is_err());
}

#[test]
fn lifetimes_match_sequential() {
    let net = fixtures::bridge();
    let law = FirstArrivalLaw::weibull(2.0, 1.0).unwrap();
    let tally = partition_tally(&net, 10).unwrap();
    let configs = [
        SimConfig::model_faithful(&tally.tie_signature().unwrap(), law.clone(), DamageModel::binomial(0.3).unwrap(), 2_000, 5)
            .unwrap(),
        SimConfig::model_faithful(&tally.fatal_signature().unwrap(), law.clone(), DamageModel::Fatal, 2_000, 5).unwrap(),
        SimConfig::mechanistic(&net, law, DamageModel::binomial(0.3).unwrap(), 2_000, 5).unwrap(),
    ];
    let grid = Grid::uniform(0.0, 3.0, 31).unwrap();
    for cfg in &configs {
        assert_eq!(parallel::simulate_lifetimes(cfg), simulate_lifetimes(cfg));
        assert_eq!(parallel::mc_reliability_curve(cfg, &grid).unwrap(), mc_reliability_curve(cfg, &grid).unwrap());
    }
}

#[test]
fn thread_count_does_not_matter() {
    let net = fixtures::bridge();
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| {
            (
                parallel::partition_tally(&net, 10).unwrap(),
                parallel::signature_mc(&net, SignatureKind::Tie, 5_000, 3).unwrap(),
            )
        })
    };
    assert_eq!(run(1), run(4));
}
