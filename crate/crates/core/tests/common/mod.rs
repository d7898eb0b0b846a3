#![allow(dead_code)]

use gnep::flowgame::{enumerate_joint_profiles, generate_instance, GenParams, IntProfile, SourceMode, WeightMode};
use gnep::CdfgInstance;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn params(nodes: usize, players: usize, multi: bool, unit: bool) -> GenParams {
    GenParams {
        nodes,
        players,
        source_mode: if multi { SourceMode::Multi } else { SourceMode::Single },
        weight_mode: if unit { WeightMode::Unit } else { WeightMode::Random },
    }
}

/// Generated instances whose joint set enumerates within `cap`, with `X`.
pub fn small_instances(
    count: usize,
    cap: usize,
    mut shape: impl FnMut(u64) -> GenParams,
) -> Vec<(u64, CdfgInstance, Vec<IntProfile>)> {
    let mut out = Vec::new();
    let mut seed = 0;
    while out.len() < count {
        let p = shape(seed);
        if let Ok(inst) = generate_instance(p, seed) {
            if let Ok(x) = enumerate_joint_profiles(&inst, cap) {
                if !x.is_empty() {
                    out.push((seed, inst, x));
                }
            }
        }
        seed += 1;
        assert!(seed < 10_000, "ran out of seeds");
    }
    out
}

pub fn sample<T: Clone>(items: &[T], k: usize, seed: u64) -> Vec<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    items.choose_multiple(&mut rng, k.min(items.len())).cloned().collect()
}
