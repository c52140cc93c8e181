//! Random complete smooth fans by iterated star subdivision.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toric_mori::fan::{star_subdivide, Cone, Fan, FanMorphism};
use toric_mori::fixtures;
use toric_mori::lattice::LatticeVector;

/// Rays `e_1, ..., e_n, -(e_1 + ... + e_n)`, cones all `n`-subsets.
pub fn projective_space(n: usize) -> Fan {
    let mut rays: Vec<LatticeVector> = (0..n)
        .map(|i| LatticeVector::from_i64(&(0..n).map(|j| i64::from(i == j)).collect::<Vec<_>>()))
        .collect();
    rays.push(LatticeVector::from_i64(&vec![-1; n]));
    let cones = (0..=n).map(|skip| Cone::new((0..=n).filter(|&i| i != skip).collect())).collect();
    Fan::new(n, rays, cones)
}

fn seed(rng: &mut ChaCha8Rng, rank: usize) -> Fan {
    match (rank, rng.gen_range(0..3)) {
        (2, 0) => fixtures::p1xp1(),
        (2, 1) => fixtures::f1(),
        _ => projective_space(rank),
    }
}

/// Star-subdivides `steps` randomly chosen faces of dimension at least two.
pub fn random_fan(rng: &mut ChaCha8Rng, rank: usize, steps: usize) -> Fan {
    let mut fan = seed(rng, rank);
    for _ in 0..steps {
        let max = fan.max_cones().choose(rng).expect("nonempty fan").clone();
        let size = rng.gen_range(2..=max.len());
        let face = Cone::new(max.rays().choose_multiple(rng, size).copied().collect());
        fan = star_subdivide(&fan, &face).expect("smooth faces subdivide");
    }
    fan
}

/// `count` fans, ranks alternating between 2 and 3.
pub fn random_fans(seed: u64, count: usize) -> Vec<Fan> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let rank = 2 + i % 2;
            let steps = rng.gen_range(0..=if rank == 2 { 6 } else { 4 });
            random_fan(&mut rng, rank, steps)
        })
        .collect()
}

pub fn to_point(fan: &Fan) -> FanMorphism {
    FanMorphism::to_point(fan.clone())
}
