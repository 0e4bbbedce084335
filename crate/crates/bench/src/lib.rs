//! Instance builders shared by the benchmarks. Seeded generation keeps
//! the workloads identical from run to run, so criterion's comparisons
//! against saved baselines stay meaningful.

use qsr_core::gen::{generate_instance, GenOptions, InstanceStyle};
use qsr_core::Instance;

pub fn venn_instance(universe_size: usize, seed: u64) -> Instance {
    generate_instance(&GenOptions::new(seed, universe_size, InstanceStyle::Venn))
        .expect("venn generation is total")
}

pub fn semiring_instance(universe_size: usize, seed: u64) -> Instance {
    generate_instance(&GenOptions::new(
        seed,
        universe_size,
        InstanceStyle::SemiRing,
    ))
    .expect("semiring generation is total")
}
