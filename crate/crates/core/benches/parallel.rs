//! Parallel against sequential execution of the heavier enumerations.
//!
//! With the default `parallel` feature each workload runs on a one-thread pool
//! and on the full pool. Building with `--no-default-features` benchmarks the
//! plain sequential fallback under the same names.

use criterion::{criterion_group, criterion_main, BatchSize, BenchmarkId, Criterion};
use grothendieck::basis::{clear_cache, grothendieck, expand_grothendieck};
use grothendieck::chains::{enumerate_climbing_marked_chains, Marking};
use grothendieck::par;
use grothendieck::perm::Permutation;
use grothendieck::pipedream::enumerate_double_rcgraphs;
use grothendieck::subst::extension_identity_failures;
use grothendieck::verify;

fn modes() -> Vec<(&'static str, usize)> {
    if par::is_parallel() {
        vec![("sequential", 1), ("parallel", 0)]
    } else {
        vec![("fallback", 1)]
    }
}

fn bench(c: &mut Criterion, name: &str, work: impl Fn() + Send + Sync + Copy) {
    let mut group = c.benchmark_group(name);
    group.sample_size(10);
    for (mode, threads) in modes() {
        group.bench_function(BenchmarkId::from_parameter(mode), |b| {
            b.iter_batched(clear_cache, |_| par::with_threads(threads, work), BatchSize::PerIteration)
        });
    }
    group.finish();
}

fn workloads(c: &mut Criterion) {
    bench(c, "cross_constructions_s4", || {
        assert!(verify::cross_constructions(4).iter().all(|c| c.passed));
    });
    bench(c, "climbing_chains_15432", || {
        let w: Permutation = "15432".parse().unwrap();
        assert!(!enumerate_climbing_marked_chains(&w, 5, Marking::Groth).is_empty());
    });
    bench(c, "double_rcgraphs_1432", || {
        let w: Permutation = "1432".parse().unwrap();
        assert!(!enumerate_double_rcgraphs(&w, 4).is_empty());
    });
    bench(c, "expand_product", || {
        let u: Permutation = "1432".parse().unwrap();
        let v: Permutation = "2413".parse().unwrap();
        let product = &*grothendieck(&u, false) * &*grothendieck(&v, false);
        assert!(!expand_grothendieck(&product, 7).unwrap().is_empty());
    });
    bench(c, "extension_identities_k2", || {
        assert!(extension_identity_failures(2).is_empty());
    });
}

criterion_group!(benches, workloads);
criterion_main!(benches);
