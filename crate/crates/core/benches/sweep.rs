//! Angle ranks of every (weighting, subgroup) pair in degree 6, one thread
//! against the rayon pool.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use abvar_core::newton::NPType;
use abvar_core::parallel::{map_with, Execution};
use abvar_core::w2d::{atlas, SignedSubgroup, Weighting};
use abvar_core::wpr::{angle_rank, WeightedPermRep};

fn pairs(d: usize) -> Vec<(Weighting, SignedSubgroup)> {
    let a = atlas(d).expect("atlas");
    NPType::tags(d)
        .iter()
        .flat_map(|np| {
            let w = Weighting::from_slopes(&np.slopes(d).expect("tabled shape")).expect("weighting");
            a.subgroups.iter().map(move |h| (w.clone(), h.clone()))
        })
        .collect()
}

fn sweep(c: &mut Criterion) {
    let work = pairs(3);
    let mut group = c.benchmark_group("angle_rank_sweep_d3");
    group.sample_size(10);
    for (name, mode) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
        group.bench_with_input(BenchmarkId::from_parameter(name), &mode, |b, &mode| {
            b.iter(|| {
                map_with(mode, &work, |(w, h)| {
                    angle_rank(&WeightedPermRep::new(w.clone(), h.clone()).expect("rep")).expect("rank")
                })
            })
        });
    }
    group.finish();
}

criterion_group!(benches, sweep);
criterion_main!(benches);
