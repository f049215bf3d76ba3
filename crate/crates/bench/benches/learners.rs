use commit_density::learn::{BoostConfig, ForestConfig, LearnerConfig};
use commit_density_bench::three_class;
use criterion::{criterion_group, criterion_main, Criterion};

fn learners(c: &mut Criterion) {
    let data = three_class(1_000, 22, 7);
    let mut g = c.benchmark_group("train_1000x22");
    g.sample_size(10);
    g.bench_function("forest_100", |b| {
        let cfg = LearnerConfig::Forest(ForestConfig {
            n_trees: 100,
            seed: 1,
            ..Default::default()
        });
        b.iter(|| cfg.train(&data).unwrap())
    });
    g.bench_function("logitboost_50", |b| {
        let cfg = LearnerConfig::Logitboost(BoostConfig::default());
        b.iter(|| cfg.train(&data).unwrap())
    });
    g.finish();

    let forest = LearnerConfig::Forest(ForestConfig {
        n_trees: 100,
        seed: 1,
        ..Default::default()
    })
    .train(&data)
    .unwrap();
    c.bench_function("forest_100_predict_1000", |b| b.iter(|| forest.predict_dataset(&data).unwrap()));
}

criterion_group!(benches, learners);
criterion_main!(benches);
