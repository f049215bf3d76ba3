use std::hint::black_box;

use commit_density::diffcore::{analyze_hunk, rename_similarity, LineLexer};
use commit_density::ProfileSet;
use commit_density_bench::c_lines;
use criterion::{criterion_group, criterion_main, Criterion, Throughput};

fn lexer(c: &mut Criterion) {
    let profiles = ProfileSet::default();
    let profile = profiles.by_name("c-family").unwrap();
    let lines = c_lines(10_000, 1);

    let mut g = c.benchmark_group("lexer");
    g.throughput(Throughput::Elements(lines.len() as u64));
    g.bench_function("classify_10k_lines", |b| {
        b.iter(|| {
            let mut lx = LineLexer::new(profile);
            lines.iter().map(|l| lx.classify(l) as u8 as u64).sum::<u64>()
        })
    });
    g.finish();

    let added = c_lines(400, 2);
    let deleted = c_lines(300, 3);
    c.bench_function("analyze_hunk_400_300", |b| {
        b.iter(|| analyze_hunk(black_box(&added), black_box(&deleted), profile))
    });
    c.bench_function("rename_similarity_2k", |b| {
        let old = c_lines(2_000, 4);
        let mut new = old.clone();
        new.truncate(1_500);
        b.iter(|| rename_similarity(black_box(&old), black_box(&new)).unwrap())
    });
}

criterion_group!(benches, lexer);
criterion_main!(benches);
