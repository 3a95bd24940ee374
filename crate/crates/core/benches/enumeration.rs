//! Sequential against data-parallel enumeration on the same systems.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use manifold_relations::algebra::Field;
use manifold_relations::relations::cayley_menger_system;
use manifold_relations::simplicial::{apply_move, MoveKind, MoveLocus, Triangulation};
use manifold_relations::variety::{count_solutions, Options};

fn enumeration(c: &mut Criterion) {
    let pentachoron = Triangulation::new(4, 5, vec![vec![0, 1, 2, 3, 4]]).unwrap();
    let image = apply_move(&pentachoron, &MoveLocus::new(MoveKind::OneFive, vec![0, 1, 2, 3, 4]))
        .unwrap()
        .result;
    let cases = [
        ("pentachoron/F4", cayley_menger_system(&pentachoron, Field::Binary(2)).unwrap(), Field::Binary(2)),
        ("one-five-image/F2", cayley_menger_system(&image, Field::Binary(1)).unwrap(), Field::Binary(1)),
    ];
    let mut group = c.benchmark_group("count");
    group.sample_size(10);
    for (name, sys, field) in &cases {
        for (label, threads) in [("sequential", 1), ("parallel", 0)] {
            let opts = Options {
                threads,
                ..Options::default()
            };
            group.bench_with_input(BenchmarkId::new(label, name), sys, |b, sys| {
                b.iter(|| count_solutions(sys, *field, &opts).unwrap().count)
            });
        }
    }
    group.finish();
}

criterion_group!(benches, enumeration);
criterion_main!(benches);
