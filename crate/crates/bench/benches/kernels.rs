use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use caliblab::calib::{block, max_sign_sum, permutation_complement};
use caliblab::ffproj::{build_grid_complex, radial_project, Polygon};
use caliblab::homology::ColumnReduction;
use caliblab::{build_scene, comass, comass_numeric, TwoVector, Vec4};

fn sample_two_vector() -> TwoVector {
    TwoVector([0.7, -1.3, 0.2, 0.9, -0.4, 1.1])
}

fn bench_comass(c: &mut Criterion) {
    let a = sample_two_vector();
    c.bench_function("comass_closed_form", |b| b.iter(|| comass(black_box(&a))));
    c.bench_function("comass_numeric_32_starts", |b| {
        b.iter(|| comass_numeric(black_box(&a), 32, 7))
    });
}

fn bench_signs(c: &mut Criterion) {
    let sc = build_scene(0.0, 0.0);
    let blk = block([0, 1], [1, 2]);
    let perm = permutation_complement([1, 2, 0]);
    c.bench_function("sign_enumeration_block", |b| {
        b.iter(|| max_sign_sum(&sc, black_box(&blk)))
    });
    c.bench_function("sign_enumeration_permutation", |b| {
        b.iter(|| max_sign_sum(&sc, black_box(&perm)))
    });
}

fn bench_reduction(c: &mut Criterion) {
    let sc = build_scene(0.0, 0.0);
    let g = build_grid_complex(&sc, 2, true).unwrap();
    let d2 = g.simplicial.boundary_matrix(2);
    c.bench_function("boundary_reduction_d2_n2", |b| {
        b.iter(|| ColumnReduction::new(black_box(&d2)))
    });
}

fn bench_radial(c: &mut Criterion) {
    let sc = build_scene(0.0, 0.0);
    let g = build_grid_complex(&sc, 1, true).unwrap();
    let cell = &g.poly.cells(4)[0];
    let center = cell.centroid();
    let p = &cell.points;
    let mix = |w: [f64; 3]| -> Vec4 {
        let x = p[0] * 0.4 + p[1] * 0.3 + p[2] * 0.2 + p[3] * 0.1;
        x * (1.0 - w.iter().sum::<f64>()) + p[1] * w[0] + p[2] * w[1] + p[4] * w[2]
    };
    let tri = Polygon::triangle(
        mix([0.2, 0.1, 0.05]),
        mix([0.05, 0.3, 0.1]),
        mix([0.1, 0.05, 0.3]),
    );
    let pieces = std::slice::from_ref(&tri);
    assert!(radial_project(cell, &center, pieces, 1e-9).is_ok());
    c.bench_function("radial_projection_one_triangle", |b| {
        b.iter(|| radial_project(cell, black_box(&center), pieces, 1e-9))
    });
}

criterion_group!(
    benches,
    bench_comass,
    bench_signs,
    bench_reduction,
    bench_radial
);
criterion_main!(benches);
