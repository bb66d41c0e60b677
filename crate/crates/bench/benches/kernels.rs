use std::hint::black_box;
use coorbit_core::atomic_decomp::{apply_t, build_lattice, Gram, IndexRanges, Region};
use coorbit_core::gelfand_sampling::{cyclic_project, seeded_coefficients, CyclicBand};
use coorbit_core::group_core::{GridSpec, HaarGrid, MatrixElement};
use coorbit_core::kernels::{f_n, kernel_normalize, Kernel};
use coorbit_core::transform_engine::group_convolve;
use criterion::{criterion_group, criterion_main, Criterion};

fn kernel_evaluation(c: &mut Criterion) {
    let g = MatrixElement::new(1.3, -0.7).unwrap();
    c.bench_function("f_n/n=2", |b| b.iter(|| f_n(2, black_box(g)).unwrap()));
    c.bench_function("f_n/n=5", |b| b.iter(|| f_n(5, black_box(g)).unwrap()));
}

fn convolution(c: &mut Criterion) {
    let grid = HaarGrid::new(GridSpec::matrix(1.0 / 8.0, 8.0, 33, 16.0, 65)).unwrap();
    let (_, k) = kernel_normalize(&Kernel::discrete_series(2).unwrap(), &grid).unwrap();
    let f = k.sample(&grid);
    let mut group = c.benchmark_group("convolution");
    group.sample_size(10);
    group.bench_function("f2/33x65", |b| b.iter(|| group_convolve(black_box(&f), &k).unwrap()));
    group.finish();
}

fn frame_operator(c: &mut Criterion) {
    let grid = HaarGrid::new(GridSpec::matrix(1.0 / 8.0, 8.0, 65, 12.0, 97)).unwrap();
    let region = Region::new(0.5, 2.0, 2.0).unwrap();
    let lat = build_lattice(2f64.powf(0.25), 0.25, region, IndexRanges::default(), &grid).unwrap();
    let gram = Gram::new(&lat);
    let v = seeded_coefficients(lat.len(), 7);
    let mut group = c.benchmark_group("frame_operator");
    group.sample_size(20);
    group.bench_function(format!("apply_t/{}", lat.len()), |b| b.iter(|| apply_t(&lat, &gram, black_box(&v))));
    group.finish();
}

fn cyclic(c: &mut Criterion) {
    let band = CyclicBand::new(1024, (0..256).collect()).unwrap();
    let f = seeded_coefficients(1024, 3);
    c.bench_function("cyclic_project/1024", |b| b.iter(|| cyclic_project(black_box(&f), &band).unwrap()));
}

criterion_group!(benches, kernel_evaluation, convolution, frame_operator, cyclic);
criterion_main!(benches);
