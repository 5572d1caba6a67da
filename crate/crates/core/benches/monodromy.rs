use std::f64::consts::PI;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use manifold_floquet::design::TargetMetric;
use manifold_floquet::drive::DriveShape;
use manifold_floquet::floquet;
use manifold_floquet::geometry::TorusParams;
use manifold_floquet::par::ExecMode;
use manifold_floquet::pipeline::{lab_system, torus_sectors, LabConfig, LabSystem};

const MODES: [(&str, ExecMode); 2] = [("sequential", ExecMode::Sequential), ("parallel", ExecMode::Parallel)];

fn sin2() -> DriveShape {
    DriveShape::SinusoidSquared { amplitude: 1.0 }
}

fn cosine_lab(n: usize) -> LabSystem {
    let target = TargetMetric::sinusoidal(0.3, 2.0, 0.0, 2.0 * PI).unwrap();
    lab_system(&target, &LabConfig::new(n, sin2())).unwrap()
}

fn propagator(c: &mut Criterion) {
    let mut group = c.benchmark_group("propagator");
    group.sample_size(10);
    for n in [32, 64] {
        let lab = cosine_lab(n);
        let omega = 16.0 * lab.spectral_scale().unwrap();
        let drive = lab.drive(omega).unwrap();
        for (name, mode) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &n, |b, _| {
                b.iter(|| floquet::propagator(&lab.ops, &drive, black_box(1024), mode).unwrap())
            });
        }
    }
    group.finish();
}

fn sectors(c: &mut Criterion) {
    let mut group = c.benchmark_group("torus_sectors");
    group.sample_size(10);
    let params = TorusParams::new(2.0, 1.0).unwrap();
    let base = LabConfig::new(96, sin2());
    for (name, mode) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| torus_sectors(params, &base, black_box(&[0, 1, 2, 3]), &[-1.0, 1.0], 5, mode).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, propagator, sectors);
criterion_main!(benches);
