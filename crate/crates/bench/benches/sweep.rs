use criterion::{criterion_group, criterion_main, Criterion};

use chiralosc::params::PhysicalParams;
use chiralosc::phase::{detect_transition, sweep};
use chiralosc::spectra::Frame;

fn order_parameter_sweep(c: &mut Criterion) {
    let params = PhysicalParams::natural(1.0, 0.0).unwrap();
    c.bench_function("sweep_401_points", |b| {
        b.iter(|| {
            let records = sweep(&params, 0.0, 4.0, 401, 3, Frame::Relativistic).unwrap();
            detect_transition(&records, 1).unwrap()
        })
    });
}

criterion_group!(benches, order_parameter_sweep);
criterion_main!(benches);
