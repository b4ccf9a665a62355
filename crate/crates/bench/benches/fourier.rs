use criterion::{criterion_group, criterion_main, Criterion};
use qgrowth_core::fourier::{self, FiniteQG};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn transforms(c: &mut Criterion) {
    for qg in [
        FiniteQG::s3(),
        FiniteQG::cyclic(12),
        FiniteQG::cocommutative("s3-dual", FiniteQG::s3().group().clone()),
    ] {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = fourier::random_element(&qg, &mut rng);
        let b = fourier::random_element(&qg, &mut rng);
        let (fa, fb) = (
            fourier::fourier_transform(&qg, &a).unwrap(),
            fourier::fourier_transform(&qg, &b).unwrap(),
        );
        c.bench_function(&format!("transform/{}", qg.name()), |bench| {
            bench.iter(|| fourier::fourier_transform(&qg, &a).unwrap())
        });
        c.bench_function(&format!("convolve/{}", qg.name()), |bench| {
            bench.iter(|| fourier::convolve(&qg, &fa, &fb).unwrap())
        });
        c.bench_function(&format!("verify/{}", qg.name()), |bench| {
            bench.iter(|| fourier::verify(&qg, 4, 1, 1e-10).unwrap())
        });
    }
}

criterion_group!(benches, transforms);
criterion_main!(benches);
