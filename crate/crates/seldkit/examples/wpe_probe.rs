// scratch diagnostic, removed before finishing
use seldkit::features::{build_feature_stack, MelFilterbank, StftConfig, WpeConfig};
use seldkit::synth::{plane_wave_foa, ReverbSpec, SignalKind, SourceSpec};

fn main() {
    let clip = plane_wave_foa(
        &SourceSpec {
            azimuth_deg: 30.0,
            elevation_deg: 10.0,
            distance_m: 2.0,
            signal: SignalKind::WhiteNoise { seed: 11 },
            reverb: Some(ReverbSpec::new(0.5, 0.0, 3)),
        },
        3.0,
        24000,
    );
    let fb = MelFilterbank::new(128, 512, 24000, 0.0, 12000.0).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    for run in 0..3 {
        let t0 = std::time::Instant::now();
        let stack = pool.install(|| {
            build_feature_stack(&clip, true, &StftConfig::default(), &fb, &WpeConfig::default())
                .unwrap()
        });
        println!("run {run}: 1-thread DR stack {}x{}x{} in {:.2}s", stack.num_channels(), stack.num_frames, stack.num_bands, t0.elapsed().as_secs_f64());
    }
}
