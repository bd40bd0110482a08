// raw respond-cost microprobe across node sizes at large pattern size
use std::time::Instant;
use pwot_core::wnn::{make_input_mapping, new_discriminator};
use pwot_core::{BitPattern, SplitMix64};

fn main() {
    let total = 3956usize; // 86 x 46 window
    let mut rng = SplitMix64::new(1);
    let patterns: Vec<BitPattern> = (0..400)
        .map(|_| {
            let bits: Vec<bool> = (0..total).map(|_| rng.next_u64() & 1 == 1).collect();
            BitPattern::from_bits(total as u32, 1, &bits).unwrap()
        })
        .collect();
    for n in [2usize, 8, 14, 16, 18, 20, 22] {
        let mut d = new_discriminator(make_input_mapping(total, n, 5).unwrap());
        d.train(&patterns[0]).unwrap();
        let mut sink = 0u64;
        let started = Instant::now();
        let reps = 60;
        for _ in 0..reps {
            for p in &patterns {
                sink += d.respond(p).unwrap() as u64;
            }
        }
        let per_frame_ms = started.elapsed().as_secs_f64() * 1e3 / reps as f64;
        println!(
            "N={n:2} k={:4} table={:6.1}MB  respond/frame(400 regions)={per_frame_ms:7.3}ms  (sink {sink})",
            d.node_count(),
            d.memory_footprint_bits() as f64 / 8e6,
        );
    }
}
