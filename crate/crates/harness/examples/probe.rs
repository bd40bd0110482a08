//! Scratch probe for the robustness studies (dev tool, not part of tests).

use pwot_core::tracker::{LayoutChoice, ParallelConfig, TrackerConfig};
use pwot_harness::experiment::{run_tracking, ExperimentConfig, ExperimentInput};
use pwot_harness::{bench, synth};
use pwot_core::rng::derive;

fn scene(name: &str, seed: u64) -> (Vec<pwot_core::FramePixels>, Vec<pwot_core::Rect>, pwot_core::Rect) {
    let spec = synth::preset(name, seed).unwrap();
    let (frames, truth) = synth::generate(&spec).unwrap();
    let slw = synth::suggested_slw(&truth).unwrap();
    (frames, truth, slw)
}

fn survived(
    frames: &[pwot_core::FramePixels],
    truth: &[pwot_core::Rect],
    slw: pwot_core::Rect,
    cfg: &TrackerConfig<f64>,
    corruption: f64,
    seed: u64,
) -> u64 {
    run_tracking(frames, Some(truth), slw, cfg, corruption, seed)
        .unwrap()
        .survived_frames()
}

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let what = args.first().map(String::as_str).unwrap_or("all");

    if what == "all" || what == "a5" {
        println!("== A5: easy clean, GP5/ycbcr/n3, 5 seeds");
        for s in 1..=5u64 {
            let (frames, truth, slw) = scene("easy", s);
            let cfg = TrackerConfig::<f64> { seed: derive(s, 1), ..Default::default() };
            let surv = survived(&frames, &truth, slw, &cfg, 0.0, derive(s, 1));
            println!("  seed {s}: survived {surv}/60");
        }
    }

    if what == "all" || what == "a6" {
        println!("== A6: maneuver, GP5 vs GP4, 5 seeds");
        for s in 1..=5u64 {
            let (frames, truth, slw) = scene("maneuver", s);
            let gp5 = TrackerConfig::<f64> { layout: LayoutChoice::Preset("GP5".into()), ..Default::default() };
            let gp4 = TrackerConfig::<f64> { layout: LayoutChoice::Preset("GP4".into()), ..Default::default() };
            let s5 = survived(&frames, &truth, slw, &gp5, 0.0, derive(s, 1));
            let s4 = survived(&frames, &truth, slw, &gp4, 0.0, derive(s, 1));
            println!("  seed {s}: GP5 {s5}  GP4 {s4}  ok={}", s5 >= s4);
        }
    }

    if what == "all" || what == "a7" {
        println!("== A7: node 3 vs 15 under corruption, easy, 5 seeds x (0.1,0.2,0.3)");
        let mut wins = 0;
        let mut total = 0;
        for s in 1..=5u64 {
            let (frames, truth, slw) = scene("easy", s);
            for corr in [0.1, 0.2, 0.3] {
                let n3 = TrackerConfig::<f64> { node_size: 3, ..Default::default() };
                let n15 = TrackerConfig::<f64> { node_size: 15, ..Default::default() };
                let s3 = survived(&frames, &truth, slw, &n3, corr, derive(s, 2));
                let s15 = survived(&frames, &truth, slw, &n15, corr, derive(s, 2));
                total += 1;
                if s3 >= s15 { wins += 1; }
                println!("  seed {s} corr {corr}: n3 {s3}  n15 {s15}");
            }
        }
        println!("  -> n3 >= n15 in {wins}/{total}");
    }

    if what == "all" || what == "a8" {
        println!("== A8: GP11 vs GP10, GP9 vs GP8 at corruption 0.2 on low-contrast, 10 seeds");
        let mut w11 = 0;
        let mut w9 = 0;
        for s in 1..=10u64 {
            let (frames, truth, slw) = scene("low-contrast", s);
            let run = |preset: &str| {
                let cfg = TrackerConfig::<f64> { layout: LayoutChoice::Preset(preset.into()), ..Default::default() };
                survived(&frames, &truth, slw, &cfg, 0.2, derive(s, 3))
            };
            let (s8, s9, s10, s11) = (run("GP8"), run("GP9"), run("GP10"), run("GP11"));
            if s11 >= s10 { w11 += 1; }
            if s9 >= s8 { w9 += 1; }
            println!("  seed {s}: GP8 {s8} GP9 {s9} GP10 {s10} GP11 {s11}");
        }
        println!("  -> GP11>=GP10 in {w11}/10, GP9>=GP8 in {w9}/10");
    }

    if what == "all" || what == "a9" {
        println!("== A9: parallel-P existence at corruption 0.2 on low-contrast, 5 seeds");
        for s in 1..=5u64 {
            let (frames, truth, slw) = scene("low-contrast", s);
            let base = TrackerConfig::<f64> { layout: LayoutChoice::Preset("GP11".into()), ..Default::default() };
            let single = |n: usize| {
                let cfg = TrackerConfig::<f64> { node_size: n, ..base.clone() };
                survived(&frames, &truth, slw, &cfg, 0.2, derive(s, 4))
            };
            let (s3, s15) = (single(3), single(15));
            print!("  seed {s}: s3 {s3} s15 {s15} | P:");
            for p10 in 1..=9u64 {
                let p = p10 as f64 / 10.0;
                let cfg = TrackerConfig::<f64> {
                    parallel: Some(ParallelConfig { central_fraction: p, ..Default::default() }),
                    ..base.clone()
                };
                let sp = survived(&frames, &truth, slw, &cfg, 0.2, derive(s, 4));
                print!(" {p:.1}={sp}");
            }
            println!();
        }
    }

    if what == "all" || what == "a10" {
        println!("== A10: bench node sizes 2..14 + 20 on easy");
        let cfg = ExperimentConfig {
            input: ExperimentInput::Preset { preset: "easy".into(), scene_seed: 7 },
            ..ExperimentConfig::preset_scene("easy", 7)
        };
        let sizes: Vec<usize> = (2..=14).chain([20]).collect();
        let rows = bench::bench_node_sizes(&sizes, &cfg).unwrap();
        for r in &rows {
            println!(
                "  N={:2} et={:8.3}ms node_bits={:8} footprint={:10} fail={:?}",
                r.node_size, r.mean_et_ms, r.node_table_bits, r.footprint_bits, r.first_failure
            );
        }
        let et = |n: usize| rows.iter().find(|r| r.node_size == n).unwrap().mean_et_ms;
        println!("  ET(20)/ET(8) = {:.2}", et(20) / et(8));
    }
}
