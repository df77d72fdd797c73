//! Lowering the nucleus under a fixed 0.9 offglide grows a second speed peak.

use diphthong_dynamics::pipeline::run_fig16_sweep;
use diphthong_dynamics::pipeline::studies::StudyParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sweep = run_fig16_sweep(&StudyParams::default())?;
    for run in &sweep.runs {
        let times: Vec<String> = run
            .peaks
            .iter()
            .map(|p| format!("{:.3}s", run.output.time[p.index]))
            .collect();
        match run.second_peak_height {
            Some(h) => println!("{}: peaks at [{}], second peak {h:.3}/s", run.label, times.join(", ")),
            None => println!("{}: peaks at [{}], no second peak", run.label, times.join(", ")),
        }
    }
    Ok(())
}
