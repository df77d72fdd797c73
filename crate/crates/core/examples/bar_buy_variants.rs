//! Three accounts of a one-target *bar* against a two-target *buy*: peak
//! counts and driven durations of the simulated TBCD speed.

use diphthong_dynamics::pipeline::run_fig14_study;
use diphthong_dynamics::pipeline::studies::StudyParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let study = run_fig14_study(&StudyParams::default())?;
    println!("{:<6} {:>10} {:>6} {:>7}", "run", "duration", "peaks", "minima");
    for run in &study.runs {
        println!(
            "{:<6} {:>9.3}s {:>6} {:>7}",
            run.label,
            run.duration_s,
            run.peak_count(),
            run.minima_count()
        );
    }
    for (item, d) in study.durations()? {
        println!("{item}: mean duration {:.3} s over {} runs", d.mean, d.n);
    }
    Ok(())
}
