use std::io::Write;

use super::sampling::{conditional_success, realization_rng, sample_in_disk, sir_at_antennas};
use super::SimConfig;
use crate::analytic::Threshold;
use crate::error::Result;

/// Writes one CSV record per realization: index, point count, q(Φ) for each
/// configured threshold and the success bit of every antenna at each
/// threshold.
pub fn write_realization_dump<W: Write>(cfg: &SimConfig, out: &mut W) -> Result<()> {
    cfg.validate()?;
    let thetas: Vec<Threshold> = cfg
        .thresholds
        .iter()
        .map(|&t| Threshold::new(t))
        .collect::<Result<_>>()?;
    let radius = cfg.resolved_disk_radius();

    let mut header = vec!["realization".to_string(), "point_count".to_string()];
    for j in 0..thetas.len() {
        header.push(format!("q_t{j}"));
    }
    for j in 0..thetas.len() {
        for k in 0..cfg.n_antennas {
            header.push(format!("s_t{j}_a{k}"));
        }
    }
    writeln!(out, "{}", header.join(","))?;

    for i in 0..cfg.num_realizations {
        let mut rng = realization_rng(cfg.seed, i as u64);
        let real = sample_in_disk(&cfg.model, radius, cfg.n_antennas, &mut rng);
        let sir = sir_at_antennas(&real, &cfg.model);
        let mut rec = vec![i.to_string(), real.points.len().to_string()];
        for &t in &thetas {
            rec.push(format!("{:?}", conditional_success(&real, &cfg.model, t).q));
        }
        for &t in &thetas {
            for s in &sir {
                rec.push(if *s > t.get() { "1" } else { "0" }.to_string());
            }
        }
        writeln!(out, "{}", rec.join(","))?;
    }
    Ok(())
}
