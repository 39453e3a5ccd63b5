use std::io::{self, Write};

use super::dispersive::DispersiveReport;
use super::propagate::Trajectory;
use super::rabi::excited_population;
use crate::hydrogen1d::DipoleTable;
use crate::quantum::HilbertSpec;

/// One row per stored state: time, selected basis populations, `<z>` and norm.
pub fn write_trajectory_csv<W: Write>(
    mut w: W,
    spec: &HilbertSpec,
    traj: &Trajectory,
    selected: &[usize],
    dipoles: Option<&DipoleTable>,
) -> io::Result<()> {
    let mut header = vec!["t[s]".to_string()];
    header.extend(selected.iter().map(|&i| format!("P{}[1]", spec.label(i))));
    if dipoles.is_some() {
        header.push("z_mean[m]".into());
    }
    header.push("norm[1]".into());
    writeln!(w, "{}", header.join(","))?;
    for st in &traj.states {
        let mut row = vec![format!("{:.12e}", st.t)];
        row.extend(
            selected
                .iter()
                .map(|&i| format!("{:.12e}", st.population(i))),
        );
        if let Some(d) = dipoles {
            let p2 = excited_population(spec, st);
            row.push(format!(
                "{:.12e}",
                (1.0 - p2) * d.get(1, 1) + p2 * d.get(2, 2)
            ));
        }
        row.push(format!("{:.15e}", st.norm()));
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

/// Signal-phase comparison samples of a dispersive validation.
pub fn write_phase_csv<W: Write>(mut w: W, report: &DispersiveReport) -> io::Result<()> {
    writeln!(w, "t[s],signal_phase_full[rad],signal_phase_eff[rad]")?;
    for s in &report.samples {
        writeln!(
            w,
            "{:.12e},{:.12e},{:.12e}",
            s.t, s.signal_full, s.signal_eff
        )?;
    }
    Ok(())
}
