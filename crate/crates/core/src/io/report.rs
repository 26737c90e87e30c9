//! CSV reports. Numbers are written with six decimals, rows in a fixed
//! order, lines end in LF.

use std::io::Write;

use csv::{Terminator, WriterBuilder};

use crate::baselines::ComparisonRow;
use crate::model::ProcurementInstance;
use crate::pso::SolveReport;

use super::sweep::SweepPoint;

pub const SOLVE_HEADER: [&str; 7] = ["record", "iteration", "supplier", "item", "quantity", "price", "value"];
pub const COMPARE_HEADER: [&str; 10] = [
    "problem",
    "suppliers",
    "items",
    "repetitions",
    "best_found",
    "algorithm",
    "mean_deviation",
    "mean_objective",
    "best_objective",
    "mean_seconds",
];
pub const SWEEP_HEADER: [&str; 5] = ["w1", "gamma", "objective", "procurement_component", "delay_component"];

/// Six-decimal rendering; non-finite values print as `inf`, `-inf` or `nan`.
pub fn fixed(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

fn writer<W: Write>(out: W) -> csv::Writer<W> {
    WriterBuilder::new()
        .terminator(Terminator::Any(b'\n'))
        .from_writer(out)
}

/// The best-objective trace, then one row per allocated `(supplier, item)`
/// with its quantity, unit price and `p·q + a`, then the objective parts.
/// Wall time is left out so identical runs give identical files.
pub fn write_solve_report<W: Write>(out: W, report: &SolveReport, inst: &ProcurementInstance) -> csv::Result<()> {
    let mut w = writer(out);
    w.write_record(SOLVE_HEADER)?;
    for (k, v) in report.trace.iter().enumerate() {
        w.write_record(["trace", &k.to_string(), "", "", "", "", &fixed(*v)])?;
    }
    for (i, row) in report.allocation.rows().iter().enumerate() {
        for (j, &q) in row.iter().enumerate() {
            if q == 0 {
                continue;
            }
            let price = report.plans.get(i).and_then(|p| p.get(j)).map_or(f64::NAN, |p| p.price);
            let value = price * f64::from(q) + inst.buyer.ordering_cost[i][j];
            w.write_record([
                "allocation",
                "",
                &i.to_string(),
                &j.to_string(),
                &q.to_string(),
                &fixed(price),
                &fixed(value),
            ])?;
        }
    }
    let o = &report.objective;
    for (name, v) in [("procurement", o.procurement), ("shortage", o.shortage), ("objective", o.total)] {
        w.write_record([name, "", "", "", "", "", &fixed(v)])?;
    }
    w.flush()?;
    Ok(())
}

/// One row per `(problem, algorithm)`.
pub fn write_comparison<W: Write>(out: W, rows: &[ComparisonRow]) -> csv::Result<()> {
    let mut w = writer(out);
    w.write_record(COMPARE_HEADER)?;
    for row in rows {
        for a in &row.algorithms {
            w.write_record([
                row.problem.as_str(),
                &row.supplier_count.to_string(),
                &row.item_count.to_string(),
                &row.repetitions.to_string(),
                &fixed(row.best_found),
                &a.algorithm,
                &a.mean_deviation.map_or_else(|| "undefined".to_string(), fixed),
                &fixed(a.mean_objective),
                &fixed(a.best_objective),
                &fixed(a.mean_seconds),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_sweep<W: Write>(out: W, points: &[SweepPoint]) -> csv::Result<()> {
    let mut w = writer(out);
    w.write_record(SWEEP_HEADER)?;
    for p in points {
        w.write_record([
            fixed(p.w1),
            fixed(p.gamma),
            fixed(p.objective),
            fixed(p.procurement),
            fixed(p.shortage),
        ])?;
    }
    w.flush()?;
    Ok(())
}
