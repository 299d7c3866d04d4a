use std::io::Write;

use super::{MultilayerDegrees, MultilayerGraph};
use crate::error::Result;

/// CSV with header `node,layer_1,...,layer_L`, nodes 0-based.
pub fn write_degrees_csv<W: Write>(degrees: &MultilayerDegrees, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["node".to_string()];
    header.extend((1..=degrees.layers()).map(|l| format!("layer_{l}")));
    w.write_record(&header)?;
    for i in 0..degrees.nodes() {
        let mut row = vec![i.to_string()];
        row.extend((0..degrees.layers()).map(|l| degrees.get(i, l).to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// One `i j multiplicity` line per distinct edge of layer `layer`.
pub fn write_layer_edges<W: Write>(graph: &MultilayerGraph, layer: usize, mut out: W) -> Result<()> {
    for e in graph.layer(layer) {
        writeln!(out, "{} {} {}", e.i, e.j, e.multiplicity)?;
    }
    out.flush()?;
    Ok(())
}
