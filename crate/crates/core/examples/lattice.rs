//! Build triangular color-code patches, print their counts, boundaries and
//! code distance, and dump the text layout of the smallest one.
//!
//! `cargo run --release --example lattice`

use colorcode::lattice::{build_patch, min_logical_weight, Color, FaceKind};

fn main() -> colorcode::Result<()> {
    for d in [3, 5, 7] {
        let p = build_patch(d)?;
        let kinds = |k: FaceKind| p.faces().iter().filter(|f| f.kind == k).count();
        println!(
            "d={d}: {} data, {} faces ({} hexagons, {} trapezoids, {} corners), {} qubits, distance {}",
            p.num_data(),
            p.num_faces(),
            kinds(FaceKind::Bulk),
            kinds(FaceKind::Trapezoid),
            kinds(FaceKind::Corner),
            p.num_qubits(),
            min_logical_weight(&p)?
        );
        for c in [Color::Red, Color::Green, Color::Blue] {
            println!("  {} boundary: {:?}", c.name(), p.boundary(c));
        }
    }
    print!("{}", build_patch(3)?.to_text());
    Ok(())
}
