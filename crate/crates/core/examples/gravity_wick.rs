//! From a mass lattice to a rotation of the time axis: the trace potential
//! h, its regional mean x, and the Wick factor it selects.

use entropy_picture::gravity::{
    laplacian_spot_check, mean_h, trace_potential, RegionShape, RegionSpec, SourceDistribution,
};
use entropy_picture::spicture::wick_factor;

fn main() -> entropy_picture::Result<()> {
    let mut src = SourceDistribution::uniform_ball([0.0; 3], 0.5, 1.0, 32)?;
    src.add_point([0.3, 0.3, 0.0], 0.2)?;
    let m = src.total_mass();
    println!("total mass {m:.5}, extent {:.3}", src.extent());

    println!("{:>6} {:>10} {:>10}", "r", "h", "4M/r");
    for r in [1.0, 2.0, 5.0, 10.0, 50.0] {
        println!(
            "{r:>6} {:>10.6} {:>10.6}",
            trace_potential(&src, [r, 0.0, 0.0])?,
            4.0 * m / r
        );
    }

    for radius in [1.5, 3.0, 6.0] {
        let shell = RegionSpec::new(
            RegionShape::Shell {
                center: [0.0; 3],
                radius,
            },
            4000,
        );
        let x = mean_h(&src, &shell, 1)?;
        let w = wick_factor(x)?;
        println!(
            "shell r = {radius}: x = {x:.4}, phi = {:.4}, eps = {:.4}",
            w.phi, w.epsilon
        );
    }

    // h is harmonic away from the source
    for a in [0.1, 0.05, 0.025] {
        let p = SourceDistribution::point_mass([0.0; 3], 1.0, a)?;
        println!(
            "lattice step {a}: discrete Laplacian {:.3e}",
            laplacian_spot_check(&p, [1.0, 0.7, 0.4])?
        );
    }
    Ok(())
}
