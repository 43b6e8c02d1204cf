//! Area of a surface under the two-plane symplectic form against the
//! action around its boundary, and how fast the two converge.

use entropy_picture::cli::checks::stokes_order;
use entropy_picture::fluctuations::{
    boundary_action, random_smooth_patch, symplectic_area, DiskPatch, Plane, TwoPlanePatch,
};

fn main() -> entropy_picture::Result<()> {
    let disk = DiskPatch {
        plane: Plane::First,
        center: (0.0, 0.0),
        radius: 1.0,
        rest: (0.0, 0.0),
    };
    println!("{:>6} {:>14} {:>14} {:>10}", "n", "area", "boundary", "gap");
    for n in [16, 32, 64, 128, 256] {
        let (a, b) = (symplectic_area(&disk, n)?, boundary_action(&disk, n)?);
        println!("{n:>6} {a:>14.10} {b:>14.10} {:>10.2e}", (a - b).abs());
    }
    println!(
        "disk order: {:.3}",
        stokes_order(&disk, &[32, 64, 128, 256])?
    );

    let both = TwoPlanePatch { a: 1.5, b: -0.25 };
    println!(
        "two planes: area {:.6} (contributions add with sign)",
        symplectic_area(&both, 32)?
    );

    for seed in 0..3 {
        let p = random_smooth_patch(seed);
        println!(
            "random patch {seed}: order {:.3}",
            stokes_order(&p, &[32, 64, 128, 256])?
        );
    }
    Ok(())
}
