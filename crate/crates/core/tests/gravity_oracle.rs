//! Exterior potential of a finely voxelized uniform ball against the
//! closed form `h = 4M/r`, `M = (4/3) pi R^3 rho`.

use std::f64::consts::PI;

use entropy_picture::gravity::{
    mean_h, trace_potential, RegionShape, RegionSpec, SourceDistribution,
};

#[test]
fn ball_128_matches_closed_form() {
    let (radius, rho) = (0.5, 3.0);
    let src = SourceDistribution::uniform_ball([0.0; 3], radius, rho, 128).unwrap();
    let m = 4.0 / 3.0 * PI * radius.powi(3) * rho;
    // voxelization error in the mass alone
    assert!(
        (src.total_mass() / m - 1.0).abs() < 5e-3,
        "{}",
        src.total_mass() / m
    );
    for p in [
        [1.0, 0.0, 0.0],
        [0.0, 0.8, 0.9],
        [-2.0, 1.0, 0.5],
        [3.0, -3.0, 3.0],
    ] {
        let r = p.iter().map(|x| x * x).sum::<f64>().sqrt();
        let h = trace_potential(&src, p).unwrap();
        assert!(
            (h * r / (4.0 * m) - 1.0).abs() < 0.01,
            "r = {r}: {h} vs {}",
            4.0 * m / r
        );
    }
    let shell = RegionSpec::new(
        RegionShape::Shell {
            center: [0.0; 3],
            radius: 1.5,
        },
        16,
    );
    let x = mean_h(&src, &shell, 3).unwrap();
    assert!((x * 1.5 / (4.0 * m) - 1.0).abs() < 0.01);
}
