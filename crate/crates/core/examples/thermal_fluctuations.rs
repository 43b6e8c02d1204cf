//! Gaussian thermodynamic fluctuations: sampling, covariance estimates and
//! the canonical (p, q) reading of a fluctuation.

use entropy_picture::fluctuations::{
    covariance_report, gaussian_sample, linearized_delta, log_probability, write_samples_csv,
    ThermoReference,
};
use entropy_picture::Constants;

fn main() -> entropy_picture::Result<()> {
    let k = Constants::natural();
    let reference = ThermoReference::ideal_gas(1.0, 1.0, 1.0)?;
    let start = std::time::Instant::now();
    let samples = gaussian_sample(&reference, 1_000_000, 42, &k)?;
    println!("1e6 samples in {:.2} s", start.elapsed().as_secs_f64());

    let rep = covariance_report(&samples, &reference, &k)?;
    for (name, e, target) in [
        ("<dS dT>/(kB T0)", rep.ds_dt_over_kbt, 1.0),
        ("<dS dtau>/kB", rep.ds_dtau_over_kb, 1.0),
        ("<dp dV>/(kB T0)", rep.dp_dv_over_kbt, -1.0),
        ("corr(dT, dV)", rep.dt_dv, 0.0),
    ] {
        println!(
            "{name:>16} = {:.5} +- {:.5}  (z = {:.2})",
            e.mean,
            e.std_error,
            e.z_score(target)
        );
    }

    let d = linearized_delta(&samples[0], &reference);
    println!("first sample as canonical delta: {d:?}");
    println!(
        "log-probability (unnormalized): {:.5}",
        log_probability(&d, &reference, &k)
    );

    let mut head = Vec::new();
    write_samples_csv(&samples[..3], &mut head)?;
    print!("{}", String::from_utf8_lossy(&head));
    Ok(())
}
