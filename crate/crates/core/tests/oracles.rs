//! Values frozen from an independent 40-digit evaluation of `f ρ_β f†` summed
//! directly over 400+ Fock levels.

use thermoqubit::{
    bogoliubov_factors, fidelity_numeric, mandel_numeric, thermal_state_density_expansion,
    PhysicalAmplitudes, Truncation,
};

// (n̄, F, Q)
const SHOWCASE_ORACLE: [(f64, f64, f64); 6] = [
    (0.1, 0.8436225730635427, -0.2827897990726429),
    (0.2, 0.7332196065390472, -0.1212154696132596),
    (0.3, 0.6520979188143511, 0.0363483146067417),
    (0.5, 0.5415617381959576, 0.3433246073298431),
    (1.0, 0.3965620502490015, 1.085074626865672),
    (2.0, 0.2714158622226367, 2.526777251184834),
];

#[test]
fn fidelity_matches_oracle() {
    let amps = PhysicalAmplitudes::showcase();
    for (n_bar, f, _) in SHOWCASE_ORACLE {
        let p = bogoliubov_factors(n_bar).unwrap();
        let t = Truncation::auto(&p, 1e-10).unwrap();
        let got = fidelity_numeric(&amps, &p, &t).unwrap();
        assert!((got - f).abs() < 1e-10, "n̄ = {n_bar}: {got} vs {f}");
    }
}

#[test]
fn mandel_matches_oracle() {
    let amps = PhysicalAmplitudes::showcase();
    for (n_bar, _, q) in SHOWCASE_ORACLE {
        let p = bogoliubov_factors(n_bar).unwrap();
        let t = Truncation::auto(&p, 1e-15).unwrap();
        let got = mandel_numeric(&amps, &p, &t).unwrap();
        assert!((got - q).abs() < 1e-10, "n̄ = {n_bar}: {got} vs {q}");
    }
}

#[test]
fn trace_deficit_stays_below_tolerance() {
    let amps = PhysicalAmplitudes::showcase();
    for tol in [1e-6, 1e-10, 1e-13] {
        for n_bar in [0.1, 1.0, 10.0] {
            let p = bogoliubov_factors(n_bar).unwrap();
            let t = Truncation::auto(&p, tol).unwrap();
            let rho = thermal_state_density_expansion(&amps, &p, &t).unwrap();
            let deficit = 1.0 - rho.trace().re;
            assert!(
                deficit >= -1e-13 && deficit < tol,
                "n̄ = {n_bar}, tol = {tol}: {deficit}"
            );
        }
    }
}
