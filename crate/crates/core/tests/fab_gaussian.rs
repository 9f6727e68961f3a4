use fabcr::fab_gaussian::*;
use fabcr::priors::{PriorKind, PriorModel};
use fabcr::specfun::std_normal_cdf;
use fabcr::Execution;
use proptest::prelude::*;

fn kind(k: usize) -> PriorKind {
    PriorKind::catalog()[k]
}

fn lambda(m: &PriorModel, theta0: f64, y: f64) -> f64 {
    m.log_marginal(y) + (y - theta0).powi(2) / (2.0 * m.sigma * m.sigma)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn level_identity(k in 0usize..8, t in -40.0f64..40.0, alpha in 0.01f64..0.6) {
        let m = PriorModel::new(kind(k), 1.0).unwrap();
        let acc = acceptance_interval(&m, t, alpha).unwrap();
        let mass = std_normal_cdf(acc.hi - t).unwrap() - std_normal_cdf(acc.lo - t).unwrap();
        prop_assert!((mass - (1.0 - alpha)).abs() < 1e-10, "mass {mass}");
        // below α = ½ both tail quantiles are positive
        if alpha < 0.5 {
            prop_assert!(acc.lo < t && t < acc.hi);
        }
    }

    #[test]
    fn equal_ordinates(k in 0usize..8, t in -8.0f64..8.0, alpha in 0.02f64..0.5) {
        // an interior weight balances λ at both ends
        let m = PriorModel::new(kind(k), 1.0).unwrap();
        let acc = acceptance_interval(&m, t, alpha).unwrap();
        if acc.logit_w.abs() < 25.0 {
            let gap = lambda(&m, t, acc.lo) - lambda(&m, t, acc.hi);
            prop_assert!(gap.abs() < 1e-7 * lambda(&m, t, acc.lo).abs().max(1.0), "gap {gap}");
        }
    }

    #[test]
    fn nested_in_alpha(k in 0usize..8, y in -30.0f64..30.0, a1 in 0.01f64..0.4, da in 0.01f64..0.4) {
        let m = PriorModel::new(kind(k), 1.0).unwrap();
        let big = confidence_region(&m, y, a1).unwrap();
        let small = confidence_region(&m, y, a1 + da).unwrap();
        prop_assert!(big.lo() <= small.lo() + 1e-7 && small.hi() <= big.hi() + 1e-7);
        prop_assert!(small.contains(small.focal) && big.contains(big.focal));
    }

    #[test]
    fn mirror_symmetry(k in 0usize..8, y in -30.0f64..30.0, alpha in 0.02f64..0.5) {
        let m = PriorModel::new(kind(k), 1.0).unwrap();
        let a = confidence_region(&m, y, alpha).unwrap();
        let b = confidence_region(&m, -y, alpha).unwrap();
        prop_assert!((a.lo() + b.hi()).abs() < 1e-7 && (a.hi() + b.lo()).abs() < 1e-7);
        prop_assert!((weight(&m, y, alpha).unwrap() + weight(&m, -y, alpha).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn scale_equivariance(k in 0usize..8, y in -20.0f64..20.0, sigma in 0.1f64..10.0) {
        let unit = PriorModel::tied(kind(k), 1.0).unwrap();
        let scaled = PriorModel::tied(kind(k), sigma).unwrap();
        let a = confidence_region(&unit, y, 0.1).unwrap();
        let b = confidence_region(&scaled, sigma * y, 0.1).unwrap();
        let tol = 1e-6 * sigma.max(1.0);
        prop_assert!((sigma * a.lo() - b.lo()).abs() < tol && (sigma * a.hi() - b.hi()).abs() < tol);
    }

    #[test]
    fn location_equivariance(y in -20.0f64..20.0, mu in -50.0f64..50.0) {
        let m = PriorModel::parse("laplace:kappa=1.5", 1.0).unwrap();
        let a = confidence_region(&m, y, 0.1).unwrap();
        let b = confidence_region(&m.with_location(mu), y + mu, 0.1).unwrap();
        prop_assert!((a.lo() + mu - b.lo()).abs() < 1e-6 && (a.hi() + mu - b.hi()).abs() < 1e-6);
    }

    #[test]
    fn p_value_inverts_region(k in 0usize..8, y in -10.0f64..10.0, t in -15.0f64..15.0) {
        let m = PriorModel::new(kind(k), 1.0).unwrap();
        let p = p_value(&m, y, t).unwrap();
        for alpha in [0.05, 0.2, 0.5] {
            if (p - alpha).abs() > 1e-5 {
                prop_assert_eq!(is_member(&m, y, t, alpha).unwrap(), p > alpha);
            }
        }
    }
}

#[test]
fn gaussian_prior_region_is_not_centred_on_y() {
    let m = PriorModel::parse("gaussian:tau=1", 1.0).unwrap();
    let reg = confidence_region(&m, 3.0, 0.1).unwrap();
    assert_eq!(reg.focal, 1.5);
    // pulled toward the prior mean and wider than the z-interval
    let (z_lo, z_hi) = z_interval(3.0, 1.0, 0.1);
    assert!(reg.lo() < z_lo && reg.hi() < z_hi && reg.width() > z_hi - z_lo);
}

#[test]
fn horseshoe_narrower_than_z_near_zero() {
    let m = PriorModel::parse("horseshoe", 1.0).unwrap();
    let reg = confidence_region(&m, 0.0, 0.1).unwrap();
    assert!(reg.width() < 2.0 * 1.644_853_626_951_472_2);
}

#[test]
fn scan_reports_connectivity() {
    let m = PriorModel::parse("bp:a=1,b=0.5", 1.0).unwrap();
    let reg = confidence_region_with(&m, 2.0, 0.1, RegionOptions { scan_step: Some(0.01) }).unwrap();
    assert!(!reg.disconnected && reg.intervals.len() == 1);
}

#[test]
fn p_value_curve_peaks_at_one_inside() {
    let m = PriorModel::parse("horseshoe", 1.0).unwrap();
    let grid: Vec<f64> = (-40..=80).map(|i| i as f64 * 0.1).collect();
    let seq = p_value_curve(&m, 2.0, &grid, Execution::Sequential).unwrap();
    let par = p_value_curve(&m, 2.0, &grid, Execution::Parallel).unwrap();
    assert_eq!(seq, par);
    let max = seq.pvals.iter().cloned().fold(0.0, f64::max);
    assert!(max > 0.95 && seq.pvals[0] < 0.01 && *seq.pvals.last().unwrap() < 0.01);
}

#[test]
fn invalid_inputs() {
    let m = PriorModel::parse("horseshoe", 1.0).unwrap();
    assert!(confidence_region(&m, 1.0, 0.0).is_err());
    assert!(confidence_region(&m, 1.0, 1.0).is_err());
    assert!(confidence_region(&m, f64::NAN, 0.1).is_err());
    assert!(acceptance_interval(&m, f64::INFINITY, 0.1).is_err());
}
