use std::f64::consts::LN_2;

use oisl::channel::{cdf_h_pe, h_pe_approx, mean_h_pe, r_max};
use oisl::constellation::hop_distance;
use oisl::rate::{avg_rate_analytic, avg_rate_quadrature};
use oisl::special::{hyp2f1_1b, upsilon};
use oisl::{
    BeamParams, ChannelGeometry, Hyp2F1Request, LinkBudget, LinkModel, PointingModel, RadialLimit,
};
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn geometry() -> impl Strategy<Value = ChannelGeometry> {
    (1.0f64..200.0, 0.01f64..0.5, 0.2f64..20.0)
        .prop_map(|(w_z, w_d, sigma)| ChannelGeometry::new(1e6, w_z, w_d, sigma).unwrap())
}

fn model() -> impl Strategy<Value = LinkModel> {
    (50e12f64..400e12, 0.5f64..5.0, any::<bool>()).prop_map(|(f, sigma, exponential)| {
        let pointing = if exponential {
            PointingModel::exponential(sigma, 0.1, 100e3).unwrap()
        } else {
            PointingModel::constant(sigma).unwrap()
        };
        LinkModel {
            beam: BeamParams::new(0.1, f).unwrap(),
            pointing,
            w_d: 0.1,
            h_th: 1e-6,
            budget: LinkBudget::default(),
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn r_max_round_trips(geom in geometry(), frac in 1e-6f64..0.999) {
        let h_th = frac * geom.a0();
        match r_max(&geom, h_th).unwrap() {
            RadialLimit::Radius(r) => prop_assert!(rel(h_pe_approx(r, &geom).unwrap(), h_th) < 1e-10),
            other => prop_assert!(false, "unexpected {:?}", other),
        }
    }

    #[test]
    fn cdf_is_a_distribution(geom in geometry(), a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let a0 = geom.a0();
        let (flo, fhi) = (cdf_h_pe(lo * a0, &geom), cdf_h_pe(hi * a0, &geom));
        prop_assert!((0.0..=1.0).contains(&flo) && (0.0..=1.0).contains(&fhi));
        prop_assert!(flo <= fhi);
        prop_assert_eq!(cdf_h_pe(a0, &geom), 1.0);
    }

    #[test]
    fn mean_falls_as_threshold_rises(geom in geometry(), a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let a0 = geom.a0();
        let m_lo = mean_h_pe(&geom, lo * a0).unwrap();
        let m_hi = mean_h_pe(&geom, hi * a0).unwrap();
        prop_assert!(m_hi <= m_lo * (1.0 + 1e-14));
        prop_assert!(m_lo <= a0);
    }

    #[test]
    fn hyp2f1_in_unit_interval_and_decreasing(b in 0.05f64..8.0, x in 0.0f64..1e9, step in 1.01f64..10.0) {
        let v = hyp2f1_1b(&Hyp2F1Request::new(b, x)).unwrap();
        let w = hyp2f1_1b(&Hyp2F1Request::new(b, x * step + 1e-3)).unwrap();
        prop_assert!(v > 0.0 && v <= 1.0);
        prop_assert!(w < v);
    }

    #[test]
    fn upsilon_increasing(x in 1e-7f64..1e-2, gamma in 0.05f64..3.0, log_snr in 3.0f64..12.0) {
        let snr = 10f64.powf(log_snr);
        prop_assert!(upsilon(x * 1.01, gamma, snr).unwrap() > upsilon(x, gamma, snr).unwrap());
    }

    #[test]
    fn hop_length_shrinks_but_polyline_covers_chord(n in 1usize..5000, chord_km in 10.0f64..12_000.0) {
        let radius = 6900e3;
        let chord = chord_km * 1e3;
        let d = hop_distance(n, chord, radius).unwrap();
        let next = hop_distance(n + 1, chord, radius).unwrap();
        prop_assert!(next < d);
        prop_assert!(n as f64 * d >= chord * (1.0 - 1e-15));
    }

    #[test]
    fn rate_routes_agree_and_respect_jensen(m in model(), delta_km in 200.0f64..3000.0) {
        let delta = delta_km * 1e3;
        let a = avg_rate_analytic(delta, &m).unwrap();
        let q = avg_rate_quadrature(delta, &m).unwrap();
        prop_assert_eq!(a.outage, q.outage);
        if !a.outage {
            prop_assert!(rel(a.rate, q.rate) < 1e-6, "{} vs {}", a.rate, q.rate);
            let hop = m.hop(delta).unwrap();
            let geom = ChannelGeometry::new(delta, hop.w_z, m.w_d, hop.sigma_s).unwrap();
            let snr = m.budget.snr().unwrap();
            let bound = m.budget.bandwidth * (snr * mean_h_pe(&geom, m.h_th).unwrap()).ln_1p() / LN_2;
            prop_assert!(a.rate <= bound * (1.0 + 1e-12));
        }
    }

    #[test]
    fn rate_scales_with_bandwidth(m in model(), delta_km in 200.0f64..3000.0, k in 1.1f64..10.0) {
        let delta = delta_km * 1e3;
        let wide = LinkModel { budget: LinkBudget { bandwidth: m.budget.bandwidth * k, ..m.budget }, ..m };
        let r = avg_rate_analytic(delta, &m).unwrap().rate;
        let rw = avg_rate_analytic(delta, &wide).unwrap().rate;
        prop_assert!(rel(rw, k * r) < 1e-12);
    }
}
