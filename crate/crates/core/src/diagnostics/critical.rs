//! Finite-sample Dickey-Fuller critical values.
//!
//! Tables follow Fuller (1976) as reproduced by Hamilton (1994), tables B.5
//! and B.6, for sample sizes 25, 50, 100, 250, 500 and the asymptotic row.
//! Intermediate sizes are interpolated linearly in `1/n`; sizes below 25 use
//! the first row.

use super::{CriticalValues, Deterministic};

const SIZES: [f64; 6] = [25.0, 50.0, 100.0, 250.0, 500.0, f64::INFINITY];

/// Columns: 1%, 5%, 10%.
type Table = [[f64; 3]; 6];

const TAU_NONE: Table = [
    [-2.66, -1.95, -1.60],
    [-2.62, -1.95, -1.61],
    [-2.60, -1.95, -1.61],
    [-2.58, -1.95, -1.62],
    [-2.58, -1.95, -1.62],
    [-2.58, -1.95, -1.62],
];
const TAU_CONSTANT: Table = [
    [-3.75, -3.00, -2.63],
    [-3.58, -2.93, -2.60],
    [-3.51, -2.89, -2.58],
    [-3.46, -2.88, -2.57],
    [-3.44, -2.87, -2.57],
    [-3.43, -2.86, -2.57],
];
const TAU_TREND: Table = [
    [-4.38, -3.60, -3.24],
    [-4.15, -3.50, -3.18],
    [-4.04, -3.45, -3.15],
    [-3.99, -3.43, -3.13],
    [-3.98, -3.42, -3.13],
    [-3.96, -3.41, -3.12],
];
const RHO_NONE: Table = [
    [-11.9, -7.7, -5.5],
    [-12.9, -7.9, -5.6],
    [-13.3, -8.0, -5.7],
    [-13.6, -8.0, -5.7],
    [-13.7, -8.0, -5.7],
    [-13.8, -8.1, -5.7],
];
const RHO_CONSTANT: Table = [
    [-17.2, -12.5, -10.2],
    [-18.9, -13.3, -10.7],
    [-19.8, -13.7, -11.0],
    [-20.3, -14.0, -11.2],
    [-20.5, -14.0, -11.2],
    [-20.7, -14.1, -11.3],
];
const RHO_TREND: Table = [
    [-22.5, -17.9, -15.6],
    [-25.7, -19.8, -16.8],
    [-27.4, -20.7, -17.5],
    [-28.4, -21.3, -18.0],
    [-28.9, -21.5, -18.1],
    [-29.5, -21.8, -18.3],
];

fn interpolate(table: &Table, n: usize) -> CriticalValues {
    let x = 1.0 / (n.max(1) as f64);
    let inv = |i: usize| 1.0 / SIZES[i];
    let row = |i: usize| table[i];
    let values = if x >= inv(0) {
        row(0)
    } else {
        let i = (1..SIZES.len()).find(|&i| x >= inv(i)).unwrap();
        let w = (inv(i - 1) - x) / (inv(i - 1) - inv(i));
        let (a, b) = (row(i - 1), row(i));
        [0, 1, 2].map(|k| a[k] + w * (b[k] - a[k]))
    };
    CriticalValues {
        one: values[0],
        five: values[1],
        ten: values[2],
    }
}

/// Critical values of the t-ratio statistic for `n` regression observations.
pub fn tau_critical_values(deterministic: Deterministic, n: usize) -> CriticalValues {
    interpolate(
        match deterministic {
            Deterministic::None => &TAU_NONE,
            Deterministic::Constant => &TAU_CONSTANT,
            Deterministic::Trend => &TAU_TREND,
        },
        n,
    )
}

/// Critical values of the normalized-bias statistic `n (rho - 1)`.
pub fn rho_critical_values(deterministic: Deterministic, n: usize) -> CriticalValues {
    interpolate(
        match deterministic {
            Deterministic::None => &RHO_NONE,
            Deterministic::Constant => &RHO_CONSTANT,
            Deterministic::Trend => &RHO_TREND,
        },
        n,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const ALL: [Deterministic; 3] = [
        Deterministic::None,
        Deterministic::Constant,
        Deterministic::Trend,
    ];

    #[test]
    fn published_anchor_values() {
        let cv = tau_critical_values(Deterministic::Constant, 44);
        assert!((cv.one + 3.61).abs() <= 0.03, "{cv:?}");
        assert!((cv.five + 2.94).abs() <= 0.05, "{cv:?}");
        let rho = rho_critical_values(Deterministic::Constant, 44);
        assert!((rho.five + 13.17).abs() <= 0.05, "{rho:?}");
        assert!((rho.one + 18.63).abs() <= 0.05, "{rho:?}");
    }

    #[test]
    fn table_rows_are_hit_exactly() {
        assert_eq!(
            tau_critical_values(Deterministic::Constant, 100).five,
            -2.89
        );
        assert_eq!(tau_critical_values(Deterministic::Trend, 25).one, -4.38);
        assert_eq!(tau_critical_values(Deterministic::Trend, 10).one, -4.38);
        assert_eq!(rho_critical_values(Deterministic::None, 500).ten, -5.7);
        let far = tau_critical_values(Deterministic::Constant, 1_000_000);
        assert!((far.one + 3.43).abs() < 0.001);
    }

    proptest! {
        #[test]
        fn levels_are_ordered(n in 1usize..5000) {
            for d in ALL {
                for cv in [tau_critical_values(d, n), rho_critical_values(d, n)] {
                    prop_assert!(cv.one < cv.five && cv.five < cv.ten);
                }
            }
        }

        #[test]
        fn one_and_five_percent_tighten_with_n(n in 25usize..5000, extra in 1usize..1000) {
            // The 10% column of the no-constant tau table is not monotone in
            // the published table, so only the other columns are checked.
            for d in ALL {
                let (a, b) = (tau_critical_values(d, n), tau_critical_values(d, n + extra));
                prop_assert!(b.one >= a.one - 1e-12 && b.five >= a.five - 1e-12);
                let (a, b) = (rho_critical_values(d, n), rho_critical_values(d, n + extra));
                prop_assert!(b.one <= a.one + 1e-12 && b.five <= a.five + 1e-12);
            }
        }
    }
}
