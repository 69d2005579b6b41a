use std::collections::BTreeMap;

use arma_spectra::io::{
    read_labels, read_metrics, read_series, read_series_with_inputs, read_spectra, write_inputs, write_labels,
    write_metrics, write_series, write_spectra, Cell, ResultTable,
};
use arma_spectra::lds::{TimeSeries, MISSING};
use arma_spectra::poly::Spectrum;
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

fn value() -> impl Strategy<Value = f64> {
    prop_oneof![
        1 => Just(MISSING),
        8 => -1e6..1e6f64,
        1 => prop_oneof![Just(0.0), Just(-0.0), Just(1e-300), Just(f64::MAX), Just(f64::MIN_POSITIVE)],
    ]
}

fn series_strategy() -> impl Strategy<Value = Vec<TimeSeries>> {
    prop::collection::vec((1usize..30, 1usize..4, 0usize..3), 1..5).prop_flat_map(|shapes| {
        let parts: Vec<_> = shapes
            .into_iter()
            .enumerate()
            .map(|(i, (t, m, k))| {
                (prop::collection::vec(value(), t * m), prop::collection::vec(-1e3..1e3f64, t * k)).prop_map(
                    move |(y, x)| {
                        let inputs = (k > 0).then(|| DMatrix::from_vec(t, k, x));
                        TimeSeries::new(format!("s{i}"), DMatrix::from_vec(t, m, y), inputs).unwrap()
                    },
                )
            })
            .collect();
        parts
    })
}

fn same_bits(a: &DMatrix<f64>, b: &DMatrix<f64>) -> bool {
    a.shape() == b.shape() && a.iter().zip(b.iter()).all(|(x, y)| x.to_bits() == y.to_bits() || (x.is_nan() && y.is_nan()))
}

fn bytes(f: impl FnOnce(&mut Vec<u8>)) -> Vec<u8> {
    let mut v = Vec::new();
    f(&mut v);
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn series_roundtrip(series in series_strategy()) {
        let out = bytes(|b| write_series(b, &series).unwrap());
        let inp = bytes(|b| write_inputs(b, &series).unwrap());
        let back = read_series_with_inputs(out.as_slice(), inp.as_slice()).unwrap();
        prop_assert_eq!(back.len(), series.len());
        for (a, b) in series.iter().zip(&back) {
            prop_assert_eq!(&a.id, &b.id);
            prop_assert!(same_bits(a.outputs(), b.outputs()));
            match (a.inputs(), b.inputs()) {
                (Some(x), Some(y)) => prop_assert!(same_bits(x, y)),
                (None, None) => {}
                _ => prop_assert!(false, "inputs lost or invented"),
            }
        }
        let again = bytes(|b| write_series(b, &read_series(out.as_slice()).unwrap()).unwrap());
        prop_assert_eq!(again, out);
    }

    #[test]
    fn labels_roundtrip(labels in prop::collection::vec(0usize..1000, 1..50)) {
        let rows: Vec<(String, usize)> = labels.into_iter().enumerate().map(|(i, l)| (format!("id {i}"), l)).collect();
        let buf = bytes(|b| write_labels(b, &rows).unwrap());
        prop_assert_eq!(read_labels(buf.as_slice()).unwrap(), rows);
    }

    #[test]
    fn spectra_roundtrip(vals in prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64), 1..6)) {
        let s = Spectrum::new(vals.iter().map(|&(re, im)| Complex64::new(re, im)).collect());
        let rows = vec![("a".to_string(), s.clone())];
        let buf = bytes(|b| write_spectra(b, &rows).unwrap());
        let back = read_spectra(buf.as_slice()).unwrap();
        prop_assert_eq!(back.len(), 1);
        prop_assert_eq!(back[0].1.values(), s.values());
    }

    #[test]
    fn metrics_roundtrip(entries in prop::collection::btree_map("[a-z_]{1,8}", prop_oneof![-1e9..1e9f64, Just(f64::NAN)], 0..8)) {
        let buf = bytes(|b| write_metrics(b, &entries).unwrap());
        let back = read_metrics(buf.as_slice()).unwrap();
        let expect: BTreeMap<String, Option<f64>> =
            entries.iter().map(|(k, v)| (k.clone(), (!v.is_nan()).then_some(*v))).collect();
        prop_assert_eq!(back, expect);
    }

    #[test]
    fn table_roundtrip(rows in prop::collection::vec((-1e9..1e9f64, any::<i64>(), "[a-z]{1,6}"), 0..20)) {
        let mut t = ResultTable::new(["x", "n", "name"]).unwrap();
        for (x, n, s) in &rows {
            t.push(vec![Cell::Num(*x), Cell::Int(*n), Cell::Text(s.clone())]).unwrap();
        }
        let buf = bytes(|b| t.write_csv(b).unwrap());
        let back = ResultTable::read_csv(buf.as_slice()).unwrap();
        prop_assert_eq!(back.columns(), t.columns());
        prop_assert_eq!(back.rows().len(), rows.len());
        for (r, (x, n, _)) in back.rows().iter().zip(&rows) {
            prop_assert_eq!(r[0].as_f64(), Some(*x));
            prop_assert_eq!(r[1].as_f64(), Some(*n as f64));
        }
        let again = bytes(|b| back.write_csv(b).unwrap());
        prop_assert_eq!(again, buf);
    }
}
