macro_rules! example {
    ($name:ident) => {
        #[allow(dead_code)]
        mod $name {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", stringify!($name), ".rs"));
        }
    };
}

example!(partition_days);
example!(burg_fit);
example!(order_selection);
example!(wavelet_period);
example!(day_ahead_forecast);
example!(backtest_report);
example!(ingest_csv);

#[test]
fn library_examples_run() {
    partition_days::run().unwrap();
    burg_fit::run().unwrap();
    order_selection::run().unwrap();
    ingest_csv::run().unwrap();
}

#[test]
fn file_writing_examples_run() {
    let dir = tempfile::tempdir().unwrap();
    wavelet_period::run(dir.path().to_path_buf()).unwrap();
    day_ahead_forecast::run(dir.path().to_path_buf()).unwrap();
    backtest_report::run(dir.path().to_path_buf()).unwrap();
    for f in ["spectrum.svg", "forecast.svg", "report.csv", "report.json", "rmse.svg"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
}
