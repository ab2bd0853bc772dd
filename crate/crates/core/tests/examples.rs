// Each cargo example is compiled in here and run once.

macro_rules! example {
    ($name:ident, $path:literal) => {
        #[allow(dead_code)]
        #[path = $path]
        mod $name;

        #[test]
        fn $name() {
            $name::run_example().unwrap();
        }
    };
}

example!(codebook_table, "../examples/codebook_table.rs");
example!(pep_closed_form, "../examples/pep_closed_form.rs");
example!(meijer_contour, "../examples/meijer_contour.rs");
example!(energy_detector_ber, "../examples/energy_detector_ber.rs");
example!(noma_sic_ber, "../examples/noma_sic_ber.rs");
example!(ordered_rates, "../examples/ordered_rates.rs");
example!(spectral_efficiency, "../examples/spectral_efficiency.rs");
example!(figure_bundle, "../examples/figure_bundle.rs");
example!(deterministic_streams, "../examples/deterministic_streams.rs");
