macro_rules! example {
    ($test:ident, $file:literal) => {
        #[test]
        fn $test() {
            #[allow(dead_code)]
            mod inner {
                include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
            }
            inner::run_example().expect("example runs");
        }
    };
}

example!(simulate, "simulate.rs");
example!(reconstruct, "reconstruct.rs");
example!(window_candidates, "window_candidates.rs");
example!(ccstar_table, "ccstar_table.rs");
example!(qlearning, "qlearning.rs");
example!(trace_csv, "trace_csv.rs");
example!(machine_file, "machine_file.rs");
