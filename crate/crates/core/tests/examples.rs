// Each example is compiled into its own module here so `cargo test` runs it.

macro_rules! example {
    ($name:ident) => {
        mod $name {
            include!(concat!("../examples/", stringify!($name), ".rs"));

            #[test]
            fn runs() {
                main();
            }
        }
    };
}

example!(parse_graph);
example!(build_models);
example!(solve_mip);
example!(stage1);
example!(stage2);
example!(batch_report);
example!(export_lp);
example!(oracle_check);
example!(bound_arithmetic);
