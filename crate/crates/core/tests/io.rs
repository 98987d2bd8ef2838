use num_complex::Complex64 as C64;
use proptest::prelude::*;
use waveguide_core::field::{Field1D, Field2D};
use waveguide_core::io::*;
use waveguide_core::{make_grid, Error};

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![any::<f64>().prop_filter("finite", |v| v.is_finite()), -1e3..1e3f64]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn binary_round_trip(vals in prop::collection::vec((finite(), finite()), 32), l in 0.5..500.0f64, p in 1.01..4.99f64) {
        let g = make_grid(l, 16, 2, p).unwrap();
        let f = Field2D::new(g, vals.iter().map(|&(a, b)| C64::new(a, b)).collect()).unwrap();
        let mut buf = Vec::new();
        write_field2d(&mut buf, &f).unwrap();
        prop_assert_eq!(read_field2d(&mut buf.as_slice()).unwrap(), f);
    }

    #[test]
    fn csv_round_trip(vals in prop::collection::vec((finite(), finite()), 32)) {
        let g = make_grid(40.0, 16, 2, 3.0).unwrap();
        let f = Field2D::new(g, vals.iter().map(|&(a, b)| C64::new(a, b)).collect()).unwrap();
        let back = field2d_from_csv(field2d_to_csv(&f).as_bytes()).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn csv_round_trip_1d(vals in prop::collection::vec(finite(), 16)) {
        let g = make_grid(7.5, 16, 2, 2.0).unwrap();
        let f = Field1D::new(g, vals).unwrap();
        prop_assert_eq!(field1d_from_csv(field1d_to_csv(&f).as_bytes()).unwrap(), f);
    }
}

#[test]
fn files_on_disk() {
    let dir = std::env::temp_dir().join(format!("waveguide-io-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let g = make_grid(10.0, 32, 4, 3.0).unwrap();
    let f = Field2D::from_fn(g, |x, y| C64::new((-x * x).exp(), y.sin()));
    let path = dir.join("f.wgf");
    save_field2d(&path, &f).unwrap();
    assert_eq!(load_field2d(&path).unwrap(), f);
    let h = Field1D::from_fn(g, |x| x.tanh());
    let path1 = dir.join("h.wgf");
    save_field1d(&path1, &h).unwrap();
    assert_eq!(load_field1d(&path1).unwrap(), h);
    assert!(matches!(load_field2d(&dir.join("missing")), Err(Error::Io(_))));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn malformed_inputs_are_format_errors() {
    assert!(matches!(read_field2d(&mut &b"WGF2"[..]), Err(Error::Format(_))));
    assert!(matches!(field2d_from_csv("nope\n".as_bytes()), Err(Error::Format(_))));
    let bad = "kind,x_halfwidth,nx,ny,p\nfield2d,10,16,2,3\nre,im\n1,x\n";
    assert!(matches!(field2d_from_csv(bad.as_bytes()), Err(Error::Format(_))));
    let short = "kind,x_halfwidth,nx,ny,p\nfield2d,10,16,2,3\nre,im\n1,2\n";
    assert!(matches!(field2d_from_csv(short.as_bytes()), Err(Error::Format(_))));
    let bad_grid = "kind,x_halfwidth,nx,ny,p\nfield1d,10,15,2,3\nvalue\n";
    assert!(matches!(field1d_from_csv(bad_grid.as_bytes()), Err(Error::Format(_))));
}
