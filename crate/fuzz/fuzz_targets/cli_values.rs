#![no_main]

use cuspkit::surface_audit::SurfaceType;
use cuspkit::Slope;
use cuspkit_cli::values::{parse_area, parse_cusp_area, parse_length};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(slope) = text.parse::<Slope>() {
        assert_eq!(slope.to_string().parse::<Slope>(), Ok(slope));
    }
    if let Ok(surface) = text.parse::<SurfaceType>() {
        let g = format!("{},{},{}", surface.genus, surface.punctures, surface.boundary_circles);
        assert_eq!(g.parse::<SurfaceType>(), Ok(surface));
    }
    for v in [parse_length(text), parse_area(text)].into_iter().flatten() {
        assert!(v.is_finite());
    }
    let _ = parse_cusp_area(text);
});
