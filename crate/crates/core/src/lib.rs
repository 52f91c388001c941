//! Minimal homothety expansion ratio for line transversals of convex
//! polygon systems.
//!
//! Every polygon is scaled about its vertex-mean centroid by a common ratio
//! `c`. The crate finds the smallest `c` at which some line meets all scaled
//! polygons, returns every optimal line, and certifies each one by the
//! polygons it touches.
//!
//! ```
//! use transversal::prelude::*;
//!
//! let square = |cx: f64, cy: f64| {
//!     ConvexPolygon::new(vec![
//!         Point::new(cx + 1.0, cy + 1.0),
//!         Point::new(cx - 1.0, cy + 1.0),
//!         Point::new(cx - 1.0, cy - 1.0),
//!         Point::new(cx + 1.0, cy - 1.0),
//!     ])
//!     .unwrap()
//! };
//! let config = Configuration::new(vec![square(0.0, 0.0), square(4.0, 0.0), square(2.0, 3.0)]).unwrap();
//! let sol = solve_minimal_expansion(&config, &SolverOptions::default()).unwrap();
//! assert!((sol.c_m - 1.2).abs() < 1e-9);
//! assert_eq!(sol.lines.len(), 2);
//! ```

pub mod cli;
pub mod factor;
pub mod geom;
pub mod io;
pub mod oracle;
pub mod solver;
pub mod svg;

pub mod prelude {
    pub use crate::factor::{
        correcting_factor, factor_profile, is_tangent, side_of, Contact, Side, VShapeProfile,
    };
    pub use crate::geom::{
        apply_homothety, scale_configuration, Configuration, ConvexPolygon, Direction, GeomError,
        Line, Point,
    };
    pub use crate::oracle::{
        brute_force_c_m, random_instance, verify_solution, InstanceRecipe, VerifyOptions,
        VerifyReport,
    };
    pub use crate::solver::{
        extract_certificate, feasible_offset_interval, min_c_for_direction,
        solve_minimal_expansion, transversal_exists, Certificate, Classification,
        DirectionalOptimum, OffsetInterval, Solution, SolveError, SolverOptions,
    };
}
