#![allow(dead_code)]

use transversal::prelude::*;

pub fn square_at(cx: f64, cy: f64) -> ConvexPolygon {
    ConvexPolygon::new(vec![
        Point::new(cx + 1.0, cy + 1.0),
        Point::new(cx - 1.0, cy + 1.0),
        Point::new(cx - 1.0, cy - 1.0),
        Point::new(cx + 1.0, cy - 1.0),
    ])
    .unwrap()
}

pub fn squares(centers: &[(f64, f64)]) -> Configuration {
    Configuration::new(centers.iter().map(|&(x, y)| square_at(x, y)).collect()).unwrap()
}

pub fn three_squares() -> Configuration {
    squares(&[(0.0, 0.0), (4.0, 0.0), (2.0, 3.0)])
}

/// Recipe for corpus seed `seed`: 3..=10 polygons, 3..=12 hull samples,
/// centroids in the unit box.
pub fn corpus_recipe(seed: u64) -> InstanceRecipe {
    InstanceRecipe {
        seed,
        n_polygons: 3 + (seed % 8) as usize,
        vertices_range: (3, 12),
        ..InstanceRecipe::default()
    }
}

pub fn corpus_instance(seed: u64) -> Configuration {
    random_instance(&corpus_recipe(seed)).unwrap()
}
