//! Built-in spines of the closed 3-manifolds of complexity 2, presented by
//! their butterflies on the three 2-cells `x, y, z`.

use super::SpinePresentation;
use crate::simplicial::Triangulation;

/// Names of the built-in spine fixtures.
pub const SPINES: [&str; 4] = ["2_1", "2_2", "2_3", "2_4"];

/// Manifold carried by each spine fixture.
pub fn manifold(name: &str) -> Option<&'static str> {
    match name {
        "2_1" => Some("L(5,1)"),
        "2_2" => Some("L(7,2)"),
        "2_3" => Some("L(8,3)"),
        "2_4" => Some("S^3/Q_8"),
        _ => None,
    }
}

pub fn spine(name: &str) -> Option<SpinePresentation> {
    let butterflies: &[[[&str; 2]; 3]] = match name {
        "2_1" => &[
            [["x", "x"], ["z", "z"], ["y", "z"]],
            [["y", "y"], ["z", "z"], ["x", "z"]],
        ],
        "2_2" => &[
            [["x", "x"], ["y", "y"], ["y", "z"]],
            [["x", "x"], ["z", "z"], ["x", "y"]],
        ],
        "2_3" => &[
            [["x", "x"], ["y", "y"], ["y", "z"]],
            [["x", "x"], ["z", "z"], ["y", "z"]],
        ],
        "2_4" => &[[["x", "x"], ["y", "y"], ["z", "z"]]],
        _ => return None,
    };
    Some(SpinePresentation {
        cells: ["x", "y", "z"].iter().map(|s| s.to_string()).collect(),
        butterflies: butterflies
            .iter()
            .map(|b| b.map(|pair| pair.map(str::to_string)))
            .collect(),
    })
}

/// Names of the built-in triangulation fixtures.
pub const TRIANGULATIONS: [&str; 4] = ["S3", "S4", "tetrahedron", "pentachoron"];

/// `S3` and `S4` are the boundaries of the 4- and 5-simplex; `tetrahedron`
/// and `pentachoron` are single top simplices, as used for local moves.
pub fn triangulation(name: &str) -> Option<Triangulation> {
    match name {
        "S3" => Some(Triangulation::boundary_of_simplex(3)),
        "S4" => Some(Triangulation::boundary_of_simplex(4)),
        "tetrahedron" => Triangulation::new(3, 4, vec![vec![0, 1, 2, 3]]).ok(),
        "pentachoron" => Triangulation::new(4, 5, vec![vec![0, 1, 2, 3, 4]]).ok(),
        _ => None,
    }
}
