#![allow(dead_code)]

use toric_core::fan::{make_cone, star_subdivision, Cone, Fan};

pub fn square_rays() -> Vec<Vec<i64>> {
    vec![vec![1, 0, 1], vec![0, -1, 1], vec![-1, 0, 1], vec![0, 1, 1]]
}

/// The square-based cone, rays in the order s1..s4.
pub fn square_fan() -> Fan {
    Fan::new(3, square_rays(), vec![vec![0, 1, 2, 3]]).unwrap()
}

pub fn square_cone() -> Cone {
    make_cone(3, &square_rays()).unwrap()
}

pub fn square_star() -> Fan {
    star_subdivision(&square_fan(), &square_cone()).unwrap()
}

pub fn single(rank: usize, rays: &[Vec<i64>]) -> Fan {
    let c = make_cone(rank, rays).unwrap();
    Fan::from_cone(&c)
}

/// Full-dimensional strongly convex cones in ranks 2 to 4.
pub fn corpus() -> Vec<(&'static str, Cone)> {
    let c = |r: usize, g: Vec<Vec<i64>>| make_cone(r, &g).unwrap();
    vec![
        ("plane", c(2, vec![vec![1, 0], vec![0, 1]])),
        ("A1", c(2, vec![vec![1, 0], vec![1, 2]])),
        ("A2", c(2, vec![vec![1, 0], vec![2, 3]])),
        ("A3", c(2, vec![vec![1, 0], vec![3, 4]])),
        ("A4", c(2, vec![vec![1, 0], vec![4, 5]])),
        ("1/3(1,1)", c(2, vec![vec![1, 0], vec![1, 3]])),
        ("1/5(1,2)", c(2, vec![vec![2, -1], vec![-1, 3]])),
        ("wide", c(2, vec![vec![1, 1], vec![-1, 1]])),
        (
            "octant",
            c(3, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]),
        ),
        ("square", square_cone()),
        (
            "conifold",
            c(
                3,
                vec![vec![1, 0, 0], vec![0, 1, 0], vec![1, 0, 1], vec![0, 1, 1]],
            ),
        ),
        (
            "triangle-height-1",
            c(3, vec![vec![1, 0, 1], vec![0, 1, 1], vec![-1, -1, 1]]),
        ),
        (
            "A1xline",
            c(3, vec![vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 2]]),
        ),
        (
            "1/3(1,1,1)",
            c(3, vec![vec![1, 0, 0], vec![0, 1, 0], vec![-1, -1, 3]]),
        ),
        (
            "hexagon",
            c(
                3,
                vec![
                    vec![1, 0, 1],
                    vec![0, 1, 1],
                    vec![-1, 1, 1],
                    vec![-1, 0, 1],
                    vec![0, -1, 1],
                    vec![1, -1, 1],
                ],
            ),
        ),
        (
            "pentagon",
            c(
                3,
                vec![
                    vec![1, 0, 1],
                    vec![1, 1, 1],
                    vec![0, 1, 1],
                    vec![-1, 0, 1],
                    vec![0, -1, 1],
                ],
            ),
        ),
        (
            "orthant4",
            c(
                4,
                vec![
                    vec![1, 0, 0, 0],
                    vec![0, 1, 0, 0],
                    vec![0, 0, 1, 0],
                    vec![0, 0, 0, 1],
                ],
            ),
        ),
        (
            "octahedron",
            c(
                4,
                vec![
                    vec![1, 0, 0, 1],
                    vec![-1, 0, 0, 1],
                    vec![0, 1, 0, 1],
                    vec![0, -1, 0, 1],
                    vec![0, 0, 1, 1],
                    vec![0, 0, -1, 1],
                ],
            ),
        ),
        (
            "simplex4",
            c(
                4,
                vec![
                    vec![1, 0, 0, 1],
                    vec![0, 1, 0, 1],
                    vec![0, 0, 1, 1],
                    vec![-1, -1, -1, 1],
                ],
            ),
        ),
        (
            "prism4",
            c(
                4,
                vec![
                    vec![1, 0, 0, 1],
                    vec![0, 1, 0, 1],
                    vec![-1, -1, 0, 1],
                    vec![1, 0, 1, 1],
                    vec![0, 1, 1, 1],
                    vec![-1, -1, 1, 1],
                ],
            ),
        ),
        (
            "A1xplane",
            c(
                4,
                vec![
                    vec![1, 0, 0, 0],
                    vec![0, 1, 0, 0],
                    vec![0, 0, 1, 0],
                    vec![1, 1, 0, 2],
                ],
            ),
        ),
    ]
}
