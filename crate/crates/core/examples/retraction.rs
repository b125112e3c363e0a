//! The straight-line retraction onto the region below height `1 - |y|`.

use arr2kirby::arrangement::Point;
use arr2kirby::lift::Retraction;
use arr2kirby::rational::{int, rat};

fn main() {
    let sigma = Retraction { r: int(5) };
    let samples = [
        (Point::new(int(0), int(2)), (int(0), rat(1, 2))),
        (Point::new(int(1), rat(3, 2)), (rat(1, 3), rat(-2, 3))),
        (Point::new(int(-2), rat(5, 4)), (rat(3, 4), rat(1, 4))),
        (Point::new(int(3), rat(1, 4)), (rat(1, 2), rat(1, 2))),
    ];
    for (x, y) in &samples {
        let y = (&y.0, &y.1);
        print!("x = {x}, y = ({}, {}):", y.0, y.1);
        for k in 0..=4 {
            print!("  {}", sigma.homotopy(x, y, &rat(k, 4)).unwrap());
        }
        println!();
    }
    let outside = Point::new(int(-4), int(3));
    println!("{outside} is in the domain: {}", sigma.in_domain(&outside, (&rat(1, 2), &int(0))));
}
