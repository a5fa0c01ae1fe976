use proptest::prelude::*;

use baryeval::element::order_basis;
use baryeval::{Deriv, ElementEvaluator, FieldValues, Shape};

fn shape_strategy() -> impl Strategy<Value = Shape> {
    prop::sample::select(Shape::ALL.to_vec())
}

/// A point in the reference region built from unit-cube coordinates.
fn point_in(shape: Shape, u: [f64; 3]) -> Vec<f64> {
    let eta: Vec<f64> = u[..shape.dim()].iter().map(|t| -0.95 + 1.9 * t).collect();
    shape.expand(&eta)[..shape.dim()].to_vec()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn constants_are_reproduced(
        shape in shape_strategy(),
        order in 2usize..12,
        c in -10.0f64..10.0,
        u in prop::array::uniform3(0.0f64..1.0),
    ) {
        let ev = ElementEvaluator::for_order(shape, order, |_| c).unwrap();
        let r = ev.phys_evaluate(&point_in(shape, u), Deriv::First).unwrap();
        prop_assert!((r.value - c).abs() <= 1e-12 * c.abs().max(1.0));
        for g in r.gradient().unwrap() {
            prop_assert!(g.abs() <= 1e-9 * c.abs().max(1.0));
        }
    }

    #[test]
    fn evaluation_is_linear_in_the_field(
        shape in shape_strategy(),
        order in 2usize..8,
        a in -3.0f64..3.0,
        seed in 0u64..1000,
        u in prop::array::uniform3(0.0f64..1.0),
    ) {
        let basis = order_basis(shape, order).unwrap();
        let n = basis.grid_len();
        let f: Vec<f64> = (0..n).map(|i| ((i as u64 * 7919 + seed) % 101) as f64 / 50.0 - 1.0).collect();
        let g: Vec<f64> = (0..n).map(|i| ((i as u64 * 104729 + seed) % 97) as f64 / 48.0 - 1.0).collect();
        let combo: Vec<f64> = f.iter().zip(&g).map(|(x, y)| a * x + y).collect();
        let eval = |data: Vec<f64>| {
            let field = FieldValues::new(&basis, data).unwrap();
            ElementEvaluator::new(shape, basis.clone(), field)
                .unwrap()
                .phys_evaluate(&point_in(shape, u), Deriv::Value)
                .unwrap()
                .value
        };
        let lhs = eval(combo);
        let rhs = a * eval(f) + eval(g);
        prop_assert!((lhs - rhs).abs() <= 1e-11 * (1.0 + lhs.abs() + a.abs()));
    }

    #[test]
    fn points_outside_the_region_are_rejected(
        shape in shape_strategy(),
        u in prop::array::uniform3(0.0f64..1.0),
    ) {
        let ev = ElementEvaluator::for_order(shape, 3, |x| x[0]).unwrap();
        let mut xi = point_in(shape, u);
        xi[0] = 1.5;
        prop_assert!(ev.phys_evaluate(&xi, Deriv::Value).is_err());
    }
}
