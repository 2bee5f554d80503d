mod common;

use common::{solve, sup};
use nonlocal_rd::boundary::{BoundaryConstraint, NeumannExtension};
use nonlocal_rd::kernels::Kernel;
use nonlocal_rd::quadrature::{DiscreteOperator, Grid, OperatorBuilder};
use proptest::prelude::*;

fn setup(k: &Kernel, l: f64, m: usize, far: f64) -> (Grid, DiscreteOperator, NeumannExtension) {
    let grid = Grid::new(2.0 * l, m).unwrap();
    let op = OperatorBuilder::new(k, grid)
        .unwrap()
        .operator(&BoundaryConstraint::neumann(l, 2.0, far))
        .unwrap();
    let ext = NeumannExtension::new(&op).unwrap();
    (grid, op, ext)
}

fn inner_of(grid: &Grid, ext: &NeumannExtension, f: impl Fn(f64) -> f64) -> Vec<f64> {
    ext.inner_range().map(|k| f(grid.x(k))).collect()
}

#[test]
fn extension_matches_direct_elimination() {
    for k in [Kernel::exponential(4.0).unwrap(), Kernel::algebraic(0.42).unwrap()] {
        let (grid, op, ext) = setup(&k, 2.0, 64, 1.0);
        let inner = inner_of(&grid, &ext, |x| 1.0 - 0.6 * (-3.0 * x * x).exp() + 0.1 * x);
        let u = ext.extend_inner(&op, &inner).unwrap();
        let outer = ext.outer_indices();
        let a: Vec<Vec<f64>> = outer
            .iter()
            .map(|&r| outer.iter().map(|&c| op.effective_entry(r, c)).collect())
            .collect();
        let b: Vec<f64> = outer
            .iter()
            .map(|&r| {
                let coupled: f64 = ext.inner_range().zip(&inner).map(|(c, v)| op.effective_entry(r, c) * v).sum();
                -op.affine()[r] - coupled
            })
            .collect();
        let x = solve(a, b);
        for (i, &k) in outer.iter().enumerate() {
            assert!((u[k] - x[i]).abs() < 1e-10, "{k}: {} vs {}", u[k], x[i]);
        }
        for (k, v) in ext.inner_range().zip(&inner) {
            assert_eq!(u[k], *v);
        }
    }
}

#[test]
fn even_data_extends_evenly() {
    let k = Kernel::exponential(3.4).unwrap();
    let (grid, op, ext) = setup(&k, 3.0, 96, 1.0);
    let u = ext.extend_inner(&op, &inner_of(&grid, &ext, |x| 1.0 - (-x * x).exp())).unwrap();
    let n = u.len();
    for i in 0..n {
        assert!((u[i] - u[n - 1 - i]).abs() < 1e-12);
    }
}

#[test]
fn extension_is_affine() {
    let k = Kernel::algebraic(0.39).unwrap();
    let (grid, op, ext) = setup(&k, 2.0, 64, 0.0);
    let p = inner_of(&grid, &ext, |x| x.cos());
    let q = inner_of(&grid, &ext, |x| (-x * x).exp());
    let mix: Vec<f64> = p.iter().zip(&q).map(|(a, b)| 0.3 * a + 0.7 * b).collect();
    let (ep, eq, em) = (
        ext.extend_inner(&op, &p).unwrap(),
        ext.extend_inner(&op, &q).unwrap(),
        ext.extend_inner(&op, &mix).unwrap(),
    );
    for i in 0..em.len() {
        assert!((em[i] - 0.3 * ep[i] - 0.7 * eq[i]).abs() < 1e-11);
    }
}

#[test]
fn rejects_other_constraints_and_sizes() {
    let k = Kernel::exponential(4.0).unwrap();
    let grid = Grid::new(4.0, 64).unwrap();
    let free = OperatorBuilder::new(&k, grid).unwrap().operator(&BoundaryConstraint::free(2.0, 0.0)).unwrap();
    assert!(NeumannExtension::new(&free).is_err());
    let (_, op, ext) = setup(&k, 2.0, 64, 0.0);
    assert!(ext.extend_inner(&op, &[1.0; 3]).is_err());
    let bad = OperatorBuilder::new(&k, Grid::new(5.0, 64).unwrap())
        .unwrap()
        .operator(&BoundaryConstraint::neumann(2.0, 2.0, 0.0));
    assert!(bad.is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn collar_residual_is_tiny(coef in prop::collection::vec(-2.0f64..2.0, 4), far in -1.0f64..2.0) {
        let k = Kernel::exponential(4.0).unwrap();
        let (grid, op, ext) = setup(&k, 2.0, 64, far);
        let inner = inner_of(&grid, &ext, |x| {
            coef[0] + coef[1] * x.cos() + coef[2] * (-x * x).exp() + coef[3] * x.sin()
        });
        let u = ext.extend_inner(&op, &inner).unwrap();
        prop_assert!(ext.outer_residual(&op, &u).unwrap() <= 1e-10 * sup(&u).max(1e-300));
    }
}
