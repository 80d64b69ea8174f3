// scratch accuracy probe (removed before release)
use fhenon_core::*;

fn main() {
    for &(dim, s) in &[(3u32, 0.5_f64), (3, 0.75), (4, 0.6)] {
        let params = FracHenonParams::new(dim, s, 0.0).unwrap();
        let table = KernelTable::build(&params, 30.0, 0.05).unwrap();
        let grid = Grid1D::new(30.0, 0.05).unwrap();
        let op = ReducedOperator::assemble(&grid, &table).unwrap();
        for &frac in &[1.0, 0.5] {
            let mu = params.beta * frac;
            let d = exponential_identity_defect(&op, mu).unwrap();
            let grid2 = Grid1D::new(30.0, 0.025).unwrap();
            let table2 = KernelTable::build(&params, 30.0, 0.025).unwrap();
            let op2 = ReducedOperator::assemble(&grid2, &table2).unwrap();
            let d2 = exponential_identity_defect(&op2, mu).unwrap();
            println!("({dim},{s}) mu={mu:.4}: defect h=0.05: {d:.3e}, h=0.025: {d2:.3e}, ratio {:.3}", d2 / d);
        }
    }

    // alpha0 oracle residual
    for &(dim, s) in &[(3u32, 0.5_f64), (3, 0.75)] {
        let params = FracHenonParams::new(dim, s, 0.0).unwrap();
        let table = KernelTable::build(&params, 30.0, 0.05).unwrap();
        let grid = Grid1D::new(30.0, 0.05).unwrap();
        let op = ReducedOperator::assemble(&grid, &table).unwrap();
        let prof = alpha0_profile(&op).unwrap();
        let (f, norm) = op.residual(&prof);
        let mut central: f64 = 0.0;
        for i in 0..grid.len {
            if grid.node(i).abs() <= 0.8 * 30.0 {
                central = central.max(f[i].abs());
            }
        }
        println!("({dim},{s}) alpha0: C={:.6}, res central80 {central:.3e}, full {norm:.3e}", prof.values[grid.center()]);
    }

    // power law check
    let params = FracHenonParams::new(3, 0.5, 0.0).unwrap();
    let ev = RadialEvaluator::new(&params).unwrap();
    for &mu in &[-1.95, -1.5, -1.0, -0.5, -0.05] {
        let c = ev.power_law_check(mu).unwrap();
        println!("mu={mu}: numeric {:.8e} formula {:.8e} rel {:.3e}", c.numeric, c.formula, c.rel_err);
    }
}
