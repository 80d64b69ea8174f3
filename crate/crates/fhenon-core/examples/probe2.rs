// scratch: dissect discrete T on the cosh shape at (3, 1/2), where
// K(t) = 1/(π sinh² t) exactly and T S(0) = (π/2 - 1)/π.
use fhenon_core::*;

fn main() {
    let params = FracHenonParams::new(3, 0.5, 0.0).unwrap();
    let grid = Grid1D::new(30.0, 0.05).unwrap();
    let table = KernelTable::build(&params, 30.0, 0.05).unwrap();
    let op = ReducedOperator::assemble(&grid, &table).unwrap();

    // closed form kernel check
    for &t in &[0.05_f64, 0.2, 0.5, 1.0, 3.0] {
        let exact = 1.0 / (std::f64::consts::PI * t.sinh().powi(2));
        println!("K({t}): table {:.10e} exact {:.10e} rel {:.2e}", table.eval(t), exact, (table.eval(t) / exact - 1.0).abs());
    }

    let gamma = params.gamma_rate();
    let shape: Vec<f64> = (0..grid.len)
        .map(|i| {
            let a = grid.node(i).abs();
            (-gamma * (a + (1.0 + (-2.0 * a).exp()).ln())).exp()
        })
        .collect();
    let c = grid.center();
    println!("S(0) = {} (expect 0.5)", shape[c]);
    let ts0 = op.apply_at(&shape, c);
    println!("discrete T S(0) = {ts0:.8} (expect {:.8})", (std::f64::consts::PI / 2.0 - 1.0) / std::f64::consts::PI);
    println!("A = {:.8} (expect {:.8})", op.a_sn, 2.0 / std::f64::consts::PI);
    println!("E = {:.8} (expect 0.5)", ts0 + op.a_sn * shape[c]);

    // brute-force reference with the closed-form kernel: Simpson on [1e-6, 30]
    let g = |t: f64| 1.0 - 1.0 / t.cosh();
    let kf = |t: f64| 1.0 / (std::f64::consts::PI * t.sinh().powi(2));
    let m = 4_000_000;
    let (a, b) = (1e-8, 30.0);
    let h = (b - a) / m as f64;
    let mut acc = g(a) * kf(a) + g(b) * kf(b);
    for j in 1..m {
        let t = a + j as f64 * h;
        acc += g(t) * kf(t) * if j % 2 == 1 { 4.0 } else { 2.0 };
    }
    println!("brute T S(0) = {:.8}", acc * h / 3.0);

    // dissect: near-field and far-field pieces of the discrete sum vs exact
    let gk: Vec<f64> = (0..=600).map(|k| {
        let t = k as f64 * 0.05;
        if k == 0 { 0.0 } else { 2.0 * shape[c] - shape[c + k] - shape[c - k] }
    }).collect();
    // exact near integral [0, 0.5]
    let mq = 200000;
    let hq = 0.5 / mq as f64;
    let mut near = 0.0;
    for j in 0..mq {
        let t = (j as f64 + 0.5) * hq;
        near += g(t) * kf(t) * hq;
    }
    println!("exact  [0,0.5] = {near:.8}");
    let _ = gk;
}
