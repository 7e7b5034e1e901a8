use belyi_cert::monodromy::hp::Ctx;
use std::time::Instant;
fn main() {
    for prec in [212u32, 424, 512] {
        let c = Ctx::new(prec);
        let a = c.cx_from_f64(1.234567, -0.7654321);
        let b = c.cx_from_f64(0.987654, 0.456789);
        let mut acc = c.cx_from_f64(0.1, 0.2);
        let t0 = Instant::now();
        let n = 1_000_000;
        for _ in 0..n {
            acc = c.cmul(&acc, &a);
            acc = c.cadd(&acc, &b);
            // keep magnitude bounded
            if acc.re.magnitude_log2() > 100 { acc = c.cx_from_f64(0.1, 0.2); }
        }
        let dt = t0.elapsed();
        println!("prec {prec}: {:.1} ns per cmul+cadd  ({:?} total) {:?}", dt.as_nanos() as f64 / n as f64, dt, acc.to_f64());
    }
}
