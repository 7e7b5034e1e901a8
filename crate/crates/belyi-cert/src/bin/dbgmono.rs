use belyi_cert::datainput::load_builtin;
use belyi_cert::monodromy::hp::Ctx;
use belyi_cert::monodromy::*;
use std::time::Instant;

fn main() {
    let d = load_builtin("hs-map-1").unwrap();
    let ex = d.map.expand();
    let cfg = MonodromyConfig { double_check: false, ..Default::default() };
    let t0 = Instant::now();
    let base = basepoint_fiber(&ex.p, &ex.q, &cfg.base_point, &cfg).unwrap();
    println!("base fiber: {:?}, minsep 2^{}", t0.elapsed(), base.min_separation.magnitude_log2());
    let ctx = Ctx::new(cfg.precision_bits);
    let map = MapPolys::build(ctx, &ex.p, &ex.q);
    let t0 = Instant::now();
    let spec = LoopSpec::for_target(BranchTarget::Zero, &cfg);
    let (sigma, diag) = loop_monodromy(&map, &base, &spec, &cfg).unwrap();
    println!("loop0: {:?} type {} steps {}+{}", t0.elapsed(), sigma.cycle_type(), diag.steps_accepted, diag.steps_rejected);
}
