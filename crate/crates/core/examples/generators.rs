//! Instance families and the text format.

use treeaug::format::{parse, write};
use treeaug::gen::{gen_cycle, gen_lb_disjointness, gen_lb_path, gen_random_2ec, LowerBoundParams, PathVariant};

fn main() -> treeaug::Result<()> {
    let (g, t) = gen_lb_path(2, PathVariant::G2, true, 2)?;
    print!("{}", write(&g, Some(&t)));

    let q = LowerBoundParams::new(2, 2, 2, "01", "10", 2)?;
    let (g, t) = gen_lb_disjointness(&q, false)?;
    println!("disjointness gadget: n={} m={} h={} D={} disjoint={}", g.n(), g.m(), t.height(), g.diameter()?, q.disjoint());
    let (g3, _) = gen_lb_disjointness(&q, true)?;
    println!("simple form: n={} m={}", g3.n(), g3.m());

    let (g, t) = gen_random_2ec(12, 5, 42, Some((1, 100)))?;
    let text = write(&g, Some(&t));
    let back = parse(&text)?;
    println!("round trip identical: {}", write(&back.graph, back.tree.as_ref()) == text);

    let (g, t) = gen_cycle(10_000)?;
    println!("C10000: h = {}, D = {}", t.height(), g.diameter_lower_bound());
    Ok(())
}
