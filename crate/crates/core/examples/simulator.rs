//! The round engine on its own: flood/echo, budgets and transcripts.

use treeaug::gen::gen_random_2ec;
use treeaug::sim::demo::{FloodEcho, MinIdLeader};
use treeaug::sim::{run, RunConfig, Schedule};

fn main() -> treeaug::Result<()> {
    let (g, _) = gen_random_2ec(20, 10, 9, None)?;
    let cfg = RunConfig { transcript: true, ..RunConfig::default() };
    let out = run(&g, &FloodEcho { root: 0 }, &cfg)?;
    println!("root counted {} vertices in {} rounds, {} messages", out.outputs[0].0, out.stats.rounds, out.stats.messages);
    for line in out.transcript.iter().take(5) {
        println!("  {line}");
    }

    let a = run(&g, &MinIdLeader, &RunConfig { schedule: Schedule::Shuffled(3), ..RunConfig::default() })?;
    let b = run(&g, &MinIdLeader, &RunConfig { schedule: Schedule::Parallel(4), ..RunConfig::default() })?;
    println!("leader {} either way: {}", a.outputs[0], a.outputs == b.outputs && a.stats == b.stats);

    let tight = RunConfig { budget: 1, ..RunConfig::default() };
    println!("budget 1 echo: {:?}", run(&g, &FloodEcho { root: 0 }, &tight).err().map(|e| e.to_string()));
    Ok(())
}
