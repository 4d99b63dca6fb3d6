//! Opinions flow backwards along the sampled edges: the opinion of `u` at
//! time T is the time-0 opinion of the vertex reached by tracing `u` back
//! through the edge log. Also runs the coalescing reverse chains to full
//! coalescence.

use invasion_qsd::dual::{duality_trace, reverse_step, CoalescingSystem, ReverseFlow};
use invasion_qsd::dynamics::{rho_invasion, run_to_consensus, OpinionConfig};
use invasion_qsd::graph::Graph;
use invasion_qsd::rng::seeded;

pub fn run() -> invasion_qsd::Result<()> {
    let graph = Graph::complete_bipartite(3, 5)?;
    let rho = rho_invasion(&graph)?;
    let mut rng = seeded(11);

    let initial = OpinionConfig::from_mask(&graph, 0b1010_0101)?;
    let traj = run_to_consensus(&graph, &rho, &initial, &mut rng, true, 60)?;
    let log = traj.edge_log.as_deref().unwrap_or_default();
    let horizon = log.len();
    let traced: Vec<u8> = (0..graph.vertex_count())
        .map(|u| duality_trace(log, u, horizon).map(|v| initial.get(v)))
        .collect::<Result<_, _>>()?;
    println!("eta_0      = {:?}", initial.opinions());
    println!("eta_T      = {:?}  (T = {horizon})", traj.final_config.opinions());
    println!("traced     = {traced:?}");

    let flow = ReverseFlow::new(&rho)?;
    let mut sys = CoalescingSystem::new(graph.vertex_count());
    while !sys.is_coalesced() {
        reverse_step(&mut sys, &flow, &mut rng);
        if sys.time() % 25 == 0 {
            println!("t = {:>4}: {} clusters", sys.time(), sys.cluster_count());
        }
    }
    println!("coalesced at sigma = {}", sys.time());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(e.exit_code());
    }
}
