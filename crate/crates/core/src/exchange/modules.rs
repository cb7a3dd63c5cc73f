use crate::search::Deadline;
use crate::state::SolutionState;

use super::{omega_one_pass, two_improvement_pass, two_three_pass, x0_exchange_pass, xy_exchange_pass, EmModule};

type Pass<'p, 'g> = &'p mut dyn FnMut(&mut SolutionState<'g>) -> bool;

/// Variable neighborhood descent over `passes`: an improving pass sends the
/// search back to the first neighborhood, a fruitless one moves to the next.
/// Free vertices are added after every pass. Returns whether the weight grew.
fn vnd<'g>(s: &mut SolutionState<'g>, passes: &mut [Pass<'_, 'g>], deadline: Deadline) -> bool {
    let start = s.weight();
    s.maximize();
    let mut k = 0;
    while k < passes.len() && !deadline.expired() {
        let improved = passes[k](s);
        s.maximize();
        k = if improved { 0 } else { k + 1 };
    }
    s.weight() > start
}

/// Module `A`: `(ω,1)`-swap, 2-improvement, `(1,1)`-exchange.
pub fn run_module_a(s: &mut SolutionState<'_>, deadline: Deadline) -> bool {
    vnd(
        s,
        &mut [&mut omega_one_pass, &mut two_improvement_pass, &mut |s: &mut SolutionState<'_>| {
            xy_exchange_pass(s, 1, 1)
        }],
        deadline,
    )
}

/// Module `B`: `(2,3)`-swap, `(x,0)`-exchange.
pub fn run_module_b(s: &mut SolutionState<'_>, deadline: Deadline) -> bool {
    vnd(s, &mut [&mut two_three_pass, &mut x0_exchange_pass], deadline)
}

/// An `EM` module: `(ω,1)`-swap, `(x,y)`-exchange.
pub fn run_module_em(s: &mut SolutionState<'_>, module: EmModule, deadline: Deadline) -> bool {
    vnd(
        s,
        &mut [&mut omega_one_pass, &mut |s: &mut SolutionState<'_>| xy_exchange_pass(s, module.x, module.y)],
        deadline,
    )
}
