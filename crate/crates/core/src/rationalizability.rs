//! Iterated elimination of strictly dominated strategies and the
//! rationalizable periodic actions built on top of it.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{Game, Profiles};
use crate::lp::{LinearProgram, Relation};
use crate::periodicity::{
    build_periodicity_graph, periodicity_number, Cycle, Node, PeriodicityGraph, TiePolicy,
};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DominanceMode {
    PureOnly,
    /// Pure dominators first; otherwise any mixture of the surviving actions.
    #[default]
    AllowMixedDominators,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Dominator {
    Pure(usize),
    /// Full-length mixture over the player's actions.
    Mixed(Vec<Rational>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Elimination {
    pub round: usize,
    pub player: usize,
    pub action: usize,
    pub dominator: Dominator,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurvivorSet {
    /// Surviving action indices per player, ascending.
    pub survivors: Vec<Vec<usize>>,
    pub trace: Vec<Elimination>,
}

impl SurvivorSet {
    pub fn contains(&self, player: usize, action: usize) -> bool {
        self.survivors[player].binary_search(&action).is_ok()
    }
}

/// Opponent profiles drawn from the surviving sets, each returned as a full
/// profile with `player`'s slot set to `action`.
fn restricted_profiles<'a>(
    survivors: &'a [Vec<usize>],
    player: usize,
    action: usize,
) -> impl Iterator<Item = Vec<usize>> + 'a {
    let shape: Vec<usize> = survivors
        .iter()
        .enumerate()
        .map(|(j, s)| if j == player { 1 } else { s.len() })
        .collect();
    Profiles::new(&shape).map(move |idx| {
        idx.iter()
            .enumerate()
            .map(|(j, &k)| if j == player { action } else { survivors[j][k] })
            .collect()
    })
}

/// Payoffs of `player` for `action` against every surviving opponent profile,
/// in a fixed order.
fn payoff_column(game: &Game, survivors: &[Vec<usize>], player: usize, action: usize) -> Vec<Rational> {
    restricted_profiles(survivors, player, action)
        .map(|p| game.utility(player, &p).clone())
        .collect()
}

/// A strategy strictly dominating `action` given the surviving sets, if any.
pub fn find_dominator(
    game: &Game,
    survivors: &[Vec<usize>],
    player: usize,
    action: usize,
    mode: DominanceMode,
) -> Option<Dominator> {
    let target = payoff_column(game, survivors, player, action);
    let others: Vec<usize> = survivors[player].iter().copied().filter(|&b| b != action).collect();
    let columns: Vec<Vec<Rational>> = others
        .iter()
        .map(|&b| payoff_column(game, survivors, player, b))
        .collect();

    for (&b, col) in others.iter().zip(&columns) {
        if col.iter().zip(&target).all(|(x, y)| x > y) {
            return Some(Dominator::Pure(b));
        }
    }
    if mode == DominanceMode::PureOnly || others.len() < 2 {
        return None;
    }

    // maximize eps  s.t.  sum_b sigma_b u(b, s) - eps >= u(a, s),  sum sigma = 1
    let k = others.len();
    let mut lp = LinearProgram::new(k + 1);
    lp.set_free(k);
    for (s, t) in target.iter().enumerate() {
        let mut row: Vec<Rational> = columns.iter().map(|c| c[s].clone()).collect();
        row.push(-Rational::one());
        lp.constrain(row, Relation::Ge, t.clone());
    }
    let mut sum = vec![Rational::one(); k];
    sum.push(Rational::zero());
    lp.constrain(sum, Relation::Eq, Rational::one());
    let mut objective = vec![Rational::zero(); k];
    objective.push(Rational::one());
    lp.maximize(objective);
    let (x, eps) = lp.solve().optimal().expect("dominance program is feasible and bounded");
    if !eps.is_positive() {
        return None;
    }
    let mut mix = vec![Rational::zero(); game.num_actions(player)];
    for (&b, w) in others.iter().zip(&x) {
        mix[b] = w.clone();
    }
    Some(Dominator::Mixed(mix))
}

fn all_actions(game: &Game) -> Vec<Vec<usize>> {
    (0..game.num_players()).map(|i| (0..game.num_actions(i)).collect()).collect()
}

fn dominated_now(game: &Game, survivors: &[Vec<usize>], mode: DominanceMode) -> Vec<(usize, usize, Dominator)> {
    let mut out = Vec::new();
    for (player, set) in survivors.iter().enumerate() {
        for &action in set {
            if let Some(d) = find_dominator(game, survivors, player, action, mode) {
                out.push((player, action, d));
            }
        }
    }
    out
}

/// Round-based elimination: every action dominated at the start of a round
/// is removed in that round.
pub fn iesds(game: &Game, mode: DominanceMode) -> SurvivorSet {
    let mut survivors = all_actions(game);
    let mut trace = Vec::new();
    let mut round = 0;
    loop {
        round += 1;
        let dominated = dominated_now(game, &survivors, mode);
        if dominated.is_empty() {
            return SurvivorSet { survivors, trace };
        }
        for (player, action, dominator) in dominated {
            survivors[player].retain(|&a| a != action);
            trace.push(Elimination {
                round,
                player,
                action,
                dominator,
            });
        }
    }
}

/// Elimination one action at a time. `pick` receives the currently dominated
/// `(player, action)` pairs and returns the index of the one to remove.
pub fn iesds_with_order<F>(game: &Game, mode: DominanceMode, mut pick: F) -> SurvivorSet
where
    F: FnMut(&[(usize, usize)]) -> usize,
{
    let mut survivors = all_actions(game);
    let mut trace = Vec::new();
    let mut step = 0;
    loop {
        let dominated = dominated_now(game, &survivors, mode);
        if dominated.is_empty() {
            return SurvivorSet { survivors, trace };
        }
        step += 1;
        let keys: Vec<(usize, usize)> = dominated.iter().map(|(p, a, _)| (*p, *a)).collect();
        let chosen = pick(&keys).min(keys.len() - 1);
        let (player, action, dominator) = dominated.into_iter().nth(chosen).expect("in range");
        survivors[player].retain(|&a| a != action);
        trace.push(Elimination {
            round: step,
            player,
            action,
            dominator,
        });
    }
}

/// Periodic actions that also survive elimination with mixed dominators.
pub fn rationalizable_periodic(game: &Game, policy: TiePolicy) -> Result<Vec<Vec<usize>>> {
    let graph = build_periodicity_graph(game, policy)?;
    let survivors = iesds(game, DominanceMode::AllowMixedDominators);
    Ok(graph
        .periodic_actions()
        .into_iter()
        .enumerate()
        .map(|(player, acts)| acts.into_iter().filter(|&a| survivors.contains(player, a)).collect())
        .collect())
}

/// The game restricted to its rationalizable actions together with that
/// smaller game's periodicity graph.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub survivors: SurvivorSet,
    pub game: Game,
    pub graph: PeriodicityGraph,
}

impl Reduction {
    /// Translates a node of the reduced graph back to original action indices.
    pub fn original(&self, node: Node) -> Node {
        Node::new(node.player, self.survivors.survivors[node.player][node.action])
    }
}

pub fn rationalizable_reduction(game: &Game, policy: TiePolicy) -> Result<Reduction> {
    let survivors = iesds(game, DominanceMode::AllowMixedDominators);
    let reduced = game.subgame(&survivors.survivors)?;
    let graph = build_periodicity_graph(&reduced, policy)?;
    Ok(Reduction {
        survivors,
        game: reduced,
        graph,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TypeCount {
    pub n: usize,
    pub types: usize,
    pub errors: usize,
}

/// Number of types, and of belief errors, needed to rationalize play along a
/// two-player periodic cycle.
pub fn type_count(cycle: &Cycle, anchor_player: usize) -> Result<TypeCount> {
    if cycle.num_players() != 2 {
        return Err(Error::NotTwoPlayer {
            players: cycle.num_players(),
        });
    }
    let n = periodicity_number(cycle, anchor_player)?;
    Ok(TypeCount {
        n,
        types: 2 * n,
        errors: 2 * n - 1,
    })
}
