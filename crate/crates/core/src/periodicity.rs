//! Periodicity graphs.
//!
//! For each action `a` of player `i` the joint opponent profile maximizing
//! `U_i(a, ·)` is selected; that profile contributes one edge
//! `(i, a) -> (j, b_j)` for every opponent `j`. An action is periodic when its
//! node lies on a directed cycle, i.e. some composition of the maps returns to
//! it. Because every node has out-degree `N - 1 >= 1`, every walk eventually
//! reaches such a node.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::Game;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Node {
    pub player: usize,
    pub action: usize,
}

impl Node {
    pub fn new(player: usize, action: usize) -> Self {
        Node { player, action }
    }
}

/// How to resolve a non-unique argmax when selecting opponent profiles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TiePolicy {
    /// Ties are an error.
    Strict,
    /// The lexicographically smallest tied profile wins and the node is
    /// flagged as degenerate.
    #[default]
    #[serde(rename = "lex")]
    Lexicographic,
}

impl fmt::Display for TiePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TiePolicy::Strict => "strict",
            TiePolicy::Lexicographic => "lex",
        })
    }
}

impl FromStr for TiePolicy {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "strict" => Ok(TiePolicy::Strict),
            "lex" | "lexicographic" => Ok(TiePolicy::Lexicographic),
            other => Err(format!("unknown tie policy {other:?} (expected strict or lex)")),
        }
    }
}

/// The opponent profile selected for one node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BestDeviation {
    /// Full action profile; the deviating player's own entry is the fixed
    /// action.
    pub profile: Vec<usize>,
    /// True when the maximizer is unique.
    pub strict: bool,
    /// All maximizing profiles in lexicographic order.
    pub tied: Vec<Vec<usize>>,
}

pub fn best_deviation_profile(
    game: &Game,
    player: usize,
    action: usize,
    policy: TiePolicy,
) -> Result<BestDeviation> {
    if player >= game.num_players() {
        return Err(Error::DimensionMismatch {
            what: "player index".into(),
            expected: game.num_players(),
            found: player,
        });
    }
    if action >= game.num_actions(player) {
        return Err(Error::IndexOutOfRange {
            player,
            index: action,
            len: game.num_actions(player),
        });
    }
    let mut best: Option<crate::Rational> = None;
    let mut tied: Vec<Vec<usize>> = Vec::new();
    for profile in game.profiles_with(player, action) {
        let u = game.utility(player, &profile);
        match &best {
            Some(b) if u < b => {}
            Some(b) if u == b => tied.push(profile),
            _ => {
                best = Some(u.clone());
                tied.clear();
                tied.push(profile);
            }
        }
    }
    let strict = tied.len() == 1;
    if !strict && policy == TiePolicy::Strict {
        return Err(Error::DegenerateArgmax {
            player,
            action,
            tied,
        });
    }
    Ok(BestDeviation {
        profile: tied[0].clone(),
        strict,
        tied,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicityGraph {
    players: Vec<String>,
    actions: Vec<Vec<String>>,
    offsets: Vec<usize>,
    nodes: Vec<Node>,
    successors: Vec<Vec<usize>>,
    degenerate: BTreeSet<Node>,
    policy: TiePolicy,
}

pub fn build_periodicity_graph(game: &Game, policy: TiePolicy) -> Result<PeriodicityGraph> {
    let n = game.num_players();
    let mut offsets = Vec::with_capacity(n);
    let mut nodes = Vec::new();
    for player in 0..n {
        offsets.push(nodes.len());
        nodes.extend((0..game.num_actions(player)).map(|a| Node::new(player, a)));
    }
    let mut successors = Vec::with_capacity(nodes.len());
    let mut degenerate = BTreeSet::new();
    for node in &nodes {
        let dev = best_deviation_profile(game, node.player, node.action, policy)?;
        if !dev.strict {
            degenerate.insert(*node);
        }
        let succ = (0..n)
            .filter(|&j| j != node.player)
            .map(|j| offsets[j] + dev.profile[j])
            .collect();
        successors.push(succ);
    }
    Ok(PeriodicityGraph {
        players: game.players().to_vec(),
        actions: game.all_actions().to_vec(),
        offsets,
        nodes,
        successors,
        degenerate,
        policy,
    })
}

impl PeriodicityGraph {
    pub fn num_players(&self) -> usize {
        self.players.len()
    }

    pub fn players(&self) -> &[String] {
        &self.players
    }

    pub fn policy(&self) -> TiePolicy {
        self.policy
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_edges(&self) -> usize {
        self.successors.iter().map(Vec::len).sum()
    }

    pub fn contains_node(&self, node: Node) -> bool {
        node.player < self.players.len() && node.action < self.actions[node.player].len()
    }

    fn id(&self, node: Node) -> usize {
        assert!(self.contains_node(node), "node {node:?} not in graph");
        self.offsets[node.player] + node.action
    }

    /// Targets of the out-edges of `node`, in opponent order. The label of
    /// each edge is the target's player.
    pub fn successors(&self, node: Node) -> impl Iterator<Item = Node> + '_ {
        self.successors[self.id(node)].iter().map(|&k| self.nodes[k])
    }

    pub fn out_degree(&self, node: Node) -> usize {
        self.successors[self.id(node)].len()
    }

    pub fn edges(&self) -> Vec<(Node, Node)> {
        self.nodes
            .iter()
            .flat_map(|&n| self.successors(n).map(move |t| (n, t)))
            .collect()
    }

    pub fn has_edge(&self, from: Node, to: Node) -> bool {
        self.successors(from).any(|t| t == to)
    }

    pub fn degenerate_nodes(&self) -> &BTreeSet<Node> {
        &self.degenerate
    }

    pub fn is_degenerate(&self, node: Node) -> bool {
        self.degenerate.contains(&node)
    }

    pub fn player_name(&self, player: usize) -> &str {
        &self.players[player]
    }

    pub fn action_label(&self, node: Node) -> &str {
        &self.actions[node.player][node.action]
    }

    /// `player:action` display id.
    pub fn node_label(&self, node: Node) -> String {
        format!("{}:{}", self.players[node.player], self.action_label(node))
    }

    /// Marks every node that lies on at least one directed cycle.
    fn cycle_membership(&self) -> Vec<bool> {
        (0..self.nodes.len())
            .map(|start| {
                let mut seen = vec![false; self.nodes.len()];
                let mut queue: VecDeque<usize> = self.successors[start].iter().copied().collect();
                while let Some(v) = queue.pop_front() {
                    if v == start {
                        return true;
                    }
                    if std::mem::replace(&mut seen[v], true) {
                        continue;
                    }
                    queue.extend(self.successors[v].iter().copied());
                }
                false
            })
            .collect()
    }

    pub fn is_on_cycle(&self, node: Node) -> bool {
        self.cycle_membership()[self.id(node)]
    }

    /// Per player, the actions whose nodes lie on a cycle.
    pub fn periodic_actions(&self) -> Vec<Vec<usize>> {
        let on = self.cycle_membership();
        let mut out = vec![Vec::new(); self.players.len()];
        for (k, node) in self.nodes.iter().enumerate() {
            if on[k] {
                out[node.player].push(node.action);
            }
        }
        out
    }
}

pub fn periodic_actions(game: &Game, policy: TiePolicy) -> Result<Vec<Vec<usize>>> {
    Ok(build_periodicity_graph(game, policy)?.periodic_actions())
}

/// A simple directed cycle `n_0 -> n_1 -> ... -> n_{L-1} -> n_0`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cycle {
    nodes: Vec<Node>,
    num_players: usize,
}

impl Cycle {
    /// Wraps a node sequence; checks only that it is nonempty and simple.
    pub fn new(nodes: Vec<Node>, num_players: usize) -> Self {
        assert!(!nodes.is_empty(), "empty cycle");
        debug_assert_eq!(
            nodes.iter().collect::<BTreeSet<_>>().len(),
            nodes.len(),
            "repeated node in cycle"
        );
        Cycle { nodes, num_players }
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    /// Number of edges, equal to the number of nodes.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Players of the game the cycle was taken from.
    pub fn num_players(&self) -> usize {
        self.num_players
    }

    /// The sequence of players whose utilities drive each step.
    pub fn player_sequence(&self) -> Vec<usize> {
        self.nodes.iter().map(|n| n.player).collect()
    }

    pub fn contains(&self, node: Node) -> bool {
        self.nodes.contains(&node)
    }

    /// Whether the cycle follows the edges of `graph`, closing edge included.
    pub fn is_valid_in(&self, graph: &PeriodicityGraph) -> bool {
        let l = self.nodes.len();
        (0..l).all(|k| graph.has_edge(self.nodes[k], self.nodes[(k + 1) % l]))
    }
}

fn cycle_order(a: &Cycle, b: &Cycle) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.nodes.cmp(&b.nodes))
}

/// All simple cycles through `through` with at most `max_len` edges, each
/// rotated to start at `through`, shortest first.
pub fn enumerate_cycles(graph: &PeriodicityGraph, through: Node, max_len: usize) -> Vec<Cycle> {
    let start = graph.id(through);
    let can_return = reaches(graph, start);
    let mut out = Vec::new();
    let mut path = vec![start];
    let mut on_path = vec![false; graph.num_nodes()];
    on_path[start] = true;
    search(graph, start, max_len, &|v| can_return[v], &mut path, &mut on_path, &mut out);
    let mut cycles: Vec<Cycle> = out
        .into_iter()
        .map(|ids| Cycle::new(ids.into_iter().map(|k| graph.nodes[k]).collect(), graph.num_players()))
        .collect();
    cycles.sort_by(cycle_order);
    cycles
}

/// Every simple cycle of the graph with at most `max_len` edges, each reported
/// once, rotated to start at its smallest node.
pub fn all_cycles(graph: &PeriodicityGraph, max_len: usize) -> Vec<Cycle> {
    let mut cycles = Vec::new();
    for start in 0..graph.num_nodes() {
        let can_return = reaches(graph, start);
        let mut out = Vec::new();
        let mut path = vec![start];
        let mut on_path = vec![false; graph.num_nodes()];
        on_path[start] = true;
        search(
            graph,
            start,
            max_len,
            &|v| v > start && can_return[v],
            &mut path,
            &mut on_path,
            &mut out,
        );
        cycles.extend(out.into_iter().map(|ids| {
            Cycle::new(ids.into_iter().map(|k| graph.nodes[k]).collect(), graph.num_players())
        }));
    }
    cycles.sort_by(cycle_order);
    cycles
}

/// Nodes from which `target` is reachable.
fn reaches(graph: &PeriodicityGraph, target: usize) -> Vec<bool> {
    let n = graph.num_nodes();
    let mut preds = vec![Vec::new(); n];
    for (v, succ) in graph.successors.iter().enumerate() {
        for &w in succ {
            preds[w].push(v);
        }
    }
    let mut mark = vec![false; n];
    mark[target] = true;
    let mut stack = vec![target];
    while let Some(v) = stack.pop() {
        for &u in &preds[v] {
            if !mark[u] {
                mark[u] = true;
                stack.push(u);
            }
        }
    }
    mark
}

fn search(
    graph: &PeriodicityGraph,
    start: usize,
    max_len: usize,
    allowed: &dyn Fn(usize) -> bool,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    out: &mut Vec<Vec<usize>>,
) {
    let v = *path.last().expect("path starts at the anchor");
    for &w in &graph.successors[v] {
        if w == start {
            if path.len() >= 2 && path.len() <= max_len {
                out.push(path.clone());
            }
            continue;
        }
        if on_path[w] || !allowed(w) || path.len() >= max_len {
            continue;
        }
        on_path[w] = true;
        path.push(w);
        search(graph, start, max_len, allowed, path, on_path, out);
        path.pop();
        on_path[w] = false;
    }
}

/// Shortest walk from `start` to a node on a cycle, both ends included; a
/// single-element path when `start` is itself periodic.
pub fn reach_cycle(graph: &PeriodicityGraph, start: Node) -> Vec<Node> {
    let on = graph.cycle_membership();
    let s = graph.id(start);
    let mut parent: Vec<Option<usize>> = vec![None; graph.num_nodes()];
    let mut seen = vec![false; graph.num_nodes()];
    seen[s] = true;
    let mut queue = VecDeque::from([s]);
    while let Some(v) = queue.pop_front() {
        if on[v] {
            let mut path = vec![graph.nodes[v]];
            let mut cur = v;
            while let Some(p) = parent[cur] {
                path.push(graph.nodes[p]);
                cur = p;
            }
            path.reverse();
            return path;
        }
        for &w in &graph.successors[v] {
            if !seen[w] {
                seen[w] = true;
                parent[w] = Some(v);
                queue.push_back(w);
            }
        }
    }
    unreachable!("every node reaches a cycle in a graph with positive out-degree")
}

/// Number of `anchor_player` nodes on the cycle.
pub fn periodicity_number(cycle: &Cycle, anchor_player: usize) -> Result<usize> {
    let n = cycle.nodes.iter().filter(|n| n.player == anchor_player).count();
    if n == 0 {
        return Err(Error::AnchorNotOnCycle {
            player: anchor_player,
        });
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::Rational;

    fn n(p: usize, a: usize) -> Node {
        Node::new(p, a)
    }

    #[test]
    fn intro_best_deviation() {
        let g = fixtures::intro_game();
        let d = best_deviation_profile(&g, 0, 0, TiePolicy::Strict).unwrap();
        assert_eq!(d.profile, vec![0, 0]);
        assert!(d.strict);
    }

    #[test]
    fn prisoners_dilemma_best_deviation() {
        let g = fixtures::prisoners_dilemma();
        let d = best_deviation_profile(&g, 0, 0, TiePolicy::Strict).unwrap();
        assert_eq!(d.profile, vec![0, 0]);
        assert!(d.strict);
    }

    #[test]
    fn constant_game_is_degenerate_under_strict() {
        let g = Game::bimatrix_int(&[vec![(1, 1), (1, 1)], vec![(1, 1), (1, 1)]]).unwrap();
        let err = best_deviation_profile(&g, 0, 0, TiePolicy::Strict).unwrap_err();
        assert_eq!(
            err,
            Error::DegenerateArgmax {
                player: 0,
                action: 0,
                tied: vec![vec![0, 0], vec![0, 1]]
            }
        );
        assert!(build_periodicity_graph(&g, TiePolicy::Strict).is_err());
        let graph = build_periodicity_graph(&g, TiePolicy::Lexicographic).unwrap();
        assert_eq!(graph.degenerate_nodes().len(), 4);
        assert!(graph.has_edge(n(0, 1), n(1, 0)));
    }

    #[test]
    fn intro_graph_shape() {
        let g = fixtures::intro_game();
        let graph = build_periodicity_graph(&g, TiePolicy::Strict).unwrap();
        assert_eq!(graph.num_nodes(), 4);
        assert_eq!(graph.num_edges(), 4);
        assert!(graph.has_edge(n(0, 0), n(1, 0)));
        assert!(graph.has_edge(n(1, 0), n(0, 0)));
        // Row 2 pays A most against column 2, and column 2 pays B most
        // against row 2.
        assert!(graph.has_edge(n(0, 1), n(1, 1)));
        assert!(graph.has_edge(n(1, 1), n(0, 1)));
    }

    #[test]
    fn battle_of_sexes_two_cycles() {
        let g = fixtures::battle_of_sexes();
        let graph = build_periodicity_graph(&g, TiePolicy::Strict).unwrap();
        let cycles = all_cycles(&graph, 4);
        assert_eq!(
            cycles,
            vec![
                Cycle::new(vec![n(0, 0), n(1, 0)], 2),
                Cycle::new(vec![n(0, 1), n(1, 1)], 2)
            ]
        );
        assert_eq!(graph.periodic_actions(), vec![vec![0, 1], vec![0, 1]]);
    }

    #[test]
    fn prisoners_dilemma_periodic_pair() {
        let g = fixtures::prisoners_dilemma();
        let p = periodic_actions(&g, TiePolicy::Lexicographic).unwrap();
        assert!(p[0].contains(&0));
        assert!(p[1].contains(&0));
    }

    #[test]
    fn enumerate_through_intro_node() {
        let g = fixtures::intro_game();
        let graph = build_periodicity_graph(&g, TiePolicy::Strict).unwrap();
        let cycles = enumerate_cycles(&graph, n(0, 0), 4);
        assert_eq!(cycles, vec![Cycle::new(vec![n(0, 0), n(1, 0)], 2)]);
    }

    #[test]
    fn node_off_cycle_has_no_cycles_and_reaches_one() {
        // A's second action is answered by column 1, which points back to row 1.
        let g = Game::bimatrix_int(&[vec![(3, 3), (0, 0)], vec![(2, 0), (1, 1)]]).unwrap();
        let graph = build_periodicity_graph(&g, TiePolicy::Strict).unwrap();
        assert!(graph.has_edge(n(0, 1), n(1, 0)));
        assert!(!graph.is_on_cycle(n(0, 1)));
        assert!(enumerate_cycles(&graph, n(0, 1), 4).is_empty());
        assert_eq!(reach_cycle(&graph, n(0, 1)), vec![n(0, 1), n(1, 0)]);
        assert_eq!(reach_cycle(&graph, n(0, 0)), vec![n(0, 0)]);
    }

    #[test]
    fn three_player_cycles_respect_edges() {
        let g = Game::from_fn(
            vec!["A".into(), "B".into(), "C".into()],
            vec![vec!["1".into(), "2".into()]; 3],
            |p| {
                vec![
                    Rational::from((p[0] * 5 + p[1] * 3 + p[2] * 7) as i64 % 11),
                    Rational::from((p[0] * 2 + p[1] * 9 + p[2] * 4) as i64 % 7),
                    Rational::from((p[0] * 8 + p[1] + p[2] * 6) as i64 % 5),
                ]
            },
        )
        .unwrap();
        let graph = build_periodicity_graph(&g, TiePolicy::Lexicographic).unwrap();
        for node in graph.nodes() {
            assert_eq!(graph.out_degree(*node), 2);
        }
        let cycles = all_cycles(&graph, graph.num_nodes());
        assert!(!cycles.is_empty());
        for c in &cycles {
            assert!(c.is_valid_in(&graph));
        }
        for node in graph.nodes() {
            for c in enumerate_cycles(&graph, *node, graph.num_nodes()) {
                assert_eq!(c.nodes()[0], *node);
                assert!(c.is_valid_in(&graph));
            }
        }
    }

    #[test]
    fn periodicity_number_counts_anchor_nodes() {
        let c = Cycle::new(vec![n(0, 0), n(1, 0)], 2);
        assert_eq!(periodicity_number(&c, 0).unwrap(), 1);
        let c4 = Cycle::new(vec![n(0, 0), n(1, 1), n(0, 1), n(1, 0)], 2);
        assert_eq!(periodicity_number(&c4, 1).unwrap(), 2);
        let c3 = Cycle::new(vec![n(0, 0), n(2, 1)], 3);
        assert_eq!(
            periodicity_number(&c3, 1),
            Err(Error::AnchorNotOnCycle { player: 1 })
        );
    }

    #[test]
    fn tie_policy_parsing() {
        assert_eq!("lex".parse::<TiePolicy>().unwrap(), TiePolicy::Lexicographic);
        assert_eq!("strict".parse::<TiePolicy>().unwrap(), TiePolicy::Strict);
        assert!("other".parse::<TiePolicy>().is_err());
        assert_eq!(TiePolicy::default(), TiePolicy::Lexicographic);
    }

    #[test]
    fn build_is_deterministic() {
        let g = Game::bimatrix_int(&[vec![(0, 0), (0, 1)], vec![(0, 0), (1, 0)]]).unwrap();
        let a = build_periodicity_graph(&g, TiePolicy::Lexicographic).unwrap();
        let b = build_periodicity_graph(&g, TiePolicy::Lexicographic).unwrap();
        assert_eq!(a, b);
    }
}
