//! Result documents and their text, JSON and DOT renderings.

use std::fmt::Write as _;

use serde::Serialize;

use periodic_core::coco::{coco_solution, decompose, Matrix};
use periodic_core::io::export_dot;
use periodic_core::mixed::{invariance_check, nash_support_enumeration, periodic_mixed};
use periodic_core::periodicity::{all_cycles, build_periodicity_graph, enumerate_cycles, reach_cycle};
use periodic_core::rationalizability::{
    rationalizable_periodic, rationalizable_reduction, type_count, Dominator, TypeCount,
};
use periodic_core::{Cycle, Error, Game, Node, PeriodicityGraph, Rational, Result, TiePolicy};

use crate::Format;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Serialize)]
struct Header {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    tie_policy: Option<TiePolicy>,
}

impl Header {
    fn new(command: &'static str, tie_policy: Option<TiePolicy>) -> Self {
        Header {
            tool: "periodic",
            version: VERSION,
            command,
            tie_policy,
        }
    }

    fn text(&self) -> String {
        let mut s = format!("{} {} {}", self.tool, self.version, self.command);
        if let Some(p) = self.tie_policy {
            let _ = write!(s, " (tie policy {p})");
        }
        s.push('\n');
        s
    }
}

#[derive(Debug, Serialize)]
struct GameSummary {
    players: Vec<String>,
    actions: Vec<Vec<String>>,
}

impl GameSummary {
    fn of(game: &Game) -> Self {
        GameSummary {
            players: game.players().to_vec(),
            actions: game.all_actions().to_vec(),
        }
    }

    fn text(&self) -> String {
        let parts: Vec<String> = self
            .players
            .iter()
            .zip(&self.actions)
            .map(|(p, a)| format!("{p} ({})", a.join(", ")))
            .collect();
        format!("players: {}\n", parts.join(", "))
    }
}

#[derive(Debug, Serialize)]
struct ActionSet {
    player: String,
    actions: Vec<String>,
}

fn action_sets(game: &Game, sets: &[Vec<usize>]) -> Vec<ActionSet> {
    sets.iter()
        .enumerate()
        .map(|(p, acts)| ActionSet {
            player: game.player_name(p).to_string(),
            actions: acts.iter().map(|&a| game.action_label(p, a).to_string()).collect(),
        })
        .collect()
}

fn sets_text(title: &str, sets: &[ActionSet]) -> String {
    let mut s = format!("{title}:\n");
    for set in sets {
        let list = if set.actions.is_empty() {
            "(none)".to_string()
        } else {
            set.actions.join(", ")
        };
        let _ = writeln!(s, "  {}: {list}", set.player);
    }
    s
}

fn fmt_vec(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

#[derive(Debug, Serialize)]
struct CycleReport {
    nodes: Vec<String>,
    players: Vec<String>,
    length: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    type_count: Option<TypeCount>,
}

fn cycle_report(graph: &PeriodicityGraph, cycle: &Cycle) -> CycleReport {
    let type_count = if graph.num_players() == 2 {
        let anchor = cycle.nodes()[0].player;
        type_count(cycle, anchor).ok()
    } else {
        None
    };
    CycleReport {
        nodes: cycle.nodes().iter().map(|&n| graph.node_label(n)).collect(),
        players: cycle.player_sequence().iter().map(|&p| graph.player_name(p).to_string()).collect(),
        length: cycle.len(),
        type_count,
    }
}

fn cycles_text(cycles: &[CycleReport]) -> String {
    if cycles.is_empty() {
        return "  (none)\n".to_string();
    }
    let mut s = String::new();
    for c in cycles {
        let _ = write!(s, "  {} -> {}", c.nodes.join(" -> "), c.nodes[0]);
        if let Some(t) = &c.type_count {
            let _ = write!(s, "  [n={}, types={}, errors={}]", t.n, t.types, t.errors);
        }
        s.push('\n');
    }
    s
}

/// Shared rendering: JSON for `machine`, prose for `text`, Graphviz for `dot`.
pub trait Render: Serialize {
    fn text(&self) -> String;

    fn dot(&self) -> Option<String> {
        None
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Machine => {
                let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
                s.push('\n');
                s
            }
            Format::Text => self.text(),
            Format::Dot => self.dot().expect("dot output is checked before dispatch"),
        }
    }
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "snake_case")]
enum DominatorReport {
    Pure(String),
    Mixed(Vec<(String, Rational)>),
}

#[derive(Debug, Serialize)]
struct EliminationReport {
    round: usize,
    player: String,
    action: String,
    dominator: DominatorReport,
}

#[derive(Debug, Serialize)]
struct ReducedReport {
    actions: Vec<ActionSet>,
    cycles: Vec<CycleReport>,
}

#[derive(Debug, Serialize)]
pub struct AnalyzeReport {
    #[serde(flatten)]
    header: Header,
    game: GameSummary,
    periodic: Vec<ActionSet>,
    degenerate_nodes: Vec<String>,
    survivors: Vec<ActionSet>,
    eliminations: Vec<EliminationReport>,
    rationalizable_periodic: Vec<ActionSet>,
    max_len: usize,
    cycles: Vec<CycleReport>,
    /// Shortest walks from each non-periodic node into a cycle.
    paths_to_cycles: Vec<Vec<String>>,
    reduced: ReducedReport,
    #[serde(skip)]
    dot: String,
}

pub fn analyze(game: &Game, policy: TiePolicy, max_len: Option<usize>) -> Result<AnalyzeReport> {
    let graph = build_periodicity_graph(game, policy)?;
    let max_len = max_len.unwrap_or(graph.num_nodes());
    let cycles = all_cycles(&graph, max_len);
    let reduction = rationalizable_reduction(game, policy)?;
    let eliminations = reduction
        .survivors
        .trace
        .iter()
        .map(|e| EliminationReport {
            round: e.round,
            player: game.player_name(e.player).to_string(),
            action: game.action_label(e.player, e.action).to_string(),
            dominator: match &e.dominator {
                Dominator::Pure(b) => DominatorReport::Pure(game.action_label(e.player, *b).to_string()),
                Dominator::Mixed(m) => DominatorReport::Mixed(
                    m.iter()
                        .enumerate()
                        .filter(|(_, w)| !w.is_zero())
                        .map(|(a, w)| (game.action_label(e.player, a).to_string(), w.clone()))
                        .collect(),
                ),
            },
        })
        .collect();
    let paths_to_cycles = graph
        .nodes()
        .iter()
        .filter(|&&n| !graph.is_on_cycle(n))
        .map(|&n| reach_cycle(&graph, n).into_iter().map(|m| graph.node_label(m)).collect())
        .collect();
    let reduced_cycles = all_cycles(&reduction.graph, max_len);
    Ok(AnalyzeReport {
        header: Header::new("analyze", Some(policy)),
        game: GameSummary::of(game),
        periodic: action_sets(game, &graph.periodic_actions()),
        degenerate_nodes: graph.degenerate_nodes().iter().map(|&n| graph.node_label(n)).collect(),
        survivors: action_sets(game, &reduction.survivors.survivors),
        eliminations,
        rationalizable_periodic: action_sets(game, &rationalizable_periodic(game, policy)?),
        max_len,
        cycles: cycles.iter().map(|c| cycle_report(&graph, c)).collect(),
        paths_to_cycles,
        reduced: ReducedReport {
            actions: action_sets(game, &reduction.survivors.survivors),
            cycles: reduced_cycles.iter().map(|c| cycle_report(&reduction.graph, c)).collect(),
        },
        dot: export_dot(&graph, &cycles),
    })
}

impl Render for AnalyzeReport {
    fn text(&self) -> String {
        let mut s = self.header.text();
        s += &self.game.text();
        s += &sets_text("periodic actions", &self.periodic);
        if !self.degenerate_nodes.is_empty() {
            let _ = writeln!(s, "tie-broken nodes: {}", self.degenerate_nodes.join(", "));
        }
        s += &sets_text("survivors of iterated strict dominance", &self.survivors);
        for e in &self.eliminations {
            let by = match &e.dominator {
                DominatorReport::Pure(b) => b.clone(),
                DominatorReport::Mixed(m) => m
                    .iter()
                    .map(|(a, w)| format!("{w}*{a}"))
                    .collect::<Vec<_>>()
                    .join(" + "),
            };
            let _ = writeln!(s, "  round {}: {} drops {} (dominated by {by})", e.round, e.player, e.action);
        }
        s += &sets_text("rationalizable periodic actions", &self.rationalizable_periodic);
        let _ = writeln!(s, "cycles (up to {} edges):", self.max_len);
        s += &cycles_text(&self.cycles);
        if !self.paths_to_cycles.is_empty() {
            s += "paths into cycles:\n";
            for p in &self.paths_to_cycles {
                let _ = writeln!(s, "  {}", p.join(" -> "));
            }
        }
        s += "cycles of the game restricted to survivors:\n";
        s += &cycles_text(&self.reduced.cycles);
        s
    }

    fn dot(&self) -> Option<String> {
        Some(self.dot.clone())
    }
}

#[derive(Debug, Serialize)]
pub struct CyclesReport {
    #[serde(flatten)]
    header: Header,
    #[serde(skip_serializing_if = "Option::is_none")]
    through: Option<String>,
    max_len: usize,
    cycles: Vec<CycleReport>,
    #[serde(skip)]
    dot: String,
}

pub fn cycles(game: &Game, policy: TiePolicy, max_len: Option<usize>, through: Option<Node>) -> Result<CyclesReport> {
    let graph = build_periodicity_graph(game, policy)?;
    let max_len = max_len.unwrap_or(graph.num_nodes());
    let found = match through {
        Some(n) => enumerate_cycles(&graph, n, max_len),
        None => all_cycles(&graph, max_len),
    };
    Ok(CyclesReport {
        header: Header::new("cycles", Some(policy)),
        through: through.map(|n| graph.node_label(n)),
        max_len,
        cycles: found.iter().map(|c| cycle_report(&graph, c)).collect(),
        dot: export_dot(&graph, &found),
    })
}

impl Render for CyclesReport {
    fn text(&self) -> String {
        let mut s = self.header.text();
        match &self.through {
            Some(n) => {
                let _ = writeln!(s, "cycles through {n} (up to {} edges):", self.max_len);
            }
            None => {
                let _ = writeln!(s, "cycles (up to {} edges):", self.max_len);
            }
        }
        s += &cycles_text(&self.cycles);
        s
    }

    fn dot(&self) -> Option<String> {
        Some(self.dot.clone())
    }
}

#[derive(Debug, Serialize)]
struct PeriodicEntry {
    player: String,
    feasible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    strategy: Option<Vec<Rational>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dimension: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    payoff_spread: Option<Rational>,
}

#[derive(Debug, Serialize)]
pub struct MixedReport {
    #[serde(flatten)]
    header: Header,
    game: GameSummary,
    periodic: Vec<PeriodicEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    profile_utilities: Option<Vec<Rational>>,
}

pub fn mixed(game: &Game) -> Result<MixedReport> {
    let mut entries = Vec::new();
    let mut strategies = Vec::new();
    for player in 0..game.num_players().min(2) {
        match periodic_mixed(game, player) {
            Ok(m) => {
                let spread = invariance_check(game, player, &m.strategy)?;
                strategies.push(m.strategy.clone());
                entries.push(PeriodicEntry {
                    player: game.player_name(player).to_string(),
                    feasible: true,
                    strategy: Some(m.strategy),
                    value: Some(m.value),
                    dimension: Some(m.dimension),
                    payoff_spread: Some(spread),
                });
            }
            Err(Error::Infeasible { .. }) => entries.push(PeriodicEntry {
                player: game.player_name(player).to_string(),
                feasible: false,
                strategy: None,
                value: None,
                dimension: None,
                payoff_spread: None,
            }),
            Err(e) => return Err(e),
        }
    }
    let profile_utilities = if strategies.len() == 2 {
        let profile = periodic_core::MixedProfile::new(strategies)?;
        Some(game.expected_utility(&profile)?)
    } else {
        None
    };
    Ok(MixedReport {
        header: Header::new("mixed", None),
        game: GameSummary::of(game),
        periodic: entries,
        profile_utilities,
    })
}

impl Render for MixedReport {
    fn text(&self) -> String {
        let mut s = self.header.text();
        s += &self.game.text();
        for e in &self.periodic {
            match (&e.strategy, &e.value, e.dimension, &e.payoff_spread) {
                (Some(p), Some(v), Some(d), Some(spread)) => {
                    let _ = writeln!(
                        s,
                        "{}: periodic mixture {} with payoff {v} against every opponent action (spread {spread}, solution set dimension {d})",
                        e.player,
                        fmt_vec(p)
                    );
                }
                _ => {
                    let _ = writeln!(s, "{}: no periodic mixture exists", e.player);
                }
            }
        }
        if let Some(u) = &self.profile_utilities {
            let _ = writeln!(s, "expected utilities of the periodic profile: {}", fmt_vec(u));
        }
        s
    }
}

#[derive(Debug, Serialize)]
struct EquilibriumEntry {
    strategies: Vec<Vec<Rational>>,
    utilities: Vec<Rational>,
    support: Vec<Vec<String>>,
    pure: bool,
}

#[derive(Debug, Serialize)]
pub struct NashReport {
    #[serde(flatten)]
    header: Header,
    game: GameSummary,
    equilibria: Vec<EquilibriumEntry>,
}

pub fn nash(game: &Game) -> Result<NashReport> {
    let equilibria = nash_support_enumeration(game)?
        .into_iter()
        .map(|e| EquilibriumEntry {
            pure: e.is_pure(),
            support: e
                .support
                .iter()
                .enumerate()
                .map(|(p, s)| s.iter().map(|&a| game.action_label(p, a).to_string()).collect())
                .collect(),
            strategies: e.profile.distributions().to_vec(),
            utilities: e.utilities,
        })
        .collect();
    Ok(NashReport {
        header: Header::new("nash", None),
        game: GameSummary::of(game),
        equilibria,
    })
}

impl Render for NashReport {
    fn text(&self) -> String {
        let mut s = self.header.text();
        s += &self.game.text();
        let noun = if self.equilibria.len() == 1 { "equilibrium" } else { "equilibria" };
        let _ = writeln!(s, "{} {noun}:", self.equilibria.len());
        for e in &self.equilibria {
            let strategies: Vec<String> = e.strategies.iter().map(|d| fmt_vec(d)).collect();
            let _ = writeln!(
                s,
                "  {} utilities {}{}",
                strategies.join(" x "),
                fmt_vec(&e.utilities),
                if e.pure { " (pure)" } else { "" }
            );
        }
        s
    }
}

#[derive(Debug, Serialize)]
pub struct CocoReport {
    #[serde(flatten)]
    header: Header,
    game: GameSummary,
    cooperative: Matrix,
    competitive: Matrix,
    vsharp: Rational,
    vs: Rational,
    profile: Vec<String>,
    tied_profiles: Vec<Vec<String>>,
    side_payment: Rational,
    final_payoffs: Vec<Rational>,
    zero_sum_strategies: Vec<Vec<Rational>>,
}

pub fn coco(game: &Game) -> Result<CocoReport> {
    let d = decompose(game)?;
    let c = coco_solution(game)?;
    let labels = |p: &[usize]| -> Vec<String> {
        p.iter()
            .enumerate()
            .map(|(i, &a)| game.action_label(i, a).to_string())
            .collect()
    };
    Ok(CocoReport {
        header: Header::new("coco", None),
        game: GameSummary::of(game),
        cooperative: d.cooperative,
        competitive: d.competitive,
        vsharp: c.vsharp,
        vs: c.vs,
        profile: labels(&c.profile),
        tied_profiles: c.tied.iter().map(|p| labels(p)).collect(),
        side_payment: c.side_payment,
        final_payoffs: c.final_payoffs.to_vec(),
        zero_sum_strategies: c.zero_sum_strategies.to_vec(),
    })
}

impl Render for CocoReport {
    fn text(&self) -> String {
        let mut s = self.header.text();
        s += &self.game.text();
        let _ = writeln!(s, "V# = {} (maximal combined payoff)", self.vsharp);
        let _ = writeln!(s, "VS = {} (value of the competitive part)", self.vs);
        let _ = writeln!(s, "cooperative profile: ({})", self.profile.join(", "));
        if self.tied_profiles.len() > 1 {
            let tied: Vec<String> = self.tied_profiles.iter().map(|p| format!("({})", p.join(", "))).collect();
            let _ = writeln!(s, "  also maximal: {}", tied[1..].join(", "));
        }
        let _ = writeln!(s, "side payment from {} to {}: {}", self.game.players[1], self.game.players[0], self.side_payment);
        let _ = writeln!(s, "final payoffs: {}", fmt_vec(&self.final_payoffs));
        let _ = writeln!(
            s,
            "competitive optimal strategies: {} / {}",
            fmt_vec(&self.zero_sum_strategies[0]),
            fmt_vec(&self.zero_sum_strategies[1])
        );
        s
    }
}
