//! JSON documents for games and Bayesian games, and Graphviz export of
//! periodicity graphs.
//!
//! A game document looks like
//!
//! ```json
//! {
//!   "players": ["A", "B"],
//!   "actions": [["a1", "a2"], ["b1", "b2"]],
//!   "payoffs": [[[2, 1], [0, 0]], [[0, 0], [1, 2]]]
//! }
//! ```
//!
//! `payoffs` nests one array level per player (first player outermost) and
//! ends in the vector of utilities. Numbers are JSON integers or strings
//! holding integers, fractions (`"48/49"`) or decimals (`"0.25"`).

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::bayesian::BayesianGame;
use crate::error::{Error, Result};
use crate::game::Game;
use crate::periodicity::{Cycle, Node, PeriodicityGraph};
use crate::rational::Rational;

/// Arbitrarily nested arrays of rationals.
#[derive(Debug, Clone)]
enum Nested {
    Scalar(Rational),
    List(Vec<Nested>),
}

impl<'de> Deserialize<'de> for Nested {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct NestedVisitor;

        impl<'de> Visitor<'de> for NestedVisitor {
            type Value = Nested;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number, a numeric string or an array")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Nested, E> {
                Ok(Nested::Scalar(Rational::from(v)))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Nested, E> {
                Rational::deserialize(de::value::U64Deserializer::new(v)).map(Nested::Scalar)
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Nested, E> {
                Rational::deserialize(de::value::F64Deserializer::new(v)).map(Nested::Scalar)
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Nested, E> {
                v.parse().map(Nested::Scalar).map_err(E::custom)
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<Nested, A::Error> {
                let mut items = Vec::new();
                while let Some(item) = seq.next_element()? {
                    items.push(item);
                }
                Ok(Nested::List(items))
            }
        }

        deserializer.deserialize_any(NestedVisitor)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GameDoc {
    players: Vec<String>,
    actions: Vec<Vec<String>>,
    payoffs: Nested,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PriorEntry {
    theta: String,
    types: Vec<String>,
    probability: Rational,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BayesDoc {
    players: Vec<String>,
    actions: Vec<Vec<String>>,
    thetas: Vec<String>,
    types: Vec<Vec<String>>,
    prior: Vec<PriorEntry>,
    /// State label -> payoff tensor.
    payoffs: Map<String, Value>,
}

fn json_error(e: serde_json::Error) -> Error {
    let message = e.to_string();
    // serde_json appends " at line L column C"; the position is kept apart.
    let message = match message.rfind(" at line ") {
        Some(k) => message[..k].to_string(),
        None => message,
    };
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message,
    }
}

/// Flattens the nested payoff arrays into the dense tensor, checking the
/// shape along the way. `path` names the profile prefix for messages.
fn flatten(node: Nested, shape: &[usize], n: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<Rational>>) -> Result<()> {
    let Nested::List(items) = node else {
        return Err(Error::BadDimension(format!(
            "payoffs at {path:?}: expected an array, found a number"
        )));
    };
    if let Some((&len, rest)) = shape.split_first() {
        if items.len() != len {
            return Err(Error::DimensionMismatch {
                what: format!("payoff array at {path:?}"),
                expected: len,
                found: items.len(),
            });
        }
        for (k, item) in items.into_iter().enumerate() {
            path.push(k);
            flatten(item, rest, n, path, out)?;
            path.pop();
        }
        return Ok(());
    }
    if items.len() != n {
        return Err(Error::DimensionMismatch {
            what: format!("utilities at profile {path:?}"),
            expected: n,
            found: items.len(),
        });
    }
    let mut utilities = Vec::with_capacity(n);
    for item in items {
        match item {
            Nested::Scalar(x) => utilities.push(x),
            Nested::List(_) => {
                return Err(Error::BadDimension(format!(
                    "utilities at profile {path:?} must be numbers"
                )))
            }
        }
    }
    out.push(utilities);
    Ok(())
}

fn build_game(players: Vec<String>, actions: Vec<Vec<String>>, payoffs: Nested) -> Result<Game> {
    if players.len() < 2 {
        return Err(Error::BadDimension(format!(
            "a game needs at least two players, got {}",
            players.len()
        )));
    }
    if actions.len() != players.len() {
        return Err(Error::DimensionMismatch {
            what: "action lists".into(),
            expected: players.len(),
            found: actions.len(),
        });
    }
    let shape: Vec<usize> = actions.iter().map(Vec::len).collect();
    let mut dense = Vec::new();
    flatten(payoffs, &shape, players.len(), &mut Vec::new(), &mut dense)?;
    Game::new(players, actions, dense)
}

pub fn parse_game(doc: &str) -> Result<Game> {
    let d: GameDoc = serde_json::from_str(doc).map_err(json_error)?;
    build_game(d.players, d.actions, d.payoffs)
}

fn index_of(kind: &'static str, labels: &[String], name: &str) -> Result<usize> {
    labels.iter().position(|l| l == name).ok_or_else(|| Error::UnknownLabel {
        kind,
        name: name.to_string(),
    })
}

pub fn parse_bayes(doc: &str) -> Result<BayesianGame> {
    let d: BayesDoc = serde_json::from_str(doc).map_err(json_error)?;
    if d.types.len() != d.players.len() {
        return Err(Error::DimensionMismatch {
            what: "type lists".into(),
            expected: d.players.len(),
            found: d.types.len(),
        });
    }
    let listed: BTreeSet<&String> = d.payoffs.keys().collect();
    if let Some(extra) = listed.iter().find(|k| !d.thetas.contains(k)) {
        return Err(Error::UnknownLabel {
            kind: "state",
            name: extra.to_string(),
        });
    }
    let mut states = Vec::with_capacity(d.thetas.len());
    for theta in &d.thetas {
        let table = d.payoffs.get(theta).ok_or_else(|| {
            Error::BadDimension(format!("no payoff table for state {theta:?}"))
        })?;
        let nested = Nested::deserialize(table).map_err(json_error)?;
        states.push(build_game(d.players.clone(), d.actions.clone(), nested)?);
    }
    let mut entries = Vec::with_capacity(d.prior.len());
    for e in d.prior {
        let theta = index_of("state", &d.thetas, &e.theta)?;
        if e.types.len() != d.players.len() {
            return Err(Error::DimensionMismatch {
                what: "prior type profile".into(),
                expected: d.players.len(),
                found: e.types.len(),
            });
        }
        let profile = e
            .types
            .iter()
            .zip(&d.types)
            .map(|(name, list)| index_of("type", list, name))
            .collect::<Result<Vec<_>>>()?;
        entries.push((theta, profile, e.probability));
    }
    BayesianGame::from_prior_entries(d.players, d.actions, d.thetas, d.types, entries, states)
}

/// Integers become JSON numbers when they fit, anything else a string.
fn number(x: &Rational) -> Value {
    if x.is_integer() {
        if let Ok(v) = x.to_string().parse::<i64>() {
            return Value::from(v);
        }
    }
    Value::String(x.to_string())
}

fn nested_payoffs(game: &Game) -> Value {
    fn build(game: &Game, prefix: &mut Vec<usize>) -> Value {
        if prefix.len() == game.num_players() {
            let u = game.payoff(prefix).expect("complete profile");
            return Value::Array(u.iter().map(number).collect());
        }
        let player = prefix.len();
        let mut items = Vec::with_capacity(game.num_actions(player));
        for a in 0..game.num_actions(player) {
            prefix.push(a);
            items.push(build(game, prefix));
            prefix.pop();
        }
        Value::Array(items)
    }
    build(game, &mut Vec::new())
}

pub fn game_to_json(game: &Game) -> Value {
    json!({
        "players": game.players(),
        "actions": game.all_actions(),
        "payoffs": nested_payoffs(game),
    })
}

pub fn write_game(game: &Game) -> String {
    let mut s = serde_json::to_string_pretty(&game_to_json(game)).expect("values serialize");
    s.push('\n');
    s
}

pub fn write_bayes(bg: &BayesianGame) -> String {
    let prior: Vec<Value> = bg
        .support()
        .into_iter()
        .map(|(theta, t, p)| {
            let types: Vec<&str> = t.iter().enumerate().map(|(i, &k)| bg.types()[i][k].as_str()).collect();
            json!({ "theta": bg.thetas()[theta], "types": types, "probability": number(&p) })
        })
        .collect();
    let mut payoffs = Map::new();
    for (theta, g) in bg.thetas().iter().zip(bg.state_games()) {
        payoffs.insert(theta.clone(), nested_payoffs(g));
    }
    let doc = json!({
        "players": bg.players(),
        "actions": bg.actions(),
        "thetas": bg.thetas(),
        "types": bg.types(),
        "prior": prior,
        "payoffs": payoffs,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("values serialize");
    s.push('\n');
    s
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Graphviz digraph of the periodicity graph. Edges carry the name of the
/// player whose node they enter; nodes and edges of `highlight` are drawn
/// bold and red, degenerate (tie-broken) nodes dashed.
pub fn export_dot(graph: &PeriodicityGraph, highlight: &[Cycle]) -> String {
    let mut hot_nodes: BTreeSet<Node> = BTreeSet::new();
    let mut hot_edges: BTreeSet<(Node, Node)> = BTreeSet::new();
    for c in highlight {
        let nodes = c.nodes();
        for (k, &n) in nodes.iter().enumerate() {
            hot_nodes.insert(n);
            hot_edges.insert((n, nodes[(k + 1) % nodes.len()]));
        }
    }

    let mut out = String::from("digraph periodicity {\n    rankdir=LR;\n    node [shape=box];\n");
    for &n in graph.nodes() {
        let mut attrs = Vec::new();
        if hot_nodes.contains(&n) {
            attrs.push("color=red, penwidth=2".to_string());
        }
        if graph.is_degenerate(n) {
            attrs.push("style=dashed".to_string());
        }
        let _ = write!(out, "    {}", quote(&graph.node_label(n)));
        if !attrs.is_empty() {
            let _ = write!(out, " [{}]", attrs.join(", "));
        }
        out.push_str(";\n");
    }
    for (from, to) in graph.edges() {
        let mut attrs = vec![format!("label={}", quote(graph.player_name(to.player)))];
        if hot_edges.contains(&(from, to)) {
            attrs.push("color=red, penwidth=2".to_string());
        }
        let _ = writeln!(
            out,
            "    {} -> {} [{}];",
            quote(&graph.node_label(from)),
            quote(&graph.node_label(to)),
            attrs.join(", ")
        );
    }
    out.push_str("}\n");
    out
}
