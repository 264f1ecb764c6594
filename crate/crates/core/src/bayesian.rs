//! Finite Bayesian games with a common prior, their belief hierarchies up to
//! second order, and the complete-information games derived from them.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{Game, Profiles};
use crate::rational::Rational;

/// Default cap on the number of strategy profiles of a constructed game.
pub const DEFAULT_PROFILE_LIMIT: u128 = 100_000;

/// A Bayesian game `(N, A, Θ, T, u, π)`.
///
/// The prior is stored densely, θ-major, then type profiles with the last
/// player's type varying fastest. `payoffs[θ]` is the state game for θ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BayesianGame {
    players: Vec<String>,
    actions: Vec<Vec<String>>,
    thetas: Vec<String>,
    types: Vec<Vec<String>>,
    prior: Vec<Rational>,
    payoffs: Vec<Game>,
}

/// Position of the first repeated label, if any.
fn first_duplicate(labels: &[String]) -> Option<&String> {
    let mut seen = BTreeSet::new();
    labels.iter().find(|l| !seen.insert(*l))
}

impl BayesianGame {
    pub fn new(
        players: Vec<String>,
        actions: Vec<Vec<String>>,
        thetas: Vec<String>,
        types: Vec<Vec<String>>,
        prior: Vec<Rational>,
        payoffs: Vec<Game>,
    ) -> Result<Self> {
        let bg = BayesianGame {
            players,
            actions,
            thetas,
            types,
            prior,
            payoffs,
        };
        bg.validate()?;
        Ok(bg)
    }

    /// Builds the dense prior from sparse `(θ, type profile, probability)`
    /// entries; unlisted combinations get probability zero.
    pub fn from_prior_entries(
        players: Vec<String>,
        actions: Vec<Vec<String>>,
        thetas: Vec<String>,
        types: Vec<Vec<String>>,
        entries: Vec<(usize, Vec<usize>, Rational)>,
        payoffs: Vec<Game>,
    ) -> Result<Self> {
        if types.len() != players.len() {
            return Err(Error::DimensionMismatch {
                what: "type lists".into(),
                expected: players.len(),
                found: types.len(),
            });
        }
        let shape: Vec<usize> = types.iter().map(Vec::len).collect();
        let per_theta: usize = shape.iter().product();
        let mut prior = vec![Rational::zero(); thetas.len() * per_theta];
        let mut seen = BTreeSet::new();
        for (theta, profile, p) in entries {
            if theta >= thetas.len() {
                return Err(Error::IndexOutOfRange {
                    player: 0,
                    index: theta,
                    len: thetas.len(),
                });
            }
            let idx = type_offset(&shape, &profile)?;
            if !seen.insert((theta, idx)) {
                return Err(Error::InvalidProbability(format!(
                    "prior entry for state {} listed twice",
                    thetas[theta]
                )));
            }
            prior[theta * per_theta + idx] = p;
        }
        Self::new(players, actions, thetas, types, prior, payoffs)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.players.len();
        if n < 2 {
            return Err(Error::BadDimension(format!("a game needs at least two players, got {n}")));
        }
        if self.thetas.is_empty() {
            return Err(Error::BadDimension("state list is empty".into()));
        }
        if let Some(l) = first_duplicate(&self.thetas) {
            return Err(Error::BadDimension(format!("duplicate state label {l:?}")));
        }
        if self.types.len() != n {
            return Err(Error::DimensionMismatch {
                what: "type lists".into(),
                expected: n,
                found: self.types.len(),
            });
        }
        for (player, t) in self.types.iter().enumerate() {
            if t.is_empty() {
                return Err(Error::BadDimension(format!("player {} has no types", self.players[player])));
            }
            if let Some(l) = first_duplicate(t) {
                return Err(Error::DuplicateLabel {
                    player,
                    label: l.clone(),
                });
            }
        }
        let expected = self.thetas.len() * self.type_shape().iter().product::<usize>();
        if self.prior.len() != expected {
            return Err(Error::DimensionMismatch {
                what: "prior".into(),
                expected,
                found: self.prior.len(),
            });
        }
        if let Some(p) = self.prior.iter().find(|p| p.is_negative()) {
            return Err(Error::InvalidProbability(format!("negative prior entry {p}")));
        }
        let total: Rational = self.prior.iter().sum();
        if total != Rational::one() {
            return Err(Error::InvalidProbability(format!("prior sums to {total}, not 1")));
        }
        if self.payoffs.len() != self.thetas.len() {
            return Err(Error::DimensionMismatch {
                what: "payoff tables".into(),
                expected: self.thetas.len(),
                found: self.payoffs.len(),
            });
        }
        for g in &self.payoffs {
            if g.players() != self.players.as_slice() || g.all_actions() != self.actions.as_slice() {
                return Err(Error::BadDimension(
                    "every state's payoff table must share the players and actions".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn num_players(&self) -> usize {
        self.players.len()
    }

    pub fn players(&self) -> &[String] {
        &self.players
    }

    pub fn actions(&self) -> &[Vec<String>] {
        &self.actions
    }

    pub fn thetas(&self) -> &[String] {
        &self.thetas
    }

    pub fn types(&self) -> &[Vec<String>] {
        &self.types
    }

    pub fn type_shape(&self) -> Vec<usize> {
        self.types.iter().map(Vec::len).collect()
    }

    pub fn state_game(&self, theta: usize) -> &Game {
        &self.payoffs[theta]
    }

    pub fn state_games(&self) -> &[Game] {
        &self.payoffs
    }

    pub fn prior(&self, theta: usize, types: &[usize]) -> Result<&Rational> {
        let idx = type_offset(&self.type_shape(), types)?;
        let per_theta: usize = self.type_shape().iter().product();
        self.prior
            .get(theta * per_theta + idx)
            .ok_or(Error::IndexOutOfRange {
                player: 0,
                index: theta,
                len: self.thetas.len(),
            })
    }

    /// Positive prior entries as `(θ, type profile, probability)`.
    pub fn support(&self) -> Vec<(usize, Vec<usize>, Rational)> {
        let shape = self.type_shape();
        let per_theta: usize = shape.iter().product();
        let mut out = Vec::new();
        for theta in 0..self.thetas.len() {
            for (k, t) in Profiles::new(&shape).enumerate() {
                let p = &self.prior[theta * per_theta + k];
                if p.is_positive() {
                    out.push((theta, t, p.clone()));
                }
            }
        }
        out
    }

    pub fn type_marginal(&self, player: usize, ty: usize) -> Rational {
        self.support()
            .into_iter()
            .filter(|(_, t, _)| t[player] == ty)
            .map(|(_, _, p)| p)
            .sum()
    }

    fn check_type(&self, player: usize, ty: usize) -> Result<Rational> {
        if player >= self.num_players() {
            return Err(Error::IndexOutOfRange {
                player,
                index: player,
                len: self.num_players(),
            });
        }
        if ty >= self.types[player].len() {
            return Err(Error::IndexOutOfRange {
                player,
                index: ty,
                len: self.types[player].len(),
            });
        }
        let m = self.type_marginal(player, ty);
        if m.is_zero() {
            return Err(Error::ZeroProbabilityType {
                player,
                type_index: ty,
            });
        }
        Ok(m)
    }

    fn check_all_types(&self) -> Result<()> {
        for (i, t) in self.types.iter().enumerate() {
            for k in 0..t.len() {
                self.check_type(i, k)?;
            }
        }
        Ok(())
    }
}

fn type_offset(shape: &[usize], profile: &[usize]) -> Result<usize> {
    if profile.len() != shape.len() {
        return Err(Error::DimensionMismatch {
            what: "type profile".into(),
            expected: shape.len(),
            found: profile.len(),
        });
    }
    let mut idx = 0;
    for (player, (&t, &n)) in profile.iter().zip(shape).enumerate() {
        if t >= n {
            return Err(Error::IndexOutOfRange {
                player,
                index: t,
                len: n,
            });
        }
        idx = idx * n + t;
    }
    Ok(idx)
}

fn without(profile: &[usize], player: usize) -> Vec<usize> {
    profile
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != player)
        .map(|(_, &t)| t)
        .collect()
}

/// The posterior of one type over states and opponent type profiles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InterimBelief {
    pub player: usize,
    pub type_index: usize,
    /// `(θ, opponents' types in player order) -> probability`, positive
    /// entries only.
    pub distribution: BTreeMap<(usize, Vec<usize>), Rational>,
}

pub fn conditional_belief(bg: &BayesianGame, player: usize, ty: usize) -> Result<InterimBelief> {
    let marginal = bg.check_type(player, ty)?;
    let mut distribution = BTreeMap::new();
    for (theta, t, p) in bg.support() {
        if t[player] == ty {
            *distribution
                .entry((theta, without(&t, player)))
                .or_insert_with(Rational::zero) += &p / &marginal;
        }
    }
    Ok(InterimBelief {
        player,
        type_index: ty,
        distribution,
    })
}

/// Marginal of the interim belief on the state, indexed like `thetas`.
pub fn first_order_belief(bg: &BayesianGame, player: usize, ty: usize) -> Result<Vec<Rational>> {
    let belief = conditional_belief(bg, player, ty)?;
    let mut h = vec![Rational::zero(); bg.thetas.len()];
    for ((theta, _), p) in belief.distribution {
        h[theta] += p;
    }
    Ok(h)
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct SecondOrderEntry {
    pub theta: usize,
    /// First-order beliefs of each opponent, in player order.
    pub class: Vec<Vec<Rational>>,
    pub mass: Rational,
}

/// Belief over states jointly with the opponents' first-order beliefs.
/// Opponent types holding identical first-order beliefs are merged.
pub fn second_order_belief(bg: &BayesianGame, player: usize, ty: usize) -> Result<Vec<SecondOrderEntry>> {
    let belief = conditional_belief(bg, player, ty)?;
    let mut grouped: BTreeMap<(usize, Vec<Vec<Rational>>), Rational> = BTreeMap::new();
    for ((theta, others), p) in belief.distribution {
        let opponents = (0..bg.num_players()).filter(|&j| j != player);
        let class = opponents
            .zip(&others)
            .map(|(j, &tj)| first_order_belief(bg, j, tj))
            .collect::<Result<Vec<_>>>()?;
        *grouped.entry((theta, class)).or_insert_with(Rational::zero) += p;
    }
    Ok(grouped
        .into_iter()
        .map(|((theta, class), mass)| SecondOrderEntry { theta, class, mass })
        .collect())
}

/// Type-contingent strategies of one player: one action per type, first
/// type most significant. Returns the strategies and their labels.
fn contingent_strategies(bg: &BayesianGame, player: usize) -> (Vec<Vec<usize>>, Vec<String>) {
    let shape = vec![bg.actions[player].len(); bg.types[player].len()];
    let strategies: Vec<Vec<usize>> = Profiles::new(&shape).collect();
    let label = |sep: &str, s: &[usize]| {
        s.iter()
            .map(|&a| bg.actions[player][a].as_str())
            .collect::<Vec<_>>()
            .join(sep)
    };
    let plain: Vec<String> = strategies.iter().map(|s| label("", s)).collect();
    let unique = plain.iter().collect::<BTreeSet<_>>().len() == plain.len();
    let labels = if unique {
        plain
    } else {
        strategies.iter().map(|s| label(".", s)).collect()
    };
    (strategies, labels)
}

fn check_size(sizes: impl IntoIterator<Item = usize>, limit: u128) -> Result<()> {
    let mut total: u128 = 1;
    for s in sizes {
        total = total.saturating_mul(s as u128);
    }
    if total > limit {
        return Err(Error::SizeLimit { size: total, limit });
    }
    Ok(())
}

pub fn ex_ante_game(bg: &BayesianGame) -> Result<Game> {
    ex_ante_game_with_limit(bg, DEFAULT_PROFILE_LIMIT)
}

/// Strategic form over type-contingent strategies with prior-expected
/// payoffs.
pub fn ex_ante_game_with_limit(bg: &BayesianGame, limit: u128) -> Result<Game> {
    let n = bg.num_players();
    let sizes = (0..n).map(|i| {
        (bg.actions[i].len() as u128)
            .checked_pow(bg.types[i].len() as u32)
            .map_or(usize::MAX, |v| usize::try_from(v).unwrap_or(usize::MAX))
    });
    check_size(sizes, limit)?;
    let (strategies, labels): (Vec<_>, Vec<_>) = (0..n).map(|i| contingent_strategies(bg, i)).unzip();
    let support = bg.support();
    Game::from_fn(bg.players.clone(), labels, |profile| {
        let mut u = vec![Rational::zero(); n];
        for (theta, t, p) in &support {
            let actions: Vec<usize> = (0..n).map(|i| strategies[i][profile[i]][t[i]]).collect();
            for (ui, x) in u.iter_mut().zip(bg.payoffs[*theta].payoff(&actions).expect("in range")) {
                *ui += &(x * p);
            }
        }
        u
    })
}

/// Player-type pairs `(i, t_i)` in player order, then type order.
fn player_types(bg: &BayesianGame) -> Vec<(usize, usize)> {
    (0..bg.num_players())
        .flat_map(|i| (0..bg.types[i].len()).map(move |t| (i, t)))
        .collect()
}

/// Player-type slots, their names and their action lists.
type Frame = (Vec<(usize, usize)>, Vec<String>, Vec<Vec<String>>);

fn player_type_frame(bg: &BayesianGame, limit: u128) -> Result<Frame> {
    bg.check_all_types()?;
    let pts = player_types(bg);
    check_size(pts.iter().map(|&(i, _)| bg.actions[i].len()), limit)?;
    let names = pts
        .iter()
        .map(|&(i, t)| format!("{}:{}", bg.players[i], bg.types[i][t]))
        .collect();
    let actions = pts.iter().map(|&(i, _)| bg.actions[i].clone()).collect();
    Ok((pts, names, actions))
}

pub fn interim_game(bg: &BayesianGame) -> Result<Game> {
    interim_game_with_limit(bg, DEFAULT_PROFILE_LIMIT)
}

/// Game among player-types: `(i, t_i)` picks from `A_i` and receives the
/// expectation of `u_i` under its interim belief, where each opponent `j`
/// plays the action chosen by its realized type.
pub fn interim_game_with_limit(bg: &BayesianGame, limit: u128) -> Result<Game> {
    let (pts, names, actions) = player_type_frame(bg, limit)?;
    let n = bg.num_players();
    let slot = |i: usize, t: usize| pts.iter().position(|&x| x == (i, t)).expect("known");
    let beliefs = pts
        .iter()
        .map(|&(i, t)| conditional_belief(bg, i, t))
        .collect::<Result<Vec<_>>>()?;
    Game::from_fn(names, actions, |profile| {
        pts.iter()
            .zip(&beliefs)
            .map(|(&(i, ti), belief)| {
                let mut total = Rational::zero();
                for ((theta, others), p) in &belief.distribution {
                    let mut types = others.clone();
                    types.insert(i, ti);
                    let a: Vec<usize> = (0..n).map(|j| profile[slot(j, types[j])]).collect();
                    total += &(bg.payoffs[*theta].utility(i, &a) * p);
                }
                total
            })
            .collect()
    })
}

/// Expected state game conditional on a joint type profile.
pub fn conditioned_game(bg: &BayesianGame, types: &[usize]) -> Result<Game> {
    let posterior = state_posterior(bg, types)?;
    Game::from_fn(bg.players.clone(), bg.actions.clone(), |profile| {
        let mut u = vec![Rational::zero(); bg.num_players()];
        for (theta, w) in posterior.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            for (ui, x) in u.iter_mut().zip(bg.payoffs[theta].payoff(profile).expect("in range")) {
                *ui += &(x * w);
            }
        }
        u
    })
}

/// `π(θ | t)` for a joint type profile of positive probability.
fn state_posterior(bg: &BayesianGame, types: &[usize]) -> Result<Vec<Rational>> {
    let weights = (0..bg.thetas.len())
        .map(|theta| bg.prior(theta, types).cloned())
        .collect::<Result<Vec<_>>>()?;
    let total: Rational = weights.iter().sum();
    if total.is_zero() {
        return Err(Error::InvalidProbability(format!(
            "type profile {types:?} has zero prior probability"
        )));
    }
    Ok(weights.into_iter().map(|w| &w / &total).collect())
}

pub fn interim_correlated_game(bg: &BayesianGame) -> Result<Game> {
    interim_correlated_game_with_limit(bg, DEFAULT_PROFILE_LIMIT)
}

/// Game among player-types built from the state-marginalized games: for each
/// joint type profile the payoffs are first averaged over θ given that
/// profile, then each type weighs the profiles by its belief over opponent
/// types. With one type per player this is the expected game over θ.
pub fn interim_correlated_game_with_limit(bg: &BayesianGame, limit: u128) -> Result<Game> {
    let (pts, names, actions) = player_type_frame(bg, limit)?;
    let n = bg.num_players();
    let slot = |i: usize, t: usize| pts.iter().position(|&x| x == (i, t)).expect("known");

    let mut conditioned: BTreeMap<Vec<usize>, Game> = BTreeMap::new();
    let mut opponent_beliefs: Vec<BTreeMap<Vec<usize>, Rational>> = Vec::with_capacity(pts.len());
    for &(i, ti) in &pts {
        let mut by_types: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
        for ((_, others), p) in conditional_belief(bg, i, ti)?.distribution {
            let mut t = others;
            t.insert(i, ti);
            *by_types.entry(t).or_insert_with(Rational::zero) += p;
        }
        for t in by_types.keys() {
            if !conditioned.contains_key(t) {
                conditioned.insert(t.clone(), conditioned_game(bg, t)?);
            }
        }
        opponent_beliefs.push(by_types);
    }

    Game::from_fn(names, actions, |profile| {
        pts.iter()
            .zip(&opponent_beliefs)
            .map(|(&(i, _), belief)| {
                let mut total = Rational::zero();
                for (t, p) in belief {
                    let a: Vec<usize> = (0..n).map(|j| profile[slot(j, t[j])]).collect();
                    total += &(conditioned[t].utility(i, &a) * p);
                }
                total
            })
            .collect()
    })
}
