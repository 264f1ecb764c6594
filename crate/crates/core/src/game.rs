//! Finite N-player strategic-form games with exact payoffs.
//!
//! Payoffs are stored as a dense tensor in row-major player order: the last
//! player's action index varies fastest. Every profile carries one utility per
//! player.

use std::collections::HashSet;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// One action index per player, in player order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ActionProfile(Vec<usize>);

impl ActionProfile {
    pub fn new(indices: Vec<usize>) -> Self {
        ActionProfile(indices)
    }

    pub fn into_inner(self) -> Vec<usize> {
        self.0
    }
}

impl Deref for ActionProfile {
    type Target = [usize];
    fn deref(&self) -> &[usize] {
        &self.0
    }
}

impl From<Vec<usize>> for ActionProfile {
    fn from(v: Vec<usize>) -> Self {
        ActionProfile(v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Game {
    players: Vec<String>,
    actions: Vec<Vec<String>>,
    payoffs: Vec<Vec<Rational>>,
    strides: Vec<usize>,
}

/// Checks the structural invariants of a game description.
///
/// `payoffs` is the flat row-major tensor; a short tensor reports the first
/// profile that has no entry.
pub fn validate_game(
    players: &[String],
    actions: &[Vec<String>],
    payoffs: &[Vec<Rational>],
) -> Result<()> {
    if players.len() < 2 {
        return Err(Error::BadDimension(format!(
            "a game needs at least 2 players, got {}",
            players.len()
        )));
    }
    if actions.len() != players.len() {
        return Err(Error::BadDimension(format!(
            "{} players but {} action lists",
            players.len(),
            actions.len()
        )));
    }
    let mut seen = HashSet::new();
    for (i, name) in players.iter().enumerate() {
        if !seen.insert(name.as_str()) {
            return Err(Error::DuplicateLabel {
                player: i,
                label: name.clone(),
            });
        }
    }
    for (i, labels) in actions.iter().enumerate() {
        if labels.is_empty() {
            return Err(Error::BadDimension(format!("player {i} has no actions")));
        }
        let mut seen = HashSet::new();
        for label in labels {
            if !seen.insert(label.as_str()) {
                return Err(Error::DuplicateLabel {
                    player: i,
                    label: label.clone(),
                });
            }
        }
    }
    let shape: Vec<usize> = actions.iter().map(Vec::len).collect();
    let total: usize = shape.iter().product();
    if payoffs.len() < total {
        let missing = Profiles::new(&shape)
            .nth(payoffs.len())
            .expect("index below profile count");
        return Err(Error::MissingProfile { profile: missing });
    }
    if payoffs.len() > total {
        return Err(Error::BadDimension(format!(
            "{} payoff entries for {} profiles",
            payoffs.len(),
            total
        )));
    }
    for (k, entry) in payoffs.iter().enumerate() {
        if entry.len() != players.len() {
            let profile = Profiles::new(&shape).nth(k).expect("k < total");
            return Err(Error::BadDimension(format!(
                "profile {profile:?} has {} utilities, expected {}",
                entry.len(),
                players.len()
            )));
        }
    }
    Ok(())
}

impl Game {
    pub fn new(
        players: Vec<String>,
        actions: Vec<Vec<String>>,
        payoffs: Vec<Vec<Rational>>,
    ) -> Result<Self> {
        validate_game(&players, &actions, &payoffs)?;
        let strides = strides(&actions.iter().map(Vec::len).collect::<Vec<_>>());
        Ok(Game {
            players,
            actions,
            payoffs,
            strides,
        })
    }

    /// Builds the tensor by evaluating `f` at every profile.
    pub fn from_fn<F>(players: Vec<String>, actions: Vec<Vec<String>>, mut f: F) -> Result<Self>
    where
        F: FnMut(&[usize]) -> Vec<Rational>,
    {
        let shape: Vec<usize> = actions.iter().map(Vec::len).collect();
        let payoffs = Profiles::new(&shape).map(|p| f(&p)).collect();
        Game::new(players, actions, payoffs)
    }

    /// Builds a game from an explicit profile-to-utilities map. Every profile
    /// must appear exactly once.
    pub fn from_entries<I>(players: Vec<String>, actions: Vec<Vec<String>>, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, Vec<Rational>)>,
    {
        let shape: Vec<usize> = actions.iter().map(Vec::len).collect();
        if shape.len() != players.len() {
            return Err(Error::BadDimension(format!(
                "{} players but {} action lists",
                players.len(),
                shape.len()
            )));
        }
        let st = strides(&shape);
        let mut slots: Vec<Option<Vec<Rational>>> = vec![None; shape.iter().product()];
        for (profile, utilities) in entries {
            if profile.len() != shape.len() {
                return Err(Error::DimensionMismatch {
                    what: "profile length".into(),
                    expected: shape.len(),
                    found: profile.len(),
                });
            }
            for (player, (&a, &n)) in profile.iter().zip(&shape).enumerate() {
                if a >= n {
                    return Err(Error::IndexOutOfRange {
                        player,
                        index: a,
                        len: n,
                    });
                }
            }
            let k: usize = profile.iter().zip(&st).map(|(a, s)| a * s).sum();
            if slots[k].is_some() {
                return Err(Error::BadDimension(format!(
                    "profile {profile:?} given twice"
                )));
            }
            slots[k] = Some(utilities);
        }
        let mut payoffs = Vec::with_capacity(slots.len());
        for (slot, profile) in slots.into_iter().zip(Profiles::new(&shape)) {
            match slot {
                Some(u) => payoffs.push(u),
                None => return Err(Error::MissingProfile { profile }),
            }
        }
        Game::new(players, actions, payoffs)
    }

    /// Two-player game from a table of `(row utility, column utility)` pairs.
    pub fn bimatrix<S: ToString>(
        row_labels: &[S],
        col_labels: &[S],
        table: Vec<Vec<(Rational, Rational)>>,
    ) -> Result<Self> {
        let rows = row_labels.len();
        let cols = col_labels.len();
        if table.len() != rows {
            return Err(Error::DimensionMismatch {
                what: "bimatrix rows".into(),
                expected: rows,
                found: table.len(),
            });
        }
        let mut payoffs = Vec::with_capacity(rows * cols);
        for row in table {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    what: "bimatrix columns".into(),
                    expected: cols,
                    found: row.len(),
                });
            }
            payoffs.extend(row.into_iter().map(|(a, b)| vec![a, b]));
        }
        Game::new(
            vec!["A".into(), "B".into()],
            vec![
                row_labels.iter().map(ToString::to_string).collect(),
                col_labels.iter().map(ToString::to_string).collect(),
            ],
            payoffs,
        )
    }

    /// Integer bimatrix shorthand; labels default to `1, 2, ...`.
    pub fn bimatrix_int(table: &[Vec<(i64, i64)>]) -> Result<Self> {
        let rows = table.len();
        let cols = table.first().map_or(0, Vec::len);
        let rl: Vec<String> = (1..=rows).map(|k| k.to_string()).collect();
        let cl: Vec<String> = (1..=cols).map(|k| k.to_string()).collect();
        let t = table
            .iter()
            .map(|r| r.iter().map(|&(a, b)| (Rational::from(a), Rational::from(b))).collect())
            .collect();
        Game::bimatrix(&rl, &cl, t)
    }

    pub fn validate(&self) -> Result<()> {
        validate_game(&self.players, &self.actions, &self.payoffs)
    }

    pub fn num_players(&self) -> usize {
        self.players.len()
    }

    pub fn players(&self) -> &[String] {
        &self.players
    }

    pub fn player_name(&self, player: usize) -> &str {
        &self.players[player]
    }

    pub fn actions(&self, player: usize) -> &[String] {
        &self.actions[player]
    }

    pub fn all_actions(&self) -> &[Vec<String>] {
        &self.actions
    }

    pub fn action_label(&self, player: usize, action: usize) -> &str {
        &self.actions[player][action]
    }

    pub fn num_actions(&self, player: usize) -> usize {
        self.actions[player].len()
    }

    pub fn shape(&self) -> Vec<usize> {
        self.actions.iter().map(Vec::len).collect()
    }

    pub fn num_profiles(&self) -> usize {
        self.payoffs.len()
    }

    pub fn find_player(&self, name: &str) -> Result<usize> {
        self.players
            .iter()
            .position(|p| p == name)
            .ok_or_else(|| Error::UnknownLabel {
                kind: "player",
                name: name.to_string(),
            })
    }

    pub fn find_action(&self, player: usize, label: &str) -> Result<usize> {
        self.actions[player]
            .iter()
            .position(|a| a == label)
            .ok_or_else(|| Error::UnknownLabel {
                kind: "action",
                name: label.to_string(),
            })
    }

    /// All profiles in storage order.
    pub fn profiles(&self) -> Profiles {
        Profiles::new(&self.shape())
    }

    /// Profiles where `player` is fixed to `action`, in lexicographic order of
    /// the remaining players' indices.
    pub fn profiles_with(&self, player: usize, action: usize) -> impl Iterator<Item = Vec<usize>> {
        let mut shape = self.shape();
        shape[player] = 1;
        Profiles::new(&shape).map(move |mut p| {
            p[player] = action;
            p
        })
    }

    fn check_profile(&self, profile: &[usize]) -> Result<()> {
        if profile.len() != self.num_players() {
            return Err(Error::DimensionMismatch {
                what: "profile length".into(),
                expected: self.num_players(),
                found: profile.len(),
            });
        }
        for (player, &a) in profile.iter().enumerate() {
            let len = self.num_actions(player);
            if a >= len {
                return Err(Error::IndexOutOfRange {
                    player,
                    index: a,
                    len,
                });
            }
        }
        Ok(())
    }

    fn offset(&self, profile: &[usize]) -> usize {
        profile.iter().zip(&self.strides).map(|(a, s)| a * s).sum()
    }

    pub fn payoff(&self, profile: &[usize]) -> Result<&[Rational]> {
        self.check_profile(profile)?;
        Ok(&self.payoffs[self.offset(profile)])
    }

    /// Utility of one player; the profile must be in range.
    pub fn utility(&self, player: usize, profile: &[usize]) -> &Rational {
        &self.payoffs[self.offset(profile)][player]
    }

    /// Expected utility of every player under independent mixing.
    pub fn expected_utility(&self, mixed: &MixedProfile) -> Result<Vec<Rational>> {
        mixed.check_against(self)?;
        let n = self.num_players();
        let mut total = vec![Rational::zero(); n];
        for (k, profile) in self.profiles().enumerate() {
            let mut weight = Rational::one();
            for (player, &a) in profile.iter().enumerate() {
                let p = &mixed.0[player][a];
                if p.is_zero() {
                    weight = Rational::zero();
                    break;
                }
                weight *= p;
            }
            if weight.is_zero() {
                continue;
            }
            for (t, u) in total.iter_mut().zip(&self.payoffs[k]) {
                *t += &weight * u;
            }
        }
        Ok(total)
    }

    /// Restriction to the listed actions of each player (kept in the given
    /// order).
    pub fn subgame(&self, keep: &[Vec<usize>]) -> Result<Game> {
        if keep.len() != self.num_players() {
            return Err(Error::DimensionMismatch {
                what: "subgame action sets".into(),
                expected: self.num_players(),
                found: keep.len(),
            });
        }
        for (player, set) in keep.iter().enumerate() {
            for &a in set {
                if a >= self.num_actions(player) {
                    return Err(Error::IndexOutOfRange {
                        player,
                        index: a,
                        len: self.num_actions(player),
                    });
                }
            }
        }
        let actions = keep
            .iter()
            .enumerate()
            .map(|(player, set)| set.iter().map(|&a| self.actions[player][a].clone()).collect())
            .collect();
        Game::from_fn(self.players.clone(), actions, |p| {
            let full: Vec<usize> = p.iter().enumerate().map(|(i, &a)| keep[i][a]).collect();
            self.payoffs[self.offset(&full)].clone()
        })
    }
}

fn strides(shape: &[usize]) -> Vec<usize> {
    let mut st = vec![1; shape.len()];
    for i in (0..shape.len().saturating_sub(1)).rev() {
        st[i] = st[i + 1] * shape[i + 1];
    }
    st
}

/// Odometer over all index vectors of a shape, last position fastest.
#[derive(Debug, Clone)]
pub struct Profiles {
    shape: Vec<usize>,
    next: Option<Vec<usize>>,
}

impl Profiles {
    pub fn new(shape: &[usize]) -> Self {
        let next = if shape.contains(&0) {
            None
        } else {
            Some(vec![0; shape.len()])
        };
        Profiles {
            shape: shape.to_vec(),
            next,
        }
    }
}

impl Iterator for Profiles {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut pos = succ.len();
        loop {
            if pos == 0 {
                break;
            }
            pos -= 1;
            succ[pos] += 1;
            if succ[pos] < self.shape[pos] {
                self.next = Some(succ);
                break;
            }
            succ[pos] = 0;
        }
        Some(current)
    }
}

/// Independent mixed strategies, one distribution per player.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedProfile(Vec<Vec<Rational>>);

/// Checks that `dist` is a probability vector (nonnegative, sums to one).
pub fn check_distribution(dist: &[Rational]) -> Result<()> {
    if dist.is_empty() {
        return Err(Error::InvalidProbability("empty distribution".into()));
    }
    if let Some(p) = dist.iter().find(|p| p.is_negative()) {
        return Err(Error::InvalidProbability(format!("negative entry {p}")));
    }
    let sum: Rational = dist.iter().sum();
    if sum != Rational::one() {
        return Err(Error::InvalidProbability(format!("entries sum to {sum}")));
    }
    Ok(())
}

impl MixedProfile {
    pub fn new(dists: Vec<Vec<Rational>>) -> Result<Self> {
        for d in &dists {
            check_distribution(d)?;
        }
        Ok(MixedProfile(dists))
    }

    /// All mass on the given pure profile.
    pub fn pure(game: &Game, profile: &[usize]) -> Result<Self> {
        game.check_profile(profile)?;
        let dists = profile
            .iter()
            .enumerate()
            .map(|(player, &a)| {
                let mut d = vec![Rational::zero(); game.num_actions(player)];
                d[a] = Rational::one();
                d
            })
            .collect();
        Ok(MixedProfile(dists))
    }

    pub fn player(&self, player: usize) -> &[Rational] {
        &self.0[player]
    }

    pub fn distributions(&self) -> &[Vec<Rational>] {
        &self.0
    }

    /// Indices with positive probability, per player.
    pub fn support(&self) -> Vec<Vec<usize>> {
        self.0
            .iter()
            .map(|d| (0..d.len()).filter(|&k| d[k].is_positive()).collect())
            .collect()
    }

    fn check_against(&self, game: &Game) -> Result<()> {
        if self.0.len() != game.num_players() {
            return Err(Error::DimensionMismatch {
                what: "mixed profile players".into(),
                expected: game.num_players(),
                found: self.0.len(),
            });
        }
        for (player, d) in self.0.iter().enumerate() {
            if d.len() != game.num_actions(player) {
                return Err(Error::DimensionMismatch {
                    what: format!("mixed strategy of player {player}"),
                    expected: game.num_actions(player),
                    found: d.len(),
                });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::q;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn intro_game_validates() {
        let g = fixtures::intro_game();
        assert!(g.validate().is_ok());
        assert_eq!(g.shape(), vec![2, 2]);
    }

    #[test]
    fn single_player_is_bad_dimension() {
        let err = Game::new(names(&["A"]), vec![names(&["x"])], vec![vec![q!(1)]]).unwrap_err();
        assert!(matches!(err, Error::BadDimension(_)));
    }

    #[test]
    fn short_tensor_names_missing_profile() {
        let payoffs = vec![vec![q!(1), q!(1)]; 3];
        let err = Game::new(
            names(&["A", "B"]),
            vec![names(&["1", "2"]), names(&["1", "2"])],
            payoffs,
        )
        .unwrap_err();
        assert_eq!(err, Error::MissingProfile { profile: vec![1, 1] });

        let entries = vec![
            (vec![0, 0], vec![q!(0), q!(0)]),
            (vec![1, 1], vec![q!(0), q!(0)]),
            (vec![1, 0], vec![q!(0), q!(0)]),
        ];
        let err = Game::from_entries(
            names(&["A", "B"]),
            vec![names(&["1", "2"]), names(&["1", "2"])],
            entries,
        )
        .unwrap_err();
        assert_eq!(err, Error::MissingProfile { profile: vec![0, 1] });
    }

    #[test]
    fn duplicate_labels_are_rejected() {
        let err = Game::new(
            names(&["A", "B"]),
            vec![names(&["x", "x"]), names(&["y"])],
            vec![vec![q!(0), q!(0)]; 2],
        )
        .unwrap_err();
        assert_eq!(
            err,
            Error::DuplicateLabel {
                player: 0,
                label: "x".into()
            }
        );
    }

    #[test]
    fn payoff_lookup_and_range_errors() {
        let bos = fixtures::battle_of_sexes();
        assert_eq!(bos.payoff(&[0, 0]).unwrap(), &[q!(2), q!(1)]);
        let pd = fixtures::prisoners_dilemma();
        assert_eq!(pd.payoff(&[0, 0]).unwrap(), &[q!(4), q!(4)]);
        assert_eq!(pd.payoff(&[0, 1]).unwrap(), &[q!(-1), q!(6)]);
        assert!(matches!(
            pd.payoff(&[2, 0]),
            Err(Error::IndexOutOfRange { player: 0, index: 2, len: 2 })
        ));
        assert!(matches!(pd.payoff(&[0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn expected_utility_intro_nash_point() {
        let g = fixtures::intro_game();
        let m = MixedProfile::new(vec![vec![q!(1 / 2), q!(1 / 2)], vec![q!(1 / 3), q!(2 / 3)]]).unwrap();
        assert_eq!(g.expected_utility(&m).unwrap(), vec![q!(2 / 3), q!(1 / 2)]);
    }

    #[test]
    fn battle_of_sexes_periodic_row_fixes_row_payoff() {
        let g = fixtures::battle_of_sexes();
        for k in 0..=12 {
            let q1 = Rational::frac(k, 12);
            let m = MixedProfile::new(vec![
                vec![q!(1 / 3), q!(2 / 3)],
                vec![q1.clone(), q!(1) - q1],
            ])
            .unwrap();
            assert_eq!(g.expected_utility(&m).unwrap()[0], q!(2 / 3));
        }
    }

    #[test]
    fn expected_utility_dimension_mismatch() {
        let g = fixtures::intro_game();
        let m = MixedProfile::new(vec![vec![q!(1)], vec![q!(1)]]).unwrap();
        assert!(matches!(g.expected_utility(&m), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn mixed_profile_rejects_bad_distributions() {
        assert!(MixedProfile::new(vec![vec![q!(1 / 2), q!(1 / 3)]]).is_err());
        assert!(MixedProfile::new(vec![vec![q!(3 / 2), q!(-1 / 2)]]).is_err());
    }

    #[test]
    fn pure_profiles_reproduce_payoffs_exhaustively() {
        let g = Game::from_fn(
            names(&["A", "B", "C"]),
            vec![names(&["a", "b"]), names(&["x", "y", "z"]), names(&["u", "v"])],
            |p| {
                (0..3)
                    .map(|i| Rational::from((p[0] * 7 + p[1] * 3 + p[2] * 5 + i * 11) as i64 % 9 - 4))
                    .collect()
            },
        )
        .unwrap();
        for p in g.profiles() {
            let m = MixedProfile::pure(&g, &p).unwrap();
            assert_eq!(g.expected_utility(&m).unwrap(), g.payoff(&p).unwrap());
        }
    }

    #[test]
    fn profiles_are_row_major() {
        let all: Vec<_> = Profiles::new(&[2, 3]).collect();
        assert_eq!(all.len(), 6);
        assert_eq!(all[1], vec![0, 1]);
        assert_eq!(all[3], vec![1, 0]);
        assert_eq!(Profiles::new(&[2, 0]).count(), 0);
    }

    #[test]
    fn subgame_keeps_selected_actions() {
        let g = fixtures::prisoners_dilemma();
        let s = g.subgame(&[vec![1], vec![0, 1]]).unwrap();
        assert_eq!(s.actions(0), &["A2".to_string()]);
        assert_eq!(s.payoff(&[0, 0]).unwrap(), &[q!(6), q!(-1)]);
    }
}
