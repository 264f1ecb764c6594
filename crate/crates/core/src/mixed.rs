//! Mixed periodic strategies and mixed Nash equilibria of bimatrix games.
//!
//! A Nash mixture of player `i` makes the *opponent* indifferent among the
//! opponent's supported actions. A periodic mixture of player `i` does the
//! reverse: it makes `i`'s own expected payoff independent of which pure
//! action the opponent picks.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{check_distribution, Game, MixedProfile};
use crate::linalg;
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::rational::Rational;

/// Largest action count accepted by [`nash_support_enumeration`].
pub const SUPPORT_ENUMERATION_LIMIT: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EquilibriumKind {
    Nash,
    Periodic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquilibriumReport {
    pub profile: MixedProfile,
    pub kind: EquilibriumKind,
    pub utilities: Vec<Rational>,
    pub support: Vec<Vec<usize>>,
}

impl EquilibriumReport {
    fn from_profile(game: &Game, profile: MixedProfile, kind: EquilibriumKind) -> Result<Self> {
        let utilities = game.expected_utility(&profile)?;
        let support = profile.support();
        Ok(EquilibriumReport {
            profile,
            kind,
            utilities,
            support,
        })
    }

    pub fn is_pure(&self) -> bool {
        self.support.iter().all(|s| s.len() == 1)
    }
}

/// A periodic mixture for one player.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicMixture {
    pub player: usize,
    /// Lexicographically smallest point of the feasible polytope.
    pub strategy: Vec<Rational>,
    /// The player's payoff, identical against every opponent action.
    pub value: Rational,
    /// Affine dimension of the set of periodic mixtures (0 when unique).
    pub dimension: usize,
}

pub(crate) fn require_two_players(game: &Game) -> Result<()> {
    if game.num_players() != 2 {
        return Err(Error::NotTwoPlayer {
            players: game.num_players(),
        });
    }
    Ok(())
}

/// `m[own][opp]`: utility of `player` when playing `own` against `opp`.
pub(crate) fn own_matrix(game: &Game, player: usize) -> Vec<Vec<Rational>> {
    let other = 1 - player;
    (0..game.num_actions(player))
        .map(|own| {
            (0..game.num_actions(other))
                .map(|opp| {
                    let mut p = [0usize; 2];
                    p[player] = own;
                    p[other] = opp;
                    game.utility(player, &p).clone()
                })
                .collect()
        })
        .collect()
}

/// Payoff of `player` against each opponent pure action when mixing with
/// `strategy`.
fn payoffs_against_each(m: &[Vec<Rational>], strategy: &[Rational]) -> Vec<Rational> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols)
        .map(|opp| m.iter().zip(strategy).map(|(row, p)| &row[opp] * p).sum())
        .collect()
}

fn check_player(game: &Game, player: usize) -> Result<()> {
    if player >= 2 {
        return Err(Error::DimensionMismatch {
            what: "player index".into(),
            expected: 2,
            found: player,
        });
    }
    require_two_players(game)
}

/// Equal-payoff system for a periodic mixture: `sum p = 1` and the payoff
/// against every opponent action equals the payoff against the first.
fn periodic_equalities(m: &[Vec<Rational>]) -> Vec<(Vec<Rational>, Rational)> {
    let k = m.len();
    let cols = m[0].len();
    let mut eqs = vec![(vec![Rational::one(); k], Rational::one())];
    for opp in 1..cols {
        let row = (0..k).map(|own| &m[own][opp] - &m[own][0]).collect();
        eqs.push((row, Rational::zero()));
    }
    eqs
}

pub fn periodic_mixed(game: &Game, player: usize) -> Result<PeriodicMixture> {
    check_player(game, player)?;
    let m = own_matrix(game, player);
    let k = m.len();
    let eqs = periodic_equalities(&m);
    let base = || {
        let mut lp = LinearProgram::new(k);
        for (row, rhs) in &eqs {
            lp.constrain(row.clone(), Relation::Eq, rhs.clone());
        }
        lp
    };

    let mut strategy: Vec<Rational> = Vec::with_capacity(k);
    for idx in 0..k {
        let mut lp = base();
        for (j, v) in strategy.iter().enumerate() {
            lp.constrain(unit(k, j), Relation::Eq, v.clone());
        }
        lp.minimize(unit(k, idx));
        match lp.solve() {
            LpOutcome::Optimal { x, .. } => strategy.push(x[idx].clone()),
            LpOutcome::Infeasible => return Err(Error::Infeasible { player }),
            LpOutcome::Unbounded => unreachable!("simplex is bounded"),
        }
    }

    let mut hull: Vec<Vec<Rational>> = eqs.iter().map(|(r, _)| r.clone()).collect();
    for idx in 0..k {
        let mut lp = base();
        lp.maximize(unit(k, idx));
        let (_, max) = lp.solve().optimal().expect("feasible and bounded");
        if max.is_zero() {
            hull.push(unit(k, idx));
        }
    }
    let dimension = k - linalg::rank(&hull);

    let value = payoffs_against_each(&m, &strategy)
        .into_iter()
        .next()
        .expect("opponent has an action");
    Ok(PeriodicMixture {
        player,
        strategy,
        value,
        dimension,
    })
}

/// Periodic mixtures of both players combined into one profile.
pub fn periodic_profile(game: &Game) -> Result<EquilibriumReport> {
    let a = periodic_mixed(game, 0)?;
    let b = periodic_mixed(game, 1)?;
    let profile = MixedProfile::new(vec![a.strategy, b.strategy])?;
    EquilibriumReport::from_profile(game, profile, EquilibriumKind::Periodic)
}

/// Spread between the best and worst payoff `player` can receive against
/// the opponent's pure actions while mixing with `strategy`. Zero certifies a
/// periodic mixture.
pub fn invariance_check(game: &Game, player: usize, strategy: &[Rational]) -> Result<Rational> {
    check_player(game, player)?;
    if strategy.len() != game.num_actions(player) {
        return Err(Error::DimensionMismatch {
            what: "mixed strategy".into(),
            expected: game.num_actions(player),
            found: strategy.len(),
        });
    }
    check_distribution(strategy)?;
    let values = payoffs_against_each(&own_matrix(game, player), strategy);
    let max = values.iter().max().expect("nonempty");
    let min = values.iter().min().expect("nonempty");
    Ok(max - min)
}

fn unit(k: usize, idx: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); k];
    v[idx] = Rational::one();
    v
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (1u32..(1 << n)).map(move |mask| (0..n).filter(|&k| mask & (1 << k) != 0).collect())
}

/// Indices of `values` attaining the maximum.
fn argmax_set(values: &[Rational]) -> Vec<usize> {
    let max = values.iter().max().expect("nonempty");
    (0..values.len()).filter(|&k| &values[k] == max).collect()
}

/// Mixtures of the "mixer" that are the unique solution of an indifference
/// system for some (best-response set, support) pair.
///
/// `resp[r][s]` is the responder's payoff for response `r` against the
/// mixer's action `s`. A mixture qualifies when its support is exactly `S`,
/// the responder's best responses are exactly `R`, and the equalities
/// "all of `R` earn the same, the mixture sums to one" pin it down uniquely.
/// These are the vertices of the mixer's best-response polytope.
fn extreme_mixtures(resp: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n_resp = resp.len();
    let n_mix = resp[0].len();
    let mut out = Vec::new();
    for support in subsets(n_mix) {
        for responses in subsets(n_resp) {
            let k = support.len();
            let mut a = Vec::with_capacity(responses.len() + 1);
            let mut b = Vec::with_capacity(responses.len() + 1);
            for &r in &responses {
                let mut row: Vec<Rational> = support.iter().map(|&s| resp[r][s].clone()).collect();
                row.push(-Rational::one());
                a.push(row);
                b.push(Rational::zero());
            }
            let mut sum_row = vec![Rational::one(); k];
            sum_row.push(Rational::zero());
            a.push(sum_row);
            b.push(Rational::one());
            let Some(sol) = linalg::solve_unique(&a, &b) else {
                continue;
            };
            if sol[..k].iter().any(|x| !x.is_positive()) {
                continue;
            }
            let mut mix = vec![Rational::zero(); n_mix];
            for (&s, x) in support.iter().zip(&sol) {
                mix[s] = x.clone();
            }
            let earned: Vec<Rational> = resp
                .iter()
                .map(|row| row.iter().zip(&mix).map(|(u, x)| u * x).sum())
                .collect();
            if argmax_set(&earned) == responses {
                out.push(mix);
            }
        }
    }
    out
}

/// All extreme Nash equilibria (every equilibrium of a nondegenerate game),
/// pure ones included, sorted by profile.
pub fn nash_support_enumeration(game: &Game) -> Result<Vec<EquilibriumReport>> {
    require_two_players(game)?;
    let (rows, cols) = (game.num_actions(0), game.num_actions(1));
    if rows.max(cols) > SUPPORT_ENUMERATION_LIMIT {
        return Err(Error::SizeLimit {
            size: rows.max(cols) as u128,
            limit: SUPPORT_ENUMERATION_LIMIT as u128,
        });
    }
    let a = own_matrix(game, 0); // a[row][col]
    let b = own_matrix(game, 1); // b[col][row]

    // Row mixtures are judged by the column player's payoffs and vice versa.
    let row_mixes = extreme_mixtures(&b);
    let col_mixes = extreme_mixtures(&a);

    let mut reports = Vec::new();
    for p in &row_mixes {
        let col_best = argmax_set(&payoffs_against_each(&transpose(&b), p));
        for q in &col_mixes {
            let row_best = argmax_set(&payoffs_against_each(&transpose(&a), q));
            let p_ok = (0..rows).all(|r| p[r].is_zero() || row_best.contains(&r));
            let q_ok = (0..cols).all(|c| q[c].is_zero() || col_best.contains(&c));
            if p_ok && q_ok {
                let profile = MixedProfile::new(vec![p.clone(), q.clone()])?;
                reports.push(EquilibriumReport::from_profile(game, profile, EquilibriumKind::Nash)?);
            }
        }
    }
    reports.sort_by(|x, y| x.profile.distributions().cmp(y.profile.distributions()));
    reports.dedup_by(|x, y| x.profile == y.profile);
    Ok(reports)
}

/// Transposes `m[own][opp]` into `t[opp][own]` so that mixing over the
/// opponent's actions is a row combination.
fn transpose(m: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let cols = m[0].len();
    (0..cols)
        .map(|c| m.iter().map(|row| row[c].clone()).collect())
        .collect()
}
