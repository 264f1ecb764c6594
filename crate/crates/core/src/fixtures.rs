//! Small reference games used by tests, examples and the command line tool.

use crate::bayesian::BayesianGame;
use crate::game::Game;
use crate::rational::Rational;

fn labels(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|k| format!("{prefix}{k}")).collect()
}

fn two_player(
    players: [&str; 2],
    rows: Vec<String>,
    cols: Vec<String>,
    table: Vec<Vec<(Rational, Rational)>>,
) -> Game {
    let payoffs = table.into_iter().flatten().map(|(a, b)| vec![a, b]).collect();
    Game::new(
        players.iter().map(|p| p.to_string()).collect(),
        vec![rows, cols],
        payoffs,
    )
    .expect("fixture tables are well formed")
}

fn ints(table: &[&[(i64, i64)]]) -> Vec<Vec<(Rational, Rational)>> {
    table
        .iter()
        .map(|r| r.iter().map(|&(a, b)| (Rational::from(a), Rational::from(b))).collect())
        .collect()
}

/// 2x2 coordination game with unequal stakes; actions labelled `1`, `2`.
pub fn intro_game() -> Game {
    Game::bimatrix_int(&[vec![(2, 1), (0, 0)], vec![(0, 0), (1, 1)]]).expect("valid")
}

pub fn battle_of_sexes() -> Game {
    two_player(
        ["A", "B"],
        labels("a", 2),
        labels("b", 2),
        ints(&[&[(2, 1), (0, 0)], &[(0, 0), (1, 2)]]),
    )
}

/// Cooperation is `A1`/`B1`, defection `A2`/`B2`.
pub fn prisoners_dilemma() -> Game {
    two_player(
        ["A", "B"],
        labels("A", 2),
        labels("B", 2),
        ints(&[&[(4, 4), (-1, 6)], &[(6, -1), (0, 0)]]),
    )
}

/// 4x4 game whose only equilibrium is the pure profile `(a2, b2)`.
pub fn four_action_game() -> Game {
    let a = [[0, 2, 7, 0], [5, 7, 5, 0], [7, 2, 0, 0], [0, 0, 0, 10]];
    let b = [[7, 5, 0, 1], [2, 7, 2, 1], [0, 5, 7, 1], [0, -2, 0, -1]];
    let table = (0..4)
        .map(|r| (0..4).map(|c| (Rational::from(a[r][c]), Rational::from(b[r][c]))).collect())
        .collect();
    two_player(["A", "B"], labels("a", 4), labels("b", 4), table)
}

/// Two states, player 1 privately informed (types `t1`, `t1'`), player 2
/// uninformed. The small payoff `eps` is player 2's reward for `L` after `U`.
pub fn bayes_two_types(eps: Rational) -> BayesianGame {
    let z = Rational::zero;
    let i = Rational::from;
    let theta = vec![
        vec![(i(1), eps.clone()), (i(-2), z())],
        vec![(z(), z()), (z(), i(1))],
    ];
    let theta_prime = vec![
        vec![(i(-2), eps.clone()), (i(1), z())],
        vec![(z(), z()), (z(), i(1))],
    ];
    let rows = vec!["U".to_string(), "D".to_string()];
    let cols = vec!["L".to_string(), "R".to_string()];
    let states = vec![
        two_player(["1", "2"], rows.clone(), cols.clone(), theta),
        two_player(["1", "2"], rows.clone(), cols.clone(), theta_prime),
    ];
    let half = Rational::frac(1, 2);
    BayesianGame::from_prior_entries(
        vec!["1".into(), "2".into()],
        vec![rows, cols],
        vec!["theta".into(), "theta'".into()],
        vec![vec!["t1".into(), "t1'".into()], vec!["t2".into()]],
        vec![(0, vec![0, 0], half.clone()), (1, vec![1, 0], half)],
        states,
    )
    .expect("fixture is well formed")
}

/// Two equally likely states `-1` and `1` and one type per player; the
/// players want to match the state but cannot observe it.
pub fn bayes_interim_correlated() -> BayesianGame {
    let minus = ints(&[
        &[(-10, -10), (1, 1), (-10, 0)],
        &[(1, 1), (-10, -10), (-10, 0)],
        &[(0, -10), (0, -10), (0, 0)],
    ]);
    let plus = ints(&[
        &[(1, 1), (-10, -10), (-10, 0)],
        &[(-10, -10), (1, 1), (-10, 0)],
        &[(0, -10), (0, -10), (0, 0)],
    ]);
    let states = vec![
        two_player(["1", "2"], labels("a", 3), labels("b", 3), minus),
        two_player(["1", "2"], labels("a", 3), labels("b", 3), plus),
    ];
    let half = Rational::frac(1, 2);
    BayesianGame::from_prior_entries(
        vec!["1".into(), "2".into()],
        vec![labels("a", 3), labels("b", 3)],
        vec!["-1".into(), "1".into()],
        vec![vec!["t1".into()], vec!["t2".into()]],
        vec![(0, vec![0, 0], half.clone()), (1, vec![0, 0], half)],
        states,
    )
    .expect("fixture is well formed")
}
