//! Seeded random instances for property tests and the command line.

use rand::Rng;

use crate::bayesian::BayesianGame;
use crate::game::Game;
use crate::rational::Rational;

fn names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|k| format!("{prefix}{k}")).collect()
}

/// Game with players `P1..`, actions `a1..` and integer payoffs drawn
/// uniformly from `lo..=hi`.
pub fn random_game<R: Rng + ?Sized>(rng: &mut R, shape: &[usize], lo: i64, hi: i64) -> Game {
    let players = names("P", shape.len());
    let actions = shape.iter().map(|&k| names("a", k)).collect();
    let n = shape.len();
    Game::from_fn(players, actions, |_| {
        (0..n).map(|_| Rational::from(rng.gen_range(lo..=hi))).collect()
    })
    .expect("shape has at least two players and no empty action set")
}

/// Random shape with `players` players and `min..=max` actions each.
pub fn random_shape<R: Rng + ?Sized>(rng: &mut R, players: usize, min: usize, max: usize) -> Vec<usize> {
    (0..players).map(|_| rng.gen_range(min..=max)).collect()
}

/// Bayesian game where every `(θ, type profile)` has positive prior
/// probability, so all types are reachable.
pub fn random_bayesian<R: Rng + ?Sized>(
    rng: &mut R,
    actions: &[usize],
    types: &[usize],
    states: usize,
    lo: i64,
    hi: i64,
) -> BayesianGame {
    let games: Vec<Game> = (0..states).map(|_| random_game(rng, actions, lo, hi)).collect();
    let cells = states * types.iter().product::<usize>();
    let weights: Vec<i64> = (0..cells).map(|_| rng.gen_range(1..=6)).collect();
    let total: i64 = weights.iter().sum();
    let prior = weights.into_iter().map(|w| Rational::frac(w, total)).collect();
    BayesianGame::new(
        games[0].players().to_vec(),
        games[0].all_actions().to_vec(),
        names("s", states),
        types.iter().map(|&k| names("t", k)).collect(),
        prior,
        games,
    )
    .expect("generated prior is a distribution")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn seeded_games_repeat() {
        let a = random_game(&mut ChaCha8Rng::seed_from_u64(7), &[2, 3, 2], -9, 9);
        let b = random_game(&mut ChaCha8Rng::seed_from_u64(7), &[2, 3, 2], -9, 9);
        assert_eq!(a, b);
        assert_eq!(a.shape(), vec![2, 3, 2]);
        assert!(a.profiles().all(|p| a.payoff(&p).unwrap().iter().all(|x| *x >= -9 && *x <= 9)));
    }

    #[test]
    fn bayesian_prior_is_positive() {
        let bg = random_bayesian(&mut ChaCha8Rng::seed_from_u64(3), &[2, 2], &[2, 1], 2, -5, 5);
        assert_eq!(bg.support().len(), 4);
    }
}
