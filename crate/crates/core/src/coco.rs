//! Cooperative-competitive decomposition of bimatrix games.

use serde::Serialize;

use crate::error::Result;
use crate::game::{ActionProfile, Game};
use crate::lp::{LinearProgram, Relation};
use crate::mixed::{own_matrix, require_two_players};
use crate::rational::Rational;

pub type Matrix = Vec<Vec<Rational>>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    /// Half-sum of the two payoff matrices.
    pub cooperative: Matrix,
    /// Half-difference, row player's payoff minus column player's.
    pub competitive: Matrix,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZeroSumSolution {
    pub value: Rational,
    pub row_strategy: Vec<Rational>,
    pub col_strategy: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CocoSolution {
    pub vsharp: Rational,
    pub vs: Rational,
    /// Profile used for the side payment (first of `tied`).
    pub profile: ActionProfile,
    /// Every profile attaining the maximal combined payoff.
    pub tied: Vec<ActionProfile>,
    /// Transfer received by the row player from the column player; negative
    /// when the row player pays.
    pub side_payment: Rational,
    pub final_payoffs: [Rational; 2],
    pub zero_sum_strategies: [Vec<Rational>; 2],
}

fn payoff_matrices(game: &Game) -> Result<(Matrix, Matrix)> {
    require_two_players(game)?;
    let a = own_matrix(game, 0);
    let b_t = own_matrix(game, 1);
    let b = (0..a.len())
        .map(|r| (0..b_t.len()).map(|c| b_t[c][r].clone()).collect())
        .collect();
    Ok((a, b))
}

pub fn decompose(game: &Game) -> Result<Decomposition> {
    let (a, b) = payoff_matrices(game)?;
    let half = Rational::frac(1, 2);
    let combine = |sign: bool| -> Matrix {
        a.iter()
            .zip(&b)
            .map(|(ra, rb)| {
                ra.iter()
                    .zip(rb)
                    .map(|(x, y)| if sign { (x + y) * &half } else { (x - y) * &half })
                    .collect()
            })
            .collect()
    };
    Ok(Decomposition {
        cooperative: combine(true),
        competitive: combine(false),
    })
}

/// Largest combined payoff over pure profiles and every profile attaining it,
/// in lexicographic order.
pub fn max_combined_payoff(game: &Game) -> Result<(Rational, Vec<ActionProfile>)> {
    require_two_players(game)?;
    let mut best: Option<Rational> = None;
    let mut argmax = Vec::new();
    for p in game.profiles() {
        let total: Rational = game.payoff(&p)?.iter().sum();
        match &best {
            Some(b) if &total < b => {}
            Some(b) if &total == b => argmax.push(ActionProfile::new(p)),
            _ => {
                best = Some(total);
                argmax = vec![ActionProfile::new(p)];
            }
        }
    }
    Ok((best.expect("games have at least one profile"), argmax))
}

/// Optimal mixture for the maximizing side of `m` (rows) and the guaranteed
/// value.
fn maximin(m: &Matrix) -> (Rational, Vec<Rational>) {
    let rows = m.len();
    let cols = m[0].len();
    let mut lp = LinearProgram::new(rows + 1);
    lp.set_free(rows);
    for c in 0..cols {
        let mut coeffs: Vec<Rational> = m.iter().map(|row| row[c].clone()).collect();
        coeffs.push(-Rational::one());
        lp.constrain(coeffs, Relation::Ge, Rational::zero());
    }
    let mut sum = vec![Rational::one(); rows];
    sum.push(Rational::zero());
    lp.constrain(sum, Relation::Eq, Rational::one());
    let mut objective = vec![Rational::zero(); rows];
    objective.push(Rational::one());
    lp.maximize(objective);
    let (mut x, value) = lp.solve().optimal().expect("matrix game program is always solvable");
    x.truncate(rows);
    (value, x)
}

/// Value and optimal strategies of the zero-sum game where the row player
/// receives `m[r][c]`.
pub fn zero_sum_value(m: &Matrix) -> ZeroSumSolution {
    assert!(!m.is_empty() && !m[0].is_empty(), "empty payoff matrix");
    let (value, row_strategy) = maximin(m);
    let negated_t: Matrix = (0..m[0].len())
        .map(|c| m.iter().map(|row| -&row[c]).collect())
        .collect();
    let (neg_value, col_strategy) = maximin(&negated_t);
    assert_eq!(value, -neg_value, "primal and dual values disagree");
    ZeroSumSolution {
        value,
        row_strategy,
        col_strategy,
    }
}

pub fn coco_solution(game: &Game) -> Result<CocoSolution> {
    let decomposition = decompose(game)?;
    let (vsharp, tied) = max_combined_payoff(game)?;
    let zs = zero_sum_value(&decomposition.competitive);
    let profile = tied[0].clone();
    let half = &vsharp * &Rational::frac(1, 2);
    let row_final = &half + &zs.value;
    let col_final = &half - &zs.value;
    let side_payment = &row_final - game.utility(0, &profile);
    Ok(CocoSolution {
        vsharp,
        vs: zs.value,
        profile,
        tied,
        side_payment,
        final_payoffs: [row_final, col_final],
        zero_sum_strategies: [zs.row_strategy, zs.col_strategy],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::q;

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| Rational::from(x)).collect()).collect()
    }

    #[test]
    fn battle_of_sexes_split() {
        let d = decompose(&fixtures::battle_of_sexes()).unwrap();
        assert_eq!(d.competitive, vec![vec![q!(1 / 2), q!(0)], vec![q!(0), q!(-1 / 2)]]);
        assert_eq!(d.cooperative, vec![vec![q!(3 / 2), q!(0)], vec![q!(0), q!(3 / 2)]]);
    }

    #[test]
    fn zero_sum_and_identical_games() {
        let zs = Game::bimatrix_int(&[vec![(1, -1), (-2, 2)], vec![(0, 0), (3, -3)]]).unwrap();
        let d = decompose(&zs).unwrap();
        assert!(d.cooperative.iter().flatten().all(Rational::is_zero));
        let same = Game::bimatrix_int(&[vec![(1, 1), (4, 4)]]).unwrap();
        assert!(decompose(&same).unwrap().competitive.iter().flatten().all(Rational::is_zero));
    }

    #[test]
    fn combined_payoff_ties() {
        let (v, arg) = max_combined_payoff(&fixtures::battle_of_sexes()).unwrap();
        assert_eq!(v, q!(3));
        assert_eq!(arg, vec![ActionProfile::new(vec![0, 0]), ActionProfile::new(vec![1, 1])]);
        let (v, arg) = max_combined_payoff(&fixtures::prisoners_dilemma()).unwrap();
        assert_eq!(v, q!(8));
        assert_eq!(arg, vec![ActionProfile::new(vec![0, 0])]);
        let constant = Game::bimatrix_int(&[vec![(1, 4), (2, 3)], vec![(5, 0), (0, 5)]]).unwrap();
        let (v, arg) = max_combined_payoff(&constant).unwrap();
        assert_eq!(v, q!(5));
        assert_eq!(arg.len(), 4);
        assert_eq!(arg[0], ActionProfile::new(vec![0, 0]));
    }

    #[test]
    fn zero_sum_values() {
        let pennies = zero_sum_value(&m(&[&[1, -1], &[-1, 1]]));
        assert_eq!(pennies.value, q!(0));
        assert_eq!(pennies.row_strategy, vec![q!(1 / 2), q!(1 / 2)]);
        assert_eq!(pennies.col_strategy, vec![q!(1 / 2), q!(1 / 2)]);
        assert_eq!(zero_sum_value(&m(&[&[7]])).value, q!(7));
        let bos = zero_sum_value(&vec![vec![q!(1 / 2), q!(0)], vec![q!(0), q!(-1 / 2)]]);
        assert_eq!(bos.value, q!(0));
        // Saddle point at (row 2, column 1).
        let saddle = zero_sum_value(&m(&[&[1, 5], &[3, 4], &[0, 6]]));
        assert_eq!(saddle.value, q!(3));
        assert_eq!(saddle.row_strategy, vec![q!(0), q!(1), q!(0)]);
    }

    #[test]
    fn coco_prisoners_dilemma() {
        let s = coco_solution(&fixtures::prisoners_dilemma()).unwrap();
        assert_eq!(s.vsharp, q!(8));
        assert_eq!(s.vs, q!(0));
        assert_eq!(s.profile, ActionProfile::new(vec![0, 0]));
        assert_eq!(s.side_payment, q!(0));
        assert_eq!(s.final_payoffs, [q!(4), q!(4)]);
    }

    #[test]
    fn coco_battle_of_sexes() {
        let s = coco_solution(&fixtures::battle_of_sexes()).unwrap();
        assert_eq!((s.vsharp.clone(), s.vs.clone()), (q!(3), q!(0)));
        assert_eq!(s.final_payoffs, [q!(3 / 2), q!(3 / 2)]);
        assert_eq!(s.side_payment, q!(-1 / 2));
        assert_eq!(&s.final_payoffs[0] + &s.final_payoffs[1], s.vsharp);
    }

    #[test]
    fn swapping_players_negates_side_payment() {
        let g = Game::bimatrix_int(&[vec![(3, 0), (1, 2)], vec![(0, 5), (2, 2)]]).unwrap();
        let swapped = Game::bimatrix_int(&[vec![(0, 3), (5, 0)], vec![(2, 1), (2, 2)]]).unwrap();
        let s = coco_solution(&g).unwrap();
        let t = coco_solution(&swapped).unwrap();
        assert_eq!(s.vs, -t.vs.clone());
        assert_eq!(s.side_payment, -t.side_payment.clone());
    }
}
