//! Randomized properties checked against brute-force oracles.

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use periodic_core::bayesian::{
    conditional_belief, ex_ante_game, first_order_belief, interim_game, second_order_belief,
};
use periodic_core::coco::{coco_solution, decompose};
use periodic_core::io::{parse_game, write_game};
use periodic_core::mixed::{invariance_check, nash_support_enumeration, periodic_mixed};
use periodic_core::periodicity::{
    all_cycles, build_periodicity_graph, enumerate_cycles, periodic_actions, reach_cycle,
};
use periodic_core::random::{random_bayesian, random_game};
use periodic_core::rationalizability::{iesds, iesds_with_order, type_count, DominanceMode, Dominator};
use periodic_core::{Error, Game, MixedProfile, Node, Rational, TiePolicy};

fn game_from(seed: u64, shape: &[usize]) -> Game {
    random_game(&mut ChaCha8Rng::seed_from_u64(seed), shape, -9, 9)
}

fn shapes(players: std::ops::RangeInclusive<usize>, actions: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(actions, players)
}

/// Random point of the simplex with small denominators.
fn simplex(rng: &mut ChaCha8Rng, k: usize) -> Vec<Rational> {
    use rand::Rng;
    let w: Vec<i64> = (0..k).map(|_| rng.gen_range(0..=5)).collect();
    let total: i64 = w.iter().sum();
    if total == 0 {
        let mut v = vec![Rational::zero(); k];
        v[0] = Rational::one();
        return v;
    }
    w.into_iter().map(|x| Rational::frac(x, total)).collect()
}

/// The lexicographically first opponent profile maximizing `U_i(a, ·)`,
/// found by scanning every profile of the game.
fn brute_force_target(game: &Game, node: Node) -> Vec<usize> {
    let mut best: Option<(Rational, Vec<usize>)> = None;
    for p in game.profiles() {
        if p[node.player] != node.action {
            continue;
        }
        let u = game.utility(node.player, &p).clone();
        if best.as_ref().is_none_or(|(b, _)| u > *b) {
            best = Some((u, p));
        }
    }
    best.unwrap().1
}

/// Whether `node` can walk back to itself.
fn returns_to_itself(graph: &periodic_core::PeriodicityGraph, node: Node) -> bool {
    let mut seen = BTreeSet::new();
    let mut stack: Vec<Node> = graph.successors(node).collect();
    while let Some(v) = stack.pop() {
        if v == node {
            return true;
        }
        if seen.insert(v) {
            stack.extend(graph.successors(v));
        }
    }
    false
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn expected_utility_is_multilinear(seed in any::<u64>(), shape in shapes(2..=3, 2..=3), player_pick in 0usize..3) {
        let g = game_from(seed, &shape);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabcdef);
        let player = player_pick % shape.len();
        let base: Vec<Vec<Rational>> = shape.iter().map(|&k| simplex(&mut rng, k)).collect();
        let x = simplex(&mut rng, shape[player]);
        let y = simplex(&mut rng, shape[player]);
        let t = Rational::frac(2, 7);
        let with = |v: Vec<Rational>| {
            let mut d = base.clone();
            d[player] = v;
            g.expected_utility(&MixedProfile::new(d).unwrap()).unwrap()
        };
        let mix: Vec<Rational> = x.iter().zip(&y).map(|(a, b)| &t * a + (Rational::one() - &t) * b).collect();
        let ux = with(x);
        let uy = with(y);
        let um = with(mix);
        for k in 0..shape.len() {
            prop_assert_eq!(&um[k], &(&t * &ux[k] + (Rational::one() - &t) * &uy[k]));
        }
    }

    #[test]
    fn pure_expected_utility_is_the_payoff(seed in any::<u64>(), shape in shapes(2..=3, 1..=3)) {
        let g = game_from(seed, &shape);
        for p in g.profiles() {
            let m = MixedProfile::pure(&g, &p).unwrap();
            let u = g.expected_utility(&m).unwrap();
            prop_assert_eq!(u.as_slice(), g.payoff(&p).unwrap());
        }
    }

    #[test]
    fn game_documents_round_trip(seed in any::<u64>(), shape in shapes(2..=4, 1..=3)) {
        let g = game_from(seed, &shape);
        prop_assert_eq!(parse_game(&write_game(&g)).unwrap(), g);
    }

    #[test]
    fn graph_edges_match_brute_force(seed in any::<u64>(), shape in shapes(2..=4, 2..=4)) {
        let g = game_from(seed, &shape);
        let graph = build_periodicity_graph(&g, TiePolicy::Lexicographic).unwrap();
        for &node in graph.nodes() {
            let target = brute_force_target(&g, node);
            let expected: Vec<Node> = (0..shape.len())
                .filter(|&j| j != node.player)
                .map(|j| Node::new(j, target[j]))
                .collect();
            let got: Vec<Node> = graph.successors(node).collect();
            prop_assert_eq!(got, expected);
        }
    }

    #[test]
    fn periodic_membership_matches_closed_walks(seed in any::<u64>(), shape in shapes(2..=3, 2..=4)) {
        let g = game_from(seed, &shape);
        let graph = build_periodicity_graph(&g, TiePolicy::Lexicographic).unwrap();
        for &node in graph.nodes() {
            prop_assert_eq!(graph.is_on_cycle(node), returns_to_itself(&graph, node));
            let path = reach_cycle(&graph, node);
            prop_assert!(path.len() <= graph.num_nodes());
            prop_assert_eq!(path[0], node);
            for w in path.windows(2) {
                prop_assert!(graph.has_edge(w[0], w[1]));
            }
            prop_assert!(returns_to_itself(&graph, *path.last().unwrap()));
        }
    }

    #[test]
    fn two_player_cycles_alternate(seed in any::<u64>(), shape in shapes(2..=2, 2..=4)) {
        let g = game_from(seed, &shape);
        let graph = build_periodicity_graph(&g, TiePolicy::Lexicographic).unwrap();
        for c in all_cycles(&graph, graph.num_nodes()) {
            prop_assert!(c.is_valid_in(&graph));
            prop_assert_eq!(c.len() % 2, 0);
            let seq = c.player_sequence();
            for k in 0..seq.len() {
                prop_assert_ne!(seq[k], seq[(k + 1) % seq.len()]);
            }
            for anchor in 0..2 {
                let t = type_count(&c, anchor).unwrap();
                prop_assert_eq!(t.types, 2 * t.n);
                prop_assert_eq!(t.errors, 2 * t.n - 1);
                prop_assert_eq!(t.types, c.len());
            }
        }
    }

    #[test]
    fn enumerated_cycles_pass_through_their_node(seed in any::<u64>(), shape in shapes(2..=3, 2..=3)) {
        let g = game_from(seed, &shape);
        let graph = build_periodicity_graph(&g, TiePolicy::Lexicographic).unwrap();
        for &node in graph.nodes() {
            let cycles = enumerate_cycles(&graph, node, graph.num_nodes());
            prop_assert_eq!(cycles.is_empty(), !graph.is_on_cycle(node));
            for c in cycles {
                prop_assert_eq!(c.nodes()[0], node);
                prop_assert!(c.is_valid_in(&graph));
            }
        }
    }

    #[test]
    fn graphs_are_deterministic(seed in any::<u64>(), shape in shapes(2..=4, 2..=3)) {
        let g = game_from(seed, &shape);
        let a = build_periodicity_graph(&g, TiePolicy::Lexicographic).unwrap();
        let b = build_periodicity_graph(&g.clone(), TiePolicy::Lexicographic).unwrap();
        prop_assert_eq!(a.edges(), b.edges());
        prop_assert_eq!(a.degenerate_nodes(), b.degenerate_nodes());
    }

    #[test]
    fn strict_policy_agrees_when_it_succeeds(seed in any::<u64>(), shape in shapes(2..=3, 2..=3)) {
        let g = game_from(seed, &shape);
        let lex = build_periodicity_graph(&g, TiePolicy::Lexicographic).unwrap();
        match build_periodicity_graph(&g, TiePolicy::Strict) {
            Ok(strict) => {
                prop_assert!(lex.degenerate_nodes().is_empty());
                prop_assert_eq!(strict.edges(), lex.edges());
            }
            Err(Error::DegenerateArgmax { player, action, .. }) => {
                prop_assert!(lex.is_degenerate(Node::new(player, action)));
            }
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn periodic_mixtures_are_invariant(seed in any::<u64>(), shape in shapes(2..=2, 2..=4)) {
        let g = game_from(seed, &shape);
        for (player, &k) in shape.iter().enumerate() {
            match periodic_mixed(&g, player) {
                Ok(m) => {
                    prop_assert_eq!(invariance_check(&g, player, &m.strategy).unwrap(), Rational::zero());
                    prop_assert!(m.dimension < k);
                }
                Err(e) => prop_assert_eq!(e, Error::Infeasible { player }),
            }
        }
    }

    #[test]
    fn nash_equilibria_survive_deviation_checks(seed in any::<u64>(), shape in shapes(2..=2, 2..=4)) {
        let g = game_from(seed, &shape);
        let eqs = nash_support_enumeration(&g).unwrap();
        prop_assert!(!eqs.is_empty());
        for e in &eqs {
            for player in 0..2 {
                for a in 0..shape[player] {
                    let mut d = e.profile.distributions().to_vec();
                    d[player] = (0..shape[player]).map(|k| if k == a { Rational::one() } else { Rational::zero() }).collect();
                    let u = g.expected_utility(&MixedProfile::new(d).unwrap()).unwrap();
                    prop_assert!(u[player] <= e.utilities[player]);
                }
            }
            // Indifference across the support: every supported pure action
            // earns exactly the equilibrium utility.
            for player in 0..2 {
                for &a in &e.support[player] {
                    let mut d = e.profile.distributions().to_vec();
                    d[player] = (0..shape[player]).map(|k| if k == a { Rational::one() } else { Rational::zero() }).collect();
                    let u = g.expected_utility(&MixedProfile::new(d).unwrap()).unwrap();
                    prop_assert_eq!(&u[player], &e.utilities[player]);
                }
            }
        }
    }

    #[test]
    fn elimination_is_order_independent(seed in any::<u64>(), order_seed in any::<u64>(), shape in shapes(2..=3, 2..=4)) {
        use rand::Rng;
        let g = game_from(seed, &shape);
        let rounds = iesds(&g, DominanceMode::PureOnly);
        let mut rng = ChaCha8Rng::seed_from_u64(order_seed);
        let shuffled = iesds_with_order(&g, DominanceMode::PureOnly, |c| rng.gen_range(0..c.len()));
        prop_assert_eq!(&rounds.survivors, &shuffled.survivors);
        prop_assert!(rounds.survivors.iter().all(|s| !s.is_empty()));
    }

    #[test]
    fn eliminated_actions_are_dominated(seed in any::<u64>(), shape in shapes(2..=3, 2..=4)) {
        let g = game_from(seed, &shape);
        let result = iesds(&g, DominanceMode::AllowMixedDominators);
        let mut alive: Vec<Vec<usize>> = shape.iter().map(|&k| (0..k).collect()).collect();
        let mut round = 1;
        let mut pending: Vec<(usize, usize)> = Vec::new();
        for e in &result.trace {
            if e.round != round {
                for (p, a) in pending.drain(..) {
                    alive[p].retain(|&x| x != a);
                }
                round = e.round;
            }
            for prof in g.profiles() {
                let in_play = (0..shape.len()).all(|j| j == e.player || alive[j].contains(&prof[j]));
                if !in_play || prof[e.player] != e.action {
                    continue;
                }
                let bad = g.utility(e.player, &prof);
                let good = match &e.dominator {
                    Dominator::Pure(b) => {
                        let mut q = prof.clone();
                        q[e.player] = *b;
                        g.utility(e.player, &q).clone()
                    }
                    Dominator::Mixed(m) => m
                        .iter()
                        .enumerate()
                        .map(|(b, w)| {
                            let mut q = prof.clone();
                            q[e.player] = b;
                            g.utility(e.player, &q) * w
                        })
                        .sum(),
                };
                prop_assert!(&good > bad);
            }
            pending.push((e.player, e.action));
        }
    }

    #[test]
    fn coco_invariants(seed in any::<u64>(), shape in shapes(2..=2, 1..=4)) {
        let g = game_from(seed, &shape);
        let d = decompose(&g).unwrap();
        for p in g.profiles() {
            let (r, c) = (p[0], p[1]);
            prop_assert_eq!(&d.cooperative[r][c] + &d.competitive[r][c], g.utility(0, &p).clone());
            prop_assert_eq!(&d.cooperative[r][c] - &d.competitive[r][c], g.utility(1, &p).clone());
        }
        let s = coco_solution(&g).unwrap();
        prop_assert_eq!(&s.final_payoffs[0] + &s.final_payoffs[1], s.vsharp.clone());
        prop_assert_eq!(g.utility(0, &s.profile) + &s.side_payment, s.final_payoffs[0].clone());
        prop_assert_eq!(g.utility(1, &s.profile) - &s.side_payment, s.final_payoffs[1].clone());

        // Swapping the roles of the players negates the competitive value and
        // the side payment.
        let swapped = Game::from_fn(
            vec!["B".into(), "A".into()],
            vec![g.actions(1).to_vec(), g.actions(0).to_vec()],
            |p| {
                let u = g.payoff(&[p[1], p[0]]).unwrap();
                vec![u[1].clone(), u[0].clone()]
            },
        ).unwrap();
        let t = coco_solution(&swapped).unwrap();
        prop_assert_eq!(&t.vs, &-s.vs.clone());
        prop_assert_eq!(&t.vsharp, &s.vsharp);
        if s.tied.len() == 1 {
            prop_assert_eq!(&t.side_payment, &-s.side_payment.clone());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn beliefs_are_distributions(seed in any::<u64>(), types in shapes(2..=3, 1..=2), states in 1usize..=3) {
        let actions = vec![2; types.len()];
        let bg = random_bayesian(&mut ChaCha8Rng::seed_from_u64(seed), &actions, &types, states, -9, 9);
        for (player, &k) in types.iter().enumerate() {
            for t in 0..k {
                let b = conditional_belief(&bg, player, t).unwrap();
                prop_assert_eq!(b.distribution.values().cloned().sum::<Rational>(), Rational::one());
                prop_assert_eq!(first_order_belief(&bg, player, t).unwrap().into_iter().sum::<Rational>(), Rational::one());
                let h2 = second_order_belief(&bg, player, t).unwrap();
                prop_assert_eq!(h2.iter().map(|e| e.mass.clone()).sum::<Rational>(), Rational::one());
            }
        }
    }

    #[test]
    fn ex_ante_payoffs_match_direct_expectation(seed in any::<u64>(), types in shapes(2..=2, 1..=2), states in 1usize..=2) {
        let actions = vec![2, 3];
        let bg = random_bayesian(&mut ChaCha8Rng::seed_from_u64(seed), &actions, &types, states, -9, 9);
        let g = ex_ante_game(&bg).unwrap();
        // Strategy k of player i plays digit d of k (base |A_i|, first type
        // most significant) as type d.
        let decode = |i: usize, k: usize, ty: usize| {
            let base = actions[i];
            let digits = types[i];
            (k / base.pow((digits - 1 - ty) as u32)) % base
        };
        for p in g.profiles() {
            let mut expected = [Rational::zero(), Rational::zero()];
            for theta in 0..states {
                for t0 in 0..types[0] {
                    for t1 in 0..types[1] {
                        let w = bg.prior(theta, &[t0, t1]).unwrap();
                        let a = [decode(0, p[0], t0), decode(1, p[1], t1)];
                        let u = bg.state_game(theta).payoff(&a).unwrap();
                        expected[0] += &(&u[0] * w);
                        expected[1] += &(&u[1] * w);
                    }
                }
            }
            prop_assert_eq!(g.payoff(&p).unwrap(), &expected[..]);
        }
    }

    #[test]
    fn bayesian_games_have_periodic_actions(seed in any::<u64>(), types in shapes(2..=3, 1..=2), states in 1usize..=2) {
        let actions = vec![2; types.len()];
        let bg = random_bayesian(&mut ChaCha8Rng::seed_from_u64(seed), &actions, &types, states, -9, 9);
        for g in [ex_ante_game(&bg).unwrap(), interim_game(&bg).unwrap()] {
            let periodic = periodic_actions(&g, TiePolicy::Lexicographic).unwrap();
            prop_assert!(periodic.iter().any(|s| !s.is_empty()));
        }
    }
}
