//! Sequence-form quantities checked against direct game-tree recursion.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rtregret::engine::{AveragingScheme, Engine};
use rtregret::games::{build_kuhn, build_leduc, Kuhn, Leduc, Node, Rules};
use rtregret::minimizers::MinimizerKind;
use rtregret::{BehaviorStrategy, Game, Player, Treeplex};

/// Behavior strategy keyed by infoset label.
fn by_label(t: &Treeplex, sigma: &BehaviorStrategy) -> HashMap<String, Vec<f64>> {
    t.infosets().iter().map(|node| (node.label.clone(), sigma.at(node).to_vec())).collect()
}

/// Expected utility of player 1, walking the rules tree directly.
fn tree_value<R: Rules>(rules: &R, state: &R::State, sigma: &[HashMap<String, Vec<f64>>; 2]) -> f64 {
    match rules.expand(state) {
        Node::Terminal(u) => u,
        Node::Chance(outcomes) => outcomes.iter().map(|(p, s)| p * tree_value(rules, s, sigma)).sum(),
        Node::Decision { player, infoset, actions } => {
            let probs = &sigma[player.index()][&infoset];
            actions.iter().zip(probs).map(|(s, p)| p * tree_value(rules, s, sigma)).sum()
        }
    }
}

fn random_behavior(t: &Treeplex, rng: &mut ChaCha8Rng) -> BehaviorStrategy {
    let mut probs = vec![1.0; t.num_sequences()];
    for node in t.infosets() {
        let w: Vec<f64> = (0..node.num_actions).map(|_| rng.gen_range(0.01..1.0)).collect();
        let total: f64 = w.iter().sum();
        for (a, s) in node.seqs().enumerate() {
            probs[s] = w[a] / total;
        }
    }
    BehaviorStrategy { probs }
}

fn check_bilinear_value<R: Rules>(rules: &R, game: &Game, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (t1, t2) = (game.treeplex(Player::One), game.treeplex(Player::Two));
    for _ in 0..20 {
        let (s1, s2) = (random_behavior(t1, &mut rng), random_behavior(t2, &mut rng));
        let sparse = game.expected_value(&t1.behavior_to_sequence(&s1).unwrap(), &t2.behavior_to_sequence(&s2).unwrap());
        let direct = tree_value(rules, &rules.root(), &[by_label(t1, &s1), by_label(t2, &s2)]);
        assert!((sparse - direct).abs() <= 1e-10, "{sparse} vs {direct}");
    }
}

#[test]
fn kuhn_value_matches_tree_walk() {
    check_bilinear_value(&Kuhn { cards: 3 }, &build_kuhn(3).unwrap(), 1);
}

#[test]
fn leduc_value_matches_tree_walk() {
    check_bilinear_value(&Leduc { ranks: 3 }, &build_leduc(3).unwrap(), 2);
}

#[test]
fn kuhn_game_value_at_known_equilibrium() {
    // alpha = 0 member of the Kuhn equilibrium family; game value -1/18
    let game = build_kuhn(3).unwrap();
    let mut s1: HashMap<String, Vec<f64>> = HashMap::new();
    let mut s2: HashMap<String, Vec<f64>> = HashMap::new();
    for c in 0..3 {
        s1.insert(format!("{c}:"), vec![1.0, 0.0]);
    }
    s1.insert("0:pb".into(), vec![1.0, 0.0]);
    s1.insert("1:pb".into(), vec![2.0 / 3.0, 1.0 / 3.0]);
    s1.insert("2:pb".into(), vec![0.0, 1.0]);
    s2.insert("0:p".into(), vec![2.0 / 3.0, 1.0 / 3.0]);
    s2.insert("1:p".into(), vec![1.0, 0.0]);
    s2.insert("2:p".into(), vec![0.0, 1.0]);
    s2.insert("0:b".into(), vec![1.0, 0.0]);
    s2.insert("1:b".into(), vec![2.0 / 3.0, 1.0 / 3.0]);
    s2.insert("2:b".into(), vec![0.0, 1.0]);
    let to_behavior = |t: &Treeplex, m: &HashMap<String, Vec<f64>>| {
        let mut probs = vec![1.0; t.num_sequences()];
        for node in t.infosets() {
            probs[node.seqs()].copy_from_slice(&m[&node.label]);
        }
        BehaviorStrategy { probs }
    };
    let (t1, t2) = (game.treeplex(Player::One), game.treeplex(Player::Two));
    let q1 = t1.behavior_to_sequence(&to_behavior(t1, &s1)).unwrap();
    let q2 = t2.behavior_to_sequence(&to_behavior(t2, &s2)).unwrap();
    assert!((game.expected_value(&q1, &q2) + 1.0 / 18.0).abs() < 1e-12);
    let eps = rtregret::metrics::exploitability(&game, &q1, &q2).unwrap().value;
    assert!(eps.abs() < 1e-12, "{eps}");
}

/// Tabular CFR+ on 3-card Kuhn with alternating updates, written against
/// the poker rules directly.
struct TextbookCfrPlus {
    regret: HashMap<String, [f64; 2]>,
}

const HISTORIES: [(&str, usize); 4] = [("", 0), ("p", 1), ("b", 1), ("pb", 0)];

impl TextbookCfrPlus {
    fn strategy(&self, key: &str) -> [f64; 2] {
        let r = self.regret.get(key).copied().unwrap_or([0.0; 2]);
        let total = r[0] + r[1];
        if total > 0.0 {
            [r[0] / total, r[1] / total]
        } else {
            [0.5, 0.5]
        }
    }

    fn payoff(cards: [usize; 2], history: &str) -> Option<f64> {
        let win = if cards[0] > cards[1] { 1.0 } else { -1.0 };
        match history {
            "pp" => Some(win),
            "bc" | "pbc" => Some(2.0 * win),
            "bf" => Some(1.0),
            "pbf" => Some(-1.0),
            _ => None,
        }
    }

    /// Player 1 utility; accumulates counterfactual values for `updating`
    /// into `values[infoset][action]`.
    fn walk(
        &self,
        cards: [usize; 2],
        history: &str,
        reach_opp: f64,
        updating: usize,
        values: &mut HashMap<String, [f64; 2]>,
    ) -> f64 {
        if let Some(u) = Self::payoff(cards, history) {
            return u;
        }
        let player = HISTORIES.iter().find(|(h, _)| *h == history).unwrap().1;
        let key = format!("{}:{history}", cards[player]);
        let actions = if history.ends_with('b') { ['f', 'c'] } else { ['p', 'b'] };
        let sigma = self.strategy(&key);
        let mut child = [0.0; 2];
        for a in 0..2 {
            let next = format!("{history}{}", actions[a]);
            let r = if player == updating { reach_opp } else { reach_opp * sigma[a] };
            child[a] = self.walk(cards, &next, r, updating, values);
        }
        if player == updating {
            let sign = if player == 0 { 1.0 } else { -1.0 };
            let entry = values.entry(key).or_insert([0.0; 2]);
            for a in 0..2 {
                entry[a] += reach_opp * sign * child[a];
            }
        }
        sigma[0] * child[0] + sigma[1] * child[1]
    }

    fn iterate(&mut self) {
        for updating in 0..2 {
            let mut values = HashMap::new();
            for c1 in 0..3 {
                for c2 in (0..3).filter(|&c| c != c1) {
                    self.walk([c1, c2], "", 1.0 / 6.0, updating, &mut values);
                }
            }
            for (key, v) in values {
                let sigma = self.strategy(&key);
                let ev = sigma[0] * v[0] + sigma[1] * v[1];
                let r = self.regret.entry(key).or_insert([0.0; 2]);
                for a in 0..2 {
                    r[a] = (r[a] + v[a] - ev).max(0.0);
                }
            }
        }
    }
}

#[test]
fn engine_matches_textbook_cfr_plus_on_kuhn() {
    let game = build_kuhn(3).unwrap();
    let mut engine = Engine::new(&game, MinimizerKind::RmPlus, AveragingScheme::Quadratic);
    let mut oracle = TextbookCfrPlus { regret: HashMap::new() };
    for _ in 0..200 {
        engine.iterate_once(None).unwrap();
        oracle.iterate();
    }
    for player in Player::BOTH {
        let t = game.treeplex(player);
        let sigma = engine.strategies()[player.index()];
        for node in t.infosets() {
            let want = oracle.strategy(&node.label);
            for (a, s) in node.seqs().enumerate() {
                assert!((sigma.probs[s] - want[a]).abs() < 1e-9, "{} action {a}", node.label);
            }
        }
    }
}
