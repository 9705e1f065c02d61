//! Exhaustive play: every sequence of human moves on the fixture problems,
//! for both roles and both tie-breaks.

use std::path::PathBuf;

use qcsp::{compile, evaluate, Assignment, CompileOptions, Problem, Quantifier, TieBreak};
use qcsp_service::{Game, SessionState, Status};

fn fixture(name: &str) -> Problem {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name);
    Problem::from_json(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn explore(game: &Game, problem: &Problem, state: SessionState, finished: &mut Vec<SessionState>) {
    if state.status != Status::Ongoing {
        finished.push(state);
        return;
    }
    let var = &problem.variables()[state.prefix.len()];
    let moves = game.winning_moves(&state).unwrap();
    if var.is_existential() {
        assert!(!moves.is_empty(), "stuck at {:?}", state.values());
    }
    for &value in &var.domain {
        assert_eq!(game.whatif(&state, None, value).unwrap(), moves.contains(&value));
        let mut next = state.clone();
        game.play(&mut next, None, value).unwrap();
        explore(game, problem, next, finished);
    }
}

#[test]
fn verdicts_replay_through_evaluate() {
    for name in ["pstar.json", "forall2.json", "pursuit.json", "unsat.json"] {
        let problem = fixture(name);
        let (base, _) = compile(&problem, CompileOptions::default()).unwrap();
        let game = Game::new(&problem, &base);
        for role in [Quantifier::Exists, Quantifier::Forall] {
            for tie in [TieBreak::Min, TieBreak::Max] {
                let start = game.start("s".into(), "p".into(), "b".into(), role, tie).unwrap();
                let mut finished = Vec::new();
                explore(&game, &problem, start, &mut finished);
                assert!(!finished.is_empty());
                for s in finished {
                    assert_ne!(s.status, Status::DrawnOffBase, "{name}: compiled bases never strand a game");
                    if s.prefix.len() == problem.len() {
                        let a: Assignment = s.prefix.iter().map(|m| (m.variable.clone(), m.value)).collect();
                        let holds = evaluate(&problem, &a).unwrap();
                        assert_eq!(s.status == Status::Won, holds, "{name}: {:?}", s.values());
                    } else {
                        assert_eq!(s.status, Status::Lost, "{name}: {:?}", s.values());
                    }
                    // with the engine on the existential side the game is never lost
                    if role == Quantifier::Forall && !base.is_bottom() {
                        assert_eq!(s.status, Status::Won, "{name}: {:?}", s.values());
                    }
                }
            }
        }
    }
}
