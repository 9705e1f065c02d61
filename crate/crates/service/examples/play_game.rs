//! A game session without HTTP: the human side follows the winning-move
//! badges for the existential player, the engine answers with the
//! smallest universal value.
//!
//!     cargo run -p qcsp-service --example play_game

use qcsp::{compile, fixtures, CompileOptions, Quantifier, TieBreak};
use qcsp_service::{Game, Status};

fn main() {
    let problem = fixtures::pstar();
    let (base, _) = compile(&problem, CompileOptions::default()).unwrap();
    let game = Game::new(&problem, &base);
    let mut state = game.start("local".into(), "pstar".into(), "pstar".into(), Quantifier::Exists, TieBreak::Min).unwrap();

    // open with x = 2, the only root move that leaves y a real choice
    let mut first = Some(2);
    while state.status == Status::Ongoing {
        let turn = state.turn.clone().unwrap();
        let badges = game.winning_moves(&state).unwrap();
        println!("{} to play, winning values {badges:?}", turn.variable);
        let value = first.take().unwrap_or_else(|| *badges.first().unwrap());
        game.play(&mut state, None, value).unwrap();
        let line: Vec<String> = state.prefix.iter().map(|m| format!("{}={}", m.variable, m.value)).collect();
        println!("  prefix {}", line.join(" "));
    }
    println!("{}", state.status);
}
