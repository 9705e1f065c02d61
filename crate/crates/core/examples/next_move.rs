//! Plays P* against its compiled base, asking at every existential turn
//! which values keep a winning strategy. No search happens during play.
//!
//!     cargo run -p qcsp --example next_move

use qcsp::{allowed_moves, answer_next_move_choice, compile, fixtures, oracle_calls, CompileOptions};

fn main() {
    let problem = fixtures::pstar();
    let (base, _) = compile(&problem, CompileOptions::default()).unwrap();

    let calls = oracle_calls();
    // the human picks x = 2, then wonders about y
    println!("after x=2, y may be {:?}", allowed_moves(&base, &[2]).unwrap());
    println!("x=2, y=1: could y=2 have won? {}", answer_next_move_choice(&base, &[2, 1], 2).unwrap());
    println!("x=2, y=1: could y=0 have won? {}", answer_next_move_choice(&base, &[2, 1], 0).unwrap());

    // the adversary plays z; t is then forced
    for z in 0..3 {
        let t = allowed_moves(&base, &[2, 1, z]).unwrap();
        println!("x=2, y=1, z={z}: t in {t:?}");
    }
    // leaving the guards means the game is lost: nothing is allowed
    println!("x=0, y=1, z=1: t in {:?}", allowed_moves(&base, &[0, 1, 1]).unwrap());
    println!("oracle calls during play: {}", oracle_calls() - calls);
}
