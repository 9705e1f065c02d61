//! Game sessions against a compiled base.
//!
//! The human takes every variable of one quantifier; the engine plays the
//! other side by picking among the allowed moves with a tie-break.
//! Verdicts are from the existential side: WON once a complete prefix
//! satisfies the problem, LOST as soon as an existential move leaves the
//! guards (no winning strategy is left) or the base is BOTTOM.

use std::collections::BTreeSet;

use qcsp::{allowed_moves, Problem, QcspBase, Quantifier, QueryError, TieBreak, Value, Variable};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Ongoing,
    Won,
    Lost,
    /// Every existential move was guarded, yet the base offers nothing at
    /// an existential turn. Only a base that is not optimal for the problem
    /// can get here.
    DrawnOffBase,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.pad(match self {
            Status::Ongoing => "ONGOING",
            Status::Won => "WON",
            Status::Lost => "LOST",
            Status::DrawnOffBase => "DRAWN_OFF_BASE",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    Human,
    Engine,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Move {
    pub variable: String,
    pub value: Value,
    pub player: Player,
    /// The value was among the allowed moves when played.
    pub on_base: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Turn {
    pub position: usize,
    pub variable: String,
    pub quantifier: Quantifier,
    pub player: Player,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionState {
    pub id: String,
    pub problem_id: String,
    pub base_id: String,
    pub human_role: Quantifier,
    pub tie_break: TieBreak,
    pub binder: Vec<Variable>,
    pub prefix: Vec<Move>,
    pub status: Status,
    pub turn: Option<Turn>,
}

impl SessionState {
    pub fn values(&self) -> Vec<Value> {
        self.prefix.iter().map(|m| m.value).collect()
    }
}

#[derive(Debug, PartialEq, Eq, thiserror::Error)]
pub enum GameError {
    #[error("the game is over ({0})")]
    GameOver(Status),
    #[error("it is the engine's turn")]
    OutOfTurn,
    #[error("value {value} is outside the domain of `{variable}`")]
    ValueOutOfDomain { variable: String, value: Value },
    #[error("the turn is `{expected}`, not `{found}`")]
    WrongVariable { expected: String, found: String },
    #[error(transparent)]
    Query(#[from] QueryError),
}

/// A problem and its compiled base, borrowed for the length of a request.
pub struct Game<'a> {
    problem: &'a Problem,
    base: &'a QcspBase,
}

impl<'a> Game<'a> {
    pub fn new(problem: &'a Problem, base: &'a QcspBase) -> Self {
        Game { problem, base }
    }

    pub fn binder(&self) -> &'a [Variable] {
        match self.base {
            QcspBase::Pair(p) => p.binder(),
            _ => self.problem.variables(),
        }
    }

    /// Allowed moves after `prefix`. Without guards (TOP or BOTTOM) every
    /// universal value is allowed; existential values are allowed only by
    /// TOP.
    pub fn moves_at(&self, prefix: &[Value]) -> Result<BTreeSet<Value>, GameError> {
        let var = &self.binder()[prefix.len()];
        match self.base {
            QcspBase::Pair(_) => Ok(allowed_moves(self.base, prefix)?),
            QcspBase::Bottom if var.is_existential() => Ok(BTreeSet::new()),
            _ => Ok(var.domain.iter().copied().collect()),
        }
    }

    pub fn start(
        &self,
        id: String,
        problem_id: String,
        base_id: String,
        human_role: Quantifier,
        tie_break: TieBreak,
    ) -> Result<SessionState, GameError> {
        let mut state = SessionState {
            id,
            problem_id,
            base_id,
            human_role,
            tie_break,
            binder: self.binder().to_vec(),
            prefix: Vec::new(),
            status: Status::Ongoing,
            turn: None,
        };
        self.settle(&mut state)?;
        Ok(state)
    }

    fn current(&self, state: &SessionState) -> Result<&'a Variable, GameError> {
        if state.status != Status::Ongoing {
            return Err(GameError::GameOver(state.status));
        }
        Ok(&self.binder()[state.prefix.len()])
    }

    fn check_value(var: &Variable, value: Value) -> Result<(), GameError> {
        if var.allows(value) {
            Ok(())
        } else {
            Err(GameError::ValueOutOfDomain { variable: var.name.clone(), value })
        }
    }

    /// Applies a human move, then lets the engine reply until it is the
    /// human's turn again or the game ends.
    pub fn play(&self, state: &mut SessionState, variable: Option<&str>, value: Value) -> Result<(), GameError> {
        let var = self.current(state)?;
        if let Some(name) = variable.filter(|&n| n != var.name) {
            return Err(GameError::WrongVariable { expected: var.name.clone(), found: name.into() });
        }
        if var.quantifier != state.human_role {
            return Err(GameError::OutOfTurn);
        }
        Self::check_value(var, value)?;
        self.apply(state, value, Player::Human)?;
        self.settle(state)
    }

    /// The values that keep a winning strategy at the current turn.
    pub fn winning_moves(&self, state: &SessionState) -> Result<BTreeSet<Value>, GameError> {
        self.current(state)?;
        self.moves_at(&state.values())
    }

    /// Would playing `value` now keep a winning strategy? Does not move.
    pub fn whatif(&self, state: &SessionState, variable: Option<&str>, value: Value) -> Result<bool, GameError> {
        let var = self.current(state)?;
        if let Some(name) = variable.filter(|&n| n != var.name) {
            return Err(GameError::WrongVariable { expected: var.name.clone(), found: name.into() });
        }
        Self::check_value(var, value)?;
        Ok(self.moves_at(&state.values())?.contains(&value))
    }

    fn apply(&self, state: &mut SessionState, value: Value, player: Player) -> Result<(), GameError> {
        let values = state.values();
        let on_base = self.moves_at(&values)?.contains(&value);
        let var = &self.binder()[values.len()];
        state.prefix.push(Move { variable: var.name.clone(), value, player, on_base });
        Ok(())
    }

    fn status(&self, state: &SessionState) -> Result<Status, GameError> {
        let binder = self.binder();
        let off_base = state.prefix.iter().zip(binder).any(|(m, v)| v.is_existential() && !m.on_base);
        if self.base.is_bottom() || off_base {
            return Ok(Status::Lost);
        }
        let values = state.values();
        if values.len() == binder.len() {
            return Ok(if self.problem.satisfied_by(&values) { Status::Won } else { Status::Lost });
        }
        if binder[values.len()].is_existential() && self.moves_at(&values)?.is_empty() {
            return Ok(Status::DrawnOffBase);
        }
        Ok(Status::Ongoing)
    }

    fn settle(&self, state: &mut SessionState) -> Result<(), GameError> {
        loop {
            state.status = self.status(state)?;
            state.turn = None;
            if state.status != Status::Ongoing {
                return Ok(());
            }
            let position = state.prefix.len();
            let var = &self.binder()[position];
            let player = if var.quantifier == state.human_role { Player::Human } else { Player::Engine };
            state.turn = Some(Turn { position, variable: var.name.clone(), quantifier: var.quantifier, player });
            if player == Player::Human {
                return Ok(());
            }
            let moves = self.moves_at(&state.values())?;
            let value = state.tie_break.pick(&moves).expect("status is ONGOING, so moves exist");
            self.apply(state, value, Player::Engine)?;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qcsp::fixtures::{loose_base, pstar};
    use qcsp::{compile, CompileOptions};

    fn start(base: &QcspBase, role: Quantifier) -> SessionState {
        let p = pstar();
        Game::new(&p, base).start("s".into(), "p".into(), "b".into(), role, TieBreak::Min).unwrap()
    }

    #[test]
    fn engine_opens_as_the_existential_player() {
        let (base, _) = compile(&pstar(), CompileOptions::default()).unwrap();
        let s = start(&base, Quantifier::Forall);
        assert_eq!(s.values(), vec![0, 0]);
        assert_eq!(s.turn.unwrap().variable, "z");
    }

    #[test]
    fn full_play_along_guards_is_won() {
        let p = pstar();
        let (base, _) = compile(&p, CompileOptions::default()).unwrap();
        let g = Game::new(&p, &base);
        let mut s = start(&base, Quantifier::Exists);
        g.play(&mut s, Some("x"), 2).unwrap();
        assert_eq!(g.winning_moves(&s).unwrap(), BTreeSet::from([0, 1]));
        assert_eq!(g.whatif(&s, Some("y"), 2), Ok(false));
        g.play(&mut s, None, 1).unwrap();
        // engine played z = 0, t must be 2
        assert_eq!(s.values(), vec![2, 1, 0]);
        assert_eq!(g.winning_moves(&s).unwrap(), BTreeSet::from([2]));
        g.play(&mut s, None, 2).unwrap();
        assert_eq!(s.status, Status::Won);
        assert_eq!(g.play(&mut s, None, 0), Err(GameError::GameOver(Status::Won)));
    }

    #[test]
    fn leaving_the_guards_loses() {
        let p = pstar();
        let (base, _) = compile(&p, CompileOptions::default()).unwrap();
        let g = Game::new(&p, &base);
        let mut s = start(&base, Quantifier::Exists);
        g.play(&mut s, None, 2).unwrap();
        g.play(&mut s, None, 2).unwrap();
        assert_eq!(s.status, Status::Lost);
        assert!(!s.prefix[1].on_base);
    }

    #[test]
    fn out_of_turn_and_domain() {
        let p = pstar();
        let (base, _) = compile(&p, CompileOptions::default()).unwrap();
        let g = Game::new(&p, &base);
        let mut s = start(&base, Quantifier::Forall);
        assert!(matches!(g.play(&mut s, None, 9), Err(GameError::ValueOutOfDomain { value: 9, .. })));
        assert!(matches!(g.play(&mut s, Some("t"), 0), Err(GameError::WrongVariable { .. })));
        let mut e = start(&base, Quantifier::Exists);
        g.play(&mut e, None, 0).unwrap();
        g.play(&mut e, None, 0).unwrap();
        // the engine took z, so the human is to play t
        assert_eq!(e.turn.as_ref().unwrap().variable, "t");
        assert_eq!(e.turn.unwrap().player, Player::Human);
    }

    #[test]
    fn bottom_is_lost_from_the_start() {
        let s = start(&QcspBase::Bottom, Quantifier::Exists);
        assert_eq!(s.status, Status::Lost);
        assert!(s.turn.is_none());
    }

    #[test]
    fn non_optimal_base_can_strand_the_game() {
        // the hand-written base guards every y, including dead ends
        let p = pstar();
        let base = loose_base();
        let g = Game::new(&p, &base);
        let mut s = g.start("s".into(), "p".into(), "b".into(), Quantifier::Forall, TieBreak::Max).unwrap();
        assert_eq!(s.values(), vec![2, 2]);
        g.play(&mut s, None, 2).unwrap();
        assert_eq!(s.status, Status::DrawnOffBase);
    }
}
