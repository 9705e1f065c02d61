//! Problem model: quantified variables over finite integer domains and
//! table constraints.
//!
//! Input documents may carry arithmetic comparison constraints (`"expr"`);
//! validation expands every one of them into an equivalent table over its
//! scope, so a [`Problem`] only ever holds [`Table`] constraints.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::expr::Comparison;

/// Values carried by variables and constraint tuples.
pub type Value = i64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantifier {
    Exists,
    Forall,
}

impl Quantifier {
    pub fn symbol(self) -> &'static str {
        match self {
            Quantifier::Exists => "∃",
            Quantifier::Forall => "∀",
        }
    }
}

impl fmt::Display for Quantifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Quantifier::Exists => "exists",
            Quantifier::Forall => "forall",
        })
    }
}

/// A quantified variable. Its rank is its position in the binder.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    pub quantifier: Quantifier,
    pub domain: Vec<Value>,
}

impl Variable {
    pub fn new(name: impl Into<String>, quantifier: Quantifier, domain: impl IntoIterator<Item = Value>) -> Self {
        Variable { name: name.into(), quantifier, domain: domain.into_iter().collect() }
    }

    pub fn exists(name: impl Into<String>, domain: impl IntoIterator<Item = Value>) -> Self {
        Self::new(name, Quantifier::Exists, domain)
    }

    pub fn forall(name: impl Into<String>, domain: impl IntoIterator<Item = Value>) -> Self {
        Self::new(name, Quantifier::Forall, domain)
    }

    pub fn is_existential(&self) -> bool {
        self.quantifier == Quantifier::Exists
    }

    pub fn allows(&self, value: Value) -> bool {
        self.domain.binary_search(&value).is_ok()
    }
}

/// Constraint as written in a problem document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ConstraintDoc {
    Expr { text: String },
    Table { scope: Vec<String>, tuples: Vec<Vec<Value>> },
}

/// The JSON problem document. Variable order is binder order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemDoc {
    pub variables: Vec<Variable>,
    #[serde(default)]
    pub constraints: Vec<ConstraintDoc>,
}

/// A table constraint over binder positions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Table {
    pub scope: Vec<usize>,
    pub tuples: BTreeSet<Vec<Value>>,
}

impl Table {
    /// True iff every scope position is bound by `prefix`.
    pub fn is_ground(&self, prefix: &[Value]) -> bool {
        self.scope.iter().all(|&i| i < prefix.len())
    }

    /// Membership test for the projection of a (long enough) prefix.
    pub fn accepts(&self, prefix: &[Value]) -> bool {
        let tuple: Vec<Value> = self.scope.iter().map(|&i| prefix[i]).collect();
        self.tuples.contains(&tuple)
    }
}

/// A validated QCSP.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ProblemDoc", into = "ProblemDoc")]
pub struct Problem {
    variables: Vec<Variable>,
    constraints: Vec<Table>,
}

/// Bindings from variable names to values.
pub type Assignment = BTreeMap<String, Value>;

impl Problem {
    /// Builds a problem from already-validated parts. Domains are sorted and
    /// every check of [`validate_problem`] is applied.
    pub fn new(variables: Vec<Variable>, constraints: Vec<Table>) -> Result<Self, ModelError> {
        let variables = check_variables(variables)?;
        for (c, table) in constraints.iter().enumerate() {
            check_table(&variables, c, table)?;
        }
        Ok(Problem { variables, constraints })
    }

    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        let doc: ProblemDoc = serde_json::from_str(text).map_err(|e| ModelError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        validate_problem(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("problem documents always serialize")
    }

    pub fn to_doc(&self) -> ProblemDoc {
        ProblemDoc {
            variables: self.variables.clone(),
            constraints: self
                .constraints
                .iter()
                .map(|t| ConstraintDoc::Table {
                    scope: t.scope.iter().map(|&i| self.variables[i].name.clone()).collect(),
                    tuples: t.tuples.iter().cloned().collect(),
                })
                .collect(),
        }
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn variable(&self, index: usize) -> &Variable {
        &self.variables[index]
    }

    pub fn constraints(&self) -> &[Table] {
        &self.constraints
    }

    pub fn len(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name == name)
    }

    /// Same binder, constraints replaced.
    pub fn with_constraints(&self, constraints: Vec<Table>) -> Result<Self, ModelError> {
        Problem::new(self.variables.clone(), constraints)
    }

    /// True iff every constraint whose scope is bound by `prefix` holds.
    pub fn consistent(&self, prefix: &[Value]) -> bool {
        self.constraints.iter().all(|t| !t.is_ground(prefix) || t.accepts(prefix))
    }

    /// Evaluates a complete scenario given as values in binder order.
    pub fn satisfied_by(&self, scenario: &[Value]) -> bool {
        debug_assert_eq!(scenario.len(), self.len());
        self.constraints.iter().all(|t| t.accepts(scenario))
    }

    /// Converts a name-keyed assignment covering every variable into a
    /// scenario.
    pub fn scenario(&self, assignment: &Assignment) -> Result<Vec<Value>, ModelError> {
        if let Some(extra) = assignment.keys().find(|k| self.index_of(k).is_none()) {
            return Err(ModelError::UnknownVariable(extra.clone()));
        }
        self.variables
            .iter()
            .map(|v| {
                let value = *assignment.get(&v.name).ok_or_else(|| ModelError::IncompleteAssignment(v.name.clone()))?;
                if !v.allows(value) {
                    return Err(ModelError::ValueOutOfDomain { variable: v.name.clone(), value });
                }
                Ok(value)
            })
            .collect()
    }

    /// Human-readable binder, e.g. `∃x∃y∀z∃t`.
    pub fn binder_string(&self) -> String {
        binder_string(&self.variables)
    }
}

pub fn binder_string(variables: &[Variable]) -> String {
    variables.iter().map(|v| format!("{}{}", v.quantifier.symbol(), v.name)).collect()
}

impl TryFrom<ProblemDoc> for Problem {
    type Error = ModelError;

    fn try_from(doc: ProblemDoc) -> Result<Self, Self::Error> {
        validate_problem(doc)
    }
}

impl From<Problem> for ProblemDoc {
    fn from(p: Problem) -> Self {
        p.to_doc()
    }
}

/// Checks every structural invariant of a problem document and expands
/// expression constraints into tables.
pub fn validate_problem(doc: ProblemDoc) -> Result<Problem, ModelError> {
    let variables = check_variables(doc.variables)?;
    let positions: HashMap<&str, usize> = variables.iter().enumerate().map(|(i, v)| (v.name.as_str(), i)).collect();

    let mut constraints = Vec::with_capacity(doc.constraints.len());
    for (c, constraint) in doc.constraints.into_iter().enumerate() {
        let table = match constraint {
            ConstraintDoc::Table { scope, tuples } => {
                let scope = scope
                    .into_iter()
                    .map(|name| {
                        positions
                            .get(name.as_str())
                            .copied()
                            .ok_or(ModelError::UnknownVariableInScope { constraint: c, name })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let mut set = BTreeSet::new();
                for tuple in tuples {
                    if tuple.len() != scope.len() {
                        return Err(ModelError::ArityMismatch {
                            constraint: c,
                            expected: scope.len(),
                            found: tuple.len(),
                        });
                    }
                    set.insert(tuple);
                }
                Table { scope, tuples: set }
            }
            ConstraintDoc::Expr { text } => {
                let cmp = Comparison::parse(&text).map_err(|e| ModelError::Expr {
                    constraint: c,
                    column: e.column,
                    message: e.message,
                })?;
                expand_expr(&variables, &positions, c, &cmp)?
            }
        };
        check_table(&variables, c, &table)?;
        constraints.push(table);
    }
    Ok(Problem { variables, constraints })
}

fn check_variables(mut variables: Vec<Variable>) -> Result<Vec<Variable>, ModelError> {
    let mut seen = HashSet::new();
    for v in &mut variables {
        if !seen.insert(v.name.clone()) {
            return Err(ModelError::DuplicateVariable(v.name.clone()));
        }
        if v.domain.is_empty() {
            return Err(ModelError::EmptyDomain(v.name.clone()));
        }
        v.domain.sort_unstable();
        if let Some(w) = v.domain.windows(2).find(|w| w[0] == w[1]) {
            return Err(ModelError::DuplicateDomainValue { variable: v.name.clone(), value: w[0] });
        }
    }
    Ok(variables)
}

fn check_table(variables: &[Variable], c: usize, table: &Table) -> Result<(), ModelError> {
    if let Some(&bad) = table.scope.iter().find(|&&i| i >= variables.len()) {
        return Err(ModelError::UnknownVariableInScope { constraint: c, name: format!("#{bad}") });
    }
    for tuple in &table.tuples {
        if tuple.len() != table.scope.len() {
            return Err(ModelError::ArityMismatch { constraint: c, expected: table.scope.len(), found: tuple.len() });
        }
        for (&i, &value) in table.scope.iter().zip(tuple) {
            if !variables[i].allows(value) {
                return Err(ModelError::ValueOutOfDomain { variable: variables[i].name.clone(), value });
            }
        }
    }
    Ok(())
}

fn expand_expr(
    variables: &[Variable],
    positions: &HashMap<&str, usize>,
    c: usize,
    cmp: &Comparison,
) -> Result<Table, ModelError> {
    let mut scope = Vec::new();
    for name in cmp.names() {
        let &i = positions
            .get(name)
            .ok_or_else(|| ModelError::UnknownVariableInScope { constraint: c, name: name.to_string() })?;
        scope.push(i);
    }
    scope.sort_unstable();
    scope.dedup();

    let mut tuples = BTreeSet::new();
    let mut tuple = Vec::with_capacity(scope.len());
    let mut env = HashMap::with_capacity(scope.len());
    enumerate_product(variables, &scope, &mut tuple, &mut |t| {
        env.clear();
        for (&i, &value) in scope.iter().zip(t) {
            env.insert(variables[i].name.as_str(), value);
        }
        if cmp.holds(&|name| env[name]) {
            tuples.insert(t.to_vec());
        }
    });
    Ok(Table { scope, tuples })
}

fn enumerate_product(variables: &[Variable], scope: &[usize], tuple: &mut Vec<Value>, visit: &mut dyn FnMut(&[Value])) {
    if tuple.len() == scope.len() {
        visit(tuple);
        return;
    }
    for &value in &variables[scope[tuple.len()]].domain {
        tuple.push(value);
        enumerate_product(variables, scope, tuple, visit);
        tuple.pop();
    }
}

/// Evaluates a complete assignment against every constraint.
pub fn evaluate(p: &Problem, a: &Assignment) -> Result<bool, ModelError> {
    Ok(p.satisfied_by(&p.scenario(a)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pstar_doc() -> ProblemDoc {
        ProblemDoc {
            variables: vec![
                Variable::exists("x", [0, 1, 2]),
                Variable::exists("y", [0, 1, 2]),
                Variable::forall("z", [0, 1, 2]),
                Variable::exists("t", [0, 1, 2]),
            ],
            constraints: vec![ConstraintDoc::Expr { text: "x = y*z + t".into() }],
        }
    }

    fn assign(pairs: &[(&str, Value)]) -> Assignment {
        pairs.iter().map(|&(n, v)| (n.to_string(), v)).collect()
    }

    #[test]
    fn pstar_is_accepted_and_expanded() {
        let p = validate_problem(pstar_doc()).unwrap();
        assert_eq!(p.binder_string(), "∃x∃y∀z∃t");
        assert_eq!(p.constraints().len(), 1);
        let table = &p.constraints()[0];
        assert_eq!(table.scope, vec![0, 1, 2, 3]);
        // every tuple satisfies the arithmetic
        for t in &table.tuples {
            assert_eq!(t[0], t[1] * t[2] + t[3]);
        }
        let count = (0..3)
            .flat_map(|x| (0..3).flat_map(move |y| (0..3).flat_map(move |z| (0..3).map(move |t| (x, y, z, t)))))
            .filter(|&(x, y, z, t)| x == y * z + t)
            .count();
        assert_eq!(table.tuples.len(), count);
    }

    #[test]
    fn evaluate_examples() {
        let p = validate_problem(pstar_doc()).unwrap();
        assert!(evaluate(&p, &assign(&[("x", 0), ("y", 0), ("z", 2), ("t", 0)])).unwrap());
        assert!(!evaluate(&p, &assign(&[("x", 0), ("y", 1), ("z", 1), ("t", 0)])).unwrap());
        let err = evaluate(&p, &assign(&[("x", 0), ("y", 1)])).unwrap_err();
        assert!(matches!(err, ModelError::IncompleteAssignment(ref n) if n == "z"));
    }

    #[test]
    fn empty_constraint_set_accepts_everything() {
        let p = Problem::new(vec![Variable::forall("a", [0, 1]), Variable::exists("b", [3])], vec![]).unwrap();
        assert!(evaluate(&p, &assign(&[("a", 1), ("b", 3)])).unwrap());
    }

    #[test]
    fn empty_domain_is_rejected() {
        let mut doc = pstar_doc();
        doc.variables[3].domain.clear();
        assert!(matches!(validate_problem(doc), Err(ModelError::EmptyDomain(ref n)) if n == "t"));
    }

    #[test]
    fn arity_mismatch_is_rejected() {
        let mut doc = pstar_doc();
        doc.constraints =
            vec![ConstraintDoc::Table { scope: vec!["x".into(), "y".into()], tuples: vec![vec![0, 1, 2]] }];
        assert!(matches!(
            validate_problem(doc),
            Err(ModelError::ArityMismatch { constraint: 0, expected: 2, found: 3 })
        ));
    }

    #[test]
    fn duplicate_and_unknown_variables() {
        let mut doc = pstar_doc();
        doc.variables[1].name = "x".into();
        assert!(matches!(validate_problem(doc), Err(ModelError::DuplicateVariable(ref n)) if n == "x"));

        let mut doc = pstar_doc();
        doc.constraints = vec![ConstraintDoc::Expr { text: "x = w".into() }];
        assert!(matches!(
            validate_problem(doc),
            Err(ModelError::UnknownVariableInScope { ref name, .. }) if name == "w"
        ));
    }

    #[test]
    fn table_values_must_lie_in_domains() {
        let mut doc = pstar_doc();
        doc.constraints = vec![ConstraintDoc::Table { scope: vec!["x".into()], tuples: vec![vec![7]] }];
        assert!(matches!(validate_problem(doc), Err(ModelError::ValueOutOfDomain { value: 7, .. })));
    }

    #[test]
    fn domains_are_sorted() {
        let p = Problem::new(vec![Variable::exists("a", [2, 0, 1])], vec![]).unwrap();
        assert_eq!(p.variable(0).domain, vec![0, 1, 2]);
        let dup = Problem::new(vec![Variable::exists("a", [1, 1])], vec![]);
        assert!(matches!(dup, Err(ModelError::DuplicateDomainValue { value: 1, .. })));
    }

    #[test]
    fn json_round_trip_keeps_tables() {
        let p = validate_problem(pstar_doc()).unwrap();
        let back = Problem::from_json(&p.to_json()).unwrap();
        assert_eq!(p, back);
    }

    #[test]
    fn json_errors_carry_position() {
        let err = Problem::from_json("{\n  \"variables\": [,]\n}").unwrap_err();
        assert!(matches!(err, ModelError::Json { line: 2, .. }), "{err:?}");
    }
}
