#pragma once

#include <memory>
#include <string>
#include <vector>

#include "delasp/error.hpp"

namespace delasp {

// Propositional atom. `prev` marks the previous-state copy of the atom,
// written 'p in the text formats.
struct Atom {
  std::string name;
  bool prev = false;

  bool operator==(const Atom& o) const { return prev == o.prev && name == o.name; }
  bool operator<(const Atom& o) const {
    if (prev != o.prev) return !prev;  // current-state atoms order first
    return name < o.name;
  }
  std::string str() const { return (prev ? "'" : "") + name; }
};

// Objective literal: an atom or its strong negation (-p). Distinct from both
// default negation (not p, encoded as p -> bot) and classical negation (~p).
struct Literal {
  Atom atom;
  bool strong_neg = false;

  bool operator==(const Literal& o) const {
    return strong_neg == o.strong_neg && atom == o.atom;
  }
  bool operator<(const Literal& o) const {
    if (atom == o.atom) return strong_neg < o.strong_neg;
    return atom < o.atom;
  }
  std::string str() const { return (strong_neg ? "-" : "") + atom.str(); }
};

// Formula AST. One node set serves both language layers:
//
//   rule layer (programs):  Falsum, Lit, And, Or, Implies, Belief, Know
//   query layer (checks):   Falsum, Lit, And, Or, Implies, ClassNeg, Know,
//                           Update, UpdateDual
//
// Surface sugar has no nodes: the parsers rewrite `not f` to f -> bot,
// `top` to bot -> bot (rule layer) or ~bot (query layer), `U p` to
// not p & not -p, and `O p` to its three-implication form at read time.
// `K(f)` is kept as a Know node: it is primitive in the query layer and an
// abbreviation in the rule layer (see expand_abbreviations).
enum class FormulaKind {
  Falsum,
  Lit,
  And,
  Or,
  Implies,
  ClassNeg,    // ~f, query layer only
  Belief,      // L(f), rule layer only
  Know,        // K(f)
  Update,      // [obj] f
  UpdateDual,  // <obj> f
};

class Formula;

struct FormulaNode {
  FormulaKind kind;
  Literal lit;              // Lit
  std::string object_id;    // Update, UpdateDual: registry binding name
  std::shared_ptr<const FormulaNode> a;  // first child
  std::shared_ptr<const FormulaNode> b;  // second child (And, Or, Implies)
};

// Immutable, shareable formula value with structural equality.
class Formula {
 public:
  Formula() = default;

  static Formula falsum();
  // top is layer dependent: bot -> bot in rules, ~bot in queries.
  static Formula verum_rule();
  static Formula verum_query();
  static Formula lit(Literal l);
  static Formula lit(std::string name, bool strong_neg = false, bool prev = false);
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula implies(Formula a, Formula b);
  static Formula neg_default(Formula a);  // a -> bot
  static Formula neg_class(Formula a);    // ~a
  static Formula belief(Formula a);       // L(a)
  static Formula know(Formula a);         // K(a)
  static Formula update(std::string object_id, Formula a);       // [o] a
  static Formula update_dual(std::string object_id, Formula a);  // <o> a

  // Folds over a possibly empty list: conj_all({}) is top for the rule layer.
  static Formula conj_all(const std::vector<Formula>& fs);
  static Formula disj_all(const std::vector<Formula>& fs);

  bool valid() const { return node_ != nullptr; }
  const FormulaNode& root() const { return *node_; }
  FormulaKind kind() const { return node_->kind; }
  Formula child_a() const { return Formula(node_->a); }
  Formula child_b() const { return Formula(node_->b); }

  // Structural equality. `key()` is the canonical serialization and doubles
  // as the ordering/hashing key everywhere determinism is required.
  bool operator==(const Formula& o) const;
  bool operator!=(const Formula& o) const { return !(*this == o); }
  std::string key() const;

 private:
  explicit Formula(std::shared_ptr<const FormulaNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const FormulaNode> node_;
  friend class FormulaBuilder;
};

// A finite set of formulas together with its declared signature split.
// `fluents`/`actions` hold current-state atom names; prev-state copies are
// implied for fluents. `inertial` records which fluents got frame rules at
// parse time (kept for round-trip serialization).
struct Theory {
  std::vector<Formula> formulas;
  std::vector<std::string> fluents;
  std::vector<std::string> actions;
  std::vector<std::string> inertial;
};

// Rewrites K(f) into f & L(f), recursively. All other sugar is already gone
// after parsing, so the result contains only rule-layer core nodes.
// Idempotent. Pre (checked): no query-layer nodes (ClassNeg, Update).
Formula expand_abbreviations(const Formula& f);
Theory expand_abbreviations(const Theory& t);

// Maps every atom p to its previous-state copy 'p, homomorphically.
// Pre (checked): the input contains no prev atoms already.
Formula prev_lift(const Formula& f);

// Maximal Belief-rooted subformulas of the expanded input, deduplicated
// structurally, in first-occurrence (preorder, left to right) order.
// Pre (checked): input contains no Know nodes (expand first).
std::vector<Formula> subjective_subformulas(const Formula& f);
std::vector<Formula> subjective_subformulas(const Theory& t);

// Collects every atom occurring in the formula, in canonical order.
void collect_atoms(const Formula& f, std::vector<Atom>& out);
std::vector<Atom> collect_atoms(const Theory& t);

// Layer validation. Rule layer: no ClassNeg, Update, UpdateDual (Know and
// Belief allowed). Query layer: no Belief. Both throw Error on violation.
void validate_rule_layer(const Formula& f);
void validate_query_layer(const Formula& f);

// True when the formula contains no Belief or Know node.
bool is_modality_free(const Formula& f);
bool is_modality_free(const Theory& t);

// True when the formula contains no Update or UpdateDual node.
bool is_dynamic_free(const Formula& f);

}  // namespace delasp
