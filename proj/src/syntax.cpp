#include "delasp/syntax.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace delasp {

namespace {

std::shared_ptr<const FormulaNode> make_node(FormulaNode n) {
  return std::make_shared<const FormulaNode>(std::move(n));
}

}  // namespace

Formula Formula::falsum() {
  return Formula(make_node({FormulaKind::Falsum, {}, {}, nullptr, nullptr}));
}

Formula Formula::verum_rule() { return implies(falsum(), falsum()); }

Formula Formula::verum_query() { return neg_class(falsum()); }

Formula Formula::lit(Literal l) {
  return Formula(make_node({FormulaKind::Lit, std::move(l), {}, nullptr, nullptr}));
}

Formula Formula::lit(std::string name, bool strong_neg, bool prev) {
  return lit(Literal{Atom{std::move(name), prev}, strong_neg});
}

Formula Formula::conj(Formula a, Formula b) {
  return Formula(make_node({FormulaKind::And, {}, {}, a.node_, b.node_}));
}

Formula Formula::disj(Formula a, Formula b) {
  return Formula(make_node({FormulaKind::Or, {}, {}, a.node_, b.node_}));
}

Formula Formula::implies(Formula a, Formula b) {
  return Formula(make_node({FormulaKind::Implies, {}, {}, a.node_, b.node_}));
}

Formula Formula::neg_default(Formula a) { return implies(std::move(a), falsum()); }

Formula Formula::neg_class(Formula a) {
  return Formula(make_node({FormulaKind::ClassNeg, {}, {}, a.node_, nullptr}));
}

Formula Formula::belief(Formula a) {
  return Formula(make_node({FormulaKind::Belief, {}, {}, a.node_, nullptr}));
}

Formula Formula::know(Formula a) {
  return Formula(make_node({FormulaKind::Know, {}, {}, a.node_, nullptr}));
}

Formula Formula::update(std::string object_id, Formula a) {
  return Formula(
      make_node({FormulaKind::Update, {}, std::move(object_id), a.node_, nullptr}));
}

Formula Formula::update_dual(std::string object_id, Formula a) {
  return Formula(
      make_node({FormulaKind::UpdateDual, {}, std::move(object_id), a.node_, nullptr}));
}

Formula Formula::conj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return verum_rule();
  Formula acc = fs[0];
  for (size_t i = 1; i < fs.size(); ++i) acc = conj(acc, fs[i]);
  return acc;
}

Formula Formula::disj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return falsum();
  Formula acc = fs[0];
  for (size_t i = 1; i < fs.size(); ++i) acc = disj(acc, fs[i]);
  return acc;
}

namespace {

// Precedence levels used by the canonical printer and mirrored by the parser:
// -> is 1 (right associative), | is 2, & is 3, prefixes and atoms are 4.
int prec(const FormulaNode& n) {
  switch (n.kind) {
    case FormulaKind::Implies:
      // f -> bot prints as the prefix form `not f`.
      return n.b && n.b->kind == FormulaKind::Falsum ? 4 : 1;
    case FormulaKind::Or:
      return 2;
    case FormulaKind::And:
      return 3;
    default:
      return 4;
  }
}

void print(const FormulaNode& n, std::string& out) {
  auto child = [&out](const FormulaNode& c, bool need_parens) {
    if (need_parens) {
      out += '(';
      print(c, out);
      out += ')';
    } else {
      print(c, out);
    }
  };
  switch (n.kind) {
    case FormulaKind::Falsum:
      out += "bot";
      return;
    case FormulaKind::Lit:
      out += n.lit.str();
      return;
    case FormulaKind::And:
      child(*n.a, prec(*n.a) < 3);
      out += " & ";
      child(*n.b, prec(*n.b) <= 3);
      return;
    case FormulaKind::Or:
      child(*n.a, prec(*n.a) < 2);
      out += " | ";
      child(*n.b, prec(*n.b) <= 2);
      return;
    case FormulaKind::Implies:
      if (n.b->kind == FormulaKind::Falsum) {
        out += "not ";
        child(*n.a, prec(*n.a) < 4);
        return;
      }
      child(*n.a, prec(*n.a) <= 1);
      out += " -> ";
      child(*n.b, false);
      return;
    case FormulaKind::ClassNeg:
      out += '~';
      child(*n.a, prec(*n.a) < 4);
      return;
    case FormulaKind::Belief:
      out += "L(";
      print(*n.a, out);
      out += ')';
      return;
    case FormulaKind::Know:
      out += "K(";
      print(*n.a, out);
      out += ')';
      return;
    case FormulaKind::Update:
      out += '[' + n.object_id + "] ";
      child(*n.a, prec(*n.a) < 4);
      return;
    case FormulaKind::UpdateDual:
      out += '<' + n.object_id + "> ";
      child(*n.a, prec(*n.a) < 4);
      return;
  }
}

bool equal(const FormulaNode* a, const FormulaNode* b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case FormulaKind::Lit:
      return a->lit == b->lit;
    case FormulaKind::Update:
    case FormulaKind::UpdateDual:
      if (a->object_id != b->object_id) return false;
      break;
    default:
      break;
  }
  return equal(a->a.get(), b->a.get()) && equal(a->b.get(), b->b.get());
}

}  // namespace

bool Formula::operator==(const Formula& o) const {
  return equal(node_.get(), o.node_.get());
}

std::string Formula::key() const {
  std::string out;
  if (node_) print(*node_, out);
  return out;
}

namespace {

Formula rebuild(const Formula& f, Formula a, Formula b) {
  switch (f.kind()) {
    case FormulaKind::And:
      return Formula::conj(std::move(a), std::move(b));
    case FormulaKind::Or:
      return Formula::disj(std::move(a), std::move(b));
    case FormulaKind::Implies:
      return Formula::implies(std::move(a), std::move(b));
    case FormulaKind::ClassNeg:
      return Formula::neg_class(std::move(a));
    case FormulaKind::Belief:
      return Formula::belief(std::move(a));
    case FormulaKind::Know:
      return Formula::know(std::move(a));
    case FormulaKind::Update:
      return Formula::update(f.root().object_id, std::move(a));
    case FormulaKind::UpdateDual:
      return Formula::update_dual(f.root().object_id, std::move(a));
    default:
      return f;
  }
}

}  // namespace

Formula expand_abbreviations(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Falsum:
    case FormulaKind::Lit:
      return f;
    case FormulaKind::ClassNeg:
    case FormulaKind::Update:
    case FormulaKind::UpdateDual:
      throw Error("expand_abbreviations: query-layer connective in rule-layer formula: " +
                  f.key());
    case FormulaKind::Know: {
      Formula inner = expand_abbreviations(f.child_a());
      return Formula::conj(inner, Formula::belief(inner));
    }
    case FormulaKind::Belief:
      return Formula::belief(expand_abbreviations(f.child_a()));
    default: {
      Formula a = expand_abbreviations(f.child_a());
      Formula b = expand_abbreviations(f.child_b());
      return rebuild(f, std::move(a), std::move(b));
    }
  }
}

Theory expand_abbreviations(const Theory& t) {
  Theory out = t;
  for (auto& f : out.formulas) f = expand_abbreviations(f);
  return out;
}

Formula prev_lift(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Falsum:
      return f;
    case FormulaKind::Lit: {
      Literal l = f.root().lit;
      if (l.atom.prev)
        throw Error("prev_lift: input already refers to the previous state: " + l.str());
      l.atom.prev = true;
      return Formula::lit(l);
    }
    case FormulaKind::ClassNeg:
    case FormulaKind::Update:
    case FormulaKind::UpdateDual:
      throw Error("prev_lift: query-layer connective in rule-layer formula: " + f.key());
    case FormulaKind::Belief:
      return Formula::belief(prev_lift(f.child_a()));
    case FormulaKind::Know:
      return Formula::know(prev_lift(f.child_a()));
    default:
      return rebuild(f, prev_lift(f.child_a()), prev_lift(f.child_b()));
  }
}

namespace {

void collect_subjective(const Formula& f, std::vector<Formula>& out,
                        std::set<std::string>& seen) {
  switch (f.kind()) {
    case FormulaKind::Falsum:
    case FormulaKind::Lit:
      return;
    case FormulaKind::Know:
      throw Error("subjective_subformulas: expand K before collecting: " + f.key());
    case FormulaKind::Belief:
      // Maximal: nested L subformulas belong to this subtree, do not descend.
      if (seen.insert(f.key()).second) out.push_back(f);
      return;
    case FormulaKind::ClassNeg:
    case FormulaKind::Update:
    case FormulaKind::UpdateDual:
      collect_subjective(f.child_a(), out, seen);
      return;
    default:
      collect_subjective(f.child_a(), out, seen);
      collect_subjective(f.child_b(), out, seen);
      return;
  }
}

}  // namespace

std::vector<Formula> subjective_subformulas(const Formula& f) {
  std::vector<Formula> out;
  std::set<std::string> seen;
  collect_subjective(f, out, seen);
  return out;
}

std::vector<Formula> subjective_subformulas(const Theory& t) {
  std::vector<Formula> out;
  std::set<std::string> seen;
  for (const auto& f : t.formulas) collect_subjective(f, out, seen);
  return out;
}

void collect_atoms(const Formula& f, std::vector<Atom>& out) {
  switch (f.kind()) {
    case FormulaKind::Falsum:
      return;
    case FormulaKind::Lit:
      out.push_back(f.root().lit.atom);
      return;
    case FormulaKind::ClassNeg:
    case FormulaKind::Belief:
    case FormulaKind::Know:
    case FormulaKind::Update:
    case FormulaKind::UpdateDual:
      collect_atoms(f.child_a(), out);
      return;
    default:
      collect_atoms(f.child_a(), out);
      collect_atoms(f.child_b(), out);
      return;
  }
}

std::vector<Atom> collect_atoms(const Theory& t) {
  std::vector<Atom> out;
  for (const auto& f : t.formulas) collect_atoms(f, out);
  for (const auto& n : t.fluents) out.push_back(Atom{n, false});
  for (const auto& n : t.actions) out.push_back(Atom{n, false});
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void validate_rule_layer(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Falsum:
    case FormulaKind::Lit:
      return;
    case FormulaKind::ClassNeg:
      throw Error("classical negation is not part of the rule layer: " + f.key());
    case FormulaKind::Update:
    case FormulaKind::UpdateDual:
      throw Error("update modalities are not part of the rule layer: " + f.key());
    case FormulaKind::Belief:
    case FormulaKind::Know:
      validate_rule_layer(f.child_a());
      return;
    default:
      validate_rule_layer(f.child_a());
      validate_rule_layer(f.child_b());
      return;
  }
}

void validate_query_layer(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Falsum:
    case FormulaKind::Lit:
      return;
    case FormulaKind::Belief:
      throw Error("belief modality is not part of the query layer: " + f.key());
    case FormulaKind::ClassNeg:
    case FormulaKind::Know:
    case FormulaKind::Update:
    case FormulaKind::UpdateDual:
      validate_query_layer(f.child_a());
      return;
    default:
      validate_query_layer(f.child_a());
      validate_query_layer(f.child_b());
      return;
  }
}

bool is_modality_free(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Falsum:
    case FormulaKind::Lit:
      return true;
    case FormulaKind::Belief:
    case FormulaKind::Know:
      return false;
    case FormulaKind::ClassNeg:
    case FormulaKind::Update:
    case FormulaKind::UpdateDual:
      return is_modality_free(f.child_a());
    default:
      return is_modality_free(f.child_a()) && is_modality_free(f.child_b());
  }
}

bool is_modality_free(const Theory& t) {
  for (const auto& f : t.formulas)
    if (!is_modality_free(f)) return false;
  return true;
}

bool is_dynamic_free(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Falsum:
    case FormulaKind::Lit:
      return true;
    case FormulaKind::Update:
    case FormulaKind::UpdateDual:
      return false;
    case FormulaKind::ClassNeg:
    case FormulaKind::Belief:
    case FormulaKind::Know:
      return is_dynamic_free(f.child_a());
    default:
      return is_dynamic_free(f.child_a()) && is_dynamic_free(f.child_b());
  }
}

}  // namespace delasp
