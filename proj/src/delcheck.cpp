#include "delasp/delcheck.hpp"

#include <utility>

#include "delasp/error.hpp"
#include "delasp/textio.hpp"

namespace delasp {

namespace {

// Content fingerprint used to allow repeated identical bindings (plan
// translation re-registers the same theory object for every occurrence of
// an action) while rejecting a rebind that silently changes meaning.
std::string theory_fingerprint(const Theory& t, const std::vector<std::string>& asserts) {
  std::string out = serialize_program(t);
  for (const auto& a : asserts) {
    out += '+';
    out += a;
  }
  return out;
}

std::string event_fingerprint(const EventModel& e, const std::optional<std::string>& point) {
  std::string out = serialize_event_model(e);
  if (point) {
    out += '@';
    out += *point;
  }
  return out;
}

}  // namespace

void EvaluationRegistry::bind_theory(const std::string& id, Theory theory,
                                     std::vector<std::string> asserts) {
  if (id.empty()) throw Error("updating object binding needs a nonempty name");
  for (const auto& f : theory.formulas) validate_rule_layer(f);
  for (const auto& a : asserts) {
    bool declared = false;
    for (const auto& name : theory.actions) declared = declared || name == a;
    if (!declared)
      throw Error("assertion '" + a + "' is not a declared action of the theory bound as '" +
                  id + "'");
  }
  if (events_.count(id))
    throw Error("'" + id + "' is already bound to an event model");
  auto it = theories_.find(id);
  if (it != theories_.end()) {
    if (theory_fingerprint(it->second.theory, it->second.asserts) !=
        theory_fingerprint(theory, asserts))
      throw Error("'" + id + "' is already bound to a different theory");
    return;
  }
  theories_.emplace(id, TheoryBinding{std::move(theory), std::move(asserts)});
}

void EvaluationRegistry::bind_event(const std::string& id, EventModel model,
                                    std::optional<std::string> point) {
  if (id.empty()) throw Error("updating object binding needs a nonempty name");
  model.validate();
  if (!point) point = model.point;
  if (point && model.event_index(*point) < 0)
    throw Error("point '" + *point + "' is not an event of the model bound as '" + id + "'");
  if (theories_.count(id))
    throw Error("'" + id + "' is already bound to a theory");
  auto it = events_.find(id);
  if (it != events_.end()) {
    if (event_fingerprint(it->second.model, it->second.point) !=
        event_fingerprint(model, point))
      throw Error("'" + id + "' is already bound to a different event model");
    return;
  }
  events_.emplace(id, EventBinding{std::move(model), std::move(point)});
}

bool EvaluationRegistry::has(const std::string& id) const {
  return theories_.count(id) != 0 || events_.count(id) != 0;
}

std::shared_ptr<const UpdateResult> EvaluationRegistry::update(const std::string& id,
                                                               const EpistemicModel& m,
                                                               const Caps& caps) {
  auto ti = theories_.find(id);
  auto ei = events_.find(id);
  if (ti == theories_.end() && ei == events_.end())
    throw Error("no updating object is bound as '" + id + "'");

  std::pair<std::string, std::string> key{serialize_model(m), id};
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto hit = memo_.find(key);
    if (hit != memo_.end()) return hit->second;
  }

  // Computed outside the lock; a concurrent duplicate computation is
  // harmless because both produce the same value for the same key.
  auto result = std::make_shared<UpdateResult>();
  if (ti != theories_.end()) {
    Theory t = ti->second.theory;
    for (const auto& a : ti->second.asserts) t.formulas.push_back(Formula::lit(a));
    *result = asp_update(m, t, t.fluents, caps);
  } else {
    *result = event_product_update(m, ei->second.model);
    if (ei->second.point) {
      // A pointed binding keeps only the edge into the designated event, so
      // worlds where its precondition fails have no successor.
      const std::string& p = *ei->second.point;
      std::vector<std::pair<std::string, std::string>> kept;
      for (auto& entry : result->relation)
        if (entry.second == "(" + entry.first + "," + p + ")") kept.push_back(entry);
      result->relation = std::move(kept);
    }
  }

  std::lock_guard<std::mutex> lock(mu_);
  auto [pos, inserted] = memo_.emplace(std::move(key), std::move(result));
  return pos->second;
}

namespace {

bool eval(const EpistemicModel& m, int world, const Formula& f, EvaluationRegistry& reg,
          const Caps& caps) {
  switch (f.kind()) {
    case FormulaKind::Falsum:
      return false;
    case FormulaKind::Lit: {
      const Literal& l = f.root().lit;
      int i = m.sig->require(l.atom);
      return m.worlds[world].val.has(i, l.strong_neg);
    }
    case FormulaKind::And:
      return eval(m, world, f.child_a(), reg, caps) && eval(m, world, f.child_b(), reg, caps);
    case FormulaKind::Or:
      return eval(m, world, f.child_a(), reg, caps) || eval(m, world, f.child_b(), reg, caps);
    case FormulaKind::Implies:
      return !eval(m, world, f.child_a(), reg, caps) || eval(m, world, f.child_b(), reg, caps);
    case FormulaKind::ClassNeg:
      return !eval(m, world, f.child_a(), reg, caps);
    case FormulaKind::Know: {
      int c = m.cell_of(world);
      for (int w : m.cells[c])
        if (!eval(m, w, f.child_a(), reg, caps)) return false;
      return true;
    }
    case FormulaKind::Update: {
      auto ur = reg.update(f.root().object_id, m, caps);
      if (!ur->defined) return false;
      const std::string& wid = m.worlds[world].id;
      for (const auto& [src, tgt] : ur->relation) {
        if (src != wid) continue;
        int t = ur->model.world_index(tgt);
        if (t < 0) throw Error("update relation names a world absent from its result");
        if (!eval(ur->model, t, f.child_a(), reg, caps)) return false;
      }
      return true;
    }
    case FormulaKind::UpdateDual: {
      Formula boxed = Formula::update(f.root().object_id, Formula::neg_class(f.child_a()));
      return !eval(m, world, boxed, reg, caps);
    }
    case FormulaKind::Belief:
      break;
  }
  throw Error("L is a rule-layer operator; queries range over K and updates");
}

void check_query(const EpistemicModel& m, const Formula& f) {
  if (!f.valid()) throw Error("empty formula");
  validate_query_layer(f);
  if (m.flavor != ValFlavor::Classical)
    throw Error("dynamic checking needs a classical model");
}

}  // namespace

bool del_satisfies(const EpistemicModel& m, int world, const Formula& f,
                   EvaluationRegistry& reg, const Caps& caps) {
  check_query(m, f);
  if (world < 0 || world >= static_cast<int>(m.worlds.size()))
    throw Error("world index out of range");
  return eval(m, world, f, reg, caps);
}

bool del_models(const EpistemicModel& m, const Formula& f, EvaluationRegistry& reg,
                const Caps& caps) {
  check_query(m, f);
  for (int w = 0; w < static_cast<int>(m.worlds.size()); ++w)
    if (!eval(m, w, f, reg, caps)) return false;
  return true;
}

bool entails_over(const std::vector<EpistemicModel>& models, const Formula& f,
                  EvaluationRegistry& reg, const Caps& caps) {
  for (const auto& m : models)
    if (!del_models(m, f, reg, caps)) return false;
  return true;
}

}  // namespace delasp
