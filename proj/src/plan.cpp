#include "delasp/plan.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <utility>

#include "delasp/delcheck.hpp"
#include "delasp/textio.hpp"
#include "delasp/worldview.hpp"

namespace delasp {

namespace {

void require_objective(const Formula& f, const char* what) {
  if (!f.valid()) throw Error(std::string(what) + " is empty");
  validate_query_layer(f);
  if (!is_modality_free(f) || !is_dynamic_free(f))
    throw Error(std::string(what) + " must be an objective formula");
}

std::string branch_str(const Plan& p) {
  if (p.units.empty()) return "skip";
  if (p.units.size() == 1 && p.units[0].is_action()) return p.units[0].action;
  return "(" + p.str() + ")";
}

}  // namespace

Plan Plan::action(std::string name) {
  if (name.empty()) throw Error("action step needs a name");
  Plan p;
  p.units.push_back(Unit{std::move(name), Formula(), nullptr, nullptr});
  return p;
}

Plan Plan::seq(std::vector<Plan> parts) {
  Plan p;
  for (auto& part : parts)
    for (auto& u : part.units) p.units.push_back(std::move(u));
  return p;
}

Plan Plan::if_know(Formula cond, Plan then_branch, Plan else_branch) {
  require_objective(cond, "plan condition");
  Plan p;
  p.units.push_back(Unit{"", std::move(cond),
                         std::make_shared<const Plan>(std::move(then_branch)),
                         std::make_shared<const Plan>(std::move(else_branch))});
  return p;
}

int Plan::length() const {
  int n = 0;
  for (const Unit& u : units)
    n += u.is_action() ? 1 : std::max(u.then_branch->length(), u.else_branch->length());
  return n;
}

int Plan::conditionals() const {
  int n = 0;
  for (const Unit& u : units)
    if (!u.is_action()) n += 1 + u.then_branch->conditionals() + u.else_branch->conditionals();
  return n;
}

std::string Plan::str() const {
  if (units.empty()) return "skip";
  std::string out;
  for (const Unit& u : units) {
    if (!out.empty()) out += "; ";
    if (u.is_action()) {
      out += u.action;
    } else {
      out += "if K(" + formula_str(u.cond) + ") then " + branch_str(*u.then_branch) +
             " else " + branch_str(*u.else_branch);
    }
  }
  return out;
}

void PlanningTask::validate() const {
  auto check_names = [](const std::vector<std::string>& names, const char* what) {
    auto sorted = names;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw Error(std::string(what) + " list repeats a name");
    for (const auto& n : sorted)
      if (n.empty()) throw Error(std::string(what) + " list holds an empty name");
  };
  check_names(fluents, "fluent");
  check_names(actions, "action");
  for (const auto& a : actions)
    if (std::find(fluents.begin(), fluents.end(), a) != fluents.end())
      throw Error("'" + a + "' is declared both fluent and action");

  auto is_fluent = [&](const std::string& n) {
    return std::find(fluents.begin(), fluents.end(), n) != fluents.end();
  };
  auto is_action = [&](const std::string& n) {
    return std::find(actions.begin(), actions.end(), n) != actions.end();
  };

  for (const Formula& f : init.formulas) validate_rule_layer(f);
  for (const Atom& a : collect_atoms(init)) {
    if (a.prev || !is_fluent(a.name))
      throw Error("initial theory mentions " + a.str() +
                  "; it may speak only about current-state fluents");
  }

  for (const Formula& f : transition.formulas) validate_rule_layer(f);
  for (const Atom& a : collect_atoms(transition)) {
    bool ok = a.prev ? is_fluent(a.name) : is_fluent(a.name) || is_action(a.name);
    if (!ok) throw Error("transition theory mentions undeclared atom " + a.str());
  }

  require_objective(goal, "goal");
  for (const Atom& a : [&] {
         std::vector<Atom> out;
         collect_atoms(goal, out);
         return out;
       }()) {
    if (a.prev || !is_fluent(a.name))
      throw Error("goal mentions " + a.str() + "; it may speak only about fluents");
  }
}

namespace {

Formula translate_units(const std::vector<Plan::Unit>& units, const Theory& transition,
                        const std::vector<std::string>& actions, Formula rest,
                        EvaluationRegistry& reg) {
  for (auto it = units.rbegin(); it != units.rend(); ++it) {
    const Plan::Unit& u = *it;
    if (u.is_action()) {
      if (std::find(actions.begin(), actions.end(), u.action) == actions.end())
        throw Error("plan uses undeclared action '" + u.action + "'");
      reg.bind_theory(u.action, transition, {u.action});
      rest = Formula::conj(Formula::update_dual(u.action, Formula::verum_query()),
                           Formula::update(u.action, rest));
    } else {
      Formula t = translate_units(u.then_branch->units, transition, actions, rest, reg);
      Formula e = translate_units(u.else_branch->units, transition, actions, rest, reg);
      Formula know = Formula::know(u.cond);
      rest = Formula::conj(Formula::implies(know, std::move(t)),
                           Formula::implies(Formula::neg_class(know), std::move(e)));
    }
  }
  return rest;
}

}  // namespace

Formula translate(const Plan& plan, const Theory& transition,
                  const std::vector<std::string>& actions, const Formula& goal,
                  EvaluationRegistry& reg) {
  if (!goal.valid()) throw Error("translation needs a goal formula");
  validate_query_layer(goal);
  return translate_units(plan.units, transition, actions, goal, reg);
}

namespace {

std::vector<Atom> fluent_atoms(const std::vector<std::string>& fluents) {
  std::vector<Atom> out;
  out.reserve(fluents.size());
  for (const auto& n : fluents) out.push_back(Atom{n, false});
  return out;
}

ModResult initial_model(const PlanningTask& task, const Caps& caps) {
  ModResult init = mod(task.init, fluent_atoms(task.fluents), caps);
  if (!init.defined)
    throw UndefinedInitialState(
        "the initial theory has no world view deciding every fluent");
  return init;
}

// Enumerates every unit sequence whose action length and conditional count
// hit the given totals exactly. Branch plans are materialized through
// `lists`; the top level streams candidates to the sink, so the large
// buckets never sit in memory at once.
class PlanSpace {
 public:
  PlanSpace(std::vector<std::string> actions, std::vector<Formula> pool)
      : actions_(std::move(actions)), pool_(std::move(pool)) {
    std::sort(actions_.begin(), actions_.end());
  }

  void for_each(int len, int cond, const std::function<void(const Plan&)>& sink) {
    std::vector<Plan::Unit> prefix;
    emit(len, cond, prefix, sink);
  }

 private:
  static constexpr int kMaxMaterialized = 200000;

  const std::vector<std::shared_ptr<const Plan>>& list(int len, int cond) {
    auto key = std::make_pair(len, cond);
    auto it = lists_.find(key);
    if (it != lists_.end()) return it->second;
    std::vector<std::shared_ptr<const Plan>> out;
    std::vector<Plan::Unit> prefix;
    emit(len, cond, prefix, [&](const Plan& p) {
      materialized_++;
      if (materialized_ > kMaxMaterialized)
        throw CapExceeded("conditional branch space is too large; tighten the search caps");
      out.push_back(std::make_shared<const Plan>(p));
    });
    return lists_.emplace(key, std::move(out)).first->second;
  }

  void emit(int len, int cond, std::vector<Plan::Unit>& prefix,
            const std::function<void(const Plan&)>& sink) {
    if (len == 0 && cond == 0) {
      Plan p;
      p.units = prefix;
      sink(p);
      return;
    }
    if (len > 0) {
      for (const auto& a : actions_) {
        prefix.push_back(Plan::Unit{a, Formula(), nullptr, nullptr});
        emit(len - 1, cond, prefix, sink);
        prefix.pop_back();
      }
    }
    if (cond > 0) {
      for (const Formula& c : pool_) emit_conditionals(len, cond, c, prefix, sink);
    }
  }

  // One conditional unit consuming `used` of the conditional budget and a
  // branch length of exactly `ulen`, followed by the rest of the sequence.
  void emit_conditionals(int len, int cond, const Formula& c,
                         std::vector<Plan::Unit>& prefix,
                         const std::function<void(const Plan&)>& sink) {
    for (int used = 1; used <= cond; ++used) {
      for (int c1 = 0; c1 <= used - 1; ++c1) {
        int c2 = used - 1 - c1;
        for (int ulen = 0; ulen <= len; ++ulen) {
          for (int l1 = 0; l1 <= ulen; ++l1) {
            for (int l2 = 0; l2 <= ulen; ++l2) {
              if (std::max(l1, l2) != ulen) continue;
              const auto& thens = list(l1, c1);
              const auto& elses = list(l2, c2);
              for (const auto& t : thens) {
                for (const auto& e : elses) {
                  prefix.push_back(Plan::Unit{"", c, t, e});
                  emit(len - ulen, cond - used, prefix, sink);
                  prefix.pop_back();
                }
              }
            }
          }
        }
      }
    }
  }

  std::vector<std::string> actions_;
  std::vector<Formula> pool_;
  std::map<std::pair<int, int>, std::vector<std::shared_ptr<const Plan>>> lists_;
  int materialized_ = 0;
};

}  // namespace

bool is_solution(const PlanningTask& task, const Plan& plan, EvaluationRegistry& reg,
                 const Caps& caps) {
  task.validate();
  ModResult init = initial_model(task, caps);
  Formula f = translate(plan, task.transition, task.actions, task.goal, reg);
  return del_models(init.model, f, reg, caps);
}

std::optional<Plan> search(const PlanningTask& task, const SearchCaps& scaps,
                           EvaluationRegistry& reg, const Caps& caps) {
  task.validate();
  if (scaps.max_actions < 0 || scaps.max_conditionals < 0)
    throw Error("search caps must be nonnegative");
  ModResult init = initial_model(task, caps);

  std::vector<Formula> pool = scaps.condition_pool;
  if (pool.empty()) {
    for (const auto& f : task.fluents) {
      pool.push_back(Formula::lit(f));
      pool.push_back(Formula::lit(f, true));
    }
  } else {
    for (const Formula& c : pool) require_objective(c, "search pool condition");
  }

  PlanSpace space(task.actions, pool);
  // Buckets ordered by action length, then conditional count; inside one
  // bucket the winner is the lexicographically least solution, found by
  // testing only candidates that still precede the best one seen.
  for (int len = 0; len <= scaps.max_actions; ++len) {
    for (int cond = 0; cond <= scaps.max_conditionals; ++cond) {
      std::optional<Plan> best;
      std::string best_str;
      space.for_each(len, cond, [&](const Plan& p) {
        std::string s = p.str();
        if (best && best_str <= s) return;
        Formula f = translate(p, task.transition, task.actions, task.goal, reg);
        if (del_models(init.model, f, reg, caps)) {
          best = p;
          best_str = std::move(s);
        }
      });
      if (best) return best;
    }
  }
  return std::nullopt;
}

}  // namespace delasp
