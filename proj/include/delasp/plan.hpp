#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "delasp/config.hpp"
#include "delasp/error.hpp"
#include "delasp/model.hpp"
#include "delasp/syntax.hpp"

namespace delasp {

class EvaluationRegistry;

// Plan over action names with knowledge-conditional branching. A plan is a
// flattened sequence of units; the empty sequence is `skip`. Units are either
// a single action or `if K(cond) then P1 else P2` with objective `cond`.
struct Plan {
  struct Unit {
    std::string action;  // nonempty iff this unit is an action step
    Formula cond;        // valid iff this unit is a conditional
    std::shared_ptr<const Plan> then_branch;
    std::shared_ptr<const Plan> else_branch;

    bool is_action() const { return !action.empty(); }
  };
  std::vector<Unit> units;

  static Plan skip() { return {}; }
  static Plan action(std::string name);
  static Plan seq(std::vector<Plan> parts);  // flattens nested sequences
  static Plan if_know(Formula cond, Plan then_branch, Plan else_branch);

  // Plan length counts action steps; a conditional counts as the longer of
  // its branches. Conditionals are counted across all nesting levels.
  int length() const;
  int conditionals() const;

  // Canonical rendering, e.g. "move; if K(r) then take_right else take_left".
  std::string str() const;

  bool operator==(const Plan& o) const { return str() == o.str(); }
};

// Planning task: an initial theory over fluents, a transition theory over the
// previous/current signature plus actions, and an objective goal.
struct PlanningTask {
  Theory init;
  Theory transition;
  Formula goal;
  std::vector<std::string> fluents;
  std::vector<std::string> actions;

  void validate() const;  // throws Error on layer or signature violations
};

// Rewrites the plan into a dynamic formula ending in `goal`:
//   action a      -> <G+a> top & [G+a] rest
//   skip          -> rest
//   if c t else e -> (K(c) -> translated t) & (~K(c) -> translated e)
// Theory-with-assertion objects are registered in `reg` under the action
// name; repeated registration with the same content is allowed.
Formula translate(const Plan& plan, const Theory& transition,
                  const std::vector<std::string>& actions, const Formula& goal,
                  EvaluationRegistry& reg);

// Thrown by is_solution when the initial theory has no classical world-view
// set over the fluents, which is reported distinctly from "not a solution".
struct UndefinedInitialState : Error {
  using Error::Error;
};

bool is_solution(const PlanningTask& task, const Plan& plan, EvaluationRegistry& reg,
                 const Caps& caps = {});

struct SearchCaps {
  int max_actions = 4;
  int max_conditionals = 1;
  // Objective condition pool for IfK units; empty means the default pool of
  // f and -f for every task fluent.
  std::vector<Formula> condition_pool;
};

// Bounded generate-and-test search: candidates ordered by (length,
// conditional count, canonical text); the first plan passing is_solution
// wins. Returns nothing when the space is exhausted.
std::optional<Plan> search(const PlanningTask& task, const SearchCaps& scaps,
                           EvaluationRegistry& reg, const Caps& caps = {});

}  // namespace delasp
