#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <optional>
#include <string>
#include <vector>

#include "delasp/delcheck.hpp"
#include "delasp/plan.hpp"
#include "delasp/syntax.hpp"
#include "delasp/textio.hpp"
#include "support.hpp"

using namespace delasp;

namespace {

PlanningTask corpus_task(const std::string& name) {
  return load_task(testsup::corpus_file(name));
}

Plan corpus_plan(const std::string& name) {
  return load_plan(testsup::corpus_file(name));
}

}  // namespace

TEST_CASE("plan algebra and rendering") {
  CHECK(Plan::skip().str() == "skip");
  CHECK(Plan::skip().length() == 0);
  CHECK(Plan::action("move").str() == "move");
  CHECK_THROWS_AS(Plan::action(""), Error);

  Plan seq = Plan::seq({Plan::action("move"),
                        Plan::seq({Plan::action("flick"), Plan::action("move")})});
  CHECK(seq.units.size() == 3);
  CHECK(seq.str() == "move; flick; move");
  CHECK(seq.length() == 3);
  CHECK(seq.conditionals() == 0);

  Plan cond = Plan::if_know(Formula::lit("r"), Plan::action("take_right"),
                            Plan::seq({Plan::action("take_left"), Plan::action("move")}));
  CHECK(cond.str() == "if K(r) then take_right else (take_left; move)");
  CHECK(cond.length() == 2);
  CHECK(cond.conditionals() == 1);

  Plan nested = Plan::if_know(Formula::lit("r"), cond, Plan::skip());
  CHECK(nested.conditionals() == 2);
  CHECK(nested.length() == 2);
  CHECK(nested.str() ==
        "if K(r) then (if K(r) then take_right else (take_left; move)) else skip");

  CHECK(Plan::seq({cond, Plan::action("move")}).length() == 3);
  CHECK(parse_plan(nested.str()) == nested);

  // Conditions are objective: no modal or dynamic operators.
  CHECK_THROWS_AS(Plan::if_know(Formula::know(Formula::lit("r")), Plan::skip(),
                                Plan::skip()), Error);
}

TEST_CASE("translation produces the executability-guarded chain") {
  PlanningTask task = corpus_task("simple.task");
  EvaluationRegistry reg;

  CHECK(translate(Plan::skip(), task.transition, task.actions, task.goal, reg) ==
        task.goal);

  Formula one = translate(Plan::action("move"), task.transition, task.actions,
                          task.goal, reg);
  Formula expect_one =
      Formula::conj(Formula::update_dual("move", Formula::verum_query()),
                    Formula::update("move", task.goal));
  CHECK(one == expect_one);
  CHECK(reg.has("move"));
  CHECK(!reg.has("flick"));

  Formula two = translate(Plan::seq({Plan::action("flick"), Plan::action("move")}),
                          task.transition, task.actions, task.goal, reg);
  CHECK(two == Formula::conj(Formula::update_dual("flick", Formula::verum_query()),
                             Formula::update("flick", expect_one)));

  Formula branch = translate(
      Plan::if_know(Formula::lit("r"), Plan::action("move"), Plan::skip()),
      task.transition, task.actions, task.goal, reg);
  Formula know = Formula::know(Formula::lit("r"));
  CHECK(branch == Formula::conj(Formula::implies(know, expect_one),
                                Formula::implies(Formula::neg_class(know), task.goal)));

  CHECK_THROWS_AS(translate(Plan::action("dig"), task.transition, task.actions,
                            task.goal, reg), Error);
}

TEST_CASE("the three corpus plans solve their tasks") {
  // Tasks with different transition theories need their own registries,
  // since binding names are the action names.
  EvaluationRegistry pink_reg;
  CHECK(is_solution(corpus_task("pink.task"), corpus_plan("cond.plan"), pink_reg));
  CHECK(is_solution(corpus_task("simple.task"), corpus_plan("conformant.plan"),
                    pink_reg));
  EvaluationRegistry try_reg;
  CHECK(is_solution(corpus_task("try.task"), corpus_plan("try.plan"), try_reg));
}

TEST_CASE("plans fail when execution can get stuck") {
  EvaluationRegistry reg;
  // Taking on the wrong side is inapplicable, so the box chain goes undefined.
  CHECK(!is_solution(corpus_task("simple.task"),
                     parse_plan("move; take_left; move"), reg));
  // Without sensing, one initial world has no successor under take_right.
  CHECK(!is_solution(corpus_task("pink.task"), corpus_plan("conformant.plan"), reg));
  // Plans may only use declared actions.
  EvaluationRegistry try_reg;
  CHECK_THROWS_AS(is_solution(corpus_task("try.task"), corpus_plan("cond.plan"),
                              try_reg), Error);
  // Too short to reach the goal at all.
  CHECK(!is_solution(corpus_task("simple.task"), parse_plan("move; take_right"), reg));
}

TEST_CASE("a non-classical initial theory is reported distinctly") {
  PlanningTask task;
  task.fluents = {"p"};
  task.actions = {"a"};
  task.transition.formulas = {parse_formula("a -> p", Layer::Rule)};
  task.goal = parse_formula("p", Layer::Query);
  EvaluationRegistry reg;

  task.init.formulas = {parse_formula("p | not p", Layer::Rule)};
  CHECK_THROWS_AS(is_solution(task, Plan::skip(), reg), UndefinedInitialState);

  task.init.formulas = {parse_formula("p", Layer::Rule),
                        parse_formula("-p", Layer::Rule)};
  CHECK_THROWS_AS(is_solution(task, Plan::skip(), reg), UndefinedInitialState);

  task.init.formulas = {parse_formula("p", Layer::Rule)};
  CHECK(is_solution(task, Plan::skip(), reg));
}

TEST_CASE("task validation rejects bad declarations") {
  PlanningTask task = corpus_task("pink.task");
  CHECK_NOTHROW(task.validate());

  PlanningTask clash = task;
  clash.actions.push_back("v");
  CHECK_THROWS_AS(clash.validate(), Error);

  PlanningTask modal_goal = task;
  modal_goal.goal = parse_formula("K(d)", Layer::Query);
  CHECK_THROWS_AS(modal_goal.validate(), Error);

  PlanningTask stray = task;
  stray.goal = parse_formula("d & w", Layer::Query);
  CHECK_THROWS_AS(stray.validate(), Error);
}

TEST_CASE("search finds the shortest conformant plan first") {
  EvaluationRegistry reg;
  PlanningTask task = corpus_task("simple.task");

  SearchCaps scaps;
  scaps.max_actions = 3;
  scaps.max_conditionals = 0;
  std::optional<Plan> found = search(task, scaps, reg);
  REQUIRE(found.has_value());
  CHECK(found->str() == "move; take_right; move");
  CHECK(parse_plan(found->str()) == *found);

  // A goal that already holds is solved by the empty plan.
  PlanningTask easy = task;
  easy.goal = parse_formula("-v & -l", Layer::Query);
  found = search(easy, scaps, reg);
  REQUIRE(found.has_value());
  CHECK(found->str() == "skip");

  PlanningTask hopeless = task;
  hopeless.goal = parse_formula("bot", Layer::Query);
  scaps.max_actions = 1;
  CHECK(!search(hopeless, scaps, reg).has_value());

  scaps.max_actions = -1;
  CHECK_THROWS_AS(search(task, scaps, reg), Error);
}

TEST_CASE("search branches on a supplied condition pool") {
  EvaluationRegistry reg;
  PlanningTask task = corpus_task("pink.task");
  SearchCaps scaps;
  scaps.max_actions = 4;
  scaps.max_conditionals = 1;
  scaps.condition_pool = {Formula::lit("r", true)};
  std::optional<Plan> found = search(task, scaps, reg);
  REQUIRE(found.has_value());
  CHECK(found->str() ==
        "move; flick; if K(-r) then (take_left; move) else (take_right; move)");
  CHECK(found->length() == 4);
  CHECK(found->conditionals() == 1);

  SearchCaps bad = scaps;
  bad.condition_pool = {Formula::know(Formula::lit("r"))};
  CHECK_THROWS_AS(search(task, bad, reg), Error);
}
