#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>
#include <vector>

#include "delasp/delcheck.hpp"
#include "delasp/model.hpp"
#include "delasp/syntax.hpp"
#include "delasp/textio.hpp"
#include "delasp/update.hpp"
#include "support.hpp"

using namespace delasp;

namespace {

Formula query(const std::string& s) { return parse_formula(s, Layer::Query); }

EpistemicModel corpus_model(const std::string& name) {
  return load_model(testsup::corpus_file(name));
}

// Binds every vault action in `reg` under a short name.
void bind_vault(EvaluationRegistry& reg) {
  Theory pink = load_program(testsup::corpus_file("pink.elp"));
  reg.bind_theory("mv", pink, {"move"});
  reg.bind_theory("fl", pink, {"flick"});
  reg.bind_theory("takel", pink, {"take_left"});
  reg.bind_theory("taker", pink, {"take_right"});
}

void bind_attempts(EvaluationRegistry& reg) {
  Theory t = load_program(testsup::corpus_file("pink-try.elp"));
  reg.bind_theory("mv", t, {"move"});
  reg.bind_theory("ttakel", t, {"try_take_left"});
  reg.bind_theory("ttaker", t, {"try_take_right"});
}

}  // namespace

TEST_CASE("knowledge is evaluated over the world's cell") {
  EvaluationRegistry reg;
  EpistemicModel m2 = corpus_model("m2.em");
  int w1 = m2.world_index("w1");
  int w2 = m2.world_index("w2");
  CHECK(del_satisfies(m2, w1, query("v & K(r)"), reg));
  CHECK(!del_satisfies(m2, w2, query("K(r)"), reg));
  CHECK(del_satisfies(m2, w2, query("K(-r)"), reg));
  CHECK(!del_models(m2, query("v & K(r)"), reg));
  CHECK(del_models(m2, query("v & (K(r) | K(-r))"), reg));

  EpistemicModel joined = corpus_model("m2prime.em");
  CHECK(!del_satisfies(joined, joined.world_index("w1"), query("K(r)"), reg));
  CHECK(del_satisfies(joined, joined.world_index("w1"), query("K(v)"), reg));
  CHECK(del_models(joined, query("~K(r) & ~K(-r)"), reg));

  EpistemicModel m0 = corpus_model("m0.em");
  CHECK(del_models(m0, query("K(-v)"), reg));
  CHECK(del_models(m0, query("~K(r)"), reg));
}

TEST_CASE("dynamic operators thread the registry updates") {
  EvaluationRegistry reg;
  bind_vault(reg);
  EpistemicModel m0 = corpus_model("m0.em");
  CHECK(del_models(m0, query("K [mv] [fl] (v & (K(r) | K(-r)))"), reg));
  CHECK(!del_models(m0, query("K [mv] (K(r) | K(-r))"), reg));

  EpistemicModel known = corpus_model("m0prime.em");
  CHECK(del_models(known, query("K [mv] [taker] [mv] (-v & d)"), reg));
  CHECK(!del_models(known, query("K [mv] [takel] [mv] (-v & d)"), reg));
}

TEST_CASE("attempt chain reaches the goal without sensing") {
  EvaluationRegistry reg;
  bind_attempts(reg);
  EpistemicModel m0 = corpus_model("m0.em");
  CHECK(del_models(m0, query("K [mv] [ttakel] [ttaker] [mv] (-v & d)"), reg));
  CHECK(del_models(m0, query("K [mv] [ttaker] [ttakel] [mv] (-v & d)"), reg));
  CHECK(!del_models(m0, query("K [mv] [ttakel] [mv] (-v & d)"), reg));
}

TEST_CASE("box is false under an undefined update, diamond is true") {
  EvaluationRegistry reg;
  bind_vault(reg);
  EpistemicModel m0 = corpus_model("m0.em");
  // Flicking needs the agent inside the vault, so the update drops all cells.
  CHECK(!del_models(m0, query("[fl] top"), reg));
  CHECK(!del_satisfies(m0, 0, query("[fl] bot"), reg));
  CHECK(del_satisfies(m0, 0, query("<fl> top"), reg));
  CHECK(del_satisfies(m0, 0, query("<fl> bot"), reg));
}

TEST_CASE("pointed event bindings restrict the relation to the point") {
  EventModel flick = load_event_model(testsup::corpus_file("flick.ev"));
  EvaluationRegistry reg;
  reg.bind_event("fe", flick, std::string("e1"));
  reg.bind_event("fall", flick, std::nullopt);

  EpistemicModel m1 = corpus_model("m1.em");
  auto up = reg.update("fe", m1);
  REQUIRE(up->defined);
  CHECK(up->model.worlds.size() == 2);
  REQUIRE(up->relation.size() == 1);
  CHECK(up->relation[0].first == "w1");
  CHECK(up->relation[0].second == "(w1,e1)");

  int w1 = m1.world_index("w1");
  int w2 = m1.world_index("w2");
  CHECK(del_satisfies(m1, w1, query("[fe] l"), reg));
  CHECK(!del_satisfies(m1, w1, query("[fe] bot"), reg));
  // The point never applies at w2, so the box is vacuous there.
  CHECK(del_satisfies(m1, w2, query("[fe] bot"), reg));
  CHECK(reg.update("fall", m1)->relation.size() == 2);
}

TEST_CASE("registry memoizes per model and rejects inconsistent rebinds") {
  Theory pink = load_program(testsup::corpus_file("pink.elp"));
  EvaluationRegistry reg;
  reg.bind_theory("mv", pink, {"move"});
  CHECK(reg.has("mv"));
  CHECK(!reg.has("zz"));

  EpistemicModel m0 = corpus_model("m0.em");
  auto p1 = reg.update("mv", m0);
  auto p2 = reg.update("mv", m0);
  CHECK(p1.get() == p2.get());

  CHECK_NOTHROW(reg.bind_theory("mv", pink, {"move"}));
  CHECK_THROWS_AS(reg.bind_theory("mv", pink, {"flick"}), Error);
  EventModel flick = load_event_model(testsup::corpus_file("flick.ev"));
  CHECK_THROWS_AS(reg.bind_event("mv", flick, std::nullopt), Error);

  EvaluationRegistry other;
  CHECK_THROWS_AS(del_satisfies(m0, 0, query("[mv] top"), other), Error);
}

TEST_CASE("static queries agree with direct S5 evaluation") {
  testsup::Rng rng(303);
  EvaluationRegistry reg;
  const std::vector<std::string> names = {"p", "q", "r"};
  for (int i = 0; i < 300; ++i) {
    EpistemicModel m = testsup::random_classical_model(rng, names, 4);
    Formula f = testsup::random_query(rng, names, 3);
    for (std::size_t w = 0; w < m.worlds.size(); ++w) {
      CHECK(del_satisfies(m, static_cast<int>(w), f, reg) ==
            testsup::s5_eval(m, static_cast<int>(w), f));
    }
  }
}

TEST_CASE("knowledge is factive on random models") {
  testsup::Rng rng(304);
  EvaluationRegistry reg;
  const std::vector<std::string> names = {"p", "q"};
  int fired = 0;
  for (int i = 0; i < 300; ++i) {
    EpistemicModel m = testsup::random_classical_model(rng, names, 4);
    Formula f = testsup::random_objective(rng, names, 2);
    for (std::size_t w = 0; w < m.worlds.size(); ++w) {
      if (del_satisfies(m, static_cast<int>(w), Formula::know(f), reg)) {
        ++fired;
        CHECK(del_satisfies(m, static_cast<int>(w), f, reg));
      }
    }
  }
  CHECK(fired > 50);
}

TEST_CASE("diamond is the classical dual of box") {
  testsup::Rng rng(305);
  const std::vector<std::string> fl = {"v", "l", "r", "s", "d"};
  Theory pink = load_program(testsup::corpus_file("pink.elp"));
  EventModel flick_ev = load_event_model(testsup::corpus_file("flick.ev"));
  EvaluationRegistry reg;
  reg.bind_theory("fl", pink, {"flick"});
  reg.bind_event("fe", flick_ev, std::nullopt);
  for (int i = 0; i < 40; ++i) {
    EpistemicModel m = testsup::random_classical_model(rng, fl, 3);
    Formula f = testsup::random_objective(rng, fl, 2);
    const std::string o = testsup::chance(rng, 50) ? "fl" : "fe";
    for (std::size_t w = 0; w < m.worlds.size(); ++w) {
      bool dia = del_satisfies(m, static_cast<int>(w), Formula::update_dual(o, f), reg);
      bool dual = del_satisfies(
          m, static_cast<int>(w),
          Formula::neg_class(Formula::update(o, Formula::neg_class(f))), reg);
      CHECK(dia == dual);
    }
  }
}

TEST_CASE("entailment over a model family") {
  EvaluationRegistry reg;
  std::vector<EpistemicModel> family = {corpus_model("m2.em"),
                                        corpus_model("m2prime.em")};
  CHECK(entails_over(family, query("v & l"), reg));
  CHECK(!entails_over(family, query("K(r) | K(-r)"), reg));

  EpistemicModel empty;
  empty.sig = make_signature(testsup::plain_atoms({"p"}));
  CHECK(del_models(empty, query("bot"), reg));
}
