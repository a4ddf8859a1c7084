#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "delasp/htcore.hpp"
#include "delasp/model.hpp"
#include "delasp/syntax.hpp"
#include "delasp/textio.hpp"
#include "delasp/update.hpp"
#include "support.hpp"

using namespace delasp;

namespace {

const std::vector<std::string> kFluents = {"v", "l", "r", "s", "d"};

Theory with_fact(Theory t, const std::string& action) {
  t.formulas.push_back(Formula::lit(action));
  return t;
}

Theory pink() { return load_program(testsup::corpus_file("pink.elp")); }
Theory pink_try() { return load_program(testsup::corpus_file("pink-try.elp")); }

// Complete two-valued valuation over `sig`: listed atoms true, the rest false.
Valuation cval(const Signature& sig, const std::vector<std::string>& pos) {
  Valuation v;
  for (const auto& n : pos) v.set(sig.require(Atom{n, false}), false);
  v.neg = ((std::uint64_t{1} << sig.size()) - 1) & ~v.pos;
  return v;
}

std::vector<Valuation> world_vals(const EpistemicModel& m) {
  std::vector<Valuation> out;
  for (const auto& w : m.worlds) out.push_back(w.val);
  std::sort(out.begin(), out.end());
  return out;
}

using Rel = std::vector<std::pair<std::string, std::string>>;

}  // namespace

TEST_CASE("one transition step from the two-world initial model") {
  EpistemicModel m0 = load_model(testsup::corpus_file("m0.em"));
  UpdateResult r = asp_update(m0, with_fact(pink(), "move"), kFluents);
  REQUIRE(r.defined);
  const Signature& sig = *r.model.sig;
  REQUIRE(r.model.worlds.size() == 2);
  REQUIRE(r.model.cells.size() == 1);
  CHECK(r.model.worlds[0].id == "c0_w1");
  CHECK(r.model.worlds[0].val == cval(sig, {"v"}));
  CHECK(r.model.worlds[1].id == "c0_w2");
  CHECK(r.model.worlds[1].val == cval(sig, {"r", "v"}));
  CHECK(r.relation == Rel{{"w1", "c0_w2"}, {"w2", "c0_w1"}});
}

TEST_CASE("sensing splits the information cell") {
  EpistemicModel m1 = load_model(testsup::corpus_file("m1.em"));
  UpdateResult r = asp_update(m1, with_fact(pink(), "flick"), kFluents);
  REQUIRE(r.defined);
  const Signature& sig = *r.model.sig;
  REQUIRE(r.model.worlds.size() == 2);
  CHECK(r.model.worlds[0].val == cval(sig, {"l", "s", "v"}));
  CHECK(r.model.worlds[1].val == cval(sig, {"l", "r", "s", "v"}));
  REQUIRE(r.model.cells.size() == 2);
  CHECK(r.model.cell_of(0) != r.model.cell_of(1));
  CHECK(r.relation == Rel{{"w1", "c0_w2"}, {"w2", "c0_w1"}});
}

TEST_CASE("a cell violating the action precondition drops out") {
  EpistemicModel m2 = load_model(testsup::corpus_file("m2.em"));
  UpdateResult r = asp_update(m2, with_fact(pink(), "take_right"), kFluents);
  REQUIRE(r.defined);
  REQUIRE(r.model.worlds.size() == 1);
  CHECK(r.model.worlds[0].id == "c0_w1");
  CHECK(r.model.worlds[0].val == cval(*r.model.sig, {"d", "l", "r", "s", "v"}));
  CHECK(r.model.cells.size() == 1);
  CHECK(r.relation == Rel{{"w1", "c0_w1"}});
}

TEST_CASE("update is undefined when every cell drops") {
  EpistemicModel m0 = load_model(testsup::corpus_file("m0.em"));
  UpdateResult r = asp_update(m0, with_fact(pink(), "flick"), kFluents);
  CHECK(!r.defined);
  CHECK(r.model.worlds.empty());
  CHECK(r.relation.empty());
}

TEST_CASE("a model without cells updates to the empty model") {
  EpistemicModel empty;
  empty.sig = make_signature(testsup::plain_atoms(kFluents));
  UpdateResult r = asp_update(empty, with_fact(pink(), "move"), kFluents);
  CHECK(r.defined);
  CHECK(r.model.worlds.empty());
  CHECK(r.model.cells.empty());
}

TEST_CASE("four-step chain reaches the goal worlds on both branches") {
  EpistemicModel m = load_model(testsup::corpus_file("m0.em"));
  auto step = [&](const EpistemicModel& in, const std::string& a) {
    UpdateResult r = asp_update(in, with_fact(pink(), a), kFluents);
    REQUIRE(r.defined);
    return r.model;
  };
  EpistemicModel after_move = step(m, "move");
  EpistemicModel after_flick = step(after_move, "flick");
  const Signature& sig = *after_flick.sig;
  CHECK(world_vals(after_flick) ==
        std::vector<Valuation>{cval(sig, {"l", "s", "v"}),
                               cval(sig, {"l", "r", "s", "v"})});

  EpistemicModel right = step(after_flick, "take_right");
  REQUIRE(right.worlds.size() == 1);
  CHECK(right.worlds[0].val == cval(sig, {"d", "l", "r", "s", "v"}));
  EpistemicModel right_done = step(right, "move");
  REQUIRE(right_done.worlds.size() == 1);
  CHECK(right_done.worlds[0].val == cval(sig, {"d", "l", "r"}));

  EpistemicModel left = step(after_flick, "take_left");
  REQUIRE(left.worlds.size() == 1);
  CHECK(left.worlds[0].val == cval(sig, {"d", "l", "s", "v"}));
  EpistemicModel left_done = step(left, "move");
  REQUIRE(left_done.worlds.size() == 1);
  CHECK(left_done.worlds[0].val == cval(sig, {"d", "l"}));
}

TEST_CASE("attempt actions keep both worlds in one cell") {
  EpistemicModel m1 = load_model(testsup::corpus_file("m1.em"));
  UpdateResult r1 = asp_update(m1, with_fact(pink_try(), "try_take_left"), kFluents);
  REQUIRE(r1.defined);
  const Signature& sig = *r1.model.sig;
  CHECK(world_vals(r1.model) ==
        std::vector<Valuation>{cval(sig, {"d", "v"}), cval(sig, {"r", "v"})});
  CHECK(r1.model.cells.size() == 1);

  UpdateResult r2 =
      asp_update(r1.model, with_fact(pink_try(), "try_take_right"), kFluents);
  REQUIRE(r2.defined);
  CHECK(world_vals(r2.model) ==
        std::vector<Valuation>{cval(sig, {"d", "v"}), cval(sig, {"d", "r", "v"})});
  CHECK(r2.model.cells.size() == 1);
}

TEST_CASE("cell updates name their sources canonically") {
  SigPtr sig = make_signature(testsup::plain_atoms(kFluents));
  InformationCell cell;
  cell.sig = sig;
  cell.worlds = {cval(*sig, {"r"}), cval(*sig, {})};
  UpdateResult r = product_update_cell(cell, with_fact(pink(), "move"), kFluents);
  REQUIRE(r.defined);
  REQUIRE(r.relation.size() == 2);
  // Canonical cell order puts the all-false world first, so it is w1.
  for (const auto& [src, tgt] : r.relation) {
    int t = r.model.world_index(tgt);
    REQUIRE(t >= 0);
    Valuation expect = src == "w1" ? cval(*r.model.sig, {"v"})
                                   : cval(*r.model.sig, {"r", "v"});
    CHECK(r.model.worlds[t].val == expect);
  }

  InformationCell bad;
  bad.sig = make_signature({Atom{"v", false}, Atom{"x", false}});
  bad.worlds = {cval(*bad.sig, {"v"})};
  CHECK_THROWS_AS(product_update_cell(bad, pink(), kFluents), Error);
}

TEST_CASE("event update pairs worlds with applicable events") {
  EpistemicModel m1 = load_model(testsup::corpus_file("m1.em"));
  EventModel flick = load_event_model(testsup::corpus_file("flick.ev"));
  UpdateResult r = event_product_update(m1, flick);
  REQUIRE(r.defined);
  const Signature& sig = *r.model.sig;
  REQUIRE(r.model.worlds.size() == 2);
  CHECK(r.model.worlds[0].id == "(w1,e1)");
  CHECK(r.model.worlds[0].val == cval(sig, {"l", "r", "s", "v"}));
  CHECK(r.model.worlds[1].id == "(w2,e2)");
  CHECK(r.model.worlds[1].val == cval(sig, {"l", "s", "v"}));
  CHECK(r.model.cells.size() == 2);
  CHECK(r.relation == Rel{{"w1", "(w1,e1)"}, {"w2", "(w2,e2)"}});

  EventModel linked = load_event_model(testsup::corpus_file("flick-prime.ev"));
  UpdateResult r2 = event_product_update(m1, linked);
  CHECK(world_vals(r2.model) == world_vals(r.model));
  CHECK(r2.model.cells.size() == 1);
}

TEST_CASE("event cells only merge when sources were indistinguishable") {
  EpistemicModel m3 = load_model(testsup::corpus_file("m3.em"));
  EventModel move = load_event_model(testsup::corpus_file("move.ev"));
  UpdateResult r = event_product_update(m3, move);
  const Signature& sig = *r.model.sig;
  REQUIRE(r.model.worlds.size() == 2);
  CHECK(r.model.worlds[0].id == "(w1,e1)");
  CHECK(r.model.worlds[0].val == cval(sig, {"d", "l", "r", "s"}));
  CHECK(r.model.worlds[1].id == "(w2,e1)");
  CHECK(r.model.worlds[1].val == cval(sig, {"d", "l", "s"}));
  CHECK(r.model.cells.size() == 2);
}

TEST_CASE("event update rejects bad inputs but never goes undefined") {
  EpistemicModel m1 = load_model(testsup::corpus_file("m1.em"));

  EventModel stray;
  stray.events.push_back({"e1", Formula::verum_query(),
                          {{Atom{"z", false}, Formula::verum_query()}}});
  stray.close_relation();
  CHECK_THROWS_AS(event_product_update(m1, stray), Error);

  EpistemicModel lit = m1;
  lit.flavor = ValFlavor::Literal;
  EventModel flick = load_event_model(testsup::corpus_file("flick.ev"));
  CHECK_THROWS_AS(event_product_update(lit, flick), Error);

  EventModel blocked;
  blocked.events.push_back({"e1", Formula::falsum(), {}});
  blocked.close_relation();
  UpdateResult r = event_product_update(m1, blocked);
  CHECK(r.defined);
  CHECK(r.model.worlds.empty());
}

TEST_CASE("event update agrees with direct evaluation of pre and post") {
  testsup::Rng rng(202);
  const std::vector<std::string> names = {"p", "q", "r"};
  int checked_pairs = 0;
  for (int i = 0; i < 100; ++i) {
    EpistemicModel m = testsup::random_classical_model(rng, names, 3);
    EventModel e = testsup::random_event_model(rng, names, 2);
    UpdateResult r = event_product_update(m, e);
    REQUIRE(r.defined);
    for (std::size_t w = 0; w < m.worlds.size(); ++w) {
      for (const auto& ev : e.events) {
        std::string id = "(" + m.worlds[w].id + "," + ev.id + ")";
        int t = r.model.world_index(id);
        bool applicable = testsup::s5_eval(m, static_cast<int>(w), ev.pre);
        CHECK((t >= 0) == applicable);
        if (t < 0) continue;
        ++checked_pairs;
        for (int a = 0; a < m.sig->size(); ++a) {
          bool expect = m.worlds[w].val.has(a, false);
          for (const auto& [atom, f] : ev.post) {
            if (m.sig->index_of(atom) == a) {
              expect = testsup::s5_eval(m, static_cast<int>(w), f);
              break;
            }
          }
          CHECK(r.model.worlds[t].val.has(a, false) == expect);
        }
      }
    }
  }
  CHECK(checked_pairs > 100);
}
