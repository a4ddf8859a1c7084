// Command line frontend: world views, product updates, dynamic formula
// checks, plan verification and search, and DOT export.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "delasp/config.hpp"
#include "delasp/delcheck.hpp"
#include "delasp/error.hpp"
#include "delasp/htcore.hpp"
#include "delasp/model.hpp"
#include "delasp/plan.hpp"
#include "delasp/syntax.hpp"
#include "delasp/textio.hpp"
#include "delasp/update.hpp"
#include "delasp/worldview.hpp"

namespace {

constexpr int kExitTrue = 0;
constexpr int kExitFalse = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNoWorldView = 3;
constexpr int kExitUndefined = 4;

// Binding syntax: name=theory:path[+action...] or name=event:path[@point].
void add_binding(delasp::EvaluationRegistry& reg, const std::string& text) {
  auto eq = text.find('=');
  auto colon = text.find(':', eq == std::string::npos ? 0 : eq);
  if (eq == std::string::npos || colon == std::string::npos || eq == 0)
    throw delasp::Error("bad binding '" + text +
                        "'; expected name=theory:file[+action] or name=event:file[@point]");
  std::string name = text.substr(0, eq);
  std::string kind = text.substr(eq + 1, colon - eq - 1);
  std::string rest = text.substr(colon + 1);
  if (kind == "theory") {
    std::vector<std::string> asserts;
    auto plus = rest.find('+');
    std::string path = rest.substr(0, plus);
    while (plus != std::string::npos) {
      auto next = rest.find('+', plus + 1);
      asserts.push_back(rest.substr(plus + 1, next == std::string::npos
                                                  ? std::string::npos
                                                  : next - plus - 1));
      plus = next;
    }
    reg.bind_theory(name, delasp::load_program(path), std::move(asserts));
  } else if (kind == "event") {
    auto at = rest.find('@');
    std::string path = rest.substr(0, at);
    std::optional<std::string> point;
    if (at != std::string::npos) point = rest.substr(at + 1);
    reg.bind_event(name, delasp::load_event_model(path), std::move(point));
  } else {
    throw delasp::Error("bad binding kind '" + kind + "'; use theory or event");
  }
}

void print_update(const delasp::UpdateResult& r, const std::string& format) {
  if (format == "dot") {
    std::cout << delasp::export_dot(r.model);
    return;
  }
  std::cout << delasp::serialize_model(r.model);
  for (const auto& [src, tgt] : r.relation)
    std::cout << "rel " << src << " -> " << tgt << "\n";
}

int cmd_worldviews(const std::string& path, const delasp::Caps& caps) {
  delasp::Theory t = delasp::load_program(path);
  delasp::SigPtr sig = delasp::make_signature(delasp::collect_atoms(t));
  std::vector<delasp::InformationCell> wvs = delasp::world_views(t, sig, caps);
  if (wvs.empty()) {
    std::cout << "no world view\n";
    return kExitNoWorldView;
  }
  for (std::size_t i = 0; i < wvs.size(); ++i) {
    if (i) std::cout << "\n";
    std::cout << "world view " << i + 1 << "\n";
    for (const auto& w : wvs[i].worlds) std::cout << "  " << w.str(*sig) << "\n";
  }
  return kExitTrue;
}

int cmd_update(const std::string& model_path, const std::string& theory_path,
               const std::vector<std::string>& asserts,
               const std::vector<std::string>& fluents, const std::string& event_path,
               const std::string& format, const delasp::Caps& caps) {
  delasp::EpistemicModel m = delasp::load_model(model_path);
  delasp::UpdateResult r;
  if (!event_path.empty()) {
    r = delasp::event_product_update(m, delasp::load_event_model(event_path));
  } else {
    delasp::Theory t = delasp::load_program(theory_path);
    for (const auto& a : asserts) {
      bool declared = false;
      for (const auto& n : t.actions) declared = declared || n == a;
      if (!declared) throw delasp::Error("--assert " + a + " is not a declared action");
      t.formulas.push_back(delasp::Formula::lit(a));
    }
    const auto& fl = fluents.empty() ? t.fluents : fluents;
    r = delasp::asp_update(m, t, fl, caps);
  }
  if (!r.defined) {
    std::cout << "UNDEFINED\n";
    return kExitUndefined;
  }
  print_update(r, format);
  return kExitTrue;
}

int cmd_check(const std::string& model_path, const std::string& formula,
              const std::vector<std::string>& binds, const delasp::Caps& caps) {
  delasp::EpistemicModel m = delasp::load_model(model_path);
  delasp::Formula f = delasp::parse_formula(formula, delasp::Layer::Query, "<formula>");
  delasp::EvaluationRegistry reg;
  for (const auto& b : binds) add_binding(reg, b);
  bool ok = delasp::del_models(m, f, reg, caps);
  std::cout << (ok ? "true" : "false") << "\n";
  return ok ? kExitTrue : kExitFalse;
}

int cmd_plan_verify(const std::string& task_path, const std::string& plan_path,
                    const delasp::Caps& caps) {
  delasp::PlanningTask task = delasp::load_task(task_path);
  delasp::Plan plan = delasp::load_plan(plan_path);
  delasp::EvaluationRegistry reg;
  bool ok = delasp::is_solution(task, plan, reg, caps);
  std::cout << (ok ? "SOLUTION" : "NOT-A-SOLUTION") << "\n";
  return ok ? kExitTrue : kExitFalse;
}

int cmd_plan_search(const std::string& task_path, int max_len, int max_if,
                    const delasp::Caps& caps) {
  delasp::PlanningTask task = delasp::load_task(task_path);
  delasp::SearchCaps scaps;
  scaps.max_actions = max_len;
  scaps.max_conditionals = max_if;
  delasp::EvaluationRegistry reg;
  std::optional<delasp::Plan> found = delasp::search(task, scaps, reg, caps);
  if (!found) {
    std::cout << "NONE\n";
    return kExitFalse;
  }
  std::cout << found->str() << "\n";
  return kExitTrue;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"world views, updates, and plans of epistemic logic programs"};
  app.require_subcommand(1);

  int cap_atoms = 0;
  int cap_worlds = 0;
  std::uint64_t seed = 0;
  std::string format = "text";
  app.add_option("--seed", seed, "random seed for derived tooling");
  app.add_option("--cap-atoms", cap_atoms, "atom count limit for world-view search")
      ->check(CLI::PositiveNumber);
  app.add_option("--cap-worlds", cap_worlds, "world count limit for model comparisons")
      ->check(CLI::PositiveNumber);
  app.add_option("--format", format, "output format for models")
      ->check(CLI::IsMember({"text", "dot"}));

  auto* wv = app.add_subcommand("worldviews", "print the world views of a program");
  std::string wv_program;
  wv->add_option("program", wv_program, "path to a .elp program")->required();
  wv->fallthrough();

  auto* up = app.add_subcommand("update", "update an epistemic model");
  std::string up_model, up_theory, up_event;
  std::vector<std::string> up_asserts, up_fluents;
  up->add_option("--model", up_model, "path to the .em model")->required();
  up->add_option("--theory", up_theory, "path to the updating .elp theory");
  up->add_option("--assert", up_asserts, "action atom asserted as a fact");
  up->add_option("--fluents", up_fluents, "projection fluents (default: theory declarations)")
      ->delimiter(',');
  up->add_option("--event", up_event, "path to the updating .ev event model");
  up->fallthrough();

  auto* ck = app.add_subcommand("check", "evaluate a dynamic formula on a model");
  std::string ck_model, ck_formula;
  std::vector<std::string> ck_binds;
  ck->add_option("--model", ck_model, "path to the .em model")->required();
  ck->add_option("--formula", ck_formula, "query formula")->required();
  ck->add_option("--bind", ck_binds,
                 "updating object: name=theory:file[+action] or name=event:file[@point]");
  ck->fallthrough();

  auto* pl = app.add_subcommand("plan", "verify or search plans");
  pl->require_subcommand(1);
  pl->fallthrough();
  auto* pv = pl->add_subcommand("verify", "check a plan against a task");
  std::string pv_task, pv_plan;
  pv->add_option("--task", pv_task, "path to the .task file")->required();
  pv->add_option("--plan", pv_plan, "path to the .plan file")->required();
  pv->fallthrough();
  auto* ps = pl->add_subcommand("search", "search for a solution plan");
  std::string ps_task;
  int ps_max_len = 4;
  int ps_max_if = 1;
  ps->add_option("--task", ps_task, "path to the .task file")->required();
  ps->add_option("--max-len", ps_max_len, "most action steps in a candidate");
  ps->add_option("--max-if", ps_max_if, "most conditionals in a candidate");
  ps->fallthrough();

  auto* xd = app.add_subcommand("export-dot", "render a model file as DOT");
  std::string xd_model;
  xd->add_option("model", xd_model, "path to the .em model")->required();
  xd->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  try {
    delasp::Caps caps = delasp::Caps::from_env();
    caps.seed = seed;
    if (cap_atoms > 0) {
      caps.worldview_atoms = cap_atoms;
      caps.equilibrium_atoms = cap_atoms;
    }
    if (cap_worlds > 0) {
      caps.bisim_worlds = cap_worlds;
      caps.equilibrium_worlds = cap_worlds;
    }

    if (wv->parsed()) return cmd_worldviews(wv_program, caps);
    if (up->parsed()) {
      if (up_theory.empty() == up_event.empty())
        throw delasp::Error("update needs exactly one of --theory and --event");
      return cmd_update(up_model, up_theory, up_asserts, up_fluents, up_event, format, caps);
    }
    if (ck->parsed()) return cmd_check(ck_model, ck_formula, ck_binds, caps);
    if (pl->parsed()) {
      if (pv->parsed()) return cmd_plan_verify(pv_task, pv_plan, caps);
      return cmd_plan_search(ps_task, ps_max_len, ps_max_if, caps);
    }
    if (xd->parsed()) {
      std::cout << delasp::export_dot(delasp::load_model(xd_model));
      return kExitTrue;
    }
    std::cerr << "no subcommand\n";
    return kExitUsage;
  } catch (const delasp::UndefinedInitialState& e) {
    std::cerr << e.what() << "\n";
    return kExitUndefined;
  } catch (const delasp::Error& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }
}
