#pragma once

// Text formats.
//
// Formulas (shared by all formats; % starts a comment):
//   literals      p   'p   -p   -'p
//   connectives   &  |  ->  not f  (sugar for f -> bot)  ~f  (query layer)
//   modalities    L(f) (rule layer)   K(f) (both layers)
//   dynamics      [obj] f   <obj> f   (query layer; obj is a binding name)
//   constants     top  bot
//   sugar         U p  (undecided)   O p  (observed)   expanded at read time
//
// .elp programs: statements terminated by '.':
//   fluent v l r.      declares fluents (previous-state copies implied)
//   action move.       declares action atoms
//   inertial v r.      emits the frame rules f <- 'f, not -f / -f <- -'f, not f
//   {p}.               choice, short for p | not p.
//   H :- B1, ..., Bn.  rule (commas conjoin); ':- B.' is a constraint;
//   F.                 fact (any rule-layer formula)
//
// .em epistemic models (line oriented):
//   model classical|literal
//   atoms v l r 'v ...
//   world <id> : <literals>      classical worlds list true atoms only
//   cell <id> <id> ...           omitted entirely = all worlds in one cell
//   rel <id> -> <id>             accepted and exposed for update results
//
// .ev event models (line oriented):
//   atoms v l r
//   event <id> : <pre formula>
//   post <id> <atom> : <formula>
//   edge <id> <id>
//   point <id>
//
// .plan: one plan expression, e.g.
//   move; if K(r) then take_right else take_left; move
//   branches with several steps are parenthesized: if K(r) then (a; b) else skip
//
// .task planning tasks (line oriented):
//   fluents v l r s d
//   actions move flick
//   theory: <path to .elp>          transition theory
//   init: <rule formula>            repeatable; initial theory lines
//   init-file: <path to .elp>       alternative to init: lines
//   goal: <objective formula>

#include <string>
#include <utility>
#include <vector>

#include "delasp/model.hpp"
#include "delasp/plan.hpp"
#include "delasp/syntax.hpp"

namespace delasp {

enum class Layer { Rule, Query };

Formula parse_formula(const std::string& text, Layer layer,
                      const std::string& origin = "<formula>");
// Canonical formula rendering with minimal parentheses; parse(str(f)) == f.
std::string formula_str(const Formula& f);

Theory parse_program(const std::string& text, const std::string& origin = "<program>");
Theory load_program(const std::string& path);
std::string serialize_program(const Theory& t);

// Parsed model plus any `rel` lines present (empty for plain model files).
struct ParsedModel {
  EpistemicModel model;
  std::vector<std::pair<std::string, std::string>> rel;
};
ParsedModel parse_model(const std::string& text, const std::string& origin = "<model>");
EpistemicModel load_model(const std::string& path);
std::string serialize_model(const EpistemicModel& m);

EventModel parse_event_model(const std::string& text,
                             const std::string& origin = "<event model>");
EventModel load_event_model(const std::string& path);
std::string serialize_event_model(const EventModel& e);

Plan parse_plan(const std::string& text, const std::string& origin = "<plan>");
Plan load_plan(const std::string& path);

PlanningTask parse_task(const std::string& text, const std::string& origin);
PlanningTask load_task(const std::string& path);

// Graphviz renderings: undirected within-cell cliques for epistemic models,
// directed arrows for HT-model accessibility.
std::string export_dot(const EpistemicModel& m);
std::string export_dot(const HTModel& m);

std::string read_file(const std::string& path);

}  // namespace delasp
