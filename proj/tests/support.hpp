#pragma once

// Shared test helpers: an independent S5 evaluator used as a cross-check
// oracle, and random generators for models, cells, and formulas. The
// evaluator is written directly against the formula AST and deliberately
// shares no code with the library's satisfaction routines.

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "delasp/model.hpp"
#include "delasp/syntax.hpp"

namespace testsup {

using Rng = std::mt19937_64;

// Classical S5 satisfaction over an epistemic model: literals look up the
// valuation bits, K quantifies over the world's cell. Dynamic operators and
// L are out of scope here and throw.
inline bool s5_eval(const delasp::EpistemicModel& m, int w, const delasp::Formula& f) {
  using delasp::FormulaKind;
  switch (f.kind()) {
    case FormulaKind::Falsum:
      return false;
    case FormulaKind::Lit: {
      const delasp::Literal& l = f.root().lit;
      int idx = m.sig->require(l.atom);
      return m.worlds[w].val.has(idx, l.strong_neg);
    }
    case FormulaKind::And:
      return s5_eval(m, w, f.child_a()) && s5_eval(m, w, f.child_b());
    case FormulaKind::Or:
      return s5_eval(m, w, f.child_a()) || s5_eval(m, w, f.child_b());
    case FormulaKind::Implies:
      return !s5_eval(m, w, f.child_a()) || s5_eval(m, w, f.child_b());
    case FormulaKind::ClassNeg:
      return !s5_eval(m, w, f.child_a());
    case FormulaKind::Know: {
      int c = m.cell_of(w);
      for (int v : m.cells[c]) {
        if (!s5_eval(m, v, f.child_a())) return false;
      }
      return true;
    }
    default:
      throw std::logic_error("s5_eval: unsupported operator");
  }
}

inline bool s5_models(const delasp::EpistemicModel& m, const delasp::Formula& f) {
  for (int w = 0; w < static_cast<int>(m.worlds.size()); ++w) {
    if (!s5_eval(m, w, f)) return false;
  }
  return true;
}

inline int pick(Rng& rng, int n) {
  return static_cast<int>(rng() % static_cast<std::uint64_t>(n));
}

inline bool chance(Rng& rng, int percent) { return pick(rng, 100) < percent; }

// Complete two-valued valuation over the first `n` signature atoms.
inline delasp::Valuation random_classical_val(Rng& rng, int n) {
  delasp::Valuation v;
  for (int i = 0; i < n; ++i) v.set(i, chance(rng, 50));
  return v;
}

// Consistent literal set: each atom true, false, or absent.
inline delasp::Valuation random_literal_val(Rng& rng, int n) {
  delasp::Valuation v;
  for (int i = 0; i < n; ++i) {
    switch (pick(rng, 3)) {
      case 0: v.set(i, false); break;
      case 1: v.set(i, true); break;
      default: break;
    }
  }
  return v;
}

inline std::vector<delasp::Atom> plain_atoms(const std::vector<std::string>& names) {
  std::vector<delasp::Atom> out;
  for (const auto& n : names) out.push_back({n, false});
  return out;
}

// Epistemic model with complete valuations, distinct worlds, and a random
// partition into cells.
inline delasp::EpistemicModel random_classical_model(Rng& rng,
                                                     const std::vector<std::string>& names,
                                                     int max_worlds) {
  delasp::EpistemicModel m;
  m.sig = delasp::make_signature(plain_atoms(names));
  m.flavor = delasp::ValFlavor::Classical;
  int n = m.sig->size();
  int want = 1 + pick(rng, max_worlds);
  std::vector<delasp::Valuation> vals;
  for (int tries = 0; static_cast<int>(vals.size()) < want && tries < 8 * want; ++tries) {
    delasp::Valuation v = random_classical_val(rng, n);
    bool dup = false;
    for (const auto& u : vals) dup = dup || u == v;
    if (!dup) vals.push_back(v);
  }
  for (int i = 0; i < static_cast<int>(vals.size()); ++i) {
    m.worlds.push_back({"w" + std::to_string(i + 1), vals[i]});
  }
  // Random partition: each world joins an existing cell or opens a new one.
  for (int i = 0; i < static_cast<int>(m.worlds.size()); ++i) {
    if (m.cells.empty() || chance(rng, 50)) {
      m.cells.push_back({i});
    } else {
      m.cells[pick(rng, static_cast<int>(m.cells.size()))].push_back(i);
    }
  }
  m.canonicalize();
  m.validate();
  return m;
}

// Objective (K-free, dynamic-free) query-layer formula over plain atoms.
inline delasp::Formula random_objective(Rng& rng, const std::vector<std::string>& names,
                                        int depth) {
  using delasp::Formula;
  if (depth <= 0 || chance(rng, 35)) {
    if (chance(rng, 6)) return Formula::falsum();
    return Formula::lit(names[pick(rng, static_cast<int>(names.size()))],
                        chance(rng, 30));
  }
  switch (pick(rng, 4)) {
    case 0:
      return Formula::conj(random_objective(rng, names, depth - 1),
                           random_objective(rng, names, depth - 1));
    case 1:
      return Formula::disj(random_objective(rng, names, depth - 1),
                           random_objective(rng, names, depth - 1));
    case 2:
      return Formula::implies(random_objective(rng, names, depth - 1),
                              random_objective(rng, names, depth - 1));
    default:
      return Formula::neg_class(random_objective(rng, names, depth - 1));
  }
}

// Query-layer formula that may use K at any depth.
inline delasp::Formula random_query(Rng& rng, const std::vector<std::string>& names,
                                    int depth) {
  using delasp::Formula;
  if (depth <= 0 || chance(rng, 30)) {
    if (chance(rng, 6)) return Formula::falsum();
    return Formula::lit(names[pick(rng, static_cast<int>(names.size()))],
                        chance(rng, 30));
  }
  switch (pick(rng, 5)) {
    case 0:
      return Formula::conj(random_query(rng, names, depth - 1),
                           random_query(rng, names, depth - 1));
    case 1:
      return Formula::disj(random_query(rng, names, depth - 1),
                           random_query(rng, names, depth - 1));
    case 2:
      return Formula::implies(random_query(rng, names, depth - 1),
                              random_query(rng, names, depth - 1));
    case 3:
      return Formula::neg_class(random_query(rng, names, depth - 1));
    default:
      return Formula::know(random_query(rng, names, depth - 1));
  }
}

// Rule-layer formula over current and (optionally) previous atoms, with
// default negation, L, and K mixed in.
inline delasp::Formula random_rule_formula(Rng& rng, const std::vector<std::string>& names,
                                           int depth, bool allow_prev = true) {
  using delasp::Formula;
  if (depth <= 0 || chance(rng, 30)) {
    if (chance(rng, 5)) return Formula::falsum();
    return Formula::lit(names[pick(rng, static_cast<int>(names.size()))],
                        chance(rng, 30), allow_prev && chance(rng, 25));
  }
  switch (pick(rng, 6)) {
    case 0:
      return Formula::conj(random_rule_formula(rng, names, depth - 1, allow_prev),
                           random_rule_formula(rng, names, depth - 1, allow_prev));
    case 1:
      return Formula::disj(random_rule_formula(rng, names, depth - 1, allow_prev),
                           random_rule_formula(rng, names, depth - 1, allow_prev));
    case 2:
      return Formula::implies(random_rule_formula(rng, names, depth - 1, allow_prev),
                              random_rule_formula(rng, names, depth - 1, allow_prev));
    case 3:
      return Formula::neg_default(random_rule_formula(rng, names, depth - 1, allow_prev));
    case 4:
      return Formula::belief(random_rule_formula(rng, names, depth - 1, allow_prev));
    default:
      return Formula::know(random_rule_formula(rng, names, depth - 1, allow_prev));
  }
}

// HT structure with consistent valuations, vh below vt, and a random
// relation (self loops optional, no structural assumptions).
inline delasp::HTModel random_htmodel(Rng& rng, const std::vector<std::string>& names,
                                      int max_worlds) {
  delasp::HTModel m;
  std::vector<delasp::Atom> atoms = plain_atoms(names);
  for (const auto& n : names) atoms.push_back({n, true});
  m.sig = delasp::make_signature(atoms);
  int nw = 1 + pick(rng, max_worlds);
  for (int i = 0; i < nw; ++i) {
    delasp::Valuation vt = random_literal_val(rng, m.sig->size());
    delasp::Valuation vh;
    for (int b = 0; b < m.sig->size(); ++b) {
      if (vt.has(b, false) && chance(rng, 70)) vh.set(b, false);
      if (vt.has(b, true) && chance(rng, 70)) vh.set(b, true);
    }
    m.worlds.push_back({"w" + std::to_string(i + 1), vh, vt});
  }
  m.rel.assign(nw, 0);
  for (int i = 0; i < nw; ++i) {
    for (int j = 0; j < nw; ++j) {
      if (chance(rng, 45)) m.rel[i] |= std::uint64_t{1} << j;
    }
  }
  m.validate();
  return m;
}

// Two-valued information cell with distinct worlds.
inline delasp::InformationCell random_cell(Rng& rng, const std::vector<std::string>& names,
                                           int max_worlds) {
  delasp::InformationCell cell;
  cell.sig = delasp::make_signature(plain_atoms(names));
  int want = 1 + pick(rng, max_worlds);
  for (int tries = 0; static_cast<int>(cell.worlds.size()) < want && tries < 8 * want;
       ++tries) {
    delasp::Valuation v = random_classical_val(rng, cell.sig->size());
    bool dup = false;
    for (const auto& u : cell.worlds) dup = dup || u == v;
    if (!dup) cell.worlds.push_back(v);
  }
  cell.canonicalize();
  return cell;
}

// Event model with objective preconditions and postconditions.
inline delasp::EventModel random_event_model(Rng& rng,
                                             const std::vector<std::string>& names,
                                             int max_events) {
  delasp::EventModel e;
  int ne = 1 + pick(rng, max_events);
  for (int i = 0; i < ne; ++i) {
    delasp::EventModel::Event ev;
    ev.id = "e" + std::to_string(i + 1);
    ev.pre = random_objective(rng, names, 2);
    for (const auto& n : names) {
      if (chance(rng, 35)) {
        ev.post.emplace_back(delasp::Atom{n, false}, random_objective(rng, names, 1));
      }
    }
    e.events.push_back(std::move(ev));
  }
  e.rel.assign(ne, 0);
  for (int i = 0; i < ne; ++i) {
    for (int j = 0; j < ne; ++j) {
      if (chance(rng, 30)) e.rel[i] |= std::uint64_t{1} << j;
    }
  }
  e.close_relation();
  e.validate();
  return e;
}

inline std::string corpus_file(const std::string& name) {
  return std::string(DELASP_CORPUS_DIR) + "/" + name;
}

}  // namespace testsup
