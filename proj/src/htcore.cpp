#include "delasp/htcore.hpp"

#include <algorithm>

#include "delasp/error.hpp"
#include "eval_internal.hpp"

namespace delasp {

namespace {

bool lit_holds(const Valuation& v, const Signature& sig, const Literal& l) {
  int i = sig.index_of(l.atom);
  if (i < 0) throw Error("atom outside the model signature: " + l.atom.str());
  return v.has(i, l.strong_neg);
}

bool ht_eval(const HTModel& m, int w, const Formula& f, bool at_h) {
  switch (f.kind()) {
    case FormulaKind::Falsum:
      return false;
    case FormulaKind::Lit: {
      const auto& world = m.worlds[w];
      return lit_holds(at_h ? world.vh : world.vt, *m.sig, f.root().lit);
    }
    case FormulaKind::And:
      return ht_eval(m, w, f.child_a(), at_h) && ht_eval(m, w, f.child_b(), at_h);
    case FormulaKind::Or:
      return ht_eval(m, w, f.child_a(), at_h) || ht_eval(m, w, f.child_b(), at_h);
    case FormulaKind::Implies: {
      bool t_part = !ht_eval(m, w, f.child_a(), false) || ht_eval(m, w, f.child_b(), false);
      if (!at_h || !t_part) return t_part;
      return !ht_eval(m, w, f.child_a(), true) || ht_eval(m, w, f.child_b(), true);
    }
    case FormulaKind::Belief: {
      for (std::size_t j = 0; j < m.worlds.size(); ++j) {
        if (!(m.rel[w] >> j & 1)) continue;
        if (!ht_eval(m, static_cast<int>(j), f.child_a(), at_h)) return false;
      }
      return true;
    }
    case FormulaKind::Know:
      return ht_eval(m, w, f.child_a(), at_h) &&
             ht_eval(m, w, Formula::belief(f.child_a()), at_h);
    default:
      throw Error("not a rule-layer formula: " + f.key());
  }
}

}  // namespace

bool ht_satisfies(const HTModel& m, int world, const Formula& f, bool at_h) {
  if (world < 0 || world >= static_cast<int>(m.worlds.size())) {
    throw Error("world index out of range");
  }
  return ht_eval(m, world, f, at_h);
}

bool ht_models(const HTModel& m, const Theory& t, bool at_h) {
  for (const Formula& f : t.formulas) {
    for (std::size_t w = 0; w < m.worlds.size(); ++w) {
      if (!ht_eval(m, static_cast<int>(w), f, at_h)) return false;
    }
  }
  return true;
}

bool classical_satisfies(const EpistemicModel& m, int world, const Formula& f) {
  if (m.flavor != ValFlavor::Classical) {
    throw Error("classical satisfaction needs a two-valued model");
  }
  if (world < 0 || world >= static_cast<int>(m.worlds.size())) {
    throw Error("world index out of range");
  }
  switch (f.kind()) {
    case FormulaKind::Falsum:
      return false;
    case FormulaKind::Lit:
      return lit_holds(m.worlds[world].val, *m.sig, f.root().lit);
    case FormulaKind::And:
      return classical_satisfies(m, world, f.child_a()) &&
             classical_satisfies(m, world, f.child_b());
    case FormulaKind::Or:
      return classical_satisfies(m, world, f.child_a()) ||
             classical_satisfies(m, world, f.child_b());
    case FormulaKind::Implies:
      return !classical_satisfies(m, world, f.child_a()) ||
             classical_satisfies(m, world, f.child_b());
    case FormulaKind::ClassNeg:
      return !classical_satisfies(m, world, f.child_a());
    case FormulaKind::Know: {
      int c = m.cell_of(world);
      for (int w : m.cells[c]) {
        if (!classical_satisfies(m, w, f.child_a())) return false;
      }
      return true;
    }
    default:
      throw Error("dynamic or belief operator outside its evaluator: " + f.key());
  }
}

BeliefHTModel attach_belief_world(const InformationCell& cell, const Valuation& extra) {
  return BeliefHTModel::make(cell.sig, cell.worlds, extra);
}

namespace {

struct ZSearch {
  const HTModel& m1;
  const HTModel& m2;
  bool equal_h;

  // z[i] holds the bitset of m2 worlds currently paired with m1 world i.
  std::vector<std::uint64_t> z;

  bool pair_ok(int i, int j) const {
    const auto& a = m1.worlds[i];
    const auto& b = m2.worlds[j];
    if (!(a.vt == b.vt)) return false;
    if (equal_h) return a.vh == b.vh;
    return a.vh.subset_of(b.vh);
  }

  bool run() {
    const int n1 = static_cast<int>(m1.worlds.size());
    const int n2 = static_cast<int>(m2.worlds.size());
    z.assign(n1, 0);
    for (int i = 0; i < n1; ++i) {
      for (int j = 0; j < n2; ++j) {
        if (pair_ok(i, j)) z[i] |= std::uint64_t{1} << j;
      }
    }
    // Greatest fixpoint: drop pairs whose forth or back condition fails.
    bool changed = true;
    while (changed) {
      changed = false;
      for (int i = 0; i < n1; ++i) {
        for (int j = 0; j < n2; ++j) {
          if (!(z[i] >> j & 1)) continue;
          if (!forth(i, j) || !back(i, j)) {
            z[i] &= ~(std::uint64_t{1} << j);
            changed = true;
          }
        }
      }
    }
    // Totality in both directions.
    std::uint64_t cover2 = 0;
    for (int i = 0; i < n1; ++i) {
      if (z[i] == 0) return false;
      cover2 |= z[i];
    }
    std::uint64_t all2 =
        m2.worlds.size() == 64 ? ~std::uint64_t{0}
                               : (std::uint64_t{1} << m2.worlds.size()) - 1;
    return cover2 == all2;
  }

  bool forth(int i, int j) const {
    for (std::size_t i2 = 0; i2 < m1.worlds.size(); ++i2) {
      if (!(m1.rel[i] >> i2 & 1)) continue;
      bool matched = false;
      for (std::size_t j2 = 0; j2 < m2.worlds.size() && !matched; ++j2) {
        matched = (m2.rel[j] >> j2 & 1) && (z[i2] >> j2 & 1);
      }
      if (!matched) return false;
    }
    return true;
  }

  bool back(int i, int j) const {
    for (std::size_t j2 = 0; j2 < m2.worlds.size(); ++j2) {
      if (!(m2.rel[j] >> j2 & 1)) continue;
      bool matched = false;
      for (std::size_t i2 = 0; i2 < m1.worlds.size() && !matched; ++i2) {
        matched = (m1.rel[i] >> i2 & 1) && (z[i2] >> j2 & 1);
      }
      if (!matched) return false;
    }
    return true;
  }
};

void check_bisim_inputs(const HTModel& m1, const HTModel& m2, const Caps& caps) {
  if (!m1.sig->same_atoms(*m2.sig)) {
    throw Error("models compared over different signatures");
  }
  if (static_cast<int>(m1.worlds.size()) > caps.bisim_worlds ||
      static_cast<int>(m2.worlds.size()) > caps.bisim_worlds) {
    throw CapExceeded("model comparison limited to " +
                      std::to_string(caps.bisim_worlds) + " worlds per side");
  }
}

}  // namespace

bool preceq(const HTModel& m1, const HTModel& m2, const Caps& caps) {
  check_bisim_inputs(m1, m2, caps);
  ZSearch s{m1, m2, false, {}};
  return s.run();
}

bool approx(const HTModel& m1, const HTModel& m2, const Caps& caps) {
  check_bisim_inputs(m1, m2, caps);
  ZSearch s{m1, m2, true, {}};
  return s.run();
}

bool strictly_less(const HTModel& m1, const HTModel& m2, const Caps& caps) {
  return preceq(m1, m2, caps) && !approx(m1, m2, caps);
}

bool is_equilibrium(const BeliefHTModel& m, const Theory& t, const Caps& caps) {
  if (!m.model.total()) throw Error("equilibrium test needs a total model");
  const int n = static_cast<int>(m.model.worlds.size());
  if (n > caps.equilibrium_worlds) {
    throw CapExceeded("equilibrium test limited to " +
                      std::to_string(caps.equilibrium_worlds) + " worlds");
  }
  if (m.model.sig->size() > caps.equilibrium_atoms) {
    throw CapExceeded("equilibrium test limited to " +
                      std::to_string(caps.equilibrium_atoms) + " atoms");
  }
  // The relation must have the belief shape: everyone sees exactly the
  // non-distinguished worlds.
  std::uint64_t expect = 0;
  for (int w = 0; w < n; ++w) {
    if (w != m.root) expect |= std::uint64_t{1} << w;
  }
  for (int w = 0; w < n; ++w) {
    if (m.model.rel[w] != expect) {
      throw Error("relation does not have the belief-model shape");
    }
  }
  std::vector<Valuation> cell;
  cell.reserve(n - 1);
  for (int w = 0; w < n; ++w) {
    if (w != m.root) cell.push_back(m.model.worlds[w].vt);
  }
  Theory expanded = expand_abbreviations(t);
  detail::CompiledTheory ct = detail::compile_theory(expanded.formulas, m.model.sig);
  detail::BeliefEngine engine(std::move(ct), cell);
  return engine.is_equilibrium(m.model.worlds[m.root].vt);
}

}  // namespace delasp
