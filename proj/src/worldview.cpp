#include "delasp/worldview.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "delasp/error.hpp"
#include "delasp/htcore.hpp"
#include "eval_internal.hpp"

namespace delasp {

namespace {

using detail::BeliefEngine;
using detail::CompiledTheory;
using detail::compile_theory;
using detail::enumerate_t_models;
using detail::exists_h_model;

void check_atom_cap(const Signature& sig, int cap, const char* what) {
  if (sig.size() > cap) {
    throw CapExceeded(std::string(what) + " limited to " + std::to_string(cap) +
                      " atoms, got " + std::to_string(sig.size()));
  }
}

SigPtr signature_of(const Theory& t) {
  return make_signature(collect_atoms(t));
}

std::vector<Valuation> reduct_answer_sets(const CompiledTheory& th, std::uint32_t lv) {
  std::vector<Valuation> out;
  enumerate_t_models(th, lv, [&](const Valuation& v) {
    if (!exists_h_model(th, v, lv, lv, true)) out.push_back(v);
    return true;
  });
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<Valuation> answer_sets(const Theory& t, SigPtr sig, const Caps& caps) {
  Theory ex = expand_abbreviations(t);
  check_atom_cap(*sig, caps.worldview_atoms, "answer-set search");
  CompiledTheory th = compile_theory(ex.formulas, std::move(sig));
  if (th.belief_count() != 0) {
    throw Error("answer sets ask for a modality-free theory");
  }
  return reduct_answer_sets(th, 0);
}

std::vector<Valuation> answer_sets(const Theory& t, const Caps& caps) {
  return answer_sets(t, signature_of(t), caps);
}

std::vector<InformationCell> world_views(const Theory& t, SigPtr sig, const Caps& caps) {
  Theory ex = expand_abbreviations(t);
  check_atom_cap(*sig, caps.worldview_atoms, "world-view search");
  CompiledTheory th = compile_theory(ex.formulas, sig);
  const int k = th.belief_count();
  if (k > BeliefEngine::kMaxBeliefs) {
    throw CapExceeded("world-view search limited to " +
                      std::to_string(BeliefEngine::kMaxBeliefs) +
                      " belief subformulas, got " + std::to_string(k));
  }

  // Generation: every truth guess over the Belief subformulas contributes the
  // answer sets of the corresponding reduct as one candidate cell.
  std::map<std::string, std::vector<Valuation>> candidates;
  for (std::uint32_t lv = 0; lv < (std::uint32_t{1} << k); ++lv) {
    std::vector<Valuation> cell = reduct_answer_sets(th, lv);
    if (cell.empty()) continue;
    InformationCell ic{sig, cell};
    candidates.emplace(ic.key(*sig), std::move(cell));
  }

  // Verification, the sole arbiter: the cell's worlds must be exactly the
  // valuations whose attachment as a distinguished world is an equilibrium.
  std::vector<InformationCell> out;
  for (auto& [key, cell] : candidates) {
    BeliefEngine engine(th, cell);
    bool ok = true;
    for (const Valuation& v : cell) {
      if (!engine.is_equilibrium(v)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    // Only valuations that two-valued-satisfy the theory under the cell's
    // belief values can be equilibria, so the scan stays inside t-models.
    enumerate_t_models(th, engine.tvals(), [&](const Valuation& v) {
      if (!std::binary_search(cell.begin(), cell.end(), v) && engine.is_equilibrium(v)) {
        ok = false;
        return false;
      }
      return true;
    });
    if (ok) out.push_back(InformationCell{sig, std::move(cell)});
  }
  return out;
}

std::vector<InformationCell> world_views(const Theory& t, const Caps& caps) {
  return world_views(t, signature_of(t), caps);
}

// ---------------------------------------------------------------------------
// Reference enumeration. Everything below evaluates formulas recursively and
// searches reductions by plain DFS, sharing no code with the engine above.

namespace {

void collect_belief_bodies(const Formula& f, std::vector<Formula>& out) {
  switch (f.kind()) {
    case FormulaKind::Falsum:
    case FormulaKind::Lit:
      return;
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies:
      collect_belief_bodies(f.child_a(), out);
      collect_belief_bodies(f.child_b(), out);
      return;
    case FormulaKind::Belief: {
      collect_belief_bodies(f.child_a(), out);
      for (const Formula& g : out) {
        if (g == f.child_a()) return;
      }
      out.push_back(f.child_a());
      return;
    }
    default:
      throw Error("not a rule-layer formula: " + f.key());
  }
}

// Two-valued satisfaction with every Belief subformula read from a guess.
bool guessed_t_eval(const Formula& f, const Valuation& v, const Signature& sig,
                    const std::vector<Formula>& bodies, std::uint32_t guess) {
  switch (f.kind()) {
    case FormulaKind::Falsum:
      return false;
    case FormulaKind::Lit: {
      const Literal& l = f.root().lit;
      int i = sig.index_of(l.atom);
      if (i < 0) throw Error("atom outside the signature: " + l.atom.str());
      return v.has(i, l.strong_neg);
    }
    case FormulaKind::And:
      return guessed_t_eval(f.child_a(), v, sig, bodies, guess) &&
             guessed_t_eval(f.child_b(), v, sig, bodies, guess);
    case FormulaKind::Or:
      return guessed_t_eval(f.child_a(), v, sig, bodies, guess) ||
             guessed_t_eval(f.child_b(), v, sig, bodies, guess);
    case FormulaKind::Implies:
      return !guessed_t_eval(f.child_a(), v, sig, bodies, guess) ||
             guessed_t_eval(f.child_b(), v, sig, bodies, guess);
    case FormulaKind::Belief:
      for (std::size_t j = 0; j < bodies.size(); ++j) {
        if (bodies[j] == f.child_a()) return guess >> j & 1;
      }
      throw Error("belief body missed during collection");
    default:
      throw Error("not a rule-layer formula: " + f.key());
  }
}

void each_consistent_valuation(const Signature& sig, int atom, Valuation v,
                               const std::function<void(const Valuation&)>& visit) {
  if (atom == sig.size()) {
    visit(v);
    return;
  }
  each_consistent_valuation(sig, atom + 1, v, visit);
  Valuation p = v;
  p.set(atom, false);
  each_consistent_valuation(sig, atom + 1, p, visit);
  Valuation n = v;
  n.set(atom, true);
  each_consistent_valuation(sig, atom + 1, n, visit);
}

struct BruteEquilibrium {
  const Theory& theory;
  std::vector<Formula> local_rules;  // modality-free, checkable world by world
  long budget = 20'000'000;

  explicit BruteEquilibrium(const Theory& t) : theory(t) {
    for (const Formula& f : t.formulas) {
      if (is_modality_free(f)) local_rules.push_back(f);
    }
  }

  void spend(long n) {
    budget -= n;
    if (budget < 0) {
      throw CapExceeded("reference equilibrium search ran out of budget");
    }
  }

  bool check(SigPtr sig, const std::vector<Valuation>& cell, const Valuation& root) {
    BeliefHTModel m = BeliefHTModel::make(sig, cell, root);
    if (!ht_models(m.model, theory)) return false;
    return !reduction_below(m.model);
  }

  // DFS over per-world h-subsets of the total model, any proper at one world
  // or more, h-satisfying the whole theory.
  bool reduction_below(HTModel m) {
    return descend(m, 0, false);
  }

  bool descend(HTModel& m, std::size_t w, bool proper) {
    spend(1);
    if (w == m.worlds.size()) {
      if (!proper) return false;
      for (const Formula& f : theory.formulas) {
        for (std::size_t i = 0; i < m.worlds.size(); ++i) {
          if (!ht_satisfies(m, static_cast<int>(i), f)) return false;
        }
      }
      return true;
    }
    const Valuation total = m.worlds[w].vt;
    std::uint64_t mask = total.pos | total.neg;
    std::uint64_t sub = mask;
    while (true) {
      m.worlds[w].vh = total.restrict(sub);
      bool local_ok = true;
      for (const Formula& f : local_rules) {
        if (!ht_satisfies(m, static_cast<int>(w), f)) {
          local_ok = false;
          break;
        }
      }
      if (local_ok && descend(m, w + 1, proper || sub != mask)) return true;
      if (sub == 0) break;
      sub = (sub - 1) & mask;
    }
    m.worlds[w].vh = total;
    return false;
  }
};

}  // namespace

std::vector<InformationCell> world_views_oracle(const Theory& t, SigPtr sig,
                                                const Caps& caps) {
  const int limit = std::min(caps.oracle_atoms, 3);
  if (sig->size() > limit) {
    throw CapExceeded("reference world-view enumeration limited to " +
                      std::to_string(limit) + " atoms");
  }
  Theory ex = expand_abbreviations(t);
  for (const Formula& f : ex.formulas) validate_rule_layer(f);
  std::vector<Formula> bodies;
  for (const Formula& f : ex.formulas) collect_belief_bodies(f, bodies);
  if (bodies.size() > 10) {
    throw CapExceeded("reference world-view enumeration limited to 10 belief bodies");
  }

  // Pool of worlds that could appear in any world view: valuations satisfying
  // the theory two-valued under at least one Belief guess.
  std::vector<Valuation> pool;
  each_consistent_valuation(*sig, 0, {}, [&](const Valuation& v) {
    for (std::uint32_t g = 0; g < (std::uint32_t{1} << bodies.size()); ++g) {
      bool all = true;
      for (const Formula& f : ex.formulas) {
        if (!guessed_t_eval(f, v, *sig, bodies, g)) {
          all = false;
          break;
        }
      }
      if (all) {
        pool.push_back(v);
        return;
      }
    }
  });
  std::sort(pool.begin(), pool.end());
  if (pool.size() > 9) {
    throw CapExceeded("reference world-view enumeration pool too large: " +
                      std::to_string(pool.size()) + " candidate worlds");
  }

  BruteEquilibrium brute(ex);
  std::vector<InformationCell> out;
  for (std::uint32_t cellmask = 1; cellmask < (std::uint32_t{1} << pool.size());
       ++cellmask) {
    std::vector<Valuation> cell;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (cellmask >> i & 1) cell.push_back(pool[i]);
    }
    bool ok = true;
    for (const Valuation& v : cell) {
      if (!brute.check(sig, cell, v)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    each_consistent_valuation(*sig, 0, {}, [&](const Valuation& v) {
      if (!ok || std::binary_search(cell.begin(), cell.end(), v)) return;
      if (brute.check(sig, cell, v)) ok = false;
    });
    if (ok) out.push_back(InformationCell{sig, std::move(cell)});
  }
  std::sort(out.begin(), out.end(), [&](const InformationCell& a, const InformationCell& b) {
    return a.key(*sig) < b.key(*sig);
  });
  return out;
}

bool is_P_classical(const Theory& t, const std::vector<Atom>& p, const Caps& caps) {
  SigPtr sig = signature_of(t);
  std::vector<InformationCell> wvs = world_views(t, sig, caps);
  if (wvs.empty()) return false;
  for (const InformationCell& wv : wvs) {
    for (const Atom& a : p) {
      int i = sig->index_of(a);
      if (i < 0) return false;
      for (const Valuation& v : wv.worlds) {
        if (!v.decides(i)) return false;
      }
    }
  }
  return true;
}

InformationCell project(const InformationCell& cell, const std::vector<Atom>& p,
                        bool strict) {
  SigPtr sig_p = make_signature(p);
  InformationCell out;
  out.sig = sig_p;
  for (const Valuation& v : cell.worlds) {
    Valuation proj;
    for (int j = 0; j < sig_p->size(); ++j) {
      int i = cell.sig->index_of(sig_p->atom(j));
      if (i >= 0 && v.decides(i)) {
        proj.set(j, v.has(i, true));
      } else if (strict) {
        throw Error("projection hits an undecided atom: " + sig_p->atom(j).str());
      } else {
        proj.set(j, true);
      }
    }
    out.worlds.push_back(proj);
  }
  out.canonicalize();
  return out;
}

namespace {

void require_two_valued(const InformationCell& cell) {
  for (const Valuation& v : cell.worlds) {
    for (int i = 0; i < cell.sig->size(); ++i) {
      if (!v.decides(i)) {
        throw Error("characteristic formula needs a two-valued cell; " +
                    cell.sig->atom(i).str() + " is undecided");
      }
    }
  }
}

Formula world_formula(const Signature& sig, const Valuation& v) {
  std::vector<Formula> parts;
  parts.reserve(sig.size());
  for (int i = 0; i < sig.size(); ++i) {
    parts.push_back(Formula::lit(Literal{sig.atom(i), v.has(i, true)}));
  }
  return Formula::conj_all(parts);
}

}  // namespace

Formula characteristic_formula(const InformationCell& cell) {
  require_two_valued(cell);
  InformationCell c = cell;
  c.canonicalize();
  std::vector<Formula> parts;
  parts.reserve(c.worlds.size());
  for (const Valuation& v : c.worlds) parts.push_back(world_formula(*c.sig, v));
  return Formula::disj_all(parts);
}

std::vector<Formula> characteristic_formulas_per_world(const InformationCell& cell) {
  require_two_valued(cell);
  InformationCell c = cell;
  c.canonicalize();
  std::vector<Formula> out;
  out.reserve(c.worlds.size());
  for (const Valuation& v : c.worlds) out.push_back(world_formula(*c.sig, v));
  return out;
}

namespace {

std::string valuation_id_key(const Signature& sig, const Valuation& v) {
  std::string out;
  for (int i = 0; i < sig.size(); ++i) {
    if (!v.decides(i)) continue;
    if (!out.empty()) out += '_';
    if (v.has(i, true)) out += 'n';
    if (sig.atom(i).prev) out += 'p';
    out += sig.atom(i).name;
  }
  return out.empty() ? "empty" : out;
}

}  // namespace

ModResult mod(const Theory& t, const std::vector<Atom>& p, const Caps& caps) {
  ModResult res;
  Theory ex = expand_abbreviations(t);
  res.full_sig = signature_of(ex);
  std::vector<InformationCell> wvs = world_views(ex, res.full_sig, caps);
  if (wvs.empty()) return res;

  // Classicality over the requested atoms and their previous-state copies,
  // restricted to atoms the theory actually mentions.
  std::vector<int> check;
  for (const Atom& a : p) {
    for (bool prev : {false, true}) {
      Atom probe{a.name, a.prev || prev};
      int i = res.full_sig->index_of(probe);
      if (i >= 0) check.push_back(i);
    }
  }
  for (const InformationCell& wv : wvs) {
    for (const Valuation& v : wv.worlds) {
      for (int i : check) {
        if (!v.decides(i)) return res;
      }
    }
  }

  res.model.sig = make_signature(p);
  res.model.flavor = ValFlavor::Classical;
  const Signature& sig_p = *res.model.sig;
  for (std::size_t c = 0; c < wvs.size(); ++c) {
    std::vector<int> cell;
    for (const Valuation& full : wvs[c].worlds) {
      Valuation proj;
      for (int j = 0; j < sig_p.size(); ++j) {
        int i = res.full_sig->index_of(sig_p.atom(j));
        bool truth = i >= 0 && full.has(i, false);
        proj.set(j, !truth);
      }
      cell.push_back(static_cast<int>(res.model.worlds.size()));
      res.model.worlds.push_back(
          {"c" + std::to_string(c) + "_" + valuation_id_key(*res.full_sig, full), proj});
      res.provenance.push_back(full);
    }
    res.model.cells.push_back(std::move(cell));
  }
  res.model.validate();
  res.defined = true;
  return res;
}

}  // namespace delasp
