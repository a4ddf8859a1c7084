#include "delasp/update.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "delasp/error.hpp"
#include "delasp/htcore.hpp"
#include "delasp/worldview.hpp"

namespace delasp {

namespace {

std::vector<Atom> fluent_atoms(const std::vector<std::string>& fluents) {
  std::vector<Atom> out;
  out.reserve(fluents.size());
  for (const auto& n : fluents) out.push_back(Atom{n, false});
  return out;
}

// True when the provenance valuation asserts exactly `source` as the
// previous state, compared over the previous-state copies the extended
// theory mentions.
bool prev_matches(const Valuation& prov, const Signature& full_sig,
                  const Valuation& source, const Signature& cell_sig) {
  for (int i = 0; i < cell_sig.size(); ++i) {
    Atom prev{cell_sig.atom(i).name, true};
    int j = full_sig.index_of(prev);
    if (j < 0) continue;
    if (!prov.decides(j)) return false;
    if (prov.has(j, true) != source.has(i, true)) return false;
  }
  return true;
}

}  // namespace

UpdateResult product_update_cell(const InformationCell& cell, const Theory& theory,
                                 const std::vector<std::string>& fluents,
                                 const Caps& caps) {
  for (const Atom& a : cell.sig->atoms()) {
    if (a.prev || std::find(fluents.begin(), fluents.end(), a.name) == fluents.end()) {
      throw Error("cell atom outside the fluent set: " + a.str());
    }
  }
  InformationCell src = cell;
  src.canonicalize();

  Theory extended = theory;
  extended.formulas.push_back(prev_lift(characteristic_formula(src)));

  UpdateResult res;
  ModResult captured = mod(extended, fluent_atoms(fluents), caps);
  if (!captured.defined) return res;
  res.defined = true;
  res.model = std::move(captured.model);
  for (std::size_t s = 0; s < src.worlds.size(); ++s) {
    for (std::size_t w = 0; w < res.model.worlds.size(); ++w) {
      if (prev_matches(captured.provenance[w], *captured.full_sig, src.worlds[s],
                       *src.sig)) {
        res.relation.emplace_back("w" + std::to_string(s + 1), res.model.worlds[w].id);
      }
    }
  }
  return res;
}

UpdateResult asp_update(const EpistemicModel& m, const Theory& theory,
                        const std::vector<std::string>& fluents, const Caps& caps) {
  if (m.flavor != ValFlavor::Classical) {
    throw Error("theory updates need a two-valued model");
  }
  EpistemicModel src = m;
  src.canonicalize();
  src.validate();

  UpdateResult res;
  res.model.sig = make_signature(fluent_atoms(fluents));
  res.model.flavor = ValFlavor::Classical;

  bool any_live = false;
  for (std::size_t c = 0; c < src.cells.size(); ++c) {
    InformationCell cell;
    cell.sig = src.sig;
    for (int w : src.cells[c]) cell.worlds.push_back(src.worlds[w].val);
    cell.canonicalize();

    Theory extended = theory;
    extended.formulas.push_back(prev_lift(characteristic_formula(cell)));
    ModResult captured = mod(extended, fluent_atoms(fluents), caps);
    if (!captured.defined) continue;
    any_live = true;

    // Disjoint union with fresh names keyed by the source cell.
    int base = static_cast<int>(res.model.worlds.size());
    std::vector<std::string> renamed(captured.model.worlds.size());
    for (std::size_t w = 0; w < captured.model.worlds.size(); ++w) {
      renamed[w] = "c" + std::to_string(c) + "_w" + std::to_string(w + 1);
      res.model.worlds.push_back({renamed[w], captured.model.worlds[w].val});
    }
    for (const auto& target_cell : captured.model.cells) {
      std::vector<int> shifted;
      shifted.reserve(target_cell.size());
      for (int w : target_cell) shifted.push_back(base + w);
      res.model.cells.push_back(std::move(shifted));
    }
    for (int w : src.cells[c]) {
      for (std::size_t t = 0; t < captured.model.worlds.size(); ++t) {
        if (prev_matches(captured.provenance[t], *captured.full_sig,
                         src.worlds[w].val, *src.sig)) {
          res.relation.emplace_back(src.worlds[w].id, renamed[t]);
        }
      }
    }
  }
  res.defined = src.cells.empty() || any_live;
  if (!res.defined) {
    res.model = {};
    res.relation.clear();
  } else {
    res.model.validate();
  }
  return res;
}

UpdateResult event_product_update(const EpistemicModel& m, const EventModel& e) {
  if (m.flavor != ValFlavor::Classical) {
    throw Error("event updates need a two-valued model");
  }
  e.validate();
  EpistemicModel src = m;
  src.canonicalize();
  src.validate();
  for (const auto& ev : e.events) {
    for (const auto& [atom, unused] : ev.post) {
      if (!src.sig->contains(atom)) {
        throw Error("postcondition targets an atom outside the model: " + atom.str());
      }
    }
  }

  UpdateResult res;
  res.defined = true;
  res.model.sig = src.sig;
  res.model.flavor = ValFlavor::Classical;

  struct Pair {
    int world;
    int event;
  };
  std::vector<Pair> pairs;
  for (std::size_t w = 0; w < src.worlds.size(); ++w) {
    for (std::size_t ev = 0; ev < e.events.size(); ++ev) {
      if (!classical_satisfies(src, static_cast<int>(w), e.events[ev].pre)) continue;
      Valuation val;
      for (int i = 0; i < src.sig->size(); ++i) {
        const Atom& a = src.sig->atom(i);
        bool truth = src.worlds[w].val.has(i, false);
        for (const auto& [atom, f] : e.events[ev].post) {
          if (atom == a) {
            truth = classical_satisfies(src, static_cast<int>(w), f);
            break;
          }
        }
        val.set(i, !truth);
      }
      std::string id =
          "(" + src.worlds[w].id + "," + e.events[ev].id + ")";
      res.model.worlds.push_back({id, val});
      res.relation.emplace_back(src.worlds[w].id, id);
      pairs.push_back({static_cast<int>(w), static_cast<int>(ev)});
    }
  }

  // Components of the pairwise relation become the new cells.
  std::vector<int> parent(pairs.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t a = 0; a < pairs.size(); ++a) {
    for (std::size_t b = a + 1; b < pairs.size(); ++b) {
      bool worlds_related = src.cell_of(pairs[a].world) == src.cell_of(pairs[b].world);
      bool events_related = e.rel[pairs[a].event] >> pairs[b].event & 1;
      if (worlds_related && events_related) parent[find(a)] = find(b);
    }
  }
  std::vector<std::vector<int>> groups(pairs.size());
  for (std::size_t a = 0; a < pairs.size(); ++a) {
    groups[find(static_cast<int>(a))].push_back(static_cast<int>(a));
  }
  for (auto& g : groups) {
    if (!g.empty()) res.model.cells.push_back(std::move(g));
  }
  res.model.canonicalize();
  res.model.validate();
  return res;
}

}  // namespace delasp
