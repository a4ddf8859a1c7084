#include "delasp/model.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace delasp {

Signature::Signature(std::vector<Atom> atoms) {
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  if (static_cast<int>(atoms.size()) > kMaxAtoms)
    throw Error("signature too large: " + std::to_string(atoms.size()) + " atoms");
  atoms_ = std::move(atoms);
  for (int i = 0; i < static_cast<int>(atoms_.size()); ++i) index_[atoms_[i]] = i;
}

int Signature::index_of(const Atom& a) const {
  auto it = index_.find(a);
  return it == index_.end() ? -1 : it->second;
}

int Signature::require(const Atom& a) const {
  int i = index_of(a);
  if (i < 0) throw Error("atom not in signature: " + a.str());
  return i;
}

SigPtr make_signature(std::vector<Atom> atoms) {
  return std::make_shared<const Signature>(std::move(atoms));
}

std::string Valuation::str(const Signature& sig) const {
  std::string out;
  for (int i = 0; i < sig.size(); ++i) {
    if (!decides(i)) continue;
    if (!out.empty()) out += ' ';
    if (has(i, true)) out += '-';
    out += sig.atom(i).str();
  }
  return out;
}

int EpistemicModel::world_index(const std::string& id) const {
  for (int i = 0; i < static_cast<int>(worlds.size()); ++i)
    if (worlds[i].id == id) return i;
  return -1;
}

int EpistemicModel::cell_of(int world) const {
  for (int c = 0; c < static_cast<int>(cells.size()); ++c)
    for (int w : cells[c])
      if (w == world) return c;
  throw Error("world not covered by any cell: " + worlds[world].id);
}

void EpistemicModel::canonicalize() {
  std::vector<int> order(worlds.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return worlds[a].id < worlds[b].id; });
  std::vector<int> pos(worlds.size());
  for (int i = 0; i < static_cast<int>(order.size()); ++i) pos[order[i]] = i;

  std::vector<World> sorted;
  sorted.reserve(worlds.size());
  for (int i : order) sorted.push_back(std::move(worlds[i]));
  worlds = std::move(sorted);

  for (auto& cell : cells) {
    for (int& w : cell) w = pos[w];
    std::sort(cell.begin(), cell.end());
  }
  std::sort(cells.begin(), cells.end());
}

void EpistemicModel::validate() const {
  std::set<std::string> ids;
  std::uint64_t universe =
      sig->size() == 64 ? ~std::uint64_t(0) : (std::uint64_t(1) << sig->size()) - 1;
  for (const auto& w : worlds) {
    if (!ids.insert(w.id).second) throw Error("duplicate world id: " + w.id);
    if ((w.val.pos | w.val.neg) & ~universe)
      throw Error("valuation bit outside the signature in world " + w.id);
    if (!w.val.consistent())
      throw Error("inconsistent valuation in world " + w.id);
    if (flavor == ValFlavor::Classical && (w.val.pos | w.val.neg) != universe)
      throw Error("world " + w.id + " leaves an atom undecided in a two-valued model");
  }
  std::vector<int> seen(worlds.size(), 0);
  for (const auto& cell : cells) {
    if (cell.empty()) throw Error("empty information cell");
    for (int w : cell) {
      if (w < 0 || w >= static_cast<int>(worlds.size()))
        throw Error("cell refers to a world out of range");
      if (seen[w]++) throw Error("world in two cells: " + worlds[w].id);
    }
  }
  for (int i = 0; i < static_cast<int>(worlds.size()); ++i)
    if (!seen[i]) throw Error("world in no cell: " + worlds[i].id);
}

void InformationCell::canonicalize() {
  std::sort(worlds.begin(), worlds.end());
  worlds.erase(std::unique(worlds.begin(), worlds.end()), worlds.end());
}

std::string InformationCell::key(const Signature& s) const {
  std::string out;
  for (const auto& v : worlds) {
    out += '{';
    out += v.str(s);
    out += '}';
  }
  return out;
}

bool HTModel::total() const {
  for (const auto& w : worlds)
    if (!(w.vh == w.vt)) return false;
  return true;
}

HTModel HTModel::total_counterpart() const {
  HTModel out = *this;
  for (auto& w : out.worlds) w.vh = w.vt;
  return out;
}

void HTModel::validate() const {
  if (rel.size() != worlds.size()) throw Error("relation rows do not match worlds");
  std::uint64_t range = worlds.size() == 64
                            ? ~std::uint64_t(0)
                            : (std::uint64_t(1) << worlds.size()) - 1;
  for (const auto& row : rel)
    if (row & ~range) throw Error("relation bit outside the world set");
  for (const auto& w : worlds)
    if (!w.vh.subset_of(w.vt))
      throw Error("h-valuation not below t-valuation in world " + w.id);
}

BeliefHTModel BeliefHTModel::make(SigPtr sig, const std::vector<Valuation>& cell_worlds,
                                  const Valuation& root_val) {
  if (!root_val.consistent())
    throw Error("inconsistent valuation for the distinguished world");
  BeliefHTModel out;
  out.model.sig = std::move(sig);
  out.root = 0;
  out.model.worlds.push_back({"w0", root_val, root_val});
  for (size_t i = 0; i < cell_worlds.size(); ++i) {
    if (!cell_worlds[i].consistent())
      throw Error("inconsistent valuation in cell world " + std::to_string(i));
    out.model.worlds.push_back({"w" + std::to_string(i + 1), cell_worlds[i],
                                cell_worlds[i]});
  }
  // Every world sees exactly the non-distinguished worlds.
  std::uint64_t row = 0;
  for (size_t i = 0; i < cell_worlds.size(); ++i) row |= std::uint64_t(1) << (i + 1);
  out.model.rel.assign(out.model.worlds.size(), row);
  return out;
}

int EventModel::event_index(const std::string& id) const {
  for (int i = 0; i < static_cast<int>(events.size()); ++i)
    if (events[i].id == id) return i;
  return -1;
}

void EventModel::close_relation() {
  rel.resize(events.size(), 0);
  for (int i = 0; i < static_cast<int>(events.size()); ++i) {
    rel[i] |= std::uint64_t(1) << i;
    for (int j = 0; j < static_cast<int>(events.size()); ++j)
      if ((rel[j] >> i) & 1) rel[i] |= std::uint64_t(1) << j;
  }
  for (int i = 0; i < static_cast<int>(events.size()); ++i)
    for (int j = 0; j < static_cast<int>(events.size()); ++j)
      if ((rel[i] >> j) & 1) rel[j] |= std::uint64_t(1) << i;
}

void EventModel::validate() const {
  std::set<std::string> ids;
  for (const auto& e : events) {
    if (!ids.insert(e.id).second) throw Error("duplicate event id: " + e.id);
    validate_query_layer(e.pre);
    if (!is_dynamic_free(e.pre))
      throw Error("event precondition must not contain update modalities: " + e.id);
    for (const auto& [atom, f] : e.post) {
      if (atom.prev) throw Error("postcondition assigns a prev atom in event " + e.id);
      validate_query_layer(f);
      if (!is_dynamic_free(f))
        throw Error("event postcondition must not contain update modalities: " + e.id);
    }
  }
  if (rel.size() != events.size()) throw Error("event relation rows do not match events");
  for (int i = 0; i < static_cast<int>(events.size()); ++i) {
    if (!((rel[i] >> i) & 1)) throw Error("event relation must be reflexive");
    for (int j = 0; j < static_cast<int>(events.size()); ++j)
      if (((rel[i] >> j) & 1) != ((rel[j] >> i) & 1))
        throw Error("event relation must be symmetric");
  }
  if (point && event_index(*point) < 0)
    throw Error("designated event not declared: " + *point);
}

}  // namespace delasp
