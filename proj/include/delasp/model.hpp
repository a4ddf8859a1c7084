#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "delasp/error.hpp"
#include "delasp/syntax.hpp"

namespace delasp {

// Ordered atom universe shared by models and compiled formulas. Atom order is
// canonical (current-state atoms alphabetically, then prev-state atoms), so
// bit positions and every serialization derived from them are deterministic.
class Signature {
 public:
  static constexpr int kMaxAtoms = 62;

  explicit Signature(std::vector<Atom> atoms);

  int size() const { return static_cast<int>(atoms_.size()); }
  const Atom& atom(int i) const { return atoms_[i]; }
  const std::vector<Atom>& atoms() const { return atoms_; }

  // -1 when absent.
  int index_of(const Atom& a) const;
  int require(const Atom& a) const;  // throws Error when absent
  bool contains(const Atom& a) const { return index_of(a) >= 0; }

  bool same_atoms(const Signature& o) const { return atoms_ == o.atoms_; }

 private:
  std::vector<Atom> atoms_;
  std::map<Atom, int> index_;
};

using SigPtr = std::shared_ptr<const Signature>;

SigPtr make_signature(std::vector<Atom> atoms);

// Set of objective literals over a signature, as one bit per atom and
// polarity. Doubles as a two-valued valuation when it is complete.
struct Valuation {
  std::uint64_t pos = 0;
  std::uint64_t neg = 0;

  bool operator==(const Valuation& o) const { return pos == o.pos && neg == o.neg; }
  bool operator<(const Valuation& o) const {
    return pos != o.pos ? pos < o.pos : neg < o.neg;
  }

  bool consistent() const { return (pos & neg) == 0; }
  bool decides(int atom) const { return ((pos | neg) >> atom) & 1; }
  bool has(int atom, bool strong_neg) const {
    return ((strong_neg ? neg : pos) >> atom) & 1;
  }
  void set(int atom, bool strong_neg) {
    (strong_neg ? neg : pos) |= std::uint64_t(1) << atom;
  }
  // Literal-set inclusion and restriction to an atom subset.
  bool subset_of(const Valuation& o) const {
    return (pos & ~o.pos) == 0 && (neg & ~o.neg) == 0;
  }
  Valuation restrict(std::uint64_t atom_mask) const {
    return Valuation{pos & atom_mask, neg & atom_mask};
  }
  bool empty() const { return pos == 0 && neg == 0; }

  // Renders as space-separated literals in signature order, e.g. "-d l 'r".
  std::string str(const Signature& sig) const;
};

// Whether worlds carry complete two-valued valuations or partial literal sets.
enum class ValFlavor { Classical, Literal };

// Multi-agentless epistemic model: worlds partitioned into information cells
// (the indistinguishability relation is the induced equivalence).
struct EpistemicModel {
  SigPtr sig;
  ValFlavor flavor = ValFlavor::Classical;
  struct World {
    std::string id;
    Valuation val;
  };
  std::vector<World> worlds;
  std::vector<std::vector<int>> cells;  // partition of world indices

  int world_index(const std::string& id) const;  // -1 when absent
  int cell_of(int world) const;

  // Sorts worlds by id, cell members by index, cells by first member, and
  // remaps indices accordingly. All serializations require this first.
  void canonicalize();
  // Structural checks: partition covers exactly the worlds, ids unique,
  // classical worlds complete and consistent. Throws Error on violation.
  void validate() const;
};

// One information cell over literal valuations; the building block of
// world-view computations. Worlds are kept in canonical (valuation) order.
struct InformationCell {
  SigPtr sig;
  std::vector<Valuation> worlds;

  void canonicalize();
  std::string key(const Signature& s) const;  // canonical dedup/order key
  bool operator==(const InformationCell& o) const { return worlds == o.worlds; }
};

// Model with two valuation levels, h below t, over an arbitrary accessibility
// relation (adjacency bit rows).
struct HTModel {
  SigPtr sig;
  struct World {
    std::string id;
    Valuation vh;
    Valuation vt;
  };
  std::vector<World> worlds;
  std::vector<std::uint64_t> rel;  // rel[w] bit w' set iff w sees w'

  bool total() const;
  HTModel total_counterpart() const;  // vh := vt
  void validate() const;              // vh below vt, rel rows in range
};

// HTModel whose relation is W x (W minus the distinguished world): every
// world sees every world except `root`, and nobody sees `root`.
struct BeliefHTModel {
  HTModel model;
  int root = 0;

  static BeliefHTModel make(SigPtr sig, const std::vector<Valuation>& cell_worlds,
                            const Valuation& root_val);
};

// Action description for product updates: events with preconditions and
// partial postconditions; atoms absent from `post` keep their value.
struct EventModel {
  struct Event {
    std::string id;
    Formula pre;
    std::vector<std::pair<Atom, Formula>> post;  // sorted by atom
  };
  std::vector<Event> events;
  std::vector<std::uint64_t> rel;  // closed reflexively and symmetrically
  std::optional<std::string> point;

  int event_index(const std::string& id) const;
  // Adds self loops and symmetric closures; call after construction.
  void close_relation();
  void validate() const;
};

}  // namespace delasp
