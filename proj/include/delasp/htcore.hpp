#pragma once

// Satisfaction and comparison on here-and-there structures: HT satisfaction,
// classical satisfaction over two-valued models, the simulation preorder with
// its derived equivalence, and the equilibrium test for belief HT-models.

#include "delasp/config.hpp"
#include "delasp/model.hpp"
#include "delasp/syntax.hpp"

namespace delasp {

// HT satisfaction of a rule-layer formula at a world. `at_h` true evaluates
// the here level (the default), false the there level. L(f) holds when f
// holds at every related world on the same level; K(f) is read as f & L(f).
bool ht_satisfies(const HTModel& m, int world, const Formula& f, bool at_h = true);

// Every formula of the theory at every world.
bool ht_models(const HTModel& m, const Theory& t, bool at_h = true);

// Classical satisfaction of a dynamic-free query-layer formula at a world of
// a two-valued model. K(f) quantifies over the world's information cell.
bool classical_satisfies(const EpistemicModel& m, int world, const Formula& f);

// The total belief HT-model over `cell` plus a fresh distinguished world
// valued `extra`.
BeliefHTModel attach_belief_world(const InformationCell& cell, const Valuation& extra);

// m1 is simulated by m2: some total relation pairs worlds with equal
// t-valuations and with h-valuations growing from m1 to m2, and respects the
// two accessibility relations in both directions. approx demands equal
// h-valuations through one such relation; strictly_less is preceq without
// approx. Throws CapExceeded above caps.bisim_worlds worlds per side.
bool preceq(const HTModel& m1, const HTModel& m2, const Caps& caps = {});
bool approx(const HTModel& m1, const HTModel& m2, const Caps& caps = {});
bool strictly_less(const HTModel& m1, const HTModel& m2, const Caps& caps = {});

// True when the total model satisfies the theory and no weakening of its
// h-valuations over the same worlds and relation still does. Requires a
// total model; guarded by caps.equilibrium_worlds and caps.equilibrium_atoms.
bool is_equilibrium(const BeliefHTModel& m, const Theory& t, const Caps& caps = {});

}  // namespace delasp
