#pragma once

// Product updates of epistemic models: by an ASP theory asserting the
// current model as the previous state, and by an event model.

#include <string>
#include <utility>
#include <vector>

#include "delasp/config.hpp"
#include "delasp/model.hpp"
#include "delasp/syntax.hpp"

namespace delasp {

// One updating step. `defined` false is a value of the partial updating map,
// not a failure; `relation` pairs source world ids with target world ids.
struct UpdateResult {
  bool defined = false;
  EpistemicModel model;
  std::vector<std::pair<std::string, std::string>> relation;
};

// Updates one two-valued cell by a theory: the cell is asserted as the
// previous state through its prev-lifted characteristic formula, the
// extended theory's world views projected to `fluents` become the result,
// and a source connects to a target whose provenance carries exactly the
// source's previous-state literals. Source worlds are named w1, w2, ... in
// canonical order. Undefined when the extended theory has no world view or
// leaves a fluent or previous-state copy from its signature undecided.
UpdateResult product_update_cell(const InformationCell& cell, const Theory& theory,
                                 const std::vector<std::string>& fluents,
                                 const Caps& caps = {});

// Whole-model update: per-cell updates joined disjointly, targets renamed
// c<i>_w<j> by source cell. Cells whose update is undefined drop out; the
// result is undefined only when the model has cells and every one dropped.
UpdateResult asp_update(const EpistemicModel& m, const Theory& theory,
                        const std::vector<std::string>& fluents, const Caps& caps = {});

// Event product update: worlds are the pairs (w,e) whose precondition holds
// at w, named "(w,e)"; valuations follow the event's postconditions with
// unmentioned atoms copied from w; pairs are related when both components
// are, then re-partitioned into connected components. Always defined, with
// relation entries (w, (w,e)) for every surviving pair.
UpdateResult event_product_update(const EpistemicModel& m, const EventModel& e);

}  // namespace delasp
