#pragma once

// Dynamic epistemic model checking: query-layer satisfaction where [o] and
// <o> operators resolve through a registry of updating objects.

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "delasp/config.hpp"
#include "delasp/model.hpp"
#include "delasp/syntax.hpp"
#include "delasp/update.hpp"

namespace delasp {

// Named updating objects: a theory with asserted action facts and a fluent
// set, or an event model, optionally pointed at one event. Updates are
// memoized per canonical model rendering, so repeated checks against the
// same model reuse the computed successor.
class EvaluationRegistry {
 public:
  void bind_theory(const std::string& id, Theory theory,
                   std::vector<std::string> asserts);
  void bind_event(const std::string& id, EventModel model,
                  std::optional<std::string> point);
  bool has(const std::string& id) const;

  // The updating step behind [id] applied to m. For a pointed event binding
  // the relation is restricted to pairs targeting the point; for a whole
  // event model it spans all events. Caps are not part of the memo key, so
  // keep one registry per caps configuration.
  std::shared_ptr<const UpdateResult> update(const std::string& id,
                                             const EpistemicModel& m,
                                             const Caps& caps = {});

 private:
  struct TheoryBinding {
    Theory theory;
    std::vector<std::string> asserts;
  };
  struct EventBinding {
    EventModel model;
    std::optional<std::string> point;
  };

  std::map<std::string, TheoryBinding> theories_;
  std::map<std::string, EventBinding> events_;

  mutable std::mutex mu_;
  std::map<std::pair<std::string, std::string>, std::shared_ptr<const UpdateResult>>
      memo_;
};

// Satisfaction at one world: classical connectives, ~ as complement, K over
// the world's cell, and [o]f true iff the update behind o is defined and f
// holds at every related target world. <o>f evaluates as ~[o]~f.
bool del_satisfies(const EpistemicModel& m, int world, const Formula& f,
                   EvaluationRegistry& reg, const Caps& caps = {});

// Satisfaction at every world of the model.
bool del_models(const EpistemicModel& m, const Formula& f, EvaluationRegistry& reg,
                const Caps& caps = {});

// Satisfaction at every world of every supplied model.
bool entails_over(const std::vector<EpistemicModel>& models, const Formula& f,
                  EvaluationRegistry& reg, const Caps& caps = {});

}  // namespace delasp
