#pragma once

// Internal evaluation machinery shared by htcore.cpp and worldview.cpp.
// Formulas are compiled to postfix programs over a fixed signature, with
// Belief subformulas factored into an indexed table so their truth values can
// be treated as per-model constants: in a belief-shaped model every world
// sees exactly the non-distinguished worlds, so each L subformula has a
// single h-value and a single t-value model-wide.

#include <cstdint>
#include <functional>
#include <vector>

#include "delasp/error.hpp"
#include "delasp/model.hpp"
#include "delasp/syntax.hpp"

namespace delasp::detail {

struct CompiledFormula {
  struct Op {
    enum Kind : std::uint8_t { False, Lit, LSub, And, Or, Impl } kind;
    std::uint8_t atom = 0;
    bool strong_neg = false;
    std::uint8_t lsub = 0;
  };
  std::vector<Op> ops;       // postfix order
  std::uint64_t atoms_used = 0;
};

// Compiled rule-layer theory. `bodies[k]` is the compiled argument of the
// k-th distinct Belief subformula, collected in postorder so a body only
// references strictly smaller indices.
struct CompiledTheory {
  SigPtr sig;
  std::vector<CompiledFormula> rules;
  std::vector<CompiledFormula> bodies;
  int belief_count() const { return static_cast<int>(bodies.size()); }
};

// Pre (checked): expanded rule-layer formulas, atoms within `sig`.
CompiledTheory compile_theory(const std::vector<Formula>& formulas, SigPtr sig);

// Two-valued evaluation with Belief subformulas fixed to `lv_t`.
bool eval_t(const CompiledFormula& f, const Valuation& t, std::uint32_t lv_t);

// h-level evaluation of the two-level semantics at one world: literals read
// `h`, the implication clause also consults the two-valued level over `t`,
// Belief subformulas read `lv_h`/`lv_t`.
bool eval_h(const CompiledFormula& f, const Valuation& h, const Valuation& t,
            std::uint32_t lv_h, std::uint32_t lv_t);

// Visits every consistent literal valuation over the signature that
// two-valued-satisfies all formulas, pruning branches as soon as a fully
// assigned formula fails. `visit` returns false to stop the enumeration.
void enumerate_t_models(const CompiledTheory& th, std::uint32_t lv_t,
                        const std::function<bool(const Valuation&)>& visit);

// True when some h-assignment below `t` (strictly below it when
// `require_proper`) h-satisfies every rule under the given Belief values.
bool exists_h_model(const CompiledTheory& th, const Valuation& t, std::uint32_t lv_h,
                    std::uint32_t lv_t, bool require_proper);

// Minimality engine for models of belief shape: a cell of totally valued
// worlds plus one distinguished world that nobody sees. Construction
// precomputes, per candidate vector of Belief h-values, whether the cell
// side admits a feasible h-reduction realizing exactly that vector with at
// least one properly reduced cell world.
class BeliefEngine {
 public:
  // Caps guard the 2^k loop over Belief value vectors.
  static constexpr int kMaxBeliefs = 16;

  BeliefEngine(CompiledTheory theory, std::vector<Valuation> cell_worlds);

  const CompiledTheory& theory() const { return th_; }
  std::uint32_t tvals() const { return tvals_; }
  // All cell worlds two-valued-satisfy the theory. When false, no attached
  // model is a model of the theory at all.
  bool cell_total_ok() const { return cell_total_ok_; }

  // Whether the distinguished world valued `root` two-valued-satisfies the
  // theory (the cell side is accounted by cell_total_ok()).
  bool root_total_ok(const Valuation& root) const;

  // Decides equilibrium of the belief model `cell + root`:
  // a total model of the theory with no properly h-reduced model of it over
  // the same domain and relation.
  bool is_equilibrium(const Valuation& root) const;

 private:
  bool reduction_exists(const Valuation& root) const;
  bool cell_side_proper(std::uint32_t lv) const;

  CompiledTheory th_;
  std::vector<Valuation> cell_;
  std::uint32_t tvals_ = 0;
  bool cell_total_ok_ = false;
  // per lv: -1 unknown, else whether a proper cell-side realization exists
  mutable std::vector<std::int8_t> cells_proper_;
};

}  // namespace delasp::detail
