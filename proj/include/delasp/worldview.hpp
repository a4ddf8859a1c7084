#pragma once

// World views of epistemic logic programs, projection to two-valued cells,
// characteristic formulas, and the model-capture construction that turns a
// theory into an epistemic model with provenance for relation building.

#include <string>
#include <vector>

#include "delasp/config.hpp"
#include "delasp/model.hpp"
#include "delasp/syntax.hpp"

namespace delasp {

// Answer sets of a modality-free theory over `sig`: the consistent literal
// valuations that two-valued-satisfy every formula while no proper h-subset
// still satisfies the theory at the h-level. The one-argument form builds
// the signature from the atoms occurring in the theory.
std::vector<Valuation> answer_sets(const Theory& t, SigPtr sig, const Caps& caps = {});
std::vector<Valuation> answer_sets(const Theory& t, const Caps& caps = {});

// All world views of the theory: information cells whose worlds are exactly
// the valuations I such that cell + I is an equilibrium model. Candidate
// cells come from truth guesses over the Belief subformulas; each candidate
// is accepted or rejected by the equilibrium verifier alone, worlds keyed by
// valuation, result sorted by canonical cell key.
std::vector<InformationCell> world_views(const Theory& t, SigPtr sig, const Caps& caps = {});
std::vector<InformationCell> world_views(const Theory& t, const Caps& caps = {});

// Reference enumeration for tiny signatures (caps.oracle_atoms, at most 3):
// candidate cells are all nonempty subsets of the valuations that could
// two-valued-satisfy the theory under some Belief guess, and the two
// world-view conditions are checked by direct HT evaluation with no shared
// minimization machinery.
std::vector<InformationCell> world_views_oracle(const Theory& t, SigPtr sig,
                                                const Caps& caps = {});

// True when the theory has at least one world view and every world of every
// world view decides every atom of p.
bool is_P_classical(const Theory& t, const std::vector<Atom>& p, const Caps& caps = {});

// Restriction of a cell to the atoms of p, two-valued: an atom is true at a
// world iff it is positively present. With `strict`, an atom of p left
// undecided by some world is an error; otherwise it projects to false.
// Worlds are keyed by valuation, so projections that collide merge.
InformationCell project(const InformationCell& cell, const std::vector<Atom>& p,
                        bool strict = true);

// The formula listing a two-valued cell world by world: a disjunction over
// worlds of the conjunction of every atom's literal, in signature order.
Formula characteristic_formula(const InformationCell& cell);
std::vector<Formula> characteristic_formulas_per_world(const InformationCell& cell);

// Mod: the epistemic model whose cells are the world views projected to p,
// one cell per world view. World identity is preserved (two worlds with the
// same projection stay distinct), and each world keeps its full originating
// valuation so updates can match previous-state assertions against it.
struct ModResult {
  bool defined = false;
  EpistemicModel model;                // valid only when defined
  std::vector<Valuation> provenance;   // full valuation per model world
  SigPtr full_sig;                     // signature of the provenance entries
};

// Undefined (defined = false) when the theory has no world view or some
// world view world leaves an atom of (p or its previous-state copy) in the
// theory signature undecided.
ModResult mod(const Theory& t, const std::vector<Atom>& p, const Caps& caps = {});

}  // namespace delasp
