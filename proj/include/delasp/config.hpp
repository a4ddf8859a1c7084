#pragma once

#include <cstdint>

namespace delasp {

// Tunable limits and defaults. Environment variables with the DELASP_ prefix
// override the defaults; CLI flags override both.
struct Caps {
  int worldview_atoms = 14;     // DELASP_CAP_ATOMS
  int bisim_worlds = 8;         // DELASP_CAP_WORLDS
  int equilibrium_worlds = 6;   // DELASP_CAP_EQ_WORLDS
  int equilibrium_atoms = 14;   // DELASP_CAP_EQ_ATOMS
  int oracle_atoms = 2;         // DELASP_CAP_ORACLE_ATOMS (3 at most)
  std::uint64_t seed = 0;       // DELASP_SEED

  static Caps from_env();
};

}  // namespace delasp
