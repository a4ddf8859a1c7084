#include "delasp/config.hpp"

#include <cstdlib>
#include <string>

#include "delasp/error.hpp"

namespace delasp {

namespace {

void read_int(const char* name, int& slot) {
  const char* v = std::getenv(name);
  if (!v || !*v) return;
  try {
    int parsed = std::stoi(v);
    if (parsed <= 0) throw Error(std::string(name) + " must be positive");
    slot = parsed;
  } catch (const Error&) {
    throw;
  } catch (...) {
    throw Error(std::string("bad integer in ") + name + ": " + v);
  }
}

void read_u64(const char* name, std::uint64_t& slot) {
  const char* v = std::getenv(name);
  if (!v || !*v) return;
  try {
    slot = std::stoull(v);
  } catch (...) {
    throw Error(std::string("bad integer in ") + name + ": " + v);
  }
}

}  // namespace

Caps Caps::from_env() {
  Caps c;
  read_int("DELASP_CAP_ATOMS", c.worldview_atoms);
  read_int("DELASP_CAP_WORLDS", c.bisim_worlds);
  read_int("DELASP_CAP_EQ_WORLDS", c.equilibrium_worlds);
  read_int("DELASP_CAP_EQ_ATOMS", c.equilibrium_atoms);
  read_int("DELASP_CAP_ORACLE_ATOMS", c.oracle_atoms);
  read_u64("DELASP_SEED", c.seed);
  return c;
}

}  // namespace delasp
