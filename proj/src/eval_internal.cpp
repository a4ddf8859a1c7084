#include "eval_internal.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <string>

namespace delasp::detail {

namespace {

struct Compiler {
  SigPtr sig;
  std::vector<CompiledFormula>* bodies;
  std::map<std::string, int> body_index;

  void emit(const Formula& f, CompiledFormula& out) {
    using Op = CompiledFormula::Op;
    switch (f.kind()) {
      case FormulaKind::Falsum:
        out.ops.push_back({Op::False, 0, false, 0});
        return;
      case FormulaKind::Lit: {
        const Literal& l = f.root().lit;
        int idx = sig->require(l.atom);
        out.ops.push_back({Op::Lit, static_cast<std::uint8_t>(idx), l.strong_neg, 0});
        out.atoms_used |= std::uint64_t{1} << idx;
        return;
      }
      case FormulaKind::Belief: {
        int idx = body(f.child_a());
        if (idx >= BeliefEngine::kMaxBeliefs) {
          throw CapExceeded("too many distinct belief subformulas (cap " +
                            std::to_string(BeliefEngine::kMaxBeliefs) + ")");
        }
        out.ops.push_back({Op::LSub, 0, false, static_cast<std::uint8_t>(idx)});
        return;
      }
      case FormulaKind::And:
      case FormulaKind::Or:
      case FormulaKind::Implies: {
        emit(f.child_a(), out);
        emit(f.child_b(), out);
        auto k = f.kind() == FormulaKind::And  ? Op::And
                 : f.kind() == FormulaKind::Or ? Op::Or
                                               : Op::Impl;
        out.ops.push_back({k, 0, false, 0});
        return;
      }
      default:
        throw Error("cannot compile formula outside the rule fragment: " + f.key());
    }
  }

  int body(const Formula& arg) {
    std::string key = arg.key();
    auto it = body_index.find(key);
    if (it != body_index.end()) return it->second;
    CompiledFormula cf;
    emit(arg, cf);
    int idx = static_cast<int>(bodies->size());
    bodies->push_back(std::move(cf));
    body_index.emplace(std::move(key), idx);
    return idx;
  }
};

}  // namespace

CompiledTheory compile_theory(const std::vector<Formula>& formulas, SigPtr sig) {
  CompiledTheory th;
  th.sig = std::move(sig);
  Compiler c{th.sig, &th.bodies, {}};
  th.rules.reserve(formulas.size());
  for (const Formula& f : formulas) {
    CompiledFormula cf;
    c.emit(f, cf);
    th.rules.push_back(std::move(cf));
  }
  return th;
}

bool eval_t(const CompiledFormula& f, const Valuation& t, std::uint32_t lv_t) {
  using Op = CompiledFormula::Op;
  bool stack[64];
  int sp = 0;
  for (const auto& op : f.ops) {
    switch (op.kind) {
      case Op::False:
        stack[sp++] = false;
        break;
      case Op::Lit: {
        std::uint64_t bits = op.strong_neg ? t.neg : t.pos;
        stack[sp++] = (bits >> op.atom) & 1;
        break;
      }
      case Op::LSub:
        stack[sp++] = (lv_t >> op.lsub) & 1;
        break;
      case Op::And:
        sp--;
        stack[sp - 1] = stack[sp - 1] && stack[sp];
        break;
      case Op::Or:
        sp--;
        stack[sp - 1] = stack[sp - 1] || stack[sp];
        break;
      case Op::Impl:
        sp--;
        stack[sp - 1] = !stack[sp - 1] || stack[sp];
        break;
    }
  }
  return stack[0];
}

bool eval_h(const CompiledFormula& f, const Valuation& h, const Valuation& t,
            std::uint32_t lv_h, std::uint32_t lv_t) {
  // Each stack entry packs the h-value in bit 0 and the t-value in bit 1.
  using Op = CompiledFormula::Op;
  std::uint8_t stack[64];
  int sp = 0;
  for (const auto& op : f.ops) {
    switch (op.kind) {
      case Op::False:
        stack[sp++] = 0;
        break;
      case Op::Lit: {
        std::uint64_t hb = op.strong_neg ? h.neg : h.pos;
        std::uint64_t tb = op.strong_neg ? t.neg : t.pos;
        stack[sp++] = static_cast<std::uint8_t>(((hb >> op.atom) & 1) |
                                                (((tb >> op.atom) & 1) << 1));
        break;
      }
      case Op::LSub:
        stack[sp++] = static_cast<std::uint8_t>(((lv_h >> op.lsub) & 1) |
                                                (((lv_t >> op.lsub) & 1) << 1));
        break;
      case Op::And:
        sp--;
        stack[sp - 1] = stack[sp - 1] & stack[sp];
        break;
      case Op::Or:
        sp--;
        stack[sp - 1] = stack[sp - 1] | stack[sp];
        break;
      case Op::Impl: {
        sp--;
        std::uint8_t a = stack[sp - 1], b = stack[sp];
        std::uint8_t tv = (~a | b) & 2;
        std::uint8_t hv = ((~a | b) & 1) & (tv >> 1);
        stack[sp - 1] = static_cast<std::uint8_t>(tv | hv);
        break;
      }
    }
  }
  return stack[0] & 1;
}

void enumerate_t_models(const CompiledTheory& th, std::uint32_t lv_t,
                        const std::function<bool(const Valuation&)>& visit) {
  int n = th.sig->size();
  // trigger[d] lists the rules whose last used atom is d; rules over no atoms
  // are decided up front.
  std::vector<std::vector<int>> trigger(n);
  for (int i = 0; i < static_cast<int>(th.rules.size()); ++i) {
    std::uint64_t used = th.rules[i].atoms_used;
    if (used == 0) {
      if (!eval_t(th.rules[i], Valuation{}, lv_t)) return;
    } else {
      trigger[63 - std::countl_zero(used)].push_back(i);
    }
  }
  Valuation v;
  bool keep_going = true;
  auto rec = [&](auto&& self, int d) -> void {
    if (!keep_going) return;
    if (d == n) {
      keep_going = visit(v);
      return;
    }
    // three states per atom: undecided, positive, negative
    for (int s = 0; s < 3 && keep_going; ++s) {
      std::uint64_t bit = std::uint64_t{1} << d;
      if (s == 1) v.pos |= bit;
      if (s == 2) v.neg |= bit;
      bool ok = true;
      for (int r : trigger[d]) {
        if (!eval_t(th.rules[r], v, lv_t)) {
          ok = false;
          break;
        }
      }
      if (ok) self(self, d + 1);
      v.pos &= ~bit;
      v.neg &= ~bit;
    }
  };
  rec(rec, 0);
}

bool exists_h_model(const CompiledTheory& th, const Valuation& t, std::uint32_t lv_h,
                    std::uint32_t lv_t, bool require_proper) {
  // DFS over which literals of t survive at the h-level, dropping first so a
  // proper reduction is found as early as possible.
  struct Pos {
    int atom;
    bool strong_neg;
  };
  std::vector<Pos> lits;
  for (int a = 0; a < th.sig->size(); ++a) {
    std::uint64_t bit = std::uint64_t{1} << a;
    if (t.pos & bit) lits.push_back({a, false});
    if (t.neg & bit) lits.push_back({a, true});
  }
  int m = static_cast<int>(lits.size());
  std::uint64_t decided = t.pos | t.neg;
  std::vector<std::vector<int>> trigger(m);
  std::vector<int> upfront;
  for (int i = 0; i < static_cast<int>(th.rules.size()); ++i) {
    std::uint64_t used = th.rules[i].atoms_used & decided;
    if (used == 0) {
      upfront.push_back(i);
    } else {
      int last = -1;
      for (int j = 0; j < m; ++j) {
        if (used >> lits[j].atom & 1) last = j;
      }
      trigger[last].push_back(i);
    }
  }
  Valuation h;
  for (int r : upfront) {
    if (!eval_h(th.rules[r], h, t, lv_h, lv_t)) return false;
  }
  auto rec = [&](auto&& self, int d, bool dropped) -> bool {
    if (d == m) return dropped || !require_proper;
    for (int s = 0; s < 2; ++s) {
      bool drop = (s == 0);
      std::uint64_t bit = std::uint64_t{1} << lits[d].atom;
      if (!drop) {
        if (lits[d].strong_neg) h.neg |= bit;
        else h.pos |= bit;
      }
      bool ok = true;
      for (int r : trigger[d]) {
        if (!eval_h(th.rules[r], h, t, lv_h, lv_t)) {
          ok = false;
          break;
        }
      }
      if (ok && self(self, d + 1, dropped || drop)) return true;
      if (!drop) {
        h.pos &= ~bit;
        h.neg &= ~bit;
      }
    }
    return false;
  };
  return rec(rec, 0, false);
}

BeliefEngine::BeliefEngine(CompiledTheory theory, std::vector<Valuation> cell_worlds)
    : th_(std::move(theory)), cell_(std::move(cell_worlds)) {
  int k = th_.belief_count();
  if (k > kMaxBeliefs) {
    throw CapExceeded("too many distinct belief subformulas (cap " +
                      std::to_string(kMaxBeliefs) + ")");
  }
  // Belief values are uniform across the model: every world sees exactly the
  // cell worlds. Bodies only reference earlier bodies, so a single pass in
  // index order settles them.
  for (int j = 0; j < k; ++j) {
    bool all = true;
    for (const Valuation& w : cell_) {
      if (!eval_t(th_.bodies[j], w, tvals_)) {
        all = false;
        break;
      }
    }
    if (all) tvals_ |= std::uint32_t{1} << j;
  }
  cell_total_ok_ = true;
  for (const Valuation& w : cell_) {
    for (const auto& r : th_.rules) {
      if (!eval_t(r, w, tvals_)) {
        cell_total_ok_ = false;
        break;
      }
    }
    if (!cell_total_ok_) break;
  }
  cells_proper_.assign(std::size_t{1} << k, -1);
}

bool BeliefEngine::root_total_ok(const Valuation& root) const {
  for (const auto& r : th_.rules) {
    if (!eval_t(r, root, tvals_)) return false;
  }
  return true;
}

namespace {

// Per-world achievable profiles of body h-values, split by whether some
// feasible h-assignment realizing the profile drops at least one literal.
struct ProfileSet {
  std::vector<std::uint32_t> any;
  std::vector<std::uint32_t> proper;
};

ProfileSet world_profiles(const CompiledTheory& th, const Valuation& t,
                          std::uint32_t lv, std::uint32_t tvals) {
  struct Pos {
    int atom;
    bool strong_neg;
  };
  std::vector<Pos> lits;
  for (int a = 0; a < th.sig->size(); ++a) {
    std::uint64_t bit = std::uint64_t{1} << a;
    if (t.pos & bit) lits.push_back({a, false});
    if (t.neg & bit) lits.push_back({a, true});
  }
  int m = static_cast<int>(lits.size());
  if (m > 20) throw CapExceeded("world carries too many literals for the reduction search");
  int k = th.belief_count();
  ProfileSet out;
  std::vector<char> seen_any(std::size_t{1} << k, 0), seen_proper(std::size_t{1} << k, 0);
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << m); ++mask) {
    Valuation h;
    for (int j = 0; j < m; ++j) {
      if (mask >> j & 1) {
        std::uint64_t bit = std::uint64_t{1} << lits[j].atom;
        if (lits[j].strong_neg) h.neg |= bit;
        else h.pos |= bit;
      }
    }
    bool ok = true;
    for (const auto& r : th.rules) {
      if (!eval_h(r, h, t, lv, tvals)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    std::uint32_t profile = 0;
    for (int j = 0; j < k; ++j) {
      if (eval_h(th.bodies[j], h, t, lv, tvals)) profile |= std::uint32_t{1} << j;
    }
    bool proper = std::popcount(mask) < m;
    if (!seen_any[profile]) {
      seen_any[profile] = 1;
      out.any.push_back(profile);
    }
    if (proper && !seen_proper[profile]) {
      seen_proper[profile] = 1;
      out.proper.push_back(profile);
    }
  }
  return out;
}

}  // namespace

bool BeliefEngine::cell_side_proper(std::uint32_t lv) const {
  // Does some choice of per-world h-assignments keep every rule h-satisfied,
  // produce exactly the body value vector lv, and properly reduce at least
  // one cell world? Profiles are ANDed across worlds, so a profile is usable
  // only if it keeps every 1-bit of lv, and the 0-bits still pending form the
  // DP state.
  int k = th_.belief_count();
  std::uint32_t zmask = ~lv & ((k == 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << k) - 1));
  // reachable[resid] bits: 1 = reachable at all, 2 = reachable having already
  // used a properly reduced world.
  std::vector<std::uint8_t> reach(std::size_t{1} << std::popcount(zmask), 0);
  // Compress residual over zmask bits.
  std::vector<int> zbits;
  for (int j = 0; j < k; ++j) {
    if (zmask >> j & 1) zbits.push_back(j);
  }
  auto compress = [&](std::uint32_t resid) {
    std::uint32_t c = 0;
    for (std::size_t i = 0; i < zbits.size(); ++i) {
      if (resid >> zbits[i] & 1) c |= std::uint32_t{1} << i;
    }
    return c;
  };
  reach[compress(zmask)] = 1;
  for (const Valuation& w : cell_) {
    ProfileSet ps = world_profiles(th_, w, lv, tvals_);
    std::vector<std::uint8_t> next(reach.size(), 0);
    auto feed = [&](const std::vector<std::uint32_t>& profiles, bool proper) {
      for (std::uint32_t p : profiles) {
        if ((p & lv) != lv) continue;
        std::uint32_t pc = compress(p & zmask);
        for (std::uint32_t resid = 0; resid < reach.size(); ++resid) {
          std::uint8_t st = reach[resid];
          if (!st) continue;
          std::uint32_t nr = resid & pc;
          std::uint8_t add = proper ? 2 : (st & 2);
          next[nr] |= 1 | add | (st & 2);
        }
      }
    };
    feed(ps.any, false);
    feed(ps.proper, true);
    reach = std::move(next);
  }
  return reach.empty() ? false : (reach[0] & 2) != 0;
}

bool BeliefEngine::reduction_exists(const Valuation& root) const {
  int k = th_.belief_count();
  std::uint32_t count = std::uint32_t{1} << k;
  for (std::uint32_t lv = 0; lv < count; ++lv) {
    // Route 1: cells stay total (only realizes lv == tvals), root drops.
    if (lv == tvals_ &&
        exists_h_model(th_, root, lv, tvals_, /*require_proper=*/true)) {
      return true;
    }
    // Route 2: some cell world drops, root side merely feasible.
    if (exists_h_model(th_, root, lv, tvals_, /*require_proper=*/false)) {
      std::int8_t& memo = cells_proper_[lv];
      if (memo < 0) memo = cell_side_proper(lv) ? 1 : 0;
      if (memo == 1) return true;
    }
  }
  return false;
}

bool BeliefEngine::is_equilibrium(const Valuation& root) const {
  return cell_total_ok_ && root_total_ok(root) && !reduction_exists(root);
}

}  // namespace delasp::detail
