#include "ckl/cofinite.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace ckl {

FcSet::FcSet(Kind kind, std::vector<unsigned> support)
    : kind_(kind), support_(std::move(support)) {
  std::sort(support_.begin(), support_.end());
  support_.erase(std::unique(support_.begin(), support_.end()), support_.end());
}

FcSet FcSet::finite(std::vector<unsigned> support) {
  return FcSet(Kind::Finite, std::move(support));
}

FcSet FcSet::cofinite(std::vector<unsigned> support) {
  return FcSet(Kind::Cofinite, std::move(support));
}

bool FcSet::at(unsigned i) const {
  const bool in = std::binary_search(support_.begin(), support_.end(), i);
  return kind_ == Kind::Finite ? in : !in;
}

std::string FcSet::to_string() const {
  std::string out = kind_ == Kind::Finite ? "F{" : "C{";
  for (std::size_t i = 0; i < support_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(support_[i]);
  }
  out += '}';
  return out;
}

namespace {

std::vector<unsigned> set_union(const std::vector<unsigned>& a, const std::vector<unsigned>& b) {
  std::vector<unsigned> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<unsigned> set_inter(const std::vector<unsigned>& a, const std::vector<unsigned>& b) {
  std::vector<unsigned> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<unsigned> set_minus(const std::vector<unsigned>& a, const std::vector<unsigned>& b) {
  std::vector<unsigned> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

FcSet meet(const FcSet& x, const FcSet& y) {
  const bool xf = x.kind() == FcSet::Kind::Finite;
  const bool yf = y.kind() == FcSet::Kind::Finite;
  if (xf && yf) return FcSet::finite(set_inter(x.support(), y.support()));
  if (xf) return FcSet::finite(set_minus(x.support(), y.support()));
  if (yf) return FcSet::finite(set_minus(y.support(), x.support()));
  return FcSet::cofinite(set_union(x.support(), y.support()));
}

FcSet complement(const FcSet& x) {
  return x.kind() == FcSet::Kind::Finite ? FcSet::cofinite(x.support())
                                         : FcSet::finite(x.support());
}

FcSet join(const FcSet& x, const FcSet& y) {
  return complement(meet(complement(x), complement(y)));
}

bool leq(const FcSet& x, const FcSet& y) { return meet(x, y) == x; }

unsigned k_of(const FcSet& x) {
  if (x.kind() != FcSet::Kind::Cofinite || x.is_one())
    throw std::invalid_argument("k_of is defined only for cofinite elements below 1");
  unsigned k = 0;
  for (unsigned zero : x.support())
    if (zero % 2 == 0) k = zero + 2;  // support is ascending
  return k;
}

FcSet box_k(const FcAlgebra& alg, int agent, const FcSet& x) {
  if (alg.n_agents < 1) throw std::invalid_argument("agent count must be at least 1");
  if (agent < 1 || agent > alg.n_agents) throw std::invalid_argument("agent out of range");
  if (x.kind() == FcSet::Kind::Finite) return FcSet::zero();
  if (x.is_one()) return FcSet::one();
  const unsigned k = k_of(x);
  const unsigned n = static_cast<unsigned>(alg.n_agents);
  const bool at_frontier = static_cast<unsigned>(agent) % n == k % n;
  std::vector<unsigned> zeros = x.support();
  for (unsigned i = 0; i + (at_frontier ? 0 : 2) <= k; i += 2) zeros.push_back(i);
  return FcSet::cofinite(std::move(zeros));
}

FcSet e_of(const FcAlgebra& alg, const FcSet& x) {
  FcSet out = box_k(alg, 1, x);
  for (int n = 2; n <= alg.n_agents; ++n) out = meet(out, box_k(alg, n, x));
  return out;
}

FcSet box_c(const FcSet& x) { return x.is_one() ? FcSet::one() : FcSet::zero(); }

FcSet element_a() { return FcSet::cofinite({0}); }

FcSet e_power_a(const FcAlgebra& alg, int n) {
  FcSet x = element_a();
  for (int i = 0; i < n; ++i) x = e_of(alg, x);
  return x;
}

GlbVerdict no_glb_witness(const FcAlgebra& alg, const FcSet& candidate) {
  (void)alg;  // the E-orbit of element_a() does not depend on the agent count
  if (candidate.kind() == FcSet::Kind::Finite) {
    unsigned even = 0;
    bool has_even = false;
    for (unsigned i : candidate.support())
      if (i % 2 == 0) {
        even = i;
        has_even = true;
        break;
      }
    if (!has_even) {
      // A finite set of odd positions sits below every iterate; adding the
      // least missing odd position gives a strictly larger lower bound.
      unsigned next = 1;
      while (candidate.at(next)) next += 2;
      std::vector<unsigned> support = candidate.support();
      support.push_back(next);
      return StrictlyBetter{FcSet::finite(std::move(support))};
    }
    // candidate(even) = 1 while the (even/2)-th iterate is 0 there.
    return NotLowerBound{static_cast<int>(even / 2)};
  }
  // Cofinite candidates are 1 at some even position.
  unsigned even = 0;
  while (!candidate.at(even)) even += 2;
  return NotLowerBound{static_cast<int>(even / 2)};
}

// ---------------------------------------------------------------------------
// Law suite

namespace {

struct SuiteState {
  FcSuiteReport report;

  void check(bool ok, const std::string& label) {
    ++report.checks;
    if (!ok) {
      report.pass = false;
      if (report.failures.size() < 10) report.failures.push_back(label);
    }
  }
};

std::vector<FcSet> family_elements(int bits) {
  std::vector<FcSet> out;
  const std::uint64_t limit = std::uint64_t{1} << bits;
  for (int kind = 0; kind < 2; ++kind) {
    for (std::uint64_t m = 0; m < limit; ++m) {
      std::vector<unsigned> support;
      for (int i = 0; i < bits; ++i)
        if (m >> i & 1) support.push_back(static_cast<unsigned>(i));
      out.push_back(kind == 0 ? FcSet::finite(std::move(support))
                              : FcSet::cofinite(std::move(support)));
    }
  }
  return out;
}

void check_pair_laws(SuiteState& st, const FcAlgebra& alg, const FcSet& x, const FcSet& y) {
  const FcSet xy = meet(x, y);
  for (int n = 1; n <= alg.n_agents; ++n) {
    st.check(box_k(alg, n, xy) == meet(box_k(alg, n, x), box_k(alg, n, y)),
             "K" + std::to_string(n) + " fails to distribute over meet at " + x.to_string() +
                 ", " + y.to_string() + " (N=" + std::to_string(alg.n_agents) + ")");
  }
  st.check(box_c(xy) == meet(box_c(x), box_c(y)),
           "C fails to distribute over meet at " + x.to_string() + ", " + y.to_string());
}

void check_element_laws(SuiteState& st, const FcAlgebra& alg, const FcSet& x) {
  const std::string n_tag = " (N=" + std::to_string(alg.n_agents) + ")";
  for (int n = 1; n <= alg.n_agents; ++n) {
    st.check(box_k(alg, n, FcSet::one()).is_one(), "K_n 1 != 1" + n_tag);
    st.check(box_k(alg, n, FcSet::zero()).is_zero(), "K_n 0 != 0" + n_tag);
    st.check(leq(box_k(alg, n, x), x), "K_n x not below x at " + x.to_string() + n_tag);
  }
  const FcSet cx = box_c(x);
  st.check(leq(cx, x), "C x not below x at " + x.to_string() + n_tag);
  st.check(leq(cx, e_of(alg, cx)), "C x not below E C x at " + x.to_string() + n_tag);
  const FcSet lhs = box_c(join(complement(x), e_of(alg, x)));
  const FcSet rhs = join(complement(x), cx);
  st.check(leq(lhs, rhs), "induction axiom fails at " + x.to_string() + n_tag);
  // Closed form of E on cofinite elements below 1.
  if (x.kind() == FcSet::Kind::Cofinite && !x.is_one()) {
    const unsigned k = k_of(x);
    std::vector<unsigned> zeros = x.support();
    for (unsigned i = 0; i <= k; i += 2) zeros.push_back(i);
    st.check(e_of(alg, x) == FcSet::cofinite(std::move(zeros)),
             "E closed form fails at " + x.to_string() + n_tag);
  }
}

void check_glb_refutation(SuiteState& st, const FcAlgebra& alg, const FcSet& candidate,
                          const std::vector<FcSet>& iterates) {
  const GlbVerdict verdict = no_glb_witness(alg, candidate);
  if (const auto* nlb = std::get_if<NotLowerBound>(&verdict)) {
    st.check(nlb->n >= 0 && nlb->n < static_cast<int>(iterates.size()) &&
                 !leq(candidate, iterates[static_cast<std::size_t>(nlb->n)]),
             "bad NotLowerBound witness for " + candidate.to_string());
  } else {
    const FcSet& better = std::get<StrictlyBetter>(verdict).better;
    bool ok = leq(candidate, better) && candidate != better;
    for (const FcSet& it : iterates) ok = ok && leq(better, it);
    st.check(ok, "bad StrictlyBetter witness for " + candidate.to_string());
    // Lower bounds are exactly the finite sets of odd positions.
    bool all_odd = candidate.kind() == FcSet::Kind::Finite;
    for (unsigned i : candidate.support()) all_odd = all_odd && i % 2 == 1;
    st.check(all_odd, "StrictlyBetter issued for a non-lower-bound " + candidate.to_string());
  }
}

}  // namespace

FcSuiteReport run_fc_suite(const FcSuiteOptions& options) {
  if (options.family_bits < 1 || options.family_bits > 16 ||
      options.full_pair_bits > options.family_bits)
    throw std::invalid_argument("bad family bounds");
  SuiteState st;

  const std::vector<FcSet> family = family_elements(options.family_bits);
  const std::vector<FcSet> small_family = family_elements(options.full_pair_bits);

  for (int n_agents : options.agent_counts) {
    const FcAlgebra alg{n_agents};
    for (const FcSet& x : family) check_element_laws(st, alg, x);
    for (const FcSet& x : small_family)
      for (const FcSet& y : small_family) check_pair_laws(st, alg, x, y);
    std::mt19937_64 rng(options.seed + static_cast<std::uint64_t>(n_agents));
    for (long i = 0; i < options.sampled_pairs; ++i) {
      const FcSet& x = family[rng() % family.size()];
      const FcSet& y = family[rng() % family.size()];
      check_pair_laws(st, alg, x, y);
    }
  }

  // E-orbit of element_a(): the n-th iterate is 0 exactly on evens <= 2n,
  // so the frontier index strictly increases and no glb exists.
  const FcAlgebra alg2{2};
  std::vector<FcSet> iterates;
  FcSet it = element_a();
  for (int n = 0; n <= options.iterate_depth; ++n) {
    std::vector<unsigned> evens;
    for (int i = 0; i <= 2 * n; i += 2) evens.push_back(static_cast<unsigned>(i));
    st.check(it == FcSet::cofinite(std::move(evens)),
             "iterate " + std::to_string(n) + " deviates from the closed form");
    st.check(k_of(it) == static_cast<unsigned>(2 * n + 2),
             "frontier of iterate " + std::to_string(n) + " is not 2n+2");
    iterates.push_back(it);
    it = e_of(alg2, it);
  }
  for (int n_agents : options.agent_counts) {
    const FcAlgebra alg{n_agents};
    for (const FcSet& candidate : family) check_glb_refutation(st, alg, candidate, iterates);
  }

  return st.report;
}

}  // namespace ckl
