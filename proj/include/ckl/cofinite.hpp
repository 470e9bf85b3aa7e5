#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace ckl {

// An element of the Boolean algebra of finite-or-cofinite subsets of the
// naturals. `support` holds the 1-positions of a finite set, or the
// 0-positions of a cofinite one; it is kept sorted and deduplicated.
// Finite{} is 0 and Cofinite{} is 1.
class FcSet {
 public:
  enum class Kind { Finite, Cofinite };

  static FcSet zero() { return finite({}); }
  static FcSet one() { return cofinite({}); }
  static FcSet finite(std::vector<unsigned> support);
  static FcSet cofinite(std::vector<unsigned> support);

  Kind kind() const { return kind_; }
  const std::vector<unsigned>& support() const { return support_; }
  bool at(unsigned i) const;  // characteristic function
  bool is_zero() const { return kind_ == Kind::Finite && support_.empty(); }
  bool is_one() const { return kind_ == Kind::Cofinite && support_.empty(); }

  // F{0,3} for finite sets, C{0,2} for cofinite ones.
  std::string to_string() const;

  bool operator==(const FcSet&) const = default;

 private:
  FcSet(Kind kind, std::vector<unsigned> support);
  Kind kind_;
  std::vector<unsigned> support_;
};

FcSet meet(const FcSet& x, const FcSet& y);
FcSet join(const FcSet& x, const FcSet& y);
FcSet complement(const FcSet& x);
bool leq(const FcSet& x, const FcSet& y);

// The algebra of finite/cofinite sets equipped with one knowledge operator
// per agent (agents are 1..n_agents) and the trivial common-knowledge
// operator; every agent box collapses finite elements to 0 and fixes 1, and
// on other cofinite elements zeroes an even-position prefix.
struct FcAlgebra {
  int n_agents;
};

// For cofinite x != 1: the least even i such that x(j) = 1 for every even
// j >= i. Throws std::invalid_argument for finite arguments and for 1.
unsigned k_of(const FcSet& x);

// Knowledge operator for agent n (1-based). On a cofinite x != 1 with
// frontier k = k_of(x): zeroes the even positions < k, and also position k
// itself when n is congruent to k modulo the agent count.
FcSet box_k(const FcAlgebra& alg, int agent, const FcSet& x);

// Meet of all agent boxes. For cofinite x != 1 this zeroes exactly the even
// positions <= k_of(x).
FcSet e_of(const FcAlgebra& alg, const FcSet& x);

// 1 for x = 1, otherwise 0.
FcSet box_c(const FcSet& x);

// The element that is 0 exactly at position 0. Its E-orbit never reaches a
// greatest lower bound inside the algebra: e_power_a(n) is 0 exactly on the
// even positions <= 2n.
FcSet element_a();
FcSet e_power_a(const FcAlgebra& alg, int n);

// Verdicts refuting that `candidate` is a greatest lower bound of the
// E-orbit of element_a().
struct NotLowerBound {
  int n;  // candidate is not below the n-th iterate
};
struct StrictlyBetter {
  FcSet better;  // a lower bound strictly above the candidate
};
using GlbVerdict = std::variant<NotLowerBound, StrictlyBetter>;

// Every candidate receives a verdict: either a concrete iterate it fails to
// sit below, or (when it is a lower bound, i.e. a finite set of odd
// positions) a strictly larger lower bound.
GlbVerdict no_glb_witness(const FcAlgebra& alg, const FcSet& candidate);

// Bulk law checks used by the CLI and the acceptance suite.
struct FcSuiteOptions {
  int family_bits = 12;       // element family: supports within {0..family_bits-1}
  int full_pair_bits = 8;     // all pairs drawn from supports within this prefix
  long sampled_pairs = 100000;  // extra random pairs from the full family
  std::uint64_t seed = 20240;
  int iterate_depth = 32;     // E-orbit prefix checked against the closed form
  std::vector<int> agent_counts = {1, 2, 3};
};

struct FcSuiteReport {
  bool pass = true;
  long checks = 0;
  std::vector<std::string> failures;  // first few, human-readable
};

// Runs: operator laws (box of 1/0, meet distribution, C laws, box below
// identity) over element pairs; the three induction-style axioms over single
// elements; the closed form of the E-orbit of element_a(); and a glb
// refutation for every family element.
FcSuiteReport run_fc_suite(const FcSuiteOptions& options);

}  // namespace ckl
