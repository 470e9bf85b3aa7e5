#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ckl/formula.hpp"
#include "ckl/kripke.hpp"

namespace ckl {

// Powerset algebra over a finite atom set, with one normal box operator per
// agent plus one for common knowledge. Operators are presented by relations
// on atoms, elements are atom bitmasks; box(R, 1) = 1 and
// box(R, x & y) = box(R, x) & box(R, y) hold by construction.
class FiniteModalAlgebra {
 public:
  FiniteModalAlgebra(AgentSet agents, int atoms, std::vector<Relation> op_k, Relation op_c);

  const AgentSet& agents() const { return agents_; }
  int atoms() const { return atoms_; }
  std::uint64_t top() const;
  std::uint64_t complement(std::uint64_t x) const { return ~x & top(); }
  // -x | y
  std::uint64_t implies(std::uint64_t x, std::uint64_t y) const { return complement(x) | y; }

  std::uint64_t box_k(int agent, std::uint64_t x) const;  // by agent id
  std::uint64_t box_k_at(int index, std::uint64_t x) const;
  std::uint64_t box_c(std::uint64_t x) const;
  // Meet of the agent boxes.
  std::uint64_t e_of(std::uint64_t x) const;

  const Relation& k_rel_at(int index) const { return op_k_[static_cast<std::size_t>(index)]; }
  const Relation& c_rel() const { return op_c_; }

  bool operator==(const FiniteModalAlgebra&) const = default;

 private:
  AgentSet agents_;
  int atoms_;
  std::vector<Relation> op_k_;
  Relation op_c_;
};

// The complex algebra of a frame: atoms are worlds, operator relations are
// the frame relations. A formula is valid in the frame iff it is valid here.
FiniteModalAlgebra complex_algebra(const Frame& f);

// The orbit of x under E. The carrier is finite, so the orbit is eventually
// periodic: iterates[0..] are the pairwise distinct values E^0 x, E^1 x, ...
// and E applied to the last one re-enters at cycle_start.
struct EIterates {
  std::vector<std::uint64_t> iterates;
  int cycle_start = 0;
  int cycle_len = 1;

  // Greatest lower bound of {E^n x | n >= 0}: the meet of the distinct
  // iterates (finite algebras are complete).
  std::uint64_t meet_all() const;
};

EIterates e_iterates(const FiniteModalAlgebra& a, std::uint64_t x);

struct AxiomViolation {
  int axiom;              // 1-based index into the axiom list being checked
  std::uint64_t witness;  // element refuting it
};

// Axioms: (1) Cx <= x, (2) Cx <= ECx, (3) C(x -> Ex) <= x -> Cx, swept over
// every element. Throws CapExceeded when atoms > 20.
std::optional<AxiomViolation> mh_violation(const FiniteModalAlgebra& a);
bool is_mh_algebra(const FiniteModalAlgebra& a);

// Conditions: (1) Cx <= ECx, (2) Cx equals the greatest lower bound of
// {E^n x}. Throws CapExceeded when atoms > 20.
std::optional<AxiomViolation> ckl_violation(const FiniteModalAlgebra& a);
bool is_ckl_algebra(const FiniteModalAlgebra& a);

// Decides whether gamma <= E^n phi for every n, via the finite E-orbit.
// On an algebra satisfying the glb condition a true answer entails
// gamma <= C phi.
bool omega_rule_oracle(const FiniteModalAlgebra& a, std::uint64_t gamma, std::uint64_t phi);

// Interprets a formula over the algebra; variables missing from the
// valuation denote 0.
std::uint64_t eval_in_algebra(const FiniteModalAlgebra& a, const Formula& f,
                              const std::map<std::string, std::uint64_t>& valuation);

// True iff the formula denotes 1 under every assignment of elements to its
// variables. Throws CapExceeded when |vars| * atoms > 20.
bool valid_in_algebra(const FiniteModalAlgebra& a, const Formula& phi);

// The four predicates whose agreement characterizes frames whose r_c is the
// reflexive transitive closure of r_e: closure check, validity of the three
// common-knowledge schemas (with one fresh variable), and the two algebra
// axiom checks on the complex algebra.
struct FrameClassification {
  bool ckl_frame;
  bool schemas_valid;
  bool mh_algebra;
  bool ckl_algebra;

  bool agree() const {
    return ckl_frame == schemas_valid && ckl_frame == mh_algebra && ckl_frame == ckl_algebra;
  }
};

FrameClassification classify_frame(const Frame& f);

}  // namespace ckl
