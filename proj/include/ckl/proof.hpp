#pragma once

#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ckl/formula.hpp"

namespace ckl {

// A primitive modal operator: K with an agent id, or C. E is an
// abbreviation, so it is not a primitive operator for axiom (2) or for
// necessitation; its instances are derivable instead.
struct ModalOp {
  bool is_c = false;
  int agent = 0;  // meaningful when !is_c

  static ModalOp c() { return {true, 0}; }
  static ModalOp k(int agent) { return {false, agent}; }
  std::string to_string() const { return is_c ? "C" : "K" + std::to_string(agent); }
  bool operator==(const ModalOp&) const = default;
};

struct JustTaut {};
struct JustAxK {
  ModalOp op;
};
struct JustAxC1 {};  // C f -> f
struct JustAxC2 {};  // C f -> E C f
struct JustAxC3 {};  // C (f -> E f) -> (f -> C f)
struct JustMP {
  int antecedent;   // 1-based earlier line holding f
  int implication;  // 1-based earlier line holding f -> g
};
struct JustSubst {
  int line;
  std::vector<std::pair<std::string, Formula>> map;  // simultaneous
};
struct JustNec {
  ModalOp op;
  int line;
};

using Justification =
    std::variant<JustTaut, JustAxK, JustAxC1, JustAxC2, JustAxC3, JustMP, JustSubst, JustNec>;

struct ProofLine {
  Formula formula;
  Justification just;
};

struct Proof {
  AgentSet agents;
  std::vector<ProofLine> lines;
};

// True iff f becomes a propositional tautology once E is expanded and each
// maximal K/C subformula is replaced by a fresh atom (equal subformulas
// share an atom). Decided by truth table; throws CapExceeded beyond 20
// distinct atoms.
bool is_tautology(const Formula& f, const AgentSet& agents);

enum class AxiomId { K, C1, C2, C3 };

// Structural schema matching modulo the E abbreviation. For AxiomId::K the
// box ranges over the primitive operators (each K_i and C).
bool match_axiom(const Formula& f, AxiomId which, const AgentSet& agents);
bool match_k_schema(const Formula& f, const ModalOp& op, const AgentSet& agents);

Formula substitute(const Formula& f, const std::map<std::string, Formula>& map);

struct ProofVerdict {
  bool accepted = false;
  int line = 0;        // 1-based offending line when rejected
  std::string reason;  // empty when accepted

  static ProofVerdict ok() { return {true, 0, ""}; }
  static ProofVerdict rejected(int line, std::string reason) {
    return {false, line, std::move(reason)};
  }
};

// Checks every line: tautologies, axiom-schema instances, modus ponens,
// simultaneous substitution, and necessitation. Rule matching compares
// formulas modulo E expansion and nothing else; justifications may only
// reference earlier lines. Rejection is a verdict, not an error.
ProofVerdict check_proof(const Proof& p);

// Text format, one step per line (blank lines and '#' comments allowed):
//   <n>. <formula> ; <justification>
// with justification one of
//   taut | axK <op> | axC1 | axC2 | axC3 | mp <i> <j> | nec <op> <i>
//   | subst <i> <var>:=<formula>,...
// where <op> is K<digits> or C and steps are numbered 1, 2, ...
Proof parse_proof_script(std::string_view text, const AgentSet& agents);
Proof load_proof_script(const std::string& path, const AgentSet& agents);

}  // namespace ckl
