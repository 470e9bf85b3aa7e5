#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ckl {

// Thrown on malformed input text; `position` is a 0-based offset into the text.
struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg), position(pos) {}
  std::size_t position;
};

// Thrown when an exhaustive check would exceed its size cap.
struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Nonempty set of agent identifiers (small positive integers), kept in
// ascending order.
class AgentSet {
 public:
  explicit AgentSet(std::vector<int> agents);
  static AgentSet range(int n);  // {1, ..., n}

  const std::vector<int>& ids() const { return ids_; }
  int size() const { return static_cast<int>(ids_.size()); }
  bool contains(int agent) const;
  int index_of(int agent) const;  // -1 if absent

  bool operator==(const AgentSet&) const = default;

 private:
  std::vector<int> ids_;
};

enum class Conn { Var, Top, Bot, Not, And, Or, Implies, Iff, K, E, C };

// Immutable formula tree. E, Or, Implies and Iff are kept as first-class
// nodes so proof scripts and printed output keep their surface syntax;
// semantic operations expand them first.
class Formula {
 public:
  static Formula var(std::string name);
  static Formula top();
  static Formula bot();
  static Formula neg(Formula f);
  static Formula conj(Formula l, Formula r);
  static Formula disj(Formula l, Formula r);
  static Formula implies(Formula l, Formula r);
  static Formula iff(Formula l, Formula r);
  static Formula knows(int agent, Formula f);
  static Formula everyone(Formula f);
  static Formula common(Formula f);

  Conn kind() const;
  const std::string& var_name() const;  // Var nodes only
  int agent() const;                    // K nodes only
  Formula left() const;                 // unary operand, or binary left
  Formula right() const;                // binary right

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Formula make(Conn kind, std::string name, int agent, Formula* a, Formula* b);
  static bool node_eq(const Node* x, const Node* y);
  std::shared_ptr<const Node> node_;
};

// Grammar: variables [a-z][a-z0-9_]*, constants `top` / `bot`, unary
// `~` `K<digits>` `E` `C`, binary `&` `|` `->` `<->`, parentheses.
// Precedence: unary > & > | > -> > <->, with -> and <-> right-associative.
Formula parse(std::string_view text, const AgentSet& agents);

// Canonical printing with minimal parentheses; parse(to_string(f)) == f.
std::string to_string(const Formula& f);

// Rewrites E, Or, Implies and Iff into the {Var, top, bot, ~, &, K, C} core:
// E f -> conjunction of K_i f over all agents, f | g -> ~(~f & ~g),
// f -> g as ~f | g, f <-> g as (f -> g) & (g -> f).
Formula expand(const Formula& f, const AgentSet& agents);

// Rewrites only E nodes. Rule matching in the proof checker compares
// formulas modulo this rewrite and nothing else.
Formula expand_e(const Formula& f, const AgentSet& agents);

bool eq_mod_e(const Formula& a, const Formula& b, const AgentSet& agents);

// n nested applications of E; e_power(f, 0) is f itself.
Formula e_power(Formula f, int n);

// Variable names occurring in f, ascending and deduplicated.
std::vector<std::string> variables(const Formula& f);

}  // namespace ckl
