#include "ckl/proof.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ckl {

// ---------------------------------------------------------------------------
// Tautology checking

namespace {

// Propositional skeleton of an E-expanded formula: K/C subtrees become
// atoms, connectives become instructions over earlier slots.
struct PropProgram {
  struct Ins {
    Conn op;       // Var stands for "load atom"
    int a = -1;    // operand slots
    int b = -1;
    int atom = -1; // for Var
  };
  std::vector<Ins> code;
  int atom_count = 0;
};

int compile_node(const Formula& f, PropProgram& prog, std::map<std::string, int>& atoms) {
  const auto atom_slot = [&](const std::string& key) {
    auto [it, inserted] = atoms.emplace(key, prog.atom_count);
    if (inserted) ++prog.atom_count;
    prog.code.push_back({Conn::Var, -1, -1, it->second});
    return static_cast<int>(prog.code.size()) - 1;
  };
  switch (f.kind()) {
    case Conn::Var:
      return atom_slot("v " + f.var_name());
    case Conn::K:
    case Conn::C:
      return atom_slot("m " + to_string(f));
    case Conn::Top:
    case Conn::Bot:
      prog.code.push_back({f.kind(), -1, -1, -1});
      return static_cast<int>(prog.code.size()) - 1;
    case Conn::Not: {
      const int a = compile_node(f.left(), prog, atoms);
      prog.code.push_back({Conn::Not, a, -1, -1});
      return static_cast<int>(prog.code.size()) - 1;
    }
    case Conn::E:
      throw std::logic_error("compile_node: E must be expanded first");
    default: {
      const int a = compile_node(f.left(), prog, atoms);
      const int b = compile_node(f.right(), prog, atoms);
      prog.code.push_back({f.kind(), a, b, -1});
      return static_cast<int>(prog.code.size()) - 1;
    }
  }
}

bool eval_program(const PropProgram& prog, std::uint32_t assignment, std::vector<char>& slots) {
  slots.resize(prog.code.size());
  for (std::size_t i = 0; i < prog.code.size(); ++i) {
    const auto& ins = prog.code[i];
    switch (ins.op) {
      case Conn::Var:
        slots[i] = (assignment >> ins.atom) & 1;
        break;
      case Conn::Top:
        slots[i] = 1;
        break;
      case Conn::Bot:
        slots[i] = 0;
        break;
      case Conn::Not:
        slots[i] = !slots[static_cast<std::size_t>(ins.a)];
        break;
      case Conn::And:
        slots[i] = slots[static_cast<std::size_t>(ins.a)] && slots[static_cast<std::size_t>(ins.b)];
        break;
      case Conn::Or:
        slots[i] = slots[static_cast<std::size_t>(ins.a)] || slots[static_cast<std::size_t>(ins.b)];
        break;
      case Conn::Implies:
        slots[i] = !slots[static_cast<std::size_t>(ins.a)] || slots[static_cast<std::size_t>(ins.b)];
        break;
      case Conn::Iff:
        slots[i] = slots[static_cast<std::size_t>(ins.a)] == slots[static_cast<std::size_t>(ins.b)];
        break;
      default:
        throw std::logic_error("eval_program: unexpected op");
    }
  }
  return slots.back() != 0;
}

}  // namespace

bool is_tautology(const Formula& f, const AgentSet& agents) {
  PropProgram prog;
  std::map<std::string, int> atoms;
  compile_node(expand_e(f, agents), prog, atoms);
  if (prog.atom_count > 20)
    throw CapExceeded("is_tautology: " + std::to_string(prog.atom_count) +
                      " distinct atoms exceed the cap of 20");
  std::vector<char> slots;
  for (std::uint32_t v = 0; v < (std::uint32_t{1} << prog.atom_count); ++v)
    if (!eval_program(prog, v, slots)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Axiom schemas

namespace {

Formula apply_op(const ModalOp& op, Formula f) {
  return op.is_c ? Formula::common(std::move(f)) : Formula::knows(op.agent, std::move(f));
}

}  // namespace

bool match_k_schema(const Formula& f, const ModalOp& op, const AgentSet& agents) {
  if (!op.is_c && !agents.contains(op.agent)) return false;
  const Formula g = expand_e(f, agents);
  if (g.kind() != Conn::Implies) return false;
  const Formula r = g.right();
  if (r.kind() != Conn::Implies) return false;
  const Formula bl = r.left(), br = r.right();
  const Conn want = op.is_c ? Conn::C : Conn::K;
  if (bl.kind() != want || br.kind() != want) return false;
  if (!op.is_c && (bl.agent() != op.agent || br.agent() != op.agent)) return false;
  const Formula phi = bl.left(), psi = br.left();
  const Formula instance = Formula::implies(
      apply_op(op, Formula::implies(phi, psi)),
      Formula::implies(apply_op(op, phi), apply_op(op, psi)));
  return eq_mod_e(g, instance, agents);
}

bool match_axiom(const Formula& f, AxiomId which, const AgentSet& agents) {
  const Formula g = expand_e(f, agents);
  switch (which) {
    case AxiomId::K: {
      for (int a : agents.ids())
        if (match_k_schema(g, ModalOp::k(a), agents)) return true;
      return match_k_schema(g, ModalOp::c(), agents);
    }
    case AxiomId::C1: {
      // C phi -> phi
      if (g.kind() != Conn::Implies) return false;
      const Formula phi = g.right();
      return eq_mod_e(g, Formula::implies(Formula::common(phi), phi), agents);
    }
    case AxiomId::C2: {
      // C phi -> E C phi
      if (g.kind() != Conn::Implies || g.left().kind() != Conn::C) return false;
      const Formula phi = g.left().left();
      return eq_mod_e(
          g,
          Formula::implies(Formula::common(phi), Formula::everyone(Formula::common(phi))),
          agents);
    }
    case AxiomId::C3: {
      // C (phi -> E phi) -> (phi -> C phi)
      if (g.kind() != Conn::Implies || g.right().kind() != Conn::Implies) return false;
      const Formula phi = g.right().left();
      const Formula instance = Formula::implies(
          Formula::common(Formula::implies(phi, Formula::everyone(phi))),
          Formula::implies(phi, Formula::common(phi)));
      return eq_mod_e(g, instance, agents);
    }
  }
  return false;
}

Formula substitute(const Formula& f, const std::map<std::string, Formula>& map) {
  switch (f.kind()) {
    case Conn::Var: {
      auto it = map.find(f.var_name());
      return it == map.end() ? f : it->second;
    }
    case Conn::Top:
    case Conn::Bot:
      return f;
    case Conn::Not:
      return Formula::neg(substitute(f.left(), map));
    case Conn::K:
      return Formula::knows(f.agent(), substitute(f.left(), map));
    case Conn::E:
      return Formula::everyone(substitute(f.left(), map));
    case Conn::C:
      return Formula::common(substitute(f.left(), map));
    case Conn::And:
      return Formula::conj(substitute(f.left(), map), substitute(f.right(), map));
    case Conn::Or:
      return Formula::disj(substitute(f.left(), map), substitute(f.right(), map));
    case Conn::Implies:
      return Formula::implies(substitute(f.left(), map), substitute(f.right(), map));
    case Conn::Iff:
      return Formula::iff(substitute(f.left(), map), substitute(f.right(), map));
  }
  return f;
}

// ---------------------------------------------------------------------------
// Proof checking

namespace {

struct LineChecker {
  const Proof& proof;
  int index;  // 0-based index of the line being checked

  const Formula& current() const { return proof.lines[static_cast<std::size_t>(index)].formula; }

  bool valid_ref(int line) const { return line >= 1 && line <= index; }
  const Formula& at(int line) const {
    return proof.lines[static_cast<std::size_t>(line - 1)].formula;
  }
  bool valid_op(const ModalOp& op) const {
    return op.is_c || proof.agents.contains(op.agent);
  }

  ProofVerdict reject(const std::string& reason) const {
    return ProofVerdict::rejected(index + 1, reason);
  }

  ProofVerdict operator()(const JustTaut&) const {
    try {
      if (!is_tautology(current(), proof.agents)) return reject("not a tautology");
    } catch (const CapExceeded& e) {
      return reject(e.what());
    }
    return ProofVerdict::ok();
  }

  ProofVerdict operator()(const JustAxK& j) const {
    if (!valid_op(j.op)) return reject("operator " + j.op.to_string() + " is not primitive here");
    if (!match_k_schema(current(), j.op, proof.agents))
      return reject("not an instance of the distribution schema for " + j.op.to_string());
    return ProofVerdict::ok();
  }

  ProofVerdict operator()(const JustAxC1&) const {
    if (!match_axiom(current(), AxiomId::C1, proof.agents))
      return reject("not an instance of C f -> f");
    return ProofVerdict::ok();
  }

  ProofVerdict operator()(const JustAxC2&) const {
    if (!match_axiom(current(), AxiomId::C2, proof.agents))
      return reject("not an instance of C f -> E C f");
    return ProofVerdict::ok();
  }

  ProofVerdict operator()(const JustAxC3&) const {
    if (!match_axiom(current(), AxiomId::C3, proof.agents))
      return reject("not an instance of C (f -> E f) -> (f -> C f)");
    return ProofVerdict::ok();
  }

  ProofVerdict operator()(const JustMP& j) const {
    if (!valid_ref(j.antecedent) || !valid_ref(j.implication))
      return reject("mp references a line that is not strictly earlier");
    const Formula expected = Formula::implies(at(j.antecedent), current());
    if (!eq_mod_e(at(j.implication), expected, proof.agents))
      return reject("line " + std::to_string(j.implication) + " is not (line " +
                    std::to_string(j.antecedent) + " -> this line)");
    return ProofVerdict::ok();
  }

  ProofVerdict operator()(const JustSubst& j) const {
    if (!valid_ref(j.line)) return reject("subst references a line that is not strictly earlier");
    std::map<std::string, Formula> map;
    for (const auto& [name, g] : j.map) map.emplace(name, g);
    if (!eq_mod_e(current(), substitute(at(j.line), map), proof.agents))
      return reject("not the given substitution instance of line " + std::to_string(j.line));
    return ProofVerdict::ok();
  }

  ProofVerdict operator()(const JustNec& j) const {
    if (!valid_op(j.op)) return reject("operator " + j.op.to_string() + " is not primitive here");
    if (!valid_ref(j.line)) return reject("nec references a line that is not strictly earlier");
    if (!eq_mod_e(current(), apply_op(j.op, at(j.line)), proof.agents))
      return reject("not " + j.op.to_string() + " applied to line " + std::to_string(j.line));
    return ProofVerdict::ok();
  }
};

}  // namespace

ProofVerdict check_proof(const Proof& p) {
  if (p.lines.empty()) return ProofVerdict::rejected(0, "no lines");
  for (int i = 0; i < static_cast<int>(p.lines.size()); ++i) {
    ProofVerdict v = std::visit(LineChecker{p, i}, p.lines[static_cast<std::size_t>(i)].just);
    if (!v.accepted) return v;
  }
  return ProofVerdict::ok();
}

// ---------------------------------------------------------------------------
// Script parsing

namespace {

std::string trim(std::string s) {
  const auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && is_space(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && is_space(static_cast<unsigned char>(s[i]))) ++i;
  return s.substr(i);
}

ModalOp parse_op(const std::string& tok, const AgentSet& agents, std::size_t pos) {
  if (tok == "C") return ModalOp::c();
  if (tok.size() >= 2 && tok[0] == 'K') {
    int agent = 0;
    for (std::size_t i = 1; i < tok.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(tok[i])))
        throw ParseError("bad operator '" + tok + "'", pos);
      agent = agent * 10 + (tok[i] - '0');
    }
    if (!agents.contains(agent)) throw ParseError("unknown agent index " + tok, pos);
    return ModalOp::k(agent);
  }
  throw ParseError("bad operator '" + tok + "'", pos);
}

int parse_line_ref(const std::string& tok, std::size_t pos) {
  if (tok.empty()) throw ParseError("expected a line number", pos);
  int n = 0;
  for (char c : tok) {
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw ParseError("bad line number '" + tok + "'", pos);
    n = n * 10 + (c - '0');
    if (n > 1000000) throw ParseError("line number out of range", pos);
  }
  return n;
}

Justification parse_justification(const std::string& text, const AgentSet& agents,
                                  std::size_t pos) {
  std::istringstream in(text);
  std::string head;
  in >> head;
  if (head == "taut") {
    std::string extra;
    if (in >> extra) throw ParseError("unexpected token after 'taut'", pos);
    return JustTaut{};
  }
  if (head == "axC1" || head == "axC2" || head == "axC3") {
    std::string extra;
    if (in >> extra) throw ParseError("unexpected token after '" + head + "'", pos);
    if (head == "axC1") return JustAxC1{};
    if (head == "axC2") return JustAxC2{};
    return JustAxC3{};
  }
  if (head == "axK") {
    std::string op;
    if (!(in >> op)) throw ParseError("axK needs an operator", pos);
    std::string extra;
    if (in >> extra) throw ParseError("unexpected token after axK operator", pos);
    return JustAxK{parse_op(op, agents, pos)};
  }
  if (head == "mp") {
    std::string i, j, extra;
    if (!(in >> i >> j)) throw ParseError("mp needs two line numbers", pos);
    if (in >> extra) throw ParseError("unexpected token after mp", pos);
    return JustMP{parse_line_ref(i, pos), parse_line_ref(j, pos)};
  }
  if (head == "nec") {
    std::string op, i, extra;
    if (!(in >> op >> i)) throw ParseError("nec needs an operator and a line number", pos);
    if (in >> extra) throw ParseError("unexpected token after nec", pos);
    return JustNec{parse_op(op, agents, pos), parse_line_ref(i, pos)};
  }
  if (head == "subst") {
    std::string i;
    if (!(in >> i)) throw ParseError("subst needs a line number", pos);
    std::string rest;
    std::getline(in, rest);
    JustSubst out{parse_line_ref(i, pos), {}};
    std::size_t start = 0;
    if (trim(rest).empty()) throw ParseError("subst needs at least one binding", pos);
    while (start <= rest.size()) {
      std::size_t comma = rest.find(',', start);
      std::string binding =
          trim(comma == std::string::npos ? rest.substr(start) : rest.substr(start, comma - start));
      if (binding.empty()) throw ParseError("empty substitution binding", pos);
      const std::size_t sep = binding.find(":=");
      if (sep == std::string::npos)
        throw ParseError("binding '" + binding + "' is missing ':='", pos);
      const std::string name = trim(binding.substr(0, sep));
      if (name.empty()) throw ParseError("binding is missing a variable name", pos);
      for (const auto& [existing, unused] : out.map)
        if (existing == name)
          throw ParseError("duplicate substitution for '" + name + "'", pos);
      out.map.emplace_back(name, parse(binding.substr(sep + 2), agents));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return out;
  }
  throw ParseError("unknown justification '" + head + "'", pos);
}

}  // namespace

Proof parse_proof_script(std::string_view text, const AgentSet& agents) {
  Proof proof{agents, {}};
  std::istringstream in{std::string(text)};
  std::string raw;
  int script_line = 0;
  int expected = 1;
  while (std::getline(in, raw)) {
    ++script_line;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    try {
      std::size_t i = 0;
      while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
      if (i == 0 || i >= line.size() || line[i] != '.')
        throw ParseError("expected '<n>. <formula> ; <justification>'", 0);
      const int number = parse_line_ref(line.substr(0, i), 0);
      if (number != expected)
        throw ParseError("expected line number " + std::to_string(expected), 0);
      ++expected;
      const std::size_t semi = line.find(';', i + 1);
      if (semi == std::string::npos) throw ParseError("missing ';' before justification", 0);
      const Formula f = parse(line.substr(i + 1, semi - i - 1), agents);
      proof.lines.push_back({f, parse_justification(line.substr(semi + 1), agents, 0)});
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(script_line) + ": " + e.what(), e.position);
    }
  }
  return proof;
}

Proof load_proof_script(const std::string& path, const AgentSet& agents) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_proof_script(buf.str(), agents);
}

}  // namespace ckl
