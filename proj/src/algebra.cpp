#include "ckl/algebra.hpp"

#include <stdexcept>
#include <unordered_map>

namespace ckl {

FiniteModalAlgebra::FiniteModalAlgebra(AgentSet agents, int atoms, std::vector<Relation> op_k,
                                       Relation op_c)
    : agents_(std::move(agents)), atoms_(atoms), op_k_(std::move(op_k)), op_c_(std::move(op_c)) {
  if (atoms_ < 1 || atoms_ > 64) throw std::invalid_argument("atom count out of range");
  if (static_cast<int>(op_k_.size()) != agents_.size())
    throw std::invalid_argument("one operator relation per agent required");
  for (const auto& r : op_k_)
    if (r.size() != atoms_) throw std::invalid_argument("operator relation size mismatch");
  if (op_c_.size() != atoms_) throw std::invalid_argument("op_c size mismatch");
}

std::uint64_t FiniteModalAlgebra::top() const {
  return atoms_ >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << atoms_) - 1;
}

std::uint64_t FiniteModalAlgebra::box_k(int agent, std::uint64_t x) const {
  const int idx = agents_.index_of(agent);
  if (idx < 0) throw std::invalid_argument("unknown agent " + std::to_string(agent));
  return box_k_at(idx, x);
}

std::uint64_t FiniteModalAlgebra::box_k_at(int index, std::uint64_t x) const {
  return box(op_k_[static_cast<std::size_t>(index)], x);
}

std::uint64_t FiniteModalAlgebra::box_c(std::uint64_t x) const { return box(op_c_, x); }

std::uint64_t FiniteModalAlgebra::e_of(std::uint64_t x) const {
  std::uint64_t out = top();
  for (int i = 0; i < agents_.size(); ++i) out &= box_k_at(i, x);
  return out;
}

FiniteModalAlgebra complex_algebra(const Frame& f) {
  std::vector<Relation> op_k;
  for (int i = 0; i < f.agents().size(); ++i) op_k.push_back(f.k_rel_at(i));
  return FiniteModalAlgebra(f.agents(), f.worlds(), std::move(op_k), f.c_rel());
}

std::uint64_t EIterates::meet_all() const {
  std::uint64_t out = ~std::uint64_t{0};
  for (std::uint64_t v : iterates) out &= v;
  return out;
}

EIterates e_iterates(const FiniteModalAlgebra& a, std::uint64_t x) {
  EIterates out;
  std::unordered_map<std::uint64_t, int> seen;
  std::uint64_t cur = x;
  while (true) {
    auto it = seen.find(cur);
    if (it != seen.end()) {
      out.cycle_start = it->second;
      out.cycle_len = static_cast<int>(out.iterates.size()) - it->second;
      return out;
    }
    seen.emplace(cur, static_cast<int>(out.iterates.size()));
    out.iterates.push_back(cur);
    cur = a.e_of(cur);
  }
}

namespace {

void require_sweepable(const FiniteModalAlgebra& a, const char* what) {
  if (a.atoms() > 20)
    throw CapExceeded(std::string(what) + ": element sweep over " + std::to_string(a.atoms()) +
                      " atoms exceeds the cap of 20");
}

bool leq(std::uint64_t x, std::uint64_t y) { return (x & ~y) == 0; }

}  // namespace

std::optional<AxiomViolation> mh_violation(const FiniteModalAlgebra& a) {
  require_sweepable(a, "mh_violation");
  const std::uint64_t top = a.top();
  for (std::uint64_t x = 0; x <= top; ++x) {
    const std::uint64_t cx = a.box_c(x);
    if (!leq(cx, x)) return AxiomViolation{1, x};
    if (!leq(cx, a.e_of(cx))) return AxiomViolation{2, x};
    if (!leq(a.box_c(a.implies(x, a.e_of(x))), a.implies(x, cx)))
      return AxiomViolation{3, x};
  }
  return std::nullopt;
}

bool is_mh_algebra(const FiniteModalAlgebra& a) { return !mh_violation(a).has_value(); }

std::optional<AxiomViolation> ckl_violation(const FiniteModalAlgebra& a) {
  require_sweepable(a, "ckl_violation");
  const std::uint64_t top = a.top();
  for (std::uint64_t x = 0; x <= top; ++x) {
    const std::uint64_t cx = a.box_c(x);
    if (!leq(cx, a.e_of(cx))) return AxiomViolation{1, x};
    if (cx != e_iterates(a, x).meet_all()) return AxiomViolation{2, x};
  }
  return std::nullopt;
}

bool is_ckl_algebra(const FiniteModalAlgebra& a) { return !ckl_violation(a).has_value(); }

bool omega_rule_oracle(const FiniteModalAlgebra& a, std::uint64_t gamma, std::uint64_t phi) {
  require_sweepable(a, "omega_rule_oracle");
  return leq(gamma, e_iterates(a, phi).meet_all());
}

namespace {

std::uint64_t eval_core(const FiniteModalAlgebra& a, const Formula& f,
                        const std::map<std::string, std::uint64_t>& valuation) {
  switch (f.kind()) {
    case Conn::Var: {
      auto it = valuation.find(f.var_name());
      return it == valuation.end() ? 0 : it->second;
    }
    case Conn::Top:
      return a.top();
    case Conn::Bot:
      return 0;
    case Conn::Not:
      return a.complement(eval_core(a, f.left(), valuation));
    case Conn::And:
      return eval_core(a, f.left(), valuation) & eval_core(a, f.right(), valuation);
    case Conn::K:
      return a.box_k(f.agent(), eval_core(a, f.left(), valuation));
    case Conn::C:
      return a.box_c(eval_core(a, f.left(), valuation));
    default:
      throw std::logic_error("eval_core: formula not in core form");
  }
}

}  // namespace

std::uint64_t eval_in_algebra(const FiniteModalAlgebra& a, const Formula& f,
                              const std::map<std::string, std::uint64_t>& valuation) {
  return eval_core(a, expand(f, a.agents()), valuation);
}

bool valid_in_algebra(const FiniteModalAlgebra& a, const Formula& phi) {
  const std::vector<std::string> vars = variables(phi);
  const int bits = static_cast<int>(vars.size()) * a.atoms();
  if (bits > 20)
    throw CapExceeded("valid_in_algebra: " + std::to_string(vars.size()) + " variables over " +
                      std::to_string(a.atoms()) + " atoms exceeds the enumeration cap");
  const Formula core = expand(phi, a.agents());
  std::map<std::string, std::uint64_t> valuation;
  const std::uint64_t top = a.top();
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << bits); ++v) {
    for (std::size_t i = 0; i < vars.size(); ++i)
      valuation[vars[i]] = (v >> (i * static_cast<std::size_t>(a.atoms()))) & top;
    if (eval_core(a, core, valuation) != top) return false;
  }
  return true;
}

FrameClassification classify_frame(const Frame& f) {
  const Formula p = Formula::var("p");
  const Formula s3 = Formula::implies(Formula::common(p), p);
  const Formula s4 = Formula::implies(Formula::common(p), Formula::everyone(Formula::common(p)));
  const Formula s5 = Formula::implies(Formula::common(Formula::implies(p, Formula::everyone(p))),
                                      Formula::implies(p, Formula::common(p)));
  const FiniteModalAlgebra a = complex_algebra(f);
  FrameClassification out{};
  out.ckl_frame = is_ckl_frame(f);
  out.schemas_valid =
      valid_in_frame(f, s3) && valid_in_frame(f, s4) && valid_in_frame(f, s5);
  out.mh_algebra = is_mh_algebra(a);
  out.ckl_algebra = is_ckl_algebra(a);
  return out;
}

}  // namespace ckl
