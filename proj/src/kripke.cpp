#include "ckl/kripke.hpp"

#include <fstream>
#include <stdexcept>

namespace ckl {

namespace {

std::uint64_t mask_for(int n) {
  return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
}

}  // namespace

Relation::Relation(int n) : n_(n), rows_(static_cast<std::size_t>(n), 0) {
  if (n < 0 || n > 64) throw std::invalid_argument("relation size out of range");
}

Relation Relation::identity(int n) {
  Relation r(n);
  for (int i = 0; i < n; ++i) r.add(i, i);
  return r;
}

Relation Relation::from_pairs(int n, const std::vector<std::pair<int, int>>& pairs) {
  Relation r(n);
  for (auto [i, j] : pairs) r.add(i, j);
  return r;
}

Relation Relation::from_bits(int n, std::uint64_t bits) {
  if (n * n > 64) throw std::invalid_argument("relation too large for bit decoding");
  Relation r(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (bits >> (i * n + j) & 1) r.add(i, j);
  return r;
}

bool Relation::contains(int i, int j) const {
  return row(i) >> j & 1;
}

void Relation::add(int i, int j) {
  if (i < 0 || i >= n_ || j < 0 || j >= n_)
    throw std::out_of_range("relation pair out of range");
  rows_[static_cast<std::size_t>(i)] |= std::uint64_t{1} << j;
}

std::uint64_t Relation::bits() const {
  if (n_ * n_ > 64) throw std::invalid_argument("relation too large for bit encoding");
  std::uint64_t out = 0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (contains(i, j)) out |= std::uint64_t{1} << (i * n_ + j);
  return out;
}

Relation Relation::united(const Relation& other) const {
  if (other.n_ != n_) throw std::invalid_argument("relation size mismatch");
  Relation r(n_);
  for (int i = 0; i < n_; ++i)
    r.rows_[static_cast<std::size_t>(i)] =
        rows_[static_cast<std::size_t>(i)] | other.rows_[static_cast<std::size_t>(i)];
  return r;
}

Relation Relation::reflexive_transitive_closure() const {
  Relation r = *this;
  for (int i = 0; i < n_; ++i) r.rows_[static_cast<std::size_t>(i)] |= std::uint64_t{1} << i;
  for (int k = 0; k < n_; ++k)
    for (int i = 0; i < n_; ++i)
      if (r.rows_[static_cast<std::size_t>(i)] >> k & 1)
        r.rows_[static_cast<std::size_t>(i)] |= r.rows_[static_cast<std::size_t>(k)];
  return r;
}

std::vector<std::pair<int, int>> Relation::pairs() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (contains(i, j)) out.emplace_back(i, j);
  return out;
}

std::uint64_t box(const Relation& rel, std::uint64_t set) {
  const std::uint64_t mask = mask_for(rel.size());
  std::uint64_t out = 0;
  for (int w = 0; w < rel.size(); ++w)
    if ((rel.row(w) & ~set & mask) == 0) out |= std::uint64_t{1} << w;
  return out;
}

Frame::Frame(AgentSet agents, int worlds, std::vector<Relation> r_k, Relation r_c)
    : agents_(std::move(agents)), worlds_(worlds), r_k_(std::move(r_k)), r_c_(std::move(r_c)) {
  if (worlds_ < 1 || worlds_ > 64) throw std::invalid_argument("world count out of range");
  if (static_cast<int>(r_k_.size()) != agents_.size())
    throw std::invalid_argument("one relation per agent required");
  for (const auto& r : r_k_)
    if (r.size() != worlds_) throw std::invalid_argument("agent relation size mismatch");
  if (r_c_.size() != worlds_) throw std::invalid_argument("r_c size mismatch");
}

const Relation& Frame::k_rel(int agent) const {
  int idx = agents_.index_of(agent);
  if (idx < 0) throw std::invalid_argument("unknown agent " + std::to_string(agent));
  return r_k_[static_cast<std::size_t>(idx)];
}

Relation Frame::e_rel() const {
  Relation r(worlds_);
  for (const auto& rk : r_k_) r = r.united(rk);
  return r;
}

std::uint64_t Frame::world_mask() const { return mask_for(worlds_); }

bool is_ckl_frame(const Frame& f) {
  return f.c_rel() == f.e_rel().reflexive_transitive_closure();
}

namespace {

std::uint64_t eval_core(const KripkeModel& m, const Formula& f) {
  switch (f.kind()) {
    case Conn::Var: {
      auto it = m.valuation.find(f.var_name());
      return it == m.valuation.end() ? 0 : it->second;
    }
    case Conn::Top:
      return m.frame.world_mask();
    case Conn::Bot:
      return 0;
    case Conn::Not:
      return ~eval_core(m, f.left()) & m.frame.world_mask();
    case Conn::And:
      return eval_core(m, f.left()) & eval_core(m, f.right());
    case Conn::K:
      return box(m.frame.k_rel(f.agent()), eval_core(m, f.left()));
    case Conn::C:
      return box(m.frame.c_rel(), eval_core(m, f.left()));
    default:
      throw std::logic_error("eval_core: formula not in core form");
  }
}

}  // namespace

std::uint64_t eval(const KripkeModel& m, const Formula& f) {
  return eval_core(m, expand(f, m.frame.agents()));
}

bool valid_in_frame(const Frame& f, const Formula& phi) {
  const std::vector<std::string> vars = variables(phi);
  const int bits = static_cast<int>(vars.size()) * f.worlds();
  if (bits > 16)
    throw CapExceeded("valid_in_frame: " + std::to_string(vars.size()) + " variables on " +
                      std::to_string(f.worlds()) + " worlds exceeds the enumeration cap");
  const Formula core = expand(phi, f.agents());
  KripkeModel m{f, {}};
  const std::uint64_t full = f.world_mask();
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << bits); ++v) {
    for (std::size_t i = 0; i < vars.size(); ++i)
      m.valuation[vars[i]] = (v >> (i * static_cast<std::size_t>(f.worlds()))) & full;
    if (eval_core(m, core) != full) return false;
  }
  return true;
}

FrameStream::FrameStream(AgentSet agents, int worlds, bool exhaustive, std::uint64_t seed,
                         std::int64_t count)
    : agents_(std::move(agents)),
      worlds_(worlds),
      exhaustive_(exhaustive),
      total_(count),
      rng_(seed) {}

FrameStream FrameStream::exhaustive(AgentSet agents, int worlds) {
  const int rels = agents.size() + 1;
  const int bits = worlds * worlds * rels;
  if (bits > 16)
    throw CapExceeded("exhaustive frame enumeration needs " + std::to_string(bits) +
                      " relation bits; cap is 16 (use sampling)");
  return FrameStream(std::move(agents), worlds, true, 0, std::int64_t{1} << bits);
}

FrameStream FrameStream::sampled(AgentSet agents, int worlds, std::uint64_t seed,
                                 std::int64_t count) {
  if (worlds * worlds > 64) throw std::invalid_argument("sampled frames: too many worlds");
  if (count < 0) throw std::invalid_argument("sampled frames: negative count");
  return FrameStream(std::move(agents), worlds, false, seed, count);
}

std::optional<Frame> FrameStream::next() {
  if (index_ >= total_) return std::nullopt;
  const int cell = worlds_ * worlds_;
  const std::uint64_t cell_mask = mask_for(cell);
  std::vector<Relation> r_k;
  Relation r_c(worlds_);
  if (exhaustive_) {
    auto idx = static_cast<std::uint64_t>(index_);
    for (int a = 0; a < agents_.size(); ++a)
      r_k.push_back(Relation::from_bits(worlds_, (idx >> (a * cell)) & cell_mask));
    r_c = Relation::from_bits(worlds_, (idx >> (agents_.size() * cell)) & cell_mask);
  } else {
    for (int a = 0; a < agents_.size(); ++a)
      r_k.push_back(Relation::from_bits(worlds_, rng_() & cell_mask));
    r_c = Relation::from_bits(worlds_, rng_() & cell_mask);
  }
  ++index_;
  return Frame(agents_, worlds_, std::move(r_k), std::move(r_c));
}

// ---------------------------------------------------------------------------
// JSON model files

namespace {

nlohmann::json pairs_to_json(const Relation& r) {
  nlohmann::json out = nlohmann::json::array();
  for (auto [i, j] : r.pairs()) out.push_back(nlohmann::json::array({i, j}));
  return out;
}

Relation relation_from_json(int worlds, const nlohmann::json& j, const std::string& what) {
  if (!j.is_array()) throw std::runtime_error(what + ": expected an array of pairs");
  Relation r(worlds);
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() ||
        !p[1].is_number_integer())
      throw std::runtime_error(what + ": malformed pair");
    const int i = p[0].get<int>();
    const int k = p[1].get<int>();
    if (i < 0 || i >= worlds || k < 0 || k >= worlds)
      throw std::runtime_error(what + ": world index out of range");
    r.add(i, k);
  }
  return r;
}

std::uint64_t world_set_from_json(int worlds, const nlohmann::json& j, const std::string& what) {
  if (!j.is_array()) throw std::runtime_error(what + ": expected an array of worlds");
  std::uint64_t out = 0;
  for (const auto& w : j) {
    if (!w.is_number_integer()) throw std::runtime_error(what + ": world index must be an integer");
    const int i = w.get<int>();
    if (i < 0 || i >= worlds) throw std::runtime_error(what + ": world index out of range");
    out |= std::uint64_t{1} << i;
  }
  return out;
}

nlohmann::json world_set_to_json(int worlds, std::uint64_t set) {
  nlohmann::json out = nlohmann::json::array();
  for (int i = 0; i < worlds; ++i)
    if (set >> i & 1) out.push_back(i);
  return out;
}

}  // namespace

nlohmann::json model_to_json(const KripkeModel& m) {
  nlohmann::json j;
  j["worlds"] = m.frame.worlds();
  j["agents"] = m.frame.agents().ids();
  nlohmann::json rk = nlohmann::json::object();
  for (int a : m.frame.agents().ids()) rk[std::to_string(a)] = pairs_to_json(m.frame.k_rel(a));
  j["r_k"] = std::move(rk);
  j["r_c"] = pairs_to_json(m.frame.c_rel());
  nlohmann::json val = nlohmann::json::object();
  for (const auto& [name, set] : m.valuation)
    val[name] = world_set_to_json(m.frame.worlds(), set);
  j["valuation"] = std::move(val);
  return j;
}

Frame frame_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::runtime_error("model file: expected a JSON object");
  if (!j.contains("worlds") || !j["worlds"].is_number_integer())
    throw std::runtime_error("model file: missing integer field 'worlds'");
  const int worlds = j["worlds"].get<int>();
  if (worlds < 1 || worlds > 64) throw std::runtime_error("model file: 'worlds' out of range");
  if (!j.contains("agents") || !j["agents"].is_array() || j["agents"].empty())
    throw std::runtime_error("model file: missing nonempty array 'agents'");
  std::vector<int> ids;
  for (const auto& a : j["agents"]) {
    if (!a.is_number_integer()) throw std::runtime_error("model file: agent ids must be integers");
    ids.push_back(a.get<int>());
  }
  AgentSet agents{ids};

  std::vector<Relation> r_k(ids.size(), Relation(worlds));
  if (j.contains("r_k")) {
    if (!j["r_k"].is_object()) throw std::runtime_error("model file: 'r_k' must be an object");
    for (const auto& [key, value] : j["r_k"].items()) {
      int agent = 0;
      try {
        agent = std::stoi(key);
      } catch (const std::exception&) {
        throw std::runtime_error("model file: bad agent key '" + key + "' in r_k");
      }
      const int idx = agents.index_of(agent);
      if (idx < 0) throw std::runtime_error("model file: r_k key '" + key + "' is not an agent");
      r_k[static_cast<std::size_t>(idx)] = relation_from_json(worlds, value, "r_k[" + key + "]");
    }
  }
  Relation r_c(worlds);
  if (j.contains("r_c")) r_c = relation_from_json(worlds, j["r_c"], "r_c");
  return Frame(std::move(agents), worlds, std::move(r_k), std::move(r_c));
}

KripkeModel model_from_json(const nlohmann::json& j) {
  KripkeModel m{frame_from_json(j), {}};
  if (j.contains("valuation")) {
    if (!j["valuation"].is_object())
      throw std::runtime_error("model file: 'valuation' must be an object");
    for (const auto& [name, value] : j["valuation"].items())
      m.valuation[name] = world_set_from_json(m.frame.worlds(), value, "valuation." + name);
  }
  return m;
}

KripkeModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  nlohmann::json j;
  in >> j;
  return model_from_json(j);
}

}  // namespace ckl
