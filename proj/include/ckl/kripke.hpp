#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ckl/formula.hpp"

namespace ckl {

// Binary relation on {0, ..., n-1}; one bitmask row per source world.
class Relation {
 public:
  Relation() = default;
  explicit Relation(int n);
  static Relation identity(int n);
  static Relation from_pairs(int n, const std::vector<std::pair<int, int>>& pairs);
  // Decodes the low n*n bits, bit i*n+j <-> (i, j). Requires n*n <= 64.
  static Relation from_bits(int n, std::uint64_t bits);

  int size() const { return n_; }
  bool contains(int i, int j) const;
  void add(int i, int j);
  std::uint64_t row(int i) const { return rows_[static_cast<std::size_t>(i)]; }
  std::uint64_t bits() const;  // inverse of from_bits
  Relation united(const Relation& other) const;
  // Smallest reflexive transitive superset (bit-parallel Warshall).
  Relation reflexive_transitive_closure() const;
  std::vector<std::pair<int, int>> pairs() const;  // sorted

  bool operator==(const Relation&) const = default;

 private:
  int n_ = 0;
  std::vector<std::uint64_t> rows_;
};

// {w | every R-successor of w lies in `set`}; bitmasks over worlds.
std::uint64_t box(const Relation& rel, std::uint64_t set);

class Frame {
 public:
  Frame(AgentSet agents, int worlds, std::vector<Relation> r_k, Relation r_c);

  const AgentSet& agents() const { return agents_; }
  int worlds() const { return worlds_; }
  const Relation& k_rel(int agent) const;  // by agent id
  const Relation& k_rel_at(int index) const { return r_k_[static_cast<std::size_t>(index)]; }
  const Relation& c_rel() const { return r_c_; }
  Relation e_rel() const;  // union of the agent relations
  std::uint64_t world_mask() const;

  bool operator==(const Frame&) const = default;

 private:
  AgentSet agents_;
  int worlds_;
  std::vector<Relation> r_k_;
  Relation r_c_;
};

// True iff r_c is the reflexive transitive closure of the union of the
// agent relations.
bool is_ckl_frame(const Frame& f);

struct KripkeModel {
  Frame frame;
  std::map<std::string, std::uint64_t> valuation;  // variable -> world bitmask

  bool operator==(const KripkeModel&) const = default;
};

// Extension of f in m. Variables missing from the valuation denote the
// empty set; derived connectives are expanded before evaluation.
std::uint64_t eval(const KripkeModel& m, const Formula& f);

// True iff eval covers every world under every valuation of the variables
// of phi. Enumerates all valuations; throws CapExceeded when
// |vars(phi)| * worlds > 16.
bool valid_in_frame(const Frame& f, const Formula& phi);

// Streams frames over a fixed world count: either every assignment of the
// |agents|+1 relations in index order (exhaustive), or seeded frames whose
// relation bits are i.i.d. fair coins (sampled).
class FrameStream {
 public:
  // Throws CapExceeded when worlds^2 * (|agents|+1) > 16 bits.
  static FrameStream exhaustive(AgentSet agents, int worlds);
  static FrameStream sampled(AgentSet agents, int worlds, std::uint64_t seed,
                             std::int64_t count);

  std::optional<Frame> next();
  std::int64_t total() const { return total_; }

 private:
  FrameStream(AgentSet agents, int worlds, bool exhaustive, std::uint64_t seed,
              std::int64_t count);

  AgentSet agents_;
  int worlds_;
  bool exhaustive_;
  std::int64_t index_ = 0;
  std::int64_t total_;
  std::mt19937_64 rng_;
};

// Model files:
//   {"worlds": n, "agents": [1,2], "r_k": {"1": [[0,1]]}, "r_c": [[0,0]],
//    "valuation": {"p": [0,2]}}
// Relations are sorted pair lists; serialization is canonical, so
// model_to_json(model_from_json(j)) is a fixed point.
nlohmann::json model_to_json(const KripkeModel& m);
KripkeModel model_from_json(const nlohmann::json& j);
Frame frame_from_json(const nlohmann::json& j);
KripkeModel load_model(const std::string& path);

}  // namespace ckl
