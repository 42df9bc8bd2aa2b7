#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mms/exact_lp.hpp"
#include "mms/propagation.hpp"
#include "mms/shift_counts.hpp"

namespace mms {

enum class PropagationMode { kNegative, kPositive, kStochastic };
PropagationMode parse_mode(const std::string& name);
const char* mode_name(PropagationMode m);

// Line-oriented record of one verification run with a JSON mirror.
class ProofLog {
 public:
  void header(int n, int k, std::uint64_t t, const std::string& fields);
  void node_open(const std::string& path, int depth);
  void node_close(const std::string& path, const std::string& reason);
  void propagation(const PropagationEvent& e);
  void lp(const LPResult& res, std::optional<std::uint64_t> sk);
  void branch(const KSet& s, bool negative);
  void witness(const RationalVector& x, std::uint64_t s);
  void result(const std::string& verdict, std::uint64_t nodes);
  void append(const ProofLog& other);

  const std::vector<std::string>& lines() const { return lines_; }
  std::string text() const;
  nlohmann::json json() const;
  void set_footer(const nlohmann::json& footer) { footer_ = footer; }

 private:
  void add(std::string line, nlohmann::json event);

  std::vector<std::string> lines_;
  nlohmann::json events_ = nlohmann::json::array();
  nlohmann::json footer_ = nlohmann::json::object();
};

struct Witness {
  RationalVector x;
  std::uint64_t s = 0;
};

// A pending node: the families it inherits (as labelled in `state`), the
// branch sets chosen on the way down and its path ('0' negative, '1' positive).
struct OpenNode {
  FamilyState state;
  std::vector<KSet> bplus;
  std::vector<KSet> bminus;
  std::string path;
};

// Serializable form of an OpenNode: colex ranks of generators in insertion order.
struct FrontierNode {
  std::string path;
  std::vector<std::uint64_t> bplus, bminus, aplus, aminus;
};

struct SearchCheckpoint {
  std::uint64_t nodes = 0;
  std::vector<FrontierNode> frontier;
};

nlohmann::json to_json(const SearchCheckpoint& c);
SearchCheckpoint checkpoint_from_json(const nlohmann::json& j);
FrontierNode freeze(const OpenNode& node);
OpenNode thaw(const FrontierNode& f, std::shared_ptr<const ShiftUniverse> universe, CountStrategy strategy);

struct SearchConfig {
  PropagationMode mode = PropagationMode::kNegative;
  PropagationConfig propagation;
  CountStrategy strategy = CountStrategy::kAuto;
  std::uint64_t node_budget = 0;  // 0 = unlimited
  double time_budget_seconds = 0;  // 0 = unlimited
  int parallel = 1;
  std::uint64_t checkpoint_every_nodes = 10000;
  double checkpoint_every_seconds = 60;
  std::function<void(const SearchCheckpoint&)> on_checkpoint;
};

enum class Verdict { kHolds, kWitness, kIndeterminate };
const char* verdict_name(Verdict v);

struct SearchResult {
  Verdict verdict = Verdict::kIndeterminate;
  std::optional<Witness> witness;
  std::uint64_t nodes = 0;
  double seconds = 0;
  std::uint64_t lp_solves = 0;
  SearchCheckpoint checkpoint;  // frontier left open when INDETERMINATE
};

// Undecided set maximizing min(L*, R*), lowest colex rank on ties.
KSet select_branch_set(const FamilyState& state);

// Branch-and-cut below the given branch sets. kHolds means no x in F_n
// extending them has s_k(x) < t.
SearchResult branch_and_cut(std::uint64_t t, OpenNode root, const GTable& gtable, const SearchConfig& config,
                            ProofLog* log);

// Decides g(n,k) >= t from empty branch sets (plus `forced_negative`, used
// for the strong variant). The log gets a header describing the run.
SearchResult verify_g(int n, int k, std::uint64_t t, const GTable& gtable, const SearchConfig& config, ProofLog* log,
                      const std::vector<KSet>& forced_negative = {});

// Continues from a checkpoint's frontier.
SearchResult resume_search(int n, int k, std::uint64_t t, const GTable& gtable, const SearchConfig& config,
                           const SearchCheckpoint& checkpoint, ProofLog* log);

std::string header_fields(PropagationMode mode, const SearchConfig& config, const std::vector<KSet>& forced_negative);

}  // namespace mms
