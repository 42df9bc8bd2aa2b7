#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "json.hpp"
#include "mms/search.hpp"

namespace mms {

// s_k of the vector with b entries equal to a followed by a entries equal to -b.
std::uint64_t two_value_s(int a, int b, int k);

struct TwoValueScan {
  std::uint64_t t_min = 0;
  int a = 0;
  int b = 0;
};

// Minimum of two_value_s over a + b = n (smallest a on ties).
TwoValueScan scan_two_value(int n, int k);

// Explicit two-value vector a^b (-b)^a.
RationalVector two_value_vector(int a, int b);

// Power notation of a vector scaled to coprime integers, e.g. "35^1 3^10 (-16)^5".
std::string describe_vector(const RationalVector& x);

// Smallest N with C(N-3,k) >= C(N-1,k-1).
mpz_class compute_Nk(int k);

// {1, n-k+2, ..., n}
KSet sharp_complement(int n, int k);

struct DriverOptions {
  SearchConfig search;
  bool baranyai = true;
  // Receives the proof log of every verification run, in order.
  std::function<void(const ProofLog&)> on_log;
  // Receives driver checkpoints (see Driver::checkpoint_json).
  std::function<void(const nlohmann::json&)> on_checkpoint;
};

// One computed g(n,k) or g_s(n,k).
struct GRow {
  int n = 0;
  int k = 0;
  Verdict verdict = Verdict::kIndeterminate;
  std::uint64_t value = 0;  // valid unless INDETERMINATE
  std::uint64_t deficiency = 0;  // C(n-1,k-1) - value, 0 for g_s rows above it
  std::string source;  // "search", "baranyai"
  std::string example;
  std::uint64_t t = 0;  // threshold of the last verification
  std::uint64_t nodes = 0;
  std::uint64_t lp_solves = 0;
  double seconds = 0;
  std::optional<SearchCheckpoint> open;  // frontier when INDETERMINATE
};

struct RunResult {
  std::string kind;  // compute-g, compute-f, compute-gs, scan-two-value, compute-nk
  int n = 0;
  int k = 0;
  Verdict verdict = Verdict::kHolds;
  std::string value;  // exact decimal
  std::vector<GRow> rows;
  std::uint64_t nodes = 0;
  double seconds = 0;
  std::uint64_t seed = 0;
  std::string log_path;
  nlohmann::json extra = nlohmann::json::object();
};

nlohmann::json to_json(const RunResult& r);
std::string csv_header();
std::string csv_rows(const RunResult& r);

class Driver {
 public:
  explicit Driver(DriverOptions options) : opt_(std::move(options)) {}

  GRow compute_g(int n, int k);
  GRow compute_g_strong(int n, int k);
  // f(k) with one row per scanned n; kIndeterminate if a row is.
  RunResult compute_f(int k, int first_n = 0);

  GTable& gtable() { return gtable_; }
  const GTable& gtable() const { return gtable_; }

  // State needed to continue an interrupted query.
  nlohmann::json checkpoint_json(const std::string& kind, int n, int k, std::uint64_t t, const std::string& example,
                                 const SearchCheckpoint& frontier, const std::vector<GRow>& done) const;
  // Continues the query recorded by checkpoint_json.
  RunResult resume(const nlohmann::json& checkpoint);

 private:
  GRow descend(int n, int k, std::uint64_t t, std::string example, bool strong,
               const std::optional<SearchCheckpoint>& start);
  void record(const GRow& row);

  DriverOptions opt_;
  GTable gtable_;
  std::string kind_ = "compute-g";
  std::vector<GRow> done_;
};

RunResult make_result(const std::string& kind, const GRow& row, const DriverOptions& opt);

struct ReplaySegment {
  int n = 0;
  int k = 0;
  std::uint64_t t = 0;
  std::string verdict;
  bool ok = false;
  std::string detail;
};

// Re-runs every run recorded in a text proof log (HEADER ... RESULT) with the
// recorded settings and compares the regenerated lines; witnesses are also
// re-scored directly. Runs continued from a checkpoint only get the re-score.
std::vector<ReplaySegment> replay_proof(const std::string& text);

nlohmann::json gtable_json(const GTable& g);
GTable gtable_from_json(const nlohmann::json& j);
nlohmann::json config_json(const SearchConfig& c);
SearchConfig config_from_json(const nlohmann::json& j);

}  // namespace mms
