#include "doctest.h"
#include "mms/binomial.hpp"
#include "mms/driver.hpp"
#include "oracles.hpp"

using mms::Verdict;

namespace {

mms::DriverOptions positive() {
  mms::DriverOptions o;
  o.search.mode = mms::PropagationMode::kPositive;
  return o;
}

}  // namespace

TEST_CASE("two-value counts") {
  for (int n = 5; n <= 14; ++n) {
    for (int k = 2; k <= 4 && k < n; ++k) CHECK(mms::two_value_s(n - 1, 1, k) == mms::binomial(n - 1, k - 1));
  }
  for (int n = 10; n <= 20; ++n) {
    for (int k = 2; 3 * k < n; ++k) CHECK(mms::two_value_s(3, n - 3, k) == mms::binomial(n - 3, k));
  }
  CHECK(mms::two_value_s(2, 7, 4) == 35);
  for (int m = 2; m <= 25; ++m) {
    for (int a = 1; a < m; ++a) {
      const auto x = mms::two_value_vector(a, m - a);
      for (int k = 1; k <= 6 && k <= m; ++k) REQUIRE(mms::two_value_s(a, m - a, k) == mms::count_nonneg_ksums(x, k));
    }
  }
}

TEST_CASE("two-value scan") {
  CHECK(mms::scan_two_value(11, 3).t_min == 45);
  const auto s94 = mms::scan_two_value(9, 4);
  CHECK(s94.t_min == 35);
  CHECK(s94.a == 2);
  CHECK(s94.b == 7);
  CHECK(mms::scan_two_value(19, 5).t_min == 3060);
  for (int k = 2; k <= 6; ++k) {
    std::uint64_t best = UINT64_MAX;
    for (int a = 1; a <= k; ++a) best = std::min(best, mms::count_nonneg_ksums(mms::two_value_vector(a, k + 1 - a), k));
    CHECK(mms::scan_two_value(k + 1, k).t_min == best);
  }
}

TEST_CASE("vector descriptors") {
  CHECK(mms::describe_vector(mms::two_value_vector(2, 7)) == "2^7 (-7)^2");
  mms::RationalVector x{mms::Rational(35, 2), mms::Rational(3, 2), mms::Rational(3, 2), mms::Rational(-8)};
  CHECK(mms::describe_vector(x) == "35^1 3^2 (-16)^1");
  CHECK(mms::describe_vector({0, 0}) == "0^2");
}

TEST_CASE("N_k") {
  CHECK(mms::compute_Nk(4) == 14);
  CHECK(mms::compute_Nk(5) == 17);
  CHECK(mms::compute_Nk(6) == 20);
  CHECK(mms::compute_Nk(7) == 23);
  mpz_class prev = 0;
  for (int k = 2; k <= 250; ++k) {
    const mpz_class v = mms::compute_Nk(k);
    auto holds = [k](unsigned long n) {
      mpz_class lhs;
      mpz_class rhs;
      mpz_bin_uiui(lhs.get_mpz_t(), n - 3, static_cast<unsigned long>(k));
      mpz_bin_uiui(rhs.get_mpz_t(), n - 1, static_cast<unsigned long>(k) - 1);
      return lhs >= rhs;
    };
    REQUIRE(holds(v.get_ui()));
    REQUIRE_FALSE(holds(v.get_ui() - 1));
    REQUIRE(v >= prev);
    prev = v;
  }
  const double ratio = mms::compute_Nk(250).get_d() / 250.0;
  CHECK(std::abs(ratio - 3.147899) < 0.01);
}

TEST_CASE("g values through the driver") {
  mms::Driver d(positive());
  CHECK(d.compute_g(13, 3).value == 66);
  const auto g104 = d.compute_g(10, 4);
  CHECK(g104.value == 70);
  CHECK(g104.deficiency == 14);
  CHECK(g104.example == "2^8 (-8)^2");

  mms::Driver shortcut(positive());
  const auto g105 = shortcut.compute_g(10, 5);
  CHECK(g105.value == 126);
  CHECK(g105.source == "baranyai");
  CHECK(g105.nodes == 0);

  auto opts = positive();
  opts.baranyai = false;
  mms::Driver audit(opts);
  const auto g124 = audit.compute_g(12, 4);
  CHECK(g124.value == 165);
  CHECK(g124.deficiency == 0);
  CHECK(g124.source == "search");
}

TEST_CASE("f(3) and its table") {
  mms::Driver d(positive());
  const auto r = d.compute_f(3);
  CHECK(r.value == "11");
  const std::vector<std::uint64_t> expect{1, 3, 10, 10, 16, 28, 35, 45, 55, 66};
  REQUIRE(r.rows.size() == expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i) CHECK(r.rows[i].value == expect[i]);
  CHECK(r.extra["two_value_mismatch"].empty());
  for (std::size_t i = 1; i < r.rows.size(); ++i) CHECK(r.rows[i].value >= r.rows[i - 1].value);
}

TEST_CASE("strong values for k = 3") {
  mms::Driver d(positive());
  CHECK(d.compute_g_strong(11, 3).value == 46);
  CHECK(d.compute_g_strong(13, 3).value == 84);
}

TEST_CASE("driver checkpoint and resume") {
  auto opts = positive();
  opts.search.mode = mms::PropagationMode::kNegative;
  mms::Driver full(opts);
  const auto expect = full.compute_g(10, 4);
  REQUIRE(expect.nodes > 2);

  std::optional<nlohmann::json> saved;
  opts.search.node_budget = 2;
  opts.on_checkpoint = [&](const nlohmann::json& cp) { saved = cp; };
  mms::Driver part(opts);
  const auto r = part.compute_g(10, 4);
  REQUIRE(r.verdict == Verdict::kIndeterminate);
  REQUIRE(saved.has_value());
  CHECK((*saved)["t"].is_string());

  auto again = positive();
  mms::Driver resumed(again);
  const auto done = resumed.resume(nlohmann::json::parse(saved->dump()));
  CHECK(done.verdict == Verdict::kHolds);
  CHECK(done.value == "70");
}

TEST_CASE("proof logs replay, and tampering is caught") {
  std::string text;
  auto opts = positive();
  opts.on_log = [&](const mms::ProofLog& log) { text += log.text(); };
  mms::Driver d(opts);
  d.compute_g(11, 4);
  d.compute_g(11, 3);
  mms::ProofLog witness_log;
  REQUIRE(mms::verify_g(9, 4, 36, d.gtable(), opts.search, &witness_log).verdict == Verdict::kWitness);
  text += witness_log.text();
  const auto segs = mms::replay_proof(text);
  REQUIRE(segs.size() >= 2);
  for (const auto& s : segs) CHECK_MESSAGE(s.ok, s.detail);

  const auto pos = text.find("ROUND 1 NEG");
  REQUIRE(pos != std::string::npos);
  std::string bad = text;
  bad.replace(pos, 11, "ROUND 1 POS");
  bool any_fail = false;
  for (const auto& s : mms::replay_proof(bad)) any_fail = any_fail || !s.ok;
  CHECK(any_fail);

  const auto w = text.find("WITNESS S=");
  REQUIRE(w != std::string::npos);
  std::string forged = text;
  forged.replace(w, 10, "WITNESS S=1");
  bool caught = false;
  for (const auto& s : mms::replay_proof(forged)) caught = caught || !s.ok;
  CHECK(caught);
}

TEST_CASE("result files use exact decimal strings") {
  mms::Driver d(positive());
  const auto r = mms::make_result("compute-g", d.compute_g(9, 4), positive());
  const auto j = mms::to_json(r);
  CHECK(j["value"] == "35");
  CHECK(j["deficiency"] == "21");
  CHECK(j["nodes"].is_string());
  CHECK(mms::csv_rows(r) .rfind("4,9,35,21,", 0) == 0);
}
