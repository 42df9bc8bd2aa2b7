#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mms/binomial.hpp"
#include "mms/driver.hpp"

namespace {

struct Flags {
  int n = 0;
  int k = 0;
  std::uint64_t t = 0;
  bool has_t = false;
  std::string mode = "positive";
  std::uint64_t seed = 0;
  std::uint64_t sample_limit = 200;
  double time_limit = 60;
  double time_budget = 0;
  std::uint64_t node_budget = 0;
  std::string strategy = "auto";
  bool no_baranyai = false;
  std::string log, json, csv, checkpoint, resume, proof;
  int parallel = 1;
  int k_max = 0;
};

void write_file(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

class Output {
 public:
  explicit Output(const Flags& f) : f_(f) {}

  mms::DriverOptions options() {
    mms::DriverOptions o;
    o.search.mode = mms::parse_mode(f_.mode);
    o.search.strategy = mms::parse_strategy(f_.strategy);
    o.search.propagation.rng_seed = f_.seed;
    o.search.propagation.sample_limit = f_.sample_limit;
    o.search.propagation.time_limit_seconds = f_.time_limit;
    o.search.node_budget = f_.node_budget;
    o.search.time_budget_seconds = f_.time_budget;
    o.search.parallel = f_.parallel;
    o.baranyai = !f_.no_baranyai;
    if (!f_.log.empty()) {
      o.on_log = [this](const mms::ProofLog& log) {
        text_ += log.text();
        runs_.push_back(log.json());
        write_file(f_.log, text_);
        write_file(f_.log + ".json", runs_.dump(1) + "\n");
      };
    }
    if (!f_.checkpoint.empty()) {
      o.on_checkpoint = [this](const nlohmann::json& cp) { write_file(f_.checkpoint, cp.dump(1) + "\n"); };
    }
    return o;
  }

  int finish(mms::RunResult r) {
    r.log_path = f_.log;
    const std::string j = mms::to_json(r).dump(2) + "\n";
    std::cout << j;
    if (!f_.json.empty()) write_file(f_.json, j);
    if (!f_.csv.empty()) write_file(f_.csv, mms::csv_header() + mms::csv_rows(r));
    return r.verdict == mms::Verdict::kIndeterminate ? 2 : 0;
  }

 private:
  const Flags& f_;
  std::string text_;
  nlohmann::json runs_ = nlohmann::json::array();
};

void common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--mode", f.mode, "negative | positive | stochastic")->check(CLI::IsMember({"negative", "positive", "stochastic"}));
  cmd->add_option("--seed", f.seed, "seed for stochastic propagation");
  cmd->add_option("--sample-limit", f.sample_limit, "consecutive failed samples before stochastic propagation stops");
  cmd->add_option("--time-limit", f.time_limit, "seconds per stochastic propagation call");
  cmd->add_option("--time-budget", f.time_budget, "wall-clock seconds per search before INDETERMINATE (0 = none)");
  cmd->add_option("--node-budget", f.node_budget, "search nodes per verification before INDETERMINATE (0 = none)");
  cmd->add_option("--strategy", f.strategy, "auto | bfs | incexc")->check(CLI::IsMember({"auto", "bfs", "incexc"}));
  cmd->add_flag("--no-baranyai", f.no_baranyai, "search even when k divides n");
  cmd->add_option("--log", f.log, "proof log path (a .json mirror is written next to it)");
  cmd->add_option("--json", f.json, "result JSON path");
  cmd->add_option("--csv", f.csv, "result CSV path");
  cmd->add_option("--checkpoint", f.checkpoint, "checkpoint path, rewritten periodically");
  cmd->add_option("--parallel", f.parallel, "worker threads for subtree search")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonnegative k-sum verifier: g(n,k), f(k), g_s(n,k), N_k"};
  app.require_subcommand(1);
  Flags f;

  auto* g = app.add_subcommand("compute-g", "compute g(n,k), or decide g(n,k) >= t with --t");
  g->add_option("--n", f.n)->required();
  g->add_option("--k", f.k)->required();
  auto* t_opt = g->add_option("--t", f.t, "only decide g(n,k) >= t");
  common(g, f);

  auto* fk = app.add_subcommand("compute-f", "compute f(k) by scanning n upward");
  fk->add_option("--k", f.k)->required();
  common(fk, f);

  auto* gs = app.add_subcommand("compute-gs", "compute g_s(n,k)");
  gs->add_option("--n", f.n)->required();
  gs->add_option("--k", f.k)->required();
  common(gs, f);

  auto* scan = app.add_subcommand("scan-two-value", "minimum s_k over vectors a^b (-b)^a with a + b = n");
  scan->add_option("--n", f.n)->required();
  scan->add_option("--k", f.k)->required();
  scan->add_option("--json", f.json);

  auto* nk = app.add_subcommand("compute-nk", "N_k, or a CSV of N_k/k up to --k-max");
  nk->add_option("--k", f.k);
  nk->add_option("--k-max", f.k_max);
  nk->add_option("--json", f.json);
  nk->add_option("--csv", f.csv);

  auto* replay = app.add_subcommand("replay-proof", "re-run a proof log and confirm every verdict");
  replay->add_option("log", f.proof)->required()->check(CLI::ExistingFile);

  auto* resume = app.add_subcommand("resume", "continue from a checkpoint");
  resume->add_option("--resume", f.resume)->required()->check(CLI::ExistingFile);
  common(resume, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    Output out(f);
    if (g->parsed()) {
      mms::Driver d(out.options());
      if (t_opt->count() == 0) return out.finish(mms::make_result("compute-g", d.compute_g(f.n, f.k), out.options()));
      mms::ProofLog log;
      auto opts = out.options();
      auto res = mms::verify_g(f.n, f.k, f.t, d.gtable(), opts.search, &log);
      if (opts.on_log) opts.on_log(log);
      mms::RunResult r;
      r.kind = "verify-g";
      r.n = f.n;
      r.k = f.k;
      r.verdict = res.verdict;
      r.value = std::to_string(f.t);
      r.nodes = res.nodes;
      r.seconds = res.seconds;
      r.seed = f.seed;
      if (res.witness) {
        r.extra["witness"] = mms::describe_vector(res.witness->x);
        r.extra["witness_s"] = std::to_string(res.witness->s);
      }
      return out.finish(r);
    }
    if (fk->parsed()) {
      mms::Driver d(out.options());
      return out.finish(d.compute_f(f.k));
    }
    if (gs->parsed()) {
      mms::Driver d(out.options());
      return out.finish(mms::make_result("compute-gs", d.compute_g_strong(f.n, f.k), out.options()));
    }
    if (scan->parsed()) {
      const auto s = mms::scan_two_value(f.n, f.k);
      nlohmann::json j{{"schema", "mms-result/1"},   {"kind", "scan-two-value"}, {"n", f.n}, {"k", f.k},
                       {"t_min", std::to_string(s.t_min)}, {"a", s.a}, {"b", s.b},
                       {"example", mms::describe_vector(mms::two_value_vector(s.a, s.b))}};
      std::cout << j.dump(2) << "\n";
      if (!f.json.empty()) write_file(f.json, j.dump(2) + "\n");
      return 0;
    }
    if (nk->parsed()) {
      if (f.k < 1 && f.k_max < 1) throw CLI::ValidationError("compute-nk", "give --k or --k-max");
      nlohmann::json j{{"schema", "mms-result/1"}, {"kind", "compute-nk"}};
      if (f.k >= 1) {
        j["k"] = f.k;
        j["value"] = mms::compute_Nk(f.k).get_str();
      }
      if (f.k_max >= 1) {
        std::string csv = "k,N_k,ratio\n";
        nlohmann::json rows = nlohmann::json::array();
        for (int k = 2; k <= f.k_max; ++k) {
          const mpz_class v = mms::compute_Nk(k);
          const mpq_class q(v, k);
          char buf[64];
          std::snprintf(buf, sizeof buf, "%.6f", q.get_d());
          csv += std::to_string(k) + "," + v.get_str() + "," + buf + "\n";
          rows.push_back({{"k", k}, {"N_k", v.get_str()}});
        }
        j["rows"] = rows;
        if (!f.csv.empty()) write_file(f.csv, csv);
      }
      std::cout << j.dump(2) << "\n";
      if (!f.json.empty()) write_file(f.json, j.dump(2) + "\n");
      return 0;
    }
    if (replay->parsed()) {
      const auto segs = mms::replay_proof(read_file(f.proof));
      bool ok = !segs.empty();
      for (const auto& s : segs) {
        std::cout << (s.ok ? "OK   " : "FAIL ") << "n=" << s.n << " k=" << s.k << " t=" << s.t << " " << s.verdict;
        if (!s.detail.empty()) std::cout << "  (" << s.detail << ")";
        std::cout << "\n";
        ok = ok && s.ok;
      }
      return ok ? 0 : 1;
    }
    if (resume->parsed()) {
      auto cp = nlohmann::json::parse(read_file(f.resume));
      mms::Driver d(out.options());
      return out.finish(d.resume(cp));
    }
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
