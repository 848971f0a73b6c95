// Command-line front end. Emits CSV for curves and JSON for structured
// results; every file-producing command also writes <out>.manifest.json so a
// run can be reproduced byte for byte.
//
// Exit codes: 0 success, 1 usage or invalid input, 2 infeasible parameter
// targets, 3 I/O failure, 4 verification failure.
#include <clocale>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "weakwalk/params.hpp"
#include "weakwalk/pauli.hpp"
#include "weakwalk/protocol.hpp"
#include "weakwalk/survival.hpp"
#include "weakwalk/verify.hpp"
#include "weakwalk/version.hpp"
#include "weakwalk/walk.hpp"

namespace {

using ordered_json = nlohmann::ordered_json;
using namespace weakwalk;

enum ExitCode {
  kOk = 0,
  kUsage = 1,
  kInfeasible = 2,
  kIo = 3,
  kVerifyFailed = 4,
};

// --- logging ---------------------------------------------------------------

int log_level() {
  static const int level = [] {
    const char* env = std::getenv("WEAKWALK_LOG");
    if (env == nullptr) return 0;
    const std::string v = env;
    if (v == "debug") return 2;
    if (v == "info") return 1;
    return 0;
  }();
  return level;
}

void log_error(const std::string& msg) {
  std::cerr << "weakwalk: error: " << msg << "\n";
}
void log_info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "weakwalk: info: " << msg << "\n";
}
void log_debug(const std::string& msg) {
  if (log_level() >= 2) std::cerr << "weakwalk: debug: " << msg << "\n";
}

// --- deterministic formatting ----------------------------------------------

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  out.flush();
  if (!out) throw std::ios_base::failure("cannot write " + path);
}

// Every data file gets a sibling manifest naming the command, parameters,
// and outputs; re-running the manifest reproduces the files byte for byte.
void write_manifest(const std::string& primary_out, const std::string& command,
                    const ordered_json& parameters,
                    std::optional<std::uint64_t> seed,
                    const std::vector<std::string>& outputs) {
  ordered_json m;
  m["tool"] = "weakwalk";
  m["version"] = kVersion;
  m["command"] = command;
  m["parameters"] = parameters;
  if (seed) m["seed"] = *seed;
  else m["seed"] = nullptr;
  m["outputs"] = outputs;
  write_text_file(primary_out + ".manifest.json", m.dump(2) + "\n");
  log_info("wrote " + primary_out + ".manifest.json");
}

// --- subcommand payloads ----------------------------------------------------

struct SolveArgs {
  double gamma = 0.0;
  double eps = 0.0;
  double s0_min = 0.5;
  double slack = 0.9;
  std::string out;
};

int cmd_solve_params(const SolveArgs& a) {
  const SolvedParams sp =
      solve(ProtocolTargets{a.gamma, a.eps, a.s0_min, a.slack});
  ordered_json j;
  j["m"] = sp.m;
  j["theta"] = sp.theta;
  j["achieved_s0"] = sp.achieved_s0;
  j["achieved_s1"] = sp.achieved_s1;
  j["alpha"] = sp.alpha;
  j["beta"] = sp.beta;
  const std::string text = j.dump(2) + "\n";
  std::cout << text;
  if (!a.out.empty()) {
    write_text_file(a.out, text);
    write_manifest(a.out, "solve-params",
                   ordered_json{{"gamma", a.gamma},
                                {"eps", a.eps},
                                {"s0_min", a.s0_min},
                                {"slack", a.slack}},
                   std::nullopt, {a.out});
  }
  return kOk;
}

struct CurveArgs {
  int m = 0;
  double theta = 0.0;
  double eps = 0.0;
  std::string track = "exact";
  std::string out;
};

Track parse_track(const std::string& name) {
  if (name == "exact") return Track::exact;
  if (name == "gaussian") return Track::gaussian;
  if (name == "leading") return Track::leading_order;
  throw std::invalid_argument("unknown track: " + name);
}

int cmd_curve(const CurveArgs& a) {
  const SurvivalCurve c = survival_curve(a.m, a.theta, a.eps,
                                         parse_track(a.track));
  std::string csv = "round,overwrite_prob,log_survival,survival\n";
  for (int i = 0; i < c.m; ++i) {
    csv += std::to_string(i + 1) + "," + fmt(c.per_round_overwrite[i]) + "," +
           fmt(c.log_survival[i]) + "," + fmt(std::exp(c.log_survival[i])) +
           "\n";
  }
  write_text_file(a.out, csv);
  write_manifest(a.out, "curve",
                 ordered_json{{"m", a.m},
                              {"theta", a.theta},
                              {"eps", a.eps},
                              {"track", a.track}},
                 std::nullopt, {a.out});
  if (c.underflow) log_info("log-survival floor reached inside the curve");
  return kOk;
}

struct Figure1Args {
  int m_max = 40;
  std::string out;
};

int cmd_figure1(const Figure1Args& a) {
  const double gamma = 3.0;
  const double eps = 0.25;
  const double theta = derived_figure1_theta();
  log_info("figure1 theta = " + fmt(theta));

  const SurvivalCurve s0e = survival_curve(a.m_max, theta, 0.0, Track::exact);
  const SurvivalCurve s1e = survival_curve(a.m_max, theta, eps, Track::exact);
  const SurvivalCurve s0a =
      survival_curve(a.m_max, theta, 0.0, Track::gaussian);
  const SurvivalCurve s1a =
      survival_curve(a.m_max, theta, eps, Track::gaussian);

  std::string csv = "m,S0_exact,S1_exact,S0_approx,S1_approx\n";
  for (int i = 0; i < a.m_max; ++i) {
    csv += std::to_string(i + 1) + "," + fmt(std::exp(s0e.log_survival[i])) +
           "," + fmt(std::exp(s1e.log_survival[i])) + "," +
           fmt(std::exp(s0a.log_survival[i])) + "," +
           fmt(std::exp(s1a.log_survival[i])) + "\n";
  }
  write_text_file(a.out, csv);

  ordered_json side;
  side["gamma"] = gamma;
  side["eps_star"] = eps;
  side["theta"] = theta;
  side["theta_note"] =
      "root of S_exact(25, theta, 0.25) = 0.0475; see survival module";
  side["thresholds"] =
      ordered_json{{"accept_undriven", 0.5}, {"reject", std::exp(-gamma)}};
  const std::string side_path = a.out + ".json";
  write_text_file(side_path, side.dump(2) + "\n");

  write_manifest(a.out, "figure1",
                 ordered_json{{"m_max", a.m_max},
                              {"gamma", gamma},
                              {"eps_star", eps},
                              {"theta", theta}},
                 std::nullopt, {a.out, side_path});
  return kOk;
}

struct Figure2Args {
  int jobs = 1;
  std::string out;
};

int cmd_figure2(const Figure2Args& a) {
  const int m = 85;
  const double theta = 0.0277;
  std::vector<double> grid;
  for (int k = 0; k <= 50; ++k) grid.push_back(0.01 * k);

  // Independent grid points; --jobs only changes who computes which index,
  // never the output order.
  std::vector<double> exact(grid.size()), approx(grid.size());
  const int jobs = std::max(1, a.jobs);
  log_debug(std::to_string(grid.size()) + " grid points on " +
            std::to_string(jobs) + " workers");
  auto worker = [&](int offset) {
    for (size_t i = offset; i < grid.size(); i += jobs) {
      exact[i] = survival_curve(m, theta, grid[i], Track::exact).survival();
      approx[i] = std::exp(log_survival_leading_order(m, theta, grid[i]));
    }
  };
  if (jobs == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker, t);
    for (std::thread& t : pool) t.join();
  }

  std::string csv = "eps_star,S_exact,S_approx\n";
  for (size_t i = 0; i < grid.size(); ++i)
    csv += fmt(grid[i]) + "," + fmt(exact[i]) + "," + fmt(approx[i]) + "\n";
  write_text_file(a.out, csv);
  write_manifest(a.out, "figure2",
                 ordered_json{{"m", m},
                              {"theta", theta},
                              {"eps_star_step", 0.01},
                              {"jobs", a.jobs}},
                 std::nullopt, {a.out});
  return kOk;
}

struct ClassifyArgs {
  double theta = 0.0;
};

int cmd_classify_drive(const ClassifyArgs& a) {
  const DriveReport r = classify_drive(walk_channel(a.theta), 2);
  ordered_json j;
  j["theta"] = a.theta;
  j["class"] = to_string(r.cls);
  if (std::isnan(r.eta)) j["eta"] = nullptr;
  else j["eta"] = r.eta;
  std::cout << j.dump(2) + "\n";
  return kOk;
}

struct PauliDemoArgs {
  std::string spec_path;
  std::string hyp_path;
  double eps_p = 0.4;
  double inner_s0 = 0.99;
  double inner_s1 = 0.01;
  std::uint64_t sample = 0;
  std::uint64_t seed = 0;
  std::string out;
};

// The hypothesis table shares the channel-spec file shape but is a plain
// target list: it need not itself be a completely positive channel, so only
// its shape is checked here (the demo validates the values).
std::vector<double> load_hypothesis(const std::string& path, int n) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  const nlohmann::json doc = nlohmann::json::parse(in);
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("eigenvalues"))
    throw std::invalid_argument(path +
                                ": expected {\"n\", \"eigenvalues\"} object");
  if (doc.at("n").get<int>() != n)
    throw std::invalid_argument(path + ": hypothesis n does not match spec");
  return doc.at("eigenvalues").get<std::vector<double>>();
}

int cmd_pauli_demo(const PauliDemoArgs& a) {
  const PauliChannelSpec truth = load_pauli_spec(a.spec_path);
  const std::vector<double> hypothesized =
      a.hyp_path.empty() ? truth.eigenvalues
                         : load_hypothesis(a.hyp_path, truth.n);

  PauliTestConfig cfg;
  cfg.eps_p = a.eps_p;
  const DemoResult r = run_estimation_demo(truth, hypothesized, cfg,
                                           {a.inner_s0, a.inner_s1});

  ordered_json j;
  j["n"] = truth.n;
  j["eps_p"] = a.eps_p;
  j["inner"] = ordered_json{{"m", r.inner.m},
                            {"theta", r.inner.theta},
                            {"achieved_s0", r.inner.achieved_s0},
                            {"achieved_s1", r.inner.achieved_s1}};
  ordered_json per_test = ordered_json::array();
  for (size_t i = 0; i < r.per_test_eps_star.size(); ++i) {
    per_test.push_back(
        ordered_json{{"t", i + 1},
                     {"eps_star", r.per_test_eps_star[i]},
                     {"s2", r.recorder.per_test_f[i]}});
  }
  j["per_test"] = per_test;
  j["m3_overwrite"] = r.recorder.overwrite_estimate;
  j["m3_survival"] = r.recorder.survival_m3;
  j["hypothesis"] = static_cast<int>(r.verdict);
  j["verdict"] = to_string(r.verdict);

  // Optional measurement step: Bernoulli draws of the M3 overwrite outcome.
  if (a.sample > 0) {
    std::mt19937_64 rng(a.seed);
    const double p = r.recorder.overwrite_estimate;
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < a.sample; ++i) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      if (u < p) ++hits;
    }
    const double rate =
        static_cast<double>(hits) / static_cast<double>(a.sample);
    j["sample"] = ordered_json{{"count", a.sample},
                               {"seed", a.seed},
                               {"overwrite_hits", hits},
                               {"overwrite_rate", rate},
                               {"verdict", to_string(decide(rate))}};
  }

  const std::string text = j.dump(2) + "\n";
  std::cout << text;
  if (!a.out.empty()) {
    write_text_file(a.out, text);
    write_manifest(
        a.out, "pauli-demo",
        ordered_json{{"spec", a.spec_path},
                     {"hyp", a.hyp_path.empty() ? a.spec_path : a.hyp_path},
                     {"eps_p", a.eps_p},
                     {"inner_s0", a.inner_s0},
                     {"inner_s1", a.inner_s1},
                     {"sample", a.sample}},
        a.sample > 0 ? std::optional<std::uint64_t>(a.seed) : std::nullopt,
        {a.out});
  }
  return kOk;
}

int cmd_verify() {
  const std::vector<CheckResult> results = run_invariant_suite();
  std::string first_failure;
  for (const CheckResult& r : results) {
    std::printf("%-4s %-34s %s\n", r.ok ? "ok" : "FAIL", r.name.c_str(),
                r.detail.c_str());
    if (!r.ok && first_failure.empty()) first_failure = r.name;
  }
  if (!first_failure.empty()) {
    log_error("first failing invariant: " + first_failure);
    return kVerifyFailed;
  }
  return kOk;
}

// Pre-checks a file opens for reading so a missing input is an I/O error
// (exit 3) rather than a parse error.
void require_readable(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open " + path);
}

}  // namespace

int main(int argc, char** argv) {
  std::setlocale(LC_ALL, "C");

  CLI::App app{"Weakly driven walk survival toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  SolveArgs solve_args;
  CLI::App* solve_cmd = app.add_subcommand(
      "solve-params", "Solve (m, theta) for survival targets");
  solve_cmd->add_option("--gamma", solve_args.gamma,
                        "Driven survival budget exp(-gamma)")
      ->required();
  solve_cmd->add_option("--eps", solve_args.eps, "Drive strength to certify")
      ->required();
  solve_cmd->add_option("--s0-min", solve_args.s0_min,
                        "Undriven survival floor")->capture_default_str();
  solve_cmd->add_option("--slack", solve_args.slack,
                        "Safety factor on the m*theta lock")->capture_default_str();
  solve_cmd->add_option("--out", solve_args.out, "Write the JSON result here");

  CurveArgs curve_args;
  CLI::App* curve_cmd =
      app.add_subcommand("curve", "Per-round survival curve CSV");
  curve_cmd->add_option("--m", curve_args.m, "Rounds")->required();
  curve_cmd->add_option("--theta", curve_args.theta, "Step angle (radians)")
      ->required();
  curve_cmd->add_option("--eps", curve_args.eps, "Drive strength")->capture_default_str();
  curve_cmd
      ->add_option("--track", curve_args.track,
                   "exact | gaussian | leading")->capture_default_str()
      ->check(CLI::IsMember({"exact", "gaussian", "leading"}));
  curve_cmd->add_option("--out", curve_args.out, "CSV path")->required();

  Figure1Args fig1_args;
  CLI::App* fig1_cmd = app.add_subcommand(
      "figure1", "Survival vs rounds at gamma=3, eps=0.25 (CSV + sidecar)");
  fig1_cmd->add_option("--m-max", fig1_args.m_max, "Largest round count")->capture_default_str();
  fig1_cmd->add_option("--out", fig1_args.out, "CSV path")->required();

  Figure2Args fig2_args;
  CLI::App* fig2_cmd = app.add_subcommand(
      "figure2", "Survival vs drive strength at m=85, theta=0.0277");
  fig2_cmd->add_option("--jobs", fig2_args.jobs, "Worker threads")->capture_default_str();
  fig2_cmd->add_option("--out", fig2_args.out, "CSV path")->required();

  ClassifyArgs classify_args;
  CLI::App* classify_cmd = app.add_subcommand(
      "classify-drive", "Classify the walk step as weak/strong drive");
  classify_cmd
      ->add_option("--theta", classify_args.theta, "Step angle (radians)")
      ->required();

  PauliDemoArgs demo_args;
  CLI::App* demo_cmd = app.add_subcommand(
      "pauli-demo", "End-to-end eigenvalue deviation test");
  demo_cmd->add_option("--spec", demo_args.spec_path,
                       "True channel spec JSON")
      ->required();
  demo_cmd->add_option("--hyp", demo_args.hyp_path,
                       "Hypothesized eigenvalues JSON (default: --spec)");
  demo_cmd->add_option("--eps-p", demo_args.eps_p,
                       "Deviation detection threshold")->capture_default_str();
  demo_cmd->add_option("--inner-s0", demo_args.inner_s0,
                       "Inner undriven survival target")->capture_default_str();
  demo_cmd->add_option("--inner-s1", demo_args.inner_s1,
                       "Inner driven survival target")->capture_default_str();
  demo_cmd->add_option("--sample", demo_args.sample,
                       "Bernoulli draws of the M3 outcome (0 = exact)")->capture_default_str();
  demo_cmd->add_option("--seed", demo_args.seed, "Sampler seed")->capture_default_str();
  demo_cmd->add_option("--out", demo_args.out, "Write the JSON result here");

  CLI::App* verify_cmd = app.add_subcommand(
      "verify", "Run the cross-track invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve_params(solve_args);
    if (curve_cmd->parsed()) return cmd_curve(curve_args);
    if (fig1_cmd->parsed()) return cmd_figure1(fig1_args);
    if (fig2_cmd->parsed()) return cmd_figure2(fig2_args);
    if (classify_cmd->parsed()) return cmd_classify_drive(classify_args);
    if (demo_cmd->parsed()) {
      require_readable(demo_args.spec_path);
      if (!demo_args.hyp_path.empty()) require_readable(demo_args.hyp_path);
      return cmd_pauli_demo(demo_args);
    }
    if (verify_cmd->parsed()) return cmd_verify();
  } catch (const InfeasibleTargetsError& e) {
    log_error(std::string(e.what()) + " (failed: " + e.constraint + ")");
    return kInfeasible;
  } catch (const nlohmann::json::exception& e) {
    log_error(std::string("malformed JSON: ") + e.what());
    return kUsage;
  } catch (const std::ios_base::failure& e) {
    log_error(e.what());
    return kIo;
  } catch (const std::invalid_argument& e) {
    log_error(e.what());
    return kUsage;
  } catch (const std::exception& e) {
    log_error(e.what());
    return kIo;
  }
  return kUsage;
}
