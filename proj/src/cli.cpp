#include "fppvar/cli.hpp"

#include <cmath>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fppvar/cube_averaging.hpp"
#include "fppvar/edgedist.hpp"
#include "fppvar/experiments.hpp"
#include "fppvar/fpp.hpp"
#include "fppvar/phifunc.hpp"
#include "fppvar/poincare.hpp"

namespace fppvar {

namespace {

using Json = nlohmann::ordered_json;

Json num(double x)
{
  return std::isfinite(x) ? Json(x) : Json(nullptr);
}

Json to_json(const NearGammaReport& r)
{
  Json j;
  j["distribution"] = r.distribution;
  j["direct_checked"] = r.direct_checked;
  j["grid_size"] = r.grid_size;
  j["direct_A_hat"] = num(r.direct_A_hat);
  j["direct_A_hat_refined"] = num(r.direct_A_hat_refined);
  j["direct_epsilon_hat"] = num(r.direct_epsilon_hat);
  j["direct_pass_a"] = r.direct_pass_a;
  j["direct_pass_b"] = r.direct_pass_b;
  j["direct_pass"] = r.direct_pass;
  j["direct_is_evidence_not_proof"] = true;
  j["sufficient_checked"] = r.sufficient_checked;
  j["sufficient_alpha_ok"] = r.sufficient_alpha_ok;
  j["sufficient_beta_or_tail_ok"] = r.sufficient_beta_or_tail_ok;
  j["left_band"] = {num(r.left_band_lo), num(r.left_band_hi)};
  j["right_band"] = {num(r.right_band_lo), num(r.right_band_hi)};
  j["verdict"] = to_string(r.verdict);
  return j;
}

Json to_json(const InequalityReport& r)
{
  Json j;
  j["function"] = r.function;
  j["method"] = r.method;
  j["lhs_variance"] = num(r.lhs_variance);
  j["discrete_term"] = num(r.discrete_term);
  Json terms = Json::array();
  for (const auto& t : r.continuous_terms)
    terms.push_back({{"index", t.index},
                     {"l1", num(t.l1)},
                     {"l2sq", num(t.l2sq)},
                     {"ratio", num(t.ratio)},
                     {"phi_of_ratio", num(t.phi_of_ratio)},
                     {"contribution", num(t.contribution)}});
  j["continuous_terms"] = terms;
  j["rhs_total"] = num(r.rhs_total);
  j["classical_rhs"] = num(r.classical_rhs);
  j["margin"] = num(r.margin);
  j["tolerance"] = num(r.tolerance);
  j["holds"] = r.holds;
  j["lhs_error"] = num(r.lhs_error);
  j["rhs_error"] = num(r.rhs_error);
  j["samples"] = r.samples;
  j["seed"] = r.seed;
  return j;
}

Json to_json(const AveragingReport& r)
{
  Json j;
  j["m"] = r.m;
  j["bijection"] = r.bijection;
  j["max_rank_shift"] = r.max_rank_shift;
  j["rank_shift_bound"] = r.rank_shift_bound;
  j["monotone"] = r.monotone;
  j["max_value_jump"] = r.max_value_jump;
  j["gradient_ok"] = r.gradient_ok;
  j["level_probabilities"] = r.level_probabilities;
  j["max_level_prob"] = r.max_level_prob;
  j["c1_value"] = r.c1;
  j["level_bound"] = r.level_bound;
  j["level_ok"] = r.level_ok;
  j["ok"] = r.ok;
  return j;
}

std::vector<std::uint8_t> parse_bitstring(const std::string& s)
{
  std::vector<std::uint8_t> x;
  for (char c : s) {
    if (c != '0' && c != '1')
      throw std::invalid_argument("bitstring may contain only 0 and 1");
    x.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return x;
}

// Writes to --out when given, standard output otherwise.
void emit(const std::string& text, const std::string& path, std::ostream& out)
{
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file)
    throw std::runtime_error("cannot open output file '" + path + "'");
  file << text;
}

CLI::App* leaf_subcommand(CLI::App& app)
{
  CLI::App* cur = &app;
  for (;;) {
    const auto subs = cur->get_subcommands();
    if (subs.empty())
      return cur;
    cur = subs.front();
  }
}

bool known_anywhere(const CLI::App& app, const std::string& flag)
{
  if (app.get_option_no_throw(flag) != nullptr)
    return true;
  for (const auto* sub : app.get_subcommands([](const CLI::App*) { return true; }))
    if (known_anywhere(*sub, flag))
      return true;
  return false;
}

// Splits --config out of argv. Returns the remaining arguments.
std::vector<std::string> extract_config(int argc, const char* const* argv, std::string& config)
{
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--config") {
      if (i + 1 >= argc)
        throw CLI::ArgumentMismatch("--config requires a file name");
      config = argv[++i];
    } else if (a.rfind("--config=", 0) == 0) {
      config = a.substr(9);
    } else {
      args.push_back(a);
    }
  }
  return args;
}

struct Options
{
  double u = 0.0;
  std::string dist = "exp:rate=1";
  double y = 1.0;
  std::size_t grid = 1000;
  std::string function = "linear-1d";
  std::string mode = "quad";
  std::size_t samples = 0;
  std::uint64_t seed = 1;
  unsigned workers = 0;
  int m = 2;
  bool verify = false;
  std::string eval;
  int d = 2;
  int n = 32;
  int pad = -1;
  std::size_t edge = 0;
  double ymax = 10.0;
  int points = 101;
  std::vector<int> ns{8, 16, 32, 64};
  std::string out;
};

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
  CLI::App app{"Numerical companion for sublinear variance in first passage percolation", "fppvar"};
  app.require_subcommand(1);
  Options o;

  auto* phi_cmd = app.add_subcommand("phi", "phi(u) = 2 int_0^1 u^{2t}/(1+t)^2 dt");
  phi_cmd->add_option("--u", o.u, "argument in [0,1]")->required();

  auto* psi_cmd = app.add_subcommand("psi", "change-of-variable factor psi(y) for an edge law");
  psi_cmd->add_option("--dist", o.dist, "distribution spec")->required();
  psi_cmd->add_option("--y", o.y, "point in the open support")->required();

  auto* ng_cmd = app.add_subcommand("check-neargamma", "nearly-gamma classification as JSON");
  ng_cmd->add_option("--dist", o.dist, "distribution spec")->required();
  ng_cmd->add_option("--grid", o.grid, "quantile grid size (>= 100)");

  auto* vp_cmd = app.add_subcommand("verify-poincare", "modified Poincare inequality as JSON");
  vp_cmd->add_option("--function", o.function, "registry id");
  vp_cmd->add_option("--mode", o.mode, "quad or mc")->check(CLI::IsMember({"quad", "mc"}));
  vp_cmd->add_option("--samples", o.samples, "Monte Carlo samples (default 100000)");
  vp_cmd->add_option("--seed", o.seed, "64-bit seed");
  vp_cmd->add_option("--workers", o.workers, "threads, 0 = all");

  auto* avg_cmd = app.add_subcommand("averaging", "averaging function g_m");
  avg_cmd->add_option("--m", o.m, "m >= 1")->required();
  auto* verify_flag = avg_cmd->add_flag("--verify", o.verify, "exhaustive verification (m <= 4)");
  auto* eval_opt = avg_cmd->add_option("--eval", o.eval, "bitstring of length m^2");
  verify_flag->excludes(eval_opt);
  avg_cmd->callback([&] {
    if (!o.verify && o.eval.empty())
      throw CLI::RequiredError("averaging needs --verify or --eval");
  });

  auto* fpp_cmd = app.add_subcommand("fpp", "first passage percolation");
  fpp_cmd->require_subcommand(1);
  auto add_field_options = [&](CLI::App* c) {
    c->add_option("--d", o.d, "dimension >= 2");
    c->add_option("--n", o.n, "target n e_1");
    c->add_option("--dist", o.dist, "distribution spec");
    c->add_option("--seed", o.seed, "64-bit seed");
    c->add_option("--pad", o.pad, "box padding (default max(ceil(n/2), 16))");
  };
  auto* run_cmd = fpp_cmd->add_subcommand("run", "one passage time as JSON");
  add_field_options(run_cmd);
  auto* resp_cmd = fpp_cmd->add_subcommand("response", "single-edge response curve as CSV");
  add_field_options(resp_cmd);
  resp_cmd->add_option("--edge", o.edge, "edge index")->required();
  resp_cmd->add_option("--ymax", o.ymax, "largest weight on the grid");
  resp_cmd->add_option("--points", o.points, "grid points (>= 2)");
  resp_cmd->add_option("--out", o.out, "output file (default stdout)");
  auto* sweep_cmd = fpp_cmd->add_subcommand("sweep", "variance scaling sweep as CSV");
  sweep_cmd->add_option("--dist", o.dist, "distribution spec");
  sweep_cmd->add_option("--d", o.d, "dimension >= 2");
  sweep_cmd->add_option("--ns", o.ns, "comma-separated increasing n")->delimiter(',');
  sweep_cmd->add_option("--samples", o.samples, "fields per n (default 2000)");
  sweep_cmd->add_option("--seed", o.seed, "64-bit seed");
  sweep_cmd->add_option("--workers", o.workers, "threads, 0 = all");
  sweep_cmd->add_option("--out", o.out, "output file (default stdout)");

  std::vector<std::string> args;
  try {
    std::string config;
    args = extract_config(argc, argv, config);
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);

    if (!config.empty()) {
      std::ifstream file(config);
      if (!file)
        throw CLI::FileError::Missing(config);
      CLI::App* leaf = leaf_subcommand(app);
      for (const auto& item : CLI::ConfigINI().from_config(file)) {
        const std::string flag = "--" + item.name;
        if (!known_anywhere(app, flag))
          throw CLI::ConfigError("unknown config key '" + item.name + "'");
        const CLI::Option* opt = leaf->get_option_no_throw(flag);
        if (opt == nullptr || opt->count() > 0)
          continue;
        std::string value;
        for (std::size_t i = 0; i < item.inputs.size(); ++i)
          value += (i ? "," : "") + item.inputs[i];
        args.push_back(flag + "=" + value);
      }
      app.clear();
      o = Options{};
      std::vector<std::string> again(args.rbegin(), args.rend());
      app.parse(again);
    }
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    if (phi_cmd->parsed()) {
      Json j;
      j["u"] = o.u;
      j["phi"] = num(phi(o.u));
      out << j.dump() << "\n";
      return 0;
    }
    if (psi_cmd->parsed()) {
      const auto dist = EdgeDistribution::parse(o.dist);
      Json j;
      j["distribution"] = dist.spec();
      j["y"] = o.y;
      j["psi"] = num(psi(dist, o.y));
      out << j.dump() << "\n";
      return 0;
    }
    if (ng_cmd->parsed()) {
      const auto report = classify_near_gamma(EdgeDistribution::parse(o.dist), o.grid);
      out << to_json(report).dump(2) << "\n";
      return 0;
    }
    if (vp_cmd->parsed()) {
      const TestFunction& f = find_test_function(o.function);
      InequalityReport report;
      if (o.mode == "quad") {
        report = verify_modified_poincare(f);
      } else {
        McOptions mc;
        mc.samples = o.samples == 0 ? 100000 : o.samples;
        mc.seed = o.seed;
        mc.workers = o.workers;
        report = verify_modified_poincare(f, mc);
      }
      out << to_json(report).dump(2) << "\n";
      return report.holds ? 0 : 1;
    }
    if (avg_cmd->parsed()) {
      if (o.verify) {
        const auto report = verify_averaging_properties(o.m);
        out << to_json(report).dump(2) << "\n";
        return report.ok ? 0 : 1;
      }
      const AveragingFunction g(o.m);
      const auto x = parse_bitstring(o.eval);
      Json j;
      j["m"] = o.m;
      j["k"] = g.k().str();
      j["rank"] = g.rank(x).str();
      j["value"] = g.value(x);
      out << j.dump() << "\n";
      return 0;
    }

    const auto dist = EdgeDistribution::parse(o.dist);
    if (sweep_cmd->parsed()) {
      const auto result = sweep(dist, o.d, o.ns, o.samples == 0 ? 2000 : o.samples, o.seed, o.workers);
      emit(to_csv(result), o.out, out);
      return 0;
    }

    const int pad = o.pad < 0 ? default_padding(o.n) : o.pad;
    auto grid = std::make_shared<const GridSpec>(GridSpec::for_target(o.d, o.n, pad));
    const WeightField field = WeightField::sample(grid, dist, o.seed);
    std::vector<int> origin(o.d, 0), target(o.d, 0);
    target[0] = o.n;

    if (run_cmd->parsed()) {
      const PassageResult r = passage_time(field, origin, target);
      Json j;
      j["distance"] = num(r.distance);
      j["geodesic_edges"] = r.geodesic_edges;
      j["source"] = grid->coordinates(r.source);
      j["target"] = grid->coordinates(r.target);
      j["tie"] = r.tie;
      j["distribution"] = dist.spec();
      j["seed"] = o.seed;
      j["d"] = o.d;
      j["n"] = o.n;
      j["pad"] = pad;
      out << j.dump() << "\n";
      return 0;
    }
    if (resp_cmd->parsed()) {
      if (o.points < 2 || !(o.ymax > 0.0))
        throw std::invalid_argument("response grid needs --points >= 2 and --ymax > 0");
      std::vector<double> ys(o.points);
      for (int i = 0; i < o.points; ++i)
        ys[i] = o.ymax * i / (o.points - 1);
      const EdgeResponse r = single_edge_response(field, target, o.edge, ys);
      std::ostringstream csv;
      csv.precision(17);
      csv << "y,distance\n";
      for (std::size_t i = 0; i < r.y.size(); ++i)
        csv << r.y[i] << ',' << r.distance[i] << '\n';
      emit(csv.str(), o.out, out);
      return 0;
    }
  } catch (const std::logic_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << app.help();
  return 2;
}

} // namespace fppvar
