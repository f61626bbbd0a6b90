// descentlab command-line front end. Talks to the library only through the
// C interface in descentlab.h.
//
// Exit codes: 0 success, 1 usage/domain error, 2 numeric failure (or a failed
// check), 3 size limit.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "descentlab.h"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitNumeric = 2;

struct RunConfig {
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
  double rel_tol = 1e-12;
  std::string out_path;
  std::string format = "csv";
};

// Carries a dl_status out of a subcommand.
struct Failure {
  int code;
  std::string message;
};

void check(dl_status status) {
  if (status != DL_OK) throw Failure{status == DL_ERR_INTERNAL ? kExitNumeric : static_cast<int>(status), dl_last_error()};
}

std::string num(double v) {
  if (std::isnan(v) || std::isinf(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return num(v);
}

// Minimal ordered JSON object writer.
class JsonObject {
 public:
  JsonObject& field(const std::string& key, const std::string& raw_value) {
    body_ += (body_.empty() ? "" : ",") + quote(key) + ":" + raw_value;
    return *this;
  }
  JsonObject& number(const std::string& key, double v) { return field(key, num(v)); }
  JsonObject& integer(const std::string& key, long long v) { return field(key, std::to_string(v)); }
  JsonObject& text(const std::string& key, const std::string& v) { return field(key, quote(v)); }
  JsonObject& boolean(const std::string& key, bool v) { return field(key, v ? "true" : "false"); }
  std::string str() const { return "{" + body_ + "}"; }

  static std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
    return out + "\"";
  }

 private:
  std::string body_;
};

std::string matrix(const double m[2][2]) {
  return "[[" + num(m[0][0]) + "," + num(m[0][1]) + "],[" + num(m[1][0]) + "," + num(m[1][1]) + "]]";
}

dl_quadrant parse_quadrant(const std::string& q) {
  if (q == "pp") return DL_PP;
  if (q == "mm") return DL_MM;
  if (q == "mp") return DL_MP;
  if (q == "pm") return DL_PM;
  throw Failure{kExitUsage, "unknown quadrant '" + q + "'"};
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, sep);) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::uint64_t require_seed(const RunConfig& config) {
  if (!config.seed) throw Failure{kExitUsage, "this command is randomized and requires --seed"};
  return *config.seed;
}

// ---- subcommands -----------------------------------------------------------

std::string run_pmf(const RunConfig& config, int n) {
  dl_pmf* pmf = nullptr;
  check(dl_pmf_create(n, config.threads, &pmf));
  std::unique_ptr<dl_pmf, decltype(&dl_pmf_destroy)> guard(pmf, &dl_pmf_destroy);
  if (config.format == "json") {
    std::string out = "[";
    for (int d = 0; d < n; ++d) {
      for (int e = 0; e < n; ++e) {
        double p = 0;
        check(dl_pmf_prob(pmf, d, e, &p));
        out += (d + e == 0 ? "" : ",") +
               JsonObject().integer("n", n).integer("d", d).integer("dprime", e).number("prob", p).str();
      }
    }
    return out + "]\n";
  }
  std::size_t needed = 0;
  check(dl_pmf_csv(pmf, nullptr, 0, &needed));
  std::string text(needed, '\0');
  check(dl_pmf_csv(pmf, text.data(), text.size(), &needed));
  text.resize(needed - 1);
  return text;
}

std::string run_simulate(const RunConfig& config, int n, long reps) {
  const std::uint64_t seed = require_seed(config);
  if (reps < 1) throw Failure{kExitUsage, "--reps must be positive"};
  std::string out = config.format == "json" ? "[" : "replica,n,d,dprime\n";
  for (long i = 0; i < reps; ++i) {
    dl_rng* rng = nullptr;
    check(dl_rng_create_replica(seed, static_cast<std::uint64_t>(i), &rng));
    std::unique_ptr<dl_rng, decltype(&dl_rng_destroy)> guard(rng, &dl_rng_destroy);
    int d = 0;
    int e = 0;
    check(dl_sample_final(n, rng, &d, &e));
    if (config.format == "json") {
      out += (i ? "," : "") +
             JsonObject().integer("replica", i).integer("n", n).integer("d", d).integer("dprime", e).str();
    } else {
      out += std::to_string(i) + "," + std::to_string(n) + "," + std::to_string(d) + "," + std::to_string(e) + "\n";
    }
  }
  if (config.format == "json") out += "]\n";
  return out;
}

struct TailsArgs {
  std::string ns;
  double x = 0;
  double y = 0;
  std::string quadrant = "pp";
  std::string method = "exact,sldp";
  long mc_reps = 10000;
};

std::string run_tails(const RunConfig& config, const TailsArgs& args) {
  const dl_quadrant q = parse_quadrant(args.quadrant);
  bool want_exact = false;
  bool want_sldp = false;
  bool want_mc = false;
  for (const std::string& m : split(args.method, ',')) {
    if (m == "exact") want_exact = true;
    else if (m == "sldp") want_sldp = true;
    else if (m == "mc") want_mc = true;
    else throw Failure{kExitUsage, "unknown tails method '" + m + "'"};
  }
  std::uint64_t seed = 0;
  if (want_mc) seed = require_seed(config);

  std::vector<int> ns;
  for (const std::string& item : split(args.ns, ',')) {
    try {
      ns.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw Failure{kExitUsage, "invalid --n value '" + item + "'"};
    }
  }
  if (ns.empty()) throw Failure{kExitUsage, "--n is required"};

  std::string out = config.format == "json" ? "[" : "n,x,y,quadrant,exact,sldp,mc,mc_stderr,ratio_exact_sldp\n";
  bool first = true;
  for (int n : ns) {
    std::optional<double> exact;
    std::optional<double> sldp;
    std::optional<double> mc;
    std::optional<double> mc_se;
    if (want_exact) {
      dl_pmf* pmf = nullptr;
      check(dl_pmf_create(n, config.threads, &pmf));
      std::unique_ptr<dl_pmf, decltype(&dl_pmf_destroy)> guard(pmf, &dl_pmf_destroy);
      double v = 0;
      check(dl_pmf_quadrant_tail(pmf, args.x, args.y, q, &v));
      exact = v;
    }
    if (want_sldp) {
      dl_sldp_estimate e{};
      check(dl_sldp_joint(n, args.x, args.y, q, &e));
      sldp = e.estimate;
    }
    if (want_mc) {
      double v = 0;
      double se = 0;
      check(dl_tail_mc(n, args.x, args.y, q, args.mc_reps, seed, config.threads, &v, &se));
      mc = v;
      mc_se = se;
    }
    std::optional<double> ratio;
    if (exact && sldp) ratio = *exact / *sldp;
    if (config.format == "json") {
      JsonObject o;
      o.integer("n", n).number("x", args.x).number("y", args.y).text("quadrant", args.quadrant);
      auto opt = [&](const char* key, const std::optional<double>& v) {
        o.field(key, v ? num(*v) : "null");
      };
      opt("exact", exact);
      opt("sldp", sldp);
      opt("mc", mc);
      opt("mc_stderr", mc_se);
      opt("ratio_exact_sldp", ratio);
      out += (first ? "" : ",") + o.str();
    } else {
      auto cell = [](const std::optional<double>& v) { return v ? csv_num(*v) : std::string(); };
      out += std::to_string(n) + "," + csv_num(args.x) + "," + csv_num(args.y) + "," + args.quadrant + "," +
             cell(exact) + "," + cell(sldp) + "," + cell(mc) + "," + cell(mc_se) + "," + cell(ratio) + "\n";
    }
    first = false;
  }
  if (config.format == "json") out += "]\n";
  return out;
}

std::string run_rate(const RunConfig& config, std::optional<double> x, const std::string& curve) {
  if (x.has_value() == !curve.empty()) throw Failure{kExitUsage, "rate: give exactly one of --x or --curve"};
  if (x) {
    dl_tilt t{};
    if (*x == 0.0 || *x == 1.0) {
      double r = 0;
      check(dl_rate(*x, &r));
      return JsonObject().number("x", *x).field("t_x", "null").number("rate", r).field("sigma2", "null").str() + "\n";
    }
    check(dl_solve_tilt(*x, config.rel_tol, &t));
    return JsonObject().number("x", t.x).number("t_x", t.t_x).number("rate", t.rate).number("sigma2", t.sigma2).str() +
           "\n";
  }
  const std::vector<std::string> parts = split(curve, ':');
  if (parts.size() != 3) throw Failure{kExitUsage, "--curve expects a:b:step"};
  double a = 0;
  double b = 0;
  double h = 0;
  try {
    a = std::stod(parts[0]);
    b = std::stod(parts[1]);
    h = std::stod(parts[2]);
  } catch (const std::exception&) {
    throw Failure{kExitUsage, "--curve expects numeric a:b:step"};
  }
  if (!(h > 0) || !(b >= a)) throw Failure{kExitUsage, "--curve needs step > 0 and b >= a"};
  std::string out = "x,t_x,rate,sigma2\n";
  const auto count = static_cast<long>(std::floor((b - a) / h + 1e-9));
  for (long i = 0; i <= count; ++i) {
    const double xi = a + static_cast<double>(i) * h;
    dl_tilt t{};
    check(dl_solve_tilt(xi, config.rel_tol, &t));
    out += csv_num(t.x) + "," + csv_num(t.t_x) + "," + csv_num(t.rate) + "," + csv_num(t.sigma2) + "\n";
  }
  return out;
}

std::string run_laplace(const RunConfig& config, int n, double t, double s, const std::string& method) {
  dl_laplace_method m;
  if (method == "closed") m = DL_LAPLACE_CLOSED;
  else if (method == "exact") m = DL_LAPLACE_EXACT;
  else if (method == "axis") m = DL_LAPLACE_AXIS;
  else throw Failure{kExitUsage, "unknown laplace method '" + method + "'"};
  double value = 0;
  double log_value = 0;
  check(dl_laplace(n, t, s, m, config.rel_tol, config.threads, &value, &log_value));
  return JsonObject()
             .integer("n", n)
             .number("t", t)
             .number("s", s)
             .text("method", method)
             .number("value", value)
             .number("log_value", log_value)
             .str() +
         "\n";
}

struct LimitArgs {
  std::string check;
  int n = 2048;
  long reps = 20000;
  double s = 0.5;
  double t = 1.0;
};

std::string run_limit(const RunConfig& config, const LimitArgs& args, int& exit_code) {
  const std::uint64_t seed = require_seed(config);
  JsonObject o;
  o.text("check", args.check);
  auto within = [](double est, double target, double se) { return std::abs(est - target) <= 5 * se; };
  bool pass = true;
  if (args.check == "clt" || args.check == "fclt") {
    dl_cov_estimate c{};
    double target_diag = 1.0 / 12;
    if (args.check == "clt") {
      check(dl_clt_covariance(args.n, args.reps, seed, config.threads, &c));
    } else {
      check(dl_fclt_cross_cov(args.n, args.s, args.t, args.reps, seed, config.threads, &c));
      target_diag = args.s / (12 * args.t * args.t);
    }
    const double target[2][2] = {{target_diag, 0}, {0, target_diag}};
    double z[2][2];
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        z[i][j] = (c.entries[i][j] - target[i][j]) / c.std_error[i][j];
        pass = pass && within(c.entries[i][j], target[i][j], c.std_error[i][j]);
      }
    }
    o.integer("n", args.n).integer("reps", args.reps).field("seed", std::to_string(seed));
    if (args.check == "fclt") o.number("s", args.s).number("t", args.t);
    o.field("estimate", matrix(c.entries))
        .field("std_error", matrix(c.std_error))
        .field("target", matrix(target))
        .field("z", matrix(z))
        .boolean("pass", pass);
  } else if (args.check == "sumclt") {
    double v = 0;
    double se = 0;
    check(dl_sum_clt(args.n, args.reps, seed, config.threads, &v, &se));
    pass = within(v, 1.0 / 6, se);
    o.integer("n", args.n)
        .integer("reps", args.reps)
        .field("seed", std::to_string(seed))
        .number("estimate", v)
        .number("std_error", se)
        .number("target", 1.0 / 6)
        .number("z", (v - 1.0 / 6) / se)
        .boolean("pass", pass);
  } else if (args.check == "qsl" || args.check == "lil") {
    dl_path_stat p{};
    check(dl_path_statistics(args.n, seed, &p));
    o.integer("n", p.n_final).field("seed", std::to_string(seed));
    if (args.check == "qsl") {
      pass = p.qsl_value >= 0.10 && p.qsl_value <= 0.24;
      o.number("value", p.qsl_value)
          .number("target", 1.0 / 6)
          .field("band", "[" + num(0.10) + "," + num(0.24) + "]")
          .boolean("pass", pass);
    } else {
      o.number("value", p.lil_value).number("reference", 1.0 / 6).boolean("report_only", true);
    }
  } else {
    throw Failure{kExitUsage, "unknown limit check '" + args.check + "' (clt|fclt|qsl|lil|sumclt)"};
  }
  exit_code = pass ? 0 : kExitNumeric;
  return o.str() + "\n";
}

struct ValidateSink {
  std::string table;
};

void collect_check(void* ctx, const char* name, double value, double threshold, int passed) {
  auto* sink = static_cast<ValidateSink*>(ctx);
  char line[512];
  std::snprintf(line, sizeof line, "%-5s %-24s %-24s %s\n", passed ? "PASS" : "FAIL", csv_num(value).c_str(),
                std::isinf(threshold) ? "report" : csv_num(threshold).c_str(), name);
  sink->table += line;
}

std::string run_validate(const RunConfig& config, const std::string& suite, int max_n, int& exit_code) {
  ValidateSink sink;
  sink.table = "status value                    threshold                check\n";
  int all_passed = 0;
  check(dl_validate(suite.c_str(), max_n, config.threads, &collect_check, &sink, &all_passed));
  exit_code = all_passed ? 0 : kExitNumeric;
  return sink.table;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"descentlab: descents and inverse descents of random permutations"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig config;
  if (const char* env = std::getenv("DESCENTLAB_THREADS")) {
    try {
      config.threads = static_cast<unsigned>(std::max(0L, std::stol(env)));
    } catch (const std::exception&) {
    }
  }
  std::uint64_t seed_value = 0;
  auto* seed_opt = app.add_option("--seed", seed_value, "64-bit seed (required by randomized commands)");
  app.add_option("--threads", config.threads, "worker threads (default: all cores)")->check(CLI::PositiveNumber);
  app.add_option("--rel-tol", config.rel_tol, "relative tolerance for series and solvers")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", config.out_path, "write output to this file instead of stdout");
  app.add_option("--format", config.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  int pmf_n = 0;
  auto* pmf = app.add_subcommand("pmf", "exact joint law of (D_n, D'_n) as CSV");
  pmf->add_option("--n", pmf_n, "permutation size")->required();

  int sim_n = 0;
  long sim_reps = 1;
  auto* simulate = app.add_subcommand("simulate", "sample (D_n, D'_n) along independent chains");
  simulate->add_option("--n", sim_n, "permutation size")->required();
  simulate->add_option("--reps", sim_reps, "number of replicas");

  TailsArgs tails_args;
  auto* tails = app.add_subcommand("tails", "quadrant tail probabilities: exact, sharp approximation, Monte Carlo");
  tails->add_option("--n", tails_args.ns, "size, or comma-separated sizes")->required();
  tails->add_option("--x", tails_args.x, "threshold for D/(n-1), in ]1/2,1[")->required();
  tails->add_option("--y", tails_args.y, "threshold for D'/(n-1), in ]1/2,1[")->required();
  tails->add_option("--quadrant", tails_args.quadrant, "pp|mm|mp|pm")->check(CLI::IsMember({"pp", "mm", "mp", "pm"}));
  tails->add_option("--method", tails_args.method, "exact|sldp|mc, comma-separated");
  tails->add_option("--mc-reps", tails_args.mc_reps, "Monte Carlo replicas");

  std::optional<double> rate_x;
  std::string rate_curve;
  auto* rate = app.add_subcommand("rate", "tilt parameter and rate function");
  rate->add_option("--x", rate_x, "point in [0,1]");
  rate->add_option("--curve", rate_curve, "a:b:step grid, CSV output");

  int lap_n = 0;
  double lap_t = 0;
  double lap_s = 0;
  std::string lap_method = "closed";
  auto* laplace = app.add_subcommand("laplace", "Laplace transform m_n(t,s)");
  laplace->add_option("--n", lap_n, "permutation size")->required();
  laplace->add_option("--t", lap_t, "argument for D")->required();
  laplace->add_option("--s", lap_s, "argument for D'");
  laplace->add_option("--method", lap_method, "closed|exact|axis")->check(CLI::IsMember({"closed", "exact", "axis"}));

  LimitArgs limit_args;
  auto* limit = app.add_subcommand("limit", "Monte Carlo checks of Gaussian-scale limits");
  limit->add_option("--check", limit_args.check, "clt|fclt|qsl|lil|sumclt")
      ->required()
      ->check(CLI::IsMember({"clt", "fclt", "qsl", "lil", "sumclt"}));
  limit->add_option("--n", limit_args.n, "size (path length for qsl/lil)");
  limit->add_option("--reps", limit_args.reps, "replicas");
  limit->add_option("--s", limit_args.s, "early time (fclt)");
  limit->add_option("--t", limit_args.t, "late time (fclt)");

  std::string suite;
  int max_n = 0;
  auto* validate = app.add_subcommand("validate", "run an oracle suite");
  validate->add_option("--suite", suite, "thm21|insertion|gf|laplace|eulerian|sldp|martingale")
      ->required()
      ->check(CLI::IsMember({"thm21", "insertion", "gf", "laplace", "eulerian", "sldp", "martingale"}));
  validate->add_option("--max-n", max_n, "largest size (0 = suite default)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (*seed_opt) config.seed = seed_value;

  int exit_code = 0;
  std::string output;
  try {
    if (*pmf) output = run_pmf(config, pmf_n);
    else if (*simulate) output = run_simulate(config, sim_n, sim_reps);
    else if (*tails) output = run_tails(config, tails_args);
    else if (*rate) output = run_rate(config, rate_x, rate_curve);
    else if (*laplace) output = run_laplace(config, lap_n, lap_t, lap_s, lap_method);
    else if (*limit) output = run_limit(config, limit_args, exit_code);
    else if (*validate) output = run_validate(config, suite, max_n, exit_code);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  }

  if (config.out_path.empty()) {
    std::cout << output;
  } else {
    std::ofstream file(config.out_path, std::ios::binary);
    if (!file || !(file << output)) {
      std::cerr << "error: cannot write " << config.out_path << "\n";
      return kExitUsage;
    }
  }
  return exit_code;
}
