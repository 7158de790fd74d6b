#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <omp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "abloop/asymptotics.hpp"
#include "abloop/bracketing.hpp"
#include "abloop/curve.hpp"
#include "abloop/error.hpp"
#include "abloop/spectral1d.hpp"
#include "abloop/strip2d.hpp"
#include "abloop/transverse.hpp"

namespace {

using nlohmann::json;
using namespace abloop;

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_failed = 2;

struct RunConfig {
  std::string command;
  std::string curve;  // empty: unit circle
  double c0 = 0.25;
  std::vector<double> c0s = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  double beta = 20.0;
  std::vector<double> betas = {20, 40, 80, 160};
  double a = 0.0;
  double gamma_plus = 1.0;
  int n = 2;
  std::string grid;  // NSxNU, empty: automatic
  std::string bc = "twisted";
  std::string coeffs = "derived";
  std::string out;
  int threads = 0;
  bool strip = true;

  json to_json() const {
    return json{{"command", command}, {"curve", curve.empty() ? "builtin:unit-circle" : curve},
                {"c0", c0}, {"c0s", c0s}, {"beta", beta}, {"betas", betas}, {"a", a},
                {"gamma_plus", gamma_plus}, {"n", n}, {"grid", grid}, {"bc", bc}, {"coeffs", coeffs},
                {"out", out}, {"threads", threads}, {"strip", strip}};
  }
};

void apply_config_file(RunConfig& c, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot read config " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::precondition, std::string("malformed config JSON: ") + e.what());
  }
  try {
    if (j.contains("command")) c.command = j["command"].get<std::string>();
    if (j.contains("curve")) c.curve = j["curve"].get<std::string>();
    if (j.contains("c0")) c.c0 = j["c0"].get<double>();
    if (j.contains("c0s")) c.c0s = j["c0s"].get<std::vector<double>>();
    if (j.contains("beta")) c.beta = j["beta"].get<double>();
    if (j.contains("betas")) c.betas = j["betas"].get<std::vector<double>>();
    if (j.contains("a")) c.a = j["a"].get<double>();
    if (j.contains("gamma_plus")) c.gamma_plus = j["gamma_plus"].get<double>();
    if (j.contains("n")) c.n = j["n"].get<int>();
    if (j.contains("grid")) c.grid = j["grid"].get<std::string>();
    if (j.contains("bc")) c.bc = j["bc"].get<std::string>();
    if (j.contains("coeffs")) c.coeffs = j["coeffs"].get<std::string>();
    if (j.contains("out")) c.out = j["out"].get<std::string>();
    if (j.contains("threads")) c.threads = j["threads"].get<int>();
    if (j.contains("strip")) c.strip = j["strip"].get<bool>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::precondition, std::string("config field has the wrong type: ") + e.what());
  }
}

StripGrid parse_grid(const std::string& s) {
  if (s.empty()) return {0, 0};
  const auto x = s.find('x');
  try {
    if (x == std::string::npos) throw std::invalid_argument("x");
    return {std::stoi(s.substr(0, x)), std::stoi(s.substr(x + 1))};
  } catch (const std::exception&) {
    throw Error(ErrorKind::precondition, "grid must look like NSxNU, got '" + s + "'");
  }
}

FluxBoundary parse_bc(const std::string& s) {
  if (s == "twisted") return FluxBoundary::twisted;
  if (s == "periodic") return FluxBoundary::periodic;
  throw Error(ErrorKind::precondition, "bc must be twisted or periodic");
}

CoeffVariant parse_coeffs(const std::string& s) {
  if (s == "derived") return CoeffVariant::derived;
  if (s == "literal") return CoeffVariant::literal;
  throw Error(ErrorKind::precondition, "coeffs must be derived or literal");
}

FrameField load_frame(const RunConfig& c) {
  const CurveSpec spec = c.curve.empty() ? CurveSpec::circle(1.0) : CurveSpec::load(c.curve);
  return FrameField::build(spec, 2048);
}

std::string fmt(double v, int p = 10) {
  std::ostringstream os;
  os << std::setprecision(p) << v;
  return os.str();
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p);
  if (!out) throw Error(ErrorKind::io, "cannot write " + p.string());
  out << text;
}

int cmd_spectrum(const RunConfig& c, const std::filesystem::path& out) {
  const FrameField fr = load_frame(c);
  ComparisonOptions co;
  co.boundary = parse_bc(c.bc);
  const auto mu = solve_comparison(fr, Flux{c.c0}, c.n, co);
  std::ostringstream csv;
  csv << "j,mu\n";
  for (std::size_t j = 0; j < mu.size(); ++j) {
    std::cout << "mu_" << j + 1 << " = " << fmt(mu[j], 12) << '\n';
    csv << j + 1 << ',' << fmt(mu[j], 15) << '\n';
  }
  write_text(out / "spectrum.csv", csv.str());
  return exit_ok;
}

int cmd_transverse(const RunConfig& c, const std::filesystem::path& out) {
  const double a = c.a > 0.0 ? c.a : 1.0;
  const Est2Result est = check_est2(c.beta, a, c.gamma_plus);
  std::ostringstream csv;
  csv << "side,zeta,kappa,in_regime,negative_count,lower_margin,upper_margin,printed_lower_margin,printed_upper_margin\n";
  for (Side side : {Side::plus, Side::minus}) {
    const TransverseProblem tp{a, c.beta, side, side == Side::plus ? 0.0 : c.gamma_plus};
    const SpectralResult oracle = transverse_grid_oracle(tp, transverse_grid_for(tp, 0.05), 1);
    const int neg = oracle.negative_count;
    TransverseResult t;
    try {
      t = transverse_secular(tp);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::root_bracketing) throw;
      t.zeta = oracle.eigenvalues.at(0);
      t.kappa = t.zeta < 0.0 ? std::sqrt(-t.zeta) : 0.0;
      t.in_regime = transverse_in_regime(tp);
    }
    const Est2Side& s = side == Side::plus ? est.plus : est.minus;
    std::cout << "zeta" << to_string(side) << " = " << std::fixed << std::setprecision(4) << t.zeta << std::defaultfloat
              << "  kappa = " << fmt(t.kappa) << "  negatives = " << neg;
    if (s.skipped) {
      std::cout << "  EST2 skipped (hypotheses unmet)\n";
    } else {
      std::cout << "  EST2 margins [" << fmt(s.lower_margin, 4) << ", " << fmt(s.upper_margin, 4) << "]"
                << (s.holds ? " ok" : " VIOLATED") << "  printed-exponent " << (s.printed_holds ? "ok" : "violated") << '\n';
    }
    csv << to_string(side) << ',' << fmt(t.zeta, 15) << ',' << fmt(t.kappa, 15) << ',' << t.in_regime << ',' << neg << ','
        << fmt(s.lower_margin, 15) << ',' << fmt(s.upper_margin, 15) << ',' << fmt(s.printed_lower_margin, 15) << ','
        << fmt(s.printed_upper_margin, 15) << '\n';
  }
  write_text(out / "transverse.csv", csv.str());
  return est.pass ? exit_ok : exit_failed;
}

SweepOptions sweep_options(const RunConfig& c) {
  SweepOptions o;
  o.n = c.n;
  o.boundary = parse_bc(c.bc);
  o.coeffs = parse_coeffs(c.coeffs);
  o.strip = c.strip;
  o.grid = parse_grid(c.grid);
  o.a = c.a;
  return o;
}

void print_records(const SweepReport& rep) {
  for (const SweepRecord& r : rep.records) {
    std::cout << (rep.axis == SweepReport::Axis::beta ? "beta=" : "c0=") << fmt(r.param, 6) << " j=" << r.j
              << " a=" << fmt(r.a, 6) << " mu=" << fmt(r.mu) << " tau-=" << fmt(r.tau_minus) << " kappa-=" << fmt(r.kappa_minus)
              << " kappa+=" << fmt(r.kappa_plus) << " tau+=" << fmt(r.tau_plus) << " err=" << fmt(r.err, 4);
    if (rep.axis == SweepReport::Axis::flux) std::cout << " I=" << fmt(r.current, 6);
    std::cout << " [" << r.regime_flags << "]\n";
  }
  for (const auto& n : rep.notes) std::cout << "note: " << n << '\n';
}

int cmd_bracket(const RunConfig& c, const std::filesystem::path& out) {
  const FrameField fr = load_frame(c);
  SweepOptions o = sweep_options(c);
  SweepReport rep = beta_sweep(fr, Flux{c.c0}, {c.beta}, o);
  print_records(rep);
  emit_report(rep, out.string(), "bracket");
  return !c.strip || rep.sandwich_ok ? exit_ok : exit_failed;
}

int cmd_sweep_beta(const RunConfig& c, const std::filesystem::path& out) {
  const FrameField fr = load_frame(c);
  const SweepReport rep = beta_sweep(fr, Flux{c.c0}, c.betas, sweep_options(c));
  print_records(rep);
  if (rep.fit.fitted) {
    std::cout << "envelope: C = " << fmt(rep.fit.C, 6) << " (log residual " << fmt(rep.fit.residual, 3)
              << "), power fit e ~ (ln b/b)^" << fmt(rep.fit.exponent, 4) << " (log residual "
              << fmt(rep.fit.power_residual, 3) << "), max e b/ln b = " << fmt(rep.fit.envelope_max, 6) << '\n';
  }
  std::cout << "monotone=" << rep.monotone << " sandwich=" << rep.sandwich_ok << " pass=" << rep.pass << '\n';
  emit_report(rep, out.string(), "sweep_beta");
  return rep.pass ? exit_ok : exit_failed;
}

int cmd_sweep_flux(const RunConfig& c, const std::filesystem::path& out) {
  const FrameField fr = load_frame(c);
  const SweepReport rep = flux_sweep(fr, c.beta, c.c0s, sweep_options(c));
  print_records(rep);
  std::cout << "variation=" << fmt(rep.variation, 6) << " tolerance=" << fmt(rep.max_tolerance, 3)
            << " oddness=" << fmt(rep.oddness, 3) << " pass=" << rep.pass << '\n';
  emit_report(rep, out.string(), "sweep_flux");
  return rep.pass ? exit_ok : exit_failed;
}

int cmd_lemma2(const RunConfig& c, const std::filesystem::path& out) {
  const FrameField fr = load_frame(c);
  const double a = c.a > 0.0 ? c.a : halfwidth_schedule(c.beta, &fr).a;
  StripGrid g = parse_grid(c.grid);
  if (g.n_s == 0) g = StripGrid::for_problem(a, c.beta, 64);
  const Lemma2Report r = lemma2_check(fr, Flux{c.c0}, a, c.beta, g, Side::plus, parse_coeffs(c.coeffs), 3);
  json j{{"a", a}, {"beta", c.beta}, {"c0", c.c0}, {"grid", std::to_string(g.n_s) + "x" + std::to_string(g.n_u)},
         {"eig_b", r.eig_b}, {"eig_conjugated", r.eig_conjugated}, {"similarity_error", r.similarity_error},
         {"diff_coarse", r.diff_coarse}, {"diff_fine", r.diff_fine}, {"overlap", r.overlap},
         {"similarity_ok", r.similarity_ok}, {"order_ok", r.order_ok}};
  json orders = json::array();
  for (double p : r.order) orders.push_back(std::isnan(p) ? json(nullptr) : json(p));
  j["order"] = orders;
  write_text(out / "lemma2.json", j.dump(2) + "\n");
  std::cout << "similarity error = " << fmt(r.similarity_error, 3) << (r.similarity_ok ? " ok" : " FAIL") << '\n';
  for (std::size_t k = 0; k < r.order.size(); ++k) {
    std::cout << "kappa_" << k + 1 << ": b - b~ = " << fmt(r.diff_coarse[k], 4) << " -> " << fmt(r.diff_fine[k], 4)
              << " order " << fmt(r.order[k], 3) << '\n';
  }
  std::cout << "ground-state overlap = " << fmt(r.overlap, 12) << (r.order_ok ? " ok" : " FAIL") << '\n';
  return r.similarity_ok && r.order_ok ? exit_ok : exit_failed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Strong delta-interaction on a loop around an Aharonov-Bohm flux: spectra, brackets and sweeps"};
  app.require_subcommand(1);
  RunConfig cli;
  std::string config_path;
  app.add_option("--config", config_path, "JSON config; explicit flags override it");

  auto* spectrum = app.add_subcommand("spectrum", "lowest eigenvalues of the comparison operator");
  auto* transverse = app.add_subcommand("transverse", "transverse delta problem and its two-sided bounds");
  auto* bracket = app.add_subcommand("bracket", "tau and strip brackets at one (beta, c0)");
  auto* sweep_beta = app.add_subcommand("sweep-beta", "convergence sweep in beta");
  auto* sweep_flux = app.add_subcommand("sweep-flux", "dispersion and persistent current sweep in c0");
  auto* lemma2 = app.add_subcommand("lemma2", "gauge equivalence checks on the strip");

  std::vector<CLI::Option*> opts;
  for (auto* sc : {spectrum, transverse, bracket, sweep_beta, sweep_flux, lemma2}) {
    sc->add_option("--config", config_path, "JSON config; explicit flags override it");
    opts.push_back(sc->add_option("--curve", cli.curve, "curve JSON file (default: unit circle)"));
    opts.push_back(sc->add_option("--c0", cli.c0, "flux in units of the flux quantum"));
    opts.push_back(sc->add_option("--c0s", cli.c0s, "flux grid for sweep-flux")->delimiter(','));
    opts.push_back(sc->add_option("--beta", cli.beta, "coupling strength"));
    opts.push_back(sc->add_option("--betas", cli.betas, "coupling grid for sweep-beta")->delimiter(','));
    opts.push_back(sc->add_option("--a", cli.a, "strip halfwidth (default: 6 ln(beta)/beta, clamped)"));
    opts.push_back(sc->add_option("--gamma-plus", cli.gamma_plus, "Robin constant for transverse"));
    opts.push_back(sc->add_option("-n", cli.n, "number of modes"));
    opts.push_back(sc->add_option("--grid", cli.grid, "strip grid NSxNU"));
    opts.push_back(sc->add_option("--bc", cli.bc, "twisted | periodic"));
    opts.push_back(sc->add_option("--coeffs", cli.coeffs, "derived | literal"));
    opts.push_back(sc->add_option("--out", cli.out, "output directory (default: $ABLOOP_OUT or ./abloop_out)"));
    opts.push_back(sc->add_option("--threads", cli.threads, "OpenMP threads (default: all cores)"));
    opts.push_back(sc->add_flag("--no-strip{false}", cli.strip, "skip the strip eigenvalues"));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    RunConfig c;
    if (!config_path.empty()) apply_config_file(c, config_path);
    c.command = app.get_subcommands().front()->get_name();
    // explicit flags win over the config file
    auto given = [&](const std::string& name) {
      for (auto* o : opts)
        if (o->check_name(name) && o->count() > 0) return true;
      return false;
    };
    if (given("--curve")) c.curve = cli.curve;
    if (given("--c0")) c.c0 = cli.c0;
    if (given("--c0s")) c.c0s = cli.c0s;
    if (given("--beta")) c.beta = cli.beta;
    if (given("--betas")) c.betas = cli.betas;
    if (given("--a")) c.a = cli.a;
    if (given("--gamma-plus")) c.gamma_plus = cli.gamma_plus;
    if (given("-n")) c.n = cli.n;
    if (given("--grid")) c.grid = cli.grid;
    if (given("--bc")) c.bc = cli.bc;
    if (given("--coeffs")) c.coeffs = cli.coeffs;
    if (given("--out")) c.out = cli.out;
    if (given("--threads")) c.threads = cli.threads;
    if (given("--no-strip")) c.strip = cli.strip;
    if (c.out.empty()) {
      const char* env = std::getenv("ABLOOP_OUT");
      c.out = env != nullptr && *env ? env : "abloop_out";
    }
    if (c.n < 1 || c.n > 10) throw Error(ErrorKind::precondition, "n must lie in 1..10");
    parse_bc(c.bc);
    parse_coeffs(c.coeffs);
    parse_grid(c.grid);
    if (c.threads > 0) omp_set_num_threads(c.threads);

    const std::filesystem::path out(c.out);
    std::error_code ec;
    std::filesystem::create_directories(out, ec);
    if (ec) throw Error(ErrorKind::io, "cannot create output directory " + c.out);
    write_text(out / "config.json", c.to_json().dump(2) + "\n");

    if (c.command == "spectrum") return cmd_spectrum(c, out);
    if (c.command == "transverse") return cmd_transverse(c, out);
    if (c.command == "bracket") return cmd_bracket(c, out);
    if (c.command == "sweep-beta") return cmd_sweep_beta(c, out);
    if (c.command == "sweep-flux") return cmd_sweep_flux(c, out);
    if (c.command == "lemma2") return cmd_lemma2(c, out);
    throw Error(ErrorKind::precondition, "unknown command " + c.command);
  } catch (const std::exception& e) {
    std::cerr << "abloop: " << e.what() << '\n';
    return exit_usage;
  }
}
