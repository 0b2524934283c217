#include "shiftnum/cli.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "shiftnum/a2cy.hpp"
#include "shiftnum/circle.hpp"
#include "shiftnum/entropy.hpp"
#include "shiftnum/orthog.hpp"
#include "shiftnum/psl2z.hpp"

namespace shiftnum::cli {

namespace {

using nlohmann::ordered_json;
using Json = ordered_json;


// 12 significant digits; non-finite values become null.
Json real(double x) {
  if (!std::isfinite(x)) return nullptr;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::stod(buf);
}

Json integer(const BigInt& n) {
  if (n >= std::numeric_limits<std::int64_t>::min() && n <= std::numeric_limits<std::int64_t>::max())
    return n.convert_to<std::int64_t>();
  return n.str();
}

Json reals(const std::vector<double>& xs) {
  Json a = Json::array();
  for (double x : xs) a.push_back(real(x));
  return a;
}

std::vector<std::string> split_commas(const std::string& text, std::size_t expected) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(item);
  if (parts.size() != expected)
    throw std::invalid_argument("expected " + std::to_string(expected) +
                                " comma-separated entries, got '" + text + "'");
  return parts;
}

psl2z::Psl2Matrix parse_int_matrix(const std::string& text) {
  auto p = split_commas(text, 4);
  std::array<BigInt, 4> e;
  for (std::size_t i = 0; i < 4; ++i) {
    try {
      e[i] = BigInt(p[i]);
    } catch (const std::exception&) {
      throw std::invalid_argument("matrix entry '" + p[i] + "' is not an integer");
    }
  }
  return {e[0], e[1], e[2], e[3]};
}

Eigen::Matrix2d parse_real_matrix(const std::string& text) {
  auto p = split_commas(text, 4);
  Eigen::Matrix2d m;
  for (int i = 0; i < 4; ++i) {
    std::size_t used = 0;
    double x = std::stod(p[static_cast<std::size_t>(i)], &used);
    if (used != p[static_cast<std::size_t>(i)].size())
      throw std::invalid_argument("matrix entry '" + p[static_cast<std::size_t>(i)] +
                                  "' is not a number");
    m(i / 2, i % 2) = x;
  }
  return m;
}

Json blocks_json(const psl2z::CyclicLRWord& w) {
  Json a = Json::array();
  for (const auto& [x, y] : w.blocks) a.push_back({x, y});
  return a;
}

Json reduction_json(const psl2z::CyclicReduction& r) {
  Json j;
  j["conjugator"] = r.conjugator.str();
  if (const auto* tag = std::get_if<psl2z::FiniteOrderTag>(&r.core)) {
    j["finiteOrder"] = tag->order();
    j["representative"] = tag->representative().str();
  } else {
    j["blocks"] = blocks_json(std::get<psl2z::CyclicLRWord>(r.core));
  }
  return j;
}

Json normal_form_json(const a2cy::AutNormalForm& nf) {
  Json j;
  j["conjugator"] = nf.conjugator.str();
  if (const auto* tag = std::get_if<a2cy::TorsionTag>(&nf.core)) {
    j["core"] = a2cy::to_string(*tag);
  } else {
    j["core"] = nf.core_word().str();
    j["blocks"] = blocks_json(std::get<psl2z::CyclicLRWord>(nf.core));
  }
  j["shift"] = integer(nf.shift);
  j["word"] = nf.word().str();
  return j;
}

void flatten(const Json& j, const std::string& prefix, std::ostream& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), out);
  } else {
    std::string v = j.is_string() ? j.get<std::string>() : j.dump();
    if (v.find_first_of(",\"\n") != std::string::npos) {
      std::string q = "\"";
      for (char c : v) q += c == '"' ? std::string("\"\"") : std::string(1, c);
      v = q + "\"";
    }
    out << prefix << ',' << v << '\n';
  }
}

// Subcommand bodies.  Each returns the report and sets ok = false when an
// internal check fails.

Json run_rademacher(const std::string& matrix, bool& ok) {
  const auto m = parse_int_matrix(matrix);
  const auto nf = psl2z::decompose_su(m);
  Json j;
  j["matrix"] = m.str();
  j["normalForm"] = nf.str();
  j["phi0"] = integer(psl2z::rademacher_phi0(m));
  j["phi"] = integer(psl2z::phi_homogeneous(m));
  j["reduction"] = reduction_json(psl2z::cyclic_reduce(m));
  const bool round_trip = psl2z::evaluate_word(nf) == m;
  j["roundTrip"] = round_trip;
  ok = ok && round_trip;
  return j;
}

Json run_tau(int n, const std::string& word_text, bool& ok) {
  const auto word = a2cy::AutWord::parse(word_text);
  const auto nf = a2cy::normalize(word, n);
  const auto pm = a2cy::tau_pm(nf, word, n);
  const Rational w = a2cy::weight_w(word, n);
  const auto image = a2cy::alpha(word);
  const Rational via_formula = w - Rational(psl2z::phi_homogeneous(image)) / 6;
  const Rational avg = (pm.plus + pm.minus) / 2;
  Json j;
  j["n"] = n;
  j["word"] = word.str();
  j["alpha"] = image.str();
  j["w"] = to_string(w);
  j["normalForm"] = normal_form_json(nf);
  j["tauPlus"] = to_string(pm.plus);
  j["tauMinus"] = to_string(pm.minus);
  j["tau"] = to_string(avg);
  j["tauViaFormula"] = to_string(via_formula);
  j["agrees"] = avg == via_formula;
  ok = ok && avg == via_formula;
  return j;
}

Json run_oracle(int n, const std::string& word_text, int iters, bool& ok) {
  const auto word = a2cy::AutWord::parse(word_text);
  const auto oracle = a2cy::oracle_tau_pm(word, n, iters);
  const auto pm = a2cy::tau_pm(word, n);
  Json j;
  j["n"] = n;
  j["word"] = word.str();
  j["iters"] = iters;
  j["oracleTauPlus"] = to_string(oracle.plus);
  j["oracleTauMinus"] = to_string(oracle.minus);
  j["tauPlus"] = to_string(pm.plus);
  j["tauMinus"] = to_string(pm.minus);
  j["agrees"] = oracle == pm;
  ok = ok && oracle == pm;
  return j;
}

Json run_rotation(const std::string& matrix, std::int64_t lift, long iters, bool& ok) {
  const circle::LiftedRayMap g(parse_real_matrix(matrix), lift);
  const auto f = circle::LiftedCircleMap::from_ray_map(g);
  const double exact = circle::translation_number_exact(g);
  const double numeric = circle::translation_number_numeric(f, 0.0, iters);
  const double weighted = circle::translation_number_weighted(f, 0.0, iters);
  // |f^n(x) - x - n rho| < period for any lift.
  const double bound = circle::kRayPeriod / static_cast<double>(iters);
  Json j;
  j["matrix"] = matrix;
  j["lift"] = lift;
  j["valueAtZero"] = real(g.value_at_zero());
  j["iters"] = iters;
  j["exact"] = real(exact);
  j["numeric"] = real(numeric);
  j["numericWeighted"] = real(weighted);
  j["errorBound"] = real(bound);
  const bool within = std::abs(exact - numeric) <= bound;
  j["withinBound"] = within;
  ok = ok && within;
  return j;
}

struct EntropyArgs {
  std::string kind;
  int n = 3;
  std::string chi_path;
  double tmin = -40.0;
  double tmax = 40.0;
  double step = 0.5;
};

Json run_entropy(const EntropyArgs& a, bool& ok) {
  const entropy::Grid grid{a.tmin, a.tmax, a.step};
  entropy::EntropyCurve curve;
  entropy::TauRange tau;
  double bound_tol = 1e-9;
  double domain_tol = 1e-6;
  Json extra;
  if (a.kind == "spherical") {
    curve = entropy::spherical_twist_curve(a.n, grid);
    tau = entropy::catalog_tau(entropy::SphericalTwist{a.n});
  } else if (a.kind == "ptwist") {
    curve = entropy::p_twist_curve(a.n, grid);
    tau = entropy::catalog_tau(entropy::PTwist{a.n});
  } else {
    entropy::ChiPolynomial chi = entropy::ChiPolynomial::quintic();
    if (!a.chi_path.empty())
      chi = entropy::ChiPolynomial::load(a.chi_path);
    else if (a.n != 3)
      throw std::invalid_argument("--chi is required for cy with N != 3");
    curve = entropy::cy_curve(chi, a.n, grid);
    tau = {1.0 - a.n, 0.0};
    bound_tol = 1e-6;
    domain_tol = 0.05;
    double worst = 0.0;
    for (std::size_t i = 0; i < curve.t.size(); ++i)
      worst = std::max(worst, entropy::cy_relative_residual(chi, a.n, curve.t[i], curve.h[i]));
    extra["maxResidual"] = real(worst);
    ok = ok && worst <= 1e-10;
  }

  const double h0 = curve.at(0.0);
  const double probe_plus = std::max(10.0, std::abs(a.tmax));
  const double probe_minus = std::max(10.0, std::abs(a.tmin));
  const auto lt = entropy::legendre(curve, tau.minus, tau.plus, {200, domain_tol});
  const auto bounds = entropy::check_entropy_bounds(curve, tau.minus, tau.plus, h0, bound_tol);
  const bool min_ok = std::abs(lt.min_value + h0) <= 1e-6;

  Json j;
  j["kind"] = a.kind;
  j["n"] = a.n;
  j["grid"] = {{"tmin", real(a.tmin)}, {"tmax", real(a.tmax)}, {"step", real(a.step)}};
  j["t"] = reals(curve.t);
  j["h"] = reals(curve.h);
  j["h0"] = real(h0);
  j["tauMinus"] = real(tau.minus);
  j["tauPlus"] = real(tau.plus);
  j["slopes"] = {{"plus", real(entropy::slope_at_infinity(curve, entropy::Side::Plus, probe_plus))},
                 {"plusProbe", real(probe_plus)},
                 {"minus", real(entropy::slope_at_infinity(curve, entropy::Side::Minus, probe_minus))},
                 {"minusProbe", real(-probe_minus)}};
  j["legendre"] = {{"domainLow", real(lt.domain_low)},
                   {"domainHigh", real(lt.domain_high)},
                   {"numericLow", real(lt.numeric_low)},
                   {"numericHigh", real(lt.numeric_high)},
                   {"minValue", real(lt.min_value)},
                   {"argmin", real(lt.argmin)},
                   {"minIsMinusH0", min_ok}};
  Json violations = Json::array();
  for (const auto& v : bounds.violations)
    violations.push_back({{"t", real(v.t)}, {"bound", v.bound}, {"amount", real(v.amount)}});
  j["bounds"] = {{"tolerance", real(bound_tol)},
                 {"worstSlack", real(bounds.worst_slack)},
                 {"ok", bounds.ok()},
                 {"violations", violations}};
  for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
  ok = ok && bounds.ok() && min_ok;
  return j;
}

Json run_ortho(int rho, int samples, std::uint64_t seed, bool& ok) {
  const auto r = orthog::defect_experiment(orthog::QuadraticSpace(rho), samples, seed);
  Json j;
  j["rho"] = rho;
  j["samples"] = samples;
  j["seed"] = seed;
  j["maxDefect"] = real(r.max_defect);
  j["bound"] = real(r.bound);
  j["maxCocycleResidual"] = real(r.max_cocycle_residual);
  j["maxFormResidual"] = real(r.max_form_residual);
  j["minAbsJ"] = real(r.min_abs_j);
  j["pass"] = r.pass;
  ok = ok && r.pass;
  return j;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Shifting numbers, translation numbers and entropy experiments", "shiftnum"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "json";
  app.add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();

  std::string matrix;
  int n = 3;
  std::string word;
  int iters = 6;
  std::int64_t lift = 0;
  long rot_iters = 100000;
  EntropyArgs ea;
  int rho = 1;
  int samples = 200;
  std::uint64_t seed = 1;

  auto* rad = app.add_subcommand("rademacher", "S/U normal form and Rademacher phi of a PSL(2,Z) matrix");
  rad->add_option("--matrix", matrix, "a,b,c,d with ad - bc = 1")->required();

  auto* tau = app.add_subcommand("tau", "Normal form and shifting numbers of a word in T1, T2, [k]");
  tau->add_option("--n", n, "Calabi-Yau dimension N >= 3")->required();
  tau->add_option("--word", word, "Tokens T1 T2 T1^-1 T2^-1 [k]")->required();

  auto* orc = app.add_subcommand("oracle", "Symbolic factor-list growth of a positive word");
  orc->add_option("--n", n, "Calabi-Yau dimension N >= 3")->required();
  orc->add_option("--word", word, "Tokens T1 and T2^-1 only")->required();
  orc->add_option("--iters", iters, "Iterations")->check(CLI::Range(1, 1000))->capture_default_str();

  auto* rot = app.add_subcommand("rotation", "Translation number of a lifted ray map");
  rot->add_option("--matrix", matrix, "a,b,c,d with ad - bc > 0")->required();
  rot->add_option("--lift", lift, "Lift offset m: f(0) in [m, m + 2)")->required();
  rot->add_option("--iters", rot_iters, "Iterations of the numeric estimate")
      ->check(CLI::Range(1L, 100000000L))
      ->capture_default_str();

  auto* ent = app.add_subcommand("entropy", "Sampled entropy curve, slopes, Legendre transform, bounds");
  ent->add_option("--kind", ea.kind, "Curve kind")
      ->required()
      ->check(CLI::IsMember({"spherical", "ptwist", "cy"}));
  ent->add_option("--n", ea.n, "Dimension N")->required();
  ent->add_option("--chi", ea.chi_path, "chi(O(k)) coefficient file (cy only)");
  ent->add_option("--tmin", ea.tmin)->capture_default_str();
  ent->add_option("--tmax", ea.tmax)->capture_default_str();
  ent->add_option("--step", ea.step)->capture_default_str();

  auto* ort = app.add_subcommand("ortho-defect", "Defect of the argument quasimorphism on SO(2, rho)");
  ort->add_option("--rho", rho, "rho >= 1")->required()->check(CLI::PositiveNumber);
  ort->add_option("--samples", samples)->check(CLI::PositiveNumber)->capture_default_str();
  ort->add_option("--seed", seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  bool ok = true;
  Json report;
  try {
    if (*rad)
      report = run_rademacher(matrix, ok);
    else if (*tau)
      report = run_tau(n, word, ok);
    else if (*orc)
      report = run_oracle(n, word, iters, ok);
    else if (*rot)
      report = run_rotation(matrix, lift, rot_iters, ok);
    else if (*ent)
      report = run_entropy(ea, ok);
    else
      report = run_ortho(rho, samples, seed, ok);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  if (format == "csv") {
    out << "key,value\n";
    flatten(report, "", out);
  } else {
    out << report.dump(2) << '\n';
  }
  if (!ok) {
    err << "error: internal check failed\n";
    return 1;
  }
  return 0;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"shiftnum"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace shiftnum::cli
