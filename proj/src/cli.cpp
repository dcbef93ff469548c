#include "chordlab/cli.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "chordlab/constants.hpp"
#include "chordlab/functionals.hpp"
#include "chordlab/suites.hpp"

namespace chordlab {

std::uint64_t defaultSamples() {
  const char* env = std::getenv("CHORDLAB_DEFAULT_SAMPLES");
  if (!env || !*env) return kDefaultSamples;
  try {
    std::size_t pos = 0;
    long long v = std::stoll(env, &pos);
    if (pos != std::string(env).size() || v < 2) throw std::invalid_argument("bad");
    return static_cast<std::uint64_t>(v);
  } catch (const std::exception&) {
    throw ConfigError(std::string("CHORDLAB_DEFAULT_SAMPLES must be an integer >= 2, got '") + env + "'");
  }
}

std::vector<double> parseAlphaGrid(const std::string& s) {
  std::vector<double> out;
  auto num = [&](const std::string& t) {
    try {
      std::size_t pos = 0;
      double v = std::stod(t, &pos);
      if (pos != t.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      throw ConfigError("alpha grid: cannot parse '" + t + "'");
    }
  };
  if (s.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw ConfigError("alpha grid must be a:b:step");
    double a = num(parts[0]), b = num(parts[1]), h = num(parts[2]);
    if (h == 0.0 || (b - a) * h < 0.0) throw ConfigError("alpha grid step must move from a toward b");
    double count = std::floor((b - a) / h + 1e-9);
    if (count > 1e5) throw ConfigError("alpha grid too long");
    /// snap to 12 significant digits so 0.1 steps print as typed
    for (int i = 0; i <= static_cast<int>(count); ++i) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.12g", a + i * h);
      out.push_back(std::strtod(buf, nullptr));
    }
  } else {
    std::stringstream ss(s);
    for (std::string p; std::getline(ss, p, ',');) out.push_back(num(p));
  }
  if (out.empty()) throw ConfigError("alpha grid is empty");
  for (std::size_t i = 1; i < out.size(); ++i) {
    bool up = out[1] > out[0];
    if (up ? !(out[i] > out[i - 1]) : !(out[i] < out[i - 1])) throw ConfigError("alpha grid must be strictly monotone");
  }
  return out;
}

namespace {
nlohmann::json loadSpec(const std::string& spec, std::filesystem::path& baseDir) {
  try {
    auto first = spec.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && spec[first] == '{') {
      baseDir = std::filesystem::current_path();
      return nlohmann::json::parse(spec);
    }
    std::ifstream is(spec);
    if (!is) throw ConfigError("cannot read spec file '" + spec + "'");
    baseDir = std::filesystem::path(spec).parent_path();
    return nlohmann::json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed JSON in '" + spec + "': " + e.what());
  }
}

Input loadInput(const RunConfig& c) {
  if (!c.hasInput()) throw ConfigError("an input is required (--shape or --function)");
  std::filesystem::path base;
  try {
    if (!c.shapeSpec.empty()) return Input(parseShape(loadSpec(c.shapeSpec, base)));
    return Input(parseFunction(loadSpec(c.functionSpec, base), base));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid input spec: ") + e.what());
  }
}

Route routeOr(const RunConfig& c, Route fallback) {
  if (!c.route) return fallback;
  try {
    return parseRoute(*c.route);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

std::vector<double> alphas(const RunConfig& c) {
  if (!c.alphaGrid.empty()) return c.alphaGrid;
  if (c.alpha) return {*c.alpha};
  throw ConfigError("this command needs --alpha or --alpha-grid");
}

Json constantsJson(int n, double a) {
  auto ap = AlphaParam::make(n, a);
  Json j;
  j["schema"] = kSchemaVersion;
  j["n"] = n;
  j["alpha"] = a;
  j["regime"] = regimeName(ap.regime);
  j["omega_n"] = omega(n);
  j["sigma"] = a == 0.0 ? Json(nullptr) : Json(sigma(n, a));
  j["abs_alpha_sigma"] = absAlphaSigma(n, a);
  j["sigma_tilde"] = sigmaTilde(n, a);
  j["ball_chord_power"] = ballChordPower(n, a);
  double sb = sigmaBar0(n), fd = sigmaBar0FiniteDifference(n);
  j["sigma_bar_0"] = sb;
  j["sigma_bar_0_finite_difference"] = fd;
  j["sigma_bar_0_discrepancy"] = std::abs(sb - fd);
  j["sigma_0"] = sigmaZero(n);
  j["ball_entropy_1"] = ballEntropy(n, 1);
  j["ball_entropy_n_plus_1"] = ballEntropy(n, n + 1);
  j["theta_constant_C"] = thetaConstantC();
  j["euler_gamma"] = kEulerGamma;
  return j;
}

std::string runConstants(const RunConfig& c) {
  if (!c.alpha) throw ConfigError("constants needs --alpha");
  Json j;
  try {
    j = constantsJson(c.n, *c.alpha);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (c.format == Format::JSON) return j.dump(2) + "\n";
  std::string out = "key,value\n";
  for (auto it = j.begin(); it != j.end(); ++it) {
    std::string v = it.value().is_string() ? it.value().get<std::string>()
                    : it.value().is_null() ? std::string()
                    : it.value().is_number_integer() ? std::to_string(it.value().get<long long>())
                                                     : formatDouble(it.value().get<double>());
    out += it.key() + "," + v + "\n";
  }
  return out;
}

struct ComputeResult {
  Estimate estimate;
  Json json;
};

ComputeResult computeOne(const RunConfig& c, const Input& in, std::optional<double> alpha) {
  const auto* K = std::get_if<ConvexBody>(&in);
  AnyFn f = asFunction(in);
  bool grid = std::holds_alternative<GridFn>(f);
  Json meta;
  meta["schema"] = kSchemaVersion;
  meta["functional"] = c.functional;
  meta["input"] = inputJson(in);
  meta["budget"] = budgetJson(c.budget);
  Estimate e;
  auto needAlpha = [&] {
    if (!alpha) throw ConfigError(c.functional + " needs --alpha");
    meta["alpha"] = *alpha;
    return *alpha;
  };
  if (c.functional == "chord-power" || c.functional == "riesz") {
    double a = needAlpha();
    Route r = routeOr(c, K ? Route::LINES : (grid ? Route::PAIRS : Route::LEVELSET));
    meta["route"] = routeName(r);
    if (c.functional == "chord-power") e = K ? chordPowerBody(*K, a, r, c.budget) : chordPowerFn(f, a, r, c.budget);
    else e = K ? rieszDoubleIntegralBody(*K, a, r, c.budget) : rieszDoubleIntegral(f, a, r, c.budget);
  } else if (c.functional == "radial-mean") {
    double a = needAlpha();
    int n = inputDim(in);
    Vec u = Vec::unit(n, 0);
    if (!c.direction.empty()) {
      std::vector<double> xs;
      std::stringstream ss(c.direction);
      for (std::string p; std::getline(ss, p, ',');) xs.push_back(std::stod(p));
      if (static_cast<int>(xs.size()) != n) throw ConfigError("--direction has the wrong dimension");
      u = Vec::from(xs);
    }
    meta["direction"] = u.toStd();
    meta["method"] = c.method;
    if (K) {
      if (c.method != "mc" && c.method != "covariogram") throw ConfigError("--method for bodies: mc|covariogram");
      e = radialMeanBodyRho(*K, a, u, c.budget, c.method == "mc" ? RadialMethod::MC : RadialMethod::COVARIOGRAM);
    } else {
      if (c.method != "mc" && c.method != "levelwise" && c.method != "direct")
        throw ConfigError("--method for functions: levelwise|direct");
      e = radialMeanFnRho(f, a, u, c.budget, c.method == "direct" ? RadialFnRoute::DIRECT : RadialFnRoute::LEVELWISE);
    }
  } else if (c.functional == "entropy") {
    meta["order"] = c.order;
    if (K) e = entropyBody(*K, c.order, c.budget);
    else e = entropyFn(asCatalog(in), c.order, c.budget);
  } else if (c.functional == "dual-log-volume") {
    e = K ? dualLogVolumeBody(*K, c.budget) : dualLogVolume(f, c.budget);
  } else if (c.functional == "theorem-c-rhs") {
    e = theoremCRightSide(f, c.budget);
  } else {
    throw ConfigError("unknown functional '" + c.functional + "'");
  }
  if (grid) meta["domain"] = "extended-domain";
  meta["estimate"] = estimateJson(e);
  meta["tail_status"] = tailStatus(e.tailIndex);
  return {e, meta};
}

std::vector<VerificationReport> runCheck(const RunConfig& c) {
  std::string id = c.check;
  for (auto& ch : id) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  Input in = loadInput(c);
  std::vector<VerificationReport> out;
  auto perAlpha = [&](auto fn) {
    for (double a : alphas(c)) out.push_back(fn(a));
  };
  std::optional<Route> route;
  if (c.route) route = routeOr(c, Route::PAIRS);
  if (id == "THEOREM_A") perAlpha([&](double a) { return verifyTheoremA(in, a, c.budget, route.value_or(Route::PAIRS)); });
  else if (id == "THEOREM_B") perAlpha([&](double a) { return verifyTheoremB(in, a, c.budget, route); });
  else if (id == "FRAC_SOBOLEV") perAlpha([&](double a) { return verifyFracSobolev(in, a, c.budget, route.value_or(Route::PAIRS)); });
  else if (id == "CHORD_ISOPERIMETRIC")
    perAlpha([&](double a) { return verifyChordIsoperimetric(in, a, c.budget, route.value_or(Route::LINES)); });
  else if (id == "ENTROPY_1") out.push_back(verifyEntropy(in, 1, c.budget));
  else if (id == "ENTROPY_N_PLUS_1") out.push_back(verifyEntropy(in, inputDim(in) + 1, c.budget));
  else if (id == "THEOREM_C") out.push_back(verifyTheoremC(in, c.budget));
  else if (std::find(identityIds().begin(), identityIds().end(), id) != identityIds().end()) {
    std::optional<double> p = c.param;
    if (id == "CHORD_RAK" && !p && c.alpha) p = c.alpha;
    out.push_back(verifyIdentity(id, in, c.budget, p));
  } else if (id.rfind("LIMIT_", 0) == 0 || std::find(limitIds().begin(), limitIds().end(), id) != limitIds().end()) {
    std::string lid = id.rfind("LIMIT_", 0) == 0 ? id.substr(6) : id;
    out.push_back(verifyLimit(lid, in, c.alphaGrid, c.budget));
  } else if (id.rfind("REARRANGE_", 0) == 0) {
    AnyFn f = asFunction(in);
    const auto* g = std::get_if<GridFn>(&f);
    if (!g) throw ConfigError("rearrangement checks need a grid function");
    out.push_back(verifyRearrangement(id.substr(10), *g, c.budget, c.param));
  } else {
    throw ConfigError("unknown check '" + c.check + "'");
  }
  return out;
}

int exitCodeFor(const std::vector<VerificationReport>& reports) {
  bool fail = false, divergent = false;
  for (const auto& r : reports) {
    fail = fail || r.verdict == Verdict::FAIL;
    divergent = divergent || r.divergent();
  }
  if (divergent) return kExitDivergent;
  return fail ? kExitFail : kExitOk;
}
}  // namespace

std::vector<VerificationReport> runSweep(const RunConfig& config) {
  if (config.alphaGrid.empty()) throw ConfigError("sweep needs --alpha-grid");
  RunConfig c = config;
  if (c.check.empty()) c.check = "THEOREM_A";
  static const std::vector<std::string> sweepable{"THEOREM_A", "THEOREM_B", "FRAC_SOBOLEV", "CHORD_ISOPERIMETRIC"};
  std::string id = c.check;
  for (auto& ch : id) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  if (std::find(sweepable.begin(), sweepable.end(), id) == sweepable.end())
    throw ConfigError("sweep supports THEOREM_A, THEOREM_B, FRAC_SOBOLEV, CHORD_ISOPERIMETRIC");
  c.alpha.reset();
  return runCheck(c);
}

int runCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"chordlab: chord power integrals, radial mean bodies and sharp chord Sobolev checks"};
  app.require_subcommand(1);
  RunConfig c;
  std::optional<std::uint64_t> samples;
  std::optional<std::uint64_t> seed;
  std::optional<int> shards;
  std::string gridText, formatText;
  bool jsonFlag = false;

  auto common = [&](CLI::App* s, bool withInput) {
    if (withInput) {
      s->add_option("--shape", c.shapeSpec, "shape spec: JSON file or inline JSON");
      s->add_option("--function", c.functionSpec, "function spec: JSON file or inline JSON");
    }
    s->add_option("--n", c.n, "dimension (constants, suites)");
    s->add_option("--alpha", c.alpha, "exponent alpha > -1");
    s->add_option("--alpha-grid", gridText, "a:b:step or comma list, strictly monotone");
    s->add_option("--samples", samples, "samples per estimate");
    s->add_option("--seed", seed, "master seed");
    s->add_option("--shards", shards, "independent streams per estimate");
    s->add_option("--route", c.route, "LINES|PAIRS|LEVELSET|RADIALMEAN");
    s->add_option("--format", formatText, "json|csv");
    s->add_option("--out", c.outPath, "output path (default stdout)");
  };
  auto* cConst = app.add_subcommand("constants", "dimensional and sharp constants");
  common(cConst, false);
  cConst->add_flag("--json", jsonFlag, "JSON output (default)");
  auto* cCompute = app.add_subcommand("compute", "evaluate one functional");
  common(cCompute, true);
  cCompute->add_option("--functional", c.functional, "chord-power|riesz|radial-mean|entropy|dual-log-volume|theorem-c-rhs")->required();
  cCompute->add_option("--order", c.order, "entropy order: 1 or n+1");
  cCompute->add_option("--direction", c.direction, "comma-separated direction for radial-mean");
  cCompute->add_option("--method", c.method, "radial-mean method: mc|covariogram (bodies), levelwise|direct (functions)");
  auto* cVerify = app.add_subcommand("verify", "run a check or a suite");
  common(cVerify, true);
  cVerify->add_option("--check", c.check, "check id");
  cVerify->add_option("--suite", c.suite, "identities|inequalities|limits|rearrangement|all");
  cVerify->add_option("--param", c.param, "lambda (scaling), q (rearrangement Q) or alpha (CHORD_RAK)");
  auto* cSweep = app.add_subcommand("sweep", "alpha sweep of an inequality check");
  common(cSweep, true);
  cSweep->add_option("--check", c.check, "THEOREM_A|THEOREM_B|FRAC_SOBOLEV|CHORD_ISOPERIMETRIC");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    c.command = sub->get_name();
    c.budget.nSamples = samples ? *samples : defaultSamples();
    if (seed) c.budget.masterSeed = *seed;
    if (shards) c.budget.nShards = *shards;
    if (!gridText.empty()) c.alphaGrid = parseAlphaGrid(gridText);
    if (!formatText.empty()) c.format = parseFormat(formatText);
    else if (c.command == "sweep") c.format = Format::CSV;
    if (jsonFlag) c.format = Format::JSON;
    c.validate();

    std::string bytes;
    int code = kExitOk;
    if (c.command == "constants") {
      bytes = runConstants(c);
    } else if (c.command == "compute") {
      Input in = loadInput(c);
      std::vector<std::optional<double>> as;
      if (!c.alphaGrid.empty()) for (double a : c.alphaGrid) as.push_back(a);
      else as.push_back(c.alpha);
      Json rows = Json::array();
      std::string csv = "functional,alpha,route,value,std_error,n_samples,tail_index\n";
      for (const auto& a : as) {
        auto r = computeOne(c, in, a);
        if (r.estimate.tailIndex < kDivergentTail) code = kExitDivergent;
        csv += c.functional + "," + (a ? formatDouble(*a) : "") + "," + r.json.value("route", std::string()) + "," +
               formatDouble(r.estimate.value) + "," + formatDouble(r.estimate.stdError) + "," +
               std::to_string(r.estimate.nSamples) + "," + formatDouble(r.estimate.tailIndex) + "\n";
        rows.push_back(std::move(r.json));
      }
      bytes = c.format == Format::CSV ? csv : (rows.size() == 1 ? rows[0] : Json{{"schema", kSchemaVersion}, {"results", rows}}).dump(2) + "\n";
    } else {
      std::vector<VerificationReport> reports;
      if (c.command == "sweep") {
        reports = runSweep(c);
      } else {
        if (c.check.empty() == c.suite.empty()) throw ConfigError("verify needs exactly one of --check / --suite");
        if (!c.suite.empty()) {
          if (std::find(suiteNames().begin(), suiteNames().end(), c.suite) == suiteNames().end())
            throw ConfigError("unknown suite '" + c.suite + "'");
          reports = runSuite(c.suite, c.n, c.budget);
        } else {
          reports = runCheck(c);
        }
      }
      bytes = emitReport(reports, c.format);
      code = exitCodeFor(reports);
    }
    if (c.outPath.empty()) {
      out << bytes;
    } else {
      try {
        writeOutput(c.outPath, bytes);
      } catch (const std::exception& e) {
        throw ConfigError(e.what());
      }
    }
    if (code == kExitDivergent) err << "warning: tail-index diagnostic reports a divergent estimator\n";
    return code;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace chordlab
