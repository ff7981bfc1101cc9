#include "lindyn/runner.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lindyn/config.hpp"
#include "lindyn/csv.hpp"
#include "lindyn/errors.hpp"
#include "lindyn/fhc.hpp"
#include "lindyn/rng.hpp"

namespace lindyn {

namespace {

using nlohmann::json;

struct Context {
  Operator op = Operator::doubling_shift_fixed_line();
  NormKind norm = NormKind::One;
  json params;
  std::uint64_t seed = 0;
  std::optional<std::int64_t> horizon;
  std::string csv_path;
  std::ostringstream report;
};

const json& param(const Context& c, const std::string& key) {
  if (!c.params.contains(key)) throw ConfigError("params misses key \"" + key + "\"");
  return c.params.at(key);
}

Rational param_rational(const Context& c, const std::string& key) {
  const json& v = param(c, key);
  if (!v.is_string()) throw ConfigError("param \"" + key + "\" must be a num/den string");
  return Rational::parse(v.get<std::string>());
}

std::int64_t param_int(const Context& c, const std::string& key) {
  const json& v = param(c, key);
  if (!v.is_number_integer()) throw ConfigError("param \"" + key + "\" must be an integer");
  return v.get<std::int64_t>();
}

std::int64_t param_int_or(const Context& c, const std::string& key, std::int64_t dflt) {
  return c.params.contains(key) ? param_int(c, key) : dflt;
}

std::string param_string(const Context& c, const std::string& key) {
  const json& v = param(c, key);
  if (!v.is_string()) throw ConfigError("param \"" + key + "\" must be a string");
  return v.get<std::string>();
}

std::string param_string_or(const Context& c, const std::string& key, const std::string& dflt) {
  return c.params.contains(key) ? param_string(c, key) : dflt;
}

SeqVector param_vector(const Context& c, const std::string& key) {
  return SeqVector::parse(param_string(c, key), c.op.domain());
}

std::vector<SeqVector> param_vector_list(const Context& c, const std::string& key) {
  const json& v = param(c, key);
  if (!v.is_array()) throw ConfigError("param \"" + key + "\" must be a list of vectors");
  std::vector<SeqVector> out;
  for (const auto& e : v) {
    if (!e.is_string()) throw ConfigError("vectors must be {index:num/den, ...} strings");
    out.push_back(SeqVector::parse(e.get<std::string>(), c.op.domain()));
  }
  return out;
}

ReturnChainFactory return_factory(const Context& c, const std::string& name) {
  if (name == "trivial") return trivial_return_factory(c.op, c.norm);
  if (name == "isometry") return isometry_return_factory(c.op, c.norm);
  if (name == "doubling") {
    if (c.op.kind() != OperatorKind::DoublingShiftFixedLine) {
      throw CapabilityError("the doubling return factory needs DoublingShiftFixedLine");
    }
    return doubling_shift_return_factory(c.norm);
  }
  throw ConfigError("unknown return factory \"" + name + "\"");
}

ConnectFactory connect_factory(const Context& c) {
  if (c.op.kind() != OperatorKind::DoublingShiftFixedLine) {
    throw CapabilityError("no connecting-chain factory for " + c.op.describe() +
                          " (only DoublingShiftFixedLine has one)");
  }
  return doubling_shift_connect_factory(c.norm);
}

void emit_chain_csv(CsvWriter& csv, const Chain& chain) {
  csv.row({"step", "point", "defect", "tolerance"});
  for (std::size_t i = 0; i < chain.points.size(); ++i) {
    const std::string defect = i < chain.defects.size() ? chain.defects[i].str() : "";
    csv.row({std::to_string(i), chain.points[i].str(), defect, chain.epsilon.str()});
  }
}

Rational worst_defect(const Chain& chain) {
  Rational w(0);
  for (const auto& d : chain.defects) {
    if (w < d) w = d;
  }
  return w;
}

void run_chains(Context& c) {
  CsvWriter csv(c.csv_path);
  const std::string construction = param_string(c, "construction");
  if (construction == "no_return") {
    const SeqVector x = param_vector(c, "x");
    const Rational delta = param_rational(c, "delta");
    const std::int64_t trials = param_int_or(c, "trials", 10000);
    const std::int64_t max_length = param_int_or(c, "max_length", 12);
    const std::int64_t grid = param_int_or(c, "grid_denominator", 80);
    const std::int64_t window = param_int_or(c, "window", 4);
    const NoReturnCertificate cert = contraction_no_return_certificate(c.op, x, delta, c.norm);
    const NoReturnSearchResult res = contraction_no_return_search(
        c.op, x, cert, static_cast<std::uint64_t>(trials), max_length, grid, window, c.seed);
    csv.row({"trials", "max_length", "eps", "delta", "worst_terminal_norm", "worst_trial",
             "worst_length", "all_below_norm", "all_within_bound"});
    csv.row({std::to_string(res.trials), std::to_string(max_length), cert.eps.str(),
             cert.delta.str(), res.worst_terminal_norm.str(), std::to_string(res.worst_trial),
             std::to_string(res.worst_length), res.all_below_norm_x ? "yes" : "no",
             res.all_within_analytic_bound ? "yes" : "no"});
    c.report << "- no-return certificate: eps " << cert.eps.str() << " from ||x|| "
             << cert.norm_x.str() << ", ||Tx|| " << cert.norm_tx.str() << ", margin "
             << cert.delta.str() << ", contraction bound " << cert.contraction.str() << "\n";
    c.report << "- falsification search: " << res.trials << " chains of length <= "
             << max_length << ", worst terminal norm " << res.worst_terminal_norm.str()
             << " (trial " << res.worst_trial << ", length " << res.worst_length << ")\n";
    if (!res.all_below_norm_x || !res.all_within_analytic_bound) {
      throw CertificateError("a sampled chain violated the no-return certificate");
    }
    return;
  }
  Chain chain;
  if (construction == "isometry_return") {
    const SeqVector x = param_vector(c, "x");
    const Rational eps = param_rational(c, "eps");
    std::optional<std::int64_t> steps;
    if (c.params.contains("steps")) steps = param_int(c, "steps");
    chain = isometry_return_chain(c.op, x, eps, c.norm, steps);
    c.report << "- isometry return chain at " << x.str() << ": " << chain.points.size()
             << " points, tolerance " << chain.epsilon.str() << "\n";
  } else if (construction == "span_connect") {
    const SeqVector x = param_vector(c, "x");
    const Rational lambda = param_rational(c, "lambda");
    const Rational eps = param_rational(c, "eps");
    chain = span_connect_chain(x, lambda, eps, c.op,
                               return_factory(c, param_string_or(c, "returns", "trivial")),
                               c.norm);
    c.report << "- span interpolation chain " << x.str() << " -> " << lambda.str()
             << "*x: " << chain.points.size() << " points, tolerance " << chain.epsilon.str()
             << "\n";
  } else if (construction == "zero_to_point") {
    const SeqVector x = param_vector(c, "x");
    const Rational eps = param_rational(c, "eps");
    chain = zero_to_point_chain(x, eps, c.op,
                                return_factory(c, param_string_or(c, "returns", "trivial")),
                                c.norm);
    c.report << "- chain from 0 to " << x.str() << ": " << chain.points.size()
             << " points, tolerance " << chain.epsilon.str() << "\n";
  } else {
    throw ConfigError("unknown chain construction \"" + construction + "\"");
  }
  emit_chain_csv(csv, chain);
  c.report << "- worst step defect: " << worst_defect(chain).str() << " < "
           << chain.epsilon.str() << "\n";
}

void run_shadow(Context& c) {
  CsvWriter csv(c.csv_path);
  const Rational delta = param_rational(c, "delta");
  const std::string solver = param_string_or(c, "solver", "right_inverse");
  std::vector<SeqVector> points = param_vector_list(c, "points");
  const PseudoOrbit po = validate_pseudo_orbit(c.op, std::move(points), delta, c.norm);
  ShadowCertificate cert;
  if (solver == "right_inverse") {
    cert = shadow_right_inverse(c.op, po, c.norm);
    c.report << "- right-inverse series shadow over horizon " << cert.horizon << "\n";
  } else if (solver == "hyperbolic") {
    cert = shadow_hyperbolic(c.op, po, c.norm);
    c.report << "- hyperbolic split shadow over horizon " << cert.horizon << "\n";
  } else {
    throw ConfigError("unknown solver \"" + solver + "\"");
  }
  csv.row({"n", "point", "defect", "shadow_error"});
  SeqVector cur = cert.shadow;
  for (std::size_t n = 0; n < po.points.size(); ++n) {
    if (n > 0) cur = c.op.apply(cur);
    const std::string defect =
        n + 1 < po.points.size()
            ? space_norm_upper_bound(c.op, c.op.apply(po.points[n]) - po.points[n + 1], c.norm)
                  .str()
            : "";
    csv.row({std::to_string(n), po.points[n].str(), defect,
             space_norm_upper_bound(c.op, cur - po.points[n], c.norm).str()});
  }
  c.report << "- shadow: " << cert.shadow.str() << "\n";
  c.report << "- max error " << cert.max_error.str() << " within analytic bound "
           << cert.analytic_bound.str() << "\n";
}

void run_mixing(Context& c) {
  CsvWriter csv(c.csv_path);
  const SeqVector x = param_vector(c, "x");
  const SeqVector y = param_vector(c, "y");
  const Rational lambda = param_rational(c, "lambda");
  const std::int64_t k_min = param_int_or(c, "k_min", 0);
  const std::int64_t k_max = param_int(c, "k_max");
  if (k_min < 0 || k_max < k_min) throw ConfigError("need 0 <= k_min <= k_max");
  const ConnectFactory factory = connect_factory(c);
  const Ball u{x, lambda};
  const Ball v{y, lambda};
  csv.row({"k", "hitting_time", "witness", "max_error"});
  std::optional<std::int64_t> prev;
  std::int64_t first = 0;
  std::int64_t last = 0;
  for (std::int64_t k = k_min; k <= k_max; ++k) {
    const MixingWitness w = mixing_witness(c.op, u, v, k, factory, c.norm);
    csv.row({std::to_string(k), std::to_string(w.hitting_time), w.z.str(),
             w.certificate.max_error.str()});
    if (prev.has_value() && w.hitting_time != *prev + 1) {
      throw CertificateError("hitting times skip an integer at k = " + std::to_string(k));
    }
    if (!prev.has_value()) first = w.hitting_time;
    last = w.hitting_time;
    prev = w.hitting_time;
  }
  c.report << "- mixing witnesses into ball(" << y.str() << ", " << lambda.str()
           << ") from ball(" << x.str() << ", " << lambda.str() << ")\n";
  c.report << "- hitting times cover the full interval [" << first << ", " << last << "]\n";
}

void run_l1demo(Context& c) {
  CsvWriter csv(c.csv_path);
  const Rational delta = param_rational(c, "delta");
  const std::int64_t n_max = param_int_or(c, "n_max", 200);
  std::vector<Rational> coeffs;
  if (c.params.contains("g")) {
    for (const auto& e : param(c, "g")) {
      if (!e.is_string()) throw ConfigError("polynomial coefficients must be num/den strings");
      coeffs.push_back(Rational::parse(e.get<std::string>()));
    }
  }
  const PolyFunction g(std::move(coeffs));
  const Rational half_delta = delta / Rational(2);
  for (std::int64_t n = 0; n < n_max; ++n) {
    if (!(l1_pseudo_orbit_defect(delta, n) == half_delta)) {
      throw CertificateError("pseudo-orbit defect is not exactly delta/2 at n = " +
                             std::to_string(n));
    }
  }
  c.report << "- multiplication-by-x pseudo orbit: defect exactly " << half_delta.str()
           << " at every step below " << n_max << "\n";
  csv.row({"n", "lower_bound"});
  std::optional<Rational> prev;
  std::optional<std::int64_t> crossing;
  const Rational quarter(1, 4);
  for (std::int64_t n = 1; n <= n_max; ++n) {
    const Rational b = l1_nonshadowability_bound(delta, n, g);
    if (prev.has_value() && !(b > *prev)) {
      throw CertificateError("separation bound fails to increase at n = " + std::to_string(n));
    }
    if (!crossing.has_value() && b > quarter) crossing = n;
    csv.row({std::to_string(n), b.str()});
    prev = b;
  }
  c.report << "- separation lower bound is strictly increasing over [1, " << n_max << "]\n";
  if (crossing.has_value()) {
    c.report << "- bound exceeds 1/4 at n = " << *crossing << "\n";
  } else {
    c.report << "- bound never exceeds 1/4 within the window\n";
  }
  if (!c.params.contains("require_crossing") || param(c, "require_crossing").get<bool>()) {
    if (!crossing.has_value()) {
      throw CertificateError("separation bound never exceeded 1/4 within the window");
    }
  }
}

void run_fhc(Context& c) {
  CsvWriter csv(c.csv_path);
  const std::int64_t cap = param_int(c, "P");
  DenseSeq dense = [](std::int64_t p) { return dense_seq_element(p); };
  if (c.params.contains("targets")) {
    auto targets = param_vector_list(c, "targets");
    if (static_cast<std::int64_t>(targets.size()) != cap + 1) {
      throw ConfigError("targets list must have exactly P+1 vectors");
    }
    dense = [targets](std::int64_t p) { return targets.at(static_cast<std::size_t>(p)); };
  }
  std::optional<std::int64_t> horizon = c.horizon;
  if (!horizon.has_value() && c.params.contains("horizon")) {
    horizon = param_int(c, "horizon");
  }
  const FhcCertificate cert =
      construct_fhc_vector(c.op, dense, cap, horizon, connect_factory(c), c.norm);
  c.report << "- schedule: period " << cert.schedule.period << ", block sizes";
  for (const auto n : cert.schedule.block_sizes) c.report << " " << n;
  c.report << ", offsets";
  for (const auto a : cert.schedule.offsets) c.report << " " << a;
  c.report << "\n";
  c.report << "- horizon " << cert.horizon << ", ||z|| <= " << cert.z_norm.str() << " < 2\n";
  for (const auto& r : cert.classes) {
    c.report << "- class " << r.p << ": target " << r.target.str() << ", delta "
             << r.delta_p.str() << ", half-length " << r.rp << ", ||z_p|| <= "
             << r.zp_norm.str() << " < " << r.eps_p.str() << ", shadow error "
             << r.shadow_max_error.str() << ", worst block-midpoint error "
             << r.worst_orbit_sum_error.str() << " over " << r.orbit_sum_checks
             << " checks, worst off-block norm " << r.worst_off_block_norm.str() << " over "
             << r.off_block_checks << " checks\n";
  }
  for (const auto& v : cert.visits) {
    c.report << "- class " << v.p << " visits ball(x_p, " << v.radius.str() << ") "
             << v.visits.size() << " times (density " << v.density.str()
             << "), all scheduled times realized\n";
  }
  csv.row({"class", "time", "expected", "visited"});
  for (const auto& v : cert.visits) {
    std::set<std::int64_t> expected(v.expected.begin(), v.expected.end());
    std::set<std::int64_t> seen(v.visits.begin(), v.visits.end());
    for (std::int64_t n = 1; n <= cert.horizon; ++n) {
      csv.row({std::to_string(v.p), std::to_string(n), expected.count(n) ? "1" : "0",
               seen.count(n) ? "1" : "0"});
    }
  }
}

std::vector<SeqVector> certify_orbit(const Context& c, Rng& rng, const Rational& delta,
                                     std::int64_t length, std::int64_t den,
                                     std::int64_t start_window, std::int64_t start_budget,
                                     std::int64_t defect_window) {
  const std::int64_t defect_budget = floor_to_int64(delta * Rational(den));
  std::vector<SeqVector> pts;
  pts.push_back(random_grid_vector(rng, 0, start_window, start_budget, den, c.op.domain()));
  for (std::int64_t n = 0; n < length; ++n) {
    SeqVector next = c.op.apply(pts.back());
    next.add_scaled(Rational(1),
                    random_grid_vector(rng, 0, defect_window, defect_budget, den,
                                       c.op.domain()));
    pts.push_back(std::move(next));
  }
  return pts;
}

void run_certify(Context& c) {
  const Rational delta = param_rational(c, "delta");
  const std::int64_t count = param_int_or(c, "count", 100);
  const std::int64_t length = c.horizon.value_or(param_int_or(c, "length", 50));
  const std::int64_t den = param_int_or(c, "grid_denominator", 16);
  const std::int64_t start_window = param_int_or(c, "start_window", 6);
  const std::int64_t start_budget = param_int_or(c, "start_budget", 8);
  const std::int64_t defect_window = param_int_or(c, "defect_window", 8);
  if (count < 1 || length < 1 || den < 1) throw ConfigError("certify sizes must be positive");
  {
    CsvWriter csv(c.csv_path);
    csv.row({"trial", "delta", "horizon", "max_error", "analytic_bound", "shadow"});
    Rng rng(c.seed);
    Rational worst(0);
    for (std::int64_t t = 0; t < count; ++t) {
      std::vector<SeqVector> pts = certify_orbit(c, rng, delta, length, den, start_window,
                                                 start_budget, defect_window);
      const PseudoOrbit po = validate_pseudo_orbit(c.op, std::move(pts), delta, c.norm);
      const ShadowCertificate cert = shadow_right_inverse(c.op, po, c.norm);
      if (worst < cert.max_error) worst = cert.max_error;
      csv.row({std::to_string(t), delta.str(), std::to_string(length), cert.max_error.str(),
               cert.analytic_bound.str(), cert.shadow.str()});
    }
    csv.close();
    c.report << "- " << count << " seeded pseudo orbits at delta " << delta.str()
             << ", horizon " << length << "\n";
    c.report << "- worst max error " << worst.str() << " within the analytic bound\n";
  }
  // Re-verification from disk: parse the emitted certificates, regenerate the
  // same orbits from the seed, and re-iterate every shadow independently.
  const auto rows = read_csv(c.csv_path);
  if (static_cast<std::int64_t>(rows.size()) != count + 1) {
    throw CertificateError("emitted certificate table has the wrong row count");
  }
  Rng rng(c.seed);
  for (std::int64_t t = 0; t < count; ++t) {
    const auto& row = rows[static_cast<std::size_t>(t) + 1];
    if (row.size() != 6) throw CertificateError("malformed certificate row");
    const std::vector<SeqVector> pts = certify_orbit(c, rng, delta, length, den, start_window,
                                                     start_budget, defect_window);
    const SeqVector shadow = SeqVector::parse(row[5], c.op.domain());
    const Rational claimed_err = Rational::parse(row[3]);
    const Rational claimed_bound = Rational::parse(row[4]);
    const Rational recomputed = recompute_max_error(c.op, shadow, pts, c.norm);
    if (!(recomputed == claimed_err)) {
      throw CertificateError("re-verification mismatch at trial " + std::to_string(t) +
                             ": recomputed " + recomputed.str() + ", claimed " +
                             claimed_err.str());
    }
    if (!(recomputed <= claimed_bound)) {
      throw CertificateError("re-verified error exceeds the analytic bound at trial " +
                             std::to_string(t));
    }
  }
  c.report << "- all " << count << " certificates re-verified from disk\n";
}

Context load(const RunOptions& o) {
  std::ifstream in(o.config_path);
  if (!in) throw ConfigError("cannot read config file " + o.config_path);
  std::stringstream buf;
  buf << in.rdbuf();
  json doc;
  try {
    doc = json::parse(buf.str());
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed config: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (key != "operator" && key != "command" && key != "norm" && key != "params" &&
        key != "seed" && key != "horizon") {
      throw ConfigError("unknown config key \"" + key + "\"");
    }
  }
  if (!doc.contains("operator")) throw ConfigError("config misses the \"operator\" spec");
  Context c;
  c.op = operator_from_config_text(doc.at("operator").dump());
  c.norm = norm_kind_from_string(doc.value("norm", std::string("1")));
  c.params = doc.value("params", json::object());
  if (doc.contains("command") && doc.at("command").get<std::string>() != o.command) {
    throw ConfigError("config names command \"" + doc.at("command").get<std::string>() +
                      "\" but \"" + o.command + "\" was invoked");
  }
  if (o.seed.has_value()) {
    c.seed = *o.seed;
  } else if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_unsigned() && !doc.at("seed").is_number_integer()) {
      throw ConfigError("seed must be an integer");
    }
    c.seed = doc.at("seed").get<std::uint64_t>();
  }
  if (o.horizon.has_value()) {
    c.horizon = *o.horizon;
  } else if (doc.contains("horizon")) {
    c.horizon = doc.at("horizon").get<std::int64_t>();
  }
  c.csv_path = o.out_dir + "/certificates.csv";
  c.report << "# lindyn report\n\n";
  c.report << "command: " << o.command << "\n";
  c.report << "operator: " << operator_to_config_text(c.op) << "\n";
  c.report << "norm: " << to_string(c.norm) << "\n";
  c.report << "seed: " << c.seed << "\n";
  c.report << "params: " << c.params.dump() << "\n\n";
  c.report << "## checks\n";
  return c;
}

}  // namespace

RunResult run_experiment(const RunOptions& o) {
  RunResult result;
  std::optional<Context> ctx;
  try {
    std::filesystem::create_directories(o.out_dir);
    ctx = load(o);
    Context& c = *ctx;
    if (o.command == "chains") {
      run_chains(c);
    } else if (o.command == "shadow") {
      run_shadow(c);
    } else if (o.command == "mixing") {
      run_mixing(c);
    } else if (o.command == "l1demo") {
      run_l1demo(c);
    } else if (o.command == "fhc") {
      run_fhc(c);
    } else if (o.command == "certify") {
      run_certify(c);
    } else {
      throw ConfigError("unknown command \"" + o.command + "\"");
    }
    c.report << "\nAll certificates verified.\n";
  } catch (const CertificateError& e) {
    result = {1, e.what()};
  } catch (const ChainError& e) {
    result = {1, e.what()};
  } catch (const PseudoOrbitError& e) {
    result = {1, e.what()};
  } catch (const CapabilityError& e) {
    result = {3, e.what()};
  } catch (const Error& e) {
    result = {2, e.what()};
  } catch (const std::exception& e) {
    result = {2, e.what()};
  }
  std::ostringstream fallback;
  std::ostringstream& report = ctx.has_value() ? ctx->report : fallback;
  if (result.exit_code != 0) report << "\nFAILED: " << result.message << "\n";
  std::ofstream rep(o.out_dir + "/report.md", std::ios::binary);
  if (rep) rep << report.str();
  return result;
}

}  // namespace lindyn
