#include "cli/cli.hpp"

#include <algorithm>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tamura/cz_engine.hpp"
#include "tamura/ellipsoid_spectrum.hpp"
#include "tamura/exact_field.hpp"
#include "tamura/sh_compare.hpp"
#include "tamura/tamura_partitions.hpp"
#include "tamura/weights.hpp"

namespace tamura::cli {

namespace {

using json = nlohmann::json;

/// Bad flag values discovered after parsing; reported like a parse error.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CommonOptions {
  std::string format = "json";
};

struct CzOptions {
  std::vector<double> freqs;
  double duration = 0.0;
  bool analytic = false;
  bool numeric = false;
  bool both = false;
  int samples = 4096;
  Tolerances tol;
};

struct FieldOptions {
  long d = 2;
  std::string weights;
  std::int64_t max_degree = 20;
  std::int64_t limit = 0;
  std::string mode = "tamura";
  bool cross_check = false;
  bool owners = false;
};

json half_integer_json(const HalfInteger& h) {
  if (h.is_integer()) return h.to_integer();
  return h.to_string();
}

json strings(std::span<const QuadIrrational> values) {
  json out = json::array();
  for (const auto& v : values) out.push_back(v.to_string());
  return out;
}

std::vector<QuadIrrational> parse_weights(const FieldOptions& opt) {
  std::optional<FieldContext> field;
  try {
    field.emplace(opt.d);
  } catch (const FieldError& e) {
    throw UsageError(std::string("--d: ") + e.what());
  }
  std::vector<QuadIrrational> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t stop = opt.weights.find(';', start);
    const std::string piece = opt.weights.substr(start, stop == std::string::npos ? std::string::npos : stop - start);
    try {
      out.push_back(field->parse(piece));
    } catch (const ParseError& e) {
      throw UsageError("--weights \"" + piece + "\": " + e.what());
    }
    if (stop == std::string::npos) break;
    start = stop + 1;
  }
  return out;
}

WeightTuple weight_tuple(std::vector<QuadIrrational> weights) {
  try {
    return WeightTuple(std::move(weights));
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--weights: ") + e.what());
  }
}

void emit(std::ostream& out, const json& doc) { out << doc.dump(2) << '\n'; }

void require_not_csv(const CommonOptions& common) {
  if (common.format == "csv") throw UsageError("csv output is only available for spectrum and sh");
}

int hypothesis_failure(const HypothesisViolation& e, const CommonOptions& common, std::ostream& out,
                       std::ostream& err) {
  err << e.what() << '\n';
  if (common.format == "json") {
    emit(out, json{{"error", "hypothesis violation"},
                   {"pair", {e.witness().j, e.witness().k}},
                   {"ratio", e.witness().ratio.to_string()}});
  }
  return kHypothesis;
}

int run_cz(const CzOptions& opt, const CommonOptions& common, std::ostream& out) {
  require_not_csv(common);
  if (!(opt.duration > 0.0)) throw UsageError("--duration must be positive");
  if (opt.freqs.empty()) throw UsageError("--freqs needs at least one value");
  for (double f : opt.freqs) {
    if (!(f > 0.0)) throw UsageError("--freqs values must be positive");
  }
  if (opt.samples < 3) throw UsageError("--samples must be >= 3");
  const bool want_analytic = opt.analytic || opt.both || !opt.numeric;
  const bool want_numeric = opt.numeric || opt.both || !opt.analytic;

  json doc = json::object();
  std::optional<HalfInteger> analytic;
  std::optional<HalfInteger> numeric;
  std::string error;
  if (want_analytic) {
    analytic = cz_rotation_analytic(opt.freqs, opt.duration);
    doc["analytic"] = half_integer_json(*analytic);
  }
  if (want_numeric) {
    try {
      numeric = cz_index(RotationPath(opt.freqs, opt.duration).path(opt.samples), opt.tol);
      doc["numeric"] = half_integer_json(*numeric);
    } catch (const CzError& e) {
      error = e.what();
      doc["numeric"] = nullptr;
      doc["error"] = error;
    }
  }
  int code = kOk;
  if (want_numeric && !numeric) {
    code = kNumericInconclusive;
  } else if (analytic && numeric) {
    doc["agree"] = *analytic == *numeric;
    if (*analytic != *numeric) code = kOracleDisagreement;
  }

  if (common.format == "json") {
    emit(out, doc);
  } else {
    if (analytic) out << "analytic index: " << analytic->to_string() << '\n';
    if (numeric) out << "numeric index:  " << numeric->to_string() << '\n';
    if (!error.empty()) out << "numeric engine: " << error << '\n';
    if (doc.contains("agree")) out << "agree: " << (doc["agree"].get<bool>() ? "yes" : "no") << '\n';
  }
  return code;
}

int run_spectrum(const FieldOptions& opt, const CommonOptions& common, std::ostream& out, std::ostream& err) {
  const Ellipsoid e(weight_tuple(parse_weights(opt)));
  std::vector<ReebOrbit> orbits;
  try {
    orbits = spectrum(e, opt.max_degree);
  } catch (const HypothesisViolation& v) {
    return hypothesis_failure(v, common, out, err);
  }

  std::vector<IndexCrossCheck> checks;
  int code = kOk;
  if (opt.cross_check) {
    for (const ReebOrbit& o : orbits) {
      checks.push_back(cross_check_index(e, o.family, o.iterate));
      if (checks.back().status == CrossCheckStatus::disagree) code = kOracleDisagreement;
      if (checks.back().status == CrossCheckStatus::inconclusive && code == kOk) code = kNumericInconclusive;
    }
  }

  if (common.format == "json") {
    json list = json::array();
    for (std::size_t i = 0; i < orbits.size(); ++i) {
      const ReebOrbit& o = orbits[i];
      json row{{"j", o.family}, {"n", o.iterate}, {"cz", o.cz}, {"period_coeff", o.period_coefficient.to_string()}};
      if (opt.cross_check) {
        row["numeric"] = checks[i].numeric ? half_integer_json(*checks[i].numeric) : json(nullptr);
        row["cross_check"] = to_string(checks[i].status);
      }
      list.push_back(std::move(row));
    }
    emit(out, json{{"d", opt.d},
                   {"weights", strings(e.weights().weights())},
                   {"max_degree", opt.max_degree},
                   {"orbits", std::move(list)}});
  } else if (common.format == "csv") {
    out << "j,n,cz,period_coeff" << (opt.cross_check ? ",numeric,cross_check" : "") << '\n';
    for (std::size_t i = 0; i < orbits.size(); ++i) {
      const ReebOrbit& o = orbits[i];
      out << o.family << ',' << o.iterate << ',' << o.cz << ',' << o.period_coefficient;
      if (opt.cross_check) {
        out << ',' << (checks[i].numeric ? checks[i].numeric->to_string() : "") << ','
            << to_string(checks[i].status);
      }
      out << '\n';
    }
  } else {
    for (std::size_t i = 0; i < orbits.size(); ++i) {
      const ReebOrbit& o = orbits[i];
      out << "gamma_" << o.family << "^" << o.iterate << "  cz=" << o.cz << "  period=pi*(" << o.period_coefficient
          << ")";
      if (opt.cross_check) out << "  numeric: " << to_string(checks[i].status);
      out << '\n';
    }
  }
  return code;
}

json verdict_json(const PartitionReport& report, bool naive_scan) {
  json doc = json::object();
  if (const auto* c = std::get_if<Collision>(&report.verdict)) {
    doc["verdict"] = "collision";
    doc["witness"] = {{"value", c->value},
                      {"first", {{"j", c->family}, {"n", c->iterate}}},
                      {"second", {{"j", c->other_family}, {"n", c->other_iterate}}}};
  } else if (const auto* g = std::get_if<Gap>(&report.verdict)) {
    doc["verdict"] = "gap";
    doc["witness"] = {{"value", g->value}};
  } else {
    doc["verdict"] = naive_scan ? "no_witness" : "partition";
  }
  return doc;
}

json owner_sets(const PartitionReport& report, std::size_t families) {
  std::vector<std::vector<std::int64_t>> sets(families);
  for (std::size_t i = 0; i < report.owners.size(); ++i) {
    if (report.owners[i] != 0) sets[report.owners[i] - 1].push_back(static_cast<std::int64_t>(i) + 1);
  }
  return sets;
}

int run_partition(const FieldOptions& opt, const CommonOptions& common, std::ostream& out, std::ostream& err) {
  require_not_csv(common);
  if (opt.limit < 1) throw UsageError("--limit must be >= 1");
  std::vector<QuadIrrational> weights = parse_weights(opt);
  const ScanOptions scan{opt.owners, ScanMethod::automatic};

  json doc;
  PartitionReport report;
  std::size_t families = weights.size();
  bool naive = false;
  try {
    if (opt.mode == "tamura") {
      report = verify_partition(weight_tuple(std::move(weights)), opt.limit, scan);
      doc = verdict_json(report, false);
    } else if (opt.mode == "beatty-pair") {
      if (weights.size() != 1) throw UsageError("--mode beatty-pair takes exactly one weight (alpha)");
      RayleighReport r = rayleigh_pair(weights.front(), opt.limit, scan);
      const auto one = FieldContext(opt.d).one();
      report = r.partition;
      families = 2;
      doc = verdict_json(report, false);
      doc["alpha"] = r.alpha.to_string();
      doc["beta"] = r.beta.to_string();
      doc["reciprocal_sum_is_one"] = one / r.alpha + one / r.beta == one;
    } else {
      if (weights.size() < 3) throw UsageError("--mode uspensky needs at least three weights");
      naive = true;
      report = uspensky_scan(weight_tuple(std::move(weights)).weights(), opt.limit, scan);
      doc = verdict_json(report, true);
    }
  } catch (const HypothesisViolation& v) {
    return hypothesis_failure(v, common, out, err);
  } catch (const BeattyParameterError& e) {
    err << e.what() << '\n';
    if (common.format == "json") emit(out, json{{"error", "hypothesis violation"}, {"detail", e.what()}});
    return kHypothesis;
  }
  doc["mode"] = opt.mode;
  doc["limit"] = opt.limit;
  if (opt.owners) doc["sets"] = owner_sets(report, families);

  if (common.format == "json") {
    emit(out, doc);
  } else {
    if (doc.contains("beta")) out << "alpha = " << doc["alpha"].get<std::string>() << ", beta = "
                                  << doc["beta"].get<std::string>() << '\n';
    out << (naive && report.is_partition() ? "no witness <= " + std::to_string(opt.limit) : report.describe())
        << '\n';
  }
  return report.is_partition() ? kOk : kViolation;
}

int run_sh(const FieldOptions& opt, const CommonOptions& common, std::ostream& out, std::ostream& err) {
  if (opt.max_degree < 0) throw UsageError("--max-degree must be >= 0");
  const Ellipsoid e(weight_tuple(parse_weights(opt)));
  std::optional<ShComparison> cmp;
  try {
    cmp = compare_sh(e, opt.max_degree);
  } catch (const HypothesisViolation& v) {
    return hypothesis_failure(v, common, out, err);
  }
  const auto gutt = cmp->gutt.multiplicities();
  const auto formula = cmp->formula.multiplicities();

  if (common.format == "json") {
    json doc{{"m", e.dimension()},
             {"weights", strings(e.weights().weights())},
             {"window", {cmp->gutt.k_min(), cmp->gutt.k_max()}},
             {"gutt", std::vector<std::int64_t>(gutt.begin(), gutt.end())},
             {"formula", std::vector<std::int64_t>(formula.begin(), formula.end())},
             {"verdict", cmp->equal() ? "equal" : "different"}};
    if (cmp->first_difference) {
      doc["first_difference"] = {{"degree", cmp->first_difference->degree},
                                 {"gutt", cmp->first_difference->gutt},
                                 {"formula", cmp->first_difference->formula}};
    }
    emit(out, doc);
  } else if (common.format == "csv") {
    out << "degree,gutt,formula\n";
    for (std::int64_t k = cmp->gutt.k_min(); k <= cmp->gutt.k_max(); ++k) {
      out << k << ',' << cmp->gutt.at(k) << ',' << cmp->formula.at(k) << '\n';
    }
  } else {
    out << "orbit count support:   ";
    for (auto k : cmp->gutt.support()) out << ' ' << k;
    out << "\nclosed formula support:";
    for (auto k : cmp->formula.support()) out << ' ' << k;
    out << '\n';
    if (cmp->equal()) {
      out << "equal on [0.." << opt.max_degree << "]\n";
    } else {
      const auto& d = *cmp->first_difference;
      out << "first difference at degree " << d.degree << ": orbit count " << d.gutt << ", formula " << d.formula
          << '\n';
    }
  }
  return cmp->equal() ? kOk : kViolation;
}

void add_format(CLI::App* sub, CommonOptions& common) {
  sub->add_option("--format", common.format, "Output format")
      ->check(CLI::IsMember({"json", "text", "csv"}))
      ->capture_default_str();
}

void add_field(CLI::App* sub, FieldOptions& opt) {
  sub->add_option("--d", opt.d, "Radicand d of the field Q(sqrt(d))")->capture_default_str();
  sub->add_option("--weights", opt.weights, "Weights separated by ';', e.g. \"1;sqrt(2)\"")->required();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Conley-Zehnder indices, ellipsoid Reeb spectra and Tamura partitions"};
  app.name("tamura");
  app.require_subcommand(1);

  CommonOptions common;
  CzOptions cz;
  FieldOptions field;

  CLI::App* cz_cmd = app.add_subcommand("cz", "Conley-Zehnder index of a rotation path");
  cz_cmd->add_option("--freqs", cz.freqs, "Rotation frequencies alpha_1,...,alpha_n")->delimiter(',')->required();
  cz_cmd->add_option("--duration", cz.duration, "Path duration T_end")->required();
  auto* analytic = cz_cmd->add_flag("--analytic", cz.analytic, "Closed-form engine only");
  auto* numeric = cz_cmd->add_flag("--numeric", cz.numeric, "Crossing-form engine only");
  auto* both = cz_cmd->add_flag("--both", cz.both, "Both engines and their agreement (default)");
  analytic->excludes(numeric)->excludes(both);
  numeric->excludes(both);
  cz_cmd->add_option("--samples", cz.samples, "Samples of sigma_min along the path")->capture_default_str();
  cz_cmd->add_option("--tol-kernel", cz.tol.kernel, "Kernel threshold on singular values")->capture_default_str();
  cz_cmd->add_option("--tol-accept", cz.tol.accept, "Upper end of the ambiguous band")->capture_default_str();
  cz_cmd->add_option("--tol-eig", cz.tol.eigen, "Crossing-form eigenvalue threshold")->capture_default_str();
  add_format(cz_cmd, common);

  CLI::App* spectrum_cmd = app.add_subcommand("spectrum", "Reeb orbits of an ellipsoid up to a degree");
  add_field(spectrum_cmd, field);
  spectrum_cmd->add_option("--max-degree", field.max_degree, "Largest Conley-Zehnder index")->capture_default_str();
  spectrum_cmd->add_flag("--cross-check", field.cross_check, "Recompute each index with the crossing-form engine");
  add_format(spectrum_cmd, common);

  CLI::App* partition_cmd = app.add_subcommand("partition", "Partition checks up to a bound");
  add_field(partition_cmd, field);
  partition_cmd->add_option("--limit", field.limit, "Bound N of the range [1..N]")->required();
  partition_cmd->add_option("--mode", field.mode, "tamura | beatty-pair | uspensky")
      ->check(CLI::IsMember({"tamura", "beatty-pair", "uspensky"}))
      ->capture_default_str();
  partition_cmd->add_flag("--owners", field.owners, "Include the members of each set");
  add_format(partition_cmd, common);

  CLI::App* sh_cmd = app.add_subcommand("sh", "Orbit-count degree vector against the closed formula");
  add_field(sh_cmd, field);
  sh_cmd->add_option("--max-degree", field.max_degree, "Upper end of the degree window [0..K]")->required();
  add_format(sh_cmd, common);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kUsage;
  }

  try {
    if (app.got_subcommand(cz_cmd)) return run_cz(cz, common, out);
    if (app.got_subcommand(spectrum_cmd)) return run_spectrum(field, common, out, err);
    if (app.got_subcommand(partition_cmd)) return run_partition(field, common, out, err);
    return run_sh(field, common, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace tamura::cli
