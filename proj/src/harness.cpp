#include "qsmin/harness.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "qsmin/dimension.hpp"
#include "qsmin/errors.hpp"
#include "qsmin/measure.hpp"
#include "qsmin/params_io.hpp"

namespace qsmin {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

double num(const Real& x) { return x.convert_to<double>(); }

std::string csv_real(const Real& x) { return format_real(x, 17); }

Rational rational_value(const json& v, const char* key) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number()) return Rational(v.get<double>());
  throw ConfigError(std::string(key) + ": expected a rational string or a number");
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

void write_json(const fs::path& path, const json& doc) { write_text(path, doc.dump(2) + "\n"); }

std::string address_string(const std::vector<int>& address) {
  std::string s;
  for (std::size_t i = 0; i < address.size(); ++i) {
    if (i) s += '.';
    s += std::to_string(address[i]);
  }
  return s.empty() ? "root" : s;
}

ParamSpec params_of(const ExperimentConfig& config, std::optional<int> validate_depth) {
  return normalize_params(raw_params_from_json(config.params), validate_depth);
}

// Depth to validate: every explicit level, otherwise the configured depth.
int validation_depth(const ParamSpec& lazy, const ExperimentConfig& config) {
  return lazy.max_depth().value_or(config.depth);
}

json pq_json(const PqExponents& pq) { return {{"M", num(pq.M)}, {"p", num(pq.p)}, {"q", num(pq.q)}}; }

json box_json(const BoxCountReport& box) {
  json counts = json::array();
  for (auto c : box.counts) counts.push_back(c);
  return {{"scales", box.scales}, {"counts", counts}, {"slope", box.slope}, {"residual", box.residual},
          {"intercept", box.intercept}};
}

std::string loglog_csv(const BoxCountReport& box) {
  std::ostringstream csv;
  csv << "scale,log_inv_eps,count,log_count\n";
  char line[160];
  for (std::size_t i = 0; i < box.scales.size(); ++i) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%llu,%.17g\n", box.scales[i], -std::log(box.scales[i]),
                  static_cast<unsigned long long>(box.counts[i]), std::log(static_cast<double>(box.counts[i])));
    csv << line;
  }
  return csv.str();
}

std::string loglog_svg(const BoxCountReport& box, const std::string& title) {
  const double width = 480;
  const double height = 360;
  const double pad = 48;
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < box.scales.size(); ++i) {
    xs.push_back(-std::log(box.scales[i]));
    ys.push_back(std::log(static_cast<double>(box.counts[i])));
  }
  const auto [xmin_it, xmax_it] = std::minmax_element(xs.begin(), xs.end());
  const auto [ymin_it, ymax_it] = std::minmax_element(ys.begin(), ys.end());
  const double xmin = *xmin_it;
  const double xmax = *xmax_it > xmin ? *xmax_it : xmin + 1;
  const double ymin = std::min(*ymin_it, 0.0);
  const double ymax = *ymax_it > ymin ? *ymax_it : ymin + 1;
  auto px = [&](double x) { return pad + (x - xmin) / (xmax - xmin) * (width - 2 * pad); };
  auto py = [&](double y) { return height - pad - (y - ymin) / (ymax - ymin) * (height - 2 * pad); };

  std::ostringstream svg;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" viewBox=\"0 0 %.0f %.0f\">\n",
                width, height, width, height);
  svg << buf;
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf, "<text x=\"%.0f\" y=\"24\" font-size=\"14\" font-family=\"sans-serif\">%s, slope %.4f</text>\n",
                pad, title.c_str(), box.slope);
  svg << buf;
  std::snprintf(buf, sizeof buf, "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n", pad,
                height - pad, width - pad, height - pad);
  svg << buf;
  std::snprintf(buf, sizeof buf, "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n", pad, pad,
                pad, height - pad);
  svg << buf;
  svg << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%s%.2f,%.2f", i ? " " : "", px(xs[i]), py(ys[i]));
    svg << buf;
  }
  svg << "\"/>\n";
  std::snprintf(buf, sizeof buf,
                "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#d62728\" stroke-dasharray=\"4 3\"/>\n",
                px(xmin), py(box.intercept + box.slope * xmin), px(xmax), py(box.intercept + box.slope * xmax));
  svg << buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"%.0f\" y=\"%.0f\" font-size=\"12\" font-family=\"sans-serif\">log(1/eps)</text>\n",
                width / 2 - 30, height - 12);
  svg << buf;
  svg << "</svg>\n";
  return svg.str();
}

std::vector<Real> requested_scales(const ExperimentConfig& config, const ParamSpec& params) {
  if (!config.scales) return construction_scales(params, config.depth);
  std::vector<Real> out;
  for (const auto& s : *config.scales) out.push_back(to_real(s));
  return out;
}

int cmd_validate(const ExperimentConfig& config, std::ostream& out) {
  const ParamSpec lazy = params_of(config, 0);
  const int depth = validation_depth(lazy, config);

  json levels = json::array();
  bool all_full = true;
  bool all_uniform = true;
  std::optional<Rational> common_nc;
  bool nc_constant = true;
  for (int k = 1; k <= depth; ++k) {
    LevelParams lp;
    try {
      lp = lazy.level(k);
    } catch (const ConsistencyError& e) {
      levels.push_back({{"k", k}, {"status", "inconsistent"}, {"residual", to_string(e.residual())}});
      write_json(config.output / "report.json",
                 {{"valid", false}, {"level", e.level()}, {"residual", to_string(e.residual())}, {"levels", levels}});
      out << "invalid: level " << e.level() << ", residual " << to_string(e.residual()) << "\n";
      throw;
    }
    const Rational nc = lp.ratio * lp.branching;
    if (!common_nc) common_nc = nc;
    nc_constant = nc_constant && *common_nc == nc;
    all_full = all_full && nc == 1;
    const bool uniform = lp.gaps.front() == 0 && lp.gaps.back() == 0 &&
                         std::all_of(lp.gaps.begin() + 1, lp.gaps.end() - 1, [&](const Rational& e) { return e == lp.gaps[1]; });
    all_uniform = all_uniform && uniform;
    Rational total = nc;
    for (const auto& e : lp.gaps) total += e;
    levels.push_back({{"k", k}, {"status", "ok"}, {"n", lp.branching}, {"c", to_string(lp.ratio)},
                      {"n_c", to_string(nc)}, {"identity_sum", to_string(total)}});
  }

  std::string verdict = "valid";
  if (all_full) {
    verdict += ", degenerate (E = [0,1])";
  } else {
    verdict += all_uniform ? ", uniform Cantor" : ", homogeneous perfect";
    if (nc_constant && common_nc) verdict += ", n·c = " + to_string(*common_nc);
  }
  const TailRule tail = lazy.tail_rule();
  const char* tail_names[] = {"explicit-finite", "periodic", "named-family"};
  write_json(config.output / "report.json", {{"valid", true},
                                             {"verdict", verdict},
                                             {"levels_checked", depth},
                                             {"tail_rule", tail_names[static_cast<int>(tail.kind)]},
                                             {"levels", levels}});
  out << verdict << "\n";
  return 0;
}

int cmd_build(const ExperimentConfig& config, std::ostream& out) {
  const ParamSpec params = params_of(config, config.depth);
  const LevelSet level = build_level(params, config.depth);
  std::ostringstream csv;
  csv << "index,address,left,right\n";
  for (std::size_t i = 0; i < level.size(); ++i) {
    csv << i << ',' << address_string(level.address(i)) << ',' << to_string(level.left(i)) << ','
        << to_string(level.right(i)) << '\n';
  }
  write_text(config.output / "intervals.csv", csv.str());
  write_json(config.output / "report.json", {{"level", config.depth},
                                             {"count", level.size()},
                                             {"length", to_string(level.length())},
                                             {"total_length", to_string(level.total_length())}});
  out << level.size() << " intervals of length " << to_string(level.length()) << "\n";
  return 0;
}

int cmd_dim(const ExperimentConfig& config, std::ostream& out) {
  const ParamSpec params = params_of(config, std::nullopt);
  const DimensionReport rep = hausdorff_formula_estimate(params, config.K, config.window, config.precision);
  std::ostringstream csv;
  csv << "k,numerator,denominator_argument,partial_value,denominator_argument_with_end_gaps,partial_value_with_end_gaps\n";
  json partials = json::array();
  for (const auto& pq : rep.partials) {
    csv << pq.k << ',' << csv_real(pq.numerator) << ',' << to_string(pq.argument) << ',' << csv_real(pq.value) << ','
        << to_string(pq.argument_with_end_gaps) << ',' << csv_real(pq.value_with_end_gaps) << '\n';
    partials.push_back({{"k", pq.k}, {"value", num(pq.value)}, {"value_with_end_gaps", num(pq.value_with_end_gaps)}});
  }
  write_text(config.output / "partials.csv", csv.str());
  write_json(config.output / "report.json", {{"K", config.K},
                                             {"window", {rep.window_first, rep.window_last}},
                                             {"estimate", num(rep.estimate)},
                                             {"raw_estimate", num(rep.raw_estimate)},
                                             {"estimate_digits", format_real(rep.raw_estimate, 30)},
                                             {"raw_estimate_with_end_gaps", num(rep.raw_estimate_with_end_gaps)},
                                             {"partials", partials}});
  out << "dimension estimate " << format_real(rep.estimate, 12) << " (window " << rep.window_first << ".."
      << rep.window_last << ")\n";
  return 0;
}

int cmd_boxdim(const ExperimentConfig& config, std::ostream& out) {
  PrecisionScope scope(config.precision);
  const ParamSpec params = params_of(config, config.depth);
  const LevelSet level = build_level(params, config.depth);
  const auto images = image_levelset(config.map, level, config.precision);
  const auto scales = requested_scales(config, params);
  const BoxCountReport box = box_dim_estimate(images, scales);
  write_text(config.output / "loglog.csv", loglog_csv(box));
  if (config.svg) write_text(config.output / "plot.svg", loglog_svg(box, config.map.describe()));
  write_json(config.output / "report.json", {{"map", to_json(config.map)}, {"depth", config.depth}, {"box", box_json(box)}});
  out << "box-counting slope " << box.slope << " (rms residual " << box.residual << ")\n";
  return 0;
}

int cmd_qs_estimate(const ExperimentConfig& config, std::ostream& out) {
  PrecisionScope scope(config.precision);
  const MEstimate est = estimate_M(config.map, config.M_depth, config.precision);
  const PqExponents pq = pq_exponents(est.value);
  write_json(config.output / "report.json", {{"map", to_json(config.map)},
                                             {"sweep_depth", est.depth},
                                             {"M_hat", num(est.value)},
                                             {"M_hat_digits", format_real(est.value, 30)},
                                             {"witness_scale", est.witness_scale},
                                             {"witness_index", est.witness_index},
                                             {"exponents", pq_json(pq)}});
  out << "M_hat = " << format_real(est.value, 12) << " at sweep depth " << est.depth << "\n";
  return 0;
}

// Dyadic battery: every dyadic I of length 2^-j (j <= 3) with every dyadic
// J inside it of length 2^-(j+m), m = 0..4.
std::vector<NestedPair> dyadic_battery() {
  std::vector<NestedPair> pairs;
  for (int j = 0; j <= 3; ++j) {
    const Rational outer_len(1, 1 << j);
    for (int a = 0; a < (1 << j); ++a) {
      const RationalInterval I{outer_len * a, outer_len * (a + 1)};
      for (int m = 0; m <= 4; ++m) {
        const Rational inner_len = outer_len / (1 << m);
        for (int b = 0; b < (1 << m); ++b) pairs.push_back({{I.left + inner_len * b, I.left + inner_len * (b + 1)}, I});
      }
    }
  }
  return pairs;
}

int cmd_distortion(const ExperimentConfig& config, std::ostream& out) {
  PrecisionScope scope(config.precision);
  const MEstimate est = estimate_M(config.map, config.M_depth, config.precision);
  const Real M = est.value * (1 + to_real(config.M_margin));
  const auto pairs = dyadic_battery();
  const DistortionReport rep = distortion_check(config.map, M, pairs, config.precision);

  std::ostringstream csv;
  csv << "outer_left,outer_right,inner_left,inner_right,length_ratio,lower,image_ratio,upper,lower_slack,upper_slack,pass\n";
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& row = rep.rows[i];
    csv << to_string(pairs[i].outer.left) << ',' << to_string(pairs[i].outer.right) << ','
        << to_string(pairs[i].inner.left) << ',' << to_string(pairs[i].inner.right) << ','
        << csv_real(row.length_ratio) << ',' << csv_real(row.lower) << ',' << csv_real(row.image_ratio) << ','
        << csv_real(row.upper) << ',' << csv_real(row.lower_slack) << ',' << csv_real(row.upper_slack) << ','
        << (row.pass ? 1 : 0) << '\n';
  }
  write_text(config.output / "pairs.csv", csv.str());
  write_json(config.output / "report.json", {{"map", to_json(config.map)},
                                             {"M_hat", num(est.value)},
                                             {"M_used", num(M)},
                                             {"sweep_depth", est.depth},
                                             {"exponents", pq_json(rep.exponents)},
                                             {"pairs", pairs.size()},
                                             {"all_pass", rep.all_pass},
                                             {"min_lower_slack", num(rep.min_lower_slack)},
                                             {"min_upper_slack", num(rep.min_upper_slack)}});
  out << (rep.all_pass ? "all " : "NOT all ") << pairs.size() << " pairs within the distortion bounds, M_hat = "
      << format_real(est.value, 12) << "\n";
  return 0;
}

json constants_json(const ProofConstants& c) {
  return {{"N", c.N}, {"a", num(c.a)}, {"M", num(c.M)}, {"p", num(c.p)},
          {"q", num(c.q)}, {"A", num(c.A)}, {"d", num(c.d)}, {"alpha2", num(c.alpha2)}};
}

json step2_json(const Step2Report& s) {
  return {{"seed", s.seed},
          {"windows_tested", s.samples},
          {"max_count", s.max_count},
          {"count_bound", s.count_bound},
          {"counts_within_bound", s.counts_within_bound},
          {"K_empirical", num(s.K_empirical)},
          {"C_windows", num(s.C_windows)},
          {"C_levels", num(s.C_levels)},
          {"proof_bound", num(s.proof_bound)},
          {"within_proof_bound", s.within_proof_bound}};
}

int cmd_measure(const ExperimentConfig& config, std::ostream& out) {
  PrecisionScope scope(config.precision);
  const ParamSpec params = params_of(config, config.depth);
  auto images = std::make_shared<const ImageHierarchy>(
      build_image_hierarchy(params, config.map, config.depth, config.precision));
  const MEstimate est = estimate_M(config.map, config.M_depth, config.precision);
  const Real M = est.value * (1 + to_real(config.M_margin));
  const Real d = choose_d(pq_exponents(M).q, to_real(config.d_fraction));
  const ProofConstants constants = make_proof_constants(params, config.depth, M, d, config.precision);
  const MassDistribution measure = build_measure(images, d, config.precision);

  // Leftmost, rightmost and seeded random leaf chains.
  std::vector<std::vector<int>> chains;
  chains.emplace_back(images->branching.size(), 1);
  chains.push_back(images->branching);
  UnitSampler sampler(config.seed);
  for (int c = 0; c < 8; ++c) {
    std::vector<int> chain;
    for (int n : images->branching) chain.push_back(1 + static_cast<int>(sampler.next() * n));
    chains.push_back(std::move(chain));
  }

  std::ostringstream csv;
  csv << "chain,address,i,r,running_product\n";
  Real worst_residual = 0;
  bool bounds_hold = true;
  Real min_margin = -1;
  for (std::size_t c = 0; c < chains.size(); ++c) {
    const RProductReport rep = r_products(measure, params, chains[c], constants, config.precision);
    if (rep.identity_residual > worst_residual) worst_residual = rep.identity_residual;
    bounds_hold = bounds_hold && rep.lower_bound_holds;
    const Real margin = rep.running_product.back() / (rep.xi * rep.zeta);
    if (min_margin < 0 || margin < min_margin) min_margin = margin;
    for (std::size_t i = 0; i < rep.r.size(); ++i) {
      csv << c << ',' << address_string(chains[c]) << ',' << i << ',' << csv_real(rep.r[i]) << ','
          << csv_real(rep.running_product[i]) << '\n';
    }
  }
  write_text(config.output / "rchains.csv", csv.str());

  const std::vector<Real> sups = level_sup_ratios(measure);
  const Real r_growth = exp(-log(sups.back()) / config.depth);
  const Step2Report step2 = step2_window_check(measure, d, config.samples, config.seed, config.precision);
  const Real C = std::max(step2.C_levels, step2.C_windows);
  const bool identity_ok = worst_residual <= pow(Real(10), -20);
  const bool pass = step2.counts_within_bound && step2.within_proof_bound && identity_ok && bounds_hold;

  write_json(config.output / "report.json", {{"d", num(d)},
                                             {"C_empirical", num(C)},
                                             {"windows_tested", step2.samples},
                                             {"seed", config.seed},
                                             {"pass", pass},
                                             {"r_growth", num(r_growth)},
                                             {"xi_zeta_margin", num(min_margin)},
                                             {"identity_residual_max", num(worst_residual)},
                                             {"constants", constants_json(constants)},
                                             {"step2", step2_json(step2)}});
  out << "d = " << format_real(d, 10) << ", C_empirical = " << format_real(C, 10) << ", "
      << (pass ? "pass" : "FAIL") << "\n";
  return 0;
}

int cmd_mlema(const ExperimentConfig& config, std::ostream& out) {
  const ParamSpec params = params_of(config, std::nullopt);
  PrecisionScope scope(config.precision);
  const auto seq = mlema_checks(params, config.K, to_real(config.p), to_real(config.eps), config.precision);
  std::ostringstream csv;
  csv << "k,total_length_root,mean_gap_power,large_gap_density\n";
  for (std::size_t i = 0; i < seq.total_length_root.size(); ++i) {
    csv << i + 1 << ',' << csv_real(seq.total_length_root[i]) << ',' << csv_real(seq.mean_gap_power[i]) << ','
        << csv_real(seq.large_gap_density[i]) << '\n';
  }
  write_text(config.output / "mlema.csv", csv.str());
  write_json(config.output / "report.json", {{"K", config.K},
                                             {"p", to_string(config.p)},
                                             {"eps", to_string(config.eps)},
                                             {"total_length_root", num(seq.total_length_root.back())},
                                             {"mean_gap_power", num(seq.mean_gap_power.back())},
                                             {"large_gap_density", num(seq.large_gap_density.back())}});
  out << "(N_k delta_k)^(1/k) = " << format_real(seq.total_length_root.back(), 10)
      << ", mean e_i^p = " << format_real(seq.mean_gap_power.back(), 10)
      << ", density = " << format_real(seq.large_gap_density.back(), 10) << "\n";
  return 0;
}

int cmd_minimality(const ExperimentConfig& config, std::ostream& out) {
  const ParamSpec params = params_of(config, std::nullopt);
  MinimalityOptions opt;
  opt.depth = config.depth;
  opt.digits = config.precision;
  {
    PrecisionScope scope(config.precision);
    opt.d_fraction = to_real(config.d_fraction);
  }
  opt.d_grid = config.d_grid;
  opt.M_depth = config.M_depth;
  opt.M_margin = config.M_margin.convert_to<double>();
  opt.samples = config.samples;
  opt.seed = config.seed;
  const MinimalitySummary s = minimality_experiment(params, config.map, opt);

  json certs = json::array();
  for (const auto& row : s.certificates) {
    certs.push_back({{"d", num(row.d)},
                     {"C_levels", num(row.C_levels)},
                     {"trailing_nonincreasing", row.trailing_nonincreasing},
                     {"C_windows", num(row.windows.C_windows)},
                     {"certified", row.certified}});
  }
  json report = {{"map", to_json(config.map)},
                 {"depth", config.depth},
                 {"formula_estimate", num(s.formula.estimate)},
                 {"hypothesis_met", s.hypothesis_met},
                 {"box", box_json(s.box)},
                 {"box_all_scales", box_json(s.box_all_scales)},
                 {"image_box_dim", s.box.slope},
                 {"M_hat", num(s.M_hat.value)},
                 {"constants", constants_json(s.constants)},
                 {"r_growth_min", num(s.r_growth_min)},
                 {"r_growth_max", num(s.r_growth_max)},
                 {"alpha2", num(s.constants.alpha2)},
                 {"xi_zeta_margin", num(s.xi_zeta_margin)},
                 {"step2", step2_json(s.step2)},
                 {"certificates", certs},
                 {"best_certified_d", s.best_certified_d ? json(num(*s.best_certified_d)) : json(nullptr)}};
  if (!s.hypothesis_met) report["warning"] = "hypothesis dim_H E = 1 not met";
  write_json(config.output / "report.json", report);
  write_text(config.output / "loglog.csv", loglog_csv(s.box));
  if (config.svg) write_text(config.output / "plot.svg", loglog_svg(s.box, config.map.describe()));

  out << "image box-dim " << s.box.slope << ", best certified d "
      << (s.best_certified_d ? format_real(*s.best_certified_d, 6) : std::string("none"));
  if (!s.hypothesis_met) out << " [hypothesis dim_H E = 1 not met]";
  out << "\n";
  return 0;
}

}  // namespace

ExperimentConfig load_config(const json& doc, const fs::path& base_dir) {
  if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
  ExperimentConfig cfg;
  try {
    if (auto it = doc.find("params"); it != doc.end()) {
      cfg.params = it->is_string() ? read_json_file(base_dir / it->get<std::string>()) : *it;
    } else if (auto f = doc.find("params_file"); f != doc.end()) {
      cfg.params = read_json_file(base_dir / f->get<std::string>());
    } else {
      throw ConfigError("configuration lacks \"params\"");
    }
    if (auto it = doc.find("map"); it != doc.end()) cfg.map = qsmap_from_json(*it);
    if (doc.contains("depth")) cfg.depth = doc.at("depth").get<int>();
    if (doc.contains("precision")) cfg.precision = doc.at("precision").get<int>();
    if (doc.contains("d_fraction")) cfg.d_fraction = rational_value(doc.at("d_fraction"), "d_fraction");
    if (auto it = doc.find("scales"); it != doc.end()) {
      if (it->is_string()) {
        if (it->get<std::string>() != "construction") throw ConfigError("scales must be \"construction\" or a list");
      } else {
        std::vector<Rational> s;
        for (const auto& v : *it) s.push_back(rational_value(v, "scales"));
        cfg.scales = std::move(s);
      }
    }
    if (doc.contains("seed")) cfg.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("output")) cfg.output = doc.at("output").get<std::string>();
    if (doc.contains("K")) cfg.K = doc.at("K").get<int>();
    if (doc.contains("window")) cfg.window = doc.at("window").get<int>();
    if (doc.contains("M_depth")) cfg.M_depth = doc.at("M_depth").get<int>();
    if (doc.contains("M_margin")) cfg.M_margin = rational_value(doc.at("M_margin"), "M_margin");
    if (doc.contains("samples")) cfg.samples = doc.at("samples").get<std::size_t>();
    if (doc.contains("p")) cfg.p = rational_value(doc.at("p"), "p");
    if (doc.contains("eps")) cfg.eps = rational_value(doc.at("eps"), "eps");
    if (doc.contains("d_grid")) cfg.d_grid = doc.at("d_grid").get<std::vector<double>>();
    if (doc.contains("svg")) cfg.svg = doc.at("svg").get<bool>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("configuration: ") + e.what());
  }
  if (cfg.depth < 1) throw ConfigError("depth must be at least 1");
  if (cfg.precision < 15) throw ConfigError("precision must be at least 15 digits");
  if (cfg.d_fraction <= 0 || cfg.d_fraction >= 1) throw ConfigError("d_fraction must lie in (0,1)");
  return cfg;
}

ExperimentConfig load_config_file(const fs::path& path) {
  return load_config(read_json_file(path), path.parent_path());
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"validate", "build",   "dim",  "boxdim",    "qs-estimate",
                                                 "distortion", "measure", "mlema", "minimality"};
  return names;
}

int run_command(const std::string& command, const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  try {
    fs::create_directories(config.output);
    if (command == "validate") return cmd_validate(config, out);
    if (command == "build") return cmd_build(config, out);
    if (command == "dim") return cmd_dim(config, out);
    if (command == "boxdim") return cmd_boxdim(config, out);
    if (command == "qs-estimate") return cmd_qs_estimate(config, out);
    if (command == "distortion") return cmd_distortion(config, out);
    if (command == "measure") return cmd_measure(config, out);
    if (command == "mlema") return cmd_mlema(config, out);
    if (command == "minimality") return cmd_minimality(config, out);
    err << "unknown command \"" << command << "\"\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace qsmin
