#include "app.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>
#include <vector>

#include "jst/counting.hpp"
#include "jst/errors.hpp"
#include "jst/eta.hpp"
#include "jst/grid.hpp"
#include "jst/measures.hpp"
#include "jst/region.hpp"
#include "jst/remote.hpp"
#include "svg.hpp"

namespace jst::cli {

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kMaxX = 100'000'000;

std::string fmt(const char* pattern, double v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::pair<int, int> parse_pair(const std::string& text) {
  int m = 0, n = 0;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%d,%d%c", &m, &n, &tail) != 2 || m < 0 || n < 0) {
    throw UsageError("expected a pair 'm,n' of non-negative integers, got '" + text + "'");
  }
  return {m, n};
}

struct Globals {
  std::string cache_dir;
  std::string out = ".";
  std::string base_url = kDefaultBaseUrl;
  unsigned threads = 0;
  bool seedless = false;

  FormSources sources() const {
    return {cache_dir.empty() ? default_cache_dir() : fs::path(cache_dir), base_url, threads};
  }
  fs::path out_dir() const {
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec || !fs::is_directory(out)) throw UsageError("output directory '" + out + "' is not writable");
    return out;
  }
};

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw UsageError("cannot write '" + path.string() + "'");
  file << content;
  if (!file) throw UsageError("cannot write '" + path.string() + "'");
}

struct RegionOptions {
  std::string region, file, rect, disk, sign_product, dominance, poly_interval;

  void attach(CLI::App* app) {
    app->add_option("--region", region, "region shorthand, e.g. disk:0,0,1 or expr:u-v>0");
    app->add_option("--region-file", file, "region definition file");
    app->add_option("--rect", rect, "a,b,c,d for [a,b] x [c,d]");
    app->add_option("--disk", disk, "cu,cv,r");
    app->add_option("--sign-product", sign_product, "m,n for U_m(u/2) U_n(v/2) > 0");
    app->add_option("--dominance", dominance, "m,n for U_m(u/2) < U_n(v/2)");
    app->add_option("--poly-interval", poly_interval, "P;I;m,n, e.g. 'u*v;(0,inf);2,2'");
  }

  PolynomialRegion build() const {
    std::vector<std::string> specs;
    if (!region.empty()) specs.push_back(region);
    if (!rect.empty()) specs.push_back("rect:" + rect);
    if (!disk.empty()) specs.push_back("disk:" + disk);
    if (!sign_product.empty()) specs.push_back("sign-product:" + sign_product);
    if (!dominance.empty()) specs.push_back("dominance:" + dominance);
    if (!poly_interval.empty()) specs.push_back("poly-interval:" + poly_interval);
    if (specs.size() + !file.empty() != 1) {
      throw UsageError("give exactly one of --region, --region-file, --rect, --disk, --sign-product, "
                       "--dominance, --poly-interval");
    }
    if (!file.empty()) {
      std::ifstream in(file);
      if (!in) throw UsageError("cannot read region file '" + file + "'");
      std::stringstream text;
      text << in.rdbuf();
      return parse_region(text.str());
    }
    return parse_region_shorthand(specs.front());
  }
};

struct SeriesOptions {
  std::string f = "5.4.a.a", g = "6.6.a.a";
  std::uint64_t x_max = 100'000, x_min = 1'000;
  int checkpoints = 20;
  std::vector<std::string> pairs;

  void attach(CLI::App* app, bool with_pairs) {
    app->add_option("--f", f, "first form: built-in label, coefficient file or LMFDB label")->capture_default_str();
    app->add_option("--g", g, "second form")->capture_default_str();
    app->add_option("--x-max", x_max, "largest checkpoint")->capture_default_str();
    app->add_option("--x-min", x_min, "smallest checkpoint")->capture_default_str();
    app->add_option("--checkpoints", checkpoints, "number of geometric checkpoints")->capture_default_str();
    if (with_pairs) app->add_option("--pair", pairs, "m,n (repeatable; default 1,1)");
  }

  std::vector<std::uint64_t> grid() const {
    if (x_max > kMaxX) throw UsageError("--x-max is limited to 10^8");
    return default_checkpoints(x_max, checkpoints, std::min(x_min, x_max));
  }
  std::vector<std::pair<int, int>> pair_list() const {
    std::vector<std::pair<int, int>> out;
    for (const auto& p : pairs) out.push_back(parse_pair(p));
    if (out.empty()) out.emplace_back(1, 1);
    return out;
  }
};

std::string combined_csv(const std::vector<DensityReport>& reports) {
  std::string out = "m,n,";
  out += DensityReport::kCsvHeader;
  out += '\n';
  for (const auto& r : reports) {
    const std::string csv = r.to_csv();
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);  // header
    while (std::getline(lines, line)) out += std::to_string(r.m) + "," + std::to_string(r.n) + "," + line + "\n";
  }
  return out;
}

void print_final(std::ostream& out, const DensityReport& r) {
  const auto& row = r.rows.back();
  out << r.statistic << " (" << r.m << "," << r.n << ")  x = " << row.x << "  pi(x) = " << row.pi_x
      << "  empirical = " << fmt("%.6f", row.emp_density) << "  predicted = " << fmt("%.6f", row.pred_density)
      << "  envelope/pi = " << fmt("%.3e", row.envelope_ratio) << "\n";
}

ChartSeries chart_series(const DensityReport& r) {
  ChartSeries s;
  s.name = "(m,n) = (" + std::to_string(r.m) + "," + std::to_string(r.n) + ")";
  for (const auto& row : r.rows) {
    s.x.push_back(static_cast<double>(row.x));
    s.y.push_back(row.emp_density);
  }
  s.reference = r.rows.empty() ? 0.5 : r.rows.front().pred_density;
  return s;
}

int exit_code(ErrorClass c) {
  switch (c) {
    case ErrorClass::Usage: return kExitUsage;
    case ErrorClass::Data: return kExitData;
    case ErrorClass::Numerical: return kExitNumerical;
  }
  return 1;
}

// --- commands -------------------------------------------------------------------------------

struct ExpandOptions {
  std::string label, eta, output;
  int weight = 0, level = 0;
  std::size_t n = 0;
};

void cmd_expand(const ExpandOptions& o, const Globals& g, std::ostream& out) {
  if (o.n == 0) throw UsageError("expand needs --n >= 1");
  NewformDescriptor d;
  if (!o.eta.empty()) {
    const EtaQuotient q = parse_eta_quotient(o.eta);
    d.eta_recipe = EtaRecipe::single(q);
    d.weight = o.weight ? o.weight : q.exponent_sum() / 2;
    int lcm = 1;
    for (const auto& f : q.factors) lcm = std::lcm(lcm, f.divisor);
    d.level = o.level ? o.level : lcm;
    d.label = o.label.empty() ? std::to_string(d.level) + "." + std::to_string(d.weight) + ".eta" : o.label;
  } else if (!o.label.empty()) {
    auto builtin = builtin_descriptor(o.label);
    if (!builtin) throw UsageError("no eta recipe is known for '" + o.label + "'; use fetch for LMFDB labels");
    d = *builtin;
  } else {
    throw UsageError("expand needs --label or --eta");
  }
  const CoefficientTable t = expand_eta_quotient(d, o.n, g.threads);
  const std::string text = format_coefficient_file(t);
  if (o.output == "-") {
    out << text;
    return;
  }
  const fs::path path = o.output.empty() ? g.out_dir() / (d.label + ".txt") : fs::path(o.output);
  write_file(path, text);
  out << "wrote " << path.string() << " (" << t.bound() << " coefficients of " << d.label << ")\n";
}

struct FetchOptions {
  std::string label;
  std::size_t n = 1000;
};

void cmd_fetch(const FetchOptions& o, const Globals& g, std::ostream& out) {
  RemoteConfig rc;
  rc.base_url = g.base_url;
  rc.cache_dir = g.sources().cache_dir;
  FetchStats stats;
  const CoefficientTable t = fetch_remote(o.label, o.n, rc, &stats);
  out << o.label << ": " << t.bound() << " coefficients in " << cache_path(rc.cache_dir, o.label).string()
      << (stats.cache_hit ? " (cache hit)" : " (downloaded)") << "\n";
}

struct MeasureOptions {
  RegionOptions region;
  double target = 1e-8;
  std::size_t max_cells = 10'000'000;
  bool grid = false;
  int m = 128;
};

void cmd_measure(const MeasureOptions& o, const Globals& g, std::ostream& out) {
  const PolynomialRegion region = o.region.build();
  std::string csv = "method,value,abs_error,lower,upper\n";
  out << "region: " << region.description() << "\n";

  if (o.grid) {
    const auto a = classify_boxes(region, o.m, g.threads);
    out << "grid bracket (m = " << o.m << "): [" << fmt("%.10f", a.mu_low) << ", " << fmt("%.10f", a.mu_high)
        << "]  boundary boxes = " << a.boundary_count << "\n";
    csv += "grid_m" + std::to_string(o.m) + "," + fmt("%.12f", (a.mu_low + a.mu_high) / 2) + "," +
           fmt("%.3e", (a.mu_high - a.mu_low) / 2) + "," + fmt("%.12f", a.mu_low) + "," + fmt("%.12f", a.mu_high) +
           "\n";
  }

  if (o.target < 1e-8) throw DomainError("targets below 1e-8 are not supported");
  const auto q = mu_jst_region_bracket(region, {o.target, o.max_cells});
  if (!q.converged && !g.seedless) {
    throw BudgetError("quadrature reached " + std::to_string(q.cells) + " cells with bracket width " +
                      fmt("%.3e", q.upper - q.lower) + " (use --seedless to accept the bracket)");
  }
  out << "mu_JST = " << fmt("%.12f", q.measure.value) << " +- " << fmt("%.1e", q.measure.abs_error) << "  ["
      << fmt("%.12f", q.lower) << ", " << fmt("%.12f", q.upper) << "]  cells = " << q.cells
      << (q.converged ? "" : "  (budget reached, bracket only)") << "\n";
  csv += "quadrature," + fmt("%.12f", q.measure.value) + "," + fmt("%.3e", q.measure.abs_error) + "," +
         fmt("%.12f", q.lower) + "," + fmt("%.12f", q.upper) + "\n";

  std::optional<double> closed;
  if (!o.region.rect.empty()) {
    double a = 0, b = 0, c = 0, d = 0;
    std::sscanf(o.region.rect.c_str(), "%lf,%lf,%lf,%lf", &a, &b, &c, &d);
    const auto r = mu_jst_rect(Interval::closed(a, b), Interval::closed(c, d));
    closed = r.value;
    out << "closed form (product of Sato-Tate measures) = " << fmt("%.12f", r.value) << "\n";
  }
  if (!o.region.sign_product.empty()) {
    const auto [m, n] = parse_pair(o.region.sign_product);
    closed = d_mn(m, n);
    out << "closed form d_{" << m << "," << n << "} = " << fmt("%.12f", *closed) << "\n";
    if (m == 2 && n == 2) {
      out << "note: the value 0.534... quoted for d_{2,2} in the literature disagrees with both "
             "the closed form and quadrature (0.523761...)\n";
    }
  }
  if (closed) {
    out << "difference = " << fmt("%.2e", q.measure.value - *closed) << "\n";
    csv += "closed_form," + fmt("%.12f", *closed) + ",0," + fmt("%.12f", *closed) + "," + fmt("%.12f", *closed) + "\n";
  }
  write_file(g.out_dir() / "measure.csv", csv);
}

struct BracketOptions {
  RegionOptions region;
  std::vector<int> m{16, 32, 64, 128};
};

void cmd_bracket(const BracketOptions& o, const Globals& g, std::ostream& out) {
  const PolynomialRegion region = o.region.build();
  out << "region: " << region.description() << "  (alpha = " << region.alpha() << ", beta = " << region.beta()
      << ", L = " << fmt("%.4f", region.total_length()) << ")\n";
  std::string csv = "m,mu_low,mu_high,width_times_m,boundary_boxes,boundary_bound,max_strip_components,strip_limit\n";
  for (int m : o.m) {
    const auto a = classify_boxes(region, m, g.threads);
    const auto b = boundary_bound_check(a, region);
    const auto s = strip_merge(a, region.alpha(), region.beta());
    out << "m = " << m << ": [" << fmt("%.10f", a.mu_low) << ", " << fmt("%.10f", a.mu_high)
        << "]  width*m = " << fmt("%.4f", (a.mu_high - a.mu_low) * m) << "  N = " << b.count
        << " <= " << fmt("%.1f", b.bound) << "  max N_j = " << s.max_components << " <= " << s.limit << "\n";
    csv += std::to_string(m) + "," + fmt("%.12f", a.mu_low) + "," + fmt("%.12f", a.mu_high) + "," +
           fmt("%.6f", (a.mu_high - a.mu_low) * m) + "," + std::to_string(b.count) + "," + fmt("%.3f", b.bound) +
           "," + std::to_string(s.max_components) + "," + std::to_string(s.limit) + "\n";
  }
  write_file(g.out_dir() / "bracket.csv", csv);
}

void cmd_series(const SeriesOptions& o, const Globals& g, std::ostream& out, bool dominance) {
  const auto cps = o.grid();
  const auto f = resolve_form(o.f, cps.back(), g.sources());
  const auto h = resolve_form(o.g, cps.back(), g.sources());
  for (auto [m, n] : o.pair_list()) {
    const auto r = dominance ? dominance_density_series(f, h, m, n, cps) : sign_density_series(f, h, m, n, cps);
    const std::string name =
        std::string(dominance ? "dominance_" : "density_") + std::to_string(m) + "_" + std::to_string(n) + ".csv";
    write_file(g.out_dir() / name, r.to_csv());
    print_final(out, r);
  }
}

void cmd_figures(const SeriesOptions& o, const Globals& g, std::ostream& out) {
  const auto cps = o.grid();
  const auto f = resolve_form(o.f, cps.back(), g.sources());
  const auto h = resolve_form(o.g, cps.back(), g.sources());
  const fs::path dir = g.out_dir();
  const std::string pair = f.descriptor().label + " and " + h.descriptor().label;

  std::vector<DensityReport> sign, dom;
  for (auto [m, n] : {std::pair{1, 1}, {2, 2}, {1, 2}}) sign.push_back(sign_density_series(f, h, m, n, cps));
  for (auto [m, n] : {std::pair{1, 3}, {2, 2}, {2, 3}}) dom.push_back(dominance_density_series(f, h, m, n, cps));

  std::vector<ChartSeries> s1, s2;
  for (const auto& r : sign) s1.push_back(chart_series(r));
  for (const auto& r : dom) s2.push_back(chart_series(r));
  write_file(dir / "figure1.csv", combined_csv(sign));
  write_file(dir / "figure1.svg", line_chart_svg("Density of p <= x with a(p^m) a'(p^n) > 0 (" + pair + ")", "x",
                                                 "density", s1));
  write_file(dir / "figure2.csv", combined_csv(dom));
  write_file(dir / "figure2.svg", line_chart_svg("Density of p <= x with a(p^m) < a'(p^n) (" + pair + ")", "x",
                                                 "density", s2));
  for (const auto& r : sign) print_final(out, r);
  for (const auto& r : dom) print_final(out, r);
  out << "wrote figure1.csv, figure1.svg, figure2.csv, figure2.svg to " << dir.string() << "\n";
}

struct FirstSignOptions {
  std::string f = "5.4.a.a", g = "6.6.a.a";
  std::string pair = "1,1";
  std::string exclusion = "both";
  std::size_t bound = 10'000;
  std::optional<double> d;
};

void cmd_first_sign(const FirstSignOptions& o, const Globals& g, std::ostream& out) {
  const auto [m, n] = parse_pair(o.pair);
  const auto f = resolve_form(o.f, o.bound, g.sources());
  const auto h = resolve_form(o.g, o.bound, g.sources());
  std::vector<Exclusion> rules;
  if (o.exclusion == "both") {
    rules = {Exclusion::AllPrimes, Exclusion::ExcludeLevelPrimes};
  } else {
    rules = {parse_exclusion(o.exclusion)};
  }
  for (Exclusion rule : rules) {
    const auto r = first_sign_change(f, h, m, n, rule, o.bound);
    out << to_string(rule) << ": ";
    if (r.prime) {
      out << "p = " << *r.prime << "  A(p) = " << to_string(r.raw) << "  A'(p) = " << to_string(r.raw2)
          << "  a(p^" << m << ") = " << fmt("%.6f", r.value) << "  a'(p^" << n << ") = " << fmt("%.6f", r.value2)
          << "\n";
    } else {
      out << "no sign change for p <= " << r.searched_bound << "\n";
    }
    if (!r.skipped.empty()) {
      out << "  skipped level primes (A(p^m) beyond the table):";
      for (auto p : r.skipped) out << " " << p;
      out << "\n";
    }
  }
  if (o.d) {
    const auto b = theoretical_first_sign_bound(m, n, static_cast<std::uint64_t>(f.weight()),
                                                static_cast<std::uint64_t>(h.weight()),
                                                static_cast<std::uint64_t>(f.level()),
                                                static_cast<std::uint64_t>(h.level()), *o.d);
    out << "theoretical bound (d = " << fmt("%g", *o.d) << "): x = 2^" << b.exponent << " ~ " << fmt("%.4e", b.x)
        << "  (log x = " << fmt("%.4f", b.log_x) << ")\n";
  }
}

}  // namespace

CoefficientTable resolve_form(const std::string& spec, std::size_t n, const FormSources& sources) {
  if (auto d = builtin_descriptor(spec)) return expand_eta_quotient(*d, n, sources.threads);
  std::error_code ec;
  if (fs::is_regular_file(spec, ec)) {
    CoefficientTable t = load_coefficient_file(spec);
    if (t.bound() < n) {
      throw CoverageError("'" + spec + "' holds " + std::to_string(t.bound()) + " coefficients, " +
                          std::to_string(n) + " are needed");
    }
    return t;
  }
  if (!parse_label(spec)) {
    throw UsageError("'" + spec + "' is neither a built-in label, a coefficient file nor an LMFDB label");
  }
  RemoteConfig rc;
  rc.base_url = sources.base_url;
  rc.cache_dir = sources.cache_dir;
  return fetch_remote(spec, n, rc);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Joint Sato-Tate statistics for pairs of newforms"};
  app.name("jst");
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "configuration file of 'key = value' lines; flags override it");

  Globals g;
  app.add_option("--cache-dir", g.cache_dir, std::string("coefficient cache (default $") + kCacheDirEnv + ")");
  app.add_option("--out", g.out, "output directory")->capture_default_str();
  app.add_option("--threads", g.threads, "worker threads, 0 for all cores")->capture_default_str();
  app.add_option("--base-url", g.base_url, "remote coefficient service")->capture_default_str();
  app.add_flag("--seedless", g.seedless,
               "quadrature budget mode: report the certified bracket reached within the cell budget instead of "
               "failing");

  ExpandOptions expand;
  auto* c_expand = app.add_subcommand("expand", "expand an eta quotient into a coefficient file");
  c_expand->add_option("--label", expand.label, "built-in label, or the label written into the file");
  c_expand->add_option("--eta", expand.eta, "eta quotient d:e,d:e,..., e.g. 1:4,5:4");
  c_expand->add_option("--weight", expand.weight, "weight (default: half the exponent sum)");
  c_expand->add_option("--level", expand.level, "level (default: lcm of the d)");
  c_expand->add_option("--n", expand.n, "number of coefficients")->required();
  c_expand->add_option("--output", expand.output, "output file, '-' for stdout (default <out>/<label>.txt)");

  FetchOptions fetch;
  auto* c_fetch = app.add_subcommand("fetch", "download coefficients into the cache");
  c_fetch->add_option("--label", fetch.label, "LMFDB label")->required();
  c_fetch->add_option("--n", fetch.n, "number of coefficients")->capture_default_str();

  MeasureOptions measure;
  auto* c_measure = app.add_subcommand("measure", "joint Sato-Tate measure of a region");
  measure.region.attach(c_measure);
  c_measure->add_option("--target", measure.target, "absolute error target (>= 1e-8)")->capture_default_str();
  c_measure->add_option("--max-cells", measure.max_cells, "quadrature cell budget")->capture_default_str();
  c_measure->add_flag("--grid-bracket", measure.grid, "also report the grid bracket");
  c_measure->add_option("--m", measure.m, "grid resolution for --grid-bracket")->capture_default_str();

  BracketOptions bracket;
  auto* c_bracket = app.add_subcommand("bracket", "grid brackets, boundary-box bound and strip merge");
  bracket.region.attach(c_bracket);
  c_bracket->add_option("--m", bracket.m, "grid resolutions")->capture_default_str();

  SeriesOptions density, dominance, figures;
  auto* c_density = app.add_subcommand("density", "sign densities of a(p^m) a'(p^n)");
  density.attach(c_density, true);
  auto* c_dominance = app.add_subcommand("dominance", "densities of a(p^m) < a'(p^n)");
  dominance.attach(c_dominance, true);
  auto* c_figures = app.add_subcommand("figures", "both figures as CSV and SVG");
  figures.attach(c_figures, false);

  FirstSignOptions first;
  auto* c_first = app.add_subcommand("first-sign", "least prime with a(p^m) a'(p^n) < 0");
  c_first->add_option("--f", first.f, "first form")->capture_default_str();
  c_first->add_option("--g", first.g, "second form")->capture_default_str();
  c_first->add_option("--pair", first.pair, "m,n")->capture_default_str();
  c_first->add_option("--exclusion", first.exclusion, "all, exclude-level or both")->capture_default_str();
  c_first->add_option("--bound", first.bound, "search bound")->capture_default_str();
  c_first->add_option("--d", first.d, "constant d for the theoretical bound");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*c_measure || *c_bracket || *c_density || *c_dominance || *c_figures || (*c_expand && expand.output.empty())) {
      g.out_dir();
    }
    if (*c_expand) cmd_expand(expand, g, out);
    if (*c_fetch) cmd_fetch(fetch, g, out);
    if (*c_measure) cmd_measure(measure, g, out);
    if (*c_bracket) cmd_bracket(bracket, g, out);
    if (*c_density) cmd_series(density, g, out, false);
    if (*c_dominance) cmd_series(dominance, g, out, true);
    if (*c_figures) cmd_figures(figures, g, out);
    if (*c_first) cmd_first_sign(first, g, out);
  } catch (const Error& e) {
    err << "jst: " << e.what() << "\n";
    return exit_code(e.error_class());
  } catch (const fs::filesystem_error& e) {
    err << "jst: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "jst: internal error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}

}  // namespace jst::cli
