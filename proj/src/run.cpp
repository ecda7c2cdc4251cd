#include "gwa/run.hpp"

#include "gwa/amalgam.hpp"
#include "gwa/io.hpp"
#include "gwa/maximal.hpp"
#include "gwa/norms.hpp"
#include "gwa/verify.hpp"

#include <filesystem>
#include <ostream>

namespace gwa {

namespace {

namespace fs = std::filesystem;
using io::Json;

GridFunction<double> load_input(const RunConfig& c) {
  if (c.input.rfind("csv:", 0) == 0) return io::parse_grid_function_csv(io::read_text(c.input.substr(4)));
  const auto box = c.reals("box");
  const auto cells = c.integers("cells");
  const int dim = static_cast<int>(cells.size());
  BoxDomain<double>::RealVector lo(dim), hi(dim);
  IndexVector n(dim);
  for (int a = 0; a < dim; ++a) {
    lo[a] = box[2 * a];
    hi[a] = box[2 * a + 1];
    n[a] = cells[a];
  }
  return build(BoxDomain<double>(lo, hi, n), parse_function_sampler(c.input));
}

Weight<double> load_weight(const RunConfig& c, const std::string& key, const BoxDomain<double>& dom) {
  if (!c.has(key)) return Weight<double>::ones(dom);
  return build_weight(dom, parse_weight_sampler(c.text(key, "")));
}

GrandVariant variant_of(const RunConfig& c) {
  return c.text("variant", "over_p") == "full" ? GrandVariant::ExponentFull : GrandVariant::ExponentOverP;
}

EpsGrid<double> eps_grid(const RunConfig& c, double p) {
  const Index count = c.integer("eps_count", EpsGrid<double>::kDefaultCount);
  const double min_eps = c.real("min_eps", (p - 1) * EpsGrid<double>::kDefaultMinFraction);
  if (c.text("eps_grid", "geometric") == "linear") return EpsGrid<double>::linear(p, count, min_eps);
  return EpsGrid<double>::geometric(p, count, min_eps);
}

GrandParams<double> grand_params(const RunConfig& c, double p, const Weight<double>& w) {
  GrandParams<double> gp(p, w, c.real("theta", 1.0), variant_of(c), eps_grid(c, p));
  gp.refine = c.text("refine", "true") == "true";
  gp.validate();
  return gp;
}

Json base_summary(const RunConfig& c) {
  Json j;
  j["subcommand"] = to_string(*c.subcommand);
  j["seed"] = c.seed;
  return j;
}

void write_summary(const fs::path& dir, const Json& j) { io::write_text(dir / "summary.json", io::dump(j)); }

int run_norm(const RunConfig& c, const GridFunction<double>& f, const fs::path& dir, std::ostream& out) {
  const double p = c.real("p", 2.0);
  const double value = weighted_lp_norm(f, p, load_weight(c, "w", f.domain()));
  Json j = base_summary(c);
  j["p"] = p;
  j["value"] = value;
  write_summary(dir, j);
  out << "value = " << io::format_real(value) << "\n";
  return kExitOk;
}

int run_grand(const RunConfig& c, const GridFunction<double>& f, const fs::path& dir, std::ostream& out) {
  const GrandParams<double> gp = grand_params(c, c.real("p", 2.0), load_weight(c, "a", f.domain()));
  const NormReport<double> r = grand_norm(f, gp);
  Json j = base_summary(c);
  j["p"] = gp.p;
  j["theta"] = gp.theta;
  j["variant"] = to_string(gp.variant);
  j["report"] = io::to_json(r);
  write_summary(dir, j);
  io::emit_plotdata(r, dir);
  out << "value = " << io::format_real(r.value) << "\nargmax_eps = " << io::format_real(r.argmax_eps) << "\n";
  return kExitOk;
}

int run_amalgam(const RunConfig& c, const GridFunction<double>& f, const fs::path& dir, std::ostream& out) {
  const auto& dom = f.domain();
  AmalgamRecipe shape;
  shape.window = c.real("window", 1.0);
  shape.stride = c.real("stride", shape.window / 2);
  auto space = [&](const std::string& kind_key, const std::string& exp_key, const std::string& weight_key) {
    const double e = c.real(exp_key, 2.0);
    const Weight<double> w = load_weight(c, weight_key, dom);
    if (c.text(kind_key, "grand") == "classical") return SpaceDescriptor<double>::classical(e, w);
    return SpaceDescriptor<double>::grand(grand_params(c, e, w));
  };
  const AmalgamSpec<double> spec{space("local", "p", "a"), space("global", "q", "b"), shape.window_spec(dom)};
  const auto cf = control_function(f, spec.local, spec.window);
  const NormReport<double> r = amalgam_norm(f, spec);
  Json j = base_summary(c);
  j["local"] = to_string(spec.local.kind());
  j["global"] = to_string(spec.global.kind());
  j["window_cells"] = spec.window.side_cells[0];
  j["stride_cells"] = spec.window.stride_cells[0];
  j["anchors"] = cf.size();
  j["report"] = io::to_json(r);
  write_summary(dir, j);
  io::emit_plotdata(cf, dir);
  io::emit_plotdata(r, dir);
  out << "value = " << io::format_real(r.value) << "\n";
  return kExitOk;
}

int run_maximal(const RunConfig& c, const GridFunction<double>& f, const fs::path& dir, std::ostream& out) {
  const auto& dom = f.domain();
  const Index max_radius = c.integer("max_radius", std::max<Index>(1, dom.points().maxCoeff() / 2));
  const RadiusSet rs =
      c.text("radii", "all") == "dyadic" ? RadiusSet::dyadic(max_radius) : RadiusSet::all(max_radius);
  const auto m = maximal_fast(f, rs);
  std::string table = dom.dim() == 1 ? "x,mf,argmax_radius\n" : "x,y,mf,argmax_radius\n";
  for (Index i = 0; i < m.mf.size(); ++i) {
    const auto x = dom.center(i);
    for (int a = 0; a < dom.dim(); ++a) table += io::format_real(x[a]) + ",";
    table += io::format_real(m.mf[i].real()) + "," + std::to_string(m.argmax_radius[static_cast<std::size_t>(i)]) +
             "\n";
  }
  io::write_text(dir / "maximal.csv", table);
  Json j = base_summary(c);
  j["radii"] = rs.radii_cells.size();
  Json probes = Json::array();
  std::string probe_csv = "x,value\n";
  for (const auto& [x, v] : maximal_tail_profile(f, rs, c.reals("probe"))) {
    probes.push_back({{"x", x}, {"value", v}});
    probe_csv += io::format_real(x) + "," + io::format_real(v) + "\n";
    out << "Mf(" << io::format_real(x) << ") = " << io::format_real(v) << "\n";
  }
  j["probes"] = probes;
  io::write_text(dir / "probes.csv", probe_csv);
  write_summary(dir, j);
  return kExitOk;
}

int run_verify(const RunConfig& c, const fs::path& dir, std::ostream& out) {
  VerifySettings s;
  s.seed = c.seed;
  s.per_family = static_cast<int>(c.integer("per_family", s.per_family));
  s.box_half_width = c.real("box_half", s.box_half_width);
  if (c.has("cells")) {
    s.cells.clear();
    for (long n : c.integers("cells")) s.cells.push_back(n);
  }
  std::vector<std::string> names = check_names();
  if (c.has("checks") && c.text("checks", "") != "all") {
    names.clear();
    std::string list = c.text("checks", "");
    std::size_t start = 0;
    while (start <= list.size()) {
      const auto comma = list.find(',', start);
      std::string name = list.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      name.erase(0, name.find_first_not_of(' '));
      name.erase(name.find_last_not_of(' ') + 1);
      names.push_back(name);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  const VerifyReport report = run_checks(s, names);
  Json j = base_summary(c);
  Json cells = Json::array();
  for (Index n : s.cells) cells.push_back(n);
  j["cells"] = cells;
  Json checks = Json::array();
  for (const auto& r : report.results) {
    checks.push_back(io::to_json(r));
    io::write_text(dir / "checks" / (r.name + ".csv"), io::check_csv(r));
    out << to_string(r.verdict) << " " << r.name << "\n";
  }
  j["checks"] = checks;
  j["any_failed"] = report.any_failed();
  write_summary(dir, j);
  if (!report.growth.empty()) io::emit_plotdata(report.growth, dir);
  return report.any_failed() ? kExitFail : kExitOk;
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (!config.subcommand) {
    err << "error: no subcommand\n";
    return kExitConfig;
  }
  const fs::path dir = config.output_dir;
  // Everything that can be rejected up front is built before any output is written.
  std::optional<GridFunction<double>> f;
  try {
    if (*config.subcommand != Subcommand::Verify) f = load_input(config);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  try {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
    io::write_text(dir / "config.txt", emit_config(config));
    switch (*config.subcommand) {
      case Subcommand::Norm: return run_norm(config, *f, dir, out);
      case Subcommand::Grand: return run_grand(config, *f, dir, out);
      case Subcommand::Amalgam: return run_amalgam(config, *f, dir, out);
      case Subcommand::Maximal: return run_maximal(config, *f, dir, out);
      case Subcommand::Verify: return run_verify(config, dir, out);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace gwa
