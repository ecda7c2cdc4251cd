#include "gwa/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gwa::io {

namespace {

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_real(const std::string& s, std::size_t line) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size())
    throw std::invalid_argument("grid csv line " + std::to_string(line) + ": not a number '" + s + "'");
  return v;
}

Json real_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string grid_function_csv(const GridFunction<double>& f) {
  const auto& d = f.domain();
  std::string s = "# box=";
  for (int a = 0; a < d.dim(); ++a)
    s += (a ? "," : "") + format_real(d.lower()[a]) + "," + format_real(d.upper()[a]);
  s += " cells=";
  for (int a = 0; a < d.dim(); ++a) s += (a ? "," : "") + std::to_string(d.points()[a]);
  s += d.dim() == 1 ? "\nx,re,im\n" : "\nx,y,re,im\n";
  for (Index i = 0; i < f.size(); ++i) {
    const auto c = d.center(i);
    for (int a = 0; a < d.dim(); ++a) s += format_real(c[a]) + ",";
    s += format_real(f[i].real()) + "," + format_real(f[i].imag()) + "\n";
  }
  return s;
}

GridFunction<double> parse_grid_function_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line.rfind("# box=", 0) != 0)
    throw std::invalid_argument("grid csv line 1: expected '# box=... cells=...'");
  const auto space = line.find(" cells=");
  if (space == std::string::npos) throw std::invalid_argument("grid csv line 1: missing cells=");
  const auto box = split(line.substr(6, space - 6), ',');
  const auto cells = split(line.substr(space + 7), ',');
  if (box.size() != 2 * cells.size() || (cells.size() != 1 && cells.size() != 2))
    throw std::invalid_argument("grid csv line 1: box and cells disagree in dimension");
  const int dim = static_cast<int>(cells.size());
  BoxDomain<double>::RealVector lo(dim), hi(dim);
  IndexVector n(dim);
  for (int a = 0; a < dim; ++a) {
    lo[a] = parse_real(box[2 * a], 1);
    hi[a] = parse_real(box[2 * a + 1], 1);
    n[a] = static_cast<Index>(parse_real(cells[a], 1));
  }
  const BoxDomain<double> dom(lo, hi, n);
  std::getline(in, line);  // column header
  GridFunction<double>::Values v(dom.size());
  Index k = 0;
  std::size_t lineno = 2;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cols = split(line, ',');
    if (cols.size() != static_cast<std::size_t>(dim + 2))
      throw std::invalid_argument("grid csv line " + std::to_string(lineno) + ": expected " +
                                  std::to_string(dim + 2) + " columns");
    if (k >= dom.size()) throw std::invalid_argument("grid csv: more rows than cells");
    v[k++] = {parse_real(cols[dim], lineno), parse_real(cols[dim + 1], lineno)};
  }
  if (k != dom.size()) throw std::invalid_argument("grid csv: fewer rows than cells");
  return GridFunction<double>(dom, v);
}

std::string curve_csv(const NormReport<double>& report) {
  std::string s = "eps,inner_norm,weighted_term\n";
  for (const auto& c : report.curve)
    s += format_real(c.eps) + "," + format_real(c.inner_norm) + "," + format_real(c.weighted_term) + "\n";
  return s;
}

std::string control_csv(const ControlFunction<double>& cf) {
  const int dim = cf.source.dim();
  std::string s = dim == 1 ? "x,control_value\n" : "x,y,control_value\n";
  for (Index k = 0; k < cf.size(); ++k) {
    const auto x = cf.anchor_point(k);
    for (int a = 0; a < dim; ++a) s += format_real(x[a]) + ",";
    s += format_real(cf.values[k]) + "\n";
  }
  return s;
}

std::string growth_csv(const std::vector<GrowthPoint>& growth) {
  std::string s = "T,log_T,norm\n";
  for (const auto& g : growth) s += format_real(g.T) + "," + format_real(g.log_T) + "," + format_real(g.norm) + "\n";
  return s;
}

std::string check_csv(const CheckResult& result) {
  std::string s = "entry";
  for (const auto& c : result.columns) s += "," + c;
  s += "\n";
  for (const auto& row : result.details) {
    s += row.entry;
    for (double v : row.values) s += "," + format_real(v);
    s += "\n";
  }
  return s;
}

Json to_json(const NormReport<double>& report) {
  Json j;
  j["value"] = real_or_null(report.value);
  j["argmax_eps"] = real_or_null(report.argmax_eps);
  j["refined"] = report.refined;
  j["curve_points"] = report.curve.size();
  return j;
}

Json to_json(const CheckResult& result) {
  Json j;
  j["name"] = result.name;
  j["verdict"] = to_string(result.verdict);
  j["worst_case"] = {{"entry", result.worst_case.entry}, {"margin", real_or_null(result.worst_case.margin)}};
  j["estimated_constant"] = real_or_null(result.estimated_constant);
  Json measured = Json::object();
  for (const auto& [k, v] : result.measured) measured[k] = real_or_null(v);
  j["measured"] = measured;
  j["rows"] = result.details.size();
  j["notes"] = result.notes;
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::filesystem::path emit_plotdata(const NormReport<double>& report, const std::filesystem::path& dir) {
  const auto path = dir / "curve.csv";
  write_text(path, curve_csv(report));
  return path;
}

std::filesystem::path emit_plotdata(const ControlFunction<double>& cf, const std::filesystem::path& dir) {
  const auto path = dir / "control.csv";
  write_text(path, control_csv(cf));
  return path;
}

std::filesystem::path emit_plotdata(const std::vector<GrowthPoint>& growth, const std::filesystem::path& dir) {
  const auto path = dir / "growth.csv";
  write_text(path, growth_csv(growth));
  return path;
}

}  // namespace gwa::io
