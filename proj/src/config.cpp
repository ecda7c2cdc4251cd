#include "gwa/config.hpp"

#include "gwa/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <set>

namespace gwa {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::optional<double> to_real(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::size_t used = 0;
  try {
    const double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::optional<long> to_integer(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::size_t used = 0;
  try {
    const long v = std::stol(s, &used);
    if (used != s.size()) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::vector<double> numbers(std::string_view list, const char* what) {
  std::vector<double> out;
  for (const auto& part : split(list, ',')) {
    const auto v = to_real(part);
    if (!v) throw std::invalid_argument(std::string(what) + ": '" + part + "' is not a finite number");
    out.push_back(*v);
  }
  return out;
}

std::pair<std::string, std::string> split_sampler(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos)
    throw std::invalid_argument("sampler '" + std::string(spec) + "' must look like name:arguments");
  return {trim(spec.substr(0, colon)), trim(spec.substr(colon + 1))};
}

double radial(const Point<double>& x, double c) { return (x.array() - c).matrix().norm(); }

}  // namespace

const char* to_string(Subcommand s) {
  switch (s) {
    case Subcommand::Norm: return "norm";
    case Subcommand::Grand: return "grand";
    case Subcommand::Amalgam: return "amalgam";
    case Subcommand::Maximal: return "maximal";
    case Subcommand::Verify: return "verify";
  }
  return "?";
}

std::optional<Subcommand> parse_subcommand(std::string_view s) {
  for (Subcommand c : {Subcommand::Norm, Subcommand::Grand, Subcommand::Amalgam, Subcommand::Maximal,
                       Subcommand::Verify})
    if (s == to_string(c)) return c;
  return std::nullopt;
}

double RunConfig::real(const std::string& key, double fallback) const {
  const auto it = parameters.find(key);
  return it == parameters.end() ? fallback : *to_real(it->second);
}

long RunConfig::integer(const std::string& key, long fallback) const {
  const auto it = parameters.find(key);
  return it == parameters.end() ? fallback : *to_integer(it->second);
}

std::string RunConfig::text(const std::string& key, const std::string& fallback) const {
  const auto it = parameters.find(key);
  return it == parameters.end() ? fallback : it->second;
}

std::vector<double> RunConfig::reals(const std::string& key) const {
  const auto it = parameters.find(key);
  return it == parameters.end() ? std::vector<double>{} : numbers(it->second, key.c_str());
}

std::vector<long> RunConfig::integers(const std::string& key) const {
  std::vector<long> out;
  for (double v : reals(key)) out.push_back(static_cast<long>(v));
  return out;
}

ConfigError::ConfigError(std::vector<std::string> diagnostics)
    : std::runtime_error([&] {
        std::string s = "invalid configuration";
        for (const auto& d : diagnostics) s += "\n  " + d;
        return s;
      }()),
      diagnostics_(std::move(diagnostics)) {}

std::vector<std::string> config_keys(Subcommand s) {
  std::vector<std::string> keys = {"subcommand"};
  if (s != Subcommand::Verify) keys.insert(keys.end(), {"f", "box", "cells"});
  switch (s) {
    case Subcommand::Norm: keys.insert(keys.end(), {"p", "w"}); break;
    case Subcommand::Grand:
      keys.insert(keys.end(), {"p", "theta", "variant", "a", "eps_grid", "eps_count", "min_eps", "refine"});
      break;
    case Subcommand::Amalgam:
      keys.insert(keys.end(), {"local", "global", "p", "q", "theta", "variant", "a", "b", "window", "stride",
                               "eps_count", "min_eps"});
      break;
    case Subcommand::Maximal: keys.insert(keys.end(), {"radii", "max_radius", "probe"}); break;
    case Subcommand::Verify: keys.insert(keys.end(), {"checks", "cells", "box_half", "per_family"}); break;
  }
  keys.insert(keys.end(), {"output_dir", "seed"});
  return keys;
}

std::vector<ConfigEntry> config_entries(std::string_view text) {
  std::vector<ConfigEntry> out;
  std::vector<std::string> problems;
  std::size_t lineno = 0, start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    std::string_view line = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    const std::string t = trim(line);
    if (!t.empty()) {
      const auto eq = t.find('=');
      const std::string origin = "line " + std::to_string(lineno);
      if (eq == std::string::npos || trim(std::string_view(t).substr(0, eq)).empty())
        problems.push_back(origin + ": expected 'key = value'");
      else
        out.push_back({trim(std::string_view(t).substr(0, eq)), trim(std::string_view(t).substr(eq + 1)), origin});
    }
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  if (!problems.empty()) throw ConfigError(problems);
  return out;
}

RunConfig parse_config(std::string_view text) { return build_config(config_entries(text)); }

namespace {

struct Validator {
  std::vector<std::string> problems;
  std::map<std::string, std::string> origin;

  void fail(const std::string& key, const std::string& msg) {
    const auto it = origin.find(key);
    const std::string where = it == origin.end() ? "config" : it->second;
    problems.push_back(where + ": key '" + key + "': " + msg);
  }

  std::string got(const RunConfig& c, const std::string& key) { return " (got " + c.text(key, "") + ")"; }

  void real(const RunConfig& c, const std::string& key, const std::function<bool(double)>& ok, const char* rule) {
    if (!c.has(key)) return;
    const auto v = to_real(c.text(key, ""));
    if (!v) return fail(key, "not a finite number" + got(c, key));
    if (!ok(*v)) fail(key, std::string(rule) + got(c, key));
  }

  void integer(const RunConfig& c, const std::string& key, long min, const char* rule) {
    if (!c.has(key)) return;
    const auto v = to_integer(c.text(key, ""));
    if (!v) return fail(key, "not an integer" + got(c, key));
    if (*v < min) fail(key, std::string(rule) + got(c, key));
  }

  void choice(const RunConfig& c, const std::string& key, std::initializer_list<const char*> options) {
    if (!c.has(key)) return;
    const std::string v = c.text(key, "");
    std::string list;
    for (const char* o : options) {
      if (v == o) return;
      list += (list.empty() ? "" : "|") + std::string(o);
    }
    fail(key, "must be one of " + list + got(c, key));
  }

  std::vector<double> list(const RunConfig& c, const std::string& key) {
    try {
      return c.reals(key);
    } catch (const std::invalid_argument& e) {
      fail(key, e.what());
      return {};
    }
  }
};

}  // namespace

RunConfig build_config(const std::vector<ConfigEntry>& entries) {
  Validator v;
  RunConfig c;

  std::string sub;
  for (const auto& e : entries)
    if (e.key == "subcommand") {
      sub = e.value;
      v.origin["subcommand"] = e.origin;
    }
  if (sub.empty()) {
    v.problems.push_back("config: missing required key 'subcommand' (norm|grand|amalgam|maximal|verify)");
  } else if (!(c.subcommand = parse_subcommand(sub))) {
    v.fail("subcommand", "must be one of norm|grand|amalgam|maximal|verify (got " + sub + ")");
  }

  std::set<std::string> allowed;
  if (c.subcommand)
    for (const auto& k : config_keys(*c.subcommand)) allowed.insert(k);
  for (const auto& e : entries) {
    if (e.key == "subcommand") continue;
    if (c.subcommand && !allowed.count(e.key)) {
      v.problems.push_back(e.origin + ": unknown key '" + e.key + "' for subcommand " + to_string(*c.subcommand));
      continue;
    }
    v.origin[e.key] = e.origin;
    if (e.key == "f") {
      c.input = e.value;
    } else if (e.key == "output_dir") {
      c.output_dir = e.value;
    } else if (e.key == "seed") {
      const auto s = to_integer(e.value);
      if (!s || *s < 0)
        v.fail("seed", "must be a non-negative integer (got " + e.value + ")");
      else
        c.seed = static_cast<std::uint64_t>(*s);
    } else {
      c.parameters[e.key] = e.value;
    }
  }
  if (!c.subcommand) throw ConfigError(v.problems);
  const Subcommand s = *c.subcommand;

  if (c.output_dir.empty()) v.fail("output_dir", "must not be empty");

  // Data: f, box, cells.
  int dim = 0;
  if (s != Subcommand::Verify) {
    const bool from_file = c.input.rfind("csv:", 0) == 0;
    if (c.input.empty()) {
      v.problems.push_back("config: missing required key 'f'");
    } else if (from_file) {
      if (!std::filesystem::exists(c.input.substr(4))) v.fail("f", "file not found: " + c.input.substr(4));
      if (c.has("box") || c.has("cells")) v.fail("f", "box and cells come from the csv file; do not set them");
    }
    if (!from_file) {
      if (!c.has("box")) v.problems.push_back("config: missing required key 'box'");
      if (!c.has("cells")) v.problems.push_back("config: missing required key 'cells'");
      const auto box = v.list(c, "box");
      const auto cells = v.list(c, "cells");
      if (c.has("box") && box.size() != 2 && box.size() != 4)
        v.fail("box", "needs lo,hi or lo,hi,lo,hi" + v.got(c, "box"));
      for (std::size_t a = 0; a + 1 < box.size(); a += 2)
        if (!(box[a + 1] > box[a])) v.fail("box", "upper bound must exceed lower bound" + v.got(c, "box"));
      if (c.has("cells")) {
        if (cells.size() * 2 != box.size()) v.fail("cells", "one count per box axis" + v.got(c, "cells"));
        for (double n : cells)
          if (!(n >= 2) || n != std::floor(n)) v.fail("cells", "counts must be integers >= 2" + v.got(c, "cells"));
      }
      dim = static_cast<int>(box.size() / 2);
      if (!c.input.empty()) {
        try {
          const auto sampler = parse_function_sampler(c.input);
          if (dim > 0) {
            Point<double> x(dim);
            for (int a = 0; a < dim; ++a) x[a] = box[2 * a];
            (void)sampler(x);
          }
        } catch (const std::invalid_argument& e) {
          v.fail("f", e.what());
        }
      }
    }
  }

  for (const char* w : {"w", "a", "b"}) {
    if (!c.has(w)) continue;
    try {
      (void)parse_weight_sampler(c.text(w, ""));
    } catch (const std::invalid_argument& e) {
      v.fail(w, e.what());
    }
  }

  const bool local_grand = c.text("local", "grand") == "grand";
  const bool global_grand = c.text("global", "grand") == "grand";
  switch (s) {
    case Subcommand::Norm:
      v.real(c, "p", [](double p) { return p >= 1; }, "p must satisfy p >= 1");
      break;
    case Subcommand::Grand:
    case Subcommand::Amalgam: {
      const bool p_grand = s == Subcommand::Grand || local_grand;
      if (p_grand)
        v.real(c, "p", [](double p) { return p > 1; }, "p must satisfy p > 1");
      else
        v.real(c, "p", [](double p) { return p >= 1; }, "p must satisfy p >= 1");
      if (global_grand)
        v.real(c, "q", [](double q) { return q > 1; }, "q must satisfy q > 1");
      else
        v.real(c, "q", [](double q) { return q >= 1; }, "q must satisfy q >= 1");
      v.real(c, "theta", [](double t) { return t > 0; }, "theta must satisfy theta > 0");
      v.choice(c, "variant", {"over_p", "full"});
      v.choice(c, "eps_grid", {"geometric", "linear"});
      v.choice(c, "refine", {"true", "false"});
      v.choice(c, "local", {"classical", "grand"});
      v.choice(c, "global", {"classical", "grand"});
      v.integer(c, "eps_count", 1, "eps_count must be >= 1");
      const auto p = to_real(c.text("p", "2")), q = to_real(c.text("q", "2"));
      double top = p ? *p - 1 : 1;
      if (s == Subcommand::Amalgam && q && global_grand) top = local_grand ? std::min(top, *q - 1) : *q - 1;
      v.real(c, "min_eps", [top](double e) { return e > 0 && e <= top; }, "min_eps must satisfy 0 < min_eps <= p-1");
      v.real(c, "window", [](double x) { return x > 0; }, "window must be > 0");
      v.real(c, "stride", [](double x) { return x > 0; }, "stride must be > 0");
      break;
    }
    case Subcommand::Maximal: {
      v.choice(c, "radii", {"all", "dyadic"});
      v.integer(c, "max_radius", 1, "max_radius must be >= 1");
      const auto probes = v.list(c, "probe");
      const auto box = c.has("box") ? v.list(c, "box") : std::vector<double>{};
      if (!probes.empty() && dim != 1 && !box.empty()) v.fail("probe", "probes need a 1-D box");
      if (box.size() == 2)
        for (double x : probes)
          if (!(x >= box[0] && x <= box[1])) v.fail("probe", "probe outside the box" + v.got(c, "probe"));
      break;
    }
    case Subcommand::Verify: {
      v.integer(c, "per_family", 1, "per_family must be >= 1");
      v.real(c, "box_half", [](double x) { return x > 0; }, "box_half must be > 0");
      for (double n : v.list(c, "cells"))
        if (!(n >= 8) || n != std::floor(n)) v.fail("cells", "levels must be integers >= 8" + v.got(c, "cells"));
      if (c.has("checks") && c.text("checks", "") != "all")
        for (const auto& name : split(c.text("checks", ""), ','))
          if (std::find(check_names().begin(), check_names().end(), name) == check_names().end())
            v.fail("checks", "unknown check '" + name + "'");
      break;
    }
  }
  if (!v.problems.empty()) throw ConfigError(v.problems);
  return c;
}

std::string emit_config(const RunConfig& c) {
  std::string s;
  if (!c.subcommand) return s;
  for (const auto& k : config_keys(*c.subcommand)) {
    if (k == "subcommand") {
      s += "subcommand = " + std::string(to_string(*c.subcommand)) + "\n";
    } else if (k == "f") {
      if (!c.input.empty()) s += "f = " + c.input + "\n";
    } else if (k == "output_dir") {
      s += "output_dir = " + c.output_dir + "\n";
    } else if (k == "seed") {
      s += "seed = " + std::to_string(c.seed) + "\n";
    } else if (c.has(k)) {
      s += k + " = " + c.text(k, "") + "\n";
    }
  }
  return s;
}

FunctionSampler parse_function_sampler(std::string_view spec) {
  const auto [name, args] = split_sampler(spec);
  const std::string what = "sampler " + name;
  if (name == "const") {
    const auto v = numbers(args, what.c_str());
    if (v.size() != 1) throw std::invalid_argument("const takes one value");
    const double c = v[0];
    return [c](const Point<double>&) { return std::complex<double>(c); };
  }
  if (name == "indicator") {
    const auto v = numbers(args, what.c_str());
    if (v.size() != 2 && v.size() != 4) throw std::invalid_argument("indicator takes lo,hi[,lo,hi]");
    return [v](const Point<double>& x) {
      if (static_cast<std::size_t>(x.size()) * 2 != v.size())
        throw std::invalid_argument("indicator bounds do not match the box dimension");
      for (Index a = 0; a < x.size(); ++a)
        if (x[a] < v[2 * a] || x[a] > v[2 * a + 1]) return std::complex<double>(0);
      return std::complex<double>(1);
    };
  }
  if (name == "gaussian") {
    const auto v = numbers(args, what.c_str());
    if (v.size() != 2 || !(v[1] > 0)) throw std::invalid_argument("gaussian takes center,sigma with sigma > 0");
    return [c = v[0], s = v[1]](const Point<double>& x) {
      const double r = radial(x, c);
      return std::complex<double>(std::exp(-r * r / (2 * s * s)));
    };
  }
  if (name == "ramp") {
    const auto v = numbers(args, what.c_str());
    if (v.size() != 2 || !(v[1] > v[0])) throw std::invalid_argument("ramp takes lo,hi with hi > lo");
    return [lo = v[0], hi = v[1]](const Point<double>& x) {
      return std::complex<double>(x[0] < lo || x[0] > hi ? 0.0 : (x[0] - lo) / (hi - lo));
    };
  }
  if (name == "bump") {
    const auto v = numbers(args, what.c_str());
    if ((v.size() != 2 && v.size() != 3) || !(v[1] > 0))
      throw std::invalid_argument("bump takes center,radius[,xi] with radius > 0");
    const double xi = v.size() == 3 ? v[2] : 0;
    return [c = v[0], r = v[1], xi](const Point<double>& x) {
      const double t = radial(x, c) / r;
      if (t >= 1) return std::complex<double>(0);
      return std::exp(1 - 1 / (1 - t * t)) * std::polar(1.0, xi * x.sum());
    };
  }
  throw std::invalid_argument("unknown sampler '" + name + "' (const|indicator|gaussian|ramp|bump|csv)");
}

WeightSampler parse_weight_sampler(std::string_view spec) {
  const auto [name, args] = split_sampler(spec);
  const std::string what = "weight " + name;
  const auto v = numbers(args, what.c_str());
  if (v.size() != 1) throw std::invalid_argument(what + " takes one value");
  const double k = v[0];
  if (name == "const") {
    if (!(k > 0)) throw std::invalid_argument("const weight must be > 0");
    return [k](const Point<double>&) { return k; };
  }
  if (name == "exp") return [k](const Point<double>& x) { return std::exp(k * x.norm()); };
  if (name == "power") return [k](const Point<double>& x) { return std::pow(1 + x.norm(), k); };
  throw std::invalid_argument("unknown weight '" + name + "' (const|exp|power)");
}

}  // namespace gwa
