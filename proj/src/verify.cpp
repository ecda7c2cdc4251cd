#include "gwa/verify.hpp"

#include "gwa/golden.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace gwa {

namespace {

using Fn = GridFunction<double>;
using Spec = AmalgamSpec<double>;

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::string fmt6(double v) { return fmt("%.6g", v); }

double norm_of(const Fn& f, const Spec& spec) { return amalgam_norm(f, spec).value; }

double rel_error(double got, double want) {
  const double s = std::max(std::abs(got), std::abs(want));
  return s == 0 ? 0 : std::abs(got - want) / s;
}

/// (big - small) / big, 0 when both vanish.
double order_margin(double small, double big) {
  if (big == 0) return small == 0 ? 0 : -1;
  return (big - small) / big;
}

bool is_zero(const Fn& f) { return (f.values() == std::complex<double>(0, 0)).all(); }

Spec with_unit_weights(const Spec& spec, const BoxDomain<double>& dom) {
  return Spec{spec.local.with_weight(Weight<double>::ones(dom)), spec.global.with_weight(Weight<double>::ones(dom)),
              spec.window};
}

std::string level_label(const Corpus& c) { return "cells=" + std::to_string(c.domain().points()[0]); }

/// Concatenates results of one check run at several settings.
CheckResult merge(std::string name, const std::vector<std::pair<std::string, CheckResult>>& parts,
                  bool report_only) {
  CheckResult out;
  out.name = std::move(name);
  out.verdict = report_only ? Verdict::ReportOnly : Verdict::Pass;
  for (const auto& [label, r] : parts) {
    if (out.columns.empty()) out.columns = r.columns;
    if (r.failed()) out.verdict = Verdict::Fail;
    if (r.worst_case.margin < out.worst_case.margin)
      out.worst_case = {label + "/" + r.worst_case.entry, r.worst_case.margin};
    out.estimated_constant = std::max(out.estimated_constant, r.estimated_constant);
    for (const auto& row : r.details) out.details.push_back({label + "/" + row.entry, row.values});
    for (const auto& [k, v] : r.measured) out.measured.emplace_back(label + "/" + k, v);
    for (const auto& n : r.notes) out.notes.push_back(label + ": " + n);
  }
  return out;
}

Point<double> at(double x) { return Point<double>::Constant(1, x); }

double bump(double t) { return std::abs(t) < 1 ? std::exp(1 - 1 / (1 - t * t)) : 0.0; }

}  // namespace

const char* to_string(Family f) {
  switch (f) {
    case Family::Indicator: return "indicator";
    case Family::Gaussian: return "gaussian";
    case Family::Ramp: return "ramp";
    case Family::ModulatedBump: return "modulated_bump";
    case Family::RandomSmooth: return "random_smooth";
  }
  return "?";
}

GridFunction<double> EntryRecipe::sample(const BoxDomain<double>& domain) const {
  if (domain.dim() != 1) throw std::invalid_argument("EntryRecipe: corpus entries are 1-D");
  const EntryRecipe r = *this;
  return build(domain, [r](const Point<double>& p) -> std::complex<double> {
    const double x = p[0];
    const double t = (x - r.center) / r.half_width;
    if (std::abs(t) > 1) return 0.0;
    switch (r.family) {
      case Family::Indicator: return r.amplitude;
      case Family::Gaussian: return r.amplitude * std::exp(-8 * t * t);  // sigma = half_width / 4
      case Family::Ramp: return r.amplitude * (t + 1) / 2;
      case Family::ModulatedBump: return r.amplitude * bump(t) * std::polar(1.0, r.frequency * x);
      case Family::RandomSmooth: {
        std::complex<double> z = 1.5;
        for (int m = 0; m < 3; ++m)
          z += std::complex<double>(r.modes[2 * m], r.modes[2 * m + 1]) *
               std::cos((m + 1) * std::numbers::pi * t + r.frequency);
        return r.amplitude * bump(t) * z;
      }
    }
    return 0.0;
  });
}

std::string EntryRecipe::describe() const {
  std::string s = std::string(to_string(family)) + " center=" + fmt6(center) + " half_width=" + fmt6(half_width) +
                  " amplitude=" + fmt6(amplitude);
  if (family == Family::ModulatedBump || family == Family::RandomSmooth) s += " frequency=" + fmt6(frequency);
  return s;
}

Corpus::Corpus(std::uint64_t seed, BoxDomain<double> domain, std::vector<EntryRecipe> recipes)
    : seed_(seed), domain_(std::move(domain)), recipes_(std::move(recipes)) {
  std::vector<int> counters(5, 0);
  for (const auto& r : recipes_) {
    const int k = counters[static_cast<int>(r.family)]++;
    entries_.push_back({std::string(to_string(r.family)) + "-" + std::to_string(k), r.family, r.describe(),
                        r.sample(domain_)});
  }
}

Corpus Corpus::generate(const BoxDomain<double>& domain, std::uint64_t seed, int per_family) {
  if (domain.dim() != 1) throw std::invalid_argument("Corpus: 1-D domains only");
  if (per_family < 1) throw std::invalid_argument("Corpus: per_family must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0, 1);
  const double mid = (domain.lower()[0] + domain.upper()[0]) / 2;
  const double half = (domain.upper()[0] - domain.lower()[0]) / 2;
  const double inner = half / 2;
  std::vector<EntryRecipe> recipes;
  for (Family fam : {Family::Indicator, Family::Gaussian, Family::Ramp, Family::ModulatedBump, Family::RandomSmooth})
    for (int k = 0; k < per_family; ++k) {
      EntryRecipe r;
      r.family = fam;
      r.half_width = inner * (0.125 + 0.75 * unit(rng));
      r.center = mid + (inner - r.half_width) * (2 * unit(rng) - 1);
      r.amplitude = 0.5 + 1.5 * unit(rng);
      r.frequency = 1 + 7 * unit(rng);
      for (double& m : r.modes) m = 2 * unit(rng) - 1;
      recipes.push_back(r);
    }
  return Corpus(seed, domain, std::move(recipes));
}

Corpus Corpus::from_recipes(const BoxDomain<double>& domain, std::uint64_t seed, std::vector<EntryRecipe> recipes) {
  return Corpus(seed, domain, std::move(recipes));
}

Corpus Corpus::resample(const BoxDomain<double>& domain) const { return Corpus(seed_, domain, recipes_); }

double WeightRecipe::operator()(const Point<double>& x) const {
  const double r = x.norm();
  switch (kind) {
    case Kind::Constant: return parameter;
    case Kind::Exponential: return std::exp(parameter * r);
    case Kind::Power: return std::pow(1 + r, parameter);
  }
  return 1;
}

Weight<double> WeightRecipe::on(const BoxDomain<double>& domain) const {
  const WeightRecipe w = *this;
  return build_weight(domain, [w](const Point<double>& x) { return w(x); });
}

std::string WeightRecipe::describe() const {
  switch (kind) {
    case Kind::Constant: return "const:" + fmt6(parameter);
    case Kind::Exponential: return "exp:" + fmt6(parameter);
    case Kind::Power: return "power:" + fmt6(parameter);
  }
  return "?";
}

WindowSpec AmalgamRecipe::window_spec(const BoxDomain<double>& domain) const {
  WindowSpec w;
  w.side_cells.resize(domain.dim());
  w.stride_cells.resize(domain.dim());
  for (int a = 0; a < domain.dim(); ++a) {
    const Index n = domain.points()[a];
    w.side_cells[a] = std::clamp<Index>(std::lround(window / domain.spacing(a)), 1, n);
    w.stride_cells[a] = std::clamp<Index>(std::lround(stride / domain.spacing(a)), 1, n);
  }
  return w;
}

AmalgamSpec<double> AmalgamRecipe::grand(const BoxDomain<double>& domain) const {
  return Spec{SpaceDescriptor<double>::grand(GrandParams<double>(p, a.on(domain), theta, variant)),
              SpaceDescriptor<double>::grand(GrandParams<double>(q, b.on(domain), theta, variant)),
              window_spec(domain)};
}

AmalgamSpec<double> AmalgamRecipe::classical(const BoxDomain<double>& domain) const {
  return Spec{SpaceDescriptor<double>::classical(p, Weight<double>::ones(domain)),
              SpaceDescriptor<double>::classical(q, Weight<double>::ones(domain)), window_spec(domain)};
}

BoxDomain<double> VerifySettings::domain(std::size_t level) const {
  return BoxDomain<double>::interval(-box_half_width, box_half_width, cells.at(level));
}

Corpus VerifySettings::corpus(std::size_t level) const { return Corpus::generate(domain(level), seed, per_family); }

CheckResult check_norm_axioms(const Corpus& corpus, const Spec& spec, std::uint64_t seed) {
  CheckRecorder rec("norm_axioms", {"norm", "scale3_ratio", "homogeneity_error", "min_triangle_margin"});
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-2, 2);
  const auto& entries = corpus.entries();

  const double zero = norm_of(Fn::zero(corpus.domain()), spec);
  rec.expect("zero", -zero, 0, "norm of the zero function");

  std::vector<double> norms;
  double worst_homog = 0;
  for (const auto& e : entries) norms.push_back(norm_of(e.f, spec));
  std::vector<double> tri(entries.size(), std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < entries.size(); ++i)
    for (std::size_t j = i + 1; j < entries.size(); ++j) {
      const double sum = norms[i] + norms[j];
      const double m = order_margin(norm_of(entries[i].f + entries[j].f, spec), sum);
      rec.expect(entries[i].id + "+" + entries[j].id, m, kAxiomTol, "triangle inequality");
      tri[i] = std::min(tri[i], m);
      tri[j] = std::min(tri[j], m);
    }

  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    const double n = norms[i];
    rec.expect(e.id, n, 0, "non-negativity");
    rec.expect(e.id, n > 0 || is_zero(e.f) ? 0.0 : -1.0, 0, "definiteness");
    const double r3 = n == 0 ? 0 : norm_of(scale(e.f, {3.0, 0.0}), spec) / n;
    double err = rel_error(r3 * n, 3 * n);
    rec.expect(e.id, -err, kAxiomTol, "homogeneity (lambda = 3)");
    const std::complex<double> lambda(u(rng), u(rng));
    const double errc = rel_error(norm_of(scale(e.f, lambda), spec), std::abs(lambda) * n);
    rec.expect(e.id, -errc, kAxiomTol, "homogeneity (complex lambda)");
    err = std::max(err, errc);
    worst_homog = std::max(worst_homog, err);
    rec.row(e.id, {n, r3, err, tri[i]});
  }
  rec.measure("max_homogeneity_error", worst_homog);
  rec.measure("pairs", static_cast<double>(entries.size() * (entries.size() - 1) / 2));
  return rec.finish();
}

CheckResult check_solidity_and_monotone(const Corpus& corpus, const Spec& spec, std::uint64_t seed) {
  CheckRecorder rec("solidity_and_monotone",
                    {"norm", "half_ratio", "masked_margin", "truncations", "covered_error", "limit_error"});
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0, 1);
  const auto& dom = corpus.domain();
  const double h = dom.spacing(0);
  const double lo = dom.lower()[0], mid = (lo + dom.upper()[0]) / 2;

  for (std::size_t idx = 0; idx < corpus.size(); ++idx) {
    const CorpusEntry& e = corpus.entries()[idx];
    const double n = norm_of(e.f, spec);
    if (n == 0) {
      rec.note(e.id + ": zero norm, skipped");
      continue;
    }
    const double half_ratio = norm_of(scale(e.f, {0.5, 0.0}), spec) / n;
    rec.expect(e.id, -std::abs(half_ratio - 0.5) / 0.5, kAxiomTol, "g = f/2 ratio");

    GridFunction<double>::Values masked = e.f.values();
    for (Index i = 0; i < masked.size(); ++i) masked[i] *= unit(rng);
    const double mm = order_margin(norm_of(Fn(dom, masked), spec), n);
    rec.expect(e.id, mm, kOrderTol, "random mask |g| <= |f|");
    const Fn left = pointwise_product(e.f, indicator(dom, at(lo), at(mid)));
    rec.expect(e.id, order_margin(norm_of(left, spec), n), kOrderTol, "half-box restriction");

    // f_n = f on [mid - r_k, mid + r_k], r_k = k h, growing to the full box.
    const auto [s0, s1] = corpus.recipes()[idx].support();
    double prev = 0, covered_err = 0, last = 0;
    int steps = 0;
    const Index stride = std::max<Index>(1, dom.points()[0] / 32);
    for (Index k = stride; k <= dom.points()[0] / 2; k += stride) {
      const double r = static_cast<double>(k) * h;
      const Fn fn = pointwise_product(e.f, indicator(dom, at(mid - r), at(mid + r)));
      const double v = norm_of(fn, spec);
      rec.expect(e.id, (v - prev) / n, kOrderTol, "truncations increase");
      if (mid - r <= s0 - h && mid + r >= s1 + h) {
        const double err = std::abs(v - n) / n;
        covered_err = std::max(covered_err, err);
        rec.expect(e.id, -err, 0, "truncation equals f once the support is covered");
      }
      prev = last = v;
      ++steps;
    }
    const double limit_err = std::abs(last - n) / n;
    rec.expect(e.id, -limit_err, kLimitTol, "truncation limit");
    rec.row(e.id, {n, half_ratio, mm, static_cast<double>(steps), covered_err, limit_err});
  }
  return rec.finish();
}

CheckResult check_invariance(const Corpus& corpus, const Spec& spec, std::uint64_t seed) {
  CheckRecorder rec("invariance", {"norm", "max_translation_change", "max_modulation_change"});
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-20, 20);
  const auto& dom = corpus.domain();
  const Spec unit = with_unit_weights(spec, dom);
  const Index s = spec.window.stride_cells[0];
  const Index quarter = std::max<Index>(s, dom.points()[0] / 4 / s * s);
  const Index shifts[] = {quarter, -quarter, s, -s};
  int modulations = 0;

  for (const auto& e : corpus.entries()) {
    const double n1 = norm_of(e.f, unit);
    const double t0 = norm_of(translate(e.f, IndexVector::Constant(1, 0)), unit);
    rec.expect(e.id, -rel_error(t0, n1), 0, "zero shift");
    double worst_t = 0;
    Index first = -1, last = -1;
    for (Index i = 0; i < e.f.size(); ++i)
      if (e.f[i] != std::complex<double>(0, 0)) {
        if (first < 0) first = i;
        last = i;
      }
    // Cells left of side - stride lie in fewer windows than interior cells.
    const Index margin_left = std::max<Index>(0, spec.window.side_cells[0] - s);
    auto admissible = [&](Index sh) { return first + sh >= margin_left && last + sh <= dom.points()[0] - 1; };
    for (Index target : shifts) {
      Index sh = target;
      while (sh != 0 && !admissible(sh)) sh += sh > 0 ? -s : s;
      if (sh == 0 || first < 0) continue;
      const double err = rel_error(norm_of(translate(e.f, IndexVector::Constant(1, sh)), unit), n1);
      worst_t = std::max(worst_t, err);
      rec.expect(e.id, -err, kTranslationTol, "translation by " + std::to_string(sh) + " cells");
    }

    const double n = norm_of(e.f, spec);
    rec.expect(e.id, -rel_error(norm_of(modulate(e.f, at(0.0)), spec), n), 0, "xi = 0");
    double worst_m = 0;
    for (int k = 0; k < 4; ++k) {
      const double err = rel_error(norm_of(modulate(e.f, at(u(rng))), spec), n);
      worst_m = std::max(worst_m, err);
      rec.expect(e.id, -err, kModulationTol, "modulation");
      ++modulations;
    }
    rec.row(e.id, {n, worst_t, worst_m});
  }
  rec.measure("modulation_cases", modulations);
  return rec.finish();
}

CheckResult check_inclusion_norm_equivalence(const std::vector<Corpus>& corpora, const AmalgamRecipe& a,
                                             const AmalgamRecipe& b) {
  std::vector<std::pair<std::string, CheckResult>> parts;
  std::vector<double> constants, cells;
  for (const Corpus& c : corpora) {
    CheckRecorder rec("inclusion_norm_equivalence", {"norm_a", "norm_b", "ratio"}, true);
    const Spec sa = a.grand(c.domain()), sb = b.grand(c.domain());
    double sup = 0;
    for (const auto& e : c.entries()) {
      const double na = norm_of(e.f, sa), nb = norm_of(e.f, sb);
      if (na == 0) continue;
      sup = std::max(sup, nb / na);
      rec.row(e.id, {na, nb, nb / na});
    }
    rec.constant(sup);
    rec.measure("C", sup);
    constants.push_back(sup);
    cells.push_back(static_cast<double>(c.domain().points()[0]));
    parts.emplace_back(level_label(c), rec.finish());
  }
  CheckResult r = merge("inclusion_norm_equivalence", parts, true);
  if (constants.size() >= 2) {
    std::vector<double> lx, ly;
    for (std::size_t k = 0; k < constants.size(); ++k) {
      lx.push_back(std::log(cells[k]));
      ly.push_back(std::log(constants[k]));
    }
    const double slope = least_squares_slope(lx, ly);
    r.measured.emplace_back("ratio_trend_slope", slope);
    if (slope > 0.5) r.notes.push_back("constant grows with resolution (slope " + fmt6(slope) + ")");
  }
  return r;
}

double holder_constant(double p, double theta, double mass) {
  if (!(p > 1) || !(mass > 0)) throw std::invalid_argument("holder_constant: need p > 1 and mass > 0");
  const double top = p - 1;
  auto g = [&](double e) { return std::pow(e, theta) * std::pow(mass, e / (p * (p - e))); };
  const int n = 2000;
  double best = g(top);
  int arg = n;
  for (int k = 1; k < n; ++k) {
    const double v = g(top * k / n);
    if (v > best) best = v, arg = k;
  }
  if (arg < n) best = std::max(best, golden_section_maximize<double>(g, top * (arg - 1) / n, top * (arg + 1) / n).value);
  return best;
}

CheckResult check_embedding_classical_into_grand(const std::vector<Corpus>& corpora, const AmalgamRecipe& recipe) {
  if (recipe.variant != GrandVariant::ExponentOverP)
    throw std::invalid_argument("check_embedding_classical_into_grand: requires EXPONENT_OVER_P");
  std::vector<std::pair<std::string, CheckResult>> parts;
  for (const Corpus& c : corpora) {
    const auto& dom = c.domain();
    CheckRecorder rec("embedding_classical_into_grand", {"grand_norm", "classical_norm", "C_H", "ratio", "margin"});
    const Spec g = recipe.grand(dom), cl = recipe.classical(dom);
    const double mass_a = integrate(g.local.weight());
    const ControlFunction<double> lattice = detail::empty_control(dom, g.window);
    const double mass_b = detail::anchor_weights(g.global.weight(), lattice).sum() * lattice.anchor_volume();
    const double ca = holder_constant(recipe.p, recipe.theta, mass_a);
    const double cb = holder_constant(recipe.q, recipe.theta, mass_b);
    const double ch = ca * cb;
    rec.measure("l1_a", mass_a);
    rec.measure("l1_b_lattice", mass_b);
    rec.measure("C_H", ch);
    double empirical = 0;
    for (const auto& e : c.entries()) {
      const double ng = norm_of(e.f, g), nc = norm_of(e.f, cl);
      const double m = order_margin(ng, ch * nc);
      rec.expect(e.id, m, kEmbeddingTol, "grand <= C_H * classical");
      if (nc > 0) empirical = std::max(empirical, ng / nc);
      rec.row(e.id, {ng, nc, ch, nc > 0 ? ng / nc : 0.0, m});

      const CheckResult guard = holder_grandizer_bound(e.f, g.local.grand_params());
      rec.expect(e.id, std::min(0.0, guard.worst_case.margin), 1e-12, "per-eps Hoelder guard");
      const auto& lp = g.local.grand_params();
      const auto& gp = g.global.grand_params();
      const double member =
          lp.factor(lp.p - 1) * gp.factor(gp.p - 1) * mixed_norm_family(e.f, g, lp.p - 1, gp.p - 1);
      rec.expect(e.id, order_margin(member, ng), kEmbeddingTol, "two-stage sup guard");
    }
    rec.constant(empirical);
    rec.measure("empirical_C", empirical);
    parts.emplace_back(level_label(c), rec.finish());
  }
  return merge("embedding_classical_into_grand", parts, false);
}

CheckResult check_embedding_grand_into_mixed(const Corpus& corpus, const Spec& spec, double eps, double eta) {
  if (spec.local.kind() != SpaceKind::Grand || spec.global.kind() != SpaceKind::Grand)
    throw std::invalid_argument("check_embedding_grand_into_mixed: spec must be grand/grand");
  GrandParams<double> lp = spec.local.grand_params(), gp = spec.global.grand_params();
  lp = lp.with_eps(lp.eps.with_points({eps}));
  gp = gp.with_eps(gp.eps.with_points({eta}));
  const Spec merged{SpaceDescriptor<double>::grand(lp), SpaceDescriptor<double>::grand(gp), spec.window};
  CheckRecorder rec("embedding_grand_into_mixed", {"eps", "eta", "scaled_mixed", "amalgam", "margin"});
  const double factor = lp.factor(eps) * gp.factor(eta);
  for (const auto& e : corpus.entries()) {
    const double lhs = factor * mixed_norm_family(e.f, merged, eps, eta);
    const double rhs = norm_of(e.f, merged);
    const double m = order_margin(lhs, rhs);
    rec.expect(e.id, m, kEmbeddingTol, "eps^theta eta^theta mixed <= amalgam");
    rec.row(e.id, {eps, eta, lhs, rhs, m});
  }
  return rec.finish();
}

namespace {

AmalgamRecipe with_exponents(AmalgamRecipe r, double p, double q) {
  r.p = p;
  r.q = q;
  return r;
}

/// Margin for "c1 / c0 within a factor f".
double stability_margin(double c0, double c1, double factor) {
  if (!(c0 > 0) || !(c1 > 0) || !std::isfinite(c0) || !std::isfinite(c1)) return -1;
  return std::log(factor) - std::abs(std::log(c1 / c0));
}

}  // namespace

CheckResult check_nesting_in_p(const std::vector<Corpus>& corpora, double p1, double p2,
                               const AmalgamRecipe& recipe) {
  if (!(p1 <= p2)) throw std::invalid_argument("check_nesting_in_p: requires p1 <= p2");
  CheckRecorder rec("nesting_in_p", {"cells", "norm_p1", "norm_p2", "ratio"}, true);
  std::vector<double> constants;
  for (const Corpus& c : corpora) {
    const Spec s1 = with_exponents(recipe, p1, recipe.q).grand(c.domain());
    const Spec s2 = with_exponents(recipe, p2, recipe.q).grand(c.domain());
    double sup = 0;
    const double cells = static_cast<double>(c.domain().points()[0]);
    for (const auto& e : c.entries()) {
      const double n1 = norm_of(e.f, s1), n2 = norm_of(e.f, s2);
      if (n2 == 0) continue;
      sup = std::max(sup, n1 / n2);
      rec.row(level_label(c) + "/" + e.id, {cells, n1, n2, n1 / n2});
    }
    rec.expect(level_label(c), std::isfinite(sup) ? 0.0 : -1.0, 0, "finite constant");
    rec.measure(level_label(c) + "/C", sup);
    constants.push_back(sup);
  }
  for (std::size_t k = 1; k < constants.size(); ++k)
    rec.expect("resolution", stability_margin(constants[k - 1], constants[k], 2.0), 0,
               "constant stable within a factor 2");
  rec.constant(*std::max_element(constants.begin(), constants.end()));
  return rec.finish();
}

CheckResult check_pointwise_product(const std::vector<Corpus>& corpora, ExponentTriple p, ExponentTriple q,
                                    const AmalgamRecipe& recipe) {
  for (const auto& t : {p, q}) {
    if (!(t.e1 > 1 && t.e2 > 1 && t.e3 > 1))
      throw std::invalid_argument("check_pointwise_product: exponents must exceed 1");
    if (std::abs(1 / t.e3 - 1 / t.e1 - 1 / t.e2) > 1e-12)
      throw std::invalid_argument("check_pointwise_product: triple violates 1/e3 = 1/e1 + 1/e2");
  }
  CheckRecorder rec("pointwise_product", {"cells", "norm_fg", "norm_f", "norm_g", "ratio"}, true);
  AmalgamRecipe base = recipe;
  base.b = recipe.a;
  std::vector<double> constants;
  for (const Corpus& c : corpora) {
    const Spec s1 = with_exponents(base, p.e1, q.e1).grand(c.domain());
    const Spec s2 = with_exponents(base, p.e2, q.e2).grand(c.domain());
    const Spec s3 = with_exponents(base, p.e3, q.e3).grand(c.domain());
    const auto& es = c.entries();
    std::vector<double> n1, n2;
    for (const auto& e : es) {
      n1.push_back(norm_of(e.f, s1));
      n2.push_back(norm_of(e.f, s2));
    }
    const double cells = static_cast<double>(c.domain().points()[0]);
    double sup = 0;
    for (std::size_t i = 0; i < es.size(); ++i)
      for (std::size_t j = i; j < es.size(); ++j) {
        if (n1[i] == 0 || n2[j] == 0) continue;
        const double n3 = norm_of(pointwise_product(es[i].f, es[j].f), s3);
        const double ratio = n3 / (n1[i] * n2[j]);
        sup = std::max(sup, ratio);
        rec.row(level_label(c) + "/" + es[i].id + "*" + es[j].id, {cells, n3, n1[i], n2[j], ratio});
      }
    rec.expect(level_label(c), std::isfinite(sup) ? 0.0 : -1.0, 0, "finite constant");
    rec.measure(level_label(c) + "/C", sup);
    constants.push_back(sup);
  }
  for (std::size_t k = 1; k < constants.size(); ++k)
    rec.expect("resolution", stability_margin(constants[k - 1], constants[k], 2.0), 0,
               "constant stable within a factor 2");
  rec.constant(*std::max_element(constants.begin(), constants.end()));
  return rec.finish();
}

namespace {

void vanishing_limit_into(CheckRecorder& rec, const CorpusEntry& entry, const Spec& spec) {
  if (spec.local.kind() != SpaceKind::Grand || spec.global.kind() != SpaceKind::Grand)
    throw std::invalid_argument("check_vanishing_limit: spec must be grand/grand");
  const double pmin = std::min(spec.local.exponent(), spec.global.exponent());
  const auto grid = EpsGrid<double>::geometric(pmin).values();
  if (is_zero(entry.f)) {
    rec.row(entry.id, {grid[0], 0, 0, 0, 0});
    return;
  }
  const double n = norm_of(entry.f, spec);
  double c[3];
  for (int k = 0; k < 3; ++k) c[k] = grid[k] * mixed_norm_family(entry.f, spec, grid[k], grid[k]);
  rec.expect(entry.id, (c[1] - c[0]) / c[2], 0, "curve decreases toward eps -> 0 (first step)");
  rec.expect(entry.id, (c[2] - c[1]) / c[2], 0, "curve decreases toward eps -> 0 (second step)");
  rec.expect(entry.id, (0.01 * n - c[0]) / n, 0, "smallest-eps value <= 1% of the amalgam norm");
  rec.row(entry.id, {grid[0], c[0], c[1], c[2], c[0] / n});
}

const std::vector<std::string> kVanishingColumns = {"eps_min", "curve_0", "curve_1", "curve_2", "fraction_of_norm"};

}  // namespace

CheckResult check_vanishing_limit(const CorpusEntry& entry, const Spec& spec) {
  CheckRecorder rec("vanishing_limit", kVanishingColumns);
  vanishing_limit_into(rec, entry, spec);
  return rec.finish();
}

CheckResult check_vanishing_limit(const Corpus& corpus, const Spec& spec) {
  CheckRecorder rec("vanishing_limit", kVanishingColumns);
  for (const auto& e : corpus.entries()) vanishing_limit_into(rec, e, spec);
  return rec.finish();
}

CheckResult check_maximal_bounded(const std::vector<Corpus>& corpora, double r, const AmalgamRecipe& recipe) {
  if (!(recipe.p <= recipe.q && recipe.q <= r))
    throw std::invalid_argument("check_maximal_bounded: requires p <= q <= r");
  CheckRecorder rec("maximal_bounded", {"cells", "norm_Mf", "norm_f", "ratio"}, true);
  std::vector<double> constants;
  for (const Corpus& c : corpora) {
    const auto& dom = c.domain();
    const Spec target = recipe.grand(dom);
    const Spec source{SpaceDescriptor<double>::classical(r, Weight<double>::ones(dom)),
                      SpaceDescriptor<double>::classical(recipe.q, Weight<double>::ones(dom)),
                      recipe.window_spec(dom)};
    const RadiusSet rs = RadiusSet::for_domain(dom);
    const double cells = static_cast<double>(dom.points()[0]);
    double sup = 0;
    for (const auto& e : c.entries()) {
      const double nf = norm_of(e.f, source);
      if (nf == 0) continue;
      const double nm = norm_of(maximal_fast(e.f, rs).mf, target);
      sup = std::max(sup, nm / nf);
      rec.row(level_label(c) + "/" + e.id, {cells, nm, nf, nm / nf});
    }
    rec.measure(level_label(c) + "/C", sup);
    constants.push_back(sup);
  }
  for (std::size_t k = 1; k < constants.size(); ++k) {
    const double growth = constants[k] / constants[k - 1];
    rec.measure("growth_" + std::to_string(k), growth);
    rec.expect("resolution", 1.25 - growth, 0, "constant grows by at most 25% when h halves");
  }
  rec.constant(*std::max_element(constants.begin(), constants.end()));
  return rec.finish();
}

double least_squares_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw std::invalid_argument("least_squares_slope: need >= 2 points");
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i] / n, my += ys[i] / n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

CheckResult check_maximal_unbounded(const UnboundedSetup& setup, std::vector<GrowthPoint>* growth) {
  const auto& ts = setup.T_list;
  if (ts.size() < 4) throw std::invalid_argument("check_maximal_unbounded: need at least 4 T values");
  for (std::size_t k = 0; k < ts.size(); ++k) {
    if (!(ts[k] > setup.e_half_width)) throw std::invalid_argument("check_maximal_unbounded: T must exceed |E|/2");
    if (k > 0 && !(ts[k] > ts[k - 1])) throw std::invalid_argument("check_maximal_unbounded: T_list must increase");
  }
  CheckRecorder rec("maximal_unbounded",
                    {"T", "log_T", "chi_norm", "norm", "ratio", "chi_norm_omega", "norm_omega"});
  std::vector<double> logs, norms, ratios, omega_logs;
  double chi0 = 0;
  for (double T : ts) {
    const auto cells = static_cast<Index>(std::lround(2 * T * setup.cells_per_unit));
    const auto dom = BoxDomain<double>::interval(-T, T, cells);
    const Fn chi = indicator(dom, at(-setup.e_half_width), at(setup.e_half_width));
    const Fn mf = maximal_fast(chi, RadiusSet::for_domain(dom)).mf;
    const double chi_norm = lp_norm(chi, 1.0);
    const double norm = lp_norm(mf, 1.0);
    if (chi0 == 0) chi0 = chi_norm;
    rec.expect("T=" + fmt6(T), -std::abs(chi_norm - chi0) / chi0, 1e-12, "numerator norm constant in T");

    const Weight<double> omega = WeightRecipe::power(setup.omega_power).on(dom);
    const double chi_w = weighted_lp_norm(chi, setup.q, omega), norm_w = weighted_lp_norm(mf, setup.q, omega);
    logs.push_back(std::log(T));
    norms.push_back(norm);
    ratios.push_back(norm / chi_norm);
    omega_logs.push_back(std::log(norm_w / chi_w));
    rec.row("T=" + fmt6(T), {T, std::log(T), chi_norm, norm, norm / chi_norm, chi_w, norm_w});
    if (growth) growth->push_back({T, std::log(T), norm});
    if (T == ts.back()) {
      const auto diag = weight_diagnostics(omega, 1000);
      rec.measure("omega_unit_lower_bounded", diag.is_unit_lower_bounded ? 1 : 0);
      rec.measure("omega_submultiplicativity_defect", diag.submultiplicativity_defect);
    }
  }
  const double slope = least_squares_slope(logs, norms);
  rec.measure("slope_raw", slope);
  rec.measure("slope_ratio", least_squares_slope(logs, ratios));
  rec.measure("slope_omega_loglog", least_squares_slope(logs, omega_logs));
  rec.expect("slope", slope - 0.8, 0, "slope of the truncated L1 norm in ln T >= 0.8");
  rec.constant(slope);
  return rec.finish();
}

bool VerifyReport::any_failed() const {
  return std::any_of(results.begin(), results.end(), [](const CheckResult& r) { return r.failed(); });
}

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = {
      "norm_axioms",      "solidity_and_monotone", "invariance",     "inclusion_norm_equivalence",
      "embedding_classical_into_grand", "embedding_grand_into_mixed", "nesting_in_p", "pointwise_product",
      "vanishing_limit",  "maximal_bounded",       "maximal_unbounded"};
  return names;
}

VerifyReport run_checks(const VerifySettings& settings, const std::vector<std::string>& names) {
  for (const auto& n : names)
    if (std::find(check_names().begin(), check_names().end(), n) == check_names().end())
      throw std::invalid_argument("run_checks: unknown check '" + n + "'");
  auto wanted = [&](const std::string& n) { return std::find(names.begin(), names.end(), n) != names.end(); };

  std::vector<Corpus> corpora;
  for (std::size_t k = 0; k < settings.cells.size(); ++k) corpora.push_back(settings.corpus(k));
  const AmalgamRecipe& recipe = settings.spec;

  auto per_level = [&](const std::string& name, auto&& fn) {
    std::vector<std::pair<std::string, CheckResult>> parts;
    for (const Corpus& c : corpora) parts.emplace_back(level_label(c), fn(c, recipe.grand(c.domain())));
    return merge(name, parts, false);
  };

  VerifyReport report;
  for (const auto& name : check_names()) {
    if (!wanted(name)) continue;
    if (name == "norm_axioms") {
      report.results.push_back(per_level(name, [&](const Corpus& c, const Spec& s) {
        return check_norm_axioms(c, s, settings.seed);
      }));
    } else if (name == "solidity_and_monotone") {
      report.results.push_back(per_level(name, [&](const Corpus& c, const Spec& s) {
        return check_solidity_and_monotone(c, s, settings.seed);
      }));
    } else if (name == "invariance") {
      report.results.push_back(per_level(name, [&](const Corpus& c, const Spec& s) {
        return check_invariance(c, s, settings.seed);
      }));
    } else if (name == "inclusion_norm_equivalence") {
      AmalgamRecipe other = recipe;
      other.a = WeightRecipe::power(-2);
      other.b = WeightRecipe::power(-2);
      report.results.push_back(check_inclusion_norm_equivalence(corpora, recipe, other));
    } else if (name == "embedding_classical_into_grand") {
      report.results.push_back(check_embedding_classical_into_grand(corpora, recipe));
    } else if (name == "embedding_grand_into_mixed") {
      std::vector<std::pair<std::string, CheckResult>> parts;
      for (const Corpus& c : corpora)
        for (double eps : {0.1, 0.5, recipe.p - 1})
          for (double eta : {0.1, 0.5, recipe.q - 1})
            parts.emplace_back(level_label(c) + ",eps=" + fmt6(eps) + ",eta=" + fmt6(eta),
                               check_embedding_grand_into_mixed(c, recipe.grand(c.domain()), eps, eta));
      report.results.push_back(merge(name, parts, false));
    } else if (name == "nesting_in_p") {
      report.results.push_back(check_nesting_in_p(corpora, recipe.p, recipe.p + 1, recipe));
    } else if (name == "pointwise_product") {
      report.results.push_back(check_pointwise_product(corpora, {4, 4, 2}, {4, 4, 2}, recipe));
    } else if (name == "vanishing_limit") {
      report.results.push_back(per_level(name, [&](const Corpus& c, const Spec& s) {
        return check_vanishing_limit(c, s);
      }));
    } else if (name == "maximal_bounded") {
      report.results.push_back(check_maximal_bounded(corpora, recipe.q + 1, recipe));
    } else if (name == "maximal_unbounded") {
      report.results.push_back(check_maximal_unbounded(UnboundedSetup{}, &report.growth));
    }
  }
  return report;
}

}  // namespace gwa
