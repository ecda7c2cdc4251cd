#include "gwa/io.hpp"
#include "gwa/maximal.hpp"
#include "gwa/norms.hpp"
#include "gwa/verify.hpp"

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <random>
#include <sstream>

using namespace gwa;
namespace fs = std::filesystem;
using Dom = BoxDomain<double>;
using Fn = GridFunction<double>;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& title, const std::string& detail) {
  if (!pass) ++failures;
  std::printf("%s criterion %2d  %s: %s\n", pass ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
  std::fflush(stdout);
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double rel(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0 ? 0 : std::abs(a - b) / s;
}

const VerifySettings& settings() {
  static const VerifySettings s;
  return s;
}

const std::vector<Corpus>& corpora() {
  static const std::vector<Corpus> cs = {settings().corpus(0), settings().corpus(1)};
  return cs;
}

double column_max(const CheckResult& r, std::size_t col) {
  double m = 0;
  for (const auto& row : r.details) m = std::max(m, row.values.at(col));
  return m;
}

void closed_form() {
  const auto t0 = std::chrono::steady_clock::now();
  const Dom d = Dom::interval(0.0, 1.0, 64);
  const GrandParams<double> gp(2.0, Weight<double>::ones(d), 1.0, GrandVariant::ExponentOverP);
  const NormReport<double> r = grand_norm(Fn(d, Fn::Values::Ones(64)), gp);
  const double t = seconds_since(t0);
  const double err = std::abs(r.value - 1.0);
  report(1, err <= 1e-9 && r.argmax_eps == 1.0 && t < 1.0, "grand norm closed form",
         "value=" + io::format_real(r.value) + " argmax_eps=" + num(r.argmax_eps) + " rel_err=" + num(err) +
             " time=" + num(t) + "s");
}

/// Independent per-eps term: eps-factor times a plain weighted sum.
double direct_term(const Fn& f, const GrandParams<double>& gp, double e) {
  const auto& a = gp.grandizer.values();
  const double q = gp.p - e;
  const double s = gp.variant == GrandVariant::ExponentOverP ? e / gp.p : e;
  long double sum = 0;
  for (Index i = 0; i < f.size(); ++i) sum += std::pow(std::abs(f[i]), q) * std::pow(a[i], s);
  const double inner = std::pow(static_cast<double>(sum) * f.domain().cell_volume(), 1 / q);
  const double factor = gp.variant == GrandVariant::ExponentOverP ? std::pow(e, gp.theta) : std::pow(e, gp.theta / q);
  return factor * inner;
}

void sup_definition() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0, 1);
  double worst_excess = 0, worst_gap = 0, worst_term = 0;
  int refined = 0;
  for (int k = 0; k < 100; ++k) {
    const Index n = 32 + static_cast<Index>(u(rng) * 224);
    const double half = 0.5 + 4 * u(rng);
    const Dom d = Dom::interval(-half, half, n);
    const int bumps = 1 + static_cast<int>(u(rng) * 4);
    double c[4], w[4], amp[4], xi[4];
    for (int b = 0; b < bumps; ++b) {
      c[b] = half * (2 * u(rng) - 1);
      w[b] = 0.05 + half * u(rng);
      amp[b] = std::exp(6 * u(rng) - 3);
      xi[b] = 10 * u(rng);
    }
    Fn::Values v(n);
    for (Index i = 0; i < n; ++i) {
      const double x = d.center_coordinate(0, i);
      std::complex<double> z = 0;
      for (int b = 0; b < bumps; ++b)
        z += amp[b] * std::exp(-(x - c[b]) * (x - c[b]) / (2 * w[b] * w[b])) * std::polar(1.0, xi[b] * x);
      v[i] = z;
    }
    const Fn f(d, v);
    const double k_exp = 2 * u(rng) - 1;
    Weight<double>::Values av(n);
    for (Index i = 0; i < n; ++i) av[i] = std::exp(k_exp * std::abs(d.center_coordinate(0, i)));
    const double p = 1.1 + 3 * u(rng);
    const double theta = 0.25 + 2 * u(rng);
    const GrandVariant variant = k % 2 == 0 ? GrandVariant::ExponentOverP : GrandVariant::ExponentFull;
    const GrandParams<double> gp(p, Weight<double>(d, av), theta, variant);
    const NormReport<double> r = grand_norm(f, gp);
    if (r.refined) ++refined;
    double top = 0;
    for (const auto& pt : r.curve) {
      worst_excess = std::max(worst_excess, (pt.weighted_term - r.value) / r.value);
      worst_term = std::max(worst_term, rel(pt.weighted_term, direct_term(f, gp, pt.eps)));
      top = std::max(top, pt.weighted_term);
    }
    worst_gap = std::max(worst_gap, rel(top, r.value));
    worst_gap = std::max(worst_gap, rel(r.value, direct_term(f, gp, r.argmax_eps)));
  }
  const double t = seconds_since(t0);
  report(2, worst_excess <= 1e-12 && worst_gap <= 1e-12 && worst_term <= 1e-12 && t < 10,
         "sup-definition invariant",
         "100 functions, max term excess=" + num(worst_excess) + " argmax gap=" + num(worst_gap) +
             " term vs direct sum=" + num(worst_term) + " refined=" + std::to_string(refined) + " time=" + num(t) +
             "s");
}

void invariance() {
  double worst_t = 0, worst_m = 0, cases = 0;
  bool pass = true;
  for (const Corpus& c : corpora()) {
    const CheckResult r = check_invariance(c, settings().spec.grand(c.domain()), settings().seed);
    pass = pass && r.verdict == Verdict::Pass;
    worst_t = std::max(worst_t, column_max(r, 1));
    worst_m = std::max(worst_m, column_max(r, 2));
    cases += r.measure("modulation_cases");
  }
  pass = pass && cases >= 50 && worst_m <= 1e-12 && worst_t <= 1e-10;
  report(3, pass, "modulation and translation invariance",
         num(cases) + " modulation cases, max rel change=" + num(worst_m) + "; translation max rel change=" +
             num(worst_t));
}

void norm_properties() {
  bool pass = true;
  double homog = 0, covered = 0, worst = HUGE_VAL;
  for (const Corpus& c : corpora()) {
    const auto spec = settings().spec.grand(c.domain());
    const CheckResult ax = check_norm_axioms(c, spec, settings().seed);
    const CheckResult so = check_solidity_and_monotone(c, spec, settings().seed);
    pass = pass && ax.verdict == Verdict::Pass && so.verdict == Verdict::Pass;
    homog = std::max(homog, ax.measure("max_homogeneity_error"));
    covered = std::max(covered, column_max(so, 4));
    worst = std::min({worst, ax.worst_case.margin, so.worst_case.margin});
  }
  pass = pass && covered == 0;
  report(4, pass, "norm axioms, solidity, monotone convergence",
         "homogeneity err=" + num(homog) + " truncation err once covered=" + num(covered) + " worst margin=" +
             num(worst));
}

void holder_embedding() {
  const CheckResult r = check_embedding_classical_into_grand(corpora(), settings().spec);
  std::size_t violations = 0;
  for (const auto& row : r.details)
    if (row.values[4] < 0) ++violations;
  report(5, r.verdict == Verdict::Pass && violations == 0, "Hoelder embedding constant",
         "C_H=" + num(r.measure("cells=128/C_H")) + " empirical C=" + num(r.estimated_constant) + " entries=" +
             std::to_string(r.details.size()) + " violations=" + std::to_string(violations));
}

void mixed_bound() {
  const auto& sp = settings().spec;
  double worst = HUGE_VAL;
  int pairs = 0;
  bool pass = true;
  for (const Corpus& c : corpora())
    for (double eps : {0.1, 0.5, sp.p - 1})
      for (double eta : {0.1, 0.5, sp.q - 1}) {
        const CheckResult r = check_embedding_grand_into_mixed(c, sp.grand(c.domain()), eps, eta);
        pass = pass && r.verdict == Verdict::Pass;
        worst = std::min(worst, r.worst_case.margin);
        ++pairs;
      }
  report(6, pass && worst >= -1e-10, "mixed-norm bound",
         std::to_string(pairs) + " (eps, eta, resolution) settings, worst margin=" + num(worst));
}

void vanishing() {
  bool pass = true;
  double worst_fraction = 0;
  for (const Corpus& c : corpora()) {
    const CheckResult r = check_vanishing_limit(c, settings().spec.grand(c.domain()));
    pass = pass && r.verdict == Verdict::Pass;
    worst_fraction = std::max(worst_fraction, column_max(r, 4));
  }
  report(7, pass, "vanishing limit", "largest smallest-eps fraction of the norm=" + num(worst_fraction));
}

RadiusSet random_radii(std::mt19937_64& rng, Index limit) {
  std::uniform_int_distribution<int> coin(0, 2);
  std::uniform_int_distribution<Index> pick(1, limit);
  const int kind = coin(rng);
  if (kind == 0) return RadiusSet::all(pick(rng), true);
  if (kind == 1) return RadiusSet::dyadic(pick(rng), false);
  RadiusSet rs{{}, true};
  for (int k = 0; k < 8; ++k) rs.radii_cells.push_back(pick(rng));
  std::sort(rs.radii_cells.begin(), rs.radii_cells.end());
  rs.radii_cells.erase(std::unique(rs.radii_cells.begin(), rs.radii_cells.end()), rs.radii_cells.end());
  return rs;
}

double max_rel_diff(const MaximalResult<double>& a, const MaximalResult<double>& b) {
  double worst = 0;
  for (Index i = 0; i < a.mf.size(); ++i) worst = std::max(worst, rel(a.mf[i].real(), b.mf[i].real()));
  return worst;
}

void maximal_equivalence() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1, 1);
  std::uniform_int_distribution<Index> size(2, 512);
  double worst1 = 0, worst2 = 0;
  for (int k = 0; k < 200; ++k) {
    const Index n = size(rng);
    const Dom d = Dom::interval(-1.0, 1.0, n);
    Fn::Values v(n);
    const double scale = std::exp(10 * u(rng));
    for (Index i = 0; i < n; ++i) v[i] = {scale * u(rng), scale * u(rng)};
    const Fn f(d, v);
    const RadiusSet rs = random_radii(rng, n);
    worst1 = std::max(worst1, max_rel_diff(maximal_fast(f, rs), maximal_naive(f, rs)));
  }
  Dom::RealVector lo(2), hi(2);
  lo << -1, -1;
  hi << 1, 1;
  const Dom d2(lo, hi, IndexVector::Constant(2, 64));
  for (int k = 0; k < 20; ++k) {
    Fn::Values v(d2.size());
    for (Index i = 0; i < d2.size(); ++i) v[i] = {u(rng), u(rng)};
    const Fn f(d2, v);
    const RadiusSet rs = random_radii(rng, 32);
    worst2 = std::max(worst2, max_rel_diff(maximal_fast(f, rs), maximal_naive(f, rs)));
  }

  const Dom big = Dom::interval(-1.0, 1.0, 4096);
  Fn::Values v(4096);
  for (Index i = 0; i < 4096; ++i) v[i] = {u(rng), 0};
  const Fn f(big, v);
  const RadiusSet rs = RadiusSet::all(256);
  auto t0 = std::chrono::steady_clock::now();
  const auto naive = maximal_naive(f, rs);
  const double t_naive = seconds_since(t0);
  t0 = std::chrono::steady_clock::now();
  const auto fast = maximal_fast(f, rs);
  const double t_fast = seconds_since(t0);
  const double speedup = t_naive / std::max(t_fast, 1e-9);
  const double worst_big = max_rel_diff(fast, naive);
  report(8, std::max({worst1, worst2, worst_big}) <= 1e-12, "maximal fast vs naive",
         "1-D max rel diff=" + num(worst1) + " (200 cases), 2-D=" + num(worst2) + " (20 cases); N=4096 speedup=" +
             num(speedup) + "x (advisory gate 10x: " + (speedup >= 10 ? "met" : "not met") + ")");
}

void maximal_closed_form() {
  const Dom d = Dom::interval(-16.0, 16.0, 4096);
  Fn::Values v(4096);
  for (Index i = 0; i < 4096; ++i) {
    const double x = d.center_coordinate(0, i);
    v[i] = x >= 0 && x <= 1 ? 1.0 : 0.0;
  }
  const auto profile = maximal_tail_profile(Fn(d, v), RadiusSet::for_domain(d), {2.0, 4.0, 8.0});
  double worst = 0;
  std::string detail;
  for (const auto& [x, value] : profile) {
    const double err = std::abs(value - 1 / (2 * x)) * 2 * x;
    worst = std::max(worst, err);
    detail += "M(" + num(x) + ")=" + num(value) + " ";
  }
  report(9, worst <= 0.01, "maximal closed form 1/(2x)", detail + "max rel err=" + num(worst));
}

void unboundedness() {
  std::vector<GrowthPoint> growth;
  const CheckResult r = check_maximal_unbounded(UnboundedSetup{}, &growth);
  std::vector<double> lx, ly;
  for (const auto& g : growth) {
    lx.push_back(g.log_T);
    ly.push_back(g.norm);
  }
  const double slope = least_squares_slope(lx, ly);
  double chi_spread = 0;
  for (const auto& row : r.details) chi_spread = std::max(chi_spread, rel(row.values[2], r.details[0].values[2]));
  report(10, std::abs(slope - 1) <= 0.2 && chi_spread <= 1e-12, "unboundedness signature",
         "slope of ||M chi||_L1([-T,T]) in ln T=" + num(slope) + " (target 1 +- 0.2); per unit mass of chi=" +
             num(r.measure("slope_ratio")) + "; ||chi||_L1 spread=" + num(chi_spread));
}

void boundedness() {
  const CheckResult r = check_maximal_bounded(corpora(), 3.0, settings().spec);
  const double growth = r.measure("growth_1");
  report(11, std::abs(growth - 1) <= 0.25, "boundedness signature",
         "C(h)=" + num(r.measure("cells=128/C")) + " C(h/2)=" + num(r.measure("cells=256/C")) + " change=" +
             num(growth - 1));
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(GWA_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void determinism() {
  const fs::path out = fs::temp_directory_path() / "gwa_acceptance_verify";
  const fs::path first = fs::temp_directory_path() / "gwa_acceptance_verify_first";
  fs::remove_all(out);
  fs::remove_all(first);
  const std::string cmd = "verify --all --seed 7 --out " + out.string();
  const int c1 = run_cli(cmd);
  fs::rename(out, first);
  const int c2 = run_cli(cmd);
  std::size_t files = 0, differing = 0;
  for (const auto& e : fs::recursive_directory_iterator(first)) {
    if (!e.is_regular_file()) continue;
    ++files;
    const fs::path other = out / fs::relative(e.path(), first);
    if (!fs::exists(other) || io::read_text(e.path()) != io::read_text(other)) ++differing;
  }
  std::size_t second_files = 0;
  for (const auto& e : fs::recursive_directory_iterator(out))
    if (e.is_regular_file()) ++second_files;
  fs::remove_all(out);
  fs::remove_all(first);
  report(12, c1 == 0 && c2 == 0 && files > 0 && differing == 0 && files == second_files, "end-to-end determinism",
         "exit codes " + std::to_string(c1) + "," + std::to_string(c2) + "; " + std::to_string(files) +
             " files, " + std::to_string(differing) + " differ");
}

}  // namespace

int main() {
  closed_form();
  sup_definition();
  invariance();
  norm_properties();
  holder_embedding();
  mixed_bound();
  vanishing();
  maximal_equivalence();
  maximal_closed_form();
  unboundedness();
  boundedness();
  determinism();
  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
