#pragma once

#include "gwa/amalgam.hpp"
#include "gwa/check_result.hpp"
#include "gwa/grid.hpp"
#include "gwa/maximal.hpp"
#include "gwa/norms.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace gwa {

enum class Family { Indicator, Gaussian, Ramp, ModulatedBump, RandomSmooth };

const char* to_string(Family f);

/// Resolution-independent description of a corpus entry on a 1-D box.
struct EntryRecipe {
  Family family = Family::Indicator;
  double center = 0;
  double half_width = 1;
  double amplitude = 1;
  double frequency = 0;
  std::array<double, 6> modes{};

  GridFunction<double> sample(const BoxDomain<double>& domain) const;
  std::string describe() const;
  /// Closed support interval [center - half_width, center + half_width].
  std::pair<double, double> support() const { return {center - half_width, center + half_width}; }
};

struct CorpusEntry {
  std::string id;
  Family family;
  std::string description;
  GridFunction<double> f;
};

/// Seeded test functions, supported in the inner half of a 1-D box.
class Corpus {
 public:
  static Corpus generate(const BoxDomain<double>& domain, std::uint64_t seed, int per_family = 3);

  /// Explicit recipes, for hand-built corpora.
  static Corpus from_recipes(const BoxDomain<double>& domain, std::uint64_t seed, std::vector<EntryRecipe> recipes);

  /// Same recipes sampled on another box (used for resolution doubling).
  Corpus resample(const BoxDomain<double>& domain) const;

  std::uint64_t seed() const { return seed_; }
  const BoxDomain<double>& domain() const { return domain_; }
  const std::vector<CorpusEntry>& entries() const { return entries_; }
  const std::vector<EntryRecipe>& recipes() const { return recipes_; }
  std::size_t size() const { return entries_.size(); }

 private:
  Corpus(std::uint64_t seed, BoxDomain<double> domain, std::vector<EntryRecipe> recipes);

  std::uint64_t seed_;
  BoxDomain<double> domain_;
  std::vector<EntryRecipe> recipes_;
  std::vector<CorpusEntry> entries_;
};

/// Analytic weight, instantiated per resolution.
struct WeightRecipe {
  enum class Kind { Constant, Exponential, Power };
  Kind kind = Kind::Constant;
  double parameter = 1;

  static WeightRecipe constant(double c) { return {Kind::Constant, c}; }
  /// exp(k |x|).
  static WeightRecipe exponential(double k) { return {Kind::Exponential, k}; }
  /// (1 + |x|)^s.
  static WeightRecipe power(double s) { return {Kind::Power, s}; }

  double operator()(const Point<double>& x) const;
  Weight<double> on(const BoxDomain<double>& domain) const;
  std::string describe() const;
};

/// Grand amalgam W(L_a^{p)}, L_b^{q)}) with a window in physical units.
struct AmalgamRecipe {
  double p = 2, q = 2, theta = 1;
  GrandVariant variant = GrandVariant::ExponentOverP;
  WeightRecipe a = WeightRecipe::exponential(-1);
  WeightRecipe b = WeightRecipe::exponential(-1);
  double window = 1.0;
  double stride = 0.5;

  WindowSpec window_spec(const BoxDomain<double>& domain) const;
  AmalgamSpec<double> grand(const BoxDomain<double>& domain) const;
  /// W(L^p, L^q) with unit weights and the same window.
  AmalgamSpec<double> classical(const BoxDomain<double>& domain) const;
};

/// Default experiment settings shared by every check.
struct VerifySettings {
  std::uint64_t seed = 7;
  double box_half_width = 8;
  std::vector<Index> cells = {128, 256};
  int per_family = 3;
  AmalgamRecipe spec;

  BoxDomain<double> domain(std::size_t level) const;
  Corpus corpus(std::size_t level) const;
};

// Tolerances.
inline constexpr double kAxiomTol = 1e-10;
inline constexpr double kOrderTol = 1e-12;
inline constexpr double kTranslationTol = 1e-10;
inline constexpr double kModulationTol = 1e-12;
inline constexpr double kEmbeddingTol = 1e-10;
inline constexpr double kLimitTol = 1e-6;

CheckResult check_norm_axioms(const Corpus& corpus, const AmalgamSpec<double>& spec, std::uint64_t seed);

CheckResult check_solidity_and_monotone(const Corpus& corpus, const AmalgamSpec<double>& spec, std::uint64_t seed);

/// Translation branch runs with unit grandizers; modulation with the spec's own.
CheckResult check_invariance(const Corpus& corpus, const AmalgamSpec<double>& spec, std::uint64_t seed);

/// REPORT_ONLY: C = sup ||f||_B / ||f||_A at every resolution of `corpora`.
CheckResult check_inclusion_norm_equivalence(const std::vector<Corpus>& corpora, const AmalgamRecipe& a,
                                             const AmalgamRecipe& b);

/// Explicit Hoelder constant sup_eps eps^theta * mass^{eps/(p(p-eps))}.
double holder_constant(double p, double theta, double mass);

CheckResult check_embedding_classical_into_grand(const std::vector<Corpus>& corpora, const AmalgamRecipe& recipe);

CheckResult check_embedding_grand_into_mixed(const Corpus& corpus, const AmalgamSpec<double>& spec, double eps,
                                             double eta);

CheckResult check_nesting_in_p(const std::vector<Corpus>& corpora, double p1, double p2,
                               const AmalgamRecipe& recipe);

struct ExponentTriple {
  double e1, e2, e3;
};

CheckResult check_pointwise_product(const std::vector<Corpus>& corpora, ExponentTriple p, ExponentTriple q,
                                    const AmalgamRecipe& recipe);

CheckResult check_vanishing_limit(const CorpusEntry& entry, const AmalgamSpec<double>& spec);
CheckResult check_vanishing_limit(const Corpus& corpus, const AmalgamSpec<double>& spec);

CheckResult check_maximal_bounded(const std::vector<Corpus>& corpora, double r, const AmalgamRecipe& recipe);

struct GrowthPoint {
  double T;
  double log_T;
  double norm;
};

struct UnboundedSetup {
  double e_half_width = 1;
  std::vector<double> T_list = {4, 8, 16, 32, 64};
  double cells_per_unit = 32;
  double q = 2;
  /// Exponent s of the variant weight (1 + |x|)^s; the baseline is omega = 1.
  double omega_power = 2;
};

CheckResult check_maximal_unbounded(const UnboundedSetup& setup, std::vector<GrowthPoint>* growth = nullptr);

/// Least-squares slope of ys against xs.
double least_squares_slope(const std::vector<double>& xs, const std::vector<double>& ys);

struct VerifyReport {
  std::vector<CheckResult> results;
  std::vector<GrowthPoint> growth;

  bool any_failed() const;
};

/// Names accepted by run_checks, in execution order.
const std::vector<std::string>& check_names();

VerifyReport run_checks(const VerifySettings& settings, const std::vector<std::string>& names);

}  // namespace gwa
