#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace gwa {

enum class Verdict { Pass, Fail, ReportOnly };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::ReportOnly: return "REPORT_ONLY";
  }
  return "?";
}

struct WorstCase {
  std::string entry;
  /// Smallest normalized margin among asserted inequalities (+inf if none).
  double margin = std::numeric_limits<double>::infinity();
};

struct DetailRow {
  std::string entry;
  std::vector<double> values;
};

/// Outcome of one executable property check.
struct CheckResult {
  std::string name;
  Verdict verdict = Verdict::Pass;
  WorstCase worst_case;
  double estimated_constant = 0;
  std::vector<std::string> columns;
  std::vector<DetailRow> details;
  std::vector<std::pair<std::string, double>> measured;
  std::vector<std::string> notes;

  bool failed() const { return verdict == Verdict::Fail; }

  double measure(const std::string& key) const {
    for (const auto& [k, v] : measured)
      if (k == key) return v;
    return std::numeric_limits<double>::quiet_NaN();
  }
};

/// Accumulates asserted margins and detail rows; FAIL iff some margin < -tolerance.
class CheckRecorder {
 public:
  CheckRecorder(std::string name, std::vector<std::string> columns, bool report_only = false)
      : report_only_(report_only) {
    result_.name = std::move(name);
    result_.columns = std::move(columns);
  }

  /// Records `margin` (>= 0 means the inequality holds). Returns whether it passed.
  bool expect(const std::string& entry, double margin, double tolerance, const std::string& what) {
    const bool ok = margin >= -tolerance;
    if (!(margin >= result_.worst_case.margin)) result_.worst_case = {entry, margin};
    if (!ok) {
      failed_ = true;
      if (result_.notes.size() < 32)
        result_.notes.push_back("violation [" + entry + "] " + what + ": margin " +
                                std::to_string(margin));
    }
    return ok;
  }

  void row(std::string entry, std::vector<double> values) {
    result_.details.push_back({std::move(entry), std::move(values)});
  }

  void measure(std::string key, double value) { result_.measured.emplace_back(std::move(key), value); }
  void note(std::string text) { result_.notes.push_back(std::move(text)); }
  void constant(double c) { result_.estimated_constant = c; }

  CheckResult finish() {
    result_.verdict = failed_ ? Verdict::Fail : (report_only_ ? Verdict::ReportOnly : Verdict::Pass);
    return std::move(result_);
  }

 private:
  CheckResult result_;
  bool report_only_;
  bool failed_ = false;
};

}  // namespace gwa
