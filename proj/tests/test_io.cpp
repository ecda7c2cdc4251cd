#include <doctest.h>

#include "gwa/io.hpp"
#include "test_support.hpp"

#include <filesystem>

using namespace gwa;
using namespace gwa::testing;

namespace {

std::size_t line_count(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("gwa_test_io_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("real formatting round-trips") {
  CHECK(io::format_real(0.5) == "0.5");
  CHECK(io::format_real(std::nan("")) == "nan");
  CHECK(io::format_real(-HUGE_VAL) == "-inf");
  for (double v : {0.1, 1.0 / 3, -2.5e-300, 6.02214076e23}) CHECK(std::stod(io::format_real(v)) == v);
}

TEST_CASE("grid function csv round-trips exactly") {
  std::mt19937_64 rng(3);
  Dom::RealVector lo(2), hi(2);
  lo << 0, -1;
  hi << 1, 1;
  for (const Dom& d : {Dom::interval(-1.0, 2.0, 17), Dom(lo, hi, IndexVector::Constant(2, 5))}) {
    const Fn f = random_samples(d, rng);
    const std::string text = io::grid_function_csv(f);
    CHECK(text.rfind("# box=", 0) == 0);
    CHECK(line_count(text) == static_cast<std::size_t>(d.size()) + 2);
    const Fn g = io::parse_grid_function_csv(text);
    CHECK((g.domain().points().array() == d.points().array()).all());
    CHECK((g.domain().lower().array() == d.lower().array()).all());
    CHECK((g.domain().upper().array() == d.upper().array()).all());
    CHECK((g.values() == f.values()).all());
  }
  CHECK_THROWS_AS(io::parse_grid_function_csv("x,re,im\n0,1,0\n"), std::invalid_argument);
  CHECK_THROWS_AS(io::parse_grid_function_csv("# box=0,1 cells=2\nx,re,im\n0.25,1,0\n0.75,abc,0\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS(io::parse_grid_function_csv("# box=0,1 cells=3\nx,re,im\n0.25,1,0\n"), std::invalid_argument);
}

TEST_CASE("curve csv") {
  const NormReport<double> empty;
  CHECK(io::curve_csv(empty) == "eps,inner_norm,weighted_term\n");

  const Dom d = Dom::interval(0.0, 1.0, 64);
  const GrandParams<double> gp(2.0, W::ones(d));
  const NormReport<double> r = grand_norm(constant(d, 1.0), gp);
  const std::string csv = io::curve_csv(r);
  CHECK(r.curve.size() == 33);
  CHECK(line_count(csv) == 34);
  const auto dir = scratch("curve");
  const auto path = io::emit_plotdata(r, dir);
  CHECK(path.filename() == "curve.csv");
  CHECK(io::read_text(path) == csv);
  std::filesystem::remove_all(dir);
}

TEST_CASE("control and growth csv") {
  const Dom d = Dom::interval(0.0, 4.0, 64);
  const WindowSpec w = WindowSpec::uniform(1, 16, 8);
  const auto cf = control_function(constant(d, 1.0), SpaceDescriptor<double>::classical(1, W::ones(d)), w);
  const std::string csv = io::control_csv(cf);
  CHECK(csv.rfind("x,control_value\n", 0) == 0);
  CHECK(line_count(csv) == static_cast<std::size_t>(cf.size()) + 1);

  const std::vector<GrowthPoint> g = {{4, std::log(4.0), 1.5}, {8, std::log(8.0), 2.0}};
  const std::string gs = io::growth_csv(g);
  CHECK(gs.rfind("T,log_T,norm\n4,", 0) == 0);
  CHECK(line_count(gs) == 3);
  CHECK(io::growth_csv({}) == "T,log_T,norm\n");
}

TEST_CASE("check results serialize with nulls for non-finite values") {
  CheckRecorder rec("demo", {"a", "b"}, true);
  rec.row("e1", {1.0, std::nan("")});
  rec.measure("m", HUGE_VAL);
  rec.expect("e1", 0.25, 0, "holds");
  const CheckResult r = rec.finish();
  const io::Json j = io::to_json(r);
  CHECK(j["name"] == "demo");
  CHECK(j["verdict"] == "REPORT_ONLY");
  CHECK(j["worst_case"]["margin"] == 0.25);
  CHECK(io::dump(j).back() == '\n');
  CHECK(io::dump(j).find("NaN") == std::string::npos);
  CHECK(io::check_csv(r) == "entry,a,b\ne1,1,nan\n");

  NormReport<double> nr;
  nr.value = 1;
  const io::Json jr = io::to_json(nr);
  CHECK(jr["argmax_eps"].is_null());
}

TEST_CASE("write_text creates parent directories") {
  const auto dir = scratch("write");
  io::write_text(dir / "a" / "b.txt", "hello\n");
  CHECK(io::read_text(dir / "a" / "b.txt") == "hello\n");
  CHECK_THROWS_AS(io::read_text(dir / "missing"), std::runtime_error);
  std::filesystem::remove_all(dir);
}
