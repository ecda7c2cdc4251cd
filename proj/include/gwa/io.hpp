#pragma once

#include "gwa/amalgam.hpp"
#include "gwa/check_result.hpp"
#include "gwa/grid.hpp"
#include "gwa/norms.hpp"
#include "gwa/verify.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace gwa::io {

using Json = nlohmann::ordered_json;

/// Fixed 17-significant-digit formatting ("nan", "inf", "-inf" for non-finite values).
std::string format_real(double v);

void write_text(const std::filesystem::path& path, std::string_view content);
std::string read_text(const std::filesystem::path& path);

/// "# box=lo,hi[,lo,hi] cells=N[,M]" then "x[,y],re,im" rows.
std::string grid_function_csv(const GridFunction<double>& f);
GridFunction<double> parse_grid_function_csv(std::string_view text);

/// eps,inner_norm,weighted_term
std::string curve_csv(const NormReport<double>& report);
/// x,control_value (x,y,control_value in 2-D)
std::string control_csv(const ControlFunction<double>& cf);
/// T,log_T,norm
std::string growth_csv(const std::vector<GrowthPoint>& growth);
/// entry,<columns...>
std::string check_csv(const CheckResult& result);

Json to_json(const NormReport<double>& report);
Json to_json(const CheckResult& result);
/// Two-space indent plus a trailing newline.
std::string dump(const Json& j);

std::filesystem::path emit_plotdata(const NormReport<double>& report, const std::filesystem::path& dir);
std::filesystem::path emit_plotdata(const ControlFunction<double>& cf, const std::filesystem::path& dir);
std::filesystem::path emit_plotdata(const std::vector<GrowthPoint>& growth, const std::filesystem::path& dir);

}  // namespace gwa::io
