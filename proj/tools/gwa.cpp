#include "gwa/config.hpp"
#include "gwa/io.hpp"
#include "gwa/run.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>

namespace {

struct SubcommandFlags {
  gwa::Subcommand kind;
  CLI::App* app = nullptr;
  std::map<std::string, std::string> values;
  std::string config_path;
  bool all = false;
};

const char* describe(gwa::Subcommand s) {
  switch (s) {
    case gwa::Subcommand::Norm: return "weighted L^p norm of a sampled function";
    case gwa::Subcommand::Grand: return "generalized grand Lebesgue norm with its eps curve";
    case gwa::Subcommand::Amalgam: return "Wiener amalgam norm and control function";
    case gwa::Subcommand::Maximal: return "centered Hardy-Littlewood maximal function";
    case gwa::Subcommand::Verify: return "run the property checks over the seeded corpus";
  }
  return "";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grand Wiener amalgam norms, maximal functions and executable checks"};
  app.require_subcommand(1);

  std::vector<SubcommandFlags> subs;
  for (gwa::Subcommand s : {gwa::Subcommand::Norm, gwa::Subcommand::Grand, gwa::Subcommand::Amalgam,
                            gwa::Subcommand::Maximal, gwa::Subcommand::Verify}) {
    SubcommandFlags flags;
    flags.kind = s;
    subs.push_back(flags);
  }
  for (auto& sub : subs) {
    sub.app = app.add_subcommand(gwa::to_string(sub.kind), describe(sub.kind));
    sub.app->add_option("--config", sub.config_path, "key = value configuration file");
    for (const auto& key : gwa::config_keys(sub.kind)) {
      if (key == "subcommand") continue;
      const std::string flag = key == "output_dir" ? "--out" : "--" + key;
      sub.app->add_option_function<std::string>(
          flag, [&sub, key](const std::string& v) { sub.values[key] = v; }, "sets '" + key + "'");
    }
    if (sub.kind == gwa::Subcommand::Verify) sub.app->add_flag("--all", sub.all, "run every check");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : gwa::kExitConfig;
  }

  for (auto& sub : subs) {
    if (!sub.app->parsed()) continue;
    std::vector<gwa::ConfigEntry> entries;
    try {
      if (!sub.config_path.empty()) {
        for (auto e : gwa::config_entries(gwa::io::read_text(sub.config_path))) {
          e.origin = sub.config_path + " " + e.origin;
          if (e.key == "subcommand" && e.value != gwa::to_string(sub.kind)) {
            std::cerr << "error: " << e.origin << ": config is for '" << e.value << "', not '"
                      << gwa::to_string(sub.kind) << "'\n";
            return gwa::kExitConfig;
          }
          entries.push_back(e);
        }
      }
      entries.push_back({"subcommand", gwa::to_string(sub.kind), "command line"});
      if (sub.all) entries.push_back({"checks", "all", "--all"});
      for (const auto& [key, value] : sub.values)
        entries.push_back({key, value, key == "output_dir" ? "--out" : "--" + key});
      const gwa::RunConfig config = gwa::build_config(entries);
      return gwa::run(config, std::cout, std::cerr);
    } catch (const gwa::ConfigError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return gwa::kExitConfig;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return gwa::kExitConfig;
    }
  }
  return gwa::kExitConfig;
}
