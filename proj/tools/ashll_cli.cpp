#include <cstdio>
#include <exception>
#include <filesystem>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "ashll/ashll.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitCaseFailed = 3;

void print_report(const ashll::MetricReport& r) {
  std::printf("%s %s %s\n", r.case_id.c_str(), r.scheme.c_str(), r.mesh.c_str());
  for (const auto& m : r.metrics) {
    std::printf("  %-36s %s\n", m.name.c_str(), ashll::format_double(m.value).c_str());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-volume compressible flow cases with HLL-family fluxes"};
  app.require_subcommand(1);

  std::string config_path;
  std::string preset_name;
  std::string out_dir;
  auto* run = app.add_subcommand("run", "run a case from a JSON config");
  run->add_option("--config", config_path, "case config (JSON)")->required();
  run->add_option("--preset", preset_name, "resolution preset")->check(CLI::IsMember({"ci", "paper"}));
  run->add_option("--out", out_dir, "output directory (overrides output.directory)");

  auto* list = app.add_subcommand("list-cases", "list registered cases");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate-config", "check a config without running it");
  validate->add_option("file", validate_path, "case config (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (*list) {
    for (auto id : ashll::kAllCases) {
      std::printf("%-24s %s\n", std::string(ashll::to_string(id)).c_str(),
                  std::string(ashll::describe(id)).c_str());
    }
    return kExitOk;
  }

  try {
    if (*validate) {
      const auto c = ashll::load_case_config(validate_path);
      std::printf("ok: %s %s %s\n", std::string(ashll::to_string(c.case_id)).c_str(),
                  std::string(ashll::to_string(c.solver.scheme)).c_str(), c.mesh.label().c_str());
      return kExitOk;
    }

    std::optional<ashll::Preset> preset;
    if (preset_name == "ci") preset = ashll::Preset::ci;
    if (preset_name == "paper") preset = ashll::Preset::paper;
    auto config = ashll::load_case_config(config_path, preset);
    config.solver.threads = ashll::thread_count_from_env();
    if (!out_dir.empty()) config.output.directory = out_dir;

    std::optional<std::filesystem::path> dir;
    if (!config.output.directory.empty()) dir = config.output.directory;
    print_report(ashll::run_case(config, dir));
    return kExitOk;
  } catch (const ashll::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const ashll::CaseFailedWithReport& e) {
    print_report(e.report());
    std::fprintf(stderr, "case failed: %s\n", e.what());
    return kExitCaseFailed;
  } catch (const ashll::DegenerateCell& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitCaseFailed;
  }
}
