#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "genequo/cli/commands.hpp"
#include "genequo/error.hpp"

namespace {

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  return static_cast<bool>(out);
}

const std::map<std::string, std::string> kDescriptions{
    {"solve", "run the descent solver from one or more starting points"},
    {"certify", "issue or estimate an increase rate and spot-check it"},
    {"bounds", "check the global and local error bounds"},
    {"penalty", "test exactness of the penalty at given lambdas"},
    {"ideal", "find ideal efficient points of a finite problem"},
};

}  // namespace

int main(int argc, char** argv) {
  using namespace genequo::cli;
  CLI::App app{"genequo: generalized equations F(x) ⊆ C over closed convex cones"};
  app.require_subcommand(1, 1);
  std::string spec_path;
  std::string out_path;
  std::string plot_path;
  std::string format = "machine";
  std::optional<std::uint64_t> seed;
  for (const auto& name : command_names()) {
    auto* sub = app.add_subcommand(name, kDescriptions.at(name));
    sub->add_option("--spec", spec_path, "problem spec (JSON)")->required();
    sub->add_option("--seed", seed, "seed override (default: spec value or 42)");
    sub->add_option("--out", out_path, "report file (default: stdout)");
    sub->add_option("--format", format, "report format")->check(CLI::IsMember({"human", "machine"}));
    sub->add_option("--plot-data", plot_path, "write plot columns to this file");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(ExitCode::InputError);
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    ProblemSpec spec = load_spec(spec_path);
    if (seed) spec.seed = *seed;
    const CommandResult result = run_command(command, spec);
    const std::string text = format == "human" ? render_human(result) : render_machine(result);
    if (out_path.empty()) {
      std::cout << text;
    } else if (!write_file(out_path, text)) {
      std::cerr << "error: --out: cannot write '" << out_path << "'\n";
      return static_cast<int>(ExitCode::InputError);
    }
    if (!plot_path.empty() && !write_file(plot_path, result.plot)) {
      std::cerr << "error: --plot-data: cannot write '" << plot_path << "'\n";
      return static_cast<int>(ExitCode::InputError);
    }
    return static_cast<int>(result.exit);
  } catch (const genequo::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::InputError);
  } catch (const genequo::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::InputError);
  }
}
