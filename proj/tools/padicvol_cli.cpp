// padicvol: JSON specs in, exact reports out.
//
// Exit status: 0 when every oracle check passes, 1 when a check fails, 2 on usage or spec errors.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "padicvol/padicvol.hpp"

namespace {

padicvol::ojson load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw padicvol::Error("cannot open spec '" + path + "'");
  try {
    return padicvol::ojson::parse(in);
  } catch (const padicvol::ojson::parse_error& e) {
    throw padicvol::Error("malformed JSON in '" + path + "': " + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact p-adic volumes of quotient stacks, torsors, Hasse invariants, Fourier identities and isogenies"};
  app.require_subcommand(1, 1);

  padicvol::RunConfig cfg;
  std::string spec_path;
  std::string format = "json";
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"volume", "Weil volume of a scheme or stringy volume of a stack, with oracle cross-checks"},
      {"inertia", "Twisted inertia classes of a stack"},
      {"torsors", "H^1 classes, classification and algebra shapes"},
      {"hasse", "Hasse invariant versus specialization on [A^1/mu_N]"},
      {"fourier", "Fourier transforms and the main identity with its consequences"},
      {"isogeny", "Point counts across rational 2-isogenies"},
      {"verify-all", "Run the built-in suite"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    auto* opt = sub->add_option("--spec", spec_path, "JSON spec file");
    if (name != "verify-all") opt->required()->check(CLI::ExistingFile);
    sub->add_option("--level", cfg.level, "Oracle depth")->check(CLI::PositiveNumber);
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));
    sub->add_option("--jobs", cfg.jobs, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--max-cells", cfg.max_cells, "Enumeration guard");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    padicvol::ojson spec = spec_path.empty() ? padicvol::ojson::object() : load_spec(spec_path);
    auto report = padicvol::run_command(cmd, spec, cfg);
    std::cout << padicvol::render(report, format);
    return report.pass() ? 0 : 1;
  } catch (const padicvol::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: bad spec: " << e.what() << "\n";
    return 2;
  }
}
