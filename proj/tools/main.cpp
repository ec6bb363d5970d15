#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "commands.hpp"

namespace fs = std::filesystem;
using namespace twcli;

namespace {

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw tw::Error("IOError", "cli", "cannot write " + p.string());
  out << text;
}

int run(const std::string& cmd, const std::function<Report(const Scenario&, std::uint64_t)>& fn, const std::string& scenario,
        const std::string& outdir, std::uint64_t seed) {
  fs::path out(outdir);
  try {
    fs::create_directories(out);
    Scenario sc = load_scenario(scenario);
    Report rep = fn(sc, seed);
    json doc;
    doc["command"] = cmd;
    doc["scenario"] = sc.name;
    doc["seed"] = seed;
    for (auto it = rep.body.begin(); it != rep.body.end(); ++it) doc[it.key()] = it.value();
    doc["checks"] = rep.checks;
    doc["pass"] = rep.ok;
    std::ostringstream os;
    write_json(os, doc);
    os << "\n";
    write_file(out / (cmd + ".json"), os.str());
    for (const auto& [name, text] : rep.files) write_file(out / name, text);
    int failed = 0;
    for (const auto& c : rep.checks)
      if (!c["pass"].get<bool>()) {
        ++failed;
        std::cout << "FAIL " << c["name"].get<std::string>();
        if (c.contains("detail")) std::cout << " (" << c["detail"].get<std::string>() << ")";
        std::cout << "\n";
      }
    std::cout << cmd << " " << sc.name << ": " << rep.checks.size() - failed << "/" << rep.checks.size()
              << " checks passed\n";
    return rep.ok ? 0 : 1;
  } catch (const tw::Error& e) {
    std::cerr << cmd << ": " << e.what() << "\n";
    try {
      fs::create_directories(out);
      json err = {{"command", cmd}, {"error", e.kind()}, {"module", e.module()}, {"message", e.what()}};
      std::ostringstream os;
      write_json(os, err);
      os << "\n";
      write_file(out / (cmd + ".error.json"), os.str());
    } catch (...) {
    }
    return 2;
  } catch (const std::exception& e) {
    std::cerr << cmd << ": InternalError [cli]: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Toric wall-crossing, LG mirrors and mutation of exceptional collections"};
  app.require_subcommand(1);
  const std::map<std::string, std::pair<std::string, std::function<Report(const Scenario&, std::uint64_t)>>> cmds = {
      {"fans", {"enumerate stacky fans adapted to S with their cones and lattices", cmd_fans}},
      {"wallcross", {"analyse the wall between two fans and the curve law", cmd_wallcross}},
      {"critical", {"critical points of the LG potential", cmd_critical}},
      {"track", {"track critical values along the scenario path", cmd_track}},
      {"mutate", {"evolve a marked reflection system along the path", cmd_mutate}},
      {"euler", {"Euler pairings by HRR and by the Gamma integral structure", cmd_euler}},
      {"orlov", {"Orlov decomposition of the K-group across the wall", cmd_orlov}},
      {"gkz", {"GKZ relations, symbols and the rank check", cmd_gkz}},
  };
  std::string scenario, outdir = "out";
  std::uint64_t seed = 1;
  std::string chosen;
  for (const auto& [name, info] : cmds) {
    auto* sub = app.add_subcommand(name, info.first);
    sub->add_option("--scenario", scenario, "scenario JSON file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", outdir, "output directory");
    sub->add_option("--seed", seed, "random seed");
    sub->callback([&chosen, n = name] { chosen = n; });
  }
  CLI11_PARSE(app, argc, argv);
  return run(chosen, cmds.at(chosen).second, scenario, outdir, seed);
}
