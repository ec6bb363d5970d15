#pragma once

#include <cstdint>
#include <string>

#include "scenario.hpp"

namespace twcli {

struct Report {
  json body = json::object();
  json checks = json::array();
  bool ok = true;
  // extra files written next to the report: name -> content
  std::vector<std::pair<std::string, std::string>> files;

  void check(const std::string& name, bool pass, const std::string& detail = {});
};

Report cmd_fans(const Scenario& sc, std::uint64_t seed);
Report cmd_wallcross(const Scenario& sc, std::uint64_t seed);
Report cmd_critical(const Scenario& sc, std::uint64_t seed);
Report cmd_track(const Scenario& sc, std::uint64_t seed);
Report cmd_mutate(const Scenario& sc, std::uint64_t seed);
Report cmd_euler(const Scenario& sc, std::uint64_t seed);
Report cmd_orlov(const Scenario& sc, std::uint64_t seed);
Report cmd_gkz(const Scenario& sc, std::uint64_t seed);

}  // namespace twcli
