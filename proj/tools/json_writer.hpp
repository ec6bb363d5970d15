#pragma once

#include <cmath>
#include <ostream>
#include <string>

#include "json.hpp"
#include "toricwall/format.hpp"

namespace twcli {

using json = nlohmann::ordered_json;

// nlohmann prints the shortest round-trip form of a double; outputs here pin
// every float to 17 significant digits instead, so reruns compare byte for byte.
inline void write_json(std::ostream& os, const json& j, int indent = 2, int level = 0) {
  const std::string pad(static_cast<size_t>(indent * (level + 1)), ' ');
  const std::string close(static_cast<size_t>(indent * level), ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << pad << json(it.key()).dump() << ": ";
        write_json(os, it.value(), indent, level + 1);
      }
      os << "\n" << close << "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      // short arrays of scalars stay on one line
      bool flat = j.size() <= 12;
      for (const auto& x : j) flat = flat && !x.is_structured();
      if (flat) {
        os << "[";
        for (size_t i = 0; i < j.size(); ++i) {
          if (i) os << ", ";
          write_json(os, j[i], indent, level + 1);
        }
        os << "]";
        return;
      }
      os << "[\n";
      for (size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        os << pad;
        write_json(os, j[i], indent, level + 1);
      }
      os << "\n" << close << "]";
      return;
    }
    case json::value_t::number_float: {
      double x = j.get<double>();
      if (!std::isfinite(x)) {
        os << "null";
        return;
      }
      os << tw::fmt17(x);
      return;
    }
    default:
      os << j.dump();
  }
}

}  // namespace twcli
