#include "coneslice/json_writer.hpp"

#include <cmath>
#include <cstdio>
#include <string>

namespace coneslice {

namespace {

void write_value(std::ostream& os, const nlohmann::ordered_json& v, int indent, int depth) {
  const auto newline = [&](int d) {
    if (indent > 0) {
      os << '\n' << std::string(static_cast<std::size_t>(indent * d), ' ');
    }
  };
  switch (v.type()) {
    case nlohmann::ordered_json::value_t::object: {
      if (v.empty()) {
        os << "{}";
        return;
      }
      os << '{';
      bool first = true;
      for (const auto& [key, item] : v.items()) {
        if (!first) os << ',';
        first = false;
        newline(depth + 1);
        os << nlohmann::ordered_json(key).dump() << (indent > 0 ? ": " : ":");
        write_value(os, item, indent, depth + 1);
      }
      newline(depth);
      os << '}';
      return;
    }
    case nlohmann::ordered_json::value_t::array: {
      if (v.empty()) {
        os << "[]";
        return;
      }
      os << '[';
      bool first = true;
      for (const auto& item : v) {
        if (!first) os << ',';
        first = false;
        newline(depth + 1);
        write_value(os, item, indent, depth + 1);
      }
      newline(depth);
      os << ']';
      return;
    }
    case nlohmann::ordered_json::value_t::number_float: {
      const double x = v.get<double>();
      if (!std::isfinite(x)) {
        os << "null";
        return;
      }
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", x);
      os << buf;
      return;
    }
    default:
      os << v.dump();
  }
}

}  // namespace

void write_json(std::ostream& os, const nlohmann::ordered_json& value, int indent) {
  write_value(os, value, indent, 0);
}

}  // namespace coneslice
