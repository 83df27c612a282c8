//===- support.hpp - Shared helpers for the unit tests ----------*- C++ -*-===//
#pragma once

#include "semverdiff/mvil.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace semverdiff::test {

inline std::filesystem::path source_dir() { return SEMVERDIFF_SOURCE_DIR; }

inline std::filesystem::path case_dir(const std::string &name) {
  return source_dir() / "corpus" / "cases" / name;
}

inline ModuleSnapshot snapshot(std::string_view text,
                               const std::string &version = "1.0.0") {
  ModuleSnapshot s;
  s.version = version;
  for (auto &c : parse_module(text))
    s.classes.emplace(c.name, std::move(c));
  return s;
}

inline ModuleSnapshot load_case(const std::string &name, const char *side) {
  return load_snapshot(case_dir(name) / side);
}

} // namespace semverdiff::test
