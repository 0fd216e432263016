#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "anbx/syntax/parser.hpp"

namespace anbx::test {

inline std::filesystem::path fixture_path(const std::string& name) {
  return std::filesystem::path(ANBX_FIXTURES) / name;
}

inline std::vector<std::filesystem::path> corpus() {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(ANBX_FIXTURES))
    if (e.path().extension() == ".AnB" || e.path().extension() == ".AnBx") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

inline syntax::ProtocolModel load_model(const std::string& name) {
  auto r = syntax::parse(syntax::SourceFile::load(fixture_path(name)));
  if (!r.model) throw std::runtime_error("fixture does not parse: " + name);
  return *r.model;
}

}  // namespace anbx::test
