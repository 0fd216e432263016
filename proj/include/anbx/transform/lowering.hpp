#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "anbx/syntax/ast.hpp"

namespace anbx::transform {

struct LoweringResult {
  std::optional<syntax::ProtocolModel> model;
  std::vector<syntax::Diagnostic> diagnostics;
  /// Nonce identifiers introduced for fresh channels, in order of use.
  std::vector<std::string> generated_nonces;

  bool ok() const { return model.has_value(); }
};

/// Compiles AnBx channel modes to plain AnB messages.
///
/// Let s -> r carry M under (a|v|d):
///   (a|v|d)    s -> r : {{v,M}inv(sk(a))}pk(d)
///   (a|v|-)    s -> r : {v,M}inv(sk(a))
///   (-|-|d)    s -> r : {M}pk(d)
///   (-|-|-)    s -> r : M
///   @(a|v|d)   r -> s : {r,N}pk(a)
///              s -> r : {{N,M}inv(sk(a))}pk(d)
/// where N is a new Number named NonceK that collides with no source
/// identifier. Macros are expanded, signatures stripped, Certified removed;
/// every Certified agent learns pk, sk, inv(pk(self)), inv(sk(self)).
/// Goals keep their kinds and parties; macro uses inside them are expanded.
///
/// Fails with the model's own validation errors, or with
/// E-LOWER-UNCERTIFIED, E-LOWER-MULTIVERS, E-LOWER-FRESH-NODEST.
LoweringResult compile_channels(const syntax::ProtocolModel& model);

struct SplitResult {
  std::vector<syntax::ProtocolModel> models;
  std::vector<syntax::Diagnostic> diagnostics;

  bool ok() const { return diagnostics.empty(); }
};

/// One copy of the model per goal, named "<name>_goal<i>" (1-based).
/// E-NO-GOALS if the model has no goals.
SplitResult split_goals(const syntax::ProtocolModel& model);

/// Writes each model as "<dir>/<name>.<ext>" in canonical form, where ext
/// follows the dialect. Returns the written paths in order. Throws
/// std::runtime_error if a file cannot be written.
std::vector<std::filesystem::path> write_models(const std::vector<syntax::ProtocolModel>& models,
                                                const std::filesystem::path& dir);

}  // namespace anbx::transform
