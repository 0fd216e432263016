#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace anbx::syntax {

enum class Dialect { AnBx, AnB };

std::string_view to_string(Dialect d);

/// Dialect implied by a file extension (".AnB" → AnB, anything else → AnBx).
Dialect dialect_for_path(const std::filesystem::path& path);

/// 1-based line and byte column.
struct Position {
  std::size_t line = 1;
  std::size_t column = 1;
};

/// Half-open byte range [begin, end) with the matching line/column endpoints.
struct SourceRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  Position start;
  Position stop;

  bool empty() const { return begin == end; }
  bool contains(const SourceRange& inner) const {
    return begin <= inner.begin && inner.end <= end;
  }
};

/// Smallest range covering both arguments.
SourceRange join(const SourceRange& a, const SourceRange& b);

struct SourceFile {
  std::filesystem::path path;
  Dialect dialect = Dialect::AnBx;
  std::string text;

  static SourceFile from_text(std::string text, Dialect dialect,
                              std::filesystem::path path = {});
  /// Reads a file; throws std::runtime_error if it cannot be opened.
  static SourceFile load(const std::filesystem::path& path);
};

enum class Severity { Error, Warning, Info };

std::string_view to_string(Severity s);

/// A textual replacement offered as a quick fix.
struct Edit {
  SourceRange range;
  std::string replacement;
  std::string label;
};

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string code;
  SourceRange range;
  std::string message;
  std::vector<Edit> fixes;
};

/// "severity code line:col-line:col message"
std::string format_diagnostic(const Diagnostic& d);

bool has_errors(const std::vector<Diagnostic>& diags);

/// Stable sort by range start, then end.
void sort_by_range(std::vector<Diagnostic>& diags);

/// Applies one edit to text. The edit's byte offsets must lie within text.
std::string apply_edit(std::string_view text, const Edit& edit);

}  // namespace anbx::syntax
