#include "anbx/syntax/source.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace anbx::syntax {

std::string_view to_string(Dialect d) { return d == Dialect::AnB ? "AnB" : "AnBx"; }

Dialect dialect_for_path(const std::filesystem::path& path) {
  return path.extension() == ".AnB" ? Dialect::AnB : Dialect::AnBx;
}

SourceRange join(const SourceRange& a, const SourceRange& b) {
  SourceRange r;
  if (a.begin <= b.begin) {
    r.begin = a.begin;
    r.start = a.start;
  } else {
    r.begin = b.begin;
    r.start = b.start;
  }
  if (a.end >= b.end) {
    r.end = a.end;
    r.stop = a.stop;
  } else {
    r.end = b.end;
    r.stop = b.stop;
  }
  return r;
}

SourceFile SourceFile::from_text(std::string text, Dialect dialect, std::filesystem::path path) {
  return SourceFile{std::move(path), dialect, std::move(text)};
}

SourceFile SourceFile::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return SourceFile{path, dialect_for_path(path), buf.str()};
}

std::string_view to_string(Severity s) {
  switch (s) {
    case Severity::Error: return "error";
    case Severity::Warning: return "warning";
    case Severity::Info: return "info";
  }
  return "error";
}

std::string format_diagnostic(const Diagnostic& d) {
  std::ostringstream out;
  out << to_string(d.severity) << ' ' << d.code << ' ' << d.range.start.line << ':'
      << d.range.start.column << '-' << d.range.stop.line << ':' << d.range.stop.column << ' '
      << d.message;
  return out.str();
}

bool has_errors(const std::vector<Diagnostic>& diags) {
  return std::any_of(diags.begin(), diags.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

void sort_by_range(std::vector<Diagnostic>& diags) {
  std::stable_sort(diags.begin(), diags.end(), [](const Diagnostic& a, const Diagnostic& b) {
    if (a.range.begin != b.range.begin) return a.range.begin < b.range.begin;
    return a.range.end < b.range.end;
  });
}

std::string apply_edit(std::string_view text, const Edit& edit) {
  if (edit.range.begin > edit.range.end || edit.range.end > text.size())
    throw std::out_of_range("edit range outside text");
  std::string out;
  out.reserve(text.size() + edit.replacement.size());
  out.append(text.substr(0, edit.range.begin));
  out.append(edit.replacement);
  out.append(text.substr(edit.range.end));
  return out;
}

}  // namespace anbx::syntax
