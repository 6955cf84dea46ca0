#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cosserat/expression.hpp"

namespace cosserat {

/// Parse or validation failure; `field` is "section.key" (or the section).
class ScenarioError : public Error {
  public:
    ScenarioError(const std::string& source, int line, const std::string& field, const std::string& msg)
        : Error(source + (line > 0 ? ":" + std::to_string(line) : std::string()) +
                (field.empty() ? std::string() : ": field '" + field + "'") + ": " + msg),
          line(line), field(field) {}
    int line;
    std::string field;
};

/// Scenario file: `key = value` lines grouped under `[section]` headers
/// (dotted names such as `[field.chi]` are plain section names), `#`
/// comments, keys before the first header belong to the top-level section "".
class Scenario {
  public:
    struct Entry {
        std::string section;
        std::string key;
        std::string value;
        int line = 0;
    };

    static Scenario parse(const std::string& text, const std::string& source);
    /// Throws ScenarioError when the file cannot be read.
    static Scenario load(const std::string& path);

    const std::string& source() const { return source_; }
    const std::vector<Entry>& entries() const { return entries_; }
    std::vector<std::string> sections() const;

    bool has_section(const std::string& section) const;
    bool has(const std::string& section, const std::string& key) const;
    const Entry& entry(const std::string& section, const std::string& key) const;

    std::string text(const std::string& section, const std::string& key) const;
    std::string text_or(const std::string& section, const std::string& key, const std::string& fallback) const;
    double number(const std::string& section, const std::string& key) const;
    double number_or(const std::string& section, const std::string& key, double fallback) const;
    int integer_or(const std::string& section, const std::string& key, int fallback) const;
    bool flag_or(const std::string& section, const std::string& key, bool fallback) const;
    Expression expression(const std::string& section, const std::string& key) const;
    ExpressionList expressions(const std::string& section, const std::string& key, std::size_t count) const;

    /// Error tied to a field, carrying its line when present.
    ScenarioError error(const std::string& section, const std::string& key, const std::string& msg) const;
    ScenarioError section_error(const std::string& section, const std::string& msg) const;

    /// Copy with one value replaced or added.
    Scenario with(const std::string& section, const std::string& key, const std::string& value) const;

  private:
    std::string source_;
    std::vector<Entry> entries_;
};

}  // namespace cosserat
