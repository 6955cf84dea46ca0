#include "cosserat/scenario.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace cosserat {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool valid_name(const std::string& s) {
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
    });
}

std::string field_name(const std::string& section, const std::string& key) {
    if (section.empty()) return key;
    if (key.empty()) return section;
    return section + "." + key;
}

}  // namespace

Scenario Scenario::parse(const std::string& text, const std::string& source) {
    Scenario sc;
    sc.source_ = source;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw ScenarioError(source, line, "", "unterminated section header");
            section = trim(s.substr(1, s.size() - 2));
            if (!valid_name(section)) throw ScenarioError(source, line, section, "invalid section name");
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ScenarioError(source, line, "", "expected 'key = value'");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (!valid_name(key)) throw ScenarioError(source, line, field_name(section, key), "invalid key");
        if (value.empty()) throw ScenarioError(source, line, field_name(section, key), "empty value");
        if (sc.has(section, key)) {
            throw ScenarioError(source, line, field_name(section, key),
                                "duplicate key (first set on line " +
                                    std::to_string(sc.entry(section, key).line) + ")");
        }
        sc.entries_.push_back({section, key, value, line});
    }
    return sc;
}

Scenario Scenario::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ScenarioError(path, 0, "", "cannot open scenario file");
    std::ostringstream ss;
    ss << f.rdbuf();
    const auto slash = path.find_last_of('/');
    return parse(ss.str(), slash == std::string::npos ? path : path.substr(slash + 1));
}

std::vector<std::string> Scenario::sections() const {
    std::vector<std::string> out;
    for (const auto& e : entries_)
        if (std::find(out.begin(), out.end(), e.section) == out.end()) out.push_back(e.section);
    return out;
}

bool Scenario::has_section(const std::string& section) const {
    return std::any_of(entries_.begin(), entries_.end(), [&](const Entry& e) { return e.section == section; });
}

bool Scenario::has(const std::string& section, const std::string& key) const {
    return std::any_of(entries_.begin(), entries_.end(),
                       [&](const Entry& e) { return e.section == section && e.key == key; });
}

const Scenario::Entry& Scenario::entry(const std::string& section, const std::string& key) const {
    for (const auto& e : entries_)
        if (e.section == section && e.key == key) return e;
    throw error(section, key, "required field is missing");
}

std::string Scenario::text(const std::string& section, const std::string& key) const {
    return entry(section, key).value;
}

std::string Scenario::text_or(const std::string& section, const std::string& key, const std::string& fallback) const {
    return has(section, key) ? text(section, key) : fallback;
}

double Scenario::number(const std::string& section, const std::string& key) const {
    const std::string v = text(section, key);
    try {
        const Expression e = Expression::parse(v);
        if (!e.is_constant()) throw error(section, key, "expected a constant, got '" + v + "'");
        return e(Vec3::Zero());
    } catch (const ExpressionError& ex) {
        throw error(section, key, ex.what());
    }
}

double Scenario::number_or(const std::string& section, const std::string& key, double fallback) const {
    return has(section, key) ? number(section, key) : fallback;
}

int Scenario::integer_or(const std::string& section, const std::string& key, int fallback) const {
    if (!has(section, key)) return fallback;
    const std::string v = text(section, key);
    char* end = nullptr;
    errno = 0;
    const long n = std::strtol(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0' || errno != 0 || n < -1000000000L || n > 1000000000L) {
        throw error(section, key, "expected an integer, got '" + v + "'");
    }
    return static_cast<int>(n);
}

bool Scenario::flag_or(const std::string& section, const std::string& key, bool fallback) const {
    if (!has(section, key)) return fallback;
    const std::string v = text(section, key);
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    throw error(section, key, "expected true or false, got '" + v + "'");
}

Expression Scenario::expression(const std::string& section, const std::string& key) const {
    try {
        return Expression::parse(text(section, key));
    } catch (const ExpressionError& ex) {
        throw error(section, key, ex.what());
    }
}

ExpressionList Scenario::expressions(const std::string& section, const std::string& key, std::size_t count) const {
    try {
        return ExpressionList::parse(text(section, key), count);
    } catch (const ExpressionError& ex) {
        throw error(section, key, ex.what());
    }
}

ScenarioError Scenario::error(const std::string& section, const std::string& key, const std::string& msg) const {
    int line = 0;
    for (const auto& e : entries_)
        if (e.section == section && e.key == key) line = e.line;
    return ScenarioError(source_, line, field_name(section, key), msg);
}

ScenarioError Scenario::section_error(const std::string& section, const std::string& msg) const {
    int line = 0;
    for (const auto& e : entries_)
        if (e.section == section) {
            line = e.line;
            break;
        }
    return ScenarioError(source_, line, section.empty() ? "(top level)" : section, msg);
}

Scenario Scenario::with(const std::string& section, const std::string& key, const std::string& value) const {
    Scenario out = *this;
    for (auto& e : out.entries_)
        if (e.section == section && e.key == key) {
            e.value = value;
            return out;
        }
    out.entries_.push_back({section, key, value, 0});
    return out;
}

}  // namespace cosserat
