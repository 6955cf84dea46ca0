#include "cosserat/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace cosserat {

namespace {

std::string quoted(const std::string& s) { return nlohmann::json(s).dump(); }

std::string json_number(double v) {
    if (std::isfinite(v)) return format_number(v);
    return quoted(format_number(v));
}

std::string order_text(const std::optional<double>& o) { return o ? format_number(*o) : "exact"; }

std::string pad(const std::string& s, std::size_t w) { return s.size() >= w ? s + " " : s + std::string(w - s.size(), ' '); }

// {"a":1,"b":"x"} from pre-encoded values
class Record {
  public:
    explicit Record(const std::string& type) { add_raw("record", quoted(type)); }
    Record& add(const std::string& k, const std::string& v) { return add_raw(k, quoted(v)); }
    Record& add(const std::string& k, double v) { return add_raw(k, json_number(v)); }
    Record& add(const std::string& k, int v) { return add_raw(k, std::to_string(v)); }
    Record& add(const std::string& k, bool v) { return add_raw(k, v ? "true" : "false"); }
    Record& add_raw(const std::string& k, const std::string& v) {
        body_ += (body_.empty() ? "" : ",") + quoted(k) + ":" + v;
        return *this;
    }
    std::string str() const { return "{" + body_ + "}"; }

  private:
    std::string body_;
};

void trace_lines(std::ostream& out, const std::vector<SolverStep>& trace, const std::string& prefix) {
    for (const auto& t : trace)
        out << prefix << pad(std::to_string(t.iteration), 11) << pad(format_number(t.residual), 26)
            << format_number(t.step) << "\n";
}

Record iteration_record(const SolverStep& t) {
    Record rec("iteration");
    rec.add("iteration", t.iteration).add("residual", t.residual).add("step", t.step);
    return rec;
}

void check_line(std::ostream& out, const CheckResult& c) {
    out << pad(c.name, 24) << pad(format_number(c.inf_norm), 26) << pad(format_number(c.l2_norm), 26)
        << pad(format_number(c.tolerance), 26) << pad(c.pass ? "pass" : "FAIL", 6) << c.detail << "\n";
}

}  // namespace

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
    return buf;
}

void write_table(const Report& r, std::ostream& out) {
    out << "scenario  " << r.name << "\n";
    out << "source    " << r.source << "\n";
    out << "kind      " << r.kind << "\n";
    out << "mode      " << r.mode << "\n";
    out << "tol-scale " << format_number(r.tol_scale) << "\n";
    out << "\n# input\n";
    for (const auto& [k, v] : r.echo) out << "  " << k << " = " << v << "\n";

    if (r.mode == "study") {
        out << "\n# levels\n";
        out << pad("level", 7) << pad("nodes", 7) << pad("spacing", 26);
        if (!r.levels.empty())
            for (const auto& c : r.levels.front().checks) out << pad(c.name, 26);
        out << "\n";
        for (std::size_t l = 0; l < r.levels.size(); ++l) {
            const auto& lv = r.levels[l];
            out << pad(std::to_string(l), 7) << pad(std::to_string(lv.nodes), 7) << pad(format_number(lv.spacing), 26);
            for (const auto& c : lv.checks) out << pad(format_number(c.inf_norm), 26);
            out << "\n";
        }
        out << "\n# orders (accepted range " << format_number(r.order_min) << " to " << format_number(r.order_max)
            << ")\n";
        for (const auto& o : r.orders) {
            out << pad(o.name, 24);
            for (const auto& v : o.orders) out << pad(order_text(v), 26);
            if (!o.monotone) out << "non-monotone ";
            out << (o.pass ? "pass" : "FAIL") << "\n";
        }
    }

    bool traced = !r.trace.empty();
    for (const auto& lv : r.levels) traced = traced || !lv.trace.empty();
    if (traced) {
        out << "\n# newton\n";
        if (r.mode == "study") {
            out << pad("level", 7) << pad("iteration", 11) << pad("residual", 26) << "step\n";
            for (std::size_t l = 0; l < r.levels.size(); ++l) trace_lines(out, r.levels[l].trace, pad(std::to_string(l), 7));
        } else {
            out << pad("iteration", 11) << pad("residual", 26) << "step\n";
            trace_lines(out, r.trace, "");
        }
    }

    out << "\n# checks" << (r.mode == "study" ? " (finest level)" : "") << "\n";
    out << pad("check", 24) << pad("inf_norm", 26) << pad("l2_norm", 26) << pad("tolerance", 26) << pad("status", 6)
        << "detail\n";
    for (const auto& c : r.checks) check_line(out, c);
    out << "\nresult    " << (r.pass ? "pass" : "FAIL") << "\n";
    out << "\n# timing\n";
    out << "elapsed_ms " << format_number(r.elapsed_ms) << "\n";
}

void write_records(const Report& r, std::ostream& out) {
    out << Record("scenario")
               .add("name", r.name)
               .add("source", r.source)
               .add("kind", r.kind)
               .add("mode", r.mode)
               .add("tol_scale", r.tol_scale)
               .str()
        << "\n";
    for (const auto& [k, v] : r.echo) out << Record("input").add("field", k).add("value", v).str() << "\n";
    for (std::size_t l = 0; l < r.levels.size(); ++l) {
        const auto& lv = r.levels[l];
        for (const auto& c : lv.checks) {
            out << Record("level")
                       .add("level", static_cast<int>(l))
                       .add("nodes", lv.nodes)
                       .add("spacing", lv.spacing)
                       .add("check", c.name)
                       .add("inf_norm", c.inf_norm)
                       .add("l2_norm", c.l2_norm)
                       .str()
                << "\n";
        }
    }
    for (const auto& t : r.trace) out << iteration_record(t).str() << "\n";
    for (std::size_t l = 0; l < r.levels.size(); ++l)
        for (const auto& t : r.levels[l].trace)
            out << Record("iteration")
                       .add("level", static_cast<int>(l))
                       .add("iteration", t.iteration)
                       .add("residual", t.residual)
                       .add("step", t.step)
                       .str()
                << "\n";
    for (const auto& o : r.orders) {
        std::string list = "[";
        for (std::size_t i = 0; i < o.orders.size(); ++i) {
            list += (i ? "," : "") + (o.orders[i] ? json_number(*o.orders[i]) : quoted("exact"));
        }
        list += "]";
        out << Record("orders")
                   .add("check", o.name)
                   .add_raw("orders", list)
                   .add("monotone", o.monotone)
                   .add("pass", o.pass)
                   .str()
            << "\n";
    }
    for (const auto& c : r.checks) {
        out << Record("check")
                   .add("name", c.name)
                   .add("inf_norm", c.inf_norm)
                   .add("l2_norm", c.l2_norm)
                   .add("tolerance", c.tolerance)
                   .add("pass", c.pass)
                   .add("detail", c.detail)
                   .str()
            << "\n";
    }
    out << Record("summary").add("pass", r.pass).str() << "\n";
    out << Record("timing").add("elapsed_ms", r.elapsed_ms).str() << "\n";
}

}  // namespace cosserat
