#pragma once

#include <cstdio>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "symbi/types.hpp"

namespace symbi {

namespace detail {

inline std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string fmt_complex(Complex v) {
    return "(" + fmt_double(v.real()) + "," + fmt_double(v.imag()) + ")";
}

}  // namespace detail

/// Ordered key/value document with pass/fail assertions. Serialization is
/// deterministic (stable field order, fixed float formatting) so identical
/// runs produce byte-identical reports, and parse/serialize round-trips are
/// lossless.
class Report {
  public:
    Report() = default;
    explicit Report(std::string title) : title_(std::move(title)) {}

    const std::string& title() const { return title_; }

    void add(const std::string& key, const std::string& value) { entries_.emplace_back(key, value); }
    void add(const std::string& key, const char* value) { entries_.emplace_back(key, value); }
    void add(const std::string& key, double value) { add(key, detail::fmt_double(value)); }
    void add(const std::string& key, int value) { add(key, std::to_string(value)); }
    void add(const std::string& key, long value) { add(key, std::to_string(value)); }
    void add(const std::string& key, Eigen::Index value) { add(key, std::to_string(value)); }
    void add(const std::string& key, bool value) { add(key, value ? "true" : "false"); }
    void add(const std::string& key, Complex value) { add(key, detail::fmt_complex(value)); }

    /// Record a named assertion with the measured quantity it was judged on.
    void add_assert(const std::string& name, bool passed, double measured) {
        entries_.emplace_back("assert." + name, std::string(passed ? "PASS" : "FAIL") +
                                                    " measured=" + detail::fmt_double(measured));
        all_passed_ = all_passed_ && passed;
    }
    void add_assert(const std::string& name, bool passed) {
        entries_.emplace_back("assert." + name, std::string(passed ? "PASS" : "FAIL"));
        all_passed_ = all_passed_ && passed;
    }

    bool all_passed() const { return all_passed_; }

    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

    std::string find(const std::string& key) const {
        for (const auto& [k, v] : entries_)
            if (k == key) return v;
        return {};
    }

    std::string to_text() const {
        std::ostringstream os;
        os << "report: " << title_ << "\n";
        for (const auto& [k, v] : entries_) os << k << " = " << v << "\n";
        os << "status = " << (all_passed_ ? "PASS" : "FAIL") << "\n";
        return os.str();
    }

    static Report from_text(const std::string& text) {
        Report rep;
        std::istringstream is(text);
        std::string line;
        while (std::getline(is, line)) {
            if (line.rfind("report: ", 0) == 0) {
                rep.title_ = line.substr(8);
                continue;
            }
            auto sep = line.find(" = ");
            if (sep == std::string::npos) continue;
            std::string key = line.substr(0, sep);
            std::string value = line.substr(sep + 3);
            if (key == "status") continue;  // recomputed from assertions
            rep.entries_.emplace_back(key, value);
            if (key.rfind("assert.", 0) == 0 && value.rfind("PASS", 0) != 0)
                rep.all_passed_ = false;
        }
        return rep;
    }

  private:
    std::string title_;
    std::vector<std::pair<std::string, std::string>> entries_;
    bool all_passed_ = true;
};

}  // namespace symbi
