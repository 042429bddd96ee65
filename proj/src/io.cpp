#include "gtd/io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>

namespace gtd {

namespace {

using ordered_json = nlohmann::ordered_json;

std::optional<std::vector<long long>> int_array(const ordered_json& j) {
    if (!j.is_array()) return std::nullopt;
    std::vector<long long> out;
    out.reserve(j.size());
    for (const auto& v : j) {
        if (!v.is_number_integer()) return std::nullopt;
        out.push_back(v.get<long long>());
    }
    return out;
}

std::optional<std::vector<double>> real_array(const ordered_json& j) {
    if (!j.is_array()) return std::nullopt;
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& v : j) {
        if (!v.is_number()) return std::nullopt;
        out.push_back(v.get<double>());
    }
    return out;
}

}  // namespace

std::string to_json(const signature& s) {
    ordered_json j;
    j["parts"] = s.parts;
    return j.dump();
}

std::string to_json(const gt_scheme& s) {
    ordered_json j;
    auto& levels = j["levels"] = ordered_json::array();
    for (const auto& level : s.levels) levels.push_back(level.parts);
    return j.dump();
}

std::string to_json(const omega_point& w) {
    ordered_json j;
    j["alpha_plus"] = w.alpha_plus;
    j["beta_plus"] = w.beta_plus;
    j["alpha_minus"] = w.alpha_minus;
    j["beta_minus"] = w.beta_minus;
    j["delta_plus"] = w.delta_plus;
    j["delta_minus"] = w.delta_minus;
    return j.dump();
}

std::string to_json(const event_record& e) {
    ordered_json j;
    j["t"] = e.t;
    j["k"] = e.level;
    j["i"] = e.index;
    j["dir"] = e.dir;
    j["chain"] = e.chain;
    return j.dump();
}

std::optional<signature> signature_from_json(const std::string& text) {
    ordered_json j = ordered_json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("parts")) return std::nullopt;
    auto parts = int_array(j["parts"]);
    if (!parts) return std::nullopt;
    signature s(std::move(*parts));
    if (!s.valid()) return std::nullopt;
    return s;
}

std::optional<gt_scheme> scheme_from_json(const std::string& text) {
    ordered_json j = ordered_json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("levels") || !j["levels"].is_array()) {
        return std::nullopt;
    }
    gt_scheme s;
    for (const auto& level : j["levels"]) {
        auto parts = int_array(level);
        if (!parts) return std::nullopt;
        s.levels.emplace_back(std::move(*parts));
    }
    if (!s.valid()) return std::nullopt;
    return s;
}

std::optional<omega_point> omega_from_json(const std::string& text) {
    ordered_json j = ordered_json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) return std::nullopt;
    omega_point w;
    for (const char* key : {"alpha_plus", "beta_plus", "alpha_minus", "beta_minus"}) {
        if (!j.contains(key)) return std::nullopt;
    }
    auto ap = real_array(j["alpha_plus"]);
    auto bp = real_array(j["beta_plus"]);
    auto am = real_array(j["alpha_minus"]);
    auto bm = real_array(j["beta_minus"]);
    if (!ap || !bp || !am || !bm) return std::nullopt;
    w.alpha_plus = std::move(*ap);
    w.beta_plus = std::move(*bp);
    w.alpha_minus = std::move(*am);
    w.beta_minus = std::move(*bm);
    if (!j.contains("delta_plus") || !j["delta_plus"].is_number() ||
        !j.contains("delta_minus") || !j["delta_minus"].is_number()) {
        return std::nullopt;
    }
    w.delta_plus = j["delta_plus"].get<double>();
    w.delta_minus = j["delta_minus"].get<double>();
    if (!w.valid()) return std::nullopt;
    return w;
}

std::string csv_escape(const std::string& field) {
    bool needs_quote = field.find_first_of(",\"\r\n") != std::string::npos;
    if (!needs_quote) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

std::string csv_row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += csv_escape(fields[i]);
    }
    out += "\r\n";
    return out;
}

std::string format_double(double x) {
    // nlohmann's writer already emits shortest-round-trip doubles; reuse it
    // so CSV and JSON renderings of the same value agree byte for byte.
    return nlohmann::json(x).dump();
}

}  // namespace gtd
