#pragma once

// Structured-text (JSON) descriptions of profiles, input laws and run
// configurations. Linear units throughout; any key with a "_db" suffix is read
// as decibels and converted (10^(x/10)).

#include "classifier.hpp"
#include "decay_profile.hpp"
#include "errors.hpp"
#include "mi_oracle.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace mpcap {

using json = nlohmann::json;

namespace detail {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

inline double require_number(const json& j, const std::string& key)
{
    if (!j.contains(key) || !j.at(key).is_number())
        throw parse_error("missing or non-numeric field '" + key + "'");
    return j.at(key).get<double>();
}

inline std::vector<double> require_numbers(const json& j, const std::string& key)
{
    if (!j.contains(key) || !j.at(key).is_array())
        throw parse_error("field '" + key + "' must be an array of numbers");
    std::vector<double> out;
    for (const auto& v : j.at(key)) {
        if (!v.is_number())
            throw parse_error("field '" + key + "' must contain only numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

} // namespace detail

/// Reads `key` or `key_db` (converted to linear). Returns nullopt when neither is present.
inline std::optional<double> linear_quantity(const json& j, const std::string& key)
{
    if (j.contains(key))
        return detail::require_number(j, key);
    if (j.contains(key + "_db"))
        return detail::db_to_linear(detail::require_number(j, key + "_db"));
    return std::nullopt;
}

/// Accepts kind = finite | geometric | stretched_exp | double_exp | polynomial | tabulated.
inline decay_profile parse_profile(const json& j)
{
    if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
        throw parse_error("profile must be an object with a string 'kind'");
    const auto kind = j.at("kind").get<std::string>();
    try {
        if (kind == "finite")
            return decay_profile(finite_taps{detail::require_numbers(j, "taps")});
        if (kind == "geometric")
            return decay_profile(geometric_ratio{detail::require_number(j, "rho"), j.value("scale", 1.0)});
        if (kind == "stretched_exp")
            return decay_profile(stretched_exp{detail::require_number(j, "kappa")});
        if (kind == "double_exp")
            return decay_profile(double_exp{detail::require_number(j, "kappa")});
        if (kind == "polynomial")
            return decay_profile(polynomial_decay{detail::require_number(j, "p")});
        if (kind == "tabulated") {
            tabulated t{detail::require_numbers(j, "values"), zero_tail{}};
            const auto tail = j.value("tail", std::string("zero"));
            if (tail == "geometric")
                t.tail = geometric_tail{detail::require_number(j, "tail_rho")};
            else if (tail != "zero")
                throw parse_error("tabulated profile: tail must be 'zero' or 'geometric'");
            return decay_profile(std::move(t));
        }
    } catch (const json::exception& e) {
        throw parse_error(std::string("profile: ") + e.what());
    }
    throw parse_error("unknown profile kind '" + kind + "'");
}

inline json profile_to_json(const decay_profile& profile)
{
    struct visitor {
        json operator()(const finite_taps& k) const { return {{"kind", "finite"}, {"taps", k.taps}}; }
        json operator()(const geometric_ratio& k) const
        {
            return {{"kind", "geometric"}, {"rho", k.rho}, {"scale", k.scale}};
        }
        json operator()(const stretched_exp& k) const { return {{"kind", "stretched_exp"}, {"kappa", k.kappa}}; }
        json operator()(const double_exp& k) const { return {{"kind", "double_exp"}, {"kappa", k.kappa}}; }
        json operator()(const polynomial_decay& k) const { return {{"kind", "polynomial"}, {"p", k.p}}; }
        json operator()(const tabulated& k) const
        {
            json j = {{"kind", "tabulated"}, {"values", k.values}};
            if (const auto* g = std::get_if<geometric_tail>(&k.tail)) {
                j["tail"] = "geometric";
                j["tail_rho"] = g->rho;
            } else {
                j["tail"] = "zero";
            }
            return j;
        }
    };
    return std::visit(visitor{}, profile.kind());
}

/// kind = log_uniform {power, tau, nu} | constant {power} | two_point {power_1, power_2, q}.
/// Powers are |X|^2 values; "power_db" etc. accepted.
inline input_law parse_input_law(const json& j)
{
    if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
        throw parse_error("input law must be an object with a string 'kind'");
    const auto kind = j.at("kind").get<std::string>();
    auto power = [&](const std::string& key) {
        auto v = linear_quantity(j, key);
        if (!v)
            throw parse_error("input law: missing '" + key + "'");
        return *v;
    };
    if (kind == "log_uniform") {
        std::optional<double> p = linear_quantity(j, "power");
        if (!p && j.contains("log_power"))
            p = std::exp(detail::require_number(j, "log_power"));
        if (!p)
            throw parse_error("log_uniform law: need 'power', 'power_db' or 'log_power'");
        return log_uniform_slot{*p, j.value("tau", std::size_t{1}), j.value("nu", std::size_t{1})};
    }
    if (kind == "constant")
        return constant_modulus{power("power")};
    if (kind == "two_point")
        return two_point{power("power_1"), power("power_2"), j.value("q", 0.5)};
    throw parse_error("unknown input law kind '" + kind + "'");
}

/// Non-finite reals become strings ("inf", "-inf") or null (NaN); JSON has no encoding for them.
inline json real_to_json(double x)
{
    if (std::isnan(x))
        return nullptr;
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    return x;
}

inline json report_to_json(const classification_report& r)
{
    json witness_l = json::array();
    json ratios = json::array();
    json rates = json::array();
    for (const auto& w : r.witness) {
        witness_l.push_back(w.l);
        ratios.push_back(real_to_json(w.ratio));
        rates.push_back(real_to_json(w.decay_rate));
    }
    return {{"verdict", to_string(r.result)},
            {"rule", to_string(r.rule)},
            {"bounded_rule_fired", r.bounded_rule_fired},
            {"unbounded_rule_fired", r.unbounded_rule_fired},
            {"limit_caveat", r.limit_caveat},
            {"witness", {{"l", witness_l}, {"ratio", ratios}, {"decay_rate", rates}}}};
}

inline json load_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw parse_error("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw parse_error("'" + path + "': " + e.what());
    }
}

} // namespace mpcap
