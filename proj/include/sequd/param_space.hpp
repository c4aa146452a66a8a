#pragma once

// Mapping between the unit hypercube and typed hyperparameter configurations.
// Continuous and integer parameters take one unit coordinate each; a
// categorical parameter takes one dummy coordinate per category and decodes
// by argmax.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

namespace sequd {

enum class ParamKind { continuous, integer, categorical };
enum class Scale { linear, log2, log10 };

/// Schema or decoding error; the message starts with the offending location.
class SpaceError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct ParamSpec {
    std::string name;
    ParamKind kind = ParamKind::continuous;
    double lo = 0.0;
    double hi = 1.0;
    Scale scale = Scale::linear;
    std::vector<std::string> categories;

    static ParamSpec continuous(std::string name, double lo, double hi, Scale scale = Scale::linear) {
        return {std::move(name), ParamKind::continuous, lo, hi, scale, {}};
    }
    static ParamSpec integer(std::string name, double lo, double hi, Scale scale = Scale::linear) {
        return {std::move(name), ParamKind::integer, lo, hi, scale, {}};
    }
    static ParamSpec categorical(std::string name, std::vector<std::string> categories) {
        return {std::move(name), ParamKind::categorical, 0.0, 0.0, Scale::linear, std::move(categories)};
    }

    /// Number of unit-cube coordinates this parameter occupies.
    [[nodiscard]] std::size_t width() const noexcept {
        return kind == ParamKind::categorical ? categories.size() : 1;
    }

    void validate() const {
        if (name.empty()) throw SpaceError("parameter name must be non-empty");
        if (kind == ParamKind::categorical) {
            if (categories.size() < 2) throw SpaceError(name + ": categorical needs at least 2 categories");
            return;
        }
        if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) throw SpaceError(name + ": require lo < hi");
        if (scale != Scale::linear && !(lo > 0.0)) throw SpaceError(name + ": log scale requires lo > 0");
        if (kind == ParamKind::integer && (lo != std::floor(lo) || hi != std::floor(hi))) {
            throw SpaceError(name + ": integer bounds must be whole numbers");
        }
    }
};

/// Bounds in the scale-transformed space that the unit interval maps onto linearly.
inline std::pair<double, double> bounds_transformed(const ParamSpec& spec) {
    switch (spec.kind) {
        case ParamKind::categorical:
            throw SpaceError(spec.name + ": categorical parameters have no numeric bounds");
        default:
            break;
    }
    switch (spec.scale) {
        case Scale::log2: return {std::log2(spec.lo), std::log2(spec.hi)};
        case Scale::log10: return {std::log10(spec.lo), std::log10(spec.hi)};
        case Scale::linear: break;
    }
    return {spec.lo, spec.hi};
}

namespace detail {

inline double inverse_scale(double v, Scale scale) {
    switch (scale) {
        case Scale::log2: return std::exp2(v);
        case Scale::log10: return std::pow(10.0, v);
        case Scale::linear: break;
    }
    return v;
}

}  // namespace detail

using ParamValue = std::variant<double, std::int64_t, std::string>;

/// Decoded configuration in parameter order.
struct TrialConfig {
    std::vector<std::pair<std::string, ParamValue>> values;

    [[nodiscard]] const ParamValue& at(const std::string& name) const {
        for (const auto& [k, v] : values) {
            if (k == name) return v;
        }
        throw std::out_of_range("no parameter named '" + name + "'");
    }

    /// Numeric view of parameter i (integers widen; categoricals are an error).
    [[nodiscard]] double number(std::size_t i) const {
        const ParamValue& v = values.at(i).second;
        if (const auto* d = std::get_if<double>(&v)) return *d;
        if (const auto* n = std::get_if<std::int64_t>(&v)) return static_cast<double>(*n);
        throw std::invalid_argument("parameter '" + values[i].first + "' is categorical");
    }

    [[nodiscard]] nlohmann::json to_json() const {
        nlohmann::json out = nlohmann::json::object();
        for (const auto& [k, v] : values) {
            std::visit([&, &key = k](const auto& x) { out[key] = x; }, v);
        }
        return out;
    }

    friend bool operator==(const TrialConfig&, const TrialConfig&) = default;
};

class SearchSpace {
public:
    SearchSpace() = default;
    explicit SearchSpace(std::vector<ParamSpec> params) : params_(std::move(params)) {
        for (std::size_t i = 0; i < params_.size(); ++i) {
            try {
                params_[i].validate();
            } catch (const SpaceError& e) {
                throw SpaceError("space[" + std::to_string(i) + "]: " + e.what());
            }
            for (std::size_t j = 0; j < i; ++j) {
                if (params_[j].name == params_[i].name) {
                    throw SpaceError("space[" + std::to_string(i) + "]: duplicate parameter name '" +
                                     params_[i].name + "'");
                }
            }
        }
    }

    /// Continuous linear box, parameters named x1..xs.
    static SearchSpace box(std::span<const std::pair<double, double>> domain) {
        std::vector<ParamSpec> params;
        for (std::size_t i = 0; i < domain.size(); ++i) {
            params.push_back(ParamSpec::continuous("x" + std::to_string(i + 1), domain[i].first, domain[i].second));
        }
        return SearchSpace(std::move(params));
    }

    [[nodiscard]] const std::vector<ParamSpec>& params() const noexcept { return params_; }
    [[nodiscard]] std::size_t size() const noexcept { return params_.size(); }

    /// Unit-cube dimension: one per numeric parameter plus one per category.
    [[nodiscard]] std::size_t dimension() const noexcept {
        std::size_t s = 0;
        for (const auto& p : params_) s += p.width();
        return s;
    }

    [[nodiscard]] TrialConfig decode(std::span<const double> unit) const {
        if (unit.size() != dimension()) {
            throw SpaceError("decode: point has " + std::to_string(unit.size()) + " coordinates, space needs " +
                             std::to_string(dimension()));
        }
        for (std::size_t i = 0; i < unit.size(); ++i) {
            if (!(unit[i] >= 0.0 && unit[i] <= 1.0)) {
                throw SpaceError("decode: coordinate " + std::to_string(i) + " = " + std::to_string(unit[i]) +
                                 " outside [0,1]");
            }
        }
        TrialConfig out;
        std::size_t pos = 0;
        for (const auto& p : params_) {
            if (p.kind == ParamKind::categorical) {
                std::size_t best = 0;
                for (std::size_t k = 1; k < p.categories.size(); ++k) {
                    if (unit[pos + k] > unit[pos + best]) best = k;
                }
                out.values.emplace_back(p.name, p.categories[best]);
            } else {
                const auto [lo_t, hi_t] = bounds_transformed(p);
                const double value = detail::inverse_scale(lo_t + unit[pos] * (hi_t - lo_t), p.scale);
                if (p.kind == ParamKind::integer) {
                    const double rounded = std::floor(value + 0.5);
                    out.values.emplace_back(p.name, static_cast<std::int64_t>(std::clamp(rounded, p.lo, p.hi)));
                } else {
                    out.values.emplace_back(p.name, std::clamp(value, p.lo, p.hi));
                }
            }
            pos += p.width();
        }
        return out;
    }

private:
    std::vector<ParamSpec> params_;
};

// ---------------------------------------------------------------------------
// JSON space definition:
//   [{"name":"gamma","kind":"continuous","lo":1.52587890625e-05,"hi":64.0,"scale":"log2"},
//    {"name":"booster","kind":"categorical","categories":["gbtree","gblinear"]}]

inline SearchSpace search_space_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw SpaceError("space: expected a JSON array of parameter objects");
    std::vector<ParamSpec> params;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string where = "space[" + std::to_string(i) + "]";
        const auto& e = j[i];
        if (!e.is_object()) throw SpaceError(where + ": expected an object");
        auto field = [&](const char* key) -> const nlohmann::json& {
            if (!e.contains(key)) throw SpaceError(where + ": missing field '" + key + "'");
            return e.at(key);
        };
        auto number = [&](const char* key) {
            const auto& v = field(key);
            if (!v.is_number()) throw SpaceError(where + "." + key + ": expected a number");
            return v.get<double>();
        };
        const auto& name = field("name");
        if (!name.is_string()) throw SpaceError(where + ".name: expected a string");
        const auto& kind_j = field("kind");
        const std::string kind = kind_j.is_string() ? kind_j.get<std::string>() : "";

        ParamSpec spec;
        spec.name = name.get<std::string>();
        if (kind == "continuous" || kind == "integer") {
            spec.kind = kind == "continuous" ? ParamKind::continuous : ParamKind::integer;
            spec.lo = number("lo");
            spec.hi = number("hi");
            const std::string scale = e.contains("scale") && e["scale"].is_string() ? e["scale"].get<std::string>()
                                      : e.contains("scale") ? "?"
                                                            : "linear";
            if (scale == "linear") spec.scale = Scale::linear;
            else if (scale == "log2") spec.scale = Scale::log2;
            else if (scale == "log10") spec.scale = Scale::log10;
            else throw SpaceError(where + ".scale: expected \"linear\", \"log2\" or \"log10\"");
        } else if (kind == "categorical") {
            spec.kind = ParamKind::categorical;
            const auto& cats = field("categories");
            if (!cats.is_array()) throw SpaceError(where + ".categories: expected an array of strings");
            for (std::size_t k = 0; k < cats.size(); ++k) {
                if (!cats[k].is_string()) {
                    throw SpaceError(where + ".categories[" + std::to_string(k) + "]: expected a string");
                }
                spec.categories.push_back(cats[k].get<std::string>());
            }
        } else {
            throw SpaceError(where + ".kind: expected \"continuous\", \"integer\" or \"categorical\"");
        }
        params.push_back(std::move(spec));
    }
    return SearchSpace(std::move(params));
}

/// Parses a space definition document; syntax errors report the byte offset.
inline SearchSpace search_space_from_string(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SpaceError("space: JSON syntax error at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    return search_space_from_json(j);
}

inline nlohmann::json to_json(const SearchSpace& space) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& p : space.params()) {
        nlohmann::json e = {{"name", p.name}};
        if (p.kind == ParamKind::categorical) {
            e["kind"] = "categorical";
            e["categories"] = p.categories;
        } else {
            e["kind"] = p.kind == ParamKind::continuous ? "continuous" : "integer";
            e["lo"] = p.lo;
            e["hi"] = p.hi;
            e["scale"] = p.scale == Scale::log2 ? "log2" : p.scale == Scale::log10 ? "log10" : "linear";
        }
        out.push_back(std::move(e));
    }
    return out;
}

}  // namespace sequd
