#pragma once

#include "json.hpp"
#include "whkernel/dist.hpp"
#include "whkernel/errors.hpp"

namespace wh {

// {"type":"exponential","mu":2.0} | {"type":"erlang","k":2,"mu":3.0} |
// {"type":"hyperexp","p":[...],"mu":[...]} | {"type":"rational","num":[...],"den":[...]}
inline ServiceDistribution dist_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("type"))
        throw ConfigError("distribution spec needs a \"type\" field");
    const std::string type = j.at("type").get<std::string>();
    try {
        if (type == "exponential") return ServiceDistribution(Exponential{j.at("mu").get<double>()});
        if (type == "erlang")
            return ServiceDistribution(Erlang{j.at("k").get<int>(), j.at("mu").get<double>()});
        if (type == "hyperexp")
            return ServiceDistribution(HyperExponential{j.at("p").get<std::vector<double>>(),
                                                        j.at("mu").get<std::vector<double>>()});
        if (type == "rational")
            return ServiceDistribution(RationalLst{Poly{j.at("num").get<std::vector<double>>()},
                                                   Poly{j.at("den").get<std::vector<double>>()}});
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad distribution spec: ") + e.what());
    }
    throw ConfigError("unknown distribution type: " + type);
}

inline nlohmann::json dist_to_json(const ServiceDistribution& d) {
    nlohmann::json j;
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Exponential>) {
                j = {{"type", "exponential"}, {"mu", v.mu}};
            } else if constexpr (std::is_same_v<T, Erlang>) {
                j = {{"type", "erlang"}, {"k", v.k}, {"mu", v.mu}};
            } else if constexpr (std::is_same_v<T, HyperExponential>) {
                j = {{"type", "hyperexp"}, {"p", v.p}, {"mu", v.mu}};
            } else {
                j = {{"type", "rational"}, {"num", v.num.coeff}, {"den", v.den.coeff}};
            }
        },
        d.variant());
    return j;
}

}  // namespace wh
