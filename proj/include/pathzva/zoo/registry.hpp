#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "pathzva/errors.hpp"
#include "pathzva/model.hpp"
#include "pathzva/zoo/dds.hpp"
#include "pathzva/zoo/fig1.hpp"
#include "pathzva/zoo/two_type.hpp"

namespace pathzva::zoo {

using Params = std::map<std::string, std::string>;

namespace detail {

inline void check_keys(const std::string& model, const Params& params, const std::set<std::string>& allowed) {
  for (const auto& [k, v] : params)
    if (!allowed.count(k)) throw ConfigError(model + ": unknown parameter '" + k + "'");
}

inline int to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    int x = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("parameter " + key + ": expected an integer, got '" + v + "'");
  }
}

inline double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("parameter " + key + ": expected a number, got '" + v + "'");
  }
}

inline bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("parameter " + key + ": expected true or false, got '" + v + "'");
}

/// Accepts plain numbers and simple fractions such as 1/50.
inline double to_ratio(const std::string& key, const std::string& v) {
  auto slash = v.find('/');
  if (slash == std::string::npos) return to_double(key, v);
  double den = to_double(key, v.substr(slash + 1));
  if (den == 0.0) throw ConfigError("parameter " + key + ": zero denominator");
  return to_double(key, v.substr(0, slash)) / den;
}

}  // namespace detail

inline std::vector<std::string> model_names() { return {"fig1", "two-type", "dds"}; }

/// Parameters understood by each model, for help output.
inline std::string model_help(const std::string& name) {
  if (name == "fig1") return "levels=<int, goal level, default 5>, orders=<bool>";
  if (name == "two-type")
    return "preset=<balanced|deferred|unbalanced, aliases fig3|fig4|table4>, k1=<int>, k2=<int>, c=<number or a/b>, "
           "orders=<bool>";
  if (name == "dds") return "strategy=<dedicated|disk-priority|proc-priority|fcfs>, orders=<bool>";
  throw ConfigError("unknown model '" + name + "'");
}

/// Builds a zoo model by name. With orders=false the model omits epsilon
/// orders and they are assigned automatically from the probabilities.
inline std::unique_ptr<MarkovModel> make_model(const std::string& name, const Params& params, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("epsilon must lie in (0,1)");
  auto get = [&](const std::string& k) -> const std::string* {
    auto it = params.find(k);
    return it == params.end() ? nullptr : &it->second;
  };
  bool orders = true;
  if (auto v = get("orders")) orders = detail::to_bool("orders", *v);

  if (name == "fig1") {
    detail::check_keys(name, params, {"levels", "orders"});
    int levels = 5;
    if (auto v = get("levels")) levels = detail::to_int("levels", *v);
    return std::make_unique<Fig1Chain>(levels, epsilon, orders);
  }
  if (name == "two-type") {
    detail::check_keys(name, params, {"preset", "k1", "k2", "c", "orders"});
    TwoTypeParams p = fig3_params(epsilon);
    if (auto v = get("preset")) {
      if (*v == "balanced" || *v == "fig3")
        p = fig3_params(epsilon);
      else if (*v == "deferred" || *v == "fig4")
        p = fig4_params(epsilon);
      else if (*v == "unbalanced" || *v == "table4")
        p = table4_params(epsilon);
      else
        throw ConfigError("two-type: unknown preset '" + *v + "'");
    }
    if (auto v = get("k1")) p.k1 = detail::to_int("k1", *v);
    if (auto v = get("k2")) p.k2 = detail::to_int("k2", *v);
    if (auto v = get("c")) p.c = detail::to_ratio("c", *v);
    p.emit_orders = orders;
    return make_two_type(p);
  }
  if (name == "dds") {
    detail::check_keys(name, params, {"strategy", "orders"});
    DdsSpec d;
    d.epsilon = epsilon;
    if (auto v = get("strategy")) d.strategy = parse_dds_strategy(*v);
    d.emit_orders = orders;
    return make_dds(d);
  }
  throw ConfigError("unknown model '" + name + "' (fig1|two-type|dds)");
}

}  // namespace pathzva::zoo
