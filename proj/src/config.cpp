#include "uavtrack/config.hpp"

#include <fstream>
#include <functional>
#include <sstream>

#include "uavtrack/format.hpp"

namespace uavtrack {
namespace {

struct Binding {
  std::function<void(ToolConfig&, std::string_view)> set;
  std::function<std::string(const ToolConfig&)> get;
};

template <class T>
Binding bind(T ToolConfig::*section, auto T::*member) {
  using V = std::remove_reference_t<decltype(std::declval<T&>().*member)>;
  Binding b;
  b.set = [section, member](ToolConfig& c, std::string_view v) {
    if constexpr (std::is_same_v<V, int>) {
      auto p = parse_int(v);
      if (!p) throw ConfigError("expected an integer, got '" + std::string(v) + "'");
      (c.*section).*member = static_cast<int>(*p);
    } else if constexpr (std::is_same_v<V, std::uint64_t>) {
      auto p = parse_int(v);
      if (!p || *p < 0) throw ConfigError("expected a non-negative integer, got '" + std::string(v) + "'");
      (c.*section).*member = static_cast<std::uint64_t>(*p);
    } else if constexpr (std::is_same_v<V, std::vector<double>>) {
      std::vector<double> out;
      std::string s(v);
      std::stringstream ss(s);
      std::string item;
      while (std::getline(ss, item, ',')) {
        auto p = parse_double(item);
        if (!p) throw ConfigError("expected a comma-separated number list, got '" + s + "'");
        out.push_back(*p);
      }
      (c.*section).*member = out;
    } else {
      auto p = parse_double(v);
      if (!p) throw ConfigError("expected a number, got '" + std::string(v) + "'");
      (c.*section).*member = *p;
    }
  };
  b.get = [section, member](const ToolConfig& c) -> std::string {
    const auto& v = (c.*section).*member;
    if constexpr (std::is_same_v<V, std::vector<double>>) {
      std::string s;
      for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_number(v[i]);
      return s;
    } else if constexpr (std::is_same_v<V, double>) {
      return format_number(v);
    } else {
      return std::to_string(v);
    }
  };
  return b;
}

// Tracker params live one level deeper (ToolConfig::trackers.<kind>).
template <class P>
Binding bind_tracker(P TrackerParams::*kind, auto P::*member) {
  Binding b;
  b.set = [kind, member](ToolConfig& c, std::string_view v) {
    using V = std::remove_reference_t<decltype(std::declval<P&>().*member)>;
    if constexpr (std::is_same_v<V, int>) {
      auto p = parse_int(v);
      if (!p) throw ConfigError("expected an integer, got '" + std::string(v) + "'");
      (c.trackers.*kind).*member = static_cast<int>(*p);
    } else {
      auto p = parse_double(v);
      if (!p) throw ConfigError("expected a number, got '" + std::string(v) + "'");
      (c.trackers.*kind).*member = *p;
    }
  };
  b.get = [kind, member](const ToolConfig& c) -> std::string {
    const auto& v = (c.trackers.*kind).*member;
    if constexpr (std::is_same_v<std::remove_cvref_t<decltype(v)>, int>) return std::to_string(v);
    else return format_number(v);
  };
  return b;
}

const std::map<std::string, Binding, std::less<>>& bindings() {
  static const std::map<std::string, Binding, std::less<>> table = {
      {"mosse.window", bind_tracker(&TrackerParams::mosse, &MosseParams::window)},
      {"mosse.sigma_target", bind_tracker(&TrackerParams::mosse, &MosseParams::sigma_target)},
      {"mosse.learning_rate", bind_tracker(&TrackerParams::mosse, &MosseParams::learning_rate)},
      {"mosse.reg_eps", bind_tracker(&TrackerParams::mosse, &MosseParams::reg_eps)},
      {"mosse.psr_threshold", bind_tracker(&TrackerParams::mosse, &MosseParams::psr_threshold)},
      {"mosse.init_perturbations", bind_tracker(&TrackerParams::mosse, &MosseParams::init_perturbations)},
      {"kcf.padding", bind_tracker(&TrackerParams::kcf, &KcfParams::padding)},
      {"kcf.kernel_sigma", bind_tracker(&TrackerParams::kcf, &KcfParams::kernel_sigma)},
      {"kcf.lambda", bind_tracker(&TrackerParams::kcf, &KcfParams::lambda)},
      {"kcf.output_sigma_factor", bind_tracker(&TrackerParams::kcf, &KcfParams::output_sigma_factor)},
      {"kcf.interp_factor", bind_tracker(&TrackerParams::kcf, &KcfParams::interp_factor)},
      {"medianflow.grid", bind_tracker(&TrackerParams::medianflow, &MedianFlowParams::grid)},
      {"medianflow.pyramid_levels", bind_tracker(&TrackerParams::medianflow, &MedianFlowParams::pyramid_levels)},
      {"medianflow.lk_window", bind_tracker(&TrackerParams::medianflow, &MedianFlowParams::lk_window)},
      {"medianflow.lk_iterations", bind_tracker(&TrackerParams::medianflow, &MedianFlowParams::lk_iterations)},
      {"medianflow.fb_error_max", bind_tracker(&TrackerParams::medianflow, &MedianFlowParams::fb_error_max)},
      {"medianflow.ncc_patch", bind_tracker(&TrackerParams::medianflow, &MedianFlowParams::ncc_patch)},
      {"oracle.miss_prob", bind(&ToolConfig::oracle, &OracleConfig::miss_prob)},
      {"oracle.multi_prob", bind(&ToolConfig::oracle, &OracleConfig::multi_prob)},
      {"oracle.jitter_sigma", bind(&ToolConfig::oracle, &OracleConfig::jitter_sigma)},
      {"oracle.latency_ms", bind(&ToolConfig::oracle, &OracleConfig::latency_ms)},
      {"ncc.scales", bind(&ToolConfig::ncc, &NccSettings::scales)},
      {"ncc.score_threshold", bind(&ToolConfig::ncc, &NccSettings::score_threshold)},
      {"ncc.nms_jaccard", bind(&ToolConfig::ncc, &NccSettings::nms_jaccard)},
      {"ncc.stride", bind(&ToolConfig::ncc, &NccSettings::stride)},
      {"ncc.latency_ms", bind(&ToolConfig::ncc, &NccSettings::latency_ms)},
      {"sim.mosse.init_ms", bind(&ToolConfig::mosse_cost, &TrackerCosts::init_ms)},
      {"sim.mosse.update_ms", bind(&ToolConfig::mosse_cost, &TrackerCosts::update_ms)},
      {"sim.kcf.init_ms", bind(&ToolConfig::kcf_cost, &TrackerCosts::init_ms)},
      {"sim.kcf.update_ms", bind(&ToolConfig::kcf_cost, &TrackerCosts::update_ms)},
      {"sim.medianflow.init_ms", bind(&ToolConfig::medianflow_cost, &TrackerCosts::init_ms)},
      {"sim.medianflow.update_ms", bind(&ToolConfig::medianflow_cost, &TrackerCosts::update_ms)},
  };
  return table;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

const TrackerCosts& ToolConfig::simulated_cost(TrackerKind k) const {
  switch (k) {
    case TrackerKind::Mosse: return mosse_cost;
    case TrackerKind::Kcf: return kcf_cost;
    case TrackerKind::MedianFlow: return medianflow_cost;
  }
  return mosse_cost;
}

TrackerCosts& ToolConfig::simulated_cost(TrackerKind k) {
  return const_cast<TrackerCosts&>(std::as_const(*this).simulated_cost(k));
}

void ToolConfig::set(std::string_view key, std::string_view value) {
  const auto& table = bindings();
  auto it = table.find(key);
  if (it == table.end()) throw ConfigError("unknown config key '" + std::string(key) + "'");
  try {
    it->second.set(*this, trim(value));
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(key) + ": " + e.what());
  }
}

void ToolConfig::validate() const {
  try {
    trackers.mosse.validate();
    trackers.kcf.validate();
    trackers.medianflow.validate();
    oracle.validate();
    for (auto k : kAllTrackers) {
      const auto& c = simulated_cost(k);
      if (!(c.init_ms >= 0.0 && c.update_ms >= 0.0)) throw std::invalid_argument("sim costs must be >= 0");
    }
    if (ncc.scales.empty() || ncc.stride < 1 || !(ncc.score_threshold > 0.0 && ncc.score_threshold < 1.0)) {
      throw std::invalid_argument("ncc settings out of range");
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::map<std::string, std::string> ToolConfig::entries() const {
  std::map<std::string, std::string> out;
  for (const auto& [k, b] : bindings()) out.emplace(k, b.get(*this));
  return out;
}

ToolConfig parse_config(std::string_view text, ToolConfig base) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key=value");
    }
    try {
      base.set(trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  base.validate();
  return base;
}

ToolConfig load_config(const std::filesystem::path& path, ToolConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str(), std::move(base));
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

}  // namespace uavtrack
