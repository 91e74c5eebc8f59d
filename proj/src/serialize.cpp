#include "uavtrack/serialize.hpp"

#include <fstream>

#include "uavtrack/format.hpp"

namespace uavtrack {

using nlohmann::json;

json to_json(const MetricsReport& r) {
  return json{{"tp", r.counts.tp},
              {"fp", r.counts.fp},
              {"fn", r.counts.fn},
              {"excluded", r.counts.excluded},
              {"precision", r.precision},
              {"recall", r.recall},
              {"f_score", r.f_score},
              {"iou_threshold", r.iou_threshold}};
}

MetricsReport metrics_from_json(const json& j) {
  MetricsReport r;
  r.counts.tp = j.at("tp").get<std::int64_t>();
  r.counts.fp = j.at("fp").get<std::int64_t>();
  r.counts.fn = j.at("fn").get<std::int64_t>();
  r.counts.excluded = j.at("excluded").get<std::int64_t>();
  r.precision = j.at("precision").get<double>();
  r.recall = j.at("recall").get<double>();
  r.f_score = j.at("f_score").get<double>();
  r.iou_threshold = j.at("iou_threshold").get<double>();
  return r;
}

std::string metrics_csv_header() { return "tp,fp,fn,excluded,precision,recall,f_score,iou_threshold"; }

std::string metrics_csv_row(const MetricsReport& r) {
  return std::to_string(r.counts.tp) + ',' + std::to_string(r.counts.fp) + ',' +
         std::to_string(r.counts.fn) + ',' + std::to_string(r.counts.excluded) + ',' +
         format_number(r.precision) + ',' + format_number(r.recall) + ',' + format_number(r.f_score) +
         ',' + format_number(r.iou_threshold);
}

json to_json(const Distribution& d) {
  return json{{"count", d.count}, {"min", d.min},   {"median", d.median},
              {"mean", d.mean},   {"p95", d.p95},   {"max", d.max}};
}

json to_json(const TimingSummary& t) {
  return json{{"init_ms", t.init ? to_json(*t.init) : json(nullptr)},
              {"update_ms", t.update ? to_json(*t.update) : json(nullptr)},
              {"total_ms", t.total_ms},
              {"average_ms", t.average_ms},
              {"frames", t.frames}};
}

json to_json(const FrameRecord& r) {
  json j{{"frame", r.frame_index},
         {"source", std::string(to_string(r.source))},
         {"detect_attempted", r.detect_attempted},
         {"detect_outcome", std::string(to_string(r.detect_outcome))},
         {"detect_ms", r.detect_ms}};
  j["box"] = r.box ? json::array({r.box->x, r.box->y, r.box->w, r.box->h}) : json(nullptr);
  j["init_ms"] = r.init_ms ? json(*r.init_ms) : json(nullptr);
  j["update_ms"] = r.update_ms ? json(*r.update_ms) : json(nullptr);
  return j;
}

void write_trace_jsonl(const std::filesystem::path& path, const RunTrace& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const auto& r : trace.records) out << to_json(r).dump() << '\n';
}

void write_predictions_csv(const std::filesystem::path& path, const RunTrace& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "frame,x,y,width,height,source\n";
  for (const auto& r : trace.records) {
    out << r.frame_index << ',';
    if (r.box) {
      out << format_number(r.box->x) << ',' << format_number(r.box->y) << ','
          << format_number(r.box->w) << ',' << format_number(r.box->h);
    } else {
      out << "-1,-1,-1,-1";
    }
    out << ',' << to_string(r.source) << '\n';
  }
}

Predictions read_predictions_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw PredictionsError("cannot open " + path.string(), 0);
  Predictions p;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line.rfind("frame", 0) == 0) continue;
    std::vector<std::string_view> f;
    std::string_view rest(line);
    for (;;) {
      const auto c = rest.find(',');
      f.push_back(rest.substr(0, c));
      if (c == std::string_view::npos) break;
      rest.remove_prefix(c + 1);
    }
    const auto fail = [&](const std::string& why) {
      return PredictionsError(path.string() + ":" + std::to_string(line_no) + ": " + why, line_no);
    };
    if (f.size() != 6) throw fail("expected 6 fields");
    const auto idx = parse_int(f[0]);
    if (!idx || *idx != static_cast<long long>(p.boxes.size())) throw fail("frame index out of sequence");
    double v[4];
    for (int k = 0; k < 4; ++k) {
      const auto d = parse_double(f[static_cast<std::size_t>(k) + 1]);
      if (!d) throw fail("bad number");
      v[k] = *d;
    }
    const auto src = parse_frame_source(f[5]);
    if (!src) throw fail("unknown source '" + std::string(f[5]) + "'");
    const bool absent = v[2] == -1.0 && v[3] == -1.0;
    if (absent != (*src == FrameSource::None)) throw fail("box presence does not match source");
    if (!absent && (v[2] <= 0.0 || v[3] <= 0.0)) throw fail("invalid box size");
    p.boxes.push_back(absent ? std::nullopt : std::optional<BoundingBox>(BoundingBox{v[0], v[1], v[2], v[3]}));
    p.sources.push_back(*src);
  }
  return p;
}

}  // namespace uavtrack
