#include "har/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>

#include "har/error.hpp"
#include "har/rng.hpp"

namespace har {

const char* encoding_name(EncodingKind k) {
  return k == EncodingKind::Raw ? "raw" : "last-fired";
}

EncodingKind encoding_from_name(const std::string& name) {
  if (name == "raw") return EncodingKind::Raw;
  if (name == "last-fired" || name == "lastfired") return EncodingKind::LastFired;
  throw InputError("unknown encoding '" + name + "' (expected raw or last-fired)");
}

namespace {

struct Line {
  size_t number;
  std::vector<std::string> fields;
};

// Tab-separated content lines; '#' comments and blank lines skipped.
std::vector<Line> read_lines(std::istream& in, const std::string& filename) {
  std::vector<Line> out;
  std::string raw;
  size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (raw.empty() || raw[0] == '#') continue;
    Line line{number, {}};
    size_t pos = 0;
    while (true) {
      size_t tab = raw.find('\t', pos);
      if (tab == std::string::npos) {
        line.fields.push_back(raw.substr(pos));
        break;
      }
      line.fields.push_back(raw.substr(pos, tab - pos));
      pos = tab + 1;
    }
    out.push_back(std::move(line));
  }
  if (in.bad()) throw InputError(filename + ": read failure");
  return out;
}

[[noreturn]] void fail_at(const std::string& filename, size_t line, const std::string& msg) {
  throw InputError(filename + ":" + std::to_string(line) + ": " + msg);
}

size_t parse_index(const std::string& text, const std::string& filename, size_t line,
                   const char* what) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
    fail_at(filename, line, std::string("bad ") + what + " '" + text + "'");
  try {
    return std::stoull(text);
  } catch (const std::exception&) {
    fail_at(filename, line, std::string("bad ") + what + " '" + text + "'");
  }
}

}  // namespace

HouseMeta parse_meta(std::istream& in, const std::string& house_name,
                     const std::string& filename) {
  std::map<size_t, std::string> sensors, activities;
  for (const Line& line : read_lines(in, filename)) {
    if (line.fields.size() != 3)
      fail_at(filename, line.number, "expected KIND<TAB>ID<TAB>NAME");
    const std::string& kind = line.fields[0];
    const size_t id = parse_index(line.fields[1], filename, line.number, "id");
    const std::string& name = line.fields[2];
    if (name.empty()) fail_at(filename, line.number, "empty name");
    if (kind == "sensor") {
      if (!sensors.emplace(id, name).second)
        fail_at(filename, line.number, "duplicate sensor id " + std::to_string(id));
    } else if (kind == "activity") {
      if (id == 0) fail_at(filename, line.number, "activity id 0 is reserved for Idle");
      if (!activities.emplace(id, name).second)
        fail_at(filename, line.number, "duplicate activity id " + std::to_string(id));
    } else {
      fail_at(filename, line.number, "unknown record kind '" + kind + "'");
    }
  }
  HouseMeta meta;
  meta.name = house_name;
  meta.sensor_count = sensors.size();
  meta.sensor_names.resize(sensors.size());
  for (const auto& [id, name] : sensors) {
    if (id >= meta.sensor_count)
      throw InputError(filename + ": sensor ids must cover 0.." +
                       std::to_string(meta.sensor_count - 1) + " (got " +
                       std::to_string(id) + ")");
    meta.sensor_names[id] = name;
  }
  meta.activity_count = activities.size() + 1;
  meta.activity_names.assign(meta.activity_count, "");
  meta.activity_names[0] = "Idle";
  for (const auto& [id, name] : activities) {
    if (id >= meta.activity_count)
      throw InputError(filename + ": activity ids must cover 1.." +
                       std::to_string(meta.activity_count - 1) + " (got " +
                       std::to_string(id) + ")");
    meta.activity_names[id] = name;
  }
  if (meta.sensor_count == 0) throw InputError(filename + ": no sensors defined");
  if (meta.activity_count < 2) throw InputError(filename + ": no activities defined");
  return meta;
}

namespace {

void set_id(SensorEvent& e, size_t id) { e.sensor_id = id; }
void set_id(ActivityAnnotation& a, size_t id) { a.activity_id = id; }

template <typename Record>
std::vector<Record> parse_interval_file(std::istream& in, const std::string& filename,
                                        const char* id_kind, size_t id_limit,
                                        bool id_min_one) {
  std::vector<Record> out;
  for (const Line& line : read_lines(in, filename)) {
    if (line.fields.size() != 3)
      fail_at(filename, line.number, std::string("expected START<TAB>END<TAB>") + id_kind);
    Record rec;
    try {
      rec.start = parse_timestamp(line.fields[0]);
      rec.end = parse_timestamp(line.fields[1]);
    } catch (const InputError& e) {
      fail_at(filename, line.number, e.what());
    }
    size_t id = parse_index(line.fields[2], filename, line.number, id_kind);
    if (id_min_one && id == 0)
      fail_at(filename, line.number, std::string(id_kind) + " 0 is reserved for Idle");
    if (id >= id_limit)
      fail_at(filename, line.number,
              std::string("unknown ") + id_kind + " " + std::to_string(id));
    if (rec.end < rec.start) fail_at(filename, line.number, "end before start");
    set_id(rec, id);
    out.push_back(rec);
  }
  return out;
}

}  // namespace

std::vector<SensorEvent> parse_events(std::istream& in, const HouseMeta& meta,
                                      const std::string& filename) {
  return parse_interval_file<SensorEvent>(in, filename, "sensor id", meta.sensor_count,
                                          false);
}

std::vector<ActivityAnnotation> parse_annotations(std::istream& in, const HouseMeta& meta,
                                                  const std::string& filename) {
  return parse_interval_file<ActivityAnnotation>(in, filename, "activity id",
                                                 meta.activity_count, true);
}

void write_meta_file(std::ostream& out, const HouseMeta& meta) {
  out << "# kind\tid\tname\n";
  for (size_t s = 0; s < meta.sensor_count; ++s)
    out << "sensor\t" << s << "\t" << meta.sensor_names[s] << "\n";
  for (size_t a = 1; a < meta.activity_count; ++a)
    out << "activity\t" << a << "\t" << meta.activity_names[a] << "\n";
}

void write_events_file(std::ostream& out, const std::vector<SensorEvent>& events) {
  out << "# start\tend\tsensor\n";
  for (const SensorEvent& e : events)
    out << format_timestamp(e.start) << "\t" << format_timestamp(e.end) << "\t"
        << e.sensor_id << "\n";
}

void write_annotations_file(std::ostream& out, const std::vector<ActivityAnnotation>& anns) {
  out << "# start\tend\tactivity\n";
  for (const ActivityAnnotation& a : anns)
    out << format_timestamp(a.start) << "\t" << format_timestamp(a.end) << "\t"
        << a.activity_id << "\n";
}

DayGrid discretize_raw(const std::vector<SensorEvent>& events, Date day,
                       const HouseMeta& meta) {
  DayGrid grid(day, meta.sensor_count);
  const Timestamp ds = day_start(day);
  const Timestamp de = ds + kSecondsPerDay;
  for (const SensorEvent& e : events) {
    const Timestamp s = std::max(e.start, ds);
    const Timestamp t = std::min(e.end, de);
    if (t <= s) continue;  // no positive overlap with this day
    const size_t first = static_cast<size_t>((s - ds) / 60);
    const size_t last = static_cast<size_t>((t - ds - 1) / 60);  // t-1: half-open end
    for (size_t m = first; m <= last; ++m) grid.set(m, e.sensor_id, 1);
  }
  return grid;
}

std::vector<int> label_slices(const std::vector<ActivityAnnotation>& anns, Date day,
                              const HouseMeta& meta) {
  std::vector<int> labels(kMinutesPerDay, 0);
  const Timestamp ds = day_start(day);
  std::vector<const ActivityAnnotation*> in_day;
  for (const ActivityAnnotation& a : anns) {
    if (a.activity_id == 0 || a.activity_id >= meta.activity_count)
      throw Error("label_slices: activity id " + std::to_string(a.activity_id) +
                  " out of range");
    if (a.end > ds && a.start < ds + kSecondsPerDay) in_day.push_back(&a);
  }
  for (int m = 0; m < kMinutesPerDay; ++m) {
    const Timestamp slice_start = ds + static_cast<Timestamp>(m) * 60;
    const Timestamp slice_end = slice_start + 60;
    int64_t best_overlap = 0;
    const ActivityAnnotation* best = nullptr;
    for (const ActivityAnnotation* a : in_day) {
      const int64_t ov = std::min(a->end, slice_end) - std::max(a->start, slice_start);
      if (ov <= 0) continue;
      // largest overlap; ties: earlier start, then lower activity id
      if (ov > best_overlap || (ov == best_overlap && best != nullptr &&
                                (a->start < best->start ||
                                 (a->start == best->start &&
                                  a->activity_id < best->activity_id)))) {
        best_overlap = ov;
        best = a;
      }
    }
    labels[m] = best ? static_cast<int>(best->activity_id) : 0;
  }
  return labels;
}

DayGrid encode_last_fired(const DayGrid& raw, std::optional<size_t> carry_in) {
  DayGrid out(raw.date, raw.n_sensors);
  out.labels = raw.labels;
  std::optional<size_t> current = carry_in;
  for (int t = 0; t < kMinutesPerDay; ++t) {
    // lowest-index sensor with a rising edge in this slice
    for (size_t s = 0; s < raw.n_sensors; ++s) {
      if (raw.at(t, s) && (t == 0 || !raw.at(t - 1, s))) {
        current = s;
        break;
      }
    }
    if (current) out.set(t, *current, 1);
  }
  return out;
}

DayGrid encode_day(const DayGrid& raw, EncodingKind kind, std::optional<size_t> carry_in) {
  return kind == EncodingKind::Raw ? raw : encode_last_fired(raw, carry_in);
}

std::vector<Date> collect_days(const std::vector<SensorEvent>& events,
                               const std::vector<ActivityAnnotation>& anns) {
  std::set<Date> days;
  auto add_span = [&days](Timestamp s, Timestamp e) {
    if (e <= s) return;
    for (Date d = date_of(s); d <= date_of(e - 1); ++d) days.insert(d);
  };
  for (const SensorEvent& e : events) add_span(e.start, e.end);
  for (const ActivityAnnotation& a : anns) add_span(a.start, a.end);
  return {days.begin(), days.end()};
}

HouseData build_house(HouseMeta meta, const std::vector<SensorEvent>& events,
                      const std::vector<ActivityAnnotation>& anns) {
  HouseData data;
  data.meta = std::move(meta);
  data.n_events = events.size();
  data.n_annotations = anns.size();
  for (Date day : collect_days(events, anns)) {
    DayGrid grid = discretize_raw(events, day, data.meta);
    grid.labels = label_slices(anns, day, data.meta);
    data.days.push_back(std::move(grid));
  }
  return data;
}

HouseData load_house(const std::string& events_path, const std::string& annotations_path,
                     const std::string& meta_path, const std::string& house_name) {
  std::ifstream meta_in(meta_path);
  if (!meta_in) throw InputError("cannot open meta file '" + meta_path + "'");
  HouseMeta meta = parse_meta(meta_in, house_name, meta_path);

  std::ifstream ev_in(events_path);
  if (!ev_in) throw InputError("cannot open events file '" + events_path + "'");
  std::vector<SensorEvent> events = parse_events(ev_in, meta, events_path);

  std::ifstream an_in(annotations_path);
  if (!an_in) throw InputError("cannot open annotations file '" + annotations_path + "'");
  std::vector<ActivityAnnotation> anns = parse_annotations(an_in, meta, annotations_path);

  return build_house(std::move(meta), events, anns);
}

std::vector<Fold> make_folds(const std::vector<DayGrid>& days) {
  if (days.size() < 2)
    throw InputError("make_folds: need at least 2 days, got " + std::to_string(days.size()));
  std::set<Date> seen;
  for (const DayGrid& d : days)
    if (!seen.insert(d.date).second)
      throw InputError("make_folds: duplicate date " + format_date(d.date));
  std::vector<Fold> folds(days.size());
  for (size_t i = 0; i < days.size(); ++i) {
    folds[i].test = i;
    for (size_t j = 0; j < days.size(); ++j)
      if (j != i) folds[i].train.push_back(j);
  }
  return folds;
}

HouseMeta synth_meta(size_t sensors, size_t activities, const std::string& name) {
  HouseMeta meta;
  meta.name = name;
  meta.sensor_count = sensors;
  meta.activity_count = activities + 1;
  for (size_t s = 0; s < sensors; ++s) meta.sensor_names.push_back("s" + std::to_string(s));
  meta.activity_names.push_back("Idle");
  for (size_t a = 1; a <= activities; ++a)
    meta.activity_names.push_back("act" + std::to_string(a));
  return meta;
}

SynthData synth_dataset(const SynthConfig& cfg) {
  if (cfg.activities == 0 || cfg.sensors < cfg.activities)
    throw InputError("synth_dataset: need sensors >= activities >= 1");
  if (cfg.min_segment < 1 || cfg.max_segment < cfg.min_segment)
    throw InputError("synth_dataset: bad segment length range");
  SynthData data;
  data.meta = synth_meta(cfg.sensors, cfg.activities, cfg.house_name);
  Rng rng(cfg.seed);
  for (size_t d = 0; d < cfg.days; ++d) {
    const Date day = cfg.start_date + static_cast<Date>(d);
    const Timestamp ds = day_start(day);
    data.dates.push_back(day);

    // activity schedule covering the whole day
    std::vector<size_t> minute_activity(kMinutesPerDay);
    int t = 0;
    while (t < kMinutesPerDay) {
      const int span = static_cast<int>(cfg.max_segment - cfg.min_segment + 1);
      int len = cfg.min_segment + static_cast<int>(rng.below(span));
      len = std::min(len, kMinutesPerDay - t);
      const size_t act = 1 + rng.below(cfg.activities);
      data.annotations.push_back(
          {act, ds + static_cast<Timestamp>(t) * 60, ds + static_cast<Timestamp>(t + len) * 60});
      for (int m = t; m < t + len; ++m) minute_activity[m] = act;
      t += len;
    }

    // per-minute Bernoulli sensor draws, merged into interval events
    std::vector<std::vector<uint8_t>> active(cfg.sensors,
                                             std::vector<uint8_t>(kMinutesPerDay, 0));
    for (int m = 0; m < kMinutesPerDay; ++m) {
      const size_t mapped = minute_activity[m] - 1;  // activity a -> sensor a-1
      for (size_t s = 0; s < cfg.sensors; ++s) {
        const double p = s == mapped ? cfg.profile_on : cfg.profile_off;
        if (rng.bernoulli(p)) active[s][m] = 1;
      }
    }
    for (size_t s = 0; s < cfg.sensors; ++s) {
      int m = 0;
      while (m < kMinutesPerDay) {
        if (!active[s][m]) {
          ++m;
          continue;
        }
        int end = m;
        while (end < kMinutesPerDay && active[s][end]) ++end;
        data.events.push_back({s, ds + static_cast<Timestamp>(m) * 60,
                               ds + static_cast<Timestamp>(end) * 60});
        m = end;
      }
    }
  }
  std::sort(data.events.begin(), data.events.end(),
            [](const SensorEvent& a, const SensorEvent& b) {
              return std::tie(a.start, a.end, a.sensor_id) <
                     std::tie(b.start, b.end, b.sensor_id);
            });
  return data;
}

std::vector<DayGrid> synth_house(const HouseMeta& meta, size_t days, uint64_t seed) {
  SynthConfig cfg;
  cfg.sensors = meta.sensor_count;
  cfg.activities = meta.activity_count - 1;
  cfg.days = days;
  cfg.seed = seed;
  cfg.house_name = meta.name;
  SynthData data = synth_dataset(cfg);
  std::vector<DayGrid> grids;
  for (Date day : data.dates) {
    DayGrid grid = discretize_raw(data.events, day, meta);
    grid.labels = label_slices(data.annotations, day, meta);
    grids.push_back(std::move(grid));
  }
  return grids;
}

}  // namespace har
