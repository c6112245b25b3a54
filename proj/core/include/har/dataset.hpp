#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "har/civil_time.hpp"

namespace har {

// One binary sensor being active over [start, end). Intervals are
// half-open; a zero-length interval activates nothing.
struct SensorEvent {
  size_t sensor_id = 0;
  Timestamp start = 0;
  Timestamp end = 0;
};

// One annotated activity interval, also half-open. Activity id 0 is the
// Idle class and never appears in input files.
struct ActivityAnnotation {
  size_t activity_id = 0;
  Timestamp start = 0;
  Timestamp end = 0;
};

struct HouseMeta {
  std::string name;
  size_t sensor_count = 0;
  size_t activity_count = 0;  // including Idle (index 0)
  std::vector<std::string> sensor_names;
  std::vector<std::string> activity_names;  // [0] = "Idle"
};

enum class EncodingKind : uint8_t { Raw = 0, LastFired = 1 };

const char* encoding_name(EncodingKind k);
EncodingKind encoding_from_name(const std::string& name);

// One day of discretized data: 1440 minute slices, binary features per
// sensor, one activity label per slice (0 = Idle).
struct DayGrid {
  Date date = 0;
  size_t n_sensors = 0;
  std::vector<uint8_t> features;  // kMinutesPerDay x n_sensors, row-major
  std::vector<int> labels;        // kMinutesPerDay

  DayGrid() = default;
  DayGrid(Date d, size_t sensors)
      : date(d),
        n_sensors(sensors),
        features(static_cast<size_t>(kMinutesPerDay) * sensors, 0),
        labels(kMinutesPerDay, 0) {}

  uint8_t at(size_t t, size_t s) const { return features[t * n_sensors + s]; }
  void set(size_t t, size_t s, uint8_t v) { features[t * n_sensors + s] = v; }
  const uint8_t* slice(size_t t) const { return features.data() + t * n_sensors; }
};

// A borrowed T x N window of binary features.
struct FeatureWindow {
  const uint8_t* data = nullptr;
  size_t steps = 0;
  size_t sensors = 0;
  const uint8_t* slice(size_t t) const { return data + t * sensors; }
};

inline FeatureWindow window_of(const DayGrid& day, size_t t0, size_t t1) {
  return {day.features.data() + t0 * day.n_sensors, t1 - t0, day.n_sensors};
}
inline FeatureWindow window_of(const DayGrid& day) {
  return window_of(day, 0, kMinutesPerDay);
}

// ---- text formats -------------------------------------------------------
// Events:      START<TAB>END<TAB>SENSOR_ID
// Annotations: START<TAB>END<TAB>ACTIVITY_ID
// Meta:        sensor<TAB>ID<TAB>NAME | activity<TAB>ID<TAB>NAME
// Timestamps "YYYY-MM-DD HH:MM:SS"; '#' starts a comment line; blank lines
// are skipped. Errors name the offending line.

HouseMeta parse_meta(std::istream& in, const std::string& house_name,
                     const std::string& filename = "<meta>");
std::vector<SensorEvent> parse_events(std::istream& in, const HouseMeta& meta,
                                      const std::string& filename = "<events>");
std::vector<ActivityAnnotation> parse_annotations(std::istream& in, const HouseMeta& meta,
                                                  const std::string& filename = "<annotations>");

void write_meta_file(std::ostream& out, const HouseMeta& meta);
void write_events_file(std::ostream& out, const std::vector<SensorEvent>& events);
void write_annotations_file(std::ostream& out, const std::vector<ActivityAnnotation>& anns);

// ---- discretization ------------------------------------------------------

// Raw encoding: bit (t, s) is 1 iff an event of sensor s overlaps minute
// slice [t, t+1) of the day by a positive duration. Labels are left Idle.
DayGrid discretize_raw(const std::vector<SensorEvent>& events, Date day,
                       const HouseMeta& meta);

// Per-slice labels: the annotation with the largest overlap wins; ties go
// to the earlier start, then the lower activity id. Uncovered slices are
// Idle.
std::vector<int> label_slices(const std::vector<ActivityAnnotation>& anns, Date day,
                              const HouseMeta& meta);

// Last-fired encoding. A sensor fires on a 0->1 edge of its raw signal
// (being active at t=0 counts). Row t holds a single 1 in the column of
// the most recent firing; simultaneous firings resolve to the lowest
// sensor index. Rows before the first firing are zero unless carry_in
// names the sensor that was last fired before the day.
DayGrid encode_last_fired(const DayGrid& raw,
                          std::optional<size_t> carry_in = std::nullopt);

// Applies the chosen encoding (Raw is the identity).
DayGrid encode_day(const DayGrid& raw, EncodingKind kind,
                   std::optional<size_t> carry_in = std::nullopt);

// All calendar days touched by at least one event or annotation, sorted.
std::vector<Date> collect_days(const std::vector<SensorEvent>& events,
                               const std::vector<ActivityAnnotation>& anns);

// ---- whole-house loading -------------------------------------------------

struct HouseData {
  HouseMeta meta;
  std::vector<DayGrid> days;  // raw encoding, sorted by date
  size_t n_events = 0;
  size_t n_annotations = 0;
};

HouseData load_house(const std::string& events_path, const std::string& annotations_path,
                     const std::string& meta_path, const std::string& house_name);

HouseData build_house(HouseMeta meta, const std::vector<SensorEvent>& events,
                      const std::vector<ActivityAnnotation>& anns);

// ---- folds ----------------------------------------------------------------

// Leave-one-day-out fold: indices into the day list.
struct Fold {
  std::vector<size_t> train;
  size_t test = 0;
};

// One fold per day. Requires >= 2 days and distinct dates.
std::vector<Fold> make_folds(const std::vector<DayGrid>& days);

// ---- synthetic fixture -----------------------------------------------------

// Deterministic generator: each day is partitioned into activity segments
// (lengths uniform in [min_segment, max_segment] minutes) and sensors are
// emitted minute-by-minute from a per-activity Bernoulli profile. The
// default profile is injective: activity a drives exactly sensor a-1, so
// the label is a function of the last-fired (and of the raw) input.
struct SynthConfig {
  size_t sensors = 10;
  size_t activities = 6;  // annotated activities, excluding Idle
  size_t days = 5;
  uint64_t seed = 1;
  Date start_date = 13939;  // 2008-03-01
  int min_segment = 30;
  int max_segment = 120;
  double profile_on = 1.0;   // P(mapped sensor active | its activity)
  double profile_off = 0.0;  // P(other sensor active | activity)
  std::string house_name = "synth";
};

struct SynthData {
  HouseMeta meta;
  std::vector<SensorEvent> events;
  std::vector<ActivityAnnotation> annotations;
  std::vector<Date> dates;
};

SynthData synth_dataset(const SynthConfig& cfg);

// Grids built from the synthetic events through the regular discretize /
// label pipeline. meta fixes sensor and activity counts.
std::vector<DayGrid> synth_house(const HouseMeta& meta, size_t days, uint64_t seed);

HouseMeta synth_meta(size_t sensors, size_t activities, const std::string& name = "synth");

}  // namespace har
