#include "climkg/discovery.hpp"

namespace climkg::discovery {

TemporalConstraint after(dates::Day t) { return {TemporalKind::After, t, t}; }
TemporalConstraint before(dates::Day t) { return {TemporalKind::Before, t, t}; }

TemporalConstraint between(dates::Day a, dates::Day b) {
  if (a > b) throw ValidationError("between: " + dates::format_day(a) + " is after " + dates::format_day(b));
  return {TemporalKind::Between, a, b};
}

std::string TemporalConstraint::describe() const {
  switch (kind) {
    case TemporalKind::After: return "after " + dates::format_day(first);
    case TemporalKind::Before: return "before " + dates::format_day(first);
    case TemporalKind::Between: return "between " + dates::format_day(first) + " and " + dates::format_day(second);
  }
  return {};
}

bool temporal_overlap(const Interval& b, const TemporalConstraint& c) {
  // An open end extends to +infinity.
  auto end_at_least = [&](dates::Day t) { return !b.end || *b.end >= t; };
  switch (c.kind) {
    case TemporalKind::After: return end_at_least(c.first);
    case TemporalKind::Before: return b.start <= c.first;
    case TemporalKind::Between: return b.start <= c.second && end_at_least(c.first);
  }
  return false;
}

std::optional<Interval> dataset_bounds(const store::PropertyGraph& g, std::string_view dataset_id) {
  std::optional<Interval> hull;
  for (const auto* t : g.neighbors(dataset_id, "hasTemporalExtent", store::Direction::Out)) {
    auto field = [&](const char* key) -> std::string {
      auto it = t->properties.find(key);
      return it != t->properties.end() && it->second.is_string() ? it->second.get<std::string>() : std::string();
    };
    auto start_text = field("start");
    auto start = dates::parse_iso_day(start_text);
    if (!start) throw ValidationError("TemporalExtent " + t->id + ": unparseable start '" + start_text + "'");
    std::optional<dates::Day> end;
    auto end_text = field("end");
    auto ongoing = t->properties.find("ongoing");
    bool open = end_text.empty() || (ongoing != t->properties.end() && ongoing->second.is_boolean() &&
                                     ongoing->second.get<bool>());
    if (!end_text.empty()) {
      end = dates::parse_iso_day(end_text);
      if (!end) throw ValidationError("TemporalExtent " + t->id + ": unparseable end '" + end_text + "'");
    }
    if (open) end.reset();
    if (!hull) {
      hull = Interval{*start, end};
      continue;
    }
    hull->start = std::min(hull->start, *start);
    if (!end || !hull->end) {
      hull->end.reset();
    } else {
      hull->end = std::max(*hull->end, *end);
    }
  }
  return hull;
}

}  // namespace climkg::discovery
