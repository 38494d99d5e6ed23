#include "edgeplace/mobility.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "edgeplace/errors.hpp"

namespace edgeplace {

namespace {
constexpr std::uint64_t kMobilityTag = 0x4d4f42494c495459ULL;
}

void MobilityConfig::validate() const {
  if (!(pedestrian_fraction >= 0.0 && pedestrian_fraction <= 1.0))
    throw std::invalid_argument("users.pedestrian_fraction must lie in [0, 1]");
  if (!(pedestrian_speed_min > 0.0 && pedestrian_speed_min <= pedestrian_speed_max))
    throw std::invalid_argument("pedestrian speed range must be positive and ordered");
  if (!(driver_speed_min > 0.0 && driver_speed_min <= driver_speed_max))
    throw std::invalid_argument("driver speed range must be positive and ordered");
  if (!(slot_length_s > 0.0)) throw std::invalid_argument("slot length must be > 0");
}

namespace {
Point uniform_point(const GridMap& map, SplitMix64& rng) {
  const double x = rng.uniform(0.0, map.width_m());
  const double y = rng.uniform(0.0, map.height_m());
  return {x, y};
}
}  // namespace

UserState synthesize_user(UserId index, const GridMap& map, const MobilityConfig& config,
                          SplitMix64& rng) {
  UserState u;
  u.index = index;
  u.position_m = uniform_point(map, rng);
  u.kind = rng.uniform01() < config.pedestrian_fraction ? UserKind::pedestrian
                                                        : UserKind::driver;
  u.speed_m_per_s = u.kind == UserKind::pedestrian
                        ? rng.uniform(config.pedestrian_speed_min, config.pedestrian_speed_max)
                        : rng.uniform(config.driver_speed_min, config.driver_speed_max);
  u.waypoint_m = uniform_point(map, rng);
  return u;
}

std::vector<UserState> synthesize_users(std::size_t n, const GridMap& map,
                                        const MobilityConfig& config, SplitMix64& rng) {
  std::vector<UserState> users;
  users.reserve(n);
  for (UserId k = 0; k < n; ++k) users.push_back(synthesize_user(k, map, config, rng));
  return users;
}

UserState step_user(const UserState& user, const GridMap& map, double slot_length_s,
                    SplitMix64& rng) {
  UserState next = user;
  double budget = user.speed_m_per_s * slot_length_s;
  while (budget > 0.0) {
    const double dx = next.waypoint_m.x - next.position_m.x;
    const double dy = next.waypoint_m.y - next.position_m.y;
    const double dist = std::hypot(dx, dy);
    if (dist > budget) {
      next.position_m.x += dx / dist * budget;
      next.position_m.y += dy / dist * budget;
      break;
    }
    next.position_m = next.waypoint_m;
    budget -= dist;
    next.waypoint_m = uniform_point(map, rng);
  }
  // Guard the straight-line interpolation against rounding past the edges.
  next.position_m.x = std::clamp(next.position_m.x, 0.0, map.width_m());
  next.position_m.y = std::clamp(next.position_m.y, 0.0, map.height_m());
  return next;
}

double draw_perturbation(SplitMix64& rng) {
  return rng.uniform(kPerturbationMin, kPerturbationMax);
}

namespace {

template <typename T>
bool parse_number(std::string_view field, T& out) {
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

}  // namespace

Trace parse_trace(std::istream& in, const GridMap& map) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw TraceParseError(0, "no rows");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "slot,user,x_m,y_m")
    throw TraceParseError(line_no, "expected header 'slot,user,x_m,y_m'");

  struct Row {
    std::size_t slot, user;
    Point p;
    std::size_t line;
  };
  std::vector<Row> rows;
  std::size_t users = 0, horizon = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    for (auto comma = rest.find(','); comma != std::string_view::npos;
         comma = rest.find(',')) {
      fields.push_back(rest.substr(0, comma));
      rest.remove_prefix(comma + 1);
    }
    fields.push_back(rest);
    if (fields.size() != 4) throw TraceParseError(line_no, "expected 4 fields");
    Row r{};
    r.line = line_no;
    if (!parse_number(fields[0], r.slot) || !parse_number(fields[1], r.user) ||
        !parse_number(fields[2], r.p.x) || !parse_number(fields[3], r.p.y))
      throw TraceParseError(line_no, "malformed row '" + line + "'");
    if (!map.contains(r.p))
      throw TraceParseError(line_no, "position outside the map in row '" + line + "'");
    users = std::max(users, r.user + 1);
    horizon = std::max(horizon, r.slot + 1);
    rows.push_back(r);
  }
  if (rows.empty()) throw TraceParseError(0, "no rows");

  Trace t;
  t.users = users;
  t.horizon = horizon;
  t.positions.assign(users * horizon, Point{});
  std::vector<bool> seen(users * horizon, false);
  for (const auto& r : rows) {
    const std::size_t idx = r.slot * users + r.user;
    if (seen[idx])
      throw TraceParseError(r.line, "duplicate row for slot " + std::to_string(r.slot) +
                                        ", user " + std::to_string(r.user));
    seen[idx] = true;
    t.positions[idx] = r.p;
  }
  for (std::size_t idx = 0; idx < seen.size(); ++idx)
    if (!seen[idx])
      throw TraceParseError(0, "missing row for slot " + std::to_string(idx / users) +
                                   ", user " + std::to_string(idx % users));
  return t;
}

Trace load_trace(const std::filesystem::path& path, const GridMap& map) {
  std::ifstream in(path);
  if (!in) throw TraceParseError(0, "cannot open trace " + path.string());
  return parse_trace(in, map);
}

void write_trace(std::ostream& out, const Trace& trace) {
  out << "slot,user,x_m,y_m\n";
  char buf[64];
  for (std::size_t s = 0; s < trace.horizon; ++s)
    for (UserId k = 0; k < trace.users; ++k) {
      const Point p = trace.at(s, k);
      out << s << ',' << k << ',';
      auto r = std::to_chars(buf, buf + sizeof buf, p.x);
      out.write(buf, r.ptr - buf) << ',';
      r = std::to_chars(buf, buf + sizeof buf, p.y);
      out.write(buf, r.ptr - buf) << '\n';
    }
}

SyntheticMobility::SyntheticMobility(std::size_t n, const GridMap& map,
                                     const MobilityConfig& config, std::uint64_t seed)
    : map_(map), config_(config) {
  users_.reserve(n);
  streams_.reserve(n);
  for (UserId k = 0; k < n; ++k) {
    streams_.push_back(derive_stream(seed, kMobilityTag, k));
    users_.push_back(synthesize_user(k, map_, config_, streams_.back()));
  }
}

std::vector<Point> SyntheticMobility::next() {
  if (started_)
    for (UserId k = 0; k < users_.size(); ++k)
      users_[k] = step_user(users_[k], map_, config_.slot_length_s, streams_[k]);
  started_ = true;
  std::vector<Point> out;
  out.reserve(users_.size());
  for (const auto& u : users_) out.push_back(u.position_m);
  return out;
}

std::vector<Point> TraceMobility::next() {
  if (slot_ >= trace_.horizon)
    throw std::out_of_range("trace exhausted after " + std::to_string(trace_.horizon) +
                            " slots");
  std::vector<Point> out(trace_.positions.begin() + slot_ * trace_.users,
                         trace_.positions.begin() + (slot_ + 1) * trace_.users);
  ++slot_;
  return out;
}

}  // namespace edgeplace
