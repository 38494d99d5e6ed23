#pragma once

// Per-slot user positions: straight-line waypoint motion on the open grid, or
// positions replayed from a trace file.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <vector>

#include "edgeplace/model.hpp"
#include "edgeplace/random.hpp"

namespace edgeplace {

enum class UserKind { pedestrian, driver };

struct MobilityConfig {
  double pedestrian_fraction = 6.0 / 7.0;
  double pedestrian_speed_min = 0.5;
  double pedestrian_speed_max = 1.5;
  double driver_speed_min = 2.7;
  double driver_speed_max = 11.1;
  double slot_length_s = 300.0;

  bool operator==(const MobilityConfig&) const = default;
  void validate() const;
};

struct UserState {
  UserId index = 0;
  Point position_m;
  double speed_m_per_s = 0.0;
  UserKind kind = UserKind::pedestrian;
  Point waypoint_m;
};

/// Uniform position and waypoint, kind by pedestrian_fraction, speed uniform
/// in the kind's range. Speed stays fixed for the whole run.
UserState synthesize_user(UserId index, const GridMap& map, const MobilityConfig& config,
                          SplitMix64& rng);

std::vector<UserState> synthesize_users(std::size_t n, const GridMap& map,
                                        const MobilityConfig& config, SplitMix64& rng);

/// Advances one slot: travels speed * slot_length_s toward the waypoint,
/// drawing a fresh uniform waypoint whenever the current one is reached.
UserState step_user(const UserState& user, const GridMap& map, double slot_length_s,
                    SplitMix64& rng);

/// Uniform in [1, 1.35].
double draw_perturbation(SplitMix64& rng);

/// Positions per (slot, user) read from a `slot,user,x_m,y_m` CSV.
struct Trace {
  std::size_t users = 0;
  std::size_t horizon = 0;
  std::vector<Point> positions;  // slot-major

  Point at(std::size_t slot, UserId user) const { return positions[slot * users + user]; }
};

/// Throws TraceParseError with the offending line number.
Trace parse_trace(std::istream& in, const GridMap& map);
Trace load_trace(const std::filesystem::path& path, const GridMap& map);
void write_trace(std::ostream& out, const Trace& trace);

/// Source of user positions, one call per slot starting at slot 0.
class PositionSource {
 public:
  virtual ~PositionSource() = default;
  virtual std::size_t users() const = 0;
  virtual std::vector<Point> next() = 0;
};

/// Waypoint motion with one RNG substream per user derived from the seed.
class SyntheticMobility final : public PositionSource {
 public:
  SyntheticMobility(std::size_t n, const GridMap& map, const MobilityConfig& config,
                    std::uint64_t seed);
  std::size_t users() const override { return users_.size(); }
  std::vector<Point> next() override;
  const std::vector<UserState>& states() const { return users_; }

 private:
  GridMap map_;
  MobilityConfig config_;
  std::vector<UserState> users_;
  std::vector<SplitMix64> streams_;
  bool started_ = false;
};

class TraceMobility final : public PositionSource {
 public:
  explicit TraceMobility(Trace trace) : trace_(std::move(trace)) {}
  std::size_t users() const override { return trace_.users; }
  std::vector<Point> next() override;

 private:
  Trace trace_;
  std::size_t slot_ = 0;
};

}  // namespace edgeplace
